from __future__ import annotations

import numpy as np
import pytest

from topoqec.chain_complex import (
    Chain,
    CubicComplex,
    HomologyClass,
    boundary,
    build_surface,
    classify_cycle,
    coboundary,
    dual,
    torus_edge,
)


def _rand_chain(s, dim, rng, dual_=False):
    c = s.chain(dim, (), dual=dual_)
    return s.chain(dim, np.flatnonzero(rng.integers(0, 2, c.bits.size)), dual=dual_)


def test_counts():
    t = build_surface("torus", 3)
    assert (t.n_vertices, t.n_edges, t.n_faces) == (9, 18, 9)
    assert t.euler_characteristic == 0
    p = build_surface("planar", 5)
    assert p.n_edges == 41 and p.n_vertices == p.n_faces == 20
    g = build_surface("polygon_sphere", 4)
    assert (g.n_edges, g.n_faces, g.euler_characteristic) == (4, 2, 2)
    with pytest.raises(ValueError):
        build_surface("torus", 1)


def test_boundary_examples():
    t = build_surface("torus", 4)
    f = boundary(t, t.chain(2, [5]))
    assert f.support.size == 4
    e = boundary(t, t.chain(1, [torus_edge(4, 1, 1, 0)]))
    assert e.support.size == 2
    with pytest.raises(ValueError):
        boundary(t, t.chain(0, [0]))


@pytest.mark.parametrize("kind", ["torus", "planar", "polygon_sphere"])
def test_boundary_squares_to_zero(kind):
    s = build_surface(kind, 5)
    rng = np.random.default_rng(0)
    for _ in range(1000):
        assert boundary(s, boundary(s, _rand_chain(s, 2, rng))).is_zero()


def test_dual_is_involution_and_transposes():
    for kind in ("torus", "planar"):
        s = build_surface(kind, 4)
        d = dual(s)
        assert np.array_equal(s.d1, d.d2.T)
        assert np.array_equal(dual(d).d1, s.d1) and np.array_equal(dual(d).d2, s.d2)
    p = build_surface("planar", 4)
    assert set(dual(p).boundary_roles.values()) == set(p.boundary_roles.values())
    assert all(dual(p).boundary_roles[k] != v for k, v in p.boundary_roles.items())


def test_torus_self_dual_counts():
    t = build_surface("torus", 5)
    d = dual(t)
    assert (d.n_vertices, d.n_edges, d.n_faces) == (t.n_faces, t.n_edges, t.n_vertices)


def test_commutation_identity_and_disjoint_boundaries():
    s = build_surface("torus", 4)
    rng = np.random.default_rng(1)
    for _ in range(200):
        c1 = _rand_chain(s, 1, rng)
        v = _rand_chain(s, 0, rng)
        assert c1.dot(coboundary(s, v)) == boundary(s, c1).dot(v)
        c2 = _rand_chain(s, 2, rng)
        dual_c2 = _rand_chain(s, 2, rng, dual_=True)
        assert boundary(s, c2).bits @ boundary(s, dual_c2).bits % 2 == 0


def test_classify_cycle():
    s = build_surface("torus", 4)
    rng = np.random.default_rng(2)
    assert classify_cycle(s, boundary(s, _rand_chain(s, 2, rng))).is_trivial
    wrap = s.chain(1, [torus_edge(4, 0, c, 0) for c in range(4)])
    cls = classify_cycle(s, wrap)
    assert not cls.is_trivial and sum(cls.bits) == 1
    with pytest.raises(ValueError):
        classify_cycle(s, s.chain(1, [0]))


def test_torus_has_four_classes_and_additivity():
    s = build_surface("torus", 3)
    rng = np.random.default_rng(3)
    seen = set()
    cycles = [s.chain(1, r) for r in (np.flatnonzero(x) for x in s.cycle_refs)]
    for _ in range(200):
        c = boundary(s, _rand_chain(s, 2, rng))
        for ref in cycles:
            if rng.random() < 0.5:
                c = c + ref
        seen.add(classify_cycle(s, c).index)
        d = boundary(s, _rand_chain(s, 2, rng)) + cycles[int(rng.integers(2))]
        assert classify_cycle(s, c + d) == classify_cycle(s, c) ^ classify_cycle(s, d)
    assert seen == {0, 1, 2, 3}


def test_closed_surface_boundaries_are_even():
    s = build_surface("torus", 5)
    rng = np.random.default_rng(4)
    for _ in range(100):
        assert boundary(s, _rand_chain(s, 1, rng)).support.size % 2 == 0


def test_homology_class_naming():
    assert HomologyClass((0, 0)).is_trivial
    assert (HomologyClass((1, 0)) ^ HomologyClass((1, 1))).bits == (0, 1)


def test_cubic_complex_boundary_squares_to_zero():
    base = dual(build_surface("torus", 3))
    cc = CubicComplex(base, 3)
    rng = np.random.default_rng(5)
    for dim, size in ((3, cc.d3.shape[1]), (2, cc.d2.shape[1])):
        for _ in range(50):
            c = Chain(dim, rng.integers(0, 2, size))
            assert cc.boundary(cc.boundary(c)).is_zero()
    with pytest.raises(ValueError):
        CubicComplex(base, 0)


def test_cubic_complex_defects_are_the_coboundary():
    base = dual(build_surface("torus", 3))
    cc = CubicComplex(base, 2)
    # one measurement flip between layers 0 and 1 marks the cube above and below it
    c = Chain(2, np.zeros(cc.d2.shape[1], np.uint8))
    bits = c.bits.copy()
    bits[cc.horizontal_face(4, 1)] = 1
    d = cc.defects(Chain(2, bits))
    assert d.shape == (2, base.n_faces)
    assert np.argwhere(d).tolist() == [[0, 4], [1, 4]]
