"""Graph-state measurement rules on 1D chains, checked by canonical-form equality.

All measurements are postselected on the +1 outcome.  Vertices are 0..n-1
with edges (i, i+1).
"""

from __future__ import annotations

from topoqec.pauli import PauliProduct
from topoqec.stabilizer import StabilizerTableau, graph_state


def chain_edges(n: int) -> set[tuple[int, int]]:
    return {(i, i + 1) for i in range(n - 1)}


def expected(n: int, edges, measured: dict[int, str]) -> StabilizerTableau:
    gens = graph_state(n, sorted({tuple(sorted(e)) for e in edges})).generators
    for q, letter in measured.items():
        gens[q] = PauliProduct.single(n, q, letter)
    return StabilizerTableau.from_generators(gens)


def measured_chain(n: int, seq) -> StabilizerTableau:
    t = graph_state(n, sorted(chain_edges(n)))
    for q, letter in seq:
        t.measure(PauliProduct.single(n, q, letter), forced=0)
    return t


def _without(edges, cut) -> list[tuple[int, int]]:
    return [e for e in edges if not set(e) & set(cut)]


def rule_z(n: int, i: int) -> bool:
    t = measured_chain(n, [(i, "Z")])
    return t.same_group(expected(n, _without(chain_edges(n), [i]), {i: "Z"}))


def rule_x(n: int, i: int) -> bool:
    """X at i then H at i-1: neighbours of i reconnect through i+1."""
    t = measured_chain(n, [(i, "X")])
    t.apply("H", i - 1)
    e = [x for x in _without(chain_edges(n), [i]) if x != (i - 2, i - 1)]
    e += [(i - 2, i + 1), (i - 1, i + 1)]
    if i + 2 < n:
        e.append((i + 1, i + 2))
    return t.same_group(expected(n, e, {i: "X"}))


def rule_y(n: int, i: int, gate: str = "SDG") -> bool:
    """Y at i then a phase gate on both neighbours: i-1 and i+1 become adjacent."""
    t = measured_chain(n, [(i, "Y")])
    t.apply(gate, i - 1)
    t.apply(gate, i + 1)
    e = _without(chain_edges(n), [i]) + [(i - 1, i + 1)]
    return t.same_group(expected(n, e, {i: "Y"}))


def rule_xx(n: int, i: int) -> bool:
    """Adjacent X measurements at i, i+1 join i-1 to i+2 with no byproduct."""
    t = measured_chain(n, [(i, "X"), (i + 1, "X")])
    e = _without(chain_edges(n), [i, i + 1]) + [(i - 1, i + 2)]
    return t.same_group(expected(n, e, {i: "X", i + 1: "X"}))


def rule_yyy(n: int, i: int) -> bool:
    """Three Y measurements at i-1, i, i+1 join i-2 to i+2 with no byproduct."""
    t = measured_chain(n, [(i - 1, "Y"), (i, "Y"), (i + 1, "Y")])
    e = _without(chain_edges(n), [i - 1, i, i + 1]) + [(i - 2, i + 2)]
    return t.same_group(expected(n, e, {i - 1: "Y", i: "Y", i + 1: "Y"}))


def all_rule_checks(max_len: int = 12) -> list[tuple[str, int, int, bool]]:
    out = []
    for n in range(3, max_len + 1):
        for i in range(n):
            out.append(("Z", n, i, rule_z(n, i)))
        for i in range(1, n - 1):
            out.append(("Y", n, i, rule_y(n, i)))
        for i in range(2, n - 1):
            out.append(("X", n, i, rule_x(n, i)))
        for i in range(1, n - 2):
            out.append(("XX", n, i, rule_xx(n, i)))
        for i in range(2, n - 2):
            out.append(("YYY", n, i, rule_yyy(n, i)))
    return out
