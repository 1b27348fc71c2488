"""Edmonds' blossom algorithm for maximum-weight matching, compiled with numba.

Array-based primal-dual implementation with integer weights and doubled
dual variables (so every delta stays integral).  Blossom recursion is
replaced by explicit stacks and worklists; child lists live in fixed-size
2D arrays with a length per blossom, and cyclic child indexing is done
modulo that length.

Vertex and blossom ids share one index space: 0..n-1 are vertices,
n..2n-1 are blossoms.  Edge k has endpoints 2k (its i side) and 2k+1
(its j side); ``endpoint[p]`` is the vertex at endpoint p.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_I = np.int64


@njit(cache=True)
def _leaves(b, nv, childs, nchild, out, stack):
    """Write the vertices of blossom b into ``out`` in depth-first order; return count."""
    if b < nv:
        out[0] = b
        return 1
    cnt = 0
    sp = 0
    stack[sp] = b
    sp += 1
    while sp > 0:
        sp -= 1
        x = stack[sp]
        if x < nv:
            out[cnt] = x
            cnt += 1
            continue
        for i in range(nchild[x] - 1, -1, -1):
            stack[sp] = childs[x, i]
            sp += 1
    return cnt


@njit(cache=True)
def _slack(k, ei, ej, ew, dualvar):
    return dualvar[ei[k]] + dualvar[ej[k]] - 2 * ew[k]


@njit(cache=True)
def _assign_label(w, t, p, nv, st):
    (endpoint, mate, label, labelend, inblossom, childs, nchild, bbase, bestedge, queue, qlen, leafbuf, stackbuf) = st
    while True:
        b = inblossom[w]
        label[w] = t
        label[b] = t
        labelend[w] = p
        labelend[b] = p
        bestedge[w] = -1
        bestedge[b] = -1
        if t == 1:
            cnt = _leaves(b, nv, childs, nchild, leafbuf, stackbuf)
            for i in range(cnt):
                queue[qlen[0]] = leafbuf[i]
                qlen[0] += 1
            return
        base = bbase[b]
        w = endpoint[mate[base]]
        t = 1
        p = mate[base] ^ 1


@njit(cache=True)
def _scan_blossom(v, w, endpoint, mate, label, labelend, inblossom, bbase, pathbuf):
    npath = 0
    base = -1
    while v != -1 or w != -1:
        b = inblossom[v]
        if label[b] & 4:
            base = bbase[b]
            break
        pathbuf[npath] = b
        npath += 1
        label[b] = 5
        if labelend[b] == -1:
            v = -1
        else:
            v = endpoint[labelend[b]]
            b = inblossom[v]
            v = endpoint[labelend[b]]
        if w != -1:
            v, w = w, v
    for i in range(npath):
        label[pathbuf[i]] = 1
    return base


@njit(cache=True)
def _matching(nv, ei, ej, ew, maxcard):
    m = ei.shape[0]
    nb = 2 * nv
    endpoint = np.empty(2 * m, _I)
    deg = np.zeros(nv + 1, _I)
    for k in range(m):
        endpoint[2 * k] = ei[k]
        endpoint[2 * k + 1] = ej[k]
        deg[ei[k] + 1] += 1
        deg[ej[k] + 1] += 1
    nbptr = np.cumsum(deg)
    fill = nbptr[:-1].copy()
    nbend = np.empty(2 * m, _I)
    for k in range(m):
        nbend[fill[ei[k]]] = 2 * k + 1
        fill[ei[k]] += 1
        nbend[fill[ej[k]]] = 2 * k
        fill[ej[k]] += 1

    maxweight = 0
    for k in range(m):
        if ew[k] > maxweight:
            maxweight = ew[k]

    mate = np.full(nv, -1, _I)
    label = np.zeros(nb, _I)
    labelend = np.full(nb, -1, _I)
    inblossom = np.arange(nv).astype(_I)
    bparent = np.full(nb, -1, _I)
    childs = np.zeros((nb, nv + 1), _I)
    bendps = np.zeros((nb, nv + 1), _I)
    nchild = np.zeros(nb, _I)
    bbase = np.full(nb, -1, _I)
    for v in range(nv):
        bbase[v] = v
    bestedge = np.full(nb, -1, _I)
    bbest = np.zeros((nb, nb), _I)
    nbbest = np.full(nb, -1, _I)  # -1 means "no list"
    unused = np.empty(nv, _I)
    for i in range(nv):
        unused[i] = nv + i
    nunused = nv
    dualvar = np.zeros(nb, _I)
    for v in range(nv):
        dualvar[v] = maxweight
    allowedge = np.zeros(m, np.bool_)
    queue = np.empty(nv + m + 1, _I)
    qlen = np.zeros(1, _I)
    leafbuf = np.empty(nv, _I)
    leafbuf2 = np.empty(nv, _I)
    stackbuf = np.empty(2 * nb + 2, _I)
    pathbuf = np.empty(nb, _I)
    tmp_c = np.empty(nv + 1, _I)
    tmp_e = np.empty(nv + 1, _I)
    bestedgeto = np.full(nb, -1, _I)
    expstack = np.empty(nb, _I)
    augb = np.empty(2 * nb + 2, _I)
    augv = np.empty(2 * nb + 2, _I)
    rot = np.empty(nv + 1, _I)
    st = (endpoint, mate, label, labelend, inblossom, childs, nchild, bbase, bestedge, queue, qlen, leafbuf, stackbuf)

    for _stage in range(nv):
        label[:] = 0
        bestedge[:] = -1
        for b in range(nv, nb):
            nbbest[b] = -1
        allowedge[:] = False
        qlen[0] = 0
        for v in range(nv):
            if mate[v] == -1 and label[inblossom[v]] == 0:
                _assign_label(v, 1, -1, nv, st)
        augmented = False
        while True:
            while qlen[0] > 0 and not augmented:
                qlen[0] -= 1
                v = queue[qlen[0]]
                for idx in range(nbptr[v], nbptr[v + 1]):
                    p = nbend[idx]
                    k = p // 2
                    w = endpoint[p]
                    if inblossom[v] == inblossom[w]:
                        continue
                    kslack = 0
                    if not allowedge[k]:
                        kslack = _slack(k, ei, ej, ew, dualvar)
                        if kslack <= 0:
                            allowedge[k] = True
                    if allowedge[k]:
                        if label[inblossom[w]] == 0:
                            _assign_label(w, 2, p ^ 1, nv, st)
                        elif label[inblossom[w]] == 1:
                            base = _scan_blossom(v, w, endpoint, mate, label, labelend, inblossom, bbase, pathbuf)
                            if base >= 0:
                                # add blossom ------------------------------------------------
                                bv = inblossom[ei[k]]
                                bw = inblossom[ej[k]]
                                bb = inblossom[base]
                                nunused -= 1
                                b = unused[nunused]
                                bbase[b] = base
                                bparent[b] = -1
                                bparent[bb] = b
                                n1 = 0
                                while bv != bb:
                                    bparent[bv] = b
                                    tmp_c[n1] = bv
                                    tmp_e[n1] = labelend[bv]
                                    n1 += 1
                                    bv = inblossom[endpoint[labelend[bv]]]
                                L = 0
                                childs[b, L] = bb
                                L += 1
                                for q in range(n1 - 1, -1, -1):
                                    childs[b, L] = tmp_c[q]
                                    bendps[b, L - 1] = tmp_e[q]
                                    L += 1
                                bendps[b, L - 1] = 2 * k
                                while bw != bb:
                                    bparent[bw] = b
                                    childs[b, L] = bw
                                    bendps[b, L] = labelend[bw] ^ 1
                                    L += 1
                                    bw = inblossom[endpoint[labelend[bw]]]
                                nchild[b] = L
                                label[b] = 1
                                labelend[b] = labelend[bb]
                                dualvar[b] = 0
                                cnt = _leaves(b, nv, childs, nchild, leafbuf, stackbuf)
                                for q in range(cnt):
                                    lv = leafbuf[q]
                                    if label[inblossom[lv]] == 2:
                                        queue[qlen[0]] = lv
                                        qlen[0] += 1
                                    inblossom[lv] = b
                                bestedgeto[:] = -1
                                for ci in range(L):
                                    cb = childs[b, ci]
                                    if nbbest[cb] == -1:
                                        c2 = _leaves(cb, nv, childs, nchild, leafbuf2, stackbuf)
                                        for q in range(c2):
                                            lv = leafbuf2[q]
                                            for idx2 in range(nbptr[lv], nbptr[lv + 1]):
                                                kk = nbend[idx2] // 2
                                                jj = ej[kk]
                                                if inblossom[jj] == b:
                                                    jj = ei[kk]
                                                bj = inblossom[jj]
                                                if bj != b and label[bj] == 1:
                                                    if bestedgeto[bj] == -1 or _slack(kk, ei, ej, ew, dualvar) < _slack(
                                                        bestedgeto[bj], ei, ej, ew, dualvar
                                                    ):
                                                        bestedgeto[bj] = kk
                                    else:
                                        for q in range(nbbest[cb]):
                                            kk = bbest[cb, q]
                                            jj = ej[kk]
                                            if inblossom[jj] == b:
                                                jj = ei[kk]
                                            bj = inblossom[jj]
                                            if bj != b and label[bj] == 1:
                                                if bestedgeto[bj] == -1 or _slack(kk, ei, ej, ew, dualvar) < _slack(
                                                    bestedgeto[bj], ei, ej, ew, dualvar
                                                ):
                                                    bestedgeto[bj] = kk
                                    nbbest[cb] = -1
                                    bestedge[cb] = -1
                                cntb = 0
                                for q in range(nb):
                                    if bestedgeto[q] != -1:
                                        bbest[b, cntb] = bestedgeto[q]
                                        cntb += 1
                                nbbest[b] = cntb
                                bestedge[b] = -1
                                for q in range(cntb):
                                    kk = bbest[b, q]
                                    if bestedge[b] == -1 or _slack(kk, ei, ej, ew, dualvar) < _slack(
                                        bestedge[b], ei, ej, ew, dualvar
                                    ):
                                        bestedge[b] = kk
                            else:
                                # augment matching -------------------------------------------
                                for side in range(2):
                                    if side == 0:
                                        s = ei[k]
                                        p2 = 2 * k + 1
                                    else:
                                        s = ej[k]
                                        p2 = 2 * k
                                    while True:
                                        bs = inblossom[s]
                                        if bs >= nv:
                                            _augment_blossom(bs, s, nv, endpoint, mate, bparent, childs, bendps, nchild, bbase, augb, augv, rot)
                                        mate[s] = p2
                                        if labelend[bs] == -1:
                                            break
                                        t = endpoint[labelend[bs]]
                                        bt = inblossom[t]
                                        s = endpoint[labelend[bt]]
                                        j = endpoint[labelend[bt] ^ 1]
                                        if bt >= nv:
                                            _augment_blossom(bt, j, nv, endpoint, mate, bparent, childs, bendps, nchild, bbase, augb, augv, rot)
                                        mate[j] = labelend[bt]
                                        p2 = labelend[bt] ^ 1
                                augmented = True
                                break
                        elif label[w] == 0:
                            label[w] = 2
                            labelend[w] = p ^ 1
                    elif label[inblossom[w]] == 1:
                        b = inblossom[v]
                        if bestedge[b] == -1 or kslack < _slack(bestedge[b], ei, ej, ew, dualvar):
                            bestedge[b] = k
                    elif label[w] == 0:
                        if bestedge[w] == -1 or kslack < _slack(bestedge[w], ei, ej, ew, dualvar):
                            bestedge[w] = k
            if augmented:
                break

            deltatype = -1
            delta = 0
            deltaedge = -1
            deltablossom = -1
            if not maxcard:
                deltatype = 1
                delta = dualvar[0]
                for v in range(1, nv):
                    if dualvar[v] < delta:
                        delta = dualvar[v]
            for v in range(nv):
                if label[inblossom[v]] == 0 and bestedge[v] != -1:
                    d = _slack(bestedge[v], ei, ej, ew, dualvar)
                    if deltatype == -1 or d < delta:
                        delta = d
                        deltatype = 2
                        deltaedge = bestedge[v]
            for b in range(nb):
                if bparent[b] == -1 and label[b] == 1 and bestedge[b] != -1:
                    d = _slack(bestedge[b], ei, ej, ew, dualvar) // 2
                    if deltatype == -1 or d < delta:
                        delta = d
                        deltatype = 3
                        deltaedge = bestedge[b]
            for b in range(nv, nb):
                if bbase[b] >= 0 and bparent[b] == -1 and label[b] == 2 and (deltatype == -1 or dualvar[b] < delta):
                    delta = dualvar[b]
                    deltatype = 4
                    deltablossom = b
            if deltatype == -1:
                deltatype = 1
                delta = dualvar[0]
                for v in range(1, nv):
                    if dualvar[v] < delta:
                        delta = dualvar[v]
                if delta < 0:
                    delta = 0
            for v in range(nv):
                lb = label[inblossom[v]]
                if lb == 1:
                    dualvar[v] -= delta
                elif lb == 2:
                    dualvar[v] += delta
            for b in range(nv, nb):
                if bbase[b] >= 0 and bparent[b] == -1:
                    if label[b] == 1:
                        dualvar[b] += delta
                    elif label[b] == 2:
                        dualvar[b] -= delta
            if deltatype == 1:
                break
            elif deltatype == 2:
                allowedge[deltaedge] = True
                i = ei[deltaedge]
                if label[inblossom[i]] == 0:
                    i = ej[deltaedge]
                queue[qlen[0]] = i
                qlen[0] += 1
            elif deltatype == 3:
                allowedge[deltaedge] = True
                queue[qlen[0]] = ei[deltaedge]
                qlen[0] += 1
            else:
                nunused = _expand_blossom(
                    deltablossom, False, nv, st, bparent, bendps, dualvar, nbbest, allowedge, unused, nunused, expstack
                )
        if not augmented:
            break
        for b in range(nv, nb):
            if bparent[b] == -1 and bbase[b] >= 0 and label[b] == 1 and dualvar[b] == 0:
                nunused = _expand_blossom(b, True, nv, st, bparent, bendps, dualvar, nbbest, allowedge, unused, nunused, expstack)

    out = np.full(nv, -1, _I)
    for v in range(nv):
        if mate[v] >= 0:
            out[v] = endpoint[mate[v]]
    return out


@njit(cache=True)
def _augment_blossom(b0, v0, nv, endpoint, mate, bparent, childs, bendps, nchild, bbase, augb, augv, rot):
    sp = 0
    augb[sp] = b0
    augv[sp] = v0
    sp += 1
    while sp > 0:
        sp -= 1
        b = augb[sp]
        v = augv[sp]
        t = v
        while bparent[t] != b:
            t = bparent[t]
        if t >= nv:
            augb[sp] = t
            augv[sp] = v
            sp += 1
        L = nchild[b]
        i = 0
        while childs[b, i] != t:
            i += 1
        j = i
        if i & 1:
            j -= L
            jstep = 1
            endptrick = 0
        else:
            jstep = -1
            endptrick = 1
        while j != 0:
            j += jstep
            t = childs[b, j % L]
            p = bendps[b, (j - endptrick) % L] ^ endptrick
            if t >= nv:
                augb[sp] = t
                augv[sp] = endpoint[p]
                sp += 1
            j += jstep
            t = childs[b, j % L]
            if t >= nv:
                augb[sp] = t
                augv[sp] = endpoint[p ^ 1]
                sp += 1
            mate[endpoint[p]] = p ^ 1
            mate[endpoint[p ^ 1]] = p
        for q in range(L):
            rot[q] = childs[b, (q + i) % L]
        for q in range(L):
            childs[b, q] = rot[q]
        for q in range(L):
            rot[q] = bendps[b, (q + i) % L]
        for q in range(L):
            bendps[b, q] = rot[q]
        bbase[b] = v


@njit(cache=True)
def _expand_blossom(b0, endstage, nv, st, bparent, bendps, dualvar, nbbest, allowedge, unused, nunused, expstack):
    (endpoint, mate, label, labelend, inblossom, childs, nchild, bbase, bestedge, queue, qlen, leafbuf, stackbuf) = st
    sp = 0
    expstack[sp] = b0
    sp += 1
    while sp > 0:
        sp -= 1
        b = expstack[sp]
        L = nchild[b]
        for ci in range(L):
            s = childs[b, ci]
            bparent[s] = -1
            if s < nv:
                inblossom[s] = s
            elif endstage and dualvar[s] == 0:
                expstack[sp] = s
                sp += 1
            else:
                cnt = _leaves(s, nv, childs, nchild, leafbuf, stackbuf)
                for q in range(cnt):
                    inblossom[leafbuf[q]] = s
        if (not endstage) and label[b] == 2:
            entrychild = inblossom[endpoint[labelend[b] ^ 1]]
            j = 0
            while childs[b, j] != entrychild:
                j += 1
            if j & 1:
                j -= L
                jstep = 1
                endptrick = 0
            else:
                jstep = -1
                endptrick = 1
            p = labelend[b]
            while j != 0:
                label[endpoint[p ^ 1]] = 0
                label[endpoint[bendps[b, (j - endptrick) % L] ^ endptrick ^ 1]] = 0
                _assign_label(endpoint[p ^ 1], 2, p, nv, st)
                allowedge[bendps[b, (j - endptrick) % L] // 2] = True
                j += jstep
                p = bendps[b, (j - endptrick) % L] ^ endptrick
                allowedge[p // 2] = True
                j += jstep
            bv = childs[b, j % L]
            label[endpoint[p ^ 1]] = 2
            label[bv] = 2
            labelend[endpoint[p ^ 1]] = p
            labelend[bv] = p
            bestedge[bv] = -1
            j += jstep
            while childs[b, j % L] != entrychild:
                bv = childs[b, j % L]
                if label[bv] == 1:
                    j += jstep
                    continue
                cnt = _leaves(bv, nv, childs, nchild, leafbuf, stackbuf)
                v = leafbuf[cnt - 1]
                for q in range(cnt):
                    if label[leafbuf[q]] != 0:
                        v = leafbuf[q]
                        break
                if label[v] != 0:
                    label[v] = 0
                    label[endpoint[mate[bbase[bv]]]] = 0
                    _assign_label(v, 2, labelend[v], nv, st)
                j += jstep
        label[b] = -1
        labelend[b] = -1
        nchild[b] = 0
        bbase[b] = -1
        nbbest[b] = -1
        bestedge[b] = -1
        unused[nunused] = b
        nunused += 1
    return nunused


def max_weight_matching(n: int, ei, ej, weights, *, maxcardinality: bool = False) -> np.ndarray:
    """Mate array (-1 for unmatched) of a maximum-weight matching.

    Integer weights only; edges must be distinct pairs without self-loops.
    """
    ei = np.ascontiguousarray(ei, dtype=np.int64)
    ej = np.ascontiguousarray(ej, dtype=np.int64)
    w = np.ascontiguousarray(weights, dtype=np.int64)
    if not (ei.shape == ej.shape == w.shape):
        raise ValueError("edge arrays must have equal length")
    if n == 0 or ei.size == 0:
        return np.full(n, -1, np.int64)
    if np.any(ei == ej):
        raise ValueError("self-loops are not allowed")
    if ei.min() < 0 or max(ei.max(), ej.max()) >= n:
        raise ValueError("edge endpoint out of range")
    return _matching(n, ei, ej, w, maxcardinality)


def min_weight_perfect_matching_edges(n: int, ei, ej, weights) -> np.ndarray:
    """Mate array of a minimum-weight perfect matching on an explicit edge list.

    Weights are divided by their gcd first, so scaling all weights by a
    constant yields the identical matching.  Reduces to maximum-cardinality
    maximum-weight matching on W - w with W = max(w) + 1.
    """
    ei = np.ascontiguousarray(ei, dtype=np.int64)
    ej = np.ascontiguousarray(ej, dtype=np.int64)
    w = np.ascontiguousarray(weights, dtype=np.int64)
    if n % 2:
        raise ValueError(f"perfect matching needs an even node count, got {n}")
    if n == 0:
        return np.zeros(0, np.int64)
    if w.size and w.min() < 0:
        raise ValueError("weights must be non-negative")
    g = int(np.gcd.reduce(w)) if w.size else 0
    if g > 1:
        w = w // g
    big = int(w.max()) + 1 if w.size else 1
    mate = max_weight_matching(n, ei, ej, big - w, maxcardinality=True)
    if np.any(mate < 0):
        raise RuntimeError("no perfect matching found")
    return mate


def min_weight_perfect_matching(weights: np.ndarray) -> np.ndarray:
    """Mate array of a minimum-weight perfect matching of a complete graph.

    ``weights`` is a symmetric (N, N) integer matrix with N even.
    """
    w = np.asarray(weights, dtype=np.int64)
    n = w.shape[0]
    if w.shape != (n, n):
        raise ValueError("weights must be a square matrix")
    iu, ju = np.triu_indices(n, 1)
    return min_weight_perfect_matching_edges(n, iu, ju, w[iu, ju])
