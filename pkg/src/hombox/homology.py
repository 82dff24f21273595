"""Cellular homology: Betti numbers and torsion over Z, Betti numbers over Z/2.

Boundary matrices are assembled from the face poset.  Simplicial cells are
oriented by sorting their vertices (by vertex-cell id, equivalently by
canonical payload order): the face dropping the vertex in position t enters
with sign (-1)^t.  Chain cells of order complexes are tuples and are already
sorted, so the same rule applies positionally.  Complexes whose payloads are
neither (e.g. the polytopal Hom complex) are computed through their order
complex, which has the same homology.

Integer ranks and torsion come from a Smith normal form computed in two
phases: a sparse elimination that only ever pivots on +-1 entries (chosen by
a lazy minimum-fill heap), followed by an exact dense Smith normal form of
whatever small block remains.  Since unit pivots are invertible row/column
operations, the invariant factors are the units' 1s followed by the dense
block's factors.
"""

import heapq
from collections import namedtuple

from .cellcx import canon_key, order_complex
from .errors import InputError


def _simplicial_payloads(K):
    return all(isinstance(p, frozenset) for p in K.payloads)


def _chain_payloads(K):
    return all(
        isinstance(p, tuple) and p
        and all(isinstance(x, int) and not isinstance(x, bool) for x in p)
        for p in K.payloads)


def oriented_boundary(K):
    """Per-cell signed boundary: a dict {face_id: +-1} for every cell of
    positive dimension, empty dict for vertices.

    Requires simplicial (frozenset) or chain (int tuple) payloads."""
    out = []
    for i, p in enumerate(K.payloads):
        if K.dims[i] == 0:
            out.append({})
            continue
        if isinstance(p, frozenset):
            faces = [p - {v} for v in sorted(p, key=canon_key)]
        elif isinstance(p, tuple) and all(
                isinstance(x, int) and not isinstance(x, bool) for x in p):
            faces = [p[:t] + p[t + 1:] for t in range(len(p))]
        else:
            raise InputError(
                "cannot orient cells with payload %r; subdivide first" % (p,))
        col = {}
        for t, fp in enumerate(faces):
            col[K.index[fp]] = 1 if t % 2 == 0 else -1
        out.append(col)
    return out


# ---------------------------------------------------------------------------
# ranks and Smith normal form


def _rank_gf2(masks):
    """Rank over Z/2 of a set of columns given as int bitmasks."""
    pivots = {}
    rank = 0
    for m in masks:
        while m:
            b = m & -m
            p = pivots.get(b)
            if p is None:
                pivots[b] = m
                rank += 1
                break
            m ^= p
    return rank


def _dense_snf(M):
    """Invariant factors (positive, divisibility chain) of a small dense
    integer matrix, by the classical reduction."""
    M = [row[:] for row in M]
    factors = []
    top = 0
    nr = len(M)
    nc = len(M[0]) if M else 0
    while True:
        best = None
        for i in range(top, nr):
            for j in range(top, nc):
                v = M[i][j]
                if v and (best is None or abs(v) < abs(M[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        M[top], M[bi] = M[bi], M[top]
        for row in M:
            row[top], row[bj] = row[bj], row[top]
        while True:
            piv = M[top][top]
            dirty = False
            for i in range(top + 1, nr):
                q = M[i][top] // piv
                if q:
                    for j in range(top, nc):
                        M[i][j] -= q * M[top][j]
                if M[i][top]:
                    M[top], M[i] = M[i], M[top]
                    dirty = True
                    break
            if dirty:
                continue
            for j in range(top + 1, nc):
                q = M[top][j] // piv
                if q:
                    for i in range(top, nr):
                        M[i][j] -= q * M[i][top]
                if M[top][j]:
                    for i in range(top, nr):
                        M[i][top], M[i][j] = M[i][j], M[i][top]
                    dirty = True
                    break
            if dirty:
                continue
            bad = None
            for i in range(top + 1, nr):
                for j in range(top + 1, nc):
                    if M[i][j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            for j in range(top, nc):
                M[top][j] += M[bad][j]
        factors.append(abs(M[top][top]))
        top += 1
        if top >= nr or top >= nc:
            break
    return factors


def _snf_invariants(columns):
    """Invariant factors of the sparse integer matrix given as
    {col_id: {row_id: value}}."""
    cols = {c: dict(col) for c, col in columns.items() if col}
    rows = {}
    for c, col in cols.items():
        for r, v in col.items():
            rows.setdefault(r, {})[c] = v

    heap = []

    def push(r, c):
        v = rows.get(r, {}).get(c)
        if v in (1, -1):
            f = (len(rows[r]) - 1) * (len(cols[c]) - 1)
            heapq.heappush(heap, (f, r, c))

    for r, row in rows.items():
        for c in row:
            push(r, c)

    def drop(r, c):
        del rows[r][c]
        del cols[c][r]
        if not rows[r]:
            del rows[r]
        if not cols[c]:
            del cols[c]

    units = 0
    while heap:
        f, r, c = heapq.heappop(heap)
        row = rows.get(r)
        if row is None or c not in cols or c not in row:
            continue
        v = row[c]
        if v not in (1, -1):
            continue
        cur = (len(row) - 1) * (len(cols[c]) - 1)
        if cur > f:
            heapq.heappush(heap, (cur, r, c))
            continue
        # Pivot on (r, c): clear the column with row operations, then the
        # pivot row comes out by column operations that touch nothing else.
        units += 1
        for r2 in list(cols[c]):
            if r2 == r:
                continue
            k = rows[r2][c] * v
            row2 = rows[r2]
            for c2, w in row.items():
                if c2 == c:
                    continue
                nv = row2.get(c2, 0) - k * w
                if nv:
                    row2[c2] = nv
                    cols[c2][r2] = nv
                    push(r2, c2)
                elif c2 in row2:
                    drop(r2, c2)
            drop(r2, c)
        for c2 in list(row):
            drop(r, c2)

    if not rows:
        return [1] * units
    rest_rows = sorted(rows)
    rest_cols = sorted({c for row in rows.values() for c in row})
    ri = {r: i for i, r in enumerate(rest_rows)}
    ci = {c: j for j, c in enumerate(rest_cols)}
    M = [[0] * len(rest_cols) for _ in rest_rows]
    for r, row in rows.items():
        for c, v in row.items():
            M[ri[r]][ci[c]] = v
    return [1] * units + _dense_snf(M)


# ---------------------------------------------------------------------------
# Betti numbers and torsion


def betti(K, coeff="z"):
    """(Betti numbers, torsion) of K.

    Over the integers ("z"), torsion[d] lists the invariant factors > 1 of
    the boundary in dimension d+1, i.e. the torsion coefficients of H_d.
    Over Z/2 ("z2"), Betti numbers are Z/2-dimensions and torsion rows are
    empty.  Non-orientable payload shapes are computed via the order
    complex."""
    if coeff not in ("z", "z2"):
        raise InputError("coeff must be 'z' or 'z2', not %r" % (coeff,))
    if len(K.payloads) == 0:
        return [], []
    if not (_simplicial_payloads(K) or _chain_payloads(K)):
        K = order_complex(K)
    D = K.max_dim
    bnd = oriented_boundary(K)
    ids_of = [K.cells_of_dim(d) for d in range(D + 1)]
    ranks = [0] * (D + 2)
    invs = [[] for _ in range(D + 2)]
    for d in range(1, D + 1):
        cols = {i: bnd[i] for i in ids_of[d]}
        if coeff == "z2":
            pos = {r: k for k, r in enumerate(ids_of[d - 1])}
            masks = []
            for col in cols.values():
                m = 0
                for rr in col:
                    m |= 1 << pos[rr]
                masks.append(m)
            ranks[d] = _rank_gf2(masks)
        else:
            invs[d] = _snf_invariants(cols)
            ranks[d] = len(invs[d])
    bettis = [len(ids_of[d]) - ranks[d] - ranks[d + 1] for d in range(D + 1)]
    torsion = [[f for f in invs[d + 1] if f != 1] for d in range(D + 1)]
    return bettis, torsion


def homology_report(K, coeff="z"):
    """JSON-ready {"betti": [...], "torsion": [[...], ...]} for K."""
    b, t = betti(K, coeff)
    return {"betti": list(b), "torsion": [list(row) for row in t]}


HomologyAgreement = namedtuple(
    "HomologyAgreement", "agree box_report hom_report")


def _pad(report, upto):
    b = list(report["betti"]) + [0] * (upto - len(report["betti"]))
    t = list(report["torsion"]) + [[] for _ in range(upto - len(report["torsion"]))]
    return {"betti": b, "torsion": t}


def homology_agreement(H, coeff="z", max_cells=None):
    """Compare integral (or Z/2) homology of sd B_edge(H) and sd Hom(K_r^r,H).

    The two must agree (they are homotopy equivalent complexes); returns
    HomologyAgreement(agree, box_report, hom_report) with reports padded to a
    common length."""
    from .boxcx import box_edge
    from .cellcx import barycentric_subdivision
    from .homcx import hom_complex

    box = box_edge(H, max_cells=max_cells)
    hom = hom_complex(H, max_cells=max_cells)
    sdb = barycentric_subdivision(box.cx, max_cells=max_cells)
    sdh = barycentric_subdivision(hom.cx, max_cells=max_cells)
    rb = homology_report(sdb, coeff)
    rh = homology_report(sdh, coeff)
    upto = max(len(rb["betti"]), len(rh["betti"]))
    rb, rh = _pad(rb, upto), _pad(rh, upto)
    return HomologyAgreement(rb == rh, rb, rh)
