"""Pure-Python versions of the hot kernels.

These mirror ``_ckernels.pyx`` function for function and are used whenever
the compiled module is unavailable (or ``BRANCHDEPTH_PURE_PYTHON=1``).
"""


def gf_rank(vectors, q, add, mul, neg, inv):
    """Rank of ``vectors`` over GF(q) given flat ``q*q`` add/mul tables."""
    if q == 2:
        return _gf2_rank(vectors)
    rows = [list(v) for v in vectors if any(v)]
    if not rows:
        return 0
    width = len(rows[0])
    rank = 0
    for col in range(width):
        pivot = None
        for i in range(rank, len(rows)):
            if rows[i][col]:
                pivot = i
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        prow = rows[rank]
        scale = inv[prow[col]]
        prow[:] = [mul[scale * q + x] for x in prow]
        for i in range(rank + 1, len(rows)):
            row = rows[i]
            c = row[col]
            if c:
                f = neg[c] * q
                rows[i] = [add[a * q + mul[f + b]] for a, b in zip(row, prow)]
        rank += 1
        if rank == len(rows):
            break
    return rank


def _gf2_rank(vectors):
    basis = []  # reduced so that leading bits are distinct
    for v in vectors:
        x = 0
        for bit in v:
            x = (x << 1) | (bit & 1)
        for b in basis:
            x = min(x, x ^ b)
        if x:
            basis.append(x)
    return len(basis)


def leaf_search(ranks, m, union_size, twin_prev):
    """Find an assignment of ``m`` elements to leaves meeting every rank bound.

    ``ranks[X]`` is the rank of the element subset with bitmask ``X``;
    ``union_size[S]`` is the edge count of the subtree spanned by the leaf
    subset ``S``.  The assignment must satisfy
    ``ranks[elements on S] <= union_size[S]`` for every ``S``.  A leaf with
    ``twin_prev[l] >= 0`` may only be opened after its earlier twin.
    Returns a tuple ``leaf_of_element`` or ``None``.
    """
    nleaves = len(twin_prev)
    if m == 0:
        return ()
    if nleaves == 0:
        return None
    full = 1 << nleaves
    lowbit_index = [0] * full
    for s in range(1, full):
        lowbit_index[s] = (s & -s).bit_length() - 1
    leaf_elems = [0] * nleaves
    assign = [0] * m
    union = [0] * full

    def feasible(leaf):
        bit = 1 << leaf
        for s in range(1, full):
            union[s] = union[s & (s - 1)] | leaf_elems[lowbit_index[s]]
            if s & bit and ranks[union[s]] > union_size[s]:
                return False
        return True

    def place(i):
        if i == m:
            return True
        for leaf in range(nleaves):
            prev = twin_prev[leaf]
            if not leaf_elems[leaf] and prev >= 0 and not leaf_elems[prev]:
                continue
            leaf_elems[leaf] |= 1 << i
            if feasible(leaf):
                assign[i] = leaf
                if place(i + 1):
                    return True
            leaf_elems[leaf] &= ~(1 << i)
        return False

    if place(0):
        return tuple(assign)
    return None
