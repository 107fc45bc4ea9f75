# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_pykernels`` for the reference semantics."""

from libc.stdlib cimport malloc, free


def gf_rank(vectors, int q, const unsigned char[:] add, const unsigned char[:] mul,
            const unsigned char[:] neg, const unsigned char[:] inv):
    cdef Py_ssize_t nrows = len(vectors)
    if nrows == 0:
        return 0
    cdef Py_ssize_t width = len(vectors[0])
    if width == 0:
        return 0
    cdef unsigned char *buf = <unsigned char *> malloc(nrows * width)
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, j, col
    cdef Py_ssize_t rank = 0, pivot
    cdef unsigned char scale, c, f
    cdef unsigned char *prow
    cdef unsigned char *row
    cdef unsigned char tmp
    try:
        for i in range(nrows):
            v = vectors[i]
            for j in range(width):
                buf[i * width + j] = <unsigned char> v[j]
        for col in range(width):
            pivot = -1
            for i in range(rank, nrows):
                if buf[i * width + col]:
                    pivot = i
                    break
            if pivot < 0:
                continue
            if pivot != rank:
                for j in range(width):
                    tmp = buf[pivot * width + j]
                    buf[pivot * width + j] = buf[rank * width + j]
                    buf[rank * width + j] = tmp
            prow = buf + rank * width
            scale = inv[prow[col]]
            for j in range(width):
                prow[j] = mul[scale * q + prow[j]]
            for i in range(rank + 1, nrows):
                row = buf + i * width
                c = row[col]
                if c:
                    f = neg[c]
                    for j in range(width):
                        row[j] = add[row[j] * q + mul[f * q + prow[j]]]
            rank += 1
            if rank == nrows:
                break
        return rank
    finally:
        free(buf)


cdef bint _feasible(int leaf, int nleaves, int full, unsigned int *leaf_elems,
                    unsigned int *union_, const int *ranks, const int *usize,
                    const int *lowbit):
    cdef int s
    cdef unsigned int bit = 1u << leaf
    union_[0] = 0
    for s in range(1, full):
        union_[s] = union_[s & (s - 1)] | leaf_elems[lowbit[s]]
        if (s & bit) and ranks[union_[s]] > usize[s]:
            return False
    return True


cdef bint _place(int i, int m, int nleaves, int full, unsigned int *leaf_elems,
                 unsigned int *union_, const int *ranks, const int *usize,
                 const int *lowbit, const int *twin_prev, int *assign):
    cdef int leaf, prev
    if i == m:
        return True
    for leaf in range(nleaves):
        prev = twin_prev[leaf]
        if leaf_elems[leaf] == 0 and prev >= 0 and leaf_elems[prev] == 0:
            continue
        leaf_elems[leaf] |= (1u << i)
        if _feasible(leaf, nleaves, full, leaf_elems, union_, ranks, usize, lowbit):
            assign[i] = leaf
            if _place(i + 1, m, nleaves, full, leaf_elems, union_, ranks, usize,
                      lowbit, twin_prev, assign):
                return True
        leaf_elems[leaf] &= ~(1u << i)
    return False


def leaf_search(ranks, int m, union_size, twin_prev):
    cdef int nleaves = len(twin_prev)
    if m == 0:
        return ()
    if nleaves == 0:
        return None
    if m > 30 or nleaves > 16:
        raise ValueError("leaf_search supports at most 30 elements and 16 leaves")
    cdef int full = 1 << nleaves
    cdef int nranks = len(ranks)
    cdef int *cranks = <int *> malloc(nranks * sizeof(int))
    cdef int *usize = <int *> malloc(full * sizeof(int))
    cdef int *lowbit = <int *> malloc(full * sizeof(int))
    cdef int *ctwin = <int *> malloc(nleaves * sizeof(int))
    cdef int *assign = <int *> malloc(m * sizeof(int))
    cdef unsigned int *leaf_elems = <unsigned int *> malloc(nleaves * sizeof(unsigned int))
    cdef unsigned int *union_ = <unsigned int *> malloc(full * sizeof(unsigned int))
    cdef int s, k
    try:
        for s in range(nranks):
            cranks[s] = ranks[s]
        for s in range(full):
            usize[s] = union_size[s]
            lowbit[s] = 0
        for s in range(1, full):
            k = 0
            while not (s >> k) & 1:
                k += 1
            lowbit[s] = k
        for k in range(nleaves):
            ctwin[k] = twin_prev[k]
            leaf_elems[k] = 0
        if _place(0, m, nleaves, full, leaf_elems, union_, cranks, usize, lowbit, ctwin, assign):
            return tuple([assign[k] for k in range(m)])
        return None
    finally:
        free(cranks); free(usize); free(lowbit); free(ctwin); free(assign)
        free(leaf_elems); free(union_)
