# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled fraction-free (Bareiss) rank over the integers."""


def bareiss_rank(rows, Py_ssize_t ncols):
    cdef list m = [list(r) for r in rows if any(r)]
    cdef Py_ssize_t nrows = len(m)
    cdef Py_ssize_t rank = 0, col, i, j, piv
    cdef list prow, row
    cdef object p, a, prev = 1
    for col in range(ncols):
        if rank == nrows:
            break
        piv = -1
        for i in range(rank, nrows):
            if (<list>m[i])[col]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            m[piv], m[rank] = m[rank], m[piv]
        prow = <list>m[rank]
        p = prow[col]
        for i in range(rank + 1, nrows):
            row = <list>m[i]
            a = row[col]
            if a:
                for j in range(col + 1, ncols):
                    row[j] = (p * row[j] - a * prow[j]) // prev
            else:
                for j in range(col + 1, ncols):
                    if row[j]:
                        row[j] = (p * row[j]) // prev
            row[col] = 0
        prev = p
        rank += 1
    return rank
