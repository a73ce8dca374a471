"""Pure-Python fraction-free (Bareiss) elimination over the integers."""

from __future__ import annotations


def bareiss_rank(rows: list[list[int]], ncols: int) -> int:
    """Rank of an integer matrix given as a list of rows.

    Every intermediate entry is a minor of the input, so all divisions are
    exact and no fractions appear.  The input list is not modified.
    """
    m = [list(r) for r in rows if any(r)]
    nrows = len(m)
    rank = 0
    prev = 1
    for col in range(ncols):
        if rank == nrows:
            break
        piv = -1
        for i in range(rank, nrows):
            if m[i][col]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            m[piv], m[rank] = m[rank], m[piv]
        prow = m[rank]
        p = prow[col]
        for i in range(rank + 1, nrows):
            row = m[i]
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
