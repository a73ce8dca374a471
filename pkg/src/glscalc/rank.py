"""Exact matrix rank with a compiled kernel when available.

``BACKEND`` is ``"cython"`` when the extension module imported and
``"python"`` otherwise; both give identical results.
"""

from __future__ import annotations

import math
from typing import Sequence

from gmpy2 import mpq

try:
    from ._rank_ext import bareiss_rank as _kernel

    BACKEND = "cython"
except ImportError:  # pragma: no cover - depends on the build
    from ._rank_py import bareiss_rank as _kernel

    BACKEND = "python"

from ._rank_py import bareiss_rank as bareiss_rank_py


def integer_rows(rows: Sequence[Sequence[mpq]]) -> list[list[int]]:
    """Scale each rational row by the lcm of its denominators."""
    out = []
    for r in rows:
        den = 1
        for c in r:
            if c:
                den = math.lcm(den, int(mpq(c).denominator))
        out.append([int(mpq(c) * den) for c in r])
    return out


def rank(rows: Sequence[Sequence[mpq]], ncols: int | None = None) -> int:
    if not rows:
        return 0
    n = len(rows[0]) if ncols is None else ncols
    return _kernel(integer_rows(rows), n)
