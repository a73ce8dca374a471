import random

import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from glscalc import rank as R
from glscalc._rank_py import bareiss_rank

matrices = st.integers(1, 7).flatmap(
    lambda c: st.lists(st.lists(st.integers(-5, 5), min_size=c, max_size=c), min_size=0, max_size=8).map(lambda rows: (rows, c))
)


@given(matrices)
@settings(max_examples=300, deadline=None)
def test_kernels_agree_with_sympy(mc):
    rows, c = mc
    expected = sympy.Matrix(rows).rank() if rows else 0
    assert bareiss_rank(rows, c) == expected
    assert R._kernel(rows, c) == expected


def test_rational_rows_scaled():
    rows = [[mpq(1, 2), mpq(1, 3)], [mpq(3, 2), mpq(1, 1)]]
    assert R.rank(rows) == 1
    assert R.integer_rows(rows) == [[3, 2], [3, 2]]


def test_input_not_modified():
    rows = [[2, 4], [1, 3]]
    bareiss_rank(rows, 2)
    assert rows == [[2, 4], [1, 3]]


def test_backend_reported():
    assert R.BACKEND in ("cython", "python")


def test_large_entries_stay_exact():
    rng = random.Random(3)
    base = [[rng.randint(-10**30, 10**30) for _ in range(6)] for _ in range(4)]
    rows = base + [[a + b for a, b in zip(base[0], base[1])]]
    assert R._kernel(rows, 6) == 4


@pytest.mark.skipif(R.BACKEND != "cython", reason="compiled kernel not built")
def test_compiled_kernel_matches_python_on_corpus_matrices(corpus):
    from glscalc import oracle

    for inst in corpus[:15]:
        sys_ = oracle.conditions_of(inst.scheme, 8)
        rows = R.integer_rows(sys_.rows)
        assert R._kernel(rows, sys_.ambient) == bareiss_rank(rows, sys_.ambient)


def test_fallback_selected_without_extension():
    import subprocess
    import sys

    code = (
        "import sys\n"
        "sys.modules['glscalc._rank_ext'] = None\n"
        "import glscalc.rank as R\n"
        "assert R.BACKEND == 'python'\n"
        "assert R.rank([[1, 2], [2, 4], [0, 1]], 2) == 2\n"
    )
    subprocess.run([sys.executable, "-c", code], check=True)
