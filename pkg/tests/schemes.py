"""Named germs and schemes shared by the test modules."""

from functools import lru_cache

from glscalc.corpus import generate
from glscalc.puiseux import BranchGerm
from glscalc.scheme import build_scheme


def germ(den, terms=(), transposed=False):
    return BranchGerm.from_terms(den, dict(terms), transposed)


def smooth(*terms):
    return germ(1, terms)


def node():
    return build_scheme([smooth((1, 1)), smooth((1, -1))])


def cusp(extra=0):
    return build_scheme([germ(2, [(3, 1)])], extra)


def e6():
    return build_scheme([germ(3, [(4, 1)])])


def e7():
    return build_scheme([smooth(), germ(2, [(3, 1)])])


def a_odd(k):
    """A_{2k-1}: y**2 = x**(2k), two smooth branches y = +-x**k."""
    return build_scheme([smooth((k, 1)), smooth((k, -1))])


def a_even(k):
    """A_{2k}: y**2 = x**(2k+1)."""
    return build_scheme([germ(2, [(2 * k + 1, 1)])])


def ordinary(r):
    return build_scheme([smooth((1, c)) for c in range(1, r + 1)])


def smooth_chain(n):
    """<y, x**(n+1)>: the line y = 0 with n extra free points."""
    return build_scheme([smooth()], n)


def two_cusps():
    """(y**2 - x**3)(y**2 - x**5)."""
    return build_scheme([germ(2, [(3, 1)]), germ(2, [(5, 1)])])


@lru_cache(maxsize=None)
def corpus_schemes(count=200, seed=0):
    return tuple(generate(count, seed))


def monomial_ideal_matches(X, generators, d=None):
    """Whether the degree-d part of J_X equals that of a monomial ideal.

    ``generators`` are exponent pairs (i, j) for x**i y**j.  The degree-d
    part of J_X is the kernel of the oracle's condition matrix, so the two
    agree exactly when every monomial of the ideal is killed by the
    conditions and the kernel has the same dimension as the ideal's degree-d
    piece.
    """
    from glscalc import oracle
    from glscalc.rank import rank

    if d is None:
        d = X.deg + 2
    mons = oracle.monomials(d)
    inside = [any(i >= a and j >= b for a, b in generators) for i, j in mons]
    sys_ = oracle.conditions_of(X, d)
    for col, ok in enumerate(inside):
        if ok and any(r[col] for r in sys_.rows):
            return False
    kernel = sys_.ambient - rank(sys_.rows, sys_.ambient)
    return kernel == sum(inside)
