"""The constants of the two vanishing criteria, as exact quadratic surds."""

from __future__ import annotations

from gmpy2 import mpq

from .qsurd import SQRT2, SQRT85, QuadSurd

ALPHA = 1 + SQRT2
BETA = 3 - 2 * SQRT2
ALPHA0 = (31 - 3 * SQRT85) / 2
BETA0 = 1 / (ALPHA0 + 8)


def gs1_ratio(alpha: QuadSurd) -> QuadSurd:
    """(alpha - 1) / (alpha + alpha**2), the largest admissible beta for a given alpha."""
    return (alpha - 1) / (alpha + alpha * alpha)


def alpha0_equation_sides(alpha: QuadSurd) -> tuple[QuadSurd, QuadSurd]:
    """Both sides of the defining equation of alpha0, squared out exactly.

    The left side is ((sqrt(4a^3 + a^2 - 4a) + a - 2) / (2(1 + a + a^2)))^2.
    At a = alpha0 the radicand is a perfect square in Q(sqrt 85), which is
    what makes an exact evaluation possible.
    """
    rad = 4 * alpha ** 3 + alpha * alpha - 4 * alpha
    root = sqrt_in_field(rad)
    lhs = ((root + alpha - 2) / (2 * (1 + alpha + alpha * alpha))) ** 2
    rhs = 1 / (alpha + 8)
    return lhs, rhs


def sqrt_in_field(x: QuadSurd) -> QuadSurd:
    """The non-negative square root of x when it lies in the same field.

    Solves (u + v sqrt k)^2 = a + b sqrt k: u^2 + k v^2 = a, 2uv = b.
    """
    a, b, k = x.a, x.b, x.k
    if b == 0:
        r = _rational_sqrt(a)
        if r is not None:
            return QuadSurd(r, 0, k)
        r = _rational_sqrt(a / k)
        if r is not None:
            return QuadSurd(0, r, k)
        raise ValueError("not a square in the field")
    n = a * a - b * b * k
    s = _rational_sqrt(n)
    if s is None:
        raise ValueError("not a square in the field")
    for u2 in ((a + s) / 2, (a - s) / 2):
        u = _rational_sqrt(u2)
        if u is None or u == 0:
            continue
        v = b / (2 * u)
        cand = QuadSurd(u, v, k)
        if cand.sign() < 0:
            cand = -cand
        if cand * cand == x:
            return cand
    raise ValueError("not a square in the field")


def _rational_sqrt(q) -> mpq | None:
    import math

    q = mpq(q)
    if q < 0:
        return None
    n, d = int(q.numerator), int(q.denominator)
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return mpq(rn, rd)
    return None


def constants_report() -> dict:
    lhs, rhs = alpha0_equation_sides(ALPHA0)
    return {
        "alpha": ALPHA.to_str(),
        "beta": BETA.to_str(),
        "alpha0": ALPHA0.to_str(),
        "beta0": BETA0.to_str(),
        "alpha0_decimal": ALPHA0.decimal(10),
        "beta0_decimal": BETA0.decimal(10),
        "beta0_times_alpha0_plus_8": (BETA0 * (ALPHA0 + 8)).to_str(),
        "alpha0_equation_holds": lhs == rhs,
        "beta_is_ratio_at_alpha": gs1_ratio(ALPHA) == BETA,
    }
