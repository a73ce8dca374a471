"""Fractional power series, contact orders and invariants of single branches.

A branch ``y = xi(x)`` with ``xi`` in ``x**(1/n)`` is parametrized by
``x = t**n, y = xi(t**n)``.  Its ``n`` conjugates are ``xi(eta**i * x**(1/n))``
for the ``n``-th roots of unity ``eta**i``.  Conjugate terms are stored as
triples ``(exponent, rational coefficient, angle)`` with the root of unity
``exp(2 pi i angle)`` tracked as a rational angle modulo 1.  Two such terms
are equal exactly when the coefficients agree and the angles agree, or the
coefficients are opposite and the angles differ by one half; this makes every
contact computation exact without any cyclotomic field arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

from gmpy2 import mpq

from . import _arith as A
from .errors import IndistinguishableAtTruncation, InputError, TruncationTooShort


@dataclass(frozen=True)
class FractionalSeries:
    """A finite fractional power series ``sum c_k x**(k/n)``.

    ``truncation_order`` is None when the series is an exact finite sum;
    otherwise exponents at or above it are unknown.
    """

    denominator: int
    terms: tuple  # tuple[tuple[int, mpq], ...] sorted by numerator
    truncation_order: Optional[mpq] = None

    def __post_init__(self) -> None:
        if self.denominator < 1:
            raise InputError("denominator must be positive")
        prev = -1
        for k, c in self.terms:
            if k < 0 or k <= prev:
                raise InputError("exponent numerators must be non-negative and increasing")
            if c == 0:
                raise InputError("stored coefficients must be nonzero")
            if self.truncation_order is not None and mpq(k, self.denominator) >= self.truncation_order:
                raise InputError("term at or beyond the truncation order")
            prev = k

    @classmethod
    def make(
        cls,
        denominator: int,
        terms: Mapping[int, object] | Iterable[tuple[int, object]],
        truncation_order: object = None,
        reduce: bool = True,
    ) -> "FractionalSeries":
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean = sorted((int(k), mpq(c)) for k, c in items if mpq(c) != 0)
        trunc = None if truncation_order is None else mpq(truncation_order)
        s = cls(int(denominator), tuple(clean), trunc)
        return s.reduced() if reduce else s

    @property
    def is_reduced(self) -> bool:
        g = self.denominator
        for k, _ in self.terms:
            g = math.gcd(g, k)
        return g == 1

    def reduced(self) -> "FractionalSeries":
        g = self.denominator
        for k, _ in self.terms:
            g = math.gcd(g, k)
        if g == 1:
            return self
        return FractionalSeries(self.denominator // g, tuple((k // g, c) for k, c in self.terms), self.truncation_order)

    def exponents(self) -> list[mpq]:
        return [mpq(k, self.denominator) for k, _ in self.terms]

    def coefficient(self, exponent: object) -> mpq:
        e = mpq(exponent) * self.denominator
        if e.denominator != 1:
            return A.ZERO
        for k, c in self.terms:
            if k == int(e):
                return c
        return A.ZERO

    def order(self) -> Optional[mpq]:
        return mpq(self.terms[0][0], self.denominator) if self.terms else None

    def conjugate_terms(self, i: int) -> list[tuple[mpq, mpq, mpq]]:
        n = self.denominator
        return [(mpq(k, n), c, mpq((i * k) % n, n)) for k, c in self.terms]

    def conjugates(self) -> list[list[tuple[mpq, mpq, mpq]]]:
        return [self.conjugate_terms(i) for i in range(self.denominator)]

    def times_x(self, power: int = 1) -> "FractionalSeries":
        n = self.denominator
        trunc = None if self.truncation_order is None else self.truncation_order + power
        return FractionalSeries(n, tuple((k + power * n, c) for k, c in self.terms), trunc)

    def to_json(self) -> dict:
        out: dict = {"den": self.denominator, "terms": [[k, str(c)] for k, c in self.terms]}
        if self.truncation_order is not None:
            out["truncation"] = str(self.truncation_order)
        return out

    @classmethod
    def from_json(cls, obj: Mapping) -> "FractionalSeries":
        trunc = obj.get("truncation")
        return cls.make(int(obj["den"]), [(int(k), mpq(str(c))) for k, c in obj["terms"]], trunc)


def _terms_equal(a: tuple[mpq, mpq, mpq], b: tuple[mpq, mpq, mpq]) -> bool:
    if a[1] == b[1]:
        return (a[2] - b[2]) % 1 == 0
    if a[1] == -b[1]:
        return (a[2] - b[2] - mpq(1, 2)) % 1 == 0
    return False


def _conjugate_contact(
    a: Sequence[tuple[mpq, mpq, mpq]],
    b: Sequence[tuple[mpq, mpq, mpq]],
    trunc: Optional[mpq],
) -> mpq:
    ia = {t[0]: t for t in a}
    ib = {t[0]: t for t in b}
    for e in sorted(set(ia) | set(ib)):
        if trunc is not None and e >= trunc:
            break
        ta, tb = ia.get(e), ib.get(e)
        if ta is None or tb is None or not _terms_equal(ta, tb):
            return e
    raise IndistinguishableAtTruncation("series agree on all known terms")


def _min_trunc(*series: FractionalSeries) -> Optional[mpq]:
    ts = [s.truncation_order for s in series if s.truncation_order is not None]
    return min(ts) if ts else None


def contact_order(a: FractionalSeries, b: FractionalSeries) -> mpq:
    """Least exponent at which the two series differ."""
    return _conjugate_contact(a.conjugate_terms(0), b.conjugate_terms(0), _min_trunc(a, b))


def characteristic_exponents(s: FractionalSeries) -> list[mpq]:
    e = s.denominator
    out = []
    for k, _ in s.terms:
        if e == 1:
            break
        g = math.gcd(e, k)
        if g < e:
            out.append(mpq(k, s.denominator))
            e = g
    return out


def sequence_from_exponents(n: int, exponents: Sequence[mpq]) -> list[int]:
    """Multiplicities at the essential points of a branch, by Euclid's algorithm."""
    if n == 1:
        return [1]
    seq: list[int] = []
    e = n
    prev = 0
    for ex in exponents:
        beta = int(ex * n)
        a, b = beta - prev, e
        while b:
            q, r = divmod(a, b)
            seq.extend([b] * q)
            a, b = b, r
        e = a
        prev = beta
    if e != 1:
        raise InputError("characteristic exponents do not reach denominator 1")
    return seq


def exponents_from_sequence(seq: Sequence[int]) -> tuple[int, list[mpq]]:
    """Inverse of :func:`sequence_from_exponents`."""
    if not seq or seq[0] == 1:
        return 1, []
    n = seq[0]
    runs: list[list[int]] = []
    for v in seq:
        if runs and runs[-1][0] == v:
            runs[-1][1] += 1
        else:
            runs.append([v, 1])
    exps: list[mpq] = []
    beta = 0
    e = n
    pos = 0
    carry = 0
    while e > 1:
        # first run of the segment has value e (count may be zero)
        q0 = 0
        if carry:
            q0 = carry
            carry = 0
        elif pos < len(runs) and runs[pos][0] == e:
            q0 = runs[pos][1]
            pos += 1
        if pos >= len(runs):
            raise InputError("multiplicity sequence ends before reaching 1")
        r_prev, r = e, runs[pos][0]
        first_r = r
        count = runs[pos][1]
        pos += 1
        while True:
            nxt = r_prev - count * r
            if nxt == 0:
                break
            if nxt < 0:
                need = r_prev // r
                if r_prev % r:
                    raise InputError("not a branch multiplicity sequence")
                carry = count - need
                break
            if pos >= len(runs) or runs[pos][0] != nxt:
                raise InputError("not a branch multiplicity sequence")
            r_prev, r = r, nxt
            count = runs[pos][1]
            pos += 1
        beta += q0 * e + first_r
        exps.append(mpq(beta, n))
        e = r
    return n, exps


@dataclass(frozen=True)
class BranchGerm:
    """A branch ``y = xi(x)`` (or ``x = xi(y)`` when ``transposed``)."""

    series: FractionalSeries
    transposed: bool = False

    def __post_init__(self) -> None:
        s = self.series
        if not s.is_reduced:
            raise InputError("branch series must have a reduced denominator")
        if s.terms and s.terms[0][0] < s.denominator:
            raise InputError("branch series must have order at least 1")
        if s.terms and s.terms[0][0] == 0:
            raise InputError("branch does not pass through the centre")

    @classmethod
    def from_terms(cls, den: int, terms: Mapping[int, object] | Iterable[tuple[int, object]], transposed: bool = False) -> "BranchGerm":
        return cls(FractionalSeries.make(den, terms), transposed)

    @property
    def multiplicity(self) -> int:
        return self.series.denominator

    @property
    def smooth(self) -> bool:
        return self.multiplicity == 1

    @cached_property
    def characteristic_exponents(self) -> list[mpq]:
        return characteristic_exponents(self.series)

    @cached_property
    def mult_sequence(self) -> list[int]:
        return sequence_from_exponents(self.multiplicity, self.characteristic_exponents)

    @property
    def delta(self) -> int:
        if self.smooth:
            return 0
        return sum(m * (m - 1) // 2 for m in self.mult_sequence)

    def parametrization(self) -> tuple[A.Poly, A.Poly]:
        n = self.series.denominator
        t_n = [A.ZERO] * n + [A.ONE]
        other = A.from_terms(self.series.terms)
        return (other, t_n) if self.transposed else (t_n, other)

    def conjugates(self) -> list[list[tuple[mpq, mpq, mpq]]]:
        return self.series.conjugates()

    def equation(self) -> A.BiPoly:
        return branch_equation(self)

    def to_json(self) -> dict:
        out = self.series.to_json()
        if self.transposed:
            out["transposed"] = True
        return out


def branch_invariants(q: BranchGerm) -> dict:
    return {
        "m": q.multiplicity,
        "delta": q.delta,
        "mult_sequence": list(q.mult_sequence),
        "characteristic_exponents": [str(e) for e in q.characteristic_exponents],
    }


def conjugates_contact_profile(q: BranchGerm) -> list[mpq]:
    """Contacts of all ordered pairs of distinct conjugates of ``q``.

    The pair (i, j) differs first at the least exponent k/n with a nonzero
    coefficient for which n does not divide k(i - j).
    """
    n = q.multiplicity
    out = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for k, _ in q.series.terms:
                if (k * (i - j)) % n:
                    out.append(mpq(k, n))
                    break
            else:
                raise IndistinguishableAtTruncation("conjugates coincide")
    return out


def branch_equation(q: BranchGerm) -> A.BiPoly:
    """The minimal polynomial of the branch, monic in the dependent variable.

    Power sums of the conjugates are read off the parametrization (only
    exponents divisible by n survive the sum over roots of unity) and turned
    into elementary symmetric functions with Newton's identities.
    """
    n = q.multiplicity
    y_t = A.from_terms(q.series.terms)
    power_sums: list[A.Poly] = [[]]
    yp: A.Poly = [A.ONE]
    for _ in range(n):
        yp = A.mul(yp, y_t)
        # keep only exponents divisible by n and rescale t**(ln) -> x**l
        power_sums.append(A.trim([yp[i] * n for i in range(0, len(yp), n)]))
    elem: list[A.Poly] = [[A.ONE]]
    for j in range(1, n + 1):
        acc: A.Poly = []
        for i in range(1, j + 1):
            term = A.mul(elem[j - i], power_sums[i])
            acc = A.add(acc, term) if i % 2 == 1 else A.sub(acc, term)
        elem.append(A.scale(acc, mpq(1, j)))
    f: A.BiPoly = {}
    for j in range(n + 1):
        sign = -1 if j % 2 else 1
        for xe, c in enumerate(elem[j]):
            if c:
                key = (n - j, xe) if q.transposed else (xe, n - j)
                f[key] = f.get(key, A.ZERO) + sign * c
    return A.bi_trim(f)


def branch_intersection(a: BranchGerm, b: BranchGerm) -> int:
    """Intersection multiplicity of two distinct branches at the centre."""
    if not a.transposed and not b.transposed:
        trunc = _min_trunc(a.series, b.series)
        total = mpq(0)
        for ca in a.conjugates():
            for cb in b.conjugates():
                total += _conjugate_contact(ca, cb, trunc)
        if total.denominator != 1:
            raise TruncationTooShort("non-integral intersection number")
        return int(total)
    return intersection_by_equation(a, b)


def intersection_by_equation(a: BranchGerm, b: BranchGerm) -> int:
    """Order in t of ``a``'s equation evaluated along ``b``'s parametrization."""
    x, y = b.parametrization()
    val = A.bi_eval_param(branch_equation(a), x, y)
    o = A.order(val)
    if o is None:
        raise IndistinguishableAtTruncation("branches coincide")
    return o
