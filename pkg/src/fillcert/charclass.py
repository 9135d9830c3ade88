"""Chern classes of the quotient-singularity links in truncated Z[u].

The total Chern class of the total space of O(-k) over CP^{n-1} is
(1+u)^n (1-ku); restricting to the link reduces it mod k in degrees
0 < i < n.  Everything here is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, prod

from sympy import isprime

from .errors import InvalidInput, InvariantViolation


@dataclass(frozen=True)
class TruncatedPoly:
    """Polynomial in u with terms of degree > trunc_degree discarded.

    ``modulus == 0`` means integer coefficients.
    """

    modulus: int
    trunc_degree: int
    coeffs: tuple

    def __post_init__(self):
        if self.modulus < 0 or self.trunc_degree < 0:
            raise InvalidInput("modulus and trunc_degree must be nonnegative")
        if len(self.coeffs) != self.trunc_degree + 1:
            raise InvalidInput(
                f"expected {self.trunc_degree + 1} coefficients, got {len(self.coeffs)}"
            )
        if self.modulus and (min(self.coeffs) < 0 or max(self.coeffs) >= self.modulus):
            raise InvalidInput("coefficients must be reduced mod modulus")

    @classmethod
    def from_coeffs(cls, coeffs, trunc_degree, modulus=0):
        coeffs = list(coeffs)[: trunc_degree + 1]
        coeffs += [0] * (trunc_degree + 1 - len(coeffs))
        if modulus:
            coeffs = [c % modulus for c in coeffs]
        return cls(modulus, trunc_degree, tuple(coeffs))

    @classmethod
    def one(cls, trunc_degree, modulus=0):
        return cls.from_coeffs([1], trunc_degree, modulus)

    def _check_compatible(self, other):
        if (self.modulus, self.trunc_degree) != (other.modulus, other.trunc_degree):
            raise InvalidInput("polynomials live in different truncated rings")

    def __add__(self, other):
        self._check_compatible(other)
        return self.from_coeffs(
            [a + b for a, b in zip(self.coeffs, other.coeffs)],
            self.trunc_degree,
            self.modulus,
        )

    def __mul__(self, other):
        self._check_compatible(other)
        d = self.trunc_degree
        out = [0] * (d + 1)
        rhs = [(j, b) for j, b in enumerate(other.coeffs) if b]
        for i, a in [(i, a) for i, a in enumerate(self.coeffs) if a]:
            for j, b in rhs:
                if i + j > d:
                    break
                out[i + j] += a * b
        return self.from_coeffs(out, d, self.modulus)

    def __pow__(self, e):
        if e < 0:
            raise InvalidInput("negative exponent")
        result = self.one(self.trunc_degree, self.modulus)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def reduce(self, modulus):
        if self.modulus and self.modulus % modulus:
            raise InvalidInput("cannot reduce to a modulus that does not divide the current one")
        return self.from_coeffs(self.coeffs, self.trunc_degree, modulus)

    def support(self):
        return {d for d, c in enumerate(self.coeffs) if c}

    def is_one(self):
        return self.coeffs[0] == 1 and not any(self.coeffs[1:])


@dataclass(frozen=True)
class PadicDigits:
    base: int
    digits: tuple  # least significant first
    value: int

    def __post_init__(self):
        if sum(d * self.base**s for s, d in enumerate(self.digits)) != self.value:
            raise InvariantViolation("digits do not represent value")
        if self.value and self.digits[-1] == 0:
            raise InvariantViolation("leading digit must be nonzero")

    @property
    def digit_sum(self):
        return sum(self.digits)


def padic_digits(value, p):
    if value < 0 or p < 2:
        raise InvalidInput("need value >= 0 and base >= 2")
    digits = []
    v = value
    while v:
        v, r = divmod(v, p)
        digits.append(r)
    return PadicDigits(p, tuple(digits) if digits else (0,), value)


def _require_prime(p, what="modulus"):
    if not isprime(p):
        raise InvalidInput(f"{what} {p} is not prime")


def truncated_total_chern(n, k, modulus=0):
    """Expansion of (1+u)^n (1-ku) in Z[u]/(u^n), optionally reduced mod a prime."""
    if n < 2 or k < 2:
        raise InvalidInput("need n >= 2 and k >= 2")
    if modulus:
        _require_prime(modulus)
    d = n - 1
    # reducing first is a ring map, and keeps powers of (1+u) sparse mod p
    tangent = TruncatedPoly.from_coeffs([1, 1], d, modulus) ** n
    line = TruncatedPoly.from_coeffs([1, -k], d, modulus)
    return tangent * line


def binom_mod_p(m, l, p):
    """binom(m, l) mod p as the product of digit binomials."""
    _require_prime(p, "p")
    if l < 0 or m < 0:
        return 0
    result = 1
    while m or l:
        m, mi = divmod(m, p)
        l, li = divmod(l, p)
        if li > mi:
            return 0
        result = result * comb(mi, li) % p
    return result % p


def digit_dominated(i, n, p):
    """True when every base-p digit of i is at most the matching digit of n."""
    while i or n:
        n, a = divmod(n, p)
        i, b = divmod(i, p)
        if b > a:
            return False
    return True


def dominated_indices(n, p):
    return {i for i in range(1, n) if digit_dominated(i, n, p)}


def frobenius_product_support(n, p):
    """Support of prod_s (1 + sum_j binom(a_s, j) u^{p^s j}) mod p, truncated below n.

    This is the digit-by-digit factorisation of (1+u)^n mod p; it is
    computed on its own as a cross-check of the direct expansion.
    """
    digits = padic_digits(n, p).digits
    poly = TruncatedPoly.one(n - 1, p)
    for s, a in enumerate(digits):
        factor = [0] * n
        factor[0] = 1
        for j in range(1, a + 1):
            deg = p**s * j
            if deg < n:
                factor[deg] = comb(a, j) % p
        poly = poly * TruncatedPoly.from_coeffs(factor, n - 1, p)
    return {i for i in poly.support() if 0 < i < n}


def nonzero_chern_indices(n, p):
    """Indices 0 < i < n with c_i nonzero mod p for the degree -p bundle."""
    if n < 2:
        raise InvalidInput("need n >= 2")
    _require_prime(p, "p")
    poly = truncated_total_chern(n, p, p)
    found = {i for i in poly.support() if 0 < i < n}
    if found != frobenius_product_support(n, p) or found != dominated_indices(n, p):
        raise InvariantViolation(f"Chern support disagrees with digit dominance at n={n}, p={p}")
    return found


@dataclass(frozen=True)
class DigitSets:
    n: int
    p: int
    I: frozenset
    I_half: frozenset
    card_I: int
    paper_lower_bound: int

    @property
    def exact_count_formula(self):
        return prod(a + 1 for a in padic_digits(self.n, self.p).digits) - 2

    @property
    def discrepancy(self):
        """True when the exact count differs from digit_sum - 2."""
        return self.card_I != self.paper_lower_bound


def digit_sets(n, p):
    if n < 2:
        raise InvalidInput("need n >= 2")
    _require_prime(p, "p")
    I = frozenset(dominated_indices(n, p))
    half = frozenset(i for i in I if 2 * i < n)
    lower = padic_digits(n, p).digit_sum - 2
    out = DigitSets(n, p, I, half, len(I), lower)
    if out.card_I < lower:
        raise InvariantViolation(f"|I| = {out.card_I} below digit_sum - 2 = {lower}")
    if any(n - i not in I for i in I):
        raise InvariantViolation("I is not closed under i -> n - i")
    return out


def digit_sum_threshold(p, improved=False):
    return p + 3 if improved else 3 * p - 3


def digit_sum_criterion(n, p, improved=False):
    return padic_digits(n, p).digit_sum > digit_sum_threshold(p, improved)
