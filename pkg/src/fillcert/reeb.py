"""Reeb orbits of the perturbed Boothby-Wang form on S^{2n-1}/Z_k.

Periods are exact rationals.  The orbit over the i-th critical point with
multiplicity j is written gamma_i^j; its period is j(1 + eps_i).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import CensusUncertified, InvalidInput, InvariantViolation

CHECK = "check"
HAT = "hat"


@dataclass(frozen=True)
class PerturbationSchedule:
    n: int
    k: int
    eps: tuple

    @property
    def census_limit(self):
        return Fraction(self.k + 1)

    def period(self, base, mult):
        return mult * (1 + self.eps[base])

    def violations(self):
        n, k, eps = self.n, self.k, self.eps
        out = []
        if len(eps) != n:
            out.append("wrong number of perturbation values")
            return out
        if any(e <= 0 for e in eps):
            out.append("perturbations must be positive")
        for j in range(n - 1):
            if not eps[j] < eps[j + 1] / k:
                out.append(f"eps_{j} < eps_{j + 1}/k fails")
        if not k * (1 + eps[-1]) < k + 1:
            out.append("k-fold covers reach the census limit k+1")
        # Distinct periods among multiplicities <= k is the same as no ratio
        # (1+eps_i)/(1+eps_j) equal to j'/j'' with 1 <= j', j'' <= k.
        periods = [self.period(i, j) for i in range(n) for j in range(1, k + 1)]
        if len(set(periods)) != len(periods):
            out.append("period coincidence below the census limit")
        return out


def make_schedule(n, k):
    """eps_j = (k+1)^j / (k (k+1)^n); validated before returning."""
    if n < 2 or k < 2:
        raise InvalidInput("need n >= 2 and k >= 2")
    delta = Fraction(1, k * (k + 1) ** n)
    sched = PerturbationSchedule(n, k, tuple(delta * (k + 1) ** j for j in range(n)))
    bad = sched.violations()
    if bad:
        raise InvariantViolation("; ".join(bad))
    return sched


@dataclass(frozen=True, order=True)
class ReebOrbitClass:
    period: Fraction
    base: int
    mult: int
    n: int
    k: int

    @property
    def sft_degree(self):
        return 2 * self.base + 2 * self.mult - 2

    @property
    def homology_class(self):
        return self.mult % self.k

    @property
    def contractible(self):
        return self.mult % self.k == 0

    @property
    def is_good(self):
        # A cover is bad iff its CZ parity differs from the simple orbit's.
        simple = 2 * self.base + 2 - 2 - self.n + 3
        return (cz_index(self) - simple) % 2 == 0

    @property
    def label(self):
        return f"{self.base}^{self.mult}"

    def __str__(self):
        return f"gamma_{self.base}^{self.mult}"


def orbit(schedule, base, mult):
    if not 0 <= base < schedule.n or mult < 1:
        raise InvalidInput(f"no orbit gamma_{base}^{mult} for n={schedule.n}")
    return ReebOrbitClass(schedule.period(base, mult), base, mult, schedule.n, schedule.k)


def _check_bound(schedule, bound):
    if Fraction(bound) >= schedule.census_limit:
        raise CensusUncertified(
            f"action bound {bound} >= {schedule.census_limit}: census not certified"
        )


def enumerate_orbits(schedule, action_bound):
    """All gamma_i^j with period <= action_bound, by increasing period."""
    bound = Fraction(action_bound)
    _check_bound(schedule, bound)
    out = []
    for j in range(1, schedule.k + 1):
        for i in range(schedule.n):
            p = schedule.period(i, j)
            if p <= bound:
                out.append(ReebOrbitClass(p, i, j, schedule.n, schedule.k))
    out.sort()
    return out


def cz_index(orb, trivialization="disk_over_Ok"):
    """Conley-Zehnder index in the O(-k) disk or, for contractible orbits, the contraction."""
    disk = orb.sft_degree - orb.n + 3
    if trivialization == "disk_over_Ok":
        return disk
    if trivialization == "contraction":
        if not orb.contractible:
            raise InvalidInput(f"{orb} is not contractible in the link")
        return disk + 2 * (orb.mult // orb.k) * (orb.n - orb.k)
    raise InvalidInput(f"unknown trivialization {trivialization!r}")


@dataclass(frozen=True)
class GeneratorLabel:
    kind: str
    orbit: ReebOrbitClass

    @property
    def z2_grading(self):
        return 1 if self.kind == CHECK else 0

    @property
    def local_grading(self):
        mu = cz_index(self.orbit)
        return self.orbit.n - mu if self.kind == CHECK else self.orbit.n - mu - 1

    @property
    def action_proxy(self):
        return -self.orbit.period

    @property
    def name(self):
        return f"{'c' if self.kind == CHECK else 'h'}{self.orbit.label}"

    def __str__(self):
        return self.name


def generators_in_window(schedule, lo, hi):
    """Check and hat labels for every orbit with period in (lo, hi]."""
    lo, hi = Fraction(lo), Fraction(hi)
    if hi <= lo:
        return []
    out = []
    for orb in enumerate_orbits(schedule, hi):
        if orb.period > lo:
            out.append(GeneratorLabel(CHECK, orb))
            out.append(GeneratorLabel(HAT, orb))
    return out


def period_gap(schedule, a, delta):
    """True iff no orbit period lies in [a/(1+delta), a]."""
    a, delta = Fraction(a), Fraction(delta)
    if delta <= 0:
        raise InvalidInput("delta must be positive")
    lo = a / (1 + delta)
    return not any(lo <= o.period for o in enumerate_orbits(schedule, a))
