"""Feasibility screening of broken holomorphic configurations.

A configuration has a positive end (a check generator, or a free S^1
family when it is the bottom level of a cascade), an optional negative
end, a multiset of negative punctures and possibly the interior point
constraint q.  Screening applies, in order: the homology class of the
total multiplicity mod k, nonnegativity of the contact energy, and the
virtual dimension.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm

from . import reeb
from .errors import InvalidInput, InvariantViolation

FAMILY = "family"
POSITIVE_KINDS = (reeb.CHECK, reeb.HAT, FAMILY)

# Codimensions matched against the anchored index values: the point q
# costs 2n, the orbit-point constraint of a check end costs 1.
POINT_CODIM_OFFSET = {reeb.CHECK: 2, FAMILY: 3}


@dataclass(frozen=True)
class BreakingConfig:
    positive_kind: str
    positive: reeb.ReebOrbitClass
    punctures: tuple = ()
    negative: reeb.ReebOrbitClass | None = None
    has_point_constraint: bool = True

    def __post_init__(self):
        if self.positive_kind not in POSITIVE_KINDS:
            raise InvalidInput(f"unknown positive end kind {self.positive_kind!r}")
        object.__setattr__(self, "punctures", tuple(sorted(self.punctures)))

    @property
    def k(self):
        return self.positive.k

    @property
    def wrap(self):
        neg = self.negative.mult if self.negative is not None else 0
        return self.positive.mult - neg - sum(o.mult for o in self.punctures)

    @property
    def admissible(self):
        return self.wrap % self.k == 0

    @property
    def wrap_units(self):
        return self.wrap // self.k

    def describe(self):
        parts = [f"{self.positive_kind} {self.positive}"]
        if self.negative is not None:
            parts.append(f"-> {self.negative}")
        if self.has_point_constraint:
            parts.append("with q")
        parts.append("punctures {" + ", ".join(str(o) for o in self.punctures) + "}")
        return " ".join(parts)

    def key(self):
        neg = (self.negative.base, self.negative.mult) if self.negative else (-1, -1)
        return (
            self.positive_kind,
            self.positive.base,
            self.positive.mult,
            neg,
            tuple((o.base, o.mult) for o in self.punctures),
            self.has_point_constraint,
        )


@dataclass(frozen=True)
class FeasibilityReport:
    config: BreakingConfig
    admissible: bool
    energy: Fraction
    wrap_units: int | None
    virtual_dim: int | None
    verdict: str

    def as_dict(self):
        return {
            "config": self.config.describe(),
            "admissible": self.admissible,
            "energy": fraction_str(self.energy),
            "wrap_units": self.wrap_units,
            "virtual_dim": self.virtual_dim,
            "verdict": self.verdict,
        }


def fraction_str(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def contact_energy(schedule, config):
    """C(gamma_+) - C(gamma_-) - sum over punctures, with C = period."""
    e = config.positive.period
    if config.negative is not None:
        e -= config.negative.period
    return e - sum((o.period for o in config.punctures), Fraction(0))


def virtual_dim(config, n, k):
    if not config.admissible:
        raise InvalidInput(f"inadmissible configuration {config.describe()}")
    if not config.has_point_constraint or config.negative is not None:
        raise InvalidInput("virtual dimension is only modelled for point-constrained bottom levels")
    if config.positive_kind not in POINT_CODIM_OFFSET:
        raise InvalidInput("hat ends carry no point-class contribution")
    return (
        config.positive.sft_degree
        + POINT_CODIM_OFFSET[config.positive_kind]
        - 2 * n
        - sum(o.sft_degree for o in config.punctures)
        + 2 * config.wrap_units * (n - k)
    )


def report(schedule, config):
    energy = contact_energy(schedule, config)
    if not config.admissible:
        return FeasibilityReport(config, False, energy, None, None, "inadmissible")
    if energy < 0:
        return FeasibilityReport(config, True, energy, config.wrap_units, None, "negative-energy")
    if config.negative is not None or not config.has_point_constraint:
        return FeasibilityReport(config, True, energy, config.wrap_units, None, "transition")
    vd = virtual_dim(config, schedule.n, schedule.k)
    verdict = "generically-empty" if vd < 0 else "potentially-nonempty"
    return FeasibilityReport(config, True, energy, config.wrap_units, vd, verdict)


def _scale(orbits):
    """Common denominator turning every period into an integer."""
    d = 1
    for o in orbits:
        d = lcm(d, o.period.denominator)
    return d


def _puncture_multisets(census, budget, scale):
    """Nonempty multisets from census with total period <= budget (pruned DFS).

    Yields (multiset, total multiplicity); arithmetic is on integer units.
    """
    units = [int(o.period * scale) for o in census]
    limit = int(budget * scale)
    stack = [(0, (), 0, 0)]
    while stack:
        start, chosen, used, mults = stack.pop()
        for idx in range(start, len(census)):
            total = used + units[idx]
            if total > limit:
                # census is sorted by period, so every later orbit overshoots too
                break
            nxt = chosen + (census[idx],)
            m = mults + census[idx].mult
            yield nxt, m
            stack.append((idx, nxt, total, m))


def enumerate_feasible(schedule, positive_kind, positive, action_bound=None,
                       point_constraint=True, negative_ends=False):
    """Every admissible, energy-nonnegative breaking of the given positive end.

    Puncture multisets are nonempty: the unbroken curve is the object being
    counted, not a breaking of it.  With ``negative_ends`` the cascade
    transitions (optional negative end, no point constraint) are listed too.
    """
    if action_bound is None:
        action_bound = positive.period
    bound = Fraction(action_bound)
    if positive.period > bound:
        raise InvalidInput("positive end lies above the action bound")
    census = reeb.enumerate_orbits(schedule, bound)
    scale = _scale(census + [positive])
    k = schedule.k
    configs = []
    for ms, m in _puncture_multisets(census, positive.period, scale):
        if (positive.mult - m) % k == 0:
            configs.append(BreakingConfig(positive_kind, positive, ms, None, point_constraint))
    if negative_ends:
        for neg in census:
            if neg.period >= positive.period:
                continue
            wrap0 = positive.mult - neg.mult
            if wrap0 % k == 0:
                configs.append(BreakingConfig(positive_kind, positive, (), neg, False))
            for ms, m in _puncture_multisets(census, positive.period - neg.period, scale):
                if (wrap0 - m) % k == 0:
                    configs.append(BreakingConfig(positive_kind, positive, ms, neg, False))
    out = [report(schedule, cfg) for cfg in configs]
    if any(r.energy < 0 or not r.admissible for r in out):
        raise InvariantViolation("pruned enumeration produced an infeasible configuration")
    out.sort(key=lambda r: r.config.key())
    return out


def brute_force_survivors(schedule, positive_kind, positive, point_constraint=True):
    """Unpruned oracle over every multiset whose total multiplicity fits.

    Each orbit has period above its multiplicity, so total multiplicity
    <= floor(period) is necessary; energy and class are then tested with
    plain Fraction sums.
    """
    census = reeb.enumerate_orbits(schedule, positive.period)
    cap = int(positive.period)

    def multisets(idx, left):
        if idx == len(census):
            yield ()
            return
        o = census[idx]
        for count in range(left // o.mult + 1):
            for rest in multisets(idx + 1, left - count * o.mult):
                yield (o,) * count + rest

    keys = set()
    for ms in multisets(0, cap):
        if not ms:
            continue
        cfg = BreakingConfig(positive_kind, positive, ms, None, point_constraint)
        if cfg.admissible and contact_energy(schedule, cfg) >= 0:
            keys.add(cfg.key())
    return keys


def _min_period_by_residue(census, k):
    """Least total period of a puncture multiset in each multiplicity class mod k."""
    best = [None] * k
    best[0] = Fraction(0)
    changed = True
    while changed:
        changed = False
        for r in range(k):
            if best[r] is None:
                continue
            for o in census:
                t = (r + o.mult) % k
                cand = best[r] + o.period
                if best[t] is None or cand < best[t]:
                    best[t] = cand
                    changed = True
    return best


def reachable_bottom_families(schedule, positive):
    """Families that can carry the bottom level of a cascade starting at positive.

    A family gamma_- is reached from gamma_+ when its period is strictly
    smaller and some (possibly empty) puncture multiset has the right class
    and nonnegative energy.
    """
    census = reeb.enumerate_orbits(schedule, positive.period)
    best = _min_period_by_residue(census, schedule.k)
    seen = set()
    frontier = [positive]
    while frontier:
        top = frontier.pop()
        for neg in census:
            if neg in seen or neg.period >= top.period:
                continue
            need = best[(top.mult - neg.mult) % schedule.k]
            if need is not None and neg.period + need <= top.period:
                seen.add(neg)
                frontier.append(neg)
    return sorted(seen)


@dataclass
class EmptinessCertificate:
    n: int
    k: int
    positive_ends: list
    reports: list
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    @property
    def max_vdim(self):
        dims = [r.virtual_dim for r in self.reports if r.virtual_dim is not None]
        return max(dims) if dims else None

    def summary(self):
        return {
            "ok": self.ok,
            "positive_ends": [f"{kind} {o}" for kind, o in self.positive_ends],
            "survivors": len(self.reports),
            "max_vdim": self.max_vdim,
            "violations": [r.as_dict() for r in self.violations],
        }


def certification_ends(schedule):
    """Positive ends whose point-constrained breakings must all be rigid-empty.

    check gamma_0^k; check gamma_j^i for i + j <= k, j >= 1; and every free
    family reachable as a cascade bottom from those (the gamma_0^s, s < k).
    """
    n, k = schedule.n, schedule.k
    ends = [(reeb.CHECK, reeb.orbit(schedule, 0, k))]
    for mult in range(1, k + 1):
        for base in range(1, min(k - mult, n - 1) + 1):
            ends.append((reeb.CHECK, reeb.orbit(schedule, base, mult)))
    families = set()
    for _, o in ends:
        families.update(reachable_bottom_families(schedule, o))
    ends.extend((FAMILY, o) for o in sorted(families))
    return ends


@lru_cache(maxsize=64)
def certify_emptiness(schedule):
    """Screen every breaking used by the unit-hit argument; collect vdim >= 0 ones."""
    n, k = schedule.n, schedule.k
    ends = certification_ends(schedule)
    cert = EmptinessCertificate(n, k, ends, [])
    for kind, o in ends:
        for r in enumerate_feasible(schedule, kind, o):
            cert.reports.append(r)
            if r.virtual_dim is not None and r.virtual_dim >= 0:
                cert.violations.append(r)
    return cert


def puncture_counter(config):
    return Counter((o.base, o.mult) for o in config.punctures)
