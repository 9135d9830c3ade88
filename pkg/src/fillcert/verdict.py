"""Per-(n, k) decision pipeline and certificate replay."""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from sympy import isprime

from . import charclass, floermodel, homalg, reeb, sftcheck
from .certificate import SCHEMA_VERSION, dumps, jsonable, step
from .errors import FillcertError, InvalidInput, InvariantViolation, ReplayMismatch

OBSTRUCTED = "Obstructed"
INCONCLUSIVE = "Inconclusive"
KNOWN_FILLABLE = "KnownFillable"

NOT_MET = "obstruction criteria not met"

NOTES_OBSTRUCTED = (
    "also no symplectically aspherical or Calabi-Yau filling",
    "quantum cohomology of any semi-positive strong filling has a zero divisor 1+A",
)

REFERENCES = {
    2: "RP^3 is exactly (Weinstein) fillable by T*S^2",
}
ODD_REFERENCE = "the n=2 lens space is exactly fillable"


@dataclass
class Verdict:
    n: int
    k: int
    outcome: str
    detail: str
    notes: list = field(default_factory=list)
    steps: list = field(default_factory=list)
    improved: bool = False

    def to_json(self):
        return {
            "version": SCHEMA_VERSION,
            "n": self.n,
            "k": self.k,
            "mode": "improved" if self.improved else "standard",
            "outcome": {"kind": self.outcome, "detail": self.detail},
            "notes": list(self.notes),
            "steps": self.steps,
        }

    def dumps(self):
        return dumps(self.to_json())

    def text(self):
        lines = [f"n={self.n} k={self.k}: {self.outcome} ({self.detail})"]
        lines += [f"  note: {x}" for x in self.notes]
        lines += [f"  step: {s['rule']}" for s in self.steps]
        return "\n".join(lines)


def k_covered(k):
    return k == 2 or (k > 2 and isprime(k))


# Each rule recomputes its outputs from its inputs; replay calls the same
# functions on the serialized inputs.

def _rule_coverage(inp):
    return {"k_covered": bool(k_covered(inp["k"]))}


def _rule_known_fillable(inp):
    return {"reference": REFERENCES.get(inp["k"], ODD_REFERENCE)}


def _rule_regime(inp):
    return {"n_above_k": inp["n"] > inp["k"]}


def _rule_schedule(inp):
    s = reeb.make_schedule(inp["n"], inp["k"])
    return {"eps": list(s.eps), "violations": s.violations()}


def _rule_digit_sets(inp):
    n, p, improved = inp["n"], inp["p"], inp["improved"]
    ds = charclass.digit_sets(n, p)
    digits = charclass.padic_digits(n, p)
    out = {
        "I": sorted(ds.I),
        "I_half": sorted(ds.I_half),
        "card_I": ds.card_I,
        "exact_count_formula": ds.exact_count_formula,
        "paper_lower_bound": ds.paper_lower_bound,
        "count_discrepancy": ds.discrepancy,
        "digits": list(digits.digits),
        "digit_sum": digits.digit_sum,
    }
    if p % 2:
        out["threshold"] = charclass.digit_sum_threshold(p, improved)
        out["threshold_met"] = charclass.digit_sum_criterion(n, p, improved)
        out["counting_inequality"] = homalg.counting_inequality(len(ds.I_half), p)
    return out


def _rule_emptiness(inp):
    cert = sftcheck.certify_emptiness(reeb.make_schedule(inp["n"], inp["k"]))
    return cert.summary()


def _rule_unit_hit(inp):
    return {"log": floermodel.unit_hit_certificate(inp["n"], inp["k"])}


def _rule_rank_bounds(inp):
    rb = floermodel.rank_bounds(inp["n"], inp["k"], inp["improved"])
    return {"even": rb.even, "odd": rb.odd, "accounting": [list(r) for r in rb.accounting]}


def _rule_chern_surjectivity(inp):
    I = charclass.nonzero_chern_indices(inp["n"], inp["p"])
    return {"degrees": homalg.chern_surjective_degrees(inp["n"], I)}


def _rule_betti(inp):
    n, even, odd = inp["n"], inp["even"], inp["odd"]
    reps = homalg.feasible_betti_vectors(n, even, odd, minimal=True)
    return {
        "count": homalg.count_feasible_betti_vectors(n, even, odd),
        "support_representatives": [list(v.ranks) for v in reps],
    }


def _contradiction_for(n, p, betti, I_half, surj):
    d = homalg.select_contradiction_degree(n, p, betti, I_half)
    if d is not None:
        res = homalg.torsion_contradiction(n, p, d, betti, surj)
        if res["contradiction"]:
            return "paired", d, res["log"]
    if homalg.middle_degree_available(n, betti):
        res = homalg.middle_degree_contradiction(n, p, betti)
        if res["contradiction"]:
            return "middle", n, res["log"]
    return None, None, None


def _rule_contradiction(inp):
    betti = homalg.BettiVector(tuple(inp["betti"]))
    route, d, log = _contradiction_for(inp["n"], inp["p"], betti, set(inp["I_half"]),
                                       inp["surjective_degrees"])
    if route is not None:
        homalg.replay_contradiction_log(inp["n"], inp["p"], betti, log, inp["surjective_degrees"])
    return {"route": route, "degree": d, "log": log}


def _rule_outcome(inp):
    return _outcome(inp["k"], inp["routes"], inp["threshold_met"], inp["I_empty"])


RULES = {
    "coverage": _rule_coverage,
    "known_fillable": _rule_known_fillable,
    "regime": _rule_regime,
    "perturbation_schedule": _rule_schedule,
    "digit_sets": _rule_digit_sets,
    "emptiness_certificate": _rule_emptiness,
    "unit_hit": _rule_unit_hit,
    "rank_bounds": _rule_rank_bounds,
    "chern_surjectivity": _rule_chern_surjectivity,
    "feasible_betti_vectors": _rule_betti,
    "contradiction": _rule_contradiction,
    "outcome": _rule_outcome,
}

ANCHORS = {
    "coverage": "k = 2 or an odd prime",
    "known_fillable": "n = 2 exceptional case",
    "regime": "symplectic part needs n > k",
    "perturbation_schedule": "orbit conditions eps_j < eps_{j+1}/k",
    "digit_sets": "digit-wise dominance set I and its lower half",
    "emptiness_certificate": "contact energy and virtual dimension case analysis",
    "unit_hit": "point count k and closed correction",
    "rank_bounds": "rank bounds from the surviving generators",
    "chern_surjectivity": "mod-p Chern classes and Gysin restriction",
    "feasible_betti_vectors": "duality symmetry of real cohomology",
    "contradiction": "long exact sequences of the pair with duality",
    "outcome": "combination of the symplectic and topological parts",
}


def _run(steps, rule, inputs):
    outputs = jsonable(RULES[rule](inputs))
    steps.append(step(rule, inputs, outputs, ANCHORS[rule]))
    return outputs


def _outcome(k, routes, threshold_met, I_empty):
    if routes and all(r is not None for r in routes):
        if k == 2:
            tag = "rp_nonfillable"
        elif threshold_met:
            tag = "lens_digit_threshold"
        elif "middle" in routes:
            tag = "lens_middle_degree"
        else:
            tag = "lens_direct_search"
        return {"kind": OBSTRUCTED, "detail": tag}
    reason = NOT_MET + (": total Chern class trivial" if I_empty else "")
    return {"kind": INCONCLUSIVE, "detail": reason}


def decide(n, k, improved=False):
    if not (isinstance(n, int) and isinstance(k, int)) or n < 2 or k < 2:
        raise InvalidInput("need integers n >= 2 and k >= 2")
    steps = []
    base = {"n": n, "k": k}

    def verdict(kind, detail, notes=()):
        return Verdict(n, k, kind, detail, list(notes), steps, improved)

    if not _run(steps, "coverage", base)["k_covered"]:
        return verdict(INCONCLUSIVE, NOT_MET + ": k not covered")
    if n == 2:
        ref = _run(steps, "known_fillable", base)["reference"]
        return verdict(KNOWN_FILLABLE, ref)
    if not _run(steps, "regime", base)["n_above_k"]:
        return verdict(INCONCLUSIVE, NOT_MET + ": symplectic part requires n > k")

    p = k
    sched = _run(steps, "perturbation_schedule", base)
    if sched["violations"]:
        raise InvariantViolation("perturbation schedule invalid")
    ds = _run(steps, "digit_sets", {"n": n, "p": p, "improved": improved})
    empt = _run(steps, "emptiness_certificate", base)
    if not empt["ok"]:
        raise InvariantViolation("emptiness certificate failed with n > k")
    _run(steps, "unit_hit", base)
    rb = _run(steps, "rank_bounds", {**base, "improved": improved})
    surj = _run(steps, "chern_surjectivity", {"n": n, "p": p})["degrees"]
    vecs = _run(steps, "feasible_betti_vectors", {"n": n, "even": rb["even"], "odd": rb["odd"]})

    routes = []
    for ranks in vecs["support_representatives"]:
        res = _run(steps, "contradiction", {
            "n": n, "p": p, "betti": ranks, "I_half": ds["I_half"], "surjective_degrees": surj,
        })
        routes.append(res["route"])
        if res["route"] is None:
            break
    out = _run(steps, "outcome", {
        "k": k, "routes": routes, "threshold_met": ds.get("threshold_met", False),
        "I_empty": not ds["I"],
    })
    notes = NOTES_OBSTRUCTED if out["kind"] == OBSTRUCTED else ()
    return verdict(out["kind"], out["detail"], notes)


def replay(doc):
    """Re-execute every step of a serialized certificate; raise ReplayMismatch on any difference."""
    if not isinstance(doc, dict) or doc.get("version") != SCHEMA_VERSION:
        raise ReplayMismatch("missing or unsupported schema version")
    for key in ("n", "k", "outcome", "notes", "steps"):
        if key not in doc:
            raise ReplayMismatch(f"certificate lacks {key!r}")
    for idx, st in enumerate(doc["steps"]):
        rule = st.get("rule") if isinstance(st, dict) else None
        if rule not in RULES:
            raise ReplayMismatch(f"step {idx}: unknown rule {rule!r}")
        if "inputs" not in st or "outputs" not in st:
            raise ReplayMismatch(f"step {idx}: missing inputs or outputs")
        try:
            got = jsonable(RULES[rule](st["inputs"]))
        except Exception as exc:  # any failure on tampered inputs is a mismatch
            raise ReplayMismatch(f"step {idx} ({rule}) failed: {exc}") from exc
        if json.dumps(got, sort_keys=True) != json.dumps(st["outputs"], sort_keys=True):
            raise ReplayMismatch(f"step {idx} ({rule}) outputs differ")
    improved = doc.get("mode") == "improved"
    try:
        fresh = decide(doc["n"], doc["k"], improved).to_json()
    except FillcertError as exc:
        raise ReplayMismatch(f"certificate header rejected: {exc}") from exc
    if json.loads(dumps(fresh)) != json.loads(json.dumps(doc, sort_keys=True)):
        raise ReplayMismatch("certificate differs from a fresh derivation")
    return doc["outcome"]


def _scan_row(args):
    n, k, improved = args
    t0 = time.perf_counter()
    try:
        v = decide(n, k, improved)
        row = {"n": n, "k": k, "outcome": v.outcome, "detail": v.detail, "error": None}
    except InvariantViolation as exc:
        row = {"n": n, "k": k, "outcome": None, "detail": None, "error": f"invariant: {exc}"}
    except FillcertError as exc:
        row = {"n": n, "k": k, "outcome": None, "detail": None, "error": str(exc)}
    row["ms"] = round(1000 * (time.perf_counter() - t0))
    return row


def scan(n_values, k_values, improved=False, jobs=1):
    """Table of verdicts in canonical (k, n) order; timing per row."""
    tasks = [(n, k, improved) for k in sorted(set(k_values)) for n in sorted(set(n_values))]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_scan_row, tasks))
    return [_scan_row(t) for t in tasks]
