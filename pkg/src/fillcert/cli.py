"""Command line entry point ``fillcert``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import charclass, reeb, sftcheck, verdict
from .certificate import dumps, jsonable
from .errors import InvalidInput, InvariantViolation, ReplayMismatch

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT, EXIT_REPLAY = 0, 1, 2, 3


def _rational(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational p/q: {text!r}") from None


def _orbit_spec(text):
    """kind:base:mult, e.g. check:0:2 or family:0:1."""
    parts = text.split(":")
    if len(parts) != 3 or parts[0] not in sftcheck.POSITIVE_KINDS:
        raise argparse.ArgumentTypeError("orbit spec must be kind:base:mult with kind check|hat|family")
    try:
        return parts[0], int(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError("base and mult must be integers") from None


def build_parser():
    ap = argparse.ArgumentParser(prog="fillcert", description="Non-fillability certificates for S^{2n-1}/Z_k.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    d = sub.add_parser("decide", help="verdict and certificate for one (n, k)")
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--k", type=int, required=True)
    d.add_argument("--improved", action="store_true", help="use the improved rank bound and threshold")
    d.add_argument("--format", choices=["json", "text"], default="json")

    s = sub.add_parser("scan", help="verdict table over a range of n")
    s.add_argument("--n-min", type=int, required=True)
    s.add_argument("--n-max", type=int, required=True)
    s.add_argument("--k", type=int, nargs="+", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--improved", action="store_true")
    s.add_argument("--jobs", type=int, default=1)

    c = sub.add_parser("chern", help="truncated total Chern class")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--mod", type=int, default=0)

    o = sub.add_parser("orbits", help="Reeb orbits up to an action bound")
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--k", type=int, required=True)
    o.add_argument("--action", type=_rational, required=True)

    g = sub.add_parser("configs", help="feasible breakings of a positive end")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--positive", type=_orbit_spec, required=True)
    g.add_argument("--no-point", action="store_true", help="drop the interior point constraint")

    r = sub.add_parser("replay", help="re-execute a certificate")
    r.add_argument("certificate")
    return ap


def _cmd_decide(a):
    v = verdict.decide(a.n, a.k, a.improved)
    print(v.dumps() if a.format == "json" else v.text())
    return EXIT_OK


def _cmd_scan(a):
    rows = verdict.scan(range(a.n_min, a.n_max + 1), a.k, a.improved, a.jobs)
    with open(a.out, "w") as fh:
        fh.write(dumps({"rows": rows}) + "\n")
    for row in rows:
        print(f"n={row['n']:>4} k={row['k']:>3} {row['outcome'] or 'ERROR'}: "
              f"{row['detail'] or row['error']} ({row['ms']} ms)")
    if any(r["error"] and r["error"].startswith("invariant") for r in rows):
        return EXIT_INVARIANT
    return EXIT_OK


def _cmd_chern(a):
    poly = charclass.truncated_total_chern(a.n, a.k, a.mod)
    print(json.dumps({"n": a.n, "k": a.k, "modulus": a.mod, "coeffs": list(poly.coeffs)}))
    return EXIT_OK


def _cmd_orbits(a):
    sched = reeb.make_schedule(a.n, a.k)
    for orb in reeb.enumerate_orbits(sched, a.action):
        print(json.dumps(jsonable({
            "orbit": str(orb), "period": orb.period, "sft_degree": orb.sft_degree,
            "homology_class": orb.homology_class, "good": orb.is_good,
        })))
    return EXIT_OK


def _cmd_configs(a):
    sched = reeb.make_schedule(a.n, a.k)
    kind, base, mult = a.positive
    pos = reeb.orbit(sched, base, mult)
    for r in sftcheck.enumerate_feasible(sched, kind, pos, point_constraint=not a.no_point):
        print(json.dumps(jsonable(r.as_dict())))
    return EXIT_OK


def _cmd_replay(a):
    try:
        with open(a.certificate) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"cannot read certificate: {exc}") from exc
    out = verdict.replay(doc)
    print(f"replay ok: {out['kind']} ({out['detail']})")
    return EXIT_OK


COMMANDS = {
    "decide": _cmd_decide, "scan": _cmd_scan, "chern": _cmd_chern,
    "orbits": _cmd_orbits, "configs": _cmd_configs, "replay": _cmd_replay,
}


def main(argv=None):
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return COMMANDS[a.cmd](a)
    except ReplayMismatch as exc:
        print(f"replay mismatch: {exc}", file=sys.stderr)
        return EXIT_REPLAY
    except InvariantViolation as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except InvalidInput as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
