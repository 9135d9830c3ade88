"""
Reeb orbits, breakings and the emptiness certificate
====================================================

Builds the perturbed orbit census for a lens space, lists the feasible
breakings of the top generator, then certifies that every rigid count
that could spoil the argument vanishes.
"""

from fractions import Fraction

from fillcert import reeb, sftcheck

n, k = 5, 3
sched = reeb.make_schedule(n, k)
print("perturbation schedule:", [str(e) for e in sched.eps])

# Orbits up to just above period k
for orb in reeb.enumerate_orbits(sched, k + sched.eps[1]):
    print(f"  {orb}: period {orb.period}, degree {orb.sft_degree}, class {orb.homology_class}")

# Breakings of check gamma_0^k through the point constraint
top = reeb.orbit(sched, 0, k)
for rep in sftcheck.enumerate_feasible(sched, "check", top):
    print(f"  {rep.config.describe():55s} vdim {rep.virtual_dim:>3}  {rep.verdict}")

cert = sftcheck.certify_emptiness(sched)
print("certificate ok:", cert.ok, "| largest vdim:", cert.max_vdim,
      "| positive ends checked:", len(cert.positive_ends))

# n = k = 2 is the known fillable case and the certificate must fail there
bad = sftcheck.certify_emptiness(reeb.make_schedule(2, 2))
print("n=k=2 violations:")
for rep in bad.violations:
    print("  ", rep.config.describe(), "vdim", rep.virtual_dim)

# Exact rationals throughout
assert isinstance(top.period, Fraction)
