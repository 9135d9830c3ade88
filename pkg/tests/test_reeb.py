from fractions import Fraction

import pytest

from fillcert import reeb
from fillcert.errors import CensusUncertified, InvalidInput


def brute_orbits(sched, bound):
    out = []
    for j in range(1, sched.k + 2):
        for i in range(sched.n):
            per = j * (1 + sched.eps[i])
            if per <= bound:
                out.append((per, i, j))
    return sorted(out)


def test_schedule_n3_k2():
    s = reeb.make_schedule(3, 2)
    assert s.eps == (Fraction(1, 54), Fraction(3, 54), Fraction(9, 54))
    assert 2 * (1 + Fraction(1, 6)) < 3
    assert s.violations() == []


def test_schedule_n2_k2():
    assert reeb.make_schedule(2, 2).eps == (Fraction(1, 18), Fraction(3, 18))


def test_schedule_consecutive_ratio():
    for n in range(2, 9):
        for k in range(2, 8):
            s = reeb.make_schedule(n, k)
            assert all(s.eps[j + 1] / s.eps[j] == k + 1 for j in range(n - 1))
            assert all(s.eps[j] < s.eps[j + 1] / k for j in range(n - 1))


def test_schedule_rejects_small():
    with pytest.raises(InvalidInput):
        reeb.make_schedule(1, 2)


def test_schedule_violations_detected():
    bad = reeb.PerturbationSchedule(2, 2, (Fraction(1, 10), Fraction(1, 10)))
    assert bad.violations()


def test_enumerate_n3_k2():
    s = reeb.make_schedule(3, 2)
    got = [(o.base, o.mult) for o in reeb.enumerate_orbits(s, 2 + s.eps[1])]
    assert got == [(0, 1), (1, 1), (2, 1), (0, 2)]


def test_enumerate_small_bound_empty():
    assert reeb.enumerate_orbits(reeb.make_schedule(4, 3), Fraction(1, 2)) == []


def test_enumerate_n3_k3_boundary():
    s = reeb.make_schedule(3, 3)
    got = {(o.base, o.mult) for o in reeb.enumerate_orbits(s, 3 + s.eps[1])}
    assert (0, 3) in got and (1, 3) not in got


def test_census_limit():
    s = reeb.make_schedule(3, 2)
    with pytest.raises(CensusUncertified):
        reeb.enumerate_orbits(s, 3)


def test_census_matches_brute_force():
    for n in range(2, 7):
        for k in range(2, 6):
            s = reeb.make_schedule(n, k)
            for bound in [Fraction(3, 2), Fraction(k), k + s.eps[1], Fraction(k + 1) - Fraction(1, 10**9)]:
                got = [(o.period, o.base, o.mult) for o in reeb.enumerate_orbits(s, bound)]
                assert got == brute_orbits(s, bound)


def test_orbit_fields():
    s = reeb.make_schedule(5, 3)
    o = reeb.orbit(s, 2, 3)
    assert o.sft_degree == 2 * 2 + 2 * 3 - 2
    assert o.homology_class == 0 and o.contractible
    assert o.is_good
    assert str(o) == "gamma_2^3"


def test_cz_examples():
    for n in range(3, 12):
        s = reeb.make_schedule(n, 2)
        g02 = reeb.orbit(s, 0, 2)
        assert reeb.cz_index(g02, "contraction") == n + 1
        assert reeb.cz_index(g02) == 5 - n
        for i in range(n):
            assert reeb.cz_index(reeb.orbit(s, i, 1)) == 2 * i - n + 3


def test_cz_contraction_needs_contractible():
    s = reeb.make_schedule(4, 3)
    with pytest.raises(InvalidInput):
        reeb.cz_index(reeb.orbit(s, 0, 2), "contraction")
    with pytest.raises(InvalidInput):
        reeb.cz_index(reeb.orbit(s, 0, 3), "bogus")


def test_trivialization_shift():
    for n in range(3, 13):
        for k in range(2, n):
            o = reeb.orbit(reeb.make_schedule(n, k), 0, k)
            assert reeb.cz_index(o, "contraction") - reeb.cz_index(o) == 2 * (n - k)


def test_generators_window_local_floer():
    s = reeb.make_schedule(3, 2)
    gens = reeb.generators_in_window(s, 2, 2 + 2 * s.eps[0])
    assert [g.name for g in gens] == ["c0^2", "h0^2"]


def test_generators_empty_window():
    s = reeb.make_schedule(3, 2)
    assert reeb.generators_in_window(s, Fraction(3, 2), Fraction(3, 2)) == []


def test_generators_k3_first_window():
    s = reeb.make_schedule(3, 3)
    assert len(reeb.generators_in_window(s, 0, 1 + s.eps[2])) == 6


def test_grading_parity():
    for n in range(2, 8):
        for k in range(2, 6):
            s = reeb.make_schedule(n, k)
            for g in reeb.generators_in_window(s, 0, k + s.eps[1]):
                assert g.local_grading % 2 == g.z2_grading
                assert g.action_proxy == -g.orbit.period


def test_period_gap():
    s = reeb.make_schedule(3, 2)
    mid = (1 + s.eps[2] + 2) / 2
    assert reeb.period_gap(s, mid, Fraction(1, 1000))
    assert not reeb.period_gap(s, 1 + s.eps[0], Fraction(1, 10))
    a = 2 + s.eps[0]
    delta = Fraction(1, 10**6)
    # the window [a/(1+delta), a] sits between 1 + eps_2 and gamma_0^2
    assert 1 + s.eps[2] < a / (1 + delta) and a < 2 * (1 + s.eps[0])
    assert reeb.period_gap(s, a, delta)
    with pytest.raises(InvalidInput):
        reeb.period_gap(s, a, 0)
