import json

import pytest

from fillcert import charclass, homalg, verdict as vd
from fillcert.errors import InvalidInput, ReplayMismatch


def is_power_of_two(n):
    return n & (n - 1) == 0


# --- decide examples


def test_n3_k2_obstructed():
    v = vd.decide(3, 2)
    assert v.outcome == vd.OBSTRUCTED and v.detail == "rp_nonfillable"
    assert list(v.notes) == list(vd.NOTES_OBSTRUCTED)


def test_n4_k2_wording():
    v = vd.decide(4, 2)
    assert v.outcome == vd.INCONCLUSIVE
    assert v.detail == "obstruction criteria not met: total Chern class trivial"
    assert v.notes == []


def test_n2_k2_known_fillable():
    v = vd.decide(2, 2)
    assert v.outcome == vd.KNOWN_FILLABLE and "T*S^2" in v.detail


def test_n2_odd_known_fillable():
    assert vd.decide(2, 5).outcome == vd.KNOWN_FILLABLE


def test_n53_k3_threshold():
    v = vd.decide(53, 3)
    assert v.outcome == vd.OBSTRUCTED and v.detail == "lens_digit_threshold"
    ds = next(s for s in v.steps if s["rule"] == "digit_sets")["outputs"]
    assert ds["threshold_met"] and ds["digit_sum"] == 7 and ds["threshold"] == 6


def test_n4_k3_middle_route():
    v = vd.decide(4, 3)
    assert v.outcome == vd.OBSTRUCTED and v.detail == "lens_middle_degree"
    routes = [s["outputs"]["route"] for s in v.steps if s["rule"] == "contradiction"]
    assert "middle" in routes


def test_uncovered_and_small_n():
    assert vd.decide(5, 4).detail == "obstruction criteria not met: k not covered"
    assert vd.decide(3, 3).detail == "obstruction criteria not met: symplectic part requires n > k"
    for n, k in [(5, 4), (3, 3), (6, 3), (4, 2)]:
        assert vd.decide(n, k).detail.startswith(vd.NOT_MET)


@pytest.mark.parametrize("args", [(1, 2), (3, 1), (3.0, 2), ("3", 2)])
def test_invalid_input(args):
    with pytest.raises(InvalidInput):
        vd.decide(*args)


def test_obstructed_certificate_contents():
    for n, k in [(3, 2), (5, 3), (4, 3)]:
        rules = [s["rule"] for s in vd.decide(n, k).steps]
        for needed in ("emptiness_certificate", "unit_hit", "rank_bounds",
                       "feasible_betti_vectors", "contradiction"):
            assert needed in rules
        for s in vd.decide(n, k).steps:
            assert s["paper_anchor"] and set(s) == {"rule", "inputs", "outputs", "paper_anchor"}


def test_k2_regression():
    for n in range(3, 65):
        assert (vd.decide(n, 2).outcome == vd.OBSTRUCTED) == (not is_power_of_two(n)), n


def test_odd_threshold_never_stronger_than_search():
    # whenever the threshold holds, direct search also obstructs
    met = [n for n in range(4, 90) if charclass.digit_sum_criterion(n, 3)]
    assert met[0] == 53
    for n in met:
        assert vd.decide(n, 3).outcome == vd.OBSTRUCTED


# --- minimal support representatives vs the full list


@pytest.mark.parametrize("n,k", [(3, 2), (4, 3), (5, 3), (6, 3), (7, 3), (6, 5)])
def test_representatives_agree_with_full_list(n, k):
    v = vd.decide(n, k)
    ins = {s["rule"]: s["inputs"] for s in v.steps}
    out = {s["rule"]: s["outputs"] for s in v.steps}
    rb = out["rank_bounds"]
    surj = out["chern_surjectivity"]["degrees"]
    I_half = set(out["digit_sets"]["I_half"])
    full = homalg.feasible_betti_vectors(n, rb["even"], rb["odd"])
    all_ok = all(vd._contradiction_for(n, k, b, I_half, surj)[0] is not None for b in full)
    assert all_ok == (v.outcome == vd.OBSTRUCTED)
    assert len(full) == out["feasible_betti_vectors"]["count"]
    assert ins["feasible_betti_vectors"]["even"] == rb["even"]


# --- certificates


def test_json_byte_identical():
    for n, k in [(3, 2), (4, 3), (9, 3), (2, 2)]:
        assert vd.decide(n, k).dumps() == vd.decide(n, k).dumps()


def test_json_schema():
    doc = json.loads(vd.decide(5, 3).dumps())
    assert doc["version"] == "1.0"
    assert set(doc) == {"version", "n", "k", "mode", "outcome", "notes", "steps"}
    eps = next(s for s in doc["steps"] if s["rule"] == "perturbation_schedule")["outputs"]["eps"]
    assert all(isinstance(e, str) and "/" in e for e in eps)


@pytest.mark.parametrize("n,k", [(3, 2), (4, 2), (2, 2), (4, 3), (6, 3), (5, 4), (9, 5, )])
def test_replay_roundtrip(n, k):
    doc = json.loads(vd.decide(n, k).dumps())
    assert vd.replay(doc) == doc["outcome"]


def test_replay_improved_mode():
    doc = json.loads(vd.decide(7, 3, improved=True).dumps())
    assert doc["mode"] == "improved"
    vd.replay(doc)


def _tampered(mutate):
    doc = json.loads(vd.decide(3, 2).dumps())
    mutate(doc)
    return doc


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("version"),
    lambda d: d.update(version="0.9"),
    lambda d: d.pop("steps"),
    lambda d: d["steps"][0].update(rule="mystery"),
    lambda d: d["outcome"].update(kind="Inconclusive"),
    lambda d: d["notes"].pop(),
    lambda d: d["steps"].pop(),
    lambda d: d["steps"][1].pop("inputs"),
    lambda d: d.update(n=1),
    lambda d: d["steps"][3]["outputs"].update(digit_sum=99),
    lambda d: next(s for s in d["steps"] if s["rule"] == "contradiction")["outputs"].update(degree=4),
    lambda d: next(s for s in d["steps"] if s["rule"] == "rank_bounds")["inputs"].update(n="x"),
])
def test_replay_detects_tampering(mutate):
    with pytest.raises(ReplayMismatch):
        vd.replay(_tampered(mutate))


def test_replay_rejects_non_dict():
    with pytest.raises(ReplayMismatch):
        vd.replay([1, 2])


# --- scan


def test_scan_k2():
    rows = vd.scan(range(3, 65), [2])
    assert [r["n"] for r in rows] == list(range(3, 65))
    for r in rows:
        assert (r["outcome"] == vd.OBSTRUCTED) == (not is_power_of_two(r["n"]))
        assert r["error"] is None and r["ms"] >= 0


def test_scan_k3_small():
    rows = {r["n"]: r for r in vd.scan(range(3, 9), [3])}
    assert rows[4]["detail"] == "lens_middle_degree"
    assert all(rows[n]["outcome"] == vd.OBSTRUCTED for n in (4, 5, 7, 8))
    assert rows[6]["outcome"] == vd.INCONCLUSIVE


def test_scan_empty():
    assert vd.scan(range(5, 3), [2]) == []
    assert vd.scan(range(3, 6), []) == []


def test_scan_row_errors_do_not_abort():
    rows = vd.scan([1, 3], [2])
    assert rows[0]["error"] and rows[0]["outcome"] is None
    assert rows[1]["outcome"] == vd.OBSTRUCTED


def test_scan_parallel_matches_serial():
    strip = lambda rows: [{k: v for k, v in r.items() if k != "ms"} for r in rows]  # noqa: E731
    a = vd.scan(range(3, 12), [2, 3], jobs=1)
    b = vd.scan(range(3, 12), [3, 2], jobs=2)
    assert strip(a) == strip(b)
