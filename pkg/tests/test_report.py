import copy
import json

import numpy as np
import pytest

from cdiffkit import report
from cdiffkit.gf import make_field


@pytest.mark.parametrize("thm,m", [("thm31", 2), ("thm33", 2), ("thm35", 2), ("thm37", 2)])
def test_small_grids_pass(thm, m):
    rep = report.verify(thm, m)
    assert rep.passed, rep.failures()
    assert rep.checks and all(c.observed for c in rep.checks)


def test_report_stamps_field_and_generator():
    rep = report.verify("thm31", 2)
    ctx = make_field(2, 4)
    assert rep.field == ctx.describe()
    assert rep.g == ctx.g and rep.g_coords == ctx.coords(ctx.g).tolist()


def test_pass_flag_follows_cells():
    rep = report.verify("thm33", 2)
    chk = rep.checks[0]
    assert chk.passed and not chk.failures
    for row in chk.observed:
        assert all(u == 1 for u in row)


def test_json_round_trip():
    rep = report.verify("thm31", 3)
    blob = report.to_json(rep.to_dict())
    again = report.VerdictReport.from_dict(json.loads(blob))
    assert again == rep
    assert report.to_json(again.to_dict()) == blob
    assert "runtime_ms" not in rep.to_dict()


def test_timing_is_opt_in():
    rep = report.verify("thm33", 2, timing=True)
    assert rep.runtime_ms is not None and rep.runtime_ms >= 0
    assert report.VerdictReport.from_dict(rep.to_dict()) == rep


def test_deterministic():
    a = report.to_json(report.verify("thm37", 2).to_dict())
    b = report.to_json(report.verify("thm37", 2, threads=2).to_dict())
    assert a == b


def test_thm31_m3_case2_attains_four():
    rep = report.verify("thm31", 3)
    obs = {o.name: o for o in rep.observations}
    assert obs["case 2 attains uniformity 4 off the subfield"].holds
    assert obs["case 2 delta filter nonempty"].holds
    assert rep.checks[3].attained_max == 4


def test_thm41_trace_split_recorded():
    rep = report.verify("thm41", 2)
    obs = {o.name: o for o in rep.observations}
    assert obs["off-subfield uniformity is 3 exactly when Tr_m^2m(delta) != 0"].holds
    assert obs["reading 'g^10 in both factors' matches the stated PcN set"].holds
    # the checks are faithful to the stated claim and fail on trace-zero delta
    bad = rep.checks[1].failures
    ctx = make_field(3, 4)
    assert bad and all(ctx.rel_trace(f["delta"], 2) == 0 for f in bad)


def test_shift_classes():
    ctx = make_field(2, 4)
    reps = report.shift_classes(ctx, 2, ctx.elements())
    # one class per coset of GF(2^2)
    assert len(reps) == 4 and reps[0] == 0


def test_corrupted_tables_surface_a_witness():
    ctx = make_field(2, 4)
    bad = copy.copy(ctx)
    exp = ctx.exp_table.copy()
    exp[[3, 5]] = exp[[5, 3]]
    log = np.full(ctx.q, -1, dtype=np.int64)
    log[exp] = np.arange(ctx.q - 1)
    bad.exp_table, bad.log_table = exp, log
    bad.__dict__.pop("abs_trace_table", None)
    rep = report.verify("thm33", 2, ctx=bad)
    assert not rep.passed
    assert rep.failures() and "delta" in rep.failures()[0]


def test_unknown_theorem():
    with pytest.raises(ValueError):
        report.verify("thm99", 2)
    with pytest.raises(ValueError):
        report.run_all("medium")


def test_fields_from_lines():
    fields = report.fields_from_lines(["2,4,1,1,0,0,1"])
    ctx = fields[(2, 4)]
    assert ctx.modulus == (1, 1, 0, 0, 1)
    rep = report.verify("thm33", 2, fields=fields)
    assert rep.field == "2,4,1,1,0,0,1" and rep.passed


def test_thread_env(monkeypatch):
    monkeypatch.setenv(report.THREADS_ENV, "3")
    assert report.default_threads() == 3
    monkeypatch.setenv(report.THREADS_ENV, "lots")
    assert report.default_threads() == 1
