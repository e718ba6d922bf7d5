import math

import numpy as np
import pytest

from stratres import (RootFindError, SearchBox, WronskianEvaluator,
                      count_zeros, enumerate_resonances, refine,
                      result_to_json_dict, write_resonance_csv)
from stratres.resonances import EnumerateOptions


@pytest.fixture(scope="module")
def ev9(xi9_model):
    return WronskianEvaluator(xi9_model)


def test_search_box_validation():
    with pytest.raises(ValueError):
        SearchBox(1.0, 0.5, -1.0, -0.1)
    with pytest.raises(ValueError):
        SearchBox(0.0, 1.0, -1.0, 0.5)


def test_count_zeros_exact(ev9):
    # zeros at pi n - i ln(9)/2 for n = 1..5
    box = SearchBox(0.5 * math.pi, 5.5 * math.pi, -3.0, -0.1)
    assert count_zeros(ev9, box) == 5
    empty = SearchBox(0.5 * math.pi, 5.5 * math.pi, -0.8, -0.1)
    assert count_zeros(ev9, empty) == 0


def test_count_zeros_perturbs_grazing_contour(ev9):
    # right edge passes exactly through the n = 3 zero
    gamma = 0.5 * math.log(9.0)
    box = SearchBox(0.5 * math.pi, 3 * math.pi, -2.0, -0.1)
    n = count_zeros(ev9, box)
    assert n in (2, 3)  # the perturbed contour must still see an integer count


def test_refine_exact_zero_returns_immediately(ev9):
    gamma = 0.5 * math.log(9.0)
    exact = 2 * math.pi - 1j * gamma
    res = refine(ev9, exact, audit_multiplicity=False)
    assert res.iterations == 1
    assert res.omega == exact
    assert res.n == 2


def test_refine_converges_quadratically(ev9):
    gamma = 0.5 * math.log(9.0)
    res = refine(ev9, 3 * math.pi - 0.4j)
    assert abs(res.omega - (3 * math.pi - 1j * gamma)) < 1e-9
    assert res.multiplicity == 1
    # residual history should collapse fast once in the basin
    assert res.newton_residual < 1e-12
    assert res.iterations <= 8


def test_refine_rejects_threshold_seed(ev9):
    # Newton from a seed below the first resonance heads into the
    # excluded neighborhood of omega = 0
    with pytest.raises(RootFindError, match="excluded|not a resonance"):
        refine(ev9, 0.1 - 0.01j)


def test_refine_divergence_reports_best(ev9):
    with pytest.raises(RootFindError) as exc_info:
        refine(ev9, 40.0 - 55.0j, max_iter=3)
    assert exc_info.value.best is not None


def test_enumerate_exact_lattice(ev9, xi9_model):
    result = enumerate_resonances(xi9_model, -3, 3)
    assert result.ok
    assert sorted(r.n for r in result.resonances) == [-3, -2, -1, 1, 2, 3]
    gamma = 0.5 * math.log(9.0)
    for r in result.resonances:
        assert r.omega == pytest.approx(math.pi * r.n - 1j * gamma, abs=1e-9)
    assert any("n = 0" in note for note in result.notices)
    assert result.completeness_ok is True
    assert all(v == 1 for v in result.audit_counts.values())


def test_enumerate_half_lattice(xi_neg9_model):
    result = enumerate_resonances(xi_neg9_model, 0, 3)
    assert result.ok
    assert sorted(r.n for r in result.resonances) == [0, 1, 2, 3]
    gamma = 0.5 * math.log(9.0)
    for r in result.resonances:
        assert r.omega == pytest.approx(math.pi * (r.n + 0.5) - 1j * gamma,
                                        abs=1e-9)


def test_enumerate_flags_off_lattice_zeros(stack_model):
    # interior impedance jumps displace resonances far from the endpoint
    # lattice; the enumerator falls back to a grid scan for the indices
    # whose asymptotic seed converges outside its column, and says so
    result = enumerate_resonances(stack_model, 1, 8)
    assert any("grid-scan" in note for note in result.notices)
    tau = 0.7
    deviations = [abs(r.omega - r.seed) for r in result.resonances]
    assert max(deviations) > 0.25 * math.pi / tau


def test_enumerate_without_audit_is_faster(xi9_model):
    opts = EnumerateOptions(audit=False, completeness=False)
    result = enumerate_resonances(xi9_model, 1, 3, opts)
    assert result.ok
    assert result.audit_counts == {}
    assert result.completeness_ok is None


def test_result_serialization(tmp_path, xi9_model):
    result = enumerate_resonances(xi9_model, 1, 3)
    path = tmp_path / "res.csv"
    write_resonance_csv(result, path)
    lines = path.read_text().strip().splitlines()
    assert len(lines) == 4
    d = result_to_json_dict(result)
    assert d["completeness_ok"] is True
    assert len(d["resonances"]) == 3

def test_refine_is_seed_independent(ev9):
    # nearby seeds in the same basin land on the same zero
    exact = 5.0 * math.pi - 0.5j * math.log(9.0)
    a = refine(ev9, exact + 0.12 + 0.1j, audit_multiplicity=False)
    b = refine(ev9, exact - 0.1 - 0.15j, audit_multiplicity=False)
    assert abs(a.omega - b.omega) < 1e-9
    assert a.n == b.n == 5


def test_transparent_medium_has_no_resonances():
    # layer identical to both half-spaces: nothing reflects, W never vanishes
    from stratres import HalfSpace, LayerProfile, MediumModel
    hs = HalfSpace.from_wave(1.0, 1.0)
    model = MediumModel(hs, LayerProfile.constant(1.0, 1.0, 1.0), hs)
    ev = WronskianEvaluator(model)
    box = SearchBox(0.3, 25.0, -8.0, -0.05)
    assert count_zeros(ev, box) == 0
    # and the trace is the pure outgoing wave: p / u = i w chi / c = i w
    from stratres import jost_plus_trace
    om = 4.0 - 1.5j
    tr = jost_plus_trace(model, om)
    assert tr.p / tr.u == pytest.approx(1j * om, rel=1e-10)
