import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats as sps

from conftest import fgn_batch
from marketeff.efficiency import (
    MEASURES,
    EfficiencyReport,
    Measure,
    MeasureVector,
    analyze,
    decompose,
    dh_regression,
    dh_regression_points,
    efficiency_index,
    measure_vector,
    rank,
)
from marketeff.errors import EstimatorFailure, InsufficientDataError, RegressionUndefinedError
from marketeff.series import ReturnSeries

NAMES = [m[0] for m in MEASURES]
IDEAL = {name: ideal for name, ideal, _, _ in MEASURES}


def vector(**values):
    full = dict(IDEAL)
    full.update(values)
    return MeasureVector.from_estimates(full)


def worked_example():
    return vector(H_DFA=0.6, H_DMA=0.55, H_HHCA=0.6, D_P=1.4, D_W=1.45, D_G=1.4, D_HW=1.45, RHO1=0.1)


class TestIndex:
    def test_ideal_is_zero(self):
        assert efficiency_index(vector()) == 0.0
        assert decompose(vector()) is None

    @pytest.mark.parametrize("signs", [(1, 1, 1), (0, 0, 0), (1, 0, 1)])
    def test_extreme_is_sqrt8_over_2(self, signs):
        h, d, r = signs
        v = vector(H_DFA=h, H_DMA=h, H_HHCA=1 - h, D_P=1 + d, D_W=1 + d, D_G=2 - d, D_HW=2, RHO1=2 * r - 1)
        assert efficiency_index(v) == pytest.approx(math.sqrt(8) / 2, abs=1e-12)

    def test_worked_example(self):
        v = worked_example()
        # squared deviations: H 0.01+0.0025+0.01, D 0.01+0.0025+0.01+0.0025, rho (0.1/2)^2
        assert efficiency_index(v) == pytest.approx(math.sqrt(0.05), abs=1e-12)
        shares = decompose(v)
        assert shares.local == pytest.approx(0.5, abs=1e-12)
        assert shares.global_ == pytest.approx(0.5, abs=1e-12)

    def test_pure_global_and_pure_local(self):
        assert decompose(vector(H_DMA=0.7)).local == 0.0
        assert decompose(vector(D_W=1.2)).local == 1.0

    def test_clamping(self):
        v = vector(H_DFA=1.3, D_P=2.4, RHO1=-1.5)
        assert (v["H_DFA"].estimate, v["H_DFA"].raw) == (1.0, 1.3)
        assert v["D_P"].estimate == 2.0
        assert v["RHO1"].estimate == -1.0

    def test_vector_invariants(self):
        v = vector()
        assert [e.name for e in v] == NAMES
        assert [e.range for e in v] == [1, 1, 1, 1, 1, 1, 1, 2]
        assert [e.kind for e in v] == ["global"] * 3 + ["local"] * 4 + ["global"]
        with pytest.raises(ValueError):
            MeasureVector(tuple(reversed(v.entries)))
        with pytest.raises(ValueError):
            MeasureVector(v.entries[:-1] + (Measure("RHO1", 0.0, 0.0, 1.0, "global"),))

    @settings(max_examples=100)
    @given(st.lists(st.floats(-0.5, 0.5), min_size=8, max_size=8), st.permutations(range(8)))
    def test_properties(self, devs, perm):
        vals = {name: IDEAL[name] + dev * (2 if name == "RHO1" else 1) for name, dev in zip(NAMES, devs)}
        v = vector(**vals)
        ei = efficiency_index(v)
        assert 0 <= ei <= math.sqrt(8) / 2 + 1e-12
        assert ei**2 == pytest.approx(math.fsum(e.deviation**2 for e in v), abs=1e-12)
        assert efficiency_index([v.entries[i] for i in perm]) == pytest.approx(ei, abs=1e-15)
        shares = decompose(v)
        if ei > 0:
            assert shares.local + shares.global_ == pytest.approx(1.0, abs=1e-12)
            assert 0 <= shares.local <= 1
        # pushing one entry further from its ideal never lowers EI
        name = NAMES[perm[0]]
        e = v[name]
        step = 0.1 * (1 if e.estimate >= e.ideal else -1)
        assert efficiency_index(vector(**{**vals, name: e.estimate + step})) >= ei - 1e-15


class TestRank:
    def _report(self, ticker, ei):
        return EfficiencyReport(ticker, 100, ei, None, None, vector())

    def test_order(self):
        assert [r.ticker for r in rank([self._report("A", 0.3), self._report("B", 0.1)])] == ["B", "A"]

    def test_ties_alphabetical(self):
        rs = [self._report(t, 0.2) for t in "CAB"]
        assert [r.ticker for r in rank(rs)] == ["A", "B", "C"]
        assert [r.ticker for r in rank(reversed(rs))] == ["A", "B", "C"]

    def test_empty(self):
        with pytest.raises(ValueError):
            rank([])


class TestRegression:
    def test_exact_self_affine(self):
        h = [0.2, 0.35, 0.5, 0.65, 0.8]
        fit = dh_regression_points(h, [2 - x for x in h])
        assert fit.slope == pytest.approx(-1, abs=1e-10)
        assert fit.intercept == pytest.approx(2, abs=1e-10)
        assert fit.r2 == pytest.approx(1, abs=1e-10)

    def test_identical_points(self):
        with pytest.raises(RegressionUndefinedError):
            dh_regression_points([0.5, 0.5, 0.5], [1.5, 1.5, 1.5])

    def test_too_few(self):
        with pytest.raises(RegressionUndefinedError):
            dh_regression_points([0.4, 0.6], [1.6, 1.4])

    @pytest.mark.slow
    def test_fbm_portfolio_slope(self):
        slopes = []
        for seed in range(50):
            reports = [analyze(ReturnSeries(f"h{h}", fgn_batch(h, 2048, 50)[seed]))
                       for h in (0.2, 0.35, 0.5, 0.65, 0.8)]
            slopes.append(dh_regression(reports).slope)
        assert -1.25 <= np.mean(slopes) <= -0.75


class TestMeasureVector:
    def test_constant_returns(self):
        with pytest.raises(EstimatorFailure, match="H_DFA"):
            measure_vector(np.full(500, 0.001))

    def test_too_short(self, rng):
        with pytest.raises(InsufficientDataError):
            measure_vector(rng.standard_normal(24))

    def test_short_warns_then_names_method(self, rng):
        with pytest.warns(UserWarning, match="recommended"):
            with pytest.raises(EstimatorFailure, match="^H_DMA"):
                measure_vector(rng.standard_normal(60))

    @pytest.mark.slow
    def test_white_noise_deviations_small(self):
        devs = np.array([[abs(e.deviation) for e in measure_vector(x)] for x in fgn_batch(0.5, 10000, 100)])
        assert np.all(np.median(devs, axis=0) <= 0.1)

    @pytest.mark.slow
    def test_persistent_input(self):
        hits = 0
        for x in fgn_batch(0.8, 10000, 100):
            v = measure_vector(x)
            hits += all(v[n].estimate > 0.5 for n in NAMES[:3]) and all(v[n].estimate < 1.5 for n in NAMES[3:7])
        assert hits >= 90

    def test_report_roundtrip(self, rng):
        rep = analyze(ReturnSeries("Z", rng.standard_normal(1000)))
        d = rep.to_json_dict()
        assert d["ei"] == pytest.approx(math.sqrt(sum(
            ((d["estimates"][n]["clamped"] - IDEAL[n]) / (2 if n == "RHO1" else 1)) ** 2 for n in NAMES)), abs=1e-12)
        assert d["local_share"] + d["global_share"] == pytest.approx(1.0, abs=1e-12)
        assert set(d["scaling_points"]) >= {"DFA_order1", "DFA_order2", "DMA", "HHCA_dense", "HHCA_coarse",
                                             "Periodogram", "Wavelet", "Genton", "HallWood"}
        assert d["kpss"]["bandwidth"] == 7


@pytest.mark.slow
def test_ranking_spearman():
    hs = (0.5, 0.6, 0.7, 0.8)
    rhos = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for seed in range(50):
            reports = [analyze(ReturnSeries(f"h{h}", fgn_batch(h, 2048, 50)[seed])) for h in hs]
            order = [r.ticker for r in rank(reports)]
            rhos.append(sps.spearmanr(hs, [order.index(f"h{h}") for h in hs]).statistic)
    assert np.mean(rhos) >= 0.9


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_scale_invariance_of_ei(seed):
    x = np.random.default_rng(seed).standard_normal(1024)
    a = analyze(ReturnSeries("A", x)).ei
    assert analyze(ReturnSeries("A", 0.013 * x)).ei == pytest.approx(a, abs=1e-6)
