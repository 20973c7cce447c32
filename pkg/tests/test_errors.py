import math
import random

import pytest
from _reference import table2_error
from hypothesis import given, settings
from hypothesis import strategies as st

from seriesrel import (
    MODELS,
    BlockBasu,
    BracketError,
    Cowan,
    DomainError,
    FlatError,
    Freund,
    GumbelI,
    GumbelII,
    GumbelIII,
    Independent,
    MarshallOlkin,
    MeasureKind,
    RelativeErrorCurve,
    Sarkar,
    SignVerdict,
    Verdict,
    asymptote,
    classify_sign,
    error_curve,
    find_crossing,
    find_extremum,
    measure,
    relative_error,
)
from seriesrel.errors import ASSESSMENT, classification_grid, rate_ratio_rhr_error
from seriesrel.measures import gumbel2_aux
from seriesrel.oracle import linear_grid, random_params

R, H, M, RHR = MeasureKind.RELIABILITY, MeasureKind.HAZARD, MeasureKind.MRL, MeasureKind.RHR
GRID = linear_grid(0.05, 5.0, 100)


class TestExamples:
    @pytest.mark.parametrize("kind", list(MeasureKind))
    def test_freund_zero(self, kind):
        for t in GRID:
            assert relative_error(Freund(1, 1, 0.3, 0.7), kind, t) == 0.0

    def test_gumbel1_hazard_is_t(self):
        for t in [0.0, 0.5, 3.0]:
            assert relative_error(GumbelI(1, 1, 1), H, t) == pytest.approx(t, abs=1e-16)

    def test_gumbel2_hazard_at_min(self):
        x = 3 - math.sqrt(6)
        t = -math.log(x)
        expected = (x * x - x) / (2 + (1 - x) ** 2)
        assert relative_error(GumbelII(1, 1, 0.5), H, t) == pytest.approx(expected, rel=1e-13)
        assert expected == pytest.approx(-0.1124, abs=5e-5)

    def test_marshall_olkin_mrl(self):
        assert relative_error(MarshallOlkin(1, 1, 1), M, 2.5) == pytest.approx(-1 / 3, rel=1e-15)

    def test_gumbel3_hazard(self):
        assert relative_error(GumbelIII(1, 1, 2), H, 1.0) == pytest.approx((math.sqrt(2) - 2) / 2, rel=1e-14)

    def test_rhr_domain(self):
        with pytest.raises(DomainError):
            relative_error(GumbelI(1, 1, 1), RHR, 0.0)
        with pytest.raises(DomainError):
            relative_error(GumbelI(1, 1, 1), H, -1.0)

    def test_reliability_at_zero(self):
        for cls in MODELS.values():
            assert relative_error(random_params(cls, random.Random(3)), R, 0.0) == 0.0


class TestClosedForms:
    @pytest.mark.parametrize("cls", list(MODELS.values()), ids=list(MODELS))
    @pytest.mark.parametrize("kind", list(MeasureKind), ids=[k.value for k in MeasureKind])
    def test_match_tabulated_forms(self, cls, kind):
        rng = random.Random(5)
        for _ in range(10):
            p = random_params(cls, rng)
            for t in GRID:
                expected = table2_error(p, kind.value, t)
                if not math.isfinite(expected):
                    continue  # naive exponentials overflowed
                assert relative_error(p, kind, t) == pytest.approx(expected, rel=1e-12, abs=1e-12)

    @pytest.mark.parametrize("cls", list(MODELS.values()), ids=list(MODELS))
    @pytest.mark.parametrize("kind", list(MeasureKind), ids=[k.value for k in MeasureKind])
    def test_match_definition(self, cls, kind):
        rng = random.Random(9)
        for _ in range(10):
            p = random_params(cls, rng)
            q = p.independent()
            for t in GRID:
                d, i = measure(p, kind, t), measure(q, kind, t)
                assert relative_error(p, kind, t) == pytest.approx((d - i) / i, rel=1e-12, abs=1e-12)

    def test_small_t_keeps_relative_accuracy(self):
        # the naive ratio loses every digit here; the rearranged form does not
        p = Sarkar(1, 1, 1)
        assert relative_error(p, R, 1e-10) == pytest.approx(-1e-10, rel=1e-9)
        assert relative_error(p, RHR, 1e-8) == pytest.approx(-0.5e-8, rel=1e-6)


class TestAsymptotes:
    def test_examples(self):
        assert asymptote(GumbelII(1, 1, 0.5), R) == 0.5
        assert asymptote(Sarkar(1, 1, 1), RHR) == -1.0
        assert asymptote(GumbelIII(1, 1, 2), R) is None
        assert asymptote(GumbelI(1, 1, 1), H) is None
        assert asymptote(Freund(1, 1, 0.5, 3), RHR) == 0.0

    @pytest.mark.parametrize(
        "p", [GumbelI(1, 1, 1), GumbelII(1, 1, -0.5), MarshallOlkin(1, 2, 1), BlockBasu(1, 2, 1),
              Sarkar(1, 2, 1), Cowan(1, 2, 1.0), GumbelIII(1, 2, 3)],
        ids=lambda p: p.name,
    )
    @pytest.mark.parametrize("kind", list(MeasureKind), ids=[k.value for k in MeasureKind])
    def test_limit_is_approached(self, p, kind):
        limit = asymptote(p, kind)
        # the Gumbel I MRL error closes in on -1 only like 1/t
        t_far = 1e6 if isinstance(p, GumbelI) and kind is M else 40.0
        far = relative_error(p, kind, t_far)
        if limit is None:
            assert far > 10 * abs(relative_error(p, kind, 1.0))
        else:
            assert far == pytest.approx(limit, abs=1e-6)


class TestCurve:
    def test_build(self):
        curve = error_curve(GumbelII(1, 1, 0.5), R, [0, 1, 2])
        assert curve.asymptote == 0.5 and len(curve.samples) == 3

    def test_must_increase(self):
        with pytest.raises(DomainError):
            RelativeErrorCurve(Independent(1, 1), R, ((1.0, 0.0), (1.0, 0.0)), 0.0)

    def test_must_be_finite(self):
        with pytest.raises(DomainError):
            RelativeErrorCurve(Independent(1, 1), R, ((1.0, math.nan),), 0.0)


class TestClassifySign:
    def test_examples(self):
        assert classify_sign(GumbelIII(1, 1, 2), H).verdict is Verdict.ALWAYS_OA
        assert classify_sign(GumbelI(1, 1, 1), R).verdict is Verdict.ALWAYS_OA
        v = classify_sign(GumbelII(1, 1, 0.5), RHR)
        assert v.verdict is Verdict.SWITCH_OA_TO_UA
        assert v.threshold == pytest.approx(0.481, abs=2e-3)

    def test_gumbel1_rhr_switch(self):
        v = classify_sign(GumbelI(1, 1, 1), RHR)
        assert v.verdict is Verdict.SWITCH_UA_TO_OA
        assert v.threshold == pytest.approx(0.577, abs=2e-3)

    @pytest.mark.parametrize("alpha, inner", [(0.5, Verdict.ALWAYS_UA), (-0.5, Verdict.ALWAYS_OA)])
    def test_gumbel2_reliability_depends_on_alpha(self, alpha, inner):
        v = classify_sign(GumbelII(1, 1, alpha), R)
        assert v.verdict is Verdict.PARAM_DEPENDENT
        assert v.resolved.verdict is inner

    def test_zero_models(self):
        for p in [Independent(1, 2), Freund(1, 2, 0.5, 0.5), Cowan(1, 2, math.pi)]:
            for kind in MeasureKind:
                assert classify_sign(p, kind).verdict is Verdict.ZERO

    def test_gumbel1_mrl_is_over_assessed_everywhere(self):
        # lambda * e(t) < 1 for every t because the hazard exceeds lambda for t > 0
        p = GumbelI(1, 1, 1)
        assert classify_sign(p, M).verdict is Verdict.ALWAYS_OA
        assert relative_error(p, M, 0.0) == pytest.approx(2 * 0.378936078070656 - 1, rel=1e-13)

    def test_assessment_map(self):
        assert ASSESSMENT == {1: "UA", -1: "OA", 0: "0"}

    def test_verdict_invariants(self):
        with pytest.raises(DomainError):
            SignVerdict(Verdict.SWITCH_UA_TO_OA)
        with pytest.raises(DomainError):
            SignVerdict(Verdict.ALWAYS_OA, threshold=1.0)
        with pytest.raises(DomainError):
            SignVerdict(Verdict.SWITCH_OA_TO_UA, threshold=-1.0)

    def test_labels(self):
        assert SignVerdict(Verdict.SWITCH_UA_TO_OA, 0.5).label() == "UA if t<0.5; OA if t>0.5"
        assert SignVerdict(Verdict.ALWAYS_OA).to_dict()["label"] == "OA"

    def test_grid_spans_scales(self):
        g = classification_grid(MarshallOlkin(0.1, 10, 0.01))
        assert g[0] < 1e-7 and g[-1] > 600


class TestCrossing:
    @pytest.mark.parametrize(
        "p, expected",
        [(GumbelI(1, 1, 1), 0.5769673507203602), (GumbelII(1, 1, 0.5), 0.4812118)],
        ids=["gumbel1", "gumbel2"],
    )
    def test_rhr_crossing(self, p, expected):
        rep = find_crossing(p, RHR, (0.3, 1.0))
        assert rep.t_root == pytest.approx(expected, abs=1e-7)
        assert 0.3 <= rep.t_root <= 1.0
        assert abs(rep.value_at_root) <= 1e-10
        assert rep.iterations <= 200

    def test_gumbel1_defining_equation(self):
        # (e^{lam t} - 1)/lam * (lam + 2 l12 t)/(e^{lam t + l12 t^2} - 1) = 1
        t = find_crossing(GumbelI(1, 1, 1), RHR).t_root
        assert (math.exp(2 * t) - 1) / 2 * (2 + 2 * t) / (math.exp(2 * t + t * t) - 1) == pytest.approx(1, abs=1e-12)
        assert -math.log(0.5616) == pytest.approx(t, abs=2e-3)

    def test_default_bracket_expands(self):
        rep = find_crossing(GumbelI(1, 1, 1), RHR)
        assert rep.t_root == pytest.approx(0.5769673507203602, abs=1e-9)

    def test_no_sign_change(self):
        with pytest.raises(BracketError):
            find_crossing(MarshallOlkin(1, 1, 1), RHR, (0.1, 1.0))

    def test_gumbel1_mrl_has_no_root(self):
        with pytest.raises(BracketError):
            find_crossing(GumbelI(1, 1, 1), M)


class TestExtremum:
    def test_gumbel1_rhr_mode(self):
        rep = find_extremum(GumbelI(1, 1, 1), RHR)
        assert rep.t_root == pytest.approx(0.2917, abs=2e-3)
        assert rep.value_at_root == pytest.approx(0.0756, abs=1.5e-3)
        assert rep.t_root == pytest.approx(-math.log(0.747), abs=2e-3)

    def test_gumbel2_hazard_min(self):
        rep = find_extremum(GumbelII(1, 1, 0.5), H)
        assert rep.t_root == pytest.approx(-math.log(3 - math.sqrt(6)), abs=1e-6)
        assert rep.value_at_root == pytest.approx(-0.1124, abs=5e-4)

    def test_gumbel2_mrl_max(self):
        rep = find_extremum(GumbelII(0.5, 0.5, 0.5), M)
        assert rep.t_root == pytest.approx(-math.log((69 - 9 * math.sqrt(57)) / 2), abs=1e-6)
        assert rep.value_at_root == pytest.approx(0.1062, abs=5e-4)

    def test_gumbel2_rhr_min(self):
        rep = find_extremum(GumbelII(1, 1, 0.5), RHR)
        assert rep.t_root == pytest.approx(0.2178, abs=2e-3)
        assert rep.value_at_root == pytest.approx(-0.0254, abs=1e-3)

    def test_flat(self):
        with pytest.raises(FlatError):
            find_extremum(MarshallOlkin(1, 1, 1), H, (0.1, 2.0))

    def test_monotone_has_no_interior_extremum(self):
        with pytest.raises(BracketError):
            find_extremum(Sarkar(1, 1, 1), R, (0.1, 2.0))

    def test_gumbel1_rhr_unimodal_on_example(self):
        vals = [relative_error(GumbelI(1, 1, 1), RHR, t) for t in linear_grid(0.01, 10, 2000)]
        diffs = [b - a for a, b in zip(vals, vals[1:])]
        changes = sum(1 for a, b in zip(diffs, diffs[1:]) if (a > 0) != (b > 0))
        assert changes == 1


positive = st.floats(0.05, 5.0)


class TestLemmas:
    @settings(max_examples=100, deadline=None)
    @given(st.floats(1e-3, 0.999), positive, positive)
    def test_tilt_ratio_increasing_beyond_2_over_lambda(self, alpha, l1, l2):
        p = GumbelII(l1, l2, alpha)
        lo = 2.0 / p.lam
        ts = linear_grid(lo * (1 + 1e-9), lo + 20.0 / min(l1, l2), 200)
        vals = [-gumbel2_aux(p, t).h_prime / gumbel2_aux(p, t).h for t in ts]
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))

    @settings(max_examples=100, deadline=None)
    @given(positive, positive)
    def test_rate_ratio_monotone(self, beta, gamma):
        xs = linear_grid(0.01, 10.0, 200)
        vals = [rate_ratio_rhr_error(beta, gamma, x) for x in xs]
        if beta > gamma:
            assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
        elif beta < gamma:
            assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))

    def test_divergent_errors_saturate(self):
        assert relative_error(GumbelIII(1, 2, 3), R, 1e4) == math.inf
        assert relative_error(Cowan(1, 2, 1.0), RHR, 1e4) == math.inf

    def test_rate_ratio_matches_naive(self):
        b, g, x = 2.0, 3.0, 0.7
        assert rate_ratio_rhr_error(b, g, x) == pytest.approx(
            g / b * (math.exp(b * x) - 1) / (math.exp(g * x) - 1) - 1, rel=1e-14
        )


class TestShapeClaims:
    @settings(deadline=None)
    @given(positive, positive, st.floats(0.0, 0.95))
    def test_gumbel1_reliability(self, l1, l2, frac):
        p = GumbelI(l1, l2, frac * l1 * l2)
        vals = [relative_error(p, R, t) for t in GRID]
        # exp(-l12 t^2) may round to 0, so -1 itself is reachable in floats
        assert all(-1 <= v <= 0 for v in vals)
        assert all(b <= a for a, b in zip(vals, vals[1:]))

    @settings(deadline=None)
    @given(positive, positive, st.floats(-0.99, 0.99).filter(lambda a: a != 0))
    def test_gumbel2_reliability_sign(self, l1, l2, alpha):
        p = GumbelII(l1, l2, alpha)
        for t in GRID:
            v = relative_error(p, R, t)
            assert v == 0 or math.copysign(1, v) == math.copysign(1, alpha)

    @settings(deadline=None)
    @given(positive, positive, st.floats(1e-3, 0.99))
    def test_gumbel2_hazard_non_positive(self, l1, l2, alpha):
        p = GumbelII(l1, l2, alpha)
        assert all(relative_error(p, H, t) <= 0 for t in GRID)

    @pytest.mark.parametrize("cls", [GumbelIII, Cowan], ids=["gumbel3", "cowan"])
    def test_rhr_non_decreasing(self, cls):
        rng = random.Random(21)
        for _ in range(30):
            p = random_params(cls, rng)
            vals = [relative_error(p, RHR, t) for t in GRID]
            assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))

    @pytest.mark.parametrize("cls", [MarshallOlkin, BlockBasu, Sarkar], ids=["mo", "bb", "sarkar"])
    def test_rhr_non_increasing_above_minus_one(self, cls):
        rng = random.Random(22)
        for _ in range(30):
            p = random_params(cls, rng)
            vals = [relative_error(p, RHR, t) for t in GRID]
            assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))
            assert all(v > -1 for v in vals)

    @pytest.mark.parametrize("cls", [GumbelIII, Cowan, MarshallOlkin, BlockBasu, Sarkar])
    def test_hazard_error_constant(self, cls):
        p = random_params(cls, random.Random(23))
        vals = {relative_error(p, H, t) for t in GRID}
        assert len(vals) == 1
