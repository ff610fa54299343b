"""Constructor validation and spectrum compilation."""
import pytest

from krulldim.errors import ConstraintError
from krulldim.spectra import (
    AfDomain,
    Field,
    HeightFn,
    PolyRing,
    Pullback,
    Stratum,
    Valuation,
    expr_dim,
    expr_td,
    is_af_poly,
    summarize,
)

KM = Pullback(Valuation(2, 1), 1, Field(0))


def heights(summary):
    return sorted((s.kind, s.height, s.residue_td, s.poly_height.cap) for s in summary.strata)


class TestHeightFn:
    def test_eval(self):
        f = HeightFn(2, 1)
        assert [f.eval(n) for n in range(4)] == [2, 3, 3, 3]

    def test_eval_rejects_negative(self):
        with pytest.raises(ConstraintError):
            HeightFn(0, 0).eval(-1)

    def test_negative_base_rejected(self):
        with pytest.raises(ConstraintError):
            HeightFn(-1, 0)


class TestSummarize:
    def test_field(self):
        s = summarize(Field(2))
        assert s.td == 2 and s.dim == 0 and s.is_af
        assert heights(s) == [("plain", 0, 2, 0)]
        assert len(s.pairs) == 1 and s.pairs[0].lower == s.pairs[0].upper

    def test_valuation_21(self):
        s = summarize(Valuation(2, 1))
        assert s.dim == 1 and s.is_af
        assert heights(s) == [("plain", 0, 2, 0), ("plain", 1, 1, 0)]

    def test_km_pullback(self):
        s = summarize(KM)
        assert s.td == 2 and s.dim == 1 and not s.is_af
        assert heights(s) == [("containsM", 1, 0, 1), ("outsideM", 0, 2, 0)]
        m_stratum = s.conductor_stratum
        assert m_stratum.poly_height == HeightFn(1, 1)
        pd = s.pullback_data
        assert (pd.m, pd.td_k, pd.td_d, pd.dim_d, pd.td_kd, pd.outside) == (1, 1, 0, 0, 1, 0)
        assert pd.conductor_is_top

    def test_af_domain_full_profile(self):
        s = summarize(AfDomain(3, 2))
        assert heights(s) == [("plain", 0, 3, 0), ("plain", 1, 2, 0), ("plain", 2, 1, 0)]
        assert s.is_af
        # catenarian model: every comparable pair is certified with an exact base
        assert all(p.exact for p in s.pairs)
        assert all(
            p.lower.height + p.quotient_poly_height.base == p.upper.height
            for p in s.pairs
        )

    def test_poly_over_field_matches_af_profile(self):
        assert summarize(PolyRing(Field(2), 1)) == summarize(AfDomain(3, 1))
        assert summarize(PolyRing(Valuation(2, 1), 1)) == summarize(AfDomain(3, 2))

    def test_pullback_dim_formula(self):
        pb = Pullback(AfDomain(3, 3), 1, Field(1), outside=3)
        assert summarize(pb).dim == max(3, 1 + 0) == expr_dim(pb)
        pb2 = Pullback(Valuation(4, 1), 1, AfDomain(1, 1))
        assert summarize(pb2).dim == 1 + 1

    def test_pullback_pairs(self):
        s = summarize(Pullback(Valuation(3, 2), 2, Field(0)))
        # out heights 0..1, single in stratum at m = 2
        by_label = {p.label: p for p in s.pairs}
        assert by_label["out:0<=in:0"].quotient_poly_height == HeightFn(2, 1)
        assert by_label["out:1<=in:0"].quotient_poly_height == HeightFn(1, 1)
        assert by_label["out:0<=out:1"].quotient_poly_height == HeightFn(1, 0)
        # out:1 has height m - 1; nothing outside M at height >= m is comparable
        assert all(p.exact for p in s.pairs)

    def test_noncatenarian_pairs_uncertified(self):
        s = summarize(AfDomain(3, 3, catenarian=False))
        flags = {(p.lower.height, p.upper.height): p.exact for p in s.pairs}
        assert flags[(0, 2)] and flags[(1, 1)]
        assert not flags[(1, 2)] and not flags[(1, 3)] and not flags[(2, 3)]

    def test_noncatenarian_ambient_marks_pullback_pairs(self):
        s = summarize(Pullback(AfDomain(4, 3, catenarian=False), 3, Field(0), outside=2))
        assert s.inexact_pairs()
        assert not s.pullback_data.ambient_catenarian

    def test_trivial_pullback_is_af(self):
        s = summarize(Pullback(Valuation(2, 1), 1, Field(1)))
        assert s.is_af and s.pullback_data.td_kd == 0


class TestIsAfPoly:
    def test_km(self):
        s = summarize(KM)
        assert not is_af_poly(s, 0)
        assert is_af_poly(s, 1)
        assert is_af_poly(s, 2)

    @pytest.mark.parametrize("expr", [Field(3), AfDomain(2, 1), Valuation(3, 2)])
    @pytest.mark.parametrize("n", [0, 1, 4])
    def test_af_always(self, expr, n):
        assert is_af_poly(summarize(expr), n)


class TestConstraints:
    @pytest.mark.parametrize(
        "build, message",
        [
            (lambda: Field(-1), "transcendence degree"),
            (lambda: AfDomain(1, 2), "0 <= dim <= td"),
            (lambda: Valuation(2, 0), "dim >= 1"),
            (lambda: Valuation(1, 2), "dim <= td"),
            (lambda: PolyRing(KM, 1), "AF constructor"),
            (lambda: Pullback(Field(1), 1, Field(0), outside=0), "m <= dim(T)"),
            (lambda: Pullback(Valuation(2, 1), 0, Field(0)), "m >= 1"),
            (lambda: Pullback(Valuation(3, 2), 1, Field(0)), "m = dim(T)"),
            (lambda: Pullback(Valuation(2, 1), 1, Field(2)), "t.d.(D) <= t.d.(K)"),
            (lambda: Pullback(Valuation(2, 1), 1, Field(0), outside=1), "outside = m - 1"),
            (lambda: Pullback(AfDomain(3, 2), 2, Field(0)), "outside required"),
            (lambda: Pullback(AfDomain(3, 3), 3, Field(0), outside=1), "outside >= m - 1"),
            (lambda: Pullback(AfDomain(3, 2), 1, Field(0), outside=3), "outside <= dim(T)"),
            (lambda: Pullback(KM, 1, Field(0), outside=0), "AF constructor"),
            (lambda: Pullback(Valuation(3, 1), 1, KM, outside=0), "AF constructor"),
        ],
    )
    def test_rejects(self, build, message):
        with pytest.raises(ConstraintError) as err:
            build()
        assert message in str(err.value)

    def test_valuation_outside_autoderived(self):
        assert Pullback(Valuation(3, 2), 2, Field(0)).outside == 1

    def test_expr_helpers(self):
        pb = Pullback(PolyRing(Valuation(2, 1), 1), 2, Field(0), outside=1)
        assert expr_td(pb) == 3
        assert expr_dim(pb) == 2


class TestSelectors:
    def test_pullback_selectors(self):
        s = summarize(Pullback(Valuation(4, 1), 1, AfDomain(1, 1)))
        assert s.select("0").height == 0
        assert s.select("M").height == 1 and s.select("M").kind == "containsM"
        assert s.select("out:0") is s.select("0")
        assert s.select("in:1").height == 2

    def test_plain_selectors(self):
        s = summarize(AfDomain(3, 2))
        assert s.select("0").height == 0
        assert s.select("M").height == 2
        assert s.select("out:1").height == 1

    @pytest.mark.parametrize("sel", ["in:0", "out:9", "x", "in:x"])
    def test_bad_selectors(self, sel):
        with pytest.raises(ConstraintError):
            summarize(AfDomain(3, 2)).select(sel)

    def test_stratum_equality_ignores_labels(self):
        a = Stratum(1, 2, HeightFn(1, 0), label="x", provenance="p1")
        b = Stratum(1, 2, HeightFn(1, 0), label="y", provenance="p2")
        assert a == b and hash(a) == hash(b)
