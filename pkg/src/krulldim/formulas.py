"""Closed dimension and height formulas over spectrum summaries.

Each evaluator implements one classical formula for tensor products of
k-algebras and is named after the label it reports:

* ``Sharp``: dim(K ox L) = min(t.d.(K), t.d.(L)) for extension fields.
* ``Wadsworth3.8``: min(dim(A) + t.d.(B), t.d.(A) + dim(B)) for two
  AF-domains.
* ``Wadsworth3.7``: the one-sided formula D(t.d.(A), dim(A), B) valid
  for AF A against arbitrary B.
* ``PullbackPair``: the two-sided formula for two pullbacks whose
  conductors have full height.
* ``Thm2.8``: the pullback-against-arbitrary formula with its inner
  maximum over comparable prime pairs of B.

``dim_tensor`` dispatches a pair of expressions to the strongest
applicable formula, cross-checks every other formula that also applies,
and reports witnesses for each maximum.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ApplicabilityError, ConsistencyError, ConstraintError, InexactPairError
from .spectra import (
    KIND_CONTAINS,
    AlgebraExpr,
    Field,
    PairStratum,
    SpectrumSummary,
    Stratum,
    summarize,
)

THEOREM_SHARP = "Sharp"
THEOREM_W38 = "Wadsworth3.8"
THEOREM_W37 = "Wadsworth3.7"
THEOREM_PULLBACK_PAIR = "PullbackPair"
THEOREM_THM28 = "Thm2.8"
THEOREM_UNSUPPORTED = "Unsupported"

GATE_AF = "AF"
GATE_CATENARIAN = "Thm2.8-catenarian"
GATE_HT_M = "Cor2.9-htM<=2"
GATE_TD_KD = "Prop2.10-tdKD<=2"
GATE_UNSUPPORTED = "Unsupported"

TERM_OUTSIDE = "outside-M"
TERM_THROUGH = "through-M"


@dataclass(frozen=True)
class Applicability:
    """Which hypothesis gates a summary passes; ``label`` is the strongest."""

    label: str
    notes: str
    gates: tuple[str, ...]


@dataclass(frozen=True)
class Witness:
    """A stratum or pair reference achieving one term's maximum."""

    term: str
    ref: str
    value: int


@dataclass(frozen=True)
class DimReport:
    """A dimension answer plus the formula that produced it."""

    value: int
    theorem: str
    witnesses: tuple[Witness, ...]
    term_breakdown: tuple[tuple[str, int], ...]
    gates: tuple[str, ...] = ()


def sharp_dim(s: int, t: int) -> int:
    """dim of a tensor product of extension fields of t.d. s and t."""
    return min(s, t)


def fiber_dim(p: Stratum, q: Stratum) -> int:
    """Dimension of the fiber ring (A/p) ox (B/q): min of residue t.d."""
    return min(p.residue_td, q.residue_td)


def d_value(s: int, d: int, b: SpectrumSummary) -> int:
    """max over q in Spec(B) of ht(q[s]) + min(s, d + t.d.(B/q))."""
    return _d_value_max(s, d, b)[0]


def _d_value_max(s, d, b):
    if d > s:
        raise ConstraintError("d_value requires d <= s")
    best, winners = -1, []
    for q in b.strata:
        v = q.poly_height.eval(s) + min(s, d + q.residue_td)
        if v > best:
            best, winners = v, [q]
        elif v == best:
            winners.append(q)
    return best, winners


def af_pair_dim(a: SpectrumSummary, b: SpectrumSummary) -> int:
    """min(dim(A) + t.d.(B), t.d.(A) + dim(B)) for two AF summaries."""
    if not (a.is_af and b.is_af):
        raise ApplicabilityError("af_pair_dim needs two AF summaries")
    return min(a.dim + b.td, a.td + b.dim)


def applicability(a: SpectrumSummary) -> Applicability:
    """All hypothesis gates the summary passes, strongest first."""
    gates = []
    if a.is_af:
        gates.append(GATE_AF)
    pd = a.pullback_data
    if pd is not None:
        if pd.ambient_catenarian:
            gates.append(GATE_CATENARIAN)
        if pd.m <= 2:
            gates.append(GATE_HT_M)
        if pd.td_kd <= 2:
            gates.append(GATE_TD_KD)
    if not gates:
        return Applicability(
            label=GATE_UNSUPPORTED,
            notes="no gate passes: T model non-catenarian, ht(M) > 2, t.d.(K:D) > 2",
            gates=(),
        )
    return Applicability(label=gates[0], notes=", ".join(gates), gates=tuple(gates))


def _require_pullback(a: SpectrumSummary):
    pd = a.pullback_data
    if pd is None:
        raise ApplicabilityError("a pullback summary is required here")
    return pd


def _require_gated(a: SpectrumSummary):
    pd = _require_pullback(a)
    if applicability(a).label == GATE_UNSUPPORTED:
        raise ApplicabilityError(
            "pullback passes no hypothesis gate (catenarian T, ht(M) <= 2 "
            "or t.d.(K:D) <= 2 needed)"
        )
    return pd


def _require_exact(pairs, context):
    for pair in pairs:
        if not pair.exact:
            raise InexactPairError(
                f"{context} needs quotient heights for pair {pair.label}, "
                "which the non-catenarian model does not certify"
            )


def _check_membership(summary, stratum, side):
    if stratum not in summary.strata:
        raise ConstraintError(f"stratum {stratum.label!r} is not part of summary {side}")


def _check_delta(p, q, delta):
    if delta < 0 or delta > fiber_dim(p, q):
        raise ConstraintError(
            f"delta must lie in 0..fiber_dim = {fiber_dim(p, q)}, got {delta}"
        )


def thm28_ht(
    a: SpectrumSummary, b: SpectrumSummary, p: Stratum, q: Stratum, delta: int = 0
) -> int:
    """Height of a prime of A ox B over (p, q) at fiber offset ``delta``.

    For p outside the conductor: ht(p) + ht(q[t.d.(A)]) + delta.  For p
    containing it: ht(p) plus the maximum over pairs q1 <= q of
    ht(q1[t.d.(A)]) + ht((q/q1)[t.d.(D)]) + min(t.d.(B/q1), t.d.(K:D)),
    plus delta.
    """
    pd = _require_gated(a)
    _check_membership(a, p, "A")
    _check_membership(b, q, "B")
    _check_delta(p, q, delta)
    if p.kind == KIND_CONTAINS:
        return p.height + _through_max_at(pd, a.td, b, q)[0] + delta
    return p.height + q.poly_height.eval(a.td) + delta


def _through_max_at(pd, td_a, b, q):
    """Inner maximum of the conductor formula for a fixed upper prime q."""
    pairs = tuple(b.pairs_with_upper(q))
    _require_exact(pairs, "conductor height formula")
    best, winners = -1, []
    for pair in pairs:
        q1 = pair.lower
        v = (
            q1.poly_height.eval(td_a)
            + pair.quotient_poly_height.eval(pd.td_d)
            + min(q1.residue_td, pd.td_kd)
        )
        if v > best:
            best, winners = v, [pair]
        elif v == best:
            winners.append(pair)
    return best, winners


def mixed_ideal_height(
    a: SpectrumSummary, b: SpectrumSummary, p: Stratum, q: Stratum
) -> int:
    """Height of the mixed ideal p ox B + A ox q."""
    return thm28_ht(a, b, p, q, 0)


def sct_height_af(
    a: SpectrumSummary, b: SpectrumSummary, p: Stratum, q: Stratum, delta: int = 0
) -> int:
    """Special chain height ht(q[t.d.(A)]) + ht(p) + delta, for AF A."""
    if not a.is_af:
        raise ApplicabilityError("sct_height_af needs an AF summary on the left")
    _check_membership(a, p, "A")
    _check_membership(b, q, "B")
    _check_delta(p, q, delta)
    return q.poly_height.eval(a.td) + p.height + delta


def lambda_bound(
    a: SpectrumSummary, b: SpectrumSummary, p: Stratum, q: Stratum, delta: int = 0
) -> int:
    """Upper bound for chains that leave the B-side at the zero ideal.

    t.d.(A) - t.d.(A/p) + ht(q[t.d.(A/p)]) + delta.
    """
    _check_membership(a, p, "A")
    _check_membership(b, q, "B")
    return a.td - p.residue_td + q.poly_height.eval(p.residue_td) + delta


def composed_height_bound(
    a: SpectrumSummary, b: SpectrumSummary, p: Stratum, q: Stratum
) -> int:
    """Two-sided bound: both lambda prefixes plus the fiber dimension."""
    return (a.td - p.residue_td) + (b.td - q.residue_td) + fiber_dim(p, q)


def thm28_dim(a: SpectrumSummary, b: SpectrumSummary) -> DimReport:
    """dim(A ox B) for a gated pullback A against an arbitrary summary B.

    The value is the larger of the outside-M term D(t.d.(A), outside, B)
    and the through-M term ht(M) + max over pairs q1 <= q in Spec(B) of
    ht(q1[t.d.(A)]) + ht((q/q1)[t.d.(D)]) + min(t.d.(B/q1), t.d.(K:D))
    + min(t.d.(D), dim(D) + t.d.(B/q)).
    """
    pd = _require_gated(a)
    _require_exact(b.pairs, "tensor dimension formula")

    term1, term1_winners = _d_value_max(a.td, pd.outside, b)
    term2, term2_winners = -1, []
    for pair in b.pairs:
        q1, q = pair.lower, pair.upper
        v = pd.m + (
            q1.poly_height.eval(a.td)
            + pair.quotient_poly_height.eval(pd.td_d)
            + min(q1.residue_td, pd.td_kd)
            + min(pd.td_d, pd.dim_d + q.residue_td)
        )
        if v > term2:
            term2, term2_winners = v, [pair]
        elif v == term2:
            term2_winners.append(pair)

    value = max(term1, term2)
    witnesses = []
    if term1 == value:
        witnesses += [Witness(TERM_OUTSIDE, f"B:{s.label}", term1) for s in term1_winners]
    if term2 == value:
        witnesses += [Witness(TERM_THROUGH, f"B:{w.label}", term2) for w in term2_winners]
    return DimReport(
        value=value,
        theorem=THEOREM_THM28,
        witnesses=tuple(witnesses),
        term_breakdown=((TERM_OUTSIDE, term1), (TERM_THROUGH, term2)),
        gates=applicability(a).gates,
    )


def pullback_pair_dim(a: SpectrumSummary, b: SpectrumSummary) -> int:
    """dim(A ox B) for two pullbacks whose conductors have full height.

    max over both orientations of ht(M_1[t.d.(A_2)]) + D(t.d.(D_1),
    dim(D_1), A_2).
    """
    pa, pb = _require_pullback(a), _require_pullback(b)
    for side, pd in (("first", pa), ("second", pb)):
        if not pd.conductor_is_top:
            raise ApplicabilityError(
                f"pullback_pair_dim needs ht(M) = dim(T); fails on the {side} operand"
            )

    def term(x, x_pd, y):
        return x.conductor_stratum.poly_height.eval(y.td) + d_value(
            x_pd.td_d, x_pd.dim_d, y
        )

    return max(term(a, pa, b), term(b, pb, a))


# --------------------------------------------------------------------------
# Dispatch


def dim_tensor(a: AlgebraExpr, b: AlgebraExpr) -> DimReport:
    """dim(A ox B) via the strongest applicable formula, with cross-checks.

    Dispatch: two fields go to Sharp; two AF summaries to the
    Wadsworth minimum formula (checked against both one-sided
    evaluations); any gated pullback side to the conductor formula,
    evaluated in every orientation that applies, all values asserted
    equal.  Two full-height pullbacks are additionally checked against
    the two-sided pullback formula.
    """
    sa, sb = summarize(a), summarize(b)

    if isinstance(a, Field) and isinstance(b, Field):
        value = sharp_dim(sa.td, sb.td)
        ref = f"A:{sa.zero_stratum.label}|B:{sb.zero_stratum.label}"
        return DimReport(
            value=value,
            theorem=THEOREM_SHARP,
            witnesses=(Witness("min-td", ref, value),),
            term_breakdown=(("td(A)", sa.td), ("td(B)", sb.td)),
            gates=("A:AF", "B:AF"),
        )

    if sa.is_af and sb.is_af:
        value = af_pair_dim(sa, sb)
        d_ab, wit_ab = _d_value_max(sa.td, sa.dim, sb)
        d_ba, wit_ba = _d_value_max(sb.td, sb.dim, sa)
        if not value == d_ab == d_ba:
            raise ConsistencyError(
                f"AF formulas disagree: min-form {value}, one-sided {d_ab} / {d_ba}"
            )
        witnesses = tuple(
            [Witness("dim(A)+td(B)", f"B:{s.label}", d_ab) for s in wit_ab]
            + [Witness("td(A)+dim(B)", f"A:{s.label}", d_ba) for s in wit_ba]
        )
        return DimReport(
            value=value,
            theorem=THEOREM_W38,
            witnesses=witnesses,
            term_breakdown=(
                ("dim(A)+td(B)", sa.dim + sb.td),
                ("td(A)+dim(B)", sa.td + sb.dim),
            ),
            gates=("A:AF", "B:AF"),
        )

    # At least one side is now a pullback that is not AF.
    attempts, failures = [], []
    if sa.pullback_data is not None:
        attempts.append(("A", sa, sb))
    if sb.pullback_data is not None:
        attempts.append(("B", sb, sa))
    reports = []
    for tag, x, y in attempts:
        try:
            reports.append((tag, thm28_dim(x, y)))
        except (ApplicabilityError, InexactPairError) as exc:
            failures.append(f"{tag}: {exc}")

    one_sided = []
    if sa.is_af:
        one_sided.append(("A", _d_value_max(sa.td, sa.dim, sb)))
    if sb.is_af:
        one_sided.append(("B", _d_value_max(sb.td, sb.dim, sa)))

    if reports:
        values = {rep.value for _, rep in reports}
        if len(values) != 1:
            raise ConsistencyError(f"conductor formula orientations disagree: {values}")
        value = values.pop()
        for tag, (v, _) in one_sided:
            if v != value:
                raise ConsistencyError(
                    f"one-sided AF formula ({tag}) gives {v}, conductor formula {value}"
                )
        if (
            sa.pullback_data is not None
            and sb.pullback_data is not None
            and sa.pullback_data.conductor_is_top
            and sb.pullback_data.conductor_is_top
        ):
            pp = pullback_pair_dim(sa, sb)
            if pp != value:
                raise ConsistencyError(
                    f"two-sided pullback formula gives {pp}, conductor formula {value}"
                )
        tag, report = reports[0]
        if tag == "B":
            report = _swap_sides(report)
        gates = tuple(
            f"{tag}:{g}" for tag, s in (("A", sa), ("B", sb)) for g in applicability(s).gates
        )
        return DimReport(
            value=report.value,
            theorem=THEOREM_THM28,
            witnesses=report.witnesses,
            term_breakdown=report.term_breakdown,
            gates=gates,
        )

    if one_sided:
        tag, (value, winners) = one_sided[0]
        other = "B" if tag == "A" else "A"
        return DimReport(
            value=value,
            theorem=THEOREM_W37,
            witnesses=tuple(Witness("D-max", f"{other}:{s.label}", value) for s in winners),
            term_breakdown=(("D-max", value),),
            gates=(f"{tag}:{GATE_AF}",),
        )

    raise ApplicabilityError(
        "no formula applies to this pair: " + "; ".join(failures or ["no gate passes"])
    )


def _swap_sides(report: DimReport) -> DimReport:
    def flip(ref: str) -> str:
        parts = ref.split("|")
        out = []
        for part in parts:
            if part.startswith("A:"):
                out.append("B:" + part[2:])
            elif part.startswith("B:"):
                out.append("A:" + part[2:])
            else:
                out.append(part)
        return "|".join(out)

    return DimReport(
        value=report.value,
        theorem=report.theorem,
        witnesses=tuple(
            Witness(w.term, flip(w.ref), w.value) for w in report.witnesses
        ),
        term_breakdown=report.term_breakdown,
        gates=report.gates,
    )
