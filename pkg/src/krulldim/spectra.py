"""Algebra constructors and their stratified prime-spectrum models.

The constructor language builds k-algebras of finite transcendence
degree: extension fields, abstract AF-domains (domains satisfying the
altitude formula ht(p) + t.d.(A/p) = t.d.(A) at every prime),
polynomial rings over these, K+M valuation domains, and pullbacks
phi^-1(D) along the quotient map phi: T -> K = T/M.

``summarize`` compiles an expression into a finite model of its prime
spectrum: strata of primes sharing (height, residue transcendence
degree, polynomial-height behaviour), plus certified quotient data for
comparable pairs.  All dimension and height formulas evaluate against
these summaries, never against ring elements; the model is spectrum
level only.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Optional, Union

from .errors import ConsistencyError, ConstraintError

KIND_PLAIN = "plain"
KIND_OUTSIDE = "outsideM"
KIND_CONTAINS = "containsM"


@dataclass(frozen=True)
class HeightFn:
    """Height of p[n] as a function of n: ``base + min(n, cap)``.

    ``base`` is the height in the ring itself, ``cap`` the extra height
    gained in polynomial extensions.  AF strata have cap 0 (locally
    Jaffard behaviour); pullback strata containing the conductor gain
    up to t.d.(K:D).
    """

    base: int
    cap: int

    def __post_init__(self):
        if self.base < 0 or self.cap < 0:
            raise ConstraintError("HeightFn requires base >= 0 and cap >= 0")

    def eval(self, n: int) -> int:
        if n < 0:
            raise ConstraintError("polynomial variable count must be >= 0")
        return self.base + min(n, self.cap)

    def __str__(self):
        return f"{self.base}+min(n,{self.cap})"


@dataclass(frozen=True)
class Stratum:
    """A class of primes sharing height, residue t.d. and p[n] heights.

    ``kind`` records the position relative to the conductor ideal M of a
    pullback ("outsideM" / "containsM"); non-pullback strata are "plain".
    ``label`` and ``provenance`` are display data and do not take part in
    equality.
    """

    height: int
    residue_td: int
    poly_height: HeightFn
    kind: str = KIND_PLAIN
    label: str = field(default="", compare=False)
    provenance: str = field(default="", compare=False)

    def __post_init__(self):
        if self.height < 0 or self.residue_td < 0:
            raise ConstraintError("stratum height and residue_td must be >= 0")
        if self.poly_height.base != self.height:
            raise ConsistencyError(
                f"poly_height.base = {self.poly_height.base} differs from "
                f"height = {self.height}"
            )


@dataclass(frozen=True)
class PairStratum:
    """A comparable pair of strata q1 <= q with quotient height data.

    ``quotient_poly_height`` models n -> ht((q/q1)[n]) computed in the
    quotient by the lower prime.  ``None`` marks the pair as present but
    not certified (non-catenarian models); formulas that need it raise
    instead of guessing.
    """

    lower: Stratum
    upper: Stratum
    quotient_poly_height: Optional[HeightFn]

    def __post_init__(self):
        if self.lower.height > self.upper.height:
            raise ConstraintError("pair stratum requires lower.height <= upper.height")
        q = self.quotient_poly_height
        if q is not None and self.lower.height + q.base > self.upper.height:
            raise ConsistencyError(
                f"quotient base {q.base} exceeds height gap of pair "
                f"{self.lower.height}..{self.upper.height}"
            )
        if self.lower == self.upper and q is not None and q != HeightFn(0, 0):
            raise ConsistencyError("reflexive pair must have quotient 0+min(n,0)")

    @property
    def exact(self) -> bool:
        return self.quotient_poly_height is not None

    @property
    def label(self) -> str:
        return f"{self.lower.label}<={self.upper.label}"


@dataclass(frozen=True)
class PullbackData:
    """Numeric data of the pullback a summary was compiled from.

    ``m`` is the height of the conductor maximal ideal M, ``outside``
    the top height among primes of T not containing M, ``td_kd`` the
    transcendence degree of K over D.  ``conductor_is_top`` records
    whether ht(M) = dim(T), the hypothesis of the two-sided pullback
    formula; ``ambient_catenarian`` whether the T model is catenarian.
    """

    m: int
    td_k: int
    td_d: int
    dim_d: int
    td_kd: int
    outside: int
    ambient_catenarian: bool
    conductor_is_top: bool


@dataclass(frozen=True)
class SpectrumSummary:
    """Finite stratified model of Spec of a constructor expression."""

    td: int
    dim: int
    strata: tuple[Stratum, ...]
    pairs: tuple[PairStratum, ...]
    is_af: bool
    is_domain: bool = True
    pullback_data: Optional[PullbackData] = None

    @property
    def zero_stratum(self) -> Stratum:
        return next(s for s in self.strata if s.height == 0)

    @property
    def top_stratum(self) -> Stratum:
        return max(self.strata, key=lambda s: s.height)

    @property
    def conductor_stratum(self) -> Stratum:
        """The stratum of the conductor ideal M itself (pullbacks only)."""
        pd = self.pullback_data
        if pd is None:
            raise ConstraintError("conductor stratum requested on a non-pullback summary")
        return next(
            s for s in self.strata if s.kind == KIND_CONTAINS and s.height == pd.m
        )

    def pairs_with_upper(self, upper: Stratum) -> Iterator[PairStratum]:
        return (p for p in self.pairs if p.upper == upper)

    def pairs_with_lower(self, lower: Stratum) -> Iterator[PairStratum]:
        return (p for p in self.pairs if p.lower == lower)

    def inexact_pairs(self) -> tuple[PairStratum, ...]:
        return tuple(p for p in self.pairs if not p.exact)

    def select(self, selector: str) -> Stratum:
        """Resolve a stratum selector: ``0``, ``M``, ``out:<h>`` or ``in:<e>``.

        ``0`` is the zero ideal, ``M`` the conductor stratum of a
        pullback (the top stratum otherwise).  ``out:<h>`` picks the
        height-h stratum outside M, or the plain height-h stratum of a
        non-pullback summary; ``in:<e>`` the stratum at D-height e over M.
        """
        pd = self.pullback_data
        if selector == "0":
            return self.zero_stratum
        if selector == "M":
            return self.conductor_stratum if pd is not None else self.top_stratum
        if selector.startswith("out:"):
            h = _selector_index(selector)
            kind = KIND_OUTSIDE if pd is not None else KIND_PLAIN
            for s in self.strata:
                if s.kind == kind and s.height == h:
                    return s
            raise ConstraintError(f"no stratum matches selector {selector!r}")
        if selector.startswith("in:"):
            if pd is None:
                raise ConstraintError(
                    f"selector {selector!r} needs a pullback summary"
                )
            e = _selector_index(selector)
            for s in self.strata:
                if s.kind == KIND_CONTAINS and s.height == pd.m + e:
                    return s
            raise ConstraintError(f"no stratum matches selector {selector!r}")
        raise ConstraintError(
            f"unknown stratum selector {selector!r} (use 0, M, out:<h> or in:<e>)"
        )


def _selector_index(selector: str) -> int:
    _, _, tail = selector.partition(":")
    if not tail.isdigit():
        raise ConstraintError(f"selector {selector!r} needs a decimal index")
    return int(tail)


# --------------------------------------------------------------------------
# Constructor expressions


@dataclass(frozen=True)
class Field:
    """Extension field of k with transcendence degree ``td``."""

    td: int

    def __post_init__(self):
        if self.td < 0:
            raise ConstraintError("field transcendence degree must be >= 0")


@dataclass(frozen=True)
class AfDomain:
    """Abstract AF-domain of transcendence degree ``td`` and dimension ``dim``.

    The model realizes the full canonical stratification: every height
    0..dim occurs, with residue transcendence degree td - h.  The
    ``catenarian`` flag gates which quotient pairs are certified.
    """

    td: int
    dim: int
    catenarian: bool = True

    def __post_init__(self):
        if not 0 <= self.dim <= self.td:
            raise ConstraintError("AF-domain requires 0 <= dim <= td")


@dataclass(frozen=True)
class PolyRing:
    """Polynomial ring in ``n`` variables over an AF constructor."""

    base: "AlgebraExpr"
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ConstraintError("polynomial ring needs n >= 0 variables")
        if not is_af_constructor(self.base):
            raise ConstraintError(
                "polynomial ring base must be an AF constructor "
                "(field, af, val or poly); pullbacks are not supported"
            )


@dataclass(frozen=True)
class Valuation:
    """K+M valuation domain: an AF-domain with chain spectrum.

    ``td`` is the transcendence degree, ``dim`` the rank; the residue
    field has transcendence degree td - dim.
    """

    td: int
    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ConstraintError("valuation domain requires dim >= 1")
        if self.dim > self.td:
            raise ConstraintError("valuation domain requires dim <= td")


@dataclass(frozen=True)
class Pullback:
    """The pullback phi^-1(D) of D <= K = T/M along phi: T -> K.

    ``m`` is the height of the maximal ideal M of T; ``outside`` the top
    height among primes of T not containing M.  For a valuation T the
    spectrum is a chain, so m must equal dim(T) and outside is forced to
    m - 1 (it may be omitted).  T and D must be AF constructors; nesting
    pullbacks is rejected because a pullback with t.d.(K:D) > 0 is never
    an AF-domain.
    """

    ambient: "AlgebraExpr"
    m: int
    subring: "AlgebraExpr"
    outside: Optional[int] = None

    def __post_init__(self):
        if not is_af_constructor(self.ambient):
            raise ConstraintError(
                "pullback T must be an AF constructor (field, af, val or poly)"
            )
        if not is_af_constructor(self.subring):
            raise ConstraintError(
                "pullback D must be an AF constructor (field, af, val or poly)"
            )
        td_t, dim_t = expr_td(self.ambient), expr_dim(self.ambient)
        if self.m < 1:
            raise ConstraintError("pullback requires m >= 1")
        if self.m > dim_t:
            raise ConstraintError("m <= dim(T) violated")
        td_k = td_t - self.m
        if expr_td(self.subring) > td_k:
            raise ConstraintError("t.d.(D) <= t.d.(K) violated")
        if isinstance(self.ambient, Valuation):
            if self.m != dim_t:
                raise ConstraintError(
                    "valuation T has a unique maximal ideal: m = dim(T) required"
                )
            forced = self.m - 1
            if self.outside is None:
                object.__setattr__(self, "outside", forced)
            elif self.outside != forced:
                raise ConstraintError(
                    "valuation T has chain spectrum: outside = m - 1 forced"
                )
        else:
            if self.outside is None:
                raise ConstraintError("outside required for non-valuation T")
            if self.outside < self.m - 1:
                raise ConstraintError("outside >= m - 1 violated")
            if self.outside > dim_t:
                raise ConstraintError("outside <= dim(T) violated")


AlgebraExpr = Union[Field, AfDomain, PolyRing, Valuation, Pullback]


def is_af_constructor(expr: AlgebraExpr) -> bool:
    return isinstance(expr, (Field, AfDomain, PolyRing, Valuation))


def expr_td(expr: AlgebraExpr) -> int:
    if isinstance(expr, (Field, AfDomain, Valuation)):
        return expr.td
    if isinstance(expr, PolyRing):
        return expr_td(expr.base) + expr.n
    if isinstance(expr, Pullback):
        return expr_td(expr.ambient)
    raise TypeError(f"not an algebra expression: {expr!r}")


def expr_dim(expr: AlgebraExpr) -> int:
    if isinstance(expr, Field):
        return 0
    if isinstance(expr, (AfDomain, Valuation)):
        return expr.dim
    if isinstance(expr, PolyRing):
        return expr_dim(expr.base) + expr.n
    if isinstance(expr, Pullback):
        return max(expr.outside, expr.m + expr_dim(expr.subring))
    raise TypeError(f"not an algebra expression: {expr!r}")


def expr_catenarian(expr: AlgebraExpr) -> bool:
    """Whether the model of the expression certifies all quotient pairs."""
    if isinstance(expr, (Field, Valuation)):
        return True
    if isinstance(expr, AfDomain):
        return expr.catenarian
    if isinstance(expr, PolyRing):
        return expr_catenarian(expr.base)
    raise TypeError(f"no catenarity model for {expr!r}")


# --------------------------------------------------------------------------
# Compilation to summaries


@lru_cache(maxsize=None)
def summarize(expr: AlgebraExpr) -> SpectrumSummary:
    """Compile an algebra expression into its stratified spectrum model."""
    if isinstance(expr, Field):
        return _summarize_af(expr.td, 0, True, f"field({expr.td})")
    if isinstance(expr, AfDomain):
        return _summarize_af(
            expr.td, expr.dim, expr.catenarian, f"af({expr.td},{expr.dim})"
        )
    if isinstance(expr, Valuation):
        return _summarize_af(expr.td, expr.dim, True, f"val({expr.td},{expr.dim})")
    if isinstance(expr, PolyRing):
        td = expr_td(expr)
        dim = expr_dim(expr)
        return _summarize_af(td, dim, expr_catenarian(expr), f"poly[{td},{dim}]")
    if isinstance(expr, Pullback):
        return _summarize_pullback(expr)
    raise TypeError(f"not an algebra expression: {expr!r}")


def _summarize_af(td, dim, catenarian, prov) -> SpectrumSummary:
    strata = tuple(
        Stratum(
            height=h,
            residue_td=td - h,
            poly_height=HeightFn(h, 0),
            kind=KIND_PLAIN,
            label=f"h{h}",
            provenance=f"{prov}/ht={h}",
        )
        for h in range(dim + 1)
    )
    pairs = []
    for i, lo in enumerate(strata):
        for up in strata[i:]:
            gap = up.height - lo.height
            if catenarian or gap == 0 or lo.height == 0:
                quot = HeightFn(gap, 0)
            else:
                quot = None
            pairs.append(PairStratum(lo, up, quot))
    return _finish(td, strata, tuple(pairs), pullback_data=None)


def _summarize_pullback(expr: Pullback) -> SpectrumSummary:
    td = expr_td(expr.ambient)
    m = expr.m
    td_k = td - m
    sub = summarize(expr.subring)
    td_kd = td_k - sub.td
    t_cat = expr_catenarian(expr.ambient)
    data = PullbackData(
        m=m,
        td_k=td_k,
        td_d=sub.td,
        dim_d=sub.dim,
        td_kd=td_kd,
        outside=expr.outside,
        ambient_catenarian=t_cat,
        conductor_is_top=(m == expr_dim(expr.ambient)),
    )

    outs = tuple(
        Stratum(
            height=h,
            residue_td=td - h,
            poly_height=HeightFn(h, 0),
            kind=KIND_OUTSIDE,
            label=f"out:{h}",
            provenance=f"pullback/outside M/ht={h}",
        )
        for h in range(max(m - 1, expr.outside) + 1)
    )
    ins = tuple(
        Stratum(
            height=m + s.height,
            residue_td=s.residue_td,
            poly_height=HeightFn(m + s.height, td_kd),
            kind=KIND_CONTAINS,
            label=f"in:{s.height}",
            provenance=f"pullback/contains M/D-ht={s.height}",
        )
        for s in sub.strata
    )
    by_d_height = {s.height - m: s for s in ins}

    pairs = []
    for i, lo in enumerate(outs):
        for up in outs[i:]:
            gap = up.height - lo.height
            exact = t_cat or gap == 0 or lo.height == 0
            pairs.append(PairStratum(lo, up, HeightFn(gap, 0) if exact else None))
    for lo in outs:
        if lo.height > m - 1:
            continue  # primes at height >= m outside M are incomparable with M
        for up in ins:
            e = up.height - m
            exact = t_cat or lo.height == 0
            quot = HeightFn(m - lo.height + e, td_kd) if exact else None
            pairs.append(PairStratum(lo, up, quot))
    for sub_pair in sub.pairs:
        lo = by_d_height[sub_pair.lower.height]
        up = by_d_height[sub_pair.upper.height]
        pairs.append(PairStratum(lo, up, sub_pair.quotient_poly_height))

    return _finish(td, outs + ins, tuple(pairs), pullback_data=data)


def _finish(td, strata, pairs, pullback_data) -> SpectrumSummary:
    dim = max(s.height for s in strata)
    is_af = all(
        s.height + s.residue_td == td and s.poly_height.cap == 0 for s in strata
    )
    summary = SpectrumSummary(
        td=td,
        dim=dim,
        strata=strata,
        pairs=pairs,
        is_af=is_af,
        is_domain=True,
        pullback_data=pullback_data,
    )
    _check_summary(summary)
    return summary


def _check_summary(summary: SpectrumSummary) -> None:
    """Internal coherence guards; violations are bugs, not user errors."""
    zero = summary.zero_stratum
    if zero.residue_td != summary.td or zero.poly_height != HeightFn(0, 0):
        raise ConsistencyError("zero stratum must be (0, td, 0+min(n,0))")
    reflexive = {p.lower for p in summary.pairs if p.lower == p.upper}
    for s in summary.strata:
        if s.height + s.residue_td > summary.td:
            raise ConsistencyError(f"height + residue_td > td at {s.label}")
        if s not in reflexive:
            raise ConsistencyError(f"missing reflexive pair for {s.label}")
    if summary.dim != max(s.height for s in summary.strata):
        raise ConsistencyError("dim differs from the maximal stratum height")


def is_af_poly(summary: SpectrumSummary, n: int) -> bool:
    """Whether the polynomial ring in n variables satisfies the altitude formula.

    True iff ht(p[n]) + t.d.(A/p) = t.d.(A) on every stratum.
    """
    if n < 0:
        raise ConstraintError("polynomial variable count must be >= 0")
    return all(
        s.poly_height.eval(n) + s.residue_td == summary.td for s in summary.strata
    )
