"""Evaluation of the invariant relations over a table of ingested base values.

Three relation shapes share one evaluator:

* the genus-decreasing sum, with coefficients ``(-1)^(k-1) k^2`` on the
  classes ``d - k S`` of the surgered-down surface;
* the degeneration sum, with coefficients ``(-1)^(k-1) k 2^(k-1)`` on
  relative counts in classes ``d - k E``;
* the correspondence between absolute and relative counts along a
  (-2)-divisor with no real points, a lower-triangular binomial system
  together with its explicit alternating inverse.

Every evaluation returns the full term breakdown (index, coefficient, key,
resolved value, provenance), so the final integer can always be recomputed
from the report.  Missing table entries are treated as zero in the default
lenient mode and recorded as warnings; in strict mode the result is left
undefined.  All sums are finite: the truncation index is the point past
which the genus constraint fails for every further (even fractional)
shift, so a published zero row sitting exactly at the boundary still shows
up in the breakdown.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Iterable, Sequence

from .coeffs import binom_conv, gdf_coefficient
from .errors import (
    ExcludedClass,
    LatticeMismatch,
    MissingEntry,
    OddPairing,
    PreconditionFailed,
    TangencyMismatch,
    Unbounded,
)
from .lattice import HClass, SurfaceModel, blowup_plane, pair
from .realform import SPHERE, ConfigSpec, RealSurfaceModel, surgery_check, validate_config
from .tables import InvariantKey, InvariantTable


@dataclass(frozen=True)
class TangencyVector:
    """Sparse vector of contact orders: entry (s, m) means m contact points of order s."""

    entries: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        cleaned = tuple(sorted((int(s), int(m)) for s, m in self.entries if m != 0))
        object.__setattr__(self, "entries", cleaned)
        for s, m in cleaned:
            if s < 1 or m < 0:
                raise ValueError(f"bad tangency entry ({s}, {m})")
        if len({s for s, _ in cleaned}) != len(cleaned):
            raise ValueError("duplicate contact order")

    @classmethod
    def zero(cls) -> "TangencyVector":
        return cls()

    @classmethod
    def delta(cls, order: int, multiplicity: int = 1) -> "TangencyVector":
        return cls(((order, multiplicity),))

    @classmethod
    def of(cls, mapping: dict[int, int]) -> "TangencyVector":
        return cls(tuple(mapping.items()))

    @property
    def size(self) -> int:
        """Number of contact points, |alpha|."""
        return sum(m for _, m in self.entries)

    @property
    def weight(self) -> int:
        """Total contact order, I alpha."""
        return sum(s * m for s, m in self.entries)

    def __mul__(self, scalar: int) -> "TangencyVector":
        if not isinstance(scalar, int):
            return NotImplemented
        return TangencyVector(tuple((s, scalar * m) for s, m in self.entries))

    __rmul__ = __mul__

    def __str__(self) -> str:
        return format_tangency(self)


def parse_tangency(text: str) -> TangencyVector:
    """Parse 'order:mult' pairs joined by commas; '0' or '' is the zero vector."""
    from .errors import ParseError

    text = text.strip()
    if text in ("", "0"):
        return TangencyVector.zero()
    entries = []
    for chunk in text.split(","):
        order, sep, mult = chunk.partition(":")
        try:
            entries.append((int(order), int(mult) if sep else 1))
        except ValueError:
            raise ParseError(f"bad tangency spec {chunk!r}") from None
    try:
        return TangencyVector(tuple(entries))
    except ValueError as exc:
        raise ParseError(f"bad tangency spec {text!r}: {exc}") from None


def format_tangency(t: TangencyVector) -> str:
    if not t.entries:
        return "0"
    return ",".join(f"{s}:{m}" for s, m in t.entries)


@dataclass(frozen=True)
class Term:
    """One summand: shift index, exact coefficient, referenced key, resolved value."""

    k: int
    coefficient: int
    key: InvariantKey
    resolved: int | None
    source: str

    @property
    def missing(self) -> bool:
        return self.resolved is None


@dataclass(frozen=True)
class RelationResult:
    """Evaluated relation: final value (None when undefined) plus the term breakdown."""

    value: int | None
    terms: tuple[Term, ...]
    warnings: tuple[str, ...] = ()

    @property
    def undefined(self) -> bool:
        return self.value is None

    def check_sum(self) -> int:
        """Recompute the value from the breakdown, counting missing entries as zero."""
        return sum(t.coefficient * (t.resolved or 0) for t in self.terms)

    def require_value(self) -> int:
        if self.value is None:
            missing = next((t for t in self.terms if t.missing), None)
            detail = f": no entry for {missing.key.canonical()}" if missing else ""
            raise MissingEntry(f"relation value is undefined{detail}")
        return self.value


@dataclass(frozen=True)
class CoeffSeries:
    """Finite map from shift index to exact coefficient, for symbolic composition."""

    entries: tuple[tuple[int, int], ...]
    step: HClass | None = None

    def coefficient(self, i: int) -> int:
        for j, c in self.entries:
            if j == i:
                return c
        return 0

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)


@dataclass(frozen=True)
class ComposeReport:
    series: CoeffSeries
    passed: bool
    first_failure: int | None


@dataclass(frozen=True)
class Classification:
    """Whether a tangency problem on the quadric has a (unique, embedded) solution."""

    outcome: str
    case: int | None = None
    ruling: int | None = None

    @property
    def is_empty(self) -> bool:
        return self.outcome == "empty"

    @property
    def is_unique_embedding(self) -> bool:
        return self.outcome == "unique_embedding"

    @classmethod
    def empty(cls) -> "Classification":
        return cls("empty")

    @classmethod
    def unique(cls, case: int, ruling: int | None = None) -> "Classification":
        return cls("unique_embedding", case, ruling)

    def __str__(self) -> str:
        if self.is_empty:
            return "Empty"
        tag = f"UniqueEmbedding case={self.case}"
        if self.ruling is not None:
            tag += f" ruling={self.ruling}"
        return tag


def _surface_of(model: RealSurfaceModel | SurfaceModel) -> SurfaceModel:
    return model.surface if isinstance(model, RealSurfaceModel) else model


def truncation_bound(
    surface: SurfaceModel,
    d: HClass,
    step: HClass,
    step_mult: int = 1,
    g_target: int = 0,
) -> int:
    """Largest shift index any relation sum needs to consult.

    The arithmetic genus of ``d - k*step_mult*step`` is a quadratic in k.
    The bound is the smallest integer K such that the genus stays below
    ``g_target`` for every real shift beyond K; past it no class supports
    a curve of the target genus, so all table lookups are forced to zero.
    Taking the ceiling of the real crossing (instead of the last integer
    satisfying the constraint) errs on the inclusive side by at most one
    term, so a published zero value sitting exactly at the boundary is
    still surfaced in the breakdown.

    Raises :class:`Unbounded` when the genus never permanently drops
    (step.step >= 0 with non-positive drift).
    """
    if step_mult < 1:
        raise ValueError("step multiplier must be >= 1")
    c1 = surface.c1
    # 2*(genus(d - k*M*step) - g_target) = a k^2 + b k + c, exactly.
    a = step_mult * step_mult * pair(step, step)
    b = step_mult * (pair(c1, step) - 2 * pair(d, step))
    c = pair(d, d) - pair(c1, d) + 2 - 2 * g_target

    if a > 0 or (a == 0 and b > 0) or (a == 0 and b == 0 and c >= 0):
        raise Unbounded(
            f"genus of shifted classes never drops below {g_target} "
            f"(step.step = {pair(step, step)}, d.step = {pair(d, step)})"
        )
    if a == 0:
        if b == 0:
            return 0
        # Linear decay: smallest k >= 0 with b*k + c <= 0.
        return max(0, -((-c) // (-b)))

    disc = b * b - 4 * a * c
    if disc < 0:
        return 0
    q = -2 * a
    s = isqrt(disc)
    k = max(0, (b + s) // q)
    while not (q * k - b >= 0 and (q * k - b) ** 2 >= disc):
        k += 1
    return k


def _evaluate(
    raw_terms: Iterable[tuple[int, int, InvariantKey]],
    table: InvariantTable,
    strict: bool,
    extra_warnings: Sequence[str] = (),
) -> RelationResult:
    terms: list[Term] = []
    warnings = list(extra_warnings)
    undefined = False
    for k, coefficient, key in raw_terms:
        hit = table.lookup(key)
        if hit is None:
            terms.append(Term(k, coefficient, key, None, "missing"))
            if coefficient != 0:
                warnings.append(f"no table entry for {key.canonical()} (treated as 0)")
                undefined = undefined or strict
        else:
            value, provenance = hit
            terms.append(Term(k, coefficient, key, value, provenance or "table"))
    total = None if undefined else sum(t.coefficient * (t.resolved or 0) for t in terms)
    return RelationResult(total, tuple(terms), tuple(warnings))


def _default_components(model_y: RealSurfaceModel, count: int) -> tuple[str, ...]:
    spheres = [c.name for c in model_y.components if c.topology == SPHERE]
    others = [c.name for c in model_y.components if c.topology != SPHERE]
    if len(spheres) != 1 or len(model_y.components) != count:
        raise PreconditionFailed(
            f"cannot infer the chosen components of {model_y.id!r}; pass them explicitly"
        )
    return tuple(others + spheres)


def genus_decreasing(
    table: InvariantTable,
    model_y: RealSurfaceModel,
    model_x: RealSurfaceModel,
    d: HClass,
    sphere: HClass,
    r: Sequence[int],
    *,
    components: Sequence[str] | None = None,
    f_tag: str = "0",
    strict: bool = False,
) -> RelationResult:
    """Genus-g count on the surgered surface as a sum of genus-(g-1) counts.

    Evaluates ``sum over k >= 1 of (-1)^(k-1) k^2 * W_X(d - k*sphere, r')``
    where r' drops the final entry of r (the single point on the vanishing
    sphere).  Preconditions: the surgery relation between the two models
    must hold, d must be orthogonal to the sphere class, g must be at
    least 1 with last point count 1, the positivity bound
    ``c1.d + g - 2 > 0`` must hold, and the configuration must validate on
    the Y side.
    """
    r = tuple(int(x) for x in r)
    g = len(r) - 1
    if g < 1:
        raise PreconditionFailed("the relation needs genus >= 1 (r must have at least 2 entries)")
    if r[-1] != 1:
        raise PreconditionFailed("the last entry of r must be 1 (one point on the sphere)")
    check = surgery_check(model_x, model_y, sphere)
    if not check.passed:
        names = ", ".join(c.name for c in check.failures())
        raise PreconditionFailed(f"surgery check failed: {names}")
    if pair(d, sphere) != 0:
        raise PreconditionFailed(f"d.S = {pair(d, sphere)}, must be 0")
    c1d = pair(model_y.surface.c1, d)
    if c1d + g - 2 <= 0:
        raise PreconditionFailed(f"positivity fails: c1.d + g - 2 = {c1d + g - 2} <= 0")

    chosen = tuple(components) if components is not None else _default_components(model_y, g + 1)
    slack = c1d + g - 1 - sum(r)
    m = slack // 2 if slack >= 0 and slack % 2 == 0 else 0
    cfg = ConfigSpec(d=d, g=g, chosen=chosen, r=r, m=m, f_tag=f_tag)
    report = validate_config(model_y, cfg, surgery=sphere)
    if not report.passed:
        names = ", ".join(c.name for c in report.failures())
        raise PreconditionFailed(f"configuration invalid on the surgered side: {names}")

    surface_x = model_x.surface
    kmax = truncation_bound(surface_x, d, sphere, 1, g - 1)
    raw = []
    for k in range(1, kmax + 1):
        coefficient = gdf_coefficient(k)
        key = InvariantKey(surface_x.id, d - k * sphere, chosen[:-1], r[:-1], f_tag)
        raw.append((k, coefficient, key))
    return _evaluate(raw, table, strict)


def unscrew_relation(
    table: InvariantTable,
    model_z: RealSurfaceModel | SurfaceModel,
    d: HClass,
    divisor: HClass,
    r_rel: Sequence[int],
    *,
    components: Sequence[str] | None = None,
    f_tag: str = "0",
    strict: bool = False,
) -> RelationResult:
    """Degeneration sum: the surgered count as ``sum (-1)^(k-1) k 2^(k-1) * W^E(d - kE, r')``.

    The divisor must be a (-2)-class orthogonal to d (its intersection with
    ``d - kE`` is then 2k, which fixes the tangency data of each relative
    term).  The k-th factor counts the ways the curve in the quadric piece
    distributes over the k conjugate intersection pairs.
    """
    if pair(divisor, divisor) != -2:
        raise PreconditionFailed(f"E.E = {pair(divisor, divisor)}, must be -2")
    if pair(d, divisor) != 0:
        raise PreconditionFailed(f"d.E = {pair(d, divisor)}, must be 0")
    surface = _surface_of(model_z)
    r_rel = tuple(int(x) for x in r_rel)
    chosen = _resolve_components(model_z, components, len(r_rel))
    kmax = truncation_bound(surface, d, divisor, 1, len(r_rel) - 1)
    raw = []
    for k in range(1, kmax + 1):
        coefficient = (-1) ** (k - 1) * k * 2 ** (k - 1)
        key = InvariantKey(surface.id, d - k * divisor, chosen, r_rel, f_tag, relative_to=divisor)
        raw.append((k, coefficient, key))
    return _evaluate(raw, table, strict)


def _resolve_components(
    model: RealSurfaceModel | SurfaceModel,
    components: Sequence[str] | None,
    count: int,
) -> tuple[str, ...]:
    if components is not None:
        chosen = tuple(components)
    elif isinstance(model, RealSurfaceModel) and len(model.components) == count:
        chosen = model.component_names()
    else:
        raise PreconditionFailed(
            f"cannot infer the {count} chosen components of {_surface_of(model).id!r}; "
            "pass them explicitly"
        )
    if len(chosen) != count:
        raise PreconditionFailed(f"expected {count} components, got {len(chosen)}")
    return chosen


def _even_halved_pairing(d: HClass, divisor: HClass) -> int:
    de = pair(d, divisor)
    if de % 2 != 0:
        raise OddPairing(f"d.E = {de} is odd")
    if de < 0:
        raise PreconditionFailed(f"d.E = {de}, must be >= 0")
    return de // 2


def correspondence(
    table: InvariantTable,
    model_z: RealSurfaceModel | SurfaceModel,
    d: HClass,
    divisor: HClass,
    r: Sequence[int],
    *,
    components: Sequence[str] | None = None,
    f_tag: str = "0",
    strict: bool = False,
) -> RelationResult:
    """Absolute count from relative ones: ``sum C(d.E/2 + 2k, k) * W^E(d - 2kE, r)``.

    Requires d.E even and non-negative.  The binomial upper index is the
    halved pairing of the shifted class itself, so the system is lower
    triangular with unit diagonal.
    """
    half = _even_halved_pairing(d, divisor)
    surface = _surface_of(model_z)
    r = tuple(int(x) for x in r)
    chosen = _resolve_components(model_z, components, len(r))
    kmax = truncation_bound(surface, d, divisor, 2, len(r) - 1)
    raw = []
    for k in range(0, kmax + 1):
        coefficient = binom_conv(half + 2 * k, k)
        key = InvariantKey(
            surface.id, d - (2 * k) * divisor, chosen, r, f_tag, relative_to=divisor
        )
        raw.append((k, coefficient, key))
    return _evaluate(raw, table, strict)


def invert_relative(
    table: InvariantTable,
    model_x: RealSurfaceModel | SurfaceModel,
    d: HClass,
    divisor: HClass,
    r: Sequence[int],
    *,
    components: Sequence[str] | None = None,
    f_tag: str = "0",
    strict: bool = False,
) -> RelationResult:
    """Relative count from absolute ones, the alternating inverse of the correspondence.

    Evaluates ``sum (-1)^k (C(p+k, p) + C(p+k-1, p)) * W_X(d - 2kE, r)``
    with ``p = d.E/2``; the k = 0 coefficient degenerates to 1 through the
    vanishing convention C(-1, 0) = 0 when p = 0 (the report notes when
    that convention was actually consulted).
    """
    half = _even_halved_pairing(d, divisor)
    surface = _surface_of(model_x)
    r = tuple(int(x) for x in r)
    chosen = _resolve_components(model_x, components, len(r))
    kmax = truncation_bound(surface, d, divisor, 2, len(r) - 1)
    raw = []
    notes: list[str] = []
    for k in range(0, kmax + 1):
        coefficient = (-1) ** k * (binom_conv(half + k, half) + binom_conv(half + k - 1, half))
        if half + k - 1 < 0:
            notes.append(
                f"k={k}: binomial with negative upper index {half + k - 1} consulted "
                "(vanishing convention applied)"
            )
        key = InvariantKey(surface.id, d - (2 * k) * divisor, chosen, r, f_tag)
        raw.append((k, coefficient, key))
    return _evaluate(raw, table, strict, extra_warnings=notes)


def compose_check(maxdepth: int) -> ComposeReport:
    """Symbolically compose the degeneration and inversion coefficients.

    With d.E = 0 and E.E = -2 the halved pairing of ``d - kE`` equals k, so
    the coefficient collected on the shift index i is

        sum over k + 2l = i of (-1)^(l+k-1) k 2^(k-1) (C(k+l, k) + C(k+l-1, k)),

    which must telescope to the alternating square ``(-1)^(i-1) i^2``.
    """
    if maxdepth < 2:
        raise ValueError(f"maxdepth must be >= 2, got {maxdepth}")
    entries = []
    first_failure = None
    for i in range(1, maxdepth + 1):
        total = 0
        first = 1 if i % 2 else 2
        for k in range(first, i + 1, 2):
            l = (i - k) // 2
            total += (
                (-1) ** (l + k - 1)
                * k
                * 2 ** (k - 1)
                * (binom_conv(k + l, k) + binom_conv(k + l - 1, k))
            )
        entries.append((i, total))
        if first_failure is None and total != gdf_coefficient(i):
            first_failure = i
    return ComposeReport(CoeffSeries(tuple(entries)), first_failure is None, first_failure)


def wall_cross(value_at_r: int, correction: int) -> int:
    """Count with two more real points: the base value plus twice the correction term."""
    return value_at_r + 2 * correction


def pullback_class(d: HClass) -> HClass:
    """Class of the wall-crossing correction term on the one-point blow-up.

    Appends a single exceptional coordinate with coefficient -2 (the total
    transform minus twice the new exceptional class), moving the class from
    ``blowup:n`` to ``blowup:n+1``.
    """
    if d.lattice.is_quadric:
        raise LatticeMismatch("pullback is defined on blow-up lattices only")
    return HClass(blowup_plane(d.lattice.n + 1), d.coeffs + (-2,))


_RULING_1 = (1, 0)
_RULING_2 = (0, 1)
_BOTH_RULINGS = (1, 1)


def classify_quadric(
    d: HClass,
    alpha: TangencyVector,
    beta: TangencyVector,
    npoints_off_divisor: int,
) -> Classification:
    """Classify the tangency problem on the quadric relative to its diagonal class.

    With at most one point constraint away from the divisor, the solution
    set is empty except in four situations, each with a unique embedded
    solution: a ruling through its forced contact point (no off-divisor
    point), a ruling through one off-divisor point (free contact), and the
    diagonal class through one off-divisor point with either two simple
    contacts at fixed points or one double contact.  The output is
    symmetric under swapping the two rulings.
    """
    if not d.lattice.is_quadric:
        raise LatticeMismatch("classification applies to quadric classes only")
    if d.is_zero:
        raise PreconditionFailed("the class must be nonzero")
    if npoints_off_divisor not in (0, 1):
        raise PreconditionFailed("at most one point off the divisor is allowed")
    p, q = d.coeffs
    if (q == 0 and p >= 2) or (p == 0 and q >= 2):
        raise ExcludedClass(f"multiple of a ruling excluded: {d}")
    required = p + q  # d . (l1 + l2)
    if alpha.weight + beta.weight != required:
        raise TangencyMismatch(
            f"I(alpha) + I(beta) = {alpha.weight + beta.weight}, d.E = {required}"
        )

    delta1 = TangencyVector.delta(1)
    coeffs = tuple(d.coeffs)
    if coeffs in (_RULING_1, _RULING_2):
        ruling = 1 if coeffs == _RULING_1 else 2
        if alpha == delta1 and beta == TangencyVector.zero() and npoints_off_divisor == 0:
            return Classification.unique(1, ruling)
        if alpha == TangencyVector.zero() and beta == delta1 and npoints_off_divisor == 1:
            return Classification.unique(2, ruling)
    elif coeffs == _BOTH_RULINGS and beta == TangencyVector.zero() and npoints_off_divisor == 1:
        if alpha == TangencyVector.delta(1, 2):
            return Classification.unique(3)
        if alpha == TangencyVector.delta(2):
            return Classification.unique(4)
    return Classification.empty()
