"""Real-structure bookkeeping: component topology, mod-2 parity data, validity checks.

A real surface model records, next to its lattice data, the connected
components of the real part, one mod-2 parity rule per component, and the
surgery links that pair it with surfaces whose real part differs by a
sphere.  The parity rule for a component L computes the mod-2
self-intersection of the trace of a class d on L:

    lsq(d) = (M d)^T A (M d)   over Z/2,

with M a configured mod-2 matrix on lattice coefficients and A a symmetric
mod-2 form.  All uses in scope reduce to parities of coefficients, so the
rule is shipped as data per component instead of derived from geometry.

Validity of a counting configuration (class, chosen components, real point
counts, conjugate pairs) is reported check-by-check; failures are report
entries, never exceptions, so a caller can display all of them at once.

Model files are line-based ASCII::

    surface <id> lattice=blowup:<n>|quadric
    c1 <class>
    component <name> <S2|RP2|RP2xRP2|TORUS> [M=<rows>] [A=<rows>]
    surgery <Yid> -> <Xid> S=<class>

Rows of M and A are comma-separated bitstrings; '#' starts a comment.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import LatticeMismatch, ParseError, UnknownComponent
from .lattice import (
    QUADRIC_KIND,
    HClass,
    LatticeKind,
    SurfaceModel,
    arithmetic_genus,
    blowup_plane,
    pair,
    parse_class,
)

SPHERE_KIND = "sphere"
RP2_KIND = "rp2"
KLEIN_KIND = "klein"
TORUS_KIND = "torus"


@dataclass(frozen=True)
class ComponentTopology:
    """Topological type of one connected component of a real part."""

    kind: str
    crosscaps: int = 0

    def __post_init__(self) -> None:
        if self.kind not in (SPHERE_KIND, RP2_KIND, KLEIN_KIND, TORUS_KIND):
            raise ValueError(f"unknown component topology {self.kind!r}")
        if self.kind == KLEIN_KIND and self.crosscaps < 2:
            raise ValueError("a multi-crosscap component needs at least 2 crosscaps")
        if self.kind != KLEIN_KIND and self.crosscaps != 0:
            raise ValueError(f"{self.kind} carries no crosscap count")

    def euler(self) -> int:
        if self.kind == SPHERE_KIND:
            return 2
        if self.kind == RP2_KIND:
            return 1
        if self.kind == TORUS_KIND:
            return 0
        return 2 - self.crosscaps

    def token(self) -> str:
        if self.kind == SPHERE_KIND:
            return "S2"
        if self.kind == RP2_KIND:
            return "RP2"
        if self.kind == TORUS_KIND:
            return "TORUS"
        return "x".join(["RP2"] * self.crosscaps)


SPHERE = ComponentTopology(SPHERE_KIND)
RP2 = ComponentTopology(RP2_KIND)
TORUS = ComponentTopology(TORUS_KIND)


def klein(crosscaps: int) -> ComponentTopology:
    """Non-orientable component with the given number of crosscaps (>= 2)."""
    return ComponentTopology(KLEIN_KIND, crosscaps)


def parse_topology(token: str) -> ComponentTopology:
    t = token.upper()
    if t == "S2":
        return SPHERE
    if t == "RP2":
        return RP2
    if t in ("TORUS", "T2"):
        return TORUS
    parts = t.split("X")
    if len(parts) >= 2 and all(p == "RP2" for p in parts):
        return klein(len(parts))
    raise ParseError(f"unknown component topology token {token!r}")


@dataclass(frozen=True)
class ParityRule:
    """Mod-2 data (M, A) computing the trace self-intersection of a class on a component."""

    m_rows: tuple[tuple[int, ...], ...] = ()
    a_rows: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self) -> None:
        s = len(self.m_rows)
        if len(self.a_rows) != s:
            raise ValueError("A must be square of the same size as M's row count")
        for row in self.m_rows:
            if any(x not in (0, 1) for x in row):
                raise ValueError("M entries must be bits")
        for i, row in enumerate(self.a_rows):
            if len(row) != s or any(x not in (0, 1) for x in row):
                raise ValueError("A must be an s x s bit matrix")
            for j in range(s):
                if row[j] != self.a_rows[j][i]:
                    raise ValueError("A must be symmetric")

    @property
    def is_trivial(self) -> bool:
        return all(all(x == 0 for x in row) for row in self.m_rows)

    def lsq_of(self, coeffs: tuple[int, ...]) -> int:
        """(M d)^T A (M d) over Z/2; always 0 or 1."""
        x = [sum(m * c for m, c in zip(row, coeffs)) % 2 for row in self.m_rows]
        total = 0
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, xj in enumerate(x):
                total += self.a_rows[i][j] * xj
        return total % 2


TRIVIAL_PARITY = ParityRule()


@dataclass(frozen=True)
class RealComponent:
    name: str
    topology: ComponentTopology
    parity: ParityRule = TRIVIAL_PARITY


@dataclass(frozen=True)
class SurgeryLink:
    """One end of a surgery pairing; role 'Y' marks the side carrying the extra sphere."""

    partner: str
    sphere: HClass
    role: str

    def __post_init__(self) -> None:
        if self.role not in ("Y", "X"):
            raise ValueError(f"surgery role must be 'Y' or 'X', got {self.role!r}")


@dataclass(frozen=True)
class RealSurfaceModel:
    """A surface model together with its real part and surgery links."""

    surface: SurfaceModel
    components: tuple[RealComponent, ...]
    surgery_links: tuple[SurgeryLink, ...] = ()

    def __post_init__(self) -> None:
        names = [c.name for c in self.components]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate component names in model {self.surface.id!r}")
        rank = self.surface.lattice.rank
        for c in self.components:
            for row in c.parity.m_rows:
                if len(row) != rank:
                    raise ValueError(
                        f"parity matrix of component {c.name!r} has rows of length "
                        f"{len(row)}, lattice rank is {rank}"
                    )
            # A sphere has trivial H_1, so its trace class is forced to vanish.
            if c.topology == SPHERE and not c.parity.is_trivial:
                raise ValueError(f"sphere component {c.name!r} must carry the zero parity map")
        for link in self.surgery_links:
            if link.sphere.lattice != self.surface.lattice:
                raise LatticeMismatch(
                    f"surgery sphere of model {self.surface.id!r} lives in the wrong lattice"
                )

    @property
    def id(self) -> str:
        return self.surface.id

    def euler_real(self) -> int:
        """Euler characteristic of the real part (sum over components)."""
        return sum(c.topology.euler() for c in self.components)

    def component(self, name: str) -> RealComponent:
        for c in self.components:
            if c.name == name:
                return c
        raise UnknownComponent(f"model {self.surface.id!r} has no component {name!r}")

    def component_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.components)


def lsq(model: RealSurfaceModel, component: str, d: HClass) -> int:
    """Mod-2 self-intersection of the trace of d on the named component (0 or 1).

    Depends only on d modulo 2 by construction.
    """
    if d.lattice != model.surface.lattice:
        raise LatticeMismatch(f"class lives in the wrong lattice for model {model.id!r}")
    return model.component(component).parity.lsq_of(d.coeffs)


@dataclass(frozen=True)
class ConfigSpec:
    """A counting configuration: class, genus, chosen components, point counts, tag."""

    d: HClass
    g: int
    chosen: tuple[str, ...]
    r: tuple[int, ...]
    m: int = 0
    f_tag: str = "0"
    nef_asserted: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "chosen", tuple(self.chosen))
        object.__setattr__(self, "r", tuple(int(x) for x in self.r))
        if self.g < 0:
            raise ValueError("genus must be >= 0")
        if len(self.chosen) != self.g + 1:
            raise ValueError(f"expected {self.g + 1} chosen components, got {len(self.chosen)}")
        if len(set(self.chosen)) != len(self.chosen):
            raise ValueError("chosen components must be distinct")
        if len(self.r) != self.g + 1:
            raise ValueError(f"expected {self.g + 1} real point counts, got {len(self.r)}")
        if any(x < 0 for x in self.r):
            raise ValueError("real point counts must be >= 0")
        if self.m < 0:
            raise ValueError("number of conjugate pairs must be >= 0")


@dataclass(frozen=True)
class CheckEntry:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"CHECK {self.name} {'PASS' if self.passed else 'FAIL'} ({self.detail})"


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[CheckEntry, ...]
    warnings: tuple[str, ...] = ()
    nef_asserted: bool = False

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> tuple[CheckEntry, ...]:
        return tuple(c for c in self.checks if not c.passed)

    def lines(self) -> list[str]:
        return [c.line() for c in self.checks]


def _is_exceptional_multiple(d: HClass) -> bool:
    """True when d is a (nonzero) multiple of a single exceptional class."""
    if d.lattice.is_quadric:
        return False
    if d.coeffs[0] != 0:
        return False
    nonzero = [c for c in d.coeffs[1:] if c != 0]
    return len(nonzero) == 1


def validate_config(
    model: RealSurfaceModel,
    cfg: ConfigSpec,
    surgery: HClass | None = None,
) -> ValidationReport:
    """Check every validity condition for a counting configuration.

    Failures are report entries, never exceptions.  Checks: existence of
    the chosen components, the genus bound, the degree bound against the
    trace parities, the real/conjugate point-count equation, the per
    component parity of each r_i, exclusion of multiples of exceptional
    classes, and (only when ``surgery`` is supplied) orthogonality of the
    class to the surgery sphere.  "Big and nef" is not decided here; a
    user-asserted nef flag is merely recorded on the report.
    """
    if cfg.d.lattice != model.surface.lattice:
        raise LatticeMismatch(f"class lives in the wrong lattice for model {model.id!r}")
    checks: list[CheckEntry] = []
    warnings: list[str] = []

    known = set(model.component_names())
    missing = [name for name in cfg.chosen if name not in known]
    checks.append(
        CheckEntry(
            "components-exist",
            not missing,
            "all chosen components found" if not missing else f"unknown: {', '.join(missing)}",
        )
    )

    ga = arithmetic_genus(model.surface, cfg.d)
    checks.append(CheckEntry("genus-bound", ga >= cfg.g, f"(d.d - c1.d)/2 + 1 = {ga} >= g = {cfg.g}"))

    c1d = pair(model.surface.c1, cfg.d)
    if not missing:
        lsqs = [lsq(model, name, cfg.d) for name in cfg.chosen]
        bound = cfg.g + 1 - sum(lsqs)
        checks.append(CheckEntry("degree-bound", c1d >= bound, f"c1.d = {c1d} >= g + 1 - sum lsq = {bound}"))
        for name, ri, l in zip(cfg.chosen, cfg.r, lsqs):
            ok = ri % 2 == (l + 1) % 2
            checks.append(
                CheckEntry(
                    f"parity[{name}]",
                    ok,
                    f"r = {ri} must be {'odd' if (l + 1) % 2 else 'even'} since lsq = {l}",
                )
            )
            if not ok:
                warnings.append(
                    f"parity clause violated on {name!r}: r = {ri} has the wrong parity "
                    f"for lsq = {l} (r must satisfy r = lsq + 1 mod 2)"
                )

    total = sum(cfg.r) + 2 * cfg.m
    expected = c1d + cfg.g - 1
    checks.append(
        CheckEntry("point-count", total == expected, f"c1.d + g - 1 = {expected}, r + 2m = {total}")
    )

    checks.append(
        CheckEntry(
            "exceptional-class",
            not _is_exceptional_multiple(cfg.d),
            "d is not a multiple of a single exceptional class"
            if not _is_exceptional_multiple(cfg.d)
            else "d is a multiple of a single exceptional class",
        )
    )

    if surgery is not None:
        ds = pair(cfg.d, surgery)
        checks.append(CheckEntry("surgery-orthogonal", ds == 0, f"d.S = {ds}"))

    return ValidationReport(tuple(checks), tuple(warnings), nef_asserted=cfg.nef_asserted)


def surgery_check(model_x: RealSurfaceModel, model_y: RealSurfaceModel, sphere: HClass) -> ValidationReport:
    """Check that Y is obtained from X by a surgery along the given sphere class.

    Verifies sphere self-intersection -2, the Euler characteristic step
    chi(RY) = chi(RX) + 2, and that Y's component list is X's plus one
    sphere (as a multiset of topological types).
    """
    if model_x.surface.lattice != model_y.surface.lattice:
        raise LatticeMismatch("the two models do not share a lattice")
    if sphere.lattice != model_x.surface.lattice:
        raise LatticeMismatch("the sphere class lives in the wrong lattice")

    ss = pair(sphere, sphere)
    chi_x = model_x.euler_real()
    chi_y = model_y.euler_real()

    def topo_counts(model: RealSurfaceModel) -> dict[ComponentTopology, int]:
        counts: dict[ComponentTopology, int] = {}
        for c in model.components:
            counts[c.topology] = counts.get(c.topology, 0) + 1
        return counts

    expected = topo_counts(model_x)
    expected[SPHERE] = expected.get(SPHERE, 0) + 1
    extension_ok = topo_counts(model_y) == expected

    checks = (
        CheckEntry("sphere-self-intersection", ss == -2, f"S.S = {ss}"),
        CheckEntry("euler-step", chi_y == chi_x + 2, f"chi(RY) = {chi_y}, chi(RX) + 2 = {chi_x + 2}"),
        CheckEntry(
            "component-extension",
            extension_ok,
            "RY = RX plus one sphere" if extension_ok else "RY is not RX plus one sphere",
        ),
    )
    return ValidationReport(checks)


_SURGERY_RE = re.compile(r"^(\S+)\s*->\s*(\S+)\s+S=(.+)$")


@dataclass
class _SurfaceDraft:
    lineno: int
    lattice: LatticeKind
    c1_text: str | None = None
    components: list[tuple[int, str, ComponentTopology, ParityRule]] = field(default_factory=list)


def _parse_bit_rows(spec: str, lineno: int) -> tuple[tuple[int, ...], ...]:
    rows = []
    for chunk in spec.split(","):
        if not chunk or any(ch not in "01" for ch in chunk):
            raise ParseError(f"bad bitstring {chunk!r}", line=lineno)
        rows.append(tuple(int(ch) for ch in chunk))
    return tuple(rows)


def parse_models(text: str) -> dict[str, RealSurfaceModel]:
    """Parse a model file into real surface models keyed by identifier."""
    drafts: dict[str, _SurfaceDraft] = {}
    order: list[str] = []
    surgeries: list[tuple[int, str, str, str]] = []
    current: str | None = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        directive, _, rest = line.partition(" ")
        rest = rest.strip()
        if directive == "surface":
            toks = rest.split()
            if len(toks) != 2 or not toks[1].startswith("lattice="):
                raise ParseError("expected: surface <id> lattice=blowup:<n>|quadric", line=lineno)
            sid, lattice_spec = toks[0], toks[1][len("lattice=") :]
            if sid in drafts:
                raise ParseError(f"surface {sid!r} defined twice", line=lineno)
            if lattice_spec == QUADRIC_KIND:
                lattice = LatticeKind(QUADRIC_KIND)
            elif lattice_spec.startswith("blowup:"):
                try:
                    lattice = blowup_plane(int(lattice_spec.split(":", 1)[1]))
                except ValueError:
                    raise ParseError(f"bad lattice spec {lattice_spec!r}", line=lineno) from None
            else:
                raise ParseError(f"bad lattice spec {lattice_spec!r}", line=lineno)
            drafts[sid] = _SurfaceDraft(lineno, lattice)
            order.append(sid)
            current = sid
        elif directive == "c1":
            if current is None:
                raise ParseError("c1 before any surface", line=lineno)
            drafts[current].c1_text = rest
        elif directive == "component":
            if current is None:
                raise ParseError("component before any surface", line=lineno)
            toks = rest.split()
            if len(toks) < 2:
                raise ParseError("expected: component <name> <topology> [M=...] [A=...]", line=lineno)
            name, topo_token = toks[0], toks[1]
            try:
                topo = parse_topology(topo_token)
            except ParseError as exc:
                raise ParseError(str(exc), line=lineno) from None
            m_rows: tuple[tuple[int, ...], ...] = ()
            a_rows: tuple[tuple[int, ...], ...] = ()
            for tok in toks[2:]:
                if tok.startswith("M="):
                    m_rows = _parse_bit_rows(tok[2:], lineno)
                elif tok.startswith("A="):
                    a_rows = _parse_bit_rows(tok[2:], lineno)
                else:
                    raise ParseError(f"unexpected token {tok!r} in component directive", line=lineno)
            try:
                rule = ParityRule(m_rows, a_rows)
            except ValueError as exc:
                raise ParseError(str(exc), line=lineno) from None
            drafts[current].components.append((lineno, name, topo, rule))
        elif directive == "surgery":
            m = _SURGERY_RE.match(rest)
            if not m:
                raise ParseError("expected: surgery <Yid> -> <Xid> S=<class>", line=lineno)
            surgeries.append((lineno, m.group(1), m.group(2), m.group(3)))
        else:
            raise ParseError(f"unknown directive {directive!r}", line=lineno)

    links: dict[str, list[SurgeryLink]] = {sid: [] for sid in drafts}
    for lineno, y_id, x_id, s_text in surgeries:
        for sid in (y_id, x_id):
            if sid not in drafts:
                raise ParseError(f"surgery references unknown surface {sid!r}", line=lineno)
        sphere = parse_class(s_text, drafts[y_id].lattice)
        links[y_id].append(SurgeryLink(partner=x_id, sphere=sphere, role="Y"))
        links[x_id].append(SurgeryLink(partner=y_id, sphere=sphere, role="X"))

    models: dict[str, RealSurfaceModel] = {}
    for sid in order:
        draft = drafts[sid]
        c1 = parse_class(draft.c1_text, draft.lattice) if draft.c1_text else None
        if draft.lattice.is_quadric:
            surface = SurfaceModel.quadric(sid, c1)
        else:
            surface = SurfaceModel.blowup_plane(sid, draft.lattice.n, c1)
        components = []
        for comp_line, name, topo, rule in draft.components:
            try:
                components.append(RealComponent(name, topo, rule))
            except ValueError as exc:
                raise ParseError(str(exc), line=comp_line) from None
        try:
            models[sid] = RealSurfaceModel(surface, tuple(components), tuple(links[sid]))
        except ValueError as exc:
            raise ParseError(str(exc), line=draft.lineno) from None
    return models


def load_models(path: str) -> dict[str, RealSurfaceModel]:
    with open(path, encoding="utf-8") as handle:
        return parse_models(handle.read())
