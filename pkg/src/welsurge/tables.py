"""Ingestion, persistence, and provenance of invariant tables.

One record per line.  Absolute counts::

    W <surface_id> d=<class> L=(<name>,...) F=<tag> r=(<ints>) g=<int> = <int> # <provenance>

Relative counts carry the divisor they are tangent to::

    WE <surface_id> E=<class> d=<class> L=(<name>,...) F=<tag> r=(<ints>) g=<int> = <int> # <provenance>

Input is whitespace-tolerant; the canonical form written by
:func:`dumps_table` uses single spaces, sorts records, and round-trips
bit-exactly.  Values are arbitrary-precision decimal integers, and the
provenance string after '#' survives every round trip verbatim.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .errors import ConflictingValue, DuplicateKey, LatticeMismatch, ParseError
from .lattice import HClass, format_class, parse_class
from .realform import RealSurfaceModel


@dataclass(frozen=True)
class InvariantKey:
    """Identifies one invariant value: surface, class, components, point counts, tag.

    ``relative_to`` carries the tangency divisor class for relative counts
    and is None for absolute ones.
    """

    surface_id: str
    d: HClass
    components: tuple[str, ...]
    r: tuple[int, ...]
    f_tag: str = "0"
    relative_to: HClass | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "r", tuple(int(x) for x in self.r))
        if len(self.r) != len(self.components):
            raise ValueError(
                f"r has {len(self.r)} entries for {len(self.components)} components"
            )
        if not self.components:
            raise ValueError("a key needs at least one component")
        if self.relative_to is not None and self.relative_to.lattice != self.d.lattice:
            raise LatticeMismatch("relative divisor and class live in different lattices")

    @property
    def genus(self) -> int:
        return len(self.r) - 1

    @property
    def is_relative(self) -> bool:
        return self.relative_to is not None

    def canonical(self) -> str:
        """Canonical record prefix (everything before '= <value>')."""
        parts = []
        if self.relative_to is not None:
            parts.append(f"WE {self.surface_id} E={format_class(self.relative_to)}")
        else:
            parts.append(f"W {self.surface_id}")
        parts.append(f"d={format_class(self.d)}")
        parts.append(f"L=({','.join(self.components)})")
        parts.append(f"F={self.f_tag}")
        parts.append(f"r=({','.join(str(x) for x in self.r)})")
        parts.append(f"g={self.genus}")
        return " ".join(parts)


@dataclass
class InvariantTable:
    """Map from invariant keys to exact values with provenance strings.

    Treated as immutable once loaded; ``merge`` produces a new table.
    """

    _data: dict[InvariantKey, tuple[int, str]] = field(default_factory=dict)

    def insert(self, key: InvariantKey, value: int, provenance: str = "") -> None:
        existing = self._data.get(key)
        if existing is not None:
            if existing[0] != value:
                raise DuplicateKey(
                    f"key already present with value {existing[0]}, refusing {value}: "
                    f"{key.canonical()}"
                )
            return
        self._data[key] = (int(value), provenance)

    def lookup(self, key: InvariantKey) -> tuple[int, str] | None:
        """Value and provenance for a key, or None.  The single read path."""
        return self._data.get(key)

    def value(self, key: InvariantKey) -> int:
        hit = self.lookup(key)
        if hit is None:
            raise KeyError(key.canonical())
        return hit[0]

    def __contains__(self, key: InvariantKey) -> bool:
        return key in self._data

    def __len__(self) -> int:
        return len(self._data)

    def __iter__(self) -> Iterator[InvariantKey]:
        return iter(self._data)

    def items(self) -> Iterator[tuple[InvariantKey, tuple[int, str]]]:
        return iter(self._data.items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, InvariantTable):
            return NotImplemented
        return self._data == other._data


def merge(a: InvariantTable, b: InvariantTable) -> InvariantTable:
    """Union of two tables; overlapping keys must agree on the value.

    On a value-identical overlap the lexicographically smaller provenance
    is kept, which makes the operation commutative.
    """
    out = InvariantTable()
    out._data.update(a._data)
    for key, (value, provenance) in b.items():
        existing = out._data.get(key)
        if existing is None:
            out._data[key] = (value, provenance)
        elif existing[0] != value:
            raise ConflictingValue(
                f"merge collision on {key.canonical()}: {existing[0]} vs {value}"
            )
        else:
            out._data[key] = (value, min(existing[1], provenance))
    return out


def _take_paren(s: str, start: int, lineno: int) -> tuple[str, int]:
    start = _skip_ws(s, start)
    if start >= len(s) or s[start] != "(":
        raise ParseError("expected '('", line=lineno, column=start + 1)
    end = s.find(")", start)
    if end < 0:
        raise ParseError("unterminated '('", line=lineno, column=start + 1)
    return s[start : end + 1], end + 1


def _skip_ws(s: str, i: int) -> int:
    while i < len(s) and s[i].isspace():
        i += 1
    return i


def _expect(s: str, i: int, literal: str, lineno: int) -> int:
    i = _skip_ws(s, i)
    if not s.startswith(literal, i):
        raise ParseError(f"expected {literal!r}", line=lineno, column=i + 1)
    return i + len(literal)


def _parse_record(line: str, lineno: int) -> tuple[InvariantKey, int, str]:
    body, sep, provenance = line.partition("#")
    if sep:
        provenance = provenance[1:] if provenance.startswith(" ") else provenance
    body = body.rstrip()

    i = _skip_ws(body, 0)
    if body.startswith("WE", i) and (i + 2 == len(body) or body[i + 2].isspace()):
        relative = True
        i += 2
    elif body.startswith("W", i) and (i + 1 == len(body) or body[i + 1].isspace()):
        relative = False
        i += 1
    else:
        raise ParseError("record must start with 'W' or 'WE'", line=lineno, column=i + 1)

    i = _skip_ws(body, i)
    j = i
    while j < len(body) and not body[j].isspace():
        j += 1
    surface_id = body[i:j]
    if not surface_id:
        raise ParseError("missing surface id", line=lineno, column=i + 1)
    i = j

    relative_to = None
    if relative:
        i = _expect(body, i, "E=", lineno)
        chunk, i = _take_paren(body, i, lineno)
        relative_to = _parse_class_at(chunk, lineno, i - len(chunk))

    i = _expect(body, i, "d=", lineno)
    chunk, i = _take_paren(body, i, lineno)
    d = _parse_class_at(chunk, lineno, i - len(chunk))

    i = _expect(body, i, "L=", lineno)
    chunk, i = _take_paren(body, i, lineno)
    components = tuple(name.strip() for name in chunk[1:-1].split(","))
    if any(not name for name in components):
        raise ParseError("empty component name in L=(...)", line=lineno, column=i)

    i = _expect(body, i, "F=", lineno)
    i = _skip_ws(body, i)
    j = i
    while j < len(body) and not body[j].isspace():
        j += 1
    f_tag = body[i:j]
    if not f_tag:
        raise ParseError("missing F tag", line=lineno, column=i + 1)
    i = j

    i = _expect(body, i, "r=", lineno)
    chunk, i = _take_paren(body, i, lineno)
    try:
        r = tuple(int(x.strip()) for x in chunk[1:-1].split(","))
    except ValueError:
        raise ParseError(f"bad integer list {chunk!r}", line=lineno, column=i) from None

    i = _expect(body, i, "g=", lineno)
    i = _skip_ws(body, i)
    j = i
    while j < len(body) and (body[j].isdigit() or body[j] in "+-"):
        j += 1
    try:
        genus = int(body[i:j])
    except ValueError:
        raise ParseError("bad genus", line=lineno, column=i + 1) from None
    i = j

    i = _expect(body, i, "=", lineno)
    i = _skip_ws(body, i)
    j = i
    while j < len(body) and (body[j].isdigit() or body[j] in "+-"):
        j += 1
    try:
        value = int(body[i:j])
    except ValueError:
        raise ParseError("bad value", line=lineno, column=i + 1) from None
    if _skip_ws(body, j) != len(body):
        raise ParseError("trailing characters after value", line=lineno, column=j + 1)

    if genus != len(r) - 1:
        raise ParseError(
            f"g={genus} inconsistent with r of length {len(r)}", line=lineno
        )
    try:
        key = InvariantKey(surface_id, d, components, r, f_tag, relative_to)
    except ValueError as exc:
        raise ParseError(str(exc), line=lineno) from None
    return key, value, provenance


def _parse_class_at(chunk: str, lineno: int, column: int) -> HClass:
    try:
        return parse_class(chunk)
    except ParseError as exc:
        raise ParseError(f"bad class literal {chunk!r}", line=lineno, column=column + 1) from exc


def loads_table(
    text: str, models: Mapping[str, RealSurfaceModel] | None = None
) -> InvariantTable:
    """Parse a table from text; optionally check classes against declared surfaces."""
    table = InvariantTable()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        key, value, provenance = _parse_record(raw, lineno)
        if models is not None and key.surface_id in models:
            lattice = models[key.surface_id].surface.lattice
            if key.d.lattice != lattice:
                raise LatticeMismatch(
                    f"line {lineno}: class {format_class(key.d)} does not live in the "
                    f"lattice of surface {key.surface_id!r}"
                )
        existing = table.lookup(key)
        if existing is not None and existing[0] != value:
            raise DuplicateKey(
                f"line {lineno}: key already present with value {existing[0]}, "
                f"refusing {value}: {key.canonical()}"
            )
        table.insert(key, value, provenance)
    return table


def dumps_table(table: InvariantTable) -> str:
    """Canonical serialization: records sorted by key, single spaces, newline-terminated."""
    lines = []
    for key, (value, provenance) in sorted(table.items(), key=lambda kv: kv[0].canonical()):
        line = f"{key.canonical()} = {value}"
        if provenance:
            line += f" # {provenance}"
        lines.append(line)
    return "\n".join(lines) + "\n" if lines else ""


def load_table(path: str, models: Mapping[str, RealSurfaceModel] | None = None) -> InvariantTable:
    with open(path, encoding="utf-8") as handle:
        return loads_table(handle.read(), models)


def save_table(table: InvariantTable, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(dumps_table(table))
