"""Exact arithmetic in the second homology lattice of the surface models.

Two lattice shapes cover everything the calculator needs:

* ``blowup:n``, the plane blown up at ``n`` points, with basis
  ``(D; E_1, ..., E_n)`` and intersection form ``diag(+1, -1, ..., -1)``;
* ``quadric``, with basis the two ruling classes ``(l1, l2)`` and the
  hyperbolic form ``[[0, 1], [1, 0]]``.

The two shapes are distinct kinds, not interchangeable rank-2 conventions:
mixing them is a type error (:class:`~welsurge.errors.LatticeMismatch`),
never a silent reinterpretation.  Coefficients are arbitrary-precision
integers throughout; classes are immutable, so every operation is a pure
function and safe under concurrent reads.

Class literals are ASCII: ``(a;b1,...,bn)`` on a blow-up lattice and
``(p,q)`` on the quadric.  Input tolerates whitespace; the canonical form
produced by :func:`format_class` contains none.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import LatticeMismatch, ParseError

BLOWUP = "blowup"
QUADRIC_KIND = "quadric"


@dataclass(frozen=True)
class LatticeKind:
    """Shape of a homology lattice: ``blowup`` with ``n`` exceptional classes, or ``quadric``."""

    kind: str
    n: int = 0

    def __post_init__(self) -> None:
        if self.kind not in (BLOWUP, QUADRIC_KIND):
            raise ValueError(f"unknown lattice kind {self.kind!r}")
        if self.kind == QUADRIC_KIND and self.n != 0:
            raise ValueError("the quadric lattice carries no exceptional classes")
        if self.n < 0:
            raise ValueError("exceptional class count must be >= 0")

    @property
    def rank(self) -> int:
        return 2 if self.kind == QUADRIC_KIND else 1 + self.n

    @property
    def is_quadric(self) -> bool:
        return self.kind == QUADRIC_KIND

    def describe(self) -> str:
        return QUADRIC_KIND if self.is_quadric else f"{BLOWUP}:{self.n}"

    def __repr__(self) -> str:
        return f"LatticeKind({self.describe()!r})"


def blowup_plane(n: int) -> LatticeKind:
    """Lattice of the plane blown up at ``n`` points."""
    return LatticeKind(BLOWUP, n)


QUADRIC = LatticeKind(QUADRIC_KIND)


@dataclass(frozen=True)
class HClass:
    """An integer homology class, stored as coefficients over the lattice basis."""

    lattice: LatticeKind
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(int(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if len(coeffs) != self.lattice.rank:
            raise LatticeMismatch(
                f"class has {len(coeffs)} coefficients, lattice {self.lattice.describe()} "
                f"has rank {self.lattice.rank}"
            )

    def _require_same_lattice(self, other: "HClass") -> None:
        if self.lattice != other.lattice:
            raise LatticeMismatch(
                f"classes live in different lattices: "
                f"{self.lattice.describe()} vs {other.lattice.describe()}"
            )

    def dot(self, other: "HClass") -> int:
        """Intersection number under the lattice's bilinear form."""
        self._require_same_lattice(other)
        a, b = self.coeffs, other.coeffs
        if self.lattice.is_quadric:
            return a[0] * b[1] + a[1] * b[0]
        return a[0] * b[0] - sum(x * y for x, y in zip(a[1:], b[1:]))

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __add__(self, other: "HClass") -> "HClass":
        self._require_same_lattice(other)
        return HClass(self.lattice, tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "HClass") -> "HClass":
        self._require_same_lattice(other)
        return HClass(self.lattice, tuple(x - y for x, y in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "HClass":
        return HClass(self.lattice, tuple(-x for x in self.coeffs))

    def __mul__(self, scalar: int) -> "HClass":
        if not isinstance(scalar, int):
            return NotImplemented
        return HClass(self.lattice, tuple(scalar * x for x in self.coeffs))

    __rmul__ = __mul__

    def __str__(self) -> str:
        return format_class(self)

    def __repr__(self) -> str:
        return f"HClass({format_class(self)} @ {self.lattice.describe()})"


def pair(a: HClass, b: HClass) -> int:
    """Intersection pairing; symmetric and bilinear over the integers.

    Examples
    --------
    >>> S = parse_class("(2;-1,-1,-1,-1,-1,-1)")
    >>> pair(S, S)
    -2
    """
    return a.dot(b)


@dataclass(frozen=True)
class SurfaceModel:
    """A surface as seen by the calculator: an identifier, a lattice, and its anticanonical class.

    ``c1`` is stored rather than recomputed so non-default real forms can
    override it; the factory methods pin the standard values.
    """

    id: str
    lattice: LatticeKind
    c1: HClass

    def __post_init__(self) -> None:
        if self.c1.lattice != self.lattice:
            raise LatticeMismatch(f"c1 of surface {self.id!r} lives in the wrong lattice")

    @classmethod
    def blowup_plane(cls, surface_id: str, n: int, c1: HClass | None = None) -> "SurfaceModel":
        """Blow-up of the plane at ``n`` points; default ``c1 = (3; -1, ..., -1)``."""
        lattice = blowup_plane(n)
        if c1 is None:
            c1 = HClass(lattice, (3,) + (-1,) * n)
        return cls(surface_id, lattice, c1)

    @classmethod
    def quadric(cls, surface_id: str, c1: HClass | None = None) -> "SurfaceModel":
        """The quadric surface; default ``c1 = 2*l1 + 2*l2``."""
        if c1 is None:
            c1 = HClass(QUADRIC, (2, 2))
        return cls(surface_id, QUADRIC, c1)


def arithmetic_genus(surface: SurfaceModel, d: HClass) -> int:
    """Arithmetic genus ``(d.d - c1.d)/2 + 1`` of a class on the surface.

    This is the quantity the validity conditions bound from below, and the
    quantity whose decay truncates every relation sum.
    """
    num = pair(d, d) - pair(surface.c1, d)
    # num is always even: d.d + c1.d = d.d - K.d is even by Riemann-Roch parity.
    return num // 2 + 1


def degree(surface: SurfaceModel) -> int:
    """Self-intersection of the anticanonical class (9 - n for default blow-ups)."""
    return pair(surface.c1, surface.c1)


_INT_RE = re.compile(r"[+-]?\d+")


def parse_class(text: str, lattice: LatticeKind | None = None) -> HClass:
    """Parse a class literal, optionally checking it against an expected lattice.

    ``(a;b1,...,bn)`` parses into a blow-up lattice class (``(a;)`` for the
    unblown plane), ``(p,q)`` into a quadric class.  Errors carry 1-based
    column positions.
    """
    s = text
    n = len(s)

    def skip_ws(i: int) -> int:
        while i < n and s[i].isspace():
            i += 1
        return i

    def read_int(i: int) -> tuple[int, int]:
        i = skip_ws(i)
        m = _INT_RE.match(s, i)
        if not m:
            raise ParseError(f"expected an integer in class literal {text!r}", column=i + 1)
        return int(m.group()), m.end()

    i = skip_ws(0)
    if i >= n or s[i] != "(":
        raise ParseError(f"expected '(' in class literal {text!r}", column=i + 1)
    head, i = read_int(i + 1)
    i = skip_ws(i)
    entries = [head]
    saw_semicolon = False
    if i < n and s[i] == ";":
        saw_semicolon = True
        i = skip_ws(i + 1)
        while i < n and s[i] != ")":
            value, i = read_int(i)
            entries.append(value)
            i = skip_ws(i)
            if i < n and s[i] == ",":
                i = skip_ws(i + 1)
            elif i < n and s[i] != ")":
                raise ParseError(f"expected ',' or ')' in class literal {text!r}", column=i + 1)
    else:
        while i < n and s[i] == ",":
            value, i = read_int(i + 1)
            entries.append(value)
            i = skip_ws(i)
    if i >= n or s[i] != ")":
        raise ParseError(f"expected ')' in class literal {text!r}", column=i + 1)
    i = skip_ws(i + 1)
    if i != n:
        raise ParseError(f"trailing characters after class literal {text!r}", column=i + 1)

    if saw_semicolon:
        inferred = blowup_plane(len(entries) - 1)
    elif len(entries) == 2:
        inferred = QUADRIC
    elif len(entries) == 1:
        inferred = blowup_plane(0)
    else:
        raise ParseError(
            f"class literal {text!r} needs ';' after the first coefficient on a blow-up lattice",
            column=1,
        )

    if lattice is not None and lattice != inferred:
        raise LatticeMismatch(
            f"class {text!r} parses into {inferred.describe()}, expected {lattice.describe()}"
        )
    return HClass(inferred, tuple(entries))


def format_class(c: HClass) -> str:
    """Canonical ASCII form of a class: no whitespace, minus signs only."""
    if c.lattice.is_quadric:
        return f"({c.coeffs[0]},{c.coeffs[1]})"
    head, tail = c.coeffs[0], c.coeffs[1:]
    return f"({head};{','.join(str(x) for x in tail)})"
