"""Exact combinatorics behind the square coefficients of the genus-decreasing relation.

The composed degeneration coefficients reduce to two alternating binomial
sums over pairs ``(k, l)`` with ``k + 2l = i``:

    u(i) = sum (-1)^l * k * 2^(k-1) * C(k+l, k)     over k >= 1,
    v(i) = sum (-1)^l * 2^k * C(k+l, k)             over k >= 0.

Pascal's rule gives ``u(i+2) - u(i+1) = u(i+1) - u(i) + v(i+1)`` and
``v(i+1) = i + 2``, hence ``u(i) - u(i-2) = i^2``, which is exactly the
alternating square coefficient ``(-1)^(i-1) * i^2``.  Everything here is
plain integer arithmetic; intermediate products overflow 64 bits long
before ``i = 200`` and must still cancel exactly, which is why nothing is
ever rounded.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cache
from math import comb
from typing import Callable

from .errors import NegativeK


def binom_conv(n: int, k: int) -> int:
    """Binomial coefficient with the vanishing convention for negative upper index.

    Standard C(n, k) for n >= k >= 0, zero for 0 <= n < k, and zero for
    every n < 0.  The negative branch subsumes the boundary case
    C(-1, 0) = 0 that the inversion coefficients rely on.
    """
    if k < 0:
        raise NegativeK(f"binomial lower index must be >= 0, got {k}")
    if n < 0:
        return 0
    return comb(n, k)


@cache
def u(i: int) -> int:
    """u(i) = sum over k + 2l = i, k >= 1, of (-1)^l * k * 2^(k-1) * C(k+l, k).

    >>> [u(j) for j in (1, 2, 3)]
    [1, 4, 10]
    """
    if i < 1:
        raise ValueError(f"u is defined for i >= 1, got {i}")
    first = 1 if i % 2 else 2
    total = 0
    for k in range(first, i + 1, 2):
        l = (i - k) // 2
        total += (-1) ** l * k * 2 ** (k - 1) * binom_conv(k + l, k)
    return total


@cache
def v(i: int) -> int:
    """v(i) = sum over k + 2l = i, k >= 0, of (-1)^l * 2^k * C(k+l, k).

    Telescopes to i + 1:

    >>> [v(j) for j in (1, 2, 5)]
    [2, 3, 6]
    """
    if i < 1:
        raise ValueError(f"v is defined for i >= 1, got {i}")
    first = 1 if i % 2 else 0
    total = 0
    for k in range(first, i + 1, 2):
        l = (i - k) // 2
        total += (-1) ** l * 2**k * binom_conv(k + l, k)
    return total


def gdf_coefficient(i: int) -> int:
    """Total coefficient (-1)^(i-1) * i^2 carried by the i-th shifted class."""
    if i < 1:
        raise ValueError(f"coefficient index must be >= 1, got {i}")
    return (-1) ** (i - 1) * i * i


@dataclass(frozen=True)
class IdentityCheck:
    """Outcome of one identity verified over a window of indices."""

    name: str
    instances: int
    first_failure: int | None

    @property
    def passed(self) -> bool:
        return self.first_failure is None


@dataclass(frozen=True)
class IdentityReport:
    """All identity checks up to a maximal index."""

    max_index: int
    checks: tuple[IdentityCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            status = "PASS" if c.passed else f"FAIL at index {c.first_failure}"
            out.append(f"{c.name} [{c.instances} instances] {status}")
        return out


def check_identities(
    max_index: int,
    *,
    u_fn: Callable[[int], int] | None = None,
    v_fn: Callable[[int], int] | None = None,
) -> IdentityReport:
    """Verify the coefficient identities exactly for all indices up to ``max_index``.

    ``u_fn`` and ``v_fn`` exist so a test harness can inject a mutated
    sequence and confirm the detector localizes the first failure; normal
    callers leave them unset.
    """
    if max_index < 3:
        raise ValueError(f"max_index must be >= 3, got {max_index}")
    uf = u_fn or u
    vf = v_fn or v

    def window(name: str, indices: range, holds: Callable[[int], bool]) -> IdentityCheck:
        failure = next((i for i in indices if not holds(i)), None)
        return IdentityCheck(name, len(indices), failure)

    checks = (
        window("v-shift: v(i) = i + 1", range(3, max_index + 1), lambda i: vf(i) == i + 1),
        window(
            "u-square-difference: u(i) - u(i-2) = i^2",
            range(3, max_index + 1),
            lambda i: uf(i) - uf(i - 2) == i * i,
        ),
        window(
            "pascal-recurrence: u(i+2) - u(i+1) = u(i+1) - u(i) + v(i+1)",
            range(1, max_index - 1),
            lambda i: uf(i + 2) - uf(i + 1) == uf(i + 1) - uf(i) + vf(i + 1),
        ),
        window(
            "square-coefficient: (-1)^(i-1) * (u(i) - u(i-2)) = (-1)^(i-1) * i^2",
            range(3, max_index + 1),
            lambda i: gdf_coefficient(i) == (-1) ** (i - 1) * (uf(i) - uf(i - 2)),
        ),
    )
    return IdentityReport(max_index, checks)
