"""Monomial indexing for bivariate local polynomials."""

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from math import factorial
from typing import List, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray

from src.exceptions import InvalidArgumentError

MultiIndex = Tuple[int, ...]
Exponent = Tuple[int, int]


def _entries_of_degree(degree: int) -> List[MultiIndex]:
    return list(combinations_with_replacement((1, 2), degree))


def _exponent(entry: MultiIndex) -> Exponent:
    return (entry.count(1), entry.count(2))


@dataclass(frozen=True)
class MultiIndexSet:
    """Ordered multi-indices (j1 <= ... <= jL), L = 0..p, for d = 2.

    Entry order is (1, z1, z2, z1^2, z1 z2, z2^2, z1^3, z1^2 z2, ...).
    """

    p: int
    entries: Tuple[MultiIndex, ...] = field(init=False)
    exponents: Tuple[Exponent, ...] = field(init=False)
    factorials: Tuple[int, ...] = field(init=False)

    def __post_init__(self) -> None:
        if self.p < 0:
            raise InvalidArgumentError(f"polynomial order must be >= 0, got {self.p}")
        entries: List[MultiIndex] = []
        for degree in range(self.p + 1):
            entries.extend(_entries_of_degree(degree))
        exponents = tuple(_exponent(e) for e in entries)
        object.__setattr__(self, "entries", tuple(entries))
        object.__setattr__(self, "exponents", exponents)
        object.__setattr__(
            self,
            "factorials",
            tuple(factorial(s1) * factorial(s2) for s1, s2 in exponents),
        )

    @property
    def size(self) -> int:
        return len(self.entries)

    def next_degree_exponents(self) -> Tuple[Exponent, ...]:
        """Exponents of the degree p+1 monomials (columns of the bias matrix)."""
        return tuple(_exponent(e) for e in _entries_of_degree(self.p + 1))

    def position(self, exponent: Exponent) -> int:
        """Column of the monomial z1^s1 z2^s2."""
        return self.exponents.index(tuple(exponent))

    def degree_positions(self, degree: int) -> List[int]:
        return [i for i, (s1, s2) in enumerate(self.exponents) if s1 + s2 == degree]


def monomials(
    z: NDArray[np.float64], exponents: Sequence[Exponent]
) -> NDArray[np.float64]:
    """Columns z1^s1 * z2^s2 for an (n, 2) array."""
    pts = np.atleast_2d(np.asarray(z, dtype=float))
    return np.column_stack(
        [pts[:, 0] ** s1 * pts[:, 1] ** s2 for s1, s2 in exponents]
    )


def design_row(z: Sequence[float], idx: MultiIndexSet) -> NDArray[np.float64]:
    """Monomials of a single point in stacking order."""
    return monomials(np.asarray(z, dtype=float).reshape(1, 2), idx.exponents)[0]


def design_matrix(z: NDArray[np.float64], idx: MultiIndexSet) -> NDArray[np.float64]:
    """Stacked design rows for an (n, 2) array."""
    return monomials(z, idx.exponents)
