"""
Exact linear algebra over the rationals or a prime field.

Scalars live in a sympy polynomial domain (``QQ`` or ``GF(p)``), so every
rank, kernel and intersection below is computed without floating point.
Row reduction is delegated to ``DomainMatrix.rref``; the incremental
``EchelonForm`` covers the span-membership and coordinate questions that
the persistence and chain-map code ask one vector at a time.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterable, Sequence

from sympy import isprime
from sympy.polys.domains import GF, QQ
from sympy.polys.matrices import DomainMatrix

from main.errors import (
    AmbientMismatchError,
    FieldError,
    ModeMismatchError,
    NestingError,
    NotInSpanError,
)

logger = logging.getLogger(__name__)

Vector = tuple


@dataclass(frozen=True)
class ScalarField:
    """
    The coefficient field: rationals (``modulus=None``) or GF(p).

    Elements handed out by ``convert`` are native sympy domain elements;
    rationals are kept in lowest terms by the domain, prime-field values
    are kept in [0, p).
    """

    modulus: int | None = None

    def __post_init__(self):
        if self.modulus is not None:
            if not isinstance(self.modulus, int) or self.modulus < 2 or not isprime(self.modulus):
                raise FieldError(f"modulus {self.modulus!r} is not a prime")

    @classmethod
    def rational(cls) -> "ScalarField":
        return cls(None)

    @classmethod
    def prime(cls, p: int) -> "ScalarField":
        return cls(int(p))

    @classmethod
    def parse(cls, token: str) -> "ScalarField":
        """
        Parse a field token: ``rat`` (or ``Q``) for the rationals,
        ``F<p>`` for the prime field with p elements.
        """
        text = token.strip()
        if text.lower() in ("rat", "q", "rational"):
            return cls.rational()
        if text[:1] in ("F", "f") and text[1:].isdigit():
            return cls.prime(int(text[1:]))
        raise FieldError(f"unknown field token {token!r}; expected 'rat' or 'F<prime>'")

    @property
    def is_rational(self) -> bool:
        return self.modulus is None

    @property
    def label(self) -> str:
        return "rat" if self.is_rational else f"F{self.modulus}"

    @cached_property
    def domain(self):
        if self.is_rational:
            return QQ
        return GF(self.modulus, symmetric=False)

    @property
    def zero(self):
        return self.domain.zero

    @property
    def one(self):
        return self.domain.one

    def owns(self, value) -> bool:
        return self.domain.of_type(value)

    def convert(self, value):
        """Convert an int, Fraction, decimal string or own element into the field."""
        K = self.domain
        if K.of_type(value):
            return value
        if isinstance(value, str):
            value = Fraction(value.strip())
        if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
            raise ModeMismatchError(f"cannot convert {value!r} into field {self.label}")
        value = Fraction(value)
        if self.is_rational:
            return K(value.numerator, value.denominator)
        if value.denominator % self.modulus == 0:
            raise FieldError(f"{value} has no image in F{self.modulus}")
        return K(value.numerator) / K(value.denominator)

    def is_zero(self, value) -> bool:
        return value == self.domain.zero

    def to_fraction(self, value) -> Fraction:
        """Exact value as a Fraction (prime-field values as their representative in [0, p))."""
        if self.is_rational:
            return Fraction(int(value.numerator), int(value.denominator))
        return Fraction(int(self.domain.to_int(value)) % self.modulus)

    def render(self, value) -> str:
        return str(self.to_fraction(value))


def _require_same_field(a: ScalarField, b: ScalarField):
    if a != b:
        raise ModeMismatchError(f"scalar modes differ: {a.label} vs {b.label}")


@dataclass(frozen=True)
class Matrix:
    """Dense matrix with entries in one ScalarField."""

    field: ScalarField
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError(f"entries do not match shape {self.rows}x{self.cols}")
        for row in self.entries:
            for value in row:
                if not self.field.owns(value):
                    raise ModeMismatchError(
                        f"entry {value!r} is not an element of {self.field.label}"
                    )

    @classmethod
    def from_rows(cls, field: ScalarField, rows: Iterable[Iterable[Any]], cols: int | None = None) -> "Matrix":
        converted = tuple(tuple(field.convert(v) for v in row) for row in rows)
        if cols is None:
            cols = len(converted[0]) if converted else 0
        return cls(field, len(converted), cols, converted)

    @classmethod
    def from_columns(cls, field: ScalarField, columns: Sequence[Sequence[Any]], rows: int) -> "Matrix":
        cols = len(columns)
        entries = tuple(
            tuple(field.convert(columns[j][i]) for j in range(cols)) for i in range(rows)
        )
        return cls(field, rows, cols, entries)

    @classmethod
    def zeros(cls, field: ScalarField, rows: int, cols: int) -> "Matrix":
        return cls(field, rows, cols, tuple((field.zero,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, field: ScalarField, n: int) -> "Matrix":
        return cls(
            field,
            n,
            n,
            tuple(tuple(field.one if i == j else field.zero for j in range(n)) for i in range(n)),
        )

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> list:
        return [self.column(j) for j in range(self.cols)]

    def is_zero(self) -> bool:
        return all(self.field.is_zero(v) for row in self.entries for v in row)

    def to_domain_matrix(self) -> DomainMatrix:
        return DomainMatrix([list(r) for r in self.entries], (self.rows, self.cols), self.field.domain)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        _require_same_field(self.field, other.field)
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return Matrix.zeros(self.field, self.rows, other.cols)
        product = (self.to_domain_matrix() * other.to_domain_matrix()).to_list()
        return Matrix(self.field, self.rows, other.cols, tuple(tuple(r) for r in product))

    def __sub__(self, other: "Matrix") -> "Matrix":
        _require_same_field(self.field, other.field)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return Matrix(
            self.field,
            self.rows,
            self.cols,
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)),
        )

    def to_fractions(self) -> list:
        return [[self.field.to_fraction(v) for v in row] for row in self.entries]


def _row_reduce(field: ScalarField, rows: Sequence[Sequence[Any]], ncols: int):
    """
    Reduced row echelon form of ``rows``.

    Returns:
        tuple: (nonzero reduced rows with unit pivots, pivot column indices)
    """
    if not rows or ncols == 0:
        return [], ()
    K = field.domain
    dm = DomainMatrix([list(r) for r in rows], (len(rows), ncols), K)
    reduced, pivots = dm.rref()
    reduced_rows = reduced.to_list()
    out = []
    for i, pc in enumerate(pivots):
        row = list(reduced_rows[i])
        lead = row[pc]
        if lead != K.one:
            row = [v / lead for v in row]
        out.append(row)
    return out, tuple(pivots)


def rank(m: Matrix) -> int:
    """Dimension of the column space of ``m``."""
    _, pivots = _row_reduce(m.field, m.entries, m.cols)
    return len(pivots)


@dataclass(frozen=True)
class SubspaceBasis:
    """An ordered list of linearly independent vectors of K^ambient_dim."""

    field: ScalarField
    ambient_dim: int
    vectors: tuple

    def __post_init__(self):
        for v in self.vectors:
            if len(v) != self.ambient_dim:
                raise AmbientMismatchError(
                    f"vector of length {len(v)} in ambient dimension {self.ambient_dim}"
                )
            for value in v:
                if not self.field.owns(value):
                    raise ModeMismatchError(f"{value!r} is not an element of {self.field.label}")
        if self.vectors:
            _, pivots = _row_reduce(self.field, self.vectors, self.ambient_dim)
            if len(pivots) != len(self.vectors):
                raise ValueError("basis vectors are linearly dependent")

    @classmethod
    def zero(cls, field: ScalarField, ambient_dim: int) -> "SubspaceBasis":
        return cls(field, ambient_dim, ())

    @classmethod
    def standard(cls, field: ScalarField, ambient_dim: int) -> "SubspaceBasis":
        return cls(field, ambient_dim, Matrix.identity(field, ambient_dim).entries)

    @classmethod
    def span(cls, field: ScalarField, ambient_dim: int, vectors: Iterable[Sequence[Any]]) -> "SubspaceBasis":
        """Greedy independent subset of ``vectors``, in order."""
        echelon = EchelonForm(field, ambient_dim)
        kept = []
        for v in vectors:
            v = tuple(field.convert(x) for x in v)
            if echelon.add(v):
                kept.append(v)
        return cls(field, ambient_dim, tuple(kept))

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def as_matrix(self) -> Matrix:
        """Basis vectors as the columns of an ambient_dim x dim matrix."""
        return Matrix.from_columns(self.field, self.vectors, self.ambient_dim)

    def contains(self, v: Sequence[Any]) -> bool:
        return EchelonForm.of(self).contains(v)

    def __len__(self):
        return self.dim


class EchelonForm:
    """
    Incrementally maintained Gauss-Jordan form of a growing set of vectors.

    Tracks, for every stored row, its expression in the independent
    vectors accepted so far, so ``coordinates`` answers exactly in the
    order vectors were added.
    """

    def __init__(self, field: ScalarField, ambient_dim: int):
        self.field = field
        self.ambient_dim = ambient_dim
        self._rows = {}  # pivot column -> (row, combination over accepted vectors)
        self.accepted = []

    @classmethod
    def of(cls, basis: SubspaceBasis) -> "EchelonForm":
        echelon = cls(basis.field, basis.ambient_dim)
        for v in basis.vectors:
            echelon.add(v)
        return echelon

    @property
    def dim(self) -> int:
        return len(self.accepted)

    def _check(self, v):
        if len(v) != self.ambient_dim:
            raise AmbientMismatchError(
                f"vector of length {len(v)} in ambient dimension {self.ambient_dim}"
            )

    def reduce(self, v: Sequence[Any]):
        """
        Returns:
            tuple: (residual, coefficients) with v = residual + sum(c_k * accepted_k)
        """
        self._check(v)
        K = self.field.domain
        residual = [self.field.convert(x) for x in v]
        coefficients = [K.zero] * len(self.accepted)
        for pivot, (row, combo) in self._rows.items():
            c = residual[pivot]
            if c == K.zero:
                continue
            residual = [r - c * x for r, x in zip(residual, row)]
            for k, t in enumerate(combo):
                if t != K.zero:
                    coefficients[k] += c * t
        return residual, coefficients

    def contains(self, v: Sequence[Any]) -> bool:
        residual, _ = self.reduce(v)
        return all(x == self.field.zero for x in residual)

    def coordinates(self, v: Sequence[Any]) -> tuple:
        residual, coefficients = self.reduce(v)
        if any(x != self.field.zero for x in residual):
            raise NotInSpanError("vector does not lie in the span")
        return tuple(coefficients)

    def add(self, v: Sequence[Any]) -> bool:
        """Add ``v``; returns False (and stores nothing) when it is already in the span."""
        residual, coefficients = self.reduce(v)
        K = self.field.domain
        pivot = next((i for i, x in enumerate(residual) if x != K.zero), None)
        if pivot is None:
            return False
        scale = residual[pivot]
        row = [x / scale for x in residual]
        # residual = v_new - sum(coefficients_k * accepted_k)
        combo = [-c / scale for c in coefficients] + [K.one / scale]
        for key, (other, other_combo) in list(self._rows.items()):
            padded = list(other_combo) + [K.zero]
            a = other[pivot]
            if a != K.zero:
                other = [x - a * y for x, y in zip(other, row)]
                padded = [x - a * y for x, y in zip(padded, combo)]
            self._rows[key] = (other, padded)
        self._rows[pivot] = (row, combo)
        self.accepted.append(tuple(self.field.convert(x) for x in v))
        return True


def kernel_basis(m: Matrix) -> SubspaceBasis:
    """Basis of {v : m v = 0}, one vector per free column of the reduced form."""
    field, K = m.field, m.field.domain
    if m.cols == 0:
        return SubspaceBasis.zero(field, 0)
    reduced, pivots = _row_reduce(field, m.entries, m.cols)
    pivot_set = set(pivots)
    vectors = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = [K.zero] * m.cols
        v[free] = K.one
        for row, pc in zip(reduced, pivots):
            v[pc] = -row[free]
        vectors.append(tuple(v))
    logger.debug("kernel of %dx%d matrix: rank %d, nullity %d", m.rows, m.cols, len(pivots), len(vectors))
    return SubspaceBasis(field, m.cols, tuple(vectors))


def _require_compatible(a: SubspaceBasis, b: SubspaceBasis):
    _require_same_field(a.field, b.field)
    if a.ambient_dim != b.ambient_dim:
        raise AmbientMismatchError(f"ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}")


def span_contains(outer: SubspaceBasis, inner: SubspaceBasis) -> bool:
    """True iff span(inner) is a subspace of span(outer)."""
    _require_compatible(outer, inner)
    echelon = EchelonForm.of(outer)
    return all(echelon.contains(v) for v in inner.vectors)


def sum_space(a: SubspaceBasis, b: SubspaceBasis) -> SubspaceBasis:
    _require_compatible(a, b)
    return SubspaceBasis.span(a.field, a.ambient_dim, list(a.vectors) + list(b.vectors))


def intersect(a: SubspaceBasis, b: SubspaceBasis) -> SubspaceBasis:
    """
    Basis of span(a) ∩ span(b), from the kernel of [A | -B].
    """
    _require_compatible(a, b)
    field, n = a.field, a.ambient_dim
    if a.dim == 0 or b.dim == 0:
        return SubspaceBasis.zero(field, n)
    stacked = Matrix(
        field,
        n,
        a.dim + b.dim,
        tuple(
            tuple(a.vectors[j][i] for j in range(a.dim)) + tuple(-b.vectors[j][i] for j in range(b.dim))
            for i in range(n)
        ),
    )
    # (x_a, x_b) in the kernel gives A x_a = B x_b, a vector of both spans
    kernel = kernel_basis(stacked)
    K = field.domain
    images = []
    for x in kernel.vectors:
        v = [K.zero] * n
        for j in range(a.dim):
            if x[j] != K.zero:
                v = [acc + x[j] * val for acc, val in zip(v, a.vectors[j])]
        images.append(v)
    return SubspaceBasis.span(field, n, images)


def flag_adapted_basis(flag: Sequence[SubspaceBasis]):
    """
    Basis of the largest member of a nested flag V_1 ⊆ V_2 ⊆ ... ⊆ V_m whose
    first k_i vectors span V_i.

    Returns:
        tuple: (SubspaceBasis, entry_index) where entry_index[j] is the 1-based
        index of the first flag member containing basis vector j.
    """
    if not flag:
        raise NestingError("empty flag")
    for i in range(len(flag) - 1):
        _require_compatible(flag[i], flag[i + 1])
        if not span_contains(flag[i + 1], flag[i]):
            raise NestingError(f"flag member {i + 1} is not contained in member {i + 2}")
    first = flag[0]
    echelon = EchelonForm(first.field, first.ambient_dim)
    vectors, entries = [], []
    for index, member in enumerate(flag, start=1):
        for v in member.vectors:
            if echelon.add(v):
                vectors.append(tuple(v))
                entries.append(index)
    return SubspaceBasis(first.field, first.ambient_dim, tuple(vectors)), tuple(entries)


def coordinates(basis: SubspaceBasis, v: Sequence[Any]) -> tuple:
    """Coefficients c with sum(c_i * basis_i) == v."""
    return EchelonForm.of(basis).coordinates(v)
