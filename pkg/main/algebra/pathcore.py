"""
Elementary paths, formal chains and the two boundary operators.

An elementary n-path is a sequence of n+1 vertex identifiers; the empty
sequence is the (-1)-path ``e``. A FormalChain is a finite linear
combination of n-paths with coefficients in a ScalarField. The
non-regular boundary works on all paths; the regular boundary works on
regular paths and drops every face with a repeated consecutive vertex.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterator, Mapping

from main.algebra.linalg import ScalarField
from main.errors import DegreeError, DomainError, ModeMismatchError, RegularityError


@dataclass(frozen=True, order=True)
class ElementaryPath:
    """An ordered tuple of vertex identifiers; ``()`` is the empty path e."""

    vertices: tuple

    def __post_init__(self):
        if not isinstance(self.vertices, tuple):
            object.__setattr__(self, "vertices", tuple(self.vertices))

    @classmethod
    def of(cls, *vertices) -> "ElementaryPath":
        return cls(tuple(str(v) for v in vertices))

    @classmethod
    def parse(cls, text: str) -> "ElementaryPath":
        """``"a b c"`` -> e_abc (whitespace separated identifiers)."""
        return cls(tuple(text.split()))

    @property
    def degree(self) -> int:
        return len(self.vertices) - 1

    def is_regular(self) -> bool:
        return all(a != b for a, b in zip(self.vertices, self.vertices[1:]))

    def faces(self) -> Iterator[tuple]:
        """Yields (sign, face) for the alternating face formula."""
        for q in range(len(self.vertices)):
            sign = 1 if q % 2 == 0 else -1
            yield sign, ElementaryPath(self.vertices[:q] + self.vertices[q + 1:])

    def truncations(self) -> tuple:
        """The two truncated paths i_0..i_{n-1} and i_1..i_n (empty for a vertex)."""
        if len(self.vertices) <= 1:
            return ()
        return ElementaryPath(self.vertices[:-1]), ElementaryPath(self.vertices[1:])

    def subwords(self) -> Iterator["ElementaryPath"]:
        """All non-empty contiguous subwords, the path itself included."""
        n = len(self.vertices)
        for start in range(n):
            for end in range(start + 1, n + 1):
                yield ElementaryPath(self.vertices[start:end])

    def edges(self) -> tuple:
        return tuple(zip(self.vertices, self.vertices[1:]))

    def relabel(self, mapping: Mapping) -> "ElementaryPath":
        try:
            return ElementaryPath(tuple(mapping[v] for v in self.vertices))
        except KeyError as exc:
            raise DomainError(f"vertex {exc.args[0]!r} lies outside the map's domain") from None

    def __str__(self):
        return " ".join(self.vertices) if self.vertices else "e"

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)


EMPTY_PATH = ElementaryPath(())


def as_path(value) -> ElementaryPath:
    if isinstance(value, ElementaryPath):
        return value
    if isinstance(value, str):
        return ElementaryPath.parse(value)
    return ElementaryPath(tuple(str(v) for v in value))


@dataclass(frozen=True)
class FormalChain:
    """
    A linear combination of elementary paths of one degree.

    ``terms`` is stored canonically: sorted lexicographically by vertex
    sequence, zero coefficients removed.
    """

    field: ScalarField
    degree: int
    terms: tuple = ()

    def __post_init__(self):
        merged = {}
        for path, coeff in self.terms:
            path = as_path(path)
            if path.degree != self.degree:
                raise DegreeError(f"path {path} has degree {path.degree}, chain has degree {self.degree}")
            coeff = self.field.convert(coeff)
            merged[path] = merged.get(path, self.field.zero) + coeff
        canonical = tuple(
            (path, merged[path]) for path in sorted(merged) if not self.field.is_zero(merged[path])
        )
        object.__setattr__(self, "terms", canonical)

    @classmethod
    def zero(cls, field: ScalarField, degree: int) -> "FormalChain":
        return cls(field, degree, ())

    @classmethod
    def basis(cls, field: ScalarField, path) -> "FormalChain":
        path = as_path(path)
        return cls(field, path.degree, ((path, field.one),))

    def coefficients(self) -> dict:
        return dict(self.terms)

    def coefficient(self, path) -> Any:
        return self.coefficients().get(as_path(path), self.field.zero)

    def paths(self) -> tuple:
        return tuple(p for p, _ in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "FormalChain"):
        if self.field != other.field:
            raise ModeMismatchError(f"scalar modes differ: {self.field.label} vs {other.field.label}")
        if self.degree != other.degree:
            raise DegreeError(f"cannot combine chains of degree {self.degree} and {other.degree}")

    def __add__(self, other: "FormalChain") -> "FormalChain":
        self._check(other)
        return FormalChain(self.field, self.degree, self.terms + other.terms)

    def __neg__(self) -> "FormalChain":
        return FormalChain(self.field, self.degree, tuple((p, -c) for p, c in self.terms))

    def __sub__(self, other: "FormalChain") -> "FormalChain":
        return self + (-other)

    def scale(self, scalar) -> "FormalChain":
        scalar = self.field.convert(scalar)
        return FormalChain(self.field, self.degree, tuple((p, scalar * c) for p, c in self.terms))

    def __rmul__(self, scalar) -> "FormalChain":
        return self.scale(scalar)

    def __iter__(self):
        return iter(self.terms)

    def __str__(self):
        return render(self)


def render(c: FormalChain) -> str:
    """Canonical text: ``coeff·v0 v1`` terms joined by `` + `` / `` − ``."""
    if c.is_zero():
        return "0"
    pieces = []
    for index, (path, coeff) in enumerate(c.terms):
        value = c.field.to_fraction(coeff)
        negative = value < 0 and c.field.is_rational
        magnitude = -value if negative else value
        body = f"{magnitude}·{path}"
        if index == 0:
            pieces.append(f"−{body}" if negative else body)
        else:
            pieces.append(f" − {body}" if negative else f" + {body}")
    return "".join(pieces)


def boundary_nr(c: FormalChain) -> FormalChain:
    """Alternating sum of faces, extended linearly; ∂ of the (-1)-path is 0."""
    if c.degree < 0:
        return FormalChain.zero(c.field, c.degree - 1)
    terms = []
    for path, coeff in c.terms:
        for sign, face in path.faces():
            terms.append((face, coeff if sign > 0 else -coeff))
    return FormalChain(c.field, c.degree - 1, tuple(terms))


def project_regular(c: FormalChain) -> FormalChain:
    """Drop non-regular paths (projection R_n ⊕ I_n -> R_n)."""
    return FormalChain(c.field, c.degree, tuple((p, k) for p, k in c.terms if p.is_regular()))


def boundary_reg(c: FormalChain) -> FormalChain:
    """Regular boundary: ∂^nr followed by deletion of non-regular faces."""
    for path in c.paths():
        if not path.is_regular():
            raise RegularityError(f"path {path} is not regular")
    return project_regular(boundary_nr(c))


def boundary(c: FormalChain, regular_mode: bool = True) -> FormalChain:
    return boundary_reg(c) if regular_mode else boundary_nr(c)


def induced_map(f: Mapping, c: FormalChain, regular_mode: bool = True) -> FormalChain:
    """
    Push a chain forward along a vertex map.

    In regular mode a path whose image has a repeated consecutive vertex
    maps to zero.
    """
    terms = []
    for path, coeff in c.terms:
        image = path.relabel(f)
        if regular_mode and not image.is_regular():
            continue
        terms.append((image, coeff))
    return FormalChain(c.field, c.degree, tuple(terms))


def augmentation(c: FormalChain):
    """Λ_0 -> K, sum of coefficients."""
    if c.degree != 0:
        raise DegreeError("augmentation is defined on 0-chains only")
    total = c.field.zero
    for _, coeff in c.terms:
        total += coeff
    return total
