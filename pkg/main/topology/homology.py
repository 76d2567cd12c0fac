"""
Path homology of a path complex.

Builds the allowed spaces A_n, the ∂-invariant spaces Ω_n, the chain
complex 0 <- Ω_0 <- Ω_1 <- ... with its boundary matrices, homology
dimensions (computed two ways and cross-checked), homology
representatives, and the chain and homology maps induced by vertex maps.

Homology is non-reduced: ∂ on Ω_0 is zero.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

from main.algebra.linalg import (
    EchelonForm,
    Matrix,
    ScalarField,
    SubspaceBasis,
    intersect,
    kernel_basis,
    rank,
)
from main.algebra.pathcore import EMPTY_PATH, FormalChain, boundary, induced_map
from main.errors import ConsistencyError, DegreeError, ModeMismatchError, MorphismError, NotInSpanError
from main.topology.complexes import PathComplex, WeightedPathComplex
from main.topology.homotopy import is_weak_morphism

logger = logging.getLogger(__name__)


def _complex(p) -> PathComplex:
    return p.complex if isinstance(p, WeightedPathComplex) else p


def allowed_space(p: PathComplex, n: int, regular_mode: bool = True) -> tuple:
    """Sorted elementary-path basis of A_n (or A^nr_n when ``regular_mode`` is off)."""
    if n < -1:
        raise DegreeError(f"no allowed space in degree {n}")
    if n == -1:
        return (EMPTY_PATH,)
    paths = _complex(p).allowed(n)
    if regular_mode:
        paths = [path for path in paths if path.is_regular()]
    return tuple(sorted(paths))


@dataclass(frozen=True)
class OmegaBasis:
    """
    Basis of Ω_n in the coordinates of the elementary basis of A_n.

    Attributes:
        degree: n
        ambient: the sorted elementary paths spanning A_n
        vectors: SubspaceBasis of Ω_n, one coordinate per ambient path
        regular_mode: whether ∂ or ∂^nr defines the membership
    """

    degree: int
    ambient: tuple
    vectors: SubspaceBasis
    regular_mode: bool = True

    @property
    def field(self) -> ScalarField:
        return self.vectors.field

    @property
    def dim(self) -> int:
        return self.vectors.dim

    @cached_property
    def index(self) -> dict:
        return {path: i for i, path in enumerate(self.ambient)}

    @cached_property
    def echelon(self) -> EchelonForm:
        return EchelonForm.of(self.vectors)

    def chain_of(self, vector: Sequence) -> FormalChain:
        terms = tuple((path, c) for path, c in zip(self.ambient, vector) if not self.field.is_zero(c))
        return FormalChain(self.field, self.degree, terms)

    def chains(self) -> list:
        return [self.chain_of(v) for v in self.vectors.vectors]

    def to_ambient(self, c: FormalChain) -> tuple:
        """Coordinates of ``c`` in the elementary basis of A_n."""
        vector = [self.field.zero] * len(self.ambient)
        for path, coeff in c.terms:
            if path not in self.index:
                raise NotInSpanError(f"path {path} is not allowed in degree {self.degree}")
            vector[self.index[path]] = coeff
        return tuple(vector)

    def coordinates(self, c: FormalChain) -> tuple:
        """Coordinates of ``c`` in the Ω_n basis."""
        return self.echelon.coordinates(self.to_ambient(c))


def _normalize(field: ScalarField, vector: Sequence) -> tuple:
    lead = next(x for x in vector if not field.is_zero(x))
    return tuple(x / lead for x in vector)


def omega_basis(p, n: int, field: ScalarField | None = None, regular_mode: bool | None = None) -> OmegaBasis:
    """
    Ω_n = {v ∈ A_n : ∂v ∈ A_{n-1}}.

    Computed as the kernel of the map sending v to the part of ∂v lying
    outside A_{n-1}. Each basis vector is scaled so its first nonzero
    coordinate is 1.

    Args:
        p: PathComplex or WeightedPathComplex
        n: Degree, at least 0
        field: Coefficient field (rationals when omitted)
        regular_mode: Regular or non-regular boundary (follows p.is_regular when omitted)

    Returns:
        OmegaBasis: Basis of Ω_n in the coordinates of the sorted A_n
    """
    p = _complex(p)
    field = field or ScalarField.rational()
    if regular_mode is None:
        regular_mode = p.is_regular
    if n < 0:
        raise DegreeError("Ω_n is only built for n >= 0")
    ambient = allowed_space(p, n, regular_mode)
    lower = set(allowed_space(p, n - 1, regular_mode))

    # Faces of A_n paths that fall outside A_{n-1} index the constraint rows
    outside = {}
    images = []
    for path in ambient:
        image = boundary(FormalChain.basis(field, path), regular_mode)
        images.append(image)
        for face, _ in image.terms:
            if face not in lower and face not in outside:
                outside[face] = len(outside)

    if not outside:
        # Every boundary already lands in A_{n-1}
        vectors = SubspaceBasis.standard(field, len(ambient))
    else:
        rows = [[field.zero] * len(ambient) for _ in outside]
        for j, image in enumerate(images):
            for face, coeff in image.terms:
                if face in outside:
                    rows[outside[face]][j] = coeff
        kernel = kernel_basis(Matrix(field, len(outside), len(ambient), tuple(tuple(r) for r in rows)))
        vectors = SubspaceBasis(field, len(ambient), tuple(_normalize(field, v) for v in kernel.vectors))
    logger.debug("Ω_%d: dim A = %d, dim Ω = %d", n, len(ambient), vectors.dim)
    return OmegaBasis(n, ambient, vectors, regular_mode)


@dataclass(frozen=True)
class HomologyBasis:
    """
    Deterministic splitting of the cycles Z_n = B_n ⊕ span(representatives),
    all in Ω_n coordinates.
    """

    degree: int
    field: ScalarField
    cycles: SubspaceBasis
    boundaries: SubspaceBasis
    representatives: tuple

    @property
    def rank(self) -> int:
        return len(self.representatives)

    @cached_property
    def _echelon(self) -> EchelonForm:
        echelon = EchelonForm(self.field, self.cycles.ambient_dim)
        for v in list(self.boundaries.vectors) + list(self.representatives):
            echelon.add(v)
        return echelon

    def classes(self, cycle: Sequence) -> tuple:
        """Coordinates of the class of ``cycle`` in the representative basis."""
        try:
            coords = self._echelon.coordinates(cycle)
        except NotInSpanError:
            raise ConsistencyError(f"vector is not a cycle in degree {self.degree}") from None
        return tuple(coords[self.boundaries.dim:])

    def is_boundary(self, cycle: Sequence) -> bool:
        return all(self.field.is_zero(c) for c in self.classes(cycle))


@dataclass(frozen=True)
class ChainComplexSnapshot:
    """
    Ω_0, ..., Ω_top of one path complex with ∂_n: Ω_n -> Ω_{n-1}.

    ``boundaries[n]`` is a dim Ω_{n-1} x dim Ω_n matrix; ``boundaries[0]``
    is the zero map out of Ω_0.
    """

    complex: PathComplex
    field: ScalarField
    regular_mode: bool
    omegas: tuple
    boundaries: tuple

    @property
    def top_degree(self) -> int:
        return len(self.omegas) - 1

    def omega(self, n: int) -> OmegaBasis:
        if not 0 <= n <= self.top_degree:
            raise DegreeError(f"degree {n} outside the snapshot range 0..{self.top_degree}")
        return self.omegas[n]

    def boundary_matrix(self, n: int) -> Matrix:
        self.omega(n)
        return self.boundaries[n]

    @cached_property
    def _homology(self) -> dict:
        return {}

    def homology(self, n: int) -> HomologyBasis:
        if n not in self._homology:
            self._homology[n] = homology_basis(self, n)
        return self._homology[n]


def chain_complex(p, up_to: int, field: ScalarField | None = None, regular_mode: bool | None = None) -> ChainComplexSnapshot:
    """Ω_0..Ω_{up_to+1} and their boundary matrices; checks ∂∘∂ = 0."""
    p = _complex(p)
    field = field or ScalarField.rational()
    if regular_mode is None:
        regular_mode = p.is_regular
    if up_to < 0:
        raise DegreeError("up_to must be non-negative")
    omegas = [omega_basis(p, n, field, regular_mode) for n in range(up_to + 2)]
    # ∂_0 is the zero map out of Ω_0; H_0 is not reduced
    matrices = [Matrix.zeros(field, 0, omegas[0].dim)]
    for n in range(1, up_to + 2):
        src, dst = omegas[n], omegas[n - 1]
        columns = []
        for chain in src.chains():
            image = boundary(chain, regular_mode)
            try:
                columns.append(dst.coordinates(image))
            except NotInSpanError as exc:
                raise ConsistencyError(f"∂ of an Ω_{n} vector left Ω_{n - 1}: {exc}") from None
        matrices.append(Matrix.from_columns(field, columns, dst.dim))
    for n in range(2, len(matrices)):
        if not (matrices[n - 1] @ matrices[n]).is_zero():
            raise ConsistencyError(f"∂_{n - 1} ∘ ∂_{n} is not zero")
    return ChainComplexSnapshot(p, field, regular_mode, tuple(omegas), tuple(matrices))


def homology_basis(snapshot: ChainComplexSnapshot, n: int) -> HomologyBasis:
    """Cycles, boundaries and representatives completing boundaries to cycles (in that order)."""
    if n + 1 > snapshot.top_degree:
        raise DegreeError(f"H_{n} needs Ω_{n + 1}; snapshot stops at degree {snapshot.top_degree}")
    field = snapshot.field
    dim = snapshot.omega(n).dim
    if n == 0:
        cycles = SubspaceBasis.standard(field, dim)
    else:
        cycles = kernel_basis(snapshot.boundary_matrix(n))
    boundaries = SubspaceBasis.span(field, dim, snapshot.boundary_matrix(n + 1).columns())
    echelon = EchelonForm(field, dim)
    for v in boundaries.vectors:
        echelon.add(v)
    representatives = tuple(v for v in cycles.vectors if echelon.add(v))
    if boundaries.dim + len(representatives) != cycles.dim:
        raise ConsistencyError(f"boundaries in degree {n} are not contained in the cycles")
    return HomologyBasis(n, field, cycles, boundaries, representatives)


def _determine_dim(p: PathComplex, n: int, field: ScalarField, regular_mode: bool) -> int:
    """dim Ker ∂|A_n − dim(A_n ∩ ∂A_{n+1}), in elementary coordinates of Λ_n."""
    a_n = allowed_space(p, n, regular_mode)
    a_up = allowed_space(p, n + 1, regular_mode)

    if n == 0:
        kernel_dim = len(a_n)
    else:
        faces = {}
        columns = []
        for path in a_n:
            image = boundary(FormalChain.basis(field, path), regular_mode)
            columns.append(image)
            for face, _ in image.terms:
                faces.setdefault(face, len(faces))
        rows = [[field.zero] * len(a_n) for _ in faces]
        for j, image in enumerate(columns):
            for face, coeff in image.terms:
                rows[faces[face]][j] = coeff
        kernel_dim = len(a_n) - rank(Matrix(field, len(faces), len(a_n), tuple(tuple(r) for r in rows)))

    index = {path: i for i, path in enumerate(a_n)}
    images = []
    for path in a_up:
        image = boundary(FormalChain.basis(field, path), regular_mode)
        images.append(image)
        for face, _ in image.terms:
            index.setdefault(face, len(index))
    size = len(index)
    a_vectors = []
    for i in range(len(a_n)):
        v = [field.zero] * size
        v[i] = field.one
        a_vectors.append(tuple(v))
    image_vectors = []
    for image in images:
        v = [field.zero] * size
        for face, coeff in image.terms:
            v[index[face]] = coeff
        image_vectors.append(v)
    a_space = SubspaceBasis(field, size, tuple(a_vectors))
    b_space = SubspaceBasis.span(field, size, image_vectors)
    return kernel_dim - intersect(a_space, b_space).dim


def homology_dims(p, up_to: int, field: ScalarField | None = None, regular_mode: bool | None = None) -> list:
    """
    dim H_0, ..., dim H_up_to.

    Each value is computed from the Ω complex and again from
    Ker ∂|A_n / (A_n ∩ ∂A_{n+1}); a disagreement raises ConsistencyError.

    Args:
        p: PathComplex or WeightedPathComplex, holding paths up to degree up_to + 1
        up_to: Highest homology degree wanted
        field: Coefficient field (rationals when omitted)
        regular_mode: Regular or non-regular boundary (follows p.is_regular when omitted)

    Returns:
        list: up_to + 1 Betti numbers, non-reduced
    """
    p = _complex(p)
    field = field or ScalarField.rational()
    if regular_mode is None:
        regular_mode = p.is_regular
    snapshot = chain_complex(p, up_to, field, regular_mode)
    dims = []
    for n in range(up_to + 1):
        from_omega = snapshot.homology(n).rank
        from_allowed = _determine_dim(p, n, field, regular_mode)
        if from_omega != from_allowed:
            raise ConsistencyError(
                f"dim H_{n} disagrees: {from_omega} from Ω, {from_allowed} from allowed spaces"
            )
        dims.append(from_omega)
    logger.debug("homology dims over %s: %s", field.label, dims)
    return dims


@dataclass(frozen=True)
class ChainMap:
    """Matrices F_n: Ω_n(source) -> Ω_n(target) in the chosen Ω bases."""

    source: ChainComplexSnapshot
    target: ChainComplexSnapshot
    matrices: tuple

    @property
    def top_degree(self) -> int:
        return len(self.matrices) - 1

    def matrix(self, n: int) -> Matrix:
        return self.matrices[n]


def _check_modes(src: ChainComplexSnapshot, dst: ChainComplexSnapshot):
    if src.field != dst.field:
        raise ModeMismatchError(f"scalar modes differ: {src.field.label} vs {dst.field.label}")
    if src.regular_mode != dst.regular_mode:
        raise ModeMismatchError("cannot map between regular and non-regular chain complexes")


def _check_chain_identity(chain_map: ChainMap):
    src, dst = chain_map.source, chain_map.target
    for n in range(1, chain_map.top_degree + 1):
        left = dst.boundary_matrix(n) @ chain_map.matrix(n)
        right = chain_map.matrix(n - 1) @ src.boundary_matrix(n)
        if not (left - right).is_zero():
            raise ConsistencyError(f"∂'F_{n} != F_{n - 1}∂ in degree {n}")


def induced_chain_map(f: Mapping, src: ChainComplexSnapshot, dst: ChainComplexSnapshot) -> ChainMap:
    """
    Chain map induced by a weak morphism (a digraph map between the
    digraphs' path complexes is one).

    Raises:
        MorphismError: if ``f`` is not a weak morphism between the complexes.
    """
    _check_modes(src, dst)
    if src.regular_mode:
        if not is_weak_morphism(f, src.complex, dst.complex):
            raise MorphismError("vertex map is not a weak morphism between the complexes")
    else:
        for path in src.complex.all_paths():
            if path.relabel(f) not in dst.complex:
                raise MorphismError(f"image of {path} is not allowed in the target")
    top = min(src.top_degree, dst.top_degree)
    matrices = []
    for n in range(top + 1):
        s_omega, d_omega = src.omega(n), dst.omega(n)
        columns = []
        for chain in s_omega.chains():
            image = induced_map(f, chain, src.regular_mode)
            try:
                columns.append(d_omega.coordinates(image))
            except NotInSpanError as exc:
                raise ConsistencyError(f"f_* of an Ω_{n} vector left Ω_{n}: {exc}") from None
        matrices.append(Matrix.from_columns(src.field, columns, d_omega.dim))
    chain_map = ChainMap(src, dst, tuple(matrices))
    _check_chain_identity(chain_map)
    return chain_map


def compose_chain_maps(g: ChainMap, f: ChainMap) -> ChainMap:
    """``g ∘ f``; ``f.target`` must be ``g.source``."""
    if f.target.omegas != g.source.omegas:
        raise ModeMismatchError("chain maps are not composable")
    top = min(f.top_degree, g.top_degree)
    return ChainMap(f.source, g.target, tuple(g.matrix(n) @ f.matrix(n) for n in range(top + 1)))


def homology_map(chain_map: ChainMap, up_to: int | None = None) -> list:
    """
    Matrices of H_n(F) in the representative bases, n = 0..up_to.

    Every boundary must map to a boundary and every representative to a
    cycle; a failure is a ConsistencyError.
    """
    src, dst = chain_map.source, chain_map.target
    limit = min(chain_map.top_degree, src.top_degree - 1, dst.top_degree - 1)
    if up_to is None:
        up_to = limit
    if up_to > limit:
        raise DegreeError(f"homology maps are available up to degree {limit}")
    field = src.field
    out = []
    for n in range(up_to + 1):
        h_src, h_dst = src.homology(n), dst.homology(n)
        F = chain_map.matrix(n)
        for b in h_src.boundaries.vectors:
            image = (F @ Matrix.from_columns(field, [b], len(b))).column(0) if F.rows else ()
            if F.rows and not h_dst.is_boundary(image):
                raise ConsistencyError(f"a boundary of degree {n} maps to a nonzero class")
        columns = []
        for r in h_src.representatives:
            image = (F @ Matrix.from_columns(field, [r], len(r))).column(0) if F.rows else ()
            columns.append(h_dst.classes(image) if F.rows else ())
        out.append(Matrix.from_columns(field, columns, h_dst.rank))
    return out
