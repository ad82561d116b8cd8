"""Flat colourings, gauge orbits, and field spaces.

A colouring assigns a group element to every 1-simplex, read along the
edge's intrinsic direction (the reverse direction carries the inverse).
Flatness asks each triangle's boundary word to multiply to the identity.
Gauge transformations act at vertices; orbits of flat colourings are the
field classes, in bijection with Hom(H_1, A), and are represented by the
spanning-tree canonical colouring (tree edges coloured by the identity).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .abelian import FiniteAbelianGroup, GroupElement, _CircleGroup
from .complexes import Cobordism, DeltaComplex, h1_structure
from .errors import (
    DisconnectedError,
    InfiniteFieldSpaceError,
    MissingEdgeColourError,
)

__all__ = [
    "Colouring",
    "GaugeTransformation",
    "FieldClass",
    "BoundaryConditionedFields",
    "is_flat",
    "gauge_act",
    "canonicalize",
    "canonical_gauge",
    "enumerate_fields",
    "trivial_field",
    "restrict",
    "fields_with_boundary",
    "supporting_fields",
]


class Colouring:
    """Edge labelling of a complex by elements of a finite abelian group."""

    __slots__ = ("complex", "group", "values")

    def __init__(self, complex: DeltaComplex, group: FiniteAbelianGroup, values):
        values = tuple(values)
        if len(values) != complex.n_cells(1):
            raise MissingEdgeColourError(
                f"missing edge colour: complex has {complex.n_cells(1)} edges, got {len(values)}"
            )
        self.complex = complex
        self.group = group
        self.values = values

    @classmethod
    def from_dict(cls, complex, group, mapping):
        values = [mapping.get(e) for e in range(complex.n_cells(1))]
        missing = [e for e, v in enumerate(values) if v is None]
        if missing:
            raise MissingEdgeColourError(f"missing edge colour on edges {missing}")
        return cls(complex, group, values)

    def colour(self, e: int) -> GroupElement:
        return self.values[e]

    def __add__(self, other):
        if not isinstance(other, Colouring) or other.complex != self.complex:
            return NotImplemented
        return Colouring(self.complex, self.group, [a + b for a, b in zip(self.values, other.values)])

    def __neg__(self):
        return Colouring(self.complex, self.group, [-a for a in self.values])

    def __eq__(self, other):
        return (
            isinstance(other, Colouring)
            and self.complex == other.complex
            and self.values == other.values
        )

    def __hash__(self):
        return hash((self.complex, self.values))

    def __repr__(self):
        return f"Colouring({[g.residues for g in self.values]})"

    def to_json(self):
        return {"edge_colours": {str(e): list(g.residues) for e, g in enumerate(self.values)}}

    @classmethod
    def from_json(cls, complex, group, data):
        mapping = {
            int(e): group.element(res) for e, res in data["edge_colours"].items()
        }
        return cls.from_dict(complex, group, mapping)


@dataclass(frozen=True)
class GaugeTransformation:
    """A group element per vertex, acting by (h.g)_ab = h_b g_ab h_a^{-1}."""

    complex: DeltaComplex
    values: tuple

    @classmethod
    def from_dict(cls, complex, group, mapping):
        vals = tuple(mapping.get(v, group.identity()) for v in range(complex.vertex_count))
        return cls(complex, vals)


def is_flat(col: Colouring) -> bool:
    """True iff every triangle satisfies g_01 * g_12 = g_02."""
    c = col.complex
    if c.dimension < 2:
        return True
    for t in range(c.n_cells(2)):
        f0, f1, f2 = c.faces(2, t)
        if not (col.values[f2] + col.values[f0] - col.values[f1]).is_identity():
            return False
    return True


def gauge_act(h: GaugeTransformation, col: Colouring) -> Colouring:
    c = col.complex
    new = []
    for e in range(c.n_cells(1)):
        v0, v1 = c.edge_endpoints(e)
        new.append(h.values[v1] + col.values[e] - h.values[v0])
    return Colouring(c, col.group, new)


def canonical_gauge(col: Colouring, bases=()) -> GaugeTransformation:
    """The gauge transformation whose action makes all forest edges trivial.

    Deterministic: it vanishes on each component's base vertex and is
    propagated down the lowest-id-first BFS forest.
    """
    c = col.complex
    forest = h1_structure(c, tuple(bases)).forest
    identity = col.group.identity()
    h = [None] * c.vertex_count
    for b in forest.bases:
        h[b] = identity

    def resolve(v):
        chain = []
        while h[v] is None:
            chain.append(v)
            v = forest.parent[v][0]
        acc = h[v]
        for u in reversed(chain):
            pv, e, direction = forest.parent[u]
            g = col.values[e] if direction == 1 else -col.values[e]
            acc = acc - g
            h[u] = acc
        return acc

    for v in range(c.vertex_count):
        resolve(v)
    return GaugeTransformation(c, tuple(h))


class FieldClass:
    """Gauge orbit of flat colourings, held by its canonical representative.

    hom_images lists the images of the H_1 generators (the ones reported by
    h1_structure for the same base vertices), which identifies the class
    with an element of Hom(H_1, A).
    """

    __slots__ = ("colouring", "bases", "hom_images")

    def __init__(self, colouring: Colouring, bases, hom_images):
        self.colouring = colouring
        self.bases = tuple(bases)
        self.hom_images = tuple(hom_images)

    @property
    def complex(self):
        return self.colouring.complex

    @property
    def group(self):
        return self.colouring.group

    def is_trivial(self) -> bool:
        return all(g.is_identity() for g in self.colouring.values)

    def sort_key(self):
        return tuple(g.residues for g in self.colouring.values)

    def __add__(self, other):
        if not isinstance(other, FieldClass) or other.complex != self.complex:
            return NotImplemented
        return FieldClass(
            self.colouring + other.colouring,
            self.bases,
            [a + b for a, b in zip(self.hom_images, other.hom_images)],
        )

    def __neg__(self):
        return FieldClass(-self.colouring, self.bases, [-a for a in self.hom_images])

    def __eq__(self, other):
        return (
            isinstance(other, FieldClass)
            and self.complex == other.complex
            and self.bases == other.bases
            and self.colouring.values == other.colouring.values
        )

    def __hash__(self):
        return hash((self.colouring, self.bases))

    def __repr__(self):
        return f"FieldClass(hom_images={[g.residues for g in self.hom_images]})"

    def to_json(self):
        return {"hom_images": [list(g.residues) for g in self.hom_images]}


def _hom_images(col: Colouring, bases) -> tuple:
    """Evaluate a tree-gauge colouring on the H_1 generator chains."""
    struct = h1_structure(col.complex, tuple(bases))
    identity = col.group.identity()
    out = []
    for gen in struct.generators:
        acc = identity
        for e, coeff in gen.evaluation_chain:
            acc = acc + coeff * col.values[e]
        out.append(acc)
    return tuple(out)


def canonicalize(col: Colouring, bases=()) -> FieldClass:
    """Canonical representative of the gauge orbit of a flat colouring."""
    if not is_flat(col):
        raise ValueError("canonicalize needs a flat colouring")
    bases = tuple(bases)
    h = canonical_gauge(col, bases)
    canonical = gauge_act(h, col)
    return FieldClass(canonical, bases, _hom_images(canonical, bases))


def _resolve_target(complex: DeltaComplex, A, bases):
    """Replace the symbolic U(1) target by the roots of unity H_1 can reach."""
    if not isinstance(A, _CircleGroup):
        return A
    h1 = h1_structure(complex, tuple(bases)).group
    if h1.free_rank > 0:
        raise InfiniteFieldSpaceError(
            f"infinite field space: H_1 = {h1} has positive rank over the circle group"
        )
    top = h1.torsion[-1] if h1.torsion else 1
    return FiniteAbelianGroup([top] if top > 1 else [1])


def enumerate_fields(complex: DeltaComplex, A, bases=()) -> list:
    """One FieldClass per element of Hom(H_1, A), as explicit flat colourings.

    Each H_1 generator of order d may map to any d-torsion element of A
    (anywhere at all for free generators); the generator's edge-chain weights
    turn the choice into a tree-gauge colouring.
    """
    bases = tuple(bases)
    A = _resolve_target(complex, A, bases)
    struct = h1_structure(complex, bases)
    identity = A.identity()
    choices = [list(A.torsion_elements(gen.order)) for gen in struct.generators]
    out = []
    for combo in product(*choices):
        values = [identity] * complex.n_cells(1)
        for gen, a in zip(struct.generators, combo):
            for e, w in gen.colouring_weights:
                values[e] = values[e] + w * a
        col = Colouring(complex, A, values)
        out.append(FieldClass(col, bases, combo))
    return out


def trivial_field(complex: DeltaComplex, A, bases=()) -> FieldClass:
    bases = tuple(bases)
    A = _resolve_target(complex, A, bases)
    n_gens = len(h1_structure(complex, bases).generators)
    values = [A.identity()] * complex.n_cells(1)
    col = Colouring(complex, A, values)
    return FieldClass(col, bases, (A.identity(),) * n_gens)


def restrict(field: FieldClass, cob: Cobordism, which: str) -> FieldClass:
    """Restrict a field class on a cobordism to a boundary, re-canonicalized.

    Returns None for an empty boundary.  The restriction is a homomorphism
    of class groups.
    """
    part = {"incoming": cob.incoming, "outgoing": cob.outgoing}[which]
    if part is None:
        return None
    values = [field.colouring.values[t] for t in part.embedding[1]]
    col = Colouring(part.complex, field.group, values)
    return canonicalize(col, bases=(part.base_vertex,))


@dataclass(frozen=True)
class BoundaryConditionedFields:
    """The coset F_W^{a0,a1} inside F_W, with its uniform weight.

    Either empty or a coset of the subgroup F_W^{0,0}; the weight of each
    member is 1/|coset|.
    """

    classes: tuple
    subgroup: tuple

    def is_empty(self) -> bool:
        return not self.classes

    @property
    def weight(self):
        if not self.classes:
            return None
        return Fraction(1, len(self.classes))


def _matches(field, cob, which, target):
    if target is None:
        return True
    return restrict(field, cob, which) == target


def fields_with_boundary(cob: Cobordism, A, alpha0, alpha1) -> BoundaryConditionedFields:
    """Fields on the cobordism with the prescribed boundary restrictions.

    alpha0 / alpha1 are FieldClasses on the incoming / outgoing boundary
    complexes, or None for an empty boundary.
    """
    all_fields = enumerate_fields(cob.total, A)
    members = tuple(
        f
        for f in all_fields
        if _matches(f, cob, "incoming", alpha0) and _matches(f, cob, "outgoing", alpha1)
    )
    zero_in = None if cob.incoming is None else trivial_field(cob.incoming.complex, A, (cob.incoming.base_vertex,))
    zero_out = None if cob.outgoing is None else trivial_field(cob.outgoing.complex, A, (cob.outgoing.base_vertex,))
    subgroup = tuple(
        f
        for f in all_fields
        if _matches(f, cob, "incoming", zero_in) and _matches(f, cob, "outgoing", zero_out)
    )
    return BoundaryConditionedFields(members, subgroup)


def supporting_fields(wprime: Cobordism, wsecond: Cobordism, A, alpha0, alpha1):
    """Boundary classes on the gluing locus supported from both sides.

    Returns a list of (FieldClass on M, weight) pairs where M is the common
    boundary (outgoing of wprime, incoming of wsecond); weights are uniform
    on the image coset and sum to 1.
    """
    out_part = wprime.outgoing
    in_part = wsecond.incoming
    if out_part is None or in_part is None:
        raise ValueError("supporting_fields needs an outgoing and an incoming boundary")
    if out_part.complex != in_part.complex or out_part.base_vertex != in_part.base_vertex:
        raise ValueError("gluing boundaries must carry the same complex and base vertex")
    if not out_part.complex.is_connected():
        raise DisconnectedError("disconnected gluing locus")

    left = {
        restrict(f, wprime, "outgoing")
        for f in enumerate_fields(wprime.total, A)
        if _matches(f, wprime, "incoming", alpha0)
    }
    right = {
        restrict(f, wsecond, "incoming")
        for f in enumerate_fields(wsecond.total, A)
        if _matches(f, wsecond, "outgoing", alpha1)
    }
    support = sorted(left & right, key=lambda f: f.sort_key())
    if not support:
        return []
    w = Fraction(1, len(support))
    return [(f, w) for f in support]
