"""The state-sum engine: weights, closed invariants, matrix elements, gluing.

All sums are assembled from exact rational phases; the complex value is the
normalized sum of unit complex numbers and the only rounding happens in the
final exponentials.  Lines attached to boundaries are trivialized by fixed
bases (canonical fundamental cycles and canonical boundary colourings), so
every cobordism operator is a scalar.
"""

from __future__ import annotations

from dataclasses import dataclass

from .abelian import RationalPhase
from .cocycles import GroupCochain, slant
from .complexes import Cobordism, DeltaComplex, FundamentalCycle, orient
from .errors import DomainError, GaugeAdjustmentError
from .fields import (
    Colouring,
    GaugeTransformation,
    canonical_gauge,
    enumerate_fields,
    fields_with_boundary,
    gauge_act,
    supporting_fields,
)

__all__ = [
    "InvariantValue",
    "weight",
    "state_sum_closed",
    "matrix_element",
    "glued_invariant",
    "circle_product_invariant",
    "surface_invariant_by_genus",
]


@dataclass(frozen=True)
class InvariantValue:
    """A complex number together with the exact phases it was summed from.

    value = (1/denominator) * sum of e^{2 pi i phase}.
    """

    value: complex
    phases: tuple
    denominator: int

    @classmethod
    def from_phases(cls, phases, denominator) -> "InvariantValue":
        phases = tuple(phases)
        total = sum((p.complex() for p in phases), 0j)
        return cls(total / denominator, phases, denominator)

    @classmethod
    def zero(cls) -> "InvariantValue":
        return cls(0j, (), 1)

    def isclose(self, other, tol=1e-9) -> bool:
        z = other.value if isinstance(other, InvariantValue) else complex(other)
        return abs(self.value - z) < tol

    def to_json(self, include_phases=True) -> dict:
        data = {
            "value": [self.value.real, self.value.imag],
            "terms": len(self.phases),
            "denominator": self.denominator,
        }
        if include_phases:
            data["phases"] = [[p.numerator, p.denominator] for p in self.phases]
        return data

    def __repr__(self):
        return f"InvariantValue({self.value:.6g}, terms={len(self.phases)}, den={self.denominator})"


def weight(col: Colouring, cycle: FundamentalCycle, w: GroupCochain) -> RationalPhase:
    """Exact phase of prod_t w(g_{t,1}, ..., g_{t,n+1})^{eps_t}.

    The arguments of w on each top simplex are the colours of the edges
    joining its vertices in ascending order; flatness determines the rest.
    """
    c = col.complex
    d = c.dimension
    if w.degree != d:
        raise DomainError(f"cochain degree {w.degree} does not match complex dimension {d}")
    total = RationalPhase(0)
    for t, eps in cycle:
        args = tuple(col.values[e] for e in c.ascending_edges(d, t))
        total = total + eps * w.phase(args)
    return total


def state_sum_closed(complex: DeltaComplex, A, w: GroupCochain, orientation=None) -> InvariantValue:
    """Closed-manifold invariant: the average of e^{2 pi i weight} over all
    field classes, with the normalized counting measure 1/|F_W|."""
    cycle = orientation if orientation is not None else orient(complex)
    fields = enumerate_fields(complex, A)
    phases = [weight(f.colouring, cycle, w) for f in fields]
    return InvariantValue.from_phases(phases, len(phases))


def _adjusted_representative(field, cob: Cobordism, alpha0, alpha1) -> Colouring:
    """Gauge the canonical representative to restrict exactly to the canonical
    boundary colourings of the target classes.

    The adjusting gauge acts by each boundary's canonicalizing gauge on
    boundary vertices and trivially in the interior; boundary parts never
    share vertices, so the extension is single valued.
    """
    group = field.group
    total = cob.total
    h_values = [group.identity()] * total.vertex_count
    for part, target in ((cob.incoming, alpha0), (cob.outgoing, alpha1)):
        if part is None:
            continue
        restricted = Colouring(
            part.complex, group, [field.colouring.values[t] for t in part.embedding[1]]
        )
        h_part = canonical_gauge(restricted, (part.base_vertex,))
        canonical = gauge_act(h_part, restricted)
        if canonical.values != target.colouring.values:
            raise GaugeAdjustmentError(
                "boundary class not realizable as exact restriction"
            )
        for v_part, v_total in enumerate(part.embedding[0]):
            h_values[v_total] = h_part.values[v_part]
    adjusted = gauge_act(GaugeTransformation(total, tuple(h_values)), field.colouring)
    for part, target in ((cob.incoming, alpha0), (cob.outgoing, alpha1)):
        if part is None:
            continue
        got = [adjusted.values[t] for t in part.embedding[1]]
        if tuple(got) != target.colouring.values:
            raise GaugeAdjustmentError("boundary class not realizable as exact restriction")
    return adjusted


def matrix_element(cob: Cobordism, A, w: GroupCochain, alpha0, alpha1) -> InvariantValue:
    """Scalar matrix element of the cobordism between fixed boundary classes.

    Averages e^{2 pi i weight} over the coset of fields restricting to
    (alpha0, alpha1); the empty coset gives the zero map.  Boundary classes
    must be given exactly for the boundaries that exist (None for empty ones).
    """
    for part, alpha, name in (
        (cob.incoming, alpha0, "incoming"),
        (cob.outgoing, alpha1, "outgoing"),
    ):
        if (part is None) != (alpha is None):
            raise ValueError(f"{name} boundary and its class must both be present or absent")
    bcf = fields_with_boundary(cob, A, alpha0, alpha1)
    if bcf.is_empty():
        return InvariantValue.zero()
    phases = [
        weight(_adjusted_representative(f, cob, alpha0, alpha1), cob.orientation, w)
        for f in bcf.classes
    ]
    return InvariantValue.from_phases(phases, len(phases))


def glued_invariant(wprime: Cobordism, wsecond: Cobordism, A, w: GroupCochain, alpha0, alpha1) -> InvariantValue:
    """Right side of the decomposition formula for W = W' u_M W''.

    Integrates k_{W''}(alpha, alpha1) * k_{W'}(alpha0, alpha) over the
    supporting fields on the gluing locus with their uniform measure.
    """
    support = supporting_fields(wprime, wsecond, A, alpha0, alpha1)
    if not support:
        return InvariantValue.zero()
    phases = []
    counts = set()
    for alpha, _ in support:
        k1 = matrix_element(wprime, A, w, alpha0, alpha)
        k2 = matrix_element(wsecond, A, w, alpha, alpha1)
        counts.add((len(k1.phases), len(k2.phases)))
        for p1 in k1.phases:
            for p2 in k2.phases:
                phases.append(p1 + p2)
    # coset sizes are constant across supported alphas, so the weighted sum
    # of products is a single uniform average
    if len(counts) != 1:
        raise DomainError("supported cosets have unequal sizes; gluing measure undefined")
    (n1, n2), = counts
    return InvariantValue.from_phases(phases, len(support) * n1 * n2)


def circle_product_invariant(m: DeltaComplex, A, w: GroupCochain) -> InvariantValue:
    """Invariant of S^1 x m by the slant-product formula.

    Averages the closed invariant of m taken at the slanted cocycle w \\ a
    over a in A; the cochain degree must be dim(m) + 1.
    """
    if w.degree != m.dimension + 1:
        raise DomainError("circle product needs a cochain of degree dim(m) + 1")
    cycle = orient(m)
    phases = []
    counts = set()
    for a in A.elements():
        z = state_sum_closed(m, A, slant(w, a), orientation=cycle)
        counts.add(len(z.phases))
        phases.extend(z.phases)
    (n,) = counts
    return InvariantValue.from_phases(phases, A.order * n)


def surface_invariant_by_genus(g: int, A, beta: GroupCochain) -> InvariantValue:
    """Z(Sigma_g) = Z(T^2)^g with Z(T^2) = (1/|A|^2) sum beta(a,b) / beta(b,a).

    The genus power is expanded into exact phase sums, so the result carries
    |A|^{2g} terms.
    """
    if g < 0:
        raise DomainError("genus must be nonnegative")
    if beta.degree != 2:
        raise DomainError("surface invariants need a 2-cocycle")
    if g == 0:
        return InvariantValue.from_phases([RationalPhase(0)], 1)
    torus_terms = [
        beta(a, b) - beta(b, a) for a in A.elements() for b in A.elements()
    ]
    phases = [RationalPhase(0)]
    for _ in range(g):
        phases = [p + t for p in phases for t in torus_terms]
    return InvariantValue.from_phases(phases, A.order ** (2 * g))
