"""Delta-complexes with ordered simplices and explicit face maps.

A k-simplex (k >= 1) stores the ordered (k+1)-tuple of its (k-1)-face ids,
where face i omits vertex i.  Vertices are bare ids 0..vertex_count-1.
Distinct simplices may share the same vertex set, and face inclusions are
order preserving, so every edge has an intrinsic direction (vertex 0 to
vertex 1) and every simplex an intrinsic vertex ordering.

The module also houses the manifold builders, orientation (fundamental
cycle) extraction, first homology with explicit generator chains, and the
JSON file format.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .abelian import (
    FinitelyGeneratedAbelianGroup,
    _snf_full,
    invariant_factors,
)
from .errors import (
    CoprimalityError,
    DisconnectedError,
    DomainError,
    NonManifoldError,
    NonOrientableError,
)

__all__ = [
    "DeltaComplex",
    "FundamentalCycle",
    "BoundaryPart",
    "Cobordism",
    "validate",
    "orient",
    "boundary_chain",
    "homology_h1",
    "h1_structure",
    "H1Structure",
    "H1Generator",
    "spanning_forest",
    "build_sphere",
    "build_simplex_boundary",
    "build_octahedron",
    "build_ball",
    "build_cylinder",
    "build_surface",
    "build_lens",
    "build_circle_product",
    "build_surface_split",
    "build_torus_grid",
    "circle_one_vertex",
    "disjoint_union",
    "subcomplex_from_faces",
    "complex_to_json",
    "complex_from_json",
    "cobordism_from_json",
]


class DeltaComplex:
    """Immutable delta-complex given by per-dimension face tables."""

    __slots__ = ("dimension", "vertex_count", "_tables", "_hash")

    def __init__(self, dimension, vertex_count, simplices):
        if dimension < 1:
            raise ValueError("dimension must be >= 1")
        if vertex_count < 1:
            raise ValueError("need at least one vertex")
        tables = {}
        for k in range(1, dimension + 1):
            table = simplices.get(k, ())
            tables[k] = tuple(tuple(int(f) for f in s) for s in table)
            for s in tables[k]:
                if len(s) != k + 1:
                    raise ValueError(f"{k}-simplex must have {k + 1} faces, got {s}")
        self.dimension = dimension
        self.vertex_count = vertex_count
        self._tables = tables
        self._hash = None

    def n_cells(self, k: int) -> int:
        if k == 0:
            return self.vertex_count
        return len(self._tables.get(k, ()))

    def table(self, k: int):
        return self._tables.get(k, ())

    def faces(self, k: int, i: int):
        """Face ids of simplex i in dimension k; for k=1 these are vertex ids."""
        return self._tables[k][i]

    def subsimplex(self, k, i, positions):
        """The face spanned by the given vertex positions; returns (dim, id)."""
        keep = sorted(set(positions))
        dim, idx = k, i
        for p in sorted(set(range(k + 1)) - set(keep), reverse=True):
            idx = self._tables[dim][idx][p]
            dim -= 1
        return dim, idx

    def vertex(self, k, i, position) -> int:
        return self.subsimplex(k, i, [position])[1]

    def vertices_of(self, k, i):
        if k == 0:
            return (i,)
        return tuple(self.vertex(k, i, p) for p in range(k + 1))

    def edge(self, k, i, a, b) -> int:
        """1-simplex id at vertex positions a < b of simplex i."""
        if not 0 <= a < b <= k:
            raise ValueError("need positions a < b")
        return self.subsimplex(k, i, [a, b])[1]

    def ascending_edges(self, k, i):
        """Edges joining consecutive vertices of simplex i, in ascending order."""
        return tuple(self.edge(k, i, p, p + 1) for p in range(k))

    def edge_endpoints(self, e: int):
        """(source, target) vertex ids of 1-simplex e (face 1, face 0)."""
        f0, f1 = self._tables[1][e]
        return f1, f0

    def euler_characteristic(self) -> int:
        chi = self.vertex_count
        for k in range(1, self.dimension + 1):
            chi += (-1) ** k * self.n_cells(k)
        return chi

    def vertex_components(self):
        """Partition of vertices into connected components (sorted tuples)."""
        parent = list(range(self.vertex_count))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in range(self.n_cells(1)):
            a, b = self.edge_endpoints(e)
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        comp = {}
        for v in range(self.vertex_count):
            comp.setdefault(find(v), []).append(v)
        return tuple(tuple(sorted(vs)) for _, vs in sorted(comp.items()))

    def is_connected(self) -> bool:
        return len(self.vertex_components()) == 1

    def __eq__(self, other):
        return (
            isinstance(other, DeltaComplex)
            and self.dimension == other.dimension
            and self.vertex_count == other.vertex_count
            and self._tables == other._tables
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(
                (self.dimension, self.vertex_count, tuple(sorted(self._tables.items())))
            )
        return self._hash

    def __repr__(self):
        counts = [self.vertex_count] + [self.n_cells(k) for k in range(1, self.dimension + 1)]
        return f"DeltaComplex(dim={self.dimension}, cells={counts})"


def validate(c: DeltaComplex):
    """Check face-map identities and index bounds; returns a list of diagnostics."""
    problems = []
    for k in range(1, c.dimension + 1):
        limit = c.n_cells(k - 1)
        for i, s in enumerate(c.table(k)):
            for f in s:
                if not 0 <= f < limit:
                    problems.append(f"missing face: {k}-simplex {i} references {k-1}-face {f}")
    if problems:
        return problems
    for k in range(2, c.dimension + 1):
        for idx, s in enumerate(c.table(k)):
            for j in range(k + 1):
                for i in range(j):
                    a = c.faces(k - 1, s[j])[i]
                    b = c.faces(k - 1, s[i])[j - 1]
                    if a != b:
                        problems.append(
                            f"face identity fails on {k}-simplex {idx} at (i,j)=({i},{j})"
                        )
    return problems


# ---------------------------------------------------------------------------
# Orientation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FundamentalCycle:
    """Signed sum of top simplices representing the (relative) fundamental class."""

    complex: DeltaComplex
    signs: tuple

    def reversed(self) -> "FundamentalCycle":
        return FundamentalCycle(self.complex, tuple(-s for s in self.signs))

    def __iter__(self):
        return iter(enumerate(self.signs))


def _top_face_incidences(c: DeltaComplex):
    inc = {}
    d = c.dimension
    for t in range(c.n_cells(d)):
        for slot, f in enumerate(c.faces(d, t)):
            inc.setdefault(f, []).append((t, slot))
    return inc


def orient(c: DeltaComplex, boundary_faces=()) -> FundamentalCycle:
    """Assign signs eps_t by propagating orientation across the dual graph.

    Interior top-codimension faces must be shared by exactly two simplex
    slots and receive cancelling induced orientations; faces listed in
    boundary_faces may instead be free.  The lowest-id top simplex of each
    dual component is seeded with +1.
    """
    d = c.dimension
    boundary = frozenset(boundary_faces)
    inc = _top_face_incidences(c)
    n_top = c.n_cells(d)
    if n_top == 0:
        raise DomainError("complex has no top simplices to orient")

    for f, pairs in inc.items():
        if f in boundary:
            if len(pairs) != 1:
                raise NonManifoldError(
                    f"non-manifold gluing: boundary face {f} lies in {len(pairs)} slots"
                )
        elif len(pairs) != 2:
            raise NonManifoldError(
                f"non-manifold gluing: interior face {f} lies in {len(pairs)} slots"
            )

    signs = [0] * n_top
    for root in range(n_top):
        if signs[root]:
            continue
        signs[root] = 1
        queue = deque([root])
        while queue:
            t = queue.popleft()
            for slot, f in enumerate(c.faces(d, t)):
                if f in boundary:
                    continue
                (t1, s1), (t2, s2) = inc[f]
                other, oslot = (t2, s2) if (t1, s1) == (t, slot) else (t1, s1)
                required = -signs[t] * (-1) ** (slot + oslot)
                if signs[other] == 0:
                    signs[other] = required
                    queue.append(other)
                elif signs[other] != required:
                    raise NonOrientableError("non-orientable: sign propagation contradicts")

    # full consistency pass catches self-glued faces with equal parity
    for f, pairs in inc.items():
        if f in boundary:
            continue
        (t1, s1), (t2, s2) = pairs
        if signs[t1] * (-1) ** s1 + signs[t2] * (-1) ** s2 != 0:
            raise NonOrientableError("non-orientable: interior face fails to cancel")
    return FundamentalCycle(c, tuple(signs))


def boundary_chain(cycle: FundamentalCycle):
    """Coefficients of the boundary of the cycle on top-codimension faces."""
    c = cycle.complex
    d = c.dimension
    out = {}
    for t, eps in cycle:
        for slot, f in enumerate(c.faces(d, t)):
            out[f] = out.get(f, 0) + eps * (-1) ** slot
    return {f: v for f, v in out.items() if v != 0}


# ---------------------------------------------------------------------------
# Spanning forests and first homology
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpanningForest:
    bases: tuple                 # one base vertex per component
    tree_edges: frozenset
    parent: dict                 # vertex -> (parent vertex, edge id, +1 if edge runs parent->vertex)

    def component_count(self):
        return len(self.bases)


def spanning_forest(c: DeltaComplex, bases=()) -> SpanningForest:
    """Deterministic BFS forest: per component, lowest-id edges first.

    Explicit bases claim their components; any remaining component is rooted
    at its lowest vertex.
    """
    adjacency = [[] for _ in range(c.vertex_count)]
    for e in range(c.n_cells(1)):
        a, b = c.edge_endpoints(e)
        adjacency[a].append((e, b, 1))
        adjacency[b].append((e, a, -1))
    for lst in adjacency:
        lst.sort()

    visited = [False] * c.vertex_count
    parent = {}
    tree = set()
    roots = []

    def grow(base):
        visited[base] = True
        roots.append(base)
        queue = deque([base])
        while queue:
            v = queue.popleft()
            for e, w, direction in adjacency[v]:
                if not visited[w]:
                    visited[w] = True
                    parent[w] = (v, e, direction)
                    tree.add(e)
                    queue.append(w)

    for b in bases:
        if visited[b]:
            raise ValueError(f"base vertex {b} duplicates a component base")
        grow(b)
    for v in range(c.vertex_count):
        if not visited[v]:
            grow(v)
    return SpanningForest(tuple(roots), frozenset(tree), parent)


@dataclass(frozen=True)
class H1Generator:
    """One generator of H_1 with the integer data the fields module needs.

    order: invariant factor (0 for a free generator).
    colouring_weights: coefficients w[e] so the flat colouring sending this
        generator to a (and the rest to 0) colours non-tree edge e by w[e]*a.
    evaluation_chain: coefficients c[e] so a tree-gauge colouring x evaluates
        on this generator as sum of c[e]*x[e].
    """

    order: int
    colouring_weights: tuple
    evaluation_chain: tuple


@dataclass(frozen=True)
class H1Structure:
    complex: DeltaComplex
    forest: SpanningForest
    group: FinitelyGeneratedAbelianGroup
    generators: tuple
    nontree_edges: tuple


@lru_cache(maxsize=None)
def h1_structure(c: DeltaComplex, bases=()) -> H1Structure:
    """First homology from the edge presentation over a spanning forest.

    Non-tree edges generate; each triangle contributes the relation given by
    its boundary word.  Smith normal form of the relation matrix yields the
    invariant factors and explicit generator-to-edge-chain data.
    """
    forest = spanning_forest(c, bases)
    nontree = tuple(e for e in range(c.n_cells(1)) if e not in forest.tree_edges)
    row_of = {e: i for i, e in enumerate(nontree)}
    n_tri = c.n_cells(2) if c.dimension >= 2 else 0

    rows = len(nontree)
    M = [[0] * n_tri for _ in range(rows)]
    for t in range(n_tri):
        f0, f1, f2 = c.faces(2, t)
        for e, sign in ((f0, 1), (f1, -1), (f2, 1)):
            if e in row_of:
                M[row_of[e]][t] += sign

    D, U, _, Ui, _ = _snf_full(M)
    gens = []
    torsion = []
    free = 0
    for i in range(rows):
        d = D[i][i] if i < n_tri else 0
        if d == 1:
            continue
        if d == 0:
            free += 1
        else:
            torsion.append(d)
        weights = tuple((nontree[j], U[i][j]) for j in range(rows) if U[i][j] != 0)
        chain = tuple((nontree[j], Ui[j][i]) for j in range(rows) if Ui[j][i] != 0)
        gens.append(H1Generator(d, weights, chain))

    group = FinitelyGeneratedAbelianGroup(free, invariant_factors(torsion))
    return H1Structure(c, forest, group, tuple(gens), nontree)


def homology_h1(c: DeltaComplex, bases=()) -> FinitelyGeneratedAbelianGroup:
    """H_1 of the complex in invariant-factor form."""
    return h1_structure(c, bases).group


# ---------------------------------------------------------------------------
# Cobordisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundaryPart:
    """A boundary subcomplex with its embedding into the total complex.

    embedding[k][j] is the total-complex id of the part's j-th k-simplex.
    """

    complex: DeltaComplex
    embedding: tuple
    base_vertex: int = 0

    def top_face_ids(self):
        return self.embedding[self.complex.dimension]

    def check_against(self, total: DeltaComplex):
        part = self.complex
        if part.dimension != total.dimension - 1:
            raise ValueError("boundary part must have codimension one")
        if len(self.embedding) != part.dimension + 1:
            raise ValueError("embedding must cover dimensions 0..part.dimension")
        if len(set(self.embedding[0])) != part.vertex_count:
            raise ValueError("boundary part vertices must embed injectively")
        for k in range(1, part.dimension + 1):
            for j in range(part.n_cells(k)):
                got = total.faces(k, self.embedding[k][j])
                want = tuple(self.embedding[k - 1][f] for f in part.faces(k, j))
                if got != want:
                    raise ValueError(f"embedding breaks face maps at dim {k}, simplex {j}")


class Cobordism:
    """Triple (incoming, total, outgoing) with a normalized fundamental cycle.

    The cycle's boundary equals (outgoing canonical cycle) - (incoming
    canonical cycle) under the part embeddings.
    """

    def __init__(self, total, incoming=None, outgoing=None, _orientation=None):
        self.total = total
        self.incoming = incoming
        self.outgoing = outgoing
        for part in (incoming, outgoing):
            if part is not None:
                part.check_against(total)
        if incoming is not None and outgoing is not None:
            shared = set(incoming.top_face_ids()) & set(outgoing.top_face_ids())
            if shared:
                raise ValueError(f"faces {sorted(shared)} lie in both boundary parts")
            shared_v = set(incoming.embedding[0]) & set(outgoing.embedding[0])
            if shared_v:
                raise ValueError("incoming and outgoing boundaries share vertices")
        if _orientation is None:
            _orientation = self._normalized_orientation()
        self.orientation = _orientation

    def _boundary_targets(self):
        """Required boundary coefficient per total face id."""
        targets = {}
        for part, outgoing in ((self.incoming, False), (self.outgoing, True)):
            if part is None:
                continue
            part_cycle = orient(part.complex)
            emb = part.embedding[part.complex.dimension]
            for j, eps in part_cycle:
                targets[emb[j]] = eps if outgoing else -eps
        return targets

    def _normalized_orientation(self):
        targets = self._boundary_targets()
        cycle = orient(self.total, boundary_faces=targets.keys())
        induced = boundary_chain(cycle)
        if set(induced) != set(targets):
            raise NonOrientableError("cobordism boundary does not match declared parts")

        # the propagation fixes signs per dual component only up to a global
        # flip; use the boundary targets to pin each component's flip
        comp = self._dual_components()
        flips = {}
        inc = _top_face_incidences(self.total)
        for f, want in targets.items():
            ((t, _slot),) = inc[f]
            root = comp[t]
            flip = induced[f] != want
            if induced[f] != want and induced[f] != -want:
                raise NonOrientableError("cobordism boundary coefficient mismatch")
            if root in flips and flips[root] != flip:
                raise NonOrientableError("cobordism boundary orientation inconsistent")
            flips[root] = flip
        signs = tuple(
            -s if flips.get(comp[t], False) else s for t, s in enumerate(cycle.signs)
        )
        return FundamentalCycle(self.total, signs)

    def _dual_components(self):
        d = self.total.dimension
        inc = _top_face_incidences(self.total)
        n_top = self.total.n_cells(d)
        comp = [None] * n_top
        for root in range(n_top):
            if comp[root] is not None:
                continue
            comp[root] = root
            queue = deque([root])
            while queue:
                t = queue.popleft()
                for f in self.total.faces(d, t):
                    for other, _ in inc[f]:
                        if comp[other] is None:
                            comp[other] = root
                            queue.append(other)
        return comp

    def reversed(self) -> "Cobordism":
        return Cobordism(
            self.total,
            incoming=self.outgoing,
            outgoing=self.incoming,
            _orientation=self.orientation.reversed(),
        )

    def __repr__(self):
        def side(part):
            return "empty" if part is None else repr(part.complex)

        return f"Cobordism({side(self.incoming)} -> {side(self.outgoing)}, total={self.total!r})"


def closed_as_cobordism(c: DeltaComplex) -> Cobordism:
    """A closed complex viewed as a cobordism from the empty manifold to itself."""
    return Cobordism(c, incoming=None, outgoing=None)


def subcomplex_from_faces(total: DeltaComplex, face_ids, base_vertex=None) -> BoundaryPart:
    """Boundary part generated by the given top-codimension faces of `total`.

    The listed (n-1)-simplices are closed under face maps and re-indexed
    densely;  the part keeps the induced delta-structure.
    """
    d = total.dimension - 1
    chosen = {d: sorted(set(face_ids))}
    for k in range(d, 0, -1):
        below = set()
        for i in chosen[k]:
            below.update(total.faces(k, i))
        chosen[k - 1] = sorted(below)
    index = {k: {tid: j for j, tid in enumerate(ids)} for k, ids in chosen.items()}
    tables = {}
    for k in range(1, d + 1):
        tables[k] = [
            tuple(index[k - 1][f] for f in total.faces(k, tid)) for tid in chosen[k]
        ]
    part_complex = DeltaComplex(d, len(chosen[0]), tables)
    embedding = tuple(tuple(chosen[k]) for k in range(d + 1))
    if base_vertex is None:
        base_vertex = 0
    return BoundaryPart(part_complex, embedding, base_vertex)


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------

def _subset_tables(n_vertices, top_dim):
    """Face tables of the full subset complex on {0..n_vertices-1} up to top_dim."""
    from itertools import combinations

    subsets = {k: list(combinations(range(n_vertices), k + 1)) for k in range(top_dim + 1)}
    index = {k: {s: i for i, s in enumerate(subs)} for k, subs in subsets.items()}
    tables = {}
    for k in range(1, top_dim + 1):
        tables[k] = [
            tuple(index[k - 1][s[:i] + s[i + 1:]] for i in range(k + 1))
            for s in subsets[k]
        ]
    return subsets, index, tables


def build_simplex_boundary(d: int) -> DeltaComplex:
    """S^{d-1} as the boundary of the standard d-simplex (d+1 top cells)."""
    if d < 2:
        raise DomainError("simplex boundary needs d >= 2")
    _, _, tables = _subset_tables(d + 1, d - 1)
    return DeltaComplex(d - 1, d + 1, tables)


def build_sphere(n: int) -> DeltaComplex:
    """S^n from two n-simplices glued along their entire boundaries."""
    if not 1 <= n <= 3:
        raise DomainError("sphere builder supports 1 <= n <= 3")
    _, index, tables = _subset_tables(n + 1, n - 1)
    top = tuple(index[n - 1][tuple(v for v in range(n + 1) if v != i)] for i in range(n + 1))
    tables[n] = [top, top]
    return DeltaComplex(n, n + 1, tables)


def build_octahedron() -> DeltaComplex:
    """S^2 as the octahedron boundary: 6 vertices, 12 edges, 8 triangles."""
    antipode = {0: 5, 1: 4, 2: 3, 3: 2, 4: 1, 5: 0}
    edges = [
        (a, b) for a in range(6) for b in range(a + 1, 6) if antipode[a] != b
    ]
    eidx = {e: i for i, e in enumerate(edges)}
    tris = [
        (a, b, c)
        for a in range(6)
        for b in range(a + 1, 6)
        for c in range(b + 1, 6)
        if antipode[a] not in (b, c) and antipode[b] != c
    ]
    tables = {
        1: [(b, a) for a, b in edges],
        2: [(eidx[(b, c)], eidx[(a, c)], eidx[(a, b)]) for a, b, c in tris],
    }
    return DeltaComplex(2, 6, tables)


def build_ball(d: int) -> Cobordism:
    """The d-ball as a single d-simplex, a cobordism from empty to S^{d-1}."""
    if not 2 <= d <= 3:
        raise DomainError("ball builder supports 2 <= d <= 3")
    _, _, tables = _subset_tables(d + 1, d)
    total = DeltaComplex(d, d + 1, tables)
    boundary = subcomplex_from_faces(total, range(total.n_cells(d - 1)))
    return Cobordism(total, incoming=None, outgoing=boundary)


def circle_one_vertex() -> DeltaComplex:
    """S^1 with a single vertex and a single loop edge."""
    return DeltaComplex(1, 1, {1: [(0, 0)]})


def _fan_triangle(order, edge_ids):
    """Face tuple for a triangle with ordered vertices (u0,u1,u2).

    edge_ids maps each unordered side, given as the pair of local positions,
    to the 1-simplex sitting there; the tuple returned is (face0, face1, face2).
    """
    return (edge_ids[(1, 2)], edge_ids[(0, 2)], edge_ids[(0, 1)])


def _polygon_letter(pos):
    """Edge-class id carried by side `pos` of the 4g-gon word prod [a_i, b_i]."""
    block, off = divmod(pos, 4)
    return 2 * block if off in (0, 2) else 2 * block + 1


def _polygon_forward(pos):
    """Whether the letter arrow on side `pos` runs along the boundary cycle."""
    return pos % 4 in (0, 1)


def build_surface(g: int) -> DeltaComplex:
    """Closed orientable surface of genus g.

    Genus 0 is the two-triangle sphere; genus >= 1 comes from the standard
    4g-gon with edge word prod [a_i, b_i], fanned from one polygon vertex.
    All polygon vertices land in a single vertex class, so every edge is a
    loop and each fan triangle just names the 1-simplices on its sides.
    """
    if g < 0:
        raise DomainError("genus must be nonnegative")
    if g == 0:
        return build_sphere(2)

    m = 4 * g
    n_letters = 2 * g
    diag = {j: n_letters + (j - 2) for j in range(2, m - 1)}  # diagonal (0, j)
    edge_tables = [(0, 0)] * (n_letters + m - 3)

    # fan: T_1 ordered (P0,P1,P2); middles (P0,Pj,Pj+1) with the order of the
    # last two vertices following the letter arrow; last ordered (P0,P_{m-1},P_{m-2})
    triangles = [(_polygon_letter(1), diag[2], _polygon_letter(0))]
    for j in range(2, m - 2):
        if _polygon_forward(j):
            triangles.append((_polygon_letter(j), diag[j + 1], diag[j]))
        else:
            triangles.append((_polygon_letter(j), diag[j], diag[j + 1]))
    triangles.append((_polygon_letter(m - 2), diag[m - 2], _polygon_letter(m - 1)))

    return DeltaComplex(2, 1, {1: edge_tables, 2: triangles})


def _surface_with_boundary(g: int):
    """Genus-g surface with one boundary circle; returns (complex, boundary edge id).

    Built from a (4g+1)-gon whose last side is the free boundary loop; for
    g = 0 a folded triangle forms the disk.  One interior vertex class plus,
    for the disk, the fold vertex.
    """
    if g == 0:
        # folded triangle (P2, P0, P1) with sides s, s, c; c is the boundary loop
        tables = {1: [(1, 0), (0, 0)], 2: [(0, 0, 1)]}
        return DeltaComplex(2, 2, tables), 1

    m = 4 * g
    n_letters = 2 * g
    diag = {j: n_letters + (j - 2) for j in range(2, m)}  # diagonals (0,2)..(0,m-1)
    c_edge = n_letters + (m - 2)
    edge_tables = [(0, 0)] * (c_edge + 1)

    triangles = [(_polygon_letter(1), diag[2], _polygon_letter(0))]
    for j in range(2, m - 1):
        if _polygon_forward(j):
            triangles.append((_polygon_letter(j), diag[j + 1], diag[j]))
        else:
            triangles.append((_polygon_letter(j), diag[j], diag[j + 1]))
    # last triangle ordered (P_m, P0, P_{m-1}); boundary c runs P_m -> P0
    triangles.append((diag[m - 1], _polygon_letter(m - 1), c_edge))
    return DeltaComplex(2, 1, {1: edge_tables, 2: triangles}), c_edge


def build_surface_split(g1: int, g2: int):
    """Two cobordisms glueing along one circle to the genus g1+g2 surface.

    Returns (left, right) with left: empty -> S^1 and right: S^1 -> empty,
    both carrying the one-vertex circle as the common boundary complex.
    """
    left_cx, left_edge = _surface_with_boundary(g1)
    right_cx, right_edge = _surface_with_boundary(g2)
    circle = circle_one_vertex()

    def part(cx, edge):
        v = cx.edge_endpoints(edge)[0]
        return BoundaryPart(circle, ((v,), (edge,)), base_vertex=0)

    left = Cobordism(left_cx, incoming=None, outgoing=part(left_cx, left_edge))
    right = Cobordism(right_cx, incoming=part(right_cx, right_edge), outgoing=None)
    return left, right


def build_lens(p: int, q: int) -> DeltaComplex:
    """Lens space L(p,q) from p tetrahedra sharing the core edge.

    Tetrahedron t_j has ordered vertices (a, b, c_j, d_j).  Interior gluing
    identifies the abd-face of t_j with the abc-face of t_{j+1}; the boundary
    faces are closed up by (a, c_i, d_i) = (b, c_{i+q}, d_{i+q}).  The
    quotient has two vertex classes, edges ab / u_1..u_p / eq, and all
    orientation signs come out +1.
    """
    if p < 1:
        raise DomainError("lens builder needs p >= 1")
    from math import gcd

    if gcd(p, q) != 1:
        raise CoprimalityError(f"coprimality violated: gcd({p}, {q}) != 1")

    # vertex classes: 0 = core (all a_i and b_i), 1 = equator (all c_i, d_i)
    # edge ids: 0 = the core edge ab, 1..p = meridians u_j = [b, c_j], p+1 = equator
    e_ab, e_eq = 0, p + 1

    def u(j):
        return 1 + ((j - 1) % p)

    edges = [(0, 0)] + [(1, 0)] * p + [(1, 1)]

    # faces F_j = [a, b, c_j]  (j = 1..p), then G_i = [a, c_i, d_i]
    def F(j):
        return (j - 1) % p

    def G(i):
        return p + ((i - 1) % p)

    triangles = []
    for j in range(1, p + 1):
        triangles.append((u(j), u(j + q), e_ab))
    for i in range(1, p + 1):
        triangles.append((e_eq, u(i + 1 + q), u(i + q)))

    tetrahedra = []
    for j in range(1, p + 1):
        tetrahedra.append((G(j - q), G(j), F(j + 1), F(j)))

    return DeltaComplex(3, 2, {1: edges, 2: triangles, 3: tetrahedra})


# ---------------------------------------------------------------------------
# Prism products: staircase triangulations of X x I and X x S^1
# ---------------------------------------------------------------------------

class _Prism:
    """Id bookkeeping for the staircase triangulation of X x I or X x S^1.

    Simplices of the product in dimension k:
      bottom/top (or a single merged level, for the circle) over each
      k-simplex of X, diagonals D_s over each k-simplex (s = 0..k-1), and
      walls W_s over each (k-1)-simplex (s = 0..k-1).
    """

    def __init__(self, base: DeltaComplex, circle: bool):
        self.base = base
        self.circle = circle
        self.copies = 1 if circle else 2

    def _cnt(self, k):
        return self.base.n_cells(k) if 0 <= k <= self.base.dimension else 0

    def bottom(self, k, i):
        return i

    def top(self, k, i):
        return i if self.circle else self._cnt(k) + i

    def diag(self, k, i, s):
        return self.copies * self._cnt(k) + i * k + s

    def wall(self, k, tau, s):
        return self.copies * self._cnt(k) + self._cnt(k) * k + tau * k + s

    def level_like(self, k, i, s):
        """diag with the conventions s = -1 -> top, s = k -> bottom."""
        if s < 0:
            return self.top(k, i)
        if s == k:
            return self.bottom(k, i)
        return self.diag(k, i, s)

    def n_cells(self, k):
        if k == 0:
            return self.copies * self._cnt(0)
        return self.copies * self._cnt(k) + self._cnt(k) * k + self._cnt(k - 1) * k

    def tables(self):
        n = self.base.dimension
        tables = {}
        for k in range(1, n + 2):
            rows = []
            for i in range(self._cnt(k)):
                rows.append(self._level_faces(k, i, self.bottom))
            if not self.circle:
                for i in range(self._cnt(k)):
                    rows.append(self._level_faces(k, i, self.top))
            for i in range(self._cnt(k)):
                for s in range(k):
                    rows.append(self._diag_faces(k, i, s))
            for tau in range(self._cnt(k - 1)):
                for s in range(k):
                    rows.append(self._wall_faces(k, tau, s))
            tables[k] = rows
        return tables

    def _level_faces(self, k, i, pick):
        return tuple(pick(k - 1, f) for f in self.base.faces(k, i))

    def _diag_faces(self, k, i, s):
        out = []
        for l, f in enumerate(self.base.faces(k, i)):
            out.append(self.level_like(k - 1, f, s - 1 if l <= s else s))
        return tuple(out)

    def _wall_faces(self, k, tau, s):
        out = []
        for l in range(k + 1):
            if l < s:
                out.append(self.wall(k - 1, self.base.faces(k - 1, tau)[l], s - 1))
            elif l == s:
                out.append(self.level_like(k - 1, tau, s - 1))
            elif l == s + 1:
                out.append(self.level_like(k - 1, tau, s))
            else:
                out.append(self.wall(k - 1, self.base.faces(k - 1, tau)[l - 1], s))
        return tuple(out)


def _prism_complex(base: DeltaComplex, circle: bool):
    prism = _Prism(base, circle)
    total = DeltaComplex(base.dimension + 1, prism.n_cells(0), prism.tables())
    return prism, total


def build_cylinder(m: DeltaComplex) -> Cobordism:
    """The staircase triangulation of m x I as a cobordism from m to m."""
    if m.dimension > 2:
        raise DomainError("cylinder builder supports base dimension <= 2")
    prism, total = _prism_complex(m, circle=False)
    dims = m.dimension + 1
    bottom = tuple(
        tuple(prism.bottom(k, i) for i in range(m.n_cells(k))) for k in range(dims)
    )
    top = tuple(
        tuple(prism.top(k, i) for i in range(m.n_cells(k))) for k in range(dims)
    )
    return Cobordism(
        total,
        incoming=BoundaryPart(m, bottom, base_vertex=0),
        outgoing=BoundaryPart(m, top, base_vertex=0),
    )


def build_circle_product(m: DeltaComplex) -> DeltaComplex:
    """The staircase triangulation of S^1 x m (closed m of dimension <= 2)."""
    if m.dimension > 2:
        raise DomainError("circle product supports base dimension <= 2")
    _, total = _prism_complex(m, circle=True)
    return total


def build_torus_grid() -> DeltaComplex:
    """T^2 refined over a 2x2 vertex grid: 4 vertices, 12 edges, 8 triangles."""

    def v(i, j):
        return (i % 2) * 2 + (j % 2)

    edges = []
    eidx = {}

    def edge(a, b):
        key = ("e", a, b)
        if key not in eidx:
            eidx[key] = len(edges)
            edges.append((b, a))
        return eidx[key]

    tris = []
    for i in range(2):
        for j in range(2):
            a, b, c, d = v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)
            h = edge(a, b)           # horizontal out of (i,j)
            vert = edge(b, c)        # vertical out of (i+1,j)
            dg = edge(a, c)          # cell diagonal
            left = edge(a, d)
            top = edge(d, c)
            tris.append((vert, dg, h))
            tris.append((top, dg, left))
    return DeltaComplex(2, 4, {1: edges, 2: tris})


def disjoint_union(c1: DeltaComplex, c2: DeltaComplex) -> DeltaComplex:
    if c1.dimension != c2.dimension:
        raise ValueError("disjoint union needs equal dimensions")
    tables = {}
    offs = [c1.vertex_count] + [c1.n_cells(k) for k in range(1, c1.dimension + 1)]
    for k in range(1, c1.dimension + 1):
        shifted = [tuple(f + offs[k - 1] for f in s) for s in c2.table(k)]
        tables[k] = list(c1.table(k)) + shifted
    return DeltaComplex(c1.dimension, c1.vertex_count + c2.vertex_count, tables)


# ---------------------------------------------------------------------------
# JSON file format
# ---------------------------------------------------------------------------

def complex_to_json(c: DeltaComplex, incoming=None, outgoing=None) -> dict:
    data = {
        "dimension": c.dimension,
        "vertices": c.vertex_count,
        "simplices": {
            str(k): [list(s) for s in c.table(k)] for k in range(1, c.dimension + 1)
        },
    }
    if incoming is not None:
        data["incoming"] = list(incoming)
    if outgoing is not None:
        data["outgoing"] = list(outgoing)
    return data


def complex_from_json(data) -> DeltaComplex:
    try:
        dimension = int(data["dimension"])
        vertices = int(data["vertices"])
        simplices = {int(k): v for k, v in data.get("simplices", {}).items()}
    except (KeyError, TypeError, AttributeError) as exc:
        raise ValueError(f"malformed complex data: {exc}") from exc
    c = DeltaComplex(dimension, vertices, simplices)
    problems = validate(c)
    if problems:
        raise ValueError("invalid complex: " + "; ".join(problems))
    return c


def cobordism_from_json(data) -> Cobordism:
    c = complex_from_json(data)
    incoming = data.get("incoming") or None
    outgoing = data.get("outgoing") or None
    inc = subcomplex_from_faces(c, incoming) if incoming else None
    out = subcomplex_from_faces(c, outgoing) if outgoing else None
    return Cobordism(c, incoming=inc, outgoing=out)


def load_complex(path: str) -> DeltaComplex:
    with open(path) as fh:
        return complex_from_json(json.load(fh))
