"""Surgery on simple 3-polytopes: connected sums along belt-surrounded
facets, vertex/edge truncation, cutting runs of consecutive edges, and the
all-edges cut P_E.

Every operation rewrites the combinatorial structure (rotation system or,
equivalently, the dual triangulation) and re-validates the result through
from_rotation_system, so an invalid surgery cannot produce a polytope.
"""

from __future__ import annotations

from dataclasses import dataclass

from .belts import facet_belt
from .polytope import NotSphere, SimplePolytope, from_rotation_system


class FacetNotBeltSurrounded(ValueError):
    """The chosen facet's neighbors do not form a belt (e.g. any facet of
    the simplex), so no connected sum is possible there."""


@dataclass(frozen=True)
class Alignment:
    """How the two k-gonal facets are matched in a connected sum: position j
    of the first facet's neighbor cycle is merged with position
    start + j (forward) or start - j (reverse) of the second's, 0-based."""

    start: int = 0
    reverse: bool = False

    def position(self, j: int, k: int) -> int:
        return (self.start - j) % k if self.reverse else (self.start + j) % k


def all_alignments(k: int):
    return [Alignment(start=s, reverse=r) for r in (False, True) for s in range(k)]


def _polytope_from_triangles(m: int, triangles) -> SimplePolytope:
    """Rebuild a polytope from the triangle set of its dual triangulation."""
    link_edges = {}
    for tri in triangles:
        a, b, c = tri
        for x, y, z in ((a, b, c), (b, a, c), (c, a, b)):
            link_edges.setdefault(x, []).append((y, z))
    rotations = []
    for v in range(1, m + 1):
        pairs = link_edges.get(v)
        if not pairs:
            raise NotSphere(f"facet {v} has no incident vertices after surgery")
        nbr = {}
        for y, z in pairs:
            nbr.setdefault(y, []).append(z)
            nbr.setdefault(z, []).append(y)
        if any(len(ws) != 2 for ws in nbr.values()):
            raise NotSphere(f"link of facet {v} is not a cycle")
        start = min(nbr)
        cycle = [start, nbr[start][0]]
        while True:
            a, b = cycle[-2], cycle[-1]
            c = nbr[b][0] if nbr[b][0] != a else nbr[b][1]
            if c == start:
                break
            cycle.append(c)
        if len(cycle) != len(nbr):
            raise NotSphere(f"link of facet {v} is disconnected")
        rotations.append(tuple(cycle))
    return from_rotation_system(rotations)


def connected_sum(
    P: SimplePolytope, f: int, Q: SimplePolytope, g: int, align: Alignment = Alignment()
) -> SimplePolytope:
    """Connected sum of P and Q at the k-gonal facets f and g.

    Both facets must be surrounded by k-belts.  Cutting each polytope's
    surface along the midline of its belt and regluing merges the two belts
    facet-by-facet as prescribed by align; the result has
    m_P + m_Q - k - 2 facets and contains the glued k-belt.  Facets of P
    keep their relative order (belt facets carry the merged ones), then the
    remaining facets of Q follow.
    """
    belt_p = facet_belt(P, f)
    belt_q = facet_belt(Q, g)
    if belt_p is None:
        raise FacetNotBeltSurrounded(f"facet {f} of the first summand")
    if belt_q is None:
        raise FacetNotBeltSurrounded(f"facet {g} of the second summand")
    nb_p = P.neighbors(f)
    nb_q = Q.neighbors(g)
    k = len(nb_p)
    if len(nb_q) != k:
        raise ValueError("facets must have the same number of edges")
    # new labels: P-facets except f, order preserved; then Q-facets except g
    # and the belt around g (those merge into the P belt)
    label_p = {}
    nxt = 1
    for i in range(1, P.m + 1):
        if i != f:
            label_p[i] = nxt
            nxt += 1
    label_q = {}
    for j in range(k):
        label_q[nb_q[align.position(j, k)]] = label_p[nb_p[j]]
    for i in range(1, Q.m + 1):
        if i != g and i not in label_q:
            label_q[i] = nxt
            nxt += 1
    m = nxt - 1
    triangles = set()
    for tri in P.vertex_tuples:
        if f not in tri:
            triangles.add(tuple(sorted(label_p[x] for x in tri)))
    for tri in Q.vertex_tuples:
        if g not in tri:
            triangles.add(tuple(sorted(label_q[x] for x in tri)))
    return _polytope_from_triangles(m, triangles)


def _cut_edge_run(P: SimplePolytope, f: int, run: tuple[int, ...]) -> SimplePolytope:
    """Cut the s >= 1 consecutive edges of facet f shared with the facets in
    run (consecutive in f's rotation).  The new facet is labelled m+1."""
    nbrs = P.neighbors(f)
    kf = len(nbrs)
    s = len(run)
    if s < 1:
        raise ValueError("empty edge run")
    if len(set(run)) != s or any(x not in nbrs for x in run):
        raise ValueError("edge run must name distinct neighbors of the facet")
    t = nbrs.index(run[0])
    fwd = tuple(nbrs[(t + d) % kf] for d in range(s))
    bwd = tuple(nbrs[(t - d) % kf] for d in range(s))
    if fwd == tuple(run):
        pass
    elif bwd == tuple(run):
        t = (t - s + 1) % kf
    else:
        raise ValueError("edge run must be consecutive on the facet")
    if s > kf - 2:
        raise ValueError("cutting this many edges would destroy the facet")
    run = tuple(nbrs[(t + d) % kf] for d in range(s))
    prev_f = nbrs[(t - 1) % kf]
    next_f = nbrs[(t + s) % kf]
    g = P.m + 1
    rot = {i: list(P.neighbors(i)) for i in range(1, P.m + 1)}
    # facet f: the run collapses to the single new neighbor g
    new_f = [g]
    p = (t + s) % kf
    while nbrs[p] != run[0]:
        new_f.append(nbrs[p])
        p = (p + 1) % kf
    rot[f] = new_f
    # middle facets of the run trade their edge with f for one with g
    for x in run:
        rot[x] = [g if y == f else y for y in rot[x]]
    # end facets gain an edge with g, inserted next to f on the run side
    def insert_next_to_f(x, after: bool):
        r = rot[x]
        q = r.index(f)
        if after:
            r.insert(q + 1, g)
        else:
            r.insert(q, g)

    # orientation: in rot[prev_f] the run-side of f is the position where
    # run[0] sits adjacent to f; same for next_f with run[-1]
    for x, mate in ((prev_f, run[0]), (next_f, run[-1])):
        r = rot[x]
        q = r.index(f)
        if r[(q + 1) % len(r)] == mate:
            r.insert(q + 1, g)
        elif r[(q - 1) % len(r)] == mate:
            r.insert(q, g)
        else:
            raise ValueError("edge run is not consecutive at its endpoint")
    rot[g] = [f, prev_f, *run, next_f]
    return from_rotation_system([rot[i] for i in range(1, g + 1)])


def vertex_truncate(P: SimplePolytope, v) -> SimplePolytope:
    """Truncate the vertex given by its three facets; the new triangular
    facet is labelled m+1."""
    tri = tuple(sorted(v))
    if frozenset(tri) not in {frozenset(t) for t in P.vertex_tuples}:
        raise ValueError(f"{tri} is not a vertex")
    t = P.m + 1
    rot = {i: list(P.neighbors(i)) for i in range(1, P.m + 1)}
    for x in tri:
        others = [y for y in tri if y != x]
        r = rot[x]
        k = len(r)
        for p in range(k):
            if {r[p], r[(p + 1) % k]} == set(others):
                r.insert(p + 1, t)
                break
        else:
            raise ValueError(f"{tri} is not a vertex of facet {x}")
    rot[t] = list(tri)
    return from_rotation_system([rot[i] for i in range(1, t + 1)])


def edge_truncate(P: SimplePolytope, e) -> SimplePolytope:
    """Truncate the edge between two adjacent facets; the new quadrangular
    facet is labelled m+1."""
    a, b = e
    if not P.adjacent(a, b):
        raise ValueError(f"facets {a},{b} are not adjacent")
    return _cut_edge_run(P, a, (b,))


def sk_truncate(P: SimplePolytope, f: int, run) -> SimplePolytope:
    """Cut s >= 2 consecutive edges of the k-gonal facet f; the edges are
    named by the neighboring facets, consecutive in f's rotation.

    When P is Pogorelov and k >= s + 4 the result is again Pogorelov.
    """
    run = tuple(run)
    if len(run) < 2:
        raise ValueError("an edge run for (s,k)-truncation has s >= 2 edges")
    return _cut_edge_run(P, f, run)


def edge_cut_all(P: SimplePolytope) -> SimplePolytope:
    """P_E: cut all edges of P simultaneously.

    Old facets keep labels 1..m and become pairwise disjoint; the edge
    facets are hexagons labelled m+1.. in lexicographic edge order, adjacent
    to a facet iff the edge lies on it and to one another iff the edges are
    incident.  On the dual this is the edge subdivision of the triangulation.
    """
    edges = P.edges()
    label = {e: P.m + 1 + i for i, e in enumerate(edges)}
    triangles = set()
    for tri in P.vertex_tuples:
        a, b, c = tri
        eab = label[(min(a, b), max(a, b))]
        ebc = label[(min(b, c), max(b, c))]
        eac = label[(min(a, c), max(a, c))]
        triangles.add(tuple(sorted((a, eab, eac))))
        triangles.add(tuple(sorted((b, eab, ebc))))
        triangles.add(tuple(sorted((c, ebc, eac))))
        triangles.add(tuple(sorted((eab, ebc, eac))))
    return _polytope_from_triangles(P.m + len(edges), triangles)
