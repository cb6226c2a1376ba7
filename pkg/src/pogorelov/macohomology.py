"""Cohomology rings of moment-angle complexes via the finite model R*(K).

R*(K) is the quotient of the Koszul algebra of the face ring by
v_i^2 = u_i v_i = 0; it has basis u_J v_I over pairs of disjoint subsets
with I a face.  The component of multidegree M splits off a finite cochain
complex whose cohomology in level p = |I| equals the reduced simplicial
cohomology of the full subcomplex K_M in degree p - 1; both routes are
computed and compared whenever a component is built, so a disagreement
(which would mean a bug) raises InternalMismatch instead of propagating.

Products are computed monomial-wise in R*(K) and re-expressed in the chosen
cohomology basis by reduction modulo coboundaries; no full multiplication
table is ever materialized, so memory stays proportional to the basis.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ._intlinalg import (
    ExactSolver,
    GF2Echelon,
    ZQuotient,
    gf2_rank,
    kernel_basis,
    rank_z,
)
from .complex import SimplicialComplex, full_subcomplex, reduced_cohomology
from .polytope import SimplePolytope, dual_complex


class InternalMismatch(RuntimeError):
    """The two cohomology routes disagree; signals a bug, not a user error."""


class SizeGuard(RuntimeError):
    """Requested computation exceeds the configured desk-scale bounds."""


_MAX_VERTICES_FULL = 20
_MAX_TOTAL_DIM = 20000


def _bits(mask: int):
    v = 0
    while mask:
        if mask & 1:
            yield v
        mask >>= 1
        v += 1


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


def _vertices_of(mask: int) -> tuple[int, ...]:
    return tuple(b + 1 for b in _bits(mask))


@dataclass(frozen=True)
class KoszulMonomial:
    """u_J v_I with J, I disjoint subsets of [m] and I a face of K."""

    J: tuple[int, ...]
    I: tuple[int, ...]

    def __str__(self):
        parts = [f"u{j}" for j in self.J] + [f"v{i}" for i in self.I]
        return " ".join(parts) if parts else "1"

    @property
    def degree(self) -> int:
        return len(self.J) + 2 * len(self.I)


def _exterior_sign(jmask: int, j: int) -> int:
    """Sign (-1)^(r-1) for j at position r of the set jmask, increasing order."""
    below = jmask & ((1 << j) - 1)
    return -1 if _popcount(below) % 2 else 1


def _merge_sign(a: int, b: int) -> int:
    """Koszul sign reordering u_A u_B into u_{A|B}: count inversions."""
    inv = 0
    for y in _bits(b):
        inv += _popcount(a >> (y + 1))
    return -1 if inv % 2 else 1


def r_basis(K: SimplicialComplex, J) -> dict[int, list[int]]:
    """Basis of the multidegree-J component, keyed by level p = |I|.

    Level-p basis elements are faces L of K with L subset J, |L| = p; the
    monomial is u_{J\\L} v_L.  Faces are bitmasks sorted ascending.
    """
    jmask = J if isinstance(J, int) else sum(1 << (v - 1) for v in J)
    by_size = K.faces_by_size()
    out = {}
    for p in range(_popcount(jmask) + 1):
        lvl = [f for f in by_size.get(p, []) if f & ~jmask == 0]
        if lvl:
            out[p] = lvl
    return out


def r_differential(K: SimplicialComplex, J, p: int) -> list[list[int]]:
    """Matrix of d: level p -> level p+1 in multidegree J (rows = level p+1).

    d(u_{J'} v_I) = sum over j in J' with I+j a face of
    (-1)^(pos of j in J' - 1) u_{J'-j} v_{I+j}.
    """
    jmask = J if isinstance(J, int) else sum(1 << (v - 1) for v in J)
    basis = r_basis(K, jmask)
    lo = basis.get(p, [])
    hi = basis.get(p + 1, [])
    index = {f: i for i, f in enumerate(hi)}
    rows = [[0] * len(lo) for _ in hi]
    for c, L in enumerate(lo):
        jm = jmask & ~L
        for j in _bits(jm):
            target = L | (1 << j)
            r = index.get(target)
            if r is not None:
                rows[r][c] = _exterior_sign(jm, j)
    return rows


def monomial(K: SimplicialComplex, J, I) -> KoszulMonomial:
    jt, it = tuple(sorted(J)), tuple(sorted(I))
    if set(jt) & set(it):
        raise ValueError("J and I must be disjoint")
    if not K.has_face(it):
        raise ValueError(f"{it} is not a face")
    return KoszulMonomial(J=jt, I=it)


class RComplex:
    """The differential bigraded model R*(K) with d**2 = 0, by multidegree."""

    def __init__(self, K: SimplicialComplex):
        self.K = K

    def basis(self, J) -> dict[int, list[KoszulMonomial]]:
        jmask = J if isinstance(J, int) else sum(1 << (v - 1) for v in J)
        out = {}
        for p, lvl in r_basis(self.K, jmask).items():
            out[p] = [
                KoszulMonomial(J=_vertices_of(jmask & ~L), I=_vertices_of(L))
                for L in lvl
            ]
        return out

    def differential(self, J, p: int) -> list[list[int]]:
        return r_differential(self.K, J, p)

    def d(self, chain: dict, J) -> dict:
        """Apply d to a chain {face-mask: coeff} in multidegree J."""
        jmask = J if isinstance(J, int) else sum(1 << (v - 1) for v in J)
        out = {}
        for L, c in chain.items():
            jm = jmask & ~L
            for j in _bits(jm):
                target = L | (1 << j)
                if self.K.has_face(target):
                    out[target] = out.get(target, 0) + c * _exterior_sign(jm, j)
        return {k: v for k, v in out.items() if v}

    def check_d_squared(self, J) -> bool:
        jmask = J if isinstance(J, int) else sum(1 << (v - 1) for v in J)
        for p, lvl in r_basis(self.K, jmask).items():
            for L in lvl:
                dd = self.d(self.d({L: 1}, jmask), jmask)
                if dd:
                    return False
        return True


def r_complex(K: SimplicialComplex) -> RComplex:
    return RComplex(K)


# ---------------------------------------------------------------------------
# Per-multidegree cohomology pieces


class _PieceZ:
    __slots__ = ("basis", "rank", "torsion", "_solver", "_quo", "reps")

    def __init__(self, basis, d_in_cols, d_out_matrix):
        self.basis = basis  # list of face masks
        n = len(basis)
        if d_out_matrix and d_out_matrix[0]:
            ker = kernel_basis(d_out_matrix)
        else:
            ker = [[int(i == j) for i in range(n)] for j in range(n)]
        self._solver = ExactSolver(ker) if ker else None
        img_coords = []
        for col in d_in_cols:
            if any(col):
                img_coords.append(self._solver.solve(col))
        self._quo = ZQuotient(len(ker), img_coords)
        self.rank = self._quo.rank
        self.torsion = tuple(self._quo.torsion)
        reps = []
        for lift in self._quo.free_reps:
            vec = [0] * n
            for t, c in enumerate(lift):
                if c:
                    for i in range(n):
                        vec[i] += c * ker[t][i]
            reps.append(vec)
        self.reps = reps  # free representatives only

    def project(self, vec) -> tuple[list[int], list[int]]:
        """Coordinates (free, torsion) of a cocycle given over the basis."""
        if self._solver is None:
            return [], []
        c = self._solver.solve(vec)
        return self._quo.coords(c)


class _PieceZ2:
    __slots__ = ("basis", "rank", "torsion", "_kernel_ech", "_img_ech", "_free_pos", "reps")

    def __init__(self, basis, d_in_cols, d_out_cols):
        self.basis = basis
        self.torsion = ()
        n = len(basis)
        ech = GF2Echelon()
        kernel = []
        for j in range(n):
            v, comb, _ = ech.reduce(d_out_cols[j], 1 << j)
            if v == 0:
                kernel.append(comb)
            else:
                ech.add(v, comb)
        # echelon of the kernel itself, tracking kernel-basis coordinates
        self._kernel_ech = GF2Echelon()
        for t, kv in enumerate(kernel):
            self._kernel_ech.add(kv, 1 << t)
        img = GF2Echelon()
        for col in d_in_cols:
            if col:
                img.add(self._coords_of(col), 0)
        self._img_ech = img
        pivots = set(img.pivot_of)
        self._free_pos = [t for t in range(len(kernel)) if t not in pivots]
        self.rank = len(self._free_pos)
        self.reps = [kernel[t] for t in self._free_pos]

    def _coords_of(self, vec: int) -> int:
        v = vec
        coords = 0
        while v:
            b = v.bit_length() - 1
            pv, pc = self._kernel_ech.pivot_of[b]
            v ^= pv
            coords ^= pc
        return coords

    def project(self, vec: int) -> tuple[list[int], list[int]]:
        coords = self._coords_of(vec)
        coords, _, _ = self._img_ech.reduce(coords)
        return [coords >> t & 1 for t in self._free_pos], []


def _piece_vector(basis, chain: dict):
    return [chain.get(L, 0) for L in basis]


def _piece_bitvector(basis, chain: dict):
    out = 0
    for i, L in enumerate(basis):
        if chain.get(L, 0) % 2:
            out |= 1 << i
    return out


class Component:
    """All cohomology pieces of one multidegree."""

    __slots__ = ("jmask", "pieces")

    def __init__(self, jmask, pieces):
        self.jmask = jmask
        self.pieces = pieces  # dict p -> piece

    def rank(self, p: int) -> int:
        piece = self.pieces.get(p)
        return piece.rank if piece else 0

    def torsion(self, p: int) -> tuple[int, ...]:
        piece = self.pieces.get(p)
        return piece.torsion if piece else ()


class MultigradedCohomology:
    """Lazy per-multidegree cohomology of Z_K with cocycle representatives.

    Every component is computed from the R*(K) model (route 1) and verified
    against the shifted reduced simplicial cohomology of the full subcomplex
    (route 2, Hochster).
    """

    def __init__(self, K: SimplicialComplex, coeffs: str = "Z"):
        if coeffs not in ("Z", "Z2"):
            raise ValueError("coeffs must be 'Z' or 'Z2'")
        self.K = K
        self.coeffs = coeffs
        self._components: dict[int, Component] = {}
        self._complete = False

    # -- component computation ------------------------------------------------

    def component(self, J) -> Component:
        jmask = J if isinstance(J, int) else sum(1 << (v - 1) for v in J)
        comp = self._components.get(jmask)
        if comp is None:
            comp = self._compute(jmask)
            self._components[jmask] = comp
        return comp

    def _compute(self, jmask: int) -> Component:
        K = self.K
        basis = r_basis(K, jmask)
        size = _popcount(jmask)
        mats = {p: r_differential(K, jmask, p) for p in range(size + 1)}
        pieces = {}
        for p, lvl in basis.items():
            d_out = mats.get(p, [])
            d_in_rows = mats.get(p - 1, [])
            n_prev = len(basis.get(p - 1, []))
            d_in_cols = (
                [[d_in_rows[r][c] for r in range(len(lvl))] for c in range(n_prev)]
                if n_prev
                else []
            )
            if self.coeffs == "Z":
                piece = _PieceZ(lvl, d_in_cols, d_out if d_out and d_out[0] else [])
            else:
                n = len(lvl)
                hi = basis.get(p + 1, [])
                out_cols = [0] * n
                if d_out and d_out[0]:
                    for c in range(n):
                        bits = 0
                        for r in range(len(hi)):
                            if d_out[r][c] % 2:
                                bits |= 1 << r
                        out_cols[c] = bits
                in_cols = []
                for col in d_in_cols:
                    bits = 0
                    for i, a in enumerate(col):
                        if a % 2:
                            bits |= 1 << i
                    in_cols.append(bits)
                piece = _PieceZ2(lvl, in_cols, out_cols)
            pieces[p] = piece  # zero pieces kept: projections still need them
        comp = Component(jmask, pieces)
        self._crosscheck(jmask, comp)
        return comp

    def _crosscheck(self, jmask: int, comp: Component) -> None:
        sub = full_subcomplex(self.K, _vertices_of(jmask))
        h = reduced_cohomology(sub, self.coeffs)
        size = _popcount(jmask)
        for p in range(size + 1):
            want_rank = h.rank(p - 1)
            want_tors = h.torsion_at(p - 1)
            if comp.rank(p) != want_rank or comp.torsion(p) != want_tors:
                raise InternalMismatch(
                    f"multidegree {_vertices_of(jmask)} level {p}: "
                    f"model gives ({comp.rank(p)}, {comp.torsion(p)}), "
                    f"subcomplex gives ({want_rank}, {want_tors})"
                )

    def compute_all(self) -> "MultigradedCohomology":
        if self._complete:
            return self
        m = self.K.m
        if m > _MAX_VERTICES_FULL:
            raise SizeGuard(f"full cohomology over {m} vertices exceeds the guard")
        total = 0
        for jmask in range(1 << m):
            comp = self.component(jmask)
            total += sum(p.rank + len(p.torsion) for p in comp.pieces.values())
            if total > _MAX_TOTAL_DIM:
                raise SizeGuard("total cohomology dimension exceeds the guard")
        self._complete = True
        return self

    # -- global views ----------------------------------------------------------

    def betti(self) -> dict[int, int]:
        self.compute_all()
        out = {}
        for jmask, comp in self._components.items():
            size = _popcount(jmask)
            for p, piece in comp.pieces.items():
                if piece.rank:
                    out[size + p] = out.get(size + p, 0) + piece.rank
        return dict(sorted(out.items()))

    def total_dim(self) -> int:
        """Total free rank (= dimension over the field for Z2, over Q for Z)."""
        self.compute_all()
        return sum(
            p.rank for comp in self._components.values() for p in comp.pieces.values()
        )

    def basis_classes(self):
        """Iterate (jmask, p, index) over the free basis, deterministic order."""
        self.compute_all()
        for jmask in sorted(self._components):
            comp = self._components[jmask]
            for p in sorted(comp.pieces):
                for i in range(comp.pieces[p].rank):
                    yield (jmask, p, i)

    def torsion_summary(self) -> dict[int, list[int]]:
        self.compute_all()
        out = {}
        for jmask, comp in self._components.items():
            size = _popcount(jmask)
            for p, piece in comp.pieces.items():
                if piece.torsion:
                    out.setdefault(size + p, []).extend(piece.torsion)
        return out

    # -- classes ---------------------------------------------------------------

    def class_element(self, J, p: int, index: int = 0) -> "RingElement":
        jmask = J if isinstance(J, int) else sum(1 << (v - 1) for v in J)
        comp = self.component(jmask)
        if comp.rank(p) <= index:
            raise IndexError("no such basis class")
        return RingElement(self, {(jmask, p, index): 1})

    def unit(self) -> "RingElement":
        return self.class_element(0, 0, 0)

    def from_chain(self, J, chain) -> "RingElement":
        """Class of a cocycle; chain maps face tuples (or masks) to coeffs."""
        jmask = J if isinstance(J, int) else sum(1 << (v - 1) for v in J)
        norm = {}
        for key, c in chain.items():
            L = key if isinstance(key, int) else sum(1 << (v - 1) for v in key)
            norm[L] = norm.get(L, 0) + c
        p = None
        for L in norm:
            lp = _popcount(L)
            if p is None:
                p = lp
            elif p != lp:
                raise ValueError("chain mixes levels")
        comp = self.component(jmask)
        piece = comp.pieces.get(p)
        if piece is None:
            raise ValueError("no such component level")
        if self.coeffs == "Z":
            free, tors = piece.project(_piece_vector(piece.basis, norm))
        else:
            free, tors = piece.project(_piece_bitvector(piece.basis, norm))
        if any(tors):
            raise ValueError("chain represents a torsion class; not a basis combination")
        terms = {(jmask, p, i): c for i, c in enumerate(free) if c}
        return RingElement(self, terms)

    def h3_class(self, i: int, j: int) -> "RingElement":
        if self.K.has_face((i, j)):
            raise ValueError(f"facets {i},{j} are adjacent; u{i}v{j} is not a cocycle")
        return self.from_chain((i, j), {(j,): 1})


class RingElement:
    """Element of H*(Z_K) in the chosen cohomology basis."""

    __slots__ = ("cohom", "terms")

    def __init__(self, cohom: MultigradedCohomology, terms: dict):
        if cohom.coeffs == "Z2":
            terms = {k: c % 2 for k, c in terms.items()}
        self.cohom = cohom
        self.terms = {k: c for k, c in terms.items() if c}

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {_popcount(jm) + p for (jm, p, _) in self.terms}

    def __add__(self, other):
        if other.cohom is not self.cohom:
            raise ValueError("elements live over different rings")
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return RingElement(self.cohom, out)

    def __neg__(self):
        return RingElement(self.cohom, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, scalar: int):
        return RingElement(self.cohom, {k: scalar * c for k, c in self.terms.items()})

    def __eq__(self, other):
        return (
            isinstance(other, RingElement)
            and self.cohom is other.cohom
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def chains(self) -> dict[tuple[int, int], dict[int, int]]:
        """Representative cocycles, one chain per (multidegree, level)."""
        out = {}
        for (jm, p, i), c in self.terms.items():
            piece = self.cohom.component(jm).pieces[p]
            chain = out.setdefault((jm, p), {})
            rep = piece.reps[i]
            if self.cohom.coeffs == "Z":
                for pos, a in enumerate(rep):
                    if a:
                        L = piece.basis[pos]
                        chain[L] = chain.get(L, 0) + c * a
            else:
                for pos in _bits(rep):
                    L = piece.basis[pos]
                    chain[L] = (chain.get(L, 0) + c) % 2
        return out

    def monomials(self) -> list[tuple[int, KoszulMonomial]]:
        out = []
        for (jm, p), chain in self.chains().items():
            for L, c in sorted(chain.items()):
                if c:
                    out.append(
                        (c, KoszulMonomial(J=_vertices_of(jm & ~L), I=_vertices_of(L)))
                    )
        return out


def cup_product(a: RingElement, b: RingElement) -> RingElement:
    """Product in H*(Z_K): monomial-wise in R*(K), then re-expressed in the
    cohomology basis; components with overlapping multidegrees vanish."""
    if a.cohom is not b.cohom:
        raise ValueError("BasisMismatch: elements over different cohomologies")
    cohom = a.cohom
    K = cohom.K
    target_chains: dict[tuple[int, int], dict[int, int]] = {}
    a_chains = a.chains()
    b_chains = b.chains()
    for (jm1, p1), ch1 in a_chains.items():
        for (jm2, p2), ch2 in b_chains.items():
            if jm1 & jm2:
                continue
            target = target_chains.setdefault((jm1 | jm2, p1 + p2), {})
            for L1, c1 in ch1.items():
                e1 = jm1 & ~L1
                for L2, c2 in ch2.items():
                    I = L1 | L2
                    if not K.has_face(I):
                        continue
                    e2 = jm2 & ~L2
                    s = _merge_sign(e1, e2)
                    # moving v_{L1} past u_{e2}: v's are even, no sign
                    target[I] = target.get(I, 0) + s * c1 * c2
    terms = {}
    for (jm, p), chain in target_chains.items():
        chain = {L: c for L, c in chain.items() if c}
        if not chain:
            continue
        piece = cohom.component(jm).pieces.get(p)
        if piece is None or (piece.rank == 0 and not piece.torsion):
            continue
        if cohom.coeffs == "Z":
            free, tors = piece.project(_piece_vector(piece.basis, chain))
        else:
            free, tors = piece.project(_piece_bitvector(piece.basis, chain))
        if any(tors):
            raise InternalMismatch("product landed on a torsion class; unsupported basis")
        for i, c in enumerate(free):
            if c:
                terms[(jm, p, i)] = terms.get((jm, p, i), 0) + c
    return RingElement(cohom, terms)


def betti_numbers(K: SimplicialComplex, coeffs: str = "Z") -> dict[int, int]:
    return MultigradedCohomology(K, coeffs).betti()


def cohomology(K: SimplicialComplex, coeffs: str = "Z") -> MultigradedCohomology:
    """Full multigraded cohomology of Z_K (guarded; see MultigradedCohomology)."""
    return MultigradedCohomology(K, coeffs).compute_all()


def h3_basis(K: SimplicialComplex) -> list[tuple[int, int]]:
    """Pairs {i,j} not in K; the classes [u_i v_j] freely generate H^3(Z_K)."""
    adj = K.adjacency()
    out = []
    for i in range(1, K.m + 1):
        for j in range(i + 1, K.m + 1):
            if not adj[i] >> (j - 1) & 1:
                out.append((i, j))
    return out


def h3_square_trivial(P: SimplePolytope, cohom: MultigradedCohomology | None = None) -> bool:
    """True iff every product of two H^3 classes vanishes; by the 4-belt
    criterion this happens exactly when P has no 4-belt."""
    K = dual_complex(P)
    if cohom is None:
        cohom = MultigradedCohomology(K, "Z")
    pairs = h3_basis(K)
    classes = {pr: cohom.h3_class(*pr) for pr in pairs}
    for pr1, pr2 in itertools.combinations(pairs, 2):
        if set(pr1) & set(pr2):
            continue  # overlapping multidegrees multiply to zero
        if not cup_product(classes[pr1], classes[pr2]).is_zero():
            return False
    return True


def decomposability_report(
    P: SimplePolytope,
    coeffs: str = "q",
    degrees=None,
    levels=None,
    cohom: MultigradedCohomology | None = None,
) -> dict[int, int]:
    """For each total degree, the dimension of the cokernel of the product
    map from lower degrees (over the field Q or Z2).

    degrees: optional iterable restricting the reported total degrees.
    levels: optional iterable of component levels p (p-1 = reduced degree of
    the full subcomplex); levels (2, 3) restrict the report to the H~1 and
    top parts, which is where full decomposability is expected for flag
    polytopes.
    """
    if coeffs not in ("q", "z2"):
        raise ValueError("coeffs must be 'q' or 'z2'")
    K = dual_complex(P)
    if cohom is None:
        cohom = MultigradedCohomology(K, "Z" if coeffs == "q" else "Z2")
    cohom.compute_all()
    wanted = set(degrees) if degrees is not None else None
    level_set = set(levels) if levels is not None else None
    report: dict[int, int] = {}
    cache: dict[int, Component] = cohom._components
    for jmask in sorted(cache):
        comp = cache[jmask]
        size = _popcount(jmask)
        if size == 0:
            continue
        for p, piece in comp.pieces.items():
            if piece.rank == 0:
                continue
            if level_set is not None and p not in level_set:
                continue
            ell = size + p
            if wanted is not None and ell not in wanted:
                continue
            # span of products of positive-degree classes landing here
            vectors = []
            anchor = 1 << next(_bits(jmask))
            for sub in _submasks(jmask):
                if sub == 0 or sub == jmask or not sub & anchor:
                    continue
                rest = jmask & ~sub
                c1 = cache[sub]
                c2 = cache[rest]
                for p1, pc1 in c1.pieces.items():
                    p2 = p - p1
                    pc2 = c2.pieces.get(p2)
                    if pc2 is None or pc1.rank == 0 or pc2.rank == 0:
                        continue
                    for i1 in range(pc1.rank):
                        e1 = RingElement(cohom, {(sub, p1, i1): 1})
                        for i2 in range(pc2.rank):
                            e2 = RingElement(cohom, {(rest, p2, i2): 1})
                            prod = cup_product(e1, e2)
                            vec = [0] * piece.rank
                            for (jm, pp, idx), c in prod.terms.items():
                                if jm == jmask and pp == p:
                                    vec[idx] = c
                            if any(vec):
                                vectors.append(vec)
            if coeffs == "q":
                span = rank_z(vectors) if vectors else 0
            else:
                rows = []
                for vec in vectors:
                    bits = 0
                    for i, c in enumerate(vec):
                        if c % 2:
                            bits |= 1 << i
                    rows.append(bits)
                span = gf2_rank(rows)
            coker = piece.rank - span
            if coker:
                report[ell] = report.get(ell, 0) + coker
    if wanted is not None:
        for ell in wanted:
            report.setdefault(ell, 0)
    return dict(sorted(report.items()))


def _submasks(mask: int):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def annihilator_dim(
    P: SimplePolytope,
    x: RingElement,
    coeffs: str = "z2",
    cohom: MultigradedCohomology | None = None,
) -> int:
    """Dimension over the field of {y : x*y = 0} in the total cohomology.

    Works multidegree-by-multidegree: multiplication by x maps the component
    of J into the components J | D for the multidegrees D of the terms of x,
    so the rank of the multiplication map is a sum of small block ranks.
    """
    if coeffs not in ("q", "z2"):
        raise ValueError("coeffs must be 'q' or 'z2'")
    if cohom is None:
        cohom = MultigradedCohomology(
            dual_complex(P), "Z" if coeffs == "q" else "Z2"
        ).compute_all()
    else:
        cohom.compute_all()
    if x.cohom is not cohom:
        raise ValueError("BasisMismatch: element over a different cohomology")
    total = cohom.total_dim()
    if x.is_zero():
        return total
    # columns of the multiplication map, grouped by source class
    columns = {}  # (jmask,p,i) -> dict (target jmask, p, idx) -> coeff
    for (jm, p, i) in cohom.basis_classes():
        y = RingElement(cohom, {(jm, p, i): 1})
        prod = cup_product(x, y)
        if not prod.is_zero():
            columns[(jm, p, i)] = prod.terms
    # connected blocks: sources sharing any target row must be ranked together
    parent = {}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for src, tgts in columns.items():
        parent.setdefault(("s", src), ("s", src))
        for tgt in tgts:
            key = ("t", tgt)
            parent.setdefault(key, key)
            union(("s", src), key)
    groups = {}
    for src, tgts in columns.items():
        groups.setdefault(find(("s", src)), []).append((src, tgts))
    rank_total = 0
    for group in groups.values():
        rows = sorted({t for _, tgts in group for t in tgts})
        row_idx = {t: i for i, t in enumerate(rows)}
        if coeffs == "z2":
            cols = []
            for _, tgts in group:
                bits = 0
                for t, c in tgts.items():
                    if c % 2:
                        bits |= 1 << row_idx[t]
                cols.append(bits)
            rank_total += gf2_rank(cols)
        else:
            mat = [[0] * len(group) for _ in rows]
            for cidx, (_, tgts) in enumerate(group):
                for t, c in tgts.items():
                    mat[row_idx[t]][cidx] = c
            rank_total += rank_z(mat)
    return total - rank_total
