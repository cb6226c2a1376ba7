"""Cohomology rings of quasitoric manifolds (n = 3, and n = 2 over polygons)
and small covers, plus the ring-isomorphism decisions.

A ring is presented by evaluation data: the value of every product of n
degree-two generator classes against the fundamental class, computed exactly
in the quotient ring Z[v_1..v_m]/I by integer normal form.  The orientation
convention is that the lexicographically least vertex evaluates to +1.
Products with repeated generators are part of the data, so a match of two
presentations under a facet bijection and sign pattern is exactly a ring
isomorphism sending generators to signed generators.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ._intlinalg import ZQuotient
from .belts import is_pogorelov
from .characteristic import (
    CharMatrix,
    NotCharacteristic,
    PairEquivalence,
    is_characteristic,
    lift_mod2,
    pairs_equivalent,
    _mat_inverse_unimodular,
)
from .polytope import InvariantViolation, Polygon, SimplePolytope


class ModeUnsupported(ValueError):
    pass


def _face_supported_monomials(P, n):
    """Degree-n monomials (as sorted index multisets) whose support is a face."""
    out = []
    for i in range(1, P.m + 1):
        out.append((i,) * n)
    if n == 2:
        for i, j in itertools.combinations(range(1, P.m + 1), 2):
            if P.adjacent(i, j):
                out.append((i, j))
    else:
        for i, j in itertools.combinations(range(1, P.m + 1), 2):
            if P.adjacent(i, j):
                out.append((i, i, j))
                out.append((i, j, j))
        for vert in P.vertex_tuples:
            out.append(tuple(sorted(vert)))
    out.sort()
    return out


def _support_is_face(P, mono) -> bool:
    supp = tuple(sorted(set(mono)))
    if len(supp) == 1:
        return True
    if len(supp) == 2:
        return P.adjacent(*supp)
    return frozenset(supp) in {frozenset(v) for v in P.vertex_tuples}


class _TopForm:
    """The functional H^(2n) = Z (or Z2): value of each degree-n monomial."""

    def __init__(self, P, L: CharMatrix):
        n = P.n
        monos = _face_supported_monomials(P, n)
        index = {mo: i for i, mo in enumerate(monos)}
        vert_set = {frozenset(v) for v in P.vertex_tuples}
        relations = []
        if n == 2:
            lower = [(i,) for i in range(1, P.m + 1)]
        else:
            lower = [(i, i) for i in range(1, P.m + 1)] + [
                (i, j)
                for i, j in itertools.combinations(range(1, P.m + 1), 2)
                if P.adjacent(i, j)
            ]
        for row in L.rows:
            for T in lower:
                rel = [0] * len(monos)
                touched = False
                for i in range(1, P.m + 1):
                    c = row[i - 1]
                    if not c:
                        continue
                    mono = tuple(sorted(T + (i,)))
                    pos = index.get(mono)
                    if pos is not None:
                        rel[pos] += c
                        touched = True
                if touched and any(rel):
                    relations.append(rel)
        if L.ring == "Z":
            quo = ZQuotient(len(monos), relations)
            if quo.rank != 1 or quo.torsion:
                raise NotCharacteristic(
                    "top cohomology is not infinite cyclic; matrix is not characteristic"
                )
            base = min(P.vertex_tuples)
            raw = {mo: quo.coords([int(x == mo) for x in monos])[0][0] for mo in monos}
            unit = raw[tuple(sorted(base))]
            if unit not in (1, -1):
                raise InvariantViolation("base vertex does not generate the top group")
            self.value = {mo: unit * v for mo, v in raw.items()}
        else:
            # GF(2): quotient by the span of the relations
            rows_bits = []
            for rel in relations:
                bits = 0
                for i, a in enumerate(rel):
                    if a % 2:
                        bits |= 1 << i
                rows_bits.append(bits)
            pivots = {}
            for v in rows_bits:
                while v:
                    b = v.bit_length() - 1
                    if b in pivots:
                        v ^= pivots[b]
                    else:
                        pivots[b] = v
                        break
            if len(monos) - len(pivots) != 1:
                raise NotCharacteristic(
                    "Z2 top cohomology does not have dimension 1"
                )
            self.value = {}
            for pos, mo in enumerate(monos):
                v = 1 << pos
                while v:
                    b = v.bit_length() - 1
                    if b not in pivots:
                        break
                    v ^= pivots[b]
                self.value[mo] = 1 if v else 0
            base = tuple(sorted(min(P.vertex_tuples)))
            if self.value[base] != 1:
                raise InvariantViolation("base vertex vanishes in Z2 top cohomology")
        for vert in P.vertex_tuples:
            mo = tuple(sorted(vert))
            val = self.value[mo]
            good = val in (1, -1) if L.ring == "Z" else val == 1
            if not good:
                raise InvariantViolation(f"vertex {vert} does not evaluate to a unit")

    def __call__(self, mono) -> int:
        mono = tuple(sorted(mono))
        return self.value.get(mono, 0)


def _oriented_det_sign(P, L: CharMatrix, vert) -> int:
    """det of the columns in the positive cyclic order of the vertex."""
    from .characteristic import _det

    order = P.oriented_vertex(vert)
    return _det([L.column(i) for i in order])


@dataclass
class QTRingPresentation:
    """Evaluation-table presentation of H*(M(P, L)); see the module docstring."""

    P: object
    L: CharMatrix
    base_vertex: tuple
    basis_facets: tuple
    expressions: dict  # facet -> vector over basis_facets
    top: _TopForm = field(repr=False)

    @property
    def n(self) -> int:
        return self.P.n

    @property
    def m(self) -> int:
        return self.P.m

    @property
    def ring(self) -> str:
        return self.L.ring

    def evaluate(self, *facets) -> int:
        """<v_{i_1} ... v_{i_n}, [M]> for any multiset of n facet indices."""
        if len(facets) != self.n:
            raise ValueError(f"expected {self.n} factors")
        return self.top(tuple(sorted(facets)))

    def evaluation_table(self) -> dict:
        return dict(self.top.value)

    def p1_pairing(self):
        """n = 3: the functional a -> <p_1 v_a, [M]>; n = 2: <p_1, [M]>."""
        if self.n == 2:
            return sum(self.top((i, i)) for i in range(1, self.m + 1))
        return {
            a: sum(self.top(tuple(sorted((i, i, a)))) for i in range(1, self.m + 1))
            for a in range(1, self.m + 1)
        }

    def w2_vector(self) -> tuple:
        """Sum of all v_i expressed over the basis facets, mod 2."""
        total = [0] * len(self.basis_facets)
        for i in range(1, self.m + 1):
            for t, c in enumerate(self.expressions[i]):
                total[t] = (total[t] + c) % 2
        return tuple(total)


class SmallCoverRing(QTRingPresentation):
    """Z2-coefficient presentation of H*(N(P, L)); same combinatorial data as
    the quasitoric ring with the grading halved (deg v_i = 1)."""


def _expressions(P, L: CharMatrix):
    n = P.n
    base = tuple(sorted(min(P.vertex_tuples)))
    basis = tuple(i for i in range(1, P.m + 1) if i not in base)
    base_cols = [L.column(i) for i in base]
    if L.ring == "Z":
        inv = _mat_inverse_unimodular(base_cols)
        if inv is None:
            raise NotCharacteristic("base vertex minor is not unimodular")
    else:
        from .characteristic import _gf2_inverse

        inv = _gf2_inverse(base_cols)
        if inv is None:
            raise NotCharacteristic("base vertex minor is singular mod 2")
    exprs = {}
    for t, i in enumerate(basis):
        vec = [0] * len(basis)
        vec[t] = 1
        exprs[i] = tuple(vec)
    # rows of L give sum_i L[r][i] v_i = 0; solving for the base classes:
    # v_base = -inv * L_rest * v_rest
    for s, b in enumerate(base):
        vec = []
        for t, i in enumerate(basis):
            col = L.column(i)
            val = -sum(inv[s][r] * col[r] for r in range(n))
            vec.append(val % 2 if L.ring == "Z2" else val)
        exprs[b] = tuple(vec)
    return base, basis, exprs


def qt_ring(P, L: CharMatrix) -> QTRingPresentation:
    """Cohomology ring of the quasitoric manifold M(P, L) as evaluation data."""
    if L.ring != "Z":
        raise ValueError("qt_ring expects an integer matrix; use sc_ring for Z2")
    ok, vert = is_characteristic(P, L)
    if not ok:
        raise NotCharacteristic(f"matrix fails the vertex condition at {vert}")
    base, basis, exprs = _expressions(P, L)
    ring = QTRingPresentation(
        P=P, L=L, base_vertex=base, basis_facets=basis, expressions=exprs,
        top=_TopForm(P, L),
    )
    _check_evaluations(ring)
    return ring


def sc_ring(P, L2: CharMatrix) -> SmallCoverRing:
    """Z2 cohomology ring of the small cover N(P, L2)."""
    if L2.ring != "Z2":
        raise ValueError("sc_ring expects a Z2 matrix")
    ok, vert = is_characteristic(P, L2)
    if not ok:
        raise NotCharacteristic(f"matrix fails the vertex condition at {vert}")
    base, basis, exprs = _expressions(P, L2)
    return SmallCoverRing(
        P=P, L=L2, base_vertex=base, basis_facets=basis, expressions=exprs,
        top=_TopForm(P, L2),
    )


def _check_evaluations(ring: QTRingPresentation) -> None:
    """Distinct n-tuples evaluate to 0 off vertices and to the oriented
    determinant sign at vertices (relative to the base normalization)."""
    P, L = ring.P, ring.L
    if L.ring != "Z":
        return
    c0 = _oriented_det_sign(P, L, ring.base_vertex)
    for vert in P.vertex_tuples:
        want = _oriented_det_sign(P, L, vert) * c0
        got = ring.evaluate(*vert)
        if got != want:
            raise InvariantViolation(
                f"evaluation at {vert} is {got}, oriented determinant gives {want}"
            )


@dataclass(frozen=True)
class GeneratorWitness:
    """Ring isomorphism v_i -> eps_i v'_sigma(i) with top classes matched by
    the global sign delta."""

    sigma: dict
    eps: tuple
    delta: int


@dataclass(frozen=True)
class IsoDecision:
    isomorphic: bool
    mode: str
    witness: object = None
    sound_negative: bool = True
    note: str = ""


def _eval_match_witness(R1: QTRingPresentation, R2: QTRingPresentation, sigma):
    """Signs eps and delta matching the full evaluation data under sigma, or
    None.  Linear system over GF(2) on the sign bits."""
    m = R1.m
    monos = _face_supported_monomials(R1.P, R1.n)
    rows = []  # (bitmask over x_1..x_m, d, rhs)
    for mo in monos:
        v1 = R1.top(mo)
        target = tuple(sorted(sigma[i] for i in mo))
        v2 = R2.top(target)
        if R1.ring == "Z2":
            if (v1 - v2) % 2:
                return None
            continue
        if abs(v1) != abs(v2):
            return None
        if v1 == 0:
            continue
        bits = 0
        for i in set(mo):
            if mo.count(i) % 2:
                bits |= 1 << (i - 1)
        rhs = 0 if v1 == v2 else 1
        rows.append((bits, 1, rhs))
    if R1.ring == "Z2":
        return GeneratorWitness(sigma=dict(sigma), eps=(1,) * m, delta=1)
    # solve the GF(2) system: x-bits plus the delta bit
    pivots = {}
    for bits, dbit, rhs in rows:
        v = bits | (dbit << m) | (rhs << (m + 1))
        while v & ((1 << (m + 1)) - 1):
            b = (v & ((1 << (m + 1)) - 1)).bit_length() - 1
            if b in pivots:
                v ^= pivots[b]
            else:
                pivots[b] = v
                break
        else:
            if v:  # 0 = 1: inconsistent
                return None
    # pivot rows have their key as the top variable bit, so lower bits are
    # either earlier pivots or free variables (taken as 0): solve ascending
    x = [0] * (m + 1)
    for b in sorted(pivots):
        v = pivots[b]
        acc = v >> (m + 1) & 1
        for c in range(b):
            if v >> c & 1:
                acc ^= x[c]
        x[b] = acc
    eps = tuple(-1 if x[i - 1] else 1 for i in range(1, m + 1))
    delta = -1 if x[m] else 1
    # defensive re-check of every monomial
    for mo in monos:
        v1 = R1.top(mo)
        target = tuple(sorted(sigma[i] for i in mo))
        sign = delta
        for i in mo:
            sign *= eps[i - 1]
        if sign * v1 != R2.top(target):
            return None
    return GeneratorWitness(sigma=dict(sigma), eps=eps, delta=delta)


def ring_isomorphic(
    R1: QTRingPresentation, R2: QTRingPresentation, mode: str = "generator-restricted"
) -> IsoDecision:
    """Decide cohomology-ring isomorphism of two quasitoric manifolds.

    pair-equivalence mode decides equivalence of the characteristic pairs
    (Theorem 5.2 direction); generator-restricted mode searches for ring maps
    v_i -> eps_i v'_sigma(i) matching all n-fold evaluations.  A negative
    verdict decides ring isomorphism only over a Pogorelov base, where every
    ring isomorphism is generator-restricted; the sound_negative flag records
    this boundary.
    """
    if R1.n != R2.n:
        raise ModeUnsupported("mixed dimensions")
    if R1.ring != R2.ring:
        raise ModeUnsupported("mixed coefficient rings")
    sound = R1.n == 3 and isinstance(R1.P, SimplePolytope) and is_pogorelov(R1.P)
    if mode == "pair-equivalence":
        w = pairs_equivalent(R1.P, R1.L, R2.P, R2.L)
        return IsoDecision(
            isomorphic=w is not None,
            mode=mode,
            witness=w,
            sound_negative=sound,
            note="equivalence of characteristic pairs",
        )
    if mode != "generator-restricted":
        raise ModeUnsupported(f"unknown mode: {mode}")
    if R1.m == R2.m:
        for sigma in R1.P.isomorphisms_to(R2.P):
            w = _eval_match_witness(R1, R2, sigma)
            if w is not None:
                return IsoDecision(
                    isomorphic=True, mode=mode, witness=w, sound_negative=sound,
                    note="generator-restricted isomorphism found",
                )
    return IsoDecision(
        isomorphic=False, mode=mode, witness=None, sound_negative=sound,
        note="no generator-restricted isomorphism",
    )


def sc_isomorphic(
    N1: SmallCoverRing, N2: SmallCoverRing, mode: str = "pair-equivalence"
) -> IsoDecision:
    """Decide Z2-cohomology ring isomorphism of two small covers.

    Both modes reduce to equivalence of the Z2-characteristic pairs: the
    Z2 ring is the quasitoric ring with halved grading, and a generator map
    v_i -> v'_sigma(i) is a ring isomorphism exactly when some A in GL(3,Z2)
    matches the matrices, so the searches coincide.
    """
    if N1.n != N2.n:
        raise ModeUnsupported("mixed dimensions")
    sound = N1.n == 3 and isinstance(N1.P, SimplePolytope) and is_pogorelov(N1.P)
    if mode not in ("pair-equivalence", "generator-restricted"):
        raise ModeUnsupported(f"unknown mode: {mode}")
    w = pairs_equivalent(N1.P, N1.L, N2.P, N2.L)
    return IsoDecision(
        isomorphic=w is not None,
        mode=mode,
        witness=w,
        sound_negative=sound,
        note="Z2 characteristic pair equivalence",
    )


def pontryagin_w(ring: QTRingPresentation):
    """(first Pontryagin data, w_2 data): p_1 = sum v_i^2 via the evaluation
    rule (n = 2: its integer value; n = 3: the degree-2 pairing functional),
    and w_2 = sum v_i mod 2 over the basis facets."""
    return ring.p1_pairing(), ring.w2_vector()


def witness_preserves_p1(R1: QTRingPresentation, R2: QTRingPresentation, witness) -> bool:
    """Check that an isomorphism witness carries sum v_i^2 to sum v_j'^2."""
    if isinstance(witness, PairEquivalence):
        sigma = witness.sigma
        eps = witness.B
    elif isinstance(witness, GeneratorWitness):
        sigma = witness.sigma
        eps = witness.eps
    else:
        raise TypeError("unknown witness type")
    if R1.n == 2:
        return R1.p1_pairing() == R2.p1_pairing()
    # recover the top-class sign of the induced map from the base vertex
    base = R1.base_vertex
    sign = 1
    for i in base:
        sign *= eps[i - 1]
    v2 = R2.evaluate(*(sigma[i] for i in base))
    if v2 == 0:
        return False
    delta = sign * v2  # delta * phi1(base) = eps-product * phi2(sigma base)
    p1 = R1.p1_pairing()
    p2 = R2.p1_pairing()
    return all(
        delta * p1[a] == eps[a - 1] * p2[sigma[a]] for a in range(1, R1.m + 1)
    )
