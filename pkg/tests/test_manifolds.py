import itertools
import random

import pytest

from pogorelov.characteristic import (
    CharMatrix,
    NotCharacteristic,
    colouring_to_matrix,
    enumerate_colourings,
)
from pogorelov.manifolds import (
    IsoDecision,
    ModeUnsupported,
    pontryagin_w,
    qt_ring,
    ring_isomorphic,
    sc_isomorphic,
    sc_ring,
    witness_preserves_p1,
)
from pogorelov.polytope import catalog, polygon

SIMPLEX = catalog("simplex")
CP3_MATRIX = CharMatrix(n=3, rows=((1, 0, 0, -1), (0, 1, 0, -1), (0, 0, 1, -1)))


def _hirzebruch(k: int) -> CharMatrix:
    return CharMatrix(n=2, rows=((1, 0, -1, k), (0, 1, 0, -1)))


def _cube_matrix() -> CharMatrix:
    # opposite facet pairs of the catalog cube are (1,2), (3,5), (4,6)
    rows = [[0] * 6 for _ in range(3)]
    for t, (a, b) in enumerate([(1, 2), (3, 5), (4, 6)]):
        rows[t][a - 1] = 1
        rows[t][b - 1] = -1
    return CharMatrix(n=3, rows=tuple(tuple(r) for r in rows))


def _random_valid_polygon_matrix(m, rng, tries=500):
    """Random 2 x m characteristic matrix over the m-gon."""
    for _ in range(tries):
        cols = [(1, 0)]
        ok = True
        for _ in range(m - 1):
            a = cols[-1]
            # b with det(a, b) = +-1: perturb a unimodular completion
            b0 = (-a[1], a[0])
            t = rng.randint(-2, 2)
            s = rng.choice((1, -1))
            b = (s * b0[0] + t * a[0], s * b0[1] + t * a[1])
            cols.append(b)
        d = cols[-1][0] * cols[0][1] - cols[-1][1] * cols[0][0]
        if d not in (1, -1):
            continue
        return CharMatrix(n=2, rows=(tuple(c[0] for c in cols), tuple(c[1] for c in cols)))
    raise RuntimeError("no matrix found")


def test_cp3_ring():
    R = qt_ring(SIMPLEX, CP3_MATRIX)
    for vert in SIMPLEX.vertex_tuples:
        assert R.evaluate(*vert) in (1, -1)
    assert R.evaluate(*R.base_vertex) == 1


def test_cp3_p1():
    R = qt_ring(SIMPLEX, CP3_MATRIX)
    p1, w2 = pontryagin_w(R)
    # all generators equal; p1 = 4 x^2 pairs to 4 with the degree-2 generator
    assert set(p1.values()) == {4}


def test_cube_opposite_facets_multiply_to_zero():
    R = qt_ring(catalog("cube"), _cube_matrix())
    for x in range(3, 7):
        assert R.evaluate(1, 2, x) == 0
    assert R.evaluate(1, 3, 4) in (1, -1)


def test_omniorientation_sign_flip():
    # flipping the sign of one column flips every evaluation containing it once
    R = qt_ring(catalog("cube"), _cube_matrix())
    rows = [list(r) for r in _cube_matrix().rows]
    for r in range(3):
        rows[r][0] = -rows[r][0]
    R2 = qt_ring(catalog("cube"), CharMatrix(n=3, rows=tuple(tuple(r) for r in rows)))
    for mono in R.evaluation_table():
        parity = mono.count(1) % 2
        want = -R.evaluate(*mono) if parity else R.evaluate(*mono)
        got = R2.evaluate(*mono)
        # both tables are normalized at the (possibly re-signed) base vertex
        base_parity = R.base_vertex.count(1) % 2
        if base_parity:
            want = -want
        assert got == want


def test_linear_relations_annihilate_evaluations():
    # rows of the characteristic matrix give identically-zero functionals
    for P, L in (
        (SIMPLEX, CP3_MATRIX),
        (catalog("cube"), _cube_matrix()),
        (polygon(5), _random_valid_polygon_matrix(5, random.Random(2))),
    ):
        R = qt_ring(P, L)
        n = P.n
        for row in L.rows:
            if n == 3:
                for a, b in itertools.combinations_with_replacement(range(1, P.m + 1), 2):
                    total = sum(
                        row[i - 1] * R.evaluate(i, a, b) for i in range(1, P.m + 1)
                    )
                    assert total == 0
            else:
                for a in range(1, P.m + 1):
                    total = sum(
                        row[i - 1] * R.evaluate(i, a) for i in range(1, P.m + 1)
                    )
                    assert total == 0


def test_hirzebruch_evaluation_table():
    R = qt_ring(polygon(4), _hirzebruch(2))
    table = R.evaluation_table()
    assert table[(1, 2)] == table[(2, 3)] == table[(3, 4)] == table[(1, 4)] == 1
    assert table[(1, 3)] == table[(2, 4)] == 0
    assert table[(3, 3)] == 2 and table[(1, 1)] == -2
    assert table[(2, 2)] == table[(4, 4)] == 0


def test_signature_identity_polygons():
    rng = random.Random(77)
    for m in range(4, 9):
        for _ in range(5):
            L = _random_valid_polygon_matrix(m, rng)
            R = qt_ring(polygon(m), L)
            p1, _ = pontryagin_w(R)
            assert p1 == 12 - 3 * m


def test_sc_ring_z2_data():
    D = catalog("dodecahedron")
    L2 = colouring_to_matrix(enumerate_colourings(D)[0]).reduce_mod2()
    N = sc_ring(D, L2)
    assert N.ring == "Z2"
    for vert in D.vertex_tuples:
        assert N.evaluate(*vert) == 1
    # disjoint facets multiply to zero
    assert N.evaluate(1, 2, 3) == 0


def test_sc_ring_rp3():
    L2 = CharMatrix(n=3, rows=((1, 0, 0, 1), (0, 1, 0, 1), (0, 0, 1, 1)), ring="Z2")
    N = sc_ring(SIMPLEX, L2)
    assert all(N.evaluate(*v) == 1 for v in SIMPLEX.vertex_tuples)


def test_qt_ring_rejects_non_characteristic():
    bad = CharMatrix(n=3, rows=((1, 0, 0, 1), (0, 1, 0, 1), (0, 0, 1, 1)))
    with pytest.raises(NotCharacteristic):
        qt_ring(SIMPLEX, bad)


def test_ring_isomorphic_same_colouring_class():
    Q5 = catalog("barrel", 5)
    chis = enumerate_colourings(Q5)
    rng = random.Random(12)
    chi = chis[0]
    perm = rng.sample((1, 2, 3, 4), 4)
    chi2 = tuple(perm[c - 1] for c in chi)
    R1 = qt_ring(Q5, colouring_to_matrix(chi))
    R2 = qt_ring(Q5, colouring_to_matrix(chi2))
    for mode in ("pair-equivalence", "generator-restricted"):
        d = ring_isomorphic(R1, R2, mode)
        assert d.isomorphic and d.sound_negative
        assert witness_preserves_p1(R1, R2, d.witness)


def test_ring_isomorphic_modes_agree_on_hirzebruch():
    # non-Pogorelov base: both modes return a (non-definitive) negative
    R2 = qt_ring(polygon(4), _hirzebruch(2))
    R4 = qt_ring(polygon(4), _hirzebruch(4))
    d_pair = ring_isomorphic(R2, R4, "pair-equivalence")
    d_gen = ring_isomorphic(R2, R4, "generator-restricted")
    assert not d_pair.isomorphic and not d_gen.isomorphic
    assert not d_pair.sound_negative and not d_gen.sound_negative


def test_ring_isomorphic_mixed_dimensions():
    R1 = qt_ring(polygon(4), _hirzebruch(2))
    R2 = qt_ring(SIMPLEX, CP3_MATRIX)
    with pytest.raises(ModeUnsupported):
        ring_isomorphic(R1, R2)


def test_generators_pairwise_distinct_pogorelov():
    # |D(M)| = 2m: no generator equals another up to sign in H^2
    D = catalog("dodecahedron")
    R = qt_ring(D, colouring_to_matrix(enumerate_colourings(D)[0]))
    exprs = [R.expressions[i] for i in range(1, 13)]
    for a, b in itertools.combinations(range(12), 2):
        assert exprs[a] != exprs[b]
        assert exprs[a] != tuple(-x for x in exprs[b])


def test_sc_isomorphic_relabeled():
    D = catalog("dodecahedron")
    L2 = colouring_to_matrix(enumerate_colourings(D)[0]).reduce_mod2()
    N1 = sc_ring(D, L2)
    rng = random.Random(6)
    perm = list(range(1, 13))
    rng.shuffle(perm)
    sigma = {i: perm[i - 1] for i in range(1, 13)}
    D2 = D.relabel(sigma)
    cols = [None] * 12
    for i in range(1, 13):
        cols[sigma[i] - 1] = L2.column(i)
    M2 = CharMatrix(
        n=3, rows=tuple(tuple(cols[j][r] for j in range(12)) for r in range(3)),
        ring="Z2",
    )
    N2 = sc_ring(D2, M2)
    decision = sc_isomorphic(N1, N2)
    assert decision.isomorphic
    assert isinstance(decision, IsoDecision)


def test_sc_isomorphic_distinct_classes_barrel6():
    from pogorelov.characteristic import _colour_canonical

    Q6 = catalog("barrel", 6)
    autos = list(Q6.isomorphisms_to(Q6))
    reps = {}
    for chi in enumerate_colourings(Q6):
        reps.setdefault(_colour_canonical(chi, autos), chi)
    classes = list(reps.values())
    rings = [sc_ring(Q6, colouring_to_matrix(chi).reduce_mod2()) for chi in classes]
    for a, b in itertools.combinations(range(4), 2):
        for mode in ("pair-equivalence", "generator-restricted"):
            assert not sc_isomorphic(rings[a], rings[b], mode).isomorphic
    assert sc_isomorphic(rings[0], rings[0]).isomorphic
