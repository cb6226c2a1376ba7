"""Exact linear algebra over the integers and over GF(2).

Matrices are dense lists of rows of Python ints.  Everything here is sized
for desk-scale inputs (a few hundred rows/columns); the integer routines
prefer +-1 pivots to keep coefficient growth down.
"""

from __future__ import annotations


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


def _pick_pivot(D, k, nrows, ncols):
    # smallest nonzero |entry| in the remaining block; +-1 wins immediately
    best = None
    for i in range(k, nrows):
        row = D[i]
        for j in range(k, ncols):
            a = row[j]
            if a:
                if a == 1 or a == -1:
                    return i, j
                if best is None or abs(a) < best[0]:
                    best = (abs(a), i, j)
    if best is None:
        return None
    return best[1], best[2]


def diagonalize(A, track_left=False, track_right=False):
    """Bring a copy of A to diagonal form D = S*A*T by row/column operations.

    Returns (D, S, Sinv, T) where the tracked factors are None unless
    requested.  D is not put into divisibility-normalized Smith form; use
    invariant_factors for that.
    """
    D = [row[:] for row in A]
    nrows = len(D)
    ncols = len(D[0]) if nrows else 0
    S = [[int(i == j) for j in range(nrows)] for i in range(nrows)] if track_left else None
    Sinv = [[int(i == j) for j in range(nrows)] for i in range(nrows)] if track_left else None
    T = [[int(i == j) for j in range(ncols)] for i in range(ncols)] if track_right else None

    def row_swap(i, j):
        D[i], D[j] = D[j], D[i]
        if track_left:
            S[i], S[j] = S[j], S[i]
            for r in Sinv:
                r[i], r[j] = r[j], r[i]

    def row_add(i, j, q):
        # row i += q * row j
        Di, Dj = D[i], D[j]
        for c in range(ncols):
            Di[c] += q * Dj[c]
        if track_left:
            Si, Sj = S[i], S[j]
            for c in range(nrows):
                Si[c] += q * Sj[c]
            for r in Sinv:
                r[j] -= q * r[i]

    def row_neg(i):
        D[i] = [-x for x in D[i]]
        if track_left:
            S[i] = [-x for x in S[i]]
            for r in Sinv:
                r[i] = -r[i]

    def col_swap(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        if track_right:
            for r in T:
                r[i], r[j] = r[j], r[i]

    def col_add(i, j, q):
        # col i += q * col j
        for r in D:
            r[i] += q * r[j]
        if track_right:
            for r in T:
                r[i] += q * r[j]

    k = 0
    while True:
        piv = _pick_pivot(D, k, nrows, ncols)
        if piv is None:
            break
        pi, pj = piv
        if pi != k:
            row_swap(pi, k)
        if pj != k:
            col_swap(pj, k)
        while True:
            # clear column k with row ops
            again = False
            for i in range(k + 1, nrows):
                a, b = D[k][k], D[i][k]
                if b == 0:
                    continue
                if b % a == 0:
                    row_add(i, k, -(b // a))
                else:
                    g, x, y = xgcd(a, b)
                    # combine rows so entry (k,k) becomes g
                    rk, ri = D[k], D[i]
                    new_k = [x * rk[c] + y * ri[c] for c in range(ncols)]
                    new_i = [-(b // g) * rk[c] + (a // g) * ri[c] for c in range(ncols)]
                    D[k], D[i] = new_k, new_i
                    if track_left:
                        sk, si = S[k], S[i]
                        S[k] = [x * sk[c] + y * si[c] for c in range(nrows)]
                        S[i] = [-(b // g) * sk[c] + (a // g) * si[c] for c in range(nrows)]
                        # inverse of [[x, y], [-b/g, a/g]] is [[a/g, -y], [b/g, x]]
                        for r in Sinv:
                            rk_, ri_ = r[k], r[i]
                            r[k] = (a // g) * rk_ + (b // g) * ri_
                            r[i] = -y * rk_ + x * ri_
                    again = True
            # clear row k with column ops
            for j in range(k + 1, ncols):
                a, b = D[k][k], D[k][j]
                if b == 0:
                    continue
                if b % a == 0:
                    col_add(j, k, -(b // a))
                else:
                    g, x, y = xgcd(a, b)
                    for r in D:
                        ck, cj = r[k], r[j]
                        r[k] = x * ck + y * cj
                        r[j] = -(b // g) * ck + (a // g) * cj
                    if track_right:
                        for r in T:
                            ck, cj = r[k], r[j]
                            r[k] = x * ck + y * cj
                            r[j] = -(b // g) * ck + (a // g) * cj
                    again = True
            if not any(D[i][k] for i in range(k + 1, nrows)) and not any(
                D[k][j] for j in range(k + 1, ncols)
            ):
                break
            if not again:
                break
        if D[k][k] < 0:
            row_neg(k)
        k += 1
        if k >= min(nrows, ncols):
            break
    return D, S, Sinv, T


def rank_z(A) -> int:
    if not A or not A[0]:
        return 0
    D, _, _, _ = diagonalize(A)
    return sum(1 for i in range(min(len(D), len(D[0]))) if D[i][i])


def invariant_factors(A) -> list[int]:
    """Nonzero diagonal of the Smith normal form, with d1 | d2 | ... ."""
    if not A or not A[0]:
        return []
    D, _, _, _ = diagonalize(A)
    diag = [D[i][i] for i in range(min(len(D), len(D[0]))) if D[i][i]]
    # normalize divisibility
    changed = True
    while changed:
        changed = False
        for i in range(len(diag) - 1):
            a, b = diag[i], diag[i + 1]
            if b % a:
                g, _, _ = xgcd(a, b)
                diag[i], diag[i + 1] = g, a * b // g
                changed = True
    return diag


def kernel_basis(A) -> list[list[int]]:
    """Basis of the integer kernel {x : A x = 0} as a list of column vectors.

    The basis spans the full (saturated) kernel lattice.
    """
    nrows = len(A)
    ncols = len(A[0]) if nrows else 0
    if ncols == 0:
        return []
    if nrows == 0:
        return [[int(i == j) for i in range(ncols)] for j in range(ncols)]
    D, _, _, T = diagonalize(A, track_right=True)
    r = min(nrows, ncols)
    kernel_cols = [j for j in range(ncols) if j >= r or D[j][j] == 0]
    return [[T[i][j] for i in range(ncols)] for j in kernel_cols]


def mat_vec(A, x):
    return [sum(a * b for a, b in zip(row, x)) for row in A]


class ExactSolver:
    """Solve K c = z exactly over Z for a fixed full-column-rank K."""

    def __init__(self, columns: list[list[int]]):
        self.ncols = len(columns)
        self.nrows = len(columns[0]) if columns else 0
        A = [[columns[j][i] for j in range(self.ncols)] for i in range(self.nrows)]
        self.D, self.S, _, self.T = diagonalize(A, track_left=True, track_right=True)

    def solve(self, z: list[int]) -> list[int]:
        """Return c with K c = z; raises ValueError if no integer solution."""
        y = mat_vec(self.S, z)
        c_diag = []
        for i in range(self.ncols):
            d = self.D[i][i] if i < min(self.nrows, self.ncols) else 0
            if d == 0:
                if i < len(y) and y[i]:
                    raise ValueError("no solution")
                c_diag.append(0)
            else:
                if y[i] % d:
                    raise ValueError("no integer solution")
                c_diag.append(y[i] // d)
        for i in range(self.ncols, self.nrows):
            if y[i]:
                raise ValueError("no solution")
        return mat_vec(self.T, c_diag)


class ZQuotient:
    """Presentation of Z^n / col-span(R) with generator lifts and coordinates."""

    def __init__(self, n: int, relation_columns: list[list[int]]):
        self.n = n
        if relation_columns:
            A = [[col[i] for col in relation_columns] for i in range(n)]
        else:
            A = [[0] for _ in range(n)] if n else []
        D, S, Sinv, _ = diagonalize(A, track_left=True)
        self.S = S
        diag = []
        ncols = len(A[0]) if A else 0
        for i in range(n):
            d = D[i][i] if i < min(n, ncols) else 0
            diag.append(abs(d))
        self.diag = diag
        self.free_idx = [i for i in range(n) if diag[i] == 0]
        self.torsion_idx = [i for i in range(n) if diag[i] > 1]
        self.torsion = [diag[i] for i in self.torsion_idx]
        self.rank = len(self.free_idx)
        # lifts of the quotient generators back to Z^n
        self.free_reps = [[Sinv[r][i] for r in range(n)] for i in self.free_idx]

    def coords(self, x: list[int]) -> tuple[list[int], list[int]]:
        """Free and torsion coordinates of the class of x."""
        y = mat_vec(self.S, x)
        free = [y[i] for i in self.free_idx]
        tors = [y[i] % d for i, d in zip(self.torsion_idx, self.torsion)]
        return free, tors


# ---------------------------------------------------------------------------
# GF(2): vectors are ints, bit i = coordinate i.


def gf2_rank(rows: list[int]) -> int:
    rank = 0
    pivots = []
    for v in rows:
        for p in pivots:
            v = min(v, v ^ p)
        if v:
            pivots.append(v)
            pivots.sort(reverse=True)
            rank += 1
    return rank


class GF2Echelon:
    """Incremental echelon form with combination tracking."""

    def __init__(self):
        self.pivot_of = {}  # pivot bit position -> (vector, combination)
        self.count = 0

    def reduce(self, v: int, comb: int = 0):
        while v:
            b = v.bit_length() - 1
            if b in self.pivot_of:
                pv, pc = self.pivot_of[b]
                v ^= pv
                comb ^= pc
            else:
                return v, comb, b
        return 0, comb, -1

    def add(self, v: int, comb: int) -> bool:
        v, comb, b = self.reduce(v, comb)
        if v == 0:
            return False
        self.pivot_of[b] = (v, comb)
        self.count += 1
        return True


def gf2_kernel(columns: list[int], track_bits: int) -> list[int]:
    """Kernel of the map with the given columns; kernel vectors are ints over
    column indices (track_bits = number of columns)."""
    ech = GF2Echelon()
    kernel = []
    for j in range(track_bits):
        v, comb, _ = ech.reduce(columns[j], 1 << j)
        if v == 0:
            kernel.append(comb)
        else:
            ech.add(v, comb)
    return kernel
