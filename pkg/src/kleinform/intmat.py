"""Integer matrices, Smith normal form, and exact linear solving over Q/Z.

The solver answers systems M*x = b where M has integer entries and the
unknowns live in Q/Z.  Because Q/Z is divisible, an equation s*y = c with
s != 0 always has the branch y = c/s; unsolvability can only surface on a
row that elimination empties while its right-hand side stays nonzero.
That emptied row, a row of the reduced form of M, is returned as the
certificate.
"""

from __future__ import annotations

import heapq
from fractions import Fraction

from .errors import KleinformError
from .qz import QZ


def xgcd(a, b):
    """Return (g, x, y) with g = gcd(a, b) = a*x + b*y and g >= 0."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


class IntMatrix:
    """Dense matrix with arbitrary-precision integer entries."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows):
        rows = [list(r) for r in rows]
        if not rows:
            raise KleinformError("matrix needs at least one row")
        width = len(rows[0])
        for r in rows:
            if len(r) != width:
                raise KleinformError("ragged matrix rows")
            for v in r:
                if not isinstance(v, int):
                    raise KleinformError("matrix entries must be integers")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = width

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, entries):
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.rows == other.rows

    def __matmul__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise KleinformError("dimension mismatch in matrix product")
        cols = list(zip(*other.rows))
        return IntMatrix(
            [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in self.rows]
        )

    def mul(self, other):
        return self @ other

    def transpose(self):
        return IntMatrix([list(c) for c in zip(*self.rows)])

    def __repr__(self):
        return "IntMatrix(%r)" % (self.rows,)

    def det(self):
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.nrows != self.ncols:
            raise KleinformError("determinant of a non-square matrix")
        a = [list(r) for r in self.rows]
        n = self.nrows
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for r in range(k + 1, n):
                    if a[r][k]:
                        a[k], a[r] = a[r], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def snf(self):
        """Smith normal form: returns (U, S, V) with self = U @ S @ V.

        U and V are unimodular, S is diagonal with nonnegative entries and
        each diagonal entry divides the next.  Row operations on the work
        matrix are compensated on U, column operations on V, so the product
        identity holds at every step.
        """
        m, n = self.nrows, self.ncols
        S = [list(r) for r in self.rows]
        U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
        V = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

        def row_add(i, j, q):
            # S.row[i] += q * S.row[j]; compensate on U: col[j] -= q * col[i]
            Si, Sj = S[i], S[j]
            for c in range(n):
                Si[c] += q * Sj[c]
            for r in range(m):
                U[r][j] -= q * U[r][i]

        def row_swap(i, j):
            S[i], S[j] = S[j], S[i]
            for r in range(m):
                U[r][i], U[r][j] = U[r][j], U[r][i]

        def row_neg(i):
            S[i] = [-v for v in S[i]]
            for r in range(m):
                U[r][i] = -U[r][i]

        def col_add(i, j, q):
            # S.col[i] += q * S.col[j]; compensate on V: row[j] -= q * row[i]
            for r in range(m):
                S[r][i] += q * S[r][j]
            Vi, Vj = V[i], V[j]
            for k in range(n):
                Vj[k] -= q * Vi[k]

        def col_swap(i, j):
            for r in range(m):
                S[r][i], S[r][j] = S[r][j], S[r][i]
            V[i], V[j] = V[j], V[i]

        t = 0
        while t < min(m, n):
            # smallest nonzero entry of the trailing block becomes the pivot
            best = None
            for r in range(t, m):
                for c in range(t, n):
                    v = S[r][c]
                    if v and (best is None or abs(v) < abs(S[best[0]][best[1]])):
                        best = (r, c)
            if best is None:
                break
            if best[0] != t:
                row_swap(t, best[0])
            if best[1] != t:
                col_swap(t, best[1])
            while True:
                if S[t][t] < 0:
                    row_neg(t)
                p = S[t][t]
                dirty = False
                for r in range(t + 1, m):
                    if S[r][t]:
                        q = S[r][t] // p
                        if q:
                            row_add(r, t, -q)
                        if S[r][t]:
                            row_swap(t, r)
                            dirty = True
                            break
                if dirty:
                    continue
                for c in range(t + 1, n):
                    if S[t][c]:
                        q = S[t][c] // p
                        if q:
                            col_add(c, t, -q)
                        if S[t][c]:
                            col_swap(t, c)
                            dirty = True
                            break
                if dirty:
                    continue
                # trailing block must be divisible by the pivot for the chain
                bad = None
                for r in range(t + 1, m):
                    for c in range(t + 1, n):
                        if S[r][c] % p:
                            bad = r
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                row_add(t, bad, 1)
            t += 1

        return IntMatrix(U), IntMatrix(S), IntMatrix(V)


class SmithSolveResult:
    """Outcome of a Q/Z solve: either a solution or a failing-row certificate."""

    __slots__ = ("solution", "row", "residual")

    def __init__(self, solution=None, row=None, residual=None):
        self.solution = solution
        self.row = row
        self.residual = residual

    @property
    def solvable(self):
        return self.solution is not None

    def __repr__(self):
        if self.solvable:
            return "SmithSolveResult(solution=%r)" % (self.solution,)
        return "SmithSolveResult(row=%r, residual=%r)" % (self.row, self.residual)


def _as_fraction_mod1(v):
    if isinstance(v, QZ):
        return v.as_fraction()
    return Fraction(v) % 1


def solve_sparse(rows, ncols, rhs):
    """Solve M*x = b in Q/Z for M given as sparse rows (dicts col -> int coeff).

    Unimodular row combinations reduce each worked column to a single
    nonzero coefficient; the owning row is then retired and solved later by
    back-substitution in reverse retirement order, which Q/Z-divisibility
    always permits.  A row emptied with nonzero right-hand side is the
    no-solution certificate.
    """
    nrows = len(rows)
    if len(rhs) != nrows:
        raise KleinformError(
            "dimension mismatch: %d rows but %d right-hand sides" % (nrows, len(rhs))
        )
    work = []
    for r in rows:
        row = {c: int(v) for c, v in r.items() if v}
        for c in row:
            if not (0 <= c < ncols):
                raise KleinformError("column index %r out of range" % (c,))
        work.append(row)
    b = [_as_fraction_mod1(v) for v in rhs]

    colmap = {}
    for i, row in enumerate(work):
        for c in row:
            colmap.setdefault(c, set()).add(i)
    active = set(range(nrows))
    emptied = []
    verdict = None

    for i in range(nrows):
        if not work[i]:
            active.discard(i)
            if b[i] != 0:
                return SmithSolveResult(row=i, residual=QZ(b[i]))

    def combine(i, j, c):
        # one xgcd step on rows i and j at column c; afterwards row j loses c
        ac, bc = work[i][c], work[j][c]
        g, x, y = xgcd(ac, bc)
        u, v = -(bc // g), ac // g
        cols = set(work[i]) | set(work[j])
        new_i, new_j = {}, {}
        for col in cols:
            vi = work[i].get(col, 0)
            vj = work[j].get(col, 0)
            ni = x * vi + y * vj
            nj = u * vi + v * vj
            owners = colmap[col]
            if ni:
                new_i[col] = ni
                owners.add(i)
            else:
                owners.discard(i)
            if nj:
                new_j[col] = nj
                owners.add(j)
            else:
                owners.discard(j)
        work[i], work[j] = new_i, new_j
        b[i], b[j] = (x * b[i] + y * b[j]) % 1, (u * b[i] + v * b[j]) % 1
        if not new_i:
            emptied.append(i)
        if not new_j:
            emptied.append(j)

    def eliminate_with_unit(p, c):
        # pivot coefficient is +-1: every other active row loses column c
        s = work[p][c]
        rowp = work[p]
        for j in list(colmap[c]):
            if j == p or j not in active:
                continue
            q = work[j][c] * s
            rowj = work[j]
            for col, v in rowp.items():
                nv = rowj.get(col, 0) - q * v
                if nv:
                    rowj[col] = nv
                    colmap.setdefault(col, set()).add(j)
                else:
                    rowj.pop(col, None)
                    colmap[col].discard(j)
            b[j] = (b[j] - q * b[p]) % 1
            if not rowj:
                emptied.append(j)

    def drain_empties():
        nonlocal verdict
        for i in emptied:
            if i in active:
                active.discard(i)
                if b[i] != 0 and verdict is None:
                    verdict = (i, b[i])
        emptied.clear()

    def column_key(c):
        owners = colmap[c]
        has_unit = 0 if any(abs(work[i][c]) == 1 for i in owners) else 1
        return (has_unit, len(owners), c)

    heap = [(column_key(c), c) for c in colmap]
    heapq.heapify(heap)
    retired = []  # (row, pivot column, pivot coefficient), in retirement order

    while verdict is None and heap:
        _, c = heapq.heappop(heap)
        owners = colmap.get(c)
        if not owners:
            continue  # emptied by cancellation: free column
        key = column_key(c)
        if heap and key > heap[0][0]:
            heapq.heappush(heap, (key, c))
            continue
        owner_list = sorted(owners)
        while len(owner_list) > 1:
            units = [i for i in owner_list if abs(work[i][c]) == 1]
            if units:
                p = min(units, key=lambda i: (len(work[i]), i))
                eliminate_with_unit(p, c)
            else:
                owner_list.sort(key=lambda i: (abs(work[i][c]), i))
                combine(owner_list[0], owner_list[1], c)
            owner_list = sorted(colmap[c])
        p = owner_list[0]
        retired.append((p, c, work[p][c]))
        active.discard(p)
        for col in work[p]:
            colmap[col].discard(p)
        drain_empties()

    drain_empties()
    if verdict is not None:
        return SmithSolveResult(row=verdict[0], residual=QZ(verdict[1]))

    x = [Fraction(0)] * ncols
    assigned = [False] * ncols
    for p, c, s in reversed(retired):
        acc = b[p]
        for col, v in work[p].items():
            if col != c and assigned[col]:
                acc -= v * x[col]
        acc = acc % 1
        # principal branch of division by s in Q/Z
        val = Fraction(acc.numerator, acc.denominator * abs(s))
        if s < 0:
            val = -val
        x[c] = val % 1
        assigned[c] = True

    solution = [QZ(v) for v in x]
    _verify_sparse(rows, solution, rhs)
    return SmithSolveResult(solution=solution)


def _verify_sparse(rows, solution, rhs):
    for i, row in enumerate(rows):
        acc = Fraction(0)
        for c, v in row.items():
            acc += v * solution[c].as_fraction()
        if acc % 1 != _as_fraction_mod1(rhs[i]):
            raise KleinformError("internal error: solver produced a non-solution at row %d" % i)


def smith_solve(matrix, rhs):
    """Solve matrix * x = b with x taking values in Q/Z; exact, no tolerances.

    matrix may be an IntMatrix or a list of integer rows.  Returns a
    SmithSolveResult: .solution holds the list of QZ values when solvable,
    otherwise .row / .residual identify a reduced row that became zero with
    nonzero right-hand side.
    """
    if isinstance(matrix, IntMatrix):
        dense = matrix.rows
    else:
        dense = [list(r) for r in matrix]
        if len({len(r) for r in dense}) > 1:
            raise KleinformError("ragged matrix rows")
    if len(dense) != len(rhs):
        raise KleinformError(
            "dimension mismatch: %d rows but %d right-hand sides" % (len(dense), len(rhs))
        )
    ncols = len(dense[0]) if dense else 0
    sparse = [{c: v for c, v in enumerate(row) if v} for row in dense]
    return solve_sparse(sparse, ncols, rhs)
