"""Valuation-pivoted exact linear algebra over Q_p or a local field.

Entries only need the scalar protocol: +, -, *, /, unary -, is_zero(),
pivot_val() -> (is_exact, Fraction).  Pivots are chosen at minimal exact
valuation; an entry counts as zero only when it is zero to its stored
precision, and a stored bound that could undercut the chosen pivot raises
PrecisionError instead of guessing a rank.
"""

from __future__ import annotations

from .errors import PrecisionError


def mat_copy(m):
    return [list(row) for row in m]


def mat_mul(a, b, zero):
    n, k, m = len(a), len(b), len(b[0])
    out = [[zero for _ in range(m)] for _ in range(n)]
    for i in range(n):
        ai = a[i]
        for t in range(k):
            x = ai[t]
            bt = b[t]
            row = out[i]
            for j in range(m):
                row[j] = row[j] + x * bt[j]
    return out


def mat_vec(a, v, zero):
    out = []
    for row in a:
        acc = zero
        for x, y in zip(row, v):
            acc = acc + x * y
        out.append(acc)
    return out


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, c):
    return [[c * x for x in row] for row in a]


def identity(n, one, zero):
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def mat_pow(a, n, one, zero):
    result = identity(len(a), one, zero)
    base = mat_copy(a)
    while n:
        if n & 1:
            result = mat_mul(result, base, zero)
        base = mat_mul(base, base, zero)
        n >>= 1
    return result


def _select_pivot(entries):
    """Index of the minimal-valuation entry, or None if all are zero.

    entries: list of (index, scalar).  Raises when a zero-to-precision bound
    could undercut the best exact valuation.
    """
    best = None
    bounds = []
    for idx, x in entries:
        exact, v = x.pivot_val()
        if exact:
            if best is None or v < best[1]:
                best = (idx, v)
        else:
            bounds.append((idx, v))
    if best is None:
        return None
    for idx, b in bounds:
        if b < best[1]:
            raise PrecisionError(
                "rank ambiguous: an entry is zero to precision %s while the "
                "best pivot has valuation %s" % (b, best[1]))
    return best[0]


def row_reduce(mat, augment=None):
    """Row-reduce in place (on copies); returns (rows, aug, pivot_cols, rank).

    Standard Gauss-Jordan with valuation pivoting; `augment` rows are carried
    through the same operations.
    """
    a = mat_copy(mat)
    aug = mat_copy(augment) if augment is not None else None
    n = len(a)
    m = len(a[0]) if n else 0
    pivot_cols = []
    r = 0
    for c in range(m):
        if r >= n:
            break
        sel = _select_pivot([(i, a[i][c]) for i in range(r, n)])
        if sel is None:
            continue
        a[r], a[sel] = a[sel], a[r]
        if aug is not None:
            aug[r], aug[sel] = aug[sel], aug[r]
        piv = a[r][c]
        inv_row = [x / piv for x in a[r]]
        a[r] = inv_row
        if aug is not None:
            aug[r] = [x / piv for x in aug[r]]
        for i in range(n):
            if i == r:
                continue
            f = a[i][c]
            a[i] = [x - f * y for x, y in zip(a[i], a[r])]
            if aug is not None:
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivot_cols.append(c)
        r += 1
    return a, aug, pivot_cols, r


def rank(mat) -> int:
    if not mat:
        return 0
    return row_reduce(mat)[3]


def kernel_basis(mat, one, zero):
    """Basis of the right kernel, from the reduced echelon form."""
    if not mat:
        return []
    a, _, pivot_cols, r = row_reduce(mat)
    m = len(mat[0])
    free_cols = [c for c in range(m) if c not in pivot_cols]
    basis = []
    for fc in free_cols:
        vec = [zero for _ in range(m)]
        vec[fc] = one
        for row_idx, pc in enumerate(pivot_cols):
            vec[pc] = -a[row_idx][fc]
        basis.append(vec)
    return basis


def solve(mat, rhs, zero):
    """Unique solution of a square system; PrecisionError if rank-deficient."""
    n = len(mat)
    aug = [[x] for x in rhs]
    a, sol, pivot_cols, r = row_reduce(mat, augment=aug)
    if r < n:
        raise PrecisionError("matrix singular to working precision")
    out = [zero for _ in range(n)]
    for row_idx, pc in enumerate(pivot_cols):
        out[pc] = sol[row_idx][0]
    return out


def invert(mat, one, zero):
    n = len(mat)
    a, inv, pivot_cols, r = row_reduce(mat, augment=identity(n, one, zero))
    if r < n:
        raise PrecisionError("matrix singular to working precision")
    out = [[zero] * n for _ in range(n)]
    for row_idx, pc in enumerate(pivot_cols):
        out[pc] = inv[row_idx]
    return out


def det(mat, one, zero):
    """Determinant via elimination with valuation pivoting."""
    a = mat_copy(mat)
    n = len(a)
    sign = 1
    acc = one
    for c in range(n):
        sel = _select_pivot([(i, a[i][c]) for i in range(c, n)])
        if sel is None:
            return zero
        if sel != c:
            a[c], a[sel] = a[sel], a[c]
            sign = -sign
        piv = a[c][c]
        acc = acc * piv
        for i in range(c + 1, n):
            f = a[i][c] / piv
            a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return -acc if sign < 0 else acc


def charpoly_berkowitz(mat, one, zero):
    """Division-free characteristic polynomial, coefficients descending.

    Returns [1, c_{d-1}, ..., c_0] with char(T) = T^d + c_{d-1} T^(d-1) + ...
    computed by the Samuelson-Berkowitz Toeplitz recursion, which never
    divides and so never loses p-adic precision to pivots.
    """
    n = len(mat)
    if n == 0:
        return [one]
    poly = [one, -mat[0][0]]
    for r in range(1, n):
        sub = [row[:r] for row in mat[:r]]
        row_vec = mat[r][:r]
        col_vec = [mat[i][r] for i in range(r)]
        # Toeplitz column: [1, -a_rr, -R C, -R M C, ..., -R M^(r-1) C]
        items = [one, -mat[r][r]]
        acc = col_vec
        for _ in range(r):
            items.append(-_dot(row_vec, acc, zero))
            acc = mat_vec(sub, acc, zero)
        new_poly = []
        for i in range(r + 2):
            s = zero
            for j in range(len(poly)):
                k = i - j
                if 0 <= k < len(items):
                    s = s + items[k] * poly[j]
            new_poly.append(s)
        poly = new_poly
    return poly


def _dot(u, v, zero):
    acc = zero
    for x, y in zip(u, v):
        acc = acc + x * y
    return acc
