"""Exact Gaussian elimination over FieldElement matrices (small, dense)."""
from __future__ import annotations


def _rref(rows):
    """Reduced row echelon form; returns (rref_rows, pivot_column_list)."""
    if not rows:
        return [], []
    m = [list(r) for r in rows]
    nrows, ncols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if not m[i][c].is_zero()), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def rank(rows) -> int:
    return len(_rref(rows)[1])


def nullspace(rows, field):
    """Basis of the right kernel of the matrix (list of coordinate lists)."""
    if not rows:
        return []
    ncols = len(rows[0])
    rref, pivots = _rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [field.zero()] * ncols
        vec[fc] = field.one()
        for r, pc in enumerate(pivots):
            vec[pc] = -rref[r][fc]
        basis.append(vec)
    return basis


def solve(rows, rhs):
    """One solution of rows * x = rhs, or None if inconsistent/underdetermined
    columns are set to zero."""
    if not rows:
        return None
    field = rows[0][0].desc
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    rref, pivots = _rref(aug)
    for row in rref[len(pivots):]:
        pass
    # inconsistency: a pivot in the last column
    if ncols in pivots:
        return None
    x = [field.zero()] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = rref[r][ncols]
    # verify (guards the underdetermined case)
    for row, b in zip(rows, rhs):
        acc = field.zero()
        for a, xi in zip(row, x):
            acc = acc + a * xi
        if acc != b:
            return None
    return x
