"""Sparse exact linear solving over the rationals.

Plain Gauss-Jordan on sparse rows of Fractions.  No pivot-size heuristics:
columns are eliminated left to right and the pivot is the lowest-index active
row, so identical systems always yield the identical solution.  Free variables
are set to zero.
"""

from __future__ import annotations

from fractions import Fraction


def solve_exact(rows, ncols, rhs):
    """Solve sum_j rows[i][j] * x_j = rhs[i] for x, or return None.

    ``rows`` is a list of sparse {col: coeff} dicts with 0 <= col < ncols and
    exact rational coefficients.  Returns a list of ``ncols`` Fractions (the
    unique solution with all free variables zero) or None when the system is
    inconsistent.
    """
    work = []
    b = []
    col_rows = {}  # col -> set of row ids currently holding a nonzero entry
    for i, r in enumerate(rows):
        clean = {}
        for j, v in r.items():
            v = Fraction(v)
            if v != 0:
                if not (0 <= j < ncols):
                    raise ValueError("column %r out of range" % (j,))
                clean[j] = v
                col_rows.setdefault(j, set()).add(i)
        work.append(clean)
        b.append(Fraction(rhs[i]))

    def axpy(i, factor, src):
        # row_i -= factor * row_src, maintaining the column index
        row = work[i]
        for j, v in work[src].items():
            new = row.get(j, Fraction(0)) - factor * v
            if new == 0:
                if j in row:
                    del row[j]
                    col_rows[j].discard(i)
            else:
                if j not in row:
                    col_rows.setdefault(j, set()).add(i)
                row[j] = new
        b[i] -= factor * b[src]

    pivot_row_of = {}
    pivoted = set()
    for col in range(ncols):
        cand = [i for i in col_rows.get(col, ()) if i not in pivoted]
        if not cand:
            continue
        pr = min(cand)
        pivoted.add(pr)
        pivot_row_of[col] = pr
        inv = 1 / work[pr][col]
        if inv != 1:
            for j in list(work[pr]):
                work[pr][j] *= inv
            b[pr] *= inv
        for i in list(col_rows[col]):
            if i != pr:
                axpy(i, work[i][col], pr)

    for i in range(len(work)):
        if i not in pivoted:
            assert not work[i], "non-pivot row retained entries"
            if b[i] != 0:
                return None

    x = [Fraction(0)] * ncols
    for col, pr in pivot_row_of.items():
        x[col] = b[pr]
    return x
