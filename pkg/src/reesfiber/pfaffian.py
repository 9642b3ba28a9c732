"""Exact linear algebra over polynomial rings: alternating matrices,
Pfaffians, signed submaximal Pfaffians, determinants and minors.

Pfaffians use recursive first-row expansion memoized on the surviving
index subset; determinants and minors use cofactor expansion memoized
on the surviving column subset, so the maximal minors of a matrix share
their subproblems.
"""

from __future__ import annotations

import itertools

from .polyring import RingMismatch


class NotAlternating(ValueError):
    """Matrix is not alternating (zero diagonal, antisymmetric)."""


class DegenerateEven(ValueError):
    """Submaximal Pfaffians of an even-size alternating matrix all vanish."""


class PolyMatrix:
    """Immutable rectangular matrix of polynomials over one ring."""

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring, entries):
        entries = tuple(tuple(row) for row in entries)
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        for row in entries:
            if len(row) != cols:
                raise ValueError("ragged matrix")
            for e in row:
                if e.ring is not ring:
                    raise RingMismatch("entry from a different ring")
        self.ring = ring
        self.rows = rows
        self.cols = cols
        self.entries = entries

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def transpose(self):
        return PolyMatrix(
            self.ring,
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
        )

    def __neg__(self):
        return PolyMatrix(self.ring, [[-e for e in row] for row in self.entries])

    def __mul__(self, other):
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        z = self.ring.zero()
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = z
                for k in range(self.cols):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return PolyMatrix(self.ring, out)

    def map_to(self, dst):
        return PolyMatrix(dst, [[e.map_to(dst) for e in row] for row in self.entries])

    def is_alternating(self):
        if self.rows != self.cols:
            return False
        for i in range(self.rows):
            if not self.entries[i][i].is_zero():
                return False
            for j in range(i + 1, self.cols):
                if self.entries[i][j] != -self.entries[j][i]:
                    return False
        return True

    def __eq__(self, other):
        return (
            isinstance(other, PolyMatrix)
            and self.ring is other.ring
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((id(self.ring), self.entries))

    def __repr__(self):
        return f"PolyMatrix({self.rows}x{self.cols} over {self.ring!r})"


def mat_vec(M, vec):
    """M * column vector (list of polynomials)."""
    if M.cols != len(vec):
        raise ValueError("shape mismatch")
    z = M.ring.zero()
    out = []
    for i in range(M.rows):
        acc = z
        for k in range(M.cols):
            acc = acc + M.entries[i][k] * vec[k]
        out.append(acc)
    return out


def vec_mat(vec, M):
    """Row vector * M."""
    if M.rows != len(vec):
        raise ValueError("shape mismatch")
    z = M.ring.zero()
    out = []
    for j in range(M.cols):
        acc = z
        for k in range(M.rows):
            acc = acc + vec[k] * M.entries[k][j]
        out.append(acc)
    return out


def _require_alternating(M):
    if not M.is_alternating():
        raise NotAlternating("matrix is not alternating")


def _pf(M, idx, memo):
    """Pfaffian of the principal submatrix on the sorted index tuple."""
    if not idx:
        return M.ring.one()
    got = memo.get(idx)
    if got is not None:
        return got
    i0 = idx[0]
    rest = idx[1:]
    acc = M.ring.zero()
    sign = 1
    for pos, j in enumerate(rest):
        e = M.entries[i0][j]
        if e:
            sub = rest[:pos] + rest[pos + 1 :]
            term = e * _pf(M, sub, memo)
            acc = acc + (term if sign > 0 else -term)
        sign = -sign
    memo[idx] = acc
    return acc


def pfaffian(M, _memo=None):
    """Pfaffian of an alternating matrix; odd size gives 0 by convention."""
    _require_alternating(M)
    if M.rows % 2:
        return M.ring.zero()
    memo = _memo if _memo is not None else {}
    return _pf(M, tuple(range(M.rows)), memo)


def signed_submax_pfaffians(M, offset=None):
    """Vector (F_1, ..., F_m) with F_i = (-1)^(offset - i) * Pf(M minus
    row and column i), 1-based; offset defaults to m.  Requires odd m;
    for even m every submaximal Pfaffian vanishes (DegenerateEven)."""
    _require_alternating(M)
    m = M.rows
    if m % 2 == 0:
        raise DegenerateEven("even-size alternating matrix")
    if offset is None:
        offset = m
    memo = {}
    full = tuple(range(m))
    out = []
    for i in range(1, m + 1):
        pf = _pf(M, full[: i - 1] + full[i:], memo)
        out.append(pf if (offset - i) % 2 == 0 else -pf)
    return out


def _det(M, rows, cols, memo):
    """Determinant of the submatrix on `rows` x `cols` (sorted tuples),
    expanding along the first row, memoized on (rows, cols)."""
    if not rows:
        return M.ring.one()
    key = (rows, cols)
    got = memo.get(key)
    if got is not None:
        return got
    r0 = rows[0]
    rrest = rows[1:]
    acc = M.ring.zero()
    sign = 1
    for pos, c in enumerate(cols):
        e = M.entries[r0][c]
        if e:
            term = e * _det(M, rrest, cols[:pos] + cols[pos + 1 :], memo)
            acc = acc + (term if sign > 0 else -term)
        sign = -sign
    memo[key] = acc
    return acc


def determinant(M):
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    return _det(M, tuple(range(M.rows)), tuple(range(M.cols)), {})


def maximal_minors(M):
    """All (cols choose rows) maximal minors, column subsets in
    lexicographic order; shares cofactor subproblems across minors."""
    if M.rows > M.cols:
        raise ValueError("maximal_minors needs rows <= cols")
    memo = {}
    rows = tuple(range(M.rows))
    return [
        _det(M, rows, cols, memo)
        for cols in itertools.combinations(range(M.cols), M.rows)
    ]


def minors(M, r):
    """All r x r minors, row-major over (row subset, column subset) in
    lexicographic order."""
    if r < 0 or r > M.rows or r > M.cols:
        raise ValueError("minor size out of range")
    if r == 0:
        return [M.ring.one()]
    out = []
    for rows in itertools.combinations(range(M.rows), r):
        memo = {}
        for cols in itertools.combinations(range(M.cols), r):
            out.append(_det(M, rows, cols, memo))
    return out


def delta_J(M, cols, drop_row=None):
    """Determinant of the submatrix using the given columns (0-based,
    strictly increasing); with drop_row set, that row is removed and
    len(cols) must be rows - 1."""
    cols = tuple(cols)
    if len(set(cols)) != len(cols) or any(
        not 0 <= c < M.cols for c in cols
    ) or list(cols) != sorted(cols):
        raise ValueError("columns must be distinct, sorted, in range")
    if drop_row is None:
        rows = tuple(range(M.rows))
    else:
        if not 0 <= drop_row < M.rows:
            raise ValueError("drop_row out of range")
        rows = tuple(i for i in range(M.rows) if i != drop_row)
    if len(cols) != len(rows):
        raise ValueError("column count must match row count")
    return _det(M, rows, cols, {})


def pfaffian_of_complement(M, removed, memo):
    """Pfaffian of M with the 0-based indices in `removed` deleted.

    Assumes M alternating (validate once before looping with a shared
    memo table)."""
    rm = set(removed)
    idx = tuple(i for i in range(M.rows) if i not in rm)
    return _pf(M, idx, memo)
