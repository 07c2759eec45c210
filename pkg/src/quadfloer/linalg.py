"""Exact sparse linear algebra over Q.

Scalars are `fractions.Fraction`, eliminations are either fraction-free
(integer cross multiplication) or plain rational Gauss-Jordan, and no
floating point ever enters.  Two independent rank algorithms are kept side
by side (`rank` and `dense_rank`) so higher layers can cross-check one
against the other.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Vector = Sequence[Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


class QuotientError(ValueError):
    """An alleged image generator is not inside the kernel span.

    When this fires during a homology computation it means the differential
    upstream does not square to zero.
    """


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class SparseMatrix:
    """Immutable sparse matrix over Q; zero entries are never stored."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple, object] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        store: dict[tuple[int, int], Fraction] = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise ValueError(f"entry ({i}, {j}) outside a {rows}x{cols} matrix")
            fv = _frac(v)
            if fv:
                store[(i, j)] = fv
        self.rows = rows
        self.cols = cols
        self.entries = store

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[object]]) -> "SparseMatrix":
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        entries = {}
        for i, row in enumerate(dense):
            if len(row) != cols:
                raise ValueError("ragged dense input")
            for j, v in enumerate(row):
                if v:
                    entries[(i, j)] = _frac(v)
        return cls(rows, cols, entries)

    @classmethod
    def from_columns(cls, columns: Sequence[Vector], rows: int | None = None) -> "SparseMatrix":
        if rows is None:
            rows = len(columns[0]) if columns else 0
        entries = {}
        for j, col in enumerate(columns):
            for i, v in enumerate(col):
                if v:
                    entries[(i, j)] = _frac(v)
        return cls(rows, len(columns), entries)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols, {})

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, {(i, i): ONE for i in range(n)})

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def to_dense(self) -> list[list[Fraction]]:
        dense = [[ZERO] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            dense[i][j] = v
        return dense

    def column(self, j: int) -> list[Fraction]:
        col = [ZERO] * self.rows
        for (i, jj), v in self.entries.items():
            if jj == j:
                col[i] = v
        return col

    def columns(self) -> list[list[Fraction]]:
        cols = [[ZERO] * self.rows for _ in range(self.cols)]
        for (i, j), v in self.entries.items():
            cols[j][i] = v
        return cols

    def column_dicts(self) -> list[dict[int, Fraction]]:
        cols: list[dict[int, Fraction]] = [{} for _ in range(self.cols)]
        for (i, j), v in self.entries.items():
            cols[j][i] = v
        return cols

    def row_dicts(self) -> list[dict[int, Fraction]]:
        rows: list[dict[int, Fraction]] = [{} for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            rows[i][j] = v
        return rows

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparseMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __repr__(self) -> str:
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={self.nnz})"


def _integer_row(frac_row: Mapping[int, Fraction]) -> dict[int, int]:
    """Scale a rational row to coprime integers (rank preserving)."""
    if not frac_row:
        return {}
    den = 1
    for v in frac_row.values():
        den = den * v.denominator // math.gcd(den, v.denominator)
    ints = {c: int(v * den) for c, v in frac_row.items()}
    g = 0
    for v in ints.values():
        g = math.gcd(g, abs(v))
    if g > 1:
        ints = {c: v // g for c, v in ints.items()}
    return ints


def rank(m: SparseMatrix) -> int:
    """Rank of `m` over Q via sparse fraction-free elimination.

    Rows are scaled to integers up front, and the update rule
    `row <- piv * row - coef * pivot_row` keeps every entry integral; the
    updated row is divided by its gcd to tame growth.  The pivot minimises
    the Markowitz fill count (nnz(row) - 1) * (nnz(col) - 1), ties broken by
    the lowest (row, col) pair, so elimination order is deterministic.
    """
    rows: list[dict[int, int] | None] = []
    for rd in m.row_dicts():
        ints = _integer_row(rd)
        rows.append(ints if ints else None)

    rk = 0
    alive = [i for i, r in enumerate(rows) if r]
    while alive:
        col_count: dict[int, int] = {}
        for i in alive:
            for c in rows[i]:
                col_count[c] = col_count.get(c, 0) + 1
        best = None
        for i in alive:
            fill_row = len(rows[i]) - 1
            for c in rows[i]:
                key = (fill_row * (col_count[c] - 1), i, c)
                if best is None or key < best:
                    best = key
        _, pi, pc = best
        prow = rows[pi]
        piv = prow[pc]
        for i in alive:
            if i == pi:
                continue
            r = rows[i]
            coef = r.get(pc)
            if coef is None:
                continue
            new: dict[int, int] = {}
            for c, v in r.items():
                if c == pc:
                    continue
                nv = piv * v - coef * prow.get(c, 0)
                if nv:
                    new[c] = nv
            for c, v in prow.items():
                if c != pc and c not in r:
                    nv = -coef * v
                    if nv:
                        new[c] = nv
            if new:
                g = 0
                for v in new.values():
                    g = math.gcd(g, abs(v))
                if g > 1:
                    new = {c: v // g for c, v in new.items()}
                rows[i] = new
            else:
                rows[i] = None
        rows[pi] = None
        rk += 1
        alive = [i for i in alive if rows[i]]
    return rk


def dense_rank(m: SparseMatrix) -> int:
    """Independent oracle: rank by dense rational Gauss-Jordan.

    Textbook elimination on dense rows with division by the pivot, first
    nonzero entry in column order as pivot, no sparsity tricks and no
    fraction-free rewriting.  Deliberately a different algorithm from
    `rank` so the two can cross-check each other.
    """
    a = m.to_dense()
    r = 0
    for c in range(m.cols):
        p = next((i for i in range(r, m.rows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        pv = a[r][c]
        if pv != ONE:
            a[r] = [x / pv for x in a[r]]
        for i in range(m.rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == m.rows:
            break
    return r


def _sparse_rref(rows: Iterable[Mapping[int, Fraction]]) -> dict[int, dict[int, Fraction]]:
    """Reduced row echelon form of dict rows, keyed by pivot column.

    The RREF of a matrix is unique, so the result does not depend on the
    insertion order and downstream bases built from it are canonical.
    """
    pivots: dict[int, dict[int, Fraction]] = {}
    for raw in rows:
        row = {c: _frac(v) for c, v in raw.items() if v}
        # clear every pivot column present; stored pivot rows are mutually
        # reduced, so the reduction cannot reintroduce a pivot column and
        # one pass over a snapshot suffices
        for c in sorted(c for c in row if c in pivots):
            f = row.pop(c)
            for cc, vv in pivots[c].items():
                if cc == c:
                    continue
                nv = row.get(cc, ZERO) - f * vv
                if nv:
                    row[cc] = nv
                elif cc in row:
                    del row[cc]
        if not row:
            continue
        c = min(row)
        lead = row.pop(c)
        if lead != ONE:
            row = {cc: vv / lead for cc, vv in row.items()}
        row[c] = ONE
        for pc, existing in list(pivots.items()):
            f = existing.get(c)
            if f:
                upd = dict(existing)
                for cc, vv in row.items():
                    nv = upd.get(cc, ZERO) - f * vv
                    if nv:
                        upd[cc] = nv
                    elif cc in upd:
                        del upd[cc]
                pivots[pc] = upd
        pivots[c] = row
    return pivots


def rref(m: SparseMatrix) -> tuple[dict[int, dict[int, Fraction]], list[int]]:
    """RREF rows keyed by pivot column plus the sorted pivot list."""
    pivots = _sparse_rref(m.row_dicts())
    return pivots, sorted(pivots)


def kernel_basis(m: SparseMatrix) -> list[list[Fraction]]:
    """Canonical basis of the null space; size = cols - rank.

    One basis vector per free column of the reduced echelon form, ordered
    by free column index.  Uniqueness of the RREF makes the output
    deterministic.
    """
    pivots, pivot_cols = rref(m)
    pivot_set = set(pivot_cols)
    basis = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = [ZERO] * m.cols
        v[f] = ONE
        for pc, prow in pivots.items():
            w = prow.get(f)
            if w:
                v[pc] = -w
        basis.append(v)
    return basis


def _entry_dict(vec) -> dict[int, Fraction]:
    """Sparse {index: value} view of a dense sequence or mapping."""
    if isinstance(vec, Mapping):
        return {i: _frac(x) for i, x in vec.items() if x}
    return {i: _frac(x) for i, x in enumerate(vec) if x}


class EchelonSpan:
    """Incrementally built row space in echelon form, stored sparsely.

    Supports rank queries, membership tests and basis extension.  Vectors
    may be passed as dense sequences or as {index: value} mappings.
    Reduction against a fixed span is linear, which `reduce_dict` relies
    on.
    """

    __slots__ = ("ncols", "rows")

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: dict[int, dict[int, Fraction]] = {}

    def copy(self) -> "EchelonSpan":
        dup = EchelonSpan(self.ncols)
        dup.rows = {p: dict(r) for p, r in self.rows.items()}
        return dup

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce_dict(self, vec) -> dict[int, Fraction]:
        """Sparse residual of `vec` after forward elimination.

        Row supports start at their pivot, so an ascending sweep visits
        each position's final value; the map is linear and vanishes exactly
        on the span.
        """
        v = _entry_dict(vec)
        done = -1
        while True:
            nxt = min((c for c in v if c > done), default=None)
            if nxt is None:
                return v
            done = nxt
            row = self.rows.get(nxt)
            if row is None:
                continue
            f = v.pop(nxt)
            for c, w in row.items():
                if c == nxt:
                    continue
                nv = v.get(c, ZERO) - f * w
                if nv:
                    v[c] = nv
                elif c in v:
                    del v[c]

    def reduce(self, vec) -> list[Fraction]:
        """Dense residual, for callers that want coordinates."""
        r = self.reduce_dict(vec)
        out = [ZERO] * self.ncols
        for i, x in r.items():
            out[i] = x
        return out

    def contains(self, vec) -> bool:
        return not self.reduce_dict(vec)

    def insert(self, vec) -> bool:
        """Add `vec` to the span; True when the rank grew."""
        v = self.reduce_dict(vec)
        if not v:
            return False
        p = min(v)
        lead = v.pop(p)
        if lead != ONE:
            v = {c: w / lead for c, w in v.items()}
        v[p] = ONE
        self.rows[p] = v
        return True


def span_rank(vectors: Iterable[Vector], ncols: int) -> int:
    span = EchelonSpan(ncols)
    for v in vectors:
        span.insert(v)
    return span.rank


def quotient_dimension(
    image_gens: Sequence[Vector], kernel_gens: Sequence[Vector], ncols: int | None = None
) -> tuple[int, list[list[Fraction]]]:
    """dim(kernel / image) together with quotient-basis representatives.

    Every image generator must lie in the span of the kernel generators; a
    violation raises QuotientError (upstream this signals d о d != 0).
    Representatives are the kernel generators, taken in order, whose classes
    extend the image span, so canonical kernel input gives canonical output.
    """
    if ncols is None:
        if kernel_gens:
            ncols = len(kernel_gens[0])
        elif image_gens:
            ncols = len(image_gens[0])
        else:
            return 0, []

    def densify(v) -> list[Fraction]:
        out = [ZERO] * ncols
        for i, x in _entry_dict(v).items():
            out[i] = x
        return out

    kspan = EchelonSpan(ncols)
    for v in kernel_gens:
        kspan.insert(v)
    ispan = EchelonSpan(ncols)
    for g in image_gens:
        if not kspan.contains(g):
            raise QuotientError(
                "image generator lies outside the kernel span (differential does not square to zero)"
            )
        ispan.insert(g)
    dim = kspan.rank - ispan.rank
    reps = [densify(v) for v in kernel_gens if ispan.insert(v)]
    if len(reps) != dim:
        raise AssertionError("quotient representative count disagrees with rank arithmetic")
    return dim, reps


def express_in_span(vectors: Sequence[Vector], target: Vector) -> list[Fraction] | None:
    """Coefficients writing `target` as a combination of `vectors`, or None.

    Dense augmented elimination; intended for the small systems that appear
    when expressing homology classes in a chosen basis.
    """
    n = len(target)
    k = len(vectors)
    aug = [[_frac(vectors[j][i]) for j in range(k)] + [_frac(target[i])] for i in range(n)]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(k):
        p = next((i for i in range(r, n) if aug[i][c]), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        pv = aug[r][c]
        if pv != ONE:
            aug[r] = [x / pv for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append((r, c))
        r += 1
    for i in range(r, n):
        if aug[i][k]:
            return None
    coeffs = [ZERO] * k
    for ri, ci in pivots:
        coeffs[ci] = aug[ri][k]
    return coeffs


def express_modulo(
    span: EchelonSpan, basis_vectors: Sequence[Vector], target: Vector
) -> list[Fraction] | None:
    """Write `target` as a combination of `basis_vectors` modulo `span`.

    Works on the residuals, restricted to their joint support, so large
    ambient dimensions cost nothing.
    """
    residuals = [span.reduce_dict(v) for v in basis_vectors]
    target_res = span.reduce_dict(target)
    support = sorted(set(target_res) | {i for r in residuals for i in r})
    dense_res = [[r.get(i, ZERO) for i in support] for r in residuals]
    dense_tgt = [target_res.get(i, ZERO) for i in support]
    return express_in_span(dense_res, dense_tgt)
