"""Graded, filtered chain complexes over Q.

A complex here has a finite basis, an integer homological degree, an integer
filtration level s >= 0 (the t-degree) and a rational action per basis
element.  The differential must

  * lower degree by exactly 1,
  * never decrease the filtration level,
  * square to zero,
  * strictly decrease the action on every nonzero entry.

On top of that sit homology with canonical representatives, action-window
quotients, filtration truncations, induced maps on homology, and the
spectral sequence of the (finite) filtration by t-degree.  All arithmetic is
exact; see `linalg`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .linalg import ZERO, EchelonSpan, SparseMatrix, _frac


class ComplexError(ValueError):
    pass


class ChainMapError(ValueError):
    pass


@dataclass(frozen=True)
class BasisElement:
    """One basis element: opaque label, degree, filtration level, action."""

    label: str
    degree: int
    filtration: int
    action: Fraction

    def __post_init__(self):
        if self.filtration < 0:
            raise ComplexError(f"{self.label}: filtration level must be >= 0")
        object.__setattr__(self, "action", _frac(self.action))


class GradedFilteredComplex:
    """Finite basis plus a sparse rational differential.

    Instances are immutable after construction; all queries are pure, so
    sharing across threads is safe.  The four structural invariants are not
    enforced at construction time: `validate` reports violations instead,
    which the counterfactual test suites rely on.
    """

    def __init__(
        self,
        basis: Sequence[BasisElement],
        differential: Mapping[str, Mapping[str, object]],
    ):
        labels = [b.label for b in basis]
        if len(set(labels)) != len(labels):
            raise ComplexError("duplicate basis labels")
        self.basis: tuple[BasisElement, ...] = tuple(basis)
        self.by_label: dict[str, BasisElement] = {b.label: b for b in basis}
        diff: dict[str, dict[str, Fraction]] = {}
        for src, combo in differential.items():
            if src not in self.by_label:
                raise ComplexError(f"differential source {src!r} not in basis")
            row: dict[str, Fraction] = {}
            for tgt, v in combo.items():
                if tgt not in self.by_label:
                    raise ComplexError(f"differential target {tgt!r} not in basis")
                fv = _frac(v)
                if fv:
                    row[tgt] = fv
            if row:
                diff[src] = row
        self.differential = diff
        self._slices: dict[int, list[BasisElement]] = {}
        for b in self.basis:
            self._slices.setdefault(b.degree, []).append(b)
        self._slice_index: dict[int, dict[str, int]] = {
            j: {b.label: i for i, b in enumerate(elems)} for j, elems in self._slices.items()
        }
        self._matrices: dict[int, SparseMatrix] = {}

    # ---------------------------------------------------------------- queries

    @property
    def labels(self) -> list[str]:
        return [b.label for b in self.basis]

    def degrees(self) -> list[int]:
        return sorted(self._slices)

    def levels(self) -> list[int]:
        return sorted({b.filtration for b in self.basis})

    def degree_slice(self, j: int) -> list[BasisElement]:
        return list(self._slices.get(j, []))

    def slice_dim(self, j: int) -> int:
        return len(self._slices.get(j, []))

    def d_of_label(self, label: str) -> dict[str, Fraction]:
        return dict(self.differential.get(label, {}))

    def boundary_matrix(self, j: int) -> SparseMatrix:
        """Matrix of d restricted to degree j, mapping into degree j - 1.

        Columns follow the degree-j slice order, rows the degree-(j-1)
        slice order.  Differential entries leaving those two slices are
        ignored here; `validate` is the place that detects them.
        """
        if j in self._matrices:
            return self._matrices[j]
        src = self._slices.get(j, [])
        tgt_index = self._slice_index.get(j - 1, {})
        entries = {}
        for col, b in enumerate(src):
            for tgt, v in self.differential.get(b.label, {}).items():
                row = tgt_index.get(tgt)
                if row is not None:
                    entries[(row, col)] = v
        m = SparseMatrix(len(tgt_index), len(src), entries)
        self._matrices[j] = m
        return m

    def vector_of(self, combo: Mapping[str, object], degree: int) -> list[Fraction]:
        """Dense coordinates of a label combination in the degree slice."""
        idx = self._slice_index.get(degree, {})
        v = [ZERO] * len(idx)
        for label, c in combo.items():
            fc = _frac(c)
            if not fc:
                continue
            if label not in idx:
                raise ComplexError(f"{label!r} is not a degree-{degree} basis element")
            v[idx[label]] = fc
        return v

    def combo_of(self, vector: Sequence[Fraction], degree: int) -> dict[str, Fraction]:
        elems = self._slices.get(degree, [])
        return {b.label: _frac(v) for b, v in zip(elems, vector) if v}

    def d_vector(self, vector: Sequence[Fraction], degree: int) -> list[Fraction]:
        """Apply d to a degree-j vector, landing in the degree-(j-1) slice."""
        m = self.boundary_matrix(degree)
        out = [ZERO] * m.rows
        for (i, jcol), v in m.entries.items():
            if vector[jcol]:
                out[i] += v * vector[jcol]
        return out

    # ------------------------------------------------------------ subobjects

    def filtration_slice(self, s: int) -> "GradedFilteredComplex":
        """The level-s slice with the level-preserving part of d."""
        sub = [b for b in self.basis if b.filtration == s]
        keep = {b.label for b in sub}
        diff = {}
        for b in sub:
            row = {
                tgt: v
                for tgt, v in self.differential.get(b.label, {}).items()
                if tgt in keep
            }
            if row:
                diff[b.label] = row
        return GradedFilteredComplex(sub, diff)

    def level_raising_map(self, shift: int = 1) -> dict[str, dict[str, Fraction]]:
        """The part of d raising filtration by exactly `shift`, as a map."""
        out: dict[str, dict[str, Fraction]] = {}
        for src, combo in self.differential.items():
            s = self.by_label[src].filtration
            row = {
                tgt: v
                for tgt, v in combo.items()
                if self.by_label[tgt].filtration == s + shift
            }
            if row:
                out[src] = row
        return out

    # ---------------------------------------------------------- serialization

    def to_json_dict(self) -> dict:
        return {
            "schema_version": 1,
            "basis": [
                {
                    "label": b.label,
                    "degree": b.degree,
                    "filtration": b.filtration,
                    "action": f"{b.action.numerator}/{b.action.denominator}",
                }
                for b in self.basis
            ],
            "differential": [
                [src, tgt, f"{v.numerator}/{v.denominator}"]
                for src in self.labels
                if src in self.differential
                for tgt, v in sorted(self.differential[src].items())
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    @classmethod
    def from_json_dict(cls, doc: Mapping) -> "GradedFilteredComplex":
        basis = [
            BasisElement(
                label=e["label"],
                degree=int(e["degree"]),
                filtration=int(e["filtration"]),
                action=Fraction(e["action"]),
            )
            for e in doc["basis"]
        ]
        diff: dict[str, dict[str, Fraction]] = {}
        for src, tgt, val in doc["differential"]:
            diff.setdefault(src, {})[tgt] = Fraction(val)
        return cls(basis, diff)

    @classmethod
    def from_json(cls, text: str) -> "GradedFilteredComplex":
        return cls.from_json_dict(json.loads(text))

    def __repr__(self) -> str:
        return f"GradedFilteredComplex({len(self.basis)} elements, degrees {self.degrees()[:1]}..{self.degrees()[-1:]})"


# ------------------------------------------------------------------ validate


@dataclass(frozen=True)
class Violation:
    kind: str  # "degree" | "filtration" | "action" | "d_squared"
    source: str
    target: str
    detail: str


@dataclass
class ValidationReport:
    valid: bool
    violations: list[Violation]

    def to_json_dict(self) -> dict:
        return {
            "valid": self.valid,
            "violations": [v.__dict__ for v in self.violations],
        }


def validate(cx: GradedFilteredComplex) -> ValidationReport:
    """Check the four structural invariants entry by entry.

    Reports degree drops different from 1, filtration decreases, action
    non-decreases and nonzero components of d о d, citing every offending
    entry.
    """
    violations: list[Violation] = []
    for src, combo in cx.differential.items():
        bs = cx.by_label[src]
        for tgt, v in combo.items():
            bt = cx.by_label[tgt]
            if bt.degree != bs.degree - 1:
                violations.append(
                    Violation(
                        "degree", src, tgt,
                        f"degree {bs.degree} -> {bt.degree}, expected drop by exactly 1",
                    )
                )
            if bt.filtration < bs.filtration:
                violations.append(
                    Violation(
                        "filtration", src, tgt,
                        f"filtration {bs.filtration} -> {bt.filtration} decreases",
                    )
                )
            if not bt.action < bs.action:
                violations.append(
                    Violation(
                        "action", src, tgt,
                        f"action {bs.action} -> {bt.action} does not strictly decrease",
                    )
                )
    for src, combo in cx.differential.items():
        acc: dict[str, Fraction] = {}
        for mid, v in combo.items():
            for tgt, w in cx.differential.get(mid, {}).items():
                nv = acc.get(tgt, ZERO) + v * w
                if nv:
                    acc[tgt] = nv
                elif tgt in acc:
                    del acc[tgt]
        for tgt, v in acc.items():
            violations.append(
                Violation("d_squared", src, tgt, f"(d о d)({src}) has component {v} on {tgt}")
            )
    return ValidationReport(valid=not violations, violations=violations)


# ------------------------------------------------------------------ homology


@dataclass
class HomologyResult:
    degree: int
    dimension: int
    representatives: list[list[Fraction]]
    basis: list[BasisElement]

    def representative_combos(self) -> list[dict[str, Fraction]]:
        return [
            {b.label: v for b, v in zip(self.basis, rep) if v} for rep in self.representatives
        ]


def homology(cx: GradedFilteredComplex, degree: int) -> HomologyResult:
    """dim ker(d_j) / im(d_{j+1}) with canonical representative cycles.

    Dimensions are computed twice, once through the representative
    construction and once through the rank-nullity bookkeeping of the two
    boundary matrices; a mismatch raises.  QuotientError propagates when
    d о d != 0 at this degree.
    """
    dj = cx.boundary_matrix(degree)
    dj1 = cx.boundary_matrix(degree + 1)
    kernel = linalg.kernel_basis(dj)
    image = dj1.column_dicts()
    dim, reps = linalg.quotient_dimension(image, kernel, ncols=dj.cols)
    dim_by_rank = (dj.cols - linalg.rank(dj)) - linalg.rank(dj1)
    if dim != dim_by_rank:
        raise AssertionError(
            f"homology dimension mismatch at degree {degree}: {dim} vs rank arithmetic {dim_by_rank}"
        )
    return HomologyResult(degree, dim, reps, cx.degree_slice(degree))


def cycle_space(cx: GradedFilteredComplex, degree: int) -> list[list[Fraction]]:
    return linalg.kernel_basis(cx.boundary_matrix(degree))


def boundary_span(cx: GradedFilteredComplex, degree: int) -> EchelonSpan:
    """Echelon span of im(d_{j+1}) inside the degree-j slice."""
    span = EchelonSpan(cx.slice_dim(degree))
    for col in cx.boundary_matrix(degree + 1).column_dicts():
        span.insert(col)
    return span


def classes_proportional(
    span: EchelonSpan, v: Sequence[Fraction], w: Sequence[Fraction]
) -> bool:
    """True when [v] and [w] are nonzero proportional classes modulo `span`."""
    if span.contains(v) or span.contains(w):
        return False
    probe = span.copy()
    probe.insert(w)
    return probe.contains(v)


# ------------------------------------------------------------------ quotients


def quotient_above_action(
    cx: GradedFilteredComplex, threshold: Fraction | None
) -> GradedFilteredComplex:
    """Quotient by the subcomplex spanned by elements of action < threshold.

    Since the differential strictly decreases action, that span is a
    subcomplex; the induced differential simply drops every term landing
    below the threshold.  `threshold=None` means no quotient at all.
    """
    if threshold is None:
        return GradedFilteredComplex(cx.basis, cx.differential)
    t = _frac(threshold)
    keep = [b for b in cx.basis if b.action >= t]
    keep_set = {b.label for b in keep}
    diff = {}
    for b in keep:
        row = {
            tgt: v for tgt, v in cx.differential.get(b.label, {}).items() if tgt in keep_set
        }
        if row:
            diff[b.label] = row
    return GradedFilteredComplex(keep, diff)


def truncate_filtration(cx: GradedFilteredComplex, mu: int) -> GradedFilteredComplex:
    """Quotient by the subcomplex of filtration level >= mu + 1.

    The result keeps levels s <= mu; differential entries raising the level
    beyond mu are dropped.  Valid because the differential never decreases
    the filtration level.
    """
    if mu < 0:
        raise ComplexError("mu must be >= 0")
    keep = [b for b in cx.basis if b.filtration <= mu]
    keep_set = {b.label for b in keep}
    diff = {}
    for b in keep:
        row = {
            tgt: v for tgt, v in cx.differential.get(b.label, {}).items() if tgt in keep_set
        }
        if row:
            diff[b.label] = row
    return GradedFilteredComplex(keep, diff)


# ------------------------------------------------------- spectral sequence


@dataclass
class PageCell:
    dimension: int
    representatives: list[list[Fraction]]  # vectors in degree-slice coordinates


@dataclass
class Page:
    r: int
    cells: dict[tuple[int, int], PageCell] = field(default_factory=dict)  # (s, j) -> cell
    differentials: dict[tuple[int, int], list[list[Fraction]]] = field(default_factory=dict)

    def dim(self, s: int, j: int) -> int:
        cell = self.cells.get((s, j))
        return cell.dimension if cell else 0

    def total_dim(self, j: int) -> int:
        return sum(c.dimension for (s, jj), c in self.cells.items() if jj == j)

    def has_nonzero_differential(self) -> bool:
        return any(any(any(row) for row in m) for m in self.differentials.values())


@dataclass
class SpectralSequencePages:
    pages: list[Page]
    degeneration_page: int
    levels: list[int]
    degrees: list[int]

    def page(self, r: int) -> Page:
        for p in self.pages:
            if p.r == r:
                return p
        raise KeyError(f"page {r} was not computed")


def spectral_sequence(cx: GradedFilteredComplex, max_page: int) -> SpectralSequencePages:
    """Pages E^1..E^max_page of the filtration by t-level.

    The filtration is decreasing in the level s (the differential never
    lowers s), so the page-r differential maps the slice at level s to the
    slice at level s + r, one degree down.  For a finite filtration every
    differential with r beyond the level span vanishes for position
    reasons; pages are computed up to that bound even when `max_page` is
    smaller, so the reported degeneration page is reliable.  It is the
    smallest r such that every d_{r'} with r' >= r is zero.
    """
    report = validate(cx)
    if not report.valid:
        raise ComplexError(f"invalid complex: {report.violations[0].detail}")
    if max_page < 1:
        raise ComplexError("max_page must be >= 1")

    levels = cx.levels()
    degrees = cx.degrees()
    if not levels:
        return SpectralSequencePages([Page(r=1)], 1, [], [])
    s_min, s_max = levels[0], levels[-1]
    span_len = s_max - s_min + 1
    internal_max = max(max_page, span_len + 1)

    # level(s)-filtered coordinate data per degree
    slice_elems = {j: cx.degree_slice(j) for j in degrees}

    def g_vectors(j: int, s: int) -> list[list[Fraction]]:
        """Basis vectors of the coordinate subspace of level >= s in degree j."""
        elems = slice_elems.get(j, [])
        out = []
        for i, b in enumerate(elems):
            if b.filtration >= s:
                v = [ZERO] * len(elems)
                v[i] = Fraction(1)
                out.append(v)
        return out

    def z_space(s_dom: int, t: int, j: int) -> list[list[Fraction]]:
        """Basis of {x in (level >= s_dom, degree j) : d x in level >= t}."""
        elems = slice_elems.get(j, [])
        cols = [i for i, b in enumerate(elems) if b.filtration >= s_dom]
        if not cols:
            return []
        tgt = slice_elems.get(j - 1, [])
        low_rows = [i for i, b in enumerate(tgt) if b.filtration < t]
        m = cx.boundary_matrix(j)
        entries = {}
        row_pos = {ri: p for p, ri in enumerate(low_rows)}
        col_pos = {ci: p for p, ci in enumerate(cols)}
        for (i, c), v in m.entries.items():
            if i in row_pos and c in col_pos:
                entries[(row_pos[i], col_pos[c])] = v
        sub = SparseMatrix(len(low_rows), len(cols), entries)
        kernel = linalg.kernel_basis(sub)
        lifted = []
        for kv in kernel:
            v = [ZERO] * len(elems)
            for p, ci in enumerate(cols):
                v[ci] = kv[p]
            lifted.append(v)
        return lifted

    z_cache: dict[tuple[int, int, int], list[list[Fraction]]] = {}

    def z_cached(s_dom: int, t: int, j: int) -> list[list[Fraction]]:
        # domains below the level range mean "everything"; target constraints
        # below the range are vacuous, above the range they force d x = 0
        dom_eff = max(s_dom, s_min)
        t_eff = min(max(t, s_min), s_max + 1)
        key = (dom_eff, t_eff, j)
        if key not in z_cache:
            z_cache[key] = z_space(dom_eff, t_eff, j)
        return z_cache[key]

    pages: list[Page] = []
    cell_dens: dict[tuple[int, int], EchelonSpan] = {}
    last_nonzero_r = 0

    for r in range(1, internal_max + 1):
        page = Page(r=r)
        cell_dens = {}
        for j in degrees:
            n = len(slice_elems.get(j, []))
            if n == 0:
                continue
            for s in range(s_min, s_max + 1):
                zr = z_cached(s, s + r, j)
                g_next = g_vectors(j, s + 1)
                den = EchelonSpan(n)
                for v in g_next:
                    den.insert(v)
                # boundaries d(Z_{r-1} at level s - r + 1): domain s - r + 1,
                # target constraint level >= s
                for v in z_cached(s - r + 1, s, j + 1):
                    dv = cx.d_vector(v, j + 1)
                    den.insert(dv)
                num = den.copy()
                reps = [v for v in zr if num.insert(v)]
                if reps:
                    page.cells[(s, j)] = PageCell(len(reps), reps)
                cell_dens[(s, j)] = den
        # page-r differentials, cell by cell
        for (s, j), cell in page.cells.items():
            tgt_cell = page.cells.get((s + r, j - 1))
            tgt_den = cell_dens.get((s + r, j - 1))
            images = [cx.d_vector(rep, j) for rep in cell.representatives]
            if tgt_cell is None:
                for img in images:
                    if tgt_den is not None and not tgt_den.contains(img):
                        raise AssertionError(
                            f"page {r} differential from (s={s}, j={j}) escapes the recorded spans"
                        )
                    if tgt_den is None and any(img):
                        raise AssertionError(
                            f"page {r} differential from (s={s}, j={j}) hits an empty slice"
                        )
                continue
            matrix_cols = []
            for img in images:
                coeffs = linalg.express_modulo(tgt_den, tgt_cell.representatives, img)
                if coeffs is None:
                    raise AssertionError(
                        f"page {r} differential from (s={s}, j={j}) not expressible in target cell"
                    )
                matrix_cols.append(coeffs)
            # store as rows x cols (target dim x source dim)
            mat = [
                [matrix_cols[c][i] for c in range(len(matrix_cols))]
                for i in range(tgt_cell.dimension)
            ]
            if any(any(row) for row in mat):
                page.differentials[(s, j)] = mat
        if page.has_nonzero_differential():
            last_nonzero_r = r
        pages.append(page)

    degeneration = last_nonzero_r + 1 if last_nonzero_r else 1
    return SpectralSequencePages(pages, degeneration, levels, degrees)


# ------------------------------------------------------------- induced maps


def induced_map_on_homology(
    chain_map: Mapping[str, Mapping[str, object]],
    source: GradedFilteredComplex,
    target: GradedFilteredComplex,
    degree: int,
    degree_shift: int = 0,
) -> list[list[Fraction]]:
    """Matrix of the map induced on homology by a (anti)chain map.

    `chain_map` sends source labels to target combinations, lowering degree
    by `degree_shift`.  The map must satisfy d_T f = e f d_S with a global
    sign e in {+1, -1}; either sign induces a well defined map on homology.
    Violations raise ChainMapError.  The returned matrix has one column per
    source homology representative at `degree` and one row per target
    representative at `degree - degree_shift`, both in their canonical
    bases.
    """
    f: dict[str, dict[str, Fraction]] = {}
    for src, combo in chain_map.items():
        if src not in source.by_label:
            raise ChainMapError(f"source label {src!r} unknown")
        row = {}
        for tgt, v in combo.items():
            if tgt not in target.by_label:
                raise ChainMapError(f"target label {tgt!r} unknown")
            fv = _frac(v)
            if fv:
                if target.by_label[tgt].degree != source.by_label[src].degree - degree_shift:
                    raise ChainMapError(
                        f"{src!r} -> {tgt!r} does not lower degree by {degree_shift}"
                    )
                row[tgt] = fv
        if row:
            f[src] = row

    def apply_f(vec: Sequence[Fraction], j: int) -> list[Fraction]:
        out: dict[str, Fraction] = {}
        for b, c in zip(source.degree_slice(j), vec):
            if not c:
                continue
            for tgt, v in f.get(b.label, {}).items():
                nv = out.get(tgt, ZERO) + c * v
                if nv:
                    out[tgt] = nv
                elif tgt in out:
                    del out[tgt]
        return target.vector_of(out, j - degree_shift)

    # chain property: d_T f = +- f d_S, with one global sign
    allowed = {1, -1}
    for j in source.degrees():
        for b in source.degree_slice(j):
            e = [ZERO] * source.slice_dim(j)
            e[source._slice_index[j][b.label]] = Fraction(1)
            lhs = target.d_vector(apply_f(e, j), j - degree_shift)
            rhs = apply_f(source.d_vector(e, j), j - 1)
            if lhs == rhs and all(x == ZERO for x in lhs):
                continue
            still = set()
            for sign in allowed:
                if lhs == [sign * x for x in rhs]:
                    still.add(sign)
            allowed &= still
            if not allowed:
                raise ChainMapError(
                    f"not a chain map up to sign at {b.label!r} (degree {j})"
                )

    h_src = homology(source, degree)
    h_tgt = homology(target, degree - degree_shift)
    tgt_bnd = boundary_span(target, degree - degree_shift)
    cols = []
    for rep in h_src.representatives:
        img = apply_f(rep, degree)
        coeffs = linalg.express_modulo(tgt_bnd, h_tgt.representatives, img)
        if coeffs is None:
            raise ChainMapError("image of a cycle is not a cycle class in the target")
        cols.append(coeffs)
    return [[cols[c][i] for c in range(len(cols))] for i in range(h_tgt.dimension)]
