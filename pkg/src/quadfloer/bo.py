"""The deformed Bourgeois-Oancea chain model and its verification pipeline.

After discarding the low-action generators, the complex in the action
window is built from the upper-orbit critical points and the two
U-generators.  B_n denotes the span of

    x0, x2, mcheck_k, mhat_k, Mcheck_k, Mhat_k   (k >= 1)

of Conley-Zehnder degree n (degrees 2k-1, 2k, 2k+1, 2k+2 for the orbit
letters, 0 and 2 for x0, x2).  The full complex QB puts a copy of B at
every t-level s >= 0, graded by deg - 4s and filtered by s, with

    d = d0 + t^{-1} d1,

where d0 preserves the level and d1 raises it by one.  The explicit
coefficient tables live in `DifferentialTables`; every coefficient is a
named rule so the counterfactual suites can perturb one at a time.

The main pipeline `verify_main_lemma` checks, in four independent ways,
that the degree-2 homology of the level-truncated complex is
one-dimensional and generated by the class of x2.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import complexes, linalg
from .complexes import BasisElement, ComplexError, GradedFilteredComplex
from .floer import HamiltonianParams, mu_window
from .linalg import ZERO, EchelonSpan, _frac

LETTER_OFFSET = {"mcheck": -1, "mhat": 0, "Mcheck": 1, "Mhat": 2}
LETTERS = ("mcheck", "mhat", "Mcheck", "Mhat")
X_DEGREES = {"x0": 0, "x2": 2}

DEFAULT_PARAMS = HamiltonianParams(Fraction(2, 5), Fraction(1, 100), Fraction(100))


@dataclass(frozen=True)
class BGen:
    """A basis generator of B: an orbit letter with multiplicity, or x0/x2."""

    name: str
    k: int = 0

    def __post_init__(self):
        if self.name in X_DEGREES:
            if self.k:
                raise ValueError("x-generators carry no multiplicity")
        elif self.name in LETTER_OFFSET:
            if self.k < 1:
                raise ValueError("orbit generators need k >= 1")
        else:
            raise ValueError(f"unknown generator {self.name!r}")

    @property
    def degree(self) -> int:
        if self.name in X_DEGREES:
            return X_DEGREES[self.name]
        return 2 * self.k + LETTER_OFFSET[self.name]

    @property
    def label(self) -> str:
        return self.name if self.name in X_DEGREES else f"{self.name}{self.k}"

    def __repr__(self) -> str:
        return self.label


def _g(name: str, k: int = 0) -> BGen:
    return BGen(name, k)


# Rule table.  d0 coefficients: the level-preserving differential.
#   d0 mhat_k = 0,  d0 Mhat_k = 0
#   d0 mcheck_k = 2 mhat_{k-1} + 2 Mhat_{k-2}   (k >= 3)
#   d0 Mcheck_k = 2 mhat_k     + 2 Mhat_{k-1}   (k >= 2)
#   d0 mcheck_2 = 2 mhat_1 + 2 x2
#   d0 Mcheck_1 = 2 mhat_1 + 2 x2
#   d0 mcheck_1 = 0,  d0 x0 = d0 x2 = 0
# d1 coefficients: the level-raising correction.
#   d1 mcheck_k = mhat_{k+1},  d1 Mcheck_k = Mhat_{k+1}
#   d1 mhat_k = d1 Mhat_k = 0,  d1 x0 = d1 x2 = 0
# Zero-valued rules are listed explicitly (at degree-legal targets) so the
# counterfactual sweeps can perturb them and watch a structural check fail.
DEFAULT_RULES: dict[str, int] = {
    "d0:mcheck->mhat": 2,
    "d0:mcheck->Mhat": 2,
    "d0:Mcheck->mhat": 2,
    "d0:Mcheck->Mhat": 2,
    "d0:mcheck2->mhat1": 2,
    "d0:mcheck2->x2": 2,
    "d0:Mcheck1->mhat1": 2,
    "d0:Mcheck1->x2": 2,
    "d0:mcheck1->x0": 0,
    "d0:mhat->mcheck": 0,
    "d0:mhat->Mcheck": 0,
    "d0:Mhat->mcheck": 0,
    "d0:Mhat->Mcheck": 0,
    "d0:x2->mcheck1": 0,
    "d1:mcheck->mhat": 1,
    "d1:Mcheck->Mhat": 1,
    "d1:mcheck->Mhat": 0,
    "d1:mhat->Mcheck": 0,
    "d1:mhat->mcheck": 0,
    "d1:Mcheck->mhat": 0,
    "d1:Mhat->mcheck": 0,
    "d1:Mhat->Mcheck": 0,
    "d1:x0->mcheck2": 0,
    "d1:x0->Mcheck1": 0,
    "d1:x2->mcheck3": 0,
    "d1:x2->Mcheck2": 0,
}


class DifferentialTables:
    """The d0/d1 coefficient tables, with named overridable rules.

    The defaults encode the tables above.  `mutated` returns a copy with a
    single named coefficient shifted, which is how the counterfactual tests
    probe that each printed value is pinned by some structural or
    homological check.
    """

    def __init__(self, overrides: Mapping[str, object] | None = None):
        rules = dict(DEFAULT_RULES)
        for key, v in (overrides or {}).items():
            if key not in rules:
                raise KeyError(f"unknown rule {key!r}")
            rules[key] = v
        self.rules = {k: _frac(v) for k, v in rules.items()}

    def mutated(self, rule: str, delta) -> "DifferentialTables":
        if rule not in self.rules:
            raise KeyError(f"unknown rule {rule!r}")
        return DifferentialTables({**self.rules, rule: self.rules[rule] + _frac(delta)})

    def _combo(self, pairs: Sequence[tuple[str, BGen]]) -> dict[BGen, Fraction]:
        out: dict[BGen, Fraction] = {}
        for rule, tgt in pairs:
            c = self.rules[rule]
            if c:
                out[tgt] = out.get(tgt, ZERO) + c
        return {g: v for g, v in out.items() if v}

    def d0(self, g: BGen) -> dict[BGen, Fraction]:
        """Level-preserving differential; lowers the B-degree by 1."""
        n, k = g.name, g.k
        if n == "x0":
            return {}
        if n == "x2":
            return self._combo([("d0:x2->mcheck1", _g("mcheck", 1))])
        if n == "mcheck":
            if k == 1:
                return self._combo([("d0:mcheck1->x0", _g("x0"))])
            if k == 2:
                return self._combo(
                    [("d0:mcheck2->mhat1", _g("mhat", 1)), ("d0:mcheck2->x2", _g("x2"))]
                )
            return self._combo(
                [("d0:mcheck->mhat", _g("mhat", k - 1)), ("d0:mcheck->Mhat", _g("Mhat", k - 2))]
            )
        if n == "Mcheck":
            if k == 1:
                return self._combo(
                    [("d0:Mcheck1->mhat1", _g("mhat", 1)), ("d0:Mcheck1->x2", _g("x2"))]
                )
            return self._combo(
                [("d0:Mcheck->mhat", _g("mhat", k)), ("d0:Mcheck->Mhat", _g("Mhat", k - 1))]
            )
        if n == "mhat":
            pairs = [("d0:mhat->mcheck", _g("mcheck", k))]
            if k >= 2:
                pairs.append(("d0:mhat->Mcheck", _g("Mcheck", k - 1)))
            return self._combo(pairs)
        # Mhat
        return self._combo(
            [("d0:Mhat->mcheck", _g("mcheck", k + 1)), ("d0:Mhat->Mcheck", _g("Mcheck", k))]
        )

    def d1(self, g: BGen) -> dict[BGen, Fraction]:
        """Level-raising correction; raises the B-degree by 3."""
        n, k = g.name, g.k
        if n == "x0":
            return self._combo(
                [("d1:x0->mcheck2", _g("mcheck", 2)), ("d1:x0->Mcheck1", _g("Mcheck", 1))]
            )
        if n == "x2":
            return self._combo(
                [("d1:x2->mcheck3", _g("mcheck", 3)), ("d1:x2->Mcheck2", _g("Mcheck", 2))]
            )
        if n == "mcheck":
            return self._combo(
                [("d1:mcheck->mhat", _g("mhat", k + 1)), ("d1:mcheck->Mhat", _g("Mhat", k))]
            )
        if n == "Mcheck":
            return self._combo(
                [("d1:Mcheck->Mhat", _g("Mhat", k + 1)), ("d1:Mcheck->mhat", _g("mhat", k + 2))]
            )
        if n == "mhat":
            return self._combo(
                [("d1:mhat->Mcheck", _g("Mcheck", k + 1)), ("d1:mhat->mcheck", _g("mcheck", k + 2))]
            )
        # Mhat
        return self._combo(
            [("d1:Mhat->mcheck", _g("mcheck", k + 3)), ("d1:Mhat->Mcheck", _g("Mcheck", k + 2))]
        )


DEFAULT_TABLES = DifferentialTables()


def d0(g: BGen, tables: DifferentialTables | None = None) -> dict[BGen, Fraction]:
    return (tables or DEFAULT_TABLES).d0(g)


def d1(g: BGen, tables: DifferentialTables | None = None) -> dict[BGen, Fraction]:
    return (tables or DEFAULT_TABLES).d1(g)


def b_generators(k_max: int) -> list[BGen]:
    """x0, x2, then the orbit letters for k = 1..k_max, in a fixed order."""
    gens = [_g("x0"), _g("x2")]
    for k in range(1, k_max + 1):
        for name in LETTERS:
            gens.append(_g(name, k))
    return gens


def combo_squared_zero(
    apply_first, apply_second, gens: Sequence[BGen]
) -> list[tuple[BGen, dict[BGen, Fraction]]]:
    """Nonzero components of `apply_second after apply_first` over `gens`.

    Works at the level of formal linear combinations of B-generators with
    no truncation at all, so boundary effects cannot mask a violation.
    """
    bad = []
    for g in gens:
        acc: dict[BGen, Fraction] = {}
        for mid, v in apply_first(g).items():
            for tgt, w in apply_second(mid).items():
                nv = acc.get(tgt, ZERO) + v * w
                if nv:
                    acc[tgt] = nv
                elif tgt in acc:
                    del acc[tgt]
        if acc:
            bad.append((g, acc))
    return bad


def d0_squared_violations(tables: DifferentialTables | None = None, k_max: int = 24):
    t = tables or DEFAULT_TABLES
    return combo_squared_zero(t.d0, t.d0, b_generators(k_max))


def anticommutator_violations(tables: DifferentialTables | None = None, k_max: int = 24):
    """Nonzero components of d1 d0 + d0 d1 on the generators up to k_max."""
    t = tables or DEFAULT_TABLES
    bad = []
    for g in b_generators(k_max):
        acc: dict[BGen, Fraction] = {}
        for first, second in ((t.d0, t.d1), (t.d1, t.d0)):
            for mid, v in first(g).items():
                for tgt, w in second(mid).items():
                    nv = acc.get(tgt, ZERO) + v * w
                    if nv:
                        acc[tgt] = nv
                    elif tgt in acc:
                        del acc[tgt]
        if acc:
            bad.append((g, acc))
    return bad


# ------------------------------------------------------------- QB assembly


def _qb_label(g: BGen, s: int) -> str:
    return f"{g.label}@s{s}"


_MORSE_RANK = {"x0": 1, "x2": 2, "mcheck": 1, "mhat": 2, "Mcheck": 3, "Mhat": 4}


def _lcm(*xs: int) -> int:
    out = 1
    for x in xs:
        out = out * x // __import__("math").gcd(out, x)
    return out


def action_tiebreak(p: HamiltonianParams) -> Fraction:
    """Size of the Morse correction separating same-level actions.

    Generators on one orbit manifold share the bulk action E + k(r - eps),
    but the Morse function perturbing the action orders its critical points,
    and differentials between them do strictly descend.  The correction
    rank(letter) * tiebreak reproduces that ordering exactly; it is kept
    below a quarter of the coarsest action gap 1/lcm(denominators), so it
    can never flip a comparison between distinct bulk values and never moves
    a value across an action threshold from above.
    """
    return Fraction(1, 16 * _lcm(p.r.denominator, p.eps.denominator, p.E.denominator))


def _action_of(g: BGen, s: int, p: HamiltonianParams) -> Fraction:
    base = (p.E - s) if g.name in X_DEGREES else (p.E + g.k * (p.r - p.eps) - s)
    return base + _MORSE_RANK[g.name] * action_tiebreak(p)


@dataclass
class QBAssembly:
    """An assembled truncation of QB plus the bounds it used."""

    complex: GradedFilteredComplex
    k_max: int
    mu: int
    degree_window: tuple[int, int] | None
    safe_degrees: tuple[int, int]
    params: HamiltonianParams

    def to_json_dict(self) -> dict:
        return {
            "k_max": self.k_max,
            "mu": self.mu,
            "degree_window": list(self.degree_window) if self.degree_window else None,
            "safe_degrees": list(self.safe_degrees),
            "basis_size": len(self.complex.basis),
            "params": self.params.to_json_dict(),
        }


def required_k_max(degree_max: int, mu: int) -> int:
    """Smallest k_max making every generator of total degree <= degree_max
    present on every level s <= mu (an mcheck of B-degree 2k-1 is the worst
    case)."""
    return (degree_max + 4 * mu + 1) // 2


def assemble_qb(
    k_max: int,
    mu: int,
    params: HamiltonianParams | None = None,
    degree_window: tuple[int, int] | None = None,
    tables: DifferentialTables | None = None,
    validate_result: bool = True,
) -> QBAssembly:
    """Build the truncated complex over levels s = 0..mu with d = d0 + t^{-1} d1.

    Without a degree window the basis is every generator with k <= k_max on
    every level; homology is then reliable in total degrees up to
    2*k_max + 1 - 4*mu (degrees above that can miss level-raising targets).
    With a window (lo, hi) only elements of total degree inside it are
    kept; since the span of degrees <= D is a subcomplex, homology is
    reliable for lo + 1 .. hi - 1, and k_max must cover the window on every
    level.  The safe range is recorded on the result either way.

    Differential entries whose target falls outside the basis (level above
    mu, degree outside the window, multiplicity above k_max) are dropped;
    with the default tables this never breaks d о d = 0 because both d0 and
    d1 annihilate every target they produce.
    """
    if mu < 0:
        raise ComplexError("mu must be >= 0")
    p = params or DEFAULT_PARAMS
    t = tables or DEFAULT_TABLES
    if degree_window is not None:
        lo, hi = degree_window
        if lo > hi:
            raise ComplexError("empty degree window")
        need = required_k_max(hi, mu)
        if k_max < need:
            raise ComplexError(
                f"k_max={k_max} too small for degree window {degree_window} at mu={mu}; need {need}"
            )
        safe = (lo + 1, hi - 1)
    else:
        # complete below (every generator present down to degree -4*mu), and
        # reliable above until level-raising targets start missing k_max + 1
        safe = (-4 * mu, 2 * k_max + 1 - 4 * mu)

    def in_window(deg: int) -> bool:
        return degree_window is None or degree_window[0] <= deg <= degree_window[1]

    basis: list[BasisElement] = []
    present: dict[tuple[str, int], BGen] = {}
    for s in range(mu + 1):
        for g in b_generators(k_max):
            deg = g.degree - 4 * s
            if in_window(deg):
                basis.append(BasisElement(_qb_label(g, s), deg, s, _action_of(g, s, p)))
                present[(g.label, s)] = g

    diff: dict[str, dict[str, Fraction]] = {}
    for (glabel, s), g in present.items():
        row: dict[str, Fraction] = {}
        for tgt, v in t.d0(g).items():
            if (tgt.label, s) in present:
                row[_qb_label(tgt, s)] = v
        for tgt, v in t.d1(g).items():
            if (tgt.label, s + 1) in present:
                row[_qb_label(tgt, s + 1)] = v
        if row:
            diff[_qb_label(g, s)] = row

    cx = GradedFilteredComplex(basis, diff)
    if validate_result:
        report = complexes.validate(cx)
        if not report.valid:
            v = report.violations[0]
            raise ComplexError(
                f"assembled complex is invalid ({len(report.violations)} violations; "
                f"first: {v.kind} {v.source}->{v.target}: {v.detail})"
            )
    return QBAssembly(cx, k_max, mu, degree_window, safe, p)


def assemble_b(k_max: int, params: HamiltonianParams | None = None,
               tables: DifferentialTables | None = None) -> QBAssembly:
    """The single-level complex (B, d0)."""
    return assemble_qb(k_max, 0, params, tables=tables)


# ------------------------------------------------------- homology of (B, d0)


def expected_b_class(degree: int) -> dict[str, Fraction] | None:
    """The expected homology generator of (B, d0) in each degree.

    x0 in degree 0, mcheck1 in degree 1, x2 in degree 2,
    Mcheck_k - mcheck_{k+1} in degree 2k+1 and Mhat_k in degree 2k+2.
    Dimension 1 in every degree, matching the Betti numbers of the free
    loop space of the 2-sphere.
    """
    if degree < 0:
        return None
    if degree == 0:
        return {"x0": Fraction(1)}
    if degree == 1:
        return {"mcheck1": Fraction(1)}
    if degree == 2:
        return {"x2": Fraction(1)}
    k = (degree - 1) // 2
    if degree % 2 == 1:
        return {f"Mcheck{k}": Fraction(1), f"mcheck{k + 1}": Fraction(-1)}
    k = (degree - 2) // 2
    return {f"Mhat{k}": Fraction(1)}


@dataclass
class BHomologyRow:
    degree: int
    dimension: int
    representative: dict[str, Fraction]
    expected: dict[str, Fraction]
    matches: bool

    def to_json_dict(self) -> dict:
        return {
            "degree": self.degree,
            "dimension": self.dimension,
            "representative": {k: str(v) for k, v in self.representative.items()},
            "expected": {k: str(v) for k, v in self.expected.items()},
            "matches": self.matches,
        }


def _strip_level(combo: Mapping[str, Fraction]) -> dict[str, Fraction]:
    return {label.split("@")[0]: v for label, v in combo.items()}


def homology_of_B(
    j_max: int,
    k_max: int | None = None,
    params: HamiltonianParams | None = None,
    tables: DifferentialTables | None = None,
) -> list[BHomologyRow]:
    """Homology table of (B, d0) for degrees 0..j_max.

    Every degree should be one-dimensional with the representative of
    `expected_b_class`, up to a scalar and modulo boundaries; the `matches`
    flag records exactly that comparison.
    """
    need = (j_max + 2) // 2 + 1  # one degree of padding above j_max
    km = k_max if k_max is not None else need
    if km < need:
        raise ComplexError(f"k_max={km} too small for degrees up to {j_max}; need {need}")
    asm = assemble_b(km, params, tables)
    cx = asm.complex
    rows: list[BHomologyRow] = []
    for j in range(j_max + 1):
        h = complexes.homology(cx, j)
        rep = _strip_level(h.representative_combos()[0]) if h.dimension == 1 else {}
        expected = expected_b_class(j) or {}
        matches = False
        if h.dimension == 1 and expected:
            span = complexes.boundary_span(cx, j)
            exp_vec = cx.vector_of({f"{k}@s0": v for k, v in expected.items()}, j)
            matches = complexes.classes_proportional(span, h.representatives[0], exp_vec)
        rows.append(BHomologyRow(j, h.dimension, rep, expected, matches))
    return rows


def d1_homology_coefficients(
    k: int, tables: DifferentialTables | None = None
) -> tuple[Fraction, Fraction]:
    """Induced coefficients of the level-raising map on homology of (B, d0).

    Returns (odd, even): the coefficient in d1[Mcheck_k - mcheck_{k+1}]
    = odd * [Mhat_{k+1}] and in d1[Mhat_k] = even * [class of degree 2k+5].
    With the default tables odd = 2 (the onto map of the E^1 complex) and
    even = 0.
    """
    t = tables or DEFAULT_TABLES
    km = k + 4
    asm = assemble_b(km, tables=t)
    cx = asm.complex

    def d1_class(src_combo: dict[str, Fraction], src_degree: int):
        image: dict[str, Fraction] = {}
        for label, c in src_combo.items():
            g = _parse_bgen(label.split("@")[0])
            for tgt, v in t.d1(g).items():
                key = _qb_label(tgt, 0)
                nv = image.get(key, ZERO) + c * v
                if nv:
                    image[key] = nv
                elif key in image:
                    del image[key]
        tgt_degree = src_degree + 3
        h = complexes.homology(cx, tgt_degree)
        span = complexes.boundary_span(cx, tgt_degree)
        coeffs = linalg.express_modulo(
            span, h.representatives, cx.vector_of(image, tgt_degree)
        )
        if coeffs is None:
            raise ComplexError("level-raising image is not a cycle class")
        return coeffs, h

    odd_src = {_qb_label(_g("Mcheck", k), 0): Fraction(1),
               _qb_label(_g("mcheck", k + 1), 0): Fraction(-1)}
    odd_coeffs, odd_h = d1_class(odd_src, 2 * k + 1)
    # normalise to the Mhat_{k+1} basis vector of the target class
    exp_vec = cx.vector_of({_qb_label(_g("Mhat", k + 1), 0): Fraction(1)}, 2 * k + 4)
    span = complexes.boundary_span(cx, 2 * k + 4)
    exp_coeffs = linalg.express_modulo(span, odd_h.representatives, exp_vec)
    if exp_coeffs is None or len(exp_coeffs) != 1 or not exp_coeffs[0]:
        raise ComplexError("Mhat class is not a generator of the target homology")
    odd = odd_coeffs[0] / exp_coeffs[0]

    even_src = {_qb_label(_g("Mhat", k), 0): Fraction(1)}
    even_coeffs, _ = d1_class(even_src, 2 * k + 2)
    even = even_coeffs[0] if even_coeffs else ZERO
    return odd, even


def _parse_bgen(label: str) -> BGen:
    if label in X_DEGREES:
        return _g(label)
    for name in LETTERS:
        if label.startswith(name):
            return _g(name, int(label[len(name):]))
    raise ValueError(f"cannot parse generator label {label!r}")


# --------------------------------------------------------- main verification


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "details": self.details}


@dataclass
class MainLemmaReport:
    mu: int
    k_max: int
    params: HamiltonianParams
    degree_window: tuple[int, int]
    checks: list[CheckResult]
    passed: bool
    wall_time_s: float

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json_dict(self) -> dict:
        return {
            "mu": self.mu,
            "k_max": self.k_max,
            "params": self.params.to_json_dict(),
            "degree_window": list(self.degree_window),
            "checks": [c.to_json_dict() for c in self.checks],
            "passed": self.passed,
            "wall_time_s": self.wall_time_s,
        }


def _combo_str(combo: Mapping[str, Fraction]) -> dict[str, str]:
    return {k: str(v) for k, v in combo.items()}


def _x2_class_check(cx: GradedFilteredComplex, rep: Sequence[Fraction]) -> bool:
    """Is `rep` a nonzero multiple of the class of x2@s0 modulo boundaries?"""
    span = complexes.boundary_span(cx, 2)
    x2_vec = cx.vector_of({"x2@s0": Fraction(1)}, 2)
    return complexes.classes_proportional(span, rep, x2_vec)


DEGREE_WINDOW = (0, 4)


def verify_main_lemma(
    mu: int,
    params: HamiltonianParams | None = None,
    k_max: int | None = None,
    run_squeeze: bool = True,
    tables: DifferentialTables | None = None,
) -> MainLemmaReport:
    """Verify that H_2 of the truncated complex is C, generated by x2.

    Four independent computations must agree:

    (a) direct_homology: H_2 of the level-(<= mu) complex has dimension 1
        and its representative is the class of x2 at level 0;
    (b) spectral_sequence: the level filtration degenerates at page 2, and
        the page-2 total in degree 2 is one class sitting at level s = 0,
        again the class of x2;
    (c) e1_rows: in the page-1 complex the three-term rows
        H_3(level s-1) -> H_2(level s) -> H_1(level s+1) are exact in the
        middle for 1 <= s <= mu (left arrow onto, right arrow zero), and at
        s = 0 the surviving class is [x2];
    (d) action_squeeze: quotienting the full-depth complex by action < 1
        (depth mu_plus + 1, so the quotient is squeezed between two level
        truncations) leaves H_2 of dimension 1 generated by x2.

    Degrees are restricted to the window (0, 4): one degree of padding
    around 1..3, which is exactly what the homology computations touch.
    """
    if mu < 1:
        raise ComplexError("mu must be >= 1")
    p = params or DEFAULT_PARAMS
    need = required_k_max(DEGREE_WINDOW[1], mu)
    km = k_max if k_max is not None else need
    start = time.perf_counter()
    asm = assemble_qb(km, mu, p, degree_window=DEGREE_WINDOW, tables=tables)
    cx = asm.complex
    checks: list[CheckResult] = []

    # (a) direct homology
    h2 = complexes.homology(cx, 2)
    a_ok = h2.dimension == 1 and _x2_class_check(cx, h2.representatives[0])
    checks.append(
        CheckResult(
            "direct_homology",
            a_ok,
            {
                "dimension": h2.dimension,
                "representative": _combo_str(h2.representative_combos()[0])
                if h2.dimension >= 1
                else {},
            },
        )
    )

    # (b) spectral sequence
    ss = complexes.spectral_sequence(cx, max_page=2)
    page2 = ss.page(2)
    dims2 = {s: page2.dim(s, 2) for s in range(mu + 1)}
    surv = page2.cells.get((0, 2))
    b_ok = (
        ss.degeneration_page == 2
        and dims2.get(0) == 1
        and all(v == 0 for s, v in dims2.items() if s != 0)
        and surv is not None
        and _x2_class_check(cx, surv.representatives[0])
    )
    checks.append(
        CheckResult(
            "spectral_sequence",
            b_ok,
            {"degeneration_page": ss.degeneration_page, "page2_degree2_dims": dims2},
        )
    )

    # (c) exactness of the page-1 rows through induced maps between slices
    slices = {s: cx.filtration_slice(s) for s in range(mu + 1)}
    raising = cx.level_raising_map(1)

    def slice_map(s: int) -> dict[str, dict[str, Fraction]]:
        keep_src = {b.label for b in slices[s].basis}
        keep_tgt = {b.label for b in slices[s + 1].basis}
        out = {}
        for src, combo in raising.items():
            if src in keep_src:
                row = {t_: v for t_, v in combo.items() if t_ in keep_tgt}
                if row:
                    out[src] = row
        return out

    rows_detail = {}
    c_ok = True
    for s in range(mu + 1):
        # slice complexes carry total degrees, so the three-term row always
        # sits in degrees (3, 2, 1)
        h_mid = complexes.homology(slices[s], 2)
        left_rank = 0
        if s >= 1:
            left = complexes.induced_map_on_homology(
                slice_map(s - 1), slices[s - 1], slices[s], degree=3, degree_shift=1,
            )
            left_rank = linalg.rank(linalg.SparseMatrix.from_dense(left)) if left else 0
        right_rank = 0
        if s <= mu - 1:
            right = complexes.induced_map_on_homology(
                slice_map(s), slices[s], slices[s + 1], degree=2, degree_shift=1,
            )
            right_rank = linalg.rank(linalg.SparseMatrix.from_dense(right)) if right else 0
        right_is_zero = right_rank == 0
        middle = (h_mid.dimension - right_rank) - left_rank
        if s == 0:
            ok = middle == 1 and right_is_zero and h_mid.dimension == 1
        else:
            ok = middle == 0 and left_rank == h_mid.dimension
        c_ok = c_ok and ok
        rows_detail[s] = {
            "middle_homology": middle,
            "left_rank": left_rank,
            "right_zero": right_is_zero,
            "ok": ok,
        }
    checks.append(CheckResult("e1_rows", c_ok, {"per_level": rows_detail}))

    # (d) squeeze through the action quotient
    if run_squeeze:
        mu_minus, mu_plus = mu_window(p)
        depth = mu_plus + 1
        deep = assemble_qb(
            required_k_max(DEGREE_WINDOW[1], depth),
            depth,
            p,
            degree_window=DEGREE_WINDOW,
            tables=tables,
        )
        squeeze_ok = True
        for b in deep.complex.basis:
            if 1 <= b.degree <= 3:
                if b.filtration >= mu_plus + 1 and not b.action < 1:
                    squeeze_ok = False
                if b.action < 1 and not b.filtration >= mu_minus + 1:
                    squeeze_ok = False
        quot = complexes.quotient_above_action(deep.complex, Fraction(1))
        h2q = complexes.homology(quot, 2)
        d_ok = (
            squeeze_ok
            and h2q.dimension == 1
            and _x2_class_check(quot, h2q.representatives[0])
        )
        checks.append(
            CheckResult(
                "action_squeeze",
                d_ok,
                {
                    "mu_minus": mu_minus,
                    "mu_plus": mu_plus,
                    "depth": depth,
                    "quotient_basis_size": len(quot.basis),
                    "dimension": h2q.dimension,
                },
            )
        )

    return MainLemmaReport(
        mu=mu,
        k_max=km,
        params=p,
        degree_window=DEGREE_WINDOW,
        checks=checks,
        passed=all(c.passed for c in checks),
        wall_time_s=time.perf_counter() - start,
    )
