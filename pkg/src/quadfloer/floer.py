"""Generator families of the piecewise-linear Hamiltonian model.

The Hamiltonian equals E on the tube {|p| <= r - eps} and -eps outside
{|p| < r}.  Its one-periodic orbits organise into four families:

  * U-generators  x0, x2        constant orbits at the maximum, action E
  * V-generators  y0, y_minus2  constant orbits at the minimum, action -eps
  * upper orbits  on {|p| = r - eps}, multiplicity k >= 1
  * lower orbits  on {|p| = r},       multiplicity k >= 1

Each non-constant orbit manifold carries four critical points denoted
mcheck, mhat, Mcheck, Mhat (Morse indices 0..3).  Conley-Zehnder indices
follow the fixed index table below; a factor t^-N shifts the index by -4N
and the action by -N.  Everything in this module is exact rational
arithmetic so strict inequalities are decidable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .linalg import _frac

# CZ index = 2k + offset for orbit generators; fixed values for U/V.
UPPER_OFFSET = {"mcheck": -1, "mhat": 0, "Mcheck": 1, "Mhat": 2}
LOWER_OFFSET = {"mcheck": -2, "mhat": -1, "Mcheck": 0, "Mhat": 1}
U_CZ = {"x0": 0, "x2": 2}
V_CZ = {"y0": 0, "y_minus2": -2}
ORBIT_LETTERS = ("mcheck", "mhat", "Mcheck", "Mhat")


class ParameterError(ValueError):
    """Hamiltonian parameters violate a hard precondition."""


@dataclass(frozen=True)
class HamiltonianParams:
    """Slope data (r, eps, E), all exact rationals.

    Hard requirements: 0 < r < 1/2, 0 < eps < r and E > 1.  Exact
    resonances (1/r or (E + eps)/eps an integer) are recorded as warnings
    rather than rejected: every downstream check is an exact inequality, so
    boundary cases are still decided correctly.
    """

    r: Fraction
    eps: Fraction
    E: Fraction

    def __post_init__(self):
        object.__setattr__(self, "r", _frac(self.r))
        object.__setattr__(self, "eps", _frac(self.eps))
        object.__setattr__(self, "E", _frac(self.E))
        if not Fraction(0) < self.r < Fraction(1, 2):
            raise ParameterError("r must lie strictly between 0 and 1/2")
        if not Fraction(0) < self.eps < self.r:
            raise ParameterError("eps must satisfy 0 < eps < r")
        if not self.E > 1:
            raise ParameterError("E must exceed 1")
        warnings = []
        if (1 / self.r).denominator == 1:
            warnings.append("1/r is an integer (resonant slope)")
        if ((self.E + self.eps) / self.eps).denominator == 1:
            warnings.append("(E + eps)/eps is an integer (resonant multiplicity bound)")
        object.__setattr__(self, "resonance_warnings", tuple(warnings))

    @classmethod
    def parse(cls, r: str, eps: str, E: str) -> "HamiltonianParams":
        return cls(Fraction(r), Fraction(eps), Fraction(E))

    def to_json_dict(self) -> dict:
        return {
            "r": str(self.r),
            "eps": str(self.eps),
            "E": str(self.E),
            "resonance_warnings": list(self.resonance_warnings),
        }


@dataclass(frozen=True)
class Generator:
    """A capped orbit: family data plus the t-degree N."""

    side: str  # "upper" | "lower" | "U" | "V"
    name: str  # orbit letter, or x0/x2/y0/y_minus2
    k: int = 0
    t_degree: int = 0

    def __post_init__(self):
        if self.side in ("upper", "lower"):
            if self.name not in ORBIT_LETTERS:
                raise ValueError(f"unknown orbit letter {self.name!r}")
            if self.k < 1:
                raise ValueError("orbit generators need multiplicity k >= 1")
        elif self.side == "U":
            if self.name not in U_CZ:
                raise ValueError(f"unknown U-generator {self.name!r}")
        elif self.side == "V":
            if self.name not in V_CZ:
                raise ValueError(f"unknown V-generator {self.name!r}")
        else:
            raise ValueError(f"unknown side {self.side!r}")

    @property
    def label(self) -> str:
        core = f"{self.name}{self.k}" if self.side in ("upper", "lower") else self.name
        if self.t_degree:
            return f"{self.side}:{core}*t^{-self.t_degree}"
        return f"{self.side}:{core}"


def cz_index(g: Generator) -> int:
    """Conley-Zehnder index including the -4N shift of the t-degree."""
    if g.side == "upper":
        base = 2 * g.k + UPPER_OFFSET[g.name]
    elif g.side == "lower":
        base = 2 * g.k + LOWER_OFFSET[g.name]
    elif g.side == "U":
        base = U_CZ[g.name]
    else:
        base = V_CZ[g.name]
    return base - 4 * g.t_degree


def action(g: Generator, p: HamiltonianParams) -> Fraction:
    """Symplectic action including the -N shift of the t-degree."""
    if g.side == "upper":
        base = p.E + g.k * (p.r - p.eps)
    elif g.side == "lower":
        base = g.k * p.r - p.eps
    elif g.side == "U":
        base = p.E
    else:
        base = -p.eps
    return base - g.t_degree


def multiplicity_bound(p: HamiltonianParams) -> Fraction:
    return (p.E + p.eps) / p.eps


def multiplicity_admissible(k: int, p: HamiltonianParams) -> bool:
    """Orbit multiplicities run from 1 up to (E + eps)/eps inclusive."""
    if k < 1:
        raise ValueError("multiplicity must be >= 1")
    return Fraction(k) <= multiplicity_bound(p)


def enumerate_generators(
    p: HamiltonianParams,
    cz_values: Iterable[int] = (1, 2, 3),
    sides: Iterable[str] = ("upper", "lower", "U", "V"),
) -> list[Generator]:
    """All generators with CZ index in `cz_values`, exhaustively.

    For orbit generators the multiplicity runs to the admissible bound and,
    per letter and index value, the t-degree is pinned by divisibility, so
    the enumeration is finite.  U/V generators allow negative t-degrees.
    """
    czs = sorted(set(cz_values))
    out: list[Generator] = []
    k_top = math.floor(multiplicity_bound(p))
    for side in sides:
        if side in ("upper", "lower"):
            offsets = UPPER_OFFSET if side == "upper" else LOWER_OFFSET
            for k in range(1, k_top + 1):
                for name, off in offsets.items():
                    base = 2 * k + off
                    for c in czs:
                        if (base - c) % 4 == 0:
                            out.append(Generator(side, name, k, (base - c) // 4))
        else:
            table = U_CZ if side == "U" else V_CZ
            for name, base in table.items():
                for c in czs:
                    if (base - c) % 4 == 0:
                        out.append(Generator(side, name, 0, (base - c) // 4))
    return out


def _int_strictly_below(x: Fraction) -> int:
    return x.numerator // x.denominator - 1 if x.denominator == 1 else math.floor(x)


def _int_strictly_above(x: Fraction) -> int:
    return x.numerator // x.denominator + 1 if x.denominator == 1 else math.ceil(x)


def mu_window(p: HamiltonianParams) -> tuple[int, int]:
    """The t-degree window (mu_minus, mu_plus) squeezing the action cut.

    With kappa = 1 - 2r + 2eps, mu_minus is the greatest integer strictly
    below (E - 1)/kappa and mu_plus the least integer strictly above
    (E - kappa)/kappa.  Upper and U-generators of CZ index 1..3 then have
    action > 1 whenever N <= mu_minus and action < 1 whenever N > mu_plus;
    `verify_generator_bounds` checks that guarantee generator by generator.
    """
    kappa = 1 - 2 * p.r + 2 * p.eps
    mu_minus = _int_strictly_below((p.E - 1) / kappa)
    mu_plus = _int_strictly_above((p.E - kappa) / kappa)
    return mu_minus, mu_plus


@dataclass
class ClauseResult:
    name: str
    passed: bool
    checked: int
    counterexamples: list[dict]

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "counterexamples": self.counterexamples,
        }


@dataclass
class GeneratorBoundsReport:
    params: HamiltonianParams
    mu_minus: int
    mu_plus: int
    clauses: list[ClauseResult]
    passed: bool

    def clause(self, name: str) -> ClauseResult:
        for c in self.clauses:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json_dict(self) -> dict:
        return {
            "params": self.params.to_json_dict(),
            "mu_minus": self.mu_minus,
            "mu_plus": self.mu_plus,
            "clauses": [c.to_json_dict() for c in self.clauses],
            "passed": self.passed,
        }


def _gen_record(g: Generator, p: HamiltonianParams) -> dict:
    return {
        "generator": g.label,
        "cz": cz_index(g),
        "t_degree": g.t_degree,
        "action": str(action(g, p)),
    }


def verify_generator_bounds(p: HamiltonianParams) -> GeneratorBoundsReport:
    """Exhaustive action/index bounds for all CZ 1..3 generators.

    Clauses, each checked over the full enumeration:
      (i)   lower and V-generators have action < 1;
      (ii)  upper and U-generators have action < E + 1 and t-degree N >= 0;
      (iii) upper generators of action > 1 satisfy the strict multiplicity
            bound k < (E + eps)/eps;
      (iv)  the mu-window guarantee: N <= mu_minus forces action > 1 and
            N > mu_plus forces action < 1 for upper and U-generators.
    """
    gens = enumerate_generators(p)
    mu_minus, mu_plus = mu_window(p)
    bound = multiplicity_bound(p)

    low: list[dict] = []
    upp: list[dict] = []
    strict: list[dict] = []
    window: list[dict] = []
    n_low = n_upp = n_strict = n_window = 0

    for g in gens:
        a = action(g, p)
        if g.side in ("upper", "lower"):
            # index window 1..3 forces 0 <= 2k - 4N <= 4 for both rows
            if not 0 <= 2 * g.k - 4 * g.t_degree <= 4:
                raise AssertionError(f"enumeration bound violated for {g.label}")
        if g.side in ("lower", "V"):
            n_low += 1
            if not a < 1:
                low.append(_gen_record(g, p))
        else:
            n_upp += 1
            if not (a < p.E + 1 and g.t_degree >= 0):
                upp.append(_gen_record(g, p))
            if g.side == "upper" and a > 1:
                n_strict += 1
                if not Fraction(g.k) < bound:
                    strict.append(_gen_record(g, p))
            n_window += 1
            if g.t_degree <= mu_minus and not a > 1:
                window.append(_gen_record(g, p))
            if g.t_degree > mu_plus and not a < 1:
                window.append(_gen_record(g, p))

    clauses = [
        ClauseResult("lower_and_V_actions_below_1", not low, n_low, low),
        ClauseResult("upper_and_U_actions_below_E_plus_1_and_N_nonneg", not upp, n_upp, upp),
        ClauseResult("upper_above_action_1_strict_multiplicity", not strict, n_strict, strict),
        ClauseResult("mu_window_guarantee", not window, n_window, window),
    ]
    return GeneratorBoundsReport(
        params=p,
        mu_minus=mu_minus,
        mu_plus=mu_plus,
        clauses=clauses,
        passed=all(c.passed for c in clauses),
    )


# ----------------------------------------------------- index case analysis


@dataclass(frozen=True)
class IndexSolution:
    """One solution of the rigidity index system for a differential term.

    The unknowns: h is the difference of Morse-index offsets of the two
    ends (an odd integer in [-3, 3]), delta the degree of the projection of
    the connecting curve to the cut divisor, l_plus/l_minus the numbers of
    positive/negative interior punctures.  They satisfy

        2*(k_plus - k_minus) + h + 4*l_plus = 1
        l_plus + l_minus = (1 - h)/2 - 2*delta

    (the second combines the index identity with the Chern-class-2 count of
    zeros and poles of a multisection).  Each negative puncture is capped by
    exactly 2 rigid planes, whence weight = 2**l_minus.  Solutions with
    h = -3 and delta = 0 are geometrically excluded: the connecting curve
    then lies in one fibre, and the asymptotic fibre circle generically
    misses the maximum point it would have to hit.
    """

    h: int
    delta: int
    l_plus: int
    l_minus: int

    def __post_init__(self):
        if (1 - self.h) % 2 != 0:
            raise ValueError("h must be odd")
        if self.l_plus + self.l_minus != (1 - self.h) // 2 - 2 * self.delta:
            raise ValueError("puncture counts violate the index/Chern relation")

    @property
    def k_shift(self) -> int:
        """k_plus - k_minus forced by the index identity."""
        num = 1 - self.h - 4 * self.l_plus
        assert num % 2 == 0
        return num // 2

    @property
    def weight(self) -> int:
        return 2 ** self.l_minus

    @property
    def excluded(self) -> bool:
        return self.h == -3 and self.delta == 0

    @property
    def exclusion_reason(self) -> str | None:
        if self.excluded:
            return (
                "single-fibre curve from a Morse minimum to a Morse maximum: "
                "the asymptotic fibre circle generically misses the maximum "
                "(dimension count)"
            )
        return None

    def to_json_dict(self) -> dict:
        return {
            "h": self.h,
            "delta": self.delta,
            "l_plus": self.l_plus,
            "l_minus": self.l_minus,
            "k_shift": self.k_shift,
            "weight": self.weight,
            "excluded": self.excluded,
            "exclusion_reason": self.exclusion_reason,
        }


CONSTRAINTS = ("=0", ">=1", ">=2")


def index_case_analysis(l_plus_constraint: str) -> list[IndexSolution]:
    """All index solutions subject to a constraint on l_plus.

    Enumerates h in [-3, 3], delta >= 0 and puncture splittings; the budget
    (1 - h)/2 - 2*delta caps everything, so the list is finite.  Excluded
    solutions are returned with their flag so callers can see exactly what
    was discarded and why.
    """
    if l_plus_constraint not in CONSTRAINTS:
        raise ValueError(f"constraint must be one of {CONSTRAINTS}")
    sols: list[IndexSolution] = []
    for h in range(-3, 4):
        if (1 - h) % 2 != 0:
            continue
        delta = 0
        while True:
            budget = (1 - h) // 2 - 2 * delta
            if budget < 0:
                break
            for l_plus in range(0, budget + 1):
                l_minus = budget - l_plus
                if l_plus_constraint == "=0" and l_plus != 0:
                    continue
                if l_plus_constraint == ">=1" and l_plus < 1:
                    continue
                if l_plus_constraint == ">=2" and l_plus < 2:
                    continue
                sols.append(IndexSolution(h, delta, l_plus, l_minus))
            delta += 1
    sols.sort(key=lambda s: (-s.h, s.delta, s.l_plus))
    return sols


def surviving_solutions(l_plus_constraint: str) -> list[IndexSolution]:
    return [s for s in index_case_analysis(l_plus_constraint) if not s.excluded]
