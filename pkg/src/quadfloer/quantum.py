"""The degree-4 quantum homology algebra of the monotone product of spheres.

Only the degree-4 graded piece carries the ring structure used here.  In
the basis {1, Pt} (fundamental class and point class times t) the product
is determined by 1 being the unit and (Pt) * (Pt) = 1; the latter is forced
by the idempotency of e_pm = (1 +- Pt)/2, see `derive_pt_square`.  The
algebra splits as the sum of the two one-dimensional fields generated by
the idempotents.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import laurent
from .linalg import _frac


@dataclass(frozen=True)
class QuantumClass:
    """a*1 + b*(Pt) in the degree-4 component."""

    unit: Fraction
    point_t: Fraction

    def __post_init__(self):
        object.__setattr__(self, "unit", _frac(self.unit))
        object.__setattr__(self, "point_t", _frac(self.point_t))

    def __add__(self, other: "QuantumClass") -> "QuantumClass":
        return QuantumClass(self.unit + other.unit, self.point_t + other.point_t)

    def __sub__(self, other: "QuantumClass") -> "QuantumClass":
        return QuantumClass(self.unit - other.unit, self.point_t - other.point_t)

    def __mul__(self, other: "QuantumClass") -> "QuantumClass":
        return qh4_mul(self, other)

    def scale(self, c) -> "QuantumClass":
        fc = _frac(c)
        return QuantumClass(fc * self.unit, fc * self.point_t)

    def is_zero(self) -> bool:
        return not self.unit and not self.point_t

    def __repr__(self) -> str:
        return f"QuantumClass({self.unit} + {self.point_t}*Pt)"


ONE = QuantumClass(Fraction(1), Fraction(0))
PT = QuantumClass(Fraction(0), Fraction(1))
ZERO_CLASS = QuantumClass(Fraction(0), Fraction(0))


def qh4_mul(u: QuantumClass, v: QuantumClass) -> QuantumClass:
    """Bilinear product with 1*1 = 1, 1*(Pt) = Pt and (Pt)*(Pt) = 1."""
    return QuantumClass(
        u.unit * v.unit + u.point_t * v.point_t,
        u.unit * v.point_t + u.point_t * v.unit,
    )


def idempotents() -> tuple[QuantumClass, QuantumClass]:
    """The splitting idempotents e_pm = (1 +- Pt)/2.

    Verifies e+ + e- = 1, e+ * e- = 0 and e_pm^2 = e_pm before returning;
    a failure would mean the product table is corrupt.
    """
    e_plus = QuantumClass(Fraction(1, 2), Fraction(1, 2))
    e_minus = QuantumClass(Fraction(1, 2), Fraction(-1, 2))
    if e_plus + e_minus != ONE:
        raise AssertionError("idempotents do not sum to the unit")
    if not qh4_mul(e_plus, e_minus).is_zero():
        raise AssertionError("idempotents do not annihilate each other")
    if qh4_mul(e_plus, e_plus) != e_plus or qh4_mul(e_minus, e_minus) != e_minus:
        raise AssertionError("idempotents are not idempotent")
    return e_plus, e_minus


def derive_pt_square() -> QuantumClass:
    """Solve for (Pt)^2 = c*1 + d*Pt from idempotency of (1 + Pt)/2.

    Expanding ((1 + Pt)/2)^2 = (1 + Pt)/2 gives (1 + c)/4 = 1/2 and
    (2 + d)/4 = 1/2, so c = 1 and d = 0: the relation (Pt)^2 = 1 is forced
    rather than an independent input.
    """
    c = Fraction(2) * 2 - 1  # (1 + c)/4 = 1/2
    d = Fraction(2) * 2 - 2  # (2 + d)/4 = 1/2
    forced = QuantumClass(Fraction(c), Fraction(d))
    if qh4_mul(PT, PT) != forced:
        raise AssertionError("product table disagrees with the forced relation")
    return forced


def grading_check(class_degree: int, t_power: int) -> int:
    """Degree of a class times t^N; delegates to the shared grading rule.

    Both basis vectors of the algebra sit in degree 4: the fundamental
    class with (4, 0) and Pt with (0, 1).
    """
    return laurent.graded_degree(class_degree, t_power)
