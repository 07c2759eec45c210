"""Truncated Laurent arithmetic in the formal variable t.

Coefficient bookkeeping for the deformation ring of series
sum_{s >= 0} c_s t^{-s}: finitely supported elements restricted to a window
of allowed powers, plus the grading rule that a factor of t shifts degree by
4 and action by 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .linalg import ZERO, _frac

DEGREE_SHIFT_PER_T_POWER = 4


def graded_degree(base_degree: int, t_power: int) -> int:
    """Degree of a class times t^N: base degree plus 4N."""
    return base_degree + DEGREE_SHIFT_PER_T_POWER * t_power


@dataclass(frozen=True)
class GradingRule:
    """Shifts induced by a power of t: degree by 4, action by 1."""

    degree_shift_per_t_power: int = DEGREE_SHIFT_PER_T_POWER
    action_shift_per_t_power: Fraction = Fraction(1)

    def degree(self, base_degree: int, t_power: int) -> int:
        return base_degree + self.degree_shift_per_t_power * t_power

    def action(self, base_action, t_power: int) -> Fraction:
        return _frac(base_action) + self.action_shift_per_t_power * t_power


class LaurentElement:
    """Finite rational combination of powers of t inside a power window.

    `window` is the inclusive range [lo, hi] of allowed powers.  Stored
    powers always lie inside the window and zero coefficients are dropped.
    Products silently discard powers that fall outside both factors'
    windows, but record the loss on the `truncated` flag.
    """

    __slots__ = ("coeffs", "window", "truncated")

    def __init__(
        self,
        coeffs: Mapping[int, object],
        window: tuple[int, int],
        truncated: bool = False,
    ):
        lo, hi = window
        if lo > hi:
            raise ValueError("window lower bound exceeds upper bound")
        store: dict[int, Fraction] = {}
        for p, v in coeffs.items():
            fv = _frac(v)
            if not fv:
                continue
            if not lo <= p <= hi:
                raise ValueError(f"power {p} outside window [{lo}, {hi}]")
            store[p] = fv
        self.coeffs = store
        self.window = (lo, hi)
        self.truncated = bool(truncated)

    @classmethod
    def zero(cls, window: tuple[int, int]) -> "LaurentElement":
        return cls({}, window)

    @classmethod
    def one(cls, window: tuple[int, int]) -> "LaurentElement":
        return cls({0: 1}, window)

    @classmethod
    def t_power(cls, p: int, window: tuple[int, int], coeff=1) -> "LaurentElement":
        return cls({p: coeff}, window)

    def coefficient(self, p: int) -> Fraction:
        return self.coeffs.get(p, ZERO)

    @property
    def support(self) -> list[int]:
        return sorted(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LaurentElement)
            and self.coeffs == other.coeffs
            and self.window == other.window
        )

    def __hash__(self):
        return hash((frozenset(self.coeffs.items()), self.window))

    def __add__(self, other: "LaurentElement") -> "LaurentElement":
        window = (min(self.window[0], other.window[0]), max(self.window[1], other.window[1]))
        coeffs = dict(self.coeffs)
        for p, v in other.coeffs.items():
            coeffs[p] = coeffs.get(p, ZERO) + v
        return LaurentElement(coeffs, window, self.truncated or other.truncated)

    def __neg__(self) -> "LaurentElement":
        return LaurentElement({p: -v for p, v in self.coeffs.items()}, self.window, self.truncated)

    def __sub__(self, other: "LaurentElement") -> "LaurentElement":
        return self + (-other)

    def scale(self, c) -> "LaurentElement":
        fc = _frac(c)
        return LaurentElement(
            {p: fc * v for p, v in self.coeffs.items()}, self.window, self.truncated
        )

    def __mul__(self, other: "LaurentElement") -> "LaurentElement":
        return laurent_mul(self, other)

    def __repr__(self) -> str:
        if not self.coeffs:
            body = "0"
        else:
            parts = []
            for p in sorted(self.coeffs, reverse=True):
                v = self.coeffs[p]
                if p == 0:
                    parts.append(f"{v}")
                else:
                    parts.append(f"{v}*t^{p}")
            body = " + ".join(parts)
        flag = ", truncated" if self.truncated else ""
        return f"LaurentElement({body}, window={self.window}{flag})"


def laurent_mul(a: LaurentElement, b: LaurentElement) -> LaurentElement:
    """Convolution product restricted to the factors' windows.

    A resulting power is kept when it lies inside at least one of the two
    windows; powers outside both are discarded and the result is marked
    `truncated`.  The result window is the hull of the two input windows.
    """
    window = (min(a.window[0], b.window[0]), max(a.window[1], b.window[1]))
    coeffs: dict[int, Fraction] = {}
    dropped = False
    for pa, va in a.coeffs.items():
        for pb, vb in b.coeffs.items():
            p = pa + pb
            keep = (a.window[0] <= p <= a.window[1]) or (b.window[0] <= p <= b.window[1])
            if not keep:
                dropped = True
                continue
            coeffs[p] = coeffs.get(p, ZERO) + va * vb
    return LaurentElement(coeffs, window, a.truncated or b.truncated or dropped)
