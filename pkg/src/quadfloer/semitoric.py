"""Semitoric geometry of the product of two unit spheres.

The moment-type map Phi = (F, G) with F = z1 + z2 and
G = x1 x2 + y1 y2 + z1 z2 defines a semitoric system (F generates a circle
action).  This module classifies its fibres N_{a,b} = Phi^{-1}(a, b) and
certifies displaceability two ways:

  * a != 0: the anti-symplectic-looking involution
    (x1, y1, z1, x2, y2, z2) -> (-x1, y1, -z1, -x2, y2, -z2) maps N_{a,b}
    onto N_{-a,b}, which is disjoint from it;
  * a = 0, b in (-1/2, 1): inside the hypersurface {z1 + z2 = 0} the fibre
    projects to the closed curve alpha_b = {z^2 = (cos t - b)/(cos t + 1)}
    in the cylinder (-1, 1) x S^1 with area form dz dt / (4 pi); the curve
    encloses area < 1/2, half the cylinder, so it can be displaced there.

Unlike the exact-arithmetic modules, this one is floating point with
explicit tolerances: 1e-12 for manifold membership, 1e-10 absolute for the
quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import quad

SPHERE_TOL = 1e-12

CLASS_EMPTY = "empty"
CLASS_TORUS = "torus"
CLASS_ANTIDIAGONAL = "anti_diagonal_L"
CLASS_MONOTONE = "monotone_torus_K"
CLASS_DIAGONAL = "diagonal_boundary"

DISP_INVOLUTION = "displaceable_via_involution"
DISP_INSIDE_PI = "displaceable_inside_pi"
DISP_UNKNOWN = "not_known_displaceable"

SPECIAL_TOL = 1e-12  # detection of the special fibres K, L and the diagonal


def check_on_spheres(pt: Sequence[float]) -> None:
    x1, y1, z1, x2, y2, z2 = pt
    r1 = x1 * x1 + y1 * y1 + z1 * z1
    r2 = x2 * x2 + y2 * y2 + z2 * z2
    if abs(r1 - 1.0) > SPHERE_TOL or abs(r2 - 1.0) > SPHERE_TOL:
        raise ValueError(f"point not on the product of unit spheres: |p1|^2={r1}, |p2|^2={r2}")


def moment_map(pt: Sequence[float]) -> tuple[float, float]:
    """(F, G) of a point on the product of spheres; rejects off-manifold input.

    Cauchy-Schwarz bounds the image by |F| <= 2 and |G| <= 1.
    """
    check_on_spheres(pt)
    x1, y1, z1, x2, y2, z2 = pt
    return z1 + z2, x1 * x2 + y1 * y2 + z1 * z2


def involution(pt: Sequence[float]) -> tuple[float, ...]:
    x1, y1, z1, x2, y2, z2 = pt
    return (-x1, y1, -z1, -x2, y2, -z2)


def p_norm(G: float) -> float:
    """The cotangent-model Hamiltonian |p| = sqrt((1 + G) / 2)."""
    if not -1.0 <= G <= 1.0:
        raise ValueError("G must lie in [-1, 1]")
    return math.sqrt((1.0 + G) / 2.0)


# ----------------------------------------------------------- fibre sampling


def _phi_bounds(a: float) -> tuple[float, float]:
    return max(-1.0, a - 1.0), min(1.0, a + 1.0)


def _fiber_gap(a: float, b: float, z1: float) -> float:
    """Negative when a fibre point with first height z1 exists.

    For fixed z1 (and z2 = a - z1) the reachable G values form the interval
    z1 z2 +- rho1 rho2, so the gap is |b - z1 z2| - rho1 rho2.
    """
    z2 = a - z1
    if abs(z1) > 1.0 or abs(z2) > 1.0:
        return math.inf
    rho = math.sqrt(max(0.0, 1.0 - z1 * z1) * max(0.0, 1.0 - z2 * z2))
    return abs(b - z1 * z2) - rho


def fiber_nonempty(a: float, b: float, grid: int = 4001, tol: float = 1e-9) -> bool:
    """Sampled nonemptiness of N_{a,b} over a z1 grid."""
    if abs(a) > 2.0 or abs(b) > 1.0:
        return False
    lo, hi = _phi_bounds(a)
    if lo > hi:
        return False
    for i in range(grid):
        z1 = lo + (hi - lo) * i / (grid - 1) if grid > 1 else lo
        if _fiber_gap(a, b, z1) <= tol:
            return True
    return False


def sample_fiber(a: float, b: float, n: int, seed: int = 0) -> np.ndarray:
    """n points of N_{a,b}, exactly parameterised (up to roundoff).

    Draws z1 from the valid band by rejection, phi1 uniformly, and solves
    the angle difference from G = z1 z2 + rho1 rho2 cos(phi1 - phi2).
    """
    rng = np.random.default_rng(seed)
    lo, hi = _phi_bounds(a)
    pts = np.empty((n, 6))
    got = 0
    attempts = 0
    while got < n:
        attempts += 1
        if attempts > 10000 * (n + 1):
            raise ValueError(f"fibre ({a}, {b}) appears to be empty or degenerate")
        z1 = rng.uniform(lo, hi)
        if _fiber_gap(a, b, z1) > 0.0:
            continue
        z2 = a - z1
        rho1 = math.sqrt(max(0.0, 1.0 - z1 * z1))
        rho2 = math.sqrt(max(0.0, 1.0 - z2 * z2))
        c = (b - z1 * z2) / (rho1 * rho2) if rho1 * rho2 > 0 else 1.0
        dphi = math.acos(min(1.0, max(-1.0, c))) * rng.choice([-1.0, 1.0])
        phi1 = rng.uniform(-math.pi, math.pi)
        phi2 = phi1 - dphi
        pts[got] = (
            rho1 * math.cos(phi1), rho1 * math.sin(phi1), z1,
            rho2 * math.cos(phi2), rho2 * math.sin(phi2), z2,
        )
        got += 1
    return pts


@dataclass
class InvolutionCertificate:
    a: float
    b: float
    displaced: bool
    fiber_empty: bool
    samples_checked: int
    max_image_error: float

    def to_json_dict(self) -> dict:
        return self.__dict__.copy()


def involution_displaces(
    a: float, b: float, samples: int = 100, seed: int = 0
) -> InvolutionCertificate:
    """Certify displacement of N_{a,b} by the sign-flip involution.

    The involution maps N_{a,b} into N_{-a,b} (symbolically: F is odd and G
    is even under it), so the fibre is displaced exactly when a != 0.  The
    certificate carries a sampled verification: images of fibre points land
    on the (-a, b) fibre within 1e-12.
    """
    empty = not fiber_nonempty(a, b)
    max_err = 0.0
    checked = 0
    if not empty and samples > 0:
        for pt in sample_fiber(a, b, samples, seed):
            fa, gb = moment_map(involution(pt))
            max_err = max(max_err, abs(fa - (-a)), abs(gb - b))
            checked += 1
        if max_err > 1e-12:
            raise AssertionError(
                f"involution image strays from the (-a, b) fibre by {max_err}"
            )
    return InvolutionCertificate(
        a=a, b=b, displaced=(a != 0 and not empty), fiber_empty=empty,
        samples_checked=checked, max_image_error=max_err,
    )


# ------------------------------------------------------------- curve areas


def alpha_area(b: float) -> float:
    """Area (for dz dt / 4 pi) enclosed by alpha_b in the cylinder.

    With t = cos(theta) the integral becomes
        (1/pi) * int_b^1 sqrt(t - b) * (1 - t)^(-1/2) / (1 + t) dt,
    whose endpoint singularities are handled by weighted quadrature
    ((t - b)^(1/2) at the left endpoint, (1 - t)^(-1/2) at the right), to
    absolute tolerance 1e-10.  The total cylinder area is 1, and the value
    at b = -1/2 is exactly 1/2.
    """
    if not -1.0 < b < 1.0:
        raise ValueError("b must lie strictly inside (-1, 1)")
    val, err = quad(
        lambda t: 1.0 / (1.0 + t),
        b, 1.0,
        weight="alg", wvar=(0.5, -0.5),
        epsabs=1e-13, epsrel=1e-13, limit=200,
    )
    if err > 1e-10:
        raise ArithmeticError(f"quadrature error estimate {err} above tolerance")
    return val / math.pi


def alpha_area_mc(b: float, n: int = 10**7, seed: int = 12345) -> tuple[float, float]:
    """Monte-Carlo oracle for `alpha_area`: hit fraction of the enclosed set.

    The cylinder has unit area under dz dt / 4 pi, so the enclosed area is
    the probability that a uniform sample satisfies
    z^2 (cos t + 1) <= cos t - b.  Returns (estimate, standard error).
    """
    rng = np.random.default_rng(seed)
    z = rng.uniform(-1.0, 1.0, n)
    t = rng.uniform(-math.pi, math.pi, n)
    ct = np.cos(t)
    hits = np.count_nonzero(z * z * (ct + 1.0) <= ct - b)
    p = hits / n
    return p, math.sqrt(max(p * (1.0 - p), 1e-300) / n)


def area_table(bs: Sequence[float]) -> list[tuple[float, float]]:
    return [(float(b), alpha_area(float(b))) for b in bs]


def area_table_csv(bs: Sequence[float]) -> str:
    lines = ["b,area"]
    for b, area in area_table(bs):
        lines.append(f"{b!r},{area!r}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------- classification


@dataclass
class MomentFiber:
    a: float
    b: float
    classification: str
    displaceability: str | None  # None for empty fibres
    witness: dict

    def to_json_dict(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "classification": self.classification,
            "displaceability": self.displaceability,
            "witness": self.witness,
        }


def classify_fiber(a: float, b: float, samples: int = 50, seed: int = 0) -> MomentFiber:
    """Classify N_{a,b} and certify displaceability where known.

    Special fibres: the monotone torus K at (0, -1/2), the anti-diagonal
    sphere L at (0, -1), and fibres on the diagonal cut {G = 1}.  Every
    other nonempty fibre is a (possibly degenerate boundary) torus.
    Certificates: the involution for a != 0; the enclosed-area witness
    area(alpha_b) < 1/2 for a = 0 and -1/2 < b < 1.  K, L and the a = 0
    fibres below the monotone level carry no displacement certificate.
    """
    if not fiber_nonempty(a, b):
        return MomentFiber(a, b, CLASS_EMPTY, None, {})
    if abs(a) <= SPECIAL_TOL and abs(b + 0.5) <= SPECIAL_TOL:
        return MomentFiber(a, b, CLASS_MONOTONE, DISP_UNKNOWN, {})
    if abs(a) <= SPECIAL_TOL and abs(b + 1.0) <= SPECIAL_TOL:
        return MomentFiber(a, b, CLASS_ANTIDIAGONAL, DISP_UNKNOWN, {})
    classification = CLASS_DIAGONAL if abs(b - 1.0) <= SPECIAL_TOL else CLASS_TORUS
    if a != 0:
        cert = involution_displaces(a, b, samples=samples, seed=seed)
        return MomentFiber(a, b, classification, DISP_INVOLUTION, cert.to_json_dict())
    if -0.5 < b < 1.0:
        area = alpha_area(b)
        if not area < 0.5:
            raise AssertionError(f"area witness failed: area(alpha_{b}) = {area} >= 1/2")
        return MomentFiber(a, b, classification, DISP_INSIDE_PI, {"alpha_area": area})
    return MomentFiber(a, b, classification, DISP_UNKNOWN, {})


# -------------------------------------------------------------- image cloud


def sphere_samples(n: int, seed: int) -> np.ndarray:
    """n uniform points on the product of spheres (normalised Gaussians)."""
    rng = np.random.default_rng(seed)
    v = rng.normal(size=(n, 6))
    v[:, :3] /= np.linalg.norm(v[:, :3], axis=1, keepdims=True)
    v[:, 3:] /= np.linalg.norm(v[:, 3:], axis=1, keepdims=True)
    return v

def moment_image_sample(n: int, seed: int = 0) -> np.ndarray:
    """(n, 2) array of (F, G) values of uniform sample points; deterministic
    for a fixed seed."""
    if n < 1:
        raise ValueError("n must be >= 1")
    pts = sphere_samples(n, seed)
    F = pts[:, 2] + pts[:, 5]
    G = np.sum(pts[:, :3] * pts[:, 3:], axis=1)
    return np.column_stack([F, G])


def moment_image_svg(points: np.ndarray, out_path: str | None = None) -> str:
    """Static SVG of the image cloud with the marked fibres.

    Shows the sampled (F, G) cloud, the line G = -1/2, and the special
    points (0, -1) (the sphere L) and (0, -1/2) (the monotone torus K).
    """
    width, height = 640, 420
    pad = 40.0

    def sx(F: float) -> float:
        return pad + (F + 2.0) / 4.0 * (width - 2 * pad)

    def sy(G: float) -> float:
        return height - pad - (G + 1.0) / 2.0 * (height - 2 * pad)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for F, G in points:
        parts.append(
            f'<circle cx="{sx(F):.2f}" cy="{sy(G):.2f}" r="1.2" fill="#4477aa" fill-opacity="0.45"/>'
        )
    y_half = sy(-0.5)
    parts.append(
        f'<line x1="{sx(-2.0):.2f}" y1="{y_half:.2f}" x2="{sx(2.0):.2f}" y2="{y_half:.2f}" '
        'stroke="#cc3311" stroke-dasharray="6 4" stroke-width="1.5"/>'
    )
    parts.append(
        f'<text x="{sx(2.0) - 90:.2f}" y="{y_half - 6:.2f}" font-size="13" fill="#cc3311">G = -1/2</text>'
    )
    for (fa, gb, name, color) in ((0.0, -1.0, "L", "#000000"), (0.0, -0.5, "K", "#ee7733")):
        parts.append(
            f'<circle cx="{sx(fa):.2f}" cy="{sy(gb):.2f}" r="4" fill="{color}"/>'
        )
        parts.append(
            f'<text x="{sx(fa) + 8:.2f}" y="{sy(gb) + 4:.2f}" font-size="14" fill="{color}">{name}</text>'
        )
    parts.append("</svg>")
    svg = "\n".join(parts) + "\n"
    if out_path is not None:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(svg)
    return svg
