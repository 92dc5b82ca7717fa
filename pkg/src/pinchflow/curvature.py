"""Pointwise pinching quantities and gradient-term quadratic forms.

The central scalar is the roundness deficit

    G = (k2 - k1)^2 / (k2 + k1)^2,

degree-zero homogeneous, zero exactly at umbilic points, with the
one-to-one relation r = 2/(1 - sqrt(G)) - 1 to the pinching ratio
r = k2/k1.  The quadratic forms evaluated here are the gradient terms in
the evolution equation of G along a contraction flow, in the orthonormal
frame diagonalising the second fundamental form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .speeds import SpeedFunction, second_derivative_components

# relative curvature gap below which a point counts as umbilic
UMBILIC_TOL = 1e-9


class DegeneratePointError(ValueError):
    """Raised when an operation is vacuous or singular at an umbilic point."""


@dataclass(frozen=True)
class PrincipalCurvatures:
    """Sorted positive pair of principal curvatures (kappa1 <= kappa2)."""

    kappa1: float
    kappa2: float

    def __post_init__(self):
        a, b = float(self.kappa1), float(self.kappa2)
        if not (a > 0.0 and b > 0.0) or not (math.isfinite(a) and math.isfinite(b)):
            raise ValueError(f"principal curvatures must be finite and positive, got ({a}, {b})")
        if a > b:
            a, b = b, a
        object.__setattr__(self, "kappa1", a)
        object.__setattr__(self, "kappa2", b)

    @property
    def is_umbilic(self) -> bool:
        return self.kappa2 - self.kappa1 < UMBILIC_TOL * (self.kappa1 + self.kappa2)


@dataclass(frozen=True)
class QFormGradients:
    """Independent frame components of the curvature gradient.

    The Codazzi identifications grad_1 h_12 = grad_2 h_11 and
    grad_2 h_12 = grad_1 h_22 are implicit: these four values are the
    complete gradient data in the diagonalising frame.
    """

    d1h22: float
    d2h11: float
    d1h11: float | None = None
    d2h22: float | None = None


def g_quantity(kappa: PrincipalCurvatures) -> float:
    """Roundness deficit (k2 - k1)^2/(k2 + k1)^2 in [0, 1)."""
    d = kappa.kappa2 - kappa.kappa1
    s = kappa.kappa2 + kappa.kappa1
    return (d / s) ** 2


def pinch_ratio(kappa: PrincipalCurvatures) -> float:
    """Ratio k2/k1 >= 1 with the sorted convention."""
    return kappa.kappa2 / kappa.kappa1


def ratio_from_g(g: float) -> float:
    """Invert the roundness deficit into a pinching ratio: 2/(1-sqrt(g)) - 1."""
    if not 0.0 <= g < 1.0:
        raise ValueError(f"g must lie in [0, 1), got {g}")
    return 2.0 / (1.0 - math.sqrt(g)) - 1.0


def g_gradient(kappa: PrincipalCurvatures) -> tuple[float, float]:
    """Closed-form (dG/dk1, dG/dk2); satisfies k1 G1 + k2 G2 = 0."""
    k1, k2 = kappa.kappa1, kappa.kappa2
    s3 = (k1 + k2) ** 3
    d = k2 - k1
    return -4.0 * k2 * d / s3, 4.0 * k1 * d / s3


def g_hessian(kappa: PrincipalCurvatures) -> tuple[float, float, float]:
    """Closed-form (G11, G12, G22) of the roundness deficit."""
    k1, k2 = kappa.kappa1, kappa.kappa2
    d = k2 - k1
    s = k1 + k2
    g11 = 2.0 / s**2 + 8.0 * d / s**3 + 6.0 * d**2 / s**4
    g22 = 2.0 / s**2 - 8.0 * d / s**3 + 6.0 * d**2 / s**4
    g12 = -2.0 / s**2 + 6.0 * d**2 / s**4
    return g11, g12, g22


def critical_ratio(alpha: float) -> float:
    """Threshold ratio 1 + 2/(alpha - 1) below which degree-alpha flows improve pinching."""
    if alpha <= 1.0:
        raise ValueError("critical ratio is defined for degree alpha > 1; "
                         "degree-1 flows preserve every pinching ratio")
    return 1.0 + 2.0 / (alpha - 1.0)


def gradient_conditions(kappa: PrincipalCurvatures,
                        d1h22: float = 0.0,
                        d2h11: float = 0.0) -> tuple[float, float]:
    """Complete the gradient components forced at a spatial maximum of G.

    Returns (d1h11, d2h22) = (-(G2/G1) d1h22, -(G1/G2) d2h11), which by the
    Euler relation equal (k1/k2) d1h22 and (k2/k1) d2h11.
    """
    if kappa.is_umbilic:
        raise DegeneratePointError("gradient conditions are vacuous at an umbilic point")
    g1, g2 = g_gradient(kappa)
    return -(g2 / g1) * d1h22, -(g1 / g2) * d2h11


def _g_1212(kappa: PrincipalCurvatures) -> float:
    """(G1 - G2)/(k1 - k2) with its umbilic limit G11 - G12 = 4/s^2."""
    k1, k2 = kappa.kappa1, kappa.kappa2
    s = k1 + k2
    if kappa.is_umbilic:
        return 4.0 / s**2
    g1, g2 = g_gradient(kappa)
    return (g1 - g2) / (k1 - k2)


def q_form_raw(speed: SpeedFunction, kappa: PrincipalCurvatures,
               grads: QFormGradients) -> float:
    """Full gradient quadratic form, all four components, no simplification.

    Evaluates (Gdot F ddot - Fdot G ddot) contracted with the curvature
    gradient in the diagonalising frame, using the Codazzi identifications
    for the mixed components.  Requires all four components of ``grads``.
    """
    if grads.d1h11 is None or grads.d2h22 is None:
        raise ValueError("q_form_raw needs all four gradient components; "
                         "use gradient_conditions to complete them")
    k1, k2 = kappa.kappa1, kappa.kappa2
    f1, f2 = (float(v) for v in speed.grad(k1, k2))
    f11, f12, f22, f1212, _ = second_derivative_components(speed, k1, k2)
    f11, f12, f22, f1212 = float(f11), float(f12), float(f22), float(f1212)
    for v in (f11, f12, f22, f1212):
        if not math.isfinite(v):
            raise ValueError("non-finite second derivative of the speed")
    g1, g2 = g_gradient(kappa)
    g11, g12, g22 = g_hessian(kappa)
    g1212 = _g_1212(kappa)

    a, b = grads.d1h11, grads.d1h22
    c, d = grads.d2h11, grads.d2h22
    q = (g1 * f11 - f1 * g11) * a * a \
        + (g1 * f22 - f1 * g22) * b * b \
        + 2.0 * (g1 * f12 - f1 * g12) * a * b \
        + (g2 * f11 - f2 * g11) * c * c \
        + (g2 * f22 - f2 * g22) * d * d \
        + 2.0 * (g2 * f12 - f2 * g12) * c * d
    # mixed components via Codazzi: grad_1 h_12 = d2h11, grad_2 h_12 = d1h22
    q += 2.0 * (g1 * f1212 - f1 * g1212) * c * c
    q += 2.0 * (g2 * f1212 - f2 * g1212) * b * b
    return q


def q_form_degree_one(speed: SpeedFunction, kappa: PrincipalCurvatures,
                      d1h22: float, d2h11: float) -> float:
    """Simplified degree-1 form 2 F G1/(k2 (k2 - k1)) ((d1h22)^2 + (d2h11)^2).

    Non-positive for every monotone degree-1 speed.  At umbilic points the
    coefficient is evaluated through the limit G1/(k2 - k1) -> -4 k2/s^3.
    """
    if abs(speed.alpha - 1.0) > 1e-12:
        raise ValueError(f"q_form_degree_one requires a degree-1 speed, got alpha={speed.alpha}")
    k1, k2 = kappa.kappa1, kappa.kappa2
    f = float(speed.value(k1, k2))
    if kappa.is_umbilic:
        coeff = -8.0 * f / (k1 + k2) ** 3
    else:
        g1, _ = g_gradient(kappa)
        coeff = 2.0 * f * g1 / (k2 * (k2 - k1))
    return coeff * (d1h22 * d1h22 + d2h11 * d2h11)


def q_form_degree_alpha(speed: SpeedFunction, kappa: PrincipalCurvatures,
                        d1h22: float, d2h11: float) -> float:
    """Degree-alpha gradient form with explicitly split coefficients.

    The coefficient of (d2h11)^2 changes sign exactly at the critical
    pinching ratio 1 + 2/(alpha - 1).  Strictly non-umbilic input required
    (the expression carries explicit k2 - k1 denominators).
    """
    if speed.alpha < 1.0:
        raise ValueError(f"q_form_degree_alpha requires degree alpha >= 1, got {speed.alpha}")
    if kappa.is_umbilic:
        raise DegeneratePointError("q_form_degree_alpha is singular at umbilic points; "
                                   "use q_form_degree_one for alpha = 1")
    k1, k2 = kappa.kappa1, kappa.kappa2
    a = speed.alpha
    f = float(speed.value(k1, k2))
    g1, g2 = g_gradient(kappa)
    c1 = g1 * (a * (a - 1.0) * f / k2**2 + 2.0 * a * f / (k2 * (k2 - k1)))
    c2 = g2 * (a * (a - 1.0) * f / k1**2 - 2.0 * a * f / (k1 * (k2 - k1)))
    return c1 * d1h22 * d1h22 + c2 * d2h11 * d2h11


def q_form_degree_alpha_coefficients(speed: SpeedFunction,
                                     kappa: PrincipalCurvatures) -> tuple[float, float]:
    """The two coefficients of the degree-alpha form, for sign scans."""
    if kappa.is_umbilic:
        raise DegeneratePointError("coefficients are singular at umbilic points")
    k1, k2 = kappa.kappa1, kappa.kappa2
    a = speed.alpha
    f = float(speed.value(k1, k2))
    g1, g2 = g_gradient(kappa)
    c1 = g1 * (a * (a - 1.0) * f / k2**2 + 2.0 * a * f / (k2 * (k2 - k1)))
    c2 = g2 * (a * (a - 1.0) * f / k1**2 - 2.0 * a * f / (k1 * (k2 - k1)))
    return c1, c2
