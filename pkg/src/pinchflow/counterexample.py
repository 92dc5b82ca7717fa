"""Surfaces of revolution with a prescribed ratio of principal curvatures.

The construction prescribes the pointwise curvature ratio f(u) as a
function of distance u from the rotation axis and integrates the exact
first integral

    (u')^2 = exp( 2 * integral_u^U f(z)/z dz ) - 1

outward from the equator u = U (where u' = 0) to the axis.  With f == r1
on u >= u0 and f descending smoothly to 1 below u0, the resulting body
attains its pinching ratio r1 on an open annulus, on which the printed
time derivative of the roundness deficit can be evaluated to find
pinching-violation witnesses for speeds of homogeneity degree above one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .curvature import PrincipalCurvatures, g_gradient
from .geometry import RevolutionProfile
from .speeds import SpeedFunction

# fraction of U at which the outward integration is cut; the remaining
# x-extent is O(u_cut^2) and far below any quadrature tolerance in use
_U_CUT = 1e-9


@dataclass(frozen=True)
class PinchProfileSpec:
    """Parameters of the prescribed-ratio body.

    r1 is the target pinching ratio, attained for u >= u0; U is the
    equator radius.  quad_tol controls the adaptive integration.
    """

    r1: float
    u0: float
    U: float = 1.0
    quad_tol: float = 1e-10

    def __post_init__(self):
        if not self.r1 > 1.0:
            raise ValueError(f"target ratio r1 must exceed 1, got {self.r1}")
        if not 0.0 < self.u0 < self.U:
            raise ValueError(f"need 0 < u0 < U, got u0={self.u0}, U={self.U}")
        if not 0.0 < self.quad_tol < 1e-2:
            raise ValueError("quad_tol out of range")


def _smooth_step(t):
    """C-infinity step: 0 for t <= 0, 1 for t >= 1, psi/(psi + psi(1-.)) between."""
    t = np.asarray(t, float)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(t > 0.0, np.exp(-1.0 / np.maximum(t, 1e-300)), 0.0)
        b = np.where(t < 1.0, np.exp(-1.0 / np.maximum(1.0 - t, 1e-300)), 0.0)
    out = np.where(t <= 0.0, 0.0, np.where(t >= 1.0, 1.0, a / (a + b)))
    return out if out.ndim else float(out)


def transition_function(spec: PinchProfileSpec, u):
    """Prescribed ratio f(u): 1 at the axis, r1 on the annulus u >= u0."""
    t = np.asarray(u, float) / spec.u0
    out = 1.0 + (spec.r1 - 1.0) * _smooth_step(t)
    return out if np.ndim(out) else float(out)


def _integrate_first_integral(f_of_u, U: float, quad_tol: float):
    """Integrate the profile in the regularizing variable v = sqrt(U - u).

    Carries y = [I, x] with I the running inner integral of f(z)/z from u
    to U and x the arc coordinate; the square-root substitution removes the
    integrable endpoint singularity at the equator.  Returns the solver
    result (dense output) together with v_end and the half-length L.
    """
    fU = float(f_of_u(U))

    def rhs(v, y):
        u = U - v * v
        e1 = math.expm1(2.0 * y[0])
        return [2.0 * v * f_of_u(u) / u, 2.0 * v / math.sqrt(e1)]

    v0 = 1e-8 * math.sqrt(U)
    y0 = [fU * v0**2 / U, math.sqrt(2.0 * U / fU) * v0]
    v_end = math.sqrt(U - _U_CUT * U)
    tol = max(quad_tol * 1e-3, 1e-13)
    sol = solve_ivp(rhs, (v0, v_end), y0, method="DOP853",
                    rtol=tol, atol=tol, dense_output=True)
    if not sol.success:
        raise RuntimeError(f"profile quadrature failed: {sol.message}")
    I_end, x_end = sol.y[0, -1], sol.y[1, -1]
    # tail from u = u_cut to 0: |u'| ~ A/u with A = u |u'| at the cut
    u_cut = _U_CUT * U
    A = u_cut * math.sqrt(math.expm1(2.0 * I_end))
    L = x_end + u_cut**2 / (2.0 * A)
    return sol, v0, v_end, L


def _profile_from_solution(f_of_u, U, sol, v0, v_end, L, m) -> RevolutionProfile:
    """Sample the integrated half-profile on a v-graded ladder and mirror it.

    The ladder is uniform in v = sqrt(U - u), which clusters x-nodes near
    the poles exactly where the graph steepens; x and u stay smooth
    functions of the node index across the whole ladder, so the
    index-parametric finite differences downstream converge at full
    order.  m is rounded to the nearest odd count 2k + 1.
    """
    k = max(m // 2, 8)
    v = np.linspace(0.0, math.sqrt(U), k + 1)
    u_half = U - v**2
    x_half = np.empty_like(v)
    up_half = np.empty_like(v)
    x_half[0] = 0.0
    up_half[0] = 0.0
    inner = (v >= v0) & (v <= v_end)
    yv = sol.sol(v[inner])
    x_half[inner] = yv[1]
    up_half[inner] = -np.sqrt(np.expm1(2.0 * yv[0]))
    small = (v > 0.0) & (v < v0)
    if np.any(small):
        fU = float(f_of_u(U))
        x_half[small] = math.sqrt(2.0 * U / fU) * v[small]
        up_half[small] = -np.sqrt(np.expm1(2.0 * fU * v[small] ** 2 / U))
    x_half[-1] = L
    u_half[-1] = 0.0
    up_half[-1] = -np.inf

    x = np.concatenate((-x_half[::-1], x_half[1:]))
    u = np.concatenate((u_half[::-1], u_half[1:]))
    up = np.concatenate((-up_half[::-1], up_half[1:]))
    return RevolutionProfile(x, u, uprime=up)


def build_profile(spec: PinchProfileSpec, m: int) -> RevolutionProfile:
    """Build the prescribed-ratio body for the smooth-step f of ``spec``."""
    f = lambda u: float(transition_function(spec, u))
    sol, v0, v_end, L = _integrate_first_integral(f, spec.U, spec.quad_tol)
    return _profile_from_solution(f, spec.U, sol, v0, v_end, L, m)


def build_constant_ratio_profile(ratio: float, U: float, m: int,
                                 quad_tol: float = 1e-10) -> RevolutionProfile:
    """Body with constant curvature ratio f == ratio >= 1 (ratio 1: a ball)."""
    if ratio < 1.0:
        raise ValueError("constant ratio must be >= 1")
    f = lambda u: ratio
    sol, v0, v_end, L = _integrate_first_integral(f, U, quad_tol)
    return _profile_from_solution(f, U, sol, v0, v_end, L, m)


def dgdt_annulus(speed: SpeedFunction, r1: float, u: float, uprime: float) -> float:
    """Time derivative of the roundness deficit on the constant-ratio annulus.

    Evaluates the printed display verbatim: the curvature pair is
    reconstructed from (u, u', r1), the zero-order term is always negative
    and the gradient term carries the bracket whose sign the witness scan
    relies on.
    """
    alpha = speed.alpha
    if alpha <= 1.0:
        raise ValueError("dgdt_annulus applies to speeds of degree alpha > 1")
    if r1 <= 1.0:
        raise ValueError("annulus ratio r1 must exceed 1")
    if u <= 0.0:
        raise ValueError("u must be positive")
    w = 1.0 + uprime**2
    k1 = 1.0 / (u * math.sqrt(w))
    k2 = r1 * k1
    kappa = PrincipalCurvatures(k1, k2)
    fval = float(speed.value(k1, k2))
    _, g2 = g_gradient(kappa)
    prefactor = fval * g2 * (r1 - 1.0) / (r1 * u**2 * w)
    bracket = alpha * ((alpha - 1.0) * r1 * (r1 - 1.0) - 2.0) * uprime**2 * w**3 \
        - (alpha - 1.0) * r1**2
    return prefactor * bracket


@dataclass(frozen=True)
class PinchViolationWitness:
    """Node on the constant-ratio annulus where the deficit grows in time."""

    x: float
    u: float
    uprime: float
    dgdt: float


def find_pinch_violation(speed: SpeedFunction, spec: PinchProfileSpec,
                         m: int) -> PinchViolationWitness | None:
    """Scan the built body's annulus for a positive-dgdt node.

    Builds the profile, evaluates the annulus display at every interior
    node with u >= u0, and returns the maximizing node when its value is
    positive; None otherwise.
    """
    if speed.alpha <= 1.0:
        raise ValueError("pinching violations require degree alpha > 1")
    profile = build_profile(spec, m)
    best: PinchViolationWitness | None = None
    for i in range(1, profile.m - 1):
        u = profile.u[i]
        if u < spec.u0:
            continue
        up = profile.uprime[i]
        val = dgdt_annulus(speed, spec.r1, u, up)
        if best is None or val > best.dgdt:
            best = PinchViolationWitness(x=profile.x[i], u=u, uprime=up, dgdt=val)
    if best is not None and best.dgdt > 0.0:
        return best
    return None
