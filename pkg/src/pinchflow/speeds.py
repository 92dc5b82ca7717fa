"""Catalog of symmetric, monotone, homogeneous speeds F(k1, k2).

Every catalog entry is symmetric under swapping its arguments, strictly
increasing in each argument on the positive quadrant, and normalized so
that F(1, 1) = 1.  Values, gradients and Hessians are analytic closed
forms; finite differences appear only in the test suite as oracles.

All methods broadcast over numpy arrays.
"""

from __future__ import annotations

import numpy as np

# relative curvature gap below which (F1 - F2)/(k1 - k2) switches to its
# symmetric-function limit F11 - F12
UMBILIC_TOL = 1e-9


class SpeedFunction:
    """Homogeneous symmetric speed of two principal curvatures."""

    name: str = "abstract"
    alpha: float = 1.0

    def value(self, k1, k2):
        raise NotImplementedError

    def grad(self, k1, k2):
        """Return (dF/dk1, dF/dk2)."""
        raise NotImplementedError

    def hess(self, k1, k2):
        """Return (F11, F12, F22)."""
        raise NotImplementedError

    def __repr__(self):
        return f"<speed {self.name} alpha={self.alpha:g}>"


class MeanSpeed(SpeedFunction):
    """Arithmetic mean of the curvatures (normalized mean curvature)."""

    name = "mean"
    alpha = 1.0

    def value(self, k1, k2):
        return 0.5 * (np.asarray(k1, float) + k2)

    def grad(self, k1, k2):
        half = np.full(np.broadcast(np.asarray(k1), np.asarray(k2)).shape, 0.5)
        return half, half.copy()

    def hess(self, k1, k2):
        z = np.zeros(np.broadcast(np.asarray(k1), np.asarray(k2)).shape)
        return z, z.copy(), z.copy()


class PowerMeanSpeed(SpeedFunction):
    """Power mean ((k1^p + k2^p)/2)^(1/p), p != 0; degree 1.

    Non-concave for p > 1 and non-convex for p < 1, which is exactly the
    regime the degree-one theory covers without concavity assumptions.
    """

    alpha = 1.0

    def __init__(self, p: float):
        p = float(p)
        if p == 0.0:
            raise ValueError("power mean with p=0 is the geometric mean; use 'geometric'")
        self.p = p
        self.name = f"power_mean:{p:g}"

    def value(self, k1, k2):
        k1 = np.asarray(k1, float)
        k2 = np.asarray(k2, float)
        s = 0.5 * (k1**self.p + k2**self.p)
        return s ** (1.0 / self.p)

    def grad(self, k1, k2):
        p = self.p
        k1 = np.asarray(k1, float)
        k2 = np.asarray(k2, float)
        s = 0.5 * (k1**p + k2**p)
        f1 = s ** (1.0 / p - 1.0) * k1 ** (p - 1.0) * 0.5
        f2 = s ** (1.0 / p - 1.0) * k2 ** (p - 1.0) * 0.5
        return f1, f2

    def hess(self, k1, k2):
        p = self.p
        k1 = np.asarray(k1, float)
        k2 = np.asarray(k2, float)
        s = 0.5 * (k1**p + k2**p)
        a = s ** (1.0 / p - 2.0)
        f11 = (1.0 - p) * 0.25 * a * k1 ** (2.0 * p - 2.0) \
            + (p - 1.0) * 0.5 * s ** (1.0 / p - 1.0) * k1 ** (p - 2.0)
        f22 = (1.0 - p) * 0.25 * a * k2 ** (2.0 * p - 2.0) \
            + (p - 1.0) * 0.5 * s ** (1.0 / p - 1.0) * k2 ** (p - 2.0)
        f12 = (1.0 - p) * 0.25 * a * (k1 * k2) ** (p - 1.0)
        return f11, f12, f22


class GeometricSpeed(SpeedFunction):
    """Geometric mean sqrt(k1 k2); degree 1 (square root of Gauss curvature)."""

    name = "geometric"
    alpha = 1.0

    def value(self, k1, k2):
        return np.sqrt(np.asarray(k1, float) * k2)

    def grad(self, k1, k2):
        k1 = np.asarray(k1, float)
        k2 = np.asarray(k2, float)
        f = np.sqrt(k1 * k2)
        return 0.5 * f / k1, 0.5 * f / k2

    def hess(self, k1, k2):
        k1 = np.asarray(k1, float)
        k2 = np.asarray(k2, float)
        f = np.sqrt(k1 * k2)
        return -0.25 * f / k1**2, 0.25 / f, -0.25 * f / k2**2


class HarmonicSpeed(SpeedFunction):
    """Harmonic mean 2 k1 k2 / (k1 + k2); degree 1."""

    name = "harmonic"
    alpha = 1.0

    def value(self, k1, k2):
        k1 = np.asarray(k1, float)
        k2 = np.asarray(k2, float)
        return 2.0 * k1 * k2 / (k1 + k2)

    def grad(self, k1, k2):
        k1 = np.asarray(k1, float)
        k2 = np.asarray(k2, float)
        s2 = (k1 + k2) ** 2
        return 2.0 * k2**2 / s2, 2.0 * k1**2 / s2

    def hess(self, k1, k2):
        k1 = np.asarray(k1, float)
        k2 = np.asarray(k2, float)
        s3 = (k1 + k2) ** 3
        return -4.0 * k2**2 / s3, 4.0 * k1 * k2 / s3, -4.0 * k1**2 / s3


class GaussSpeed(SpeedFunction):
    """Gauss curvature k1 k2; degree 2."""

    name = "gauss"
    alpha = 2.0

    def value(self, k1, k2):
        return np.asarray(k1, float) * k2

    def grad(self, k1, k2):
        return np.asarray(k2, float) + 0.0, np.asarray(k1, float) + 0.0

    def hess(self, k1, k2):
        shape = np.broadcast(np.asarray(k1), np.asarray(k2)).shape
        z = np.zeros(shape)
        return z, np.ones(shape), z.copy()


class PowerSpeed(SpeedFunction):
    """Power of another catalog speed: F = base^e, degree e * alpha(base)."""

    def __init__(self, base: SpeedFunction, exponent: float):
        exponent = float(exponent)
        if exponent < 1.0:
            raise ValueError("power-of exponent must be >= 1")
        self.base = base
        self.exponent = exponent
        self.alpha = exponent * base.alpha
        self.name = f"pow:{base.name}:{exponent:g}"

    def value(self, k1, k2):
        return self.base.value(k1, k2) ** self.exponent

    def grad(self, k1, k2):
        e = self.exponent
        b = self.base.value(k1, k2)
        b1, b2 = self.base.grad(k1, k2)
        c = e * b ** (e - 1.0)
        return c * b1, c * b2

    def hess(self, k1, k2):
        e = self.exponent
        b = self.base.value(k1, k2)
        b1, b2 = self.base.grad(k1, k2)
        b11, b12, b22 = self.base.hess(k1, k2)
        c1 = e * (e - 1.0) * b ** (e - 2.0)
        c2 = e * b ** (e - 1.0)
        return (c1 * b1 * b1 + c2 * b11,
                c1 * b1 * b2 + c2 * b12,
                c1 * b2 * b2 + c2 * b22)


class BrokenSpeed(SpeedFunction):
    """Deliberately non-homogeneous speed k1 + k2^2; test hook only.

    Claims degree 1 so that the homogeneity validators flag it.
    """

    name = "_broken"
    alpha = 1.0

    def value(self, k1, k2):
        return np.asarray(k1, float) + np.asarray(k2, float) ** 2

    def grad(self, k1, k2):
        shape = np.broadcast(np.asarray(k1), np.asarray(k2)).shape
        return np.ones(shape), 2.0 * np.asarray(k2, float) * np.ones(shape)

    def hess(self, k1, k2):
        shape = np.broadcast(np.asarray(k1), np.asarray(k2)).shape
        z = np.zeros(shape)
        return z, z.copy(), np.full(shape, 2.0)


#: degree-1 catalog entries exercised throughout the test suite
DEGREE_ONE_CATALOG = ("mean", "geometric", "harmonic",
                      "power_mean:0.5", "power_mean:2", "power_mean:4")


def parse_speed(text: str) -> SpeedFunction:
    """Parse a speed spelled as in CLI configs.

    Accepted forms: ``mean``, ``power_mean:P``, ``geometric``, ``harmonic``,
    ``gauss``, ``pow:BASE:E`` and the test hook ``_broken``.
    """
    parts = text.strip().split(":")
    kind = parts[0]
    try:
        if kind == "mean" and len(parts) == 1:
            return MeanSpeed()
        if kind == "geometric" and len(parts) == 1:
            return GeometricSpeed()
        if kind == "harmonic" and len(parts) == 1:
            return HarmonicSpeed()
        if kind == "gauss" and len(parts) == 1:
            return GaussSpeed()
        if kind == "power_mean" and len(parts) == 2:
            return PowerMeanSpeed(float(parts[1]))
        if kind == "pow" and len(parts) == 3:
            return PowerSpeed(parse_speed(parts[1]), float(parts[2]))
        if kind == "_broken" and len(parts) == 1:
            return BrokenSpeed()
    except ValueError as exc:
        raise ValueError(f"invalid speed {text!r}: {exc}") from exc
    raise ValueError(f"unknown speed {text!r}")


def second_derivative_components(speed: SpeedFunction, k1, k2):
    """Frame components of the second derivative of F at diag(k1, k2).

    Returns (F..1111, F..1122, F..2222, F..1212, F..2121).  The mixed
    component (F1 - F2)/(k1 - k2) is evaluated as F11 - F12 when the point
    is umbilic to relative tolerance.
    """
    k1 = np.asarray(k1, float)
    k2 = np.asarray(k2, float)
    f11, f12, f22 = speed.hess(k1, k2)
    f1, f2 = speed.grad(k1, k2)
    gap = k1 - k2
    umb = np.abs(gap) < UMBILIC_TOL * (k1 + k2)
    safe = np.where(umb, 1.0, gap)
    f1212 = np.where(umb, f11 - f12, (f1 - f2) / safe)
    if f1212.ndim == 0:
        f1212 = float(f1212)
    return f11, f12, f22, f1212, f1212


def check_homogeneity(speed: SpeedFunction, samples: int = 10_000, seed: int = 42):
    """Max normalized residuals of both Euler identities over random samples.

    First identity: k.grad F = alpha F.  Second: k_i k_j F_ij = alpha
    (alpha - 1) F.  Residuals are divided by F so the report is
    scale-free.
    """
    rng = np.random.default_rng(seed)
    k1 = np.exp(rng.uniform(np.log(1e-2), np.log(1e2), samples))
    ratio = rng.uniform(1.0, 50.0, samples)
    k2 = k1 * ratio
    f = speed.value(k1, k2)
    f1, f2 = speed.grad(k1, k2)
    f11, f12, f22 = speed.hess(k1, k2)
    a = speed.alpha
    res1 = np.abs(k1 * f1 + k2 * f2 - a * f) / f
    res2 = np.abs(k1**2 * f11 + 2 * k1 * k2 * f12 + k2**2 * f22
                  - a * (a - 1.0) * f) / f
    return {
        "speed": speed.name,
        "alpha": a,
        "samples": int(samples),
        "euler_first_max": float(res1.max()),
        "euler_second_max": float(res2.max()),
    }
