"""Deterministic single-particle analysis in the (phi, w) plane.

With randomness removed and stationary attractors, one dimension of one
particle obeys the second order linear recurrence

    x(t) = (1 + w - phi) * x(t-1) - w * x(t-2) + phi * p

whose characteristic polynomial ``z**2 - (1 + w - phi) z + w`` decides
whether the particle converges to its overall attractor ``p``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "BehaviorClass",
    "CoefficientPoint",
    "ComplexRootForm",
    "DivergenceDetected",
    "RootAnalysis",
    "RootKind",
    "TrajectorySpec",
    "RasterCell",
    "classify_behavior",
    "classify_region",
    "complex_form",
    "converges",
    "discriminant",
    "region_raster",
    "roots",
    "trajectory_closed_form",
    "trajectory_recurrence",
]

# Relative width of the band around the parabola treated as a repeated root.
REPEATED_ROOT_RTOL = 1e-12

NEGATIVE_INERTIA = "negative-inertia"


class RootKind(str, enum.Enum):
    REAL_DISTINCT = "RealDistinct"
    COMPLEX_CONJUGATE = "ComplexConjugate"
    REAL_REPEATED = "RealRepeated"


class BehaviorClass(str, enum.Enum):
    CONVERGENT = "Convergent"
    CYCLIC = "CyclicOrPseudoCyclic"
    DIVERGENT_LINEAR = "DivergentLinear"
    DIVERGENT_ASYMPTOTIC = "DivergentAsymptotic"
    DIVERGENT_EXPONENTIAL = "DivergentExponential"
    STATIONARY = "Stationary"

    @property
    def divergent(self) -> bool:
        return self in (
            BehaviorClass.DIVERGENT_LINEAR,
            BehaviorClass.DIVERGENT_ASYMPTOTIC,
            BehaviorClass.DIVERGENT_EXPONENTIAL,
        )


class DivergenceDetected(ArithmeticError):
    """Raised when an iterated trajectory leaves the floating point range.

    The finite prefix computed so far is kept in ``partial``.
    """

    def __init__(self, step: int, partial: list[float]):
        super().__init__(f"trajectory overflowed at step {step}")
        self.step = step
        self.partial = partial


@dataclass(frozen=True)
class CoefficientPoint:
    """A (phi, w) pair: total acceleration coefficient and inertia weight."""

    phi: float
    w: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.phi) and math.isfinite(self.w)):
            raise ValueError(f"coefficients must be finite, got phi={self.phi!r}, w={self.w!r}")
        object.__setattr__(self, "phi", float(self.phi))
        object.__setattr__(self, "w", float(self.w))

    @property
    def flags(self) -> tuple[str, ...]:
        # w < 0 is valid mathematics but works against the idea of inertia.
        return (NEGATIVE_INERTIA,) if self.w < 0 else ()


@dataclass(frozen=True)
class RootAnalysis:
    gamma_sq: float
    root_kind: RootKind
    r1: complex
    r2: complex

    @property
    def spectral_radius(self) -> float:
        return max(abs(self.r1), abs(self.r2))


@dataclass(frozen=True)
class ComplexRootForm:
    """Polar form ``rho * exp(+-i theta)`` of a complex conjugate root pair."""

    rho: float
    theta: float


def _as_point(c) -> CoefficientPoint:
    if isinstance(c, CoefficientPoint):
        return c
    phi, w = c
    return CoefficientPoint(phi, w)


def discriminant(c) -> float:
    """Return gamma**2 = phi**2 - (2w + 2) phi + (w - 1)**2."""
    c = _as_point(c)
    return c.phi * c.phi - (2.0 * c.w + 2.0) * c.phi + (c.w - 1.0) ** 2


def _is_repeated(c: CoefficientPoint, gamma_sq: float) -> bool:
    scale = max(1.0, c.phi * c.phi, (c.w - 1.0) ** 2)
    return abs(gamma_sq) <= REPEATED_ROOT_RTOL * scale


def classify_region(c) -> RootKind:
    c = _as_point(c)
    g2 = discriminant(c)
    if _is_repeated(c, g2):
        return RootKind.REAL_REPEATED
    return RootKind.REAL_DISTINCT if g2 > 0 else RootKind.COMPLEX_CONJUGATE


def roots(c) -> RootAnalysis:
    """Roots r1 (with +gamma) and r2 (with -gamma) of the characteristic polynomial."""
    c = _as_point(c)
    g2 = discriminant(c)
    kind = classify_region(c)
    s = 1.0 + c.w - c.phi
    if kind is RootKind.REAL_REPEATED:
        r1 = r2 = complex(s / 2.0)
    elif kind is RootKind.COMPLEX_CONJUGATE:
        im = math.sqrt(-g2) / 2.0
        r1, r2 = complex(s / 2.0, im), complex(s / 2.0, -im)
    else:
        gamma = math.sqrt(g2)
        # Compute the larger-magnitude root directly and recover the other
        # from the product r1 * r2 = w to avoid cancellation.
        if s >= 0:
            big = (s + gamma) / 2.0
            small = c.w / big if big != 0 else (s - gamma) / 2.0
            r1, r2 = complex(big), complex(small)
        else:
            big = (s - gamma) / 2.0
            small = c.w / big
            r1, r2 = complex(small), complex(big)
    return RootAnalysis(gamma_sq=g2, root_kind=kind, r1=r1, r2=r2)


def complex_form(c) -> ComplexRootForm:
    c = _as_point(c)
    g2 = discriminant(c)
    if classify_region(c) is not RootKind.COMPLEX_CONJUGATE:
        raise ValueError(f"roots at {c} are not complex conjugates (gamma^2={g2!r})")
    return ComplexRootForm(rho=math.sqrt(c.w), theta=math.atan2(math.sqrt(-g2), 1.0 + c.w - c.phi))


def converges(c) -> bool:
    """True iff both roots lie strictly inside the unit disk.

    Uses the algebraic form of the region (|w| < 1, 0 < phi < 2(w + 1)),
    which is exact on the boundary where root moduli are not.
    """
    c = _as_point(c)
    return -1.0 < c.w < 1.0 and 0.0 < c.phi < 2.0 * (c.w + 1.0)


def classify_behavior(c) -> BehaviorClass:
    c = _as_point(c)
    phi, w = c.phi, c.w
    if phi == 0.0 and w == 0.0:
        return BehaviorClass.STATIONARY
    if converges(c):
        return BehaviorClass.CONVERGENT
    upper = 2.0 * (w + 1.0)
    if abs(w) > 1.0 or phi < 0.0 or phi > upper:
        return BehaviorClass.DIVERGENT_EXPONENTIAL
    # On the boundary of the triangle: spectral radius is exactly 1.
    if w == 1.0:
        # phi in [0, 4]; the corners carry a double root at +1 or -1.
        if phi == 0.0 or phi == upper:
            return BehaviorClass.DIVERGENT_LINEAR
        return BehaviorClass.CYCLIC
    if w == -1.0 or w == 0.0:
        # roots {1, -1} or {0, -1}: bounded period-two motion
        return BehaviorClass.CYCLIC
    # phi == 0 (roots 1, w) or phi == 2(w+1) (roots -1, -w) with 0 < |w| < 1
    return BehaviorClass.DIVERGENT_ASYMPTOTIC


@dataclass(frozen=True)
class TrajectorySpec:
    """Initial value problem for the deterministic particle.

    ``x1`` is the position after the first update. Use :meth:`from_velocity`
    to start from an initial velocity instead.
    """

    coeffs: CoefficientPoint
    p: float
    x0: float
    x1: float
    steps: int

    def __post_init__(self) -> None:
        coeffs = _as_point(self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        for name in ("p", "x0", "x1"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        if int(self.steps) != self.steps or self.steps < 1:
            raise ValueError(f"steps must be a positive integer, got {self.steps!r}")
        object.__setattr__(self, "steps", int(self.steps))

    @classmethod
    def from_velocity(cls, coeffs, p: float, x0: float, v0: float, steps: int) -> "TrajectorySpec":
        coeffs = _as_point(coeffs)
        if not math.isfinite(v0):
            raise ValueError(f"v0 must be finite, got {v0!r}")
        v1 = coeffs.w * v0 + coeffs.phi * (p - x0)
        return cls(coeffs, p, x0, x0 + v1, steps)


def trajectory_closed_form(spec: TrajectorySpec) -> np.ndarray:
    """Positions x(0)..x(steps) from the general solution of the recurrence."""
    c = spec.coeffs
    p = spec.p
    y0, y1 = spec.x0 - p, spec.x1 - p
    t = np.arange(spec.steps + 1)
    ra = roots(c)
    s = 1.0 + c.w - c.phi

    with np.errstate(over="ignore", invalid="ignore"):
        if ra.root_kind is RootKind.REAL_DISTINCT:
            r1, r2 = ra.r1.real, ra.r2.real
            gamma = r1 - r2
            a1 = (y1 - r2 * y0) / gamma
            a2 = (r1 * y0 - y1) / gamma
            y = a1 * np.power(r1, t) + a2 * np.power(r2, t)
        elif ra.root_kind is RootKind.COMPLEX_CONJUGATE:
            form = complex_form(c)
            b = (2.0 * y1 - s * y0) / math.sqrt(-ra.gamma_sq)
            y = np.power(form.rho, t) * (y0 * np.cos(t * form.theta) + b * np.sin(t * form.theta))
        else:
            r = s / 2.0
            if r == 0.0:
                y = np.zeros(t.shape)
            else:
                y = (y0 + (y1 / r - y0) * t) * np.power(r, t)

    x = p + y
    x[0] = spec.x0
    x[1] = spec.x1
    return x


def trajectory_recurrence(spec: TrajectorySpec) -> np.ndarray:
    """Positions x(0)..x(steps) by iterating the recurrence directly.

    Raises :class:`DivergenceDetected` if the iterate overflows.
    """
    c = spec.coeffs
    a = 1.0 + c.w - c.phi
    forcing = c.phi * spec.p
    xs = [spec.x0, spec.x1]
    for t in range(2, spec.steps + 1):
        nxt = a * xs[-1] - c.w * xs[-2] + forcing
        if not math.isfinite(nxt):
            raise DivergenceDetected(t, xs)
        xs.append(nxt)
    return np.asarray(xs[: spec.steps + 1], dtype=float)


@dataclass(frozen=True)
class RasterCell:
    phi: float
    w: float
    behavior: BehaviorClass
    spectral_radius: float
    flags: tuple[str, ...] = field(default=())


def region_raster(
    phi_range: tuple[float, float],
    w_range: tuple[float, float],
    resolution: tuple[int, int],
) -> list[RasterCell]:
    """Classify a regular grid of the (phi, w) plane.

    Cells are returned row-major with ``w`` as the outer axis; grid points
    include both endpoints of each range.
    """
    (phi_lo, phi_hi), (w_lo, w_hi) = phi_range, w_range
    n_phi, n_w = resolution
    for lo, hi, name in ((phi_lo, phi_hi, "phi"), (w_lo, w_hi, "w")):
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ValueError(f"{name} range must be finite")
        if hi < lo:
            raise ValueError(f"{name} range is inverted: [{lo}, {hi}]")
    if n_phi < 2 or n_w < 2:
        raise ValueError(f"resolution must be at least 2 per axis, got {resolution}")

    phis = np.linspace(phi_lo, phi_hi, int(n_phi))
    ws = np.linspace(w_lo, w_hi, int(n_w))
    cells = []
    for w in ws.tolist():
        for phi in phis.tolist():
            point = CoefficientPoint(phi, w)
            cells.append(
                RasterCell(
                    phi=phi,
                    w=w,
                    behavior=classify_behavior(point),
                    spectral_radius=roots(point).spectral_radius,
                    flags=point.flags,
                )
            )
    return cells

