"""Coefficient-setting guidelines: validation and recommended settings.

Advisory ranges only produce warnings. The one hard requirement is that the
mean acceleration ``phi_mean`` together with ``w`` lies strictly inside the
convergence region of the deterministic particle.
"""

from __future__ import annotations

import enum
import json
from dataclasses import asdict, dataclass

import numpy as np

from .analysis import CoefficientPoint, converges
from .formulations import GeneralParams

__all__ = [
    "BehaviorProfile",
    "GuidelineReport",
    "RuleResult",
    "default_vmax",
    "recommend",
    "validate",
]

PASS, WARN, FAIL = "pass", "warn", "fail"

INERTIA = "inertia weight range: 0.30-0.90, preferably 0.50-0.90"
ACCEL_BOUNDS = "acceleration bounds: 0 <= phi_min <= 1, 2 <= phi_max <= 2(w+1)"
MEAN_ACCEL = "mean acceleration: 1 < phi_mean < 2"
SPLIT = "acceleration split: ip = sp = 0.5"
REGION = "convergence region: |w| < 1 and 0 < phi < 2(w+1)"

# Distance kept between phi_max and the convergence boundary 2(w + 1).
BOUNDARY_MARGIN = 0.1


class BehaviorProfile(str, enum.Enum):
    EXPLORATIVE = "explorative"
    BALANCED = "balanced"
    EXPLOITATIVE = "exploitative"
    GENERAL_PURPOSE = "general-purpose"


@dataclass(frozen=True)
class RuleResult:
    rule: str
    status: str
    citation: str
    detail: str


@dataclass(frozen=True)
class GuidelineReport:
    params: GeneralParams
    phi_mean: float
    mean_converges: bool
    max_converges: bool
    rules: tuple[RuleResult, ...]

    @property
    def status(self) -> str:
        statuses = {r.status for r in self.rules}
        return FAIL if FAIL in statuses else WARN if WARN in statuses else PASS

    @property
    def failures(self) -> list[RuleResult]:
        return [r for r in self.rules if r.status == FAIL]

    def rule(self, name: str) -> RuleResult:
        for r in self.rules:
            if r.rule == name:
                return r
        raise KeyError(name)

    def to_json(self) -> list[dict]:
        return [asdict(r) for r in self.rules]

    def dumps(self) -> str:
        return json.dumps(
            {
                "params": asdict(self.params),
                "phi_mean": self.phi_mean,
                "mean_converges": self.mean_converges,
                "max_converges": self.max_converges,
                "status": self.status,
                "rules": self.to_json(),
            },
            indent=2,
        )

    def render(self) -> str:
        p = self.params
        lines = [
            f"w={p.w:g} phi_min={p.phi_min:g} phi_max={p.phi_max:g} ip={p.ip:g} sp={p.sp:g}",
            f"phi_mean={self.phi_mean:g}  converges at phi_mean: {self.mean_converges}  "
            f"converges at phi_max: {self.max_converges}",
        ]
        for r in self.rules:
            lines.append(f"[{r.status.upper():4}] {r.rule} ({r.citation}): {r.detail}")
        lines.append(f"overall: {self.status}")
        return "\n".join(lines)


def validate(p: GeneralParams) -> GuidelineReport:
    w, lo, hi = p.w, p.phi_min, p.phi_max
    upper = 2.0 * (w + 1.0)
    mean = p.phi_mean
    rules = []

    if 0.5 <= w <= 0.9:
        rules.append(RuleResult("inertia", PASS, INERTIA, f"0.50 <= w={w:g} <= 0.90"))
    elif abs(w) >= 1.0:
        rules.append(RuleResult("inertia", FAIL, INERTIA, f"w={w:g}: no acceleration gives a convergent particle"))
    elif w < 0.3:
        rules.append(RuleResult("inertia", WARN, INERTIA, f"w={w:g} is below 0.30; the particle keeps little momentum"))
    else:
        rules.append(RuleResult("inertia", WARN, INERTIA, f"w={w:g} is outside the preferred range [0.50, 0.90]"))

    # Keeping phi away from zero damps local explosions when w is high.
    note = "larger phi_min damps local explosions at high w (reading of an ambiguously worded guideline)"
    if lo <= 1.0:
        rules.append(RuleResult("phi_min", PASS, ACCEL_BOUNDS, f"0.00 <= phi_min={lo:g} <= 1.00; {note}"))
    else:
        rules.append(RuleResult("phi_min", WARN, ACCEL_BOUNDS, f"phi_min={lo:g} > 1.00 narrows the random range; {note}"))

    if 2.0 <= hi < upper:
        rules.append(RuleResult("phi_max", PASS, ACCEL_BOUNDS, f"2.00 <= phi_max={hi:g} <= 2(w+1)={upper:g}"))
    elif hi == upper and hi >= 2.0:
        rules.append(RuleResult("phi_max", PASS, ACCEL_BOUNDS, f"phi_max={hi:g} sits exactly on the convergence boundary 2(w+1)"))
    else:
        rules.append(RuleResult("phi_max", WARN, ACCEL_BOUNDS, f"phi_max={hi:g} outside [2.00, 2(w+1)={upper:g}]"))

    if 1.0 < mean < 2.0:
        rules.append(RuleResult("phi_mean", PASS, MEAN_ACCEL, f"1.00 < phi_mean={mean:g} < 2.00"))
    else:
        rules.append(RuleResult("phi_mean", WARN, MEAN_ACCEL, f"phi_mean={mean:g} outside (1.00, 2.00)"))

    if p.ip == 0.5:
        rules.append(RuleResult("ip_sp", PASS, SPLIT, "ip = sp = 0.50"))
    else:
        rules.append(RuleResult("ip_sp", WARN, SPLIT, f"ip={p.ip:g}, sp={p.sp:g}; 0.50 each is advised"))

    mean_ok = converges(CoefficientPoint(mean, w))
    max_ok = converges(CoefficientPoint(hi, w))
    if mean_ok:
        rules.append(RuleResult("mean_convergence", PASS, REGION, f"(phi_mean={mean:g}, w={w:g}) is inside the convergence region"))
    else:
        rules.append(RuleResult("mean_convergence", FAIL, REGION, f"(phi_mean={mean:g}, w={w:g}) is outside the convergence region"))
    if max_ok:
        rules.append(RuleResult("max_convergence", PASS, REGION, f"(phi_max={hi:g}, w={w:g}) is inside the convergence region"))
    else:
        where = "on the boundary of" if hi == upper else "outside"
        rules.append(
            RuleResult("max_convergence", WARN, REGION, f"(phi_max={hi:g}, w={w:g}) is {where} the convergence region; expect erratic excursions")
        )

    return GuidelineReport(params=p, phi_mean=mean, mean_converges=mean_ok, max_converges=max_ok, rules=tuple(rules))


# (w, phi_min, phi_max) per profile. Advised ranges: 0.50 <= w <= 0.90,
# 0 <= phi_min <= 1, 2 <= phi_max <= 2(w+1), 1 < phi_mean < 2; general
# purpose uses 0.70 <= w <= 0.80 with phi_max close to 2(w+1).
_PROFILES = {
    BehaviorProfile.GENERAL_PURPOSE: (0.75, 0.0, None),
    BehaviorProfile.EXPLORATIVE: (0.85, 0.0, None),
    BehaviorProfile.BALANCED: (0.70, 0.8, 3.0),
    BehaviorProfile.EXPLOITATIVE: (0.55, 0.5, 2.5),
}


def recommend(profile: BehaviorProfile | str = BehaviorProfile.GENERAL_PURPOSE, w_override: float | None = None) -> GeneralParams:
    """Concrete settings for a behaviour profile.

    ``phi_max = None`` in the table means "just inside the boundary", i.e.
    ``2(w + 1) - 0.1``; explicit values are capped to that as well when ``w``
    is overridden.
    """
    profile = BehaviorProfile(profile)
    w, lo, hi = _PROFILES[profile]
    if w_override is not None:
        if not 0.0 <= w_override < 1.0:
            raise ValueError(f"w_override must lie in [0, 1) for a convergent setting, got {w_override}")
        w = float(w_override)
    cap = round(2.0 * (w + 1.0) - BOUNDARY_MARGIN, 12)
    hi = cap if hi is None else min(hi, cap)
    return GeneralParams(w=w, phi_min=lo, phi_max=hi, ip=0.5)


def default_vmax(bounds) -> np.ndarray:
    """Half the width of the search box in each dimension."""
    b = np.asarray(bounds, dtype=float).reshape(-1, 2)
    width = b[:, 1] - b[:, 0]
    if np.any(~np.isfinite(width)) or np.any(width <= 0):
        raise ValueError(f"degenerate bounds: {b.tolist()}")
    return 0.5 * width
