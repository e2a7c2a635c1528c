"""Coefficient sampling schemes and conversions between them.

Three parameterisations of the velocity update are supported:

* classical: ``phi_i = iw * U(0,1)``, ``phi_s = sw * U(0,1)``
* general: ``phi_i = ip * (phi_min + (phi_max - phi_min) * U(0,1))`` and
  ``phi_s`` likewise with ``sp = 1 - ip``; this bounds the total
  acceleration to ``[phi_min, phi_max]``
* constricted: ``(aw, kappa)``, mapped onto the general form

All samplers take uniforms from a caller-owned ``numpy.random.Generator``
and draw ``u1`` (individual) before ``u2`` (social).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Union

import numpy as np

__all__ = [
    "ClassicalParams",
    "FormulationConfig",
    "ConstrictedParams",
    "ConversionError",
    "GeneralParams",
    "SampledAcceleration",
    "as_general",
    "classical_to_general",
    "constricted_to_general",
    "convert",
    "formulation_from_dict",
    "formulation_to_dict",
    "general_to_classical",
    "kind_of",
    "sample",
    "sample_classical",
    "sample_general",
]


class ConversionError(ValueError):
    """The requested change of formulation has no exact equivalent."""


def _check_finite(**values: float) -> None:
    for name, value in values.items():
        if not math.isfinite(value):
            raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class SampledAcceleration:
    """Individual and social acceleration coefficients (scalars or arrays)."""

    phi_i: float | np.ndarray
    phi_s: float | np.ndarray

    @property
    def phi(self):
        return self.phi_i + self.phi_s


@dataclass(frozen=True)
class ClassicalParams:
    w: float
    iw: float
    sw: float

    def __post_init__(self) -> None:
        _check_finite(w=self.w, iw=self.iw, sw=self.sw)
        if self.iw < 0 or self.sw < 0:
            raise ValueError(f"iw and sw must be non-negative, got iw={self.iw}, sw={self.sw}")

    @property
    def phi_max(self) -> float:
        return self.iw + self.sw

    def coefficients(self, u1, u2) -> SampledAcceleration:
        return SampledAcceleration(self.iw * u1, self.sw * u2)


@dataclass(frozen=True)
class GeneralParams:
    w: float
    phi_min: float
    phi_max: float
    ip: float = 0.5

    def __post_init__(self) -> None:
        _check_finite(w=self.w, phi_min=self.phi_min, phi_max=self.phi_max, ip=self.ip)
        if self.phi_min < 0:
            raise ValueError(f"phi_min must be >= 0, got {self.phi_min}")
        if self.phi_max < self.phi_min:
            raise ValueError(f"phi_max ({self.phi_max}) must be >= phi_min ({self.phi_min})")
        if not 0.0 <= self.ip < 1.0:
            raise ValueError(f"ip must lie in [0, 1), got {self.ip}")

    @property
    def sp(self) -> float:
        return 1.0 - self.ip

    @property
    def phi_mean(self) -> float:
        return 0.5 * (self.phi_max + self.phi_min)

    def coefficients(self, u1, u2) -> SampledAcceleration:
        span = self.phi_max - self.phi_min
        return SampledAcceleration(
            self.ip * (self.phi_min + span * u1),
            self.sp * (self.phi_min + span * u2),
        )


@dataclass(frozen=True)
class ConstrictedParams:
    """Constriction form: raw acceleration ``aw`` and factor ``kappa``.

    ``ip`` is not part of the constriction scheme; it only sets the split of
    the acceleration once converted to the general form.
    """

    aw: float
    kappa: float
    ip: float = 0.5

    def __post_init__(self) -> None:
        _check_finite(aw=self.aw, kappa=self.kappa, ip=self.ip)
        if self.aw <= 0:
            raise ValueError(f"aw must be > 0, got {self.aw}")
        if not 0.0 < self.kappa <= 1.0:
            raise ValueError(f"kappa must lie in (0, 1], got {self.kappa}")

    @property
    def w(self) -> float:
        return constricted_to_general(self).w

    def coefficients(self, u1, u2) -> SampledAcceleration:
        return constricted_to_general(self).coefficients(u1, u2)


FormulationConfig = Union[ClassicalParams, GeneralParams, ConstrictedParams]


def sample(params: FormulationConfig, rng: np.random.Generator, size=None) -> SampledAcceleration:
    """Draw fresh coefficients; ``size`` gives the shape of each array."""
    u = rng.random(2 if size is None else (2, *np.atleast_1d(size)))
    if size is None:
        return params.coefficients(float(u[0]), float(u[1]))
    return params.coefficients(u[0], u[1])


def sample_classical(params: ClassicalParams, rng: np.random.Generator, size=None) -> SampledAcceleration:
    return sample(params, rng, size)


def sample_general(params: GeneralParams, rng: np.random.Generator, size=None) -> SampledAcceleration:
    return sample(params, rng, size)


def general_to_classical(params: GeneralParams) -> ClassicalParams:
    if params.phi_min != 0:
        raise ConversionError(
            f"only phi_min = 0 has a classical equivalent, got phi_min={params.phi_min}"
        )
    return ClassicalParams(w=params.w, iw=params.ip * params.phi_max, sw=params.sp * params.phi_max)


def classical_to_general(params: ClassicalParams) -> GeneralParams:
    total = params.phi_max
    if total == 0:
        return GeneralParams(w=params.w, phi_min=0.0, phi_max=0.0)
    ip = params.iw / total
    if ip >= 1.0:
        raise ConversionError("sw = 0 with iw > 0 needs ip = 1, which the general form excludes")
    return GeneralParams(w=params.w, phi_min=0.0, phi_max=total, ip=ip)


def constricted_to_general(params: ConstrictedParams) -> GeneralParams:
    aw, kappa = params.aw, params.kappa
    if aw >= 4.0:
        w = 2.0 * kappa / (aw - 2.0 + math.sqrt(aw * aw - 4.0 * aw))
    else:
        w = kappa
    return GeneralParams(w=w, phi_min=0.0, phi_max=w * aw, ip=params.ip)


_KINDS = {"classical": ClassicalParams, "general": GeneralParams, "constricted": ConstrictedParams}


def kind_of(params: FormulationConfig) -> str:
    for name, cls in _KINDS.items():
        if isinstance(params, cls):
            return name
    raise TypeError(f"not a formulation: {params!r}")


def convert(params: FormulationConfig, to: str) -> FormulationConfig:
    """Convert between formulations, going through the general form."""
    if to not in _KINDS:
        raise ValueError(f"unknown formulation {to!r}; expected one of {sorted(_KINDS)}")
    if kind_of(params) == to:
        return params
    if to == "constricted":
        raise ConversionError("conversion into the constricted form is not defined")
    if isinstance(params, ClassicalParams):
        general = classical_to_general(params)
    elif isinstance(params, ConstrictedParams):
        general = constricted_to_general(params)
    else:
        general = params
    return general if to == "general" else general_to_classical(general)


def as_general(params: FormulationConfig) -> GeneralParams:
    return convert(params, "general")


def formulation_from_dict(data: dict) -> tuple[FormulationConfig, int | None]:
    """Parse ``{"formulation": kind, <params>, "seed": n}``; unknown keys are rejected."""
    data = dict(data)
    kind = data.pop("formulation", None)
    if kind not in _KINDS:
        raise ValueError(f"'formulation' must be one of {sorted(_KINDS)}, got {kind!r}")
    seed = data.pop("seed", None)
    if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool) or seed < 0):
        raise ValueError(f"seed must be an unsigned integer, got {seed!r}")
    if kind == "general" and "sp" in data:
        sp = data.pop("sp")
        if sp != 1.0 - data.get("ip", 0.5):
            raise ValueError(f"sp must equal 1 - ip, got sp={sp!r}")
    cls = _KINDS[kind]
    allowed = set(cls.__dataclass_fields__)
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ValueError(f"unknown field(s) for {kind} formulation: {', '.join(unknown)}")
    for key, value in data.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValueError(f"{key} must be a number, got {value!r}")
    try:
        return cls(**data), seed
    except TypeError as exc:
        raise ValueError(f"incomplete {kind} formulation: {exc}") from None


def formulation_to_dict(params: FormulationConfig) -> dict:
    return {"formulation": kind_of(params), **asdict(params)}
