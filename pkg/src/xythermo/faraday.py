"""Light-quadrature statistics and temperature sensitivity of a QND probe.

An off-resonant probe pulse crossing the chain picks up a Faraday rotation
proportional to the (possibly spatially modulated) collective spin J_z:
the output quadrature is X_out = X_in - (kappa/sqrt(N)) J_z with coherent
input of mean zero and variance 1/2.  Reading out a thermal observable A
(either J_z through the quadrature directly, or J_x^2 after an ideal spin
rotation) estimates temperature with error propagation

    (T/dT)^2 = (d<A>/dT)^2 T^2 / Var(A),

which is capped by the Cramer-Rao value of the thermometry module.  The
derivative is a central finite difference with one Richardson step; the
noise Var(A) is the atomic variance, plus the light shot-noise floor
N/(2 kappa^2) for the J_z readout when requested.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

from .correlations import (
    MODULATIONS,
    fourth_moment_from_kernel,
    kernel,
    mean_jz,
    var_jx,
    var_jz_from_kernel,
)
from .spectrum import ChainSpec
from .thermometry import ThermalEnsemble, ensemble, snr_crb

__all__ = [
    "FaradaySetup",
    "ReadoutObservable",
    "SensitivityReport",
    "NoiseUnderflowError",
    "output_mean",
    "output_variance",
    "temperature_snr",
    "sensitivity_report",
]


class NoiseUnderflowError(ArithmeticError):
    """Raised when a readout's noise variance is zero or the SNR non-finite.

    Happens for saturated / frozen states (T -> 0 limits) where the atomic
    variance underflows: the error-propagation formula becomes 0/0 and no
    meaningful sensitivity exists.
    """


class ReadoutObservable(enum.Enum):
    """Which thermal observable the probe sequence measures."""

    MEAN_JZ = "meanjz"  # direct quadrature shift, A = J_z
    VAR_JX = "varjx"    # variance readout, A = J_x^2 (mean J_x vanishes)


@dataclass(frozen=True)
class FaradaySetup:
    """Probe configuration.

    kappa is the dimensionless light-matter coupling (sane experimental
    range is roughly 1-10, but any positive value is accepted);
    input_quadrature_variance is the coherent-state shot noise, fixed 1/2.
    include_shot_noise adds the light-noise floor to the MeanJz readout;
    the default models the strong-coupling optimum where atomic noise
    dominates.
    """

    kappa: float = 2.0
    modulation: str = "uniform"
    include_shot_noise: bool = False
    input_quadrature_variance: float = 0.5

    def __post_init__(self) -> None:
        if not (self.kappa > 0 and math.isfinite(self.kappa)):
            raise ValueError(f"kappa must be positive and finite, got {self.kappa}")
        if self.modulation not in MODULATIONS:
            raise ValueError(f"unknown modulation {self.modulation!r}")
        if self.input_quadrature_variance != 0.5:
            raise ValueError("input quadrature variance is fixed at 1/2")


@dataclass(frozen=True)
class SensitivityReport:
    """CRB ceiling and per-readout SNRs at one (gamma, h/J, T) point."""

    gamma: float
    field_ratio: float
    temperature: float
    snr_crb: float
    snr_varjx: float
    snr_meanjz: float
    per_site: bool


def _mean_shift(mean_jz_value: float, setup: FaradaySetup, n: int) -> float:
    return -(setup.kappa / math.sqrt(n)) * mean_jz_value


def _variance_shift(var_jz_value: float, setup: FaradaySetup, n: int) -> float:
    return setup.input_quadrature_variance + (setup.kappa**2 / n) * var_jz_value


def output_mean(ens: ThermalEnsemble, setup: FaradaySetup) -> float:
    """Mean output quadrature, -(kappa/sqrt(N)) <J_z>."""
    return _mean_shift(mean_jz(ens, setup.modulation), setup, ens.spec.sites)


def output_variance(ens: ThermalEnsemble, setup: FaradaySetup) -> float:
    """Output quadrature variance, 1/2 + (kappa^2/N) Var(J_z)."""
    return _variance_shift(var_jz_from_kernel(kernel(ens), setup.modulation),
                           setup, ens.spec.sites)


def _ddt(f: Callable[[float], float], t: float, step: float) -> tuple[float, float]:
    # central difference at two scales + one Richardson level; the returned
    # error estimate is the difference of the two stencils (dominates the
    # true error of the extrapolated value)
    coarse = (f(t + step) - f(t - step)) / (2.0 * step)
    half = 0.5 * step
    fine = (f(t + half) - f(t - half)) / (2.0 * half)
    return fine + (fine - coarse) / 3.0, abs(fine - coarse) / 3.0


def temperature_snr(ens: ThermalEnsemble, setup: FaradaySetup,
                    observable: ReadoutObservable) -> float:
    """Error-propagated (T/dT)^2 of one readout at the ensemble's temperature.

    Raises NoiseUnderflowError when the readout noise is not positive or the
    resulting SNR is non-finite, and ValueError when T is too close to 0 for
    the finite-difference stencil (needs T > 2*step).
    """
    spec, t = ens.spec, ens.temperature
    step = max(1e-4, 1e-3 * t)
    if not t > 2.0 * step:
        raise ValueError(f"temperature {t} too small for derivative step {step}")

    if observable is ReadoutObservable.MEAN_JZ:
        def signal(tau: float) -> float:
            return mean_jz(ensemble(spec, tau), setup.modulation)

        noise = var_jz_from_kernel(kernel(ens), setup.modulation)
        if setup.include_shot_noise:
            # invert the quadrature map: measured X_out variance 1/2 + (k^2/N)V
            # corresponds to inferring J_z with extra variance N/(2 kappa^2)
            noise += spec.sites / (2.0 * setup.kappa**2)
    elif observable is ReadoutObservable.VAR_JX:
        def signal(tau: float) -> float:
            return var_jx(kernel(ensemble(spec, tau)))

        kern = kernel(ens)
        vx = var_jx(kern)
        noise = fourth_moment_from_kernel(kern) - vx * vx
    else:
        raise TypeError(f"unknown readout observable {observable!r}")

    slope, _ = _ddt(signal, t, step)
    if not (noise > 0.0 and math.isfinite(noise)):
        raise NoiseUnderflowError(
            f"{observable.value} noise variance {noise} at T={t} "
            f"(gamma={spec.gamma}, h/J={spec.field_ratio})")
    snr = slope * slope * t * t / noise
    if not math.isfinite(snr):
        raise NoiseUnderflowError(f"non-finite {observable.value} SNR at T={t}")
    return snr


def sensitivity_report(spec: ChainSpec, temperature: float, setup: FaradaySetup,
                       per_site: bool = False) -> SensitivityReport:
    """CRB ceiling plus both readout SNRs at one parameter point.

    With per_site=True every SNR is divided by N, the natural normalization
    for comparing chains of different length.
    """
    ens = ensemble(spec, temperature)
    scale = 1.0 / spec.sites if per_site else 1.0
    return SensitivityReport(
        gamma=spec.gamma,
        field_ratio=spec.field_ratio,
        temperature=temperature,
        snr_crb=scale * snr_crb(ens),
        snr_varjx=scale * temperature_snr(ens, setup, ReadoutObservable.VAR_JX),
        snr_meanjz=scale * temperature_snr(ens, setup, ReadoutObservable.MEAN_JZ),
        per_site=per_site,
    )
