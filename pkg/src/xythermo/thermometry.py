"""Thermal occupations and temperature-estimation bounds.

For a thermal state of the free-fermion solution, the quantum Fisher
information for temperature is the energy variance over T^4, and the
corresponding Cramer-Rao bound caps the signal-to-noise ratio (T/dT)^2 of
any temperature estimate at snr_crb = T^2 * qfi.  Everything here is a mode
sum, exact at any N.

Temperature is dimensionless throughout: the ``temperature`` argument means
T/J with k_B = 1.  ``temperature = math.inf`` is accepted and gives the
exact maximally-mixed values (every occupation exactly 1/2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .spectrum import ChainSpec, ModeTable, mode_table

__all__ = ["ThermalEnsemble", "ensemble", "energy_variance", "qfi", "snr_crb"]


@dataclass(frozen=True, eq=False)
class ThermalEnsemble:
    """A chain at fixed temperature with cached mode occupations.

    ``occupations`` are the Fermi factors n_k = 1/(1 + exp(eps_k/T)), one per
    mode, each in (0, 1/2] (the upper bound is attained only for zero-energy
    modes or infinite temperature).
    """

    spec: ChainSpec
    temperature: float  # units of J
    modes: ModeTable
    occupations: np.ndarray

    def fluctuation_weights(self) -> np.ndarray:
        """n_k(1 - n_k) per mode, stable down to occupations ~ 1e-300."""
        return self.occupations * (1.0 - self.occupations)

    def reduced_energies(self) -> np.ndarray:
        """eps_k / T, the only combination thermal quantities depend on."""
        return self.modes.energies / (self.temperature * self.spec.coupling)


def ensemble(spec: ChainSpec, temperature: float) -> ThermalEnsemble:
    """Thermal ensemble of a chain at temperature T/J > 0 (inf allowed)."""
    if not temperature > 0:
        raise ValueError(f"temperature must be > 0 (in units of J), got {temperature}")
    modes = mode_table(spec)
    # expit(-x) = 1/(1+e^x) never overflows; x = inf cleanly gives 0.5 at
    # temperature = inf because eps/inf = 0.
    x = modes.energies / (temperature * spec.coupling)
    occ = expit(-x)
    return ThermalEnsemble(spec=spec, temperature=temperature, modes=modes, occupations=occ)


def energy_variance(ens: ThermalEnsemble) -> float:
    """<H^2> - <H>^2 = sum_k eps_k^2 n_k (1 - n_k), in squared energy units."""
    e = ens.modes.energies
    return float(np.sum(e * e * ens.fluctuation_weights()))


def qfi(ens: ThermalEnsemble) -> float:
    """Quantum Fisher information for temperature, in units of 1/J^2.

    Equals energy_variance / T^4 and is additive over modes.  Decays to zero
    at both temperature extremes for gapped chains.
    """
    t4 = (ens.temperature * ens.spec.coupling) ** 4
    return energy_variance(ens) / t4


def snr_crb(ens: ThermalEnsemble) -> float:
    """Cramer-Rao ceiling on (T/dT)^2 for a single-shot measurement.

    Computed as sum_k (eps_k/T)^2 n_k(1-n_k) rather than T^2 * qfi so that
    temperature = inf yields an exact 0 instead of inf * 0.
    """
    x = ens.reduced_energies()
    return float(np.sum(x * x * ens.fluctuation_weights()))
