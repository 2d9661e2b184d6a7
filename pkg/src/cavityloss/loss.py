"""Radiative-escape loss with two damping rates and repeated passages.

Inside the resonant shell R_e < R < R_C the excited pair decays at
``Gamma_c``; closer in it decays at ``Gamma`` and an emission there ejects
both atoms. The bound pair oscillates, crossing the shell twice per period.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError


@dataclass(frozen=True)
class LossResult:
    L0: float
    Lc: float
    ratio_p: float
    approx_p: float
    gamma_t_c: float
    gamma_t_e: float
    gamma_c_over_gamma: float

    @property
    def gamma_t_0(self) -> float:
        return self.gamma_t_c + self.gamma_t_e


def _log_sinh(x: float) -> float:
    # x > 0
    return x + math.log1p(-math.exp(-2.0 * x)) - math.log(2.0)


def _sinh_ratio(a: float, b: float) -> float:
    """sinh(a) / sinh(b) for 0 <= a, 0 < b without overflow."""
    if a == 0.0:
        return 0.0
    return math.exp(_log_sinh(a) - _log_sinh(b))


def loss_probability(Gamma: float, Gamma_c: float, t_c: float, t_e: float) -> LossResult:
    """Closed-form loss with (``Lc``) and without (``L0``) the cavity."""
    if not (Gamma > 0 and Gamma_c > 0):
        raise ConfigError("decay rates must be positive")
    if t_c < 0 or t_e < 0 or not t_c + t_e > 0:
        raise ConfigError("need t_c, t_e >= 0 and t_c + t_e > 0")
    t0 = t_c + t_e
    a = (t0 - t_c) * Gamma
    Lc = _sinh_ratio(a, (t0 + (Gamma_c / Gamma - 1.0) * t_c) * Gamma)
    L0 = _sinh_ratio(a, t0 * Gamma)
    p = Lc / L0 if L0 > 0 else 1.0
    return LossResult(
        L0=L0,
        Lc=Lc,
        ratio_p=p,
        approx_p=math.exp(-(Gamma_c - Gamma) * t_c),
        gamma_t_c=Gamma * t_c,
        gamma_t_e=Gamma * t_e,
        gamma_c_over_gamma=Gamma_c / Gamma,
    )


def loss_series(Gamma: float, Gamma_c: float, t_c: float, t_e: float, n_terms: int) -> float:
    """Passage-by-passage sum of the loss probability, truncated at ``n_terms``."""
    if n_terms < 1:
        raise ConfigError("n_terms must be >= 1")
    capture = -math.expm1(-2.0 * Gamma * t_e)
    terms = (
        capture * math.exp(-(2 * n - 1) * Gamma_c * t_c - 2 * (n - 1) * Gamma * t_e)
        for n in range(1, n_terms + 1)
    )
    return math.fsum(terms)


def suppression_pipeline(scenario, workers: int = 1, emission=None) -> LossResult:
    """Collision timing, Monte Carlo Gamma_c, then the closed-form loss ratio."""
    from .emission import monte_carlo_emission

    geom = scenario.collision_geometry()
    if emission is None:
        emission = monte_carlo_emission(scenario, workers=workers)
    Gamma = scenario.species.gamma
    return loss_probability(Gamma, emission.gamma_c_over_gamma * Gamma, geom.t_c, geom.t_e)
