"""Thermal Doppler widths and the Gaussian-broadened susceptibility.

The one-photon detuning Delta_p' and the two-photon detuning
delta = Delta_p' - Delta_mu are averaged over independent Gaussians (no
velocity correlation between them):

    chi_D(D) = int int chi(Delta_p', Delta_p' - delta) G(Delta_p' - D; s_p) G(delta - D; s_d)

Narrow features sit where (delta - c) + kappa (Delta_p' - c) = 0 with
c = (Delta_b +- Omega_b_eff)/2 and kappa = Omega_c^2/Omega_mu^2, so the
integrand is far more sensitive to delta than to Delta_p'.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import constants as sc

from . import analytic, kernels
from .dressed import angles_for
from .errors import ConfigError, UnknownPresetError
from .params import SystemParams
from .quadrature import integrate


@dataclass(frozen=True)
class DopplerSpec:
    """Widths of the two Gaussians and quadrature controls.

    Attributes
    ----------
    sigma_delta_p, sigma_delta : float
        Standard deviations of the one- and two-photon detunings [gamma_ab].
    rel_tol : float
        Target relative error of the integral.
    max_depth : int
        Maximum bisections of any panel, per axis.
    truncation : float
        Half range of each axis in units of its sigma (>= 4).
    probe_center, delta_center : float or None
        Gaussian centers; None follows the mean probe detuning (and, for
        delta, subtracts the control detuning of the parameters).
    """

    sigma_delta_p: float = 0.0
    sigma_delta: float = 0.0
    rel_tol: float = 1e-6
    max_depth: int = 40
    truncation: float = 6.0
    probe_center: float | None = None
    delta_center: float | None = None

    def __post_init__(self):
        if not (self.sigma_delta_p >= 0 and self.sigma_delta >= 0):
            raise ConfigError("Doppler widths must be non-negative")
        if self.truncation < 4:
            raise ConfigError("truncation must be at least 4 sigma")
        if not self.rel_tol > 0 or self.max_depth < 1:
            raise ConfigError("rel_tol must be positive and max_depth at least 1")


DOPPLER_PRESETS = {
    "doppler-fig8": DopplerSpec(sigma_delta_p=0.001, sigma_delta=0.05),
    "doppler-fig9": DopplerSpec(sigma_delta_p=10.0, sigma_delta=0.001),
}


def doppler_preset(name: str) -> DopplerSpec:
    try:
        return DOPPLER_PRESETS[name]
    except KeyError:
        raise UnknownPresetError(f"no Doppler spec for preset {name!r}") from None


@dataclass(frozen=True)
class DopplerWidths:
    sigma_v: float
    sigma_D: float
    sigma_D_reduced: float | None = None


def doppler_widths(T, m, omega0, gamma_ab_si=None) -> DopplerWidths:
    """Maxwell-Boltzmann velocity width 2 sqrt(2 ln2 k_B T/m) and sigma_D = omega0 sigma_v / c.

    ``sigma_D`` keeps the units of ``omega0``; with ``gamma_ab_si`` it is
    also given in reduced units.
    """
    if T <= 0 or m <= 0:
        raise ConfigError("temperature and mass must be positive")
    sigma_v = 2.0 * math.sqrt(2.0 * math.log(2.0) * sc.k * T / m)
    sigma_D = omega0 * sigma_v / sc.c
    return DopplerWidths(sigma_v, sigma_D, None if gamma_ab_si is None else sigma_D / gamma_ab_si)


def _gauss(x, s):
    return np.exp(-0.5 * (x / s) ** 2) / (math.sqrt(2.0 * math.pi) * s)


class _Integrand:
    """chi(Delta_p', Delta_mu) for fixed params, optionally differentiated in Delta_p'."""

    def __init__(self, params: SystemParams, derivative_step=None):
        angles = angles_for(params)
        pops = analytic.populations(params)
        src = analytic.dressed_sources(pops, angles, params.omega_mu)
        self.consts = analytic.general_constants(angles, params.delta_b, params.delta_c, params.omega_mu,
                                                 params.gamma_ab, params.gamma_C, params.gamma_Cp)
        self.src = (src.s_B, src.s_Bp, src.rho_Ca, src.rho_Cpa)
        self.h = derivative_step
        eff = angles.omega_b_eff
        self.centers = ((params.delta_b - eff) / 2.0, (params.delta_b + eff) / 2.0)
        self.kappa = params.omega_c ** 2 / params.omega_mu ** 2
        self.broad = (-params.omega_mu / 2.0, params.omega_mu / 2.0)

    def __call__(self, dp, dmu):
        if self.h is None:
            return kernels.chi_general(dp, dmu, self.consts, self.src)
        h = self.h
        return (kernels.chi_general(np.add(dp, h), dmu, self.consts, self.src)
                - kernels.chi_general(np.subtract(dp, h), dmu, self.consts, self.src)) / (2.0 * h)

    def delta_breaks(self, dp):
        return [c - self.kappa * (dp - c) for c in self.centers]

    def probe_breaks(self, delta):
        pts = list(self.broad) + list(self.centers)
        if self.kappa > 0:
            pts += [c - (delta - c) / self.kappa for c in self.centers]
        return pts


def _broaden(params: SystemParams, mean, spec: DopplerSpec, fn: _Integrand):
    cp = mean if spec.probe_center is None else spec.probe_center
    cd = mean - params.delta_mu if spec.delta_center is None else spec.delta_center
    sp, sd, T = spec.sigma_delta_p, spec.sigma_delta, spec.truncation
    ref = abs(complex(fn(cp, cp - cd)))
    atol = spec.rel_tol * max(ref, 1e-12) * 1e-2
    kw = dict(rel_tol=spec.rel_tol, abs_tol=atol, max_depth=spec.max_depth)

    if sp == 0 and sd == 0:
        return complex(fn(cp, cp - cd))
    if sp == 0:
        f = lambda d: fn(cp, cp - d) * _gauss(d - cd, sd)
        return integrate(f, cd - T * sd, cd + T * sd, fn.delta_breaks(cp), **kw)[0]
    if sd == 0:
        f = lambda x: fn(x, x - cd) * _gauss(x - cp, sp)
        return integrate(f, cp - T * sp, cp + T * sp, fn.probe_breaks(cd), **kw)[0]

    def inner(x):
        g = lambda d: fn(x, x - d) * _gauss(d - cd, sd)
        return integrate(g, cd - T * sd, cd + T * sd, fn.delta_breaks(x), **kw)[0]

    def outer(xs):
        return np.array([inner(x) for x in xs]) * _gauss(xs - cp, sp)

    pts = fn.broad + fn.centers
    if fn.kappa > 0:
        pts += tuple(c - (cd - c) / fn.kappa for c in fn.centers)
    return integrate(outer, cp - T * sp, cp + T * sp, pts, **kw)[0]


def broadened_susceptibility(params: SystemParams, delta_p_mean, spec: DopplerSpec) -> complex:
    """Doppler-broadened reduced susceptibility at mean probe detuning ``delta_p_mean``.

    Axes with zero width are collapsed exactly; the rest are integrated by
    nested adaptive Gauss-Kronrod quadrature over +-truncation sigma.

    Raises
    ------
    QuadratureError
        When the tolerance is not met; carries the estimate and error bound.
    """
    return complex(_broaden(params, float(delta_p_mean), spec, _Integrand(params)))


def broadened_slope(params: SystemParams, delta_p_mean, spec: DopplerSpec, step=None) -> float:
    """d Re chi_D / d Delta_p at ``delta_p_mean``.

    The derivative is taken inside the integral by central differences in
    Delta_p' at fixed Delta_mu with step Gamma_n/100 by default.
    """
    if step is None:
        step = analytic.feature_width(params.omega_c, params.omega_mu, params.gamma_ab, params.gamma_Cp) / 100.0
    return complex(_broaden(params, float(delta_p_mean), spec, _Integrand(params, step))).real


@dataclass(frozen=True)
class FeatureSensitivity:
    """Generalized Lorentzian of a narrow feature in (Delta_p', delta).

    ``coeff_one_photon`` and ``coeff_two_photon`` multiply the offsets of
    Delta_p' and delta in the resonance denominator; the ``width_*`` fields
    are predicted half widths in the mean probe detuning with only one axis
    broadened, and with both.
    """

    coeff_one_photon: float
    coeff_two_photon: float
    homogeneous_width: float
    sigma_effective: float
    width_one_photon: float
    width_two_photon: float
    width: float
    dominant_axis: str


def voigt_half_width(lorentz_half, sigma):
    """Half width at half maximum of a Voigt profile (Olivero-Longbothum approximation).

    Exact in the pure Lorentzian and pure Gaussian limits.
    """
    if sigma == 0:
        return lorentz_half
    fl = 2.0 * lorentz_half
    fg = 2.0 * math.sqrt(2.0 * math.log(2.0)) * sigma
    return 0.5 * (0.5346 * fl + math.sqrt(0.2166 * fl * fl + fg * fg))


def feature_sensitivity(params: SystemParams, spec: DopplerSpec) -> FeatureSensitivity:
    """Predicted broadened widths of the narrow features.

    In the resonance variable u = (delta - c) + kappa (Delta_p' - c) the
    feature is a Lorentzian of half width (1 + kappa) Gamma_n; the two
    Gaussians add a Gaussian of width sqrt(s_d^2 + kappa^2 s_p^2) in u.
    """
    kappa = params.omega_c ** 2 / params.omega_mu ** 2
    gn = analytic.feature_width(params.omega_c, params.omega_mu, params.gamma_ab, params.gamma_Cp)
    lu = (1.0 + kappa) * gn
    s1 = kappa * spec.sigma_delta_p
    s2 = spec.sigma_delta
    seff = math.hypot(s1, s2)
    w = lambda s: voigt_half_width(lu, s) / (1.0 + kappa)
    return FeatureSensitivity(kappa, 1.0, gn, seff, w(s1), w(s2), w(seff),
                              "two-photon" if s2 >= s1 else "one-photon")
