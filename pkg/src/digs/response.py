"""Experiment-facing quantities derived from the reduced susceptibility.

Internally the probe detuning follows Delta_p = omega_ab - nu_p, so a
laboratory frequency axis (nu_p increasing) is ``-delta_p``;
:func:`lab_axis` applies that flip for output.
"""
from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import constants as sc

from . import analytic
from .errors import ConfigError, DigsError, GridTooCoarseError, RegimeWarning, UnknownPresetError
from .params import SystemParams

METHODS = ("analytic-resonant", "analytic-general", "numeric", "doppler")
CSV_HEADER = ("delta_p", "re_chi_tilde", "im_chi_tilde", "re_chi", "im_chi", "alpha", "n", "n_g")


@dataclass(frozen=True)
class MediumSpec:
    """Physical medium used to convert reduced quantities to SI.

    Attributes
    ----------
    number_density : float
        N [m^-3].
    dipole_moment : float
        D_ab [C m].
    fill_factor : float
        Spatial overlap sigma [dimensionless].
    probe_wavelength : float
        lambda_p [m].
    sample_length : float
        l [m].
    gamma_ab_si : float
        The a-b coherence decay rate that sets the reduced unit [s^-1].
    reference_delay : float or None
        Measured EIT group delay [s] used to scale delay ratios, if known.
    """

    number_density: float
    dipole_moment: float
    fill_factor: float
    probe_wavelength: float
    sample_length: float
    gamma_ab_si: float
    reference_delay: float | None = None
    epsilon_0: float = sc.epsilon_0
    hbar: float = sc.hbar
    c: float = sc.c
    k_B: float = sc.k

    def __post_init__(self):
        for name in ("number_density", "dipole_moment", "fill_factor", "probe_wavelength",
                     "sample_length", "gamma_ab_si", "epsilon_0", "hbar", "c", "k_B"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ConfigError(f"medium field {name} must be finite and positive, got {v!r}")

    @property
    def scale(self) -> float:
        """chi / chi_tilde = D^2 N sigma / (eps0 hbar gamma_ab)."""
        return self.dipole_moment ** 2 * self.number_density * self.fill_factor / (
            self.epsilon_0 * self.hbar * self.gamma_ab_si)

    @property
    def nu_p(self) -> float:
        """Probe angular frequency 2 pi c / lambda_p [rad/s]."""
        return 2.0 * math.pi * self.c / self.probe_wavelength

    @property
    def k_p(self) -> float:
        return 2.0 * math.pi / self.probe_wavelength


def calibrate_density(target_vg, reduced_slope, *, dipole_moment, fill_factor, probe_wavelength,
                      sample_length, gamma_ab_si, reference_delay=None) -> MediumSpec:
    """Medium whose reduced slope ``reduced_slope`` yields group velocity ``target_vg``.

    Backs out D^2 N sigma from n_g = 1 - (nu_p/2) d Re chi / d Delta_p; this
    is a calibration, not a first-principles density.
    """
    nu_p = 2.0 * math.pi * sc.c / probe_wavelength
    n_g = sc.c / target_vg
    scale = 2.0 * gamma_ab_si * (1.0 - n_g) / (nu_p * reduced_slope)
    if scale <= 0:
        raise ConfigError("calibration needs a slope whose sign matches the target group velocity")
    density = scale * sc.epsilon_0 * sc.hbar * gamma_ab_si / (dipole_moment ** 2 * fill_factor)
    return MediumSpec(density, dipole_moment, fill_factor, probe_wavelength, sample_length, gamma_ab_si,
                      reference_delay)


def medium_preset(name: str, params: SystemParams | None = None) -> MediumSpec:
    """Named media.

    ``kash-rb87``: Rb-87 D1 line, 2.5 cm cell, calibrated so the unpumped
    EIT reference (p_b = 1/2, rho_c'c' = 0, Omega_b = Omega_c) of ``params``
    (default: the kash-rb87 system preset) travels at 90 m/s; the measured
    EIT delay of 0.26 ms is kept as the reference delay.
    """
    if name != "kash-rb87":
        raise UnknownPresetError(f"unknown medium preset {name!r}; known: kash-rb87")
    from .params import preset

    p = preset("kash-rb87") if params is None else params
    ref = analytic.GeneralizedPopulations(0.5, 0.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        slope = analytic.dispersion_slope(ref, p.omega_c, p.omega_c, p.omega_mu, 1.0)
    return calibrate_density(90.0, slope, dipole_moment=2.537e-29, fill_factor=1.0, probe_wavelength=795e-9,
                             sample_length=0.025, gamma_ab_si=5e6, reference_delay=0.26e-3)


# ---------------------------------------------------------------------------
# conversions


@dataclass(frozen=True)
class PhysicalResponse:
    chi: complex
    alpha: float
    n: float


def to_physical(chi_tilde, medium: MediumSpec) -> PhysicalResponse:
    """chi = chi_tilde D^2 N sigma/(eps0 hbar gamma_ab), alpha = k_p Im chi, n = sqrt(1 + Re chi)."""
    chi = np.asarray(chi_tilde) * medium.scale
    return PhysicalResponse(chi, medium.k_p * np.imag(chi), np.sqrt(1.0 + np.real(chi)))


def group_index_from_slope(reduced_slope, medium: MediumSpec, re_chi_tilde=0.0) -> float:
    """n_g = n - (nu_p/2n) d Re chi/d Delta_p given the reduced slope d Re chi_tilde/d Delta_p."""
    n = math.sqrt(1.0 + re_chi_tilde * medium.scale)
    dchi = reduced_slope * medium.scale / medium.gamma_ab_si
    return n - medium.nu_p / (2.0 * n) * dchi


def group_velocity(n_g, medium: MediumSpec) -> float:
    return medium.c / n_g


def group_delay(n_g, medium: MediumSpec) -> float:
    """tau_d = l (1/v_g - 1/c) [s]."""
    return medium.sample_length * (n_g - 1.0) / medium.c


def delay_ratio(p_b_real, rho_cpcp, omega_b, omega_c) -> float:
    """tau_DIGS/tau_EIT = (Re p_b (Omega_b^2 + Omega_c^2) - Omega_c^2 rho_c'c')/Omega_b^2."""
    if omega_b == 0:
        raise analytic.AnalyticDomainError("delay ratio needs Omega_b > 0")
    return (p_b_real * (omega_b ** 2 + omega_c ** 2) - omega_c ** 2 * rho_cpcp) / omega_b ** 2


def scaled_delay(ratio, medium: MediumSpec) -> float:
    """Delay obtained by scaling the medium's measured EIT delay by ``ratio``."""
    if medium.reference_delay is None:
        raise ConfigError("medium carries no reference EIT delay")
    return ratio * medium.reference_delay


def delay_ratio_curve(params: SystemParams, r_values) -> np.ndarray:
    """Delay ratio against closed pump rate with populations from the closed-pump model."""
    out = []
    for r in np.asarray(r_values, dtype=float):
        p = analytic.populations(params.replace(r=float(r), p_b=None, rho_cpcp=None))
        out.append(delay_ratio(p.p_b.real, p.rho_cpcp, params.omega_b, params.omega_c))
    return np.array(out)


def delay_sign_change(params: SystemParams, r_max=10.0, tol=1e-12) -> float:
    """Closed pump rate at which the delay ratio changes sign (bisection)."""
    f = lambda r: delay_ratio_curve(params, [r])[0]
    lo, hi = 0.0, r_max
    if f(lo) * f(hi) > 0:
        raise DigsError("delay ratio keeps its sign on [0, r_max]")
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if f(lo) * f(mid) > 0 else (lo, mid)
    return 0.5 * (lo + hi)


def central_slope(f, x0=0.0, h0=1e-2, rtol=1e-3, h_min=1e-6) -> float:
    """Central-difference derivative, halving the step until two estimates agree to ``rtol``."""
    h = h0
    prev = (f(x0 + h) - f(x0 - h)) / (2.0 * h)
    while h > h_min:
        h *= 0.5
        cur = (f(x0 + h) - f(x0 - h)) / (2.0 * h)
        if abs(cur - prev) <= rtol * max(abs(cur), 1e-300):
            return cur
        prev = cur
    return prev


def group_index(source, medium: MediumSpec, x0=0.0, feature_width=None) -> float:
    """Group index at Delta_p = x0.

    ``source`` is either a :class:`SystemParams` (slope by adaptive central
    differences on the general analytic susceptibility) or a
    :class:`Spectrum` (finite differences on its grid, which must put at
    least three points within ``feature_width``).
    """
    if isinstance(source, Spectrum):
        x, y = source.delta_p, source.chi_tilde.real
        if feature_width is not None:
            near = np.abs(x - x0) <= 0.5 * feature_width
            if near.sum() < 3:
                raise GridTooCoarseError("fewer than three grid points within the feature width")
        i = int(np.argmin(np.abs(x - x0)))
        if len(x) < 3:
            raise GridTooCoarseError("need at least three grid points")
        i = min(max(i, 1), len(x) - 2)
        slope = (y[i + 1] - y[i - 1]) / (x[i + 1] - x[i - 1])
        return group_index_from_slope(slope, medium, y[i])
    f = lambda d: complex(analytic.general_spectrum(source, d)).real
    h0 = analytic.feature_width(source.omega_c, source.omega_mu, source.gamma_ab, source.gamma_Cp) / 100.0
    return group_index_from_slope(central_slope(f, x0, h0), medium, f(x0))


def lab_axis(delta_p):
    """Probe detuning on a laboratory axis (increasing probe frequency)."""
    return -np.asarray(delta_p)


# ---------------------------------------------------------------------------
# spectra


@dataclass
class Spectrum:
    """Susceptibility over a strictly increasing detuning grid.

    ``flags`` marks points whose evaluation failed or gave non-finite
    values; their entries are NaN.  Physical columns are NaN without a
    medium.
    """

    delta_p: np.ndarray
    chi_tilde: np.ndarray
    method: str
    flags: np.ndarray
    chi: np.ndarray = field(default=None)
    alpha: np.ndarray = field(default=None)
    n: np.ndarray = field(default=None)
    n_g: np.ndarray = field(default=None)

    def __post_init__(self):
        nan = np.full(self.delta_p.shape, np.nan)
        for name in ("alpha", "n", "n_g"):
            if getattr(self, name) is None:
                setattr(self, name, nan.copy())
        if self.chi is None:
            self.chi = nan + 1j * nan

    def rows(self):
        for i in range(len(self.delta_p)):
            yield (self.delta_p[i], self.chi_tilde[i].real, self.chi_tilde[i].imag, self.chi[i].real,
                   self.chi[i].imag, self.alpha[i], self.n[i], self.n_g[i])

    def to_dict(self) -> dict:
        d = {name: [float(r[k]) for r in self.rows()] for k, name in enumerate(CSV_HEADER)}
        d["method"] = self.method
        d["flags"] = [bool(f) for f in self.flags]
        return d


def parse_grid(text: str) -> np.ndarray:
    """Parse ``start:stop:count`` into a grid."""
    try:
        start, stop, count = text.split(":")
        start, stop, count = float(start), float(stop), int(count)
    except ValueError as exc:
        raise ConfigError(f"grid must look like start:stop:count, got {text!r}") from exc
    if count < 1 or (count > 1 and not stop > start):
        raise ConfigError(f"grid {text!r} is empty or not increasing")
    return np.linspace(start, stop, count)


def _undriven(params):
    """True when no field couples any transition; the induced polarization then vanishes."""
    return not any((params.omega_p, params.omega_b, params.omega_c, params.omega_mu))


def _pointwise(fn, grid):
    out = np.full(grid.shape, np.nan, dtype=complex)
    for i, x in enumerate(grid):
        try:
            out[i] = fn(x)
        except (DigsError, ZeroDivisionError, FloatingPointError, np.linalg.LinAlgError):
            pass
    return out


def _evaluate(params, grid, method, doppler_spec):
    if method == "numeric":
        from .liouvillian import steady_states

        rho, ok = steady_states(params, grid)
        vals = 2.0 * params.gamma_ab * rho[:, 0, 1] / params.omega_p
        return np.where(ok, vals, np.nan)
    if method == "doppler":
        from .doppler import DopplerSpec, broadened_susceptibility

        spec = DopplerSpec() if doppler_spec is None else doppler_spec
        return _pointwise(lambda x: broadened_susceptibility(params, x, spec), grid)
    fn = analytic.resonant_spectrum if method == "analytic-resonant" else analytic.general_spectrum
    with np.errstate(all="ignore"):
        try:
            return np.asarray(fn(params, grid), dtype=complex)
        except (DigsError, ZeroDivisionError):
            return _pointwise(lambda x: fn(params, x), grid)


def scan(params: SystemParams, grid, method="analytic-general", medium: MediumSpec | None = None,
         doppler_spec=None) -> Spectrum:
    """Evaluate the susceptibility on ``grid`` by the chosen ``method``.

    Failing or non-finite points are flagged and set to NaN; the scan itself
    never aborts on a per-point error.  With every field coupling zero the
    spectrum is identically zero.
    """
    if method not in METHODS:
        raise ConfigError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    if grid.size == 0:
        raise ConfigError("grid is empty")
    if grid.size > 1 and not np.all(np.diff(grid) > 0):
        raise ConfigError("grid must be strictly increasing")
    if _undriven(params):
        chi_t = np.zeros(grid.shape, dtype=complex)
    else:
        chi_t = _evaluate(params, grid, method, doppler_spec)
    flags = ~np.isfinite(chi_t)
    chi_t = np.where(flags, np.nan + 0j, chi_t)
    spec = Spectrum(grid, chi_t, method, flags)
    if medium is not None:
        phys = to_physical(chi_t, medium)
        spec.chi, spec.alpha, spec.n = phys.chi, phys.alpha, phys.n
        if grid.size >= 3:
            slope = np.gradient(chi_t.real, grid)
            spec.n_g = np.array([group_index_from_slope(s, medium, y) if np.isfinite(s) else np.nan
                                 for s, y in zip(slope, chi_t.real)])
    return spec


def write_csv(spectrum: Spectrum, path) -> None:
    """Write ``spectrum`` with 17 significant digits per value."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in spectrum.rows():
            w.writerow(["%.17g" % v for v in row])


def read_csv(path) -> dict:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if tuple(rows[0]) != CSV_HEADER:
        raise ConfigError(f"{path}: unexpected header")
    data = np.array(rows[1:], dtype=float).reshape(-1, len(CSV_HEADER))
    return {name: data[:, k] for k, name in enumerate(CSV_HEADER)}


def write_json(spectrum: Spectrum, path) -> None:
    with open(path, "w") as fh:
        json.dump(spectrum.to_dict(), fh, indent=1, sort_keys=True)
        fh.write("\n")


def max_deviation(a: Spectrum, b: Spectrum) -> float:
    """max |Im a - Im b| relative to the larger peak |Im| of the two."""
    diff = np.nanmax(np.abs(a.chi_tilde.imag - b.chi_tilde.imag))
    scale = max(np.nanmax(np.abs(a.chi_tilde.imag)), np.nanmax(np.abs(b.chi_tilde.imag)))
    return float(diff / scale) if scale > 0 else float(diff)


__all__ = ["MediumSpec", "Spectrum", "PhysicalResponse", "calibrate_density", "medium_preset", "to_physical",
           "group_index", "group_index_from_slope", "group_velocity", "group_delay", "delay_ratio",
           "scaled_delay", "delay_ratio_curve", "delay_sign_change", "scan", "parse_grid", "write_csv",
           "read_csv", "write_json", "max_deviation", "lab_axis"]
