"""Closed-form steady states, susceptibilities, feature shapes and thresholds.

All inputs are dimensionless (units of gamma_ab).  Functions accept numpy
arrays wherever a detuning is expected.  Formulas that rely on an ordering
of scales emit :class:`~digs.errors.RegimeWarning` when it fails but still
evaluate.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .dressed import MixingAngles, mixing_angles, to_dressed
from .errors import AnalyticDomainError, ConditionViolatedError, RegimeWarning
from .liouvillian import DensityMatrix
from .params import ClosedPump, OpenPump, SystemParams

SQRT2 = math.sqrt(2.0)
# ratio used to read "x << y" as x <= MUCH_LESS * y
MUCH_LESS = 0.1


def _warn(message, inequality):
    warnings.warn(RegimeWarning(message, inequality), stacklevel=3)


def _div(num, den, what):
    if np.any(np.asarray(den) == 0):
        raise AnalyticDomainError(f"{what}: zero denominator")
    return num / den


@dataclass(frozen=True)
class GeneralizedPopulations:
    """Source populations for the susceptibility.

    p_b is the generalized b-manifold population (complex for open
    pumping), rho_cpcp the |c'> population and p_c the optional
    generalized c-manifold population (defaults to rho_cpcp).
    """

    p_b: complex
    rho_cpcp: float
    p_c: complex | None = None

    @property
    def c_population(self) -> complex:
        return self.rho_cpcp if self.p_c is None else self.p_c

    def bounds_ok(self) -> bool:
        """True when 0 <= rho_cpcp <= 1 and 0 <= Re p_b <= 1 (normalized closed systems)."""
        return 0.0 <= self.rho_cpcp <= 1.0 and 0.0 <= complex(self.p_b).real <= 1.0


@dataclass(frozen=True)
class DressedSources:
    """Zeroth-order source terms of the dressed probe coherences.

    s_B = cos(theta_b) rho_BB - sin(theta_b) rho_B'B and
    s_Bp = sin(theta_b) rho_B'B' - cos(theta_b) rho_BB' drive rho_aB and
    rho_aB'; rho_Ca and rho_Cpa are the control-induced dressed coherences.
    """

    s_B: complex
    s_Bp: complex
    rho_Ca: complex
    rho_Cpa: complex


# ---------------------------------------------------------------------------
# open pumping


@dataclass(frozen=True)
class BManifold:
    rho_bb: float
    rho_bpbp: float
    rho_bbp: complex


def open_b_manifold(r_b, gamma_b, gamma_bp, gamma_bbp, omega_b) -> BManifold:
    """Steady state of the RF-coupled {b, b'} doublet under pumping into |b>."""
    den = 2.0 * gamma_b * gamma_bp * gamma_bbp + (gamma_b + gamma_bp) * omega_b ** 2
    if den == 0:
        raise AnalyticDomainError("b-manifold has no decay; populations diverge")
    return BManifold(r_b * (2.0 * gamma_bp * gamma_bbp + omega_b ** 2) / den,
                     r_b * omega_b ** 2 / den,
                     -1j * r_b * gamma_bp * omega_b / den)


def open_p_b(r_b, gamma_b, gamma_bp, omega_b) -> complex:
    """Generalized b population r_b (Omega_b - i gamma_b') / ((gamma_b + gamma_b') Omega_b)."""
    return _div(r_b * (omega_b - 1j * gamma_bp), (gamma_b + gamma_bp) * omega_b, "open p_b")


def open_rho_cpcp(r_cp, gamma_cp, gamma_cpa, gamma_cpc, omega_c, omega_mu) -> tuple[float, float]:
    """Self-consistent |c'> population under direct pumping.

    Returns
    -------
    full, simplified : float
        ``r_cp / (2 Omega_c^2 gamma_c'a / (4 gamma_c'c gamma_c'a + Omega_mu^2) + gamma_c')``
        and its leading-order form
        ``r_cp Omega_mu^2 / (2 gamma_c'a Omega_c^2 + gamma_c' Omega_mu^2)``.
    """
    loss = 2.0 * omega_c ** 2 * gamma_cpa / (4.0 * gamma_cpc * gamma_cpa + omega_mu ** 2) + gamma_cp
    full = _div(r_cp, loss, "open rho_cpcp")
    simplified = _div(r_cp * omega_mu ** 2, 2.0 * gamma_cpa * omega_c ** 2 + gamma_cp * omega_mu ** 2,
                      "open rho_cpcp")
    return full, simplified


# ---------------------------------------------------------------------------
# closed pumping


@dataclass(frozen=True)
class ClosedPopulations:
    rho_bb: float
    rho_bpbp: float
    rho_cpcp: float
    rho_aa: float = 0.0
    rho_cc: float = 0.0


def closed_populations(r, alpha_b, alpha_c, alpha_cp, gamma_cpa, omega_c, omega_mu) -> ClosedPopulations:
    """Leading-order populations under closed pumping.

    rho_c'c' = r alpha_c' Omega_mu^2 / (4 alpha_b gamma_c'a Omega_c^2 + r alpha_c' Omega_mu^2),
    rho_bb = rho_b'b' = (1 - rho_c'c')/2; rho_aa and rho_cc are neglected.
    ``alpha_c`` is accepted for signature symmetry; it does not enter.
    """
    del alpha_c
    den = 4.0 * alpha_b * gamma_cpa * omega_c ** 2 + r * alpha_cp * omega_mu ** 2
    if den == 0:
        raise AnalyticDomainError("closed populations undefined: no pumping and no optical pumping path")
    rho_cpcp = r * alpha_cp * omega_mu ** 2 / den
    rho_bb = 2.0 * alpha_b * gamma_cpa * omega_c ** 2 / den
    return ClosedPopulations(rho_bb, rho_bb, rho_cpcp)


@dataclass(frozen=True)
class ClosedIntermediates:
    """Perturbative intermediates of the closed-pumping solution.

    Superscripts (0), (1), (2) are orders in Omega_c/Omega_mu.  The
    ``simple_*`` fields are the leading forms valid for
    r << Omega_c << Omega_mu and gamma_c'c << r.
    """

    rho0_aa: float
    rho0_cc: float
    rho0_ca: complex
    rho1_cpa: complex
    rho1_cpc: complex
    rho2_aa: complex
    rho2_cc: complex
    rho2_ca: complex
    simple_rho_cpa: complex
    simple_rho1_cpc: complex
    simple_rho2_aa: float
    simple_rho2_cc: float
    simple_rho2_ca: complex


def closed_intermediates(params: SystemParams, rho_bb=None, rho_cpcp=None) -> ClosedIntermediates:
    """Evaluate every intermediate of the closed-pumping expansion.

    The slow populations default to :func:`closed_populations`.
    """
    if not isinstance(params.pump, ClosedPump):
        raise TypeError("closed_intermediates needs a closed pump")
    pump = params.pump
    r, ac = pump.r, pump.alpha_c
    ga, Om, Oc = params.gamma_a, params.omega_mu, params.omega_c
    gca = params.relaxation("c", "a")
    gcpa = params.relaxation("cp", "a")
    gcpc = params.relaxation("cp", "c")
    if rho_bb is None or rho_cpcp is None:
        pops = closed_populations(r, pump.alpha_b, ac, pump.alpha_cp, gcpa, Oc, Om)
        rho_bb = pops.rho_bb if rho_bb is None else rho_bb
        rho_cpcp = pops.rho_cpcp if rho_cpcp is None else rho_cpcp
    if not (Oc <= MUCH_LESS * Om and r <= MUCH_LESS * max(Oc, params.omega_b)):
        _warn("closed-pumping expansion used outside r << Omega_b, Omega_c << Omega_mu",
              "r << Omega_b, Omega_c << Omega_mu")

    D = r + (1.0 - ac) * ga
    rho0_aa = rho_bb * r / D
    rho0_cc = rho_bb * r * (2.0 * ac * ga * gca ** 2 + gca * Om ** 2) / (D * gca * Om ** 2)
    rho0_ca = -1j * rho_bb * r * ac * ga * gca / (D * gca * Om)

    den1 = 4.0 * gcpc * gcpa + Om ** 2
    rho1_cpa = Oc * (Om * (rho0_cc - rho_cpcp) + 2j * gcpc * rho0_ca) / den1
    rho1_cpc = Oc * (2j * gcpa * (rho0_cc - rho_cpcp) + Om * rho0_ca) / den1
    rho1_ccp = np.conj(rho1_cpc)
    rho1_acp = np.conj(rho1_cpa)

    rho2_aa = (2.0 * r * rho_bb + 1j * (rho1_cpc - rho1_ccp) * Oc) / (2.0 * D)
    rho2_cc = (r * (4.0 * ac * ga * gca + 2.0 * Om ** 2) * rho_bb
               + 1j * Oc * (2.0 * (r + ga) * gca + Om ** 2) * (rho1_cpc - rho1_ccp)
               + Oc * Om * D * (rho1_acp + rho1_cpa)) / (2.0 * D * Om ** 2)
    rho2_ca = ((-2j * r * ac * ga * rho_bb + (r + ga) * (rho1_cpc - rho1_ccp) * Oc) / (2.0 * D * Om)
               - 1j * (rho1_acp - rho1_cpa) * Oc / (4.0 * gca))

    k = (Oc / Om) ** 2
    Dlead = (1.0 - ac) * ga
    # leading order of rho2_cc in r and Omega_c/Omega_mu; the rho_c'c' term
    # carries 2 gamma_c'a (2 gamma_a gamma_ca + Omega_mu^2) - (1 - alpha_c) gamma_a Omega_mu^2
    simple_rho2_cc = (r * rho_bb * (2.0 * ac * ga * gca + Om ** 2)
                      + k * (2.0 * gcpa * (2.0 * ga * gca + Om ** 2) - Dlead * Om ** 2) * rho_cpcp
                      ) / (Dlead * Om ** 2)
    return ClosedIntermediates(
        rho0_aa=rho0_aa, rho0_cc=rho0_cc, rho0_ca=rho0_ca,
        rho1_cpa=rho1_cpa, rho1_cpc=rho1_cpc,
        rho2_aa=rho2_aa, rho2_cc=rho2_cc, rho2_ca=rho2_ca,
        simple_rho_cpa=-(Oc / Om) * rho_cpcp,
        simple_rho1_cpc=-(2j * gcpa * Oc / Om ** 2) * rho_cpcp,
        simple_rho2_aa=(r * Om ** 2 * rho_bb + 2.0 * gcpa * Oc ** 2 * rho_cpcp) / (Dlead * Om ** 2),
        simple_rho2_cc=simple_rho2_cc,
        simple_rho2_ca=-1j * (2.0 * gcpa * rho_cpcp * Oc ** 2 + r * ac * rho_bb * Om ** 2) / ((1.0 - ac) * Om ** 3),
    )


def populations(params: SystemParams) -> GeneralizedPopulations:
    """Generalized populations for ``params``.

    Explicit ``p_b``/``rho_cpcp`` on the parameters take precedence;
    otherwise they follow from the open or closed pump model.
    """
    if params.p_b is not None and params.rho_cpcp is not None:
        return GeneralizedPopulations(complex(params.p_b), float(params.rho_cpcp))
    gcpa = params.relaxation("cp", "a")
    pump = params.pump
    if isinstance(pump, OpenPump):
        p_b = open_p_b(pump.r_b, params.gamma_b, params.gamma_bp, params.omega_b)
        _, rho = open_rho_cpcp(pump.r_cp, params.gamma_cp, gcpa, params.relaxation("cp", "c"),
                               params.omega_c, params.omega_mu)
    else:
        pops = closed_populations(pump.r, pump.alpha_b, pump.alpha_c, pump.alpha_cp, gcpa,
                                  params.omega_c, params.omega_mu)
        p_b, rho = complex(pops.rho_bb), pops.rho_cpcp
    if params.p_b is not None:
        p_b = complex(params.p_b)
    if params.rho_cpcp is not None:
        rho = float(params.rho_cpcp)
    return GeneralizedPopulations(complex(p_b), float(rho))


# ---------------------------------------------------------------------------
# generalized populations and dressed sources


def b_sources(rho_b_block, angles: MixingAngles) -> tuple[complex, complex]:
    """The two dressed source combinations (s_B, s_B') of a bare 2x2 {b, b'} block."""
    blk = np.asarray(rho_b_block, dtype=complex)
    cb, sb = angles.cos_b, angles.sin_b
    R = np.array([[cb, sb], [-sb, cb]])
    d = R @ blk @ R.T
    return cb * d[0, 0] - sb * d[1, 0], sb * d[1, 1] - cb * d[0, 1]


def generalized_p_b(rho_b_block, angles: MixingAngles, strict=False, rtol=1e-9) -> complex:
    """Generalized b population sqrt(2) (cos(theta_b) rho_BB - sin(theta_b) rho_B'B).

    A single generalized population exists only when the B and B' source
    combinations coincide.  Otherwise a :class:`RegimeWarning` carries both
    branch values, or with ``strict`` a :class:`ConditionViolatedError` is
    raised.
    """
    s_B, s_Bp = b_sources(rho_b_block, angles)
    if abs(s_B - s_Bp) > rtol * max(abs(s_B), abs(s_Bp), 1e-300):
        values = (SQRT2 * s_B, SQRT2 * s_Bp)
        msg = f"dressed b sources differ: branch values {values[0]:.6g}, {values[1]:.6g}"
        if strict:
            raise ConditionViolatedError(msg, values)
        _warn(msg, "cos(theta_b) rho_BB - sin(theta_b) rho_B'B = sin(theta_b) rho_B'B' - cos(theta_b) rho_BB'")
    return complex(SQRT2 * s_B)


def dressed_sources(pops: GeneralizedPopulations, angles: MixingAngles, omega_mu) -> DressedSources:
    """Sources implied by generalized populations.

    Both b branches carry p_b/sqrt(2).  The c-manifold coherences follow from
    p_c = -(2 Omega_mu / Omega_c_eff) sin(theta_c) rho_Ca with
    sin(theta_c) rho_Ca = cos(theta_c) rho_C'a.
    """
    half = complex(pops.p_b) / SQRT2
    p_c = complex(pops.c_population)
    if p_c == 0:
        return DressedSources(half, half, 0j, 0j)
    if angles.sin_c == 0 or angles.cos_c == 0 or omega_mu == 0:
        raise AnalyticDomainError("c-manifold sources undefined for an unmixed c doublet or Omega_mu = 0")
    rho_Ca = -p_c * angles.omega_c_eff / (2.0 * omega_mu * angles.sin_c)
    return DressedSources(half, half, rho_Ca, rho_Ca * angles.sin_c / angles.cos_c)


def sources_from_state(rho: DensityMatrix, angles: MixingAngles) -> DressedSources:
    """Raw dressed sources read off a (zeroth-order) density matrix."""
    d = to_dressed(rho, angles).matrix
    cb, sb = angles.cos_b, angles.sin_b
    return DressedSources(cb * d[1, 1] - sb * d[2, 1], sb * d[2, 2] - cb * d[1, 2], d[3, 0], d[4, 0])


# ---------------------------------------------------------------------------
# susceptibility


def susceptibility_resonant(p: GeneralizedPopulations, delta_p, omega_b, omega_c, omega_mu,
                            gamma_ab, gamma_C, gamma_Cp):
    """Reduced susceptibility with Delta_mu = Delta_b = Delta_c = 0.

    chi = gamma_ab sum_{+-} [P_B (2i gamma_C - 2 Delta_p -+ Omega_b)(2i gamma_C' - 2 Delta_p -+ Omega_b)
          + Omega_c^2 (rho_c'c' - P_B)] / Z_+-
    """
    out = kernels.chi_resonant(np.asarray(delta_p, dtype=float), complex(p.p_b), float(p.rho_cpcp),
                               float(omega_b), float(omega_c), float(omega_mu), float(gamma_ab),
                               float(gamma_C), float(gamma_Cp))
    return complex(out) if np.ndim(delta_p) == 0 else out


def general_constants(angles: MixingAngles, delta_b, delta_c, omega_mu, gamma_ab, gamma_C, gamma_Cp):
    return (float(delta_b), float(delta_c), angles.omega_b_eff, angles.omega_c_eff, angles.cos_b,
            angles.sin_b, angles.cos_c, angles.sin_c, float(omega_mu), float(gamma_ab),
            float(gamma_C), float(gamma_Cp))


def susceptibility_general(sources, delta_p, delta_mu=0.0, delta_b=0.0, delta_c=0.0, *, omega_b, omega_c,
                           omega_mu, gamma_ab, gamma_C, gamma_Cp):
    """Reduced susceptibility for arbitrary detunings of all four fields.

    Parameters
    ----------
    sources : GeneralizedPopulations or DressedSources
    delta_p, delta_mu : float or array_like
        Probe and control detunings (broadcast).

    Notes
    -----
    Solves the three coupled dressed coherences (rho_aX, rho_CX, rho_C'X)
    for X = B and B' in closed form, then recombines
    chi = 2 gamma_ab (cos(theta_b) rho_aB - sin(theta_b) rho_aB') / Omega_p.
    """
    angles = MixingAnglesCache.get(delta_b, omega_b, delta_c, omega_c)
    if isinstance(sources, GeneralizedPopulations):
        sources = dressed_sources(sources, angles, omega_mu)
    consts = general_constants(angles, delta_b, delta_c, omega_mu, gamma_ab, gamma_C, gamma_Cp)
    src = (sources.s_B, sources.s_Bp, sources.rho_Ca, sources.rho_Cpa)
    out = kernels.chi_general(delta_p, delta_mu, consts, src)
    return complex(out) if np.ndim(out) == 0 else out


class MixingAnglesCache:
    """Small memo so repeated quadrature calls skip recomputing the angles."""

    _last = None

    @classmethod
    def get(cls, delta_b, omega_b, delta_c, omega_c):
        key = (float(delta_b), float(omega_b), float(delta_c), float(omega_c))
        if cls._last is None or cls._last[0] != key:
            cls._last = (key, mixing_angles(*key))
        return cls._last[1]


def _check_resonant(params):
    if params.delta_mu or params.delta_b or params.delta_c:
        _warn("resonant susceptibility ignores nonzero control/RF detunings", "Delta_mu = Delta_b = Delta_c = 0")


def resonant_spectrum(params: SystemParams, delta_p, pops: GeneralizedPopulations | None = None):
    """:func:`susceptibility_resonant` with rates and populations taken from ``params``."""
    _check_resonant(params)
    pops = populations(params) if pops is None else pops
    return susceptibility_resonant(pops, delta_p, params.omega_b, params.omega_c, params.omega_mu,
                                   params.gamma_ab, params.gamma_C, params.gamma_Cp)


def general_spectrum(params: SystemParams, delta_p, delta_mu=None, sources=None):
    """:func:`susceptibility_general` with rates and populations taken from ``params``."""
    sources = populations(params) if sources is None else sources
    return susceptibility_general(sources, delta_p, params.delta_mu if delta_mu is None else delta_mu,
                                  params.delta_b, params.delta_c, omega_b=params.omega_b,
                                  omega_c=params.omega_c, omega_mu=params.omega_mu,
                                  gamma_ab=params.gamma_ab, gamma_C=params.gamma_C, gamma_Cp=params.gamma_Cp)


# reference forms used to audit limits of the resonant expression

def susceptibility_unpumped(delta_p, omega_b, omega_c, omega_mu, gamma_ab):
    """Resonant susceptibility with p_b = 1/2, rho_c'c' = 0 and no ground dephasing."""
    dp = np.asarray(delta_p, dtype=float)
    total = 0
    for sg in (1.0, -1.0):
        x = 2.0 * dp + sg * omega_b
        total = total + 0.5 * (x * x - omega_c ** 2) / (
            -omega_mu ** 2 * x - (2j * gamma_ab - x) * (x * x - omega_c ** 2))
    return gamma_ab * total


def susceptibility_double_dark(delta_p, omega_c, omega_mu, gamma_ab, rho_bb=0.5):
    """Probe on a-b, control on a-c, RF on c-c', all population rho_bb in |b>."""
    d = np.asarray(delta_p, dtype=float)
    q = 4.0 * d * d - omega_c ** 2
    return gamma_ab * rho_bb * q / ((d - 1j * gamma_ab) * q - omega_mu ** 2 * d)


def susceptibility_eit(delta_p, omega_mu, gamma_ab, rho_bb=0.5):
    """Three-level Lambda EIT with all population rho_bb in |b>."""
    d = np.asarray(delta_p, dtype=float)
    return gamma_ab * rho_bb * 4.0 * d / (4.0 * d * (d - 1j * gamma_ab) - omega_mu ** 2)


# ---------------------------------------------------------------------------
# feature geometry, thresholds, dispersion


@dataclass(frozen=True)
class FeatureShape:
    """Narrow features at ``centers`` with half width ``width`` and signed peak ``height``."""

    centers: tuple
    width: float
    height: float


def feature_width(omega_c, omega_mu, gamma_ab, gamma_Cp):
    """Gamma_n = gamma_ab Omega_c^2 / Omega_mu^2 + gamma_C'."""
    return gamma_ab * omega_c ** 2 / omega_mu ** 2 + gamma_Cp


def lorentzian_feature(p: GeneralizedPopulations, omega_b, omega_c, omega_mu, gamma_ab, gamma_Cp) -> FeatureShape:
    """Lorentzian approximation of the narrow features at +-Omega_b/2."""
    big = min(omega_mu, gamma_ab)
    if max(omega_b, omega_c, gamma_Cp) > MUCH_LESS * big:
        _warn("Lorentzian feature formula used outside its regime",
              "Omega_mu, gamma_ab >> Omega_b, Omega_c, gamma_C'")
    width = feature_width(omega_c, omega_mu, gamma_ab, gamma_Cp)
    diff = complex(p.p_b).real - p.rho_cpcp
    height = omega_c ** 2 * gamma_ab * diff / (2.0 * (gamma_ab * omega_c ** 2 + omega_mu ** 2 * gamma_Cp))
    return FeatureShape((-0.5 * omega_b, 0.5 * omega_b), width, height)


def lorentzian_profile(delta_p, p: GeneralizedPopulations, omega_b, omega_c, omega_mu, gamma_ab, gamma_Cp):
    """Im chi from the Lorentzian approximation around the nearer feature."""
    d = np.asarray(delta_p, dtype=float)
    g = omega_c ** 2 / omega_mu ** 2 + gamma_Cp / gamma_ab
    amp = gamma_ab ** 2 * omega_c ** 2 / (2.0 * omega_mu ** 2) * (complex(p.p_b).real - p.rho_cpcp)
    center = np.where(d >= 0, 0.5 * omega_b, -0.5 * omega_b)
    return amp * g / ((d - center) ** 2 + (gamma_ab * g) ** 2)


def gain_threshold(pump, *, omega_c, omega_mu, gamma_cpa, gamma_Cp=0.0, gamma_b=0.0, gamma_bp=0.0):
    """Right-hand side of the gain condition.

    Open pumping: threshold on r_c'/r_b,
    (2 gamma_c'a Omega_c^2 + gamma_C' Omega_mu^2) / ((gamma_b + gamma_b') Omega_mu^2).
    Closed pumping: threshold on r, 2 alpha_b gamma_c'a Omega_c^2 / (alpha_c' Omega_mu^2).
    """
    if isinstance(pump, OpenPump):
        return _div(2.0 * gamma_cpa * omega_c ** 2 + gamma_Cp * omega_mu ** 2,
                    (gamma_b + gamma_bp) * omega_mu ** 2, "open gain threshold")
    return _div(2.0 * pump.alpha_b * gamma_cpa * omega_c ** 2, pump.alpha_cp * omega_mu ** 2,
                "closed gain threshold")


@dataclass(frozen=True)
class AnomalousThreshold:
    """``population_ratio`` bounds rho_c'c'/Re p_b; ``pump`` is the matching
    bound on r_c'/r_b (open) or r (closed)."""

    population_ratio: float
    pump: float


def anomalous_threshold(pump, *, omega_b, omega_c, omega_mu, gamma_cpa, gamma_Cp=0.0, gamma_b=0.0,
                        gamma_bp=0.0) -> AnomalousThreshold:
    """Pumping beyond which the dispersion at line centre turns anomalous."""
    if omega_c == 0:
        raise AnalyticDomainError("anomalous threshold needs Omega_c > 0")
    ratio = 1.0 + omega_b ** 2 / omega_c ** 2
    if isinstance(pump, OpenPump):
        rate = _div((2.0 * gamma_cpa * omega_c ** 2 + gamma_Cp * omega_mu ** 2) * (omega_b ** 2 + omega_c ** 2),
                    (gamma_b + gamma_bp) * omega_mu ** 2 * omega_c ** 2, "open anomalous threshold")
    else:
        rate = _div(2.0 * pump.alpha_b * gamma_cpa * (omega_b ** 2 + omega_c ** 2), pump.alpha_cp * omega_mu ** 2,
                    "closed anomalous threshold")
    return AnomalousThreshold(ratio, rate)


def threshold_rates(params: SystemParams) -> dict:
    """Gain and anomalous thresholds with rates taken from ``params``."""
    kw = dict(omega_c=params.omega_c, omega_mu=params.omega_mu, gamma_cpa=params.relaxation("cp", "a"),
              gamma_Cp=params.gamma_Cp, gamma_b=params.gamma_b, gamma_bp=params.gamma_bp)
    gain = gain_threshold(params.pump, **kw)
    anom = anomalous_threshold(params.pump, omega_b=params.omega_b, **kw)
    return {"gain": gain, "anomalous": anom.pump, "population_ratio": anom.population_ratio}


def dispersion_slope(p: GeneralizedPopulations, omega_b, omega_c, omega_mu, gamma_ab):
    """Linear coefficient of Re chi near Delta_p = 0,
    4 gamma_ab (Omega_c^2 rho_c'c' - Re P_B (Omega_b^2 + Omega_c^2)) / (Omega_b^2 Omega_mu^2)."""
    if omega_b == 0:
        raise AnalyticDomainError("linear dispersion is not defined for Omega_b = 0")
    if omega_c ** 2 / omega_mu ** 2 > MUCH_LESS * omega_b / gamma_ab:
        _warn("no transparency window between the features; dispersion is not linear",
              "Omega_c^2/Omega_mu^2 << Omega_b/gamma_ab")
    pb = complex(p.p_b).real
    return 4.0 * gamma_ab * (omega_c ** 2 * p.rho_cpcp - pb * (omega_b ** 2 + omega_c ** 2)) / (
        omega_b ** 2 * omega_mu ** 2)


def dispersion_scale(p: GeneralizedPopulations, omega_b, omega_c, omega_mu, gamma_ab):
    """Magnitude scale of the two competing slope terms, for absolute tolerances."""
    pb = complex(p.p_b).real
    return 4.0 * gamma_ab * (omega_c ** 2 * abs(p.rho_cpcp) + abs(pb) * (omega_b ** 2 + omega_c ** 2)) / (
        omega_b ** 2 * omega_mu ** 2)
