"""Pure-numpy implementations of the hot closed-form kernels.

Used when the compiled ``_kernels`` extension is unavailable; both expose
the same two functions with identical argument order.
"""
import numpy as np


def chi_resonant(delta_p, p_b, rho_cpcp, omega_b, omega_c, omega_mu, gamma_ab, gamma_C, gamma_Cp):
    """Two-branch resonant susceptibility (all RF and control detunings zero)."""
    dp = np.asarray(delta_p, dtype=float)
    total = np.zeros(dp.shape, dtype=complex)
    for sg in (1.0, -1.0):
        x = -2.0 * dp - sg * omega_b
        Z = (omega_mu ** 2 * (2j * gamma_Cp + x)
             - (2j * gamma_ab + x) * ((1j * gamma_C + 1j * gamma_Cp + x) ** 2 - omega_c ** 2))
        total += (p_b * (2j * gamma_C + x) * (2j * gamma_Cp + x) + omega_c ** 2 * (rho_cpcp - p_b)) / Z
    return gamma_ab * total


def chi_general(delta_p, delta_mu, consts, sources):
    """General-detuning susceptibility per unit probe Rabi frequency.

    Parameters
    ----------
    delta_p, delta_mu : array_like
        Probe and control detunings (broadcast together).
    consts : sequence of float
        (delta_b, delta_c, omega_b_eff, omega_c_eff, cos_b, sin_b, cos_c,
        sin_c, omega_mu, gamma_ab, gamma_C, gamma_Cp).
    sources : sequence of complex
        (s_B, s_Bp, rho_Ca, rho_Cpa): the dressed b-manifold source
        combinations and the dressed optical coherences driven by the control.
    """
    (Db, Dc, Obe, Oce, cb, sb, cc, sc, Om, gab, gC, gCp) = (float(v) for v in consts)
    s_B, s_Bp, rCa, rCpa = (complex(v) for v in sources)
    Dp, Dm = np.broadcast_arrays(np.asarray(delta_p, dtype=float), np.asarray(delta_mu, dtype=float))
    k = Db - Dc - 2.0 * (Dp - Dm)
    c2, s2 = cc * cc, sc * sc
    c2t = c2 - s2
    dg = gC - gCp
    out = np.zeros(Dp.shape, dtype=complex)
    for sg, src, w in ((1.0, s_B, cb), (-1.0, s_Bp, -sb)):
        u = k - sg * Obe
        opt = 2j * gab + Db - 2.0 * Dp - sg * Obe
        Z = (s2 * (2j * gCp + u + Oce) * Om ** 2
             + 2j * c2 * s2 * dg * (2j * dg * opt - Om ** 2)
             + (-2j * s2 * gC - 2j * c2 * gCp - u + Oce) * (opt * (2j * c2 * gC + 2j * s2 * gCp + u + Oce) - c2 * Om ** 2))
        num = (-sg * src * (-(2j * gC + u) * (2j * gCp + u) + 2j * c2t * dg * Oce + Oce ** 2)
               + w * (cc * rCa * (2j * gCp + u - Oce) - sc * rCpa * (2j * gCp + u + Oce)) * Om)
        out += w * num / Z
    return 2.0 * gab * out
