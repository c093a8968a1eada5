# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the closed-form susceptibility kernels.

Same signatures and results as ``_kernels_py``; one scalar loop per call
avoids the per-operation overhead numpy pays on the short node arrays the
adaptive quadrature feeds in.
"""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def chi_resonant(delta_p, double complex p_b, double rho_cpcp, double omega_b, double omega_c,
                 double omega_mu, double gamma_ab, double gamma_C, double gamma_Cp):
    cdef cnp.ndarray[double, ndim=1] dp = np.ascontiguousarray(np.ravel(delta_p), dtype=np.float64)
    cdef Py_ssize_t n = dp.shape[0], i
    cdef cnp.ndarray[double complex, ndim=1] out = np.empty(n, dtype=np.complex128)
    cdef double complex I = 1j, total, Z, x
    cdef double sg
    cdef int branch
    for i in range(n):
        total = 0
        for branch in range(2):
            sg = 1.0 if branch == 0 else -1.0
            x = -2.0 * dp[i] - sg * omega_b
            Z = (omega_mu * omega_mu * (2 * I * gamma_Cp + x)
                 - (2 * I * gamma_ab + x) * ((I * gamma_C + I * gamma_Cp + x) * (I * gamma_C + I * gamma_Cp + x)
                                             - omega_c * omega_c))
            total = total + (p_b * (2 * I * gamma_C + x) * (2 * I * gamma_Cp + x)
                             + omega_c * omega_c * (rho_cpcp - p_b)) / Z
        out[i] = gamma_ab * total
    return out.reshape(np.shape(delta_p))


def chi_general(delta_p, delta_mu, consts, sources):
    dp_b, dm_b = np.broadcast_arrays(np.asarray(delta_p, dtype=np.float64), np.asarray(delta_mu, dtype=np.float64))
    shape = dp_b.shape
    cdef cnp.ndarray[double, ndim=1] dp = np.ascontiguousarray(dp_b.ravel())
    cdef cnp.ndarray[double, ndim=1] dm = np.ascontiguousarray(dm_b.ravel())
    cdef double Db = consts[0], Dc = consts[1], Obe = consts[2], Oce = consts[3]
    cdef double cb = consts[4], sb = consts[5], cc = consts[6], sc = consts[7]
    cdef double Om = consts[8], gab = consts[9], gC = consts[10], gCp = consts[11]
    cdef double complex s_B = sources[0], s_Bp = sources[1], rCa = sources[2], rCpa = sources[3]
    cdef Py_ssize_t n = dp.shape[0], i
    cdef cnp.ndarray[double complex, ndim=1] out = np.empty(n, dtype=np.complex128)
    cdef double complex I = 1j, Z, num, opt, total, src
    cdef double k, u, sg, w, c2 = cc * cc, s2 = sc * sc, c2t, dg = gC - gCp, Om2 = Om * Om
    cdef int branch
    c2t = c2 - s2
    for i in range(n):
        k = Db - Dc - 2.0 * (dp[i] - dm[i])
        total = 0
        for branch in range(2):
            if branch == 0:
                sg, src, w = 1.0, s_B, cb
            else:
                sg, src, w = -1.0, s_Bp, -sb
            u = k - sg * Obe
            opt = 2 * I * gab + Db - 2.0 * dp[i] - sg * Obe
            Z = (s2 * (2 * I * gCp + u + Oce) * Om2
                 + 2 * I * c2 * s2 * dg * (2 * I * dg * opt - Om2)
                 + (-2 * I * s2 * gC - 2 * I * c2 * gCp - u + Oce)
                 * (opt * (2 * I * c2 * gC + 2 * I * s2 * gCp + u + Oce) - c2 * Om2))
            num = (-sg * src * (-(2 * I * gC + u) * (2 * I * gCp + u) + 2 * I * c2t * dg * Oce + Oce * Oce)
                   + w * (cc * rCa * (2 * I * gCp + u - Oce) - sc * rCpa * (2 * I * gCp + u + Oce)) * Om)
            total = total + w * num / Z
        out[i] = 2.0 * gab * total
    return out.reshape(shape)
