"""Partial diagonalization of the RF-coupled ground doublets.

The b- and c-manifolds are rotated into dressed states

    |B>  =  cos(theta) |b> + sin(theta) |b'>
    |B'> = -sin(theta) |b> + cos(theta) |b'>

(and likewise C, C'), leaving |a> untouched.  Also provides the decay
mapping in that basis and the control-dressed gain-state decomposition.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateManifoldError, RegimeWarning
from .liouvillian import DensityMatrix
from .params import SystemParams


@dataclass(frozen=True)
class MixingAngles:
    """Dressing angles and effective Rabi frequencies of both doublets."""

    theta_b: float
    theta_c: float
    omega_b_eff: float
    omega_c_eff: float
    cos_b: float
    sin_b: float
    cos_c: float
    sin_c: float

    def rotation(self) -> np.ndarray:
        """The 5x5 orthogonal matrix D with rows (a, B, B', C, C')."""
        D = np.zeros((5, 5))
        D[0, 0] = 1.0
        D[1:3, 1:3] = [[self.cos_b, self.sin_b], [-self.sin_b, self.cos_b]]
        D[3:5, 3:5] = [[self.cos_c, self.sin_c], [-self.sin_c, self.cos_c]]
        return D


def _manifold(delta, omega, label):
    eff = math.hypot(delta, omega)
    if eff == 0.0:
        raise DegenerateManifoldError(f"{label}-manifold has zero coupling and zero detuning")
    cos = math.sqrt(max(0.0, 0.5 * (1.0 + delta / eff)))
    sin = math.sqrt(max(0.0, 0.5 * (1.0 - delta / eff)))
    return math.atan2(sin, cos), eff, cos, sin


def mixing_angles(delta_b, omega_b, delta_c, omega_c) -> MixingAngles:
    """Principal-branch dressing angles.

    cos(theta) = sqrt((1 + Delta/Omega_eff)/2), sin(theta) = sqrt((1 - Delta/Omega_eff)/2),
    Omega_eff = sqrt(Delta^2 + Omega^2).

    Raises
    ------
    DegenerateManifoldError
        If either manifold has Delta = Omega = 0.
    """
    tb, eb, cb, sb = _manifold(delta_b, omega_b, "b")
    tc, ec, cc, sc = _manifold(delta_c, omega_c, "c")
    return MixingAngles(tb, tc, eb, ec, cb, sb, cc, sc)


def angles_for(params: SystemParams) -> MixingAngles:
    return mixing_angles(params.delta_b, params.omega_b, params.delta_c, params.omega_c)


def to_dressed(rho: DensityMatrix, angles: MixingAngles) -> DensityMatrix:
    """Return D rho D^T in the basis (a, B, B', C, C')."""
    D = angles.rotation()
    return DensityMatrix(D @ rho.matrix @ D.T)


def from_dressed(rho: DensityMatrix, angles: MixingAngles) -> DensityMatrix:
    """Inverse of :func:`to_dressed`."""
    D = angles.rotation()
    return DensityMatrix(D.T @ rho.matrix @ D)


@dataclass(frozen=True)
class DressedDecay:
    """Decay of the C-B and C'-B coherences in the dressed basis.

    ``rate_C`` and ``rate_Cp`` are the diagonal rates; ``cross`` couples the
    two coherences.
    """

    rate_C: float
    rate_Cp: float
    cross: float

    def matrix(self) -> np.ndarray:
        return np.array([[self.rate_C, self.cross], [self.cross, self.rate_Cp]])


def dressed_decay(gamma_C, gamma_Cp, theta_c) -> DressedDecay:
    """Rotate the diagonal decay diag(gamma_C, gamma_Cp) into the C/C' basis."""
    c, s = math.cos(theta_c), math.sin(theta_c)
    return DressedDecay(gamma_C * c * c + gamma_Cp * s * s,
                        gamma_C * s * s + gamma_Cp * c * c,
                        (gamma_Cp - gamma_C) * c * s)


def decay_assumption_report(params: SystemParams, rel_tol=1e-6) -> list:
    """Inequalities required by the dressed decay mapping that fail for ``params``.

    Each failure is also emitted as a :class:`RegimeWarning`.
    """
    checks = [
        ("gamma_ab = gamma_ab'", params.relaxation("a", "b"), params.relaxation("a", "bp")),
        ("gamma_cb = gamma_cb'", params.relaxation("c", "b"), params.relaxation("c", "bp")),
        ("gamma_c'b = gamma_c'b'", params.relaxation("cp", "b"), params.relaxation("cp", "bp")),
    ]
    failed = []
    for text, x, y in checks:
        if abs(x - y) > rel_tol * max(abs(x), abs(y), 1e-300):
            failed.append(text)
            warnings.warn(RegimeWarning(f"dressed decay mapping assumes {text} ({x:g} vs {y:g})", text),
                          stacklevel=2)
    return failed


@dataclass(frozen=True)
class GainStateDecomposition:
    """Eigenstates of the control-plus-RF Hamiltonian on (a, c, c').

    ``state_plus``, ``state_minus`` and ``state_zero`` hold amplitudes on
    (a, c, c'); energies are measured from the undressed |a>.
    """

    theta: float
    E_plus: float
    E_minus: float
    E_0: float
    state_plus: np.ndarray
    state_minus: np.ndarray
    state_zero: np.ndarray

    @property
    def cp_weight_of_zero(self) -> float:
        """Population of |c'> in the gain state |a0>, sin^2(theta)."""
        return float(self.state_zero[2] ** 2)


def coupling_hamiltonian(omega_mu, omega_c) -> np.ndarray:
    """Resonant (a, c, c') block with the package's -Omega/2 coupling sign."""
    return -0.5 * np.array([[0.0, omega_mu, 0.0], [omega_mu, 0.0, omega_c], [0.0, omega_c, 0.0]])


def gain_state(omega_mu, omega_c) -> GainStateDecomposition:
    """Dressed states of |a>, |c>, |c'> with tan(theta) = Omega_mu/Omega_c.

    The gain state |a0> = cos(theta)|a> - sin(theta)|c'> has no |c>
    component and zero energy.  The bright pair is
    (sin(theta)|a> -+ |c> + cos(theta)|c'>)/sqrt(2) with energies
    +-sqrt(Omega_mu^2 + Omega_c^2)/2; the relative sign of |c> is the one
    that makes each vector an eigenvector of the negative-coupling
    Hamiltonian with the quoted energy.
    """
    if omega_mu == 0 and omega_c == 0:
        raise DegenerateManifoldError("gain-state decomposition needs Omega_mu or Omega_c nonzero")
    theta = math.atan2(omega_mu, omega_c)
    s, c = math.sin(theta), math.cos(theta)
    half = 0.5 * math.hypot(omega_mu, omega_c)
    root = 1.0 / math.sqrt(2.0)
    plus = np.array([s, -1.0, c]) * root
    minus = np.array([s, 1.0, c]) * root
    zero = np.array([c, 0.0, -s])
    return GainStateDecomposition(theta, half, -half, 0.0, plus, minus, zero)
