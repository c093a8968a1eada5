"""Full 25-dimensional master equation and its exact steady state.

The density matrix is vectorized row-major, ``vec[5*j + k] = rho[j, k]``,
over the basis (a, b, b', c, c').  The generator is affine,
``d vec/dt = A @ vec + s``, with s nonzero only for open pumping.
"""
from __future__ import annotations

import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import NonUniqueKernelError, ProbeNonlinearityWarning, SingularSystemError
from .params import INDEX, LEVELS, ClosedPump, SystemParams

N = 5
POPULATION_ROWS = np.array([N * j + j for j in range(N)])
# reciprocal condition number below which a solve is treated as singular
RCOND_MIN = 1e-13
LINEARITY_TOL = 1e-4


def vindex(j: str, k: str) -> int:
    """Position of rho[j, k] in the row-major vector."""
    return N * INDEX[j] + INDEX[k]


class DensityMatrix:
    """5x5 complex density matrix over (a, b, b', c, c').

    Index with level labels, e.g. ``rho["a", "b"]``, or with integers.
    """

    def __init__(self, matrix):
        self.matrix = np.asarray(matrix, dtype=complex).reshape(N, N)

    @classmethod
    def from_vector(cls, vec):
        return cls(np.asarray(vec).reshape(N, N))

    @property
    def vector(self):
        return self.matrix.reshape(-1)

    def __getitem__(self, key):
        j, k = key
        if isinstance(j, str):
            j, k = INDEX[j], INDEX[k]
        return self.matrix[j, k]

    def population(self, j: str) -> float:
        return float(self.matrix[INDEX[j], INDEX[j]].real)

    def populations(self) -> dict:
        return {name: self.population(name) for name in LEVELS}

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def eigenvalues(self):
        """Eigenvalues of the Hermitian part, ascending."""
        return np.linalg.eigvalsh(0.5 * (self.matrix + self.matrix.conj().T))

    def __repr__(self):
        return f"DensityMatrix({np.array2string(self.matrix, precision=4)})"


@dataclass(frozen=True, eq=False)
class AffineGenerator:
    """``d vec/dt = A @ vec + s``; ``closed`` marks trace-preserving dynamics."""

    A: np.ndarray
    s: np.ndarray
    closed: bool

    def apply(self, rho: DensityMatrix) -> DensityMatrix:
        """Time derivative of ``rho`` as a matrix."""
        return DensityMatrix.from_vector(self.A @ rho.vector + self.s)


def hamiltonian(params: SystemParams) -> np.ndarray:
    """Rotating-frame Hamiltonian (hbar = 1) in units of gamma_ab."""
    p = params
    H = np.diag([0.0, -p.delta_p, p.delta_b - p.delta_p, -p.delta_mu, p.delta_c - p.delta_mu]).astype(complex)
    for (j, k), w in ((("a", "b"), p.omega_p), (("a", "c"), p.omega_mu),
                      (("bp", "b"), p.omega_b), (("cp", "c"), p.omega_c)):
        H[INDEX[j], INDEX[k]] -= 0.5 * w
        H[INDEX[k], INDEX[j]] -= 0.5 * w
    return H


def _commutator_superop(H):
    eye = np.eye(N)
    return -1j * (np.kron(H, eye) - np.kron(eye, H.T))


def build_generator(params: SystemParams) -> AffineGenerator:
    """Assemble the affine generator for the configured pump variant.

    Coherent part ``-i[H, rho]``; populations decay at gamma_j, coherences at
    gamma_jk.  Open pumping adds constant sources r_b and r_cp on the |b> and
    |c'> populations.  Closed pumping moves population b -> a at rate r and
    returns it by spontaneous decay with the branching ratios.
    """
    p = params
    A = _commutator_superop(hamiltonian(p))
    s = np.zeros(N * N, dtype=complex)
    closed = isinstance(p.pump, ClosedPump)
    for j in LEVELS:
        for k in LEVELS:
            i = vindex(j, k)
            if j == k:
                A[i, i] -= p.decay(j)
            else:
                A[i, i] -= p.relaxation(j, k)
    if closed:
        r = p.pump.r
        aa, bb, cc, cpcp = vindex("a", "a"), vindex("b", "b"), vindex("c", "c"), vindex("cp", "cp")
        A[aa, aa] -= r
        A[aa, bb] += r
        A[bb, aa] += p.pump.alpha_b * p.gamma_a + r
        A[bb, bb] -= r
        A[cc, aa] += p.pump.alpha_c * p.gamma_a
        A[cpcp, aa] += p.pump.alpha_cp * p.gamma_a
    else:
        s[vindex("b", "b")] = p.pump.r_b
        s[vindex("cp", "cp")] = p.pump.r_cp
    return AffineGenerator(A, s, closed)


def delta_p_derivative() -> np.ndarray:
    """dA/d(delta_p); the generator is affine in the probe detuning."""
    dH = np.diag([0.0, -1.0, -1.0, 0.0, 0.0]).astype(complex)
    return _commutator_superop(dH)


def _closed_system(A):
    """Replace the rho_aa row with the trace functional."""
    M = A.copy()
    M[..., 0, :] = 0.0
    M[..., 0, POPULATION_ROWS] = 1.0
    return M


def _rcond(M):
    # 2-norm condition number via SVD; never raises on exactly singular input
    rc = 1.0 / np.linalg.cond(M)
    return np.where(np.isfinite(rc), rc, 0.0)


def steady_state(gen: AffineGenerator) -> DensityMatrix:
    """Exact steady state by dense LU solve.

    Open: solves ``A vec = -s``.  Closed: replaces the d(rho_aa)/dt row with
    the trace constraint and solves for the unit-trace kernel vector.

    Raises
    ------
    SingularSystemError
        Open configuration with a singular A (for example, all decays zero).
    NonUniqueKernelError
        Closed configuration whose kernel is not one dimensional.
    """
    if gen.closed:
        M = _closed_system(gen.A)
        rhs = np.zeros(N * N, dtype=complex)
        rhs[0] = 1.0
        if _rcond(M) < RCOND_MIN:
            raise NonUniqueKernelError("closed generator has a degenerate kernel; no unique steady state")
    else:
        M, rhs = gen.A, -gen.s
        if _rcond(M) < RCOND_MIN:
            raise SingularSystemError("open generator is singular; add decay to obtain a steady state")
    return DensityMatrix.from_vector(np.linalg.solve(M, rhs))


def residual(gen: AffineGenerator, rho: DensityMatrix) -> float:
    """Infinity norm of ``A vec + s``."""
    return float(np.max(np.abs(gen.A @ rho.vector + gen.s)))


def residual_tolerance(gen: AffineGenerator) -> float:
    return 1e-10 * max(1.0, float(np.max(np.sum(np.abs(gen.A), axis=1))))


def _thread_count():
    try:
        return max(1, int(os.environ.get("DIGS_NUM_THREADS", "1")))
    except ValueError:
        return 1


def steady_states(params: SystemParams, delta_p) -> tuple[np.ndarray, np.ndarray]:
    """Steady states over a grid of probe detunings.

    Returns
    -------
    rho : ndarray, shape (n, 5, 5)
        Steady states; rows of failed points are NaN.
    ok : ndarray of bool, shape (n,)
        False where the system was singular or had a degenerate kernel.
    """
    delta_p = np.atleast_1d(np.asarray(delta_p, dtype=float))
    gen = build_generator(params.replace(delta_p=0.0))
    dA = delta_p_derivative()
    out = np.full((delta_p.size, N * N), np.nan, dtype=complex)
    ok = np.zeros(delta_p.size, dtype=bool)

    def work(sl):
        A = gen.A[None, :, :] + delta_p[sl, None, None] * dA[None, :, :]
        if gen.closed:
            M = _closed_system(A)
            rhs = np.zeros((A.shape[0], N * N), dtype=complex)
            rhs[:, 0] = 1.0
        else:
            M = A
            rhs = np.broadcast_to(-gen.s, (A.shape[0], N * N))
        good = _rcond(M) >= RCOND_MIN
        if np.any(good):
            out[sl[good]] = np.linalg.solve(M[good], rhs[good][..., None])[..., 0]
        ok[sl] = good

    chunk = 256
    slices = [np.arange(i, min(i + chunk, delta_p.size)) for i in range(0, delta_p.size, chunk)]
    threads = _thread_count()
    if threads > 1 and len(slices) > 1:
        with ThreadPoolExecutor(threads) as pool:
            list(pool.map(work, slices))
    else:
        for sl in slices:
            work(sl)
    return out.reshape(-1, N, N), ok


def numeric_susceptibility(params: SystemParams, delta_p=None, check_linearity=True):
    """Reduced susceptibility 2 gamma_ab rho_ab / Omega_p from the full steady state.

    Parameters
    ----------
    params : SystemParams
    delta_p : float or array_like, optional
        Probe detuning(s); defaults to ``params.delta_p``.
    check_linearity : bool
        Repeat the solve at Omega_p/2 and warn with
        :class:`ProbeNonlinearityWarning` if the relative change exceeds 1e-4.

    Returns
    -------
    complex or ndarray
        Failed grid points (singular systems) are NaN.  A scalar input
        propagates steady-state errors instead.
    """
    if params.omega_p <= 0:
        raise ValueError("numeric susceptibility needs omega_p > 0")
    scalar = delta_p is None or np.ndim(delta_p) == 0
    grid = np.atleast_1d(params.delta_p if delta_p is None else delta_p).astype(float)
    if scalar:
        rho = steady_state(build_generator(params.replace(delta_p=float(grid[0]))))
        chi = np.array([2.0 * params.gamma_ab * rho["a", "b"] / params.omega_p])
    else:
        rho, _ = steady_states(params, grid)
        chi = 2.0 * params.gamma_ab * rho[:, 0, 1] / params.omega_p
    if check_linearity:
        half = numeric_susceptibility(params.replace(omega_p=0.5 * params.omega_p),
                                      grid[0] if scalar else grid, check_linearity=False)
        half = np.atleast_1d(half)
        scale = max(float(np.nanmax(np.abs(chi))), 1e-300)
        worst = float(np.nanmax(np.abs(chi - half))) / scale if np.any(np.isfinite(chi)) else 0.0
        if worst > LINEARITY_TOL:
            warnings.warn(ProbeNonlinearityWarning(
                f"halving Omega_p changed chi by {worst:.2e} relative (> {LINEARITY_TOL:g})"), stacklevel=2)
    return complex(chi[0]) if scalar else chi
