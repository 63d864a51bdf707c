"""Truncated single-mode Fock-space linear algebra.

States live on the basis |0>..|D-1> of one optical mode.  The module
provides the pure-state and density-matrix containers, the phase shift
exp(i*phi*n), the photon-loss channel in Kraus form, the Fock-index
reversal unitary, and Hermitian expectation values.  Everything is a
dense complex numpy array; all containers are immutable after
construction and every operation is a pure function of its inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-12
HERM_TOL = 1e-12
TRACE_TOL = 1e-10
EIG_TOL = -1e-9
KRAUS_TOL = 1e-10

# Largest n for which binomials are taken from exact integer arithmetic;
# above this they come from log-gamma to avoid overflow.
_EXACT_BINOM_MAX = 60


def binomial(n: int, k: int) -> float:
    """C(n, k) as a float; exact integers for n <= 60, log-gamma above."""
    if k < 0 or k > n:
        return 0.0
    if n <= _EXACT_BINOM_MAX:
        return float(math.comb(n, k))
    return math.exp(math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1))


def binomial_table(nmax: int) -> np.ndarray:
    """Dense table t[a, b] = C(a, b) for 0 <= a, b <= nmax."""
    t = np.zeros((nmax + 1, nmax + 1))
    top = min(nmax, _EXACT_BINOM_MAX)
    row = [1]
    for a in range(top + 1):
        t[a, : a + 1] = [float(x) for x in row]
        row = [1] + [row[i] + row[i + 1] for i in range(len(row) - 1)] + [1]
    if nmax > _EXACT_BINOM_MAX:
        lf = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, nmax + 1)))))
        a = np.arange(nmax + 1)[:, None]
        b = np.arange(nmax + 1)[None, :]
        with np.errstate(invalid="ignore"):
            big = np.exp(lf[a] - lf[np.minimum(b, a)] - lf[np.maximum(a - b, 0)])
        big[b > a] = 0.0
        t[top + 1 :] = big[top + 1 :]
    return t


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=complex)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class FockVector:
    """Normalized pure state over the Fock basis |0>..|dim-1>."""

    amps: np.ndarray

    def __init__(self, amps, normalize: bool = False):
        amps = np.asarray(amps, dtype=complex).reshape(-1)
        if amps.size < 1:
            raise ValueError("state needs at least one amplitude")
        if not np.all(np.isfinite(amps.view(float))):
            raise ValueError("non-finite amplitude")
        nrm2 = float(np.sum(np.abs(amps) ** 2))
        if normalize:
            if nrm2 == 0.0:
                raise ValueError("cannot normalize the zero vector")
            amps = amps / math.sqrt(nrm2)
        elif abs(nrm2 - 1.0) > NORM_TOL:
            raise ValueError(f"state not normalized: |amps|^2 = {nrm2!r}")
        object.__setattr__(self, "amps", _frozen(amps))

    @property
    def dim(self) -> int:
        return self.amps.size

    def mean_photon(self) -> float:
        return float(np.arange(self.dim) @ (np.abs(self.amps) ** 2))

    def to_density(self, check: bool = False) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amps, self.amps.conj()), check=check)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix on the Fock basis.

    The eigenvalue (positivity) check is the expensive part; pass
    ``check=False`` in hot loops that construct states known to be valid
    and call :meth:`validate` explicitly where it matters.
    """

    mat: np.ndarray

    def __init__(self, mat, check: bool = True):
        mat = np.asarray(mat, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] < 1:
            raise ValueError("density matrix must be square and non-empty")
        object.__setattr__(self, "mat", _frozen(mat))
        if check:
            self.validate()

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.mat).real)

    def validate(self) -> None:
        m = self.mat
        herm = np.max(np.abs(m - m.conj().T))
        if herm > HERM_TOL:
            raise ValueError(f"not Hermitian: max |m - m^dag| = {herm:.3e}")
        tr = np.trace(m)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"trace deviates from 1: {tr!r}")
        lo = float(np.linalg.eigvalsh(m)[0])
        if lo < EIG_TOL:
            raise ValueError(f"negative eigenvalue {lo:.3e}")


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Completely positive trace-preserving map as a list of Kraus matrices."""

    kraus: tuple
    dim: int

    def __init__(self, kraus, check: bool = True):
        mats = tuple(_frozen(k) for k in kraus)
        if not mats:
            raise ValueError("channel needs at least one Kraus matrix")
        d = mats[0].shape[0]
        for k in mats:
            if k.shape != (d, d):
                raise ValueError("Kraus matrices must share a square shape")
        object.__setattr__(self, "kraus", mats)
        object.__setattr__(self, "dim", d)
        if check:
            comp = sum(k.conj().T @ k for k in mats)
            dev = np.max(np.abs(comp - np.eye(d)))
            if dev > KRAUS_TOL:
                raise ValueError(f"Kraus completeness violated by {dev:.3e}")


@dataclass(frozen=True)
class PhaseShift:
    """Phase accumulation exp(i*phi*n) on the photon-number basis."""

    phi: float

    def __post_init__(self):
        if not math.isfinite(self.phi):
            raise ValueError("phase must be finite")

    def apply(self, state):
        return apply_phase(state, self.phi)


@dataclass(frozen=True, eq=False)
class PermutationUnitary:
    """Fock-index reversal |n> -> |m-n> on indices 0..m, identity above."""

    m: int
    dim: int

    def __init__(self, m: int, dim: int):
        if m < 0:
            raise ValueError("m must be non-negative")
        if dim < m + 1:
            raise ValueError(f"dimension {dim} too small for m={m}")
        object.__setattr__(self, "m", int(m))
        object.__setattr__(self, "dim", int(dim))

    @property
    def perm(self) -> np.ndarray:
        idx = np.arange(self.dim)
        out = idx.copy()
        out[: self.m + 1] = self.m - idx[: self.m + 1]
        return out

    def matrix(self) -> np.ndarray:
        u = np.zeros((self.dim, self.dim))
        u[self.perm, np.arange(self.dim)] = 1.0
        return u

    def apply(self, state):
        p = self.perm
        if isinstance(state, FockVector):
            if state.dim != self.dim:
                raise ValueError("dimension mismatch")
            return FockVector(state.amps[p])
        if isinstance(state, DensityMatrix):
            if state.dim != self.dim:
                raise ValueError("dimension mismatch")
            return DensityMatrix(state.mat[np.ix_(p, p)], check=False)
        raise TypeError(f"cannot permute {type(state).__name__}")


def permutation_unitary(m: int, dim: int) -> PermutationUnitary:
    """Index-reversal unitary on 0..m inside a dim-dimensional space."""
    return PermutationUnitary(m, dim)


def apply_phase(state, phi: float):
    """Multiply the |n> amplitude by exp(i*n*phi).

    For a density matrix the (n, m) element picks up exp(i*(n-m)*phi).
    Returns the same container type; norm and trace are unchanged.
    """
    if not math.isfinite(phi):
        raise ValueError("phase must be finite")
    if isinstance(state, FockVector):
        ph = np.exp(1j * phi * np.arange(state.dim))
        return FockVector(state.amps * ph)
    if isinstance(state, DensityMatrix):
        ph = np.exp(1j * phi * np.arange(state.dim))
        return DensityMatrix(state.mat * np.outer(ph, ph.conj()), check=False)
    raise TypeError(f"cannot phase-shift {type(state).__name__}")


def loss_channel(eta: float, dim: int) -> KrausChannel:
    """Photon-loss channel with transmissivity eta on a dim-level mode.

    The i-th Kraus matrix removes i photons:
    K_i |n> = sqrt(C(n, i)) * (1-eta)^(i/2) * eta^((n-i)/2) |n-i>.
    eta = 1 yields the identity channel (the single surviving matrix).
    """
    if not (0.0 < eta <= 1.0):
        raise ValueError(f"transmissivity must be in (0, 1], got {eta!r}")
    if dim < 1:
        raise ValueError("dimension must be positive")
    tbl = binomial_table(dim - 1)
    n = np.arange(dim)
    mats = []
    for i in range(dim):
        k = np.zeros((dim, dim), dtype=complex)
        cols = n[i:]
        k[cols - i, cols] = np.sqrt(tbl[cols, i]) * (1.0 - eta) ** (i / 2.0) * eta ** (
            (cols - i) / 2.0
        )
        if i == 0 or np.any(k):
            mats.append(k)
    return KrausChannel(mats)


def apply_channel(rho: DensityMatrix, ch: KrausChannel, check: bool = False) -> DensityMatrix:
    """Kraus-sum action sum_i K_i rho K_i^dag."""
    if rho.dim != ch.dim:
        raise ValueError(f"dimension mismatch: state {rho.dim}, channel {ch.dim}")
    out = np.zeros_like(rho.mat)
    for k in ch.kraus:
        out += k @ rho.mat @ k.conj().T
    return DensityMatrix(out, check=check)


def expectation(rho: DensityMatrix, obs: np.ndarray) -> float:
    """tr(rho * obs) for a Hermitian observable, returned as a real number."""
    obs = np.asarray(obs, dtype=complex)
    if obs.shape != (rho.dim, rho.dim):
        raise ValueError("observable dimension mismatch")
    dev = np.max(np.abs(obs - obs.conj().T))
    if dev > 1e-10:
        raise ValueError(f"observable not Hermitian (deviation {dev:.3e})")
    val = complex(np.einsum("ij,ji->", rho.mat, obs))
    if abs(val.imag) >= 1e-10:
        raise ValueError(f"expectation has imaginary residue {val.imag:.3e}")
    return val.real
