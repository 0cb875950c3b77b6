"""Dense complex linear algebra for small Hermitian problems.

Matrices and vectors are plain ``numpy`` arrays of ``complex128``.  The
eigensolver is a cyclic complex Jacobi iteration; unitaries generated from
Hamiltonians go through that same solver.  Random instances come from a
SplitMix64 stream so they can be reproduced bit-for-bit by anyone who
implements the documented recipe (see :func:`random_instance`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import DimensionMismatch, NoConvergence, NotHermitian

_MASK64 = (1 << 64) - 1


# ---------------------------------------------------------------------------
# array helpers
# ---------------------------------------------------------------------------

def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Return ``m`` as a finite square complex128 array (copy)."""
    a = np.array(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionMismatch(f"{name} must be a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


def as_vector(v, name: str = "vector") -> np.ndarray:
    a = np.array(v, dtype=np.complex128)
    if a.ndim != 1 or a.shape[0] < 1:
        raise DimensionMismatch(f"{name} must be a non-empty 1-d array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def frob(m: np.ndarray) -> float:
    return float(np.linalg.norm(m))


def hermiticity_defect(m: np.ndarray) -> float:
    """Relative Hermiticity defect ``‖M − M†‖_F / max(1, ‖M‖_F)``."""
    return frob(m - dagger(m)) / max(1.0, frob(m))


def unitarity_defect(u: np.ndarray) -> float:
    return frob(dagger(u) @ u - np.eye(u.shape[0]))


def frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


# ---------------------------------------------------------------------------
# Hermitian eigendecomposition
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Eigenvalues sorted descending with matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ dagger(v)


def _jacobi_rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Zero ``a[p, q]`` in place by a unitary plane rotation ``J``.

    ``J`` acts on the (p, q) plane as ``[[c, s·e^{iφ}], [−s·e^{−iφ}, c]]``
    where ``e^{iφ}`` is the phase of ``a[p, q]``; ``a ← J† a J``, ``v ← v J``.
    """
    apq = a[p, q]
    mag = abs(apq)
    phase = apq / mag
    theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
    t = 1.0 / (abs(theta) + math.hypot(1.0, theta))
    if theta < 0.0:
        t = -t
    c = 1.0 / math.sqrt(1.0 + t * t)
    s = t * c
    sp = s * phase
    spc = s * phase.conjugate()

    cp, cq = a[:, p].copy(), a[:, q].copy()
    a[:, p] = c * cp - spc * cq
    a[:, q] = sp * cp + c * cq
    rp, rq = a[p, :].copy(), a[q, :].copy()
    a[p, :] = c * rp - sp * rq
    a[q, :] = spc * rp + c * rq
    a[p, q] = a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real

    vp, vq = v[:, p].copy(), v[:, q].copy()
    v[:, p] = c * vp - spc * vq
    v[:, q] = sp * vp + c * vq


def _off_norm(a: np.ndarray) -> float:
    return frob(a - np.diag(np.diag(a)))


def hermitian_eig(m, tol: Tolerances = DEFAULT) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.

    Parameters
    ----------
    m : array_like, shape (d, d)
        Hermitian up to ``tol.hermitian_rel`` (relative Frobenius defect).
    tol : Tolerances
        ``jacobi_rel`` sets the stopping rule (off-diagonal Frobenius norm
        below ``jacobi_rel · ‖M‖_F``); ``jacobi_max_sweeps`` caps the work.

    Returns
    -------
    EigenDecomposition
        Eigenvalues in descending order (ties keep their diagonal order),
        eigenvector ``k`` in column ``k``.

    Raises
    ------
    NotHermitian
        If the Hermiticity defect exceeds the tolerance.
    NoConvergence
        If the sweep budget runs out.
    """
    a = as_matrix(m)
    defect = hermiticity_defect(a)
    if defect > tol.hermitian_rel:
        raise NotHermitian(f"relative Hermiticity defect {defect:.3e} exceeds {tol.hermitian_rel:.1e}")
    a = 0.5 * (a + dagger(a))
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    threshold = tol.jacobi_rel * frob(a)

    for _ in range(tol.jacobi_max_sweeps + 1):
        if _off_norm(a) <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p, q] != 0.0:
                    _jacobi_rotate(a, v, p, q)
    else:
        raise NoConvergence(
            f"Jacobi did not converge in {tol.jacobi_max_sweeps} sweeps "
            f"(off-diagonal norm {_off_norm(a):.3e}, target {threshold:.3e})"
        )

    w = np.diag(a).real.copy()
    order = np.argsort(-w, kind="stable")
    return EigenDecomposition(frozen(w[order]), frozen(v[:, order].copy()))


def unitary_from_hamiltonian(h, t: float, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Propagator ``exp(−iHt)`` (ħ = 1) built from the eigendecomposition of ``H``."""
    if not math.isfinite(t):
        raise ValueError(f"duration must be finite, got {t!r}")
    eig = hermitian_eig(h, tol)
    v = eig.eigenvectors
    return (v * np.exp(-1j * eig.eigenvalues * t)) @ dagger(v)


# ---------------------------------------------------------------------------
# seeded random instances
# ---------------------------------------------------------------------------

class SplitMix64:
    """SplitMix64 generator (Steele, Lea & Flood 2014; Vigna's reference code).

    ``uniform`` maps the top 53 bits to ``[0, 1)``.  ``normal`` is the cosine
    branch of Box–Muller on two consecutive uniforms ``u1, u2``:
    ``sqrt(−2 ln(1 − u1)) · cos(2π u2)``.
    """

    __slots__ = ("state",)

    def __init__(self, seed: int) -> None:
        self.state = int(seed) & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def normal(self) -> float:
        u1 = self.uniform()
        u2 = self.uniform()
        return math.sqrt(-2.0 * math.log(1.0 - u1)) * math.cos(2.0 * math.pi * u2)

    def complex_normal(self, shape) -> np.ndarray:
        """Row-major array of ``re + i·im`` with re drawn before im."""
        count = int(np.prod(shape))
        flat = [complex(self.normal(), self.normal()) for _ in range(count)]
        return np.array(flat, dtype=np.complex128).reshape(shape)


def derive_seed(seed: int, *keys: int) -> int:
    """Mix integer ``keys`` into ``seed`` to get an independent 64-bit seed."""
    g = SplitMix64(seed)
    for k in keys:
        g = SplitMix64(g.next_u64() ^ (int(k) & _MASK64))
    return g.next_u64()


def gram_schmidt(m: np.ndarray) -> np.ndarray:
    """Orthonormalize the columns of ``m`` (modified Gram–Schmidt, two passes)."""
    q = np.array(m, dtype=np.complex128)
    n = q.shape[1]
    for k in range(n):
        col = q[:, k]
        for _ in range(2):  # re-orthogonalization pass
            for j in range(k):
                col = col - np.vdot(q[:, j], col) * q[:, j]
        norm = np.linalg.norm(col)
        if norm == 0.0:
            raise np.linalg.LinAlgError("columns are linearly dependent")
        q[:, k] = col / norm
    return q


def random_ket(rng: SplitMix64, dim: int) -> np.ndarray:
    v = rng.complex_normal((dim,))
    return v / np.linalg.norm(v)


def random_hermitian(rng: SplitMix64, dim: int) -> np.ndarray:
    g = rng.complex_normal((dim, dim))
    return 0.5 * (g + dagger(g))


def random_unitary(rng: SplitMix64, dim: int) -> np.ndarray:
    return gram_schmidt(rng.complex_normal((dim, dim)))


_MAKERS = {"ket": random_ket, "hermitian": random_hermitian, "unitary": random_unitary}


def random_instance(seed: int, dim: int, kind: Literal["ket", "hermitian", "unitary"]) -> np.ndarray:
    """Deterministic random ket, Hermitian matrix or unitary.

    Recipe: a fresh :class:`SplitMix64` seeded with ``seed`` draws standard
    complex Gaussians row-major (real part first).  A ket is the normalized
    Gaussian vector, a Hermitian matrix is ``(G + G†)/2`` and a unitary is the
    Gram–Schmidt orthonormalization of ``G``'s columns.
    """
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    try:
        maker = _MAKERS[kind]
    except KeyError:
        raise ValueError(f"unknown kind {kind!r}; expected one of {sorted(_MAKERS)}") from None
    return maker(SplitMix64(seed), dim)
