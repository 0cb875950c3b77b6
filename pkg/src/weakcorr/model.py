"""States, observables, two-stage evolution and full scenarios.

Everything here is immutable: arrays are copied on construction and marked
read-only.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Literal

import numpy as np

from . import kernel
from .config import DEFAULT, Tolerances
from .errors import DimensionMismatch, UnknownLabel
from .kernel import EigenDecomposition, dagger, frob, frozen

Mode = Literal["real", "complex"]
Stage = Literal["t1", "t2"]
MODES = ("real", "complex")


@dataclass(frozen=True, eq=False)
class Ket:
    """Normalized pure state.

    Use :meth:`from_array` for inputs that may carry small normalization
    errors (e.g. parsed from text); the plain constructor insists on a
    state already normalized to ``tol.ket_norm``.
    """

    vector: np.ndarray

    def __post_init__(self) -> None:
        v = kernel.as_vector(self.vector, "psi")
        norm = np.linalg.norm(v)
        if abs(norm - 1.0) > DEFAULT.ket_norm:
            raise ValueError(f"psi is not normalized: norm = {norm!r}")
        object.__setattr__(self, "vector", frozen(v))

    @classmethod
    def from_array(cls, v, tol: Tolerances = DEFAULT) -> "Ket":
        """Accept ``v`` if its norm is within ``tol.ket_norm_accept`` of 1.

        Vectors already normalized to ``tol.ket_norm`` are kept bit-for-bit
        so that serialized states round-trip exactly; others are rescaled.
        """
        v = kernel.as_vector(v, "psi")
        norm = np.linalg.norm(v)
        if abs(norm - 1.0) > tol.ket_norm_accept:
            raise ValueError(f"psi norm {norm!r} is not within {tol.ket_norm_accept:g} of 1")
        if abs(norm - 1.0) > tol.ket_norm:
            v = v / norm
        return cls(v)

    @property
    def dim(self) -> int:
        return self.vector.shape[0]


@dataclass(frozen=True, eq=False)
class ProjectorSet:
    """Spectral projectors, one per (grouped) eigenvalue, descending labels."""

    labels: tuple[float, ...]
    projectors: tuple[np.ndarray, ...]
    match_tol: float = 0.0

    def index(self, label: float) -> int:
        """Position of the label closest to ``label``.

        Raises :class:`UnknownLabel` unless that label lies within
        ``match_tol`` (the grouping resolution) of the request.
        """
        diffs = [abs(x - label) for x in self.labels]
        k = int(np.argmin(diffs))
        if diffs[k] > self.match_tol:
            raise UnknownLabel(f"no eigenvalue label matches {label!r}; labels are {list(self.labels)}")
        return k

    def projector(self, label: float) -> np.ndarray:
        return self.projectors[self.index(label)]

    def __len__(self) -> int:
        return len(self.labels)


def _group_projectors(eig: EigenDecomposition, group_tol: float) -> ProjectorSet:
    w = eig.eigenvalues
    spread = float(w[0] - w[-1])
    scale = group_tol * max(1.0, spread)
    groups: list[list[int]] = [[0]]
    for k in range(1, len(w)):
        if w[groups[-1][-1]] - w[k] <= scale:
            groups[-1].append(k)
        else:
            groups.append([k])
    labels = []
    projectors = []
    for g in groups:
        vg = eig.eigenvectors[:, g]
        labels.append(float(np.mean(w[g])))
        projectors.append(frozen(vg @ dagger(vg)))
    return ProjectorSet(tuple(labels), tuple(projectors), match_tol=scale)


@dataclass(frozen=True, eq=False)
class Observable:
    """Hermitian matrix with its cached eigendecomposition and projectors."""

    matrix: np.ndarray
    decomposition: EigenDecomposition
    projectors: ProjectorSet

    @classmethod
    def from_matrix(cls, m, tol: Tolerances = DEFAULT) -> "Observable":
        a = kernel.as_matrix(m, "observable")
        eig = kernel.hermitian_eig(a, tol)
        return cls(frozen(a), eig, _group_projectors(eig, tol.group_tol))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def labels(self) -> tuple[float, ...]:
        return self.projectors.labels

    @property
    def spectral_range(self) -> tuple[float, float]:
        w = self.decomposition.eigenvalues
        return float(w[-1]), float(w[0])


def spectral_projectors(obs: Observable, group_tol: float = DEFAULT.group_tol) -> ProjectorSet:
    """Group eigenvalues closer than ``group_tol · max(1, spread)`` and sum
    their rank-1 projectors.  Labels are group means, in descending order."""
    return _group_projectors(obs.decomposition, group_tol)


@dataclass(frozen=True, eq=False)
class TwoStageEvolution:
    """Unitaries for 0 → t1 (``u1``) and t1 → t2 (``u2``)."""

    u1: np.ndarray
    u2: np.ndarray

    def __post_init__(self) -> None:
        u1 = kernel.as_matrix(self.u1, "u1")
        u2 = kernel.as_matrix(self.u2, "u2")
        if u1.shape != u2.shape:
            raise DimensionMismatch(f"u1 shape {u1.shape} != u2 shape {u2.shape}")
        for name, u in (("u1", u1), ("u2", u2)):
            defect = kernel.unitarity_defect(u)
            if defect > DEFAULT.unitary:
                raise ValueError(f"{name} is not unitary: ‖U†U − I‖_F = {defect:.3e}")
        object.__setattr__(self, "u1", frozen(u1))
        object.__setattr__(self, "u2", frozen(u2))

    @classmethod
    def identity(cls, dim: int) -> "TwoStageEvolution":
        return cls(np.eye(dim), np.eye(dim))

    @classmethod
    def from_hamiltonians(cls, h1, t1: float, h2, t2: float, tol: Tolerances = DEFAULT) -> "TwoStageEvolution":
        return cls(kernel.unitary_from_hamiltonian(h1, t1, tol), kernel.unitary_from_hamiltonian(h2, t2, tol))

    @property
    def dim(self) -> int:
        return self.u1.shape[0]


@dataclass(frozen=True, eq=False)
class Scenario:
    psi: Ket
    obs_a: Observable
    obs_b: Observable
    evolution: TwoStageEvolution
    mode: Mode = "real"
    tol: Tolerances = field(default=DEFAULT, repr=False)

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be 'real' or 'complex', got {self.mode!r}")
        dims = {
            "psi": self.psi.dim,
            "obs_a": self.obs_a.dim,
            "obs_b": self.obs_b.dim,
            "evolution": self.evolution.dim,
        }
        if len(set(dims.values())) != 1:
            raise DimensionMismatch(f"scenario dimensions disagree: {dims}")

    @classmethod
    def build(cls, psi, a, b, u1=None, u2=None, mode: Mode = "real", tol: Tolerances = DEFAULT) -> "Scenario":
        """Convenience constructor from raw arrays; missing unitaries are identities."""
        ket = Ket.from_array(psi, tol)
        d = ket.dim
        evo = TwoStageEvolution(np.eye(d) if u1 is None else u1, np.eye(d) if u2 is None else u2)
        return cls(ket, Observable.from_matrix(a, tol), Observable.from_matrix(b, tol), evo, mode, tol)

    @property
    def dim(self) -> int:
        return self.psi.dim

    def with_mode(self, mode: Mode) -> "Scenario":
        return replace(self, mode=mode)

    def same_data(self, other: "Scenario") -> bool:
        """Exact equality of every stored array and the mode."""
        pairs = [
            (self.psi.vector, other.psi.vector),
            (self.obs_a.matrix, other.obs_a.matrix),
            (self.obs_b.matrix, other.obs_b.matrix),
            (self.evolution.u1, other.evolution.u1),
            (self.evolution.u2, other.evolution.u2),
        ]
        return self.mode == other.mode and all(
            x.shape == y.shape and np.array_equal(x, y) for x, y in pairs
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Scenario):
            return NotImplemented
        return self.same_data(other)

    __hash__ = None  # type: ignore[assignment]


def heisenberg_operator(op, evo: TwoStageEvolution, stage: Stage) -> np.ndarray:
    """Heisenberg-picture operator: ``U1† M U1`` at t1, ``U1† U2† M U2 U1`` at t2."""
    m = kernel.as_matrix(op, "op")
    if m.shape != evo.u1.shape:
        raise DimensionMismatch(f"operator shape {m.shape} does not match evolution dim {evo.dim}")
    if stage == "t1":
        u = evo.u1
    elif stage == "t2":
        u = evo.u2 @ evo.u1
    else:
        raise ValueError(f"stage must be 't1' or 't2', got {stage!r}")
    return dagger(u) @ m @ u


def postselection_probability(s: Scenario, b_label: float) -> float:
    """``‖P_b U2 U1 ψ‖²``, clamped to [0, 1]."""
    pb = s.obs_b.projectors.projector(b_label)
    ev = s.evolution
    phi = pb @ (ev.u2 @ (ev.u1 @ s.psi.vector))
    return min(1.0, max(0.0, float(np.vdot(phi, phi).real)))


def random_scenario(seed: int, dim: int, mode: Mode = "real", tol: Tolerances = DEFAULT) -> Scenario:
    """Random scenario drawn from one SplitMix64 stream in the order
    ket, A, B, U1, U2."""
    rng = kernel.SplitMix64(seed)
    psi = kernel.random_ket(rng, dim)
    a = kernel.random_hermitian(rng, dim)
    b = kernel.random_hermitian(rng, dim)
    u1 = kernel.random_unitary(rng, dim)
    u2 = kernel.random_unitary(rng, dim)
    return Scenario(
        Ket.from_array(psi, tol),
        Observable.from_matrix(a, tol),
        Observable.from_matrix(b, tol),
        TwoStageEvolution(u1, u2),
        mode,
        tol,
    )


def commuting_scenario(seed: int, dim: int, mode: Mode = "real", tol: Tolerances = DEFAULT) -> Scenario:
    """Random scenario in which ``A(t1)`` and ``B(t2)`` commute.

    ``B`` is chosen so that ``B(t2) = f(A(t1))`` for a random real function
    ``f`` on A's spectrum, i.e. ``B = U2 V f(Λ) V† U2†`` with ``A = V Λ V†``.
    """
    rng = kernel.SplitMix64(seed)
    psi = kernel.random_ket(rng, dim)
    a = kernel.random_hermitian(rng, dim)
    u1 = kernel.random_unitary(rng, dim)
    u2 = kernel.random_unitary(rng, dim)
    f_values = np.array([rng.normal() for _ in range(dim)])
    obs_a = Observable.from_matrix(a, tol)
    v = obs_a.decomposition.eigenvectors
    f_a = (v * f_values) @ dagger(v)
    b = u2 @ f_a @ dagger(u2)
    b = 0.5 * (b + dagger(b))
    return Scenario(
        Ket.from_array(psi, tol),
        obs_a,
        Observable.from_matrix(b, tol),
        TwoStageEvolution(u1, u2),
        mode,
        tol,
    )


def projector_defects(ps: ProjectorSet) -> dict[str, float]:
    """Largest idempotency, Hermiticity, orthogonality and completeness defects."""
    d = ps.projectors[0].shape[0]
    idem = max(frob(p @ p - p) for p in ps.projectors)
    herm = max(frob(p - dagger(p)) for p in ps.projectors)
    orth = max(
        (frob(p @ q) for i, p in enumerate(ps.projectors) for j, q in enumerate(ps.projectors) if i != j),
        default=0.0,
    )
    comp = frob(sum(ps.projectors) - np.eye(d))
    return {"idempotent": idem, "hermitian": herm, "orthogonal": orth, "complete": comp}
