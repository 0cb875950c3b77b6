"""Weak values, the two-time quasi-probability and the identities linking them.

Two independent routes lead to the same number:

* :func:`weak_value` evaluates the post-selected amplitude ratio directly in
  the Schrödinger picture;
* :func:`conditional_average` builds the quasi-probability table from
  Heisenberg-picture projectors, conditions it on ``b`` and averages the
  eigenvalues of ``A``.

The two routes share nothing beyond :mod:`weakcorr.kernel` and the scenario
data, so agreement between them is a genuine check.

In ``"real"`` mode the real part is taken exactly where the textbook
definitions take it (the amplitude ratio, the quasi-probability entries,
the correlator); ``"complex"`` mode keeps full complex values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import PostselectionTooRare, UnknownLabel
from .kernel import frob, frozen
from .model import Mode, Scenario, heisenberg_operator


@dataclass(frozen=True)
class WeakValueResult:
    value: complex
    postselection_prob: float
    mode: Mode


@dataclass(frozen=True, eq=False)
class QuasiProbTable:
    """Joint table indexed ``entries[b_index, a_index]``.

    Entries are complex; in ``"real"`` mode their imaginary parts are zero.
    Real parts may be negative.
    """

    a_labels: tuple[float, ...]
    b_labels: tuple[float, ...]
    entries: np.ndarray
    mode: Mode = "real"

    def row(self, b_label: float) -> np.ndarray:
        return self.entries[_match(self.b_labels, b_label, "b")]

    def entry(self, b_label: float, a_label: float) -> complex:
        """Entry for the labels closest to ``(b_label, a_label)``."""
        return complex(self.entries[_match(self.b_labels, b_label, "b"), _match(self.a_labels, a_label, "a")])

    def b_marginal(self) -> np.ndarray:
        return self.entries.sum(axis=1)

    def a_marginal(self) -> np.ndarray:
        return self.entries.sum(axis=0)

    def total(self) -> complex:
        return complex(self.entries.sum())

    def as_dict(self) -> dict[tuple[float, float], complex]:
        return {
            (b, a): complex(self.entries[i, j])
            for i, b in enumerate(self.b_labels)
            for j, a in enumerate(self.a_labels)
        }


def _match(labels: tuple[float, ...], label: float, name: str) -> int:
    diffs = np.abs(np.asarray(labels) - label)
    k = int(np.argmin(diffs))
    if diffs[k] > DEFAULT.group_tol * max(1.0, abs(label)):
        raise UnknownLabel(f"no {name} label matches {label!r}; labels are {list(labels)}")
    return k


def _apply_mode(z, mode: Mode):
    return np.real(z) + 0j if mode == "real" else z


def weak_value(s: Scenario, b_label: float, operator=None) -> WeakValueResult:
    """Weak value of ``A`` at t1 post-selected on outcome ``b`` at t2.

    Computes ``⟨ψ|U1†U2† P_b U2 A U1|ψ⟩ / ⟨ψ|U1†U2† P_b U2 U1|ψ⟩``, which for a
    rank-one ``P_b = |b⟩⟨b|`` is the familiar ``⟨b|U2 A U1|ψ⟩ / ⟨b|U2 U1|ψ⟩``.
    The real part is returned in ``"real"`` mode.

    Parameters
    ----------
    s : Scenario
    b_label : float
        Eigenvalue of ``B`` to post-select on.
    operator : array_like, optional
        Operator to use in place of ``s.obs_a.matrix`` (e.g. a spectral
        projector of ``A``).

    Raises
    ------
    PostselectionTooRare
        If ``‖P_b U2 U1 ψ‖²`` is at or below ``s.tol.postselection_cutoff``.
    UnknownLabel
        If ``b_label`` is not an eigenvalue of ``B``.
    """
    pb = s.obs_b.projectors.projector(b_label)
    a = s.obs_a.matrix if operator is None else np.asarray(operator, dtype=np.complex128)
    u1, u2 = s.evolution.u1, s.evolution.u2
    psi1 = u1 @ s.psi.vector
    post = pb @ (u2 @ psi1)
    denominator = np.vdot(post, post).real
    if denominator <= s.tol.postselection_cutoff:
        raise PostselectionTooRare(b_label, float(denominator), s.tol.postselection_cutoff)
    numerator = np.vdot(post, u2 @ (a @ psi1))
    value = complex(_apply_mode(numerator / denominator, s.mode))
    return WeakValueResult(value, min(1.0, float(denominator)), s.mode)


def kd_quasiprobability(s: Scenario) -> QuasiProbTable:
    """``Pr(b, a) = ⟨ψ|P_b(t2) P_a(t1)|ψ⟩`` with Heisenberg-picture projectors
    (real part in ``"real"`` mode)."""
    psi = s.psi.vector
    evo = s.evolution
    a_kets = [heisenberg_operator(p, evo, "t1") @ psi for p in s.obs_a.projectors.projectors]
    b_kets = [heisenberg_operator(p, evo, "t2") @ psi for p in s.obs_b.projectors.projectors]
    # P_b(t2) is Hermitian, so ⟨ψ|P_b(t2) P_a(t1)|ψ⟩ = (P_b(t2)ψ)† (P_a(t1)ψ)
    entries = np.array([[np.vdot(bk, ak) for ak in a_kets] for bk in b_kets], dtype=np.complex128)
    return QuasiProbTable(
        s.obs_a.labels,
        s.obs_b.labels,
        frozen(_apply_mode(entries, s.mode)),
        s.mode,
    )


def conditional_quasiprobability(
    table: QuasiProbTable, b_label: float, tol: Tolerances = DEFAULT
) -> list[tuple[float, complex]]:
    """``Pr(a | b) = Pr(b, a) / Pr(b)`` for every ``a``, with ``Pr(b)`` the row sum."""
    row = table.row(b_label)
    pr_b = float(row.sum().real)
    if pr_b <= tol.postselection_cutoff:
        raise PostselectionTooRare(b_label, pr_b, tol.postselection_cutoff)
    return [(a, complex(x / pr_b)) for a, x in zip(table.a_labels, row)]


def conditional_average(s: Scenario, b_label: float) -> complex:
    """``Σ_a a · Pr(a | b)`` evaluated through the quasi-probability table."""
    table = kd_quasiprobability(s)
    conditional = conditional_quasiprobability(table, b_label, s.tol)
    return complex(sum(a * p for a, p in conditional))


def correlation_function(s: Scenario) -> complex:
    """Two-time correlator ``⟨ψ|B(t2) A(t1)|ψ⟩`` (real part in ``"real"`` mode)."""
    psi = s.psi.vector
    a_t1 = heisenberg_operator(s.obs_a.matrix, s.evolution, "t1")
    b_t2 = heisenberg_operator(s.obs_b.matrix, s.evolution, "t2")
    return complex(_apply_mode(np.vdot(b_t2 @ psi, a_t1 @ psi), s.mode))


def weighted_sum(table: QuasiProbTable) -> complex:
    """``Σ_{a,b} a·b·Pr(b, a)``."""
    a = np.asarray(table.a_labels)
    b = np.asarray(table.b_labels)
    return complex(b @ table.entries @ a)


def sequential_measurement_distribution(s: Scenario) -> QuasiProbTable:
    """Joint outcome probabilities ``‖P_b U2 P_a U1 ψ‖²`` for projective
    measurements of ``A`` at t1 followed by ``B`` at t2."""
    u1, u2 = s.evolution.u1, s.evolution.u2
    psi1 = u1 @ s.psi.vector
    entries = np.empty((len(s.obs_b.labels), len(s.obs_a.labels)), dtype=np.complex128)
    for j, pa in enumerate(s.obs_a.projectors.projectors):
        collapsed = u2 @ (pa @ psi1)
        for i, pb in enumerate(s.obs_b.projectors.projectors):
            out = pb @ collapsed
            entries[i, j] = np.vdot(out, out).real
    return QuasiProbTable(s.obs_a.labels, s.obs_b.labels, frozen(entries), s.mode)


@dataclass(frozen=True)
class ReductionCheck:
    """Outcome of :func:`commuting_reduction_check`.

    ``max_deviation`` is ``None`` when the operators do not commute, in which
    case no comparison is made.
    """

    commuting: bool
    commutator_norm: float
    max_deviation: float | None
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.commuting and self.max_deviation is not None and self.max_deviation <= self.tolerance


def commuting_reduction_check(s: Scenario) -> ReductionCheck:
    """If ``[A(t1), B(t2)] = 0`` the quasi-probability must equal the
    sequential-measurement distribution; compare them elementwise."""
    a_t1 = heisenberg_operator(s.obs_a.matrix, s.evolution, "t1")
    b_t2 = heisenberg_operator(s.obs_b.matrix, s.evolution, "t2")
    comm = frob(a_t1 @ b_t2 - b_t2 @ a_t1)
    if comm > s.tol.commuting:
        return ReductionCheck(False, comm, None, s.tol.commuting)
    kd = kd_quasiprobability(s).entries
    seq = sequential_measurement_distribution(s).entries
    return ReductionCheck(True, comm, float(np.max(np.abs(kd - seq))), s.tol.commuting)


def heisenberg_expectation(s: Scenario, op, stage) -> float:
    """``⟨ψ|M(stage)|ψ⟩`` for Hermitian ``M``; used for marginal checks."""
    psi = s.psi.vector
    return float(np.vdot(psi, heisenberg_operator(op, s.evolution, stage) @ psi).real)


__all__ = [
    "QuasiProbTable",
    "ReductionCheck",
    "WeakValueResult",
    "commuting_reduction_check",
    "conditional_average",
    "conditional_quasiprobability",
    "correlation_function",
    "heisenberg_expectation",
    "kd_quasiprobability",
    "sequential_measurement_distribution",
    "weak_value",
    "weighted_sum",
]
