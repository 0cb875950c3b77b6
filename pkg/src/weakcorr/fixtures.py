"""Hand-computable qubit scenarios used by the ``demo`` command and tests."""

from __future__ import annotations

import math

import numpy as np

from .model import Mode, Scenario

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
IDENTITY2 = np.eye(2, dtype=np.complex128)

KET0 = np.array([1, 0], dtype=np.complex128)
KET_PLUS = np.array([1, 1], dtype=np.complex128) / math.sqrt(2)


def tilted(alpha: float) -> np.ndarray:
    """``cos α |0⟩ + sin α |1⟩``."""
    return np.array([math.cos(alpha), math.sin(alpha)], dtype=np.complex128)


def anomalous_qubit(mode: Mode = "real") -> Scenario:
    """σx weak value post-selected on |1⟩ from a state tilted by π/16.

    The weak value for ``b = −1`` is ``cot(π/16) ≈ 5.027``, far outside σx's
    spectrum.
    """
    return Scenario.build(tilted(math.pi / 16), SIGMA_X, SIGMA_Z, mode=mode)


def phased_anomalous_qubit(mode: Mode = "real", theta: float = 0.4) -> Scenario:
    """As :func:`anomalous_qubit` but with ``U1 = exp(−iθσz)``.

    Post-selecting ``b = −1`` gives ``cot(π/16) · e^{−2iθ}``: complex mode
    keeps the phase, real mode keeps ``cot(π/16) cos 2θ``.
    """
    u1 = np.diag([np.exp(-1j * theta), np.exp(1j * theta)])
    return Scenario.build(tilted(math.pi / 16), SIGMA_X, SIGMA_Z, u1=u1, mode=mode)


def negative_entry_qubit(mode: Mode = "real") -> Scenario:
    """A = σx, B = σz on ``cos(3π/8)|0⟩ + sin(3π/8)|1⟩``; entry (b=+1, a=−1) is negative."""
    return Scenario.build(tilted(3 * math.pi / 8), SIGMA_X, SIGMA_Z, mode=mode)


def commuting_qubit(mode: Mode = "real") -> Scenario:
    """A = B = σz on |+⟩, no evolution."""
    return Scenario.build(KET_PLUS, SIGMA_Z, SIGMA_Z, mode=mode)


def contrast_qubit(mode: Mode = "real") -> Scenario:
    """A = σx, B = σz on |0⟩: sequential measurement is uniform, the
    quasi-probability is not."""
    return Scenario.build(KET0, SIGMA_X, SIGMA_Z, mode=mode)


def eigenstate_qubit(mode: Mode = "real") -> Scenario:
    return Scenario.build(KET0, SIGMA_Z, SIGMA_Z, mode=mode)


FIXTURES = {
    "anomalous": anomalous_qubit,
    "phased_anomalous": phased_anomalous_qubit,
    "negative_entry": negative_entry_qubit,
    "commuting": commuting_qubit,
    "contrast": contrast_qubit,
    "eigenstate": eigenstate_qubit,
}
