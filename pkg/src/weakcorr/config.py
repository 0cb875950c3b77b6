"""Numerical tolerances shared by every module.

All thresholds live here so tests and the CLI agree on a single set of
defaults.  Pass a modified :class:`Tolerances` (``dataclasses.replace``)
to any function that accepts ``tol=`` to override them.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # numeric kernel
    hermitian_rel: float = 1e-10
    jacobi_rel: float = 1e-14
    jacobi_max_sweeps: int = 100

    # quantum model
    unitary: float = 1e-9
    ket_norm: float = 1e-10
    ket_norm_accept: float = 1e-6
    group_tol: float = 1e-9
    projector: float = 1e-9

    # weak-value engine
    postselection_cutoff: float = 1e-12
    identity: float = 1e-9
    conditional: float = 1e-10
    marginal: float = 1e-10
    correlation: float = 1e-10
    complex_real: float = 1e-12
    commuting: float = 1e-9

    # harness
    anomaly_margin: float = 1e-9


DEFAULT = Tolerances()
