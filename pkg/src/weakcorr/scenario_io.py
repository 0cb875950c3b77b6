"""JSON scenario files.

Layout::

    {
      "dim": 2,
      "psi": [[re, im], ...],
      "obs_a": [[[re, im], ...], ...],
      "obs_b": [[[re, im], ...], ...],
      "evolution": {"u1": <matrix>, "u2": <matrix>}
                or {"h1": <matrix>, "t1_duration": t, "h2": <matrix>, "t2_duration": t},
      "mode": "real" | "complex"
    }

``evolution`` may be omitted, meaning no evolution (U1 = U2 = I); ``mode``
defaults to ``"real"``.
"""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

from . import kernel
from .config import DEFAULT, Tolerances
from .errors import NotHermitian, ParseError, ValidationError
from .model import MODES, Ket, Observable, Scenario, TwoStageEvolution

_UNITARY_KEYS = {"u1", "u2"}
_HAMILTONIAN_KEYS = {"h1", "h2", "t1_duration", "t2_duration"}


def _complex(x: Any, where: str) -> complex:
    if (
        not isinstance(x, (list, tuple))
        or len(x) != 2
        or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in x)
    ):
        raise ValidationError(where, f"expected a [re, im] pair, got {x!r}")
    z = complex(float(x[0]), float(x[1]))
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValidationError(where, "non-finite entry")
    return z


def _vector(x: Any, dim: int, field: str) -> np.ndarray:
    if not isinstance(x, list) or len(x) != dim:
        raise ValidationError(field, f"expected a list of {dim} [re, im] pairs")
    return np.array([_complex(c, f"{field}[{i}]") for i, c in enumerate(x)], dtype=np.complex128)


def _matrix(x: Any, dim: int, field: str) -> np.ndarray:
    if not isinstance(x, list) or len(x) != dim:
        raise ValidationError(field, f"expected {dim} rows")
    rows = []
    for i, row in enumerate(x):
        if not isinstance(row, list) or len(row) != dim:
            raise ValidationError(field, f"row {i} must have {dim} [re, im] entries")
        rows.append([_complex(c, f"{field}[{i}][{j}]") for j, c in enumerate(row)])
    return np.array(rows, dtype=np.complex128)


def _hermitian(m: np.ndarray, field: str, tol: Tolerances) -> np.ndarray:
    defect = kernel.hermiticity_defect(m)
    if defect > tol.hermitian_rel:
        raise ValidationError(field, f"not Hermitian (relative defect {defect:.3e})")
    return m


def _unitary(m: np.ndarray, field: str, tol: Tolerances) -> np.ndarray:
    defect = kernel.unitarity_defect(m)
    if defect > tol.unitary:
        raise ValidationError(field, f"not unitary (‖U†U − I‖_F = {defect:.3e})")
    return m


def _duration(x: Any, field: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
        raise ValidationError(field, f"expected a finite number, got {x!r}")
    return float(x)


def _evolution(raw: Any, dim: int, tol: Tolerances) -> TwoStageEvolution:
    if raw is None:
        return TwoStageEvolution.identity(dim)
    if not isinstance(raw, dict):
        raise ValidationError("evolution", "expected an object")
    keys = set(raw)
    if keys == _UNITARY_KEYS:
        u1 = _unitary(_matrix(raw["u1"], dim, "evolution.u1"), "evolution.u1", tol)
        u2 = _unitary(_matrix(raw["u2"], dim, "evolution.u2"), "evolution.u2", tol)
        return TwoStageEvolution(u1, u2)
    if keys == _HAMILTONIAN_KEYS:
        h1 = _hermitian(_matrix(raw["h1"], dim, "evolution.h1"), "evolution.h1", tol)
        h2 = _hermitian(_matrix(raw["h2"], dim, "evolution.h2"), "evolution.h2", tol)
        t1 = _duration(raw["t1_duration"], "evolution.t1_duration")
        t2 = _duration(raw["t2_duration"], "evolution.t2_duration")
        return TwoStageEvolution.from_hamiltonians(h1, t1, h2, t2, tol)
    raise ValidationError(
        "evolution",
        f"expected exactly {sorted(_UNITARY_KEYS)} or exactly {sorted(_HAMILTONIAN_KEYS)}, got {sorted(keys)}",
    )


def scenario_from_dict(data: Any, tol: Tolerances = DEFAULT) -> Scenario:
    if not isinstance(data, dict):
        raise ParseError("scenario file must contain a JSON object")
    for key in ("dim", "psi", "obs_a", "obs_b"):
        if key not in data:
            raise ValidationError(key, "missing required field")
    unknown = set(data) - {"dim", "psi", "obs_a", "obs_b", "evolution", "mode"}
    if unknown:
        raise ValidationError(sorted(unknown)[0], "unknown field")

    dim = data["dim"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise ValidationError("dim", f"expected a positive integer, got {dim!r}")
    mode = data.get("mode", "real")
    if mode not in MODES:
        raise ValidationError("mode", f"expected 'real' or 'complex', got {mode!r}")

    raw_psi = _vector(data["psi"], dim, "psi")
    try:
        psi = Ket.from_array(raw_psi, tol)
    except ValueError as exc:
        raise ValidationError("psi", str(exc)) from None

    observables = []
    for field in ("obs_a", "obs_b"):
        m = _hermitian(_matrix(data[field], dim, field), field, tol)
        try:
            observables.append(Observable.from_matrix(m, tol))
        except NotHermitian as exc:
            raise ValidationError(field, str(exc)) from None

    evolution = _evolution(data.get("evolution"), dim, tol)
    return Scenario(psi, observables[0], observables[1], evolution, mode, tol)


def parse_scenario(raw: bytes | str, tol: Tolerances = DEFAULT) -> Scenario:
    """Parse and validate a scenario file.

    Raises
    ------
    ParseError
        The text is not valid JSON (or not an object).
    ValidationError
        A field is missing, mis-shaped or physically invalid; ``.field``
        names it (e.g. ``"obs_a"`` or ``"evolution.u1"``).
    """
    try:
        data = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ParseError(f"malformed scenario file: {exc}") from None
    return scenario_from_dict(data, tol)


def _pairs(a: np.ndarray) -> list:
    if a.ndim == 1:
        return [[float(z.real), float(z.imag)] for z in a]
    return [_pairs(row) for row in a]


def scenario_to_dict(s: Scenario) -> dict:
    return {
        "dim": s.dim,
        "psi": _pairs(s.psi.vector),
        "obs_a": _pairs(s.obs_a.matrix),
        "obs_b": _pairs(s.obs_b.matrix),
        "evolution": {"u1": _pairs(s.evolution.u1), "u2": _pairs(s.evolution.u2)},
        "mode": s.mode,
    }


def serialize_scenario(s: Scenario) -> bytes:
    """Explicit-unitary JSON form; floats are written with round-trip precision."""
    return (json.dumps(scenario_to_dict(s), indent=2) + "\n").encode()
