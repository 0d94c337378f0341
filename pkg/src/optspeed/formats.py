"""JSON and CSV formats.

Complex numbers are ``[re, im]`` pairs, states are lists of pairs, matrices
are row-major lists of rows. Every float is written with 17 significant
digits so doubles survive a round trip.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .brachistochrone import BrachistochroneResult
from .errors import SchemaError
from .evolution import Trajectory
from .metric import MetricOperator, metric_from_params

FLOAT_FORMAT = ".17g"


def fmt(x: float) -> str:
    return format(float(x), FLOAT_FORMAT)


def _number(x, what: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise SchemaError(f"{what}: expected a number, got {x!r}")
    if not math.isfinite(x):
        raise SchemaError(f"{what}: non-finite value")
    return float(x)


def parse_complex(obj, what: str = "complex") -> complex:
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return complex(_number(obj, what))
    if not (isinstance(obj, list) and len(obj) == 2):
        raise SchemaError(f"{what}: expected [re, im], got {obj!r}")
    return complex(_number(obj[0], what), _number(obj[1], what))


def parse_state(obj) -> np.ndarray:
    if isinstance(obj, dict) and "state" in obj:
        obj = obj["state"]
    if not isinstance(obj, list) or len(obj) < 2:
        raise SchemaError("state: expected a list of at least two [re, im] pairs")
    return np.array([parse_complex(z, f"state[{k}]") for k, z in enumerate(obj)])


def parse_matrix(obj, what: str = "matrix") -> np.ndarray:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise SchemaError(f"{what}: expected a row-major list of rows")
    n = len(obj)
    if any(len(r) != n for r in obj):
        raise SchemaError(f"{what}: not square")
    return np.array([[parse_complex(z, f"{what}[{i}][{j}]") for j, z in enumerate(r)]
                     for i, r in enumerate(obj)])


def parse_metric(obj) -> MetricOperator:
    """Either a full matrix, or ``{"a": .., "c": .., "b": [re, im]}`` for 2x2."""
    if isinstance(obj, dict) and "metric" in obj:
        obj = obj["metric"]
    if isinstance(obj, dict):
        missing = {"a", "c"} - obj.keys()
        if missing:
            raise SchemaError(f"metric: missing keys {sorted(missing)}")
        b = parse_complex(obj.get("b", [0.0, 0.0]), "metric.b")
        return metric_from_params(_number(obj["a"], "metric.a"), _number(obj["c"], "metric.c"), b)
    return MetricOperator.from_matrix(parse_matrix(obj, "metric"))


def parse_hamiltonian(obj) -> np.ndarray:
    """A bare matrix, or any object carrying one under ``"hamiltonian"`` (e.g. construct output)."""
    if isinstance(obj, dict):
        if "hamiltonian" not in obj:
            raise SchemaError("hamiltonian: object has no 'hamiltonian' key")
        obj = obj["hamiltonian"]
    return parse_matrix(obj, "hamiltonian")


def read_json(path) -> object:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from exc


def load_state(path) -> np.ndarray:
    return parse_state(read_json(path))


def load_metric(path) -> MetricOperator:
    return parse_metric(read_json(path))


def load_hamiltonian(path) -> np.ndarray:
    return parse_hamiltonian(read_json(path))


def complex_pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def state_to_json(v) -> list:
    return [complex_pair(z) for z in np.asarray(v)]


def matrix_to_json(m) -> list:
    return [[complex_pair(z) for z in row] for row in np.asarray(m)]


def metric_to_json(metric: MetricOperator) -> list:
    return matrix_to_json(metric.matrix)


def result_to_json(result: BrachistochroneResult, verification: dict | None = None) -> dict:
    out = {
        "hamiltonian": matrix_to_json(result.hamiltonian),
        "tau_min": result.tau_min,
        "s": result.s,
        "xi": complex_pair(result.xi),
        "omega": result.omega,
        "antipodal": result.antipodal,
        "energy": result.scale.E,
        "hbar": result.scale.hbar,
        "eigenvalues": [-result.scale.E, result.scale.E],
        "eigenvectors": [state_to_json(col) for col in result.eigenvectors.T],
    }
    if verification is not None:
        out["verification"] = verification
    return out


def dumps(obj) -> str:
    """JSON text with every float at 17 significant digits."""
    if isinstance(obj, dict):
        items = (f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items())
        return "{" + ", ".join(items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        if not math.isfinite(obj):
            raise ValueError(f"cannot write non-finite float {obj} as JSON")
        return fmt(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def trajectory_header(dim: int) -> list[str]:
    cols = ["t"]
    for k in range(dim):
        cols += [f"re_psi{k}", f"im_psi{k}"]
    return cols + ["speed", "accumulated_s", "eta_norm", "fidelity"]


def trajectory_to_csv(traj: Trajectory) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    dim = traj.states.shape[1]
    w.writerow(trajectory_header(dim))
    for k, t in enumerate(traj.times):
        row = [fmt(t)]
        for z in traj.states[k]:
            row += [fmt(z.real), fmt(z.imag)]
        fid = "" if traj.fidelity_to_target is None else fmt(traj.fidelity_to_target[k])
        row += [fmt(traj.speed[k]), fmt(traj.accumulated_s[k]), fmt(traj.eta_norm[k]), fid]
        w.writerow(row)
    return buf.getvalue()


def rows_to_csv(header: list[str], rows: list[list[float]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(x) for x in row])
    return buf.getvalue()
