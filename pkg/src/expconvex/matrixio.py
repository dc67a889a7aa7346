"""JSON interchange for complex matrices, reductions, measures, and reports.

A matrix document is {"n": dim, "entries": [[re, im], ...]} with entries in
row-major order; a pair file holds two such documents under keys "A" and
"B".  All writers serialize with sorted keys and fixed indentation so that
output bytes are deterministic.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import MatrixFileError
from .transform import AtomicMeasure, MeasureFit


def matrix_to_doc(mat: np.ndarray) -> dict:
    """Encode a square complex matrix as {n, entries} with [re, im] pairs."""
    m = np.asarray(mat, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    flat = m.reshape(-1)
    return {
        "n": int(m.shape[0]),
        "entries": [[float(z.real), float(z.imag)] for z in flat],
    }


def complex_vector_to_doc(vec: np.ndarray) -> list:
    v = np.asarray(vec, dtype=complex).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in v]


def real_vector_to_doc(vec: np.ndarray) -> list:
    return [float(x) for x in np.asarray(vec, dtype=float).reshape(-1)]


def _entry_to_complex(entry, index: int, n: int, where: str) -> complex:
    row, col = divmod(index, n)
    spot = f"{where}: entry {index} (row {row}, col {col})"
    if not isinstance(entry, (list, tuple)) or len(entry) != 2:
        raise MatrixFileError(f"{spot}: expected an [re, im] pair, got {entry!r}")
    re, im = entry
    if isinstance(re, bool) or isinstance(im, bool) or not (
        isinstance(re, (int, float)) and isinstance(im, (int, float))
    ):
        raise MatrixFileError(f"{spot}: re and im must be numbers, got {entry!r}")
    if not (math.isfinite(re) and math.isfinite(im)):
        raise MatrixFileError(f"{spot}: non-finite value {entry!r}")
    return complex(re, im)


def matrix_from_doc(doc, where: str = "matrix") -> np.ndarray:
    """Decode a {n, entries} document, reporting the position of any defect."""
    if not isinstance(doc, dict):
        raise MatrixFileError(f"{where}: expected an object, got {type(doc).__name__}")
    if "n" not in doc:
        raise MatrixFileError(f"{where}: missing key 'n'")
    n = doc["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise MatrixFileError(f"{where}: 'n' must be a positive integer, got {n!r}")
    if "entries" not in doc:
        raise MatrixFileError(f"{where}: missing key 'entries'")
    entries = doc["entries"]
    if not isinstance(entries, list):
        raise MatrixFileError(f"{where}: 'entries' must be an array")
    if len(entries) != n * n:
        raise MatrixFileError(
            f"{where}: expected {n * n} entries for n = {n}, got {len(entries)}"
        )
    flat = [_entry_to_complex(e, k, n, where) for k, e in enumerate(entries)]
    return np.array(flat, dtype=complex).reshape(n, n)


def _read_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise MatrixFileError(f"{path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFileError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc


def load_matrix(path: str) -> np.ndarray:
    """Load a single-matrix file."""
    return matrix_from_doc(_read_json(path), where=path)


def load_pair(path: str) -> tuple[np.ndarray, np.ndarray]:
    """Load a two-matrix file with keys "A" and "B"."""
    doc = _read_json(path)
    if not isinstance(doc, dict):
        raise MatrixFileError(f"{path}: expected an object at top level")
    for key in ("A", "B"):
        if key not in doc:
            raise MatrixFileError(f"{path}: missing key '{key}'")
    a = matrix_from_doc(doc["A"], where=f"{path}: A")
    b = matrix_from_doc(doc["B"], where=f"{path}: B")
    if a.shape != b.shape:
        raise MatrixFileError(
            f"{path}: A is {a.shape[0]}x{a.shape[0]} but B is {b.shape[0]}x{b.shape[0]}"
        )
    return a, b


def reduction_to_doc(result, residuals: tuple[float, float]) -> dict:
    """Encode a reduction result together with its intermediate quantities."""
    tr = result.trace
    return {
        "W": matrix_to_doc(result.W.mat),
        "L": matrix_to_doc(result.L.mat),
        "M": matrix_to_doc(result.M.mat),
        "residuals": {
            "wavw_minus_l": float(residuals[0]),
            "wbw_minus_m": float(residuals[1]),
        },
        "trace": {
            "U": matrix_to_doc(tr.U.mat),
            "B_block": matrix_to_doc(tr.B_block.mat),
            "b_col": complex_vector_to_doc(tr.b_col),
            "mu_n": float(tr.mu_n),
            "V_block": matrix_to_doc(tr.V_block.mat),
            "M_block": real_vector_to_doc(tr.M_block),
            "g": complex_vector_to_doc(tr.g),
            "omegas": complex_vector_to_doc(tr.omegas),
            "Omega": matrix_to_doc(tr.Omega.mat),
            "W_block": matrix_to_doc(tr.W_block.mat),
            "g_abs": real_vector_to_doc(tr.g_abs),
        },
    }


def measure_to_doc(measure: AtomicMeasure) -> dict:
    return {
        "atoms": [[loc, w] for loc, w in measure.atoms],
        "total_mass": measure.total_mass,
    }


def fit_to_doc(fit: MeasureFit) -> dict:
    return {
        "measure": measure_to_doc(fit.measure),
        "grid_resolution": int(fit.grid_resolution),
        "training_residual": float(fit.training_residual),
        "holdout_error": float(fit.holdout_error),
    }


def ec_report_to_doc(report, label: str, grid_points: np.ndarray) -> dict:
    return {
        "label": label,
        "grid": real_vector_to_doc(grid_points),
        "passed": bool(report.passed),
        "min_eigenvalue": float(report.min_eigenvalue),
        "tolerance": float(report.tolerance),
        "witness": None if report.passed else complex_vector_to_doc(report.witness),
    }


def dumps_doc(doc) -> str:
    """Deterministic serialization: sorted keys, two-space indent, newline."""
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_doc(path: str, doc) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(dumps_doc(doc))
    except OSError as exc:
        raise MatrixFileError(f"{path}: {exc.strerror or exc}") from exc
