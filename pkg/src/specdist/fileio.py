"""File formats and deterministic serialization.

All floats are rendered with 17 significant digits so values survive a
write/read round trip bit-exactly, and all containers serialize in a fixed
key order; identical inputs therefore produce byte-identical output files.

Formats:

* grid spectrum: CSV with header ``omega_index,row,col,re,im`` plus a JSON
  sidecar (same stem, ``.meta.json``) holding dim, n_freq and the
  real-symmetry flag;
* rational model: JSON object with ``ar``, ``ma``, ``noise_cov`` arrays;
* autocovariance: JSON object with a ``lags`` array of matrices;
* time series: CSV of numeric rows, one sample per row, one column per
  channel, no header.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .errors import ParseError
from .hermitian import DEFAULT_POLICY, PsdPolicy
from .spectra import Autocovariance, GridSpectrum, RationalSpectrum

__all__ = [
    "format_float",
    "grid_csv_text",
    "json_dumps",
    "load_json_object",
    "read_autocov_json",
    "read_grid_csv",
    "read_model_json",
    "read_timeseries_csv",
    "sidecar_path",
    "write_grid_csv",
]

GRID_HEADER = ("omega_index", "row", "col", "re", "im")


def format_float(x: float) -> str:
    """Render a float with 17 significant digits (round-trip exact)."""
    if not np.isfinite(x):
        raise ValueError(f"refusing to serialize non-finite value {x!r}")
    return f"{float(x):.17g}"


def json_dumps(obj) -> str:
    """Deterministic JSON: fixed float rendering, insertion-ordered keys."""
    pieces: list[str] = []
    _emit(obj, pieces)
    return "".join(pieces)


def _emit(obj, out: list) -> None:
    if isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif obj is None:
        out.append("null")
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(", ")
            out.append(json.dumps(str(k)))
            out.append(": ")
            _emit(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(", ")
            _emit(v, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def sidecar_path(path) -> Path:
    return Path(path).with_suffix(".meta.json")


def grid_csv_text(grid: GridSpectrum) -> str:
    """CSV body for a grid spectrum (header plus one line per entry)."""
    lines = [",".join(GRID_HEADER)]
    m = grid.dim
    for l in range(grid.n_freq):
        for i in range(m):
            for j in range(m):
                v = grid.values[l, i, j]
                lines.append(
                    f"{l},{i},{j},{format_float(v.real)},{format_float(v.imag)}"
                )
    return "\n".join(lines) + "\n"


def write_grid_csv(path, grid: GridSpectrum) -> None:
    """Write a grid spectrum CSV together with its metadata sidecar."""
    path = Path(path)
    path.write_text(grid_csv_text(grid))
    meta = {
        "dim": grid.dim,
        "n_freq": grid.n_freq,
        "real_symmetry": grid.real_symmetry,
    }
    sidecar_path(path).write_text(json_dumps(meta) + "\n")


def read_grid_csv(path, policy: PsdPolicy = DEFAULT_POLICY) -> GridSpectrum:
    """Load a grid spectrum CSV, consulting the sidecar when present.

    Raises
    ------
    ParseError
        On a bad header, malformed row, out-of-range index, missing grid
        entry, or a sidecar that contradicts the data.
    """
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = tuple(c.strip() for c in next(reader))
        except StopIteration:
            raise ParseError(f"{path}: empty grid file") from None
        if header != GRID_HEADER:
            raise ParseError(
                f"{path}: expected header {','.join(GRID_HEADER)}, "
                f"got {','.join(header)}"
            )
        entries = []
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 5:
                raise ParseError(f"{path}:{lineno}: expected 5 fields, got {len(row)}")
            try:
                entries.append(
                    (int(row[0]), int(row[1]), int(row[2]), float(row[3]), float(row[4]))
                )
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from None
    if not entries:
        raise ParseError(f"{path}: grid file has no data rows")

    n_freq = max(e[0] for e in entries) + 1
    m = max(max(e[1] for e in entries), max(e[2] for e in entries)) + 1

    meta_file = sidecar_path(path)
    if meta_file.exists():
        try:
            meta = json.loads(meta_file.read_text())
        except ValueError as exc:
            raise ParseError(f"{meta_file}: {exc}") from None
        md, mn = int(meta.get("dim", m)), int(meta.get("n_freq", n_freq))
        if md < m or mn < n_freq:
            raise ParseError(
                f"{path}: data indices exceed sidecar shape "
                f"(dim {md}, n_freq {mn})"
            )
        m, n_freq = md, mn

    values = np.full((n_freq, m, m), np.nan, dtype=complex)
    for l, i, j, re, im in entries:
        if not (0 <= l < n_freq and 0 <= i < m and 0 <= j < m):
            raise ParseError(f"{path}: entry ({l},{i},{j}) out of range")
        values[l, i, j] = re + 1j * im
    if np.isnan(values.real).any():
        raise ParseError(f"{path}: grid is missing entries")
    return GridSpectrum.build(values, policy, name=str(path))


def load_json_object(path) -> dict:
    """Load a JSON file that must contain an object at top level."""
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from None
    if not isinstance(obj, dict):
        raise ParseError(f"{path}: expected a JSON object at top level")
    return obj


def _as_float_array(obj, path, key) -> np.ndarray:
    try:
        return np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{path}: field {key!r}: {exc}") from None


def _as_matrix_stack(arr: np.ndarray, path, key) -> np.ndarray:
    """Promote scalar-coefficient lists and bare matrices to (k, m, m)."""
    if arr.ndim == 1:
        return arr[:, None, None]
    if arr.ndim == 2:
        return arr[None]
    if arr.ndim == 3:
        return arr
    raise ParseError(f"{path}: field {key!r} must be a list of matrices")


def read_model_json(path) -> RationalSpectrum:
    """Load a rational model description.

    ``ar`` may be absent or empty (pure moving average).  Scalar models
    can be written with flat coefficient lists and a scalar noise
    variance; everything is promoted to matrix stacks.
    """
    obj = load_json_object(path)
    for key in ("ma", "noise_cov"):
        if key not in obj:
            raise ParseError(f"{path}: model is missing the {key!r} field")
    q = np.atleast_2d(_as_float_array(obj["noise_cov"], path, "noise_cov"))
    if q.ndim != 2:
        raise ParseError(f"{path}: noise_cov must be a matrix")
    ar = _as_matrix_stack(_as_float_array(obj.get("ar", []), path, "ar"), path, "ar")
    ma = _as_matrix_stack(_as_float_array(obj["ma"], path, "ma"), path, "ma")
    return RationalSpectrum(ar=ar, ma=ma, noise_cov=q)


def read_autocov_json(path) -> Autocovariance:
    """Load an autocovariance sequence ``{"lags": [R0, R1, ...]}``.

    Scalar sequences may be flat lists; matrix sequences must have shape
    (K+1, m, m).
    """
    obj = load_json_object(path)
    if "lags" not in obj:
        raise ParseError(f"{path}: autocovariance is missing the 'lags' field")
    lags = _as_float_array(obj["lags"], path, "lags")
    if lags.ndim == 1:
        lags = lags[:, None, None]
    elif lags.ndim == 2 and lags.shape[1] == 1:
        lags = lags[:, :, None]
    elif lags.ndim != 3:
        raise ParseError(f"{path}: 'lags' must be a list of matrices")
    return Autocovariance(lags=lags)


def read_timeseries_csv(path) -> np.ndarray:
    """Load a time series CSV into an array of shape (T, m)."""
    path = Path(path)
    try:
        data = np.loadtxt(path, delimiter=",", ndmin=2)
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from None
    if data.size == 0:
        raise ParseError(f"{path}: time series is empty")
    return data
