"""Snapshot, diagnostics and config-file readers and writers."""
from __future__ import annotations

import csv
import struct
from pathlib import Path

import numpy as np

from .diagnostics import DIAG_COLUMNS
from .eos import EN, GasModel, NVAR, cons_to_prim
from .solver import Grid

SNAPSHOT_COLUMNS = ("x", "y", "z", "rho", "u", "v", "w", "p", "E", "B1", "B2", "B3")
BIN_MAGIC = b"ESMHDSN1"
# magic, nx, ny, nz, nrows (int64), time, gamma (float64); rows follow as <f8
BIN_HEADER = struct.Struct("<8s4q2d")


def snapshot_rows(U: np.ndarray, grid: Grid, gas: GasModel) -> np.ndarray:
    """One row per Fluid cell in x-fastest order: coordinates, primitives, E, B."""
    Q = U[grid.interior()]
    W = cons_to_prim(Q, gas)
    X, Y, Z = grid.mesh()
    cols = [X, Y, Z] + [W[k] for k in range(5)] + [Q[EN]] + [W[k] for k in range(5, NVAR)]
    # transpose to (z, y, x) so a C-order ravel runs fastest in x
    flat = [np.ascontiguousarray(c.transpose(2, 1, 0)).ravel() for c in cols]
    keep = np.ascontiguousarray(grid.fluid.transpose(2, 1, 0)).ravel()
    return np.stack(flat, axis=1)[keep]


def write_snapshot(path, U: np.ndarray, grid: Grid, gas: GasModel, time: float,
                   fmt: str = "csv") -> Path:
    path = Path(path)
    time, gamma = float(time), float(gas.gamma)
    rows = snapshot_rows(U, grid, gas)
    nx, ny, nz = grid.shape
    if fmt == "bin":
        with open(path, "wb") as fh:
            fh.write(BIN_HEADER.pack(BIN_MAGIC, nx, ny, nz, rows.shape[0], time, gamma))
            fh.write(rows.astype("<f8").tobytes())
        return path
    if fmt != "csv":
        raise ValueError(f"unknown snapshot format {fmt!r}")
    with open(path, "w") as fh:
        fh.write(f"# time={time!r}\n# nx={nx} ny={ny} nz={nz}\n# gamma={gamma!r}\n")
        fh.write(",".join(SNAPSHOT_COLUMNS) + "\n")
        np.savetxt(fh, rows, fmt="%.17g", delimiter=",")
    return path


def read_snapshot(path):
    """Return ``(meta, rows)`` for a CSV or binary snapshot."""
    path = Path(path)
    with open(path, "rb") as fh:
        head = fh.read(len(BIN_MAGIC))
    if head == BIN_MAGIC:
        raw = path.read_bytes()
        _, nx, ny, nz, nrows, time, gamma = BIN_HEADER.unpack_from(raw)
        rows = np.frombuffer(raw, dtype="<f8", offset=BIN_HEADER.size)
        meta = {"time": time, "nx": nx, "ny": ny, "nz": nz, "gamma": gamma}
        return meta, rows.reshape(nrows, len(SNAPSHOT_COLUMNS)).astype(float)
    meta = {}
    nhead = 0
    with open(path) as fh:
        for line in fh:
            nhead += 1
            if not line.startswith("#"):
                break       # the column-name line
            for item in line[1:].split():
                key, _, val = item.partition("=")
                meta[key] = int(val) if key in ("nx", "ny", "nz") else float(val)
    rows = np.loadtxt(path, delimiter=",", skiprows=nhead, ndmin=2)
    return meta, rows


class DiagnosticsWriter:
    """Streams diagnostics rows to CSV, flushing each row so aborted runs keep them."""

    def __init__(self, path):
        self.path = Path(path)
        self._fh = open(self.path, "w", newline="")
        self._w = csv.writer(self._fh, lineterminator="\n")
        self._w.writerow(DIAG_COLUMNS)

    def write(self, row):
        self._w.writerow([f"{v:.17g}" for v in row])
        self._fh.flush()

    def close(self):
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_diagnostics(path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def parse_config(text: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment. Keys use underscores."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        if not sep or not key.strip():
            raise ValueError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        out[key.strip().replace("-", "_")] = val.strip()
    return out


def read_config(path) -> dict:
    return parse_config(Path(path).read_text())


def format_config(cfg: dict) -> str:
    return "".join(f"{k} = {v}\n" for k, v in cfg.items() if v is not None)
