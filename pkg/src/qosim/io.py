"""File formats for snapshots and diagnostics.

Energy-density snapshots use a small binary container: little-endian magic
"QOSN", u32 nx, u32 ny, f64 t, then nx*ny float32 values row-major.  Grids
can also be rendered to 8-bit binary PGM, optionally on a log scale.
Time series and profiles are written as CSV with a header row.
"""

from __future__ import annotations

import csv
import struct

import numpy as np

FIELD_MAGIC = b"QOSN"


def write_field_snapshot(path, grid: np.ndarray, t: float) -> None:
    grid = np.asarray(grid)
    if grid.ndim != 2:
        raise ValueError("expected a 2D grid")
    with open(path, "wb") as fh:
        fh.write(FIELD_MAGIC)
        fh.write(struct.pack("<IId", grid.shape[0], grid.shape[1], t))
        fh.write(np.ascontiguousarray(grid, dtype="<f4").tobytes())


def read_field_snapshot(path):
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != FIELD_MAGIC:
            raise ValueError(f"not a field snapshot (magic {magic!r})")
        nx, ny, t = struct.unpack("<IId", fh.read(16))
        grid = np.frombuffer(fh.read(4 * nx * ny), dtype="<f4").reshape(nx, ny)
    return grid.astype(float), t


def write_pgm(path, grid: np.ndarray, log_scale: bool = False,
              log_floor: float = 1e-6) -> None:
    """Render a non-negative grid to 8-bit binary PGM, max-normalized.

    With ``log_scale`` the dynamic range [max*log_floor, max] is mapped
    logarithmically onto 0..255, which makes faint interference structure
    visible.
    """
    g = np.asarray(grid, dtype=float)
    peak = g.max()
    if peak <= 0:
        img = np.zeros_like(g)
    elif log_scale:
        rel = np.maximum(g / peak, log_floor)
        img = (np.log10(rel) - np.log10(log_floor)) / (-np.log10(log_floor))
    else:
        img = g / peak
    data = np.clip(np.rint(img * 255), 0, 255).astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{g.shape[1]} {g.shape[0]}\n255\n".encode())
        fh.write(data.tobytes())


class CsvWriter:
    """Streaming CSV writer with a fixed header row."""

    def __init__(self, path, header):
        self._fh = open(path, "w", newline="")
        self._writer = csv.writer(self._fh)
        self._writer.writerow(header)

    def row(self, values) -> None:
        self._writer.writerow([f"{v:.12g}" if isinstance(v, float) else v
                               for v in values])

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def write_profile_csv(path, columns: dict) -> None:
    """Write named columns of equal length as CSV."""
    names = list(columns)
    arrays = [np.asarray(columns[k]) for k in names]
    with CsvWriter(path, names) as w:
        for idx in range(len(arrays[0])):
            w.row([float(a[idx]) for a in arrays])
