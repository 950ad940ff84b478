"""Persistence for runs: binary state checkpoints, CSV tables, manifests.

Formats are deliberately dumb and stable:

* checkpoints: fixed-layout binary header followed by raw little-endian
  complex128 coefficient arrays in C order;
* tables: plain CSV with a fixed column order and %.17g floats, so a
  rerun of the same configuration and seed reproduces files byte for
  byte;
* manifests and reports: indented JSON with sorted keys.
"""

from __future__ import annotations

import csv
import json
import struct
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import SchemaError
from .sim import DiagnosticsFrame, ProfileState, SimConfig

Array = np.ndarray

_MAGIC = b"ANWV"
_VERSION = 1

__all__ = [
    "save_checkpoint",
    "load_checkpoint",
    "write_diagnostics_csv",
    "read_diagnostics_csv",
    "write_table_csv",
    "read_table_csv",
    "write_json",
    "read_json",
    "RunManifest",
]


def save_checkpoint(
    path: str | Path,
    state: ProfileState,
    dims: tuple[int, ...],
    box: tuple[float, ...],
    c1: float,
    c2: float,
) -> None:
    """Header: magic, version, ndim, dims, box, speeds, time; then the
    two coefficient arrays as raw little-endian complex128."""
    path = Path(path)
    ndim = len(dims)
    if state.h1.shape != tuple(dims) or state.h2.shape != tuple(dims):
        raise SchemaError("state shape does not match the declared grid")
    with open(path, "wb") as f:
        f.write(_MAGIC)
        f.write(struct.pack("<II", _VERSION, ndim))
        f.write(struct.pack(f"<{ndim}I", *dims))
        f.write(struct.pack(f"<{ndim}d", *box))
        f.write(struct.pack("<ddd", c1, c2, state.t))
        f.write(np.ascontiguousarray(state.h1, dtype="<c16").tobytes())
        f.write(np.ascontiguousarray(state.h2, dtype="<c16").tobytes())


def load_checkpoint(path: str | Path):
    """Returns (state, dims, box, c1, c2)."""
    path = Path(path)
    with open(path, "rb") as f:
        if f.read(4) != _MAGIC:
            raise SchemaError(f"{path}: not a checkpoint file")
        version, ndim = struct.unpack("<II", f.read(8))
        if version != _VERSION:
            raise SchemaError(f"{path}: unsupported checkpoint version {version}")
        if not 1 <= ndim <= 3:
            raise SchemaError(f"{path}: bad dimension count {ndim}")
        dims = struct.unpack(f"<{ndim}I", f.read(4 * ndim))
        box = struct.unpack(f"<{ndim}d", f.read(8 * ndim))
        c1, c2, t = struct.unpack("<ddd", f.read(24))
        count = int(np.prod(dims))
        raw = f.read(2 * count * 16)
        if len(raw) != 2 * count * 16:
            raise SchemaError(f"{path}: truncated coefficient payload")
    flat = np.frombuffer(raw, dtype="<c16")
    h1 = flat[:count].reshape(dims).astype(complex)
    h2 = flat[count:].reshape(dims).astype(complex)
    return ProfileState(t, h1, h2), dims, box, c1, c2


# ---------------------------------------------------------------------------
# CSV tables
# ---------------------------------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return "%.17g" % float(v)


def write_table_csv(path: str | Path, columns: tuple[str, ...], rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            if len(row) != len(columns):
                raise SchemaError("row width does not match the declared columns")
            w.writerow([_fmt(v) for v in row])


def read_table_csv(path: str | Path) -> tuple[list[str], list[list[float]]]:
    path = Path(path)
    with open(path, newline="") as f:
        r = csv.reader(f)
        try:
            header = next(r)
        except StopIteration:
            raise SchemaError(f"{path}: empty CSV") from None
        rows = []
        for line in r:
            if len(line) != len(header):
                raise SchemaError(f"{path}: ragged row {line!r}")
            rows.append([float(v) for v in line])
    return header, rows


def write_diagnostics_csv(path: str | Path, frames: list[DiagnosticsFrame]) -> None:
    write_table_csv(path, DiagnosticsFrame.COLUMNS, [f.row() for f in frames])


def read_diagnostics_csv(path: str | Path) -> list[DiagnosticsFrame]:
    header, rows = read_table_csv(path)
    if tuple(header) != DiagnosticsFrame.COLUMNS:
        raise SchemaError(f"{path}: unexpected diagnostics columns {header}")
    return [DiagnosticsFrame(*row) for row in rows]


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def write_json(path: str | Path, payload: dict) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")


def read_json(path: str | Path) -> dict:
    try:
        with open(path) as f:
            return json.load(f)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from None


@dataclass
class RunManifest:
    """One record per CLI invocation tying outputs to their provenance."""

    run_id: str
    command: str
    config: dict
    seed: int
    code_version: str = __version__
    started: str = ""
    finished: str = ""
    artifacts: dict[str, str] = field(default_factory=dict)

    @classmethod
    def begin(cls, command: str, config: SimConfig | dict, seed: int) -> RunManifest:
        cfg = config.to_dict() if isinstance(config, SimConfig) else dict(config)
        return cls(
            run_id=uuid.uuid4().hex[:12],
            command=command,
            config=cfg,
            seed=seed,
            started=time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime()),
        )

    def add(self, kind: str, path: str | Path) -> None:
        self.artifacts[kind] = str(path)

    def finish(self, path: str | Path) -> None:
        self.finished = time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime())
        write_json(path, self.__dict__)
