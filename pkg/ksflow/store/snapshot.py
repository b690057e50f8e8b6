"""Binary snapshot files of (n, c, ux, uy) at a sample time."""

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ksflow.dynamics.state import State
from ksflow.errors import InvalidField
from ksflow.model.config import Fluid, ModelConfig
from ksflow.spectral.grid import GridSpec

MAGIC = b"KSNS"
VERSION = 1
# magic, version, nx, ny, lx, ly, t, mu, fluid code; little-endian, unpadded
HEADER = struct.Struct("<4sIIIdddBB")
PAYLOAD_DTYPE = np.dtype("<f8")


@dataclass(frozen=True, eq=False)
class Snapshot:
    nx: int
    ny: int
    lx: float
    ly: float
    t: float
    mu: int
    fluid_code: int
    n: np.ndarray
    c: np.ndarray
    ux: np.ndarray
    uy: np.ndarray
    version: int = VERSION

    @property
    def grid(self) -> GridSpec:
        return GridSpec(nx=self.nx, ny=self.ny, lx=self.lx, ly=self.ly)

    @property
    def fluid(self) -> Fluid:
        return Fluid.from_code(self.fluid_code)

    def to_bytes(self) -> bytes:
        header = HEADER.pack(
            MAGIC,
            self.version,
            self.nx,
            self.ny,
            self.lx,
            self.ly,
            self.t,
            self.mu,
            self.fluid_code,
        )
        payload = b"".join(
            np.ascontiguousarray(a, dtype=PAYLOAD_DTYPE).tobytes(order="C")
            for a in (self.n, self.c, self.ux, self.uy)
        )
        return header + payload

    @classmethod
    def from_bytes(cls, data: bytes) -> "Snapshot":
        if len(data) < HEADER.size:
            raise InvalidField("snapshot shorter than its header")
        magic, version, nx, ny, lx, ly, t, mu, fluid_code = HEADER.unpack_from(data)
        if magic != MAGIC:
            raise InvalidField(f"bad snapshot magic {magic!r}")
        if version != VERSION:
            raise InvalidField(
                f"unsupported snapshot version {version}, expected {VERSION}"
            )
        count = nx * ny
        expected = HEADER.size + 4 * count * PAYLOAD_DTYPE.itemsize
        if len(data) != expected:
            raise InvalidField(f"snapshot has {len(data)} bytes, expected {expected}")
        arrays = np.frombuffer(data, dtype=PAYLOAD_DTYPE, offset=HEADER.size)
        n, c, ux, uy = (a.reshape(nx, ny).copy() for a in np.split(arrays, 4))
        return cls(nx, ny, lx, ly, t, mu, fluid_code, n, c, ux, uy, version)


def snapshot_from_state(state: State, model: ModelConfig) -> Snapshot:
    grid = state.grid
    return Snapshot(
        nx=grid.nx,
        ny=grid.ny,
        lx=grid.lx,
        ly=grid.ly,
        t=state.t,
        mu=model.mu,
        fluid_code=model.fluid.code,
        n=state.n.values,
        c=state.c.values,
        ux=state.u.x.values,
        uy=state.u.y.values,
    )


def state_from_snapshot(snapshot: Snapshot) -> State:
    return State.from_arrays(
        snapshot.grid,
        snapshot.t,
        snapshot.n,
        snapshot.c,
        snapshot.ux,
        snapshot.uy,
    )


def write_snapshot(path: str | Path, snapshot: Snapshot) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(snapshot.to_bytes())
    return path


def read_snapshot(path: str | Path) -> Snapshot:
    return Snapshot.from_bytes(Path(path).read_bytes())
