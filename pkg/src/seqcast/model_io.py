"""Self-describing single-file model container (magic "SEQCAST1", version 1).

Layout, all integers little-endian uint32 and all floats little-endian
float64:

    8 bytes  magic "SEQCAST1"
    u32      format version (currently 1)
    u32      input_dim
    u32      hidden_dim
    u32      window length
    u32      variable-name byte length, then that many UTF-8 bytes
    4 * f64  normalization constants: min, max, lo, hi
    u32      array count (10)
    per array, in the fixed order
        w_f, w_i, w_c, w_o, b_f, b_i, b_c, b_o, w_fc, b_fc:
        u32 name length + UTF-8 name, u32 ndim, ndim * u32 dims,
        row-major f64 data

The file must end exactly after the last array; anything shorter is
malformed, anything longer is rejected too. Round trips are bit-exact.
"""

from __future__ import annotations

import os
import struct
import tempfile
from dataclasses import dataclass

import numpy as np

from .cell import CellParameters
from .dataset import NormalizationSpec
from .errors import MalformedModelError, ModelShapeError, ModelVersionError
from .network import NetworkParameters

MAGIC = b"SEQCAST1"
FORMAT_VERSION = 1


@dataclass
class LoadedModel:
    """Everything a model file carries."""

    params: NetworkParameters
    normalization: NormalizationSpec
    window: int
    variable: str


def _expected_shapes(input_dim: int, hidden_dim: int) -> list[tuple[str, tuple[int, ...]]]:
    gate = (hidden_dim, hidden_dim + input_dim)
    bias = (hidden_dim,)
    return [
        ("w_f", gate),
        ("w_i", gate),
        ("w_c", gate),
        ("w_o", gate),
        ("b_f", bias),
        ("b_i", bias),
        ("b_c", bias),
        ("b_o", bias),
        ("w_fc", (1, hidden_dim)),
        ("b_fc", (1,)),
    ]


def save_model(
    path,
    params: NetworkParameters,
    normalization: NormalizationSpec,
    *,
    window: int,
    variable: str = "",
) -> None:
    """Serialize a model atomically (temp file + rename, never partial)."""
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    chunks = [MAGIC, struct.pack("<IIII", FORMAT_VERSION, params.input_dim, params.hidden_dim, window)]
    name_bytes = variable.encode("utf-8")
    chunks.append(struct.pack("<I", len(name_bytes)))
    chunks.append(name_bytes)
    n = normalization
    chunks.append(struct.pack("<dddd", n.min, n.max, n.lo, n.hi))

    arrays = params.arrays()
    chunks.append(struct.pack("<I", len(arrays)))
    for name, a in arrays:
        nb = name.encode("utf-8")
        chunks.append(struct.pack("<I", len(nb)))
        chunks.append(nb)
        chunks.append(struct.pack("<I", a.ndim))
        chunks.append(struct.pack(f"<{a.ndim}I", *a.shape))
        chunks.append(np.ascontiguousarray(a, dtype="<f8").tobytes())

    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".seqcast-tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(b"".join(chunks))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class _Reader:
    def __init__(self, blob: bytes):
        self.blob = blob
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.blob):
            raise MalformedModelError("model file is truncated")
        out = self.blob[self.pos : self.pos + n]
        self.pos += n
        return out

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def f64s(self, count: int) -> np.ndarray:
        return np.frombuffer(self.take(8 * count), dtype="<f8").astype(np.float64)


def load_model(path) -> LoadedModel:
    """Read and validate a model file written by save_model.

    Distinct errors: MalformedModelError for truncation or structural damage,
    ModelVersionError for an unknown format version, ModelShapeError when the
    declared dimensions and the stored arrays disagree.
    """
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as exc:
        raise MalformedModelError(f"cannot read model file {path}: {exc}") from exc

    r = _Reader(blob)
    if r.take(len(MAGIC)) != MAGIC:
        raise MalformedModelError(f"{path}: bad magic, not a model file")
    version = r.u32()
    if version != FORMAT_VERSION:
        raise ModelVersionError(f"{path}: unsupported format version {version}")

    input_dim = r.u32()
    hidden_dim = r.u32()
    window = r.u32()
    if input_dim < 1 or hidden_dim < 1 or window < 1:
        raise ModelShapeError(
            f"{path}: declared dimensions must be >= 1 "
            f"(input={input_dim}, hidden={hidden_dim}, window={window})"
        )
    variable = r.take(r.u32()).decode("utf-8", errors="replace")

    nmin, nmax, lo, hi = struct.unpack("<dddd", r.take(32))
    if not (np.isfinite([nmin, nmax, lo, hi]).all() and nmax > nmin and 0.0 < lo < hi < 1.0):
        raise MalformedModelError(f"{path}: invalid normalization constants")

    expected = _expected_shapes(input_dim, hidden_dim)
    count = r.u32()
    if count != len(expected):
        raise MalformedModelError(f"{path}: expected {len(expected)} arrays, file declares {count}")

    loaded: dict[str, np.ndarray] = {}
    for exp_name, exp_shape in expected:
        name = r.take(r.u32()).decode("utf-8", errors="replace")
        if name != exp_name:
            raise MalformedModelError(f"{path}: expected array {exp_name!r}, found {name!r}")
        ndim = r.u32()
        if ndim not in (1, 2):
            raise MalformedModelError(f"{path}: array {name!r} has unsupported ndim {ndim}")
        shape = tuple(r.u32() for _ in range(ndim))
        if shape != exp_shape:
            raise ModelShapeError(
                f"{path}: array {name!r} has shape {shape}, "
                f"declared dimensions require {exp_shape}"
            )
        data = r.f64s(int(np.prod(shape))).reshape(shape)
        if not np.all(np.isfinite(data)):
            raise MalformedModelError(f"{path}: array {name!r} contains non-finite values")
        loaded[name] = data

    if r.pos != len(blob):
        raise MalformedModelError(f"{path}: {len(blob) - r.pos} trailing bytes after the last array")

    cell = CellParameters(
        w_f=loaded["w_f"],
        w_i=loaded["w_i"],
        w_c=loaded["w_c"],
        w_o=loaded["w_o"],
        b_f=loaded["b_f"],
        b_i=loaded["b_i"],
        b_c=loaded["b_c"],
        b_o=loaded["b_o"],
        input_dim=input_dim,
        hidden_dim=hidden_dim,
    )
    params = NetworkParameters(cell=cell, w_fc=loaded["w_fc"], b_fc=loaded["b_fc"])
    normalization = NormalizationSpec(min=nmin, max=nmax, lo=lo, hi=hi)
    return LoadedModel(params=params, normalization=normalization, window=window, variable=variable)
