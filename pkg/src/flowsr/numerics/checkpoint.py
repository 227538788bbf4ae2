"""Flat binary container for named parameter arrays.

Layout (all integers little-endian):

    8 bytes   magic ``FLOWSRT1``
    u32       header length, then that many bytes of UTF-8 JSON
              {"precision": "float32"|"float64", "seed": int, "meta": {...}}
    u32       entry count
    per entry:
      u16     name length, then UTF-8 name
      u8      dtype code (4 = float32, 8 = float64)
      u8      ndim
      u32*nd  dimension sizes
      raw     little-endian values, C order

Round-trips are value-exact: bytes are written straight from the arrays.
"""

from __future__ import annotations

import json
import struct

import numpy as np

MAGIC = b"FLOWSRT1"
_DTYPES = {4: np.dtype("<f4"), 8: np.dtype("<f8")}
_CODES = {np.dtype(np.float32): 4, np.dtype(np.float64): 8}


class CheckpointError(IOError):
    pass


def save_arrays(path, arrays: dict, precision: str, seed: int, meta: dict | None = None) -> None:
    header = json.dumps(
        {"precision": precision, "seed": int(seed), "meta": meta or {}}, sort_keys=True
    ).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", len(header)))
        fh.write(header)
        fh.write(struct.pack("<I", len(arrays)))
        for name, arr in arrays.items():
            shape = np.asarray(arr).shape
            arr = np.ascontiguousarray(arr)
            code = _CODES.get(arr.dtype)
            if code is None:
                raise CheckpointError(f"unsupported dtype {arr.dtype} for entry {name!r}")
            raw = name.encode("utf-8")
            fh.write(struct.pack("<H", len(raw)))
            fh.write(raw)
            fh.write(struct.pack("<BB", code, len(shape)))
            fh.write(struct.pack(f"<{len(shape)}I", *shape))
            fh.write(arr.astype(_DTYPES[code], copy=False).tobytes())


def load_arrays(path):
    """Read a container; returns (arrays dict, header dict)."""
    with open(path, "rb") as fh:
        if fh.read(8) != MAGIC:
            raise CheckpointError(f"{path}: bad magic, not a parameter container")
        (hlen,) = struct.unpack("<I", fh.read(4))
        header = json.loads(fh.read(hlen).decode("utf-8"))
        (count,) = struct.unpack("<I", fh.read(4))
        arrays: dict[str, np.ndarray] = {}
        for _ in range(count):
            (nlen,) = struct.unpack("<H", fh.read(2))
            name = fh.read(nlen).decode("utf-8")
            code, ndim = struct.unpack("<BB", fh.read(2))
            shape = struct.unpack(f"<{ndim}I", fh.read(4 * ndim))
            dtype = _DTYPES.get(code)
            if dtype is None:
                raise CheckpointError(f"{path}: unknown dtype code {code} for {name!r}")
            n = int(np.prod(shape, dtype=np.int64)) if ndim else 1
            buf = fh.read(n * dtype.itemsize)
            if len(buf) != n * dtype.itemsize:
                raise CheckpointError(f"{path}: truncated data for {name!r}")
            arrays[name] = np.frombuffer(buf, dtype=dtype).reshape(shape).copy()
    return arrays, header
