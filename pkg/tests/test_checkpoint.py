"""Value-exact round trips for the parameter container."""

import numpy as np
import pytest

from flowsr.numerics import CheckpointError, load_arrays, save_arrays


def test_round_trip_is_value_exact(tmp_path):
    rng = np.random.default_rng(0)
    arrays = {
        "blocks.0.attn.wq": rng.normal(size=(16, 16)),
        "blocks.0.attn.bq": rng.normal(size=(16,)),
        "scalarish": np.array(3.5),
        "low_precision": rng.normal(size=(4, 4)).astype(np.float32),
    }
    path = tmp_path / "params.bin"
    save_arrays(path, arrays, precision="float64", seed=42, meta={"note": "unit"})
    loaded, header = load_arrays(path)

    assert header["precision"] == "float64"
    assert header["seed"] == 42
    assert set(loaded) == set(arrays)
    for name, arr in arrays.items():
        assert loaded[name].dtype == arr.dtype
        assert loaded[name].shape == arr.shape
        assert loaded[name].tobytes() == np.ascontiguousarray(arr).tobytes()


def test_save_is_deterministic(tmp_path):
    arrays = {"a": np.arange(6.0).reshape(2, 3), "b": np.ones(4, dtype=np.float32)}
    p1, p2 = tmp_path / "one.bin", tmp_path / "two.bin"
    save_arrays(p1, arrays, precision="float64", seed=1)
    save_arrays(p2, arrays, precision="float64", seed=1)
    assert p1.read_bytes() == p2.read_bytes()


def test_bad_magic_rejected(tmp_path):
    path = tmp_path / "junk.bin"
    path.write_bytes(b"NOTMAGIC" + b"\x00" * 16)
    with pytest.raises(CheckpointError):
        load_arrays(path)


def test_unsupported_dtype_rejected(tmp_path):
    with pytest.raises(CheckpointError):
        save_arrays(tmp_path / "x.bin", {"ints": np.arange(3)}, precision="float64", seed=0)


def test_truncated_file_rejected(tmp_path):
    path = tmp_path / "params.bin"
    save_arrays(path, {"a": np.ones(64)}, precision="float64", seed=0)
    blob = path.read_bytes()
    path.write_bytes(blob[:-8])
    with pytest.raises(CheckpointError):
        load_arrays(path)
