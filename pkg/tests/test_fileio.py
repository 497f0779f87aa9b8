import struct

import numpy as np
import pytest

import floc
from floc.errors import MalformedFile
from floc.fileio import MAGIC, dumps_record, read_embeddings, write_embeddings

from conftest import random_tokens


def test_round_trip_bit_exact(tmp_path):
    tokens = random_tokens(3, 37, 11)
    path = tmp_path / "t.floc"
    write_embeddings(path, tokens)
    back = read_embeddings(path)
    assert np.array_equal(back.data, tokens.data)
    assert back.data.dtype == np.float32


def test_file_length_formula(tmp_path):
    tokens = random_tokens(4, 21, 5)
    path = tmp_path / "t.floc"
    write_embeddings(path, tokens)
    assert path.stat().st_size == 24 + 4 * 21 * 5


def test_header_layout(tmp_path):
    tokens = random_tokens(5, 3, 2)
    path = tmp_path / "t.floc"
    write_embeddings(path, tokens)
    blob = path.read_bytes()
    magic, version, flags, n, d = struct.unpack_from("<4sHHQQ", blob)
    assert (magic, version, flags, n, d) == (MAGIC, 1, 0, 3, 2)


def test_write_read_write_identical_bytes(tmp_path):
    tokens = random_tokens(6, 16, 4)
    a, b = tmp_path / "a.floc", tmp_path / "b.floc"
    write_embeddings(a, tokens)
    write_embeddings(b, read_embeddings(a))
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize(
    "mutate,message",
    [
        (lambda blob: b"XLOC" + blob[4:], "magic"),
        (lambda blob: blob[:4] + struct.pack("<H", 9) + blob[6:], "version"),
        (lambda blob: blob[:6] + struct.pack("<H", 1) + blob[8:], "flags"),
        (lambda blob: blob[:-4], "length"),
        (lambda blob: blob[:10], "header"),
    ],
)
def test_malformed_files_rejected(tmp_path, mutate, message):
    tokens = random_tokens(7, 4, 3)
    path = tmp_path / "t.floc"
    write_embeddings(path, tokens)
    path.write_bytes(mutate(path.read_bytes()))
    with pytest.raises(MalformedFile) as err:
        read_embeddings(path)
    assert message in str(err.value)


def test_non_finite_payload_rejected(tmp_path):
    path = tmp_path / "t.floc"
    blob = struct.pack("<4sHHQQ", MAGIC, 1, 0, 1, 2) + struct.pack("<ff", 1.0, float("nan"))
    path.write_bytes(blob)
    with pytest.raises(MalformedFile):
        read_embeddings(path)


# --- record serialization -----------------------------------------------


def test_dumps_preserves_17_significant_digits():
    x = 0.1 + 0.2
    text = dumps_record({"v": x})
    assert format(x, ".17g") in text
    assert float(format(x, ".17g")) == x  # parse back to the same float


def test_dumps_deterministic_ordering_and_types():
    record = {"b": 1, "a": [1.5, 2, None, True], "c": {"x": "s"}}
    assert dumps_record(record) == dumps_record({"b": 1, "a": [1.5, 2, None, True], "c": {"x": "s"}})
    text = dumps_record(record)
    assert text.index('"b"') < text.index('"a"') < text.index('"c"')


def test_dumps_valid_json():
    import json

    record = {
        "method": "floc",
        "gains": [1.0, 0.25, 1e-17],
        "indices": [1, 2, 3],
        "none": None,
        "nested": {"flag": False},
    }
    parsed = json.loads(dumps_record(record))
    assert parsed["gains"][2] == 1e-17
    assert parsed["nested"]["flag"] is False


def test_dumps_rejects_non_finite():
    with pytest.raises(ValueError):
        dumps_record({"v": float("inf")})
