"""Complex-number encoding shared by every JSON schema: ``[re, im]`` pairs."""

import json
import os
import tempfile

import numpy as np


def encode_complex(values):
    """Nested array of complex numbers -> nested lists of ``[re, im]``."""
    arr = np.asarray(values, dtype=complex)
    pairs = np.stack([arr.real, arr.imag], axis=-1)
    return pairs.tolist()


def decode_complex(pairs, shape=None):
    arr = np.asarray(pairs, dtype=float)
    if arr.size == 0:
        return np.zeros(shape if shape is not None else (0,), dtype=complex)
    if arr.shape[-1] != 2:
        raise ValueError("complex numbers must be encoded as [re, im] pairs")
    out = arr[..., 0] + 1j * arr[..., 1]
    if shape is not None:
        out = out.reshape(shape)
    return out


def encode_matrix(m):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix JSON requires a square matrix")
    return {"n": int(m.shape[0]), "entries": encode_complex(m)}


def decode_matrix(obj):
    n = int(obj["n"])
    m = decode_complex(obj["entries"], shape=(n, n))
    return m


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def write_atomic(path, text):
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path, obj):
    write_atomic(path, json.dumps(obj, indent=2) + "\n")
