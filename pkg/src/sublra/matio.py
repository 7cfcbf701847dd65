"""Matrix file formats for the benchmark harness.

LRAM is the binary interchange format: magic bytes ``LRAM``, one version
byte (currently 1), two unsigned 64-bit little-endian dimensions (rows,
cols), then ``rows * cols`` IEEE-754 doubles, little-endian, row-major.
CSV is the text alternative; values are written with 17 significant digits
so that round-trips are bit exact.
"""

import struct

import numpy as np

__all__ = ["write_lram", "read_lram", "write_csv_matrix", "read_csv_matrix",
           "write_matrix", "read_matrix"]

_MAGIC = b"LRAM"
_VERSION = 1


def write_lram(path, M):
    M = np.ascontiguousarray(np.asarray(M, dtype="<f8"))
    if M.ndim != 2:
        raise ValueError("expected a 2-D array")
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(bytes([_VERSION]))
        fh.write(struct.pack("<QQ", M.shape[0], M.shape[1]))
        fh.write(M.tobytes(order="C"))


def read_lram(path):
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != _MAGIC:
            raise ValueError(f"not an LRAM file (magic {magic!r})")
        version = fh.read(1)[0]
        if version != _VERSION:
            raise ValueError(f"unsupported LRAM version {version}")
        rows, cols = struct.unpack("<QQ", fh.read(16))
        data = np.frombuffer(fh.read(rows * cols * 8), dtype="<f8")
        if data.size != rows * cols:
            raise ValueError("truncated LRAM file")
    return data.reshape(rows, cols).astype(float)


def write_csv_matrix(path, M):
    M = np.asarray(M, dtype=float)
    with open(path, "w") as fh:
        for row in M:
            fh.write(",".join(f"{v:.17g}" for v in row))
            fh.write("\n")


def read_csv_matrix(path):
    return np.atleast_2d(np.loadtxt(path, delimiter=",", dtype=float))


def write_matrix(path, M):
    """Dispatch on extension: .lram binary, anything else CSV."""
    if str(path).endswith(".lram"):
        write_lram(path, M)
    else:
        write_csv_matrix(path, M)


def read_matrix(path):
    if str(path).endswith(".lram"):
        return read_lram(path)
    return read_csv_matrix(path)
