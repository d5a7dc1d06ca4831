"""MatrixMarket array I/O (real, general) for dense matrices."""

import io

import numpy as np
import scipy.io

from .linalg import as_matrix

HEADER = "%%MatrixMarket matrix array real general"


def write_matrix(path, a):
    """Write a dense real matrix in MatrixMarket array format."""
    a = as_matrix(a, "matrix")
    buf = io.BytesIO()
    scipy.io.mmwrite(buf, a, field="real", precision=17, symmetry="general")
    text = buf.getvalue().decode("ascii")
    if not text.startswith(HEADER):  # pragma: no cover - guards scipy changes
        raise RuntimeError("unexpected MatrixMarket header from writer")
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)


def read_matrix(path):
    """Read a dense real matrix from MatrixMarket array format."""
    a = scipy.io.mmread(path)
    return as_matrix(np.asarray(a, dtype=float), str(path))
