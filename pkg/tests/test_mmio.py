"""MatrixMarket array I/O round trips."""

import numpy as np

from phhinf import mmio


def test_header_and_round_trip(tmp_path):
    rng = np.random.default_rng(21)
    A = rng.standard_normal((5, 3))
    path = tmp_path / "a.mtx"
    mmio.write_matrix(path, A)
    first = path.read_text(encoding="ascii").splitlines()[0]
    assert first == "%%MatrixMarket matrix array real general"
    back = mmio.read_matrix(path)
    assert back.shape == A.shape
    assert (back == A).all()  # precision 17 makes float64 round trips exact


def test_symmetric_matrix_stays_general(tmp_path):
    # the writer must not silently switch to a symmetric storage scheme
    A = np.eye(4)
    path = tmp_path / "i.mtx"
    mmio.write_matrix(path, A)
    assert "general" in path.read_text(encoding="ascii").splitlines()[0]
    assert (mmio.read_matrix(path) == A).all()


def test_write_is_deterministic(tmp_path):
    A = np.random.default_rng(22).standard_normal((4, 4))
    p1, p2 = tmp_path / "1.mtx", tmp_path / "2.mtx"
    mmio.write_matrix(p1, A)
    mmio.write_matrix(p2, A.copy())
    assert p1.read_bytes() == p2.read_bytes()
