"""Benchmark model constructions."""

import numpy as np
import pytest

from phhinf import (
    DcMotorConfig,
    MsdConfig,
    check_lure,
    dc_motor,
    is_asymptotically_stable,
    is_minimal,
    msd_chain,
    ph_to_ss,
)


def test_dc_motor_matrices():
    dc = dc_motor()
    assert (dc.J == [[0.0, -1.0], [1.0, 0.0]]).all()
    assert (dc.R == np.diag([2.0, 1.0])).all()
    assert (dc.Q == np.diag([1.0, 0.5])).all()
    assert (dc.B == [[1.0], [0.0]]).all()
    ss = ph_to_ss(dc)
    assert np.allclose(ss.A, [[-2.0, -0.5], [1.0, -0.5]])
    assert np.linalg.svd(dc.B, compute_uv=False).min() == 1.0
    assert is_minimal(ss)[0]
    check_lure(ss, dc.Q)


def test_dc_motor_rejects_bad_config():
    with pytest.raises(ValueError):
        dc_motor(DcMotorConfig(inductance=0.0))


def test_msd_structure():
    sys = msd_chain(MsdConfig(n_masses=5))
    assert sys.n == 10 and sys.m == 2
    assert is_asymptotically_stable(ph_to_ss(sys).A)
    assert is_minimal(ph_to_ss(sys))[0]
    # displacement/momentum pairing and damper placement
    assert sys.J[0, 1] == 1.0 and sys.J[1, 0] == -1.0
    assert sys.R[1, 1] == 1.0 and sys.R[0, 0] == 0.0
    # stiffness coupling is tridiagonal on displacement states
    assert sys.Q[0, 0] == 4.0 and sys.Q[2, 2] == 8.0 and sys.Q[0, 2] == -4.0
    assert sys.Q[1, 1] == 0.25
    assert sys.B[1, 0] == 1.0 and sys.B[3, 1] == 1.0


def test_msd_scales_and_validates():
    for nm in (2, 15, 100):
        sys = msd_chain(MsdConfig(n_masses=nm))
        assert sys.n == 2 * nm  # PHSystem invariants run in the constructor
    with pytest.raises(ValueError):
        msd_chain(MsdConfig(n_masses=1))
    with pytest.raises(ValueError):
        msd_chain(MsdConfig(damping=-1.0))
