"""Benchmark port-Hamiltonian models: DC motor and mass-spring-damper chain."""

from dataclasses import dataclass

import numpy as np

from .systems import PHSystem

__all__ = ["DcMotorConfig", "MsdConfig", "dc_motor", "msd_chain"]


@dataclass
class DcMotorConfig:
    """DC motor parameters: winding resistance/inductance, rotor friction and
    inertia, and the electromotive coupling constant."""

    resistance: float = 2.0
    inductance: float = 1.0
    friction: float = 1.0
    inertia: float = 2.0
    coupling: float = 1.0

    def __post_init__(self):
        for name in ("resistance", "inductance", "friction", "inertia"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")


def dc_motor(cfg=None):
    """Two-state DC motor with state (flux, angular momentum) and voltage input.

    J = [[0, -k], [k, 0]], R = diag(r, b), Q = diag(1/l, 1/j), B = (1, 0)^T.
    """
    cfg = cfg or DcMotorConfig()
    k = cfg.coupling
    J = np.array([[0.0, -k], [k, 0.0]])
    R = np.diag([cfg.resistance, cfg.friction])
    Q = np.diag([1.0 / cfg.inductance, 1.0 / cfg.inertia])
    B = np.array([[1.0], [0.0]])
    return PHSystem(J=J, R=R, Q=Q, B=B)


@dataclass
class MsdConfig:
    """Chain of masses coupled by springs with dampers on each mass.

    The defaults (mass 4, stiffness 4, damping 1, forces on the first two
    masses) are the conventional configuration of this benchmark; results
    that depend on the numerical rank of the chain, such as its numerically
    minimal dimension, are tied to these exact values.
    """

    n_masses: int = 5
    mass: float = 4.0
    stiffness: float = 4.0
    damping: float = 1.0

    def __post_init__(self):
        if self.n_masses < 2:
            raise ValueError("need at least 2 masses (forces act on the first two)")
        for name in ("mass", "stiffness", "damping"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")


def msd_chain(cfg=None):
    """Mass-spring-damper chain as a pH system of dimension n = 2 * n_masses.

    The state interleaves displacement and momentum per mass; Q carries the
    spring stiffnesses (tridiagonal in the displacement block) and inverse
    masses, R the damper coefficients on the momentum states, and J the
    canonical displacement/momentum pairing.  Forces act on masses 1 and 2,
    outputs are the collocated velocities.
    """
    cfg = cfg or MsdConfig()
    nm = cfg.n_masses
    n = 2 * nm
    k, m, d = cfg.stiffness, cfg.mass, cfg.damping
    J = np.zeros((n, n))
    R = np.zeros((n, n))
    Q = np.zeros((n, n))
    Q[0, 0] = k
    for i in range(nm):
        if i != 0:
            Q[2 * i, 2 * i] = 2.0 * k
        Q[2 * i + 1, 2 * i + 1] = 1.0 / m
        if i != nm - 1:
            Q[2 * i, 2 * i + 2] = -k
            Q[2 * i + 2, 2 * i] = -k
        R[2 * i + 1, 2 * i + 1] = d
        J[2 * i, 2 * i + 1] = 1.0
    J = J - J.T
    B = np.zeros((n, 2))
    B[1, 0] = 1.0
    B[3, 1] = 1.0
    return PHSystem(J=J, R=R, Q=Q, B=B)
