"""Weyl-Heisenberg displacement operators and SIC-POVM construction.

The displacement operators are built from the cyclic shift X and the clock
phase Z,

    D_(p1,p2) = tau^(p1 p2) X^p1 Z^p2,    tau = -exp(i pi / d),

and a SIC-POVM in dimension d is the orbit of a fiducial projector under all
d^2 displacements, subnormalized by 1/d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .numerics import DEFAULT_TOL


def omega(d: int) -> complex:
    return np.exp(2j * np.pi / d)


def tau(d: int) -> complex:
    return -np.exp(1j * np.pi / d)


@lru_cache(maxsize=None)
def _shift_clock(d: int):
    x = np.roll(np.eye(d, dtype=complex), 1, axis=0)
    z = np.diag(omega(d) ** np.arange(d))
    return x, z


def displacement(p1: int, p2: int, d: int) -> np.ndarray:
    """Displacement operator D_(p1,p2) in dimension d.

    The indices may be arbitrary integers; the defining formula is applied
    verbatim, so for even d the operator picks up a sign under index shifts
    by d (period 2d), while reduced indices 0 <= p < d give the standard
    d^2 operators.
    """
    if d < 2:
        raise ValueError("dimension must be at least 2")
    x, z = _shift_clock(d)
    ph = tau(d) ** ((p1 * p2) % (2 * d))
    return ph * np.linalg.matrix_power(x, p1 % d) @ np.linalg.matrix_power(z, p2 % d)


@lru_cache(maxsize=None)
def displacement_table(d: int) -> np.ndarray:
    """All d^2 displacements as an array indexed by [p1, p2]."""
    t = np.empty((d, d, d, d), dtype=complex)
    for p1 in range(d):
        for p2 in range(d):
            t[p1, p2] = displacement(p1, p2, d)
    return t


def symplectic_form(p, q) -> int:
    """<p, q> = p2 q1 - p1 q2."""
    return p[1] * q[0] - p[0] * q[1]


def weyl_commutation_check(d: int, tol: float = DEFAULT_TOL) -> bool:
    """Check D_p D_q = tau^<p,q> D_(p+q) over all index pairs.

    The sum p+q is fed to the defining formula unreduced, which fixes the
    sign convention for even d.
    """
    for p1 in range(d):
        for p2 in range(d):
            dp = displacement(p1, p2, d)
            for q1 in range(d):
                for q2 in range(d):
                    dq = displacement(q1, q2, d)
                    lhs = dp @ dq
                    ph = tau(d) ** (symplectic_form((p1, p2), (q1, q2)) % (2 * d))
                    rhs = ph * displacement(p1 + q1, p2 + q2, d)
                    if np.max(np.abs(lhs - rhs)) > tol:
                        return False
    return True


@dataclass(frozen=True)
class SicConstants:
    """Closed-form constants appearing throughout the d = 4 analysis."""

    G: float = (math.sqrt(5.0) - 1.0) / 2.0

    @property
    def B(self) -> float:
        return 1.0 / math.sqrt(5.0)

    @property
    def A_plus(self) -> float:
        return math.sqrt(1.0 + math.sqrt(self.G)) / math.sqrt(5.0)

    @property
    def A_minus(self) -> float:
        return math.sqrt(1.0 - math.sqrt(self.G)) / math.sqrt(5.0)

    @property
    def G_plus(self) -> float:
        return math.sqrt(1.0 + self.G) / math.sqrt(5.0)

    @property
    def G_minus(self) -> float:
        return math.sqrt(1.0 - self.G) / math.sqrt(5.0)

    def A(self, sign: int) -> float:
        return self.A_plus if sign > 0 else self.A_minus

    def Gpm(self, sign: int) -> float:
        return self.G_plus if sign > 0 else self.G_minus


CONSTANTS = SicConstants()


def fiducial_ket_d4() -> np.ndarray:
    """The dimension-4 fiducial ket whose displacement orbit is a SIC."""
    g = CONSTANTS.G
    e = np.exp(1j * np.pi / 4)
    v = np.array(
        [
            1.0 + e.conjugate(),
            e + 1j * g ** (-1.5),
            1.0 - e.conjugate(),
            e - 1j * g ** (-1.5),
        ]
    )
    return v / (2.0 * math.sqrt(3.0 + g))


def is_fiducial(v, d: int | None = None, tol: float = DEFAULT_TOL) -> bool:
    """True iff v is a unit ket with |<v|D_p v>|^2 = 1/(d+1) for all p != 0."""
    v = np.asarray(v, dtype=complex).ravel()
    if d is None:
        d = v.size
    if v.size != d:
        raise ValueError("ket has length %d, expected %d" % (v.size, d))
    if abs(np.vdot(v, v) - 1.0) > tol:
        raise ValueError("ket is not normalized")
    target = 1.0 / (d + 1)
    tbl = displacement_table(d)
    for p1 in range(d):
        for p2 in range(d):
            if p1 == 0 and p2 == 0:
                continue
            if abs(abs(np.vdot(v, tbl[p1, p2] @ v)) ** 2 - target) > tol:
                return False
    return True


@dataclass
class SicPovm:
    """A SIC-POVM given as d^2 trace-1 projectors (effects are these over d).

    States are ordered lexicographically in the displacement index (p1, p2)
    when produced by :func:`generate_sic`.
    """

    d: int
    states: np.ndarray  # (d*d, d, d)
    label: str = ""

    def __post_init__(self):
        self.states = np.asarray(self.states, dtype=complex)
        if self.states.shape != (self.d * self.d, self.d, self.d):
            raise ValueError("expected %d states of shape (%d, %d)" % (self.d**2, self.d, self.d))

    def __len__(self) -> int:
        return self.states.shape[0]


def generate_sic(v, d: int | None = None, label: str = "") -> SicPovm:
    """Displacement orbit of a fiducial ket as trace-1 projectors.

    Raises ValueError if the ket fails the fiducial condition.
    """
    v = np.asarray(v, dtype=complex).ravel()
    if d is None:
        d = v.size
    if not is_fiducial(v, d):
        raise ValueError("input ket is not a fiducial vector")
    tbl = displacement_table(d)
    states = np.empty((d * d, d, d), dtype=complex)
    for p1 in range(d):
        for p2 in range(d):
            w = tbl[p1, p2] @ v
            states[p1 * d + p2] = np.outer(w, w.conj())
    return SicPovm(d=d, states=states, label=label)


@dataclass
class SicReport:
    is_sic: bool
    max_fidelity_deviation: float
    max_state_deviation: float
    completeness_deviation: float


def verify_sic(states, d: int, tol: float = DEFAULT_TOL) -> SicReport:
    """Certify the defining SIC properties of a set of d^2 states.

    Checks each state is a Hermitian trace-1 rank-1 projector, pairwise
    fidelities equal 1/(d+1), and the states sum to d times the identity.
    """
    states = np.asarray(states, dtype=complex)
    if states.shape != (d * d, d, d):
        raise ValueError("expected %d states, got shape %r" % (d * d, states.shape))
    sdev = 0.0
    for rho in states:
        sdev = max(sdev, np.max(np.abs(rho - rho.conj().T)))
        sdev = max(sdev, abs(np.trace(rho) - 1.0))
        sdev = max(sdev, np.max(np.abs(rho @ rho - rho)))
    target = 1.0 / (d + 1)
    fdev = 0.0
    for j in range(d * d):
        for k in range(j + 1, d * d):
            fdev = max(fdev, abs(np.trace(states[j] @ states[k]).real - target))
    cdev = float(np.max(np.abs(states.sum(axis=0) - d * np.eye(d))))
    ok = sdev <= tol and fdev <= tol and cdev <= tol
    return SicReport(ok, float(fdev), float(sdev), cdev)


def state_overlap(a, b) -> float:
    """|tr(a b)| for two trace-1 projectors (the pair fidelity)."""
    return float(abs(np.trace(np.asarray(a) @ np.asarray(b))))
