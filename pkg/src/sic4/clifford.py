"""Symplectic parametrization of the (extended) Clifford group.

For even d the projective Clifford group is the image of the semidirect
product SL(2, Z_2d) x (Z_d)^2 under a homomorphism sending (F, chi) to a
unitary U with

    U D_p U^dag = omega^<chi, F p> D_(F p).

Antiunitary elements carry det F = -1 and factor through complex
conjugation.  The kernel of the map (for even d) has eight elements, so
iterating over all (F, chi) pairs and deduplicating projectively yields the
full projective group; in dimension 4 that is 768 unitary elements and 1536
including the antiunitary coset.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .numerics import DEFAULT_TOL, GroupElement, canonical_key, conjugate
from .weyl_heisenberg import displacement_table, omega, symplectic_form, tau


@dataclass(frozen=True)
class SymplecticPair:
    """An element (F, chi) of ESL(2, Z_dbar) x (Z_d)^2.

    F is stored as a row-major 4-tuple (a, b, c, e) meaning [[a, b], [c, e]]
    with entries mod dbar (= 2d for even d, d for odd d); chi is a pair mod d.
    """

    F: tuple
    chi: tuple
    d: int

    def __post_init__(self):
        db = self.dbar
        object.__setattr__(self, "F", tuple(x % db for x in self.F))
        object.__setattr__(self, "chi", tuple(x % self.d for x in self.chi))
        if len(self.F) != 4 or len(self.chi) != 2:
            raise ValueError("F must have 4 entries and chi 2")
        if self.det not in (1, db - 1):
            raise ValueError("det F must be +-1 mod %d, got %d" % (db, self.det))

    @property
    def dbar(self) -> int:
        return 2 * self.d if self.d % 2 == 0 else self.d

    @property
    def det(self) -> int:
        a, b, c, e = self.F
        return (a * e - b * c) % self.dbar

    @property
    def antiunitary(self) -> bool:
        return self.det == self.dbar - 1

    def fmat(self) -> np.ndarray:
        return np.array(self.F, dtype=int).reshape(2, 2)

    def act(self, p) -> tuple:
        """Image of a displacement index under F, mod d."""
        a, b, c, e = self.F
        return ((a * p[0] + b * p[1]) % self.d, (c * p[0] + e * p[1]) % self.d)


def semidirect_product(x: SymplecticPair, y: SymplecticPair) -> SymplecticPair:
    """(F1, chi1) (F2, chi2) = (F1 F2, chi1 + F1 chi2)."""
    if x.d != y.d:
        raise ValueError("mixed dimensions")
    a, b, c, e = x.F
    f = (
        a * y.F[0] + b * y.F[2],
        a * y.F[1] + b * y.F[3],
        c * y.F[0] + e * y.F[2],
        c * y.F[1] + e * y.F[3],
    )
    chi = (x.chi[0] + a * y.chi[0] + b * y.chi[1], x.chi[1] + c * y.chi[0] + e * y.chi[1])
    return SymplecticPair(f, chi, x.d)


def symplectic_inverse(x: SymplecticPair) -> SymplecticPair:
    a, b, c, e = x.F
    det = a * e - b * c
    dinv = pow(det % x.dbar, -1, x.dbar)
    fi = (e * dinv, -b * dinv, -c * dinv, a * dinv)
    chi = (
        -(fi[0] * x.chi[0] + fi[1] * x.chi[1]),
        -(fi[2] * x.chi[0] + fi[3] * x.chi[1]),
    )
    return SymplecticPair(fi, chi, x.d)


def _coprime(a: int, n: int) -> bool:
    return math.gcd(a % n, n) == 1


def _gauss_sum_unitary(F: tuple, d: int) -> np.ndarray:
    """V_F for F = [[alpha, beta], [gamma, delta]] with beta invertible."""
    alpha, beta, _gamma, delta = F
    db = 2 * d if d % 2 == 0 else d
    binv = pow(beta % db, -1, db)
    r, s = np.indices((d, d))
    expo = (binv * (alpha * s * s - 2 * r * s + delta * r * r)) % db
    return tau(d) ** expo / math.sqrt(d)


def _unitary_from_symplectic(F: tuple, d: int) -> np.ndarray:
    """V_F for any F with det = +1, via factorization when beta is singular."""
    db = 2 * d if d % 2 == 0 else d
    alpha, beta, gamma, delta = (x % db for x in F)
    if _coprime(beta, db):
        return _gauss_sum_unitary((alpha, beta, gamma, delta), d)
    for x in range(db):
        if _coprime(delta + x * beta, db):
            break
    else:
        raise ValueError("no admissible factorization shift found")
    f1 = (0, -1 % db, 1, x)
    f2 = ((gamma + x * alpha) % db, (delta + x * beta) % db, -alpha % db, -beta % db)
    return _gauss_sum_unitary(f1, d) @ _gauss_sum_unitary(f2, d)


def to_operator(pair: SymplecticPair) -> GroupElement:
    """The unitary or antiunitary operator representing (F, chi)."""
    d = pair.d
    db = pair.dbar
    if pair.antiunitary:
        j = SymplecticPair((1, 0, 0, -1), (0, 0), d)
        w = to_operator(semidirect_product(pair, j))
        return GroupElement(w.matrix, True)
    v = _unitary_from_symplectic(pair.F, d)
    dchi = displacement_table(d)[pair.chi[0] % d, pair.chi[1] % d]
    return GroupElement(dchi @ v, False)


@dataclass(frozen=True, eq=False)
class CliffordElement:
    source: SymplecticPair
    op: GroupElement


def conjugation_action(pair: SymplecticPair, p, tol: float = DEFAULT_TOL):
    """Phase exponent and image index of D_p under conjugation by (F, chi).

    Returns (e, q) with U D_p U^-1 = omega^e D_q, both reduced mod d.  The
    operator identity itself is exact only for the mod-2d representative of
    F p (for even d the displacement index has period 2d, and reduction mod
    d can cost a sign); it is verified in that form and a ValueError is
    raised on failure.
    """
    from .weyl_heisenberg import displacement

    d = pair.d
    db = pair.dbar
    a, b, c, e_ = pair.F
    big = (a * p[0] + b * p[1], c * p[0] + e_ * p[1])
    qf = (big[0] % db, big[1] % db)
    e = symplectic_form(pair.chi, qf) % d
    u = to_operator(pair)
    dp = displacement_table(d)[p[0] % d, p[1] % d]
    lhs = conjugate(u, dp)
    rhs = omega(d) ** e * displacement(qf[0], qf[1], d)
    if np.max(np.abs(lhs - rhs)) > tol:
        raise ValueError("conjugation law violated for %r at p=%r" % (pair, p))
    return e, (big[0] % d, big[1] % d)


@lru_cache(maxsize=None)
def symplectic_group_matrices(db: int, det: int = 1) -> tuple:
    """All 2x2 matrices over Z_db with the given determinant (as 4-tuples)."""
    out = []
    for a, b, c, e in itertools.product(range(db), repeat=4):
        if (a * e - b * c) % db == det % db:
            out.append((a, b, c, e))
    return tuple(out)


def kernel_pairs(d: int) -> list:
    """The eight (F, chi) pairs mapping to the projective identity (even d)."""
    if d % 2 != 0:
        raise ValueError("kernel enumeration implemented for even d only")
    out = []
    for r, s, t in itertools.product((0, 1), repeat=3):
        f = (1 + r * d, s * d, t * d, 1 + r * d)
        chi = ((s * d) // 2, (t * d) // 2)
        out.append(SymplecticPair(f, chi, d))
    return out


@lru_cache(maxsize=None)
def enumerate_projective_clifford(d: int = 4, extended: bool = False) -> tuple:
    """All projectively distinct Clifford elements as CliffordElements.

    Iterates every (F, chi) pair in the chosen determinant sector(s) and
    deduplicates operators modulo global phase.  For d = 4 this yields 768
    unitary elements, 1536 with extended=True.
    """
    if d != 4:
        raise ValueError("group enumeration is calibrated for d = 4")
    db = 2 * d
    dets = (1, db - 1) if extended else (1,)
    seen = {}
    for det in dets:
        for f in symplectic_group_matrices(db, det):
            for chi in itertools.product(range(d), repeat=2):
                pair = SymplecticPair(f, chi, d)
                op = to_operator(pair)
                key = (op.antiunitary, canonical_key(op.matrix))
                if key not in seen:
                    seen[key] = CliffordElement(pair, op)
    return tuple(seen.values())


def match_projective(m: np.ndarray, stack: np.ndarray, tol: float = 1e-6) -> int:
    """Index of the unitary in ``stack`` projectively equal to m, else -1."""
    d = m.shape[0]
    scores = np.abs(np.einsum("nij,ij->n", stack.conj(), m))
    i = int(np.argmax(scores))
    return i if scores[i] >= d - tol else -1
