"""Reassembling the 256 fiducials into additional SIC-POVMs.

Conjugation by the abelian group {I, X^2, Z^2, X^2 Z^2} splits every SIC
of the family into four 4-state blocks.  Matching blocks across the four
SICs of one row of the label grid at cross-fidelity 1/5 yields 16 new
SICs, and a clique scan over the fidelity graph certifies that no other
regrouping exists.  The new family is covariant under a conjugate copy
of the displacement group, sitting inside the same Clifford group.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import networkx as nx
import numpy as np

from .clifford import SymplecticPair, kernel_pairs, to_operator
from .numerics import proj_equal
from .orbits import LABEL_GRID, FiducialOrbit, enumerate_orbit, fiducial_projector
from .weyl_heisenberg import SicPovm, verify_sic

# translations implementing conjugation by I, X^2, Z^2, X^2 Z^2
_H_SHIFTS = ((0, 0), (2, 0), (0, 2), (2, 2))


@dataclass(frozen=True)
class HOrbit:
    sic_label: int
    members: tuple  # 4 global projector indices, sorted


def h_orbits(sic_label: int) -> list:
    """The four blocks of one SIC under the order-4 translation group."""
    if not 1 <= sic_label <= 16:
        raise ValueError("label out of range")
    base = (sic_label - 1) * 16
    orbits = []
    for p1, p2 in ((0, 0), (0, 1), (1, 0), (1, 1)):
        members = tuple(
            sorted(base + 4 * ((p1 + a) % 4) + ((p2 + b) % 4) for a, b in _H_SHIFTS)
        )
        orbits.append(HOrbit(sic_label, members))
    return orbits


def _cross_fidelities(orbit: FiducialOrbit, a: HOrbit, b: HOrbit) -> np.ndarray:
    pa = orbit.projectors[list(a.members)].reshape(4, 16)
    pb = orbit.projectors[list(b.members)].reshape(4, 16)
    return np.real(pa.conj() @ pb.T)


def regroup_row(row, orbit: FiducialOrbit | None = None, tol: float = 1e-9):
    """Assemble the four new SICs hiding in one row of the label grid.

    For each block of the first SIC there is exactly one block in each of
    the other three SICs at uniform cross-fidelity 1/5; anything else
    fails fast.  Returns (sics, matching) where matching[i] lists the four
    HOrbits composing the i-th new SIC.
    """
    row = tuple(row)
    if sorted(row) not in [sorted(r) for r in LABEL_GRID]:
        raise ValueError("labels %r do not form a row of the grid" % (row,))
    if orbit is None:
        orbit = enumerate_orbit()
    blocks = {lab: h_orbits(lab) for lab in row}
    sics, matching = [], []
    for seed in blocks[row[0]]:
        chosen = [seed]
        for lab in row[1:]:
            hits = [
                b
                for b in blocks[lab]
                if np.max(np.abs(_cross_fidelities(orbit, seed, b) - 0.2)) <= tol
            ]
            if len(hits) != 1:
                raise ValueError(
                    "block %r has %d fidelity-1/5 partners in SIC %d, expected 1"
                    % (seed.members, len(hits), lab)
                )
            chosen.append(hits[0])
        indices = sorted(itertools.chain.from_iterable(b.members for b in chosen))
        states = orbit.projectors[indices]
        report = verify_sic(states, 4, tol)
        if not report.is_sic:
            raise ValueError("assembled 16-state set fails the SIC certificate")
        sics.append(SicPovm(d=4, states=states))
        matching.append(tuple(chosen))
    return sics, matching


def regrouped_family(orbit: FiducialOrbit | None = None, tol: float = 1e-9):
    """All 16 regrouped SICs with labels 17..32, plus the matching table."""
    if orbit is None:
        orbit = enumerate_orbit()
    sics, matching = [], []
    for r, row in enumerate(LABEL_GRID):
        row_sics, row_match = regroup_row(row, orbit, tol)
        for j, (s, m) in enumerate(zip(row_sics, row_match)):
            sics.append(SicPovm(d=4, states=s.states, label="sic-%d" % (17 + 4 * r + j)))
            matching.append(m)
    return sics, matching


def fidelity_graph(orbit: FiducialOrbit, vertices, tol: float = 1e-9) -> nx.Graph:
    flat = orbit.projectors[list(vertices)].reshape(len(vertices), 16)
    fid = np.real(flat.conj() @ flat.T)
    g = nx.Graph()
    g.add_nodes_from(vertices)
    rows, cols = np.nonzero(np.abs(fid - 0.2) <= tol)
    g.add_edges_from(
        (vertices[i], vertices[j]) for i, j in zip(rows, cols) if i < j
    )
    return g


def exhaustive_regroup_scan(
    orbit: FiducialOrbit | None = None, full_scan: bool = False, tol: float = 1e-9
) -> int:
    """Count the 16-state SICs contained in the fidelity-1/5 graph.

    Default mode scans each row's 64 states separately (regrouping cannot
    mix rows); full_scan runs the clique search over all 256 vertices.
    Every size-16 clique found is re-certified with verify_sic.
    """
    if orbit is None:
        orbit = enumerate_orbit()
    if full_scan:
        vertex_sets = [list(range(256))]
    else:
        vertex_sets = [
            [(lab - 1) * 16 + k for lab in row for k in range(16)]
            for row in LABEL_GRID
        ]
    found = set()
    for vertices in vertex_sets:
        g = fidelity_graph(orbit, vertices, tol)
        for clique in nx.find_cliques(g):
            if len(clique) < 16:
                continue
            if len(clique) > 16:
                raise AssertionError("clique larger than a SIC cannot exist")
            key = tuple(sorted(clique))
            if key in found:
                continue
            if not verify_sic(orbit.projectors[list(key)], 4, tol).is_sic:
                raise AssertionError("16-clique fails the SIC certificate")
            found.add(key)
    return len(found)


X_PRIME_PAIR = SymplecticPair(F=(3, 0, 2, 3), chi=(0, 1), d=4)
Z_PRIME_PAIR = SymplecticPair(F=(3, 2, 0, 3), chi=(3, 0), d=4)

X_PRIME_MATRIX = np.array(
    [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0], [0, -1, 0, 0]], dtype=complex
)
Z_PRIME_MATRIX = 0.5 * np.array(
    [
        [0, 1 + 1j, 0, -1 + 1j],
        [1 + 1j, 0, -1 + 1j, 0],
        [0, -1 + 1j, 0, 1 + 1j],
        [-1 + 1j, 0, 1 + 1j, 0],
    ],
    dtype=complex,
)

EQUIVALENCE_MATRIX = 0.5 * np.array(
    [
        [-1j, -1, -1j, -1],
        [1, -1j, -1, 1j],
        [-1j, 1, -1j, 1],
        [1, 1j, -1, -1j],
    ],
    dtype=complex,
)


def dprime_generators() -> tuple:
    """Shift/clock generators of the regrouped family's covariance group.

    Returned as literal matrices, checked projectively against their
    symplectic-pair parametrization.
    """
    for pair, literal in ((X_PRIME_PAIR, X_PRIME_MATRIX), (Z_PRIME_PAIR, Z_PRIME_MATRIX)):
        if not proj_equal(to_operator(pair).matrix, literal):
            raise AssertionError("parametrized operator disagrees with its literal matrix")
    return X_PRIME_MATRIX.copy(), Z_PRIME_MATRIX.copy()


def dprime_elements() -> np.ndarray:
    """The 16 projective elements of the conjugate displacement group."""
    xp, zp = dprime_generators()
    out = np.empty((16, 4, 4), dtype=complex)
    for a in range(4):
        for b in range(4):
            out[4 * a + b] = np.linalg.matrix_power(xp, a) @ np.linalg.matrix_power(zp, b)
    return out


def equivalence_unitary() -> np.ndarray:
    """The unitary conjugating the displacement group onto its regrouped
    copy while fixing the fiducial projector."""
    u = EQUIVALENCE_MATRIX
    if np.max(np.abs(u @ u.conj().T - np.eye(4))) > 1e-12:
        raise AssertionError("equivalence matrix is not unitary")
    rho = fiducial_projector()
    if not proj_equal(u @ rho @ u.conj().T, rho):
        raise AssertionError("equivalence matrix moves the fiducial state")
    return u.copy()


# ---------------------------------------------------------------------------
# census of displacement-type subgroups inside the projective Clifford group
#
# elements are cosets of the 8-element kernel; a coset is named by the
# lexicographically least (F, chi) it contains, so tuples compare fast.


def _mul(a, b):
    (f0, f1, f2, f3), (c0, c1) = a
    (g0, g1, g2, g3), (d0, d1) = b
    return (
        (
            (f0 * g0 + f1 * g2) % 8,
            (f0 * g1 + f1 * g3) % 8,
            (f2 * g0 + f3 * g2) % 8,
            (f2 * g1 + f3 * g3) % 8,
        ),
        ((c0 + f0 * d0 + f1 * d1) % 4, (c1 + f2 * d0 + f3 * d1) % 4),
    )


@lru_cache(maxsize=1)
def _kernel_tuples():
    return tuple((p.F, p.chi) for p in kernel_pairs(4))


def _canon(g):
    return min(_mul(g, k) for k in _kernel_tuples())


def _inv(g):
    (f0, f1, f2, f3), (c0, c1) = g
    # det is 1 mod 8 for the unitary sector
    h = (f3 % 8, (-f1) % 8, (-f2) % 8, f0 % 8)
    d0 = (-(h[0] * c0 + h[1] * c1)) % 4
    d1 = (-(h[2] * c0 + h[3] * c1)) % 4
    return (h, (d0, d1))


@lru_cache(maxsize=1)
def _quotient_elements():
    from .clifford import symplectic_group_matrices

    els = set()
    for f in symplectic_group_matrices(8, det=1):
        for chi in itertools.product(range(4), repeat=2):
            els.add(_canon((f, chi)))
    if len(els) != 768:
        raise AssertionError("projective Clifford quotient should have 768 elements")
    return sorted(els)


def _order4_elements(identity):
    out = []
    for g in _quotient_elements():
        g2 = _canon(_mul(g, g))
        if g2 == identity or g == identity:
            continue
        if _canon(_mul(g2, g2)) == identity:
            out.append(g)
    return out


def _commutator_phase(a: np.ndarray, b: np.ndarray) -> complex:
    return complex(np.trace(a @ b @ a.conj().T @ b.conj().T)) / 4.0


def hw_conjugate_subgroup_census() -> tuple:
    """(total, normal) count of order-16 subgroups of the projective
    Clifford group unitarily equivalent to the displacement group.

    Candidates are generated pairs of commuting order-4 cosets spanning 16
    elements; equivalence additionally requires the operator commutator of
    the generators to be a primitive fourth root of unity, which pins the
    commutation structure down to that of the displacement pair.
    """
    identity = _canon(((1, 0, 0, 1), (0, 0)))
    quartic = _order4_elements(identity)
    subgroups = {}
    for x, z in itertools.combinations(quartic, 2):
        if _canon(_mul(x, z)) != _canon(_mul(z, x)):
            continue
        els = frozenset(
            _canon(_mul(_power(x, a, identity), _power(z, b, identity)))
            for a in range(4)
            for b in range(4)
        )
        if len(els) != 16 or els in subgroups:
            continue
        ux = to_operator(SymplecticPair(F=x[0], chi=(x[1][0] % 4, x[1][1] % 4), d=4)).matrix
        uz = to_operator(SymplecticPair(F=z[0], chi=(z[1][0] % 4, z[1][1] % 4), d=4)).matrix
        c = _commutator_phase(ux, uz)
        subgroups[els] = abs(c.imag) > 0.5  # primitive pairing
    hw_type = [s for s, primitive in subgroups.items() if primitive]
    gens = [
        _canon(((1, 1, 0, 1), (0, 0))),
        _canon(((0, 7, 1, 0), (0, 0))),
        _canon(((1, 0, 0, 1), (1, 0))),
        _canon(((1, 0, 0, 1), (0, 1))),
    ]
    normal = []
    for s in hw_type:
        if all(
            all(_canon(_mul(_mul(g, m), _inv(g))) in s for m in s) for g in gens
        ):
            normal.append(s)
    return len(hw_type), len(normal), hw_type, normal


def _power(g, n, identity):
    acc = identity
    for _ in range(n):
        acc = _canon(_mul(acc, g))
    return acc


def displacement_coset(p1: int, p2: int):
    """Coset name of the displacement with index (p1, p2)."""
    return _canon(((1, 0, 0, 1), (p1 % 4, p2 % 4)))


def pair_coset(pair: SymplecticPair):
    return _canon((pair.F, pair.chi))
