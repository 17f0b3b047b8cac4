import numpy as np
import pytest

from sic4.clifford import enumerate_projective_clifford, to_operator
from sic4.numerics import proj_equal, projective_set_equal
from sic4.orbits import enumerate_orbit
from sic4.regrouping import (
    EQUIVALENCE_MATRIX,
    X_PRIME_MATRIX,
    X_PRIME_PAIR,
    Z_PRIME_MATRIX,
    Z_PRIME_PAIR,
    displacement_coset,
    dprime_elements,
    dprime_generators,
    equivalence_unitary,
    exhaustive_regroup_scan,
    fidelity_graph,
    h_orbits,
    hw_conjugate_subgroup_census,
    pair_coset,
    regroup_row,
    regrouped_family,
)
from sic4.weyl_heisenberg import displacement, state_overlap, verify_sic


def test_h_orbits_partition():
    for label in (1, 5, 12):
        orbs = h_orbits(label)
        assert len(orbs) == 4
        members = sorted(i for o in orbs for i in o.members)
        assert members == list(range((label - 1) * 16, label * 16))
        for o in orbs:
            assert len(o.members) == 4
            assert o.sic_label == label


def test_h_orbit_internal_fidelities():
    # within an H-orbit all pairs sit at fidelity 1/5: each block is a
    # candidate seed for a new SIC
    orbit = enumerate_orbit()
    for o in h_orbits(1):
        m = list(o.members)
        for i in range(4):
            for j in range(i + 1, 4):
                f = state_overlap(orbit.projectors[m[i]], orbit.projectors[m[j]])
                assert abs(f - 0.2) < 1e-9


def test_regroup_row():
    orbit = enumerate_orbit()
    sics, matching = regroup_row((1, 2, 3, 4), orbit)
    assert len(sics) == 4
    for s in sics:
        assert verify_sic(s.states, 4).is_sic
    assert len(matching) == 4
    for blocks in matching:
        assert sorted(b.sic_label for b in blocks) == [1, 2, 3, 4]


def test_regroup_row_rejects_non_row():
    with pytest.raises(ValueError):
        regroup_row((1, 2, 3, 5))


def test_regrouped_family():
    orbit = enumerate_orbit()
    sics, matching = regrouped_family(orbit)
    assert len(sics) == 16
    assert [s.label for s in sics] == ["sic-%d" % n for n in range(17, 33)]
    # every original state is used exactly once across the new family
    used = sorted(i for blocks in matching for b in blocks for i in b.members)
    assert used == list(range(256))


def test_new_sics_share_four_states_with_row_members():
    orbit = enumerate_orbit()
    sics, _ = regrouped_family(orbit)
    new = sics[0]  # built from row (1, 2, 3, 4)
    for label in (1, 2, 3, 4):
        old = orbit.sic(label)
        shared = 0
        for a in new.states:
            for b in old.states:
                if state_overlap(a, b) > 1 - 1e-9:
                    shared += 1
        assert shared == 4


def test_fidelity_graph_degree():
    orbit = enumerate_orbit()
    g = fidelity_graph(orbit, list(range(64)))
    assert g.number_of_nodes() == 64
    degs = {d for _, d in g.degree()}
    assert len(degs) == 1  # regular on a row's worth of states


def test_exhaustive_scan_counts():
    orbit = enumerate_orbit()
    assert exhaustive_regroup_scan(orbit, full_scan=False) == 32
    assert exhaustive_regroup_scan(orbit, full_scan=True) == 32


def test_dprime_generator_matrices():
    xp, zp = dprime_generators()
    assert proj_equal(xp, X_PRIME_MATRIX)
    assert proj_equal(zp, Z_PRIME_MATRIX)
    assert proj_equal(to_operator(X_PRIME_PAIR).matrix, X_PRIME_MATRIX)
    assert proj_equal(to_operator(Z_PRIME_PAIR).matrix, Z_PRIME_MATRIX)


def test_dprime_commutator_phase():
    # the printed generator pair commutes to -i (still a primitive fourth
    # root, so the group is displacement-type; the +i convention is met by
    # swapping in the adjoint)
    c = np.trace(Z_PRIME_MATRIX @ X_PRIME_MATRIX @ Z_PRIME_MATRIX.conj().T @ X_PRIME_MATRIX.conj().T) / 4
    assert abs(c + 1j) < 1e-12


def test_dprime_elements_distinct_from_displacements():
    dp = dprime_elements()
    assert dp.shape == (16, 4, 4)
    disp = np.stack([displacement(p1, p2, 4) for p1 in range(4) for p2 in range(4)])
    assert not projective_set_equal(dp, disp)
    # both contain the identity coset
    assert any(proj_equal(m, np.eye(4) + 0j) for m in dp)


def test_regrouped_sics_covariant_under_dprime():
    orbit = enumerate_orbit()
    sics, _ = regrouped_family(orbit)
    xp, zp = dprime_generators()
    for s in (sics[0], sics[7], sics[15]):
        flat = s.states.reshape(16, 16)
        for gen in (xp, zp):
            img = np.einsum("ab,kbc,dc->kad", gen, s.states, gen.conj())
            ov = np.abs(flat.conj() @ img.reshape(16, 16).T)
            assert np.all(np.max(ov, axis=0) >= 1 - 1e-9)


def test_equivalence_unitary():
    u = equivalence_unitary()
    assert np.allclose(u, EQUIVALENCE_MATRIX)
    assert np.max(np.abs(u.conj().T @ u - np.eye(4))) < 1e-12
    rho = enumerate_orbit().projectors[0]
    assert np.max(np.abs(u @ rho @ u.conj().T - rho)) < 1e-9


def test_equivalence_conjugates_group():
    u = equivalence_unitary()
    disp = np.stack([displacement(p1, p2, 4) for p1 in range(4) for p2 in range(4)])
    img = np.einsum("ab,kbc,dc->kad", u, disp, u.conj())
    assert projective_set_equal(img, dprime_elements())


def test_equivalence_not_clifford_but_square_is():
    u = equivalence_unitary()
    els = enumerate_projective_clifford(4, extended=False)
    mats = np.stack([e.op.matrix for e in els])
    assert np.max(np.abs(np.einsum("ij,kij->k", u.conj(), mats))) < 4 - 1e-6
    assert np.max(np.abs(np.einsum("ij,kij->k", (u @ u).conj(), mats))) >= 4 - 1e-7


def test_subgroup_census():
    total, normal, hw_type, normal_sets = hw_conjugate_subgroup_census()
    assert total == 32
    assert normal == 2
    assert len(hw_type) == 32
    ident = displacement_coset(0, 0)
    dbar = frozenset(displacement_coset(p1, p2) for p1 in range(4) for p2 in range(4))
    assert dbar in set(normal_sets)
    assert all(ident in s for s in hw_type)
    assert pair_coset(X_PRIME_PAIR) != displacement_coset(1, 0)
