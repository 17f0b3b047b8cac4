"""Shared numerical primitives: unitary/antiunitary operators, projective
comparison, Hermitian eigendecomposition and matrix (de)serialization.

All comparisons are absolute-tolerance based; the package-wide default is
``DEFAULT_TOL``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_TOL = 1e-9


def _as_complex(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix, got shape %r" % (a.shape,))
    return a


def is_unitary(m, tol: float = DEFAULT_TOL) -> bool:
    m = _as_complex(m)
    d = m.shape[0]
    return np.max(np.abs(m.conj().T @ m - np.eye(d))) <= tol


@dataclass(frozen=True, eq=False)
class GroupElement:
    """A unitary matrix together with an antiunitarity flag.

    The element acts on kets as v -> matrix @ v (antiunitary=False) or
    v -> matrix @ conj(v) (antiunitary=True).
    """

    matrix: np.ndarray
    antiunitary: bool = False
    _tol: float = field(default=1e-8, repr=False)

    def __post_init__(self):
        m = _as_complex(self.matrix)
        if not is_unitary(m, self._tol):
            raise ValueError("GroupElement matrix is not unitary within tol")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def compose(a: GroupElement, b: GroupElement) -> GroupElement:
    """Composition a after b; conjugation flags multiply (xor)."""
    mb = b.matrix.conj() if a.antiunitary else b.matrix
    return GroupElement(a.matrix @ mb, a.antiunitary != b.antiunitary)


def inverse(g: GroupElement) -> GroupElement:
    # (M K)^-1 = K M^dag = M^T K for unitary M
    if g.antiunitary:
        return GroupElement(g.matrix.T, True)
    return GroupElement(g.matrix.conj().T, False)


def apply(g: GroupElement, v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return g.matrix @ (v.conj() if g.antiunitary else v)


def conjugate(g: GroupElement, m) -> np.ndarray:
    """g m g^-1 for a matrix m (the adjoint action on operators)."""
    m = np.asarray(m, dtype=complex)
    if g.antiunitary:
        m = m.conj()
    return g.matrix @ m @ g.matrix.conj().T


def proj_equal(a, b, tol: float = DEFAULT_TOL) -> bool:
    """Equality up to a global phase.

    Both arguments must be unitary matrices, or both rank-1 Hermitian
    projectors.  For unitaries the criterion is |tr(a^dag b)| >= d - tol,
    for projectors |tr(a b)| >= 1 - tol.
    """
    a = _as_complex(a)
    b = _as_complex(b)
    if a.shape != b.shape:
        return False
    d = a.shape[0]
    # crude unitarity probe distinguishes the two supported cases
    if is_unitary(a, 1e-6) and is_unitary(b, 1e-6):
        return abs(np.trace(a.conj().T @ b)) >= d - tol
    herm = max(np.max(np.abs(a - a.conj().T)), np.max(np.abs(b - b.conj().T)))
    if herm > 1e-6:
        raise ValueError("proj_equal expects two unitaries or two Hermitian projectors")
    return abs(np.trace(a @ b)) >= 1 - tol


def elements_proj_equal(a: GroupElement, b: GroupElement, tol: float = DEFAULT_TOL) -> bool:
    return a.antiunitary == b.antiunitary and proj_equal(a.matrix, b.matrix, tol)


def projective_order(g: GroupElement, max_order: int = 100, tol: float = DEFAULT_TOL) -> int:
    """Smallest n >= 1 with g^n proportional to the identity."""
    acc = g
    eye = GroupElement(np.eye(g.dim))
    for n in range(1, max_order + 1):
        if elements_proj_equal(acc, eye, tol):
            return n
        acc = compose(acc, g)
    raise ValueError("no projective order found up to %d" % max_order)


def eig_hermitian(m, tol: float = DEFAULT_TOL):
    """Eigendecomposition of a Hermitian matrix with a fixed phase gauge.

    Parameters
    ----------
    m : array_like
        Hermitian matrix; deviation from Hermiticity beyond ``tol`` raises.

    Returns
    -------
    w : ndarray
        Eigenvalues in ascending order.
    v : ndarray
        Eigenvectors as columns, each normalized so its largest-magnitude
        component is real and positive.
    """
    m = _as_complex(m)
    if np.max(np.abs(m - m.conj().T)) > tol:
        raise ValueError("matrix is not Hermitian within tol")
    w, v = np.linalg.eigh(m)
    for k in range(v.shape[1]):
        i = int(np.argmax(np.abs(v[:, k])))
        ph = v[i, k] / abs(v[i, k])
        v[:, k] = v[:, k] / ph
    return w, v


def canonical_phase(m, zero_tol: float = 1e-6) -> np.ndarray:
    """Rescale by a global phase so the first nonzero entry (row-major) is
    real positive."""
    m = _as_complex(m).copy()
    flat = m.ravel()
    for x in flat:
        if abs(x) > zero_tol:
            m /= x / abs(x)
            return m
    raise ValueError("zero matrix has no canonical phase")


def canonical_key(m, decimals: int = 6) -> bytes:
    """Hashable fingerprint of a matrix modulo global phase."""
    c = canonical_phase(m)
    # +0.0 folds -0.0 into +0.0 so the byte representation is stable
    re = np.round(c.real, decimals) + 0.0
    im = np.round(c.imag, decimals) + 0.0
    return re.tobytes() + im.tobytes()


def projective_set_equal(mats_a, mats_b, tol: float = 1e-7) -> bool:
    """Do two stacks of unitaries coincide as sets, modulo global phases?

    Requires a perfect matching under |tr(a^dag b)| >= d - tol.  Since the
    intended inputs are group element lists (pairwise projectively distinct),
    a greedy match is exact.
    """
    a = np.asarray(mats_a, dtype=complex)
    b = np.asarray(mats_b, dtype=complex)
    if a.shape != b.shape or a.ndim != 3:
        return False
    d = a.shape[1]
    scores = np.abs(np.einsum("aij,bij->ab", a.conj(), b))
    hits = scores >= d - tol
    return bool(np.all(hits.sum(axis=1) == 1) and np.all(hits.sum(axis=0) == 1))


def matrix_to_json(m) -> dict:
    """Serialize to {dim, entries} with entries a row-major [re, im] list."""
    m = _as_complex(m)
    return {
        "dim": m.shape[0],
        "entries": [[float(x.real), float(x.imag)] for x in m.ravel()],
    }


def matrix_from_json(obj) -> np.ndarray:
    d = int(obj["dim"])
    entries = obj["entries"]
    if len(entries) != d * d:
        raise ValueError("expected %d entries, got %d" % (d * d, len(entries)))
    flat = np.array([complex(re, im) for re, im in entries])
    return flat.reshape(d, d)
