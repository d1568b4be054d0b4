"""Dense complex linear-algebra kernel.

Plain-numpy building blocks shared by the rest of the package: tensor
products, adjoints, partial traces, Hermitian eigendecompositions, matrix
exponentials, Haar-random unitaries, and determinant / rank / nullspace
with explicit tolerance semantics.

Everything here is a pure function of its arguments.  Matrices are dense
``complex128`` arrays at desk scale (side <= 256), so there is no sparse
or blocked path.  Rank and nullspace are defined in terms of singular
values relative to the largest one.
"""

from __future__ import annotations

import numpy as np

# Tolerance gates; double precision leaves ample headroom at these sizes.
HERMITICITY_TOL = 1e-10
UNITARITY_TOL = 1e-10

_EINSUM_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


def _as_matrix(a, name: str = "matrix") -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {m.shape}")
    return m


def _as_square(a, name: str = "matrix") -> np.ndarray:
    m = _as_matrix(a, name)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    return m


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two matrices; dimensions multiply."""
    return np.kron(_as_matrix(a, "a"), _as_matrix(b, "b"))


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return _as_matrix(a).conj().T


def apply(u: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """Apply a square operator to an amplitude vector.

    Parameters
    ----------
    u : ndarray
        Square matrix with side equal to ``len(psi)``.
    psi : ndarray
        Amplitude vector.

    Raises
    ------
    ValueError
        On any dimension mismatch.
    """
    u = _as_square(u, "operator")
    v = np.asarray(psi, dtype=complex)
    if v.ndim != 1 or u.shape[1] != v.shape[0]:
        raise ValueError(
            f"dimension mismatch: operator side {u.shape[1]}, vector length {v.shape}"
        )
    return u @ v


def is_hermitian(h: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    h = _as_square(h)
    return float(np.abs(h - h.conj().T).max(initial=0.0)) <= tol


def is_unitary(u: np.ndarray, tol: float = UNITARITY_TOL) -> bool:
    u = _as_square(u)
    eye = np.eye(u.shape[0])
    return float(np.abs(u.conj().T @ u - eye).max(initial=0.0)) <= tol


def partial_trace(rho: np.ndarray, dims, keep) -> np.ndarray:
    """Reduced density matrix on the kept subsystems.

    Parameters
    ----------
    rho : ndarray
        Square density matrix of side ``prod(dims)``, Hermitian within
        ``HERMITICITY_TOL``.
    dims : sequence of int
        Subsystem dimensions; the first subsystem is the most significant
        index (big-endian flattening, fixed package-wide).
    keep : iterable of int
        0-based indices of the subsystems to keep.

    Returns
    -------
    ndarray
        Density matrix of side ``prod(dims[k] for k in keep)``; the trace
        of the input is preserved.
    """
    rho = _as_square(rho, "rho")
    dims = tuple(int(d) for d in dims)
    side = int(np.prod(dims))
    if rho.shape[0] != side:
        raise ValueError(f"rho side {rho.shape[0]} != product of dims {side}")
    if not is_hermitian(rho, 100 * HERMITICITY_TOL):
        raise ValueError("rho is not Hermitian within tolerance")
    keep_t = tuple(sorted({int(i) for i in keep}))
    n = len(dims)
    if not keep_t or keep_t[0] < 0 or keep_t[-1] >= n:
        raise ValueError(f"bad keep set {keep_t} for {n} subsystems")
    if 2 * n > len(_EINSUM_LETTERS):
        raise ValueError("too many subsystems for einsum contraction")

    t = rho.reshape(dims + dims)
    row = list(_EINSUM_LETTERS[:n])
    col = []
    nxt = n
    for w in range(n):
        if w in keep_t:
            col.append(_EINSUM_LETTERS[nxt])
            nxt += 1
        else:
            col.append(row[w])  # shared letter: trace this wire
    out = "".join(row[w] for w in keep_t) + "".join(col[w] for w in keep_t)
    reduced = np.einsum("".join(row) + "".join(col) + "->" + out, t)
    kd = int(np.prod([dims[w] for w in keep_t]))
    return reduced.reshape(kd, kd)


def hermitian_eigs(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns
    -------
    (eigenvalues, eigenvectors)
        Real eigenvalues in ascending order and the unitary matrix whose
        columns are the matching eigenvectors, so that
        ``h = V @ diag(w) @ V.conj().T``.

    Raises
    ------
    ValueError
        If ``h`` is not Hermitian within ``HERMITICITY_TOL``.
    """
    h = _as_square(h, "h")
    if not is_hermitian(h):
        raise ValueError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh(h)
    return w, v


def vn_entropy(rho: np.ndarray) -> float:
    """Von Neumann entropy of a density matrix, in bits.

    ``rho`` must be Hermitian, positive semidefinite within 1e-9 and have
    unit trace within 1e-9.  The convention ``0 * log 0 = 0`` applies.
    """
    rho = _as_square(rho, "rho")
    if not is_hermitian(rho):
        raise ValueError("rho is not Hermitian within tolerance")
    tr = float(np.real(np.trace(rho)))
    if abs(tr - 1.0) > 1e-9:
        raise ValueError(f"rho trace {tr} is not 1 within 1e-9")
    w = np.linalg.eigvalsh(rho)
    if w.min(initial=0.0) < -1e-9:
        raise ValueError(f"rho has negative eigenvalue {w.min()} beyond tolerance")
    p = w[w > 0.0]
    return float(-(p * np.log2(p)).sum())


def expm_hermitian(h: np.ndarray) -> np.ndarray:
    """``exp(i * h)`` for Hermitian ``h``, via eigendecomposition.

    The result is unitary within ``UNITARITY_TOL``.
    """
    w, v = hermitian_eigs(h)
    return (v * np.exp(1j * w)) @ v.conj().T


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed random unitary of the given side.

    QR decomposition of a complex Gaussian matrix, with the R diagonal
    phase-fixed so the distribution is exactly Haar.  Deterministic for a
    fixed generator state.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    z /= np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r).copy()
    diag[diag == 0] = 1.0  # zero pivot has probability zero; keep phase 1
    return q * (diag / np.abs(diag))


def det(m: np.ndarray) -> complex:
    """Determinant of a square matrix (LU with partial pivoting)."""
    return complex(np.linalg.det(_as_square(m)))


def rank(m: np.ndarray, tol: float) -> int:
    """Number of singular values above ``tol`` times the largest one."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    s = np.linalg.svd(_as_matrix(m), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


def nullspace(m: np.ndarray, tol: float) -> list[np.ndarray]:
    """Orthonormal basis of the numerical nullspace.

    A direction ``x`` counts as null when its singular value is at most
    ``tol`` times the largest one, i.e. ``|M x| <= tol * |M| * |x|``.  The
    basis has ``cols - rank(m, tol)`` elements.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = _as_matrix(m)
    cols = m.shape[1]
    _, s, vh = np.linalg.svd(m, full_matrices=True)
    if s.size == 0 or s[0] == 0.0:
        r = 0
    else:
        r = int(np.sum(s > tol * s[0]))
    return [vh[i].conj() for i in range(r, cols)]
