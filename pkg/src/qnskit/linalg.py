"""Dense complex-matrix kernel for composite quantum systems.

All composite indices are lexicographic with the leftmost tensor factor most
significant.  Choi matrices of a map M_in -> M_out are indexed by rows
(in, out) and columns (in', out'); under this convention the Choi matrix of
the identity channel is the non-normalised maximally entangled matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

#: Tolerance for algebraic identities on constructed data (double precision,
#: dimensions up to a few hundred).
TOL_ALG = 1e-9

#: Eigenvalues with modulus below this are treated as zero.
EIG_CLAMP = 1e-10


class NonHermitianError(ValueError):
    """Raised when a spectral routine receives a non-Hermitian matrix."""


@dataclass(frozen=True)
class SystemDims:
    """Ordered tensor-factor dimensions with optional labels."""

    dims: tuple[int, ...]
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if any(d < 1 for d in dims):
            raise ValueError(f"factor dimensions must be >= 1, got {dims}")
        labels = tuple(self.labels) or tuple(f"s{i}" for i in range(len(dims)))
        if len(labels) != len(dims):
            raise ValueError("labels and dims must have equal length")
        object.__setattr__(self, "labels", labels)

    @property
    def size(self) -> int:
        return math.prod(self.dims)

    def __len__(self) -> int:
        return len(self.dims)


def asmatrix(m) -> np.ndarray:
    out = np.asarray(m, dtype=complex)
    if out.ndim != 2:
        raise ValueError(f"expected a matrix, got array of shape {out.shape}")
    return out


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(m))


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, left factor most significant."""
    return np.kron(asmatrix(a), asmatrix(b))


def kron_all(*factors: np.ndarray) -> np.ndarray:
    out = asmatrix(factors[0])
    for f in factors[1:]:
        out = np.kron(out, asmatrix(f))
    return out


def _check_dims(m: np.ndarray, dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    size = math.prod(dims)
    if m.shape != (size, size):
        raise ValueError(f"matrix of shape {m.shape} does not match factor dims {dims}")
    return dims


def partial_trace(m: np.ndarray, dims: Sequence[int], which) -> np.ndarray:
    """Trace out the factor(s) ``which``; remaining factor order is preserved."""
    m = asmatrix(m)
    dims = _check_dims(m, dims)
    traced = {int(which)} if np.isscalar(which) else {int(w) for w in which}
    n = len(dims)
    if not traced <= set(range(n)):
        raise ValueError(f"factor indices {traced} out of range for {n} factors")
    t = m.reshape(*dims, *dims)
    keep = [i for i in range(n) if i not in traced]
    for i in sorted(traced, reverse=True):
        t = np.trace(t, axis1=i, axis2=i + (t.ndim // 2))
    size = math.prod(dims[i] for i in keep) if keep else 1
    return t.reshape(size, size)


def permute_systems(m: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Conjugate by the basis permutation sending new factor j to old factor perm[j]."""
    m = asmatrix(m)
    dims = _check_dims(m, dims)
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(len(dims))):
        raise ValueError(f"{perm} is not a permutation of {len(dims)} factors")
    n = len(dims)
    t = m.reshape(*dims, *dims)
    t = np.transpose(t, perm + [n + p for p in perm])
    return t.reshape(m.shape)


def hermiticity_defect(m: np.ndarray) -> float:
    m = asmatrix(m)
    return float(np.max(np.abs(m - dagger(m)))) if m.size else 0.0


def hermitize(m: np.ndarray, tol: float = TOL_ALG) -> np.ndarray:
    """Symmetrise an almost-Hermitian matrix; error out on real asymmetry."""
    m = asmatrix(m)
    defect = hermiticity_defect(m)
    if defect > tol:
        raise NonHermitianError(f"matrix is not Hermitian (defect {defect:.3e} > tol {tol:.3e})")
    return (m + dagger(m)) / 2


def psd_defect(m: np.ndarray, tol: float = TOL_ALG) -> float:
    """How far below zero the spectrum of a Hermitian matrix reaches."""
    h = hermitize(m, tol)
    if h.size == 0:
        return 0.0
    return float(max(0.0, -np.linalg.eigvalsh(h)[0]))


def is_psd(m: np.ndarray, tol: float = TOL_ALG) -> bool:
    return psd_defect(m, tol) <= tol


def herm_sqrt(m: np.ndarray, tol: float = TOL_ALG) -> np.ndarray:
    """PSD square root by spectral decomposition, negative eigenvalues clamped."""
    h = hermitize(m, tol)
    w, v = np.linalg.eigh(h)
    w = np.where(w > EIG_CLAMP, w, 0.0)
    return (v * np.sqrt(w)) @ dagger(v)


def max_entangled_vector(dim: int) -> np.ndarray:
    """The vector sum_a e_a (x) e_a in C^dim (x) C^dim."""
    return np.eye(dim, dtype=complex).reshape(dim * dim)


def max_entangled(dim: int) -> np.ndarray:
    """Non-normalised maximally entangled matrix: rank one, trace ``dim``."""
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    v = max_entangled_vector(dim)
    return np.outer(v, v.conj())


def apply_choi(choi: np.ndarray, dims: tuple[int, int], rho: np.ndarray) -> np.ndarray:
    """Apply the map with the given Choi matrix to ``rho``.

    ``dims`` is the (input, output) dimension pair; the Choi matrix carries
    composite row index (in, out).
    """
    choi = asmatrix(choi)
    din, dout = int(dims[0]), int(dims[1])
    if choi.shape != (din * dout, din * dout):
        raise ValueError(f"Choi shape {choi.shape} does not match dims {(din, dout)}")
    rho = asmatrix(rho)
    if rho.shape != (din, din):
        raise ValueError(f"input state shape {rho.shape} does not match input dim {din}")
    c4 = choi.reshape(din, dout, din, dout)
    return np.einsum("ij,ikjl->kl", rho, c4)


def choi_compose(choi2: np.ndarray, dims2: tuple[int, int],
                 choi1: np.ndarray, dims1: tuple[int, int]) -> np.ndarray:
    """Choi matrix of the composition map2 after map1."""
    d_in, d_mid = int(dims1[0]), int(dims1[1])
    d_mid2, d_out = int(dims2[0]), int(dims2[1])
    if d_mid != d_mid2:
        raise ValueError(f"inner dimensions differ: {d_mid} vs {d_mid2}")
    c1 = asmatrix(choi1).reshape(d_in, d_mid, d_in, d_mid)
    c2 = asmatrix(choi2).reshape(d_mid, d_out, d_mid, d_out)
    out = np.einsum("iajb,akbl->ikjl", c1, c2)
    return out.reshape(d_in * d_out, d_in * d_out)


def channel_defects(choi: np.ndarray, dims: tuple[int, int],
                    tol: float = TOL_ALG) -> tuple[float, float]:
    """(CP defect, trace-preservation residual) of a Choi matrix."""
    choi = asmatrix(choi)
    din, dout = int(dims[0]), int(dims[1])
    cp = psd_defect(choi, tol)
    marg = partial_trace(choi, (din, dout), 1)
    tp = float(np.max(np.abs(marg - np.eye(din))))
    return cp, tp


def is_channel(choi: np.ndarray, dims: tuple[int, int], tol: float = TOL_ALG) -> bool:
    cp, tp = channel_defects(choi, dims, tol)
    return cp <= tol and tp <= tol


def state_defect(rho: np.ndarray, tol: float = TOL_ALG) -> float:
    """Max of PSD defect and trace deviation from one."""
    rho = asmatrix(rho)
    return max(psd_defect(rho, tol), abs(float(np.trace(rho).real) - 1.0),
               abs(float(np.trace(rho).imag)))


def check_state(rho: np.ndarray, tol: float = TOL_ALG) -> np.ndarray:
    rho = asmatrix(rho)
    defect = state_defect(rho, tol)
    if defect > tol:
        raise ValueError(f"not a state (defect {defect:.3e})")
    return rho


def nullspace(mat: np.ndarray, tol: float = EIG_CLAMP) -> np.ndarray:
    """Orthonormal basis (columns) of the kernel; singular values < tol are zero."""
    mat = np.asarray(mat, dtype=complex)
    if mat.size == 0:
        return np.eye(mat.shape[1], dtype=complex)
    _, s, vh = np.linalg.svd(mat)
    rank = int(np.sum(s >= tol))
    return dagger(vh)[:, rank:]


def orthonormal_columns(vectors: np.ndarray, tol: float = EIG_CLAMP) -> np.ndarray:
    """Orthonormal basis (columns) of the column span of ``vectors``."""
    vectors = np.asarray(vectors, dtype=complex)
    if vectors.ndim != 2 or vectors.shape[1] == 0:
        return vectors.reshape(vectors.shape[0], 0)
    u, s, _ = np.linalg.svd(vectors, full_matrices=False)
    rank = int(np.sum(s >= tol * max(1.0, s[0] if s.size else 1.0)))
    return u[:, :rank]
