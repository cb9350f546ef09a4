"""Stochastic operator matrices: quantised families of POVMs.

A stochastic operator matrix over (X, A) acting on H is a positive block
matrix E on X (x) A (x) H whose partial trace over A is the identity on
X (x) H.  Blocks are written E[x, x', a, a'] and live on H.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import (TOL_ALG, EIG_CLAMP, asmatrix, check_state, dagger,
                     hermiticity_defect, max_entangled, partial_trace,
                     permute_systems, psd_defect)

#: Operator pairs constructed numerically never commute exactly.
TOL_COMM = 1e-8

#: POVM families must resum to the identity within this tolerance.
TOL_POVM = 1e-9


class VerificationError(ValueError):
    """A stochastic operator matrix failed its defining conditions."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class CommutationError(ValueError):
    """Blocks of a would-be commuting product do not commute."""

    def __init__(self, max_commutator: float, tol: float):
        super().__init__(
            f"blocks do not commute: max commutator norm {max_commutator:.3e} > tol {tol:.3e}")
        self.max_commutator = max_commutator


@dataclass(frozen=True)
class StochasticOperatorMatrix:
    """Positive block matrix on X (x) A (x) H with Tr_A-marginal the identity."""

    dim_x: int
    dim_a: int
    dim_h: int
    mat: np.ndarray

    def __post_init__(self):
        mat = asmatrix(self.mat)
        size = self.dim_x * self.dim_a * self.dim_h
        if mat.shape != (size, size):
            raise ValueError(f"matrix shape {mat.shape} does not match dims "
                             f"({self.dim_x},{self.dim_a},{self.dim_h})")
        object.__setattr__(self, "mat", mat)

    @property
    def dims(self) -> tuple[int, int, int]:
        return (self.dim_x, self.dim_a, self.dim_h)

    def tensor6(self) -> np.ndarray:
        """View with indices [x, a, h, x', a', h']."""
        dx, da, dh = self.dims
        return self.mat.reshape(dx, da, dh, dx, da, dh)

    def block(self, x: int, xp: int, a: int, ap: int) -> np.ndarray:
        """The H-block E[x, x', a, a']."""
        return np.array(self.tensor6()[x, a, :, xp, ap, :])

    def blocks(self) -> np.ndarray:
        """All blocks as an array of shape (dx, dx, da, da, dh, dh)."""
        return np.transpose(self.tensor6(), (0, 3, 1, 4, 2, 5))


@dataclass(frozen=True)
class StochasticReport:
    """Residuals of the defining conditions of a stochastic operator matrix."""

    hermiticity: float
    psd_defect: float
    marginal_residual: float
    povm_defect: float
    tol: float = TOL_ALG

    @property
    def ok(self) -> bool:
        return max(self.hermiticity, self.psd_defect,
                   self.marginal_residual, self.povm_defect) <= self.tol

    def as_dict(self) -> dict:
        return {
            "hermiticity": self.hermiticity,
            "psd_defect": self.psd_defect,
            "marginal_residual": self.marginal_residual,
            "povm_defect": self.povm_defect,
            "pass": self.ok,
            "tol": self.tol,
        }


def verify(e: StochasticOperatorMatrix, tol: float = TOL_ALG) -> StochasticReport:
    """Check positivity, the Tr_A marginal, and the per-x diagonal POVMs."""
    dx, da, dh = e.dims
    herm = hermiticity_defect(e.mat)
    psd = psd_defect(e.mat, tol=max(tol, herm * 4)) if herm <= tol else np.inf
    marg = partial_trace(e.mat, e.dims, 1)
    marg_res = float(np.max(np.abs(marg - np.eye(dx * dh))))
    # Derived consequence: (E[x, x, a, a])_a is a POVM for every x.
    povm = 0.0
    if herm <= tol:
        for x in range(dx):
            for a in range(da):
                povm = max(povm, psd_defect(e.block(x, x, a, a), tol=max(tol, herm * 4)))
    else:
        povm = np.inf
    return StochasticReport(herm, float(psd), marg_res, float(povm), tol)


def _require_verified(e: StochasticOperatorMatrix, tol: float = TOL_ALG):
    report = verify(e, tol)
    if not report.ok:
        raise VerificationError(
            f"stochastic operator matrix fails verification: {report.as_dict()}", report)


@dataclass(frozen=True)
class IsometryDilation:
    """Blocks V[a, x] : H -> K with sum_a V[a,x]* V[a,x'] = delta_{x,x'} I."""

    dim_x: int
    dim_a: int
    dim_h: int
    dim_k: int
    blocks: np.ndarray  # shape (da, dx, dk, dh)

    def isometry_defect(self) -> float:
        dx, dh = self.dim_x, self.dim_h
        gram = np.einsum("axki,aykj->xiyj", self.blocks.conj(), self.blocks,
                         optimize=True).reshape(dx * dh, dx * dh)
        return float(np.max(np.abs(gram - np.eye(dx * dh))))

    def reconstruct(self) -> StochasticOperatorMatrix:
        """Rebuild E with blocks V[a,x]* V[a',x']."""
        t = np.einsum("axki,bykj->xaiybj", self.blocks.conj(), self.blocks,
                      optimize=True)
        size = self.dim_x * self.dim_a * self.dim_h
        return StochasticOperatorMatrix(self.dim_x, self.dim_a, self.dim_h,
                                        t.reshape(size, size))


def dilate(e: StochasticOperatorMatrix, rank_tol: float = EIG_CLAMP,
           tol: float = TOL_ALG) -> IsometryDilation:
    """Read an isometry dilation off the Hermitian square root of E.

    K = X (x) A (x) H truncated to the numerical rank of E; the block
    V[a, x] is the (x, a)-column block of the square root.
    """
    _require_verified(e, tol)
    dx, da, dh = e.dims
    w, v = np.linalg.eigh((e.mat + dagger(e.mat)) / 2)
    keep = w > rank_tol
    root = (np.sqrt(np.maximum(w[keep], 0.0))[:, None]
            * dagger(v)[keep, :])  # shape (dk, dx*da*dh)
    dk = root.shape[0]
    blocks = np.transpose(root.reshape(dk, dx, da, dh), (2, 1, 0, 3))
    return IsometryDilation(dx, da, dh, dk, blocks)


def channel_choi(e: StochasticOperatorMatrix, sigma: np.ndarray,
                 tol: float = TOL_ALG) -> np.ndarray:
    """Choi matrix of the channel rho -> slice of E against rho (x) sigma.

    With H trivial and sigma = 1 this returns E itself.
    """
    sigma = check_state(sigma, tol)
    if sigma.shape != (e.dim_h, e.dim_h):
        raise ValueError(f"state shape {sigma.shape} does not match dim_h {e.dim_h}")
    t = e.tensor6()
    choi = np.einsum("xahybk,kh->xayb", t, sigma, optimize=True)
    n = e.dim_x * e.dim_a
    return choi.reshape(n, n)


def tensor(e: StochasticOperatorMatrix, f: StochasticOperatorMatrix,
           tol: float = TOL_ALG) -> StochasticOperatorMatrix:
    """Tensor product with factors reshuffled to X, Y, A, B, H1, H2 order."""
    _require_verified(e, tol)
    _require_verified(f, tol)
    big = np.kron(e.mat, f.mat)
    dims = (e.dim_x, e.dim_a, e.dim_h, f.dim_x, f.dim_a, f.dim_h)
    big = permute_systems(big, dims, [0, 3, 1, 4, 2, 5])
    return StochasticOperatorMatrix(e.dim_x * f.dim_x, e.dim_a * f.dim_a,
                                    e.dim_h * f.dim_h, big)


def max_commutator(e: StochasticOperatorMatrix, f: StochasticOperatorMatrix) -> float:
    """Largest operator norm of a commutator between blocks of E and F."""
    if e.dim_h != f.dim_h:
        raise ValueError("operands act on different spaces")
    eb = e.blocks().reshape(-1, e.dim_h, e.dim_h)
    fb = f.blocks().reshape(-1, f.dim_h, f.dim_h)
    comm = np.einsum("imn,jnk->ijmk", eb, fb, optimize=True) \
        - np.einsum("jmn,ink->ijmk", fb, eb, optimize=True)
    return float(np.max(np.linalg.norm(comm, ord=2, axis=(2, 3)))) if comm.size else 0.0


def commuting_product(e: StochasticOperatorMatrix, f: StochasticOperatorMatrix,
                      tol_comm: float = TOL_COMM,
                      tol: float = TOL_ALG) -> StochasticOperatorMatrix:
    """Blockwise product of a commuting pair on a common H."""
    _require_verified(e, tol)
    _require_verified(f, tol)
    comm = max_commutator(e, f)
    if comm > tol_comm:
        raise CommutationError(comm, tol_comm)
    te, tf = e.tensor6(), f.tensor6()
    g = np.einsum("xahXAm,ybmYBk->xyabhXYABk", te, tf, optimize=True)
    size = e.dim_x * f.dim_x * e.dim_a * f.dim_a * e.dim_h
    return StochasticOperatorMatrix(e.dim_x * f.dim_x, e.dim_a * f.dim_a,
                                    e.dim_h, g.reshape(size, size))


def compose(f: StochasticOperatorMatrix, e: StochasticOperatorMatrix) -> StochasticOperatorMatrix:
    """Composition G[x,x',z,z'] = sum_{a,a'} F[a,a',z,z'] (x) E[x,x',a,a'].

    F is over (A, Z, K), E over (X, A, H); the result is over (X, Z, K (x) H).
    """
    if f.dim_x != e.dim_a:
        raise ValueError(f"inner dimension mismatch: F input {f.dim_x} vs E output {e.dim_a}")
    tf, te = f.tensor6(), e.tensor6()
    g = np.einsum("azkAZK,xahXAH->xzkhXZKH", tf, te, optimize=True)
    dh = f.dim_h * e.dim_h
    size = e.dim_x * f.dim_a * dh
    return StochasticOperatorMatrix(e.dim_x, f.dim_a, dh, g.reshape(size, size))


def with_ancilla_right(e: StochasticOperatorMatrix, dim: int) -> StochasticOperatorMatrix:
    """Extend the workspace on the right: blocks become E[x,x',a,a'] (x) I."""
    return StochasticOperatorMatrix(e.dim_x, e.dim_a, e.dim_h * dim,
                                    np.kron(e.mat, np.eye(dim)))


def with_ancilla_left(e: StochasticOperatorMatrix, dim: int) -> StochasticOperatorMatrix:
    """Extend the workspace on the left: blocks become I (x) E[x,x',a,a']."""
    big = np.kron(e.mat, np.eye(dim))
    big = permute_systems(big, (e.dim_x, e.dim_a, e.dim_h, dim), [0, 1, 3, 2])
    return StochasticOperatorMatrix(e.dim_x, e.dim_a, dim * e.dim_h, big)


def semiclassical_defect(e: StochasticOperatorMatrix) -> float:
    """Largest entry of an off-diagonal input block."""
    t = e.tensor6()
    diag = np.zeros_like(t)
    for x in range(e.dim_x):
        diag[x, :, :, x, :, :] = t[x, :, :, x, :, :]
    return float(np.max(np.abs(t - diag))) if t.size else 0.0


def classical_defect(e: StochasticOperatorMatrix) -> float:
    """Largest entry outside the (x, x, a, a) diagonal blocks."""
    t = e.tensor6()
    diag = np.zeros_like(t)
    for x in range(e.dim_x):
        for a in range(e.dim_a):
            diag[x, a, :, x, a, :] = t[x, a, :, x, a, :]
    return float(np.max(np.abs(t - diag))) if t.size else 0.0


def is_semiclassical(e: StochasticOperatorMatrix, tol: float = TOL_ALG) -> bool:
    return semiclassical_defect(e) <= tol


def is_classical(e: StochasticOperatorMatrix, tol: float = TOL_ALG) -> bool:
    return classical_defect(e) <= tol


def to_semiclassical(e: StochasticOperatorMatrix) -> StochasticOperatorMatrix:
    """Pinch away the off-diagonal input blocks (idempotent)."""
    t = e.tensor6()
    out = np.zeros_like(t)
    for x in range(e.dim_x):
        out[x, :, :, x, :, :] = t[x, :, :, x, :, :]
    return StochasticOperatorMatrix(e.dim_x, e.dim_a, e.dim_h,
                                    out.reshape(e.mat.shape))


def to_classical(e: StochasticOperatorMatrix) -> StochasticOperatorMatrix:
    """Pinch inputs and outputs; the result is a classical stochastic matrix."""
    t = e.tensor6()
    out = np.zeros_like(t)
    for x in range(e.dim_x):
        for a in range(e.dim_a):
            out[x, a, :, x, a, :] = t[x, a, :, x, a, :]
    return StochasticOperatorMatrix(e.dim_x, e.dim_a, e.dim_h,
                                    out.reshape(e.mat.shape))


def from_povms(povms: Sequence[Sequence[np.ndarray]],
               tol: float = TOL_POVM) -> StochasticOperatorMatrix:
    """Classical stochastic operator matrix from one POVM per input symbol."""
    dx = len(povms)
    if dx == 0:
        raise ValueError("need at least one POVM")
    da = len(povms[0])
    ops = [[asmatrix(op) for op in family] for family in povms]
    dh = ops[0][0].shape[0]
    for family in ops:
        if len(family) != da:
            raise ValueError("all POVMs must have the same number of outcomes")
        total = sum(family)
        if float(np.max(np.abs(total - np.eye(dh)))) > tol:
            raise ValueError("POVM does not sum to the identity within tolerance")
    mat = np.zeros((dx * da * dh,) * 2, dtype=complex)
    t = mat.reshape(dx, da, dh, dx, da, dh)
    for x, family in enumerate(ops):
        for a, op in enumerate(family):
            herm = hermiticity_defect(op)
            if herm > tol:
                raise ValueError(f"POVM element ({x},{a}) is not Hermitian")
            t[x, a, :, x, a, :] = (op + dagger(op)) / 2
    return StochasticOperatorMatrix(dx, da, dh, mat)


def from_choi(choi: np.ndarray, dim_x: int, dim_a: int) -> StochasticOperatorMatrix:
    """Wrap a channel's Choi matrix as a stochastic operator matrix with trivial H."""
    return StochasticOperatorMatrix(dim_x, dim_a, 1, asmatrix(choi))


def identity_witness(dim: int) -> StochasticOperatorMatrix:
    """The maximally entangled matrix as the Choi of the identity channel."""
    return from_choi(max_entangled(dim), dim, dim)
