"""Finite-dimensional tracial C*-algebras and algebra-valued stochastic matrices.

An algebra is a direct sum of full matrix blocks with a weighted normalised
trace.  A stochastic algebra matrix over (X, A) stores one stochastic
operator matrix per block; its entries g[x, x', a, a'] are the block tuples.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import TOL_ALG
from .stochastic import (StochasticOperatorMatrix, classical_defect,
                         compose as compose_som, semiclassical_defect, verify)


@dataclass(frozen=True)
class TracialAlgebra:
    """Direct sum of matrix blocks with trace tau(+u_i) = sum_i w_i Tr(u_i)/d_i."""

    block_dims: tuple[int, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.block_dims)
        weights = tuple(float(w) for w in self.weights)
        if len(dims) != len(weights) or not dims:
            raise ValueError("need matching, non-empty block dims and weights")
        if any(d < 1 for d in dims):
            raise ValueError("block dimensions must be >= 1")
        if any(w <= 0 for w in weights):
            raise ValueError("weights must be positive")
        if abs(sum(weights) - 1.0) > TOL_ALG:
            raise ValueError(f"weights must sum to 1, got {sum(weights)}")
        object.__setattr__(self, "block_dims", dims)
        object.__setattr__(self, "weights", weights)

    @property
    def n_blocks(self) -> int:
        return len(self.block_dims)

    @property
    def is_abelian(self) -> bool:
        return all(d == 1 for d in self.block_dims)

    def trace(self, element) -> complex:
        """Evaluate the tracial state on a block tuple."""
        if len(element) != self.n_blocks:
            raise ValueError("element has wrong number of blocks")
        return sum(w * np.trace(np.asarray(u)) / d for w, d, u in
                   zip(self.weights, self.block_dims, element))

    def tensor(self, other: "TracialAlgebra") -> "TracialAlgebra":
        """Tensor-product algebra, blocks ordered (i over self, j over other)."""
        dims = tuple(di * dj for di in self.block_dims for dj in other.block_dims)
        weights = tuple(wi * wj for wi in self.weights for wj in other.weights)
        return TracialAlgebra(dims, weights)


def scalar_algebra() -> TracialAlgebra:
    return TracialAlgebra((1,), (1.0,))


def matrix_algebra(dim: int) -> TracialAlgebra:
    """Full matrix block with normalised trace Tr/dim."""
    return TracialAlgebra((dim,), (1.0,))


def abelian_algebra(weights) -> TracialAlgebra:
    return TracialAlgebra((1,) * len(tuple(weights)), tuple(weights))


@dataclass(frozen=True)
class AlgStochasticMatrix:
    """Stochastic algebra matrix over (X, A): one verified block per algebra block."""

    alg: TracialAlgebra
    blocks: tuple[StochasticOperatorMatrix, ...]

    def __post_init__(self):
        blocks = tuple(self.blocks)
        if len(blocks) != self.alg.n_blocks:
            raise ValueError("one stochastic block per algebra block required")
        dx = {b.dim_x for b in blocks}
        da = {b.dim_a for b in blocks}
        if len(dx) != 1 or len(da) != 1:
            raise ValueError("all blocks must share the same (X, A) dimensions")
        for b, d in zip(blocks, self.alg.block_dims):
            if b.dim_h != d:
                raise ValueError(f"block acts on dim {b.dim_h}, algebra block has dim {d}")
        object.__setattr__(self, "blocks", blocks)

    @property
    def dim_x(self) -> int:
        return self.blocks[0].dim_x

    @property
    def dim_a(self) -> int:
        return self.blocks[0].dim_a

    def entry(self, x: int, xp: int, a: int, ap: int) -> tuple[np.ndarray, ...]:
        """The algebra element g[x, x', a, a'] as a block tuple."""
        return tuple(b.block(x, xp, a, ap) for b in self.blocks)

    def verification_defect(self, tol: float = TOL_ALG) -> float:
        out = 0.0
        for b in self.blocks:
            r = verify(b, tol)
            out = max(out, r.hermiticity, r.psd_defect, r.marginal_residual)
        return out

    def semiclassical_defect(self) -> float:
        return max(semiclassical_defect(b) for b in self.blocks)

    def classical_defect(self) -> float:
        return max(classical_defect(b) for b in self.blocks)

    def is_semiclassical(self, tol: float = TOL_ALG) -> bool:
        return self.semiclassical_defect() <= tol

    def is_classical(self, tol: float = TOL_ALG) -> bool:
        return self.classical_defect() <= tol


def check_alg_stochastic(e: AlgStochasticMatrix, tol: float = TOL_ALG):
    defect = e.verification_defect(tol)
    if defect > tol:
        raise ValueError(f"stochastic algebra matrix fails verification (defect {defect:.3e})")


def tracial_choi(e: AlgStochasticMatrix) -> np.ndarray:
    """Choi matrix with entries tau(g[x,x',a,a'] g[y',y,b',b]).

    Rows are indexed (x, y, a, b), columns (x', y', a', b'); the result is
    the Choi matrix of a quantum no-signalling correlation on (X, X, A, A).
    """
    dx, da = e.dim_x, e.dim_a
    out = np.zeros((dx, dx, da, da, dx, dx, da, da), dtype=complex)
    for w, d, block in zip(e.alg.weights, e.alg.block_dims, e.blocks):
        t = block.tensor6()
        out += (w / d) * np.einsum("xahXAk,YBkybh->xyabXYAB", t, t, optimize=True)
    n = dx * dx * da * da
    return out.reshape(n, n)


def tracial_states(e: AlgStochasticMatrix) -> np.ndarray:
    """State family sigma[x, y] with entries tau(g[x,a,a'] g[y,b',b]).

    Requires a semi-classical matrix; returns shape (dx, dx, da*da, da*da)
    with sigma[x, y] indexed by rows (a, b) and columns (a', b').
    """
    dx, da = e.dim_x, e.dim_a
    out = np.zeros((dx, dx, da, da, da, da), dtype=complex)
    for w, d, block in zip(e.alg.weights, e.alg.block_dims, e.blocks):
        t = block.tensor6()
        diag = np.einsum("xahxAk->xaAhk", t)  # g[x, a, a'] operators
        out += (w / d) * np.einsum("xaAhk,yBbkh->xyabAB", diag, diag, optimize=True)
    return out.reshape(dx, dx, da * da, da * da)


def tracial_table(e: AlgStochasticMatrix) -> np.ndarray:
    """Probability table p(a, b | x, y) = tau(g[x,a] g[y,b]) of a classical matrix."""
    dx, da = e.dim_x, e.dim_a
    out = np.zeros((dx, dx, da, da), dtype=complex)
    for w, d, block in zip(e.alg.weights, e.alg.block_dims, e.blocks):
        t = block.tensor6()
        diag = np.einsum("xahxak->xahk", t)  # g[x, a] operators
        out += (w / d) * np.einsum("xahk,ybkh->xyab", diag, diag, optimize=True)
    return np.real(out)


def compose_alg(f: AlgStochasticMatrix, e: AlgStochasticMatrix) -> AlgStochasticMatrix:
    """Blockwise composition over the tensor-product algebra.

    f is over (A, Z), e over (X, A); block (i, j) of the result is the
    stochastic composition of f's block i with e's block j.
    """
    if f.dim_x != e.dim_a:
        raise ValueError("inner dimensions do not match")
    alg = f.alg.tensor(e.alg)
    blocks = tuple(compose_som(bf, be) for bf in f.blocks for be in e.blocks)
    return AlgStochasticMatrix(alg, blocks)


def abelian_from_chois(chois, weights, dim_x: int, dim_a: int) -> AlgStochasticMatrix:
    """Abelian witness: block j holds the Choi matrix of the j-th channel."""
    weights = tuple(float(w) for w in weights)
    alg = abelian_algebra(weights)
    blocks = tuple(StochasticOperatorMatrix(dim_x, dim_a, 1, np.asarray(c, dtype=complex))
                   for c in chois)
    return AlgStochasticMatrix(alg, blocks)


def direct_sum(e1: AlgStochasticMatrix, e2: AlgStochasticMatrix,
               weight: float) -> AlgStochasticMatrix:
    """Convex combination witness over the direct-sum algebra."""
    if (e1.dim_x, e1.dim_a) != (e2.dim_x, e2.dim_a):
        raise ValueError("dimension mismatch")
    if not 0.0 < weight < 1.0:
        raise ValueError("weight must lie in (0, 1)")
    dims = e1.alg.block_dims + e2.alg.block_dims
    weights = tuple(weight * w for w in e1.alg.weights) + \
        tuple((1.0 - weight) * w for w in e2.alg.weights)
    return AlgStochasticMatrix(TracialAlgebra(dims, weights), e1.blocks + e2.blocks)
