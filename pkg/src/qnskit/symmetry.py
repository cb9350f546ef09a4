"""Fairness and tracial structure for correlations with X = Y and A = B.

A bipartite state rho on X (x) X is fair when
``sum_x rho[x, x, z, z'] = sum_y rho[z', z, y, y]`` for all z, z' (indices
refer to the expansion rho = sum rho[x, x', y, y'] e_x e_x'* (x) e_y e_y'*).
A correlation is fair when it maps fair states to fair states; the check is
exact, through a basis of the solution space of the linear constraint.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .algebra import (AlgStochasticMatrix, abelian_from_chois,
                      check_alg_stochastic, compose_alg, tracial_choi,
                      tracial_states, tracial_table)
from .correlations import (CorrelationDims, CqnsCorrelation, NsCorrelation,
                           QnsCorrelation, TracialWitness, build_tracial)
from .linalg import (TOL_ALG, asmatrix, channel_defects, check_state,
                     nullspace, state_defect)


# ---------------------------------------------------------------------------
# Fair states


def fair_state_residual(rho: np.ndarray, dim_x: int) -> float:
    """Residual of the fair-state constraint for a matrix on X (x) X."""
    rho = asmatrix(rho)
    if rho.shape != (dim_x * dim_x,) * 2:
        raise ValueError(f"shape {rho.shape} does not match dim {dim_x}")
    r4 = rho.reshape(dim_x, dim_x, dim_x, dim_x)  # [x, y, x', y'] with rows (x, y)
    # rho[x, x', y, y'] = r4[x, y, x', y']
    lhs = np.einsum("xzxw->zw", r4)     # sum_x rho[x, x, z, z']
    rhs = np.einsum("wyzy->zw", r4)     # sum_y rho[z', z, y, y]
    return float(np.max(np.abs(lhs - rhs)))


def is_fair_state(rho: np.ndarray, dim_x: int | None = None,
                  tol: float = TOL_ALG) -> bool:
    rho = asmatrix(rho)
    if dim_x is None:
        dim_x = int(round(rho.shape[0] ** 0.5))
    if state_defect(rho, max(tol, 1e-7)) > tol:
        raise ValueError("input is not a state")
    return fair_state_residual(rho, dim_x) <= tol


def _fair_constraint_matrix(dim: int) -> np.ndarray:
    """Linear map M_{XX} -> M_X whose kernel spans the fair states."""
    rows = []
    for z in range(dim):
        for w in range(dim):
            functional = np.zeros((dim, dim, dim, dim), dtype=complex)
            for x in range(dim):
                functional[x, z, x, w] += 1.0      # rho[x, x, z, z']
            for y in range(dim):
                functional[w, y, z, y] -= 1.0      # rho[z', z, y, y]
            rows.append(functional.reshape(-1))
    return np.array(rows)


@lru_cache(maxsize=None)
def fair_subspace(dim: int) -> np.ndarray:
    """Orthonormal basis (columns) of the kernel of the fair constraint."""
    return nullspace(_fair_constraint_matrix(dim))


def _classical_fair_constraint(dim: int) -> np.ndarray:
    rows = []
    for z in range(dim):
        functional = np.zeros((dim, dim))
        functional[:, z] += 1.0
        functional[z, :] -= 1.0
        rows.append(functional.reshape(-1))
    return np.array(rows)


@lru_cache(maxsize=None)
def classical_fair_subspace(dim: int) -> np.ndarray:
    return nullspace(_classical_fair_constraint(dim))


def classical_fair_residual(q: np.ndarray) -> float:
    """Residual of row sums against column sums for a table on X x X."""
    q = np.asarray(q)
    return float(np.max(np.abs(q.sum(axis=0) - q.sum(axis=1))))


def fair_residual(corr: QnsCorrelation | CqnsCorrelation | NsCorrelation) -> float:
    """Largest fairness violation over a spanning set of fair inputs."""
    d = corr.dims
    if d.x != d.y or d.a != d.b:
        raise ValueError("fairness requires X = Y and A = B")
    if isinstance(corr, QnsCorrelation):
        basis = fair_subspace(d.x)
        out = 0.0
        for k in range(basis.shape[1]):
            rho = basis[:, k].reshape(d.in_size, d.in_size)
            out = max(out, fair_state_residual(corr.apply(rho), d.a))
        return out
    basis = classical_fair_subspace(d.x)
    out = 0.0
    for k in range(basis.shape[1]):
        q = basis[:, k].reshape(d.x, d.x)
        if isinstance(corr, CqnsCorrelation):
            image = np.einsum("xy,xyij->ij", q, corr.states)
            out = max(out, fair_state_residual(image, d.a))
        else:
            image = np.einsum("xy,xyab->ab", q, corr.table.astype(complex))
            out = max(out, classical_fair_residual(np.real(image)))
    return out


def is_fair(corr, tol: float = TOL_ALG) -> bool:
    return fair_residual(corr) <= tol


# ---------------------------------------------------------------------------
# The sharp involution


def channel_sharp(choi: np.ndarray) -> np.ndarray:
    """Choi matrix of omega -> Phi(omega^t)^t; equals the transposed Choi."""
    return asmatrix(choi).T.copy()


# ---------------------------------------------------------------------------
# Tracial constructors


def build_locally_tracial(chois, weights, dims: tuple[int, int] | None = None,
                          tol: float = TOL_ALG) -> QnsCorrelation:
    """Convex combination sum_j w_j Phi_j (x) Phi_j^sharp as a tracial witness."""
    chois = [asmatrix(c) for c in chois]
    if dims is None:
        raise ValueError("pass dims=(dim_x, dim_a)")
    dim_x, dim_a = dims
    for c in chois:
        cp, tp = channel_defects(c, (dim_x, dim_a), tol)
        if max(cp, tp) > tol:
            raise ValueError(f"term is not a channel (cp {cp:.2e}, tp {tp:.2e})")
    e = abelian_from_chois(chois, weights, dim_x, dim_a)
    return build_tracial(e)


def build_tracial_cqns(e: AlgStochasticMatrix, tol: float = TOL_ALG) -> CqnsCorrelation:
    """Classical-to-quantum tracial correlation from a semi-classical matrix."""
    check_alg_stochastic(e, tol)
    if not e.is_semiclassical(tol):
        raise ValueError("matrix must be semi-classical "
                         f"(defect {e.semiclassical_defect():.3e})")
    states = tracial_states(e)
    dims = CorrelationDims(e.dim_x, e.dim_x, e.dim_a, e.dim_a)
    return CqnsCorrelation(dims, states, TracialWitness(e))


def build_tracial_ns(e: AlgStochasticMatrix, tol: float = TOL_ALG) -> NsCorrelation:
    """Classical tracial correlation p(a, b | x, y) = tau(g[x, a] g[y, b])."""
    check_alg_stochastic(e, tol)
    if not e.is_classical(tol):
        raise ValueError(f"matrix must be classical (defect {e.classical_defect():.3e})")
    table = tracial_table(e)
    dims = CorrelationDims(e.dim_x, e.dim_x, e.dim_a, e.dim_a)
    return NsCorrelation(dims, table, TracialWitness(e))


# ---------------------------------------------------------------------------
# Reciprocal states


def reciprocal_state(e: AlgStochasticMatrix) -> np.ndarray:
    """State on Z (x) Z with entries tau(g[z, z'] g[u', u]).

    ``e`` must be a positive algebra matrix over a single trivial input,
    i.e. an AlgStochasticMatrix with dim_x = 1 and dim_a = |Z|.
    """
    if e.dim_x != 1:
        raise ValueError("reciprocal states come from matrices over a trivial input")
    check_alg_stochastic(e)
    return tracial_choi(e)


def reciprocal_from_state(omega: np.ndarray, tol: float = TOL_ALG) -> AlgStochasticMatrix:
    """Scalar-algebra witness whose reciprocal state is omega (x) omega^t."""
    from .algebra import scalar_algebra
    from .stochastic import StochasticOperatorMatrix
    omega = check_state(omega, tol)
    dim = omega.shape[0]
    block = StochasticOperatorMatrix(1, dim, 1, omega)
    return AlgStochasticMatrix(scalar_algebra(), (block,))


def reciprocal_certificate(weights, states, target: np.ndarray,
                           tol: float = TOL_ALG) -> bool:
    """Check a claimed decomposition sum_j w_j omega_j (x) omega_j^t of ``target``."""
    target = asmatrix(target)
    total = np.zeros_like(target)
    for w, omega in zip(weights, states):
        omega = check_state(omega, max(tol, 1e-7))
        total += float(w) * np.kron(omega, omega.T)
    return float(np.max(np.abs(total - target))) <= tol


def image_reciprocal_witness(corr_witness: AlgStochasticMatrix,
                             rec_witness: AlgStochasticMatrix) -> AlgStochasticMatrix:
    """Witness for the image of a reciprocal state under a tracial correlation.

    Realises h[a, a'] = sum_{x, x'} g[x, x'] (x) g_corr[x, x', a, a'] over the
    tensor-product algebra; the reciprocal state of the result equals the
    image of the input reciprocal state under the tracial correlation.
    """
    if rec_witness.dim_x != 1:
        raise ValueError("second argument must be a reciprocal witness")
    if rec_witness.dim_a != corr_witness.dim_x:
        raise ValueError("dimension mismatch between correlation and reciprocal state")
    return compose_alg(corr_witness, rec_witness)
