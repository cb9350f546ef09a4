"""No-signalling correlations: quantum, classical-to-quantum and classical.

A QNS correlation is a channel M_{XY} -> M_{AB} stored through its Choi
matrix (rows (x, y, a, b), columns (x', y', a', b')).  Class membership is
certificate based: constructors attach witnesses which can be re-verified,
while :func:`qns_report` checks the defining no-signalling conditions of the
Choi matrix itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import stochastic
from .algebra import AlgStochasticMatrix, compose_alg, tracial_choi
from .linalg import (TOL_ALG, asmatrix, channel_defects, choi_compose,
                     hermiticity_defect, kron, permute_systems, psd_defect)
from .stochastic import StochasticOperatorMatrix

#: Probability tables are validated to this tolerance.
TOL_PROB = 1e-9

#: Negative table entries above this threshold are clamped to zero.
NEG_CLAMP = -1e-12


@dataclass(frozen=True)
class CorrelationDims:
    """Input pair (X, Y) and output pair (A, B) dimensions."""

    x: int
    y: int
    a: int
    b: int

    def __post_init__(self):
        for d in (self.x, self.y, self.a, self.b):
            if int(d) < 1:
                raise ValueError("dimensions must be >= 1")

    @property
    def in_size(self) -> int:
        return self.x * self.y

    @property
    def out_size(self) -> int:
        return self.a * self.b

    @property
    def choi_size(self) -> int:
        return self.in_size * self.out_size


@dataclass(frozen=True)
class LocalWitness:
    """Convex combination of product channels, stored through Choi matrices."""

    weights: tuple[float, ...]
    alice: tuple[np.ndarray, ...]
    bob: tuple[np.ndarray, ...]


@dataclass(frozen=True)
class QuantumWitness:
    """Stochastic operator matrix pair with a shared state.

    ``kind`` is "quantum" for a tensor-product pair on H_A (x) H_B and
    "commuting" for a commuting pair on a single H.
    """

    kind: str
    e: StochasticOperatorMatrix
    f: StochasticOperatorMatrix
    sigma: np.ndarray


@dataclass(frozen=True)
class TracialWitness:
    """Stochastic algebra matrix generating the correlation through its trace."""

    matrix: AlgStochasticMatrix


Witness = Union[LocalWitness, QuantumWitness, TracialWitness]


@dataclass(frozen=True)
class QnsCorrelation:
    dims: CorrelationDims
    choi: np.ndarray
    witness: Witness | None = None

    def __post_init__(self):
        choi = asmatrix(self.choi)
        n = self.dims.choi_size
        if choi.shape != (n, n):
            raise ValueError(f"Choi shape {choi.shape} does not match dims {self.dims}")
        object.__setattr__(self, "choi", choi)

    def choi8(self) -> np.ndarray:
        d = self.dims
        return self.choi.reshape(d.x, d.y, d.a, d.b, d.x, d.y, d.a, d.b)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        d = self.dims
        c = self.choi.reshape(d.in_size, d.out_size, d.in_size, d.out_size)
        return np.einsum("ij,ikjl->kl", asmatrix(rho), c)


@dataclass(frozen=True)
class CqnsCorrelation:
    """Family of output states indexed by classical input pairs."""

    dims: CorrelationDims
    states: np.ndarray  # shape (x, y, a*b, a*b)
    witness: Witness | None = None

    def __post_init__(self):
        states = np.asarray(self.states, dtype=complex)
        d = self.dims
        if states.shape != (d.x, d.y, d.out_size, d.out_size):
            raise ValueError(f"state family shape {states.shape} does not match dims {d}")
        object.__setattr__(self, "states", states)

    def state(self, x: int, y: int) -> np.ndarray:
        return np.array(self.states[x, y])


@dataclass(frozen=True)
class NsCorrelation:
    """Classical no-signalling behaviour p(a, b | x, y)."""

    dims: CorrelationDims
    table: np.ndarray  # shape (x, y, a, b)
    witness: Witness | None = None

    def __post_init__(self):
        d = self.dims
        table = np.asarray(self.table, dtype=float)
        if table.shape != (d.x, d.y, d.a, d.b):
            raise ValueError(f"table shape {table.shape} does not match dims {d}")
        table = np.where((table < 0) & (table > NEG_CLAMP), 0.0, table)
        object.__setattr__(self, "table", table)

    def prob(self, a: int, b: int, x: int, y: int) -> float:
        return float(self.table[x, y, a, b])


@dataclass(frozen=True)
class QnsReport:
    """Residuals of the Choi-matrix no-signalling conditions."""

    hermiticity: float
    psd_defect: float
    tp_residual: float
    b_residual: float
    c_residual: float
    witness_residual: float | None = None
    tol: float = TOL_ALG

    @property
    def ok(self) -> bool:
        extra = self.witness_residual or 0.0
        return max(self.hermiticity, self.psd_defect, self.tp_residual,
                   self.b_residual, self.c_residual, extra) <= self.tol

    def as_dict(self) -> dict:
        out = {
            "hermiticity": self.hermiticity,
            "psd_defect": self.psd_defect,
            "tp_residual": self.tp_residual,
            "b_residual": self.b_residual,
            "c_residual": self.c_residual,
            "pass": self.ok,
            "tol": self.tol,
        }
        if self.witness_residual is not None:
            out["witness_residual"] = self.witness_residual
        return out


def qns_report(corr: QnsCorrelation | np.ndarray, dims: CorrelationDims | None = None,
               tol: float = TOL_ALG, check_witness: bool = True) -> QnsReport:
    """Check PSD, trace preservation and both marginal conditions.

    Condition (b): summing the Choi over the A-diagonal must vanish on
    off-diagonal X blocks and be X-independent on diagonal ones.  Condition
    (c) is the mirror statement for B and Y.
    """
    if isinstance(corr, QnsCorrelation):
        choi, dims = corr.choi, corr.dims
        witness = corr.witness if check_witness else None
    else:
        choi = asmatrix(corr)
        if dims is None:
            raise ValueError("dims required when verifying a bare Choi matrix")
        witness = None
    d = dims
    herm = hermiticity_defect(choi)
    psd = psd_defect(choi, tol=max(tol, 4 * herm)) if herm < 1e-6 else np.inf
    c8 = choi.reshape(d.x, d.y, d.a, d.b, d.x, d.y, d.a, d.b)

    tp = c8.trace(axis1=2, axis2=6).trace(axis1=2, axis2=5)  # sum over a=a', b=b'
    eye_in = np.einsum("ij,kl->ikjl", np.eye(d.x), np.eye(d.y))
    tp_res = float(np.max(np.abs(tp - eye_in.reshape(tp.shape))))

    tb = c8.trace(axis1=2, axis2=6)  # sum_a C[x,y,a,b,x',y',a,b'] -> [x,y,b,x',y',b']
    b_res = _marginal_residual(np.transpose(tb, (0, 3, 1, 4, 2, 5)), d.x)
    tc = c8.trace(axis1=3, axis2=7)  # sum_b -> [x,y,a,x',y',a']
    c_res = _marginal_residual(np.transpose(tc, (1, 4, 0, 3, 2, 5)), d.y)

    wres = witness_residual_or_inf(corr) if witness is not None else None
    return QnsReport(herm, float(psd), tp_res, b_res, c_res, wres, tol)


def _marginal_residual(t: np.ndarray, n: int) -> float:
    """t has shape (n, n, ...); off-diagonal slices must vanish and diagonal
    slices must not depend on the index."""
    off = t.copy()
    idx = np.arange(n)
    diag = t[idx, idx]
    off[idx, idx] = 0.0
    off_res = float(np.max(np.abs(off))) if off.size else 0.0
    diag_res = float(np.max(np.abs(diag - diag.mean(axis=0, keepdims=True)))) if n > 1 else 0.0
    return max(off_res, diag_res)


def is_qns(corr, dims=None, tol: float = TOL_ALG) -> bool:
    return qns_report(corr, dims, tol).ok


@dataclass(frozen=True)
class CqnsReport:
    state_defect: float
    marginal_residual: float
    tol: float = TOL_ALG

    @property
    def ok(self) -> bool:
        return max(self.state_defect, self.marginal_residual) <= self.tol

    def as_dict(self) -> dict:
        return {"state_defect": self.state_defect,
                "marginal_residual": self.marginal_residual,
                "pass": self.ok, "tol": self.tol}


def cqns_report(corr: CqnsCorrelation, tol: float = TOL_ALG) -> CqnsReport:
    d = corr.dims
    sdef = 0.0
    for x in range(d.x):
        for y in range(d.y):
            rho = corr.states[x, y]
            sdef = max(sdef, psd_defect(rho, tol=max(tol, 1e-7)),
                       abs(complex(np.trace(rho)) - 1.0))
    s4 = corr.states.reshape(d.x, d.y, d.a, d.b, d.a, d.b)
    tr_a = s4.trace(axis1=2, axis2=4)  # -> [x, y, b, b']
    tr_b = s4.trace(axis1=3, axis2=5)  # -> [x, y, a, a']
    res_a = float(np.max(np.abs(tr_a - tr_a.mean(axis=0, keepdims=True)))) if d.x > 1 else 0.0
    res_b = float(np.max(np.abs(tr_b - tr_b.mean(axis=1, keepdims=True)))) if d.y > 1 else 0.0
    return CqnsReport(sdef, max(res_a, res_b), tol)


@dataclass(frozen=True)
class NsReport:
    negativity: float
    normalisation: float
    ns_residual: float
    tol: float = TOL_PROB

    @property
    def ok(self) -> bool:
        return max(self.negativity, self.normalisation, self.ns_residual) <= self.tol

    def as_dict(self) -> dict:
        return {"negativity": self.negativity, "normalisation": self.normalisation,
                "ns_residual": self.ns_residual, "pass": self.ok, "tol": self.tol}


def ns_report(corr: NsCorrelation, tol: float = TOL_PROB) -> NsReport:
    t = corr.table
    neg = float(max(0.0, -t.min())) if t.size else 0.0
    norm = float(np.max(np.abs(t.sum(axis=(2, 3)) - 1.0)))
    marg_b = t.sum(axis=2)  # sum over a -> [x, y, b]; must not depend on x
    marg_a = t.sum(axis=3)  # sum over b -> [x, y, a]; must not depend on y
    res = 0.0
    if corr.dims.x > 1:
        res = max(res, float(np.max(np.abs(marg_b - marg_b.mean(axis=0, keepdims=True)))))
    if corr.dims.y > 1:
        res = max(res, float(np.max(np.abs(marg_a - marg_a.mean(axis=1, keepdims=True)))))
    return NsReport(neg, norm, res, tol)


# ---------------------------------------------------------------------------
# Constructors


def from_classical(p: NsCorrelation, tol: float = TOL_PROB) -> QnsCorrelation:
    """Lift a classical no-signalling table to a diagonal-Choi correlation."""
    report = ns_report(p, tol)
    if not report.ok:
        raise ValueError(f"invalid no-signalling table: {report.as_dict()}")
    d = p.dims
    c8 = np.zeros((d.x, d.y, d.a, d.b, d.x, d.y, d.a, d.b), dtype=complex)
    for x in range(d.x):
        for y in range(d.y):
            for a in range(d.a):
                for b in range(d.b):
                    c8[x, y, a, b, x, y, a, b] = p.table[x, y, a, b]
    n = d.choi_size
    return QnsCorrelation(d, c8.reshape(n, n), witness=_pinch_witness(p.witness, d, True))


def _pinch_choi(choi: np.ndarray, dims: tuple[int, int], classical: bool) -> np.ndarray:
    """Zero the off-diagonal input blocks (and output blocks when classical)."""
    din, dout = dims
    c4 = choi.reshape(din, dout, din, dout)
    out = np.zeros_like(c4)
    idx = np.arange(din)
    out[idx, :, idx, :] = c4[idx, :, idx, :]
    if classical:
        only = np.zeros_like(out)
        jdx = np.arange(dout)
        for i in idx:
            only[i, jdx, i, jdx] = out[i, jdx, i, jdx]
        out = only
    return out.reshape(choi.shape)


def _pinch_witness(w: Witness | None, d: CorrelationDims, classical: bool) -> Witness | None:
    """Witness of the correlation precomposed with the input pinching.

    With ``classical`` set, the output pinching is applied as well, giving a
    witness of the fully classical reduction.
    """
    if w is None:
        return None
    if isinstance(w, LocalWitness):
        alice = tuple(_pinch_choi(c, (d.x, d.a), classical) for c in w.alice)
        bob = tuple(_pinch_choi(c, (d.y, d.b), classical) for c in w.bob)
        return LocalWitness(w.weights, alice, bob)
    if isinstance(w, QuantumWitness):
        pinch = stochastic.to_classical if classical else stochastic.to_semiclassical
        return QuantumWitness(w.kind, pinch(w.e), pinch(w.f), w.sigma)
    if isinstance(w, TracialWitness):
        pinch = stochastic.to_classical if classical else stochastic.to_semiclassical
        m = w.matrix
        blocks = tuple(pinch(b) for b in m.blocks)
        return TracialWitness(AlgStochasticMatrix(m.alg, blocks))
    return None


def reduce_cqns(gamma: QnsCorrelation) -> CqnsCorrelation:
    """Restrict to classical inputs: sigma[x, y] = Gamma(e_x e_x* (x) e_y e_y*)."""
    d = gamma.dims
    c8 = gamma.choi8()
    states = np.einsum("xyabxyAB->xyabAB", c8).reshape(d.x, d.y, d.out_size, d.out_size)
    return CqnsCorrelation(d, states, witness=_pinch_witness(gamma.witness, d, False))


def reduce_ns(corr: QnsCorrelation | CqnsCorrelation) -> NsCorrelation:
    """Full classical reduction: pinch outputs and read the diagonal."""
    d = corr.dims
    if isinstance(corr, QnsCorrelation):
        corr = reduce_cqns(corr)
    s4 = corr.states.reshape(d.x, d.y, d.a, d.b, d.a, d.b)
    table = np.real(np.einsum("xyabab->xyab", s4))
    return NsCorrelation(d, table, witness=_pinch_witness(corr.witness, d, True))


def lift_cqns(e: CqnsCorrelation) -> QnsCorrelation:
    """Precompose with the input pinching; the Choi becomes block diagonal."""
    d = e.dims
    c8 = np.zeros((d.x, d.y, d.a, d.b, d.x, d.y, d.a, d.b), dtype=complex)
    s6 = e.states.reshape(d.x, d.y, d.a, d.b, d.a, d.b)
    for x in range(d.x):
        for y in range(d.y):
            c8[x, y, :, :, x, y, :, :] = s6[x, y]
    n = d.choi_size
    return QnsCorrelation(d, c8.reshape(n, n), witness=_pinch_witness(e.witness, d, False))


def _product_choi(choi_a: np.ndarray, choi_b: np.ndarray,
                  d: CorrelationDims) -> np.ndarray:
    big = kron(choi_a, choi_b)
    big = permute_systems(big, (d.x, d.a, d.y, d.b), [0, 2, 1, 3])
    return big


def build_local(weights: Sequence[float], alice: Sequence[np.ndarray],
                bob: Sequence[np.ndarray], dims: CorrelationDims,
                tol: float = TOL_ALG) -> QnsCorrelation:
    """Convex combination of product channels Phi_i (x) Psi_i."""
    weights = [float(w) for w in weights]
    if len(weights) != len(alice) or len(weights) != len(bob):
        raise ValueError("need one weight per channel pair")
    if any(w < -tol for w in weights) or abs(sum(weights) - 1.0) > tol:
        raise ValueError("weights must be non-negative and sum to one")
    d = dims
    choi = np.zeros((d.choi_size, d.choi_size), dtype=complex)
    for w, ca, cb in zip(weights, alice, bob):
        ca, cb = asmatrix(ca), asmatrix(cb)
        for c, io in ((ca, (d.x, d.a)), (cb, (d.y, d.b))):
            cp, tp = channel_defects(c, io, tol)
            if max(cp, tp) > tol:
                raise ValueError(f"term is not a channel (cp {cp:.2e}, tp {tp:.2e})")
        choi += w * _product_choi(ca, cb, d)
    witness = LocalWitness(tuple(weights), tuple(map(np.array, alice)),
                           tuple(map(np.array, bob)))
    return QnsCorrelation(d, choi, witness)


def build_quantum(e: StochasticOperatorMatrix, f: StochasticOperatorMatrix,
                  sigma: np.ndarray, tol: float = TOL_ALG) -> QnsCorrelation:
    """Correlation generated by a tensor pair and a state on H_A (x) H_B."""
    prod = stochastic.tensor(e, f, tol)
    choi = stochastic.channel_choi(prod, sigma, tol)
    dims = CorrelationDims(e.dim_x, f.dim_x, e.dim_a, f.dim_a)
    witness = QuantumWitness("quantum", e, f, np.array(sigma))
    return QnsCorrelation(dims, choi, witness)


def build_commuting(e: StochasticOperatorMatrix, f: StochasticOperatorMatrix,
                    sigma: np.ndarray, tol_comm: float = stochastic.TOL_COMM,
                    tol: float = TOL_ALG) -> QnsCorrelation:
    """Correlation generated by a commuting pair on a common H."""
    prod = stochastic.commuting_product(e, f, tol_comm, tol)
    choi = stochastic.channel_choi(prod, sigma, tol)
    dims = CorrelationDims(e.dim_x, f.dim_x, e.dim_a, f.dim_a)
    witness = QuantumWitness("commuting", e, f, np.array(sigma))
    return QnsCorrelation(dims, choi, witness)


def build_tracial(e: AlgStochasticMatrix) -> QnsCorrelation:
    """Correlation with Choi entries tau(g[x,x',a,a'] g[y',y,b',b])."""
    choi = tracial_choi(e)
    dims = CorrelationDims(e.dim_x, e.dim_x, e.dim_a, e.dim_a)
    return QnsCorrelation(dims, choi, TracialWitness(e))


# ---------------------------------------------------------------------------
# Witness re-verification


def rebuild_from_witness(corr: QnsCorrelation | CqnsCorrelation | NsCorrelation) -> np.ndarray:
    """Recompute the correlation data from its attached witness."""
    w = corr.witness
    if w is None:
        raise ValueError("correlation carries no witness")
    d = corr.dims
    if isinstance(w, LocalWitness):
        choi = np.zeros((d.choi_size, d.choi_size), dtype=complex)
        for wt, ca, cb in zip(w.weights, w.alice, w.bob):
            choi += wt * _product_choi(ca, cb, d)
    elif isinstance(w, QuantumWitness):
        if w.kind == "quantum":
            prod = stochastic.tensor(w.e, w.f)
        else:
            prod = stochastic.commuting_product(w.e, w.f)
        choi = stochastic.channel_choi(prod, w.sigma)
    elif isinstance(w, TracialWitness):
        choi = tracial_choi(w.matrix)
    else:
        raise TypeError(f"unknown witness type {type(w)!r}")
    if isinstance(corr, QnsCorrelation):
        return choi
    lifted = QnsCorrelation(d, choi)
    if isinstance(corr, CqnsCorrelation):
        return reduce_cqns(lifted).states
    return reduce_ns(lifted).table


def witness_residual(corr) -> float:
    """Max deviation between stored data and the witness reconstruction."""
    data = rebuild_from_witness(corr)
    stored = corr.choi if isinstance(corr, QnsCorrelation) else \
        corr.states if isinstance(corr, CqnsCorrelation) else corr.table
    return float(np.max(np.abs(data - stored)))


def witness_residual_or_inf(corr) -> float:
    """Like :func:`witness_residual`, but a broken witness reads as infinite."""
    try:
        return witness_residual(corr)
    except (ValueError, TypeError):
        return float("inf")


# ---------------------------------------------------------------------------
# Composition


def _compose_witness(w2: Witness | None, w1: Witness | None,
                     d1: CorrelationDims, d2: CorrelationDims) -> Witness | None:
    if w1 is None or w2 is None:
        return None
    if isinstance(w1, LocalWitness) and isinstance(w2, LocalWitness):
        weights, alice, bob = [], [], []
        for l1, a1, b1 in zip(w1.weights, w1.alice, w1.bob):
            for l2, a2, b2 in zip(w2.weights, w2.alice, w2.bob):
                weights.append(l1 * l2)
                alice.append(choi_compose(a2, (d2.x, d2.a), a1, (d1.x, d1.a)))
                bob.append(choi_compose(b2, (d2.y, d2.b), b1, (d1.y, d1.b)))
        return LocalWitness(tuple(weights), tuple(alice), tuple(bob))
    if isinstance(w1, QuantumWitness) and isinstance(w2, QuantumWitness) \
            and w1.kind == w2.kind:
        e = stochastic.compose(w2.e, w1.e)
        f = stochastic.compose(w2.f, w1.f)
        sigma = kron(w2.sigma, w1.sigma)
        if w1.kind == "quantum":
            h = (w2.e.dim_h, w2.f.dim_h, w1.e.dim_h, w1.f.dim_h)
            sigma = permute_systems(sigma, h, [0, 2, 1, 3])
        return QuantumWitness(w1.kind, e, f, sigma)
    if isinstance(w1, TracialWitness) and isinstance(w2, TracialWitness):
        return TracialWitness(compose_alg(w2.matrix, w1.matrix))
    return None


def compose_correlations(gamma2: QnsCorrelation, gamma1: QnsCorrelation) -> QnsCorrelation:
    """Channel composition; witnesses of a common class are composed alongside."""
    d1, d2 = gamma1.dims, gamma2.dims
    if (d1.a, d1.b) != (d2.x, d2.y):
        raise ValueError(f"inner dimensions do not match: {(d1.a, d1.b)} vs {(d2.x, d2.y)}")
    choi = choi_compose(gamma2.choi, (d2.in_size, d2.out_size),
                        gamma1.choi, (d1.in_size, d1.out_size))
    dims = CorrelationDims(d1.x, d1.y, d2.a, d2.b)
    witness = _compose_witness(gamma2.witness, gamma1.witness, d1, d2)
    return QnsCorrelation(dims, choi, witness)


def compose_tables(p2: NsCorrelation, p1: NsCorrelation) -> NsCorrelation:
    """p(z, w | x, y) = sum_{a, b} p2(z, w | a, b) p1(a, b | x, y)."""
    d1, d2 = p1.dims, p2.dims
    if (d1.a, d1.b) != (d2.x, d2.y):
        raise ValueError("inner dimensions do not match")
    table = np.einsum("abzw,xyab->xyzw", p2.table, p1.table)
    return NsCorrelation(CorrelationDims(d1.x, d1.y, d2.a, d2.b), table)


def mix_local(corr1: QnsCorrelation, corr2: QnsCorrelation,
              weight: float = 0.5) -> QnsCorrelation:
    """Convex combination of two locally witnessed correlations."""
    w1, w2 = corr1.witness, corr2.witness
    if not (isinstance(w1, LocalWitness) and isinstance(w2, LocalWitness)):
        raise ValueError("both correlations must carry local witnesses")
    if corr1.dims != corr2.dims:
        raise ValueError("dimension mismatch")
    weights = tuple(weight * w for w in w1.weights) + \
        tuple((1 - weight) * w for w in w2.weights)
    witness = LocalWitness(weights, w1.alice + w2.alice, w1.bob + w2.bob)
    choi = weight * corr1.choi + (1 - weight) * corr2.choi
    return QnsCorrelation(corr1.dims, choi, witness)
