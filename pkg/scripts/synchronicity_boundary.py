"""Walk the boundary between synchronous, tracial and fair behaviours.

Three classical fixtures on identical question/answer sets:

  1. projective witnesses give synchronous tracial behaviours;
  2. a non-projective POVM witness stays tracial and fair but picks up
     off-diagonal weight on equal questions;
  3. symmetrised products of disjointly supported behaviours are fair with a
     synchronous-looking diagonal, yet carry no product decomposition with
     equal factors - the structure a tracial witness would force.
"""

import numpy as np

from qnskit.algebra import AlgStochasticMatrix, matrix_algebra
from qnskit.correlations import CorrelationDims, NsCorrelation, ns_report
from qnskit.rand import random_pvm, rng_for
from qnskit.stochastic import from_povms
from qnskit.symmetry import build_tracial_ns, fair_residual


def synchronous_fixture(rng):
    pvms = [random_pvm(rng, 4, 2) for _ in range(2)]
    witness = AlgStochasticMatrix(matrix_algebra(4), (from_povms(pvms),))
    return build_tracial_ns(witness)


def povm_fixture():
    povm = [np.diag([0.7, 0.3]), np.diag([0.3, 0.7])]
    witness = AlgStochasticMatrix(matrix_algebra(2),
                                  (from_povms([povm, povm[::-1]]),))
    return build_tracial_ns(witness)


def fair_non_tracial_fixture():
    # p and q answer deterministically with disjoint supports; the symmetric
    # mixture is fair, all its weight on equal questions sits off the
    # equal-answer diagonal, and no equal-factor product decomposition exists
    p = np.array([[1.0, 0.0], [1.0, 0.0]])  # p(a|x)
    q = np.array([[0.0, 1.0], [0.0, 1.0]])
    table = 0.5 * (np.einsum("xa,yb->xyab", p, q) + np.einsum("xa,yb->xyab", q, p))
    return NsCorrelation(CorrelationDims(2, 2, 2, 2), table)


def describe(name, corr):
    off = max(float(corr.table[x, x, a, b]) for x in range(corr.dims.x)
              for a in range(corr.dims.a) for b in range(corr.dims.b) if a != b)
    diag = max(float(corr.table[x, x, a, a]) for x in range(corr.dims.x)
               for a in range(corr.dims.a))
    print(f"{name:>22}: ns={ns_report(corr).ok} "
          f"fair_residual={fair_residual(corr):.2e} "
          f"max p(a,b|x,x) a!=b: {off:.4f}  max p(a,a|x,x): {diag:.4f}")


def main():
    rng = rng_for(5)
    describe("projective tracial", synchronous_fixture(rng))
    describe("POVM tracial", povm_fixture())
    describe("symmetrised product", fair_non_tracial_fixture())


if __name__ == "__main__":
    main()
