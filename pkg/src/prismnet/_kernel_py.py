"""Pure-Python/numpy fallback for the trial kernel.

Same contract and bit-identical results as the compiled extension: it
consumes the same positions and pair uniforms, with pairs in row-major
condensed order.
"""

from __future__ import annotations

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial.distance import pdist

FAMILY_MIMO = 0
FAMILY_RAYLEIGH = 1
FAMILY_HARD_DISK = 2

BACKEND = "python"


def pair_graph_stats(pos, u, family, beta, eta, r0):
    """Return (component_count, min_degree) of the random link graph."""
    n = pos.shape[0]
    if n == 1:
        return 1, 0
    d2 = pdist(pos, "sqeuclidean")
    if family == FAMILY_MIMO:
        x = beta * d2
        e = np.exp(-x)
        hij = e * (x * x + 2.0 - e)
    elif family == FAMILY_RAYLEIGH:
        hij = np.exp(-beta * d2) if eta == 2.0 else np.exp(-beta * d2 ** (0.5 * eta))
    else:
        hij = (d2 <= r0 * r0).astype(float)
    linked = u < hij
    ii, jj = np.triu_indices(n, k=1)
    ii, jj = ii[linked], jj[linked]
    degree = np.bincount(ii, minlength=n) + np.bincount(jj, minlength=n)
    graph = coo_matrix((np.ones(len(ii)), (ii, jj)), shape=(n, n))
    ncomp = connected_components(graph, directed=False, return_labels=False)
    return int(ncomp), int(degree.min())
