"""Single-linkage clustering of sequence terms and the "large set" rule.

A finite prefix cannot carry an ultrafilter, so "infinitely many indices" is
replaced by a size threshold: a set of indices from a prefix of length ``N``
counts as large when it has at least ``ceil(sqrt(N))`` elements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components


def large_size(N: int) -> int:
    return max(1, math.ceil(math.sqrt(N)))


def tail_start(N: int) -> int:
    """First index of the tail window (the last ``ceil(N/2)`` terms)."""
    return N - math.ceil(N / 2)


@dataclass(frozen=True)
class Cluster:
    representative: int  # position in the sequence
    members: tuple[int, ...]
    certificate: tuple[int, ...]  # members within tau of the representative


def single_linkage(D: np.ndarray, tau: float) -> list[np.ndarray]:
    """Components of the graph joining terms at distance ``<= tau``, ordered by
    their smallest member."""
    adj = csr_matrix(D <= tau)
    _, lab = connected_components(adj, directed=False)
    groups = {}
    for pos, c in enumerate(lab):
        groups.setdefault(c, []).append(pos)
    return [np.array(g) for g in sorted(groups.values(), key=lambda g: g[0])]


def accumulation_clusters(D: np.ndarray, tau: float, min_size: int | None = None) -> list[Cluster]:
    """Clusters that look like accumulation points of the sequence whose
    pairwise term distances are ``D``.

    A component qualifies when it is large and still has members in the tail.
    Its representative is the medoid of its tail members; the certificate is
    the set of members within ``tau`` of the representative, and must itself
    be large.
    """
    N = D.shape[0]
    need = large_size(N) if min_size is None else min_size
    t0 = tail_start(N)
    out = []
    for comp in single_linkage(D, tau):
        if comp.size < need:
            continue
        tail = comp[comp >= t0]
        if tail.size == 0:
            continue
        sub = D[np.ix_(tail, tail)]
        rep = int(tail[np.argmin(sub.max(axis=1))])
        cert = comp[D[rep, comp] <= tau]
        if cert.size < need:
            continue
        out.append(Cluster(rep, tuple(comp.tolist()), tuple(cert.tolist())))
    return out
