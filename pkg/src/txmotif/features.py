"""Feature construction for node- and pair-level classification tasks.

Three families:

* ego motif features: for each of the 42 classes, the share of instances
  in the node's egocentric network whose node set contains the node
  (0 when the class is absent), optionally split by CV bucket;
* simple graph features: seven static descriptors of a node (degree,
  event counts, direction ratios, clustering, cycle probability);
* pair motif features: per class, the number of instances in the whole
  graph containing both nodes of a pair.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .graph import TemporalGraph
from .motifs import (
    ALL_CLASSES,
    CLASS_NAMES,
    CV_BUCKETS,
    N_CLASSES,
    MotifCensus,
    count_motifs,
    count_motifs_stratified,
    iter_instances,
)

__all__ = [
    "EgoMotifVector",
    "SimpleGraphVector",
    "SIMPLE_FEATURE_NAMES",
    "STRATIFIED_FEATURE_NAMES",
    "ego_motif_features",
    "ego_feature_matrix",
    "simple_graph_features",
    "simple_feature_matrix",
    "pair_motif_features",
    "pair_motif_matrix",
    "stratified_ego_features",
    "candidate_pairs",
]

SIMPLE_FEATURE_NAMES: tuple[str, ...] = (
    "degree",
    "event_count",
    "events_per_edge",
    "out_edge_ratio",
    "out_event_ratio",
    "clustering",
    "cycle_probability",
)

# Bucket-major ordering: all 42 classes for bucket s, then m, then l.
STRATIFIED_FEATURE_NAMES: tuple[str, ...] = tuple(
    f"{bucket}:{name}" for bucket in CV_BUCKETS for name in CLASS_NAMES
)


@dataclass(frozen=True)
class EgoMotifVector:
    """Per-class inclusion shares in an egocentric network.

    ``values[i] = with_node[i] / (with_node[i] + without_node[i])``, or 0
    when the class does not occur at all.
    """

    values: np.ndarray
    with_node: np.ndarray
    without_node: np.ndarray


def _inclusion_share(with_node: np.ndarray, without_node: np.ndarray) -> np.ndarray:
    total = with_node + without_node
    return np.divide(
        with_node.astype(np.float64),
        total,
        out=np.zeros(with_node.shape, dtype=np.float64),
        where=total > 0,
    )


def _events_avoiding(g: TemporalGraph, u: int) -> TemporalGraph:
    return g.subgraph(
        [i for i, e in enumerate(g.events) if u != e.src and u != e.dst]
    )


def ego_motif_features(g: TemporalGraph, u: int, window: float) -> EgoMotifVector:
    """42 inclusion-share features of u over its egocentric network.

    An instance avoids u exactly when all of its events avoid u, so the
    without-u counts are the census of the ego network minus u's incident
    events, and the with-u counts follow by subtraction.
    """
    ego = g.ego_network(u)
    total = count_motifs(ego, window).counts
    without = count_motifs(_events_avoiding(ego, u), window).counts
    with_u = total - without
    return EgoMotifVector(_inclusion_share(with_u, without), with_u, without)


def ego_census(g: TemporalGraph, u: int, window: float) -> MotifCensus:
    """Ego-network census carrying the with/without-u split."""
    vec = ego_motif_features(g, u, window)
    return MotifCensus(
        vec.with_node + vec.without_node,
        with_node=vec.with_node,
        without_node=vec.without_node,
    )


def ego_feature_matrix(
    g: TemporalGraph,
    nodes: Sequence[int],
    window: float,
    threads: int = 1,
) -> np.ndarray:
    """Row-per-node matrix of ego motif features; row order follows ``nodes``."""
    if threads <= 1 or len(nodes) < 2:
        rows = [ego_motif_features(g, u, window).values for u in nodes]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda u: ego_motif_features(g, u, window).values, nodes))
    return np.vstack(rows) if rows else np.zeros((0, N_CLASSES))


@dataclass(frozen=True)
class SimpleGraphVector:
    """Static descriptors of one node, computed on the full graph."""

    degree: int
    event_count: int
    events_per_edge: float
    out_edge_ratio: float
    out_event_ratio: float
    clustering: float
    cycle_probability: float

    @property
    def values(self) -> np.ndarray:
        return np.array(
            [
                self.degree,
                self.event_count,
                self.events_per_edge,
                self.out_edge_ratio,
                self.out_event_ratio,
                self.clustering,
                self.cycle_probability,
            ],
            dtype=np.float64,
        )


def simple_graph_features(g: TemporalGraph, u: int) -> SimpleGraphVector:
    """The seven static node features on the full graph's projection.

    Clustering counts directed edges among the neighbors of u over
    k(k-1). The cycle probability is the fraction of triangles through u
    (neighbor pairs connected in some direction) that close into a
    directed 3-cycle; each 3-node set counts once.
    """
    incident = g.incident(u)
    if not incident:
        raise ValueError(f"node {u} has no events")
    proj = g.static_projection()
    nbrs = sorted(proj.neighbors(u))
    k = len(nbrs)
    s = len(incident)
    s_out = sum(1 for i in incident if g.events[i].src == u)
    out_deg = len(proj.out_neighbors(u))
    in_deg = len(proj.in_neighbors(u))

    edges_among = 0
    triangles = 0
    cycles = 0
    for a, b in combinations(nbrs, 2):
        ab = proj.has_edge(a, b)
        ba = proj.has_edge(b, a)
        if ab:
            edges_among += 1
        if ba:
            edges_among += 1
        if ab or ba:
            triangles += 1
            u_a, a_u = proj.has_edge(u, a), proj.has_edge(a, u)
            u_b, b_u = proj.has_edge(u, b), proj.has_edge(b, u)
            if (u_a and ab and b_u) or (u_b and ba and a_u):
                cycles += 1

    return SimpleGraphVector(
        degree=k,
        event_count=s,
        events_per_edge=s / max(k, 1),
        out_edge_ratio=out_deg / (out_deg + in_deg) if out_deg + in_deg else 0.0,
        out_event_ratio=s_out / s,
        clustering=edges_among / (k * (k - 1)) if k > 1 else 0.0,
        cycle_probability=cycles / triangles if triangles else 0.0,
    )


def simple_feature_matrix(g: TemporalGraph, nodes: Sequence[int]) -> np.ndarray:
    rows = [simple_graph_features(g, u).values for u in nodes]
    return np.vstack(rows) if rows else np.zeros((0, len(SIMPLE_FEATURE_NAMES)))


@dataclass(frozen=True)
class PairMotifVector:
    """Per-class counts of whole-graph instances containing both nodes."""

    values: np.ndarray


def pair_motif_features(g: TemporalGraph, u: int, v: int, window: float) -> PairMotifVector:
    """Counts of instances whose node set contains both u and v.

    Computed by inclusion-exclusion over censuses of event subsets: an
    instance avoids a node exactly when all its events do.
    """
    if u == v:
        raise ValueError("pair features need two distinct nodes")
    g._check_node(u)
    g._check_node(v)
    total = count_motifs(g, window).counts
    no_u = count_motifs(_events_avoiding(g, u), window).counts
    no_v = count_motifs(_events_avoiding(g, v), window).counts
    no_uv = count_motifs(_events_avoiding(_events_avoiding(g, u), v), window).counts
    return PairMotifVector(total - no_u - no_v + no_uv)


def pair_motif_matrix(
    g: TemporalGraph,
    pairs: Sequence[tuple[int, int]],
    window: float,
) -> np.ndarray:
    """Pair-feature rows for many pairs via one pass over all instances.

    Enumerates every instance once and scatters it to the requested pairs
    inside its node set, so the cost scales with the total instance count
    rather than with the number of pairs.
    """
    row_of: dict[tuple[int, int], int] = {}
    for r, (u, v) in enumerate(pairs):
        if u == v:
            raise ValueError("pair features need two distinct nodes")
        row_of[(u, v) if u < v else (v, u)] = r
    out = np.zeros((len(pairs), N_CLASSES), dtype=np.int64)
    if not row_of:
        return out
    events = g.events
    for ids, cls_ in iter_instances(g, window, "both"):
        nodes = set()
        for i in ids:
            nodes.add(events[i].src)
            nodes.add(events[i].dst)
        if len(nodes) < 2:
            continue
        for a, b in combinations(sorted(nodes), 2):
            r = row_of.get((a, b))
            if r is not None:
                out[r, cls_.index] += 1
    return out


def stratified_ego_features(g: TemporalGraph, u: int, window: float) -> np.ndarray:
    """126 inclusion-share features: one per (CV bucket, class), bucket-major."""
    ego = g.ego_network(u)
    total = count_motifs_stratified(ego, window).bucket_counts
    without = count_motifs_stratified(_events_avoiding(ego, u), window).bucket_counts
    with_u = total - without
    values = _inclusion_share(with_u, without)
    return values.reshape(-1)


def candidate_pairs(
    txn: TemporalGraph,
    friends: Iterable[tuple[str, str]],
) -> list[tuple[str, str, bool]]:
    """Unordered node pairs with a transaction or a friendship, labeled.

    Pairs are external-id tuples (u < v), sorted, deduplicated; the label
    says whether the pair is in the friendship set.
    """
    friend_set = {tuple(sorted(p)) for p in friends}
    pairs: set[tuple[str, str]] = set(friend_set)
    for e in txn.events:
        if e.src == e.dst:
            continue
        a = txn.external_id(e.src)
        b = txn.external_id(e.dst)
        pairs.add((a, b) if a < b else (b, a))
    return [(u, v, (u, v) in friend_set) for u, v in sorted(pairs)]
