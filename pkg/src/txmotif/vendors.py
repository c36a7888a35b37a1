"""Vendor discovery, friend/stranger motif comparison, and cycle mining.

Transactions split into two graphs by friendship status: TF (between
friends) and TN (between non-friends). Vendor-suggesting patterns are
counted on TN with the candidate in a named role, anti-vendor patterns on
TF in any role, and the score is ln(pos+1) - ln(neg+1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .graph import TemporalGraph
from .motifs import (
    MotifClass,
    MotifInstance,
    PairType,
    count_motifs,
    enumerate_instances,
    is_temporal_cycle,
)

__all__ = [
    "Pattern",
    "PatternSet",
    "RatioHeatmap",
    "VendorReport",
    "CycleReport",
    "NoteMatch",
    "TRIANGLE_SEQ_CLASSES",
    "split_tf_tn",
    "tn_tf_ratio_heatmap",
    "vendor_score",
    "vendor_scores",
    "rank_vendors",
    "mine_cycles",
    "search_notes",
]

ROLE_ANY = "any"
ROLE_RECEIVER = "receiver"            # target is the destination of every event
ROLE_FIRST_RECEIVER = "first_receiver"  # target is the destination of the first event

# The eight 3-event classes whose 3-node instances put the three events on
# three distinct node pairs (a closed triangle shape).
TRIANGLE_SEQ_CLASSES: tuple[MotifClass, ...] = (
    MotifClass.seq(PairType.CONVEY, PairType.CONVEY),
    MotifClass.seq(PairType.CONVEY, PairType.IN_BURST),
    MotifClass.seq(PairType.IN_BURST, PairType.OUT_BURST),
    MotifClass.seq(PairType.IN_BURST, PairType.WEAKLY_CONNECTED),
    MotifClass.seq(PairType.OUT_BURST, PairType.IN_BURST),
    MotifClass.seq(PairType.OUT_BURST, PairType.CONVEY),
    MotifClass.seq(PairType.WEAKLY_CONNECTED, PairType.WEAKLY_CONNECTED),
    MotifClass.seq(PairType.WEAKLY_CONNECTED, PairType.OUT_BURST),
)


@dataclass(frozen=True)
class Pattern:
    """A motif class plus the role the scored node must fill in an instance."""

    name: str
    motif_class: MotifClass
    role: str
    node_count: int | None = None

    def target_nodes(self, inst: MotifInstance) -> tuple[int, ...]:
        """Nodes credited with this instance (empty when the role is unfilled)."""
        if self.node_count is not None and inst.node_count != self.node_count:
            return ()
        if self.role == ROLE_ANY:
            return tuple(sorted(inst.node_set))
        if self.role == ROLE_FIRST_RECEIVER:
            return (inst.events[0].dst,)
        if self.role == ROLE_RECEIVER:
            dsts = {e.dst for e in inst.events}
            return tuple(dsts) if len(dsts) == 1 else ()
        raise ValueError(f"unknown role {self.role!r}")

    def matches(self, inst: MotifInstance, u: int) -> bool:
        return inst.motif_class == self.motif_class and u in self.target_nodes(inst)


def _default_positive() -> tuple[Pattern, ...]:
    ib, pp, rep = PairType.IN_BURST, PairType.PING_PONG, PairType.REPETITION
    return (
        Pattern("inburst_receiver", MotifClass.pair(ib), ROLE_RECEIVER),
        Pattern("pingpong_first_receiver", MotifClass.pair(pp), ROLE_FIRST_RECEIVER),
        # Three payments into the target from two distinct payers.
        Pattern("triple_inflow_rep_then_inburst", MotifClass.seq(rep, ib), ROLE_RECEIVER),
        Pattern("triple_inflow_two_payers", MotifClass.seq(ib, ib), ROLE_RECEIVER, node_count=3),
        Pattern("triple_inflow_inburst_then_rep", MotifClass.seq(ib, rep), ROLE_RECEIVER),
        # Payments in, then the target refunds one payer.
        Pattern("inflow_then_refund", MotifClass.seq(ib, pp), ROLE_FIRST_RECEIVER),
        Pattern("refund_then_inflow", MotifClass.seq(pp, ib), ROLE_FIRST_RECEIVER),
    )


@dataclass(frozen=True)
class PatternSet:
    """Seven vendor-suggesting patterns and eight anti-vendor patterns."""

    positive: tuple[Pattern, ...]
    negative: tuple[Pattern, ...]

    def __post_init__(self) -> None:
        if len(self.positive) != 7:
            raise ValueError(f"expected 7 positive patterns, got {len(self.positive)}")
        if len(self.negative) != 8:
            raise ValueError(f"expected 8 negative patterns, got {len(self.negative)}")

    @classmethod
    def with_triangle_negatives(cls) -> "PatternSet":
        """Fixed negatives: the eight triangle-shaped 3-event classes."""
        negative = tuple(
            Pattern(f"triangle_{c.first.short}{c.second.short}".lower(), c, ROLE_ANY, node_count=3)
            for c in TRIANGLE_SEQ_CLASSES
        )
        return cls(_default_positive(), negative)

    @classmethod
    def from_data(cls, tf: TemporalGraph, tn: TemporalGraph, window: float) -> "PatternSet":
        """Negatives recomputed per dataset: the eight 3-event classes with the
        smallest TN-to-TF count ratio (classes with zero TF count rank last)."""
        tf_counts = count_motifs(tf, window, order=3).counts
        tn_counts = count_motifs(tn, window, order=3).counts
        seq = [c for c in _seq_classes()]

        def ratio(c: MotifClass) -> float:
            t = tf_counts[c.index]
            return tn_counts[c.index] / t if t > 0 else math.inf

        chosen = sorted(seq, key=lambda c: (ratio(c), c.index))[:8]
        negative = tuple(
            Pattern(f"low_ratio_{c.first.short}{c.second.short}".lower(), c, ROLE_ANY)
            for c in chosen
        )
        return cls(_default_positive(), negative)


def _seq_classes() -> Iterable[MotifClass]:
    for a in PairType:
        for b in PairType:
            yield MotifClass.seq(a, b)


# ---------------------------------------------------------------------------
# TF / TN split and comparison
# ---------------------------------------------------------------------------

def split_tf_tn(
    txn: TemporalGraph,
    friends: Iterable[tuple[str, str]],
) -> tuple[TemporalGraph, TemporalGraph]:
    """Partition events into (between-friends, between-non-friends) graphs.

    Both graphs keep the full node universe of the input so every node
    stays addressable on either side.
    """
    friend_internal = set()
    for a, b in friends:
        if txn.has_external(a) and txn.has_external(b):
            ia, ib = txn.internal_id(a), txn.internal_id(b)
            friend_internal.add((ia, ib) if ia < ib else (ib, ia))
    tf_ids, tn_ids = [], []
    for i, e in enumerate(txn.events):
        key = (e.src, e.dst) if e.src < e.dst else (e.dst, e.src)
        (tf_ids if key in friend_internal else tn_ids).append(i)
    tf = txn.subgraph(tf_ids, nodes=txn.nodes)
    tn = txn.subgraph(tn_ids, nodes=txn.nodes)
    return tf, tn


@dataclass(frozen=True)
class RatioHeatmap:
    """Per 3-event class: TN count / TF count (NaN where TF is zero).

    Rows index the first pair type, columns the second, both in the
    canonical order R, P, I, O, C, W.
    """

    tn_counts: np.ndarray
    tf_counts: np.ndarray
    ratios: np.ndarray

    def csv_rows(self) -> list[list[str]]:
        labels = [p.short for p in PairType]
        rows = [["first\\second"] + labels]
        for a, label in enumerate(labels):
            row = [label]
            for b in range(len(labels)):
                r = self.ratios[a, b]
                row.append("undefined" if math.isnan(r) else repr(float(r)))
            rows.append(row)
        return rows

    def to_json_obj(self) -> dict:
        labels = [p.short for p in PairType]
        return {
            "labels": labels,
            "tn_counts": self.tn_counts.tolist(),
            "tf_counts": self.tf_counts.tolist(),
            "ratios": [
                [None if math.isnan(x) else float(x) for x in row] for row in self.ratios
            ],
        }


def tn_tf_ratio_heatmap(
    tf: TemporalGraph, tn: TemporalGraph, window: float
) -> RatioHeatmap:
    """6x6 ratio of TN to TF 3-event motif counts, NaN-flagged when TF is 0."""
    tf_m = count_motifs(tf, window, order=3).seq_matrix()
    tn_m = count_motifs(tn, window, order=3).seq_matrix()
    ratios = np.divide(
        tn_m.astype(np.float64),
        tf_m,
        out=np.full(tf_m.shape, math.nan),
        where=tf_m > 0,
    )
    return RatioHeatmap(tn_m, tf_m, ratios)


# ---------------------------------------------------------------------------
# Vendor scores
# ---------------------------------------------------------------------------

def _pattern_participation(
    g: TemporalGraph, window: float, patterns: Iterable[Pattern]
) -> dict[int, int]:
    counts: dict[int, int] = {}
    for pattern in patterns:
        for inst in enumerate_instances(g, window, pattern.motif_class):
            for u in pattern.target_nodes(inst):
                counts[u] = counts.get(u, 0) + 1
    return counts


def vendor_scores(
    tf: TemporalGraph,
    tn: TemporalGraph,
    window: float,
    patterns: PatternSet,
) -> dict[int, tuple[float, int, int]]:
    """Score, positive count, and negative count per node id."""
    pos = _pattern_participation(tn, window, patterns.positive)
    neg = _pattern_participation(tf, window, patterns.negative)
    out: dict[int, tuple[float, int, int]] = {}
    for u in tf.nodes | tn.nodes:
        p = pos.get(u, 0)
        n = neg.get(u, 0)
        out[u] = (math.log(p + 1) - math.log(n + 1), p, n)
    return out


def vendor_score(
    u: int,
    tf: TemporalGraph,
    tn: TemporalGraph,
    window: float,
    patterns: PatternSet,
) -> float:
    """ln(pos+1) - ln(neg+1) for one node; unknown nodes score 0.0."""
    scores = vendor_scores(tf, tn, window, patterns)
    return scores.get(u, (0.0, 0, 0))[0]


@dataclass(frozen=True)
class VendorReport:
    rank: int
    node: str
    score: float
    pos_count: int
    neg_count: int


def rank_vendors(
    tf: TemporalGraph,
    tn: TemporalGraph,
    window: float,
    patterns: PatternSet,
    k: int,
) -> list[VendorReport]:
    """Top-k nodes by vendor score; ties break on external id."""
    if k < 1:
        raise ValueError("k must be at least 1")
    scores = vendor_scores(tf, tn, window, patterns)
    ranked = sorted(scores.items(), key=lambda item: (-item[1][0], tf.external_id(item[0])))
    return [
        VendorReport(rank=r + 1, node=tf.external_id(u), score=s, pos_count=p, neg_count=n)
        for r, (u, (s, p, n)) in enumerate(ranked[:k])
    ]


# ---------------------------------------------------------------------------
# Temporal cycles and note search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CycleReport:
    cycles: tuple[MotifInstance, ...]
    cycle_count: int
    three_event_total: int
    share: float


def mine_cycles(g: TemporalGraph, window: float, limit: int | None = None) -> CycleReport:
    """All 3-node convey-convey instances, plus their share of 3-event motifs."""
    if limit is not None and limit < 1:
        raise ValueError("limit must be at least 1")
    convey = MotifClass.seq(PairType.CONVEY, PairType.CONVEY)
    cycles = [
        inst
        for inst in enumerate_instances(g, window, convey)
        if is_temporal_cycle(inst)
    ]
    total = count_motifs(g, window, order=3).total(3)
    share = len(cycles) / total if total else 0.0
    kept = cycles if limit is None else cycles[:limit]
    return CycleReport(tuple(kept), len(cycles), total, share)


class NoteMatch(NamedTuple):
    sender: str
    receiver: str
    time: int
    note: str


def search_notes(instances: Iterable[MotifInstance], keyword: str) -> list[NoteMatch]:
    """Case-insensitive substring search over the notes of instance events.

    Events are deduplicated (an event may sit in several instances) and
    returned in time order.
    """
    needle = keyword.lower()
    seen: set[tuple[int, int]] = set()
    matches: list[tuple[int, int, NoteMatch]] = []
    for inst in instances:
        g = inst.graph
        for i, e in zip(inst.event_ids, inst.events):
            key = (id(g), i)
            if key in seen:
                continue
            seen.add(key)
            if e.note and needle in e.note.lower():
                matches.append(
                    (e.time, i, NoteMatch(g.external_id(e.src), g.external_id(e.dst), e.time, e.note))
                )
    matches.sort(key=lambda m: (m[0], m[1]))
    return [m[2] for m in matches]
