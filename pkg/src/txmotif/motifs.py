"""Temporal motif taxonomy, counting, enumeration, and amount stratification.

A 2-event motif is an ordered pair of events that share an endpoint, have
strictly increasing timestamps, and lie within the counting window. Its
type is one of six pair types, determined by which endpoints coincide
(with first event (u1,v1) and second (u2,v2)):

    repetition        u2=u1 and v2=v1       same edge again
    ping_pong         u2=v1 and v2=u1       edge reversed
    in_burst          v2=v1 and u2!=u1      same target, new source
    out_burst         u2=u1 and v2!=v1      same source, new target
    convey            u2=v1 and v2!=u1      second departs from first's target
    weakly_connected  v2=u1 and u2!=v1      second arrives at first's source

A 3-event motif is an ordered triple in which both consecutive pairs are
node-sharing, strictly increasing, and within the window; its class is the
pair-type sequence of the two consecutive pairs. Events of a motif are a
subsequence of the stream (events in between are allowed), self-loops are
never counted, and equal timestamps never pair. That yields 6 + 36 = 42
classes with a stable canonical encoding 0..41.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable, Iterator

import numpy as np

from .graph import Event, TemporalGraph

__all__ = [
    "PairType",
    "MotifClass",
    "MotifInstance",
    "MotifCensus",
    "PAIR_CLASSES",
    "SEQ_CLASSES",
    "ALL_CLASSES",
    "CLASS_NAMES",
    "CV_BUCKETS",
    "classify_pair",
    "count_motifs",
    "count_motifs_oracle",
    "count_motifs_stratified",
    "count_motifs_refined",
    "enumerate_instances",
    "iter_instances",
    "is_temporal_cycle",
    "coefficient_of_variation",
    "cv_bucket",
    "cv_bucket_of_amounts",
]


class PairType(IntEnum):
    REPETITION = 0
    PING_PONG = 1
    IN_BURST = 2
    OUT_BURST = 3
    CONVEY = 4
    WEAKLY_CONNECTED = 5

    @property
    def short(self) -> str:
        return "RPIOCW"[self.value]

    @property
    def label(self) -> str:
        return self.name.lower()


N_PAIR_TYPES = len(PairType)


def classify_pair(e1: Event, e2: Event) -> PairType | None:
    """Pair type of two node-sharing events, or None when disjoint.

    Requires e1 to come first, strictly distinct timestamps, and no
    self-loops (their pair type is undefined in the taxonomy).
    """
    if e1.time > e2.time:
        raise ValueError("events out of order")
    if e1.time == e2.time:
        raise ValueError("equal timestamps cannot form a motif pair")
    if e1.is_self_loop or e2.is_self_loop:
        raise ValueError("self-loop events have no pair type")
    u1, v1, u2, v2 = e1.src, e1.dst, e2.src, e2.dst
    if u2 == u1:
        return PairType.REPETITION if v2 == v1 else PairType.OUT_BURST
    if u2 == v1:
        return PairType.PING_PONG if v2 == u1 else PairType.CONVEY
    if v2 == v1:
        return PairType.IN_BURST
    if v2 == u1:
        return PairType.WEAKLY_CONNECTED
    return None


@dataclass(frozen=True)
class MotifClass:
    """One of the 42 motif classes: a single pair type or a two-type sequence."""

    first: PairType
    second: PairType | None = None

    @property
    def is_pair(self) -> bool:
        return self.second is None

    @property
    def n_events(self) -> int:
        return 2 if self.second is None else 3

    @property
    def index(self) -> int:
        if self.second is None:
            return int(self.first)
        return N_PAIR_TYPES + N_PAIR_TYPES * int(self.first) + int(self.second)

    @property
    def name(self) -> str:
        if self.second is None:
            return f"pair:{self.first.label}"
        return f"seq:{self.first.label}+{self.second.label}"

    @classmethod
    def pair(cls, p: PairType) -> "MotifClass":
        return cls(p, None)

    @classmethod
    def seq(cls, a: PairType, b: PairType) -> "MotifClass":
        return cls(a, b)

    @classmethod
    def from_index(cls, i: int) -> "MotifClass":
        if not 0 <= i < 42:
            raise ValueError(f"class index {i} out of range")
        if i < N_PAIR_TYPES:
            return cls(PairType(i), None)
        i -= N_PAIR_TYPES
        return cls(PairType(i // N_PAIR_TYPES), PairType(i % N_PAIR_TYPES))

    @classmethod
    def from_name(cls, name: str) -> "MotifClass":
        kind, _, rest = name.partition(":")
        try:
            if kind == "pair":
                return cls(PairType[rest.upper()], None)
            if kind == "seq":
                a, _, b = rest.partition("+")
                return cls(PairType[a.upper()], PairType[b.upper()])
        except KeyError:
            pass
        raise ValueError(f"unknown motif class name {name!r}")


PAIR_CLASSES: tuple[MotifClass, ...] = tuple(MotifClass.pair(p) for p in PairType)
SEQ_CLASSES: tuple[MotifClass, ...] = tuple(
    MotifClass.seq(a, b) for a in PairType for b in PairType
)
ALL_CLASSES: tuple[MotifClass, ...] = PAIR_CLASSES + SEQ_CLASSES
N_CLASSES = len(ALL_CLASSES)
CLASS_NAMES: tuple[str, ...] = tuple(c.name for c in ALL_CLASSES)

CV_BUCKETS: tuple[str, ...] = ("s", "m", "l")


# ---------------------------------------------------------------------------
# Coefficient of variation and its buckets
# ---------------------------------------------------------------------------

def coefficient_of_variation(amounts: Iterable[float]) -> float:
    """Population standard deviation over mean of the given amounts."""
    values = list(amounts)
    if not values or any(a is None for a in values):
        raise ValueError("all amounts must be present")
    if any(a < 0 for a in values):
        raise ValueError("amounts must be non-negative")
    mean = sum(values) / len(values)
    if mean <= 0:
        raise ValueError("coefficient of variation undefined for zero mean")
    var = sum((a - mean) ** 2 for a in values) / len(values)
    return math.sqrt(var) / mean


def cv_bucket(cv: float) -> int:
    """Bucket index for a CV value: 0 for [0,0.5), 1 for [0.5,1), 2 for [1,inf)."""
    if cv < 0:
        raise ValueError("CV cannot be negative")
    if cv < 0.5:
        return 0
    if cv < 1.0:
        return 1
    return 2


def cv_bucket_of_amounts(amounts: Iterable[float]) -> int:
    """CV bucket of an instance's amounts; all-zero amounts go to bucket s."""
    values = list(amounts)
    if any(a is None for a in values):
        raise ValueError("all amounts must be present")
    if sum(values) == 0:
        return 0  # zero dispersion, nothing to normalize by
    return cv_bucket(coefficient_of_variation(values))


# ---------------------------------------------------------------------------
# Census container
# ---------------------------------------------------------------------------

@dataclass
class MotifCensus:
    """Counts per motif class, optionally split by CV bucket or node inclusion.

    ``bucket_counts`` has shape (3, 42) and partitions ``counts``;
    ``with_node``/``without_node`` partition ``counts`` by whether the
    instance's node set contains a designated node.
    """

    counts: np.ndarray
    bucket_counts: np.ndarray | None = None
    with_node: np.ndarray | None = None
    without_node: np.ndarray | None = None

    def __post_init__(self) -> None:
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if self.counts.shape != (N_CLASSES,):
            raise ValueError("census needs one count per class")
        if (self.counts < 0).any():
            raise ValueError("counts must be non-negative")
        if self.bucket_counts is not None:
            self.bucket_counts = np.asarray(self.bucket_counts, dtype=np.int64)
            if not np.array_equal(self.bucket_counts.sum(axis=0), self.counts):
                raise ValueError("bucket counts must partition the class counts")
        if (self.with_node is None) != (self.without_node is None):
            raise ValueError("node split requires both sides")
        if self.with_node is not None:
            self.with_node = np.asarray(self.with_node, dtype=np.int64)
            self.without_node = np.asarray(self.without_node, dtype=np.int64)
            if not np.array_equal(self.with_node + self.without_node, self.counts):
                raise ValueError("node split must partition the class counts")

    @classmethod
    def zeros(cls) -> "MotifCensus":
        return cls(np.zeros(N_CLASSES, dtype=np.int64))

    def get(self, cls_: MotifClass) -> int:
        return int(self.counts[cls_.index])

    def total(self, order: int | None = None) -> int:
        if order == 2:
            return int(self.counts[:N_PAIR_TYPES].sum())
        if order == 3:
            return int(self.counts[N_PAIR_TYPES:].sum())
        return int(self.counts.sum())

    def seq_matrix(self) -> np.ndarray:
        """3-event counts as a 6x6 matrix (row = first pair type, col = second)."""
        return self.counts[N_PAIR_TYPES:].reshape(N_PAIR_TYPES, N_PAIR_TYPES).copy()

    def as_dict(self) -> dict[str, int]:
        return {name: int(c) for name, c in zip(CLASS_NAMES, self.counts)}

    def to_json_obj(self) -> dict:
        obj: dict = {"counts": self.as_dict()}
        if self.bucket_counts is not None:
            obj["bucket_counts"] = {
                bucket: {name: int(c) for name, c in zip(CLASS_NAMES, row)}
                for bucket, row in zip(CV_BUCKETS, self.bucket_counts)
            }
        return obj

    def csv_rows(self) -> list[list[str]]:
        """Rows for the census CSV: class,count or class,count,bucket."""
        if self.bucket_counts is None:
            rows = [["class", "count"]]
            rows += [[name, str(int(c))] for name, c in zip(CLASS_NAMES, self.counts)]
            return rows
        rows = [["class", "count", "bucket"]]
        for b, bucket in enumerate(CV_BUCKETS):
            rows += [
                [name, str(int(c)), bucket]
                for name, c in zip(CLASS_NAMES, self.bucket_counts[b])
            ]
        return rows


# ---------------------------------------------------------------------------
# Instances
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MotifInstance:
    """A concrete 2- or 3-event motif occurrence in a graph."""

    events: tuple[Event, ...]
    event_ids: tuple[int, ...]
    motif_class: MotifClass
    graph: TemporalGraph = field(repr=False, compare=False)

    @property
    def node_set(self) -> frozenset[int]:
        return frozenset(n for e in self.events for n in (e.src, e.dst))

    @property
    def node_count(self) -> int:
        return len(self.node_set)

    @property
    def span(self) -> int:
        return self.events[-1].time - self.events[0].time

    def amounts(self) -> list[float]:
        amounts = [e.amount for e in self.events]
        if any(a is None for a in amounts):
            raise ValueError("instance has events without amounts")
        return amounts

    def validate(self, window: float) -> None:
        """Re-check ordering, node sharing, and gap constraints."""
        for a, b in zip(self.events, self.events[1:]):
            if not (a.time < b.time and b.time - a.time <= window):
                raise AssertionError(f"gap constraint violated: {a} -> {b}")
            if classify_pair(a, b) is None:
                raise AssertionError(f"consecutive events share no node: {a} -> {b}")
        expected = (
            MotifClass.pair(classify_pair(*self.events))
            if len(self.events) == 2
            else MotifClass.seq(
                classify_pair(self.events[0], self.events[1]),
                classify_pair(self.events[1], self.events[2]),
            )
        )
        if expected != self.motif_class:
            raise AssertionError("instance class does not match its events")


def is_temporal_cycle(inst: MotifInstance) -> bool:
    """True for a 3-node convey-convey instance (third event closes the loop)."""
    if len(inst.events) != 3:
        raise ValueError("temporal cycles are 3-event instances")
    return (
        inst.motif_class == MotifClass.seq(PairType.CONVEY, PairType.CONVEY)
        and inst.node_count == 3
    )


# ---------------------------------------------------------------------------
# Counting index: per-node / per-edge time-sorted event lists
# ---------------------------------------------------------------------------

class _CountIndex:
    """Time-sorted incident-event lists for windowed counting (no self-loops).

    For an anchor event (u, v, t) the six pair-type counts in a time range
    reduce to range counts on six lists: the (u,v) and (v,u) edge lists and
    the out/in lists of u and v, with the edge lists subtracted where the
    burst/convey definitions exclude the repeated edge.
    """

    __slots__ = ("events", "out_t", "in_t", "edge_t", "out_ids", "in_ids", "edge_ids")

    def __init__(self, g: TemporalGraph):
        self.events = g.events
        self.out_t: dict[int, list[int]] = {}
        self.in_t: dict[int, list[int]] = {}
        self.edge_t: dict[tuple[int, int], list[int]] = {}
        self.out_ids: dict[int, list[int]] = {}
        self.in_ids: dict[int, list[int]] = {}
        self.edge_ids: dict[tuple[int, int], list[int]] = {}
        for i, e in enumerate(self.events):
            if e.is_self_loop:
                continue
            self.out_t.setdefault(e.src, []).append(e.time)
            self.out_ids.setdefault(e.src, []).append(i)
            self.in_t.setdefault(e.dst, []).append(e.time)
            self.in_ids.setdefault(e.dst, []).append(i)
            key = (e.src, e.dst)
            self.edge_t.setdefault(key, []).append(e.time)
            self.edge_ids.setdefault(key, []).append(i)

    # Range counts. Forward horizon is (t, t+window]; backward is [t-window, t).

    @staticmethod
    def _fwd(ts: list[int] | None, t: int, window: float) -> int:
        if not ts:
            return 0
        return bisect_right(ts, t + window) - bisect_right(ts, t)

    @staticmethod
    def _bwd(ts: list[int] | None, t: int, window: float) -> int:
        if not ts:
            return 0
        return bisect_left(ts, t) - bisect_left(ts, t - window)

    def forward_counts(self, u: int, v: int, t: int, window: float) -> tuple[int, ...]:
        """Successor counts by pair type for anchor (u,v,t) as the first event."""
        rep = self._fwd(self.edge_t.get((u, v)), t, window)
        png = self._fwd(self.edge_t.get((v, u)), t, window)
        inb = self._fwd(self.in_t.get(v), t, window) - rep
        outb = self._fwd(self.out_t.get(u), t, window) - rep
        conv = self._fwd(self.out_t.get(v), t, window) - png
        weak = self._fwd(self.in_t.get(u), t, window) - png
        return (rep, png, inb, outb, conv, weak)

    def backward_counts(self, u: int, v: int, t: int, window: float) -> tuple[int, ...]:
        """Predecessor counts by pair type for anchor (u,v,t) as the second event."""
        rep = self._bwd(self.edge_t.get((u, v)), t, window)
        png = self._bwd(self.edge_t.get((v, u)), t, window)
        inb = self._bwd(self.in_t.get(v), t, window) - rep
        outb = self._bwd(self.out_t.get(u), t, window) - rep
        conv = self._bwd(self.in_t.get(u), t, window) - png
        weak = self._bwd(self.out_t.get(v), t, window) - png
        return (rep, png, inb, outb, conv, weak)

    # Successor id enumeration, per pair type, ascending event id.

    def _slice(self, ids: list[int] | None, ts: list[int] | None, t: int, window: float) -> list[int]:
        if not ids:
            return []
        lo = bisect_right(ts, t)
        hi = bisect_right(ts, t + window)
        return ids[lo:hi]

    def forward_ids(self, u: int, v: int, t: int, window: float, ptype: PairType) -> list[int]:
        """Event ids that extend anchor (u,v,t) forward with the given pair type."""
        if ptype == PairType.REPETITION:
            return self._slice(self.edge_ids.get((u, v)), self.edge_t.get((u, v)), t, window)
        if ptype == PairType.PING_PONG:
            return self._slice(self.edge_ids.get((v, u)), self.edge_t.get((v, u)), t, window)
        if ptype == PairType.IN_BURST:
            base = self._slice(self.in_ids.get(v), self.in_t.get(v), t, window)
            drop = self._slice(self.edge_ids.get((u, v)), self.edge_t.get((u, v)), t, window)
        elif ptype == PairType.OUT_BURST:
            base = self._slice(self.out_ids.get(u), self.out_t.get(u), t, window)
            drop = self._slice(self.edge_ids.get((u, v)), self.edge_t.get((u, v)), t, window)
        elif ptype == PairType.CONVEY:
            base = self._slice(self.out_ids.get(v), self.out_t.get(v), t, window)
            drop = self._slice(self.edge_ids.get((v, u)), self.edge_t.get((v, u)), t, window)
        else:  # WEAKLY_CONNECTED
            base = self._slice(self.in_ids.get(u), self.in_t.get(u), t, window)
            drop = self._slice(self.edge_ids.get((v, u)), self.edge_t.get((v, u)), t, window)
        return _sorted_difference(base, drop)

    def forward_pairs(self, u: int, v: int, t: int, window: float) -> list[tuple[int, PairType]]:
        """All (successor id, pair type) for the anchor, ascending by id."""
        candidates: set[int] = set()
        for ids, ts in (
            (self.out_ids.get(u), self.out_t.get(u)),
            (self.in_ids.get(u), self.in_t.get(u)),
            (self.out_ids.get(v), self.out_t.get(v)),
            (self.in_ids.get(v), self.in_t.get(v)),
        ):
            candidates.update(self._slice(ids, ts, t, window))
        out: list[tuple[int, PairType]] = []
        for j in sorted(candidates):
            e = self.events[j]
            u2, v2 = e.src, e.dst
            if u2 == u:
                ptype = PairType.REPETITION if v2 == v else PairType.OUT_BURST
            elif u2 == v:
                ptype = PairType.PING_PONG if v2 == u else PairType.CONVEY
            elif v2 == v:
                ptype = PairType.IN_BURST
            else:
                ptype = PairType.WEAKLY_CONNECTED
            out.append((j, ptype))
        return out


def _sorted_difference(base: list[int], drop: list[int]) -> list[int]:
    """base minus drop for ascending int lists with drop a subset of base."""
    if not drop:
        return base
    out = []
    k = 0
    for x in base:
        if k < len(drop) and drop[k] == x:
            k += 1
            continue
        out.append(x)
    return out


def _index_for(g: TemporalGraph) -> _CountIndex:
    idx = g._motif_index
    if idx is None:
        idx = _CountIndex(g)
        g._motif_index = idx
    return idx


def _check_window(window: float) -> None:
    if not window > 0:
        raise ValueError(f"window must be positive, got {window}")


def _check_order(order) -> tuple[bool, bool]:
    if order in (2, "2"):
        return True, False
    if order in (3, "3"):
        return False, True
    if order == "both":
        return True, True
    raise ValueError(f"order must be 2, 3 or 'both', got {order!r}")


# ---------------------------------------------------------------------------
# Counting
# ---------------------------------------------------------------------------

def _count_range(
    idx: _CountIndex, start: int, stop: int, window: float, want2: bool, want3: bool
) -> tuple[list[int], list[list[int]]]:
    pair_counts = [0] * N_PAIR_TYPES
    seq_counts = [[0] * N_PAIR_TYPES for _ in range(N_PAIR_TYPES)]
    events = idx.events
    for i in range(start, stop):
        e = events[i]
        u, v, t = e.src, e.dst, e.time
        if u == v:
            continue
        fwd = idx.forward_counts(u, v, t, window)
        if want2:
            for p in range(N_PAIR_TYPES):
                pair_counts[p] += fwd[p]
        if want3 and any(fwd):
            bwd = idx.backward_counts(u, v, t, window)
            for a in range(N_PAIR_TYPES):
                ba = bwd[a]
                if ba:
                    row = seq_counts[a]
                    for b in range(N_PAIR_TYPES):
                        row[b] += ba * fwd[b]
    return pair_counts, seq_counts


def count_motifs(
    g: TemporalGraph,
    window: float,
    order: int | str = "both",
    threads: int = 1,
) -> MotifCensus:
    """Count all motif instances within the window, per class.

    2-event counts anchor on the first event; 3-event counts anchor on the
    middle event and multiply its predecessor and successor counts, which
    is exact because the two consecutive pairs are constrained
    independently. Partitioning anchors over threads cannot change the
    result (integer sums), so any thread count is bit-identical.
    """
    _check_window(window)
    want2, want3 = _check_order(order)
    idx = _index_for(g)
    n = g.n_events
    counts = np.zeros(N_CLASSES, dtype=np.int64)
    if n == 0:
        return MotifCensus(counts)

    chunks: list[tuple[int, int]]
    if threads <= 1 or n < 2 * threads:
        chunks = [(0, n)]
    else:
        step = -(-n // threads)
        chunks = [(s, min(s + step, n)) for s in range(0, n, step)]
    if len(chunks) == 1:
        results = [_count_range(idx, 0, n, window, want2, want3)]
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            results = list(
                pool.map(lambda c: _count_range(idx, c[0], c[1], window, want2, want3), chunks)
            )
    for pair_counts, seq_counts in results:
        for p in range(N_PAIR_TYPES):
            counts[p] += pair_counts[p]
        for a in range(N_PAIR_TYPES):
            base = N_PAIR_TYPES + N_PAIR_TYPES * a
            for b in range(N_PAIR_TYPES):
                counts[base + b] += seq_counts[a][b]
    return MotifCensus(counts)


def count_motifs_oracle(
    g: TemporalGraph,
    window: float,
    order: int | str = "both",
    cap: int = 200,
) -> MotifCensus:
    """Reference census by exhaustive scan over all ordered pairs and triples.

    Independent of the indexed counter; intended for tests. Refuses graphs
    with more than ``cap`` events to bound the cubic scan.
    """
    _check_window(window)
    want2, want3 = _check_order(order)
    events = g.events
    n = len(events)
    if n > cap:
        raise ValueError(f"oracle capped at {cap} events, got {n}")
    counts = np.zeros(N_CLASSES, dtype=np.int64)
    # adj[i][j] holds the pair type for a valid windowed pair i -> j.
    adj: list[dict[int, PairType]] = [dict() for _ in range(n)]
    for i in range(n):
        a = events[i]
        if a.is_self_loop:
            continue
        for j in range(i + 1, n):
            b = events[j]
            if b.is_self_loop:
                continue
            if b.time <= a.time:
                continue
            if b.time - a.time > window:
                break
            ptype = classify_pair(a, b)
            if ptype is not None:
                adj[i][j] = ptype
                if want2:
                    counts[MotifClass.pair(ptype).index] += 1
    if want3:
        for i in range(n):
            for j, p1 in adj[i].items():
                for _k, p2 in adj[j].items():
                    counts[MotifClass.seq(p1, p2).index] += 1
    return MotifCensus(counts)


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

def _make_instance(g: TemporalGraph, ids: tuple[int, ...], cls_: MotifClass) -> MotifInstance:
    return MotifInstance(tuple(g.events[i] for i in ids), ids, cls_, g)


def enumerate_instances(
    g: TemporalGraph,
    window: float,
    motif_class: MotifClass,
    limit: int | None = None,
) -> list[MotifInstance]:
    """Instances of one class, ordered by first event, truncated at limit."""
    _check_window(window)
    if limit is not None and limit < 1:
        raise ValueError("limit must be at least 1")
    idx = _index_for(g)
    out: list[MotifInstance] = []
    events = g.events
    for i, e in enumerate(events):
        if e.is_self_loop:
            continue
        for j in idx.forward_ids(e.src, e.dst, e.time, window, motif_class.first):
            if motif_class.second is None:
                out.append(_make_instance(g, (i, j), motif_class))
                if limit is not None and len(out) >= limit:
                    return out
                continue
            e2 = events[j]
            for k in idx.forward_ids(e2.src, e2.dst, e2.time, window, motif_class.second):
                out.append(_make_instance(g, (i, j, k), motif_class))
                if limit is not None and len(out) >= limit:
                    return out
    return out


def iter_instances(
    g: TemporalGraph,
    window: float,
    order: int | str = "both",
) -> Iterator[tuple[tuple[int, ...], MotifClass]]:
    """Yield (event ids, class) for every instance, ordered by first event.

    Materializes one successor list per event (memoized), so the cost is
    proportional to the number of instances.
    """
    _check_window(window)
    want2, want3 = _check_order(order)
    idx = _index_for(g)
    events = g.events
    memo: dict[int, list[tuple[int, PairType]]] = {}

    def successors(i: int) -> list[tuple[int, PairType]]:
        got = memo.get(i)
        if got is None:
            e = events[i]
            got = idx.forward_pairs(e.src, e.dst, e.time, window)
            memo[i] = got
        return got

    for i, e in enumerate(events):
        if e.is_self_loop:
            continue
        for j, p1 in successors(i):
            if want2:
                yield (i, j), MotifClass.pair(p1)
            if want3:
                for k, p2 in successors(j):
                    yield (i, j, k), MotifClass.seq(p1, p2)


def count_motifs_stratified(
    g: TemporalGraph,
    window: float,
    order: int | str = "both",
) -> MotifCensus:
    """Census with per-class counts split into CV buckets s/m/l.

    Every event must carry an amount; each instance is bucketed by the CV
    of its 2 or 3 amounts. Enumerates instances, so intended for graphs
    where the total instance count is manageable (ego networks, fixtures).
    """
    if not g.all_amounts_present():
        raise ValueError("stratified counting requires an amount on every event")
    counts = np.zeros(N_CLASSES, dtype=np.int64)
    buckets = np.zeros((len(CV_BUCKETS), N_CLASSES), dtype=np.int64)
    events = g.events
    for ids, cls_ in iter_instances(g, window, order):
        b = cv_bucket_of_amounts([events[i].amount for i in ids])
        counts[cls_.index] += 1
        buckets[b, cls_.index] += 1
    return MotifCensus(counts, bucket_counts=buckets)


def count_motifs_refined(g: TemporalGraph, window: float) -> dict[MotifClass, dict[int, int]]:
    """Per-class counts further split by instance node count (2..4)."""
    out: dict[MotifClass, dict[int, int]] = {c: {} for c in ALL_CLASSES}
    events = g.events
    for ids, cls_ in iter_instances(g, window, "both"):
        nodes = set()
        for i in ids:
            nodes.add(events[i].src)
            nodes.add(events[i].dst)
        nc = len(nodes)
        per = out[cls_]
        per[nc] = per.get(nc, 0) + 1
    return out
