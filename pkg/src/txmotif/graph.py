"""Temporal transaction graph: ingestion, static projection, ego networks, timing stats.

The data model is a time-ordered list of directed events over a dense
internal node-id space. External (string) ids are remapped on load and the
mapping is retained for every output surface. Graphs are immutable after
construction; all queries are pure and safe for concurrent readers.
"""

from __future__ import annotations

import csv
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

__all__ = [
    "DataError",
    "Event",
    "TemporalGraph",
    "StaticProjection",
    "GraphStats",
    "load_events",
    "load_friendships",
    "load_labels",
    "compute_stats",
    "suggest_window",
    "HOUR_SECONDS",
]

HOUR_SECONDS = 3600

# Default CSV column names; ``load_events`` accepts a mapping that overrides them.
DEFAULT_COLUMNS = {"src": "src", "dst": "dst", "time": "time", "amount": "amount", "note": "note"}


class DataError(Exception):
    """Raised when an input file cannot be parsed into a valid graph."""


@dataclass(frozen=True)
class Event:
    """One directed, time-stamped transaction between internal node ids."""

    src: int
    dst: int
    time: int
    amount: float | None = None
    note: str | None = None

    @property
    def is_self_loop(self) -> bool:
        return self.src == self.dst


@dataclass(frozen=True)
class GraphStats:
    """Global timing statistics of an event stream.

    ``suggested_window`` is the mean inter-event time divided by the
    connectivity rate; it is None when the connectivity rate is zero.
    """

    event_count: int
    mean_inter_event: float
    connectivity_rate: float
    suggested_window: float | None


class StaticProjection:
    """Directed simple graph obtained by discarding event timestamps.

    Keeps per-edge event multiplicity. Neighbor sets exclude the node
    itself, so self-loop edges appear in ``edge_multiplicity`` only.
    """

    def __init__(self, edge_multiplicity: dict[tuple[int, int], int], nodes: frozenset[int]):
        self.edge_multiplicity = dict(edge_multiplicity)
        self.nodes = nodes
        out: dict[int, set[int]] = defaultdict(set)
        inc: dict[int, set[int]] = defaultdict(set)
        for (u, v) in self.edge_multiplicity:
            if u != v:
                out[u].add(v)
                inc[v].add(u)
        self._out = {u: frozenset(vs) for u, vs in out.items()}
        self._in = {u: frozenset(vs) for u, vs in inc.items()}

    @property
    def n_edges(self) -> int:
        return len(self.edge_multiplicity)

    def _check(self, u: int) -> None:
        if u not in self.nodes:
            raise KeyError(f"unknown node id {u!r}")

    def out_neighbors(self, u: int) -> frozenset[int]:
        self._check(u)
        return self._out.get(u, frozenset())

    def in_neighbors(self, u: int) -> frozenset[int]:
        self._check(u)
        return self._in.get(u, frozenset())

    def neighbors(self, u: int) -> frozenset[int]:
        """All in- and out-neighbors of u, excluding u itself."""
        self._check(u)
        return self.out_neighbors(u) | self.in_neighbors(u)

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edge_multiplicity


class TemporalGraph:
    """Immutable store of time-ordered events over dense internal node ids.

    Events are sorted non-decreasing by time; ties keep ingest order.
    ``external_ids`` maps internal id -> external string id for the whole
    id universe (a subgraph shares its parent's universe).
    """

    def __init__(
        self,
        events: Sequence[Event],
        external_ids: Sequence[str],
        nodes: Iterable[int] | None = None,
    ):
        self._events: tuple[Event, ...] = tuple(sorted(events, key=lambda e: e.time))
        self._ext_ids: tuple[str, ...] = tuple(external_ids)
        self._ext_index: dict[str, int] = {ext: i for i, ext in enumerate(self._ext_ids)}
        if len(self._ext_index) != len(self._ext_ids):
            raise ValueError("duplicate external ids")
        endpoint_nodes = {n for e in self._events for n in (e.src, e.dst)}
        if nodes is None:
            self._nodes = frozenset(endpoint_nodes)
        else:
            self._nodes = frozenset(nodes) | endpoint_nodes
        for n in self._nodes:
            if not 0 <= n < len(self._ext_ids):
                raise ValueError(f"node id {n} outside the id universe")
        for e in self._events:
            if e.amount is not None and e.amount < 0:
                raise ValueError(f"negative amount on event {e}")
        self._incident_cache: dict[int, tuple[int, ...]] | None = None
        self._projection_cache: StaticProjection | None = None
        self._motif_index = None  # built lazily by the motif engine

    # -- construction ------------------------------------------------------

    @classmethod
    def from_records(
        cls,
        records: Iterable[tuple],
        extra_ids: Iterable[str] = (),
    ) -> "TemporalGraph":
        """Build a graph from (src, dst, time[, amount[, note]]) records.

        Ids may be any hashable rendered with str(); internal ids are
        assigned densely by first appearance, then ``extra_ids`` (isolated
        nodes allowed) are appended.
        """
        ext_ids: list[str] = []
        index: dict[str, int] = {}

        def intern(ext) -> int:
            key = str(ext)
            i = index.get(key)
            if i is None:
                i = len(ext_ids)
                index[key] = i
                ext_ids.append(key)
            return i

        events = []
        for rec in records:
            src, dst, time = rec[0], rec[1], rec[2]
            amount = rec[3] if len(rec) > 3 else None
            note = rec[4] if len(rec) > 4 else None
            events.append(Event(intern(src), intern(dst), int(time), amount, note))
        extra_nodes = [intern(x) for x in extra_ids]
        nodes = {n for e in events for n in (e.src, e.dst)} | set(extra_nodes)
        return cls(events, ext_ids, nodes)

    def subgraph(self, event_ids: Iterable[int], nodes: Iterable[int] | None = None) -> "TemporalGraph":
        """Graph over a subset of this graph's events, sharing its id universe."""
        kept = [self._events[i] for i in sorted(event_ids)]
        return TemporalGraph(kept, self._ext_ids, nodes)

    def with_nodes(self, extra_nodes: Iterable[int]) -> "TemporalGraph":
        """Same events, with additional (possibly isolated) known nodes."""
        return TemporalGraph(self._events, self._ext_ids, self._nodes | set(extra_nodes))

    # -- basic accessors ---------------------------------------------------

    @property
    def events(self) -> tuple[Event, ...]:
        return self._events

    @property
    def n_events(self) -> int:
        return len(self._events)

    @property
    def nodes(self) -> frozenset[int]:
        return self._nodes

    @property
    def n_nodes(self) -> int:
        return len(self._nodes)

    @property
    def external_ids(self) -> tuple[str, ...]:
        return self._ext_ids

    def external_id(self, u: int) -> str:
        return self._ext_ids[u]

    def internal_id(self, ext: str) -> int:
        try:
            return self._ext_index[ext]
        except KeyError:
            raise KeyError(f"unknown external id {ext!r}") from None

    def has_external(self, ext: str) -> bool:
        return ext in self._ext_index

    @property
    def self_loop_count(self) -> int:
        return sum(1 for e in self._events if e.is_self_loop)

    def all_amounts_present(self) -> bool:
        return all(e.amount is not None for e in self._events)

    def _check_node(self, u: int) -> None:
        if u not in self._nodes:
            raise KeyError(f"unknown node id {u!r}")

    # -- queries -----------------------------------------------------------

    def incident(self, u: int) -> tuple[int, ...]:
        """Indices of events having u as an endpoint (self-loops once)."""
        self._check_node(u)
        if self._incident_cache is None:
            acc: dict[int, list[int]] = defaultdict(list)
            for i, e in enumerate(self._events):
                acc[e.src].append(i)
                if e.dst != e.src:
                    acc[e.dst].append(i)
            self._incident_cache = {n: tuple(ix) for n, ix in acc.items()}
        return self._incident_cache.get(u, ())

    def neighbors(self, u: int) -> frozenset[int]:
        """Nodes with an event to or from u; excludes u itself."""
        self._check_node(u)
        out = set()
        for i in self.incident(u):
            e = self._events[i]
            out.add(e.src)
            out.add(e.dst)
        out.discard(u)
        return frozenset(out)

    def ego_network(self, u: int) -> "TemporalGraph":
        """One-hop egocentric subgraph: u, its neighbors, and all events among them."""
        self._check_node(u)
        keep_nodes = self.neighbors(u) | {u}
        ids = [i for i, e in enumerate(self._events) if e.src in keep_nodes and e.dst in keep_nodes]
        return self.subgraph(ids, nodes=keep_nodes)

    def static_projection(self) -> StaticProjection:
        """Directed edge set with per-edge event multiplicity."""
        if self._projection_cache is None:
            mult: dict[tuple[int, int], int] = defaultdict(int)
            for e in self._events:
                mult[(e.src, e.dst)] += 1
            self._projection_cache = StaticProjection(mult, self._nodes)
        return self._projection_cache

    def stats(self) -> GraphStats:
        return compute_stats(self)


# ---------------------------------------------------------------------------
# Timing statistics and the counting-window heuristic
# ---------------------------------------------------------------------------

def compute_stats(g: TemporalGraph) -> GraphStats:
    """Mean inter-event time, connectivity rate, and the suggested window.

    The mean inter-event time averages the gaps between globally
    consecutive events. The connectivity rate is the fraction of those
    consecutive pairs that share at least one endpoint. Their ratio is the
    suggested motif-counting window (None when the rate is zero).
    """
    events = g.events
    n = len(events)
    if n < 2:
        raise ValueError("stats require at least 2 events")
    gap_sum = 0
    shared = 0
    for i in range(n - 1):
        a, b = events[i], events[i + 1]
        gap_sum += b.time - a.time
        if a.src in (b.src, b.dst) or a.dst in (b.src, b.dst):
            shared += 1
    delta = gap_sum / (n - 1)
    gamma = shared / (n - 1)
    window = (delta / gamma) if gamma > 0 else None
    return GraphStats(n, delta, gamma, window)


def suggest_window(
    stats: GraphStats,
    rounding: str = "none",
    override: float | None = None,
) -> float:
    """Counting window from the timing stats, under the chosen rounding.

    ``rounding`` is "none" or "nearest-hour". Nearest-hour rounds half up
    and never returns less than one hour, so sub-hour suggestions become
    one hour. ``override`` bypasses the heuristic and is returned verbatim.
    """
    if override is not None:
        return float(override)
    if rounding not in ("none", "nearest-hour"):
        raise ValueError(f"unknown rounding mode {rounding!r}")
    if stats.suggested_window is None:
        raise ValueError("connectivity rate is zero; the window is undefined (use override)")
    raw = stats.suggested_window
    if rounding == "none":
        return raw
    hours = math.floor(raw / HOUR_SECONDS + 0.5)
    return float(max(1, hours) * HOUR_SECONDS)


# ---------------------------------------------------------------------------
# CSV loaders
# ---------------------------------------------------------------------------

def _open_csv(path: str):
    try:
        return open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc


def load_events(
    path: str,
    columns: Mapping[str, str] | None = None,
    extra_ids: Iterable[str] = (),
) -> TemporalGraph:
    """Load an event CSV (header ``src,dst,time[,amount][,note]``).

    ``columns`` remaps the expected logical names to the file's header
    names. Malformed rows raise DataError with the offending line number.
    """
    cols = dict(DEFAULT_COLUMNS)
    if columns:
        cols.update(columns)
    records = []
    with _open_csv(path) as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise DataError(f"{path}: empty file (missing header)")
        for required in ("src", "dst", "time"):
            if cols[required] not in reader.fieldnames:
                raise DataError(f"{path}: missing required column {cols[required]!r}")
        has_amount = cols["amount"] in reader.fieldnames
        has_note = cols["note"] in reader.fieldnames
        for row in reader:
            line = reader.line_num
            src = row[cols["src"]]
            dst = row[cols["dst"]]
            if src is None or dst is None or src == "" or dst == "":
                raise DataError(f"{path}:{line}: missing src/dst")
            try:
                time = int(row[cols["time"]])
            except (TypeError, ValueError):
                raise DataError(f"{path}:{line}: bad timestamp {row[cols['time']]!r}") from None
            amount = None
            if has_amount:
                raw = row[cols["amount"]]
                if raw not in (None, ""):
                    try:
                        amount = float(raw)
                    except ValueError:
                        raise DataError(f"{path}:{line}: bad amount {raw!r}") from None
                    if amount < 0:
                        raise DataError(f"{path}:{line}: negative amount {amount}")
            note = None
            if has_note:
                raw = row[cols["note"]]
                if raw not in (None, ""):
                    note = raw
            records.append((src, dst, time, amount, note))
    return TemporalGraph.from_records(records, extra_ids=extra_ids)


def load_friendships(path: str) -> set[tuple[str, str]]:
    """Load an undirected friendship CSV (header ``u,v``), deduplicated."""
    pairs: set[tuple[str, str]] = set()
    with _open_csv(path) as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"u", "v"} <= set(reader.fieldnames):
            raise DataError(f"{path}: expected header u,v")
        for row in reader:
            u, v = row["u"], row["v"]
            if not u or not v:
                raise DataError(f"{path}:{reader.line_num}: missing node id")
            if u == v:
                continue
            pairs.add((u, v) if u < v else (v, u))
    return pairs


def load_labels(path: str) -> dict[str, int]:
    """Load a binary node-label CSV (header ``node,label``)."""
    labels: dict[str, int] = {}
    with _open_csv(path) as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"node", "label"} <= set(reader.fieldnames):
            raise DataError(f"{path}: expected header node,label")
        for row in reader:
            node = row["node"]
            raw = row["label"]
            if raw not in ("0", "1"):
                raise DataError(f"{path}:{reader.line_num}: label must be 0 or 1, got {raw!r}")
            labels[node] = int(raw)
    return labels
