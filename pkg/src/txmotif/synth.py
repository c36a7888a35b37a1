"""Seeded synthetic transaction-network generator with planted patterns.

Produces a background stream (geometric inter-arrivals on an integer-second
grid, uniform random ordered pairs) plus planted structures with known
ground truth: fraudster out-burst clusters, stranger in-bursts at vendor
nodes, friend ping-pong exchanges, friend triangles, 3-node temporal
cycles, and 4-node convey paths. Identical config and seed give identical
output, byte for byte.
"""

from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass, fields
from typing import Iterable

from .graph import TemporalGraph

__all__ = [
    "SynthConfig",
    "SynthResult",
    "generate",
    "PRESETS",
    "preset_config",
    "write_events_csv",
    "write_friends_csv",
    "write_labels_csv",
    "write_config",
    "read_config",
]

DAY = 86400

BACKGROUND_NOTES = (
    "rent",
    "lunch",
    "utilities",
    "groceries",
    "concert tickets",
    "gift",
    "carpool",
)

# Triangle event templates over nodes (A, B, C); one per closed 3-event shape.
_TRIANGLE_SHAPES = (
    ((0, 1), (1, 2), (2, 0)),  # convey + convey
    ((0, 1), (1, 2), (0, 2)),  # convey + in_burst
    ((0, 1), (2, 1), (2, 0)),  # in_burst + out_burst
    ((0, 1), (2, 1), (0, 2)),  # in_burst + weakly_connected
    ((0, 1), (0, 2), (1, 2)),  # out_burst + in_burst
    ((0, 1), (0, 2), (2, 1)),  # out_burst + convey
    ((0, 1), (2, 0), (1, 2)),  # weakly_connected + weakly_connected
    ((0, 1), (2, 0), (2, 1)),  # weakly_connected + out_burst
)


@dataclass
class SynthConfig:
    users: int = 100
    fraudsters: int = 0
    vendors: int = 0
    seed: int = 0
    horizon: int = 90 * DAY
    window: int = 3600
    background_events_per_user: float = 4.0
    fraud_mode: str = "outburst"  # "outburst": tight seller bursts; "inflow": incoming fraud payments
    burst_size_min: int = 4
    burst_size_max: int = 7
    fraud_payments_min: int = 2
    fraud_payments_max: int = 4
    friend_pairs: int = 0
    friend_only_pairs: int = 0
    pingpong_rounds_min: int = 6
    pingpong_rounds_max: int = 10
    vendor_bursts: int = 4
    vendor_burst_size: int = 3
    vendor_refunds: int = 1
    friend_triangles: int = 0
    cycle_count: int = 0
    convey_paths: int = 0
    amount_cents_min: int = 200
    amount_cents_max: int = 15000
    label_role: str = "fraudster"  # which role gets label 1: fraudster | vendor | none

    def validate(self) -> None:
        if self.users < 1:
            raise ValueError("infeasible config: need at least one user")
        if self.horizon <= 0 or self.window <= 0:
            raise ValueError("infeasible config: horizon and window must be positive")
        if self.window >= self.horizon:
            raise ValueError("infeasible config: window must be smaller than the horizon")
        if min(
            self.fraudsters,
            self.vendors,
            self.friend_pairs,
            self.friend_only_pairs,
            self.friend_triangles,
            self.cycle_count,
            self.convey_paths,
        ) < 0 or self.background_events_per_user < 0:
            raise ValueError("infeasible config: counts and rates must be non-negative")
        if self.fraud_mode not in ("outburst", "inflow"):
            raise ValueError(f"unknown fraud_mode {self.fraud_mode!r}")
        if self.label_role not in ("fraudster", "vendor", "none"):
            raise ValueError(f"unknown label_role {self.label_role!r}")
        if self.fraudsters + self.vendors > self.users:
            raise ValueError("infeasible config: more planted roles than users")
        normals = self.users - self.fraudsters - self.vendors
        need = (
            3 * self.friend_triangles
            + 3 * self.cycle_count
            + 2 * self.friend_pairs
            + 2 * self.friend_only_pairs
            + 4 * self.convey_paths
        )
        if need > normals:
            raise ValueError(
                f"infeasible config: planted structures need {need} distinct normal users, have {normals}"
            )
        max_planted = max(
            self.burst_size_max,
            self.fraud_payments_max,
            self.vendor_burst_size + 2 * self.vendor_refunds,
            3,
        )
        if self.window <= max_planted:
            raise ValueError("infeasible config: window too small for planted offsets")
        if self.users >= 2 and self.amount_cents_min >= self.amount_cents_max:
            raise ValueError("infeasible config: empty amount range")


@dataclass
class SynthResult:
    graph: TemporalGraph
    friends: set[tuple[str, str]]
    labels: dict[str, int]
    roles: dict[str, str]
    config: SynthConfig


def _ext(i: int) -> str:
    return f"u{i:05d}"


def _geometric_gap(rng: random.Random, p: float) -> int:
    """Integer gap >= 1 with geometric tail of success probability p."""
    if p >= 1.0:
        return 1
    u = rng.random()
    return 1 + int(math.log(1.0 - u) / math.log(1.0 - p))


def generate(config: SynthConfig) -> SynthResult:
    """Generate (graph, friendships, labels, roles) for the config.

    All randomness flows from one seeded generator consumed in a fixed
    order; event times are integers, amounts are drawn in whole cents.
    """
    config.validate()
    rng = random.Random(config.seed)
    n = config.users

    pool = list(range(n))
    rng.shuffle(pool)
    fraud_set = sorted(pool[: config.fraudsters])
    vendor_set = sorted(pool[config.fraudsters : config.fraudsters + config.vendors])
    normals = sorted(pool[config.fraudsters + config.vendors :])

    # Consume disjoint slices of the shuffled normal pool for each planted
    # structure so they never overlap.
    normal_queue = list(normals)
    rng.shuffle(normal_queue)

    def take(k: int) -> list[int]:
        taken, normal_queue[:] = normal_queue[:k], normal_queue[k:]
        return taken

    triangle_triples = [take(3) for _ in range(config.friend_triangles)]
    cycle_triples = [take(3) for _ in range(config.cycle_count)]
    pp_pairs = [take(2) for _ in range(config.friend_pairs)]
    friend_only = [take(2) for _ in range(config.friend_only_pairs)]
    path_quads = [take(4) for _ in range(config.convey_paths)]

    friends: set[tuple[int, int]] = set()

    def befriend(a: int, b: int) -> None:
        friends.add((a, b) if a < b else (b, a))

    for tri in triangle_triples + cycle_triples:
        befriend(tri[0], tri[1])
        befriend(tri[1], tri[2])
        befriend(tri[0], tri[2])
    for a, b in pp_pairs + friend_only:
        befriend(a, b)

    events: list[tuple[int, int, int, float, str]] = []

    def amount() -> float:
        return rng.randrange(config.amount_cents_min, config.amount_cents_max) / 100

    def offsets(k: int) -> list[int]:
        return sorted(rng.sample(range(1, config.window), k))

    def push(src: int, dst: int, t: int, note: str) -> None:
        events.append((src, dst, t, amount(), note))

    # Background stream. Fraudsters in outburst mode do not send background
    # traffic (their burst replaces it), everyone can receive.
    total_bg = round(n * config.background_events_per_user)
    silent = set(fraud_set) if config.fraud_mode == "outburst" else set()
    senders = [u for u in range(n) if u not in silent]
    if total_bg > 0 and senders:
        p = min(0.5, total_bg / config.horizon)
        t = 0
        produced = 0
        while produced < total_bg:
            t += _geometric_gap(rng, p)
            if t >= config.horizon:
                break
            src = senders[rng.randrange(len(senders))]
            dst = rng.randrange(n - 1)
            if dst >= src:
                dst += 1
            push(src, dst, t, rng.choice(BACKGROUND_NOTES))
            produced += 1

    # Fraudsters.
    if config.fraud_mode == "outburst":
        for f in fraud_set:
            size = rng.randrange(config.burst_size_min, config.burst_size_max + 1)
            anchor = rng.randrange(0, config.horizon - config.window)
            receivers = rng.sample([u for u in range(n) if u != f], size)
            for off, r in zip(offsets(size), receivers):
                push(f, r, anchor + off, "flash sale")
    else:
        for f in fraud_set:
            k = rng.randrange(config.fraud_payments_min, config.fraud_payments_max + 1)
            anchor = rng.randrange(0, config.horizon - config.window)
            payers = rng.sample([u for u in range(n) if u != f], k)
            for off, payer in zip(offsets(k), payers):
                push(payer, f, anchor + off, "fraud payment")

    # Vendors: stranger in-bursts (three payments from two payers), plus an
    # optional refund pair that yields ping-pong and out-burst involvement.
    for v in vendor_set:
        others = [u for u in range(n) if u != v]
        for b in range(config.vendor_bursts):
            x, y = rng.sample(others, 2)
            anchor = rng.randrange(0, config.horizon - config.window)
            refunds = 2 * config.vendor_refunds if b == 0 else 0
            off = offsets(config.vendor_burst_size + refunds)
            payers = [x, y]
            while len(payers) < config.vendor_burst_size:
                payers.append(payers[-2])
            for o, s in zip(off, payers):
                push(s, v, anchor + o, "order")
            for o, r in zip(off[config.vendor_burst_size :], (x, y) * config.vendor_refunds):
                push(v, r, anchor + o, "refund")

    # Friend ping-pong exchanges: each round is one a->b, b->a pair inside
    # the window; rounds sit in separate strips of the horizon.
    for a, b in pp_pairs:
        rounds = rng.randrange(config.pingpong_rounds_min, config.pingpong_rounds_max + 1)
        strip = config.horizon // rounds
        for i in range(rounds):
            anchor = i * strip + rng.randrange(0, max(1, strip - config.window - 1))
            gap = rng.randrange(1, config.window + 1)
            push(a, b, anchor, "splitting the bill")
            push(b, a, anchor + gap, "paying back")

    # Friend triangles, cycling through all eight closed 3-event shapes.
    for i, tri in enumerate(triangle_triples):
        shape = _TRIANGLE_SHAPES[i % len(_TRIANGLE_SHAPES)]
        anchor = rng.randrange(0, config.horizon - config.window)
        for o, (si, di) in zip(offsets(3), shape):
            push(tri[si], tri[di], anchor + o, "dinner split")

    # Planted temporal cycles with gambling-style notes, one per strip.
    if cycle_triples:
        strip = config.horizon // len(cycle_triples)
        for i, (a, b, c) in enumerate(cycle_triples):
            anchor = i * strip + rng.randrange(0, max(1, strip - config.window - 1))
            for o, (s, d) in zip(offsets(3), ((a, b), (b, c), (c, a))):
                push(s, d, anchor + o, rng.choice(("Poker", "poker")))

    # Convey paths over four nodes: chains that must never mine as cycles.
    for a, b, c, d in path_quads:
        anchor = rng.randrange(0, config.horizon - config.window)
        for o, (s, dd) in zip(offsets(3), ((a, b), (b, c), (c, d))):
            push(s, dd, anchor + o, "pass along")

    records = [(_ext(s), _ext(d), t, amt, note) for (s, d, t, amt, note) in events]
    graph = TemporalGraph.from_records(records, extra_ids=[_ext(i) for i in range(n)])

    roles = {_ext(i): "normal" for i in range(n)}
    for f in fraud_set:
        roles[_ext(f)] = "fraudster"
    for v in vendor_set:
        roles[_ext(v)] = "vendor"
    if config.label_role == "none":
        labels = {_ext(i): 0 for i in range(n)}
    else:
        labels = {ext: int(role == config.label_role) for ext, role in roles.items()}
    friends_ext = {(_ext(a), _ext(b)) for a, b in friends}
    return SynthResult(graph, friends_ext, labels, roles, config)


# ---------------------------------------------------------------------------
# Presets
# ---------------------------------------------------------------------------

def _preset_mercari_outburst(seed: int) -> SynthConfig:
    """Seller-side fraud: fraudsters sell to many users within one window."""
    return SynthConfig(
        users=1000,
        fraudsters=100,
        seed=seed,
        background_events_per_user=6.0,
        fraud_mode="outburst",
        label_role="fraudster",
    )


def _preset_jpmc_inflow(seed: int) -> SynthConfig:
    """Receiver-side fraud: a user is labeled after receiving fraud payments."""
    return SynthConfig(
        users=400,
        fraudsters=36,
        seed=seed,
        background_events_per_user=5.0,
        fraud_mode="inflow",
        label_role="fraudster",
    )


def _preset_friendship(seed: int) -> SynthConfig:
    """Friend pairs exchange ping-pongs; strangers pay hub users in bursts."""
    return SynthConfig(
        users=240,
        vendors=8,
        seed=seed,
        background_events_per_user=2.0,
        friend_pairs=92,
        friend_only_pairs=8,
        label_role="none",
    )


def _preset_vendors(seed: int) -> SynthConfig:
    """Planted vendor hubs among friend triangles."""
    return SynthConfig(
        users=500,
        vendors=5,
        seed=seed,
        background_events_per_user=2.0,
        friend_triangles=64,
        label_role="vendor",
    )


def _preset_cycles(seed: int) -> SynthConfig:
    """Planted 3-node cycles with poker notes plus 4-node convey paths."""
    return SynthConfig(
        users=80,
        seed=seed,
        background_events_per_user=1.0,
        cycle_count=8,
        convey_paths=5,
        label_role="none",
    )


PRESETS = {
    "mercari-outburst": _preset_mercari_outburst,
    "jpmc-inflow": _preset_jpmc_inflow,
    "friendship": _preset_friendship,
    "vendors": _preset_vendors,
    "cycles": _preset_cycles,
}


def preset_config(name: str, seed: int = 0) -> SynthConfig:
    try:
        factory = PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    return factory(seed)


# ---------------------------------------------------------------------------
# File emission
# ---------------------------------------------------------------------------

def write_events_csv(graph: TemporalGraph, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("src,dst,time,amount,note\n")
        for e in graph.events:
            amt = "" if e.amount is None else f"{e.amount:.2f}"
            note = e.note or ""
            if "," in note or '"' in note:
                note = '"' + note.replace('"', '""') + '"'
            fh.write(
                f"{graph.external_id(e.src)},{graph.external_id(e.dst)},{e.time},{amt},{note}\n"
            )


def write_friends_csv(friends: Iterable[tuple[str, str]], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("u,v\n")
        for a, b in sorted(friends):
            fh.write(f"{a},{b}\n")


def write_labels_csv(labels: dict[str, int], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("node,label\n")
        for node in sorted(labels):
            fh.write(f"{node},{labels[node]}\n")


def write_config(config: SynthConfig, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for key, value in asdict(config).items():
            fh.write(f"{key}={value}\n")


def read_config(path: str) -> SynthConfig:
    """Parse a flat key=value file back into a config."""
    types = {f.name: f.type for f in fields(SynthConfig)}
    kwargs: dict = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            key = key.strip()
            if not sep or key not in types:
                raise ValueError(f"{path}:{lineno}: bad config line {line!r}")
            t = types[key]
            if t in ("int", int):
                kwargs[key] = int(value.strip())
            elif t in ("float", float):
                kwargs[key] = float(value.strip())
            else:
                kwargs[key] = value.strip()
    return SynthConfig(**kwargs)
