"""Country collaboration graphs: edge-list parsing, serialization and a
seeded synthetic generator.

Edge-list format (UTF-8, LF)::

    source,target,weight
    A,A,2
    A,B,3

A row whose source equals its target is a self-loop (domestic
collaboration). Rows naming the same unordered pair accumulate.
"""

from __future__ import annotations

import math
import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    EmptyCountryLabel,
    MalformedRow,
    MissingHeader,
    NonPositiveWeight,
    TooFewCountries,
)

HEADER = "source,target,weight"

_INT_RE = re.compile(r"-?[0-9]+")


def canonical_pair(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


def valid_label(label: str) -> bool:
    return bool(label) and "," not in label and label == label.strip() and "\n" not in label


@dataclass(frozen=True)
class CollaborationGraph:
    """Undirected weighted country graph with self-loops.

    ``edges`` maps canonical pairs ``(a, b)`` with ``a <= b`` to a positive
    integer weight. Every node must touch at least one edge.
    """

    nodes: frozenset[str] = frozenset()
    edges: Mapping[tuple[str, str], int] = field(default_factory=dict)

    def __post_init__(self):
        touched = set()
        for (a, b), w in self.edges.items():
            if a > b:
                raise ValueError(f"non-canonical pair ({a!r}, {b!r})")
            if not isinstance(w, (int, np.integer)) or isinstance(w, bool) or w <= 0:
                raise ValueError(f"weight of ({a!r}, {b!r}) must be a positive integer, got {w!r}")
            if a not in self.nodes or b not in self.nodes:
                raise ValueError(f"edge ({a!r}, {b!r}) has an endpoint outside the node set")
            touched.update((a, b))
        isolated = set(self.nodes) - touched
        if isolated:
            raise ValueError(f"isolated nodes are not representable: {sorted(isolated)}")
        for label in self.nodes:
            if not valid_label(label):
                raise ValueError(f"invalid country label {label!r}")

    @classmethod
    def from_rows(cls, rows: Iterable[tuple[str, str, int]]) -> CollaborationGraph:
        """Build a graph from ``(source, target, weight)`` rows, summing duplicates."""
        edges: dict[tuple[str, str], int] = {}
        for a, b, w in rows:
            key = canonical_pair(a, b)
            edges[key] = edges.get(key, 0) + int(w)
        nodes = frozenset(n for pair in edges for n in pair)
        return cls(nodes, edges)

    def weight(self, a: str, b: str) -> int:
        return self.edges.get(canonical_pair(a, b), 0)

    def self_weight(self, a: str) -> int:
        return self.edges.get((a, a), 0)

    def __len__(self):
        return len(self.nodes)


def parse_edge_list(text: str) -> CollaborationGraph:
    """Parse the ``source,target,weight`` edge-list format.

    Raises a :class:`~collabnet.errors.ParseError` subclass carrying the
    offending 1-based line number.
    """
    if text.startswith("\ufeff"):
        text = text[1:]
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0].rstrip("\r") != HEADER:
        raise MissingHeader(1, f"expected header {HEADER!r}")

    rows = []
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.rstrip("\r")
        fields = line.split(",")
        if len(fields) != 3:
            raise MalformedRow(lineno, f"expected 3 fields, got {len(fields)}")
        source, target, weight = fields
        for label in (source, target):
            if label.strip() == "":
                raise EmptyCountryLabel(lineno, "empty country label")
            if label != label.strip():
                raise MalformedRow(lineno, f"country label {label!r} has surrounding whitespace")
        if not _INT_RE.fullmatch(weight):
            raise NonPositiveWeight(lineno, f"weight {weight!r} is not an integer")
        w = int(weight)
        if w <= 0:
            raise NonPositiveWeight(lineno, f"weight must be positive, got {w}")
        rows.append((source, target, w))
    return CollaborationGraph.from_rows(rows)


def write_graph(graph: CollaborationGraph) -> str:
    """Serialize ``graph`` with canonical, lexicographically sorted rows."""
    out = [HEADER]
    for (a, b) in sorted(graph.edges):
        out.append(f"{a},{b},{graph.edges[(a, b)]}")
    return "\n".join(out) + "\n"


# Synthetic populations:
#   hub      - many partners, large self-loop weight, low external share
#   regional - few partners, external share pinned at REGIONAL_SHARE_PCT
#   nascent  - one or two partners, high external share, often no self-loop
POPULATION_SHARES = (0.4, 0.4, 0.2)
REGIONAL_SHARE_PCT = 25
HUB_SHARE_RANGE = (5.0, 15.0)
NASCENT_SHARE_RANGE = (85.0, 100.0)


def _population_sizes(n: int) -> tuple[int, int, int]:
    n_hub = int(math.floor(POPULATION_SHARES[0] * n))
    n_reg = int(math.floor(POPULATION_SHARES[1] * n))
    return n_hub, n_reg, n - n_hub - n_reg


def synthesize_graph(seed: int, n_countries: int) -> CollaborationGraph:
    """Generate a reproducible three-population collaboration graph.

    Hub countries form a clique; every other country links only to hubs.
    Regional countries take 2-4 hub partners (a fixed 2,3,4 rotation) and
    carry exactly ``REGIONAL_SHARE_PCT`` percent external weight; nascent
    countries take 1-2 hub partners, and the first of them has no
    self-loop at all.

    Shares are ordered hub < regional < nascent and partner counts
    nascent <= regional < hub, which keeps the high-share/high-partner
    quadrant empty under median cuts for every ``n_countries >= 4``.
    """
    if n_countries < 4:
        raise TooFewCountries(f"need at least 4 countries, got {n_countries}")
    n_hub, n_reg, n_nas = _population_sizes(n_countries)

    root = np.random.SeedSequence(seed)
    rng_edges, rng_self = (np.random.default_rng(s) for s in root.spawn(2))

    width = len(str(n_countries))
    labels = [f"C{i:0{width}d}" for i in range(1, n_countries + 1)]
    order = rng_edges.permutation(n_countries)
    hubs = [labels[i] for i in order[:n_hub]]
    regional = [labels[i] for i in order[n_hub:n_hub + n_reg]]
    nascent = [labels[i] for i in order[n_hub + n_reg:]]

    external: dict[tuple[str, str], int] = {}
    for i, a in enumerate(hubs):
        for b in hubs[i + 1:]:
            external[canonical_pair(a, b)] = int(rng_edges.integers(1, 21))

    lo = min(2, n_hub)
    for j, c in enumerate(regional):
        m = min(2 + j % 3, n_hub)
        for h in rng_edges.choice(n_hub, size=m, replace=False):
            external[canonical_pair(c, hubs[h])] = int(rng_edges.integers(1, 11))
    for c in nascent:
        m = int(rng_edges.integers(1, lo + 1))
        for h in rng_edges.choice(n_hub, size=m, replace=False):
            external[canonical_pair(c, hubs[h])] = int(rng_edges.integers(5, 21))

    ext_weight = dict.fromkeys(labels, 0)
    for (a, b), w in external.items():
        ext_weight[a] += w
        ext_weight[b] += w

    edges = dict(external)
    for c in hubs:
        target = rng_self.uniform(*HUB_SHARE_RANGE)
        e = ext_weight[c]
        edges[(c, c)] = math.ceil(e * (100.0 - target) / target)
    ratio = (100 - REGIONAL_SHARE_PCT) // REGIONAL_SHARE_PCT
    for c in regional:
        edges[(c, c)] = ratio * ext_weight[c]
    for j, c in enumerate(nascent):
        if j == 0 or rng_self.random() < 0.5:
            continue
        target = rng_self.uniform(*NASCENT_SHARE_RANGE)
        # >= 1 keeps "fully external" equivalent to "no self-loop"; share stays >= 83%
        edges[(c, c)] = max(1, math.floor(ext_weight[c] * (100.0 - target) / target))

    return CollaborationGraph(frozenset(labels), edges)
