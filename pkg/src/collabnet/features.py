"""Per-country connection features, quadrant classification and extremes."""

from __future__ import annotations

import enum
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .errors import EmptyFeatureList, EmptyGraph, InvalidParameter
from .graph_io import CollaborationGraph

FEATURES_HEADER = "country,self_weight,external_weight,distinct_partners,external_share_pct"


@dataclass(frozen=True)
class CountryFeatures:
    country: str
    self_weight: int
    external_weight: int
    distinct_partners: int
    external_share_pct: float

    @property
    def point(self) -> tuple[float, float]:
        """``(distinct_partners, external_share_pct)``: horizontal, vertical."""
        return (float(self.distinct_partners), self.external_share_pct)


@dataclass(frozen=True)
class QuadrantThresholds:
    share_cut: float
    partners_cut: float

    @classmethod
    def checked(cls, share_cut: float, partners_cut: float) -> QuadrantThresholds:
        """Construct user-supplied cuts, enforcing 0 < share_cut < 100 and partners_cut > 0."""
        if not 0.0 < share_cut < 100.0:
            raise InvalidParameter(f"share_cut must lie in (0, 100), got {share_cut}")
        if not partners_cut > 0.0:
            raise InvalidParameter(f"partners_cut must be positive, got {partners_cut}")
        return cls(float(share_cut), float(partners_cut))


class Quadrant(str, enum.Enum):
    # "top" = high external share, "right" = many distinct partners
    BOTTOM_LEFT = "BottomLeft"
    BOTTOM_RIGHT = "BottomRight"
    TOP_LEFT = "TopLeft"
    TOP_RIGHT = "TopRight"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ExtremesReport:
    top_right: str
    bottom_left: str
    fully_external: tuple[str, ...]


def share_pct(self_weight: int, external_weight: int) -> float:
    return 100.0 * external_weight / (self_weight + external_weight)


def compute_features(graph: CollaborationGraph) -> list[CountryFeatures]:
    """One feature record per country, sorted by label."""
    if not graph.nodes:
        raise EmptyGraph("graph has no countries")
    self_w = dict.fromkeys(graph.nodes, 0)
    ext_w = dict.fromkeys(graph.nodes, 0)
    partners = dict.fromkeys(graph.nodes, 0)
    for (a, b), w in graph.edges.items():
        if a == b:
            self_w[a] += w
        else:
            ext_w[a] += w
            ext_w[b] += w
            partners[a] += 1
            partners[b] += 1
    return [
        CountryFeatures(c, self_w[c], ext_w[c], partners[c], share_pct(self_w[c], ext_w[c]))
        for c in sorted(graph.nodes)
    ]


def classify_point(share: float, partners: float, thresholds: QuadrantThresholds) -> Quadrant:
    top = share > thresholds.share_cut
    right = partners > thresholds.partners_cut
    if top:
        return Quadrant.TOP_RIGHT if right else Quadrant.TOP_LEFT
    return Quadrant.BOTTOM_RIGHT if right else Quadrant.BOTTOM_LEFT


def classify_quadrant(features: CountryFeatures, thresholds: QuadrantThresholds) -> Quadrant:
    """Quadrant of a country; points exactly on a cut go down/left."""
    return classify_point(features.external_share_pct, features.distinct_partners, thresholds)


def _median(values: Sequence[float]) -> float:
    return float(np.median(np.asarray(values, dtype=float)))


def median_thresholds(features: Sequence[CountryFeatures]) -> QuadrantThresholds:
    """Per-axis medians as quadrant cuts.

    Not range-checked: degenerate data (e.g. only self-loops) legitimately
    yields a zero cut.
    """
    if not features:
        raise EmptyFeatureList("no features to take medians of")
    return QuadrantThresholds(
        share_cut=_median([f.external_share_pct for f in features]),
        partners_cut=_median([f.distinct_partners for f in features]),
    )


def quadrant_counts(features: Sequence[CountryFeatures], thresholds: QuadrantThresholds) -> dict[Quadrant, int]:
    counts = dict.fromkeys(Quadrant, 0)
    for f in features:
        counts[classify_quadrant(f, thresholds)] += 1
    return counts


def extremes(features: Sequence[CountryFeatures]) -> ExtremesReport:
    if not features:
        raise EmptyFeatureList("no features to rank")
    top = min(features, key=lambda f: (-f.distinct_partners, -f.external_share_pct, f.country))
    bottom = min(features, key=lambda f: (f.distinct_partners, f.external_share_pct, f.country))
    full = tuple(sorted(f.country for f in features if f.self_weight == 0))
    return ExtremesReport(top.country, bottom.country, full)


def features_to_csv(features: Sequence[CountryFeatures]) -> str:
    lines = [FEATURES_HEADER]
    for f in sorted(features, key=lambda f: f.country):
        lines.append(
            f"{f.country},{f.self_weight},{f.external_weight},"
            f"{f.distinct_partners},{f.external_share_pct:.6f}"
        )
    return "\n".join(lines) + "\n"


def parse_features_csv(text: str) -> list[CountryFeatures]:
    """Inverse of :func:`features_to_csv` (share rounded to 6 decimals)."""
    lines = text.rstrip("\n").split("\n")
    if lines[0] != FEATURES_HEADER:
        raise ValueError("not a features CSV")
    out = []
    for line in lines[1:]:
        c, s, e, p, pct = line.split(",")
        out.append(CountryFeatures(c, int(s), int(e), int(p), float(pct)))
    return out
