"""Country collaboration-network analysis: connection features, k-means
clustering of countries, and a two-compartment growth model."""

from .dynamics import (
    ModelParams,
    Trajectory,
    TrajectoryPoint,
    closed_form_x,
    derivatives,
    fig3_curve,
    foreign_share_asymptote,
    simulate,
    step_rk4,
)
from .features import (
    CountryFeatures,
    ExtremesReport,
    Quadrant,
    QuadrantThresholds,
    classify_quadrant,
    compute_features,
    extremes,
    median_thresholds,
)
from .graph_io import CollaborationGraph, parse_edge_list, synthesize_graph, write_graph
from .clustering import ClusterModel, FeaturePoint, assign, kmeans, kmeans_pp_seed, standardize

__version__ = "0.1.0"
