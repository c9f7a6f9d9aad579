"""Deterministic analytics over trap telemetry: geospatial queries, time
series aggregation, and the statistical tests behind them."""

from .geo import (
    EARTH_RADIUS_KM,
    AdjacencyResult,
    adjacency_report,
    adjacent_pairs,
    device_positions,
    haversine_km,
    heat_points,
    nearest_traps,
    unique_locations,
)
from .queries import (
    BinnedResponse,
    Bucket,
    ExtremeEntry,
    ExtremeReport,
    Granularity,
    HourlyProfile,
    SimilarityReport,
    aggregate_counts,
    binned_response,
    circadian_matrix,
    correlation_matrix,
    daily_sums,
    extremes,
    hourly_outliers,
    hourly_profile,
    region_weekly_stats,
    similarity_report,
    temp_distribution,
    top_n_daily_mean,
)
from .stats import (
    anova,
    f_sf,
    moving_average,
    pearson,
    pearson_test,
    quantile,
    regularized_incomplete_beta,
    sample_std,
    t_sf_two_sided,
    t_test,
)

__all__ = [
    "EARTH_RADIUS_KM",
    "AdjacencyResult",
    "BinnedResponse",
    "Bucket",
    "ExtremeEntry",
    "ExtremeReport",
    "Granularity",
    "HourlyProfile",
    "SimilarityReport",
    "adjacency_report",
    "adjacent_pairs",
    "aggregate_counts",
    "anova",
    "binned_response",
    "circadian_matrix",
    "correlation_matrix",
    "daily_sums",
    "device_positions",
    "extremes",
    "f_sf",
    "haversine_km",
    "heat_points",
    "hourly_outliers",
    "hourly_profile",
    "moving_average",
    "nearest_traps",
    "pearson",
    "pearson_test",
    "quantile",
    "region_weekly_stats",
    "regularized_incomplete_beta",
    "sample_std",
    "similarity_report",
    "t_sf_two_sided",
    "t_test",
    "temp_distribution",
    "top_n_daily_mean",
    "unique_locations",
]
