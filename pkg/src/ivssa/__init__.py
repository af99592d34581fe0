"""Singular spectrum analysis for interval-valued time series.

Decomposes interval series into trend, cycle and noise parts through a
symbolic covariance of the endpoint pair channels, picks the number of
components with a residual-whiteness test, and forecasts by a linear
recurrence on the selected eigenspace.  Several series can be analysed
jointly by stacking their trajectory matrices.
"""

from .core import (
    CsvError,
    DegenerateSpectrumError,
    Interval,
    IntervalSeries,
    InvalidValueError,
    IvssaError,
    OrderedPair,
    PairMatrix,
    ParameterError,
    ShapeError,
    VerticalityError,
    c_norm,
    hausdorff,
    is_hankel,
    minkowski_add,
    minkowski_sub,
    phi,
    phi_arrays,
)
from .decomposition import (
    DEFAULT_RANK_EPS,
    Decomposition,
    EigenPairs,
    decompose,
    decompose_stacked,
    eigen_sym,
    elementary_matrices,
    pair_cross_covariance,
    stacked_covariance,
    symbolic_covariance,
)
from .embedding import StackingMode, default_window, stack, trajectory
from .forecasting import (
    ForecastResult,
    OosResult,
    RecurrenceCoefficients,
    default_l_grid,
    forecast_recurrent,
    recurrence_coefficients,
    select_params_oos,
)
from .io import json_dumps, read_csv, write_json, write_series_csv, write_table_csv
from .reconstruction import (
    ErcSet,
    Grouping,
    diagonal_average,
    extract_series,
    group,
    hankelize,
    hankelize_pairs,
    reconstruct_ercs,
    trendline,
)
from .simulation import (
    METHODS,
    McReport,
    McRow,
    McSelectionRow,
    ScenarioConfig,
    ScenarioData,
    hausdorff_residual_mean,
    run_monte_carlo,
    simulate_scenario,
)
from .spectral import (
    PeriodogramResult,
    SelectionResult,
    autocov,
    interval_residuals,
    ks_critical_value,
    periodogram,
    residual_whiteness,
    select_components,
    select_from_decomposition,
)

__version__ = "0.1.0"

__all__ = [
    "CsvError",
    "DEFAULT_RANK_EPS",
    "Decomposition",
    "DegenerateSpectrumError",
    "EigenPairs",
    "ErcSet",
    "ForecastResult",
    "Grouping",
    "Interval",
    "IntervalSeries",
    "InvalidValueError",
    "IvssaError",
    "METHODS",
    "McReport",
    "McRow",
    "McSelectionRow",
    "OosResult",
    "OrderedPair",
    "PairMatrix",
    "ParameterError",
    "PeriodogramResult",
    "RecurrenceCoefficients",
    "ScenarioConfig",
    "ScenarioData",
    "SelectionResult",
    "ShapeError",
    "StackingMode",
    "VerticalityError",
    "autocov",
    "c_norm",
    "decompose",
    "decompose_stacked",
    "default_l_grid",
    "default_window",
    "diagonal_average",
    "eigen_sym",
    "elementary_matrices",
    "extract_series",
    "forecast_recurrent",
    "group",
    "hankelize",
    "hankelize_pairs",
    "hausdorff",
    "hausdorff_residual_mean",
    "interval_residuals",
    "is_hankel",
    "json_dumps",
    "ks_critical_value",
    "minkowski_add",
    "minkowski_sub",
    "pair_cross_covariance",
    "periodogram",
    "phi",
    "phi_arrays",
    "read_csv",
    "reconstruct_ercs",
    "recurrence_coefficients",
    "residual_whiteness",
    "run_monte_carlo",
    "select_components",
    "select_from_decomposition",
    "select_params_oos",
    "simulate_scenario",
    "stack",
    "stacked_covariance",
    "symbolic_covariance",
    "trajectory",
    "trendline",
    "write_json",
    "write_series_csv",
    "write_table_csv",
]
