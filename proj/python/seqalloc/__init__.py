"""Dynamic VM qualification thresholds, pricing tables and allocation
simulation, backed by the C++ core."""

from ._core import (
    Arrival,
    CapacityEvent,
    ComplexityDistribution,
    DpConfig,
    DpSolution,
    ExponentialComplexity,
    MonteCarloStats,
    PerturbationEntry,
    PerturbationReport,
    PolicyTable,
    PricingParams,
    RevenueQuery,
    Scenario,
    SimResult,
    SimTotals,
    SolverConfig,
    ThresholdCurve,
    TimeGrid,
    TraceRow,
    build_table,
    dp_solve,
    dp_threshold,
    expected_revenue,
    generate_arrivals,
    infinite_limit_threshold,
    j_factor,
    j_factor_direct,
    load_table,
    monte_carlo,
    perturbation_check,
    price,
    qualified_intensity,
    run,
    save_table,
    solve_family,
    solve_threshold,
    waiting_density,
)

__version__ = "0.1.0"

__all__ = [
    "Arrival",
    "CapacityEvent",
    "ComplexityDistribution",
    "DpConfig",
    "DpSolution",
    "ExponentialComplexity",
    "MonteCarloStats",
    "PerturbationEntry",
    "PerturbationReport",
    "PolicyTable",
    "PricingParams",
    "RevenueQuery",
    "Scenario",
    "SimResult",
    "SimTotals",
    "SolverConfig",
    "ThresholdCurve",
    "TimeGrid",
    "TraceRow",
    "build_table",
    "dp_solve",
    "dp_threshold",
    "expected_revenue",
    "generate_arrivals",
    "infinite_limit_threshold",
    "j_factor",
    "j_factor_direct",
    "load_table",
    "monte_carlo",
    "perturbation_check",
    "price",
    "qualified_intensity",
    "run",
    "save_table",
    "solve_family",
    "solve_threshold",
    "waiting_density",
]
