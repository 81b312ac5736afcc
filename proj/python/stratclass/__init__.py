"""Online strategic classification."""

from ._core import (
    Agent,
    Benchmark,
    Classifier,
    CostModel,
    Dataset,
    Interaction,
    Learner,
    MarginSolution,
    NormKind,
    RunMetrics,
    SolverError,
    certify,
    example_names,
    generate_clusters,
    generate_synthetic,
    interact,
    load_csv,
    make_learner,
    margin_h,
    predict,
    proxy_from_response,
    reproduce_example,
    respond,
    simulate,
    solve_max_margin,
)

__all__ = [
    "Agent",
    "Benchmark",
    "Classifier",
    "CostModel",
    "Dataset",
    "Interaction",
    "Learner",
    "MarginSolution",
    "NormKind",
    "RunMetrics",
    "SolverError",
    "certify",
    "example_names",
    "generate_clusters",
    "generate_synthetic",
    "interact",
    "load_csv",
    "make_learner",
    "margin_h",
    "predict",
    "proxy_from_response",
    "reproduce_example",
    "respond",
    "simulate",
    "solve_max_margin",
]
