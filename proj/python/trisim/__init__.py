"""Stochastic multi-agent dynamics on a dynamic triadic hypergraph.

Thin Python surface over the native engine: parameter handling, configuration
construction, simulation, order parameters, invariant validation, and the
exact-enumeration oracle.
"""

try:
    from ._trisim import (
        Configuration,
        ModelParams,
        init_configuration,
        oracle_gibbs,
        order_parameters,
        run_series,
        simulate,
        validate,
        wasserstein2_sq,
    )
except ImportError:  # in-tree builds keep the module next to the package
    from _trisim import (
        Configuration,
        ModelParams,
        init_configuration,
        oracle_gibbs,
        order_parameters,
        run_series,
        simulate,
        validate,
        wasserstein2_sq,
    )

__all__ = [
    "Configuration",
    "ModelParams",
    "init_configuration",
    "oracle_gibbs",
    "order_parameters",
    "run_series",
    "simulate",
    "validate",
    "wasserstein2_sq",
]
