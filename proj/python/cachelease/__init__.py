"""Edge-cache leasing and content placement optimizer.

The heavy lifting lives in the C++ extension; this package re-exports the
main operations and keeps the config-dict conventions documented in one
place (see docs/config.schema.json in the source tree).
"""

from cachelease._core import (
    ConfigError,
    SolverError,
    generate_topology,
    run_sweep,
    solve,
    zipf_pmf,
)

__all__ = [
    "ConfigError",
    "SolverError",
    "generate_topology",
    "run_sweep",
    "solve",
    "zipf_pmf",
]

__version__ = "0.1.0"
