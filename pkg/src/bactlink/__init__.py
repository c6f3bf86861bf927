"""bactlink: agent-based Monte-Carlo simulator of a single-link bacterial nanonetwork.

Bacteria released at a source nanomachine carry DNA-encoded messages toward a
destination nanomachine by biased run-and-tumble motion (chemotaxis), optionally
cooperating through quorum-sensing signal puffs.  The package provides the
motility and field primitives, a deterministic trial engine with a numba-
accelerated kernel and a pure-Python fallback, and a scenario harness that
writes sweep tables (CSV/JSON) for the standard experiments.
"""

from .codec import DecodeError, EncodeError, decode, encode
from .engine import (
    AggregateResult,
    TrialConfig,
    TrialResult,
    UndefinedGainError,
    relative_gain,
    run_replicated,
    run_trial,
)
from .errors import BactlinkError, ConfigError
from .fields import ChemoField, QsPuff, QsPuffField
from .harness import SCENARIOS, Scenario, SweepRow, run_scenario, write_csv, write_json
from .kernels import available_backends, resolve_backend
from .motility import (
    Bacterium,
    SimParams,
    decide_run,
    maybe_emit,
    perceived_signal,
    step,
)

__version__ = "0.1.0"

__all__ = [
    "AggregateResult",
    "BactlinkError",
    "Bacterium",
    "ChemoField",
    "ConfigError",
    "DecodeError",
    "EncodeError",
    "QsPuff",
    "QsPuffField",
    "SCENARIOS",
    "Scenario",
    "SimParams",
    "SweepRow",
    "TrialConfig",
    "TrialResult",
    "UndefinedGainError",
    "available_backends",
    "decide_run",
    "decode",
    "encode",
    "maybe_emit",
    "perceived_signal",
    "relative_gain",
    "resolve_backend",
    "run_replicated",
    "run_scenario",
    "run_trial",
    "step",
    "write_csv",
    "write_json",
    "__version__",
]
