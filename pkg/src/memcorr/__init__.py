"""Two-qubit correlation dynamics through noisy channels with memory."""

from .channels import (
    ChannelKind,
    DampingParameter,
    KrausSet,
    MemoryChannel,
    apply_memory_channel,
    closed_form_elements,
    correlated_kraus,
    uncorrelated_kraus,
)
from .errors import ChannelIntegrityError, NoTransitionError, UsageError
from .measures import (
    CorrelationReport,
    MeasurementAngles,
    concurrence,
    correlation_report,
    discord_oracle,
    discord_xstate,
    mutual_information,
)
from .states import BellDiagonalBlend, is_initially_entangled, make_initial
from .sweep import SweepConfig, TransitionQuery, find_transition, run_sweep

__version__ = "0.1.0"
