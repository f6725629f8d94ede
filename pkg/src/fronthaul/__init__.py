"""Fronthaul rate dimensioning and capacity adaptation for C-RAN wireless fronthaul."""

from .adaptation import (
    AdaptationDecision,
    LegalConfigSet,
    ThrottleState,
    cr_decide,
    no_adaptation_decide,
    sbt_decide,
    sbt_oracle,
)
from .errors import (
    ConfigError,
    FronthaulError,
    InvalidParameterError,
    TraceError,
    TraceParseError,
    TraceValidationError,
)
from .link import AttenuationSample, FronthaulLink, LinkMode, Modulation, select_link_mode, snr_db
from .rates import (
    BeamformerConfig,
    BeamformKind,
    CellConfig,
    RateBreakdown,
    SplitChain,
    SplitPoint,
    access_capacity,
    bf_control_rate,
    fh_rate_generic,
    fh_rate_split_id,
    fh_rate_split_iid,
    symbol_duration,
    total_fh_rate,
)
from .simulation import (
    CellReconfiguration,
    NoAdaptation,
    ScenarioConfig,
    SchedulerThrottling,
    SimulationReport,
    compare_strategies,
    run,
)
from .traces import Trace, TraceSchema, parse_trace, serialize_trace, synth_rain_event

__version__ = "0.1.0"
