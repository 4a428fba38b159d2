from .app import App, run_autopilot
from .autopilot import ScriptedOperator, StuckError
from .config import AppConfig, ConfigError, config_hash, from_dict, load_config
from .recording import SessionRecorder, make_header
from .replay import RecordError, read_record, replay

__all__ = [
    "App",
    "run_autopilot",
    "ScriptedOperator",
    "StuckError",
    "AppConfig",
    "ConfigError",
    "config_hash",
    "from_dict",
    "load_config",
    "SessionRecorder",
    "make_header",
    "RecordError",
    "read_record",
    "replay",
]
