import os
from fractions import Fraction

from .errors import ConfigError

# ------------------------
# Report settings
# ------------------------
SCHEMA_VERSION = "1"
REPORT_FORMATS = ("text", "json")
LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'

# ------------------------
# Oracle / property-suite settings
# ------------------------
ORACLE_N = 4
ORACLE_FACTORS = 2
ORACLE_ALPHAS = ((Fraction(1), Fraction(1)), (Fraction(2), Fraction(3)))
DEFAULT_SEED = 0
RANDOM_ALPHA_PAIRS = 5
PROPERTY_RANDOM_Q = 100
PROPERTY_RANDOM_ALPHAS = 20
ROOT_SWEEP_BOUND = 10 ** 4

# ------------------------
# Spectrum defaults
# ------------------------
DEFAULT_CUTOFF = Fraction(10)


def report_format():
    """Default report format, read from SOLITON_REPORT_FORMAT at call time."""
    value = os.environ.get("SOLITON_REPORT_FORMAT", "text").strip().lower()
    if value not in REPORT_FORMATS:
        raise ConfigError(f"SOLITON_REPORT_FORMAT must be one of {REPORT_FORMATS}, got {value!r}")
    return value


def log_level():
    return os.environ.get("SOLITON_LOG_LEVEL", "WARNING").upper()


def log_file():
    return os.environ.get("SOLITON_LOG_FILE") or None
