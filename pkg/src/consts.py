from pathlib import Path


_src_path = Path(__file__).resolve().parent
PARAMS_DIR = _src_path.parent / "params"
EXAMPLE_PARAMS_JSON = PARAMS_DIR / "m2_s3_t2.json"
DEFAULT_RESULTS_DIR = _src_path.parent / "results"

# reserved symbol names
END = "END"
SPADE = "SPADE"
WILDCARD = "*"
FORBIDDEN_SYMBOL_CHARS = (".", "|", "\t", " ", "\n", ",")

DEFAULT_PAIR_MEASURE_C = 4
DEFAULT_SEPARATION_TOL = 1e-9
DEFAULT_MAX_PATHS = 10_000
DEFAULT_CALIBRATION_TTL = 24 * 3600
DEFAULT_MAX_J_CUT = 10
DEFAULT_MAX_BALL_BOX_C_EXPONENT = 10

DUMP_FORMAT_VERSION = 1
