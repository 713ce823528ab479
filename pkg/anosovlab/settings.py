"""Built-in configurations."""

from pathlib import Path

VERSION = "0.1.0"

TOOL_NAME = "anosovlab"

BASE_DIR = Path.home() / ".anosovlab"

CONFIG_PATH = BASE_DIR / "config.json"

PACKAGE_DIR = Path(__file__).resolve().parent

TEMPLATE_DIR = PACKAGE_DIR / "templates"

SCHEMA_DIR = PACKAGE_DIR / "schemas"

THREADS_ENV = "ANOSOV_LAB_THREADS"

# Slopes are measured against the fiber framing: the longitude of an orbit
# is its pushoff by one small constant vector in every fiber.
FRAMING_CONVENTION = "fiber"

FRAMING_DISCLAIMER = (
    "slopes are measured in the fiber framing (longitude = pushoff by a small "
    "constant vector in the fiber); other conventions may differ by a fixed shear"
)

FINGERPRINT_CAVEAT = (
    "H1 equality is a necessary, not a sufficient, condition for the surgered "
    "flow to be the suspension of A or A^-1"
)

CANDIDATE_CAVEAT = "necessary conditions only - membership in Q(gamma,m) not certified"

OUTPUT_FORMATS = ("json", "tsv", "dot")

DEFAULTS = {
    "max_period": 3,
    "max_slope": 3,
    "brute_height": 2,
    "m0": 1,
    "format": "json",
    "threads": 0,
    "c0": "1",
    "t0": 1,
    "kappa3": "1",
    "tau": "1",
}

# Orbit listings walk every point of Fix(A^n) for n <= P; above this many
# points only the census (counted, not enumerated) is available.
MAX_ENUMERATED_POINTS = 1_000_000
