"""
Runtime configuration loaded from the environment (.env supported)
"""
import os

from dotenv import load_dotenv

load_dotenv()

# Metric scale c in <.,.> = -c B, written as "p/q"
CURV_SCALE = os.getenv("CURV_SCALE", "1/2")

# Optimizer settings
CURV_SEED = int(os.getenv("CURV_SEED", "42"))
CURV_STARTS = int(os.getenv("CURV_STARTS", "64"))
CURV_MAX_ITER = int(os.getenv("CURV_MAX_ITER", "5000"))
CURV_TOL = float(os.getenv("CURV_TOL", "1e-8"))  # gradient norm, relative to max(1, |K|)
CURV_FLAT_BUDGET = int(os.getenv("CURV_FLAT_BUDGET", "16"))
CURV_WORKERS = int(os.getenv("CURV_WORKERS", "1"))  # threads used for multistart

# Logging
LOG_LEVEL = os.getenv("LOG_LEVEL", "WARNING")

# Numeric thresholds (double precision, entries O(1) at c = 1/2)
FLAT_TOL = 1e-10  # sectional numerator below this counts as flat
CENTRALIZER_CUTOFF = 1e-9  # singular values below this count as zero
QK_TOL = 1e-10  # tolerance for the bracket/J identities
AD_INVARIANCE_TOL = 1e-12

# Bumped whenever a preset definition changes
PRESET_CATALOG_VERSION = "1"
