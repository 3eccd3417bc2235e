import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# ---------------------------
# Output and logging
# ---------------------------

# Default report format for qcoh.py ("text" or "json"); --json overrides
OUTPUT_FORMAT = os.getenv("QCOH_OUTPUT_FORMAT", "text")

# Optional log file; empty means log to stderr only
LOG_FILE = os.getenv("QCOH_LOG_FILE", "")
LOG_LEVEL = os.getenv("QCOH_LOG_LEVEL", "WARNING")

# Bumped whenever a JSON report changes shape
SCHEMA_VERSION = 1

# ---------------------------
# Numeric tolerances
# ---------------------------

# Newton multistart: accept a critical point when max |dP| is below this
ROOT_RESIDUAL = float(os.getenv("ROOT_RESIDUAL", 1e-10))
# Roots closer than this are the same root
DUPLICATE_ROOT_DISTANCE = float(os.getenv("DUPLICATE_ROOT_DISTANCE", 1e-7))
NEWTON_MAX_ITER = int(os.getenv("NEWTON_MAX_ITER", 60))

# Seed grid for Newton multistart: radii (scaled by |q|^(1/n)) and angles per radius
SEED_RADII = [float(r) for r in os.getenv("SEED_RADII", "0.6,1.0,1.5").split(",")]
SEED_ANGLES = int(os.getenv("SEED_ANGLES", 12))
DEFAULT_SEED = int(os.getenv("DEFAULT_SEED", 0))

# Residue sum must land this close to an integer
RESIDUE_INTEGER_TOL = float(os.getenv("RESIDUE_INTEGER_TOL", 1e-6))

# Toda RK4: allowed drift of g and h along a trajectory
INTEGRATOR_DRIFT = float(os.getenv("INTEGRATOR_DRIFT", 1e-8))

# Spectrum check: max relation residual at joint eigenvalues, and q samples per space
SPECTRUM_RESIDUAL = float(os.getenv("SPECTRUM_RESIDUAL", 1e-8))
SPECTRUM_SAMPLES = int(os.getenv("SPECTRUM_SAMPLES", 5))
