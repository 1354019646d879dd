"""
Application constants for ecquiver.
This module centralizes all magic numbers and enumeration bounds.
"""

APP_NAME = "ECQuiver"
APP_HOME_ENV = "ECQUIVER_HOME"  # Overrides the platform application data directory
LOG_FILE_NAME = "ecquiver.log"

# Bondal-Thomsen enumeration
SAMPLED_DENOMINATOR = 60  # Grid denominator for the sampled floor-map oracle
GEOMETRY_MAX_RANK = 3  # Largest rank of M for chamber geometry (weights-only mode above)
SVG_RANK = 2  # Stratum drawings exist only for rank 2
SVG_SIZE_PX = 480  # Side of the drawn fundamental square
SVG_LEGEND_WIDTH_PX = 200

# Cohomology and Cech oracle
CECH_MAX_DIM = 3  # Largest n for P^n Cech computations
CECH_MAX_BOUND = 12  # Largest negative exponent allowed in a truncated Cech complex
MONOMIAL_BOX_LIMIT = 2_000_000  # Lattice points scanned before giving up on a monomial count

# Algebras and finite-field searches
PIC_ENUMERATION_LIMIT = 10**6  # Largest |A| = p^d enumerated for unit counts
PGL_SEARCH_LIMIT = 10**6  # Largest p^(d^2) searched for projective-linear equivalences
ALGEBRA_QUIVER_MAX_DEPTH = 6

# Random property checks
RANDOM_REP_MAX_DIM = 3  # Vertex dimension bound for random representations
DEFAULT_SEED = 0
