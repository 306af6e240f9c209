# ============================================================
# FIELDS
# ============================================================
DEFAULT_PRIME = 2           # used by random generators and the oracle command

# ============================================================
# WITNESS SEARCH
# ============================================================
DEFAULT_SEED         = 0x5EED        # seed schedule start, recorded in every report
RANDOM_ATTEMPTS      = 8             # random candidates per search over ℚ
RANDOM_COEFF_BOUND   = 5             # random integer coefficients lie in [-B, B]
ENUMERATION_LIMIT    = 4096          # exhaustive search over F_p when p^dim ≤ limit

# ============================================================
# BAR RESOLUTION
# ============================================================
NILPOTENCY_SEARCH_BOUND = 8          # longest reduced path searched for
MAX_BAR_DEPTH           = 6          # hard cap on word length

# ============================================================
# ORACLE / RANDOM FIXTURES
# ============================================================
ORACLE_INSTANCES    = 100
RANDOM_MAX_DIM      = 3             # per component, before tensoring with a complex
RANDOM_TOTAL_DIM    = 12

# ============================================================
# PARALLEL WORK
# ============================================================
MAX_WORKERS = 8
