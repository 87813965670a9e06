# Configuration
DEFAULT_MATRIX_CEILING = 10**7       # materialized matrices per family
DEFAULT_TRANSITION_CEILING = 10**7   # diagonal-state transitions per level in the counter
POSET_DENSE_LIMIT = 10**4            # closure bitsets are n x n booleans
ISOMORPHISM_LIMIT = 5000
JOIN_CHECK_LIMIT = 500               # find_join_failure is cubic in the poset size
DEFAULT_HILBERT_CEILING = 7
LARGE_HILBERT_CEILING = 8
DEFAULT_MOBIUS_PROBE_CEILING = 6
DEFAULT_JOBS = 1
PROPERTY_SEED = 20140101            # random pairs for the multiplicativity sweep
PROPERTY_PAIRS = 12
PROGRESS_EVERY = 100000

DEFAULT_DB_PATH = 'tesler_census.db'
DEFAULT_REPORT_FILE = 'tesler_report.json'

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
