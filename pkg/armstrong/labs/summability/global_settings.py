"""
Default settings. A module named by DJANGO_SETTINGS_MODULE may override any
of these; names it leaves out keep the values below.

"""
import os

SEED = 42

# Largest number of m-tuples a mixed power sum may enumerate
TUPLE_BUDGET = 10 ** 8
ORACLE_TUPLE_BUDGET = 10 ** 5

# Multistart projected ascent
SEARCH_RESTARTS = 64
SEARCH_MAX_ITER = 500
SEARCH_TOL = 1e-10

# The l1 cube has 2**d vertices
VERTEX_MAX_DIM = 20

# Random-family refinement in maximize_quotient
REFINE_STEPS = 40
REFINE_FAMILIES = 2
REFINE_STEP = 0.5
REFINE_COOLING = 0.9

# None means one worker per CPU
THREADS = None

WEAK_NORM_BACKENDS_FIXTURE = os.path.join(
    os.path.dirname(__file__), 'fixtures', 'weak_norm_backends.json')

ORACLE_SAMPLE_MAX_DIM = 6
ORACLE_MAX_SAMPLES = 10 ** 7
