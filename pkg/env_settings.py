# Smaller search budgets keep the test suite quick; anything not set here
# comes from armstrong.labs.summability.global_settings
SEED = 42

SEARCH_RESTARTS = 16
SEARCH_MAX_ITER = 200

REFINE_STEPS = 8
REFINE_FAMILIES = 1

THREADS = 2
