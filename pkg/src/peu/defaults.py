"""Package-wide numerical tolerance defaults.

Every rank decision uses one documented policy (see numkit.rank_report);
these constants are the default knobs and are configurable at every call
site that consumes them.
"""

RTOL = 1e-9            # relative rank tolerance: tol = RTOL * max(rows, cols) * sigma_max
CLUSTER_RADIUS = 1e-6  # merge radius for numerically coincident polynomial roots
TOL_CERT = 1e-7        # certificate annihilation residual budget, scaled by data magnitude
SEED = 0               # master seed when the caller provides none
