"""Numerical tolerances shared across modules."""

# distributions and predicates
SUM_TOL = 1e-9
SHARP_TOL = 1e-12

# metric spaces and transport
MET_TOL = 1e-9
DUAL_TOL = 1e-7

# matrices
HERM_TOL = 1e-9
PSD_TOL = 1e-9
EIG_TOL = 1e-8
IM_TOL = 1e-9
SHARP_TOL_Q = 1e-8
JACOBI_OFF_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100

# effect modules
BISECT_ITERS = 60
CAUCHY_TOL = 1e-8

# representation round trips
HOM_TOL = 1e-7
HOM_PROBES = 64
