"""Constants shared by the numba and numpy kernel backends.

The two backends must agree on these bit for bit; tests compare them
function by function.
"""

# Eigenvalues at or below this are treated as zero probability mass.
EIG_CUTOFF = 1e-12

# Maximum admissible overlap of a state eigenvector with the null space of
# the reference before relative entropy is declared infinite.
SUPPORT_LEAK_TOL = 1e-9

# Objective codes understood by objective() in both backends.
K_COND_ENT = 0          # avg conditional entropy of B after rank-1 basis on A
K_NEG_ENCODE_MI = 1     # -I(A'B') after outcome-encoded rank-1 basis on A
K_MI_DROP_DEPHASE = 2   # I(rho) - I(rank-1 dephased rho)
K_MI_DROP_DEPHASE_R = 3 # same with rank-r projector groups
K_REL_ENT_DEPHASE = 4   # S(rho || rank-1 dephased rho)
K_LOCAL_U_RESIDUAL = 5  # max trace distance of (UA x UB) action vs targets
K_MI_DROP_KRAUS = 6     # I(rho) - I(avg of n-outcome Kraus instrument)
K_LOCAL_CH_RESIDUAL = 7 # max trace distance of local-channel pair vs targets

# Nelder-Mead geometry, identical in both implementations.
NM_STEP = 0.35
NM_ALPHA = 1.0
NM_GAMMA = 2.0
NM_BETA = 0.5
NM_SIGMA = 0.5
