import warnings

from scipy.integrate import IntegrationWarning

# The face-layer integrals legitimately trip scipy's roundoff heuristic at
# R ~ 1e6 while still converging well inside tolerance.
warnings.filterwarnings("ignore", category=IntegrationWarning)
