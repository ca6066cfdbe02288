"""Project-wide tolerance ladder.

Every numerical comparison in the package and its tests draws from these
constants so that a single edit moves the whole ladder.
"""

#: structural checks (Hermiticity, trace, w == y, x+- == 0, ...)
STRUCTURAL = 1e-10
#: agreement between independent routes to the same quantity
CROSS_ROUTE = 1e-9
#: finite-N extrapolation compared with thermodynamic-limit closed forms
EXTRAPOLATION = 1e-3
#: eigenvalues of PSD products in [-CLAMP, 0) are clamped to zero
CLAMP = 1e-10
#: normalisation of state vectors
NORM = 1e-12

LADDER = {
    "structural": STRUCTURAL,
    "cross_route": CROSS_ROUTE,
    "extrapolation": EXTRAPOLATION,
    "clamp": CLAMP,
    "norm": NORM,
}
