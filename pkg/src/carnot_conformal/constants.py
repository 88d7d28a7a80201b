"""
Constants for carnot-conformal

This module defines the tolerances, defaults, CLI command names and report
labels shared across the library.
"""


class Tolerance:
    """Numeric tolerances"""

    # Riemannian distance in SL(m)/SO(m)
    DISTANCE = 1e-10
    SYMMETRY = 1e-12
    EIGENVALUE_CLAMP = 1e-300

    # Orbits
    DEDUPLICATION = 1e-9

    # Numerical recertification of eigenvalues
    EIGENVALUE = 1e-10

    # Pansu blow-up
    PANSU = 1e-8

    # Inclusion checks on sampled boxes
    BOX_SLACK = 1e-12

    # Homogeneity and left invariance of rho, relative
    HOMOGENEITY = 1e-12

    # d(g*mu(x), mu(x)) for invariant structures
    INVARIANCE = 1e-8

    # Distance of the last blow-up dilatation from the limit
    BLOWUP = 1e-3


class Defaults:
    """Default run parameters"""

    SEED = 42
    TOL = 1e-10
    SAMPLES = 1000
    INCLUSION_SAMPLES = 100_000
    WORD_CAP = 6
    MAX_ITERATIONS = 100_000
    WARM_START_ITERATIONS = 200
    DILATION_EXPONENTS = tuple(range(-20, 21))
    PANSU_SCALES = tuple(2.0 ** -k for k in range(3, 9))
    T_RANGE = 5.0


class Command:
    """CLI command names"""

    VALIDATE = "validate"
    ANALYZE = "analyze"
    SEQUENCE = "sequence"
    METRIC_CHECK = "metric-check"
    CIRCUMCENTER = "circumcenter"
    INVARIANT = "invariant"
    ISO_AUT = "iso-aut"
    COUNTEREXAMPLE = "counterexample"
    MODULUS_DEMO = "modulus-demo"
    BLOWUP_DEMO = "blowup-demo"
    EXAMPLES = "examples"


class Verdict:
    """Outcomes of the conjugation counting argument"""

    IMPOSSIBLE = "IMPOSSIBLE"
    INCONCLUSIVE = "INCONCLUSIVE"


class ExitCode:
    """Process exit codes"""

    OK = 0
    ASSERTION_FAILED = 1
    INPUT_ERROR = 2


__all__ = ["Tolerance", "Defaults", "Command", "Verdict", "ExitCode"]
