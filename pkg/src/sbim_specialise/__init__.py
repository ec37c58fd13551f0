"""Specialising Bott-Samelson bimodules at points of the Tits cone.

The package splits ``B(w) (x)_R K_a`` into summands supported on the orbit
``W a`` and checks the answer against brute-force finite-dimensional modules.
Generator indices are 0-based in the Python API and 1-based in configs and
reports.
"""

from .coxeter import (
    BUILTIN_TYPES,
    CLASSICAL_ORDERS,
    INF,
    CoxeterMatrix,
    GroupElement,
    GroupEnumeration,
    Realisation,
    Reflection,
    braid_words,
    build_realisation,
    element_from_word,
    enumerate_group,
    enumerate_reflections,
    finite_group,
    length,
)
from .engine import (
    BSWord,
    Decomposition,
    LocalSimplicityReport,
    Summand,
    check_local_simplicity,
    res_point,
    specialise,
    standard_flag_prediction,
)
from .errors import (
    CapExceeded,
    ConfigError,
    FieldMismatchError,
    NotInOrbitError,
    RealisationError,
    SpecialiseError,
    SupportError,
    UnsupportedFieldError,
)
from .field import FieldScalar, arith, compare, parse_scalar, scalar
from .oracle import (
    FinModule,
    VerificationReport,
    apply_Bs,
    build_bs_module,
    point_module,
    support_decompose,
    twist,
    verify_decomposition,
)
from .tits import (
    OrbitTable,
    Point,
    StabiliserSystem,
    is_tits_ideal,
    make_point,
    orbit_table,
    stabiliser_system,
    to_fundamental_domain,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
