"""Discrete complex analysis on lattice strips and slit-strips.

S-holomorphic functions on the square lattice: the vertical propagation
operator with its explicit spectral decomposition, pole functions with
prescribed singular parts on the slit-strip, the imaginary part of the
integrated square as a discrete potential, and the continuum reference
functions the rescaled lattice objects converge to.
"""

from ._backend import backend_name
from .analysis import (
    CheckError,
    EdgeField,
    HField,
    HarmonicMeasure,
    check_riemann_bv,
    check_sholomorphic,
    compute_H,
    corner_value,
    harmonic_measure,
    verify_mean_value,
)
from .continuum import (
    QuadratureError,
    coefficient_tables,
    conformal_map,
    continuum_inner_product,
    mode_restriction,
    mode_value,
    pulled_back_monomial,
    pure_pole,
)
from .converge import (
    ErrorTable,
    asymptotics_rows,
    inner_product_table,
    pole_asymptotics,
    pole_convergence_table,
    strip_convergence_table,
    trend_ok,
)
from .lattice import (
    Corner,
    EdgeId,
    GeometryError,
    StripSpec,
    boundary_line_angle,
    cross_section,
    slit_strip,
    strip,
)
from .poles import (
    PoleFunction,
    SingularParts,
    end_mode,
    extend_pole,
    extend_slit_strip,
    pole_function,
    regular_parts,
    singular_parts,
    singular_system_condition,
    solve_prescribed_singular,
)
from .space import (
    CrossSectionFn,
    inner_product,
    norm,
    reflect_involution,
)
from .spectral import (
    SpectralMode,
    all_modes,
    apply_stencil,
    eigenfunction,
    eigenvalue_from_frequency,
    extend_strip,
    frequency_bracket,
    mode_coefficients,
    propagate,
    solve_frequency,
    solve_mode,
    spectrum,
    wall_mode,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
