"""Left-invariant Killing-Yano 2-forms on metric Lie algebras.

Exact rational solvers for the Killing-Yano equation on a Lie algebra with a
left-invariant metric, a fast algebraic solver for 2-step nilpotent algebras,
structure results for the solutions, and graph algebra constructors.
"""

from .algebra import (
    InvariantViolation,
    MetricLieAlgebra,
    NotTwoStepError,
    Subspace,
    ValidationError,
    abelian,
    center,
    derived,
    direct_sum,
    free_two_step,
    heisenberg,
    is_two_step,
    zav_split,
)
from .connection import (
    covariant_derivative_endo,
    exterior_derivative_2form,
    is_parallel,
    levi_civita,
)
from .graphs import (
    SimpleGraph,
    build_complex,
    build_real,
    canonical_ky,
    heisenberg_complex,
)
from .ky import (
    Certificate,
    SolutionSpace,
    codazzi_space,
    commuting_skew_space,
    is_codazzi,
    is_killing_tensor,
    is_ky,
    ky_space_2step,
    ky_space_generic,
    parallel_skew_space,
)
from .scalars import APPROX, EXACT, Surd
from .structure import (
    canonical_form,
    eigen_blocks,
    extract_complex_structure,
    is_complex_structure,
    is_nearly_kahler,
    split_ker_im,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
