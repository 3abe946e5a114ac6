"""Coactions of finite-dimensional C*-Hopf algebras: crossed products, freeness, outerness, saturation."""

__version__ = "0.1.0"

from .linalg import DEFAULT_TOL, Subspace, ToleranceConfig  # noqa: E402
from .cstar import BlockAlgebra, StarAlgebra, TensorAlgebra, wedderburn  # noqa: E402
from .groups import FiniteGroup, cyclic, klein_four, symmetric, trivial_group  # noqa: E402
from .hopf import HopfAlgebra, function_algebra, group_algebra, verify_hopf_axioms  # noqa: E402
from .coaction import Coaction, GroupAction, from_group_action, trivial_coaction  # noqa: E402
from .crossed import CrossedProduct, build, dual_coaction, iterate  # noqa: E402
from .checkers import is_free, is_outer, is_saturated, theorem_suite  # noqa: E402
