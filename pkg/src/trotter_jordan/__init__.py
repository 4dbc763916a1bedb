"""Jordan-product Lie-Trotter formulas and their 1/n**2 error bounds."""
from .bounds import (
    BoundReport,
    F_matrix,
    scalar_taylor_tail,
    suzuki_bound,
    taylor_remainder_bound,
    telescoping_bound,
)
from .expm import OracleToleranceError, expm, expm_oracle
from .formulas import (
    classic_formula,
    exact_exp_sum,
    g_base,
    g_formula,
    h_base,
    h_formula,
    symmetric_product_formula,
    symmetrized_formula,
    symmetrized_terms,
)
from .harness import (
    ConfigError,
    SweepConfig,
    SweepReport,
    emit_report,
    fit_order,
    jet_check,
    random_terms,
    run_sweep,
)
from .jets import Jet2, jet_exp, jet_jordan, jet_mul, jet_of_g_base, jet_of_h_base, jet_triple
from .linalg import (
    DimensionError,
    MatrixOverflowError,
    NormKind,
    TermSet,
    jordan_product,
    jordan_triple,
    jordan_triple_from_products,
    mat_add,
    mat_mul,
    mat_power,
    norm,
)
from .rng import RngStream

__version__ = "0.1.0"
