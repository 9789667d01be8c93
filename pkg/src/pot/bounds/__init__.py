from .alpha import (
    AlphaTable,
    alpha_tables,
    alpha_tables_direct,
    alpha_weighted_values,
    band_means,
    min_prefix_ratio,
)
from .appendix import (
    AppendixConstants,
    appendix_bound_curves,
    appendix_constants,
    interior_extremum,
    limit_case_ratio,
    proof_case_values,
)
from .hard import (
    HardInstanceEval,
    hard_instance_alg,
    hard_instance_alg_direct,
    hard_instance_opt,
    hard_instance_opt_direct,
    hard_instance_ratio,
    hard_kprime,
    small_k_value,
)
from .limits import limit_checks, limit_targets
from .simple import (
    optimize_simple_a,
    simple_alg_lower,
    simple_opt_upper,
    simple_ratio_bound,
    theorem_constant,
)

__all__ = [
    "AlphaTable", "alpha_tables", "alpha_tables_direct", "alpha_weighted_values",
    "band_means", "min_prefix_ratio",
    "AppendixConstants", "appendix_bound_curves", "appendix_constants",
    "interior_extremum", "limit_case_ratio", "proof_case_values",
    "HardInstanceEval", "hard_instance_alg", "hard_instance_alg_direct",
    "hard_instance_opt", "hard_instance_opt_direct", "hard_instance_ratio",
    "hard_kprime", "small_k_value", "limit_checks", "limit_targets",
    "optimize_simple_a", "simple_alg_lower", "simple_opt_upper",
    "simple_ratio_bound", "theorem_constant",
]
