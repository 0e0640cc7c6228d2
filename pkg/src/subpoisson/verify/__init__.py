from .checks import (
    check_mgf_vs_closed_form,
    check_exponential_counterexample,
    check_g_nonpositive,
    check_gprime_form,
    check_hoorfar_hassani,
    check_lambert_quadratic,
    check_log_sandwich,
    check_mgf_bound_chain,
    check_proof_chain,
    check_subpoissonian_mgf,
    check_theorem2,
    conjecture_mgf_crossing,
    conjecture_sweep,
    g_function,
    g_prime_closed,
)
from .montecarlo import MCEstimate, monte_carlo_moment
from .report import CheckReport, GridSpec, write_reports
