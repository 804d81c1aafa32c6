"""Numerical toolkit for the Sturm-Liouville problem -y'' + q y = mu y on [0, pi].

Boundary conditions are parametrised by angles: y(0) cos(alpha) + y'(0)
sin(alpha) = 0 with alpha in (0, pi] and y(pi) cos(beta) + y'(pi) sin(beta) = 0
with beta in [0, pi); the angle pi (respectively 0) yields a Dirichlet end.
Potentials are piecewise constant, so the solver propagates initial data
exactly piece by piece, and eigenvalues, norming constants, index shifts,
high-index corrections, eigenfunction expansions, and resolvent diagnostics
are all computed against that exact propagation.
"""

from .potential import (PI, Piece, Potential, build_potential,
                        constant_potential, load_potential, mean,
                        sample_potential, save_potential, sigma,
                        step_potential, zero_potential)
from .ivp import (BoundaryParams, SolutionTrace, WronskianValue, build_grid,
                  characteristic, pruefer_angle, solve_phi, solve_psi,
                  wronskian)
from .spectrum import (ConvergenceError, Eigenpair, WdotCheck, beta_ratio,
                       find_eigenvalues, norming_constants, spectrum_table,
                       wdot_identity_check, wdot_identity_detail)
from .delta import (DeltaRecord, delta_asymptotic, delta_record, solve_delta,
                    solve_delta_many, trig_residuals,
                    trig_residuals_from_delta)
from .asymptotics import (AsymptoticReport, AsymptoticRow,
                          SeriesDiagnosticsRow, asymptotic_report,
                          decompose_l, decomposition_terms, fit_decay,
                          l3_closed_form, l3_mirror_gap, l_term,
                          predict_lambda, predict_norming, s_term,
                          series_diagnostics, series_eval, sigma2)
from .expansion import (ExpansionReport, PhiNResult, TargetFunction,
                        coefficients, convergence_report, parseval_terms,
                        partial_sum, phi_N_check, phi_N_detail,
                        restricted_interval, sigma_expansion_target)
from .greens import (BvpSolution, DecayCheck, ResidueCheck, ZoneCheck,
                     bvp_decay_check, bvp_decay_detail, greens_wronskian,
                     in_zone, residue_check, residue_detail, solve_bvp,
                     zone_bound_check, zone_bound_detail)
from .validation import CriterionResult, run_all
from .cli import ScenarioConfig, main, run

__version__ = "0.1.0"

__all__ = [
    "PI", "Piece", "Potential", "build_potential", "constant_potential",
    "load_potential", "mean", "sample_potential", "save_potential", "sigma",
    "step_potential", "zero_potential",
    "BoundaryParams", "SolutionTrace", "WronskianValue", "build_grid",
    "characteristic", "pruefer_angle", "solve_phi", "solve_psi", "wronskian",
    "ConvergenceError", "Eigenpair", "WdotCheck", "beta_ratio",
    "find_eigenvalues", "norming_constants", "spectrum_table",
    "wdot_identity_check", "wdot_identity_detail",
    "DeltaRecord", "delta_asymptotic", "delta_record", "solve_delta",
    "solve_delta_many", "trig_residuals", "trig_residuals_from_delta",
    "AsymptoticReport", "AsymptoticRow", "SeriesDiagnosticsRow",
    "asymptotic_report", "decompose_l", "decomposition_terms", "fit_decay",
    "l3_closed_form", "l3_mirror_gap", "l_term", "predict_lambda",
    "predict_norming", "s_term", "series_diagnostics", "series_eval", "sigma2",
    "ExpansionReport", "PhiNResult", "TargetFunction", "coefficients",
    "convergence_report", "parseval_terms", "partial_sum", "phi_N_check",
    "phi_N_detail", "restricted_interval", "sigma_expansion_target",
    "BvpSolution", "DecayCheck", "ResidueCheck", "ZoneCheck",
    "bvp_decay_check", "bvp_decay_detail", "greens_wronskian", "in_zone",
    "residue_check", "residue_detail", "solve_bvp", "zone_bound_check",
    "zone_bound_detail",
    "CriterionResult", "run_all",
    "ScenarioConfig", "main", "run",
    "__version__",
]
