from .density import (
    empirical_pdf,
    fit_q_gaussian,
    fit_f_distribution,
    model_density,
    binned_model_density,
    fitted_curve_frame,
)

__all__ = [
    "empirical_pdf",
    "fit_q_gaussian",
    "fit_f_distribution",
    "model_density",
    "binned_model_density",
    "fitted_curve_frame",
]
