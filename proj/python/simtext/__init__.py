"""Toolkit for measuring how simply scientific text is written.

The heavy lifting lives in the compiled ``_core`` extension; this package
re-exports its operations under the ``simtext`` name.
"""

from simtext._core import (
    __version__,
    bootstrap_d_ci,
    cronbach_alpha,
    density_summary,
    extract_themes,
    fisher_ci,
    fit_lmm,
    power_at,
    power_n,
    render_prompt,
    run_experiment_analysis,
    run_generation_comparison,
    run_yoked_comparison,
    score_corpus,
    score_document,
    select_stimuli,
    welch_t,
)

__all__ = [
    "__version__",
    "bootstrap_d_ci",
    "cronbach_alpha",
    "density_summary",
    "extract_themes",
    "fisher_ci",
    "fit_lmm",
    "power_at",
    "power_n",
    "render_prompt",
    "run_experiment_analysis",
    "run_generation_comparison",
    "run_yoked_comparison",
    "score_corpus",
    "score_document",
    "select_stimuli",
    "welch_t",
]
