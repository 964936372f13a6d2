//! Synthetic targets, quality metrics, sub-pixel localization and the
//! experiment sweeps.

mod experiments;
mod localize;
mod metrics;
mod sweep;
mod targets;

pub use experiments::{
    box_zero_set, compare_priors, compare_wiener_tv, localize_trials, log_grid, simulate_grid,
    zero_sets, DeconvComparison, GridConfig, GridData, LambdaPoint, LocalizeConfig, LocalizeTrial,
    PriorComparison, ZeroSets,
};
pub use localize::{
    estimate_edge_offset, localize_pair, localize_point_source, localize_point_source_noisy,
    simulate_edge, EdgeEstimate, Localization, PointScene1D, SIGNIFICANT,
};
pub use metrics::{metrics, Metrics, PSNR_CAP_DB};
pub use sweep::{
    non_monotone_families, rows_to_csv, run_cell, run_sparsity_sweep, simulate_cell,
    sparse_solver_defaults, summarize, summary_to_csv, CellOutput, Family, SweepConfig, SweepRow,
    SweepSummary,
};
pub use targets::{
    gen_bar_target, gen_char_target, gen_char_target_with, render_text, CharTarget, Glyph,
    DEFAULT_GLYPH_HEIGHT, GLYPHS,
};
