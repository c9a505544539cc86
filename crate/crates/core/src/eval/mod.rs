//! Experiment harnesses: paraphrase detection over sentence-pair datasets
//! and corpus-size sensitivity.

pub mod paraphrase;
pub mod sensitivity;
pub mod sts;

pub use paraphrase::{
    alpha_sweep, check_threshold, default_alpha_grid, detect_paraphrase, write_sweep_csv,
    ParaphraseEvaluator, Protocol, SweepPoint, DEFAULT_THRESHOLD,
};
pub use sensitivity::{
    corpus_sensitivity, variation_range, write_sensitivity_csv, SeedPair, SensitivityReport,
    SensitivityRow, VariationRange, DEFAULT_SIZES,
};
pub use sts::{load_sts_dataset, ParaphrasePair};
