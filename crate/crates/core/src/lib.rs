//! Document similarity that accounts for where words sit, not only which
//! words occur.
//!
//! Plain cosine similarity scores "John loves Mary" and "Mary loves John" as
//! identical. Textual space similarity ([`tss`]) compares the ordinal
//! positions of shared terms instead, and [`tscs`] blends the two with a
//! weight `alpha`.
//!
//! ```
//! use tscs::{preprocess, tscs, Alpha, PipelineConfig, RawDocument, WeightingScheme};
//!
//! let config = PipelineConfig::default();
//! let a = preprocess(&RawDocument::new("a", "John loves Mary"), &config);
//! let b = preprocess(&RawDocument::new("b", "Mary loves John"), &config);
//! let r = tscs(&a, &b, Alpha::DEFAULT, &WeightingScheme::tf());
//! assert_eq!(r.cosine, 1.0);
//! assert!((r.tss - 1.0 / 3.0).abs() < 1e-12);
//! assert!((r.tscs - 2.0 / 3.0).abs() < 1e-12);
//! ```

pub mod corpus;
pub mod error;
pub mod eval;
pub mod pipeline;
pub mod similarity;

pub use corpus::{Corpus, CorpusStats, SimilarityMatrix};
pub use error::{Error, Result};
pub use pipeline::{preprocess, PipelineConfig, ProcessedDocument, RawDocument, Stemming};
pub use similarity::{
    cosine, positional_map, spatial_difference, term_vector, tscs, tss, Alpha, PositionalTermMap,
    SimilarityResult, TermVector, TssScore, Weighting, WeightingScheme,
};
