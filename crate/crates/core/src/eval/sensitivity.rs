//! How pair similarity drifts as unrelated documents join the corpus.
//!
//! Two seed pairs sit in a corpus that grows by appending filler documents.
//! At each target size the TF-IDF statistics change, and both the TSCS and
//! the pure cosine of each seed pair are recorded.

use std::io::Write;

use serde::Serialize;

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::pipeline::{PipelineConfig, RawDocument};
use crate::similarity::{self, Alpha, Weighting};

pub const DEFAULT_SIZES: [usize; 7] = [4, 5, 10, 15, 20, 30, 40];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedPair {
    pub a: RawDocument,
    pub b: RawDocument,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SensitivityRow {
    pub corpus_size: usize,
    pub sim_set1: f64,
    pub sim_set2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityReport {
    pub tscs: Vec<SensitivityRow>,
    pub cosine: Vec<SensitivityRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VariationRange {
    pub set1: f64,
    pub set2: f64,
}

/// Build corpora of each size in `sizes` (strictly increasing, first >= 4)
/// from the four seed documents plus the first `size - 4` fillers.
pub fn corpus_sensitivity(
    seed1: &SeedPair,
    seed2: &SeedPair,
    fillers: &[RawDocument],
    sizes: &[usize],
    alpha: Alpha,
    weighting: Weighting,
    config: &PipelineConfig,
) -> Result<SensitivityReport> {
    validate_sizes(sizes)?;
    let largest = *sizes.last().expect("validated non-empty");
    if largest - 4 > fillers.len() {
        return Err(Error::InsufficientFiller {
            size: largest,
            needed: largest - 4,
            available: fillers.len(),
        });
    }

    let mut corpus = Corpus::new();
    for raw in [&seed1.a, &seed1.b, &seed2.a, &seed2.b] {
        corpus.add_document(raw, config)?;
    }
    let mut fillers = fillers.iter();
    let mut report = SensitivityReport {
        tscs: Vec::with_capacity(sizes.len()),
        cosine: Vec::with_capacity(sizes.len()),
    };
    for &size in sizes {
        while corpus.len() < size {
            let raw = fillers.next().expect("filler count checked");
            corpus.add_document(raw, config)?;
        }
        let scheme = corpus.scheme(weighting)?;
        let score = |pair: &SeedPair| {
            let a = &corpus.get(&pair.a.id).expect("seed present").doc;
            let b = &corpus.get(&pair.b.id).expect("seed present").doc;
            similarity::tscs(a, b, alpha, &scheme)
        };
        let (one, two) = (score(seed1), score(seed2));
        report.tscs.push(SensitivityRow {
            corpus_size: size,
            sim_set1: one.tscs,
            sim_set2: two.tscs,
        });
        report.cosine.push(SensitivityRow {
            corpus_size: size,
            sim_set1: one.cosine,
            sim_set2: two.cosine,
        });
    }
    Ok(report)
}

fn validate_sizes(sizes: &[usize]) -> Result<()> {
    let Some(&first) = sizes.first() else {
        return Err(Error::InvalidSizes("no sizes given".to_string()));
    };
    if first < 4 {
        return Err(Error::InvalidSizes(format!(
            "smallest size {first} cannot hold the four seed documents"
        )));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSizes(
            "sizes must be strictly increasing".to_string(),
        ));
    }
    Ok(())
}

/// `max - min` of each seed-set column.
pub fn variation_range(rows: &[SensitivityRow]) -> Result<VariationRange> {
    if rows.is_empty() {
        return Err(Error::Empty("sensitivity table"));
    }
    let spread = |pick: fn(&SensitivityRow) -> f64| {
        let (lo, hi) = rows
            .iter()
            .map(pick)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            });
        hi - lo
    };
    Ok(VariationRange {
        set1: spread(|r| r.sim_set1),
        set2: spread(|r| r.sim_set2),
    })
}

pub const SENSITIVITY_CSV_HEADER: [&str; 5] = [
    "corpus_size",
    "tscs_set1",
    "tscs_set2",
    "cosine_set1",
    "cosine_set2",
];

pub fn write_sensitivity_csv<W: Write>(
    out: W,
    report: &SensitivityReport,
) -> Result<(), csv::Error> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(SENSITIVITY_CSV_HEADER)?;
    for (t, c) in report.tscs.iter().zip(&report.cosine) {
        writer.write_record([
            t.corpus_size.to_string(),
            t.sim_set1.to_string(),
            t.sim_set2.to_string(),
            c.sim_set1.to_string(),
            c.sim_set2.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}
