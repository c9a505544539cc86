//! Threshold-based paraphrase detection and alpha sweeps.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::sts::ParaphrasePair;
use crate::corpus::CorpusStats;
use crate::error::{Error, Result};
use crate::pipeline::{self, PipelineConfig, ProcessedDocument, RawDocument};
use crate::similarity::{self, Alpha, SimilarityResult, Weighting, WeightingScheme};

pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// How a detection count is turned into a score.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Protocol {
    /// Every pair is a true paraphrase; `detected` counts pairs scored at or
    /// above the threshold.
    #[default]
    AllPositive,
    /// A pair is a true paraphrase iff its gold score is at or above the
    /// cutoff; `detected` counts pairs whose prediction matches that label.
    GoldCutoff(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub alpha: f64,
    pub detected: usize,
    pub total: usize,
    /// `detected / total`, or 0 for an empty dataset.
    pub rate: f64,
}

impl SweepPoint {
    fn new(alpha: Alpha, detected: usize, total: usize) -> Self {
        let rate = if total == 0 {
            0.0
        } else {
            detected as f64 / total as f64
        };
        Self {
            alpha: alpha.value(),
            detected,
            total,
            rate,
        }
    }
}

pub fn check_threshold(threshold: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&threshold) {
        Ok(threshold)
    } else {
        Err(Error::InvalidThreshold(threshold))
    }
}

/// `true` iff the pair's TSCS under `alpha` reaches `threshold`.
pub fn detect_paraphrase(
    pair: &ParaphrasePair,
    alpha: Alpha,
    threshold: f64,
    scheme: &WeightingScheme<'_>,
    config: &PipelineConfig,
) -> Result<bool> {
    check_threshold(threshold)?;
    let a = pipeline::preprocess(
        &RawDocument::new(format!("{}/a", pair.id), &pair.text_a),
        config,
    );
    let b = pipeline::preprocess(
        &RawDocument::new(format!("{}/b", pair.id), &pair.text_b),
        config,
    );
    Ok(similarity::tscs(&a, &b, alpha, scheme).tscs >= threshold)
}

/// Pairs preprocessed and scored once; any alpha can then be applied
/// without touching the text again.
///
/// Under TF-IDF the document frequencies come from every sentence in the
/// dataset, each sentence counted as one document.
#[derive(Debug, Clone)]
pub struct ParaphraseEvaluator {
    ids: Vec<String>,
    gold: Vec<Option<f64>>,
    scores: Vec<SimilarityResult>,
}

impl ParaphraseEvaluator {
    pub fn new(
        pairs: &[ParaphrasePair],
        weighting: Weighting,
        config: &PipelineConfig,
    ) -> Result<Self> {
        let docs: Vec<(ProcessedDocument, ProcessedDocument)> = pairs
            .par_iter()
            .map(|pair| {
                (
                    pipeline::preprocess(
                        &RawDocument::new(format!("{}/a", pair.id), &pair.text_a),
                        config,
                    ),
                    pipeline::preprocess(
                        &RawDocument::new(format!("{}/b", pair.id), &pair.text_b),
                        config,
                    ),
                )
            })
            .collect();
        let stats;
        let scheme = match weighting {
            Weighting::Tf => WeightingScheme::tf(),
            Weighting::TfIdf => {
                stats = CorpusStats::from_documents(docs.iter().flat_map(|(a, b)| [a, b]));
                WeightingScheme::tf_idf(&stats)?
            }
        };
        let scores = docs
            .par_iter()
            .map(|(a, b)| similarity::tscs(a, b, Alpha::DEFAULT, &scheme))
            .collect();
        Ok(Self {
            ids: pairs.iter().map(|p| p.id.clone()).collect(),
            gold: pairs.iter().map(|p| p.gold).collect(),
            scores,
        })
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn id(&self, index: usize) -> &str {
        &self.ids[index]
    }

    /// Scores of pair `index` under `alpha`.
    pub fn result(&self, index: usize, alpha: Alpha) -> SimilarityResult {
        self.scores[index].with_alpha(alpha)
    }

    pub fn detect(&self, index: usize, alpha: Alpha, threshold: f64) -> bool {
        self.result(index, alpha).tscs >= threshold
    }

    pub fn evaluate(&self, alpha: Alpha, threshold: f64, protocol: Protocol) -> Result<SweepPoint> {
        check_threshold(threshold)?;
        let mut detected = 0;
        for index in 0..self.len() {
            let predicted = self.detect(index, alpha, threshold);
            let hit = match protocol {
                Protocol::AllPositive => predicted,
                Protocol::GoldCutoff(cutoff) => {
                    let gold = self.gold[index]
                        .ok_or_else(|| Error::MissingGold(self.ids[index].clone()))?;
                    predicted == (gold >= cutoff)
                }
            };
            if hit {
                detected += 1;
            }
        }
        Ok(SweepPoint::new(alpha, detected, self.len()))
    }

    pub fn sweep(
        &self,
        alphas: &[Alpha],
        threshold: f64,
        protocol: Protocol,
    ) -> Result<Vec<SweepPoint>> {
        if alphas.is_empty() {
            return Err(Error::Empty("alpha grid"));
        }
        alphas
            .iter()
            .map(|&alpha| self.evaluate(alpha, threshold, protocol))
            .collect()
    }

    /// Per-pair scores as CSV:
    /// `id,cosine,tss,tscs,lambda,paraphrase,gold`.
    pub fn write_pairs_csv<W: Write>(
        &self,
        out: W,
        alpha: Alpha,
        threshold: f64,
    ) -> Result<(), csv::Error> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record([
            "id",
            "cosine",
            "tss",
            "tscs",
            "lambda",
            "paraphrase",
            "gold",
        ])?;
        for index in 0..self.len() {
            let r = self.result(index, alpha);
            writer.write_record([
                self.ids[index].clone(),
                r.cosine.to_string(),
                r.tss.to_string(),
                r.tscs.to_string(),
                r.lambda.to_string(),
                (r.tscs >= threshold).to_string(),
                self.gold[index].map(|g| g.to_string()).unwrap_or_default(),
            ])?;
        }
        writer.flush()?;
        Ok(())
    }
}

/// Detection counts over `alphas`, treating every pair as a true paraphrase.
pub fn alpha_sweep(
    pairs: &[ParaphrasePair],
    alphas: &[Alpha],
    threshold: f64,
    weighting: Weighting,
    config: &PipelineConfig,
) -> Result<Vec<SweepPoint>> {
    if alphas.is_empty() {
        return Err(Error::Empty("alpha grid"));
    }
    check_threshold(threshold)?;
    ParaphraseEvaluator::new(pairs, weighting, config)?.sweep(
        alphas,
        threshold,
        Protocol::AllPositive,
    )
}

/// 0.0, 0.1, ..., 1.0
pub fn default_alpha_grid() -> Vec<Alpha> {
    (0..=10)
        .map(|i| Alpha::new(i as f64 / 10.0).expect("grid point in range"))
        .collect()
}

pub const SWEEP_CSV_HEADER: [&str; 4] = ["alpha", "detected", "total", "rate"];

pub fn write_sweep_csv<W: Write>(out: W, points: &[SweepPoint]) -> Result<(), csv::Error> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(SWEEP_CSV_HEADER)?;
    for p in points {
        writer.write_record([
            p.alpha.to_string(),
            p.detected.to_string(),
            p.total.to_string(),
            p.rate.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}
