//! Position-aware similarity between processed documents.
//!
//! For a term `t` occurring in both documents, its k-th occurrence in one is
//! paired with its k-th occurrence in the other. Each pair at ordinal
//! positions `(p, q)` contributes `|p - q| / (p + q)` to the spatial
//! difference of `t` (0 when `p = q = 0`). Occurrences without a partner are
//! ignored. With `λ` the number of pairs over all shared terms,
//!
//! ```text
//! tss  = 1 - Σ_t sd(t) / λ            (0 when λ = 0)
//! tscs = α · cosine + (1 - α) · tss
//! ```
//!
//! so `α = 1` is plain cosine and `α = 0` is pure placement agreement.

use std::collections::BTreeMap;

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedSub, ToPrimitive, Zero};
use serde::Serialize;

use crate::corpus::CorpusStats;
use crate::error::{Error, Result};
use crate::pipeline::ProcessedDocument;

/// Term to the ordinal positions of its occurrences, in reading order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PositionalTermMap {
    entries: BTreeMap<String, Vec<usize>>,
}

impl PositionalTermMap {
    pub fn get(&self, term: &str) -> Option<&[usize]> {
        self.entries.get(term).map(Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[usize])> {
        self.entries.iter().map(|(t, p)| (t.as_str(), p.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total number of positions recorded, i.e. the source document length.
    pub fn position_count(&self) -> usize {
        self.entries.values().map(Vec::len).sum()
    }
}

pub fn positional_map(doc: &ProcessedDocument) -> PositionalTermMap {
    let mut entries: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (position, term) in doc.terms().iter().enumerate() {
        entries.entry(term.clone()).or_default().push(position);
    }
    PositionalTermMap { entries }
}

/// Spatial difference of one term given its positions in two documents.
///
/// Returns the sum of normalized gaps over k-th/k-th occurrence pairs and
/// the number of pairs formed, `min(len_i, len_j)`.
pub fn spatial_difference(positions_i: &[usize], positions_j: &[usize]) -> (f64, usize) {
    let (sum, matched) = gap_sum(positions_i, positions_j);
    (sum.value(), matched)
}

fn gap_sum(positions_i: &[usize], positions_j: &[usize]) -> (GapSum, usize) {
    let mut sum = GapSum::default();
    let mut matched = 0;
    for (&p, &q) in positions_i.iter().zip(positions_j) {
        sum.add_gap(p, q);
        matched += 1;
    }
    (sum, matched)
}

/// Running sum of `|p - q| / (p + q)` terms.
///
/// Kept as an exact fraction so the final score is the correctly rounded
/// value of the true sum; once numerator or denominator would overflow
/// `u128` it degrades to plain `f64` accumulation.
#[derive(Debug, Clone, Copy)]
enum GapSum {
    Exact(Ratio<u128>),
    Approx(f64),
}

impl Default for GapSum {
    fn default() -> Self {
        GapSum::Exact(Ratio::zero())
    }
}

impl GapSum {
    fn add_gap(&mut self, p: usize, q: usize) {
        let total = p + q;
        if total == 0 || p == q {
            return;
        }
        let gap = Ratio::new(p.abs_diff(q) as u128, total as u128);
        self.add(GapSum::Exact(gap));
    }

    fn add(&mut self, other: GapSum) {
        *self = match (*self, other) {
            (GapSum::Exact(a), GapSum::Exact(b)) => match a.checked_add(&b) {
                Some(sum) => GapSum::Exact(sum),
                None => GapSum::Approx(ratio_to_f64(&a) + ratio_to_f64(&b)),
            },
            (a, b) => GapSum::Approx(a.value() + b.value()),
        };
    }

    fn value(&self) -> f64 {
        match self {
            GapSum::Exact(r) => ratio_to_f64(r),
            GapSum::Approx(x) => *x,
        }
    }

    /// `1 - self / lambda`, `lambda > 0`.
    fn inverted_mean(&self, lambda: usize) -> f64 {
        if let GapSum::Exact(sum) = self {
            let lambda = Ratio::from_integer(lambda as u128);
            if let Some(score) = lambda
                .checked_sub(sum)
                .and_then(|rest| rest.checked_div(&lambda))
            {
                return ratio_to_f64(&score);
            }
        }
        1.0 - self.value() / lambda as f64
    }
}

fn ratio_to_f64(r: &Ratio<u128>) -> f64 {
    r.to_f64()
        .expect("ratio of non-negative integers is finite")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TssScore {
    pub score: f64,
    pub lambda: usize,
    pub spatial_sum: f64,
}

pub fn tss(doc_i: &ProcessedDocument, doc_j: &ProcessedDocument) -> TssScore {
    tss_from_maps(&positional_map(doc_i), &positional_map(doc_j))
}

pub fn tss_from_maps(map_i: &PositionalTermMap, map_j: &PositionalTermMap) -> TssScore {
    // Walk the smaller map; BTreeMap order keeps the summation order (and so
    // any floating-point fallback) independent of argument order.
    let (small, large) = if map_i.len() <= map_j.len() {
        (map_i, map_j)
    } else {
        (map_j, map_i)
    };
    let mut spatial_sum = GapSum::default();
    let mut lambda = 0;
    for (term, positions) in &small.entries {
        if let Some(other) = large.entries.get(term) {
            let (sd, matched) = gap_sum(positions, other);
            spatial_sum.add(sd);
            lambda += matched;
        }
    }
    let score = if lambda == 0 {
        0.0
    } else {
        spatial_sum.inverted_mean(lambda)
    };
    let spatial_sum = spatial_sum.value();
    TssScore {
        score,
        lambda,
        spatial_sum,
    }
}

/// Sparse term weights. Zero weights are never stored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TermVector {
    weights: BTreeMap<String, f64>,
}

impl TermVector {
    pub fn get(&self, term: &str) -> Option<f64> {
        self.weights.get(term).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.weights.iter().map(|(t, w)| (t.as_str(), *w))
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    fn squared_norm(&self) -> f64 {
        self.weights.values().map(|w| w * w).sum()
    }
}

impl FromIterator<(String, f64)> for TermVector {
    fn from_iter<I: IntoIterator<Item = (String, f64)>>(iter: I) -> Self {
        Self {
            weights: iter.into_iter().filter(|(_, w)| *w != 0.0).collect(),
        }
    }
}

/// Weighting kind without the corpus it may need.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    #[default]
    Tf,
    TfIdf,
}

/// How term counts become vector weights.
///
/// TF-IDF uses `tf · (1 + ln(N / df))`, with `df` floored at 1 so terms that
/// never occur in the corpus still get a finite weight.
#[derive(Debug, Clone, Copy)]
pub struct WeightingScheme<'a> {
    stats: Option<&'a CorpusStats>,
}

impl<'a> WeightingScheme<'a> {
    pub fn tf() -> Self {
        Self { stats: None }
    }

    pub fn tf_idf(stats: &'a CorpusStats) -> Result<Self> {
        if stats.document_count() == 0 {
            return Err(Error::Empty("corpus used for TF-IDF weighting"));
        }
        Ok(Self { stats: Some(stats) })
    }

    pub fn kind(&self) -> Weighting {
        match self.stats {
            None => Weighting::Tf,
            Some(_) => Weighting::TfIdf,
        }
    }

    fn weight(&self, term: &str, tf: usize) -> f64 {
        match self.stats {
            None => tf as f64,
            Some(stats) => tf as f64 * stats.idf(term),
        }
    }
}

pub fn term_vector(doc: &ProcessedDocument, scheme: &WeightingScheme<'_>) -> TermVector {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for term in doc.terms() {
        *counts.entry(term.as_str()).or_default() += 1;
    }
    counts
        .into_iter()
        .map(|(term, tf)| (term.to_string(), scheme.weight(term, tf)))
        .collect()
}

/// Cosine of the angle between two non-negative sparse vectors, clamped to
/// `[0, 1]`. Empty vectors score 0.
pub fn cosine(v_i: &TermVector, v_j: &TermVector) -> f64 {
    if v_i.is_empty() || v_j.is_empty() {
        return 0.0;
    }
    let (small, large) = if v_i.len() <= v_j.len() {
        (v_i, v_j)
    } else {
        (v_j, v_i)
    };
    let dot: f64 = small
        .weights
        .iter()
        .filter_map(|(term, w)| large.weights.get(term).map(|x| w * x))
        .sum();
    if dot == 0.0 {
        return 0.0;
    }
    let norm = (v_i.squared_norm() * v_j.squared_norm()).sqrt();
    (dot / norm).min(1.0)
}

/// Mixing weight between cosine (`1`) and placement (`0`).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Alpha(f64);

impl Alpha {
    pub const DEFAULT: Alpha = Alpha(0.5);
    pub const COSINE: Alpha = Alpha(1.0);
    pub const TSS: Alpha = Alpha(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Alpha(value))
        } else {
            Err(Error::InvalidAlpha(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `α · cosine + (1 - α) · tss`. At the endpoints this returns the
    /// selected operand exactly.
    pub fn combine(self, cosine: f64, tss: f64) -> f64 {
        self.0 * cosine + (1.0 - self.0) * tss
    }
}

impl Default for Alpha {
    fn default() -> Self {
        Alpha::DEFAULT
    }
}

impl TryFrom<f64> for Alpha {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Alpha::new(value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimilarityResult {
    pub cosine: f64,
    pub tss: f64,
    pub tscs: f64,
    pub lambda: usize,
    pub spatial_sum: f64,
    pub alpha: Alpha,
    /// Both documents were empty; every score is 0.
    pub degenerate: bool,
}

impl SimilarityResult {
    /// Same pair re-scored under a different alpha.
    pub fn with_alpha(&self, alpha: Alpha) -> Self {
        Self {
            tscs: alpha.combine(self.cosine, self.tss),
            alpha,
            ..*self
        }
    }
}

pub fn tscs(
    doc_i: &ProcessedDocument,
    doc_j: &ProcessedDocument,
    alpha: Alpha,
    scheme: &WeightingScheme<'_>,
) -> SimilarityResult {
    let placement = tss(doc_i, doc_j);
    let cos = cosine(&term_vector(doc_i, scheme), &term_vector(doc_j, scheme));
    SimilarityResult {
        cosine: cos,
        tss: placement.score,
        tscs: alpha.combine(cos, placement.score),
        lambda: placement.lambda,
        spatial_sum: placement.spatial_sum,
        alpha,
        degenerate: doc_i.is_empty() && doc_j.is_empty(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(text: &str) -> ProcessedDocument {
        ProcessedDocument::from_terms("d", text.split_whitespace())
    }

    const EPS: f64 = 1e-9;

    #[test]
    fn positional_map_examples() {
        let map = positional_map(&doc("john loves mary"));
        assert_eq!(map.get("john"), Some(&[0][..]));
        assert_eq!(map.get("loves"), Some(&[1][..]));
        assert_eq!(map.get("mary"), Some(&[2][..]));
        assert!(positional_map(&doc("")).is_empty());
        let map = positional_map(&doc("a b a"));
        assert_eq!(map.get("a"), Some(&[0, 2][..]));
        assert_eq!(map.get("b"), Some(&[1][..]));
        assert_eq!(map.position_count(), 3);
    }

    #[test]
    fn spatial_difference_examples() {
        assert_eq!(spatial_difference(&[0], &[2]), (1.0, 1));
        assert_eq!(spatial_difference(&[1], &[1]), (0.0, 1));
        assert_eq!(spatial_difference(&[0], &[0]), (0.0, 1));
        let (sum, matched) = spatial_difference(&[1, 3], &[2]);
        assert!((sum - 1.0 / 3.0).abs() < EPS);
        assert_eq!(matched, 1);
        assert_eq!(spatial_difference(&[], &[4, 5]), (0.0, 0));
    }

    #[test]
    fn gap_sum_falls_back_on_overflow() {
        // Pairwise-coprime denominators push the exact fraction past u128.
        let primes = [
            101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181,
            191, 193, 197, 199, 211,
        ];
        let mut sum = GapSum::default();
        let mut expected = 0.0;
        for &d in &primes {
            sum.add_gap(1, d - 1);
            expected += (d - 2) as f64 / d as f64;
        }
        assert!(matches!(sum, GapSum::Approx(_)));
        assert!((sum.value() - expected).abs() < 1e-9);
        let score = sum.inverted_mean(primes.len());
        assert!((score - (1.0 - expected / primes.len() as f64)).abs() < 1e-12);
    }

    #[test]
    fn tss_worked_example() {
        let s = tss(&doc("john loves mary"), &doc("mary loves john"));
        assert!((s.score - 1.0 / 3.0).abs() < EPS);
        assert_eq!(s.lambda, 3);
        assert_eq!(s.spatial_sum, 2.0);
    }

    #[test]
    fn tss_other_examples() {
        let d = doc("x y z x");
        assert_eq!(tss(&d, &d).score, 1.0);

        let s = tss(&doc("a b c"), &doc("a c b"));
        assert!((s.score - 7.0 / 9.0).abs() < EPS);
        assert_eq!(s.lambda, 3);

        let s = tss(&doc("a b"), &doc("c d"));
        assert_eq!((s.score, s.lambda, s.spatial_sum), (0.0, 0, 0.0));
    }

    #[test]
    fn term_vector_examples() {
        let v = term_vector(&doc("john loves mary"), &WeightingScheme::tf());
        assert_eq!(v.get("john"), Some(1.0));
        assert_eq!(v.len(), 3);
        let v = term_vector(&doc("a b a"), &WeightingScheme::tf());
        assert_eq!(v.get("a"), Some(2.0));
        assert_eq!(v.get("b"), Some(1.0));

        let stats = CorpusStats::from_counts(10, [("x", 10)]);
        let v = term_vector(&doc("x"), &WeightingScheme::tf_idf(&stats).unwrap());
        assert_eq!(v.get("x"), Some(1.0));
    }

    #[test]
    fn tf_idf_rejects_empty_corpus() {
        let stats = CorpusStats::default();
        assert!(WeightingScheme::tf_idf(&stats).is_err());
    }

    #[test]
    fn cosine_examples() {
        let tf = WeightingScheme::tf();
        let a = term_vector(&doc("john loves mary"), &tf);
        let b = term_vector(&doc("mary loves john"), &tf);
        assert_eq!(cosine(&a, &b), 1.0);
        assert_eq!(cosine(&a, &a), 1.0);
        let c = term_vector(&doc("x y"), &tf);
        assert_eq!(cosine(&a, &c), 0.0);
        assert_eq!(cosine(&a, &TermVector::default()), 0.0);
    }

    #[test]
    fn tscs_worked_example() {
        let r = tscs(
            &doc("john loves mary"),
            &doc("mary loves john"),
            Alpha::DEFAULT,
            &WeightingScheme::tf(),
        );
        assert!((r.tscs - 2.0 / 3.0).abs() < EPS);
        assert_eq!(r.cosine, 1.0);
        assert!(!r.degenerate);
    }

    #[test]
    fn tscs_degenerate_alphas() {
        let a = doc("a b c a d");
        let b = doc("c a e a b b");
        let tf = WeightingScheme::tf();
        let cos = tscs(&a, &b, Alpha::COSINE, &tf);
        assert_eq!(cos.tscs, cos.cosine);
        let placement = tscs(&a, &b, Alpha::TSS, &tf);
        assert_eq!(placement.tscs, placement.tss);
    }

    #[test]
    fn empty_documents() {
        let tf = WeightingScheme::tf();
        let r = tscs(&doc(""), &doc(""), Alpha::DEFAULT, &tf);
        assert!(r.degenerate);
        assert_eq!((r.cosine, r.tss, r.tscs, r.lambda), (0.0, 0.0, 0.0, 0));
        let r = tscs(&doc("a"), &doc(""), Alpha::DEFAULT, &tf);
        assert!(!r.degenerate);
        assert_eq!(r.tscs, 0.0);
    }

    #[test]
    fn alpha_validation() {
        assert!(Alpha::new(-0.01).is_err());
        assert!(Alpha::new(1.01).is_err());
        assert!(Alpha::new(f64::NAN).is_err());
        assert_eq!(Alpha::new(0.0).unwrap(), Alpha::TSS);
        assert_eq!(Alpha::default().value(), 0.5);
    }

    #[test]
    fn with_alpha_matches_direct_scoring() {
        let a = doc("a b c a d");
        let b = doc("c a e a b b");
        let tf = WeightingScheme::tf();
        let base = tscs(&a, &b, Alpha::DEFAULT, &tf);
        for step in 0..=10 {
            let alpha = Alpha::new(step as f64 / 10.0).unwrap();
            assert_eq!(base.with_alpha(alpha), tscs(&a, &b, alpha, &tf));
        }
    }
}
