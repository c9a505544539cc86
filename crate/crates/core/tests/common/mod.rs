//! Independent reference implementations used only by tests.
//!
//! Nothing here calls into the library's similarity code. Positions are
//! found by scanning the raw term lists and all arithmetic on placement is
//! exact (big rationals), converted to `f64` once at the very end.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{ToPrimitive, Zero};

pub struct OracleTss {
    pub spatial_sum: BigRational,
    pub lambda: usize,
    pub score: BigRational,
}

/// Positions of `term` in `terms`, by linear scan.
fn occurrences(terms: &[&str], term: &str) -> Vec<usize> {
    let mut out = Vec::new();
    for (i, t) in terms.iter().enumerate() {
        if *t == term {
            out.push(i);
        }
    }
    out
}

/// `Σ_k |p_k - q_k| / (p_k + q_k)` over `k < min(len)`, 0/0 taken as 0.
pub fn spatial_difference(p: &[usize], q: &[usize]) -> (BigRational, usize) {
    let mut sum = BigRational::zero();
    let mut k = 0;
    while k < p.len() && k < q.len() {
        let (a, b) = (p[k] as i64, q[k] as i64);
        if a + b != 0 {
            sum += BigRational::new(BigInt::from((a - b).abs()), BigInt::from(a + b));
        }
        k += 1;
    }
    (sum, k)
}

pub fn tss(doc_i: &[&str], doc_j: &[&str]) -> OracleTss {
    let vocab: BTreeSet<&str> = doc_i.iter().copied().collect();
    let mut spatial_sum = BigRational::zero();
    let mut lambda = 0;
    for term in vocab {
        let p = occurrences(doc_i, term);
        let q = occurrences(doc_j, term);
        let (sd, matched) = spatial_difference(&p, &q);
        spatial_sum += sd;
        lambda += matched;
    }
    let score = if lambda == 0 {
        BigRational::zero()
    } else {
        BigRational::from_integer(BigInt::from(1))
            - spatial_sum.clone() / BigRational::from_integer(BigInt::from(lambda))
    };
    OracleTss {
        spatial_sum,
        lambda,
        score,
    }
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("finite rational")
}

/// Raw-count dot product and squared norms, from nested scans.
pub fn tf_counts(doc_i: &[&str], doc_j: &[&str]) -> (u64, u64, u64) {
    let count = |doc: &[&str], t: &str| doc.iter().filter(|x| **x == t).count() as u64;
    let vi: BTreeSet<&str> = doc_i.iter().copied().collect();
    let vj: BTreeSet<&str> = doc_j.iter().copied().collect();
    let dot = vi.iter().map(|t| count(doc_i, t) * count(doc_j, t)).sum();
    let ni = vi.iter().map(|t| count(doc_i, t).pow(2)).sum();
    let nj = vj.iter().map(|t| count(doc_j, t).pow(2)).sum();
    (dot, ni, nj)
}

pub fn tf_cosine(doc_i: &[&str], doc_j: &[&str]) -> f64 {
    let (dot, ni, nj) = tf_counts(doc_i, doc_j);
    if dot == 0 {
        0.0
    } else {
        dot as f64 / ((ni * nj) as f64).sqrt()
    }
}

/// Paraphrase decision at `alpha` and `threshold`, from the oracle pieces.
/// The endpoints are decided in exact arithmetic.
pub fn detects(doc_i: &[&str], doc_j: &[&str], alpha: f64, threshold: f64) -> bool {
    let placement = tss(doc_i, doc_j);
    if alpha == 0.0 {
        return to_f64(&placement.score) >= threshold;
    }
    if alpha == 1.0 && threshold == 0.5 {
        // dot / sqrt(ni * nj) >= 1/2  <=>  4 dot^2 >= ni * nj
        let (dot, ni, nj) = tf_counts(doc_i, doc_j);
        return dot > 0 && 4 * (dot as u128).pow(2) >= ni as u128 * nj as u128;
    }
    alpha * tf_cosine(doc_i, doc_j) + (1.0 - alpha) * to_f64(&placement.score) >= threshold
}
