//! Confidence-versus-residual diagnostics.

use super::UncertaintyError;
use serde::{Deserialize, Serialize};

/// Correlation between confidences and absolute residuals. A predictive
/// confidence measure shows a strong (negative) correlation; degenerate
/// inputs are flagged instead of silently reported as zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub pearson: Option<f64>,
    pub spearman: Option<f64>,
    pub n: usize,
    pub degenerate: bool,
}

/// One scatter-plot row for external plotting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterRow {
    pub segment_id: String,
    pub estimator: String,
    pub confidence: f64,
    pub abs_strike_error: f64,
}

pub fn confidence_residual_diagnostics(
    confidences: &[f64],
    abs_errors: &[f64],
) -> Result<CorrelationReport, UncertaintyError> {
    if confidences.len() != abs_errors.len() || confidences.len() < 3 {
        return Err(UncertaintyError::BadPairing);
    }
    let pearson_r = pearson(confidences, abs_errors);
    let spearman_r = pearson(&ranks(confidences), &ranks(abs_errors));
    Ok(CorrelationReport {
        pearson: pearson_r,
        spearman: spearman_r,
        n: confidences.len(),
        degenerate: pearson_r.is_none() || spearman_r.is_none(),
    })
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxx += (a - mean_x).powi(2);
        syy += (b - mean_y).powi(2);
        sxy += (a - mean_x) * (b - mean_y);
    }
    if sxx <= 1e-24 || syy <= 1e-24 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

/// Average ranks with ties sharing their mean rank.
fn ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let mut out = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            out[idx] = rank;
        }
        i = j + 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    #[test]
    fn perfectly_anti_monotone_pairs() {
        let confidences: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let errors: Vec<f64> = (0..10).map(|i| 100.0 - (i as f64).powi(3)).collect();
        let report = confidence_residual_diagnostics(&confidences, &errors).unwrap();
        assert_abs_diff_eq!(report.spearman.unwrap(), -1.0, epsilon = 1e-12);
        assert!(!report.degenerate);
    }

    #[test]
    fn constant_confidence_is_flagged() {
        let confidences = vec![0.5; 8];
        let errors: Vec<f64> = (0..8).map(|i| i as f64).collect();
        let report = confidence_residual_diagnostics(&confidences, &errors).unwrap();
        assert!(report.degenerate);
        assert_eq!(report.pearson, None);
    }

    #[test]
    fn recovers_a_planted_correlation() {
        // bivariate normal with ρ = 0.8, n = 10000
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let unit = Normal::new(0.0, 1.0).unwrap();
        let rho: f64 = 0.8;
        let mut x = Vec::with_capacity(10_000);
        let mut y = Vec::with_capacity(10_000);
        for _ in 0..10_000 {
            let a = unit.sample(&mut rng);
            let b = unit.sample(&mut rng);
            x.push(a);
            y.push(rho * a + (1.0 - rho * rho).sqrt() * b);
        }
        let report = confidence_residual_diagnostics(&x, &y).unwrap();
        assert!((report.pearson.unwrap() - rho).abs() < 0.05);
    }

    #[test]
    fn mismatched_or_short_inputs_rejected() {
        assert!(confidence_residual_diagnostics(&[1.0, 2.0], &[1.0]).is_err());
        assert!(confidence_residual_diagnostics(&[1.0, 2.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn tied_ranks_average() {
        assert_eq!(ranks(&[5.0, 5.0, 1.0]), vec![2.5, 2.5, 1.0]);
    }
}
