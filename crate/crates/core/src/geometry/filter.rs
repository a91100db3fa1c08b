//! Zero-phase moving-average filtering for recorded signals.

use super::GeometryError;

/// Centered moving average with a shrinking symmetric window at the edges.
///
/// Each output sample averages the input over [i−r, i+r] where r shrinks
/// near the boundaries (no phantom padding), so affine signals pass through
/// unchanged everywhere and the output never extrapolates. The window must
/// be odd, ≥ 1, and no longer than the signal.
pub fn lowpass_filter<const N: usize>(
    signal: &[[f64; N]],
    window: usize,
) -> Result<Vec<[f64; N]>, GeometryError> {
    if signal.is_empty() {
        return Err(GeometryError::EmptySignal);
    }
    if window.is_multiple_of(2) || window == 0 || window > signal.len() {
        return Err(GeometryError::BadWindow {
            window,
            len: signal.len(),
        });
    }
    let half = window / 2;
    let n = signal.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let r = half.min(i).min(n - 1 - i);
        let mut acc = [0.0; N];
        for sample in &signal[i - r..=i + r] {
            for (a, v) in acc.iter_mut().zip(sample) {
                *a += v;
            }
        }
        let count = (2 * r + 1) as f64;
        for a in acc.iter_mut() {
            *a /= count;
        }
        out.push(acc);
    }
    Ok(out)
}
