//! Shape-based distance: one minus the maximum coefficient-normalized
//! cross-correlation over all `2p - 1` lags, computed through zero-padded
//! FFTs.
//!
//! Lag convention: `R_k(x, y) = sum_j x[j + k] * y[j]` for `k >= 0` and
//! `R_k(x, y) = R_{-k}(y, x)` for `k < 0`. Index `w` of a
//! [`CrossCorrelation`] (zero-based here) holds lag `w - (p - 1)`, so the
//! first entry is lag `-(p - 1)` and the centre entry is lag 0.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::TimeSeries;

/// The `2p - 1` lag products of two series.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossCorrelation<T> {
    values: Vec<T>,
}

impl<T: Scalar> CrossCorrelation<T> {
    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Length `p` of the series that produced this sequence.
    pub fn series_len(&self) -> usize {
        (self.values.len() + 1) / 2
    }

    /// Value at lag `k`, `-(p-1) <= k <= p-1`.
    pub fn lag(&self, k: isize) -> T {
        let p = self.series_len() as isize;
        self.values[(k + p - 1) as usize]
    }

    /// Index and value of the maximum; the smallest index wins ties.
    pub fn argmax(&self) -> (usize, T) {
        let mut best = 0;
        for (w, &v) in self.values.iter().enumerate().skip(1) {
            if v > self.values[best] {
                best = w;
            }
        }
        (best, self.values[best])
    }
}

/// Outcome of one SBD evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct SbdResult<T> {
    /// Dissimilarity in `[0, 2]`.
    pub dist: T,
    /// Lag of the best alignment, in `-(p-1)..=p-1`.
    pub shift: isize,
    /// `y` shifted by `shift` towards `x`, zero-padded.
    pub aligned: TimeSeries<T>,
}

/// Forward spectrum of one zero-padded series plus its Euclidean norm.
#[derive(Debug, Clone)]
pub struct Spectrum<T> {
    bins: Vec<Complex<T>>,
    norm: T,
}

impl<T: Scalar> Spectrum<T> {
    pub fn norm(&self) -> T {
        self.norm
    }
}

/// Planned transforms for series of one fixed length `p`.
///
/// Planning is done once; each call allocates its own scratch, so a plan can
/// be shared between threads.
#[derive(Clone)]
pub struct SbdPlan<T: Scalar> {
    p: usize,
    fft_len: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: Scalar> std::fmt::Debug for SbdPlan<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SbdPlan")
            .field("p", &self.p)
            .field("fft_len", &self.fft_len)
            .finish()
    }
}

/// Padded transform length: the next power of two at or above `2p - 1`.
pub fn padded_len(p: usize) -> usize {
    (2 * p - 1).next_power_of_two()
}

impl<T: Scalar> SbdPlan<T> {
    pub fn new(p: usize) -> Self {
        let fft_len = padded_len(p.max(1));
        let mut planner = FftPlanner::new();
        Self {
            p,
            fft_len,
            forward: planner.plan_fft_forward(fft_len),
            inverse: planner.plan_fft_inverse(fft_len),
        }
    }

    pub fn series_len(&self) -> usize {
        self.p
    }

    pub fn fft_len(&self) -> usize {
        self.fft_len
    }

    fn check_len(&self, x: &TimeSeries<T>) -> Result<()> {
        if x.len() != self.p {
            return Err(Error::DimensionMismatch {
                expected: self.p,
                found: x.len(),
            });
        }
        Ok(())
    }

    pub fn spectrum(&self, x: &TimeSeries<T>) -> Result<Spectrum<T>> {
        self.check_len(x)?;
        let mut bins = vec![Complex::new(T::zero(), T::zero()); self.fft_len];
        for (b, &v) in bins.iter_mut().zip(x.iter()) {
            b.re = v;
        }
        self.forward.process(&mut bins);
        Ok(Spectrum {
            bins,
            norm: x.norm(),
        })
    }

    fn correlate_spectra(&self, sx: &Spectrum<T>, sy: &Spectrum<T>) -> CrossCorrelation<T> {
        let mut prod: Vec<Complex<T>> = sx
            .bins
            .iter()
            .zip(&sy.bins)
            .map(|(a, b)| a * b.conj())
            .collect();
        self.inverse.process(&mut prod);
        let scale = T::from_usize_lossy(self.fft_len);
        let p = self.p;
        // circular index of lag k is k mod fft_len; negative lags sit at the tail
        let values = (0..2 * p - 1)
            .map(|w| {
                let idx = (w + self.fft_len + 1 - p) % self.fft_len;
                prod[idx].re / scale
            })
            .collect();
        CrossCorrelation { values }
    }

    pub fn cross_correlate(
        &self,
        x: &TimeSeries<T>,
        y: &TimeSeries<T>,
    ) -> Result<CrossCorrelation<T>> {
        let sx = self.spectrum(x)?;
        let sy = self.spectrum(y)?;
        Ok(self.correlate_spectra(&sx, &sy))
    }

    /// Distance and shift from precomputed spectra, without building the
    /// aligned copy.
    pub fn distance_spectra(&self, sx: &Spectrum<T>, sy: &Spectrum<T>) -> (T, isize) {
        let denom = sx.norm * sy.norm;
        if denom.is_zero() {
            return (T::one(), 0);
        }
        let cc = self.correlate_spectra(sx, sy);
        let (w, best) = cc.argmax();
        let dist = (T::one() - best / denom).max(T::zero()).min(T::lit(2.0));
        (dist, w as isize - (self.p as isize - 1))
    }

    /// Full SBD from precomputed spectra; `y` supplies the samples to align.
    pub fn sbd_spectra(
        &self,
        sx: &Spectrum<T>,
        sy: &Spectrum<T>,
        y: &TimeSeries<T>,
    ) -> SbdResult<T> {
        let (dist, shift) = self.distance_spectra(sx, sy);
        SbdResult {
            dist,
            shift,
            aligned: shift_series(y, shift),
        }
    }

    pub fn sbd(&self, x: &TimeSeries<T>, y: &TimeSeries<T>) -> Result<SbdResult<T>> {
        let sx = self.spectrum(x)?;
        let sy = self.spectrum(y)?;
        Ok(self.sbd_spectra(&sx, &sy, y))
    }
}

fn check_pair<T: Scalar>(x: &TimeSeries<T>, y: &TimeSeries<T>) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    Ok(())
}

/// Cross-correlation of `x` and `y` at all `2p - 1` lags.
pub fn fft_cross_correlate<T: Scalar>(
    x: &TimeSeries<T>,
    y: &TimeSeries<T>,
) -> Result<CrossCorrelation<T>> {
    check_pair(x, y)?;
    SbdPlan::new(x.len()).cross_correlate(x, y)
}

/// Shape-based distance between `x` and `y`, with `y` aligned towards `x`.
///
/// An all-zero operand gives `dist = 1` and `shift = 0`.
pub fn sbd<T: Scalar>(x: &TimeSeries<T>, y: &TimeSeries<T>) -> Result<SbdResult<T>> {
    check_pair(x, y)?;
    SbdPlan::new(x.len()).sbd(x, y)
}

/// Slides `y` by `shift` positions, filling with zeros: positive shifts
/// prepend `shift` zeros, negative shifts drop the head and append zeros.
pub fn shift_series<T: Scalar>(y: &TimeSeries<T>, shift: isize) -> TimeSeries<T> {
    let p = y.len();
    let s = shift.unsigned_abs().min(p);
    let src = y.as_slice();
    let mut out = vec![T::zero(); p];
    if shift >= 0 {
        out[s..].copy_from_slice(&src[..p - s]);
    } else {
        out[..p - s].copy_from_slice(&src[s..]);
    }
    TimeSeries::new(out).unwrap_or_else(|_| TimeSeries::zeros(p))
}
