use alloc::vec::Vec;
use core::ops::Deref;

use crate::error::{Error, Result};

/// Window of the smoothing median filter.
pub const SMOOTHING_WINDOW: usize = 5;
/// Number of times the smoothing filter is applied.
pub const SMOOTHING_PASSES: usize = 2;

/// Per-frame scalar values (angles in degrees or positions in torso units).
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct Series(Vec<f64>);

impl Series {
    pub fn new(values: Vec<f64>) -> Series {
        Series(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_values(self) -> Vec<f64> {
        self.0
    }

    pub fn min(&self) -> Option<f64> {
        self.0.iter().copied().reduce(f64::min)
    }

    pub fn max(&self) -> Option<f64> {
        self.0.iter().copied().reduce(f64::max)
    }

    /// `max - min`.
    pub fn range(&self) -> Option<f64> {
        Some(self.max()? - self.min()?)
    }

    pub fn mean(&self) -> Option<f64> {
        (!self.0.is_empty()).then(|| self.0.iter().sum::<f64>() / self.0.len() as f64)
    }
}

impl Deref for Series {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for Series {
    fn from(values: Vec<f64>) -> Series {
        Series(values)
    }
}

impl FromIterator<f64> for Series {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Series {
        Series(iter.into_iter().collect())
    }
}

/// Sliding median with replicate padding at both ends.
///
/// Output has the same length as the input. `window` must be odd.
pub fn median_filter(series: &[f64], window: usize) -> Result<Series> {
    if window == 0 || window.is_multiple_of(2) {
        return Err(Error::InvalidWindow(window));
    }
    if series.is_empty() {
        return Err(Error::EmptySeries);
    }
    let half = window / 2;
    let last = series.len() - 1;
    let mut buf = Vec::with_capacity(window);
    let out = (0..series.len())
        .map(|center| {
            buf.clear();
            buf.extend((0..window).map(|k| {
                let idx = (center + k).saturating_sub(half).min(last);
                series[idx]
            }));
            let (_, median, _) = buf.select_nth_unstable_by(half, f64::total_cmp);
            *median
        })
        .collect();
    Ok(out)
}

/// Applies the size-5 median filter twice.
pub fn smooth(series: &[f64]) -> Result<Series> {
    smooth_with(series, SMOOTHING_WINDOW, SMOOTHING_PASSES)
}

pub fn smooth_with(series: &[f64], window: usize, passes: usize) -> Result<Series> {
    let mut current = median_filter(series, window)?;
    for _ in 1..passes {
        current = median_filter(&current, window)?;
    }
    Ok(current)
}

/// Fills holes by linear interpolation between the nearest defined
/// neighbours; leading and trailing holes take the nearest defined value.
pub fn fill_gaps(series: &[Option<f64>]) -> Result<Series> {
    let defined: Vec<(usize, f64)> = series
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| (i, v)))
        .collect();
    if defined.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: defined.len(),
        });
    }
    let (first_idx, first) = defined[0];
    let (last_idx, last) = defined[defined.len() - 1];
    let mut out = Vec::with_capacity(series.len());
    out.extend(core::iter::repeat_n(first, first_idx));
    for pair in defined.windows(2) {
        let (i0, v0) = pair[0];
        let (i1, v1) = pair[1];
        let span = (i1 - i0) as f64;
        out.extend((i0..i1).map(|i| v0 + (v1 - v0) * ((i - i0) as f64 / span)));
    }
    out.push(last);
    out.extend(core::iter::repeat_n(last, series.len() - last_idx - 1));
    Ok(Series(out))
}
