use alloc::vec;

use super::FeatureSeries;
use crate::error::{Error, Result};

/// Euclidean distance between two feature vectors of equal length.
pub fn frame_distance(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

/// Dynamic time warping distance with the symmetric match / insertion /
/// deletion step pattern and no window constraint.
///
/// `G(i, j) = D(i, j) + min(G(i-1, j), G(i, j-1), G(i-1, j-1))`, starting
/// from `G(0, 0) = D(0, 0)`; returns `G(m-1, n-1)`.
pub fn dtw_distance(query: &FeatureSeries, candidate: &FeatureSeries) -> Result<f64> {
    if query.is_empty() || candidate.is_empty() {
        return Err(Error::EmptySeries);
    }
    if query.dim() != candidate.dim() {
        return Err(Error::DimensionMismatch {
            left: query.dim(),
            right: candidate.dim(),
        });
    }
    let n = candidate.len();
    // Row 0 and column 0 are the infinite border, except the origin.
    let mut prev = vec![f64::INFINITY; n + 1];
    let mut cur = vec![f64::INFINITY; n + 1];
    prev[0] = 0.0;
    for q in query.frames() {
        cur[0] = f64::INFINITY;
        for (j, c) in candidate.frames().enumerate() {
            let best = prev[j + 1].min(cur[j]).min(prev[j]);
            cur[j + 1] = frame_distance(q, c) + best;
        }
        core::mem::swap(&mut prev, &mut cur);
        prev[0] = f64::INFINITY;
    }
    Ok(prev[n])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::keypoints::ExerciseKind;

    fn scalar(values: &[f64]) -> FeatureSeries {
        FeatureSeries::from_flat(values.to_vec(), 1, ExerciseKind::BicepCurl).unwrap()
    }

    #[test]
    fn examples() {
        let q = scalar(&[0.5, 1.5, -2.0]);
        assert_eq!(dtw_distance(&q, &q).unwrap(), 0.0);
        assert_eq!(dtw_distance(&scalar(&[0.0]), &scalar(&[0.0, 0.0, 0.0])).unwrap(), 0.0);
        assert_eq!(dtw_distance(&scalar(&[0.0, 0.0]), &scalar(&[1.0, 1.0])).unwrap(), 2.0);
        assert_eq!(dtw_distance(&scalar(&[1.0, 2.0, 3.0]), &scalar(&[1.0, 2.0, 2.0, 3.0])).unwrap(), 0.0);
    }

    #[test]
    fn multivariate_uses_euclidean_frames() {
        let a = FeatureSeries::from_flat(vec![0.0, 0.0], 2, ExerciseKind::FrontRaise).unwrap();
        let b = FeatureSeries::from_flat(vec![3.0, 4.0], 2, ExerciseKind::FrontRaise).unwrap();
        assert_eq!(dtw_distance(&a, &b).unwrap(), 5.0);
    }

    #[test]
    fn errors() {
        let a = FeatureSeries::from_flat(vec![0.0, 0.0], 2, ExerciseKind::FrontRaise).unwrap();
        assert_eq!(
            dtw_distance(&a, &scalar(&[1.0])),
            Err(Error::DimensionMismatch { left: 2, right: 1 })
        );
        let empty = FeatureSeries::from_flat(vec![], 1, ExerciseKind::BicepCurl).unwrap();
        assert_eq!(dtw_distance(&empty, &scalar(&[1.0])), Err(Error::EmptySeries));
    }
}
