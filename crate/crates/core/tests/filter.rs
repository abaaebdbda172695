use posetrainer_core::geometry::{fill_gaps, median_filter, smooth};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Explicitly padded copy, then a sorted window per output sample.
fn oracle_pass(xs: &[f64], w: usize) -> Vec<f64> {
    let h = w / 2;
    let mut padded = vec![xs[0]; h];
    padded.extend_from_slice(xs);
    padded.extend(std::iter::repeat_n(xs[xs.len() - 1], h));
    (0..xs.len())
        .map(|i| {
            let mut win = padded[i..i + w].to_vec();
            win.sort_by(|a, b| a.partial_cmp(b).unwrap());
            win[h]
        })
        .collect()
}

fn random_series(rng: &mut ChaCha8Rng, case: usize) -> Vec<f64> {
    let n = rng.gen_range(1..60);
    match case % 4 {
        0 => vec![rng.gen_range(-3.0..3.0); n],
        1 => {
            let step = rng.gen_range(-1.0..1.0);
            (0..n).map(|i| i as f64 * step).collect()
        }
        2 => {
            let mut v = vec![0.5; n];
            let at = rng.gen_range(0..n);
            v[at] = rng.gen_range(50.0..100.0);
            v
        }
        _ => (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect(),
    }
}

#[test]
fn double_pass_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for case in 0..2000 {
        let xs = random_series(&mut rng, case);
        let expected = oracle_pass(&oracle_pass(&xs, 5), 5);
        assert_eq!(smooth(&xs).unwrap().values(), &expected[..], "{xs:?}");
    }
}

#[test]
fn isolated_spikes_are_removed() {
    let mut xs = vec![1.0; 20];
    xs[7] = 90.0;
    xs[8] = -40.0;
    assert_eq!(smooth(&xs).unwrap().values(), &[1.0; 20][..]);
}

#[test]
fn windows_other_than_five() {
    let xs = [3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0];
    for w in [1, 3, 7, 9, 21] {
        assert_eq!(median_filter(&xs, w).unwrap().values(), &oracle_pass(&xs, w)[..]);
    }
}

#[test]
fn gap_filling_examples() {
    let s = fill_gaps(&[None, Some(1.0), None, None, Some(4.0), None]).unwrap();
    assert_eq!(s.values(), &[1.0, 1.0, 2.0, 3.0, 4.0, 4.0]);
    assert!(fill_gaps(&[None, Some(1.0), None]).is_err());
}

proptest! {
    #[test]
    fn single_pass_matches_oracle(xs in prop::collection::vec(-1e3f64..1e3, 1..80), h in 0usize..6) {
        let w = 2 * h + 1;
        prop_assert_eq!(median_filter(&xs, w).unwrap().into_values(), oracle_pass(&xs, w));
    }

    #[test]
    fn output_is_bounded_by_input(xs in prop::collection::vec(-1e3f64..1e3, 1..80)) {
        let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(smooth(&xs).unwrap().values().iter().all(|v| (lo..=hi).contains(v)));
    }
}
