//! Size behaviour of the scalar tests under simulated true nulls.

use siglab_core::hyptests::{builtin_battery, chi_squared_gof, event_frequency_test};
use siglab_core::RngStream;
use siglab_testkit as kit;

#[test]
fn proportion_test_size_close_to_nominal_under_null() {
    let battery = builtin_battery();
    let repdigits = &battery[0];
    let reps = 2_000u64;
    let n = 10_000usize;
    let mut rejections = 0u64;
    for r in 0..reps {
        let mut rng = RngStream::new(0xA11A, r);
        let draws: Vec<i64> = (0..n).map(|_| rng.uniform_int(1, 100).unwrap()).collect();
        if event_frequency_test(&draws, repdigits, 0.05)
            .unwrap()
            .reject
        {
            rejections += 1;
        }
    }
    let freq = rejections as f64 / reps as f64;
    assert!(
        (0.035..=0.065).contains(&freq),
        "z-test null rejection frequency {freq}"
    );
}

#[test]
fn chi_squared_gof_size_close_to_nominal_under_null() {
    let reps = 2_000u64;
    let n = 10_000u64;
    let probs = vec![0.01; 100];
    let mut rejections = 0u64;
    for r in 0..reps {
        let mut rng = RngStream::new(0xBEE, r);
        let mut hist = [0u64; 100];
        for _ in 0..n {
            let v = rng.uniform_int(1, 100).unwrap();
            hist[v as usize - 1] += 1;
        }
        if chi_squared_gof(&hist, &probs, 0.05).unwrap().reject {
            rejections += 1;
        }
    }
    let freq = rejections as f64 / reps as f64;
    assert!(
        (0.035..=0.065).contains(&freq),
        "chi-squared null rejection frequency {freq}"
    );
}

#[test]
fn chi_squared_p_values_are_uniform_under_null() {
    // Mirrors the 100-cell check on full-size samples: an unremarkable
    // p-value is the expected outcome, and across replications the p-values
    // are uniform.
    let reps = 1_000u64;
    let n = 100_000u64;
    let probs = vec![0.01; 100];
    let mut p_values = Vec::with_capacity(reps as usize);
    for r in 0..reps {
        let mut rng = RngStream::new(0xCAFE, r);
        let mut hist = [0u64; 100];
        for _ in 0..n {
            let v = rng.uniform_int(1, 100).unwrap();
            hist[v as usize - 1] += 1;
        }
        p_values.push(chi_squared_gof(&hist, &probs, 0.05).unwrap().p_one_tailed);
    }
    let d = kit::ks_statistic(&mut p_values, |p| p.clamp(0.0, 1.0));
    assert!(d < 0.05, "KS distance of GOF p-values from uniform: {d}");
}
