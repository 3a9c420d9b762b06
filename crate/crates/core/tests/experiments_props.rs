//! Cross-experiment invariants at reduced replication counts. The full-scale
//! grids run in the CLI crate's acceptance suite.

use siglab_core::experiments::{run_exp1, run_exp2, run_exp3, Exp1Config, Exp2Config, Exp3Config};
use siglab_core::hyptests::EventSet;

#[test]
fn exp2_snooping_dominates_and_grows_with_k() {
    let cfg = Exp2Config {
        reps: 2_000,
        ..Default::default()
    };
    let report = run_exp2(&cfg, 2).unwrap();
    for &alpha in &cfg.alphas {
        let freqs: Vec<f64> = cfg
            .k_values
            .iter()
            .map(|&k| report.cell(alpha, k).unwrap().tmax.frequency())
            .collect();
        for w in freqs.windows(2) {
            assert!(
                w[1] > w[0],
                "max-|t| size should grow with k at alpha={alpha}: {freqs:?}"
            );
        }
        for &k in &cfg.k_values {
            let cell = report.cell(alpha, k).unwrap();
            assert!(
                cell.tmax.frequency() >= cell.f.frequency() - 0.01,
                "snooping rule should reject at least as often as F"
            );
            assert!(cell.tmax.frequency() >= alpha - 0.01);
        }
    }
}

#[test]
fn exp3_paired_gamma_cells_are_nearly_symmetric() {
    let cfg = Exp3Config {
        gamma_min: -0.3,
        gamma_max: 0.3,
        gamma_step: 0.15,
        reps: 1_500,
        rhos: vec![0.5],
        ..Default::default()
    };
    let report = run_exp3(&cfg, 2).unwrap();
    let rows = &report.curves[0].rows;
    assert_eq!(rows.len(), 5);
    for i in 0..rows.len() {
        let j = rows.len() - 1 - i;
        assert_eq!(rows[i].gamma, -rows[j].gamma);
        for (a, b) in rows[i].pms.iter().zip(&rows[j].pms) {
            let diff = (a.frequency() - b.frequency()).abs();
            assert!(
                diff <= 0.03,
                "pms curve asymmetric at ±{}: {diff}",
                rows[i].gamma
            );
        }
    }
}

#[test]
fn exp3_gamma_zero_sizes_match_exact_theory() {
    // At γ=0 the restricted branch keeps exact size α (β̂_R is independent
    // of γ̂_U), while the unrestricted branch conditions on |t_γ| beyond its
    // critical value; with corr(t_β(U), t_γ) = −ρ the joint tail inflates the
    // total. Size at γ=0 = (1−α_U)·α + P(|Z₁| > c, |Z₂| > c_U) for a
    // bivariate normal with correlation −ρ. The rectangle probabilities
    // below were computed from that formula at n = 100 critical values.
    let theory: &[(f64, [f64; 3])] = &[
        (0.5, [0.0519, 0.0560, 0.0588]),
        (0.9, [0.0573, 0.0753, 0.0832]),
    ];
    let cfg = Exp3Config {
        gamma_min: 0.0,
        gamma_max: 0.0,
        gamma_step: 1.0,
        reps: 4_000,
        ..Default::default()
    };
    let report = run_exp3(&cfg, 2).unwrap();
    for (curve, (rho, expected)) in report.curves.iter().zip(theory) {
        assert_eq!(curve.rho, *rho);
        let row = &curve.rows[0];
        for ((level, cell), want) in cfg.alpha_u_levels.iter().zip(&row.pms).zip(expected) {
            let f = cell.frequency();
            assert!(
                (f - want).abs() <= 0.015,
                "rho={rho}, alpha_u={level}: size {f} at gamma=0, theory {want}"
            );
        }
        let bench = row.unrestricted.frequency();
        assert!(
            (0.05 - bench).abs() <= 0.015,
            "benchmark {bench} at rho={rho}"
        );
    }
}

#[test]
fn exp1_user_battery_is_used_verbatim() {
    let sevens = EventSet::new("sevens", [7u8, 17, 27, 37, 47, 57, 67, 77, 87, 97]).unwrap();
    let cfg = Exp1Config {
        n: 20_000,
        events: vec![sevens.clone()],
        reps: 400,
        ..Default::default()
    };
    let report = run_exp1(&cfg, 2).unwrap();
    assert_eq!(report.config.events[0], sevens);
    assert_eq!(report.event_cells.len(), 1);
    assert_eq!(report.sidak, 0.05);
    assert_eq!(report.bonferroni, 0.05);
}
