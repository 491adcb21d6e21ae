use std::f64::consts::PI;

use geoquant::semiclassic::{oracle_spectrum, OneDofSystem};
use geoquant::Error;
use proptest::prelude::*;

fn oscillator(omega: f64, hbar: f64) -> OneDofSystem {
    let text = format!("{}*q^2/2", omega * omega);
    OneDofSystem::parse(&text).unwrap().with_hbar(hbar).unwrap()
}

/// Composite Simpson on `[0, 1]` with `2m` panels.
fn simpson(f: impl Fn(f64) -> f64, panels: usize) -> f64 {
    let h = 1.0 / panels as f64;
    let mut s = f(0.0) + f(1.0);
    for k in 1..panels {
        s += f(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[test]
fn oscillator_action_is_two_pi_e() {
    let s = OneDofSystem::parse("q^2/2").unwrap();
    let a = s.action_integral(1.0).unwrap();
    assert!((a - 2.0 * PI).abs() / (2.0 * PI) < 1e-10, "{a}");
}

#[test]
fn free_particle_has_no_compact_leaf() {
    let s = OneDofSystem::parse("0").unwrap();
    assert!(matches!(s.action_integral(1.0), Err(Error::NonCompactLeaf { .. })));
    assert!(matches!(s.bs_levels(0), Err(Error::NonCompactLeaf { .. })));
}

#[test]
fn multi_well_potentials_are_rejected() {
    let s = OneDofSystem::parse("q^4 - 2*q^2").unwrap();
    assert!(matches!(s.action_integral(1.0), Err(Error::MultiWell { wells: 2 })));
}

#[test]
fn quartic_action_matches_simpson() {
    // Symmetric well with turning points ±1; q = 1 − t² on each half.
    let integrand = |t: f64| {
        let q: f64 = 1.0 - t * t;
        2.0 * t * (2.0 * (1.0 - q.powi(4))).max(0.0).sqrt()
    };
    let oracle = 4.0 * simpson(integrand, 1_000_000);
    let a = OneDofSystem::parse("q^4").unwrap().action_integral(1.0).unwrap();
    assert!((a - oracle).abs() / oracle < 1e-9, "{a} vs {oracle}");
}

#[test]
fn holonomy_examples() {
    let s = OneDofSystem::parse("q^2/2").unwrap();
    assert!((s.holonomy(1.0).unwrap() - 1.0).norm() < 1e-9);
    assert!((s.holonomy(0.5).unwrap() + 1.0).norm() < 1e-9);
    for e in [0.1, 0.7, 3.3, 12.0] {
        assert!((s.holonomy(e).unwrap().norm() - 1.0).abs() < 1e-14);
    }
}

#[test]
fn oscillator_levels() {
    let r = OneDofSystem::parse("q^2/2").unwrap().bs_levels(3).unwrap();
    let e: Vec<f64> = r.levels.iter().map(|l| l.e_bs).collect();
    for (got, want) in e.iter().zip([0.5, 1.5, 2.5, 3.5]) {
        assert!((got - want).abs() < 1e-10 * want, "{e:?}");
    }
    assert!(r.levels.iter().all(|l| l.e_oracle.is_none() && l.rel_error.is_none()));
    assert!(r.levels.windows(2).all(|w| w[0].action < w[1].action));
}

#[test]
fn oscillator_levels_at_half_hbar() {
    let r = oscillator(1.0, 0.5).bs_levels(2).unwrap();
    for (l, want) in r.levels.iter().zip([0.25, 0.75, 1.25]) {
        assert!((l.e_bs - want).abs() < 1e-10 * want);
    }
}

#[test]
fn zero_offset_ground_state_is_degenerate() {
    let s = OneDofSystem::parse("q^2/2").unwrap().with_maslov(0.0).unwrap();
    let r = s.bs_levels(2).unwrap();
    let l0 = &r.levels[0];
    assert!(l0.degenerate && l0.action == 0.0 && l0.e_bs.abs() < 1e-14);
    assert!(!r.levels[1].degenerate);
    assert!((r.levels[1].e_bs - 1.0).abs() < 1e-10);
}

#[test]
fn oscillator_oracle() {
    let s = OneDofSystem::parse("q^2/2").unwrap();
    let e = oracle_spectrum(&s, 4, 4000, 12.0).unwrap();
    // Second-order differences carry an h²⟨p⁴⟩/24 bias, about 2e-6·(n² + n + ½).
    for (n, (got, want)) in e.iter().zip([0.5, 1.5, 2.5, 3.5]).enumerate() {
        let bound = if n < 2 { 1e-5 } else { 1e-4 };
        assert!((got - want).abs() < bound, "n = {n}: {got}");
    }
    let one = oracle_spectrum(&s, 1, 4000, 12.0).unwrap();
    assert_eq!(one.len(), 1);
    assert!((one[0] - 0.5).abs() < 1e-5);
}

#[test]
fn oracle_rejects_bad_grids_and_poor_decay() {
    let s = OneDofSystem::parse("q^2/2").unwrap();
    assert!(matches!(oracle_spectrum(&s, 1, 100, 12.0), Err(Error::InvalidGrid(_))));
    assert!(matches!(oracle_spectrum(&s, 1, 400, -1.0), Err(Error::InvalidGrid(_))));
    assert!(matches!(oracle_spectrum(&s, 3, 400, 2.0), Err(Error::InsufficientDecay { .. })));
}

#[test]
fn quartic_oracle_is_stable_under_refinement() {
    let s = OneDofSystem::parse("q^4").unwrap();
    let coarse = oracle_spectrum(&s, 1, 4000, 4.0).unwrap()[0];
    let fine = oracle_spectrum(&s, 1, 8000, 4.0).unwrap()[0];
    assert!((coarse - fine).abs() < 1e-6, "{coarse} vs {fine}");
    // Excited levels carry larger ⟨p⁴⟩ and need a finer grid for the same bound.
    let coarse = oracle_spectrum(&s, 6, 16000, 4.0).unwrap();
    let fine = oracle_spectrum(&s, 6, 32000, 4.0).unwrap();
    for (a, b) in coarse.iter().zip(&fine) {
        assert!((a - b).abs() < 1e-6 * b, "{a} vs {b}");
    }
}

#[test]
fn oscillator_report_against_oracle() {
    let r = OneDofSystem::parse("q^2/2").unwrap().bs_report(5, 4000, 12.0).unwrap();
    for l in &r.levels {
        assert!(l.rel_error.unwrap() <= 1e-4, "{l:?}");
    }
    let oracle = r.oracle.as_ref().unwrap();
    assert_eq!((oracle.grid_n, oracle.half_length), (4000, 12.0));
}

#[test]
fn single_row_report() {
    let r = OneDofSystem::parse("q^2/2").unwrap().bs_report(0, 400, 12.0).unwrap();
    assert_eq!(r.levels.len(), 1);
    let json = serde_json::to_value(&r).unwrap();
    let level = &json["levels"][0];
    for key in ["n", "action", "E_bs", "E_oracle", "relError", "degenerate"] {
        assert!(level.get(key).is_some(), "{key}");
    }
    assert_eq!(json["oracle"]["gridN"], 400);
    assert_eq!(json["quadrature"]["nodes"], 20);
}

#[test]
fn quartic_error_decreases_with_n() {
    let r = OneDofSystem::parse("q^4").unwrap().bs_report(5, 4000, 4.0).unwrap();
    let errors: Vec<f64> = r.levels.iter().map(|l| l.rel_error.unwrap()).collect();
    assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");
    // Levels n ≥ 1 satisfy the 2% bound; the ground state does not.
    assert!(errors[1..].iter().all(|&e| e <= 0.02), "{errors:?}");
}

#[test]
fn invalid_system_parameters() {
    let s = OneDofSystem::parse("q^2").unwrap();
    assert!(s.clone().with_mass(0.0).is_err());
    assert!(s.clone().with_hbar(-1.0).is_err());
    assert!(s.with_maslov(f64::NAN).is_err());
}

#[test]
fn oscillator_exact_for_all_hbar() {
    for hbar in [1.0, 0.5, 0.25] {
        let r = oscillator(1.0, hbar).bs_levels(10).unwrap();
        for l in &r.levels {
            let exact = hbar * (l.n as f64 + 0.5);
            assert!((l.e_bs - exact).abs() / exact <= 1e-9, "hbar {hbar}, n {}: {}", l.n, l.e_bs);
        }
    }
}

#[test]
fn oracle_converges_at_second_order() {
    let s = OneDofSystem::parse("q^4").unwrap();
    // gridN + 1 doubles, so the spacing halves exactly.
    let e: Vec<f64> = [999, 1999, 3999].iter().map(|&n| oracle_spectrum(&s, 1, n, 4.0).unwrap()[0]).collect();
    let order = ((e[0] - e[1]) / (e[1] - e[2])).abs().log2();
    assert!(order >= 1.9, "{order}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn action_is_increasing(e0 in 0.05f64..20.0, steps in 2usize..8) {
        for v in ["q^2/2", "q^4", "q^2 + q^4/3", "(q - 1)^2 + 1/5*q^4"] {
            let s = OneDofSystem::parse(v).unwrap();
            let (_, vmin) = s.minimum().unwrap();
            let actions: Vec<f64> = (0..steps)
                .map(|k| s.action_integral(vmin + e0 * (1.0 + k as f64 / 4.0)).unwrap())
                .collect();
            prop_assert!(actions.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn holonomy_is_trivial_at_integer_levels(n in 0usize..8, omega in 0.5f64..2.0, hbar in 0.25f64..1.0) {
        let s = oscillator(omega, hbar).with_maslov(0.0).unwrap();
        let r = s.bs_levels(n).unwrap();
        let e = r.levels[n].e_bs;
        prop_assert!((s.holonomy(e).unwrap() - 1.0).norm() < 1e-9);
    }

    #[test]
    fn levels_scale_linearly_in_hbar(n in 0usize..6, hbar in 0.2f64..2.0) {
        let unit = oscillator(1.0, 1.0).bs_levels(n).unwrap().levels[n].e_bs;
        let scaled = oscillator(1.0, hbar).bs_levels(n).unwrap().levels[n].e_bs;
        prop_assert!((scaled - hbar * unit).abs() / scaled <= 1e-9);
    }

    #[test]
    fn shifted_oscillators_are_exact(n in 0usize..6, c in -3.0f64..3.0, m in 0.5f64..3.0) {
        // V = (q − c)² with mass m: ω₀ = √(2/m).
        let v = format!("(q - ({c}))^2");
        let s = OneDofSystem::parse(&v).unwrap().with_mass(m).unwrap();
        let e = s.bs_levels(n).unwrap().levels[n].e_bs;
        let exact = (2.0 / m).sqrt() * (n as f64 + 0.5);
        prop_assert!((e - exact).abs() / exact <= 1e-9);
    }
}
