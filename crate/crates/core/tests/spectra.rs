use proptest::prelude::*;

use shellbuck_core::ansatz::{ansatz_ratios, bump_profile};
use shellbuck_core::basis::{BlockBasis, Parity};
use shellbuck_core::branch::{imperfect_branch, perfect_stress};
use shellbuck_core::pencil;
use shellbuck_core::spectra::{buckling_load, korn_constant, safe_load_constant, SpectralConfig};
use shellbuck_core::ShellParams;

fn cfg(k_ax: usize, p_rad: usize) -> SpectralConfig {
    SpectralConfig { k_ax: Some(k_ax), p_rad, m_max: Some(8), auto_extend: false, ..Default::default() }
}

#[test]
fn parity_classes_share_spectra() {
    let p = ShellParams::new(0.05, 2.0, 1.0, 0.3).unwrap();
    let stress = perfect_stress(&p);
    let even = BlockBasis::new(p, 3, Parity::Even, 5, 3).unwrap();
    let odd = BlockBasis::new(p, 3, Parity::Odd, 5, 3).unwrap();
    let (fe, fo) = (even.assemble(&stress).unwrap(), odd.assemble(&stress).unwrap());
    let pairs = [(&fe.ee, &fe.g, &fo.ee, &fo.g), (&fe.s, &fe.g, &fo.s, &fo.g), (&fe.c, &fe.s, &fo.c, &fo.s)];
    for (a1, b1, a2, b2) in pairs {
        let e1 = pencil::solve(a1, b1).unwrap().values;
        let e2 = pencil::solve(a2, b2).unwrap().values;
        assert_eq!(e1.len(), e2.len());
        let scale = e1.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        for (x, y) in e1.iter().zip(&e2) {
            assert!((x - y).abs() < 1e-9 * scale, "{x} vs {y}");
        }
    }
}

#[test]
fn enlarging_the_basis_never_raises_minima() {
    let p = ShellParams::new(0.05, 2.0, 1.0, 0.3).unwrap();
    let stress = perfect_stress(&p);
    let nested = [cfg(3, 1), cfg(5, 1), cfg(5, 2), cfg(8, 3)];
    let mut prev: Option<(f64, f64, f64)> = None;
    for c in nested {
        let k = korn_constant(&p, &c).unwrap().value;
        let l = buckling_load(&p, &stress, &c).unwrap().value;
        let s = safe_load_constant(&p, &c).unwrap().value;
        if let Some((pk, pl, ps)) = prev {
            assert!(k <= pk * (1.0 + 1e-10), "korn {k} > {pk}");
            assert!(l <= pl * (1.0 + 1e-10), "load {l} > {pl}");
            assert!(s <= ps * (1.0 + 1e-10), "safe load {s} > {ps}");
        }
        prev = Some((k, l, s));
    }
}

#[test]
fn pencil_residuals_are_small() {
    let p = ShellParams::new(0.02, 2.0, 1.0, 0.3).unwrap();
    let c = cfg(8, 3);
    assert!(korn_constant(&p, &c).unwrap().residual < 1e-10);
    assert!(safe_load_constant(&p, &c).unwrap().residual < 1e-10);
    assert!(buckling_load(&p, &perfect_stress(&p), &c).unwrap().residual < 1e-10);
    assert!(buckling_load(&p, &imperfect_branch(0.5, &p).stress, &c).unwrap().residual < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn buckling_load_is_invariant_under_young_rescaling(young in 0.01f64..100.0, eps in 0.0f64..1.0) {
        let base = ShellParams::new(0.05, 2.0, 1.0, 0.3).unwrap();
        let scaled = base.with_young(young).unwrap();
        let c = SpectralConfig { k_ax: Some(4), p_rad: 2, m_max: Some(4), auto_extend: false, ..Default::default() };
        let a = buckling_load(&base, &imperfect_branch(eps, &base).stress, &c).unwrap().value;
        let b = buckling_load(&scaled, &imperfect_branch(eps, &scaled).stress, &c).unwrap().value;
        prop_assert!((a - b).abs() < 1e-12 * a, "{a} vs {b}");
    }
}

#[test]
fn ansatz_ratios_bound_the_discrete_extrema() {
    let p = ShellParams::new(0.05, 2.0, 1.0, 0.3).unwrap();
    let report = ansatz_ratios(&bump_profile(2.0).unwrap(), &p).unwrap();
    let c = SpectralConfig::default();
    let k = korn_constant(&p, &c).unwrap().value;
    let l = buckling_load(&p, &perfect_stress(&p), &c).unwrap().value;
    assert!(k <= report.korn_ratio(), "{k} vs {}", report.korn_ratio());
    assert!(l <= report.load_ratio(), "{l} vs {}", report.load_ratio());
}
