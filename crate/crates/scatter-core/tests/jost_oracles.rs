//! Jost solutions against the closed-form matching solution of a square barrier.

use proptest::prelude::*;
use scatter_core::jost::{
    jost_solution, jost_wronskian, jost_wronskian_w0, ode_jost_oracle, picard_jost, wronskian_from_rescaled,
    JostPair, Side, PICARD_MAX_ITER, PICARD_TOL,
};
use scatter_core::numerics::{SpatialGrid, INNER, LEFT, RIGHT};
use scatter_core::potential::{build_potential, Potential, PotentialSpec};
use scatter_core::{C64, I};

const HEIGHT: f64 = 4.0;

fn grid() -> SpatialGrid {
    SpatialGrid::new(-10.0, 0.0, 1.0, 10.0, [401, 101, 401]).unwrap()
}

fn barrier() -> Potential {
    build_potential(&PotentialSpec::Barrier { height: HEIGHT }, &grid()).unwrap()
}

/// `χ+` inside a constant step of height `v0` on `[0, 1]`, matched at `x = 1`.
fn plus_inside(zeta: C64, v0: f64, x: f64) -> (C64, C64) {
    let q = (zeta * zeta - v0).sqrt();
    let e = (I * zeta).exp();
    let (c, d) = (e, I * zeta * e);
    let s = q * (x - 1.0);
    let sinc = if q.norm() < 1e-12 { C64::new(x - 1.0, 0.0) } else { s.sin() / q };
    (c * s.cos() + d * sinc, -c * q * s.sin() + d * s.cos())
}

/// `χ-` inside the step, matched at `x = 0`.
fn minus_inside(zeta: C64, v0: f64, x: f64) -> (C64, C64) {
    let q = (zeta * zeta - v0).sqrt();
    let (c, d) = (C64::new(1.0, 0.0), -I * zeta);
    let s = q * x;
    let sinc = if q.norm() < 1e-12 { C64::new(x, 0.0) } else { s.sin() / q };
    (c * s.cos() + d * sinc, -c * q * s.sin() + d * s.cos())
}

fn closed_w(zeta: C64, v0: f64) -> C64 {
    let (p, dp) = plus_inside(zeta, v0, 0.0);
    p * (-I * zeta) - dp
}

#[test]
fn picard_matches_closed_form_inside_barrier() {
    let v = barrier();
    let zeta = C64::new(2.0, 0.0);
    let s = jost_solution(Side::Right, zeta, &v).unwrap();
    for (i, x) in grid().nodes(INNER).into_iter().enumerate() {
        let (want, dwant) = plus_inside(zeta, HEIGHT, x);
        assert!((s.chi.at(INNER, i) - want).norm() < 1e-6);
        assert!((s.chi_prime.at(INNER, i) - dwant).norm() < 1e-6);
    }
}

#[test]
fn well_growth_profile_matches_closed_form() {
    let v = build_potential(&PotentialSpec::Well { depth: 4.0 }, &grid()).unwrap();
    let zeta = C64::new(0.0, 0.5);
    let s = ode_jost_oracle(Side::Right, zeta, &v).unwrap();
    for (i, x) in grid().nodes(INNER).into_iter().enumerate() {
        let (want, _) = plus_inside(zeta, -4.0, x);
        assert!((s.chi.at(INNER, i) - want).norm() < 1e-6 * (1.0 + want.norm()));
    }
}

#[test]
fn zero_potential_oracle_is_plane_wave() {
    let v = Potential::zero(grid());
    let zeta = C64::new(1.7, 0.3);
    let s = ode_jost_oracle(Side::Left, zeta, &v).unwrap();
    for seg in [LEFT, INNER, RIGHT] {
        for (i, x) in grid().nodes(seg).into_iter().enumerate() {
            let want = (-I * zeta * x).exp();
            assert!((s.chi.at(seg, i) - want).norm() < 1e-10 * want.norm());
        }
    }
}

#[test]
fn wronskian_against_closed_form() {
    let v = barrier();
    for k in [0.5, 1.0, 2.0, 3.0] {
        let zeta = C64::new(k, 0.0);
        let w = jost_wronskian(zeta, &v).unwrap();
        let want = closed_w(zeta, HEIGHT);
        assert!((w - want).norm() < 1e-8 * want.norm(), "k={k}: {w} vs {want}");
        let s = jost_solution(Side::Right, zeta, &v).unwrap();
        let (b, db) = (s.b_rescaled().a_plus(), s.b_rescaled_prime().a_plus());
        assert!((wronskian_from_rescaled(b, db, zeta) - w).norm() < 1e-10 * w.norm());
    }
}

#[test]
fn free_wronskians() {
    let v = Potential::zero(grid());
    for zeta in [C64::new(1.0, 0.0), C64::new(0.0, 2.0), C64::new(-0.7, 0.4)] {
        assert!((jost_wronskian(zeta, &v).unwrap() + 2.0 * I * zeta).norm() < 1e-12);
    }
    assert!(jost_wronskian_w0(1.3, &v).unwrap().norm() < 1e-12);
}

#[test]
fn modulus_identity_and_minus_expansion() {
    let v = barrier();
    let k = 1.0;
    let w = jost_wronskian(C64::new(k, 0.0), &v).unwrap();
    let w0 = jost_wronskian_w0(k, &v).unwrap();
    assert!((w.norm_sqr() - w0.norm_sqr() - 4.0 * k * k).abs() < 1e-8 * 4.0 * k * k);
    let plus_k = jost_solution(Side::Right, C64::new(k, 0.0), &v).unwrap();
    let plus_mk = jost_solution(Side::Right, C64::new(-k, 0.0), &v).unwrap();
    let minus_k = jost_solution(Side::Left, C64::new(k, 0.0), &v).unwrap();
    for (i, x) in grid().nodes(INNER).into_iter().enumerate() {
        assert!((minus_k.chi.at(INNER, i) - minus_inside(C64::new(k, 0.0), HEIGHT, x).0).norm() < 1e-6);
    }
    let rhs = plus_k.chi.scale(w0).sub(&plus_mk.chi.scale(w)).scale(1.0 / (2.0 * I * k));
    assert!(rhs.sub(&minus_k.chi).sup_norm() < 1e-6);
}

#[test]
fn picard_terms_obey_factorial_bound() {
    let v = barrier();
    let (_, diag) = picard_jost(Side::Right, C64::new(1.0, 0.0), &v, PICARD_TOL, PICARD_MAX_ITER).unwrap();
    let c = diag.kernel_bound * v.l1();
    let mut fact = 1.0;
    for (n, t) in diag.term_sup_norms.iter().enumerate().take(11) {
        if n > 0 {
            fact *= n as f64;
        }
        assert!(*t <= c.powi(n as i32) / fact * (1.0 + 1e-9), "n={n}: {t}");
    }
    assert!(diag.converged && diag.residual < 1e-12);
}

#[test]
fn positive_barrier_lower_bound_and_zero_energy() {
    let v = barrier();
    for j in 1..=40 {
        let k = 0.2 * j as f64;
        assert!(jost_wronskian(C64::new(k, 0.0), &v).unwrap().norm() >= 2.0 * k);
    }
    assert!(jost_wronskian(C64::new(0.0, 0.0), &v).unwrap().norm() > 1e-3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn picard_and_ode_agree(re in -4.0f64..4.0, im in 0.0f64..2.0) {
        let v = barrier();
        let zeta = C64::new(re, im);
        for side in [Side::Left, Side::Right] {
            let a = jost_solution(side, zeta, &v).unwrap();
            let b = ode_jost_oracle(side, zeta, &v).unwrap();
            let scale = 1.0 + a.chi.segment(INNER).iter().map(|c| c.norm()).fold(0.0, f64::max);
            let diff = a.chi.sub(&b.chi);
            let err = diff.segment(INNER).iter().map(|c| c.norm()).fold(0.0, f64::max);
            prop_assert!(err < 1e-6 * scale, "{side:?} ζ={zeta}: {err}");
        }
    }

    #[test]
    fn conjugation_on_real_axis(k in 0.1f64..6.0) {
        let v = barrier();
        let p = JostPair::new(C64::new(k, 0.0), &v).unwrap();
        let m = JostPair::new(C64::new(-k, 0.0), &v).unwrap();
        prop_assert!(p.plus.chi.conj().sub(&m.plus.chi).sup_norm() < 1e-10);
        prop_assert!(p.minus.chi.conj().sub(&m.minus.chi).sup_norm() < 1e-10);
        prop_assert!((p.w.conj() - m.w).norm() < 1e-10);
    }

    #[test]
    fn rescaled_solution_bounded_on_real_axis(k in -6.0f64..6.0) {
        let v = barrier();
        let s = jost_solution(Side::Right, C64::new(k, 0.0), &v).unwrap();
        let bound = (v.l1() * 1.0f64).exp();
        prop_assert!(s.b_rescaled().segment(INNER).iter().all(|b| b.norm() <= bound * (1.0 + 1e-12)));
    }
}
