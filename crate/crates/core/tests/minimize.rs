use std::sync::Arc;

use cql_core::bubbles::{bubble_eval, sobolev_constant, BubbleSpec};
use cql_core::critical_exponent;
use cql_core::grid::{dirichlet_energy, lp_norm, Domain, GridFunction, PotentialSpec};
use cql_core::minimize::*;
use cql_core::sphere_measure;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn well_init(n: usize) -> Init {
    Init::Bubble(BubbleSpec::new(n, 0.1).unwrap().with_cutoff(0.45).unwrap())
}

fn random_field(dom: &Arc<Domain>, rng: &mut ChaCha8Rng) -> GridFunction {
    let mut f = GridFunction::new(dom.clone(), (0..dom.len()).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
    f.enforce_dirichlet();
    f
}

#[test]
fn quotient_is_scale_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let dom = Domain::radial_ball(5, 1.0, 150).unwrap();
    let a = PotentialSpec::well(0.5, -4.0, 5);
    for _ in 0..20 {
        let u = random_field(&dom, &mut rng);
        let q = rayleigh_quotient(&u, &a).unwrap();
        for t in [0.5, 3.0] {
            let qt = rayleigh_quotient(&u.scaled(t), &a).unwrap();
            assert!((qt - q).abs() <= 1e-12 * q.abs());
        }
    }
}

#[test]
fn constant_potential_quotient_matches_dense_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (n, nodes, lambda) = (5, 120, -2.5);
    let dom = Domain::radial_ball(n, 1.0, nodes).unwrap();
    let h = 1.0 / (nodes - 1) as f64;
    let omega = sphere_measure(n);
    let q = critical_exponent(n);
    let m = nodes - 1;
    let vol = |i: usize| {
        let lo = ((i as f64 - 0.5) * h).max(0.0);
        let hi = (i as f64 + 0.5) * h;
        omega * (hi.powi(n as i32) - lo.powi(n as i32)) / n as f64
    };
    // dense stiffness from the shell face areas
    let mut k = vec![vec![0.0; m]; m];
    for i in 0..m {
        let w = omega * ((i as f64 + 0.5) * h).powi(n as i32 - 1) / h;
        k[i][i] += w;
        if i + 1 < m {
            k[i + 1][i + 1] += w;
            k[i][i + 1] -= w;
            k[i + 1][i] -= w;
        }
    }
    for _ in 0..10 {
        let u = random_field(&dom, &mut rng);
        let v = u.values();
        let mut num = 0.0;
        for i in 0..m {
            for j in 0..m {
                num += v[i] * k[i][j] * v[j];
            }
            num += lambda * v[i] * v[i] * vol(i);
        }
        let den: f64 = (0..m).map(|i| v[i].abs().powf(q) * vol(i)).sum::<f64>().powf(2.0 / q);
        let grid = rayleigh_quotient(&u, &PotentialSpec::constant(lambda, n)).unwrap();
        assert!((grid - num / den).abs() <= 1e-10 * grid.abs(), "{grid} vs {}", num / den);
    }
}

#[test]
fn ordered_potentials_give_ordered_quotients() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let dom = Domain::radial_ball(5, 1.0, 100).unwrap();
    let a = PotentialSpec::well(0.5, -6.0, 5);
    let b = truncate_potential(&a, TruncationMode::Floor(2.0)).unwrap();
    let c = PotentialSpec::zero(5);
    for _ in 0..50 {
        let u = random_field(&dom, &mut rng);
        let qa = rayleigh_quotient(&u, &a).unwrap();
        let qb = rayleigh_quotient(&u, &b).unwrap();
        let qc = rayleigh_quotient(&u, &c).unwrap();
        assert!(qa <= qb && qb <= qc);
    }
}

#[test]
fn well_flow_invariants() {
    let dom = Domain::radial_ball(5, 1.0, 301).unwrap();
    let a = PotentialSpec::well(0.5, -4.0, 5);
    let rep = minimize_quotient(&a, &dom, well_init(5), &MinimizeOptions::default()).unwrap();
    assert_eq!(rep.status, Status::Converged);
    assert!(rep.el_residual <= 1e-6);
    assert!(rep.s_a_estimate < rep.sobolev);
    assert_eq!(rep.s_a_estimate, *rep.quotient_trajectory.last().unwrap());
    assert_eq!(rep.lagrange_multiplier, rep.s_a_estimate);
    assert!(rep.quotient_trajectory.windows(2).all(|w| w[1] <= w[0]));

    let q = critical_exponent(5);
    assert!((lp_norm(&rep.minimizer, q).unwrap() - 1.0).abs() <= 1e-12);
    let fresh = rayleigh_quotient(&rep.minimizer, &a).unwrap();
    assert!((fresh - rep.s_a_estimate).abs() <= 1e-12 * fresh);

    for &(d, p) in &rep.energy_trajectory {
        assert!(d + p >= (rep.coercivity - 1e-9) * d);
    }
    assert!(!rep.concentration.concentration_flag);

    let mut csv = Vec::new();
    rep.write_csv(&mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert!(text.starts_with("iter,quotient,el_residual,mass_frac_4h\n"));
    assert_eq!(text.lines().count(), rep.quotient_trajectory.len() + 1);
}

#[test]
fn truncation_and_depth_order_the_estimates() {
    let dom = Domain::radial_ball(5, 1.0, 201).unwrap();
    let opts = MinimizeOptions::default();
    let deep = PotentialSpec::well(0.5, -6.0, 5);
    let cut = truncate_potential(&deep, TruncationMode::Floor(3.0)).unwrap();
    let s_deep = minimize_quotient(&deep, &dom, well_init(5), &opts).unwrap();
    let s_cut = minimize_quotient(&cut, &dom, well_init(5), &opts).unwrap();
    assert_eq!(s_deep.status, Status::Converged);
    assert_eq!(s_cut.status, Status::Converged);
    assert!(s_deep.s_a_estimate <= s_cut.s_a_estimate + 1e-9);
}

#[test]
fn seeded_runs_are_reproducible() {
    let dom = Domain::radial_ball(5, 1.0, 101).unwrap();
    let a = PotentialSpec::well(0.5, -4.0, 5);
    let opts = MinimizeOptions {
        seed: Some(42),
        max_iter: 50,
        ..Default::default()
    };
    let r1 = minimize_quotient(&a, &dom, well_init(5), &opts).unwrap();
    let r2 = minimize_quotient(&a, &dom, well_init(5), &opts).unwrap();
    assert_eq!(r1.quotient_trajectory, r2.quotient_trajectory);
    assert_eq!(r1.minimizer.values(), r2.minimizer.values());
}

#[test]
fn non_coercive_potential_is_rejected() {
    let dom = Domain::radial_ball(3, 1.0, 81).unwrap();
    let a = PotentialSpec::constant(-20.0, 3);
    let r = minimize_quotient(&a, &dom, Init::Ground, &MinimizeOptions::default());
    assert!(matches!(r, Err(cql_core::Error::NonCoercive(c)) if c < 0.0));
}

#[test]
fn cartesian_flow_descends() {
    let dom = Domain::cartesian_ball(3, 1.0, 0.1).unwrap();
    let a = PotentialSpec::well(0.5, -6.0, 3);
    let opts = MinimizeOptions {
        max_iter: 15,
        stop_on_concentration: false,
        ..Default::default()
    };
    let rep = minimize_quotient(&a, &dom, Init::Ground, &opts).unwrap();
    assert!(rep.quotient_trajectory.windows(2).all(|w| w[1] <= w[0]));
    assert!(rep.quotient_trajectory.len() > 1);
    assert!((lp_norm(&rep.minimizer, 6.0).unwrap() - 1.0).abs() <= 1e-12);
}

#[test]
fn bubble_test_on_wells() {
    let dom = Domain::radial_ball(5, 1.0, 1001).unwrap();
    let t = brezis_nirenberg_bubble_test(
        &PotentialSpec::well(0.5, -4.0, 5),
        &dom,
        &[0.1, 0.05, 0.025, 0.0125],
        0.5,
    )
    .unwrap();
    assert!(t.strict);
    assert!(t.min_quotient < t.sobolev);

    assert!(matches!(
        brezis_nirenberg_bubble_test(&PotentialSpec::zero(5), &dom, &[0.1], 0.5),
        Err(cql_core::Error::Precondition(_))
    ));
    let shallow = brezis_nirenberg_bubble_test(&PotentialSpec::well(0.5, -1e-6, 5), &dom, &[0.1, 0.05], 0.5).unwrap();
    assert!(!shallow.strict);

    let dom4 = Domain::radial_ball(4, 1.0, 2001).unwrap();
    let t4 = brezis_nirenberg_bubble_test(
        &PotentialSpec::well(1.0, -8.0, 4),
        &dom4,
        &[0.125, 0.0625, 0.03125, 0.015625, 0.0078125],
        0.5,
    )
    .unwrap();
    assert!(t4.bracket_radius.is_some());
    assert!(t4.strict, "{t4:?}");
}

#[test]
fn truncated_bubble_quotient_sits_just_above_s() {
    let n = 5;
    let s = sobolev_constant(n).unwrap();
    let dom = Domain::radial_ball(n, 4.0, 4001).unwrap();
    let spec = BubbleSpec::new(n, 0.05).unwrap().with_cutoff(1.5).unwrap();
    let u = GridFunction::from_fn(dom.clone(), |x| bubble_eval(&spec, x));
    let q = rayleigh_quotient(&u, &PotentialSpec::zero(n)).unwrap();
    assert!(q >= s * 0.98 && q <= s * 1.02, "{q} vs {s}");
    assert!(dirichlet_energy(&u) > 0.0);
}
