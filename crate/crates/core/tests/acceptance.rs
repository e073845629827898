//! Acceptance suite: one test per criterion, each printing a PASS line
//! (run with `--nocapture` to see them). Every comparison on the exact
//! path is an identity of rationals — no tolerances except the stated
//! 1e-6 relative window where an irrational root meets a brute-force sup.

mod common;

use rand::Rng;

use liptensor::cert::{Alpha, Exponent};
use liptensor::gen;
use liptensor::hulls::{a_max_samples, default_subspace_samples, theta_norm, IdealKind};
use liptensor::ideal::{
    extremal_functional, lip_alpha_norm, p_summing_norm,
};
use liptensor::lp::{lp_check_certificate, lp_solve, LpProblem, LpStatus, Relation, Sense};
use liptensor::molecule::{Instance, Molecule};
use liptensor::norms::{
    d_p_bounds, d_p_search_candidates, eps_norm, pi_norm, w_p_upper, NormConfig,
};
use liptensor::operator::LipOperator;
use liptensor::space::NormSpec;
use liptensor::{FiniteMetricSpace, PolyhedralSpace, Rat};

const FULL_POINT_CAP: usize = 6;
const FULL_DIM_CAP: usize = 3;

fn cfg() -> NormConfig {
    NormConfig::default()
}

fn full_caps_instance(rng: &mut rand_chacha::ChaCha8Rng) -> Instance {
    gen::rand_instance_with(rng, FULL_POINT_CAP, FULL_DIM_CAP)
}

fn alpha_value(u: &Molecule, alpha: Alpha) -> Rat {
    match alpha {
        Alpha::Pi => pi_norm(u).unwrap().exact_value().unwrap().clone(),
        Alpha::Eps => eps_norm(u, &cfg()).unwrap().exact_value().unwrap().clone(),
    }
}

#[test]
fn ac01_projective_duality_exact() {
    let mut rng = gen::rng_for(0xAC01);
    for trial in 0..100 {
        let inst = full_caps_instance(&mut rng);
        let u = gen::rand_molecule(&mut rng, &inst);
        let res = pi_norm(&u).unwrap();
        let [primal, dual] = &res.lp_certificates[..] else {
            panic!("projective result must carry both programs");
        };
        assert_eq!(
            primal.solution.objective, dual.solution.objective,
            "trial {trial}: primal and dual must be identical rationals"
        );
        assert!(lp_check_certificate(&primal.problem, &primal.solution).unwrap());
        assert!(lp_check_certificate(&dual.problem, &dual.solution).unwrap());
        assert_eq!(*res.value.lower(), primal.solution.objective);
    }
    println!("[AC-1] PASS - projective primal LP = dual LP as identical rationals, 100 trials, zero tolerance");
}

#[test]
fn ac02_cross_norm_identity_exact() {
    let mut rng = gen::rng_for(0xAC02);
    for trial in 0..100 {
        let inst = full_caps_instance(&mut rng);
        let n = inst.n_points();
        let (x, y, e) = loop {
            let x = rng.random_range(0..n);
            let y = rng.random_range(0..n);
            if x == y {
                continue;
            }
            let e: Vec<Rat> = (0..inst.dim()).map(|_| gen::rand_rat(&mut rng, 2)).collect();
            if e.iter().all(Rat::is_zero) {
                continue;
            }
            break (x, y, e);
        };
        let expect = inst.metric.dist(x, y) * inst.space.norm(&e);
        let u = Molecule::elementary(inst.clone(), x, y, e).unwrap();
        for alpha in [Alpha::Pi, Alpha::Eps] {
            assert_eq!(
                alpha_value(&u, alpha),
                expect,
                "trial {trial}: {} cross-norm identity",
                alpha.name()
            );
        }
        let d1 = d_p_bounds(&u, Exponent::Finite(1), &cfg()).unwrap();
        assert_eq!(d1.exact_value().unwrap(), &expect, "trial {trial}: d_1");
    }
    println!("[AC-2] PASS - cross-norm identity exact for pi, eps, d_1 on 100 elementary tensors");
}

#[test]
fn ac03_sandwich_exact() {
    let mut rng = gen::rng_for(0xAC03);
    for trial in 0..100 {
        let inst = full_caps_instance(&mut rng);
        let u = gen::rand_molecule(&mut rng, &inst);
        let pi_v = alpha_value(&u, Alpha::Pi);
        let eps_v = alpha_value(&u, Alpha::Eps);
        assert!(eps_v <= pi_v, "trial {trial}");
        for p in [Exponent::Finite(1), Exponent::Infinity] {
            let d = d_p_bounds(&u, p, &cfg()).unwrap();
            assert!(eps_v <= *d.value.lower(), "trial {trial} d_{p} lower");
            assert!(*d.value.upper() <= pi_v, "trial {trial} d_{p} upper");
            assert!(d.value.lower() <= d.value.upper());
            let w = w_p_upper(&u, p, &cfg()).unwrap();
            assert!(eps_v <= *w.value.lower(), "trial {trial} w_{p} lower");
            assert!(*w.value.upper() <= pi_v, "trial {trial} w_{p} upper");
            assert!(w.value.lower() <= w.value.upper());
        }
    }
    println!("[AC-3] PASS - eps <= d_p, w_p intervals <= pi for conjugate exponents 1, inf; 100 trials, exact");
}

#[test]
fn ac04_d1_collapses_to_pi() {
    let mut rng = gen::rng_for(0xAC04);
    for trial in 0..50 {
        let inst = full_caps_instance(&mut rng);
        let u = gen::rand_molecule(&mut rng, &inst);
        let pi_v = alpha_value(&u, Alpha::Pi);
        let d1 = d_p_bounds(&u, Exponent::Finite(1), &cfg()).unwrap();
        assert_eq!(d1.value.lower(), &pi_v, "trial {trial}: lower");
        assert_eq!(d1.value.upper(), &pi_v, "trial {trial}: upper");
        for cand in d_p_search_candidates(&u, Exponent::Finite(1), &cfg()).unwrap() {
            assert!(
                cand.cost_pow >= pi_v,
                "trial {trial}: searched representation below the norm"
            );
        }
    }
    println!("[AC-4] PASS - d_1 interval collapses to pi exactly and every searched representation costs >= pi; 50 trials");
}

#[test]
fn ac05_summing_norm_against_brute_force() {
    let mut rng = gen::rng_for(0xAC05);
    let mut worst_rel: f64 = 0.0;
    for trial in 0..50 {
        let inst = gen::rand_instance_with(&mut rng, 4, 2);
        let f = gen::rand_operator(&mut rng, &inst);
        // infinite exponent: exactly the Lipschitz norm
        let inf = p_summing_norm(&f, Exponent::Infinity, &cfg()).unwrap();
        assert_eq!(inf.value_pow, f.lip_norm(), "trial {trial}: p = inf");
        for p in [1u32, 2] {
            let lp_pow = p_summing_norm(&f, Exponent::Finite(p), &cfg())
                .unwrap()
                .value_pow;
            let brute_pow = common::oracle_summing_pow(&f, p, 3);
            assert!(
                lp_pow >= brute_pow,
                "trial {trial} p {p}: LP below an explicit family"
            );
            let lp_v = lp_pow.to_f64().powf(1.0 / p as f64);
            let brute_v = brute_pow.to_f64().powf(1.0 / p as f64);
            let rel = if brute_v > 0.0 {
                ((lp_v - brute_v) / brute_v).abs()
            } else {
                lp_v
            };
            worst_rel = worst_rel.max(rel);
            assert!(
                rel <= 1e-6,
                "trial {trial} p {p}: relative gap {rel} exceeds 1e-6"
            );
        }
    }
    println!(
        "[AC-5] PASS - summing norm: p=inf equals Lip exactly; LP >= every multiplicity<=3 family and \
         agrees with the brute-force sup (worst relative gap {worst_rel:.2e} <= 1e-6); 50 trials, p in {{1, 2}}"
    );
}

#[test]
fn ac06_extremal_attainment() {
    let mut rng = gen::rng_for(0xAC06);
    for trial in 0..100 {
        let inst = full_caps_instance(&mut rng);
        let u = gen::rand_nonzero_molecule(&mut rng, &inst);
        for alpha in [Alpha::Pi, Alpha::Eps] {
            let norm_u = alpha_value(&u, alpha);
            let f = extremal_functional(&u, alpha, &cfg()).unwrap();
            assert_eq!(
                u.pairing(&f).unwrap(),
                norm_u,
                "trial {trial}: {} attainment",
                alpha.name()
            );
            assert_eq!(
                lip_alpha_norm(&f, alpha, &cfg()).unwrap(),
                Rat::one(),
                "trial {trial}: {} unit functional norm",
                alpha.name()
            );
        }
    }
    println!("[AC-6] PASS - extremal functionals attain |u(f)| = norm with unit dual norm, both cross-norms; 100 trials, exact");
}

#[test]
fn ac07_rank_one_isometry() {
    let mut rng = gen::rng_for(0xAC07);
    for trial in 0..100 {
        let inst = full_caps_instance(&mut rng);
        let g = gen::rand_functional(&mut rng, &inst);
        let phi: Vec<Rat> = (0..inst.dim()).map(|_| gen::rand_rat(&mut rng, 2)).collect();
        let f = LipOperator::rank_one(inst.clone(), &g, &phi).unwrap();
        let expect = g.lip_constant() * inst.space.dual_norm(&phi);
        for alpha in [Alpha::Pi, Alpha::Eps] {
            assert_eq!(
                lip_alpha_norm(&f, alpha, &cfg()).unwrap(),
                expect,
                "trial {trial}: {}",
                alpha.name()
            );
        }
    }
    println!("[AC-7] PASS - rank-one isometry Lip_alpha(g.phi) = Lip(g) ||phi|| for both cross-norms; 100 trials, exact");
}

#[test]
fn ac08_uniformity_and_ideal_inequalities() {
    let mut rng = gen::rng_for(0xAC08);
    for trial in 0..100 {
        let inst = full_caps_instance(&mut rng);
        let u = gen::rand_molecule(&mut rng, &inst);
        let f = gen::rand_operator(&mut rng, &inst);
        let h = gen::rand_point_map(&mut rng, &inst);
        let t = gen::rand_matrix(&mut rng, inst.dim());
        let s = gen::rand_matrix(&mut rng, inst.dim());

        let lip_h = h.lip_constant(&inst.metric);
        let norm_t = inst.space.operator_norm(&t, &inst.space);
        let pushed = u.pushforward(&h, &t).unwrap();
        let dual = inst.space.dual_space();
        let norm_s = dual.operator_norm(&s, &dual);
        let composed = f.compose(&s, &h).unwrap();
        for alpha in [Alpha::Pi, Alpha::Eps] {
            let before = alpha_value(&u, alpha);
            let after = alpha_value(&pushed, alpha);
            assert!(
                after <= &(&lip_h * &norm_t) * &before,
                "trial {trial}: pushforward bound for {}",
                alpha.name()
            );
            let lhs = lip_alpha_norm(&composed, alpha, &cfg()).unwrap();
            let rhs = &(&norm_s * &lip_alpha_norm(&f, alpha, &cfg()).unwrap()) * &lip_h;
            assert!(
                lhs <= rhs,
                "trial {trial}: composition bound for {}",
                alpha.name()
            );
        }
    }
    println!("[AC-8] PASS - pushforward and composition contract by Lip(h) ||T|| / ||S|| Lip(h), both cross-norms; 100 trials, exact");
}

#[test]
fn ac09_hull_laws() {
    let mut rng = gen::rng_for(0xAC09);
    for trial in 0..50 {
        let n = rng.random_range(2..=4usize);
        let dim = rng.random_range(1..=2usize);
        let metric = gen::rand_metric(&mut rng, n);
        let space = gen::rand_space(&mut rng, dim);
        let inst = Instance::new(metric, space);
        let u = gen::rand_molecule(&mut rng, &inst);
        for alpha in [Alpha::Pi, Alpha::Eps] {
            let out = theta_norm(&u, alpha, &cfg()).unwrap();
            assert_eq!(out.value, out.full, "trial {trial}: theta for {}", alpha.name());
        }
        let f = gen::rand_operator(&mut rng, &inst);
        let samples = default_subspace_samples(&inst.space);
        for ideal in [
            IdealKind::Lip,
            IdealKind::PSumming(Exponent::Finite(1)),
            IdealKind::PSumming(Exponent::Finite(2)),
        ] {
            let full = ideal.norm_pow(&f, &cfg()).unwrap();
            let all = a_max_samples(&f, ideal, &samples, &cfg()).unwrap();
            let best = all.iter().map(|s| s.value_pow.clone()).max().unwrap();
            assert_eq!(best, full, "trial {trial}: hull supremum for {ideal:?}");
            let at_full = all
                .iter()
                .find(|s| s.points.len() == n && s.subspace.is_empty())
                .expect("full data sampled");
            assert_eq!(
                at_full.value_pow, full,
                "trial {trial}: attained at the full subset with zero subspace"
            );
            assert!(all.iter().all(|s| s.value_pow <= full));
        }
    }
    println!("[AC-9] PASS - finitely-generated hull equals the norm and the maximal hull attains the full ideal norm at (X, {{0}}) for Lip, 1- and 2-summing; 50 trials, exact");
}

#[test]
fn ac10_scalar_collapse_and_strict_gap() {
    let mut rng = gen::rng_for(0xAC10);
    for trial in 0..50 {
        let n = rng.random_range(2..=FULL_POINT_CAP);
        let metric = gen::rand_metric(&mut rng, n);
        let space = PolyhedralSpace::build_space(1, &NormSpec::LInf).unwrap();
        let inst = Instance::new(metric, space);
        let u = gen::rand_molecule(&mut rng, &inst);
        assert_eq!(
            alpha_value(&u, Alpha::Pi),
            alpha_value(&u, Alpha::Eps),
            "trial {trial}: scalar target collapses the norms"
        );
    }
    // pinned fixture: equilateral triangle with the max-norm plane, one
    // unit coordinate at each non-base point
    let r = Rat::from_int;
    let metric = FiniteMetricSpace::validate_metric(vec![
        vec![r(0), r(1), r(1)],
        vec![r(1), r(0), r(1)],
        vec![r(1), r(1), r(0)],
    ])
    .unwrap();
    let space = PolyhedralSpace::build_space(2, &NormSpec::LInf).unwrap();
    let inst = Instance::new(metric, space);
    let u = Molecule::from_coeffs(
        inst.clone(),
        [(1, vec![r(1), r(0)]), (2, vec![r(0), r(1)])]
            .into_iter()
            .collect(),
    )
    .unwrap();
    let eps_v = alpha_value(&u, Alpha::Eps);
    let pi_v = alpha_value(&u, Alpha::Pi);
    assert_eq!(eps_v, r(1));
    assert_eq!(pi_v, Rat::new(3, 2));
    assert!(eps_v < pi_v);
    println!("[AC-10] PASS - eps = pi on scalar targets (50 trials) and the pinned fixture has eps = 1 < 3/2 = pi, exact");
}

#[test]
fn ac11_lp_kernel_against_vertex_oracle() {
    let mut rng = gen::rng_for(0xAC11);
    let mut optimal = 0usize;
    let mut infeasible = 0usize;
    for trial in 0..1000 {
        let p = random_boxed_lp(&mut rng, trial);
        let sol = lp_solve(&p).unwrap();
        assert!(
            lp_check_certificate(&p, &sol).unwrap(),
            "trial {trial}: certificate must re-check"
        );
        match common::oracle_lp_solve(&p) {
            common::OracleVerdict::Optimal(v) => {
                assert_eq!(sol.status, LpStatus::Optimal, "trial {trial}");
                assert_eq!(sol.objective, v, "trial {trial}: objective mismatch");
                optimal += 1;
            }
            common::OracleVerdict::Infeasible => {
                assert_eq!(sol.status, LpStatus::Infeasible, "trial {trial}");
                infeasible += 1;
            }
        }
    }
    assert!(optimal > 0 && infeasible > 0, "sweep must exercise both statuses");

    // unbounded directions are outside the boxed oracle's domain: pinned
    // fixtures cover them
    let mut up = LpProblem::new(Sense::Maximize, vec![Rat::one(), Rat::zero()]);
    up.add_constraint(vec![Rat::zero(), Rat::one()], Relation::Le, Rat::one());
    up.set_lower(0, Rat::zero());
    let s = lp_solve(&up).unwrap();
    assert_eq!(s.status, LpStatus::Unbounded);
    assert!(lp_check_certificate(&up, &s).unwrap());

    let mut degenerate = LpProblem::new(
        Sense::Minimize,
        vec![Rat::new(-3, 4), Rat::from_int(150), Rat::new(-1, 50), Rat::from_int(6)],
    );
    degenerate.add_constraint(
        vec![Rat::new(1, 4), Rat::from_int(-60), Rat::new(-1, 25), Rat::from_int(9)],
        Relation::Le,
        Rat::zero(),
    );
    degenerate.add_constraint(
        vec![Rat::new(1, 2), Rat::from_int(-90), Rat::new(-1, 50), Rat::from_int(3)],
        Relation::Le,
        Rat::zero(),
    );
    degenerate.add_constraint(
        vec![Rat::zero(), Rat::zero(), Rat::one(), Rat::zero()],
        Relation::Le,
        Rat::one(),
    );
    for j in 0..4 {
        degenerate.set_lower(j, Rat::zero());
    }
    let s = lp_solve(&degenerate).unwrap();
    assert_eq!(s.objective, Rat::new(-1, 20), "anti-cycling fixture");

    println!(
        "[AC-11] PASS - solver matches the vertex oracle on 1000 random LPs \
         ({optimal} optimal, {infeasible} infeasible), all certificates re-check, \
         unbounded + degenerate fixtures hold"
    );
}

fn random_boxed_lp(rng: &mut rand_chacha::ChaCha8Rng, trial: usize) -> LpProblem {
    // mostly small programs, a tail of larger ones within the stated caps
    let (n, m) = if trial.is_multiple_of(20) {
        (
            rng.random_range(5..=8usize),
            rng.random_range(0..=2usize),
        )
    } else {
        (
            rng.random_range(1..=4usize),
            rng.random_range(0..=8usize),
        )
    };
    let sense = if rng.random_bool(0.5) {
        Sense::Maximize
    } else {
        Sense::Minimize
    };
    let objective: Vec<Rat> = (0..n).map(|_| gen::rand_rat(rng, 3)).collect();
    let mut p = LpProblem::new(sense, objective);
    for _ in 0..m {
        let row: Vec<Rat> = (0..n).map(|_| gen::rand_rat(rng, 2)).collect();
        let rel = match rng.random_range(0..6u8) {
            0 => Relation::Eq,
            1 | 2 => Relation::Ge,
            _ => Relation::Le,
        };
        p.add_constraint(row, rel, gen::rand_rat(rng, 3));
    }
    for j in 0..n {
        p.set_lower(j, -Rat::from_int(rng.random_range(0..=2i64)));
        p.set_upper(j, Rat::from_int(rng.random_range(0..=3i64)));
    }
    p
}
