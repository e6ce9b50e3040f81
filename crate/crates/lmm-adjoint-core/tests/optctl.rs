use lmm_adjoint_core::lmm::tableau;
use lmm_adjoint_core::optctl::*;
use lmm_adjoint_core::relax::*;
use proptest::prelude::*;

struct JinXinCase {
    model: JinXin<BurgersFlux>,
    grid: LagrangianGrid,
    guess: Vec<f64>,
    functional: TrackingFunctional,
    steps: usize,
}

fn coarse_jin_xin() -> JinXinCase {
    let tab = tableau("BDF2").unwrap();
    let model = make_jin_xin(BurgersFlux, 1.0, 1e-2).unwrap();
    let grid = LagrangianGrid::aligned(-3.0, 3.0, 40, Boundary::Periodic, 1.0).unwrap();
    let x = grid.nodes();
    let truth: Vec<f64> = x.iter().map(|x| 0.6 * (-x * x).exp()).collect();
    let guess: Vec<f64> = x
        .iter()
        .map(|x| 0.3 * (-(x + 0.5) * (x + 0.5)).exp())
        .collect();
    let steps = 10;
    let target = solve_forward(&model, &grid, &tab, &truth, steps)
        .unwrap()
        .terminal()
        .to_vec();
    let functional = TrackingFunctional::new(target, 1, grid.dx()).unwrap();
    JinXinCase {
        model,
        grid,
        guess,
        functional,
        steps,
    }
}

#[test]
fn fixed_small_step_without_filter_is_monotone() {
    let c = coarse_jin_xin();
    let tab = tableau("BDF2").unwrap();
    let cfg = OptimizeConfig {
        iterations: 20,
        filter: FilterPlacement::Off,
        step: StepRule::Fixed(0.2),
        ..Default::default()
    };
    let r = optimize(
        &c.model,
        &c.grid,
        &tab,
        c.steps,
        &c.functional,
        &c.guess,
        &cfg,
    )
    .unwrap();
    let h = &r.state.history;
    assert_eq!(h.len(), 21);
    assert!(h.windows(2).all(|w| w[1] <= w[0]), "{h:?}");
    assert!(h[20] < 0.5 * h[0]);
}

#[test]
fn bb_steps_stay_within_safeguards() {
    let c = coarse_jin_xin();
    let tab = tableau("BDF2").unwrap();
    let cfg = OptimizeConfig {
        iterations: 100,
        grad_tol: 0.0,
        ..Default::default()
    };
    let r = optimize(
        &c.model,
        &c.grid,
        &tab,
        c.steps,
        &c.functional,
        &c.guess,
        &cfg,
    )
    .unwrap();
    assert!(r
        .log
        .iter()
        .all(|rec| (SIGMA_MIN..=SIGMA_MAX).contains(&rec.sigma)));
    assert!(r.log.iter().enumerate().all(|(k, rec)| rec.k == k));
    let h = &r.state.history;
    assert!(
        h.last().unwrap() < &(1e-2 * h[0]),
        "{:?}",
        &h[h.len() - 3..]
    );
}

#[test]
fn target_reached_at_guess_exits_immediately() {
    let c = coarse_jin_xin();
    let tab = tableau("BDF2").unwrap();
    let target = solve_forward(&c.model, &c.grid, &tab, &c.guess, c.steps)
        .unwrap()
        .terminal()
        .to_vec();
    let fun = TrackingFunctional::new(target, 1, c.grid.dx()).unwrap();
    let r = optimize(
        &c.model,
        &c.grid,
        &tab,
        c.steps,
        &fun,
        &c.guess,
        &OptimizeConfig::default(),
    )
    .unwrap();
    assert_eq!(r.state.k, 0);
    assert_eq!(r.state.history, vec![0.0]);
    assert_eq!(r.log[0].grad_inf_norm, 0.0);
    assert_eq!(r.state.control, c.guess);
}

#[test]
fn optimize_is_deterministic() {
    let c = coarse_jin_xin();
    let tab = tableau("BDF2").unwrap();
    for filter in [
        FilterPlacement::Off,
        FilterPlacement::Control,
        FilterPlacement::Gradient,
    ] {
        let cfg = OptimizeConfig {
            iterations: 12,
            filter,
            ..Default::default()
        };
        let a = optimize(
            &c.model,
            &c.grid,
            &tab,
            c.steps,
            &c.functional,
            &c.guess,
            &cfg,
        )
        .unwrap();
        let b = optimize(
            &c.model,
            &c.grid,
            &tab,
            c.steps,
            &c.functional,
            &c.guess,
            &cfg,
        )
        .unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn control_filter_smooths_iterates() {
    let c = coarse_jin_xin();
    let tab = tableau("BDF2").unwrap();
    let base = OptimizeConfig {
        iterations: 15,
        ..Default::default()
    };
    let off = OptimizeConfig {
        filter: FilterPlacement::Off,
        ..base
    };
    let ctl = OptimizeConfig {
        filter: FilterPlacement::Control,
        ..base
    };
    let a = optimize(
        &c.model,
        &c.grid,
        &tab,
        c.steps,
        &c.functional,
        &c.guess,
        &off,
    )
    .unwrap();
    let b = optimize(
        &c.model,
        &c.grid,
        &tab,
        c.steps,
        &c.functional,
        &c.guess,
        &ctl,
    )
    .unwrap();
    let tv = |u: &[f64]| total_variation(u, Boundary::Periodic);
    assert!(tv(&b.state.control) <= tv(&a.state.control));
}

#[test]
fn broadwell_descent_keeps_moment_consistency() {
    let tab = tableau("BDF2").unwrap();
    let m = make_broadwell(1.0, 1e-2).unwrap();
    let g = LagrangianGrid::aligned(-1.0, 1.0, 40, Boundary::Clamp, 1.0).unwrap();
    let x = g.nodes();
    let mut truth = vec![1.0; 40];
    truth.extend(x.iter().map(|x| 0.3 * (std::f64::consts::PI * x).sin()));
    let mut guess = vec![1.0; 40];
    guess.extend(vec![0.0; 40]);
    let target = solve_forward(&m, &g, &tab, &truth, 10)
        .unwrap()
        .terminal()
        .to_vec();
    let fun = TrackingFunctional::new(target, 2, g.dx()).unwrap();
    let cfg = OptimizeConfig {
        iterations: 20,
        ..Default::default()
    };
    let r = optimize(&m, &g, &tab, 10, &fun, &guess, &cfg).unwrap();
    let h = &r.state.history;
    assert!(h[20] < 0.2 * h[0], "{h:?}");
    assert!(r.max_moment_defect <= 1e-12);
}

#[test]
fn solver_failure_reports_iteration() {
    let tab = tableau("BDF2").unwrap();
    let m = make_broadwell(1.0, 1e-2).unwrap();
    let g = LagrangianGrid::aligned(-1.0, 1.0, 20, Boundary::Clamp, 1.0).unwrap();
    let mut guess = vec![1.0; 20];
    guess.extend(vec![0.0; 20]);
    // a huge fixed step drives the density negative after the first update
    let mut target = vec![0.2; 20];
    target.extend(vec![0.0; 20]);
    let fun = TrackingFunctional::new(target, 2, g.dx()).unwrap();
    let cfg = OptimizeConfig {
        iterations: 5,
        step: StepRule::Fixed(100.0),
        ..Default::default()
    };
    let err = optimize(&m, &g, &tab, 5, &fun, &guess, &cfg).unwrap_err();
    assert!(
        matches!(
            err,
            ControlError::Solver {
                iteration: 1,
                source: RelaxError::NonPositiveDensity(_)
            }
        ),
        "{err:?}"
    );
}

#[test]
fn invalid_inputs_are_rejected() {
    let c = coarse_jin_xin();
    let tab = tableau("BDF2").unwrap();
    let bad = OptimizeConfig {
        filter_every: 0,
        ..Default::default()
    };
    assert!(matches!(
        optimize(
            &c.model,
            &c.grid,
            &tab,
            c.steps,
            &c.functional,
            &c.guess,
            &bad
        ),
        Err(ControlError::InvalidConfig(_))
    ));
    let bad = OptimizeConfig {
        sigma0: 0.0,
        ..Default::default()
    };
    assert!(optimize(
        &c.model,
        &c.grid,
        &tab,
        c.steps,
        &c.functional,
        &c.guess,
        &bad
    )
    .is_err());
    assert!(matches!(
        optimize(
            &c.model,
            &c.grid,
            &tab,
            c.steps,
            &c.functional,
            &c.guess[..10],
            &OptimizeConfig::default()
        ),
        Err(ControlError::GridMismatch { .. })
    ));
    // adjoint that has not been swept back to t = 0
    let lam = vec![0.0; 80];
    let field = AdjointField::from_terminal(&c.model, &c.grid, &lam, 2, 10).unwrap();
    assert_eq!(
        gradient_from_adjoint(&c.model, &field, &c.guess),
        Err(ControlError::AdjointNotAtStart(10))
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn tv_filter_never_increases_variation(
        levels in proptest::collection::vec(-5.0f64..5.0, 2..12),
        widths in proptest::collection::vec(1usize..8, 12),
        periodic in any::<bool>(),
    ) {
        let mut u = Vec::new();
        for (v, w) in levels.iter().zip(&widths) {
            u.extend(std::iter::repeat_n(*v, *w));
        }
        let bc = if periodic { Boundary::Periodic } else { Boundary::Clamp };
        let f = tv_filter(&u, bc);
        prop_assert!(total_variation(&f, bc) <= total_variation(&u, bc) + 1e-12);
        let sum_u: f64 = u.iter().sum();
        let sum_f: f64 = f.iter().sum();
        if periodic {
            prop_assert!((sum_u - sum_f).abs() < 1e-10);
        }
    }

    #[test]
    fn functional_is_nonnegative_and_zero_on_target(
        target in proptest::collection::vec(-3.0f64..3.0, 1..40),
        shift in -1.0f64..1.0,
        dx in 1e-3f64..1.0,
    ) {
        let f = TrackingFunctional::new(target.clone(), 1, dx).unwrap();
        prop_assert_eq!(f.evaluate(&target).unwrap(), 0.0);
        let moved: Vec<f64> = target.iter().map(|v| v + shift).collect();
        let j = f.evaluate(&moved).unwrap();
        prop_assert!(j >= 0.0);
        prop_assert!((j - 0.5 * shift * shift * dx * target.len() as f64).abs() <= 1e-9 * (1.0 + j));
    }

    #[test]
    fn bb2_recovers_inverse_curvature(
        du in proptest::collection::vec(-1.0f64..1.0, 1..10),
        curvature in 0.02f64..50.0,
    ) {
        prop_assume!(du.iter().any(|v| v.abs() > 1e-3));
        let dg: Vec<f64> = du.iter().map(|v| curvature * v).collect();
        let s = bb_step(&du, &dg, BbVariant::Bb2, 0.1);
        prop_assert!((s - 1.0 / curvature).abs() <= 1e-12 / curvature);
        let s1 = bb_step(&du, &dg, BbVariant::Bb1, 0.1);
        prop_assert!((s1 - 1.0 / curvature).abs() <= 1e-12 / curvature);
    }
}
