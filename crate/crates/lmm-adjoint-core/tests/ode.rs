mod common;

use common::*;
use lmm_adjoint_core::lmm::{tableau, SolverOptions, TimeGrid};
use lmm_adjoint_core::ode::*;
use proptest::prelude::*;

const NS: [usize; 5] = [40, 80, 160, 320, 640];

fn adjoint_errors<P: OdeControlProblem>(p: &P, scheme: &str, route: AdjointRoute) -> Vec<f64> {
    let tab = tableau(scheme).unwrap();
    NS.iter()
        .map(|&n| {
            let g = TimeGrid::new(0.0, 1.0, n).unwrap();
            let tr = prescribed(p, g, tab.stages());
            let adj = solve_adjoint(p, &tab, &tr, route, TerminalData::Exact).unwrap();
            adj.max_error(|t, o| {
                p.exact_adjoint(t, o);
            })
        })
        .collect()
}

fn riccati_state_errors(scheme: &str, t_end: f64, ns: &[usize]) -> Vec<f64> {
    let p = Riccati { t_end, alpha: 0.0 };
    let tab = tableau(scheme).unwrap();
    ns.iter()
        .map(|&n| {
            let g = TimeGrid::new(0.0, t_end, n).unwrap();
            let u = vec![0.0; Trajectory::slots(&g, tab.stages())];
            let tr = solve_forward(&p, &tab, &g, &u, InitMode::Exact, &SolverOptions::default())
                .unwrap();
            tr.max_error(|t, o| {
                p.exact_state(t, o);
            })
        })
        .collect()
}

#[test]
fn constant_sensitivity_routes_are_bit_identical() {
    let p = ConstSensitivity { t_end: 1.0 };
    for scheme in ["ExplicitEuler", "AB3", "AM4", "BDF2", "BDF4", "AB2"] {
        let tab = tableau(scheme).unwrap();
        for n in NS {
            let g = TimeGrid::new(0.0, 1.0, n).unwrap();
            let tr = prescribed(&p, g, tab.stages());
            let d = solve_adjoint_dto(&p, &tab, &tr, TerminalData::Exact).unwrap();
            let o = solve_adjoint_otd(&p, &tab, &tr, TerminalData::Exact).unwrap();
            let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
            assert_eq!(bits(d.values()), bits(o.values()), "{scheme} N={n}");
        }
    }
}

#[test]
fn constant_sensitivity_errors_and_orders() {
    let p = ConstSensitivity { t_end: 1.0 };
    for (scheme, order) in [("ExplicitEuler", 1.0), ("AB3", 3.0)] {
        let e = adjoint_errors(&p, scheme, AdjointRoute::OptimizeThenDiscretize);
        assert!(e.windows(2).all(|w| w[1] < w[0]), "{scheme} {e:?}");
        let r = rates(&e);
        assert!((r[3] - order).abs() < 0.15, "{scheme} {r:?}");
    }
    let e = adjoint_errors(&p, "AM4", AdjointRoute::OptimizeThenDiscretize);
    assert!(e.windows(2).all(|w| w[1] < w[0]), "{e:?}");
    assert!(e[4] <= 1e-13, "AM4 N=640 {e:?}");
}

#[test]
fn quadratic_sensitivity_bdf4_routes_agree() {
    let p = QuadraticSensitivity { t_end: 1.0 };
    let tab = tableau("BDF4").unwrap();
    for n in NS {
        let g = TimeGrid::new(0.0, 1.0, n).unwrap();
        let tr = prescribed(&p, g, tab.stages());
        let d = solve_adjoint_dto(&p, &tab, &tr, TerminalData::Exact).unwrap();
        let o = solve_adjoint_otd(&p, &tab, &tr, TerminalData::Exact).unwrap();
        for (x, y) in d.values().iter().zip(o.values()) {
            assert!((x - y).abs() <= 1e-12 * y.abs(), "N={n}: {x} vs {y}");
        }
    }
    let e = adjoint_errors(&p, "BDF4", AdjointRoute::DiscretizeThenOptimize);
    // reference value at N = 640: 3.52961e-11
    assert!(e[4] <= 3.0 * 3.52961e-11, "{e:?}");
    assert!(rates(&e)[3] > 3.7, "{:?}", rates(&e));
}

#[test]
fn quadratic_sensitivity_explicit_euler() {
    let p = QuadraticSensitivity { t_end: 1.0 };
    let e = adjoint_errors(&p, "ExplicitEuler", AdjointRoute::OptimizeThenDiscretize);
    let r = rates(&e);
    assert!((r[3] - 1.0).abs() < 0.1, "{r:?}");
    // first-order error constant ≈ 0.56
    assert!((e[4] * 640.0 - 0.56).abs() < 0.01, "{e:?}");
}

/// Adams methods: the DtO multipliers lag `f_y` by one step and lose order,
/// the OtD recurrence keeps the scheme's order.
#[test]
fn adams_dto_loses_order_otd_keeps_it() {
    let p = QuadraticSensitivity { t_end: 1.0 };
    let dto = rates(&adjoint_errors(
        &p,
        "AM4",
        AdjointRoute::DiscretizeThenOptimize,
    ));
    let otd = rates(&adjoint_errors(
        &p,
        "AM4",
        AdjointRoute::OptimizeThenDiscretize,
    ));
    assert!((dto[3] - 1.0).abs() < 0.1, "DtO {dto:?}");
    assert!(otd[3] > 4.8, "OtD {otd:?}");
    assert!(otd[3] > dto[3] + 3.0);
}

#[test]
fn zero_sensitivity_keeps_terminal_value() {
    for scheme in ["AB3", "AM4", "BDF3", "ExplicitEuler"] {
        let tab = tableau(scheme).unwrap();
        let g = TimeGrid::new(0.0, 1.0, 37).unwrap();
        let tr = prescribed(&ZeroSensitivity, g, tab.stages());
        for terminal in [TerminalData::Padded, TerminalData::Exact] {
            let o = solve_adjoint_otd(&ZeroSensitivity, &tab, &tr, terminal).unwrap();
            assert!(
                o.values().iter().all(|v| (v - 2.0).abs() < 1e-14),
                "{scheme}"
            );
        }
    }
}

#[test]
fn riccati_state_errors_match_reference_values() {
    let ns = [80, 160, 320, 640, 1280];
    let bdf3 = riccati_state_errors("BDF3", 0.875, &ns);
    let bdf4 = riccati_state_errors("BDF4", 0.875, &ns);
    let bdf6 = riccati_state_errors("BDF6", 0.875, &ns);
    // reference N = 1280 values: 3.44e-6, 5.82e-8, 2.41e-11
    assert!((bdf3[4] / 3.44e-6 - 1.0).abs() < 0.2, "{bdf3:?}");
    assert!(bdf4[4] <= 6e-8, "{bdf4:?}");
    assert!(bdf6[4] <= 1e-10, "{bdf6:?}");
    // reference N = 320 value for BDF(3): 2.07256e-4
    assert!((bdf3[2] / 2.07256e-4 - 1.0).abs() < 0.15, "{bdf3:?}");
    let (r3, r4, r6) = (rates(&bdf3), rates(&bdf4), rates(&bdf6));
    assert!(
        r3[3] >= 2.9 && r4[3] >= 3.9 && r6[3] >= 5.5,
        "{r3:?} {r4:?} {r6:?}"
    );
}

#[test]
fn constant_solution_is_reproduced() {
    let tab = tableau("AM4").unwrap();
    let g = TimeGrid::new(0.0, 1.0, 20).unwrap();
    let u = vec![0.0; Trajectory::slots(&g, tab.stages())];
    let tr = solve_forward(
        &ZeroSensitivity,
        &tab,
        &g,
        &u,
        InitMode::RkBootstrap,
        &SolverOptions::default(),
    )
    .unwrap();
    assert!(tr.states().iter().all(|&y| y == 0.0));
}

#[test]
fn bootstrap_modes() {
    let p = Riccati {
        t_end: 0.875,
        alpha: 0.0,
    };
    let g = TimeGrid::new(0.0, 0.875, 100).unwrap();
    let ie = tableau("ImplicitEuler").unwrap();
    let u1 = vec![0.0; Trajectory::slots(&g, 1)];
    for mode in [InitMode::Exact, InitMode::RkBootstrap] {
        let h = bootstrap_history(&p, &ie, &g, &u1, mode).unwrap();
        assert_eq!((h.len(), h.state(0)[0]), (1, 1.0));
    }
    let bdf3 = tableau("BDF3").unwrap();
    let g = TimeGrid::new(0.0, 1.0, 100).unwrap();
    let u3 = vec![0.0; Trajectory::slots(&g, 3)];
    let exact = bootstrap_history(&p, &bdf3, &g, &u3, InitMode::Exact).unwrap();
    for i in 0..3 {
        // newest first: age l ↔ t = −l·0.01
        let t = -(i as f64) * 0.01;
        assert!((exact.state(i)[0] - 1.0 / (1.0 - t)).abs() < 1e-15);
    }
    let gap = |steps: usize| {
        let g = TimeGrid::new(0.0, 1.0, steps).unwrap();
        let u = vec![0.0; Trajectory::slots(&g, 3)];
        let a = bootstrap_history(&p, &bdf3, &g, &u, InitMode::Exact).unwrap();
        let b = bootstrap_history(&p, &bdf3, &g, &u, InitMode::RkBootstrap).unwrap();
        (0..3)
            .map(|l| (a.state(l)[0] - b.state(l)[0]).abs())
            .fold(0.0, f64::max)
    };
    let (g1, g2) = (gap(50), gap(100));
    assert!(g2 < 1e-9, "{g2}");
    assert!((g1 / g2).log2() > 3.8, "{g1} {g2}");
}

#[test]
fn missing_exact_state_is_an_error() {
    struct NoExact;
    impl OdeControlProblem for NoExact {
        fn state_dim(&self) -> usize {
            1
        }
        fn control_dim(&self) -> usize {
            1
        }
        fn initial_state(&self, y0: &mut [f64]) {
            y0[0] = 1.0
        }
        fn f(&self, _t: f64, y: &[f64], _u: &[f64], o: &mut [f64]) {
            o[0] = -y[0]
        }
        fn f_y(&self, _t: f64, _y: &[f64], _u: &[f64], o: &mut [f64]) {
            o[0] = -1.0
        }
        fn f_u(&self, _t: f64, _y: &[f64], _u: &[f64], o: &mut [f64]) {
            o[0] = 0.0
        }
        fn terminal_cost(&self, y: &[f64]) -> f64 {
            y[0]
        }
        fn terminal_gradient(&self, _y: &[f64], o: &mut [f64]) {
            o[0] = 1.0
        }
    }
    let tab = tableau("BDF2").unwrap();
    let g = TimeGrid::new(0.0, 1.0, 10).unwrap();
    let u = vec![0.0; Trajectory::slots(&g, 2)];
    assert_eq!(
        solve_forward(
            &NoExact,
            &tab,
            &g,
            &u,
            InitMode::Exact,
            &SolverOptions::default()
        )
        .unwrap_err(),
        OdeError::MissingExactState
    );
    assert!(solve_forward(
        &NoExact,
        &tab,
        &g,
        &u,
        InitMode::RkBootstrap,
        &SolverOptions::default()
    )
    .is_ok());
    let tr = solve_forward(
        &NoExact,
        &tab,
        &g,
        &u,
        InitMode::RkBootstrap,
        &SolverOptions::default(),
    )
    .unwrap();
    assert_eq!(
        solve_adjoint_otd(&NoExact, &tab, &tr, TerminalData::Exact).unwrap_err(),
        OdeError::MissingExactAdjoint
    );
    assert!(matches!(
        solve_adjoint_otd(&NoExact, &tab, &tr, TerminalData::Discrete),
        Err(OdeError::TerminalRoute { .. })
    ));
}

fn riccati_instance(scheme: &str, controls: &[f64]) -> (Riccati, Trajectory, Vec<f64>) {
    let p = Riccati {
        t_end: 0.5,
        alpha: 0.3,
    };
    let tab = tableau(scheme).unwrap();
    let g = TimeGrid::new(0.0, 0.5, 10).unwrap();
    let opts = SolverOptions {
        tol: 1e-15,
        max_iter: 100,
    };
    let tr = solve_forward(&p, &tab, &g, controls, InitMode::Exact, &opts).unwrap();
    let adj = solve_adjoint_dto(&p, &tab, &tr, TerminalData::Discrete).unwrap();
    let grad = discrete_gradient(&p, &tab, &tr, &adj).unwrap();
    (p, tr, grad)
}

#[test]
fn dto_gradient_matches_central_differences() {
    for scheme in [
        "ImplicitEuler",
        "BDF2",
        "BDF3",
        "AB3",
        "AM4",
        "ExplicitEuler",
    ] {
        let tab = tableau(scheme).unwrap();
        let g = TimeGrid::new(0.0, 0.5, 10).unwrap();
        let slots = Trajectory::slots(&g, tab.stages());
        let u: Vec<f64> = (0..slots)
            .map(|k| 0.3 * (0.7 * k as f64).sin() - 0.1)
            .collect();
        let (p, _, grad) = riccati_instance(scheme, &u);
        let cost = |u: &[f64]| {
            let opts = SolverOptions {
                tol: 1e-15,
                max_iter: 100,
            };
            let tr = solve_forward(&p, &tab, &g, u, InitMode::Exact, &opts).unwrap();
            discrete_cost(&p, &tr)
        };
        let h = 1e-5;
        let scale = grad.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for k in 0..slots {
            let mut up = u.clone();
            let mut dn = u.clone();
            up[k] += h;
            dn[k] -= h;
            let fd = (cost(&up) - cost(&dn)) / (2.0 * h);
            assert!(
                (fd - grad[k]).abs() <= 1e-6 * scale.max(grad[k].abs()),
                "{scheme} slot {k}: adjoint {} vs fd {fd}",
                grad[k]
            );
        }
    }
}

#[test]
fn optimality_residual_examples() {
    let p = Riccati {
        t_end: 0.875,
        alpha: 1.0,
    };
    let tab = tableau("BDF2").unwrap();
    let g = TimeGrid::new(0.0, 0.875, 64).unwrap();
    let slots = Trajectory::slots(&g, 2);
    // exact path: y_N = 1/(1−T) makes the terminal gradient vanish, so p ≡ 0
    let zero = Trajectory::prescribed(g, 2, 1, 1, &vec![0.0; slots], |t, o| o[0] = 1.0 / (1.0 - t))
        .unwrap();
    let d = solve_adjoint_dto(&p, &tab, &zero, TerminalData::Discrete).unwrap();
    assert!(d.values().iter().all(|&v| v == 0.0));
    assert!(optimality_residual(&p, &tab, &zero, &d)
        .unwrap()
        .iter()
        .all(|&r| r == 0.0));
    let ones = Trajectory::prescribed(g, 2, 1, 1, &vec![1.0; slots], |t, o| o[0] = 1.0 / (1.0 - t))
        .unwrap();
    let o = solve_adjoint_otd(&p, &tab, &ones, TerminalData::Padded).unwrap();
    let r = optimality_residual(&p, &tab, &ones, &o).unwrap();
    assert_eq!(r.len(), 65);
    assert!(r.iter().all(|&v| v == 1.0));
}

#[test]
fn forward_detects_blow_up() {
    // y' = y² from y(0) = 1 blows up at t = 1
    let tab = tableau("ExplicitEuler").unwrap();
    let g = TimeGrid::new(0.0, 200.0, 4000).unwrap();
    let p = Riccati {
        t_end: 200.0,
        alpha: 0.0,
    };
    let u = vec![0.0; Trajectory::slots(&g, 1)];
    let r = solve_forward(
        &p,
        &tab,
        &g,
        &u,
        InitMode::RkBootstrap,
        &SolverOptions::default(),
    );
    assert!(matches!(r, Err(OdeError::NonFinite { .. })), "{r:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// BDF multipliers coincide on both routes for any trajectory and terminal block.
    #[test]
    fn bdf_routes_coincide(
        s in 1usize..=6,
        n in 8usize..60,
        amp in -0.5f64..0.5,
        freq in 0.1f64..5.0,
    ) {
        let p = Riccati { t_end: 0.5, alpha: 0.0 };
        let tab = tableau(&format!("BDF{s}")).unwrap();
        let g = TimeGrid::new(0.0, 0.5, n).unwrap();
        let slots = Trajectory::slots(&g, s);
        let u: Vec<f64> = (0..slots).map(|k| amp * (freq * k as f64).cos()).collect();
        let tr = Trajectory::prescribed(g, s, 1, 1, &u, |t, o| o[0] = 1.0 + amp * (freq * t).sin()).unwrap();
        let d = solve_adjoint_dto(&p, &tab, &tr, TerminalData::Padded).unwrap();
        let o = solve_adjoint_otd(&p, &tab, &tr, TerminalData::Padded).unwrap();
        for (x, y) in d.values().iter().zip(o.values()) {
            prop_assert!((x - y).abs() <= 1e-12 * y.abs().max(1e-300));
        }
    }

    #[test]
    fn adjoint_is_deterministic(idx in 0usize..4, n in 10usize..80) {
        let scheme = ["AM4", "AB3", "BDF3", "ExplicitEuler"][idx];
        let p = QuadraticSensitivity { t_end: 1.0 };
        let tab = tableau(scheme).unwrap();
        let g = TimeGrid::new(0.0, 1.0, n).unwrap();
        let tr = prescribed(&p, g, tab.stages());
        let a = solve_adjoint_dto(&p, &tab, &tr, TerminalData::Exact).unwrap();
        let b = solve_adjoint_dto(&p, &tab, &tr, TerminalData::Exact).unwrap();
        prop_assert_eq!(a, b);
    }
}
