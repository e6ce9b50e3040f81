use super::{AdjointRun, Boundary, ForwardRun, JinXin, LagrangianGrid, ScalarFlux};

/// L² distance between `p(0,·) = Σ_j λ^j(0,·)` and the solution of the limit
/// transport equation `−p_t − F'(u) p_x = 0`, `p(T) = p_T`, traced along
/// characteristics of the stored forward field.
///
/// `p_terminal` is evaluated at the characteristic end point (wrapped into the
/// domain for periodic grids).
pub fn viscous_limit_check<F: ScalarFlux>(
    model: &JinXin<F>,
    grid: &LagrangianGrid,
    forward: &ForwardRun,
    adjoint: &AdjointRun,
    p_terminal: impl Fn(f64) -> f64,
) -> f64 {
    let p0 = adjoint.velocity_sum(0);
    let dt = grid.dt();
    let steps = forward.steps();
    let flux = model.scalar_flux();
    let speed = |n: usize, x: f64| flux.derivative(interpolate(grid, forward.state(n), x));
    let mut acc = 0.0;
    for (i, p) in p0.iter().enumerate() {
        // Heun along dX/dt = F'(u(t, X))
        let mut x = grid.node(i);
        for n in 0..steps {
            let k1 = speed(n, x);
            let k2 = speed(n + 1, x + dt * k1);
            x += 0.5 * dt * (k1 + k2);
        }
        let e = p - p_terminal(wrap(grid, x));
        acc += e * e;
    }
    libm::sqrt(acc * grid.dx())
}

fn wrap(grid: &LagrangianGrid, x: f64) -> f64 {
    let (l, r) = (grid.x_left(), grid.x_right());
    match grid.boundary() {
        Boundary::Periodic => {
            let len = r - l;
            let y = (x - l) - len * libm::floor((x - l) / len);
            l + y
        }
        Boundary::Clamp => x.clamp(l, r),
    }
}

/// Piecewise-linear interpolation of a nodal scalar field.
fn interpolate(grid: &LagrangianGrid, u: &[f64], x: f64) -> f64 {
    let n = grid.len();
    let dx = grid.dx();
    let x = wrap(grid, x);
    let s = match grid.boundary() {
        Boundary::Periodic => (x - grid.x_left()) / dx,
        Boundary::Clamp => (x - grid.x_left()) / dx - 0.5,
    };
    let k = libm::floor(s);
    let theta = s - k;
    let k = k as i64;
    let idx = |i: i64| match grid.boundary() {
        Boundary::Periodic => i.rem_euclid(n as i64) as usize,
        Boundary::Clamp => i.clamp(0, n as i64 - 1) as usize,
    };
    (1.0 - theta) * u[idx(k)] + theta * u[idx(k + 1)]
}
