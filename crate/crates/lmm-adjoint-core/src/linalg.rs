//! Small dense helpers for the per-step linear systems (state dimension is tiny).

/// Solves `m x = rhs` in place (`m` is row-major `n×n`, overwritten; `rhs` becomes `x`).
///
/// Gaussian elimination with partial pivoting. Returns `false` if a pivot has
/// magnitude `≤ pivot_tol` or is not finite.
pub fn solve_in_place(n: usize, m: &mut [f64], rhs: &mut [f64], pivot_tol: f64) -> bool {
    debug_assert_eq!(m.len(), n * n);
    debug_assert_eq!(rhs.len(), n);
    if n == 1 {
        let d = m[0];
        if d.abs() <= pivot_tol || !d.is_finite() {
            return false;
        }
        rhs[0] /= d;
        return true;
    }
    for col in 0..n {
        let mut piv = col;
        let mut best = m[col * n + col].abs();
        for row in col + 1..n {
            let v = m[row * n + col].abs();
            if v > best {
                best = v;
                piv = row;
            }
        }
        if best <= pivot_tol || !best.is_finite() {
            return false;
        }
        if piv != col {
            for k in 0..n {
                m.swap(col * n + k, piv * n + k);
            }
            rhs.swap(col, piv);
        }
        let d = m[col * n + col];
        for row in col + 1..n {
            let factor = m[row * n + col] / d;
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                m[row * n + k] -= factor * m[col * n + k];
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    for col in (0..n).rev() {
        let mut acc = rhs[col];
        for k in col + 1..n {
            acc -= m[col * n + k] * rhs[k];
        }
        rhs[col] = acc / m[col * n + col];
    }
    true
}

/// `out = mᵀ v` for row-major `m` with `rows × cols` entries.
pub fn mat_t_vec(rows: usize, cols: usize, m: &[f64], v: &[f64], out: &mut [f64]) {
    for (c, o) in out.iter_mut().enumerate().take(cols) {
        let mut acc = 0.0;
        for r in 0..rows {
            acc += m[r * cols + c] * v[r];
        }
        *o = acc;
    }
}

/// `out = m v` for row-major `m` with `rows × cols` entries.
pub fn mat_vec(rows: usize, cols: usize, m: &[f64], v: &[f64], out: &mut [f64]) {
    for (r, o) in out.iter_mut().enumerate().take(rows) {
        let mut acc = 0.0;
        for c in 0..cols {
            acc += m[r * cols + c] * v[c];
        }
        *o = acc;
    }
}

pub fn inf_norm(v: &[f64]) -> f64 {
    v.iter()
        .fold(0.0, |m, x| if x.abs() > m { x.abs() } else { m })
}
