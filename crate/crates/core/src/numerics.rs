//! Small grid helpers shared by the solver, controller and analysis code.

/// Composite trapezoid rule for samples on a uniform grid with spacing `dx`.
pub fn trapezoid(values: &[f64], dx: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => {
            let inner: f64 = values[1..n - 1].iter().sum();
            dx * (inner + 0.5 * (values[0] + values[n - 1]))
        }
    }
}

/// Trapezoid rule of the squared samples.
pub fn trapezoid_sq(values: &[f64], dx: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => {
            let inner: f64 = values[1..n - 1].iter().map(|v| v * v).sum();
            dx * (inner + 0.5 * (values[0] * values[0] + values[n - 1] * values[n - 1]))
        }
    }
}

/// Second-order one-sided derivative at the last node.
#[inline]
pub fn slope_at_end(u: &[f64], h: f64) -> f64 {
    let n = u.len() - 1;
    (3.0 * u[n] - 4.0 * u[n - 1] + u[n - 2]) / (2.0 * h)
}

/// Second-order one-sided derivative at the first node.
#[inline]
pub fn slope_at_start(u: &[f64], h: f64) -> f64 {
    (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h)
}
