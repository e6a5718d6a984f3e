//! Fixed-node Gauss–Legendre quadrature.
//!
//! Node/weight computation uses Newton iteration on the Legendre recurrence.
//! Summation order is fixed (ascending node index) so that results are
//! bit-reproducible regardless of caller parallelism.

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
///
/// Panics if `n == 0`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n > 0, "quadrature order must be positive");
    let mut rule = Vec::with_capacity(n);
    let nf = n as f64;
    // Nodes are symmetric; solve for the non-negative half and mirror.
    let half = n.div_ceil(2);
    for i in 0..half {
        // Tricomi initial guess for the i-th root (descending).
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.push((x, w));
    }
    // Mirror to the negative half; odd n keeps its centre node unpaired.
    for i in 0..half - n % 2 {
        let (x, w) = rule[i];
        rule.push((-x, w));
    }
    rule.sort_by(|a, b| a.0.total_cmp(&b.0));
    rule
}

/// Integrate `f` over `[a, b]` with an `n`-node Gauss–Legendre rule.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let mid = 0.5 * (a + b);
    let halfwidth = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in gauss_legendre(n) {
        acc += w * f(mid + halfwidth * x);
    }
    acc * halfwidth
}

/// Value and derivative of the Legendre polynomial P_n at x.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}
