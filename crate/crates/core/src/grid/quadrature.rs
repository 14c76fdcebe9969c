use super::mesh::{sphere_area, Grading, RadialMesh};

/// Nodes and weights of the five-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre_5() -> ([f64; 5], [f64; 5]) {
    const X1: f64 = 0.538_469_310_105_683_1;
    const X2: f64 = 0.906_179_845_938_664;
    const W0: f64 = 0.568_888_888_888_888_9;
    const W1: f64 = 0.478_628_670_499_366_5;
    const W2: f64 = 0.236_926_885_056_189_1;
    ([-X2, -X1, 0.0, X1, X2], [W2, W1, W0, W1, W2])
}

/// Finite-difference weights at `x0` on the stencil `xs` for derivatives `0..=order`.
///
/// Returns `w` with `w[k][j]` the weight of `f(xs[j])` in the `k`-th derivative.
pub fn fornberg_weights(x0: f64, xs: &[f64], order: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0; n]; order + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Composite Gauss–Legendre rule for integrals `∫ f(r) ω_{N-1} r^{N-1} dr` over an interval.
///
/// Used for integrands known in closed form (test functions with analytic derivatives),
/// so that inequality margins reflect the integrand rather than nodal interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportQuadrature {
    pub nodes: Vec<f64>,
    /// Weights including the factor `ω_{N-1} r^{N-1}`.
    pub weights: Vec<f64>,
}

impl SupportQuadrature {
    /// Rule on `[a, b]` split at `breakpoints`, with about `cells` cells distributed by
    /// length (in `ln r` for [`Grading::LogGraded`] when `a > 0`).
    pub fn new(dim: u32, a: f64, b: f64, breakpoints: &[f64], cells: usize, grading: Grading) -> Self {
        assert!(a < b, "empty interval [{a}, {b}]");
        let mut cuts: Vec<f64> = std::iter::once(a)
            .chain(breakpoints.iter().copied().filter(|&x| x > a && x < b))
            .chain(std::iter::once(b))
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let log = grading == Grading::LogGraded && a > 0.0;
        let measure = |x: f64, y: f64| if log { (y / x).ln() } else { y - x };
        let total = measure(a, b);
        let (gx, gw) = gauss_legendre_5();
        let omega = sphere_area(dim);
        let n = (dim - 1) as i32;
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let k = ((cells as f64 * measure(lo, hi) / total).ceil() as usize).max(1);
            for j in 0..k {
                let t0 = j as f64 / k as f64;
                let t1 = (j + 1) as f64 / k as f64;
                let (x0, x1) = if log {
                    (lo * (hi / lo).powf(t0), lo * (hi / lo).powf(t1))
                } else {
                    (lo + (hi - lo) * t0, lo + (hi - lo) * t1)
                };
                let (mid, half) = (0.5 * (x0 + x1), 0.5 * (x1 - x0));
                for (x, wt) in gx.iter().zip(&gw) {
                    let r = mid + half * x;
                    nodes.push(r);
                    weights.push(wt * half * omega * r.powi(n));
                }
            }
        }
        Self { nodes, weights }
    }

    /// Rule over `[lo, hi]` with the cell count and grading of `mesh`.
    pub fn on_mesh(mesh: &RadialMesh, lo: f64, hi: f64, breakpoints: &[f64]) -> Self {
        Self::new(mesh.dim(), lo, hi, breakpoints, mesh.intervals(), mesh.grading())
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&r, w)| w * f(r)).sum()
    }
}
