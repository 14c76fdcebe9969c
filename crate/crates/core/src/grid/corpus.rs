use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::mesh::{Grading, RadialMesh};

/// A radial profile with an analytic first derivative and bounded support.
pub trait RadialFunction: Send + Sync {
    fn value(&self, r: f64) -> f64;
    fn d1(&self, r: f64) -> f64;
    /// Closed interval outside which the function vanishes identically.
    fn support(&self) -> (f64, f64);
    /// Interior points where the function is only piecewise smooth.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// A [`RadialFunction`] with an analytic second derivative.
pub trait SmoothRadialFunction: RadialFunction {
    fn d2(&self, r: f64) -> f64;
}

/// Compactly supported test functions with closed-form derivatives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestFunction {
    /// `exp(1 - 1/(1 - t^2))` with `t` the affine map of `[lo, hi]` onto `[-1, 1]`.
    Bump { lo: f64, hi: f64 },
    /// Gaussian `exp(-(r - center)^2 / (2 width^2))` times `((r - lo)(hi - r)/L^2)^4`, `L = (hi - lo)/2`.
    GaussPoly { lo: f64, hi: f64, center: f64, width: f64 },
    /// `sin(freq r + phase)` times the bump on `[lo, hi]`.
    OscillatoryBump { lo: f64, hi: f64, freq: f64, phase: f64 },
    /// `exp(-r^2/(2 sigma^2))` on `[0, flat_end]`, rolled off to 0 at `cut_end` by a `C^3` polynomial step.
    CutoffGaussian { sigma: f64, flat_end: f64, cut_end: f64 },
    /// `exp(-r^2/(2 sigma^2))` switched on over `[lo, flat_lo]` and off over `[flat_hi, hi]`
    /// by the same polynomial step.
    WindowedGaussian { sigma: f64, lo: f64, flat_lo: f64, flat_hi: f64, hi: f64 },
    /// `scale` times the inner function.
    Scaled { scale: f64, inner: Box<TestFunction> },
}

/// Value and two derivatives of the bump on `[lo, hi]`.
fn bump3(lo: f64, hi: f64, r: f64) -> (f64, f64, f64) {
    let k = 2.0 / (hi - lo);
    let t = k * (r - lo) - 1.0;
    let s = 1.0 - t * t;
    // exp(1 - 1/s) underflows to zero long before s reaches 1e-3.
    if s <= 1e-3 {
        return (0.0, 0.0, 0.0);
    }
    let e = (1.0 - 1.0 / s).exp();
    let g1 = -2.0 * t / (s * s);
    let g2 = -2.0 / (s * s) - 8.0 * t * t / (s * s * s);
    (e, e * g1 * k, e * (g1 * g1 + g2) * k * k)
}

fn gauss3(center: f64, width: f64, r: f64) -> (f64, f64, f64) {
    let x = r - center;
    let w2 = width * width;
    let g = (-x * x / (2.0 * w2)).exp();
    (g, -x / w2 * g, (x * x / (w2 * w2) - 1.0 / w2) * g)
}

/// The `C^3` step falling from 1 at `start` to 0 at `end`, for `start <= r <= end`.
fn step3(start: f64, end: f64, r: f64) -> (f64, f64, f64) {
    let len = end - start;
    let t = (r - start) / len;
    (
        1.0 - t.powi(4) * (35.0 - 84.0 * t + 70.0 * t * t - 20.0 * t.powi(3)),
        -140.0 * t.powi(3) * (1.0 - t).powi(3) / len,
        -420.0 * t * t * (1.0 - t).powi(2) * (1.0 - 2.0 * t) / (len * len),
    )
}

fn product3(a: (f64, f64, f64), b: (f64, f64, f64)) -> (f64, f64, f64) {
    (a.0 * b.0, a.1 * b.0 + a.0 * b.1, a.2 * b.0 + 2.0 * a.1 * b.1 + a.0 * b.2)
}

impl TestFunction {
    /// Value and first two derivatives at `r`.
    pub fn eval3(&self, r: f64) -> (f64, f64, f64) {
        let (lo, hi) = self.support();
        if r <= lo || r >= hi {
            return (0.0, 0.0, 0.0);
        }
        match *self {
            TestFunction::Bump { lo, hi } => bump3(lo, hi, r),
            TestFunction::GaussPoly {
                lo,
                hi,
                center,
                width,
            } => {
                let l2 = 0.25 * (hi - lo) * (hi - lo);
                let q = (r - lo) * (hi - r) / l2;
                let q1 = (hi + lo - 2.0 * r) / l2;
                let q2 = -2.0 / l2;
                let poly = (
                    q.powi(4),
                    4.0 * q.powi(3) * q1,
                    12.0 * q * q * q1 * q1 + 4.0 * q.powi(3) * q2,
                );
                product3(gauss3(center, width, r), poly)
            }
            TestFunction::OscillatoryBump {
                lo,
                hi,
                freq,
                phase,
            } => {
                let (s, c) = (freq * r + phase).sin_cos();
                product3((s, freq * c, -freq * freq * s), bump3(lo, hi, r))
            }
            TestFunction::CutoffGaussian {
                sigma,
                flat_end,
                cut_end,
            } => {
                let g = gauss3(0.0, sigma, r);
                if r <= flat_end {
                    return g;
                }
                product3(g, step3(flat_end, cut_end, r))
            }
            TestFunction::WindowedGaussian {
                sigma,
                lo,
                flat_lo,
                flat_hi,
                hi,
            } => {
                let g = gauss3(0.0, sigma, r);
                if r < flat_lo {
                    // Mirror the falling step to get a rising one.
                    let (a, b, c) = step3(-flat_lo, -lo, -r);
                    product3(g, (a, -b, c))
                } else if r > flat_hi {
                    product3(g, step3(flat_hi, hi, r))
                } else {
                    g
                }
            }
            TestFunction::Scaled { scale, ref inner } => {
                let (a, b, c) = inner.eval3(r);
                (scale * a, scale * b, scale * c)
            }
        }
    }

    pub fn scaled(&self, scale: f64) -> Self {
        TestFunction::Scaled {
            scale,
            inner: Box::new(self.clone()),
        }
    }

    /// Nodal values on `mesh`.
    pub fn sample(&self, mesh: &RadialMesh) -> Vec<f64> {
        mesh.nodes().iter().map(|&r| self.value(r)).collect()
    }
}

impl RadialFunction for TestFunction {
    fn value(&self, r: f64) -> f64 {
        self.eval3(r).0
    }

    fn d1(&self, r: f64) -> f64 {
        self.eval3(r).1
    }

    fn support(&self) -> (f64, f64) {
        match *self {
            TestFunction::Bump { lo, hi }
            | TestFunction::GaussPoly { lo, hi, .. }
            | TestFunction::OscillatoryBump { lo, hi, .. } => (lo, hi),
            TestFunction::CutoffGaussian { cut_end, .. } => (0.0, cut_end),
            TestFunction::WindowedGaussian { lo, hi, .. } => (lo, hi),
            TestFunction::Scaled { ref inner, .. } => inner.support(),
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        match *self {
            TestFunction::CutoffGaussian { flat_end, .. } => vec![flat_end],
            TestFunction::WindowedGaussian { flat_lo, flat_hi, .. } => vec![flat_lo, flat_hi],
            TestFunction::Scaled { ref inner, .. } => inner.breakpoints(),
            _ => Vec::new(),
        }
    }
}

impl SmoothRadialFunction for TestFunction {
    fn d2(&self, r: f64) -> f64 {
        self.eval3(r).2
    }
}

/// Deterministic corpus of `count` test functions supported strictly inside the mesh.
///
/// Members cycle through bumps, Gaussian-times-polynomial cutoffs and oscillatory bumps.
/// Supports are drawn in `ln r` on log-graded meshes and in `r` on uniform ones, cover
/// between 20% and 60% of the range, and keep a 2% margin from both ends.
pub fn test_function_corpus(mesh: &RadialMesh, count: usize, seed: u64) -> Vec<TestFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let log = mesh.grading() == Grading::LogGraded;
    let (x0, x1) = if log {
        (mesh.r_min().ln(), mesh.r_max().ln())
    } else {
        (mesh.r_min(), mesh.r_max())
    };
    let range = x1 - x0;
    let margin = 0.02 * range;
    let to_r = |x: f64| if log { x.exp() } else { x };
    (0..count)
        .map(|i| {
            let width = range * rng.gen_range(0.2..0.6);
            let start = rng.gen_range(x0 + margin..x1 - margin - width);
            let (lo, hi) = (to_r(start), to_r(start + width));
            match i % 3 {
                0 => TestFunction::Bump { lo, hi },
                1 => TestFunction::GaussPoly {
                    lo,
                    hi,
                    center: rng.gen_range(lo..hi),
                    width: (hi - lo) * rng.gen_range(0.15..0.5),
                },
                _ => TestFunction::OscillatoryBump {
                    lo,
                    hi,
                    freq: 2.0 * std::f64::consts::PI * rng.gen_range(0.5..2.0) / (hi - lo),
                    phase: rng.gen_range(0.0..2.0 * std::f64::consts::PI),
                },
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_check(f: &TestFunction, lo: f64, hi: f64) {
        let h = 1e-5 * (hi - lo);
        for k in 1..200 {
            let r = lo + (hi - lo) * k as f64 / 200.0;
            let (_, d1, d2) = f.eval3(r);
            let fd1 = (f.value(r + h) - f.value(r - h)) / (2.0 * h);
            let fd2 = (f.d1(r + h) - f.d1(r - h)) / (2.0 * h);
            assert!((fd1 - d1).abs() <= 1e-5 * (1.0 + d1.abs()), "{f:?} d1 at {r}");
            assert!((fd2 - d2).abs() <= 1e-4 * (1.0 + d2.abs()), "{f:?} d2 at {r}");
        }
    }

    #[test]
    fn derivatives_match_differences() {
        fd_check(&TestFunction::Bump { lo: 1.0, hi: 2.0 }, 1.0, 2.0);
        fd_check(
            &TestFunction::GaussPoly {
                lo: 0.5,
                hi: 3.0,
                center: 1.2,
                width: 0.6,
            },
            0.5,
            3.0,
        );
        fd_check(
            &TestFunction::OscillatoryBump {
                lo: 0.5,
                hi: 1.5,
                freq: 9.0,
                phase: 0.3,
            },
            0.5,
            1.5,
        );
        fd_check(
            &TestFunction::CutoffGaussian {
                sigma: 1.0,
                flat_end: 3.0,
                cut_end: 5.0,
            },
            0.1,
            5.0,
        );
        let w = TestFunction::WindowedGaussian {
            sigma: 3.0,
            lo: 0.05,
            flat_lo: 0.1,
            flat_hi: 12.0,
            hi: 20.0,
        };
        fd_check(&w, 0.05, 0.2);
        fd_check(&w, 10.0, 20.0);
        assert_eq!(w.value(0.05), 0.0);
        assert!((w.value(0.1) - (-0.01f64 / 18.0).exp()).abs() < 1e-15);
    }

    #[test]
    fn corpus_is_deterministic_and_inside() {
        let mesh = RadialMesh::new(0.01, 10.0, 128, Grading::LogGraded, 3).unwrap();
        let a = test_function_corpus(&mesh, 30, 7);
        assert_eq!(a, test_function_corpus(&mesh, 30, 7));
        assert_ne!(a, test_function_corpus(&mesh, 30, 8));
        for f in &a {
            let (lo, hi) = f.support();
            assert!(lo > mesh.r_min() && hi < mesh.r_max());
            assert!(f.value(lo).abs() < 1e-12 && f.value(hi).abs() < 1e-12);
            assert_eq!(f.value(mesh.r_min()), 0.0);
            assert_eq!(f.value(mesh.r_max()), 0.0);
        }
    }
}
