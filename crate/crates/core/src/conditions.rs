//! Parameter algebra and regime classification for `A_{b,c}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for deciding `p == threshold`.
pub const THRESHOLD_RTOL: f64 = 1e-12;

/// The tuple `(N, α, β, b, c)` defining `A_{b,c}`.
///
/// Construction enforces `N >= 3`, `0 <= α < 2`, `β > 0` and finite `b`, `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct OperatorParams {
    dim: u32,
    alpha: f64,
    beta: f64,
    b: f64,
    c: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    dim: u32,
    alpha: f64,
    beta: f64,
    b: f64,
    c: f64,
}

impl TryFrom<RawParams> for OperatorParams {
    type Error = Error;
    fn try_from(r: RawParams) -> Result<Self> {
        OperatorParams::new(r.dim, r.alpha, r.beta, r.b, r.c)
    }
}

impl From<OperatorParams> for RawParams {
    fn from(p: OperatorParams) -> Self {
        RawParams {
            dim: p.dim,
            alpha: p.alpha,
            beta: p.beta,
            b: p.b,
            c: p.c,
        }
    }
}

impl OperatorParams {
    pub fn new(dim: u32, alpha: f64, beta: f64, b: f64, c: f64) -> Result<Self> {
        if dim < 3 {
            return Err(Error::Domain(format!("dimension must be at least 3, got {dim}")));
        }
        if !(alpha.is_finite() && (0.0..2.0).contains(&alpha)) {
            return Err(Error::Domain(format!("alpha must lie in [0, 2), got {alpha}")));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::Domain(format!("beta must be positive, got {beta}")));
        }
        if !b.is_finite() || !c.is_finite() {
            return Err(Error::Domain(format!("b and c must be finite, got b={b}, c={c}")));
        }
        Ok(Self {
            dim,
            alpha,
            beta,
            b,
            c,
        })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// `N` as a float.
    pub fn n(&self) -> f64 {
        self.dim as f64
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn with_b(self, b: f64) -> Result<Self> {
        Self::new(self.dim, self.alpha, self.beta, b, self.c)
    }

    pub fn with_c(self, c: f64) -> Result<Self> {
        Self::new(self.dim, self.alpha, self.beta, self.b, c)
    }

    pub fn with_beta(self, beta: f64) -> Result<Self> {
        Self::new(self.dim, self.alpha, beta, self.b, self.c)
    }

    /// `(N - α)/(2 - α)`, the critical exponent.
    pub fn threshold_p(&self) -> f64 {
        (self.n() - self.alpha) / (2.0 - self.alpha)
    }

    /// Coefficient `c r^{α-2} + r^β` of the zeroth-order term at radius `r`.
    pub fn potential(&self, r: f64) -> f64 {
        self.c * r.powf(self.alpha - 2.0) + r.powf(self.beta)
    }

    /// `(A_{b,c} u)(r)` for a radial function given its value and first two derivatives at `r`.
    pub fn apply_radial(&self, r: f64, u: f64, du: f64, d2u: f64) -> f64 {
        let lap = d2u + (self.n() - 1.0) * du / r;
        (1.0 + r.powf(self.alpha)) * lap + self.b * r.powf(self.alpha - 1.0) * du
            - self.potential(r) * u
    }
}

/// An exponent `p` together with the quantities derived from it for given parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LpContext {
    pub p: f64,
    pub p_prime: f64,
    pub threshold_p: f64,
    pub gamma: f64,
}

impl LpContext {
    pub fn new(params: &OperatorParams, p: f64) -> Result<Self> {
        let p_prime = conjugate_exponent(p)?;
        let alpha = params.alpha();
        Ok(Self {
            p,
            p_prime,
            threshold_p: params.threshold_p(),
            gamma: (alpha - 2.0) * (p - 1.0),
        })
    }

    /// The context for the conjugate exponent, keeping the threshold of `params`.
    pub fn dual(&self, params: &OperatorParams) -> Result<Self> {
        Self::new(params, self.p_prime)
    }

    /// `p` equals the threshold up to [`THRESHOLD_RTOL`].
    pub fn at_threshold(&self) -> bool {
        (self.p - self.threshold_p).abs() <= THRESHOLD_RTOL * self.threshold_p.abs()
    }

    /// `p` is strictly below the threshold (and not within the boundary tolerance).
    pub fn below_threshold(&self) -> bool {
        self.p < self.threshold_p && !self.at_threshold()
    }

    /// `p` is below or at the threshold.
    pub fn subcritical_or_critical(&self) -> bool {
        self.p < self.threshold_p || self.at_threshold()
    }
}

/// `p/(p-1)`.
pub fn conjugate_exponent(p: f64) -> Result<f64> {
    if !p.is_finite() || p <= 1.0 {
        return Err(Error::Domain(format!("exponent must be finite and > 1, got {p}")));
    }
    Ok(p / (p - 1.0))
}

/// The four constants governing the perturbation estimate for `W = |x|^{α-2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KConstants {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
}

pub fn k_constants(params: &OperatorParams, ctx: &LpContext) -> KConstants {
    let (n, a, b, c) = (params.n(), params.alpha(), params.b(), params.c());
    let (p, pp) = (ctx.p, ctx.p_prime);
    KConstants {
        k1: k1(params, ctx),
        k2: (a / pp - 2.0 + n / p) * (-a / pp + n / pp),
        k3: ((a - 2.0 + n) / p) * (b + (-a + (p - 1.0) * (n - 2.0)) / p) + c,
        k4: (p - 1.0) * ((n - 2.0) / p).powi(2),
    }
}

/// `(α - 2 + N/p)(-α + b + N/p') + c`.
pub fn k1(params: &OperatorParams, ctx: &LpContext) -> f64 {
    let (n, a, b, c) = (params.n(), params.alpha(), params.b(), params.c());
    (a - 2.0 + n / ctx.p) * (-a + b + n / ctx.p_prime) + c
}

/// `k1` written in terms of `γ = (α-2)(p-1)` before factoring.
pub fn k1_unfactored(params: &OperatorParams, ctx: &LpContext) -> f64 {
    let (n, a, b, c) = (params.n(), params.alpha(), params.b(), params.c());
    let (p, g) = (ctx.p, ctx.gamma);
    let s = (g + a + n - 2.0) / p;
    -(a - b + g) * s + (p - 1.0) * s * s + c
}

/// Outcome regimes of the generation classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// The form-generated semigroup exists but closure of `A` on test functions is not asserted.
    FormGenerationOnly,
    /// The closure of `A_{b,c}` on `C_c^∞(R^N \ {0})` generates the semigroup.
    ClosureGeneratesD0Core,
    /// None of the generation statements applies.
    ConditionFails,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationVerdict {
    pub regime: Regime,
    pub k1: f64,
    pub threshold_p: f64,
    pub notes: String,
}

pub fn classify_generation(params: &OperatorParams, ctx: &LpContext) -> GenerationVerdict {
    let k1 = k1(params, ctx);
    let threshold_p = ctx.threshold_p;
    let (regime, notes) = if ctx.below_threshold() {
        (
            Regime::ClosureGeneratesD0Core,
            format!("p = {} below threshold {threshold_p}", ctx.p),
        )
    } else if ctx.at_threshold() && k1 > 0.0 {
        (
            Regime::ClosureGeneratesD0Core,
            format!("p at threshold {threshold_p} with k1 = {k1} > 0"),
        )
    } else {
        let why = if ctx.at_threshold() {
            format!(
                "p at threshold {threshold_p} with k1 = {k1} <= 0; for b = 0 the boundary case is \
                 only essentially m-accretive"
            )
        } else {
            format!("p = {} above threshold {threshold_p}", ctx.p)
        };
        if params.alpha() != 0.0 {
            (
                Regime::FormGenerationOnly,
                format!("{why}; the form semigroup extrapolates to L^p for alpha != 0"),
            )
        } else {
            (
                Regime::ConditionFails,
                format!("{why}; no form-generation statement is available for alpha = 0"),
            )
        }
    };
    GenerationVerdict {
        regime,
        k1,
        threshold_p,
        notes,
    }
}

/// Regimes for the pure Schrödinger case `b = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SchrodingerRegime {
    QuasiMAccretive,
    /// `p` at the threshold and `c = -k1(0, 0)`.
    EssentiallyMAccretiveBoundary,
    ConditionFails,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchrodingerVerdict {
    pub regime: SchrodingerRegime,
    /// `k1` evaluated at `b = 0, c = 0`.
    pub critical_k1: f64,
    pub threshold_p: f64,
    pub notes: String,
}

pub fn classify_schrodinger(params: &OperatorParams, ctx: &LpContext) -> Result<SchrodingerVerdict> {
    if params.b() != 0.0 {
        return Err(Error::Domain(format!(
            "the Schrödinger classifier requires b = 0, got b = {}",
            params.b()
        )));
    }
    let critical_k1 = k1(&params.with_c(0.0)?, ctx);
    let c = params.c();
    let threshold_p = ctx.threshold_p;
    let (regime, notes) = if ctx.below_threshold() {
        (
            SchrodingerRegime::QuasiMAccretive,
            format!("p = {} below threshold {threshold_p}, any c", ctx.p),
        )
    } else if ctx.at_threshold() {
        let gap = c + critical_k1;
        let scale = 1.0 + c.abs().max(critical_k1.abs());
        if gap.abs() <= THRESHOLD_RTOL * scale {
            (
                SchrodingerRegime::EssentiallyMAccretiveBoundary,
                format!(
                    "c = -k1 = {}; the boundary operator reads either as A_{{0,k1}} or, from the \
                     perturbation argument, as A_{{0,-k1}}; both readings recorded",
                    -critical_k1
                ),
            )
        } else if gap > 0.0 {
            (
                SchrodingerRegime::QuasiMAccretive,
                format!("p at threshold, c = {c} > -k1 = {}", -critical_k1),
            )
        } else {
            (
                SchrodingerRegime::ConditionFails,
                format!("p at threshold, c = {c} < -k1 = {}", -critical_k1),
            )
        }
    } else {
        (
            SchrodingerRegime::ConditionFails,
            format!("p = {} above threshold {threshold_p}", ctx.p),
        )
    };
    Ok(SchrodingerVerdict {
        regime,
        critical_k1,
        threshold_p,
        notes,
    })
}

/// Coefficients `(2α - b, (b - α)(α - 2 + N))` of the operator whose restriction to test
/// functions is contained in the adjoint.
///
/// The zeroth-order coefficient omits the original `c`; see [`formal_adjoint_params`].
pub fn adjoint_params(params: &OperatorParams) -> OperatorParams {
    let (n, a, b) = (params.n(), params.alpha(), params.b());
    OperatorParams {
        b: 2.0 * a - b,
        c: (b - a) * (a - 2.0 + n),
        ..*params
    }
}

/// Formal `L^2(R^N)` adjoint coefficients: `(2α - b, c + (b - α)(α - 2 + N))`.
///
/// Differs from [`adjoint_params`] by keeping the potential `c |x|^{α-2}`, which is
/// symmetric and therefore passes to the adjoint unchanged. The two agree when `c = 0`.
pub fn formal_adjoint_params(params: &OperatorParams) -> OperatorParams {
    let adj = adjoint_params(params);
    OperatorParams {
        c: adj.c + params.c(),
        ..adj
    }
}

/// `K = c - 1 - ((α - b)/2)(α - 2 + N)` in the form-positivity condition.
fn positivity_coefficient(params: &OperatorParams) -> f64 {
    let (n, a, b, c) = (params.n(), params.alpha(), params.b(), params.c());
    c - 1.0 - 0.5 * (a - b) * (a - 2.0 + n)
}

/// `c0/(2r^2) + K r^{α-2} + λ`, the quantity that must stay positive for all `r > 0`.
pub fn positivity_expression(params: &OperatorParams, lambda: f64, r: f64) -> f64 {
    let c0 = 0.25 * (params.n() - 2.0).powi(2);
    c0 / (2.0 * r * r) + positivity_coefficient(params) * r.powf(params.alpha() - 2.0) + lambda
}

/// Infimum of shifts `λ` making [`positivity_expression`] positive for every `r > 0`.
///
/// Any admissible shift must be strictly larger. For `α = 0` the expression is
/// `(c0/2 + K)/r^2 + λ`; it returns 0 when `c0/2 + K >= 0` and a domain error
/// otherwise, since no shift controls the `r^{-2}` term near the origin.
pub fn lambda_min(params: &OperatorParams) -> Result<f64> {
    let k = positivity_coefficient(params);
    let c0 = 0.25 * (params.n() - 2.0).powi(2);
    let a = params.alpha();
    if a == 0.0 {
        return if 0.5 * c0 + k >= 0.0 {
            Ok(0.0)
        } else {
            Err(Error::Domain(format!(
                "alpha = 0 and c0/2 + K = {} < 0: no shift makes the form coercive",
                0.5 * c0 + k
            )))
        };
    }
    if k >= 0.0 {
        return Ok(0.0);
    }
    // With s = 1/r the expression is c0 s^2/2 + K s^{2-α}, minimized at s^α = -K(2-α)/c0.
    let s = (-k * (2.0 - a) / c0).powf(1.0 / a);
    Ok(s * s * c0 * a / (2.0 * (2.0 - a)))
}

/// `b(α + N - 2)/2 + (N/p - 2 + α)(N/p' - α) + c`.
pub fn maximality_expression(params: &OperatorParams, ctx: &LpContext) -> f64 {
    let (n, a) = (params.n(), params.alpha());
    0.5 * params.b() * (a + n - 2.0) + (n / ctx.p - 2.0 + a) * (n / ctx.p_prime - a) + params.c()
}

pub fn maximality_condition(params: &OperatorParams, ctx: &LpContext) -> bool {
    ctx.below_threshold() || (ctx.at_threshold() && maximality_expression(params, ctx) > 0.0)
}

/// `b(α + N - 2)/2 + c`, the potential coefficient after removing the drift.
pub fn tilde_c(params: &OperatorParams) -> f64 {
    0.5 * params.b() * (params.alpha() + params.n() - 2.0) + params.c()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(n: u32, a: f64, beta: f64, b: f64, c: f64) -> OperatorParams {
        OperatorParams::new(n, a, beta, b, c).unwrap()
    }

    #[test]
    fn rejects_invalid() {
        assert!(OperatorParams::new(2, 1.0, 1.0, 0.0, 0.0).is_err());
        assert!(OperatorParams::new(3, 2.0, 1.0, 0.0, 0.0).is_err());
        assert!(OperatorParams::new(3, -0.1, 1.0, 0.0, 0.0).is_err());
        assert!(OperatorParams::new(3, 1.0, 0.0, 0.0, 0.0).is_err());
        assert!(OperatorParams::new(3, 1.0, 1.0, f64::NAN, 0.0).is_err());
    }

    #[test]
    fn serde_validates() {
        let ok: OperatorParams =
            serde_json::from_str(r#"{"dim":3,"alpha":1.0,"beta":1.0,"b":0.0,"c":0.0}"#).unwrap();
        assert_eq!(ok, params(3, 1.0, 1.0, 0.0, 0.0));
        let bad = serde_json::from_str::<OperatorParams>(
            r#"{"dim":3,"alpha":2.5,"beta":1.0,"b":0.0,"c":0.0}"#,
        );
        assert!(bad.is_err());
        let s = serde_json::to_string(&ok).unwrap();
        assert_eq!(serde_json::from_str::<OperatorParams>(&s).unwrap(), ok);
    }

    #[test]
    fn conjugates() {
        assert_eq!(conjugate_exponent(2.0).unwrap(), 2.0);
        assert_relative_eq!(conjugate_exponent(1.5).unwrap(), 3.0, max_relative = 1e-15);
        assert_relative_eq!(conjugate_exponent(4.0).unwrap(), 4.0 / 3.0, max_relative = 1e-15);
        assert!(conjugate_exponent(1.0).is_err());
        assert!(conjugate_exponent(f64::INFINITY).is_err());
    }

    #[test]
    fn k_constants_examples() {
        let pr = params(4, 1.0, 1.0, 0.0, 0.0);
        let k = k_constants(&pr, &LpContext::new(&pr, 2.0).unwrap());
        assert_relative_eq!(k.k1, 1.0, epsilon = 1e-14);
        assert_relative_eq!(k.k2, 0.75, epsilon = 1e-14);
        assert_relative_eq!(k.k3, 0.75, epsilon = 1e-14);
        assert_relative_eq!(k.k4, 1.0, epsilon = 1e-14);
        let pr = params(3, 0.0, 1.0, 0.0, 0.0);
        let ctx = LpContext::new(&pr, 1.5).unwrap();
        assert!(k1(&pr, &ctx).abs() < 1e-14);
    }

    #[test]
    fn generation_examples() {
        let pr = params(3, 1.0, 1.0, 0.0, 0.0);
        let v = classify_generation(&pr, &LpContext::new(&pr, 1.5).unwrap());
        assert_eq!(v.regime, Regime::ClosureGeneratesD0Core);
        let pr = params(3, 0.0, 1.0, 0.0, 1.0);
        let v = classify_generation(&pr, &LpContext::new(&pr, 1.5).unwrap());
        assert_eq!(v.regime, Regime::ClosureGeneratesD0Core);
        let pr = params(3, 0.0, 1.0, 0.0, 0.0);
        let v = classify_generation(&pr, &LpContext::new(&pr, 1.5).unwrap());
        assert_eq!(v.regime, Regime::ConditionFails);
        let pr = params(3, 1.0, 1.0, 0.0, 0.0);
        let v = classify_generation(&pr, &LpContext::new(&pr, 3.0).unwrap());
        assert_eq!(v.regime, Regime::FormGenerationOnly);
    }

    #[test]
    fn schrodinger_examples() {
        let pr = params(4, 1.0, 1.0, 0.0, -5.0);
        let v = classify_schrodinger(&pr, &LpContext::new(&pr, 2.0).unwrap()).unwrap();
        assert_eq!(v.regime, SchrodingerRegime::QuasiMAccretive);
        let pr = params(3, 0.0, 1.0, 0.0, 0.5);
        let v = classify_schrodinger(&pr, &LpContext::new(&pr, 1.5).unwrap()).unwrap();
        assert_eq!(v.regime, SchrodingerRegime::QuasiMAccretive);
        let pr = params(3, 0.0, 1.0, 0.0, -0.5);
        let v = classify_schrodinger(&pr, &LpContext::new(&pr, 1.5).unwrap()).unwrap();
        assert_eq!(v.regime, SchrodingerRegime::ConditionFails);
        let pr = params(3, 0.0, 1.0, 0.0, 0.0);
        let v = classify_schrodinger(&pr, &LpContext::new(&pr, 1.5).unwrap()).unwrap();
        assert_eq!(v.regime, SchrodingerRegime::EssentiallyMAccretiveBoundary);
        let pr = params(3, 0.0, 1.0, 1.0, 0.0);
        assert!(classify_schrodinger(&pr, &LpContext::new(&pr, 1.5).unwrap()).is_err());
    }

    #[test]
    fn adjoint_examples() {
        let adj = adjoint_params(&params(3, 1.0, 1.0, 3.0, 7.0));
        assert_eq!((adj.b(), adj.c()), (-1.0, 4.0));
        let adj = adjoint_params(&params(3, 1.0, 1.0, 1.0, 0.0));
        assert_eq!((adj.b(), adj.c()), (1.0, 0.0));
        let pr = params(5, 0.3, 2.0, -1.7, 0.4);
        assert_relative_eq!(adjoint_params(&adjoint_params(&pr)).b(), pr.b(), epsilon = 1e-15);
        let f = formal_adjoint_params(&pr);
        assert_relative_eq!(formal_adjoint_params(&f).c(), pr.c(), epsilon = 1e-13);
    }

    #[test]
    fn lambda_min_examples() {
        assert_relative_eq!(
            lambda_min(&params(3, 1.0, 1.0, 0.0, 0.0)).unwrap(),
            8.0,
            max_relative = 1e-14
        );
        assert_eq!(lambda_min(&params(5, 1.0, 1.0, 0.0, 10.0)).unwrap(), 0.0);
        assert_eq!(
            lambda_min(&params(3, 1.0, 0.5, 0.0, 0.0)).unwrap(),
            lambda_min(&params(3, 1.0, 7.0, 0.0, 0.0)).unwrap()
        );
        assert_eq!(lambda_min(&params(3, 0.0, 1.0, 0.0, 1.0)).unwrap(), 0.0);
        assert!(lambda_min(&params(3, 0.0, 1.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn maximality_and_tilde_c() {
        let pr = params(3, 1.0, 1.0, 0.0, 0.0);
        assert!(maximality_condition(&pr, &LpContext::new(&pr, 1.5).unwrap()));
        let pr = params(3, 0.0, 1.0, 2.0, 0.0);
        assert!(maximality_condition(&pr, &LpContext::new(&pr, 1.5).unwrap()));
        let pr = params(3, 0.0, 1.0, 0.0, 0.0);
        assert!(!maximality_condition(&pr, &LpContext::new(&pr, 1.5).unwrap()));
        assert_eq!(tilde_c(&params(3, 1.0, 1.0, 2.0, 0.0)), 2.0);
        assert_eq!(tilde_c(&params(4, 1.0, 1.0, 0.0, -1.25)), -1.25);
        assert_eq!(tilde_c(&params(5, 0.0, 1.0, -2.0, 3.0)), 0.0);
    }

    #[test]
    fn apply_radial_on_square() {
        let pr = params(3, 0.0, 1.0, 0.0, 0.0);
        // Δ r^2 = 6 in three dimensions; at α = 0 the diffusion coefficient 1 + r^0 is 2.
        assert_relative_eq!(pr.apply_radial(1.0, 1.0, 2.0, 2.0), 11.0, epsilon = 1e-14);
    }
}
