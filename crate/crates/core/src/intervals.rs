//! Interval distributions of the renewal process.
//!
//! An [`IntervalModel`] is a Gamma (or Exponential, the shape-1 special
//! case) distribution over interarrival intervals, exposing the integrals
//! the factor construction needs, all in natural-log domain:
//!
//! - `log_density`:      ln f(τ)
//! - `log_survival`:     ln ∫_x^∞ f(τ) dτ
//! - `log_sq_tail`:      ln ∫_x^∞ f(τ)² dτ
//! - `log_lb_tail`:      ln ∫_T^∞ (τ-T) f(τ) dτ      (length-biased tail)
//! - `log_lb_sq_tail`:   ln ∫_T^∞ (τ-T) f(τ)² dτ
//! - `log_mean_density`: ln E_{τ~F}[f(τ)] = ln ∫_0^∞ f(τ)² dτ
//!
//! For Gamma(k, λ) every integral reduces to the regularized upper
//! incomplete gamma function:
//!
//! ```text
//! ∫_x^∞ f(τ)²  dτ = E[f] · Q(2k-1, 2λx),   E[f] = λ Γ(2k-1) / (Γ(k)² 2^(2k-1))
//! ∫_T^∞ τ f    dτ = (k/λ) · Q(k+1, λT)
//! ∫_T^∞ τ f²   dτ = Γ(2k) / (Γ(k)² 2^(2k)) · Q(2k, 2λT)
//! ```
//!
//! `E[f(τ)]` is finite only for shape > 1/2 (the squared density is not
//! integrable at 0 otherwise), so construction rejects smaller shapes.
//! Log differences use `log_diff_exp` to keep the length-biased tails
//! stable when `λT` is large.

use rand::Rng;
use rand_distr::Distribution;

use crate::error::{Error, Result};
use crate::numeric::{log_diff_exp, tanh_sinh};
use crate::special::{digamma, ln_gamma, log_gamma_q, trigamma};

/// Interval distribution family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Exponential,
    Gamma,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Family::Exponential => write!(f, "exponential"),
            Family::Gamma => write!(f, "gamma"),
        }
    }
}

/// Tail integrals computable by [`IntervalModel::quadrature_reference`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailIntegrand {
    /// ∫_x^∞ f(τ) dτ
    Survival,
    /// ∫_x^∞ f(τ)² dτ
    SqTail,
    /// ∫_x^∞ (τ-x) f(τ) dτ
    LbTail,
    /// ∫_x^∞ (τ-x) f(τ)² dτ
    LbSqTail,
}

/// A renewal-process interarrival distribution.
///
/// Immutable after construction; all operations are pure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalModel {
    family: Family,
    shape: f64,
    rate: f64,
}

impl IntervalModel {
    /// Exponential(rate), identical to Gamma(1, rate) on every operation.
    pub fn exponential(rate: f64) -> Result<Self> {
        Self::new(Family::Exponential, 1.0, rate)
    }

    /// Gamma(shape, rate).
    pub fn gamma(shape: f64, rate: f64) -> Result<Self> {
        Self::new(Family::Gamma, shape, rate)
    }

    /// Construct a model, validating parameters. The Exponential family
    /// admits only shape = 1.
    pub fn new(family: Family, shape: f64, rate: f64) -> Result<Self> {
        if !rate.is_finite() || rate <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "rate must be positive and finite, got {rate}"
            )));
        }
        if !shape.is_finite() || shape <= 0.5 {
            return Err(Error::InvalidParameter(format!(
                "shape must exceed 0.5 so that E[f(τ)] = ∫ f(τ)² dτ is finite, got {shape}"
            )));
        }
        if family == Family::Exponential && shape != 1.0 {
            return Err(Error::InvalidParameter(format!(
                "exponential family fixes shape = 1, got {shape}"
            )));
        }
        Ok(Self {
            family,
            shape,
            rate,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// Mean interarrival interval, shape/rate.
    pub fn mean(&self) -> f64 {
        self.shape / self.rate
    }

    /// ln f(τ) for τ >= 0.
    ///
    /// At τ = 0 the density is λ for shape 1, zero for shape > 1 (`-inf`),
    /// and divergent for shape < 1 (`+inf`).
    pub fn log_density(&self, tau: f64) -> Result<f64> {
        if !tau.is_finite() || tau < 0.0 {
            return Err(Error::Domain(format!(
                "log_density requires tau >= 0, got {tau}"
            )));
        }
        Ok(self.log_density_unchecked(tau))
    }

    pub(crate) fn log_density_unchecked(&self, tau: f64) -> f64 {
        let (k, l) = (self.shape, self.rate);
        if tau == 0.0 {
            return if k == 1.0 {
                l.ln()
            } else if k > 1.0 {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            };
        }
        k * l.ln() + (k - 1.0) * tau.ln() - l * tau - ln_gamma(k)
    }

    /// ln ∫_x^∞ f(τ) dτ; zero at x = 0.
    pub fn log_survival(&self, x: f64) -> Result<f64> {
        if !x.is_finite() || x < 0.0 {
            return Err(Error::Domain(format!(
                "log_survival requires x >= 0, got {x}"
            )));
        }
        log_gamma_q(self.shape, self.rate * x)
    }

    /// ln ∫_x^∞ f(τ)² dτ.
    pub fn log_sq_tail(&self, x: f64) -> Result<f64> {
        if !x.is_finite() || x < 0.0 {
            return Err(Error::Domain(format!(
                "log_sq_tail requires x >= 0, got {x}"
            )));
        }
        Ok(self.log_mean_density() + log_gamma_q(2.0 * self.shape - 1.0, 2.0 * self.rate * x)?)
    }

    /// ln E_{τ~F}[f(τ)], the normalizer of the factor construction.
    ///
    /// Equals `log_sq_tail(0)` exactly (same code path).
    pub fn log_mean_density(&self) -> f64 {
        let (k, l) = (self.shape, self.rate);
        l.ln() + ln_gamma(2.0 * k - 1.0) - 2.0 * ln_gamma(k) - (2.0 * k - 1.0) * std::f64::consts::LN_2
    }

    /// ln ∫_T^∞ (τ-T) f(τ) dτ, the length-biased tail.
    pub fn log_lb_tail(&self, t: f64) -> Result<f64> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::Domain(format!(
                "log_lb_tail requires T >= 0, got {t}"
            )));
        }
        let (k, l) = (self.shape, self.rate);
        // ∫_T^∞ τ f dτ - T ∫_T^∞ f dτ, both in log domain.
        let log_a = (k / l).ln() + log_gamma_q(k + 1.0, l * t)?;
        let log_b = t.ln() + log_gamma_q(k, l * t)?;
        Ok(log_diff_exp(log_a, log_b))
    }

    /// ln ∫_T^∞ (τ-T) f(τ)² dτ.
    pub fn log_lb_sq_tail(&self, t: f64) -> Result<f64> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::Domain(format!(
                "log_lb_sq_tail requires T >= 0, got {t}"
            )));
        }
        let (k, l) = (self.shape, self.rate);
        let x = 2.0 * l * t;
        // ∫_T^∞ τ f² dτ = Γ(2k)/(Γ(k)² 2^(2k)) Q(2k, 2λT)
        let log_a =
            ln_gamma(2.0 * k) - 2.0 * ln_gamma(k) - 2.0 * k * std::f64::consts::LN_2 + log_gamma_q(2.0 * k, x)?;
        let log_b = t.ln() + self.log_mean_density() + log_gamma_q(2.0 * k - 1.0, x)?;
        Ok(log_diff_exp(log_a, log_b))
    }

    /// Draw one interarrival interval.
    pub fn sample_interval<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let dist = rand_distr::Gamma::new(self.shape, 1.0 / self.rate)
            .expect("parameters validated at construction");
        dist.sample(rng)
    }

    /// Maximum-likelihood fit.
    ///
    /// Exponential: rate = 1/mean. Gamma: shape initialized from the
    /// method-of-moments estimate and refined by Newton iteration on
    /// `ln k - ψ(k) = ln(mean) - mean(ln x)`, then rate = shape/mean.
    pub fn fit_mle(family: Family, intervals: &[f64]) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::Estimation(
                "cannot fit an interval model to an empty sample".into(),
            ));
        }
        if intervals.iter().any(|&x| !x.is_finite() || x <= 0.0) {
            return Err(Error::Estimation(
                "interval samples must be positive and finite".into(),
            ));
        }
        let n = intervals.len() as f64;
        let mean = intervals.iter().sum::<f64>() / n;
        match family {
            Family::Exponential => Self::exponential(1.0 / mean),
            Family::Gamma => {
                let mean_ln = intervals.iter().map(|&x| x.ln()).sum::<f64>() / n;
                let s = mean.ln() - mean_ln;
                let var = intervals.iter().map(|&x| (x - mean).powi(2)).sum::<f64>() / n;
                if s <= 0.0 || var == 0.0 {
                    return Err(Error::Estimation(
                        "gamma fit requires at least 2 distinct values (zero variance, shape diverges)"
                            .into(),
                    ));
                }
                let mut k = mean * mean / var;
                let mut converged = false;
                for _ in 0..100 {
                    let g = k.ln() - digamma(k) - s;
                    let dg = 1.0 / k - trigamma(k);
                    let mut next = k - g / dg;
                    if next.is_nan() || next <= 0.0 {
                        next = 0.5 * k;
                    }
                    let delta = (next - k).abs();
                    k = next;
                    if delta <= 1e-10 * k.max(1.0) {
                        converged = true;
                        break;
                    }
                }
                if !converged {
                    return Err(Error::Estimation(format!(
                        "gamma shape iteration did not converge (last shape {k})"
                    )));
                }
                if k <= 0.5 {
                    return Err(Error::Estimation(format!(
                        "fitted gamma shape {k} is <= 0.5, violating the finite-E[f(τ)] requirement"
                    )));
                }
                Self::gamma(k, k / mean)
            }
        }
    }

    /// Evaluate one of the tail integrals by adaptive quadrature (linear
    /// domain, relative tolerance 1e-10). Validation oracle for the closed
    /// forms; the integration cutoff is pushed to where the remaining
    /// survival mass is negligible relative to the mass beyond `x`.
    pub fn quadrature_reference(&self, integrand: TailIntegrand, x: f64) -> Result<f64> {
        if !x.is_finite() || x < 0.0 {
            return Err(Error::Domain(format!(
                "quadrature_reference requires x >= 0, got {x}"
            )));
        }
        let threshold = self.log_survival(x)? - 45.0;
        let mut upper = x.max(self.mean()) + self.mean();
        let mut iter = 0;
        while self.log_survival(upper)? > threshold {
            upper = 1.5 * upper + self.mean();
            iter += 1;
            if iter > 200 {
                return Err(Error::Numeric(
                    "failed to locate a quadrature cutoff".into(),
                ));
            }
        }
        let density = |tau: f64| self.log_density_unchecked(tau).exp();
        let f: Box<dyn Fn(f64) -> f64> = match integrand {
            TailIntegrand::Survival => Box::new(density),
            TailIntegrand::SqTail => Box::new(move |tau| density(tau).powi(2)),
            TailIntegrand::LbTail => Box::new(move |tau| (tau - x) * density(tau)),
            TailIntegrand::LbSqTail => Box::new(move |tau| (tau - x) * density(tau).powi(2)),
        };
        tanh_sinh(f, x, upper, 1e-11)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn exp1() -> IntervalModel {
        IntervalModel::exponential(1.0).unwrap()
    }

    fn gamma21() -> IntervalModel {
        IntervalModel::gamma(2.0, 1.0).unwrap()
    }

    #[test]
    fn construction_rejects_small_shape() {
        let err = IntervalModel::gamma(0.25, 1.0).unwrap_err();
        assert!(err.to_string().contains("0.5"), "{err}");
        assert!(IntervalModel::gamma(0.5, 1.0).is_err());
        assert!(IntervalModel::gamma(0.75, 1.0).is_ok());
        assert!(IntervalModel::gamma(2.0, 0.0).is_err());
        assert!(IntervalModel::gamma(2.0, -1.0).is_err());
    }

    #[test]
    fn log_density_examples() {
        assert!((exp1().log_density(0.0).unwrap()).abs() < 1e-14);
        assert!((gamma21().log_density(1.0).unwrap() + 1.0).abs() < 1e-14);
        let g = IntervalModel::gamma(1.0, 2.0).unwrap();
        let expect = 2.0f64.ln() - 1.0;
        assert!((g.log_density(0.5).unwrap() - expect).abs() < 1e-14);
        assert!(exp1().log_density(-0.5).is_err());
    }

    #[test]
    fn log_density_at_zero_by_shape() {
        assert_eq!(gamma21().log_density(0.0).unwrap(), f64::NEG_INFINITY);
        let sub = IntervalModel::gamma(0.75, 1.0).unwrap();
        assert_eq!(sub.log_density(0.0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn log_survival_examples() {
        assert_eq!(exp1().log_survival(0.0).unwrap(), 0.0);
        assert_eq!(gamma21().log_survival(0.0).unwrap(), 0.0);
        assert!((exp1().log_survival(2.0).unwrap() + 2.0).abs() < 1e-12);
        let expect = 2.0f64.ln() - 1.0; // (1+x)e^{-x} at x=1
        assert!((gamma21().log_survival(1.0).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn log_sq_tail_examples() {
        assert!((exp1().log_sq_tail(0.0).unwrap() - 0.5f64.ln()).abs() < 1e-12);
        assert!((exp1().log_sq_tail(1.0).unwrap() - (0.5f64.ln() - 2.0)).abs() < 1e-12);
        assert!((gamma21().log_sq_tail(0.0).unwrap() - 0.25f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn log_mean_density_examples() {
        let e2 = IntervalModel::exponential(2.0).unwrap();
        assert!(e2.log_mean_density().abs() < 1e-14);
        assert!((gamma21().log_mean_density() - 0.25f64.ln()).abs() < 1e-13);
        let g11 = IntervalModel::gamma(1.0, 1.0).unwrap();
        assert!((g11.log_mean_density() - 0.5f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn log_mean_density_equals_sq_tail_at_zero() {
        for &(k, l) in &[(0.75, 0.5), (1.0, 1.0), (2.0, 1.0), (4.0, 4.0), (8.0, 0.5)] {
            let m = IntervalModel::gamma(k, l).unwrap();
            assert_eq!(m.log_mean_density(), m.log_sq_tail(0.0).unwrap());
        }
    }

    #[test]
    fn log_lb_tail_examples() {
        assert!((exp1().log_lb_tail(0.0).unwrap()).abs() < 1e-12);
        assert!((exp1().log_lb_tail(2.0).unwrap() + 2.0).abs() < 1e-12);
        assert!((gamma21().log_lb_tail(0.0).unwrap() - 2.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn log_lb_sq_tail_examples() {
        assert!((exp1().log_lb_sq_tail(0.0).unwrap() - 0.25f64.ln()).abs() < 1e-12);
        assert!((exp1().log_lb_sq_tail(2.0).unwrap() - (0.25f64.ln() - 4.0)).abs() < 1e-12);
        assert!((gamma21().log_lb_sq_tail(0.0).unwrap() - 0.375f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn length_biased_tails_survive_huge_windows() {
        let m = IntervalModel::gamma(8.0, 4.0).unwrap();
        // λT far past linear-domain underflow of the survival function.
        for &t in &[500.0, 2000.0, 10_000.0] {
            let lb = m.log_lb_tail(t).unwrap();
            let lbsq = m.log_lb_sq_tail(t).unwrap();
            assert!(lb.is_finite(), "lb_tail at T={t}");
            assert!(lbsq.is_finite(), "lb_sq_tail at T={t}");
            assert!(lbsq < lb);
        }
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let m = IntervalModel::gamma(4.0, 4.0).unwrap();
        let a = m.sample_interval(&mut ChaCha8Rng::seed_from_u64(7));
        let b = m.sample_interval(&mut ChaCha8Rng::seed_from_u64(7));
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn sampling_mean_matches_model() {
        let m = IntervalModel::gamma(4.0, 4.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 100_000;
        let mean: f64 = (0..n).map(|_| m.sample_interval(&mut rng)).sum::<f64>() / n as f64;
        // sd = sqrt(k)/λ = 0.5, se = sd/sqrt(n)
        let se = 0.5 / (n as f64).sqrt();
        assert!((mean - 1.0).abs() < 3.0 * se, "mean={mean}");
    }

    #[test]
    fn gamma_shape_one_sampling_matches_exponential_cdf() {
        let lambda = 1.7;
        let m = IntervalModel::gamma(1.0, lambda).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let n = 10_000;
        let mut draws: Vec<f64> = (0..n).map(|_| m.sample_interval(&mut rng)).collect();
        draws.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut ks: f64 = 0.0;
        for (i, &x) in draws.iter().enumerate() {
            let cdf = 1.0 - (-lambda * x).exp();
            let lo = i as f64 / n as f64;
            let hi = (i + 1) as f64 / n as f64;
            ks = ks.max((cdf - lo).abs()).max((cdf - hi).abs());
        }
        // 1% critical value of the one-sample KS statistic.
        let critical = 1.63 / (n as f64).sqrt();
        assert!(ks < critical, "ks={ks}, critical={critical}");
    }

    #[test]
    fn fit_mle_exponential_is_inverse_mean() {
        let m = IntervalModel::fit_mle(Family::Exponential, &[2.0, 2.0, 2.0]).unwrap();
        assert_eq!(m.family(), Family::Exponential);
        assert!((m.rate() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn fit_mle_gamma_recovers_parameters() {
        let truth = IntervalModel::gamma(4.0, 4.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let draws: Vec<f64> = (0..10_000).map(|_| truth.sample_interval(&mut rng)).collect();
        let m = IntervalModel::fit_mle(Family::Gamma, &draws).unwrap();
        assert!((m.shape() - 4.0).abs() / 4.0 < 0.10, "shape={}", m.shape());
        assert!((m.rate() - 4.0).abs() / 4.0 < 0.10, "rate={}", m.rate());
    }

    #[test]
    fn fit_mle_rejects_degenerate_input() {
        assert!(IntervalModel::fit_mle(Family::Gamma, &[]).is_err());
        assert!(IntervalModel::fit_mle(Family::Gamma, &[1.0, -2.0]).is_err());
        let err = IntervalModel::fit_mle(Family::Gamma, &[3.0, 3.0, 3.0]).unwrap_err();
        assert!(err.to_string().contains("distinct"), "{err}");
    }

    #[test]
    fn fit_mle_names_shape_constraint_on_overdispersed_data() {
        // Widely spread data drives the shape estimate below 0.5.
        let data = [1e-8, 1e-6, 1e-4, 1.0, 2.0];
        let err = IntervalModel::fit_mle(Family::Gamma, &data).unwrap_err();
        assert!(err.to_string().contains("0.5"), "{err}");
    }

    #[test]
    fn quadrature_reference_examples() {
        let got = exp1().quadrature_reference(TailIntegrand::SqTail, 0.0).unwrap();
        assert!((got - 0.5).abs() < 1e-9);
        let got = gamma21()
            .quadrature_reference(TailIntegrand::LbSqTail, 0.0)
            .unwrap();
        assert!((got - 0.375).abs() < 1e-9);
        let g42 = IntervalModel::gamma(4.0, 2.0).unwrap();
        let got = g42.quadrature_reference(TailIntegrand::Survival, 0.0).unwrap();
        assert!((got - 1.0).abs() < 1e-10);
    }

    #[test]
    fn closed_forms_match_quadrature_on_grid() {
        for &shape in &[0.75, 1.0, 2.0, 4.0, 8.0] {
            for &rate in &[0.5, 1.0, 4.0] {
                let m = IntervalModel::gamma(shape, rate).unwrap();
                for &x in &[0.0, 0.1, 1.0, 5.0] {
                    let cases = [
                        (TailIntegrand::Survival, m.log_survival(x).unwrap()),
                        (TailIntegrand::SqTail, m.log_sq_tail(x).unwrap()),
                        (TailIntegrand::LbTail, m.log_lb_tail(x).unwrap()),
                        (TailIntegrand::LbSqTail, m.log_lb_sq_tail(x).unwrap()),
                    ];
                    for (which, log_closed) in cases {
                        let quad = m.quadrature_reference(which, x).unwrap();
                        let closed = log_closed.exp();
                        let rel = (closed - quad).abs() / quad.abs();
                        assert!(
                            rel <= 1e-8,
                            "{which:?} shape={shape} rate={rate} x={x}: closed={closed:e} quad={quad:e} rel={rel:e}"
                        );
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn exponential_equals_gamma_shape_one(
            rate in 0.1f64..8.0,
            x in 0.0f64..20.0,
        ) {
            let e = IntervalModel::exponential(rate).unwrap();
            let g = IntervalModel::gamma(1.0, rate).unwrap();
            prop_assert!((e.log_density(x).unwrap() - g.log_density(x).unwrap()).abs() <= 1e-12);
            prop_assert!((e.log_survival(x).unwrap() - g.log_survival(x).unwrap()).abs() <= 1e-12);
            prop_assert!((e.log_sq_tail(x).unwrap() - g.log_sq_tail(x).unwrap()).abs() <= 1e-12);
            prop_assert!((e.log_lb_tail(x).unwrap() - g.log_lb_tail(x).unwrap()).abs() <= 1e-12);
            prop_assert!((e.log_lb_sq_tail(x).unwrap() - g.log_lb_sq_tail(x).unwrap()).abs() <= 1e-12);
            prop_assert!((e.log_mean_density() - g.log_mean_density()).abs() <= 1e-12);
        }

        #[test]
        fn tail_integrals_non_increasing(
            shape in 0.55f64..10.0,
            rate in 0.1f64..8.0,
            x1 in 0.0f64..10.0,
            dx in 0.0f64..10.0,
        ) {
            let m = IntervalModel::gamma(shape, rate).unwrap();
            let x2 = x1 + dx;
            let slack = 1e-9;
            prop_assert!(m.log_survival(x2).unwrap() <= m.log_survival(x1).unwrap() + slack);
            prop_assert!(m.log_sq_tail(x2).unwrap() <= m.log_sq_tail(x1).unwrap() + slack);
            prop_assert!(m.log_lb_tail(x2).unwrap() <= m.log_lb_tail(x1).unwrap() + slack);
            prop_assert!(m.log_lb_sq_tail(x2).unwrap() <= m.log_lb_sq_tail(x1).unwrap() + slack);
        }
    }

    #[test]
    fn fit_mle_fixed_point_large_sample() {
        let truth = IntervalModel::gamma(3.0, 1.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let draws: Vec<f64> = (0..100_000).map(|_| truth.sample_interval(&mut rng)).collect();
        let m = IntervalModel::fit_mle(Family::Gamma, &draws).unwrap();
        assert!((m.shape() - 3.0).abs() / 3.0 < 0.05);
        assert!((m.rate() - 1.5).abs() / 1.5 < 0.05);
    }
}
