//! Dynamic modes: golden-ratio continued fractions, the prime-ladder walk,
//! the closed-form solution of the rescaled equation, and the asymptotic
//! correction factor built from the prime count.

use crate::error::{Error, Result};
use crate::numfmt::sig12;
use crate::sieve::primes_up_to;

/// The golden ratio conjugate `(sqrt(5) - 1) / 2`, fixed point of `x -> 1/(1+x)`.
pub fn golden_ratio_conjugate() -> f64 {
    (5.0f64.sqrt() - 1.0) / 2.0
}

/// Result of iterating `x <- 1/(1 + x)` from 0.
#[derive(Debug, Clone)]
pub struct GoldenCf {
    /// Final iterate, the Fibonacci ratio `F_k / F_{k+1}`.
    pub value: f64,
    /// Successive error ratios `|x_{k+1} - nu| / |x_k - nu|`.
    pub error_ratios: Vec<f64>,
}

/// Iterate the unit continued fraction `iters` times.
pub fn golden_cf(iters: usize) -> Result<GoldenCf> {
    if iters < 1 {
        return Err(Error::invalid("need at least one iteration"));
    }
    let nu = golden_ratio_conjugate();
    let mut x = 0.0f64;
    let mut errors = Vec::with_capacity(iters);
    for _ in 0..iters {
        x = 1.0 / (1.0 + x);
        errors.push((x - nu).abs());
    }
    let mut error_ratios = Vec::with_capacity(iters.saturating_sub(1));
    for w in errors.windows(2) {
        if w[0] > 0.0 {
            error_ratios.push(w[1] / w[0]);
        }
    }
    Ok(GoldenCf {
        value: x,
        error_ratios,
    })
}

/// One prime crossing of the growing mode.
#[derive(Debug, Clone, Copy)]
pub struct LadderStep {
    pub prime: u64,
    pub inversion_count: u64,
    /// Continued-fraction exponent after this inversion.
    pub cf_exponent: f64,
}

/// State of the prime-ladder walk.
#[derive(Debug, Clone)]
pub struct LadderState {
    pub current_prime: Option<u64>,
    pub inversion_count: u64,
    pub cf_exponent: f64,
    pub trajectory: Vec<LadderStep>,
}

impl LadderState {
    /// CSV export: `prime,inversion_count,cf_exponent`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("prime,inversion_count,cf_exponent\n");
        for step in &self.trajectory {
            out.push_str(&format!(
                "{},{},{}\n",
                step.prime,
                step.inversion_count,
                sig12(step.cf_exponent)
            ));
        }
        out
    }
}

/// Walk the growing mode across every primal scale `1/p`, `p <= x_max`.
///
/// Each crossing is one inversion: the count increments by one per prime (so
/// it equals the prime counting function at `x_max` by construction) and the
/// exponent advances one continued-fraction level, `x <- 1/(1 + x)`.
pub fn prime_ladder_walk(x_max: f64) -> Result<LadderState> {
    if x_max.is_nan() || x_max < 2.0 {
        return Err(Error::invalid("x_max must be at least 2"));
    }
    let primes = primes_up_to(x_max.floor() as u64);
    let mut count = 0u64;
    let mut x = 0.0f64;
    let mut trajectory = Vec::with_capacity(primes.len());
    for &p in &primes {
        count += 1;
        x = 1.0 / (1.0 + x);
        trajectory.push(LadderStep {
            prime: p,
            inversion_count: count,
            cf_exponent: x,
        });
    }
    Ok(LadderState {
        current_prime: primes.last().copied(),
        inversion_count: count,
        cf_exponent: x,
        trajectory,
    })
}

/// Closed-form solution `tau(t) = C / ln t` of `ln t * dtau/d ln t = -tau`.
pub fn solve_rescaled(c: f64, t: f64) -> Result<f64> {
    if t <= 0.0 {
        return Err(Error::invalid("t must be positive"));
    }
    if t == 1.0 {
        return Err(Error::SingularPoint);
    }
    Ok(c / t.ln())
}

/// Residual of the rescaled equation at `t` using the analytic derivative of
/// `C / ln t`; identically zero up to floating-point cancellation.
pub fn rescaled_residual(c: f64, t: f64) -> Result<f64> {
    if t <= 0.0 {
        return Err(Error::invalid("t must be positive"));
    }
    if t == 1.0 {
        return Err(Error::SingularPoint);
    }
    let lt = t.ln();
    let dtau_dt = -c / (t * lt * lt);
    // d tau / d ln t = t * dtau/dt
    Ok(lt * t * dtau_dt + c / lt)
}

/// Predicted correction `eps(t) * pi * (1 - t^nu)` with `eps(t) = t ln(1/t)`.
pub fn asymptotic_correction(t: f64, pi_value: u64, nu: f64) -> Result<f64> {
    if t.is_nan() || t <= 0.0 || t >= 1.0 {
        return Err(Error::invalid("t must lie in (0, 1)"));
    }
    if pi_value == 0 {
        return Err(Error::invalid("pi_value must be positive"));
    }
    if !(0.0..1.0).contains(&nu) {
        return Err(Error::invalid("nu must lie in [0, 1)"));
    }
    let eps = t * (1.0 / t).ln();
    Ok(eps * pi_value as f64 * (1.0 - t.powf(nu)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::sieve_pi;
    use proptest::prelude::*;

    #[test]
    fn fibonacci_ratios() {
        let ten = golden_cf(10).unwrap();
        assert!((ten.value - 55.0 / 89.0).abs() < 1e-15);

        let forty = golden_cf(40).unwrap();
        assert!((forty.value - golden_ratio_conjugate()).abs() < 1e-15);
    }

    #[test]
    fn error_ratios_approach_nu_squared() {
        let nu = golden_ratio_conjugate();
        let cf = golden_cf(30).unwrap();
        for k in 10..25 {
            assert!(
                (cf.error_ratios[k] - nu * nu).abs() < 1e-3,
                "ratio {k}: {}",
                cf.error_ratios[k]
            );
        }
    }

    #[test]
    fn cf_truncations_alternate() {
        let nu = golden_ratio_conjugate();
        let mut x = 0.0f64;
        for k in 1..=20 {
            x = 1.0 / (1.0 + x);
            if k % 2 == 1 {
                assert!(x > nu, "odd iterate {k} below nu");
            } else {
                assert!(x < nu, "even iterate {k} above nu");
            }
        }
    }

    #[test]
    fn ladder_counts_primes() {
        assert_eq!(prime_ladder_walk(2.0).unwrap().inversion_count, 1);
        assert_eq!(prime_ladder_walk(30.0).unwrap().inversion_count, 10);
        let walk = prime_ladder_walk(1e4).unwrap();
        assert_eq!(walk.inversion_count, 1229);
        assert_eq!(
            walk.inversion_count,
            sieve_pi(10_000).unwrap().pi_limit()
        );
        assert!(prime_ladder_walk(1.5).is_err());
    }

    #[test]
    fn ladder_exponent_is_cf_level() {
        let walk = prime_ladder_walk(30.0).unwrap();
        // 10 primes -> F_10 / F_11.
        assert!((walk.cf_exponent - 55.0 / 89.0).abs() < 1e-15);
        assert_eq!(walk.current_prime, Some(29));
        assert_eq!(walk.trajectory.len(), 10);
        assert_eq!(walk.trajectory[0].prime, 2);
        assert!((walk.trajectory[0].cf_exponent - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ladder_csv_schema() {
        let walk = prime_ladder_walk(10.0).unwrap();
        let csv = walk.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("prime,inversion_count,cf_exponent"));
        assert_eq!(lines.count(), 4);
    }

    #[test]
    fn rescaled_closed_form() {
        assert!((solve_rescaled(1.0, std::f64::consts::E).unwrap() - 1.0).abs() < 1e-15);
        let e2 = std::f64::consts::E * std::f64::consts::E;
        assert!((solve_rescaled(1.0, e2).unwrap() - 0.5).abs() < 1e-14);
        assert!(matches!(solve_rescaled(1.0, 1.0), Err(Error::SingularPoint)));

        for t in [2.0, 10.0, 100.0] {
            let res = rescaled_residual(1.0, t).unwrap().abs();
            let scale = (1.0 / t.ln()).abs();
            assert!(res < 1e-12 * scale.max(1.0), "t={t}: {res}");
        }
    }

    #[test]
    fn rescaled_residual_on_log_grid() {
        for i in 0..60 {
            let t = 1.1 * 10f64.powf(i as f64 / 10.0);
            if t > 1e6 {
                break;
            }
            let res = rescaled_residual(2.5, t).unwrap().abs();
            assert!(res < 1e-12, "t={t}: {res}");
        }
    }

    #[test]
    fn correction_examples() {
        let nu = 0.6180339887f64;
        let v = asymptotic_correction(1e-6, 78498, nu).unwrap();
        assert!((v - 1.084278).abs() < 1e-5, "{v}");

        let z = asymptotic_correction(1e-6, 78498, 0.0).unwrap();
        assert_eq!(z, 0.0);

        assert!(asymptotic_correction(1e-6, 0, nu).is_err());
        assert!(asymptotic_correction(1.5, 10, nu).is_err());
    }

    proptest! {
        #[test]
        fn correction_monotonicity(
            t in 1e-8f64..0.5,
            pi in 1u64..100_000,
            nu in 0.05f64..0.95,
        ) {
            let v = asymptotic_correction(t, pi, nu).unwrap();
            let v_more_pi = asymptotic_correction(t, pi + 1, nu).unwrap();
            prop_assert!(v_more_pi > v);
            let nu_hi = (nu + 0.04).min(0.9499);
            prop_assume!(nu_hi > nu);
            let v_more_nu = asymptotic_correction(t, pi, nu_hi).unwrap();
            prop_assert!(v_more_nu >= v);
        }
    }
}
