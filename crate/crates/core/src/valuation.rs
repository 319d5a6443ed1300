//! Relative-infinitesimal calculus.
//!
//! A positive quantity below a scale `delta` is tied to an ordinary variable
//! `t > delta` by the inversion rule `t_tilde / delta = lambda * (delta / t)`
//! and carries the log-based absolute value `ln(delta / t_tilde) / ln(1/delta)`.
//! Magnitudes inside `[delta, N]` keep their Euclidean value; magnitudes
//! beyond `N` are valued through their inverse.  The symbolic carrier
//! [`ValuedInfinitesimal`] stores the limiting exponent directly so that the
//! product rule is exact.

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::PAdicNumber;
use crate::stats::least_squares;

/// Log-based absolute value of an infinitesimal `t_e` relative to `delta`:
/// `ln(delta / t_e) / ln(1 / delta)`.
pub fn rel_abs(t_e: f64, delta: f64) -> Result<f64> {
    check_scale(delta)?;
    if t_e <= 0.0 {
        return Err(Error::invalid("t_e must be positive"));
    }
    if t_e >= delta {
        return Err(Error::invalid(
            "t_e >= delta: not an infinitesimal relative to this scale",
        ));
    }
    Ok((delta / t_e).ln() / (1.0 / delta).ln())
}

fn check_scale(delta: f64) -> Result<()> {
    if delta.is_nan() || delta <= 0.0 || delta >= 1.0 {
        return Err(Error::invalid("scale delta must lie in (0, 1)"));
    }
    Ok(())
}

/// Magnitude regime under the extended norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Finite,
    Infinitesimal,
    Infinite,
}

/// Extended-norm result: Euclidean on `[delta, N]`, log-valued outside.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UltraScalar {
    pub regime: Regime,
    pub value: f64,
    #[serde(rename = "delta", skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
}

impl UltraScalar {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("ultra scalar serializes")
    }
}

/// Extended norm of a real number at scale `delta` with largeness threshold `big_n`.
pub fn ultra_norm(r: f64, delta: f64, big_n: f64) -> Result<UltraScalar> {
    check_scale(delta)?;
    if big_n < 1.0 / delta {
        return Err(Error::invalid("inconsistent thresholds: N < 1/delta"));
    }
    let a = r.abs();
    if a == 0.0 {
        return Ok(UltraScalar {
            regime: Regime::Infinitesimal,
            value: 0.0,
            scale: Some(delta),
        });
    }
    if a < delta {
        Ok(UltraScalar {
            regime: Regime::Infinitesimal,
            value: rel_abs(a, delta)?,
            scale: Some(delta),
        })
    } else if a <= big_n {
        Ok(UltraScalar {
            regime: Regime::Finite,
            value: a,
            scale: None,
        })
    } else {
        Ok(UltraScalar {
            regime: Regime::Infinite,
            value: rel_abs(1.0 / a, delta)?,
            scale: Some(delta),
        })
    }
}

/// Map a variable `t > delta` to its paired infinitesimal.
///
/// Returns `(t_tilde, mu)` with `t_tilde = lambda * delta^2 / t` and the
/// exponent `mu` solving `t_tilde / delta = (delta / t)^mu`, i.e.
/// `mu = 1 + ln(1/lambda) / ln(t/delta)`; `mu` blows up as `t -> delta^+`.
pub fn invert_to_infinitesimal(t: f64, delta: f64, lambda: f64) -> Result<(f64, f64)> {
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::invalid("scale delta must be positive"));
    }
    if t <= delta {
        return Err(Error::invalid("t must exceed the scale delta"));
    }
    if lambda <= 0.0 {
        return Err(Error::invalid("lambda must be positive"));
    }
    let t_tilde = lambda * delta * delta / t;
    if t_tilde >= delta {
        return Err(Error::invalid(
            "lambda too large: image is not below the scale",
        ));
    }
    let mu = 1.0 + (1.0 / lambda).ln() / (t / delta).ln();
    Ok((t_tilde, mu))
}

/// Symbolic infinitesimal `lambda * delta^(1 + k + xi)`.
///
/// The limiting value `k` is stored directly, so products add exponents
/// exactly; the lambda-dependent finite-scale correction is only visible
/// through [`realize`](Self::realize) and [`rel_abs`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValuedInfinitesimal {
    lambda: f64,
    k: f64,
    xi: f64,
}

impl ValuedInfinitesimal {
    pub fn new(lambda: f64, k: f64) -> Result<Self> {
        Self::with_xi(lambda, k, 0.0)
    }

    /// `xi` is the inert correction exponent; it defaults to zero.
    pub fn with_xi(lambda: f64, k: f64, xi: f64) -> Result<Self> {
        if lambda <= 0.0 {
            return Err(Error::invalid("lambda must be positive"));
        }
        if k < 0.0 {
            return Err(Error::invalid("k must be nonnegative"));
        }
        if xi < 0.0 {
            return Err(Error::invalid("xi must be nonnegative"));
        }
        Ok(Self { lambda, k, xi })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// The scale-free limiting value: independent of lambda.
    pub fn limit_value(&self) -> f64 {
        self.k
    }

    /// Concrete realization at a finite scale.
    pub fn realize(&self, delta: f64) -> Result<f64> {
        check_scale(delta)?;
        Ok(self.lambda * delta.powf(1.0 + self.k + self.xi))
    }

    /// Product: lambdas multiply, exponents add exactly.
    pub fn product(&self, other: &Self) -> Self {
        Self {
            lambda: self.lambda * other.lambda,
            k: self.k + other.k,
            xi: self.xi + other.xi,
        }
    }
}

/// One factor of an adelic composite, with its own-prime absolute value.
#[derive(Debug, Clone)]
pub struct AdelicComponent {
    pub prime: u64,
    pub abs: BigRational,
}

/// `base * prod (1 + tau_q)` over increasing primes; the unit factors leave
/// the absolute value untouched.
#[derive(Debug, Clone)]
pub struct AdelicComposite {
    pub abs: BigRational,
    pub components: Vec<AdelicComponent>,
}

/// Compose a base carrier with unit factors at strictly larger primes.
///
/// Every unit must have absolute value exactly 1 at its own prime; the
/// composite absolute value is that of the base.
pub fn adelic_compose(base: &PAdicNumber, units: &[PAdicNumber]) -> Result<AdelicComposite> {
    let mut last = base.p();
    let mut components = vec![AdelicComponent {
        prime: base.p(),
        abs: base.abs(),
    }];
    for unit in units {
        if unit.p() <= last {
            return Err(Error::invalid(format!(
                "unit primes must strictly increase: {} after {}",
                unit.p(),
                last
            )));
        }
        let abs = unit.abs();
        if !abs.is_one() {
            return Err(Error::invalid(format!(
                "factor at prime {} has absolute value != 1",
                unit.p()
            )));
        }
        components.push(AdelicComponent {
            prime: unit.p(),
            abs,
        });
        last = unit.p();
    }
    Ok(AdelicComposite {
        abs: base.abs(),
        components,
    })
}

/// Check that a constant turns into a log-variable at infinitesimal scales.
///
/// Parameterizes `t = delta * delta^(-s)` and `phi = phi0 * delta^(k s)` over
/// a small grid of `s` and returns the least-squares slope of `ln phi`
/// against `ln t`, which is `-k` on exact data.
pub fn constant_to_log_variable_check(
    phi0: f64,
    k: f64,
    delta: f64,
    samples: usize,
) -> Result<f64> {
    check_scale(delta)?;
    if phi0 <= 0.0 {
        return Err(Error::invalid("phi0 must be positive"));
    }
    if samples < 3 {
        return Err(Error::invalid("need at least 3 samples"));
    }
    let ln_delta = delta.ln();
    let mut xs = Vec::with_capacity(samples);
    let mut ys = Vec::with_capacity(samples);
    for i in 0..samples {
        let s = 0.1 + 0.9 * i as f64 / (samples - 1) as f64;
        xs.push((1.0 - s) * ln_delta);
        ys.push(phi0.ln() + k * s * ln_delta);
    }
    let (slope, _, _) = least_squares(&xs, &ys)?;
    Ok(slope)
}
