//! Iterated nonsmooth solutions of the scale-free equation `t dtau/dt = tau`.
//!
//! Near `t = 1` the solution is rebuilt level by level: with `eta_0 = |t - 1|`
//! the small-scale variables follow `eta_{n+1} = alpha_{n+1} eta_n^2 - eps_{n+1}`
//! and the left branch collects the product `C (1 - eta_close) / prod (1 + eta_i)`.
//! Trivial parameters (`alpha = 1`, `eps = 0`) telescope back to the standard
//! solution `tau = t`; nonzero residual rescalings `eps_n` leave a genuine jump
//! in the second derivative at `t = 1`, and starting them one level deeper
//! pushes the jump to higher order.
//!
//! The recursion is accepted while every `eta_n` stays inside `(-1, 1)`:
//! negative values (reached when `eps_{n+1} > alpha_{n+1} eta_n^2`) are valid
//! level variables slightly above 1 in the `1 - eta` picture and are required
//! for probing the solution arbitrarily close to `t = 1`.

use crate::error::{Error, Result};
use crate::numfmt::sig12;
use crate::sieve::is_prime;

/// Per-level rescaling parameters plus the starting offset `eta0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RescalingSchedule {
    eta0: f64,
    alphas: Vec<f64>,
    epsilons: Vec<f64>,
    levels: usize,
}

impl RescalingSchedule {
    pub fn new(eta0: f64, alphas: Vec<f64>, epsilons: Vec<f64>, levels: usize) -> Result<Self> {
        if !(0.0..1.0).contains(&eta0) {
            return Err(Error::invalid("eta0 must lie in [0, 1)"));
        }
        if alphas.len() < levels || epsilons.len() < levels {
            return Err(Error::invalid(
                "alpha/epsilon sequences shorter than the level count",
            ));
        }
        if alphas.iter().take(levels).any(|&a| !a.is_finite() || a < 1.0) {
            return Err(Error::invalid("every alpha must satisfy alpha >= 1"));
        }
        if epsilons.iter().take(levels).any(|&e| !e.is_finite() || e < 0.0) {
            return Err(Error::invalid("every epsilon must be nonnegative"));
        }
        Ok(Self {
            eta0,
            alphas,
            epsilons,
            levels,
        })
    }

    /// All alphas 1, all epsilons 0.
    pub fn trivial(eta0: f64, levels: usize) -> Result<Self> {
        Self::new(eta0, vec![1.0; levels], vec![0.0; levels], levels)
    }

    /// Same rescaling parameters, different starting offset.
    pub fn with_eta0(&self, eta0: f64) -> Result<Self> {
        Self::new(
            eta0,
            self.alphas.clone(),
            self.epsilons.clone(),
            self.levels,
        )
    }

    pub fn eta0(&self) -> f64 {
        self.eta0
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn is_trivial(&self) -> bool {
        self.alphas.iter().take(self.levels).all(|&a| a == 1.0)
            && self.epsilons.iter().take(self.levels).all(|&e| e == 0.0)
    }

    /// Run the level recursion; returns `(etas, eta_close)`.
    ///
    /// `etas` holds `eta_0 ..= eta_L`; `eta_close = eta_L^2` is the one extra
    /// trivial step that closes the product with the standard solution at the
    /// deepest scale.
    fn run_levels(&self, eta0: f64) -> Result<(Vec<f64>, f64)> {
        let mut etas = Vec::with_capacity(self.levels + 1);
        etas.push(eta0);
        let mut eta = eta0;
        for n in 0..self.levels {
            eta = self.alphas[n] * eta * eta - self.epsilons[n];
            if eta.is_nan() || eta.abs() >= 1.0 {
                return Err(Error::ScheduleInfeasible { level: n + 1, eta });
            }
            etas.push(eta);
        }
        Ok((etas, eta * eta))
    }

    /// Run the recursion from the schedule's own `eta0`.
    pub fn iterate(&self) -> Result<IterationTrace> {
        let (etas, eta_close) = self.run_levels(self.eta0)?;
        let constant = continuity_constant(self)?;
        let t_plus: Vec<f64> = etas.iter().map(|e| 1.0 + e).collect();
        let mut partial_products = Vec::with_capacity(t_plus.len());
        let mut acc = 1.0;
        for &t in &t_plus {
            acc /= t;
            partial_products.push(acc);
        }
        Ok(IterationTrace {
            schedule: self.clone(),
            etas,
            t_plus,
            partial_products,
            eta_close,
            constant,
        })
    }
}

/// Continuity constant: the value of `prod (1 + eta_i) / (1 - eta_close)` in
/// the limit `eta0 -> 0`, so that the left branch meets 1 at `t = 1`.
/// Trivial schedules give exactly 1.
fn continuity_constant(schedule: &RescalingSchedule) -> Result<f64> {
    let (etas, eta_close) = schedule.run_levels(0.0)?;
    let mut prod = 1.0;
    for &e in &etas {
        prod *= 1.0 + e;
    }
    Ok(prod / (1.0 - eta_close))
}

/// Which branch of the solution to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// The record of one recursion run.
#[derive(Debug, Clone)]
pub struct IterationTrace {
    schedule: RescalingSchedule,
    etas: Vec<f64>,
    t_plus: Vec<f64>,
    partial_products: Vec<f64>,
    eta_close: f64,
    constant: f64,
}

impl IterationTrace {
    pub fn schedule(&self) -> &RescalingSchedule {
        &self.schedule
    }

    pub fn etas(&self) -> &[f64] {
        &self.etas
    }

    pub fn t_plus(&self) -> &[f64] {
        &self.t_plus
    }

    /// Running products `prod_{i<=n} 1/(1 + eta_i)`.
    pub fn partial_products(&self) -> &[f64] {
        &self.partial_products
    }

    pub fn final_product(&self) -> f64 {
        *self.partial_products.last().expect("at least one level")
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    /// Left-branch value `C (1 - eta_close) * prod 1/(1 + eta_i)`.
    pub fn left_value(&self) -> f64 {
        self.constant * (1.0 - self.eta_close) * self.final_product()
    }

    /// Evaluate the solution at `t`; the trace must have been computed at
    /// `eta0 = |t - 1|`.
    pub fn evaluate(&self, t: f64, side: Side) -> Result<f64> {
        if t.is_nan() || t <= 0.0 || t >= 2.0 {
            return Err(Error::invalid("t outside (0, 2)"));
        }
        match side {
            Side::Right => Ok(t),
            Side::Left => Ok(self.left_value()),
        }
    }

    /// CSV export: `level,eta,t_plus,partial_product`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("level,eta,t_plus,partial_product\n");
        for i in 0..self.etas.len() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                i,
                sig12(self.etas[i]),
                sig12(self.t_plus[i]),
                sig12(self.partial_products[i]),
            ));
        }
        out
    }
}

/// A solution evaluator: the original branch pair or its parity reflection.
#[derive(Debug, Clone)]
pub struct NonsmoothSolution {
    schedule: RescalingSchedule,
    constant: f64,
    reflected: bool,
}

impl NonsmoothSolution {
    pub fn from_schedule(schedule: &RescalingSchedule) -> Result<Self> {
        Ok(Self {
            schedule: schedule.clone(),
            constant: continuity_constant(schedule)?,
            reflected: false,
        })
    }

    /// Swap the linear and product branches (`t_+ <-> t_-`).
    pub fn reflected(&self) -> Self {
        Self {
            schedule: self.schedule.clone(),
            constant: self.constant,
            reflected: !self.reflected,
        }
    }

    pub fn is_reflected(&self) -> bool {
        self.reflected
    }

    fn product_value(&self, eta: f64) -> Result<f64> {
        let (etas, eta_close) = self.schedule.run_levels(eta)?;
        let mut prod = 1.0;
        for &e in &etas {
            prod *= 1.0 + e;
        }
        Ok(self.constant * (1.0 - eta_close) / prod)
    }

    /// Evaluate at any `t` in `(0, 2)`; the branch is chosen by the side of 1.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if t.is_nan() || t <= 0.0 || t >= 2.0 {
            return Err(Error::invalid("t outside (0, 2)"));
        }
        let eta = (t - 1.0).abs();
        if self.reflected {
            if t <= 1.0 {
                Ok(t)
            } else {
                // C / (t_- * prod_{i>=1} t_i+) = left product rescaled by t_+/t_-.
                Ok(self.product_value(eta)? * (1.0 + eta) / (1.0 - eta))
            }
        } else if t >= 1.0 {
            Ok(t)
        } else {
            self.product_value(eta)
        }
    }
}

/// Deviation of the reflected solution from the original over a grid of etas.
#[derive(Debug, Clone)]
pub struct ParityOutcome {
    pub reflected: NonsmoothSolution,
    pub max_deviation: f64,
    /// `(eta, deviation)` per grid point.
    pub deviations: Vec<(f64, f64)>,
}

/// Default parity grid: eta from 0.01 to 0.1 in steps of 0.005.
pub fn default_parity_grid() -> Vec<f64> {
    (0..19).map(|i| 0.01 + 0.005 * i as f64).collect()
}

/// Apply the reflection `t_+ <-> t_-` and measure the sup-norm deviation from
/// the original solution over the grid (on both branches).
pub fn parity_transform(trace: &IterationTrace, grid: &[f64]) -> Result<ParityOutcome> {
    let original = NonsmoothSolution::from_schedule(trace.schedule())?;
    let reflected = original.reflected();
    let mut deviations = Vec::with_capacity(grid.len());
    let mut max_deviation = 0.0f64;
    for &eta in grid {
        if eta.is_nan() || eta <= 0.0 || eta >= 1.0 {
            return Err(Error::invalid("parity grid etas must lie in (0, 1)"));
        }
        let left = (original.eval(1.0 - eta)? - reflected.eval(1.0 - eta)?).abs();
        let right = (original.eval(1.0 + eta)? - reflected.eval(1.0 + eta)?).abs();
        let dev = left.max(right);
        deviations.push((eta, dev));
        max_deviation = max_deviation.max(dev);
    }
    Ok(ParityOutcome {
        reflected,
        max_deviation,
        deviations,
    })
}

/// Default probe step `2^-7`, exactly representable and inside the stable range.
pub const DEFAULT_PROBE_STEP: f64 = 0.0078125;

/// A one-sided second-derivative jump estimate at `t = 1`.
#[derive(Debug, Clone, Copy)]
pub struct JumpEstimate {
    /// Right-minus-left Richardson-extrapolated second differences.
    pub jump: f64,
    /// Deterministic rounding bound for the estimator at this step size.
    pub noise_floor: f64,
    pub step: f64,
}

/// Probe the second-derivative jump of a solution at `t = 1`.
///
/// One-sided second differences at steps `h, h/2, h/4` are combined by two
/// Richardson levels (killing the `h` and `h^2` error terms).  The reported
/// noise floor is the worst-case rounding of the same linear combination,
/// which is what the estimate degenerates to on a schedule with no jump.
pub fn discontinuity_probe(
    solution: &NonsmoothSolution,
    order: u32,
    h: f64,
) -> Result<JumpEstimate> {
    if order != 2 {
        return Err(Error::invalid("only order-2 probes are supported"));
    }
    if h.is_nan() || h <= 1e-6 || h >= 1e-2 {
        return Err(Error::invalid("probe step h must lie in (1e-6, 1e-2)"));
    }

    let mut f_max = 0.0f64;
    let mut eval = |t: f64| -> Result<f64> {
        let v = solution.eval(t)?;
        f_max = f_max.max(v.abs());
        Ok(v)
    };

    let f1 = eval(1.0)?;
    let mut second = |sgn: f64, s: f64| -> Result<f64> {
        let a = eval(1.0 + sgn * s)?;
        let b = eval(1.0 + sgn * 2.0 * s)?;
        Ok((f1 - 2.0 * a + b) / (s * s))
    };
    let mut richardson2 = |sgn: f64| -> Result<f64> {
        let s_h = second(sgn, h)?;
        let s_h2 = second(sgn, h / 2.0)?;
        let s_h4 = second(sgn, h / 4.0)?;
        let r1_h = 2.0 * s_h2 - s_h;
        let r1_h2 = 2.0 * s_h4 - s_h2;
        Ok((4.0 * r1_h2 - r1_h) / 3.0)
    };

    let right = richardson2(1.0)?;
    let left = richardson2(-1.0)?;

    // Rounding bound: each evaluation is accurate to eval_err; a second
    // difference at step s amplifies that by 4/s^2, and the Richardson
    // combination (8 S(h/4) - 6 S(h/2) + S(h)) / 3 weights the three steps.
    let eval_err = (2.0 * solution.schedule.levels() as f64 + 16.0) * f64::EPSILON * f_max.max(1.0);
    let amp = (8.0 * 4.0 / ((h / 4.0) * (h / 4.0))
        + 6.0 * 4.0 / ((h / 2.0) * (h / 2.0))
        + 4.0 / (h * h))
        / 3.0;
    let noise_floor = 2.0 * amp * eval_err;

    Ok(JumpEstimate {
        jump: right - left,
        noise_floor,
        step: h,
    })
}

/// Result of extending the unit `1 + eta` by prime-indexed correction factors.
#[derive(Debug, Clone, Copy)]
pub struct ExtendedUnity {
    /// `T(eta) = (1 + eta) * prod (1 + sigma_q)`.
    pub value: f64,
    /// `ln T - ln(1 + eta) = sum ln(1 + sigma_q)`.
    pub log_deviation: f64,
    /// Upper bound for the deviation: `sum sigma_q`.
    pub sigma_sum: f64,
}

/// Multiply `1 + eta` by `(1 + sigma_q)` over a window of increasing primes.
///
/// The window may be empty; sigmas must be nonnegative and nonincreasing in q.
pub fn extended_unity(eta: f64, window: &[(u64, f64)]) -> Result<ExtendedUnity> {
    if !(0.0..1.0).contains(&eta) {
        return Err(Error::invalid("eta must lie in [0, 1)"));
    }
    let mut last_prime = 0u64;
    let mut last_sigma = f64::INFINITY;
    let mut value = 1.0 + eta;
    let mut log_deviation = 0.0;
    let mut sigma_sum = 0.0;
    for &(q, sigma) in window {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        if q <= last_prime {
            return Err(Error::invalid("window primes must strictly increase"));
        }
        if sigma < 0.0 {
            return Err(Error::invalid("sigma values must be nonnegative"));
        }
        if sigma > last_sigma {
            return Err(Error::invalid("sigma values must be nonincreasing in q"));
        }
        value *= 1.0 + sigma;
        log_deviation += (1.0 + sigma).ln();
        sigma_sum += sigma;
        last_prime = q;
        last_sigma = sigma;
    }
    Ok(ExtendedUnity {
        value,
        log_deviation,
        sigma_sum,
    })
}

/// Chain the residual-rescaling sigmas across a prime window:
/// `sigma_i = alpha_i * (prev - eps_i / alpha_i)^2`, seeded with `prev = eta`
/// and chained through the preceding prime's sigma.
pub fn residual_sigma_schedule(
    eta: f64,
    primes: &[u64],
    alphas: &[f64],
    epsilons: &[f64],
) -> Result<Vec<(u64, f64)>> {
    if alphas.len() < primes.len() || epsilons.len() < primes.len() {
        return Err(Error::invalid("alpha/epsilon shorter than the prime window"));
    }
    let mut prev = eta;
    let mut out = Vec::with_capacity(primes.len());
    for (i, &q) in primes.iter().enumerate() {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        let base = prev - epsilons[i] / alphas[i];
        let sigma = alphas[i] * base * base;
        out.push((q, sigma));
        prev = sigma;
    }
    Ok(out)
}
