//! Empirical prime-counting error analysis.
//!
//! For each grid point the scan records the main-term comparator
//! `eps = ln x / x`, the relative error `pi(x) * ln x / x - 1`, and the
//! logarithmic integral as the standard reference.  A log-log least-squares
//! fit of the relative error gives the measured decay exponent.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numfmt::sig12;
use crate::sieve::{sieve_pi_with_checkpoints, PiTable};
use crate::stats::least_squares;

/// li(2): offset between the integral from 2 and the full logarithmic integral.
const LI_AT_2: f64 = 1.045163780117493;

/// Logarithmic integral `li(x)`, computed as `li(2) + integral_2^x dt/ln t`.
///
/// The quadrature runs from 2, clear of the singularity at `t = 1`; the
/// constant restores the standard normalization.
pub fn logarithmic_integral(x: f64) -> Result<f64> {
    if x.is_nan() || x < 2.0 {
        return Err(Error::invalid("li(x) requires x >= 2"));
    }
    Ok(LI_AT_2 + integrate_inv_ln(2.0, x))
}

/// Adaptive Simpson quadrature of `1/ln t` on `[a, b]`, `2 <= a <= b`.
fn integrate_inv_ln(a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    // Split per decade so the recursion starts from well-scaled panels.
    let mut total = 0.0;
    let mut lo = a;
    while lo < b {
        let hi = (lo * 10.0).min(b);
        total += adaptive_simpson(lo, hi, 1e-10);
        lo = hi;
    }
    total
}

fn inv_ln(t: f64) -> f64 {
    1.0 / t.ln()
}

fn adaptive_simpson(a: f64, b: f64, tol: f64) -> f64 {
    let c = 0.5 * (a + b);
    let fa = inv_ln(a);
    let fb = inv_ln(b);
    let fc = inv_ln(c);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
    simpson_step(a, b, c, fa, fb, fc, whole, tol, 40)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    a: f64,
    b: f64,
    c: f64,
    fa: f64,
    fb: f64,
    fc: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let d = 0.5 * (a + c);
    let e = 0.5 * (c + b);
    let fd = inv_ln(d);
    let fe = inv_ln(e);
    let left = (c - a) / 6.0 * (fa + 4.0 * fd + fc);
    let right = (b - c) / 6.0 * (fc + 4.0 * fe + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_step(a, c, d, fa, fc, fd, left, tol / 2.0, depth - 1)
            + simpson_step(c, b, e, fc, fb, fe, right, tol / 2.0, depth - 1)
    }
}

/// One row of the error scan.
#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub x: f64,
    pub pi: u64,
    /// Main-term comparator `ln x / x`.
    pub eps: f64,
    /// `pi * ln x / x - 1`.
    pub relerr: f64,
    pub li: f64,
    /// `li - pi`.
    pub li_err: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorScan {
    pub rows: Vec<ScanRow>,
    pub x_min: f64,
    pub x_max: f64,
}

impl ErrorScan {
    /// CSV export with the exact header `x,pi,eps,relerr,li,li_err`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,pi,eps,relerr,li,li_err\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                sig12(row.x),
                row.pi,
                sig12(row.eps),
                sig12(row.relerr),
                sig12(row.li),
                sig12(row.li_err),
            ));
        }
        out
    }
}

/// Log-spaced grid over `[x_min, x_max]` with both endpoints included.
///
/// Points that land within rounding distance of an integer are snapped, so
/// decade boundaries are hit exactly.
pub fn log_grid(x_min: f64, x_max: f64, points: usize) -> Result<Vec<f64>> {
    if x_min.is_nan() || x_max.is_nan() || x_min < 2.0 || x_max <= x_min {
        return Err(Error::invalid("need 2 <= x_min < x_max"));
    }
    if points < 2 {
        return Err(Error::invalid("need at least 2 grid points"));
    }
    let la = x_min.ln();
    let lb = x_max.ln();
    let mut out = Vec::with_capacity(points);
    for i in 0..points {
        let f = i as f64 / (points - 1) as f64;
        let mut x = (la + f * (lb - la)).exp();
        let snapped = x.round();
        if (x - snapped).abs() < 1e-9 * x {
            x = snapped;
        }
        out.push(x);
    }
    out[0] = x_min;
    *out.last_mut().expect("nonempty") = x_max;
    Ok(out)
}

/// Default grid: 40 points per decade from 1e3 to 1e8.
pub fn default_scan_grid() -> Vec<f64> {
    log_grid(1e3, 1e8, 201).expect("default grid is valid")
}

/// Compute the error scan over a grid backed by an exact sieve table.
///
/// Every grid point (floored) must be a checkpoint of the table.
pub fn pnt_scan(table: &PiTable, grid: &[f64]) -> Result<ErrorScan> {
    if grid.is_empty() {
        return Err(Error::invalid("empty grid"));
    }
    let mut rows = Vec::with_capacity(grid.len());
    let mut last_li_at = 2.0f64;
    let mut li_acc = LI_AT_2;
    let mut sorted = grid.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    for &x in &sorted {
        if x.is_nan() || x < 2.0 {
            return Err(Error::invalid("grid points must be >= 2"));
        }
        let xi = x.floor() as u64;
        if xi > table.limit() {
            return Err(Error::BeyondTable(xi, table.limit()));
        }
        let pi = table
            .pi(xi)
            .ok_or(Error::BeyondTable(xi, table.limit()))?;
        let eps = x.ln() / x;
        let relerr = pi as f64 * eps - 1.0;
        li_acc += integrate_inv_ln(last_li_at, x);
        last_li_at = x;
        let li = li_acc;
        rows.push(ScanRow {
            x,
            pi,
            eps,
            relerr,
            li,
            li_err: li - pi as f64,
        });
    }
    Ok(ErrorScan {
        x_min: rows.first().expect("nonempty").x,
        x_max: rows.last().expect("nonempty").x,
        rows,
    })
}

/// Sieve and scan `[x_min, x_max]` on a log grid in one call.
pub fn scan_range(x_min: f64, x_max: f64, points: usize) -> Result<ErrorScan> {
    let grid = log_grid(x_min, x_max, points)?;
    let checkpoints: Vec<u64> = grid.iter().map(|&x| x.floor() as u64).collect();
    let table = sieve_pi_with_checkpoints(x_max.floor() as u64, &checkpoints)?;
    pnt_scan(&table, &grid)
}

/// Log-log least-squares fit of the relative error.
#[derive(Debug, Clone, Serialize)]
pub struct FitResult {
    pub exponent: f64,
    pub intercept: f64,
    pub r2: f64,
    pub x_min: f64,
    pub x_max: f64,
}

impl FitResult {
    /// JSON export: `{"exponent":e,"intercept":b,"r2":r,"x_min":a,"x_max":z}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("fit serializes")
    }
}

/// Fit `ln(relerr)` against `ln(x)` over the rows inside `[x_min, x_max]`.
pub fn fit_exponent(scan: &ErrorScan, x_min: f64, x_max: f64) -> Result<FitResult> {
    let rows: Vec<&ScanRow> = scan
        .rows
        .iter()
        .filter(|r| r.x >= x_min && r.x <= x_max)
        .collect();
    if rows.len() < 3 {
        return Err(Error::invalid("need at least 3 rows in the fit window"));
    }
    let mut xs = Vec::with_capacity(rows.len());
    let mut ys = Vec::with_capacity(rows.len());
    for row in &rows {
        if row.relerr <= 0.0 {
            return Err(Error::invalid(format!(
                "nonpositive relative error at x = {}",
                row.x
            )));
        }
        xs.push(row.x.ln());
        ys.push(row.relerr.ln());
    }
    let (slope, intercept, r2) = least_squares(&xs, &ys)?;
    Ok(FitResult {
        exponent: slope,
        intercept,
        r2,
        x_min,
        x_max,
    })
}

/// Pointwise check of `t^nu <= M t^(1/2 - sigma)` with `M = 1`.
#[derive(Debug, Clone, Serialize)]
pub struct RhBoundReport {
    pub nu: f64,
    pub sigma: f64,
    /// Exponent of the ratio: `nu - 1/2 + sigma`.
    pub exponent: f64,
    /// `(t, t^(nu - 1/2 + sigma))` per grid point, in input order.
    pub rows: Vec<(f64, f64)>,
    /// Every ratio at most 1.
    pub bounded: bool,
    /// Ratios decrease as t decreases.
    pub monotone: bool,
    /// Both checks passed (fails when `nu <= 1/2 - sigma`).
    pub holds: bool,
}

/// Evaluate the bound ratios on a grid in `(0, 1]`.
///
/// A failing direction (`nu <= 1/2 - sigma`) is reported through `holds`,
/// not as an error.
pub fn rh_bound_check(nu: f64, sigma: f64, t_grid: &[f64]) -> Result<RhBoundReport> {
    if !(0.0..1.0).contains(&nu) || nu == 0.0 {
        return Err(Error::invalid("nu must lie in (0, 1)"));
    }
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(Error::invalid("sigma must be positive"));
    }
    if t_grid.is_empty() {
        return Err(Error::invalid("empty t grid"));
    }
    let exponent = nu - 0.5 + sigma;
    let mut rows = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        if t.is_nan() || t <= 0.0 || t > 1.0 {
            return Err(Error::invalid("grid t values must lie in (0, 1]"));
        }
        rows.push((t, t.powf(exponent)));
    }
    let bounded = rows.iter().all(|&(_, r)| r <= 1.0 + 1e-15);
    let mut by_t = rows.clone();
    by_t.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite grid"));
    let monotone = by_t.windows(2).all(|w| w[0].1 <= w[1].1 + 1e-15);
    Ok(RhBoundReport {
        nu,
        sigma,
        exponent,
        rows,
        bounded,
        monotone,
        holds: bounded && monotone && exponent > 0.0,
    })
}
