//! Deterministic float formatting for CSV and summary output.
//!
//! Values are printed with a fixed number of significant digits (printf `%g`
//! style) so that identical runs produce byte-identical files.

/// Format `v` with `sig` significant digits, trimming trailing zeros.
pub fn fmt_sig(v: f64, sig: usize) -> String {
    assert!(sig >= 1, "need at least one significant digit");
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{:.*e}", sig - 1, v);
    let (mant, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("exponent");
    let neg = mant.starts_with('-');
    let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();

    let body = if exp >= -4 && (exp as i64) < sig as i64 {
        if exp >= 0 {
            let split = exp as usize + 1;
            let int = &digits[..split];
            let frac = digits[split..].trim_end_matches('0');
            if frac.is_empty() {
                int.to_string()
            } else {
                format!("{int}.{frac}")
            }
        } else {
            let zeros = "0".repeat((-exp - 1) as usize);
            let frac = format!("{zeros}{digits}");
            format!("0.{}", frac.trim_end_matches('0'))
        }
    } else {
        let trimmed = digits.trim_end_matches('0');
        let (head, tail) = trimmed.split_at(1);
        if tail.is_empty() {
            format!("{head}e{exp}")
        } else {
            format!("{head}.{tail}e{exp}")
        }
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// The 12-significant-digit format used by every CSV export.
pub fn sig12(v: f64) -> String {
    fmt_sig(v, 12)
}
