//! Deterministic text output: 12-significant-digit floats and the CSV
//! layouts for surfaces and gap curves.

use crate::analysis::{GapPoint, SweepRecord};

pub const SURFACE_HEADER: &str = "alpha_sq,theta,phi,f_min,omega_star,xi_star,concurrence";
pub const GAP_HEADER: &str = "alpha_sq,f1,f2,d";

const SIG_DIGITS: usize = 12;

/// Formats like C's `%.12g`.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= SIG_DIGITS as i32 {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let decimals = (SIG_DIGITS as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{:.*}", decimals, v)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn surface_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from(SURFACE_HEADER);
    out.push('\n');
    for r in records {
        let row = [
            r.alpha_sq,
            r.theta,
            r.phi,
            r.f_min,
            r.omega_star,
            r.xi_star,
            r.concurrence,
        ];
        out.push_str(&row.map(fmt_sig).join(","));
        out.push('\n');
    }
    out
}

pub fn gap_csv(points: &[GapPoint]) -> String {
    let mut out = String::from(GAP_HEADER);
    out.push('\n');
    for p in points {
        out.push_str(&[p.alpha_sq, p.f1, p.f2, p.d].map(fmt_sig).join(","));
        out.push('\n');
    }
    out
}
