//! Term grammar shared by polynomial and modulus literals: `c*t^k` terms
//! joined by `+`, where `c` is a non-negative integer (optionally written
//! `a<i>`), the `*` may be omitted and the variable is `t` or `x`.

use crate::error::{Error, Result};

/// Parses a literal into `(coefficient, degree)` terms in source order.
pub(crate) fn parse_terms(src: &str) -> Result<Vec<(u64, usize)>> {
    let cleaned: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(Error::Parse("empty polynomial literal".into()));
    }
    cleaned.split('+').map(parse_term).collect()
}

fn parse_term(term: &str) -> Result<(u64, usize)> {
    let bad = || Error::Parse(format!("malformed term '{term}'"));
    if term.is_empty() {
        return Err(bad());
    }
    let var_pos = term.find(['t', 'x']);
    let (coef_part, var_part) = match var_pos {
        Some(i) => (&term[..i], Some(&term[i + 1..])),
        None => (term, None),
    };
    let coef_part = coef_part.strip_suffix('*').unwrap_or(coef_part);
    let coef = if coef_part.is_empty() {
        if var_part.is_none() {
            return Err(bad());
        }
        1
    } else {
        let digits = coef_part.strip_prefix('a').unwrap_or(coef_part);
        digits.parse::<u64>().map_err(|_| bad())?
    };
    let degree = match var_part {
        None => 0,
        Some("") => 1,
        Some(rest) => {
            let exp = rest.strip_prefix('^').ok_or_else(bad)?;
            exp.parse::<usize>().map_err(|_| bad())?
        }
    };
    Ok((coef, degree))
}

/// Renders ascending coefficients highest degree first, skipping zeros.
pub(crate) fn format_terms(coeffs: &[u64], var: char, star: bool) -> String {
    let mut out = String::new();
    for (deg, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        if !out.is_empty() {
            out.push('+');
        }
        let mono = match deg {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{deg}"),
        };
        match (c, deg) {
            (_, 0) => out.push_str(&c.to_string()),
            (1, _) => out.push_str(&mono),
            _ if star => out.push_str(&format!("{c}*{mono}")),
            _ => out.push_str(&format!("{c}{mono}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
