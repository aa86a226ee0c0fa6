//! Text forms for polynomials and field elements: the CLI grammar
//! ("x^2+5", "-3*x + 1/2") and the matching formatters used in JSON
//! records.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::nf::{FieldElement, NumberField};
use crate::poly::{IntPoly, RatPoly};

/// Parse a univariate polynomial in x with rational coefficients:
/// sums of terms `c`, `x`, `c*x^k`, `x^k`, `c x^k`; c an integer or
/// fraction a/b.
pub fn parse_rat_poly(s: &str) -> Result<RatPoly> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    // Split into signed terms.
    let mut terms: Vec<(BigRational, usize)> = Vec::new();
    let bytes = compact.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let mut sign = 1i64;
        while i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
            if bytes[i] == b'-' {
                sign = -sign;
            }
            i += 1;
        }
        let start = i;
        while i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
            // A '-' directly after '^' or '/' would be part of the term,
            // but exponents and denominators are positive here.
            i += 1;
        }
        if start == i {
            return Err(Error::Parse(format!("dangling sign in '{s}'")));
        }
        let term = &compact[start..i];
        let (coef, exp) = parse_term(term)?;
        let coef = if sign < 0 { -coef } else { coef };
        terms.push((coef, exp));
    }
    let deg = terms.iter().map(|(_, e)| *e).max().unwrap_or(0);
    let mut coeffs = vec![BigRational::zero(); deg + 1];
    for (c, e) in terms {
        coeffs[e] += c;
    }
    Ok(RatPoly::new(coeffs))
}

fn parse_term(t: &str) -> Result<(BigRational, usize)> {
    let bad = || Error::Parse(format!("cannot parse term '{t}'"));
    if let Some(xpos) = t.find('x') {
        let coef_str = t[..xpos].trim_end_matches('*');
        let coef = if coef_str.is_empty() {
            BigRational::one()
        } else {
            parse_rational(coef_str).ok_or_else(bad)?
        };
        let rest = &t[xpos + 1..];
        let exp = if rest.is_empty() {
            1usize
        } else if let Some(e) = rest.strip_prefix('^') {
            e.parse::<usize>().map_err(|_| bad())?
        } else {
            return Err(bad());
        };
        Ok((coef, exp))
    } else {
        Ok((parse_rational(t).ok_or_else(bad)?, 0))
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    if let Some((a, b)) = s.split_once('/') {
        let num = BigInt::from_str(a).ok()?;
        let den = BigInt::from_str(b).ok()?;
        if den.is_zero() {
            return None;
        }
        Some(BigRational::new(num, den))
    } else {
        Some(BigRational::from_integer(BigInt::from_str(s).ok()?))
    }
}

/// Parse a monic integer polynomial (the defining polynomial of a field).
pub fn parse_int_poly(s: &str) -> Result<IntPoly> {
    let rp = parse_rat_poly(s)?;
    let mut coeffs = Vec::with_capacity(rp.coeffs.len());
    for c in &rp.coeffs {
        if !c.is_integer() {
            return Err(Error::Parse(format!(
                "defining polynomial must have integer coefficients: '{s}'"
            )));
        }
        coeffs.push(c.to_integer());
    }
    Ok(IntPoly::new(coeffs))
}

/// Parse an element of K given as a polynomial in x (the class of the
/// defining root), e.g. "-1", "5", "x+2", "1/2*x^3 - 3".
pub fn parse_element(k: &NumberField, s: &str) -> Result<FieldElement> {
    let rp = parse_rat_poly(s)?;
    if rp.coeffs.len() > k.degree {
        return Err(Error::Parse(format!(
            "element degree exceeds field degree {}",
            k.degree
        )));
    }
    let mut coords = vec![BigRational::zero(); k.degree];
    for (i, c) in rp.coeffs.iter().enumerate() {
        coords[i] = c.clone();
    }
    Ok(k.from_power_coords(&coords))
}

/// Canonical text form of an integer polynomial, matching the parser.
pub fn format_int_poly(p: &IntPoly) -> String {
    let mut out = String::new();
    for (e, c) in p.coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else if c.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let show_coef = !mag.is_one() || e == 0;
        if show_coef {
            out.push_str(&mag.to_string());
        }
        if e > 0 {
            if show_coef {
                out.push('*');
            }
            out.push('x');
            if e > 1 {
                out.push_str(&format!("^{e}"));
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Canonical text form of a field element in power-basis coordinates.
pub fn format_element(k: &NumberField, x: &FieldElement) -> String {
    let coords = k.to_power_coords(x);
    let mut out = String::new();
    for (e, c) in coords.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else if c.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let show_coef = !mag.is_one() || e == 0;
        if show_coef {
            out.push_str(&mag.to_string());
        }
        if e > 0 {
            if show_coef {
                out.push('*');
            }
            out.push('x');
            if e > 1 {
                out.push_str(&format!("^{e}"));
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
