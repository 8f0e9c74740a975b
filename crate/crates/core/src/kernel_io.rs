//! Plain-text kernel files.
//!
//! ```text
//! q d
//! i_1 ... i_q re im
//! ```
//!
//! Indices are 1-based and only non-zero coefficients need to be listed.
//! Blank lines and lines starting with `#` are ignored. A repeated index
//! tuple is an error.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::scalar::Scalar;

/// Coefficient types that can be read from and written to kernel files.
pub trait TextCoefficient: Scalar {
    fn parse_pair(re: &str, im: &str) -> std::result::Result<Self, String>;
    fn format_pair(&self) -> String;
}

impl TextCoefficient for Complex64 {
    fn parse_pair(re: &str, im: &str) -> std::result::Result<Self, String> {
        let re = f64::from_str(re).map_err(|e| format!("bad real part {re:?}: {e}"))?;
        let im = f64::from_str(im).map_err(|e| format!("bad imaginary part {im:?}: {e}"))?;
        if !re.is_finite() || !im.is_finite() {
            return Err("coefficients must be finite".into());
        }
        Ok(Complex64::new(re, im))
    }

    fn format_pair(&self) -> String {
        format!("{:.16e} {:.16e}", self.re, self.im)
    }
}

impl TextCoefficient for BigRational {
    /// Accepts integers, decimals (`-0.125`, `1e-3`) and fractions (`7/3`);
    /// the imaginary part must be zero.
    fn parse_pair(re: &str, im: &str) -> std::result::Result<Self, String> {
        let im = parse_rational(im)?;
        if !im.is_zero() {
            return Err(format!("exact mode needs real coefficients, got imaginary part {im}"));
        }
        parse_rational(re)
    }

    fn format_pair(&self) -> String {
        format!("{self} 0")
    }
}

/// Parses an exact rational from `a/b` or a decimal literal with optional exponent.
pub fn parse_rational(s: &str) -> std::result::Result<BigRational, String> {
    let bad = || format!("cannot read {s:?} as an exact rational");
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(BigRational::new(num, den));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(BigInt::from_str(&all_digits).map_err(|_| bad())?);
    let scale = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    let factor = (0..scale.unsigned_abs()).fold(BigRational::one(), |acc, _| acc * ten.clone());
    value = if scale >= 0 { value * factor } else { value / factor };
    Ok(if negative { -value } else { value })
}

fn parse_usize(token: &str, line: usize, what: &str) -> Result<usize> {
    token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("expected {what}, found {token:?}"),
    })
}

pub fn parse_kernel<T: TextCoefficient>(text: &str) -> Result<Kernel<T>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (header_line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing header `q d`".into(),
    })?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 2 {
        return Err(Error::Parse {
            line: header_line,
            message: format!("header must be `q d`, found {header:?}"),
        });
    }
    let order = parse_usize(head[0], header_line, "order q")?;
    let dim = parse_usize(head[1], header_line, "dimension d")?;
    if dim == 0 {
        return Err(Error::Parse {
            line: header_line,
            message: "dimension must be positive".into(),
        });
    }

    let mut seen = HashSet::new();
    let mut entries = Vec::new();
    for (line, body) in lines {
        let tokens: Vec<&str> = body.split_whitespace().collect();
        if tokens.len() != order + 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected {} indices and `re im`, found {} fields", order, tokens.len()),
            });
        }
        let mut idx = Vec::with_capacity(order);
        for tok in &tokens[..order] {
            let i = parse_usize(tok, line, "a 1-based index")?;
            if i == 0 || i > dim {
                return Err(Error::Parse {
                    line,
                    message: format!("index {i} outside 1..={dim}"),
                });
            }
            idx.push(i - 1);
        }
        if !seen.insert(idx.clone()) {
            return Err(Error::Parse {
                line,
                message: "duplicate index tuple".into(),
            });
        }
        let value = T::parse_pair(tokens[order], tokens[order + 1])
            .map_err(|message| Error::Parse { line, message })?;
        entries.push((idx, value));
    }
    Kernel::from_entries(order, dim, entries).map_err(|e| Error::Parse {
        line: header_line,
        message: e.to_string(),
    })
}

pub fn format_kernel<T: TextCoefficient>(f: &Kernel<T>) -> String {
    let mut out = format!("{} {}\n", f.order(), f.dim());
    for (idx, v) in f.iter_indexed() {
        for i in idx {
            write!(out, "{} ", i + 1).unwrap();
        }
        writeln!(out, "{}", v.format_pair()).unwrap();
    }
    out
}
