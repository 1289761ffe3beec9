use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ParsedInput;
use crate::connection::{ConnectionSystem, LaurentPoly};
use crate::exact::GaussianRational;
use crate::formal::ScalarOperator;

pub fn print_canonical(x: &ParsedInput) -> String {
    match x {
        ParsedInput::System(s) => print_system(s),
        ParsedInput::Operator(l) => print_operator(l),
    }
}

pub fn print_system(s: &ConnectionSystem) -> String {
    let r = s.rank();
    let mut out = format!("rank {r}\nmatrix");
    for i in 0..r {
        let row: Vec<String> = (0..r).map(|j| print_laurent(s.entry(i, j))).collect();
        out.push_str(&format!("\n[ {} ]", row.join(", ")));
    }
    out
}

/// Terms in decreasing power of `d`. Single-term coefficients print as
/// `c*z^e*d^j`; a multi-term coefficient of `d^j`, `j ≥ 1`, is parenthesised;
/// the `d^0` coefficient prints inline.
pub fn print_operator(l: &ScalarOperator) -> String {
    let mut pieces: Vec<(bool, String)> = Vec::new();
    for j in (0..=l.order()).rev() {
        let a = l.coeff(j);
        if a.is_zero() {
            continue;
        }
        let d = match j {
            0 => None,
            1 => Some("d".to_string()),
            _ => Some(format!("d^{j}")),
        };
        match d {
            None => pieces.extend(laurent_pieces(a)),
            Some(d) if a.num_terms() == 1 => {
                let (e, c) = a.terms().next().expect("one term");
                let mono = match z_monomial(e) {
                    Some(z) => format!("{z}*{d}"),
                    None => d,
                };
                pieces.push(term(c, Some(&mono)));
            }
            Some(d) => pieces.push((false, format!("({})*{d}", print_laurent(a)))),
        }
    }
    format!("operator {}", join(&pieces))
}

pub fn print_laurent(p: &LaurentPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    join(&laurent_pieces(p))
}

fn laurent_pieces(p: &LaurentPoly) -> Vec<(bool, String)> {
    p.terms().map(|(e, c)| term(c, z_monomial(e).as_deref())).collect()
}

fn z_monomial(e: i64) -> Option<String> {
    match e {
        0 => None,
        1 => Some("z".into()),
        _ => Some(format!("z^{e}")),
    }
}

fn join(pieces: &[(bool, String)]) -> String {
    let mut out = String::new();
    for (k, (neg, body)) in pieces.iter().enumerate() {
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(body);
    }
    out
}

/// A term as `(negative, magnitude text)`: the sign is pulled out for real
/// and purely imaginary coefficients; general complex ones keep it inside.
fn term(c: &GaussianRational, mono: Option<&str>) -> (bool, String) {
    let (neg, body) = if c.im.is_zero() {
        (c.re.is_negative(), real_coeff(&c.re.abs(), mono.is_some()))
    } else if c.re.is_zero() {
        (c.im.is_negative(), imag_coeff(&c.im.abs(), mono.is_some()))
    } else {
        let sign = if c.im.is_negative() { "-" } else { "+" };
        let im = imag_coeff(&c.im.abs(), false);
        (false, format!("({} {sign} {im})", rat(&c.re)))
    };
    match mono {
        None => (neg, body),
        Some(m) if body.is_empty() => (neg, m.to_string()),
        Some(m) => (neg, format!("{body}*{m}")),
    }
}

/// Magnitude of a real coefficient; empty when it is 1 and a monomial follows.
fn real_coeff(r: &BigRational, followed: bool) -> String {
    if followed && r.is_one() {
        String::new()
    } else if followed && !r.is_integer() {
        format!("({})", rat(r))
    } else {
        rat(r)
    }
}

fn imag_coeff(r: &BigRational, followed: bool) -> String {
    if r.is_one() {
        "i".into()
    } else if followed && !r.is_integer() {
        format!("({}i)", rat(r))
    } else {
        format!("{}i", rat(r))
    }
}

fn rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
