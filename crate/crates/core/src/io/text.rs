//! Text form of mixed polynomials.
//!
//! ```text
//! poly   := ['+'|'-'] term (('+'|'-') term)*
//! term   := coeff ['*' factor ('*' factor)*] | factor ('*' factor)*
//! factor := ('z1'|'z2'|'zb1'|'zb2') ['^' uint]
//! coeff  := float | '(' float [('+'|'-') float 'i'] ')'
//! ```
//!
//! `zb1` stands for the conjugate `z̄1`. Serialization prints coefficients in
//! shortest round-trip form so `parse_poly(serialize_poly(f)) == f`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mixed_poly::{MixedPolynomial, MixedTerm};
use crate::orbit::{OrientedOrbit, Sign};

pub const MAX_EXPONENT: u64 = 1_000_000;

pub fn parse_poly(text: &str) -> Result<MixedPolynomial> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let mut terms = Vec::new();
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("empty polynomial"));
    }
    let mut sign = 1.0;
    if let Some(b @ (b'+' | b'-')) = p.peek() {
        sign = if b == b'-' { -1.0 } else { 1.0 };
        p.pos += 1;
    }
    loop {
        let mut term = p.term()?;
        term.coeff *= sign;
        terms.push(term);
        p.skip_ws();
        match p.peek() {
            None => break,
            Some(b'+') => sign = 1.0,
            Some(b'-') => sign = -1.0,
            Some(_) => return Err(p.error("expected '+' or '-'")),
        }
        p.pos += 1;
    }
    Ok(MixedPolynomial::canonicalize(terms))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::SyntaxError { offset: self.pos, message: message.to_string() }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\n' | b'\r')) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn term(&mut self) -> Result<MixedTerm> {
        self.skip_ws();
        let mut coeff = Complex64::new(1.0, 0.0);
        let mut exps = [0u32; 4];
        let mut need_factor = true;
        match self.peek() {
            Some(b'(') => {
                coeff = self.complex()?;
                if !self.eat(b'*') {
                    return Ok(MixedTerm::new(coeff, [0, 0], [0, 0]));
                }
            }
            Some(b'0'..=b'9' | b'.') => {
                coeff = Complex64::new(self.float()?, 0.0);
                if !self.eat(b'*') {
                    return Ok(MixedTerm::new(coeff, [0, 0], [0, 0]));
                }
            }
            _ => {}
        }
        while need_factor {
            self.factor(&mut exps)?;
            need_factor = self.eat(b'*');
        }
        Ok(MixedTerm::new(coeff, [exps[0], exps[1]], [exps[2], exps[3]]))
    }

    fn factor(&mut self, exps: &mut [u32; 4]) -> Result<()> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let (slot, len) = if rest.starts_with(b"zb1") {
            (2, 3)
        } else if rest.starts_with(b"zb2") {
            (3, 3)
        } else if rest.starts_with(b"z1") {
            (0, 2)
        } else if rest.starts_with(b"z2") {
            (1, 2)
        } else {
            return Err(self.error("expected a factor z1, z2, zb1 or zb2"));
        };
        self.pos += len;
        let mut e = 1u64;
        if self.eat(b'^') {
            self.skip_ws();
            e = self.uint()?;
        }
        let total = exps[slot] as u64 + e;
        if total > MAX_EXPONENT {
            return Err(Error::ExponentOverflow(total));
        }
        exps[slot] = total as u32;
        Ok(())
    }

    fn uint(&mut self) -> Result<u64> {
        let start = self.pos;
        let mut v: u64 = 0;
        while let Some(d @ b'0'..=b'9') = self.peek() {
            v = v.saturating_mul(10).saturating_add((d - b'0') as u64);
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected an unsigned integer"));
        }
        if v > MAX_EXPONENT {
            return Err(Error::ExponentOverflow(v));
        }
        Ok(v)
    }

    fn float(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some(b'+' | b'-')) {
            self.pos += 1;
        }
        let digits = |p: &mut Self| {
            let s = p.pos;
            while matches!(p.peek(), Some(b'0'..=b'9')) {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.peek() == Some(b'.') {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            self.pos = start;
            return Err(self.error("expected a number"));
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = save;
            }
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        s.parse::<f64>().map_err(|_| Error::SyntaxError {
            offset: start,
            message: format!("invalid number '{s}'"),
        })
    }

    fn complex(&mut self) -> Result<Complex64> {
        if !self.eat(b'(') {
            return Err(self.error("expected '('"));
        }
        let re = self.float()?;
        self.skip_ws();
        let mut im = 0.0;
        if let Some(b @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            self.skip_ws();
            let mag = self.float()?;
            im = if b == b'-' { -mag } else { mag };
            if !self.eat(b'i') {
                return Err(self.error("expected 'i'"));
            }
        }
        if !self.eat(b')') {
            return Err(self.error("expected ')'"));
        }
        Ok(Complex64::new(re, im))
    }
}

fn fmt_float(x: f64) -> String {
    format!("{x:?}")
}

fn factors(t: &MixedTerm) -> Vec<String> {
    let names = ["z1", "z2", "zb1", "zb2"];
    let exps = [t.nu[0], t.nu[1], t.mu[0], t.mu[1]];
    names
        .iter()
        .zip(exps)
        .filter(|(_, e)| *e > 0)
        .map(|(n, e)| if e == 1 { n.to_string() } else { format!("{n}^{e}") })
        .collect()
}

/// Canonical text; the zero polynomial prints as `0`.
pub fn serialize_poly(f: &MixedPolynomial) -> String {
    if f.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, t) in f.terms().iter().enumerate() {
        let fac = factors(t).join("*");
        let (negative, coeff) = if t.coeff.im == 0.0 {
            let neg = t.coeff.re.is_sign_negative();
            let mag = t.coeff.re.abs();
            let text = if mag == 1.0 && !fac.is_empty() { String::new() } else { fmt_float(mag) };
            (neg, text)
        } else {
            let im = t.coeff.im;
            let op = if im.is_sign_negative() { '-' } else { '+' };
            (false, format!("({}{op}{}i)", fmt_float(t.coeff.re), fmt_float(im.abs())))
        };
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&coeff);
        if !coeff.is_empty() && !fac.is_empty() {
            out.push('*');
        }
        out.push_str(&fac);
    }
    out
}

/// Complex literal `a`, `bi`, `a+bi` or `a-bi`, optionally in parentheses.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let lead = text.len() - text.trim_start().len();
    let mut s = text.trim();
    let mut offset = lead;
    if s.starts_with('(') && s.ends_with(')') {
        s = s[1..s.len() - 1].trim();
        offset += 1;
    }
    let bad = |at: usize| Error::SyntaxError {
        offset: offset + at,
        message: format!("invalid complex literal '{}'", text.trim()),
    };
    let num = |part: &str, at: usize| -> Result<f64> {
        match part {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => part.parse::<f64>().map_err(|_| bad(at)),
        }
    };
    if s.is_empty() {
        return Err(bad(0));
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad(0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad(0))?;
            Ok(Complex64::new(re, num(&body[k..], k)?))
        }
        None => Ok(Complex64::new(0.0, num(body, 0)?)),
    }
}

/// Orbit list `u:+,u:-,…` with `u` a complex literal.
pub fn parse_orbits(text: &str) -> Result<Vec<OrientedOrbit>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for item in text.split(',') {
        let (u, sign) = item.rsplit_once(':').ok_or_else(|| Error::SyntaxError {
            offset: offset + item.len(),
            message: "expected ':' followed by a sign".into(),
        })?;
        let sign = match sign.trim() {
            "+" => Sign::Positive,
            "-" | "−" => Sign::Negative,
            _ => {
                return Err(Error::SyntaxError {
                    offset: offset + u.len() + 1,
                    message: "sign must be '+' or '-'".into(),
                })
            }
        };
        let u = parse_complex(u).map_err(|e| match e {
            Error::SyntaxError { offset: o, message } => Error::SyntaxError { offset: offset + o, message },
            other => other,
        })?;
        out.push(OrientedOrbit::new(u, sign));
        offset += item.len() + 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_examples() {
        let f = parse_poly("z1^3 - z2^2").unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.coeff([0, 2], [0, 0]), Complex64::new(-1.0, 0.0));

        let fam = parse_poly("z1^6*zb1^3 - 2*z2^4*zb2^2 + (-3+0i)*z2^4*zb1^3").unwrap();
        assert_eq!(fam.len(), 3);
        assert_eq!(fam.coeff([6, 0], [3, 0]), Complex64::new(1.0, 0.0));
        assert_eq!(fam.coeff([0, 4], [0, 2]), Complex64::new(-2.0, 0.0));
        assert_eq!(fam.coeff([0, 4], [3, 0]), Complex64::new(-3.0, 0.0));

        let z = parse_poly("(0.5-1.5e-1i)*z1*zb2 + 2").unwrap();
        assert_eq!(z.coeff([1, 0], [0, 1]), Complex64::new(0.5, -0.15));
        assert_eq!(z.coeff([0, 0], [0, 0]), Complex64::new(2.0, 0.0));
    }

    #[test]
    fn complex_and_orbit_literals() {
        let c = Complex64::new;
        assert_eq!(parse_complex("-3.5").unwrap(), c(-3.5, 0.0));
        assert_eq!(parse_complex("0.3-0.2i").unwrap(), c(0.3, -0.2));
        assert_eq!(parse_complex("(1e-3+2i)").unwrap(), c(1e-3, 2.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("2.5i").unwrap(), c(0.0, 2.5));
        assert_eq!(parse_complex("1-2e-1i").unwrap(), c(1.0, -0.2));
        assert!(parse_complex("abc").is_err());
        let o = parse_orbits("0.3+0.2i:+, -0.4:-").unwrap();
        assert_eq!(o.len(), 2);
        assert_eq!(o[0], OrientedOrbit::positive(c(0.3, 0.2)));
        assert_eq!(o[1], OrientedOrbit::negative(c(-0.4, 0.0)));
        assert!(matches!(parse_orbits("0.3:+,0.5"), Err(Error::SyntaxError { .. })));
        assert!(matches!(parse_orbits("0.3:*"), Err(Error::SyntaxError { offset: 4, .. })));
    }

    #[test]
    fn syntax_errors() {
        assert_eq!(
            parse_poly("z1^^2").unwrap_err(),
            Error::SyntaxError { offset: 3, message: "expected an unsigned integer".into() }
        );
        assert!(matches!(parse_poly("z3"), Err(Error::SyntaxError { offset: 0, .. })));
        assert!(matches!(parse_poly(""), Err(Error::SyntaxError { .. })));
        assert!(matches!(parse_poly("z1 z2"), Err(Error::SyntaxError { offset: 3, .. })));
        assert_eq!(parse_poly("z1^2000000"), Err(Error::ExponentOverflow(2_000_000)));
    }

    #[test]
    fn serializes_readably() {
        let f = parse_poly("z1^3 - 0.5*z2^2 + (1+2i)*zb1*zb2").unwrap();
        assert_eq!(serialize_poly(&f), "z1^3 - 0.5*z2^2 + (1.0+2.0i)*zb1*zb2");
        assert_eq!(serialize_poly(&MixedPolynomial::zero()), "0");
    }

    proptest! {
        #[test]
        fn round_trip(terms in proptest::collection::vec(
            ((-1e3..1e3f64), (-1e3..1e3f64), 0u32..5, 0u32..5, 0u32..5, 0u32..5, proptest::bool::ANY), 1..6)) {
            let f = MixedPolynomial::canonicalize(terms.into_iter().map(|(re, im, a, b, c, d, real)| {
                MixedTerm::new(Complex64::new(re, if real { 0.0 } else { im }), [a, b], [c, d])
            }));
            prop_assume!(!f.is_empty());
            prop_assert_eq!(parse_poly(&serialize_poly(&f)).unwrap(), f);
        }
    }
}
