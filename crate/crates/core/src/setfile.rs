//! Plain-text set files: one Gaussian rational per line.
//!
//! ```text
//! rat  ::= ['-'] digits ['/' digits]
//! term ::= rat | rat 'i' | 'i' | '-i'
//! line ::= term | rat ('+' | '-') (rat 'i' | 'i')
//! ```
//!
//! `#` starts a comment and blank lines are ignored. Whitespace inside a
//! line is not significant.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{GaussianRational, Rational};
use crate::setcore::ComplexSet;

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn at_end(&self) -> bool {
        self.pos == self.s.len()
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.s[start..self.pos]).ok()?.parse().ok()
    }

    fn rat(&mut self) -> std::result::Result<Rational, String> {
        let neg = self.eat(b'-');
        let num = self
            .digits()
            .ok_or_else(|| format!("expected digits at column {}", self.pos + 1))?;
        let den = if self.eat(b'/') {
            self.digits()
                .ok_or_else(|| format!("expected denominator at column {}", self.pos + 1))?
        } else {
            BigInt::one()
        };
        if den.is_zero() {
            return Err("zero denominator".into());
        }
        let r = Rational::new(num, den);
        Ok(if neg { -r } else { r })
    }
}

/// Parse one element in set-file syntax.
pub fn parse_element(text: &str) -> std::result::Result<GaussianRational, String> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    match compact.as_str() {
        "" => return Err("empty element".into()),
        "i" => return Ok(GaussianRational::i()),
        "-i" => return Ok(-&GaussianRational::i()),
        _ => {}
    }
    let mut c = Cursor {
        s: compact.as_bytes(),
        pos: 0,
    };
    let first = c.rat()?;
    if c.at_end() {
        return Ok(GaussianRational::real(first));
    }
    if c.eat(b'i') {
        return if c.at_end() {
            Ok(GaussianRational::new(Rational::zero(), first))
        } else {
            Err(format!("unexpected text after 'i' at column {}", c.pos + 1))
        };
    }
    let negative = match c.peek() {
        Some(b'+') => false,
        Some(b'-') => true,
        _ => return Err(format!("expected '+', '-' or 'i' at column {}", c.pos + 1)),
    };
    c.pos += 1;
    let im = if c.peek() == Some(b'i') {
        Rational::one()
    } else {
        c.rat()?
    };
    if !c.eat(b'i') {
        return Err(format!("expected 'i' at column {}", c.pos + 1));
    }
    if !c.at_end() {
        return Err(format!("unexpected text at column {}", c.pos + 1));
    }
    Ok(GaussianRational::new(first, if negative { -im } else { im }))
}

/// Parse a whole set file; errors carry 1-based line numbers.
pub fn parse_set_file(text: &str) -> Result<ComplexSet> {
    let mut seen: HashMap<GaussianRational, usize> = HashMap::new();
    let mut elements = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let z = parse_element(body).map_err(|msg| Error::Parse { line, msg })?;
        if z.is_zero() {
            return Err(Error::Parse {
                line,
                msg: "0 is not allowed".into(),
            });
        }
        if let Some(prev) = seen.insert(z.clone(), line) {
            return Err(Error::Parse {
                line,
                msg: format!("duplicate of line {prev} ({z})"),
            });
        }
        elements.push(z);
    }
    if elements.is_empty() {
        return Err(Error::EmptySet);
    }
    ComplexSet::new(elements)
}

/// One canonical element per line, in canonical order.
pub fn format_set_file(a: &ComplexSet) -> String {
    let mut out = String::new();
    for z in a.elements() {
        out.push_str(&z.to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn gq(re: Rational, im: Rational) -> GaussianRational {
        GaussianRational::new(re, im)
    }

    #[test]
    fn grammar_cases() {
        let cases = [
            ("3", gq(int(3), int(0))),
            ("-1/2", gq(rat(-1, 2), int(0))),
            ("i", gq(int(0), int(1))),
            ("-i", gq(int(0), int(-1))),
            ("2/3i", gq(int(0), rat(2, 3))),
            ("-4i", gq(int(0), int(-4))),
            ("1+2i", gq(int(1), int(2))),
            ("1-i", gq(int(1), int(-1))),
            ("1/2+i", gq(rat(1, 2), int(1))),
            ("-3/4-5/6i", gq(rat(-3, 4), rat(-5, 6))),
            (" 1 + 2i ", gq(int(1), int(2))),
            ("4/2", gq(int(2), int(0))),
        ];
        for (text, want) in cases {
            assert_eq!(parse_element(text).unwrap(), want, "{text}");
        }
    }

    #[test]
    fn grammar_rejects() {
        for bad in [
            "", "x", "1/0", "1+", "1+2", "i2", "2ii", "1+2i3", "--1", "1/", "/2", "1+2j",
        ] {
            assert!(parse_element(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn file_with_comments() {
        let a = parse_set_file("# header\n1\n\n2+i  # trailing\n   \n-i\n").unwrap();
        assert_eq!(a.len(), 3);
    }

    #[test]
    fn file_errors_have_line_numbers() {
        match parse_set_file("1\n2\n1\n") {
            Err(Error::Parse { line: 3, msg }) => assert!(msg.contains("line 1")),
            other => panic!("{other:?}"),
        }
        match parse_set_file("1\n0\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_set_file("1\n0+0i\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_set_file("1\nabc\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_set_file("# nothing\n"), Err(Error::EmptySet)));
    }

    #[test]
    fn round_trip() {
        let a = parse_set_file("1/2-2/3i\n7\n-i\n3+i\n-5/7i\n").unwrap();
        assert_eq!(parse_set_file(&format_set_file(&a)).unwrap(), a);
    }
}
