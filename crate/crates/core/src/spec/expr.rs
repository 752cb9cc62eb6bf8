//! Arithmetic for matrix entries: numbers, `pi`, `+ - * / ^`, parentheses
//! and `cos`, `sin`, `sqrt`.

use crate::error::{Error, Result};

pub fn eval(src: &str) -> Result<f64> {
    let mut p = Parser { s: src.as_bytes(), pos: 0 };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Spec(format!(
            "bad expression `{}` at {}: {msg}",
            String::from_utf8_lossy(self.s),
            self.pos
        ))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<f64> {
        let mut v = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let r = self.term()?;
            v = if c == b'+' { v + r } else { v - r };
        }
        Ok(v)
    }

    fn term(&mut self) -> Result<f64> {
        let mut v = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let r = self.unary()?;
            v = if c == b'*' { v * r } else { v / r };
        }
        Ok(v)
    }

    fn unary(&mut self) -> Result<f64> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<f64> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.unary()?;
            return Ok(base.powf(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<f64> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let ident = std::str::from_utf8(&self.s[start..self.pos]).unwrap().to_string();
                if ident == "pi" {
                    return Ok(std::f64::consts::PI);
                }
                let f: fn(f64) -> f64 = match ident.as_str() {
                    "cos" => f64::cos,
                    "sin" => f64::sin,
                    "sqrt" => f64::sqrt,
                    _ => return Err(self.err(&format!("unknown name `{ident}`"))),
                };
                if self.peek() != Some(b'(') {
                    return Err(self.err("expected `(` after function name"));
                }
                Ok(f(self.atom()?))
            }
            _ => Err(self.err("expected a number, name or `(`")),
        }
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_digit() || self.s[self.pos] == b'.') {
            self.pos += 1;
        }
        if self.pos < self.s.len() && matches!(self.s[self.pos], b'e' | b'E') {
            self.pos += 1;
            if self.pos < self.s.len() && matches!(self.s[self.pos], b'+' | b'-') {
                self.pos += 1;
            }
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        text.parse().map_err(|_| self.err("malformed number"))
    }
}

#[cfg(test)]
mod tests {
    use super::eval;

    #[test]
    fn arithmetic() {
        assert_eq!(eval("1 + 2*3").unwrap(), 7.0);
        assert_eq!(eval("-2^2").unwrap(), -4.0);
        assert_eq!(eval("(1+1)^3/4").unwrap(), 2.0);
        assert_eq!(eval("1.5e2").unwrap(), 150.0);
        assert!((eval("cos(2*pi/3)").unwrap() + 0.5).abs() < 1e-15);
        assert!((eval("sqrt(3)/2 - sin(pi/3)").unwrap()).abs() < 1e-15);
    }

    #[test]
    fn rejects_junk() {
        assert!(eval("cos 1").is_err());
        assert!(eval("1 +").is_err());
        assert!(eval("tan(1)").is_err());
        assert!(eval("2 3").is_err());
    }
}
