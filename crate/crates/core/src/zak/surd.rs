use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use thiserror::Error;

use crate::xprec::Real;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurdError {
    #[error("quartic surd components must be positive")]
    NonPositive,
    #[error("quartic surd arithmetic overflowed 64-bit components")]
    Overflow,
    #[error("value is not of the form (u/v) w^(1/4)")]
    NotQuartic,
    #[error("cannot parse quartic surd `{0}`")]
    Parse(String),
}

/// Exact positive number `(u/v) · w^{1/4}` with `gcd(u, v) = 1` and `w`
/// free of fourth powers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuarticSurd {
    u: u64,
    v: u64,
    w: u64,
}

impl QuarticSurd {
    pub fn new(u: u64, v: u64, w: u64) -> Result<Self, SurdError> {
        if u == 0 || v == 0 || w == 0 {
            return Err(SurdError::NonPositive);
        }
        let (mut u, mut w) = (u, w);
        let mut p = 2u64;
        while let Some(p4) = p.checked_pow(4).filter(|p4| *p4 <= w) {
            while w % p4 == 0 {
                w /= p4;
                u = u.checked_mul(p).ok_or(SurdError::Overflow)?;
            }
            p += 1;
        }
        let g = u.gcd(&v);
        Ok(QuarticSurd { u: u / g, v: v / g, w })
    }

    pub fn integer(n: u64) -> Result<Self, SurdError> {
        QuarticSurd::new(n, 1, 1)
    }

    pub fn ratio(u: u64, v: u64) -> Result<Self, SurdError> {
        QuarticSurd::new(u, v, 1)
    }

    pub fn sqrt(n: u64) -> Result<Self, SurdError> {
        QuarticSurd::new(1, 1, n.checked_mul(n).ok_or(SurdError::Overflow)?)
    }

    pub fn quarter_root(n: u64) -> Result<Self, SurdError> {
        QuarticSurd::new(1, 1, n)
    }

    /// `n^{k/4}` for any integer `k`.
    pub fn pow_quarters(n: u64, k: i32) -> Result<Self, SurdError> {
        if k < 0 {
            return Ok(QuarticSurd::pow_quarters(n, -k)?.recip()?);
        }
        let k = k as u32;
        let u = n.checked_pow(k / 4).ok_or(SurdError::Overflow)?;
        let w = n.checked_pow(k % 4).ok_or(SurdError::Overflow)?;
        QuarticSurd::new(u, 1, w)
    }

    pub fn parts(self) -> (u64, u64, u64) {
        (self.u, self.v, self.w)
    }

    /// `1/((u/v) w^{1/4}) = (v/(u w)) (w³)^{1/4}`.
    pub fn recip(self) -> Result<Self, SurdError> {
        let uw = self.u.checked_mul(self.w).ok_or(SurdError::Overflow)?;
        let w3 = self.w.checked_pow(3).ok_or(SurdError::Overflow)?;
        QuarticSurd::new(self.v, uw, w3)
    }

    pub fn mul(self, o: Self) -> Result<Self, SurdError> {
        let g1 = self.u.gcd(&o.v);
        let g2 = o.u.gcd(&self.v);
        let u = (self.u / g1)
            .checked_mul(o.u / g2)
            .ok_or(SurdError::Overflow)?;
        let v = (self.v / g2)
            .checked_mul(o.v / g1)
            .ok_or(SurdError::Overflow)?;
        let w = self.w.checked_mul(o.w).ok_or(SurdError::Overflow)?;
        QuarticSurd::new(u, v, w)
    }

    pub fn div(self, o: Self) -> Result<Self, SurdError> {
        self.mul(o.recip()?)
    }

    pub fn to_real<T: Real>(self) -> T {
        let r = T::from_i64(self.u as i64) / T::from_i64(self.v as i64);
        if self.w == 1 {
            r
        } else {
            r * T::quarter_root(self.w)
        }
    }

    pub fn to_f64(self) -> f64 {
        self.to_real::<f64>()
    }
}

impl fmt::Display for QuarticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let square_root = (1..=self.w)
            .take_while(|r| r * r <= self.w)
            .find(|r| r * r == self.w);
        let radical = match (self.w, square_root) {
            (1, _) => None,
            (_, Some(r)) => Some(format!("sqrt({r})")),
            (w, None) => Some(format!("{w}^(1/4)")),
        };
        match (self.u, self.v, radical) {
            (u, 1, None) => write!(f, "{u}"),
            (u, v, None) => write!(f, "{u}/{v}"),
            (1, 1, Some(r)) => write!(f, "{r}"),
            (u, 1, Some(r)) => write!(f, "{u}*{r}"),
            (u, v, Some(r)) => write!(f, "{u}/{v}*{r}"),
        }
    }
}

impl FromStr for QuarticSurd {
    type Err = SurdError;

    /// Products and quotients of integers, `sqrt(n)`, `n^k` and `n^(k/d)`
    /// with `d` dividing 4, with optional parentheses.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = Parser {
            src: compact.as_bytes(),
            pos: 0,
        };
        let value = p.expr();
        match value {
            Some(v) if p.pos == p.src.len() => v,
            _ => Err(SurdError::Parse(s.to_string())),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.src[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Option<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()?
            .parse()
            .ok()
    }

    fn signed_int(&mut self) -> Option<i64> {
        let neg = self.eat("-");
        let n = self.int()? as i64;
        Some(if neg { -n } else { n })
    }

    fn expr(&mut self) -> Option<Result<QuarticSurd, SurdError>> {
        let mut acc = self.factor()?;
        loop {
            if self.eat("*") {
                let rhs = self.factor()?;
                acc = acc.and_then(|a| rhs.and_then(|b| a.mul(b)));
            } else if self.eat("/") {
                let rhs = self.factor()?;
                acc = acc.and_then(|a| rhs.and_then(|b| a.div(b)));
            } else {
                return Some(acc);
            }
        }
    }

    fn factor(&mut self) -> Option<Result<QuarticSurd, SurdError>> {
        if self.eat("sqrt(") {
            let inner = self.expr()?;
            if !self.eat(")") {
                return None;
            }
            return Some(inner.and_then(|x| {
                // sqrt((u/v) w^{1/4}) = u^{2/4} v^{-2/4} w^{1/8}
                let (u, v, w) = x.parts();
                let r = (1..=w)
                    .take_while(|r| r * r <= w)
                    .find(|r| r * r == w)
                    .ok_or(SurdError::NotQuartic)?;
                QuarticSurd::pow_quarters(u, 2)?
                    .mul(QuarticSurd::pow_quarters(r, 1)?)?
                    .div(QuarticSurd::pow_quarters(v, 2)?)
            }));
        }
        if self.eat("(") {
            let inner = self.expr()?;
            return self.eat(")").then_some(inner);
        }
        let base = self.int()?;
        if base == 0 {
            return Some(Err(SurdError::NonPositive));
        }
        if !self.eat("^") {
            return Some(QuarticSurd::integer(base));
        }
        let (k, d) = if self.eat("(") {
            let k = self.signed_int()?;
            let d = if self.eat("/") { self.int()? as i64 } else { 1 };
            if !self.eat(")") {
                return None;
            }
            (k, d)
        } else {
            (self.signed_int()?, 1)
        };
        if d == 0 || 4 % d != 0 {
            return None;
        }
        let quarters = i32::try_from(k * (4 / d)).ok()?;
        Some(QuarticSurd::pow_quarters(base, quarters))
    }
}
