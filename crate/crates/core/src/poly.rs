//! Sparse multivariate polynomials over ℚ and a small parser for them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Exponents = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponents, BigRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Poly {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Poly {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Poly {
        Poly::constant(nvars, BigRational::one())
    }

    /// The variable `x_{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Poly {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Poly::monomial(e, BigRational::one())
    }

    pub fn monomial(exponents: Exponents, coeff: BigRational) -> Poly {
        let mut p = Poly::zero(exponents.len());
        if !coeff.is_zero() {
            p.terms.insert(exponents, coeff);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Variables occurring in the single term of a monomial.
    pub fn support(exponents: &[u32]) -> BTreeSet<usize> {
        exponents.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, _)| i).collect()
    }

    pub fn degree_of(exponents: &[u32]) -> u32 {
        exponents.iter().sum()
    }

    /// Lowest total degree of a term, `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|e| Poly::degree_of(e)).min()
    }

    /// The lowest-degree homogeneous part.
    pub fn initial_form(&self) -> Poly {
        let Some(d) = self.order() else { return self.clone() };
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(e, _)| Poly::degree_of(e) == d).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one(self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Sets the variables in `vars` to zero.
    pub fn vanish(&self, vars: &BTreeSet<usize>) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(e, _)| vars.iter().all(|&v| e[v] == 0)).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    /// Pullback to the chart `x_c ≠ 0` of the blowup of `V(x_j : j ∈ center)`,
    /// where `x_j = x_j' x_c` for the other center coordinates. Returns the
    /// total transform, the power of `x_c` it contains, and the strict transform.
    pub fn blowup_chart(&self, center: &BTreeSet<usize>, chart: usize) -> Result<(Poly, u32, Poly)> {
        if !center.contains(&chart) {
            return Err(Error::Invalid(format!("chart variable x{} is not in the center", chart + 1)));
        }
        let mut total = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut f = e.clone();
            f[chart] = center.iter().map(|&j| e[j]).sum();
            total = total + Poly::monomial(f, c.clone());
        }
        let power = total.terms.keys().map(|e| e[chart]).min().unwrap_or(0);
        let strict = Poly {
            nvars: self.nvars,
            terms: total
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut f = e.clone();
                    f[chart] -= power;
                    (f, c.clone())
                })
                .collect(),
        };
        Ok((total, power, strict))
    }

    pub fn parse(text: &str, nvars: usize) -> Result<Poly> {
        let mut p = Parser { src: text.as_bytes(), pos: 0, nvars };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected input"));
        }
        Ok(out)
    }

    fn clean(mut self) -> Poly {
        self.terms.retain(|_, c| !c.is_zero());
        self
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        for (e, c) in rhs.terms {
            *self.terms.entry(e).or_insert_with(BigRational::zero) += c;
        }
        self.clean()
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(mut self) -> Poly {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        self + (-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                let e: Exponents = a.iter().zip(b).map(|(p, q)| p + q).collect();
                *out.terms.entry(e).or_insert_with(BigRational::zero) += x * y;
            }
        }
        out.clean()
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, p)| **p > 0)
                .map(|(i, p)| if *p == 1 { format!("x{}", i + 1) } else { format!("x{}^{p}", i + 1) })
                .collect();
            if vars.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{a}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at column {}", self.pos + 1))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digits parse"))
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut negate = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            negate = true;
        } else if self.peek() == Some(b'+') {
            self.pos += 1;
        }
        let first = self.term()?;
        let mut acc = if negate { -first } else { first };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                inner
            }
            Some(b'x') => {
                self.pos += 1;
                let idx = self.number()?;
                let i: usize = idx.try_into().map_err(|_| self.error("variable index too large"))?;
                if i == 0 || i > self.nvars {
                    return Err(self.error(&format!("variable x{i} outside x1..x{}", self.nvars)));
                }
                Poly::var(self.nvars, i - 1)
            }
            Some(c) if c.is_ascii_digit() => Poly::constant(self.nvars, BigRational::from_integer(self.number()?)),
            _ => return Err(self.error("expected a number, variable or '('")),
        };
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let k = self.number()?;
            let k: u32 = k.try_into().map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }
}
