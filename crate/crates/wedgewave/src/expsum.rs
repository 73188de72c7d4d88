//! Finite sums Σ z·x^p·e^{−a x} on the half-line, closed under +, ·, d/dx and
//! conjugation, with exact integration over (0, ∞).

use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coeff: C64,
    pub power: u32,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExpSum {
    terms: Vec<Term>,
}

/// Rates that differ only by rounding (e.g. (a+b)+c vs a+(b+c)) are one rate.
fn same_rate(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-14 * a.abs().max(b.abs())
}

impl ExpSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(coeff: C64, power: u32, rate: f64) -> Self {
        Self::from_terms(vec![Term { coeff, power, rate }])
    }

    pub fn exp(coeff: C64, rate: f64) -> Self {
        Self::term(coeff, 0, rate)
    }

    pub fn from_terms(terms: Vec<Term>) -> Self {
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.iter_mut().find(|o| o.power == t.power && same_rate(o.rate, t.rate)) {
                Some(o) => o.coeff += t.coeff,
                None => out.push(t),
            }
        }
        out.retain(|t| t.coeff != C64::new(0.0, 0.0));
        out.sort_by(|a, b| a.rate.total_cmp(&b.rate).then(a.power.cmp(&b.power)));
        Self { terms: out }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: f64) -> C64 {
        self.terms
            .iter()
            .map(|t| t.coeff * x.powi(t.power as i32) * (-t.rate * x).exp())
            .sum()
    }

    pub fn scale(&self, z: C64) -> Self {
        Self::from_terms(self.terms.iter().map(|t| Term { coeff: t.coeff * z, ..*t }).collect())
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn conj(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|t| Term { coeff: t.coeff.conj(), ..*t }).collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        let mut out = Vec::with_capacity(2 * self.terms.len());
        for t in &self.terms {
            if t.power > 0 {
                out.push(Term { coeff: t.coeff * t.power as f64, power: t.power - 1, rate: t.rate });
            }
            out.push(Term { coeff: -t.coeff * t.rate, ..*t });
        }
        Self::from_terms(out)
    }

    /// Largest coefficient modulus; zero for the empty sum.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.norm()).fold(0.0, f64::max)
    }

    pub fn integrate_halfline(&self) -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for t in &self.terms {
            if !(t.rate > 0.0) {
                return Err(Error::NotIntegrable { power: t.power, rate: t.rate });
            }
            // p! / a^{p+1}
            let mut v = 1.0 / t.rate;
            for j in 1..=t.power {
                v *= j as f64 / t.rate;
            }
            acc += t.coeff * v;
        }
        Ok(acc)
    }
}

pub fn integrate_halfline(s: &ExpSum) -> Result<C64> {
    s.integrate_halfline()
}

impl Add for &ExpSum {
    type Output = ExpSum;
    fn add(self, rhs: &ExpSum) -> ExpSum {
        ExpSum::from_terms(self.terms.iter().chain(rhs.terms.iter()).copied().collect())
    }
}

impl Sub for &ExpSum {
    type Output = ExpSum;
    fn sub(self, rhs: &ExpSum) -> ExpSum {
        self + &(-rhs)
    }
}

impl Neg for &ExpSum {
    type Output = ExpSum;
    fn neg(self) -> ExpSum {
        ExpSum { terms: self.terms.iter().map(|t| Term { coeff: -t.coeff, ..*t }).collect() }
    }
}

impl Mul for &ExpSum {
    type Output = ExpSum;
    fn mul(self, rhs: &ExpSum) -> ExpSum {
        let mut out = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for a in &self.terms {
            for b in &rhs.terms {
                out.push(Term { coeff: a.coeff * b.coeff, power: a.power + b.power, rate: a.rate + b.rate });
            }
        }
        ExpSum::from_terms(out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ExpSum {
            type Output = ExpSum;
            fn $m(self, rhs: ExpSum) -> ExpSum {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
