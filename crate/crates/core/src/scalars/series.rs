//! Truncated univariate power series over [`TauScalar`].

use std::fmt;

use num::{One, Zero};

use super::{Rational, TauScalar};
use crate::error::{Error, Result};

/// `sum_{k=0}^{order} c_k z^k`, truncated at an explicit order.
///
/// Binary operations require both operands to carry the same order; nothing
/// is silently re-truncated.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CharSeries {
    coeffs: Vec<TauScalar>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
    Div,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesFn {
    Exp,
    Log,
    Sqrt,
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

impl CharSeries {
    /// Builds a series from its coefficients; the order is `coeffs.len() - 1`.
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn new(coeffs: Vec<TauScalar>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        Self { coeffs }
    }

    pub fn from_rationals(coeffs: impl IntoIterator<Item = Rational>) -> Self {
        Self::new(coeffs.into_iter().map(TauScalar::from_rational).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![TauScalar::zero(); order + 1])
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = TauScalar::one();
        s
    }

    /// `c * z`, truncated at `order`.
    pub fn linear(order: usize, c: TauScalar) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[TauScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &TauScalar {
        &self.coeffs[k]
    }

    pub fn is_unital(&self) -> bool {
        self.coeffs[0].is_one()
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn arith(&self, other: &Self, op: SeriesOp) -> Result<Self> {
        match op {
            SeriesOp::Add => self.add(other),
            SeriesOp::Mul => self.mul(other),
            SeriesOp::Div => self.div(other),
        }
    }

    pub fn apply(&self, f: SeriesFn) -> Result<Self> {
        match f {
            SeriesFn::Exp => self.exp(),
            SeriesFn::Log => self.log(),
            SeriesFn::Sqrt => self.sqrt(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self::new(
            self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self::new(
            self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let n = self.order();
        let mut out = vec![TauScalar::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Ok(Self::new(out))
    }

    /// Quotient by a unital divisor.
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        if !other.is_unital() {
            return Err(Error::DivisorNotUnital(other.coeffs[0].to_string()));
        }
        let n = self.order();
        let mut out: Vec<TauScalar> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut c = self.coeffs[k].clone();
            for j in 1..=k {
                c -= &(&other.coeffs[j] * &out[k - j]);
            }
            out.push(c);
        }
        Ok(Self::new(out))
    }

    pub fn scale(&self, c: &TauScalar) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `exp(f)` for `f(0) = 0`, via `k e_k = sum_j j f_j e_{k-j}`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm(self.coeffs[0].to_string()));
        }
        let n = self.order();
        let mut out = vec![TauScalar::one()];
        for k in 1..=n {
            let mut acc = TauScalar::zero();
            for j in 1..=k {
                acc += &(&self.coeffs[j] * &out[k - j]).scale(&q(j as i64));
            }
            out.push(acc.scale(&Rational::new(1.into(), (k as i64).into())));
        }
        Ok(Self::new(out))
    }

    /// `log(f)` for unital `f`, from `f' = f l'`.
    pub fn log(&self) -> Result<Self> {
        if !self.is_unital() {
            return Err(Error::NotUnital(self.coeffs[0].to_string()));
        }
        let n = self.order();
        let mut out = vec![TauScalar::zero()];
        for k in 1..=n {
            let mut acc = self.coeffs[k].scale(&q(k as i64));
            for j in 1..k {
                acc -= &(&out[j] * &self.coeffs[k - j]).scale(&q(j as i64));
            }
            out.push(acc.scale(&Rational::new(1.into(), (k as i64).into())));
        }
        Ok(Self::new(out))
    }

    /// The unique unital square root of a unital series.
    pub fn sqrt(&self) -> Result<Self> {
        if !self.is_unital() {
            return Err(Error::NotUnital(self.coeffs[0].to_string()));
        }
        let half = Rational::new(1.into(), 2.into());
        let n = self.order();
        let mut out = vec![TauScalar::one()];
        for k in 1..=n {
            let mut acc = self.coeffs[k].clone();
            for i in 1..k {
                acc -= &(&out[i] * &out[k - i]);
            }
            out.push(acc.scale(&half));
        }
        Ok(Self::new(out))
    }

    pub fn inverse(&self) -> Result<Self> {
        Self::one(self.order()).div(self)
    }
}

/// Truncation of `z / (1 - e^{-z})` at `order`.
pub fn todd_series(order: usize) -> CharSeries {
    // (1 - e^{-z}) / z = sum_k (-1)^k z^k / (k+1)!
    let mut fact = Rational::one();
    let mut denom = Vec::with_capacity(order + 1);
    for k in 0..=order {
        fact *= q(k as i64 + 1);
        let sign = if k % 2 == 0 { Rational::one() } else { -Rational::one() };
        denom.push(sign / &fact);
    }
    CharSeries::one(order)
        .div(&CharSeries::from_rationals(denom))
        .expect("denominator series is unital")
}

/// Truncation of `z / (e^{z/2} - e^{-z/2})` at `order`.
pub fn modified_todd_series(order: usize) -> CharSeries {
    // (e^{z/2} - e^{-z/2}) / z = sum_j z^{2j} / (4^j (2j+1)!)
    let mut denom = Vec::with_capacity(order + 1);
    let mut fact = Rational::one();
    for k in 0..=order {
        fact *= q(k as i64 + 1);
        if k % 2 == 0 {
            let pow4 = Rational::from_integer(num::BigInt::from(2).pow(k as u32));
            denom.push(Rational::one() / (&fact * pow4));
        } else {
            denom.push(Rational::zero());
        }
    }
    CharSeries::one(order)
        .div(&CharSeries::from_rationals(denom))
        .expect("denominator series is unital")
}

impl CharSeries {
    /// Text form in the variable `var`, e.g. `render("u")`.
    pub fn render(&self, var: &str) -> String {
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !out.is_empty() {
                out.push_str(" + ");
            }
            match k {
                0 => out.push_str(&c.to_string()),
                1 => out.push_str(&format!("{c}*{var}")),
                _ => out.push_str(&format!("{c}*{var}^{k}")),
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// Renders as `c0 + c1*z + c2*z^2 + ...`, omitting zero terms.
impl fmt::Display for CharSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("z"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(c: &[(i64, i64)]) -> CharSeries {
        CharSeries::from_rationals(c.iter().map(|&(n, d)| Rational::new(n.into(), d.into())))
    }

    #[test]
    fn difference_of_squares() {
        let a = series(&[(1, 1), (1, 1), (0, 1)]);
        let b = series(&[(1, 1), (-1, 1), (0, 1)]);
        assert_eq!(a.arith(&b, SeriesOp::Mul).unwrap(), series(&[(1, 1), (0, 1), (-1, 1)]));
    }

    #[test]
    fn geometric_series() {
        let one = CharSeries::one(2);
        let b = series(&[(1, 1), (1, 1), (0, 1)]);
        assert_eq!(
            one.arith(&b, SeriesOp::Div).unwrap(),
            series(&[(1, 1), (-1, 1), (1, 1)])
        );
    }

    #[test]
    fn identity_divisor() {
        let a = series(&[(1, 1), (1, 1), (0, 1), (0, 1)]);
        assert_eq!(a.div(&CharSeries::one(3)).unwrap(), a);
    }

    #[test]
    fn div_requires_unital_divisor() {
        let a = CharSeries::one(2);
        let b = series(&[(2, 1), (1, 1), (0, 1)]);
        assert!(matches!(a.div(&b), Err(Error::DivisorNotUnital(_))));
    }

    #[test]
    fn order_mismatch_is_an_error() {
        let r = CharSeries::one(2).add(&CharSeries::one(3));
        assert_eq!(r, Err(Error::OrderMismatch { left: 2, right: 3 }));
    }

    #[test]
    fn mercator() {
        let f = series(&[(1, 1), (1, 1), (0, 1), (0, 1)]);
        assert_eq!(
            f.apply(SeriesFn::Log).unwrap(),
            series(&[(0, 1), (1, 1), (-1, 2), (1, 3)])
        );
    }

    #[test]
    fn sqrt_of_one() {
        for order in 0..5 {
            assert_eq!(CharSeries::one(order).sqrt().unwrap(), CharSeries::one(order));
        }
    }

    #[test]
    fn sqrt_of_todd() {
        let s = todd_series(2).sqrt().unwrap();
        assert_eq!(s, series(&[(1, 1), (1, 4), (1, 96)]));
        assert_eq!(s.mul(&s).unwrap(), todd_series(2));
    }

    #[test]
    fn exp_log_preconditions() {
        assert!(matches!(CharSeries::one(2).exp(), Err(Error::NonzeroConstantTerm(_))));
        assert!(matches!(CharSeries::zero(2).log(), Err(Error::NotUnital(_))));
        assert!(matches!(CharSeries::zero(2).sqrt(), Err(Error::NotUnital(_))));
    }

    #[test]
    fn todd_low_orders() {
        assert_eq!(todd_series(0), CharSeries::one(0));
        assert_eq!(todd_series(2), series(&[(1, 1), (1, 2), (1, 12)]));
        assert_eq!(todd_series(4), series(&[(1, 1), (1, 2), (1, 12), (0, 1), (-1, 720)]));
    }

    #[test]
    fn modified_todd_low_orders() {
        assert_eq!(modified_todd_series(1), CharSeries::one(1));
        assert_eq!(
            modified_todd_series(4),
            series(&[(1, 1), (0, 1), (-1, 24), (0, 1), (7, 5760)])
        );
    }

    #[test]
    fn modified_todd_is_todd_times_exp() {
        let e = CharSeries::linear(4, TauScalar::from_ratio(-1, 2)).exp().unwrap();
        assert_eq!(todd_series(4).mul(&e).unwrap(), modified_todd_series(4));
    }

    #[test]
    fn display() {
        assert_eq!(todd_series(4).to_string(), "1 + 1/2*z + 1/12*z^2 + -1/720*z^4");
        assert_eq!(CharSeries::zero(3).to_string(), "0");
    }
}
