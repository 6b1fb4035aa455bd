//! Rational Laurent polynomials in a formal invertible symbol `tau`, which
//! stands for `2*pi*i`. No floating-point value of `tau` is ever used.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Rational;

/// Exact coefficient: a finite sum `sum_k c_k tau^k` with rational `c_k`.
///
/// Zero terms are never stored, so the zero scalar has an empty term map and
/// structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct TauScalar {
    terms: BTreeMap<i64, Rational>,
}

impl TauScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(Rational::new(num.into(), den.into()))
    }

    pub fn from_rational(c: Rational) -> Self {
        Self::monomial(0, c)
    }

    /// `c * tau^exp`.
    pub fn monomial(exp: i64, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { terms }
    }

    pub fn tau_pow(exp: i64) -> Self {
        Self::monomial(exp, Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Iterates `(tau exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, exp: i64) -> Rational {
        self.terms.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    /// The value as a plain rational, if no `tau` power other than `tau^0`
    /// occurs.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn min_tau_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_tau_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Multiplies by `tau^shift`.
    pub fn shift_tau(&self, shift: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, v)| (k + shift, v.clone())).collect(),
        }
    }

    fn add_term(&mut self, exp: i64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }
}

impl From<Rational> for TauScalar {
    fn from(c: Rational) -> Self {
        Self::from_rational(c)
    }
}

impl From<i64> for TauScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl AddAssign<&TauScalar> for TauScalar {
    fn add_assign(&mut self, rhs: &TauScalar) {
        for (k, c) in &rhs.terms {
            self.add_term(*k, c.clone());
        }
    }
}

impl SubAssign<&TauScalar> for TauScalar {
    fn sub_assign(&mut self, rhs: &TauScalar) {
        for (k, c) in &rhs.terms {
            self.add_term(*k, -c.clone());
        }
    }
}

impl Add<&TauScalar> for &TauScalar {
    type Output = TauScalar;
    fn add(self, rhs: &TauScalar) -> TauScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&TauScalar> for &TauScalar {
    type Output = TauScalar;
    fn sub(self, rhs: &TauScalar) -> TauScalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&TauScalar> for &TauScalar {
    type Output = TauScalar;
    fn mul(self, rhs: &TauScalar) -> TauScalar {
        let mut out = TauScalar::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

impl Neg for &TauScalar {
    type Output = TauScalar;
    fn neg(self) -> TauScalar {
        TauScalar {
            terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<TauScalar> for TauScalar {
            type Output = TauScalar;
            fn $m(self, rhs: TauScalar) -> TauScalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&TauScalar> for TauScalar {
            type Output = TauScalar;
            fn $m(self, rhs: &TauScalar) -> TauScalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for TauScalar {
    type Output = TauScalar;
    fn neg(self) -> TauScalar {
        -&self
    }
}

fn fmt_monomial(f: &mut fmt::Formatter<'_>, exp: i64, c: &Rational) -> fmt::Result {
    if exp == 0 {
        write!(f, "{c}")
    } else {
        write!(f, "{c}*tau^{exp}")
    }
}

/// Renders as `p/q`, `p/q*tau^k`, or a parenthesised sum `(a + b*tau^k)` when
/// several powers occur. This is the textual output contract of the CLI.
impl fmt::Display for TauScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.terms.len() {
            0 => write!(f, "0"),
            1 => {
                let (k, c) = self.terms.iter().next().unwrap();
                fmt_monomial(f, *k, c)
            }
            _ => {
                write!(f, "(")?;
                for (i, (k, c)) in self.terms.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    fmt_monomial(f, *k, c)?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Debug for TauScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TauScalar({self})")
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<Rational, String> {
    let t = s.trim();
    let r: Rational = t.parse().map_err(|_| format!("bad rational `{s}`"))?;
    Ok(r)
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    tau_exp: i64,
    coeff: String,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum TauDoc {
    Terms(Vec<TermDoc>),
    Plain(String),
    Int(i64),
}

impl Serialize for TauScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let docs: Vec<TermDoc> = self
            .terms
            .iter()
            .map(|(k, c)| TermDoc {
                tau_exp: *k,
                coeff: c.to_string(),
            })
            .collect();
        docs.serialize(s)
    }
}

/// Accepts the canonical `[{"tau_exp", "coeff"}]` form, and also a bare
/// rational string or integer for hand-written documents.
impl<'de> Deserialize<'de> for TauScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        match TauDoc::deserialize(d)? {
            TauDoc::Terms(docs) => {
                let mut out = TauScalar::zero();
                for t in docs {
                    let c = parse_rational(&t.coeff).map_err(D::Error::custom)?;
                    out.add_term(t.tau_exp, c);
                }
                Ok(out)
            }
            TauDoc::Plain(s) => Ok(TauScalar::from_rational(parse_rational(&s).map_err(D::Error::custom)?)),
            TauDoc::Int(n) => Ok(TauScalar::from_int(n)),
        }
    }
}

/// `(-1)^k` as a rational.
pub fn sign(k: i64) -> Rational {
    if k.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}
