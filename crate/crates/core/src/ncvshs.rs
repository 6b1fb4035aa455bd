//! The u-adic lattice model: classes of periodic / negative cyclic homology
//! represented through their HKR image as u-truncated cohomology classes.
//!
//! An [`HPElement`] is `sum_{k=0}^{u_order} x_k u^k` with `x_k` a
//! [`CohClass`]. Twists act coefficientwise, `vee` acts by `(-1)^p` on the
//! `(p,q)` part, and the Hodge filtration is read off the u-valuation.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::charclass::{inverse_class, sqrt_modified_todd, sqrt_todd};
use crate::cohring::{Coeffs, CohClass, CohRing};
use crate::error::{Error, Result};
use crate::scalars::{sign, TauScalar};

/// Which square-root Todd class a twist multiplies by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Twist {
    /// `sqrt(td)`.
    J,
    /// `sqrt(td')`.
    K,
}

impl Twist {
    /// The twist class itself.
    pub fn class(self, ring: &Arc<CohRing>) -> Result<CohClass> {
        match self {
            Twist::J => sqrt_todd(ring),
            Twist::K => sqrt_modified_todd(ring),
        }
    }
}

impl fmt::Display for Twist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Twist::J => write!(f, "J"),
            Twist::K => write!(f, "K"),
        }
    }
}

/// A u-truncated series of cohomology classes.
#[derive(Clone, PartialEq)]
pub struct HPElement {
    ring: Arc<CohRing>,
    coeffs: Vec<CohClass>,
}

impl HPElement {
    pub fn zero(ring: &Arc<CohRing>, u_order: usize) -> Self {
        Self {
            ring: Arc::clone(ring),
            coeffs: vec![CohClass::zero(ring); u_order + 1],
        }
    }

    /// `x_0 + x_1 u + ...`; the truncation is `coeffs.len() - 1`.
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn from_series(ring: &Arc<CohRing>, coeffs: Vec<CohClass>) -> Result<Self> {
        assert!(!coeffs.is_empty(), "an HP element needs at least one u-coefficient");
        if coeffs.iter().any(|c| !crate::cohring::same_ring(c.ring(), ring)) {
            return Err(Error::RingMismatch);
        }
        Ok(Self {
            ring: Arc::clone(ring),
            coeffs,
        })
    }

    pub fn ring(&self) -> &Arc<CohRing> {
        &self.ring
    }

    pub fn u_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `u^k`, zero past the truncation.
    pub fn u_coeff(&self, k: usize) -> CohClass {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| CohClass::zero(&self.ring))
    }

    pub fn u_coeffs(&self) -> &[CohClass] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(CohClass::is_zero)
    }

    /// Common parity of `p + q` over every u-coefficient; `None` if mixed.
    pub fn parity(&self) -> Option<usize> {
        let mut out = None;
        for c in self.coeffs.iter().filter(|c| !c.is_zero()) {
            let p = c.parity()?;
            match out {
                None => out = Some(p),
                Some(q) if q != p => return None,
                _ => {}
            }
        }
        Some(out.unwrap_or(0))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if !crate::cohring::same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        if self.u_order() != other.u_order() {
            return Err(Error::UOrderMismatch {
                left: self.u_order(),
                right: other.u_order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(Self {
            ring: Arc::clone(&self.ring),
            coeffs,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| Ok(c.neg())).expect("negation is total")
    }

    pub fn scale(&self, s: &TauScalar) -> Self {
        self.map(|c| Ok(c.scale(s))).expect("scaling is total")
    }

    /// Multiplication by `u`; the top coefficient falls off the truncation.
    pub fn mul_u(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        coeffs.push(CohClass::zero(&self.ring));
        coeffs.extend(self.coeffs[..self.u_order()].iter().cloned());
        Self {
            ring: Arc::clone(&self.ring),
            coeffs,
        }
    }

    /// `u -> -u`.
    pub fn negate_u(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 1 { c.neg() } else { c.clone() })
            .collect();
        Self {
            ring: Arc::clone(&self.ring),
            coeffs,
        }
    }

    /// Same element with a different truncation (extending pads with zeros).
    pub fn with_u_order(&self, u_order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(u_order + 1, CohClass::zero(&self.ring));
        Self {
            ring: Arc::clone(&self.ring),
            coeffs,
        }
    }

    /// Applies `f` to every u-coefficient.
    pub fn map(&self, f: impl Fn(&CohClass) -> Result<CohClass>) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(f).collect::<Result<_>>()?;
        Ok(Self {
            ring: Arc::clone(&self.ring),
            coeffs,
        })
    }

    /// `c * x` at every u-coefficient.
    pub fn cup_class(&self, c: &CohClass) -> Result<Self> {
        self.map(|x| c.cup(x))
    }

    pub fn to_doc(&self) -> HPDoc {
        let mut components = Vec::new();
        for (i, b) in self.ring.basis().iter().enumerate() {
            let u_coeffs: Vec<TauScalar> = self.coeffs.iter().map(|c| c.coeff(i)).collect();
            if u_coeffs.iter().any(|c| !c.is_zero()) {
                components.push(HPComponentDoc {
                    label: b.label.clone(),
                    u_coeffs,
                });
            }
        }
        HPDoc {
            u_order: self.u_order(),
            components,
        }
    }

    pub fn from_doc(ring: &Arc<CohRing>, doc: &HPDoc) -> Result<Self> {
        let mut coeffs = vec![Coeffs::new(); doc.u_order + 1];
        for comp in &doc.components {
            let i = ring.index_of(&comp.label)?;
            if comp.u_coeffs.len() > doc.u_order + 1 {
                return Err(Error::Parse(format!(
                    "component `{}` has {} u-coefficients, u_order is {}",
                    comp.label,
                    comp.u_coeffs.len(),
                    doc.u_order
                )));
            }
            for (k, c) in comp.u_coeffs.iter().enumerate() {
                let entry = coeffs[k].entry(i).or_default();
                *entry += c;
            }
        }
        let coeffs = coeffs.into_iter().map(|c| CohClass::from_coeffs(ring, c)).collect();
        Self::from_series(ring, coeffs)
    }
}

/// Renders as `(x_0) + (x_1)*u + ...`, omitting zero coefficients.
impl fmt::Display for HPElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*u")?,
                _ => write!(f, "({c})*u^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for HPElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HPElement[{}; u^{}]({self})", self.ring.name(), self.u_order())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HPComponentDoc {
    pub label: String,
    pub u_coeffs: Vec<TauScalar>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HPDoc {
    pub u_order: usize,
    pub components: Vec<HPComponentDoc>,
}

/// The u-degree-0 embedding of a class.
pub fn hkr_embed(a: &CohClass, u_order: usize) -> HPElement {
    let mut coeffs = vec![CohClass::zero(a.ring()); u_order + 1];
    coeffs[0] = a.clone();
    HPElement {
        ring: Arc::clone(a.ring()),
        coeffs,
    }
}

/// Cups every u-coefficient with `sqrt(td)` (J) or `sqrt(td')` (K).
pub fn twist(x: &HPElement, which: Twist) -> Result<HPElement> {
    let t = which.class(&x.ring)?;
    x.cup_class(&t)
}

/// Inverse of [`twist`].
pub fn untwist(x: &HPElement, which: Twist) -> Result<HPElement> {
    let t = inverse_class(&which.class(&x.ring)?)?;
    x.cup_class(&t)
}

/// `(-1)^p` on the `(p,q)` component.
pub fn vee(x: &HPElement) -> HPElement {
    x.map(|c| Ok(vee_class(c))).expect("vee is total")
}

pub fn vee_class(c: &CohClass) -> CohClass {
    let ring = Arc::clone(c.ring());
    c.map(|k, v| v.scale(&sign(ring.element(k).p as i64)))
}

/// Least u-exponent with a nonzero coefficient; `None` stands for `+inf`.
pub fn u_valuation(x: &HPElement) -> Option<usize> {
    x.coeffs.iter().position(|c| !c.is_zero())
}

/// Rationality in the `tau`-normalised sense: a `(p,q)` coefficient times
/// `tau^p` must have all its `tau`-exponents in `0..=p`. Plain rationals pass,
/// as do their images under `(-1/tau)^k`-rescaling for `k <= p`.
pub fn rational_check(x: &HPElement) -> bool {
    x.coeffs.iter().all(|c| {
        c.coeffs().iter().all(|(k, v)| {
            let p = x.ring.element(*k).p as i64;
            v.terms().all(|(e, _)| (0..=p).contains(&(e + p)))
        })
    })
}
