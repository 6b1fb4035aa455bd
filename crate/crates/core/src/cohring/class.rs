use std::fmt;
use std::sync::Arc;

use super::{add_into, Coeffs, CohRing, TraceMode};
use crate::error::{Error, Result};
use crate::scalars::TauScalar;

/// A cohomology class: a coefficient vector over the basis of a ring.
#[derive(Clone)]
pub struct CohClass {
    ring: Arc<CohRing>,
    coeffs: Coeffs,
}

pub(crate) fn same_ring(a: &Arc<CohRing>, b: &Arc<CohRing>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl CohClass {
    pub fn zero(ring: &Arc<CohRing>) -> Self {
        Self::from_coeffs(ring, Coeffs::new())
    }

    /// The unit class.
    ///
    /// # Panics
    /// If the ring has no unique `(0,0)` element (validated rings always do).
    pub fn one(ring: &Arc<CohRing>) -> Self {
        let u = ring.unit().expect("ring has a unit");
        Self::basis(ring, u)
    }

    pub fn basis(ring: &Arc<CohRing>, i: usize) -> Self {
        Self::from_coeffs(ring, Coeffs::from([(i, TauScalar::one())]))
    }

    pub fn from_label(ring: &Arc<CohRing>, label: &str) -> Result<Self> {
        Ok(Self::basis(ring, ring.index_of(label)?))
    }

    pub fn from_coeffs(ring: &Arc<CohRing>, coeffs: Coeffs) -> Self {
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Self {
            ring: Arc::clone(ring),
            coeffs,
        }
    }

    /// Builds a class from `(label, coefficient)` pairs.
    pub fn from_terms<'a>(ring: &Arc<CohRing>, terms: impl IntoIterator<Item = (&'a str, TauScalar)>) -> Result<Self> {
        let mut coeffs = Coeffs::new();
        for (label, c) in terms {
            add_into(&mut coeffs, ring.index_of(label)?, &c);
        }
        Ok(Self::from_coeffs(ring, coeffs))
    }

    pub fn ring(&self) -> &Arc<CohRing> {
        &self.ring
    }

    pub fn coeffs(&self) -> &Coeffs {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Coeffs {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> TauScalar {
        self.coeffs.get(&i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Constant term is one: the `(0,0)` coefficient equals 1.
    pub fn is_unital(&self) -> bool {
        match self.ring.unit() {
            Some(u) => self.coeff(u).is_one(),
            None => false,
        }
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.coeffs.clone();
        for (k, c) in &other.coeffs {
            add_into(&mut out, *k, c);
        }
        Ok(Self::from_coeffs(&self.ring, out))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|_, c| -c)
    }

    pub fn scale(&self, s: &TauScalar) -> Self {
        self.map(|_, c| c * s)
    }

    /// Applies `f(basis index, coefficient)` to every nonzero coefficient.
    pub fn map(&self, mut f: impl FnMut(usize, &TauScalar) -> TauScalar) -> Self {
        let coeffs = self.coeffs.iter().map(|(k, c)| (*k, f(*k, c))).collect();
        Self::from_coeffs(&self.ring, coeffs)
    }

    /// Keeps only the components accepted by `keep(basis index)`.
    pub fn filter(&self, mut keep: impl FnMut(usize) -> bool) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(k, _)| keep(**k))
            .map(|(k, c)| (*k, c.clone()))
            .collect();
        Self::from_coeffs(&self.ring, coeffs)
    }

    /// Component in bidegree `(p, q)`.
    pub fn component(&self, p: usize, q: usize) -> Self {
        let ring = Arc::clone(&self.ring);
        self.filter(|k| {
            let b = ring.element(k);
            b.p == p && b.q == q
        })
    }

    /// Cup product.
    pub fn cup(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let coeffs = self.ring.multiply(&self.coeffs, &other.coeffs)?;
        Ok(Self::from_coeffs(&self.ring, coeffs))
    }

    pub fn integrate(&self, mode: TraceMode) -> TauScalar {
        self.ring.trace(&self.coeffs, mode)
    }

    /// `integral_alg(self * other)` through the Poincare pairing only.
    pub fn integrate_product(&self, other: &Self) -> Result<TauScalar> {
        self.check_ring(other)?;
        Ok(self.ring.integrate_product(&self.coeffs, &other.coeffs))
    }

    /// Common parity of `p + q` over the support, `None` for mixed parity.
    /// The zero class is even.
    pub fn parity(&self) -> Option<usize> {
        let mut parity = None;
        for k in self.coeffs.keys() {
            let d = self.ring.element(*k).degree() % 2;
            match parity {
                None => parity = Some(d),
                Some(p) if p != d => return None,
                _ => {}
            }
        }
        Some(parity.unwrap_or(0))
    }

    /// Total degree `p + q` if the class is homogeneous (and nonzero).
    pub fn total_degree(&self) -> Option<usize> {
        let mut degs = self.coeffs.keys().map(|k| self.ring.element(*k).degree());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// True when every component lies in some bidegree `(k, k)`.
    pub fn is_diagonal(&self) -> bool {
        self.coeffs.keys().all(|k| {
            let b = self.ring.element(*k);
            b.p == b.q
        })
    }
}

impl PartialEq for CohClass {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.coeffs == other.coeffs
    }
}

/// Renders as `c label + c label + ...` in basis order; the unit component is
/// printed as its bare coefficient.
impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (n, (k, c)) in self.coeffs.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            if Some(*k) == self.ring.unit() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c} {}", self.ring.element(*k).label)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CohClass[{}]({self})", self.ring.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohring::{elliptic_curve, projective_space};

    #[test]
    fn cup_on_p2() {
        let r = projective_space(2);
        let h = CohClass::from_label(&r, "h").unwrap();
        assert_eq!(h.cup(&h).unwrap(), CohClass::from_label(&r, "h^2").unwrap());
    }

    #[test]
    fn koszul_sign_on_elliptic_curve() {
        let r = elliptic_curve();
        let dz = CohClass::from_label(&r, "dz").unwrap();
        let dzb = CohClass::from_label(&r, "dzb").unwrap();
        let pt = CohClass::from_label(&r, "pt").unwrap();
        assert_eq!(dz.cup(&dzb).unwrap(), pt);
        assert_eq!(dzb.cup(&dz).unwrap(), pt.neg());
    }

    #[test]
    fn dimension_truncation_on_p1() {
        let r = projective_space(1);
        let h = CohClass::from_label(&r, "h").unwrap();
        assert!(h.cup(&h).unwrap().is_zero());
    }

    #[test]
    fn ring_mismatch() {
        let a = CohClass::one(&projective_space(1));
        let b = CohClass::one(&projective_space(2));
        assert_eq!(a.cup(&b).unwrap_err(), Error::RingMismatch);
        assert_eq!(a.add(&b).unwrap_err(), Error::RingMismatch);
    }

    #[test]
    fn integrate_top_classes() {
        let r = projective_space(2);
        let h2 = CohClass::from_label(&r, "h^2").unwrap();
        assert_eq!(h2.integrate(TraceMode::Algebraic), TauScalar::one());
        assert_eq!(h2.integrate(TraceMode::Analytic), -TauScalar::tau_pow(2));
        let r1 = projective_space(1);
        let h = CohClass::from_label(&r1, "h").unwrap();
        assert_eq!(h.integrate(TraceMode::Analytic), TauScalar::tau_pow(1));
        // non-top components contribute nothing
        let one = CohClass::one(&r1);
        assert!(one.integrate(TraceMode::Analytic).is_zero());
    }

    #[test]
    fn display() {
        let r = projective_space(1);
        let c = CohClass::from_terms(&r, [("1", TauScalar::one()), ("h", TauScalar::one())]).unwrap();
        assert_eq!(c.to_string(), "1 + 1 h");
        assert_eq!(CohClass::zero(&r).to_string(), "0");
    }

    #[test]
    fn parity_and_degree() {
        let r = elliptic_curve();
        let dz = CohClass::from_label(&r, "dz").unwrap();
        let one = CohClass::one(&r);
        assert_eq!(dz.parity(), Some(1));
        assert_eq!(one.add(&dz).unwrap().parity(), None);
        assert_eq!(dz.total_degree(), Some(1));
    }
}
