//! Pairings on the u-adic lattice and the Riemann-Roch verifier.
//!
//! Sign conventions: `s_n = (-1)^{n(n+1)/2}` in front of every lattice
//! pairing; the second argument enters with `u -> -u`.

use std::fmt;
use std::sync::Arc;

use crate::charclass::{chern_character, is_calabi_yau, nc_chern_character, tau_normalize, todd_class, BundleData};
use crate::cohring::{same_ring, CohClass, CohRing};
use crate::error::{Error, Result};
use crate::ncvshs::{hkr_embed, twist, vee, vee_class, HPElement, Twist};
use crate::scalars::{sign, CharSeries, TauScalar};

/// A truncated u-series value of a pairing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingValue(CharSeries);

impl PairingValue {
    pub fn zero(u_order: usize) -> Self {
        Self(CharSeries::zero(u_order))
    }

    pub fn u_order(&self) -> usize {
        self.0.order()
    }

    pub fn coeff(&self, k: usize) -> &TauScalar {
        self.0.coeff(k)
    }

    pub fn series(&self) -> &CharSeries {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.coeffs().iter().all(TauScalar::is_zero)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self(self.0.sub(&other.0)?))
    }

    pub fn scale(&self, c: &TauScalar) -> Self {
        Self(self.0.scale(c))
    }

    /// `u -> -u`.
    pub fn negate_u(&self) -> Self {
        let coeffs = self
            .0
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
            .collect();
        Self(CharSeries::new(coeffs))
    }
}

impl fmt::Display for PairingValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.render("u"))
    }
}

fn pairing_sign(ring: &CohRing) -> TauScalar {
    let n = ring.dimension() as i64;
    TauScalar::from_rational(sign(n * (n + 1) / 2))
}

/// `sum_{i,j} (-1)^j integral(a_i * b_j) u^{i+j}`, truncated at the smaller
/// u-order. Only the Poincare pairing of the ring is consulted.
fn sesquilinear(a: &HPElement, b: &HPElement) -> Result<PairingValue> {
    if !same_ring(a.ring(), b.ring()) {
        return Err(Error::RingMismatch);
    }
    let order = a.u_order().min(b.u_order());
    let mut out = vec![TauScalar::zero(); order + 1];
    for i in 0..=order {
        let ai = &a.u_coeffs()[i];
        if ai.is_zero() {
            continue;
        }
        for j in 0..=(order - i) {
            let bj = &b.u_coeffs()[j];
            if bj.is_zero() {
                continue;
            }
            let v = ai.integrate_product(bj)?;
            if j % 2 == 1 {
                out[i + j] -= &v;
            } else {
                out[i + j] += &v;
            }
        }
    }
    Ok(PairingValue(CharSeries::new(out)))
}

fn homogeneous(x: &HPElement) -> Result<usize> {
    x.parity().ok_or(Error::MixedParity)
}

/// `s_n integral( J(a)(u) * J(vee b)(-u) )`.
pub fn higher_residue(a: &HPElement, b: &HPElement) -> Result<PairingValue> {
    higher_residue_with(a, b, Twist::J)
}

/// [`higher_residue`] with either twist.
pub fn higher_residue_with(a: &HPElement, b: &HPElement, which: Twist) -> Result<PairingValue> {
    if !same_ring(a.ring(), b.ring()) {
        return Err(Error::RingMismatch);
    }
    homogeneous(a)?;
    homogeneous(b)?;
    let ja = twist(a, which)?;
    let jb = twist(&vee(b), which)?;
    Ok(sesquilinear(&ja, &jb)?.scale(&pairing_sign(a.ring())))
}

/// `s_n integral( a(u) * b(-u) * td )`.
pub fn canonical_pairing(a: &HPElement, b: &HPElement) -> Result<PairingValue> {
    if !same_ring(a.ring(), b.ring()) {
        return Err(Error::RingMismatch);
    }
    let td = todd_class(a.ring())?;
    let b_td = b.cup_class(&td)?;
    Ok(sesquilinear(a, &b_td)?.scale(&pairing_sign(a.ring())))
}

fn check_bundles(e: &BundleData, f: &BundleData) -> Result<()> {
    if !same_ring(e.ring(), f.ring()) {
        return Err(Error::RingMismatch);
    }
    Ok(())
}

/// `integral( ch(E)^dual * ch(F) * td )`, with the dual acting by `(-1)^k`
/// on `(k,k)` components.
pub fn mukai_pairing(e: &BundleData, f: &BundleData) -> Result<TauScalar> {
    check_bundles(e, f)?;
    let td = todd_class(e.ring())?;
    let left = vee_class(&chern_character(e)?);
    left.integrate_product(&chern_character(f)?.cup(&td)?)
}

/// Euler pairing `chi(E, F)`, computed twice: classically from the dual
/// bundle's Chern character, and through the `tau`-normalised Chern
/// characters, the normalised Todd class and the analytic trace with the
/// lattice sign. The two must agree exactly.
pub fn hrr_chi(e: &BundleData, f: &BundleData) -> Result<TauScalar> {
    let (classical, canonical) = hrr_routes(e, f)?;
    if classical != canonical {
        return Err(Error::RouteMismatch {
            classical: classical.to_string(),
            canonical: canonical.to_string(),
        });
    }
    Ok(classical)
}

/// Both HRR routes, unchecked.
pub fn hrr_routes(e: &BundleData, f: &BundleData) -> Result<(TauScalar, TauScalar)> {
    check_bundles(e, f)?;
    let ring = e.ring();
    let td = todd_class(ring)?;
    let ch_dual = chern_character(&e.dual())?;
    let classical = ch_dual.integrate_product(&chern_character(f)?.cup(&td)?)?;

    let left = hkr_embed(&nc_chern_character(&e.dual())?, 0);
    let right = hkr_embed(&nc_chern_character(f)?.cup(&tau_normalize(&td))?, 0);
    let alg = sesquilinear(&left, &right)?.coeff(0).clone();
    let canonical = &ring.analytic_factor(&alg) * &pairing_sign(ring);
    Ok((classical, canonical))
}

/// `<a,b>(u) - (-1)^{n + |a||b|} <b,a>(-u)`. Vanishes identically on
/// Calabi-Yau rings.
pub fn symmetry_defect(a: &HPElement, b: &HPElement) -> Result<PairingValue> {
    if !same_ring(a.ring(), b.ring()) {
        return Err(Error::RingMismatch);
    }
    if !is_calabi_yau(a.ring())? {
        return Err(Error::NotCalabiYau);
    }
    let (pa, pb) = (homogeneous(a)?, homogeneous(b)?);
    let n = a.ring().dimension();
    let ab = higher_residue(a, b)?;
    let ba = higher_residue(b, a)?.negate_u();
    let eps = TauScalar::from_rational(sign((n + pa * pb) as i64));
    ab.sub(&ba.scale(&eps))
}

/// Symmetry defects over all pairs of basis classes embedded at `u^0`;
/// returns the pairs with nonzero defect. Twists are computed once per
/// basis class.
pub fn symmetry_sweep(ring: &Arc<CohRing>) -> Result<Vec<(String, String, PairingValue)>> {
    if !is_calabi_yau(ring)? {
        return Err(Error::NotCalabiYau);
    }
    let n = ring.dimension();
    let s = pairing_sign(ring);
    let mut left = Vec::with_capacity(ring.rank());
    let mut right = Vec::with_capacity(ring.rank());
    for i in 0..ring.rank() {
        let a = hkr_embed(&CohClass::basis(ring, i), 1);
        left.push(twist(&a, Twist::J)?);
        right.push(twist(&vee(&a), Twist::J)?);
    }
    let parity = |i: usize| ring.element(i).degree() % 2;
    let mut bad = Vec::new();
    for i in 0..ring.rank() {
        for j in 0..ring.rank() {
            let ab = sesquilinear(&left[i], &right[j])?.scale(&s);
            let ba = sesquilinear(&left[j], &right[i])?.scale(&s).negate_u();
            let eps = TauScalar::from_rational(sign((n + parity(i) * parity(j)) as i64));
            let d = ab.sub(&ba.scale(&eps))?;
            if !d.is_zero() {
                bad.push((ring.element(i).label.clone(), ring.element(j).label.clone(), d));
            }
        }
    }
    Ok(bad)
}
