//! Characteristic classes from Chern data: Chern character, multiplicative
//! (Todd-type) classes, square roots and the `tau`-normalised Chern
//! character.
//!
//! Chern roots are never materialised. Symmetric functions go through
//! Newton's identities, so everything stays exact over the rationals.

use std::sync::Arc;

use num::One;

use crate::cohring::{terms_to_coeffs, BundleDoc, Coeffs, CohClass, CohRing};
use crate::error::{Error, Result};
use crate::scalars::{modified_todd_series, sign, todd_series, CharSeries, Rational, TauScalar};

/// Rank and Chern classes `c_1, ..., c_m` of a bundle on a ring.
#[derive(Clone, Debug, PartialEq)]
pub struct BundleData {
    rank: i64,
    ring: Arc<CohRing>,
    chern: Vec<CohClass>,
}

impl BundleData {
    /// Checks that `c_k` sits in bidegree `(k, k)` and `m <= n`.
    pub fn new(ring: &Arc<CohRing>, rank: i64, chern: Vec<CohClass>) -> Result<Self> {
        for (idx, c) in chern.iter().enumerate() {
            let k = idx + 1;
            if !Arc::ptr_eq(c.ring(), ring) && **c.ring() != **ring {
                return Err(Error::RingMismatch);
            }
            let in_place = c.coeffs().keys().all(|i| {
                let b = ring.element(*i);
                b.p == k && b.q == k
            });
            if !in_place || (k > ring.dimension() && !c.is_zero()) {
                return Err(Error::BadChernDegrees { k });
            }
        }
        let mut chern = chern;
        chern.truncate(ring.dimension());
        while chern.last().is_some_and(|c| c.is_zero()) {
            chern.pop();
        }
        Ok(Self {
            rank,
            ring: Arc::clone(ring),
            chern,
        })
    }

    pub fn trivial(ring: &Arc<CohRing>, rank: i64) -> Self {
        Self::new(ring, rank, Vec::new()).expect("trivial bundle")
    }

    /// Line bundle with first Chern class `c1`.
    pub fn line(ring: &Arc<CohRing>, c1: CohClass) -> Result<Self> {
        Self::new(ring, 1, vec![c1])
    }

    /// `O(a)`: the line bundle `a` times the ring's polarisation.
    pub fn twisting_sheaf(ring: &Arc<CohRing>, a: i64) -> Result<Self> {
        let h = ring
            .polarization()
            .ok_or_else(|| Error::UnknownBundle(format!("O({a})")))?;
        Self::line(ring, CohClass::basis(ring, h).scale(&TauScalar::from_int(a)))
    }

    /// The tangent bundle from the ring's tangent Chern data.
    pub fn tangent(ring: &Arc<CohRing>) -> Result<Self> {
        let chern = ring.tangent_chern_coeffs().ok_or(Error::MissingTangentData)?;
        let classes = chern.iter().map(|c| CohClass::from_coeffs(ring, c.clone())).collect();
        Self::new(ring, ring.dimension() as i64, classes)
    }

    pub fn from_doc(ring: &Arc<CohRing>, doc: &BundleDoc) -> Result<Self> {
        let mut chern = Vec::new();
        for d in &doc.chern {
            if d.k == 0 {
                return Err(Error::BadChernDegrees { k: 0 });
            }
            if chern.len() < d.k {
                chern.resize(d.k, CohClass::zero(ring));
            }
            let c = terms_to_coeffs(&d.class, |l| ring.index_of(l).ok())?;
            chern[d.k - 1] = chern[d.k - 1].add(&CohClass::from_coeffs(ring, c))?;
        }
        Self::new(ring, doc.rank, chern)
    }

    /// Parses `O`, `O(a)`, `T`, or the name of a bundle embedded in the ring
    /// document.
    pub fn parse(ring: &Arc<CohRing>, spec: &str) -> Result<Self> {
        let s = spec.trim();
        if s == "O" {
            return Ok(Self::trivial(ring, 1));
        }
        if s == "T" {
            return Self::tangent(ring);
        }
        if let Some(inner) = s.strip_prefix("O(").and_then(|r| r.strip_suffix(')')) {
            let a: i64 = inner
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad twist in `{s}`")))?;
            return Self::twisting_sheaf(ring, a);
        }
        match ring.bundle_docs().get(s) {
            Some(doc) => Self::from_doc(ring, doc),
            None => Err(Error::UnknownBundle(s.to_string())),
        }
    }

    pub fn ring(&self) -> &Arc<CohRing> {
        &self.ring
    }

    pub fn rank(&self) -> i64 {
        self.rank
    }

    /// `c_k`, zero beyond the stored list; `c_0 = 1`.
    pub fn chern(&self, k: usize) -> CohClass {
        match k {
            0 => CohClass::one(&self.ring),
            _ => self
                .chern
                .get(k - 1)
                .cloned()
                .unwrap_or_else(|| CohClass::zero(&self.ring)),
        }
    }

    pub fn total_chern(&self) -> CohClass {
        let mut out = CohClass::one(&self.ring);
        for c in &self.chern {
            out = out.add(c).expect("same ring");
        }
        out
    }

    /// Dual bundle: odd Chern classes change sign.
    pub fn dual(&self) -> Self {
        let chern = self
            .chern
            .iter()
            .enumerate()
            .map(|(i, c)| if (i + 1) % 2 == 1 { c.neg() } else { c.clone() })
            .collect();
        Self {
            rank: self.rank,
            ring: Arc::clone(&self.ring),
            chern,
        }
    }

    /// Whitney sum: total Chern classes multiply.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let n = self.ring.dimension();
        let mut chern = Vec::with_capacity(n);
        for k in 1..=n {
            let mut ck = CohClass::zero(&self.ring);
            for i in 0..=k {
                ck = ck.add(&self.chern(i).cup(&other.chern(k - i))?)?;
            }
            chern.push(ck);
        }
        Self::new(&self.ring, self.rank + other.rank, chern)
    }
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Newton power sums `p_1, ..., p_n` of the Chern roots:
/// `p_k = sum_{i<k} (-1)^{i-1} c_i p_{k-i} + (-1)^{k-1} k c_k`.
pub fn power_sums(b: &BundleData) -> Result<Vec<CohClass>> {
    let n = b.ring.dimension();
    let mut p: Vec<CohClass> = Vec::with_capacity(n);
    for k in 1..=n {
        let mut acc = b
            .chern(k)
            .scale(&TauScalar::from_rational(sign(k as i64 - 1) * q(k as i64)));
        for i in 1..k {
            let ci = b.chern(i);
            if ci.is_zero() {
                continue;
            }
            let term = ci
                .cup(&p[k - i - 1])?
                .scale(&TauScalar::from_rational(sign(i as i64 - 1)));
            acc = acc.add(&term)?;
        }
        p.push(acc);
    }
    Ok(p)
}

/// `ch(E) = rank + sum_k p_k / k!`.
pub fn chern_character(b: &BundleData) -> Result<CohClass> {
    let mut out = CohClass::one(&b.ring).scale(&TauScalar::from_int(b.rank));
    let mut fact = Rational::one();
    for (idx, pk) in power_sums(b)?.iter().enumerate() {
        fact *= q(idx as i64 + 1);
        out = out.add(&pk.scale(&TauScalar::from_rational(fact.recip())))?;
    }
    Ok(out)
}

/// Evaluates `sum_k s_k x^k` on a class with no unit component. Such a class
/// is nilpotent, so the sum terminates once powers vanish.
pub fn eval_series(series: &CharSeries, x: &CohClass) -> Result<CohClass> {
    let ring = x.ring();
    if let Some(u) = ring.unit() {
        if !x.coeff(u).is_zero() {
            return Err(Error::NonzeroConstantTerm(x.coeff(u).to_string()));
        }
    }
    let mut out = CohClass::one(ring).scale(series.coeff(0));
    let mut power = CohClass::one(ring);
    for k in 1..=series.order() {
        power = power.cup(x)?;
        if power.is_zero() {
            break;
        }
        out = out.add(&power.scale(series.coeff(k)))?;
    }
    Ok(out)
}

/// Enough series terms to exhaust any nilpotent class on the ring.
fn nilpotency_order(ring: &CohRing) -> usize {
    2 * ring.dimension()
}

fn split_unital(c: &CohClass) -> Result<CohClass> {
    if !c.is_unital() {
        return Err(Error::NotUnital(c.to_string()));
    }
    c.sub(&CohClass::one(c.ring()))
}

fn one_plus_z(order: usize) -> CharSeries {
    CharSeries::one(order)
        .add(&CharSeries::linear(order, TauScalar::one()))
        .expect("equal orders")
}

/// `exp(x)` for a class without unit component.
pub fn exp_class(x: &CohClass) -> Result<CohClass> {
    let order = nilpotency_order(x.ring());
    let exp = CharSeries::linear(order, TauScalar::one()).exp()?;
    eval_series(&exp, x)
}

/// The unique unital `s` with `s * s = c`, for unital `c`.
pub fn sqrt_class(c: &CohClass) -> Result<CohClass> {
    let x = split_unital(c)?;
    let order = nilpotency_order(c.ring());
    eval_series(&one_plus_z(order).sqrt()?, &x)
}

/// Multiplicative inverse of a unital class.
pub fn inverse_class(c: &CohClass) -> Result<CohClass> {
    let x = split_unital(c)?;
    let order = nilpotency_order(c.ring());
    eval_series(&one_plus_z(order).inverse()?, &x)
}

/// `prod_i f(x_i)` over the Chern roots, computed as
/// `exp(sum_k l_k p_k)` where `log f = sum_k l_k z^k`.
pub fn multiplicative_class(series: &CharSeries, b: &BundleData) -> Result<CohClass> {
    if !series.is_unital() {
        return Err(Error::SeriesNotUnital);
    }
    let n = b.ring.dimension();
    if series.order() < n {
        return Err(Error::OrderTooSmall {
            order: series.order(),
            dimension: n,
        });
    }
    let log = series.log()?;
    let mut sum = CohClass::zero(&b.ring);
    for (idx, pk) in power_sums(b)?.iter().enumerate() {
        let lk = log.coeff(idx + 1);
        if lk.is_zero() {
            continue;
        }
        sum = sum.add(&pk.scale(lk))?;
    }
    exp_class(&sum)
}

/// Multiplies the `(p, p)` component by `(-1/tau)^p`; off-diagonal
/// components get the same factor by `p`.
pub fn tau_normalize(c: &CohClass) -> CohClass {
    let ring = Arc::clone(c.ring());
    c.map(|k, v| {
        let p = ring.element(k).p as i64;
        v.shift_tau(-p).scale(&sign(p))
    })
}

/// Chern character with its `(p,p)` component scaled by `(-1/tau)^p`.
pub fn nc_chern_character(b: &BundleData) -> Result<CohClass> {
    Ok(tau_normalize(&chern_character(b)?))
}

/// `td(X)`, from the series `z / (1 - e^{-z})` on the tangent bundle.
pub fn todd_class(ring: &Arc<CohRing>) -> Result<CohClass> {
    let t = BundleData::tangent(ring)?;
    multiplicative_class(&todd_series(ring.dimension()), &t)
}

/// `td'(X)`, from the series `z / (e^{z/2} - e^{-z/2})`.
pub fn modified_todd_class(ring: &Arc<CohRing>) -> Result<CohClass> {
    let t = BundleData::tangent(ring)?;
    multiplicative_class(&modified_todd_series(ring.dimension()), &t)
}

/// `sqrt(td(X))`.
pub fn sqrt_todd(ring: &Arc<CohRing>) -> Result<CohClass> {
    sqrt_class(&todd_class(ring)?)
}

/// `sqrt(td'(X))`.
pub fn sqrt_modified_todd(ring: &Arc<CohRing>) -> Result<CohClass> {
    sqrt_class(&modified_todd_class(ring)?)
}

/// First Chern class of the tangent bundle vanishes.
pub fn is_calabi_yau(ring: &Arc<CohRing>) -> Result<bool> {
    Ok(BundleData::tangent(ring)?.chern(1).is_zero())
}

/// Coefficient vector helper for tests and callers holding raw data.
pub fn class_from(ring: &Arc<CohRing>, coeffs: Coeffs) -> CohClass {
    CohClass::from_coeffs(ring, coeffs)
}
