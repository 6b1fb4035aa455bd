//! Bigraded cohomology rings with exact structure constants, the cup product
//! and the algebraic/analytic trace maps.

mod builtin;
mod class;
mod doc;
mod validate;

use std::borrow::Cow;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

pub use builtin::{build_builtin, elliptic_curve, formal_cy, k3, product, projective_space, quintic_diamond, Builtin};
pub(crate) use class::same_ring;
pub use class::CohClass;
pub(crate) use doc::terms_to_coeffs;
pub use doc::{load_ring, BundleDoc, ChernDoc, ClassTermDoc, RingDoc};
pub use validate::{validate_ring, Check, ValidationReport};

use crate::error::{Error, Result};
use crate::scalars::{sign, Rational, TauScalar};

/// Sparse coefficient vector over a ring basis.
pub type Coeffs = BTreeMap<usize, TauScalar>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub label: String,
    pub p: usize,
    pub q: usize,
}

impl BasisElement {
    pub fn new(label: impl Into<String>, p: usize, q: usize) -> Self {
        Self {
            label: label.into(),
            p,
            q,
        }
    }

    pub fn degree(&self) -> usize {
        self.p + self.q
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceMode {
    Algebraic,
    Analytic,
}

/// A finite-dimensional bigraded ring `sum H^q(Omega^p)` with a distinguished
/// top class in bidegree `(n, n)`.
///
/// Products with the unit (the unique `(0,0)` basis element) are implicit.
/// When `partial_products` is set, the table only has to carry products that
/// land in the top bidegree (the Poincare pairing); any other product missing
/// from the table is unknown and requesting it is an error. Otherwise missing
/// entries are zero.
#[derive(Clone, Debug)]
pub struct CohRing {
    name: String,
    dimension: usize,
    basis: Vec<BasisElement>,
    index: HashMap<String, usize>,
    unit: Option<usize>,
    top: usize,
    products: HashMap<(usize, usize), Coeffs>,
    partial_products: bool,
    tangent_chern: Option<Vec<Coeffs>>,
    polarization: Option<usize>,
    bundles: BTreeMap<String, BundleDoc>,
    /// `i -> [(j, integral of e_i e_j)]` for nonzero top pairings.
    pairing: Vec<Vec<(usize, TauScalar)>>,
}

impl PartialEq for CohRing {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.dimension == other.dimension
            && self.basis == other.basis
            && self.top == other.top
            && self.partial_products == other.partial_products
            && self.tangent_chern == other.tangent_chern
            && self.polarization == other.polarization
            && self.bundles == other.bundles
            && self.explicit_products() == other.explicit_products()
    }
}

/// Raw ring data, assembled before validation.
#[derive(Clone, Debug, Default)]
pub struct RingParts {
    pub name: String,
    pub dimension: usize,
    pub basis: Vec<BasisElement>,
    pub top: usize,
    pub products: HashMap<(usize, usize), Coeffs>,
    pub partial_products: bool,
    pub tangent_chern: Option<Vec<Coeffs>>,
    pub polarization: Option<usize>,
    pub bundles: BTreeMap<String, BundleDoc>,
}

impl RingParts {
    pub fn new(name: impl Into<String>, dimension: usize, basis: Vec<BasisElement>, top: usize) -> Self {
        Self {
            name: name.into(),
            dimension,
            basis,
            top,
            ..Default::default()
        }
    }

    /// Sets `e_i * e_j`; zero coefficients are dropped.
    pub fn set_product(&mut self, i: usize, j: usize, result: impl IntoIterator<Item = (usize, TauScalar)>) {
        let coeffs: Coeffs = result.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        self.products.insert((i, j), coeffs);
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.label == label)
    }

    /// Assembles the ring without checking any invariant. Used to build
    /// counterexamples for [`validate_ring`]; everything else should go
    /// through [`RingParts::build`].
    pub fn build_unchecked(self) -> Arc<CohRing> {
        Arc::new(CohRing::assemble(self))
    }

    /// Assembles and validates, failing with the first violated invariant.
    pub fn build(self) -> Result<Arc<CohRing>> {
        let ring = CohRing::assemble(self);
        let report = validate::validate(&ring);
        if let Some(check) = report.first_failure() {
            return Err(Error::validation(&check.name, check.detail.clone()));
        }
        Ok(Arc::new(ring))
    }
}

impl CohRing {
    fn assemble(parts: RingParts) -> Self {
        let index = parts
            .basis
            .iter()
            .enumerate()
            .map(|(i, b)| (b.label.clone(), i))
            .collect();
        let units: Vec<usize> = parts
            .basis
            .iter()
            .enumerate()
            .filter(|(_, b)| b.p == 0 && b.q == 0)
            .map(|(i, _)| i)
            .collect();
        let mut ring = Self {
            name: parts.name,
            dimension: parts.dimension,
            basis: parts.basis,
            index,
            unit: (units.len() == 1).then(|| units[0]),
            top: parts.top,
            products: parts.products,
            partial_products: parts.partial_products,
            tangent_chern: parts.tangent_chern,
            polarization: parts.polarization,
            bundles: parts.bundles,
            pairing: Vec::new(),
        };
        ring.pairing = ring.compute_pairing();
        ring
    }

    fn compute_pairing(&self) -> Vec<Vec<(usize, TauScalar)>> {
        let n = self.dimension;
        let mut out = vec![Vec::new(); self.basis.len()];
        if self.top >= self.basis.len() {
            return out;
        }
        for (i, bi) in self.basis.iter().enumerate() {
            if bi.p > n || bi.q > n {
                continue;
            }
            for j in self.indices_in(n - bi.p, n - bi.q) {
                if let Ok(prod) = self.product(i, j) {
                    if let Some(c) = prod.get(&self.top) {
                        out[i].push((j, c.clone()));
                    }
                }
            }
        }
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn element(&self, i: usize) -> &BasisElement {
        &self.basis[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn unit(&self) -> Option<usize> {
        self.unit
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn partial_products(&self) -> bool {
        self.partial_products
    }

    pub fn polarization(&self) -> Option<usize> {
        self.polarization
    }

    pub fn bundle_docs(&self) -> &BTreeMap<String, BundleDoc> {
        &self.bundles
    }

    pub(crate) fn tangent_chern_coeffs(&self) -> Option<&[Coeffs]> {
        self.tangent_chern.as_deref()
    }

    /// Basis indices in bidegree `(p, q)`.
    pub fn indices_in(&self, p: usize, q: usize) -> impl Iterator<Item = usize> + '_ {
        self.basis
            .iter()
            .enumerate()
            .filter(move |(_, b)| b.p == p && b.q == q)
            .map(|(i, _)| i)
    }

    /// Hodge numbers `h^{p,q}` as a map.
    pub fn hodge_numbers(&self) -> BTreeMap<(usize, usize), usize> {
        let mut out = BTreeMap::new();
        for b in &self.basis {
            *out.entry((b.p, b.q)).or_insert(0) += 1;
        }
        out
    }

    fn slot_is_empty(&self, p: usize, q: usize) -> bool {
        p > self.dimension || q > self.dimension || self.indices_in(p, q).next().is_none()
    }

    /// `e_i * e_j` as a coefficient vector.
    pub fn product(&self, i: usize, j: usize) -> Result<Cow<'_, Coeffs>> {
        if Some(i) == self.unit {
            return Ok(Cow::Owned(Coeffs::from([(j, TauScalar::one())])));
        }
        if Some(j) == self.unit {
            return Ok(Cow::Owned(Coeffs::from([(i, TauScalar::one())])));
        }
        if let Some(c) = self.products.get(&(i, j)) {
            return Ok(Cow::Borrowed(c));
        }
        let (bi, bj) = (&self.basis[i], &self.basis[j]);
        let (p, q) = (bi.p + bj.p, bi.q + bj.q);
        let top_slot = p == self.dimension && q == self.dimension;
        if !self.partial_products || top_slot || self.slot_is_empty(p, q) {
            return Ok(Cow::Owned(Coeffs::new()));
        }
        Err(Error::ProductUnavailable {
            left: bi.label.clone(),
            right: bj.label.clone(),
        })
    }

    /// Products stored in the table, excluding implicit unit products, in a
    /// deterministic order.
    pub(crate) fn explicit_products(&self) -> BTreeMap<(usize, usize), &Coeffs> {
        self.products
            .iter()
            .filter(|((i, j), _)| Some(*i) != self.unit && Some(*j) != self.unit)
            .map(|(k, v)| (*k, v))
            .collect()
    }

    pub(crate) fn explicit_product_entries(&self) -> impl Iterator<Item = (&(usize, usize), &Coeffs)> {
        self.products.iter()
    }

    /// Multiplies two coefficient vectors.
    pub(crate) fn multiply(&self, a: &Coeffs, b: &Coeffs) -> Result<Coeffs> {
        let mut out = Coeffs::new();
        for (i, x) in a {
            for (j, y) in b {
                let prod = self.product(*i, *j)?;
                if prod.is_empty() {
                    continue;
                }
                let xy = x * y;
                for (k, c) in prod.iter() {
                    let term = &xy * c;
                    add_into(&mut out, *k, &term);
                }
            }
        }
        Ok(out)
    }

    /// `integral_alg(a * b)`, using only products that land in the top
    /// bidegree. Works on rings that carry only a Poincare pairing.
    pub(crate) fn integrate_product(&self, a: &Coeffs, b: &Coeffs) -> TauScalar {
        let mut out = TauScalar::zero();
        for (i, x) in a {
            for (j, c) in &self.pairing[*i] {
                if let Some(y) = b.get(j) {
                    out += &(&(x * y) * c);
                }
            }
        }
        out
    }

    /// Trace of a coefficient vector in the requested normalisation.
    ///
    /// The algebraic trace reads off the top coefficient (`integral top = 1`).
    /// The analytic trace is `(-1)^{n(n-1)/2} tau^n` times the algebraic one.
    pub fn trace(&self, a: &Coeffs, mode: TraceMode) -> TauScalar {
        let alg = a.get(&self.top).cloned().unwrap_or_default();
        match mode {
            TraceMode::Algebraic => alg,
            TraceMode::Analytic => self.analytic_factor(&alg),
        }
    }

    pub(crate) fn analytic_factor(&self, alg: &TauScalar) -> TauScalar {
        let n = self.dimension as i64;
        alg.shift_tau(n).scale(&sign(n * (n - 1) / 2))
    }

    /// Pairing `(i, j) -> integral(e_i e_j)` restricted to nonzero entries.
    pub fn pairing_entries(&self, i: usize) -> &[(usize, TauScalar)] {
        &self.pairing[i]
    }
}

pub(crate) fn add_into(map: &mut Coeffs, k: usize, c: &TauScalar) {
    if c.is_zero() {
        return;
    }
    let entry = map.entry(k).or_default();
    *entry += c;
    if entry.is_zero() {
        map.remove(&k);
    }
}

/// `(-1)^{deg_a deg_b}`, the Koszul sign for swapping two basis elements.
pub(crate) fn koszul(a: &BasisElement, b: &BasisElement) -> Rational {
    sign((a.degree() * b.degree()) as i64)
}
