//! JSON ring documents.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{add_into, BasisElement, Coeffs, CohRing, RingParts};
use crate::error::{Error, Result};
use crate::scalars::TauScalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisDoc {
    pub label: String,
    pub p: usize,
    pub q: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassTermDoc {
    pub label: String,
    pub coeff: TauScalar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductDoc {
    pub left: String,
    pub right: String,
    pub result: Vec<ClassTermDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChernDoc {
    pub k: usize,
    pub class: Vec<ClassTermDoc>,
}

/// Chern data of a bundle, as embedded in a ring document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleDoc {
    pub rank: i64,
    #[serde(default)]
    pub chern: Vec<ChernDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RingDoc {
    #[serde(default)]
    pub name: Option<String>,
    pub dimension: usize,
    pub basis: Vec<BasisDoc>,
    pub top: Option<String>,
    #[serde(default)]
    pub products: Vec<ProductDoc>,
    #[serde(default)]
    pub tangent_chern: Option<Vec<ChernDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polarization: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub partial_products: bool,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bundles: BTreeMap<String, BundleDoc>,
}

pub(crate) fn terms_to_coeffs(terms: &[ClassTermDoc], lookup: impl Fn(&str) -> Option<usize>) -> Result<Coeffs> {
    let mut out = Coeffs::new();
    for t in terms {
        let i = lookup(&t.label).ok_or_else(|| Error::UnknownLabel(t.label.clone()))?;
        add_into(&mut out, i, &t.coeff);
    }
    Ok(out)
}

pub(crate) fn coeffs_to_terms(ring: &CohRing, c: &Coeffs) -> Vec<ClassTermDoc> {
    c.iter()
        .map(|(k, v)| ClassTermDoc {
            label: ring.element(*k).label.clone(),
            coeff: v.clone(),
        })
        .collect()
}

fn chern_from_docs(docs: &[ChernDoc], dimension: usize, lookup: impl Fn(&str) -> Option<usize>) -> Result<Vec<Coeffs>> {
    let max_k = docs.iter().map(|d| d.k).max().unwrap_or(0).max(1);
    if docs.iter().any(|d| d.k == 0) {
        return Err(Error::Parse("Chern classes are indexed from k = 1".into()));
    }
    if max_k > dimension.max(1) {
        return Err(Error::BadChernDegrees { k: max_k });
    }
    let mut out = vec![Coeffs::new(); max_k];
    for d in docs {
        let c = terms_to_coeffs(&d.class, &lookup)?;
        for (i, v) in c {
            add_into(&mut out[d.k - 1], i, &v);
        }
    }
    Ok(out)
}

impl RingDoc {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("ring documents serialise")
    }

    /// Raw parts, before validation. Unknown labels are parse errors; a
    /// missing or unknown top label is a validation error on `top`.
    pub fn to_parts(&self) -> Result<RingParts> {
        let basis: Vec<BasisElement> = self
            .basis
            .iter()
            .map(|b| BasisElement::new(b.label.clone(), b.p, b.q))
            .collect();
        let lookup = |l: &str| basis.iter().position(|b| b.label == l);
        let top = match &self.top {
            Some(t) => {
                lookup(t).ok_or_else(|| Error::validation("top", format!("top label `{t}` is not a basis element")))?
            }
            None => return Err(Error::validation("top", "document has no top class")),
        };
        let mut parts = RingParts::new(
            self.name.clone().unwrap_or_else(|| "ring".into()),
            self.dimension,
            basis.clone(),
            top,
        );
        for p in &self.products {
            let i = lookup(&p.left).ok_or_else(|| Error::UnknownLabel(p.left.clone()))?;
            let j = lookup(&p.right).ok_or_else(|| Error::UnknownLabel(p.right.clone()))?;
            let result = terms_to_coeffs(&p.result, lookup)?;
            parts.set_product(i, j, result);
        }
        if let Some(chern) = &self.tangent_chern {
            parts.tangent_chern = Some(chern_from_docs(chern, self.dimension, lookup)?);
        }
        if let Some(pol) = &self.polarization {
            parts.polarization = Some(lookup(pol).ok_or_else(|| Error::UnknownLabel(pol.clone()))?);
        }
        parts.partial_products = self.partial_products;
        parts.bundles = self.bundles.clone();
        Ok(parts)
    }

    pub fn from_ring(ring: &CohRing) -> Self {
        let products = ring
            .explicit_products()
            .into_iter()
            .map(|((i, j), c)| ProductDoc {
                left: ring.element(i).label.clone(),
                right: ring.element(j).label.clone(),
                result: coeffs_to_terms(ring, c),
            })
            .collect();
        let tangent_chern = ring.tangent_chern_coeffs().map(|cs| {
            cs.iter()
                .enumerate()
                .map(|(i, c)| ChernDoc {
                    k: i + 1,
                    class: coeffs_to_terms(ring, c),
                })
                .collect()
        });
        RingDoc {
            name: Some(ring.name().to_string()),
            dimension: ring.dimension(),
            basis: ring
                .basis()
                .iter()
                .map(|b| BasisDoc {
                    label: b.label.clone(),
                    p: b.p,
                    q: b.q,
                })
                .collect(),
            top: Some(ring.element(ring.top()).label.clone()),
            products,
            tangent_chern,
            polarization: ring.polarization().map(|i| ring.element(i).label.clone()),
            partial_products: ring.partial_products(),
            bundles: ring.bundle_docs().clone(),
        }
    }
}

impl CohRing {
    /// Parses and validates a ring document.
    pub fn load(text: &str) -> Result<Arc<CohRing>> {
        RingDoc::from_json(text)?.to_parts()?.build()
    }

    pub fn to_json(&self) -> String {
        RingDoc::from_ring(self).to_json()
    }
}

/// Parses and validates a ring document.
pub fn load_ring(text: &str) -> Result<Arc<CohRing>> {
    CohRing::load(text)
}
