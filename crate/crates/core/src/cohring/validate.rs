use std::collections::BTreeSet;
use std::fmt;

use num::{One, Zero};

use super::{koszul, Coeffs, CohRing};
use crate::scalars::{Rational, TauScalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Per-invariant pass/fail report.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    fn push(&mut self, name: &str, failure: Option<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            passed: failure.is_none(),
            detail: failure.unwrap_or_default(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            if c.passed {
                writeln!(f, "{}: pass", c.name)?;
            } else {
                writeln!(f, "{}: FAIL ({})", c.name, c.detail)?;
            }
        }
        Ok(())
    }
}

/// Checks every ring invariant and reports each one separately.
pub fn validate_ring(ring: &CohRing) -> ValidationReport {
    validate(ring)
}

pub(crate) fn validate(ring: &CohRing) -> ValidationReport {
    let mut report = ValidationReport::default();
    let structural = [
        ("bidegree-range", check_range(ring)),
        ("unit", check_unit(ring)),
        ("top", check_top(ring)),
    ];
    let structural_ok = structural.iter().all(|(_, r)| r.is_none());
    for (name, r) in structural {
        report.push(name, r);
    }
    if !structural_ok {
        return report;
    }
    report.push("grading", check_grading(ring));
    report.push("unit-products", check_unit_products(ring));
    report.push("graded-commutativity", check_commutativity(ring));
    report.push("associativity", check_associativity(ring));
    report.push("poincare", check_poincare(ring));
    report.push("chern-degrees", check_chern(ring));
    report.push("polarization", check_polarization(ring));
    report
}

fn label(ring: &CohRing, i: usize) -> &str {
    &ring.element(i).label
}

fn check_range(ring: &CohRing) -> Option<String> {
    let n = ring.dimension();
    let mut seen = BTreeSet::new();
    for b in ring.basis() {
        if b.p > n || b.q > n {
            return Some(format!("`{}` has bidegree ({},{}) outside 0..={n}", b.label, b.p, b.q));
        }
        if !seen.insert(b.label.as_str()) {
            return Some(format!("duplicate label `{}`", b.label));
        }
    }
    None
}

fn check_unit(ring: &CohRing) -> Option<String> {
    let count = ring.indices_in(0, 0).count();
    (count != 1).then(|| format!("expected exactly one (0,0) basis element, found {count}"))
}

fn check_top(ring: &CohRing) -> Option<String> {
    let n = ring.dimension();
    if ring.top() >= ring.rank() {
        return Some("no top class".into());
    }
    let b = ring.element(ring.top());
    (b.p != n || b.q != n).then(|| format!("top class `{}` is not in bidegree ({n},{n})", b.label))
}

fn check_grading(ring: &CohRing) -> Option<String> {
    let n = ring.dimension();
    for ((i, j), result) in ring.explicit_product_entries() {
        let (bi, bj) = (ring.element(*i), ring.element(*j));
        let (p, q) = (bi.p + bj.p, bi.q + bj.q);
        for k in result.keys() {
            let bk = ring.element(*k);
            if bk.p != p || bk.q != q || p > n || q > n {
                return Some(format!(
                    "{} * {} has a term `{}` in bidegree ({},{}), expected ({p},{q})",
                    bi.label, bj.label, bk.label, bk.p, bk.q
                ));
            }
        }
    }
    None
}

fn check_unit_products(ring: &CohRing) -> Option<String> {
    let u = ring.unit()?;
    for ((i, j), result) in ring.explicit_product_entries() {
        let other = if *i == u {
            *j
        } else if *j == u {
            *i
        } else {
            continue;
        };
        let expected = Coeffs::from([(other, TauScalar::one())]);
        if *result != expected {
            return Some(format!(
                "{} * {} does not act as the unit",
                label(ring, *i),
                label(ring, *j)
            ));
        }
    }
    None
}

fn check_commutativity(ring: &CohRing) -> Option<String> {
    for i in 0..ring.rank() {
        for j in i..ring.rank() {
            let (Ok(ab), Ok(ba)) = (ring.product(i, j), ring.product(j, i)) else {
                continue;
            };
            let s = koszul(ring.element(i), ring.element(j));
            let ba_signed: Coeffs = ba
                .iter()
                .map(|(k, c)| (*k, c.scale(&s)))
                .filter(|(_, c)| !c.is_zero())
                .collect();
            if *ab != ba_signed {
                return Some(format!(
                    "{a} * {b} != (-1)^(|{a}||{b}|) {b} * {a}",
                    a = label(ring, i),
                    b = label(ring, j)
                ));
            }
        }
    }
    None
}

fn check_associativity(ring: &CohRing) -> Option<String> {
    let n = ring.dimension();
    let unit = ring.unit();
    let others: Vec<usize> = (0..ring.rank()).filter(|i| Some(*i) != unit).collect();
    for &i in &others {
        for &j in &others {
            for &k in &others {
                let (bi, bj, bk) = (ring.element(i), ring.element(j), ring.element(k));
                let (p, q) = (bi.p + bj.p + bk.p, bi.q + bj.q + bk.q);
                if p > n || q > n || ring.indices_in(p, q).next().is_none() {
                    continue;
                }
                let ei = Coeffs::from([(i, TauScalar::one())]);
                let ej = Coeffs::from([(j, TauScalar::one())]);
                let ek = Coeffs::from([(k, TauScalar::one())]);
                let left = ring.multiply(&ei, &ej).and_then(|ij| ring.multiply(&ij, &ek));
                let right = ring.multiply(&ej, &ek).and_then(|jk| ring.multiply(&ei, &jk));
                if let (Ok(l), Ok(r)) = (left, right) {
                    if l != r {
                        return Some(format!(
                            "({} * {}) * {} != {} * ({} * {})",
                            bi.label, bj.label, bk.label, bi.label, bj.label, bk.label
                        ));
                    }
                }
            }
        }
    }
    None
}

/// Evaluates at a rational value of `tau`.
fn specialize(c: &TauScalar, tau: &Rational) -> Rational {
    let mut out = Rational::zero();
    for (k, v) in c.terms() {
        let pow = if k >= 0 {
            num::pow(tau.clone(), k as usize)
        } else {
            num::pow(tau.recip(), (-k) as usize)
        };
        out += v * pow;
    }
    out
}

pub(crate) fn rank_over_q(mut m: Vec<Vec<Rational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|r| !m[*r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = m[rank][col].recip();
        for r in 0..rows {
            if r == rank || m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            for c in col..cols {
                if m[rank][c].is_zero() {
                    continue;
                }
                let delta = &factor * &m[rank][c];
                m[r][c] -= delta;
            }
        }
        rank += 1;
    }
    rank
}

fn check_poincare(ring: &CohRing) -> Option<String> {
    let n = ring.dimension();
    // full rank at a specialisation of tau implies full rank over Q(tau)
    let samples = [
        Rational::new(7.into(), 3.into()),
        Rational::new((-5).into(), 11.into()),
        Rational::one(),
    ];
    for ((p, q), _) in ring.hodge_numbers() {
        let rows: Vec<usize> = ring.indices_in(p, q).collect();
        let cols: Vec<usize> = ring.indices_in(n - p, n - q).collect();
        if rows.len() != cols.len() {
            return Some(format!(
                "h^({p},{q}) = {} but h^({},{}) = {}",
                rows.len(),
                n - p,
                n - q,
                cols.len()
            ));
        }
        let entries: Vec<Vec<TauScalar>> = rows
            .iter()
            .map(|i| {
                cols.iter()
                    .map(|j| {
                        ring.pairing_entries(*i)
                            .iter()
                            .find(|(k, _)| k == j)
                            .map(|(_, c)| c.clone())
                            .unwrap_or_default()
                    })
                    .collect()
            })
            .collect();
        let full = samples.iter().any(|tau| {
            let m = entries
                .iter()
                .map(|row| row.iter().map(|c| specialize(c, tau)).collect())
                .collect();
            rank_over_q(m) == rows.len()
        });
        if !full {
            return Some(format!(
                "pairing between ({p},{q}) and ({},{}) is degenerate",
                n - p,
                n - q
            ));
        }
    }
    None
}

fn check_chern(ring: &CohRing) -> Option<String> {
    let chern = ring.tangent_chern_coeffs()?;
    if chern.len() > ring.dimension() {
        return Some(format!(
            "{} Chern classes for dimension {}",
            chern.len(),
            ring.dimension()
        ));
    }
    for (idx, c) in chern.iter().enumerate() {
        let k = idx + 1;
        for i in c.keys() {
            let b = ring.element(*i);
            if b.p != k || b.q != k {
                return Some(format!("c_{k} has a term `{}` in bidegree ({},{})", b.label, b.p, b.q));
            }
        }
    }
    None
}

fn check_polarization(ring: &CohRing) -> Option<String> {
    let i = ring.polarization()?;
    let b = ring.element(i);
    (b.p != 1 || b.q != 1).then(|| format!("polarization `{}` is not in bidegree (1,1)", b.label))
}
