//! Formal families over a polydisk on the cohomology model.
//!
//! A family is given by constant Kodaira-Spencer operators `kappa_j`, each a
//! derivation of the ring of bidegree `(-1,+1)`. Sections are polynomials in
//! `t_1..t_mu` (truncated at `t_order`) and Laurent polynomials in `u` whose
//! stored range reaches down to `u^{-headroom}`. The connection is
//! `nabla_j = d/dt_j - kappa_j / u`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cohring::{
    add_into, build_builtin, same_ring, terms_to_coeffs, Builtin, ClassTermDoc, Coeffs, CohClass, CohRing,
};
use crate::error::{Error, Result};
use crate::scalars::TauScalar;

/// A bidegree `(-1,+1)` derivation, stored by its values on the basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Kappa {
    images: Vec<Coeffs>,
}

impl Kappa {
    pub fn image(&self, i: usize) -> &Coeffs {
        &self.images[i]
    }

    pub fn apply(&self, c: &Coeffs) -> Coeffs {
        let mut out = Coeffs::new();
        for (i, x) in c {
            for (k, y) in &self.images[*i] {
                add_into(&mut out, *k, &(x * y));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(Coeffs::is_empty)
    }
}

/// `mu` commuting (or not: see [`mc_check`]) contraction operators.
#[derive(Clone, Debug, PartialEq)]
pub struct DeformationSpec {
    ring: Arc<CohRing>,
    kappa: Vec<Kappa>,
    t_order: usize,
    u_headroom: u32,
}

impl DeformationSpec {
    /// Builds a spec from values of each `kappa_j` on some basis elements.
    ///
    /// Values are propagated by the Leibniz rule through products whose
    /// result is a single basis element; anything still unspecified maps to
    /// zero. The bidegree shift and the derivation property are then checked
    /// on every basis element and every available basis product.
    pub fn new(
        ring: &Arc<CohRing>,
        t_order: usize,
        u_headroom: u32,
        generators: Vec<BTreeMap<usize, Coeffs>>,
    ) -> Result<Self> {
        let kappa = generators
            .into_iter()
            .map(|g| extend_by_leibniz(ring, g))
            .collect::<Result<Vec<_>>>()?;
        for (j, k) in kappa.iter().enumerate() {
            check_degree(ring, j, k)?;
            check_derivation(ring, j, k)?;
        }
        Ok(Self {
            ring: Arc::clone(ring),
            kappa,
            t_order,
            u_headroom,
        })
    }

    pub fn ring(&self) -> &Arc<CohRing> {
        &self.ring
    }

    pub fn mu(&self) -> usize {
        self.kappa.len()
    }

    pub fn t_order(&self) -> usize {
        self.t_order
    }

    pub fn u_headroom(&self) -> u32 {
        self.u_headroom
    }

    pub fn kappa(&self, j: usize) -> Result<&Kappa> {
        self.kappa.get(j).ok_or(Error::BadDirection {
            index: j,
            mu: self.mu(),
        })
    }

    /// Basis sections `t^e e_k` for `|e| <= 1`, all at `u^0`.
    pub fn basis_corpus(&self, u_order: usize) -> Vec<FamilySection> {
        let mut out = Vec::new();
        let mut exps = vec![vec![0; self.mu()]];
        if self.t_order >= 1 {
            for j in 0..self.mu() {
                let mut e = vec![0; self.mu()];
                e[j] = 1;
                exps.push(e);
            }
        }
        for e in exps {
            for k in 0..self.ring.rank() {
                let c = CohClass::basis(&self.ring, k);
                out.push(FamilySection::new(self, u_order, [(e.clone(), 0, c)]).expect("basis sections are regular"));
            }
        }
        out
    }
}

fn extend_by_leibniz(ring: &Arc<CohRing>, given: BTreeMap<usize, Coeffs>) -> Result<Kappa> {
    let mut images: Vec<Option<Coeffs>> = vec![None; ring.rank()];
    for (i, v) in given {
        if i >= ring.rank() {
            return Err(Error::UnknownLabel(format!("basis index {i}")));
        }
        images[i] = Some(v);
    }
    if let Some(u) = ring.unit() {
        images[u].get_or_insert_with(Coeffs::new);
    }
    let singles: Vec<(usize, usize, usize, TauScalar)> = ring
        .explicit_product_entries()
        .filter(|((i, j), _)| Some(*i) != ring.unit() && Some(*j) != ring.unit())
        .filter_map(|(&(i, j), c)| {
            let mut it = c.iter();
            match (it.next(), it.next()) {
                (Some((k, v)), None) => Some((i, j, *k, v.clone())),
                _ => None,
            }
        })
        .collect();
    loop {
        let mut changed = false;
        for (i, j, k, c) in &singles {
            if images[*k].is_some() {
                continue;
            }
            let (Some(ki), Some(kj)) = (&images[*i], &images[*j]) else {
                continue;
            };
            let left = ring.multiply(ki, &Coeffs::from([(*j, TauScalar::one())]))?;
            let right = ring.multiply(&Coeffs::from([(*i, TauScalar::one())]), kj)?;
            let inv = c.as_rational().filter(|r| *r != num::zero()).map(|r| r.recip());
            let Some(inv) = inv else { continue };
            let mut out = Coeffs::new();
            for (idx, v) in left.iter().chain(right.iter()) {
                add_into(&mut out, *idx, &v.scale(&inv));
            }
            images[*k] = Some(out);
            changed = true;
        }
        if !changed {
            break;
        }
    }
    Ok(Kappa {
        images: images.into_iter().map(Option::unwrap_or_default).collect(),
    })
}

fn check_degree(ring: &CohRing, j: usize, k: &Kappa) -> Result<()> {
    for (i, img) in k.images.iter().enumerate() {
        let b = ring.element(i);
        for t in img.keys() {
            let c = ring.element(*t);
            if b.p == 0 || c.p + 1 != b.p || c.q != b.q + 1 {
                return Err(Error::validation(
                    "kappa-degree",
                    format!(
                        "kappa_{j}({}) has a component on {} of bidegree ({},{})",
                        b.label, c.label, c.p, c.q
                    ),
                ));
            }
        }
    }
    Ok(())
}

fn check_derivation(ring: &CohRing, j: usize, k: &Kappa) -> Result<()> {
    for a in 0..ring.rank() {
        for b in 0..ring.rank() {
            let Ok(ab) = ring.product(a, b) else { continue };
            let lhs = k.apply(&ab);
            let ea = Coeffs::from([(a, TauScalar::one())]);
            let eb = Coeffs::from([(b, TauScalar::one())]);
            let (Ok(l), Ok(r)) = (ring.multiply(k.image(a), &eb), ring.multiply(&ea, k.image(b))) else {
                continue;
            };
            let mut rhs = l;
            for (idx, v) in &r {
                add_into(&mut rhs, *idx, v);
            }
            if lhs != rhs {
                return Err(Error::validation(
                    "kappa-derivation",
                    format!(
                        "kappa_{j} fails the Leibniz rule on {} * {}",
                        ring.element(a).label,
                        ring.element(b).label
                    ),
                ));
            }
        }
    }
    Ok(())
}

/// True iff all `kappa_i` commute pairwise, which is the Maurer-Cartan
/// equation in the abelian harmonic model.
pub fn mc_check(d: &DeformationSpec) -> bool {
    first_noncommuting(d).is_none()
}

fn first_noncommuting(d: &DeformationSpec) -> Option<(usize, usize, String)> {
    for i in 0..d.mu() {
        for j in (i + 1)..d.mu() {
            let (ki, kj) = (&d.kappa[i], &d.kappa[j]);
            for b in 0..d.ring.rank() {
                if ki.apply(kj.image(b)) != kj.apply(ki.image(b)) {
                    return Some((i, j, d.ring.element(b).label.clone()));
                }
            }
        }
    }
    None
}

/// Multi-exponent in `t` and exponent in `u`.
pub type Monomial = (Vec<u32>, i64);

/// A section: `sum c_{e,k} t^e u^k` with `c_{e,k}` a class.
#[derive(Clone, PartialEq)]
pub struct FamilySection {
    ring: Arc<CohRing>,
    mu: usize,
    t_order: usize,
    u_order: usize,
    u_headroom: u32,
    terms: BTreeMap<Monomial, Coeffs>,
}

impl FamilySection {
    pub fn zero(d: &DeformationSpec, u_order: usize) -> Self {
        Self {
            ring: Arc::clone(&d.ring),
            mu: d.mu(),
            t_order: d.t_order,
            u_order,
            u_headroom: d.u_headroom,
            terms: BTreeMap::new(),
        }
    }

    /// A section in the non-negative u-lattice. Terms past `t_order` or
    /// `u_order` are truncated away; negative u-powers are rejected.
    pub fn new(
        d: &DeformationSpec,
        u_order: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, i64, CohClass)>,
    ) -> Result<Self> {
        let mut out = Self::zero(d, u_order);
        for (e, k, c) in terms {
            if k < 0 {
                return Err(Error::SectionPole(k));
            }
            if e.len() != d.mu() {
                return Err(Error::BadDirection {
                    index: e.len(),
                    mu: d.mu(),
                });
            }
            if !same_ring(c.ring(), &d.ring) {
                return Err(Error::RingMismatch);
            }
            out.add_term((e, k), c.coeffs());
        }
        Ok(out)
    }

    pub fn constant(d: &DeformationSpec, c: &CohClass, u_order: usize) -> Result<Self> {
        Self::new(d, u_order, [(vec![0; d.mu()], 0, c.clone())])
    }

    fn empty_like(&self) -> Self {
        Self {
            terms: BTreeMap::new(),
            ..self.clone()
        }
    }

    fn add_term(&mut self, m: Monomial, c: &Coeffs) {
        let deg: u32 = m.0.iter().sum();
        if deg as usize > self.t_order || m.1 > self.u_order as i64 {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_default();
        for (k, v) in c {
            add_into(slot, *k, v);
        }
        if slot.is_empty() {
            self.terms.remove(&m);
        }
    }

    pub fn ring(&self) -> &Arc<CohRing> {
        &self.ring
    }

    pub fn u_order(&self) -> usize {
        self.u_order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, CohClass)> + '_ {
        self.terms
            .iter()
            .map(|(m, c)| (m, CohClass::from_coeffs(&self.ring, c.clone())))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Least u-exponent present; `None` for the zero section.
    pub fn u_valuation(&self) -> Option<i64> {
        self.terms.keys().map(|(_, k)| *k).min()
    }

    /// True when no monomial carries a positive `t` or nonzero `u` power.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|(e, k)| *k == 0 && e.iter().all(|x| *x == 0))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        if self.u_order != other.u_order {
            return Err(Error::UOrderMismatch {
                left: self.u_order,
                right: other.u_order,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-TauScalar::one()))
    }

    pub fn scale(&self, s: &TauScalar) -> Self {
        let mut out = self.empty_like();
        for (m, c) in &self.terms {
            let c: Coeffs = c.iter().map(|(k, v)| (*k, v * s)).collect();
            out.add_term(m.clone(), &c);
        }
        out
    }

    /// Multiplies by `u^shift`. Terms pushed past `u_order` are dropped;
    /// terms pushed below `-headroom` are an error.
    pub fn shift_u(&self, shift: i64) -> Result<Self> {
        let mut out = self.empty_like();
        for ((e, k), c) in &self.terms {
            let nk = k + shift;
            if nk < -(self.u_headroom as i64) {
                return Err(Error::UHeadroomExhausted {
                    exponent: nk,
                    headroom: self.u_headroom,
                });
            }
            out.add_term((e.clone(), nk), c);
        }
        Ok(out)
    }

    /// `t * s` with `t` constant: every coefficient is multiplied on the left.
    pub fn cup_left(&self, t: &CohClass) -> Result<Self> {
        if !same_ring(t.ring(), &self.ring) {
            return Err(Error::RingMismatch);
        }
        let mut out = self.empty_like();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &self.ring.multiply(t.coeffs(), c)?);
        }
        Ok(out)
    }

    pub fn apply_kappa(&self, k: &Kappa) -> Self {
        let mut out = self.empty_like();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &k.apply(c));
        }
        out
    }

    pub fn d_dt(&self, j: usize) -> Result<Self> {
        if j >= self.mu {
            return Err(Error::BadDirection { index: j, mu: self.mu });
        }
        let mut out = self.empty_like();
        for ((e, k), c) in &self.terms {
            if e[j] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[j] -= 1;
            let f = TauScalar::from_int(e[j] as i64);
            let c: Coeffs = c.iter().map(|(i, v)| (*i, v * &f)).collect();
            out.add_term((ne, *k), &c);
        }
        Ok(out)
    }
}

/// Renders as `[t^(e) u^k] (class) + ...` in monomial order.
impl fmt::Display for FamilySection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((e, k), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let e: Vec<String> = e.iter().map(u32::to_string).collect();
            write!(
                f,
                "[t^({}) u^{k}] ({})",
                e.join(","),
                CohClass::from_coeffs(&self.ring, c.clone())
            )?;
        }
        Ok(())
    }
}

impl fmt::Debug for FamilySection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FamilySection({self})")
    }
}

fn check_section(s: &FamilySection, d: &DeformationSpec) -> Result<()> {
    if !same_ring(&s.ring, &d.ring) {
        return Err(Error::RingMismatch);
    }
    if s.mu != d.mu() {
        return Err(Error::BadDirection {
            index: s.mu,
            mu: d.mu(),
        });
    }
    Ok(())
}

/// `nabla_j s = d s / d t_j - kappa_j(s) / u`.
pub fn connect(s: &FamilySection, j: usize, d: &DeformationSpec) -> Result<FamilySection> {
    check_section(s, d)?;
    let k = d.kappa(j)?;
    let pole = s.apply_kappa(k).shift_u(-1)?;
    s.d_dt(j)?.sub(&pole)
}

/// Outcome of a family check over a corpus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    fn new(name: &str) -> Self {
        Self {
            name: name.into(),
            passed: true,
            checked: 0,
            failures: Vec::new(),
        }
    }

    fn fail(&mut self, why: String) {
        self.passed = false;
        self.failures.push(why);
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed {
            write!(f, "{}: pass ({} cases)", self.name, self.checked)
        } else {
            write!(
                f,
                "{}: FAIL ({} of {} cases; first: {})",
                self.name,
                self.failures.len(),
                self.checked.max(self.failures.len()),
                self.failures[0]
            )
        }
    }
}

fn precondition(report: &mut CheckReport, d: &DeformationSpec) -> bool {
    match first_noncommuting(d) {
        Some((i, j, label)) => {
            report.fail(format!(
                "precondition failed: kappa_{i} and kappa_{j} do not commute on {label} (Maurer-Cartan check is false)"
            ));
            false
        }
        None => true,
    }
}

/// `u * nabla_j` keeps every corpus section of non-negative valuation in
/// the non-negative lattice.
pub fn transversality_check(d: &DeformationSpec, corpus: &[FamilySection]) -> CheckReport {
    let mut report = CheckReport::new("transversality");
    if !precondition(&mut report, d) {
        return report;
    }
    for (n, s) in corpus.iter().enumerate() {
        if s.u_valuation().is_some_and(|v| v < 0) {
            continue;
        }
        for j in 0..d.mu() {
            report.checked += 1;
            match connect(s, j, d).and_then(|x| x.shift_u(1)) {
                Ok(x) if x.u_valuation().is_none_or(|v| v >= 0) => {}
                Ok(x) => report.fail(format!(
                    "section {n}, direction {j}: u*nabla has valuation {:?}",
                    x.u_valuation()
                )),
                Err(e) => report.fail(format!("section {n}, direction {j}: {e}")),
            }
        }
    }
    report
}

/// `[nabla_i, nabla_j] = 0` on the basis corpus of the spec.
pub fn flatness_check(d: &DeformationSpec) -> CheckReport {
    let mut report = CheckReport::new("flatness");
    if !precondition(&mut report, d) {
        return report;
    }
    let corpus = d.basis_corpus(1);
    for i in 0..d.mu() {
        for j in (i + 1)..d.mu() {
            for (n, s) in corpus.iter().enumerate() {
                report.checked += 1;
                let comm = connect(s, j, d)
                    .and_then(|x| connect(&x, i, d))
                    .and_then(|ij| connect(&connect(s, i, d)?, j, d).and_then(|ji| ij.sub(&ji)));
                match comm {
                    Ok(c) if c.is_zero() => {}
                    Ok(c) => report.fail(format!("[nabla_{i}, nabla_{j}] on section {n} is {c}")),
                    Err(e) => report.fail(format!("[nabla_{i}, nabla_{j}] on section {n}: {e}")),
                }
            }
        }
    }
    report
}

/// The constant class carried by a section; it must be a unital class at
/// `t^0 u^0`.
pub fn twist_class_from_section(s: &FamilySection) -> Result<CohClass> {
    if !s.is_constant() {
        return Err(Error::TNotConstant);
    }
    let c = s
        .terms
        .values()
        .next()
        .cloned()
        .map(|c| CohClass::from_coeffs(&s.ring, c))
        .unwrap_or_else(|| CohClass::zero(&s.ring));
    if !c.is_unital() {
        return Err(Error::TNotUnital);
    }
    Ok(c)
}

/// `nabla_j(T s) - T nabla_j(s)` for a constant unital class `T`.
pub fn intertwining_defect(t: &CohClass, s: &FamilySection, j: usize, d: &DeformationSpec) -> Result<FamilySection> {
    if !t.is_unital() {
        return Err(Error::TNotUnital);
    }
    let ts = s.cup_left(t)?;
    connect(&ts, j, d)?.sub(&connect(s, j, d)?.cup_left(t)?)
}

/// `-(kappa_j T) s / u`, the closed form of [`intertwining_defect`].
pub fn predicted_defect(t: &CohClass, s: &FamilySection, j: usize, d: &DeformationSpec) -> Result<FamilySection> {
    let kt = CohClass::from_coeffs(&d.ring, d.kappa(j)?.apply(t.coeffs()));
    s.cup_left(&kt)?.shift_u(-1).map(|x| x.scale(&-TauScalar::one()))
}

/// `kappa_j(T s) - T kappa_j(s) - kappa_j(T) s`, zero for a derivation.
pub fn leibniz_defect(t: &CohClass, s: &FamilySection, j: usize, d: &DeformationSpec) -> Result<FamilySection> {
    let k = d.kappa(j)?;
    let kt = CohClass::from_coeffs(&d.ring, k.apply(t.coeffs()));
    s.cup_left(t)?
        .apply_kappa(k)
        .sub(&s.apply_kappa(k).cup_left(t)?)?
        .sub(&s.cup_left(&kt)?)
}

/// True when `kappa_j(T) = 0` for every direction.
pub fn kappa_closed(t: &CohClass, d: &DeformationSpec) -> bool {
    d.kappa.iter().all(|k| k.apply(t.coeffs()).is_empty())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KappaValueDoc {
    #[serde(default)]
    pub direction: usize,
    pub on: String,
    pub value: Vec<ClassTermDoc>,
}

/// Family document; `ring` is resolved by the caller.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyDoc {
    pub ring: String,
    pub mu: usize,
    pub t_order: usize,
    #[serde(default = "default_headroom")]
    pub u_headroom: u32,
    pub kappa: Vec<KappaValueDoc>,
}

fn default_headroom() -> u32 {
    2
}

impl FamilyDoc {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_spec(&self, ring: &Arc<CohRing>) -> Result<DeformationSpec> {
        let mut gens = vec![BTreeMap::new(); self.mu];
        for v in &self.kappa {
            if v.direction >= self.mu {
                return Err(Error::BadDirection {
                    index: v.direction,
                    mu: self.mu,
                });
            }
            let on = ring.index_of(&v.on)?;
            let value = terms_to_coeffs(&v.value, |l| ring.index_of(l).ok())?;
            gens[v.direction].insert(on, value);
        }
        DeformationSpec::new(ring, self.t_order, self.u_headroom, gens)
    }
}

fn generator(ring: &CohRing, pairs: &[(&str, &[(&str, i64)])]) -> BTreeMap<usize, Coeffs> {
    pairs
        .iter()
        .map(|(on, value)| {
            let c = value
                .iter()
                .map(|(l, x)| (ring.index_of(l).expect("built-in label"), TauScalar::from_int(*x)))
                .collect();
            (ring.index_of(on).expect("built-in label"), c)
        })
        .collect()
}

/// Names accepted by [`builtin_family`].
pub const BUILTIN_FAMILIES: &[&str] = &["e", "k3", "k3-2", "quintic", "quintic-noncommuting"];

/// Built-in specs: the elliptic curve (`dz -> dzb`), K3 with one or two
/// commuting directions, the quintic diamond with one direction, and a
/// quintic pair that fails the Maurer-Cartan check.
pub fn builtin_family(name: &str) -> Result<DeformationSpec> {
    match name {
        "e" => {
            let r = build_builtin(&Builtin::EllipticCurve)?;
            let g = generator(&r, &[("dz", &[("dzb", 1)])]);
            DeformationSpec::new(&r, 2, 2, vec![g])
        }
        "k3" | "k3-2" => {
            let r = build_builtin(&Builtin::K3)?;
            let mut gens = vec![generator(&r, &[("s", &[("e1", 1)]), ("e1", &[("sb", -2)])])];
            if name == "k3-2" {
                gens.push(generator(&r, &[("s", &[("e2", 1)]), ("e2", &[("sb", 2)])]));
            }
            DeformationSpec::new(&r, 2, 2, gens)
        }
        "quintic" => {
            let r = build_builtin(&Builtin::QuinticDiamond)?;
            let g = generator(
                &r,
                &[
                    ("x30", &[("x21_1", 1)]),
                    ("x21_1", &[("x12_1", 1), ("x12_2", 2)]),
                    ("x21_2", &[("x12_1", 2)]),
                    ("x12_1", &[("x03", -1)]),
                ],
            );
            DeformationSpec::new(&r, 2, 2, vec![g])
        }
        "quintic-noncommuting" => {
            let r = build_builtin(&Builtin::QuinticDiamond)?;
            let g1 = generator(&r, &[("x30", &[("x21_1", 1)]), ("x12_1", &[("x03", -1)])]);
            let g2 = generator(&r, &[("x21_1", &[("x12_1", 1)])]);
            DeformationSpec::new(&r, 2, 2, vec![g1, g2])
        }
        _ => Err(Error::Parse(format!("unknown built-in family `{name}`"))),
    }
}
