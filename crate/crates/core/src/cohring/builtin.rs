//! Built-in test rings: projective spaces, the elliptic curve, K3, products,
//! and Calabi-Yau rings generated from a Hodge diamond.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num::BigInt;

use super::{koszul, BasisElement, Coeffs, CohRing, RingParts};
use crate::error::{Error, Result};
use crate::scalars::{Rational, TauScalar};

/// Names accepted by [`build_builtin`] and the `builtin:` URI scheme.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Builtin {
    ProjectiveSpace(usize),
    EllipticCurve,
    K3,
    QuinticDiamond,
    Product(Box<Builtin>, Box<Builtin>),
    /// Diamond rows `h[p][q]`, `p, q = 0..=n`.
    FormalCy(Vec<Vec<usize>>),
}

impl Builtin {
    /// The named built-ins exercised by the test and acceptance sweeps.
    pub fn all() -> Vec<Builtin> {
        vec![
            Builtin::ProjectiveSpace(1),
            Builtin::ProjectiveSpace(2),
            Builtin::ProjectiveSpace(3),
            Builtin::ProjectiveSpace(4),
            Builtin::EllipticCurve,
            Builtin::K3,
            Builtin::QuinticDiamond,
        ]
    }

    pub fn calabi_yau() -> Vec<Builtin> {
        vec![Builtin::EllipticCurve, Builtin::K3, Builtin::QuinticDiamond]
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::ProjectiveSpace(n) => write!(f, "p{n}"),
            Builtin::EllipticCurve => write!(f, "e"),
            Builtin::K3 => write!(f, "k3"),
            Builtin::QuinticDiamond => write!(f, "quintic-diamond"),
            Builtin::Product(a, b) => write!(f, "{a}x{b}"),
            Builtin::FormalCy(d) => {
                let rows: Vec<String> = d
                    .iter()
                    .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
                    .collect();
                write!(f, "cy[{}]", rows.join(";"))
            }
        }
    }
}

impl FromStr for Builtin {
    type Err = Error;

    /// Parses `p<n>`, `e`, `k3`, `quintic-diamond`, `AxB` products and
    /// `cy[h00,h01,..;h10,..;..]` diamonds.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("cy[").and_then(|r| r.strip_suffix(']')) {
            let rows = inner
                .split(';')
                .map(|row| {
                    row.split(',')
                        .map(|x| {
                            x.trim()
                                .parse::<usize>()
                                .map_err(|_| Error::Parse(format!("bad diamond entry `{x}`")))
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(Builtin::FormalCy(rows));
        }
        if let Some((a, b)) = s.split_once('x') {
            if !a.is_empty() && !b.is_empty() {
                return Ok(Builtin::Product(Box::new(a.parse()?), Box::new(b.parse()?)));
            }
        }
        match s {
            "e" | "elliptic" => Ok(Builtin::EllipticCurve),
            "k3" => Ok(Builtin::K3),
            "quintic-diamond" | "quintic" => Ok(Builtin::QuinticDiamond),
            _ => {
                let n = s
                    .strip_prefix('p')
                    .and_then(|d| d.parse::<usize>().ok())
                    .filter(|n| *n >= 1)
                    .ok_or_else(|| Error::Parse(format!("unknown built-in ring `{s}`")))?;
                Ok(Builtin::ProjectiveSpace(n))
            }
        }
    }
}

fn cache() -> &'static Mutex<HashMap<Builtin, Arc<CohRing>>> {
    static CACHE: OnceLock<Mutex<HashMap<Builtin, Arc<CohRing>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Builds (or fetches the cached copy of) a built-in ring. All built-ins
/// pass [`super::validate_ring`].
pub fn build_builtin(b: &Builtin) -> Result<Arc<CohRing>> {
    if let Some(r) = cache().lock().unwrap().get(b) {
        return Ok(Arc::clone(r));
    }
    let ring = match b {
        Builtin::ProjectiveSpace(n) => projective_space_parts(*n).build()?,
        Builtin::EllipticCurve => elliptic_curve_parts().build()?,
        Builtin::K3 => k3_parts().build()?,
        Builtin::QuinticDiamond => quintic_parts()?.build()?,
        Builtin::Product(x, y) => product_parts(&*build_builtin(x)?, &*build_builtin(y)?)?.build()?,
        Builtin::FormalCy(d) => formal_cy_parts(d)?.build()?,
    };
    cache().lock().unwrap().insert(b.clone(), Arc::clone(&ring));
    Ok(ring)
}

pub fn projective_space(n: usize) -> Arc<CohRing> {
    build_builtin(&Builtin::ProjectiveSpace(n)).expect("projective space is valid")
}

pub fn elliptic_curve() -> Arc<CohRing> {
    build_builtin(&Builtin::EllipticCurve).expect("elliptic curve is valid")
}

pub fn k3() -> Arc<CohRing> {
    build_builtin(&Builtin::K3).expect("K3 is valid")
}

pub fn quintic_diamond() -> Arc<CohRing> {
    build_builtin(&Builtin::QuinticDiamond).expect("quintic diamond is valid")
}

pub fn product(a: &Builtin, b: &Builtin) -> Result<Arc<CohRing>> {
    build_builtin(&Builtin::Product(Box::new(a.clone()), Box::new(b.clone())))
}

pub fn formal_cy(diamond: &[Vec<usize>]) -> Result<Arc<CohRing>> {
    build_builtin(&Builtin::FormalCy(diamond.to_vec()))
}

fn one() -> TauScalar {
    TauScalar::one()
}

fn int(n: i64) -> TauScalar {
    TauScalar::from_int(n)
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn hpow_label(k: usize) -> String {
    match k {
        0 => "1".into(),
        1 => "h".into(),
        _ => format!("h^{k}"),
    }
}

/// `H^*(P^n) = Q[h]/h^{n+1}`, `c(T) = (1+h)^{n+1}`, polarised by `h`.
fn projective_space_parts(n: usize) -> RingParts {
    let basis = (0..=n).map(|k| BasisElement::new(hpow_label(k), k, k)).collect();
    let mut parts = RingParts::new(format!("p{n}"), n, basis, n);
    for a in 1..=n {
        for b in 1..=n {
            if a + b <= n {
                parts.set_product(a, b, [(a + b, one())]);
            }
        }
    }
    let chern = (1..=n)
        .map(|k| Coeffs::from([(k, TauScalar::from_rational(Rational::from_integer(binomial(n + 1, k))))]))
        .collect();
    parts.tangent_chern = Some(chern);
    parts.polarization = Some(1);
    parts
}

/// `1, dz, dzb, pt` with `dz * dzb = pt = -dzb * dz`; `c_1 = 0`, polarised by
/// the point class (degree one).
fn elliptic_curve_parts() -> RingParts {
    let basis = vec![
        BasisElement::new("1", 0, 0),
        BasisElement::new("dz", 1, 0),
        BasisElement::new("dzb", 0, 1),
        BasisElement::new("pt", 1, 1),
    ];
    let mut parts = RingParts::new("e", 1, basis, 3);
    parts.set_product(1, 2, [(3, one())]);
    parts.set_product(2, 1, [(3, -one())]);
    parts.tangent_chern = Some(vec![Coeffs::new()]);
    parts.polarization = Some(3);
    parts
}

/// Basis `1, s (2,0), sb (0,2), e1..e20 (1,1), pt`. `s * sb = pt`; the
/// `(1,1)` lattice is diagonal with `e1^2 = 2 pt` and `ei^2 = -2 pt` for
/// `i >= 2` (signature (1,19)). `c_1 = 0`, `c_2 = 24 pt`, polarised by `e1`.
fn k3_parts() -> RingParts {
    let mut basis = vec![
        BasisElement::new("1", 0, 0),
        BasisElement::new("s", 2, 0),
        BasisElement::new("sb", 0, 2),
    ];
    for i in 1..=20 {
        basis.push(BasisElement::new(format!("e{i}"), 1, 1));
    }
    basis.push(BasisElement::new("pt", 2, 2));
    let pt = basis.len() - 1;
    let mut parts = RingParts::new("k3", 2, basis, pt);
    parts.set_product(1, 2, [(pt, one())]);
    parts.set_product(2, 1, [(pt, one())]);
    for i in 0..20 {
        let idx = 3 + i;
        let self_int = if i == 0 { 2 } else { -2 };
        parts.set_product(idx, idx, [(pt, int(self_int))]);
    }
    parts.tangent_chern = Some(vec![Coeffs::new(), Coeffs::from([(pt, int(24))])]);
    parts.polarization = Some(3);
    parts
}

fn check_diamond(d: &[Vec<usize>]) -> Result<usize> {
    if d.is_empty() {
        return Err(Error::BadDiamond("empty diamond".into()));
    }
    let n = d.len() - 1;
    for (p, row) in d.iter().enumerate() {
        if row.len() != n + 1 {
            return Err(Error::BadDiamond(format!(
                "row {p} has {} entries, expected {}",
                row.len(),
                n + 1
            )));
        }
    }
    if d[0][0] != 1 {
        return Err(Error::BadDiamond("h^{0,0} must be 1".into()));
    }
    if d[n][n] != 1 {
        return Err(Error::BadDiamond(format!("h^({n},{n}) must be 1")));
    }
    for p in 0..=n {
        for q in 0..=n {
            if d[p][q] != d[q][p] || d[p][q] != d[n - p][n - q] {
                return Err(Error::BadDiamond(format!("h^({p},{q}) breaks Hodge or Serre symmetry")));
            }
        }
    }
    Ok(n)
}

fn diamond_label(n: usize, p: usize, q: usize, i: usize, count: usize) -> String {
    if p == 0 && q == 0 {
        "1".into()
    } else if p == n && q == n {
        "pt".into()
    } else if count == 1 {
        format!("x{p}{q}")
    } else {
        format!("x{p}{q}_{}", i + 1)
    }
}

/// A Calabi-Yau ring with only its Poincare pairing specified: the i-th
/// element of `(p,q)` pairs to the point class with the i-th element of
/// `(n-p,n-q)`. Other products landing below the top are unknown.
/// Tangent data: `c_1 = 0`, higher Chern classes zero.
fn formal_cy_parts(d: &[Vec<usize>]) -> Result<RingParts> {
    let n = check_diamond(d)?;
    let mut basis = Vec::new();
    let mut slots: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for p in 0..=n {
        for q in 0..=n {
            for i in 0..d[p][q] {
                slots.entry((p, q)).or_default().push(basis.len());
                basis.push(BasisElement::new(diamond_label(n, p, q, i, d[p][q]), p, q));
            }
        }
    }
    let top = slots[&(n, n)][0];
    let mut parts = RingParts::new(format!("cy{n}"), n, basis.clone(), top);
    parts.partial_products = true;
    for (&(p, q), idx) in &slots {
        let (cp, cq) = (n - p, n - q);
        if (p, q) > (cp, cq) || (p == 0 && q == 0) || (p == n && q == n) {
            continue;
        }
        for (i, &a) in idx.iter().enumerate() {
            let b = slots[&(cp, cq)][i];
            parts.set_product(a, b, [(top, one())]);
            if a != b {
                let s = koszul(&basis[a], &basis[b]);
                parts.set_product(b, a, [(top, TauScalar::from_rational(s))]);
            }
        }
    }
    parts.tangent_chern = Some(vec![Coeffs::new()]);
    Ok(parts)
}

/// The quintic threefold diamond (`h^{1,1} = 1`, `h^{2,1} = 101`) with its
/// even ring filled in: `H^2 = 5 L`, `H L = pt`, `c_2 = 50 L`,
/// `c_3 = -200 pt`, polarised by `H`.
fn quintic_parts() -> Result<RingParts> {
    let d = vec![
        vec![1, 0, 0, 1],
        vec![0, 1, 101, 0],
        vec![0, 101, 1, 0],
        vec![1, 0, 0, 1],
    ];
    let mut parts = formal_cy_parts(&d)?;
    parts.name = "quintic-diamond".into();
    let h = parts.label_index("x11").expect("h11 = 1");
    let l = parts.label_index("x22").expect("h22 = 1");
    let pt = parts.top;
    parts.set_product(h, h, [(l, int(5))]);
    parts.partial_products = false;
    parts.tangent_chern = Some(vec![
        Coeffs::new(),
        Coeffs::from([(l, int(50))]),
        Coeffs::from([(pt, int(-200))]),
    ]);
    parts.polarization = Some(h);
    Ok(parts)
}

fn product_label(a: &str, b: &str) -> String {
    if a == "1" && b == "1" {
        "1".into()
    } else {
        format!("{a}*{b}")
    }
}

/// Kunneth product with `(a x b)(c x d) = (-1)^{|b||c|} ac x bd` and tangent
/// Chern classes from the Whitney formula.
fn product_parts(x: &CohRing, y: &CohRing) -> Result<RingParts> {
    if x.partial_products() || y.partial_products() {
        return Err(Error::validation(
            "products",
            "factors must carry a complete product table",
        ));
    }
    let ny = y.rank();
    let idx = |i: usize, j: usize| i * ny + j;
    let mut basis = Vec::with_capacity(x.rank() * ny);
    for bx in x.basis() {
        for by in y.basis() {
            basis.push(BasisElement::new(
                product_label(&bx.label, &by.label),
                bx.p + by.p,
                bx.q + by.q,
            ));
        }
    }
    let mut parts = RingParts::new(
        format!("{}x{}", x.name(), y.name()),
        x.dimension() + y.dimension(),
        basis,
        idx(x.top(), y.top()),
    );
    for a in 0..x.rank() {
        for b in 0..ny {
            for c in 0..x.rank() {
                for d in 0..ny {
                    let ac = x.product(a, c)?;
                    let bd = y.product(b, d)?;
                    if ac.is_empty() || bd.is_empty() {
                        continue;
                    }
                    let s = TauScalar::from_rational(koszul(y.element(b), x.element(c)));
                    let mut result = Vec::new();
                    for (k, u) in ac.iter() {
                        for (l, v) in bd.iter() {
                            result.push((idx(*k, *l), &(u * v) * &s));
                        }
                    }
                    parts.set_product(idx(a, b), idx(c, d), result);
                }
            }
        }
    }
    if let (Some(cx), Some(cy)) = (x.tangent_chern_coeffs(), y.tangent_chern_coeffs()) {
        let total = |c: &[Coeffs], unit: usize, k: usize| -> Coeffs {
            match k {
                0 => Coeffs::from([(unit, one())]),
                _ => c.get(k - 1).cloned().unwrap_or_default(),
            }
        };
        let (ux, uy) = (x.unit().unwrap(), y.unit().unwrap());
        let n = x.dimension() + y.dimension();
        let mut chern = Vec::new();
        for k in 1..=n {
            let mut ck = Coeffs::new();
            for i in 0..=k {
                let a = total(cx, ux, i);
                let b = total(cy, uy, k - i);
                for (s, u) in &a {
                    for (t, v) in &b {
                        super::add_into(&mut ck, idx(*s, *t), &(u * v));
                    }
                }
            }
            chern.push(ck);
        }
        parts.tangent_chern = Some(chern);
    }
    Ok(parts)
}
