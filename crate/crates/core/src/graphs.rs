//! Admissible graphs and Monte-Carlo estimates of their configuration-space
//! weights `c_G = integral of wedge_e dtheta_e / (2 pi)`.
//!
//! Vertices `0..k` are aerial, `k..k+m` are on the boundary. The propagator is
//! the hyperbolic angle `theta(p, q) = arg((q - p) / (q - conj p))` on the
//! upper half-plane. Two configuration families are supported:
//!
//! * `Disk`: `k` aerial and `m` ordered boundary points modulo
//!   `z -> a z + b`, gauge-fixed by pinning aerial vertex 0 at `i`.
//!   Dimension `2k + m - 2`. Chart on the unit cube: aerial
//!   `x = tan(pi (a - 1/2))`, `y = tan(pi b / 2)`; boundary
//!   `q = tan(pi (s - 1/2))` with the indicator `s_0 < s_1 < ...`.
//!   Coordinates are ordered `(a_1, b_1, .., a_{k-1}, b_{k-1}, s_0, .., s_{m-1})`.
//! * `Cfw`: the unit disk with aerial 0 at the centre and aerial 1 at
//!   `r e^{i psi_0}` on the ray to boundary point 0 at `e^{i psi_0}`; other
//!   aerial points in polar coordinates, other boundary points at
//!   `psi_0 + 2 pi t_j` with `0 < t_1 < ... < 1`. Mapped to the half-plane by
//!   `w = i (1 + z) / (1 - z)`. Dimension `2(k - 2) + 1 + m`. Coordinates are
//!   ordered `(psi_0, r, rho_2, alpha_2, .., t_1, ..)`; `psi_0` is absent when
//!   `m = 0`.
//!
//! Sampling is uniform on the cube with the exact Jacobian determinant of
//! the angle functions per sample.

use std::f64::consts::PI;
use std::fmt;

use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Samples per shard; shard `i` draws from `ChaCha8(seed ^ i)`.
pub const SHARD_SIZE: u64 = 8192;

/// Default cap on the number of graphs [`enumerate_admissible`] may return.
pub const DEFAULT_ENUM_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GraphFamily {
    #[serde(rename = "disk")]
    Disk,
    #[serde(rename = "cfw_constrained", alias = "cfw")]
    Cfw,
}

impl GraphFamily {
    fn min_aerial(self) -> usize {
        match self {
            GraphFamily::Disk => 1,
            GraphFamily::Cfw => 2,
        }
    }
}

impl fmt::Display for GraphFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphFamily::Disk => write!(f, "disk"),
            GraphFamily::Cfw => write!(f, "cfw_constrained"),
        }
    }
}

impl std::str::FromStr for GraphFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "disk" => Ok(GraphFamily::Disk),
            "cfw" | "cfw_constrained" => Ok(GraphFamily::Cfw),
            _ => Err(Error::Parse(format!("unknown graph family `{s}`"))),
        }
    }
}

/// A directed graph on aerial and boundary vertices. The edge order is part
/// of the data: it orients the wedge product.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AdmissibleGraph {
    #[serde(default = "default_family")]
    pub family: GraphFamily,
    pub aerial: usize,
    pub boundary: usize,
    pub edges: Vec<(usize, usize)>,
}

fn default_family() -> GraphFamily {
    GraphFamily::Disk
}

impl AdmissibleGraph {
    /// Checks vertex ranges, the family's minimum aerial count, and that no
    /// edge leaves a boundary vertex. Self-loops and repeated edges are
    /// allowed; their weight is zero.
    pub fn new(family: GraphFamily, aerial: usize, boundary: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let g = Self {
            family,
            aerial,
            boundary,
            edges,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        if self.aerial < self.family.min_aerial() {
            return Err(Error::InvalidGraph(format!(
                "{} family needs at least {} aerial vertices, got {}",
                self.family,
                self.family.min_aerial(),
                self.aerial
            )));
        }
        let n = self.aerial + self.boundary;
        for &(s, t) in &self.edges {
            if s >= n || t >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({s},{t}) refers to a missing vertex"
                )));
            }
            if s >= self.aerial {
                return Err(Error::InvalidGraph(format!(
                    "edge ({s},{t}) leaves boundary vertex {s}"
                )));
            }
        }
        Ok(())
    }

    /// Aerial vertex 0 pointing at two boundary points.
    pub fn wedge() -> Self {
        Self::new(GraphFamily::Disk, 1, 2, vec![(0, 1), (0, 2)]).expect("wedge graph is admissible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let g: Self = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        g.validate()?;
        Ok(g)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graphs serialise")
    }

    /// Real dimension of the configuration space.
    pub fn dimension(&self) -> usize {
        match self.family {
            GraphFamily::Disk => 2 * self.aerial + self.boundary - 2,
            GraphFamily::Cfw => 2 * (self.aerial - 2) + 1 + self.boundary,
        }
    }

    /// The same graph with edges `i` and `j` swapped.
    pub fn transpose_edges(&self, i: usize, j: usize) -> Self {
        let mut g = self.clone();
        g.edges.swap(i, j);
        g
    }
}

impl fmt::Display for AdmissibleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self.edges.iter().map(|(s, t)| format!("({s},{t})")).collect();
        write!(
            f,
            "{} k={} m={} [{}]",
            self.family,
            self.aerial,
            self.boundary,
            edges.join(",")
        )
    }
}

/// Why a weight is exactly zero without integration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ZeroReason {
    SelfLoop,
    DoubledEdge,
    DimensionMismatch,
    IsolatedAerialVertex,
}

impl fmt::Display for ZeroReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ZeroReason::SelfLoop => "self-loop",
            ZeroReason::DoubledEdge => "doubled-edge",
            ZeroReason::DimensionMismatch => "dimension-mismatch",
            ZeroReason::IsolatedAerialVertex => "isolated-aerial-vertex",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Vanishing {
    ForcedZero(ZeroReason),
    NotForced,
}

/// Structural zero detection. The degree count is tried first, then
/// self-loops, repeated edges and isolated aerial vertices.
///
/// An aerial vertex without edges forces zero when forgetting it leaves a
/// configuration space of dimension `dim - 2`: the forms are pulled back
/// from there. In the constrained family only vertices `>= 2` qualify.
pub fn vanishing_check(g: &AdmissibleGraph) -> Vanishing {
    if g.edges.len() != g.dimension() {
        return Vanishing::ForcedZero(ZeroReason::DimensionMismatch);
    }
    if g.edges.iter().any(|(s, t)| s == t) {
        return Vanishing::ForcedZero(ZeroReason::SelfLoop);
    }
    let mut seen = std::collections::HashSet::new();
    if !g.edges.iter().all(|e| seen.insert(*e)) {
        return Vanishing::ForcedZero(ZeroReason::DoubledEdge);
    }
    let touched = |v: usize| g.edges.iter().any(|&(s, t)| s == v || t == v);
    let candidates = match g.family {
        GraphFamily::Disk if 2 * (g.aerial - 1) + g.boundary >= 2 => 0..g.aerial,
        GraphFamily::Disk => 0..0,
        GraphFamily::Cfw => 2..g.aerial,
    };
    if candidates.into_iter().any(|v| !touched(v)) {
        return Vanishing::ForcedZero(ZeroReason::IsolatedAerialVertex);
    }
    Vanishing::NotForced
}

/// Monte-Carlo estimate; `std_error` is the sample standard deviation over
/// `sqrt(samples)`. Forced zeros report `samples = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
    pub forced_zero: Option<ZeroReason>,
}

/// Point positions in the half-plane and, per chart coordinate, the
/// derivatives `(vertex, dw/dc)` it induces.
struct Config {
    w: Vec<Complex64>,
    dw: Vec<Vec<(usize, Complex64)>>,
    inside: bool,
}

fn tan_chart(c: f64) -> (f64, f64) {
    let a = PI * (c - 0.5);
    let cos = a.cos();
    (a.tan(), PI / (cos * cos))
}

fn disk_config(g: &AdmissibleGraph, x: &[f64]) -> Config {
    let (k, m) = (g.aerial, g.boundary);
    let mut w = vec![Complex64::new(0.0, 1.0); k + m];
    let mut dw = Vec::with_capacity(x.len());
    let mut c = 0;
    for v in 1..k {
        let (re, dre) = tan_chart(x[c]);
        let half = PI * x[c + 1] / 2.0;
        let cos = half.cos();
        let (im, dim) = (half.tan(), PI / (2.0 * cos * cos));
        w[v] = Complex64::new(re, im);
        dw.push(vec![(v, Complex64::new(dre, 0.0))]);
        dw.push(vec![(v, Complex64::new(0.0, dim))]);
        c += 2;
    }
    for j in 0..m {
        let (re, dre) = tan_chart(x[c + j]);
        w[k + j] = Complex64::new(re, 0.0);
        dw.push(vec![(k + j, Complex64::new(dre, 0.0))]);
    }
    let inside = x[c..].windows(2).all(|p| p[0] < p[1]);
    Config { w, dw, inside }
}

fn cayley(z: Complex64) -> (Complex64, Complex64) {
    let i = Complex64::i();
    let d = Complex64::new(1.0, 0.0) - z;
    (i * (1.0 + z) / d, 2.0 * i / (d * d))
}

fn cfw_config(g: &AdmissibleGraph, x: &[f64]) -> Config {
    let (k, m) = (g.aerial, g.boundary);
    let tau = 2.0 * PI;
    let i = Complex64::i();
    let mut z = vec![Complex64::new(0.0, 0.0); k + m];
    // dz per coordinate, before the Cayley map
    let mut dz: Vec<Vec<(usize, Complex64)>> = Vec::with_capacity(x.len());
    let mut c = 0;
    let psi0 = if m > 0 {
        c += 1;
        tau * x[0]
    } else {
        0.0
    };
    let r = x[c];
    let dir = Complex64::from_polar(1.0, psi0);
    z[1] = r * dir;
    let ts = &x[c + 1 + 2 * (k - 2)..];
    let psi: Vec<f64> = (0..m)
        .map(|j| if j == 0 { psi0 } else { psi0 + tau * ts[j - 1] })
        .collect();
    for j in 0..m {
        z[k + j] = Complex64::from_polar(1.0, psi[j]);
    }
    if m > 0 {
        let mut d = vec![(1, i * tau * z[1])];
        d.extend((0..m).map(|j| (k + j, i * tau * z[k + j])));
        dz.push(d);
    }
    dz.push(vec![(1, dir)]);
    c += 1;
    for v in 2..k {
        let (rho, alpha) = (x[c], tau * x[c + 1]);
        let e = Complex64::from_polar(1.0, alpha);
        z[v] = rho * e;
        dz.push(vec![(v, e)]);
        dz.push(vec![(v, i * tau * z[v])]);
        c += 2;
    }
    for j in 1..m {
        dz.push(vec![(k + j, i * tau * z[k + j])]);
    }
    let mut w = Vec::with_capacity(k + m);
    let mut jac = Vec::with_capacity(k + m);
    for (v, zv) in z.iter().enumerate() {
        let (wv, dv) = cayley(*zv);
        w.push(if v >= k { Complex64::new(wv.re, 0.0) } else { wv });
        jac.push(dv);
    }
    let dw = dz
        .into_iter()
        .map(|d| {
            d.into_iter()
                .map(|(v, dzv)| {
                    let mut dwv = jac[v] * dzv;
                    if v >= k {
                        dwv.im = 0.0;
                    }
                    (v, dwv)
                })
                .collect()
        })
        .collect();
    let inside = ts.windows(2).all(|p| p[0] < p[1]);
    Config { w, dw, inside }
}

/// `d theta(p -> q) / dc`.
fn angle_derivative(cfg: &Config, p: usize, q: usize, c: usize) -> f64 {
    let (mut dp, mut dq) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for &(v, d) in &cfg.dw[c] {
        if v == p {
            dp = d;
        }
        if v == q {
            dq = d;
        }
    }
    if dp == Complex64::new(0.0, 0.0) && dq == Complex64::new(0.0, 0.0) {
        return 0.0;
    }
    let (wp, wq) = (cfg.w[p], cfg.w[q]);
    ((dq - dp) / (wq - wp)).im - ((dq - dp.conj()) / (wq - wp.conj())).im
}

fn determinant(mut a: Vec<f64>, n: usize) -> f64 {
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))
            .expect("non-empty range");
        let pv = a[pivot * n + col];
        if pv == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
            }
            det = -det;
        }
        det *= pv;
        for row in (col + 1)..n {
            let f = a[row * n + col] / pv;
            if f != 0.0 {
                for k in col..n {
                    a[row * n + k] -= f * a[col * n + k];
                }
            }
        }
    }
    det
}

/// Sign of the permutation sorting `edges`, with the sorted list.
fn canonical_edges(edges: &[(usize, usize)]) -> (Vec<(usize, usize)>, f64) {
    let mut idx: Vec<usize> = (0..edges.len()).collect();
    idx.sort_by_key(|&i| edges[i]);
    let mut seen = vec![false; idx.len()];
    let mut sign = 1.0;
    for start in 0..idx.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = idx[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    (idx.iter().map(|&i| edges[i]).collect(), sign)
}

/// Integrand of the weight at a point of the unit cube: the Jacobian
/// determinant of the edge angles over `(2 pi)^E`, zero off the ordered
/// boundary region.
pub fn integrand(g: &AdmissibleGraph, x: &[f64]) -> f64 {
    let (edges, sign) = canonical_edges(&g.edges);
    integrand_sorted(g, &edges, sign, x)
}

fn integrand_sorted(g: &AdmissibleGraph, edges: &[(usize, usize)], sign: f64, x: &[f64]) -> f64 {
    let cfg = match g.family {
        GraphFamily::Disk => disk_config(g, x),
        GraphFamily::Cfw => cfw_config(g, x),
    };
    if !cfg.inside {
        return 0.0;
    }
    let n = edges.len();
    let mut m = Vec::with_capacity(n * n);
    for &(p, q) in edges {
        for c in 0..n {
            m.push(angle_derivative(&cfg, p, q, c));
        }
    }
    let v = sign * determinant(m, n) / (2.0 * PI).powi(n as i32);
    if v.is_finite() {
        v
    } else {
        0.0
    }
}

/// Estimates the weight of `g` from `samples` uniform points. Structural
/// zeros return immediately without drawing any randomness.
pub fn weight_estimate(g: &AdmissibleGraph, samples: u64, seed: u64) -> Result<WeightEstimate> {
    if samples == 0 {
        return Err(Error::SampleBudgetZero);
    }
    g.validate()?;
    if let Vanishing::ForcedZero(reason) = vanishing_check(g) {
        return Ok(WeightEstimate {
            mean: 0.0,
            std_error: 0.0,
            samples: 0,
            seed,
            forced_zero: Some(reason),
        });
    }
    let dim = g.dimension();
    let (edges, sign) = canonical_edges(&g.edges);
    let shards = samples.div_ceil(SHARD_SIZE);
    let partial: Vec<(f64, f64)> = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let n = SHARD_SIZE.min(samples - shard * SHARD_SIZE);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ shard);
            let mut x = vec![0.0; dim];
            let (mut s, mut ss) = (0.0, 0.0);
            for _ in 0..n {
                for xi in x.iter_mut() {
                    *xi = rng.random::<f64>();
                }
                let v = integrand_sorted(g, &edges, sign, &x);
                s += v;
                ss += v * v;
            }
            (s, ss)
        })
        .collect();
    let (s, ss) = partial.iter().fold((0.0, 0.0), |(a, b), (c, d)| (a + c, b + d));
    let n = samples as f64;
    let mean = s / n;
    let var = if samples > 1 {
        ((ss - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(WeightEstimate {
        mean,
        std_error: (var / n).sqrt(),
        samples,
        seed,
        forced_zero: None,
    })
}

/// All graphs with `k` aerial and `m` boundary vertices, without self-loops
/// or repeated edges, with at most `max_edges` edges. Each graph lists its
/// edges in lexicographic order; graphs are ordered by edge count, then
/// lexicographically by edge list.
pub fn enumerate_admissible(
    family: GraphFamily,
    k: usize,
    m: usize,
    max_edges: usize,
    cap: usize,
) -> Result<Vec<AdmissibleGraph>> {
    if k < family.min_aerial() {
        return Err(Error::InvalidGraph(format!(
            "{family} family needs at least {} aerial vertices, got {k}",
            family.min_aerial()
        )));
    }
    let possible: Vec<(usize, usize)> = (0..k)
        .flat_map(|s| (0..k + m).filter(move |&t| t != s).map(move |t| (s, t)))
        .collect();
    let top = max_edges.min(possible.len());
    let mut total: u128 = 0;
    for e in 0..=top {
        total = total.saturating_add(binomial(possible.len(), e));
    }
    if total > cap as u128 {
        return Err(Error::BudgetExceeded { cap });
    }
    let mut out = Vec::with_capacity(total as usize);
    for e in 0..=top {
        let mut pick: Vec<usize> = (0..e).collect();
        loop {
            let edges = pick.iter().map(|&i| possible[i]).collect();
            out.push(AdmissibleGraph {
                family,
                aerial: k,
                boundary: m,
                edges,
            });
            if !next_combination(&mut pick, possible.len()) {
                break;
            }
        }
    }
    Ok(out)
}

fn binomial(n: usize, k: usize) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc.saturating_mul(n as u128 - i) / (i + 1);
    }
    acc
}

fn next_combination(pick: &mut [usize], n: usize) -> bool {
    let k = pick.len();
    for i in (0..k).rev() {
        if pick[i] < n - k + i {
            pick[i] += 1;
            for j in (i + 1)..k {
                pick[j] = pick[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disk(k: usize, m: usize, edges: &[(usize, usize)]) -> AdmissibleGraph {
        AdmissibleGraph::new(GraphFamily::Disk, k, m, edges.to_vec()).unwrap()
    }

    #[test]
    fn wedge_integrand_is_the_ordering_indicator() {
        let g = AdmissibleGraph::wedge();
        for (s0, s1) in [(0.1, 0.7), (0.3, 0.31), (0.02, 0.98)] {
            assert!((integrand(&g, &[s0, s1]) - 1.0).abs() < 1e-9);
            assert_eq!(integrand(&g, &[s1, s0]), 0.0);
        }
    }

    #[test]
    fn wedge_estimate() {
        let e = weight_estimate(&AdmissibleGraph::wedge(), 200_000, 7).unwrap();
        assert!((e.mean - 0.5).abs() < 3.0 * e.std_error + 1e-12, "{e:?}");
        assert!((e.std_error - 0.5 / (200_000f64).sqrt()).abs() < 1e-4);
    }

    #[test]
    fn transposition_negates_exactly() {
        let g = AdmissibleGraph::wedge();
        let a = weight_estimate(&g, 50_000, 3).unwrap();
        let b = weight_estimate(&g.transpose_edges(0, 1), 50_000, 3).unwrap();
        assert_eq!(a.mean, -b.mean);
        assert_eq!(a.std_error, b.std_error);
    }

    #[test]
    fn determinism() {
        let g = disk(2, 1, &[(0, 1), (1, 2), (0, 2)]);
        let a = weight_estimate(&g, 20_000, 11).unwrap();
        let b = weight_estimate(&g, 20_000, 11).unwrap();
        assert_eq!(a, b);
        assert!(a.forced_zero.is_none());
    }

    #[test]
    fn forced_zeros() {
        let check = |k, m, e: &[(usize, usize)]| vanishing_check(&disk(k, m, e));
        use ZeroReason::*;
        assert_eq!(check(1, 2, &[(0, 0), (0, 1)]), Vanishing::ForcedZero(SelfLoop));
        assert_eq!(check(1, 2, &[(0, 1), (0, 1)]), Vanishing::ForcedZero(DoubledEdge));
        assert_eq!(
            check(2, 0, &[(0, 1), (1, 0), (0, 1)]),
            Vanishing::ForcedZero(DimensionMismatch)
        );
        assert_eq!(check(2, 2, &[(1, 2), (1, 3)]), Vanishing::ForcedZero(DimensionMismatch));
        assert_eq!(
            check(3, 2, &[(1, 2), (2, 1), (1, 3), (1, 4), (2, 3), (2, 4)]),
            Vanishing::ForcedZero(IsolatedAerialVertex)
        );
        assert_eq!(check(2, 2, &[(1, 2), (1, 3), (1, 0), (0, 1)]), Vanishing::NotForced);
        assert_eq!(vanishing_check(&AdmissibleGraph::wedge()), Vanishing::NotForced);
        let e = weight_estimate(&disk(1, 2, &[(0, 1), (0, 1)]), 10, 1).unwrap();
        assert_eq!((e.mean, e.samples, e.forced_zero), (0.0, 0, Some(DoubledEdge)));
    }

    #[test]
    fn zero_budget_is_checked_first() {
        let g = disk(1, 2, &[(0, 0)]);
        assert_eq!(weight_estimate(&g, 0, 1), Err(Error::SampleBudgetZero));
    }

    #[test]
    fn boundary_sources_are_rejected() {
        assert!(matches!(
            AdmissibleGraph::new(GraphFamily::Disk, 1, 2, vec![(1, 0)]),
            Err(Error::InvalidGraph(_))
        ));
        assert!(matches!(
            AdmissibleGraph::new(GraphFamily::Cfw, 1, 2, vec![]),
            Err(Error::InvalidGraph(_))
        ));
    }

    fn brute_force(k: usize, m: usize, max_edges: usize) -> Vec<Vec<(usize, usize)>> {
        let n = k + m;
        let mut all: Vec<(usize, usize)> = Vec::new();
        for s in 0..n {
            for t in 0..n {
                all.push((s, t));
            }
        }
        let mut out = Vec::new();
        for mask in 0u64..(1 << all.len()) {
            let edges: Vec<_> = (0..all.len()).filter(|i| mask >> i & 1 == 1).map(|i| all[i]).collect();
            if edges.len() > max_edges || edges.iter().any(|&(s, t)| s == t || s >= k) {
                continue;
            }
            out.push(edges);
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for (k, m, e) in [(1, 2, 2), (1, 0, 0), (2, 1, 3), (2, 2, 8), (1, 3, 3)] {
            let got: Vec<_> = enumerate_admissible(GraphFamily::Disk, k, m, e, DEFAULT_ENUM_CAP)
                .unwrap()
                .into_iter()
                .map(|g| g.edges)
                .collect();
            assert_eq!(got, brute_force(k, m, e), "k={k} m={m} e={e}");
        }
        let wedge = enumerate_admissible(GraphFamily::Disk, 1, 2, 2, 100).unwrap();
        assert!(wedge.contains(&AdmissibleGraph::wedge()));
        let lone = enumerate_admissible(GraphFamily::Disk, 1, 0, 0, 100).unwrap();
        assert_eq!(lone.len(), 1);
        assert!(lone[0].edges.is_empty());
        assert!(enumerate_admissible(GraphFamily::Disk, 0, 2, 1, 100).is_err());
        assert_eq!(
            enumerate_admissible(GraphFamily::Disk, 3, 3, 10, 1000),
            Err(Error::BudgetExceeded { cap: 1000 })
        );
    }

    #[test]
    fn cfw_dimensions_and_run() {
        let g = AdmissibleGraph::new(GraphFamily::Cfw, 2, 1, vec![(0, 2), (1, 2)]).unwrap();
        assert_eq!(g.dimension(), 2);
        assert_eq!(vanishing_check(&g), Vanishing::NotForced);
        let e = weight_estimate(&g, 20_000, 5).unwrap();
        assert!(e.mean.is_finite() && e.std_error.is_finite());
        let g = AdmissibleGraph::new(GraphFamily::Cfw, 3, 0, vec![(0, 1), (2, 0), (2, 1)]).unwrap();
        assert_eq!(g.dimension(), 3);
    }

    #[test]
    fn determinant_sign() {
        assert_eq!(determinant(vec![0.0, 1.0, 1.0, 0.0], 2), -1.0);
        assert_eq!(determinant(vec![2.0, 0.0, 0.0, 3.0], 2), 6.0);
    }

    #[test]
    fn documents() {
        let g = AdmissibleGraph::from_json(r#"{"aerial": 1, "boundary": 2, "edges": [[0,1],[0,2]]}"#).unwrap();
        assert_eq!(g, AdmissibleGraph::wedge());
        let back = AdmissibleGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
        let c =
            AdmissibleGraph::from_json(r#"{"family": "cfw", "aerial": 2, "boundary": 0, "edges": [[0,1]]}"#).unwrap();
        assert_eq!(c.family, GraphFamily::Cfw);
    }
}
