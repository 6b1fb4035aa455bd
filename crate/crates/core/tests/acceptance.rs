//! End-to-end acceptance checks. Each criterion prints one line:
//! `PASS`/`FAIL`, its number, a short name and the wall time.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use nchodge::charclass::{exp_class, is_calabi_yau, modified_todd_class, sqrt_modified_todd, todd_class, BundleData};
use nchodge::cohring::{build_builtin, load_ring, Builtin, CohClass, CohRing};
use nchodge::family::{
    builtin_family, flatness_check, intertwining_defect, kappa_closed, leibniz_defect, mc_check, predicted_defect,
    transversality_check, FamilyDoc, FamilySection, BUILTIN_FAMILIES,
};
use nchodge::graphs::{vanishing_check, weight_estimate, AdmissibleGraph, Vanishing, ZeroReason};
use nchodge::ncvshs::{hkr_embed, rational_check, twist, untwist, vee, HPElement, Twist};
use nchodge::pairing::{canonical_pairing, higher_residue, hrr_chi, hrr_routes, symmetry_sweep};
use nchodge::scalars::{modified_todd_series, todd_series, Rational, TauScalar};
use nchodge::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn builtin(b: &Builtin) -> Arc<CohRing> {
    build_builtin(b).expect("built-in rings build")
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

// Plain rational power series, used as an independent oracle.

fn series_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().min(b.len());
    (0..n)
        .map(|k| (0..=k).map(|i| &a[i] * &b[k - i]).fold(ratio(0, 1), |s, x| s + x))
        .collect()
}

/// `a / b` by long division; `b[0]` must be nonzero.
fn series_div(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut q: Vec<Rational> = Vec::with_capacity(a.len());
    for k in 0..a.len() {
        let mut r = a[k].clone();
        for i in 0..k {
            r -= &q[i] * &b[k - i];
        }
        q.push(r / &b[0]);
    }
    q
}

fn factorial(n: usize) -> Rational {
    (1..=n as i64).fold(ratio(1, 1), |f, k| f * ratio(k, 1))
}

fn series_rationals(s: &nchodge::scalars::CharSeries) -> Vec<Rational> {
    s.coeffs()
        .iter()
        .map(|c| c.as_rational().expect("rational series"))
        .collect()
}

fn criterion_1() -> Outcome {
    let order = 10;
    // z / (1 - e^{-z}) = 1 / sum_k (-1)^k z^k / (k+1)!
    let one: Vec<Rational> = (0..=order).map(|k| ratio((k == 0) as i64, 1)).collect();
    let den: Vec<Rational> = (0..=order)
        .map(|k| ratio(if k % 2 == 0 { 1 } else { -1 }, 1) / factorial(k + 1))
        .collect();
    let td = series_div(&one, &den);
    ensure(series_rationals(&todd_series(order)) == td, || "todd series".into())?;
    // z / (e^{z/2} - e^{-z/2}) = 1 / sum_k z^{2k} / (4^k (2k+1)!)
    let den: Vec<Rational> = (0..=order)
        .map(|k| {
            if k % 2 == 1 {
                ratio(0, 1)
            } else {
                ratio(1, 1 << k) / factorial(k + 1)
            }
        })
        .collect();
    let tdm = series_div(&one, &den);
    ensure(series_rationals(&modified_todd_series(order)) == tdm, || {
        "modified todd series".into()
    })?;
    let ex: Vec<Rational> = (0..=order)
        .map(|k| ratio(if k % 2 == 0 { 1 } else { -1 }, 1 << k) / factorial(k))
        .collect();
    ensure(series_mul(&td, &ex) == tdm, || "td' = td exp(-z/2) on series".into())?;
    for b in Builtin::all() {
        let r = builtin(&b);
        let td = todd_class(&r).map_err(err)?;
        let half_c1 = BundleData::tangent(&r)
            .map_err(err)?
            .chern(1)
            .scale(&TauScalar::from_ratio(-1, 2));
        let lhs = td.cup(&exp_class(&half_c1).map_err(err)?).map_err(err)?;
        ensure(lhs == modified_todd_class(&r).map_err(err)?, || {
            format!("td' = td exp(-c1/2) on {b}")
        })?;
    }
    Ok(())
}

fn binomial_poly(a: i64, n: i64) -> Rational {
    (1..=n).fold(ratio(1, 1), |acc, i| acc * ratio(a + i, i))
}

fn criterion_2() -> Outcome {
    for n in 1..=4usize {
        let r = builtin(&Builtin::ProjectiveSpace(n));
        let o = BundleData::trivial(&r, 1);
        for a in -5..=5 {
            let oa = BundleData::twisting_sheaf(&r, a).map_err(err)?;
            let chi = hrr_chi(&o, &oa).map_err(err)?;
            let want = TauScalar::from_rational(binomial_poly(a, n as i64));
            ensure(chi == want, || format!("chi(O, O({a})) on P^{n}: {chi} != {want}"))?;
        }
    }
    let k3 = builtin(&Builtin::K3);
    let o = BundleData::trivial(&k3, 1);
    let chi = hrr_chi(&o, &o).map_err(err)?;
    ensure(chi == TauScalar::from_int(2), || format!("K3 chi(O,O) = {chi}"))
}

fn random_line(r: &Arc<CohRing>, rng: &mut ChaCha8Rng) -> Result<BundleData, String> {
    let mut c1 = CohClass::zero(r);
    for i in r.indices_in(1, 1).collect::<Vec<_>>() {
        let k = rng.random_range(-3..=3);
        c1 = c1
            .add(&CohClass::basis(r, i).scale(&TauScalar::from_int(k)))
            .map_err(err)?;
    }
    BundleData::line(r, c1).map_err(err)
}

fn criterion_3() -> Outcome {
    let rings: Vec<(Builtin, Arc<CohRing>)> = Builtin::all().into_iter().map(|b| (b.clone(), builtin(&b))).collect();
    for (b, r) in &rings {
        let mut bundles = vec![BundleData::trivial(r, 1), BundleData::trivial(r, 3)];
        if let Ok(t) = BundleData::tangent(r) {
            bundles.push(t);
        }
        for name in r.bundle_docs().keys() {
            bundles.push(BundleData::parse(r, name).map_err(err)?);
        }
        for e in &bundles {
            for f in &bundles {
                let (c, k) = hrr_routes(e, f).map_err(err)?;
                ensure(c == k, || format!("{b}: classical {c} vs canonical {k}"))?;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let (b, r) = &rings[rng.random_range(0..rings.len())];
        let (e, f) = (random_line(r, &mut rng)?, random_line(r, &mut rng)?);
        let (c, k) = hrr_routes(&e, &f).map_err(err)?;
        ensure(c == k, || format!("{b}: classical {c} vs canonical {k}"))?;
    }
    Ok(())
}

fn random_scalar(rng: &mut ChaCha8Rng, tau_range: std::ops::RangeInclusive<i64>) -> TauScalar {
    let num = rng.random_range(-4..=4);
    let den = rng.random_range(1..=3);
    TauScalar::monomial(rng.random_range(tau_range), ratio(num, den))
}

fn random_class(r: &Arc<CohRing>, parity: usize, rng: &mut ChaCha8Rng, rational: bool) -> CohClass {
    let mut c = CohClass::zero(r);
    for i in 0..r.rank() {
        let e = r.element(i);
        if (e.p + e.q) % 2 != parity || !rng.random_bool(0.4) {
            continue;
        }
        let s = if rational {
            random_scalar(rng, -(e.p as i64)..=0)
        } else {
            random_scalar(rng, -2..=1)
        };
        c = c.add(&CohClass::basis(r, i).scale(&s)).unwrap();
    }
    c
}

fn random_hp(r: &Arc<CohRing>, u_order: usize, rng: &mut ChaCha8Rng, rational: bool) -> HPElement {
    let parity = rng.random_range(0..2);
    let coeffs = (0..=u_order).map(|_| random_class(r, parity, rng, rational)).collect();
    HPElement::from_series(r, coeffs).unwrap()
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for b in Builtin::all() {
        let r = builtin(&b);
        for _ in 0..200 {
            let order = rng.random_range(0..=3);
            let a = random_hp(&r, order, &mut rng, false);
            let x = random_hp(&r, order, &mut rng, false);
            let hres = higher_residue(&a, &x).map_err(err)?;
            let can = canonical_pairing(&a, &vee(&x)).map_err(err)?;
            ensure(hres == can, || format!("{b}: hres {hres} != can(a, vee b) {can}"))?;
            // <u a, b> = u <a, b>, <a, u b> = -u <a, b> below the truncation
            let left = higher_residue(&a.mul_u(), &x).map_err(err)?;
            let right = higher_residue(&a, &x.mul_u()).map_err(err)?;
            for k in 1..=order {
                let prev = hres.coeff(k - 1);
                ensure(left.coeff(k) == prev && *right.coeff(k) == -prev, || {
                    format!("{b}: sesquilinearity at u^{k}")
                })?;
            }
            ensure(left.coeff(0).is_zero() && right.coeff(0).is_zero(), || {
                format!("{b}: u^0 after shift")
            })?;
        }
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    for b in Builtin::calabi_yau() {
        let r = builtin(&b);
        let bad = symmetry_sweep(&r).map_err(err)?;
        ensure(bad.is_empty(), || {
            let (a, c, d) = &bad[0];
            format!("{b}: {} nonzero defects, first <{a},{c}> = {d}", bad.len())
        })?;
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for b in Builtin::calabi_yau() {
        let r = builtin(&b);
        ensure(is_calabi_yau(&r).map_err(err)?, || format!("{b} should be Calabi-Yau"))?;
        let mut corpus: Vec<HPElement> = (0..r.rank()).map(|i| hkr_embed(&CohClass::basis(&r, i), 2)).collect();
        corpus.extend((0..20).map(|_| random_hp(&r, 2, &mut rng, false)));
        for x in &corpus {
            let (j, k) = (twist(x, Twist::J).map_err(err)?, twist(x, Twist::K).map_err(err)?);
            ensure(j == k, || format!("{b}: J and K twists differ on {x}"))?;
        }
    }
    for n in 1..=4 {
        let r = builtin(&Builtin::ProjectiveSpace(n));
        let one = hkr_embed(&CohClass::one(&r), 0);
        ensure(
            twist(&one, Twist::J).map_err(err)? != twist(&one, Twist::K).map_err(err)?,
            || format!("J and K twists agree on P^{n}"),
        )?;
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for b in Builtin::all() {
        let r = builtin(&b);
        for _ in 0..100 {
            let x = random_hp(&r, rng.random_range(0..=2), &mut rng, true);
            ensure(rational_check(&x), || format!("{b}: corpus element not rational"))?;
            for w in [Twist::J, Twist::K] {
                let t = twist(&x, w).map_err(err)?;
                ensure(rational_check(&t), || format!("{b}: {w} twist breaks rationality"))?;
                ensure(rational_check(&untwist(&x, w).map_err(err)?), || {
                    format!("{b}: {w} untwist")
                })?;
                ensure(untwist(&t, w).map_err(err)? == x, || {
                    format!("{b}: {w} untwist inverts twist")
                })?;
            }
        }
    }
    Ok(())
}

fn random_section(d: &nchodge::family::DeformationSpec, rng: &mut ChaCha8Rng) -> Result<FamilySection, String> {
    let r = d.ring();
    let u_order = 2;
    let mut terms = Vec::new();
    for _ in 0..rng.random_range(1..=4) {
        let mut e = vec![0u32; d.mu()];
        for _ in 0..rng.random_range(0..=d.t_order()) {
            e[rng.random_range(0..d.mu())] += 1;
        }
        let k = rng.random_range(0..=u_order as i64);
        let i = rng.random_range(0..r.rank());
        terms.push((e, k, CohClass::basis(r, i).scale(&random_scalar(rng, 0..=0))));
    }
    FamilySection::new(d, u_order, terms).map_err(err)
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut random_checked = 0;
    for name in BUILTIN_FAMILIES {
        let d = builtin_family(name).map_err(err)?;
        let commuting = mc_check(&d);
        if !commuting {
            ensure(!flatness_check(&d).passed, || {
                format!("{name}: flatness should report the failed precondition")
            })?;
            continue;
        }
        let corpus = d.basis_corpus(1);
        let t = transversality_check(&d, &corpus);
        ensure(t.passed, || format!("{name}: {t}"))?;
        let f = flatness_check(&d);
        ensure(f.passed, || format!("{name}: {f}"))?;
        let sq = sqrt_modified_todd(d.ring()).map_err(err)?;
        if is_calabi_yau(d.ring()).map_err(err)? && kappa_closed(&sq, &d) {
            for s in &corpus {
                for j in 0..d.mu() {
                    ensure(intertwining_defect(&sq, s, j, &d).map_err(err)?.is_zero(), || {
                        format!("{name}: intertwining defect on {s}")
                    })?;
                }
            }
        }
        // T = 1 + c with kappa_0(c) != 0, a (1,1) class when one is moved:
        // the defect is -kappa(T) s / u
        let r = d.ring();
        let k0 = d.kappa(0).map_err(err)?;
        let moved = r
            .indices_in(1, 1)
            .chain(0..r.rank())
            .find(|&i| !k0.image(i).is_empty())
            .ok_or_else(|| format!("{name}: kappa_0 moves nothing"))?;
        let t1 = CohClass::one(r).add(&CohClass::basis(r, moved)).map_err(err)?;
        ensure(!kappa_closed(&t1, &d), || {
            format!("{name}: T should not be kappa-closed")
        })?;
        let mut nonzero = false;
        for _ in 0..100 / (BUILTIN_FAMILIES.len() - 1) + 1 {
            let s = random_section(&d, &mut rng)?;
            for j in 0..d.mu() {
                let got = intertwining_defect(&t1, &s, j, &d).map_err(err)?;
                let want = predicted_defect(&t1, &s, j, &d).map_err(err)?;
                ensure(got == want, || format!("{name}: defect {got} != predicted {want}"))?;
                ensure(leibniz_defect(&t1, &s, j, &d).map_err(err)?.is_zero(), || {
                    format!("{name}: kappa_{j} is not a derivation on {s}")
                })?;
                nonzero |= !got.is_zero();
            }
            random_checked += 1;
        }
        let one = FamilySection::constant(&d, &CohClass::one(r), 1).map_err(err)?;
        nonzero |= !intertwining_defect(&t1, &one, 0, &d).map_err(err)?.is_zero();
        ensure(nonzero, || {
            format!("{name}: defect for T = 1 + {} never nonzero", r.element(moved).label)
        })?;
    }
    ensure(random_checked >= 100, || {
        format!("only {random_checked} random sections")
    })
}

/// Midpoint-rule integral of the wedge weight written from scratch: aerial
/// point at `i`, boundary points `q = tan(pi (s - 1/2))`, angle
/// `arg((q - i) / (q + i))`, derivatives by central differences.
fn wedge_quadrature(n: usize) -> f64 {
    let theta = |s: f64| {
        let q = (std::f64::consts::PI * (s - 0.5)).tan();
        let (re, im) = (q * q - 1.0, 2.0 * q); // (q - i)(q - i) / |q + i|^2 up to a positive factor
        im.atan2(re)
    };
    let h = 1e-6;
    let dtheta = |s: f64| {
        let mut d = theta(s + h) - theta(s - h);
        if d > std::f64::consts::PI {
            d -= 2.0 * std::f64::consts::PI;
        } else if d < -std::f64::consts::PI {
            d += 2.0 * std::f64::consts::PI;
        }
        d / (2.0 * h)
    };
    let step = 1.0 / n as f64;
    let g: Vec<f64> = (0..n).map(|i| dtheta((i as f64 + 0.5) * step)).collect();
    let mut total = 0.0;
    for i in 0..n {
        for j in i..n {
            let w = if i == j { 0.5 } else { 1.0 };
            total += w * g[i] * g[j];
        }
    }
    total * step * step / (2.0 * std::f64::consts::PI).powi(2)
}

fn criterion_9() -> Outcome {
    let oracle = wedge_quadrature(4000);
    println!("      wedge quadrature oracle = {oracle:.6}");
    ensure((oracle - 0.5).abs() < 5e-5, || format!("quadrature oracle {oracle}"))?;
    let wedge = AdmissibleGraph::wedge();
    let big = weight_estimate(&wedge, 1_000_000, 42).map_err(err)?;
    println!("      wedge Monte-Carlo = {:.6} +- {:.6}", big.mean, big.std_error);
    ensure((big.mean - oracle).abs() < 3.0 * big.std_error, || {
        format!("estimate {} +- {} vs oracle {oracle}", big.mean, big.std_error)
    })?;
    let again = weight_estimate(&wedge, 1_000_000, 42).map_err(err)?;
    ensure(
        again.mean.to_bits() == big.mean.to_bits() && again.std_error.to_bits() == big.std_error.to_bits(),
        || "repeat run differs".into(),
    )?;
    let flipped = weight_estimate(&wedge.transpose_edges(0, 1), 1_000_000, 42).map_err(err)?;
    ensure(flipped.mean == -big.mean, || {
        "edge transposition does not negate".into()
    })?;
    for (file, reason) in [
        ("doubled_edge.json", ZeroReason::DoubledEdge),
        ("dimension_mismatch.json", ZeroReason::DimensionMismatch),
    ] {
        let g = AdmissibleGraph::from_json(&fixture(file)).map_err(err)?;
        ensure(vanishing_check(&g) == Vanishing::ForcedZero(reason), || {
            format!("{file}: vanishing reason")
        })?;
        let w = weight_estimate(&g, 1000, 1).map_err(err)?;
        ensure(
            w.mean == 0.0 && w.std_error == 0.0 && w.forced_zero == Some(reason),
            || format!("{file}: not exact 0"),
        )?;
    }
    let errs: Vec<f64> = [10_000u64, 100_000, 1_000_000]
        .iter()
        .map(|&n| weight_estimate(&wedge, n, 7).map(|w| w.std_error))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    for w in errs.windows(2) {
        let r = w[0] / w[1];
        ensure((r / 10f64.sqrt() - 1.0).abs() < 0.05, || {
            format!("std error ratio {r} for 10x samples")
        })?;
    }
    Ok(())
}

fn expect_invariant<T>(what: &str, res: Result<T, Error>, invariant: &str) -> Outcome {
    match res {
        Err(Error::Validation { invariant: got, .. }) if got == invariant => Ok(()),
        Err(e) => Err(format!("{what}: expected `{invariant}`, got {e}")),
        Ok(_) => Err(format!("{what}: accepted")),
    }
}

fn criterion_10() -> Outcome {
    for (file, invariant) in [
        ("p1_grading.json", "grading"),
        ("elliptic_commutativity.json", "graded-commutativity"),
        ("missing_top.json", "top"),
        ("nonassociative.json", "associativity"),
        ("chern_off_diagonal.json", "chern-degrees"),
    ] {
        expect_invariant(file, load_ring(&fixture(file)), invariant)?;
    }
    ensure(load_ring(&fixture("p1.json")).is_ok(), || {
        "valid P^1 document rejected".into()
    })?;
    let k3 = builtin(&Builtin::K3);
    for (file, invariant) in [
        ("kappa_bad_degree.json", "kappa-degree"),
        ("kappa_not_derivation.json", "kappa-derivation"),
    ] {
        let doc = FamilyDoc::from_json(&fixture(file)).map_err(err)?;
        expect_invariant(file, doc.to_spec(&k3), invariant)?;
    }
    let q = builtin(&Builtin::QuinticDiamond);
    let d = FamilyDoc::from_json(&fixture("noncommuting_family.json"))
        .map_err(err)?
        .to_spec(&q)
        .map_err(err)?;
    ensure(!mc_check(&d), || {
        "non-commuting kappas pass the Maurer-Cartan check".into()
    })?;
    let f = flatness_check(&d);
    ensure(!f.passed && f.to_string().contains("precondition"), || {
        format!("flatness report: {f}")
    })?;
    let d = builtin_family("k3").map_err(err)?;
    let pole = FamilySection::new(&d, 1, [(vec![0], -1, CohClass::one(&k3))]);
    ensure(matches!(pole, Err(Error::SectionPole(-1))), || {
        "u^-1 pole accepted".into()
    })?;
    ensure(
        matches!(
            AdmissibleGraph::from_json(&fixture("boundary_source.json")),
            Err(Error::InvalidGraph(_))
        ),
        || "edge out of a boundary vertex accepted".into(),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("todd calculus against series division", criterion_1),
        ("HRR sweep on P^n and K3", criterion_2),
        ("HRR routes agree", criterion_3),
        ("higher residue = canonical pairing after vee", criterion_4),
        ("symmetry on Calabi-Yau rings", criterion_5),
        ("J = K twists on Calabi-Yau rings", criterion_6),
        ("rationality preserved by twists", criterion_7),
        ("families: connection, flatness, intertwining", criterion_8),
        ("graph weights", criterion_9),
        ("constructed counterexamples rejected", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let ms = Duration::as_millis(&start.elapsed());
        match res {
            Ok(()) => println!("PASS {:>2} {name} ({ms} ms)", i + 1),
            Err(m) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({ms} ms): {m}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
