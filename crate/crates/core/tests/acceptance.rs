//! Acceptance suite: one line per criterion.
//!
//! Three criteria state closed forms that disagree with exact computation.
//! For those the line reports FAIL, and the run checks that the stated form
//! fails exactly where predicted and that the corrected form passes.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use dtwc_core::catalog;
use dtwc_core::fforacle::{euler_characteristic, ndt_from_count, OracleStability, DEFAULT_BUDGET};
use dtwc_core::invariants::{
    bps_from_dt, dt_from_bps, dt_from_pair_series, pair_series, pair_transform, reineke_check,
    InvariantKind, PairOptions,
};
use dtwc_core::lattice::extend_by_framing;
use dtwc_core::numerics::{big, binomial, factorial, int, rat, sign};
use dtwc_core::series::product_expand;
use dtwc_core::wallcross::{
    coeff_u, nested_bracket_pair_formula as nested_pair, signed_composition_sum, transform, transform_v_form, TransformOptions};
use dtwc_core::{
    format_rational, Bound, InvariantTable, KClass, NumericalContext, Quiver, Rational, TruncatedSeries, WeakStability,
};
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Check = Result<(), String>;

fn k(v: &[i64]) -> KClass {
    KClass(v.to_vec())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn eq(what: &str, class: &KClass, expected: &Rational, got: &Rational) -> Check {
    ensure(expected == got, || {
        format!("{what} at {class}: expected {}, got {}", format_rational(expected), format_rational(got))
    })
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

// ---------------------------------------------------------------- oracles

fn divisors(n: i64) -> Vec<i64> {
    (1..=n).filter(|l| n % l == 0).collect()
}

fn mu(n: i64) -> i64 {
    let (mut n, mut r, mut p) = (n, 1, 2);
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            r = -r;
        }
        p += 1;
    }
    if n > 1 {
        -r
    } else {
        r
    }
}

fn inv_sq_sum(d: i64) -> Rational {
    divisors(d).into_iter().map(|l| rat(1, l * l)).sum()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// BPS values computed directly by Möbius inversion along rays.
fn bps_oracle(dtbar: &InvariantTable) -> InvariantTable {
    let mut out = InvariantTable::new(InvariantKind::DThat, &dtbar.stability);
    for c in dtbar.entries().keys() {
        let g = c.coords().iter().fold(0, |a, &x| gcd(a, x));
        let v: Rational = divisors(g)
            .into_iter()
            .map(|m| int(mu(m)) * rat(1, m * m) * dtbar.get(&KClass(c.coords().iter().map(|x| x / m).collect())))
            .sum();
        out.insert(c.clone(), v);
    }
    out
}

/// `∏ (1 − (−1)^{d₀} q^d)^{e}` over the listed factors.
fn framed_product(rank: usize, bound: &Bound, factors: &[(Vec<u32>, i64)]) -> Result<TruncatedSeries, String> {
    let bases = factors
        .iter()
        .map(|(d, e)| {
            let c = -int(sign(d[0] as i64));
            TruncatedSeries::binomial_base(rank, bound.clone(), d.clone(), c).map(|b| (b, int(*e)))
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    product_expand(rank, bound.clone(), &bases).map_err(err)
}

/// DT̄ from a framed series; framing-zero classes filled from the images
/// under `perms` (`perm[i]` is the image of vertex `i`).
fn dtbar_with_symmetry(ctx: &NumericalContext, series: &TruncatedSeries, perms: &[Vec<usize>]) -> Result<InvariantTable, String> {
    let inv = dt_from_pair_series(ctx, series, "trivial").map_err(err)?;
    let mut t = inv.table;
    for c in inv.undetermined {
        let image = perms
            .iter()
            .map(|p| {
                let mut v = vec![0; c.rank()];
                for (i, &x) in c.coords().iter().enumerate() {
                    v[p[i]] = x;
                }
                KClass(v)
            })
            .find(|img| t.contains(img))
            .ok_or_else(|| format!("no symmetric image of {c} is determined"))?;
        let v = t.get(&image);
        t.insert(c, v);
    }
    Ok(t)
}

fn framed_ctx(q: &Quiver) -> NumericalContext {
    let mut f = vec![0; q.vertex_count()];
    f[0] = 1;
    NumericalContext::from_quiver(q).with_framing(f).unwrap()
}

fn mloop_dtbar(m: i64, d: i64) -> Rational {
    int(sign((m + 1) * d + 1)) * big(binomial((m * d) as u64, d)) / int(m * d * d)
}

fn mloop_ndt(m: i64, d: i64) -> Rational {
    int(sign(m * d)) * big(binomial((m * d) as u64, d)) / int((m - 1) * d + 1)
}

// ---------------------------------------------------------------- criteria

fn c1_mloop_identity() -> Check {
    for m in 1..=4i64 {
        let bound = Bound::TotalDegree(10);
        let sum = TruncatedSeries::from_terms(1, bound.clone(), (0..=10).map(|d| (vec![d as u32], mloop_ndt(m, d))))
            .map_err(err)?;
        let inner = TruncatedSeries::from_terms(
            1,
            bound,
            (1..=10).map(|d| (vec![d as u32], int(sign(m * d)) * big(binomial((m * d) as u64, d)) / int(m * d))),
        )
        .map_err(err)?;
        let exp = inner.exp().map_err(err)?;
        for d in 0..=10u32 {
            eq(
                &format!("m={m} coefficient"),
                &k(&[d as i64]),
                &sum.coefficient(&[d]).map_err(err)?,
                &exp.coefficient(&[d]).map_err(err)?,
            )?;
        }
    }
    Ok(())
}

fn c2_bps_integrality() -> Check {
    for m in 1..=5i64 {
        let ctx = framed_ctx(&Quiver::loops(m as usize));
        let series = TruncatedSeries::from_terms(
            1,
            Bound::TotalDegree(20),
            (0..=20).map(|d| (vec![d as u32], mloop_ndt(m, d))),
        )
        .map_err(err)?;
        let dtbar = dt_from_pair_series(&ctx, &series, "trivial").map_err(err)?.table;
        for d in 1..=20 {
            eq(&format!("m={m} DTbar"), &k(&[d]), &mloop_dtbar(m, d), &dtbar.get(&k(&[d])))?;
        }
        let bps = bps_from_dt(&dtbar).map_err(err)?;
        ensure(bps == bps_oracle(&dtbar), || format!("m={m}: Möbius transform disagrees with the oracle"))?;
        if let Some(c) = bps.non_integral().first() {
            return Err(format!("m={m}: DThat at {c} is {}", format_rational(&bps.get(c))));
        }
        if m == 2 || m == 3 {
            let a: Vec<Rational> = (1..=10).map(|d| -bps.get(&k(&[d]))).collect();
            let r = reineke_check(1 - m, &a, 10).map_err(err)?;
            ensure(r.integral(), || format!("m={m}: non-integral b at orders {:?}", r.non_integral))?;
        }
    }
    Ok(())
}

fn conifold_dtbar_closed(d0: i64, d1: i64) -> Rational {
    if d0 == d1 {
        return -int(2) * inv_sq_sum(d0);
    }
    let mut v = Rational::zero();
    for l in 1..=d0.max(d1) {
        for kk in 0..=d0 {
            if kk >= 1 && d0 == kk * l && d1 == (kk - 1) * l {
                v += rat(1, l * l);
            }
            if d0 == kk * l && d1 == (kk + 1) * l {
                v += rat(1, l * l);
            }
        }
    }
    v
}

fn conifold_dthat_closed(d0: i64, d1: i64) -> Rational {
    let kk = d0.max(d1);
    if d0 == d1 {
        int(-2)
    } else if kk >= 1 && (d1 == kk - 1 || d0 == kk - 1) {
        int(1)
    } else {
        int(0)
    }
}

fn c3_conifold() -> Check {
    let q = catalog::conifold_quiver();
    let bound = Bound::TotalDegree(10);
    let mut factors = Vec::new();
    for kk in 1..=11u32 {
        factors.push((vec![kk, kk], -2 * kk as i64));
        factors.push((vec![kk, kk - 1], kk as i64));
        factors.push((vec![kk, kk + 1], kk as i64));
    }
    let series = framed_product(2, &bound, &factors)?;
    let dtbar = dtbar_with_symmetry(&framed_ctx(&q), &series, &[vec![1, 0]])?;
    ensure(dtbar.len() == 65, || format!("expected 65 classes, got {}", dtbar.len()))?;
    for (c, v) in dtbar.entries() {
        let (d0, d1) = (c.coords()[0], c.coords()[1]);
        if d0 >= 1 {
            eq("DTbar", c, &conifold_dtbar_closed(d0, d1), v)?;
        }
    }
    let bps = bps_from_dt(&dtbar).map_err(err)?;
    for (c, v) in bps.entries() {
        eq("DThat", c, &conifold_dthat_closed(c.coords()[0], c.coords()[1]), v)?;
    }
    catalog_passes("conifold", 10)
}

fn catalog_passes(name: &str, order: u32) -> Check {
    let r = catalog::verify(name, order).map_err(err)?;
    ensure(r.passed(), || format!("catalog {name}: {:?}", r.mismatches.first()))
}

/// Plane partition counts from `n·PP(n) = Σ σ₂(k) PP(n − k)`.
fn plane_partitions(n: usize) -> Vec<Rational> {
    let mut pp = vec![Rational::one()];
    for m in 1..=n {
        let s: Rational = (1..=m)
            .map(|j| {
                let sigma2: i64 = divisors(j as i64).iter().map(|x| x * x).sum();
                int(sigma2) * &pp[m - j]
            })
            .sum();
        pp.push(s / int(m as i64));
    }
    pp
}

fn c4_macmahon() -> Check {
    let pp = plane_partitions(10);
    let bound = Bound::TotalDegree(10);
    for chi in 1..=3i64 {
        let factors: Vec<(Vec<u32>, i64)> = (1..=11u32).map(|kk| (vec![kk], -(kk as i64) * chi)).collect();
        let series = framed_product(1, &bound, &factors)?;
        if chi == 1 {
            for n in 0..=10u32 {
                let expected = int(sign(n as i64)) * &pp[n as usize];
                eq("M(-s)", &k(&[n as i64]), &expected, &series.coefficient(&[n]).map_err(err)?)?;
            }
        }
        let ctx = NumericalContext::from_chi_bar(vec![vec![0]]).and_then(|c| c.with_framing(vec![1])).map_err(err)?;
        let dtbar = dt_from_pair_series(&ctx, &series, "trivial").map_err(err)?.table;
        let bps = bps_from_dt(&dtbar).map_err(err)?;
        for d in 1..=10 {
            eq(&format!("chi={chi} DTbar"), &k(&[d]), &(-int(chi) * inv_sq_sum(d)), &dtbar.get(&k(&[d])))?;
            eq(&format!("chi={chi} DThat"), &k(&[d]), &int(-chi), &bps.get(&k(&[d])))?;
        }
    }
    catalog_passes("c3", 10)?;
    catalog_passes("dim0", 10)
}

fn all_perms(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_perms(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn levels(c: &[i64]) -> Option<(usize, usize)> {
    let top = *c.iter().max()?;
    if top < 1 || c.iter().any(|&x| x != top && x != top - 1) {
        return None;
    }
    let n = c.iter().filter(|&&x| x == top).count();
    Some((n, c.len() - n))
}

/// `(expected DThat, is the family missing from the four-case table)`.
fn c3z2z2_dthat(c: &[i64], corrected: bool) -> (i64, bool) {
    match levels(c) {
        Some((4, 0)) => (-4, false),
        Some((2, 2)) => (-1, false),
        Some((3, 1)) => (1, false),
        Some((1, 3)) => (if corrected { 1 } else { 0 }, true),
        _ => (0, false),
    }
}

fn c3z2z2_bps() -> Result<InvariantTable, String> {
    let bound = Bound::PerVariable(vec![3; 4]);
    let mut factors = Vec::new();
    for kk in 1..=4u32 {
        let ki = kk as i64;
        factors.push((vec![kk; 4], -4 * ki));
        for s in [kk + 1, kk - 1] {
            for j in 1..4 {
                let mut pair = vec![s; 4];
                pair[0] = kk;
                pair[j] = kk;
                factors.push((pair, -ki));
                let mut triple = vec![kk; 4];
                triple[j] = s;
                factors.push((triple, ki));
            }
            let mut single = vec![s; 4];
            single[0] = kk;
            factors.push((single, ki));
        }
    }
    let series = framed_product(4, &bound, &factors)?;
    let dtbar = dtbar_with_symmetry(&framed_ctx(&catalog::c3z2z2_quiver()), &series, &all_perms(4))?;
    ensure(dtbar.len() == 255, || format!("expected 255 classes, got {}", dtbar.len()))?;
    bps_from_dt(&dtbar).map_err(err)
}

/// Stated table: FAIL expected, exactly on the omitted family.
fn c5_stated(bps: &InvariantTable) -> Check {
    let mut wrong = Vec::new();
    for (c, v) in bps.entries() {
        let (expected, omitted) = c3z2z2_dthat(c.coords(), false);
        if *v != int(expected) {
            wrong.push((c.clone(), omitted));
        }
    }
    if wrong.is_empty() {
        return Ok(());
    }
    let n = wrong.len();
    let all_omitted = wrong.iter().all(|(_, o)| *o);
    Err(format!(
        "{n} classes disagree (e.g. {} has DThat {}, table gives 0){}",
        wrong[0].0,
        format_rational(&bps.get(&wrong[0].0)),
        if all_omitted { "; all have one entry k and three k-1" } else { "" }
    ))
}

fn c5_corrected(bps: &InvariantTable) -> Check {
    for (c, v) in bps.entries() {
        eq("DThat", c, &int(c3z2z2_dthat(c.coords(), true).0), v)?;
    }
    catalog_passes("c3z2z2", 3)
}

fn c5_prediction_holds(bps: &InvariantTable) -> bool {
    let wrong: Vec<bool> = bps
        .entries()
        .iter()
        .filter(|(c, v)| **v != int(c3z2z2_dthat(c.coords(), false).0))
        .map(|(c, _)| c3z2z2_dthat(c.coords(), false).1)
        .collect();
    !wrong.is_empty() && wrong.iter().all(|o| *o)
}

fn dihedral(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for r in 0..n {
        out.push((0..n).map(|i| (i + r) % n).collect());
        out.push((0..n).map(|i| (n - i + r) % n).collect());
    }
    out
}

fn c3zn_dthat(n: usize, c: &[i64]) -> i64 {
    let Some((top, _)) = levels(c) else { return 0 };
    if top == n {
        return -(n as i64);
    }
    let kk = *c.iter().max().unwrap();
    // d_i = k on i = a..b−1 and k−1 on i = b..a+n−1, indices mod n.
    for a in 0..n {
        for b in a + 1..a + n {
            let fits = (0..n).all(|j| {
                let i = (a + j) % n;
                c[i] == if a + j < b { kk } else { kk - 1 }
            });
            if fits {
                return -1;
            }
        }
    }
    0
}

fn c3zn_bps(n: usize, corrected_diagonal: bool) -> Result<InvariantTable, String> {
    let bound = Bound::TotalDegree(8);
    let mut factors = Vec::new();
    for kk in 1..=9u32 {
        let ki = kk as i64;
        let diag = if corrected_diagonal { -(n as i64) * ki } else { -(n as i64) };
        factors.push((vec![kk; n], diag));
        for a in 1..n {
            for b in a + 1..=n {
                let mut up = vec![kk; n];
                let mut down = vec![kk; n];
                for i in a..b {
                    up[i] += 1;
                    down[i] -= 1;
                }
                factors.push((up, -ki));
                factors.push((down, -ki));
            }
        }
    }
    let series = framed_product(n, &bound, &factors)?;
    let q = catalog::c3zn_quiver(n).map_err(err)?;
    let dtbar = dtbar_with_symmetry(&framed_ctx(&q), &series, &dihedral(n))?;
    bps_from_dt(&dtbar).map_err(err)
}

fn c6_check(tables: &[(usize, InvariantTable)]) -> Check {
    for (n, bps) in tables {
        for (c, v) in bps.entries() {
            eq(&format!("n={n} DThat"), c, &int(c3zn_dthat(*n, c.coords())), v)?;
            for g in dihedral(*n) {
                let mut img = vec![0; *n];
                for (i, &x) in c.coords().iter().enumerate() {
                    img[g[i]] = x;
                }
                let img = KClass(img);
                if bps.contains(&img) {
                    eq(&format!("n={n} dihedral image of {c}"), &img, v, &bps.get(&img))?;
                }
            }
        }
    }
    Ok(())
}

fn c6_prediction_holds(tables: &[(usize, InvariantTable)]) -> bool {
    let mut any = false;
    for (n, bps) in tables {
        for (c, v) in bps.entries() {
            if *v != int(c3zn_dthat(*n, c.coords())) {
                let diag = c.coords().iter().all(|&x| x == c.coords()[0]) && c.coords()[0] >= 2;
                if !diag {
                    return false;
                }
                any = true;
            }
        }
    }
    any
}

fn grassmann(p: i64, m: i64) -> Rational {
    int(sign(m * (p - m))) * big(binomial(p as u64, m))
}

fn rigid_ctx(p: &[i64]) -> NumericalContext {
    let l = p.len();
    NumericalContext::from_chi_bar(vec![vec![0; l]; l]).unwrap().with_framing(p.to_vec()).unwrap()
}

/// `1/k²` (or `(−1)^{k−1}/k²`) on `kαᵢ`, zero elsewhere.
fn rigid_table(l: usize, max: i64, signed: bool) -> InvariantTable {
    let mut t = InvariantTable::new(if signed { InvariantKind::DTbar } else { InvariantKind::J }, "trivial");
    for i in 0..l {
        for kk in 1..=max {
            let mut c = vec![0; l];
            c[i] = kk;
            t.insert(KClass(c), int(if signed { 1 } else { sign(kk - 1) }) * rat(1, kk * kk));
        }
    }
    t
}

fn extension_ctx(p1: i64, p2: i64, d: i64, signed: bool) -> (NumericalContext, InvariantTable) {
    let ctx = NumericalContext::from_chi_bar(vec![vec![0, d], vec![-d, 0]])
        .unwrap()
        .with_framing(vec![p1, p2])
        .unwrap();
    let mut t = InvariantTable::new(if signed { InvariantKind::DTbar } else { InvariantKind::J }, "trivial");
    t.insert(k(&[1, 0]), int(1));
    t.insert(k(&[0, 1]), int(1));
    t.insert(k(&[1, 1]), if signed { int(sign(d - 1)) * rat(d, 2) } else { rat(d, 2) });
    (ctx, t)
}

fn c7_pair_engine() -> Check {
    let signed = PairOptions::default();
    let unsigned = PairOptions { signed: false, ..signed };
    let triv = WeakStability::Trivial;
    for p in 1..=12 {
        let ctx = rigid_ctx(&[p]);
        let dt = rigid_table(1, 5, true);
        let j = rigid_table(1, 5, false);
        for m in 1..=5 {
            let got = pair_transform(&ctx, &dt, &triv, &k(&[m]), &signed).map_err(err)?;
            eq(&format!("P={p} Grassmannian"), &k(&[m]), &grassmann(p, m), &got)?;
            let got = pair_transform(&ctx, &j, &triv, &k(&[m]), &unsigned).map_err(err)?;
            eq(&format!("P={p} unsigned"), &k(&[m]), &big(binomial(p as u64, m)), &got)?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x6a11);
    for round in 0..3 {
        // Distinct rigid summands, each once.
        let l = rng.gen_range(1..=4usize);
        let p: Vec<i64> = (0..l).map(|_| rng.gen_range(1..=8)).collect();
        let got = pair_transform(&rigid_ctx(&p), &rigid_table(l, 1, true), &triv, &KClass(vec![1; l]), &signed)
            .map_err(err)?;
        let expected = int(sign(p.iter().map(|x| x - 1).sum())) * p.iter().map(|&x| int(x)).product::<Rational>();
        eq(&format!("round {round} summands P={p:?}"), &KClass(vec![1; l]), &expected, &got)?;
        // Summands with multiplicities.
        let l = rng.gen_range(1..=3usize);
        let p: Vec<i64> = (0..l).map(|_| rng.gen_range(1..=8)).collect();
        let m: Vec<i64> = (0..l).map(|_| rng.gen_range(1..=3)).collect();
        let max = *m.iter().max().unwrap();
        let got = pair_transform(&rigid_ctx(&p), &rigid_table(l, max, true), &triv, &KClass(m.clone()), &signed)
            .map_err(err)?;
        let expected: Rational = p.iter().zip(&m).map(|(&pi, &mi)| grassmann(pi, mi)).product();
        eq(&format!("round {round} multiplicities P={p:?}"), &KClass(m), &expected, &got)?;
    }
    for p1 in 1..=6 {
        for p2 in 1..=6 {
            for d in 1..=4 {
                let (ctx, t) = extension_ctx(p1, p2, d, true);
                let got = pair_transform(&ctx, &t, &triv, &k(&[1, 1]), &signed).map_err(err)?;
                let expected = int(sign(p1 + p2 + d - 2) * (p1 + d) * p2);
                eq(&format!("extension P=({p1},{p2}) d={d}"), &k(&[1, 1]), &expected, &got)?;
            }
        }
    }
    catalog_passes("grassmann", 5)
}

fn b_p(p: i64) -> NumericalContext {
    extend_by_framing(&NumericalContext::from_chi_bar(vec![vec![0]]).unwrap().with_framing(vec![p]).unwrap()).unwrap()
}

fn c8_u_closed_form() -> Check {
    let bp = b_p(1);
    let (dot, tilde) = (WeakStability::tau_dot(), WeakStability::tau_tilde());
    for n in 1..=6usize {
        for pos in 1..=n {
            let mut parts = vec![k(&[1, 0]); n];
            parts[pos - 1] = k(&[0, 1]);
            let got = coeff_u(&bp, &parts, &dot, &tilde).map_err(err)?;
            let expected = int(sign((n - pos) as i64))
                / (big(factorial(pos as u64 - 1)) * big(factorial((n - pos) as u64)));
            eq(&format!("U n={n} k={pos}"), &KClass::sum(&parts), &expected, &got)?;
        }
    }
    Ok(())
}

fn c9_composition_identity() -> Check {
    // Independent count: compositions of l by first part.
    fn direct(l: usize) -> Rational {
        let mut s = vec![Rational::zero(); l + 1];
        s[0] = Rational::one();
        for n in 1..=l {
            s[n] = (1..=n).map(|b| -&s[n - b] / big(factorial(b as u64))).sum();
        }
        s[l].clone()
    }
    for l in 1..=10usize {
        let expected = int(sign(l as i64)) / big(factorial(l as u64));
        let got = signed_composition_sum(l).map_err(err)?;
        eq("composition sum", &k(&[l as i64]), &expected, &got)?;
        eq("direct recursion", &k(&[l as i64]), &expected, &direct(l))?;
    }
    Ok(())
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

fn c10_lie_bracket() -> Check {
    let triv = WeakStability::Trivial;
    let opts = PairOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for p in 1..=4 {
        let ctx = rigid_ctx(&[p]);
        let mut tables = vec![rigid_table(1, 5, true)];
        let mut random = InvariantTable::new(InvariantKind::DTbar, "trivial");
        for d in 1..=5 {
            random.insert(k(&[d]), random_rational(&mut rng));
        }
        tables.push(random);
        for t in &tables {
            for d in 1..=5 {
                let a = pair_transform(&ctx, t, &triv, &k(&[d]), &opts).map_err(err)?;
                let b = nested_pair(&ctx, t, &triv, &k(&[d]), 12).map_err(err)?;
                eq(&format!("P={p}"), &k(&[d]), &a, &b)?;
            }
        }
    }
    for (p1, p2, d) in [(1, 1, 1), (2, 3, 1), (3, 2, 2), (4, 1, 3), (6, 6, 4)] {
        let (ctx, t) = extension_ctx(p1, p2, d, true);
        let a = pair_transform(&ctx, &t, &triv, &k(&[1, 1]), &opts).map_err(err)?;
        let b = nested_pair(&ctx, &t, &triv, &k(&[1, 1]), 12).map_err(err)?;
        eq(&format!("extension P=({p1},{p2}) d={d}"), &k(&[1, 1]), &a, &b)?;
    }
    Ok(())
}

fn random_table(ctx: &NumericalContext, rng: &mut ChaCha8Rng, max_total: i64, stab: &str) -> InvariantTable {
    let mut t = InvariantTable::new(InvariantKind::DTbar, stab);
    for c in ctx.cone_classes(max_total) {
        if rng.gen_bool(0.7) {
            t.insert(c, random_rational(rng));
        }
    }
    t
}

fn random_slope(rng: &mut ChaCha8Rng, rank: usize) -> WeakStability {
    let c: Vec<i64> = (0..rank).map(|_| rng.gen_range(-3..=3)).collect();
    let r: Vec<i64> = (0..rank).map(|_| rng.gen_range(1..=3)).collect();
    WeakStability::slope_from_ints(&c, &r)
}

fn random_context(rng: &mut ChaCha8Rng, rank: usize, zero_form: bool) -> NumericalContext {
    let x = if zero_form { 0 } else { rng.gen_range(-3..=3) };
    let m = if rank == 1 { vec![vec![0]] } else { vec![vec![0, x], vec![-x, 0]] };
    NumericalContext::from_chi_bar(m).unwrap()
}

fn c11_identities() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let opts = TransformOptions { signed: true, max_parts: 4 };
    for case in 0..20 {
        let rank = 1 + case % 2;
        let ctx = random_context(&mut rng, rank, false);
        let table = random_table(&ctx, &mut rng, 4, "tau");
        let tau = random_slope(&mut rng, rank);
        for target in ctx.cone_classes(4) {
            let r = transform(&ctx, &table, &tau, &tau, &target, &opts).map_err(err)?;
            eq(&format!("case {case} equal stabilities"), &target, &table.get(&target), &r.value)?;
        }
        let flat = random_context(&mut rng, 2, true);
        let table = random_table(&flat, &mut rng, 4, "tau");
        let (a, b) = (random_slope(&mut rng, 2), random_slope(&mut rng, 2));
        for target in flat.cone_classes(4) {
            let r = transform(&flat, &table, &a, &b, &target, &opts).map_err(err)?;
            eq(&format!("case {case} zero Euler form"), &target, &table.get(&target), &r.value)?;
        }
    }
    Ok(())
}

fn c12_v_symmetrization() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let opts = TransformOptions { signed: true, max_parts: 4 };
    for p in 1..=3 {
        let bp = b_p(p);
        let table = random_table(&bp, &mut rng, 4, "taudot");
        let pairs = [
            (WeakStability::tau_dot(), WeakStability::tau_tilde()),
            (WeakStability::tau_tilde(), WeakStability::tau_dot()),
            (WeakStability::tau_dot(), WeakStability::tau_hat()),
        ];
        for (a, b) in &pairs {
            for target in bp.cone_classes(4) {
                let u = transform(&bp, &table, a, b, &target, &opts).map_err(err)?;
                let v = transform_v_form(&bp, &table, a, b, &target, &opts).map_err(err)?;
                eq(&format!("P={p}"), &target, &u.value, &v.value)?;
            }
        }
    }
    for case in 0..10 {
        let ctx = random_context(&mut rng, 2, false);
        let table = random_table(&ctx, &mut rng, 4, "a");
        let (a, b) = (random_slope(&mut rng, 2), random_slope(&mut rng, 2));
        for target in ctx.cone_classes(4) {
            let u = transform(&ctx, &table, &a, &b, &target, &opts).map_err(err)?;
            let v = transform_v_form(&ctx, &table, &a, &b, &target, &opts).map_err(err)?;
            eq(&format!("slope pair {case}"), &target, &u.value, &v.value)?;
        }
    }
    Ok(())
}

const ORACLE_CASES: [(i64, i64, i64); 6] = [(1, 1, 1), (1, 2, 1), (2, 1, 1), (3, 1, 1), (2, 1, 2), (2, 2, 1)];

struct OracleRow {
    m: i64,
    d: i64,
    e: i64,
    euler: Rational,
    ndt: Rational,
}

fn oracle_rows() -> Result<Vec<OracleRow>, String> {
    ORACLE_CASES
        .par_iter()
        .map(|&(m, d, e)| {
            let q = Quiver::loops(m as usize);
            let fields = [2, 3, 4, 5, 7, 8, 9];
            let r = euler_characteristic(&q, &k(&[d]), &k(&[e]), &OracleStability::Trivial, &fields, DEFAULT_BUDGET)
                .map_err(err)?;
            let ndt = ndt_from_count(&r, (1 - m) * d * d).map_err(err)?;
            Ok(OracleRow {
                m,
                d,
                e,
                euler: big(r.euler_value().map_err(err)?),
                ndt,
            })
        })
        .collect()
}

fn mloop_euler(m: i64, d: i64, e: i64, corrected: bool) -> Rational {
    let den = if corrected { (m - 1) * d + e } else { (m - 1) * d + 1 };
    int(e) * big(binomial((m * d + e - 1) as u64, d)) / int(den)
}

fn c13_euler(rows: &[OracleRow], corrected: bool) -> Check {
    for r in rows {
        eq(
            &format!("Euler characteristic (m,d,e)=({},{},{})", r.m, r.d, r.e),
            &k(&[r.d]),
            &mloop_euler(r.m, r.d, r.e, corrected),
            &r.euler,
        )?;
    }
    Ok(())
}

fn c13_ndt(rows: &[OracleRow]) -> Check {
    for r in rows {
        let label = format!("(m,d,e)=({},{},{})", r.m, r.d, r.e);
        if r.e == 1 {
            eq(&format!("NDT vs series coefficient {label}"), &k(&[r.d]), &mloop_ndt(r.m, r.d), &r.ndt)?;
        }
        let ctx = NumericalContext::from_quiver(&Quiver::loops(r.m as usize)).with_framing(vec![r.e]).map_err(err)?;
        let dtbar =
            InvariantTable::from_fn(InvariantKind::DTbar, "trivial", (1..=r.d).map(|x| k(&[x])), |c| mloop_dtbar(r.m, c.coords()[0]));
        let pi = pair_transform(&ctx, &dtbar, &WeakStability::Trivial, &k(&[r.d]), &PairOptions::default())
            .map_err(err)?;
        eq(&format!("NDT vs pair transform {label}"), &k(&[r.d]), &pi, &r.ndt)?;
    }
    Ok(())
}

fn c14_round_trips() -> Check {
    let config = Config {
        cases: 100,
        failure_persistence: None,
        ..Config::default()
    };
    let small = || (-20i64..=20, 1i64..=6).prop_map(|(n, d)| rat(n, d));

    let mut runner = TestRunner::new(config.clone());
    runner
        .run(&proptest::collection::vec(small(), 1..=12), |vals| {
            let mut t = InvariantTable::new(InvariantKind::DTbar, "mu");
            for (i, v) in vals.iter().enumerate() {
                t.insert(k(&[i as i64 + 1, 2 * (i as i64 + 1)]), v.clone());
            }
            let back = dt_from_bps(&bps_from_dt(&t).unwrap()).unwrap();
            prop_assert_eq!(back.entries(), t.entries());
            Ok(())
        })
        .map_err(|e| format!("Möbius: {e}"))?;

    let mut runner = TestRunner::new(config.clone());
    runner
        .run(&proptest::collection::vec(small(), 6), |vals| {
            let bound = Bound::TotalDegree(3);
            let monos = bound.monomials(2);
            let terms = monos.iter().skip(1).zip(&vals).map(|(m, v)| (m.0.clone(), v.clone()));
            let s = TruncatedSeries::from_terms(2, bound.clone(), terms).unwrap();
            prop_assert_eq!(s.exp().unwrap().log().unwrap(), s.clone());
            let one_plus = TruncatedSeries::one(2, bound).unwrap().add(&s).unwrap();
            prop_assert_eq!(one_plus.log().unwrap().exp().unwrap(), one_plus);
            Ok(())
        })
        .map_err(|e| format!("exp/log: {e}"))?;

    let mut runner = TestRunner::new(config);
    runner
        .run(&(proptest::collection::vec(small(), 8), 1i64..=4), |(vals, p)| {
            let ctx = NumericalContext::from_chi_bar(vec![vec![0, 0], vec![0, 0]])
                .unwrap()
                .with_framing(vec![p, 1])
                .unwrap();
            let mut t = InvariantTable::new(InvariantKind::DTbar, "trivial");
            let classes = ctx.cone_classes(3);
            for (c, v) in classes.iter().zip(vals.iter().cycle()) {
                t.insert(c.clone(), v.clone());
            }
            let series = pair_series(&ctx, &t, &Bound::TotalDegree(3)).unwrap();
            let inv = dt_from_pair_series(&ctx, &series, "trivial").unwrap();
            prop_assert!(inv.undetermined.is_empty());
            prop_assert_eq!(inv.table.entries(), t.entries());
            Ok(())
        })
        .map_err(|e| format!("pair series: {e}"))?;
    Ok(())
}

// ---------------------------------------------------------------- driver

struct Line {
    id: usize,
    title: &'static str,
    stated: Check,
    /// For criteria whose stated form is known to be wrong: whether the
    /// failure matched the prediction, and the corrected form's result.
    known: Option<(bool, Check, &'static str)>,
    secs: f64,
}

fn plain(id: usize, title: &'static str, f: fn() -> Check) -> Box<dyn Fn() -> Line + Sync> {
    Box::new(move || {
        let t = Instant::now();
        let stated = f();
        Line { id, title, stated, known: None, secs: t.elapsed().as_secs_f64() }
    })
}

fn main() -> ExitCode {
    let jobs: Vec<Box<dyn Fn() -> Line + Sync>> = vec![
        plain(1, "m-loop binomial sum equals its exp form to q^10, m = 1..4", c1_mloop_identity),
        plain(2, "m-loop BPS invariants integral for m <= 5, d <= 20; Reineke b_i integral", c2_bps_integrality),
        plain(3, "conifold product gives the closed DTbar and DThat tables", c3_conifold),
        plain(4, "MacMahon powers give DTbar = -chi sum 1/l^2 and DThat = -chi", c4_macmahon),
        Box::new(|| {
            let t = Instant::now();
            let (stated, known) = match c3z2z2_bps() {
                Ok(bps) => (
                    c5_stated(&bps),
                    Some((c5_prediction_holds(&bps), c5_corrected(&bps), "table with (k,k-1,k-1,k-1) -> 1")),
                ),
                Err(e) => (Err(e), None),
            };
            Line { id: 5, title: "C3/Z2xZ2 product gives the four-case BPS table", stated, known, secs: t.elapsed().as_secs_f64() }
        }),
        Box::new(|| {
            let t = Instant::now();
            let build = |corr: bool| -> Result<Vec<(usize, InvariantTable)>, String> {
                [2usize, 3].iter().map(|&n| c3zn_bps(n, corr).map(|b| (n, b))).collect()
            };
            let (stated, known) = match (build(false), build(true)) {
                (Ok(printed), Ok(fixed)) => (
                    c6_check(&printed),
                    Some((
                        c6_prediction_holds(&printed),
                        c6_check(&fixed).and_then(|_| catalog_passes("c3zn:2", 8)).and_then(|_| catalog_passes("c3zn:3", 8)),
                        "diagonal exponent -nk",
                    )),
                ),
                (Err(e), _) | (_, Err(e)) => (Err(e), None),
            };
            Line { id: 6, title: "C3/Zn product (n = 2, 3) gives the BPS table with dihedral symmetry", stated, known, secs: t.elapsed().as_secs_f64() }
        }),
        plain(7, "pair transform reproduces Grassmannian, product and extension counts", c7_pair_engine),
        plain(8, "U on the framed stabilities equals (-1)^(n-k)/((k-1)!(n-k)!), n <= 6", c8_u_closed_form),
        plain(9, "signed composition sum equals (-1)^l/l!, l <= 10", c9_composition_identity),
        plain(10, "nested Lie brackets equal the pair transform", c10_lie_bracket),
        plain(11, "transform is the identity for equal stabilities and for zero Euler form", c11_identities),
        plain(12, "transform through V equals transform through U, n <= 4", c12_v_symmetrization),
        Box::new(|| {
            let t = Instant::now();
            let (stated, known) = match oracle_rows() {
                Ok(rows) => {
                    let stated = c13_euler(&rows, false).and_then(|_| c13_ndt(&rows));
                    let predicted = c13_euler(&rows, false).is_err()
                        && rows.iter().filter(|r| r.e == 1).all(|r| r.euler == mloop_euler(r.m, r.d, r.e, false));
                    let fixed = c13_euler(&rows, true).and_then(|_| c13_ndt(&rows));
                    (stated, Some((predicted, fixed, "denominator (m-1)d+e")))
                }
                Err(e) => (Err(e), None),
            };
            Line { id: 13, title: "finite-field Euler characteristics match the m-loop closed form; NDT agrees", stated, known, secs: t.elapsed().as_secs_f64() }
        }),
        plain(14, "round trips: Moebius, exp/log, pair series (100 random cases each)", c14_round_trips),
    ];

    let lines: Vec<Line> = jobs.par_iter().map(|j| j()).collect();
    let mut ok = true;
    let known_ids: BTreeSet<usize> = [5, 6, 13].into_iter().collect();
    for line in &lines {
        let status = if line.stated.is_ok() { "PASS" } else { "FAIL" };
        let mut text = format!("criterion {:>2}: {status}  {} ({:.1}s)", line.id, line.title, line.secs);
        if let Err(e) = &line.stated {
            text.push_str(&format!("\n    {e}"));
        }
        match (&line.known, known_ids.contains(&line.id)) {
            (Some((predicted, fixed, what)), true) if line.stated.is_err() => {
                text.push_str(&format!(
                    "\n    stated form fails as predicted: {}; corrected ({what}): {}",
                    if *predicted { "yes" } else { "NO" },
                    match fixed {
                        Ok(()) => "PASS".to_string(),
                        Err(e) => format!("FAIL {e}"),
                    }
                ));
                ok &= *predicted && fixed.is_ok();
            }
            (_, true) => {
                text.push_str("\n    expected the stated form to fail");
                ok = false;
            }
            _ => ok &= line.stated.is_ok(),
        }
        println!("{text}");
    }
    let passed = lines.iter().filter(|l| l.stated.is_ok()).count();
    println!("{passed}/{} criteria pass as stated; known defects: {:?}", lines.len(), known_ids);
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
