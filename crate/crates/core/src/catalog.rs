//! Worked examples with closed forms, and their verification.
//!
//! Each entry bundles a numerical context, the generating series of its
//! framed invariants (an infinite product or an explicit coefficient
//! formula), and closed forms for DT̄ and the BPS invariants. Verification
//! expands the series, extracts DT̄, fills framing-zero classes from the
//! quiver's symmetries, applies the Möbius transform and compares.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::{
    bps_from_dt, dt_from_pair_series, pair_transform, InvariantKind, InvariantTable, PairOptions,
};
use crate::lattice::{KClass, NumericalContext, Quiver, WeakStability};
use crate::numerics::{big, binomial, divisors, format_rational, int, is_integral, moebius, rat, sign, Rational};
use crate::series::{product_expand, Bound, TruncatedSeries};

/// A catalog entry by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Entry {
    /// Coherent sheaves on `C³`: three commuting loops.
    C3,
    /// Noncommutative conifold: two vertices, two edges each way.
    Conifold,
    /// `C³/Z₂²`: four vertices, one edge between each ordered pair.
    C3Z2Z2,
    /// `C³/Z_n`: cyclic quiver with loops and edges both ways.
    C3Zn(usize),
    /// One vertex with `m` loops, no relations.
    MLoop(usize),
    /// Pair invariants of rigid stable objects: Grassmannians and extensions.
    Grassmann,
    /// Dimension-zero sheaves on a Calabi-Yau 3-fold of Euler characteristic `χ`.
    Dim0(i64),
}

/// Whether to use formulas as printed or with known defects corrected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    #[default]
    Corrected,
    Printed,
}

impl FromStr for Entry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownEntry(s.to_string());
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let num = |a: Option<&str>| -> Result<i64> { a.ok_or_else(unknown)?.trim().parse().map_err(|_| unknown()) };
        match head {
            "c3" if arg.is_none() => Ok(Entry::C3),
            "conifold" if arg.is_none() => Ok(Entry::Conifold),
            "c3z2z2" if arg.is_none() => Ok(Entry::C3Z2Z2),
            "grassmann" if arg.is_none() => Ok(Entry::Grassmann),
            "c3zn" => match num(arg)? {
                n @ 1..=8 => Ok(Entry::C3Zn(n as usize)),
                _ => Err(unknown()),
            },
            "mloop" => match num(arg)? {
                m @ 1..=12 => Ok(Entry::MLoop(m as usize)),
                _ => Err(unknown()),
            },
            "dim0" => match arg {
                None => Ok(Entry::Dim0(2)),
                Some(_) => match num(arg)? {
                    c @ 1..=12 => Ok(Entry::Dim0(c)),
                    _ => Err(unknown()),
                },
            },
            _ => Err(unknown()),
        }
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entry::C3 => write!(f, "c3"),
            Entry::Conifold => write!(f, "conifold"),
            Entry::C3Z2Z2 => write!(f, "c3z2z2"),
            Entry::C3Zn(n) => write!(f, "c3zn:{n}"),
            Entry::MLoop(m) => write!(f, "mloop:{m}"),
            Entry::Grassmann => write!(f, "grassmann"),
            Entry::Dim0(2) => write!(f, "dim0"),
            Entry::Dim0(c) => write!(f, "dim0:{c}"),
        }
    }
}

/// Name and formula summary of a listed entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryInfo {
    pub name: String,
    pub formulas: Vec<String>,
}

/// All listed entries in a fixed order.
pub fn list() -> Vec<EntryInfo> {
    let mut entries = vec![Entry::C3, Entry::Conifold, Entry::C3Z2Z2, Entry::C3Zn(2), Entry::C3Zn(3)];
    entries.extend((1..=5).map(Entry::MLoop));
    entries.push(Entry::Grassmann);
    entries.push(Entry::Dim0(2));
    entries
        .into_iter()
        .map(|e| EntryInfo {
            name: e.to_string(),
            formulas: e.formulas().iter().map(|s| s.to_string()).collect(),
        })
        .collect()
}

/// One factor `(1 − (−1)^{d₀} q^d)^{exponent}` of a framed product formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub class: Vec<u32>,
    pub exponent: Rational,
}

fn factor(class: Vec<u32>, exponent: i64) -> Factor {
    Factor {
        class,
        exponent: int(exponent),
    }
}

impl Entry {
    /// Closed forms carried by the entry, in words.
    pub fn formulas(&self) -> Vec<&'static str> {
        match self {
            Entry::C3 => vec![
                "1 + Σ NDT^d q^d = ∏_k (1 − (−q)^k)^{−k}",
                "DT̄^d = −Σ_{l|d} 1/l²",
                "DT̂^d = −1",
            ],
            Entry::Conifold => vec![
                "framed series = ∏_k (1 − (−q0q1)^k)^{−2k} (1 − (−q0)^k q1^{k−1})^k (1 − (−q0)^k q1^{k+1})^k",
                "DT̄^{(d,d)} = −2Σ_{l|d} 1/l²; DT̄^{(kl,(k∓1)l)} = 1/l²; else 0",
                "DT̂ = −2 on (k,k), 1 on (k,k−1) and (k−1,k), else 0",
            ],
            Entry::C3Z2Z2 => vec![
                "framed series = ∏ over k of MacMahon-type factors in q0q1q2q3 and its partial products",
                "DT̂ = −4 on (k,k,k,k); −1 with two entries k and two k−1; 1 with three k and one k−1, or one k and three k−1; else 0",
            ],
            Entry::C3Zn(_) => vec![
                "framed series = ∏_k (1 − (−Q)^k)^{−nk} ∏_{0<a<b≤n} (1 − (−Q)^k q_[a,b))^{−k} (1 − (−Q)^k q_[a,b)^{−1})^{−k}",
                "DT̂ = −n on (k,…,k); −1 when k on a cyclic interval and k−1 off it; else 0",
            ],
            Entry::MLoop(_) => vec![
                "1 + Σ NDT^d q^d = Σ_d (−1)^{md}/((m−1)d+1) binomial(md,d) q^d = exp[Σ_d (−1)^{md}/(md) binomial(md,d) q^d]",
                "DT̄^d = (−1)^{(m+1)d+1}/(md²) binomial(md,d)",
                "DT̂^d = 1/(md²) Σ_{e|d} Mö(d/e)(−1)^{(m+1)e+1} binomial(me,e)",
            ],
            Entry::Grassmann => vec![
                "PI^{mα} = (−1)^{m(P−m)} binomial(P,m) from DT̄^{kα} = 1/k²",
                "unsigned: binomial(P,m) from J^{kα} = (−1)^{k−1}/k²",
                "PI^{Σ mᵢαᵢ} = ∏ (−1)^{mᵢ(Pᵢ−mᵢ)} binomial(Pᵢ,mᵢ)",
                "PI^{α1+α2} = (−1)^{P1+P2+d−2}(P1+d)P2 when χ̄(α1,α2) = d",
            ],
            Entry::Dim0(_) => vec![
                "1 + Σ PI^{dp} s^d = M(−s)^χ with M the MacMahon function",
                "DT̄^{dp} = −χ Σ_{l|d} 1/l²",
                "DT̂^{dp} = −χ",
            ],
        }
    }

    /// Numerical context with its framing functional.
    pub fn context(&self) -> Result<NumericalContext> {
        let with_frame = |q: Quiver| -> Result<NumericalContext> {
            let mut f = vec![0; q.vertex_count()];
            f[0] = 1;
            NumericalContext::from_quiver(&q).with_framing(f)
        };
        match self {
            Entry::C3 => with_frame(Quiver::loops(3)),
            Entry::Conifold => with_frame(conifold_quiver()),
            Entry::C3Z2Z2 => with_frame(c3z2z2_quiver()),
            Entry::C3Zn(n) => with_frame(c3zn_quiver(*n)?),
            Entry::MLoop(m) => with_frame(Quiver::loops(*m)),
            Entry::Grassmann | Entry::Dim0(_) => NumericalContext::from_chi_bar(vec![vec![0]])?.with_framing(vec![1]),
        }
    }

    /// Truncation used for `order`.
    pub fn bound(&self, order: u32) -> Bound {
        match self {
            Entry::C3Z2Z2 => Bound::PerVariable(vec![order; 4]),
            _ => Bound::TotalDegree(order),
        }
    }

    /// Coordinate permutations preserving the quiver; `perm[i]` is the image of vertex `i`.
    pub fn symmetries(&self) -> Vec<Vec<usize>> {
        match self {
            Entry::Conifold => vec![vec![1, 0]],
            Entry::C3Z2Z2 => permutations(4),
            Entry::C3Zn(n) => {
                let n = *n;
                let mut out = Vec::new();
                for r in 0..n {
                    out.push((0..n).map(|i| (i + r) % n).collect());
                    out.push((0..n).map(|i| (n - i + r) % n).collect());
                }
                out
            }
            _ => vec![],
        }
    }

    /// Factors of the framed product, up to what `bound` can see.
    pub fn product(&self, order: u32, variant: Variant) -> Option<Vec<Factor>> {
        let ks = 1..=(order as i64 + 1);
        let u = |x: i64| x as u32;
        match self {
            Entry::C3 => Some(ks.map(|k| factor(vec![u(k)], -k)).collect()),
            Entry::Dim0(chi) => Some(ks.map(|k| factor(vec![u(k)], -k * chi)).collect()),
            Entry::Conifold => {
                let mut f = Vec::new();
                for k in ks {
                    f.push(factor(vec![u(k), u(k)], -2 * k));
                    f.push(factor(vec![u(k), u(k - 1)], k));
                    f.push(factor(vec![u(k), u(k + 1)], k));
                }
                Some(f)
            }
            Entry::C3Z2Z2 => {
                let mut f = Vec::new();
                for k in ks {
                    f.push(factor(vec![u(k); 4], -4 * k));
                    for s in [k + 1, k - 1] {
                        // v0 with one partner at k, the other two at k ± 1.
                        for j in 1..4 {
                            let mut c = vec![u(s); 4];
                            c[0] = u(k);
                            c[j] = u(k);
                            f.push(factor(c, -k));
                        }
                        // v0 with two partners at k, the third at k ± 1.
                        for j in 1..4 {
                            let mut c = vec![u(k); 4];
                            c[j] = u(s);
                            f.push(factor(c, k));
                        }
                        let mut c = vec![u(s); 4];
                        c[0] = u(k);
                        f.push(factor(c, k));
                    }
                }
                Some(f)
            }
            Entry::C3Zn(n) => {
                let n = *n;
                let diag_exp = |k: i64| match variant {
                    Variant::Corrected => -(n as i64) * k,
                    Variant::Printed => -(n as i64),
                };
                let mut f = Vec::new();
                for k in ks {
                    f.push(factor(vec![u(k); n], diag_exp(k)));
                    for a in 1..n {
                        for b in a + 1..=n {
                            let mut up = vec![u(k); n];
                            let mut down = vec![u(k); n];
                            for i in a..b {
                                up[i] += 1;
                                down[i] -= 1;
                            }
                            f.push(factor(up, -k));
                            f.push(factor(down, -k));
                        }
                    }
                }
                Some(f)
            }
            Entry::MLoop(_) | Entry::Grassmann => None,
        }
    }

    /// Closed form for DT̄, where the entry has one.
    pub fn dtbar(&self, d: &KClass) -> Option<Rational> {
        let c = d.coords();
        match self {
            Entry::C3 => Some(-inverse_square_divisor_sum(c[0])),
            Entry::Dim0(chi) => Some(-int(*chi) * inverse_square_divisor_sum(c[0])),
            Entry::MLoop(m) => Some(mloop_dtbar(*m as i64, c[0])),
            Entry::Conifold => Some(conifold_dtbar(c[0], c[1])),
            _ => None,
        }
    }

    /// Closed form for the BPS invariants.
    pub fn dthat(&self, d: &KClass, variant: Variant) -> Option<Rational> {
        let c = d.coords();
        match self {
            Entry::C3 => Some(int(-1)),
            Entry::Dim0(chi) => Some(int(-chi)),
            Entry::MLoop(m) => Some(mloop_dthat(*m as i64, c[0])),
            Entry::Conifold => Some(int(conifold_dthat(c[0], c[1]))),
            Entry::C3Z2Z2 => Some(int(c3z2z2_dthat(c, variant))),
            Entry::C3Zn(n) => Some(int(c3zn_dthat(*n, c))),
            Entry::Grassmann => None,
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn permute(c: &KClass, perm: &[usize]) -> KClass {
    let mut out = vec![0; c.rank()];
    for (i, &x) in c.coords().iter().enumerate() {
        out[perm[i]] = x;
    }
    KClass(out)
}

pub fn conifold_quiver() -> Quiver {
    Quiver::with_vertex_count(2, vec![(0, 1), (0, 1), (1, 0), (1, 0)]).expect("valid quiver")
}

pub fn c3z2z2_quiver() -> Quiver {
    let edges = (0..4)
        .flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    Quiver::with_vertex_count(4, edges).expect("valid quiver")
}

pub fn c3zn_quiver(n: usize) -> Result<Quiver> {
    if n == 0 {
        return Err(Error::Domain("c3zn needs n ≥ 1".into()));
    }
    let edges = (0..n)
        .flat_map(|i| [(i, (i + 1) % n), (i, i), (i, (i + n - 1) % n)])
        .collect();
    Quiver::with_vertex_count(n, edges)
}

/// `Σ_{l|d} 1/l²`.
pub fn inverse_square_divisor_sum(d: i64) -> Rational {
    if d <= 0 {
        return Rational::zero();
    }
    divisors(d as u64)
        .into_iter()
        .map(|l| rat(1, (l * l) as i64))
        .sum()
}

pub fn conifold_dtbar(d0: i64, d1: i64) -> Rational {
    if d0 == d1 {
        return if d0 >= 1 { -int(2) * inverse_square_divisor_sum(d0) } else { Rational::zero() };
    }
    // d0 = kl, d1 = (k ∓ 1)l  ⇔  |d0 − d1| = l divides both.
    let l = (d0 - d1).abs();
    if d0 >= 0 && d1 >= 0 && d0 % l == 0 && d1 % l == 0 {
        rat(1, l * l)
    } else {
        Rational::zero()
    }
}

pub fn conifold_dthat(d0: i64, d1: i64) -> i64 {
    match d0 - d1 {
        0 if d0 >= 1 => -2,
        1 | -1 if d0 >= 0 && d1 >= 0 => 1,
        _ => 0,
    }
}

/// Entries sorted, split as (value k, number of entries k, number of entries k − 1).
fn two_level(c: &[i64]) -> Option<(i64, usize, usize)> {
    let k = *c.iter().max()?;
    if k < 1 || c.iter().any(|&x| x != k && x != k - 1) {
        return None;
    }
    let top = c.iter().filter(|&&x| x == k).count();
    Some((k, top, c.len() - top))
}

pub fn c3z2z2_dthat(c: &[i64], variant: Variant) -> i64 {
    match (two_level(c), variant) {
        (Some((_, 4, 0)), _) => -4,
        (Some((_, 2, 2)), _) => -1,
        (Some((_, 3, 1)), _) => 1,
        (Some((_, 1, 3)), Variant::Corrected) => 1,
        _ => 0,
    }
}

pub fn c3zn_dthat(n: usize, c: &[i64]) -> i64 {
    let Some((_, top, _)) = two_level(c) else {
        return 0;
    };
    if top == n {
        return -(n as i64);
    }
    let k = *c.iter().max().unwrap();
    // Top entries must form one cyclic interval: exactly one rise into it.
    let rises = (0..n).filter(|&i| c[i] == k && c[(i + n - 1) % n] == k - 1).count();
    if rises == 1 {
        -1
    } else {
        0
    }
}

pub fn mloop_dtbar(m: i64, d: i64) -> Rational {
    int(sign((m + 1) * d + 1)) * big(binomial((m * d) as u64, d)) / int(m * d * d)
}

pub fn mloop_dthat(m: i64, d: i64) -> Rational {
    let s: Rational = divisors(d as u64)
        .into_iter()
        .map(|e| {
            let e = e as i64;
            int(moebius((d / e) as u64).expect("positive") * sign((m + 1) * e + 1)) * big(binomial((m * e) as u64, e))
        })
        .sum();
    s / int(m * d * d)
}

/// `Σ_{d≥0} (−1)^{md}/((m−1)d+1) binomial(md,d) q^d` to `q^order`.
pub fn mloop_series(m: i64, order: u32) -> Result<TruncatedSeries> {
    let terms = (0..=order as i64).map(|d| {
        (
            vec![d as u32],
            int(sign(m * d)) * big(binomial((m * d) as u64, d)) / int((m - 1) * d + 1),
        )
    });
    TruncatedSeries::from_terms(1, Bound::TotalDegree(order), terms)
}

/// `exp[Σ_{d≥1} (−1)^{md}/(md) binomial(md,d) q^d]` to `q^order`.
pub fn mloop_exp_form(m: i64, order: u32) -> Result<TruncatedSeries> {
    let terms = (1..=order as i64).map(|d| {
        (
            vec![d as u32],
            int(sign(m * d)) * big(binomial((m * d) as u64, d)) / int(m * d),
        )
    });
    TruncatedSeries::from_terms(1, Bound::TotalDegree(order), terms)?.exp()
}

/// A disagreement found during verification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub check: String,
    pub class: KClass,
    pub expected: String,
    pub got: String,
}

/// Outcome of [`verify`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogReport {
    pub entry: String,
    pub variant: Variant,
    #[serde(rename = "checked-classes")]
    pub checked_classes: usize,
    pub mismatches: Vec<Mismatch>,
}

impl CatalogReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

struct Checker {
    checked: usize,
    mismatches: Vec<Mismatch>,
}

impl Checker {
    fn compare(&mut self, check: &str, class: &KClass, expected: &Rational, got: &Rational) {
        self.checked += 1;
        if expected != got {
            self.mismatches.push(Mismatch {
                check: check.to_string(),
                class: class.clone(),
                expected: format_rational(expected),
                got: format_rational(got),
            });
        }
    }
}

/// DT̄ extracted from the entry's framed series, with framing-zero classes
/// filled from symmetric images. Classes left unfilled are returned separately.
pub fn dtbar_from_product(entry: Entry, order: u32, variant: Variant) -> Result<(InvariantTable, Vec<KClass>)> {
    let ctx = entry.context()?;
    let bound = entry.bound(order);
    let series = match entry {
        Entry::MLoop(m) => mloop_series(m as i64, order)?,
        _ => {
            let factors = entry
                .product(order, variant)
                .ok_or_else(|| Error::Domain(format!("{entry} has no framed series")))?;
            let rank = ctx.rank();
            let bases = factors
                .iter()
                .map(|f| {
                    let c = -int(sign(f.class[0] as i64));
                    Ok((TruncatedSeries::binomial_base(rank, bound.clone(), f.class.clone(), c)?, f.exponent.clone()))
                })
                .collect::<Result<Vec<_>>>()?;
            product_expand(rank, bound, &bases)?
        }
    };
    let inv = dt_from_pair_series(&ctx, &series, "trivial")?;
    let mut table = inv.table;
    let mut missing = Vec::new();
    for c in inv.undetermined {
        let found = entry
            .symmetries()
            .iter()
            .map(|g| permute(&c, g))
            .find(|img| table.contains(img))
            .map(|img| table.get(&img));
        match found {
            Some(v) => table.insert(c, v),
            None => missing.push(c),
        }
    }
    Ok((table, missing))
}

/// Verify `entry` to `order` with corrected formulas.
pub fn verify(name: &str, order: u32) -> Result<CatalogReport> {
    verify_variant(name, order, Variant::Corrected)
}

pub fn verify_variant(name: &str, order: u32, variant: Variant) -> Result<CatalogReport> {
    let entry: Entry = name.parse()?;
    let mut ck = Checker {
        checked: 0,
        mismatches: Vec::new(),
    };
    match entry {
        Entry::Grassmann => verify_grassmann(&mut ck, order)?,
        _ => verify_series_entry(&mut ck, entry, order, variant)?,
    }
    Ok(CatalogReport {
        entry: entry.to_string(),
        variant,
        checked_classes: ck.checked,
        mismatches: ck.mismatches,
    })
}

fn verify_series_entry(ck: &mut Checker, entry: Entry, order: u32, variant: Variant) -> Result<()> {
    if let Entry::MLoop(m) = entry {
        let lhs = mloop_series(m as i64, order)?;
        let rhs = mloop_exp_form(m as i64, order)?;
        for d in 0..=order {
            ck.compare("exp-form", &KClass(vec![d as i64]), &lhs.coefficient(&[d])?, &rhs.coefficient(&[d])?);
        }
    }
    let (dtbar, missing) = dtbar_from_product(entry, order, variant)?;
    for c in &missing {
        ck.mismatches.push(Mismatch {
            check: "undetermined".into(),
            class: c.clone(),
            expected: "value".into(),
            got: "none".into(),
        });
    }
    if !missing.is_empty() {
        return Ok(());
    }
    for (c, v) in dtbar.entries() {
        if let Some(expected) = entry.dtbar(c) {
            ck.compare("DTbar", c, &expected, v);
        }
    }
    let bps = bps_from_dt(&dtbar)?;
    for (c, v) in bps.entries() {
        if let Some(expected) = entry.dthat(c, variant) {
            ck.compare("DThat", c, &expected, v);
        }
        if !is_integral(v) {
            ck.mismatches.push(Mismatch {
                check: "integrality".into(),
                class: c.clone(),
                expected: "integer".into(),
                got: format_rational(v),
            });
        }
        for g in entry.symmetries() {
            let img = permute(c, &g);
            if bps.contains(&img) {
                ck.compare("symmetry", &img, v, &bps.get(&img));
            }
        }
    }
    if entry == Entry::Conifold {
        verify_conifold_swap(ck, &dtbar, order)?;
    }
    Ok(())
}

/// Framing the other vertex (swap `q0 ↔ q1` in the product) must give the
/// mirrored DT̄ table.
fn verify_conifold_swap(ck: &mut Checker, dtbar: &InvariantTable, order: u32) -> Result<()> {
    let ctx = NumericalContext::from_quiver(&conifold_quiver()).with_framing(vec![0, 1])?;
    let bound = Bound::TotalDegree(order);
    let bases = Entry::Conifold
        .product(order, Variant::Corrected)
        .unwrap_or_default()
        .into_iter()
        .map(|f| {
            let swapped = vec![f.class[1], f.class[0]];
            let c = -int(sign(swapped[1] as i64));
            Ok((TruncatedSeries::binomial_base(2, bound.clone(), swapped, c)?, f.exponent))
        })
        .collect::<Result<Vec<_>>>()?;
    let series = product_expand(2, bound, &bases)?;
    let swapped = dt_from_pair_series(&ctx, &series, "trivial")?;
    for (c, v) in swapped.table.entries() {
        let mirror = KClass(vec![c.coords()[1], c.coords()[0]]);
        ck.compare("swap", c, &dtbar.get(&mirror), v);
    }
    Ok(())
}

/// `(−1)^{m(P−m)} binomial(P,m)`.
pub fn grassmann_pi(p: i64, m: i64) -> Rational {
    int(sign(m * (p - m))) * big(binomial(p.max(0) as u64, m))
}

/// Rank-`l` context with `χ̄ ≡ 0` and framing `P_i` on the `i`-th class.
pub fn independent_rigid_context(p: &[i64]) -> Result<NumericalContext> {
    let l = p.len();
    NumericalContext::from_chi_bar(vec![vec![0; l]; l])?.with_framing(p.to_vec())
}

/// DT̄ (or J in unsigned form) for sums of multiples of independent rigid
/// stable classes: `1/k²` (or `(−1)^{k−1}/k²`) on `kαᵢ`, zero on mixtures.
pub fn independent_rigid_table(rank: usize, max_multiple: i64, signed: bool) -> InvariantTable {
    let kind = if signed { InvariantKind::DTbar } else { InvariantKind::J };
    let mut t = InvariantTable::new(kind, "trivial");
    for i in 0..rank {
        for k in 1..=max_multiple {
            let v = if signed { rat(1, k * k) } else { int(sign(k - 1)) * rat(1, k * k) };
            t.insert(KClass::unit(rank, i).scale(k), v);
        }
    }
    t
}

/// `∏ (−1)^{mᵢ(Pᵢ−mᵢ)} binomial(Pᵢ,mᵢ)`.
pub fn product_of_grassmannians(p: &[i64], m: &[i64]) -> Rational {
    p.iter().zip(m).map(|(&pi, &mi)| grassmann_pi(pi, mi)).product()
}

/// Two rigid classes with `χ̄(α1,α2) = d`: context and DT̄ (or J) table.
pub fn extension_pair(p1: i64, p2: i64, d: i64, signed: bool) -> Result<(NumericalContext, InvariantTable)> {
    let ctx = NumericalContext::from_chi_bar(vec![vec![0, d], vec![-d, 0]])?.with_framing(vec![p1, p2])?;
    let kind = if signed { InvariantKind::DTbar } else { InvariantKind::J };
    let mut t = InvariantTable::new(kind, "trivial");
    t.insert(KClass(vec![1, 0]), Rational::one());
    t.insert(KClass(vec![0, 1]), Rational::one());
    let top = if signed { int(sign(d - 1)) * rat(d, 2) } else { rat(d, 2) };
    t.insert(KClass(vec![1, 1]), top);
    Ok((ctx, t))
}

/// `(−1)^{P1+P2+d−2}(P1+d)P2`.
pub fn extension_pair_pi(p1: i64, p2: i64, d: i64) -> Rational {
    int(sign(p1 + p2 + d - 2) * (p1 + d) * p2)
}

fn verify_grassmann(ck: &mut Checker, order: u32) -> Result<()> {
    let max_m = (order as i64).clamp(1, 5);
    let opts = PairOptions::default();
    let unsigned = PairOptions {
        signed: false,
        ..opts
    };
    for p in 1..=12 {
        let ctx = independent_rigid_context(&[p])?;
        let dt = independent_rigid_table(1, max_m, true);
        let j = independent_rigid_table(1, max_m, false);
        for m in 1..=max_m {
            let target = KClass(vec![m]);
            let pi = pair_transform(&ctx, &dt, &WeakStability::Trivial, &target, &opts)?;
            ck.compare("grassmann", &target, &grassmann_pi(p, m), &pi);
            let chi = pair_transform(&ctx, &j, &WeakStability::Trivial, &target, &unsigned)?;
            ck.compare("grassmann-unsigned", &target, &big(binomial(p as u64, m)), &chi);
        }
    }
    for (p, m) in [
        (vec![3, 5], vec![1, 1]),
        (vec![4, 2, 7], vec![1, 1, 1]),
        (vec![3, 5], vec![2, 1]),
        (vec![4, 2, 7], vec![2, 1, 3]),
    ] {
        let ctx = independent_rigid_context(&p)?;
        let dt = independent_rigid_table(p.len(), *m.iter().max().unwrap(), true);
        let target = KClass(m.clone());
        let pi = pair_transform(&ctx, &dt, &WeakStability::Trivial, &target, &opts)?;
        ck.compare("grassmann-product", &target, &product_of_grassmannians(&p, &m), &pi);
    }
    for p1 in 1..=6 {
        for p2 in 1..=6 {
            for d in 1..=4 {
                let (ctx, dt) = extension_pair(p1, p2, d, true)?;
                let target = KClass(vec![1, 1]);
                let pi = pair_transform(&ctx, &dt, &WeakStability::Trivial, &target, &opts)?;
                ck.compare("extension", &target, &extension_pair_pi(p1, p2, d), &pi);
                let (_, j) = extension_pair(p1, p2, d, false)?;
                let chi = pair_transform(&ctx, &j, &WeakStability::Trivial, &target, &unsigned)?;
                ck.compare("extension-unsigned", &target, &int((p1 + d) * p2), &chi);
            }
        }
    }
    Ok(())
}
