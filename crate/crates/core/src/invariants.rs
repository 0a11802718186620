//! Invariant tables and the transforms between them: BPS ↔ DT̄ by Möbius
//! inversion, pair invariants from DT̄ (term form and exponential form),
//! the inverse extraction, and the functional-equation integrality check.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{KClass, NumericalContext, WeakStability};
use crate::numerics::{big, factorial, format_rational, gcd_all, int, is_integral, moebius, parse_rational, rat_pow, sign, Rational};
use crate::series::{Bound, TruncatedSeries};
use crate::wallcross::decompositions;

/// What a table's values count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InvariantKind {
    /// Generalized DT invariants.
    DTbar,
    /// BPS invariants.
    DThat,
    /// Pair invariants / framed (noncommutative) DT invariants.
    #[serde(rename = "PI")]
    PairNdt,
    /// Unsigned invariants, naive Euler characteristics.
    J,
    /// Euler characteristics of framed moduli.
    #[serde(rename = "chi")]
    ChiFramed,
}

impl fmt::Display for InvariantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InvariantKind::DTbar => "DTbar",
            InvariantKind::DThat => "DThat",
            InvariantKind::PairNdt => "PI",
            InvariantKind::J => "J",
            InvariantKind::ChiFramed => "chi",
        };
        f.write_str(s)
    }
}

/// Finite map from classes to exact values; absent classes read as zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantTable {
    pub kind: InvariantKind,
    pub stability: String,
    entries: BTreeMap<KClass, Rational>,
}

impl InvariantTable {
    pub fn new(kind: InvariantKind, stability: &str) -> Self {
        Self {
            kind,
            stability: stability.to_string(),
            entries: BTreeMap::new(),
        }
    }

    pub fn from_fn(
        kind: InvariantKind,
        stability: &str,
        classes: impl IntoIterator<Item = KClass>,
        f: impl Fn(&KClass) -> Rational,
    ) -> Self {
        let mut t = Self::new(kind, stability);
        for c in classes {
            let v = f(&c);
            t.insert(c, v);
        }
        t
    }

    pub fn insert(&mut self, c: KClass, v: Rational) {
        self.entries.insert(c, v);
    }

    /// Value at `c`, zero if absent.
    pub fn get(&self, c: &KClass) -> Rational {
        self.entries.get(c).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn contains(&self, c: &KClass) -> bool {
        self.entries.contains_key(c)
    }

    pub fn entries(&self) -> &BTreeMap<KClass, Rational> {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Keep only entries satisfying `keep`.
    pub fn filtered(&self, keep: impl Fn(&KClass) -> bool) -> Self {
        Self {
            kind: self.kind,
            stability: self.stability.clone(),
            entries: self
                .entries
                .iter()
                .filter(|(c, _)| keep(c))
                .map(|(c, v)| (c.clone(), v.clone()))
                .collect(),
        }
    }

    /// Classes whose value is not an integer.
    pub fn non_integral(&self) -> Vec<KClass> {
        self.entries
            .iter()
            .filter(|(_, v)| !is_integral(v))
            .map(|(c, _)| c.clone())
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct EntryRepr {
    class: KClass,
    value: String,
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    kind: InvariantKind,
    stability: String,
    entries: Vec<EntryRepr>,
}

impl Serialize for InvariantTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TableRepr {
            kind: self.kind,
            stability: self.stability.clone(),
            entries: self
                .entries
                .iter()
                .map(|(c, v)| EntryRepr {
                    class: c.clone(),
                    value: format_rational(v),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for InvariantTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = TableRepr::deserialize(d)?;
        let mut t = InvariantTable::new(repr.kind, &repr.stability);
        for e in repr.entries {
            let v = parse_rational(&e.value).map_err(D::Error::custom)?;
            t.insert(e.class, v);
        }
        Ok(t)
    }
}

fn moebius_sum(
    table: &InvariantTable,
    kind: InvariantKind,
    weight: impl Fn(u64) -> Result<Rational>,
) -> Result<InvariantTable> {
    let mut out = InvariantTable::new(kind, &table.stability);
    for c in table.entries.keys() {
        let g = gcd_all(&c.0);
        let mut acc = Rational::zero();
        for m in 1..=g {
            if g % m != 0 {
                continue;
            }
            let divisor = c.div_exact(m as i64).expect("m divides the gcd");
            let Some(v) = table.entries.get(&divisor) else {
                return Err(Error::MissingDivisor {
                    class: c.clone(),
                    divisor,
                });
            };
            if !v.is_zero() {
                acc += weight(m)? * v;
            }
        }
        out.insert(c.clone(), acc);
    }
    Ok(out)
}

/// `DT̂^α = Σ_{m | α} Mö(m)/m² · DT̄^{α/m}`.
pub fn bps_from_dt(table: &InvariantTable) -> Result<InvariantTable> {
    moebius_sum(table, InvariantKind::DThat, |m| {
        Ok(Rational::new(moebius(m)?.into(), (m * m).into()))
    })
}

/// `DT̄^α = Σ_{m | α} 1/m² · DT̂^{α/m}`.
pub fn dt_from_bps(table: &InvariantTable) -> Result<InvariantTable> {
    moebius_sum(table, InvariantKind::DTbar, |m| {
        Ok(Rational::new(1.into(), (m * m).into()))
    })
}

/// Options for [`pair_transform`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairOptions {
    /// Signed pair invariants from DT̄, or unsigned Euler characteristics from `J`.
    pub signed: bool,
    pub max_parts: usize,
}

impl Default for PairOptions {
    fn default() -> Self {
        Self {
            signed: true,
            max_parts: 12,
        }
    }
}

/// Pair invariant of `target`:
/// `Σ_{α_1+…+α_l = α, τ(α_i) = τ(α)} (−1)^l/l! ∏ (−1)^{x_i} x_i DT̄^{α_i}`
/// with `x_i = F(α_i) − χ̄(α_1+…+α_{i−1}, α_i)`; unsigned mode drops every sign.
pub fn pair_transform(
    ctx: &NumericalContext,
    table: &InvariantTable,
    tau: &WeakStability,
    target: &KClass,
    opts: &PairOptions,
) -> Result<Rational> {
    ctx.require_cone(target)?;
    if ctx.framing().is_none() {
        return Err(Error::MissingFraming);
    }
    let level = tau.value(target)?;
    let mut support = Vec::new();
    for (c, v) in table.entries() {
        if !v.is_zero() && ctx.in_cone(c) && tau.value(c)? == level {
            support.push(c.clone());
        }
    }
    let (decs, truncated) = decompositions(ctx, &support, target, opts.max_parts);
    if truncated {
        return Err(Error::PartCap {
            target: target.clone(),
            cap: opts.max_parts,
        });
    }
    let mut total = Rational::zero();
    for parts in &decs {
        let mut prefix = KClass::zero(ctx.rank());
        let mut term = Rational::one();
        for p in parts {
            let x = ctx.framing_of(p)? - ctx.chi_bar(&prefix, p);
            term *= int(x) * table.get(p);
            if opts.signed {
                term *= int(sign(x));
            }
            prefix = prefix.add(p);
        }
        let l = parts.len() as u64;
        term /= big(factorial(l));
        if opts.signed {
            term *= int(sign(l as i64));
        }
        total += term;
    }
    Ok(total)
}

fn class_to_exponent(c: &KClass) -> Vec<u32> {
    c.0.iter().map(|&x| x as u32).collect()
}

/// `1 + Σ PI^d q^d = exp[−Σ (−1)^{F(d)} F(d) DT̄^d q^d]`, valid when `χ̄`
/// vanishes between all classes of the table.
pub fn pair_series(ctx: &NumericalContext, table: &InvariantTable, bound: &Bound) -> Result<TruncatedSeries> {
    let support: Vec<(&KClass, &Rational)> = table
        .entries()
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .collect();
    for (c, _) in &support {
        ctx.require_cone(c)?;
    }
    for (i, (a, _)) in support.iter().enumerate() {
        for (b, _) in &support[i + 1..] {
            if ctx.chi_bar(a, b) != 0 {
                return Err(Error::ChiBarNonzero((*a).clone(), (*b).clone()));
            }
        }
    }
    let mut terms = Vec::new();
    for (c, v) in support {
        let f = ctx.framing_of(c)?;
        terms.push((class_to_exponent(c), -int(sign(f) * f) * v));
    }
    TruncatedSeries::from_terms(ctx.rank(), bound.clone(), terms)?.exp()
}

/// [`pair_series`] after checking that every class of the table has the same
/// stability value.
pub fn pair_series_on_slope(
    ctx: &NumericalContext,
    table: &InvariantTable,
    stab: &WeakStability,
    bound: &Bound,
) -> Result<TruncatedSeries> {
    let mut first: Option<(&KClass, _)> = None;
    for (c, v) in table.entries() {
        if v.is_zero() {
            continue;
        }
        let val = stab.value(c)?;
        match &first {
            None => first = Some((c, val)),
            Some((c0, v0)) if *v0 != val => return Err(Error::OffSlope((*c0).clone(), c.clone())),
            _ => {}
        }
    }
    pair_series(ctx, table, bound)
}

/// DT̄ recovered from a pair series, with the classes where `F` vanishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairInversion {
    pub table: InvariantTable,
    /// Classes with `F(d) = 0`; the series carries no information about them.
    pub undetermined: Vec<KClass>,
}

/// Inverse of [`pair_series`]: `DT̄^d = −(−1)^{F(d)}/F(d) · [q^d] log(series)`,
/// classes taken in graded-lex order.
pub fn dt_from_pair_series(
    ctx: &NumericalContext,
    series: &TruncatedSeries,
    stability: &str,
) -> Result<PairInversion> {
    if series.arity() != ctx.rank() {
        return Err(Error::RankMismatch {
            expected: ctx.rank(),
            got: series.arity(),
        });
    }
    let log = series.log()?;
    let mut table = InvariantTable::new(InvariantKind::DTbar, stability);
    let mut undetermined = Vec::new();
    for m in series.bound().monomials(series.arity()) {
        if m.is_one() {
            continue;
        }
        let class = KClass(m.exps().iter().map(|&e| e as i64).collect());
        let c = log.coefficient(m.exps())?;
        let f = ctx.framing_of(&class)?;
        if f == 0 {
            if !c.is_zero() {
                return Err(Error::FramingZero(class));
            }
            undetermined.push(class);
            continue;
        }
        table.insert(class, -c * int(sign(f)) / int(f));
    }
    Ok(PairInversion {
        table,
        undetermined,
    })
}

/// Outcome of [`reineke_check`] or [`reineke_converse`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReinekeReport {
    /// Solved exponents, index 0 holding the order-1 value.
    pub solved: Vec<Rational>,
    /// Orders (1-based) whose solved exponent is not an integer.
    pub non_integral: Vec<usize>,
    /// `[t^0], ..., [t^order]` of `S(t)`.
    pub series: Vec<Rational>,
}

impl ReinekeReport {
    pub fn integral(&self) -> bool {
        self.non_integral.is_empty()
    }
}

fn t_power(i: u32, bound: &Bound) -> Result<TruncatedSeries> {
    TruncatedSeries::from_terms(1, bound.clone(), [(vec![i], Rational::one())])
}

/// `∏_{i≥1} (1 − (σt)^i)^{−i a_i}` with `σ = (−1)^N`.
fn bps_product(n_form: i64, a: &[Rational], bound: &Bound) -> Result<TruncatedSeries> {
    let sigma = int(sign(n_form));
    let mut acc = TruncatedSeries::one(1, bound.clone())?;
    for (idx, ai) in a.iter().enumerate() {
        let i = idx as u32 + 1;
        if ai.is_zero() {
            continue;
        }
        let base = TruncatedSeries::binomial_base(1, bound.clone(), vec![i], -rat_pow(&sigma, i as i64))?;
        acc = acc.mul(&base.pow_rational(&(-int(i as i64) * ai))?)?;
    }
    Ok(acc)
}

/// `∏_{i≥1} (1 − (t S^N)^i)^{i b_i}`.
fn functional_rhs(n_form: i64, s: &TruncatedSeries, b: &[Rational], bound: &Bound) -> Result<TruncatedSeries> {
    let mut acc = TruncatedSeries::one(1, bound.clone())?;
    for (idx, bi) in b.iter().enumerate() {
        let i = idx as u32 + 1;
        if bi.is_zero() {
            continue;
        }
        let inner = t_power(i, bound)?.mul(&s.pow_int(n_form * i as i64)?)?;
        let base = TruncatedSeries::one(1, bound.clone())?.sub(&inner)?;
        acc = acc.mul(&base.pow_rational(&(int(i as i64) * bi))?)?;
    }
    Ok(acc)
}

fn coeff(s: &TruncatedSeries, n: u32) -> Result<Rational> {
    s.coefficient(&[n])
}

fn report(solved: Vec<Rational>, s: &TruncatedSeries, order: u32) -> Result<ReinekeReport> {
    let non_integral = solved
        .iter()
        .enumerate()
        .filter(|(_, x)| !is_integral(x))
        .map(|(i, _)| i + 1)
        .collect();
    let series = (0..=order).map(|n| coeff(s, n)).collect::<Result<_>>()?;
    Ok(ReinekeReport {
        solved,
        non_integral,
        series,
    })
}

/// Build `S(t) = ∏ (1 − ((−1)^N t)^i)^{−i a_i}` from `a_1, a_2, …` and solve
/// `S(t) = ∏ (1 − (t S(t)^N)^i)^{i b_i}` for `b_1, …, b_order`, order by order.
pub fn reineke_check(n_form: i64, a: &[Rational], order: u32) -> Result<ReinekeReport> {
    let bound = Bound::TotalDegree(order);
    let take = a.len().min(order as usize);
    let s = bps_product(n_form, &a[..take], &bound)?;
    let mut b: Vec<Rational> = Vec::with_capacity(order as usize);
    for n in 1..=order {
        let rhs = functional_rhs(n_form, &s, &b, &bound)?;
        b.push((coeff(&rhs, n)? - coeff(&s, n)?) / int(n as i64));
    }
    report(b, &s, order)
}

/// The converse direction: from `b_i` solve the functional equation for
/// `S(t)`, then read off `a_i`.
pub fn reineke_converse(n_form: i64, b: &[Rational], order: u32) -> Result<ReinekeReport> {
    let bound = Bound::TotalDegree(order);
    let take = b.len().min(order as usize);
    let mut s = TruncatedSeries::one(1, bound.clone())?;
    // Each pass fixes one more coefficient of S.
    for _ in 0..=order {
        s = functional_rhs(n_form, &s, &b[..take], &bound)?;
    }
    let sigma = int(sign(n_form));
    let mut a: Vec<Rational> = Vec::with_capacity(order as usize);
    for n in 1..=order {
        let p = bps_product(n_form, &a, &bound)?;
        let diff = coeff(&s, n)? - coeff(&p, n)?;
        a.push(diff / (int(n as i64) * rat_pow(&sigma, n as i64)));
    }
    report(a, &s, order)
}

/// `−Σ coefficient · value` over `(coefficient, Behrend value)` pairs.
pub fn weighted_euler(points: &[(Rational, i64)]) -> Rational {
    -points
        .iter()
        .fold(Rational::zero(), |acc, (c, v)| acc + c * int(*v))
}
