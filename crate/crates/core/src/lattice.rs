//! Classes, quivers, Euler forms, positive cones and weak stability conditions.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{format_rational, int, parse_rational, Rational};

/// An integer vector in a finite-rank lattice, ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct KClass(pub Vec<i64>);

impl KClass {
    pub fn zero(rank: usize) -> Self {
        KClass(vec![0; rank])
    }

    /// Standard basis vector `e_i`.
    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        KClass(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &KClass) -> KClass {
        KClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &KClass) -> KClass {
        KClass(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> KClass {
        KClass(self.0.iter().map(|a| a * k).collect())
    }

    /// `self / m` when `m` divides every coordinate.
    pub fn div_exact(&self, m: i64) -> Option<KClass> {
        if m == 0 || self.0.iter().any(|a| a % m != 0) {
            return None;
        }
        Some(KClass(self.0.iter().map(|a| a / m).collect()))
    }

    /// Componentwise `self <= other`.
    pub fn le_componentwise(&self, other: &KClass) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn dot(&self, other: &[i64]) -> i64 {
        self.0.iter().zip(other).map(|(a, b)| a * b).sum()
    }

    /// Sum of a nonempty slice of classes.
    pub fn sum(parts: &[KClass]) -> KClass {
        let mut acc = KClass::zero(parts.first().map_or(0, |p| p.rank()));
        for p in parts {
            acc = acc.add(p);
        }
        acc
    }

    fn check_rank(&self, rank: usize) -> Result<()> {
        if self.rank() != rank {
            return Err(Error::RankMismatch {
                expected: rank,
                got: self.rank(),
            });
        }
        Ok(())
    }
}

impl Ord for KClass {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for KClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for KClass {
    type Err = Error;

    /// Accepts `(1,2)`, `[1,2]` or `1,2`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .trim_start_matches(['(', '['])
            .trim_end_matches([')', ']']);
        let coords = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("invalid class `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(KClass(coords))
    }
}

/// Parse `"(0,1);(1,0)"` into a list of classes.
pub fn parse_classes(s: &str) -> Result<Vec<KClass>> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(KClass::from_str)
        .collect()
}

/// A finite directed graph; loops and multiple edges allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    edges: Vec<(usize, usize)>,
}

impl Quiver {
    pub fn new(vertices: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = vertices.len();
        if n == 0 {
            return Err(Error::Domain("a quiver needs a vertex".into()));
        }
        if let Some(e) = edges.iter().find(|(t, h)| *t >= n || *h >= n) {
            return Err(Error::Domain(format!("edge {e:?} has an invalid endpoint")));
        }
        Ok(Self { vertices, edges })
    }

    /// Vertices named `v0, v1, ...`.
    pub fn with_vertex_count(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::new((0..n).map(|i| format!("v{i}")).collect(), edges)
    }

    /// One vertex with `m` loops.
    pub fn loops(m: usize) -> Self {
        Self {
            vertices: vec!["v0".into()],
            edges: vec![(0, 0); m],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn chi_hat_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.vertex_count();
        let mut m = vec![vec![0; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        for &(t, h) in &self.edges {
            m[t][h] -= 1;
        }
        m
    }

    /// Same number of edges in both directions between every pair of vertices.
    pub fn is_balanced(&self) -> bool {
        let n = self.vertex_count();
        let mut c = vec![vec![0i64; n]; n];
        for &(t, h) in &self.edges {
            c[t][h] += 1;
        }
        (0..n).all(|i| (0..n).all(|j| c[i][j] == c[j][i]))
    }
}

/// `χ̂(d,e) = Σ_v d(v)e(v) − Σ_edges d(t)e(h)`.
pub fn euler_hat(q: &Quiver, d: &KClass, e: &KClass) -> Result<i64> {
    d.check_rank(q.vertex_count())?;
    e.check_rank(q.vertex_count())?;
    let diag: i64 = d.0.iter().zip(&e.0).map(|(a, b)| a * b).sum();
    let off: i64 = q.edges.iter().map(|&(t, h)| d.0[t] * e.0[h]).sum();
    Ok(diag - off)
}

/// `χ̄(d,e) = Σ_edges (d(h)e(t) − d(t)e(h))`.
pub fn euler_bar(q: &Quiver, d: &KClass, e: &KClass) -> Result<i64> {
    d.check_rank(q.vertex_count())?;
    e.check_rank(q.vertex_count())?;
    Ok(q.edges
        .iter()
        .map(|&(t, h)| d.0[h] * e.0[t] - d.0[t] * e.0[h])
        .sum())
}

#[derive(Serialize, Deserialize)]
struct QuiverRepr {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
}

impl Serialize for Quiver {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QuiverRepr {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|&(t, h)| (self.vertices[t].clone(), self.vertices[h].clone()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Quiver {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = QuiverRepr::deserialize(d)?;
        let index = |name: &str| {
            repr.vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| D::Error::custom(format!("unknown vertex `{name}`")))
        };
        let mut edges = Vec::with_capacity(repr.edges.len());
        for (t, h) in &repr.edges {
            edges.push((index(t)?, index(h)?));
        }
        Quiver::new(repr.vertices.clone(), edges).map_err(D::Error::custom)
    }
}

/// Euler forms on a lattice of rank `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerData {
    rank: usize,
    chi_hat: Option<Vec<Vec<i64>>>,
    chi_bar: Vec<Vec<i64>>,
}

fn square(m: &[Vec<i64>], r: usize) -> Result<()> {
    if m.len() != r || m.iter().any(|row| row.len() != r) {
        return Err(Error::RankMismatch {
            expected: r,
            got: m.len(),
        });
    }
    Ok(())
}

impl EulerData {
    pub fn from_chi_bar(chi_bar: Vec<Vec<i64>>) -> Result<Self> {
        let r = chi_bar.len();
        square(&chi_bar, r)?;
        for i in 0..r {
            for j in 0..r {
                if chi_bar[i][j] != -chi_bar[j][i] {
                    return Err(Error::NotAntisymmetric);
                }
            }
        }
        Ok(Self {
            rank: r,
            chi_hat: None,
            chi_bar,
        })
    }

    pub fn from_chi_hat(chi_hat: Vec<Vec<i64>>) -> Result<Self> {
        let r = chi_hat.len();
        square(&chi_hat, r)?;
        let chi_bar = (0..r)
            .map(|i| (0..r).map(|j| chi_hat[i][j] - chi_hat[j][i]).collect())
            .collect();
        Ok(Self {
            rank: r,
            chi_hat: Some(chi_hat),
            chi_bar,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn chi_hat_matrix(&self) -> Option<&Vec<Vec<i64>>> {
        self.chi_hat.as_ref()
    }

    pub fn chi_bar_matrix(&self) -> &Vec<Vec<i64>> {
        &self.chi_bar
    }

    fn bilinear(m: &[Vec<i64>], a: &KClass, b: &KClass) -> i64 {
        let mut s = 0;
        for (i, x) in a.0.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                s += x * m[i][j] * y;
            }
        }
        s
    }
}

/// Positive cone of a context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cone {
    /// Nonzero vectors with non-negative coordinates.
    Orthant,
    /// Classes `(β, d)` with `d` the last coordinate: `β` in the orthant cone
    /// and `d ≥ 0`, or `β = 0` and `d > 0`.
    Framed,
}

impl Cone {
    pub fn contains(&self, c: &KClass) -> bool {
        match self {
            Cone::Orthant => c.0.iter().all(|&x| x >= 0) && !c.is_zero(),
            Cone::Framed => {
                let (beta, d) = c.0.split_at(c.0.len() - 1);
                let d = d[0];
                let beta_zero = beta.iter().all(|&x| x == 0);
                beta.iter().all(|&x| x >= 0) && ((!beta_zero && d >= 0) || (beta_zero && d > 0))
            }
        }
    }
}

/// Polynomial with rational coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly(pub Vec<Rational>);

impl Poly {
    pub fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.iter().rposition(|c| !c.is_zero())
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    fn axpy(&mut self, k: i64, other: &Poly) {
        if self.0.len() < other.0.len() {
            self.0.resize(other.0.len(), Rational::zero());
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b * int(k);
        }
    }
}

/// Hilbert data: one polynomial per basis vector, extended linearly, and the
/// twist `n` at which the framing functional evaluates them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hilbert {
    pub twist: i64,
    pub basis: Vec<Poly>,
}

impl Hilbert {
    pub fn polynomial(&self, c: &KClass) -> Poly {
        let mut p = Poly(vec![]);
        for (k, b) in c.0.iter().zip(&self.basis) {
            p.axpy(*k, b);
        }
        p.trimmed()
    }
}

/// Reduced Hilbert polynomial, compared by the Gieseker order: higher degree
/// is smaller, equal degrees compare coefficients from the top down.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GiesekerValue {
    pub degree: usize,
    /// Coefficients below the (unit) leading one, highest degree first.
    pub lower: Vec<Rational>,
}

impl Ord for GiesekerValue {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree
            .cmp(&self.degree)
            .then_with(|| self.lower.cmp(&other.lower))
    }
}

impl PartialOrd for GiesekerValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A value of a weak stability condition. Only values of the same
/// stability are ever compared.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StabValue {
    Rat(Rational),
    Poly(GiesekerValue),
    Level(i64),
}

impl fmt::Display for StabValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StabValue::Rat(r) => write!(f, "{}", format_rational(r)),
            StabValue::Level(l) => write!(f, "{l}"),
            StabValue::Poly(g) => {
                write!(f, "t^{}", g.degree)?;
                for (i, c) in g.lower.iter().enumerate() {
                    write!(f, " + ({})t^{}", format_rational(c), g.degree - 1 - i)?;
                }
                Ok(())
            }
        }
    }
}

/// Assignment of totally ordered values to cone classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeakStability {
    /// `μ(d) = c·d / r·d`.
    Slope { c: Vec<Rational>, r: Vec<Rational> },
    /// `μ ≡ 0`.
    Trivial,
    /// Reduced Hilbert polynomial `P_α / r_α`, with `P` linear in the class.
    Gieseker { basis: Vec<Poly> },
    /// Value depends only on whether the last (framing) coordinate vanishes.
    TwoLevel { zero: i64, positive: i64 },
}

impl WeakStability {
    pub fn slope_from_ints(c: &[i64], r: &[i64]) -> Self {
        WeakStability::Slope {
            c: c.iter().map(|&x| int(x)).collect(),
            r: r.iter().map(|&x| int(x)).collect(),
        }
    }

    /// `τ̇`: 0 on `(β,0)`, −1 on `(β,d>0)`.
    pub fn tau_dot() -> Self {
        WeakStability::TwoLevel {
            zero: 0,
            positive: -1,
        }
    }

    /// `τ̃`: 0 on `(β,0)`, 1 on `(β,d>0)`.
    pub fn tau_tilde() -> Self {
        WeakStability::TwoLevel {
            zero: 0,
            positive: 1,
        }
    }

    /// `τ̂ ≡ 0`.
    pub fn tau_hat() -> Self {
        WeakStability::TwoLevel {
            zero: 0,
            positive: 0,
        }
    }

    pub fn value(&self, c: &KClass) -> Result<StabValue> {
        match self {
            WeakStability::Trivial => Ok(StabValue::Rat(Rational::zero())),
            WeakStability::Slope { c: cw, r } => {
                if cw.len() != c.rank() || r.len() != c.rank() {
                    return Err(Error::RankMismatch {
                        expected: cw.len(),
                        got: c.rank(),
                    });
                }
                let num: Rational = c.0.iter().zip(cw).map(|(x, w)| w * int(*x)).sum();
                let den: Rational = c.0.iter().zip(r).map(|(x, w)| w * int(*x)).sum();
                if !den.is_positive() {
                    return Err(Error::Stability(format!("r·d ≤ 0 for {c}")));
                }
                Ok(StabValue::Rat(num / den))
            }
            WeakStability::Gieseker { basis } => {
                if basis.len() != c.rank() {
                    return Err(Error::RankMismatch {
                        expected: basis.len(),
                        got: c.rank(),
                    });
                }
                let p = Hilbert {
                    twist: 0,
                    basis: basis.clone(),
                }
                .polynomial(c);
                let Some(deg) = p.degree() else {
                    return Err(Error::Stability(format!("zero Hilbert polynomial for {c}")));
                };
                let lead = p.0[deg].clone();
                if !lead.is_positive() {
                    return Err(Error::Stability(format!("non-positive leading coefficient for {c}")));
                }
                let lower = (0..deg).rev().map(|i| &p.0[i] / &lead).collect();
                Ok(StabValue::Poly(GiesekerValue { degree: deg, lower }))
            }
            WeakStability::TwoLevel { zero, positive } => {
                let d = *c
                    .0
                    .last()
                    .ok_or_else(|| Error::Stability("empty class".into()))?;
                Ok(StabValue::Level(if d == 0 { *zero } else { *positive }))
            }
        }
    }
}

/// Slope of `d` under a slope or trivial stability.
pub fn slope(stab: &WeakStability, d: &KClass) -> Result<Rational> {
    if d.0.iter().any(|&x| x < 0) || d.is_zero() {
        return Err(Error::OutsideCone(d.clone()));
    }
    match stab.value(d)? {
        StabValue::Rat(r) => Ok(r),
        _ => Err(Error::Stability("not a slope stability".into())),
    }
}

/// The arena all formulas live in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericalContext {
    euler: EulerData,
    cone: Cone,
    hilbert: Option<Hilbert>,
    framing: Option<Vec<i64>>,
    stabilities: BTreeMap<String, WeakStability>,
}

impl NumericalContext {
    pub fn new(euler: EulerData) -> Self {
        let mut stabilities = BTreeMap::new();
        stabilities.insert("trivial".to_string(), WeakStability::Trivial);
        Self {
            euler,
            cone: Cone::Orthant,
            hilbert: None,
            framing: None,
            stabilities,
        }
    }

    pub fn from_quiver(q: &Quiver) -> Self {
        Self::new(EulerData::from_chi_hat(q.chi_hat_matrix()).expect("square by construction"))
    }

    pub fn from_chi_bar(chi_bar: Vec<Vec<i64>>) -> Result<Self> {
        Ok(Self::new(EulerData::from_chi_bar(chi_bar)?))
    }

    pub fn with_framing(mut self, framing: Vec<i64>) -> Result<Self> {
        if framing.len() != self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                got: framing.len(),
            });
        }
        self.framing = Some(framing);
        self.check_hilbert_framing()?;
        Ok(self)
    }

    pub fn with_hilbert(mut self, hilbert: Hilbert) -> Result<Self> {
        if hilbert.basis.len() != self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                got: hilbert.basis.len(),
            });
        }
        self.stabilities.insert(
            "gieseker".into(),
            WeakStability::Gieseker {
                basis: hilbert.basis.clone(),
            },
        );
        self.hilbert = Some(hilbert);
        self.check_hilbert_framing()?;
        Ok(self)
    }

    pub fn with_cone(mut self, cone: Cone) -> Self {
        self.cone = cone;
        self
    }

    pub fn with_stability(mut self, name: &str, stab: WeakStability) -> Self {
        self.stabilities.insert(name.to_string(), stab);
        self
    }

    fn check_hilbert_framing(&self) -> Result<()> {
        if let (Some(h), Some(f)) = (&self.hilbert, &self.framing) {
            let n = int(h.twist);
            for (i, (p, fi)) in h.basis.iter().zip(f).enumerate() {
                if p.eval(&n) != int(*fi) {
                    return Err(Error::Domain(format!(
                        "framing {fi} disagrees with the Hilbert polynomial of basis class {i} at the twist"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.euler.rank
    }

    pub fn euler(&self) -> &EulerData {
        &self.euler
    }

    pub fn cone(&self) -> Cone {
        self.cone
    }

    pub fn hilbert(&self) -> Option<&Hilbert> {
        self.hilbert.as_ref()
    }

    pub fn framing(&self) -> Option<&[i64]> {
        self.framing.as_deref()
    }

    pub fn stabilities(&self) -> &BTreeMap<String, WeakStability> {
        &self.stabilities
    }

    pub fn stability(&self, name: &str) -> Result<&WeakStability> {
        self.stabilities
            .get(name)
            .ok_or_else(|| Error::UnknownStability(name.to_string()))
    }

    pub fn check_class(&self, c: &KClass) -> Result<()> {
        c.check_rank(self.rank())
    }

    pub fn in_cone(&self, c: &KClass) -> bool {
        c.rank() == self.rank() && self.cone.contains(c)
    }

    pub fn require_cone(&self, c: &KClass) -> Result<()> {
        self.check_class(c)?;
        if !self.cone.contains(c) {
            return Err(Error::OutsideCone(c.clone()));
        }
        Ok(())
    }

    pub fn chi_bar(&self, a: &KClass, b: &KClass) -> i64 {
        EulerData::bilinear(&self.euler.chi_bar, a, b)
    }

    pub fn chi_hat(&self, a: &KClass, b: &KClass) -> Option<i64> {
        self.euler
            .chi_hat
            .as_ref()
            .map(|m| EulerData::bilinear(m, a, b))
    }

    /// Framing functional `F(α)`.
    pub fn framing_of(&self, c: &KClass) -> Result<i64> {
        let f = self.framing.as_ref().ok_or(Error::MissingFraming)?;
        self.check_class(c)?;
        Ok(c.dot(f))
    }

    /// Cone classes with every coordinate in `0..=max_total` and coordinate
    /// sum at most `max_total`, in graded-lex order. Framed cones allow a
    /// framing coordinate of at most 1.
    pub fn cone_classes(&self, max_total: i64) -> Vec<KClass> {
        let r = self.rank();
        let mut out = Vec::new();
        let mut cur = vec![0i64; r];
        loop {
            let c = KClass(cur.clone());
            let framed_ok = self.cone != Cone::Framed || cur[r - 1] <= 1;
            if c.total() <= max_total && framed_ok && self.cone.contains(&c) {
                out.push(c);
            }
            let mut i = r;
            loop {
                if i == 0 {
                    out.sort();
                    return out;
                }
                i -= 1;
                if cur[i] < max_total {
                    cur[i] += 1;
                    break;
                }
                cur[i] = 0;
            }
        }
    }
}

/// Outcome of [`is_generic`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericityReport {
    pub generic: bool,
    pub witness: Option<(KClass, KClass)>,
    pub pairs_checked: usize,
}

/// Search for classes of equal stability value with `χ̄ ≠ 0`.
pub fn is_generic(ctx: &NumericalContext, stab: &WeakStability, max_total: i64) -> Result<GenericityReport> {
    let classes = ctx.cone_classes(max_total);
    let values = classes
        .iter()
        .map(|c| stab.value(c))
        .collect::<Result<Vec<_>>>()?;
    let mut checked = 0;
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            if values[i] != values[j] {
                continue;
            }
            checked += 1;
            if ctx.chi_bar(&classes[i], &classes[j]) != 0 {
                return Ok(GenericityReport {
                    generic: false,
                    witness: Some((classes[i].clone(), classes[j].clone())),
                    pairs_checked: checked,
                });
            }
        }
    }
    Ok(GenericityReport {
        generic: true,
        witness: None,
        pairs_checked: checked,
    })
}

/// Outcome of [`validate_weak_stability`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeesawReport {
    pub triples_checked: usize,
    /// First `(α, β, γ)` with `β = α + γ` breaking the seesaw condition.
    pub violation: Option<(KClass, KClass, KClass)>,
}

impl SeesawReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Check that for `β = α + γ` in the cone either `τ(α) ≤ τ(β) ≤ τ(γ)` or
/// `τ(α) ≥ τ(β) ≥ τ(γ)`, over all cone classes of total at most `max_total`.
pub fn validate_weak_stability(
    ctx: &NumericalContext,
    stab: &WeakStability,
    max_total: i64,
) -> Result<SeesawReport> {
    let classes = ctx.cone_classes(max_total);
    let mut values = BTreeMap::new();
    for c in &classes {
        values.insert(c.clone(), stab.value(c)?);
    }
    let mut checked = 0;
    for a in &classes {
        for g in &classes {
            let b = a.add(g);
            let Some(vb) = values.get(&b) else { continue };
            checked += 1;
            let (va, vg) = (&values[a], &values[g]);
            let up = va <= vb && vb <= vg;
            let down = va >= vb && vb >= vg;
            if !(up || down) {
                return Ok(SeesawReport {
                    triples_checked: checked,
                    violation: Some((a.clone(), b, g.clone())),
                });
            }
        }
    }
    Ok(SeesawReport {
        triples_checked: checked,
        violation: None,
    })
}

/// Pass to classes `(β, d)` with `χ̄((β,d),(γ,e)) = χ̄(β,γ) − d F(γ) + e F(β)`.
/// Registers `taudot`, `tautilde` and `tauhat`.
pub fn extend_by_framing(ctx: &NumericalContext) -> Result<NumericalContext> {
    let f = ctx.framing.as_ref().ok_or(Error::MissingFraming)?;
    let r = ctx.rank();
    let mut m = vec![vec![0i64; r + 1]; r + 1];
    for i in 0..r {
        for j in 0..r {
            m[i][j] = ctx.euler.chi_bar[i][j];
        }
        m[i][r] = f[i];
        m[r][i] = -f[i];
    }
    let ext = NumericalContext::from_chi_bar(m)?
        .with_cone(Cone::Framed)
        .with_stability("taudot", WeakStability::tau_dot())
        .with_stability("tautilde", WeakStability::tau_tilde())
        .with_stability("tauhat", WeakStability::tau_hat());
    Ok(ext)
}

/// Serialized form of a weak stability.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StabilitySpec {
    Slope { c: Vec<String>, r: Vec<String> },
    Trivial,
    Gieseker {
        #[serde(default)]
        basis: Option<Vec<Vec<String>>>,
    },
    TwoLevel { zero: i64, positive: i64 },
}

fn parse_vec(xs: &[String]) -> Result<Vec<Rational>> {
    xs.iter().map(|s| parse_rational(s)).collect()
}

fn render_vec(xs: &[Rational]) -> Vec<String> {
    xs.iter().map(format_rational).collect()
}

impl StabilitySpec {
    pub fn build(&self, hilbert: Option<&Hilbert>) -> Result<WeakStability> {
        Ok(match self {
            StabilitySpec::Slope { c, r } => WeakStability::Slope {
                c: parse_vec(c)?,
                r: parse_vec(r)?,
            },
            StabilitySpec::Trivial => WeakStability::Trivial,
            StabilitySpec::Gieseker { basis } => {
                let basis = match basis {
                    Some(b) => b
                        .iter()
                        .map(|p| parse_vec(p).map(Poly))
                        .collect::<Result<Vec<_>>>()?,
                    None => hilbert
                        .ok_or_else(|| Error::Parse("gieseker stability needs hilbert data".into()))?
                        .basis
                        .clone(),
                };
                WeakStability::Gieseker { basis }
            }
            StabilitySpec::TwoLevel { zero, positive } => WeakStability::TwoLevel {
                zero: *zero,
                positive: *positive,
            },
        })
    }

    pub fn from_stability(s: &WeakStability) -> Self {
        match s {
            WeakStability::Slope { c, r } => StabilitySpec::Slope {
                c: render_vec(c),
                r: render_vec(r),
            },
            WeakStability::Trivial => StabilitySpec::Trivial,
            WeakStability::Gieseker { basis } => StabilitySpec::Gieseker {
                basis: Some(basis.iter().map(|p| render_vec(&p.0)).collect()),
            },
            WeakStability::TwoLevel { zero, positive } => StabilitySpec::TwoLevel {
                zero: *zero,
                positive: *positive,
            },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HilbertSpec {
    pub twist: i64,
    pub basis: Vec<Vec<String>>,
}

/// Serialized form of a context.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ContextSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quiver: Option<Quiver>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi_hat: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi_bar: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hilbert: Option<HilbertSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub framing: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone: Option<Cone>,
    /// Apply [`extend_by_framing`] after loading.
    #[serde(default)]
    pub extend_by_framing: bool,
    #[serde(default)]
    pub stabilities: BTreeMap<String, StabilitySpec>,
}

impl ContextSpec {
    pub fn build(&self) -> Result<NumericalContext> {
        let euler = if let Some(q) = &self.quiver {
            EulerData::from_chi_hat(q.chi_hat_matrix())?
        } else if let Some(h) = &self.chi_hat {
            EulerData::from_chi_hat(h.clone())?
        } else if let Some(b) = &self.chi_bar {
            EulerData::from_chi_bar(b.clone())?
        } else if let Some(r) = self.rank {
            EulerData::from_chi_bar(vec![vec![0; r]; r])?
        } else {
            return Err(Error::Parse("context needs a quiver, chi_hat, chi_bar or rank".into()));
        };
        if let Some(r) = self.rank {
            if r != euler.rank {
                return Err(Error::RankMismatch {
                    expected: r,
                    got: euler.rank,
                });
            }
        }
        let mut ctx = NumericalContext::new(euler);
        if let Some(c) = self.cone {
            ctx = ctx.with_cone(c);
        }
        if let Some(h) = &self.hilbert {
            let basis = h
                .basis
                .iter()
                .map(|p| parse_vec(p).map(Poly))
                .collect::<Result<Vec<_>>>()?;
            ctx = ctx.with_hilbert(Hilbert {
                twist: h.twist,
                basis,
            })?;
        }
        if let Some(f) = &self.framing {
            ctx = ctx.with_framing(f.clone())?;
        }
        let hilbert = ctx.hilbert.clone();
        if self.extend_by_framing {
            ctx = extend_by_framing(&ctx)?;
        }
        for (name, spec) in &self.stabilities {
            ctx = ctx.with_stability(name, spec.build(hilbert.as_ref())?);
        }
        Ok(ctx)
    }
}
