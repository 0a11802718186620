//! Truncated multivariate power series over exact rationals.
//!
//! A series stores only monomials admitted by its [`Bound`]; every operation
//! keeps that invariant, so a coefficient is either exact or refused.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{format_rational, int, Rational};

/// Exponent vector, ordered graded-lexicographically (total degree first,
/// then lexicographic on the exponents).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn add(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn checked_sub(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(Monomial(out))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Truncation policy.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Bound {
    /// Keep monomials of total degree at most `D`.
    TotalDegree(u32),
    /// Keep monomials whose `i`-th exponent is at most `caps[i]`.
    PerVariable(Vec<u32>),
}

impl Bound {
    pub fn admits(&self, m: &[u32]) -> bool {
        match self {
            Bound::TotalDegree(d) => m.iter().sum::<u32>() <= *d,
            Bound::PerVariable(caps) => m.iter().zip(caps).all(|(e, c)| e <= c),
        }
    }

    fn check_arity(&self, arity: usize) -> Result<()> {
        match self {
            Bound::PerVariable(caps) if caps.len() != arity => Err(Error::SeriesMismatch),
            _ => Ok(()),
        }
    }

    /// All admitted monomials of the given arity, in graded-lex order.
    pub fn monomials(&self, arity: usize) -> Vec<Monomial> {
        let caps: Vec<u32> = match self {
            Bound::TotalDegree(d) => vec![*d; arity],
            Bound::PerVariable(c) => c.clone(),
        };
        let mut out = Vec::new();
        let mut cur = vec![0u32; arity];
        loop {
            if self.admits(&cur) {
                out.push(Monomial(cur.clone()));
            }
            let mut i = arity;
            loop {
                if i == 0 {
                    out.sort();
                    return out;
                }
                i -= 1;
                if cur[i] < caps[i] {
                    cur[i] += 1;
                    break;
                }
                cur[i] = 0;
            }
        }
    }
}

/// A truncated multivariate series with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    arity: usize,
    bound: Bound,
    terms: BTreeMap<Monomial, Rational>,
}

impl TruncatedSeries {
    pub fn zero(arity: usize, bound: Bound) -> Result<Self> {
        if arity == 0 {
            return Err(Error::Domain("series arity must be positive".into()));
        }
        bound.check_arity(arity)?;
        Ok(Self {
            arity,
            bound,
            terms: BTreeMap::new(),
        })
    }

    pub fn one(arity: usize, bound: Bound) -> Result<Self> {
        let mut s = Self::zero(arity, bound)?;
        s.terms.insert(Monomial::one(arity), Rational::one());
        Ok(s)
    }

    /// Build from terms; terms outside the bound are truncated away and
    /// repeated monomials are summed.
    pub fn from_terms(
        arity: usize,
        bound: Bound,
        terms: impl IntoIterator<Item = (Vec<u32>, Rational)>,
    ) -> Result<Self> {
        let mut s = Self::zero(arity, bound)?;
        for (e, c) in terms {
            if e.len() != arity {
                return Err(Error::SeriesMismatch);
            }
            if s.bound.admits(&e) {
                s.add_term(Monomial(e), c);
            }
        }
        Ok(s)
    }

    /// `1 + c * x^e` truncated to the bound.
    pub fn binomial_base(arity: usize, bound: Bound, e: Vec<u32>, c: Rational) -> Result<Self> {
        Self::from_terms(arity, bound, [(vec![0; arity], Rational::one()), (e, c)])
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn bound(&self) -> &Bound {
        &self.bound
    }

    /// Nonzero terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one(self.arity))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Exact coefficient of `m`; refuses monomials the bound does not cover.
    pub fn coefficient(&self, m: &[u32]) -> Result<Rational> {
        if m.len() != self.arity {
            return Err(Error::SeriesMismatch);
        }
        if !self.bound.admits(m) {
            return Err(Error::BeyondBound(m.to_vec()));
        }
        Ok(self
            .terms
            .get(&Monomial(m.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.arity != other.arity || self.bound != other.bound {
            return Err(Error::SeriesMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut out = Self {
            arity: self.arity,
            bound: self.bound.clone(),
            terms: BTreeMap::new(),
        };
        if !k.is_zero() {
            out.terms = self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect();
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.add(mb);
                if !self.bound.admits(&m.0) {
                    continue;
                }
                let prod = ca * cb;
                acc.entry(m)
                    .and_modify(|v| *v += &prod)
                    .or_insert(prod);
            }
        }
        let mut out = Self::zero(self.arity, self.bound.clone())?;
        out.terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(out)
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::ConstantTerm {
                op: "inverse",
                expected: "nonzero",
            });
        }
        let inv0 = c0.recip();
        let mut out: BTreeMap<Monomial, Rational> = BTreeMap::new();
        let nonconst: Vec<_> = self.terms.iter().filter(|(m, _)| !m.is_one()).collect();
        for m in self.bound.monomials(self.arity) {
            let v = if m.is_one() {
                inv0.clone()
            } else {
                let mut s = Rational::zero();
                for (ma, ca) in &nonconst {
                    if let Some(rest) = m.checked_sub(ma) {
                        if let Some(b) = out.get(&rest) {
                            s += *ca * b;
                        }
                    }
                }
                -s * &inv0
            };
            if !v.is_zero() {
                out.insert(m, v);
            }
        }
        Ok(Self {
            arity: self.arity,
            bound: self.bound.clone(),
            terms: out,
        })
    }

    /// Integer power by repeated squaring; negative powers go through the inverse.
    pub fn pow_int(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Self::one(self.arity, self.bound.clone())?;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// `self^e` for a rational exponent via `exp(e * log(self))`.
    pub fn pow_rational(&self, e: &Rational) -> Result<Self> {
        if e.is_integer() {
            let k: i64 = i64::try_from(e.to_integer()).map_err(|_| {
                Error::Domain("integer exponent does not fit in 64 bits".into())
            })?;
            return self.pow_int(k);
        }
        self.log()?.scale(e).exp()
    }

    /// Truncated exponential; needs zero constant term.
    ///
    /// Uses `D exp(a) = exp(a) D a` with `D` the total-degree (Euler) operator.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::ConstantTerm {
                op: "exp",
                expected: "0",
            });
        }
        let mut out: BTreeMap<Monomial, Rational> = BTreeMap::new();
        let weighted: Vec<(&Monomial, Rational)> = self
            .terms
            .iter()
            .map(|(m, c)| (m, c * int(m.degree() as i64)))
            .collect();
        for m in self.bound.monomials(self.arity) {
            let v = if m.is_one() {
                Rational::one()
            } else {
                let mut s = Rational::zero();
                for (ma, wa) in &weighted {
                    if let Some(rest) = m.checked_sub(ma) {
                        if let Some(f) = out.get(&rest) {
                            s += wa * f;
                        }
                    }
                }
                s / int(m.degree() as i64)
            };
            if !v.is_zero() {
                out.insert(m, v);
            }
        }
        Ok(Self {
            arity: self.arity,
            bound: self.bound.clone(),
            terms: out,
        })
    }

    /// Truncated logarithm; needs constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.constant_term().is_one() {
            return Err(Error::ConstantTerm {
                op: "log",
                expected: "1",
            });
        }
        let mut out: BTreeMap<Monomial, Rational> = BTreeMap::new();
        let nonconst: Vec<_> = self.terms.iter().filter(|(m, _)| !m.is_one()).collect();
        for m in self.bound.monomials(self.arity) {
            if m.is_one() {
                continue;
            }
            let deg = int(m.degree() as i64);
            let mut s = self.terms.get(&m).cloned().unwrap_or_else(Rational::zero) * &deg;
            for (ma, ca) in &nonconst {
                if let Some(rest) = m.checked_sub(ma) {
                    if rest.is_one() {
                        continue;
                    }
                    if let Some(g) = out.get(&rest) {
                        s -= g * int(rest.degree() as i64) * *ca;
                    }
                }
            }
            let v = s / deg;
            if !v.is_zero() {
                out.insert(m, v);
            }
        }
        Ok(Self {
            arity: self.arity,
            bound: self.bound.clone(),
            terms: out,
        })
    }

    /// Substitute variable `i` by the monomial `images[i]` in a ring of
    /// arity `arity` truncated by `bound`.
    pub fn substitute(&self, images: &[Monomial], arity: usize, bound: Bound) -> Result<Self> {
        if images.len() != self.arity || images.iter().any(|m| m.arity() != arity) {
            return Err(Error::SeriesMismatch);
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0u32; arity];
            for (i, &k) in m.0.iter().enumerate() {
                for (slot, x) in e.iter_mut().zip(&images[i].0) {
                    *slot += k * x;
                }
            }
            (e, c.clone())
        });
        Self::from_terms(arity, bound, terms)
    }
}

/// Expand `∏ base_i^{e_i}`. Integer exponents use repeated squaring,
/// others `exp(e * log(base))`. `arity` and `bound` describe the empty product.
pub fn product_expand(
    arity: usize,
    bound: Bound,
    factors: &[(TruncatedSeries, Rational)],
) -> Result<TruncatedSeries> {
    let mut acc = TruncatedSeries::one(arity, bound)?;
    for (base, e) in factors {
        if !base.constant_term().is_one() {
            return Err(Error::ConstantTerm {
                op: "product_expand",
                expected: "1",
            });
        }
        if base.terms.len() == 1 || e.is_zero() {
            acc.check_compatible(base)?;
            continue;
        }
        acc = acc.mul(&base.pow_rational(e)?)?;
    }
    Ok(acc)
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BoundRepr {
    Total(u32),
    Caps(Vec<u32>),
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<u32>,
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    arity: usize,
    bound: BoundRepr,
    terms: Vec<TermRepr>,
}

impl Serialize for TruncatedSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = SeriesRepr {
            arity: self.arity,
            bound: match &self.bound {
                Bound::TotalDegree(d) => BoundRepr::Total(*d),
                Bound::PerVariable(c) => BoundRepr::Caps(c.clone()),
            },
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermRepr {
                    exp: m.0.clone(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = SeriesRepr::deserialize(d)?;
        let bound = match repr.bound {
            BoundRepr::Total(d) => Bound::TotalDegree(d),
            BoundRepr::Caps(c) => Bound::PerVariable(c),
        };
        let mut terms = Vec::with_capacity(repr.terms.len());
        for t in repr.terms {
            if !bound.admits(&t.exp) {
                return Err(D::Error::custom(format!("term {:?} beyond bound", t.exp)));
            }
            let num: BigInt = t.num.parse().map_err(D::Error::custom)?;
            let den: BigInt = t.den.parse().map_err(D::Error::custom)?;
            if den.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            terms.push((t.exp, Rational::new(num, den)));
        }
        TruncatedSeries::from_terms(repr.arity, bound, terms).map_err(D::Error::custom)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", format_rational(c))?;
            for (i, e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*q{i}")?,
                    _ => write!(f, "*q{i}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

/// Parse a coefficient list `c0,c1,...` into a univariate series.
pub fn univariate(coeffs: &[Rational], bound: u32) -> Result<TruncatedSeries> {
    TruncatedSeries::from_terms(
        1,
        Bound::TotalDegree(bound),
        coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (vec![i as u32], c.clone())),
    )
}

/// Coefficients `[t^0], ..., [t^bound]` of a univariate series.
pub fn univariate_coeffs(s: &TruncatedSeries) -> Result<Vec<Rational>> {
    let d = match s.bound() {
        Bound::TotalDegree(d) => *d,
        Bound::PerVariable(c) => c[0],
    };
    (0..=d).map(|i| s.coefficient(&[i])).collect()
}
