//! Brute-force point counts of framed quiver moduli over small finite fields.
//!
//! For each field the edge-map tuples are enumerated. Per tuple the lattice
//! of subrepresentations is found by testing every tuple of per-vertex
//! subspaces for invariance. The number of framings whose generated
//! subrepresentation is exactly `W` then follows by subtraction:
//! `g(W) = q^{e·dim W} − Σ_{W' ⊊ W} g(W')`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{euler_hat, KClass, Quiver, StabValue, WeakStability};
use crate::numerics::{big, format_rational, int, sign, Rational};

/// Default cap on edge-map tuples per field.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Default field orders sampled for interpolation.
pub const DEFAULT_FIELDS: [u64; 7] = [2, 3, 4, 5, 7, 8, 9];

/// `GF(p^k)` with elements `0..q` encoding polynomials in base `p`.
#[derive(Debug, Clone)]
pub struct FiniteField {
    p: u64,
    k: u32,
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Monic irreducible of degree `k` over `F_p`, low-degree coefficients first
/// (leading 1 omitted).
fn irreducible(p: u64, k: u32) -> Option<Vec<u64>> {
    match (p, k) {
        (_, 1) => Some(vec![0]),
        (2, 2) => Some(vec![1, 1]),
        (2, 3) => Some(vec![1, 1, 0]),
        (2, 4) => Some(vec![1, 1, 0, 0]),
        (3, 2) => Some(vec![1, 0]),
        (3, 3) => Some(vec![1, 2, 0]),
        (5, 2) => Some(vec![2, 1]),
        _ => None,
    }
}

impl FiniteField {
    pub fn new(q: u64) -> Result<Self> {
        if q > 255 {
            return Err(Error::UnsupportedField(q));
        }
        let (p, k) = (2..=q)
            .find(|&p| is_prime(p) && q % p == 0)
            .map(|p| {
                let mut k = 0;
                let mut r = q;
                while r % p == 0 {
                    r /= p;
                    k += 1;
                }
                (p, if r == 1 { k } else { 0 })
            })
            .ok_or(Error::UnsupportedField(q))?;
        if k == 0 {
            return Err(Error::UnsupportedField(q));
        }
        let modulus = irreducible(p, k).ok_or(Error::UnsupportedField(q))?;
        let qs = q as usize;
        let digits = |x: usize| -> Vec<u64> {
            let mut v = Vec::with_capacity(k as usize);
            let mut x = x as u64;
            for _ in 0..k {
                v.push(x % p);
                x /= p;
            }
            v
        };
        let encode = |v: &[u64]| -> usize { v.iter().rev().fold(0u64, |acc, &c| acc * p + c) as usize };
        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        for a in 0..qs {
            let da = digits(a);
            for b in 0..qs {
                let db = digits(b);
                let s: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * qs + b] = encode(&s) as u8;
                // Schoolbook product, then reduce by the modulus from the top.
                let mut prod = vec![0u64; 2 * k as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for top in (k as usize..prod.len()).rev() {
                    let c = prod[top];
                    if c == 0 {
                        continue;
                    }
                    prod[top] = 0;
                    for (i, m) in modulus.iter().enumerate() {
                        let idx = top - k as usize + i;
                        prod[idx] = (prod[idx] + p * p - c * m % p) % p;
                    }
                }
                mul[a * qs + b] = encode(&prod[..k as usize]) as u8;
            }
        }
        let neg = (0..qs)
            .map(|a| (0..qs).find(|&b| add[a * qs + b] == 0).unwrap() as u8)
            .collect();
        let f = Self {
            p,
            k,
            q: qs,
            add,
            mul,
            neg,
        };
        f.check_axioms()?;
        Ok(f)
    }

    fn check_axioms(&self) -> Result<()> {
        let q = self.q;
        let bad = || Error::UnsupportedField(q as u64);
        for a in 1..q {
            if !(1..q).any(|b| self.mul(a as u8, b as u8) == 1) {
                return Err(bad());
            }
        }
        for a in 0..q as u8 {
            for b in 0..q as u8 {
                for c in 0..q as u8 {
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c))
                        || self.mul(a, self.mul(b, c)) != self.mul(self.mul(a, b), c)
                    {
                        return Err(bad());
                    }
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> u64 {
        self.q as u64
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    pub fn inv(&self, a: u8) -> Option<u8> {
        (1..self.q as u8).find(|&b| self.mul(a, b) == 1)
    }
}

/// Vectors of `F_q^n` indexed by `Σ c_i q^i`.
#[derive(Debug, Clone)]
struct VectorSpace {
    size: usize,
    coords: Vec<Vec<u8>>,
}

#[derive(Debug, Clone)]
struct Subspace {
    dim: usize,
    basis: Vec<usize>,
    members: Vec<u64>,
}

impl Subspace {
    fn contains(&self, v: usize) -> bool {
        self.members[v / 64] >> (v % 64) & 1 == 1
    }

    fn is_subset_of(&self, other: &Subspace) -> bool {
        self.members.iter().zip(&other.members).all(|(a, b)| a & !b == 0)
    }
}

impl VectorSpace {
    fn new(f: &FiniteField, n: usize) -> Self {
        let size = f.q.pow(n as u32);
        let coords = (0..size)
            .map(|mut x| {
                (0..n)
                    .map(|_| {
                        let c = (x % f.q) as u8;
                        x /= f.q;
                        c
                    })
                    .collect()
            })
            .collect();
        Self { size, coords }
    }

    fn encode(&self, f: &FiniteField, c: &[u8]) -> usize {
        c.iter().rev().fold(0, |acc, &x| acc * f.q + x as usize)
    }

    fn axpy(&self, f: &FiniteField, a: u8, x: usize, y: usize) -> usize {
        let c: Vec<u8> = self.coords[x]
            .iter()
            .zip(&self.coords[y])
            .map(|(&xi, &yi)| f.add(f.mul(a, xi), yi))
            .collect();
        self.encode(f, &c)
    }

    /// Span of `gens`, with a basis extracted greedily.
    fn span(&self, f: &FiniteField, gens: &[usize]) -> Subspace {
        let words = self.size.div_ceil(64);
        let mut members = vec![0u64; words];
        members[0] |= 1;
        let mut list = vec![0usize];
        let mut basis = Vec::new();
        for &g in gens {
            if members[g / 64] >> (g % 64) & 1 == 1 {
                continue;
            }
            basis.push(g);
            let old = list.clone();
            for a in 1..f.q as u8 {
                for &m in &old {
                    let v = self.axpy(f, a, g, m);
                    members[v / 64] |= 1 << (v % 64);
                    list.push(v);
                }
            }
        }
        Subspace {
            dim: basis.len(),
            basis,
            members,
        }
    }

    fn subspaces(&self, f: &FiniteField) -> Vec<Subspace> {
        let zero = self.span(f, &[]);
        let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
        seen.insert(zero.members.clone(), 0);
        let mut all = vec![zero];
        let mut i = 0;
        while i < all.len() {
            let s = all[i].clone();
            let mut covered = s.members.clone();
            for v in 0..self.size {
                if covered[v / 64] >> (v % 64) & 1 == 1 {
                    continue;
                }
                let mut gens = s.basis.clone();
                gens.push(v);
                let t = self.span(f, &gens);
                for (c, m) in covered.iter_mut().zip(&t.members) {
                    *c |= m;
                }
                if !seen.contains_key(&t.members) {
                    seen.insert(t.members.clone(), all.len());
                    all.push(t);
                }
            }
            i += 1;
        }
        all.sort_by_key(|s| s.dim);
        all
    }
}

/// Stability used by the oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleStability {
    Trivial,
    Slope(WeakStability),
}

impl OracleStability {
    pub fn from_weak(w: &WeakStability) -> Result<Self> {
        match w {
            WeakStability::Trivial => Ok(Self::Trivial),
            WeakStability::Slope { .. } => Ok(Self::Slope(w.clone())),
            _ => Err(Error::Stability("the oracle supports slope or trivial stability".into())),
        }
    }

    fn value(&self, d: &KClass) -> Result<StabValue> {
        match self {
            Self::Trivial => WeakStability::Trivial.value(d),
            Self::Slope(w) => w.value(d),
        }
    }
}

/// A subrepresentation candidate: one subspace per vertex.
#[derive(Debug, Clone)]
struct Candidate {
    pick: Vec<usize>,
    dims: Vec<i64>,
    weight: u128,
    /// Candidates strictly inside this one.
    below: Vec<usize>,
    /// Candidates containing this one that make a framing unstable.
    bad_above: Vec<usize>,
    unstable: bool,
}

/// Precomputed data for counting stable framings over one field.
pub struct FramedCounter {
    field: FiniteField,
    quiver: Quiver,
    d: Vec<usize>,
    e: Vec<usize>,
    spaces: Vec<VectorSpace>,
    subspaces: Vec<Vec<Subspace>>,
    candidates: Vec<Candidate>,
    /// Offset of each edge's matrix in the flattened tuple.
    offsets: Vec<usize>,
    entries: usize,
    /// Distinct basis vectors over all subspaces of each vertex.
    basis_vectors: Vec<Vec<usize>>,
    /// Per vertex and subspace, positions of its basis in `basis_vectors`.
    basis_slots: Vec<Vec<Vec<usize>>>,
    /// Offset of each edge's images in [`Scratch::images`].
    image_offsets: Vec<usize>,
}

/// Per-thread buffers for [`FramedCounter::count_with`].
struct Scratch {
    images: Vec<usize>,
    is_sub: Vec<bool>,
    g: Vec<i128>,
}

fn nonneg(c: &KClass, what: &str) -> Result<Vec<usize>> {
    c.0.iter()
        .map(|&x| usize::try_from(x).map_err(|_| Error::Domain(format!("{what} has a negative entry"))))
        .collect()
}

impl FramedCounter {
    pub fn new(field: FiniteField, quiver: &Quiver, d: &KClass, e: &KClass, stab: &OracleStability) -> Result<Self> {
        let n = quiver.vertex_count();
        for c in [d, e] {
            if c.rank() != n {
                return Err(Error::RankMismatch {
                    expected: n,
                    got: c.rank(),
                });
            }
        }
        let du = nonneg(d, "dimension vector")?;
        let eu = nonneg(e, "framing vector")?;
        let spaces: Vec<VectorSpace> = du.iter().map(|&k| VectorSpace::new(&field, k)).collect();
        let subspaces: Vec<Vec<Subspace>> = spaces.iter().map(|s| s.subspaces(&field)).collect();

        let mut picks: Vec<Vec<usize>> = vec![vec![]];
        for subs in &subspaces {
            picks = picks
                .into_iter()
                .flat_map(|p| {
                    (0..subs.len()).map(move |i| {
                        let mut p = p.clone();
                        p.push(i);
                        p
                    })
                })
                .collect();
        }
        let q = field.q as u128;
        let full_value = if d.is_zero() { None } else { Some(stab.value(d)?) };
        let mut candidates: Vec<Candidate> = Vec::with_capacity(picks.len());
        for pick in picks {
            let dims: Vec<i64> = pick
                .iter()
                .enumerate()
                .map(|(v, &i)| subspaces[v][i].dim as i64)
                .collect();
            let ed: u32 = dims.iter().zip(&eu).map(|(&a, &b)| a as u32 * b as u32).sum();
            let weight = q
                .checked_pow(ed)
                .ok_or(Error::Budget { needed: u128::MAX, budget: u128::MAX })?;
            candidates.push(Candidate {
                pick,
                dims,
                weight,
                below: vec![],
                bad_above: vec![],
                unstable: false,
            });
        }
        candidates.sort_by_key(|c| c.dims.iter().sum::<i64>());
        let contains = |a: &Candidate, b: &Candidate| {
            // a ⊆ b
            a.pick
                .iter()
                .zip(&b.pick)
                .enumerate()
                .all(|(v, (&i, &j))| subspaces[v][i].is_subset_of(&subspaces[v][j]))
        };
        let total = d.0.clone();
        let mut is_bad = vec![false; candidates.len()];
        for (i, c) in candidates.iter_mut().enumerate() {
            let class = KClass(c.dims.clone());
            let proper = c.dims != total;
            if class.is_zero() {
                is_bad[i] = proper;
            } else if let Some(fv) = &full_value {
                let v = stab.value(&class)?;
                c.unstable = v > *fv;
                is_bad[i] = proper && v == *fv;
            }
        }
        for i in 0..candidates.len() {
            let mut below = Vec::new();
            let mut bad_above = Vec::new();
            for j in 0..candidates.len() {
                if i != j && contains(&candidates[j], &candidates[i]) {
                    below.push(j);
                }
                if is_bad[j] && contains(&candidates[i], &candidates[j]) {
                    bad_above.push(j);
                }
            }
            candidates[i].below = below;
            candidates[i].bad_above = bad_above;
        }
        let mut offsets = Vec::with_capacity(quiver.edges().len());
        let mut entries = 0;
        for &(t, h) in quiver.edges() {
            offsets.push(entries);
            entries += du[t] * du[h];
        }
        let mut basis_vectors = Vec::with_capacity(n);
        let mut basis_slots = Vec::with_capacity(n);
        for subs in &subspaces {
            let mut vecs: Vec<usize> = subs.iter().flat_map(|s| s.basis.iter().copied()).collect();
            vecs.sort_unstable();
            vecs.dedup();
            basis_slots.push(
                subs.iter()
                    .map(|s| s.basis.iter().map(|b| vecs.binary_search(b).unwrap()).collect())
                    .collect(),
            );
            basis_vectors.push(vecs);
        }
        let mut image_offsets = vec![0];
        for &(t, _) in quiver.edges() {
            image_offsets.push(image_offsets.last().unwrap() + basis_vectors[t].len());
        }
        Ok(Self {
            field,
            quiver: quiver.clone(),
            d: du,
            e: eu,
            spaces,
            subspaces,
            candidates,
            offsets,
            entries,
            basis_vectors,
            basis_slots,
            image_offsets,
        })
    }

    /// Number of edge-map tuples, `q^{Σ_edges d(t)d(h)}`.
    pub fn tuple_count(&self) -> Option<u128> {
        (self.field.q as u128).checked_pow(self.entries as u32)
    }

    /// Image of vector `x` of vertex `t` under the matrix of edge `k`.
    fn apply(&self, tuple: &[u8], k: usize, x: usize) -> usize {
        let (t, h) = self.quiver.edges()[k];
        let f = &self.field;
        let (rows, cols) = (self.d[h], self.d[t]);
        let a = &tuple[self.offsets[k]..self.offsets[k] + rows * cols];
        let xc = &self.spaces[t].coords[x];
        let mut idx = 0;
        for r in (0..rows).rev() {
            let y = (0..cols).fold(0u8, |acc, c| f.add(acc, f.mul(a[r * cols + c], xc[c])));
            idx = idx * f.q + y as usize;
        }
        idx
    }

    fn scratch(&self) -> Scratch {
        Scratch {
            images: vec![0; self.image_offsets.last().copied().unwrap_or(0)],
            is_sub: vec![false; self.candidates.len()],
            g: vec![0; self.candidates.len()],
        }
    }

    /// Stable framings of one representation, via the subrepresentation lattice.
    pub fn count_for_tuple(&self, tuple: &[u8]) -> u128 {
        self.count_with(&mut self.scratch(), tuple)
    }

    fn count_with(&self, sc: &mut Scratch, tuple: &[u8]) -> u128 {
        let edges = self.quiver.edges();
        for (k, &(t, _)) in edges.iter().enumerate() {
            let off = self.image_offsets[k];
            for (i, &x) in self.basis_vectors[t].iter().enumerate() {
                sc.images[off + i] = self.apply(tuple, k, x);
            }
        }
        for (i, c) in self.candidates.iter().enumerate() {
            sc.is_sub[i] = edges.iter().enumerate().all(|(k, &(t, h))| {
                let target = &self.subspaces[h][c.pick[h]];
                self.basis_slots[t][c.pick[t]]
                    .iter()
                    .all(|&b| target.contains(sc.images[self.image_offsets[k] + b]))
            });
            if sc.is_sub[i] && c.unstable {
                return 0;
            }
        }
        let mut total: i128 = 0;
        for (i, c) in self.candidates.iter().enumerate() {
            if !sc.is_sub[i] {
                continue;
            }
            let below: i128 = c.below.iter().filter(|&&j| sc.is_sub[j]).map(|&j| sc.g[j]).sum();
            sc.g[i] = c.weight as i128 - below;
            if !c.bad_above.iter().any(|&j| sc.is_sub[j]) {
                total += sc.g[i];
            }
        }
        total as u128
    }

    /// Stable framings of one representation under trivial stability, by
    /// scanning every framing and closing its image under the edge maps.
    pub fn scan_for_tuple(&self, tuple: &[u8]) -> u128 {
        let f = &self.field;
        let n = self.d.len();
        // Framing = e(v) vectors in each V_v.
        let slots: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(self.e[v])).collect();
        let mut choice = vec![0usize; slots.len()];
        let mut count = 0u128;
        loop {
            let mut gens: Vec<Vec<usize>> = vec![vec![]; n];
            for (s, &v) in slots.iter().enumerate() {
                gens[v].push(choice[s]);
            }
            let mut spans: Vec<Subspace> = (0..n).map(|v| self.spaces[v].span(f, &gens[v])).collect();
            loop {
                let mut grew = false;
                for (k, &(t, h)) in self.quiver.edges().iter().enumerate() {
                    let imgs: Vec<usize> = spans[t].basis.iter().map(|&b| self.apply(tuple, k, b)).collect();
                    for y in imgs {
                        if !spans[h].contains(y) {
                            gens[h].push(y);
                            spans[h] = self.spaces[h].span(f, &gens[h]);
                            grew = true;
                        }
                    }
                }
                if !grew {
                    break;
                }
            }
            if spans.iter().zip(&self.d).all(|(s, &dv)| s.dim == dv) {
                count += 1;
            }
            // Odometer over framing choices.
            let mut i = 0;
            loop {
                if i == slots.len() {
                    return count;
                }
                choice[i] += 1;
                if choice[i] < self.spaces[slots[i]].size {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }

    fn sum_over_tuples(&self, budget: u128, per: impl Fn(&mut Scratch, &[u8]) -> u128 + Sync) -> Result<BigInt> {
        let total = self.tuple_count().ok_or(Error::Budget {
            needed: u128::MAX,
            budget,
        })?;
        if total > budget {
            return Err(Error::Budget { needed: total, budget });
        }
        let q = self.field.q;
        const CHUNK: u128 = 1 << 14;
        let chunks = total.div_ceil(CHUNK);
        let sum: u128 = (0..chunks as u64)
            .into_par_iter()
            .map(|c| {
                let start = c as u128 * CHUNK;
                let end = (start + CHUNK).min(total);
                let mut tuple = vec![0u8; self.entries];
                let mut x = start;
                for slot in tuple.iter_mut() {
                    *slot = (x % q as u128) as u8;
                    x /= q as u128;
                }
                let mut sc = self.scratch();
                let mut acc = 0u128;
                for _ in start..end {
                    acc += per(&mut sc, &tuple);
                    for slot in tuple.iter_mut() {
                        *slot += 1;
                        if (*slot as usize) < q {
                            break;
                        }
                        *slot = 0;
                    }
                }
                acc
            })
            .sum();
        Ok(BigInt::from(sum))
    }

    /// `|∏_v GL(d(v), F_q)|`.
    pub fn group_order(&self) -> BigInt {
        let q = BigInt::from(self.field.q);
        self.d.iter().fold(BigInt::one(), |acc, &n| {
            let qn = num_traits::pow(q.clone(), n);
            (0..n).fold(acc, |a, i| a * (&qn - num_traits::pow(q.clone(), i)))
        })
    }

    fn quotient(&self, raw: BigInt) -> Result<BigInt> {
        let (quo, rem) = raw.div_rem(&self.group_order());
        if !rem.is_zero() {
            return Err(Error::GroupOrder {
                q: self.field.q as u64,
            });
        }
        Ok(quo)
    }

    /// Raw count of stable framed tuples and the count of the quotient.
    pub fn count(&self, budget: u128) -> Result<(BigInt, BigInt)> {
        let raw = self.sum_over_tuples(budget, |sc, t| self.count_with(sc, t))?;
        Ok((raw.clone(), self.quotient(raw)?))
    }

    /// [`FramedCounter::count`] by direct framing scans; trivial stability only.
    pub fn count_by_scan(&self, budget: u128) -> Result<(BigInt, BigInt)> {
        let raw = self.sum_over_tuples(budget, |_, t| self.scan_for_tuple(t))?;
        Ok((raw.clone(), self.quotient(raw)?))
    }

    /// Flattened edge-map tuple for index `i` (digits base `q`).
    pub fn tuple_at(&self, mut i: u128) -> Vec<u8> {
        let q = self.field.q as u128;
        (0..self.entries)
            .map(|_| {
                let c = (i % q) as u8;
                i /= q;
                c
            })
            .collect()
    }
}

/// Points of the framed moduli space over `F_q`.
pub fn count_stable_framed(
    field: &FiniteField,
    quiver: &Quiver,
    d: &KClass,
    e: &KClass,
    stab: &OracleStability,
    budget: u128,
) -> Result<BigInt> {
    Ok(FramedCounter::new(field.clone(), quiver, d, e, stab)?.count(budget)?.1)
}

/// One field sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sample {
    pub q: u64,
    #[serde(with = "bigint_text")]
    pub count: BigInt,
}

mod bigint_text {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Point counts, their interpolating polynomial and its value at `q = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountResult {
    pub quiver: Quiver,
    pub d: KClass,
    pub e: KClass,
    pub samples: Vec<Sample>,
    /// Coefficients from the constant term up.
    pub polynomial: Vec<String>,
    pub euler: String,
}

impl CountResult {
    pub fn euler_value(&self) -> Result<BigInt> {
        self.euler.parse().map_err(|_| Error::Parse(self.euler.clone()))
    }
}

/// Exact polynomial through `points`, coefficients from the constant term up.
pub fn interpolate(points: &[(i64, BigInt)]) -> Vec<Rational> {
    let n = points.len();
    let mut coeffs = vec![Rational::zero(); n];
    for (i, (xi, yi)) in points.iter().enumerate() {
        // Basis polynomial ∏_{j≠i} (x − x_j)/(x_i − x_j).
        let mut basis = vec![Rational::one()];
        let mut denom = Rational::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![Rational::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] += b;
                next[k] -= b * int(*xj);
            }
            basis = next;
            denom *= int(xi - xj);
        }
        let scale = big(yi.clone()) / denom;
        for (c, b) in coeffs.iter_mut().zip(&basis) {
            *c += b * &scale;
        }
    }
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    coeffs
}

/// Dimension of the framed moduli space: `e·d − χ̂(d,d)`.
pub fn moduli_dimension(quiver: &Quiver, d: &KClass, e: &KClass) -> Result<i64> {
    Ok(d.dot(&e.0) - euler_hat(quiver, d, d)?)
}

/// Count over each field, interpolate, and evaluate at `q = 1`.
pub fn euler_characteristic(
    quiver: &Quiver,
    d: &KClass,
    e: &KClass,
    stab: &OracleStability,
    fields: &[u64],
    budget: u128,
) -> Result<CountResult> {
    let dim = moduli_dimension(quiver, d, e)?;
    if dim < 0 {
        return Err(Error::Interpolation(format!("negative expected dimension {dim}")));
    }
    if (fields.len() as i64) < dim + 1 {
        return Err(Error::TooFewSamples {
            samples: fields.len(),
            degree: dim,
        });
    }
    let mut samples = Vec::with_capacity(fields.len());
    for &q in fields {
        let f = FiniteField::new(q)?;
        samples.push(Sample {
            q,
            count: count_stable_framed(&f, quiver, d, e, stab, budget)?,
        });
    }
    let points: Vec<(i64, BigInt)> = samples.iter().map(|s| (s.q as i64, s.count.clone())).collect();
    let poly = interpolate(&points);
    if let Some((i, c)) = poly.iter().enumerate().find(|(_, c)| !c.is_integer()) {
        return Err(Error::Interpolation(format!(
            "coefficient of q^{i} is {}",
            format_rational(c)
        )));
    }
    if poly.len() as i64 - 1 > dim {
        return Err(Error::Interpolation(format!(
            "degree {} exceeds the dimension {dim}",
            poly.len() - 1
        )));
    }
    if poly.last().is_some_and(|c| c.is_negative()) {
        return Err(Error::Interpolation("negative leading coefficient".into()));
    }
    let euler: Rational = poly.iter().sum();
    Ok(CountResult {
        quiver: quiver.clone(),
        d: d.clone(),
        e: e.clone(),
        samples,
        polynomial: poly.iter().map(|c| c.to_integer().to_string()).collect(),
        euler: euler.to_integer().to_string(),
    })
}

/// `NDT = (−1)^{χ̂(d,d) + e·d} χ`.
pub fn ndt_from_count(result: &CountResult, chi_hat_dd: i64) -> Result<Rational> {
    let chi = result.euler_value()?;
    let ed = result.d.dot(&result.e.0);
    Ok(int(sign(chi_hat_dd + ed)) * big(chi))
}

/// Closed form `χ = e/((m−1)d + e)·binomial(md + e − 1, d)` for the framed
/// `m`-loop quiver.
pub fn mloop_euler_closed_form(m: i64, d: i64, e: i64) -> Rational {
    let top = m * d + e - 1;
    let b = crate::numerics::binomial(top.max(0) as u64, d);
    int(e) * big(b) / int((m - 1) * d + e)
}
