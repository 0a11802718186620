//! Exact rationals and the combinatorial enumerations shared by the
//! coefficient and transform code.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

/// `n / d` as a rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn big(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// `(-1)^k` as a small integer.
pub fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Render as `num/den`, the only textual form used for output.
pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parse `num/den` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(big(s.parse().map_err(|_| bad())?)),
    }
}

pub fn is_integral(x: &Rational) -> bool {
    x.denom().is_one()
}

/// Möbius function.
pub fn moebius(m: u64) -> Result<i64> {
    if m == 0 {
        return Err(Error::Domain("moebius(0) is undefined".into()));
    }
    let mut n = m;
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return Ok(0);
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    Ok(result)
}

/// Binomial coefficient, zero outside `0 <= k <= n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Greatest common divisor of a list of integers (0 for an all-zero list).
pub fn gcd_all(xs: &[i64]) -> u64 {
    xs.iter().fold(0i64, |g, &x| g.gcd(&x)).unsigned_abs()
}

/// Exact integer power of a rational, negative exponents allowed.
pub fn rat_pow(x: &Rational, e: i64) -> Rational {
    if e < 0 {
        rat_pow(x, -e).recip()
    } else {
        let mut acc = Rational::one();
        for _ in 0..e {
            acc *= x;
        }
        acc
    }
}

/// Caps guarding the combinatorial enumerations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumBounds {
    pub max_tree_vertices: usize,
    pub max_composition_total: usize,
}

impl Default for EnumBounds {
    fn default() -> Self {
        Self {
            max_tree_vertices: 8,
            max_composition_total: 20,
        }
    }
}

/// An ordered list of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition {
    pub parts: Vec<usize>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::Domain("composition parts must be positive".into()));
        }
        Ok(Self { parts })
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Cut points `0 = a_0 < a_1 < ... < a_m = total`.
    pub fn boundaries(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.parts.len() + 1);
        let mut acc = 0;
        out.push(0);
        for p in &self.parts {
            acc += p;
            out.push(acc);
        }
        out
    }
}

/// Lexicographic stream of all compositions of `total`.
#[derive(Debug, Clone)]
pub struct Compositions {
    next: Option<Vec<usize>>,
}

impl Iterator for Compositions {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        let cur = self.next.take()?;
        if cur.len() > 1 {
            // Lexicographic successor: bump the second-to-last part, then
            // spell the leftover as ones.
            let mut succ = cur.clone();
            let last = succ.pop().unwrap();
            *succ.last_mut().unwrap() += 1;
            succ.extend(std::iter::repeat(1).take(last - 1));
            self.next = Some(succ);
        }
        Some(Composition { parts: cur })
    }
}

pub fn enumerate_compositions(total: usize) -> Result<Compositions> {
    enumerate_compositions_bounded(total, &EnumBounds::default())
}

pub fn enumerate_compositions_bounded(total: usize, bounds: &EnumBounds) -> Result<Compositions> {
    if total == 0 {
        return Err(Error::Domain("compositions need a positive total".into()));
    }
    if total > bounds.max_composition_total {
        return Err(Error::BoundExceeded {
            what: "composition total",
            value: total as u64,
            bound: bounds.max_composition_total as u64,
        });
    }
    Ok(Compositions {
        next: Some(vec![1; total]),
    })
}

/// Every composition of `total` as its boundary vector `0 = a_0 < ... < a_m = total`.
pub(crate) fn boundary_sets(total: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(1 << total.saturating_sub(1));
    for mask in 0u64..(1u64 << (total - 1)) {
        let mut b = vec![0];
        for i in 1..total {
            if mask >> (i - 1) & 1 == 1 {
                b.push(i);
            }
        }
        b.push(total);
        out.push(b);
    }
    out
}

/// A labelled tree on vertices `0..n`, every edge oriented from the smaller
/// label to the larger.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientedTree {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl OrientedTree {
    pub fn new(n: usize, mut edges: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("a tree needs at least one vertex".into()));
        }
        if edges.len() != n - 1 {
            return Err(Error::Domain(format!("a tree on {n} vertices has {} edges", n - 1)));
        }
        for e in edges.iter_mut() {
            if e.0 == e.1 || e.0 >= n || e.1 >= n {
                return Err(Error::Domain(format!("bad edge {e:?}")));
            }
            if e.0 > e.1 {
                return Err(Error::Domain(format!("edge {e:?} is not oriented low to high")));
            }
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &(a, b) in &edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return Err(Error::Domain("edges contain a cycle".into()));
            }
            parent[ra] = rb;
        }
        edges.sort_unstable();
        Ok(Self { n, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Decode a Prüfer sequence over `0..n` (length `n - 2`).
    pub fn from_pruefer(n: usize, seq: &[usize]) -> Self {
        debug_assert_eq!(seq.len() + 2, n);
        let mut degree = vec![1usize; n];
        for &s in seq {
            degree[s] += 1;
        }
        let mut edges = Vec::with_capacity(n - 1);
        for &s in seq {
            let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
            edges.push((leaf.min(s), leaf.max(s)));
            degree[leaf] -= 1;
            degree[s] -= 1;
        }
        let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        edges.push((rest[0], rest[1]));
        edges.sort_unstable();
        Self { n, edges }
    }
}

/// Every labelled tree on `n` vertices, once each.
pub fn enumerate_oriented_trees(n: usize) -> Result<Vec<OrientedTree>> {
    enumerate_oriented_trees_bounded(n, &EnumBounds::default())
}

pub fn enumerate_oriented_trees_bounded(n: usize, bounds: &EnumBounds) -> Result<Vec<OrientedTree>> {
    if n == 0 {
        return Err(Error::Domain("a tree needs at least one vertex".into()));
    }
    if n > bounds.max_tree_vertices {
        return Err(Error::BoundExceeded {
            what: "tree vertices",
            value: n as u64,
            bound: bounds.max_tree_vertices as u64,
        });
    }
    match n {
        1 => return Ok(vec![OrientedTree { n: 1, edges: vec![] }]),
        2 => return Ok(vec![OrientedTree { n: 2, edges: vec![(0, 1)] }]),
        _ => {}
    }
    let len = n - 2;
    let count = n.pow(len as u32);
    let mut out = Vec::with_capacity(count);
    let mut seq = vec![0usize; len];
    for mut idx in 0..count {
        for s in seq.iter_mut() {
            *s = idx % n;
            idx /= n;
        }
        out.push(OrientedTree::from_pruefer(n, &seq));
    }
    Ok(out)
}
