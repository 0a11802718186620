//! Wall-crossing coefficients `S`, `U`, `V`, the transformation law between
//! two weak stability conditions, and the Lie algebra used to re-derive the
//! pair-invariant formula through nested brackets.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::invariants::InvariantTable;
use crate::lattice::{extend_by_framing, KClass, NumericalContext, StabValue, WeakStability};
use crate::numerics::{
    big, boundary_sets, enumerate_oriented_trees, factorial, int, sign, OrientedTree, Rational,
};

const CACHED_SIZES: usize = 12;

fn cached_boundaries(n: usize) -> &'static [Vec<usize>] {
    static TABLE: OnceLock<Vec<Vec<Vec<usize>>>> = OnceLock::new();
    let t = TABLE.get_or_init(|| (0..=CACHED_SIZES).map(|k| if k == 0 { vec![] } else { boundary_sets(k) }).collect());
    &t[n]
}

fn cached_trees(n: usize) -> Result<&'static [OrientedTree]> {
    static TABLE: OnceLock<Vec<Vec<OrientedTree>>> = OnceLock::new();
    let t = TABLE.get_or_init(|| {
        (0..=8)
            .map(|k| if k == 0 { vec![] } else { enumerate_oriented_trees(k).expect("within default bound") })
            .collect()
    });
    if n == 0 || n >= t.len() {
        return Err(Error::BoundExceeded {
            what: "tree vertices",
            value: n as u64,
            bound: 8,
        });
    }
    Ok(&t[n])
}

/// Stability values of every interval sum `α_i + ... + α_{j-1}`.
struct Intervals {
    n: usize,
    tau: Vec<StabValue>,
    tilde: Vec<StabValue>,
}

impl Intervals {
    fn new(ctx: &NumericalContext, parts: &[KClass], tau: &WeakStability, tilde: &WeakStability) -> Result<Self> {
        let n = parts.len();
        if n == 0 {
            return Err(Error::Domain("empty decomposition".into()));
        }
        for p in parts {
            ctx.require_cone(p)?;
        }
        let mut tv = Vec::with_capacity(n * n);
        let mut ttv = Vec::with_capacity(n * n);
        for i in 0..n {
            let mut acc = KClass::zero(ctx.rank());
            for j in 0..n {
                if j >= i {
                    acc = acc.add(&parts[j]);
                    tv.push(tau.value(&acc)?);
                    ttv.push(tilde.value(&acc)?);
                } else {
                    tv.push(StabValue::Level(0));
                    ttv.push(StabValue::Level(0));
                }
            }
        }
        Ok(Self {
            n,
            tau: tv,
            tilde: ttv,
        })
    }

    /// τ of the interval `[i, j)`.
    fn tau(&self, i: usize, j: usize) -> &StabValue {
        &self.tau[i * self.n + j - 1]
    }

    fn tilde(&self, i: usize, j: usize) -> &StabValue {
        &self.tilde[i * self.n + j - 1]
    }

    /// `S` of the sequence of blocks cut at `c[0] < c[1] < ... < c[k]`.
    fn s_blocks(&self, c: &[usize]) -> i64 {
        let k = c.len() - 1;
        let mut flips = 0;
        for i in 1..k {
            let here = self.tau(c[i - 1], c[i]);
            let next = self.tau(c[i], c[i + 1]);
            let left = self.tilde(c[0], c[i]);
            let right = self.tilde(c[i], c[k]);
            if here <= next && left > right {
                flips += 1;
            } else if !(here > next && left <= right) {
                return 0;
            }
        }
        sign(flips)
    }

    fn u(&self) -> Rational {
        let n = self.n;
        let whole = self.tilde(0, n);
        let owned;
        let outer: &[Vec<usize>] = if n <= CACHED_SIZES {
            cached_boundaries(n)
        } else {
            owned = boundary_sets(n);
            &owned
        };
        let mut total = Rational::zero();
        for a in outer {
            let m = a.len() - 1;
            let slopes_match = (1..=m).all(|i| {
                let block = self.tau(a[i - 1], a[i]);
                (a[i - 1]..a[i]).all(|j| self.tau(j, j + 1) == block)
            });
            if !slopes_match {
                continue;
            }
            let mut weight = Rational::one();
            for i in 1..=m {
                weight /= big(factorial((a[i] - a[i - 1]) as u64));
            }
            let owned_inner;
            let inner: &[Vec<usize>] = if m <= CACHED_SIZES {
                cached_boundaries(m)
            } else {
                owned_inner = boundary_sets(m);
                &owned_inner
            };
            let mut acc = Rational::zero();
            for b in inner {
                let l = b.len() - 1;
                if !(1..=l).all(|i| self.tilde(a[b[i - 1]], a[b[i]]) == whole) {
                    continue;
                }
                let mut prod = 1;
                for i in 1..=l {
                    prod *= self.s_blocks(&a[b[i - 1]..=b[i]]);
                    if prod == 0 {
                        break;
                    }
                }
                if prod != 0 {
                    acc += Rational::new((sign(l as i64 - 1) * prod).into(), (l as i64).into());
                }
            }
            total += acc * weight;
        }
        total
    }
}

/// `S(α_1, ..., α_n; τ, τ̃) ∈ {−1, 0, 1}`.
pub fn coeff_s(
    ctx: &NumericalContext,
    parts: &[KClass],
    tau: &WeakStability,
    tau_tilde: &WeakStability,
) -> Result<i64> {
    let iv = Intervals::new(ctx, parts, tau, tau_tilde)?;
    let cuts: Vec<usize> = (0..=parts.len()).collect();
    Ok(iv.s_blocks(&cuts))
}

/// `U(α_1, ..., α_n; τ, τ̃)`.
pub fn coeff_u(
    ctx: &NumericalContext,
    parts: &[KClass],
    tau: &WeakStability,
    tau_tilde: &WeakStability,
) -> Result<Rational> {
    Ok(Intervals::new(ctx, parts, tau, tau_tilde)?.u())
}

/// Orderings of `0..n` in which every directed edge `(a, b)` has `a` before `b`.
fn linear_extensions(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut preds = vec![0u32; n];
    for &(a, b) in edges {
        preds[b] |= 1 << a;
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, preds: &[u32], placed: u32, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if placed >> v & 1 == 0 && preds[v] & !placed == 0 {
                cur.push(v);
                rec(n, preds, placed | 1 << v, cur, out);
                cur.pop();
            }
        }
    }
    rec(n, &preds, 0, &mut cur, &mut out);
    out
}

/// `V(I, Γ, κ; τ, τ̃)` for a tree with arbitrary edge directions on `0..n`.
pub fn coeff_v_directed(
    ctx: &NumericalContext,
    edges: &[(usize, usize)],
    kappa: &[KClass],
    tau: &WeakStability,
    tau_tilde: &WeakStability,
) -> Result<Rational> {
    let n = kappa.len();
    if n == 0 || edges.len() + 1 != n || edges.iter().any(|&(a, b)| a >= n || b >= n || a == b) {
        return Err(Error::Domain(format!("edges {edges:?} do not form a tree on {n} vertices")));
    }
    if n > 20 {
        return Err(Error::BoundExceeded {
            what: "tree vertices",
            value: n as u64,
            bound: 20,
        });
    }
    let mut sum = Rational::zero();
    for order in linear_extensions(n, edges) {
        let parts: Vec<KClass> = order.iter().map(|&i| kappa[i].clone()).collect();
        sum += coeff_u(ctx, &parts, tau, tau_tilde)?;
    }
    let scale = big(factorial(n as u64)) * int(1i64 << (n - 1));
    Ok(sum / scale)
}

/// `V(I, Γ, κ; τ, τ̃)` for a canonically oriented tree.
pub fn coeff_v(
    ctx: &NumericalContext,
    tree: &OrientedTree,
    kappa: &[KClass],
    tau: &WeakStability,
    tau_tilde: &WeakStability,
) -> Result<Rational> {
    if tree.vertex_count() != kappa.len() {
        return Err(Error::Domain(format!(
            "tree has {} vertices but {} classes were given",
            tree.vertex_count(),
            kappa.len()
        )));
    }
    coeff_v_directed(ctx, tree.edges(), kappa, tau, tau_tilde)
}

/// Options for [`transform`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransformOptions {
    /// Include the `(−1)^{n−1+Σχ̄}` signs (DT̄ invariants); drop them for `J`.
    pub signed: bool,
    /// Largest number of parts in a decomposition.
    pub max_parts: usize,
}

impl Default for TransformOptions {
    fn default() -> Self {
        Self {
            signed: true,
            max_parts: 6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformResult {
    pub value: Rational,
    /// Decompositions with more than `max_parts` parts were skipped.
    pub truncated: bool,
    pub decompositions: usize,
}

/// Ordered decompositions of `target` into classes drawn from `support`.
/// Returns the decompositions and whether the part cap cut any branch.
pub fn decompositions(
    ctx: &NumericalContext,
    support: &[KClass],
    target: &KClass,
    max_parts: usize,
) -> (Vec<Vec<KClass>>, bool) {
    let mut out = Vec::new();
    let mut truncated = false;
    let mut cur = Vec::new();
    fn rec(
        ctx: &NumericalContext,
        support: &[KClass],
        rest: &KClass,
        max_parts: usize,
        cur: &mut Vec<KClass>,
        out: &mut Vec<Vec<KClass>>,
        truncated: &mut bool,
    ) {
        for s in support {
            if !s.le_componentwise(rest) {
                continue;
            }
            let r = rest.sub(s);
            let done = r.is_zero();
            if !done && !ctx.in_cone(&r) {
                continue;
            }
            if done {
                cur.push(s.clone());
                out.push(cur.clone());
                cur.pop();
            } else if cur.len() + 1 < max_parts {
                cur.push(s.clone());
                rec(ctx, support, &r, max_parts, cur, out, truncated);
                cur.pop();
            } else {
                *truncated = true;
            }
        }
    }
    if max_parts > 0 {
        rec(ctx, support, target, max_parts, &mut cur, &mut out, &mut truncated);
    }
    (out, truncated)
}

fn table_support(ctx: &NumericalContext, table: &InvariantTable) -> Vec<KClass> {
    table
        .entries()
        .iter()
        .filter(|(c, v)| !v.is_zero() && ctx.in_cone(c))
        .map(|(c, _)| c.clone())
        .collect()
}

fn tree_weight_sum(ctx: &NumericalContext, parts: &[KClass]) -> Result<Rational> {
    let n = parts.len();
    let mut chi = vec![0i64; n * n];
    for i in 0..n {
        for j in 0..n {
            chi[i * n + j] = ctx.chi_bar(&parts[i], &parts[j]);
        }
    }
    let mut s = num_bigint::BigInt::zero();
    for t in cached_trees(n)? {
        let mut p = num_bigint::BigInt::one();
        for &(a, b) in t.edges() {
            p *= chi[a * n + b];
            if p.is_zero() {
                break;
            }
        }
        s += p;
    }
    Ok(big(s))
}

fn pair_sign(ctx: &NumericalContext, parts: &[KClass]) -> i64 {
    let mut s = 0;
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            s += ctx.chi_bar(&parts[i], &parts[j]);
        }
    }
    sign(s)
}

fn product_of_values(table: &InvariantTable, parts: &[KClass]) -> Rational {
    parts
        .iter()
        .fold(Rational::one(), |acc, p| acc * table.get(p))
}

/// Transformation law: the invariant of `target` under `τ̃` from the table under `τ`,
/// summing over ordered decompositions and labelled trees with edges `i → j`, `i < j`.
pub fn transform(
    ctx: &NumericalContext,
    table: &InvariantTable,
    tau: &WeakStability,
    tau_tilde: &WeakStability,
    target: &KClass,
    opts: &TransformOptions,
) -> Result<TransformResult> {
    ctx.require_cone(target)?;
    let support = table_support(ctx, table);
    let (decs, truncated) = decompositions(ctx, &support, target, opts.max_parts);
    let terms: Vec<Rational> = decs
        .par_iter()
        .map(|parts| -> Result<Rational> {
            let n = parts.len();
            let u = coeff_u(ctx, parts, tau, tau_tilde)?;
            if u.is_zero() {
                return Ok(Rational::zero());
            }
            let trees = tree_weight_sum(ctx, parts)?;
            if trees.is_zero() {
                return Ok(Rational::zero());
            }
            let mut term = u * trees * product_of_values(table, parts) / int(1i64 << (n - 1));
            if opts.signed {
                term *= int(sign(n as i64 - 1) * pair_sign(ctx, parts));
            }
            Ok(term)
        })
        .collect::<Result<_>>()?;
    Ok(TransformResult {
        value: terms.iter().fold(Rational::zero(), |a, t| a + t),
        truncated,
        decompositions: decs.len(),
    })
}

/// The same transformation law written through `V`: sums over sizes `n`,
/// maps `κ: {0..n} → C`, and trees on `{0..n}` with every orientation counted
/// (each tree's orientations contribute equally, hence the factor `2^{n−1}`).
pub fn transform_v_form(
    ctx: &NumericalContext,
    table: &InvariantTable,
    tau: &WeakStability,
    tau_tilde: &WeakStability,
    target: &KClass,
    opts: &TransformOptions,
) -> Result<TransformResult> {
    ctx.require_cone(target)?;
    let support = table_support(ctx, table);
    let (decs, truncated) = decompositions(ctx, &support, target, opts.max_parts);
    let terms: Vec<Rational> = decs
        .par_iter()
        .map(|kappa| -> Result<Rational> {
            let n = kappa.len();
            let values = product_of_values(table, kappa);
            let mut abs_half = 0i64;
            for i in 0..n {
                for j in i + 1..n {
                    abs_half += ctx.chi_bar(&kappa[i], &kappa[j]).abs();
                }
            }
            let mut acc = Rational::zero();
            for t in cached_trees(n)? {
                let mut edge_prod = 1i64;
                for &(a, b) in t.edges() {
                    edge_prod *= ctx.chi_bar(&kappa[a], &kappa[b]);
                }
                if edge_prod == 0 {
                    continue;
                }
                let v = coeff_v(ctx, t, kappa, tau, tau_tilde)?;
                acc += v * int(edge_prod);
            }
            let mut term = acc * &values * int(1i64 << (n - 1));
            if opts.signed {
                term *= int(sign(n as i64 - 1) * sign(abs_half));
            }
            Ok(term)
        })
        .collect::<Result<_>>()?;
    Ok(TransformResult {
        value: terms.iter().fold(Rational::zero(), |a, t| a + t),
        truncated,
        decompositions: decs.len(),
    })
}

/// `Σ_{(b_1..b_m) ⊨ l} (−1)^m ∏ 1/b_i!`, which equals `(−1)^l / l!`.
pub fn signed_composition_sum(l: usize) -> Result<Rational> {
    let mut s = Rational::zero();
    for c in crate::numerics::enumerate_compositions(l)? {
        let mut term = int(sign(c.len() as i64));
        for &b in &c.parts {
            term /= big(factorial(b as u64));
        }
        s += term;
    }
    Ok(s)
}

/// Closed form of `U((α_1,0),…,(α_{k−1},0),(0,1),(α_k,0),…; τ̇, τ̃)` with `n` parts.
pub fn framed_u_closed_form(n: usize, k: usize) -> Rational {
    Rational::new(
        sign((n - k) as i64).into(),
        factorial((k - 1) as u64) * factorial((n - k) as u64),
    )
}

/// Finite set of classes spanning a truncated Lie algebra.
pub type ClassSet = BTreeSet<KClass>;

/// Element of the Lie algebra with basis `λ^α`, `α` in a class set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LieElement {
    terms: BTreeMap<KClass, Rational>,
}

impl LieElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(c: KClass, coeff: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(c, coeff);
        }
        Self { terms }
    }

    pub fn terms(&self) -> &BTreeMap<KClass, Rational> {
        &self.terms
    }

    pub fn coefficient(&self, c: &KClass) -> Rational {
        self.terms.get(c).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &LieElement) -> LieElement {
        let mut out = self.clone();
        for (c, v) in &other.terms {
            let e = out.terms.entry(c.clone()).or_insert_with(Rational::zero);
            *e += v;
            if e.is_zero() {
                out.terms.remove(c);
            }
        }
        out
    }

    pub fn scale(&self, k: &Rational) -> LieElement {
        if k.is_zero() {
            return LieElement::zero();
        }
        LieElement {
            terms: self.terms.iter().map(|(c, v)| (c.clone(), v * k)).collect(),
        }
    }
}

/// `[λ^α, λ^β] = (−1)^{χ̄(α,β)} χ̄(α,β) λ^{α+β}`, zero when `α+β` leaves the class set.
pub fn lie_bracket(
    a: &LieElement,
    b: &LieElement,
    ctx: &NumericalContext,
    set: &ClassSet,
) -> Result<LieElement> {
    for c in a.terms.keys().chain(b.terms.keys()) {
        if !set.contains(c) {
            return Err(Error::Domain(format!("class {c} is outside the Lie algebra's class set")));
        }
    }
    let mut out = BTreeMap::<KClass, Rational>::new();
    for (x, u) in &a.terms {
        for (y, v) in &b.terms {
            let s = x.add(y);
            if !set.contains(&s) {
                continue;
            }
            let chi = ctx.chi_bar(x, y);
            if chi == 0 {
                continue;
            }
            let e = out.entry(s).or_insert_with(Rational::zero);
            *e += u * v * int(sign(chi) * chi);
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(LieElement { terms: out })
}

/// Pair invariant of `target` from nested brackets in the framing-extended
/// Lie algebra: `λ^{(0,1)} ↦ −1`, `λ^{(α_i,0)} ↦ −DT̄^{α_i}`, summed with
/// weights `(−1)^l / l!` over decompositions into parts of the same
/// `τ`-value as the target; the answer is minus the `λ^{(target,1)}` coefficient.
pub fn nested_bracket_pair_formula(
    ctx: &NumericalContext,
    table: &InvariantTable,
    tau: &WeakStability,
    target: &KClass,
    max_parts: usize,
) -> Result<Rational> {
    ctx.require_cone(target)?;
    let bp = extend_by_framing(ctx)?;
    let lift = |c: &KClass, d: i64| KClass([c.0.clone(), vec![d]].concat());

    let mut set = ClassSet::new();
    let mut cur = vec![0i64; ctx.rank()];
    'outer: loop {
        for d in 0..=1 {
            let c = lift(&KClass(cur.clone()), d);
            if bp.in_cone(&c) {
                set.insert(c);
            }
        }
        for i in 0..cur.len() {
            if cur[i] < target.0[i] {
                cur[i] += 1;
                continue 'outer;
            }
            cur[i] = 0;
        }
        break;
    }

    let level = tau.value(target)?;
    let support: Vec<KClass> = table_support(ctx, table)
        .into_iter()
        .filter(|c| tau.value(c).map(|v| v == level).unwrap_or(false))
        .collect();
    let (decs, truncated) = decompositions(ctx, &support, target, max_parts);
    if truncated {
        return Err(Error::PartCap {
            target: target.clone(),
            cap: max_parts,
        });
    }
    let framing_class = lift(&KClass::zero(ctx.rank()), 1);
    let mut total = LieElement::zero();
    for parts in &decs {
        let mut x = LieElement::basis(framing_class.clone(), -Rational::one());
        for p in parts {
            let y = LieElement::basis(lift(p, 0), -table.get(p));
            x = lie_bracket(&x, &y, &bp, &set)?;
            if x.is_zero() {
                break;
            }
        }
        let l = parts.len() as u64;
        total = total.add(&x.scale(&(int(sign(l as i64)) / big(factorial(l)))));
    }
    Ok(-total.coefficient(&lift(target, 1)))
}

/// `χ̄`-weighted count of trees through the matrix-tree theorem, for cross-checks.
pub fn tree_weight_by_determinant(ctx: &NumericalContext, parts: &[KClass]) -> Rational {
    let n = parts.len();
    if n == 1 {
        return Rational::one();
    }
    // Laplacian of the complete graph with weights χ̄(α_i, α_j), i < j.
    let mut lap = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = int(ctx.chi_bar(&parts[i], &parts[j]));
            lap[i][i] += &w;
            lap[j][j] += &w;
            lap[i][j] -= &w;
            lap[j][i] -= &w;
        }
    }
    let mut m: Vec<Vec<Rational>> = lap[1..].iter().map(|r| r[1..].to_vec()).collect();
    let k = n - 1;
    let mut det = Rational::one();
    for col in 0..k {
        let Some(piv) = (col..k).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..k {
            let f = &m[r][col] / &p;
            if f.is_zero() {
                continue;
            }
            for c in col..k {
                let sub = &m[col][c] * &f;
                m[r][c] -= sub;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::InvariantKind;
    use crate::numerics::rat;

    fn k(v: &[i64]) -> KClass {
        KClass(v.to_vec())
    }

    fn bp_rank1() -> NumericalContext {
        extend_by_framing(&NumericalContext::from_chi_bar(vec![vec![0]]).unwrap().with_framing(vec![2]).unwrap())
            .unwrap()
    }

    #[test]
    fn s_examples() {
        let bp = bp_rank1();
        let dot = WeakStability::tau_dot();
        let tilde = WeakStability::tau_tilde();
        assert_eq!(coeff_s(&bp, &[k(&[3, 0])], &dot, &tilde).unwrap(), 1);
        assert_eq!(coeff_s(&bp, &[k(&[0, 1]), k(&[1, 0])], &dot, &tilde).unwrap(), -1);
        assert_eq!(
            coeff_s(&bp, &[k(&[1, 0]), k(&[0, 1]), k(&[2, 0]), k(&[1, 0])], &dot, &tilde).unwrap(),
            1
        );
        assert_eq!(
            coeff_s(&bp, &[k(&[1, 0]), k(&[1, 0]), k(&[0, 1]), k(&[1, 0])], &dot, &tilde).unwrap(),
            0
        );
        assert!(coeff_s(&bp, &[k(&[0, 0])], &dot, &tilde).is_err());
    }

    #[test]
    fn u_examples() {
        let bp = bp_rank1();
        let dot = WeakStability::tau_dot();
        let tilde = WeakStability::tau_tilde();
        assert_eq!(coeff_u(&bp, &[k(&[2, 1])], &dot, &tilde).unwrap(), int(1));
        for n in 1..=6usize {
            for pos in 1..=n {
                let mut parts = vec![k(&[1, 0]); n];
                parts[pos - 1] = k(&[0, 1]);
                assert_eq!(
                    coeff_u(&bp, &parts, &dot, &tilde).unwrap(),
                    framed_u_closed_form(n, pos),
                    "n={n} k={pos}"
                );
            }
        }
        assert_eq!(
            coeff_u(&bp, &[k(&[0, 1]), k(&[1, 0]), k(&[1, 0])], &dot, &tilde).unwrap(),
            rat(1, 2)
        );
    }

    #[test]
    fn u_vanishes_for_equal_stabilities_in_two_parts() {
        let ctx = NumericalContext::from_chi_bar(vec![vec![0, 1], vec![-1, 0]]).unwrap();
        let mu = WeakStability::slope_from_ints(&[1, 0], &[1, 1]);
        for a in ctx.cone_classes(3) {
            for b in ctx.cone_classes(3) {
                assert_eq!(coeff_u(&ctx, &[a.clone(), b.clone()], &mu, &mu).unwrap(), int(0));
            }
        }
    }

    #[test]
    fn v_examples() {
        let bp = bp_rank1();
        let dot = WeakStability::tau_dot();
        let tilde = WeakStability::tau_tilde();
        let t1 = OrientedTree::new(1, vec![]).unwrap();
        assert_eq!(coeff_v(&bp, &t1, &[k(&[1, 1])], &dot, &tilde).unwrap(), int(1));
        let t2 = OrientedTree::new(2, vec![(0, 1)]).unwrap();
        assert_eq!(coeff_v(&bp, &t2, &[k(&[1, 0]), k(&[0, 1])], &dot, &dot).unwrap(), int(0));
        // path 0 → 1 → 2 admits exactly the identity ordering
        let path = OrientedTree::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let kappa = [k(&[0, 1]), k(&[1, 0]), k(&[2, 0])];
        let direct = coeff_u(&bp, &kappa, &dot, &tilde).unwrap() / int(4 * 6);
        assert_eq!(coeff_v(&bp, &path, &kappa, &dot, &tilde).unwrap(), direct);
        // star centred at 0: orderings starting with 0
        let star = OrientedTree::new(3, vec![(0, 1), (0, 2)]).unwrap();
        let mut brute = Rational::zero();
        for perm in [[0, 1, 2], [0, 2, 1]] {
            let p: Vec<KClass> = perm.iter().map(|&i| kappa[i].clone()).collect();
            brute += coeff_u(&bp, &p, &dot, &tilde).unwrap();
        }
        assert_eq!(coeff_v(&bp, &star, &kappa, &dot, &tilde).unwrap(), brute / int(24));
    }

    #[test]
    fn linear_extension_counts() {
        assert_eq!(linear_extensions(3, &[(0, 1), (1, 2)]).len(), 1);
        assert_eq!(linear_extensions(3, &[(0, 1), (0, 2)]).len(), 2);
        assert_eq!(linear_extensions(4, &[]).len(), 24);
    }

    #[test]
    fn composition_identity() {
        for l in 1..=10usize {
            assert_eq!(
                signed_composition_sum(l).unwrap(),
                int(sign(l as i64)) / big(factorial(l as u64))
            );
        }
    }

    #[test]
    fn bracket_basics() {
        let ctx = NumericalContext::from_chi_bar(vec![vec![0, 3], vec![-3, 0]]).unwrap();
        let set: ClassSet = ctx.cone_classes(4).into_iter().collect();
        let x = LieElement::basis(k(&[1, 0]), int(2)).add(&LieElement::basis(k(&[0, 1]), int(1)));
        assert!(lie_bracket(&x, &x, &ctx, &set).unwrap().is_zero());
        let y = LieElement::basis(k(&[0, 1]), int(1));
        let b = lie_bracket(&LieElement::basis(k(&[1, 0]), int(1)), &y, &ctx, &set).unwrap();
        assert_eq!(b.coefficient(&k(&[1, 1])), int(-3));
        let flat = NumericalContext::from_chi_bar(vec![vec![0, 0], vec![0, 0]]).unwrap();
        assert!(lie_bracket(&x, &y, &flat, &set).unwrap().is_zero());
        let outside = LieElement::basis(k(&[5, 5]), int(1));
        assert!(lie_bracket(&outside, &y, &ctx, &set).is_err());
    }

    #[test]
    fn matrix_tree_agrees_with_enumeration() {
        let ctx = NumericalContext::from_chi_bar(vec![vec![0, 2, -1], vec![-2, 0, 3], vec![1, -3, 0]]).unwrap();
        let classes = ctx.cone_classes(2);
        for n in 1..=5usize {
            let parts: Vec<KClass> = (0..n).map(|i| classes[(i * 7 + n) % classes.len()].clone()).collect();
            assert_eq!(tree_weight_sum(&ctx, &parts).unwrap(), tree_weight_by_determinant(&ctx, &parts));
        }
    }

    #[test]
    fn transform_single_part() {
        let ctx = NumericalContext::from_chi_bar(vec![vec![0, 1], vec![-1, 0]]).unwrap();
        let mut t = InvariantTable::new(InvariantKind::DTbar, "mu");
        t.insert(k(&[1, 1]), rat(3, 7));
        let mu = WeakStability::slope_from_ints(&[1, 0], &[1, 1]);
        let nu = WeakStability::slope_from_ints(&[0, 1], &[1, 1]);
        let r = transform(&ctx, &t, &mu, &nu, &k(&[1, 1]), &TransformOptions::default()).unwrap();
        assert_eq!(r.value, rat(3, 7));
        assert_eq!(r.decompositions, 1);
        assert!(!r.truncated);
    }
}
