//! Congruences, complementary factor pairs, central elements and bounded
//! Mal'cev chain extraction.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{for_each_assignment, Element, FiniteAlgebra, Term};

/// `all_congruences` and everything built on it refuse larger algebras.
pub const DEFAULT_CONGRUENCE_BOUND: usize = 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CongruenceError {
    #[error("algebra of size {size} exceeds the congruence enumeration bound {bound}")]
    SizeBound { size: usize, bound: usize },
    #[error("({0}, {1}) is not in the generated congruence")]
    NotInCongruence(Element, Element),
    #[error("element {0} outside the universe")]
    OutOfRange(Element),
    #[error("partition is not a congruence of the algebra")]
    NotACongruence,
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    /// Returns true when two distinct classes were merged.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // keep the smaller root so classes stay labeled by their least member
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// An equivalence relation on `0..size`, stored as canonical block labels:
/// blocks are numbered in order of their least member.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    labels: Vec<usize>,
}

impl Partition {
    /// Relabels arbitrary block keys canonically.
    pub fn from_keys(keys: &[usize]) -> Self {
        let mut map = HashMap::new();
        let labels = keys
            .iter()
            .map(|k| {
                let next = map.len();
                *map.entry(*k).or_insert(next)
            })
            .collect();
        Partition { labels }
    }

    pub fn identity(n: usize) -> Self {
        Partition {
            labels: (0..n).collect(),
        }
    }

    pub fn universal(n: usize) -> Self {
        Partition { labels: vec![0; n] }
    }

    pub(crate) fn from_union_find(uf: &mut UnionFind, n: usize) -> Self {
        let keys: Vec<usize> = (0..n).map(|x| uf.find(x)).collect();
        Self::from_keys(&keys)
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    #[inline]
    pub fn block_of(&self, x: Element) -> usize {
        self.labels[x]
    }

    #[inline]
    pub fn related(&self, x: Element, y: Element) -> bool {
        self.labels[x] == self.labels[y]
    }

    pub fn num_blocks(&self) -> usize {
        self.labels.iter().max().map_or(0, |m| m + 1)
    }

    pub fn blocks(&self) -> Vec<Vec<Element>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (x, &b) in self.labels.iter().enumerate() {
            out[b].push(x);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.num_blocks() == self.size()
    }

    pub fn is_universal(&self) -> bool {
        self.num_blocks() <= 1
    }

    pub fn refines(&self, other: &Partition) -> bool {
        (0..self.size()).all(|x| {
            (0..self.size()).all(|y| !self.related(x, y) || other.related(x, y))
        })
    }

    /// Compatibility with every operation of `a`.
    pub fn is_congruence_of(&self, a: &FiniteAlgebra) -> bool {
        let n = a.size();
        let mut args = Vec::new();
        (0..n).all(|x| {
            let rep = self.blocks()[self.block_of(x)][0];
            rep == x || translations_agree(a, rep, x, &mut args, |u, v| self.related(u, v))
        })
    }

    /// `self ∧ other = Δ` and `self ∘ other = ∇`: every block of one meets
    /// every block of the other in exactly one element.
    pub fn complements(&self, other: &Partition) -> bool {
        let (p, q) = (self.num_blocks(), other.num_blocks());
        if p * q != self.size() {
            return false;
        }
        let mut seen = vec![false; p * q];
        for x in 0..self.size() {
            let cell = self.block_of(x) * q + other.block_of(x);
            if seen[cell] {
                return false;
            }
            seen[cell] = true;
        }
        true
    }
}

/// Checks `f(…a…) ~ f(…b…)` for every basic translation.
fn translations_agree(
    a: &FiniteAlgebra,
    x: Element,
    y: Element,
    args: &mut Vec<Element>,
    related: impl Fn(Element, Element) -> bool,
) -> bool {
    let n = a.size();
    for (sym, &arity) in a.arities().iter().enumerate() {
        for slot in 0..arity {
            let ok = for_each_assignment(n, arity - 1, |params| {
                args.clear();
                args.extend_from_slice(&params[..slot]);
                args.push(x);
                args.extend_from_slice(&params[slot..]);
                let fx = a.op(sym, args);
                args[slot] = y;
                related(fx, a.op(sym, args))
            });
            if !ok {
                return false;
            }
        }
    }
    true
}

/// `Cg^A(pairs)`: union-find seeded with the pairs, closed under basic
/// translations until nothing merges.
pub fn congruence_generated(
    a: &FiniteAlgebra,
    pairs: &[(Element, Element)],
) -> Result<Partition, CongruenceError> {
    let n = a.size();
    if let Some(&(x, y)) = pairs.iter().find(|(x, y)| *x >= n || *y >= n) {
        return Err(CongruenceError::OutOfRange(x.max(y)));
    }
    let mut uf = UnionFind::new(n);
    let mut work: Vec<(Element, Element)> =
        pairs.iter().copied().filter(|&(x, y)| uf.union(x, y)).collect();
    let mut args = Vec::new();
    let mut args2 = Vec::new();
    while let Some((x, y)) = work.pop() {
        for (sym, &arity) in a.arities().iter().enumerate() {
            for slot in 0..arity {
                for_each_assignment(n, arity - 1, |params| {
                    args.clear();
                    args.extend_from_slice(&params[..slot]);
                    args.push(x);
                    args.extend_from_slice(&params[slot..]);
                    args2.clear();
                    args2.extend_from_slice(&args);
                    args2[slot] = y;
                    let (fx, fy) = (a.op(sym, &args), a.op(sym, &args2));
                    if uf.union(fx, fy) {
                        work.push((fx, fy));
                    }
                    true
                });
            }
        }
    }
    Ok(Partition::from_union_find(&mut uf, n))
}

/// Restricted growth strings of length `n`, lexicographically.
fn for_each_partition(n: usize, mut f: impl FnMut(&[usize])) {
    fn go(labels: &mut Vec<usize>, max: usize, n: usize, f: &mut dyn FnMut(&[usize])) {
        if labels.len() == n {
            f(labels);
            return;
        }
        let limit = if labels.is_empty() { 0 } else { max + 1 };
        for b in 0..=limit {
            labels.push(b);
            go(labels, max.max(b), n, f);
            labels.pop();
        }
    }
    go(&mut Vec::with_capacity(n), 0, n, &mut f);
}

fn check_bound(a: &FiniteAlgebra, bound: usize) -> Result<(), CongruenceError> {
    if a.size() > bound {
        Err(CongruenceError::SizeBound {
            size: a.size(),
            bound,
        })
    } else {
        Ok(())
    }
}

/// Every congruence of `a`, in lexicographic order of canonical labels
/// (so `∇` first and `Δ` last).
pub fn all_congruences(a: &FiniteAlgebra) -> Result<Vec<Partition>, CongruenceError> {
    all_congruences_bounded(a, DEFAULT_CONGRUENCE_BOUND)
}

pub fn all_congruences_bounded(
    a: &FiniteAlgebra,
    bound: usize,
) -> Result<Vec<Partition>, CongruenceError> {
    check_bound(a, bound)?;
    let mut out = Vec::new();
    for_each_partition(a.size(), |labels| {
        let p = Partition {
            labels: labels.to_vec(),
        };
        if p.is_congruence_of(a) {
            out.push(p);
        }
    });
    Ok(out)
}

/// Complementary pair `(θ, θ′)`: `θ ∧ θ′ = Δ`, `θ ∘ θ′ = ∇`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorPair {
    pub theta: Partition,
    pub theta_prime: Partition,
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.blocks().serialize(s)
    }
}

impl FactorPair {
    pub fn is_trivial(&self) -> bool {
        self.theta.is_identity() || self.theta_prime.is_identity()
    }

    /// `x ↦ (x/θ, x/θ′)`, a bijection onto the pairs of blocks.
    pub fn decomposition_map(&self) -> Vec<(usize, usize)> {
        (0..self.theta.size())
            .map(|x| (self.theta.block_of(x), self.theta_prime.block_of(x)))
            .collect()
    }
}

pub fn factor_pairs(a: &FiniteAlgebra) -> Result<Vec<FactorPair>, CongruenceError> {
    let congs = all_congruences(a)?;
    let mut out = Vec::new();
    for t in &congs {
        for tp in &congs {
            if t.complements(tp) {
                out.push(FactorPair {
                    theta: t.clone(),
                    theta_prime: tp.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// Complementary central tuples `(e⃗, f⃗)` with their factor pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CentralPair {
    pub e: Vec<Element>,
    pub f: Vec<Element>,
    #[serde(skip)]
    pub pair: FactorPair,
}

/// For each factor pair, the unique `e⃗ ≡ 0⃗ (θ)`, `e⃗ ≡ 1⃗ (θ′)` and
/// `f⃗ ≡ 1⃗ (θ)`, `f⃗ ≡ 0⃗ (θ′)`; deduplicated on `(e⃗, f⃗)`.
pub fn central_pairs(
    a: &FiniteAlgebra,
    zero: &[Element],
    one: &[Element],
) -> Result<Vec<CentralPair>, CongruenceError> {
    Ok(central_pairs_from(&factor_pairs(a)?, zero, one))
}

pub fn central_pairs_from(pairs: &[FactorPair], zero: &[Element], one: &[Element]) -> Vec<CentralPair> {
    let mut out: Vec<CentralPair> = Vec::new();
    for fp in pairs {
        let meet = |p: Element, q: Element| {
            (0..fp.theta.size())
                .find(|&x| fp.theta.related(x, p) && fp.theta_prime.related(x, q))
                .expect("complementary blocks intersect")
        };
        let e: Vec<Element> = zero.iter().zip(one).map(|(&z, &o)| meet(z, o)).collect();
        let f: Vec<Element> = zero.iter().zip(one).map(|(&z, &o)| meet(o, z)).collect();
        if !out.iter().any(|c| c.e == e && c.f == f) {
            out.push(CentralPair {
                e,
                f,
                pair: fp.clone(),
            });
        }
    }
    out
}

/// True iff `|A| ≥ 2` and the only factor pairs are `(Δ, ∇)`, `(∇, Δ)`.
pub fn is_directly_indecomposable(a: &FiniteAlgebra) -> Result<bool, CongruenceError> {
    check_bound(a, DEFAULT_CONGRUENCE_BOUND)?;
    if a.size() < 2 {
        return Ok(false);
    }
    Ok(factor_pairs(a)?.iter().all(FactorPair::is_trivial))
}

/// `A/θ` on the block indices of `theta`; operations act on block
/// representatives.
pub fn quotient(a: &FiniteAlgebra, theta: &Partition) -> Result<FiniteAlgebra, CongruenceError> {
    if theta.size() != a.size() || !theta.is_congruence_of(a) {
        return Err(CongruenceError::NotACongruence);
    }
    let reps: Vec<Element> = theta.blocks().iter().map(|b| b[0]).collect();
    let m = reps.len();
    let tables = a
        .arities()
        .iter()
        .enumerate()
        .map(|(sym, &arity)| {
            let mut table = Vec::new();
            for_each_assignment(m, arity, |args| {
                let lifted: Vec<Element> = args.iter().map(|&b| reps[b]).collect();
                table.push(theta.block_of(a.op(sym, &lifted)));
                true
            });
            table
        })
        .collect();
    Ok(FiniteAlgebra::new(m, a.arities().to_vec(), tables).expect("quotient tables are well-formed"))
}

/// Terms `p_1, …, p_k` over `x_1..x_n, u_1..u_m` (variables `0..n` then
/// `n..n+m`) and parameters `ū` witnessing `(a, b) ∈ Cg(ā, b̄)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MalcevChain {
    pub terms: Vec<Term>,
    pub params: Vec<Element>,
}

impl MalcevChain {
    pub fn k(&self) -> usize {
        self.terms.len()
    }

    /// Replays the four equation groups.
    pub fn verify(
        &self,
        alg: &FiniteAlgebra,
        a: Element,
        b: Element,
        pairs: &[(Element, Element)],
    ) -> bool {
        let k = self.terms.len();
        if k % 2 == 0 {
            return false;
        }
        let env = |left: bool| {
            let mut env: Vec<Element> = pairs.iter().map(|p| if left { p.0 } else { p.1 }).collect();
            env.extend_from_slice(&self.params);
            env
        };
        let (ea, eb) = (env(true), env(false));
        let at = |i: usize, e: &[Element]| alg.eval_term(&self.terms[i], e).ok();
        if at(0, &ea) != Some(a) || at(k - 1, &eb) != Some(b) {
            return false;
        }
        (0..k - 1).all(|i| {
            // 1-based odd i joins on b̄, even i on ā
            let e = if i % 2 == 0 { &eb } else { &ea };
            at(i, e).is_some() && at(i, e) == at(i + 1, e)
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct MalcevBounds {
    pub max_terms: usize,
    pub max_depth: usize,
    pub max_params: usize,
}

impl Default for MalcevBounds {
    fn default() -> Self {
        MalcevBounds {
            max_terms: 9,
            max_depth: 2,
            max_params: 2,
        }
    }
}

/// Bounded search for a Mal'cev chain. `Ok(None)` means nothing was found
/// within the bounds; a pair outside `Cg(pairs)` is an error.
pub fn extract_malcev_chain(
    alg: &FiniteAlgebra,
    a: Element,
    b: Element,
    pairs: &[(Element, Element)],
    bounds: MalcevBounds,
) -> Result<Option<MalcevChain>, CongruenceError> {
    let cg = congruence_generated(alg, pairs)?;
    if a >= alg.size() || b >= alg.size() {
        return Err(CongruenceError::OutOfRange(a.max(b)));
    }
    if !cg.related(a, b) {
        return Err(CongruenceError::NotInCongruence(a, b));
    }
    let n = alg.size();
    let mut best: Option<MalcevChain> = None;
    for m in 0..=bounds.max_params {
        for_each_assignment(n, m, |params| {
            let reach = reachable_pairs(alg, pairs, params, bounds.max_depth);
            if let Some(terms) = shortest_chain(&reach, a, b, bounds.max_terms) {
                if best.as_ref().is_none_or(|c| terms.len() < c.terms.len()) {
                    best = Some(MalcevChain {
                        terms,
                        params: params.to_vec(),
                    });
                }
            }
            // a one-term chain cannot be beaten
            best.as_ref().is_none_or(|c| c.terms.len() > 1)
        });
        if best.as_ref().is_some_and(|c| c.terms.len() == 1) {
            break;
        }
    }
    Ok(best)
}

/// Value pairs `(t(ā, ū), t(b̄, ū))` of terms up to `depth`, each with the
/// first term found producing it.
fn reachable_pairs(
    alg: &FiniteAlgebra,
    pairs: &[(Element, Element)],
    params: &[Element],
    depth: usize,
) -> Vec<((Element, Element), Term)> {
    let mut seen: HashMap<(Element, Element), usize> = HashMap::new();
    let mut out: Vec<((Element, Element), Term)> = Vec::new();
    let mut push = |v: (Element, Element), t: Term, out: &mut Vec<_>| {
        if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(v) {
            e.insert(out.len());
            out.push((v, t));
        }
    };
    for (i, &p) in pairs.iter().enumerate() {
        push(p, Term::Var(i), &mut out);
    }
    for (j, &u) in params.iter().enumerate() {
        push((u, u), Term::Var(pairs.len() + j), &mut out);
    }
    for (sym, &arity) in alg.arities().iter().enumerate() {
        if arity == 0 {
            let c = alg.op(sym, &[]);
            push((c, c), Term::constant(sym), &mut out);
        }
    }
    let mut prev_start = 0;
    let mut left = Vec::new();
    let mut right = Vec::new();
    for _ in 0..depth {
        let level_end = out.len();
        let snapshot: Vec<((Element, Element), Term)> = out.clone();
        for (sym, &arity) in alg.arities().iter().enumerate() {
            if arity == 0 {
                continue;
            }
            for_each_assignment(level_end, arity, |idx| {
                if idx.iter().all(|&i| i < prev_start) {
                    return true;
                }
                left.clear();
                right.clear();
                for &i in idx {
                    left.push(snapshot[i].0 .0);
                    right.push(snapshot[i].0 .1);
                }
                let v = (alg.op(sym, &left), alg.op(sym, &right));
                let t = Term::app(sym, idx.iter().map(|&i| snapshot[i].1.clone()).collect());
                push(v, t, &mut out);
                true
            });
        }
        prev_start = level_end;
        if out.len() == level_end {
            break;
        }
    }
    out
}

/// BFS over `(value, parity)`: odd positions join on the b̄-side value,
/// even positions on the ā-side value.
fn shortest_chain(
    reach: &[((Element, Element), Term)],
    a: Element,
    b: Element,
    max_terms: usize,
) -> Option<Vec<Term>> {
    // state: (value, next_joins_on_b) ; node = index of the term used last
    let mut prev: HashMap<(Element, bool), (Option<(Element, bool)>, usize)> = HashMap::new();
    let mut queue = VecDeque::new();
    for (i, ((s, t), _)) in reach.iter().enumerate() {
        if *s == a {
            let state = (*t, true);
            if let std::collections::hash_map::Entry::Vacant(e) = prev.entry(state) {
                e.insert((None, i));
                queue.push_back((state, 1usize));
            }
        }
    }
    while let Some((state, len)) = queue.pop_front() {
        let (v, on_b) = state;
        if on_b && v == b {
            let mut terms = Vec::new();
            let mut cur = Some(state);
            while let Some(s) = cur {
                let (p, i) = prev[&s];
                terms.push(reach[i].1.clone());
                cur = p;
            }
            terms.reverse();
            return Some(terms);
        }
        if len >= max_terms {
            continue;
        }
        for (i, ((s, t), _)) in reach.iter().enumerate() {
            let next = if on_b {
                (*t == v).then_some((*s, false))
            } else {
                (*s == v).then_some((*t, true))
            };
            if let Some(ns) = next {
                if let std::collections::hash_map::Entry::Vacant(e) = prev.entry(ns) {
                    e.insert((Some(state), i));
                    queue.push_back((ns, len + 1));
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meet_table(n: usize, meet: impl Fn(usize, usize) -> usize) -> Vec<usize> {
        (0..n * n).map(|i| meet(i / n, i % n)).collect()
    }

    fn chain(n: usize) -> FiniteAlgebra {
        FiniteAlgebra::new(n, vec![2, 0, 0], vec![meet_table(n, usize::min), vec![0], vec![n - 1]]).unwrap()
    }

    /// 0 < a=1, b=2 < 3
    fn diamond() -> FiniteAlgebra {
        let meet = |x: usize, y: usize| match (x, y) {
            _ if x == y => x,
            (3, y) => y,
            (x, 3) => x,
            _ => 0,
        };
        FiniteAlgebra::new(4, vec![2, 0, 0], vec![meet_table(4, meet), vec![0], vec![3]]).unwrap()
    }

    /// Oracle: brute-force check of compatibility for an arbitrary labeling.
    fn compatible(a: &FiniteAlgebra, labels: &[usize]) -> bool {
        let n = a.size();
        (0..n * n).all(|i| {
            let (x, y) = (i / n, i % n);
            (0..n * n).all(|j| {
                let (u, v) = (j / n, j % n);
                labels[x] != labels[u] || labels[y] != labels[v] || labels[a.op(0, &[x, y])] == labels[a.op(0, &[u, v])]
            })
        })
    }

    #[test]
    fn empty_generators_give_identity() {
        assert!(congruence_generated(&diamond(), &[]).unwrap().is_identity());
    }

    /// Oracle: the least compatible labeling relating `x` and `y`, by
    /// filtering every partition.
    fn least_congruence_with(a: &FiniteAlgebra, x: usize, y: usize) -> Vec<Vec<usize>> {
        let mut found: Vec<Vec<usize>> = Vec::new();
        for_each_partition(a.size(), |l| {
            if l[x] == l[y] && compatible(a, l) {
                found.push(l.to_vec());
            }
        });
        let refines = |p: &[usize], q: &[usize]| {
            (0..p.len()).all(|i| (0..p.len()).all(|j| p[i] != p[j] || q[i] == q[j]))
        };
        let least = found.iter().find(|p| found.iter().all(|q| refines(p, q))).unwrap();
        Partition::from_keys(least).blocks()
    }

    #[test]
    fn atom_to_bottom_in_diamond() {
        // Meets alone cannot push {0, a} up to {b, 1}: the generated
        // congruence is strictly below the projection kernel.
        let p = congruence_generated(&diamond(), &[(0, 1)]).unwrap();
        assert_eq!(p.blocks(), least_congruence_with(&diamond(), 0, 1));
        assert_eq!(p.blocks(), vec![vec![0, 1], vec![2], vec![3]]);
        let kernel = Partition::from_keys(&[0, 0, 1, 1]);
        assert!(p.refines(&kernel) && kernel.is_congruence_of(&diamond()));
    }

    #[test]
    fn zero_one_generates_everything() {
        for a in [chain(2), chain(3), diamond()] {
            assert!(congruence_generated(&a, &[(0, a.size() - 1)]).unwrap().is_universal());
        }
    }

    #[test]
    fn two_element_algebras_have_two_congruences() {
        let c = all_congruences(&chain(2)).unwrap();
        assert_eq!(c, vec![Partition::universal(2), Partition::identity(2)]);
    }

    #[test]
    fn three_chain_congruences_match_filter() {
        let a = chain(3);
        let got = all_congruences(&a).unwrap();
        let mut expected = Vec::new();
        for_each_partition(3, |l| {
            if compatible(&a, l) {
                expected.push(l.to_vec());
            }
        });
        assert_eq!(got.iter().map(|p| p.labels().to_vec()).collect::<Vec<_>>(), expected);
        // Δ, ∇ and the two order-convex splits {0}{1,2}, {0,1}{2}
        assert_eq!(got.len(), 4);
    }

    #[test]
    fn diamond_factor_pairs() {
        let fps = factor_pairs(&diamond()).unwrap();
        assert_eq!(fps.len(), 4);
        assert!(fps.iter().any(|p| p.theta.is_identity() && p.theta_prime.is_universal()));
        let kernels: Vec<_> = fps.iter().filter(|p| !p.is_trivial()).collect();
        assert_eq!(kernels.len(), 2);
        assert_eq!(kernels[0].theta.blocks(), vec![vec![0, 1], vec![2, 3]]);
        assert!(!is_directly_indecomposable(&diamond()).unwrap());
    }

    #[test]
    fn diamond_quotients_are_two_chains() {
        let a = diamond();
        for fp in factor_pairs(&a).unwrap().iter().filter(|p| !p.is_trivial()) {
            for theta in [&fp.theta, &fp.theta_prime] {
                let q = quotient(&a, theta).unwrap();
                assert_eq!(q, chain(2));
            }
        }
        let not_cong = Partition::from_keys(&[0, 1, 1, 0]);
        assert_eq!(quotient(&a, &not_cong), Err(CongruenceError::NotACongruence));
    }

    #[test]
    fn chains_are_indecomposable() {
        assert_eq!(factor_pairs(&chain(2)).unwrap().len(), 2);
        assert!(is_directly_indecomposable(&chain(2)).unwrap());
        assert!(is_directly_indecomposable(&chain(4)).unwrap());
        assert!(!is_directly_indecomposable(&chain(1)).unwrap());
    }

    #[test]
    fn diamond_central_elements() {
        let cps = central_pairs(&diamond(), &[0], &[3]).unwrap();
        let mut got: Vec<_> = cps.iter().map(|c| (c.e[0], c.f[0])).collect();
        got.sort();
        assert_eq!(got, vec![(0, 3), (1, 2), (2, 1), (3, 0)]);
    }

    #[test]
    fn indecomposable_central_pairs() {
        let cps = central_pairs(&chain(3), &[0], &[2]).unwrap();
        let got: Vec<_> = cps.iter().map(|c| (c.e.clone(), c.f.clone())).collect();
        assert_eq!(got.len(), 2);
        assert!(got.contains(&(vec![0], vec![2])) && got.contains(&(vec![2], vec![0])));
    }

    #[test]
    fn trivial_algebra_central_pair_degenerates() {
        let cps = central_pairs(&chain(1), &[0], &[0]).unwrap();
        assert_eq!(cps.len(), 1);
        assert_eq!((cps[0].e.clone(), cps[0].f.clone()), (vec![0], vec![0]));
    }

    #[test]
    fn size_bound_enforced() {
        assert!(matches!(all_congruences(&chain(8)), Err(CongruenceError::SizeBound { .. })));
    }

    #[test]
    fn malcev_equal_elements() {
        let a = chain(3);
        let c = extract_malcev_chain(&a, 1, 1, &[(0, 2)], MalcevBounds::default()).unwrap().unwrap();
        assert_eq!(c.k(), 1);
        assert!(c.verify(&a, 1, 1, &[(0, 2)]));
    }

    #[test]
    fn malcev_against_the_order() {
        // (1, 0) ∈ Cg(0, 1) in the 2-chain needs a genuine zigzag: k = 3
        let a = chain(2);
        let c = extract_malcev_chain(&a, 1, 0, &[(0, 1)], MalcevBounds::default()).unwrap().unwrap();
        assert_eq!(c.k(), 3);
        assert!(c.verify(&a, 1, 0, &[(0, 1)]));
    }

    #[test]
    fn malcev_in_diamond() {
        let a = diamond();
        for (x, y) in [(3, 0), (0, 3), (2, 1), (1, 2)] {
            let c = extract_malcev_chain(&a, x, y, &[(0, 3)], MalcevBounds::default()).unwrap().unwrap();
            assert!(c.verify(&a, x, y, &[(0, 3)]), "{x} {y}");
        }
    }

    #[test]
    fn malcev_bounds_and_precondition() {
        let a = chain(2);
        let tight = MalcevBounds {
            max_terms: 1,
            max_depth: 0,
            max_params: 0,
        };
        assert_eq!(extract_malcev_chain(&a, 1, 0, &[(0, 1)], tight).unwrap(), None);
        assert_eq!(
            extract_malcev_chain(&a, 1, 0, &[], tight),
            Err(CongruenceError::NotInCongruence(1, 0))
        );
    }
}
