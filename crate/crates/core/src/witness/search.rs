use std::collections::{HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use super::{ConnectionTerms, SemidegeneracyTerms};
use crate::algebra::{for_each_assignment, AlgebraError, Element, FiniteAlgebra, Identity, Presentation, Signature, Term};
use crate::congruence::congruence_generated;
use crate::search::{collect_models_up_to, Budget, Filters, SearchError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("the signature has no constant symbol, so closed terms 0⃗ and 1⃗ cannot be formed")]
    NoConstant,
    #[error("term pool exceeded {0} distinct terms")]
    PoolLimit(usize),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Outcome of a bounded identity check. Never a claim of validity in the
/// whole variety.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum IdentityVerdict {
    Refuted {
        #[serde(skip)]
        model: FiniteAlgebra,
        size: usize,
        assignment: Vec<Element>,
    },
    NoCounterexampleUpTo {
        bound: usize,
    },
    /// Exported for an external prover; carries the TPTP problem text.
    ExternallyProvable {
        tptp: String,
    },
}

impl IdentityVerdict {
    pub fn is_refuted(&self) -> bool {
        matches!(self, IdentityVerdict::Refuted { .. })
    }
}

/// All models of a presentation up to a size bound (one per isomorphism
/// class; identities are isomorphism invariant).
#[derive(Clone, Debug)]
pub struct ModelCache {
    pub bound: usize,
    pub models: Vec<FiniteAlgebra>,
}

impl ModelCache {
    pub fn build(p: &Presentation, bound: usize, budget: Budget) -> Result<Self, SearchError> {
        let models = collect_models_up_to(p, bound, true, Filters::NONE, budget)?;
        Ok(ModelCache { bound, models })
    }

    /// The first model (in size, then table order) violating `id`.
    pub fn check(&self, id: &Identity) -> Result<IdentityVerdict, AlgebraError> {
        for m in &self.models {
            if let Some(assignment) = m.find_violation(id)? {
                return Ok(IdentityVerdict::Refuted {
                    model: m.clone(),
                    size: m.size(),
                    assignment,
                });
            }
        }
        Ok(IdentityVerdict::NoCounterexampleUpTo { bound: self.bound })
    }
}

pub fn identity_valid_bounded(
    p: &Presentation,
    id: &Identity,
    size_bound: usize,
    budget: Budget,
) -> Result<IdentityVerdict, WitnessError> {
    id.check(&p.signature)?;
    let cache = ModelCache::build(p, size_bound, budget)?;
    Ok(cache.check(id)?)
}

#[derive(Clone, Copy, Debug)]
pub struct WitnessBounds {
    pub max_len: usize,
    pub max_depth: usize,
    pub size_bound: usize,
    /// Cap on distinct terms kept per pool.
    pub max_terms: usize,
}

impl Default for WitnessBounds {
    fn default() -> Self {
        WitnessBounds {
            max_len: 5,
            max_depth: 2,
            size_bound: 4,
            max_terms: 20_000,
        }
    }
}

/// Terms over `vars` variables, enumerated by depth (counting application
/// nodes), then symbol, then
/// argument tuple, and deduplicated by their value vectors over every
/// assignment in every cached model.
struct TermPool {
    terms: Vec<Term>,
    vecs: Vec<Vec<Element>>,
    /// (model index, offset into vectors, number of assignments)
    layout: Vec<(usize, usize, usize)>,
    len: usize,
}

impl TermPool {
    fn build(
        models: &[FiniteAlgebra],
        sig: &Signature,
        vars: usize,
        max_depth: usize,
        max_terms: usize,
    ) -> Result<Self, WitnessError> {
        let mut layout = Vec::new();
        let mut len = 0;
        for (i, m) in models.iter().enumerate() {
            let count = m.size().pow(vars as u32);
            layout.push((i, len, count));
            len += count;
        }
        let mut pool = TermPool {
            terms: Vec::new(),
            vecs: Vec::new(),
            layout,
            len,
        };
        let mut seen: HashMap<Vec<Element>, usize> = HashMap::new();
        // variables always occupy indices 0..vars, even when they collide
        for x in 0..vars {
            let mut v = Vec::with_capacity(len);
            for m in models {
                for_each_assignment(m.size(), vars, |env| {
                    v.push(env[x]);
                    true
                });
            }
            seen.entry(v.clone()).or_insert(pool.terms.len());
            pool.vecs.push(v);
            pool.terms.push(Term::Var(x));
        }
        let mut add = |pool: &mut TermPool, t: Term, v: Vec<Element>| -> Result<(), WitnessError> {
            if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(v) {
                if pool.terms.len() >= max_terms {
                    return Err(WitnessError::PoolLimit(max_terms));
                }
                pool.vecs.push(e.key().clone());
                e.insert(pool.terms.len());
                pool.terms.push(t);
            }
            Ok(())
        };
        let mut prev_start = 0;
        let mut args = Vec::new();
        // Depth counts application nodes, so constants sit at depth 1 next
        // to the other symbols, in declaration order.
        for depth in 0..max_depth {
            let level_end = pool.terms.len();
            for (sym, s) in sig.symbols().iter().enumerate() {
                if s.arity == 0 {
                    if depth == 0 {
                        let v = pool.map_models(models, |m, _| m.op(sym, &[]));
                        add(&mut pool, Term::constant(sym), v)?;
                    }
                    continue;
                }
                let mut result = Ok(());
                for_each_assignment(level_end, s.arity, |idx| {
                    if idx.iter().all(|&i| i < prev_start) {
                        return true;
                    }
                    let v = pool.map_models(models, |m, pos| {
                        args.clear();
                        args.extend(idx.iter().map(|&i| pool.vecs[i][pos]));
                        m.op(sym, &args)
                    });
                    let t = Term::app(sym, idx.iter().map(|&i| pool.terms[i].clone()).collect());
                    result = add(&mut pool, t, v);
                    result.is_ok()
                });
                result?;
            }
            if pool.terms.len() == level_end {
                break;
            }
            prev_start = level_end;
        }
        Ok(pool)
    }

    /// Builds a vector position by position; `f` gets the model and the
    /// global position.
    fn map_models(&self, models: &[FiniteAlgebra], mut f: impl FnMut(&FiniteAlgebra, usize) -> Element) -> Vec<Element> {
        let mut v = Vec::with_capacity(self.len);
        for &(mi, off, count) in &self.layout {
            for pos in off..off + count {
                v.push(f(&models[mi], pos));
            }
        }
        v
    }
}

/// Least connection witness: smallest `n`, then the lexicographically least
/// zigzag of pool indices. The identities are then re-verified at the bound.
#[derive(Clone, Debug)]
pub struct ConnectionSearch {
    pub terms: ConnectionTerms,
    pub verdicts: Vec<(Identity, IdentityVerdict)>,
}

pub fn find_connection_terms(
    p: &Presentation,
    max_n: usize,
    max_depth: usize,
    size_bound: usize,
    budget: Budget,
) -> Result<Option<ConnectionSearch>, WitnessError> {
    let cache = ModelCache::build(p, size_bound, budget)?;
    find_connection_terms_in(p, &cache, max_n, max_depth, WitnessBounds::default().max_terms)
}

pub fn find_connection_terms_in(
    p: &Presentation,
    cache: &ModelCache,
    max_n: usize,
    max_depth: usize,
    max_terms: usize,
) -> Result<Option<ConnectionSearch>, WitnessError> {
    let sig = &p.signature;
    let g = sig.require_groupoid()?.clone();
    let pool = TermPool::build(&cache.models, sig, 2, max_depth, max_terms)?;
    let t = pool.terms.len();
    // below[a * t + b]: a · b ≈ a on every position
    let mut below = vec![false; t * t];
    for a in 0..t {
        for b in 0..t {
            below[a * t + b] = pool.layout.iter().all(|&(mi, off, count)| {
                let m = &cache.models[mi];
                (off..off + count).all(|pos| {
                    let (va, vb) = (pool.vecs[a][pos], pool.vecs[b][pos]);
                    m.eval_fast(&g, &[va, vb]) == va
                })
            });
        }
    }
    let leq = |a: usize, b: usize| below[a * t + b];
    // pool indices 0 and 1 are x and y
    let (x, y) = (0, 1);
    let adjacent = |a: usize, b: usize| (0..t).any(|u| leq(a, u) && leq(b, u));
    let mut dist = vec![usize::MAX; t];
    let mut queue = VecDeque::new();
    for m in 0..t {
        if leq(m, y) {
            dist[m] = 0;
            queue.push_back(m);
        }
    }
    while let Some(m) = queue.pop_front() {
        for q in 0..t {
            if dist[q] == usize::MAX && adjacent(q, m) {
                dist[q] = dist[m] + 1;
                queue.push_back(q);
            }
        }
    }
    let Some(start) = (0..t)
        .filter(|&m| leq(m, x) && dist[m] != usize::MAX)
        .min_by_key(|&m| (dist[m], m))
    else {
        return Ok(None);
    };
    if dist[start] + 1 > max_n {
        return Ok(None);
    }
    let mut chain = vec![start];
    let mut cur = start;
    while dist[cur] > 0 {
        let (u, next) = (0..t)
            .filter(|&u| leq(cur, u))
            .find_map(|u| (0..t).find(|&q| dist[q] == dist[cur] - 1 && leq(q, u)).map(|q| (u, q)))
            .expect("consistent distances");
        chain.push(u);
        chain.push(next);
        cur = next;
    }
    let terms = ConnectionTerms::new(chain.iter().map(|&i| pool.terms[i].clone()).collect())?;
    let verdicts = terms
        .identities(sig)
        .into_iter()
        .map(|id| cache.check(&id).map(|v| (id, v)))
        .collect::<Result<_, _>>()?;
    Ok(Some(ConnectionSearch { terms, verdicts }))
}

#[derive(Clone, Debug)]
pub struct SemidegeneracySearch {
    pub terms: SemidegeneracyTerms,
    pub verdicts: Vec<(Identity, IdentityVerdict)>,
}

/// Searches `l = 1, 2, …`, then shortest `k`, then the closed tuples
/// `(0⃗, 1⃗)` in pool order, then the chain.
pub fn find_semidegeneracy_witnesses(
    p: &Presentation,
    bounds: WitnessBounds,
    max_l: usize,
    budget: Budget,
) -> Result<Option<SemidegeneracySearch>, WitnessError> {
    if !p.signature.has_constant() {
        return Err(WitnessError::NoConstant);
    }
    let cache = ModelCache::build(p, bounds.size_bound, budget)?;
    find_semidegeneracy_witnesses_in(p, &cache, bounds, max_l)
}

pub fn find_semidegeneracy_witnesses_in(
    p: &Presentation,
    cache: &ModelCache,
    bounds: WitnessBounds,
    max_l: usize,
) -> Result<Option<SemidegeneracySearch>, WitnessError> {
    let sig = &p.signature;
    if !sig.has_constant() {
        return Err(WitnessError::NoConstant);
    }
    let models = &cache.models;
    let closed = TermPool::build(models, sig, 0, bounds.max_depth, bounds.max_terms)?;
    let c = closed.terms.len();
    for l in 1..=max_l {
        let chain_pool = TermPool::build(models, sig, 2 + l, bounds.max_depth, bounds.max_terms)?;
        let mut best: Option<(usize, Vec<usize>, Vec<usize>, Vec<usize>)> = None;
        // tuples of closed-term indices, lexicographically: 0⃗ then 1⃗
        for_each_assignment(c, 2 * l, |tuple| {
            let (zero, one) = tuple.split_at(l);
            if let Some(chain) = shortest_u_chain(models, &closed, &chain_pool, zero, one, bounds.max_len) {
                if best.as_ref().is_none_or(|b| chain.len() < b.0) {
                    best = Some((chain.len(), zero.to_vec(), one.to_vec(), chain));
                }
            }
            // nothing beats a one-term chain
            best.as_ref().is_none_or(|b| b.0 > 1)
        });
        if let Some((_, zero, one, chain)) = best {
            let terms = SemidegeneracyTerms::new(
                zero.iter().map(|&i| closed.terms[i].clone()).collect(),
                one.iter().map(|&i| closed.terms[i].clone()).collect(),
                chain.iter().map(|&i| chain_pool.terms[i].clone()).collect(),
            )?;
            let verdicts = terms
                .identities()
                .into_iter()
                .map(|id| cache.check(&id).map(|v| (id, v)))
                .collect::<Result<_, _>>()?;
            return Ok(Some(SemidegeneracySearch { terms, verdicts }));
        }
    }
    Ok(None)
}

/// BFS over binary value vectors: odd positions of the chain join on the
/// `1⃗` side, even ones on the `0⃗` side.
fn shortest_u_chain(
    models: &[FiniteAlgebra],
    closed: &TermPool,
    pool: &TermPool,
    zero: &[usize],
    one: &[usize],
    max_len: usize,
) -> Option<Vec<usize>> {
    // per model: values of 0⃗ and 1⃗
    let consts = |sel: &[usize], mi: usize| -> Vec<Element> {
        let (_, off, _) = closed.layout[mi];
        sel.iter().map(|&i| closed.vecs[i][off]).collect()
    };
    // binary projections U(x, y, c⃗) for every pool term
    let project = |t: usize, sel: &[usize]| -> Vec<Element> {
        let mut out = Vec::new();
        for (mi, m) in models.iter().enumerate() {
            let n = m.size();
            let c = consts(sel, mi);
            let (_, off, _) = pool.layout[mi];
            for x in 0..n {
                for y in 0..n {
                    let mut pos = x * n + y;
                    for &ci in &c {
                        pos = pos * n + ci;
                    }
                    out.push(pool.vecs[t][off + pos]);
                }
            }
        }
        out
    };
    let t = pool.terms.len();
    let at0: Vec<Vec<Element>> = (0..t).map(|i| project(i, zero)).collect();
    let at1: Vec<Vec<Element>> = (0..t).map(|i| project(i, one)).collect();
    let (xv, yv) = (project(0, zero), project(1, zero));
    let mut ids: HashMap<&[Element], usize> = HashMap::new();
    let mut vec_of = Vec::new();
    for v in at0.iter().chain(&at1) {
        let next = ids.len();
        if let std::collections::hash_map::Entry::Vacant(e) = ids.entry(v.as_slice()) {
            e.insert(next);
            vec_of.push(v.as_slice());
        }
    }
    let id_of = |v: &[Element]| ids.get(v).copied();
    let a0: Vec<usize> = at0.iter().map(|v| ids[v.as_slice()]).collect();
    let a1: Vec<usize> = at1.iter().map(|v| ids[v.as_slice()]).collect();
    let (Some(x), Some(y)) = (id_of(&xv), id_of(&yv)) else {
        return None;
    };
    // state: (vector id, next join on the 1⃗ side?)
    let mut prev: HashMap<(usize, bool), (Option<(usize, bool)>, usize)> = HashMap::new();
    let mut queue = VecDeque::new();
    for u in 0..t {
        if a0[u] == x {
            let s = (a1[u], true);
            if let std::collections::hash_map::Entry::Vacant(e) = prev.entry(s) {
                e.insert((None, u));
                queue.push_back((s, 1));
            }
        }
    }
    while let Some((s, len)) = queue.pop_front() {
        if s.1 && s.0 == y {
            let mut chain = Vec::new();
            let mut cur = Some(s);
            while let Some(c) = cur {
                let (p, u) = prev[&c];
                chain.push(u);
                cur = p;
            }
            chain.reverse();
            return Some(chain);
        }
        if len + 2 > max_len {
            continue;
        }
        for u in 0..t {
            let next = if s.1 {
                (a1[u] == s.0).then_some((a0[u], false))
            } else {
                (a0[u] == s.0).then_some((a1[u], true))
            };
            if let Some(ns) = next {
                if let std::collections::hash_map::Entry::Vacant(e) = prev.entry(ns) {
                    e.insert((Some(s), u));
                    queue.push_back((ns, len + 1));
                }
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EvidenceViolation {
    /// `Cg(0⃗, 1⃗)` is not the universal congruence.
    NotUniversal { model: usize, blocks: usize },
    /// `{element}` is a one-element subalgebra of a nontrivial model.
    TrivialSubalgebra { model: usize, element: Element },
}

#[derive(Clone, Debug, Serialize)]
pub struct EvidenceReport {
    pub bound: usize,
    pub checked: usize,
    pub skipped_trivial: usize,
    pub violations: Vec<EvidenceViolation>,
    #[serde(skip)]
    pub models: Vec<FiniteAlgebra>,
}

impl EvidenceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `{a}` is closed under every operation.
pub fn trivial_subuniverses(a: &FiniteAlgebra) -> Vec<Element> {
    (0..a.size())
        .filter(|&e| {
            a.arities().iter().enumerate().all(|(s, &m)| a.op(s, &vec![e; m]) == e)
        })
        .collect()
}

/// For every nontrivial model up to the bound: `Cg(0⃗, 1⃗) = ∇` and no
/// one-element subalgebra.
pub fn check_semidegeneracy_evidence(
    p: &Presentation,
    zero: &[Term],
    one: &[Term],
    size_bound: usize,
    budget: Budget,
) -> Result<EvidenceReport, WitnessError> {
    for t in zero.iter().chain(one) {
        t.check(&p.signature)?;
        if !t.is_closed() {
            return Err(AlgebraError::Witness("0⃗ and 1⃗ must be closed terms".into()).into());
        }
    }
    let cache = ModelCache::build(p, size_bound, budget)?;
    let mut report = EvidenceReport {
        bound: size_bound,
        checked: 0,
        skipped_trivial: 0,
        violations: Vec::new(),
        models: Vec::new(),
    };
    for m in cache.models {
        if m.size() < 2 {
            report.skipped_trivial += 1;
            continue;
        }
        let idx = report.models.len();
        report.checked += 1;
        let pairs: Vec<(Element, Element)> = zero
            .iter()
            .zip(one)
            .map(|(z, o)| Ok((m.eval_term(z, &[])?, m.eval_term(o, &[])?)))
            .collect::<Result<_, AlgebraError>>()?;
        let cg = congruence_generated(&m, &pairs).expect("closed values in range");
        if !cg.is_universal() {
            report.violations.push(EvidenceViolation::NotUniversal {
                model: idx,
                blocks: cg.num_blocks(),
            });
        }
        for e in trivial_subuniverses(&m) {
            report.violations.push(EvidenceViolation::TrivialSubalgebra { model: idx, element: e });
        }
        report.models.push(m);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_presentation;

    const BSL: &str = "sig mul/2 0/0 1/0\nid x * y * z = x * (y * z)\nid x * y = y * x\nid x * x = x\nid x * 0 = 0\nid x * 1 = x\n";

    fn id(p: &Presentation, text: &str) -> Identity {
        let q = parse_presentation(&format!("{}id {text}\n", p.to_spec_text())).unwrap();
        q.identities.last().unwrap().clone()
    }

    #[test]
    fn commutativity_refuted_in_groupoids() {
        let p = parse_presentation("sig mul/2\n").unwrap();
        let v = identity_valid_bounded(&p, &id(&p, "x * y = y * x"), 2, Budget::unlimited()).unwrap();
        let IdentityVerdict::Refuted { model, assignment, .. } = v else { panic!() };
        assert!(!model.holds_identity(&id(&p, "x * y = y * x")).unwrap());
        let comm = id(&p, "x * y = y * x");
        assert_ne!(model.eval_term(&comm.lhs, &assignment), model.eval_term(&comm.rhs, &assignment));
    }

    #[test]
    fn bsl_connection_terms() {
        let p = parse_presentation(BSL).unwrap();
        let r = find_connection_terms(&p, 3, 2, 4, Budget::unlimited()).unwrap().unwrap();
        assert_eq!(r.terms.n(), 1);
        assert_eq!(format!("{}", r.terms.terms()[0].display(&p.signature, &["x".into(), "y".into()])), "x * y");
        assert!(r.verdicts.iter().all(|(_, v)| !v.is_refuted()));
    }

    #[test]
    fn right_zero_has_no_connection() {
        let p = parse_presentation("sig mul/2\nid x * y = y\n").unwrap();
        assert!(find_connection_terms(&p, 4, 3, 3, Budget::unlimited()).unwrap().is_none());
    }

    #[test]
    fn bsl_semidegeneracy() {
        let p = parse_presentation(BSL).unwrap();
        let r = find_semidegeneracy_witnesses(&p, WitnessBounds::default(), 2, Budget::unlimited())
            .unwrap()
            .unwrap();
        let sig = &p.signature;
        let names = r.terms.chain_var_names();
        let shown: Vec<String> = r.terms.chain().iter().map(|t| t.display(sig, &names).to_string()).collect();
        assert_eq!(shown, ["x", "x * z", "y * z"]);
        assert_eq!(r.terms.zero()[0].display(sig, &[]).to_string(), "0");
        assert_eq!(r.terms.one()[0].display(sig, &[]).to_string(), "1");
        assert!(r.verdicts.iter().all(|(_, v)| !v.is_refuted()));
    }

    #[test]
    fn trivial_variety_semidegeneracy() {
        let p = parse_presentation("sig mul/2 0/0\nid x = y\n").unwrap();
        let r = find_semidegeneracy_witnesses(&p, WitnessBounds::default(), 1, Budget::unlimited())
            .unwrap()
            .unwrap();
        assert_eq!(r.terms.k(), 1);
        assert_eq!(r.terms.chain()[0], Term::Var(0));
    }

    #[test]
    fn no_constant_is_an_error() {
        let p = parse_presentation("sig mul/2\nid x * x = x\n").unwrap();
        assert_eq!(
            find_semidegeneracy_witnesses(&p, WitnessBounds::default(), 1, Budget::unlimited()).unwrap_err(),
            WitnessError::NoConstant
        );
    }

    #[test]
    fn evidence() {
        let p = parse_presentation(BSL).unwrap();
        let (z, o) = (Term::constant(1), Term::constant(2));
        let r = check_semidegeneracy_evidence(&p, &[z], &[o], 4, Budget::unlimited()).unwrap();
        assert!(r.passed());
        assert_eq!(r.skipped_trivial, 1);
        let p0 = parse_presentation("sig mul/2 0/0\nid x * y * z = x * (y * z)\nid x * y = y * x\nid x * x = x\nid x * 0 = 0\n").unwrap();
        let zero = Term::constant(1);
        let r = check_semidegeneracy_evidence(&p0, &[zero.clone()], &[zero], 2, Budget::unlimited()).unwrap();
        assert!(r.violations.contains(&EvidenceViolation::TrivialSubalgebra { model: 0, element: 0 }));
    }
}
