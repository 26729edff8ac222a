//! First-order formulas over an algebraic signature with equality, grouped
//! into books of named definitions that call each other.

mod build;
mod eval;
mod prenex;
mod print;
mod tptp;

pub use build::{
    build_centrality_suite, build_main_sentence, build_phi, build_pi, build_psi, build_psi_schema,
    build_zeta, check_r_identities, GeneralPhi, Indexing, Orientation, PhiVariant, WMode,
    SUITE_NAMES,
};
pub use eval::{eval_formula, EvalError, Evaluator, DEFAULT_EVAL_BUDGET};
pub use prenex::{
    classify_prenex, classify_prenex_constructive, prenex_form, PrenexClass, PrenexFormula, Quantifier,
};
pub use print::{DefinitionDisplay, FormulaJson, NodeJson};
pub use tptp::{export_identities_tptp, export_tptp, tptp_name, tptp_text, TptpItem, TptpRole};

use std::collections::BTreeSet;

use thiserror::Error;

use crate::algebra::{AlgebraError, Signature, Term};

pub type VarId = usize;
pub type DefId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("connection terms m_i are required to build {0}")]
    MissingConnection(&'static str),
    #[error("semidegeneracy terms 0⃗, 1⃗, U_i are required to build {0}")]
    MissingSemidegeneracy(&'static str),
    #[error("the R-variant needs x·y·z ≈ y·x·z, associativity and idempotence; refuted: {0}")]
    NotRVariety(String),
    #[error("definition `{name}` has free variable `{var}` that is not a parameter")]
    FreeVariable { name: String, var: String },
    #[error("call to `{name}` with {got} arguments, expected {expected}")]
    CallArity { name: String, expected: usize, got: usize },
    #[error("unknown definition `{0}`")]
    UnknownDefinition(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Eq(Term, Term),
    /// Instance of another definition of the book.
    Call(DefId, Vec<Term>),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(Vec<VarId>, Box<Formula>),
    Exists(Vec<VarId>, Box<Formula>),
}

impl Formula {
    pub fn eq(a: Term, b: Term) -> Self {
        Formula::Eq(a, b)
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// Conjunction; a single conjunct is returned as is.
    pub fn and(mut fs: Vec<Formula>) -> Self {
        if fs.len() == 1 {
            fs.pop().unwrap()
        } else {
            Formula::And(fs)
        }
    }

    pub fn or(mut fs: Vec<Formula>) -> Self {
        if fs.len() == 1 {
            fs.pop().unwrap()
        } else {
            Formula::Or(fs)
        }
    }

    /// `∀vars f`; an empty block is dropped.
    pub fn forall(vars: Vec<VarId>, f: Formula) -> Self {
        if vars.is_empty() {
            f
        } else {
            Formula::Forall(vars, Box::new(f))
        }
    }

    pub fn exists(vars: Vec<VarId>, f: Formula) -> Self {
        if vars.is_empty() {
            f
        } else {
            Formula::Exists(vars, Box::new(f))
        }
    }

    /// Free variables (call arguments included).
    pub fn free_vars(&self) -> BTreeSet<VarId> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<VarId>, out: &mut BTreeSet<VarId>) {
        let term_vars = |t: &Term, bound: &Vec<VarId>, out: &mut BTreeSet<VarId>| {
            for v in t.vars() {
                if !bound.contains(&v) {
                    out.insert(v);
                }
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Eq(a, b) => {
                term_vars(a, bound, out);
                term_vars(b, bound, out);
            }
            Formula::Call(_, args) => args.iter().for_each(|a| term_vars(a, bound, out)),
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_free(bound, out)),
            Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(vs, f) | Formula::Exists(vs, f) => {
                let mark = bound.len();
                bound.extend(vs);
                f.collect_free(bound, out);
                bound.truncate(mark);
            }
        }
    }

    /// Number of nodes, counting calls as one node.
    pub fn node_count(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Eq(..) | Formula::Call(..) => 1,
            Formula::Not(f) | Formula::Forall(_, f) | Formula::Exists(_, f) => 1 + f.node_count(),
            Formula::And(fs) | Formula::Or(fs) => 1 + fs.iter().map(Formula::node_count).sum::<usize>(),
            Formula::Implies(a, b) => 1 + a.node_count() + b.node_count(),
        }
    }

    pub(crate) fn calls(&self, out: &mut BTreeSet<DefId>) {
        match self {
            Formula::Call(d, _) => {
                out.insert(*d);
            }
            Formula::Not(f) | Formula::Forall(_, f) | Formula::Exists(_, f) => f.calls(out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.calls(out)),
            Formula::Implies(a, b) => {
                a.calls(out);
                b.calls(out);
            }
            _ => {}
        }
    }
}

/// `name(params) := body`. Variables are local indices into `var_names`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Definition {
    pub name: String,
    pub params: Vec<VarId>,
    pub var_names: Vec<String>,
    pub body: Formula,
}

impl Definition {
    pub fn arity(&self) -> usize {
        self.params.len()
    }

    pub fn param_names(&self) -> Vec<&str> {
        self.params.iter().map(|&p| self.var_names[p].as_str()).collect()
    }
}

/// Definitions in dependency order (callees before callers) plus the
/// designated root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaBook {
    pub signature: Signature,
    pub defs: Vec<Definition>,
    pub root: DefId,
}

impl FormulaBook {
    pub fn root(&self) -> &Definition {
        &self.defs[self.root]
    }

    pub fn def(&self, id: DefId) -> &Definition {
        &self.defs[id]
    }

    pub fn find(&self, name: &str) -> Option<DefId> {
        self.defs.iter().position(|d| d.name == name)
    }

    /// The same book with another root.
    pub fn rooted_at(&self, name: &str) -> Result<FormulaBook, FormulaError> {
        let root = self.find(name).ok_or_else(|| FormulaError::UnknownDefinition(name.into()))?;
        Ok(FormulaBook {
            root,
            ..self.clone()
        })
    }

    /// Definitions reachable from the root, in book order.
    pub fn reachable(&self) -> Vec<DefId> {
        let mut seen = BTreeSet::from([self.root]);
        let mut stack = vec![self.root];
        while let Some(d) = stack.pop() {
            let mut calls = BTreeSet::new();
            self.defs[d].body.calls(&mut calls);
            for c in calls {
                if seen.insert(c) {
                    stack.push(c);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Scoping, call arities, and term well-formedness.
    pub fn check(&self) -> Result<(), FormulaError> {
        for (i, d) in self.defs.iter().enumerate() {
            for v in d.body.free_vars() {
                if !d.params.contains(&v) {
                    return Err(FormulaError::FreeVariable {
                        name: d.name.clone(),
                        var: d.var_names.get(v).cloned().unwrap_or_else(|| format!("#{v}")),
                    });
                }
            }
            self.check_node(i, &d.body)?;
        }
        Ok(())
    }

    fn check_node(&self, owner: DefId, f: &Formula) -> Result<(), FormulaError> {
        match f {
            Formula::True | Formula::False => Ok(()),
            Formula::Eq(a, b) => {
                a.check(&self.signature)?;
                Ok(b.check(&self.signature)?)
            }
            Formula::Call(d, args) => {
                let callee = self
                    .defs
                    .get(*d)
                    .filter(|_| *d < owner)
                    .ok_or_else(|| FormulaError::UnknownDefinition(format!("#{d}")))?;
                if callee.arity() != args.len() {
                    return Err(FormulaError::CallArity {
                        name: callee.name.clone(),
                        expected: callee.arity(),
                        got: args.len(),
                    });
                }
                args.iter().try_for_each(|a| a.check(&self.signature).map_err(Into::into))
            }
            Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => self.check_node(owner, g),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().try_for_each(|g| self.check_node(owner, g)),
            Formula::Implies(a, b) => {
                self.check_node(owner, a)?;
                self.check_node(owner, b)
            }
        }
    }

    /// The root body with every call expanded (bound variables renamed
    /// apart). Returns the formula and its variable names; the root's
    /// parameters keep their indices.
    pub fn inline_root(&self) -> (Formula, Vec<String>) {
        let root = self.root();
        let mut names = root.var_names.clone();
        let map: Vec<Term> = (0..root.var_names.len()).map(Term::Var).collect();
        let f = self.inline(&root.body, &map, &mut names);
        (f, names)
    }

    fn inline(&self, f: &Formula, map: &[Term], names: &mut Vec<String>) -> Formula {
        match f {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Eq(a, b) => Formula::Eq(a.substitute(map), b.substitute(map)),
            Formula::Call(d, args) => {
                let callee = &self.defs[*d];
                let mut inner: Vec<Term> = vec![Term::Var(usize::MAX); callee.var_names.len()];
                for (p, a) in callee.params.iter().zip(args) {
                    inner[*p] = a.substitute(map);
                }
                for (v, slot) in inner.iter_mut().enumerate() {
                    if *slot == Term::Var(usize::MAX) {
                        *slot = Term::Var(names.len());
                        names.push(callee.var_names[v].clone());
                    }
                }
                self.inline(&callee.body, &inner, names)
            }
            Formula::Not(g) => Formula::not(self.inline(g, map, names)),
            Formula::And(fs) => Formula::And(fs.iter().map(|g| self.inline(g, map, names)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|g| self.inline(g, map, names)).collect()),
            Formula::Implies(a, b) => Formula::implies(self.inline(a, map, names), self.inline(b, map, names)),
            Formula::Forall(vs, g) | Formula::Exists(vs, g) => {
                let vars: Vec<VarId> = vs.iter().map(|v| quantified_var(&map[*v])).collect();
                let body = self.inline(g, map, names);
                match f {
                    Formula::Forall(..) => Formula::Forall(vars, Box::new(body)),
                    _ => Formula::Exists(vars, Box::new(body)),
                }
            }
        }
    }
}

fn quantified_var(t: &Term) -> VarId {
    match t {
        Term::Var(v) => *v,
        _ => unreachable!("bound variables map to fresh variables"),
    }
}

#[cfg(test)]
mod tests;
