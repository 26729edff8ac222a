use std::cell::{Cell, OnceCell};
use std::time::Instant;

use thiserror::Error;

use crate::algebra::{Element, FiniteAlgebra};

use super::{DefId, Formula, FormulaBook, VarId};

pub const DEFAULT_EVAL_BUDGET: u64 = 20_000_000_000;

/// Definitions with more than this many argument tuples are not memoized.
const MEMO_LIMIT: usize = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("evaluation budget of {0} steps exhausted")]
    Budget(u64),
    #[error("wall-clock deadline passed during evaluation")]
    Deadline,
    #[error("algebra does not match the signature of the formula")]
    SignatureMismatch,
    #[error("`{name}` takes {expected} arguments, got {got}")]
    Arity { name: String, expected: usize, got: usize },
    #[error("element {0} outside the universe")]
    OutOfRange(Element),
}

/// Evaluates the definitions of a book in one finite algebra. With
/// memoization on, each definition's truth table over `A^arity` is filled
/// in on demand and every entry is computed at most once.
pub struct Evaluator<'a> {
    book: &'a FormulaBook,
    alg: &'a FiniteAlgebra,
    memo: Vec<OnceCell<Option<Vec<Cell<u8>>>>>,
    naive: bool,
    steps: Cell<u64>,
    budget: u64,
    deadline: Option<Instant>,
}

const UNKNOWN: u8 = 0;
const FALSE: u8 = 1;
const TRUE: u8 = 2;

impl<'a> Evaluator<'a> {
    pub fn new(book: &'a FormulaBook, alg: &'a FiniteAlgebra) -> Result<Self, EvalError> {
        if !alg.conforms_to(&book.signature) {
            return Err(EvalError::SignatureMismatch);
        }
        Ok(Evaluator {
            book,
            alg,
            memo: (0..book.defs.len()).map(|_| OnceCell::new()).collect(),
            naive: false,
            steps: Cell::new(0),
            budget: DEFAULT_EVAL_BUDGET,
            deadline: None,
        })
    }

    /// Re-evaluates every call from scratch.
    pub fn naive(mut self) -> Self {
        self.naive = true;
        self
    }

    pub fn with_budget(mut self, steps: u64) -> Self {
        self.budget = steps;
        self
    }

    pub fn with_deadline(mut self, deadline: Option<Instant>) -> Self {
        self.deadline = deadline;
        self
    }

    pub fn steps(&self) -> u64 {
        self.steps.get()
    }

    /// Truth of the root definition at `args`.
    pub fn eval_root(&self, args: &[Element]) -> Result<bool, EvalError> {
        self.eval_def(self.book.root, args)
    }

    pub fn eval_named(&self, name: &str, args: &[Element]) -> Result<bool, EvalError> {
        let d = self.book.find(name).ok_or_else(|| EvalError::Arity {
            name: name.into(),
            expected: 0,
            got: args.len(),
        })?;
        self.eval_def(d, args)
    }

    pub fn eval_def(&self, d: DefId, args: &[Element]) -> Result<bool, EvalError> {
        let def = &self.book.defs[d];
        if def.arity() != args.len() {
            return Err(EvalError::Arity {
                name: def.name.clone(),
                expected: def.arity(),
                got: args.len(),
            });
        }
        if let Some(&bad) = args.iter().find(|&&a| a >= self.alg.size()) {
            return Err(EvalError::OutOfRange(bad));
        }
        self.call(d, args)
    }

    /// Evaluates a formula of the book's language under `env` (indexed by
    /// the formula's variables).
    pub fn eval_open(&self, f: &Formula, env: &mut Vec<Element>) -> Result<bool, EvalError> {
        self.node(f, env)
    }

    fn table(&self, d: DefId) -> Option<&Vec<Cell<u8>>> {
        if self.naive {
            return None;
        }
        self.memo[d]
            .get_or_init(|| {
                let n = self.alg.size();
                let arity = self.book.defs[d].arity();
                let len = (0..arity).try_fold(1usize, |acc, _| acc.checked_mul(n).filter(|&l| l <= MEMO_LIMIT))?;
                Some((0..len).map(|_| Cell::new(UNKNOWN)).collect())
            })
            .as_ref()
    }

    fn call(&self, d: DefId, args: &[Element]) -> Result<bool, EvalError> {
        let table = self.table(d);
        let n = self.alg.size();
        let index = args.iter().fold(0, |acc, &a| acc * n + a);
        if let Some(t) = table {
            match t[index].get() {
                FALSE => return Ok(false),
                TRUE => return Ok(true),
                _ => {}
            }
        }
        let def = &self.book.defs[d];
        let mut env = vec![0; def.var_names.len()];
        for (&p, &a) in def.params.iter().zip(args) {
            env[p] = a;
        }
        let value = self.node(&def.body, &mut env)?;
        if let Some(t) = table {
            t[index].set(if value { TRUE } else { FALSE });
        }
        Ok(value)
    }

    fn tick(&self) -> Result<(), EvalError> {
        let s = self.steps.get() + 1;
        self.steps.set(s);
        if s > self.budget {
            return Err(EvalError::Budget(self.budget));
        }
        if s & 0xffff == 0 && self.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(EvalError::Deadline);
        }
        Ok(())
    }

    fn node(&self, f: &Formula, env: &mut Vec<Element>) -> Result<bool, EvalError> {
        self.tick()?;
        Ok(match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Eq(a, b) => self.alg.eval_fast(a, env) == self.alg.eval_fast(b, env),
            Formula::Call(d, args) => {
                let vals: Vec<Element> = args.iter().map(|t| self.alg.eval_fast(t, env)).collect();
                self.call(*d, &vals)?
            }
            Formula::Not(g) => !self.node(g, env)?,
            Formula::And(fs) => {
                for g in fs {
                    if !self.node(g, env)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(fs) => {
                for g in fs {
                    if self.node(g, env)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Implies(a, b) => !self.node(a, env)? || self.node(b, env)?,
            Formula::Forall(vs, g) => self.quantify(vs, g, env, true)?,
            Formula::Exists(vs, g) => self.quantify(vs, g, env, false)?,
        })
    }

    /// `∀` (`universal`) or `∃` over the block `vs`.
    fn quantify(&self, vs: &[VarId], g: &Formula, env: &mut Vec<Element>, universal: bool) -> Result<bool, EvalError> {
        let Some((&v, rest)) = vs.split_first() else {
            return self.node(g, env);
        };
        let saved = env[v];
        for a in 0..self.alg.size() {
            env[v] = a;
            if self.quantify(rest, g, env, universal)? != universal {
                env[v] = saved;
                return Ok(!universal);
            }
        }
        env[v] = saved;
        Ok(universal)
    }
}

/// One-shot evaluation of the root of `book`.
pub fn eval_formula(book: &FormulaBook, alg: &FiniteAlgebra, args: &[Element]) -> Result<bool, EvalError> {
    Evaluator::new(book, alg)?.eval_root(args)
}
