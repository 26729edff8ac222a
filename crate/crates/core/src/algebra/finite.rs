use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{AlgebraError, Identity, Signature, SymbolId, Term};

/// Universe elements are `0..size`.
pub type Element = usize;

/// A finite algebra: universe `0..size` and one total table per symbol.
///
/// Tables are flattened row-major, so `f(a_1, …, a_m)` sits at index
/// `((a_1 · n + a_2) · n + …) · n + a_m`. Constants have a single entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteAlgebra {
    size: usize,
    arities: Vec<usize>,
    tables: Vec<Vec<Element>>,
}

impl FiniteAlgebra {
    pub fn new(
        size: usize,
        arities: Vec<usize>,
        tables: Vec<Vec<Element>>,
    ) -> Result<Self, AlgebraError> {
        if size == 0 {
            return Err(AlgebraError::EmptyUniverse);
        }
        if arities.len() != tables.len() {
            return Err(AlgebraError::SignatureMismatch);
        }
        for (sym, (arity, table)) in arities.iter().zip(&tables).enumerate() {
            let expected = table_len(size, *arity)?;
            if table.len() != expected {
                return Err(AlgebraError::TableLength {
                    symbol: sym,
                    expected,
                    got: table.len(),
                });
            }
            if let Some(&bad) = table.iter().find(|&&v| v >= size) {
                return Err(AlgebraError::ElementOutOfRange { element: bad, size });
            }
        }
        Ok(FiniteAlgebra {
            size,
            arities,
            tables,
        })
    }

    /// The one-element algebra of the given signature.
    pub fn trivial(sig: &Signature) -> Self {
        let arities = sig.arities();
        let tables = arities.iter().map(|_| vec![0]).collect();
        FiniteAlgebra {
            size: 1,
            arities,
            tables,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn arities(&self) -> &[usize] {
        &self.arities
    }

    pub fn tables(&self) -> &[Vec<Element>] {
        &self.tables
    }

    pub fn table(&self, sym: SymbolId) -> &[Element] {
        &self.tables[sym]
    }

    pub fn into_tables(self) -> Vec<Vec<Element>> {
        self.tables
    }

    /// True when the arities agree with `sig`.
    pub fn conforms_to(&self, sig: &Signature) -> bool {
        self.arities == sig.arities()
    }

    #[inline]
    pub fn op(&self, sym: SymbolId, args: &[Element]) -> Element {
        let mut idx = 0;
        for &a in args {
            idx = idx * self.size + a;
        }
        self.tables[sym][idx]
    }

    /// Bottom-up evaluation of `t` under `env` (variable `i` ↦ `env[i]`).
    pub fn eval_term(&self, t: &Term, env: &[Element]) -> Result<Element, AlgebraError> {
        match t {
            Term::Var(i) => env
                .get(*i)
                .copied()
                .ok_or(AlgebraError::UnboundVariable(*i)),
            Term::App(s, args) => {
                if *s >= self.tables.len() || self.arities[*s] != args.len() {
                    return Err(AlgebraError::SignatureMismatch);
                }
                let mut idx = 0;
                for a in args {
                    idx = idx * self.size + self.eval_term(a, env)?;
                }
                Ok(self.tables[*s][idx])
            }
        }
    }

    /// Like [`FiniteAlgebra::eval_term`] for terms already known to be
    /// compatible and covered by `env`.
    #[inline]
    pub(crate) fn eval_fast(&self, t: &Term, env: &[Element]) -> Element {
        match t {
            Term::Var(i) => env[*i],
            Term::App(s, args) => {
                let mut idx = 0;
                for a in args {
                    idx = idx * self.size + self.eval_fast(a, env);
                }
                self.tables[*s][idx]
            }
        }
    }

    pub(crate) fn check_term(&self, t: &Term) -> Result<(), AlgebraError> {
        match t {
            Term::Var(_) => Ok(()),
            Term::App(s, args) => {
                if *s >= self.tables.len() || self.arities[*s] != args.len() {
                    return Err(AlgebraError::SignatureMismatch);
                }
                args.iter().try_for_each(|a| self.check_term(a))
            }
        }
    }

    /// First assignment (in odometer order) falsifying `id`, if any.
    pub fn find_violation(&self, id: &Identity) -> Result<Option<Vec<Element>>, AlgebraError> {
        self.check_term(&id.lhs)?;
        self.check_term(&id.rhs)?;
        let mut found = None;
        for_each_assignment(self.size, id.var_count(), |env| {
            if self.eval_fast(&id.lhs, env) != self.eval_fast(&id.rhs, env) {
                found = Some(env.to_vec());
                false
            } else {
                true
            }
        });
        Ok(found)
    }

    /// Exhaustive check of `lhs = rhs` under all `size^vars` assignments.
    pub fn holds_identity(&self, id: &Identity) -> Result<bool, AlgebraError> {
        Ok(self.find_violation(id)?.is_none())
    }

    pub fn satisfies_all(&self, ids: &[Identity]) -> Result<bool, AlgebraError> {
        for id in ids {
            if !self.holds_identity(id)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json_value(&self, sig: &Signature) -> AlgebraJson {
        let ops = sig
            .symbols()
            .iter()
            .zip(&self.tables)
            .map(|(s, t)| (s.name.clone(), t.clone()))
            .collect();
        AlgebraJson {
            size: self.size,
            ops,
        }
    }

    pub fn to_json(&self, sig: &Signature) -> String {
        serde_json::to_string(&self.to_json_value(sig)).expect("algebra serializes")
    }

    pub fn from_json_value(sig: &Signature, json: &AlgebraJson) -> Result<Self, AlgebraError> {
        let mut tables = Vec::with_capacity(sig.len());
        for s in sig.symbols() {
            let t = json
                .ops
                .get(&s.name)
                .ok_or_else(|| AlgebraError::MissingTable(s.name.clone()))?;
            tables.push(t.clone());
        }
        if let Some(extra) = json.ops.keys().find(|k| sig.lookup(k).is_none()) {
            return Err(AlgebraError::UnknownSymbol(extra.clone()));
        }
        FiniteAlgebra::new(json.size, sig.arities(), tables)
    }

    pub fn from_json(sig: &Signature, text: &str) -> Result<Self, AlgebraError> {
        let json: AlgebraJson =
            serde_json::from_str(text).map_err(|e| AlgebraError::Json(e.to_string()))?;
        Self::from_json_value(sig, &json)
    }
}

/// Wire form: `{"size": n, "ops": {"name": [flattened row-major table]}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub size: usize,
    pub ops: BTreeMap<String, Vec<Element>>,
}

pub(crate) fn table_len(size: usize, arity: usize) -> Result<usize, AlgebraError> {
    let mut len: usize = 1;
    for _ in 0..arity {
        len = len.checked_mul(size).ok_or(AlgebraError::TooLarge)?;
    }
    Ok(len)
}

/// Calls `f` on every tuple in `0..size` of length `arity`, in
/// lexicographic order, until it returns `false`. Returns whether the
/// iteration ran to completion.
pub fn for_each_assignment(size: usize, arity: usize, mut f: impl FnMut(&[Element]) -> bool) -> bool {
    if size == 0 && arity > 0 {
        return true;
    }
    let mut env = vec![0; arity];
    loop {
        if !f(&env) {
            return false;
        }
        let mut i = arity;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            env[i] += 1;
            if env[i] < size {
                break;
            }
            env[i] = 0;
        }
    }
}
