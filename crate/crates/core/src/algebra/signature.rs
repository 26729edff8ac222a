use std::collections::HashMap;

use super::{AlgebraError, Term};

pub type SymbolId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// Operation symbols plus the designated binary term `x · y` whose
/// related order is studied.
///
/// The designated term is stored over variables `0 = x`, `1 = y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    symbols: Vec<Symbol>,
    index: HashMap<String, SymbolId>,
    groupoid: Option<Term>,
}

impl Signature {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self, AlgebraError> {
        let mut index = HashMap::new();
        for (i, s) in symbols.iter().enumerate() {
            if index.insert(s.name.clone(), i).is_some() {
                return Err(AlgebraError::DuplicateSymbol(s.name.clone()));
            }
        }
        Ok(Signature {
            symbols,
            index,
            groupoid: None,
        })
    }

    /// Convenience constructor from `(name, arity)` pairs.
    pub fn from_pairs(pairs: &[(&str, usize)]) -> Result<Self, AlgebraError> {
        Self::new(
            pairs
                .iter()
                .map(|(n, a)| Symbol {
                    name: n.to_string(),
                    arity: *a,
                })
                .collect(),
        )
    }

    /// Designates the groupoid term. It must be well formed and use no
    /// variables besides `x` (0) and `y` (1).
    pub fn set_groupoid(&mut self, term: Term) -> Result<(), AlgebraError> {
        term.check(self)?;
        if term.var_bound() > 2 {
            return Err(AlgebraError::GroupoidNotBinary);
        }
        self.groupoid = Some(term);
        Ok(())
    }

    pub fn with_groupoid(mut self, term: Term) -> Result<Self, AlgebraError> {
        self.set_groupoid(term)?;
        Ok(self)
    }

    /// Uses the only binary symbol as the groupoid operation, if there is
    /// exactly one.
    pub fn default_groupoid(&self) -> Option<Term> {
        let mut binaries = self.symbols.iter().enumerate().filter(|(_, s)| s.arity == 2);
        match (binaries.next(), binaries.next()) {
            (Some((id, _)), None) => Some(Term::app(id, vec![Term::Var(0), Term::Var(1)])),
            _ => None,
        }
    }

    pub fn groupoid(&self) -> Option<&Term> {
        self.groupoid.as_ref()
    }

    pub fn require_groupoid(&self) -> Result<&Term, AlgebraError> {
        self.groupoid.as_ref().ok_or(AlgebraError::MissingGroupoid)
    }

    /// The symbol printed infix as `*`: the designated term when it is a
    /// bare binary symbol applied to `x, y`.
    pub fn infix_symbol(&self) -> Option<SymbolId> {
        match &self.groupoid {
            Some(Term::App(s, args))
                if args.len() == 2 && args[0] == Term::Var(0) && args[1] == Term::Var(1) =>
            {
                Some(*s)
            }
            _ => None,
        }
    }

    /// Splits `t` as `a · b` when it is an instance of the designated term
    /// binding both `x` and `y`.
    pub fn match_groupoid<'t>(&self, t: &'t Term) -> Option<(&'t Term, &'t Term)> {
        fn go<'t>(p: &Term, t: &'t Term, binds: &mut [Option<&'t Term>; 2]) -> bool {
            match (p, t) {
                (Term::Var(i), _) => match binds[*i] {
                    Some(b) => b == t,
                    None => {
                        binds[*i] = Some(t);
                        true
                    }
                },
                (Term::App(f, ps), Term::App(g, ts)) => {
                    f == g && ps.len() == ts.len() && ps.iter().zip(ts).all(|(p, t)| go(p, t, binds))
                }
                _ => false,
            }
        }
        let mut binds = [None, None];
        if go(self.groupoid.as_ref()?, t, &mut binds) {
            Some((binds[0]?, binds[1]?))
        } else {
            None
        }
    }

    /// `a · b` for the designated groupoid term.
    ///
    /// Panics if no groupoid term was designated; callers validate with
    /// [`Signature::require_groupoid`] first.
    pub fn mul(&self, a: Term, b: Term) -> Term {
        self.groupoid
            .as_ref()
            .expect("groupoid term designated")
            .substitute(&[a, b])
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn symbol(&self, id: SymbolId) -> &Symbol {
        &self.symbols[id]
    }

    pub fn get(&self, id: SymbolId) -> Option<&Symbol> {
        self.symbols.get(id)
    }

    pub fn lookup(&self, name: &str) -> Option<SymbolId> {
        self.index.get(name).copied()
    }

    pub fn arities(&self) -> Vec<usize> {
        self.symbols.iter().map(|s| s.arity).collect()
    }

    pub fn constants(&self) -> impl Iterator<Item = SymbolId> + '_ {
        self.symbols
            .iter()
            .enumerate()
            .filter(|(_, s)| s.arity == 0)
            .map(|(i, _)| i)
    }

    pub fn has_constant(&self) -> bool {
        self.constants().next().is_some()
    }
}
