use std::collections::BTreeSet;
use std::fmt;

use super::{AlgebraError, Signature, SymbolId};

/// A term over a signature. Variables are plain indices; their surface
/// names live next to whatever owns the term (an identity, a formula).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(usize),
    App(SymbolId, Vec<Term>),
}

impl Term {
    pub fn var(index: usize) -> Self {
        Term::Var(index)
    }

    pub fn app(symbol: SymbolId, args: Vec<Term>) -> Self {
        Term::App(symbol, args)
    }

    pub fn constant(symbol: SymbolId) -> Self {
        Term::App(symbol, Vec::new())
    }

    /// Height of the term tree; variables and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => args.iter().map(|a| a.depth() + 1).max().unwrap_or(0),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_closed),
        }
    }

    pub fn vars(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<usize>) {
        match self {
            Term::Var(i) => {
                out.insert(*i);
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// One past the largest variable index, or 0 for closed terms.
    pub fn var_bound(&self) -> usize {
        match self {
            Term::Var(i) => i + 1,
            Term::App(_, args) => args.iter().map(Term::var_bound).max().unwrap_or(0),
        }
    }

    /// Simultaneous substitution of `args[i]` for variable `i`. Variables
    /// without a replacement are left in place.
    pub fn substitute(&self, args: &[Term]) -> Term {
        match self {
            Term::Var(i) => args.get(*i).cloned().unwrap_or(Term::Var(*i)),
            Term::App(s, sub) => Term::App(*s, sub.iter().map(|t| t.substitute(args)).collect()),
        }
    }

    /// Renames variables through `map`.
    pub fn map_vars(&self, map: &impl Fn(usize) -> usize) -> Term {
        match self {
            Term::Var(i) => Term::Var(map(*i)),
            Term::App(s, sub) => Term::App(*s, sub.iter().map(|t| t.map_vars(map)).collect()),
        }
    }

    /// Checks every application against the signature's arities.
    pub fn check(&self, sig: &Signature) -> Result<(), AlgebraError> {
        match self {
            Term::Var(_) => Ok(()),
            Term::App(s, args) => {
                let symbol = sig
                    .get(*s)
                    .ok_or(AlgebraError::UnknownSymbolId(*s))?;
                if symbol.arity != args.len() {
                    return Err(AlgebraError::ArityMismatch {
                        symbol: symbol.name.clone(),
                        expected: symbol.arity,
                        got: args.len(),
                    });
                }
                args.iter().try_for_each(|a| a.check(sig))
            }
        }
    }

    /// Display adapter. `names[i]` names variable `i`; missing names print
    /// as `_i`.
    pub fn display<'a>(&'a self, sig: &'a Signature, names: &'a [String]) -> TermDisplay<'a> {
        TermDisplay {
            term: self,
            sig,
            names,
        }
    }
}

pub struct TermDisplay<'a> {
    term: &'a Term,
    sig: &'a Signature,
    names: &'a [String],
}

impl TermDisplay<'_> {
    fn infix_parts<'t>(&self, t: &'t Term) -> Option<(&'t Term, &'t Term)> {
        self.sig.match_groupoid(t)
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, t: &Term, wrap_infix: bool) -> fmt::Result {
        if let Some((l, r)) = self.infix_parts(t) {
            if wrap_infix {
                f.write_str("(")?;
            }
            self.write(f, l, false)?;
            f.write_str(" * ")?;
            self.write(f, r, true)?;
            if wrap_infix {
                f.write_str(")")?;
            }
            return Ok(());
        }
        match t {
            Term::Var(i) => match self.names.get(*i) {
                Some(n) => f.write_str(n),
                None => write!(f, "_{i}"),
            },
            Term::App(s, args) if args.is_empty() => f.write_str(&self.sig.symbol(*s).name),
            Term::App(s, args) => {
                write!(f, "({}", self.sig.symbol(*s).name)?;
                for a in args {
                    f.write_str(" ")?;
                    self.write(f, a, true)?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.term, false)
    }
}

/// An equation `lhs ≈ rhs`, universally quantified over its variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
    names: Vec<String>,
}

const DEFAULT_VAR_NAMES: [&str; 8] = ["x", "y", "z", "u", "v", "w", "s", "t"];

pub(crate) fn default_var_name(i: usize) -> String {
    DEFAULT_VAR_NAMES
        .get(i)
        .map(|s| s.to_string())
        .unwrap_or_else(|| format!("x{i}"))
}

impl Identity {
    /// Builds an identity with default variable names (x, y, z, u, ...).
    pub fn new(lhs: Term, rhs: Term) -> Self {
        let n = lhs.var_bound().max(rhs.var_bound());
        let names = (0..n).map(default_var_name).collect();
        Identity { lhs, rhs, names }
    }

    pub fn with_names(lhs: Term, rhs: Term, names: Vec<String>) -> Self {
        let n = lhs.var_bound().max(rhs.var_bound());
        let mut names = names;
        while names.len() < n {
            names.push(default_var_name(names.len()));
        }
        Identity { lhs, rhs, names }
    }

    /// Number of variable slots; assignments range over `size^var_count()`.
    pub fn var_count(&self) -> usize {
        self.names.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.names
    }

    pub fn check(&self, sig: &Signature) -> Result<(), AlgebraError> {
        self.lhs.check(sig)?;
        self.rhs.check(sig)
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> IdentityDisplay<'a> {
        IdentityDisplay { id: self, sig }
    }
}

pub struct IdentityDisplay<'a> {
    id: &'a Identity,
    sig: &'a Signature,
}

impl fmt::Display for IdentityDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} = {}",
            self.id.lhs.display(self.sig, &self.id.names),
            self.id.rhs.display(self.sig, &self.id.names)
        )
    }
}
