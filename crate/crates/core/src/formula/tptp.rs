//! TPTP `fof` export. Callees of the exported definition become
//! `definition` items (`![params] : (p(params) <=> body)`); the definition
//! itself is universally closed, with the closure merged into a leading ∀.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::Serialize;

use crate::algebra::{Identity, Signature, Term};

use super::{Formula, FormulaBook, VarId};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TptpRole {
    #[default]
    Axiom,
    Hypothesis,
    Definition,
    Conjecture,
}

impl fmt::Display for TptpRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TptpRole::Axiom => "axiom",
            TptpRole::Hypothesis => "hypothesis",
            TptpRole::Definition => "definition",
            TptpRole::Conjecture => "conjecture",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TptpItem {
    pub name: String,
    pub role: TptpRole,
    pub formula: String,
}

impl fmt::Display for TptpItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fof({}, {}, {}).", self.name, self.role, self.formula)
    }
}

/// A TPTP lower word for a symbol or definition name: `*` becomes `mul`,
/// all-digit names get a `c` prefix, other characters are folded into
/// `[a-z0-9_]`.
pub fn tptp_name(name: &str) -> String {
    let mut out = String::new();
    for c in name.chars() {
        match c {
            '*' | '·' => out.push_str("mul"),
            '+' => out.push_str("add"),
            '\'' => out.push_str("_p"),
            c if c.is_ascii_alphanumeric() || c == '_' => out.push(c.to_ascii_lowercase()),
            _ => out.push('_'),
        }
    }
    if out.is_empty() || out.chars().all(|c| c.is_ascii_digit()) {
        return format!("c{out}");
    }
    if !out.starts_with(|c: char| c.is_ascii_lowercase()) {
        out.insert_str(0, "f_");
    }
    out
}

/// TPTP variable names (upper words), made unique.
fn variable_names(names: &[String]) -> Vec<String> {
    let mut seen = HashSet::new();
    names
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let mut v: String = n
                .chars()
                .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
                .collect();
            match v.chars().next() {
                Some(c) if c.is_ascii_alphabetic() => {
                    let upper = c.to_ascii_uppercase().to_string();
                    v.replace_range(..1, &upper);
                }
                _ => v.insert(0, 'V'),
            }
            if !seen.insert(v.clone()) {
                v = format!("{v}_{i}");
                seen.insert(v.clone());
            }
            v
        })
        .collect()
}

struct Writer {
    symbols: Vec<String>,
    predicates: Vec<String>,
    vars: Vec<String>,
}

impl Writer {
    fn term(&self, t: &Term) -> String {
        match t {
            Term::Var(v) => self.vars[*v].clone(),
            Term::App(s, args) if args.is_empty() => self.symbols[*s].clone(),
            Term::App(s, args) => {
                let args: Vec<String> = args.iter().map(|a| self.term(a)).collect();
                format!("{}({})", self.symbols[*s], args.join(","))
            }
        }
    }

    /// Always a unitary formula: binary connectives come parenthesized.
    fn formula(&self, f: &Formula) -> String {
        match f {
            Formula::True => "$true".into(),
            Formula::False => "$false".into(),
            Formula::Eq(a, b) => format!("{} = {}", self.term(a), self.term(b)),
            Formula::Call(d, args) if args.is_empty() => self.predicates[*d].clone(),
            Formula::Call(d, args) => {
                let args: Vec<String> = args.iter().map(|a| self.term(a)).collect();
                format!("{}({})", self.predicates[*d], args.join(","))
            }
            Formula::Not(g) => format!("~ ({})", self.formula(g)),
            Formula::And(fs) | Formula::Or(fs) => {
                let (op, unit) = if matches!(f, Formula::And(_)) {
                    (" & ", "$true")
                } else {
                    (" | ", "$false")
                };
                match fs.len() {
                    0 => unit.into(),
                    1 => self.formula(&fs[0]),
                    _ => {
                        let parts: Vec<String> = fs.iter().map(|g| self.unit(g)).collect();
                        format!("({})", parts.join(op))
                    }
                }
            }
            Formula::Implies(a, b) => format!("({} => {})", self.unit(a), self.unit(b)),
            Formula::Forall(vs, g) => self.quantified('!', vs, g),
            Formula::Exists(vs, g) => self.quantified('?', vs, g),
        }
    }

    /// Parenthesizes equations so they can sit under binary connectives
    /// without relying on operator precedence.
    fn unit(&self, f: &Formula) -> String {
        match f {
            Formula::Eq(..) => format!("({})", self.formula(f)),
            _ => self.formula(f),
        }
    }

    fn quantified(&self, q: char, vs: &[VarId], g: &Formula) -> String {
        if vs.is_empty() {
            return self.formula(g);
        }
        let vs: Vec<&str> = vs.iter().map(|&v| self.vars[v].as_str()).collect();
        format!("{q} [{}] : {}", vs.join(","), self.unit(g))
    }
}

fn symbol_names(sig: &Signature) -> Vec<String> {
    sig.symbols().iter().map(|s| tptp_name(&s.name)).collect()
}

/// `fof` items for `book`: callees as definitions, then the root with the
/// given role.
pub fn export_tptp(book: &FormulaBook, role: TptpRole) -> Vec<TptpItem> {
    let symbols = symbol_names(&book.signature);
    let taken: BTreeSet<&String> = symbols.iter().collect();
    let predicates: Vec<String> = book
        .defs
        .iter()
        .map(|d| {
            let p = tptp_name(&d.name);
            if taken.contains(&p) {
                format!("{p}_def")
            } else {
                p
            }
        })
        .collect();
    let mut items = Vec::new();
    for d in book.reachable() {
        let def = &book.defs[d];
        let w = Writer {
            symbols: symbols.clone(),
            predicates: predicates.clone(),
            vars: variable_names(&def.var_names),
        };
        if d == book.root {
            // universal closure merged into a leading ∀ block
            let (mut vs, body) = match &def.body {
                Formula::Forall(bound, g) => (bound.clone(), g.as_ref()),
                other => (Vec::new(), other),
            };
            let mut closure = def.params.clone();
            closure.append(&mut vs);
            items.push(TptpItem {
                name: predicates[d].clone(),
                role,
                formula: w.quantified('!', &closure, body),
            });
        } else {
            let head = w.formula(&Formula::Call(d, def.params.iter().map(|&p| Term::Var(p)).collect()));
            let iff = format!("({head} <=> {})", w.unit(&def.body));
            let formula = if def.params.is_empty() {
                iff
            } else {
                let vs: Vec<&str> = def.params.iter().map(|&v| w.vars[v].as_str()).collect();
                format!("! [{}] : {iff}", vs.join(","))
            };
            items.push(TptpItem {
                name: format!("def_{}", predicates[d]),
                role: TptpRole::Definition,
                formula,
            });
        }
    }
    items
}

/// Identities as universally closed equations.
pub fn export_identities_tptp(sig: &Signature, ids: &[(String, TptpRole, Identity)]) -> Vec<TptpItem> {
    let symbols = symbol_names(sig);
    ids.iter()
        .map(|(name, role, id)| {
            let w = Writer {
                symbols: symbols.clone(),
                predicates: Vec::new(),
                vars: variable_names(id.var_names()),
            };
            let eq = Formula::eq(id.lhs.clone(), id.rhs.clone());
            let vs: Vec<VarId> = (0..id.var_count()).collect();
            TptpItem {
                name: tptp_name(name),
                role: *role,
                formula: w.quantified('!', &vs, &eq),
            }
        })
        .collect()
}

/// One item per line.
pub fn tptp_text(items: &[TptpItem]) -> String {
    items.iter().map(|i| format!("{i}\n")).collect()
}
