use std::fmt::{self, Write as _};

use serde::Serialize;

use super::{classify_prenex, Definition, Formula, FormulaBook};

/// Binding strength used to decide where parentheses go.
fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::True | Formula::False | Formula::Eq(..) | Formula::Call(..) => 4,
        Formula::Not(_) => 3,
        Formula::And(_) | Formula::Or(_) => 2,
        Formula::Implies(..) | Formula::Forall(..) | Formula::Exists(..) => 0,
    }
}

struct Printer<'a> {
    book: &'a FormulaBook,
    names: &'a [String],
}

impl Printer<'_> {
    fn child(&self, out: &mut String, f: &Formula, min: u8) {
        if precedence(f) < min {
            out.push('(');
            self.node(out, f);
            out.push(')');
        } else {
            self.node(out, f);
        }
    }

    fn node(&self, out: &mut String, f: &Formula) {
        let sig = &self.book.signature;
        match f {
            Formula::True => out.push('⊤'),
            Formula::False => out.push('⊥'),
            Formula::Eq(a, b) => {
                let _ = write!(out, "{} = {}", a.display(sig, self.names), b.display(sig, self.names));
            }
            Formula::Call(d, args) => {
                let args: Vec<String> = args.iter().map(|a| a.display(sig, self.names).to_string()).collect();
                let _ = write!(out, "{}({})", self.book.defs[*d].name, args.join(", "));
            }
            Formula::Not(g) => {
                out.push('¬');
                self.child(out, g, 3);
            }
            Formula::And(fs) | Formula::Or(fs) => {
                let sep = if matches!(f, Formula::And(_)) { " ∧ " } else { " ∨ " };
                for (i, g) in fs.iter().enumerate() {
                    if i > 0 {
                        out.push_str(sep);
                    }
                    self.child(out, g, 3);
                }
            }
            Formula::Implies(a, b) => {
                self.child(out, a, 2);
                out.push_str(" → ");
                // a trailing quantifier already extends to the right
                if matches!(**b, Formula::Forall(..) | Formula::Exists(..)) {
                    self.node(out, b);
                } else {
                    self.child(out, b, 2);
                }
            }
            Formula::Forall(vs, g) | Formula::Exists(vs, g) => {
                out.push(if matches!(f, Formula::Forall(..)) { '∀' } else { '∃' });
                let vs: Vec<&str> = vs.iter().map(|&v| self.names[v].as_str()).collect();
                out.push_str(&vs.join(" "));
                out.push(' ');
                if matches!(**g, Formula::Forall(..) | Formula::Exists(..)) {
                    self.node(out, g);
                } else {
                    out.push('(');
                    self.node(out, g);
                    out.push(')');
                }
            }
        }
    }
}

/// Renders `f` with the variable names of `names`.
pub(crate) fn formula_text(book: &FormulaBook, f: &Formula, names: &[String]) -> String {
    let mut out = String::new();
    Printer { book, names }.node(&mut out, f);
    out
}

impl Definition {
    pub fn display<'a>(&'a self, book: &'a FormulaBook) -> DefinitionDisplay<'a> {
        DefinitionDisplay { def: self, book }
    }
}

pub struct DefinitionDisplay<'a> {
    def: &'a Definition,
    book: &'a FormulaBook,
}

impl fmt::Display for DefinitionDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.def;
        let body = formula_text(self.book, &d.body, &d.var_names);
        write!(f, "{}({}) := {}", d.name, d.param_names().join(", "), body)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeJson {
    True,
    False,
    Eq(String, String),
    Call { name: String, args: Vec<String> },
    Not(Box<NodeJson>),
    And(Vec<NodeJson>),
    Or(Vec<NodeJson>),
    Implies(Box<NodeJson>, Box<NodeJson>),
    Forall { vars: Vec<String>, body: Box<NodeJson> },
    Exists { vars: Vec<String>, body: Box<NodeJson> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormulaJson {
    pub name: String,
    pub params: Vec<String>,
    pub text: String,
    pub body: NodeJson,
}

fn node_json(book: &FormulaBook, f: &Formula, names: &[String]) -> NodeJson {
    let sig = &book.signature;
    let term = |t: &crate::algebra::Term| t.display(sig, names).to_string();
    let rec = |g: &Formula| Box::new(node_json(book, g, names));
    let var_names = |vs: &[usize]| vs.iter().map(|&v| names[v].clone()).collect();
    match f {
        Formula::True => NodeJson::True,
        Formula::False => NodeJson::False,
        Formula::Eq(a, b) => NodeJson::Eq(term(a), term(b)),
        Formula::Call(d, args) => NodeJson::Call {
            name: book.defs[*d].name.clone(),
            args: args.iter().map(term).collect(),
        },
        Formula::Not(g) => NodeJson::Not(rec(g)),
        Formula::And(fs) => NodeJson::And(fs.iter().map(|g| node_json(book, g, names)).collect()),
        Formula::Or(fs) => NodeJson::Or(fs.iter().map(|g| node_json(book, g, names)).collect()),
        Formula::Implies(a, b) => NodeJson::Implies(rec(a), rec(b)),
        Formula::Forall(vs, g) => NodeJson::Forall {
            vars: var_names(vs),
            body: rec(g),
        },
        Formula::Exists(vs, g) => NodeJson::Exists {
            vars: var_names(vs),
            body: rec(g),
        },
    }
}

#[derive(Serialize)]
struct BookJson {
    root: String,
    class: String,
    definitions: Vec<FormulaJson>,
}

impl FormulaBook {
    /// Reachable definitions, callees first, one per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for d in self.reachable() {
            let _ = writeln!(out, "{}", self.defs[d].display(self));
        }
        out
    }

    pub fn definition_json(&self, d: usize) -> FormulaJson {
        let def = &self.defs[d];
        FormulaJson {
            name: def.name.clone(),
            params: def.param_names().into_iter().map(String::from).collect(),
            text: def.display(self).to_string(),
            body: node_json(self, &def.body, &def.var_names),
        }
    }

    pub fn to_json(&self) -> String {
        let json = BookJson {
            root: self.root().name.clone(),
            class: classify_prenex(self).to_string(),
            definitions: self.reachable().into_iter().map(|d| self.definition_json(d)).collect(),
        };
        serde_json::to_string_pretty(&json).expect("formula serializes")
    }
}
