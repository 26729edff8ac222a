//! A recursive-descent checker for the `fof` fragment of the TPTP syntax:
//! annotated formulas, the full connective set with TPTP's associativity
//! rules (`&`/`|` chains must not mix, the other binaries do not chain),
//! quantifiers over unitary bodies, equality atoms, and closedness.

use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Lower(String),
    Upper(String),
    Dollar(String),
    Quoted(String),
    Int(String),
    Punct(&'static str),
}

const PUNCT: [&str; 19] = [
    "<=>", "<~>", "=>", "<=", "~|", "~&", "!=", "(", ")", "[", "]", ",", ":", ".", "&", "|", "~", "=", "!",
];

fn lex(src: &str) -> Result<Vec<Tok>, String> {
    let cs: Vec<char> = src.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '%' {
            while i < cs.len() && cs[i] != '\n' {
                i += 1;
            }
        } else if c == '?' {
            out.push(Tok::Punct("?"));
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '$' {
            let start = i;
            i += 1;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            let w: String = cs[start..i].iter().collect();
            out.push(if c == '$' {
                Tok::Dollar(w)
            } else if c.is_ascii_uppercase() {
                Tok::Upper(w)
            } else {
                Tok::Lower(w)
            });
        } else if c.is_ascii_digit() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Int(cs[start..i].iter().collect()));
        } else if c == '\'' {
            let start = i + 1;
            i += 1;
            while i < cs.len() && cs[i] != '\'' {
                if cs[i] == '\\' {
                    i += 1;
                }
                i += 1;
            }
            if i >= cs.len() {
                return Err("unterminated quoted word".into());
            }
            out.push(Tok::Quoted(cs[start..i].iter().collect()));
            i += 1;
        } else {
            let rest: String = cs[i..cs.len().min(i + 3)].iter().collect();
            let p = PUNCT
                .iter()
                .find(|p| rest.starts_with(**p))
                .ok_or_else(|| format!("unexpected character {c:?}"))?;
            out.push(Tok::Punct(p));
            i += p.len();
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    bound: Vec<String>,
    free: BTreeSet<String>,
}

const ROLES: [&str; 8] = [
    "axiom", "hypothesis", "definition", "assumption", "lemma", "theorem", "conjecture", "negated_conjecture",
];

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn is(&self, p: &str) -> bool {
        matches!(self.peek(), Some(Tok::Punct(q)) if *q == p)
    }

    fn expect(&mut self, p: &str) -> Result<(), String> {
        if self.is(p) {
            self.pos += 1;
            Ok(())
        } else {
            Err(format!("expected `{p}` at token {}, found {:?}", self.pos, self.peek()))
        }
    }

    fn annotated(&mut self) -> Result<String, String> {
        match self.peek() {
            Some(Tok::Lower(w)) if w == "fof" => self.pos += 1,
            other => return Err(format!("expected `fof`, found {other:?}")),
        }
        self.expect("(")?;
        let name = match self.peek().cloned() {
            Some(Tok::Lower(w)) | Some(Tok::Quoted(w)) | Some(Tok::Int(w)) => {
                self.pos += 1;
                w
            }
            other => return Err(format!("bad formula name {other:?}")),
        };
        self.expect(",")?;
        match self.peek().cloned() {
            Some(Tok::Lower(r)) if ROLES.contains(&r.as_str()) => self.pos += 1,
            other => return Err(format!("bad role {other:?}")),
        }
        self.expect(",")?;
        self.free.clear();
        self.logic()?;
        if !self.free.is_empty() {
            return Err(format!("{name}: free variables {:?}", self.free));
        }
        self.expect(")")?;
        self.expect(".")?;
        Ok(name)
    }

    /// `fof_logic_formula`: unitary, or a binary over unitary operands.
    fn logic(&mut self) -> Result<(), String> {
        self.unitary()?;
        for nonassoc in ["<=>", "=>", "<=", "<~>", "~|", "~&"] {
            if self.is(nonassoc) {
                self.pos += 1;
                self.unitary()?;
                if ["<=>", "=>", "<=", "<~>", "~|", "~&", "&", "|"].iter().any(|p| self.is(p)) {
                    return Err("non-associative connective chained".into());
                }
                return Ok(());
            }
        }
        for assoc in ["&", "|"] {
            if self.is(assoc) {
                while self.is(assoc) {
                    self.pos += 1;
                    self.unitary()?;
                }
                let other = if assoc == "&" { "|" } else { "&" };
                if self.is(other) || ["<=>", "=>", "<=", "<~>", "~|", "~&"].iter().any(|p| self.is(p)) {
                    return Err("mixed connectives without parentheses".into());
                }
                return Ok(());
            }
        }
        Ok(())
    }

    fn unitary(&mut self) -> Result<(), String> {
        if self.is("(") {
            self.pos += 1;
            self.logic()?;
            return self.expect(")");
        }
        if self.is("!") || self.is("?") {
            self.pos += 1;
            self.expect("[")?;
            let mut vs = Vec::new();
            loop {
                match self.peek().cloned() {
                    Some(Tok::Upper(v)) => {
                        self.pos += 1;
                        vs.push(v);
                    }
                    other => return Err(format!("expected variable, found {other:?}")),
                }
                if self.is(",") {
                    self.pos += 1;
                } else {
                    break;
                }
            }
            self.expect("]")?;
            self.expect(":")?;
            let depth = self.bound.len();
            self.bound.extend(vs);
            self.unitary()?;
            self.bound.truncate(depth);
            return Ok(());
        }
        if self.is("~") {
            self.pos += 1;
            return self.unitary();
        }
        self.atomic()
    }

    fn atomic(&mut self) -> Result<(), String> {
        if let Some(Tok::Dollar(w)) = self.peek().cloned() {
            if w == "$true" || w == "$false" {
                self.pos += 1;
                return Ok(());
            }
        }
        let was_plain = self.term()?;
        if self.is("=") || self.is("!=") {
            self.pos += 1;
            self.term()?;
        } else if !was_plain {
            return Err("a variable is not a formula".into());
        }
        Ok(())
    }

    /// Returns whether the term could also be a plain atomic formula.
    fn term(&mut self) -> Result<bool, String> {
        match self.peek().cloned() {
            Some(Tok::Upper(v)) => {
                self.pos += 1;
                if !self.bound.contains(&v) {
                    self.free.insert(v);
                }
                Ok(false)
            }
            Some(Tok::Lower(_)) | Some(Tok::Quoted(_)) => {
                self.pos += 1;
                if self.is("(") {
                    self.pos += 1;
                    loop {
                        self.term()?;
                        if self.is(",") {
                            self.pos += 1;
                        } else {
                            break;
                        }
                    }
                    self.expect(")")?;
                }
                Ok(true)
            }
            other => Err(format!("expected term, found {other:?}")),
        }
    }
}

/// Names of the annotated formulas, or the first syntax error.
pub fn check_fof(src: &str) -> Result<Vec<String>, String> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        bound: Vec::new(),
        free: BTreeSet::new(),
    };
    let mut names = Vec::new();
    while p.pos < p.toks.len() {
        names.push(p.annotated()?);
    }
    Ok(names)
}

/// Sanity check run before the criteria.
pub fn checker_rejects_malformed_input() {
    assert!(check_fof("fof(a, axiom, ! [X] : (p(X) & q(X))).").is_ok());
    assert!(check_fof("fof(a, axiom, p & q | r).").is_err());
    assert!(check_fof("fof(a, axiom, p => q => r).").is_err());
    assert!(check_fof("fof(a, axiom, ! [X] : p(X) & q(X)).").is_err());
    assert!(check_fof("fof(a, lemmata, p).").is_err());
    assert!(check_fof("fof(a, axiom, X).").is_err());
    assert!(check_fof("fof(a, axiom, p)").is_err());
}
