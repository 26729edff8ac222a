//! Line-oriented presentation-file reader.
//!
//! ```text
//! name bsl
//! sig mul/2 0/0 1/0
//! groupoid (mul x y)
//! id (x * y) * z = x * (y * z)
//! witness m 1 = x * y
//! witness zero 1 = 0
//! witness one 1 = 1
//! witness U 2 = x * z
//! ```
//!
//! Terms are prefix `(f t1 … tk)` or `f(t1, …, tk)`, with left-associative
//! infix `*` for the designated groupoid term. Identifiers not declared in
//! `sig` are variables; `#` starts a comment.

use std::collections::BTreeMap;

use thiserror::Error;

use super::{Identity, Presentation, Signature, Symbol, Term};
use crate::witness::{chain_var_names, ConnectionTerms, SemidegeneracyTerms, WitnessSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unknown symbol `{name}`")]
    UnknownSymbol { line: usize, col: usize, name: String },
    #[error("{line}:{col}: `{name}` expects {expected} argument(s), got {got}")]
    Arity {
        line: usize,
        col: usize,
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("{line}:{col}: duplicate symbol `{name}`")]
    DuplicateSymbol { line: usize, col: usize, name: String },
    #[error("{line}: {msg}")]
    Invalid { line: usize, msg: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Star,
    Eq,
    Slash,
    Comma,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    col: usize,
    end: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn tokenize(line_no: usize, text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '*' => Some(Tok::Star),
            '=' => Some(Tok::Eq),
            '/' => Some(Tok::Slash),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, col, end: col + 1 });
            i += 1;
            continue;
        }
        if is_ident_char(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                col,
                end: i + 1,
            });
            continue;
        }
        return Err(ParseError::Syntax {
            line: line_no,
            col,
            msg: format!("unexpected character `{c}`"),
        });
    }
    Ok(out)
}

/// How identifiers that are not symbols turn into variables.
enum Vars<'a> {
    /// Fresh index per new name, in order of first occurrence.
    Free(&'a mut Vec<String>),
    /// Only the listed names are allowed.
    Fixed(&'a [(String, usize)]),
}

impl Vars<'_> {
    fn resolve(&mut self, name: &str) -> Option<usize> {
        match self {
            Vars::Free(names) => Some(match names.iter().position(|n| n == name) {
                Some(i) => i,
                None => {
                    names.push(name.to_string());
                    names.len() - 1
                }
            }),
            Vars::Fixed(allowed) => allowed.iter().find(|(n, _)| n == name).map(|(_, i)| *i),
        }
    }
}

struct TermParser<'a, 'v> {
    line: usize,
    toks: &'a [Token],
    pos: usize,
    sig: &'a Signature,
    vars: Vars<'v>,
}

impl TermParser<'_, '_> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn eol_col(&self) -> usize {
        self.toks.last().map(|t| t.end).unwrap_or(1)
    }

    fn syntax(&self, col: usize, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            col,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if t.tok == tok => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.syntax(t.col, format!("expected {what}"))),
            None => Err(self.syntax(self.eol_col(), format!("expected {what}, found end of line"))),
        }
    }

    fn expr(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.atom()?;
        while let Some(Token { tok: Tok::Star, col, .. }) = self.peek() {
            let col = *col;
            self.pos += 1;
            let rhs = self.atom()?;
            if self.sig.groupoid().is_none() {
                return Err(self.syntax(col, "`*` used but no groupoid term is designated"));
            }
            lhs = self.sig.mul(lhs, rhs);
        }
        Ok(lhs)
    }

    fn application(&mut self, name: &str, col: usize, args: Vec<Term>) -> Result<Term, ParseError> {
        let id = self.sig.lookup(name).ok_or_else(|| ParseError::UnknownSymbol {
            line: self.line,
            col,
            name: name.to_string(),
        })?;
        let arity = self.sig.symbol(id).arity;
        if arity != args.len() {
            return Err(ParseError::Arity {
                line: self.line,
                col,
                name: name.to_string(),
                expected: arity,
                got: args.len(),
            });
        }
        Ok(Term::app(id, args))
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.syntax(self.eol_col(), "expected a term, found end of line"));
        };
        match tok.tok {
            Tok::Ident(name) => {
                self.pos += 1;
                // `f(t1, …)` call syntax: parenthesis glued to the name.
                if let Some(next) = self.peek() {
                    if next.tok == Tok::LParen && next.col == tok.end {
                        self.pos += 1;
                        let mut args = Vec::new();
                        if self.peek().map(|t| &t.tok) != Some(&Tok::RParen) {
                            args.push(self.expr()?);
                            while self.peek().map(|t| &t.tok) == Some(&Tok::Comma) {
                                self.pos += 1;
                                args.push(self.expr()?);
                            }
                        }
                        self.expect(Tok::RParen, "`)`")?;
                        return self.application(&name, tok.col, args);
                    }
                }
                if self.sig.lookup(&name).is_some() {
                    return self.application(&name, tok.col, Vec::new());
                }
                self.vars.resolve(&name).map(Term::Var).ok_or_else(|| {
                    self.syntax(tok.col, format!("variable `{name}` is not allowed here"))
                })
            }
            Tok::LParen => {
                self.pos += 1;
                if let Some(Token {
                    tok: Tok::Ident(name),
                    col,
                    ..
                }) = self.peek().cloned()
                {
                    let declared = self.sig.lookup(&name).map(|id| self.sig.symbol(id).arity);
                    let follow = self.toks.get(self.pos + 1).map(|t| t.tok.clone());
                    let is_prefix = match declared {
                        Some(arity) => arity > 0,
                        None => !matches!(follow, Some(Tok::Star) | Some(Tok::RParen) | Some(Tok::LParen)),
                    };
                    let glued_call = matches!(
                        self.toks.get(self.pos + 1),
                        Some(t) if t.tok == Tok::LParen && t.col == self.toks[self.pos].end
                    );
                    if is_prefix && !glued_call {
                        self.pos += 1;
                        let mut args = Vec::new();
                        while !matches!(self.peek().map(|t| &t.tok), Some(Tok::RParen) | None) {
                            args.push(self.atom()?);
                        }
                        self.expect(Tok::RParen, "`)`")?;
                        return self.application(&name, col, args);
                    }
                }
                let t = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => Err(self.syntax(tok.col, "expected a term")),
        }
    }
}

fn parse_term(
    line: usize,
    toks: &[Token],
    sig: &Signature,
    vars: Vars<'_>,
) -> Result<Term, ParseError> {
    let mut p = TermParser {
        line,
        toks,
        pos: 0,
        sig,
        vars,
    };
    let t = p.expr()?;
    if let Some(extra) = p.peek() {
        return Err(p.syntax(extra.col, "trailing input after term"));
    }
    Ok(t)
}

fn split_eq(line: usize, toks: &[Token]) -> Result<(&[Token], &[Token]), ParseError> {
    let eqs: Vec<usize> = toks
        .iter()
        .enumerate()
        .filter(|(_, t)| t.tok == Tok::Eq)
        .map(|(i, _)| i)
        .collect();
    match eqs.as_slice() {
        [i] => Ok((&toks[..*i], &toks[i + 1..])),
        [] => Err(ParseError::Syntax {
            line,
            col: toks.last().map(|t| t.end).unwrap_or(1),
            msg: "expected `=`".into(),
        }),
        [_, second, ..] => Err(ParseError::Syntax {
            line,
            col: toks[*second].col,
            msg: "more than one `=`".into(),
        }),
    }
}

struct Line {
    no: usize,
    toks: Vec<Token>,
}

/// Parses a presentation from presentation-file text.
pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let toks = tokenize(i + 1, raw)?;
        if !toks.is_empty() {
            lines.push(Line { no: i + 1, toks });
        }
    }

    let keyword = |l: &Line| match &l.toks[0].tok {
        Tok::Ident(k) => Ok(k.clone()),
        _ => Err(ParseError::Syntax {
            line: l.no,
            col: l.toks[0].col,
            msg: "expected a keyword".into(),
        }),
    };

    let mut name = None;
    let mut symbols: Vec<Symbol> = Vec::new();
    let mut groupoid_line = None;
    let mut id_lines = Vec::new();
    let mut witness_lines = Vec::new();
    for l in &lines {
        match keyword(l)?.as_str() {
            "name" => match &l.toks[1..] {
                [Token { tok: Tok::Ident(n), .. }] => name = Some(n.clone()),
                _ => {
                    return Err(ParseError::Syntax {
                        line: l.no,
                        col: l.toks[0].end,
                        msg: "expected `name <identifier>`".into(),
                    })
                }
            },
            "sig" => parse_sig(l, &mut symbols)?,
            "groupoid" => {
                if groupoid_line.is_some() {
                    return Err(ParseError::Invalid {
                        line: l.no,
                        msg: "groupoid term designated twice".into(),
                    });
                }
                groupoid_line = Some(l);
            }
            "id" => id_lines.push(l),
            "witness" => witness_lines.push(l),
            other => {
                return Err(ParseError::Syntax {
                    line: l.no,
                    col: l.toks[0].col,
                    msg: format!("unknown keyword `{other}`"),
                })
            }
        }
    }

    let mut sig = Signature::new(symbols).expect("duplicates rejected while reading sig");
    match groupoid_line {
        Some(l) => {
            if let Some(star) = l.toks.iter().find(|t| t.tok == Tok::Star) {
                return Err(ParseError::Syntax {
                    line: l.no,
                    col: star.col,
                    msg: "the groupoid term must be written without `*`".into(),
                });
            }
            let xy = [("x".to_string(), 0), ("y".to_string(), 1)];
            let t = parse_term(l.no, &l.toks[1..], &sig, Vars::Fixed(&xy))?;
            sig.set_groupoid(t).map_err(|e| ParseError::Invalid {
                line: l.no,
                msg: e.to_string(),
            })?;
        }
        None => {
            if let Some(t) = sig.default_groupoid() {
                sig.set_groupoid(t).expect("default groupoid is well formed");
            }
        }
    }

    let mut identities = Vec::new();
    for l in id_lines {
        let (lhs, rhs) = split_eq(l.no, &l.toks[1..])?;
        let mut names = Vec::new();
        let lhs = parse_term(l.no, lhs, &sig, Vars::Free(&mut names))?;
        let rhs = parse_term(l.no, rhs, &sig, Vars::Free(&mut names))?;
        identities.push(Identity::with_names(lhs, rhs, names));
    }

    let witness = parse_witnesses(&witness_lines, &sig)?;
    Ok(Presentation {
        name,
        signature: sig,
        identities,
        witness,
    })
}

fn parse_sig(l: &Line, symbols: &mut Vec<Symbol>) -> Result<(), ParseError> {
    let toks = &l.toks[1..];
    if toks.is_empty() {
        return Err(ParseError::Syntax {
            line: l.no,
            col: l.toks[0].end,
            msg: "expected `<name>/<arity>`".into(),
        });
    }
    for chunk in toks.chunks(3) {
        match chunk {
            [Token { tok: Tok::Ident(name), col, .. }, Token { tok: Tok::Slash, .. }, Token { tok: Tok::Ident(arity), col: acol, .. }] =>
            {
                let arity: usize = arity.parse().map_err(|_| ParseError::Syntax {
                    line: l.no,
                    col: *acol,
                    msg: format!("arity `{arity}` is not a number"),
                })?;
                if symbols.iter().any(|s| &s.name == name) {
                    return Err(ParseError::DuplicateSymbol {
                        line: l.no,
                        col: *col,
                        name: name.clone(),
                    });
                }
                symbols.push(Symbol {
                    name: name.clone(),
                    arity,
                });
            }
            _ => {
                return Err(ParseError::Syntax {
                    line: l.no,
                    col: chunk[0].col,
                    msg: "expected `<name>/<arity>`".into(),
                })
            }
        }
    }
    Ok(())
}

fn parse_witnesses(lines: &[&Line], sig: &Signature) -> Result<Option<WitnessSet>, ParseError> {
    if lines.is_empty() {
        return Ok(None);
    }
    let mut groups: BTreeMap<String, BTreeMap<usize, (&Line, &[Token])>> = BTreeMap::new();
    for l in lines {
        let bad = |col| ParseError::Syntax {
            line: l.no,
            col,
            msg: "expected `witness <m|zero|one|U> <index> = <term>`".into(),
        };
        let (kind, idx) = match &l.toks[1..] {
            [Token { tok: Tok::Ident(kind), .. }, Token { tok: Tok::Ident(idx), col, .. }, Token { tok: Tok::Eq, .. }, ..] => {
                let idx: usize = idx.parse().map_err(|_| bad(*col))?;
                (kind.clone(), idx)
            }
            _ => return Err(bad(l.toks[0].end)),
        };
        if !matches!(kind.as_str(), "m" | "zero" | "one" | "U") {
            return Err(ParseError::Syntax {
                line: l.no,
                col: l.toks[1].col,
                msg: format!("unknown witness kind `{kind}`"),
            });
        }
        if idx == 0 {
            return Err(ParseError::Invalid {
                line: l.no,
                msg: "witness indices start at 1".into(),
            });
        }
        let entry = groups.entry(kind).or_default();
        if entry.insert(idx, (l, &l.toks[4..])).is_some() {
            return Err(ParseError::Invalid {
                line: l.no,
                msg: "witness term declared twice".into(),
            });
        }
    }

    let collect = |kind: &str, vars: &[(String, usize)]| -> Result<Vec<Term>, ParseError> {
        let Some(group) = groups.get(kind) else {
            return Ok(Vec::new());
        };
        let mut out = Vec::new();
        for (expected, (idx, (l, toks))) in (1..).zip(group) {
            if *idx != expected {
                return Err(ParseError::Invalid {
                    line: l.no,
                    msg: format!("witness {kind} indices must be 1, 2, …; missing {expected}"),
                });
            }
            out.push(parse_term(l.no, toks, sig, Vars::Fixed(vars))?);
        }
        Ok(out)
    };
    let first_line = |kind: &str| groups.get(kind).and_then(|g| g.values().next()).map(|(l, _)| l.no);

    let xy = [("x".to_string(), 0), ("y".to_string(), 1)];
    let m = collect("m", &xy)?;
    let zero = collect("zero", &[])?;
    let one = collect("one", &[])?;
    let l = zero.len();
    let mut chain_vars: Vec<(String, usize)> = chain_var_names(l.max(1))
        .into_iter()
        .enumerate()
        .map(|(i, n)| (n, i))
        .collect();
    if l == 1 {
        chain_vars.push(("z1".into(), 2));
    }
    let u = collect("U", &chain_vars)?;

    let mut ws = WitnessSet::default();
    if !m.is_empty() {
        ws.connection = Some(ConnectionTerms::new(m).map_err(|e| ParseError::Invalid {
            line: first_line("m").unwrap_or(0),
            msg: e.to_string(),
        })?);
    }
    if !(zero.is_empty() && one.is_empty() && u.is_empty()) {
        let line = first_line("U")
            .or_else(|| first_line("zero"))
            .or_else(|| first_line("one"))
            .unwrap_or(0);
        ws.semidegeneracy = Some(
            SemidegeneracyTerms::new(zero, one, u)
                .map_err(|e| ParseError::Invalid { line, msg: e.to_string() })?,
        );
    }
    Ok(Some(ws))
}
