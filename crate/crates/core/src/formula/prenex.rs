//! Quantifier-alternation class of a formula. Two independent routes: a
//! recurrence on (Σ-level, Π-level) pairs, and an explicit prenex
//! transformation whose prefix is then counted.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::algebra::Term;

use super::{Formula, FormulaBook, VarId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PrenexClass {
    Open,
    Sigma(usize),
    Pi(usize),
}

impl PrenexClass {
    /// The least class for the given levels; ties go to Π.
    fn from_levels(sigma: usize, pi: usize) -> Self {
        if sigma == 0 && pi == 0 {
            PrenexClass::Open
        } else if pi <= sigma {
            PrenexClass::Pi(pi)
        } else {
            PrenexClass::Sigma(sigma)
        }
    }
}

impl fmt::Display for PrenexClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrenexClass::Open => f.write_str("open"),
            PrenexClass::Sigma(n) => write!(f, "Σ{n}"),
            PrenexClass::Pi(n) => write!(f, "Π{n}"),
        }
    }
}

impl Serialize for PrenexClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl Quantifier {
    fn flip(self) -> Self {
        match self {
            Quantifier::Forall => Quantifier::Exists,
            Quantifier::Exists => Quantifier::Forall,
        }
    }
}

/// Prenex class of the root of `book` by the level recurrence.
pub fn classify_prenex(book: &FormulaBook) -> PrenexClass {
    let mut cache = vec![None; book.defs.len()];
    let (s, p) = levels(book, &book.root().body, &mut cache);
    PrenexClass::from_levels(s, p)
}

fn levels(book: &FormulaBook, f: &Formula, cache: &mut Vec<Option<(usize, usize)>>) -> (usize, usize) {
    match f {
        Formula::True | Formula::False | Formula::Eq(..) => (0, 0),
        Formula::Call(d, _) => {
            if let Some(l) = cache[*d] {
                return l;
            }
            let l = levels(book, &book.defs[*d].body, cache);
            cache[*d] = Some(l);
            l
        }
        Formula::Not(g) => {
            let (s, p) = levels(book, g, cache);
            (p, s)
        }
        Formula::And(fs) | Formula::Or(fs) => fs.iter().fold((0, 0), |(s, p), g| {
            let (gs, gp) = levels(book, g, cache);
            (s.max(gs), p.max(gp))
        }),
        Formula::Implies(a, b) => {
            let (as_, ap) = levels(book, a, cache);
            let (bs, bp) = levels(book, b, cache);
            (ap.max(bs), as_.max(bp))
        }
        Formula::Forall(_, g) => {
            let (s, p) = levels(book, g, cache);
            let p = p.min(s + 1).max(1);
            (p + 1, p)
        }
        Formula::Exists(_, g) => {
            let (s, p) = levels(book, g, cache);
            let s = s.min(p + 1).max(1);
            (s, s + 1)
        }
    }
}

/// An explicit prenex form: quantifier blocks followed by an open matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrenexFormula {
    pub prefix: Vec<(Quantifier, Vec<VarId>)>,
    pub matrix: Formula,
    pub var_names: Vec<String>,
}

impl PrenexFormula {
    pub fn to_formula(&self) -> Formula {
        self.prefix.iter().rev().fold(self.matrix.clone(), |f, (q, vs)| match q {
            Quantifier::Forall => Formula::forall(vs.clone(), f),
            Quantifier::Exists => Formula::exists(vs.clone(), f),
        })
    }

    /// Printed with the inlined root's variable names, suffixed where
    /// renaming apart duplicated them.
    pub fn text(&self, book: &FormulaBook) -> String {
        let mut used: Vec<VarId> = self.matrix.free_vars().into_iter().collect();
        used.sort_unstable();
        let mut order: Vec<VarId> = used.iter().copied().filter(|v| !self.prefix.iter().any(|(_, vs)| vs.contains(v))).collect();
        order.extend(self.prefix.iter().flat_map(|(_, vs)| vs.iter().copied()));
        let mut names = self.var_names.clone();
        let mut seen = std::collections::HashMap::new();
        for v in order {
            let k = seen.entry(self.var_names[v].as_str()).or_insert(0usize);
            *k += 1;
            if *k > 1 {
                names[v] = format!("{}_{k}", self.var_names[v]);
            }
        }
        super::print::formula_text(book, &self.to_formula(), &names)
    }

    pub fn class(&self) -> PrenexClass {
        match self.prefix.first() {
            None => PrenexClass::Open,
            Some((Quantifier::Forall, _)) => PrenexClass::Pi(self.prefix.len()),
            Some((Quantifier::Exists, _)) => PrenexClass::Sigma(self.prefix.len()),
        }
    }
}

#[derive(Clone)]
struct Form {
    prefix: Vec<(Quantifier, Vec<VarId>)>,
    matrix: Formula,
}

impl Form {
    fn open(matrix: Formula) -> Self {
        Form { prefix: Vec::new(), matrix }
    }

    /// Level of this form read as a class led by `q`.
    fn level(&self, q: Quantifier) -> usize {
        match self.prefix.first() {
            None => 0,
            Some((first, _)) if *first == q => self.prefix.len(),
            Some(_) => self.prefix.len() + 1,
        }
    }

    fn negate(self) -> Self {
        Form {
            prefix: self.prefix.into_iter().map(|(q, vs)| (q.flip(), vs)).collect(),
            matrix: Formula::not(self.matrix),
        }
    }

    fn push_block(prefix: &mut Vec<(Quantifier, Vec<VarId>)>, q: Quantifier, vs: Vec<VarId>) {
        if vs.is_empty() {
            return;
        }
        match prefix.last_mut() {
            Some((last, block)) if *last == q => block.extend(vs),
            _ => prefix.push((q, vs)),
        }
    }

    fn quantify(self, q: Quantifier, vs: &[VarId]) -> Self {
        let mut prefix = Vec::new();
        Form::push_block(&mut prefix, q, vs.to_vec());
        for (bq, bvs) in self.prefix {
            Form::push_block(&mut prefix, bq, bvs);
        }
        Form { prefix, matrix: self.matrix }
    }
}

/// Best forms led by ∀ and by ∃.
#[derive(Clone)]
struct Pair {
    pi: Form,
    sigma: Form,
}

impl Pair {
    fn best(&self, q: Quantifier) -> &Form {
        match q {
            Quantifier::Forall => &self.pi,
            Quantifier::Exists => &self.sigma,
        }
    }
}

/// Interleaves the children's prefixes greedily starting with `q`.
fn merge(children: &[Form], q: Quantifier, conj: bool) -> Form {
    let mut heads = vec![0usize; children.len()];
    let mut prefix = Vec::new();
    let mut cur = q;
    while children.iter().zip(&heads).any(|(c, &h)| h < c.prefix.len()) {
        let mut block = Vec::new();
        for (c, h) in children.iter().zip(heads.iter_mut()) {
            if let Some((bq, bvs)) = c.prefix.get(*h) {
                if *bq == cur {
                    block.extend(bvs);
                    *h += 1;
                }
            }
        }
        Form::push_block(&mut prefix, cur, block);
        cur = cur.flip();
    }
    let matrices = children.iter().map(|c| c.matrix.clone()).collect();
    Form {
        prefix,
        matrix: if conj { Formula::And(matrices) } else { Formula::Or(matrices) },
    }
}

fn build(f: &Formula) -> Pair {
    match f {
        Formula::True | Formula::False | Formula::Eq(..) | Formula::Call(..) => {
            let o = Form::open(f.clone());
            Pair { pi: o.clone(), sigma: o }
        }
        Formula::Not(g) => {
            let p = build(g);
            Pair {
                pi: p.sigma.negate(),
                sigma: p.pi.negate(),
            }
        }
        Formula::Implies(a, b) => build(&Formula::Or(vec![Formula::not((**a).clone()), (**b).clone()])),
        Formula::And(fs) | Formula::Or(fs) => {
            let conj = matches!(f, Formula::And(_));
            let pairs: Vec<Pair> = fs.iter().map(build).collect();
            let side = |q: Quantifier| {
                let children: Vec<Form> = pairs.iter().map(|p| p.best(q).clone()).collect();
                merge(&children, q, conj)
            };
            Pair {
                pi: side(Quantifier::Forall),
                sigma: side(Quantifier::Exists),
            }
        }
        Formula::Forall(vs, g) | Formula::Exists(vs, g) => {
            let q = if matches!(f, Formula::Forall(..)) {
                Quantifier::Forall
            } else {
                Quantifier::Exists
            };
            let p = build(g);
            let same = p.best(q).clone().quantify(q, vs);
            let other = p.best(q.flip()).clone().quantify(q, vs);
            let best = if other.level(q) < same.level(q) { other } else { same };
            Pair {
                pi: best.clone(),
                sigma: best,
            }
        }
    }
}

/// Renames every bound variable to a fresh index.
fn rename_apart(f: &Formula, map: &mut Vec<VarId>, names: &mut Vec<String>) -> Formula {
    let term = |t: &Term, map: &Vec<VarId>| t.map_vars(&|v| map[v]);
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Eq(a, b) => Formula::Eq(term(a, map), term(b, map)),
        Formula::Call(d, args) => Formula::Call(*d, args.iter().map(|a| term(a, map)).collect()),
        Formula::Not(g) => Formula::not(rename_apart(g, map, names)),
        Formula::And(fs) => Formula::And(fs.iter().map(|g| rename_apart(g, map, names)).collect()),
        Formula::Or(fs) => Formula::Or(fs.iter().map(|g| rename_apart(g, map, names)).collect()),
        Formula::Implies(a, b) => Formula::implies(rename_apart(a, map, names), rename_apart(b, map, names)),
        Formula::Forall(vs, g) | Formula::Exists(vs, g) => {
            let saved: Vec<VarId> = vs.iter().map(|&v| map[v]).collect();
            let fresh: Vec<VarId> = vs
                .iter()
                .map(|&v| {
                    names.push(names[map[v]].clone());
                    map[v] = names.len() - 1;
                    map[v]
                })
                .collect();
            let body = rename_apart(g, map, names);
            for (&v, s) in vs.iter().zip(saved) {
                map[v] = s;
            }
            match f {
                Formula::Forall(..) => Formula::Forall(fresh, Box::new(body)),
                _ => Formula::Exists(fresh, Box::new(body)),
            }
        }
    }
}

/// A prenex form of the fully inlined root with the fewest quantifier
/// alternations (Π-led on ties).
pub fn prenex_form(book: &FormulaBook) -> PrenexFormula {
    let (f, mut names) = book.inline_root();
    let mut map: Vec<VarId> = (0..names.len()).collect();
    let f = rename_apart(&f, &mut map, &mut names);
    let p = build(&f);
    let (s, q) = (p.sigma.level(Quantifier::Exists), p.pi.level(Quantifier::Forall));
    let chosen = if q <= s { p.pi } else { p.sigma };
    PrenexFormula {
        prefix: chosen.prefix,
        matrix: chosen.matrix,
        var_names: names,
    }
}

/// Prenex class read off the prefix of [`prenex_form`].
pub fn classify_prenex_constructive(book: &FormulaBook) -> PrenexClass {
    prenex_form(book).class()
}
