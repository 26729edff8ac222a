//! Builders for ψ, π, Φ, the centrality suite, ζ and the main sentence.

use crate::algebra::{Identity, Presentation, Signature, Term};
use crate::search::Budget;
use crate::witness::{identity_valid_bounded, ConnectionTerms, SemidegeneracyTerms, WitnessSet};

use super::{tptp_name, DefId, Definition, Formula, FormulaBook, FormulaError, VarId};

/// Which elements the existential midpoints of the general Φ range over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Indexing {
    /// `a_1 … a_{k−1}`: one link per chain term.
    #[default]
    KMinusOne,
    /// `a_1 … a_{n−1}` as printed, with `n` the connection length.
    NMinusOne,
}

/// How the complement tuple `w⃗` of the general Φ is supplied.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum WMode {
    /// `Φ(x, y, z⃗, w⃗)`; callers pass the complementary idempotent.
    #[default]
    ComplementParameter,
    /// `w⃗` fixed to the closed terms `0⃗`.
    ZeroClosed,
}

/// Which of `z⃗`, `w⃗` goes into the third π argument on odd links.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// Odd links `π(·, ·, U_j(z⃗), U_j(w⃗))`, even links swapped.
    Printed,
    /// Odd links `π(·, ·, U_j(w⃗), U_j(z⃗))`, even links swapped.
    #[default]
    Mirrored,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct GeneralPhi {
    pub indexing: Indexing,
    pub w_mode: WMode,
    pub orientation: Orientation,
}

impl GeneralPhi {
    pub fn all() -> Vec<GeneralPhi> {
        let mut out = Vec::new();
        for indexing in [Indexing::KMinusOne, Indexing::NMinusOne] {
            for w_mode in [WMode::ComplementParameter, WMode::ZeroClosed] {
                for orientation in [Orientation::Printed, Orientation::Mirrored] {
                    out.push(GeneralPhi {
                        indexing,
                        w_mode,
                        orientation,
                    });
                }
            }
        }
        out
    }

    pub fn label(&self) -> String {
        let i = match self.indexing {
            Indexing::KMinusOne => "k-1",
            Indexing::NMinusOne => "n-1",
        };
        let w = match self.w_mode {
            WMode::ComplementParameter => "w-param",
            WMode::ZeroClosed => "w=0",
        };
        let o = match self.orientation {
            Orientation::Printed => "printed",
            Orientation::Mirrored => "mirrored",
        };
        format!("{i}/{w}/{o}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PhiVariant {
    /// Built from π over the connection and chain terms.
    General(GeneralPhi),
    /// `∀u (⋀_i u·U_i(x,y,0⃗) = u·U_i(x,y,z⃗) → u·x = u·y)`; needs the R identities.
    R,
}

impl Default for PhiVariant {
    fn default() -> Self {
        PhiVariant::General(GeneralPhi::default())
    }
}

impl PhiVariant {
    fn takes_complement(&self) -> bool {
        matches!(
            self,
            PhiVariant::General(GeneralPhi {
                w_mode: WMode::ComplementParameter,
                ..
            })
        )
    }
}

/// Centrality-suite definitions in the order they are conjoined in ζ;
/// `PRES_<symbol>` and `PRES_<symbol>'` follow for every symbol.
pub const SUITE_NAMES: [&str; 10] = [
    "CAN", "PROD", "INT", "REF", "SYM", "TRANS", "CAN'", "REF'", "SYM'", "TRANS'",
];

/// Size bound of the finite check that the R identities hold.
const R_CHECK_BOUND: usize = 4;

/// Refutes (up to the bound) associativity, idempotence and
/// `x·y·z ≈ y·x·z`.
pub fn check_r_identities(p: &Presentation, bound: usize) -> Result<(), FormulaError> {
    let sig = &p.signature;
    let (x, y, z) = (Term::Var(0), Term::Var(1), Term::Var(2));
    let names = vec!["x".to_string(), "y".to_string(), "z".to_string()];
    let ids = [
        Identity::with_names(
            sig.mul(sig.mul(x.clone(), y.clone()), z.clone()),
            sig.mul(x.clone(), sig.mul(y.clone(), z.clone())),
            names.clone(),
        ),
        Identity::with_names(sig.mul(x.clone(), x.clone()), x.clone(), names.clone()),
        Identity::with_names(
            sig.mul(sig.mul(x.clone(), y.clone()), z.clone()),
            sig.mul(sig.mul(y, x), z),
            names,
        ),
    ];
    for id in &ids {
        let verdict = identity_valid_bounded(p, id, bound, Budget::unlimited())
            .map_err(|e| FormulaError::NotRVariety(e.to_string()))?;
        if verdict.is_refuted() {
            return Err(FormulaError::NotRVariety(id.display(sig).to_string()));
        }
    }
    Ok(())
}

/// Local variable table of one definition.
#[derive(Default)]
struct Scope {
    names: Vec<String>,
}

impl Scope {
    fn id(&mut self, name: impl Into<String>) -> VarId {
        self.names.push(name.into());
        self.names.len() - 1
    }

    fn ids(&mut self, prefix: &str, count: usize) -> Vec<VarId> {
        (1..=count).map(|i| self.id(format!("{prefix}{i}"))).collect()
    }

    /// A tuple variable: just `prefix` when it has a single component.
    fn tuple(&mut self, prefix: &str, count: usize) -> Vec<VarId> {
        if count == 1 {
            vec![self.id(prefix)]
        } else {
            self.ids(prefix, count)
        }
    }
}

fn vars(ids: &[VarId]) -> Vec<Term> {
    ids.iter().map(|&v| Term::Var(v)).collect()
}

struct BookBuilder<'a> {
    sig: &'a Signature,
    defs: Vec<Definition>,
}

impl<'a> BookBuilder<'a> {
    fn new(sig: &'a Signature) -> Result<Self, FormulaError> {
        sig.require_groupoid()?;
        Ok(BookBuilder { sig, defs: Vec::new() })
    }

    fn push(&mut self, name: impl Into<String>, scope: Scope, params: Vec<VarId>, body: Formula) -> DefId {
        self.defs.push(Definition {
            name: name.into(),
            params,
            var_names: scope.names,
            body,
        });
        self.defs.len() - 1
    }

    fn finish(self, root: DefId) -> FormulaBook {
        let book = FormulaBook {
            signature: self.sig.clone(),
            defs: self.defs,
            root,
        };
        debug_assert_eq!(book.check(), Ok(()));
        book
    }

    fn mul(&self, a: &Term, b: &Term) -> Term {
        self.sig.mul(a.clone(), b.clone())
    }

    /// `u·a = u·b`
    fn absorbs(&self, u: &Term, a: &Term, b: &Term) -> Formula {
        Formula::eq(self.mul(u, a), self.mul(u, b))
    }

    /// `ψ(x, y, z) = ∀u⃗ (⋀ u_{2i−1}·p_{i−1} = u_{2i−1}·p_i → ∃v⃗ ⋀ u_{2i−1}·q_{i−1} = u_{2i−1}·q_i)`
    /// with `p = x, u_2, u_4, …, y` and `q = x, v_1, …, v_{n−1}, z`.
    fn psi(&mut self, n: usize) -> DefId {
        assert!(n >= 1);
        let mut s = Scope::default();
        let (x, y, z) = (s.id("x"), s.id("y"), s.id("z"));
        let u = s.tuple("u", 2 * n - 1);
        let v = s.ids("v", n - 1);
        let odd = |i: usize| Term::Var(u[2 * i - 2]);
        let mut p = vec![Term::Var(x)];
        p.extend((1..n).map(|i| Term::Var(u[2 * i - 1])));
        p.push(Term::Var(y));
        let mut q = vec![Term::Var(x)];
        q.extend(vars(&v));
        q.push(Term::Var(z));
        let ante = (1..=n).map(|i| self.absorbs(&odd(i), &p[i - 1], &p[i])).collect();
        let cons = (1..=n).map(|i| self.absorbs(&odd(i), &q[i - 1], &q[i])).collect();
        let body = Formula::forall(
            u.clone(),
            Formula::implies(Formula::and(ante), Formula::exists(v, Formula::and(cons))),
        );
        self.push("psi", s, vec![x, y, z], body)
    }

    /// `π(x, y, z, w) = ∀w_1 w_2 (ψ(z,w_1,w) ∧ ψ(w,w_2,z) → ψ(x,w_1,y) ∧ ψ(y,w_2,x))`
    fn pi(&mut self, psi: DefId) -> DefId {
        let mut s = Scope::default();
        let [x, y, z, w] = ["x", "y", "z", "w"].map(|n| Term::Var(s.id(n)));
        let (w1, w2) = (s.id("w1"), s.id("w2"));
        let (t1, t2) = (Term::Var(w1), Term::Var(w2));
        let call = |a: &Term, b: &Term, c: &Term| Formula::Call(psi, vec![a.clone(), b.clone(), c.clone()]);
        let body = Formula::forall(
            vec![w1, w2],
            Formula::implies(
                Formula::And(vec![call(&z, &t1, &w), call(&w, &t2, &z)]),
                Formula::And(vec![call(&x, &t1, &y), call(&y, &t2, &x)]),
            ),
        );
        self.push("pi", s, vec![0, 1, 2, 3], body)
    }

    fn phi_general(&mut self, pi: DefId, conn: &ConnectionTerms, sd: &SemidegeneracyTerms, g: GeneralPhi) -> DefId {
        let mut s = Scope::default();
        let (x, y) = (s.id("x"), s.id("y"));
        let z = s.tuple("z", sd.l());
        let mut params = vec![x, y];
        params.extend(&z);
        let w: Vec<Term> = match g.w_mode {
            WMode::ComplementParameter => {
                let w = s.tuple("w", sd.l());
                params.extend(&w);
                vars(&w)
            }
            WMode::ZeroClosed => sd.zero().to_vec(),
        };
        let z = vars(&z);
        let k = sd.k();
        let links = match g.indexing {
            Indexing::KMinusOne => k,
            Indexing::NMinusOne => conn.n(),
        };
        let a = s.ids("a", links - 1);
        let mut points = vec![Term::Var(x)];
        points.extend(vars(&a));
        points.push(Term::Var(y));
        let mut conjuncts = Vec::new();
        for j in 1..=links {
            // chain index of the link (1-based)
            let c = match g.indexing {
                Indexing::KMinusOne => j,
                Indexing::NMinusOne if j == 1 => 1,
                Indexing::NMinusOne if j == links => k,
                Indexing::NMinusOne => j.min(k),
            };
            // printed: first, last and odd middle links take (z⃗, w⃗)
            let straight = j == 1 || j == links || j % 2 == 1;
            let straight = straight == (g.orientation == Orientation::Printed);
            let uz = sd.instantiate(c - 1, Term::Var(x), Term::Var(y), &z);
            let uw = sd.instantiate(c - 1, Term::Var(x), Term::Var(y), &w);
            let (third, fourth) = if straight { (uz, uw) } else { (uw, uz) };
            conjuncts.push(Formula::Call(
                pi,
                vec![points[j - 1].clone(), points[j].clone(), third, fourth],
            ));
        }
        let body = Formula::exists(a, Formula::and(conjuncts));
        self.push("Phi", s, params, body)
    }

    fn phi_r(&mut self, sd: &SemidegeneracyTerms) -> DefId {
        let mut s = Scope::default();
        let (x, y) = (s.id("x"), s.id("y"));
        let z = s.tuple("z", sd.l());
        let uid = s.id("u");
        let u = Term::Var(uid);
        let (tx, ty, tz) = (Term::Var(x), Term::Var(y), vars(&z));
        let ante = (0..sd.k())
            .map(|i| {
                let at0 = sd.instantiate(i, tx.clone(), ty.clone(), sd.zero());
                let atz = sd.instantiate(i, tx.clone(), ty.clone(), &tz);
                self.absorbs(&u, &at0, &atz)
            })
            .collect();
        let body = Formula::forall(
            vec![uid],
            Formula::implies(Formula::and(ante), self.absorbs(&u, &tx, &ty)),
        );
        let mut params = vec![x, y];
        params.extend(z);
        self.push("Phi", s, params, body)
    }

    /// Adds the suite; returns the ids in ζ order.
    fn suite(&mut self, phi: DefId, variant: PhiVariant, l: usize, sd: &SemidegeneracyTerms) -> Vec<DefId> {
        let complement = variant.takes_complement();
        let sig = self.sig;
        let mut ids = Vec::new();
        for primed in [false, true] {
            for &name in &SUITE_NAMES[..6] {
                if primed && (name == "PROD" || name == "INT") {
                    continue;
                }
                let mut s = Scope::default();
                let zs = s.ids("z", l);
                let ws = s.ids("w", l);
                let mut params = zs.clone();
                params.extend(&ws);
                let (mut z, mut w) = (vars(&zs), vars(&ws));
                if primed {
                    std::mem::swap(&mut z, &mut w);
                }
                // Φ(a, b, z⃗) and Φ(a, b, w⃗)
                let pz = |a: &Term, b: &Term| {
                    let mut args = vec![a.clone(), b.clone()];
                    args.extend(z.iter().cloned());
                    if complement {
                        args.extend(w.iter().cloned());
                    }
                    Formula::Call(phi, args)
                };
                let pw = |a: &Term, b: &Term| {
                    let mut args = vec![a.clone(), b.clone()];
                    args.extend(w.iter().cloned());
                    if complement {
                        args.extend(z.iter().cloned());
                    }
                    Formula::Call(phi, args)
                };
                let body = match name {
                    "CAN" => {
                        let mut c: Vec<Formula> = (0..l).map(|i| pz(&sd.zero()[i], &z[i])).collect();
                        c.extend((0..l).map(|i| pz(&sd.one()[i], &w[i])));
                        Formula::and(c)
                    }
                    "PROD" => {
                        let (x, y, m) = (s.id("x"), s.id("y"), s.id("z"));
                        let (tx, ty, tm) = (Term::Var(x), Term::Var(y), Term::Var(m));
                        Formula::forall(
                            vec![x, y],
                            Formula::exists(vec![m], Formula::And(vec![pz(&tx, &tm), pw(&tm, &ty)])),
                        )
                    }
                    "INT" => {
                        let (x, y) = (s.id("x"), s.id("y"));
                        let (tx, ty) = (Term::Var(x), Term::Var(y));
                        Formula::forall(
                            vec![x, y],
                            Formula::implies(
                                Formula::And(vec![pz(&tx, &ty), pw(&tx, &ty)]),
                                Formula::eq(tx.clone(), ty.clone()),
                            ),
                        )
                    }
                    "REF" => {
                        let x = s.id("x");
                        Formula::forall(vec![x], pz(&Term::Var(x), &Term::Var(x)))
                    }
                    "SYM" => {
                        let (x, y, m) = (s.id("x"), s.id("y"), s.id("z"));
                        let (tx, ty, tm) = (Term::Var(x), Term::Var(y), Term::Var(m));
                        Formula::forall(
                            vec![x, y, m],
                            Formula::implies(
                                Formula::And(vec![pz(&tx, &ty), pz(&ty, &tm), pw(&tm, &tx)]),
                                Formula::eq(tm.clone(), tx.clone()),
                            ),
                        )
                    }
                    "TRANS" => {
                        let (x, y, m, u) = (s.id("x"), s.id("y"), s.id("z"), s.id("u"));
                        let [tx, ty, tm, tu] = [x, y, m, u].map(Term::Var);
                        Formula::forall(
                            vec![x, y, m, u],
                            Formula::implies(
                                Formula::And(vec![pz(&tx, &ty), pz(&ty, &tm), pz(&tx, &tu), pw(&tu, &tm)]),
                                Formula::eq(tu.clone(), tm.clone()),
                            ),
                        )
                    }
                    _ => unreachable!(),
                };
                let full = if primed { format!("{name}'") } else { name.to_string() };
                ids.push(self.push(full, s, params, body));
            }
        }
        for primed in [false, true] {
            for (sym, symbol) in sig.symbols().iter().enumerate() {
                let m = symbol.arity;
                let mut s = Scope::default();
                let zs = s.ids("z", l);
                let ws = s.ids("w", l);
                let mut params = zs.clone();
                params.extend(&ws);
                let (mut z, mut w) = (vars(&zs), vars(&ws));
                if primed {
                    std::mem::swap(&mut z, &mut w);
                }
                let call = |a: &Term, b: &Term, first: &[Term], second: &[Term]| {
                    let mut args = vec![a.clone(), b.clone()];
                    args.extend(first.iter().cloned());
                    if complement {
                        args.extend(second.iter().cloned());
                    }
                    Formula::Call(phi, args)
                };
                let mut bound = Vec::new();
                let (mut us, mut vs) = (Vec::new(), Vec::new());
                for j in 1..=m {
                    let (u, v) = if m == 1 {
                        (s.id("u"), s.id("v"))
                    } else {
                        (s.id(format!("u{j}")), s.id(format!("v{j}")))
                    };
                    bound.extend([u, v]);
                    us.push(Term::Var(u));
                    vs.push(Term::Var(v));
                }
                let free = s.id("z");
                bound.push(free);
                let tfree = Term::Var(free);
                let fu = Term::app(sym, us.clone());
                let fv = Term::app(sym, vs.clone());
                let mut ante: Vec<Formula> = (0..m).map(|j| call(&us[j], &vs[j], &z, &w)).collect();
                ante.push(call(&fu, &tfree, &z, &w));
                ante.push(call(&tfree, &fv, &w, &z));
                let body = Formula::forall(
                    bound,
                    Formula::implies(Formula::And(ante), Formula::eq(tfree.clone(), fv.clone())),
                );
                let name = format!("PRES_{}{}", tptp_name(&symbol.name), if primed { "'" } else { "" });
                ids.push(self.push(name, s, params, body));
            }
        }
        ids
    }

    fn zeta(&mut self, suite: &[DefId], l: usize) -> DefId {
        let mut s = Scope::default();
        let mut params = s.ids("z", l);
        params.extend(s.ids("w", l));
        let args = vars(&params);
        let body = Formula::And(suite.iter().map(|&d| Formula::Call(d, args.clone())).collect());
        self.push("zeta", s, params, body)
    }

    fn main(&mut self, zeta: DefId, sd: &SemidegeneracyTerms) -> DefId {
        let l = sd.l();
        let mut s = Scope::default();
        let e = s.tuple("e", l);
        let f = s.tuple("f", l);
        let (te, tf) = (vars(&e), vars(&f));
        let tuple_eq = |a: &[Term], b: &[Term]| {
            a.iter()
                .zip(b)
                .map(|(p, q)| Formula::eq(p.clone(), q.clone()))
                .collect::<Vec<_>>()
        };
        let nontrivial = Formula::not(Formula::and(tuple_eq(sd.zero(), sd.one())));
        let mut bound = e.clone();
        bound.extend(&f);
        let mut args = te.clone();
        args.extend(tf.iter().cloned());
        let mut e0f1 = tuple_eq(&te, sd.zero());
        e0f1.extend(tuple_eq(&tf, sd.one()));
        let mut e1f0 = tuple_eq(&te, sd.one());
        e1f0.extend(tuple_eq(&tf, sd.zero()));
        let body = Formula::And(vec![
            nontrivial,
            Formula::forall(
                bound,
                Formula::implies(
                    Formula::Call(zeta, args),
                    Formula::Or(vec![Formula::and(e0f1), Formula::and(e1f0)]),
                ),
            ),
        ]);
        self.push("main", s, vec![], body)
    }
}

fn connection<'w>(w: &'w WitnessSet, what: &'static str) -> Result<&'w ConnectionTerms, FormulaError> {
    w.connection.as_ref().ok_or(FormulaError::MissingConnection(what))
}

fn semidegeneracy<'w>(w: &'w WitnessSet, what: &'static str) -> Result<&'w SemidegeneracyTerms, FormulaError> {
    w.semidegeneracy.as_ref().ok_or(FormulaError::MissingSemidegeneracy(what))
}

/// ψ for the connection length of `w`.
pub fn build_psi(sig: &Signature, w: &WitnessSet) -> Result<FormulaBook, FormulaError> {
    let n = connection(w, "psi")?.n();
    build_psi_schema(sig, n)
}

/// ψ for an arbitrary `n ≥ 1`, independent of any witness terms.
pub fn build_psi_schema(sig: &Signature, n: usize) -> Result<FormulaBook, FormulaError> {
    let mut b = BookBuilder::new(sig)?;
    let psi = b.psi(n.max(1));
    Ok(b.finish(psi))
}

pub fn build_pi(sig: &Signature, w: &WitnessSet) -> Result<FormulaBook, FormulaError> {
    let n = connection(w, "pi")?.n();
    let mut b = BookBuilder::new(sig)?;
    let psi = b.psi(n);
    let pi = b.pi(psi);
    Ok(b.finish(pi))
}

fn phi_into(b: &mut BookBuilder, p: &Presentation, w: &WitnessSet, variant: PhiVariant) -> Result<DefId, FormulaError> {
    match variant {
        PhiVariant::General(g) => {
            let conn = connection(w, "Phi")?;
            let sd = semidegeneracy(w, "Phi")?;
            let psi = b.psi(conn.n());
            let pi = b.pi(psi);
            Ok(b.phi_general(pi, conn, sd, g))
        }
        PhiVariant::R => {
            let sd = semidegeneracy(w, "Phi")?;
            check_r_identities(p, R_CHECK_BOUND)?;
            Ok(b.phi_r(sd))
        }
    }
}

pub fn build_phi(p: &Presentation, w: &WitnessSet, variant: PhiVariant) -> Result<FormulaBook, FormulaError> {
    let mut b = BookBuilder::new(&p.signature)?;
    let phi = phi_into(&mut b, p, w, variant)?;
    Ok(b.finish(phi))
}

/// Book holding Φ and every suite member, rooted at the last one.
pub fn build_centrality_suite(p: &Presentation, w: &WitnessSet, variant: PhiVariant) -> Result<FormulaBook, FormulaError> {
    let sd = semidegeneracy(w, "the centrality suite")?;
    let mut b = BookBuilder::new(&p.signature)?;
    let phi = phi_into(&mut b, p, w, variant)?;
    let suite = b.suite(phi, variant, sd.l(), sd);
    Ok(b.finish(*suite.last().expect("suite is non-empty")))
}

/// `ζ(z⃗, w⃗)`: the conjunction of the centrality suite.
pub fn build_zeta(p: &Presentation, w: &WitnessSet, variant: PhiVariant) -> Result<FormulaBook, FormulaError> {
    let sd = semidegeneracy(w, "zeta")?;
    let mut b = BookBuilder::new(&p.signature)?;
    let phi = phi_into(&mut b, p, w, variant)?;
    let suite = b.suite(phi, variant, sd.l(), sd);
    let zeta = b.zeta(&suite, sd.l());
    Ok(b.finish(zeta))
}

/// The sentence true exactly in the directly indecomposable members.
pub fn build_main_sentence(p: &Presentation, w: &WitnessSet, variant: PhiVariant) -> Result<FormulaBook, FormulaError> {
    let sd = semidegeneracy(w, "the main sentence")?;
    let mut b = BookBuilder::new(&p.signature)?;
    let phi = phi_into(&mut b, p, w, variant)?;
    let suite = b.suite(phi, variant, sd.l(), sd);
    let zeta = b.zeta(&suite, sd.l());
    let main = b.main(zeta, sd);
    Ok(b.finish(main))
}
