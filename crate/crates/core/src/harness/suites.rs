use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::algebra::{
    direct_product, for_each_assignment, AlgebraError, DirectProduct, Element, FiniteAlgebra, Presentation, Term,
    DEFAULT_MAX_PRODUCT,
};
use crate::congruence::{central_pairs, is_directly_indecomposable, CentralPair, CongruenceError};
use crate::formula::{
    build_main_sentence, build_phi, build_pi, build_psi_schema, build_zeta, check_r_identities, EvalError,
    Evaluator, FormulaBook, FormulaError, GeneralPhi, PhiVariant, WMode,
};
use crate::order::{related_order, OrderError, OrderRelation};
use crate::search::{collect_models_up_to, Budget, Filters, SearchError};
use crate::witness::WitnessSet;

use super::report::{Bounds, Check, Counterexample, ModelResult, Verdict, VerificationReport, MAX_COUNTEREXAMPLES};

pub const DEFAULT_SEED: u64 = 0x5eed_0f_90_6709;

/// Product-size caps: Π1 Φ is cheap, the Σ4 Φ is not.
pub const R_PRODUCT_BOUND: usize = 16;
pub const GENERAL_PRODUCT_BOUND: usize = 9;

/// Per (formula, factor pair), larger tuple spaces are sampled.
const FACTORABLE_EXHAUSTIVE: u64 = 20_000;

/// ψ lengths tried when no connection terms are available.
pub const SCHEMA_LENGTHS: [usize; 3] = [1, 2, 3];

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("budget exceeded")]
    Budget,
    #[error("not a model of the presentation: {identity} fails at {assignment:?}")]
    NotAModel { identity: String, assignment: Vec<Element> },
    #[error("missing witness data: {0}")]
    MissingWitness(&'static str),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Search(SearchError),
    #[error(transparent)]
    Congruence(#[from] CongruenceError),
    #[error(transparent)]
    Eval(EvalError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Order(#[from] OrderError),
}

impl From<EvalError> for HarnessError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Budget(_) | EvalError::Deadline => HarnessError::Budget,
            other => HarnessError::Eval(other),
        }
    }
}

impl From<SearchError> for HarnessError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::Budget { .. } => HarnessError::Budget,
            other => HarnessError::Search(other),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Psi,
    Pi,
    Phi,
    Zeta,
    Main,
    Factorable,
    RelSemilatt,
    CotaInf,
    Claim,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Psi,
        Suite::Pi,
        Suite::Phi,
        Suite::Zeta,
        Suite::Main,
        Suite::Factorable,
        Suite::RelSemilatt,
        Suite::CotaInf,
        Suite::Claim,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Psi => "psi",
            Suite::Pi => "pi",
            Suite::Phi => "phi",
            Suite::Zeta => "zeta",
            Suite::Main => "main",
            Suite::Factorable => "factorable",
            Suite::RelSemilatt => "relsemilatt",
            Suite::CotaInf => "cotainf",
            Suite::Claim => "claim",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| HarnessError::UnknownSuite(s.into()))
    }
}

pub fn variant_label(v: PhiVariant) -> String {
    match v {
        PhiVariant::R => "r".into(),
        PhiVariant::General(g) => format!("general({})", g.label()),
    }
}

/// Runs suites against one presentation with fixed witness data and Φ
/// variant, and replays their counterexamples.
#[derive(Clone, Debug)]
pub struct Verifier<'p> {
    presentation: &'p Presentation,
    pub witness: WitnessSet,
    pub variant: PhiVariant,
    pub budget: Budget,
    pub seed: u64,
    pub product_bound: Option<usize>,
}

fn groupoid_table(a: &FiniteAlgebra, p: &Presentation) -> Result<Vec<Element>, HarnessError> {
    let g = p.signature.require_groupoid()?;
    a.check_term(g)?;
    let n = a.size();
    Ok((0..n * n).map(|i| a.eval_fast(g, &[i / n, i % n])).collect())
}

fn closed_values(a: &FiniteAlgebra, ts: &[Term]) -> Vec<Element> {
    ts.iter().map(|t| a.eval_fast(t, &[])).collect()
}

/// Mutable state of one suite run.
struct Run<'r> {
    report: &'r mut VerificationReport,
    budget: Budget,
}

impl Run<'_> {
    fn start_model(&mut self, id: usize, size: usize, factors: Option<[usize; 2]>) -> Result<(), HarnessError> {
        if self.budget.deadline_passed() {
            return Err(HarnessError::Budget);
        }
        self.report.models.push(ModelResult {
            id,
            size,
            factors,
            checks: 0,
            failures: 0,
            verdict: None,
        });
        Ok(())
    }

    fn record(&mut self, v: Verdict, cex: impl FnOnce() -> Counterexample) {
        let m = self.report.models.last_mut().expect("model started");
        m.checks += 1;
        self.report.checks += 1;
        if !v.ok {
            m.failures += 1;
            self.report.failures += 1;
            if self.report.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.report.counterexamples.push(cex());
            }
        }
    }

    fn single(&mut self, v: Verdict) {
        self.report.models.last_mut().expect("model started").verdict = Some(v);
    }
}

impl<'p> Verifier<'p> {
    pub fn new(presentation: &'p Presentation) -> Self {
        Verifier {
            presentation,
            witness: presentation.witness.clone().unwrap_or_default(),
            variant: PhiVariant::default(),
            budget: Budget::unlimited(),
            seed: DEFAULT_SEED,
            product_bound: None,
        }
    }

    pub fn with_witness(mut self, w: WitnessSet) -> Self {
        self.witness = w;
        self
    }

    pub fn with_variant(mut self, v: PhiVariant) -> Self {
        self.variant = v;
        self
    }

    pub fn with_budget(mut self, b: Budget) -> Self {
        self.budget = b;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_product_bound(mut self, bound: usize) -> Self {
        self.product_bound = Some(bound);
        self
    }

    pub fn presentation(&self) -> &Presentation {
        self.presentation
    }

    pub fn product_bound(&self) -> usize {
        self.product_bound.unwrap_or(match self.variant {
            PhiVariant::R => R_PRODUCT_BOUND,
            PhiVariant::General(_) => GENERAL_PRODUCT_BOUND,
        })
    }

    fn complement(&self) -> bool {
        matches!(
            self.variant,
            PhiVariant::General(GeneralPhi {
                w_mode: WMode::ComplementParameter,
                ..
            })
        )
    }

    fn evaluator<'a>(&self, book: &'a FormulaBook, a: &'a FiniteAlgebra) -> Result<Evaluator<'a>, HarnessError> {
        Ok(Evaluator::new(book, a)?.with_deadline(self.budget.deadline))
    }

    /// ψ lengths to check: the connection length, or the schema lengths.
    pub fn psi_lengths(&self) -> Vec<usize> {
        match &self.witness.connection {
            Some(c) => vec![c.n()],
            None => SCHEMA_LENGTHS.to_vec(),
        }
    }

    fn models(&self, bound: usize, filters: Filters) -> Result<Vec<FiniteAlgebra>, HarnessError> {
        Ok(collect_models_up_to(self.presentation, bound, true, filters, self.budget)?)
    }

    fn semideg(&self) -> Result<&crate::witness::SemidegeneracyTerms, HarnessError> {
        self.witness
            .semidegeneracy
            .as_ref()
            .ok_or(HarnessError::MissingWitness("0⃗, 1⃗ and U_i"))
    }

    fn decode(&self, json: &crate::algebra::AlgebraJson) -> Result<FiniteAlgebra, HarnessError> {
        Ok(FiniteAlgebra::from_json_value(&self.presentation.signature, json)?)
    }

    fn encode(&self, a: &FiniteAlgebra) -> crate::algebra::AlgebraJson {
        a.to_json_value(&self.presentation.signature)
    }

    pub fn run(&self, suite: Suite, size_bound: usize) -> Result<VerificationReport, HarnessError> {
        let started = Instant::now();
        let variant = matches!(suite, Suite::Phi | Suite::Zeta | Suite::Main | Suite::Factorable)
            .then(|| variant_label(self.variant));
        let product_bound = matches!(suite, Suite::Phi | Suite::Factorable).then(|| self.product_bound());
        let mut report = VerificationReport::new(
            suite.name(),
            self.presentation.display_name(),
            variant,
            Bounds {
                size_bound,
                product_bound,
                seed: self.seed,
            },
        );
        let mut run = Run {
            report: &mut report,
            budget: self.budget,
        };
        let outcome = match suite {
            Suite::Psi => self.run_psi(&mut run, size_bound),
            Suite::Pi => self.run_pi(&mut run, size_bound),
            Suite::Phi => self.run_phi(&mut run, size_bound),
            Suite::Zeta => self.run_zeta(&mut run, size_bound),
            Suite::Main => self.run_main(&mut run, size_bound),
            Suite::Factorable => self.run_factorable(&mut run, size_bound),
            Suite::RelSemilatt => self.run_relsemilatt(&mut run, size_bound),
            Suite::CotaInf => self.run_cotainf(&mut run, size_bound),
            Suite::Claim => self.run_claim(&mut run, size_bound),
        };
        match outcome {
            Ok(()) => {}
            Err(HarnessError::Budget) => report.budget_exceeded = true,
            Err(e) => return Err(e),
        }
        report.elapsed_ms = started.elapsed().as_millis() as u64;
        Ok(report)
    }

    // ---- ψ and π ----

    fn psi_verdict(ev: &Evaluator, order: &OrderRelation, item: u8, env: &[Element]) -> Result<Verdict, HarnessError> {
        Ok(match item {
            1 => Verdict::iff(true, ev.eval_root(&[env[0], env[1], env[0]])?),
            2 => Verdict::iff(true, ev.eval_root(&[env[0], env[1], env[1]])?),
            _ => Verdict::implies(order.leq(env[0], env[1]), ev.eval_root(&[env[0], env[0], env[1]])?),
        })
    }

    fn run_psi(&self, run: &mut Run, bound: usize) -> Result<(), HarnessError> {
        let models = self.models(bound, Filters::CONNECTED)?;
        if self.witness.connection.is_none() {
            run.report
                .notes
                .push(format!("no connection terms; ψ checked for n ∈ {:?} on connected models", SCHEMA_LENGTHS));
        }
        for n in self.psi_lengths() {
            let book = build_psi_schema(&self.presentation.signature, n)?;
            for (id, a) in models.iter().enumerate() {
                run.start_model(id, a.size(), None)?;
                let order = related_order(a, &self.presentation.signature)?;
                let ev = self.evaluator(&book, a)?;
                for item in 1..=3u8 {
                    let mut err = None;
                    for_each_assignment(a.size(), 2, |env| {
                        match Self::psi_verdict(&ev, &order, item, env) {
                            Ok(v) => run.record(v, || self.cex(id, a, None, Check::Psi { n, item }, env, v)),
                            Err(e) => err = Some(e),
                        }
                        err.is_none()
                    });
                    if let Some(e) = err {
                        return Err(e);
                    }
                }
            }
        }
        Ok(())
    }

    fn pi_verdict(ev: &Evaluator, item: u8, env: &[Element]) -> Result<Verdict, HarnessError> {
        Ok(match item {
            4 => Verdict::iff(true, ev.eval_root(&[env[0], env[0], env[1], env[2]])?),
            5 => Verdict::iff(true, ev.eval_root(&[env[0], env[1], env[0], env[1]])?),
            _ => Verdict::implies(env[0] == env[1], ev.eval_root(&[env[0], env[1], env[2], env[2]])?),
        })
    }

    fn pi_book(&self, n: usize) -> Result<FormulaBook, HarnessError> {
        let w = WitnessSet {
            connection: Some(match &self.witness.connection {
                Some(c) if c.n() == n => c.clone(),
                // π depends on the connection terms only through n
                _ => crate::witness::ConnectionTerms::new(vec![Term::Var(0); 2 * n - 1])?,
            }),
            semidegeneracy: None,
        };
        Ok(build_pi(&self.presentation.signature, &w)?)
    }

    fn run_pi(&self, run: &mut Run, bound: usize) -> Result<(), HarnessError> {
        let models = self.models(bound, Filters::CONNECTED)?;
        for n in self.psi_lengths() {
            let book = self.pi_book(n)?;
            for (id, a) in models.iter().enumerate() {
                run.start_model(id, a.size(), None)?;
                let ev = self.evaluator(&book, a)?;
                for item in 4..=6u8 {
                    let arity = if item == 5 { 2 } else { 3 };
                    let mut err = None;
                    for_each_assignment(a.size(), arity, |env| {
                        match Self::pi_verdict(&ev, item, env) {
                            Ok(v) => run.record(v, || self.cex(id, a, None, Check::Pi { n, item }, env, v)),
                            Err(e) => err = Some(e),
                        }
                        err.is_none()
                    });
                    if let Some(e) = err {
                        return Err(e);
                    }
                }
            }
        }
        Ok(())
    }

    // ---- Φ-lemma ----

    fn phi_book(&self) -> Result<FormulaBook, HarnessError> {
        self.semideg()?;
        Ok(build_phi(self.presentation, &self.witness, self.variant)?)
    }

    /// `[0⃗_A, 1⃗_B]` and its complement `[1⃗_A, 0⃗_B]`.
    fn product_params(&self, prod: &DirectProduct, a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<Vec<Element>, HarnessError> {
        let sd = self.semideg()?;
        let mut params = prod.interleave(&closed_values(a, sd.zero()), &closed_values(b, sd.one()));
        if self.complement() {
            params.extend(prod.interleave(&closed_values(a, sd.one()), &closed_values(b, sd.zero())));
        }
        Ok(params)
    }

    fn phi_verdict(ev: &Evaluator, prod: &DirectProduct, params: &[Element], env: &[Element]) -> Result<Verdict, HarnessError> {
        let mut args = vec![env[0], env[1]];
        args.extend(params);
        let expected = prod.decode(env[0]).0 == prod.decode(env[1]).0;
        Ok(Verdict::iff(expected, ev.eval_root(&args)?))
    }

    fn product_pairs(&self, models: &[FiniteAlgebra]) -> Vec<(usize, usize)> {
        let cap = self.product_bound();
        let mut pairs = Vec::new();
        for i in 0..models.len() {
            for j in 0..models.len() {
                if models[i].size() * models[j].size() <= cap {
                    pairs.push((i, j));
                }
            }
        }
        pairs
    }

    fn product(&self, a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<DirectProduct, HarnessError> {
        Ok(direct_product(a, b, self.product_bound().max(DEFAULT_MAX_PRODUCT))?)
    }

    fn run_phi(&self, run: &mut Run, bound: usize) -> Result<(), HarnessError> {
        let book = self.phi_book()?;
        let models = self.models(bound, Filters::NONE)?;
        for (pid, (i, j)) in self.product_pairs(&models).into_iter().enumerate() {
            let (a, b) = (&models[i], &models[j]);
            let prod = self.product(a, b)?;
            run.start_model(pid, prod.algebra.size(), Some([i, j]))?;
            let params = self.product_params(&prod, a, b)?;
            let ev = self.evaluator(&book, &prod.algebra)?;
            let mut err = None;
            for_each_assignment(prod.algebra.size(), 2, |env| {
                match Self::phi_verdict(&ev, &prod, &params, env) {
                    Ok(v) => run.record(v, || self.cex(pid, &prod.algebra, Some((a, b)), Check::PhiLemma, env, v)),
                    Err(e) => err = Some(e),
                }
                err.is_none()
            });
            if let Some(e) = err {
                return Err(e);
            }
        }
        Ok(())
    }

    // ---- ζ and the main sentence ----

    fn central(&self, a: &FiniteAlgebra) -> Result<Vec<CentralPair>, HarnessError> {
        let sd = self.semideg()?;
        Ok(central_pairs(a, &closed_values(a, sd.zero()), &closed_values(a, sd.one()))?)
    }

    fn zeta_verdict(ev: &Evaluator, central: &[CentralPair], env: &[Element]) -> Result<Verdict, HarnessError> {
        let l = env.len() / 2;
        let expected = central.iter().any(|c| c.e == env[..l] && c.f == env[l..]);
        Ok(Verdict::iff(expected, ev.eval_root(env)?))
    }

    fn run_zeta(&self, run: &mut Run, bound: usize) -> Result<(), HarnessError> {
        let l = self.semideg()?.l();
        let book = build_zeta(self.presentation, &self.witness, self.variant)?;
        for (id, a) in self.models(bound, Filters::NONE)?.iter().enumerate() {
            run.start_model(id, a.size(), None)?;
            let central = self.central(a)?;
            let ev = self.evaluator(&book, a)?;
            let mut err = None;
            for_each_assignment(a.size(), 2 * l, |env| {
                match Self::zeta_verdict(&ev, &central, env) {
                    Ok(v) => run.record(v, || self.cex(id, a, None, Check::ZetaLemma, env, v)),
                    Err(e) => err = Some(e),
                }
                err.is_none()
            });
            if let Some(e) = err {
                return Err(e);
            }
        }
        Ok(())
    }

    fn main_verdict(&self, book: &FormulaBook, a: &FiniteAlgebra) -> Result<Verdict, HarnessError> {
        let expected = is_directly_indecomposable(a)?;
        Ok(Verdict::iff(expected, self.evaluator(book, a)?.eval_root(&[])?))
    }

    fn run_main(&self, run: &mut Run, bound: usize) -> Result<(), HarnessError> {
        self.semideg()?;
        let book = build_main_sentence(self.presentation, &self.witness, self.variant)?;
        for (id, a) in self.models(bound, Filters::NONE)?.iter().enumerate() {
            run.start_model(id, a.size(), None)?;
            let v = self.main_verdict(&book, a)?;
            run.record(v, || self.cex(id, a, None, Check::Main, &[], v));
            run.single(v);
        }
        Ok(())
    }

    // ---- factorability ----

    /// The built formulas that are claimed factorable: ψ, π and Φ.
    fn factorable_books(&self) -> Result<Vec<FormulaBook>, HarnessError> {
        let mut books = Vec::new();
        for n in self.psi_lengths() {
            books.push(build_psi_schema(&self.presentation.signature, n)?);
            books.push(self.pi_book(n)?);
        }
        if self.witness.semidegeneracy.is_some() && (self.witness.connection.is_some() || self.variant == PhiVariant::R) {
            books.push(self.phi_book()?);
        }
        Ok(books)
    }

    fn book_label(book: &FormulaBook) -> String {
        let n = book.defs.iter().find(|d| d.name == "psi").map(|d| d.var_names.len());
        match n {
            Some(vars) if book.root().name != "Phi" => {
                // ψ of length n has 3 + (2n − 1) + (n − 1) variables
                format!("{}[n={}]", book.root().name, (vars - 1) / 3)
            }
            _ => book.root().name.clone(),
        }
    }

    fn factorable_verdict(
        evs: [&Evaluator; 3],
        prod: &DirectProduct,
        env: &[Element],
    ) -> Result<Verdict, HarnessError> {
        let (l, r) = prod.split(env);
        let expected = evs[1].eval_root(&l)? && evs[2].eval_root(&r)?;
        Ok(Verdict::iff(expected, evs[0].eval_root(env)?))
    }

    fn run_factorable(&self, run: &mut Run, bound: usize) -> Result<(), HarnessError> {
        let books = self.factorable_books()?;
        let models = self.models(bound, Filters::NONE)?;
        for (pid, (i, j)) in self.product_pairs(&models).into_iter().enumerate() {
            let (a, b) = (&models[i], &models[j]);
            let prod = self.product(a, b)?;
            run.start_model(pid, prod.algebra.size(), Some([i, j]))?;
            for (bi, book) in books.iter().enumerate() {
                let label = Self::book_label(book);
                let evs = [
                    &self.evaluator(book, &prod.algebra)?,
                    &self.evaluator(book, a)?,
                    &self.evaluator(book, b)?,
                ];
                let arity = book.root().arity();
                let n = prod.algebra.size();
                let space = (n as u64).saturating_pow(arity as u32);
                let mut check = |env: &[Element]| -> Result<(), HarnessError> {
                    let v = Self::factorable_verdict(evs, &prod, env)?;
                    run.record(v, || {
                        self.cex(pid, &prod.algebra, Some((a, b)), Check::Factorable { formula: label.clone() }, env, v)
                    });
                    Ok(())
                };
                if space <= FACTORABLE_EXHAUSTIVE {
                    let mut err = None;
                    for_each_assignment(n, arity, |env| {
                        if let Err(e) = check(env) {
                            err = Some(e);
                        }
                        err.is_none()
                    });
                    if let Some(e) = err {
                        return Err(e);
                    }
                } else {
                    let mut rng = StdRng::seed_from_u64(self.seed ^ ((pid as u64) << 8) ^ bi as u64);
                    for _ in 0..FACTORABLE_EXHAUSTIVE {
                        let env: Vec<Element> = (0..arity).map(|_| rng.gen_range(0..n)).collect();
                        check(&env)?;
                    }
                }
            }
        }
        Ok(())
    }

    // ---- bounded identity suites ----

    fn relsemilatt_verdict(mul: &[Element], n: usize) -> Verdict {
        let m = |a: usize, b: usize| mul[a * n + b];
        let leq = |a: usize, b: usize| m(a, b) == a;
        let mut quasi = true;
        let mut ident = true;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if leq(x, z) && leq(y, z) && m(x, y) != m(y, x) {
                        quasi = false;
                    }
                    if m(m(x, y), z) != m(m(y, x), z) {
                        ident = false;
                    }
                }
            }
        }
        Verdict::iff(quasi, ident)
    }

    fn run_relsemilatt(&self, run: &mut Run, bound: usize) -> Result<(), HarnessError> {
        let mut skipped = 0;
        let mut id = 0;
        for a in self.models(bound, Filters::PO)? {
            let mul = groupoid_table(&a, self.presentation)?;
            let n = a.size();
            let associative = (0..n * n * n).all(|i| {
                let (x, y, z) = (i / (n * n), (i / n) % n, i % n);
                mul[mul[x * n + y] * n + z] == mul[x * n + mul[y * n + z]]
            });
            if !associative {
                skipped += 1;
                continue;
            }
            run.start_model(id, n, None)?;
            let v = Self::relsemilatt_verdict(&mul, n);
            run.record(v, || self.cex(id, &a, None, Check::RelSemilatt, &[], v));
            run.single(v);
            id += 1;
        }
        if skipped > 0 {
            run.report.notes.push(format!("{skipped} non-associative po-groupoids skipped"));
        }
        Ok(())
    }

    fn cotainf_verdict(mul: &[Element], n: usize, xs: &[Element]) -> Verdict {
        let m = |a: usize, b: usize| mul[a * n + b];
        let got = (0..n).any(|u| xs[1..].iter().all(|&x| m(u, xs[0]) == m(u, x)));
        Verdict::iff(true, got)
    }

    fn product_identity_verdict(mul: &[Element], n: usize, seq: &[Element]) -> Verdict {
        let m = |a: usize, b: usize| mul[a * n + b];
        let odd: Vec<Element> = seq.iter().step_by(2).copied().collect();
        let forward = odd.iter().copied().reduce(m).expect("non-empty");
        let backward = odd.iter().rev().copied().reduce(m).expect("non-empty");
        Verdict::iff(true, forward == backward)
    }

    /// Sequences `m_1 ⪯ m_2 ⪰ m_3 ⪯ …` of odd length `len`.
    fn alternating_sequences(mul: &[Element], n: usize, len: usize, f: &mut impl FnMut(&[Element])) {
        fn go(mul: &[Element], n: usize, len: usize, seq: &mut Vec<Element>, f: &mut impl FnMut(&[Element])) {
            if seq.len() == len {
                f(seq);
                return;
            }
            let last = *seq.last().unwrap();
            for next in 0..n {
                // odd step (1-based position even): last ⪯ next; else next ⪯ last
                let ok = if seq.len() % 2 == 1 {
                    mul[last * n + next] == last
                } else {
                    mul[next * n + last] == next
                };
                if ok {
                    seq.push(next);
                    go(mul, n, len, seq, f);
                    seq.pop();
                }
            }
        }
        for start in 0..n {
            go(mul, n, len, &mut vec![start], f);
        }
    }

    fn run_cotainf(&self, run: &mut Run, bound: usize) -> Result<(), HarnessError> {
        let mut skipped = 0;
        let mut id = 0;
        for a in self.models(bound, Filters::CONNECTED)? {
            let mul = groupoid_table(&a, self.presentation)?;
            let n = a.size();
            let r = (0..n * n * n).all(|i| {
                let (x, y, z) = (i / (n * n), (i / n) % n, i % n);
                mul[mul[x * n + y] * n + z] == mul[mul[y * n + x] * n + z]
            });
            if !r {
                skipped += 1;
                continue;
            }
            run.start_model(id, n, None)?;
            for j in 2..=3 {
                for_each_assignment(n, j, |xs| {
                    let v = Self::cotainf_verdict(&mul, n, xs);
                    run.record(v, || self.cex(id, &a, None, Check::CotaInf { j }, xs, v));
                    true
                });
            }
            for len in [1, 3, 5] {
                Self::alternating_sequences(&mul, n, len, &mut |seq| {
                    let v = Self::product_identity_verdict(&mul, n, seq);
                    run.record(v, || self.cex(id, &a, None, Check::ProductIdentity, seq, v));
                });
            }
            id += 1;
        }
        if skipped > 0 {
            run.report
                .notes
                .push(format!("{skipped} connected models outside R skipped"));
        }
        Ok(())
    }

    fn claim_verdict(mul: &[Element], n: usize, env: &[Element]) -> Verdict {
        let m = |a: usize, b: usize| mul[a * n + b];
        let (x, y) = (env[0], env[1]);
        Verdict::iff(true, m(m(x, y), x) == m(y, x))
    }

    fn run_claim(&self, run: &mut Run, bound: usize) -> Result<(), HarnessError> {
        for (id, a) in self.models(bound, Filters::PO)?.iter().enumerate() {
            run.start_model(id, a.size(), None)?;
            let mul = groupoid_table(a, self.presentation)?;
            for_each_assignment(a.size(), 2, |env| {
                let v = Self::claim_verdict(&mul, a.size(), env);
                run.record(v, || self.cex(id, a, None, Check::Claim, env, v));
                true
            });
        }
        Ok(())
    }

    fn cex(
        &self,
        model: usize,
        a: &FiniteAlgebra,
        factors: Option<(&FiniteAlgebra, &FiniteAlgebra)>,
        check: Check,
        env: &[Element],
        verdict: Verdict,
    ) -> Counterexample {
        Counterexample {
            model,
            algebra: self.encode(a),
            factors: factors.map(|(l, r)| [self.encode(l), self.encode(r)]),
            check,
            env: env.to_vec(),
            verdict,
        }
    }

    /// Recomputes the oracle and formula values of a counterexample.
    pub fn replay(&self, cex: &Counterexample) -> Result<Verdict, HarnessError> {
        let a = self.decode(&cex.algebra)?;
        let env = &cex.env;
        let factors = match &cex.factors {
            Some([l, r]) => Some((self.decode(l)?, self.decode(r)?)),
            None => None,
        };
        let product = |(l, r): &(FiniteAlgebra, FiniteAlgebra)| -> Result<DirectProduct, HarnessError> {
            let prod = self.product(l, r)?;
            if prod.algebra != a {
                return Err(HarnessError::Algebra(AlgebraError::SignatureMismatch));
            }
            Ok(prod)
        };
        let need_factors = || factors.as_ref().ok_or(HarnessError::MissingWitness("product factors"));
        match &cex.check {
            Check::Psi { n, item } => {
                let book = build_psi_schema(&self.presentation.signature, *n)?;
                let order = related_order(&a, &self.presentation.signature)?;
                Self::psi_verdict(&self.evaluator(&book, &a)?, &order, *item, env)
            }
            Check::Pi { n, item } => {
                let book = self.pi_book(*n)?;
                Self::pi_verdict(&self.evaluator(&book, &a)?, *item, env)
            }
            Check::PhiLemma => {
                let fs = need_factors()?;
                let prod = product(fs)?;
                let book = self.phi_book()?;
                let params = self.product_params(&prod, &fs.0, &fs.1)?;
                Self::phi_verdict(&self.evaluator(&book, &prod.algebra)?, &prod, &params, env)
            }
            Check::ZetaLemma => {
                let book = build_zeta(self.presentation, &self.witness, self.variant)?;
                Self::zeta_verdict(&self.evaluator(&book, &a)?, &self.central(&a)?, env)
            }
            Check::Main => {
                let book = build_main_sentence(self.presentation, &self.witness, self.variant)?;
                self.main_verdict(&book, &a)
            }
            Check::Factorable { formula } => {
                let fs = need_factors()?;
                let prod = product(fs)?;
                let books = self.factorable_books()?;
                let book = books
                    .iter()
                    .find(|b| Self::book_label(b) == *formula)
                    .ok_or_else(|| FormulaError::UnknownDefinition(formula.clone()))?;
                let evs = [
                    &self.evaluator(book, &prod.algebra)?,
                    &self.evaluator(book, &fs.0)?,
                    &self.evaluator(book, &fs.1)?,
                ];
                Self::factorable_verdict(evs, &prod, env)
            }
            Check::RelSemilatt => Ok(Self::relsemilatt_verdict(&groupoid_table(&a, self.presentation)?, a.size())),
            Check::CotaInf { .. } => Ok(Self::cotainf_verdict(&groupoid_table(&a, self.presentation)?, a.size(), env)),
            Check::ProductIdentity => Ok(Self::product_identity_verdict(
                &groupoid_table(&a, self.presentation)?,
                a.size(),
                env,
            )),
            Check::Claim => Ok(Self::claim_verdict(&groupoid_table(&a, self.presentation)?, a.size(), env)),
        }
    }
}

/// Whether the presentation passes the bounded R-identity check that the
/// R-variant requires.
pub fn supports_r_variant(p: &Presentation) -> bool {
    check_r_identities(p, 4).is_ok()
}
