//! Finite model enumeration.
//!
//! Operation-table cells are assigned in a fixed order (constants first,
//! then each symbol row-major). Every ground instance of every identity is
//! watched on the first unassigned cell its evaluation reaches; assigning
//! that cell re-evaluates the instance, which either settles it, moves the
//! watch, detects a conflict, or forces the one missing cell at the root of
//! a side. Isomorphic copies are rejected on the fly by requiring the table
//! to be lexicographically least among all its relabelings.

use std::time::Instant;

use thiserror::Error;

use crate::algebra::{AlgebraError, Element, FiniteAlgebra, Presentation, Term};
use crate::order::related_order;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("search budget exhausted at size {size} after {assignments} cell assignments ({emitted} models emitted so far)")]
    Budget {
        size: usize,
        assignments: u64,
        emitted: u64,
    },
    #[error("model size must be at least 1")]
    ZeroSize,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Resource limits shared by the searches.
#[derive(Clone, Copy, Debug, Default)]
pub struct Budget {
    pub max_assignments: Option<u64>,
    pub deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub(crate) fn exceeded(&self, assignments: u64) -> bool {
        self.max_assignments.is_some_and(|m| assignments > m)
            || (assignments % 1024 == 0 && self.deadline.is_some_and(|d| Instant::now() >= d))
    }

    pub fn deadline_passed(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Filters {
    /// The related order must be a partial order.
    pub po: bool,
    /// ...and connected (implies `po`).
    pub connected: bool,
}

impl Filters {
    pub const NONE: Filters = Filters {
        po: false,
        connected: false,
    };
    pub const PO: Filters = Filters {
        po: true,
        connected: false,
    };
    pub const CONNECTED: Filters = Filters {
        po: true,
        connected: true,
    };

    pub fn accepts(&self, p: &Presentation, a: &FiniteAlgebra) -> Result<bool, AlgebraError> {
        if !self.po && !self.connected {
            return Ok(true);
        }
        p.signature.require_groupoid()?;
        Ok(match related_order(a, &p.signature) {
            Ok(o) => !self.connected || o.is_connected(),
            Err(_) => false,
        })
    }
}

#[derive(Clone, Debug)]
pub struct EnumerationRequest<'a> {
    pub presentation: &'a Presentation,
    pub size: usize,
    pub up_to_iso: bool,
    pub filters: Filters,
    pub limit: Option<u64>,
    pub budget: Budget,
}

impl<'a> EnumerationRequest<'a> {
    pub fn new(presentation: &'a Presentation, size: usize) -> Self {
        EnumerationRequest {
            presentation,
            size,
            up_to_iso: false,
            filters: Filters::NONE,
            limit: None,
            budget: Budget::unlimited(),
        }
    }

    pub fn up_to_iso(mut self, yes: bool) -> Self {
        self.up_to_iso = yes;
        self
    }

    pub fn filters(mut self, f: Filters) -> Self {
        self.filters = f;
        self
    }

    pub fn limit(mut self, limit: Option<u64>) -> Self {
        self.limit = limit;
        self
    }

    pub fn budget(mut self, b: Budget) -> Self {
        self.budget = b;
        self
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub emitted: u64,
    pub assignments: u64,
    /// Stopped early because of the limit or the callback.
    pub truncated: bool,
}

/// Streams every model of the request to `emit` in lexicographic table
/// order; `emit` returns `false` to stop.
pub fn enumerate_models(
    req: &EnumerationRequest<'_>,
    mut emit: impl FnMut(FiniteAlgebra) -> bool,
) -> Result<SearchStats, SearchError> {
    if req.size == 0 {
        return Err(SearchError::ZeroSize);
    }
    let p = req.presentation;
    p.validate()?;
    if req.filters.po || req.filters.connected {
        p.signature.require_groupoid()?;
    }
    let mut s = Solver::new(p, req.size, req.up_to_iso)?;
    let mut stats = SearchStats::default();
    let mut stop = false;
    let mut failure = None;
    s.budget = req.budget;
    s.run(&mut |alg| {
        match req.filters.accepts(p, &alg) {
            Ok(true) => {}
            Ok(false) => return true,
            Err(e) => {
                failure = Some(e.into());
                return false;
            }
        }
        stats.emitted += 1;
        if !emit(alg) || req.limit.is_some_and(|l| stats.emitted >= l) {
            stop = true;
            return false;
        }
        true
    });
    if s.aborted {
        failure = Some(SearchError::Budget {
            size: req.size,
            assignments: s.assignments,
            emitted: stats.emitted,
        });
    }
    stats.assignments = s.assignments;
    stats.truncated = stop;
    match failure {
        Some(e) => Err(e),
        None => Ok(stats),
    }
}

pub fn collect_models(req: &EnumerationRequest<'_>) -> Result<Vec<FiniteAlgebra>, SearchError> {
    let mut out = Vec::new();
    enumerate_models(req, |a| {
        out.push(a);
        true
    })?;
    Ok(out)
}

/// Models of sizes `1..=max_size`, concatenated in size order.
pub fn collect_models_up_to(
    p: &Presentation,
    max_size: usize,
    up_to_iso: bool,
    filters: Filters,
    budget: Budget,
) -> Result<Vec<FiniteAlgebra>, SearchError> {
    let mut out = Vec::new();
    for size in 1..=max_size {
        let req = EnumerationRequest::new(p, size)
            .up_to_iso(up_to_iso)
            .filters(filters)
            .budget(budget);
        out.extend(collect_models(&req)?);
    }
    Ok(out)
}

/// Number of models for each size `1..=max_size`, without retaining them.
pub fn count_models(
    p: &Presentation,
    max_size: usize,
    up_to_iso: bool,
    filters: Filters,
    budget: Budget,
) -> Result<Vec<(usize, u64)>, SearchError> {
    (1..=max_size)
        .map(|size| {
            let req = EnumerationRequest::new(p, size)
                .up_to_iso(up_to_iso)
                .filters(filters)
                .budget(budget);
            enumerate_models(&req, |_| true).map(|st| (size, st.emitted))
        })
        .collect()
}

const NONE: usize = usize::MAX;

/// Post-order program for one side of an identity.
#[derive(Clone, Debug)]
enum Op {
    Var(usize),
    App(usize, usize), // symbol, argument count
}

fn compile(t: &Term, out: &mut Vec<Op>) {
    match t {
        Term::Var(i) => out.push(Op::Var(*i)),
        Term::App(s, args) => {
            for a in args {
                compile(a, out);
            }
            out.push(Op::App(*s, args.len()));
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Val {
    Known(Element),
    /// First unassigned cell reached; `root` when it is the side's last step.
    Blocked { cell: usize, root: bool },
}

struct Program {
    lhs: Vec<Op>,
    rhs: Vec<Op>,
    vars: usize,
}

struct Solver {
    n: usize,
    offsets: Vec<usize>,
    arities: Vec<usize>,
    cells: Vec<Element>,
    cell_sym: Vec<usize>,
    programs: Vec<Program>,
    /// Instance `i` belongs to program `inst_prog[i]` with assignment index `inst_env[i]`.
    inst_prog: Vec<usize>,
    inst_env: Vec<usize>,
    watch: Vec<usize>,
    /// Instances ever registered on a cell; stale entries skipped lazily.
    lists: Vec<Vec<usize>>,
    registered: Vec<Vec<usize>>,
    trail: Vec<Undo>,
    queue: Vec<usize>,
    assignments: u64,
    perms: Vec<(Vec<Element>, Vec<Element>)>,
    stack: Vec<Val>,
    env: Vec<Element>,
    inconsistent: bool,
    budget: Budget,
    aborted: bool,
}

enum Undo {
    Cell(usize),
    Watch(usize, usize),
}

impl Solver {
    fn new(p: &Presentation, n: usize, up_to_iso: bool) -> Result<Self, SearchError> {
        let arities = p.signature.arities();
        let mut order: Vec<usize> = (0..arities.len()).filter(|&s| arities[s] == 0).collect();
        order.extend((0..arities.len()).filter(|&s| arities[s] > 0));
        let mut offsets = vec![0; arities.len()];
        let mut total = 0usize;
        let mut cell_sym = Vec::new();
        for &s in &order {
            offsets[s] = total;
            let len = crate::algebra::table_len(n, arities[s])?;
            total = total.checked_add(len).ok_or(AlgebraError::TooLarge)?;
            cell_sym.extend(std::iter::repeat_n(s, len));
        }
        let programs: Vec<Program> = p
            .identities
            .iter()
            .map(|id| {
                let (mut lhs, mut rhs) = (Vec::new(), Vec::new());
                compile(&id.lhs, &mut lhs);
                compile(&id.rhs, &mut rhs);
                Program {
                    lhs,
                    rhs,
                    vars: id.var_count(),
                }
            })
            .collect();
        let mut inst_prog = Vec::new();
        let mut inst_env = Vec::new();
        for (pi, prog) in programs.iter().enumerate() {
            let count = n
                .checked_pow(prog.vars as u32)
                .ok_or(AlgebraError::TooLarge)?;
            for e in 0..count {
                inst_prog.push(pi);
                inst_env.push(e);
            }
        }
        let perms = if up_to_iso { permutations(n) } else { Vec::new() };
        let instances = inst_prog.len();
        let mut s = Solver {
            n,
            offsets,
            arities,
            cells: vec![NONE; total],
            cell_sym,
            programs,
            inst_prog,
            inst_env,
            watch: vec![NONE; instances],
            lists: vec![Vec::new(); total],
            registered: vec![Vec::new(); instances],
            trail: Vec::new(),
            queue: Vec::new(),
            assignments: 0,
            perms,
            stack: Vec::new(),
            env: Vec::new(),
            inconsistent: false,
            budget: Budget::unlimited(),
            aborted: false,
        };
        for i in 0..instances {
            match s.evaluate(i) {
                (Val::Known(a), Val::Known(b)) => {
                    if a != b {
                        s.inconsistent = true;
                    }
                }
                (l, r) => {
                    let cell = blocker(l, r);
                    s.watch[i] = cell;
                    s.register(i, cell);
                }
            }
        }
        Ok(s)
    }

    fn register(&mut self, inst: usize, cell: usize) {
        if !self.registered[inst].contains(&cell) {
            self.registered[inst].push(cell);
            self.lists[cell].push(inst);
        }
    }

    fn eval_side(&mut self, side: bool, prog: usize) -> Val {
        self.stack.clear();
        let ops = if side {
            &self.programs[prog].lhs
        } else {
            &self.programs[prog].rhs
        };
        let last = ops.len() - 1;
        for (k, op) in ops.iter().enumerate() {
            match *op {
                Op::Var(i) => self.stack.push(Val::Known(self.env[i])),
                Op::App(sym, m) => {
                    let base = self.stack.len() - m;
                    let mut idx = 0;
                    let mut blocked = None;
                    for v in &self.stack[base..] {
                        match *v {
                            Val::Known(e) => idx = idx * self.n + e,
                            Val::Blocked { cell, .. } => {
                                blocked = Some(cell);
                                break;
                            }
                        }
                    }
                    self.stack.truncate(base);
                    let v = match blocked {
                        Some(cell) => Val::Blocked { cell, root: false },
                        None => {
                            let cell = self.offsets[sym] + idx;
                            match self.cells[cell] {
                                NONE => Val::Blocked {
                                    cell,
                                    root: k == last,
                                },
                                e => Val::Known(e),
                            }
                        }
                    };
                    self.stack.push(v);
                }
            }
        }
        self.stack.pop().expect("non-empty program")
    }

    fn evaluate(&mut self, inst: usize) -> (Val, Val) {
        let prog = self.inst_prog[inst];
        let vars = self.programs[prog].vars;
        self.env.clear();
        self.env.resize(vars, 0);
        let mut code = self.inst_env[inst];
        for i in (0..vars).rev() {
            self.env[i] = code % self.n;
            code /= self.n;
        }
        let l = self.eval_side(true, prog);
        let r = self.eval_side(false, prog);
        (l, r)
    }

    fn assign(&mut self, cell: usize, v: Element) {
        self.cells[cell] = v;
        self.trail.push(Undo::Cell(cell));
        self.queue.push(cell);
        self.assignments += 1;
    }

    fn move_watch(&mut self, inst: usize, to: usize) {
        self.trail.push(Undo::Watch(inst, self.watch[inst]));
        self.watch[inst] = to;
        if to != NONE {
            self.register(inst, to);
        }
    }

    /// Runs the propagation queue; false on conflict.
    fn propagate(&mut self) -> bool {
        while let Some(cell) = self.queue.pop() {
            let mut j = 0;
            while j < self.lists[cell].len() {
                let inst = self.lists[cell][j];
                j += 1;
                if self.watch[inst] != cell {
                    continue;
                }
                match self.evaluate(inst) {
                    (Val::Known(a), Val::Known(b)) => {
                        if a != b {
                            self.queue.clear();
                            return false;
                        }
                        self.move_watch(inst, NONE);
                    }
                    (Val::Known(v), Val::Blocked { cell: c, root: true })
                    | (Val::Blocked { cell: c, root: true }, Val::Known(v)) => {
                        self.assign(c, v);
                        self.move_watch(inst, NONE);
                    }
                    (l, r) => {
                        if let (Val::Blocked { cell: a, root: true }, Val::Blocked { cell: b, root: true }) = (l, r) {
                            if a == b {
                                self.move_watch(inst, NONE);
                                continue;
                            }
                        }
                        let to = blocker(l, r);
                        self.move_watch(inst, to);
                    }
                }
            }
        }
        true
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Undo::Cell(c) => self.cells[c] = NONE,
                Undo::Watch(i, from) => self.watch[i] = from,
            }
        }
        self.queue.clear();
    }

    /// Partial check that no relabeling yields a smaller table.
    fn canonical_so_far(&self) -> bool {
        let n = self.n;
        for (pi, inv) in &self.perms {
            for (cell, &sym) in self.cell_sym.iter().enumerate() {
                let mine = self.cells[cell];
                if mine == NONE {
                    break;
                }
                // T^π(f, ā) = π(T(f, π⁻¹(ā)))
                let m = self.arities[sym];
                let mut local = cell - self.offsets[sym];
                let mut src = 0;
                let mut weight = 1;
                for _ in 0..m {
                    src += inv[local % n] * weight;
                    local /= n;
                    weight *= n;
                }
                let theirs = self.cells[self.offsets[sym] + src];
                if theirs == NONE {
                    break;
                }
                let theirs = pi[theirs];
                if mine < theirs {
                    break;
                }
                if mine > theirs {
                    return false;
                }
            }
        }
        true
    }

    fn to_algebra(&self) -> FiniteAlgebra {
        let tables = (0..self.arities.len())
            .map(|s| {
                let len = self.n.pow(self.arities[s] as u32);
                self.cells[self.offsets[s]..self.offsets[s] + len].to_vec()
            })
            .collect();
        FiniteAlgebra::new(self.n, self.arities.clone(), tables).expect("complete table")
    }

    fn run(&mut self, emit: &mut dyn FnMut(FiniteAlgebra) -> bool) {
        if self.inconsistent {
            return;
        }
        self.dfs(emit);
    }

    /// Returns false to stop the whole search.
    fn dfs(&mut self, emit: &mut dyn FnMut(FiniteAlgebra) -> bool) -> bool {
        if !self.perms.is_empty() && !self.canonical_so_far() {
            return true;
        }
        let Some(cell) = self.cells.iter().position(|&v| v == NONE) else {
            return emit(self.to_algebra());
        };
        for v in 0..self.n {
            let mark = self.trail.len();
            self.assign(cell, v);
            if self.budget.exceeded(self.assignments) {
                self.aborted = true;
                return false;
            }
            if self.propagate() && !self.dfs(emit) {
                return false;
            }
            self.undo_to(mark);
        }
        true
    }
}

fn blocker(l: Val, r: Val) -> usize {
    match (l, r) {
        (Val::Blocked { cell, .. }, _) | (_, Val::Blocked { cell, .. }) => cell,
        _ => NONE,
    }
}

/// All permutations of `0..n` with their inverses, lexicographically.
fn permutations(n: usize) -> Vec<(Vec<Element>, Vec<Element>)> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut all = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut all);
    all.into_iter()
        .skip(1) // the identity never yields a smaller table
        .map(|p| {
            let mut inv = vec![0; n];
            for (i, &v) in p.iter().enumerate() {
                inv[v] = i;
            }
            (p, inv)
        })
        .collect()
}
