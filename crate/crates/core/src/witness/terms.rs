use crate::algebra::{AlgebraError, Identity, Signature, Term};

/// Connection terms `m_1(x, y), …, m_{2n−1}(x, y)` witnessing that `x` and
/// `y` are joined by a zigzag `x ⪰ m_1 ⪯ m_2 ⪰ … ⪯ y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionTerms {
    terms: Vec<Term>,
}

impl ConnectionTerms {
    pub fn new(terms: Vec<Term>) -> Result<Self, AlgebraError> {
        if terms.len() % 2 == 0 {
            return Err(AlgebraError::Witness(format!(
                "need an odd number of connection terms, got {}",
                terms.len()
            )));
        }
        if let Some(t) = terms.iter().find(|t| t.var_bound() > 2) {
            return Err(AlgebraError::Witness(format!(
                "connection term uses variables beyond x, y: {t:?}"
            )));
        }
        Ok(ConnectionTerms { terms })
    }

    /// `n` where there are `2n − 1` terms.
    pub fn n(&self) -> usize {
        (self.terms.len() + 1) / 2
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// The same zigzag stretched to length `2·n − 1` by repeating the last
    /// term (`m ⪯ m ⪰ m` holds by reflexivity).
    pub fn padded(&self, n: usize) -> ConnectionTerms {
        let mut terms = self.terms.clone();
        let last = terms.last().cloned().expect("at least one term");
        while terms.len() < 2 * n - 1 {
            terms.push(last.clone());
        }
        ConnectionTerms { terms }
    }

    /// The identities of the connection lemma, over variables `x = 0`, `y = 1`:
    /// `m_1·x ≈ m_1`, `m_i·m_{i±1} ≈ m_i` for odd `i`, `m_{2n−1}·y ≈ m_{2n−1}`.
    pub fn identities(&self, sig: &Signature) -> Vec<Identity> {
        let m = &self.terms;
        let names = vec!["x".to_string(), "y".to_string()];
        let below = |lo: &Term, hi: &Term| {
            Identity::with_names(sig.mul(lo.clone(), hi.clone()), lo.clone(), names.clone())
        };
        let mut ids = vec![below(&m[0], &Term::Var(0))];
        for i in (0..m.len()).step_by(2) {
            if i > 0 {
                ids.push(below(&m[i], &m[i - 1]));
            }
            if i + 1 < m.len() {
                ids.push(below(&m[i], &m[i + 1]));
            }
        }
        ids.push(below(&m[m.len() - 1], &Term::Var(1)));
        ids
    }

    pub fn check(&self, sig: &Signature) -> Result<(), AlgebraError> {
        self.terms.iter().try_for_each(|t| t.check(sig))
    }
}

/// Semidegeneracy data: closed tuples `0⃗`, `1⃗` of length `l` and the
/// chain `U_1, …, U_k` (k odd) of `(2 + l)`-ary terms over `x, y, z⃗`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemidegeneracyTerms {
    zero: Vec<Term>,
    one: Vec<Term>,
    chain: Vec<Term>,
}

impl SemidegeneracyTerms {
    pub fn new(zero: Vec<Term>, one: Vec<Term>, chain: Vec<Term>) -> Result<Self, AlgebraError> {
        if zero.is_empty() || zero.len() != one.len() {
            return Err(AlgebraError::Witness(format!(
                "0⃗ and 1⃗ must be non-empty and of equal length (got {} and {})",
                zero.len(),
                one.len()
            )));
        }
        if zero.iter().chain(&one).any(|t| !t.is_closed()) {
            return Err(AlgebraError::Witness("0⃗ and 1⃗ must be closed terms".into()));
        }
        if chain.len() % 2 == 0 {
            return Err(AlgebraError::Witness(format!(
                "need an odd number of chain terms U_i, got {}",
                chain.len()
            )));
        }
        let l = zero.len();
        if let Some(t) = chain.iter().find(|t| t.var_bound() > 2 + l) {
            return Err(AlgebraError::Witness(format!(
                "chain term uses variables beyond x, y, z1..z{l}: {t:?}"
            )));
        }
        Ok(SemidegeneracyTerms { zero, one, chain })
    }

    pub fn l(&self) -> usize {
        self.zero.len()
    }

    pub fn k(&self) -> usize {
        self.chain.len()
    }

    pub fn zero(&self) -> &[Term] {
        &self.zero
    }

    pub fn one(&self) -> &[Term] {
        &self.one
    }

    pub fn chain(&self) -> &[Term] {
        &self.chain
    }

    /// Variable names for chain terms: `x, y, z` when `l = 1`, else
    /// `x, y, z1, …, zl`.
    pub fn chain_var_names(&self) -> Vec<String> {
        chain_var_names(self.l())
    }

    /// `U_i(x, y, t⃗)` with `x, y` kept as variables 0 and 1.
    pub fn instantiate(&self, i: usize, x: Term, y: Term, tuple: &[Term]) -> Term {
        let mut args = vec![x, y];
        args.extend(tuple.iter().cloned());
        self.chain[i].substitute(&args)
    }

    /// The four groups of chain identities over `x = 0`, `y = 1`:
    /// `x ≈ U_1(x,y,0⃗)`, `U_i(x,y,1⃗) ≈ U_{i+1}(x,y,1⃗)` (i odd),
    /// `U_i(x,y,0⃗) ≈ U_{i+1}(x,y,0⃗)` (i even), `U_k(x,y,1⃗) ≈ y`.
    pub fn identities(&self) -> Vec<Identity> {
        let names = vec!["x".to_string(), "y".to_string()];
        let at = |i: usize, tuple: &[Term]| self.instantiate(i, Term::Var(0), Term::Var(1), tuple);
        let mut ids = vec![Identity::with_names(Term::Var(0), at(0, &self.zero), names.clone())];
        for i in 0..self.k() - 1 {
            // 0-based i ↔ 1-based i + 1: odd 1-based indices are even here.
            let tuple = if i % 2 == 0 { &self.one } else { &self.zero };
            ids.push(Identity::with_names(at(i, tuple), at(i + 1, tuple), names.clone()));
        }
        ids.push(Identity::with_names(at(self.k() - 1, &self.one), Term::Var(1), names));
        ids
    }

    pub fn check(&self, sig: &Signature) -> Result<(), AlgebraError> {
        self.zero
            .iter()
            .chain(&self.one)
            .chain(&self.chain)
            .try_for_each(|t| t.check(sig))
    }
}

pub(crate) fn chain_var_names(l: usize) -> Vec<String> {
    let mut names = vec!["x".to_string(), "y".to_string()];
    if l == 1 {
        names.push("z".into());
    } else {
        names.extend((1..=l).map(|i| format!("z{i}")));
    }
    names
}

/// Term data for the formula builders. Either half may be missing; the
/// builders that need it refuse to run without it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WitnessSet {
    pub connection: Option<ConnectionTerms>,
    pub semidegeneracy: Option<SemidegeneracyTerms>,
}

impl WitnessSet {
    pub fn is_empty(&self) -> bool {
        self.connection.is_none() && self.semidegeneracy.is_none()
    }

    pub fn check(&self, sig: &Signature) -> Result<(), AlgebraError> {
        if let Some(c) = &self.connection {
            c.check(sig)?;
        }
        if let Some(s) = &self.semidegeneracy {
            s.check(sig)?;
        }
        Ok(())
    }

    /// Every identity the witness data promises, connection ones first.
    pub fn identities(&self, sig: &Signature) -> Vec<Identity> {
        let mut ids = Vec::new();
        if let Some(c) = &self.connection {
            ids.extend(c.identities(sig));
        }
        if let Some(s) = &self.semidegeneracy {
            ids.extend(s.identities());
        }
        ids
    }
}
