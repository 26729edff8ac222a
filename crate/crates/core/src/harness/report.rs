use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraJson, Element};

/// Bumped whenever a report field changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

/// Counterexamples kept per report; the per-model failure counts are exact.
pub const MAX_COUNTEREXAMPLES: usize = 25;

/// One property instance. `env` of the enclosing counterexample supplies
/// the elements; the comments give its layout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Check {
    /// Items 1–3 for ψ of length `n`: `ψ(x,y,x)`, `ψ(x,y,y)` with env
    /// `[x, y]`; `ψ(x,x,z) → x ⪯ z` with env `[x, z]`.
    Psi { n: usize, item: u8 },
    /// Items 4–6: `π(x,x,z,w)` env `[x, z, w]`; `π(x,y,x,y)` env `[x, y]`;
    /// `π(x,y,z,z) → x = y` env `[x, y, z]`.
    Pi { n: usize, item: u8 },
    /// `Φ(x, y, [0⃗,1⃗] …) ⟺ first coordinates agree`, env `[x, y]` in `A×B`.
    PhiLemma,
    /// `ζ(e⃗, f⃗) ⟺ (e⃗, f⃗)` is a central pair, env `e⃗ ++ f⃗`.
    ZetaLemma,
    /// main sentence ⟺ directly indecomposable, empty env.
    Main,
    /// `F` in `A×B` at env ⟺ `F` in both factors at the split env.
    Factorable { formula: String },
    /// quasi-identity `x ⪯ z ∧ y ⪯ z → x·y = y·x` ⟺ `x·y·z ≈ y·x·z`, empty env.
    RelSemilatt,
    /// `∃u ⋀_{i≥2} u·x_1 = u·x_i`, env `x⃗` of length `j`.
    CotaInf { j: usize },
    /// `m_1·m_3·…·m_L = m_L·…·m_3·m_1` along `m_1 ⪯ m_2 ⪰ m_3 ⪯ …`, env `m⃗`.
    ProductIdentity,
    /// `x·y·x = y·x`, env `[x, y]`.
    Claim,
}

/// Oracle value, formula value, and whether the property accepts the pair
/// (biconditionals need equality, implications only `got → expected`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub expected: bool,
    pub got: bool,
    pub ok: bool,
}

impl Verdict {
    pub fn iff(expected: bool, got: bool) -> Self {
        Verdict {
            expected,
            got,
            ok: expected == got,
        }
    }

    /// `got → expected`.
    pub fn implies(expected: bool, got: bool) -> Self {
        Verdict {
            expected,
            got,
            ok: !got || expected,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub model: usize,
    /// The algebra the check ran in (the product for product checks).
    pub algebra: AlgebraJson,
    /// The two factors, for product checks.
    pub factors: Option<[AlgebraJson; 2]>,
    pub check: Check,
    pub env: Vec<Element>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelResult {
    pub id: usize,
    pub size: usize,
    /// Factor model ids, for product checks.
    pub factors: Option<[usize; 2]>,
    pub checks: u64,
    pub failures: u64,
    /// Set when the suite has a single verdict per model.
    pub verdict: Option<Verdict>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub size_bound: usize,
    pub product_bound: Option<usize>,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub suite: String,
    pub presentation: String,
    pub variant: Option<String>,
    pub bounds: Bounds,
    pub models: Vec<ModelResult>,
    pub checks: u64,
    pub failures: u64,
    pub counterexamples: Vec<Counterexample>,
    pub budget_exceeded: bool,
    pub notes: Vec<String>,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub(crate) fn new(suite: &str, presentation: &str, variant: Option<String>, bounds: Bounds) -> Self {
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            suite: suite.into(),
            presentation: presentation.into(),
            variant,
            bounds,
            models: Vec::new(),
            checks: 0,
            failures: 0,
            counterexamples: Vec::new(),
            budget_exceeded: false,
            notes: Vec::new(),
            elapsed_ms: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && !self.budget_exceeded
    }

    /// 0 all pass, 1 counterexample, 2 budget exceeded.
    pub fn exit_code(&self) -> i32 {
        if self.failures > 0 {
            1
        } else if self.budget_exceeded {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One summary line.
    pub fn summary(&self) -> String {
        let status = match self.exit_code() {
            0 => "PASS",
            1 => "FAIL",
            _ => "BUDGET",
        };
        format!(
            "{status} suite={} presentation={} variant={} models={} checks={} failures={} bound={} ({} ms)",
            self.suite,
            self.presentation,
            self.variant.as_deref().unwrap_or("-"),
            self.models.len(),
            self.checks,
            self.failures,
            self.bounds.size_bound,
            self.elapsed_ms
        )
    }
}
