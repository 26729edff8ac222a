use std::fmt::Write as _;

use super::{AlgebraError, Identity, Signature, Term};
use crate::witness::WitnessSet;

/// A finitely presented variety: signature (with designated groupoid
/// term), defining identities and optional declared witness terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub name: Option<String>,
    pub signature: Signature,
    pub identities: Vec<Identity>,
    pub witness: Option<WitnessSet>,
}

impl Presentation {
    pub fn new(signature: Signature, identities: Vec<Identity>) -> Result<Self, AlgebraError> {
        let p = Presentation {
            name: None,
            signature,
            identities,
            witness: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), AlgebraError> {
        for id in &self.identities {
            id.check(&self.signature)?;
        }
        if let Some(w) = &self.witness {
            w.check(&self.signature)?;
        }
        Ok(())
    }

    pub fn display_name(&self) -> &str {
        self.name.as_deref().unwrap_or("<unnamed>")
    }

    /// Presentation-file text that parses back to an equal presentation.
    pub fn to_spec_text(&self) -> String {
        let sig = &self.signature;
        let mut out = String::new();
        if let Some(n) = &self.name {
            let _ = writeln!(out, "name {n}");
        }
        if !sig.is_empty() {
            out.push_str("sig");
            for s in sig.symbols() {
                let _ = write!(out, " {}/{}", s.name, s.arity);
            }
            out.push('\n');
        }
        if let Some(g) = sig.groupoid() {
            let xy = ["x".to_string(), "y".to_string()];
            let _ = writeln!(out, "groupoid {}", prefix_display(g, sig, &xy));
        }
        for id in &self.identities {
            let _ = writeln!(out, "id {}", id.display(sig));
        }
        if let Some(w) = &self.witness {
            if let Some(c) = &w.connection {
                let xy = ["x".to_string(), "y".to_string()];
                for (i, t) in c.terms().iter().enumerate() {
                    let _ = writeln!(out, "witness m {} = {}", i + 1, t.display(sig, &xy));
                }
            }
            if let Some(s) = &w.semidegeneracy {
                for (i, t) in s.zero().iter().enumerate() {
                    let _ = writeln!(out, "witness zero {} = {}", i + 1, t.display(sig, &[]));
                }
                for (i, t) in s.one().iter().enumerate() {
                    let _ = writeln!(out, "witness one {} = {}", i + 1, t.display(sig, &[]));
                }
                let names = s.chain_var_names();
                for (i, t) in s.chain().iter().enumerate() {
                    let _ = writeln!(out, "witness U {} = {}", i + 1, t.display(sig, &names));
                }
            }
        }
        out
    }
}

/// Prints with prefix applications only (no `*` sugar).
fn prefix_display(t: &Term, sig: &Signature, names: &[String]) -> String {
    match t {
        Term::Var(i) => names[*i].clone(),
        Term::App(s, args) if args.is_empty() => sig.symbol(*s).name.clone(),
        Term::App(s, args) => {
            let inner: Vec<String> = args.iter().map(|a| prefix_display(a, sig, names)).collect();
            format!("({} {})", sig.symbol(*s).name, inner.join(" "))
        }
    }
}
