//! The bundled presentations.

use crate::algebra::{parse_presentation, Presentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    /// Presentation-file text, declared witnesses included.
    pub text: &'static str,
    /// Every model is a connected po-groupoid.
    pub connected: bool,
    /// No nontrivial member has a trivial subalgebra.
    pub semidegenerate: bool,
    /// The R identities hold.
    pub r_identities: bool,
}

impl Preset {
    pub fn presentation(&self) -> Presentation {
        parse_presentation(self.text).expect("bundled preset parses")
    }
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "bsl",
        description: "bounded meet-semilattices",
        text: "name bsl
sig mul/2 0/0 1/0
id x * y * z = x * (y * z)
id x * y = y * x
id x * x = x
id x * 0 = 0
id x * 1 = x
witness m 1 = x * y
witness zero 1 = 0
witness one 1 = 1
witness U 1 = x
witness U 2 = x * z
witness U 3 = y * z
",
        connected: true,
        semidegenerate: true,
        r_identities: true,
    },
    Preset {
        name: "posemigroup",
        description: "associative po-groupoids (x·y·x ≈ y·x)",
        text: "name posemigroup
sig mul/2
id x * y * z = x * (y * z)
id x * x = x
id x * y * x = y * x
",
        connected: false,
        semidegenerate: false,
        r_identities: false,
    },
    Preset {
        name: "rvariety",
        description: "relative meet-semilattices (x·y·z ≈ y·x·z)",
        text: "name rvariety
sig mul/2
id x * y * z = x * (y * z)
id x * x = x
id x * y * z = y * x * z
",
        connected: false,
        semidegenerate: false,
        r_identities: true,
    },
    Preset {
        name: "rightzero",
        description: "right-zero semigroups (x·y ≈ y), an antichain",
        text: "name rightzero
sig mul/2
id x * y = y
",
        connected: false,
        semidegenerate: false,
        r_identities: true,
    },
    Preset {
        name: "semilattice",
        description: "meet-semilattices",
        text: "name semilattice
sig mul/2
id x * y * z = x * (y * z)
id x * y = y * x
id x * x = x
",
        connected: true,
        semidegenerate: false,
        r_identities: true,
    },
    Preset {
        name: "band",
        description: "idempotent semigroups",
        text: "name band
sig mul/2
id x * y * z = x * (y * z)
id x * x = x
",
        connected: false,
        semidegenerate: false,
        r_identities: false,
    },
    Preset {
        name: "slat0",
        description: "meet-semilattices with a least element 0",
        text: "name slat0
sig mul/2 0/0
id x * y * z = x * (y * z)
id x * y = y * x
id x * x = x
id x * 0 = 0
",
        connected: true,
        semidegenerate: false,
        r_identities: true,
    },
    Preset {
        name: "groupoid",
        description: "all groupoids",
        text: "name groupoid
sig mul/2
",
        connected: false,
        semidegenerate: false,
        r_identities: false,
    },
];

pub fn preset(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|p| p.name).collect()
}
