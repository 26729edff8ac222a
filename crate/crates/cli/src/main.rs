use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};

use pog_core::algebra::{parse_presentation, FiniteAlgebra, Presentation};
use pog_core::formula::{
    build_centrality_suite, build_main_sentence, build_phi, build_pi, build_psi, build_psi_schema, build_zeta,
    classify_prenex, export_tptp, prenex_form, tptp_text, FormulaBook, GeneralPhi, Indexing, Orientation,
    PhiVariant, TptpRole, WMode,
};
use pog_core::harness::{adjudicate_phi_variants, decompose, preset, preset_names, Suite, Verifier};
use pog_core::order::related_order;
use pog_core::search::{count_models, enumerate_models, Budget, EnumerationRequest, Filters};
use pog_core::witness::{
    check_semidegeneracy_evidence, find_connection_terms, find_semidegeneracy_witnesses, WitnessBounds, WitnessSet,
};

/// Wall-clock budget in seconds, overridden by `--budget-secs`.
const BUDGET_ENV: &str = "POG_BUDGET_SECS";

const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(name = "pog", version, about = "Finite po-groupoid workbench")]
struct Cli {
    /// Wall-clock budget in seconds (default: $POG_BUDGET_SECS, else none).
    #[arg(long, global = true)]
    budget_secs: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// Bundled presentation name.
    #[arg(long, conflicts_with = "spec")]
    preset: Option<String>,
    /// Presentation: a bundled name or a presentation file.
    #[arg(long)]
    spec: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FilterArg {
    None,
    Po,
    Connected,
}

impl From<FilterArg> for Filters {
    fn from(f: FilterArg) -> Self {
        match f {
            FilterArg::None => Filters::NONE,
            FilterArg::Po => Filters::PO,
            FilterArg::Connected => Filters::CONNECTED,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    General,
    R,
}

#[derive(Clone, Copy, ValueEnum)]
enum IndexingArg {
    #[value(name = "k-1")]
    KMinusOne,
    #[value(name = "n-1")]
    NMinusOne,
}

#[derive(Clone, Copy, ValueEnum)]
enum WModeArg {
    Param,
    Zero,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrientationArg {
    Printed,
    Mirrored,
}

#[derive(Args)]
struct VariantOpts {
    #[arg(long, value_enum, default_value = "general")]
    variant: VariantArg,
    #[arg(long, value_enum, default_value = "k-1")]
    indexing: IndexingArg,
    #[arg(long, value_enum, default_value = "param")]
    w_mode: WModeArg,
    #[arg(long, value_enum, default_value = "mirrored")]
    orientation: OrientationArg,
}

impl VariantOpts {
    fn variant(&self) -> PhiVariant {
        match self.variant {
            VariantArg::R => PhiVariant::R,
            VariantArg::General => PhiVariant::General(GeneralPhi {
                indexing: match self.indexing {
                    IndexingArg::KMinusOne => Indexing::KMinusOne,
                    IndexingArg::NMinusOne => Indexing::NMinusOne,
                },
                w_mode: match self.w_mode {
                    WModeArg::Param => WMode::ComplementParameter,
                    WModeArg::Zero => WMode::ZeroClosed,
                },
                orientation: match self.orientation {
                    OrientationArg::Printed => Orientation::Printed,
                    OrientationArg::Mirrored => Orientation::Mirrored,
                },
            }),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormulaArg {
    Psi,
    Pi,
    Phi,
    Suite,
    Zeta,
    Main,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitFormat {
    Text,
    Json,
    Tptp,
    Prenex,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderFormat {
    Dot,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// List the bundled presentations.
    Presets,
    /// Print every model of one size as JSON lines.
    Enumerate {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        size: usize,
        /// Keep isomorphic copies.
        #[arg(long)]
        all: bool,
        #[arg(long, value_enum, default_value = "none")]
        filter: FilterArg,
        #[arg(long)]
        limit: Option<u64>,
    },
    /// Count models of sizes 1..=max-size.
    Count {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 4)]
        max_size: usize,
        #[arg(long)]
        all: bool,
        #[arg(long, value_enum, default_value = "none")]
        filter: FilterArg,
    },
    /// Search connection and semidegeneracy witness terms; prints the
    /// presentation with the found witnesses.
    Witness {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 3)]
        max_n: usize,
        #[arg(long, default_value_t = 2)]
        max_l: usize,
        #[arg(long, default_value_t = 2)]
        max_depth: usize,
        #[arg(long, default_value_t = 4)]
        size_bound: usize,
    },
    /// Print a synthesized formula.
    Emit {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum)]
        formula: FormulaArg,
        #[command(flatten)]
        variant: VariantOpts,
        /// ψ/π length when the presentation declares no connection terms.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: EmitFormat,
    },
    /// Run a verification suite.
    Verify {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        suite: String,
        /// Defaults: 5 for the R-variant, 3 for general Φ, 4 otherwise.
        #[arg(long)]
        size_bound: Option<usize>,
        #[arg(long)]
        product_bound: Option<usize>,
        #[command(flatten)]
        variant: VariantOpts,
        #[arg(long)]
        seed: Option<u64>,
        /// Write the JSON report here (`-` for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Compare every Φ variant on the Φ- and ζ-lemmas.
    Adjudicate {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 3)]
        size_bound: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Factor pairs, central pairs and decompositions of a model.
    Decompose {
        #[command(flatten)]
        source: Source,
        /// Algebra JSON: {"size": n, "ops": {"mul": [...]}}.
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Related order of a model.
    Order {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_enum, default_value = "dot")]
        format: OrderFormat,
    },
}

/// Error and the exit code it maps to.
struct Failure(u8, String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(EXIT_INPUT, e.to_string())
    }
}

fn load(source: &Source) -> Result<Presentation, Failure> {
    let name = source
        .preset
        .as_deref()
        .or(source.spec.as_deref())
        .ok_or_else(|| Failure(EXIT_INPUT, "one of --preset or --spec is required".into()))?;
    if let Some(p) = preset(name) {
        return Ok(p.presentation());
    }
    if source.preset.is_some() {
        return Err(Failure(
            EXIT_INPUT,
            format!("unknown preset `{name}` (known: {})", preset_names().join(", ")),
        ));
    }
    let text = fs::read_to_string(name).map_err(|e| Failure(EXIT_INPUT, format!("{name}: {e}")))?;
    Ok(parse_presentation(&text)?)
}

fn load_model(p: &Presentation, path: &Path) -> Result<FiniteAlgebra, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    Ok(FiniteAlgebra::from_json(&p.signature, &text)?)
}

fn budget(cli: &Cli) -> Result<Budget, Failure> {
    let secs = match cli.budget_secs {
        Some(s) => Some(s),
        None => match std::env::var(BUDGET_ENV) {
            Ok(v) => Some(v.trim().parse().map_err(|_| Failure(EXIT_INPUT, format!("{BUDGET_ENV}: not a number")))?),
            Err(_) => None,
        },
    };
    Ok(Budget {
        max_assignments: None,
        deadline: secs.map(|s| Instant::now() + Duration::from_secs(s)),
    })
}

fn write_json(target: &Option<PathBuf>, json: &str) -> Result<(), Failure> {
    match target {
        // a closed pipe (e.g. `| head`) is not an error
        Some(path) if path.as_os_str() == "-" => drop(writeln!(std::io::stdout(), "{json}")),
        Some(path) => fs::write(path, json).map_err(|e| Failure(EXIT_INPUT, format!("{}: {e}", path.display())))?,
        None => {}
    }
    Ok(())
}

fn witness_of(p: &Presentation) -> WitnessSet {
    p.witness.clone().unwrap_or_default()
}

fn emit_book(p: &Presentation, formula: FormulaArg, variant: PhiVariant, n: Option<usize>) -> Result<FormulaBook, Failure> {
    let w = witness_of(p);
    let book = match (formula, n) {
        (FormulaArg::Psi, Some(n)) => build_psi_schema(&p.signature, n)?,
        (FormulaArg::Psi, None) => build_psi(&p.signature, &w)?,
        (FormulaArg::Pi, _) => build_pi(&p.signature, &w)?,
        (FormulaArg::Phi, _) => build_phi(p, &w, variant)?,
        (FormulaArg::Suite, _) => build_centrality_suite(p, &w, variant)?,
        (FormulaArg::Zeta, _) => build_zeta(p, &w, variant)?,
        (FormulaArg::Main, _) => build_main_sentence(p, &w, variant)?,
    };
    Ok(book)
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let budget = budget(cli)?;
    match &cli.command {
        Command::Presets => {
            for p in pog_core::harness::PRESETS {
                println!("{:<12} {}", p.name, p.description);
            }
            Ok(0)
        }
        Command::Enumerate {
            source,
            size,
            all,
            filter,
            limit,
        } => {
            let p = load(source)?;
            let req = EnumerationRequest::new(&p, *size)
                .up_to_iso(!all)
                .filters((*filter).into())
                .limit(*limit)
                .budget(budget);
            let stats = enumerate_models(&req, |a| {
                println!("{}", a.to_json(&p.signature));
                true
            });
            match stats {
                Ok(_) => Ok(0),
                Err(pog_core::search::SearchError::Budget { .. }) => {
                    eprintln!("budget exceeded");
                    Ok(2)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Count {
            source,
            max_size,
            all,
            filter,
        } => {
            let p = load(source)?;
            match count_models(&p, *max_size, !all, (*filter).into(), budget) {
                Ok(counts) => {
                    for (size, n) in counts {
                        println!("{size} {n}");
                    }
                    Ok(0)
                }
                Err(pog_core::search::SearchError::Budget { .. }) => {
                    eprintln!("budget exceeded");
                    Ok(2)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Witness {
            source,
            max_n,
            max_l,
            max_depth,
            size_bound,
        } => {
            let mut p = load(source)?;
            let mut w = WitnessSet::default();
            match find_connection_terms(&p, *max_n, *max_depth, *size_bound, budget)? {
                Some(c) => w.connection = Some(c.terms),
                None => eprintln!("no connection terms with n ≤ {max_n}, depth ≤ {max_depth} (size bound {size_bound})"),
            }
            if p.signature.has_constant() {
                let bounds = WitnessBounds {
                    max_depth: *max_depth,
                    size_bound: *size_bound,
                    ..WitnessBounds::default()
                };
                match find_semidegeneracy_witnesses(&p, bounds, *max_l, budget)? {
                    Some(s) => {
                        let ev = check_semidegeneracy_evidence(&p, s.terms.zero(), s.terms.one(), *size_bound, budget)?;
                        if !ev.passed() {
                            eprintln!("semidegeneracy evidence fails: {:?}", ev.violations);
                        }
                        w.semidegeneracy = Some(s.terms);
                    }
                    None => eprintln!("no semidegeneracy witnesses with l ≤ {max_l}"),
                }
            } else {
                eprintln!("no constants: semidegeneracy witnesses need closed terms");
            }
            let found = !w.is_empty();
            p.witness = Some(w);
            print!("{}", p.to_spec_text());
            Ok(if found { 0 } else { 1 })
        }
        Command::Emit {
            source,
            formula,
            variant,
            n,
            format,
        } => {
            let p = load(source)?;
            let book = emit_book(&p, *formula, variant.variant(), *n)?;
            match format {
                EmitFormat::Text => {
                    print!("{}", book.to_text());
                    println!("% class {}", classify_prenex(&book));
                }
                EmitFormat::Json => println!("{}", book.to_json()),
                EmitFormat::Tptp => print!("{}", tptp_text(&export_tptp(&book, TptpRole::Axiom))),
                EmitFormat::Prenex => {
                    let pf = prenex_form(&book);
                    println!("{} {}", pf.class(), pf.text(&book));
                }
            }
            Ok(0)
        }
        Command::Verify {
            source,
            suite,
            size_bound,
            product_bound,
            variant,
            seed,
            json,
        } => {
            let p = load(source)?;
            let suite: Suite = suite.parse()?;
            let v = variant.variant();
            let formula_suite = matches!(suite, Suite::Phi | Suite::Zeta | Suite::Main | Suite::Factorable);
            let bound = size_bound.unwrap_or(match (formula_suite, v) {
                (true, PhiVariant::R) => 5,
                (true, _) => 3,
                _ => 4,
            });
            let mut verifier = Verifier::new(&p).with_variant(v).with_budget(budget);
            if let Some(s) = seed {
                verifier = verifier.with_seed(*s);
            }
            if let Some(b) = product_bound {
                verifier = verifier.with_product_bound(*b);
            }
            let report = verifier.run(suite, bound)?;
            eprintln!("{}", report.summary());
            write_json(json, &report.to_json())?;
            Ok(report.exit_code() as u8)
        }
        Command::Adjudicate {
            source,
            size_bound,
            json,
        } => {
            let p = load(source)?;
            let report = adjudicate_phi_variants(&p, &witness_of(&p), *size_bound, budget)?;
            for v in &report.variants {
                eprintln!(
                    "{} {:<36} phi {}/{}  zeta {}/{}",
                    if v.passed { "PASS" } else { "FAIL" },
                    v.variant,
                    v.phi.failures,
                    v.phi.checks,
                    v.zeta.failures,
                    v.zeta.checks
                );
            }
            eprintln!("selected: {}", report.selected.as_deref().unwrap_or("none"));
            write_json(json, &report.to_json())?;
            Ok(report.exit_code() as u8)
        }
        Command::Decompose { source, model, json } => {
            let p = load(source)?;
            let a = load_model(&p, model)?;
            let report = decompose(&p, &a)?;
            match json {
                Some(_) => write_json(json, &report.to_json())?,
                None => println!("{}", report.to_json()),
            }
            Ok(0)
        }
        Command::Order { source, model, format } => {
            let p = load(source)?;
            let a = load_model(&p, model)?;
            let order = related_order(&a, &p.signature)?;
            match format {
                OrderFormat::Dot => print!("{}", order.to_dot()),
                OrderFormat::Json => println!("{}", order.to_json()),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
