use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use log::{debug, info};
use serde::Serialize;
use serde_json::json;

use tprop_core::aleph::{self, AlephElement};
use tprop_core::bialgebra::Bialgebra;
use tprop_core::endv::{self, EndComponent};
use tprop_core::free::{self, parse_word};
use tprop_core::strata::{ChainComplex, SignRule};
use tprop_core::{scalar, Error, TensorMap};

#[derive(Parser)]
#[command(name = "tprop", version, about = "Exact computations with 2/3-PROPs and bialgebra structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a file holds an associative, coassociative, multiplicative pair.
    Check {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print the Maurer-Cartan defect of the file's structure.
    Mc {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Bracket two elements built from the file's product and coproduct.
    Bracket {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "beta")]
        left: Element,
        #[arg(long, value_enum, default_value = "beta")]
        right: Element,
        #[arg(long)]
        json: bool,
    },
    /// Face counts and homology of the strata complex for (m, n).
    Homology {
        m: usize,
        n: usize,
        /// Emit the face poset as a DOT graph instead of the report.
        #[arg(long)]
        dot: bool,
        /// Append the boundary matrices as sparse triplets.
        #[arg(long)]
        triplets: bool,
        /// Use the per-degeneration Koszul signs instead of induced orientations.
        #[arg(long)]
        koszul: bool,
        #[arg(long)]
        json: bool,
    },
    /// Sample random tensors and check the composition identities in End(V).
    Axioms {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 6)]
        bound: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Print the resolved bracket sign conventions.
    Signs {
        #[arg(long)]
        json: bool,
    },
    /// Parse a free word, print its normal form, and evaluate it on a file.
    Word {
        expr: String,
        file: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Element {
    /// The product as a bar element.
    Psi,
    /// The coproduct as a bar element.
    Theta,
    /// Their sum.
    Beta,
}

/// Outcome of a command: the report text and whether the checked property held.
struct Outcome {
    text: String,
    holds: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("TPROP_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{}", out.text);
            if out.holds {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Result<Outcome, Error> {
    match cmd {
        Command::Check { file, json } => check(&load(&file)?, json),
        Command::Mc { file, json } => mc(&load(&file)?, json),
        Command::Bracket {
            file,
            left,
            right,
            json,
        } => bracket(&load(&file)?, left, right, json),
        Command::Homology {
            m,
            n,
            dot,
            triplets,
            koszul,
            json,
        } => homology(m, n, dot, triplets, koszul, json),
        Command::Axioms {
            dim,
            bound,
            trials,
            seed,
            json,
        } => axioms(dim, bound, trials, seed, json),
        Command::Signs { json } => signs(json),
        Command::Word { expr, file, json } => word(&expr, file.as_deref(), json),
    }
}

fn load(path: &Path) -> Result<Bialgebra, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    let b = Bialgebra::from_json(&text)?;
    info!("loaded {} (dim {})", path.display(), b.dim());
    Ok(b)
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

/// Nonzero entries as `[outputs] <- [inputs]: value`, 1-based.
fn tensor_lines(out: &mut String, indent: &str, name: &str, t: &TensorMap) {
    let entries = t.nonzero_entries();
    if entries.is_empty() {
        let _ = writeln!(out, "{indent}{name}: zero");
        return;
    }
    let _ = writeln!(out, "{indent}{name}: {} nonzero entries", entries.len());
    for (o, i, c) in entries {
        let one = |v: Vec<usize>| v.into_iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(",");
        let _ = writeln!(out, "{indent}  [{}] <- [{}]: {}", one(o), one(i), scalar::format(&c));
    }
}

fn element_lines(out: &mut String, name: &str, x: &AlephElement) {
    if x.is_zero() {
        let _ = writeln!(out, "{name}: zero");
        return;
    }
    let _ = writeln!(out, "{name}:");
    for (g, c) in x.terms() {
        let kind = match g {
            aleph::Generator::PsiBar(_) => "psi_bar",
            aleph::Generator::ThetaBar(_) => "theta_bar",
            aleph::Generator::Alpha(_) => "alpha",
        };
        let t = g.tensor();
        let _ = writeln!(out, "  {} * {kind}({},{})", scalar::format(&c), t.inputs(), t.outputs());
        tensor_lines(out, "    ", "tensor", t);
    }
}

fn check(b: &Bialgebra, json: bool) -> Result<Outcome, Error> {
    let report = b.report()?;
    let mc = aleph::mc_defect(&b.star, &b.delta)?;
    let holds = report.holds();
    debug!("defects computed, bialgebra = {holds}");
    let text = if json {
        to_json(&json!({
            "bialgebra": holds,
            "failure": report.failure(),
            "defects": report,
            "mc_defect": mc,
        }))
    } else {
        let mut s = String::new();
        tensor_lines(&mut s, "", "associator", &report.associator);
        tensor_lines(&mut s, "", "coassociator", &report.coassociator);
        tensor_lines(&mut s, "", "compatibility", &report.compatibility);
        element_lines(&mut s, "mc_defect", &mc);
        match report.failure() {
            None => s.push_str("bialgebra: yes\n"),
            Some(why) => {
                let _ = writeln!(s, "bialgebra: no ({why})");
            }
        }
        s
    };
    Ok(Outcome { text, holds })
}

fn mc(b: &Bialgebra, json: bool) -> Result<Outcome, Error> {
    let defect = aleph::mc_defect(&b.star, &b.delta)?;
    let holds = defect.is_zero();
    let text = if json {
        to_json(&json!({ "maurer_cartan": holds, "mc_defect": defect }))
    } else {
        let mut s = String::new();
        element_lines(&mut s, "mc_defect", &defect);
        s
    };
    Ok(Outcome { text, holds })
}

fn element(b: &Bialgebra, e: Element) -> Result<AlephElement, Error> {
    let psi = AlephElement::psi_bar(b.star.clone())?;
    let theta = AlephElement::theta_bar(b.delta.clone())?;
    match e {
        Element::Psi => Ok(psi),
        Element::Theta => Ok(theta),
        Element::Beta => psi.add(&theta),
    }
}

fn bracket(b: &Bialgebra, left: Element, right: Element, json: bool) -> Result<Outcome, Error> {
    let x = aleph::bracket(&element(b, left)?, &element(b, right)?)?;
    let text = if json {
        to_json(&json!({ "bracket": x }))
    } else {
        let mut s = String::new();
        element_lines(&mut s, "bracket", &x);
        s
    };
    Ok(Outcome { text, holds: true })
}

fn list(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn homology(m: usize, n: usize, dot: bool, triplets: bool, koszul: bool, json: bool) -> Result<Outcome, Error> {
    let rule = if koszul { SignRule::Koszul } else { SignRule::Induced };
    let complex = match ChainComplex::assemble(m, n, rule) {
        Ok(c) => c,
        Err(e @ Error::BoundarySquare { .. }) => {
            let text = if json {
                to_json(&json!({ "m": m, "n": n, "boundary_squares_to_zero": false, "error": e.to_string() }))
            } else {
                format!("{e}\n")
            };
            return Ok(Outcome { text, holds: false });
        }
        Err(e) => return Err(e),
    };
    if dot {
        return Ok(Outcome {
            text: complex.dot(),
            holds: true,
        });
    }
    let f = complex.f_vector();
    let h = complex.homology_ranks();
    let chi = complex.euler_characteristic();
    let text = if json {
        let mut v = json!({
            "m": m,
            "n": n,
            "f_vector": f,
            "boundary_squares_to_zero": true,
            "homology": h,
            "euler_characteristic": chi,
        });
        if triplets {
            v["triplets"] = json!(complex.triplets_text());
        }
        to_json(&v)
    } else {
        let mut s = format!("f={}, H={}\nchi={chi}\n", list(&f), list(&h));
        if triplets {
            s.push_str(&complex.triplets_text());
        }
        s
    };
    Ok(Outcome { text, holds: true })
}

fn axioms(dim: usize, bound: usize, trials: usize, seed: u64, json: bool) -> Result<Outcome, Error> {
    if dim == 0 {
        return Err(Error::Format("--dim must be at least 1".into()));
    }
    if bound < 3 {
        return Err(Error::Format("--bound must be at least 3".into()));
    }
    let report = endv::check_axioms(dim, bound, trials, seed);
    let holds = report.all_passed();
    let text = if json {
        to_json(&report)
    } else {
        let mut s = format!("dim={dim} bound={bound} seed={seed}\n");
        for r in &report.results {
            let verdict = match (r.passed, r.trials) {
                (false, _) => "FAIL",
                (true, 0) => "SKIP",
                (true, _) => "PASS",
            };
            let _ = writeln!(s, "{verdict} {} ({} trials)", r.name, r.trials);
            if let Some(c) = &r.counterexample {
                let _ = writeln!(s, "  {c}");
            }
        }
        s
    };
    Ok(Outcome { text, holds })
}

fn signs(json: bool) -> Result<Outcome, Error> {
    let table = aleph::sign_table();
    let text = if json {
        to_json(&table)
    } else {
        table.iter().map(|e| format!("{}: {}\n", e.case, e.rule)).collect()
    };
    Ok(Outcome { text, holds: true })
}

fn word(expr: &str, file: Option<&Path>, json: bool) -> Result<Outcome, Error> {
    let w = parse_word(expr)?;
    let nf = w.normal_form();
    let sig = w.signature();
    let value = match file {
        Some(path) => {
            let b = load(path)?;
            let assign = free::bialgebra_assignment(&b.star, &b.delta);
            Some(free::evaluate(&w, &assign)?)
        }
        None => None,
    };
    let text = if json {
        to_json(&json!({
            "word": w,
            "normal_form": nf,
            "signature": sig,
            "generators": w.size(),
            "value": value,
        }))
    } else {
        let mut s = format!("word: {w}\nnormal form: {nf}\n");
        let _ = writeln!(
            s,
            "signature: {:?} ({},{}){}",
            sig.kind,
            sig.m,
            sig.n,
            if sig.has_occ { " with occ" } else { "" }
        );
        match &value {
            Some(EndComponent::Plain(t)) => tensor_lines(&mut s, "", "value", t),
            Some(EndComponent::Row(r)) => {
                for (k, t) in r.entries().iter().enumerate() {
                    tensor_lines(&mut s, "", &format!("value[{}]", k + 1), t);
                }
            }
            Some(EndComponent::Column(c)) => {
                for (k, t) in c.entries().iter().enumerate() {
                    tensor_lines(&mut s, "", &format!("value[{}]", k + 1), t);
                }
            }
            None => {}
        }
        s
    };
    Ok(Outcome { text, holds: true })
}
