use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use ordkit::completion::{is_continuous_lattice, is_precontinuous, is_precontinuous_fast};
use ordkit::representation::{lattice_closure, lattice_interpolate, scott_omega_rp_family, Interpolation};
use ordkit::topology::{
    find_normal_separation, from_quasi_pseudometric, from_specialization, is_closed_in_product, lower_topology,
    scott_topology, urysohn_nachbin, ProductClosedness,
};
use ordkit::{
    macneille, BitopPreorderedSpace, FinitePoset, FinitePreorder, FrinkEmpty, Rational, UtilityFamily, Valuation,
};
use ordkit_cli::generate::generate;
use ordkit_cli::instance::{parse_subset, parse_values};
use ordkit_cli::report::{has_violation, write_reports, Tally};
use ordkit_cli::{emit, parse_file, run_suite, Instance, InstanceFile, Kind, Params};

#[derive(Parser)]
#[command(name = "ordkit", version, about = "Finite order theory: completions, order-closed spaces, utility families")]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FrinkArg {
    Allow,
    Forbid,
}

impl From<FrinkArg> for FrinkEmpty {
    fn from(a: FrinkArg) -> Self {
        match a {
            FrinkArg::Allow => FrinkEmpty::Allow,
            FrinkArg::Forbid => FrinkEmpty::Forbid,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// MacNeille completion of the quotient, as a poset instance.
    Complete { file: PathBuf },
    /// Scott topology of a poset.
    Scott { file: PathBuf },
    /// Lower topology of a poset.
    Lower { file: PathBuf },
    /// Precontinuity of a preorder.
    Precontinuous {
        file: PathBuf,
        /// Empty-ideal reading; both when omitted.
        #[arg(long, value_enum)]
        frink_empty: Option<FrinkArg>,
    },
    /// Richter-Peleg multi-utility from the completion, as a family instance.
    Represent { file: PathBuf },
    /// Is the order closed in the product topology?
    CheckClosed { file: PathBuf },
    /// Separate a decreasing closed set from an increasing closed set.
    Normality {
        file: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Monotone semicontinuous function sending A to 0 and B to 1.
    Urysohn {
        file: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = 16)]
        depth: usize,
    },
    /// Rebuild PHI from the lattice closure of a family.
    Interpolate {
        file: PathBuf,
        #[arg(long)]
        phi: String,
    },
    /// Seeded random instance.
    Gen {
        kind: Kind,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a verification suite and write one report per line.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        /// Fix the carrier size of the random tier.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 16)]
        depth: usize,
        #[arg(long, value_enum)]
        frink_empty: Option<FrinkArg>,
        /// Add wall-clock microseconds to every report.
        #[arg(long)]
        timing: bool,
    },
}

fn load(path: &Path) -> anyhow::Result<Instance> {
    Ok(parse_file(path).with_context(|| format!("reading {}", path.display()))?.instance)
}

fn preorder_of(inst: Instance) -> anyhow::Result<FinitePreorder> {
    match inst {
        Instance::Preorder(p) => Ok(p),
        Instance::Poset(p) => Ok(p.into_preorder()),
        other => bail!("expected a preorder or poset, found {}", other.kind()),
    }
}

fn poset_of(inst: Instance) -> anyhow::Result<FinitePoset> {
    Ok(FinitePoset::try_from_preorder(preorder_of(inst)?)?)
}

fn space_of(inst: Instance) -> anyhow::Result<BitopPreorderedSpace> {
    Ok(match inst {
        Instance::Bitop(c) => BitopPreorderedSpace::new(c.t1, c.t2, c.ord)?,
        Instance::Qpm(d) => from_quasi_pseudometric(&d)?,
        Instance::Poset(p) => BitopPreorderedSpace::scott_lower(&p),
        Instance::Preorder(p) => BitopPreorderedSpace::up_down(&p),
        Instance::Topology(t) => from_specialization(&t)?,
        Instance::Family(_) => bail!("a family does not define a space"),
    })
}

fn values_json(f: &Valuation<Rational>) -> serde_json::Value {
    json!(f.values().iter().map(ToString::to_string).collect::<Vec<_>>())
}

fn line(out: &mut dyn Write, value: serde_json::Value) -> anyhow::Result<()> {
    writeln!(out, "{value}")?;
    Ok(())
}

/// `Ok(true)` when a suite reported a violation.
fn run(cli: Cli, out: &mut dyn Write) -> anyhow::Result<bool> {
    match cli.command {
        Command::Complete { file } => {
            let q = preorder_of(load(&file)?)?;
            let l = macneille(&q.quotient().target);
            for (i, c) in l.cuts().iter().enumerate() {
                writeln!(out, "# cut {i}: {c}")?;
            }
            let lp = l.to_poset()?;
            let continuous = is_continuous_lattice(&lp)?;
            writeln!(out, "# continuous: {continuous}")?;
            let file = InstanceFile { name: Some("completion".into()), instance: Instance::Poset(lp) };
            write!(out, "{}", emit(&file))?;
        }
        Command::Scott { file } => {
            let t = scott_topology(&poset_of(load(&file)?)?);
            write!(out, "{}", emit(&InstanceFile::new(Instance::Topology(t))))?;
        }
        Command::Lower { file } => {
            let t = lower_topology(&poset_of(load(&file)?)?);
            write!(out, "{}", emit(&InstanceFile::new(Instance::Topology(t))))?;
        }
        Command::Precontinuous { file, frink_empty } => {
            let q = preorder_of(load(&file)?)?;
            let policies = match frink_empty {
                Some(p) => vec![p.into()],
                None => vec![FrinkEmpty::Allow, FrinkEmpty::Forbid],
            };
            for policy in policies {
                let name = if policy == FrinkEmpty::Allow { "allow" } else { "forbid" };
                line(out, json!({ "frink_empty": name, "precontinuous": is_precontinuous(&q, policy) }))?;
            }
            line(out, json!({ "fast": is_precontinuous_fast(&q) }))?;
        }
        Command::Represent { file } => {
            let q = preorder_of(load(&file)?)?;
            let v: UtilityFamily = scott_omega_rp_family(&q)?;
            write!(out, "{}", emit(&InstanceFile::new(Instance::Family(v))))?;
        }
        Command::CheckClosed { file } => {
            let (t1, t2, ord) = match load(&file)? {
                Instance::Bitop(c) => (c.t1, c.t2, c.ord),
                other => {
                    let s = space_of(other)?;
                    (s.t1().clone(), s.t2().clone(), s.order().clone())
                }
            };
            match is_closed_in_product(&t1, &t2, &ord) {
                ProductClosedness::Closed(_) => line(out, json!({ "closed": true }))?,
                ProductClosedness::Open { a, b } => line(out, json!({ "closed": false, "a": a, "b": b }))?,
            }
        }
        Command::Normality { file, a, b } => {
            let s = space_of(load(&file)?)?;
            let (a, b) = (parse_subset(&a, s.len())?, parse_subset(&b, s.len())?);
            match find_normal_separation(&s, &a, &b)? {
                Some((o1, o2)) => line(out, json!({ "o1": o1.to_string(), "o2": o2.to_string() }))?,
                None => line(out, json!({ "o1": null, "o2": null }))?,
            }
        }
        Command::Urysohn { file, a, b, depth } => {
            let s = space_of(load(&file)?)?;
            let (a, b) = (parse_subset(&a, s.len())?, parse_subset(&b, s.len())?);
            let r = urysohn_nachbin::<Rational>(&s, &a, &b, depth)?;
            line(out, json!({ "f": values_json(&r.f), "rounds": r.rounds, "stabilized": r.stabilized }))?;
        }
        Command::Interpolate { file, phi } => {
            let Instance::Family(v) = load(&file)? else {
                bail!("expected a family instance");
            };
            let phi = Valuation::new(parse_values(&phi, v.carrier())?);
            match lattice_interpolate(&phi, &lattice_closure(&v))? {
                Interpolation::Found(g) => line(out, json!({ "found": values_json(&g) }))?,
                Interpolation::NoMatch { x, y } => line(out, json!({ "found": null, "no_match": [x, y] }))?,
            }
        }
        Command::Gen { kind, n, seed } => {
            write!(out, "{}", emit(&generate(kind, n, seed)))?;
        }
        Command::Verify { suite, seed, count, n, depth, frink_empty, timing } => {
            let params = Params { seed, count, n, depth, frink: frink_empty.map(Into::into), timing };
            let reports = run_suite(&suite, &params)?;
            write_reports(out, &reports)?;
            let t = Tally::of(&reports);
            eprintln!(
                "{suite}: {} pass, {} violation, {} discrepancy, {} skipped",
                t.pass, t.violation, t.discrepancy, t.skipped
            );
            return Ok(has_violation(&reports));
        }
    }
    Ok(false)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut out: Box<dyn Write> = match &cli.out {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: cannot create {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let result = run(cli, &mut out);
    let flushed = out.flush();
    match result {
        Ok(_) if flushed.is_err() => ExitCode::from(2),
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
