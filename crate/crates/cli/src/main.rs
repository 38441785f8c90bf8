use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use twocover::constructions::{build, gamma_formula, Theorem, TheoremInstance};
use twocover::cover::DEFAULT_NODE_BUDGET;
use twocover::group::FiniteGroup;
use twocover::tabular::{TabularGroup, DEFAULT_SUBGROUP_CAP};
use twocover::verify::{
    cover_with_second, report_sigma, verify_exact_minimum, verify_exact_tabular, verify_full_sweep,
    verify_structural, ReportFormat, VerificationReport, DEFAULT_PAIR_BUDGET,
};
use twocover::Error;

/// Largest group whose Cayley table `construct` will write.
const EXPORT_CAP: usize = 10_000;

#[derive(Parser)]
#[command(
    name = "twocover",
    version,
    about = "Covering and 2-covering numbers of finite solvable groups"
)]
struct Cli {
    /// Worker threads for pair sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Maximum number of unordered pairs a full sweep may visit.
    #[arg(long, global = true, default_value_t = DEFAULT_PAIR_BUDGET)]
    pair_budget: u64,
    /// Maximum branch-and-bound nodes for the exact solver.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_BUDGET)]
    node_budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    report: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Full,
    Structural,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    ElemAbelian,
}

#[derive(Args)]
struct TheoremArgs {
    /// 1: quaternion family; 2: dihedral family.
    #[arg(long)]
    theorem: u8,
    #[arg(long)]
    p: u64,
    /// Order of the endomorphism field (dihedral family only).
    #[arg(long)]
    q: Option<u64>,
}

impl TheoremArgs {
    fn theorem(&self) -> Result<Theorem, Error> {
        match (self.theorem, self.q) {
            (1, None) => Ok(Theorem::One { p: self.p }),
            (1, Some(_)) => Err(Error::InvalidParameter(
                "--q applies to theorem 2 only".into(),
            )),
            (2, Some(q)) => Ok(Theorem::Two { q, p: self.p }),
            (2, None) => Err(Error::InvalidParameter("theorem 2 needs --q".into())),
            (t, _) => Err(Error::InvalidParameter(format!("unknown theorem {t}"))),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build an instance and print its parameters.
    Construct {
        #[command(flatten)]
        target: TheoremArgs,
        /// Write the full multiplication table to PATH.
        #[arg(long)]
        export_cayley: Option<PathBuf>,
    },
    /// List the maximal subgroups and check their number.
    Maximals {
        #[command(flatten)]
        target: TheoremArgs,
    },
    /// Verify the 2-covering number of an instance.
    Verify {
        #[command(flatten)]
        target: TheoremArgs,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Second-kind subgroups to add to the first-kind ones (full mode),
        /// as indices into the second-kind list.
        #[arg(long, value_delimiter = ',')]
        second: Option<Vec<usize>>,
    },
    /// 2-covering number of a group given by a Cayley table.
    Sigma2 {
        #[arg(long)]
        cayley: PathBuf,
    },
    /// Covering number of a group given by a Cayley table.
    Sigma {
        #[arg(long)]
        cayley: PathBuf,
    },
    /// 2-covering number of a known family, against its closed form.
    Oracle {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        rank: u32,
    },
}

enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let result = run(&cli);
    eprintln!("runtime: {:.3}s", start.elapsed().as_secs_f64());
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::TheoremViolation { .. } | Error::StructuralFailure(_) | Error::Internal(_) => 1,
        _ => 2,
    }
}

fn format(cli: &Cli) -> ReportFormat {
    match cli.report {
        Format::Text => ReportFormat::Text,
        Format::Machine => ReportFormat::Machine,
    }
}

fn emit(cli: &Cli, report: &VerificationReport) -> Outcome {
    print!("{}", report.render(format(cli)));
    if let Some(e) = report.to_error() {
        eprintln!("error: {e}");
        Outcome::Fail
    } else {
        Outcome::Pass
    }
}

fn print_pairs(cli: &Cli, pairs: &[(String, String)]) {
    let sep = match cli.report {
        Format::Text => ": ",
        Format::Machine => "=",
    };
    for (k, v) in pairs {
        println!("{k}{sep}{v}");
    }
}

fn metadata_pairs(inst: &TheoremInstance) -> Vec<(String, String)> {
    inst.metadata()
        .lines()
        .filter_map(|l| l.split_once(": "))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Construct {
            target,
            export_cayley,
        } => {
            let inst = build(target.theorem()?)?;
            let mut pairs = metadata_pairs(&inst);
            if let Some(path) = export_cayley {
                let order = inst.group().order();
                if order > EXPORT_CAP {
                    return Err(Error::TooLarge(format!(
                        "|G| = {order} exceeds the export cap {EXPORT_CAP}"
                    )));
                }
                TabularGroup::from_group(inst.group()).store(path)?;
                pairs.push(("cayley".into(), path.display().to_string()));
            }
            print_pairs(cli, &pairs);
            Ok(Outcome::Pass)
        }
        Command::Maximals { target } => {
            let inst = build(target.theorem()?)?;
            let mut pairs = metadata_pairs(&inst);
            for (j, m) in inst.handles().iter().enumerate() {
                let kind = if m.is_first() { "first" } else { "second" };
                pairs.push((
                    format!("handle.{j}"),
                    format!("{kind} {} order={}", m.label(), m.order),
                ));
            }
            let formula = gamma_formula(inst.q(), inst.r() as u32);
            let submodules = (inst.q().pow(inst.r() as u32 + 1) - 1) / (inst.q() - 1);
            let ok = inst.first_type().count() as u64 == formula
                && inst.maximal_submodules().len() as u64 == submodules;
            pairs.push((
                "gamma_check".into(),
                if ok { "pass" } else { "fail" }.into(),
            ));
            print_pairs(cli, &pairs);
            Ok(if ok { Outcome::Pass } else { Outcome::Fail })
        }
        Command::Verify {
            target,
            mode,
            second,
        } => {
            let inst = build(target.theorem()?)?;
            let report = match mode {
                Mode::Full => {
                    let cover = match second {
                        Some(s) => cover_with_second(&inst, s)?,
                        None => inst.proposed_cover(),
                    };
                    verify_full_sweep(&inst, &cover, cli.pair_budget)?
                }
                Mode::Structural => verify_structural(&inst, cli.pair_budget, cli.node_budget)?,
                Mode::Exact => verify_exact_minimum(&inst, cli.pair_budget, cli.node_budget)?,
            };
            Ok(emit(cli, &report))
        }
        Command::Sigma2 { cayley } => {
            let g = TabularGroup::load(cayley)?;
            let report =
                verify_exact_tabular(&cayley.display().to_string(), &g, None, cli.node_budget)?;
            Ok(emit(cli, &report))
        }
        Command::Sigma { cayley } => {
            let g = TabularGroup::load(cayley)?;
            let report = report_sigma(&cayley.display().to_string(), &g, cli.node_budget)?;
            Ok(emit(cli, &report))
        }
        Command::Oracle {
            family: Family::ElemAbelian,
            p,
            rank,
        } => {
            if !twocover::field::is_prime(*p as u64) {
                return Err(Error::InvalidCharacteristic(*p as u64));
            }
            if p.checked_pow(*rank)
                .is_none_or(|n| n > DEFAULT_SUBGROUP_CAP)
            {
                return Err(Error::TooLarge(format!(
                    "{p}^{rank} exceeds the subgroup cap {DEFAULT_SUBGROUP_CAP}"
                )));
            }
            let g = TabularGroup::elementary_abelian(*p, *rank);
            let expected = (*rank >= 3).then_some((1 + p + p * p) as u64);
            let name = format!("Z_{p}^{rank}");
            let report = verify_exact_tabular(&name, &g, expected, cli.node_budget)?;
            Ok(emit(cli, &report))
        }
    }
}
