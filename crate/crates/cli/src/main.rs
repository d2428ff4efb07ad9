use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ncres::fixtures::Fixtures;
use ncres::oracle::{check_group, Instantiation};
use ncres::pipeline::CaseId;
use ncres::report::{render_markdown, run, RunConfig};
use ncres::symbol::{Catalog, Family};

#[derive(Parser)]
#[command(name = "ncres", version, about = "Exact boundary noncommutative residues of twisted Dirac and signature operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Dirac,
    Signature,
    Both,
}

impl FamilyArg {
    fn families(self) -> Vec<Family> {
        match self {
            FamilyArg::Dirac => vec![Family::Dirac],
            FamilyArg::Signature => vec![Family::Signature],
            FamilyArg::Both => Family::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Markdown,
}

#[derive(clap::Args)]
struct Common {
    #[arg(long, value_enum, default_value = "both")]
    family: FamilyArg,
    /// Restrict to these cases (aI, aII, aIII, b, c); repeatable.
    #[arg(long = "case", value_parser = parse_case)]
    cases: Vec<CaseId>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jet_order: usize,
    /// Rank of the auxiliary bundle used by the numeric oracle.
    #[arg(long, default_value_t = 2)]
    dim_f: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the case values and totals, diff them against the reference fixtures.
    Compute {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Alternative fixture file (schema ncres-fixtures/1).
        #[arg(long)]
        fixtures: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
        /// Skip numeric attribution of mismatches.
        #[arg(long)]
        no_oracle: bool,
        /// Include wall-clock timings (makes output non-deterministic).
        #[arg(long)]
        timing: bool,
    },
    /// Run the built-in invariant checks.
    Selftest {
        #[arg(long, default_value_t = 1)]
        jet_order: usize,
    },
    /// Compare every case group against direct numerical integration.
    Oracle {
        #[command(flatten)]
        common: Common,
        /// Number of consecutive seeds starting at --seed.
        #[arg(long, default_value_t = 1)]
        samples: u64,
    },
}

fn parse_case(s: &str) -> Result<CaseId, String> {
    s.parse().map_err(|e: ncres::Error| e.to_string())
}

fn cases_or_all(c: &[CaseId]) -> Vec<CaseId> {
    if c.is_empty() { CaseId::ALL.to_vec() } else { c.to_vec() }
}

fn compute(common: Common, format: Format, fixtures: Option<PathBuf>, workers: Option<usize>, no_oracle: bool, timing: bool) -> Result<ExitCode, ncres::Error> {
    let mut cfg = RunConfig {
        families: common.family.families(),
        cases: cases_or_all(&common.cases),
        oracle: !no_oracle,
        seed: common.seed,
        jet_order: common.jet_order,
        dim_f: common.dim_f,
        timing,
        ..RunConfig::default()
    };
    if let Some(w) = workers {
        cfg.workers = w.max(1);
    }
    if let Some(p) = fixtures {
        cfg.fixtures = Fixtures::load(&p)?;
    }
    let report = run(&cfg)?;
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Markdown => print!("{}", render_markdown(&report)?),
    }
    if report.has_engine_bug() {
        eprintln!("error: the numeric oracle disagrees with the engine on at least one ledger entry");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn selftest(jet_order: usize) -> Result<ExitCode, ncres::Error> {
    let mut failed = 0;
    for c in ncres::selftest::run(jet_order)? {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        failed += usize::from(!c.passed);
    }
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn oracle(common: Common, samples: u64) -> Result<ExitCode, ncres::Error> {
    let mut ok = true;
    for fam in common.family.families() {
        let cat = Catalog::build(fam, common.jet_order)?;
        for seed in (0..samples.max(1)).map(|k| common.seed.wrapping_add(k)) {
            let inst = Instantiation::random(seed, common.dim_f);
            for case in cases_or_all(&common.cases) {
                let g = check_group(&cat, case, &inst)?;
                println!(
                    "{} {fam} {case} seed={seed} exact={:.12e}{:+.12e}i numeric={:.12e}{:+.12e}i rel_err={:.2e}",
                    if g.passes() { "PASS" } else { "FAIL" },
                    g.exact.re,
                    g.exact.im,
                    g.numeric.re,
                    g.numeric.im,
                    g.rel_err()
                );
                ok &= g.passes();
            }
        }
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match cli.command {
        Command::Compute { common, format, fixtures, workers, no_oracle, timing } => compute(common, format, fixtures, workers, no_oracle, timing),
        Command::Selftest { jet_order } => selftest(jet_order),
        Command::Oracle { common, samples } => oracle(common, samples),
    };
    r.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(3)
    })
}
