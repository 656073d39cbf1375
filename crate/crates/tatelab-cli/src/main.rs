//! `tatelab`: run the verification suites and write their reports.

mod chart;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use tatelab::completion_lab::{closed_form_image, completion_checks, CompletionWindow, IdealCase, TowerModel};
use tatelab::cyclic_cohomology::{describe_factors, subgroup_action, tate_structure_in_degree};
use tatelab::fgl_detect::{fgl_checks, hazewinkel_table, height_certificate, Uniformizer};
use tatelab::gca::load_presentation;
use tatelab::invariants::InvariantRing;
use tatelab::report::Check;
use tatelab::serre::{apply_differentials, d3_family, run_pipeline, trivial_coefficient_e2, SerreWindow};
use tatelab::suites::{
    cohomology_checks, invariants_checks, relations_checks, serre_suite, SuiteResult, SuiteWindows,
};

use crate::report::{Report, Timing};

/// Environment variable overriding the output directory.
const OUT_DIR_ENV: &str = "TATELAB_OUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "tatelab", version, about = "Exact Tate cohomology and spectral sequence checks for C3 and C9")]
struct Cli {
    /// TOML configuration with `[windows]` and `[completion]` tables.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for reports (default `reports`, or the value of TATELAB_OUT_DIR).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every suite on the configured windows.
    VerifyPaper,
    /// Tate cohomology of M, or a table for a presentation file.
    Cohomology(CohomologyArgs),
    /// The sixteen invariant generators and freeness over S.
    Invariants {
        #[arg(long, allow_hyphen_values = true)]
        t_min: Option<i64>,
    },
    /// Product identities, reductions and relation ideals.
    Relations,
    /// The Serre spectral sequence for M and for trivial coefficients.
    Serre(SerreArgs),
    /// Finite-stage completion checks.
    Completion(CompletionArgs),
    /// Hazewinkel generators and the height certificate.
    Fgl(FglArgs),
    /// SVG charts of the spectral sequence pages.
    Chart(ChartArgs),
}

#[derive(Args, Debug)]
struct CohomologyArgs {
    /// Presentation file with an action; prints Ĥ^0 and Ĥ^1 per degree instead of running the suite.
    #[arg(long)]
    presentation: Option<PathBuf>,
    /// Restrict the action to the subgroup of this index.
    #[arg(long, default_value_t = 1)]
    subgroup: usize,
    #[arg(long, allow_hyphen_values = true)]
    t_min: Option<i64>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
    t_max: i64,
}

#[derive(Args, Debug)]
struct SerreArgs {
    /// Internal degree window `T_MIN T_MAX`.
    #[arg(long, num_args = 2, value_names = ["T_MIN", "T_MAX"], allow_hyphen_values = true)]
    window: Option<Vec<i64>>,
    /// Print the prediction against the direct computation for every `(n, t)`.
    #[arg(long)]
    compare: bool,
    #[arg(long)]
    p_max: Option<i64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CaseArg {
    /// The ideal (3, x, y).
    Maximal,
    /// The ideal (3, y - x).
    Diagonal,
}

#[derive(Args, Debug)]
struct CompletionArgs {
    /// Print the stabilized images for one ideal and stage instead of running every check.
    #[arg(long, value_enum)]
    case: Option<CaseArg>,
    #[arg(long)]
    stage: Option<u32>,
    #[arg(long)]
    lookahead: Option<usize>,
    #[arg(long, num_args = 2, value_names = ["T_MIN", "T_MAX"], allow_hyphen_values = true)]
    window: Option<Vec<i64>>,
}

#[derive(Args, Debug)]
struct FglArgs {
    /// Print the table of v_1, ..., v_6 modulo 3 and the height certificate.
    #[arg(long)]
    table: bool,
    #[arg(long)]
    precision: Option<u32>,
    /// Sign of the uniformizer used for the printed table.
    #[arg(long, value_enum, default_value_t = UniformizerArg::OneMinusZeta)]
    uniformizer: UniformizerArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum UniformizerArg {
    OneMinusZeta,
    ZetaMinusOne,
}

#[derive(Args, Debug)]
struct ChartArgs {
    /// Internal degree of the page for M.
    #[arg(long, allow_hyphen_values = true, default_value_t = -6)]
    t: i64,
    /// Total degree bound for the trivial-coefficient page.
    #[arg(long, default_value_t = 8)]
    n_max: i64,
}

/// Everything a run reads from the configuration file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RunConfig {
    windows: SuiteWindows,
    completion: CompletionWindow,
}

impl RunConfig {
    fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else { return Ok(RunConfig::default()) };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let config: RunConfig = toml::from_str(&text).with_context(|| format!("malformed config {}", path.display()))?;
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        let w = &self.windows;
        let s = &w.serre;
        if !(s.t_min <= s.t_max && s.t_max <= 0) {
            bail!("serre window needs t_min <= t_max <= 0, got [{}, {}]", s.t_min, s.t_max);
        }
        if s.n_min > s.n_max || s.p_max < 0 {
            bail!("serre window needs n_min <= n_max and p_max >= 0");
        }
        for (name, t) in [
            ("cohomology_t_min", w.cohomology_t_min),
            ("exact_t_min", w.exact_t_min),
            ("census_t_min", w.census_t_min),
            ("freeness_t_min", w.freeness_t_min),
        ] {
            if t > 0 {
                bail!("{name} must be <= 0, got {t}");
            }
        }
        let c = &self.completion;
        if c.t_min > c.t_max || c.t_max > 0 {
            bail!("completion window needs t_min <= t_max <= 0");
        }
        Ok(())
    }
}

fn out_dir(cli: &Cli) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("reports"))
}

fn timed<T>(timing: &mut Timing, name: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
    let start = Instant::now();
    let value = f()?;
    timing.suites.push((name.to_string(), start.elapsed().as_secs_f64()));
    Ok(value)
}

fn suite(name: &str, checks: Vec<Check>) -> SuiteResult {
    SuiteResult { name: name.to_string(), checks }
}

fn emit<C: Serialize>(cli: &Cli, stem: &str, config: C, results: Vec<SuiteResult>, mut timing: Timing, start: Instant) -> Result<ExitCode> {
    timing.total_seconds = start.elapsed().as_secs_f64();
    let report = Report::new(stem, config, results, timing);
    print!("{}", report.digest());
    let path = report.write(&out_dir(cli), stem)?;
    println!("report: {}", path.display());
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let mut config = RunConfig::load(cli.config.as_deref())?;
    let start = Instant::now();
    let mut timing = Timing::default();
    match &cli.command {
        Command::VerifyPaper => {
            let ring = InvariantRing::new();
            let w = config.windows.clone();
            let results = vec![
                suite("cohomology", timed(&mut timing, "cohomology", || Ok(cohomology_checks(&w)?))?),
                suite("invariants", timed(&mut timing, "invariants", || Ok(invariants_checks(&ring, &w)))?),
                suite("relations", timed(&mut timing, "relations", || Ok(relations_checks(&ring)?))?),
                suite("serre", timed(&mut timing, "serre", || Ok(serre_suite(&ring, &w)?.checks))?),
                suite("completion", timed(&mut timing, "completion", || Ok(completion_checks(&config.completion)))?),
                suite("fgl", timed(&mut timing, "fgl", || Ok(fgl_checks(w.fgl_precision)?))?),
            ];
            emit(cli, "verify-paper", &config, results, timing, start)
        }
        Command::Cohomology(args) => {
            if let Some(t_min) = args.t_min {
                config.windows.cohomology_t_min = t_min;
            }
            match &args.presentation {
                Some(path) => {
                    let checks = presentation_table(path, args.subgroup, args.t_min.unwrap_or(-12), args.t_max)?;
                    emit(cli, "cohomology", &config, vec![suite("cohomology", checks)], timing, start)
                }
                None => {
                    let checks = timed(&mut timing, "cohomology", || Ok(cohomology_checks(&config.windows)?))?;
                    emit(cli, "cohomology", &config, vec![suite("cohomology", checks)], timing, start)
                }
            }
        }
        Command::Invariants { t_min } => {
            if let Some(t) = t_min {
                config.windows.freeness_t_min = *t;
            }
            let ring = InvariantRing::new();
            let checks = timed(&mut timing, "invariants", || Ok(invariants_checks(&ring, &config.windows)))?;
            emit(cli, "invariants", &config, vec![suite("invariants", checks)], timing, start)
        }
        Command::Relations => {
            let ring = InvariantRing::new();
            let checks = timed(&mut timing, "relations", || Ok(relations_checks(&ring)?))?;
            emit(cli, "relations", &config, vec![suite("relations", checks)], timing, start)
        }
        Command::Serre(args) => {
            if let Some(w) = &args.window {
                config.windows.serre.t_min = w[0];
                config.windows.serre.t_max = w[1];
            }
            if let Some(p) = args.p_max {
                config.windows.serre.p_max = p;
            }
            config.validate()?;
            let ring = InvariantRing::new();
            let result = timed(&mut timing, "serre", || Ok(serre_suite(&ring, &config.windows)?))?;
            if args.compare {
                println!("{:>3} {:>5}  {:<20} {:<20} ok", "n", "t", "predicted", "direct");
                for r in &result.comparison.rows {
                    println!(
                        "{:>3} {:>5}  {:<20} {:<20} {}",
                        r.n,
                        r.t,
                        describe_factors(&r.predicted),
                        describe_factors(&r.observed),
                        if r.agrees() { "yes" } else { "NO" }
                    );
                }
                println!("mismatches: {}", result.comparison.mismatches().len());
            }
            emit(cli, "serre", &config, vec![suite("serre", result.checks)], timing, start)
        }
        Command::Completion(args) => {
            if let Some(w) = &args.window {
                config.completion.t_min = w[0];
                config.completion.t_max = w[1];
            }
            if let Some(l) = args.lookahead {
                config.completion.lookahead = l;
            }
            config.validate()?;
            let checks = match (args.case, args.stage) {
                (None, None) => timed(&mut timing, "completion", || Ok(completion_checks(&config.completion)))?,
                (case, stage) => {
                    let case = match case.unwrap_or(CaseArg::Maximal) {
                        CaseArg::Maximal => IdealCase::Maximal,
                        CaseArg::Diagonal => IdealCase::Diagonal,
                    };
                    tower_table(case, stage.unwrap_or(3), &config.completion)
                }
            };
            emit(cli, "completion", &config, vec![suite("completion", checks)], timing, start)
        }
        Command::Fgl(args) => {
            if let Some(p) = args.precision {
                config.windows.fgl_precision = p;
            }
            if args.table {
                print_fgl_table(args, config.windows.fgl_precision)?;
            }
            let checks = timed(&mut timing, "fgl", || Ok(fgl_checks(config.windows.fgl_precision)?))?;
            emit(cli, "fgl", &config, vec![suite("fgl", checks)], timing, start)
        }
        Command::Chart(args) => {
            let dir = out_dir(cli);
            std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            let e2 = trivial_coefficient_e2(args.n_max)?;
            let d3 = d3_family(&e2)?;
            let e4 = apply_differentials(&e2, &d3)?;
            let trivial = dir.join("serre-trivial.svg");
            let title = "E2 for trivial coefficients, d3 and survivors";
            std::fs::write(&trivial, chart::page_svg(title, &e2, &d3, &e4, 0))
                .with_context(|| format!("writing {}", trivial.display()))?;
            let ring = InvariantRing::new();
            let window = SerreWindow { t_min: args.t, t_max: args.t, ..config.windows.serre };
            let run = run_pipeline(&ring, window)?;
            let m = dir.join(format!("serre-m-t{}.svg", args.t));
            let title = format!("E3 for M at t = {}, d3 and survivors", args.t);
            std::fs::write(&m, chart::page_svg(&title, &run.e2, &run.d3, &run.e4, args.t))
                .with_context(|| format!("writing {}", m.display()))?;
            println!("{}\n{}", trivial.display(), m.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// `Ĥ^0` and `Ĥ^1` of a presented action in every degree of the window, as computed values.
fn presentation_table(path: &Path, subgroup: usize, t_min: i64, t_max: i64) -> Result<Vec<Check>> {
    let file = load_presentation(path)?;
    let (_, action) = file.build::<i64>()?;
    let Some(action) = action else { bail!("{} declares no action", path.display()) };
    let action = if subgroup > 1 { subgroup_action(&action, subgroup)? } else { action };
    let mut out = Vec::new();
    for t in (t_min..=t_max).rev() {
        let s = tate_structure_in_degree(&action, t)?;
        for n in [0, 1] {
            out.push(Check::computed(
                &format!("cohomology.t{t}.n{n}"),
                "Tate cohomology of the presented action",
                describe_factors(&s.invariant_factors(n)),
            ));
        }
    }
    Ok(out)
}

/// Stabilized images of one tower stage against the closed form, one check per degree and parity.
fn tower_table(case: IdealCase, k: u32, window: &CompletionWindow) -> Vec<Check> {
    let mut model = TowerModel::new(case);
    model
        .window(k, window.t_min, window.t_max, window.lookahead)
        .into_iter()
        .map(|img| {
            let expected = closed_form_image(case, k, img.t, img.parity);
            Check::new(
                &format!("completion.tower{}.k{k}.t{}.p{}", case.name(), img.t, img.parity),
                "stabilized image of the tower against the closed form",
                img.exponents() == expected.as_slice(),
                format!(
                    "image {:?}, closed form {:?}, stabilized at {:?}",
                    img.exponents(),
                    expected,
                    img.stabilized_at
                ),
            )
        })
        .collect()
}

fn print_fgl_table(args: &FglArgs, precision: u32) -> Result<()> {
    let uniformizer = match args.uniformizer {
        UniformizerArg::OneMinusZeta => Uniformizer::OneMinusZeta,
        UniformizerArg::ZetaMinusOne => Uniformizer::ZetaMinusOne,
    };
    let table = hazewinkel_table(6, precision, uniformizer)?;
    println!("π = {}, precision 3^{precision}", uniformizer.name());
    for (n, line) in table.lines().iter().enumerate() {
        println!("v{} ≡ {line} mod 3", n + 1);
    }
    let cert = height_certificate(&table);
    println!(
        "valuations: {}",
        cert.valuations.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
    );
    println!("residues mod π: {:?}", cert.residues);
    println!("height six: {}", cert.height_is_six() && cert.lower_valuations_positive());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid_and_round_trips() {
        let c = RunConfig::default();
        c.validate().unwrap();
        let text = toml::to_string(&c).unwrap();
        assert_eq!(toml::from_str::<RunConfig>(&text).unwrap(), c);
    }

    #[test]
    fn malformed_config_reports_a_location() {
        let err = toml::from_str::<RunConfig>("[windows]\nserre = 3\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let bad = RunConfig { windows: SuiteWindows { census_t_min: 4, ..SuiteWindows::default() }, ..RunConfig::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn parses_the_documented_invocations() {
        Cli::try_parse_from(["tatelab", "serre", "--window", "-12", "0", "--compare"]).unwrap();
        Cli::try_parse_from(["tatelab", "fgl", "--table"]).unwrap();
        Cli::try_parse_from(["tatelab", "completion", "--case", "diagonal", "--stage", "2"]).unwrap();
        Cli::try_parse_from(["tatelab", "verify-paper", "--out", "x"]).unwrap();
    }
}
