//! The `grpf` command line.

pub mod csv;
pub mod error;
pub mod report;
pub mod spec;
pub mod svg;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use grpf::funcs::WaveguideForm;
use grpf::{run, Config, Domain, Outcome};

pub use error::CliError;
use report::{ConfigEcho, DomainEcho, FunctionEcho, MeshStats, Num, ResultEntry, ResultsDocument, Timings, SCHEMA};
use spec::{parse_domain, Builtin, Function, FunctionSpec};

#[derive(Debug, Parser)]
#[command(name = "grpf", version, about = "Find all roots and poles of a complex function inside a bounded domain")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the root and pole finder.
    Run(RunArgs),
    /// List the built-in functions.
    Functions,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OpenPolicy {
    /// Report open regions and stop.
    Warn,
    /// Retry with a halved initial resolution.
    Densify,
    /// Retry on a domain grown by a few mesh widths.
    Extend,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Consistent,
    Unscaled,
}

#[derive(Debug, clap::Args)]
pub struct RunArgs {
    /// demo, cwg, mlwg, gtl or expr:"<expression in z>"
    #[arg(long)]
    pub function: String,
    /// disk:cx,cy,r | rect:xmin,xmax,ymin,ymax | poly:x1,y1;x2,y2;...
    #[arg(long, allow_hyphen_values = true)]
    pub domain: String,
    /// Initial mesh resolution (longest edge).
    #[arg(long)]
    pub dr: f64,
    /// Target accuracy (diameter of a converged region).
    #[arg(long)]
    pub tol: f64,
    /// 0 stops after the estimate on the initial mesh.
    #[arg(long, default_value_t = 100)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 500_000)]
    pub max_nodes: usize,
    /// Results JSON; printed to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Every evaluated point as re,im,f_re,f_im,quadrant.
    #[arg(long)]
    pub nodes_csv: Option<PathBuf>,
    /// Phase portrait of the final mesh.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Verify each region every iteration and stop refining those whose
    /// boundary loops all wind zero times.
    #[arg(long)]
    pub verify_each_iter: bool,
    /// Fail (exit 1) unless the region orders add up to the boundary winding.
    #[arg(long)]
    pub global_winding_check: bool,
    /// Pool results closer than this distance [default: the --tol value].
    /// Raise it for tolerances below the noise floor of f.
    #[arg(long)]
    pub merge_within: Option<f64>,
    /// Also estimate the first moment of each region.
    #[arg(long)]
    pub moments: bool,
    /// Leave timings out of the JSON so repeated runs are byte-identical.
    #[arg(long)]
    pub no_timing: bool,
    #[arg(long, value_enum, default_value_t = OpenPolicy::Warn)]
    pub on_open_region: OpenPolicy,
    /// Worker threads for function evaluation (default: all cores).
    #[arg(long, env = "GRPF_THREADS")]
    pub threads: Option<usize>,
    /// Which form of the circular waveguide determinant `cwg` uses.
    #[arg(long, value_enum, default_value_t = FormArg::Consistent)]
    pub waveguide_form: FormArg,
    /// No summary on stderr.
    #[arg(long, short)]
    pub quiet: bool,
}

/// A validated `run` invocation.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub function: FunctionSpec,
    pub domain: Domain,
    pub domain_spec: String,
    pub dr: f64,
    pub refine: Config,
    pub global_winding_check: bool,
    pub on_open_region: OpenPolicy,
    pub form: WaveguideForm,
    pub timing: bool,
}

impl RunConfig {
    pub fn from_args(a: &RunArgs) -> Result<Self, CliError> {
        let function: FunctionSpec = a.function.parse()?;
        let domain = parse_domain(&a.domain)?;
        if !(a.dr > 0.0 && a.dr.is_finite()) {
            return Err(CliError::Config(format!("--dr must be positive, got {}", a.dr)));
        }
        if !(a.tol > 0.0 && a.tol.is_finite()) {
            return Err(CliError::Config(format!("--tol must be positive, got {}", a.tol)));
        }
        let mut refine = Config::new(a.tol);
        refine.max_iters = a.max_iters;
        refine.max_nodes = a.max_nodes;
        refine.verify_each_iter = a.verify_each_iter;
        refine.moments = a.moments;
        if a.merge_within.is_some() {
            refine.merge_within = a.merge_within;
        }
        Ok(Self {
            function,
            domain,
            domain_spec: a.domain.clone(),
            dr: a.dr,
            refine,
            global_winding_check: a.global_winding_check,
            on_open_region: a.on_open_region,
            form: match a.waveguide_form {
                FormArg::Consistent => WaveguideForm::Consistent,
                FormArg::Unscaled => WaveguideForm::Unscaled,
            },
            timing: !a.no_timing,
        })
    }
}

/// A finished run: the JSON document, the raw outcome, and a reason to
/// exit 1 if the run did not produce a trustworthy answer.
pub struct Report {
    pub document: ResultsDocument,
    pub outcome: Outcome,
    pub failure: Option<String>,
}

const RETRIES: usize = 3;

fn run_with_policy(cfg: &RunConfig, f: &Function) -> Result<(Outcome, Vec<String>), CliError> {
    let mut notes = Vec::new();
    let mut dr = cfg.dr;
    let mut domain = cfg.domain.clone();
    let mut out = run(f.f.as_ref(), &domain, dr, &cfg.refine)?;
    for _ in 0..RETRIES {
        if out.open_regions.is_empty() {
            break;
        }
        match cfg.on_open_region {
            OpenPolicy::Warn => break,
            OpenPolicy::Densify => {
                dr *= 0.5;
                notes.push(format!("open regions found; retrying with dr = {dr}"));
            }
            OpenPolicy::Extend => {
                domain = domain.expanded(2.0 * cfg.dr);
                notes.push(format!("open regions found; retrying on a domain grown by {}", 2.0 * cfg.dr));
            }
        }
        out = run(f.f.as_ref(), &domain, dr, &cfg.refine)?;
    }
    if cfg.on_open_region == OpenPolicy::Extend {
        let (inside, outside): (Vec<_>, Vec<_>) =
            out.results.into_iter().partition(|r| cfg.domain.contains(&r.location, cfg.refine.tol));
        for r in &outside {
            notes.push(format!(
                "q = {} at {}{:+}i lies outside the requested domain and is not reported",
                r.q, r.location.re, r.location.im
            ));
        }
        out.results = inside;
    }
    Ok((out, notes))
}

fn domain_kind(d: &Domain) -> &'static str {
    match d {
        Domain::Rectangle { .. } => "rect",
        Domain::Disk { .. } => "disk",
        Domain::Polygon { .. } => "poly",
    }
}

/// Run the pipeline for `cfg` and assemble the results document.
pub fn execute(cfg: &RunConfig) -> Result<Report, CliError> {
    let start = Instant::now();
    let f = cfg.function.build(cfg.form)?;
    let (outcome, notes) = run_with_policy(cfg, &f)?;
    let elapsed = start.elapsed().as_secs_f64();

    let results: Vec<ResultEntry> = outcome.results.iter().map(|r| ResultEntry::new(r, f.scale)).collect();
    let region_sum: i64 = outcome.results.iter().map(|r| r.q as i64).sum();
    let mut warnings = notes;
    warnings.extend(outcome.warnings.iter().cloned());

    let mut failure = None;
    if cfg.global_winding_check {
        match outcome.global_winding {
            Some(w) if w as i64 == region_sum && outcome.open_regions.is_empty() => {}
            Some(w) => {
                failure = Some(format!("global winding check failed: boundary gives {w}, regions sum to {region_sum}"))
            }
            None => failure = Some("global winding check failed: the domain boundary could not be counted".into()),
        }
    }
    if results.is_empty() && !outcome.open_regions.is_empty() {
        failure = Some("every candidate region is open; nothing could be verified".into());
    }
    if let Some(msg) = &failure {
        warnings.push(msg.clone());
    }

    let echo = ConfigEcho {
        function: FunctionEcho {
            name: f.f.name(),
            spec: cfg.function.to_string(),
            parameters: f.f.metadata().into_iter().collect::<BTreeMap<_, _>>(),
            scale: f.scale.map(Num),
        },
        domain: DomainEcho { kind: domain_kind(&cfg.domain).into(), spec: cfg.domain_spec.clone() },
        dr: Num(cfg.dr),
        tol: Num(cfg.refine.tol),
        max_iters: cfg.refine.max_iters,
        max_nodes: cfg.refine.max_nodes,
        verify_each_iter: cfg.refine.verify_each_iter,
        global_winding_check: cfg.global_winding_check,
        moments: cfg.refine.moments,
        merge_within: cfg.refine.merge_within.map(Num),
        on_open_region: format!("{:?}", cfg.on_open_region).to_lowercase(),
    };
    let s = outcome.stats;
    let document = ResultsDocument {
        schema: SCHEMA.into(),
        config: echo,
        results,
        open_regions: outcome.open_regions.iter().map(Into::into).collect(),
        unresolved: outcome.unresolved.iter().map(Into::into).collect(),
        node_hits: outcome.node_hits.iter().map(Into::into).collect(),
        mesh: MeshStats {
            initial_nodes: s.initial_nodes,
            nodes: s.nodes,
            evaluations: s.evaluations,
            rejected: s.rejected,
            iterations: s.iterations,
            node_hits: s.node_hits,
        },
        global_winding: outcome.global_winding.map(i64::from),
        region_sum,
        timings: cfg.timing.then_some(Timings { total_seconds: Num(elapsed) }),
        warnings,
    };
    Ok(Report { document, outcome, failure })
}

fn write_outputs(args: &RunArgs, report: &Report) -> Result<(), CliError> {
    let o = &report.outcome;
    match &args.out {
        Some(p) => report::emit_results_json(&report.document, p)?,
        None => print!("{}", report.document.to_json()?),
    }
    if let Some(p) = &args.nodes_csv {
        csv::emit_nodes_csv(o.samples.iter().chain(&o.rejected), p)?;
    }
    if let Some(p) = &args.svg {
        svg::emit_mesh_svg(&o.mesh, &o.samples, &o.regions, &o.candidate_edges, p)?;
    }
    Ok(())
}

fn summary(report: &Report) {
    let d = &report.document;
    eprintln!(
        "{}: {} result(s), {} nodes, {} iterations",
        d.config.function.spec,
        d.results.len(),
        d.mesh.nodes,
        d.mesh.iterations
    );
    for r in &d.results {
        eprintln!("  {:>4} {:+} at {:+.15e} {:+.15e}i  ({})", r.kind, r.q, r.location.re.0, r.location.im.0, r.status);
    }
    for w in &d.warnings {
        eprintln!("warning: {w}");
    }
}

fn run_command(args: &RunArgs) -> Result<i32, CliError> {
    let cfg = RunConfig::from_args(args)?;
    let threads = match args.threads {
        Some(0) => return Err(CliError::Config("--threads must be at least 1".into())),
        Some(n) => n,
        None => 0,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {threads} threads: {e}")))?;
    let report = pool.install(|| execute(&cfg))?;
    write_outputs(args, &report)?;
    if !args.quiet {
        summary(&report);
    }
    Ok(if report.failure.is_some() { 1 } else { 0 })
}

/// Entry point; returns the process exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match cli.command {
        Command::Functions => {
            for b in Builtin::ALL {
                println!("{:<6} {}", b.name(), b.summary());
            }
            0
        }
        Command::Run(args) => match run_command(&args) {
            Ok(code) => code,
            Err(e) => {
                eprintln!("error: {e}");
                let code = e.exit_code();
                if code == 2 {
                    let mut cmd = Cli::command();
                    cmd.build();
                    let usage = cmd.find_subcommand_mut("run").map(|c| c.render_usage().to_string());
                    eprintln!("{}", usage.unwrap_or_default());
                }
                code
            }
        },
    }
}
