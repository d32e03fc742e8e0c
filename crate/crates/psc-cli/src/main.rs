#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod report;

use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use psc_core::action::{omega_weights, theta, verify_action, EdgeClass, OmegaMode};
use psc_core::check::run_all;
use psc_core::desc::{
    axis_profile, parse_descriptor, print_descriptor, push_cap_at, Attachment, Location, Node,
    Push, Site, SphereDescriptor,
};
use psc_core::disks::{gamma, parse_config_table, print_config_table, render_svg, ConfigTable};
use psc_core::tree::{compose, normalize, parse_tree, print_tree, WTree};
use psc_core::warp::{
    bulb_profile, lens_profile, round_profile, sample_csv, torpedo_profile, verify_psc, Profile,
    WarpedMetric,
};
use serde_json::json;

use report::{Outcome, Report, Row};

#[derive(Parser)]
#[command(name = "psc", version, about = "Psc-metrics, little disks and W-trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weighted trees over little disks
    #[command(subcommand)]
    Tree(TreeCommand),
    /// Disk configuration files
    #[command(subcommand)]
    Disks(DisksCommand),
    /// Warped metrics and descriptors
    #[command(subcommand)]
    Metric(MetricCommand),
    /// The action of trees on descriptors
    #[command(subcommand)]
    Action(ActionCommand),
    /// Property harnesses
    #[command(subcommand)]
    Check(CheckCommand),
}

#[derive(Args)]
struct TreeInput {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    configs: PathBuf,
    /// Where to write the configuration table, including labels created
    /// while rewriting.
    #[arg(long)]
    configs_out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum TreeCommand {
    /// Print the normal form
    Normalize(TreeInput),
    /// Graft one tree per input
    Compose {
        #[command(flatten)]
        tree: TreeInput,
        #[arg(long = "with", required = true)]
        with: Vec<PathBuf>,
    },
    /// Edge weights of the normal form
    Omega {
        #[command(flatten)]
        tree: TreeInput,
        #[arg(long, value_enum, default_value_t = Mode::Segmented)]
        mode: Mode,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Segmented,
    Unsegmented,
}

#[derive(Subcommand)]
enum DisksCommand {
    /// Check containment and disjointness of every configuration
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Operad composition of named configurations
    Compose {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        outer: String,
        /// One name per disk of the outer configuration
        #[arg(long, value_delimiter = ',', required = true)]
        inner: Vec<String>,
        #[arg(long, default_value = "result")]
        name: String,
    },
    /// SVG drawing of a planar configuration
    Render {
        #[arg(long = "in")]
        input: PathBuf,
        /// Needed when the file holds more than one configuration
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Shape {
    Round,
    Torpedo,
    Lens,
    Bulb,
}

#[derive(Args)]
struct ProfileSource {
    #[arg(long, value_enum, conflicts_with = "desc", required_unless_present = "desc")]
    profile: Option<Shape>,
    /// Descriptor file whose axis profile is used
    #[arg(long)]
    desc: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long, default_value_t = FRAC_PI_2)]
    r: f64,
    #[arg(long, default_value_t = 3)]
    dim: usize,
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Body {
    /// Round body with a base hemisphere head
    Round,
    /// Round body capped by a torpedo at each pole
    DoubleTorpedo,
    /// Round body with a base head and a bulb at the south pole
    Bulb,
}

#[derive(Subcommand)]
enum MetricCommand {
    /// Write a descriptor
    Build {
        #[arg(long, value_enum)]
        shape: Body,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = FRAC_PI_2)]
        r: f64,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample a profile as CSV
    Profile {
        #[command(flatten)]
        source: ProfileSource,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimum scalar curvature on a grid
    Curvature {
        #[command(flatten)]
        source: ProfileSource,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ActionCommand {
    /// Plug descriptors into the inputs of a tree
    Apply {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        configs: PathBuf,
        /// One descriptor per input, in input order
        #[arg(long = "input")]
        inputs: Vec<PathBuf>,
        /// Sphere dimension when the tree has no inputs
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized equivariance, composition and relation checks
    Verify(Seeded),
}

#[derive(Args)]
struct Seeded {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    cases: usize,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Every harness
    All(Seeded),
}

/// Failure to run a command, as opposed to a property that does not hold.
struct Fatal {
    code: u8,
    message: String,
}

#[allow(non_snake_case)]
fn Fatal(message: String) -> Fatal {
    Fatal { code: 1, message }
}

fn usage(message: String) -> Fatal {
    Fatal { code: 2, message }
}

impl<E: std::fmt::Display> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Fatal> {
    fs::read_to_string(path).map_err(|e| Fatal(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Fatal> {
    fs::write(path, text).map_err(|e| Fatal(format!("{}: {e}", path.display())))
}

/// Writes to `path`, or standard output without one.
fn emit(path: Option<&Path>, text: &str) -> Result<(), Fatal> {
    match path {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_table(path: &Path) -> Result<ConfigTable, Fatal> {
    parse_config_table(&read(path)?).map_err(|e| Fatal(format!("{}:{e}", path.display())))
}

fn load_tree(path: &Path, table: &ConfigTable) -> Result<WTree, Fatal> {
    let t = parse_tree(&read(path)?, table).map_err(|e| Fatal(format!("{}:{e}", path.display())))?;
    t.validate()?;
    Ok(t)
}

fn load_descriptor(path: &Path) -> Result<SphereDescriptor, Fatal> {
    parse_descriptor(&read(path)?).map_err(|e| Fatal(format!("{}: {e}", path.display())))
}

fn print_with_table(t: &WTree, mut table: ConfigTable, out: Option<&Path>) -> Result<(), Fatal> {
    let before = table.configs.len();
    let text = print_tree(t, &mut table);
    print!("{text}");
    match out {
        Some(p) => write(p, &print_config_table(&table))?,
        None if table.configs.len() > before => {
            eprintln!("note: new configurations were created; pass --configs-out to keep them");
        }
        None => {}
    }
    Ok(())
}

fn tree(cmd: TreeCommand) -> Result<Outcome, Fatal> {
    match cmd {
        TreeCommand::Normalize(input) => {
            let table = load_table(&input.configs)?;
            let t = load_tree(&input.input, &table)?;
            print_with_table(&normalize(&t), table, input.configs_out.as_deref())?;
            Ok(Outcome::Ok)
        }
        TreeCommand::Compose { tree, with } => {
            let table = load_table(&tree.configs)?;
            let t = load_tree(&tree.input, &table)?;
            let us = with
                .iter()
                .map(|p| load_tree(p, &table))
                .collect::<Result<Vec<_>, _>>()?;
            let out = compose(&t, &us)?;
            print_with_table(&out, table, tree.configs_out.as_deref())?;
            Ok(Outcome::Ok)
        }
        TreeCommand::Omega { tree, mode, report } => {
            let table = load_table(&tree.configs)?;
            let t = normalize(&load_tree(&tree.input, &table)?);
            let mode = match mode {
                Mode::Segmented => OmegaMode::Segmented,
                Mode::Unsegmented => OmegaMode::Unsegmented,
            };
            let mut r = Report::new("tree omega");
            for (path, w) in omega_weights(&t, mode) {
                let class = match w.class {
                    EdgeClass::Regular => "regular".to_string(),
                    EdgeClass::Special { position } => format!("special {position}"),
                    EdgeClass::Unclassified => "unclassified".to_string(),
                };
                r.push(Row::new(
                    format!("{path:?}"),
                    true,
                    json!({ "path": path, "length": w.length, "weight": w.weight, "class": w.class }),
                    format!("length {:?} weight {:?} {class}", w.length, w.weight),
                ));
            }
            r.emit(report.as_deref())
        }
    }
}

fn disks(cmd: DisksCommand) -> Result<Outcome, Fatal> {
    match cmd {
        DisksCommand::Validate { input, report } => {
            let table = load_table(&input)?;
            let mut r = Report::new("disks validate");
            for (name, c) in &table.configs {
                let violations = c.violations();
                r.push(Row::new(
                    name.clone(),
                    violations.is_empty(),
                    json!({ "arity": c.arity(), "violations": violations }),
                    if violations.is_empty() {
                        format!("arity {}", c.arity())
                    } else {
                        format!("{violations:?}")
                    },
                ));
            }
            r.emit(report.as_deref())
        }
        DisksCommand::Compose {
            input,
            outer,
            inner,
            name,
        } => {
            let table = load_table(&input)?;
            let lookup = |n: &str| {
                table
                    .get(n)
                    .cloned()
                    .ok_or_else(|| usage(format!("no configuration named @{n}")))
            };
            let c = lookup(&outer)?;
            let ds = inner.iter().map(|n| lookup(n)).collect::<Result<Vec<_>, _>>()?;
            let mut out = ConfigTable::new(table.dim);
            out.insert(name, gamma(&c, &ds)?);
            print!("{}", print_config_table(&out));
            Ok(Outcome::Ok)
        }
        DisksCommand::Render { input, name, out } => {
            let table = load_table(&input)?;
            let c = match name {
                Some(n) => table
                    .get(&n)
                    .ok_or_else(|| usage(format!("no configuration named @{n}")))?,
                None if table.configs.len() == 1 => table.configs.values().next().expect("one entry"),
                None => return Err(usage("the file holds several configurations; pass --name".into())),
            };
            if let Err(v) = c.validate() {
                eprintln!("invalid configuration: {v:?}");
                return Ok(Outcome::Failed);
            }
            let svg = render_svg(c).ok_or_else(|| Fatal(format!("cannot draw dimension {}", c.dim)))?;
            write(&out, &svg)?;
            Ok(Outcome::Ok)
        }
    }
}

fn profile_of(source: &ProfileSource) -> Result<Profile, Fatal> {
    if let Some(path) = &source.desc {
        return Ok(axis_profile(&load_descriptor(path)?)?);
    }
    Ok(match source.profile.expect("clap requires a source") {
        Shape::Round => round_profile(source.lambda)?,
        Shape::Torpedo => torpedo_profile(source.delta)?,
        Shape::Lens => lens_profile(source.lambda, source.r)?,
        Shape::Bulb => bulb_profile(source.lambda, source.r, source.dim)?.profile,
    })
}

fn metric_of(source: &ProfileSource) -> Result<WarpedMetric, Fatal> {
    if !(source.step > 0.0) {
        return Err(usage(format!("grid step must be positive, got {}", source.step)));
    }
    Ok(WarpedMetric::new(source.dim, profile_of(source)?)?)
}

fn build(shape: Body, lambda: f64, r: f64, dim: usize) -> Result<SphereDescriptor, Fatal> {
    let head = |l: f64, r: f64| {
        Site::new("base", Location::North, Attachment::FreeHead { lambda: l, r }).as_base()
    };
    let d = match shape {
        Body::Round => SphereDescriptor::single(dim, Node::round(lambda, vec![head(lambda, lambda * FRAC_PI_2)])),
        Body::DoubleTorpedo => {
            let cap = |id: &str, at| Site::new(id, at, Attachment::FreeTorpedo { delta: lambda });
            SphereDescriptor::single(
                dim,
                Node::round(
                    lambda,
                    vec![cap("north", Location::North).as_base(), cap("south", Location::South)],
                ),
            )
        }
        Body::Bulb => {
            let round = SphereDescriptor::single(dim, Node::round(lambda, vec![head(lambda, lambda * FRAC_PI_2)]));
            push_cap_at(&round, 0, "bulb", Location::South, Push::Bulb { lambda, r })?.0
        }
    };
    d.validate()?;
    Ok(d)
}

fn metric(cmd: MetricCommand) -> Result<Outcome, Fatal> {
    match cmd {
        MetricCommand::Build {
            shape,
            lambda,
            r,
            dim,
            out,
        } => {
            let d = build(shape, lambda, r, dim)?;
            emit(out.as_deref(), &print_descriptor(&d))?;
            Ok(Outcome::Ok)
        }
        MetricCommand::Profile { source, out } => {
            let m = metric_of(&source)?;
            emit(out.as_deref(), &sample_csv(&m, source.step)?)?;
            Ok(Outcome::Ok)
        }
        MetricCommand::Curvature { source, report } => {
            let m = metric_of(&source)?;
            let psc = verify_psc(&m, source.step);
            let mut r = Report::new("metric curvature");
            r.push(Row::new(
                "min_r".to_string(),
                psc.min_r > 0.0,
                json!({ "min_r": psc.min_r, "argmin": psc.argmin, "samples": psc.samples }),
                format!("min R {:?} at t = {:?} over {} samples", psc.min_r, psc.argmin, psc.samples),
            ));
            r.emit(report.as_deref())
        }
    }
}

fn action(cmd: ActionCommand) -> Result<Outcome, Fatal> {
    match cmd {
        ActionCommand::Apply {
            tree,
            configs,
            inputs,
            dim,
            out,
        } => {
            let table = load_table(&configs)?;
            let t = load_tree(&tree, &table)?;
            let gs = inputs
                .iter()
                .map(|p| load_descriptor(p))
                .collect::<Result<Vec<_>, _>>()?;
            let d = if gs.is_empty() {
                psc_core::action::proxy(&t, dim)?
            } else {
                theta(&t, &gs)?
            };
            emit(out.as_deref(), &print_descriptor(&d))?;
            Ok(Outcome::Ok)
        }
        ActionCommand::Verify(s) => {
            let v = verify_action(s.seed, s.cases);
            let mut r = Report::new("action verify");
            r.seed = Some(s.seed);
            for c in &v.results {
                r.push(Row::new(
                    format!("{} {}", c.case, c.property),
                    c.passed,
                    serde_json::to_value(c)?,
                    c.counterexample
                        .as_ref()
                        .and_then(|x| x.error.clone())
                        .unwrap_or_default(),
                ));
            }
            r.emit(s.report.as_deref())
        }
    }
}

fn check(cmd: CheckCommand) -> Result<Outcome, Fatal> {
    let CheckCommand::All(s) = cmd;
    let mut r = Report::new("check all");
    r.seed = Some(s.seed);
    for p in run_all(s.seed, s.cases) {
        let detail = format!("{}/{} failed", p.failures, p.cases);
        r.push(Row::new(p.name.clone(), p.passed(), serde_json::to_value(&p)?, detail));
    }
    r.emit(s.report.as_deref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Tree(c) => tree(c),
        Command::Disks(c) => disks(c),
        Command::Metric(c) => metric(c),
        Command::Action(c) => action(c),
        Command::Check(c) => check(c),
    };
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(Fatal { code, message }) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
