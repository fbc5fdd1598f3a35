use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use geoforge::actions::{ActionDescriptor, SymKind};
use geoforge::construct::{build_family, Built, FamilySpec};
use geoforge::geometry::{basic_diagram, diagram_dot, Elem, Partition, Pregeometry};
use geoforge::verify::{predict_pa, CheckKind, SdOptions, Strategies, Verifier, VerifyOptions};

/// Build and verify flag-transitive geometries of primitive groups.
#[derive(Parser)]
#[command(name = "geoforge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a named family and write it as geometry JSON.
    Construct {
        #[command(flatten)]
        family: FamilyArgs,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run property checks on a geometry file or a freshly built family.
    Verify(VerifyArgs),
    /// Basic diagram of a flag-transitive geometry.
    Diagram {
        path: PathBuf,
        /// Emit DOT instead of the parameter table.
        #[arg(long)]
        dot: bool,
        /// Compare with the predicted product-action diagram.
        #[arg(long)]
        predict_pa: bool,
        /// Skip the flag-transitivity precondition.
        #[arg(long)]
        force: bool,
    },
    /// Quotient by a per-type partition.
    Quotient {
        path: PathBuf,
        partition: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export a geometry as DOT incidence graph or normalized JSON.
    Export {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = ExportFormat::Json)]
        format: ExportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyName {
    As,
    Pa,
    Hs,
    HsSd,
    Product,
    SdSymbolic,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Dot,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Alt,
    Sym,
}

impl From<Kind> for SymKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Alt => SymKind::Alt,
            Kind::Sym => SymKind::Sym,
        }
    }
}

#[derive(Args, Clone)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: Option<FamilyName>,
    /// Degree parameter of AS/HS/SD families.
    #[arg(long)]
    m: Option<usize>,
    /// Number of product coordinates (PA) or tuple length (SD).
    #[arg(long)]
    n: Option<usize>,
    /// Rank of the geometry.
    #[arg(long)]
    rank: Option<usize>,
    /// PA component action, e.g. `sym:3`, `alt:5`, `agl:5`.
    #[arg(long)]
    component: Option<String>,
    /// Family of the base geometry of a product power.
    #[arg(long, value_enum)]
    inner: Option<FamilyName>,
    /// Exponent of a product power.
    #[arg(long)]
    power: Option<usize>,
    /// Simple group of the SD family.
    #[arg(long, value_enum, default_value_t = Kind::Alt)]
    kind: Kind,
}

impl FamilyArgs {
    fn spec(&self) -> Result<Option<FamilySpec>> {
        match self.family {
            None => Ok(None),
            Some(f) => Ok(Some(self.spec_of(f)?)),
        }
    }

    fn spec_of(&self, family: FamilyName) -> Result<FamilySpec> {
        let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| anyhow!("--{flag} is required for this family"));
        let rank = || need(self.rank, "rank");
        Ok(match family {
            FamilyName::As => FamilySpec::As { m: need(self.m, "m")?, b: rank()? },
            FamilyName::Pa => {
                let text = self.component.as_deref().ok_or_else(|| anyhow!("--component is required for pa"))?;
                FamilySpec::Pa {
                    component: ActionDescriptor::parse_component(text)?,
                    n: need(self.n, "n")?,
                    b: rank()?,
                }
            }
            FamilyName::Hs | FamilyName::HsSd => {
                let b = rank()?
                    .checked_sub(1)
                    .ok_or_else(|| anyhow!("HS geometries have rank b+1 ≥ 2"))?;
                let m = need(self.m, "m")?;
                if matches!(family, FamilyName::Hs) {
                    FamilySpec::Hs { m, b }
                } else {
                    FamilySpec::HsSd { m, b }
                }
            }
            FamilyName::Product => {
                let inner = self.inner.ok_or_else(|| anyhow!("--inner is required for product"))?;
                if matches!(inner, FamilyName::Product) {
                    bail!("--inner product is not supported; nest by repeated powers instead");
                }
                FamilySpec::Product {
                    inner: Box::new(self.spec_of(inner)?),
                    n: need(self.power, "power")?,
                }
            }
            FamilyName::SdSymbolic => FamilySpec::SdSymbolic {
                kind: self.kind.into(),
                m: self.m.unwrap_or(5),
                n: need(self.n, "n")?,
                b: rank()?,
            },
        })
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Geometry file; omit when building with --family.
    path: Option<PathBuf>,
    #[command(flatten)]
    family: FamilyArgs,
    /// Comma-separated checks: c-class, geometry, flag-transitive, thick,
    /// connected, diagram, ha-bound, sd-battery, structure.
    #[arg(long, value_delimiter = ',', conflicts_with = "all")]
    checks: Vec<String>,
    /// Run every check.
    #[arg(long)]
    all: bool,
    /// Count skipped checks as failures.
    #[arg(long)]
    strict: bool,
    /// Partial-flag budget for exhaustive enumeration.
    #[arg(long)]
    budget: Option<u64>,
    /// Flag-transitivity strategies: direct, recursive.
    #[arg(long, value_delimiter = ',')]
    strategies: Vec<String>,
    /// Samples per stream of the SD battery.
    #[arg(long)]
    samples: Option<usize>,
    /// Seed of the SD battery.
    #[arg(long)]
    seed: Option<u64>,
    /// Tuple lengths of the sampled SD checks.
    #[arg(long, value_delimiter = ',')]
    sd_n: Vec<usize>,
    /// Degree of the simple group of the SD battery.
    #[arg(long)]
    sd_m: Option<usize>,
    /// Also write the JSON-lines report to this file.
    #[arg(long)]
    report: Option<PathBuf>,
}

/// Exit status for failed properties, as opposed to errors (2).
const FAILED: u8 = 1;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Construct { family, out } => construct(&family, out.as_deref()),
        Command::Verify(args) => verify(args),
        Command::Diagram {
            path,
            dot,
            predict_pa,
            force,
        } => diagram(&path, dot, predict_pa, force),
        Command::Quotient { path, partition, out } => quotient(&path, &partition, out.as_deref()),
        Command::Export { path, format, out } => export(&path, format, out.as_deref()),
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<Pregeometry> {
    let (g, warnings) = Pregeometry::load(path).with_context(|| format!("loading {}", path.display()))?;
    for w in warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(g)
}

fn describe(g: &Pregeometry) -> String {
    format!(
        "{} elements, {} types, {} incidences{}",
        g.element_count(),
        g.rank(),
        g.total_edges(),
        match g.group() {
            Some(h) => format!(", group of order {} on {} points", h.order(), h.degree()),
            None => String::new(),
        }
    )
}

fn construct(family: &FamilyArgs, out: Option<&Path>) -> Result<u8> {
    let spec = family.spec()?.ok_or_else(|| anyhow!("--family is required"))?;
    match build_family(&spec)? {
        Built::Geometry(g) => {
            let text = serde_json::to_string(&g.to_file())?;
            write_output(out, &text)?;
            eprintln!("constructed {}", describe(&g));
        }
        Built::Sd(bundle) => {
            write_output(out, &serde_json::to_string_pretty(&bundle.to_json())?)?;
            eprintln!("wrote {} symbolic SD seeds for n = {}", bundle.seeds.len(), bundle.context.n());
        }
    }
    Ok(0)
}

fn verify(args: VerifyArgs) -> Result<u8> {
    let spec = args.family.spec()?;
    let mut checks: Vec<CheckKind> = if args.all || args.checks.is_empty() {
        CheckKind::ALL.to_vec()
    } else {
        args.checks.iter().map(|c| c.parse()).collect::<geoforge::Result<_>>()?
    };
    let mut opts = VerifyOptions::with_checks(&checks);
    if let Some(b) = args.budget {
        opts.budget = b;
    }
    if !args.strategies.is_empty() {
        let mut s = Strategies {
            direct: false,
            recursive: false,
        };
        for name in &args.strategies {
            match name.as_str() {
                "direct" => s.direct = true,
                "recursive" => s.recursive = true,
                other => bail!("unknown strategy {other:?}; expected direct or recursive"),
            }
        }
        opts.strategies = s;
    }
    let mut sd = SdOptions::default();
    if let Some(FamilySpec::SdSymbolic { kind, m, n, .. }) = &spec {
        sd.kind = *kind;
        sd.m = *m;
        sd.ns = vec![*n];
    }
    if let Some(s) = args.samples {
        sd.samples = s;
    }
    if let Some(s) = args.seed {
        sd.seed = s;
    }
    if !args.sd_n.is_empty() {
        sd.ns = args.sd_n.clone();
    }
    if let Some(m) = args.sd_m {
        sd.m = m;
    }
    opts.sd = sd;

    let (geometry, instance) = match (&args.path, &spec) {
        (Some(_), Some(_)) => bail!("give either a geometry file or --family, not both"),
        (None, None) => bail!("give a geometry file or --family"),
        (Some(p), None) => (Some(load(p)?), json!({ "file": p.display().to_string() })),
        (None, Some(spec)) => match build_family(spec)? {
            Built::Geometry(g) => (Some(g), serde_json::to_value(spec)?),
            Built::Sd(_) => {
                // symbolic SD data carries no geometry; only the battery applies
                if args.all || args.checks.is_empty() {
                    checks = vec![CheckKind::SdBattery];
                    opts.checks = checks.clone();
                }
                (None, serde_json::to_value(spec)?)
            }
        },
    };
    let report = Verifier::new(geometry.as_ref(), opts).run(instance)?;
    let lines = report.to_json_lines();
    print!("{lines}");
    if let Some(p) = &args.report {
        std::fs::write(p, &lines).with_context(|| format!("writing {}", p.display()))?;
    }
    eprint!("{}", report.summary());
    let failures = report.failures(args.strict).len();
    if failures == 0 {
        eprintln!("all {} checks passed", report.checks.len());
        Ok(0)
    } else {
        eprintln!("{failures} of {} checks failed", report.checks.len());
        Ok(FAILED)
    }
}

fn diagram(path: &Path, dot: bool, predict: bool, force: bool) -> Result<u8> {
    let g = load(path)?;
    if !force {
        if g.attached().is_none() {
            bail!("{} has no attached group, so flag-transitivity cannot be verified; use --force", path.display());
        }
        if let Some(c) = g.recursive_conditions()?.iter().find(|c| !c.holds()) {
            bail!(
                "flag-transitivity not verified: stabilizer of {} has an orbit of {} on {} elements of type {}; use --force",
                g.flag_name(&c.q),
                c.orbit,
                c.target,
                g.types()[c.level]
            );
        }
    }
    let entries = basic_diagram(&g)?;
    if dot {
        print!("{}", diagram_dot(g.types(), g.sizes(), &entries));
    } else {
        let mut out = String::from("types\tn1\tn2\ts1\ts2\td1\td2\tg\tedge\n");
        for e in &entries {
            let (a, b) = e.types;
            match &e.params {
                Some(p) => {
                    let girth = p.g.map_or("-".into(), |x| x.to_string());
                    let _ = writeln!(
                        out,
                        "{a}-{b}\t{}\t{}\t{}\t{}\t{}\t{}\t{girth}\t{}",
                        p.n1,
                        p.n2,
                        p.s1,
                        p.s2,
                        p.d1,
                        p.d2,
                        if e.is_edge() { "yes" } else { "no" }
                    );
                }
                None => {
                    let (n1, n2) = e.residue_sizes;
                    let _ = writeln!(out, "{a}-{b}\t{n1}\t{n2}\t-\t-\t-\t-\t-\tdisconnected");
                }
            }
        }
        print!("{out}");
    }
    eprintln!(
        "{} type pairs, {} diagram edges",
        entries.len(),
        entries.iter().filter(|e| e.is_edge()).count()
    );
    if predict {
        let p = predict_pa(&g)?;
        for q in &p.pairs {
            eprintln!(
                "{}-{}: expected {} -> {}",
                q.types.0,
                q.types.1,
                serde_json::to_string(&q.expected)?,
                if q.holds { "match" } else { "MISMATCH" }
            );
        }
        if !p.holds() {
            return Ok(FAILED);
        }
    }
    Ok(0)
}

fn quotient(path: &Path, partition: &Path, out: Option<&Path>) -> Result<u8> {
    let g = load(path)?;
    let text = std::fs::read_to_string(partition).with_context(|| format!("reading {}", partition.display()))?;
    let v: Value = serde_json::from_str(&text).context("partition is not JSON")?;
    let part = Partition::from_json(&g, &v)?;
    let q = g.quotient(&part)?;
    write_output(out, &serde_json::to_string(&q.to_file())?)?;
    eprintln!("quotient has {}", describe(&q));
    Ok(0)
}

fn export(path: &Path, format: ExportFormat, out: Option<&Path>) -> Result<u8> {
    let g = load(path)?;
    let text = match format {
        ExportFormat::Json => serde_json::to_string_pretty(&g.to_file())?,
        ExportFormat::Dot => {
            let mut s = String::from("graph incidence {\n");
            for t in 0..g.rank() {
                for i in 0..g.size(t) as u32 {
                    let e = Elem::new(t, i);
                    let _ = writeln!(s, "  \"{}\" [group={}];", g.elem_name(e), g.types()[t]);
                }
            }
            for i in 0..g.rank() {
                for j in i + 1..g.rank() {
                    for p in 0..g.size(i) as u32 {
                        let a = Elem::new(i, p);
                        for q in g.neighbors(a, j) {
                            let _ = writeln!(s, "  \"{}\" -- \"{}\";", g.elem_name(a), g.elem_name(Elem::new(j, q)));
                        }
                    }
                }
            }
            s.push_str("}\n");
            s
        }
    };
    write_output(out, &text)?;
    Ok(0)
}
