mod cache;
mod config;
mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use vdeform::algebra::{JetFunction, ParamPoly};
use vdeform::genus_expansion::{deform, provenance_key, DeformationData};
use vdeform::hierarchy::{build_from_free_energies, normal_form, HierarchyTable};
use vdeform::verify::{
    paper_suite, verify_commutativity, verify_polynomiality, verify_tau_structure, Report, SuiteOptions,
};
use vdeform::virasoro::{combine, extract_like, OperatorSpec};

use cache::Cache;
use config::{Format, SessionConfig};

#[derive(Parser)]
#[command(name = "vdeform", version, about = "Virasoro-like deformations of the Riemann–Hopf hierarchy")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// JSON session config; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Recompute even when a cached result exists.
    #[arg(long, global = true)]
    no_cache: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Emit `L_{i,2j}`, or a linear combination read from a file.
    Operator {
        #[arg(long, required_unless_present = "combine", requires = "j")]
        i: Option<i32>,
        #[arg(long, requires = "i")]
        j: Option<usize>,
        /// JSON list of `{"coeff": ..., "i": ..., "j": ...}`.
        #[arg(long, conflicts_with_all = ["i", "j"])]
        combine: Option<PathBuf>,
    },
    /// Deform the free energies along an operator.
    Deform {
        #[arg(long)]
        operator: PathBuf,
        #[arg(long)]
        genus: Option<usize>,
        #[arg(long)]
        s_cap: Option<usize>,
    },
    /// Build the deformed hierarchy from a deformation file.
    Hierarchy {
        #[arg(long)]
        deformation: PathBuf,
        /// Highest flow index.
        #[arg(long)]
        flows: Option<usize>,
        /// Highest ε order (even).
        #[arg(long)]
        eps: Option<usize>,
        /// Highest index of the stored `Ω_{p;q}` with `p ≥ 1`.
        #[arg(long, default_value_t = 0)]
        omega: usize,
    },
    /// Reduce `Ω_{0;1}` of a hierarchy to the standard form.
    NormalForm {
        #[arg(long)]
        hierarchy: PathBuf,
        #[arg(long)]
        genus: Option<usize>,
    },
    /// Run a verification suite; exits 1 if any check fails.
    Verify {
        #[arg(long, value_parser = ["paper", "hierarchy"], default_value = "paper")]
        suite: String,
        /// Hierarchy file for `--suite hierarchy`.
        #[arg(long, required_if_eq("suite", "hierarchy"))]
        hierarchy: Option<PathBuf>,
        #[arg(long)]
        genus: Option<usize>,
    },
}

#[derive(Deserialize)]
struct CombineTerm {
    coeff: ParamPoly,
    i: i32,
    j: usize,
}

struct Session {
    config: SessionConfig,
    out: Option<PathBuf>,
    no_cache: bool,
}

impl Session {
    fn emit<T: Serialize>(&self, value: &T, text: impl FnOnce(&T) -> String) -> Result<()> {
        let body = match self.config.format {
            Format::Json => to_json(value)?,
            Format::Text => text(value),
        };
        self.write(&body)
    }

    fn write(&self, body: &str) -> Result<()> {
        match &self.out {
            Some(p) => std::fs::write(p, body).with_context(|| format!("writing {}", p.display())),
            None => {
                print!("{body}");
                Ok(())
            }
        }
    }

    fn substitute(&self, t: HierarchyTable) -> HierarchyTable {
        self.config.substitutions().into_iter().fold(t, |t, (p, v)| t.substitute_param(p, v))
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn cmd_operator(s: &Session, i: Option<i32>, j: Option<usize>, combo: Option<&Path>) -> Result<()> {
    let op = match (i, j, combo) {
        (_, _, Some(path)) => {
            let terms: Vec<CombineTerm> = read_json(path)?;
            let parts =
                terms.into_iter().map(|t| Ok((t.coeff, extract_like(t.i, t.j)?))).collect::<Result<Vec<_>>>()?;
            combine(&parts)
        }
        (Some(i), Some(j), None) => extract_like(i, j)?,
        _ => bail!("give --i and --j, or --combine"),
    };
    s.emit(&op, render::operator)
}

fn cmd_deform(s: &Session, operator: &Path, genus: Option<usize>) -> Result<()> {
    let op: OperatorSpec = read_json(operator)?;
    let g = genus.unwrap_or(s.config.g_max);
    let opts = s.config.deform_options();
    let key = provenance_key(&op, g, &opts, &[]);
    let cache = Cache::new(s.config.cache_root());
    let cached = if s.no_cache { None } else { cache.get(&key) };
    let json = match cached {
        Some(json) => {
            eprintln!("cache hit {key}");
            json
        }
        None => {
            let data = deform(&op, g, &opts)?;
            for row in data.rows.iter().filter(|r| r.truncated) {
                eprintln!("warning: H_{} truncated at s-degree {}", row.genus, opts.cap(row.genus));
            }
            let json = to_json(&data)?;
            cache.put(&key, &json)?;
            json
        }
    };
    match s.config.format {
        Format::Json => s.write(&json),
        Format::Text => {
            let data: DeformationData = serde_json::from_str(&json).context("cached deformation is corrupt")?;
            s.write(&render::deformation(&data))
        }
    }
}

fn cmd_hierarchy(s: &Session, path: &Path, flows: Option<usize>, eps: Option<usize>, omega: usize) -> Result<()> {
    let def: DeformationData = read_json(path)?;
    let g = match eps {
        Some(e) if e % 2 == 1 => bail!("--eps must be even"),
        Some(e) => e / 2,
        None => def.g_max,
    };
    if g > def.g_max {
        bail!("ε^{} needs genus {g}, the deformation stops at genus {}", 2 * g, def.g_max);
    }
    let h: Vec<JetFunction> = (1..=g).map(|k| def.h(k)).collect::<vdeform::Result<_>>()?;
    let table = build_from_free_energies(&h, flows.unwrap_or(s.config.m_max), omega)?;
    s.emit(&s.substitute(table), render::hierarchy)
}

fn cmd_normal_form(s: &Session, path: &Path, genus: Option<usize>) -> Result<()> {
    let table = s.substitute(read_json::<HierarchyTable>(path)?);
    let g = genus.unwrap_or(table.g_max);
    let nf = normal_form(&table, g)?;
    s.emit(&nf, render::normal_form)
}

fn cmd_verify(s: &Session, suite: &str, hierarchy: Option<&Path>, genus: Option<usize>) -> Result<bool> {
    let report = match suite {
        "paper" => {
            let opts =
                SuiteOptions { deform: s.config.deform_options(), genus: genus.unwrap_or(3), ..Default::default() };
            paper_suite(&opts)
        }
        _ => {
            let path = hierarchy.context("--suite hierarchy needs --hierarchy")?;
            let table = s.substitute(read_json::<HierarchyTable>(path)?);
            let g = genus.unwrap_or(table.g_max);
            let pairs: Vec<(usize, usize)> = (2..=table.m_max()).map(|b| (1, b)).collect();
            let mut r = Report::new();
            r.merge(verify_commutativity(&table, &pairs, g));
            r.merge(verify_tau_structure(&table, g));
            r.merge(verify_polynomiality(&table, g));
            r
        }
    };
    s.emit(&report, Report::to_text)?;
    Ok(report.passed())
}

fn run(cli: Cli) -> Result<bool> {
    let mut config = match &cli.global.config {
        Some(p) => SessionConfig::load(p)?,
        None => SessionConfig::default(),
    };
    if let Some(f) = cli.global.format {
        config.format = f;
    }
    if let Some(d) = cli.global.cache_dir {
        config.cache_dir = Some(d);
    }
    if let Command::Deform { s_cap: Some(n), .. } = &cli.command {
        config.s_deg_cap = Some(*n);
    }
    if let Command::Deform { genus: Some(g), .. } = &cli.command {
        config.g_max = *g;
    }
    config.validate()?;
    let session = Session { config, out: cli.global.out, no_cache: cli.global.no_cache };
    match &cli.command {
        Command::Operator { i, j, combine } => cmd_operator(&session, *i, *j, combine.as_deref())?,
        Command::Deform { operator, genus, .. } => cmd_deform(&session, operator, *genus)?,
        Command::Hierarchy { deformation, flows, eps, omega } => {
            cmd_hierarchy(&session, deformation, *flows, *eps, *omega)?
        }
        Command::NormalForm { hierarchy, genus } => cmd_normal_form(&session, hierarchy, *genus)?,
        Command::Verify { suite, hierarchy, genus } => {
            return cmd_verify(&session, suite, hierarchy.as_deref(), *genus)
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
