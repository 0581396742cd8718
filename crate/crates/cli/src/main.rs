use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sepbound_core::constructions::{
    gl7_linear_relations, gl7_quintic_relations, gl7_relation_labeling, gl7_scenario, removal_checks, verify_triangle,
};
use sepbound_core::gallery::{gallery, run_gallery};
use sepbound_core::io::{load_candidates, load_group, poly_to_json, DEFAULT_CLOSURE_CAP};
use sepbound_core::report::{analyze, shell, AnalysisOptions};
use sepbound_core::separation::{Overflow, SearchOutcome};
use sepbound_core::topology::DEFAULT_CHAIN_BUDGET;
use sepbound_core::{
    search_separating, verify_separating, FiniteMatrixGroup, MultiPoly, SepPoset, SeparationReport, SubspaceLattice,
    VerifyConfig,
};

#[derive(Parser)]
#[command(
    name = "sepbound",
    version,
    about = "Separating variety posets, local cohomology bounds and separating set checks"
)]
struct Cli {
    /// Seed for sampled verification.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Point budget per extension degree.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Coefficient characteristic for homology (defaults to the field characteristic).
    #[arg(long = "char", global = true)]
    characteristic: Option<u32>,
    /// Extension degrees to verify over, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    extensions: Option<Vec<u32>>,
    /// Print witness pairs in coordinate form on stderr.
    #[arg(long, global = true)]
    witness: bool,
    /// What to do when an extension exceeds the point budget.
    #[arg(long, global = true, value_enum, default_value_t = OverflowArg::Sample)]
    overflow: OverflowArg,
    /// Chain budget for order complexes.
    #[arg(long, global = true, default_value_t = DEFAULT_CHAIN_BUDGET)]
    chain_budget: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OverflowArg {
    Skip,
    Sample,
    Fail,
}

#[derive(Args, Clone)]
struct Source {
    /// Group spec file.
    #[arg(long, conflicts_with = "gallery")]
    group: Option<PathBuf>,
    /// Gallery entry instead of a file.
    #[arg(long)]
    gallery: Option<String>,
    /// Gallery parameter, e.g. `n=2`.
    #[arg(long = "param", value_parser = parse_param)]
    params: Vec<(String, u32)>,
}

fn parse_param(s: &str) -> Result<(String, u32), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got {s:?}"))?;
    Ok((k.to_owned(), v.parse().map_err(|e| format!("{v:?}: {e}"))?))
}

#[derive(Subcommand)]
enum Command {
    #[command(subcommand)]
    /// Group order, codim profile and reflection classification.
    Group(GroupCmd),
    #[command(subcommand)]
    /// Build the separating poset, optionally as DOT.
    Poset(PosetCmd),
    /// Reduced homology of every open upper interval and the degrees Q.
    Homology(Source),
    /// Lower bounds on the size of separating sets.
    Bounds(Source),
    /// Construct and verify a shelling of the separating poset.
    Shelling {
        #[command(flatten)]
        source: Source,
        /// Print only the verdict.
        #[arg(long)]
        verify_only: bool,
    },
    #[command(subcommand)]
    /// Orbit-separation checks over finite extensions.
    Separating(SeparatingCmd),
    /// Run a named scenario and check its expectations.
    Gallery {
        /// trivial-d, c2-sign, s3-perm, s3-diag-n, c2c2-2n1, cp-vn, cp-v2-vec or gl7-f2.
        name: String,
        /// summary, classify, poset, homology, bounds, shelling, separating or expectations.
        section: Option<String>,
        /// Number of summands or block size.
        #[arg(long)]
        n: Option<u32>,
        /// Field characteristic; 0 selects the rationals where allowed.
        #[arg(long)]
        p: Option<u32>,
        /// Dimension of the trivial action.
        #[arg(long)]
        d: Option<u32>,
    },
    /// Designated invariants of the GL7(F2) scenario and their relations.
    Gl7 {
        /// Also check the degree-8 and degree-10 relations.
        #[arg(long)]
        full: bool,
    },
    /// Write the full machine-readable report.
    Report {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        candidates: Option<PathBuf>,
        #[arg(long)]
        json: PathBuf,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Order, dimension, field and generators.
    Info(Source),
    /// Reflection classification and rigidity.
    Classify(Source),
}

#[derive(Subcommand)]
enum PosetCmd {
    /// Build the separating poset; optionally write its Hasse diagram.
    Build {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SeparatingCmd {
    /// Exhaustively check a candidate set (a list or a triangle).
    Verify {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        candidates: Option<PathBuf>,
    },
    /// Search for a separating set: base plus a subset of the pool.
    Search {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        pool: PathBuf,
        #[arg(long)]
        target: usize,
        #[arg(long, default_value_t = 1_000_000)]
        max_leaves: u64,
    },
    /// Drop each candidate in turn and look for a witness.
    Removal {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        candidates: Option<PathBuf>,
    },
}

enum Outcome {
    Done,
    Negative,
}

impl Cli {
    fn verify_config(&self, default_extensions: &[u32]) -> VerifyConfig {
        let mut cfg = VerifyConfig::with_extensions(self.extensions.as_deref().unwrap_or(default_extensions));
        cfg.seed = self.seed;
        cfg.overflow = match self.overflow {
            OverflowArg::Skip => Overflow::Skip,
            OverflowArg::Sample => Overflow::Sample,
            OverflowArg::Fail => Overflow::Fail,
        };
        if let Some(b) = self.budget {
            cfg.budget = b;
        }
        cfg
    }

    fn analysis_options(&self, shelling: bool) -> AnalysisOptions {
        AnalysisOptions { characteristic: self.characteristic, chain_budget: self.chain_budget, shelling }
    }
}

struct Loaded {
    name: String,
    group: FiniteMatrixGroup,
    candidates: Option<Vec<MultiPoly>>,
    extensions: Vec<u32>,
}

fn load(source: &Source) -> anyhow::Result<Loaded> {
    match (&source.group, &source.gallery) {
        (Some(path), _) => {
            let (spec, group) = load_group(path, DEFAULT_CLOSURE_CAP)?;
            let name = spec.label.unwrap_or_else(|| path.display().to_string());
            Ok(Loaded { name, group, candidates: None, extensions: vec![1, 2, 3] })
        }
        (None, Some(name)) => {
            let params: BTreeMap<String, u32> = source.params.iter().cloned().collect();
            let e = gallery(name, &params)?;
            Ok(Loaded { name: e.name, group: e.group, candidates: e.candidates, extensions: e.extensions })
        }
        (None, None) => bail!("give --group FILE or --gallery NAME"),
    }
}

fn candidates_for(loaded: &Loaded, path: Option<&Path>) -> anyhow::Result<Vec<MultiPoly>> {
    match path {
        Some(p) => {
            let file = load_candidates(p)?;
            match file.triangle_family(&loaded.group)? {
                Some(t) => {
                    t.check_invariant(&loaded.group)?;
                    let mut c = file.polys(&loaded.group)?;
                    c.extend(t.candidates());
                    Ok(c)
                }
                None => Ok(file.polys(&loaded.group)?),
            }
        }
        None => loaded.candidates.clone().context("no candidates: give --candidates FILE"),
    }
}

fn print(v: &Value) {
    use std::io::Write;
    // a closed pipe is not an error for a report printer
    let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(v).expect("json"));
}

fn report_witness(cli: &Cli, report: &SeparationReport) {
    if !cli.witness {
        return;
    }
    if let Some((e, w)) = report.witness() {
        eprintln!(
            "witness over extension degree {e}: a = ({}) b = ({}) values = ({})",
            w.a.join(", "),
            w.b.join(", "),
            w.values.join(", ")
        );
    }
}

fn separation_outcome(report: &SeparationReport) -> Outcome {
    if report.is_refuted() {
        Outcome::Negative
    } else {
        Outcome::Done
    }
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Group(GroupCmd::Info(source)) => {
            let l = load(source)?;
            let g = &l.group;
            print(&json!({
                "scenario": l.name,
                "field": g.field().to_string(),
                "dimension": g.dim(),
                "order": g.order(),
                "generators": g.generators().iter().map(|&i| sepbound_core::io::matrix_to_json(g.element(i))).collect::<Vec<_>>(),
                "codim_profile": g.codim_profile(),
            }));
        }
        Command::Group(GroupCmd::Classify(source)) => {
            let l = load(source)?;
            let a = analyze(&l.group, &cli.analysis_options(false))?;
            print(&a.classification_json());
        }
        Command::Poset(PosetCmd::Build { source, dot }) => {
            let l = load(source)?;
            let lattice = SubspaceLattice::build(&l.group);
            let p = SepPoset::build(&l.group, &lattice);
            if let Some(path) = dot {
                std::fs::write(path, p.to_dot()).with_context(|| format!("writing {}", path.display()))?;
            }
            let mut v = p.to_json();
            v["layers"] = json!(p
                .layer_sizes()
                .iter()
                .map(|&(codim, count)| json!({"codim": codim, "count": count}))
                .collect::<Vec<_>>());
            print(&v);
        }
        Command::Homology(source) => {
            let l = load(source)?;
            let a = analyze(&l.group, &cli.analysis_options(false))?;
            print(&a.homology_json());
        }
        Command::Bounds(source) => {
            let l = load(source)?;
            let a = analyze(&l.group, &cli.analysis_options(false))?;
            print(&a.bounds_json());
        }
        Command::Shelling { source, verify_only } => {
            let l = load(source)?;
            let lattice = SubspaceLattice::build(&l.group);
            let p = SepPoset::build(&l.group, &lattice);
            let ch = cli.characteristic.unwrap_or_else(|| l.group.field().characteristic());
            let s = shell(&l.group, &lattice, &p, ch, cli.chain_budget)?;
            let mut v = serde_json::to_value(&s)?;
            if !verify_only {
                if let Some(order) = &s.order {
                    v["order"] = order.to_json();
                }
            }
            print(&v);
            if *verify_only && !s.verified {
                return Ok(Outcome::Negative);
            }
        }
        Command::Separating(SeparatingCmd::Verify { source, candidates }) => {
            let l = load(source)?;
            let cands = candidates_for(&l, candidates.as_deref())?;
            let report = match candidates.as_deref().map(load_candidates).transpose()? {
                Some(file) if file.candidates.is_empty() && file.triangle.is_some() => {
                    let t = file.triangle_family(&l.group)?.expect("triangle present");
                    verify_triangle(&l.group, &t, &cli.verify_config(&l.extensions))?
                }
                _ => verify_separating(&l.group, &cands, &cli.verify_config(&l.extensions))?,
            };
            print(&serde_json::to_value(&report)?);
            report_witness(cli, &report);
            return Ok(separation_outcome(&report));
        }
        Command::Separating(SeparatingCmd::Search { source, base, pool, target, max_leaves }) => {
            let l = load(source)?;
            let base = load_candidates(base)?.polys(&l.group)?;
            let pool = load_candidates(pool)?.polys(&l.group)?;
            let out =
                search_separating(&l.group, &base, &pool, *target, *max_leaves, &cli.verify_config(&l.extensions))?;
            let found = matches!(out, SearchOutcome::Found { .. });
            let mut v = serde_json::to_value(&out)?;
            if let SearchOutcome::Found { pool_indices, .. } = &out {
                let set: Vec<Value> =
                    base.iter().chain(pool_indices.iter().map(|&i| &pool[i])).map(poly_to_json).collect();
                v["candidates"] = json!(set);
            }
            print(&v);
            if !found {
                return Ok(Outcome::Negative);
            }
        }
        Command::Separating(SeparatingCmd::Removal { source, candidates }) => {
            let l = load(source)?;
            let cands = candidates_for(&l, candidates.as_deref())?;
            let checks = removal_checks(&l.group, &cands, &cli.verify_config(&[1]))?;
            print(&json!({
                "all_refuted": checks.iter().all(|c| c.refuted_at.is_some()),
                "removals": checks,
            }));
        }
        Command::Gallery { name, section, n, p, d } => {
            let mut params = BTreeMap::new();
            for (k, v) in [("n", n), ("p", p), ("d", d)] {
                if let Some(v) = v {
                    params.insert(k.to_owned(), *v);
                }
            }
            let entry = gallery(name, &params)?;
            let run = run_gallery(entry, &cli.verify_config(&[1]), &cli.analysis_options(true))?;
            print(&run.section(section.as_deref())?);
            if let Some(s) = &run.separation {
                report_witness(cli, s);
            }
            if !run.all_passed() {
                return Ok(Outcome::Negative);
            }
        }
        Command::Gl7 { full } => {
            let cfg = cli.verify_config(&[1, 2]);
            let s = gl7_scenario(Some(&cfg))?;
            let mut relations = serde_json::to_value(gl7_linear_relations(&s)?)?;
            if *full {
                let extra = serde_json::to_value(gl7_quintic_relations(&s)?)?;
                relations.as_array_mut().expect("array").extend(extra.as_array().expect("array").iter().cloned());
            }
            let separating = s.report.as_ref().is_some_and(SeparationReport::is_separating);
            print(&json!({
                "labeling": s.labeling,
                "labelings_tried": s.labelings_tried,
                "relation_labeling": gl7_relation_labeling(&s)?,
                "f": (1..=3).map(|i| s.f(i).to_string()).collect::<Vec<_>>(),
                "g": (1..=3).map(|i| s.g(i).to_string()).collect::<Vec<_>>(),
                "r": s.quintic.to_string(),
                "candidates": s.candidates.iter().map(poly_to_json).collect::<Vec<_>>(),
                "relations": relations,
                "separating": s.report,
            }));
            if !separating {
                return Ok(Outcome::Negative);
            }
        }
        Command::Report { source, candidates, json } => {
            let l = load(source)?;
            let a = analyze(&l.group, &cli.analysis_options(true))?;
            let sep = match (candidates, &l.candidates) {
                (None, None) => None,
                _ if l.group.field().finite().is_none() => None,
                (path, _) => {
                    let c = candidates_for(&l, path.as_deref())?;
                    Some(verify_separating(&l.group, &c, &cli.verify_config(&l.extensions))?)
                }
            };
            let report = a.report(&l.name, sep.as_ref());
            let text = serde_json::to_string_pretty(&report)?;
            std::fs::write(json, text + "\n").with_context(|| format!("writing {}", json.display()))?;
            if let Some(s) = &sep {
                report_witness(cli, s);
                return Ok(separation_outcome(s));
            }
        }
    }
    Ok(Outcome::Done)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = std::env::var("SEPBOUND_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match run(&cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
