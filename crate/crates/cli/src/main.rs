//! `bwt`: command-line front end for the betweenness library.
//!
//! Exit status: 0 on success, 1 when a checked property fails, 2 on input
//! or usage errors.

use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use betweenness::axioms::{classify, AxiomId};
use betweenness::corpus::{self, check_poset, check_structure, parse_fragments, CorpusEntry, Fragment};
use betweenness::geometry::{embed, parse_rat, to_svg, SvgOptions};
use betweenness::oracle::{brute_force_ibqt, implication_suite, SearchBudget};
use betweenness::poset::{map_to_text, parse_map, FinitePoset};
use betweenness::structuring::{build_structuring, Structuring};
use betweenness::witness::{tree_of_c, verify_witness};
use betweenness::{BetweennessStructure, Error};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

// Writes to stdout propagate errors so a closed pipe ends the run quietly
// instead of panicking.
macro_rules! out {
    ($($t:tt)*) => { write!(io::stdout(), $($t)*)? };
}
macro_rules! outln {
    ($($t:tt)*) => { writeln!(io::stdout(), $($t)*)? };
}

/// Version tag carried by every JSON document.
const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "bwt", version, about = "Betweenness in finite order-theoretic trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse files and check the `# expect:` lines they carry.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Check the axioms and report class membership of a structure.
    Classify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        /// Comma-separated fragments such as `qt=false,ibqt=true,A8=fail`; exit 1 if one fails.
        #[arg(long)]
        expect: Option<String>,
    },
    /// Build the witness join-tree of a structure from a root.
    Witness {
        file: PathBuf,
        /// Root node; defaults to the first declared node.
        #[arg(long)]
        root: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the node map (`x -> y` lines).
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Print the betweenness of an O-forest, optionally restricted to a subset.
    Betweenness {
        file: PathBuf,
        /// Comma-separated node names.
        #[arg(long)]
        subset: Option<String>,
    },
    /// Join-completion of an O-forest.
    Complete {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Greedy structuring of an O-tree.
    Structure {
        file: PathBuf,
        /// Comma-separated node names tried first; the rest follow in declaration order.
        #[arg(long)]
        order: Option<String>,
        /// Print the two parity classes that determine the lines.
        #[arg(long)]
        parity: bool,
    },
    /// Draw a join-tree as a tree of half-lines.
    Embed {
        file: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Opening of the axis cone, a rational strictly between 0 and 1.
        #[arg(long, default_value = "1/2")]
        alpha: String,
        #[arg(long)]
        order: Option<String>,
    },
    /// The built-in corpus of worked examples.
    Examples {
        #[command(subcommand)]
        action: ExamplesAction,
    },
    /// Brute-force checks.
    Oracle {
        #[command(subcommand)]
        action: OracleAction,
    },
}

#[derive(Subcommand)]
enum ExamplesAction {
    List,
    /// Print an entry; truncations are named `<generator>-<depth>`, e.g. `s2-4`.
    Show {
        name: String,
    },
    /// Write every fixed entry and the depth-3 truncations into a directory.
    Export {
        dir: PathBuf,
    },
}

#[derive(Subcommand)]
enum OracleAction {
    /// Search for a finite tree inducing the structure.
    Ibqt {
        file: PathBuf,
        /// Maximum number of new nodes; defaults to one less than the number of nodes.
        #[arg(long)]
        extra: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 5_000_000)]
        max_candidates: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Sample structures satisfying the premises and count violations of the conclusion.
    Implications {
        #[arg(long)]
        premises: String,
        #[arg(long)]
        conclusion: String,
        #[arg(short = 'n', long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<io::Error>()
            .is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)
    })
}

fn read(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading standard input")?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_structure(path: &Path) -> Result<BetweennessStructure> {
    BetweennessStructure::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_poset(path: &Path) -> Result<FinitePoset> {
    FinitePoset::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            out!("{text}");
            Ok(())
        }
    }
}

/// The seed from the command line, else `BWT_SEED`, else 0.
fn seed(flag: Option<u64>) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("BWT_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("BWT_SEED={v:?} is not an unsigned integer")),
        Err(_) => Ok(0),
    }
}

fn names_of(names: &[String], nodes: &[usize]) -> Vec<String> {
    nodes.iter().map(|&v| names[v].clone()).collect()
}

fn split_names(text: &str) -> Vec<&str> {
    text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

/// `first` in the given order, then every other node in declaration order.
fn node_order(p: &FinitePoset, first: Option<&str>) -> Result<Vec<usize>> {
    let mut order = Vec::new();
    let mut seen = BTreeSet::new();
    for name in first.map(split_names).unwrap_or_default() {
        let v = p.id(name)?;
        if !seen.insert(v) {
            bail!("`{name}` appears twice in --order");
        }
        order.push(v);
    }
    order.extend((0..p.len()).filter(|v| !seen.contains(v)));
    Ok(order)
}

/// Lines of the form `# expect: qt=false,A8=fail`.
fn embedded_expectations(text: &str) -> Result<Vec<Fragment>> {
    let mut out = Vec::new();
    for line in text.lines() {
        if let Some(rest) = line.trim_start().strip_prefix('#').map(str::trim_start) {
            if let Some(list) = rest.strip_prefix("expect:") {
                out.extend(parse_fragments(list)?);
            }
        }
    }
    Ok(out)
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Validate { files } => validate(&files),
        Command::Classify { file, json, expect } => cmd_classify(&file, json, expect.as_deref()),
        Command::Witness {
            file,
            root,
            output,
            map,
        } => cmd_witness(&file, root.as_deref(), output.as_deref(), map.as_deref()),
        Command::Betweenness { file, subset } => {
            let p = load_poset(&file)?;
            let b = match subset {
                Some(list) => {
                    let ids: BTreeSet<usize> = split_names(&list)
                        .into_iter()
                        .map(|n| p.id(n))
                        .collect::<Result<_, _>>()?;
                    p.induced_betweenness(&ids)?
                }
                None => p.betweenness_of()?,
            };
            out!("{}", b.to_text());
            Ok(true)
        }
        Command::Complete { file, output } => {
            let (done, _) = load_poset(&file)?.join_completion()?;
            emit(&done.to_text(), output.as_deref())?;
            Ok(true)
        }
        Command::Structure { file, order, parity } => {
            let p = load_poset(&file)?;
            let s = build_structuring(&p, &node_order(&p, order.as_deref())?)?;
            out!("{}", s.to_text());
            if parity {
                let enc = s.parity_sets();
                let show =
                    |set: &BTreeSet<usize>| names_of(p.names(), &set.iter().copied().collect::<Vec<_>>()).join(" ");
                outln!("even: {}", show(&enc.n0));
                outln!("odd: {}", show(&enc.n1));
            }
            Ok(true)
        }
        Command::Embed {
            file,
            svg,
            alpha,
            order,
        } => cmd_embed(&file, svg.as_deref(), &alpha, order.as_deref()),
        Command::Examples { action } => examples(action),
        Command::Oracle { action } => oracle(action),
    }
}

fn validate(files: &[PathBuf]) -> Result<bool> {
    let mut all_ok = true;
    for path in files {
        let text = read(path)?;
        let expected = embedded_expectations(&text).with_context(|| format!("{}", path.display()))?;
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
        let (summary, failed) = match ext {
            "bst" => {
                let s = BetweennessStructure::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
                (
                    format!("structure with {} nodes and {} triples", s.len(), s.triple_count()),
                    check_structure(&s, &expected),
                )
            }
            "pos" => {
                let p = FinitePoset::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
                (
                    format!("{} with {} nodes", p.kind_of(), p.len()),
                    check_poset(&p, &expected),
                )
            }
            "map" => {
                let m = parse_map(&text).with_context(|| format!("parsing {}", path.display()))?;
                (format!("map with {} entries", m.len()), Vec::new())
            }
            _ => bail!("{}: unknown extension; expected .bst, .pos or .map", path.display()),
        };
        let status = if failed.is_empty() { "ok" } else { "FAILED" };
        outln!(
            "{}: {status}: {summary}; {} expectation(s)",
            path.display(),
            expected.len()
        );
        for f in &failed {
            outln!("  expected {f}");
        }
        all_ok &= failed.is_empty();
    }
    Ok(all_ok)
}

fn cmd_classify(path: &Path, json: bool, expect: Option<&str>) -> Result<bool> {
    let s = load_structure(path)?;
    let r = classify(&s);
    let failed = match expect {
        Some(list) => check_structure(&s, &parse_fragments(list)?),
        None => Vec::new(),
    };
    if json {
        let axioms: serde_json::Map<String, Value> = r
            .axiom_results
            .iter()
            .map(|(a, v)| {
                let mut entry = json!({ "holds": v.holds });
                if let Some(w) = &v.witness {
                    entry["witness"] = json!(names_of(s.names(), &w.nodes));
                    entry["variables"] = json!(a.variables());
                    entry["reason"] = json!(w.reason);
                }
                (a.to_string(), entry)
            })
            .collect();
        let doc = json!({
            "schema": format!("bwt.classify/{SCHEMA}"),
            "name": s.name(),
            "nodes": s.names(),
            "triples": s.triple_count(),
            "qt": r.qt,
            "ibqt": r.ibqt,
            "bo_finite": r.bo_finite,
            "ibo": r.ibo,
            "linear": r.linear,
            "axioms": axioms,
            "failed_expectations": failed,
        });
        outln!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        if let Some(n) = s.name() {
            outln!("structure {n}: {} nodes, {} triples", s.len(), s.triple_count());
        }
        for (a, v) in &r.axiom_results {
            match &v.witness {
                None => outln!("{a:<4} holds"),
                Some(w) => outln!("{a:<4} fails at {} = {}", a.variables().join(","), s.show(&w.nodes)),
            }
        }
        outln!(
            "qt={} ibqt={} bo_finite={} linear={} ibo={}",
            r.qt,
            r.ibqt,
            r.bo_finite,
            r.linear,
            Fragment::Ibo(r.ibo).to_string().trim_start_matches("ibo=")
        );
        for f in &failed {
            outln!("expectation failed: {f}");
        }
    }
    Ok(failed.is_empty())
}

fn cmd_witness(path: &Path, root: Option<&str>, output: Option<&Path>, map: Option<&Path>) -> Result<bool> {
    let s = load_structure(path)?;
    if s.is_empty() {
        bail!("the structure has no nodes");
    }
    let r = match root {
        Some(name) => s.id(name)?,
        None => 0,
    };
    let w = tree_of_c(&s, r)?;
    let verdict = verify_witness(&s, &w.tree, &w.embedding)?;
    emit(&w.tree.to_text(), output)?;
    if let Some(p) = map {
        let pairs: Vec<(String, String)> = w
            .embedding
            .iter()
            .enumerate()
            .map(|(x, &y)| (s.node_name(x).to_string(), w.tree.node_name(y).to_string()))
            .collect();
        fs::write(p, map_to_text(&pairs)).with_context(|| format!("writing {}", p.display()))?;
    }
    if let Some(f) = &verdict.witness {
        eprintln!("witness check failed at {}: {}", s.show(&f.nodes), f.reason);
    }
    Ok(verdict.holds)
}

fn cmd_embed(path: &Path, svg: Option<&Path>, alpha: &str, order: Option<&str>) -> Result<bool> {
    let p = load_poset(path)?;
    let alpha = parse_rat(alpha)?;
    let s: Structuring = build_structuring(&p, &node_order(&p, order)?)?;
    let (lines, e) = embed(&s, &alpha)?;
    lines.check_non_crossing()?;
    lines.check_sectors()?;
    for h in &lines.lines {
        let parent = match &h.parent {
            Some((q, t)) => format!(" on h{q} at t={t}"),
            None => String::new(),
        };
        outln!(
            "h{} line {} origin {} direction {}{parent}",
            h.id,
            h.line,
            h.origin,
            h.direction
        );
    }
    for (v, loc) in e.points.iter().enumerate() {
        outln!("{} h{} t={} {}", p.node_name(v), loc.line, loc.t, lines.point(loc));
    }
    if let Some(out) = svg {
        fs::write(out, to_svg(&lines, &e, p.names(), &SvgOptions::default()))
            .with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(true)
}

fn with_expectations(e: &CorpusEntry) -> String {
    let mut out = String::new();
    if !e.expected.is_empty() {
        let list: Vec<String> = e.expected.iter().map(Fragment::to_string).collect();
        out.push_str(&format!("# expect: {}\n", list.join(",")));
    }
    out.push_str(&format!("# {}\n", e.note));
    out.push_str(&e.text);
    out
}

fn examples(action: ExamplesAction) -> Result<bool> {
    match action {
        ExamplesAction::List => {
            for e in corpus::entries() {
                let list: Vec<String> = e.expected.iter().map(Fragment::to_string).collect();
                outln!(
                    "{:<14} {:<9} {:<40} {}",
                    e.name,
                    format!("{:?}", e.kind).to_lowercase(),
                    list.join(","),
                    e.note
                );
            }
            outln!("truncations (name-depth): {}", corpus::GENERATORS.join(", "));
        }
        ExamplesAction::Show { name } => out!("{}", with_expectations(&corpus::entry(&name)?)),
        ExamplesAction::Export { dir } => {
            fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            let mut all = corpus::entries();
            for g in corpus::GENERATORS {
                all.push(corpus::generate(g, 3)?);
            }
            for e in &all {
                let path = dir.join(e.file_name());
                fs::write(&path, with_expectations(e)).with_context(|| format!("writing {}", path.display()))?;
                outln!("{}", path.display());
            }
        }
    }
    Ok(true)
}

fn oracle(action: OracleAction) -> Result<bool> {
    match action {
        OracleAction::Ibqt {
            file,
            extra,
            seed: s,
            max_candidates,
            output,
        } => {
            let st = load_structure(&file)?;
            let budget = SearchBudget {
                max_extra_nodes: extra.unwrap_or(st.len().saturating_sub(1)),
                max_candidates,
                seed: seed(s)?,
            };
            match brute_force_ibqt(&st, &budget) {
                Ok(Some((tree, _))) => {
                    emit(&tree.to_text(), output.as_deref())?;
                    Ok(true)
                }
                Ok(None) => {
                    outln!(
                        "no tree with at most {} new node(s) induces the structure",
                        budget.max_extra_nodes
                    );
                    Ok(false)
                }
                Err(Error::BudgetExceeded) => Err(anyhow!(
                    "gave up after {max_candidates} partial trees; raise --max-candidates"
                )),
                Err(e) => Err(e.into()),
            }
        }
        OracleAction::Implications {
            premises,
            conclusion,
            samples,
            seed: s,
            json,
        } => {
            let premises: Vec<AxiomId> = AxiomId::parse_set(&premises)?.into_iter().collect();
            let conclusion: AxiomId = conclusion.parse()?;
            let r = implication_suite(&premises, conclusion, samples, seed(s)?);
            if json {
                let mut doc = serde_json::to_value(&r)?;
                doc["schema"] = json!(format!("bwt.implications/{SCHEMA}"));
                outln!("{}", serde_json::to_string_pretty(&doc)?);
            } else {
                let p: Vec<String> = premises.iter().map(AxiomId::to_string).collect();
                outln!(
                    "{} => {conclusion}: {} violation(s) in {} sample(s) ({} drawn)",
                    p.join(","),
                    r.violations,
                    r.samples,
                    r.attempts
                );
                if let Some(c) = &r.counterexample {
                    out!("first counterexample:\n{c}");
                }
            }
            Ok(r.violations == 0)
        }
    }
}
