//! Command-line front end.
//!
//! Trees are given as `chainN`, as a parenthesis string such as `"(()())"`,
//! or as the path of a JSON tree record. Exit codes: 0 the relation holds,
//! 1 it fails, 2 unknown or over budget, 3 bad input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::config::{OutputFormat, RunConfig, SearchMode};
use crate::constructions::{add_root, doubling_tree, graft, plus_leaf, star_extend};
use crate::enumeration::{enumerate_connections, enumerate_embeddings, enumerate_psc, enumerate_rigid_surjections};
use crate::error::{EnumError, FunctorError, MorphismError, SearchError, TreeError};
use crate::export::{morphism_to_dot, tree_to_dot};
use crate::functors::{delta, delta_signature, gamma, invariant_set, partial_functor, AnnotatedPscHom};
use crate::morphism::{Category, Connection, MorphismRecord, PscHom, TreeMap};
use crate::search::{
    copy_family, arrow_check, degree_at_witness, degree_check, verify_lower_bound, verify_no_ramsey,
    ArrowCertificate, Route,
};
use crate::tree::{enumerate_trees, Forest, OrderedTree, TreeRecord, VertexId};

#[derive(Debug, Parser)]
#[command(name = "treeconn", version, about = "Connections between ordered trees and Ramsey searches over them")]
pub struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalOpts {
    /// TOML file with `mode`, `format` and a `[budget]` table; flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    mode: Option<SearchMode>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Write the main artifact (tree, certificate, report) here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    budget_enum_vertices: Option<usize>,
    #[arg(long, global = true)]
    budget_tree_size: Option<usize>,
    #[arg(long, global = true)]
    budget_hom: Option<usize>,
    #[arg(long, global = true)]
    budget_colorings: Option<u64>,
    /// Wall-clock cap for coloring searches, in seconds.
    #[arg(long, global = true)]
    budget_time: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CatArg {
    /// Increasing injections.
    Incinj,
    /// Rigid surjections.
    Rigid,
    /// Connections between trees.
    Conn,
    /// Connections between chains whose embedding keeps the minimum.
    ConnRoot,
    /// Connections between chains.
    ConnLin,
    /// Partial strong connections.
    Psc,
}

impl From<CatArg> for Category {
    fn from(c: CatArg) -> Self {
        match c {
            CatArg::Incinj => Category::IncInj,
            CatArg::Rigid => Category::RigidOnly,
            CatArg::Conn => Category::ConnT,
            CatArg::ConnRoot => Category::ConnLstar,
            CatArg::ConnLin => Category::ConnL,
            CatArg::Psc => Category::Psc,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List or count trees or a Hom-set.
    Enum {
        #[arg(value_enum)]
        kind: EnumKind,
        /// `trees N`, or the two trees of the Hom-set.
        args: Vec<String>,
        #[arg(long)]
        count: bool,
        #[arg(long, value_enum, default_value = "conn")]
        cat: CatArg,
    },
    /// Build a tree from others.
    Construct {
        #[arg(value_enum)]
        kind: ConstructKind,
        /// The input tree (a forest for `add-root`).
        input: String,
        /// Graft anchors, comma separated.
        #[arg(long, value_delimiter = ',')]
        at: Vec<VertexId>,
        /// One forest per anchor.
        #[arg(long = "forest")]
        forests: Vec<String>,
    },
    /// Decide V → (T)^S_r.
    Arrow {
        s: String,
        t: String,
        v: String,
        #[arg(short)]
        r: usize,
        #[arg(long, value_enum, default_value = "conn")]
        cat: CatArg,
    },
    /// Compute the degree at the witness V, or check it against -k.
    Degree {
        s: String,
        t: String,
        v: String,
        #[arg(short)]
        r: usize,
        #[arg(short)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value = "conn")]
        cat: CatArg,
    },
    /// Exhaustive checks of the lower-bound colorings.
    Verify {
        #[command(subcommand)]
        kind: VerifyKind,
    },
    /// Print the invariant set of a connection.
    Invariant {
        #[command(flatten)]
        morphism: MorphismArgs,
    },
    /// Apply one of the functors to a morphism.
    Functor {
        #[arg(value_enum)]
        which: FunctorKind,
        #[command(flatten)]
        morphism: MorphismArgs,
    },
    /// Render a tree or morphism.
    Export {
        /// Graphviz output (the default).
        #[arg(long)]
        dot: bool,
        /// Tree to render.
        tree: Option<String>,
        /// Render the doubling tree of the input, labelled with names.
        #[arg(long)]
        doubling: bool,
        /// Render a morphism record instead of a tree.
        #[arg(long)]
        morphism: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EnumKind {
    Trees,
    Embeddings,
    Rigid,
    Conn,
    Psc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConstructKind {
    Doubling,
    PlusLeaf,
    Star,
    AddRoot,
    Graft,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FunctorKind {
    Delta,
    Partial,
    Gamma,
    Signature,
}

#[derive(Debug, Subcommand)]
enum VerifyKind {
    /// Every outer connection keeps the invariant set of every doubling
    /// witness of S.
    LowerBound {
        s: String,
        /// `self`, `doubling`, or a tree.
        #[arg(long, default_value = "self")]
        witness: String,
        #[arg(long, value_enum, default_value = "auto")]
        route: Route,
    },
    /// The two-coloring at x separates (s, i_s) from (s, i) in every copy.
    NoRamsey {
        /// S; the connection is its doubling witness for `--subset`.
        s: Option<String>,
        #[arg(short)]
        x: VertexId,
        /// Defaults to `{x}`.
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<VertexId>>,
        /// Use this morphism record instead of a doubling witness.
        #[arg(long)]
        morphism: Option<PathBuf>,
        #[arg(long, default_value = "self")]
        witness: String,
        #[arg(long, value_enum, default_value = "auto")]
        route: Route,
    },
}

#[derive(Debug, Args)]
struct MorphismArgs {
    /// JSON morphism record.
    #[arg(long)]
    morphism: Option<PathBuf>,
    /// Source tree S.
    s: Option<String>,
    /// Target tree T.
    t: Option<String>,
    #[arg(long, value_delimiter = ',')]
    surj: Vec<VertexId>,
    #[arg(long, value_delimiter = ',')]
    emb: Vec<VertexId>,
    /// Last vertex of the surjection's domain, for partial morphisms.
    #[arg(long)]
    top: Option<VertexId>,
    #[arg(long, value_enum, default_value = "conn")]
    cat: CatArg,
}

/// A failure, with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        Self { code: 3, message: message.into() }
    }
}

fn enum_code(e: &EnumError) -> i32 {
    match e {
        EnumError::TreeBudget { .. } | EnumError::HomBudget { .. } => 2,
        EnumError::Morphism(_) => 3,
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        let code = match &e {
            SearchError::Enum(inner) => enum_code(inner),
            _ => 3,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<EnumError> for CliError {
    fn from(e: EnumError) -> Self {
        Self { code: enum_code(&e), message: e.to_string() }
    }
}

impl From<TreeError> for CliError {
    fn from(e: TreeError) -> Self {
        let code = if matches!(e, TreeError::Budget { .. }) { 2 } else { 3 };
        Self { code, message: e.to_string() }
    }
}

impl From<MorphismError> for CliError {
    fn from(e: MorphismError) -> Self {
        Self::input(e.to_string())
    }
}

impl From<FunctorError> for CliError {
    fn from(e: FunctorError) -> Self {
        Self::input(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::input(e.to_string())
    }
}

/// Parses the process arguments, runs, and returns the exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return 3;
            }
            let _ = write!(stdout, "{e}");
            return 0;
        }
    };
    match run(cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

fn load_config(g: &GlobalOpts) -> Result<RunConfig, CliError> {
    let mut cfg = match &g.config {
        Some(path) => RunConfig::from_toml(&fs::read_to_string(path)?).map_err(|e| CliError::input(e.to_string()))?,
        None => RunConfig::default(),
    };
    if let Some(m) = g.mode {
        cfg.mode = m;
    }
    if let Some(f) = g.format {
        cfg.format = f;
    }
    let b = &mut cfg.budget;
    if let Some(x) = g.budget_enum_vertices {
        b.max_enum_vertices = x;
    }
    if let Some(x) = g.budget_tree_size {
        b.max_tree_size = x;
    }
    if let Some(x) = g.budget_hom {
        b.max_hom = x;
    }
    if let Some(x) = g.budget_colorings {
        b.max_colorings = x;
    }
    if let Some(x) = g.budget_time {
        b.time_cap_secs = Some(x);
    }
    if !cfg.budget.is_positive() {
        return Err(CliError::input("all budgets must be positive"));
    }
    Ok(cfg)
}

/// Reads a tree argument: `chainN`, a parenthesis string, or a JSON file.
pub fn parse_tree_arg(arg: &str) -> Result<OrderedTree, CliError> {
    if let Some(k) = arg.strip_prefix("chain") {
        if let Ok(k) = k.parse::<usize>() {
            return Ok(OrderedTree::chain(k)?);
        }
    }
    if arg.trim_start().starts_with('(') {
        return Ok(OrderedTree::parse(arg)?);
    }
    let text = fs::read_to_string(arg).map_err(|e| CliError::input(format!("{arg}: {e}")))?;
    if text.trim_start().starts_with('(') {
        return Ok(OrderedTree::parse(text.trim())?);
    }
    let record: TreeRecord = serde_json::from_str(&text)?;
    Ok(OrderedTree::try_from(record)?)
}

/// Reads a forest argument: `empty`, a parenthesis string, or a JSON file.
pub fn parse_forest_arg(arg: &str) -> Result<Forest, CliError> {
    if arg.is_empty() || arg == "empty" {
        return Ok(Forest::empty());
    }
    if arg.trim_start().starts_with('(') {
        return Ok(Forest::parse(arg)?);
    }
    if let Ok(t) = parse_tree_arg(arg) {
        return Ok(Forest::from_trees([&t]));
    }
    let text = fs::read_to_string(arg)?;
    Ok(serde_json::from_str(&text)?)
}

fn arc(t: OrderedTree) -> Arc<OrderedTree> {
    Arc::new(t)
}

fn json<T: Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    if let Some(p) = path {
        fs::write(p, text)?;
    }
    Ok(())
}

fn morphism_line(c: &Connection) -> String {
    let list = |m: &TreeMap| m.as_slice().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    let mut line = String::new();
    if !c.surj().is_inert() {
        line += &format!("surj=[{}]", list(c.surj()));
    }
    if !c.emb().is_inert() {
        if !line.is_empty() {
            line.push(' ');
        }
        line += &format!("emb=[{}]", list(c.emb()));
    }
    if let Some(top) = c.domain_top() {
        line += &format!(" top={top}");
    }
    line
}

fn run(cli: Cli, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = load_config(&cli.global)?;
    let out = &cli.global.out;
    match cli.command {
        Command::Enum { kind, args, count, cat } => cmd_enum(kind, &args, count, cat.into(), &cfg, stdout),
        Command::Construct { kind, input, at, forests } => cmd_construct(kind, &input, &at, &forests, &cfg, out, stdout),
        Command::Arrow { s, t, v, r, cat } => {
            let family = family(&s, &t, &v, cat.into(), &cfg)?;
            let cert = arrow_check(&family, r, &cfg)?;
            emit_certificate(&cert, &cfg, out, stdout)
        }
        Command::Degree { s, t, v, r, k, cat } => {
            let family = family(&s, &t, &v, cat.into(), &cfg)?;
            let cert = match k {
                Some(k) => degree_check(&family, r, k, &cfg)?,
                None => degree_at_witness(&family, r, &cfg)?,
            };
            emit_certificate(&cert, &cfg, out, stdout)
        }
        Command::Verify { kind } => cmd_verify(kind, &cfg, out, stdout),
        Command::Invariant { morphism } => {
            let c = morphism.load()?;
            let b = invariant_set(&c)?;
            let text = match cfg.format {
                OutputFormat::Structured => json(&b)?,
                _ => format!("{:?}\n", b.members()),
            };
            write_out(out, &text)?;
            stdout.write_all(text.as_bytes())?;
            Ok(0)
        }
        Command::Functor { which, morphism } => cmd_functor(which, &morphism.load()?, &cfg, out, stdout),
        Command::Export { dot: _, tree, doubling, morphism } => {
            let text = match (morphism, tree) {
                (Some(path), _) => morphism_to_dot(&load_morphism(&path)?),
                (None, Some(t)) => {
                    let t = arc(parse_tree_arg(&t)?);
                    if doubling {
                        let d = doubling_tree(&t);
                        tree_to_dot(&d.tree, Some(&d.names()))
                    } else {
                        tree_to_dot(&t, None)
                    }
                }
                (None, None) => return Err(CliError::input("export needs a tree or --morphism")),
            };
            write_out(out, &text)?;
            stdout.write_all(text.as_bytes())?;
            Ok(0)
        }
    }
}

fn cmd_enum(
    kind: EnumKind,
    args: &[String],
    count: bool,
    cat: Category,
    cfg: &RunConfig,
    stdout: &mut dyn Write,
) -> Result<i32, CliError> {
    let structured = cfg.format == OutputFormat::Structured;
    if kind == EnumKind::Trees {
        let [n] = args else { return Err(CliError::input("enum trees takes one size")) };
        let n: usize = n.parse().map_err(|_| CliError::input(format!("bad size {n}")))?;
        let trees = enumerate_trees(n, cfg.budget.max_enum_vertices)?;
        let text = if count {
            format!("{}\n", trees.len())
        } else if structured {
            json(&trees)?
        } else {
            trees.iter().map(|t| format!("{t}\n")).collect()
        };
        stdout.write_all(text.as_bytes())?;
        return Ok(0);
    }
    let [a, b] = args else { return Err(CliError::input("expected two trees")) };
    let (a, b) = (arc(parse_tree_arg(a)?), arc(parse_tree_arg(b)?));
    let budget = &cfg.budget;
    let homs: Vec<Connection> = match kind {
        EnumKind::Embeddings => enumerate_embeddings(&a, &b, budget)?
            .into_iter()
            .map(|e| Connection::from_maps(Category::IncInj, a.clone(), b.clone(), vec![], e.into_vec(), None))
            .collect::<Result<_, _>>()?,
        EnumKind::Rigid => enumerate_rigid_surjections(&a, &b, budget)?
            .into_iter()
            .map(|s| Connection::from_maps(Category::RigidOnly, b.clone(), a.clone(), s.into_vec(), vec![], None))
            .collect::<Result<_, _>>()?,
        EnumKind::Conn => enumerate_connections(&a, &b, cat, budget)?.morphisms,
        EnumKind::Psc => enumerate_psc(&a, &b, budget)?.morphisms,
        EnumKind::Trees => unreachable!(),
    };
    let text = if count {
        format!("{}\n", homs.len())
    } else if structured {
        json(&homs.iter().map(Connection::to_record).collect::<Vec<_>>())?
    } else if kind == EnumKind::Embeddings {
        homs.iter().map(|c| format!("{:?}\n", c.emb().as_slice())).collect()
    } else if kind == EnumKind::Rigid {
        homs.iter().map(|c| format!("{:?}\n", c.surj().as_slice())).collect()
    } else {
        homs.iter().map(|c| morphism_line(c) + "\n").collect()
    };
    stdout.write_all(text.as_bytes())?;
    Ok(0)
}

#[derive(Serialize)]
struct Constructed<'a, T: Serialize> {
    tree: TreeRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    table: Option<&'a T>,
}

fn table_path(out: &Path) -> PathBuf {
    let mut name = out.file_stem().unwrap_or_default().to_os_string();
    name.push(".table.json");
    out.with_file_name(name)
}

fn cmd_construct(
    kind: ConstructKind,
    input: &str,
    at: &[VertexId],
    forests: &[String],
    cfg: &RunConfig,
    out: &Option<PathBuf>,
    stdout: &mut dyn Write,
) -> Result<i32, CliError> {
    let (tree, table): (OrderedTree, Option<serde_json::Value>) = match kind {
        ConstructKind::Doubling => {
            let d = doubling_tree(&arc(parse_tree_arg(input)?));
            ((*d.tree).clone(), Some(serde_json::to_value(d.to_table())?))
        }
        ConstructKind::PlusLeaf => (plus_leaf(&parse_tree_arg(input)?), None),
        ConstructKind::Star => (star_extend(&parse_tree_arg(input)?), None),
        ConstructKind::AddRoot => (add_root(&parse_forest_arg(input)?), None),
        ConstructKind::Graft => {
            let base = parse_tree_arg(input)?;
            let fs: Vec<Forest> = forests.iter().map(|f| parse_forest_arg(f)).collect::<Result<_, _>>()?;
            let g = graft(&base, at, &fs)?;
            let table = serde_json::json!({ "from_base": g.from_base, "from_forest": g.from_forest });
            (g.tree, Some(table))
        }
    };
    if let Some(path) = out {
        fs::write(path, json(&tree.to_record())?)?;
        if let Some(t) = &table {
            fs::write(table_path(path), json(t)?)?;
        }
    }
    let text = match cfg.format {
        OutputFormat::Structured => json(&Constructed { tree: tree.to_record(), table: table.as_ref() })?,
        OutputFormat::Dot => tree_to_dot(&tree, None),
        OutputFormat::Text => {
            let mut s = format!("{tree}\n");
            if let Some(t) = &table {
                if let Some(names) = t.get("names") {
                    s += &format!("names {names}\n");
                }
                if let Some(embs) = t.get("embeddings").and_then(|e| e.as_array()) {
                    s += &format!("surj {}\n", t["surj"]);
                    for e in embs {
                        s += &format!("i_B B={} emb={}\n", e["subset"], e["emb"]);
                    }
                }
                if let Some(fb) = t.get("from_base") {
                    s += &format!("from_base {fb}\nfrom_forest {}\n", t["from_forest"]);
                }
            }
            s
        }
    };
    stdout.write_all(text.as_bytes())?;
    Ok(0)
}

fn family(s: &str, t: &str, v: &str, cat: Category, cfg: &RunConfig) -> Result<crate::search::CopyFamily, CliError> {
    let (s, t, v) = (arc(parse_tree_arg(s)?), arc(parse_tree_arg(t)?), arc(parse_tree_arg(v)?));
    Ok(copy_family(&s, &t, &v, cat, &cfg.budget)?)
}

fn emit_certificate(
    cert: &ArrowCertificate,
    cfg: &RunConfig,
    out: &Option<PathBuf>,
    stdout: &mut dyn Write,
) -> Result<i32, CliError> {
    let record = json(cert)?;
    write_out(out, &record)?;
    let text = match cfg.format {
        OutputFormat::Structured => record,
        _ => {
            let mut s = serde_json::to_value(cert.verdict)?.as_str().unwrap_or_default().to_string();
            if let Some(k) = cert.k {
                s += &format!(" k={k}");
            }
            s += &format!(" r={} explored={}\n", cert.r, cert.explored);
            if let Some(c) = &cert.coloring {
                s += &format!("coloring {c:?}\n");
            }
            s
        }
    };
    stdout.write_all(text.as_bytes())?;
    Ok(cert.verdict.exit_code())
}

fn witness_tree(arg: &str, t: &Arc<OrderedTree>) -> Result<Arc<OrderedTree>, CliError> {
    Ok(match arg {
        "self" => t.clone(),
        "doubling" => doubling_tree(t).tree,
        other => arc(parse_tree_arg(other)?),
    })
}

fn cmd_verify(kind: VerifyKind, cfg: &RunConfig, out: &Option<PathBuf>, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let (passed, record, summary) = match kind {
        VerifyKind::LowerBound { s, witness, route } => {
            let s = arc(parse_tree_arg(&s)?);
            let t = doubling_tree(&s).tree;
            let v = witness_tree(&witness, &t)?;
            let rep = verify_lower_bound(&s, &v, route, &cfg.budget)?;
            let summary = format!(
                "{} lower-bound: {} outer connections ({} inspected), {} subsets, {} violations\n",
                if rep.passed() { "pass" } else { "FAIL" },
                rep.outer_count,
                rep.inspected,
                rep.subsets,
                rep.violations.len()
            );
            (rep.passed(), json(&rep)?, summary)
        }
        VerifyKind::NoRamsey { s, x, subset, morphism, witness, route } => {
            let c = match (morphism, s) {
                (Some(path), _) => load_morphism(&path)?,
                (None, Some(s)) => {
                    let d = doubling_tree(&arc(parse_tree_arg(&s)?));
                    d.witness(&subset.unwrap_or_else(|| vec![x]))
                }
                (None, None) => return Err(CliError::input("no-ramsey needs S or --morphism")),
            };
            let v = witness_tree(&witness, c.target())?;
            let rep = verify_no_ramsey(&c, x, &v, route, &cfg.budget)?;
            let summary = format!(
                "{} no-ramsey: {} outer connections ({} inspected), {} violations\n",
                if rep.passed() { "pass" } else { "FAIL" },
                rep.outer_count,
                rep.inspected,
                rep.violations.len()
            );
            (rep.passed(), json(&rep)?, summary)
        }
    };
    write_out(out, &record)?;
    let text = if cfg.format == OutputFormat::Structured { record } else { summary };
    stdout.write_all(text.as_bytes())?;
    Ok(if passed { 0 } else { 1 })
}

fn load_morphism(path: &Path) -> Result<Connection, CliError> {
    let rec: MorphismRecord = serde_json::from_str(&fs::read_to_string(path)?)?;
    Ok(Connection::from_record(rec)?)
}

impl MorphismArgs {
    fn load(&self) -> Result<Connection, CliError> {
        if let Some(path) = &self.morphism {
            return load_morphism(path);
        }
        let (Some(s), Some(t)) = (&self.s, &self.t) else {
            return Err(CliError::input("give --morphism FILE or S T --surj .. --emb .."));
        };
        let (s, t) = (arc(parse_tree_arg(s)?), arc(parse_tree_arg(t)?));
        Ok(Connection::from_maps(self.cat.into(), s, t, self.surj.clone(), self.emb.clone(), self.top)?)
    }
}

#[derive(Serialize)]
struct FunctorOutput {
    before: MorphismRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    after: Option<MorphismRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bits: Option<Vec<bool>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    signature: Option<Vec<VertexId>>,
}

fn cmd_functor(
    which: FunctorKind,
    c: &Connection,
    cfg: &RunConfig,
    out: &Option<PathBuf>,
    stdout: &mut dyn Write,
) -> Result<i32, CliError> {
    let as_psc = || PscHom::try_from(c.clone()).map_err(|_| CliError::input("expected a PSC morphism (--cat psc)"));
    let mut res = FunctorOutput { before: c.to_record(), after: None, bits: None, signature: None };
    match which {
        FunctorKind::Delta => res.after = Some(delta(c)?.to_record()),
        FunctorKind::Partial => {
            let p = partial_functor(&AnnotatedPscHom::new(as_psc()?))?;
            res.after = Some(p.hom.to_record());
            res.bits = Some(p.bits);
        }
        FunctorKind::Gamma => res.after = Some(gamma(&as_psc()?)?.to_record()),
        FunctorKind::Signature => res.signature = Some(delta_signature(&as_psc()?)?.members()),
    }
    let record = json(&res)?;
    write_out(out, &record)?;
    let text = match cfg.format {
        OutputFormat::Structured => record,
        _ => {
            let mut s = format!("before {}\n", morphism_line(c));
            if let Some(a) = &res.after {
                let a = Connection::from_record(a.clone())?;
                s += &format!("after  {}\n", morphism_line(&a));
            }
            if let Some(b) = &res.bits {
                s += &format!("bits {:?}\n", b.iter().map(|&x| u8::from(x)).collect::<Vec<_>>());
            }
            if let Some(sig) = &res.signature {
                s += &format!("signature {sig:?}\n");
            }
            s
        }
    };
    stdout.write_all(text.as_bytes())?;
    Ok(0)
}
