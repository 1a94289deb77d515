//! Command-line front end. [`run`] is the whole program minus process exit,
//! so tests can drive it with captured output.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use zsp_core::factor::{collision_factor, cyclic_attack, FactorResult};
use zsp_core::graph::{arc_of, arc_tree_mul, tree_of, FunctionalGraph};
use zsp_core::partition::{classify, field_kernel, partition_all};
use zsp_core::ring::DEFAULT_BUDGET;
use zsp_core::verify::{self, cycle_length_histogram, full_graph};
use zsp_core::{RingContext, RootedTree, Side};

pub const SCHEMA_VERSION: &str = "1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "zsp", version, about = "Squaring dynamics in Z_sp", long_about = None)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format; each subcommand accepts a subset.
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Cap on the number of elements an exhaustive operation may touch.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Dot,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AttackMethod {
    Cyclic,
    Collision,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Constants, cardinalities, max-cycle report and cycle-length histogram.
    Analyze { s: u64, p: u64 },
    /// The nine-cell partition of Z_N.
    Partition { s: u64, p: u64 },
    /// The kernel quad tree rooted at 1.
    KernelTree { s: u64, p: u64 },
    /// All cycles of the squaring map with their periods mod s and mod p.
    Cycles { s: u64, p: u64 },
    /// Multiplies the kernel tree by the arc ending at the cyclic unit `a`.
    ArcTreeMul { s: u64, p: u64, a: u64 },
    /// Factor N from a squaring orbit or a square-root collision.
    Factor {
        n: u64,
        #[arg(long, value_enum, default_value_t = AttackMethod::Cyclic)]
        method: AttackMethod,
        /// Starting residue for the cyclic attack.
        #[arg(long)]
        w: Option<u64>,
        /// Collision pair with x^2 = y^2 mod N.
        #[arg(long)]
        x: Option<u64>,
        #[arg(long)]
        y: Option<u64>,
        /// Squaring limit for the cyclic attack.
        #[arg(long, default_value_t = 1000)]
        max_iter: u64,
    },
    /// Runs the exhaustive invariant suite against the oracle.
    Verify { s: u64, p: u64 },
    /// Full functional graph as DOT or JSON.
    Export { s: u64, p: u64 },
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] zsp_core::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Usage(String),
}

struct Output {
    body: String,
    verify_failed: bool,
}

impl Output {
    fn ok(body: String) -> Self {
        Self {
            body,
            verify_failed: false,
        }
    }
}

/// Runs the program on `args` (including the program name) and returns the
/// exit code: 0 on success, 1 on usage or input errors, 2 when
/// verification fails.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli).and_then(|out| emit(&cli, out, stdout)) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn emit(cli: &Cli, out: Output, stdout: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.out {
        Some(path) => std::fs::write(path, &out.body)?,
        None => stdout.write_all(out.body.as_bytes())?,
    }
    Ok(if out.verify_failed {
        EXIT_VERIFY
    } else {
        EXIT_OK
    })
}

fn context(s: u64, p: u64, budget: u64) -> Result<RingContext, CliError> {
    Ok(RingContext::new(s, p)?.with_budget(budget))
}

fn format_or(cli: &Cli, default: Format, allowed: &[Format]) -> Result<Format, CliError> {
    let f = cli.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(CliError::Usage(format!(
            "format {} is not available here (choose from {})",
            format_name(f),
            allowed
                .iter()
                .map(|&f| format_name(f))
                .collect::<Vec<_>>()
                .join(", ")
        )))
    }
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Text => "text",
        Format::Dot => "dot",
        Format::Json => "json",
        Format::Csv => "csv",
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn execute(cli: &Cli) -> Result<Output, CliError> {
    use Format::*;
    let b = cli.budget;
    match cli.command {
        Command::Analyze { s, p } => {
            let ctx = context(s, p, b)?;
            let f = format_or(cli, Text, &[Text, Json])?;
            analyze(&ctx, f).map(Output::ok)
        }
        Command::Partition { s, p } => {
            let ctx = context(s, p, b)?;
            let f = format_or(cli, Text, &[Text, Json, Csv])?;
            partition(&ctx, f).map(Output::ok)
        }
        Command::KernelTree { s, p } => {
            let ctx = context(s, p, b)?;
            let f = format_or(cli, Text, &[Text, Json, Csv])?;
            kernel_tree(&ctx, f).map(Output::ok)
        }
        Command::Cycles { s, p } => {
            let ctx = context(s, p, b)?;
            let f = format_or(cli, Text, &[Text, Json, Csv])?;
            cycles(&ctx, f).map(Output::ok)
        }
        Command::ArcTreeMul { s, p, a } => {
            let ctx = context(s, p, b)?;
            let f = format_or(cli, Text, &[Text, Json])?;
            arc_tree(&ctx, a, f).map(Output::ok)
        }
        Command::Factor {
            n,
            method,
            w,
            x,
            y,
            max_iter,
        } => {
            let f = format_or(cli, Text, &[Text, Json])?;
            let need = |v: Option<u64>, flag: &str| {
                v.ok_or_else(|| {
                    CliError::Usage(format!("--method {method:?} needs --{flag}").to_lowercase())
                })
            };
            let result = match method {
                AttackMethod::Cyclic => cyclic_attack(n, need(w, "w")?, max_iter)?,
                AttackMethod::Collision => collision_factor(n, need(x, "x")?, need(y, "y")?)?,
            };
            Ok(Output::ok(factor_text(n, &result, f)))
        }
        Command::Verify { s, p } => {
            let ctx = context(s, p, b)?;
            let f = format_or(cli, Text, &[Text, Json])?;
            let report = verify::verify_pair(&ctx)?;
            let body = match f {
                Json => json(&report),
                _ => {
                    let mut out = String::new();
                    for c in &report.checks {
                        let tag = if c.passed { "PASS" } else { "FAIL" };
                        let _ = writeln!(out, "{tag} {}: {}", c.name, c.detail);
                    }
                    let _ = writeln!(out, "{}", max_cycle_line(&report.cardinalities));
                    out
                }
            };
            Ok(Output {
                body,
                verify_failed: !report.passed(),
            })
        }
        Command::Export { s, p } => {
            let ctx = context(s, p, b)?;
            let f = format_or(cli, Json, &[Json, Dot])?;
            let graph = full_graph(&ctx)?;
            let body = match f {
                Dot => to_dot(&ctx, &graph),
                _ => json(&export_document(&ctx, &graph)?),
            };
            Ok(Output::ok(body))
        }
    }
}

fn max_cycle_line(rep: &zsp_core::CardinalityReport) -> String {
    let observed = rep
        .observed_max_cycle
        .map_or_else(|| "none (DSet is empty)".to_string(), |v| v.to_string());
    let flag = if rep.max_cycle_mismatch() == Some(true) {
        "  MISMATCH"
    } else {
        ""
    };
    format!(
        "max DSet cycle: claimed {} = lcm({}, {}), observed {observed}{flag}",
        rep.claimed_max_cycle, rep.q_lpf, rep.r_lpf
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextInfo {
    pub modulus: u64,
    pub k: u32,
    pub q: u64,
    pub l: u32,
    pub r: u64,
    pub alpha: u64,
    pub beta: u64,
    pub unity_s: u64,
    pub unity_p: u64,
    pub height: u32,
}

impl ContextInfo {
    fn of(ctx: &RingContext) -> Self {
        Self {
            modulus: ctx.modulus(),
            k: ctx.k(),
            q: ctx.q(),
            l: ctx.l(),
            r: ctx.r(),
            alpha: ctx.alpha(),
            beta: ctx.beta(),
            unity_s: ctx.unity_s(),
            unity_p: ctx.unity_p(),
            height: ctx.height(),
        }
    }
}

fn analyze(ctx: &RingContext, f: Format) -> Result<String, CliError> {
    let graph = full_graph(ctx)?;
    let report = verify::max_cycle_report(ctx)?;
    let hist = cycle_length_histogram(&graph);
    if f == Format::Json {
        #[derive(Serialize)]
        struct Analysis<'a> {
            s: u64,
            p: u64,
            context: ContextInfo,
            cardinalities: &'a zsp_core::CardinalityReport,
            cycle_lengths: &'a BTreeMap<usize, usize>,
        }
        return Ok(json(&Analysis {
            s: ctx.s(),
            p: ctx.p(),
            context: ContextInfo::of(ctx),
            cardinalities: &report,
            cycle_lengths: &hist,
        }));
    }
    let mut out = String::new();
    let _ = writeln!(
        out,
        "s = {}, p = {}, N = {}",
        ctx.s(),
        ctx.p(),
        ctx.modulus()
    );
    let _ = writeln!(
        out,
        "s - 1 = 2^{} * {}, p - 1 = 2^{} * {}",
        ctx.k(),
        ctx.q(),
        ctx.l(),
        ctx.r()
    );
    let _ = writeln!(out, "alpha = {}, beta = {}", ctx.alpha(), ctx.beta());
    let _ = writeln!(
        out,
        "fixed points: unity_s = {}, unity_p = {}",
        ctx.unity_s(),
        ctx.unity_p()
    );
    let _ = writeln!(out, "kernel tree height: {}", ctx.height());
    let _ = writeln!(out, "cardinalities:");
    for (name, v) in [
        ("multiples", report.n_multiples),
        ("off-by-one", report.n_offbyone),
        ("DSet", report.n_dset),
        ("kernel", report.n_kernel),
        ("cyclic in DSet", report.n_dset_cyclic),
    ] {
        let _ = writeln!(out, "  {name:<15}{v}");
    }
    let _ = writeln!(out, "{}", max_cycle_line(&report));
    let _ = writeln!(out, "cycle lengths:");
    for (len, count) in &hist {
        let _ = writeln!(out, "  {len:>6}: {count}");
    }
    Ok(out)
}

fn partition(ctx: &RingContext, f: Format) -> Result<String, CliError> {
    let cells = partition_all(ctx)?;
    Ok(match f {
        Format::Json => json(&cells),
        Format::Csv => {
            let mut out = String::from("value,class\n");
            for w in 0..ctx.modulus() {
                let _ = writeln!(out, "{w},{}", classify(w, ctx));
            }
            out
        }
        _ => {
            let mut out = String::new();
            for (class, members) in &cells {
                let _ = writeln!(out, "{:<12}{}", class.name(), members.len());
            }
            out
        }
    })
}

fn kernel_tree(ctx: &RingContext, f: Format) -> Result<String, CliError> {
    let tree = tree_of(1, ctx.height() as usize, ctx)?;
    if f == Format::Json {
        return Ok(json(&TreeExport::of(&tree)));
    }
    if f == Format::Text {
        let mut out = String::new();
        for (i, level) in tree.levels.iter().enumerate() {
            let nodes: Vec<String> = level.iter().map(u64::to_string).collect();
            let _ = writeln!(out, "level {i} ({}): {}", level.len(), nodes.join(" "));
        }
        return Ok(out);
    }
    // one row per node: the s-side component is a multiple of s, the p-side
    // a multiple of p, and the node sits at the larger component level
    let level_in = |x: u64, side: Side| {
        (0..=ctx.height())
            .find(|&i| ctx.pow2iter(x, i) == ctx.unity(side))
            .expect("kernel component")
    };
    let in_kernel = |x: u64, side: Side| field_kernel(ctx, side).binary_search(&x).is_ok();
    let mut out = String::from("value,level,s_component,s_level,p_component,p_level,parent\n");
    for (i, level) in tree.levels.iter().enumerate() {
        for &w in level {
            let h = ctx.h_split(w);
            debug_assert!(in_kernel(h.xs, Side::S) && in_kernel(h.yp, Side::P));
            let parent = tree.parent.get(&w).map_or_else(String::new, u64::to_string);
            let _ = writeln!(
                out,
                "{w},{i},{},{},{},{},{parent}",
                h.xs,
                level_in(h.xs, Side::S),
                h.yp,
                level_in(h.yp, Side::P)
            );
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Laps {
    pub s: usize,
    pub p: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleExport {
    pub nodes: Vec<u64>,
    /// Period of the nodes mod s.
    pub mu: usize,
    /// Period of the nodes mod p.
    pub nu: usize,
    pub laps: Laps,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeExport {
    pub root: u64,
    pub levels: Vec<Vec<u64>>,
    /// `[child, parent]` pairs, ascending by child.
    pub parents: Vec<[u64; 2]>,
}

impl TreeExport {
    fn of(tree: &RootedTree) -> Self {
        Self {
            root: tree.root,
            levels: tree.levels.clone(),
            parents: tree.parent.iter().map(|(&c, &p)| [c, p]).collect(),
        }
    }
}

/// Versioned JSON export of the whole functional graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportDocument {
    pub schema_version: String,
    pub s: u64,
    pub p: u64,
    pub context: ContextInfo,
    /// Cell name -> number of residues.
    pub partition: BTreeMap<String, usize>,
    pub cycles: Vec<CycleExport>,
    /// One tree per cyclic node that has non-cyclic preimages.
    pub trees: Vec<TreeExport>,
}

impl ExportDocument {
    /// Successor of every residue, rebuilt from cycles and tree parents.
    pub fn successor_map(&self) -> BTreeMap<u64, u64> {
        let mut succ = BTreeMap::new();
        for c in &self.cycles {
            for (i, &w) in c.nodes.iter().enumerate() {
                succ.insert(w, c.nodes[(i + 1) % c.nodes.len()]);
            }
        }
        for t in &self.trees {
            for &[child, parent] in &t.parents {
                succ.insert(child, parent);
            }
        }
        succ
    }
}

fn export_document(ctx: &RingContext, graph: &FunctionalGraph) -> Result<ExportDocument, CliError> {
    let partition = partition_all(ctx)?
        .into_iter()
        .map(|(class, members)| (class.name().to_string(), members.len()))
        .collect();
    let cycles = graph
        .cycle_records(ctx)
        .into_iter()
        .map(|r| CycleExport {
            nodes: r.nodes,
            mu: r.s_period,
            nu: r.p_period,
            laps: Laps {
                s: r.s_laps,
                p: r.p_laps,
            },
        })
        .collect();
    let height = graph
        .nodes()
        .iter()
        .filter_map(|&w| graph.depth(w))
        .max()
        .unwrap_or(0) as usize;
    let trees = graph
        .tree_roots()
        .into_iter()
        .map(|root| tree_of(root, height, ctx).map(|t| TreeExport::of(&t)))
        .collect::<Result<_, _>>()?;
    Ok(ExportDocument {
        schema_version: SCHEMA_VERSION.to_string(),
        s: ctx.s(),
        p: ctx.p(),
        context: ContextInfo::of(ctx),
        partition,
        cycles,
        trees,
    })
}

/// DOT graph with one edge `w -> w^2` per residue, cycle edges first.
fn to_dot(ctx: &RingContext, graph: &FunctionalGraph) -> String {
    let mut out = format!("digraph zsp_{}_{} {{\n", ctx.s(), ctx.p());
    out.push_str("  node [shape=circle];\n");
    for cycle in graph.cycles() {
        for &w in cycle {
            let _ = writeln!(out, "  {w} -> {};", ctx.fsquare(w));
        }
    }
    for &w in graph.nodes() {
        if !graph.is_cyclic(w) {
            let _ = writeln!(out, "  {w} -> {};", ctx.fsquare(w));
        }
    }
    out.push_str("}\n");
    out
}

fn arc_tree(ctx: &RingContext, a: u64, f: Format) -> Result<String, CliError> {
    let n = ctx.height() as usize;
    let arc = arc_of(a, n, ctx)?;
    let kernel = tree_of(1, n, ctx)?;
    let product = arc_tree_mul(&arc, &kernel, ctx)?;
    let direct = tree_of(a % ctx.modulus(), n, ctx)?;
    let matches = product == direct;
    if f == Format::Json {
        #[derive(Serialize)]
        struct ArcTree {
            arc: Vec<u64>,
            tree: TreeExport,
            matches_tree_of_root: bool,
        }
        return Ok(json(&ArcTree {
            arc: arc.nodes,
            tree: TreeExport::of(&product),
            matches_tree_of_root: matches,
        }));
    }
    let mut out = String::new();
    let arc_nodes: Vec<String> = arc.nodes.iter().map(u64::to_string).collect();
    let _ = writeln!(out, "arc: {}", arc_nodes.join(" "));
    for (i, level) in product.levels.iter().enumerate() {
        let nodes: Vec<String> = level.iter().map(u64::to_string).collect();
        let _ = writeln!(out, "level {i} ({}): {}", level.len(), nodes.join(" "));
    }
    let _ = writeln!(out, "equals tree of {}: {}", product.root, matches);
    Ok(out)
}

fn factor_text(n: u64, r: &FactorResult, f: Format) -> String {
    if f == Format::Json {
        return json(r);
    }
    match r.factor {
        Some(d) => format!(
            "{n} = {d} * {} ({:?}, {} iterations)\n",
            n / d,
            r.method,
            r.iterations
        )
        .to_lowercase(),
        None => format!("no factor of {n} found in {} iterations\n", r.iterations),
    }
}

fn cycles(ctx: &RingContext, f: Format) -> Result<String, CliError> {
    let graph = full_graph(ctx)?;
    let records = graph.cycle_records(ctx);
    Ok(match f {
        Format::Json => json(&records),
        Format::Csv => {
            let mut out = String::from("length,s_period,p_period,s_laps,p_laps,nodes\n");
            for r in &records {
                let nodes: Vec<String> = r.nodes.iter().map(u64::to_string).collect();
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.length,
                    r.s_period,
                    r.p_period,
                    r.s_laps,
                    r.p_laps,
                    nodes.join(" ")
                );
            }
            out
        }
        _ => {
            let mut out = String::new();
            for r in &records {
                let nodes: Vec<String> = r.nodes.iter().map(u64::to_string).collect();
                let _ = writeln!(
                    out,
                    "C{} mu={} nu={} laps={}/{}: {}",
                    r.length,
                    r.s_period,
                    r.p_period,
                    r.s_laps,
                    r.p_laps,
                    nodes.join(" ")
                );
            }
            out
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut argv = vec!["zsp"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = capture(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("kernel-tree"));
    }

    #[test]
    fn format_restrictions() {
        let (code, _, err) = capture(&["analyze", "11", "23", "--format", "dot"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("not available"));
    }

    #[test]
    fn factor_text_output() {
        let (code, out, _) = capture(&["factor", "253", "--w", "25", "--max-iter", "64"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.starts_with("253 = 11 * 23"));
    }
}
