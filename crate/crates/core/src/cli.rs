//! The `idealab` command line. Every command prints one JSON document (or an
//! ASCII rendering with `--ascii`) and exits with
//! 0 on success, 1 on an invariant violation, 2 on a parse error, 3 on a horizon error.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use crate::coding::{self, FamilyDesc, FamilySpec, FinFamily, MadFamily};
use crate::constructions::{self as cons, synthetic, BlockAudit, Construction};
use crate::ed::{self, EDCertificate, GridDesc};
use crate::error::{Error, Result};
use crate::mid;
use crate::ordinal::Ordinal;
use crate::seqcode;
use crate::sets::{SetDesc, Source};
use crate::tree::{self, fmt_seq, ExplicitTreeSet, Seq, TreeDesc};
use crate::verify;
use crate::vitali;

#[derive(Parser, Debug)]
#[command(name = "idealab", version, about = "Finite-horizon experiments with tree ideals and their coding maps")]
pub struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Blocks, elements or columns to compute.
    #[arg(long, global = true)]
    horizon: Option<u64>,
    /// Tree depth explored.
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Branches explored per tree node.
    #[arg(long, global = true)]
    width: Option<usize>,
    /// An ordinal such as `w*2+1` or `w^(w+1)`.
    #[arg(long, global = true)]
    alpha: Option<Ordinal>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Also write the full JSON record to this file.
    #[arg(long, global = true)]
    trace: Option<PathBuf>,
    /// Print an ASCII rendering instead of JSON where one exists.
    #[arg(long, global = true)]
    ascii: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Blocks of a coding map with their provenance.
    Phi {
        kind: PhiKind,
        /// Family descriptor (JSON or a path); a shipped family by default.
        #[arg(long)]
        family: Option<String>,
        /// Set descriptor for x; the naturals by default.
        #[arg(long)]
        x: Option<String>,
    },
    /// Run a hide or split construction against a target built from Phi(H) and audit it.
    Construct {
        kind: ConstructKind,
        /// Set descriptor for H; the naturals by default.
        #[arg(long)]
        x: Option<String>,
    },
    /// Ranks of the nodes of T(X) for an explicit subset of S_alpha.
    Rank {
        #[arg(long)]
        tree: String,
    },
    /// Is a sequence in S_alpha?
    SalphaCheck { seq: String },
    /// Decide Fin^alpha membership for a tree description.
    FinMember {
        #[arg(long)]
        tree: String,
    },
    /// ED grids: certificates, the ++ refinement and the spiral order.
    Ed {
        #[command(subcommand)]
        cmd: EdCmd,
    },
    /// Rank of a sequence, or the sequence of a rank with --inverse.
    Pi {
        seq: Option<String>,
        #[arg(long)]
        inverse: Option<u64>,
    },
    /// Binary digits of e(x) and the rationality verdict.
    Encode {
        #[arg(long)]
        set: String,
        #[arg(long, default_value_t = 100)]
        max_preperiod: u64,
        #[arg(long, default_value_t = 100)]
        max_period: u64,
    },
    /// The gap witness inside H.
    Gaps {
        #[arg(long)]
        set: Option<String>,
    },
    /// Fuse homogeneous tails of table-described sets.
    Fuse {
        #[arg(long)]
        sets: String,
        #[arg(long, default_value_t = 3)]
        steps: u64,
    },
    /// Ideals built from an independent family and an open pair.
    Mid {
        #[command(subcommand)]
        cmd: MidCmd,
    },
    /// Run a property suite, or `all`.
    Verify { suite: String },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum PhiKind {
    Mad,
    Ed,
    Fin,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ConstructKind {
    MadHide,
    MadSplit,
    EdHide,
    EdSplit,
    FinHide,
    FinSplit,
}

#[derive(Subcommand, Debug)]
enum EdCmd {
    /// Check a certificate against the columns up to the horizon.
    Check {
        #[arg(long)]
        grid: String,
        /// `small:N` or `plusplus`.
        #[arg(long)]
        cert: String,
    },
    /// The ++ refinement of a grid.
    Refine {
        #[arg(long)]
        grid: String,
    },
    /// The spiral order and the first members of the shipped family.
    Spiral,
}

#[derive(Subcommand, Debug)]
enum MidCmd {
    Sigma {
        #[command(flatten)]
        input: MidInput,
        /// Indices into the family, comma separated.
        #[arg(long, default_value = "")]
        f: String,
        #[arg(long, default_value = "")]
        g: String,
    },
    Check {
        #[command(flatten)]
        input: MidInput,
    },
    Member {
        #[command(flatten)]
        input: MidInput,
        #[arg(long)]
        x: String,
        #[arg(long, value_enum)]
        side: MidSide,
    },
    Suite {
        #[command(flatten)]
        input: MidInput,
    },
    /// The one-element split of an interval-union ideal.
    Split {
        #[arg(long)]
        x: String,
        #[arg(long)]
        a: String,
        /// Ideal predicate, e.g. `{"name":"generated-by","generators":[...]}`.
        #[arg(long)]
        ideal: String,
    },
}

#[derive(Args, Debug)]
struct MidInput {
    /// List of set descriptors; four binary-digit sets by default.
    #[arg(long)]
    family: Option<String>,
    /// Open pair; U from stems <1>,<2> and V from <4>,<8> by default.
    #[arg(long)]
    pair: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MidSide {
    F,
    I,
}

/// Runs one command; returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// JSON given inline or as a path.
fn load<T: DeserializeOwned>(arg: &str, what: &str) -> Result<T> {
    let trimmed = arg.trim_start();
    let (text, origin) = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        (arg.to_string(), what.to_string())
    } else {
        let text = fs::read_to_string(arg).map_err(|e| Error::parse(arg, e.to_string()))?;
        (text, arg.to_string())
    };
    serde_json::from_str(&text).map_err(|e| Error::parse(format!("{origin}:{}:{}", e.line(), e.column()), e.to_string()))
}

fn parse_seq(text: &str) -> Result<Seq> {
    let t = text.trim().trim_start_matches('<').trim_end_matches('>');
    if t.trim().is_empty() {
        return Ok(vec![]);
    }
    t.split(',')
        .enumerate()
        .map(|(i, p)| p.trim().parse().map_err(|_| Error::parse(format!("sequence entry {i}"), format!("{p:?} is not a natural number"))))
        .collect()
}

fn write_trace(path: &Option<PathBuf>, value: &impl Serialize) -> Result<()> {
    if let Some(p) = path {
        fs::write(p, to_json(value)?).map_err(|e| Error::parse(p.display().to_string(), e.to_string()))?;
    }
    Ok(())
}

fn to_json(value: &impl Serialize) -> Result<String> {
    serde_json::to_string_pretty(value).map(|s| s + "\n").map_err(|e| Error::Malformed(e.to_string()))
}

fn emit(out: &mut dyn Write, value: &impl Serialize) -> Result<()> {
    out.write_all(to_json(value)?.as_bytes()).map_err(|e| Error::Malformed(format!("cannot write output: {e}")))
}

fn emit_text(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|e| Error::Malformed(format!("cannot write output: {e}")))
}

fn set_source(arg: &Option<String>) -> Result<Source> {
    match arg {
        Some(a) => load::<SetDesc>(a, "set")?.to_source(),
        None => SetDesc::builtin("naturals").to_source(),
    }
}

fn alpha_or(g: &Global, default: &str) -> Ordinal {
    g.alpha.clone().unwrap_or_else(|| default.parse().expect("valid default"))
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let g = &cli.global;
    match &cli.cmd {
        Cmd::Phi { kind, family, x } => phi(g, *kind, family, x, out),
        Cmd::Construct { kind, x } => construct(g, *kind, x, out),
        Cmd::Rank { tree } => {
            let t: ExplicitTreeSet = load(tree, "tree")?;
            let ranks: Vec<_> = t
                .initial_tree()
                .iter()
                .map(|s| Ok(json!({"node": fmt_seq(s), "rank": t.rank(s)?})))
                .collect::<Result<_>>()?;
            let v = json!({"alpha": t.alpha().to_string(), "tree_rank": t.tree_rank(), "ranks": ranks});
            write_trace(&g.trace, &v)?;
            emit(out, &v)?;
            Ok(0)
        }
        Cmd::SalphaCheck { seq } => {
            let alpha = g.alpha.clone().ok_or_else(|| Error::parse("--alpha", "salpha-check needs --alpha"))?;
            let s = parse_seq(seq)?;
            let contains = tree::s_alpha_contains(&alpha, &s);
            let path = alpha.path(&s).ok().map(|o| o.to_string());
            emit(out, &json!({"alpha": alpha.to_string(), "seq": fmt_seq(&s), "contains": contains, "path_ordinal": path}))?;
            Ok(0)
        }
        Cmd::FinMember { tree } => {
            let alpha = g.alpha.clone().ok_or_else(|| Error::parse("--alpha", "fin-member needs --alpha"))?;
            let d: TreeDesc = load(tree, "tree")?;
            let member = tree::fin_member(&alpha, &d)?;
            emit(out, &json!({"alpha": alpha.to_string(), "depth": d.depth(), "member": member}))?;
            Ok(0)
        }
        Cmd::Ed { cmd } => ed_cmd(g, cmd, out),
        Cmd::Pi { seq, inverse } => {
            let v = match (seq, inverse) {
                (Some(s), None) => {
                    let s = parse_seq(s)?;
                    json!({"seq": fmt_seq(&s), "pi": seqcode::pi(&s)?})
                }
                (None, Some(n)) => json!({"rank": n, "seq": fmt_seq(&seqcode::pi_inverse(*n)?)}),
                _ => return Err(Error::parse("pi", "give a sequence or --inverse N")),
            };
            emit(out, &v)?;
            Ok(0)
        }
        Cmd::Encode { set, max_preperiod, max_period } => {
            let desc: SetDesc = load(set, "set")?;
            let precision = g.horizon.unwrap_or(64);
            let x = desc.to_source()?;
            let e = vitali::encode(&*x, precision)?;
            let verdict = match desc.to_upset() {
                Ok(u) => vitali::rationality_upset(&u),
                Err(_) => {
                    let horizon = precision.max(3 * (max_preperiod + max_period));
                    vitali::rationality(&*x, *max_preperiod, *max_period, horizon)?
                }
            };
            if g.ascii {
                emit_text(out, &format!("{e}\n"))?;
            } else {
                emit(out, &json!({"precision": precision, "digits": e, "prefix_value": e.value().to_string(), "rationality": verdict}))?;
            }
            Ok(0)
        }
        Cmd::Gaps { set } => {
            let h = set_source(set)?;
            let n = g.horizon.unwrap_or(20) as usize;
            let gc = vitali::gap_construction(h, 1 << 20);
            let w = gc.witness.prefix(n)?;
            let gaps: Vec<u64> = w.windows(2).map(|p| p[1] - p[0]).collect();
            let increasing = gaps.windows(2).all(|p| p[0] < p[1]);
            let y = gc.y.prefix(n)?;
            let verdict = vitali::is_periodic_horizon(&*gc.witness, 50, 50, 1000)?;
            let v = json!({"witness": w, "gaps": gaps, "gaps_increasing": increasing, "y": y, "periodicity": verdict});
            write_trace(&g.trace, &v)?;
            emit(out, &v)?;
            Ok(if increasing { 0 } else { 1 })
        }
        Cmd::Fuse { sets, steps } => {
            let tables: Vec<vitali::TableSet> = load(sets, "sets")?;
            let h = vitali::TableHomogenizer::new(tables)?;
            let t = vitali::fuse(&h, h.sets.len(), *steps)?;
            write_trace(&g.trace, &t)?;
            emit(out, &json!({"c": t.c, "calls": t.calls.len(), "failure": t.failure}))?;
            Ok(if t.failure.is_some() { 3 } else { 0 })
        }
        Cmd::Mid { cmd } => mid_cmd(g, cmd, out),
        Cmd::Verify { suite } => {
            let results =
                if suite == "all" { verify::run_all(g.seed)? } else { vec![verify::run_suite(suite, g.seed)?] };
            let passed = results.iter().all(|r| r.passed);
            let v = json!({"seed": g.seed, "passed": passed, "suites": results});
            write_trace(&g.trace, &v)?;
            emit(out, &v)?;
            Ok(if passed { 0 } else { 1 })
        }
    }
}

fn phi(g: &Global, kind: PhiKind, family: &Option<String>, x: &Option<String>, out: &mut dyn Write) -> Result<i32> {
    let x = set_source(x)?;
    let count = g.horizon.unwrap_or(4);
    let desc = match family {
        Some(f) => load::<FamilyDesc>(f, "family")?,
        None => match kind {
            PhiKind::Mad => FamilyDesc::Mad { name: "spiral".into() },
            PhiKind::Ed => FamilyDesc::Ed { name: "spiral-delta".into() },
            PhiKind::Fin => FamilyDesc::Fin { name: "spiral-full".into(), alpha: alpha_or(g, "w") },
        },
    };
    let (v, text) = match (kind, desc.build()?) {
        (PhiKind::Mad, FamilySpec::Mad(f)) => {
            let r = coding::phi_mad_blocks(&f, &*x, count)?;
            (json!({"family": f.name(), "records": r}), coding::render_mad(&r))
        }
        (PhiKind::Ed, FamilySpec::Ed(f)) => {
            let r = coding::phi_ed_blocks(&f, &*x, count)?;
            (json!({"family": "spiral-delta", "records": r}), coding::render_ed(&r))
        }
        (PhiKind::Fin, FamilySpec::Fin(f)) => {
            let (depth, width) = (g.depth.unwrap_or(3), g.width.unwrap_or(2));
            let r = coding::phi_fin_records(&f, x, count, depth, width)?;
            (json!({"family": f.name(), "alpha": f.alpha().to_string(), "records": r}), coding::render_fin(&r))
        }
        _ => return Err(Error::parse("family", "family kind does not match the subcommand")),
    };
    write_trace(&g.trace, &v)?;
    if g.ascii {
        emit_text(out, &text)?;
    } else {
        emit(out, &v)?;
    }
    Ok(0)
}

fn construct(g: &Global, kind: ConstructKind, x: &Option<String>, out: &mut dyn Write) -> Result<i32> {
    let h = set_source(x)?;
    let blocks = g.horizon.unwrap_or(10);
    let budget = 1 << 20;
    let parity = |r: &BlockAudit| if r.block % 2 == 0 { r.all_inside() } else { r.all_outside() };
    let (c, audit, ok): (Construction, Vec<BlockAudit>, bool) = match kind {
        ConstructKind::MadHide => {
            let fam = MadFamily::spiral();
            let a = synthetic::mad_blocks(&fam, h.clone(), synthetic::even());
            let c = cons::mad_hide(&fam, h, a.clone(), budget);
            let au = cons::audit_mad(&fam, &*c.y(), &a, blocks)?;
            let ok = au.iter().all(|r| r.all_inside());
            (c, au, ok)
        }
        ConstructKind::MadSplit => {
            let fam = MadFamily::spiral();
            let a = synthetic::mad_blocks(&fam, h.clone(), synthetic::all());
            let bound = synthetic::mad_bounds(&fam, h.clone(), synthetic::all());
            let c = cons::mad_split(&fam, h, a.clone(), bound, budget);
            let au = cons::audit_mad(&fam, &*c.y(), &a, blocks)?;
            // blocks alternate starting outside
            let ok = au.iter().all(|r| r.inside == r.block % 2);
            (c, au, ok)
        }
        ConstructKind::EdHide => {
            let fam = ed::spiral_delta_family();
            let a = synthetic::ed_columns(&fam, h.clone(), synthetic::even());
            let c = cons::ed_hide(&fam, h, a.clone(), budget);
            let au = cons::audit_ed(&fam, &*c.y(), &a, blocks)?;
            let ok = au.iter().all(|r| r.all_inside() && r.checked == r.block + 1);
            (c, au, ok)
        }
        ConstructKind::EdSplit => {
            let fam = ed::spiral_delta_family();
            let a = synthetic::ed_columns(&fam, h.clone(), synthetic::all());
            let x = cons::ed_hide(&fam, h.clone(), a.clone(), budget);
            let c = cons::ed_split(&fam, x.y(), a.clone(), synthetic::ed_bounds(h, synthetic::all()), budget);
            let au = cons::audit_ed(&fam, &*c.y(), &a, blocks)?;
            let ok = au.iter().all(|r| parity(r) && r.checked == r.block + 1);
            (c, au, ok)
        }
        ConstructKind::FinHide => {
            let fam = FinFamily::spiral_full(&alpha_or(g, "2"));
            let b = coding::phi_fin(&fam, h.clone())?;
            let c = cons::fin_hide(&fam, h, b.clone(), budget);
            let au = cons::audit_fin(&fam, c.y(), &|s| b.in_tree(s), blocks, g.depth.unwrap_or(3), g.width.unwrap_or(2))?;
            let ok = au.iter().all(|r| r.all_inside());
            (c, au, ok)
        }
        ConstructKind::FinSplit => {
            let fam = FinFamily::spiral_full(&alpha_or(g, "2"));
            let b = synthetic::fin_blocks(&fam, h.clone(), synthetic::even())?;
            let small = synthetic::fin_small(&fam, h.clone(), b.clone(), synthetic::even());
            let target = synthetic::fin_target(&fam, h.clone(), b.clone(), synthetic::even());
            let c = cons::fin_split(&fam, h, b, small, budget);
            let au = cons::audit_fin(&fam, c.y(), &target, blocks, g.depth.unwrap_or(2), g.width.unwrap_or(2))?;
            let ok = au.iter().all(parity);
            (c, au, ok)
        }
    };
    let name = kind.to_possible_value().expect("named").get_name().to_string();
    write_trace(&g.trace, &json!({"construction": name, "steps": c.trace()}))?;
    emit(out, &json!({"construction": name, "blocks": blocks, "passed": ok, "y": c.known(), "audit": audit}))?;
    Ok(if ok { 0 } else { 1 })
}

fn ed_cmd(g: &Global, cmd: &EdCmd, out: &mut dyn Write) -> Result<i32> {
    let horizon = g.horizon.unwrap_or(50);
    match cmd {
        EdCmd::Check { grid, cert } => {
            let grid = load::<GridDesc>(grid, "grid")?.build()?;
            let cert = match cert.as_str() {
                "plusplus" => EDCertificate::PlusPlus,
                c => match c.strip_prefix("small:").map(str::parse) {
                    Some(Ok(n)) => EDCertificate::Small { n },
                    _ => return Err(Error::parse("--cert", format!("{c:?} is neither small:N nor plusplus"))),
                },
            };
            emit(out, &ed::ed_member(&grid, &cert, horizon)?)?;
        }
        EdCmd::Refine { grid } => {
            let grid = load::<GridDesc>(grid, "grid")?.build()?;
            let r = ed::plusplus_refine(&grid, 1 << 16);
            let n = g.depth.unwrap_or(8) as u64;
            let cols: Vec<_> = (0..n)
                .map(|k| {
                    let m = r.col_index(k)?;
                    Ok(json!({"n": k, "column": m, "points": r.column_unchecked(m)?.prefix(k as usize + 2)?}))
                })
                .collect::<Result<_>>()?;
            emit(out, &json!({"grid": grid.name(), "columns": cols}))?;
        }
        EdCmd::Spiral => {
            let n = g.horizon.unwrap_or(4);
            let order: Vec<_> = (0..n * n).map(ed::spiral_pair).collect();
            let fam = ed::spiral_delta_family();
            let members: Vec<_> = (0..n)
                .map(|k| Ok(json!({"member": k, "columns": fam.get(k)?.dom().prefix(n as usize)?})))
                .collect::<Result<_>>()?;
            emit(out, &json!({"order": order, "members": members}))?;
        }
    }
    Ok(0)
}

fn mid_inputs(input: &MidInput) -> Result<(mid::IndepFamilySample, mid::OpenPair)> {
    let members = match &input.family {
        Some(f) => load::<Vec<crate::sets::UPSet>>(f, "family")?,
        None => mid::binary_digit_family(4),
    };
    let pair = match &input.pair {
        Some(p) => load::<mid::OpenPair>(p, "pair")?,
        None => mid::OpenPair { u: vec![vec![1], vec![2]], v: vec![vec![4], vec![8]], depth: 1 },
    };
    pair.validate()?;
    Ok((mid::IndepFamilySample::certify(members)?, pair))
}

fn parse_indices(text: &str, len: usize) -> Result<Vec<usize>> {
    parse_seq(text)?
        .into_iter()
        .map(|i| {
            usize::try_from(i)
                .ok()
                .filter(|&i| i < len)
                .ok_or_else(|| Error::parse("index", format!("{i} is not a family index")))
        })
        .collect()
}

fn mid_cmd(g: &Global, cmd: &MidCmd, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        MidCmd::Sigma { input, f, g: gs } => {
            let members = match &input.family {
                Some(fam) => load::<Vec<crate::sets::UPSet>>(fam, "family")?,
                None => mid::binary_digit_family(4),
            };
            let pair = mid::Pair { f: parse_indices(f, members.len())?, g: parse_indices(gs, members.len())? };
            if pair.f.iter().any(|i| pair.g.contains(i)) {
                return Err(Error::parse("--f/--g", "F and G must be disjoint"));
            }
            let s = pair.sigma(&members);
            emit(out, &json!({"sigma": s, "finite": s.is_finite()}))?;
        }
        MidCmd::Check { input } => {
            let members = match &input.family {
                Some(fam) => load::<Vec<crate::sets::UPSet>>(fam, "family")?,
                None => mid::binary_digit_family(4),
            };
            emit(out, &mid::independent_check(&members)?)?;
        }
        MidCmd::Member { input, x, side } => {
            let (sample, pair) = mid_inputs(input)?;
            let x: crate::sets::UPSet = load(x, "x")?;
            let side = match side {
                MidSide::F => mid::Side::F,
                MidSide::I => mid::Side::I,
            };
            emit(out, &mid::fi_uv_member(&x, &pair, &sample, side)?)?;
        }
        MidCmd::Suite { input } => {
            let (sample, pair) = mid_inputs(input)?;
            let probes = mid::probes(g.seed, g.horizon.unwrap_or(100) as usize, &pair, &sample);
            let r = mid::ideal_axiom_suite(&pair, &sample, &probes)?;
            write_trace(&g.trace, &r)?;
            emit(out, &r)?;
            return Ok(if r.passed() { 0 } else { 1 });
        }
        MidCmd::Split { x, a, ideal } => {
            let x: crate::sets::UPSet = load(x, "x")?;
            let a: crate::sets::UPSet = load(a, "a")?;
            let ideal: mid::IdealPredicate = load(ideal, "ideal")?;
            let (x1, x2, r) = mid::e_split_witness(&x, &a, &ideal)?;
            emit(out, &json!({"x1": x1, "x2": x2, "report": r}))?;
            return Ok(if r.opposite() { 0 } else { 1 });
        }
    }
    Ok(0)
}

/// Run a command and collect its output and exit code; used by tests.
pub fn run_captured(args: &[&str]) -> (i32, Vec<u8>, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["idealab"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (code, out, err)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok(args: &[&str]) -> serde_json::Value {
        let (code, out, err) = run_captured(args);
        assert_eq!(code, 0, "{}", String::from_utf8_lossy(&err));
        serde_json::from_slice(&out).unwrap()
    }

    #[test]
    fn pi_both_ways() {
        assert_eq!(ok(&["pi", "1,0"])["pi"], 1);
        assert_eq!(ok(&["pi", "--inverse", "2"])["seq"], "<0,1>");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_captured(&["pi", "1,x"]).0, 2);
        assert_eq!(run_captured(&["bogus"]).0, 2);
        assert_eq!(run_captured(&["salpha-check", "1", "--alpha", "w+"]).0, 2);
        assert_eq!(run_captured(&["pi", "--inverse", "99999999"]).0, 3);
        let bad = r#"{"kind":"upset","prefix":[1],"period":[]}"#;
        assert_eq!(run_captured(&["encode", "--set", bad]).0, 2);
        let (code, _, err) = run_captured(&["encode", "--set", "{\"kind\": }"]);
        assert_eq!(code, 2);
        assert!(String::from_utf8_lossy(&err).contains("set:1:"));
    }

    #[test]
    fn figure_one_blocks() {
        let v = ok(&["phi", "mad", "--x", r#"{"kind":"prefix","elements":[0,2,3,4,5,6]}"#, "--horizon", "2"]);
        assert_eq!(v["records"][0]["member"], 0);
        assert_eq!(v["records"][1]["index"], 4);
    }

    #[test]
    fn salpha_and_fin() {
        assert_eq!(ok(&["salpha-check", "3,0,0", "--alpha", "w"])["contains"], false);
        assert_eq!(ok(&["salpha-check", "2,0,1,0", "--alpha", "w"])["contains"], true);
        let d = r#"{"node":{"tail":"full"}}"#;
        assert_eq!(ok(&["fin-member", "--tree", d, "--alpha", "2"])["member"], false);
    }
}
