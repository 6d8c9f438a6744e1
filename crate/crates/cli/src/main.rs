use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use angled::a2c::{parse_a2c_with, serialize_a2c, ParseOptions};
use angled::angle_solver::{solve_angles, SolveOutcome};
use angled::builders::{build_seeded, DEFAULT_SEED};
use angled::collapse::{collapse_all, infinite_cyclic_decision, simply_connected_decision};
use angled::complex::{EdgeId, FaceId, VertexId};
use angled::curvature::curvature_report;
use angled::geometry::{path_svg, trace_straight, verify_straight, FacePoint, Verdict};
use angled::homotopy::{fundamental_presentation, h1, tietze_simplify};
use angled::link::{build_link, link_of_edge_interior};
use angled::weight_test::{classify, Mode};
use angled::{validate, Complex2, Error};
use clap::{Parser, Subcommand};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "angled", version, about = "Angled 2-complex toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the weight test; exit 1 if the complex fails in the given mode.
    Check {
        input: PathBuf,
        #[arg(long, default_value = "nonpositive")]
        mode: Mode,
        #[arg(long)]
        json: bool,
    },
    /// Per-vertex curvature and the Gauss-Bonnet residual.
    Curvature {
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Greedy collapse to a terminal complex.
    Collapse {
        input: PathBuf,
        /// Also run the simple-connectivity and infinite-cyclic decisions.
        #[arg(long)]
        decide_pi1: bool,
        /// Write the terminal complex as A2C.
        #[arg(short)]
        o: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// First homology group.
    Homology {
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Presentation of the fundamental group, raw and Tietze-simplified.
    Presentation {
        input: PathBuf,
        #[arg(long)]
        basepoint: Option<String>,
        /// Maximum number of generator eliminations.
        #[arg(long, default_value_t = 64)]
        budget: usize,
        #[arg(long)]
        json: bool,
    },
    /// Trace a straight path from a point inside a face.
    Trace {
        input: PathBuf,
        #[arg(long)]
        face: String,
        /// `x,y` in the face's realization.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// `dx,dy`.
        #[arg(long, allow_hyphen_values = true)]
        dir: String,
        #[arg(long, default_value_t = 64)]
        max_steps: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Write the trace and verdict as JSON (`-` for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Search for angles passing the weight test; exit 1 when infeasible.
    SolveAngles {
        input: PathBuf,
        #[arg(long, default_value = "nonpositive")]
        mode: Mode,
        /// Where to write the angled complex (default: stdout).
        #[arg(short)]
        o: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Write a builder complex as A2C.
    Build {
        spec: String,
        #[arg(short)]
        o: Option<PathBuf>,
        /// Seed for `fuzz:` specs.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Check every structural invariant; exit 1 on violations.
    Validate {
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print the link of a vertex or of an edge interior.
    Link {
        input: PathBuf,
        #[arg(long, conflicts_with = "edge", required_unless_present = "edge")]
        vertex: Option<String>,
        #[arg(long)]
        edge: Option<String>,
        #[arg(long)]
        dot: bool,
    },
}

/// Usage or input problems; exit code 2.
struct Fatal(String);

impl From<Error> for Fatal {
    fn from(e: Error) -> Self {
        Fatal(e.to_string())
    }
}

impl From<io::Error> for Fatal {
    fn from(e: io::Error) -> Self {
        Fatal(e.to_string())
    }
}

type Outcome = Result<u8, Fatal>;

fn read_input(path: &Path) -> Result<String, Fatal> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Fatal(format!("{}: {e}", path.display())))
    }
}

fn load(path: &Path, require_angles: bool) -> Result<Complex2, Fatal> {
    let text = read_input(path)?;
    parse_a2c_with(&text, ParseOptions { require_angles })
        .map_err(|e| Fatal(format!("{}: {e}", path.display())))
}

fn write_to(path: &Path, text: &str) -> Result<(), Fatal> {
    if path == Path::new("-") {
        io::stdout().write_all(text.as_bytes())?;
        Ok(())
    } else {
        std::fs::write(path, text).map_err(|e| Fatal(format!("{}: {e}", path.display())))
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn pair(s: &str, what: &str) -> Result<[f64; 2], Fatal> {
    let bad = || Fatal(format!("{what} must be `x,y`, got `{s}`"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(bad());
    }
    Ok([a, b])
}

fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(i, s)| format!("{s:<w$}", w = widths[i]))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct CheckReport<'a> {
    mode: Mode,
    passes: bool,
    #[serde(flatten)]
    report: &'a angled::weight_test::WeightTestReport,
    failing: Vec<&'a VertexId>,
}

fn check(input: &Path, mode: Mode, as_json: bool) -> Outcome {
    let x = load(input, true)?;
    let report = classify(&x);
    let passes = report.classification.passes(mode);
    let out = CheckReport {
        mode,
        passes,
        report: &report,
        failing: report.failing(mode).map(|r| &r.vertex).collect(),
    };
    if as_json {
        print!("{}", json(&out));
    } else {
        let mut rows = vec![vec!["vertex".into(), "girth".into(), "margin".into(), "witness".into()]];
        for v in &report.vertices {
            let dash = || "-".to_string();
            rows.push(vec![
                v.vertex.to_string(),
                v.girth.as_ref().map_or_else(dash, ToString::to_string),
                v.margin.as_ref().map_or_else(dash, ToString::to_string),
                v.witness.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
            ]);
        }
        print!("{}", table(&rows));
        println!("classification: {}", report.classification);
        println!("mode {mode}: {}", if passes { "pass" } else { "fail" });
        for v in &out.failing {
            println!("failing vertex: {v}");
        }
    }
    Ok(if passes { 0 } else { 1 })
}

fn curvature(input: &Path, as_json: bool) -> Outcome {
    let x = load(input, true)?;
    let r = curvature_report(&x);
    if as_json {
        print!("{}", json(&r));
        return Ok(0);
    }
    let mut rows = vec![vec!["vertex".into(), "angle_sum".into(), "chi_link".into(), "kappa".into()]];
    for v in &r.vertices {
        rows.push(vec![
            v.vertex.to_string(),
            v.angle_sum.to_string(),
            v.chi_link.to_string(),
            v.kappa.to_string(),
        ]);
    }
    print!("{}", table(&rows));
    println!("total curvature: {}", r.total);
    match &r.gauss_bonnet_residual {
        Some(res) => println!("gauss-bonnet residual: {res}"),
        None => println!("gauss-bonnet residual: n/a (not a disk diagram)"),
    }
    Ok(0)
}

#[derive(Serialize)]
struct Pi1Decisions {
    simply_connected: angled::collapse::Decision,
    infinite_cyclic: angled::collapse::Decision,
}

#[derive(Serialize)]
struct CollapseReport<'a> {
    #[serde(flatten)]
    trace: &'a angled::collapse::CollapseTrace,
    #[serde(skip_serializing_if = "Option::is_none")]
    pi1: Option<Pi1Decisions>,
}

fn collapse(input: &Path, decide: bool, out: Option<&Path>, as_json: bool) -> Outcome {
    let x = load(input, true)?;
    let trace = collapse_all(&x);
    let pi1 = decide.then(|| Pi1Decisions {
        simply_connected: simply_connected_decision(&x),
        infinite_cyclic: infinite_cyclic_decision(&x),
    });
    if let Some(path) = out {
        write_to(path, &serialize_a2c(&trace.terminal))?;
    }
    if as_json {
        print!("{}", json(&CollapseReport { trace: &trace, pi1 }));
        return Ok(0);
    }
    for (i, s) in trace.steps.iter().enumerate() {
        println!("{:>4}. collapse {s}", i + 1);
    }
    println!("terminal: {}", trace.terminal_class);
    if let Some(d) = pi1 {
        println!("simply connected: {} (terminal = {})", d.simply_connected, trace.terminal_class);
        println!("pi1 infinite cyclic: {} (terminal = {})", d.infinite_cyclic, trace.terminal_class);
    }
    Ok(0)
}

#[derive(Serialize)]
struct HomologyReport {
    group: String,
    #[serde(flatten)]
    invariants: angled::homotopy::AbelianInvariants,
    euler_characteristic: i64,
}

fn homology(input: &Path, as_json: bool) -> Outcome {
    let x = load(input, true)?;
    let inv = h1(&x);
    if as_json {
        print!(
            "{}",
            json(&HomologyReport {
                group: inv.to_string(),
                invariants: inv,
                euler_characteristic: x.euler_characteristic(),
            })
        );
    } else {
        println!("H1 = {inv}");
        println!("euler characteristic: {}", x.euler_characteristic());
    }
    Ok(0)
}

#[derive(Serialize)]
struct PresentationReport {
    raw: angled::homotopy::Presentation,
    simplified: angled::homotopy::Presentation,
    abelianization: String,
}

fn presentation(input: &Path, basepoint: Option<String>, budget: usize, as_json: bool) -> Outcome {
    let x = load(input, true)?;
    let base = basepoint.map(VertexId::from);
    let raw = fundamental_presentation(&x, base.as_ref())?;
    let simplified = tietze_simplify(&raw, budget);
    let abelianization = raw.abelianization().to_string();
    if as_json {
        print!("{}", json(&PresentationReport { raw, simplified, abelianization }));
    } else {
        println!("raw: <{raw}>");
        println!("simplified: <{simplified}>");
        println!("abelianization: {abelianization}");
    }
    Ok(0)
}

#[derive(Serialize)]
struct TraceReport<'a> {
    trace: &'a angled::geometry::Trace<f64>,
    verdict: &'a Verdict,
}

#[allow(clippy::too_many_arguments)]
fn trace(
    input: &Path,
    face: String,
    point: &str,
    dir: &str,
    max_steps: usize,
    svg: Option<&Path>,
    json_out: Option<&Path>,
) -> Outcome {
    let x = load(input, true)?;
    let start = FacePoint {
        face: FaceId::from(face),
        point: pair(point, "--point")?,
    };
    let t = trace_straight(&x, &start, pair(dir, "--dir")?, max_steps)?;
    let verdict = verify_straight(&x, &t.path)?;
    if let Some(path) = svg {
        write_to(path, &path_svg(&x, &t.path)?)?;
    }
    if let Some(path) = json_out {
        write_to(path, &json(&TraceReport { trace: &t, verdict: &verdict }))?;
    }
    if json_out != Some(Path::new("-")) {
        let mut s = String::new();
        for (i, seg) in t.path.segments.iter().enumerate() {
            let carrier = match &seg.carrier {
                angled::geometry::Carrier::Face(f) => format!("face {f}"),
                angled::geometry::Carrier::Edge(e) => format!("edge {e}"),
            };
            let _ = writeln!(
                s,
                "{:>4}. {carrier}: ({:.6}, {:.6}) -> ({:.6}, {:.6})",
                i + 1,
                seg.start[0],
                seg.start[1],
                seg.end[0],
                seg.end[1]
            );
        }
        let _ = writeln!(s, "termination: {} ({})", t.termination.reason, t.termination.detail);
        match &verdict {
            Verdict::Straight => s.push_str("verdict: straight\n"),
            Verdict::Violation { breakpoint, distance, reason } => {
                let d = distance.as_ref().map_or_else(|| "unreachable".to_string(), ToString::to_string);
                let _ = writeln!(s, "verdict: violation at breakpoint {breakpoint} (distance {d}): {reason}");
            }
        }
        print!("{s}");
    }
    Ok(if verdict.is_straight() { 0 } else { 1 })
}

fn solve(input: &Path, mode: Mode, out: Option<&Path>, as_json: bool) -> Outcome {
    let x = load(input, false)?;
    let outcome = solve_angles(&x, mode)?;
    if as_json {
        print!("{}", json(&outcome));
    }
    match &outcome {
        SolveOutcome::Feasible { complex, margin, iterations, .. } => {
            let text = serialize_a2c(complex);
            match out {
                Some(p) => {
                    write_to(p, &text)?;
                    if !as_json {
                        println!("feasible in mode {mode}: margin {margin}, {iterations} iterations");
                    }
                }
                None if !as_json => print!("{text}"),
                None => {}
            }
            Ok(0)
        }
        SolveOutcome::Infeasible { certificate, iterations } => {
            if !as_json {
                println!("infeasible in mode {mode} after {iterations} iterations");
                if certificate.demand > certificate.supply {
                    println!("demand {} exceeds supply {}", certificate.demand, certificate.supply);
                } else {
                    println!("demand {} meets supply {} with no room for strict slack", certificate.demand, certificate.supply);
                }
                for c in &certificate.cycles {
                    let corners: Vec<String> = c.cycle.corners.iter().map(ToString::to_string).collect();
                    println!("  cycle at {} x{}: {}", c.cycle.vertex, c.multiplier, corners.join(" "));
                }
                for f in &certificate.faces {
                    println!("  face {} x{}", f.face, f.multiplier);
                }
                for (c, s) in &certificate.corner_slack {
                    println!("  slack {c}: {s}");
                }
            }
            Ok(1)
        }
    }
}

fn build(spec: &str, out: Option<&Path>, seed: u64) -> Outcome {
    let x = build_seeded(spec, seed)?;
    write_to(out.unwrap_or(Path::new("-")), &serialize_a2c(&x))?;
    Ok(0)
}

fn validate_cmd(input: &Path, as_json: bool) -> Outcome {
    let x = load(input, true)?;
    let r = validate(&x);
    if as_json {
        print!("{}", json(&r));
    } else if r.ok {
        println!("valid");
    } else {
        for v in &r.violations {
            println!("{}: {}", v.rule, v.message);
        }
    }
    Ok(if r.ok { 0 } else { 1 })
}

fn link(input: &Path, vertex: Option<String>, edge: Option<String>, dot: bool) -> Outcome {
    let x = load(input, true)?;
    let (name, l) = match (vertex, edge) {
        (Some(v), _) => {
            let l = build_link(&x, &VertexId::from(v.clone()))?;
            (v, l)
        }
        (None, Some(e)) => {
            let l = link_of_edge_interior(&x, &EdgeId::from(e.clone()))?;
            (e, l)
        }
        (None, None) => return Err(Fatal("one of --vertex or --edge is required".into())),
    };
    if dot {
        print!("{}", l.to_dot(&name));
    } else {
        print!("{}", json(&l));
    }
    Ok(0)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Check { input, mode, json } => check(&input, mode, json),
        Command::Curvature { input, json } => curvature(&input, json),
        Command::Collapse { input, decide_pi1, o, json } => collapse(&input, decide_pi1, o.as_deref(), json),
        Command::Homology { input, json } => homology(&input, json),
        Command::Presentation { input, basepoint, budget, json } => presentation(&input, basepoint, budget, json),
        Command::Trace { input, face, point, dir, max_steps, svg, json } => {
            trace(&input, face, &point, &dir, max_steps, svg.as_deref(), json.as_deref())
        }
        Command::SolveAngles { input, mode, o, json } => solve(&input, mode, o.as_deref(), json),
        Command::Build { spec, o, seed } => build(&spec, o.as_deref(), seed),
        Command::Validate { input, json } => validate_cmd(&input, json),
        Command::Link { input, vertex, edge, dot } => link(&input, vertex, edge, dot),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Fatal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
