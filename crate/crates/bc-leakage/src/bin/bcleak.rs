//! Command-line front end: region frontiers, the ternary-erasure case
//! study, Fourier–Motzkin projection of inequality systems, and the
//! verification suites. Every output file records the invocation and
//! seed that produced it, so reruns are byte-identical.

use bc_leakage::blackwell::{
    bwc_frontier, bwc_saturation_threshold, bwc_shapes, bwc_sumrate_curve, BlackwellParams,
};
use bc_leakage::channel::{blackwell, Dmbc};
use bc_leakage::lab::{appendix_a_suite, appendix_b_suite, appendix_c_check, reduction_suite};
use bc_leakage::regions::{LeakagePair, RegionId};
use bc_leakage::symbolic::{
    achievability_system, inner_bound_system, parse_system, IneqSystem, AUX_ELIMINATION_ORDER,
};
use bc_leakage::union::{union_frontier, FrontierCurve, SearchBudget};
use bc_leakage::pmf::Pmf;
use clap::{Args, Parser, Subcommand};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "bcleak", version, about = "Rate regions of two-receiver broadcast channels under leakage budgets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Trace a region's frontier for a channel and leakage budget
    Region(RegionArgs),
    /// Emit the ternary-erasure case-study tables and figure data
    Blackwell(BlackwellArgs),
    /// Project an inequality system by Fourier–Motzkin elimination
    Fme(FmeArgs),
    /// Run the verification suites and report pass/fail
    Verify(VerifyArgs),
}

#[derive(Args)]
struct RegionArgs {
    /// Channel: `blackwell` or path to a channel JSON file
    #[arg(long)]
    channel: String,
    /// Region identifier (e.g. inner, sd, det, ck)
    #[arg(long)]
    id: String,
    /// Leakage budget toward receiver 2, in bits, or `inf`
    #[arg(long, default_value = "inf")]
    l1: String,
    /// Leakage budget toward receiver 1, in bits, or `inf`
    #[arg(long, default_value = "inf")]
    l2: String,
    /// Simplex lattice steps for the auxiliary-law grid
    #[arg(long, default_value_t = 6)]
    grid: usize,
    /// Number of random auxiliary laws
    #[arg(long, default_value_t = 120)]
    samples: usize,
    /// RNG seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Auxiliary alphabet size
    #[arg(long, default_value_t = 2)]
    aux_card: usize,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Also emit a minimal SVG polyline of the frontier
    #[arg(long)]
    svg: bool,
}

#[derive(Args)]
struct BlackwellArgs {
    /// Input-law grid resolution for frontier tracing
    #[arg(long, default_value_t = 120)]
    grid: usize,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Also emit SVG polylines of the frontiers
    #[arg(long)]
    svg: bool,
}

#[derive(Args)]
struct FmeArgs {
    /// Built-in system name (`achievability`)
    #[arg(long, conflicts_with = "input")]
    builtin: Option<String>,
    /// Path to an inequality-system text file
    #[arg(long)]
    input: Option<PathBuf>,
    /// Comma-separated variables to eliminate (defaults to the built-in
    /// auxiliary-rate order for `--builtin achievability`)
    #[arg(long, value_delimiter = ',')]
    eliminate: Vec<String>,
    /// Reference system to compare the projection against
    #[arg(long)]
    reference: Option<PathBuf>,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Monte-Carlo trials per lift suite
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// RNG seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Deterministic channel fixture for the specialization check
    /// (`blackwell` or a channel JSON path)
    #[arg(long, default_value = "blackwell")]
    channel: String,
    /// Output directory for the JSON report
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let invocation = std::env::args().collect::<Vec<_>>().join(" ");
    let result = match cli.command {
        Command::Region(a) => cmd_region(&a, &invocation),
        Command::Blackwell(a) => cmd_blackwell(&a, &invocation),
        Command::Fme(a) => cmd_fme(&a, &invocation),
        Command::Verify(a) => cmd_verify(&a, &invocation),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn parse_budget_value(text: &str) -> Result<f64, String> {
    if text.eq_ignore_ascii_case("inf") {
        return Ok(f64::INFINITY);
    }
    let v: f64 = text
        .parse()
        .map_err(|_| format!("leakage budget `{text}` is not a number or `inf`"))?;
    if v < 0.0 {
        return Err(format!("leakage budget {v} is negative"));
    }
    Ok(v)
}

fn load_channel(spec: &str) -> Result<Dmbc, String> {
    if spec == "blackwell" {
        return Ok(blackwell());
    }
    let text = fs::read_to_string(spec)
        .map_err(|e| format!("cannot read channel file `{spec}`: {e}"))?;
    Dmbc::from_json(&text).map_err(|e| format!("bad channel file `{spec}`: {e}"))
}

fn parse_region_id(text: &str) -> Result<RegionId, String> {
    RegionId::ALL
        .iter()
        .copied()
        .find(|id| id.id_str() == text)
        .ok_or_else(|| {
            let known: Vec<&str> = RegionId::ALL.iter().map(|id| id.id_str()).collect();
            format!("unknown region `{text}` (known: {})", known.join(", "))
        })
}

fn header(invocation: &str, seed: u64) -> String {
    format!("# invocation: {invocation}\n# seed: {seed}\n")
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), String> {
    fs::create_dir_all(dir).map_err(|e| format!("cannot create `{}`: {e}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| format!("cannot write `{}`: {e}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn frontier_svg(curve: &FrontierCurve) -> String {
    let (w, h, pad) = (480.0, 480.0, 40.0);
    let max = curve
        .points()
        .iter()
        .flat_map(|p| [p.r1, p.r2])
        .fold(1e-9f64, f64::max);
    let scale = (w - 2.0 * pad) / max;
    let pts: Vec<String> = curve
        .points()
        .iter()
        .map(|p| format!("{:.2},{:.2}", pad + p.r1 * scale, h - pad - p.r2 * scale))
        .collect();
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\">\n\
         <polyline fill=\"none\" stroke=\"black\" points=\"{}\"/>\n</svg>\n",
        pts.join(" ")
    )
}

fn cmd_region(a: &RegionArgs, invocation: &str) -> Result<ExitCode, String> {
    let channel = load_channel(&a.channel)?;
    let id = parse_region_id(&a.id)?;
    let leakage = LeakagePair::new(parse_budget_value(&a.l1)?, parse_budget_value(&a.l2)?);
    let budget = SearchBudget {
        grid: a.grid,
        samples: a.samples,
        seed: a.seed,
        ..SearchBudget::default()
    };
    let curve = union_frontier(id, &channel, leakage, a.aux_card, &budget)
        .map_err(|e| e.to_string())?;
    let hdr = header(invocation, a.seed);
    write_file(
        &a.out,
        &format!("{}_frontier.csv", id.id_str()),
        &format!("{hdr}{}", curve.to_csv()),
    )?;
    let system_json = serde_json::json!({
        "invocation": invocation,
        "seed": a.seed,
        "region": id.id_str(),
        "rate_axes": id.rate_axes(),
        "aux_axes": id.aux_axes(),
        "system": id.system().render(),
    });
    write_file(
        &a.out,
        &format!("{}_system.json", id.id_str()),
        &format!("{}\n", serde_json::to_string_pretty(&system_json).unwrap()),
    )?;
    if a.svg {
        write_file(
            &a.out,
            &format!("{}_frontier.svg", id.id_str()),
            &frontier_svg(&curve),
        )?;
    }
    Ok(ExitCode::SUCCESS)
}

const STUDY_BUDGETS: [f64; 4] = [0.0, 0.05, 0.1, 0.4];

fn cmd_blackwell(a: &BlackwellArgs, invocation: &str) -> Result<ExitCode, String> {
    let hdr = header(invocation, 0);
    let fan = 121;
    // Three frontier families: budget on message 1 only, on message 2
    // only, and a symmetric budget on both.
    let families: [(&str, fn(f64) -> LeakagePair); 3] = [
        ("fig3a", |l| LeakagePair::new(l, f64::INFINITY)),
        ("fig3b", |l| LeakagePair::new(f64::INFINITY, l)),
        ("fig3c", |l| LeakagePair::new(l, l)),
    ];
    for (name, pair_of) in families {
        let mut csv = format!("{hdr}l,r1,r2\n");
        for l in STUDY_BUDGETS {
            let curve = bwc_frontier(pair_of(l), a.grid, fan);
            for p in curve.points() {
                csv.push_str(&format!("{l},{:.12},{:.12}\n", p.r1, p.r2));
            }
        }
        write_file(&a.out, &format!("{name}.csv"), &csv)?;
        if a.svg {
            let curve = bwc_frontier(pair_of(STUDY_BUDGETS[3]), a.grid, fan);
            write_file(&a.out, &format!("{name}.svg"), &frontier_svg(&curve))?;
        }
    }

    // Sum-rate capacity as a function of the symmetric budget.
    let l_grid: Vec<f64> = (0..=200).map(|k| k as f64 * 0.001).collect();
    let curve = bwc_sumrate_curve(&l_grid);
    let mut csv = format!(
        "{hdr}# breakpoint: {:.6}\n# plateau: {:.6}\nl,sum_rate\n",
        curve.breakpoint, curve.plateau
    );
    for (l, s) in &curve.points {
        csv.push_str(&format!("{l},{s:.12}\n"));
    }
    write_file(&a.out, "fig4.csv", &csv)?;

    // Region shapes at the uniform input law for the four budget corners.
    let p = BlackwellParams::new(1.0 / 3.0, 1.0 / 3.0).map_err(|e| e.to_string())?;
    let shapes: Vec<serde_json::Value> = bwc_shapes(p)
        .into_iter()
        .map(|(name, poly)| {
            serde_json::json!({
                "name": name,
                "polytope": serde_json::from_str::<serde_json::Value>(&poly.to_json())
                    .expect("polytope json"),
            })
        })
        .collect();
    let fig6 = serde_json::json!({
        "invocation": invocation,
        "seed": 0,
        "alpha": 1.0 / 3.0,
        "beta": 1.0 / 3.0,
        "shapes": shapes,
    });
    write_file(
        &a.out,
        "fig6.json",
        &format!("{}\n", serde_json::to_string_pretty(&fig6).unwrap()),
    )?;

    // Saturation thresholds of the symmetric-budget region.
    let mut table = format!("{hdr}l,threshold\n");
    for l in STUDY_BUDGETS {
        table.push_str(&format!(
            "{l},{:.5}\n",
            bwc_saturation_threshold(l, 4e-4)
        ));
    }
    write_file(&a.out, "thresholds.csv", &table)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_fme(a: &FmeArgs, invocation: &str) -> Result<ExitCode, String> {
    let (system, default_order): (IneqSystem, Vec<String>) = match (&a.builtin, &a.input) {
        (Some(name), None) if name == "achievability" => (
            achievability_system(),
            AUX_ELIMINATION_ORDER.iter().map(|s| s.to_string()).collect(),
        ),
        (Some(name), None) => return Err(format!("unknown built-in system `{name}`")),
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read `{}`: {e}", path.display()))?;
            (parse_system(&text).map_err(|e| e.to_string())?, Vec::new())
        }
        _ => return Err("exactly one of --builtin or --input is required".into()),
    };
    let order = if a.eliminate.is_empty() {
        default_order
    } else {
        a.eliminate.clone()
    };
    let order_refs: Vec<&str> = order.iter().map(|s| s.as_str()).collect();
    let projected = system.eliminate_all(&order_refs);
    let hdr = header(invocation, 0);
    let mut out = format!(
        "{hdr}# eliminated: {}\n{}",
        order.join(","),
        projected.render()
    );

    let reference = match (&a.builtin, &a.reference) {
        (_, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read `{}`: {e}", path.display()))?;
            Some(parse_system(&text).map_err(|e| e.to_string())?)
        }
        (Some(_), None) => Some(inner_bound_system()),
        (None, None) => None,
    };
    let verdict = reference.as_ref().map(|r| projected.canonical_equal(r));
    if let Some(v) = verdict {
        out.push_str(&format!("# canonical_equal: {v}\n"));
        println!("canonical_equal: {v}");
    }
    write_file(&a.out, "projection.txt", &out)?;
    Ok(if verdict == Some(false) {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_verify(a: &VerifyArgs, invocation: &str) -> Result<ExitCode, String> {
    let mut failed: Vec<String> = Vec::new();
    let mut checks: Vec<serde_json::Value> = Vec::new();

    let report = reduction_suite().map_err(|e| e.to_string())?;
    for c in &report.checks {
        if !c.pass {
            failed.push(c.name.clone());
        }
        checks.push(serde_json::to_value(c).unwrap());
    }

    for (name, suite) in [
        ("lift-sum-form-to-superposition", appendix_a_suite(a.trials, a.seed)),
        ("lift-to-csiszar-korner", appendix_b_suite(a.trials, a.seed + 1)),
    ] {
        let reports = suite.map_err(|e| e.to_string())?;
        let worst = reports.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
        let pass = reports.iter().all(|r| r.member);
        if !pass {
            failed.push(name.to_string());
        }
        checks.push(serde_json::json!({
            "name": name,
            "trials": a.trials,
            "max_deviation": -worst,
            "pass": pass,
        }));
    }

    let channel = load_channel(&a.channel)?;
    let nx = channel.x_size;
    let px = Pmf::new(vec![1.0 / nx as f64; nx]).map_err(|e| e.to_string())?;
    let det_pass = matches!(
        appendix_c_check(&channel, &px, LeakagePair::new(0.1, 0.1)),
        Ok(true)
    );
    if !det_pass {
        failed.push("deterministic-specialization".into());
    }
    checks.push(serde_json::json!({
        "name": "deterministic-specialization",
        "trials": 1,
        "max_deviation": if det_pass { 0.0 } else { f64::NAN },
        "pass": det_pass,
    }));

    let fme_pass = {
        let order: Vec<&str> = AUX_ELIMINATION_ORDER.to_vec();
        achievability_system()
            .eliminate_all(&order)
            .canonical_equal(&inner_bound_system())
    };
    if !fme_pass {
        failed.push("projection-matches-reference".into());
    }
    checks.push(serde_json::json!({
        "name": "projection-matches-reference",
        "trials": 1,
        "max_deviation": if fme_pass { 0.0 } else { f64::NAN },
        "pass": fme_pass,
    }));

    let doc = serde_json::json!({
        "invocation": invocation,
        "seed": a.seed,
        "trials": a.trials,
        "checks": checks,
        "all_pass": failed.is_empty(),
    });
    write_file(
        &a.out,
        "verify.json",
        &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()),
    )?;
    if failed.is_empty() {
        println!("verify: all checks passed");
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("verify: failing checks: {}", failed.join(", "));
        Ok(ExitCode::from(1))
    }
}
