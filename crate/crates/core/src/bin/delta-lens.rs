use clap::{Args, Parser, Subcommand, ValueEnum};
use delta_lens::census::{census_identity_check, save_catalog, CatalogSource, DistributionReport, ZeroCatalog, FORMAT_VERSION};
use delta_lens::contours::{
    argument_principle_box, seed_t, trace_amplitude_one_line, trace_phase_zero_line, write_trace_csv, LineKind,
    PhasePath, TraceConfig,
};
use delta_lens::critical::{singular_points_delta5, CriticalPoint, SingularKind, MAX_T};
use delta_lens::evalcore::{beta_l, dirichlet_l, zeta, Discriminant, EvalOptions};
use delta_lens::quotient::{delta5, delta_q, f5, fold_mod_pi, lattice_sum_c, QuotientKind};
use delta_lens::render::{locate_quadrant_meeting_points, render, write_ppm, PortraitMode, PortraitSpec};
use delta_lens::verify::{select, Verifier};
use delta_lens::{Complex64, Error, Result};
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "delta-lens", version, about = "Zeros, poles, phase lines and portraits of Delta5")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Requested significant digits for series evaluation (1..=15).
    #[arg(long, default_value_t = 15, global = true)]
    target_digits: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one function at a point.
    Eval(EvalArgs),
    /// Find critical-line zeros (and poles, for delta5) and write a catalog.
    Zeros(ZerosArgs),
    /// Trace a phase-zero or amplitude-one line down to the critical line.
    Trace(TraceArgs),
    /// Count zeros minus poles inside the box between two phase lines.
    BoxCount(BoxArgs),
    /// Check the doubling identity of the zero counts at height T.
    Census(CensusArgs),
    /// Render a phase or amplitude portrait as a binary PPM file.
    Portrait(PortraitArgs),
    /// Run the acceptance criteria.
    VerifyAll(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Function {
    Zeta,
    Beta,
    Lq,
    Delta5,
    Deltaq,
    F5,
    C,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long, value_enum)]
    function: Function,
    /// Point as "a+bi", "a-bi" or "a".
    #[arg(long, allow_hyphen_values = true)]
    s: String,
    /// Discriminant for lq and deltaq.
    #[arg(long)]
    q: Option<u32>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Source {
    Zeta,
    Beta,
    Delta5,
}

#[derive(Args)]
struct ZerosArgs {
    #[arg(long, value_enum)]
    source: Source,
    #[arg(long)]
    t_max: f64,
    #[arg(long, default_value_t = 0.01)]
    scan_step: f64,
    /// Catalog file (JSON lines).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TraceKind {
    PhaseZero,
    AmplitudeOne,
}

#[derive(Args)]
struct TraceArgs {
    #[arg(long, value_enum, default_value_t = TraceKind::PhaseZero)]
    kind: TraceKind,
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 12.0)]
    sigma_start: f64,
    #[arg(long, default_value_t = 0.02)]
    step: f64,
    /// CSV file for the traced points.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoxArgs {
    #[arg(long)]
    n_low: u32,
    #[arg(long)]
    n_high: u32,
    #[arg(long, default_value_t = 12.0)]
    sigma_right: f64,
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long = "T", alias = "t")]
    t: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Phase,
    Amplitude,
}

#[derive(Args)]
struct PortraitArgs {
    #[arg(long, value_enum, default_value_t = Mode::Phase)]
    mode: Mode,
    /// Real range "lo:hi".
    #[arg(long, allow_hyphen_values = true, default_value = "-1:2")]
    sigma: String,
    /// Imaginary range "lo:hi".
    #[arg(long, allow_hyphen_values = true, default_value = "0:60")]
    t: String,
    /// Image size "WxH".
    #[arg(long, default_value = "600x1200")]
    size: String,
    #[arg(long, default_value_t = 4)]
    q: u32,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Criterion names or numbers; repeat or separate with commas.
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
}

/// Numbers rounded to 15 significant digits.
fn sig15(x: f64) -> String {
    let rounded: f64 = format!("{x:.14e}").parse().unwrap_or(x);
    if rounded != 0.0 && !(1e-4..1e15).contains(&rounded.abs()) {
        format!("{rounded:e}")
    } else {
        format!("{rounded}")
    }
}

fn parse_complex(text: &str) -> Result<Complex64> {
    let bad = || Error::DomainError(format!("cannot parse complex number '{text}'"));
    let body = text.trim().replace(' ', "");
    let Some(body) = body.strip_suffix('i') else {
        return body.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'))
        .ok_or_else(bad)?;
    let re = body[..split].parse::<f64>().map_err(|_| bad())?;
    let im = match &body[split..] {
        "+" => 1.0,
        "-" => -1.0,
        tail => tail.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

fn parse_range(text: &str) -> Result<(f64, f64)> {
    let bad = || Error::DomainError(format!("cannot parse range '{text}', expected lo:hi"));
    let (lo, hi) = text.split_once(':').ok_or_else(bad)?;
    Ok((lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?))
}

fn parse_size(text: &str) -> Result<(u32, u32)> {
    let bad = || Error::DomainError(format!("cannot parse size '{text}', expected WxH"));
    let (w, h) = text.split_once(['x', 'X']).ok_or_else(bad)?;
    Ok((w.trim().parse().map_err(|_| bad())?, h.trim().parse().map_err(|_| bad())?))
}

/// A command's result: JSON for `--format json`, text lines otherwise, and
/// optional CSV.
struct Report {
    json: Value,
    text: Vec<String>,
    csv: Option<String>,
    passed: bool,
}

impl Report {
    fn new(json: Value, text: Vec<String>) -> Self {
        Report { json, text, csv: None, passed: true }
    }
}

fn kind_letter(kind: SingularKind) -> &'static str {
    match kind {
        SingularKind::Zero => "Z",
        SingularKind::Pole => "P",
    }
}

fn catalog_for(t: f64) -> Result<Vec<CriticalPoint>> {
    singular_points_delta5(0.0, t.clamp(60.0, MAX_T), 0.01)
}

fn cmd_eval(args: &EvalArgs, opts: &EvalOptions) -> Result<Report> {
    let s = parse_complex(&args.s)?;
    let need_q = || args.q.ok_or_else(|| Error::DomainError("--q is required for this function".into()));
    let v = match args.function {
        Function::Zeta => zeta(s, opts)?,
        Function::Beta => beta_l(s, opts)?,
        Function::Lq => dirichlet_l(Discriminant::new(need_q()?)?, s, opts)?,
        Function::Delta5 => delta5(s, opts)?,
        Function::Deltaq => delta_q(QuotientKind::new(need_q()?)?, s, opts)?,
        Function::F5 => f5(s)?,
        Function::C => lattice_sum_c(s, opts)?,
    };
    let zero_note = v == Complex64::new(0.0, 0.0) && matches!(args.function, Function::Delta5 | Function::Deltaq);
    let note = zero_note.then_some(if args.function == Function::Delta5 { "zero of Delta5" } else { "zero of Delta_q" });
    let (folded, unfolded) = (fold_mod_pi(v.arg()), v.arg());
    let mut text = vec![
        format!("re {}", sig15(v.re)),
        format!("im {}", sig15(v.im)),
        format!("modulus {}", sig15(v.norm())),
        format!("phase {}", sig15(folded)),
        format!("phase_unfolded {}", sig15(unfolded)),
    ];
    if let Some(n) = note {
        text.push(format!("note {n}"));
    }
    let json = json!({
        "format_version": FORMAT_VERSION,
        "s": {"re": s.re, "im": s.im},
        "re": v.re,
        "im": v.im,
        "modulus": v.norm(),
        "phase": folded,
        "phase_unfolded": unfolded,
        "note": note,
    });
    let mut report = Report::new(json, text);
    report.csv = Some(format!(
        "re,im,modulus,phase,phase_unfolded\n{},{},{},{},{}\n",
        sig15(v.re),
        sig15(v.im),
        sig15(v.norm()),
        sig15(folded),
        sig15(unfolded)
    ));
    Ok(report)
}

fn cmd_zeros(args: &ZerosArgs) -> Result<Report> {
    let source = match args.source {
        Source::Zeta => CatalogSource::Zeta,
        Source::Beta => CatalogSource::Beta,
        Source::Delta5 => CatalogSource::Delta5Merged,
    };
    let catalog = ZeroCatalog::generate(source, args.t_max, args.scan_step)?;
    if let Some(path) = &args.out {
        save_catalog(&catalog, path)?;
    }
    let e = &catalog.entries;
    let kinds: Vec<&str> = e.iter().map(|p| kind_letter(p.kind)).collect();
    let mut text = vec![format!("count {}", e.len())];
    if let (Some(first), Some(last)) = (e.first(), e.last()) {
        text.push(format!("first {}", sig15(first.t)));
        text.push(format!("last {}", sig15(last.t)));
    }
    if source == CatalogSource::Delta5Merged {
        text.push(format!("kinds {}", kinds.join(",")));
    }
    let json = json!({
        "format_version": FORMAT_VERSION,
        "source": source,
        "t_max": args.t_max,
        "count": e.len(),
        "first": e.first().map(|p| p.t),
        "last": e.last().map(|p| p.t),
        "kinds": kinds.join(","),
        "catalog": args.out.as_ref().map(|p| p.display().to_string()),
    });
    let mut report = Report::new(json, text);
    let rows: Vec<String> = e.iter().map(|p| format!("{},{}", sig15(p.t), kind_letter(p.kind))).collect();
    report.csv = Some(format!("t,kind\n{}\n", rows.join("\n")));
    Ok(report)
}

fn cmd_trace(args: &TraceArgs) -> Result<Report> {
    if args.n == 0 {
        return Err(Error::DomainError("--n must be a positive integer".into()));
    }
    let kind = match args.kind {
        TraceKind::PhaseZero => LineKind::PhaseZero,
        TraceKind::AmplitudeOne => LineKind::AmplitudeOne,
    };
    let catalog = catalog_for(seed_t(kind, args.n) + 20.0)?;
    let cfg = TraceConfig { sigma_start: args.sigma_start, step: args.step };
    let path: PhasePath = match kind {
        LineKind::PhaseZero => trace_phase_zero_line(args.n, &cfg, &catalog)?,
        LineKind::AmplitudeOne => trace_amplitude_one_line(args.n, &cfg, &catalog)?,
    };
    let mut csv = Vec::new();
    write_trace_csv(&path, &mut csv)?;
    if let Some(out) = &args.out {
        std::fs::write(out, &csv)?;
    }
    let hit = path.terminus_point;
    let mut text = vec![format!("points {}", path.points.len()), format!("terminus_t {}", sig15(path.terminus_t))];
    match (kind, hit) {
        (LineKind::PhaseZero, Some(p)) => text.push(format!("matched {:?} at t = {}", p.kind, sig15(p.t))),
        (LineKind::AmplitudeOne, _) => {
            if let Some(w) = catalog.windows(2).find(|w| w[0].t < path.terminus_t && path.terminus_t < w[1].t) {
                text.push(format!("between {} and {}", sig15(w[0].t), sig15(w[1].t)));
            }
        }
        _ => {}
    }
    let json = json!({
        "format_version": FORMAT_VERSION,
        "kind": match kind { LineKind::PhaseZero => "phase_zero", LineKind::AmplitudeOne => "amplitude_one" },
        "n": args.n,
        "points": path.points.len(),
        "terminus_t": path.terminus_t,
        "terminus_point": hit,
        "csv": args.out.as_ref().map(|p| p.display().to_string()),
    });
    let mut report = Report::new(json, text);
    report.csv = Some(String::from_utf8_lossy(&csv).into_owned());
    Ok(report)
}

fn cmd_box_count(args: &BoxArgs) -> Result<Report> {
    if args.n_low == 0 || args.n_high <= args.n_low {
        return Err(Error::DomainError(format!("need 1 <= n_low < n_high, got {} and {}", args.n_low, args.n_high)));
    }
    let catalog = catalog_for(seed_t(LineKind::PhaseZero, args.n_high) + 20.0)?;
    let r = argument_principle_box(args.n_low, args.n_high, args.sigma_right, &catalog)?;
    let text = vec![
        format!("zeros_minus_poles {}", r.zeros_minus_poles),
        format!("total_arg_change {}", sig15(r.total_arg_change)),
        format!("max_step_jump {}", sig15(r.max_step_jump)),
    ];
    let mut json = serde_json::to_value(r).map_err(|e| Error::DomainError(e.to_string()))?;
    json["format_version"] = json!(FORMAT_VERSION);
    let mut report = Report::new(json, text);
    report.csv = Some(format!(
        "zeros_minus_poles,total_arg_change,max_step_jump\n{},{},{}\n",
        r.zeros_minus_poles,
        sig15(r.total_arg_change),
        sig15(r.max_step_jump)
    ));
    Ok(report)
}

fn report_json(r: &DistributionReport) -> Value {
    json!({"t": r.t, "main_term": r.main_term, "counted": r.counted, "residual": r.residual})
}

fn cmd_census(args: &CensusArgs) -> Result<Report> {
    if !(args.t > 0.0) || 2.0 * args.t > MAX_T {
        return Err(Error::DomainError(format!("T must be in (0, {}], got {}", MAX_T / 2.0, args.t)));
    }
    let zeta = ZeroCatalog::generate(CatalogSource::Zeta, (2.0 * args.t).max(1.0), 0.01)?;
    let beta = ZeroCatalog::generate(CatalogSource::Beta, args.t.max(1.0), 0.01)?;
    let (doubled, split) = census_identity_check(args.t, &zeta, &beta)?;
    let difference = doubled.counted as i64 - split.counted as i64;
    let text = vec![
        format!("N_zeta(2T) {} (main {})", doubled.counted, sig15(doubled.main_term)),
        format!("N_zeta(T) + N_beta(T) {} (main {})", split.counted, sig15(split.main_term)),
        format!("difference {difference}"),
    ];
    let json = json!({
        "format_version": FORMAT_VERSION,
        "T": args.t,
        "doubled": report_json(&doubled),
        "split": report_json(&split),
        "difference": difference,
    });
    let mut report = Report::new(json, text);
    report.passed = difference.abs() <= 1;
    report.csv = Some(format!(
        "T,doubled_counted,doubled_main,split_counted,split_main,difference\n{},{},{},{},{},{}\n",
        args.t,
        doubled.counted,
        sig15(doubled.main_term),
        split.counted,
        sig15(split.main_term),
        difference
    ));
    Ok(report)
}

fn cmd_portrait(args: &PortraitArgs) -> Result<Report> {
    let (sigma_min, sigma_max) = parse_range(&args.sigma)?;
    let (t_min, t_max) = parse_range(&args.t)?;
    let (width, height) = parse_size(&args.size)?;
    let mode = match args.mode {
        Mode::Phase => PortraitMode::PhaseQuadrant,
        Mode::Amplitude => PortraitMode::Amplitude,
    };
    let spec = PortraitSpec { sigma_min, sigma_max, t_min, t_max, width, height, mode, function: QuotientKind::new(args.q)? };
    let grid = render(&spec)?;
    write_ppm(&grid, &args.out)?;
    let mut points = match mode {
        PortraitMode::PhaseQuadrant => locate_quadrant_meeting_points(&grid, &spec),
        PortraitMode::Amplitude => Vec::new(),
    };
    points.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.total_cmp(&b.0)));
    let mut text = vec![format!("wrote {} ({}x{})", args.out.display(), width, height)];
    if mode == PortraitMode::PhaseQuadrant {
        text.push(format!("meeting points {}", points.len()));
        text.extend(points.iter().map(|p| format!("  {:.4} {:.4}", p.0, p.1)));
    }
    let json = json!({
        "format_version": FORMAT_VERSION,
        "path": args.out.display().to_string(),
        "width": width,
        "height": height,
        "meeting_points": points.iter().map(|p| json!({"sigma": p.0, "t": p.1})).collect::<Vec<_>>(),
    });
    let mut report = Report::new(json, text);
    let rows: Vec<String> = points.iter().map(|p| format!("{},{}", sig15(p.0), sig15(p.1))).collect();
    report.csv = Some(format!("sigma,t\n{}\n", rows.join("\n")));
    Ok(report)
}

fn cmd_verify(args: &VerifyArgs, opts: EvalOptions) -> Result<Report> {
    let ids = select(&args.only)?;
    let verifier = Verifier::new(opts);
    let mut text = Vec::new();
    let mut outcomes = Vec::new();
    for id in ids {
        let o = verifier.run(id);
        text.push(o.to_string());
        outcomes.push(o);
    }
    let passed = outcomes.iter().all(|o| o.passed);
    text.push(format!("{} of {} criteria passed", outcomes.iter().filter(|o| o.passed).count(), outcomes.len()));
    let json = json!({
        "format_version": FORMAT_VERSION,
        "passed": passed,
        "criteria": outcomes
            .iter()
            .map(|o| json!({"id": o.id, "name": o.name, "passed": o.passed, "detail": o.detail, "seconds": o.seconds}))
            .collect::<Vec<_>>(),
    });
    let mut report = Report::new(json, text);
    report.passed = passed;
    let rows: Vec<String> = outcomes.iter().map(|o| format!("{},{},{}", o.id, o.name, o.passed)).collect();
    report.csv = Some(format!("id,name,passed\n{}\n", rows.join("\n")));
    Ok(report)
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("DELTA_LENS_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::DomainError(format!("DELTA_LENS_THREADS must be a positive integer, got '{value}'")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Error::DomainError(e.to_string()))
}

fn run(cli: &Cli) -> Result<Report> {
    configure_threads()?;
    let opts = EvalOptions::new(8, 12, cli.target_digits)?;
    match &cli.command {
        Command::Eval(a) => cmd_eval(a, &opts),
        Command::Zeros(a) => cmd_zeros(a),
        Command::Trace(a) => cmd_trace(a),
        Command::BoxCount(a) => cmd_box_count(a),
        Command::Census(a) => cmd_census(a),
        Command::Portrait(a) => cmd_portrait(a),
        Command::VerifyAll(a) => cmd_verify(a, opts),
    }
}

fn emit(cli: &Cli, report: &Report) -> Result<()> {
    let body = match cli.format {
        Format::Json => format!("{}\n", report.json),
        Format::Csv => report.csv.clone().unwrap_or_else(|| format!("{}\n", report.json)),
        Format::Text => report.text.iter().map(|l| format!("{l}\n")).collect(),
    };
    match &cli.output {
        Some(path) => std::fs::write(path, body)?,
        None => std::io::stdout().lock().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|r| emit(&cli, &r).map(|()| r.passed)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}: {e}", e.name());
            ExitCode::from(2)
        }
    }
}
