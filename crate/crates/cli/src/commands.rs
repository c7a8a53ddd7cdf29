use std::time::Instant;

use mhz_core::decomp::{decompose, verify_tableau, MonomialTableau, Polynomial, VerificationReport};
use mhz_core::hurwitz::{character_table, HurwitzParam};
use mhz_core::lab::{
    density_at, find_zeros, mean_square, scan_shifts, MeanSquareReport, ScanMode, ScanSpec, ShiftRecord, Target,
    ZeroOptions,
};
use mhz_core::multizeta::{zeta_diag, zeta_eval, zeta_mb, zeta_smoothed_with_budget, zeta_trunc, ContourSpec, Rect};
use mhz_core::twist::{
    make_twist, twist_diagnostics, weyl_limit_density, weyl_set_measure, DiagnosticsSpec, TwistDiagnostics,
    TwistFunction, WeylTargetSpec,
};
use mhz_core::{c64, CompactBox, MultiPoint, ParamVector};
use serde::Serialize;

use crate::args::{
    Command, DecompArgs, EvalArgs, MeanSquareArgs, Method, Mode, ScanArgs, TwistArgs, WeylArgs, ZerosArgs,
};
use crate::config::RunConfig;
use crate::output::{artifact_path, write_csv, write_text, Complex, Envelope};
use crate::CliError;

pub fn dispatch(command: Command, config: &RunConfig) -> Result<(), CliError> {
    match command {
        Command::Eval(a) => cmd_eval(&a, config),
        Command::Scan(a) => cmd_scan(&a, config),
        Command::Meansquare(a) => cmd_meansquare(&a, config),
        Command::Zeros(a) => cmd_zeros(&a, config),
        Command::Decomp(a) => cmd_decomp(&a, config),
        Command::Twist(a) => cmd_twist(&a, config),
        Command::Weyl(a) => cmd_weyl(&a, config),
    }
}

fn parse_params(list: &[String]) -> Result<ParamVector, CliError> {
    let entries = list.iter().map(|s| s.parse::<HurwitzParam>()).collect::<Result<Vec<_>, _>>()?;
    Ok(ParamVector::new(entries)?)
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

fn emit<T: Serialize>(command: &str, config: &RunConfig, result: T, file: Option<&str>) -> Result<(), CliError> {
    let text = Envelope::new(command, config, result).to_json()?;
    if let Some(name) = file {
        write_text(&artifact_path(config, name)?, &text)?;
    }
    println!("{text}");
    Ok(())
}

#[derive(Serialize)]
struct EvalOutput {
    method: &'static str,
    value: Complex,
    error_estimate: Option<f64>,
}

fn cmd_eval(a: &EvalArgs, config: &RunConfig) -> Result<(), CliError> {
    if a.s.len() != a.n {
        return Err(bad(format!("--n {} but {} coordinates", a.n, a.s.len())));
    }
    if a.alpha.len() != a.n {
        return Err(bad(format!("--n {} but {} parameters", a.n, a.alpha.len())));
    }
    let alpha = parse_params(&a.alpha)?;
    let s = MultiPoint::new(a.s.clone())?;
    let (method, value, error_estimate) = match a.method {
        Method::Trunc => ("trunc", zeta_trunc(&s, &alpha, a.n_max)?, None),
        Method::Smoothed => {
            let max_im = a.s.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
            let t = a.t_scale.unwrap_or((config.policy.scale * max_im).max(1.0));
            let v = zeta_smoothed_with_budget(&s, &alpha, t, &config.policy.cutoff, config.policy.cost_budget)?;
            ("smoothed", v, None)
        }
        Method::Afe => {
            let r = zeta_eval(&s, &alpha, config.xi, &config.policy)?;
            ("afe", r.value, Some(r.error_estimate))
        }
        Method::Mb => {
            let contour = ContourSpec { xi: config.xi, inner_policy: config.policy, ..ContourSpec::default() };
            ("mb", zeta_mb(&s, &alpha, &contour, a.depth.unwrap_or(a.n.saturating_sub(1).max(1)))?, None)
        }
        Method::Diag => {
            let z = a.s[0];
            let al = alpha.values()[0];
            if a.s.iter().any(|w| *w != z) || alpha.values().iter().any(|&v| v != al) {
                return Err(bad("diag needs equal coordinates and equal parameters"));
            }
            ("diag", zeta_diag(z, al, a.n)?, None)
        }
    };
    emit("eval", config, EvalOutput { method, value: value.into(), error_estimate }, None)
}

fn scan_spec(a: &ScanArgs, config: &RunConfig) -> Result<ScanSpec, CliError> {
    if let Some(path) = &a.spec {
        let text = std::fs::read_to_string(path).map_err(|e| bad(format!("cannot read {}: {e}", path.display())))?;
        return serde_json::from_str(&text).map_err(|e| bad(format!("scan spec {}: {e}", path.display())));
    }
    let alpha = parse_params(&a.alpha)?;
    let n = alpha.arity();
    let t_max = a.t_max.ok_or_else(|| bad("--t-max is required"))?;
    let epsilon = a.epsilon.ok_or_else(|| bad("--epsilon is required"))?;
    let mode = match a.mode {
        Mode::Continuous => ScanMode::Continuous { step: a.step.clone() },
        Mode::Discrete => ScanMode::Discrete { delta: a.delta.clone() },
        Mode::Line => {
            let [step] = a.step[..] else { return Err(bad("line mode takes one --step")) };
            ScanMode::Line { direction: a.direction.clone(), step }
        }
    };
    let target = match (&a.target, a.constant) {
        (Some(p), _) => Target::Polynomial(Polynomial::parse_with_arity(p, n)?),
        (None, Some(c)) => Target::Constant(c),
        (None, None) => return Err(bad("one of --target or --constant is required")),
    };
    if a.center.len() != n {
        return Err(bad(format!("{} centres for {n} parameters", a.center.len())));
    }
    let rects = a.center.iter().map(|&c| Rect::centered(c, a.half_width)).collect();
    Ok(ScanSpec {
        alpha,
        mode,
        t_range: (a.t_min, t_max),
        target,
        bx: CompactBox::rectangle(rects, a.grid).map_err(|e| bad(e.to_string()))?,
        epsilon,
        joint: Vec::new(),
        eval: config.eval(),
        max_shifts: config.max_shifts,
    })
}

#[derive(Serialize)]
struct EpsilonDensity {
    epsilon: f64,
    density: f64,
}

#[derive(Serialize)]
struct ScanSummary<'a> {
    spec: &'a ScanSpec,
    density: f64,
    evaluated: usize,
    skipped: usize,
    best: Option<&'a ShiftRecord>,
    densities: Vec<EpsilonDensity>,
    records_csv: String,
    runtime_seconds: f64,
}

fn cmd_scan(a: &ScanArgs, config: &RunConfig) -> Result<(), CliError> {
    let spec = scan_spec(a, config)?;
    let start = Instant::now();
    let outcome = scan_shifts(&spec)?;
    let n = spec.alpha.arity();
    let csv_path = artifact_path(config, "scan.csv")?;
    let mut header: Vec<String> = (1..=n).map(|j| format!("t{j}")).collect();
    header.extend(["sup_distance".to_string(), "pass".to_string()]);
    write_csv(
        &csv_path,
        &header,
        outcome.records.iter().map(|r| {
            let mut row: Vec<String> = r.t.iter().map(|t| t.to_string()).collect();
            row.push(r.sup_distance.to_string());
            row.push(u8::from(r.pass).to_string());
            row
        }),
    )?;
    let densities = a
        .also_epsilon
        .iter()
        .map(|&e| EpsilonDensity { epsilon: e, density: density_at(&outcome.records, e) })
        .collect();
    let summary = ScanSummary {
        spec: &spec,
        density: outcome.density,
        evaluated: outcome.evaluated,
        skipped: outcome.skipped,
        best: outcome.best.as_ref(),
        densities,
        records_csv: csv_path.display().to_string(),
        runtime_seconds: start.elapsed().as_secs_f64(),
    };
    emit("scan", config, summary, Some("scan_summary.json"))
}

#[derive(Serialize)]
struct MeanSquareOutput {
    alpha: ParamVector,
    t_max: f64,
    xi: f64,
    #[serde(flatten)]
    report: MeanSquareReport,
}

fn cmd_meansquare(a: &MeanSquareArgs, config: &RunConfig) -> Result<(), CliError> {
    let alpha = parse_params(&a.alpha)?;
    let mut eval = config.eval();
    if let Some(xi) = a.xi {
        eval.xi = xi;
    }
    let report = mean_square(&alpha, a.t_max, &eval, a.samples, config.seed)?;
    emit("meansquare", config, MeanSquareOutput { alpha, t_max: a.t_max, xi: eval.xi, report }, Some("meansquare.json"))
}

#[derive(Serialize)]
struct ZeroOut {
    location: Vec<Complex>,
    residual: f64,
    winding: i64,
    winding_check: i64,
    radius: f64,
}

#[derive(Serialize)]
struct ZerosOutput {
    alpha: ParamVector,
    #[serde(rename = "box")]
    bx: CompactBox,
    options: ZeroOptions,
    count: usize,
    zeros: Vec<ZeroOut>,
}

fn cmd_zeros(a: &ZerosArgs, config: &RunConfig) -> Result<(), CliError> {
    let alpha = parse_params(&a.alpha)?;
    let rects = a.rect.iter().map(|r| Rect { re: (r[0], r[1]), im: (r[2], r[3]) }).collect();
    let bx = CompactBox::rectangle(rects, 2).map_err(|e| bad(e.to_string()))?;
    let options = ZeroOptions {
        grid: (a.grid_re, a.grid_im),
        refine_tol: a.refine_tol,
        seed_threshold: a.seed_threshold,
        max_points: config.max_grid_points,
        eval: config.eval(),
        ..ZeroOptions::default()
    };
    let found = find_zeros(&alpha, &bx, &options)?;
    let n = alpha.arity();
    let mut header: Vec<String> = (1..=n).flat_map(|j| [format!("re{j}"), format!("im{j}")]).collect();
    header.extend(["residual", "winding", "winding_check"].map(String::from));
    write_csv(
        &artifact_path(config, "zeros.csv")?,
        &header,
        found.iter().map(|z| {
            let mut row: Vec<String> =
                z.location.coords().iter().flat_map(|c| [c.re.to_string(), c.im.to_string()]).collect();
            row.extend([z.residual.to_string(), z.winding.to_string(), z.winding_check.to_string()]);
            row
        }),
    )?;
    let zeros: Vec<ZeroOut> = found
        .into_iter()
        .map(|z| ZeroOut {
            location: z.location.coords().iter().map(|&c| c.into()).collect(),
            residual: z.residual,
            winding: z.winding,
            winding_check: z.winding_check,
            radius: z.radius,
        })
        .collect();
    emit("zeros", config, ZerosOutput { alpha, bx, options, count: zeros.len(), zeros }, Some("zeros.json"))
}

#[derive(Serialize)]
struct DecompOutput {
    polynomial: String,
    c: f64,
    #[serde(rename = "box")]
    bx: CompactBox,
    slots: usize,
    scale: f64,
    tableau: MonomialTableau,
    verification: VerificationReport,
}

fn cmd_decomp(a: &DecompArgs, config: &RunConfig) -> Result<(), CliError> {
    let p: Polynomial = match a.n {
        Some(n) => Polynomial::parse_with_arity(&a.poly, n)?,
        None => a.poly.parse()?,
    };
    let n = p.arity();
    let bx = CompactBox::strip(&vec![(a.sigma.re, a.sigma.im); n], &vec![a.height; n], a.grid)
        .map_err(|e| bad(e.to_string()))?;
    let t = decompose(&p, a.c, &bx)?;
    let verification = verify_tableau(&t, &p, Some((a.c, &bx)))?;
    let out = DecompOutput {
        polynomial: p.to_string(),
        c: a.c,
        bx,
        slots: t.len(),
        scale: t.scale(),
        tableau: t,
        verification,
    };
    emit("decomp", config, out, Some("tableau.json"))
}

#[derive(Serialize)]
struct TwistOutput {
    twist: TwistFunction,
    spec: DiagnosticsSpec,
    #[serde(flatten)]
    diagnostics: TwistDiagnostics,
}

fn cmd_twist(a: &TwistArgs, config: &RunConfig) -> Result<(), CliError> {
    let alpha: HurwitzParam = a.alpha.parse()?;
    let mut table = character_table(a.q)?;
    if a.index >= table.len() {
        return Err(bad(format!("character index {} but only {} characters mod {}", a.index, table.len(), a.q)));
    }
    let chi = table.swap_remove(a.index);
    let twist = make_twist(&alpha, &chi, a.n0, &a.free_map())?;
    let spec = DiagnosticsSpec {
        indices: a.indices,
        series_s: c64(a.series_s, 0.0),
        growth_n_max: a.n_max,
        growth_window: a.window,
        ..DiagnosticsSpec::default()
    };
    let diagnostics = twist_diagnostics(&twist, &spec)?;
    write_csv(
        &artifact_path(config, "growth.csv")?,
        &["n".to_string(), "partial_sum".to_string()],
        diagnostics.growth.checkpoints.iter().map(|p| vec![p.n.to_string(), p.partial_sum.to_string()]),
    )?;
    emit("twist", config, TwistOutput { twist, spec, diagnostics }, Some("twist.json"))
}

#[derive(Serialize)]
struct WeylOutput {
    alpha: HurwitzParam,
    spec: WeylTargetSpec,
    t_max: f64,
    samples: usize,
    constrained: usize,
    measured_density: f64,
    limit_density: f64,
}

fn cmd_weyl(a: &WeylArgs, config: &RunConfig) -> Result<(), CliError> {
    let alpha: HurwitzParam = a.alpha.parse()?;
    let spec = WeylTargetSpec {
        targets: a.targets.clone(),
        delta: a.delta,
        cutoff: a.cutoff,
        primes: None,
        displayed_form: a.displayed_form,
    };
    let measured_density = weyl_set_measure(&alpha, &spec, a.t_max, a.samples, config.seed)?;
    let out = WeylOutput {
        alpha,
        constrained: spec.constrained(&alpha).len(),
        limit_density: weyl_limit_density(&alpha, &spec),
        spec,
        t_max: a.t_max,
        samples: a.samples,
        measured_density,
    };
    emit("weyl", config, out, Some("weyl.json"))
}
