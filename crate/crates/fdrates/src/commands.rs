//! Subcommand bodies: every number comes from an `fdrates_core` operation.

use std::fmt::Display;
use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Value};

use fdrates_core::entropy::functionals::sandwich_report;
use fdrates_core::entropy::gronwall::{calibrate_c, gronwall_bound, uniform_exponent, GronwallParams};
use fdrates_core::entropy::trace::{fit_loglog, fit_rate};
use fdrates_core::entropy::variational::{linear_quotient, variational_quotient, TestFunction};
use fdrates_core::entropy::{EntropyTrace, ProfileWeights, RateFit, SandwichReport};
use fdrates_core::flow::initial::{make_initial_data, make_sector_data, PreparedData, SectorData};
use fdrates_core::flow::linear::{evolve_linear_sector, LinearState};
use fdrates_core::flow::nonlinear::{evolve_nonlinear, FlowSettings};
use fdrates_core::numerics::eigen::bottom_eigenvalue;
use fdrates_core::numerics::forms::{assemble_sector_forms, OuterBoundary};
use fdrates_core::numerics::verify::{hp_verify, VerifySettings};
use fdrates_core::profiles::RescalingMap;
use fdrates_core::spectral::{self, Curve, GapSource};
use fdrates_core::{ExponentSet, Grading, Profile, RadialField, RadialGrid, Regime};

use crate::cli::*;
use crate::config::{parse_config, ConfigError, DataKind, RunConfig};
use crate::error::{AppError, AppResult};
use crate::output::{Cell, Format, Table};

fn kv(k: &str, v: impl Display) -> (String, String) {
    (k.to_owned(), v.to_string())
}

/// Shortest round-trip text, exponent form for tiny and huge values.
fn real(x: f64) -> String {
    format!("{x:?}")
}

fn list(xs: &[f64]) -> String {
    xs.iter().map(|&x| real(x)).collect::<Vec<_>>().join(",")
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::VeryFast => "very-fast",
        Regime::Critical => "critical",
        Regime::Threshold => "threshold",
        Regime::Good => "good",
    }
}

fn exponent_sets(a: &ExponentArgs) -> AppResult<Vec<ExponentSet>> {
    let sets: Result<Vec<_>, _> = if a.alpha.is_empty() {
        a.m.iter().map(|&m| ExponentSet::with_tolerance(a.d, m, a.tolerance)).collect()
    } else {
        a.alpha.iter().map(|&alpha| ExponentSet::from_alpha(a.d, alpha, a.tolerance)).collect()
    };
    Ok(sets?)
}

fn single_exponent(a: &ExponentArgs) -> AppResult<ExponentSet> {
    let sets = exponent_sets(a)?;
    match sets.as_slice() {
        [e] => Ok(*e),
        _ => Err(AppError::Usage("this command takes a single --m or --alpha".into())),
    }
}

fn exponent_echo(a: &ExponentArgs) -> Vec<(String, String)> {
    let mut echo = vec![kv("d", a.d)];
    if a.alpha.is_empty() {
        echo.push(kv("m", list(&a.m)));
    } else {
        echo.push(kv("alpha", list(&a.alpha)));
    }
    echo.push(kv("tolerance", real(a.tolerance)));
    echo
}

fn grading(g: GradingArg, scale: f64) -> Grading {
    match g {
        GradingArg::Sinh => Grading::Sinh { scale },
        GradingArg::Uniform => Grading::Uniform,
    }
}

fn boundary(b: BoundaryArg) -> OuterBoundary {
    match b {
        BoundaryArg::Natural => OuterBoundary::Natural,
        BoundaryArg::Asymptotic => OuterBoundary::Asymptotic,
    }
}

fn boundary_name(b: OuterBoundary) -> &'static str {
    match b {
        OuterBoundary::Natural => "natural",
        OuterBoundary::Asymptotic => "asymptotic",
    }
}

fn grid_echo(g: &GridArgs) -> Vec<(String, String)> {
    vec![
        kv("R", real(g.r_max)),
        kv("N", g.cells),
        kv("grading", format!("{:?}", g.grading).to_lowercase()),
        kv("scale", real(g.scale)),
        kv("boundary", boundary_name(boundary(g.boundary))),
    ]
}

/// Independent sweep entries in parallel; results keep input order and are
/// written by the caller alone.
fn sweep<T, R, F>(items: &[T], f: F) -> AppResult<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> AppResult<R> + Sync + Send,
{
    items.par_iter().map(f).collect()
}

fn emit(table: &Table, format: Format, path: Option<&Path>) -> AppResult<()> {
    Ok(table.emit(format, path)?)
}

pub fn constants(a: &ConstantsArgs) -> AppResult<()> {
    let sets = exponent_sets(&a.exponents)?;
    let rows = sweep(&sets, |e| {
        let sharp = spectral::sharp_constant(e.d, e.alpha)?;
        let improved = if e.d >= 2 && e.alpha < e.alpha_c() {
            Some(spectral::improved_constant(e.d, e.alpha)?.value)
        } else {
            None
        };
        Ok(vec![
            e.d.into(),
            e.m.into(),
            e.alpha.into(),
            regime_name(e.regime).into(),
            e.m_c.into(),
            e.m_star.into(),
            e.m_1.into(),
            e.m_2.into(),
            e.alpha_star.into(),
            sharp.into(),
            spectral::continuum_bottom(e.d, e.alpha).into(),
            improved.into(),
            e.constraint_needed().into(),
        ])
    })?;
    let mut t = Table::new(
        "constants",
        exponent_echo(&a.exponents),
        vec![
            "d",
            "m",
            "alpha",
            "regime",
            "m_c",
            "m_star",
            "m_1",
            "m_2",
            "alpha_star",
            "sharp_constant",
            "continuum_bottom",
            "improved_constant",
            "constraint_needed",
        ],
    );
    rows.into_iter().for_each(|r| t.push(r));
    emit(&t, a.out.format, a.out.output.as_deref())
}

fn gap_source_json(g: GapSource) -> Value {
    match g {
        GapSource::Continuum => json!("continuum"),
        GapSource::Mode { l, k } => json!({ "l": l, "k": k }),
    }
}

pub fn spectrum(a: &SpectrumArgs) -> AppResult<()> {
    let sets = exponent_sets(&a.exponents)?;
    let mut echo = exponent_echo(&a.exponents);
    echo.extend([kv("l_max", a.l_max), kv("k_max", a.k_max), kv("figure", a.figure)]);
    if a.figure {
        let alphas: Vec<f64> = sets.iter().map(|e| e.alpha).collect();
        let mut t = Table::new(
            "spectrum",
            echo,
            vec!["alpha", "curve", "l", "k", "lambda", "admissible", "below_continuum"],
        );
        for row in spectral::figure_rows(a.exponents.d, &alphas, a.l_max, a.k_max) {
            let (curve, l, k) = match row.curve {
                Curve::Continuum => ("continuum", Cell::Empty, Cell::Empty),
                Curve::Sharp => ("sharp", Cell::Empty, Cell::Empty),
                Curve::Mode { l, k } => ("mode", l.into(), k.into()),
            };
            t.push(vec![
                row.alpha.into(),
                curve.into(),
                l,
                k,
                row.lambda.into(),
                row.admissible.into(),
                row.below_continuum.into(),
            ]);
        }
        return emit(&t, a.out.format, a.out.output.as_deref());
    }
    let reports = sweep(&sets, |e| Ok(spectral::spectrum_report(e.d, e.alpha, a.l_max, a.k_max)?))?;
    let mut t = Table::new(
        "spectrum",
        echo,
        vec!["alpha", "l", "k", "lambda", "admissible", "below_continuum", "multiplicity"],
    );
    let mut details = Vec::new();
    for r in &reports {
        for mode in &r.modes {
            t.push(vec![
                r.exponents.alpha.into(),
                mode.l.into(),
                mode.k.into(),
                mode.lambda.into(),
                mode.admissible.into(),
                mode.below_continuum.into(),
                mode.multiplicity.into(),
            ]);
        }
        details.push(json!({
            "alpha": r.exponents.alpha,
            "sharp_constant": r.sharp_constant,
            "continuum_bottom": r.continuum_bottom,
            "improved_constant": r.improved_constant.map(|c| json!({
                "value": c.value,
                "below_mode_warning": c.below_mode_warning,
            })),
            "gap_source": gap_source_json(r.gap_source),
            "constraint_needed": r.constraint_needed,
            "modes": r.modes.iter().map(|m| json!({
                "l": m.l,
                "k": m.k,
                "radial_poly": m.radial_poly,
            })).collect::<Vec<_>>(),
        }));
    }
    if let [r] = reports.as_slice() {
        t.summary.push(("sharp_constant".into(), r.sharp_constant.into()));
        t.summary.push(("continuum_bottom".into(), r.continuum_bottom.into()));
    }
    t.details = Some(Value::Array(details));
    emit(&t, a.out.format, a.out.output.as_deref())
}

pub fn hp_verify_cmd(a: &HpVerifyArgs) -> AppResult<()> {
    let sets = exponent_sets(&a.exponents)?;
    let settings = VerifySettings {
        r_max: a.grid.r_max,
        cells: a.grid.cells,
        grading: grading(a.grid.grading, a.grid.scale),
        shift: a.shift,
        l_max: a.l_max,
        boundary: boundary(a.grid.boundary),
        ..VerifySettings::default()
    };
    let results = sweep(&sets, |e| Ok(hp_verify(e.d, e.alpha, &settings)?))?;
    let mut echo = exponent_echo(&a.exponents);
    echo.extend(grid_echo(&a.grid));
    echo.extend([kv("l_max", a.l_max), kv("D", real(a.shift))]);
    let mut t = Table::new("hp-verify", echo, vec!["d", "alpha", "numeric", "closed_form", "rel_err"]);
    let mut details = Vec::new();
    for v in &results {
        t.push(vec![v.d.into(), v.alpha.into(), v.numeric.into(), v.closed_form.into(), v.rel_err.into()]);
        details.push(json!({
            "alpha": v.alpha,
            "sectors": v.sectors.iter().map(|s| json!({
                "l": s.l,
                "constrained": s.constrained,
                "radii": s.radii,
                "raw": s.raw,
                "extrapolated": s.value(),
                "closed_form": s.closed_form,
            })).collect::<Vec<_>>(),
        }));
    }
    t.details = Some(Value::Array(details));
    emit(&t, a.out.format, a.out.output.as_deref())
}

pub fn eigenfunction(a: &EigenfunctionArgs) -> AppResult<()> {
    let e = single_exponent(&a.exponents)?;
    let grid = Arc::new(RadialGrid::new(a.grid.r_max, a.grid.cells, grading(a.grid.grading, a.grid.scale), e.d)?);
    let mut echo = exponent_echo(&a.exponents);
    echo.extend(grid_echo(&a.grid));
    echo.extend([kv("l", a.l), kv("k", a.k), kv("numeric", a.numeric)]);
    let mut t = Table::new("eigenfunction", echo, vec!["r", "value"]);
    let values: RadialField = if a.numeric {
        let forms = assemble_sector_forms(grid.clone(), e.alpha, 1.0, a.l, boundary(a.grid.boundary))?;
        let constraints = if a.l == 0 && e.constraint_needed() { vec![forms.constant()] } else { Vec::new() };
        let pair = bottom_eigenvalue(&forms, &constraints)?;
        t.summary.push(("lambda".into(), pair.lambda.into()));
        t.summary.push(("closed_form".into(), spectral::sector_bottom(e.d, e.alpha, a.l).into()));
        t.summary.push(("iterations".into(), pair.iterations.into()));
        pair.vector
    } else {
        let mode = spectral::discrete_mode(e.d, e.alpha, a.l, a.k);
        t.summary.push(("lambda".into(), mode.lambda.into()));
        t.summary.push(("admissible".into(), mode.admissible.into()));
        t.summary.push(("below_continuum".into(), mode.below_continuum.into()));
        t.summary.push(("multiplicity".into(), mode.multiplicity.into()));
        t.details = Some(json!({ "radial_poly": mode.radial_poly }));
        RadialField::from_fn(grid.clone(), a.l, |r| mode.eval(r))
    };
    for (&r, &v) in grid.nodes().iter().zip(values.values()) {
        t.push(vec![r.into(), v.into()]);
    }
    emit(&t, a.out.format, a.out.output.as_deref())
}

fn load(run: &RunArgs) -> AppResult<RunConfig> {
    let text = std::fs::read_to_string(&run.config).map_err(|err| {
        AppError::Usage(format!("cannot read config `{}`: {err}", run.config.display()))
    })?;
    Ok(parse_config(&text)?)
}

/// The echo leaves out `output.path`: the bytes must not depend on where
/// they are written.
fn config_echo(cfg: &RunConfig) -> Vec<(String, String)> {
    cfg.echo.iter().filter(|(k, _)| k != "output.path").cloned().collect()
}

fn out_path<'a>(run: &'a RunArgs, cfg: &'a RunConfig) -> Option<&'a Path> {
    run.output.as_deref().or(cfg.output.as_deref())
}

fn flow_settings(cfg: &RunConfig) -> FlowSettings {
    FlowSettings { t_end: cfg.t_end, dt: cfg.dt, cadence: cfg.cadence, ..FlowSettings::default() }
}

fn prepare(cfg: &RunConfig) -> AppResult<PreparedData> {
    let grid = Arc::new(cfg.grid());
    Ok(make_initial_data(grid, cfg.exponents, cfg.d0, cfg.d1, cfg.initial_data(), cfg.target)?)
}

const TRACE_COLUMNS: [&str; 6] = ["t", "entropy", "fisher", "h1", "h2", "mass_defect"];

fn trace_table(command: &str, cfg: &RunConfig, trace: &EntropyTrace) -> Table {
    let mut t = Table::new(command, config_echo(cfg), TRACE_COLUMNS.to_vec());
    for r in &trace.rows {
        t.push(vec![r.t.into(), r.entropy.into(), r.fisher.into(), r.h1.into(), r.h2.into(), r.mass_defect.into()]);
    }
    t
}

/// Exponential fit, or the log-log slope in the critical case where the
/// decay is algebraic.
fn fit(cfg: &RunConfig, trace: &EntropyTrace) -> AppResult<Option<(&'static str, RateFit)>> {
    let Some(window) = cfg.window else { return Ok(None) };
    Ok(Some(if cfg.exponents.regime == Regime::Critical {
        ("loglog_slope", fit_loglog(trace, window)?)
    } else {
        ("rate", fit_rate(trace, window)?)
    }))
}

fn push_fit(t: &mut Table, f: Option<(&'static str, RateFit)>) {
    if let Some((name, f)) = f {
        t.summary.push((name.into(), f.rate.into()));
        t.summary.push(("r2".into(), f.r2.into()));
        t.summary.push(("samples".into(), f.samples.into()));
    }
}

fn run_flow(cfg: &RunConfig, observer: &mut dyn FnMut(&fdrates_core::flow::nonlinear::NonlinearState)) -> AppResult<(PreparedData, EntropyTrace)> {
    let prepared = prepare(cfg)?;
    let mut state = prepared.state.clone();
    let trace = evolve_nonlinear(&mut state, &flow_settings(cfg), observer)?;
    Ok((prepared, trace))
}

pub fn evolve(run: &RunArgs) -> AppResult<()> {
    let cfg = load(run)?;
    let (prepared, trace) = run_flow(&cfg, &mut |_| {})?;
    let mut t = trace_table("evolve", &cfg, &trace);
    t.summary.push(("D".into(), prepared.shift.into()));
    t.summary.push(("clipped".into(), prepared.clipped.into()));
    t.summary.push(("noise_floor".into(), trace.noise_floor.into()));
    push_fit(&mut t, fit(&cfg, &trace)?);
    emit(&t, run.format, out_path(run, &cfg))
}

pub fn evolve_linear(run: &RunArgs) -> AppResult<()> {
    let cfg = load(run)?;
    let kind = match cfg.kind {
        DataKind::EigenSeeded => SectorData::Mode { k: cfg.k, epsilon: cfg.epsilon },
        DataKind::RandomBump => SectorData::RandomBump { seed: cfg.seed, amplitude: cfg.amplitude, bumps: cfg.bumps },
        DataKind::ProfileBlend => {
            return Err(ConfigError::Invalid("evolve-linear needs data.kind = eigen-seeded or random-bump".into()).into())
        }
    };
    let shift = cfg.sector_shift();
    let grid = Arc::new(cfg.grid());
    let alpha = cfg.exponents.alpha;
    let forms = Arc::new(assemble_sector_forms(grid.clone(), alpha, shift, cfg.l, cfg.boundary)?);
    let f0 = make_sector_data(grid, alpha, shift, cfg.l, kind)?;
    let mut state = LinearState::new(forms, &f0)?;
    let trace = evolve_linear_sector(&mut state, cfg.t_end, cfg.dt, cfg.cadence)?;
    let mut t = trace_table("evolve-linear", &cfg, &trace);
    t.summary.push(("D".into(), shift.into()));
    if let Some(window) = cfg.window {
        push_fit(&mut t, Some(("rate", fit_rate(&trace, window)?)));
    }
    emit(&t, run.format, out_path(run, &cfg))
}

pub fn entropy_report(run: &RunArgs) -> AppResult<()> {
    let cfg = load(run)?;
    let grid = cfg.grid();
    let mut reports: Vec<(f64, SandwichReport)> = Vec::new();
    let mut weights: Option<ProfileWeights> = None;
    run_flow(&cfg, &mut |s| {
        let w = weights.get_or_insert_with(|| ProfileWeights::new(&grid, *s.profile()));
        reports.push((s.t(), sandwich_report(&grid, w, s.rel())));
    })?;
    let mut t = Table::new(
        "entropy-report",
        config_echo(&cfg),
        vec![
            "t",
            "h",
            "entropy",
            "fisher",
            "linear_norm",
            "linear_fisher",
            "entropy_lower_slack",
            "entropy_upper_slack",
            "fisher_slack",
        ],
    );
    for (time, r) in &reports {
        t.push(vec![
            (*time).into(),
            r.h.into(),
            r.entropy.into(),
            r.fisher.into(),
            r.linear_norm.into(),
            r.linear_fisher.into(),
            r.entropy_lower_slack.into(),
            r.entropy_upper_slack.into(),
            r.fisher_slack.into(),
        ]);
    }
    t.summary.push(("holds".into(), reports.iter().all(|(_, r)| r.holds(1e-10)).into()));
    emit(&t, run.format, out_path(run, &cfg))
}

pub fn gronwall(a: &GronwallArgs) -> AppResult<()> {
    let cfg = load(&a.run)?;
    let e = cfg.exponents;
    let (_, trace) = run_flow(&cfg, &mut |_| {})?;
    let e_unif = uniform_exponent(e.d, e.m);
    let c = a.c_unif.unwrap_or_else(|| calibrate_c(&trace, e_unif));
    let lambda = match a.lambda {
        Some(l) => l,
        None => spectral::sharp_constant(e.d, e.alpha)?,
    };
    let params = GronwallParams::new(&e, lambda, c)?;
    let first = trace.rows[0];
    let curve = gronwall_bound(first.entropy, first.h(), &params, cfg.t_end, cfg.dt)?;
    let mut echo = config_echo(&cfg);
    echo.push(kv("C", a.c_unif.map_or("calibrated".to_owned(), |c| c.to_string())));
    echo.push(kv("lambda", a.lambda.map_or("sharp".to_owned(), |l| l.to_string())));
    let mut t = Table::new("gronwall", echo, vec!["t", "entropy", "bound", "h"]);
    for r in &trace.rows {
        t.push(vec![r.t.into(), r.entropy.into(), curve.value_at(r.t).into(), r.h().into()]);
    }
    t.summary.push(("C".into(), c.into()));
    t.summary.push(("exponent".into(), e_unif.into()));
    t.summary.push(("lambda".into(), lambda.into()));
    t.summary.push(("h_star".into(), params.h_star.into()));
    emit(&t, a.run.format, a.run.output.as_deref().or(cfg.output.as_deref()))
}

pub fn quotient(a: &QuotientArgs) -> AppResult<()> {
    let e = single_exponent(&a.exponents)?;
    let f = match a.function {
        TestFunctionArg::Quadratic => TestFunction::Quadratic,
        TestFunctionArg::Saturating => TestFunction::Saturating,
        TestFunctionArg::Mixed => TestFunction::Mixed,
    };
    let grid = Arc::new(RadialGrid::new(a.r_max, a.cells, Grading::default(), e.d)?);
    let profile = Profile::new(e, a.shift)?;
    let field = RadialField::from_fn(grid, 0, |r| f.eval(r));
    let limit = linear_quotient(&field, &profile)?;
    let values = sweep(&a.n, |&n| Ok(variational_quotient(&field, n, &profile)?))?;
    let mut echo = exponent_echo(&a.exponents);
    echo.extend([
        kv("f", format!("{:?}", a.function).to_lowercase()),
        kv("n", list(&a.n)),
        kv("R", real(a.r_max)),
        kv("N", a.cells),
        kv("D", real(a.shift)),
    ]);
    let mut t = Table::new("quotient", echo, vec!["n", "quotient"]);
    for (&n, q) in a.n.iter().zip(values) {
        t.push(vec![n.into(), q.into()]);
    }
    t.summary.push(("linear_quotient".into(), limit.into()));
    emit(&t, a.out.format, a.out.output.as_deref())
}

pub fn rescale(a: &RescaleArgs) -> AppResult<()> {
    let e = single_exponent(&a.exponents)?;
    let map = RescalingMap::new(e, a.t0)?;
    let profile = Profile::new(e, a.shift)?;
    let rows = a
        .tau
        .iter()
        .map(|&tau| {
            let u = map.eval_barenblatt(a.shift, tau, a.y)?;
            let s = map.to_selfsimilar(tau, a.y, u)?;
            Ok(vec![
                tau.into(),
                s.t.into(),
                map.radius(tau)?.into(),
                s.x.into(),
                u.into(),
                s.v.into(),
                profile.eval(s.x).into(),
            ])
        })
        .collect::<AppResult<Vec<_>>>()?;
    let mut echo = exponent_echo(&a.exponents);
    echo.extend([kv("T", real(a.t0)), kv("D", real(a.shift)), kv("y", real(a.y)), kv("tau", list(&a.tau))]);
    let mut t = Table::new("rescale", echo, vec!["tau", "t", "R", "x", "u", "v", "profile"]);
    rows.into_iter().for_each(|r| t.push(r));
    emit(&t, a.out.format, a.out.output.as_deref())
}
