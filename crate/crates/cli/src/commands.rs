//! The four subcommands. Each returns its full output text; nothing here
//! reads the clock or draws random numbers, so equal configs give equal bytes.

use bathflow_core::analytics::{current_trace, TransportParams};
use bathflow_core::grassmann::{
    algebra_checks, coherent_identity_suite, fokker_planck_report, ReportLine, Status,
};
use bathflow_core::lindblad::{
    max_stable_step, propagate_samples, DensityMatrix, Generator, GeneratorSpec, Variant,
};
use bathflow_core::reservoirs::{ReservoirSpec, Statistics, SystemSpec};
use bathflow_core::spectrum::{spectrum_analytic, spectrum_bosonic, symmetric_grid};
use bathflow_core::transport::{carnot_crossing, sweep_ratio, t_c_grid_from_x, SweepOptions};
use bathflow_core::Error;

use crate::config::RunConfig;
use crate::output::{num, render_svg, Series, Table};

/// What a command produced and how the process should exit.
pub struct Outcome {
    pub text: String,
    pub svg: Option<String>,
    pub exit: i32,
}

impl Outcome {
    fn ok(text: String, svg: Option<String>) -> Self {
        Self { text, svg, exit: 0 }
    }
}

fn stats_name(s: Statistics) -> &'static str {
    match s {
        Statistics::Fermionic => "fermi",
        Statistics::Bosonic => "bose",
    }
}

fn variant_name(v: Variant) -> &'static str {
    match v {
        Variant::ReferenceThermal => "reference",
        Variant::PaperLiteral => "paper-literal",
    }
}

fn params_for(cfg: &RunConfig, t_c: f64) -> Result<TransportParams, Error> {
    let system = SystemSpec::new(cfg.omega_s, cfg.statistics, cfg.n0)?;
    let emitter = ReservoirSpec::new(cfg.temp_e, cfg.gamma_e, cfg.statistics)?;
    let collector = ReservoirSpec::new(t_c, cfg.gamma_c, cfg.statistics)?;
    TransportParams::from_reservoirs(&system, &emitter, &collector)
}

pub fn trace(cfg: &RunConfig) -> Result<Outcome, Error> {
    let t_c = cfg.temp_c[0];
    let p = params_for(cfg, t_c)?;
    let beta = p.total_rate();
    let t_max = cfg.t_max.unwrap_or(5.0 / beta);
    let times: Vec<f64> = (0..cfg.points)
        .map(|k| t_max * k as f64 / (cfg.points - 1) as f64)
        .collect();
    let w = cfg.omega_unitary();
    let (spec, rho0) = match cfg.statistics {
        Statistics::Fermionic => (
            GeneratorSpec::fermionic(cfg.variant, w, p.gamma_e, p.gamma_c, p.nbar_e, p.nbar_c)?,
            DensityMatrix::fermion_diagonal(cfg.n0)?,
        ),
        Statistics::Bosonic => (
            GeneratorSpec::bosonic(w, p.gamma_e, p.gamma_c, p.nbar_e, p.nbar_c, cfg.n_max)?,
            DensityMatrix::number_state(cfg.n_max + 1, cfg.n0 as usize)?,
        ),
    };
    let gen = Generator::new(spec)?;
    let dt = cfg
        .dt
        .unwrap_or_else(|| (1e-3 / beta).min(max_stable_step(&gen)));
    let states = propagate_samples(&gen, &rho0, &times, dt)?;
    let analytic = current_trace(&p, &times)?;

    let mut table = Table::new(&["t_s", "n_analytic", "n_numeric", "current_analytic"]);
    table.params(&[
        ("command", "trace".into()),
        ("omega_s", num(cfg.omega_s)),
        ("omega", num(w)),
        ("gamma_e", num(p.gamma_e)),
        ("gamma_c", num(p.gamma_c)),
        ("T_e", num(cfg.temp_e)),
        ("T_c", num(t_c)),
        ("nbar_e", num(p.nbar_e)),
        ("nbar_c", num(p.nbar_c)),
        ("n0", num(cfg.n0)),
        ("stats", stats_name(cfg.statistics).into()),
        ("variant", variant_name(cfg.variant).into()),
        ("n_max", cfg.n_max.to_string()),
        ("t_max", num(t_max)),
        ("dt", num(dt)),
    ]);
    for (k, rho) in states.iter().enumerate() {
        table.rows.push(vec![
            times[k],
            analytic.occupation[k],
            bathflow_core::lindblad::occupation(rho),
            analytic.current[k],
        ]);
    }
    let svg = cfg.svg.then(|| {
        let col = |c: usize| table.rows.iter().map(|r| (r[0], r[c])).collect();
        render_svg(
            "occupation",
            "t [s]",
            "<n>",
            &[
                Series {
                    label: "analytic".into(),
                    points: col(1),
                },
                Series {
                    label: "numeric".into(),
                    points: col(2),
                },
            ],
            false,
        )
    });
    Ok(Outcome::ok(table.to_csv(), svg))
}

pub fn transport(cfg: &RunConfig) -> Result<Outcome, Error> {
    // x_c = 10^(−3 + i/20), listed by increasing T_c
    let hi = -3.0 + (cfg.points - 1) as f64 / 20.0;
    let grid = t_c_grid_from_x(cfg.omega_s, -3.0, hi, cfg.points);
    let opts = SweepOptions {
        jobs: cfg.jobs,
        prefactor_omega: if cfg.use_shifted_omega {
            cfg.omega_shifted
        } else {
            None
        },
        diagnostic_rates: cfg.diagnostics.then_some((cfg.gamma_e, cfg.gamma_c)),
    };
    let points = sweep_ratio(cfg.omega_s, cfg.ratio, &grid, &opts)?;
    let mut header = vec!["T_c_K", "x_c", "eta_carnot", "eta_fermi", "eta_bose"];
    if cfg.diagnostics {
        header.extend([
            "f_per_s",
            "f_reciprocal_per_s",
            "E_s_W",
            "Q_W",
            "E_s_over_Q",
        ]);
    }
    let mut table = Table::new(&header);
    table.params(&[
        ("command", "transport".into()),
        ("omega_s", num(cfg.omega_s)),
        (
            "prefactor_omega",
            num(opts.prefactor_omega.unwrap_or(cfg.omega_s)),
        ),
        ("ratio", num(cfg.ratio)),
        ("gamma_e", num(cfg.gamma_e)),
        ("gamma_c", num(cfg.gamma_c)),
        ("points", cfg.points.to_string()),
    ]);
    if let Ok(x) = carnot_crossing(cfg.ratio, 1e-3, 30.0) {
        table.meta.push(format!("carnot_crossing_x_c={}", num(x)));
    }
    for pt in &points {
        let mut row = vec![pt.t_c, pt.x_c, pt.eta_carnot, pt.eta_fermi, pt.eta_bose];
        if let Some(d) = pt.diagnostics {
            row.extend([
                d.f,
                d.f_reciprocal,
                d.steady_energy_loss,
                d.emitter_supply,
                d.ratio,
            ]);
        }
        table.rows.push(row);
    }
    let svg = cfg.svg.then(|| {
        let col = |c: usize| table.rows.iter().map(|r| (r[1], r[c])).collect();
        render_svg(
            "transport factors",
            "x_c = ħω_s/(k_B T_c)",
            "η",
            &[
                Series {
                    label: "Carnot".into(),
                    points: col(2),
                },
                Series {
                    label: "fermionic".into(),
                    points: col(3),
                },
                Series {
                    label: "bosonic".into(),
                    points: col(4),
                },
            ],
            true,
        )
    });
    Ok(Outcome::ok(table.to_csv(), svg))
}

pub fn spectrum(cfg: &RunConfig) -> Result<Outcome, Error> {
    let beta = cfg.total_rate();
    let omegas = symmetric_grid(10.0 * beta, cfg.points);
    let mut table = Table::new(&["T_c_K", "omega_rad_s", "S_continuous"]);
    table.params(&[
        ("command", "spectrum".into()),
        ("omega_s", num(cfg.omega_s)),
        ("gamma_e", num(cfg.gamma_e)),
        ("gamma_c", num(cfg.gamma_c)),
        ("T_e", num(cfg.temp_e)),
        ("n0", num(cfg.n0)),
        ("stats", stats_name(cfg.statistics).into()),
        ("points", cfg.points.to_string()),
    ]);
    let mut series = Vec::new();
    for &t_c in &cfg.temp_c {
        let p = params_for(cfg, t_c)?;
        let s = match cfg.statistics {
            Statistics::Fermionic => spectrum_analytic(&p, &omegas)?,
            Statistics::Bosonic => spectrum_bosonic(&p, &omegas)?,
        };
        table
            .meta
            .push(format!("dc_weight={} T_c_K={}", num(s.dc_weight), num(t_c)));
        for (w, v) in s.omegas.iter().zip(&s.continuous) {
            table.rows.push(vec![t_c, *w, *v]);
        }
        series.push(Series {
            label: format!("T_c = {t_c} K"),
            points: s
                .omegas
                .iter()
                .copied()
                .zip(s.continuous.iter().copied())
                .collect(),
        });
    }
    let svg = cfg
        .svg
        .then(|| render_svg("current spectrum", "ω [rad/s]", "S(ω)", &series, false));
    Ok(Outcome::ok(table.to_csv(), svg))
}

pub fn grassmann_verify(cfg: &RunConfig) -> Result<Outcome, Error> {
    let p = params_for(cfg, cfg.temp_c[0])?;
    let mut text = String::new();
    let mut fails = 0;
    let mut warns = 0;
    let mut section = |title: &str, lines: &[ReportLine], text: &mut String| {
        text.push_str(&format!("== {title}\n"));
        for l in lines {
            match l.status {
                Status::Fail => fails += 1,
                Status::Warn => warns += 1,
                Status::Pass => {}
            }
            text.push_str(&format!("{l}\n"));
        }
        text.push('\n');
    };
    let alpha = p.weighted_occupation_rate();
    let beta = p.total_rate();
    text.push_str(&format!(
        "# params: gamma_e={} gamma_c={} nbar_e={} nbar_c={} alpha={} beta={}\n\n",
        num(p.gamma_e),
        num(p.gamma_c),
        num(p.nbar_e),
        num(p.nbar_c),
        num(alpha),
        num(beta)
    ));
    section("Grassmann algebra", &algebra_checks()?, &mut text);
    let coherent: Vec<ReportLine> = coherent_identity_suite()?
        .checks
        .iter()
        .map(|c| c.to_line())
        .collect();
    section("coherent states", &coherent, &mut text);
    let (ode, _, fp) = fokker_planck_report(p.gamma_e, p.gamma_c, p.nbar_e, p.nbar_c)?;
    section("P-distribution", &fp, &mut text);
    text.push_str(&format!(
        "derived: dp0/dt = {}*p0 + {}, p1 = -1, dp1/dt = 0\nstated solution: p0(t) = (alpha/beta)(1 - exp(-beta t)) with alpha/beta = {}\n",
        num(ode.a),
        num(ode.b),
        num(alpha / beta)
    ));
    text.push_str(&format!(
        "summary: {fails} engine failure(s), {warns} warning(s)\n"
    ));
    Ok(Outcome {
        text,
        svg: None,
        exit: if fails == 0 { 0 } else { 1 },
    })
}
