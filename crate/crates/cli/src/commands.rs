//! Subcommand implementations. Each renders its full output into a string so
//! that writing happens once, in order, after the parallel work is done.

use std::fmt::Write as _;

use dressed_atom::dynamics::{
    free_space_asymptote, occupation_evolution, stability_bound, time_grid, BoundKernel,
};
use dressed_atom::spectrum::{secular_residual, solve_spectrum, validate_regime_with_margin};
use dressed_atom::{build_scenario, CavityScenario, CouplingMatrix, ElementMethod, ModeSpectrum};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::{CliError, Command};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub exit_code: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, exit_code: 0 }
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn run(command: Command, config: &RunConfig) -> Result<Output, CliError> {
    match command {
        Command::Validate => cmd_validate(config),
        Command::Spectrum { with_couplings } => {
            cmd_spectrum(config, with_couplings).map(Output::ok)
        }
        Command::Evolve => cmd_evolve(config).map(Output::ok),
        Command::Bound => cmd_bound(config).map(Output::ok),
        Command::Sweep => cmd_sweep(config).map(Output::ok),
    }
}

fn build_matrix(
    config: &RunConfig,
    scenario: &CavityScenario,
    spectrum: &ModeSpectrum,
    field_limit: usize,
    mode_limit: usize,
) -> Result<CouplingMatrix, CliError> {
    Ok(match config.elements {
        ElementMethod::Exact => CouplingMatrix::exact(scenario, spectrum, field_limit, mode_limit)?,
        ElementMethod::Approximate => {
            CouplingMatrix::approximate(scenario, spectrum, field_limit, mode_limit)?
        }
    })
}

/// Spectrum and coupling matrix sized for `K` and `L`.
fn pipeline(
    config: &RunConfig,
    scenario: &CavityScenario,
) -> Result<(ModeSpectrum, CouplingMatrix), CliError> {
    let (k, l) = (config.field_limit, config.mode_limit);
    let spectrum = solve_spectrum(scenario, k.max(l), config.method)?;
    let matrix = build_matrix(config, scenario, &spectrum, k, l)?;
    Ok((spectrum, matrix))
}

pub fn cmd_validate(config: &RunConfig) -> Result<Output, CliError> {
    let scenario = config.scenario()?;
    let r = validate_regime_with_margin(&scenario, config.margin);
    let mut text = config.provenance_line("validate");
    text.push('\n');
    let rows = [
        ("delta", num(r.delta)),
        ("delta_threshold", num(r.delta_threshold)),
        ("condition_c1", r.condition_c1.to_string()),
        ("radius_threshold_m", num(r.radius_threshold)),
        ("below_first_mode", r.below_first_mode.to_string()),
        ("condition_c2", r.condition_c2.to_string()),
        ("r_upper_bound_m", num(r.r_upper_bound)),
        ("margin", num(r.margin)),
        ("small_cavity_ok", r.small_cavity_ok.to_string()),
    ];
    for (k, v) in rows {
        let _ = writeln!(text, "{k} = {v}");
    }
    Ok(Output {
        text,
        exit_code: if r.small_cavity_ok { 0 } else { 3 },
    })
}

pub fn cmd_spectrum(config: &RunConfig, with_couplings: bool) -> Result<String, CliError> {
    let scenario = config.scenario()?;
    let k_max = config.field_limit;
    let spectrum = solve_spectrum(&scenario, k_max, config.method)?;
    let matrix = if with_couplings {
        Some(build_matrix(config, &scenario, &spectrum, k_max, k_max)?)
    } else {
        None
    };

    let mut text = config.provenance_line("spectrum");
    text.push_str("\nk,omega_k,Omega_k,epsilon_k,residual");
    if matrix.is_some() {
        text.push_str(",t0_k,tk_0");
    }
    text.push('\n');
    for (k, mode) in spectrum.modes().iter().enumerate() {
        let omega_k = if k == 0 {
            scenario.omega_bar()
        } else {
            spectrum.field_frequency(k)
        };
        let epsilon = if k == 0 {
            String::new()
        } else {
            num(mode.epsilon)
        };
        let _ = write!(
            text,
            "{k},{},{},{epsilon},{}",
            num(omega_k),
            num(spectrum.frequency(k)),
            num(secular_residual(&scenario, mode))
        );
        if let Some(m) = &matrix {
            let _ = write!(text, ",{},{}", num(m.element(0, k)?), num(m.element(k, 0)?));
        }
        text.push('\n');
    }
    Ok(text)
}

pub fn cmd_evolve(config: &RunConfig) -> Result<String, CliError> {
    let scenario = config.scenario()?;
    let (spectrum, matrix) = pipeline(config, &scenario)?;
    let grid = time_grid(&scenario, config.n_points, config.t_max_factor)?;
    let series = occupation_evolution(
        &scenario,
        &spectrum,
        &matrix,
        &grid,
        config.field_limit,
        config.mode_limit,
    )?;
    let mut text = config.provenance_line("evolve");
    text.push_str("\ntau_s,n0,f00_sq,thermal_part\n");
    for i in 0..series.len() {
        let _ = writeln!(
            text,
            "{},{},{},{}",
            num(series.times[i]),
            num(series.n0_values[i]),
            num(series.f00_sq[i]),
            num(series.thermal_part[i])
        );
    }
    Ok(text)
}

pub fn cmd_bound(config: &RunConfig) -> Result<String, CliError> {
    let scenario = config.scenario()?;
    let (spectrum, matrix) = pipeline(config, &scenario)?;
    let kernel = BoundKernel::new(&spectrum, &matrix, config.field_limit, config.mode_limit)?;
    let f_delta = stability_bound(&scenario)?;
    let mut text = config.provenance_line("bound");
    text.push_str("\nT_K,F_delta,n0_bound,free_space_asymptote\n");
    for &t in &config.temperatures {
        let at_t = scenario.with_temperature(t)?;
        let _ = writeln!(
            text,
            "{},{},{},{}",
            num(t),
            num(f_delta),
            num(kernel.lower_bound(&at_t)?),
            num(free_space_asymptote(&at_t))
        );
    }
    Ok(text)
}

/// Rows for one radius; bound columns stay empty outside the regime.
fn sweep_radius(config: &RunConfig, radius: f64) -> Result<Vec<String>, CliError> {
    let base = RunConfig {
        radius_m: radius,
        ..config.clone()
    };
    let scenario = build_scenario(
        base.omega_bar,
        radius,
        base.temperature_k,
        base.coupling_g,
        Some(base.n0_initial),
    )?;
    let report = validate_regime_with_margin(&scenario, config.margin);
    let bound = match (report.small_cavity_ok, stability_bound(&scenario)) {
        (true, Ok(f_delta)) => {
            let (spectrum, matrix) = pipeline(&base, &scenario)?;
            let kernel = BoundKernel::new(&spectrum, &matrix, base.field_limit, base.mode_limit)?;
            Some((f_delta, kernel))
        }
        _ => None,
    };
    config
        .temperatures
        .iter()
        .map(|&t| {
            let at_t = scenario.with_temperature(t)?;
            let (f, n) = match &bound {
                Some((f_delta, kernel)) => (num(*f_delta), num(kernel.lower_bound(&at_t)?)),
                None => (String::new(), String::new()),
            };
            Ok(format!(
                "{},{},{},{f},{n},{}",
                num(radius),
                num(t),
                num(scenario.delta()),
                report.small_cavity_ok
            ))
        })
        .collect()
}

pub fn cmd_sweep(config: &RunConfig) -> Result<String, CliError> {
    let radii = config
        .radii
        .clone()
        .unwrap_or_else(|| vec![config.radius_m]);
    let blocks = radii
        .par_iter()
        .map(|&r| sweep_radius(config, r))
        .collect::<Result<Vec<_>, _>>()?;
    let mut text = config.provenance_line("sweep");
    text.push_str("\nradius_m,temperature_K,delta,F_delta,n0_bound,small_cavity_ok\n");
    for row in blocks.into_iter().flatten() {
        text.push_str(&row);
        text.push('\n');
    }
    Ok(text)
}
