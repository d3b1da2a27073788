//! Time evolution of the dressed atom's occupation number.
//!
//! With `f_{μν}(τ) = Σ_r t_μ^r t_ν^r e^{−iΩ_r τ}` the atom's occupation is
//!
//! ```text
//! n₀(τ) = |f₀₀(τ)|²·n₀(0) + Σ_k n_k·|f₀k(τ)|²
//! ```
//!
//! where `n_k` is the Bose-Einstein occupation of field mode `k`. Phases are
//! taken relative to `Ω₀`, so every cosine argument is a frequency gap
//! `Ω_r − Ω₀` times `τ`; the moduli are unchanged.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::coupling::CouplingMatrix;
use crate::error::{Error, Result};
use crate::spectrum::{validate_regime, ModeSpectrum};
use crate::units::CavityScenario;

/// Field modes kept in the thermal `k` sum.
pub const DEFAULT_THERMAL_MODES: usize = 2_000;
/// Collective modes kept in the `l, n` sums.
pub const DEFAULT_DOUBLE_SUM_MODES: usize = 200;
pub const DEFAULT_TIME_POINTS: usize = 2_000;
/// Default time span in units of `R/c`.
pub const DEFAULT_SPAN_FACTOR: f64 = 20.0;
/// Bose factors with a larger exponent are exactly zero.
pub const BOSE_EXPONENT_CUTOFF: f64 = 700.0;

/// `1/(e^x − 1)`, zero for `x > 700` (including `x = +∞`).
pub fn bose_factor(x: f64) -> f64 {
    if x > BOSE_EXPONENT_CUTOFF || x.is_nan() {
        0.0
    } else {
        1.0 / x.exp_m1()
    }
}

/// Thermal occupation of field mode `k` (`ω_k = kπc/R`).
pub fn bose_occupation(scenario: &CavityScenario, k: usize) -> f64 {
    bose_factor(scenario.thermal_exponent(k as f64 * scenario.delta_omega()))
}

/// Long-time occupation of the atom in free space: the Bose factor at `ω̄`.
pub fn free_space_asymptote(scenario: &CavityScenario) -> f64 {
    bose_factor(scenario.thermal_exponent(scenario.omega_bar()))
}

/// `F(δ) = 1 − (2π²/3 − 2)δ`, the zero-temperature survival bound.
pub fn stability_bound(scenario: &CavityScenario) -> Result<f64> {
    let delta = scenario.delta();
    if delta >= 3.0 / (PI * PI) {
        return Err(Error::Domain(format!(
            "delta = {delta} ≥ 3/π², outside the small-cavity expansion"
        )));
    }
    Ok(1.0 - (2.0 * PI * PI / 3.0 - 2.0) * delta)
}

/// `n_points` equally spaced times on `[0, span_factor·R/c]`.
pub fn time_grid(scenario: &CavityScenario, n_points: usize, span_factor: f64) -> Result<Vec<f64>> {
    if n_points == 0 {
        return Err(Error::Domain("time grid needs at least one point".into()));
    }
    if !(span_factor.is_finite() && span_factor >= 0.0) {
        return Err(Error::Domain(format!("invalid span factor {span_factor}")));
    }
    let span = span_factor * scenario.radius() / scenario.constants().c;
    if n_points == 1 {
        return Ok(vec![0.0]);
    }
    let last = (n_points - 1) as f64;
    Ok((0..n_points).map(|i| span * i as f64 / last).collect())
}

fn check_consistent(spectrum: &ModeSpectrum, matrix: &CouplingMatrix) -> Result<()> {
    let l = matrix.mode_limit();
    if l > spectrum.truncation() || spectrum.modes()[..=l] != *matrix.modes() {
        return Err(Error::TruncationMismatch(
            "coupling matrix was not built from this spectrum".into(),
        ));
    }
    Ok(())
}

fn check_limits(matrix: &CouplingMatrix, k: usize, l: usize) -> Result<()> {
    if k > matrix.field_limit() || l > matrix.mode_limit() {
        return Err(Error::TruncationMismatch(format!(
            "requested K = {k}, L = {l} but matrix holds K = {}, L = {}",
            matrix.field_limit(),
            matrix.mode_limit()
        )));
    }
    Ok(())
}

/// Phase factors `t₀^r e^{−i(Ω_r − Ω₀)τ}` split into real and imaginary
/// parts.
fn weighted_phases(atom: &[f64], gaps: &[f64], tau: f64) -> (Vec<f64>, Vec<f64>) {
    atom.iter()
        .zip(gaps)
        .map(|(t, g)| {
            let (s, c) = (g * tau).sin_cos();
            (t * c, -t * s)
        })
        .unzip()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `f_{μν}(τ) = Σ_{r=0..L} t_μ^r t_ν^r e^{−iΩ_r τ}`.
pub fn f_munu(
    spectrum: &ModeSpectrum,
    matrix: &CouplingMatrix,
    mu: usize,
    nu: usize,
    tau: f64,
) -> Result<Complex64> {
    check_consistent(spectrum, matrix)?;
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(Error::Domain(format!("τ must be non-negative, got {tau}")));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for r in 0..=matrix.mode_limit() {
        let w = matrix.element(mu, r)? * matrix.element(nu, r)?;
        sum += Complex64::from_polar(w, -spectrum.gap(r, 0) * tau);
    }
    Ok(sum * Complex64::from_polar(1.0, -spectrum.omega0() * tau))
}

/// `Σ_{ν=0..K} |f₀ν(τ)|²`; one when the truncated matrix is orthogonal.
pub fn atom_row_norm(spectrum: &ModeSpectrum, matrix: &CouplingMatrix, tau: f64) -> Result<f64> {
    check_consistent(spectrum, matrix)?;
    let gaps: Vec<f64> = (0..=matrix.mode_limit())
        .map(|r| spectrum.gap(r, 0))
        .collect();
    let (re, im) = weighted_phases(matrix.atom(), &gaps, tau);
    let mut total = dot(matrix.atom(), &re).powi(2) + dot(matrix.atom(), &im).powi(2);
    for k in 1..=matrix.field_limit() {
        let row = matrix.field_row(k)?;
        total += dot(&row, &re).powi(2) + dot(&row, &im).powi(2);
    }
    Ok(total)
}

/// Zero-temperature kernel in the small-cavity closed form
///
/// ```text
/// |f₀₀|² = (1 − π²δ/3)² + 4δ(1 − π²δ/3) Σ_{k≤K} cos((Ω_k − Ω₀)τ)/k²
///        + 4δ² Σ_{k,l≤L} cos((Ω_k − Ω_l)τ)/(k²l²)
/// ```
pub fn f00_sq_small_cavity(
    scenario: &CavityScenario,
    spectrum: &ModeSpectrum,
    tau: f64,
    k_single: usize,
    l_double: usize,
) -> Result<f64> {
    validate_regime(scenario).require()?;
    if k_single.max(l_double) > spectrum.truncation() {
        return Err(Error::TruncationMismatch(format!(
            "sums up to {} need that many solved modes, spectrum has {}",
            k_single.max(l_double),
            spectrum.truncation()
        )));
    }
    let delta = scenario.delta();
    let a = 1.0 - PI * PI * delta / 3.0;

    let single: f64 = (1..=k_single)
        .map(|k| (spectrum.gap(k, 0) * tau).cos() / (k * k) as f64)
        .sum();

    let mut double = 0.0;
    for k in 1..=l_double {
        let wk = 1.0 / (k * k) as f64;
        let mut row = 0.0;
        for l in 1..=l_double {
            row += (spectrum.gap(k, l) * tau).cos() / (l * l) as f64;
        }
        double += wk * row;
    }

    Ok(a * a + 4.0 * delta * a * single + 4.0 * delta * delta * double)
}

/// Occupation number of the atom sampled on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionSeries {
    pub times: Vec<f64>,
    pub n0_values: Vec<f64>,
    pub f00_sq: Vec<f64>,
    pub thermal_part: Vec<f64>,
    pub temperature: f64,
    pub n0_initial: f64,
    /// Truncation of the thermal `k` sum.
    pub field_limit: usize,
    /// Truncation of the `l, n` sums.
    pub mode_limit: usize,
}

impl EvolutionSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `max_τ |n₀(τ) − 1|`.
    pub fn max_deviation_from_one(&self) -> f64 {
        self.n0_values
            .iter()
            .map(|n| (n - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Evaluates `n₀(τ)` with the thermal sum over `k ≤ K` and the collective
/// sums over `l ≤ L`. Time points are evaluated in parallel; each point sums
/// in a fixed order, so results do not depend on the thread count.
pub fn occupation_evolution(
    scenario: &CavityScenario,
    spectrum: &ModeSpectrum,
    matrix: &CouplingMatrix,
    times: &[f64],
    field_limit: usize,
    mode_limit: usize,
) -> Result<EvolutionSeries> {
    validate_regime(scenario).require()?;
    check_consistent(spectrum, matrix)?;
    check_limits(matrix, field_limit, mode_limit)?;
    if times.is_empty() {
        return Err(Error::Domain("empty time grid".into()));
    }
    if let Some(bad) = times.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
        return Err(Error::Domain(format!(
            "time {bad} is not a non-negative number"
        )));
    }

    let atom = &matrix.atom()[..=mode_limit];
    let gaps: Vec<f64> = (0..=mode_limit).map(|r| spectrum.gap(r, 0)).collect();

    // Bose factors fall with k, so the non-zero ones form a prefix.
    let weights: Vec<f64> = (1..=field_limit)
        .map(|k| bose_occupation(scenario, k))
        .take_while(|b| *b > 0.0)
        .collect();
    let rows: Vec<Vec<f64>> = (1..=weights.len())
        .into_par_iter()
        .map(|k| -> Result<Vec<f64>> { (0..=mode_limit).map(|r| matrix.field(k, r)).collect() })
        .collect::<Result<_>>()?;

    let n0_initial = scenario.n0_initial();
    let points: Vec<(f64, f64)> = times
        .par_iter()
        .map(|&tau| {
            let (re, im) = weighted_phases(atom, &gaps, tau);
            let f00_sq = dot(atom, &re).powi(2) + dot(atom, &im).powi(2);
            let mut thermal = 0.0;
            for (bose, row) in weights.iter().zip(&rows) {
                thermal += bose * (dot(row, &re).powi(2) + dot(row, &im).powi(2));
            }
            (f00_sq, thermal)
        })
        .collect();

    let (f00_sq, thermal_part): (Vec<f64>, Vec<f64>) = points.into_iter().unzip();
    let n0_values = f00_sq
        .iter()
        .zip(&thermal_part)
        .map(|(f, t)| n0_initial * f + t)
        .collect();

    Ok(EvolutionSeries {
        times: times.to_vec(),
        n0_values,
        f00_sq,
        thermal_part,
        temperature: scenario.temperature(),
        n0_initial,
        field_limit,
        mode_limit,
    })
}

/// Temperature-independent brackets of the lower bound,
/// `(t₀⁰t_k⁰)² − 2t₀⁰t_k⁰S_k − S_k²` with `S_k = Σ_{l≤L} t₀^l t_k^l`.
///
/// Built once per spectrum so temperature sweeps only redo the Bose sum.
#[derive(Debug, Clone)]
pub struct BoundKernel {
    brackets: Vec<f64>,
    delta_omega: f64,
}

impl BoundKernel {
    pub fn new(
        spectrum: &ModeSpectrum,
        matrix: &CouplingMatrix,
        field_limit: usize,
        mode_limit: usize,
    ) -> Result<Self> {
        check_consistent(spectrum, matrix)?;
        check_limits(matrix, field_limit, mode_limit)?;
        let atom = matrix.atom();
        let brackets = (1..=field_limit)
            .into_par_iter()
            .map(|k| -> Result<f64> {
                let lowest = atom[0] * matrix.field(k, 0)?;
                let mut s = 0.0;
                for (l, t0l) in atom.iter().enumerate().take(mode_limit + 1).skip(1) {
                    s += t0l * matrix.field(k, l)?;
                }
                Ok(lowest * lowest - 2.0 * lowest * s - s * s)
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            brackets,
            delta_omega: spectrum.delta_omega(),
        })
    }

    /// `Σ_k n_k · bracket_k` at the scenario's temperature.
    pub fn thermal_correction(&self, scenario: &CavityScenario) -> f64 {
        let mut sum = 0.0;
        for (k, bracket) in self.brackets.iter().enumerate() {
            let bose = bose_factor(scenario.thermal_exponent((k + 1) as f64 * self.delta_omega));
            if bose == 0.0 {
                break;
            }
            sum += bose * bracket;
        }
        sum
    }

    /// `F(δ)·n₀(0) + Σ_k n_k · bracket_k`.
    pub fn lower_bound(&self, scenario: &CavityScenario) -> Result<f64> {
        Ok(stability_bound(scenario)? * scenario.n0_initial() + self.thermal_correction(scenario))
    }
}

/// Lower bound on `min_τ n₀(τ)` from setting every cosine to −1.
pub fn occupation_lower_bound(
    scenario: &CavityScenario,
    spectrum: &ModeSpectrum,
    matrix: &CouplingMatrix,
    field_limit: usize,
    mode_limit: usize,
) -> Result<f64> {
    validate_regime(scenario).require()?;
    BoundKernel::new(spectrum, matrix, field_limit, mode_limit)?.lower_bound(scenario)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    pub f_delta: f64,
    pub n0_bound_beta: f64,
    pub thermal_correction: f64,
    pub free_space_asymptote: f64,
}

pub fn stability_report(
    scenario: &CavityScenario,
    spectrum: &ModeSpectrum,
    matrix: &CouplingMatrix,
    field_limit: usize,
    mode_limit: usize,
) -> Result<StabilityReport> {
    validate_regime(scenario).require()?;
    let kernel = BoundKernel::new(spectrum, matrix, field_limit, mode_limit)?;
    let f_delta = stability_bound(scenario)?;
    let thermal_correction = kernel.thermal_correction(scenario);
    Ok(StabilityReport {
        f_delta,
        n0_bound_beta: f_delta * scenario.n0_initial() + thermal_correction,
        thermal_correction,
        free_space_asymptote: free_space_asymptote(scenario),
    })
}

/// Mean of `n₀` over grid points with `start ≤ τ ≤ end`.
pub fn time_average(series: &EvolutionSeries, window: (f64, f64)) -> Result<f64> {
    let (start, end) = window;
    let (first, last) = match (series.times.first(), series.times.last()) {
        (Some(a), Some(b)) => (*a, *b),
        _ => return Err(Error::EmptyWindow(start, end)),
    };
    if start > end || start < first || end > last {
        return Err(Error::Domain(format!(
            "window [{start:e}, {end:e}] outside series span [{first:e}, {last:e}]"
        )));
    }
    let (sum, count) = series
        .times
        .iter()
        .zip(&series.n0_values)
        .filter(|(t, _)| **t >= start && **t <= end)
        .fold((0.0, 0usize), |(s, c), (_, n)| (s + n, c + 1));
    if count == 0 {
        return Err(Error::EmptyWindow(start, end));
    }
    Ok(sum / count as f64)
}
