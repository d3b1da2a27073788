//! Normal-mode eigenfrequencies of the atom coupled to the cavity field.
//!
//! In units of the mode spacing `Δω = πc/R`, a collective frequency
//! `Ω = Δω·u` solves
//!
//! ```text
//! π·cot(πu) = u/δ + (1 − κ)/u,        κ = δ·ω̄²/g²
//! ```
//!
//! which follows from summing `Σ_k 1/(k² − u²) = 1/(2u²) − π·cot(πu)/(2u)`.
//! The right-hand side is increasing in `u` when `κ > 1`, so every interval
//! between consecutive cotangent poles holds exactly one root. Writing
//! `u = r + ε` the cotangent only depends on `ε`, which is what the solver
//! bisects on; evaluating `cot(RΩ/c)` directly would lose the small shift
//! `ε_k ~ δ/k` to rounding at large `k`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::units::CavityScenario;

/// Spectrum truncation used when the caller has no better choice.
pub const DEFAULT_SPECTRUM_MODES: usize = 10_000;
/// Relative bisection tolerance on the bisected variable.
pub const BISECTION_REL_TOL: f64 = 1e-12;
pub const BISECTION_MAX_ITER: usize = 200;
/// Distance kept from each cotangent pole, in units of `Δω`.
pub const BRACKET_MARGIN: f64 = 1e-9;
/// `|k² − (ω̄/Δω)²|` below this fraction of `(ω̄/Δω)²` counts as resonant.
pub const RESONANCE_FRACTION: f64 = 0.1;
/// Factor applied to the `R ≪ (c/g)λ` comparison.
pub const DEFAULT_REGIME_MARGIN: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    /// Every root by bisection.
    Exact,
    /// `Ω₀` by bisection, `Ω_k` from the linearized shift only.
    Linearized,
    /// `Ω₀` by bisection, `Ω_k` linearized with an exact fallback near
    /// resonance.
    Hybrid,
}

impl std::fmt::Display for SolveMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolveMethod::Exact => "exact",
            SolveMethod::Linearized => "linearized",
            SolveMethod::Hybrid => "hybrid",
        })
    }
}

impl std::str::FromStr for SolveMethod {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exact" => Ok(SolveMethod::Exact),
            "linearized" => Ok(SolveMethod::Linearized),
            "hybrid" => Ok(SolveMethod::Hybrid),
            other => Err(format!("unknown spectrum method '{other}'")),
        }
    }
}

/// Collective mode `r` with frequency `Ω_r = Δω·(r + ε)`.
///
/// For `r ≥ 1`, `epsilon` is the shift `ε_r ∈ (0, 1)` above the field mode
/// `ω_r`. For the lowest mode (`r = 0`) it is `Ω₀/Δω` itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalMode {
    pub index: usize,
    pub epsilon: f64,
}

impl NormalMode {
    /// `Ω_r/Δω`.
    pub fn reduced(&self) -> f64 {
        self.index as f64 + self.epsilon
    }

    /// `k² − (Ω_r/Δω)²`, factored so the integer part cancels exactly.
    pub fn detuning_sq(&self, k: usize) -> f64 {
        let diff = (k as f64 - self.index as f64) - self.epsilon;
        let sum = (k + self.index) as f64 + self.epsilon;
        diff * sum
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeSpectrum {
    delta_omega: f64,
    modes: Vec<NormalMode>,
    method: SolveMethod,
}

impl ModeSpectrum {
    pub fn method(&self) -> SolveMethod {
        self.method
    }

    /// Number of field-mode intervals solved, `K`.
    pub fn truncation(&self) -> usize {
        self.modes.len() - 1
    }

    /// All modes, lowest first; `modes()[r].index == r`.
    pub fn modes(&self) -> &[NormalMode] {
        &self.modes
    }

    pub fn mode(&self, r: usize) -> Option<&NormalMode> {
        self.modes.get(r)
    }

    pub fn delta_omega(&self) -> f64 {
        self.delta_omega
    }

    /// Lowest eigenfrequency `Ω₀`, rad/s.
    pub fn omega0(&self) -> f64 {
        self.delta_omega * self.modes[0].epsilon
    }

    /// `Ω_r`, rad/s.
    pub fn frequency(&self, r: usize) -> f64 {
        self.delta_omega * self.modes[r].reduced()
    }

    /// Bare field frequency `ω_k = kΔω`.
    pub fn field_frequency(&self, k: usize) -> f64 {
        self.delta_omega * k as f64
    }

    /// `Ω_r − Ω_s`, formed from the integer and shift parts separately.
    pub fn gap(&self, r: usize, s: usize) -> f64 {
        let (a, b) = (&self.modes[r], &self.modes[s]);
        self.delta_omega * ((a.index as f64 - b.index as f64) + (a.epsilon - b.epsilon))
    }

    /// `ω_k < Ω_k < ω_{k+1}` for every solved `k`, and `Ω₀ < ω₁`.
    pub fn is_interlaced(&self) -> bool {
        self.modes
            .iter()
            .enumerate()
            .all(|(r, m)| m.index == r && m.epsilon > 0.0 && m.epsilon < 1.0)
    }
}

/// Bare cavity frequencies `ω_k = kπc/R` for `k = 1..=k_max`.
pub fn field_mode_frequencies(scenario: &CavityScenario, k_max: usize) -> Result<Vec<f64>> {
    if k_max == 0 {
        return Err(Error::EmptySpectrum);
    }
    let dw = scenario.delta_omega();
    Ok((1..=k_max).map(|k| k as f64 * dw).collect())
}

/// Which small-cavity conditions a scenario satisfies.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeReport {
    pub delta: f64,
    /// `g²/ω̄²`; `condition_c1` is `delta > delta_threshold`.
    pub delta_threshold: f64,
    pub condition_c1: bool,
    /// Radius at which `delta == delta_threshold`, m.
    pub radius_threshold: f64,
    /// `ω̄ < πc/R`: the atom sits below the first cavity mode.
    pub below_first_mode: bool,
    /// `margin·R ≤ (c/g)λ` with `λ = (π/2)(g/ω̄)²`. Reported only; it fails
    /// for every radius that also satisfies `condition_c1`.
    pub condition_c2: bool,
    /// `(c/g)λ`, m.
    pub r_upper_bound: f64,
    pub margin: f64,
    /// `condition_c1 && below_first_mode`.
    pub small_cavity_ok: bool,
}

impl RegimeReport {
    pub fn require(&self) -> Result<()> {
        if self.small_cavity_ok {
            return Ok(());
        }
        let mut why = Vec::new();
        if !self.condition_c1 {
            why.push(format!(
                "delta = {:e} is not above g²/ω̄² = {:e}",
                self.delta, self.delta_threshold
            ));
        }
        if !self.below_first_mode {
            why.push("ω̄ lies above the first cavity mode πc/R".to_string());
        }
        Err(Error::RegimeViolation(why.join("; ")))
    }
}

pub fn validate_regime(scenario: &CavityScenario) -> RegimeReport {
    validate_regime_with_margin(scenario, DEFAULT_REGIME_MARGIN)
}

pub fn validate_regime_with_margin(scenario: &CavityScenario, margin: f64) -> RegimeReport {
    let c = scenario.constants().c;
    let g = scenario.coupling();
    let wbar = scenario.omega_bar();
    let delta = scenario.delta();

    let ratio = g / wbar;
    let delta_threshold = ratio * ratio;
    let condition_c1 = delta > delta_threshold;
    let radius_threshold = PI * c * g / (wbar * wbar);
    let below_first_mode = wbar < scenario.delta_omega();
    let lambda = 0.5 * PI * ratio * ratio;
    let r_upper_bound = (c / g) * lambda;
    let condition_c2 = scenario.radius() * margin <= r_upper_bound;

    RegimeReport {
        delta,
        delta_threshold,
        condition_c1,
        radius_threshold,
        below_first_mode,
        condition_c2,
        r_upper_bound,
        margin,
        small_cavity_ok: condition_c1 && below_first_mode,
    }
}

struct Secular {
    delta: f64,
    one_minus_kappa: f64,
}

impl Secular {
    fn new(scenario: &CavityScenario) -> Self {
        Self {
            delta: scenario.delta(),
            one_minus_kappa: 1.0 - scenario.kappa(),
        }
    }

    fn sides(&self, index: usize, epsilon: f64) -> (f64, f64) {
        let u = index as f64 + epsilon;
        let lhs = PI / (PI * epsilon).tan();
        let rhs = u / self.delta + self.one_minus_kappa / u;
        (lhs, rhs)
    }

    fn eval(&self, index: usize, epsilon: f64) -> f64 {
        let (lhs, rhs) = self.sides(index, epsilon);
        lhs - rhs
    }

    fn solve(&self, index: usize, lo: f64, hi: f64) -> Result<NormalMode> {
        let epsilon = bisect(|e| self.eval(index, e), lo, hi, index)?;
        Ok(NormalMode { index, epsilon })
    }
}

/// Relative residual `|LHS − RHS| / max(|LHS|, |RHS|)` of the secular
/// equation at `mode`.
pub fn secular_residual(scenario: &CavityScenario, mode: &NormalMode) -> f64 {
    let (lhs, rhs) = Secular::new(scenario).sides(mode.index, mode.epsilon);
    let scale = lhs.abs().max(rhs.abs());
    if scale == 0.0 {
        0.0
    } else {
        (lhs - rhs).abs() / scale
    }
}

fn bisect<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, mode: usize) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a);
    let fb = f(b);
    if !(fa.is_finite() && fb.is_finite()) || (fa > 0.0) == (fb > 0.0) {
        return Err(Error::RootNotBracketed { mode, lo, hi });
    }
    for _ in 0..BISECTION_MAX_ITER {
        let mid = 0.5 * (a + b);
        if b - a <= BISECTION_REL_TOL * mid.abs() || mid <= a || mid >= b {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Err(Error::NoConvergence {
        mode,
        iterations: BISECTION_MAX_ITER,
    })
}

fn solve_lowest(scenario: &CavityScenario) -> Result<NormalMode> {
    let lo = 1e-3 * scenario.reduced_atom_frequency();
    Secular::new(scenario).solve(0, lo, 1.0 - BRACKET_MARGIN)
}

/// Exact shift `ε_k ∈ (0, 1)` of the `k`-th collective mode.
pub fn solve_epsilon_exact(scenario: &CavityScenario, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::EmptySpectrum);
    }
    Secular::new(scenario)
        .solve(k, BRACKET_MARGIN, 1.0 - BRACKET_MARGIN)
        .map(|m| m.epsilon)
}

/// First-order shift `ε_k = πgcRk / (π²c²k² − ω̄²R²)`.
///
/// Returns [`Error::Resonance`] when `|k² − ρ²| < 0.1·ρ²` with `ρ = ω̄/Δω`;
/// callers fall back to [`solve_epsilon_exact`] there.
pub fn epsilon_k_linearized(scenario: &CavityScenario, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::EmptySpectrum);
    }
    let rho = scenario.reduced_atom_frequency();
    let kf = k as f64;
    let detuning = kf * kf - rho * rho;
    if detuning.abs() < RESONANCE_FRACTION * rho * rho {
        return Err(Error::Resonance { k });
    }
    Ok(scenario.delta() * kf / detuning)
}

/// Small-cavity closed form `Ω₀ ≈ ω̄(1 − πδ/2)`.
pub fn omega0_small_cavity(scenario: &CavityScenario) -> Result<f64> {
    validate_regime(scenario).require()?;
    Ok(scenario.omega_bar() * (1.0 - 0.5 * PI * scenario.delta()))
}

/// Solves `Ω₀` and `Ω_1..Ω_K` by bisection.
pub fn solve_spectrum_exact(scenario: &CavityScenario, k_max: usize) -> Result<ModeSpectrum> {
    solve_spectrum(scenario, k_max, SolveMethod::Exact)
}

pub fn solve_spectrum(
    scenario: &CavityScenario,
    k_max: usize,
    method: SolveMethod,
) -> Result<ModeSpectrum> {
    if k_max == 0 {
        return Err(Error::EmptySpectrum);
    }
    validate_regime(scenario).require()?;

    let secular = Secular::new(scenario);
    let lowest = solve_lowest(scenario)?;
    let exact = |k: usize| secular.solve(k, BRACKET_MARGIN, 1.0 - BRACKET_MARGIN);
    let linear = |k: usize| -> Result<NormalMode> {
        let epsilon = epsilon_k_linearized(scenario, k)?;
        if epsilon > 0.0 && epsilon < 1.0 {
            Ok(NormalMode { index: k, epsilon })
        } else {
            Err(Error::Resonance { k })
        }
    };

    let tower: Vec<NormalMode> = (1..=k_max)
        .into_par_iter()
        .map(|k| match method {
            SolveMethod::Exact => exact(k),
            SolveMethod::Linearized => linear(k),
            SolveMethod::Hybrid => match linear(k) {
                Err(Error::Resonance { .. }) => exact(k),
                other => other,
            },
        })
        .collect::<Result<_>>()?;

    let mut modes = Vec::with_capacity(k_max + 1);
    modes.push(lowest);
    modes.extend(tower);
    Ok(ModeSpectrum {
        delta_omega: scenario.delta_omega(),
        modes,
        method,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesCheck {
    pub truncated_sum: f64,
    pub closed_form: f64,
    pub abs_error: f64,
}

/// Compares `Σ_{k=1..K} 1/(k² − u²)` with `1/(2u²) − π·cot(πu)/(2u)`.
pub fn series_identity_check(u: f64, k_max: usize) -> Result<SeriesCheck> {
    if k_max == 0 {
        return Err(Error::EmptySpectrum);
    }
    if !u.is_finite() || u.fract() == 0.0 {
        return Err(Error::SeriesPole(u));
    }
    let u2 = u * u;
    // smallest terms first
    let truncated_sum: f64 = (1..=k_max)
        .rev()
        .map(|k| {
            let k = k as f64;
            1.0 / (k * k - u2)
        })
        .sum();
    let closed_form = cot_series_closed_form(u);
    Ok(SeriesCheck {
        truncated_sum,
        closed_form,
        abs_error: (truncated_sum - closed_form).abs(),
    })
}

/// `1/(2u²) − π·cot(πu)/(2u) = (sin x − x·cos x) / (2u²·sin x)`, `x = πu`,
/// with the numerator expanded near zero where it cancels.
fn cot_series_closed_form(u: f64) -> f64 {
    let x = PI * u;
    let numerator = if x.abs() < 0.5 {
        // sin x − x cos x = Σ_{n≥1} (−1)^{n+1} 2n x^{2n+1} / (2n+1)!
        let x2 = x * x;
        let mut power = x * x2; // x^{2n+1}
        let mut factorial = 6.0; // (2n+1)!
        let mut sum = 0.0;
        for n in 1..=12 {
            let nf = n as f64;
            let term = 2.0 * nf * power / factorial;
            sum += if n % 2 == 1 { term } else { -term };
            power *= x2;
            factorial *= (2.0 * nf + 2.0) * (2.0 * nf + 3.0);
        }
        sum
    } else {
        x.sin() - x * x.cos()
    };
    numerator / (2.0 * u * u * x.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::build_scenario;
    use approx::assert_relative_eq;

    // Frozen from a 40-digit root solve of the secular equation.
    const U0: f64 = 0.422_257_482_436_811_63;
    const OMEGA0_EXACT: f64 = 3.976_929_842_999_954e14;
    const EPS_EXACT: [(usize, f64); 5] = [
        (1, 3.746_795_590_084_530_3e-3),
        (2, 1.620_033_175_063_885e-3),
        (3, 1.053_448_136_959_286_7e-3),
        (10, 3.104_642_963_497_869_7e-4),
        (100, 3.099_290_666_502_867e-5),
    ];
    const EPS1_LINEAR: f64 = 3.781_290_956_134_492_2e-3;
    const OMEGA1: f64 = 9.418_257_836_544_266e14;

    fn baseline() -> CavityScenario {
        build_scenario(4.0e14, 1.0e-6, 300.0, None, None).unwrap()
    }

    #[test]
    fn field_modes() {
        let s = baseline();
        let w = field_mode_frequencies(&s, 3).unwrap();
        assert_relative_eq!(w[0], OMEGA1, max_relative = 1e-15);
        assert_eq!(w[1], 2.0 * w[0]);
        assert_eq!(w[2], 3.0 * w[0]);
        let s2 = build_scenario(4.0e14, 2.0e-6, 300.0, None, None).unwrap();
        let w2 = field_mode_frequencies(&s2, 3).unwrap();
        assert_relative_eq!(w2[2], 0.5 * w[2], max_relative = 1e-15);
        assert_eq!(field_mode_frequencies(&s, 0), Err(Error::EmptySpectrum));
    }

    #[test]
    fn regime_thresholds() {
        let s = baseline();
        let r = validate_regime(&s);
        let a2 = s.constants().alpha.powi(2);
        assert_relative_eq!(r.delta_threshold, a2, max_relative = 1e-14);
        assert_relative_eq!(
            r.radius_threshold,
            1.718_208_700_545_904e-8,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            r.r_upper_bound,
            8.591_043_502_729_52e-9,
            max_relative = 1e-12
        );
        assert!(r.condition_c1 && r.below_first_mode && r.small_cavity_ok);
        assert!(!r.condition_c2);

        let tiny = build_scenario(4.0e14, 1.0e-9, 300.0, None, None).unwrap();
        assert!(!validate_regime(&tiny).condition_c1);
        assert!(matches!(
            validate_regime(&tiny).require(),
            Err(Error::RegimeViolation(_))
        ));

        // ω̄ above the first mode
        let big = build_scenario(4.0e14, 3.0e-6, 300.0, None, None).unwrap();
        assert!(!validate_regime(&big).below_first_mode);
        assert!(solve_spectrum_exact(&big, 5).is_err());
    }

    #[test]
    fn regime_boundary_is_strict() {
        let rt = validate_regime(&baseline()).radius_threshold;
        let mut r = rt * (1.0 - 64.0 * f64::EPSILON);
        while r < rt * (1.0 + 64.0 * f64::EPSILON) {
            let s = build_scenario(4.0e14, r, 0.0, None, None).unwrap();
            let rep = validate_regime(&s);
            assert_eq!(rep.condition_c1, rep.delta > rep.delta_threshold);
            if rep.delta == rep.delta_threshold {
                assert!(!rep.condition_c1);
            }
            r = f64::from_bits(r.to_bits() + 1);
        }
        let below = build_scenario(4.0e14, rt * 0.999, 0.0, None, None).unwrap();
        let above = build_scenario(4.0e14, rt * 1.001, 0.0, None, None).unwrap();
        assert!(!validate_regime(&below).condition_c1);
        assert!(validate_regime(&above).condition_c1);
    }

    #[test]
    fn lowest_root_matches_oracle() {
        let s = baseline();
        let spec = solve_spectrum_exact(&s, 10).unwrap();
        assert_relative_eq!(spec.modes()[0].epsilon, U0, max_relative = 1e-12);
        assert_relative_eq!(spec.omega0(), OMEGA0_EXACT, max_relative = 1e-12);
        let closed = omega0_small_cavity(&s).unwrap();
        assert_relative_eq!(closed, 3.980_526_921_543_036e14, max_relative = 1e-13);
        // the quadratic expansion misses 9.0e-4 here
        let rel = (spec.omega0() - closed).abs() / closed;
        assert!(rel < 1e-3, "{rel}");
    }

    #[test]
    fn exact_shifts_match_oracle() {
        let s = baseline();
        for (k, eps) in EPS_EXACT {
            let e = solve_epsilon_exact(&s, k).unwrap();
            assert_relative_eq!(e, eps, max_relative = 1e-11);
            let res = secular_residual(
                &s,
                &NormalMode {
                    index: k,
                    epsilon: e,
                },
            );
            assert!(res < 1e-9, "k={k} residual {res}");
        }
    }

    #[test]
    fn linearized_shift() {
        let s = baseline();
        assert_relative_eq!(
            epsilon_k_linearized(&s, 1).unwrap(),
            EPS1_LINEAR,
            max_relative = 1e-13
        );
        // tends to δ/k
        let k = 100_000;
        let e = epsilon_k_linearized(&s, k).unwrap();
        assert_relative_eq!(e * k as f64, s.delta(), max_relative = 1e-9);
        // the linearization error is O(ε_k/k); tight from k = 3 on
        for k in 3..=100 {
            let lin = epsilon_k_linearized(&s, k).unwrap();
            let ex = solve_epsilon_exact(&s, k).unwrap();
            assert!(((lin - ex) / ex).abs() < 1e-3, "k={k}");
        }
        let one = (EPS1_LINEAR - EPS_EXACT[0].1) / EPS_EXACT[0].1;
        assert!(one > 9e-3 && one < 1e-2);
    }

    #[test]
    fn resonance_rejected_and_exact_still_solves() {
        // ω̄ = 0.98 Δω sits on top of k = 1
        let r = 1.0e-6;
        let dw = PI * 299_792_458.0 / r;
        let s = build_scenario(0.98 * dw, r, 0.0, None, None).unwrap();
        assert_eq!(epsilon_k_linearized(&s, 1), Err(Error::Resonance { k: 1 }));
        let e = solve_epsilon_exact(&s, 1).unwrap();
        assert!(e > 0.0 && e < 1.0);
        let hybrid = solve_spectrum(&s, 4, SolveMethod::Hybrid).unwrap();
        assert_eq!(hybrid.modes()[1].epsilon, e);
        assert!(solve_spectrum(&s, 4, SolveMethod::Linearized).is_err());
    }

    #[test]
    fn decoupling_limit() {
        let s = build_scenario(4.0e14, 1.0e-6, 0.0, Some(3.0e8), None).unwrap();
        assert!(s.delta() < 1e-6);
        let spec = solve_spectrum_exact(&s, 20).unwrap();
        assert_relative_eq!(spec.omega0(), 4.0e14, max_relative = 2e-6);
        for k in 1..=20 {
            let rel = (spec.frequency(k) - spec.field_frequency(k)) / spec.field_frequency(k);
            assert!(rel > 0.0 && rel < 1e-6);
        }
    }

    #[test]
    fn spectrum_interlaces_and_orders() {
        let s = baseline();
        for method in [
            SolveMethod::Exact,
            SolveMethod::Hybrid,
            SolveMethod::Linearized,
        ] {
            let spec = solve_spectrum(&s, 200, method).unwrap();
            assert!(spec.is_interlaced());
            assert_eq!(spec.truncation(), 200);
            for r in 1..=200 {
                assert!(spec.frequency(r) > spec.frequency(r - 1));
                assert!(spec.field_frequency(r) < spec.frequency(r));
                assert!(spec.frequency(r) < spec.field_frequency(r + 1));
            }
        }
        assert_eq!(solve_spectrum_exact(&s, 0), Err(Error::EmptySpectrum));
    }

    #[test]
    fn exact_residuals_small() {
        let s = baseline();
        let spec = solve_spectrum_exact(&s, 2000).unwrap();
        for m in spec.modes() {
            assert!(secular_residual(&s, m) < 1e-9, "{m:?}");
        }
    }

    #[test]
    fn shifts_decay_like_delta_over_k() {
        let s = baseline();
        let spec = solve_spectrum_exact(&s, 5000).unwrap();
        for k in [100, 1000, 5000] {
            let e = spec.modes()[k].epsilon;
            assert_relative_eq!(e * k as f64, s.delta(), max_relative = 1e-4);
        }
        let eps: Vec<f64> = spec.modes()[1..].iter().map(|m| m.epsilon).collect();
        assert!(eps.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn gap_matches_difference() {
        let s = baseline();
        let spec = solve_spectrum_exact(&s, 5).unwrap();
        assert_relative_eq!(
            spec.gap(3, 0),
            spec.frequency(3) - spec.frequency(0),
            max_relative = 1e-14
        );
    }

    #[test]
    fn series_identity() {
        let c = series_identity_check(0.3, 1_000_000).unwrap();
        assert_relative_eq!(c.closed_form, 1.751_387_774_718_558_3, max_relative = 1e-14);
        assert!(c.abs_error < 1e-6, "{}", c.abs_error);
        let z = series_identity_check(1e-6, 10).unwrap();
        assert!((z.closed_form - PI * PI / 6.0).abs() < 1e-6);
        let h = series_identity_check(0.5, 10).unwrap();
        assert_relative_eq!(h.closed_form, 2.0, max_relative = 1e-14);
        assert_eq!(series_identity_check(2.0, 10), Err(Error::SeriesPole(2.0)));
        assert_eq!(series_identity_check(0.0, 10), Err(Error::SeriesPole(0.0)));
    }

    #[test]
    fn closed_form_branches_agree() {
        // both sides of the |πu| = 0.5 switch
        for u in [0.159, 0.1591, 0.1592, 0.16] {
            let x = PI * u;
            let direct = (x.sin() - x * x.cos()) / (2.0 * u * u * x.sin());
            assert_relative_eq!(cot_series_closed_form(u), direct, max_relative = 1e-12);
        }
    }
}
