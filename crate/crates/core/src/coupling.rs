//! Elements `t_μ^r` of the orthogonal matrix taking bare coordinates to
//! normal modes. Row `μ = 0` is the atom, rows `μ = k ≥ 1` are the field
//! oscillators; column `r` is the collective mode `Ω_r`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::OnceLock;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::spectrum::{validate_regime, ModeSpectrum, NormalMode};
use crate::units::CavityScenario;

/// Largest finite-N system the oracle will diagonalize.
pub const MAX_ORACLE_MODES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementMethod {
    /// Closed forms evaluated at the solved frequencies.
    Exact,
    /// Leading-order small-cavity forms.
    Approximate,
}

impl fmt::Display for ElementMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ElementMethod::Exact => "exact",
            ElementMethod::Approximate => "approximate",
        })
    }
}

impl std::str::FromStr for ElementMethod {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exact" => Ok(ElementMethod::Exact),
            "approximate" => Ok(ElementMethod::Approximate),
            other => Err(format!("unknown element method '{other}'")),
        }
    }
}

fn t0r_reduced(delta: f64, rho: f64, w: f64) -> Result<f64> {
    let detuning = w * w - rho * rho;
    let radicand =
        detuning * detuning + delta * (3.0 * w * w - rho * rho) + PI * PI * delta * delta * w * w;
    if !(radicand > 0.0) {
        return Err(Error::Domain(format!(
            "t0r radicand {radicand:e} at Ω/Δω = {w}"
        )));
    }
    Ok((2.0 * delta).sqrt() * w / radicand.sqrt())
}

/// `t₀^r = ηΩ_r / √((Ω_r² − ω̄²)² + (η²/2)(3Ω_r² − ω̄²) + π²g²Ω_r²)`.
pub fn t0r_exact(scenario: &CavityScenario, omega_r: f64) -> Result<f64> {
    if !(omega_r > 0.0) {
        return Err(Error::Domain(format!(
            "Ω_r must be positive, got {omega_r}"
        )));
    }
    t0r_reduced(
        scenario.delta(),
        scenario.reduced_atom_frequency(),
        omega_r / scenario.delta_omega(),
    )
}

/// `t_k^r = ηω_k / (ω_k² − Ω_r²) · t₀^r`. The sign is kept.
pub fn tkr_exact(scenario: &CavityScenario, k: usize, mode: &NormalMode, t0r: f64) -> Result<f64> {
    let detuning = mode.detuning_sq(k);
    if detuning == 0.0 || k == 0 {
        return Err(Error::Singular { k, r: mode.index });
    }
    Ok((2.0 * scenario.delta()).sqrt() * k as f64 / detuning * t0r)
}

/// Truncated transformation matrix: atom row up to mode `L`, field rows
/// `k = 1..=K`.
///
/// Field elements against the collective modes `r ≥ 1` are computed on first
/// use and memoized; the cache is safe to fill from several threads.
#[derive(Clone)]
pub struct CouplingMatrix {
    method: ElementMethod,
    delta: f64,
    field_limit: usize,
    modes: Vec<NormalMode>,
    atom: Vec<f64>,
    field_lowest: Vec<f64>,
    cache: Vec<OnceLock<f64>>,
}

impl fmt::Debug for CouplingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CouplingMatrix")
            .field("method", &self.method)
            .field("field_limit", &self.field_limit)
            .field("mode_limit", &self.mode_limit())
            .field("t00", &self.atom[0])
            .finish()
    }
}

impl CouplingMatrix {
    /// Elements from the closed forms at the solved frequencies.
    pub fn exact(
        scenario: &CavityScenario,
        spectrum: &ModeSpectrum,
        field_limit: usize,
        mode_limit: usize,
    ) -> Result<Self> {
        check_limits(spectrum, field_limit, mode_limit)?;
        let delta = scenario.delta();
        let rho = scenario.reduced_atom_frequency();
        let modes = spectrum.modes()[..=mode_limit].to_vec();
        let atom = modes
            .iter()
            .map(|m| t0r_reduced(delta, rho, m.reduced()))
            .collect::<Result<Vec<_>>>()?;
        let field_lowest = (1..=field_limit)
            .map(|k| tkr_exact(scenario, k, &modes[0], atom[0]))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::assemble(
            ElementMethod::Exact,
            delta,
            field_limit,
            modes,
            atom,
            field_lowest,
        ))
    }

    /// Leading-order small-cavity elements:
    /// `(t₀⁰)² = 1 − π²δ/3`, `t₀^l = √(2δ)/l`,
    /// `t_k⁰ = k√(2δ)/(k² − (Ω₀/Δω)²)`,
    /// `t_k^l = 2kδ/((k² − (l + ε_l)²)·l)`.
    pub fn approximate(
        scenario: &CavityScenario,
        spectrum: &ModeSpectrum,
        field_limit: usize,
        mode_limit: usize,
    ) -> Result<Self> {
        validate_regime(scenario).require()?;
        check_limits(spectrum, field_limit, mode_limit)?;
        let delta = scenario.delta();
        let t00_sq = 1.0 - PI * PI * delta / 3.0;
        if !(t00_sq > 0.0) {
            return Err(Error::Domain(format!(
                "delta = {delta} ≥ 3/π² leaves (t₀⁰)² = {t00_sq} non-positive"
            )));
        }
        let s2d = (2.0 * delta).sqrt();
        let modes = spectrum.modes()[..=mode_limit].to_vec();
        let mut atom = Vec::with_capacity(mode_limit + 1);
        atom.push(t00_sq.sqrt());
        atom.extend((1..=mode_limit).map(|l| s2d / l as f64));
        let field_lowest = (1..=field_limit)
            .map(|k| {
                let det = modes[0].detuning_sq(k);
                if det == 0.0 {
                    Err(Error::Singular { k, r: 0 })
                } else {
                    Ok(k as f64 * s2d / det)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::assemble(
            ElementMethod::Approximate,
            delta,
            field_limit,
            modes,
            atom,
            field_lowest,
        ))
    }

    fn assemble(
        method: ElementMethod,
        delta: f64,
        field_limit: usize,
        modes: Vec<NormalMode>,
        atom: Vec<f64>,
        field_lowest: Vec<f64>,
    ) -> Self {
        let cells = field_limit * (modes.len() - 1);
        Self {
            method,
            delta,
            field_limit,
            modes,
            atom,
            field_lowest,
            cache: (0..cells).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn method(&self) -> ElementMethod {
        self.method
    }

    /// `K`: number of field rows.
    pub fn field_limit(&self) -> usize {
        self.field_limit
    }

    /// `L`: highest collective mode index kept.
    pub fn mode_limit(&self) -> usize {
        self.modes.len() - 1
    }

    pub fn modes(&self) -> &[NormalMode] {
        &self.modes
    }

    /// Atom row `t₀^r`, `r = 0..=L`.
    pub fn atom(&self) -> &[f64] {
        &self.atom
    }

    /// `Σ_r (t₀^r)²` over the kept modes.
    pub fn atom_norm_sq(&self) -> f64 {
        self.atom.iter().map(|t| t * t).sum()
    }

    /// `t_μ^r` for `μ = 0..=K`, `r = 0..=L`.
    pub fn element(&self, mu: usize, r: usize) -> Result<f64> {
        if r > self.mode_limit() {
            return Err(Error::OutOfRange {
                index: r,
                limit: self.mode_limit(),
            });
        }
        if mu == 0 {
            Ok(self.atom[r])
        } else {
            self.field(mu, r)
        }
    }

    /// `t_k^r` for a field row `k = 1..=K`.
    pub fn field(&self, k: usize, r: usize) -> Result<f64> {
        if k == 0 || k > self.field_limit {
            return Err(Error::OutOfRange {
                index: k,
                limit: self.field_limit,
            });
        }
        if r > self.mode_limit() {
            return Err(Error::OutOfRange {
                index: r,
                limit: self.mode_limit(),
            });
        }
        if r == 0 {
            return Ok(self.field_lowest[k - 1]);
        }
        let cell = &self.cache[(k - 1) * self.mode_limit() + (r - 1)];
        if let Some(v) = cell.get() {
            return Ok(*v);
        }
        let v = self.compute_field(k, r)?;
        Ok(*cell.get_or_init(|| v))
    }

    /// Row `t_k^r` for `r = 0..=L`.
    pub fn field_row(&self, k: usize) -> Result<Vec<f64>> {
        (0..=self.mode_limit()).map(|r| self.field(k, r)).collect()
    }

    fn compute_field(&self, k: usize, r: usize) -> Result<f64> {
        let mode = &self.modes[r];
        let det = mode.detuning_sq(k);
        if det == 0.0 {
            return Err(Error::Singular { k, r });
        }
        let kf = k as f64;
        Ok(match self.method {
            ElementMethod::Exact => (2.0 * self.delta).sqrt() * kf / det * self.atom[r],
            ElementMethod::Approximate => 2.0 * kf * self.delta / (det * r as f64),
        })
    }
}

fn check_limits(spectrum: &ModeSpectrum, field_limit: usize, mode_limit: usize) -> Result<()> {
    if field_limit == 0 {
        return Err(Error::EmptySpectrum);
    }
    if mode_limit > spectrum.truncation() {
        return Err(Error::TruncationMismatch(format!(
            "mode limit {mode_limit} exceeds spectrum truncation {}",
            spectrum.truncation()
        )));
    }
    Ok(())
}

/// Small-cavity approximate matrix over the whole spectrum (`K = L`).
pub fn approx_elements(
    scenario: &CavityScenario,
    spectrum: &ModeSpectrum,
) -> Result<CouplingMatrix> {
    let k = spectrum.truncation();
    CouplingMatrix::approximate(scenario, spectrum, k, k)
}

/// Diagonalization of the finite system of one atom and `N` field modes.
#[derive(Debug, Clone)]
pub struct FiniteOracle {
    /// Normal frequencies, ascending, rad/s.
    pub frequencies: Vec<f64>,
    /// `matrix[(μ, r)] = t_μ^r`, with `t₀^r ≥ 0`.
    pub matrix: DMatrix<f64>,
}

impl FiniteOracle {
    /// `max |TᵀT − I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let n = self.matrix.ncols();
        let gram = self.matrix.transpose() * &self.matrix;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram[(i, j)] - target).abs());
            }
        }
        worst
    }
}

/// Diagonalizes the potential matrix of one atom and `N` field modes with
/// `c_k = ηω_k` and bare `ω₀² = ω̄² + Nη²`. Test oracle only.
pub fn finite_n_oracle(scenario: &CavityScenario, n: usize) -> Result<FiniteOracle> {
    if n == 0 || n > MAX_ORACLE_MODES {
        return Err(Error::OracleFailure(format!(
            "N = {n} outside 1..={MAX_ORACLE_MODES}"
        )));
    }
    // units of Δω²
    let delta = scenario.delta();
    let rho = scenario.reduced_atom_frequency();
    let s2d = (2.0 * delta).sqrt();
    let mut potential = DMatrix::<f64>::zeros(n + 1, n + 1);
    potential[(0, 0)] = rho * rho + 2.0 * delta * n as f64;
    for k in 1..=n {
        let kf = k as f64;
        potential[(k, k)] = kf * kf;
        potential[(0, k)] = -s2d * kf;
        potential[(k, 0)] = -s2d * kf;
    }

    let eig = SymmetricEigen::new(potential);
    let mut order: Vec<usize> = (0..=n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let lowest = eig.eigenvalues[order[0]];
    if !(lowest > 0.0) {
        return Err(Error::OracleFailure(format!(
            "potential not positive definite (lowest eigenvalue {lowest:e})"
        )));
    }

    let mut matrix = DMatrix::<f64>::zeros(n + 1, n + 1);
    let mut frequencies = Vec::with_capacity(n + 1);
    for (col, &src) in order.iter().enumerate() {
        let sign = if eig.eigenvectors[(0, src)] < 0.0 {
            -1.0
        } else {
            1.0
        };
        for mu in 0..=n {
            matrix[(mu, col)] = sign * eig.eigenvectors[(mu, src)];
        }
        frequencies.push(scenario.delta_omega() * eig.eigenvalues[src].sqrt());
    }
    Ok(FiniteOracle {
        frequencies,
        matrix,
    })
}
