//! Random-unitary phase-damping channels built from Gaussian phase fields.
//!
//! The sampled unitary is
//! `U(Ω) = exp(-(i/2)(Ω₁ σ_z⊗1 + Ω₂ 1⊗σ_z + Ω₃ σ_z⊗σ_z))`, so the coherence
//! `ρ_mn` picks up the phase `exp(i c^{mn}·Ω)` with `c^{mn} = e_m − e_n` and
//! basis labels `e₁ = (0,0,0)`, `e₂ = (0,1,1)`, `e₃ = (1,0,1)`, `e₄ = (1,1,0)`.
//! Averaging over a Gaussian `Ω ~ N(μ, Σ)` gives
//! `D_mn = exp(i c^{mn}·μ) · exp(−½ c^{mn}ᵀ Σ c^{mn})`.

use nalgebra::{Matrix3, SymmetricEigen};

use crate::error::{Error, Result};
use crate::measures::TwoQubitState;
use crate::qmath::{hadamard, CMat4, C64, ONE, SZ_A, SZ_AB, SZ_B};
use crate::tolerances;

/// Basis labels `e_m` of the computational basis states.
pub const BASIS_LABELS: [[f64; 3]; 4] = [
    [0.0, 0.0, 0.0],
    [0.0, 1.0, 1.0],
    [1.0, 0.0, 1.0],
    [1.0, 1.0, 0.0],
];

/// `c^{mn} = e_m − e_n`.
pub fn c_vector(m: usize, n: usize) -> [f64; 3] {
    let (em, en) = (BASIS_LABELS[m], BASIS_LABELS[n]);
    [em[0] - en[0], em[1] - en[1], em[2] - en[2]]
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn quad3(c: &[f64; 3], s: &[[f64; 3]; 3]) -> f64 {
    (0..3)
        .map(|k| (0..3).map(|l| c[k] * s[k][l] * c[l]).sum::<f64>())
        .sum()
}

/// Mean and covariance of the accumulated phases `(Ω₁, Ω₂, Ω₃)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianFieldSpec {
    mean: [f64; 3],
    cov: [[f64; 3]; 3],
}

impl GaussianFieldSpec {
    /// Validates symmetry and positive semidefiniteness of `cov`.
    pub fn new(mean: [f64; 3], cov: [[f64; 3]; 3]) -> Result<Self> {
        if mean
            .iter()
            .chain(cov.iter().flatten())
            .any(|x| !x.is_finite())
        {
            return Err(Error::Config("field spec has non-finite entries".into()));
        }
        for row in 0..3 {
            for col in row + 1..3 {
                let diff = (cov[row][col] - cov[col][row]).abs();
                if diff > tolerances::STRUCTURAL {
                    return Err(Error::NotSymmetric { row, col, diff });
                }
            }
        }
        let min_eigenvalue = symmetric_eigen(&cov)
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eigenvalue < -tolerances::PSD_CLAMP {
            return Err(Error::NotPsd { min_eigenvalue });
        }
        Ok(Self { mean, cov })
    }

    /// Uncorrelated fields with `Σ = diag(2ς₁², 2ς₂², 2ς₃²)`.
    pub fn uncorrelated(mean: [f64; 3], varsigma_sq: [f64; 3]) -> Result<Self> {
        let mut cov = [[0.0; 3]; 3];
        for k in 0..3 {
            // also rejects NaN
            #[allow(clippy::neg_cmp_op_on_partial_ord)]
            if !(varsigma_sq[k] >= 0.0) {
                return Err(Error::domain("varsigma²", varsigma_sq[k], ">= 0"));
            }
            cov[k][k] = 2.0 * varsigma_sq[k];
        }
        Self::new(mean, cov)
    }

    pub fn identity() -> Self {
        Self {
            mean: [0.0; 3],
            cov: [[0.0; 3]; 3],
        }
    }

    pub fn mean(&self) -> [f64; 3] {
        self.mean
    }

    pub fn cov(&self) -> [[f64; 3]; 3] {
        self.cov
    }

    /// `ς_k² = Σ_kk / 2`.
    pub fn varsigma_sq(&self) -> [f64; 3] {
        [
            0.5 * self.cov[0][0],
            0.5 * self.cov[1][1],
            0.5 * self.cov[2][2],
        ]
    }

    /// Largest off-diagonal covariance entry and its position.
    fn max_off_diagonal(&self) -> (usize, usize, f64) {
        [(0, 1), (0, 2), (1, 2)]
            .into_iter()
            .map(|(i, j)| (i, j, self.cov[i][j].abs()))
            .fold((0, 1, 0.0), |acc, x| if x.2 > acc.2 { x } else { acc })
    }

    pub fn is_uncorrelated(&self) -> bool {
        self.max_off_diagonal().2 <= tolerances::STRUCTURAL
    }

    /// Lower factor `L` with `L Lᵀ = Σ` from the eigendecomposition, with
    /// tiny negative eigenvalues clamped to zero. Works for singular `Σ`.
    pub fn factor(&self) -> Result<[[f64; 3]; 3]> {
        let eig = symmetric_eigen(&self.cov);
        let mut l = [[0.0; 3]; 3];
        for k in 0..3 {
            let lambda = eig.eigenvalues[k];
            if lambda < -tolerances::PSD_CLAMP {
                return Err(Error::NotPsd {
                    min_eigenvalue: lambda,
                });
            }
            let root = lambda.max(0.0).sqrt();
            for i in 0..3 {
                l[i][k] = eig.eigenvectors[(i, k)] * root;
            }
        }
        Ok(l)
    }
}

fn symmetric_eigen(cov: &[[f64; 3]; 3]) -> SymmetricEigen<f64, nalgebra::U3> {
    let m = Matrix3::from_fn(|i, j| 0.5 * (cov[i][j] + cov[j][i]));
    SymmetricEigen::new(m)
}

/// Damping matrix `D = Dμ ⋆ D̃` together with its two factors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseDampingChannel {
    d: CMat4,
    d_mu: CMat4,
    d_noise: CMat4,
}

impl PhaseDampingChannel {
    /// Channel from an explicit real noise part and mean phases.
    fn from_parts(mean: [f64; 3], noise: [[f64; 4]; 4]) -> Self {
        let mut d_mu = CMat4::zeros();
        let mut d_noise = CMat4::zeros();
        for m in 0..4 {
            for n in 0..4 {
                let c = c_vector(m, n);
                d_mu[(m, n)] = if m == n {
                    ONE
                } else {
                    C64::from_polar(1.0, dot3(&c, &mean))
                };
                d_noise[(m, n)] = C64::new(noise[m][n], 0.0);
            }
        }
        let d = hadamard(&d_mu, &d_noise);
        Self { d, d_mu, d_noise }
    }

    pub fn identity() -> Self {
        Self::from_parts([0.0; 3], [[1.0; 4]; 4])
    }

    pub fn matrix(&self) -> &CMat4 {
        &self.d
    }

    pub fn unitary_part(&self) -> &CMat4 {
        &self.d_mu
    }

    pub fn noise_part(&self) -> &CMat4 {
        &self.d_noise
    }

    /// Channel whose damping matrix is the entrywise product of both,
    /// i.e. `self` and `other` applied in either order.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            d: hadamard(&self.d, &other.d),
            d_mu: hadamard(&self.d_mu, &other.d_mu),
            d_noise: hadamard(&self.d_noise, &other.d_noise),
        }
    }

    /// Channel with all noise removed, keeping only the mean unitary.
    pub fn unitary_only(&self) -> Self {
        Self {
            d: self.d_mu,
            d_mu: self.d_mu,
            d_noise: CMat4::filled(ONE),
        }
    }

    /// Channel with the mean unitary removed.
    pub fn noise_only(&self) -> Self {
        Self {
            d: self.d_noise,
            d_mu: CMat4::filled(ONE),
            d_noise: self.d_noise,
        }
    }
}

pub fn damping_matrix(spec: &GaussianFieldSpec) -> PhaseDampingChannel {
    let mut noise = [[1.0; 4]; 4];
    for (m, row) in noise.iter_mut().enumerate() {
        for (n, v) in row.iter_mut().enumerate() {
            if m != n {
                *v = (-0.5 * quad3(&c_vector(m, n), &spec.cov)).exp().min(1.0);
            }
        }
    }
    PhaseDampingChannel::from_parts(spec.mean, noise)
}

/// Weights of `1`, `σ_z⊗σ_z`, `σ_z⊗1`, `1⊗σ_z` in the noise mixture.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseProbs {
    pub p: [f64; 4],
}

impl NoiseProbs {
    pub fn new(p: [f64; 4]) -> Result<Self> {
        if p.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(Error::InvalidProbabilities(format!(
                "{p:?} has entries outside [0, 1]"
            )));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > tolerances::STRUCTURAL {
            return Err(Error::InvalidProbabilities(format!(
                "{p:?} sums to {total}"
            )));
        }
        Ok(Self { p })
    }

    pub fn identity() -> Self {
        Self {
            p: [1.0, 0.0, 0.0, 0.0],
        }
    }

    /// Coherence factor `Σ_i p_i s_i(m) s_i(n)` this mixture applies to `ρ_mn`.
    pub fn coherence_factor(&self, m: usize, n: usize) -> f64 {
        NOISE_DIAGONALS
            .iter()
            .zip(self.p)
            .map(|(d, p)| p * d[m] * d[n])
            .sum()
    }

    /// Real noise matrix `D̃` realized by this mixture.
    pub fn noise_matrix(&self) -> [[f64; 4]; 4] {
        let mut out = [[1.0; 4]; 4];
        for (m, row) in out.iter_mut().enumerate() {
            for (n, v) in row.iter_mut().enumerate() {
                if m != n {
                    *v = self.coherence_factor(m, n);
                }
            }
        }
        out
    }

    /// Phase-damping channel `U_μ ∘ (this mixture)`.
    pub fn channel(&self, mean: [f64; 3]) -> PhaseDampingChannel {
        PhaseDampingChannel::from_parts(mean, self.noise_matrix())
    }
}

/// Diagonals of the four mixture unitaries, in the order of [`NoiseProbs`].
pub const NOISE_DIAGONALS: [[f64; 4]; 4] = [[1.0; 4], SZ_AB, SZ_A, SZ_B];

pub fn noise_probabilities(spec: &GaussianFieldSpec) -> Result<NoiseProbs> {
    let (row, col, value) = spec.max_off_diagonal();
    if value > tolerances::STRUCTURAL {
        return Err(Error::CorrelatedNoise { row, col, value });
    }
    let [x1, x2, x3] = spec.varsigma_sq().map(|v| (-v).exp());
    let (a1, b1) = (1.0 + x1, 1.0 - x1);
    let (a2, b2) = (1.0 + x2, 1.0 - x2);
    let (a3, b3) = (1.0 + x3, 1.0 - x3);
    let p = [
        (a1 * a2 * a3 + b1 * b2 * b3) / 8.0,
        (a1 * a2 * b3 + b1 * b2 * a3) / 8.0,
        (a1 * b2 * b3 + b1 * a2 * a3) / 8.0,
        (a1 * b2 * a3 + b1 * a2 * b3) / 8.0,
    ];
    NoiseProbs::new(p)
}

pub fn apply_channel(ch: &PhaseDampingChannel, rho: &TwoQubitState) -> TwoQubitState {
    TwoQubitState::from_trusted(hadamard(ch.matrix(), rho.matrix()))
}

/// `Σ_i p_i V_i ρ V_i†` with `V_i` the diagonal Pauli products.
pub fn apply_noise_rlu(p: &NoiseProbs, rho: &TwoQubitState) -> TwoQubitState {
    let r = rho.matrix();
    let mut out = CMat4::zeros();
    for (w, d) in p.p.iter().zip(NOISE_DIAGONALS) {
        if *w == 0.0 {
            continue;
        }
        for m in 0..4 {
            for n in 0..4 {
                out[(m, n)] += *w * d[m] * d[n] * r[(m, n)];
            }
        }
    }
    // the weights sum to one, so populations are unchanged
    for k in 0..4 {
        out[(k, k)] = r[(k, k)];
    }
    TwoQubitState::from_trusted(out)
}

/// Diagonal of `U(Ω) = exp(-(i/2)(Ω₁σ_z⊗1 + Ω₂1⊗σ_z + Ω₃σ_z⊗σ_z))`.
pub fn phase_unitary_diagonal(omega: &[f64; 3]) -> [C64; 4] {
    std::array::from_fn(|m| {
        let h = SZ_A[m] * omega[0] + SZ_B[m] * omega[1] + SZ_AB[m] * omega[2];
        C64::from_polar(1.0, -0.5 * h)
    })
}

/// `U_μ`, the unitary generated by the mean fields.
pub fn mean_unitary(spec: &GaussianFieldSpec) -> CMat4 {
    CMat4::from_diag(phase_unitary_diagonal(&spec.mean))
}

/// Dephasing of qubit A alone: `(1−q) ρ + q (σ_z⊗1) ρ (σ_z⊗1)`.
pub fn single_sided_channel(q: f64) -> Result<(PhaseDampingChannel, NoiseProbs)> {
    check_flip_probability(q)?;
    let p = NoiseProbs::new([1.0 - q, 0.0, q, 0.0])?;
    Ok((p.channel([0.0; 3]), p))
}

/// Correlated dephasing `(1−q) ρ + q (σ_z⊗σ_z) ρ (σ_z⊗σ_z)`.
pub fn two_qubit_dephasing_channel(q: f64) -> Result<(PhaseDampingChannel, NoiseProbs)> {
    check_flip_probability(q)?;
    let p = NoiseProbs::new([1.0 - q, q, 0.0, 0.0])?;
    Ok((p.channel([0.0; 3]), p))
}

fn check_flip_probability(q: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::domain("q", q, "[0, 1]"));
    }
    Ok(())
}

/// One Kraus operator `√p · U_μ V`, stored as its weight and the diagonal
/// of the unitary `U_μ V`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KrausTerm {
    pub weight: f64,
    pub unitary: [C64; 4],
}

impl KrausTerm {
    pub fn operator(&self) -> CMat4 {
        CMat4::from_diag(self.unitary).scale(C64::new(self.weight.sqrt(), 0.0))
    }
}

/// Kraus terms with nonzero weight.
pub fn kraus_form(p: &NoiseProbs, mean: [f64; 3]) -> Vec<KrausTerm> {
    let u_mu = phase_unitary_diagonal(&mean);
    p.p.iter()
        .zip(NOISE_DIAGONALS)
        .filter(|(w, _)| **w > 0.0)
        .map(|(w, d)| KrausTerm {
            weight: *w,
            unitary: std::array::from_fn(|k| u_mu[k] * d[k]),
        })
        .collect()
}

/// `Σ_i K_i ρ K_i†`.
pub fn apply_kraus(terms: &[KrausTerm], rho: &CMat4) -> CMat4 {
    terms.iter().fold(CMat4::zeros(), |acc, t| {
        let k = t.operator();
        acc + k * *rho * k.adjoint()
    })
}
