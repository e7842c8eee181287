//! Concurrence and purity: numeric evaluation on density matrices and the
//! closed-form evolution laws under phase damping.

use crate::channels::{noise_probabilities, GaussianFieldSpec, NoiseProbs};
use crate::error::{Error, Result};
use crate::qmath::{eig4, hermitian_eigen4, pauli_y, singular_values4, tensor2, CMat4};
use crate::states::{sr_invariants, z_expectations, SeparableParams, StateVector4, ZExpectations};
use crate::tolerances;

/// Validated two-qubit density matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoQubitState(CMat4);

impl TwoQubitState {
    /// Checks Hermiticity, unit trace and positivity.
    pub fn new(rho: CMat4) -> Result<Self> {
        if !rho.is_finite() {
            return Err(Error::InvalidState(
                "density matrix has non-finite entries".into(),
            ));
        }
        if !rho.is_hermitian(tolerances::STRUCTURAL) {
            return Err(Error::InvalidState(
                "density matrix is not Hermitian".into(),
            ));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > tolerances::STRUCTURAL || tr.im.abs() > tolerances::STRUCTURAL {
            return Err(Error::InvalidState(format!(
                "density matrix has trace {tr}"
            )));
        }
        let min = eig4(&rho)?.real_descending()[3];
        if min < -tolerances::STATE_PSD {
            return Err(Error::InvalidState(format!(
                "density matrix has negative eigenvalue {min:e}"
            )));
        }
        Ok(Self(rho))
    }

    pub fn pure(psi: &StateVector4) -> Self {
        Self(psi.density())
    }

    /// Output of a map already known to preserve the state invariants.
    pub(crate) fn from_trusted(rho: CMat4) -> Self {
        Self(rho)
    }

    pub fn maximally_mixed() -> Self {
        Self(CMat4::from_real_diag([0.25; 4]))
    }

    pub fn matrix(&self) -> &CMat4 {
        &self.0
    }

    /// `p |ψ⟩⟨ψ| + (1−p) 1/4`.
    pub fn werner(psi: &StateVector4, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain("p", p, "[0, 1]"));
        }
        let mixed = CMat4::from_real_diag([0.25 * (1.0 - p); 4]);
        Ok(Self(psi.density().scale(p.into()) + mixed))
    }
}

/// A point of the concurrence–purity plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CPPoint {
    pub c: f64,
    pub p: f64,
}

impl CPPoint {
    pub fn new(c: f64, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&c) {
            return Err(Error::domain("C", c, "[0, 1]"));
        }
        if !(0.25..=1.0).contains(&p) {
            return Err(Error::domain("P", p, "[1/4, 1]"));
        }
        Ok(Self { c, p })
    }
}

/// `tr(ρ²)`.
pub fn purity(rho: &TwoQubitState) -> f64 {
    let m = rho.matrix();
    let mut acc = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            acc += (m[(i, j)] * m[(j, i)]).re;
        }
    }
    acc.clamp(0.25, 1.0)
}

/// Wootters concurrence `max{0, λ₁−λ₂−λ₃−λ₄}` with `λ_i²` the eigenvalues of
/// `R = ρ (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
///
/// The `λ_i` are taken as the singular values of `τ = Aᵀ (σ_y⊗σ_y) A` with
/// `ρ = A A†`, which have the same values without square roots of
/// near-zero eigenvalues.
pub fn concurrence_wootters(rho: &TwoQubitState) -> Result<f64> {
    let (w, v) = hermitian_eigen4(rho.matrix())?;
    let mut a = CMat4::zeros();
    for (k, &wk) in w.iter().enumerate() {
        if wk < -tolerances::WOOTTERS_CLAMP {
            return Err(Error::Numerical(format!(
                "density matrix has negative eigenvalue {wk:e}"
            )));
        }
        let root = wk.max(0.0).sqrt();
        for i in 0..4 {
            a[(i, k)] = v[(i, k)] * root;
        }
    }
    let yy = tensor2(&pauli_y(), &pauli_y());
    let tau = a.transpose() * yy * a;
    let l = singular_values4(&tau)?;
    Ok((l[0] - l[1] - l[2] - l[3]).clamp(0.0, 1.0))
}

/// Purity after the noise mixture, from the initial z-expectations.
pub fn purity_analytic(p: &NoiseProbs, z: &ZExpectations) -> f64 {
    let [p1, p2, p3, p4] = p.p;
    let val = (p1 * p1 + p2 * p2 + p3 * p3 + p4 * p4)
        + 2.0 * (p1 * p3 + p2 * p4) * z.za * z.za
        + 2.0 * (p1 * p4 + p2 * p3) * z.zb * z.zb
        + 2.0 * (p1 * p2 + p3 * p4) * z.zab * z.zab;
    val.clamp(0.25, 1.0)
}

/// Channel factor of the separable-state law: the entangling power of the
/// mean interaction phase `μ₃` reduced by the noise mixture.
pub fn separable_channel_factor(p: &NoiseProbs, mu3: f64) -> f64 {
    let [p1, p2, p3, p4] = p.p;
    let (sin, cos) = mu3.sin_cos();
    let sin = sin.abs();
    let f_even =
        (p1 - p2).abs() * sin - ((p3 + p4).powi(2) * sin * sin + 4.0 * p3 * p4 * cos * cos).sqrt();
    // The mixture conjugated by the local σ_z⊗1 swaps the two pairs.
    let f_odd =
        (p3 - p4).abs() * sin - ((p1 + p2).powi(2) * sin * sin + 4.0 * p1 * p2 * cos * cos).sqrt();
    f_even.max(f_odd).max(0.0)
}

/// Concurrence of a product state after `U_μ ∘ noise`; only `μ₃` matters.
pub fn concurrence_separable_analytic(sep: &SeparableParams, p: &NoiseProbs, mu3: f64) -> f64 {
    (sep.variance_factor() * separable_channel_factor(p, mu3)).clamp(0.0, 1.0)
}

/// `½[e^{−(ς₁²+ς₂²)} + e^{−(ς₁²+ς₃²)} + e^{−(ς₂²+ς₃²)} − 1]`.
pub fn uncorrelated_entangling_bracket(spec: &GaussianFieldSpec) -> f64 {
    let [v1, v2, v3] = spec.varsigma_sq();
    0.5 * ((-(v1 + v2)).exp() + (-(v1 + v3)).exp() + (-(v2 + v3)).exp() - 1.0)
}

/// Largest concurrence a product state with variance factor `g` can reach
/// under the field's noise, attained at `sin μ₃ = 1`.
pub fn cmax_separable(spec: &GaussianFieldSpec, g: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&g) {
        return Err(Error::domain("g", g, "[0, 1]"));
    }
    let [p1, p2, p3, p4] = noise_probabilities(spec)?.p;
    Ok((g * (p1 - p2 - p3 - p4)).clamp(0.0, 1.0))
}

/// Concurrence of a pure state after the noise mixture alone (no mean
/// unitary), in terms of the invariants `s` and `r`.
pub fn concurrence_general_noise(psi: &StateVector4, p: &NoiseProbs) -> f64 {
    let sr = sr_invariants(psi);
    let s2 = sr.s.norm_sqr();
    let r2 = sr.r.norm_sqr();
    let x = (sr.s * sr.s - sr.r * sr.r).norm();
    let [p1, p2, p3, p4] = p.p;
    let branch = |a: f64, b: f64, c: f64, d: f64| {
        let kept = ((a * a + b * b) * s2 + 2.0 * a * b * r2 - 2.0 * a * b * x)
            .max(0.0)
            .sqrt();
        let lost = ((c * c + d * d) * s2 + 2.0 * c * d * r2 + 2.0 * c * d * x)
            .max(0.0)
            .sqrt();
        kept - lost
    };
    // identity-like pair first; the local σ_z⊗1 conjugation swaps the pairs
    branch(p1, p2, p3, p4)
        .max(branch(p3, p4, p1, p2))
        .clamp(0.0, 1.0)
}

/// `(C, P)` after single-sided dephasing with flip probability `q`, for an
/// initial pure state of concurrence `c0` and `⟨σ_z^A⟩ = za`.
pub fn single_sided_law(c0: f64, q: f64, za: f64) -> Result<CPPoint> {
    if !(0.0..=1.0).contains(&c0) {
        return Err(Error::domain("C0", c0, "[0, 1]"));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::domain("q", q, "[0, 1]"));
    }
    if !(-1.0..=1.0).contains(&za) {
        return Err(Error::domain("<sz_A>", za, "[-1, 1]"));
    }
    let c = ((1.0 - 2.0 * q) * c0).max(0.0);
    let p = 1.0 - 2.0 * q * (1.0 - q) * (1.0 - za * za);
    CPPoint::new(c, p.clamp(0.25, 1.0))
}

/// `(C, P)` of a pure state after `(1−q) ρ + q (σ_z⊗σ_z) ρ (σ_z⊗σ_z)`.
pub fn two_qubit_dephasing_law(psi: &StateVector4, q: f64) -> Result<CPPoint> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::domain("q", q, "[0, 1]"));
    }
    let sr = sr_invariants(psi);
    let (s2, r2) = (sr.s.norm_sqr(), sr.r.norm_sqr());
    let g = s2 - r2 + (sr.s * sr.s - sr.r * sr.r).norm();
    let f = 2.0 * q * (1.0 - q);
    let c = (s2 - f * g).max(0.0).sqrt().min(1.0);
    let zab = z_expectations(psi).zab;
    let p = 1.0 - f * (1.0 - zab * zab);
    CPPoint::new(c, p.clamp(0.25, 1.0))
}
