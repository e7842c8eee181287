//! Pure two-qubit states: construction, z-expectations and the bilinear
//! invariants `s`, `r` that govern concurrence under phase damping.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::qmath::{pauli_y, tensor2, CMat2, CMat4, CVec4, C64, SZ_A, SZ_AB, SZ_B, ZERO};
use crate::tolerances;

/// Schmidt-form parameters of a pure state up to the local operations that
/// commute with diagonal dynamics:
/// `(e^{-iθ₁σx/2} ⊗ e^{-iθ₂σx/2}) (√a|00⟩ + e^{-iχ}√(1-a)|11⟩)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureStateParams {
    a: f64,
    chi: f64,
    theta1: f64,
    theta2: f64,
}

impl PureStateParams {
    pub fn new(a: f64, chi: f64, theta1: f64, theta2: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&a) {
            return Err(Error::domain("a", a, "[0, 1]"));
        }
        for (name, v) in [("chi", chi), ("theta1", theta1), ("theta2", theta2)] {
            if !v.is_finite() {
                return Err(Error::domain(name, v, "finite angle"));
            }
        }
        Ok(Self {
            a,
            chi: chi.rem_euclid(TAU),
            theta1: theta1.rem_euclid(TAU),
            theta2: theta2.rem_euclid(TAU),
        })
    }

    /// Schmidt weight `a ∈ [0, ½]` that gives pure-state concurrence `c0`.
    pub fn weight_for_concurrence(c0: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&c0) {
            return Err(Error::domain("C0", c0, "[0, 1]"));
        }
        Ok(0.5 * (1.0 - (1.0 - c0 * c0).max(0.0).sqrt()))
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn chi(&self) -> f64 {
        self.chi
    }
    pub fn theta1(&self) -> f64 {
        self.theta1
    }
    pub fn theta2(&self) -> f64 {
        self.theta2
    }
}

/// Amplitudes of a product state `(α₁, β₁) ⊗ (α₂, β₂)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeparableParams {
    pub alpha1: C64,
    pub beta1: C64,
    pub alpha2: C64,
    pub beta2: C64,
}

impl SeparableParams {
    pub fn new(alpha1: C64, beta1: C64, alpha2: C64, beta2: C64) -> Result<Self> {
        for (i, (a, b)) in [(alpha1, beta1), (alpha2, beta2)].into_iter().enumerate() {
            let n = a.norm_sqr() + b.norm_sqr();
            if (n - 1.0).abs() > tolerances::STRUCTURAL {
                return Err(Error::InvalidState(format!(
                    "qubit {} amplitudes have |α|²+|β|² = {n}",
                    i + 1
                )));
            }
        }
        Ok(Self {
            alpha1,
            beta1,
            alpha2,
            beta2,
        })
    }

    /// `4|α₁||β₁||α₂||β₂|`, the product of the two σ_z standard deviations.
    pub fn variance_factor(&self) -> f64 {
        4.0 * self.alpha1.norm() * self.beta1.norm() * self.alpha2.norm() * self.beta2.norm()
    }
}

/// Normalized amplitudes in the basis `{|00⟩, |01⟩, |10⟩, |11⟩}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateVector4(CVec4);

impl StateVector4 {
    pub fn new(amps: CVec4) -> Result<Self> {
        let n: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (n - 1.0).abs() > tolerances::STRUCTURAL {
            return Err(Error::InvalidState(format!("state vector has norm² {n}")));
        }
        Ok(Self(amps))
    }

    /// Rescales any nonzero vector to unit norm.
    pub fn normalized(amps: CVec4) -> Result<Self> {
        let n: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        Ok(Self(amps.map(|z| z / n)))
    }

    pub fn amplitudes(&self) -> &CVec4 {
        &self.0
    }

    pub fn density(&self) -> CMat4 {
        CMat4::outer(&self.0)
    }

    pub fn conj(&self) -> CVec4 {
        self.0.map(|z| z.conj())
    }

    fn diag_expectation(&self, d: &[f64; 4]) -> f64 {
        self.0.iter().zip(d).map(|(z, w)| w * z.norm_sqr()).sum()
    }
}

pub fn make_general_pure(p: &PureStateParams) -> StateVector4 {
    let mut core = [ZERO; 4];
    core[0] = C64::new(p.a.sqrt(), 0.0);
    core[3] = C64::from_polar((1.0 - p.a).sqrt(), -p.chi);
    let rot = tensor2(&CMat2::rotation_x(p.theta1), &CMat2::rotation_x(p.theta2));
    StateVector4(rot.apply(&core))
}

pub fn make_separable(p: &SeparableParams) -> StateVector4 {
    StateVector4([
        p.alpha1 * p.alpha2,
        p.alpha1 * p.beta2,
        p.beta1 * p.alpha2,
        p.beta1 * p.beta2,
    ])
}

/// `⟨σ_z^A⟩`, `⟨σ_z^B⟩` and `⟨σ_z^A⊗σ_z^B⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZExpectations {
    pub za: f64,
    pub zb: f64,
    pub zab: f64,
}

pub fn z_expectations(psi: &StateVector4) -> ZExpectations {
    ZExpectations {
        za: psi.diag_expectation(&SZ_A).clamp(-1.0, 1.0),
        zb: psi.diag_expectation(&SZ_B).clamp(-1.0, 1.0),
        zab: psi.diag_expectation(&SZ_AB).clamp(-1.0, 1.0),
    }
}

/// `s = ⟨ψ|σ_y⊗σ_y|ψ*⟩` and `r = ⟨ψ|(σ_z⊗σ_z)(σ_y⊗σ_y)|ψ*⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SrInvariants {
    pub s: C64,
    pub r: C64,
}

pub fn sr_invariants(psi: &StateVector4) -> SrInvariants {
    let yy = tensor2(&pauli_y(), &pauli_y());
    let flipped = yy.apply(&psi.conj());
    let bra = psi.conj();
    let s = bra.iter().zip(&flipped).map(|(b, k)| b * k).sum();
    let r = bra
        .iter()
        .zip(&flipped)
        .zip(SZ_AB)
        .map(|((b, k), z)| b * k * z)
        .sum();
    SrInvariants { s, r }
}

pub fn pure_concurrence(psi: &StateVector4) -> f64 {
    sr_invariants(psi).s.norm().min(1.0)
}
