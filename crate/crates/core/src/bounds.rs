//! Boundary curves and thresholds of the concurrence–purity plane.

use std::fmt;

use crate::error::{Error, Result};
use crate::qmath::{CMat2, C64, ZERO};
use crate::states::{sr_invariants, StateVector4};
use crate::tolerances;

/// Upper bound on concurrence at purity `p` for Bell rank `m`:
/// `C_m(P) = 2(m−1)/m · √((mP−1)/(m−1)) − (m−2)/m`, clamped to `[0, 1]`.
pub fn cm_bound(m: u32, p: f64) -> Result<f64> {
    if !(2..=4).contains(&m) {
        return Err(Error::domain("m", f64::from(m), "{2, 3, 4}"));
    }
    let mf = f64::from(m);
    check_purity(p, 1.0 / mf)?;
    // 2√((m−1)(mP−1)) − (m−2), over m; exact at the tabulated edge points
    let root = ((mf - 1.0) * (mf * p - 1.0)).max(0.0).sqrt();
    Ok(((2.0 * root - (mf - 2.0)) / mf).clamp(0.0, 1.0))
}

/// Werner-state curve `½(√(12P−3) − 1)`.
pub fn werner_curve(p: f64) -> Result<f64> {
    check_purity(p, 1.0 / 3.0)?;
    Ok((0.5 * ((12.0 * p - 3.0).max(0.0).sqrt() - 1.0)).clamp(0.0, 1.0))
}

/// Single-sided dephasing of a Bell state, `√(2P−1)`.
pub fn dephasing_curve(p: f64) -> Result<f64> {
    check_purity(p, 0.5)?;
    Ok((2.0 * p - 1.0).max(0.0).sqrt().min(1.0))
}

/// Largest concurrence a product state with z-expectations `za`, `zb`
/// reaches at purity `p` under pure interaction dephasing.
pub fn pure2q_separable_bound(p: f64, za: f64, zb: f64) -> Result<f64> {
    check_z(za)?;
    check_z(zb)?;
    let zz = za * za * zb * zb;
    let excess = 2.0 * p - 1.0 - zz;
    if excess < -tolerances::STRUCTURAL || p > 1.0 + tolerances::STRUCTURAL {
        return Err(Error::domain("P", p, format!("[{}, 1]", 0.5 * (1.0 + zz))));
    }
    let denom = 1.0 - zz;
    if denom <= tolerances::STRUCTURAL {
        return Ok(0.0);
    }
    let prefactor = ((1.0 - za * za) * (1.0 - zb * zb) / denom).max(0.0);
    Ok((prefactor * excess.max(0.0)).sqrt().min(1.0))
}

/// The separable bound on the symmetric slice `⟨σ_z^A⟩ = ⟨σ_z^B⟩ = z`.
pub fn cmax_surface(p: f64, z: f64) -> Result<f64> {
    check_z(z)?;
    let z2 = z * z;
    let excess = 2.0 * p - 1.0 - z2 * z2;
    if excess < -tolerances::STRUCTURAL || p > 1.0 + tolerances::STRUCTURAL {
        return Err(Error::domain(
            "P",
            p,
            format!("[{}, 1]", 0.5 * (1.0 + z2 * z2)),
        ));
    }
    Ok(((1.0 - z2) / (1.0 + z2) * excess.max(0.0)).sqrt().min(1.0))
}

/// Whether `(c, p)` is reachable by uncorrelated damping of a product
/// state: `C² + C + 1 ≤ 3P`.
pub fn uncorrelated_region_check(c: f64, p: f64) -> bool {
    c * c + c + 1.0 <= 3.0 * p + tolerances::ALGEBRAIC
}

/// Purity above which single-sided dephasing of a state with initial
/// concurrence `c0` always leaves it entangled: `1 − C0²/2`.
pub fn purity_floor_single_sided(c0: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&c0) {
        return Err(Error::domain("C0", c0, "[0, 1]"));
    }
    Ok(1.0 - 0.5 * c0 * c0)
}

fn check_purity(p: f64, min: f64) -> Result<()> {
    if !(p >= min - tolerances::STRUCTURAL && p <= 1.0 + tolerances::STRUCTURAL) {
        return Err(Error::domain("P", p, format!("[{min}, 1]")));
    }
    Ok(())
}

fn check_z(z: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&z) {
        return Err(Error::domain("<sz>", z, "[-1, 1]"));
    }
    Ok(())
}

/// A named boundary curve `C(P)` on `[p_min, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundCurve {
    Cm(u32),
    Werner,
    Dephasing,
    Pure2QSeparable { za: f64, zb: f64 },
    Surface { z: f64 },
}

impl BoundCurve {
    /// Smallest purity of the curve; the curve is zero there.
    pub fn p_min(&self) -> f64 {
        match *self {
            BoundCurve::Cm(m) => {
                let m = f64::from(m);
                (1.0 + (m - 2.0) * (m - 2.0) / (4.0 * (m - 1.0))) / m
            }
            BoundCurve::Werner => 1.0 / 3.0,
            BoundCurve::Dephasing => 0.5,
            BoundCurve::Pure2QSeparable { za, zb } => 0.5 * (1.0 + za * za * zb * zb),
            BoundCurve::Surface { z } => 0.5 * (1.0 + z.powi(4)),
        }
    }

    pub fn value(&self, p: f64) -> Result<f64> {
        if p < self.p_min() - tolerances::STRUCTURAL {
            return Err(Error::domain("P", p, format!("[{}, 1]", self.p_min())));
        }
        match *self {
            BoundCurve::Cm(m) => cm_bound(m, p),
            BoundCurve::Werner => werner_curve(p),
            BoundCurve::Dephasing => dephasing_curve(p),
            BoundCurve::Pure2QSeparable { za, zb } => pure2q_separable_bound(p, za, zb),
            BoundCurve::Surface { z } => cmax_surface(p, z),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            BoundCurve::Cm(m) if !(2..=4).contains(&m) => {
                Err(Error::domain("m", f64::from(m), "{2, 3, 4}"))
            }
            BoundCurve::Pure2QSeparable { za, zb } => check_z(za).and(check_z(zb)),
            BoundCurve::Surface { z } => check_z(z),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for BoundCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundCurve::Cm(m) => write!(f, "C{m}"),
            BoundCurve::Werner => write!(f, "Werner"),
            BoundCurve::Dephasing => write!(f, "Dephasing"),
            BoundCurve::Pure2QSeparable { za, zb } => write!(f, "Pure2QSep({za};{zb})"),
            BoundCurve::Surface { z } => write!(f, "Surface({z})"),
        }
    }
}

/// State family scanned for robust entanglement:
/// `(e^{−iθ₁σ_x} ⊗ e^{−iθ₂σ_x}) (√a|00⟩ + √(1−a)|11⟩)` with `a ≤ ½` chosen
/// so that the concurrence is `c0`.
///
/// The angles here are full rotation angles of `exp(−iθσ_x)`, twice the
/// half-angle parameters used by [`crate::states::PureStateParams`].
pub fn robust_state(c0: f64, theta1: f64, theta2: f64) -> Result<StateVector4> {
    let a = crate::states::PureStateParams::weight_for_concurrence(c0)?;
    Ok(robust_family(a, theta1, theta2))
}

fn robust_family(a: f64, theta1: f64, theta2: f64) -> StateVector4 {
    let rot = crate::qmath::tensor2(
        &CMat2::rotation_x(2.0 * theta1),
        &CMat2::rotation_x(2.0 * theta2),
    );
    let core = [
        C64::new(a.sqrt(), 0.0),
        ZERO,
        ZERO,
        C64::new((1.0 - a).sqrt(), 0.0),
    ];
    StateVector4::normalized(rot.apply(&core)).expect("rotated Schmidt state has unit norm")
}

/// `|r|² − |s|²` on the robust family; nonnegative means constant
/// concurrence under interaction dephasing.
fn robust_margin(a: f64, theta1: f64, theta2: f64) -> f64 {
    let sr = sr_invariants(&robust_family(a, theta1, theta2));
    sr.r.norm_sqr() - sr.s.norm_sqr()
}

fn is_robust(a: f64, theta1: f64, theta2: f64) -> bool {
    robust_margin(a, theta1, theta2) >= -tolerances::STRUCTURAL
}

/// Result of scanning the robustness condition over `a ∈ [0, ½]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RobustScan {
    pub threshold: f64,
    /// Sign changes of the margin seen on the validation grid.
    pub sign_changes: usize,
}

const SCAN_POINTS: usize = 256;

pub fn robust_scan(theta1: f64, theta2: f64) -> RobustScan {
    let grid: Vec<bool> = (0..=SCAN_POINTS)
        .map(|i| is_robust(0.5 * i as f64 / SCAN_POINTS as f64, theta1, theta2))
        .collect();
    let sign_changes = grid.windows(2).filter(|w| w[0] != w[1]).count();

    if is_robust(0.5, theta1, theta2) {
        return RobustScan {
            threshold: 1.0,
            sign_changes,
        };
    }
    // robust at a = 0 (product state, s = 0), not robust at a = ½
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    while hi - lo > tolerances::BISECTION {
        let mid = 0.5 * (lo + hi);
        if is_robust(mid, theta1, theta2) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    RobustScan {
        threshold: 2.0 * (lo * (1.0 - lo)).sqrt(),
        sign_changes,
    }
}

/// Largest initial concurrence of the [`robust_state`] family that keeps
/// constant concurrence under interaction dephasing (`|s|² ≤ |r|²`).
pub fn robust_threshold(theta1: f64, theta2: f64) -> Result<f64> {
    if !(theta1.is_finite() && theta2.is_finite()) {
        return Err(Error::domain(
            "theta",
            if theta1.is_finite() { theta2 } else { theta1 },
            "finite",
        ));
    }
    let scan = robust_scan(theta1, theta2);
    if scan.sign_changes > 1 {
        return Err(Error::Numerical(format!(
            "robustness margin changes sign {} times on [0, 1/2]; bisection bracket invalid",
            scan.sign_changes
        )));
    }
    Ok(scan.threshold)
}
