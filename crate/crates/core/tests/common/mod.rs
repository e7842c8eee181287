//! Independent reference implementations shared by the integration tests.
//!
//! Nothing here calls the crate's eigensolver, channel formulas or
//! concurrence code; dense linear algebra goes through nalgebra.

#![allow(dead_code)]

use nalgebra::{DMatrix, Matrix4, SymmetricEigen};
use phasedamp::channels::GaussianFieldSpec;
use phasedamp::qmath::{CMat4, C64};
use phasedamp::states::{PureStateParams, SeparableParams, StateVector4};
use rand::Rng;
use rand_distr::StandardNormal;

pub fn to_na(m: &CMat4) -> Matrix4<C64> {
    Matrix4::from_fn(|i, j| m.0[i][j])
}

pub fn from_na(m: &Matrix4<C64>) -> CMat4 {
    CMat4(std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)])))
}

/// Eigenvalues from nalgebra's complex Schur form.
pub fn eigenvalues_oracle(m: &CMat4) -> Vec<C64> {
    let schur = nalgebra::Schur::new(to_na(m));
    let (_, t) = schur.unpack();
    (0..4).map(|i| t[(i, i)]).collect()
}

/// Largest distance between two multisets of complex numbers after
/// greedy nearest matching.
pub fn spectrum_distance(a: &[C64], b: &[C64]) -> f64 {
    let mut left: Vec<C64> = b.to_vec();
    let mut worst = 0.0f64;
    for x in a {
        let (k, d) = left
            .iter()
            .enumerate()
            .map(|(k, y)| (k, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        worst = worst.max(d);
        left.remove(k);
    }
    worst
}

fn yy() -> Matrix4<C64> {
    // σ_y ⊗ σ_y is real: anti-diagonal (-1, 1, 1, -1)
    let mut m = Matrix4::zeros();
    for (i, v) in [-1.0, 1.0, 1.0, -1.0].into_iter().enumerate() {
        m[(i, 3 - i)] = C64::new(v, 0.0);
    }
    m
}

/// Concurrence from the singular values of `τ_ij = v_iᵀ (σ_y⊗σ_y) v_j`,
/// where `ρ = Σ v_i v_i†` is the eigen-decomposition of `ρ`.
pub fn wootters_oracle(rho: &CMat4) -> f64 {
    let eig = SymmetricEigen::new(to_na(rho));
    let mut v = Matrix4::<C64>::zeros();
    for k in 0..4 {
        let w = eig.eigenvalues[k].max(0.0).sqrt();
        for i in 0..4 {
            v[(i, k)] = eig.eigenvectors[(i, k)] * w;
        }
    }
    let tau = v.transpose() * yy() * v;
    let mut sv: Vec<f64> = tau.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    (sv[0] - sv[1] - sv[2] - sv[3]).max(0.0)
}

pub fn purity_oracle(rho: &CMat4) -> f64 {
    rho.0.iter().flatten().map(|z| z.norm_sqr()).sum()
}

pub fn min_eigenvalue_hermitian(m: &CMat4) -> f64 {
    SymmetricEigen::new(to_na(m)).eigenvalues.min()
}

/// Bell basis `Φ+, Φ−, Ψ+, Ψ−`.
pub fn bell_basis() -> [StateVector4; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let c = |a: f64, b: f64, cc: f64, d: f64| {
        StateVector4::new([a, b, cc, d].map(|x| C64::new(x * h, 0.0))).unwrap()
    };
    [
        c(1.0, 0.0, 0.0, 1.0),
        c(1.0, 0.0, 0.0, -1.0),
        c(0.0, 1.0, 1.0, 0.0),
        c(0.0, 1.0, -1.0, 0.0),
    ]
}

pub fn bell_diagonal(weights: [f64; 4]) -> CMat4 {
    let b = bell_basis();
    let mut rho = CMat4::zeros();
    for (w, psi) in weights.iter().zip(&b) {
        rho = rho + psi.density().scale(C64::new(*w, 0.0));
    }
    rho
}

/// Explicit `Σ_k p_k P_k ρ P_k` over `1, Z⊗Z, Z⊗1, 1⊗Z`, by dense products.
pub fn pauli_mixture_oracle(p: [f64; 4], rho: &CMat4) -> CMat4 {
    let z = [1.0, -1.0];
    let diag = |f: &dyn Fn(usize, usize) -> f64| {
        Matrix4::from_fn(|i, j| {
            if i == j {
                C64::new(f(i / 2, i % 2), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    };
    let ops = [
        Matrix4::identity(),
        diag(&|a, b| z[a] * z[b]),
        diag(&|a, _| z[a]),
        diag(&|_, b| z[b]),
    ];
    let r = to_na(rho);
    let mut out = Matrix4::zeros();
    for (w, u) in p.iter().zip(&ops) {
        out += (u * r * u.adjoint()) * C64::new(*w, 0.0);
    }
    from_na(&out)
}

/// Gauss–Hermite nodes and weights for `∫ f(x) e^{−x²/2} dx / √(2π)`
/// (Golub–Welsch on the probabilists' Jacobi matrix).
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let jac = DMatrix::<f64>::from_fn(n, n, |i, j| {
        if i + 1 == j || j + 1 == i {
            (i.max(j) as f64).sqrt()
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(jac);
    let nodes = eig.eigenvalues.iter().copied().collect();
    let weights = (0..n).map(|k| eig.eigenvectors[(0, k)].powi(2)).collect();
    (nodes, weights)
}

/// `E[exp(i c^{mn}·Ω)]` by tensor-product quadrature over `Ω = μ + Lξ`.
pub fn damping_matrix_quadrature(spec: &GaussianFieldSpec, nodes: usize) -> CMat4 {
    let cov = spec.cov();
    let eig = SymmetricEigen::new(nalgebra::Matrix3::from_fn(|i, j| cov[i][j]));
    let l = nalgebra::Matrix3::from_fn(|i, k| {
        eig.eigenvectors[(i, k)] * eig.eigenvalues[k].max(0.0).sqrt()
    });
    let (x, w) = gauss_hermite(nodes);
    let mu = spec.mean();
    let e = [
        [0.0, 0.0, 0.0],
        [0.0, 1.0, 1.0],
        [1.0, 0.0, 1.0],
        [1.0, 1.0, 0.0],
    ];
    let mut d = CMat4::zeros();
    for a in 0..nodes {
        for b in 0..nodes {
            for c in 0..nodes {
                let xi = nalgebra::Vector3::new(x[a], x[b], x[c]);
                let weight = w[a] * w[b] * w[c];
                let off = l * xi;
                let omega = [mu[0] + off[0], mu[1] + off[1], mu[2] + off[2]];
                for m in 0..4 {
                    for n in 0..4 {
                        let phase: f64 = (0..3).map(|k| (e[m][k] - e[n][k]) * omega[k]).sum();
                        d.0[m][n] += C64::from_polar(weight, phase);
                    }
                }
            }
        }
    }
    d
}

pub fn random_pure_params<R: Rng>(rng: &mut R) -> PureStateParams {
    let tau = std::f64::consts::TAU;
    PureStateParams::new(
        rng.random::<f64>(),
        rng.random::<f64>() * tau,
        rng.random::<f64>() * tau,
        rng.random::<f64>() * tau,
    )
    .unwrap()
}

pub fn random_state_vector<R: Rng>(rng: &mut R) -> StateVector4 {
    let amps =
        std::array::from_fn(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    StateVector4::normalized(amps).unwrap()
}

pub fn random_qubit<R: Rng>(rng: &mut R) -> (C64, C64) {
    let theta = rng.random::<f64>() * std::f64::consts::PI;
    let (pa, pb) = (rng.random::<f64>() * 6.0, rng.random::<f64>() * 6.0);
    (
        C64::from_polar((theta / 2.0).cos(), pa),
        C64::from_polar((theta / 2.0).sin(), pb),
    )
}

pub fn random_separable<R: Rng>(rng: &mut R) -> SeparableParams {
    let (a1, b1) = random_qubit(rng);
    let (a2, b2) = random_qubit(rng);
    SeparableParams::new(a1, b1, a2, b2).unwrap()
}

pub fn random_mean<R: Rng>(rng: &mut R) -> [f64; 3] {
    std::array::from_fn(|_| (rng.random::<f64>() * 2.0 - 1.0) * std::f64::consts::PI)
}

pub fn random_diagonal_spec<R: Rng>(rng: &mut R) -> GaussianFieldSpec {
    let vs: [f64; 3] = std::array::from_fn(|_| 2.0 * rng.random::<f64>());
    GaussianFieldSpec::uncorrelated(random_mean(rng), vs).unwrap()
}

/// `Σ = A Aᵀ` with entries of `A` in `[−scale, scale]`.
pub fn random_correlated_spec<R: Rng>(rng: &mut R, scale: f64) -> GaussianFieldSpec {
    let a: [[f64; 3]; 3] =
        std::array::from_fn(|_| std::array::from_fn(|_| scale * (2.0 * rng.random::<f64>() - 1.0)));
    let cov =
        std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| a[i][k] * a[j][k]).sum()));
    GaussianFieldSpec::new(random_mean(rng), cov).unwrap()
}

pub fn random_cmat4<R: Rng>(rng: &mut R) -> CMat4 {
    CMat4(std::array::from_fn(|_| {
        std::array::from_fn(|_| {
            C64::new(
                2.0 * rng.random::<f64>() - 1.0,
                2.0 * rng.random::<f64>() - 1.0,
            )
        })
    }))
}

/// Random mixed state `G G† / tr(G G†)`.
pub fn random_density<R: Rng>(rng: &mut R) -> CMat4 {
    let g = to_na(&random_cmat4(rng));
    let r = g * g.adjoint();
    let tr = r.trace();
    from_na(&(r / tr))
}
