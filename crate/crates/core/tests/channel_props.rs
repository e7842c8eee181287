#![allow(clippy::needless_range_loop)]

mod common;

use common::*;
use phasedamp::channels::*;
use phasedamp::measures::TwoQubitState;
use phasedamp::qmath::{eig4, hadamard, CMat4, C64};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn diag_spec() -> impl Strategy<Value = GaussianFieldSpec> {
    (
        prop::array::uniform3(-4.0f64..4.0),
        prop::array::uniform3(0.0f64..3.0),
    )
        .prop_map(|(mu, vs)| GaussianFieldSpec::uncorrelated(mu, vs).unwrap())
}

fn any_spec() -> impl Strategy<Value = GaussianFieldSpec> {
    (
        prop::array::uniform3(-4.0f64..4.0),
        prop::array::uniform3(prop::array::uniform3(-1.2f64..1.2)),
    )
        .prop_map(|(mu, a)| {
            let cov = std::array::from_fn(|i| {
                std::array::from_fn(|j| (0..3).map(|k| a[i][k] * a[j][k]).sum())
            });
            GaussianFieldSpec::new(mu, cov).unwrap()
        })
}

fn density() -> impl Strategy<Value = CMat4> {
    any::<u64>().prop_map(|seed| random_density(&mut ChaCha8Rng::seed_from_u64(seed)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn damping_matrix_is_a_gramian(spec in any_spec()) {
        let d = *damping_matrix(&spec).matrix();
        prop_assert!(d.is_hermitian(1e-15));
        prop_assert!(d.diag().iter().all(|z| *z == C64::new(1.0, 0.0)));
        let min = eig4(&d).unwrap().real_descending()[3];
        prop_assert!(min >= -1e-10, "min eigenvalue {min:e}");
    }

    #[test]
    fn mean_unitary_commutes_with_noise(spec in any_spec(), rho in density()) {
        let ch = damping_matrix(&spec);
        let u = mean_unitary(&spec);
        let noisy = hadamard(ch.noise_part(), &rho);
        let lhs = u * noisy * u.adjoint();
        let rhs = hadamard(ch.noise_part(), &(u * rho * u.adjoint()));
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        let full = apply_channel(&ch, &TwoQubitState::new(rho).unwrap());
        prop_assert!(full.matrix().max_abs_diff(&lhs) < 1e-12);
    }

    #[test]
    fn channel_preserves_diagonal_exactly(spec in any_spec(), rho in density()) {
        let out = apply_channel(&damping_matrix(&spec), &TwoQubitState::new(rho).unwrap());
        prop_assert_eq!(out.matrix().diag(), rho.diag());
    }

    #[test]
    fn independent_increments_compose(a in any_spec(), b in any_spec()) {
        let mu: [f64; 3] = std::array::from_fn(|k| a.mean()[k] + b.mean()[k]);
        let cov = std::array::from_fn(|i| std::array::from_fn(|j| a.cov()[i][j] + b.cov()[j][i]));
        let sum = GaussianFieldSpec::new(mu, cov).unwrap();
        let direct = *damping_matrix(&sum).matrix();
        let composed = damping_matrix(&a).compose(&damping_matrix(&b));
        prop_assert!(direct.max_abs_diff(&hadamard(damping_matrix(&a).matrix(), damping_matrix(&b).matrix())) < 1e-12);
        prop_assert!(direct.max_abs_diff(composed.matrix()) < 1e-12);
    }

    #[test]
    fn probabilities_reproduce_noise_matrix(spec in diag_spec()) {
        let p = noise_probabilities(&spec).unwrap();
        let d = damping_matrix(&spec);
        let nm = p.noise_matrix();
        for m in 0..4 {
            for n in 0..4 {
                prop_assert!((nm[m][n] - d.noise_part()[(m, n)].re).abs() < 1e-12);
            }
        }
        let vs = spec.varsigma_sq();
        let [p1, p2, p3, p4] = p.p;
        prop_assert!((p1 - p2 + p3 - p4 - (-(vs[1] + vs[2])).exp()).abs() < 1e-12);
        prop_assert!(p1 - p2 >= -1e-15);
        prop_assert!(p1 + p2 >= 0.5 - 1e-15);
        prop_assert!(p.p.iter().all(|x| *x >= 0.0));
    }

    #[test]
    fn mixture_forms_agree(spec in diag_spec(), rho in density()) {
        let p = noise_probabilities(&spec).unwrap();
        let state = TwoQubitState::new(rho).unwrap();
        let via_rlu = apply_noise_rlu(&p, &state);
        let via_oracle = pauli_mixture_oracle(p.p, &rho);
        prop_assert!(via_rlu.matrix().max_abs_diff(&via_oracle) < 1e-12);
        let via_hadamard = apply_channel(&damping_matrix(&spec).noise_only(), &state);
        prop_assert!(via_hadamard.matrix().max_abs_diff(&via_oracle) < 1e-12);
        let via_kraus = apply_kraus(&kraus_form(&p, spec.mean()), &rho);
        let full = apply_channel(&damping_matrix(&spec), &state);
        prop_assert!(via_kraus.max_abs_diff(full.matrix()) < 1e-12);
    }
}

#[test]
fn damping_matrix_matches_quadrature_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..10 {
        let spec = random_correlated_spec(&mut rng, 0.8);
        let quad = damping_matrix_quadrature(&spec, 28);
        let d = *damping_matrix(&spec).matrix();
        let dev = d.max_abs_diff(&quad);
        assert!(dev < 1e-10, "quadrature deviation {dev:e}");
    }
}

#[test]
fn correlated_noise_has_no_probabilities() {
    let spec = GaussianFieldSpec::new(
        [0.0; 3],
        [[1.0, 0.3, 0.0], [0.3, 1.0, 0.0], [0.0, 0.0, 1.0]],
    )
    .unwrap();
    assert!(matches!(
        noise_probabilities(&spec),
        Err(phasedamp::Error::CorrelatedNoise { .. })
    ));
}

#[test]
fn invalid_covariances_rejected() {
    assert!(GaussianFieldSpec::new(
        [0.0; 3],
        [[1.0, 0.5, 0.0], [0.4, 1.0, 0.0], [0.0, 0.0, 1.0]]
    )
    .is_err());
    assert!(GaussianFieldSpec::new(
        [0.0; 3],
        [[1.0, 2.0, 0.0], [2.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
    )
    .is_err());
    assert!(GaussianFieldSpec::new([f64::NAN, 0.0, 0.0], [[0.0; 3]; 3]).is_err());
}

#[test]
fn named_channels() {
    let (ch, p) = single_sided_channel(0.25).unwrap();
    assert_eq!(p.p, [0.75, 0.0, 0.25, 0.0]);
    assert_eq!(ch.matrix()[(0, 2)], C64::new(0.5, 0.0));
    assert_eq!(ch.matrix()[(0, 1)], C64::new(1.0, 0.0));
    let (ch, p) = two_qubit_dephasing_channel(0.25).unwrap();
    assert_eq!(p.p, [0.75, 0.25, 0.0, 0.0]);
    assert_eq!(ch.matrix()[(0, 3)], C64::new(1.0, 0.0));
    assert_eq!(ch.matrix()[(0, 1)], C64::new(0.5, 0.0));
    assert!(single_sided_channel(1.5).is_err());
}
