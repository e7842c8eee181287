mod common;

use common::*;
use phasedamp::bounds::{cm_bound, werner_curve};
use phasedamp::channels::{
    apply_channel, damping_matrix, noise_probabilities, single_sided_channel,
    two_qubit_dephasing_channel, GaussianFieldSpec, NoiseProbs,
};
use phasedamp::measures::*;
use phasedamp::qmath::C64;
use phasedamp::states::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-8;

#[test]
fn wootters_matches_singular_value_oracle_on_mixed_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for _ in 0..300 {
        let rho = random_density(&mut rng);
        let ours = concurrence_wootters(&TwoQubitState::new(rho).unwrap()).unwrap();
        worst = worst.max((ours - wootters_oracle(&rho)).abs());
    }
    assert!(worst < TOL, "max deviation {worst:e}");
}

#[test]
fn wootters_on_pure_and_bell_diagonal_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst = 0.0f64;
    for _ in 0..300 {
        let psi = random_state_vector(&mut rng);
        let c = concurrence_wootters(&TwoQubitState::pure(&psi)).unwrap();
        worst = worst.max((c - pure_concurrence(&psi)).abs());
        worst = worst.max((c - wootters_oracle(&psi.density())).abs());
    }
    assert!(worst < TOL, "pure-state deviation {worst:e}");

    for w in [
        [1.0, 0.0, 0.0, 0.0],
        [0.7, 0.1, 0.1, 0.1],
        [0.4, 0.3, 0.2, 0.1],
        [0.25; 4],
        [0.1, 0.6, 0.3, 0.0],
    ] {
        let c = concurrence_wootters(&TwoQubitState::new(bell_diagonal(w)).unwrap()).unwrap();
        let want = (2.0 * w.iter().copied().fold(0.0, f64::max) - 1.0).max(0.0);
        assert!((c - want).abs() < TOL, "{w:?}: {c} vs {want}");
    }
}

#[test]
fn purity_matches_frobenius_norm() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..100 {
        let rho = random_density(&mut rng);
        let p = purity(&TwoQubitState::new(rho).unwrap());
        assert!((p - purity_oracle(&rho)).abs() < 1e-12);
    }
}

#[test]
fn general_pure_states_have_schmidt_concurrence() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..100 {
        let p = random_pure_params(&mut rng);
        let psi = make_general_pure(&p);
        let want = 2.0 * (p.a() * (1.0 - p.a())).sqrt();
        assert!((pure_concurrence(&psi) - want).abs() < 1e-10);
        let num = concurrence_wootters(&TwoQubitState::pure(&psi)).unwrap();
        assert!((num - want).abs() < TOL);
    }
}

#[test]
fn separable_z_expectations_factorize() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..100 {
        let z = z_expectations(&make_separable(&random_separable(&mut rng)));
        assert!((z.zab - z.za * z.zb).abs() < 1e-12);
    }
}

/// Every closed-form law against apply-channel + Wootters/purity.
#[test]
fn analytic_laws_close_against_numeric_path() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let mut worst = [0.0f64; 5];
    for _ in 0..200 {
        let spec = random_diagonal_spec(&mut rng);
        let p = noise_probabilities(&spec).unwrap();
        let ch = damping_matrix(&spec);

        let sep = random_separable(&mut rng);
        let psi = make_separable(&sep);
        let rho = apply_channel(&ch, &TwoQubitState::pure(&psi));
        let c_an = concurrence_separable_analytic(&sep, &p, spec.mean()[2]);
        worst[0] = worst[0].max((concurrence_wootters(&rho).unwrap() - c_an).abs());
        worst[1] = worst[1].max((purity(&rho) - purity_analytic(&p, &z_expectations(&psi))).abs());

        let psi = make_general_pure(&random_pure_params(&mut rng));
        let rho = apply_channel(&ch.noise_only(), &TwoQubitState::pure(&psi));
        worst[2] = worst[2]
            .max((concurrence_wootters(&rho).unwrap() - concurrence_general_noise(&psi, &p)).abs());
        worst[1] = worst[1].max((purity(&rho) - purity_analytic(&p, &z_expectations(&psi))).abs());

        let q = p.p[2];
        let (ss, _) = single_sided_channel(q).unwrap();
        let rho = apply_channel(&ss, &TwoQubitState::pure(&psi));
        let law = single_sided_law(pure_concurrence(&psi), q, z_expectations(&psi).za).unwrap();
        worst[3] = worst[3].max((concurrence_wootters(&rho).unwrap() - law.c).abs());
        worst[3] = worst[3].max((purity(&rho) - law.p).abs());

        let q = p.p[1];
        let (dd, _) = two_qubit_dephasing_channel(q).unwrap();
        let rho = apply_channel(&dd, &TwoQubitState::pure(&psi));
        let law = two_qubit_dephasing_law(&psi, q).unwrap();
        worst[4] = worst[4].max((concurrence_wootters(&rho).unwrap() - law.c).abs());
        worst[4] = worst[4].max((purity(&rho) - law.p).abs());
    }
    for (name, w) in [
        "separable",
        "purity",
        "general noise",
        "single-sided",
        "two-qubit dephasing",
    ]
    .iter()
    .zip(worst)
    {
        assert!(w < TOL, "{name}: max deviation {w:e}");
    }
}

/// The noise-only law with arbitrary probabilities, including `p₃+p₄ > p₁+p₂`,
/// which no Gaussian field produces.
#[test]
fn general_noise_law_for_arbitrary_probabilities() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..300 {
        let w: [f64; 4] = std::array::from_fn(|_| rand::Rng::random::<f64>(&mut rng));
        let s: f64 = w.iter().sum();
        let p = NoiseProbs::new(w.map(|x| x / s)).unwrap();
        let psi = random_state_vector(&mut rng);
        let rho = pauli_mixture_oracle(p.p, &psi.density());
        let c = wootters_oracle(&rho);
        assert!((concurrence_general_noise(&psi, &p) - c).abs() < TOL);
    }
}

#[test]
fn separable_law_for_arbitrary_probabilities() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    for _ in 0..300 {
        let w: [f64; 4] = std::array::from_fn(|_| rand::Rng::random::<f64>(&mut rng));
        let s: f64 = w.iter().sum();
        let p = NoiseProbs::new(w.map(|x| x / s)).unwrap();
        let sep = random_separable(&mut rng);
        let mu3 = (rand::Rng::random::<f64>(&mut rng) * 2.0 - 1.0) * 4.0;
        let rho = apply_channel(
            &p.channel([0.0, 0.0, mu3]),
            &TwoQubitState::pure(&make_separable(&sep)),
        );
        let c = wootters_oracle(rho.matrix());
        assert!((concurrence_separable_analytic(&sep, &p, mu3) - c).abs() < TOL);
    }
}

#[test]
fn cm_bounds_are_attained_by_bell_diagonal_states() {
    for m in 2u32..=4 {
        for k in 0..=20 {
            let q = 0.5 * k as f64 / 20.0;
            let mut w = [0.0; 4];
            w[0] = 1.0 - q;
            for x in w.iter_mut().take(m as usize).skip(1) {
                *x = q / f64::from(m - 1);
            }
            let rho = bell_diagonal(w);
            let c = wootters_oracle(&rho);
            // closed-form purity; the curve has infinite slope at its edge
            let p = (1.0 - q) * (1.0 - q) + q * q / f64::from(m - 1);
            assert!((purity_oracle(&rho) - p).abs() < 1e-14);
            assert!((cm_bound(m, p).unwrap() - c).abs() < 1e-10, "m={m} q={q}");
        }
    }
}

#[test]
fn werner_states_lie_on_werner_curve() {
    let singlet = bell_basis()[3];
    for k in 0..=20 {
        let x = k as f64 / 20.0;
        let rho = TwoQubitState::werner(&singlet, x).unwrap();
        let p = purity(&rho);
        let c = concurrence_wootters(&rho).unwrap();
        if p >= 1.0 / 3.0 {
            assert!((werner_curve(p).unwrap() - c).abs() < TOL);
        }
    }
}

fn probs() -> impl Strategy<Value = NoiseProbs> {
    prop::array::uniform4(0.0f64..1.0).prop_filter_map("zero weights", |w| {
        let s: f64 = w.iter().sum();
        (s > 1e-6).then(|| NoiseProbs::new(w.map(|x| x / s)).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn outputs_are_clamped(p in probs(), a in 0.0f64..1.0, chi in 0.0f64..7.0, t1 in 0.0f64..7.0, t2 in 0.0f64..7.0, mu3 in -7.0f64..7.0) {
        let psi = make_general_pure(&PureStateParams::new(a, chi, t1, t2).unwrap());
        let z = z_expectations(&psi);
        let pa = purity_analytic(&p, &z);
        prop_assert!((0.25..=1.0).contains(&pa));
        let c = concurrence_general_noise(&psi, &p);
        prop_assert!((0.0..=1.0).contains(&c));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let sep = SeparableParams::new(C64::new(h, 0.0), C64::new(h, 0.0), C64::new(h, 0.0), C64::new(0.0, h)).unwrap();
        let cs = concurrence_separable_analytic(&sep, &p, mu3);
        prop_assert!((0.0..=1.0).contains(&cs));
    }

    #[test]
    fn purity_decreases_with_each_variance(
        a in 0.0f64..1.0, t1 in 0.0f64..7.0, t2 in 0.0f64..7.0,
        vs in prop::array::uniform3(0.0f64..3.0), k in 0usize..3, dv in 0.0f64..2.0,
    ) {
        let psi = make_general_pure(&PureStateParams::new(a, 0.3, t1, t2).unwrap());
        let z = z_expectations(&psi);
        let lo = GaussianFieldSpec::uncorrelated([0.0; 3], vs).unwrap();
        let mut vs2 = vs;
        vs2[k] += dv;
        let hi = GaussianFieldSpec::uncorrelated([0.0; 3], vs2).unwrap();
        let p_lo = purity_analytic(&noise_probabilities(&lo).unwrap(), &z);
        let p_hi = purity_analytic(&noise_probabilities(&hi).unwrap(), &z);
        prop_assert!(p_hi <= p_lo + 1e-12);
    }

    #[test]
    fn diagonal_is_untouched_by_every_channel_path(a in 0.0f64..1.0, t1 in 0.0f64..7.0, vs in prop::array::uniform3(0.0f64..3.0), q in 0.0f64..1.0) {
        let psi = make_general_pure(&PureStateParams::new(a, 1.0, t1, 0.4).unwrap());
        let rho = TwoQubitState::pure(&psi);
        let spec = GaussianFieldSpec::uncorrelated([0.5, -1.0, 2.0], vs).unwrap();
        let outs = [
            apply_channel(&damping_matrix(&spec), &rho),
            apply_channel(&single_sided_channel(q).unwrap().0, &rho),
            apply_channel(&two_qubit_dephasing_channel(q).unwrap().0, &rho),
            phasedamp::channels::apply_noise_rlu(&noise_probabilities(&spec).unwrap(), &rho),
        ];
        for out in outs {
            prop_assert_eq!(out.matrix().diag(), rho.matrix().diag());
        }
    }
}
