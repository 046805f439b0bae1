use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use vortexprop::{
    evolve_state, evolved_bs_vortex, evolved_ps_vortex, make_basis_state, make_bs_vortex,
    make_ps_vortex, normalize, BsVortexParams, Family, FockCutoff, SqueezeParams, TwoModeState,
    WaveguideParams,
};

fn state_strategy() -> impl Strategy<Value = TwoModeState> {
    (1usize..=7)
        .prop_flat_map(|n| {
            let len = (n + 1) * (n + 1);
            (
                Just(n),
                prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len),
            )
        })
        .prop_filter_map("zero norm", |(n, raw)| {
            let dim = n + 1;
            let amps = DMatrix::from_fn(dim, dim, |i, j| {
                Complex64::new(raw[i * dim + j].0, raw[i * dim + j].1)
            });
            let st = TwoModeState::from_amplitudes(amps, FockCutoff::with_n_max(n)).ok()?;
            normalize(&st).ok().map(|(s, _)| s)
        })
}

fn wg(kappa: f64) -> WaveguideParams {
    WaveguideParams::from_kappa(kappa).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn evolution_is_unitary(st in state_strategy(), kappa in 0.0f64..2.0) {
        let out = evolve_state(&st, wg(kappa));
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
        let back = evolve_state(&out, wg(2.0 - kappa));
        prop_assert!(back.max_abs_diff(&st) < 1e-12);
    }

    #[test]
    fn photon_number_sectors_are_conserved(st in state_strategy(), kappa in 0.0f64..4.0) {
        let before = st.sector_probabilities();
        let after = evolve_state(&st, wg(kappa)).sector_probabilities();
        for (p, q) in before.iter().zip(&after) {
            prop_assert!((p - q).abs() < 1e-12);
        }
    }

    #[test]
    fn evolution_has_period_two(st in state_strategy(), kappa in 0.0f64..2.0) {
        let a = evolve_state(&st, wg(kappa));
        let b = evolve_state(&st, wg(kappa + 2.0));
        prop_assert!((a.fidelity(&b) - 1.0).abs() < 1e-12);
        prop_assert!(a.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn half_period_swaps_the_modes(st in state_strategy()) {
        let out = evolve_state(&st, wg(0.5));
        for a in 0..=st.n_max() {
            for b in 0..=st.n_max() {
                let expected = Complex64::i().powu((a + b) as u32) * st.amplitude(b, a);
                prop_assert!((out.amplitude(a, b) - expected).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn evolutions_compose(st in state_strategy(), k1 in 0.0f64..1.0, k2 in 0.0f64..1.0) {
        let two = evolve_state(&evolve_state(&st, wg(k1)), wg(k2));
        let one = evolve_state(&st, wg(k1 + k2));
        prop_assert!(two.max_abs_diff(&one) < 1e-12);
    }
}

#[test]
fn single_photon_moves_to_the_other_guide() {
    let cutoff = FockCutoff::with_n_max(2);
    let one = make_basis_state(1, 0, cutoff).unwrap();
    for kappa in [0.1, 0.25, 0.7] {
        let (s, c) = (std::f64::consts::PI * kappa).sin_cos();
        let out = evolve_state(&one, wg(kappa));
        assert!((out.amplitude(1, 0) - Complex64::new(c, 0.0)).norm() < 1e-14);
        assert!((out.amplitude(0, 1) - Complex64::new(0.0, s)).norm() < 1e-14);
    }
}

#[test]
fn closed_forms_match_propagation_for_vacuum_seeds() {
    let cutoff = FockCutoff::new(12, 1e-12).unwrap();
    for k in 1..=4 {
        let p = SqueezeParams::new(0.0, 0.0).unwrap();
        let start = make_ps_vortex(p, k, cutoff).unwrap();
        let b = BsVortexParams::new(0.0, 0.0, 1.0, 0.75, k).unwrap();
        let bs_start = make_bs_vortex(b, cutoff).unwrap();
        for kappa in [0.1, 0.5, 1.3] {
            let closed = evolved_ps_vortex(p, k, wg(kappa), cutoff).unwrap();
            assert!(
                closed.max_abs_diff(&evolve_state(&start, wg(kappa))) < 1e-12,
                "ps k={k} kappa={kappa}"
            );
            let closed = evolved_bs_vortex(b, wg(kappa), cutoff).unwrap();
            assert!(
                closed.max_abs_diff(&evolve_state(&bs_start, wg(kappa))) < 1e-12,
                "bs k={k} kappa={kappa}"
            );
        }
    }
}

#[test]
fn closed_forms_match_the_ladder_oracle() {
    let n_max = 40;
    // both sides are renormalized inside the same box
    let cutoff = FockCutoff::new(n_max, 0.999).unwrap();
    let mut families = Vec::new();
    for r in [0.3, 1.0] {
        for k in 1..=3 {
            families.push(Family::PsVortex {
                params: SqueezeParams::new(r, 0.4).unwrap(),
                k,
            });
            families.push(Family::BsVortex {
                params: BsVortexParams::new(r * 0.5, r, 1.0, 0.75, k).unwrap(),
            });
        }
    }
    for family in families {
        for kappa in [0.1, 0.5, 1.3] {
            let closed = normalize(&family.closed_form_state(wg(kappa), cutoff).unwrap())
                .unwrap()
                .0;
            let oracle = family.ladder_oracle(wg(kappa), n_max).unwrap();
            let diff = closed.max_abs_diff(&oracle);
            assert!(diff < 1e-8, "{family:?} kappa={kappa}: {diff:.2e}");
        }
    }
}

#[test]
fn closed_form_and_propagation_agree_at_the_start() {
    let cutoff = FockCutoff::new(60, 1e-8).unwrap();
    let p = SqueezeParams::new(0.7, 0.2).unwrap();
    for k in 1..=3 {
        let a = evolved_ps_vortex(p, k, wg(0.0), cutoff).unwrap();
        let b = make_ps_vortex(p, k, cutoff).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-12);
        let a = evolved_ps_vortex(p, k, wg(2.0), cutoff).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-12);
    }
}
