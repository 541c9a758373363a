use proptest::prelude::*;
use qembed::classifiers::{score_all, ClassEnsembles, ClassifierKind, PurePairSpectrum};
use qembed::metrics::{hs_distance, purity, rank_ratio, trace_distance};
use qembed::training::cost_of_states;
use qembed::{
    density_from_states, embed, empirical_risk, gradient_finite_diff, gradient_param_shift,
    Circuit, CostKind, Cplx, EmbeddingSpec, Gate, Label, ParamVector, StateVector64,
};

fn state_from(raw: &[(f64, f64)]) -> StateVector64 {
    StateVector64::normalized(raw.iter().map(|&(re, im)| Cplx::new(re, im)).collect()).unwrap()
}

/// Random state on `n` qubits (1..=3), kept away from the zero vector.
fn arb_state(n: usize) -> impl Strategy<Value = StateVector64> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1 << n).prop_filter_map(
        "zero vector",
        |raw| {
            let norm: f64 = raw.iter().map(|(a, b)| a * a + b * b).sum();
            (norm > 1e-3).then(|| state_from(&raw))
        },
    )
}

fn arb_ensembles() -> impl Strategy<Value = (Vec<StateVector64>, Vec<StateVector64>)> {
    (1usize..=3, 2usize..=5, 2usize..=5).prop_flat_map(|(n, ma, mb)| {
        (
            prop::collection::vec(arb_state(n), ma),
            prop::collection::vec(arb_state(n), mb),
        )
    })
}

fn arb_gate(n: usize) -> impl Strategy<Value = Gate<f64>> {
    let angle = -6.3..6.3f64;
    prop_oneof![
        (0..n, angle.clone()).prop_map(|(qubit, angle)| Gate::Rx { qubit, angle }),
        (0..n, angle.clone()).prop_map(|(qubit, angle)| Gate::Ry { qubit, angle }),
        (0..n).prop_map(|qubit| Gate::H { qubit }),
        (0..n, 0..n, angle)
            .prop_filter("distinct", |(a, b, _)| a != b)
            .prop_map(|(a, b, angle)| Gate::Zz {
                qubits: (a, b),
                angle
            }),
    ]
}

fn arb_circuit() -> impl Strategy<Value = (StateVector64, Circuit<f64>)> {
    (2usize..=3).prop_flat_map(|n| {
        (arb_state(n), prop::collection::vec(arb_gate(n), 0..12))
            .prop_map(move |(s, gates)| (s, Circuit::from_ops(n, gates).unwrap()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn circuits_preserve_norm((state, circuit) in arb_circuit()) {
        let out = circuit.apply(&state).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn adjoint_undoes_circuit((state, circuit) in arb_circuit()) {
        let back = circuit.adjoint().apply(&circuit.apply(&state).unwrap()).unwrap();
        let f = state.inner(&back).unwrap().norm_sqr();
        prop_assert!((f - 1.0).abs() < 1e-10);
    }

    #[test]
    fn ensembles_are_valid_densities((a, _) in arb_ensembles()) {
        let rho = density_from_states(&a).unwrap();
        prop_assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
        prop_assert!(rho.matrix().is_hermitian(1e-12));
        let p = purity(&rho);
        prop_assert!(p <= 1.0 + 1e-12 && p >= 1.0 / rho.dim() as f64 - 1e-12);
        let eig = rho.matrix().hermitian_eigen();
        prop_assert!(eig.values.iter().all(|&v| v > -1e-10));
    }

    #[test]
    fn distances_satisfy_norm_sandwich((a, b) in arb_ensembles()) {
        let rho = density_from_states(&a).unwrap();
        let sigma = density_from_states(&b).unwrap();
        let dhs = hs_distance(&rho, &sigma).unwrap();
        let dtr = trace_distance(&rho, &sigma).unwrap();
        let r = rank_ratio(&rho, &sigma);
        prop_assert!((0.0..=2.0 + 1e-12).contains(&dhs));
        prop_assert!((0.0..=1.0 + 1e-12).contains(&dtr));
        prop_assert!(0.5 * dhs <= dtr * dtr + 1e-10);
        prop_assert!(dtr * dtr <= r * dhs + 1e-10);
    }

    #[test]
    fn scores_stay_in_range((a, b) in arb_ensembles(), probe in 0usize..4) {
        let inputs: Vec<StateVector64> = a.iter().chain(&b).cloned().collect();
        let ens = ClassEnsembles::new(a, b).unwrap();
        let x = &inputs[probe % inputs.len()];
        for kind in [ClassifierKind::Fidelity, ClassifierKind::HelstromGlobal, ClassifierKind::HelstromPairwise] {
            let s = score_all(kind, std::slice::from_ref(x), &ens, 0, 0).unwrap()[0];
            prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&s), "{kind:?}: {s}");
        }
    }

    #[test]
    fn training_risk_matches_distances((a, b) in arb_ensembles()) {
        let labels: Vec<Label> = std::iter::repeat_n(Label::A, a.len())
            .chain(std::iter::repeat_n(Label::B, b.len())).collect();
        let inputs: Vec<StateVector64> = a.iter().chain(&b).cloned().collect();
        let ens = ClassEnsembles::new(a, b).unwrap();
        let dhs = hs_distance(ens.rho(), ens.sigma()).unwrap();
        let dtr = trace_distance(ens.rho(), ens.sigma()).unwrap();
        let fid = score_all(ClassifierKind::Fidelity, &inputs, &ens, 0, 0).unwrap();
        let hel = score_all(ClassifierKind::HelstromGlobal, &inputs, &ens, 0, 0).unwrap();
        prop_assert!((empirical_risk(&fid, &labels).unwrap() + dhs).abs() < 1e-9);
        prop_assert!((empirical_risk(&hel, &labels).unwrap() + 2.0 * dtr).abs() < 1e-9);
    }

    #[test]
    fn pure_pair_spectrum((a, b) in (1usize..=3).prop_flat_map(|n| (arb_state(n), arb_state(n)))) {
        let overlap: f64 = a.inner(&b).unwrap().norm_sqr();
        if let Some(pair) = PurePairSpectrum::new(&a, &b).unwrap() {
            let g = (1.0 - overlap).sqrt();
            let (lo, hi) = pair.eigenvalues();
            prop_assert!((hi - g).abs() < 1e-10 && (lo + g).abs() < 1e-10);
        }
        let diff = &a.projector() - &b.projector();
        prop_assert!(diff.trace().norm() < 1e-12);
    }

    #[test]
    fn costs_stay_in_unit_interval((a, b) in arb_ensembles()) {
        for kind in [CostKind::HilbertSchmidt, CostKind::TraceDistance] {
            let c = cost_of_states(&a, &b, kind).unwrap();
            prop_assert!((0.0..=1.0).contains(&c), "{kind:?}: {c}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn param_shift_matches_finite_differences(
        n in 1usize..=3,
        layers in 1usize..=3,
        seed in any::<u64>(),
        xs in prop::collection::vec(-2.0..2.0f64, 8),
    ) {
        let spec = EmbeddingSpec::new(n, 1, layers).unwrap();
        let theta = qembed::init_params::<f64>(&spec, seed, 1.0).unwrap();
        let a: Vec<Vec<f64>> = xs[..2].iter().map(|&v| vec![v]).collect();
        let b: Vec<Vec<f64>> = xs[2..5].iter().map(|&v| vec![v]).collect();
        let ps = gradient_param_shift(&spec, &theta, &a, &b).unwrap();
        let fd = gradient_finite_diff(&spec, &theta, &a, &b, CostKind::HilbertSchmidt, 1e-4).unwrap();
        for (p, f) in ps.iter().zip(&fd) {
            prop_assert!((p - f).abs() < 1e-6, "{p} vs {f}");
        }
    }

    #[test]
    fn embeddings_are_normalized(
        layers in 1usize..=3,
        seed in any::<u64>(),
        x in prop::collection::vec(-3.0..3.0f64, 2),
    ) {
        let spec = EmbeddingSpec::new(3, 2, layers).unwrap();
        let theta: ParamVector<f64> = qembed::init_params(&spec, seed, 1.0).unwrap();
        let s = embed(&spec, &theta, &x).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }
}
