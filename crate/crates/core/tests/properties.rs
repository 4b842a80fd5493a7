use blockenc::{C64, Circuit, Control, Gate, GateKind, Subspace};
use proptest::prelude::*;

fn subspace() -> impl Strategy<Value = Subspace> {
    let leaf = prop_oneof![
        "[0#]{1,3}".prop_map(|p| Subspace::from_pattern(&p).unwrap()),
        (1usize..9).prop_map(|d| Subspace::from_dim(d).unwrap()),
    ];
    leaf.prop_recursive(3, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.tensor(&b)),
            (inner.clone(), inner).prop_map(|(a, b)| {
                let w = a.qubit_count().max(b.qubit_count());
                Subspace::controlled(&a.padded(w), &b.padded(w)).unwrap()
            }),
        ]
    })
    .prop_filter("small registers", |s| s.qubit_count() <= 7)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn basis_is_the_sorted_member_set(s in subspace()) {
        let basis = s.enumerate_basis();
        let members: Vec<usize> = (0..1usize << s.qubit_count()).filter(|&i| s.contains(i)).collect();
        prop_assert_eq!(&basis, &members);
        prop_assert_eq!(basis.len(), s.dim());
        prop_assert_eq!(basis[0], 0);
    }

    #[test]
    fn canonical_and_json_keep_the_span(s in subspace()) {
        prop_assert_eq!(s.canonical().enumerate_basis(), s.enumerate_basis());
        let back = Subspace::from_json(&s.to_json()).unwrap();
        prop_assert_eq!(back.enumerate_basis(), s.enumerate_basis());
        prop_assert!(back.same_span(&s));
    }

    #[test]
    fn prefix_truncation_keeps_the_first_states(s in subspace(), frac in 0.0f64..1.0) {
        let keep = 1 + ((s.dim() - 1) as f64 * frac) as usize;
        let t = s.prefix_truncate(keep).unwrap();
        prop_assert_eq!(t.qubit_count(), s.qubit_count());
        prop_assert_eq!(t.enumerate_basis(), s.enumerate_basis()[..keep].to_vec());
    }

    #[test]
    fn membership_circuit_flags_outsiders(s in subspace()) {
        let n = s.qubit_count();
        let c = s.membership_circuit();
        let size = 1usize << c.total_qubits();
        for i in 0..1usize << n {
            let mut v = vec![C64::new(0.0, 0.0); size];
            v[i] = C64::new(1.0, 0.0);
            let out = c.simulate(&v).unwrap();
            let want = if s.contains(i) { i } else { i | 1 << n };
            prop_assert!((out[want].re - 1.0).abs() < 1e-12, "state {} of {:?}", i, s.enumerate_basis());
        }
    }

    #[test]
    fn random_circuits_are_unitary(gates in proptest::collection::vec(gate(4), 0..24)) {
        let c = Circuit::with_gates(3, 1, gates).unwrap();
        let u = c.unitary().unwrap();
        let dim = u.nrows();
        let err = (u.adjoint() * &u - blockenc::CMatrix::identity(dim, dim)).camax();
        prop_assert!(err < 1e-12);
        let round = c.then(&c.adjoint()).unitary().unwrap();
        prop_assert!((round - blockenc::CMatrix::identity(dim, dim)).camax() < 1e-12);
    }
}

fn gate(qubits: usize) -> impl Strategy<Value = Gate> {
    let kind = prop_oneof![
        Just(GateKind::X),
        Just(GateKind::Y),
        Just(GateKind::Z),
        Just(GateKind::H),
        Just(GateKind::S),
        Just(GateKind::Sdg),
        Just(GateKind::T),
        Just(GateKind::Tdg),
        (-3.0f64..3.0).prop_map(GateKind::Phase),
        (-3.0f64..3.0).prop_map(GateKind::RX),
        (-3.0f64..3.0).prop_map(GateKind::RY),
        (-3.0f64..3.0).prop_map(GateKind::RZ),
        Just(GateKind::Swap),
    ];
    (kind, Just((0..qubits).collect::<Vec<_>>()).prop_shuffle(), 0usize..3, proptest::collection::vec(any::<bool>(), 2))
        .prop_map(|(kind, order, n_controls, polarity)| {
            let arity = if kind == GateKind::Swap { 2 } else { 1 };
            let targets = order[..arity].to_vec();
            let controls = order[arity..]
                .iter()
                .take(n_controls)
                .zip(&polarity)
                .map(|(&q, &on)| if on { Control::on(q) } else { Control::off(q) })
                .collect();
            Gate::new(kind, targets, controls).unwrap()
        })
}
