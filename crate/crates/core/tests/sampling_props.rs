use proptest::prelude::*;
use qimpl::linalg::{partial_trace, Factorization};
use qimpl::measures::purity;
use qimpl::sampling::{EnsembleKind, EnsembleSpec, Substream};

fn kind() -> impl Strategy<Value = EnsembleKind> {
    prop::sample::select(vec![EnsembleKind::HaarPure, EnsembleKind::SignedMixture, EnsembleKind::PhysicalMixture])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn samples_depend_only_on_seed_and_index(k in kind(), seed in any::<u64>(), index in 0usize..50) {
        let small = EnsembleSpec::new(k, 2, 60, seed).unwrap();
        let large = EnsembleSpec::new(k, 2, 5000, seed).unwrap();
        let a = small.sample::<f64>(index).unwrap();
        let b = large.sample::<f64>(index).unwrap();
        prop_assert_eq!(a.state, b.state);
        prop_assert_eq!(a.weights, b.weights);
    }

    #[test]
    fn different_seeds_differ(k in kind(), seed in any::<u64>()) {
        let a = EnsembleSpec::new(k, 2, 1, seed).unwrap().sample::<f64>(0).unwrap();
        let b = EnsembleSpec::new(k, 2, 1, seed.wrapping_add(1)).unwrap().sample::<f64>(0).unwrap();
        prop_assert_ne!(a.state, b.state);
    }

    #[test]
    fn haar_pure_states_are_pure(seed in any::<u64>(), index in 0usize..1000, n in 1usize..=3) {
        let s = EnsembleSpec::new(EnsembleKind::HaarPure, n, 1000, seed).unwrap().sample::<f64>(index).unwrap();
        prop_assert!((purity(&s.state) - 1.0).abs() < 1e-12);
        prop_assert!((s.state.matrix().trace().re - 1.0).abs() < 1e-12);
        prop_assert!(s.state.is_physical());
    }

    #[test]
    fn mixtures_use_orthonormal_kets(k in prop::sample::select(vec![EnsembleKind::SignedMixture, EnsembleKind::PhysicalMixture]), seed in any::<u64>(), index in 0usize..1000) {
        let s = EnsembleSpec::new(k, 2, 1000, seed).unwrap().sample::<f64>(index).unwrap();
        let (l1, l2) = s.weights.unwrap();
        prop_assert!(s.overlap.unwrap() < 1e-12);
        prop_assert!((l1 + l2 - 1.0).abs() < 1e-15);
        let lo = if k == EnsembleKind::SignedMixture { -1.0 } else { 0.0 };
        prop_assert!((lo..1.0).contains(&l1));
        // Spectrum is {λ₁, λ₂, 0, 0}.
        let mut expect = vec![l1, l2, 0.0, 0.0];
        expect.sort_by(f64::total_cmp);
        let vals = s.state.eigenvalues().unwrap();
        for (a, b) in vals.iter().zip(&expect) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        prop_assert_eq!(s.state.is_physical(), l1 >= 0.0);
    }

    #[test]
    fn single_precision_sees_the_same_draws(k in kind(), seed in any::<u64>()) {
        let spec = EnsembleSpec::new(k, 2, 1, seed).unwrap();
        let a = spec.sample::<f64>(0).unwrap();
        let b = spec.sample::<f32>(0).unwrap();
        prop_assert!(b.state.matrix().cast::<f64>().max_abs_diff(a.state.matrix()) < 1e-6);
    }

    #[test]
    fn haar_unitaries_are_unitary(seed in any::<u64>(), d in 1usize..=8) {
        let u = Substream::new(seed, 0).haar_unitary(d);
        prop_assert!(u.unitarity_deviation() < 1e-12);
    }

    #[test]
    fn uniforms_lie_in_unit_interval(seed in any::<u64>(), stream in any::<u64>()) {
        let mut r = Substream::new(seed, stream);
        for _ in 0..100 {
            let u = r.uniform();
            prop_assert!((0.0..1.0).contains(&u));
        }
    }
}

#[test]
fn normal_moments() {
    let mut r = Substream::new(7, 0);
    let n = 200_000;
    let (mut s1, mut s2) = (0.0, 0.0);
    for _ in 0..n / 2 {
        let (a, b) = r.normal_pair();
        s1 += a + b;
        s2 += a * a + b * b;
    }
    let mean = s1 / n as f64;
    let var = s2 / n as f64 - mean * mean;
    assert!(mean.abs() < 0.01, "mean {mean}");
    assert!((var - 1.0).abs() < 0.02, "variance {var}");
    let z = r.complex_normal();
    assert!(z.re.is_finite() && z.im.is_finite());
}

#[test]
fn reduced_purity_average_matches_haar_value() {
    // For Haar-random pure states on 2×2 the mean purity of a marginal is
    // (dA + dB)/(dA dB + 1) = 4/5.
    let spec = EnsembleSpec::new(EnsembleKind::HaarPure, 2, 4000, 11).unwrap();
    let f = Factorization::qubits(2);
    let mut total = 0.0;
    let mut first = 0.0;
    for s in spec.samples::<f64>().unwrap() {
        let r = partial_trace(s.state.matrix(), &f, &[0]).unwrap();
        total += r.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>();
        first += s.state.matrix()[(0, 0)].re;
    }
    let mean = total / 4000.0;
    assert!((mean - 0.8).abs() < 0.01, "mean marginal purity {mean}");
    assert!((first / 4000.0 - 0.25).abs() < 0.01);
}

#[test]
fn ensemble_kind_names() {
    for k in [EnsembleKind::HaarPure, EnsembleKind::SignedMixture, EnsembleKind::PhysicalMixture] {
        assert_eq!(k.to_string().parse::<EnsembleKind>().unwrap(), k);
    }
    assert_eq!("signed".parse::<EnsembleKind>().unwrap(), EnsembleKind::SignedMixture);
    assert!("gaussian".parse::<EnsembleKind>().is_err());
    assert!(EnsembleSpec::new(EnsembleKind::HaarPure, 2, 0, 1).is_err());
    assert!(EnsembleSpec::new(EnsembleKind::HaarPure, 0, 1, 1).is_err());
}
