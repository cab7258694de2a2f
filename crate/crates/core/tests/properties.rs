use num_complex::Complex64;
use proptest::prelude::*;
use so4lab::oplab::{eig_hermitian, CMatrix, OperatorMatrix, SymTridiagonal, Triplets};
use so4lab::radial::{build_solution, kummer, KummerParams, MeshSpec};
use so4lab::spectra::{bohr_energy, depression, sommerfeld_binding, sommerfeld_energy};
use so4lab::{HalfInteger, KappaSign, PhysicalConstants, QuantumNumbers};

fn constants(a: f64) -> PhysicalConstants {
    PhysicalConstants::default().with_coupling(a).unwrap()
}

fn level(n: u32, j_twice: i32) -> QuantumNumbers {
    QuantumNumbers::new(n, HalfInteger::from_twice(j_twice), KappaSign::Negative).unwrap()
}

fn hermitian(n: usize, seed: &[f64]) -> CMatrix {
    let m = CMatrix::from_fn(n, n, |i, j| Complex64::new(seed[(i * n + j) % seed.len()], seed[(j * n + i + 1) % seed.len()]));
    m.hermitian_part()
}

fn sparse(n: usize, entries: &[(usize, usize, f64, f64)]) -> OperatorMatrix {
    let mut t = Triplets::new(n, n);
    for &(i, j, re, im) in entries {
        t.push(i % n, j % n, Complex64::new(re, im));
    }
    t.build()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn energies_increase_with_n_and_j(a in 1e-4f64..0.2, n in 1u32..8) {
        let c = constants(a);
        let w = |n: u32, j_twice: i32| sommerfeld_binding(&level(n, j_twice), &c).unwrap();
        for k in 1..=n as i32 {
            prop_assert!(w(n, 2 * k - 1) < w(n + 1, 2 * k - 1));
            if k < n as i32 {
                prop_assert!(w(n, 2 * k - 1) < w(n, 2 * k + 1));
            }
        }
    }

    #[test]
    fn binding_matches_energy(a in 1e-4f64..0.5, n in 1u32..7) {
        let c = constants(a);
        for qn in QuantumNumbers::enumerate(n).into_iter().filter(|q| q.n() == n) {
            let e = sommerfeld_energy(&qn, &c).unwrap();
            let b = sommerfeld_binding(&qn, &c).unwrap();
            prop_assert!((1.0 + b - e).abs() < 4e-16);
        }
    }

    #[test]
    fn nonrelativistic_limit(a in 1e-4f64..1e-3, n in 1u32..5) {
        let c = constants(a);
        for qn in QuantumNumbers::enumerate(n).into_iter().filter(|q| q.n() == n) {
            let ratio = sommerfeld_binding(&qn, &c).unwrap() / bohr_energy(n, &c);
            prop_assert!((ratio - 1.0).abs() <= 2.0 * a * a);
        }
    }

    #[test]
    fn depressions_positive_and_decaying(a in 1e-3f64..0.1, n in 1u32..6) {
        let c = constants(a);
        let (j, q) = (HalfInteger::HALF, HalfInteger::HALF);
        let d = depression(n, j, q, &c).unwrap();
        prop_assert!(d > 0.0);
        prop_assert!(depression(n + 1, j, q, &c).unwrap() < d);
    }

    #[test]
    fn kummer_terminating_series(beta in 0.5f64..6.0, z in 0.0f64..20.0) {
        let f0 = kummer(KummerParams { alpha: 0.0, beta, z }).unwrap();
        let f1 = kummer(KummerParams { alpha: -1.0, beta, z }).unwrap();
        let f2 = kummer(KummerParams { alpha: -2.0, beta, z }).unwrap();
        prop_assert_eq!(f0, 1.0);
        prop_assert!((f1 - (1.0 - z / beta)).abs() < 1e-13 * (1.0 + z));
        let expected = 1.0 - 2.0 * z / beta + z * z / (beta * (beta + 1.0));
        prop_assert!((f2 - expected).abs() < 1e-12 * (1.0 + z * z));
    }

    #[test]
    fn half_integer_round_trip(t in -200i32..200) {
        let h = HalfInteger::from_twice(t);
        prop_assert_eq!(HalfInteger::from_f64(h.value()).unwrap(), h);
    }

    #[test]
    fn hermitian_eigendecomposition(n in 2usize..12, seed in prop::collection::vec(-1.0f64..1.0, 16)) {
        let m = hermitian(n, &seed);
        let eig = eig_hermitian(&m).unwrap();
        prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        let v = &eig.vectors;
        let rebuilt = v.mul(&CMatrix::from_real_diagonal(&eig.values)).mul(&v.adjoint());
        prop_assert!(rebuilt.sub(&m).max_abs() < 1e-12);
        prop_assert!(v.adjoint().mul(v).sub(&CMatrix::identity(n)).max_abs() < 1e-12);
    }

    #[test]
    fn sturm_count_matches_dense(diag in prop::collection::vec(-2.0f64..2.0, 3..15), x in -3.0f64..3.0) {
        let off: Vec<f64> = (1..diag.len()).map(|i| 0.3 + 0.1 * i as f64).collect();
        let t = SymTridiagonal::new(diag.clone(), off.clone()).unwrap();
        let n = diag.len();
        let dense = CMatrix::from_fn(n, n, |i, j| {
            let v = if i == j { diag[i] } else if i.abs_diff(j) == 1 { off[i.min(j)] } else { 0.0 };
            Complex64::new(v, 0.0)
        });
        let values = eig_hermitian(&dense).unwrap().values;
        prop_assume!(values.iter().all(|v| (v - x).abs() > 1e-9));
        prop_assert_eq!(t.count_below(x), values.iter().filter(|&&v| v < x).count());
    }

    #[test]
    fn sparse_algebra(
        n in 2usize..8,
        a in prop::collection::vec((0usize..8, 0usize..8, -1.0f64..1.0, -1.0f64..1.0), 1..20),
        b in prop::collection::vec((0usize..8, 0usize..8, -1.0f64..1.0, -1.0f64..1.0), 1..20),
    ) {
        let (sa, sb) = (sparse(n, &a), sparse(n, &b));
        let (da, db) = (sa.to_dense(), sb.to_dense());
        prop_assert!(sa.matmul(&sb).to_dense().sub(&da.mul(&db)).max_abs() < 1e-13);
        prop_assert!(sa.commutator(&sb).add(&sb.commutator(&sa)).max_abs() < 1e-13);
        prop_assert!((sa.commutator_max_abs(&sb) - da.commutator(&db).max_abs()).abs() < 1e-13);
        prop_assert!(sa.adjoint().adjoint().sub(&sa).max_abs() == 0.0);
        let x: Vec<Complex64> = (0..n).map(|i| Complex64::new(i as f64, 1.0)).collect();
        let y = sa.matvec(&x);
        for (i, yi) in y.iter().enumerate() {
            let expected: Complex64 = (0..n).map(|j| da[(i, j)] * x[j]).sum();
            prop_assert!((yi - expected).norm() < 1e-13);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn overlap_within_unit_interval(n in 1u32..5, k in 1i32..5, positive in any::<bool>()) {
        prop_assume!(k as u32 <= n && !(k as u32 == n && positive));
        let sign = if positive { KappaSign::Positive } else { KappaSign::Negative };
        let qn = QuantumNumbers::new(n, HalfInteger::from_twice(2 * k - 1), sign).unwrap();
        let sol = build_solution(qn, &PhysicalConstants::default(), &MeshSpec::default()).unwrap();
        prop_assert!(sol.norm() > 0.0);
        prop_assert!(sol.b() > 0.0 && sol.b() < 1.0);
        prop_assert!(sol.cumulative_norm.windows(2).all(|w| w[1] >= w[0]));
    }
}
