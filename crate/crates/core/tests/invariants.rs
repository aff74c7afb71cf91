use num_complex::Complex64 as C;
use proptest::prelude::*;
use rotlab::linalg::{
    born_probability, helstrom_prob, helstrom_projectors, hermitian_eigen, hermitian_eigenvalues,
    partial_trace, trace_norm, ComplexMatrix, DensityMatrix, Subsystem,
};

fn hermitian(n: usize, raw: &[f64]) -> ComplexMatrix {
    let mut data = vec![C::new(0.0, 0.0); n * n];
    let mut it = raw.iter().copied();
    for i in 0..n {
        data[i * n + i] = C::new(it.next().unwrap(), 0.0);
        for j in i + 1..n {
            let z = C::new(it.next().unwrap(), it.next().unwrap());
            data[i * n + j] = z;
            data[j * n + i] = z.conj();
        }
    }
    ComplexMatrix::new(n, n, data).unwrap()
}

fn hermitian_strategy(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(-1.0f64..1.0, n * n).prop_map(move |raw| hermitian(n, &raw))
}

/// `A A† / Tr(A A†)` for a random `A`.
fn density_strategy(n: usize) -> impl Strategy<Value = DensityMatrix> {
    prop::collection::vec(-1.0f64..1.0, 2 * n * n).prop_map(move |raw| {
        let data: Vec<C> = raw.chunks(2).map(|c| C::new(c[0], c[1])).collect();
        let a = ComplexMatrix::new(n, n, data).unwrap();
        let aa = a.matmul(&a.adjoint()).unwrap();
        let tr = aa.trace().re;
        let mut m = aa.scale(1.0 / tr);
        // exact Hermitian symmetry before validation
        m = (&m + &m.adjoint()).scale(0.5);
        DensityMatrix::new(m).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn eigenvalues_preserve_trace_and_frobenius(m in (2usize..=8).prop_flat_map(hermitian_strategy)) {
        let ev = hermitian_eigenvalues(&m).unwrap();
        prop_assert!(ev.windows(2).all(|w| w[0] <= w[1]));
        let sum: f64 = ev.iter().sum();
        let sq: f64 = ev.iter().map(|e| e * e).sum();
        prop_assert!((sum - m.trace().re).abs() < 1e-10);
        prop_assert!((sq.sqrt() - m.frobenius_norm()).abs() < 1e-10);
    }

    #[test]
    fn trace_norm_is_unitarily_invariant(
        m in hermitian_strategy(4),
        basis in hermitian_strategy(4),
    ) {
        let u = hermitian_eigen(&basis).unwrap().vectors;
        let rotated = u.matmul(&m).unwrap().matmul(&u.adjoint()).unwrap();
        let rotated = (&rotated + &rotated.adjoint()).scale(0.5);
        prop_assert!((trace_norm(&rotated).unwrap() - trace_norm(&m).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn partial_trace_preserves_trace(rho in density_strategy(6)) {
        for (keep, da, db) in [(Subsystem::A, 2, 3), (Subsystem::B, 2, 3), (Subsystem::A, 3, 2)] {
            let r = partial_trace(&rho, da, db, keep).unwrap();
            prop_assert!((r.matrix().trace().re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn helstrom_is_symmetric_and_bounded(
        r0 in density_strategy(3), r1 in density_strategy(3), p0 in 0.0f64..=1.0
    ) {
        let a = helstrom_prob(p0, &r0, 1.0 - p0, &r1).unwrap();
        let b = helstrom_prob(1.0 - p0, &r1, p0, &r0).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
        prop_assert!(a >= p0.max(1.0 - p0) - 1e-12 && a <= 1.0 + 1e-12);
    }

    #[test]
    fn projectors_attain_helstrom_value(
        r0 in density_strategy(3), r1 in density_strategy(3), p0 in 0.05f64..0.95
    ) {
        let (pi0, pi1) = helstrom_projectors(p0, &r0, 1.0 - p0, &r1).unwrap();
        let attained = p0 * born_probability(&pi0, &r0).unwrap()
            + (1.0 - p0) * born_probability(&pi1, &r1).unwrap();
        let value = helstrom_prob(p0, &r0, 1.0 - p0, &r1).unwrap();
        prop_assert!((attained - value).abs() < 1e-10);
    }
}
