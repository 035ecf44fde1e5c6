mod common;

use common::{eigenvalues, pair, power, to_na};
use matmeans::linalg::{complex_power, real_power, text};
use matmeans::sampler::{random_spd, SamplerConfig};
use matmeans::{hermitian_eigen, Complex64, Matrix, SpdMatrix};
use proptest::prelude::*;

fn hermitian_from(n: usize, raw: &[(f64, f64)]) -> Matrix {
    let mut m = Matrix::zeros(n);
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            let (re, im) = raw[k % raw.len()];
            k += 1;
            if i == j {
                m[(i, i)] = Complex64::new(re, 0.0);
            } else {
                m[(i, j)] = Complex64::new(re, im);
                m[(j, i)] = Complex64::new(re, -im);
            }
        }
    }
    m
}

proptest! {
    #![proptest_config(common::cases(1000))]

    #[test]
    fn reconstruction(n in 1usize..=10, raw in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 55)) {
        let h = hermitian_from(n, &raw);
        prop_assume!(h.frobenius_norm() > 0.0);
        let e = hermitian_eigen(&h).unwrap();
        let err = (&e.reconstruct() - &h).frobenius_norm() / h.frobenius_norm();
        prop_assert!(err <= 1e-10, "reconstruction error {err:e}");
        prop_assert!(e.unitarity_defect() <= 1e-12);
        let expected = eigenvalues(&h);
        let scale = h.frobenius_norm();
        for (a, b) in e.values().iter().zip(&expected) {
            prop_assert!((a - b).abs() <= 1e-12 * scale, "{a} vs {b}");
        }
    }
}

proptest! {
    #![proptest_config(common::cases(60))]

    #[test]
    fn power_semigroup(seed in any::<u64>(), n in 1usize..=8, log_kappa in 0.0f64..4.0) {
        let a = random_spd(&SamplerConfig::new(n, 10f64.powf(log_kappa), seed).unwrap()).unwrap();
        let exps = [-1.0, -0.5, 0.25, 0.5, 1.0];
        for &s in &exps {
            for &t in &exps {
                let lhs = real_power(&a, s + t).unwrap();
                let rhs = real_power(&a, s).unwrap().matrix() * real_power(&a, t).unwrap().matrix();
                let d = lhs.matrix().relative_distance(&rhs);
                prop_assert!(d <= 1e-10, "s={s} t={t}: {d:e}");
            }
        }
    }

    #[test]
    fn complex_power_at_real_exponent(seed in any::<u64>(), n in 1usize..=8, t in -2.0f64..2.0) {
        let a = random_spd(&SamplerConfig::new(n, 1e3, seed).unwrap()).unwrap();
        let z = complex_power(&a, Complex64::new(t, 0.0));
        let r = real_power(&a, t).unwrap();
        prop_assert!(z.relative_distance(r.matrix()) <= 1e-12);
    }

    #[test]
    fn power_matches_reference(seed in any::<u64>(), n in 1usize..=6, t in -1.5f64..1.5) {
        let a = random_spd(&SamplerConfig::new(n, 1e2, seed).unwrap()).unwrap();
        let ours = real_power(&a, t).unwrap();
        let reference = power(a.matrix(), t);
        prop_assert!(ours.matrix().relative_distance(&reference) <= 1e-10);
    }

    #[test]
    fn determinant_matches_reference(seed in any::<u64>(), n in 1usize..=6) {
        let (a, b) = pair(n, 50.0, seed);
        let m = a.matrix() * b.matrix();
        let ours = m.determinant();
        let reference = to_na(&m).determinant();
        prop_assert!((ours - reference).norm() <= 1e-10 * reference.norm());
        prop_assert!(common::rel_close(a.log_det(), a.eigenvalues().iter().map(|x| x.ln()).sum(), 1e-12));
    }

    #[test]
    fn text_format_round_trips_generated_matrices(seed in any::<u64>(), n in 1usize..=8) {
        let a = random_spd(&SamplerConfig::new(n, 1e6, seed).unwrap()).unwrap();
        let back = text::parse_matrix(&text::write_matrix(a.matrix())).unwrap();
        prop_assert_eq!(&back, a.matrix());
    }
}

#[test]
fn unitary_complex_power_on_imaginary_axis() {
    let a = SpdMatrix::from_diag(&[1.0, 4.0]).unwrap();
    let y = std::f64::consts::PI / 4f64.ln();
    let u = complex_power(&a, Complex64::new(0.0, y));
    assert!((u[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    assert!((u[(1, 1)] - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
}

#[test]
fn ill_conditioned_eigenvalues_keep_relative_accuracy() {
    let n = 6;
    let a = random_spd(&SamplerConfig::new(n, 1e10, 3).unwrap()).unwrap();
    let reference = eigenvalues(a.matrix());
    let smallest = *reference.last().unwrap();
    assert!((a.min_eig() - smallest).abs() <= 1e-4 * smallest);
}
