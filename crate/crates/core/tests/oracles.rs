mod common;

use num_complex::Complex64;
use zetaspec::special_fn::riemann_zeta;
use zetaspec::spectral_checks::prime_count;
use zetaspec::zero_finder::{boundary_condition_residual, zero_table};

#[test]
fn eta_oracle_agrees_with_library_zeta() {
    for s in [
        Complex64::new(0.5, 14.0),
        Complex64::new(0.3, 60.0),
        Complex64::new(0.9, 3.0),
    ] {
        let a = common::zeta(s);
        let b = riemann_zeta(s).unwrap();
        assert!(
            (a - b).norm() < 1e-11 * b.norm().max(1.0),
            "{s}: {a} vs {b}"
        );
    }
}

#[test]
fn zero_count_up_to_100() {
    let oracle = common::zeros(1.0, 100.0, 0.05);
    assert_eq!(oracle.len(), 29);
    let table = zero_table(29).unwrap();
    for (o, z) in oracle.iter().zip(&table) {
        assert!((o - z.t).abs() < 1e-9, "{o} vs {}", z.t);
    }
    assert!(zero_table(30).unwrap()[29].t > 100.0);
}

#[test]
fn zero_table_residuals_and_eigenvalues() {
    for z in zero_table(20).unwrap() {
        assert!(boundary_condition_residual(z.z).unwrap() <= 1e-9);
        assert!((z.eigenvalue - Complex64::new(-2.0 * z.t, 0.0)).norm() <= 1e-12 * z.t);
        assert!(common::zeta(z.z.conj()).norm() <= 1e-9);
    }
}

#[test]
fn sieve_matches_segmented_oracle() {
    for n in [0u64, 1, 2, 3, 97, 100, 7919, 65_536, 1_000_003, 2_000_000] {
        assert_eq!(
            prime_count(n).unwrap(),
            common::segmented_prime_count(n),
            "n = {n}"
        );
    }
}
