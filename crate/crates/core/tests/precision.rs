//! Single-precision instantiations of the generic core.

use sure_svt::divergence::{div_spectral_simple, fd_divergence_oracle, sure_svt};
use sure_svt::linalg::singular_values;
use sure_svt::risk::noise::{gaussian_matrix, seeded_rng};
use sure_svt::risk::gen_test_matrix;
use sure_svt::{svd, svt, Complex32, ComplexMatrix32, RealMatrix32, Scalar, SpectralFunction};

#[test]
fn f32_svd_reconstructs() {
    let x: RealMatrix32 = gaussian_matrix(&mut seeded_rng(1), 6, 4, 1.0);
    let f = svd(&x).unwrap();
    let err = (&x - &f.reconstruct()).frobenius_norm() / x.frobenius_norm();
    assert!(err < 1e-5, "{err}");
}

#[test]
fn complex32_svt_matches_spectrum() {
    let x: ComplexMatrix32 = gaussian_matrix(&mut seeded_rng(2), 5, 7, 1.0);
    let sigma = singular_values(&x).unwrap();
    let got = singular_values(&svt(&x, 0.8f32).unwrap()).unwrap();
    for (s, g) in sigma.iter().zip(&got) {
        assert!((g - (s - 0.8).max(0.0)).abs() < 1e-4);
    }
}

#[test]
fn f32_divergence_matches_finite_differences() {
    let x: ComplexMatrix32 = gaussian_matrix(&mut seeded_rng(3), 4, 3, 1.0);
    let sigma = singular_values(&x).unwrap();
    let lambda = 0.5 * (sigma[0] + sigma[1]);
    let f = SpectralFunction::SoftThreshold(lambda);
    let closed = div_spectral_simple(&sigma, 4, 3, &f, Complex32::FIELD).unwrap();
    let fd = fd_divergence_oracle(&x, &f, 1e-2).unwrap();
    assert!((closed - fd).abs() < 2e-2 * closed.abs().max(1.0), "{closed} vs {fd}");
}

#[test]
fn f32_sure_endpoint_identity() {
    let y: RealMatrix32 = gen_test_matrix(1, 8, 5, 4).unwrap();
    let s = sure_svt(&y, 0.0f32, 0.5).unwrap();
    assert!((s.sure - 8.0 * 5.0 * 0.25).abs() < 1e-4);
}
