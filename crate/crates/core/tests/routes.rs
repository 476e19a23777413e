use std::f64::consts::{FRAC_PI_4, TAU};

use cve_core::circuits::{entropy_closed_form, CircuitParams};
use cve_core::fock_oracle::{oracle_circuit, oracle_fock, tmsv_schmidt};
use cve_core::nongauss::{bs_fock_spectrum, FockPair};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn tmsv_oracle_spectrum_is_geometric() {
    let r: f64 = 0.8;
    let lambda = r.tanh().powi(2);
    let s = tmsv_schmidt(r, 200).unwrap();
    for (n, &p) in s.eigenvalues().iter().take(20).enumerate() {
        assert!((p - (1.0 - lambda) * lambda.powi(n as i32)).abs() < 1e-13);
    }
}

#[test]
fn closed_form_tracks_oracle_on_fresh_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..12 {
        let p = CircuitParams::new(
            rng.gen::<f64>() * TAU,
            rng.gen::<f64>() * TAU,
            Complex64::from_polar(rng.gen::<f64>(), rng.gen::<f64>() * TAU),
            Complex64::from_polar(rng.gen::<f64>(), rng.gen::<f64>() * TAU),
        )
        .unwrap();
        let e = entropy_closed_form(&p).unwrap();
        let o = oracle_circuit(&p).unwrap().entropy;
        assert!((e - o).abs() < 1e-8, "{p:?}: {e} vs {o}");
    }
}

#[test]
fn number_state_spectrum_agrees_with_oracle_beyond_the_grid() {
    for (n1, n2) in [(7, 5), (12, 3), (0, 15)] {
        let p = FockPair::new(n1, n2, 0.3).unwrap();
        let s = bs_fock_spectrum(&p).unwrap();
        let (_, oracle) = oracle_fock(n1, n2, 0.3, 0.0).unwrap();
        let dev = s.lambda.iter().zip(&oracle).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(dev < 1e-10);
    }
}

#[test]
fn balanced_splitter_on_twin_fock_is_symmetric() {
    let s = bs_fock_spectrum(&FockPair::new(3, 3, FRAC_PI_4).unwrap()).unwrap();
    let k = s.lambda.len();
    for i in 0..k {
        assert!((s.lambda[i] - s.lambda[k - 1 - i]).abs() < 1e-12);
    }
    // odd photon numbers in one arm are forbidden
    for i in (1..k).step_by(2) {
        assert!(s.lambda[i].abs() < 1e-12);
    }
}
