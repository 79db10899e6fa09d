mod common;

use std::sync::OnceLock;

use common::{dipole_coupling, random_coupling, random_symmetric, rayleigh, rel, rng};
use milac::beamopt::*;
use milac::coupling::{CouplingMatrix, Z0};
use milac::matrixkit::{c, identity, to_complex, CMatrix, RMatrix, J};
use milac::netmodels::{end_to_end_impedance_form, matching_form_tx, Architecture, ScenarioSpec};
use nalgebra::SymmetricEigen;
use proptest::prelude::*;
use rand::Rng;

const SPACINGS: [f64; 4] = [0.25, 1.0 / 3.0, 0.5, 1.0];

fn channel(z_rt: CMatrix, coupling: Option<CouplingMatrix>) -> MisoChannel {
    MisoChannel::new(z_rt, coupling, 1.0, 1.0, Z0).unwrap()
}

/// `Re{Z}^{-1/2}` through a real eigendecomposition.
fn real_inv_sqrt(z: &CMatrix) -> CMatrix {
    let re = z.map(|v| v.re);
    let eig = SymmetricEigen::new((&re + re.transpose()) * 0.5);
    let d = RMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()));
    to_complex(&(&eig.eigenvectors * d * eig.eigenvectors.transpose()))
}

fn array16(spacing_index: usize) -> &'static CouplingMatrix {
    static CACHE: OnceLock<Vec<CouplingMatrix>> = OnceLock::new();
    &CACHE.get_or_init(|| SPACINGS.iter().map(|&d| dipole_coupling(16, d)).collect())[spacing_index]
}

#[test]
fn random_search_never_beats_the_design() {
    let coupling = dipole_coupling(3, 0.3);
    let mut r = rng(21);
    let ch = channel(rayleigh(&mut r, 3), Some(coupling));
    let design = optimize_milac_mc(&ch).unwrap();
    let scale = design.b.norm();
    let mut best = 0.0f64;
    for k in 0..100_000 {
        let eps = scale * 10f64.powf(-4.0 + 4.0 * (k % 5) as f64 / 4.0);
        let b = &design.b + random_symmetric(&mut r, 4, eps);
        best = best.max(received_power(&b, &ch).unwrap());
    }
    assert!(best <= design.achieved_power * (1.0 + 1e-12), "{best} > {}", design.achieved_power);
}

#[test]
fn phase_gauge_leaves_power_unchanged() {
    let mut r = rng(22);
    let ch = channel(rayleigh(&mut r, 16), Some(array16(0).clone()));
    let reference = optimize_milac_mc(&ch).unwrap().achieved_power;
    for phase in [0.3, 1.0, 2.5, std::f64::consts::PI, 5.9] {
        let p = optimize_milac_mc_phased(&ch, phase).unwrap().achieved_power;
        assert!((p - reference).abs() < 1e-10 * reference, "phase {phase}");
    }
}

#[test]
fn yyy_identity() {
    let mut r = rng(23);
    for n in [1, 2, 5, 16, 64] {
        let z = random_coupling(&mut r, n, Z0);
        let y = z.clone().try_inverse().unwrap();
        let re_y = y.map(|v| c(v.re, 0.0));
        let lhs = &y * re_y.try_inverse().unwrap() * y.adjoint();
        let rhs = z.map(|v| c(v.re, 0.0)).try_inverse().unwrap();
        assert!(rel(&lhs, &rhs) < 1e-10, "n = {n}");
    }
}

#[test]
fn trace_proposition_on_dipole_arrays() {
    for (i, &d) in SPACINGS.iter().enumerate() {
        let ratio = array16(i).trace_ratio().unwrap();
        assert!(ratio >= 1.0, "d = {d}: {ratio}");
        if d <= 0.5 {
            assert!(ratio > 1.0, "d = {d}: {ratio}");
        }
    }
}

#[test]
fn matching_equals_milac_and_beats_unmatched() {
    let mut r = rng(24);
    for i in 0..SPACINGS.len() {
        for _ in 0..20 {
            let ch = channel(rayleigh(&mut r, 16), Some(array16(i).clone()));
            let mc = power_milac_mc(&ch).unwrap();
            // independent route: explicit eigendecomposition of Re{Z}
            let whitened = &ch.z_rt * real_inv_sqrt(array16(i).matrix());
            let direct = ch.p_t * ch.y0() * whitened.norm_squared() / 16.0;
            assert!((power_digital_matching(&ch).unwrap() - direct).abs() < 1e-12 * direct);
            assert!((mc - direct).abs() < 1e-12 * direct);
            assert!((power_digital_matching_network(&ch).unwrap() - mc).abs() < 1e-10 * mc);
            assert!(power_digital_nomatching(&ch).unwrap() <= mc);
        }
    }
}

#[test]
fn proof_chain_gram_matrix_is_psd() {
    for i in 0..SPACINGS.len() {
        let z = array16(i).matrix();
        let d = z - identity(16) * c(Z0, 0.0);
        let gram = d.adjoint() * &d;
        let eig = gram.symmetric_eigenvalues();
        let floor = -1e-12 * gram.norm();
        assert!(eig.iter().all(|&l| l >= floor), "spacing index {i}");
    }
}

#[test]
fn matching_network_at_third_wavelength() {
    let coupling = array16(1).clone();
    let z_f = matching_network_impedance(&coupling).unwrap();
    assert!(z_f.iter().all(|v| v.re == 0.0));
    assert!(rel(&z_f, &z_f.transpose()) == 0.0);

    let mut r = rng(25);
    let z_rt = rayleigh(&mut r, 16);
    let spec = ScenarioSpec::new(Architecture::MilacTx, z_rt.clone(), Z0)
        .with_tx_chains(16)
        .with_coupling_tx(coupling.matrix().clone());
    let (z_t, j_t) = matching_form_tx(&z_f, &spec).unwrap();
    assert!(rel(&z_t, &(identity(16) * c(Z0, 0.0))) < 1e-10);
    let inv_sqrt = real_inv_sqrt(coupling.matrix());
    assert!(rel(&j_t, &(&inv_sqrt * (-J * Z0.sqrt()))) < 1e-10);

    // h_mn = -j / (4 sqrt(Z0)) z_RT Re{Z_TT}^{-1/2}, rebuilt through the network model
    let h = end_to_end_impedance_form(&spec, Some(&z_f), None).unwrap();
    let expected = (&z_rt * &inv_sqrt) * (-J / (4.0 * Z0.sqrt()));
    assert!(rel(&h, &expected) < 1e-10);
    let ch = channel(z_rt, Some(coupling));
    assert!(rel(&matched_channel(&ch).unwrap(), &expected) < 1e-12);
}

#[test]
fn expected_digital_below_expected_milac() {
    let coupling = dipole_coupling(64, 1.0 / 3.0);
    let milac = expected_power_milac_mc(&coupling, 1.0, 1.0).unwrap();
    let digital = expected_power_digital_nomatching(&coupling, 1.0, 1.0).unwrap();
    let uncoupled = expected_power_milac_mc(&CouplingMatrix::uncoupled(64, Z0), 1.0, 1.0).unwrap();
    assert!(digital <= milac);
    assert!(milac > uncoupled);
}

#[test]
fn unaware_design_loses_power_under_strong_coupling() {
    let mut r = rng(26);
    let ch = channel(rayleigh(&mut r, 16), Some(array16(0).clone()));
    let aware = optimize_milac_mc(&ch).unwrap();
    let unaware = optimize_milac_nomc(&ch).unwrap();
    // the unaware design reaches its own target on the model it assumes
    assert!((unaware.achieved_power - power_milac_nomc(&ch)).abs() < 1e-10 * unaware.achieved_power);
    assert!(received_power(&unaware.b, &ch).unwrap() < aware.achieved_power);
}

#[test]
fn random_perturbation_of_uncoupled_design_is_worse() {
    let mut r = rng(27);
    let ch = channel(rayleigh(&mut r, 8), None);
    let design = optimize_milac_nomc(&ch).unwrap();
    for _ in 0..200 {
        let scale = r.random_range(1e-3..1e-1) * design.b.norm();
        let b = &design.b + random_symmetric(&mut r, 9, scale);
        assert!(received_power(&b, &ch).unwrap() <= design.achieved_power * (1.0 + 1e-12));
    }
}

fn array8() -> &'static CouplingMatrix {
    static CACHE: OnceLock<CouplingMatrix> = OnceLock::new();
    CACHE.get_or_init(|| dipole_coupling(8, 0.25))
}

fn z_rt_strategy(n: usize) -> impl Strategy<Value = CMatrix> {
    proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), n)
        .prop_filter("nonzero channel", |v| v.iter().any(|&(a, b)| a.abs() + b.abs() > 1e-3))
        .prop_map(move |v| CMatrix::from_fn(1, n, |_, j| c(v[j].0, v[j].1)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn design_invariants(z_rt in z_rt_strategy(8), p_t in 0.1f64..10.0) {
        let ch = MisoChannel::new(z_rt, Some(array8().clone()), p_t, 1.0, Z0).unwrap();
        let d = optimize_milac_mc(&ch).unwrap();
        prop_assert!((d.achieved_power - d.bound).abs() <= BOUND_TOL * d.bound);
        prop_assert!(d.diagnostics.theta.within(1e-10));
        prop_assert!(d.diagnostics.b_bar_imag_residue < 1e-9);
        prop_assert_eq!(d.b.clone(), d.b.transpose());
        let report = power_report(&ch).unwrap();
        prop_assert!((report.milac_mc - report.digital_matching).abs() <= 1e-12 * report.milac_mc);
        prop_assert!(report.milac_mc >= report.digital_nomatching);
    }

    #[test]
    fn power_is_homogeneous_in_channel_and_power(z_rt in z_rt_strategy(8), s in 0.1f64..10.0) {
        let ch = MisoChannel::new(z_rt.clone(), Some(array8().clone()), 1.0, 1.0, Z0).unwrap();
        let scaled = MisoChannel::new(z_rt * c(s, 0.0), Some(array8().clone()), s, 1.0, Z0).unwrap();
        let p = power_milac_mc(&ch).unwrap();
        let q = power_milac_mc(&scaled).unwrap();
        prop_assert!((q - s * s * s * p).abs() <= 1e-12 * q);
        prop_assert!((power_milac_mc_quadratic(&ch).unwrap() - p).abs() <= 1e-12 * p);
    }
}
