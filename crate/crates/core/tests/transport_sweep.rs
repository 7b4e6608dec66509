use bathflow_core::reservoirs::{HBAR, K_B};
use bathflow_core::transport::{carnot_crossing, sweep_ratio, t_c_grid_from_x, SweepOptions};

const OMEGA: f64 = 1e12;

fn grid() -> Vec<f64> {
    t_c_grid_from_x(OMEGA, -3.0, 30f64.log10(), 120)
}

#[test]
fn parallel_sweep_is_identical_to_serial() {
    let serial = sweep_ratio(OMEGA, 2.0, &grid(), &SweepOptions::default()).unwrap();
    let parallel = sweep_ratio(
        OMEGA,
        2.0,
        &grid(),
        &SweepOptions {
            jobs: 4,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(serial, parallel);
}

#[test]
fn factors_stay_inside_unit_interval() {
    for pt in sweep_ratio(OMEGA, 2.0, &grid(), &SweepOptions::default()).unwrap() {
        assert_eq!(pt.eta_carnot, 0.5);
        assert!(pt.eta_fermi > 0.0 && pt.eta_fermi < 1.0, "{pt:?}");
        assert!(pt.eta_bose > 0.0 && pt.eta_bose < 1.0, "{pt:?}");
        assert!((pt.x_c - HBAR * OMEGA / (K_B * pt.t_c)).abs() <= 1e-12 * pt.x_c);
    }
}

#[test]
fn ordering_at_low_temperature() {
    for pt in sweep_ratio(OMEGA, 2.0, &grid(), &SweepOptions::default()).unwrap() {
        if pt.x_c >= 8.0 {
            assert!(
                pt.eta_fermi < pt.eta_carnot && pt.eta_carnot < pt.eta_bose,
                "{pt:?}"
            );
        }
    }
}

#[test]
fn fermionic_factor_crosses_carnot_once() {
    let x = carnot_crossing(2.0, 0.5, 8.0).unwrap();
    assert!((x - 2.905_038_303_945_394).abs() < 1e-12);
}

#[test]
fn bad_grids_are_rejected() {
    assert!(sweep_ratio(OMEGA, 1.0, &grid(), &SweepOptions::default()).is_err());
    assert!(sweep_ratio(OMEGA, 2.0, &[200.0, 100.0], &SweepOptions::default()).is_err());
}
