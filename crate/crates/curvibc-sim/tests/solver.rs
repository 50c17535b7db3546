use curvibc_sim::config::FaceBc;
use curvibc_sim::experiments::{observed_orders, refinement_error, Geometry, ReflectionSetup};
use curvibc_sim::{run_config, SimConfig, SimError, Simulation};

fn small(kind: &str, inflow: &str, outflow: &str, steps: usize) -> SimConfig {
    SimConfig::from_toml(&format!(
        r#"
[grid]
ni = 40
nj = 8
nk = 6
mapping = "sheared"
params = {{ xi_y = 0.2 }}
[flow]
u = 0.4
v = 0.1
[boundary]
inflow = "{inflow}"
outflow = "{outflow}"
[pulse]
kind = "{kind}"
center = 20.0
width = 4.0
amplitude = 1e-3
angle_deg = 20.0
[time]
dt = 0.3
n_steps = {steps}
[probes]
planes = [5, 30]
"#
    ))
    .unwrap()
}

#[test]
fn zero_field_stays_zero() {
    let mut cfg = small("acoustic", "modified", "quasi3d", 20);
    cfg.pulse.amplitude = 0.0;
    let out = run_config(&cfg, Some(1)).unwrap();
    assert!(out.field.iter().all(|s| s.iter().all(|&v| v == 0.0)));
}

#[test]
fn interior_scheme_is_fourth_order() {
    let errors: Vec<f64> = [16, 32, 64].iter().map(|&n| refinement_error(n, Some(1)).unwrap()).collect();
    for p in observed_orders(&errors) {
        assert!((p - 4.0).abs() <= 0.3, "errors {errors:?}");
    }
}

#[test]
fn entropy_pulse_keeps_pressure_zero() {
    let mut cfg = small("entropy", "first_order", "first_order", 60);
    cfg.grid.mapping = "identity".into();
    cfg.grid.params.clear();
    cfg.flow.v = 0.0;
    let out = run_config(&cfg, Some(1)).unwrap();
    let pmax = out.field.iter().map(|s| s[4].abs()).fold(0.0, f64::max);
    assert!(pmax <= 1e-12, "pressure {pmax:e}");
    let rho = out.field.iter().map(|s| s[0].abs()).fold(0.0, f64::max);
    assert!(rho > 1e-4);
}

#[test]
fn periodic_energy_does_not_grow() {
    let cfg = small("acoustic", "periodic", "periodic", 150);
    let out = run_config(&cfg, Some(1)).unwrap();
    for w in out.energy.windows(2) {
        assert!(w[1] <= w[0] * 1.01, "energy grew from {} to {}", w[0], w[1]);
    }
    assert!(out.energy.last().unwrap() <= &(out.energy[0] * 1.01));
}

#[test]
fn results_are_identical_across_worker_counts() {
    let cfg = small("acoustic", "modified", "quasi3d", 40);
    let a = run_config(&cfg, Some(1)).unwrap();
    let b = run_config(&cfg, Some(4)).unwrap();
    let c = run_config(&cfg, Some(1)).unwrap();
    let bits = |o: &curvibc_sim::RunOutput| o.field.iter().flat_map(|s| s.map(f64::to_bits)).collect::<Vec<u64>>();
    assert_eq!(bits(&a), bits(&b));
    assert_eq!(bits(&a), bits(&c));
    assert_eq!(
        a.energy.iter().map(|e| e.to_bits()).collect::<Vec<_>>(),
        b.energy.iter().map(|e| e.to_bits()).collect::<Vec<_>>()
    );
    assert_eq!(a.config_hash, b.config_hash);
}

#[test]
fn boundary_variants_run_on_a_sheared_grid() {
    for bc in ["first_order", "quasi3d", "modified"] {
        let out = run_config(&small("vorticity", bc, bc, 30), Some(1)).unwrap();
        assert!(out.field.iter().all(|s| s.iter().all(|v| v.is_finite())));
    }
}

#[test]
fn unknown_keys_are_rejected() {
    let mut text = small("acoustic", "first_order", "first_order", 1).to_toml();
    text = text.replace("[time]", "[time]\nsubsteps = 2");
    match SimConfig::from_toml(&text) {
        Err(SimError::Config(msg)) => assert!(msg.contains("substeps"), "{msg}"),
        other => panic!("expected a config error, got {other:?}"),
    }
}

#[test]
fn invalid_configurations_are_rejected() {
    let base = small("acoustic", "first_order", "first_order", 1);
    let mut c = base.clone();
    c.boundary.outflow = FaceBc::Periodic;
    assert!(c.validate().is_err());
    let mut c = base.clone();
    c.probes.planes = vec![40];
    assert!(c.validate().is_err());
    let mut c = base.clone();
    c.time.dt = 0.0;
    assert!(c.validate().is_err());
    let mut c = base;
    c.grid.mapping = "no-such-mapping".into();
    assert!(Simulation::new(&c).is_err());
}

#[test]
fn growth_is_reported_as_instability() {
    let mut cfg = small("acoustic", "periodic", "periodic", 400);
    cfg.time.dt = 3.0;
    cfg.filter.enabled = false;
    match run_config(&cfg, Some(1)) {
        Err(SimError::Instability { .. }) | Err(SimError::NonFinite { .. }) => {}
        other => panic!("expected a growth error, got {:?}", other.map(|o| o.steps)),
    }
}

#[test]
fn modified_reflects_no_more_than_first_order_across_angles() {
    for angle in [0.0, 15.0, 30.0, 45.0] {
        let setup =
            ReflectionSetup { angle_deg: angle, nk: 5, geometry: Geometry::Cartesian, ..ReflectionSetup::default() };
        let r = setup.compare(&[FaceBc::FirstOrder, FaceBc::Modified], Some(1)).unwrap();
        let (fo, md) = (r[0].ratio, r[1].ratio);
        if angle == 0.0 {
            assert!((fo - md).abs() <= 1e-6 * fo.max(1e-12) && fo < 1e-3, "{angle}: {fo} {md}");
        } else {
            assert!(md < fo, "{angle}: modified {md} first_order {fo}");
        }
    }
}
