use curvibc_core::bc_first_order::{build_transform, incoming_indices, ScalingMode, Side};
use curvibc_core::bc_quasi3d::H44Reading;
use curvibc_core::sampling::{subsonic_samples, SampleSpec};
use curvibc_sim::boundary::NodeClosure;
use curvibc_sim::config::FaceBc;
use proptest::prelude::*;

fn dot(a: &[f64; 5], b: &[f64; 5]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn state() -> impl Strategy<Value = [f64; 5]> {
    prop::array::uniform5(-1.0f64..1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closures_keep_outgoing_characteristics(seed in 0u64..10_000, inflow in any::<bool>(), qdot in state(), de in state(), dz in state()) {
        let s = &subsonic_samples::<f64>(seed, 1, &SampleSpec::default())[0];
        let side = if inflow { Side::Inflow } else { Side::Outflow };
        let t = build_transform(&s.metric, &s.flow, ScalingMode::Nondimensional).unwrap();
        let incoming = incoming_indices(side);
        for bc in [FaceBc::FirstOrder, FaceBc::Quasi3d, FaceBc::Modified] {
            let closure = match NodeClosure::new(bc, side, &s.metric, &s.flow, H44Reading::default()) {
                Ok(c) => c,
                Err(e) => {
                    prop_assert!(bc == FaceBc::Modified && e.name() == "DegenerateDenominator", "{bc:?}: {e}");
                    continue;
                }
            };
            let out = closure.apply(&qdot, &de, &dz);
            for c in (0..5).filter(|c| !incoming.contains(c)) {
                let (a, b) = (dot(&t.to_char[c], &out), dot(&t.to_char[c], &qdot));
                prop_assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()), "{bc:?} char {c}: {a} vs {b}");
            }
            if bc == FaceBc::FirstOrder {
                for &c in incoming {
                    prop_assert!(dot(&t.to_char[c], &out).abs() <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn closures_are_linear(seed in 0u64..10_000, a in -3.0f64..3.0, qdot in state(), de in state(), dz in state()) {
        let s = &subsonic_samples::<f64>(seed, 1, &SampleSpec::default())[0];
        let c = NodeClosure::new(FaceBc::Modified, Side::Inflow, &s.metric, &s.flow, H44Reading::default());
        prop_assume!(c.is_ok());
        let c = c.unwrap();
        let base = c.apply(&qdot, &de, &dz);
        let scaled = c.apply(&qdot.map(|v| a * v), &de.map(|v| a * v), &dz.map(|v| a * v));
        for i in 0..5 {
            prop_assert!((scaled[i] - a * base[i]).abs() <= 1e-9 * (1.0 + base[i].abs()));
        }
    }

    #[test]
    fn hard_wall_stops_normal_velocity(seed in 0u64..10_000, inflow in any::<bool>(), qdot in state()) {
        let s = &subsonic_samples::<f64>(seed, 1, &SampleSpec::default())[0];
        let side = if inflow { Side::Inflow } else { Side::Outflow };
        let c = NodeClosure::new(FaceBc::HardWall, side, &s.metric, &s.flow, H44Reading::default()).unwrap();
        let out = c.apply(&qdot, &[0.0; 5], &[0.0; 5]);
        let x = s.metric.xi();
        let un = x[0] * out[1] + x[1] * out[2] + x[2] * out[3];
        prop_assert!(un.abs() <= 1e-10);
    }
}
