//! Initial pulses. The envelope is a Gaussian in ξ with half width at half
//! maximum `width`; oblique acoustic pulses carry a plane-wave phase whose
//! η wavenumber fits `periods_eta` periods into the periodic η extent.

use crate::config::{PulseConfig, PulseDirection, PulseKind};
use crate::scheme::State;
use curvibc_core::metrics::mapping::ComputationalGrid;
use curvibc_core::Metric;

/// Computational wavenumbers (k, l) of an acoustic carrier whose physical
/// wave normal makes `angle_deg` with the face normal ∓∇ξ/|∇ξ| (upstream
/// pulses travel towards decreasing ξ). A pulse split in both directions
/// meets each face at the same angle.
pub fn carrier_wavenumbers(cfg: &PulseConfig, metric: &Metric<f64>, eta_period: f64) -> (f64, f64) {
    if cfg.angle_deg == 0.0 {
        return (0.0, 0.0);
    }
    let l = std::f64::consts::TAU * f64::from(cfg.periods_eta) / eta_period;
    let (x, e) = (metric.xi(), metric.eta());
    let nx = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    let xe = (x[0] * e[0] + x[1] * e[1] + x[2] * e[2]) / nx;
    let ne2 = e[0] * e[0] + e[1] * e[1] + e[2] * e[2];
    let tangential = l * (ne2 - xe * xe).max(0.0).sqrt();
    let sign = match cfg.direction {
        PulseDirection::Upstream | PulseDirection::Both => -1.0,
        PulseDirection::Downstream => 1.0,
    };
    let normal = sign * tangential / cfg.angle_deg.to_radians().tan();
    ((normal - l * xe) / nx, l)
}

/// Pulse value at one node. `s` are computational coordinates.
pub fn pulse_state(cfg: &PulseConfig, metric: &Metric<f64>, s: [f64; 3], kl: (f64, f64)) -> State {
    let r = (s[0] - cfg.center) / cfg.width;
    let env = cfg.amplitude * (-std::f64::consts::LN_2 * r * r).exp();
    let (x, e) = (metric.xi(), metric.eta());
    let nx = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    match cfg.kind {
        PulseKind::Entropy => [env, 0.0, 0.0, 0.0, 0.0],
        PulseKind::Vorticity => {
            let xh = x.map(|v| v / nx);
            let d = e[0] * xh[0] + e[1] * xh[1] + e[2] * xh[2];
            let t = [e[0] - d * xh[0], e[1] - d * xh[1], e[2] - d * xh[2]];
            let tn = (t[0] * t[0] + t[1] * t[1] + t[2] * t[2]).sqrt();
            [0.0, env * t[0] / tn, env * t[1] / tn, env * t[2] / tn, 0.0]
        }
        PulseKind::Acoustic => {
            let (k, l) = kl;
            let carrier = if k == 0.0 && l == 0.0 { 1.0 } else { (k * (s[0] - cfg.center) + l * s[1]).cos() };
            if cfg.direction == PulseDirection::Both {
                let amp = env * carrier;
                return [amp, 0.0, 0.0, 0.0, amp];
            }
            let (dir, amp) = if k == 0.0 && l == 0.0 {
                let sign = if cfg.direction == PulseDirection::Downstream { 1.0 } else { -1.0 };
                (x.map(|v| sign * v / nx), env)
            } else {
                let a = [0, 1, 2].map(|c| k * x[c] + l * e[c]);
                let an = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
                (a.map(|v| v / an), env * carrier)
            };
            [amp, amp * dir[0], amp * dir[1], amp * dir[2], amp]
        }
    }
}

/// Fills a field with the configured pulse.
pub fn initial_field(
    cfg: &PulseConfig,
    grid: &ComputationalGrid<f64>,
    metric_at: impl Fn(usize) -> Metric<f64>,
) -> Vec<State> {
    let eta_period = grid.nj as f64 * grid.spacing[1];
    let mut q = vec![[0.0; 5]; grid.len()];
    for i in 0..grid.ni {
        for j in 0..grid.nj {
            for k in 0..grid.nk {
                let n = grid.index(i, j, k);
                let m = metric_at(n);
                let kl = carrier_wavenumbers(cfg, &m, eta_period);
                q[n] = pulse_state(cfg, &m, grid.coords(i, j, k), kl);
            }
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(angle: f64) -> PulseConfig {
        PulseConfig {
            kind: PulseKind::Acoustic,
            direction: PulseDirection::Upstream,
            center: 0.0,
            width: 4.0,
            amplitude: 1.0,
            angle_deg: angle,
            periods_eta: 1,
        }
    }

    #[test]
    fn cartesian_carrier_angle() {
        let (k, l) = carrier_wavenumbers(&cfg(30.0), &Metric::cartesian(), 32.0);
        assert!((l - std::f64::consts::TAU / 32.0).abs() < 1e-15);
        let ang = (l / -k).atan().to_degrees();
        assert!((ang - 30.0).abs() < 1e-12 && k < 0.0);
    }

    #[test]
    fn sheared_carrier_angle() {
        let m = Metric::new([1.0, 0.2, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]).unwrap();
        let (k, l) = carrier_wavenumbers(&cfg(30.0), &m, 32.0);
        let a = [k * 1.0, k * 0.2 + l, 0.0];
        let xh = [1.0 / 1.04f64.sqrt(), 0.2 / 1.04f64.sqrt(), 0.0];
        let an = (a[0] * a[0] + a[1] * a[1]).sqrt();
        let cos = -(a[0] * xh[0] + a[1] * xh[1]) / an;
        assert!((cos - 30f64.to_radians().cos()).abs() < 1e-12);
    }

    #[test]
    fn acoustic_state_is_plane_wave_eigenvector() {
        let q = pulse_state(&cfg(0.0), &Metric::cartesian(), [0.0; 3], (0.0, 0.0));
        assert_eq!(q, [1.0, -1.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn split_pulse_is_pressure_at_rest() {
        let c = PulseConfig { direction: PulseDirection::Both, ..cfg(0.0) };
        let q = pulse_state(&c, &Metric::cartesian(), [0.0; 3], (0.0, 0.0));
        assert_eq!(q, [1.0, 0.0, 0.0, 0.0, 1.0]);
    }
}
