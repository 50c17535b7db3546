//! Boundary closures at the ξ faces.
//!
//! At a face node the interior scheme supplies a provisional time
//! derivative Q̇ (with a one-sided ξ derivative). The closure keeps the
//! outgoing characteristic combinations of Q̇ and replaces the incoming ones
//! by the boundary condition:
//!
//! ```text
//! [ T   ] Qₜ = [ −G·Q_η − H·Q_ζ ]      r boundary rows
//! [ W_o ]      [  W_o·Q̇         ]      5 − r outgoing characteristic rows
//! ```
//!
//! The first-order conditions use the incoming characteristic rows for `T`
//! with G = H = 0. The hard wall uses the single row n̂·u′ₜ = 0 and keeps
//! every characteristic except the acoustic wave entering the domain.

use crate::config::FaceBc;
use crate::error::{SimError, SimResult};
use crate::scheme::State;
use curvibc_core::bc_first_order::{build_transform, incoming_indices, ScalingMode, Side};
use curvibc_core::bc_modified::build_modified;
use curvibc_core::bc_quasi3d::{build_quasi3d, Basis, BcOptions, H44Reading};
use curvibc_core::linalg::invert5;
use curvibc_core::{MeanFlow, Metric};

/// Precomputed closure at one face node.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeClosure {
    kinv: [[f64; 5]; 5],
    g: Vec<State>,
    h: Vec<State>,
    outgoing: Vec<State>,
}

impl NodeClosure {
    /// Builds the closure for one face node.
    pub fn new(
        bc: FaceBc,
        side: Side,
        metric: &Metric<f64>,
        flow: &MeanFlow<f64>,
        h44: H44Reading,
    ) -> curvibc_core::Result<Self> {
        let t = build_transform(metric, flow, ScalingMode::Nondimensional)?;
        let incoming: Vec<usize> = match bc {
            FaceBc::HardWall => vec![if side == Side::Inflow { 3 } else { 4 }],
            _ => incoming_indices(side).to_vec(),
        };
        let outgoing: Vec<State> = (0..5).filter(|c| !incoming.contains(c)).map(|c| t.to_char[c]).collect();
        let opts = BcOptions { basis: Basis::Primitive, mode: ScalingMode::Nondimensional, h44 };
        let (time, g, h) = match bc {
            FaceBc::FirstOrder => {
                let rows: Vec<State> = incoming.iter().map(|&c| t.to_char[c]).collect();
                let zeros = vec![[0.0; 5]; rows.len()];
                (rows, zeros.clone(), zeros)
            }
            FaceBc::Quasi3d | FaceBc::Modified => {
                let op = if bc == FaceBc::Modified {
                    build_modified(metric, flow, side, opts)?
                } else {
                    build_quasi3d(metric, flow, side, opts)?
                };
                (op.time_rows, op.g, op.h)
            }
            FaceBc::HardWall => {
                let x = metric.xi();
                let n = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
                (vec![[0.0, x[0] / n, x[1] / n, x[2] / n, 0.0]], vec![[0.0; 5]], vec![[0.0; 5]])
            }
            FaceBc::Periodic => unreachable!("periodic faces have no closure"),
        };
        let mut k = [[0.0; 5]; 5];
        for (r, row) in time.iter().chain(outgoing.iter()).enumerate() {
            k[r] = *row;
        }
        let kinv = invert5(&k).ok_or(curvibc_core::Error::DegenerateNormalization("boundary closure"))?;
        Ok(Self { kinv, g, h, outgoing })
    }

    /// Closed time derivative from the provisional one and the tangential
    /// derivatives at the node.
    #[inline]
    pub fn apply(&self, qdot: &State, d_eta: &State, d_zeta: &State) -> State {
        let mut rhs = [0.0; 5];
        let r = self.g.len();
        for (row, (g, h)) in self.g.iter().zip(&self.h).enumerate() {
            let mut s = 0.0;
            for c in 0..5 {
                s -= g[c] * d_eta[c] + h[c] * d_zeta[c];
            }
            rhs[row] = s;
        }
        for (o, w) in self.outgoing.iter().enumerate() {
            rhs[r + o] = (0..5).map(|c| w[c] * qdot[c]).sum();
        }
        let mut out = [0.0; 5];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..5).map(|c| self.kinv[i][c] * rhs[c]).sum();
        }
        out
    }
}

/// Closures for every node of one ξ face (a single entry when the metric is
/// uniform over the face).
#[derive(Clone, Debug, PartialEq)]
pub struct FaceClosure {
    pub bc: FaceBc,
    pub side: Side,
    nodes: Vec<NodeClosure>,
}

impl FaceClosure {
    /// Builds the face closure from the face metrics (row-major over j, k).
    pub fn new(
        bc: FaceBc,
        side: Side,
        metrics: &[Metric<f64>],
        nk: usize,
        flow: &MeanFlow<f64>,
        h44: H44Reading,
    ) -> SimResult<Self> {
        let uniform = metrics.windows(2).all(|w| w[0] == w[1]);
        let list: &[Metric<f64>] = if uniform { &metrics[..1] } else { metrics };
        let nodes = list
            .iter()
            .enumerate()
            .map(|(n, m)| {
                NodeClosure::new(bc, side, m, flow, h44).map_err(|e| match e {
                    curvibc_core::Error::DegenerateNormalization("boundary closure") => {
                        SimError::SingularClosure { j: n / nk, k: n % nk }
                    }
                    other => SimError::Core(other),
                })
            })
            .collect::<SimResult<Vec<_>>>()?;
        Ok(Self { bc, side, nodes })
    }

    /// Closure at face node `n` (row-major over j, k).
    #[inline]
    pub fn node(&self, n: usize) -> &NodeClosure {
        if self.nodes.len() == 1 {
            &self.nodes[0]
        } else {
            &self.nodes[n]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quiescent_state_stays_quiescent() {
        let m = Metric::cartesian();
        let f = MeanFlow::nondimensional(0.5, 0.0, 0.0);
        for bc in [FaceBc::FirstOrder, FaceBc::Quasi3d, FaceBc::Modified, FaceBc::HardWall] {
            for side in [Side::Inflow, Side::Outflow] {
                let c = NodeClosure::new(bc, side, &m, &f, H44Reading::default()).unwrap();
                assert_eq!(c.apply(&[0.0; 5], &[0.0; 5], &[0.0; 5]), [0.0; 5]);
            }
        }
    }

    #[test]
    fn first_order_keeps_outgoing_and_freezes_incoming() {
        let m = Metric::cartesian();
        let f = MeanFlow::nondimensional(0.5, 0.0, 0.0);
        let c = NodeClosure::new(FaceBc::FirstOrder, Side::Outflow, &m, &f, H44Reading::default()).unwrap();
        let qdot = [0.3, -0.2, 0.1, 0.4, 0.25];
        let out = c.apply(&qdot, &[0.0; 5], &[0.0; 5]);
        let t = build_transform(&m, &f, ScalingMode::Nondimensional).unwrap();
        for r in 0..5 {
            let a: f64 = (0..5).map(|j| t.to_char[r][j] * out[j]).sum();
            let b: f64 = (0..5).map(|j| t.to_char[r][j] * qdot[j]).sum();
            if r == 4 {
                assert!(a.abs() < 1e-15);
            } else {
                assert!((a - b).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn hard_wall_zeroes_normal_velocity_rate() {
        let m = Metric::cartesian();
        let f = MeanFlow::nondimensional(0.0, 0.0, 0.0);
        let c = NodeClosure::new(FaceBc::HardWall, Side::Inflow, &m, &f, H44Reading::default()).unwrap();
        let out = c.apply(&[0.1, 0.7, 0.2, 0.0, -0.3], &[0.0; 5], &[0.0; 5]);
        assert!(out[1].abs() < 1e-15);
    }
}
