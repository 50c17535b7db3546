//! Roots of the dispersion relation in k and ω, acoustic group velocities,
//! wave classification, and the λ-parameterized quantities S*, k₄*, k₅*.

pub use crate::matrices::WaveVector;

use crate::error::{Error, Result};
use crate::metrics::{compute_norms, contravariant, ContravariantFlow, MeanFlow, Metric, MetricNorms};
use crate::scalar::{cx, Cx, Real};
use serde::{Deserialize, Serialize};

/// Incidence parameters λ₁ = l/ω and λ₂ = m/ω.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaPair<T> {
    pub lambda1: Cx<T>,
    pub lambda2: Cx<T>,
}

impl<T: Real> LambdaPair<T> {
    /// λ = (0, 0): boundary-normal incidence.
    pub fn zero() -> Self {
        Self { lambda1: cx(T::zero()), lambda2: cx(T::zero()) }
    }

    /// Complex pair.
    pub fn new(lambda1: Cx<T>, lambda2: Cx<T>) -> Self {
        Self { lambda1, lambda2 }
    }

    /// Real pair.
    pub fn real(lambda1: T, lambda2: T) -> Self {
        Self { lambda1: cx(lambda1), lambda2: cx(lambda2) }
    }

    /// λ from a wave vector; `None` when ω = 0.
    pub fn from_wave(w: &WaveVector<T>) -> Option<Self> {
        if w.omega.norm() == T::zero() {
            return None;
        }
        Some(Self { lambda1: w.l / w.omega, lambda2: w.m / w.omega })
    }

    /// Euclidean magnitude √(|λ₁|² + |λ₂|²).
    pub fn magnitude(&self) -> T {
        (self.lambda1.norm_sqr() + self.lambda2.norm_sqr()).sqrt()
    }
}

/// Physical kind of each of the five waves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveKind {
    Entropy,
    VorticityZeta,
    VorticityEta,
    AcousticDown,
    AcousticUp,
}

impl WaveKind {
    /// Kind of mode `n` (1-based).
    pub fn of_mode(n: usize) -> Result<Self> {
        match n {
            1 => Ok(WaveKind::Entropy),
            2 => Ok(WaveKind::VorticityZeta),
            3 => Ok(WaveKind::VorticityEta),
            4 => Ok(WaveKind::AcousticDown),
            5 => Ok(WaveKind::AcousticUp),
            _ => Err(Error::InvalidModeIndex(n)),
        }
    }
}

/// Role of a wave at a boundary face.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Incoming,
    Outgoing,
}

/// Classification of one root: its kind and its role at the ξ = 0 (inflow)
/// and ξ = 1 (outflow) faces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootClass {
    pub kind: WaveKind,
    pub at_inflow: Direction,
    pub at_outflow: Direction,
}

/// The five k-roots with their classification.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootSet<T> {
    pub k: [Cx<T>; 5],
    pub class: [RootClass; 5],
}

/// Validates inputs shared by every root computation and returns the
/// contravariant velocities and metric norms.
pub(crate) fn preflight<T: Real>(
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
) -> Result<(ContravariantFlow<T>, MetricNorms<T>)> {
    metric.validate()?;
    flow.validate()?;
    if !flow.is_nondimensional() {
        return Err(Error::DimensionalModeUnsupported);
    }
    let cf = contravariant(metric, flow);
    let n = compute_norms(metric);
    let tol = T::check_tol();
    if cf.u_bar.abs() <= tol * n.norm_xi {
        return Err(Error::CriticalStreamwise);
    }
    let d = n.norm_xi * n.norm_xi - cf.u_bar * cf.u_bar;
    if d.abs() <= tol * n.norm_xi * n.norm_xi {
        return Err(Error::SonicDegenerate);
    }
    Ok((cf, n))
}

fn direction_from_speed<T: Real>(speed: T) -> (Direction, Direction) {
    if speed > T::zero() {
        (Direction::Incoming, Direction::Outgoing)
    } else {
        (Direction::Outgoing, Direction::Incoming)
    }
}

/// Classification from the boundary-normal propagation speeds U (convected
/// waves) and U ± |ξ| (acoustic waves).
pub fn classify<T: Real>(u: T, norm_xi: T) -> [RootClass; 5] {
    let speeds = [u, u, u, u + norm_xi, u - norm_xi];
    let mut out =
        [RootClass { kind: WaveKind::Entropy, at_inflow: Direction::Incoming, at_outflow: Direction::Outgoing }; 5];
    for (n, s) in speeds.iter().enumerate() {
        let (a, b) = direction_from_speed(*s);
        out[n] = RootClass { kind: WaveKind::of_mode(n + 1).expect("1..=5"), at_inflow: a, at_outflow: b };
    }
    out
}

/// Quantities entering the acoustic quadratic D k² + 2P k + (Υ − μ²) = 0.
struct Quadratic<T> {
    d: T,
    p: Cx<T>,
    c: Cx<T>,
}

fn quadratic<T: Real>(
    cf: &ContravariantFlow<T>,
    n: &MetricNorms<T>,
    l: Cx<T>,
    m: Cx<T>,
    omega: Cx<T>,
) -> (Quadratic<T>, Cx<T>) {
    let mu = omega - l * cf.v_bar - m * cf.w_bar;
    let xi_s = l * n.dot_xieta + m * n.dot_xizeta;
    let ups =
        l * l * (n.norm_eta * n.norm_eta) + m * m * (n.norm_zeta * n.norm_zeta) + l * m * (T::lit(2.0) * n.dot_etazeta);
    let d = n.norm_xi * n.norm_xi - cf.u_bar * cf.u_bar;
    let p = xi_s + mu * cf.u_bar;
    (Quadratic { d, p, c: ups - mu * mu }, mu)
}

/// Acoustic roots of the quadratic. The closed form
/// `P(−1 ± S)/D` with `S = √(1 − D(Υ−μ²)/P²)` is the primary path; when P
/// vanishes relative to the other terms a cancellation-free q-formula is used.
fn acoustic_pair<T: Real>(q: &Quadratic<T>, scale: T) -> (Cx<T>, Cx<T>) {
    let zero = cx(T::zero());
    if q.p.norm() > T::check_tol() * scale {
        let s = (cx(T::one()) - q.c * q.d / (q.p * q.p)).sqrt();
        let r1 = q.p * (s - T::one()) / q.d;
        let r2 = q.p * (-s - T::one()) / q.d;
        return (r1, r2);
    }
    let disc = (q.p * q.p - q.c * q.d).sqrt();
    if disc.norm() == T::zero() && q.p.norm() == T::zero() {
        return (zero, zero);
    }
    let sgn = if (q.p.conj() * disc).re >= T::zero() { T::one() } else { -T::one() };
    let qq = -(q.p + disc * sgn);
    (qq / q.d, q.c / qq)
}

/// Closed-form k-roots for given tangential wavenumbers and frequency.
///
/// k₁ = k₂ = k₃ = (ω − V̄l − W̄m)/Ū. For the acoustic pair, k₄ is the root
/// with the larger imaginary part when the roots are complex (the one that
/// decays into the domain from ξ = 0); for real roots k₄ is the root whose
/// acoustic group velocity is positive, falling back to the ω₄ branch when
/// both group velocities share a sign.
pub fn roots_k<T: Real>(
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    l: Cx<T>,
    m: Cx<T>,
    omega: Cx<T>,
) -> Result<RootSet<T>> {
    let (cf, n) = preflight(metric, flow)?;
    let (q, mu) = quadratic(&cf, &n, l, m, omega);
    let k1 = mu / cf.u_bar;
    let scale =
        omega.norm() * cf.u_bar.abs() + (l.norm() * n.norm_eta + m.norm() * n.norm_zeta) * (n.norm_xi + cf.u_bar.abs());
    if scale == T::zero() {
        return Ok(RootSet { k: [cx(T::zero()); 5], class: classify(cf.u_bar, n.norm_xi) });
    }
    let (ra, rb) = acoustic_pair(&q, scale);
    let (k4, k5) = label_acoustic(metric, &cf, ra, rb, l, m, omega);
    Ok(RootSet { k: [k1, k1, k1, k4, k5], class: classify(cf.u_bar, n.norm_xi) })
}

fn label_acoustic<T: Real>(
    metric: &Metric<T>,
    cf: &ContravariantFlow<T>,
    ra: Cx<T>,
    rb: Cx<T>,
    l: Cx<T>,
    m: Cx<T>,
    omega: Cx<T>,
) -> (Cx<T>, Cx<T>) {
    let mag = ra.norm().max(rb.norm()).max(T::min_positive_value());
    let tol = T::check_tol();
    let complex_case = omega.im.abs() > tol * omega.norm()
        || ra.im.abs() > tol * mag
        || rb.im.abs() > tol * mag
        || l.im.abs() > tol * l.norm().max(T::min_positive_value())
        || m.im.abs() > tol * m.norm().max(T::min_positive_value());
    if complex_case {
        return if ra.im >= rb.im { (ra, rb) } else { (rb, ra) };
    }
    // Real roots: classify by the group velocity of the branch each root
    // lies on (β = −|α| on the ω₄ branch, β = +|α| on the ω₅ branch).
    let branch_speed = |k: T| -> (T, T) {
        let (xi, eta, zeta) = (metric.xi(), metric.eta(), metric.zeta());
        let alpha = [0, 1, 2].map(|a| k * xi[a] + l.re * eta[a] + m.re * zeta[a]);
        let amag = (alpha[0] * alpha[0] + alpha[1] * alpha[1] + alpha[2] * alpha[2]).sqrt();
        let beta = k * cf.u_bar + l.re * cf.v_bar + m.re * cf.w_bar - omega.re;
        let s = if beta <= T::zero() { T::one() } else { -T::one() };
        if amag == T::zero() {
            let nx = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
            return (cf.u_bar + s * nx, s);
        }
        let proj = alpha[0] * xi[0] + alpha[1] * xi[1] + alpha[2] * xi[2];
        (cf.u_bar + s * proj / amag, s)
    };
    let (ga, sa) = branch_speed(ra.re);
    let (gb, _) = branch_speed(rb.re);
    let a_first = if (ga > T::zero()) != (gb > T::zero()) { ga > T::zero() } else { sa > T::zero() };
    if a_first {
        (cx(ra.re), cx(rb.re))
    } else {
        (cx(rb.re), cx(ra.re))
    }
}

/// Frequencies for a given wave vector: ω₁,₂,₃ = Ūk + V̄l + W̄m and
/// ω₄,₅ = ω₁ ± √(α₁² + α₂² + α₃²).
pub fn roots_omega<T: Real>(
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    k: Cx<T>,
    l: Cx<T>,
    m: Cx<T>,
) -> Result<[Cx<T>; 5]> {
    metric.validate()?;
    flow.validate()?;
    if !flow.is_nondimensional() {
        return Err(Error::DimensionalModeUnsupported);
    }
    let cf = contravariant(metric, flow);
    let w0 = k * cf.u_bar + l * cf.v_bar + m * cf.w_bar;
    let (xi, eta, zeta) = (metric.xi(), metric.eta(), metric.zeta());
    let alpha = [0, 1, 2].map(|a| k * xi[a] + l * eta[a] + m * zeta[a]);
    let r = (alpha[0] * alpha[0] + alpha[1] * alpha[1] + alpha[2] * alpha[2]).sqrt();
    Ok([w0, w0, w0, w0 + r, w0 - r])
}

/// Acoustic group velocities normal to the boundary,
/// c_g = Ū ± (α·∇ξ)/|α|, for a real wave vector.
pub fn group_velocity_acoustic<T: Real>(metric: &Metric<T>, flow: &MeanFlow<T>, k: T, l: T, m: T) -> Result<(T, T)> {
    metric.validate()?;
    flow.validate()?;
    if !flow.is_nondimensional() {
        return Err(Error::DimensionalModeUnsupported);
    }
    let cf = contravariant(metric, flow);
    let (xi, eta, zeta) = (metric.xi(), metric.eta(), metric.zeta());
    let alpha = [0, 1, 2].map(|a| k * xi[a] + l * eta[a] + m * zeta[a]);
    let amag = (alpha[0] * alpha[0] + alpha[1] * alpha[1] + alpha[2] * alpha[2]).sqrt();
    if amag == T::zero() {
        return Err(Error::ZeroAlphaVector);
    }
    let t = (alpha[0] * xi[0] + alpha[1] * xi[1] + alpha[2] * xi[2]) / amag;
    Ok((cf.u_bar + t, cf.u_bar - t))
}

/// Starred quantities in λ form: μ* = 1 − V̄λ₁ − W̄λ₂, Ξ*, Υ*, P* = Ξ* + μ*Ū
/// and D = |ξ|² − Ū².
#[derive(Clone, Copy, Debug)]
pub struct StarTerms<T> {
    pub mu: Cx<T>,
    pub xi: Cx<T>,
    pub upsilon: Cx<T>,
    pub p: Cx<T>,
    pub d: T,
    pub u: T,
    pub norm_xi: T,
}

/// Evaluates the starred quantities for a λ pair.
pub fn star_terms<T: Real>(metric: &Metric<T>, flow: &MeanFlow<T>, lp: &LambdaPair<T>) -> Result<StarTerms<T>> {
    let (cf, n) = preflight(metric, flow)?;
    let (q, mu) = quadratic(&cf, &n, lp.lambda1, lp.lambda2, cx(T::one()));
    let xi = lp.lambda1 * n.dot_xieta + lp.lambda2 * n.dot_xizeta;
    Ok(StarTerms { mu, xi, upsilon: q.c + mu * mu, p: q.p, d: q.d, u: cf.u_bar, norm_xi: n.norm_xi })
}

fn s_from_terms<T: Real>(t: &StarTerms<T>) -> Result<Cx<T>> {
    if t.p.norm() <= T::check_tol() * (t.u.abs() + t.norm_xi) {
        return Err(Error::DegeneratePrefactor);
    }
    Ok((cx(T::one()) - (t.upsilon - t.mu * t.mu) * t.d / (t.p * t.p)).sqrt())
}

/// S* on the principal branch (Re S* ≥ 0). This is the branch continuous
/// with the boundary-normal value S* = |ξ|/Ū and it is positive whenever the
/// radicand is real and positive.
pub fn s_star<T: Real>(metric: &Metric<T>, flow: &MeanFlow<T>, lp: &LambdaPair<T>) -> Result<Cx<T>> {
    let t = star_terms(metric, flow, lp)?;
    s_from_terms(&t)
}

/// S* with the branch chosen for a specific frequency ω: when k₄ = k₄*ω is
/// complex the sign is picked so that Im(k₄) ≥ 0 (and hence Im(k₅) ≤ 0).
pub fn s_star_for_frequency<T: Real>(
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    lp: &LambdaPair<T>,
    omega: Cx<T>,
) -> Result<Cx<T>> {
    let t = star_terms(metric, flow, lp)?;
    let s = s_from_terms(&t)?;
    let k4 = t.p * (s - T::one()) / t.d * omega;
    let k5 = t.p * (-s - T::one()) / t.d * omega;
    let mag = k4.norm().max(k5.norm());
    if (k4.im - k5.im).abs() > T::check_tol() * mag && k4.im < k5.im {
        Ok(-s)
    } else {
        Ok(s)
    }
}

fn k_from<T: Real>(n: usize, t: &StarTerms<T>, s: Cx<T>) -> Result<Cx<T>> {
    match n {
        4 => Ok(t.p * (s - T::one()) / t.d),
        5 => Ok(t.p * (-s - T::one()) / t.d),
        _ => Err(Error::InvalidModeIndex(n)),
    }
}

/// k₄* = P*(−1 + S*)/D or k₅* = P*(−1 − S*)/D on the principal S* branch.
pub fn k_star<T: Real>(n: usize, metric: &Metric<T>, flow: &MeanFlow<T>, lp: &LambdaPair<T>) -> Result<Cx<T>> {
    let t = star_terms(metric, flow, lp)?;
    let s = s_from_terms(&t)?;
    k_from(n, &t, s)
}

/// k* with the S* branch selected for frequency ω (see
/// [`s_star_for_frequency`]).
pub fn k_star_for_frequency<T: Real>(
    n: usize,
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    lp: &LambdaPair<T>,
    omega: Cx<T>,
) -> Result<Cx<T>> {
    let t = star_terms(metric, flow, lp)?;
    let s = s_star_for_frequency(metric, flow, lp, omega)?;
    k_from(n, &t, s)
}

/// Gradient of S* with respect to (λ₁, λ₂) at λ = 0, by the chain rule on
/// the closed form: ∂S*/∂λ = −D·|ξ·∇η or ∇ζ| / (|ξ|Ū²).
pub fn s_star_gradient_at_zero<T: Real>(metric: &Metric<T>, flow: &MeanFlow<T>) -> Result<[T; 2]> {
    let (cf, n) = preflight(metric, flow)?;
    let u = cf.u_bar;
    let d = n.norm_xi * n.norm_xi - u * u;
    // S'(λ) = (1/2S)[−D(Υ' − 2μμ')/P² + 2D(Υ − μ²)P'/P³] at λ = 0 with
    // S = |ξ|/U, P = U, Υ = 0, Υ' = 0, μ = 1, μ' = −V (or −W),
    // P' = |ξη| − UV (or |ξζ| − UW).
    let grad = |dot: T, vt: T| -> T {
        let dmu = -vt;
        let dp = dot - u * vt;
        let s0 = n.norm_xi / u;
        let num = -d * (-T::lit(2.0) * dmu) / (u * u) + T::lit(2.0) * d * (-T::one()) * dp / (u * u * u);
        num / (T::lit(2.0) * s0)
    };
    Ok([grad(n.dot_xieta, cf.v_bar), grad(n.dot_xizeta, cf.w_bar)])
}

/// Gradient of k₄* (n = 4) or k₅* (n = 5) with respect to (λ₁, λ₂) at
/// λ = 0, by the chain rule on P*(−1 ± S*)/D.
pub fn k_star_gradient_at_zero<T: Real>(n: usize, metric: &Metric<T>, flow: &MeanFlow<T>) -> Result<[T; 2]> {
    let (cf, nm) = preflight(metric, flow)?;
    let u = cf.u_bar;
    let d = nm.norm_xi * nm.norm_xi - u * u;
    let s0 = nm.norm_xi / u;
    let ds = s_star_gradient_at_zero(metric, flow)?;
    let dp = [nm.dot_xieta - u * cf.v_bar, nm.dot_xizeta - u * cf.w_bar];
    let sign = match n {
        4 => T::one(),
        5 => -T::one(),
        _ => return Err(Error::InvalidModeIndex(n)),
    };
    Ok([0, 1].map(|a| (dp[a] * (sign * s0 - T::one()) + u * sign * ds[a]) / d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cart() -> (Metric<f64>, MeanFlow<f64>) {
        (Metric::cartesian(), MeanFlow::nondimensional(0.5, 0.0, 0.0))
    }

    #[test]
    fn normal_incidence_roots() {
        let (m, f) = cart();
        let r = roots_k(&m, &f, cx(0.0), cx(0.0), cx(1.0)).unwrap();
        let expect = [2.0, 2.0, 2.0, 2.0 / 3.0, -2.0];
        for (k, e) in r.k.iter().zip(expect) {
            assert!((k - cx(e)).norm() < 1e-15, "{k} vs {e}");
        }
        assert_eq!(r.class[3].at_inflow, Direction::Incoming);
        assert_eq!(r.class[4].at_inflow, Direction::Outgoing);
        assert_eq!(r.class[4].kind, WaveKind::AcousticUp);
    }

    #[test]
    fn zero_frequency_zero_roots() {
        let (m, f) = cart();
        let r = roots_k(&m, &f, cx(0.0), cx(0.0), cx(0.0)).unwrap();
        assert!(r.k.iter().all(|k| k.norm() == 0.0));
    }

    #[test]
    fn degenerate_flows_rejected() {
        let m = Metric::cartesian();
        let sonic = MeanFlow::nondimensional(1.0, 0.0, 0.0);
        assert_eq!(roots_k(&m, &sonic, cx(0.0), cx(0.0), cx(1.0)).unwrap_err(), Error::SonicDegenerate);
        let still = MeanFlow::nondimensional(0.0, 0.3, 0.0);
        assert_eq!(roots_k(&m, &still, cx(0.0), cx(0.0), cx(1.0)).unwrap_err(), Error::CriticalStreamwise);
    }

    #[test]
    fn omega_roots_and_group_velocity() {
        let (m, f) = cart();
        let w = roots_omega(&m, &f, cx(1.0), cx(0.0), cx(0.0)).unwrap();
        let expect = [0.5, 0.5, 0.5, 1.5, -0.5];
        for (a, b) in w.iter().zip(expect) {
            assert!((a - cx(b)).norm() < 1e-15);
        }
        assert_eq!(group_velocity_acoustic(&m, &f, 1.0, 0.0, 0.0).unwrap(), (1.5, -0.5));
        assert_eq!(group_velocity_acoustic(&m, &f, 0.0, 0.0, 0.0).unwrap_err(), Error::ZeroAlphaVector);
    }

    #[test]
    fn starred_limits() {
        let (m, f) = cart();
        let lp = LambdaPair::zero();
        assert!((s_star(&m, &f, &lp).unwrap() - cx(2.0)).norm() < 1e-15);
        assert!((k_star(4, &m, &f, &lp).unwrap() - cx(2.0 / 3.0)).norm() < 1e-15);
        assert!((k_star(5, &m, &f, &lp).unwrap() - cx(-2.0)).norm() < 1e-15);
    }

    #[test]
    fn ill_posed_locus_value() {
        // Orthogonal metric, Γ = λ₁²|η|² = −|ξ|²/Ū² gives S* = |ξ|²/Ū².
        let m = Metric::new([2.0, 0.0, 0.0], [0.0, 3.0, 0.0], [0.0, 0.0, 4.0]).unwrap();
        let f = MeanFlow::nondimensional(0.4, 0.0, 0.0);
        let u = 0.8;
        let lam = num_complex::Complex::new(0.0, 2.0 / (u * 3.0));
        let s = s_star(&m, &f, &LambdaPair::new(lam, cx(0.0))).unwrap();
        assert!((s - cx(4.0 / (u * u))).norm() < 1e-12, "{s}");
    }
}
