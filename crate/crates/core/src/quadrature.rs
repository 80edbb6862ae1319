//! Quadrature rules for integrals between two turning points and on finite intervals.
//!
//! Integrals of the form `∫_{ra}^{rb} g(r) / √((r − ra)(rb − r)) dr` are evaluated
//! either with the angular substitution `r = (ra+rb)/2 + ((rb−ra)/2)·cos θ`, under
//! which the weight disappears and the midpoint rule in θ is the Chebyshev–Gauss
//! rule, or with a tanh-sinh rule that keeps the endpoint weight explicit.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_NODES: usize = 16;
/// Doubling stops here; a rule that has not settled by then is reported as a failure.
pub const MAX_NODES: usize = 1 << 20;
/// Change between successive doublings below which a chord integral counts as converged.
pub const SETTLE_TOLERANCE: f64 = 1e-14;
/// Change between the last two doublings above which a chord integral is a failure.
pub const FAILURE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureKind {
    ChebyshevGauss,
    TanhSinh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub node_count: usize,
    pub kind: QuadratureKind,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            node_count: 256,
            kind: QuadratureKind::ChebyshevGauss,
        }
    }
}

impl QuadratureConfig {
    pub fn new(node_count: usize, kind: QuadratureKind) -> Result<Self> {
        let cfg = Self { node_count, kind };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.node_count < MIN_NODES {
            return Err(Error::Domain {
                name: "node_count",
                value: self.node_count as f64,
                reason: "quadrature needs at least 16 nodes",
            });
        }
        Ok(())
    }
}

/// A point strictly inside `(ra, rb)` together with `(r − ra)(rb − r)`
/// computed without cancellation.
#[derive(Debug, Clone, Copy)]
pub struct ChordPoint {
    pub r: f64,
    pub gap: f64,
}

/// Validated integration interval between two turning points.
#[derive(Debug, Clone, Copy)]
pub struct Chord {
    pub ra: f64,
    pub rb: f64,
}

impl Chord {
    pub fn new(ra: f64, rb: f64) -> Result<Self> {
        if !(ra >= 0.0) || !ra.is_finite() {
            return Err(Error::Domain {
                name: "r_a",
                value: ra,
                reason: "must be non-negative and finite",
            });
        }
        if !(rb > ra) || !rb.is_finite() {
            return Err(Error::Domain {
                name: "r_b",
                value: rb,
                reason: "must be finite and exceed r_a",
            });
        }
        Ok(Self { ra, rb })
    }

    fn half_width(&self) -> f64 {
        0.5 * (self.rb - self.ra)
    }

    /// `∫ g / √gap dr` with a fixed number of nodes.
    pub fn integrate_fixed<F>(&self, nodes: usize, kind: QuadratureKind, g: F) -> f64
    where
        F: Fn(ChordPoint) -> f64,
    {
        match kind {
            QuadratureKind::ChebyshevGauss => self.chebyshev(nodes, g),
            QuadratureKind::TanhSinh => self.tanh_sinh(nodes, g),
        }
    }

    fn chebyshev<F: Fn(ChordPoint) -> f64>(&self, nodes: usize, g: F) -> f64 {
        let h = self.half_width();
        let step = PI / nodes as f64;
        let mut sum = Neumaier::default();
        for k in 0..nodes {
            let theta = (k as f64 + 0.5) * step;
            // half-angle forms keep r − ra and rb − r exact near either end
            let (s, c) = (0.5 * theta).sin_cos();
            let to_a = 2.0 * h * c * c;
            let to_b = 2.0 * h * s * s;
            let r = if to_a <= to_b { self.ra + to_a } else { self.rb - to_b };
            sum.add(g(ChordPoint { r, gap: to_a * to_b }));
        }
        sum.value() * step
    }

    fn tanh_sinh<F: Fn(ChordPoint) -> f64>(&self, nodes: usize, g: F) -> f64 {
        const T_MAX: f64 = 4.0;
        let h = self.half_width();
        // odd count keeps t = 0 on the grid
        let count = nodes | 1;
        let half = (count / 2) as isize;
        let step = T_MAX / half as f64;
        let mut sum = Neumaier::default();
        for k in -half..=half {
            let t = k as f64 * step;
            let u = FRAC_PI_2 * t.sinh();
            let cu = u.cosh();
            // x = tanh(u): 1 + x = e^u / cosh u, 1 − x = e^−u / cosh u
            let one_plus = u.exp() / cu;
            let one_minus = (-u).exp() / cu;
            let r = if u >= 0.0 {
                self.rb - h * one_minus
            } else {
                self.ra + h * one_plus
            };
            let gap = h * h * one_plus * one_minus;
            let weight = FRAC_PI_2 * t.cosh() / cu;
            if weight == 0.0 || !weight.is_finite() {
                continue;
            }
            sum.add(weight * g(ChordPoint { r, gap }));
        }
        sum.value() * step
    }

    /// Doubles the node count from `cfg.node_count` until two successive
    /// estimates agree.
    pub fn integrate<F>(&self, cfg: &QuadratureConfig, g: F) -> Result<f64>
    where
        F: Fn(ChordPoint) -> f64,
    {
        cfg.validate()?;
        let mut nodes = cfg.node_count;
        let mut previous = self.integrate_fixed(nodes, cfg.kind, &g);
        loop {
            let next_nodes = nodes * 2;
            let current = self.integrate_fixed(next_nodes, cfg.kind, &g);
            let change = (current - previous).abs();
            let scale = current.abs().max(previous.abs()).max(f64::MIN_POSITIVE);
            if !current.is_finite() {
                return Err(Error::NumericalFailure(format!(
                    "non-finite quadrature estimate with {next_nodes} nodes"
                )));
            }
            if change <= SETTLE_TOLERANCE * scale.max(1.0) {
                return Ok(current);
            }
            if next_nodes >= MAX_NODES {
                if change <= FAILURE_TOLERANCE * scale.max(1.0) {
                    return Ok(current);
                }
                return Err(Error::NumericalFailure(format!(
                    "quadrature between {} and {} still changing by {change:e} at {next_nodes} nodes",
                    self.ra, self.rb
                )));
            }
            previous = current;
            nodes = next_nodes;
        }
    }
}

/// Compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct Neumaier {
    sum: f64,
    carry: f64,
}

impl Neumaier {
    pub(crate) fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Gauss–Legendre rule on [−1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Shared, lazily built rule of order `n`.
    pub fn cached(n: usize) -> Arc<Self> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut map = cache.lock().expect("quadrature cache poisoned");
        map.entry(n)
            .or_insert_with(|| Arc::new(GaussLegendre::new(n)))
            .clone()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    /// The rule applied on `panels` equal subintervals of `[a, b]`.
    pub fn integrate_composite<F: Fn(f64) -> f64>(&self, a: f64, b: f64, panels: usize, f: F) -> f64 {
        let panels = panels.max(1);
        let width = (b - a) / panels as f64;
        let mut sum = Neumaier::default();
        for k in 0..panels {
            let lo = a + k as f64 * width;
            let hi = if k + 1 == panels { b } else { lo + width };
            sum.add(self.integrate(lo, hi, &f));
        }
        sum.value()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
