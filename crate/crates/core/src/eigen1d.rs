//! Lower bounds on the principal eigenvalue of `-(-Delta)^alpha + a0` on
//! `D_L = [-L, L]` with zero exterior condition, through the variational
//! quotient of a fixed test function (1D).
//!
//! For `phi` supported in `D_L` the Gagliardo energy over the whole line
//! splits into the `D x D` part and an exterior part with a closed-form
//! inner integral:
//!
//! `E = 1/2 int_D int_D (phi(x)-phi(y))^2 |x-y|^{-1-2a} + int_D phi^2 [(L-x)^{-2a} + (L+x)^{-2a}] / (2a)`.
//!
//! The `D x D` part is written as `2 int_0^{2L} h^{-1-2a} G(h) dh` with
//! `G(h) = int (phi(x+h) - phi(x))^2 dx`; the substitution `h = s^q`,
//! `q = 1 / (2 - 2a)`, turns the weight into `q G(h) / h^2`, which is bounded.

use std::f64::consts::PI;
use std::fmt;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

use crate::error::{Error, Result};

/// Gauss-Legendre points per panel.
const PANEL_DEGREE: usize = 10;
/// Relative change of the quotient tolerated when the panel width halves.
pub const STABILITY_TOL: f64 = 0.01;
pub const DEFAULT_RESOLUTION: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TestKind {
    /// `cos(pi x / 2L)`
    CosineBump,
    /// `1 - |x| / L`
    Tent,
    /// One on `|x| <= f L`, then a quarter-cosine ramp to zero at `|x| = L`.
    PlateauBump(f64),
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestKind::CosineBump => write!(f, "cosine"),
            TestKind::Tent => write!(f, "tent"),
            TestKind::PlateauBump(p) => write!(f, "plateau({p})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestFunction {
    pub kind: TestKind,
    pub half_width: f64,
    /// Panels per smooth segment.
    pub resolution: usize,
}

impl TestFunction {
    pub fn new(kind: TestKind, half_width: f64, resolution: usize) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidTestFunction(format!(
                "half width {half_width} must be positive"
            )));
        }
        if resolution == 0 {
            return Err(Error::InvalidTestFunction("resolution must be at least 1".into()));
        }
        if let TestKind::PlateauBump(f) = kind {
            if !(f > 0.0 && f < 1.0) {
                return Err(Error::InvalidTestFunction(format!(
                    "plateau fraction {f} must lie in (0, 1)"
                )));
            }
        }
        Ok(Self {
            kind,
            half_width,
            resolution,
        })
    }

    pub fn with_resolution(&self, resolution: usize) -> Self {
        Self { resolution, ..*self }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let l = self.half_width;
        let ax = x.abs();
        if ax >= l {
            return 0.0;
        }
        match self.kind {
            TestKind::CosineBump => (PI * x / (2.0 * l)).cos(),
            TestKind::Tent => 1.0 - ax / l,
            TestKind::PlateauBump(f) => {
                let a = f * l;
                if ax <= a {
                    1.0
                } else {
                    (0.5 * PI * (ax - a) / (l - a)).cos()
                }
            }
        }
    }

    /// Points of `[-L, L]` where `phi` is not smooth, endpoints included.
    fn breakpoints(&self) -> Vec<f64> {
        let l = self.half_width;
        match self.kind {
            TestKind::CosineBump => vec![-l, l],
            TestKind::Tent => vec![-l, 0.0, l],
            TestKind::PlateauBump(f) => vec![-l, -f * l, f * l, l],
        }
    }
}

struct Quadrature {
    rule: GaussLegendre,
    panels: usize,
}

impl Quadrature {
    fn new(panels: usize) -> Self {
        Self {
            rule: GaussLegendre::new(NonZeroUsize::new(PANEL_DEGREE).unwrap()),
            panels,
        }
    }

    /// Composite rule on `[a, b]` split at `cuts`, each piece into equal panels.
    fn integrate(&self, a: f64, b: f64, cuts: &[f64], mut f: impl FnMut(f64) -> f64) -> f64 {
        if !(b > a) {
            return 0.0;
        }
        let span = b - a;
        let mut pts: Vec<f64> = cuts
            .iter()
            .copied()
            .filter(|&c| c > a + 1e-14 * span && c < b - 1e-14 * span)
            .collect();
        pts.push(a);
        pts.push(b);
        pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let mut total = 0.0;
        for w in pts.windows(2) {
            let step = (w[1] - w[0]) / self.panels as f64;
            for i in 0..self.panels {
                let lo = w[0] + i as f64 * step;
                total += self.rule.integrate(lo, lo + step, &mut f);
            }
        }
        total
    }
}

/// Pieces of the quotient evaluated at one resolution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuotientParts {
    /// `1/2` of the `D x D` double integral.
    pub interior: f64,
    /// Closed-form exterior contribution.
    pub exterior: f64,
    /// `int phi^2`
    pub mass: f64,
}

impl QuotientParts {
    pub fn energy(&self) -> f64 {
        self.interior + self.exterior
    }

    pub fn quotient(&self) -> f64 {
        self.energy() / self.mass
    }
}

pub fn quotient_parts(phi: &TestFunction, alpha: f64) -> Result<QuotientParts> {
    if !(alpha > 0.5 && alpha < 1.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    let quad = Quadrature::new(phi.resolution);
    let l = phi.half_width;
    let kinks = phi.breakpoints();

    let mass = quad.integrate(-l, l, &kinks, |x| phi.eval(x).powi(2));

    let g = |h: f64| {
        let mut cuts = kinks.clone();
        cuts.extend(kinks.iter().map(|k| k - h));
        quad.integrate(-l, l - h, &cuts, |x| (phi.eval(x + h) - phi.eval(x)).powi(2))
    };
    let q = 1.0 / (2.0 - 2.0 * alpha);
    let s_max = (2.0 * l).powf(1.0 / q);
    let mut s_cuts = Vec::new();
    for &a in &kinks {
        for &b in &kinks {
            if b > a {
                s_cuts.push((b - a).powf(1.0 / q));
            }
        }
    }
    // 1/2 of 2 int h^{-1-2a} G dh
    let interior = quad.integrate(0.0, s_max, &s_cuts, |s| {
        let h = s.powf(q);
        q * g(h) / (h * h)
    });

    // graded map toward each endpoint: distance to the wall = L w^4
    let ext_density = |x: f64| phi.eval(x).powi(2) * ((l - x).powf(-2.0 * alpha) + (l + x).powf(-2.0 * alpha)) / (2.0 * alpha);
    let to_w = |d: f64| (d / l).powf(0.25);
    let right_cuts: Vec<f64> = kinks.iter().filter(|&&k| k > 0.0 && k < l).map(|&k| to_w(l - k)).collect();
    let left_cuts: Vec<f64> = kinks.iter().filter(|&&k| k < 0.0 && k > -l).map(|&k| to_w(l + k)).collect();
    let right = quad.integrate(0.0, 1.0, &right_cuts, |w| {
        let x = l - l * w.powi(4);
        ext_density(x) * 4.0 * l * w.powi(3)
    });
    let left = quad.integrate(0.0, 1.0, &left_cuts, |w| {
        let x = -l + l * w.powi(4);
        ext_density(x) * 4.0 * l * w.powi(3)
    });

    Ok(QuotientParts {
        interior,
        exterior: left + right,
        mass,
    })
}

/// `a0 - E(phi) / int phi^2`, evaluated at the test function's resolution and
/// at twice that; fails when the two quotients differ by more than 1%.
pub fn rayleigh_sigma(phi: &TestFunction, alpha: f64, a0: f64) -> Result<f64> {
    if !(a0 > 0.0) {
        return Err(Error::NonPositiveRate { name: "a0", value: a0 });
    }
    let coarse = quotient_parts(phi, alpha)?.quotient();
    let fine = quotient_parts(&phi.with_resolution(2 * phi.resolution), alpha)?.quotient();
    let change = ((fine - coarse) / fine).abs();
    if !(fine > 0.0) || !(change <= STABILITY_TOL) {
        return Err(Error::QuadratureUnstable(change));
    }
    Ok(a0 - fine)
}

/// Built-in family tried at every half width.
pub fn builtin_kinds() -> [TestKind; 3] {
    [TestKind::CosineBump, TestKind::Tent, TestKind::PlateauBump(0.5)]
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub half_width: f64,
    /// `(kind, sigma_lower)` per built-in test function.
    pub values: Vec<(TestKind, f64)>,
    pub best_kind: TestKind,
    pub best: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SigmaSweep {
    pub alpha: f64,
    pub a0: f64,
    pub resolution: usize,
    pub rows: Vec<SweepRow>,
}

impl SigmaSweep {
    /// Smallest swept `L` with a positive bound: an upper bound on `L0`.
    pub fn first_positive(&self) -> Option<f64> {
        self.rows.iter().find(|r| r.best > 0.0).map(|r| r.half_width)
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].best >= w[0].best)
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].best > w[0].best)
    }

    pub fn csv(&self) -> String {
        let mut s = String::from("L,kind,resolution,sigma_lower\n");
        for r in &self.rows {
            for (k, v) in &r.values {
                s.push_str(&format!("{},{},{},{:e}\n", r.half_width, k, self.resolution, v));
            }
        }
        s
    }
}

pub fn sigma_sweep(ls: &[f64], alpha: f64, a0: f64, resolution: usize) -> Result<SigmaSweep> {
    if ls.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Config("half widths must be strictly increasing".into()));
    }
    let mut rows = Vec::with_capacity(ls.len());
    for &l in ls {
        let mut values = Vec::new();
        for kind in builtin_kinds() {
            let phi = TestFunction::new(kind, l, resolution)?;
            values.push((kind, rayleigh_sigma(&phi, alpha, a0)?));
        }
        let (best_kind, best) = values
            .iter()
            .copied()
            .fold((values[0].0, f64::NEG_INFINITY), |acc, v| if v.1 > acc.1 { v } else { acc });
        rows.push(SweepRow {
            half_width: l,
            values,
            best_kind,
            best,
        });
    }
    Ok(SigmaSweep {
        alpha,
        a0,
        resolution,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_values() {
        for kind in builtin_kinds() {
            let phi = TestFunction::new(kind, 3.0, 4).unwrap();
            assert_eq!(phi.eval(3.0), 0.0);
            assert_eq!(phi.eval(-3.0), 0.0);
            assert!(phi.eval(0.0) > 0.0);
        }
    }

    #[test]
    fn cosine_mass_is_l() {
        let phi = TestFunction::new(TestKind::CosineBump, 2.5, 4).unwrap();
        let parts = quotient_parts(&phi, 0.75).unwrap();
        assert!((parts.mass - 2.5).abs() < 1e-13);
        assert!(parts.interior > 0.0 && parts.exterior > 0.0);
    }

    #[test]
    fn additive_in_a0() {
        let phi = TestFunction::new(TestKind::Tent, 5.0, 6).unwrap();
        let s1 = rayleigh_sigma(&phi, 0.75, 0.2).unwrap();
        let s2 = rayleigh_sigma(&phi, 0.75, 0.7).unwrap();
        assert!((s2 - s1 - 0.5).abs() < 1e-14);
    }

    #[test]
    fn quotient_scales_with_width() {
        // E scales like L^{1-2a}, mass like L
        let q = |l: f64| {
            quotient_parts(&TestFunction::new(TestKind::CosineBump, l, 8).unwrap(), 0.7)
                .unwrap()
                .quotient()
        };
        assert!((q(4.0) / q(1.0) - 4f64.powf(-1.4)).abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_test_functions() {
        assert!(TestFunction::new(TestKind::PlateauBump(1.0), 1.0, 4).is_err());
        assert!(TestFunction::new(TestKind::Tent, 0.0, 4).is_err());
        let phi = TestFunction::new(TestKind::Tent, 1.0, 4).unwrap();
        assert!(matches!(rayleigh_sigma(&phi, 0.75, 0.0), Err(Error::NonPositiveRate { .. })));
        assert!(matches!(rayleigh_sigma(&phi, 0.5, 1.0), Err(Error::AlphaOutOfRange(_))));
    }
}
