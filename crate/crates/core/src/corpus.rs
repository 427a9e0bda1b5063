//! Benchmark targets with known exact Besov regularity.
//!
//! | id                   | formula                                               | registration (p ≥ 1)   |
//! |----------------------|-------------------------------------------------------|------------------------|
//! | `lambda-tear`        | `x^λ exp(−x²/(1−x²))` on (0,1), 0 elsewhere           | `B_{p∞}^{λ+1/p}`       |
//! | `weierstrass`        | `Σ 1.5^{−τk} sin(1.5^k·5x)`, cut off outside [0,1]    | `B_{p∞}^{τ}`           |
//! | `double-chirp`       | `x^{1/4} exp(−x²/(1−x²)) sin(64πx(1−x))` on (0,1)     | `B_{p∞}^{1/2+1/p}`     |
//! | `sinusoidal-density` | `½|sin x|` on [−2π/3, π/3], 0 elsewhere               | `B_{p∞}^{1/p}`         |

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use crate::besov::BesovParams;
use crate::error::{Error, Result};
use crate::transform::{Interval, SampleGrid};

/// Terms of the Weierstrass series are dropped once `1.5^{−τk}` falls below this.
pub const WEIERSTRASS_TRUNCATION: f64 = 1e-12;

/// Default λ for the λ-tear.
pub const DEFAULT_LAMBDA: f64 = 0.5;

/// Default Hölder index of the Weierstrass curve: `λ + 1/2`, which matches
/// its registration to the λ-tear's at `p = 2`.
pub const DEFAULT_WEIERSTRASS_TAU: f64 = 1.0;

/// Width of the smooth transition of the Weierstrass cutoff outside [0, 1].
const CUTOFF_RAMP: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorpusId {
    LambdaTear,
    Weierstrass,
    DoubleChirp,
    SinusoidalDensity,
}

impl CorpusId {
    pub const ALL: [CorpusId; 4] = [
        CorpusId::LambdaTear,
        CorpusId::Weierstrass,
        CorpusId::DoubleChirp,
        CorpusId::SinusoidalDensity,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CorpusId::LambdaTear => "lambda-tear",
            CorpusId::Weierstrass => "weierstrass",
            CorpusId::DoubleChirp => "double-chirp",
            CorpusId::SinusoidalDensity => "sinusoidal-density",
        }
    }
}

impl fmt::Display for CorpusId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CorpusId {
    type Err = Error;

    /// Accepts hyphenated or underscored ids.
    fn from_str(s: &str) -> Result<Self> {
        let mut normalized = alloc::string::String::with_capacity(s.len());
        for c in s.chars() {
            normalized.push(if c == '_' { '-' } else { c.to_ascii_lowercase() });
        }
        CorpusId::ALL
            .into_iter()
            .find(|id| id.as_str() == normalized)
            .ok_or_else(|| Error::Parameter(alloc::format!("unknown corpus id '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularityKind {
    Jump,
    DerivativeKink,
    SecondKindChirp,
    /// Smooth but not analytic.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Singularity {
    pub x: f64,
    pub kind: SingularityKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    id: CorpusId,
    /// λ for the λ-tear, τ for the Weierstrass curve; unused otherwise.
    shape: f64,
}

impl CorpusEntry {
    /// Entry with the default shape parameter.
    pub fn new(id: CorpusId) -> Self {
        let shape = match id {
            CorpusId::LambdaTear => DEFAULT_LAMBDA,
            CorpusId::Weierstrass => DEFAULT_WEIERSTRASS_TAU,
            CorpusId::DoubleChirp | CorpusId::SinusoidalDensity => 0.0,
        };
        Self { id, shape }
    }

    pub fn lambda_tear(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::Parameter(alloc::format!("lambda = {lambda} must lie in (0, 1)")));
        }
        Ok(Self {
            id: CorpusId::LambdaTear,
            shape: lambda,
        })
    }

    pub fn weierstrass(tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau < 2.0) {
            return Err(Error::Parameter(alloc::format!("tau = {tau} must lie in (0, 2)")));
        }
        Ok(Self {
            id: CorpusId::Weierstrass,
            shape: tau,
        })
    }

    pub fn id(&self) -> CorpusId {
        self.id
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    /// Sampling window: the support plus a zero margin on each side.
    pub fn domain(&self) -> Interval {
        match self.id {
            CorpusId::SinusoidalDensity => Interval { lo: -PI, hi: PI },
            _ => Interval { lo: -0.5, hi: 1.5 },
        }
    }

    /// Closed interval outside which the function vanishes.
    pub fn support(&self) -> Interval {
        match self.id {
            CorpusId::LambdaTear | CorpusId::DoubleChirp => Interval::UNIT,
            CorpusId::Weierstrass => Interval {
                lo: -CUTOFF_RAMP,
                hi: 1.0 + CUTOFF_RAMP,
            },
            CorpusId::SinusoidalDensity => Interval {
                lo: -2.0 * PI / 3.0,
                hi: PI / 3.0,
            },
        }
    }

    pub fn is_fractal(&self) -> bool {
        self.id == CorpusId::Weierstrass
    }

    pub fn singularities(&self) -> Vec<Singularity> {
        use SingularityKind::*;
        let s = |x, kind| Singularity { x, kind };
        match self.id {
            CorpusId::LambdaTear => vec![s(0.0, DerivativeKink), s(1.0, None)],
            CorpusId::Weierstrass => Vec::new(),
            CorpusId::DoubleChirp => vec![s(0.0, SecondKindChirp), s(1.0, SecondKindChirp)],
            CorpusId::SinusoidalDensity => vec![
                s(-2.0 * PI / 3.0, Jump),
                s(0.0, DerivativeKink),
                s(PI / 3.0, Jump),
            ],
        }
    }

    pub fn evaluate(&self, x: f64) -> Result<f64> {
        let d = self.domain();
        if !d.contains(x) {
            return Err(Error::Domain { x, lo: d.lo, hi: d.hi });
        }
        Ok(self.value(x))
    }

    /// Formula value at any real `x`.
    pub fn value(&self, x: f64) -> f64 {
        match self.id {
            CorpusId::LambdaTear => lambda_tear(self.shape, x),
            CorpusId::Weierstrass => weierstrass_cutoff(x) * weierstrass(self.shape, x),
            CorpusId::DoubleChirp => {
                if x > 0.0 && x < 1.0 {
                    lambda_tear(0.25, x) * libm::sin(64.0 * PI * x * (1.0 - x))
                } else {
                    0.0
                }
            }
            CorpusId::SinusoidalDensity => {
                if (-2.0 * PI / 3.0..=PI / 3.0).contains(&x) {
                    0.5 * libm::fabs(libm::sin(x))
                } else {
                    0.0
                }
            }
        }
    }

    /// `n` samples on [`CorpusEntry::domain`].
    pub fn sample(&self, n: usize) -> Result<SampleGrid> {
        SampleGrid::from_fn(self.domain(), n, |x| self.value(x))
    }

    /// Exact Besov regularity `(p, ∞, s(p))`.
    pub fn register_besov(&self, p: f64) -> Result<BesovParams> {
        if !(p >= 1.0) {
            return Err(Error::Registration { p });
        }
        let inv_p = if p.is_infinite() { 0.0 } else { 1.0 / p };
        let s = match self.id {
            CorpusId::LambdaTear => self.shape + inv_p,
            CorpusId::Weierstrass => self.shape,
            CorpusId::DoubleChirp => 0.5 + inv_p,
            CorpusId::SinusoidalDensity => inv_p,
        };
        BesovParams::new(p, f64::INFINITY, s)
    }
}

fn lambda_tear(lambda: f64, x: f64) -> f64 {
    if x > 0.0 && x < 1.0 {
        libm::pow(x, lambda) * libm::exp(-x * x / (1.0 - x * x))
    } else {
        0.0
    }
}

/// Number of Weierstrass terms kept: `min{k : 1.5^{−τk} < 1e−12}`.
pub fn weierstrass_terms(tau: f64) -> usize {
    let mut k = 0usize;
    while libm::pow(1.5, -tau * k as f64) >= WEIERSTRASS_TRUNCATION {
        k += 1;
    }
    k
}

fn weierstrass(tau: f64, x: f64) -> f64 {
    let terms = weierstrass_terms(tau);
    let decay = libm::pow(1.5, -tau);
    let mut amplitude = 1.0;
    let mut frequency = 5.0;
    let mut sum = 0.0;
    for _ in 0..terms {
        sum += amplitude * libm::sin(frequency * x);
        amplitude *= decay;
        frequency *= 1.5;
    }
    sum
}

/// Smooth step from 0 at `t ≤ 0` to 1 at `t ≥ 1`.
fn smooth_step(t: f64) -> f64 {
    let bump = |u: f64| if u > 0.0 { libm::exp(-1.0 / u) } else { 0.0 };
    let a = bump(t);
    let b = bump(1.0 - t);
    if a + b == 0.0 {
        0.0
    } else {
        a / (a + b)
    }
}

/// `C^∞` cutoff equal to 1 on [0, 1] and 0 outside the ramps around it.
pub fn weierstrass_cutoff(x: f64) -> f64 {
    if x < 0.0 {
        smooth_step((x + CUTOFF_RAMP) / CUTOFF_RAMP)
    } else if x > 1.0 {
        smooth_step((1.0 + CUTOFF_RAMP - x) / CUTOFF_RAMP)
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_tear_values() {
        let e = CorpusEntry::lambda_tear(0.3).unwrap();
        let want = libm::pow(0.5, 0.3) * libm::exp(-1.0 / 3.0);
        assert!((e.evaluate(0.5).unwrap() - want).abs() < 1e-15);
        assert_eq!(e.evaluate(-0.5).unwrap(), 0.0);
        assert_eq!(e.evaluate(0.0).unwrap(), 0.0);
        assert_eq!(e.evaluate(1.0).unwrap(), 0.0);
        assert!(matches!(e.evaluate(2.0), Err(Error::Domain { .. })));
        assert!(CorpusEntry::lambda_tear(1.0).is_err());
    }

    #[test]
    fn ids_parse() {
        for id in CorpusId::ALL {
            assert_eq!(id.as_str().parse::<CorpusId>().unwrap(), id);
        }
        assert_eq!("lambda_tear".parse::<CorpusId>().unwrap(), CorpusId::LambdaTear);
        assert_eq!("Sinusoidal_Density".parse::<CorpusId>().unwrap(), CorpusId::SinusoidalDensity);
        assert!("mexican-hat".parse::<CorpusId>().is_err());
    }

    #[test]
    fn registrations() {
        let tear = CorpusEntry::new(CorpusId::LambdaTear);
        let reg = tear.register_besov(2.0).unwrap();
        assert_eq!((reg.p(), reg.q(), reg.s()), (2.0, f64::INFINITY, 1.0));
        let w = CorpusEntry::weierstrass(0.7).unwrap();
        assert_eq!(w.register_besov(2.0).unwrap().s(), 0.7);
        let chirp = CorpusEntry::new(CorpusId::DoubleChirp);
        assert_eq!(chirp.register_besov(1.0).unwrap().s(), 1.5);
        let dens = CorpusEntry::new(CorpusId::SinusoidalDensity);
        assert_eq!(dens.register_besov(f64::INFINITY).unwrap().s(), 0.0);
        assert_eq!(dens.register_besov(0.5), Err(Error::Registration { p: 0.5 }));
    }

    #[test]
    fn matched_regularity() {
        for (lambda, p) in [(0.5, 2.0), (0.25, 1.0), (0.6, 4.0)] {
            let tear = CorpusEntry::lambda_tear(lambda).unwrap();
            let w = CorpusEntry::weierstrass(lambda + 1.0 / p).unwrap();
            assert_eq!(tear.register_besov(p).unwrap(), w.register_besov(p).unwrap());
        }
        let chirp = CorpusEntry::new(CorpusId::DoubleChirp);
        let half = CorpusEntry::lambda_tear(0.5).unwrap();
        assert_eq!(chirp.register_besov(3.0).unwrap(), half.register_besov(3.0).unwrap());
    }

    #[test]
    fn weierstrass_truncation() {
        let k = weierstrass_terms(1.0);
        assert!(libm::pow(1.5, -(k as f64)) < 1e-12);
        assert!(libm::pow(1.5, -((k - 1) as f64)) >= 1e-12);
        // cutoff is exactly one on [0,1] and vanishes past the ramps
        assert_eq!(weierstrass_cutoff(0.0), 1.0);
        assert_eq!(weierstrass_cutoff(1.0), 1.0);
        assert_eq!(weierstrass_cutoff(-0.25), 0.0);
        assert_eq!(weierstrass_cutoff(1.3), 0.0);
        let w = CorpusEntry::new(CorpusId::Weierstrass);
        assert_eq!(w.value(0.5), weierstrass(1.0, 0.5));
    }

    #[test]
    fn supports_vanish_outside() {
        for id in CorpusId::ALL {
            let e = CorpusEntry::new(id);
            let sup = e.support();
            let d = e.domain();
            for i in 0..=400 {
                let x = d.lo + d.length() * i as f64 / 400.0;
                if x < sup.lo || x > sup.hi {
                    assert_eq!(e.value(x), 0.0, "{id} at {x}");
                }
            }
            for s in e.singularities() {
                assert!(d.contains(s.x));
            }
        }
    }

    #[test]
    fn sinusoidal_density_kinds() {
        let e = CorpusEntry::new(CorpusId::SinusoidalDensity);
        let kinds: Vec<_> = e.singularities().iter().map(|s| s.kind).collect();
        assert_eq!(
            kinds,
            vec![SingularityKind::Jump, SingularityKind::DerivativeKink, SingularityKind::Jump]
        );
        // jump sizes at the two discontinuities
        let left = e.value(-2.0 * PI / 3.0);
        assert!((left - 0.5 * libm::sin(2.0 * PI / 3.0)).abs() < 1e-15);
        assert_eq!(e.value(0.0), 0.0);
    }
}
