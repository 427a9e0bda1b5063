use wbnn_core::corpus::{weierstrass_terms, CorpusEntry, CorpusId, SingularityKind};
use wbnn_core::filter::{make_daubechies, MAX_ORDER};
use wbnn_core::transform::analyze;
use wbnn_core::Error;

/// Composite Simpson rule on `[a, b]` with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 }).sum();
    (f(a) + f(b) + inner) * h / 3.0
}

#[test]
fn sinusoidal_density_has_unit_mass() {
    let e = CorpusEntry::new(CorpusId::SinusoidalDensity);
    let s = e.support();
    // integrate piecewise so the kink and jumps sit on panel ends
    let mass = simpson(|x| e.value(x), s.lo, 0.0, 1 << 12) + simpson(|x| e.value(x), 0.0, s.hi, 1 << 12);
    assert!((mass - 1.0).abs() < 1e-12, "{mass}");
}

#[test]
fn singularities_inside_domains() {
    for id in CorpusId::ALL {
        let e = CorpusEntry::new(id);
        for s in e.singularities() {
            assert!(e.domain().contains(s.x));
        }
        assert_eq!(e.is_fractal(), id == CorpusId::Weierstrass);
    }
    let kinds: Vec<_> = CorpusEntry::new(CorpusId::SinusoidalDensity)
        .singularities()
        .iter()
        .map(|s| s.kind)
        .collect();
    assert_eq!(kinds, [SingularityKind::Jump, SingularityKind::DerivativeKink, SingularityKind::Jump]);
}

#[test]
fn samples_leave_room_for_every_filter() {
    for id in CorpusId::ALL {
        let grid = CorpusEntry::new(id).sample(256).unwrap();
        let f = make_daubechies(MAX_ORDER).unwrap();
        assert!(analyze(&grid, &f, 0).is_ok(), "{id}");
    }
}

#[test]
fn evaluation_outside_domain_fails() {
    let e = CorpusEntry::new(CorpusId::LambdaTear);
    assert!(matches!(e.evaluate(2.0), Err(Error::Domain { .. })));
    assert_eq!(e.evaluate(1.2).unwrap(), 0.0);
}

#[test]
fn registrations_follow_the_sobolev_line() {
    for id in CorpusId::ALL {
        let e = CorpusEntry::new(id);
        let tau: Vec<f64> = [1.0, 2.0, 4.0]
            .iter()
            .map(|&p| e.register_besov(p).unwrap().tau())
            .collect();
        if id != CorpusId::Weierstrass {
            assert!(tau.windows(2).all(|w| (w[0] - w[1]).abs() < 1e-15), "{id}");
        }
        assert!(matches!(e.register_besov(0.5), Err(Error::Registration { .. })));
    }
    let w = CorpusEntry::weierstrass(0.7).unwrap();
    assert_eq!(w.register_besov(2.0).unwrap().s(), 0.7);
    let matched = CorpusEntry::weierstrass(0.3 + 0.5).unwrap();
    let tear = CorpusEntry::lambda_tear(0.3).unwrap();
    assert_eq!(matched.register_besov(2.0).unwrap(), tear.register_besov(2.0).unwrap());
}

#[test]
fn weierstrass_tail_is_negligible() {
    for tau in [0.3, 1.0, 1.9] {
        let k = weierstrass_terms(tau);
        let r = 1.5f64.powf(-tau);
        let tail = r.powi(k as i32) / (1.0 - r);
        assert!(tail < 1e-12 / (1.0 - r) + 1e-300);
        assert!(r.powi(k as i32 - 1) >= 1e-12);
    }
}
