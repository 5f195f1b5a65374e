//! Strichartz admissibility, decided in exact rational arithmetic.
//!
//! A triple `(p, q, μ)` in dimension 2 is accepted when
//! `0 ≤ μ ≤ 1`, `2/(1−μ) ≤ p ≤ ∞`, `2 ≤ q ≤ ∞` and
//! `4/q = 2(1/2 − 1/p) + μ`. In other dimensions only `μ = 0` is handled:
//! `4/q = d(1/2 − 1/p)` with `2 ≤ p ≤ ∞` for `d < 4` and
//! `2 ≤ p < 2d/(d−4)` for `d ≥ 4`, which excludes `(∞, 2)` at `d = 4`.

use std::cmp::Ordering;
use std::fmt;

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Rational {
    num: i128,
    den: i128,
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Rational {
    fn new(num: i128, den: i128) -> Self {
        assert!(den != 0);
        let g = gcd(num, den).max(1);
        let s = if den < 0 { -1 } else { 1 };
        Self { num: s * num / g, den: s * den / g }
    }

    fn int(v: i128) -> Self {
        Self { num: v, den: 1 }
    }

    fn add(self, o: Self) -> Self {
        Self::new(self.num * o.den + o.num * self.den, self.den * o.den)
    }

    fn sub(self, o: Self) -> Self {
        Self::new(self.num * o.den - o.num * self.den, self.den * o.den)
    }

    fn mul(self, o: Self) -> Self {
        Self::new(self.num * o.num, self.den * o.den)
    }

    fn cmp(self, o: Self) -> Ordering {
        (self.num * o.den).cmp(&(o.num * self.den))
    }

    /// Best rational with denominator ≤ `max_den` agreeing with `x` to 1e−13.
    fn approximate(x: f64, max_den: i128) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        // continued-fraction convergents
        let (mut h0, mut h1) = (0i128, 1i128);
        let (mut k0, mut k1) = (1i128, 0i128);
        let mut r = x;
        for _ in 0..40 {
            let a = r.floor();
            if a.abs() > 1e15 {
                break;
            }
            let ai = a as i128;
            let h2 = ai * h1 + h0;
            let k2 = ai * k1 + k0;
            if k2 > max_den {
                break;
            }
            (h0, h1, k0, k1) = (h1, h2, k1, k2);
            if ((h1 as f64) / (k1 as f64) - x).abs() <= 1e-13 * x.abs().max(1.0) {
                return Some(Self::new(h1, k1));
            }
            let frac = r - a;
            if frac.abs() < 1e-300 {
                break;
            }
            r = 1.0 / frac;
        }
        None
    }
}

/// Reciprocal of a Lebesgue exponent, exact when the exponent is a rational
/// with small denominator.
#[derive(Clone, Copy, Debug)]
enum Reciprocal {
    Exact(Rational),
    Inexact(f64),
}

impl Reciprocal {
    fn of_exponent(p: f64) -> Self {
        if p.is_infinite() {
            return Reciprocal::Exact(Rational::int(0));
        }
        match Rational::approximate(p, 1_000_000) {
            Some(r) if r.num != 0 => Reciprocal::Exact(Rational::new(r.den, r.num)),
            _ => Reciprocal::Inexact(1.0 / p),
        }
    }

    fn of_value(v: f64) -> Self {
        match Rational::approximate(v, 1_000_000) {
            Some(r) => Reciprocal::Exact(r),
            None => Reciprocal::Inexact(v),
        }
    }

    fn as_f64(self) -> f64 {
        match self {
            Reciprocal::Exact(r) => r.num as f64 / r.den as f64,
            Reciprocal::Inexact(v) => v,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Admissibility {
    pub admissible: bool,
    pub reason: String,
}

impl Admissibility {
    fn yes(reason: impl Into<String>) -> Self {
        Self { admissible: true, reason: reason.into() }
    }

    fn no(reason: impl Into<String>) -> Self {
        Self { admissible: false, reason: reason.into() }
    }
}

impl fmt::Display for Admissibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", if self.admissible { "admissible" } else { "not admissible" }, self.reason)
    }
}

fn scaling_holds(rp: Reciprocal, rq: Reciprocal, mu: Reciprocal, d: u32) -> bool {
    // 4/q = d(1/2 − 1/p) + μ
    match (rp, rq, mu) {
        (Reciprocal::Exact(rp), Reciprocal::Exact(rq), Reciprocal::Exact(mu)) => {
            let lhs = Rational::int(4).mul(rq);
            let rhs = Rational::int(d as i128).mul(Rational::new(1, 2).sub(rp)).add(mu);
            lhs.cmp(rhs) == Ordering::Equal
        }
        _ => {
            let lhs = 4.0 * rq.as_f64();
            let rhs = d as f64 * (0.5 - rp.as_f64()) + mu.as_f64();
            (lhs - rhs).abs() <= 1e-15 * lhs.abs().max(1.0)
        }
    }
}

pub fn validate_admissible(p: f64, q: f64, mu: f64, d: u32) -> Admissibility {
    if p.is_nan() || q.is_nan() || mu.is_nan() {
        return Admissibility::no("NaN exponent");
    }
    if d == 0 {
        return Admissibility::no("dimension must be positive");
    }
    if !(0.0..=1.0).contains(&mu) {
        return Admissibility::no(format!("derivative gain μ = {mu} outside [0, 1]"));
    }
    if d != 2 && mu != 0.0 {
        return Admissibility::no("derivative-gain estimates are only available in dimension 2");
    }
    if q < 2.0 {
        return Admissibility::no(format!("q = {q} < 2"));
    }
    if p < 2.0 {
        return Admissibility::no(format!("p = {p} < 2"));
    }
    let rp = Reciprocal::of_exponent(p);
    let rq = Reciprocal::of_exponent(q);
    let rmu = Reciprocal::of_value(mu);

    if d == 2 {
        // p ≥ 2/(1−μ)  ⟺  1/p ≤ (1−μ)/2
        let ok = match (rp, rmu) {
            (Reciprocal::Exact(a), Reciprocal::Exact(m)) => {
                a.cmp(Rational::int(1).sub(m).mul(Rational::new(1, 2))) != Ordering::Greater
            }
            _ => rp.as_f64() <= 0.5 * (1.0 - rmu.as_f64()) + 1e-15,
        };
        if !ok {
            return Admissibility::no(format!("p = {p} below 2/(1−μ)"));
        }
    } else if d >= 4 {
        if d == 4 && p.is_infinite() && q == 2.0 {
            return Admissibility::no("(p, q, d) = (∞, 2, 4) is the excluded endpoint");
        }
        // p < 2d/(d−4)  ⟺  1/p > (d−4)/(2d)
        let bound = Rational::new(d as i128 - 4, 2 * d as i128);
        let ok = match rp {
            Reciprocal::Exact(a) => a.cmp(bound) == Ordering::Greater,
            Reciprocal::Inexact(v) => v > bound.num as f64 / bound.den as f64,
        };
        if !ok {
            return Admissibility::no(format!("p = {p} not below 2d/(d−4)"));
        }
    }

    if scaling_holds(rp, rq, rmu, d) {
        Admissibility::yes(format!("4/q = {d}(1/2 − 1/p) + μ holds"))
    } else {
        Admissibility::no(format!("scaling relation 4/q = {d}(1/2 − 1/p) + μ fails"))
    }
}

/// A validated exponent triple in two dimensions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdmissiblePair {
    p: f64,
    q: f64,
    mu: f64,
}

impl AdmissiblePair {
    pub fn new(p: f64, q: f64, mu: f64) -> Result<Self> {
        let verdict = validate_admissible(p, q, mu, 2);
        if verdict.admissible {
            Ok(Self { p, q, mu })
        } else {
            Err(Error::param(format!("({p}, {q}) with μ = {mu}: {}", verdict.reason)))
        }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
}

impl fmt::Display for AdmissiblePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: f64| if v.is_infinite() { "inf".to_string() } else { format!("{v}") };
        write!(f, "(p={}, q={}, mu={})", show(self.p), show(self.q), self.mu)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const INF: f64 = f64::INFINITY;

    #[test]
    fn named_pairs() {
        assert!(validate_admissible(6.0, 6.0, 0.0, 2).admissible);
        assert!(validate_admissible(INF, 2.0, 1.0, 2).admissible);
        assert!(!validate_admissible(INF, 2.0, 0.0, 4).admissible);
        assert!(validate_admissible(INF, 4.0, 0.0, 2).admissible);
        assert!(validate_admissible(2.0, INF, 0.0, 2).admissible);
        assert!(validate_admissible(4.0, 8.0, 0.0, 2).admissible);
        // 4/q = 2(1/2 − 1/3) + 1/3 = 2/3
        assert!(validate_admissible(3.0, 6.0, 1.0 / 3.0, 2).admissible);
        assert!(!validate_admissible(3.0, 6.0, 0.0, 2).admissible);
    }

    #[test]
    fn range_violations() {
        assert!(!validate_admissible(1.5, 2.0, 0.0, 2).admissible);
        assert!(!validate_admissible(4.0, 1.0, 0.0, 2).admissible);
        assert!(!validate_admissible(4.0, 4.0, 1.5, 2).admissible);
        // μ = 1/2 needs p ≥ 4
        assert!(!validate_admissible(3.0, 24.0 / 5.0, 0.5, 2).admissible);
        assert!(validate_admissible(4.0, 4.0, 0.5, 2).admissible);
        assert!(!validate_admissible(4.0, 4.0, 0.5, 3).admissible);
    }

    #[test]
    fn boundary_is_exact() {
        // q nudged by 1e-12 off the scaling line is rejected
        assert!(!validate_admissible(6.0, 6.0 + 1e-12, 0.0, 2).admissible);
        assert!(!validate_admissible(6.0 - 1e-12, 6.0, 0.0, 2).admissible);
        assert!(validate_admissible(6.0, 6.0, 0.0, 2).admissible);
    }

    #[test]
    fn higher_dimensions() {
        // d = 3: 4/q = 3(1/2 − 1/p); p = 6 → q = 4
        assert!(validate_admissible(6.0, 4.0, 0.0, 3).admissible);
        // d = 5: p < 10, and p = 10 sits on the scaling line with q = 2
        assert!(!validate_admissible(10.0, 2.0, 0.0, 5).admissible);
        assert!(validate_admissible(5.0, 8.0 / 3.0, 0.0, 5).admissible);
        assert!(AdmissiblePair::new(6.0, 6.0, 0.0).is_ok());
        assert!(AdmissiblePair::new(6.0, 5.0, 0.0).is_err());
    }
}
