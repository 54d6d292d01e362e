//! Precision-tagged numerics: complex values with running error bounds,
//! directed-rounding intervals for certified digit extraction, and a
//! tanh-sinh quadrature rule.
//!
//! Every value carries the working precision it was computed at. Error
//! bounds are absolute, conservative, and tracked at a small side
//! precision so they survive exponent ranges far beyond f64.

use rug::float::{Constant, Round};
use rug::ops::AssignRound;
use rug::{Float, Integer, Rational};

/// Working precision in bits.
pub type Prec = u32;

/// Precision used for error-bound bookkeeping.
const ERR_PREC: Prec = 32;

pub fn pi(prec: Prec) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// 2^(2-prec): per-operation rounding allowance, relative to magnitude.
fn op_eps(prec: Prec) -> Float {
    Float::with_val(ERR_PREC, Float::i_exp(1, 2 - prec as i32))
}

fn mag(x: &Float) -> Float {
    Float::with_val(ERR_PREC, x.clone().abs())
}

/// Complex value at a working precision with a conservative absolute
/// error bound.
#[derive(Clone, Debug)]
pub struct CVal {
    pub re: Float,
    pub im: Float,
    /// Absolute error bound on |computed - true|.
    pub err: Float,
}

impl CVal {
    pub fn prec(&self) -> Prec {
        self.re.prec()
    }

    pub fn zero(prec: Prec) -> Self {
        CVal {
            re: Float::new(prec),
            im: Float::new(prec),
            err: Float::new(ERR_PREC),
        }
    }

    pub fn new(re: Float, im: Float) -> Self {
        CVal {
            re,
            im,
            err: Float::new(ERR_PREC),
        }
    }

    pub fn from_f64(prec: Prec, re: f64, im: f64) -> Self {
        CVal::new(Float::with_val(prec, re), Float::with_val(prec, im))
    }

    pub fn real(x: Float) -> Self {
        let prec = x.prec();
        CVal::new(x, Float::new(prec))
    }

    pub fn with_err(mut self, err: Float) -> Self {
        self.err = Float::with_val(ERR_PREC, err);
        self
    }

    /// Upper bound on the modulus.
    pub fn abs_upper(&self) -> Float {
        let h = Float::with_val(ERR_PREC, self.re.clone().hypot(&self.im));
        h + &self.err
    }

    pub fn abs(&self) -> Float {
        self.re.clone().hypot(&self.im)
    }

    pub fn arg(&self) -> Float {
        self.im.clone().atan2(&self.re)
    }

    pub fn conj(&self) -> Self {
        let mut z = self.clone();
        z.im = -z.im;
        z
    }

    pub fn neg(&self) -> Self {
        let mut z = self.clone();
        z.re = -z.re;
        z.im = -z.im;
        z
    }

    pub fn add(&self, other: &CVal) -> Self {
        let prec = self.prec().max(other.prec());
        let re = Float::with_val(prec, &self.re + &other.re);
        let im = Float::with_val(prec, &self.im + &other.im);
        let mut err = Float::with_val(ERR_PREC, &self.err + &other.err);
        err += (mag(&re) + mag(&im)) * op_eps(prec);
        CVal { re, im, err }
    }

    pub fn sub(&self, other: &CVal) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &CVal) -> Self {
        let prec = self.prec().max(other.prec());
        let re = Float::with_val(prec, &self.re * &other.re) - Float::with_val(prec, &self.im * &other.im);
        let im = Float::with_val(prec, &self.re * &other.im) + Float::with_val(prec, &self.im * &other.re);
        let m1 = Float::with_val(ERR_PREC, self.re.clone().hypot(&self.im));
        let m2 = Float::with_val(ERR_PREC, other.re.clone().hypot(&other.im));
        let mut err = Float::with_val(ERR_PREC, &m1 * &other.err);
        err += Float::with_val(ERR_PREC, &m2 * &self.err);
        err += Float::with_val(ERR_PREC, &self.err * &other.err);
        err += (m1 * m2 + Float::with_val(ERR_PREC, 1u32)) * op_eps(prec) * 4u32;
        CVal { re, im, err }
    }

    /// Multiply by an exact real scalar.
    pub fn scale(&self, s: &Float) -> Self {
        let prec = self.prec().max(s.prec());
        let re = Float::with_val(prec, &self.re * s);
        let im = Float::with_val(prec, &self.im * s);
        let mut err = Float::with_val(ERR_PREC, &self.err * mag(s));
        err += (mag(&re) + mag(&im)) * op_eps(prec);
        CVal { re, im, err }
    }

    pub fn recip(&self) -> Self {
        let prec = self.prec();
        let n = Float::with_val(prec, self.re.clone().square() + self.im.clone().square());
        let re = Float::with_val(prec, &self.re / &n);
        let im = -Float::with_val(prec, &self.im / &n);
        let modulus = Float::with_val(ERR_PREC, n.clone().sqrt());
        // |1/z - 1/z~| <= err / (|z| (|z| - err)) for err < |z|
        let denom = Float::with_val(ERR_PREC, &modulus * (modulus.clone() - &self.err));
        let mut err = if denom > 0 {
            Float::with_val(ERR_PREC, &self.err / denom)
        } else {
            Float::with_val(ERR_PREC, f64::INFINITY)
        };
        err += (mag(&re) + mag(&im)) * op_eps(prec) * 4u32;
        CVal { re, im, err }
    }

    pub fn div(&self, other: &CVal) -> Self {
        self.mul(&other.recip())
    }

    /// exp(z), error propagated through |exp'| = |exp|.
    pub fn exp(&self) -> Self {
        let prec = self.prec();
        let ex = self.re.clone().exp();
        let (s, c) = self.im.clone().sin_cos(Float::new(prec));
        let re = Float::with_val(prec, &ex * &c);
        let im = Float::with_val(prec, &ex * &s);
        let m = mag(&ex);
        let growth = Float::with_val(ERR_PREC, self.err.clone().exp());
        let mut err = Float::with_val(ERR_PREC, &m * &self.err) * growth;
        err += m * op_eps(prec) * 4u32;
        CVal { re, im, err }
    }

    /// Principal logarithm; requires z bounded away from 0 relative to err.
    pub fn ln(&self) -> Self {
        let prec = self.prec();
        let modulus = self.abs();
        let re = modulus.clone().ln();
        let im = self.arg();
        let m = Float::with_val(ERR_PREC, modulus);
        let mut err = if m > self.err {
            Float::with_val(ERR_PREC, &self.err / (m - &self.err)) * 2u32
        } else {
            Float::with_val(ERR_PREC, f64::INFINITY)
        };
        err += op_eps(prec) * (mag(&re) + Float::with_val(ERR_PREC, 8u32));
        CVal { re, im, err }
    }

    /// Principal cube root via exp(ln(z)/3).
    pub fn cbrt_principal(&self) -> Self {
        let third = Float::with_val(self.prec(), Rational::from((1u32, 3u32)));
        self.ln().scale(&third).exp()
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn err_f64(&self) -> f64 {
        self.err.to_f64()
    }
}

/// exp(i*theta) for exact theta.
pub fn unit(prec: Prec, theta: &Float) -> CVal {
    let (s, c) = theta.clone().sin_cos(Float::new(prec));
    let mut z = CVal::new(c, s);
    z.err = op_eps(prec) * 4u32;
    z
}

/// Closed real interval with outward-rounded endpoints.
#[derive(Clone, Debug)]
pub struct RInterval {
    pub lo: Float,
    pub hi: Float,
}

impl RInterval {
    pub fn point(x: Float) -> Self {
        RInterval { lo: x.clone(), hi: x }
    }

    pub fn from_rational(prec: Prec, q: &Rational) -> Self {
        let mut lo = Float::new(prec);
        lo.assign_round(q, Round::Down);
        let mut hi = Float::new(prec);
        hi.assign_round(q, Round::Up);
        RInterval { lo, hi }
    }

    /// Center +/- radius.
    pub fn from_center_radius(center: Float, radius: &Float) -> Self {
        let prec = center.prec();
        let mut lo = Float::new(prec);
        lo.assign_round(&center - radius, Round::Down);
        let mut hi = Float::new(prec);
        hi.assign_round(&center + radius, Round::Up);
        RInterval { lo, hi }
    }

    pub fn width(&self) -> Float {
        let mut w = Float::new(self.lo.prec());
        w.assign_round(&self.hi - &self.lo, Round::Up);
        w
    }

    pub fn sub_integer(&self, n: &Integer) -> Self {
        let prec = self.lo.prec();
        let mut lo = Float::new(prec);
        lo.assign_round(&self.lo - n, Round::Down);
        let mut hi = Float::new(prec);
        hi.assign_round(&self.hi - n, Round::Up);
        RInterval { lo, hi }
    }

    /// Both endpoints share a floor -> that floor is certified.
    pub fn certified_floor(&self) -> Option<Integer> {
        let flo = self.lo.clone().floor();
        let fhi = self.hi.clone().floor();
        let ilo = flo.to_integer()?;
        let ihi = fhi.to_integer()?;
        if ilo == ihi {
            Some(ilo)
        } else {
            None
        }
    }

    /// Reciprocal of an interval certified to lie in (0, inf).
    pub fn recip_positive(&self) -> Option<Self> {
        if !(self.lo.is_sign_positive() && self.lo.is_normal()) {
            return None;
        }
        let prec = self.lo.prec();
        let one = Float::with_val(prec, 1u32);
        let mut lo = Float::new(prec);
        lo.assign_round(&one / &self.hi, Round::Down);
        let mut hi = Float::new(prec);
        hi.assign_round(&one / &self.lo, Round::Up);
        Some(RInterval { lo, hi })
    }
}

/// Tanh-sinh (double-exponential) quadrature of f over [a, b].
///
/// Suitable for integrands analytic on the open interval, possibly with
/// mild endpoint singularities. Doubles the node density until two
/// successive levels agree within `tol` (or `max_level` is reached);
/// returns the value and an agreement-based error estimate.
pub fn tanh_sinh<F: Fn(&Float) -> Float>(
    f: F,
    a: &Float,
    b: &Float,
    prec: Prec,
    tol: &Float,
    max_level: u32,
) -> (Float, Float) {
    let half_pi = pi(prec) / 2u32;
    let hw = Float::with_val(prec, b - a) / 2u32;

    // t-range: |x - endpoint| shrinks like exp(-pi/2 sinh t); stop once
    // the affine map hits the endpoints at working precision.
    let t_max = {
        let target = Float::with_val(prec, prec as f64 * 0.7 + 10.0);
        let s = Float::with_val(prec, &target / &half_pi);
        s.ln().to_f64().max(1.0) + 1.5
    };

    let eval = |t: &Float| -> Float {
        let sh = t.clone().sinh();
        let arg = Float::with_val(prec, &half_pi * &sh);
        // abscissa via the logistic form: (1 + tanh u)/2 = 1/(1 + e^{-2u}),
        // which keeps full relative precision near the endpoints
        let e2 = Float::with_val(prec, -2 * arg.clone()).exp();
        let g = Float::with_val(prec, 1u32) / (Float::with_val(prec, 1u32) + &e2);
        let xx = Float::with_val(prec, a + Float::with_val(prec, &hw * &g) * 2u32);
        // w = (pi/2) cosh t / cosh^2((pi/2) sinh t)
        let ch = arg.cosh();
        let w = Float::with_val(prec, &half_pi * t.clone().cosh())
            / Float::with_val(prec, ch.clone().square());
        let fx = f(&xx);
        if fx.is_finite() {
            fx * w
        } else {
            Float::new(prec)
        }
    };

    let mut h = Float::with_val(prec, 1u32);
    let mut sum = eval(&Float::new(prec));
    {
        // level 0: integer nodes
        let mut k = 1u64;
        loop {
            let t = Float::with_val(prec, k);
            if t.to_f64() > t_max {
                break;
            }
            sum += eval(&t) + eval(&Float::with_val(prec, -t.clone()));
            k += 1;
        }
    }
    let mut value = Float::with_val(prec, &sum * &h) * &hw;
    let mut est = Float::with_val(prec, f64::INFINITY);

    for _ in 1..=max_level {
        h /= 2u32;
        // add the odd multiples of the new h
        let mut k = 1u64;
        loop {
            let t = Float::with_val(prec, &h * Float::with_val(prec, k));
            if t.to_f64() > t_max {
                break;
            }
            sum += eval(&t) + eval(&Float::with_val(prec, -t.clone()));
            k += 2;
        }
        let new_value = Float::with_val(prec, &sum * &h) * &hw;
        est = Float::with_val(prec, &new_value - &value).abs();
        value = new_value;
        if est < *tol {
            break;
        }
    }
    (value, est)
}

/// Format with a fixed number of significant digits (deterministic
/// across runs; used for JSON/golden output).
pub fn fmt_sig(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let s = x.to_string_radix(10, Some(digits));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_matches_f64() {
        let z = CVal::from_f64(64, 0.3, -1.2);
        let e = z.exp();
        let (re, im) = e.to_f64_pair();
        let expect = (0.3f64).exp();
        assert!((re - expect * (-1.2f64).cos()).abs() < 1e-14);
        assert!((im - expect * (-1.2f64).sin()).abs() < 1e-14);
        assert!(e.err_f64() < 1e-15);
    }

    #[test]
    fn mul_error_bound_is_conservative() {
        let a = CVal::from_f64(64, 1.5, 2.0).with_err(Float::with_val(32, 1e-9));
        let b = CVal::from_f64(64, -0.5, 3.0);
        let c = a.mul(&b);
        assert!(c.err_f64() >= 1e-9 * (0.5f64.hypot(3.0)) * 0.99);
    }

    #[test]
    fn interval_floor_certification() {
        let q = Rational::from((7, 5));
        let iv = RInterval::from_rational(64, &q);
        assert_eq!(iv.certified_floor().unwrap(), Integer::from(1));
        let tight = RInterval::from_center_radius(
            Float::with_val(64, 2.0),
            &Float::with_val(64, 1e-10),
        );
        assert!(tight.certified_floor().is_none());
    }

    #[test]
    fn tanh_sinh_integrates_sqrt_singularity() {
        // int_0^1 1/sqrt(x) dx = 2
        let prec = 128;
        let tol = Float::with_val(prec, 1e-25);
        let (v, est) = tanh_sinh(
            |x: &Float| {
                if x.is_sign_positive() && !x.is_zero() {
                    x.clone().sqrt().recip()
                } else {
                    Float::new(prec)
                }
            },
            &Float::new(prec),
            &Float::with_val(prec, 1u32),
            prec,
            &tol,
            12,
        );
        let err = Float::with_val(prec, &v - Float::with_val(prec, 2u32))
            .abs()
            .to_f64();
        assert!(err < 1e-20, "err={err} est={est}");
    }

    #[test]
    fn cbrt_principal_branch() {
        let z = CVal::from_f64(128, -0.5, 0.8);
        let r = z.cbrt_principal();
        let back = r.mul(&r).mul(&r);
        let (re, im) = back.to_f64_pair();
        assert!((re + 0.5).abs() < 1e-12 && (im - 0.8).abs() < 1e-12);
        // principal branch: argument in (-pi/3, pi/3]
        assert!(r.arg().to_f64().abs() <= std::f64::consts::PI / 3.0 + 1e-12);
    }
}
