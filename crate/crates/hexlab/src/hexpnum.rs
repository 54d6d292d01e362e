//! Numerical evaluation of the hexponential map: the constants omega0,
//! C and varpi0, the eta-power q-series, equivariant evaluation through
//! fundamental-domain reduction, cusp values (closed form and limits),
//! and radial scans toward the boundary.

use rug::ops::Pow;
use rug::{Float, Integer};
use thiserror::Error;

use crate::contfrac::QuadSurd;
use crate::modgroup::{self, HexElement, ProjMatrix};
use crate::num::{pi, unit, CVal, Prec};
use crate::psi::{CoeffTable, PsiError};

#[derive(Debug, Error)]
pub enum HexpError {
    #[error("point is outside the validated region")]
    RegionError,
    #[error("cannot reach the requested tolerance")]
    PrecisionExhausted,
    #[error("cusp numerator and denominator must be coprime")]
    NotCoprime,
    #[error("slope has trivial homology translation")]
    ZeroTranslation,
    #[error(transparent)]
    Psi(#[from] PsiError),
}

/// The closed-form constants of the hexponential chart, at a fixed
/// working precision.
#[derive(Clone, Debug)]
pub struct Constants {
    pub prec: Prec,
    pub pi: Float,
    pub gamma_third: Float,
    /// |omega0| = 2 sqrt(pi) / 3^{1/4}
    pub abs_omega0: Float,
    /// C = 2^{10/3} 3^{-3/4} pi^{5/2} / Gamma(1/3)^3
    pub c_const: Float,
    /// varpi0 = Gamma(1/3)^3 / (2^{4/3} pi)
    pub varpi0: Float,
    pub sqrt3: Float,
}

impl Constants {
    pub fn new(prec: Prec) -> Self {
        let pi = pi(prec);
        let gamma_third = Float::with_val(prec, (Float::with_val(prec, 1u32) / 3u32).gamma());
        let sqrt3 = Float::with_val(prec, 3u32).sqrt();
        let abs_omega0 = Float::with_val(prec, 2 * pi.clone().sqrt())
            / Float::with_val(prec, 3u32).root(4);
        let g3 = gamma_third.clone().pow(3u32);
        let c_const = Float::with_val(prec, 1024u32).root(3) / Float::with_val(prec, 27u32).root(4)
            * pi.clone().pow(2u32)
            * pi.clone().sqrt()
            / &g3;
        let varpi0 = g3 / (Float::with_val(prec, 16u32).root(3) * &pi);
        Constants {
            prec,
            pi,
            gamma_third,
            abs_omega0,
            c_const,
            varpi0,
            sqrt3,
        }
    }

    /// omega0 = -i |omega0|.
    pub fn omega0(&self) -> CVal {
        CVal::new(
            Float::new(self.prec),
            -self.abs_omega0.clone(),
        )
    }

    /// u_X = |omega0| exp(-i pi/6).
    pub fn u_x(&self) -> CVal {
        CVal::new(
            Float::with_val(self.prec, &self.abs_omega0 * &self.sqrt3) / 2u32,
            -Float::with_val(self.prec, &self.abs_omega0) / 2u32,
        )
    }

    /// u_Y = |omega0| exp(+i pi/6).
    pub fn u_y(&self) -> CVal {
        self.u_x().conj()
    }

    /// zeta6^k = exp(i pi k / 3).
    pub fn zeta6(&self, k: u8) -> CVal {
        let half = Float::with_val(self.prec, 1u32) / 2u32;
        let s3h = Float::with_val(self.prec, &self.sqrt3) / 2u32;
        let (re, im) = match k % 6 {
            0 => (Float::with_val(self.prec, 1u32), Float::new(self.prec)),
            1 => (half.clone(), s3h.clone()),
            2 => (-half.clone(), s3h.clone()),
            3 => (Float::with_val(self.prec, -1i32), Float::new(self.prec)),
            4 => (-half.clone(), -s3h.clone()),
            _ => (half.clone(), -s3h.clone()),
        };
        CVal::new(re, im)
    }

    /// m u_X + n u_Y.
    pub fn lattice_point(&self, m: i64, n: i64) -> CVal {
        let ux = self.u_x();
        let uy = self.u_y();
        ux.scale(&Float::with_val(self.prec, m))
            .add(&uy.scale(&Float::with_val(self.prec, n)))
    }

    /// Nearest lattice point to z and the distance to it.
    pub fn nearest_lattice(&self, z: &CVal) -> (i64, i64, Float) {
        // z = m u_X + n u_Y: Re = (m+n) |w| sqrt3/2, Im = (n-m) |w| / 2
        let prec = self.prec;
        let sum = Float::with_val(prec, &z.re / &self.abs_omega0)
            / Float::with_val(prec, &self.sqrt3 / 2u32);
        let diff = Float::with_val(prec, &z.im / &self.abs_omega0) * 2u32;
        let mut best = (0i64, 0i64, Float::with_val(prec, f64::INFINITY));
        let s0 = sum.to_f64().round() as i64;
        let d0 = diff.to_f64().round() as i64;
        for ds in -1..=1i64 {
            for dd in -1..=1i64 {
                let (s, d) = (s0 + ds, d0 + dd);
                if (s + d) % 2 != 0 {
                    continue;
                }
                let (m, n) = ((s - d) / 2, (s + d) / 2);
                let p = self.lattice_point(m, n);
                let dist = z.sub(&p).abs();
                if dist < best.2 {
                    best = (m, n, dist);
                }
            }
        }
        best
    }
}

/// Series evaluator holding the coefficient table and constants.
pub struct Evaluator {
    pub consts: Constants,
    table: CoeffTable,
    /// largest series index n usable with the table
    n_cap: u64,
}

impl Evaluator {
    pub fn new(prec: Prec) -> Self {
        // tail ~ n^{3/2} e^{-pi n Im(tau)/12} with Im >= 1/2: reach
        // 2^{-prec-16} with slack
        let n_cap = ((24.0 / std::f64::consts::PI) * (0.70 * (prec as f64 + 32.0)) + 400.0) as u64;
        let limit = n_cap / 4 + 2;
        Evaluator {
            consts: Constants::new(prec),
            table: CoeffTable::build(limit),
            n_cap,
        }
    }

    pub fn with_table(prec: Prec, table: CoeffTable) -> Self {
        let n_cap = 4 * table.limit();
        Evaluator {
            consts: Constants::new(prec),
            table,
            n_cap,
        }
    }

    pub fn prec(&self) -> Prec {
        self.consts.prec
    }

    pub fn table(&self) -> &CoeffTable {
        &self.table
    }

    fn psi(&self, n: u64) -> i64 {
        self.table.psi_raw(n).expect("table sized at construction")
    }

    /// w = exp(i pi tau / 12), so that q^{n/24} = w^{n/2}... w^n = q^{n/24}
    /// with w = exp(2 pi i tau / 24).
    fn q24(&self, tau: &CVal) -> CVal {
        let prec = self.prec();
        let api = pi(prec) / 12u32;
        // i * (pi/12) * tau
        let z = CVal::new(
            -Float::with_val(prec, &tau.im * &api),
            Float::with_val(prec, &tau.re * &api),
        )
        .with_err(Float::with_val(32, &tau.err * &api));
        z.exp()
    }

    /// eta^4(tau) as the psi-series, for Im(tau) > 0.
    pub fn eta4(&self, tau: &CVal, tol: &Float) -> Result<CVal, HexpError> {
        self.eta_series(tau, tol, false)
    }

    /// hexp(tau) by the direct series, valid for Im(tau) >= 1/2.
    pub fn hexp_series(&self, tau: &CVal, tol: &Float) -> Result<CVal, HexpError> {
        let half = Float::with_val(self.prec(), 1u32) / 2u32;
        if tau.im < half {
            return Err(HexpError::RegionError);
        }
        self.eta_series(tau, tol, true)
    }

    /// Truncated hexp series with an explicit term cap (no tail bound).
    pub fn hexp_series_truncated(&self, tau: &CVal, n_terms: u64) -> CVal {
        self.series_sum(tau, n_terms.min(self.n_cap), true)
    }

    fn series_sum(&self, tau: &CVal, n_top: u64, weighted: bool) -> CVal {
        let prec = self.prec();
        let w = self.q24(tau);
        let w24 = {
            let mut acc = w.clone();
            for _ in 0..4 {
                acc = acc.mul(&acc);
            }
            let w8 = acc; // w^16
            let w4 = w.mul(&w).mul(&w.mul(&w));
            w8.mul(&w4).mul(&w4) // w^24
        };
        let mut term = w.mul(&w).mul(&w.mul(&w)); // w^4
        let mut sum = CVal::zero(prec);
        let mut n = 4u64;
        while n <= n_top {
            let c = self.psi(n);
            if c != 0 {
                let mut coeff = Float::with_val(prec, c);
                if weighted {
                    coeff /= Float::with_val(prec, n);
                }
                sum = sum.add(&term.scale(&coeff));
            }
            term = term.mul(&w24);
            n += 24;
        }
        if weighted {
            // (12 C / (i pi)) * sum = -i (12 C / pi) * sum
            let scale = Float::with_val(prec, 12 * self.consts.c_const.clone()) / &self.consts.pi;
            let s = sum.scale(&scale);
            CVal::new(s.im.clone(), -s.re.clone()).with_err(s.err)
        } else {
            sum
        }
    }

    fn eta_series(&self, tau: &CVal, tol: &Float, weighted: bool) -> Result<CVal, HexpError> {
        if !(tau.im.is_sign_positive() && !tau.im.is_zero()) {
            return Err(HexpError::RegionError);
        }
        let prec = self.prec();
        let rho = {
            // |q^{1/24}| = exp(-pi Im tau / 12)
            let e = Float::with_val(prec, &tau.im * &pi(prec)) / 12u32;
            (-e).exp()
        };
        // choose n_top so that the geometric tail with the |psi(n)| <= n^{3/2}
        // envelope is below tol/4
        let n_top;
        {
            let ln_rho = rho.clone().ln().to_f64();
            let target = tol.to_f64().max(1e-320).ln() - 3.0;
            let mut n = 48u64;
            loop {
                let bound = 1.5 * (n as f64).ln() + (n as f64) * ln_rho
                    + (12.0 * self.consts.c_const.to_f64() / self.consts.pi.to_f64()).ln()
                    - (1.0 - rho.to_f64().min(0.999_999)).ln();
                if bound < target {
                    n_top = n;
                    break;
                }
                n += 24;
                if n > self.n_cap {
                    return Err(HexpError::PrecisionExhausted);
                }
            }
        }
        let mut out = self.series_sum(tau, n_top, weighted);
        // tail bound: sum_{n > n_top} n^{3/2} rho^n <= rho^{n_top+1}
        // (n_top+1)^{3/2} / (1 - r), r = rho (1 + 1/n_top)^{3/2}
        let r = Float::with_val(32, &rho)
            * Float::with_val(32, 1.0 + 1.0 / n_top as f64).pow(Float::with_val(32, 1.5));
        let tail = if r < 1 {
            let top = Float::with_val(32, &rho).pow(Float::with_val(32, (n_top + 1) as f64))
                * Float::with_val(32, (n_top + 1) as f64).pow(Float::with_val(32, 1.5));
            let scale = Float::with_val(32, 12.0 * self.consts.c_const.to_f64() / self.consts.pi.to_f64());
            top * scale / (Float::with_val(32, 1u32) - r)
        } else {
            return Err(HexpError::PrecisionExhausted);
        };
        out.err += tail;
        if out.err.clone() > *tol {
            return Err(HexpError::PrecisionExhausted);
        }
        Ok(out)
    }

    /// eta^4 by the product q^{1/6} prod (1 - q^k)^4 (cross-check route).
    pub fn eta4_product(&self, tau: &CVal, tol: &Float) -> Result<CVal, HexpError> {
        if !(tau.im.is_sign_positive() && !tau.im.is_zero()) {
            return Err(HexpError::RegionError);
        }
        let prec = self.prec();
        let w = self.q24(tau); // q^{1/24}
        let q = {
            let w2 = w.mul(&w);
            let w4 = w2.mul(&w2);
            let w8 = w4.mul(&w4);
            let w16 = w8.mul(&w8);
            w16.mul(&w8) // q = w^24
        };
        let absq = q.abs().to_f64();
        if absq >= 0.999 {
            return Err(HexpError::PrecisionExhausted);
        }
        let k_top = ((tol.to_f64().max(1e-320).ln() - 3.0) / absq.ln()).ceil() as u64 + 8;
        let mut prod = CVal::new(Float::with_val(prec, 1u32), Float::new(prec));
        let one = CVal::new(Float::with_val(prec, 1u32), Float::new(prec));
        let mut qk = q.clone();
        for _ in 1..=k_top {
            let f = one.sub(&qk);
            let f2 = f.mul(&f);
            prod = prod.mul(&f2.mul(&f2));
            qk = qk.mul(&q);
        }
        // truncation of the product: relative error <= ~ 5 |q|^{k_top+1}
        let rel = Float::with_val(32, 8.0) * Float::with_val(32, absq).pow(Float::with_val(32, (k_top + 1) as f64));
        let w2 = w.mul(&w);
        let q16 = w2.mul(&w2); // q^{1/6} = w^4
        let mut out = q16.mul(&prod);
        out.err += rel * out.abs_upper();
        if out.err.clone() > *tol {
            return Err(HexpError::PrecisionExhausted);
        }
        Ok(out)
    }

    /// |eta^4(tau)| anywhere in the upper half-plane, via reduction and
    /// the weight-2 transformation law.
    pub fn eta4_abs(&self, tau: &CVal, tol: &Float) -> Result<Float, HexpError> {
        let (tau0, a) = self.reduce_to_fundamental(tau);
        let v = self.eta4(&tau0, tol)?;
        // tau = A tau0: |eta^4(tau)| = |eta^4(tau0)| / |c tau0 + d|^4
        let prec = self.prec();
        let den = tau0
            .scale(&Float::with_val(prec, &a.c))
            .add(&CVal::real(Float::with_val(prec, &a.d)));
        let d2 = den.abs().pow(2u32);
        Ok(v.abs() / d2.pow(2u32))
    }

    /// Standard reduction: returns (tau0, A) with tau = A tau0 and tau0
    /// in the closed fundamental domain |Re| <= 1/2, |tau0| >= 1.
    pub fn reduce_to_fundamental(&self, tau: &CVal) -> (CVal, ProjMatrix) {
        let prec = self.prec();
        let mut z = tau.clone();
        // b maps tau to the reduced point
        let mut b = ProjMatrix::identity();
        let r = modgroup::mat_r();
        let s = modgroup::mat_s();
        let one = Float::with_val(prec, 1u32);
        for _ in 0..4 * (prec as usize + 64) {
            let n = z.re.clone().round();
            if !n.is_zero() {
                let ni = n.to_integer().expect("finite real part");
                z.re -= Float::with_val(prec, &ni);
                b = r.pow(-ni.to_i64().unwrap_or(i64::MAX)).mul(&b);
            }
            let norm = Float::with_val(prec, z.re.clone().square() + z.im.clone().square());
            if norm >= one {
                break;
            }
            // z -> -1/z
            z = z.recip().neg();
            b = s.mul(&b);
        }
        let a = b.inverse();
        // recompute the reduced point in one exact Moebius application
        let z0 = b.act_on_cval(tau);
        (z0, a)
    }

    /// Affine action of a hex element on values: z -> zeta6^rho z + (m u_X + n u_Y).
    pub fn affine(&self, h: &HexElement, z: &CVal) -> CVal {
        let rot = self.consts.zeta6(h.rho);
        rot.mul(z).add(&self.consts.lattice_point(h.m, h.n))
    }

    /// hexp(tau) anywhere in the upper half-plane: reduce, evaluate the
    /// series, and apply the affine action of the reducing matrix.
    pub fn hexp_eval(&self, tau: &CVal, tol: &Float) -> Result<CVal, HexpError> {
        let (tau0, a) = self.reduce_to_fundamental(tau);
        let inner_tol = Float::with_val(32, tol) / 4u32;
        let z0 = self.hexp_series(&tau0, &inner_tol)?;
        let h = modgroup::hex_image(&a);
        let out = self.affine(&h, &z0);
        if out.err.clone() > *tol {
            return Err(HexpError::PrecisionExhausted);
        }
        Ok(out)
    }

    /// Closed-form cusp value: (m, n, m u_X + n u_Y) for a/c.
    pub fn cusp_value(&self, a: &Integer, c: &Integer) -> Result<(i64, i64, CVal), HexpError> {
        let rep = modgroup::gamma_prime_rep_for_cusp(a, c)
            .map_err(|_| HexpError::NotCoprime)?;
        let h = modgroup::hex_image(&rep);
        debug_assert_eq!(h.rho, 0);
        Ok((h.m, h.n, self.consts.lattice_point(h.m, h.n)))
    }

    /// hexp(a/c + i eps) for a list of heights.
    pub fn cusp_limit_numeric(
        &self,
        a: &Integer,
        c: &Integer,
        epsilons: &[f64],
        tol: &Float,
    ) -> Result<Vec<CVal>, HexpError> {
        let g = a.clone().gcd(c);
        if g != 1 {
            return Err(HexpError::NotCoprime);
        }
        let prec = self.prec();
        let x = Float::with_val(prec, a) / Float::with_val(prec, c);
        epsilons
            .iter()
            .map(|&e| {
                let tau = CVal::new(x.clone(), Float::with_val(prec, e));
                self.hexp_eval(&tau, tol)
            })
            .collect()
    }

    /// Raw and Cesaro-averaged partial sums of the cusp series at a/c.
    pub fn cusp_series_partial(
        &self,
        a: &Integer,
        c: &Integer,
        n_max: u64,
        sample_every: u64,
    ) -> Result<CuspSeriesReport, HexpError> {
        let g = a.clone().gcd(c);
        if g != 1 {
            return Err(HexpError::NotCoprime);
        }
        if n_max > 4 * self.table.limit() {
            return Err(HexpError::Psi(PsiError::TableTooSmall(self.table.limit())));
        }
        let prec = self.prec();
        let scale = Float::with_val(prec, 12 * self.consts.c_const.clone()) / &self.consts.pi;
        // phase exp(i pi (a/c) n / 12): reduce a n mod 24 c exactly
        let modulus = Integer::from(24) * c;
        let mut running = CVal::zero(prec);
        let mut cesaro_acc = CVal::zero(prec);
        let mut samples = Vec::new();
        let mut count = 0u64;
        for n in 1..=n_max {
            if n % 24 == 4 {
                let coeff = self.table.a(n / 4)?;
                if coeff != 0 {
                    let r = (Integer::from(n) * a) % &modulus;
                    let theta = Float::with_val(prec, &r) * &self.consts.pi
                        / (Float::with_val(prec, 12) * Float::with_val(prec, c));
                    let term = unit(prec, &theta)
                        .scale(&(Float::with_val(prec, coeff) / Float::with_val(prec, n)));
                    running = running.add(&term);
                }
            }
            cesaro_acc = cesaro_acc.add(&running);
            count += 1;
            if n % sample_every == 0 || n == n_max {
                let inv = Float::with_val(prec, 1u32) / Float::with_val(prec, count);
                let part = apply_i_scale(&running.scale(&scale));
                let ces = apply_i_scale(&cesaro_acc.scale(&inv).scale(&scale));
                samples.push(CuspSeriesSample {
                    n,
                    partial: part,
                    cesaro: ces,
                });
            }
        }
        let (m, n_lat, closed) = self.cusp_value(a, c)?;
        Ok(CuspSeriesReport {
            samples,
            closed_form: closed,
            lattice: (m, n_lat),
        })
    }

    /// Samples of hexp along the geodesic ray from i to a real
    /// quadratic irrational alpha, parametrized by hyperbolic arclength.
    pub fn radial_scan(
        &self,
        alpha: &QuadSurd,
        t_max: f64,
        steps: usize,
        tol: &Float,
    ) -> RadialScan {
        let prec = self.prec();
        let af = alpha.value_float(prec);
        // circle through i and alpha with center x0 on the real axis
        let x0 = (af.clone().square() - Float::with_val(prec, 1u32))
            / (Float::with_val(prec, 2u32) * &af);
        let radius = Float::with_val(prec, &af - &x0).abs();
        let toward_pos = af > x0;
        // angle at i: cos = -x0/r, sin = 1/r; psi = theta (or pi - theta)
        let (cos0, sin0) = (
            Float::with_val(prec, -&x0) / &radius,
            Float::with_val(prec, 1u32) / &radius,
        );
        let cos_psi0 = if toward_pos { cos0 } else { -cos0 };
        // tan(psi0/2) = sin / (1 + cos)
        let tanh0 = Float::with_val(prec, &sin0 / (Float::with_val(prec, 1u32) + &cos_psi0));
        let mut samples = Vec::with_capacity(steps + 1);
        let mut deepest = 0.0f64;
        let mut exhausted = false;
        for k in 0..=steps {
            let t = t_max * k as f64 / steps as f64;
            let u = Float::with_val(prec, &tanh0) * Float::with_val(prec, -t).exp();
            let u2 = u.clone().square();
            let den = Float::with_val(prec, 1u32) + &u2;
            let sin_psi = Float::with_val(prec, 2u32) * &u / &den;
            let cos_psi = (Float::with_val(prec, 1u32) - &u2) / &den;
            let cos_t = if toward_pos { cos_psi } else { -cos_psi };
            let tau = CVal::new(
                Float::with_val(prec, &x0 + Float::with_val(prec, &radius * &cos_t)),
                Float::with_val(prec, &radius * &sin_psi),
            );
            match self.hexp_eval(&tau, tol) {
                Ok(v) => {
                    samples.push(RadialSample {
                        t,
                        modulus: v.abs(),
                        argument: v.arg(),
                        value: v,
                    });
                    deepest = t;
                }
                Err(_) => {
                    exhausted = true;
                    break;
                }
            }
        }
        RadialScan {
            samples,
            deepest_certified_t: deepest,
            exhausted,
        }
    }

    /// Quadrature checks of the closed-form constants.
    pub fn check_constants(&self, area_check: bool) -> ConstantsReport {
        let prec = self.prec();
        let tol = Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 24));
        // varpi0 = 2 int_1^inf dx / sqrt(4x^3 - 4), split and smoothed:
        //   2 int_0^1 ds/sqrt(s^4 + 3 s^2 + 3) + 2 int_0^1 du/sqrt(3 u^4 + 3 u^2 + 1)
        let zero = Float::new(prec);
        let one = Float::with_val(prec, 1u32);
        let (i1, e1) = crate::num::tanh_sinh(
            |s: &Float| {
                let s2 = s.clone().square();
                let v = s2.clone().square() + 3u32 * s2 + 3u32;
                v.sqrt().recip()
            },
            &zero,
            &one,
            prec,
            &tol,
            11,
        );
        let (i2, e2) = crate::num::tanh_sinh(
            |u: &Float| {
                let u2 = u.clone().square();
                let v = 3u32 * u2.clone().square() + 3u32 * u2 + 1u32;
                v.sqrt().recip()
            },
            &zero,
            &one,
            prec,
            &tol,
            11,
        );
        let varpi_quad = Float::with_val(prec, 2u32) * (i1 + i2);
        let varpi_err = Float::with_val(prec, e1 + e2) * 2u32;
        let omega_sq = self.consts.abs_omega0.clone().square();
        let omega_sq_target = Float::with_val(prec, 4u32) * &self.consts.pi / &self.consts.sqrt3;
        let area = if area_check {
            Some(self.area_quadrature())
        } else {
            None
        };
        ConstantsReport {
            varpi_quadrature: varpi_quad,
            varpi_quadrature_err: varpi_err,
            varpi_closed: self.consts.varpi0.clone(),
            omega_sq,
            omega_sq_target,
            area_quadrature: area,
            area_expected: self.consts.pi.clone() / self.consts.c_const.clone().square(),
        }
    }

    /// Coarse euclidean integral of |eta^4|^2 over the ideal triangle
    /// (0, 1, inf): x in [0,1], y from the unit semicircle upward.
    fn area_quadrature(&self) -> Float {
        let prec = 64.max(self.prec().min(96));
        let small = Evaluator::new(prec);
        let tol = Float::with_val(prec, 1e-12);
        let quad_tol = Float::with_val(prec, 1e-6);
        let zero = Float::new(prec);
        let one = Float::with_val(prec, 1u32);
        let decay = Float::with_val(prec, 2.0 * std::f64::consts::PI / 3.0);
        let (v, _e) = crate::num::tanh_sinh(
            |x: &Float| {
                // y_min on |tau - 1/2| = 1/2: sqrt(x - x^2)
                let ymin2 = Float::with_val(prec, x - x.clone().square());
                if !ymin2.is_sign_positive() {
                    return Float::new(prec);
                }
                let ymin = ymin2.sqrt();
                let ytop = Float::with_val(prec, &ymin + Float::with_val(prec, 14.0));
                let (inner, _ie) = crate::num::tanh_sinh(
                    |y: &Float| {
                        let tau = CVal::new(x.clone(), y.clone());
                        match small.eta4_abs(&tau, &tol) {
                            Ok(m) => m.square(),
                            Err(_) => Float::new(prec),
                        }
                    },
                    &ymin,
                    &ytop,
                    prec,
                    &quad_tol,
                    7,
                );
                // exponential tail above ytop
                let tailf = {
                    let tau = CVal::new(x.clone(), ytop.clone());
                    small
                        .eta4_abs(&tau, &tol)
                        .map(|m| m.square() / &decay)
                        .unwrap_or_else(|_| Float::new(prec))
                };
                inner + tailf
            },
            &zero,
            &one,
            prec,
            &quad_tol,
            7,
        );
        Float::with_val(self.prec(), v)
    }
}

fn apply_i_scale(s: &CVal) -> CVal {
    // multiply by 1/i = -i
    CVal::new(s.im.clone(), -s.re.clone()).with_err(s.err.clone())
}

/// Argument prediction for the escape direction of a homology class:
/// arg(m u_X + n u_Y).
pub fn direction_arg(consts: &Constants, m: i64, n: i64) -> Result<Float, HexpError> {
    if m == 0 && n == 0 {
        return Err(HexpError::ZeroTranslation);
    }
    Ok(consts.lattice_point(m, n).arg())
}

#[derive(Clone, Debug)]
pub struct CuspSeriesSample {
    pub n: u64,
    pub partial: CVal,
    pub cesaro: CVal,
}

#[derive(Clone, Debug)]
pub struct CuspSeriesReport {
    pub samples: Vec<CuspSeriesSample>,
    pub closed_form: CVal,
    pub lattice: (i64, i64),
}

#[derive(Clone, Debug)]
pub struct RadialSample {
    pub t: f64,
    pub modulus: Float,
    pub argument: Float,
    pub value: CVal,
}

#[derive(Clone, Debug)]
pub struct RadialScan {
    pub samples: Vec<RadialSample>,
    pub deepest_certified_t: f64,
    pub exhausted: bool,
}

#[derive(Clone, Debug)]
pub struct ConstantsReport {
    pub varpi_quadrature: Float,
    pub varpi_quadrature_err: Float,
    pub varpi_closed: Float,
    pub omega_sq: Float,
    pub omega_sq_target: Float,
    pub area_quadrature: Option<Float>,
    pub area_expected: Float,
}

/// Unwrap a sequence of angles to a continuous branch (f64 scale).
pub fn unwrap_angles(raw: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(raw.len());
    let mut offset = 0.0f64;
    for (i, &a) in raw.iter().enumerate() {
        if i > 0 {
            let prev = out[i - 1] - offset * 0.0; // previous unwrapped
            let mut cand = a + offset;
            while cand - prev > std::f64::consts::PI {
                offset -= 2.0 * std::f64::consts::PI;
                cand = a + offset;
            }
            while cand - prev < -std::f64::consts::PI {
                offset += 2.0 * std::f64::consts::PI;
                cand = a + offset;
            }
            out.push(cand);
        } else {
            out.push(a);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modgroup::{mat_r, mat_s, mat_t, mat_x};

    fn ev() -> Evaluator {
        Evaluator::new(192)
    }

    #[test]
    fn constants_numeric_values() {
        let c = Constants::new(128);
        assert!((c.abs_omega0.to_f64() - 2.693_549_478_764_671).abs() < 1e-12);
        assert!((c.c_const.to_f64() - 4.023_351_089_1).abs() < 1e-9);
        assert!((c.varpi0.to_f64() - 2.428_650_648).abs() < 1e-8);
        // |omega0|^2 = 4 pi / sqrt 3 exactly (both closed forms)
        let lhs = c.abs_omega0.clone().square();
        let rhs = Float::with_val(128, 4u32) * &c.pi / &c.sqrt3;
        assert!((lhs - rhs).abs().to_f64() < 1e-30);
        // u_X + u_Y is real, u_X - u_Y = omega0
        let s = c.u_x().add(&c.u_y());
        assert!(s.im.to_f64().abs() < 1e-30);
        let d = c.u_x().sub(&c.u_y());
        let w = c.omega0();
        assert!(d.sub(&w).abs().to_f64() < 1e-30);
    }

    #[test]
    fn eta4_two_routes_agree() {
        let e = ev();
        let tol = Float::with_val(192, 1e-40);
        for (re, im) in [(0.0, 2.0), (0.3, 1.1), (-0.45, 0.8)] {
            let tau = CVal::from_f64(192, re, im);
            let a = e.eta4(&tau, &tol).unwrap();
            let b = e.eta4_product(&tau, &tol).unwrap();
            let diff = a.sub(&b).abs().to_f64();
            assert!(diff < 1e-38, "diff {diff} at {re}+{im}i");
        }
    }

    #[test]
    fn eta4_leading_behavior() {
        let e = ev();
        let tol = Float::with_val(192, 1e-30);
        // eta^4 ~ q^{1/6} as Im tau -> inf
        let tau = CVal::from_f64(192, 0.0, 12.0);
        let v = e.eta4(&tau, &tol).unwrap();
        let q16 = (-Float::with_val(192, 2.0 * std::f64::consts::PI * 12.0 / 6.0)).exp();
        let rel = (v.abs() - &q16).abs() / q16;
        assert!(rel.to_f64() < 1e-6);
    }

    #[test]
    fn hexp_vanishes_at_infinity() {
        let e = ev();
        let tol = Float::with_val(192, 1e-30);
        let tau = CVal::from_f64(192, 0.0, 30.0);
        let v = e.hexp_series(&tau, &tol).unwrap();
        assert!(v.abs().to_f64() < 1e-12);
    }

    #[test]
    fn series_identity_at_i() {
        // 2 hexp(i) = omega0
        let e = ev();
        let tau = CVal::from_f64(192, 0.0, 1.0);
        let v = e.hexp_series_truncated(&tau, 2000);
        let two_v = v.add(&v);
        let diff = two_v.sub(&e.consts.omega0()).abs().to_f64();
        assert!(diff < 1e-12, "2 hexp(i) - omega0 = {diff}");
    }

    #[test]
    fn equivariance_on_generators() {
        let e = ev();
        let tol = Float::with_val(192, 1e-35);
        let tau = CVal::from_f64(192, 0.0, 2.0);
        let base = e.hexp_series(&tau, &tol).unwrap();
        // R: hexp(tau + 1) = zeta6 hexp(tau) (phi(R) is a pure rotation)
        let tr = CVal::from_f64(192, 1.0, 2.0);
        let lhs = e.hexp_series(&tr, &tol).unwrap();
        let rhs = e.affine(&modgroup::hex_image(&mat_r()), &base);
        assert!(lhs.sub(&rhs).abs().to_f64() < 1e-30);
        // S: hexp(-1/tau) = -hexp(tau) + omega0
        let ts = mat_s().act_on_cval(&tau);
        let lhs = e.hexp_series(&ts, &tol).unwrap();
        let rhs = e.affine(&modgroup::hex_image(&mat_s()), &base);
        assert!(lhs.sub(&rhs).abs().to_f64() < 1e-30, "S affine action");
        // T
        let tt = mat_t().act_on_cval(&tau);
        let lhs = e.hexp_series(&tt, &tol).unwrap();
        let rhs = e.affine(&modgroup::hex_image(&mat_t()), &base);
        assert!(lhs.sub(&rhs).abs().to_f64() < 1e-30, "T affine action");
        // X translation: hexp(X tau) - hexp(tau) = u_X
        let tx = mat_x().act_on_cval(&tau);
        let lhs = e.hexp_eval(&tx, &Float::with_val(192, 1e-25)).unwrap();
        let diff = lhs.sub(&base).sub(&e.consts.u_x()).abs().to_f64();
        assert!(diff < 1e-20, "u_X translation, err {diff}");
    }

    #[test]
    fn reduction_and_eval_consistency() {
        let e = ev();
        let tol = Float::with_val(192, 1e-30);
        // points already in the domain reduce trivially
        let tau = CVal::from_f64(192, 0.2, 1.5);
        let (t0, a) = e.reduce_to_fundamental(&tau);
        assert!(a.is_identity());
        assert!(t0.sub(&tau).abs().to_f64() < 1e-40);
        // tau = i + 5 reduces by R^5
        let tau = CVal::from_f64(192, 5.0, 1.0);
        let (t0, a) = e.reduce_to_fundamental(&tau);
        assert_eq!(a, mat_r().pow(5));
        assert!((t0.im.to_f64() - 1.0).abs() < 1e-30);
        // eval equals series on the direct region
        for (re, im) in [(0.1, 1.3), (-0.3, 2.2), (0.45, 1.0)] {
            let tau = CVal::from_f64(192, re, im);
            let a = e.hexp_eval(&tau, &tol).unwrap();
            let b = e.hexp_series(&tau, &tol).unwrap();
            assert!(a.sub(&b).abs().to_f64() < 1e-25);
        }
    }

    #[test]
    fn cusp_values_basic() {
        let e = ev();
        let (m, n, v) = e
            .cusp_value(&Integer::from(1), &Integer::from(0))
            .unwrap();
        assert_eq!((m, n), (0, 0));
        assert!(v.abs().to_f64() < 1e-40);
        let (m, n, v) = e
            .cusp_value(&Integer::from(0), &Integer::from(1))
            .unwrap();
        assert_eq!((m, n), (1, -1));
        assert!(v.sub(&e.consts.omega0()).abs().to_f64() < 1e-40);
        assert!(e
            .cusp_value(&Integer::from(2), &Integer::from(4))
            .is_err());
    }

    #[test]
    fn cusp_limit_converges() {
        let e = ev();
        let tol = Float::with_val(192, 1e-20);
        let vals = e
            .cusp_limit_numeric(&Integer::from(0), &Integer::from(1), &[1e-3], &tol)
            .unwrap();
        let diff = vals[0].sub(&e.consts.omega0()).abs().to_f64();
        assert!(diff < 1e-8, "vertical limit at 0: {diff}");
    }

    #[test]
    fn lattice_rounding() {
        let c = Constants::new(128);
        let z = c.lattice_point(3, -2);
        let (m, n, dist) = c.nearest_lattice(&z);
        assert_eq!((m, n), (3, -2));
        assert!(dist.to_f64() < 1e-28);
        let z2 = z.add(&CVal::from_f64(128, 0.01, -0.02));
        let (m, n, dist) = c.nearest_lattice(&z2);
        assert_eq!((m, n), (3, -2));
        assert!(dist.to_f64() < 0.03);
    }

    #[test]
    fn varpi_quadrature_matches() {
        let e = Evaluator::new(128);
        let rep = e.check_constants(false);
        let diff = (rep.varpi_quadrature.clone() - &rep.varpi_closed)
            .abs()
            .to_f64();
        assert!(diff < 1e-12, "varpi quadrature diff {diff}");
        let od = (rep.omega_sq.clone() - &rep.omega_sq_target).abs().to_f64();
        assert!(od < 1e-14);
    }
}
