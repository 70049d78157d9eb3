//! Finite-level Reshetikhin–Turaev sums for surgeries on unlinks.
//!
//! Everything here is double precision. Phases that are rational multiples of
//! `π` are reduced exactly before conversion, so the only rounding happens in
//! the final `exp` and in the sums, which use compensated summation.

use num_complex::Complex;
use num_traits::{Float, FloatConst, ToPrimitive};
use rayon::prelude::*;

use crate::numtheory::{
    complete_surgery_matrix, dedekind_sum, rademacher_phi, sign, SL2Matrix, SurgeryCoeff,
};
use crate::scalar::int;
use crate::{ComplexValue, Error, Rational, Result};

/// Level `k >= 1`, with `K = k + 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RTLevel {
    k: u32,
}

impl RTLevel {
    pub fn new(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::LevelTooSmall("k must be at least 1 (K >= 3)".into()));
        }
        Ok(Self { k })
    }

    /// The level with the given `K = k + 2`.
    pub fn from_big_k(big_k: u32) -> Result<Self> {
        if big_k < 3 {
            return Err(Error::LevelTooSmall(format!("K = {big_k}, need K >= 3")));
        }
        Ok(Self { k: big_k - 2 })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn big_k(&self) -> i64 {
        self.k as i64 + 2
    }
}

/// Compensated complex summation.
#[derive(Debug, Clone, Copy)]
pub struct KahanSum<T> {
    sum: Complex<T>,
    carry: Complex<T>,
}

impl<T: Float> Default for KahanSum<T> {
    fn default() -> Self {
        Self {
            sum: Complex::new(T::zero(), T::zero()),
            carry: Complex::new(T::zero(), T::zero()),
        }
    }
}

impl<T: Float> KahanSum<T> {
    pub fn add(&mut self, x: Complex<T>) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> Complex<T> {
        self.sum
    }
}

fn from_f64<T: Float>(x: f64) -> T {
    T::from(x).expect("f64 converts to any Float")
}

/// `exp(iπ num/den)` for integers, reducing `num` modulo `2 den` first.
fn unit_phase<T: Float + FloatConst>(num: i128, den: i128) -> Complex<T> {
    let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
    let r = num.rem_euclid(2 * den);
    let angle = T::PI() * from_f64::<T>(r as f64) / from_f64::<T>(den as f64);
    Complex::new(angle.cos(), angle.sin())
}

/// `exp(iπ x)` for rational `x`, reducing modulo 2 exactly.
fn rational_phase<T: Float + FloatConst>(x: &Rational) -> Complex<T> {
    let two = int(2);
    let reduced = x - (x / &two).floor() * &two;
    let angle = T::PI() * from_f64::<T>(reduced.to_f64().unwrap_or(f64::NAN));
    Complex::new(angle.cos(), angle.sin())
}

fn check_colors(alpha: i64, beta: i64, level: RTLevel) -> Result<()> {
    let k = level.big_k();
    if !(1..k).contains(&alpha) || !(1..k).contains(&beta) {
        return Err(Error::ColorOutOfRange {
            alpha,
            beta,
            level: k,
        });
    }
    Ok(())
}

fn finite<T: Float>(z: Complex<T>, what: &str) -> Result<Complex<T>> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite(what.into()))
    }
}

/// The `SL(2, Z)` representation matrix element
/// `Ũ_{αβ} = i sign(q)/√(2K|q|) e^{-iπΦ/4} Σ_{n=0}^{|q|-1} Σ_{μ=±1} μ exp[iπ/(2Kq) (pα² - 2α(2Kn + μβ) + s(2Kn + μβ)²)]`.
pub fn u_tilde_in<T: Float + FloatConst>(
    m: &SL2Matrix,
    alpha: i64,
    beta: i64,
    level: RTLevel,
) -> Result<Complex<T>> {
    check_colors(alpha, beta, level)?;
    if m.q == 0 {
        return Err(Error::ZeroDenominator);
    }
    let k = level.big_k() as i128;
    let (p, q, s) = (m.p as i128, m.q as i128, m.s as i128);
    let (a, b) = (alpha as i128, beta as i128);
    let den = 2 * k * q;
    let mut acc = KahanSum::<T>::default();
    for n in 0..q.abs() {
        for mu in [1i128, -1] {
            let x = 2 * k * n + mu * b;
            let num = p * a * a - 2 * a * x + s * x * x;
            let term = unit_phase::<T>(num, den);
            acc.add(if mu == 1 { term } else { -term });
        }
    }
    let phi = rademacher_phi(m)?;
    let pre_mag = T::one() / from_f64::<T>((2.0 * k as f64 * q.abs() as f64).sqrt());
    let pre = Complex::new(T::zero(), from_f64::<T>(q.signum() as f64) * pre_mag)
        * rational_phase::<T>(&(-phi / int(4)));
    finite(pre * acc.value(), "u_tilde")
}

pub fn u_tilde(m: &SL2Matrix, alpha: i64, beta: i64, level: RTLevel) -> Result<ComplexValue> {
    u_tilde_in::<f64>(m, alpha, beta, level)
}

/// The `n = 0` truncation
/// `Û_{αβ} = √(2/(K|q|)) sign(q) e^{-iπΦ/4} sin(παβ/(Kq)) exp(iπ/(2Kq) (pα² + sβ²))`,
/// using the canonical completion of `c`.
pub fn u_hat_in<T: Float + FloatConst>(
    c: SurgeryCoeff,
    alpha: i64,
    beta: i64,
    level: RTLevel,
) -> Result<Complex<T>> {
    check_colors(alpha, beta, level)?;
    let m = complete_surgery_matrix(c);
    let k = level.big_k() as i128;
    let (p, q, s) = (m.p as i128, m.q as i128, m.s as i128);
    let (a, b) = (alpha as i128, beta as i128);
    let mag = from_f64::<T>((2.0 / (k as f64 * q.abs() as f64)).sqrt())
        * from_f64::<T>(q.signum() as f64);
    let sine = (T::PI() * from_f64::<T>((a * b) as f64) / from_f64::<T>((k * q) as f64)).sin();
    let phase = rational_phase::<T>(&(-rademacher_phi(&m)? / int(4)))
        * unit_phase::<T>(p * a * a + s * b * b, 2 * k * q);
    finite(phase * (mag * sine), "u_hat")
}

pub fn u_hat(c: SurgeryCoeff, alpha: i64, beta: i64, level: RTLevel) -> Result<ComplexValue> {
    u_hat_in::<f64>(c, alpha, beta, level)
}

/// `Z(S³; k) = √(2/K) sin(π/K)`.
pub fn z_sphere(level: RTLevel) -> f64 {
    let k = level.big_k() as f64;
    (2.0 / k).sqrt() * (std::f64::consts::PI / k).sin()
}

/// `Z(M'; k)` for surgeries with explicit matrices on a split unlink in `S³`.
pub fn rt_unknot_surgery_matrices(matrices: &[SL2Matrix], level: RTLevel) -> Result<ComplexValue> {
    let k = level.big_k();
    let mut bracket = Rational::from_integer(0.into());
    let mut product = ComplexValue::new(1.0, 0.0);
    let qdim = |alpha: i64| {
        (std::f64::consts::PI * alpha as f64 / k as f64).sin()
            / (std::f64::consts::PI / k as f64).sin()
    };
    for m in matrices {
        bracket += rademacher_phi(m)? - int(3 * sign(&crate::scalar::ratio(m.p, m.q)));
        let mut acc = KahanSum::<f64>::default();
        for alpha in 1..k {
            acc.add(u_tilde(m, alpha, 1, level)? * qdim(alpha));
        }
        product *= acc.value();
    }
    // φ_fr = (π/4) (K-2)/K [Σ Φ - 3 sign L_tot]
    let phase = rational_phase::<f64>(&(bracket * Rational::new((k - 2).into(), (4 * k).into())));
    finite(phase * z_sphere(level) * product, "rt_unknot_surgery")
}

/// `Z(M'; k)` for `(p_j, q_j)` surgeries on a split unlink, canonical completions.
pub fn rt_unknot_surgery(surgeries: &[SurgeryCoeff], level: RTLevel) -> Result<ComplexValue> {
    let matrices: Vec<SL2Matrix> = surgeries
        .iter()
        .map(|&c| complete_surgery_matrix(c))
        .collect();
    rt_unknot_surgery_matrices(&matrices, level)
}

/// Trivial-connection closed form for `L(p, q)`:
/// `√(2/(K|p|)) sin(π/(K|p|)) e^{-6πi s(q,p)/K}`.
pub fn lens_trivial_contribution(p: i64, q: i64, level: RTLevel) -> Result<ComplexValue> {
    if p == 0 {
        return Err(Error::NotRationalHomologySphere);
    }
    let k = level.big_k() as f64;
    let pa = p.abs() as f64;
    let mag = (2.0 / (k * pa)).sqrt() * (std::f64::consts::PI / (k * pa)).sin();
    let phase = rational_phase::<f64>(&(int(-6) * dedekind_sum(q, p)? / int(level.big_k())));
    Ok(phase * mag)
}

/// One row of a level sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub k: u32,
    pub big_k: i64,
    pub z: ComplexValue,
    pub z_tr: ComplexValue,
    pub residual: f64,
}

/// `Z(L(p,q))` against its trivial-connection closed form over the given `K`.
pub fn lens_residual_sweep(p: i64, q: i64, big_ks: &[u32]) -> Result<Vec<SweepRow>> {
    let c = SurgeryCoeff::new(p, q)?;
    big_ks
        .par_iter()
        .map(|&bk| {
            let level = RTLevel::from_big_k(bk)?;
            let z = rt_unknot_surgery(&[c], level)?;
            let z_tr = lens_trivial_contribution(p, q, level)?;
            Ok(SweepRow {
                k: level.k(),
                big_k: level.big_k(),
                z,
                z_tr,
                residual: (z - z_tr).norm(),
            })
        })
        .collect()
}

/// Least-squares slope of `log y` against `log x`.
pub fn fit_decay_exponent(points: &[(f64, f64)]) -> Result<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if logs.len() < 2 {
        return Err(Error::Domain(
            "need at least two positive points to fit an exponent".into(),
        ));
    }
    let n = logs.len() as f64;
    let (sx, sy) = logs
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let (num, den) = logs.iter().fold((0.0, 0.0), |(a, b), (x, y)| {
        (a + (x - mx) * (y - my), b + (x - mx) * (x - mx))
    });
    if den == 0.0 {
        return Err(Error::Domain("all x values coincide".into()));
    }
    Ok(num / den)
}
