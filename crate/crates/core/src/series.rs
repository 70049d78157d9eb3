//! Truncated power series and the stationary-phase coefficient engine.
//!
//! A [`Series`] of order `n` carries the coefficients of `h^0 .. h^n` and all
//! arithmetic is exact up to that order. The expansion variable of every
//! exported invariant is `h = iπ/K`, so coefficients stay real even though
//! `h` itself is imaginary.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::numtheory::factorial;
use crate::scalar::{imag_unit, RealScalar, Scalar};
use crate::{Error, Rational, Result};

#[derive(Clone, PartialEq)]
pub struct Series<T> {
    coeffs: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Series<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series{:?}", self.coeffs)
    }
}

impl<T: Scalar> Series<T> {
    /// The zero series of the given order.
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![T::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = T::one();
        s
    }

    /// Builds a series from coefficients, padding or truncating to `order`.
    pub fn from_coeffs(mut coeffs: Vec<T>, order: usize) -> Self {
        coeffs.resize(order + 1, T::zero());
        Self { coeffs }
    }

    /// `c h^k` truncated at `order`.
    pub fn monomial(c: T, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn set_coeff(&mut self, k: usize, c: T) {
        if k < self.coeffs.len() {
            self.coeffs[k] = c;
        }
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs.clone(), order)
    }

    fn common_order(&self, other: &Self, op: &str) -> usize {
        let (a, b) = (self.order(), other.order());
        if a != b {
            log::warn!(
                "series {op}: orders {a} and {b} differ, truncating to {}",
                a.min(b)
            );
        }
        a.min(b)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.common_order(other, "add");
        Self {
            coeffs: (0..=n)
                .map(|k| self.coeffs[k].clone() + other.coeffs[k].clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.common_order(other, "sub");
        Self {
            coeffs: (0..=n)
                .map(|k| self.coeffs[k].clone() - other.coeffs[k].clone())
                .collect(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| -a.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.common_order(other, "mul");
        let mut out = vec![T::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self { coeffs: out }
    }

    /// Formal derivative in the expansion variable; the order drops by one
    /// unless the series is constant.
    fn derivative_coeffs(&self) -> Vec<T> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * T::from_i64(k as i64))
            .collect()
    }

    /// `exp(self)`; the constant term must vanish.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::SeriesDomain(
                "exp requires a vanishing constant term".into(),
            ));
        }
        let n = self.order();
        let d = self.derivative_coeffs();
        let mut g = vec![T::zero(); n + 1];
        g[0] = T::one();
        // g' = f' g
        for k in 1..=n {
            let mut acc = T::zero();
            for j in 1..=k {
                acc = acc + d[j - 1].clone() * g[k - j].clone();
            }
            g[k] = acc / T::from_i64(k as i64);
        }
        Ok(Self { coeffs: g })
    }

    /// `log(self)`; the constant term must be one.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::SeriesDomain("log requires constant term 1".into()));
        }
        let n = self.order();
        let f = &self.coeffs;
        let mut g = vec![T::zero(); n + 1];
        // f g' = f'
        for k in 1..=n {
            let mut acc = f[k].clone() * T::from_i64(k as i64);
            for j in 1..k {
                acc = acc - g[j].clone() * T::from_i64(j as i64) * f[k - j].clone();
            }
            g[k] = acc / T::from_i64(k as i64);
        }
        Ok(Self { coeffs: g })
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.coeffs[0].clone();
        if c0.is_zero() {
            return Err(Error::SeriesDomain(
                "inverse requires a nonzero constant term".into(),
            ));
        }
        let n = self.order();
        let mut g = vec![T::zero(); n + 1];
        g[0] = T::one() / c0.clone();
        for k in 1..=n {
            let mut acc = T::zero();
            for j in 1..=k {
                acc = acc + self.coeffs[j].clone() * g[k - j].clone();
            }
            g[k] = -acc / c0.clone();
        }
        Ok(Self { coeffs: g })
    }

    /// `self(inner(h))`; `inner` must have a vanishing constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::SeriesDomain(
                "composition requires inner constant term 0".into(),
            ));
        }
        let n = self.common_order(inner, "compose");
        let inner = inner.truncate(n);
        let mut out = Self::zero(n);
        let mut power = Self::one(n);
        for k in 0..=n {
            out = out.add(&power.scale(&self.coeffs[k]));
            power = power.mul(&inner);
        }
        Ok(out)
    }

    /// Compositional inverse of a series `a_1 h + a_2 h^2 + ...` with `a_1 != 0`.
    pub fn revert(&self) -> Result<Self> {
        let n = self.order();
        if !self.coeffs[0].is_zero() || n == 0 || self.coeffs[1].is_zero() {
            return Err(Error::SeriesDomain(
                "reversion needs the form a_1 h + ..., a_1 != 0".into(),
            ));
        }
        let a1 = self.coeffs[1].clone();
        let mut g = Self::monomial(T::one() / a1.clone(), 1, n);
        // Fixed point: g <- g - (f(g) - h) / a_1, one correct order per step.
        for _ in 1..n {
            let fg = self.compose(&g)?;
            let mut resid = fg;
            resid.coeffs[1] = resid.coeffs[1].clone() - T::one();
            g = g.sub(&resid.scale(&(T::one() / a1.clone())));
        }
        Ok(g)
    }

    /// Substitutes `h -> c h`.
    pub fn rescale(&self, c: &T) -> Self {
        let mut power = T::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            coeffs.push(a.clone() * power.clone());
            power = power * c.clone();
        }
        Self { coeffs }
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Series<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})h")?,
                _ => write!(f, "({c})h^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(h^{})", self.order() + 1)
    }
}

/// `Σ_{k≥0} x^k / (2k+1)!`, i.e. `sinh(√x)/√x`, as a series in `x`.
pub fn sinhc_sqrt(order: usize) -> Series<Rational> {
    Series::from_coeffs(
        (0..=order)
            .map(|k| Rational::new(1.into(), factorial(2 * k as u64 + 1)))
            .collect(),
        order,
    )
}

/// `h / sinh(h)` as a series in `h`.
///
/// With `h = iπ/K` this is `(π/K) / sin(π/K)`, the inverse quantum-dimension
/// factor of the unknot.
pub fn h_over_sinh(order: usize) -> Series<Rational> {
    // sinh(h)/h = Σ h^{2k}/(2k+1)!
    let mut coeffs = vec![Rational::zero(); order + 1];
    for k in (0..=order).step_by(2) {
        coeffs[k] = Rational::new(1.into(), factorial(k as u64 + 1));
    }
    Series::from_coeffs(coeffs, order)
        .inverse()
        .expect("constant term is 1")
}

/// `Σ S_n(S³) h^n = log((K/π) sin(π/K))`, i.e. `log(sinh(h)/h)`.
pub fn sphere_series(order: usize) -> Series<Rational> {
    h_over_sinh(order)
        .inverse()
        .and_then(|s| s.log())
        .expect("constant term is 1")
}

/// Gaussian-moment expansion `G_ev = Σ d_{m,n} a^{2m} K^{-n}` of a
/// stationary-phase integrand; entries obey `n ≥ -2m/3`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvGrid<T> {
    entries: BTreeMap<(u32, i32), T>,
}

impl<T: Scalar> Default for EvGrid<T> {
    fn default() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }
}

impl<T: Scalar> EvGrid<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts `d_{m,n}`, rejecting entries below the line `3n = -2m`.
    pub fn insert(&mut self, m: u32, n: i32, value: T) -> Result<()> {
        if 3 * n < -2 * m as i32 {
            return Err(Error::SlopeViolation {
                m,
                n,
                multi: vec![m],
                class: "ev-grid".into(),
            });
        }
        if value.is_zero() {
            self.entries.remove(&(m, n));
        } else {
            self.entries.insert((m, n), value);
        }
        Ok(())
    }

    pub fn get(&self, m: u32, n: i32) -> T {
        self.entries.get(&(m, n)).cloned().unwrap_or_else(T::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, i32), &T)> {
        self.entries.iter()
    }
}

/// Coefficients `Δ_0 .. Δ_{n_max}` of the stationary-phase expansion
/// `I(K) ∝ Σ Δ_n K^{-n}`, from the Gaussian moments
/// `Δ_n = Σ_{m=0}^{3n} (2m)!/m! (i / 2f'')^m d_{m, n-m}`.
pub fn stationary_phase_delta<T: RealScalar>(
    fpp: &T,
    grid: &EvGrid<Complex<T>>,
    n_max: usize,
) -> Result<Vec<Complex<T>>> {
    if fpp.is_zero() {
        return Err(Error::DegeneratePhase);
    }
    let two = T::from_i64(2);
    let step = imag_unit::<T>() * Complex::new(T::one() / (two * fpp.clone()), T::zero());
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max as i64 {
        let mut acc = Complex::<T>::zero();
        // m!/m! moment factor accumulated incrementally: (2m)!/m! (i/2f'')^m.
        let mut moment = Complex::<T>::one();
        for m in 0..=(3 * n) {
            if m > 0 {
                let k = T::from_i64((2 * m - 1) * 2 * m) / T::from_i64(m);
                moment = moment * step.clone() * Complex::new(k, T::zero());
            }
            let d = grid.get(m as u32, (n - m) as i32);
            if !d.is_zero() {
                acc = acc + moment.clone() * d;
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// Keys are `(power of a, power of K)`.
type Poly2 = BTreeMap<(usize, i32), Complex<Rational>>;

fn poly2_mul(a: &Poly2, b: &Poly2, max_deg: usize) -> Poly2 {
    let mut out = Poly2::new();
    for ((da, na), va) in a {
        for ((db, nb), vb) in b {
            if da + db <= max_deg {
                let e = out.entry((da + db, na + nb)).or_insert_with(Complex::zero);
                *e = e.clone() + va.clone() * vb.clone();
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// The grid of `G_ev` for the integrand `exp(iK (f(a) - f(0) - f''a²/2)) g(a, K)`.
///
/// `phase[k]` is the coefficient of `a^k` in `f` (entries below `k = 3` are
/// ignored) and `amplitude` lists `(k, n, c)` for terms `c a^k K^{-n}`,
/// `n >= 0`. Entries are produced for every `d_{m,n}` that can reach
/// `Δ_0 .. Δ_{n_max}`.
pub fn ev_grid_from_integrand(
    phase: &[Rational],
    amplitude: &[(usize, u32, Rational)],
    n_max: usize,
) -> Result<EvGrid<Complex<Rational>>> {
    let max_deg = 6 * n_max;
    let mut p = Poly2::new();
    for (k, c) in phase.iter().enumerate().skip(3) {
        if !c.is_zero() && k <= max_deg {
            // i K c a^k
            p.insert((k, 1), Complex::new(Rational::zero(), c.clone()));
        }
    }
    let mut g = Poly2::new();
    for (k, n, c) in amplitude {
        if *k <= max_deg {
            let e = g.entry((*k, -(*n as i32))).or_insert_with(Complex::zero);
            *e = e.clone() + Complex::new(c.clone(), Rational::zero());
        }
    }
    // exp(P) = Σ_j P^j / j!, and P^j has a-degree at least 3j.
    let mut total = g.clone();
    let mut power = g;
    for j in 1..=(max_deg / 3) {
        power = poly2_mul(&power, &p, max_deg);
        let inv = Rational::new(1.into(), j.into());
        power
            .values_mut()
            .for_each(|v| *v = v.clone() * Complex::new(inv.clone(), Rational::zero()));
        for (key, v) in &power {
            let e = total.entry(*key).or_insert_with(Complex::zero);
            *e = e.clone() + v.clone();
        }
    }
    let mut grid = EvGrid::new();
    for ((deg, k_pow), v) in total {
        let (m, n) = ((deg / 2) as i64, -(k_pow as i64));
        if deg % 2 == 0 && m + n <= n_max as i64 && !v.is_zero() {
            grid.insert(m as u32, n as i32, v)?;
        }
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};
    use crate::GaussianRational;

    fn q(coeffs: &[(i64, i64)], order: usize) -> Series<Rational> {
        Series::from_coeffs(coeffs.iter().map(|&(a, b)| ratio(a, b)).collect(), order)
    }

    #[test]
    fn log_of_one_plus_h_is_mercator() {
        let s = q(&[(1, 1), (1, 1)], 6);
        let l = s.log().unwrap();
        let expected: Vec<Rational> = (0..=6)
            .map(|k| {
                if k == 0 {
                    int(0)
                } else {
                    ratio(if k % 2 == 1 { 1 } else { -1 }, k)
                }
            })
            .collect();
        assert_eq!(l.coeffs(), &expected[..]);
    }

    #[test]
    fn log_of_constant_one_is_zero() {
        assert_eq!(Series::<Rational>::one(5).log().unwrap(), Series::zero(5));
    }

    #[test]
    fn exp_log_round_trip() {
        let f = Series::monomial(ratio(1, 6), 2, 8);
        assert_eq!(f.exp().unwrap().log().unwrap(), f);
    }

    #[test]
    fn domain_errors() {
        assert!(q(&[(2, 1), (1, 1)], 3).log().is_err());
        assert!(q(&[(1, 1), (1, 1)], 3).exp().is_err());
        assert!(Series::<Rational>::zero(3).inverse().is_err());
    }

    #[test]
    fn sphere_series_values() {
        let s = sphere_series(6);
        assert_eq!(s.coeff(0), int(0));
        assert_eq!(s.coeff(1), int(0));
        assert_eq!(s.coeff(2), ratio(1, 6));
        assert_eq!(s.coeff(3), int(0));
        assert_eq!(s.coeff(4), ratio(-1, 180));
        assert_eq!(s.coeff(6), ratio(1, 2835));
    }

    #[test]
    fn h_over_sinh_low_terms() {
        let s = h_over_sinh(4);
        assert_eq!(
            s.coeffs(),
            &[int(1), int(0), ratio(-1, 6), int(0), ratio(7, 360)]
        );
    }

    #[test]
    fn mismatched_orders_truncate() {
        let a = Series::<Rational>::one(3);
        let b = Series::<Rational>::one(5);
        assert_eq!(a.add(&b).order(), 3);
        assert_eq!(a.mul(&b).order(), 3);
    }

    #[test]
    fn reversion_inverts_composition() {
        let f = q(&[(0, 1), (4, 1), (4, 3), (8, 45)], 6);
        let g = f.revert().unwrap();
        let id = f.compose(&g).unwrap();
        assert_eq!(id, Series::monomial(int(1), 1, 6));
    }

    #[test]
    fn generic_over_floats() {
        let f: Series<f64> = Series::from_coeffs(vec![0.0, 0.5, 0.25], 6);
        let back = f.exp().unwrap().log().unwrap();
        for (a, b) in back.coeffs().iter().zip(f.coeffs()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    fn gr(re: Rational, im: Rational) -> GaussianRational {
        Complex::new(re, im)
    }

    #[test]
    fn stationary_phase_examples() {
        // Only m = 0 entries: Δ_n = c_n.
        let mut g = EvGrid::new();
        g.insert(0, 0, gr(int(1), int(0))).unwrap();
        g.insert(0, 2, gr(ratio(3, 7), int(0))).unwrap();
        let d = stationary_phase_delta(&int(1), &g, 3).unwrap();
        assert_eq!(d[0], gr(int(1), int(0)));
        assert_eq!(d[2], gr(ratio(3, 7), int(0)));

        let mut g = EvGrid::new();
        g.insert(1, 0, gr(int(1), int(0))).unwrap();
        let d = stationary_phase_delta(&int(1), &g, 2).unwrap();
        assert_eq!(d[1], gr(int(0), int(1)));

        let mut g = EvGrid::new();
        g.insert(2, 0, gr(int(1), int(0))).unwrap();
        let d = stationary_phase_delta(&int(1), &g, 2).unwrap();
        assert_eq!(d[2], gr(int(-3), int(0)));
    }

    #[test]
    fn integrand_grid_for_pure_cubic() {
        // exp(iK a^3) = 1 + iK a^3 - K^2 a^6/2 + ...; only even powers survive.
        let phase = vec![int(0), int(0), int(0), int(1)];
        let g = ev_grid_from_integrand(&phase, &[(0, 0, int(1))], 2).unwrap();
        assert_eq!(g.get(0, 0), gr(int(1), int(0)));
        assert_eq!(g.get(3, -2), gr(ratio(-1, 2), int(0)));
        assert_eq!(g.get(6, -4), gr(ratio(1, 24), int(0)));
        assert!(g.iter().all(|((m, n), _)| 3 * n >= -2 * *m as i32));
        // Δ_1 = (6!/3!) (i/2)^3 (-1/2) = 120 (-i/8) (-1/2) = 15i/2
        let d = stationary_phase_delta(&int(1), &g, 1).unwrap();
        assert_eq!(d[1], gr(int(0), ratio(15, 2)));
    }

    #[test]
    fn stationary_phase_rejects_degenerate_phase() {
        let g: EvGrid<GaussianRational> = EvGrid::new();
        assert_eq!(
            stationary_phase_delta(&int(0), &g, 2),
            Err(Error::DegeneratePhase)
        );
    }

    #[test]
    fn ev_grid_enforces_bound() {
        let mut g: EvGrid<GaussianRational> = EvGrid::new();
        assert!(g.insert(3, -2, gr(int(1), int(0))).is_ok());
        assert!(g.insert(1, -1, gr(int(1), int(0))).is_err());
    }

    #[test]
    fn only_entries_near_the_bound_matter() {
        // d_{m, n-m} with m > 3n sits below the bound and is never read.
        let mut g: EvGrid<GaussianRational> = EvGrid::new();
        g.insert(3, -2, gr(int(5), int(0))).unwrap();
        let d = stationary_phase_delta(&ratio(1, 2), &g, 1).unwrap();
        // (6!/3!) (i/1)^3 * 5 = 120 * (-i) * 5
        assert_eq!(d[1], gr(int(0), int(-600)));
    }
}
