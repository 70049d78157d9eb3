//! Perturbative invariants of manifolds obtained by rational surgery.
//!
//! For a presentation `M' = χ_L(M)` with `P_j = p_j + q_j l_jj` the
//! invariants assemble as
//!
//! ```text
//! Σ S_n(M') h^n = Σ S_n(M) h^n + Δ_fr h + log(1 + Σ_{n>=1} Δ_n h^n),
//! Δ_n = Σ_m (-1)^m / 2^m Σ_{multi} d̃^{(m, n-m)}_{multi} Π_j (2m_j)!/m_j! (q_j/P_j)^{m_j},
//! ```
//!
//! where `d̃` is the shifted Jones grid. Knots are the `N = 1` case of the same
//! code path.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::jones::{shift_grid, JonesGrid, MilnorData, SlopeClass};
use crate::numtheory::{
    dedekind_sum, factorial, prime_factors, signature, FramingMatrix, SurgeryCoeff,
};
use crate::scalar::{int, ratio};
use crate::series::{sphere_series, Series};
use crate::{Error, Integer, KSeries, Rational, Result};

/// One surgery component: slope `p/q` on a component with framing `l_jj`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Component {
    pub coeff: SurgeryCoeff,
    pub framing: i64,
}

impl Component {
    pub fn new(p: i64, q: i64, framing: i64) -> Result<Self> {
        Ok(Self {
            coeff: SurgeryCoeff::new(p, q)?,
            framing,
        })
    }

    /// `P = p + q l`.
    pub fn denominator(&self) -> i64 {
        self.coeff.p() + self.coeff.q() * self.framing
    }

    /// `P / q = p/q + l`.
    pub fn total_slope(&self) -> Rational {
        self.coeff.slope() + int(self.framing)
    }

    /// `q / P`.
    pub fn inverse_slope(&self) -> Rational {
        ratio(self.coeff.q(), self.denominator())
    }
}

/// Truncated perturbative invariants of a rational homology sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct RHSInvariants {
    series: KSeries,
    ord_h1: Integer,
}

impl RHSInvariants {
    pub fn new(series: KSeries, ord_h1: Integer) -> Result<Self> {
        if !series.coeff(0).is_zero() {
            return Err(Error::Domain("S_0 must vanish".into()));
        }
        if !ord_h1.is_positive() {
            return Err(Error::Domain(format!(
                "|H_1| must be positive, found {ord_h1}"
            )));
        }
        Ok(Self { series, ord_h1 })
    }

    pub fn sphere(order: usize) -> Self {
        Self {
            series: sphere_series(order),
            ord_h1: Integer::one(),
        }
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    pub fn series(&self) -> &KSeries {
        &self.series
    }

    /// `S_n`; zero beyond the truncation order is not implied, so callers
    /// should stay within [`order`](Self::order).
    pub fn s(&self, n: usize) -> Rational {
        self.series.coeff(n)
    }

    pub fn ord_h1(&self) -> &Integer {
        &self.ord_h1
    }

    /// Casson–Walker invariant, `S_1 / 6`.
    pub fn lambda_cw(&self) -> Rational {
        self.s(1) / int(6)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self {
            series: self.series.truncate(order),
            ord_h1: self.ord_h1.clone(),
        }
    }
}

/// A surgery presentation on an algebraically split link in a base manifold.
#[derive(Debug, Clone, PartialEq)]
pub struct SurgeryPresentation {
    components: Vec<Component>,
    class: SlopeClass,
    jones: JonesGrid,
    milnor: Option<MilnorData>,
    base: RHSInvariants,
}

impl SurgeryPresentation {
    /// Validates and builds a presentation with base `S³`.
    ///
    /// `linking` is the full linking matrix; its diagonal is ignored in favor
    /// of the component framings, and its off-diagonal entries must vanish
    /// because every supported class is algebraically split.
    pub fn new(
        components: Vec<Component>,
        linking: Option<Vec<Vec<i64>>>,
        class: SlopeClass,
        jones: JonesGrid,
        milnor: Option<MilnorData>,
    ) -> Result<Self> {
        let n = components.len();
        if let Some(l) = &linking {
            if l.len() != n || l.iter().any(|row| row.len() != n) {
                return Err(Error::ComponentCount {
                    expected: n,
                    found: l.len(),
                });
            }
            for (i, j) in (0..n).tuple_combinations() {
                if l[i][j] != 0 || l[j][i] != 0 {
                    return Err(Error::ClassInconsistent(format!(
                        "{class} requires zero linking numbers, found l[{i}][{j}] = {}",
                        l[i][j]
                    )));
                }
            }
        }
        for (j, c) in components.iter().enumerate() {
            if c.denominator() == 0 {
                return Err(Error::DegenerateSurgery { component: j });
            }
        }
        if jones.components() != n {
            return Err(Error::ComponentCount {
                expected: n,
                found: jones.components(),
            });
        }
        let jones = jones.with_class(class);
        jones.validate_slope().into_result()?;
        if let Some(m) = &milnor {
            if m.components() != n {
                return Err(Error::ComponentCount {
                    expected: n,
                    found: m.components(),
                });
            }
            m.validate()?;
            m.check_class(class)?;
        }
        let base = RHSInvariants::sphere(jones.order());
        Ok(Self {
            components,
            class,
            jones,
            milnor,
            base,
        })
    }

    /// Replaces the base manifold; the Jones grid is then understood in `M`.
    pub fn with_base(mut self, base: RHSInvariants) -> Self {
        self.base = base;
        self
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn class(&self) -> SlopeClass {
        self.class
    }

    pub fn jones(&self) -> &JonesGrid {
        &self.jones
    }

    pub fn milnor(&self) -> Option<&MilnorData> {
        self.milnor.as_ref()
    }

    pub fn base(&self) -> &RHSInvariants {
        &self.base
    }

    pub fn denominators(&self) -> Vec<i64> {
        self.components.iter().map(Component::denominator).collect()
    }

    /// `L_tot` with zero linking numbers.
    pub fn total_linking(&self) -> Result<FramingMatrix> {
        let n = self.len();
        let linking: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            self.components[i].framing
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect();
        let coeffs: Vec<SurgeryCoeff> = self.components.iter().map(|c| c.coeff).collect();
        FramingMatrix::total(&linking, &coeffs)
    }

    /// The presentation on the sublink `keep` (listed order), same base.
    pub fn sublink(&self, keep: &[usize]) -> Result<Self> {
        let jones = self.jones.restrict(keep)?;
        Ok(Self {
            components: keep.iter().map(|&j| self.components[j]).collect(),
            class: self.class,
            jones,
            milnor: self.milnor.as_ref().map(|m| m.restrict(keep)),
            base: self.base.clone(),
        })
    }

    /// Reorders components: component `i` of the result is `perm[i]` here.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let mut sorted = perm.to_vec();
        sorted.sort_unstable();
        if sorted != (0..self.len()).collect::<Vec<_>>() {
            return Err(Error::Domain(format!("{perm:?} is not a permutation")));
        }
        self.sublink(perm)
    }

    /// Same link with different surgery slopes.
    pub fn with_components(&self, components: Vec<Component>) -> Result<Self> {
        if components.len() != self.len() {
            return Err(Error::ComponentCount {
                expected: self.len(),
                found: components.len(),
            });
        }
        for (j, c) in components.iter().enumerate() {
            if c.denominator() == 0 {
                return Err(Error::DegenerateSurgery { component: j });
            }
        }
        Ok(Self {
            components,
            ..self.clone()
        })
    }
}

/// `Δ_fr = (1/2) Σ_j [12 s(p_j, q_j) - P_j/q_j - 1/(q_j P_j)] + (3/2) sign(L_tot)`.
pub fn framing_correction(sp: &SurgeryPresentation) -> Result<Rational> {
    let mut total = Rational::zero();
    for c in sp.components() {
        let (p, q) = (c.coeff.p(), c.coeff.q());
        total += int(12) * dedekind_sum(p, q)? - c.total_slope() - ratio(1, q * c.denominator());
    }
    let sig = if sp.is_empty() {
        0
    } else {
        signature(&sp.total_linking()?)?
    };
    Ok((total + int(3 * sig)) / int(2))
}

/// `Δ_0 .. Δ_{n_max}` (with `Δ_0 = 1`).
pub fn delta_coefficients(sp: &SurgeryPresentation, n_max: usize) -> Result<Vec<Rational>> {
    let grid = sp.jones();
    if grid.order() < n_max {
        return Err(Error::IncompleteGrid(format!(
            "grid entries with m + n in {}..={} are required but the grid stops at order {}",
            grid.order() + 1,
            n_max,
            grid.order()
        )));
    }
    let shifted = shift_grid(&grid.truncate(n_max), &sp.denominators())?;
    let inv: Vec<Rational> = sp
        .components()
        .iter()
        .map(Component::inverse_slope)
        .collect();
    let mut delta = vec![Rational::zero(); n_max + 1];
    for (key, value) in shifted.grid().entries() {
        let w = key.m as i64 + key.n as i64;
        if w < 0 || w > n_max as i64 {
            continue;
        }
        let mut term = value.clone()
            * Rational::new(
                BigInt::from(if key.m % 2 == 0 { 1 } else { -1 }),
                BigInt::from(2).pow(key.m),
            );
        for (mj, r) in key.multi.iter().zip(&inv) {
            if *mj > 0 {
                let mj = *mj as u64;
                term *=
                    Rational::from_integer(factorial(2 * mj) / factorial(mj)) * pow(r, mj as u32);
            }
        }
        delta[w as usize] += term;
    }
    Ok(delta)
}

fn pow(r: &Rational, e: u32) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * r)
}

/// Every intermediate of the surgery formula.
#[derive(Debug, Clone, PartialEq)]
pub struct SurgeryReport {
    pub invariants: RHSInvariants,
    pub delta_fr: Rational,
    pub delta: Vec<Rational>,
}

pub fn surgery_report(sp: &SurgeryPresentation, n_max: usize) -> Result<SurgeryReport> {
    if sp.base().order() < n_max {
        return Err(Error::IncompleteGrid(format!(
            "base invariants known to order {}, {} requested",
            sp.base().order(),
            n_max
        )));
    }
    let delta_fr = framing_correction(sp)?;
    let delta = delta_coefficients(sp, n_max)?;
    let log = Series::from_coeffs(delta.clone(), n_max).log()?;
    let series = sp
        .base()
        .series()
        .truncate(n_max)
        .add(&log)
        .add(&Series::monomial(delta_fr.clone(), 1, n_max));
    let mut ord = sp.base().ord_h1().clone();
    for c in sp.components() {
        ord *= BigInt::from(c.denominator()).abs();
    }
    Ok(SurgeryReport {
        invariants: RHSInvariants::new(series, ord)?,
        delta_fr,
        delta,
    })
}

pub fn perturbative_invariants(sp: &SurgeryPresentation, n_max: usize) -> Result<RHSInvariants> {
    Ok(surgery_report(sp, n_max)?.invariants)
}

/// Closed form for `L(p, q)`: `S_1 = -6 s(q, p)` and `S_n = S_n(S³)/p^n` for `n >= 2`.
pub fn lens_space_invariants(p: i64, q: i64, n_max: usize) -> Result<RHSInvariants> {
    if p == 0 {
        return Err(Error::NotRationalHomologySphere);
    }
    let s1 = int(-6) * dedekind_sum(q, p)?;
    let sphere = sphere_series(n_max);
    let coeffs = (0..=n_max)
        .map(|n| match n {
            0 => Rational::zero(),
            1 => s1.clone(),
            _ => sphere.coeff(n) / pow(&int(p), n as u32),
        })
        .collect();
    RHSInvariants::new(Series::from_coeffs(coeffs, n_max), BigInt::from(p).abs())
}

/// `S_n(M_1 # M_2) = S_n(M_1) + S_n(M_2) - S_n(S³)`.
pub fn connected_sum(a: &RHSInvariants, b: &RHSInvariants) -> RHSInvariants {
    let order = a.order().min(b.order());
    if a.order() != b.order() {
        log::warn!(
            "connected sum: orders {} and {} differ, truncating to {order}",
            a.order(),
            b.order()
        );
    }
    let series = a
        .series()
        .truncate(order)
        .add(&b.series().truncate(order))
        .sub(&sphere_series(order));
    RHSInvariants {
        series,
        ord_h1: a.ord_h1() * b.ord_h1(),
    }
}

/// `S_1` from `φ_1` data alone:
/// `S_1(M) + Δ_fr + 12 [Σ_j (φ_1(L_j) - 1/24) q_j/P_j + Σ_{i<j} φ_1(L_i, L_j) Π q/P + Σ_{i<j<k} φ_1(L_i, L_j, L_k) Π q/P]`.
pub fn phi1_s1(sp: &SurgeryPresentation) -> Result<Rational> {
    let base = sp.base().s(1);
    if sp.is_empty() {
        return Ok(base);
    }
    let m = sp.milnor().ok_or_else(|| {
        Error::MissingPhi1("the presentation carries no Milnor/phi_1 data".into())
    })?;
    let r: Vec<Rational> = sp
        .components()
        .iter()
        .map(Component::inverse_slope)
        .collect();
    let n = sp.len();
    let mut bracket = Rational::zero();
    for j in 0..n {
        bracket += (m.phi1_single(j) - ratio(1, 24)) * &r[j];
    }
    for (i, j) in (0..n).tuple_combinations() {
        bracket += m.phi1_pair(i, j) * &r[i] * &r[j];
    }
    for (i, j, k) in (0..n).tuple_combinations() {
        bracket += m.phi1_triple(i, j, k) * &r[i] * &r[j] * &r[k];
    }
    Ok(base + framing_correction(sp)? + int(12) * bracket)
}

/// Casson–Walker invariant from [`phi1_s1`].
pub fn phi1_lambda_cw(sp: &SurgeryPresentation) -> Result<Rational> {
    Ok(phi1_s1(sp)? / int(6))
}

/// Outcome of [`integerize`].
#[derive(Debug, Clone, PartialEq)]
pub struct IntegerizeReport {
    pub n: usize,
    pub value: Rational,
    pub integral: bool,
}

/// `2^{3n} n! (2n)! (9n)!` as a big integer.
pub fn integerization_factor(n: usize) -> Integer {
    let n64 = n as u64;
    BigInt::from(2).pow(3 * n as u32) * factorial(n64) * factorial(2 * n64) * factorial(9 * n64)
}

/// `2^{3n} n! (2n)! (9n)! |H_1|^n S_n`, with an integrality flag.
pub fn integerize(inv: &RHSInvariants, n: usize) -> Result<IntegerizeReport> {
    integerize_value(inv, n, inv.s(n))
}

/// The same normalization applied to `S_n(M) - S_n(S³)`.
pub fn integerize_relative(inv: &RHSInvariants, n: usize) -> Result<IntegerizeReport> {
    integerize_value(inv, n, inv.s(n) - sphere_series(n).coeff(n))
}

fn integerize_value(inv: &RHSInvariants, n: usize, s: Rational) -> Result<IntegerizeReport> {
    if n > inv.order() {
        return Err(Error::Domain(format!(
            "n = {n} exceeds the truncation order {}",
            inv.order()
        )));
    }
    let factor = integerization_factor(n) * inv.ord_h1().pow(n as u32);
    let value = Rational::from_integer(factor) * s;
    let integral = value.is_integer();
    if !integral {
        log::warn!("integerized S_{n} = {value} is not an integer");
    }
    Ok(IntegerizeReport { n, value, integral })
}

/// Outcome of [`denominator_bound_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct DenominatorReport {
    pub n: usize,
    pub value: Rational,
    pub primes: Vec<Integer>,
    pub passed: bool,
}

/// Checks that every prime dividing the denominator of `|H_1|^n S_n` is at most `2n`.
pub fn denominator_bound_check(inv: &RHSInvariants, n: usize) -> Result<DenominatorReport> {
    if n > inv.order() {
        return Err(Error::Domain(format!(
            "n = {n} exceeds the truncation order {}",
            inv.order()
        )));
    }
    let value = Rational::from_integer(inv.ord_h1().pow(n as u32)) * inv.s(n);
    let primes = prime_factors(value.denom());
    let bound = BigInt::from(2 * n);
    let passed = primes.iter().all(|p| *p <= bound);
    Ok(DenominatorReport {
        n,
        value,
        primes,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jones::{asl_low_order_grid, unknot_grid, unlink_grid};
    use crate::series::{stationary_phase_delta, EvGrid};
    use crate::GaussianRational;
    use num_complex::Complex;

    fn knot(p: i64, q: i64, framing: i64, order: usize) -> SurgeryPresentation {
        SurgeryPresentation::new(
            vec![Component::new(p, q, framing).unwrap()],
            None,
            SlopeClass::Bl,
            unknot_grid(order),
            None,
        )
        .unwrap()
    }

    fn borromean(qs: [i64; 3], order: usize) -> SurgeryPresentation {
        let mut m = MilnorData::new(3);
        m.set_triple(0, 1, 2, 1).unwrap();
        let grid = asl_low_order_grid(&m, order).unwrap();
        let comps = qs
            .iter()
            .map(|&q| Component::new(1, q, 0).unwrap())
            .collect();
        SurgeryPresentation::new(comps, None, SlopeClass::Asl, grid, Some(m)).unwrap()
    }

    #[test]
    fn framing_correction_examples() {
        for q in [-5, -2, -1, 1, 2, 3, 7] {
            assert_eq!(
                framing_correction(&knot(1, q, 0, 1)).unwrap(),
                ratio(q, 2),
                "q = {q}"
            );
        }
        assert_eq!(framing_correction(&knot(2, 1, 0, 1)).unwrap(), ratio(1, 4));
        assert_eq!(framing_correction(&knot(3, 1, 0, 1)).unwrap(), ratio(-1, 6));
    }

    #[test]
    fn delta_examples() {
        for (p, q) in [(3, 1), (5, 2), (-7, 3)] {
            let d = delta_coefficients(&knot(p, q, 0, 3), 3).unwrap();
            assert_eq!(d[0], int(1));
            assert_eq!(d[1], ratio(-q, 2 * p));
        }
        let trivial = SurgeryPresentation::new(
            vec![Component::new(3, 2, 0).unwrap()],
            None,
            SlopeClass::Bl,
            JonesGrid::trivial(1, SlopeClass::Bl, 4),
            None,
        )
        .unwrap();
        assert_eq!(
            delta_coefficients(&trivial, 4).unwrap(),
            vec![int(1), int(0), int(0), int(0), int(0)]
        );
    }

    #[test]
    fn incomplete_grid_is_reported() {
        assert!(matches!(
            delta_coefficients(&knot(3, 1, 0, 2), 3),
            Err(Error::IncompleteGrid(_))
        ));
    }

    #[test]
    fn borromean_delta_one() {
        let sp = SurgeryPresentation::new(
            vec![
                Component::new(2, 1, 0).unwrap(),
                Component::new(3, -1, 0).unwrap(),
                Component::new(5, 2, 0).unwrap(),
            ],
            None,
            SlopeClass::Asl,
            borromean([1, 1, 1], 1).jones().clone(),
            None,
        )
        .unwrap();
        let d = delta_coefficients(&sp, 1).unwrap();
        let unlink_part: Rational = [ratio(1, 2), ratio(-1, 3), ratio(2, 5)]
            .iter()
            .map(|r| r * ratio(-1, 2))
            .sum();
        assert_eq!(
            d[1],
            int(12) * ratio(1, 2) * ratio(-1, 3) * ratio(2, 5) + unlink_part
        );
    }

    #[test]
    fn unknot_surgery_examples() {
        assert_eq!(
            perturbative_invariants(&knot(3, 1, 0, 2), 2).unwrap().s(1),
            ratio(-1, 3)
        );
        assert_eq!(
            perturbative_invariants(&knot(2, 1, 0, 2), 2).unwrap().s(1),
            int(0)
        );
        for q in [-3, -1, 1, 4] {
            let inv = perturbative_invariants(&knot(1, q, 0, 6), 6).unwrap();
            assert_eq!(inv.series(), &sphere_series(6), "q = {q}");
            assert_eq!(inv.ord_h1(), &BigInt::one());
        }
    }

    #[test]
    fn lens_examples() {
        assert_eq!(
            lens_space_invariants(1, 1, 6).unwrap(),
            RHSInvariants::sphere(6)
        );
        let l31 = lens_space_invariants(3, 1, 4).unwrap();
        assert_eq!((l31.s(1), l31.s(2)), (ratio(-1, 3), ratio(1, 54)));
        let l21 = lens_space_invariants(2, 1, 4).unwrap();
        assert_eq!((l21.s(1), l21.s(2)), (int(0), ratio(1, 24)));
        assert_eq!(
            lens_space_invariants(0, 1, 2),
            Err(Error::NotRationalHomologySphere)
        );
    }

    #[test]
    fn lens_two_path_with_framing() {
        // (p, q) surgery with framing l is the lens space of slope p/q + l.
        for (p, q, l) in [(3, 1, 1), (5, 2, -1), (7, 3, 2)] {
            let via_surgery = perturbative_invariants(&knot(p, q, l, 5), 5).unwrap();
            assert_eq!(via_surgery, lens_space_invariants(p + q * l, q, 5).unwrap());
        }
    }

    #[test]
    fn connected_sum_examples() {
        let l2 = lens_space_invariants(2, 1, 3).unwrap();
        let l3 = lens_space_invariants(3, 1, 3).unwrap();
        assert_eq!(connected_sum(&l2, &RHSInvariants::sphere(3)), l2);
        let sum = connected_sum(&l2, &l3);
        assert_eq!(sum.s(1), ratio(-1, 3));
        assert_eq!(sum.s(2), ratio(1, 24) + ratio(1, 54) - ratio(1, 6));
        assert_eq!(sum.ord_h1(), &BigInt::from(6));
    }

    #[test]
    fn split_unlink_is_connected_sum() {
        let sp = SurgeryPresentation::new(
            vec![
                Component::new(2, 1, 0).unwrap(),
                Component::new(3, 1, 0).unwrap(),
            ],
            None,
            SlopeClass::Bl,
            unlink_grid(2, 4),
            None,
        )
        .unwrap();
        let inv = perturbative_invariants(&sp, 4).unwrap();
        let expected = connected_sum(
            &lens_space_invariants(2, 1, 4).unwrap(),
            &lens_space_invariants(3, 1, 4).unwrap(),
        );
        assert_eq!(inv, expected);
    }

    #[test]
    fn borromean_s1_two_routes() {
        for qs in [[1, 1, 1], [2, -3, 1], [-1, -2, 3]] {
            let sp = borromean(qs, 1);
            let s1 = perturbative_invariants(&sp, 1).unwrap().s(1);
            let expected = int(12 * qs[0] * qs[1] * qs[2]);
            assert_eq!(s1, expected);
            assert_eq!(phi1_s1(&sp).unwrap(), expected);
            assert_eq!(phi1_lambda_cw(&sp).unwrap(), int(2 * qs[0] * qs[1] * qs[2]));
        }
    }

    #[test]
    fn phi1_route_needs_data() {
        assert!(matches!(
            phi1_s1(&knot(3, 1, 0, 1)),
            Err(Error::MissingPhi1(_))
        ));
        let mut m = MilnorData::new(1);
        m.set_phi1_single(0, int(0)).unwrap();
        let sp = SurgeryPresentation::new(
            vec![Component::new(1, 5, 0).unwrap()],
            None,
            SlopeClass::Bl,
            unknot_grid(1),
            Some(m),
        )
        .unwrap();
        assert_eq!(phi1_s1(&sp).unwrap(), int(0));
    }

    #[test]
    fn reordering_invariance() {
        let mut m = MilnorData::new(3);
        m.set_triple(0, 1, 2, 2).unwrap();
        m.set_phi1_single(1, ratio(1, 3)).unwrap();
        let grid = asl_low_order_grid(&m, 3).unwrap();
        let comps = vec![
            Component::new(2, 1, 0).unwrap(),
            Component::new(3, -2, 1).unwrap(),
            Component::new(1, 4, 0).unwrap(),
        ];
        let sp = SurgeryPresentation::new(comps, None, SlopeClass::Asl, grid, Some(m)).unwrap();
        let reference = perturbative_invariants(&sp, 3).unwrap();
        for perm in (0..3).permutations(3) {
            let p = sp.permuted(&perm).unwrap();
            assert_eq!(perturbative_invariants(&p, 3).unwrap(), reference);
            assert_eq!(phi1_s1(&p).unwrap(), reference.s(1));
        }
    }

    /// The knot formula written out on its own: single-variable shift
    /// `d̃_{m,n} = Σ_t C(2m+2t+1, 2t+1) P^{-2t} d_{m+t, n-2t}` and
    /// `Δ_n = Σ_m (2m)!/m! (-q/(2P))^m d̃_{m, n-m}`.
    fn knot_delta_literal(g: &JonesGrid, p: i64, q: i64, n_max: usize) -> Vec<Rational> {
        let big_p = int(p);
        let d = |m: i64, n: i64| {
            if m < 0 {
                Rational::zero()
            } else {
                g.get(n as i32, &[m as u32])
            }
        };
        let dt = |m: i64, n: i64| {
            let mut acc = Rational::zero();
            for t in 0..=n_max as i64 {
                let b =
                    num_integer::binomial(BigInt::from(2 * m + 2 * t + 1), BigInt::from(2 * t + 1));
                acc += Rational::from_integer(b) * d(m + t, n - 2 * t) / pow(&big_p, 2 * t as u32);
            }
            acc
        };
        (0..=n_max as i64)
            .map(|n| {
                (0..=n)
                    .map(|m| {
                        Rational::from_integer(factorial(2 * m as u64) / factorial(m as u64))
                            * pow(&ratio(-q, 2 * p), m as u32)
                            * dt(m, n - m)
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn knot_formula_literal_agreement() {
        let mut entries: Vec<_> = unknot_grid(5)
            .entries()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        // Perturb with an arbitrary knot-like column.
        entries.push((crate::jones::GridKey::new(2, vec![1]), ratio(5, 7)));
        entries.push((crate::jones::GridKey::new(1, vec![3]), ratio(-2, 3)));
        let g = JonesGrid::from_entries(1, SlopeClass::Bl, 5, entries).unwrap();
        for (p, q, l) in [(3, 1, 0), (5, -2, 1), (1, 4, 0), (-7, 3, 2)] {
            let sp = SurgeryPresentation::new(
                vec![Component::new(p, q, l).unwrap()],
                None,
                SlopeClass::Bl,
                g.clone(),
                None,
            )
            .unwrap();
            assert_eq!(
                delta_coefficients(&sp, 5).unwrap(),
                knot_delta_literal(&g, p + q * l, q, 5)
            );
        }
    }

    #[test]
    fn stationary_phase_cross_check() {
        // With π scaled out, the knot formula is the Gaussian-moment formula
        // at f'' = P/q on the grid d_{m,n} = d̃_{m,n} i^{2m+n}.
        let g = unknot_grid(4);
        for (p, q) in [(3, 1), (5, 2), (-4, 3)] {
            let sp = knot(p, q, 0, 4);
            let shifted = shift_grid(&g, &[p]).unwrap();
            let mut ev: EvGrid<GaussianRational> = EvGrid::new();
            for (k, v) in shifted.grid().entries() {
                let phase = (2 * k.m as i32 + k.n).rem_euclid(4);
                let unit = [(1, 0), (0, 1), (-1, 0), (0, -1)][phase as usize];
                ev.insert(k.m, k.n, Complex::new(v * int(unit.0), v * int(unit.1)))
                    .unwrap();
            }
            let sp_delta = stationary_phase_delta(&ratio(p, q), &ev, 4).unwrap();
            let surgery_delta = delta_coefficients(&sp, 4).unwrap();
            for n in 0..=4usize {
                // i^{-n}
                let unit = [(1, 0), (0, -1), (-1, 0), (0, 1)][n % 4];
                let rotated = sp_delta[n].clone() * Complex::new(int(unit.0), int(unit.1));
                assert_eq!(
                    rotated,
                    Complex::new(surgery_delta[n].clone(), int(0)),
                    "n = {n}"
                );
            }
        }
    }

    #[test]
    fn integerize_examples() {
        assert_eq!(
            integerize(&RHSInvariants::sphere(2), 1).unwrap().value,
            int(0)
        );
        let l31 = lens_space_invariants(3, 1, 2).unwrap();
        let r = integerize(&l31, 1).unwrap();
        assert_eq!(r.value, int(-5_806_080));
        assert!(r.integral);
        let l21 = lens_space_invariants(2, 1, 2).unwrap();
        let r = integerize(&l21, 2).unwrap();
        assert!(r.integral);
        assert_eq!(
            r.value,
            Rational::from_integer(integerization_factor(2) * 4) * ratio(1, 24)
        );
    }

    #[test]
    fn denominator_examples() {
        let l31 = lens_space_invariants(3, 1, 2).unwrap();
        let r = denominator_bound_check(&l31, 1).unwrap();
        assert_eq!(r.value, int(-1));
        assert!(r.passed && r.primes.is_empty());
        let l21 = lens_space_invariants(2, 1, 2).unwrap();
        let r = denominator_bound_check(&l21, 2).unwrap();
        assert_eq!(r.value, ratio(1, 6));
        assert_eq!(r.primes, vec![BigInt::from(2), BigInt::from(3)]);
        assert!(r.passed);
        let s3 = RHSInvariants::sphere(8);
        assert!((1..=8).all(|n| denominator_bound_check(&s3, n).unwrap().passed));
    }

    #[test]
    fn presentation_validation() {
        assert_eq!(
            SurgeryPresentation::new(
                vec![Component::new(2, 1, -2).unwrap()],
                None,
                SlopeClass::Bl,
                unknot_grid(1),
                None
            ),
            Err(Error::DegenerateSurgery { component: 0 })
        );
        let linked = Some(vec![vec![0, 1], vec![1, 0]]);
        assert!(matches!(
            SurgeryPresentation::new(
                vec![
                    Component::new(1, 1, 0).unwrap(),
                    Component::new(1, 1, 0).unwrap()
                ],
                linked,
                SlopeClass::Asl,
                unlink_grid(2, 1),
                None
            ),
            Err(Error::ClassInconsistent(_))
        ));
        assert!(matches!(
            SurgeryPresentation::new(
                vec![
                    Component::new(1, 1, 0).unwrap(),
                    Component::new(1, 1, 0).unwrap(),
                    Component::new(1, 1, 0).unwrap()
                ],
                None,
                SlopeClass::Bl,
                borromean([1, 1, 1], 1).jones().clone(),
                None
            ),
            Err(Error::SlopeViolation { .. })
        ));
    }
}
