//! Expansion grids of trivial-connection colored Jones polynomials.
//!
//! For an `N`-component link with colors `α_j = K a_j` the grid stores the
//! coefficients of
//!
//! ```text
//! J(α_1..α_N) = K^N a_1..a_N Σ d^{(m,n)}_{m_1..m_N} Π_j (iπ a_j)^{2 m_j} h^n,
//! ```
//!
//! with `h = iπ/K` and `m = Σ m_j`. Writing the `a_j` dependence through
//! `iπ a_j` keeps every coefficient rational. The unknot has
//! `J = sin(πa)/sin(π/K)`, so `d_{m,0} = 1/(2m+1)!` and the `n` columns are
//! those of `h/sinh h`.
//!
//! Only entries inside the window `m + n <= order` are kept: an entry with
//! `m + n = w` first influences the surgery coefficient `Δ_w`.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};

use crate::scalar::{int, ratio};
use crate::series::{h_over_sinh, sinhc_sqrt, Series};
use crate::{Error, KSeries, Rational, Result};

/// Link class fixing the slope bound `n >= -σ m` of the expansion grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SlopeClass {
    /// Boundary link, `σ = 0` (also every knot).
    Bl,
    /// Algebraically split link with vanishing triple Milnor numbers, `σ = 1/2`.
    Sasl,
    /// Algebraically split link, `σ = 2/3`.
    Asl,
}

impl SlopeClass {
    pub fn sigma(self) -> Rational {
        match self {
            SlopeClass::Asl => ratio(2, 3),
            SlopeClass::Sasl => ratio(1, 2),
            SlopeClass::Bl => int(0),
        }
    }

    /// Whether `(m, n)` lies on or above the line `n = -σ m`.
    pub fn admits(self, m: u32, n: i32) -> bool {
        let (m, n) = (m as i64, n as i64);
        match self {
            SlopeClass::Asl => 3 * n + 2 * m >= 0,
            SlopeClass::Sasl => 2 * n + m >= 0,
            SlopeClass::Bl => n >= 0,
        }
    }

    /// Largest `m` that can contribute to `Δ_n`, i.e. `floor(n / (1 - σ))`.
    pub fn max_m(self, n: usize) -> usize {
        match self {
            SlopeClass::Asl => 3 * n,
            SlopeClass::Sasl => 2 * n,
            SlopeClass::Bl => n,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SlopeClass::Asl => "ASL",
            SlopeClass::Sasl => "SASL",
            SlopeClass::Bl => "BL",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "ASL" => Ok(SlopeClass::Asl),
            "SASL" => Ok(SlopeClass::Sasl),
            "BL" => Ok(SlopeClass::Bl),
            other => Err(Error::Parse(format!(
                "unknown link class {other:?}, expected ASL, SASL or BL"
            ))),
        }
    }
}

impl fmt::Display for SlopeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Index of one grid coefficient. Ordered by `m`, then `n`, then `multi`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GridKey {
    pub m: u32,
    pub n: i32,
    pub multi: Vec<u32>,
}

impl GridKey {
    pub fn new(n: i32, multi: Vec<u32>) -> Self {
        Self {
            m: multi.iter().sum(),
            n,
            multi,
        }
    }

    fn weight(&self) -> i64 {
        self.m as i64 + self.n as i64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JonesGrid {
    components: usize,
    class: SlopeClass,
    order: usize,
    entries: BTreeMap<GridKey, Rational>,
}

/// Result of [`JonesGrid::validate_slope`].
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeReport {
    pub class: SlopeClass,
    pub violations: Vec<GridKey>,
}

impl SlopeReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        match self.violations.into_iter().next() {
            None => Ok(()),
            Some(k) => Err(Error::SlopeViolation {
                m: k.m,
                n: k.n,
                multi: k.multi,
                class: self.class.to_string(),
            }),
        }
    }
}

impl JonesGrid {
    /// The grid `1`: the empty link, or any link whose data is unknown past `d_{0,0}`.
    pub fn trivial(components: usize, class: SlopeClass, order: usize) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(GridKey::new(0, vec![0; components]), Rational::one());
        Self {
            components,
            class,
            order,
            entries,
        }
    }

    /// Builds a grid from raw entries. Entries outside the window are dropped
    /// and duplicates are summed. The normalization `d_{0,0} = 1`,
    /// `d_{0,1} = 0` is enforced; the slope bound is not (see
    /// [`validate_slope`](Self::validate_slope)).
    pub fn from_entries(
        components: usize,
        class: SlopeClass,
        order: usize,
        entries: impl IntoIterator<Item = (GridKey, Rational)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<GridKey, Rational> = BTreeMap::new();
        for (key, value) in entries {
            if key.multi.len() != components {
                return Err(Error::ComponentCount {
                    expected: components,
                    found: key.multi.len(),
                });
            }
            if key.m != key.multi.iter().sum::<u32>() {
                return Err(Error::Parse(format!(
                    "entry {key:?}: m differs from the multi-index total"
                )));
            }
            if key.weight() > order as i64 {
                continue;
            }
            *map.entry(key).or_insert_with(Rational::zero) += value;
        }
        map.retain(|_, v| !v.is_zero());
        let grid = Self {
            components,
            class,
            order,
            entries: map,
        };
        grid.check_normalization()?;
        Ok(grid)
    }

    fn check_normalization(&self) -> Result<()> {
        let zero = vec![0; self.components];
        if self.get(0, &zero) != Rational::one() {
            return Err(Error::GridNormalization(format!(
                "d(0,0) = {}, expected 1",
                self.get(0, &zero)
            )));
        }
        if self.order >= 1 && !self.get(1, &zero).is_zero() {
            return Err(Error::GridNormalization(format!(
                "d(0,1) = {}, expected 0",
                self.get(1, &zero)
            )));
        }
        Ok(())
    }

    /// Like [`from_entries`](Self::from_entries) but also rejects slope violations.
    pub fn validated(
        components: usize,
        class: SlopeClass,
        order: usize,
        entries: impl IntoIterator<Item = (GridKey, Rational)>,
    ) -> Result<Self> {
        let g = Self::from_entries(components, class, order, entries)?;
        g.validate_slope().into_result()?;
        Ok(g)
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn class(&self) -> SlopeClass {
        self.class
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, n: i32, multi: &[u32]) -> Rational {
        self.entries
            .get(&GridKey::new(n, multi.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&GridKey, &Rational)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Relabels the class, e.g. to view a knot grid as part of an ASL.
    pub fn with_class(mut self, class: SlopeClass) -> Self {
        self.class = class;
        self
    }

    /// Drops entries beyond a smaller window.
    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        let entries = self
            .entries
            .iter()
            .filter(|(k, _)| k.weight() <= order as i64)
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        Self {
            components: self.components,
            class: self.class,
            order,
            entries,
        }
    }

    pub fn validate_slope(&self) -> SlopeReport {
        SlopeReport {
            class: self.class,
            violations: self
                .entries
                .keys()
                .filter(|k| !self.class.admits(k.m, k.n))
                .cloned()
                .collect(),
        }
    }

    /// Grid of the split union; the coefficients multiply.
    pub fn split_union(&self, other: &JonesGrid) -> JonesGrid {
        let order = self.order.min(other.order);
        let mut entries: BTreeMap<GridKey, Rational> = BTreeMap::new();
        for (ka, va) in &self.entries {
            for (kb, vb) in &other.entries {
                let key = GridKey::new(
                    ka.n + kb.n,
                    ka.multi.iter().chain(&kb.multi).copied().collect(),
                );
                if key.weight() > order as i64 {
                    continue;
                }
                *entries.entry(key).or_insert_with(Rational::zero) += va * vb;
            }
        }
        entries.retain(|_, v| !v.is_zero());
        JonesGrid {
            components: self.components + other.components,
            class: self.class.max(other.class),
            order,
            entries,
        }
    }

    /// Sets `α_j = 1` (i.e. `a_j = 1/K`), which deletes component `j`.
    pub fn remove_component(&self, j: usize) -> Result<JonesGrid> {
        if j >= self.components {
            return Err(Error::IndexOutOfRange {
                index: j,
                len: self.components,
            });
        }
        let mut entries: BTreeMap<GridKey, Rational> = BTreeMap::new();
        for (k, v) in &self.entries {
            let mj = k.multi[j];
            let mut multi = k.multi.clone();
            multi.remove(j);
            let key = GridKey::new(k.n + 2 * mj as i32, multi);
            if key.weight() > self.order as i64 {
                continue;
            }
            *entries.entry(key).or_insert_with(Rational::zero) += v;
        }
        entries.retain(|_, v| !v.is_zero());
        Ok(JonesGrid {
            components: self.components - 1,
            class: self.class,
            order: self.order,
            entries,
        })
    }

    /// Keeps the components listed in `keep` (in that order) and removes the rest.
    pub fn restrict(&self, keep: &[usize]) -> Result<JonesGrid> {
        for &j in keep {
            if j >= self.components {
                return Err(Error::IndexOutOfRange {
                    index: j,
                    len: self.components,
                });
            }
        }
        let mut g = self.clone();
        for j in (0..self.components).rev() {
            if !keep.contains(&j) {
                g = g.remove_component(j)?;
            }
        }
        let kept: Vec<usize> = (0..self.components).filter(|j| keep.contains(j)).collect();
        if kept.as_slice() == keep {
            return Ok(g);
        }
        // Reorder to the requested order.
        let pos: Vec<usize> = keep
            .iter()
            .map(|j| kept.iter().position(|k| k == j).expect("kept"))
            .collect();
        Ok(g.permute(&pos))
    }

    /// Component `i` of the result is component `perm[i]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> JonesGrid {
        let entries = self
            .entries
            .iter()
            .map(|(k, v)| {
                (
                    GridKey::new(k.n, perm.iter().map(|&p| k.multi[p]).collect()),
                    v.clone(),
                )
            })
            .collect();
        JonesGrid {
            components: self.components,
            class: self.class,
            order: self.order,
            entries,
        }
    }

    /// Applies the surgery shift to the components with `Some(P_j)`,
    /// `P_j = p_j + q_j l_jj`, leaving the others untouched.
    ///
    /// Per shifted component the map is
    /// `K a (iπa)^{2k} -> (P/2) Σ_{μ=±1} μ K (a + μ/(KP)) (iπ(a + μ/(KP)))^{2k}`,
    /// whose expansion sends `d^{(m,n)}_k` to `d̃^{(m-t, n+2t)}_{k-t}` with
    /// weight `C(2k+1, 2t+1) P^{-2t}`.
    pub fn shift_partial(&self, denominators: &[Option<i64>]) -> Result<JonesGrid> {
        if denominators.len() != self.components {
            return Err(Error::ComponentCount {
                expected: self.components,
                found: denominators.len(),
            });
        }
        for (j, d) in denominators.iter().enumerate() {
            if *d == Some(0) {
                return Err(Error::DegenerateSurgery { component: j });
            }
        }
        let order = self.order as i64;
        let mut entries: BTreeMap<GridKey, Rational> = BTreeMap::new();
        for (key, value) in &self.entries {
            let ranges = key.multi.iter().zip(denominators).map(|(&k, d)| match d {
                Some(_) => 0..=k,
                None => 0..=0,
            });
            for t in ranges.multi_cartesian_product() {
                let total: u32 = t.iter().sum();
                if key.weight() + total as i64 > order {
                    continue;
                }
                let mut coeff = value.clone();
                for ((&k, &tj), d) in key.multi.iter().zip(&t).zip(denominators) {
                    if let Some(p) = d {
                        let b = binomial(BigInt::from(2 * k + 1), BigInt::from(2 * tj + 1));
                        coeff *= Rational::new(b, BigInt::from(*p).pow(2 * tj));
                    }
                }
                let multi = key.multi.iter().zip(&t).map(|(k, tj)| k - tj).collect();
                let new_key = GridKey::new(key.n + 2 * total as i32, multi);
                *entries.entry(new_key).or_insert_with(Rational::zero) += coeff;
            }
        }
        entries.retain(|_, v| !v.is_zero());
        Ok(JonesGrid {
            components: self.components,
            class: self.class,
            order: self.order,
            entries,
        })
    }
}

/// A grid after the surgery shift, with the denominators `P_j` that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftedJonesGrid {
    grid: JonesGrid,
    denominators: Vec<i64>,
}

impl ShiftedJonesGrid {
    pub fn grid(&self) -> &JonesGrid {
        &self.grid
    }

    pub fn denominators(&self) -> &[i64] {
        &self.denominators
    }

    pub fn get(&self, n: i32, multi: &[u32]) -> Rational {
        self.grid.get(n, multi)
    }
}

/// Shifts every component; `denominators[j] = p_j + q_j l_jj`.
pub fn shift_grid(g: &JonesGrid, denominators: &[i64]) -> Result<ShiftedJonesGrid> {
    let opt: Vec<Option<i64>> = denominators.iter().map(|&d| Some(d)).collect();
    Ok(ShiftedJonesGrid {
        grid: g.shift_partial(&opt)?,
        denominators: denominators.to_vec(),
    })
}

pub fn remove_component(g: &JonesGrid, j: usize) -> Result<JonesGrid> {
    g.remove_component(j)
}

/// The unknot, `J = sin(πa)/sin(π/K)`: `d_{m,n} = c_n/(2m+1)!` where
/// `Σ c_n h^n = h/sinh h`.
pub fn unknot_grid(order: usize) -> JonesGrid {
    let col = h_over_sinh(order);
    let row = sinhc_sqrt(order);
    let mut entries = BTreeMap::new();
    for m in 0..=order {
        for n in 0..=(order - m) {
            let v = row.coeff(m) * col.coeff(n);
            if !v.is_zero() {
                entries.insert(GridKey::new(n as i32, vec![m as u32]), v);
            }
        }
    }
    JonesGrid {
        components: 1,
        class: SlopeClass::Bl,
        order,
        entries,
    }
}

/// The `N`-component unlink.
pub fn unlink_grid(components: usize, order: usize) -> JonesGrid {
    let u = unknot_grid(order);
    (0..components).fold(JonesGrid::trivial(0, SlopeClass::Bl, order), |acc, _| {
        acc.split_union(&u)
    })
}

fn require_knot(g: &JonesGrid) -> Result<()> {
    if g.components != 1 {
        return Err(Error::Domain(format!(
            "expected a knot grid, found {} components",
            g.components
        )));
    }
    Ok(())
}

/// The `n = 0` column `Σ d_{m,0} X^m` with `X = (iπa)^2`, which equals
/// `sin(πa)/(πa Δ_A(e^{2πia}))`.
pub fn alexander_diagonal(g: &JonesGrid) -> Result<KSeries> {
    require_knot(g)?;
    let coeffs = (0..=g.order).map(|m| g.get(0, &[m as u32])).collect();
    Ok(Series::from_coeffs(coeffs, g.order))
}

/// The Alexander polynomial `Δ_A` as a series in `X = (iπa)^2`.
pub fn alexander_polynomial(g: &JonesGrid) -> Result<KSeries> {
    let col = alexander_diagonal(g)?;
    Ok(sinhc_sqrt(g.order).mul(&col.inverse()?))
}

/// Coefficients of the Conway polynomial in `w = z^2`, `z = t^{1/2} - t^{-1/2}`.
/// The `w^1` coefficient is `φ_1` of the knot.
pub fn conway_coefficients(g: &JonesGrid) -> Result<KSeries> {
    let alex = alexander_polynomial(g)?;
    let order = alex.order();
    // w = z^2 = 4 sinh^2(iπa) = 2 Σ_{k>=1} (4X)^k / (2k)!
    let w_of_x = Series::from_coeffs(
        (0..=order)
            .map(|k| {
                if k == 0 {
                    Rational::zero()
                } else {
                    Rational::new(
                        BigInt::from(2) * BigInt::from(4).pow(k as u32),
                        crate::numtheory::factorial(2 * k as u64),
                    )
                }
            })
            .collect(),
        order,
    );
    if order == 0 {
        return Ok(alex);
    }
    let x_of_w = w_of_x.revert()?;
    alex.compose(&x_of_w)
}

/// Milnor invariants and `φ_1` values of an algebraically split link.
///
/// Triple numbers are stored for sorted index triples; `μ_{ijk}` for other
/// orders follows by antisymmetry. Missing `φ_1` values default to
/// `φ_1(L_j) = 0`, `φ_1(L_i, L_j) = μ_{iijj}` and `φ_1(L_i, L_j, L_k) = μ_{ijk}^2`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MilnorData {
    components: usize,
    triples: BTreeMap<[usize; 3], i64>,
    quartic_pairs: BTreeMap<[usize; 2], i64>,
    phi1_singles: BTreeMap<usize, Rational>,
    phi1_pairs: BTreeMap<[usize; 2], Rational>,
    phi1_triples: BTreeMap<[usize; 3], Rational>,
}

/// Sorts a triple of distinct indices and returns the permutation sign.
fn sort3(mut t: [usize; 3]) -> Result<([usize; 3], i64)> {
    if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
        return Err(Error::MilnorInconsistent(format!(
            "triple {t:?} repeats a component"
        )));
    }
    let mut sign = 1;
    for i in 0..3 {
        for j in 0..2 - i {
            if t[j] > t[j + 1] {
                t.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    Ok((t, sign))
}

fn sort2(i: usize, j: usize) -> Result<[usize; 2]> {
    if i == j {
        return Err(Error::MilnorInconsistent(format!(
            "pair ({i}, {j}) repeats a component"
        )));
    }
    Ok([i.min(j), i.max(j)])
}

impl MilnorData {
    pub fn new(components: usize) -> Self {
        Self {
            components,
            ..Default::default()
        }
    }

    pub fn components(&self) -> usize {
        self.components
    }

    fn check_index(&self, idx: &[usize]) -> Result<()> {
        match idx.iter().find(|&&i| i >= self.components) {
            Some(&i) => Err(Error::IndexOutOfRange {
                index: i,
                len: self.components,
            }),
            None => Ok(()),
        }
    }

    pub fn set_triple(&mut self, i: usize, j: usize, k: usize, value: i64) -> Result<()> {
        self.check_index(&[i, j, k])?;
        let (key, sign) = sort3([i, j, k])?;
        if value == 0 {
            self.triples.remove(&key);
        } else {
            self.triples.insert(key, sign * value);
        }
        Ok(())
    }

    pub fn set_quartic(&mut self, i: usize, j: usize, value: i64) -> Result<()> {
        self.check_index(&[i, j])?;
        let key = sort2(i, j)?;
        if value == 0 {
            self.quartic_pairs.remove(&key);
        } else {
            self.quartic_pairs.insert(key, value);
        }
        Ok(())
    }

    pub fn set_phi1_single(&mut self, j: usize, value: Rational) -> Result<()> {
        self.check_index(&[j])?;
        self.phi1_singles.insert(j, value);
        Ok(())
    }

    pub fn set_phi1_pair(&mut self, i: usize, j: usize, value: Rational) -> Result<()> {
        self.check_index(&[i, j])?;
        self.phi1_pairs.insert(sort2(i, j)?, value);
        Ok(())
    }

    pub fn set_phi1_triple(&mut self, i: usize, j: usize, k: usize, value: Rational) -> Result<()> {
        self.check_index(&[i, j, k])?;
        self.phi1_triples.insert(sort3([i, j, k])?.0, value);
        Ok(())
    }

    /// `μ_{ijk}` with the antisymmetric sign for unsorted indices.
    pub fn triple(&self, i: usize, j: usize, k: usize) -> i64 {
        match sort3([i, j, k]) {
            Ok((key, sign)) => sign * self.triples.get(&key).copied().unwrap_or(0),
            Err(_) => 0,
        }
    }

    pub fn quartic(&self, i: usize, j: usize) -> i64 {
        sort2(i, j)
            .ok()
            .and_then(|k| self.quartic_pairs.get(&k).copied())
            .unwrap_or(0)
    }

    pub fn triples(&self) -> impl Iterator<Item = ([usize; 3], i64)> + '_ {
        self.triples.iter().map(|(k, v)| (*k, *v))
    }

    pub fn quartic_pairs(&self) -> impl Iterator<Item = ([usize; 2], i64)> + '_ {
        self.quartic_pairs.iter().map(|(k, v)| (*k, *v))
    }

    pub fn phi1_single(&self, j: usize) -> Rational {
        self.phi1_singles
            .get(&j)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn phi1_pair(&self, i: usize, j: usize) -> Rational {
        match sort2(i, j) {
            Ok(key) => self
                .phi1_pairs
                .get(&key)
                .cloned()
                .unwrap_or_else(|| int(self.quartic(i, j))),
            Err(_) => Rational::zero(),
        }
    }

    pub fn phi1_triple(&self, i: usize, j: usize, k: usize) -> Rational {
        match sort3([i, j, k]) {
            Ok((key, _)) => self.phi1_triples.get(&key).cloned().unwrap_or_else(|| {
                let mu = self.triple(i, j, k);
                int(mu * mu)
            }),
            Err(_) => Rational::zero(),
        }
    }

    pub fn has_triples(&self) -> bool {
        !self.triples.is_empty() || self.phi1_triples.values().any(|v| !v.is_zero())
    }

    pub fn has_quartics(&self) -> bool {
        !self.quartic_pairs.is_empty() || self.phi1_pairs.values().any(|v| !v.is_zero())
    }

    /// Checks `φ_1` pairs and triples against the Milnor numbers they must equal.
    pub fn validate(&self) -> Result<()> {
        for (&[i, j], v) in &self.phi1_pairs {
            let mu = self.quartic(i, j);
            if *v != int(mu) {
                return Err(Error::MilnorInconsistent(format!(
                    "phi_1 of components ({i}, {j}) is {v} but mu_iijj = {mu}"
                )));
            }
        }
        for (&[i, j, k], v) in &self.phi1_triples {
            let mu = self.triple(i, j, k);
            if *v != int(mu * mu) {
                return Err(Error::MilnorInconsistent(format!(
                    "phi_1 of components ({i}, {j}, {k}) is {v} but mu_ijk^2 = {}",
                    mu * mu
                )));
            }
        }
        Ok(())
    }

    /// Checks that the data is compatible with the given class.
    pub fn check_class(&self, class: SlopeClass) -> Result<()> {
        if class <= SlopeClass::Sasl && self.has_triples() {
            return Err(Error::ClassInconsistent(format!(
                "{class} link with nonzero triple Milnor data"
            )));
        }
        if class == SlopeClass::Bl && self.has_quartics() {
            return Err(Error::ClassInconsistent(
                "BL link with nonzero Milnor data".into(),
            ));
        }
        Ok(())
    }

    /// Data of the sublink formed by `keep`, reindexed in that order.
    pub fn restrict(&self, keep: &[usize]) -> MilnorData {
        let pos = |i: usize| keep.iter().position(|&k| k == i);
        let mut out = MilnorData::new(keep.len());
        for (&[i, j, k], &v) in &self.triples {
            if let (Some(a), Some(b), Some(c)) = (pos(i), pos(j), pos(k)) {
                out.set_triple(a, b, c, v).expect("valid reindexing");
            }
        }
        for (&[i, j], &v) in &self.quartic_pairs {
            if let (Some(a), Some(b)) = (pos(i), pos(j)) {
                out.set_quartic(a, b, v).expect("valid reindexing");
            }
        }
        for (&j, v) in &self.phi1_singles {
            if let Some(a) = pos(j) {
                out.set_phi1_single(a, v.clone()).expect("valid reindexing");
            }
        }
        for (&[i, j], v) in &self.phi1_pairs {
            if let (Some(a), Some(b)) = (pos(i), pos(j)) {
                out.set_phi1_pair(a, b, v.clone())
                    .expect("valid reindexing");
            }
        }
        for (&[i, j, k], v) in &self.phi1_triples {
            if let (Some(a), Some(b), Some(c)) = (pos(i), pos(j), pos(k)) {
                out.set_phi1_triple(a, b, c, v.clone())
                    .expect("valid reindexing");
            }
        }
        out
    }
}

/// Grid determined by `φ_1` data in the `m + n = 1` layer:
///
/// - `d_{1,0} = -4 (φ_1(L_j) - 1/24)` on `a_j^2`,
/// - `d_{2,-1} = (4/3) φ_1(L_i, L_j)` on `a_i^2 a_j^2`,
/// - `d_{3,-2} = -(4/9) φ_1(L_i, L_j, L_k)` on `a_i^2 a_j^2 a_k^2`.
///
/// Layers `m + n >= 2` are not determined by this data; they are taken from
/// the unlink with the same number of components.
pub fn low_order_grid(milnor: &MilnorData, class: SlopeClass, order: usize) -> Result<JonesGrid> {
    milnor.validate()?;
    milnor.check_class(class)?;
    let n = milnor.components();
    let unit = |idx: &[usize]| {
        let mut v = vec![0u32; n];
        for &i in idx {
            v[i] += 1;
        }
        v
    };
    let mut entries: Vec<(GridKey, Rational)> = unlink_grid(n, order)
        .entries
        .into_iter()
        .filter(|(k, _)| k.weight() != 1)
        .collect();
    if order >= 1 {
        for j in 0..n {
            let v = int(-4) * (milnor.phi1_single(j) - ratio(1, 24));
            entries.push((GridKey::new(0, unit(&[j])), v));
        }
        for (i, j) in (0..n).tuple_combinations() {
            entries.push((
                GridKey::new(-1, unit(&[i, j])),
                ratio(4, 3) * milnor.phi1_pair(i, j),
            ));
        }
        for (i, j, k) in (0..n).tuple_combinations() {
            entries.push((
                GridKey::new(-2, unit(&[i, j, k])),
                ratio(-4, 9) * milnor.phi1_triple(i, j, k),
            ));
        }
    }
    JonesGrid::validated(n, class, order, entries)
}

pub fn asl_low_order_grid(milnor: &MilnorData, order: usize) -> Result<JonesGrid> {
    low_order_grid(milnor, SlopeClass::Asl, order)
}
