//! Finite-type structure of the invariants.
//!
//! Three independent routes are provided: the alternating sum over sublink
//! surgeries, the alternating sum over shifts of a knot surgery coefficient,
//! and the evaluation of `S_n` through trivalent diagrams whose vertices are
//! triple Milnor numbers.
//!
//! Sign convention for diagrams: each trivalent vertex carries the sorted
//! label `(i, j, k)`, `i < j < k`, its legs are contracted with `ε` in that
//! order, and it contributes `μ_{ijk}` for the same sorted label. With this
//! convention the theta graph has weight `+6`, and the prefactor
//! `(-4)^n / (1 + δ_{n1})` makes the diagram sum agree with the sublink
//! alternating sum.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::jones::{JonesGrid, MilnorData, SlopeClass};
use crate::numtheory::{factorial, SurgeryCoeff};
use crate::scalar::{int, ratio};
use crate::surgery::{
    delta_coefficients, framing_correction, perturbative_invariants, Component, SurgeryPresentation,
};
use crate::{Error, Rational, Result};

/// A subset of link components, bit `j` standing for component `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SublinkMask(pub u64);

impl SublinkMask {
    pub fn full(components: usize) -> Self {
        Self(if components == 64 {
            u64::MAX
        } else {
            (1u64 << components) - 1
        })
    }

    pub fn contains(self, j: usize) -> bool {
        self.0 >> j & 1 == 1
    }

    pub fn count(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn indices(self) -> Vec<usize> {
        (0..64).filter(|&j| self.contains(j)).collect()
    }

    /// All subsets of `components` components, in increasing mask order.
    pub fn all(components: usize) -> impl Iterator<Item = SublinkMask> {
        (0..=Self::full(components).0).map(SublinkMask)
    }
}

/// `Σ_{L' ⊆ L} (-1)^{#L'} S_n(χ_{L'}(M))`.
pub fn alternating_sum_sublinks(sp: &SurgeryPresentation, n: usize) -> Result<Rational> {
    if sp.len() > 20 {
        return Err(Error::Domain(format!(
            "{} components is too many for a sublink sum",
            sp.len()
        )));
    }
    let masks: Vec<SublinkMask> = SublinkMask::all(sp.len()).collect();
    let terms: Vec<Result<Rational>> = masks
        .par_iter()
        .map(|mask| {
            let sub = sp.sublink(&mask.indices())?;
            let s = perturbative_invariants(&sub, n)?.s(n);
            Ok(if mask.count() % 2 == 0 { s } else { -s })
        })
        .collect();
    terms
        .into_iter()
        .try_fold(Rational::zero(), |acc, t| Ok(acc + t?))
}

/// Which quantity a shift sum is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumLevel {
    /// The surgery coefficients `Δ_{n'}`.
    Delta,
    /// The invariants `S_{n'}`.
    Invariant,
}

fn knot_presentation(grid: &JonesGrid, p: i64, q: i64) -> Result<SurgeryPresentation> {
    if grid.components() != 1 {
        return Err(Error::Domain(format!(
            "expected a knot grid, found {} components",
            grid.components()
        )));
    }
    if q == 0 {
        return Err(Error::DegenerateSurgery { component: 0 });
    }
    let c = Component {
        coeff: SurgeryCoeff::new(p, q)?,
        framing: 0,
    };
    SurgeryPresentation::new(vec![c], None, SlopeClass::Bl, grid.clone(), None)
}

/// `Σ_{μ ∈ {±1}^n} (Π μ_j) X_{n'}(χ_{(p, q + Σμ)}(S³))` with `X = Δ` or `S`.
pub fn surgery_shift_alternating_sum(
    grid: &JonesGrid,
    p: i64,
    q: i64,
    n: usize,
    n_prime: usize,
    level: SumLevel,
) -> Result<Rational> {
    let mut total = Rational::zero();
    for signs in (0..n).map(|_| [1i64, -1]).multi_cartesian_product() {
        let shift: i64 = signs.iter().sum();
        let sign: i64 = signs.iter().product();
        let sp = knot_presentation(grid, p, q + shift)?;
        let value = match level {
            SumLevel::Delta => delta_coefficients(&sp, n_prime)?[n_prime].clone(),
            SumLevel::Invariant => perturbative_invariants(&sp, n_prime)?.s(n_prime),
        };
        total += int(sign) * value;
    }
    Ok(total)
}

/// `D_{j,2j} = d_{j,0}`.
fn d_diag(grid: &JonesGrid, j: usize) -> Rational {
    grid.get(0, &[j as u32])
}

/// Closed form of the `Δ`-level sum at `n' = n`: `(-1)^n (2n+1)! p^{-n} D_{n,2n}`.
pub fn shift_sum_delta_closed_form(grid: &JonesGrid, p: i64, n: usize) -> Rational {
    let sign = if n % 2 == 0 { 1 } else { -1 };
    int(sign) * Rational::from_integer(factorial(2 * n as u64 + 1)) * d_diag(grid, n)
        / Rational::from_integer(BigInt::from(p).pow(n as u32))
}

/// Closed form of the `S`-level sum at `n' = n`.
///
/// Only the `q^n` part of each product of `Δ`'s survives the `n`-th finite
/// difference, which gives
/// `n! Σ_{Σ j m_j = n} (-1)^{Σm - 1} (Σm - 1)!/Π m_j! Π_j [(-1)^j (2j+1)! D_{j,2j} / (j! p^j)]^{m_j}`,
/// plus, for `n = 1`, the difference of framing corrections.
pub fn shift_sum_invariant_closed_form(
    grid: &JonesGrid,
    p: i64,
    q: i64,
    n: usize,
) -> Result<Rational> {
    let top: Vec<Rational> = (0..=n)
        .map(|j| {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            int(sign) * Rational::from_integer(factorial(2 * j as u64 + 1)) * d_diag(grid, j)
                / Rational::from_integer(factorial(j as u64) * BigInt::from(p).pow(j as u32))
        })
        .collect();
    let mut total = Rational::zero();
    for part in partitions(n) {
        // part[j] = multiplicity of j
        let k: usize = part.iter().sum();
        let mut term = Rational::from_integer(factorial(k as u64 - 1));
        if k % 2 == 0 {
            term = -term;
        }
        for (j, &mj) in part.iter().enumerate().skip(1) {
            term /= Rational::from_integer(factorial(mj as u64));
            for _ in 0..mj {
                term *= &top[j];
            }
        }
        total += term;
    }
    total *= Rational::from_integer(factorial(n as u64));
    if n == 1 {
        let plus = framing_correction(&knot_presentation(grid, p, q + 1)?)?;
        let minus = framing_correction(&knot_presentation(grid, p, q - 1)?)?;
        total += plus - minus;
    }
    Ok(total)
}

/// The `n = 1`, `p = 1` variant `q - 6 D_{1,2}`. The direct sum gives
/// `1 - 6 D_{1,2}`; this value is reported next to it for comparison.
pub fn shift_sum_q_minus_6d(grid: &JonesGrid, q: i64) -> Rational {
    int(q) - int(6) * d_diag(grid, 1)
}

/// Partitions of `n` as multiplicity vectors indexed `0..=n`.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for j in (1..=max.min(rest)).rev() {
            cur[j] += 1;
            go(rest - j, j, cur, out);
            cur[j] -= 1;
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut vec![0; n + 1], &mut out);
    out
}

/// A connected vacuum diagram. Each vertex lists the components on its legs
/// in contraction order: three distinct labels for a triple-Milnor vertex,
/// `[i, i, j, j]` for a quartic vertex. Every component on a leg must occur
/// on exactly two legs; those two legs form the edge of that component.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Diagram {
    pub vertices: Vec<Vec<usize>>,
    pub edges: Vec<usize>,
}

impl Diagram {
    pub fn loops(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    /// Endpoints of each edge, by vertex index.
    fn edge_ends(&self) -> Result<Vec<(usize, usize)>> {
        self.edges
            .iter()
            .map(|&e| {
                let legs: Vec<usize> = self
                    .vertices
                    .iter()
                    .enumerate()
                    .flat_map(|(v, labels)| labels.iter().filter(move |&&l| l == e).map(move |_| v))
                    .collect();
                match legs.as_slice() {
                    [a, b] => Ok((*a, *b)),
                    _ => Err(Error::MalformedDiagram(format!(
                        "component {e} occurs on {} legs, expected 2",
                        legs.len()
                    ))),
                }
            })
            .collect()
    }

    fn connected_without(&self, ends: &[(usize, usize)], skip: Option<usize>) -> bool {
        let v = self.vertices.len();
        if v == 0 {
            return true;
        }
        let mut seen = vec![false; v];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for (i, &(a, b)) in ends.iter().enumerate() {
                if Some(i) == skip {
                    continue;
                }
                for (from, to) in [(a, b), (b, a)] {
                    if from == x && !seen[to] {
                        seen[to] = true;
                        stack.push(to);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_connected(&self) -> Result<bool> {
        Ok(self.connected_without(&self.edge_ends()?, None))
    }

    /// Connected and without a bridge edge.
    pub fn is_one_particle_irreducible(&self) -> Result<bool> {
        let ends = self.edge_ends()?;
        if !self.connected_without(&ends, None) {
            return Ok(false);
        }
        Ok((0..ends.len()).all(|i| self.connected_without(&ends, Some(i))))
    }
}

/// Totally antisymmetric symbol on `{0, 1, 2}`.
fn epsilon(a: usize, b: usize, c: usize) -> i64 {
    if a == b || b == c || a == c {
        0
    } else if (a + 1) % 3 == b {
        1
    } else {
        -1
    }
}

/// Group weight: `ε` at each trivalent vertex, `δ_{ab}δ_{cd} - δ_{ac}δ_{bd}`
/// at each quartic vertex, indices in `{0, 1, 2}` summed along edges.
pub fn diagram_weight(d: &Diagram) -> Result<i64> {
    for v in &d.vertices {
        for l in v {
            if !d.edges.contains(l) {
                return Err(Error::MalformedDiagram(format!(
                    "leg label {l} has no edge"
                )));
            }
        }
        if v.len() != 3 && v.len() != 4 {
            return Err(Error::MalformedDiagram(format!(
                "vertex {v:?} has {} legs",
                v.len()
            )));
        }
    }
    d.edge_ends()?;
    let pos = |l: usize| d.edges.iter().position(|&e| e == l).expect("checked above");
    let legs: Vec<Vec<usize>> = d
        .vertices
        .iter()
        .map(|v| v.iter().map(|&l| pos(l)).collect())
        .collect();
    let mut total = 0i64;
    for assignment in (0..d.edges.len())
        .map(|_| 0..3usize)
        .multi_cartesian_product()
    {
        let mut term = 1i64;
        for v in &legs {
            let x: Vec<usize> = v.iter().map(|&e| assignment[e]).collect();
            term *= match x.as_slice() {
                [a, b, c] => epsilon(*a, *b, *c),
                [a, b, c, e] => i64::from(a == b && c == e) - i64::from(a == c && b == e),
                _ => unreachable!(),
            };
            if term == 0 {
                break;
            }
        }
        total += term;
    }
    Ok(total)
}

/// All connected 1PI trivalent diagrams with `n + 1` loops built from the
/// nonzero triple Milnor numbers, each component used as at most one edge.
pub fn enumerate_diagrams(milnor: &MilnorData, n: usize) -> Result<Vec<Diagram>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let triples: Vec<[usize; 3]> = milnor.triples().map(|(t, _)| t).collect();
    let candidates: Vec<Vec<[usize; 3]>> = if n == 1 {
        triples.iter().map(|t| vec![*t, *t]).collect()
    } else {
        triples.iter().copied().combinations(2 * n).collect()
    };
    let mut out = BTreeSet::new();
    for vertices in candidates {
        let mut count = std::collections::BTreeMap::<usize, usize>::new();
        for t in &vertices {
            for &c in t {
                *count.entry(c).or_default() += 1;
            }
        }
        if count.values().any(|&c| c != 2) || count.len() != 3 * n {
            continue;
        }
        let d = Diagram {
            vertices: vertices.iter().map(|t| t.to_vec()).collect(),
            edges: count.keys().copied().collect(),
        };
        if d.is_one_particle_irreducible()? {
            out.insert(d);
        }
    }
    Ok(out.into_iter().collect())
}

/// One diagram's contribution in a [`DiagramSum`].
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDiagram {
    pub diagram: Diagram,
    pub weight: i64,
    pub milnor_product: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagramSum {
    pub order: usize,
    pub value: Rational,
    pub diagrams: Vec<WeightedDiagram>,
}

/// `S̃_n` from diagrams.
///
/// ASL, `N = 3n`: `(-4)^n / (1 + δ_{n1}) Π_j (q_j/P_j) Σ W Π μ`.
/// SASL, `n = 1`, `N = 2`: the quartic vertex `μ_{0011}` with both edges as
/// self-loops, `2 W μ_{0011} Π_j (q_j/P_j)`.
pub fn diagram_sum(sp: &SurgeryPresentation, n: usize) -> Result<DiagramSum> {
    let empty = MilnorData::new(sp.len());
    let milnor = sp.milnor().unwrap_or(&empty);
    let product: Rational = sp
        .components()
        .iter()
        .map(Component::inverse_slope)
        .product();
    match sp.class() {
        SlopeClass::Asl => {
            if sp.len() != 3 * n {
                return Err(Error::Domain(format!(
                    "diagram sum of order {n} needs {} components, found {}",
                    3 * n,
                    sp.len()
                )));
            }
            let mut diagrams = Vec::new();
            let mut total = Rational::zero();
            for d in enumerate_diagrams(milnor, n)? {
                let weight = diagram_weight(&d)?;
                let milnor_product: i64 = d
                    .vertices
                    .iter()
                    .map(|v| milnor.triple(v[0], v[1], v[2]))
                    .product();
                total += int(weight * milnor_product);
                diagrams.push(WeightedDiagram {
                    diagram: d,
                    weight,
                    milnor_product,
                });
            }
            let sym = if n == 1 { ratio(1, 2) } else { Rational::one() };
            let value = int(-4).pow(n as i32) * sym * product * total;
            Ok(DiagramSum {
                order: n,
                value,
                diagrams,
            })
        }
        SlopeClass::Sasl => {
            if n != 1 || sp.len() != 2 {
                return Err(Error::Domain(
                    "SASL diagram sums are supported for n = 1 on two components".into(),
                ));
            }
            let mu = milnor.quartic(0, 1);
            let d = Diagram {
                vertices: vec![vec![0, 0, 1, 1]],
                edges: vec![0, 1],
            };
            let weight = diagram_weight(&d)?;
            let value = int(2 * weight * mu) * product;
            let diagrams = if mu == 0 {
                Vec::new()
            } else {
                vec![WeightedDiagram {
                    diagram: d,
                    weight,
                    milnor_product: mu,
                }]
            };
            Ok(DiagramSum {
                order: n,
                value,
                diagrams,
            })
        }
        SlopeClass::Bl => Ok(DiagramSum {
            order: n,
            value: Rational::zero(),
            diagrams: Vec::new(),
        }),
    }
}
