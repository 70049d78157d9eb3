//! Exact number theory behind surgery kinematics.
//!
//! Dedekind sums are evaluated with the sawtooth sum for small moduli and with
//! the reciprocity recursion otherwise; floating cotangents never enter.
//! Negative moduli follow the cotangent definition literally, which gives
//! `s(p, -q) = -s(p, q)`.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::{int, ratio};
use crate::{Error, Rational, Result};

/// Moduli up to this size use the direct sawtooth sum.
const SAWTOOTH_MAX_Q: i64 = 16;

/// A rational surgery slope `p/q` with `gcd(|p|, |q|) = 1` and `q != 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurgeryCoeff {
    p: i64,
    q: i64,
}

impl SurgeryCoeff {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::ZeroDenominator);
        }
        if p.gcd(&q) != 1 {
            return Err(Error::NotCoprime { p, q });
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// The slope `p/q` as an exact rational.
    pub fn slope(&self) -> Rational {
        ratio(self.p, self.q)
    }
}

/// An `SL(2, Z)` matrix `(p r; q s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SL2Matrix {
    pub p: i64,
    pub r: i64,
    pub q: i64,
    pub s: i64,
}

impl SL2Matrix {
    pub fn new(p: i64, r: i64, q: i64, s: i64) -> Result<Self> {
        let det = p * s - q * r;
        if det != 1 {
            return Err(Error::NotSl2 { p, r, q, s, det });
        }
        Ok(Self { p, r, q, s })
    }

    /// The S-matrix `(0 -1; 1 0)`.
    pub fn s_matrix() -> Self {
        Self {
            p: 0,
            r: -1,
            q: 1,
            s: 0,
        }
    }

    /// Another completion of the same first column: `(r, s) -> (r + t p, s + t q)`.
    pub fn shifted(&self, t: i64) -> Self {
        Self {
            p: self.p,
            r: self.r + t * self.p,
            q: self.q,
            s: self.s + t * self.q,
        }
    }

    pub fn coeff(&self) -> Result<SurgeryCoeff> {
        SurgeryCoeff::new(self.p, self.q)
    }
}

/// `L_ij = l_ij + (p_j / q_j) δ_ij`, symmetric, integral off the diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct FramingMatrix {
    entries: Vec<Vec<Rational>>,
}

impl FramingMatrix {
    pub fn new(entries: Vec<Vec<Rational>>) -> Result<Self> {
        let n = entries.len();
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Domain(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, v) in row.iter().enumerate() {
                if *v != entries[j][i] {
                    return Err(Error::Domain(format!("matrix not symmetric at ({i}, {j})")));
                }
                if i != j && !v.is_integer() {
                    return Err(Error::Domain(format!(
                        "linking number at ({i}, {j}) is not an integer"
                    )));
                }
            }
        }
        Ok(Self { entries })
    }

    /// Builds `L_tot` from integer linking/framing numbers and surgery slopes.
    /// The diagonal of `linking` holds the framings `l_jj`.
    pub fn total(linking: &[Vec<i64>], coeffs: &[SurgeryCoeff]) -> Result<Self> {
        let n = coeffs.len();
        if linking.len() != n {
            return Err(Error::ComponentCount {
                expected: n,
                found: linking.len(),
            });
        }
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let l = int(linking[i][j]);
                        if i == j {
                            l + coeffs[j].slope()
                        } else {
                            l
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(entries)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i][j]
    }
}

/// The sawtooth function `((x))` at `x = num / den`, `den > 0`.
fn sawtooth(num: i64, den: i64) -> Rational {
    let r = num.rem_euclid(den);
    if r == 0 {
        Rational::zero()
    } else {
        ratio(2 * r - den, 2 * den)
    }
}

/// `s(p, q)` by the direct sawtooth sum; `q > 0`.
pub(crate) fn dedekind_sawtooth(p: i64, q: i64) -> Rational {
    debug_assert!(q > 0);
    (1..q).fold(Rational::zero(), |acc, j| {
        acc + sawtooth(j, q) * sawtooth(p * j, q)
    })
}

/// `s(p, q)` by reciprocity; `q > 0`, `gcd(p, q) = 1`.
pub(crate) fn dedekind_reciprocity(p: i64, q: i64) -> Rational {
    debug_assert!(q > 0);
    let mut total = Rational::zero();
    let mut sign = 1i64;
    let (mut a, mut b) = (p.rem_euclid(q), q);
    // s(a, b) with 0 <= a < b; s(a, b) = R(a, b) - s(b mod a, a).
    while a != 0 {
        let (ab, bb) = (BigInt::from(a), BigInt::from(b));
        let term =
            Rational::new(&ab * &ab + &bb * &bb + 1, BigInt::from(12) * &ab * &bb) - ratio(1, 4);
        if sign > 0 {
            total += term;
        } else {
            total -= term;
        }
        sign = -sign;
        let next = b.rem_euclid(a);
        b = a;
        a = next;
    }
    total
}

/// The Dedekind sum `s(p, q)`.
pub fn dedekind_sum(p: i64, q: i64) -> Result<Rational> {
    if q == 0 {
        return Err(Error::ZeroDenominator);
    }
    if p.gcd(&q) != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    let (qa, sign) = if q < 0 { (-q, -1) } else { (q, 1) };
    let value = if qa <= SAWTOOTH_MAX_Q {
        dedekind_sawtooth(p, qa)
    } else {
        dedekind_reciprocity(p, qa)
    };
    Ok(if sign < 0 { -value } else { value })
}

/// The Rademacher function `Φ(U) = (p + s)/q - 12 s(p, q)`.
pub fn rademacher_phi(m: &SL2Matrix) -> Result<Rational> {
    if m.q == 0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(ratio(m.p + m.s, m.q) - int(12) * dedekind_sum(m.p, m.q)?)
}

/// Completes `(p, q)` to an `SL(2, Z)` matrix.
///
/// `s` is determined modulo `q`; the canonical pick is the unique
/// `0 <= s < |q|` with `p s ≡ 1 (mod q)`, and then `r = (p s - 1) / q`.
pub fn complete_surgery_matrix(c: SurgeryCoeff) -> SL2Matrix {
    let (p, q) = (c.p(), c.q());
    let qa = q.abs();
    let s = if qa == 1 {
        0
    } else {
        let ext = p.rem_euclid(qa).extended_gcd(&qa);
        ext.x.rem_euclid(qa)
    };
    let r = (p * s - 1) / q;
    SL2Matrix { p, r, q, s }
}

/// Signature of a symmetric rational matrix by congruence diagonalization.
pub fn signature(m: &FramingMatrix) -> Result<i64> {
    let mut a: Vec<Vec<Rational>> = m.entries.clone();
    let n = a.len();
    let mut sig = 0i64;
    for k in 0..n {
        if a[k][k].is_zero() {
            // Bring a nonzero value to the pivot by a congruence.
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // Replace basis vector e_k by e_k + e_j: diagonal becomes 2 a_kj.
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[k][c] += v;
                }
                for r in 0..n {
                    let v = a[r][j].clone();
                    a[r][k] += v;
                }
            } else {
                return Err(Error::NotRationalHomologySphere);
            }
        }
        let pivot = a[k][k].clone();
        if pivot.is_positive() {
            sig += 1;
        } else {
            sig -= 1;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for c in k..n {
                let v = &f * &a[k][c];
                a[i][c] -= v;
            }
            for r in k..n {
                let v = &f * &a[r][k];
                a[r][i] -= v;
            }
        }
    }
    Ok(sig)
}

/// Exact sign of a nonzero rational.
pub fn sign(x: &Rational) -> i64 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Distinct prime factors of `|n|`, ascending.
pub fn prime_factors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            while (&n % &d).is_zero() {
                n /= &d;
            }
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}
