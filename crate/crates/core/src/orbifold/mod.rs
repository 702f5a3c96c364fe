//! Orbifold projective lines `P^1(A, Λ)`: weight data, the grading group
//! `L_A`, and the numerical Grothendieck lattice with its auto-equivalence
//! actions (see [`OrbifoldLine`]).

mod line;
mod mobius;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::quiver::ExtendedDynkin;

pub use line::{OrbifoldLine, RankDegree};
pub use mobius::Mobius;

/// Point of `P^1(Q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ProjPoint {
    Infinity,
    Finite(BigRational),
}

impl ProjPoint {
    pub fn int(v: i64) -> Self {
        ProjPoint::Finite(BigRational::from_integer(BigInt::from(v)))
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Infinity => f.write_str("inf"),
            ProjPoint::Finite(q) => write!(f, "{q}"),
        }
    }
}

impl FromStr for ProjPoint {
    type Err = Error;

    /// `inf` or an exact rational `p/q`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t == "∞" {
            return Ok(ProjPoint::Infinity);
        }
        crate::wire::parse_rational(t).map(ProjPoint::Finite)
    }
}

/// Largest accepted weight; keeps lattice ranks and `lcm` values manageable.
pub const MAX_WEIGHT: u64 = 1 << 16;
/// Largest accepted number of weighted points.
pub const MAX_POINTS: usize = 64;

/// Weights `A = (a_1, ..., a_r)` at points `Λ = (λ_1, ..., λ_r)`, normalised
/// so that `λ_1 = ∞, λ_2 = 0, λ_3 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightData {
    weights: Vec<u64>,
    lambda: Vec<ProjPoint>,
    a: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub a: u64,
    pub mu: usize,
    pub chi: BigRational,
}

impl WeightData {
    pub fn new(weights: Vec<u64>, lambda: Vec<ProjPoint>) -> Result<Self> {
        let r = weights.len();
        if r < 3 {
            return Err(Error::InvalidWeights(format!("need at least 3 points, got {r}")));
        }
        if r > MAX_POINTS {
            return Err(Error::InvalidWeights(format!("at most {MAX_POINTS} points, got {r}")));
        }
        if let Some(w) = weights.iter().find(|&&w| w == 0 || w > MAX_WEIGHT) {
            return Err(Error::InvalidWeights(format!(
                "weights must lie in 1..={MAX_WEIGHT}, got {w}"
            )));
        }
        if lambda.len() != r {
            return Err(Error::InvalidWeights(format!(
                "{} points for {r} weights",
                lambda.len()
            )));
        }
        if lambda[0] != ProjPoint::Infinity || lambda[1] != ProjPoint::int(0) || lambda[2] != ProjPoint::int(1) {
            return Err(Error::InvalidWeights(
                "points must be normalised to (inf, 0, 1, ...)".into(),
            ));
        }
        for i in 0..r {
            for j in 0..i {
                if lambda[i] == lambda[j] {
                    return Err(Error::InvalidWeights(format!(
                        "points {} and {} coincide ({})",
                        j + 1,
                        i + 1,
                        lambda[i]
                    )));
                }
            }
        }
        let mut a: u64 = 1;
        for &w in &weights {
            a = a
                .checked_mul(w / a.gcd(&w))
                .ok_or_else(|| Error::InvalidWeights("lcm of the weights overflows".into()))?;
        }
        Ok(WeightData { weights, lambda, a })
    }

    /// Points `(∞, 0, 1, 2, 3, ...)`.
    pub fn with_default_points(weights: Vec<u64>) -> Result<Self> {
        let lambda = default_points(weights.len());
        Self::new(weights, lambda)
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn lambda(&self) -> &[ProjPoint] {
        &self.lambda
    }

    pub fn r(&self) -> usize {
        self.weights.len()
    }

    /// `lcm(a_1, ..., a_r)`.
    pub fn a(&self) -> u64 {
        self.a
    }

    /// `2 + Σ (a_i - 1)`, the rank of the Grothendieck lattice.
    pub fn mu(&self) -> usize {
        2 + self.weights.iter().map(|&w| (w - 1) as usize).sum::<usize>()
    }

    /// `χ_A = 2 + Σ (1/a_i - 1)`.
    pub fn chi(&self) -> BigRational {
        let two = BigRational::from_integer(BigInt::from(2));
        self.weights.iter().fold(two, |acc, &w| {
            acc + BigRational::new(BigInt::one(), BigInt::from(w)) - BigRational::one()
        })
    }

    pub fn invariants(&self) -> Invariants {
        Invariants {
            a: self.a,
            mu: self.mu(),
            chi: self.chi(),
        }
    }

    /// Extended Dynkin type derived-equivalent to the line when `χ_A > 0`.
    ///
    /// Weights equal to 1 are dropped; `(p, q)` gives `Ã_{p,q}`, `(2, 2, n)`
    /// gives `D̃_{n+2}` and `(2, 3, 3|4|5)` gives `Ẽ_{6|7|8}`.
    pub fn extended_dynkin(&self) -> Option<ExtendedDynkin> {
        let mut w: Vec<usize> = self
            .weights
            .iter()
            .filter(|&&x| x > 1)
            .map(|&x| x as usize)
            .collect();
        w.sort_unstable();
        match w.as_slice() {
            [] => ExtendedDynkin::a(1, 1).ok(),
            [p] => ExtendedDynkin::a(*p, 1).ok(),
            [p, q] => ExtendedDynkin::a(*p, *q).ok(),
            [2, 2, n] => ExtendedDynkin::d(n + 2).ok(),
            [2, 3, 3] => ExtendedDynkin::e(6).ok(),
            [2, 3, 4] => ExtendedDynkin::e(7).ok(),
            [2, 3, 5] => ExtendedDynkin::e(8).ok(),
            _ => None,
        }
    }

    fn check_element(&self, x: &LElement) -> Result<()> {
        if x.p.len() != self.r() {
            return Err(Error::dim(format!(
                "element with {} coordinates on {} points",
                x.p.len(),
                self.r()
            )));
        }
        for (i, (&p, &w)) in x.p.iter().zip(&self.weights).enumerate() {
            if p >= w {
                return Err(Error::Parameter(format!(
                    "p_{} = {p} is outside 0..{w}",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    /// Normal form of `l·c + Σ k_i x_i` for arbitrary integers `k_i`.
    pub fn l_element(&self, l: i64, k: &[i64]) -> Result<LElement> {
        if k.len() != self.r() {
            return Err(Error::dim(format!(
                "{} coordinates on {} points",
                k.len(),
                self.r()
            )));
        }
        let mut l = l as i128;
        let mut p = Vec::with_capacity(k.len());
        for (&ki, &w) in k.iter().zip(&self.weights) {
            let (q, rem) = (ki as i128).div_mod_floor(&(w as i128));
            l += q;
            p.push(rem as u64);
        }
        let l = i64::try_from(l).map_err(|_| Error::Parameter("L_A element overflows".into()))?;
        Ok(LElement { l, p })
    }

    /// Validates an element already given in normal form.
    pub fn normal(&self, l: i64, p: Vec<u64>) -> Result<LElement> {
        let x = LElement { l, p };
        self.check_element(&x)?;
        Ok(x)
    }

    pub fn zero(&self) -> LElement {
        LElement {
            l: 0,
            p: vec![0; self.r()],
        }
    }

    /// `c = a_i x_i`.
    pub fn c(&self) -> LElement {
        LElement {
            l: 1,
            p: vec![0; self.r()],
        }
    }

    /// The generator `x_i` (0-based `i`).
    pub fn x(&self, i: usize) -> LElement {
        let mut k = vec![0; self.r()];
        k[i] = 1;
        self.l_element(0, &k).expect("valid index")
    }

    pub fn l_add(&self, x: &LElement, y: &LElement) -> Result<LElement> {
        self.check_element(x)?;
        self.check_element(y)?;
        let l = x
            .l
            .checked_add(y.l)
            .ok_or_else(|| Error::Parameter("L_A element overflows".into()))?;
        let k: Vec<i64> = x.p.iter().zip(&y.p).map(|(&a, &b)| (a + b) as i64).collect();
        self.l_element(l, &k)
    }

    pub fn l_neg(&self, x: &LElement) -> Result<LElement> {
        self.check_element(x)?;
        let l = x
            .l
            .checked_neg()
            .ok_or_else(|| Error::Parameter("L_A element overflows".into()))?;
        let k: Vec<i64> = x.p.iter().map(|&a| -(a as i64)).collect();
        self.l_element(l, &k)
    }

    pub fn l_sub(&self, x: &LElement, y: &LElement) -> Result<LElement> {
        self.l_add(x, &self.l_neg(y)?)
    }

    /// `k·x`.
    pub fn l_scale(&self, x: &LElement, k: i64) -> Result<LElement> {
        self.check_element(x)?;
        let overflow = || Error::Parameter("L_A element overflows".into());
        let l = x.l.checked_mul(k).ok_or_else(overflow)?;
        let coords = x
            .p
            .iter()
            .map(|&p| (p as i64).checked_mul(k).ok_or_else(overflow))
            .collect::<Result<Vec<_>>>()?;
        self.l_element(l, &coords)
    }

    /// Nonzero with `l >= 0` in normal form.
    pub fn is_positive(&self, x: &LElement) -> bool {
        x.l >= 0 && !x.is_zero()
    }

    /// `ω = (r - 2)c - Σ x_i`, whose normal form is `l = -2`, `p_i = a_i - 1`.
    pub fn omega(&self) -> LElement {
        let k = vec![-1; self.r()];
        self.l_element(self.r() as i64 - 2, &k).expect("small")
    }

    /// `deg x = l·a + Σ p_i a / a_i`.
    pub fn degree(&self, x: &LElement) -> BigInt {
        let a = BigInt::from(self.a);
        let mut d = BigInt::from(x.l) * &a;
        for (&p, &w) in x.p.iter().zip(&self.weights) {
            d += BigInt::from(p) * (&a / BigInt::from(w));
        }
        d
    }

    /// Dimension of the degree-`x` piece of the coordinate ring: `l + 1` for
    /// `l >= 0` in normal form, else 0.
    pub fn graded_dim(&self, x: &LElement) -> u64 {
        if x.l >= 0 {
            x.l as u64 + 1
        } else {
            0
        }
    }
}

pub fn default_points(r: usize) -> Vec<ProjPoint> {
    let mut lambda = vec![ProjPoint::Infinity];
    lambda.extend((0..r.saturating_sub(1)).map(|k| ProjPoint::int(k as i64)));
    lambda.truncate(r);
    lambda
}

/// Element `l·c + Σ p_i x_i` of `L_A` in normal form, `0 <= p_i < a_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LElement {
    pub l: i64,
    pub p: Vec<u64>,
}

impl LElement {
    pub fn is_zero(&self) -> bool {
        self.l == 0 && self.p.iter().all(|&p| p == 0)
    }
}

impl fmt::Display for LElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}c", self.l)?;
        for (i, p) in self.p.iter().enumerate() {
            if *p != 0 {
                write!(f, " + {p}x{}", i + 1)?;
            }
        }
        Ok(())
    }
}
