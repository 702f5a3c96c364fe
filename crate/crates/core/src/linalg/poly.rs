use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// Monic polynomial with integer coefficients, stored in ascending order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MonicIntPoly {
    coeffs: Vec<BigInt>,
}

impl MonicIntPoly {
    /// Coefficients in ascending order; the last one must be 1.
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        match coeffs.last() {
            Some(c) if c.is_one() => Ok(MonicIntPoly { coeffs }),
            _ => Err(Error::Parameter("polynomial is not monic".into())),
        }
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

}

impl fmt::Debug for MonicIntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MonicIntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    write!(f, "x")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Characteristic polynomial `det(xI - m)` by the Faddeev–LeVerrier recursion.
///
/// Every division in the recursion is exact over the integers.
pub fn char_poly(m: &IntMatrix) -> Result<MonicIntPoly> {
    if !m.is_square() {
        return Err(Error::dim(format!(
            "characteristic polynomial of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut acc = IntMatrix::identity(n);
    for k in 1..=n {
        let am = m * &acc;
        let (c, rem) = (-am.trace()).div_rem(&BigInt::from(k));
        debug_assert!(rem.is_zero());
        acc = am;
        for i in 0..n {
            let v = acc.get(i, i) + &c;
            acc.set(i, i, v);
        }
        coeffs[n - k] = c;
    }
    MonicIntPoly::new(coeffs)
}

/// Dense integer polynomial, ascending coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Poly(pub Vec<BigInt>);

impl Poly {
    pub fn trimmed(mut v: Vec<BigInt>) -> Poly {
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        Poly(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lead(&self) -> &BigInt {
        self.0.last().expect("leading coefficient of zero polynomial")
    }

    pub fn derivative(&self) -> Poly {
        Poly::trimmed(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    pub fn content(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the (positive) content.
    pub fn primitive(&self) -> Poly {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        Poly(self.0.iter().map(|c| c / &g).collect())
    }

    /// Pseudo-remainder `lead(d)^(deg a - deg d + 1) * a mod d`.
    pub fn prem(&self, d: &Poly) -> Poly {
        assert!(!d.is_zero());
        let mut r = self.0.clone();
        let dd = d.degree();
        let ld = d.lead().clone();
        let mut steps = 0usize;
        let budget = self.degree().saturating_sub(dd) + 1;
        while !r.is_empty() && r.len() > dd {
            let k = r.len() - 1 - dd;
            let lr = r.last().unwrap().clone();
            for c in r.iter_mut() {
                *c *= &ld;
            }
            for (i, c) in d.0.iter().enumerate() {
                r[i + k] -= &lr * c;
            }
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
            steps += 1;
        }
        if steps < budget && !r.is_empty() {
            let f = ld.pow((budget - steps) as u32);
            for c in r.iter_mut() {
                *c *= &f;
            }
        }
        Poly(r)
    }

    /// Exact division by a monic polynomial; `None` when it does not divide.
    pub fn div_monic(&self, d: &Poly) -> Option<Poly> {
        debug_assert!(d.lead().is_one());
        if self.is_zero() {
            return Some(Poly(vec![]));
        }
        if self.degree() < d.degree() {
            return None;
        }
        let mut r = self.0.clone();
        let dd = d.degree();
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].clone();
            if !c.is_zero() {
                for (i, dc) in d.0.iter().enumerate() {
                    r[i + k] -= &c * dc;
                }
            }
            q[k] = c;
        }
        if r.iter().all(Zero::is_zero) {
            Some(Poly::trimmed(q))
        } else {
            None
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly(vec![]);
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::trimmed(out)
    }

    /// Greatest common divisor up to a constant factor (primitive PRS).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.primitive(), other.primitive());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.prem(&b).primitive();
            a = b;
            b = r;
        }
        a
    }

    /// Sign of `p(u/v)` for `v > 0`, computed as the sign of `v^deg p(u/v)`.
    pub fn sign_at(&self, u: &BigInt, v: &BigInt) -> i8 {
        if self.is_zero() {
            return 0;
        }
        let mut acc = BigInt::zero();
        let mut vpow = BigInt::one();
        for c in self.0.iter().rev() {
            // Horner in the homogenised form: acc = acc * u + c * v^k.
            acc = acc * u + c * &vpow;
            vpow *= v;
        }
        // acc = sum c_k u^k v^(deg - k) once the loop finishes.
        sign_of(&acc)
    }
}

fn sign_of(x: &BigInt) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Sturm chain `p, p', -rem(p, p'), ...` with positive rescalings only.
#[derive(Clone, Debug)]
pub(crate) struct SturmChain {
    chain: Vec<Poly>,
}

impl SturmChain {
    pub fn new(p: &Poly) -> SturmChain {
        let mut chain = vec![p.primitive()];
        let d = p.derivative().primitive();
        if !d.is_zero() {
            chain.push(d);
        }
        while chain.len() >= 2 {
            let n = chain.len();
            let (a, b) = (&chain[n - 2], &chain[n - 1]);
            if b.degree() == 0 {
                break;
            }
            let r = sturm_remainder(a, b);
            if r.is_zero() {
                break;
            }
            chain.push(r);
        }
        SturmChain { chain }
    }

    fn variations<I: Iterator<Item = i8>>(signs: I) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    fn variations_at(&self, u: &BigInt, v: &BigInt) -> usize {
        Self::variations(self.chain.iter().map(|p| p.sign_at(u, v)))
    }

    fn variations_at_infinity(&self) -> usize {
        Self::variations(self.chain.iter().map(|p| sign_of(p.lead())))
    }

    /// Number of distinct real roots strictly greater than `u/v` (`v > 0`).
    ///
    /// For a square-free chain `V(a) - V(b)` counts roots in `(a, b]` for any
    /// `a < b`, including when `a` itself is a root.
    pub fn roots_above(&self, u: &BigInt, v: &BigInt) -> usize {
        self.variations_at(u, v) - self.variations_at_infinity()
    }
}

/// `-(c * a mod b)` with `c > 0`, made primitive.
fn sturm_remainder(a: &Poly, b: &Poly) -> Poly {
    let delta = a.degree() - b.degree();
    let mut r = a.prem(b);
    // prem multiplies by lead(b)^(delta+1); undo a negative factor.
    if b.lead().is_negative() && (delta + 1) % 2 == 1 {
        r = Poly(r.0.into_iter().map(|c| -c).collect());
    }
    Poly(r.primitive().0.into_iter().map(|c| -c).collect())
}

/// Square-free part `p / gcd(p, p')`, primitive.
pub(crate) fn square_free(p: &Poly) -> Poly {
    let g = p.gcd(&p.derivative());
    if g.degree() == 0 {
        return p.primitive();
    }
    // Exact division over Q, made integral by pseudo-division.
    let lg = g.lead().clone();
    let k = p.degree() - g.degree() + 1;
    let scaled = Poly(p.0.iter().map(|c| c * lg.pow(k as u32)).collect());
    let q = pseudo_quotient(&scaled, &g);
    q.primitive()
}

fn pseudo_quotient(a: &Poly, d: &Poly) -> Poly {
    let mut r = a.0.clone();
    let dd = d.degree();
    let ld = d.lead();
    let mut q = vec![BigInt::zero(); r.len() - dd];
    for k in (0..q.len()).rev() {
        let (c, rem) = r[k + dd].div_rem(ld);
        debug_assert!(rem.is_zero());
        for (i, dc) in d.0.iter().enumerate() {
            r[i + k] -= &c * dc;
        }
        q[k] = c;
    }
    Poly::trimmed(q)
}

fn euler_phi(mut m: u64) -> u64 {
    let mut result = m;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

fn mobius(mut m: u64) -> i8 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

fn x_pow_minus_one(k: usize) -> Poly {
    let mut v = vec![BigInt::zero(); k + 1];
    v[0] = BigInt::from(-1);
    v[k] = BigInt::one();
    Poly(v)
}

/// The `m`-th cyclotomic polynomial `prod_{d | m} (x^(m/d) - 1)^mu(d)`.
pub(crate) fn cyclotomic(m: u64) -> Poly {
    let mut num = Poly(vec![BigInt::one()]);
    let mut den = Poly(vec![BigInt::one()]);
    for d in 1..=m {
        if !m.is_multiple_of(d) {
            continue;
        }
        let f = x_pow_minus_one((m / d) as usize);
        match mobius(d) {
            1 => num = num.mul(&f),
            -1 => den = den.mul(&f),
            _ => {}
        }
    }
    let den = if den.lead().is_negative() {
        Poly(den.0.into_iter().map(|c| -c).collect())
    } else {
        den
    };
    let num = if num.lead().is_negative() {
        Poly(num.0.into_iter().map(|c| -c).collect())
    } else {
        num
    };
    num.div_monic(&den).expect("cyclotomic division is exact")
}

/// Decomposition `p = x^k * (product of cyclotomic factors) * rest`.
#[derive(Clone, Debug)]
pub(crate) struct CyclotomicSplit {
    pub zero_multiplicity: usize,
    /// `(m, multiplicity)` for each cyclotomic factor found.
    pub cyclotomic: Vec<(u64, usize)>,
    pub rest: Poly,
}

/// Exact factorisation `p = x^k · Π Φ_m^{e_m} · rest` where `rest` has
/// neither zero roots nor roots of unity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicFactorization {
    pub zero_multiplicity: usize,
    /// `(m, e_m)` for each cyclotomic factor `Φ_m` found.
    pub cyclotomic: Vec<(u64, usize)>,
    pub rest: MonicIntPoly,
}

impl CyclotomicFactorization {
    /// All roots are zero or roots of unity.
    pub fn is_cyclotomic(&self) -> bool {
        self.rest.degree() == 0
    }
}

pub fn cyclotomic_factorization(p: &MonicIntPoly) -> CyclotomicFactorization {
    let split = split_cyclotomic(p);
    CyclotomicFactorization {
        zero_multiplicity: split.zero_multiplicity,
        cyclotomic: split.cyclotomic,
        rest: MonicIntPoly::new(split.rest.0).expect("quotient of monic by monic is monic"),
    }
}

pub(crate) fn split_cyclotomic(p: &MonicIntPoly) -> CyclotomicSplit {
    let coeffs = p.coefficients();
    let zero_multiplicity = coeffs.iter().take_while(|c| c.is_zero()).count();
    let mut rest = Poly(coeffs[zero_multiplicity..].to_vec());
    let mut found = Vec::new();
    let d0 = rest.degree() as u64;
    // phi(m) >= sqrt(m / 2), so phi(m) <= d0 forces m <= 2 d0^2.
    let bound = (2 * d0 * d0).max(2);
    for m in 1..=bound {
        if rest.degree() == 0 {
            break;
        }
        if euler_phi(m) > rest.degree() as u64 {
            continue;
        }
        let phi_m = cyclotomic(m);
        let mut mult = 0;
        while rest.degree() >= phi_m.degree() {
            match rest.div_monic(&phi_m) {
                Some(q) => {
                    rest = q;
                    mult += 1;
                }
                None => break,
            }
        }
        if mult > 0 {
            found.push((m, mult));
        }
    }
    CyclotomicSplit {
        zero_multiplicity,
        cyclotomic: found,
        rest,
    }
}

/// Monic polynomial whose roots are the products `r_i r_j` (`i <= j`) of the
/// roots of the monic `p`, built from power sums via Newton's identities.
pub(crate) fn symmetric_square(p: &Poly) -> Poly {
    let d = p.degree();
    let n = d * (d + 1) / 2;
    let c = &p.0;
    // Power sums s_1 .. s_{2n} of the roots of p.
    let mut s = vec![BigInt::zero(); 2 * n + 1];
    s[0] = BigInt::from(d);
    for k in 1..=2 * n {
        let mut acc = BigInt::zero();
        for i in 1..=k.min(d) {
            if i < k {
                acc += &c[d - i] * &s[k - i];
            } else {
                acc += &c[d - i] * BigInt::from(k);
            }
        }
        s[k] = -acc;
    }
    let two = BigInt::from(2);
    let big_s: Vec<BigInt> = (0..=n)
        .map(|k| {
            if k == 0 {
                BigInt::from(n)
            } else {
                (&s[k] * &s[k] + &s[2 * k]) / &two
            }
        })
        .collect();
    let mut out = vec![BigInt::zero(); n + 1];
    out[n] = BigInt::one();
    for k in 1..=n {
        let mut acc = big_s[k].clone();
        for i in 1..k {
            acc += &out[n - i] * &big_s[k - i];
        }
        let (q, r) = acc.div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero(), "Newton identity division must be exact");
        out[n - k] = -q;
    }
    Poly(out)
}

/// `u/v` with `v > 0` for a non-negative rational.
pub(crate) fn parts(x: &BigRational) -> (BigInt, BigInt) {
    (x.numer().clone(), x.denom().clone())
}
