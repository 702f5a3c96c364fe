use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::IntMatrix;
use super::poly::{
    char_poly, parts, split_cyclotomic, square_free, symmetric_square, MonicIntPoly, Poly,
    SturmChain,
};
use crate::error::{Error, Result};

/// Rational enclosure `[lower, upper]` of a spectral radius.
#[derive(Clone, PartialEq, Eq)]
pub struct CertifiedRadius {
    pub lower: BigRational,
    pub upper: BigRational,
}

impl CertifiedRadius {
    pub fn exact(v: BigRational) -> Self {
        CertifiedRadius {
            lower: v.clone(),
            upper: v,
        }
    }

    pub fn width(&self) -> BigRational {
        &self.upper - &self.lower
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lower + &self.upper) / BigRational::from_integer(BigInt::from(2))
    }

    pub fn midpoint_f64(&self) -> f64 {
        rational_to_f64(&self.midpoint())
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    /// Whether `x` lies within `slack` of the enclosure.
    pub fn contains_f64(&self, x: f64, slack: f64) -> bool {
        rational_to_f64(&self.lower) - slack <= x && x <= rational_to_f64(&self.upper) + slack
    }

    /// Whether the two enclosures overlap after widening each by `slack`.
    pub fn agrees_with(&self, other: &CertifiedRadius, slack: &BigRational) -> bool {
        self.lower <= (&other.upper + slack) && other.lower <= (&self.upper + slack)
    }
}

impl fmt::Debug for CertifiedRadius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}] (~{:.12})",
            self.lower,
            self.upper,
            self.midpoint_f64()
        )
    }
}

/// The default enclosure width, `10^-9`.
pub fn default_tolerance() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10u64.pow(9)))
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Very large numerator/denominator: scale by bit lengths first.
    let nb = x.numer().bits() as i64;
    let db = x.denom().bits() as i64;
    let shift = nb - db;
    let scaled = if shift > 0 {
        x / BigRational::from_integer(BigInt::one() << (shift as u64))
    } else {
        x * BigRational::from_integer(BigInt::one() << ((-shift) as u64))
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}

/// Certified enclosure of `max |lambda|` over the eigenvalues of `m`.
pub fn spectral_radius(m: &IntMatrix, tol: &BigRational) -> Result<CertifiedRadius> {
    if !m.is_square() {
        return Err(Error::dim("spectral radius of a non-square matrix"));
    }
    poly_spectral_radius(&char_poly(m)?, tol)
}

/// Certified enclosure of the largest root modulus of a monic polynomial.
///
/// Factors `x^k` and cyclotomic factors are removed exactly; their roots have
/// modulus 0 and 1. For the remaining factor `q`, the squared moduli of its
/// roots are roots of the polynomial `R` whose roots are the pairwise products
/// of roots of `q`, and every real root of `R` is bounded by `rho(q)^2`.
/// Hence `rho(q)^2` is the largest real root of `R`, which is isolated by
/// bisection on `r` using Sturm counts of roots of `R` above `r^2`.
pub fn poly_spectral_radius(p: &MonicIntPoly, tol: &BigRational) -> Result<CertifiedRadius> {
    if !tol.is_positive() {
        return Err(Error::Parameter(format!("tolerance must be positive, got {tol}")));
    }
    let split = split_cyclotomic(p);
    let unit_part = if split.cyclotomic.is_empty() {
        BigRational::zero()
    } else {
        BigRational::one()
    };
    if split.rest.degree() == 0 {
        return Ok(CertifiedRadius::exact(unit_part));
    }
    let rest = largest_modulus(&split.rest, tol);
    Ok(CertifiedRadius {
        lower: rest.lower.max(unit_part.clone()),
        upper: rest.upper.max(unit_part),
    })
}

fn largest_modulus(q: &Poly, tol: &BigRational) -> CertifiedRadius {
    debug_assert!(q.lead().is_one());
    if q.degree() == 1 {
        return CertifiedRadius::exact(BigRational::from_integer(q.0[0].abs()));
    }
    let products = symmetric_square(q);
    let chain = SturmChain::new(&square_free(&products));
    // Cauchy bound on root moduli of q.
    let bound = q.0[..q.degree()]
        .iter()
        .map(Signed::abs)
        .max()
        .unwrap_or_else(BigInt::zero)
        + BigInt::one();
    let mut lo = BigRational::zero();
    let mut hi = BigRational::from_integer(bound);
    let above = |r: &BigRational| -> usize {
        let y = r * r;
        let (u, v) = parts(&y);
        chain.roots_above(&u, &v)
    };
    debug_assert!(above(&lo) >= 1, "nonzero roots must give a positive product");
    let two = BigRational::from_integer(BigInt::from(2));
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) / &two;
        if above(&mid) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    CertifiedRadius { lower: lo, upper: hi }
}
