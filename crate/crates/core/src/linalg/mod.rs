//! Exact integer linear algebra: matrices, characteristic polynomials and
//! certified spectral radii. No floating point is used on the trusted path.

mod matrix;
mod poly;
mod spectral;

pub use matrix::{unimodular_inverse, IntMatrix};
pub use poly::{char_poly, cyclotomic_factorization, CyclotomicFactorization, MonicIntPoly};
pub use spectral::{
    default_tolerance, poly_spectral_radius, rational_to_f64, spectral_radius, CertifiedRadius,
};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Natural logarithm of a (possibly huge) non-negative integer.
pub fn ln_bigint(x: &BigInt) -> f64 {
    assert!(!x.is_negative(), "log of a negative integer");
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        use num_traits::ToPrimitive;
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top: BigInt = x >> shift;
    use num_traits::ToPrimitive;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

pub type IntVector = Vec<BigInt>;

pub fn int_vector(v: &[i64]) -> IntVector {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn unit_vector(n: usize, k: usize) -> IntVector {
    let mut v = vec![BigInt::zero(); n];
    v[k] = BigInt::from(1);
    v
}
