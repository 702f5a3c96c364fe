use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ProjPoint;
use crate::error::{Error, Result};

/// `z -> (a z + b) / (c z + d)` over `Q`, `ad - bc != 0`.
#[derive(Clone, PartialEq, Eq)]
pub struct Mobius {
    a: BigRational,
    b: BigRational,
    c: BigRational,
    d: BigRational,
}

fn homogeneous(p: &ProjPoint) -> (BigRational, BigRational) {
    match p {
        ProjPoint::Infinity => (BigRational::one(), BigRational::zero()),
        ProjPoint::Finite(q) => (q.clone(), BigRational::one()),
    }
}

fn dehomogenise(x: BigRational, y: BigRational) -> ProjPoint {
    if y.is_zero() {
        ProjPoint::Infinity
    } else {
        ProjPoint::Finite(x / y)
    }
}

impl Mobius {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Result<Self> {
        if (&a * &d - &b * &c).is_zero() {
            return Err(Error::Parameter("degenerate Möbius transformation".into()));
        }
        Ok(Mobius { a, b, c, d })
    }

    pub fn from_integers(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let q = |v: i64| BigRational::from_integer(BigInt::from(v));
        Self::new(q(a), q(b), q(c), q(d))
    }

    pub fn identity() -> Self {
        Self::from_integers(1, 0, 0, 1).expect("nondegenerate")
    }

    pub fn coefficients(&self) -> [&BigRational; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        let (x, y) = homogeneous(p);
        dehomogenise(&self.a * &x + &self.b * &y, &self.c * &x + &self.d * &y)
    }

    pub fn inverse(&self) -> Self {
        Mobius {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, o: &Mobius) -> Self {
        Mobius {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    /// The map sending `(∞, 0, 1)` to three distinct points.
    fn from_standard(p: &[ProjPoint; 3]) -> Result<Self> {
        let (x1, y1) = homogeneous(&p[0]);
        let (x2, y2) = homogeneous(&p[1]);
        let (x3, y3) = homogeneous(&p[2]);
        // α v1 + β v2 = v3
        let det = &x1 * &y2 - &x2 * &y1;
        if det.is_zero() {
            return Err(Error::Parameter("interpolation points must be distinct".into()));
        }
        let alpha = (&x3 * &y2 - &x2 * &y3) / &det;
        let beta = (&x1 * &y3 - &x3 * &y1) / &det;
        Mobius::new(&alpha * x1, &beta * x2, alpha * y1, beta * y2)
            .map_err(|_| Error::Parameter("interpolation points must be distinct".into()))
    }

    /// The unique transformation with `g(src[k]) = dst[k]` for `k = 0, 1, 2`.
    pub fn through(src: &[ProjPoint; 3], dst: &[ProjPoint; 3]) -> Result<Self> {
        let s = Self::from_standard(src)?;
        let d = Self::from_standard(dst)?;
        Ok(d.compose(&s.inverse()))
    }
}

impl fmt::Debug for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z -> ({} z + {}) / ({} z + {})", self.a, self.b, self.c, self.d)
    }
}
