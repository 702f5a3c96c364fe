//! SL(2, Z): classification, spectral radii and conjugation of hyperbolic
//! elements into positive words in `U = [[1,1],[0,1]]` and `L = [[1,0],[1,1]]`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{ln_bigint, IntMatrix};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SL2Matrix {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl SL2Matrix {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self> {
        let m = SL2Matrix {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        };
        let det = &m.a * &m.d - &m.b * &m.c;
        if !det.is_one() {
            return Err(Error::Parameter(format!("determinant is {det}, expected 1")));
        }
        Ok(m)
    }

    fn raw(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        SL2Matrix { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::raw(BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one())
    }

    /// `U^k = [[1,k],[0,1]]`.
    pub fn u(k: impl Into<BigInt>) -> Self {
        Self::raw(BigInt::one(), k.into(), BigInt::zero(), BigInt::one())
    }

    /// `L^k = [[1,0],[k,1]]`.
    pub fn l(k: impl Into<BigInt>) -> Self {
        Self::raw(BigInt::one(), BigInt::zero(), k.into(), BigInt::one())
    }

    /// `R = [[0,-1],[1,0]]`, acting by `z -> -1/z`.
    pub fn r() -> Self {
        Self::raw(BigInt::zero(), -BigInt::one(), BigInt::one(), BigInt::zero())
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn to_rows(&self) -> [[BigInt; 2]; 2] {
        [
            [self.a.clone(), self.b.clone()],
            [self.c.clone(), self.d.clone()],
        ]
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn inverse(&self) -> Self {
        Self::raw(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn to_int_matrix(&self) -> IntMatrix {
        IntMatrix::new(2, 2, vec![self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone()])
            .expect("2x2")
    }

    pub fn from_int_matrix(m: &IntMatrix) -> Result<Self> {
        if m.rows() != 2 || m.cols() != 2 {
            return Err(Error::dim(format!("{}x{} is not 2x2", m.rows(), m.cols())));
        }
        Self::new(
            m.get(0, 0).clone(),
            m.get(0, 1).clone(),
            m.get(1, 0).clone(),
            m.get(1, 1).clone(),
        )
    }

    fn is_nonnegative(&self) -> bool {
        self.entries().iter().all(|x| !x.is_negative())
    }
}

impl std::ops::Mul for &SL2Matrix {
    type Output = SL2Matrix;

    fn mul(self, o: &SL2Matrix) -> SL2Matrix {
        SL2Matrix::raw(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }
}

impl std::ops::Neg for &SL2Matrix {
    type Output = SL2Matrix;

    fn neg(self) -> SL2Matrix {
        SL2Matrix::raw(-&self.a, -&self.b, -&self.c, -&self.d)
    }
}

impl fmt::Debug for SL2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Display for SL2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sl2Class {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl Sl2Class {
    pub fn as_str(&self) -> &'static str {
        match self {
            Sl2Class::Elliptic => "elliptic",
            Sl2Class::Parabolic => "parabolic",
            Sl2Class::Hyperbolic => "hyperbolic",
        }
    }
}

pub fn classify(m: &SL2Matrix) -> Sl2Class {
    let t = m.trace().abs();
    let two = BigInt::from(2);
    match t.cmp(&two) {
        std::cmp::Ordering::Less => Sl2Class::Elliptic,
        std::cmp::Ordering::Equal => Sl2Class::Parabolic,
        std::cmp::Ordering::Greater => Sl2Class::Hyperbolic,
    }
}

/// `ρ = (|tr| + sqrt(disc)) / 2` with `disc = tr^2 - 4` when hyperbolic, else 1.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticRadius {
    pub trace: BigInt,
    pub discriminant: BigInt,
    pub value: f64,
    pub ln_value: f64,
}

pub fn radius(m: &SL2Matrix) -> QuadraticRadius {
    let trace = m.trace();
    let discriminant = &trace * &trace - BigInt::from(4);
    let (value, ln_value) = if classify(m) == Sl2Class::Hyperbolic {
        let t = trace.abs();
        match t.to_f64().filter(|x| *x < 1e150) {
            Some(t) => {
                // (t + sqrt(t^2 - 4)) / 2, written to avoid cancellation
                let v = 0.5 * (t + ((t - 2.0) * (t + 2.0)).sqrt());
                (v, v.ln())
            }
            None => (f64::INFINITY, ln_bigint(&t)),
        }
    } else {
        (1.0, 0.0)
    };
    QuadraticRadius {
        trace,
        discriminant,
        value,
        ln_value,
    }
}

/// `p · m · p^{-1}`.
pub fn conjugate(m: &SL2Matrix, p: &SL2Matrix) -> SL2Matrix {
    &(p * m) * &p.inverse()
}

/// A letter of a signed word in `U` and `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UlLetter {
    U(BigInt),
    L(BigInt),
}

/// `M = sign · w_1 w_2 ... w_k` with letters `U^e` or `L^e`; `sign` is `-1`
/// when the returned flag is set. Euclid on the first column.
pub fn ul_word(m: &SL2Matrix) -> (Vec<UlLetter>, bool) {
    let (mut a, mut b, mut c, mut d) = (m.a.clone(), m.b.clone(), m.c.clone(), m.d.clone());
    // left multiplications applied so far, in order
    let mut applied = Vec::new();
    while !c.is_zero() {
        if a.is_zero() || a.abs() > c.abs() {
            let q = if a.is_zero() { -BigInt::one() } else { a.div_floor(&c) };
            a -= &q * &c;
            b -= &q * &d;
            applied.push(UlLetter::U(-q));
        } else {
            let q = c.div_floor(&a);
            c -= &q * &a;
            d -= &q * &b;
            applied.push(UlLetter::L(-q));
        }
    }
    // now [[a,b],[0,a]] with a = ±1
    let negated = a.is_negative();
    let tail = if negated { -b } else { b };
    let mut word: Vec<UlLetter> = applied
        .into_iter()
        .map(|l| match l {
            UlLetter::U(k) => UlLetter::U(-k),
            UlLetter::L(k) => UlLetter::L(-k),
        })
        .collect();
    if !tail.is_zero() {
        word.push(UlLetter::U(tail));
    }
    (word, negated)
}

/// `conjugator · M · conjugator^{-1} = Π_{k=n..1} L^{m_{2k}} U^{m_{2k-1}}`,
/// where `M` is the input, or its negative when `negated` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositiveWord {
    pub m: Vec<u64>,
    pub conjugator: SL2Matrix,
    pub negated: bool,
}

impl PositiveWord {
    /// The block product `Π_{k=n..1} [[1, m_{2k-1}], [m_{2k}, 1 + m_{2k-1} m_{2k}]]`.
    pub fn product(&self) -> SL2Matrix {
        let mut out = SL2Matrix::identity();
        for pair in self.m.chunks(2) {
            let block = &SL2Matrix::l(pair[1]) * &SL2Matrix::u(pair[0]);
            out = &block * &out;
        }
        out
    }

    /// Exact check of the defining identity against `original`.
    pub fn verify(&self, original: &SL2Matrix) -> bool {
        let target = if self.negated { -original } else { original.clone() };
        self.m.len() >= 2
            && self.m.len().is_multiple_of(2)
            && self.m.iter().all(|&k| k >= 1)
            && conjugate(&target, &self.conjugator) == self.product()
    }
}

/// `x = (p + s·sqrt(disc)) / q` with `disc` not a square and `q != 0`.
struct QuadIrrational<'a> {
    p: BigInt,
    s: i8,
    q: BigInt,
    isqrt: &'a BigInt,
}

impl QuadIrrational<'_> {
    fn floor(&self) -> BigInt {
        // p + s·sqrt(disc) lies strictly inside (m, m + 1)
        let m = if self.s > 0 {
            &self.p + self.isqrt
        } else {
            &self.p - self.isqrt - BigInt::one()
        };
        if self.q.is_positive() {
            m.div_floor(&self.q)
        } else {
            // (p + s·sqrt)/q = (-(p + s·sqrt))/(-q), and -(..) lies in (-m-1, -m)
            (-m - BigInt::one()).div_floor(&-&self.q)
        }
    }

    fn is_positive(&self) -> bool {
        self.floor() >= BigInt::zero()
    }
}

/// Attracting and repelling fixed points of a positive-trace hyperbolic
/// matrix acting by Möbius transformations.
fn fixed_points<'a>(m: &SL2Matrix, isqrt: &'a BigInt) -> (QuadIrrational<'a>, QuadIrrational<'a>) {
    let p = &m.a - &m.d;
    let q = BigInt::from(2) * &m.c;
    (
        QuadIrrational {
            p: p.clone(),
            s: 1,
            q: q.clone(),
            isqrt,
        },
        QuadIrrational { p, s: -1, q, isqrt },
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Letter {
    U,
    L,
}

fn letter_matrix(x: Letter, k: &BigInt) -> SL2Matrix {
    match x {
        Letter::U => SL2Matrix::u(k.clone()),
        Letter::L => SL2Matrix::l(k.clone()),
    }
}

/// Run-length word for a nonnegative matrix, left to right.
fn positive_runs(m: &SL2Matrix) -> Result<Vec<(Letter, BigInt)>> {
    let mut rest = m.clone();
    let mut runs: Vec<(Letter, BigInt)> = Vec::new();
    let max_quotient = |top: [&BigInt; 2], bottom: [&BigInt; 2]| -> Option<BigInt> {
        if top[0] < bottom[0] || top[1] < bottom[1] {
            return None;
        }
        (0..2)
            .filter(|&j| bottom[j].is_positive())
            .map(|j| top[j].div_floor(bottom[j]))
            .min()
    };
    while !rest.is_identity() {
        let row1 = [&rest.a, &rest.b];
        let row2 = [&rest.c, &rest.d];
        if let Some(k) = max_quotient(row1, row2) {
            rest = SL2Matrix::raw(&rest.a - &k * &rest.c, &rest.b - &k * &rest.d, rest.c, rest.d);
            runs.push((Letter::U, k));
        } else if let Some(k) = max_quotient(row2, row1) {
            rest = SL2Matrix::raw(rest.a.clone(), rest.b.clone(), &rest.c - &k * &rest.a, &rest.d - &k * &rest.b);
            runs.push((Letter::L, k));
        } else {
            return Err(Error::Internal(format!("{rest:?} is not a positive word")));
        }
    }
    Ok(runs)
}

/// Conjugates a hyperbolic element to a positive word in `L`/`U` blocks.
///
/// The attracting and repelling fixed points are moved by continued-fraction
/// steps until they lie on opposite sides of `0` with the attracting one
/// positive; a positive-trace matrix with that configuration has positive
/// entries. The result is canonicalised to the lexicographically least
/// block rotation.
pub fn positive_factorize(m: &SL2Matrix) -> Result<PositiveWord> {
    if classify(m) != Sl2Class::Hyperbolic {
        return Err(Error::Precondition(format!(
            "positive factorization needs |tr| > 2, got tr = {}",
            m.trace()
        )));
    }
    let negated = m.trace().is_negative();
    let mut cur = if negated { -m } else { m.clone() };
    let mut conj = SL2Matrix::identity();
    let disc = {
        let t = cur.trace();
        &t * &t - BigInt::from(4)
    };
    let isqrt = disc.sqrt();
    let mut apply = |x: SL2Matrix, cur: &mut SL2Matrix| {
        *cur = conjugate(cur, &x);
        conj = &x * &conj;
    };
    loop {
        let (alpha, beta) = fixed_points(&cur, &isqrt);
        if alpha.is_positive() && !beta.is_positive() {
            break;
        }
        let (fa, fb) = (alpha.floor(), beta.floor());
        if fa != fb {
            let k = fa.clone().max(fb);
            apply(SL2Matrix::u(-k), &mut cur);
            let (alpha, _) = fixed_points(&cur, &isqrt);
            if !alpha.is_positive() {
                apply(SL2Matrix::r(), &mut cur);
            }
        } else {
            apply(SL2Matrix::u(-fa), &mut cur);
            apply(SL2Matrix::r(), &mut cur);
        }
    }
    if !cur.is_nonnegative() {
        return Err(Error::Internal(format!("reduction ended at {cur:?}")));
    }
    let mut runs = positive_runs(&cur)?;
    // cyclically merge equal end letters, then rotate to start with L
    if runs.len() >= 2 && runs[0].0 == runs[runs.len() - 1].0 {
        let (x, k) = runs.pop().expect("nonempty");
        apply(letter_matrix(x, &k), &mut cur);
        runs[0].1 += k;
    }
    if runs[0].0 == Letter::U {
        let (x, k) = runs.remove(0);
        apply(letter_matrix(x, &k).inverse(), &mut cur);
        runs.push((x, k));
    }
    // runs = L^{m_2n} U^{m_2n-1} ... L^{m_2} U^{m_1}; pairs listed right to left
    let mut pairs: Vec<(BigInt, BigInt)> = runs
        .chunks(2)
        .map(|c| {
            debug_assert!(c.len() == 2 && c[0].0 == Letter::L && c[1].0 == Letter::U);
            (c[1].1.clone(), c[0].1.clone())
        })
        .collect();
    pairs.reverse();
    let n = pairs.len();
    let best = (0..n)
        .min_by(|&i, &j| {
            let rot = |s: usize| pairs[s..].iter().chain(&pairs[..s]);
            rot(i).cmp(rot(j))
        })
        .unwrap_or(0);
    // rotating by one moves the rightmost block B_1 to the far left: B_1 W B_1^{-1}
    for (u, l) in &pairs[..best] {
        let block = &SL2Matrix::l(l.clone()) * &SL2Matrix::u(u.clone());
        apply(block, &mut cur);
    }
    pairs.rotate_left(best);
    let mut exponents = Vec::with_capacity(2 * n);
    for (u, l) in pairs {
        for k in [u, l] {
            exponents.push(k.to_u64().ok_or_else(|| {
                Error::Unsupported(format!("block exponent {k} exceeds 64 bits"))
            })?);
        }
    }
    let word = PositiveWord {
        m: exponents,
        conjugator: conj,
        negated,
    };
    debug_assert!(word.verify(m));
    Ok(word)
}
