//! Words of auto-equivalences, their entropy, and an independent estimator
//! of `h_t` on Dynkin path algebras from the growth of Hom dimensions.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{EulerLattice, LatticeEndo};
use crate::linalg::{
    char_poly, cyclotomic_factorization, spectral_radius, CertifiedRadius, CyclotomicFactorization,
    IntMatrix, IntVector, MonicIntPoly,
};
use crate::orbifold::{LElement, Mobius, OrbifoldLine, WeightData};
use crate::quiver::{DynkinType, Quiver};
use crate::sl2z::{self, SL2Matrix};

/// Where a word acts.
#[derive(Clone, Debug)]
pub enum Context {
    Orbifold(Arc<OrbifoldLine>),
    Hereditary(Arc<Hereditary>),
}

/// Path algebra of an acyclic quiver, with its Dynkin type when known.
#[derive(Clone, Debug)]
pub struct Hereditary {
    quiver: Quiver,
    dynkin: Option<DynkinType>,
    lattice: Arc<EulerLattice>,
}

impl Hereditary {
    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn dynkin(&self) -> Option<&DynkinType> {
        self.dynkin.as_ref()
    }

    pub fn lattice(&self) -> &Arc<EulerLattice> {
        &self.lattice
    }
}

impl Context {
    pub fn orbifold(data: WeightData) -> Result<Self> {
        Ok(Context::Orbifold(Arc::new(OrbifoldLine::new(data)?)))
    }

    pub fn quiver(quiver: Quiver) -> Self {
        Self::hereditary(quiver, None)
    }

    pub fn dynkin(d: DynkinType) -> Self {
        Self::hereditary(d.quiver().clone(), Some(d))
    }

    fn hereditary(quiver: Quiver, dynkin: Option<DynkinType>) -> Self {
        let lattice = EulerLattice::with_default_labels(quiver.euler_matrix()).expect("square");
        Context::Hereditary(Arc::new(Hereditary {
            quiver,
            dynkin,
            lattice: Arc::new(lattice),
        }))
    }

    pub fn lattice(&self) -> &Arc<EulerLattice> {
        match self {
            Context::Orbifold(l) => l.lattice(),
            Context::Hereditary(h) => &h.lattice,
        }
    }

    /// Matrix of a single generator.
    pub fn generator_endo(&self, g: &Generator) -> Result<LatticeEndo> {
        let lattice = self.lattice().clone();
        match (self, g) {
            (_, Generator::Shift(k)) => {
                let n = lattice.rank();
                let m = if k.rem_euclid(2) == 0 {
                    IntMatrix::identity(n)
                } else {
                    -&IntMatrix::identity(n)
                };
                LatticeEndo::new(lattice, m)
            }
            (Context::Orbifold(l), Generator::Serre) => Ok(l.serre_matrix()),
            (Context::Hereditary(h), Generator::Serre) => {
                LatticeEndo::new(lattice, h.quiver.serre_matrix())
            }
            (Context::Orbifold(l), Generator::Twist(x)) => l.twist_matrix(x),
            (Context::Orbifold(l), Generator::Auto { sigma, mobius }) => {
                let g = match mobius {
                    Some(g) => g.clone(),
                    None => l.solve_mobius(sigma)?,
                };
                l.auto_matrix(sigma, &g)
            }
            (Context::Orbifold(l), Generator::Generic(m)) => l.generic(m.clone()),
            (Context::Hereditary(_), Generator::Generic(m)) => {
                let e = LatticeEndo::new(lattice, m.clone())?;
                if !e.is_isometry() {
                    return Err(Error::NotIsometry);
                }
                Ok(e)
            }
            (Context::Hereditary(_), g) => Err(Error::Parameter(format!(
                "generator {} needs an orbifold context",
                g.name()
            ))),
        }
    }

    fn chi_sign(&self) -> Option<std::cmp::Ordering> {
        match self {
            Context::Orbifold(l) => Some(l.weights().chi().cmp(&BigRational::zero())),
            Context::Hereditary(_) => None,
        }
    }
}

#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug)]
pub enum Generator {
    /// `[k]`
    Shift(i64),
    /// `- ⊗ O(x)`
    Twist(LElement),
    /// Pull-back along an automorphism permuting the points by the 0-based
    /// `sigma`; the Möbius map is solved for when omitted.
    Auto {
        sigma: Vec<usize>,
        mobius: Option<Mobius>,
    },
    Serre,
    /// A lattice isometry given by its matrix.
    Generic(IntMatrix),
}

impl Generator {
    pub fn name(&self) -> &'static str {
        match self {
            Generator::Shift(_) => "shift",
            Generator::Twist(_) => "twist",
            Generator::Auto { .. } => "auto",
            Generator::Serre => "serre",
            Generator::Generic(_) => "generic",
        }
    }
}

/// A validated word; the product is taken rightmost-first.
#[derive(Clone, Debug)]
pub struct AuteqWord {
    context: Context,
    gens: Vec<Generator>,
    factors: Vec<LatticeEndo>,
}

impl AuteqWord {
    pub fn new(context: Context, gens: Vec<Generator>) -> Result<Self> {
        let factors = gens
            .iter()
            .map(|g| context.generator_endo(g))
            .collect::<Result<Vec<_>>>()?;
        Ok(AuteqWord {
            context,
            gens,
            factors,
        })
    }

    pub fn context(&self) -> &Context {
        &self.context
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    /// `w` repeated `k` times.
    pub fn power(&self, k: usize) -> Self {
        let mut out = self.clone();
        out.gens = self.gens.iter().cloned().cycle().take(self.gens.len() * k).collect();
        out.factors = self.factors.iter().cloned().cycle().take(self.factors.len() * k).collect();
        out
    }

    fn has_generic(&self) -> bool {
        self.gens.iter().any(|g| matches!(g, Generator::Generic(_)))
    }
}

/// `N(F)` for the word `F`.
pub fn word_to_endo(word: &AuteqWord) -> Result<LatticeEndo> {
    let mut acc = LatticeEndo::identity(word.context.lattice().clone());
    for f in &word.factors {
        acc = acc.compose(f)?;
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    ChiPositive,
    ChiNegative,
    TubularPhi,
    HereditarySpectral,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ChiPositive => "chi-positive",
            Method::ChiNegative => "chi-negative",
            Method::TubularPhi => "tubular-phi",
            Method::HereditarySpectral => "hereditary-spectral",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `ρ` is the largest root modulus of the polynomial, or
/// `(|trace| + sqrt(discriminant)) / 2` for a hyperbolic quadratic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Polynomial(MonicIntPoly),
    Quadratic { trace: BigInt, discriminant: BigInt },
}

#[derive(Clone, Debug)]
pub struct EntropyReport {
    /// Natural logarithm of `ρ`.
    pub h: f64,
    /// Enclosure of `ρ(N(F))`.
    pub rho: CertifiedRadius,
    pub char_poly: MonicIntPoly,
    pub factorization: CyclotomicFactorization,
    pub certificate: Certificate,
    pub method: Method,
    pub phi: Option<SL2Matrix>,
    pub matrix: IntMatrix,
}

fn ln_midpoint(rho: &CertifiedRadius) -> f64 {
    if rho.contains(&BigRational::one()) {
        0.0
    } else {
        rho.midpoint_f64().ln().max(0.0)
    }
}

/// `h(F) = log ρ(N(F))`, with the branch-specific checks.
pub fn entropy(word: &AuteqWord, tol: &BigRational) -> Result<EntropyReport> {
    let endo = word_to_endo(word)?;
    let matrix = endo.matrix().clone();
    let poly = char_poly(&matrix)?;
    let factorization = cyclotomic_factorization(&poly);
    let rho = spectral_radius(&matrix, tol)?;
    let base = |h, rho, method, certificate, phi| EntropyReport {
        h,
        rho,
        char_poly: poly.clone(),
        factorization: factorization.clone(),
        certificate,
        method,
        phi,
        matrix: matrix.clone(),
    };
    let polynomial = Certificate::Polynomial(poly.clone());
    match (&word.context, word.context.chi_sign()) {
        (Context::Hereditary(_), _) => {
            let h = ln_midpoint(&rho);
            Ok(base(h, rho, Method::HereditarySpectral, polynomial, None))
        }
        (Context::Orbifold(_), Some(std::cmp::Ordering::Greater)) if word.has_generic() => {
            let h = ln_midpoint(&rho);
            Ok(base(h, rho, Method::HereditarySpectral, polynomial, None))
        }
        (Context::Orbifold(_), Some(std::cmp::Ordering::Less)) if word.has_generic() => {
            Err(Error::Unsupported(
                "generic isometries are not supported when χ_A < 0".into(),
            ))
        }
        (Context::Orbifold(l), Some(std::cmp::Ordering::Equal)) => {
            let phi = l.phi_map(&endo)?;
            let q = sl2z::radius(&phi);
            let rho_phi = spectral_radius(&phi.to_int_matrix(), tol)?;
            if !rho.agrees_with(&rho_phi, tol) {
                return Err(Error::Internal(format!(
                    "ρ(N(F)) = {rho:?} disagrees with ρ(φ(F)) = {rho_phi:?}"
                )));
            }
            let certificate = Certificate::Quadratic {
                trace: q.trace.clone(),
                discriminant: q.discriminant.clone(),
            };
            Ok(base(q.ln_value, rho, Method::TubularPhi, certificate, Some(phi)))
        }
        (Context::Orbifold(_), sign) => {
            let method = if sign == Some(std::cmp::Ordering::Greater) {
                Method::ChiPositive
            } else {
                Method::ChiNegative
            };
            if !rho.contains(&BigRational::one()) || !factorization.is_cyclotomic() {
                return Err(Error::Internal(format!(
                    "word with χ_A ≠ 0 has spectral radius {rho:?}, expected 1"
                )));
            }
            Ok(base(0.0, rho, method, polynomial, None))
        }
    }
}

/// Formal direct sum of shifted indecomposables `M[s]`, each recorded by its
/// dimension vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedObject {
    summands: Vec<(IntVector, i64)>,
}

impl DerivedObject {
    /// Checks every dimension vector against the positive roots of `d`.
    pub fn new(d: &DynkinType, summands: Vec<(IntVector, i64)>) -> Result<Self> {
        let roots = d.positive_roots();
        for (r, _) in &summands {
            if !roots.contains(r) {
                return Err(Error::Parameter(format!(
                    "{:?} is not a positive root of {d}",
                    r.iter().map(ToString::to_string).collect::<Vec<_>>()
                )));
            }
        }
        Ok(DerivedObject { summands })
    }

    /// `⊕ P_i`, the free module of rank one.
    pub fn generator(d: &DynkinType) -> Self {
        let summands = d.quiver().projective_dims().into_iter().map(|p| (p, 0)).collect();
        DerivedObject { summands }
    }

    pub fn summands(&self) -> &[(IntVector, i64)] {
        &self.summands
    }

    /// Applies a word of `Serre` and `Shift` generators, rightmost first.
    pub fn apply(&self, d: &DynkinType, word: &[Generator]) -> Result<Self> {
        let summands = self
            .summands
            .iter()
            .map(|(r, s)| apply_one(d, word, r, *s))
            .collect::<Result<Vec<_>>>()?;
        Ok(DerivedObject { summands })
    }
}

fn apply_one(d: &DynkinType, word: &[Generator], root: &[BigInt], shift: i64) -> Result<(IntVector, i64)> {
    let mut state = (root.to_vec(), shift);
    for g in word.iter().rev() {
        state = match g {
            Generator::Serre => d.ar_translate(&state.0, state.1)?,
            Generator::Shift(k) => (state.0, state.1 + k),
            other => {
                return Err(Error::Parameter(format!(
                    "the estimator only takes serre and shift, got {}",
                    other.name()
                )))
            }
        };
    }
    Ok(state)
}

/// `δ'_t(A, X) = Σ_{(M, s)} (Σ dim M) e^{s t}`.
pub fn delta_prime(obj: &DerivedObject, t: f64) -> f64 {
    obj.summands
        .iter()
        .map(|(r, s)| {
            let dim = r.iter().sum::<BigInt>().to_f64().unwrap_or(f64::INFINITY);
            dim * (*s as f64 * t).exp()
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Estimate {
    /// `(t, (1/n) log δ'_t(A, F^n A))` at `n = n_max`.
    pub values: Vec<(f64, f64)>,
    /// Exact `h_t / t` for `t > 0`: the largest orbit shift rate.
    pub slope: BigRational,
    /// Exact `h_t / t` for `t < 0`: the smallest orbit shift rate.
    pub slope_negative: BigRational,
}

impl Estimate {
    /// The exact `h_t`.
    pub fn exact(&self, t: f64) -> f64 {
        let s = if t >= 0.0 { &self.slope } else { &self.slope_negative };
        crate::linalg::rational_to_f64(s) * t
    }
}

/// Shift gain per application along the eventual cycle of one summand.
fn orbit_rate(d: &DynkinType, word: &[Generator], root: &[BigInt]) -> Result<BigRational> {
    let mut seen: HashMap<IntVector, (usize, i64)> = HashMap::new();
    let mut state = (root.to_vec(), 0i64);
    for step in 0.. {
        if let Some(&(first, shift)) = seen.get(&state.0) {
            return Ok(BigRational::new(
                BigInt::from(state.1 - shift),
                BigInt::from(step - first),
            ));
        }
        seen.insert(state.0.clone(), (step, state.1));
        state = apply_one(d, word, &state.0, state.1)?;
    }
    unreachable!()
}

/// Iterates the word on `⊕ P_i` and reports `(1/n) log δ'_t` at `n = n_max`
/// alongside the exact slope read off from the eventually periodic orbits.
pub fn estimate_entropy(
    d: &DynkinType,
    word: &[Generator],
    t_values: &[f64],
    n_max: usize,
) -> Result<Estimate> {
    if n_max == 0 {
        return Err(Error::Parameter("n_max must be at least 1".into()));
    }
    let g = DerivedObject::generator(d);
    let mut rates = Vec::with_capacity(g.summands.len());
    for (r, _) in &g.summands {
        rates.push(orbit_rate(d, word, r)?);
    }
    let slope = rates.iter().max().cloned().expect("nonempty quiver");
    let slope_negative = rates.iter().min().cloned().expect("nonempty quiver");
    let mut x = g;
    for _ in 0..n_max {
        x = x.apply(d, word)?;
    }
    let values = t_values
        .iter()
        .map(|&t| (t, delta_prime(&x, t).ln() / n_max as f64))
        .collect();
    Ok(Estimate {
        values,
        slope,
        slope_negative,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GyReport {
    pub log_rho: f64,
    /// `s_1, ..., s_{n_max}`.
    pub curve: Vec<f64>,
    /// `|s_{n_max} - log ρ|`.
    pub final_deviation: f64,
    /// Largest `|s_n - log ρ|` over the last quarter of `n`.
    pub tail_deviation: f64,
    /// Largest `s_n - log ρ` over all `n`.
    pub max_excess: f64,
    /// Whether the last quarter is monotone.
    pub tail_monotone: bool,
}

/// Growth curve of `N(F)` against `log ρ(N(F))`.
pub fn gy_consistency(word: &AuteqWord, n_max: usize, tol: &BigRational) -> Result<GyReport> {
    let endo = word_to_endo(word)?;
    let curve = endo.growth_curve(n_max)?;
    if let Some(n) = curve.degenerate_at {
        return Err(Error::DegenerateGrowth { n });
    }
    let log_rho = ln_midpoint(&spectral_radius(endo.matrix(), tol)?);
    let values = curve.values;
    let start = n_max - n_max.div_ceil(4);
    let tail = &values[start..];
    let dev = |s: &f64| (s - log_rho).abs();
    let increasing = tail.windows(2).all(|w| w[1] >= w[0]);
    let decreasing = tail.windows(2).all(|w| w[1] <= w[0]);
    Ok(GyReport {
        log_rho,
        final_deviation: dev(values.last().expect("n_max ≥ 1")),
        tail_deviation: tail.iter().map(dev).fold(0.0, f64::max),
        max_excess: values.iter().map(|s| s - log_rho).fold(f64::NEG_INFINITY, f64::max),
        tail_monotone: increasing || decreasing,
        curve: values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::default_tolerance;
    use crate::quiver::Family;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn orbifold(ws: &[u64]) -> Context {
        Context::orbifold(WeightData::with_default_points(ws.to_vec()).unwrap()).unwrap()
    }

    fn line(c: &Context) -> &OrbifoldLine {
        match c {
            Context::Orbifold(l) => l,
            Context::Hereditary(_) => unreachable!(),
        }
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn trivial_words() {
        let c = orbifold(&[2, 3, 7]);
        let n = c.lattice().rank();
        let id = |gens| word_to_endo(&AuteqWord::new(c.clone(), gens).unwrap()).unwrap();
        assert!(id(vec![]).matrix().is_identity());
        assert!(id(vec![Generator::Shift(1), Generator::Shift(1)]).matrix().is_identity());
        assert!(!id(vec![Generator::Shift(1)]).matrix().is_identity());
        let w = line(&c).weights().clone();
        let x = w.l_element(1, &[1, -2, 3]).unwrap();
        let y = w.l_neg(&x).unwrap();
        assert!(id(vec![Generator::Twist(x), Generator::Twist(y)]).matrix().is_identity());
        assert_eq!(id(vec![]).matrix().rows(), n);
    }

    #[test]
    fn rightmost_first() {
        let c = orbifold(&[2, 3, 5]);
        let w = line(&c).weights().clone();
        let gens = vec![Generator::Serre, Generator::Twist(w.x(0))];
        let word = AuteqWord::new(c.clone(), gens).unwrap();
        let expected = line(&c).serre_matrix().matrix() * line(&c).twist_matrix(&w.x(0)).unwrap().matrix();
        assert_eq!(word_to_endo(&word).unwrap().matrix(), &expected);
    }

    fn random_word(rng: &mut ChaCha8Rng, c: &Context) -> Vec<Generator> {
        let l = line(c);
        let w = l.weights();
        let r = w.r();
        let len = rng.gen_range(0..=8);
        (0..len)
            .map(|_| match rng.gen_range(0..4) {
                0 => Generator::Shift(rng.gen_range(-3..=3)),
                1 => {
                    let p = w.weights().iter().map(|&a| rng.gen_range(0..a)).collect();
                    Generator::Twist(w.normal(rng.gen_range(-2..=2), p).unwrap())
                }
                2 => {
                    let mut sigma: Vec<usize> = (0..r).collect();
                    let (i, j) = (rng.gen_range(0..r), rng.gen_range(0..r));
                    sigma.swap(i, j);
                    if l.solve_mobius(&sigma).is_ok() {
                        Generator::Auto { sigma, mobius: None }
                    } else {
                        Generator::Serre
                    }
                }
                _ => Generator::Serre,
            })
            .collect()
    }

    #[test]
    fn nonzero_chi_has_zero_entropy() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for ws in [&[2u64, 3, 7][..], &[2, 3, 5], &[3, 3, 4], &[2, 2, 2, 3]] {
            let c = orbifold(ws);
            for _ in 0..10 {
                let word = AuteqWord::new(c.clone(), random_word(&mut rng, &c)).unwrap();
                let rep = entropy(&word, &default_tolerance()).unwrap();
                assert_eq!(rep.h, 0.0);
                assert!(rep.rho.contains(&BigRational::one()));
                assert!(matches!(rep.method, Method::ChiPositive | Method::ChiNegative));
            }
        }
    }

    #[test]
    fn tubular_generic() {
        let c = orbifold(&[2, 2, 2, 2]);
        let target = SL2Matrix::new(1, 1, 1, 2).unwrap();
        let m = line(&c).lift(&target).unwrap().into_matrix();
        let word = AuteqWord::new(c, vec![Generator::Generic(m)]).unwrap();
        let rep = entropy(&word, &default_tolerance()).unwrap();
        let expected = ((3.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((rep.h - expected).abs() < 1e-12);
        assert_eq!(rep.method, Method::TubularPhi);
        assert_eq!(rep.phi, Some(target));
        assert!(rep.rho.contains_f64(expected.exp(), 0.0));
        assert_eq!(
            rep.certificate,
            Certificate::Quadratic {
                trace: 3.into(),
                discriminant: 5.into()
            }
        );
    }

    #[test]
    fn tubular_squares_and_conjugates() {
        let c = orbifold(&[2, 3, 6]);
        let l = line(&c);
        let f = l.lift(&SL2Matrix::new(2, 1, 1, 1).unwrap()).unwrap().into_matrix();
        let tol = default_tolerance();
        let one = entropy(&AuteqWord::new(c.clone(), vec![Generator::Generic(f.clone())]).unwrap(), &tol).unwrap();
        let two = AuteqWord::new(c.clone(), vec![Generator::Generic(f.clone())]).unwrap().power(2);
        let two = entropy(&two, &tol).unwrap();
        assert!((two.h - 2.0 * one.h).abs() < 1e-9);
        let x = l.weights().x(1);
        let conj = vec![
            Generator::Twist(x.clone()),
            Generator::Generic(f),
            Generator::Twist(l.weights().l_neg(&x).unwrap()),
        ];
        let conj = entropy(&AuteqWord::new(c, conj).unwrap(), &tol).unwrap();
        assert!((conj.h - one.h).abs() < 1e-12);
    }

    #[test]
    fn generic_rules() {
        let c = orbifold(&[2, 3, 7]);
        let n = c.lattice().rank();
        let gens = vec![Generator::Generic(IntMatrix::identity(n))];
        let word = AuteqWord::new(c, gens).unwrap();
        assert!(matches!(entropy(&word, &default_tolerance()), Err(Error::Unsupported(_))));

        let c = orbifold(&[2, 2, 3]);
        let n = c.lattice().rank();
        let mut m = IntMatrix::identity(n);
        m.set(0, 1, 1.into());
        let err = AuteqWord::new(c.clone(), vec![Generator::Generic(m)]).unwrap_err();
        assert!(matches!(err, Error::NotIsometry));
        let gens = vec![Generator::Generic(-&IntMatrix::identity(n))];
        let rep = entropy(&AuteqWord::new(c, gens).unwrap(), &default_tolerance()).unwrap();
        assert_eq!(rep.method, Method::HereditarySpectral);
        assert_eq!(rep.h, 0.0);
    }

    #[test]
    fn dynkin_serre() {
        let d = DynkinType::new(Family::A, 3).unwrap();
        let word = AuteqWord::new(Context::dynkin(d), vec![Generator::Serre]).unwrap();
        let rep = entropy(&word, &default_tolerance()).unwrap();
        assert_eq!(rep.h, 0.0);
        assert_eq!(rep.method, Method::HereditarySpectral);
        assert!(rep.factorization.is_cyclotomic());
        let d = DynkinType::new(Family::D, 4).unwrap();
        let err = AuteqWord::new(Context::dynkin(d.clone()), vec![Generator::Twist(LElement { l: 0, p: vec![] })]);
        assert!(matches!(err, Err(Error::Parameter(_))));
    }

    #[test]
    fn delta_prime_examples() {
        let a1 = DynkinType::new(Family::A, 1).unwrap();
        let obj = DerivedObject::new(&a1, vec![(vec![1.into()], 0)]).unwrap();
        for t in [-1.0, 0.0, 2.5] {
            assert_eq!(delta_prime(&obj, t), 1.0);
        }
        let a2 = DynkinType::new(Family::A, 2).unwrap();
        let obj = DerivedObject::new(&a2, vec![(vec![1.into(), 1.into()], 2)]).unwrap();
        assert!((delta_prime(&obj, 1.0) - 2.0 * 2f64.exp()).abs() < 1e-12);
        let g = DerivedObject::generator(&a2);
        assert_eq!(delta_prime(&g, 0.0), 3.0);
        assert!(DerivedObject::new(&a2, vec![(vec![2.into(), 1.into()], 0)]).is_err());
    }

    fn slope(d: &DynkinType, word: &[Generator]) -> BigRational {
        estimate_entropy(d, word, &[0.0], 30).unwrap().slope
    }

    #[test]
    fn serre_slopes() {
        let a1 = DynkinType::new(Family::A, 1).unwrap();
        assert_eq!(slope(&a1, &[Generator::Serre]), q(0, 1));
        for n in 2..=7usize {
            let d = DynkinType::new(Family::A, n).unwrap();
            assert_eq!(slope(&d, &[Generator::Serre]), q(n as i64 - 1, n as i64 + 1), "A{n}");
        }
        // fractional Calabi-Yau dimension (h - 2) / h
        for (family, rank, h) in [(Family::D, 4, 6), (Family::D, 6, 10), (Family::E, 6, 12), (Family::E, 8, 30)] {
            let d = DynkinType::new(family, rank).unwrap();
            assert_eq!(slope(&d, &[Generator::Serre]), q(h - 2, h), "{d}");
        }
    }

    #[test]
    fn shift_rule_and_orientation() {
        let flips = [true, false, true, true];
        let d = DynkinType::oriented(Family::A, 5, &flips).unwrap();
        let base = slope(&d, &[Generator::Serre]);
        for m in -3..=3i64 {
            let s = slope(&d, &[Generator::Serre, Generator::Shift(m)]);
            assert_eq!(s, &base + q(m, 1));
            let s = slope(&d, &[Generator::Shift(m), Generator::Serre]);
            assert_eq!(s, &base + q(m, 1));
        }
        assert_eq!(base, q(4, 6));
    }

    #[test]
    fn estimates_approach_slope() {
        let d = DynkinType::new(Family::A, 2).unwrap();
        let ts = [0.0, 0.5, 1.0, 2.0];
        let est = estimate_entropy(&d, &[Generator::Serre], &ts, 600).unwrap();
        for &(t, v) in &est.values {
            assert!((v - est.exact(t)).abs() < 0.01, "t={t}: {v} vs {}", est.exact(t));
        }
        assert_eq!(est.exact(0.0), 0.0);
        assert!(estimate_entropy(&d, &[Generator::Serre], &ts, 0).is_err());
    }

    #[test]
    fn growth_reports() {
        let c = orbifold(&[2, 2, 2, 2]);
        let tol = default_tolerance();
        let word = AuteqWord::new(c.clone(), vec![]).unwrap();
        let r = gy_consistency(&word, 40, &tol).unwrap();
        assert_eq!(r.log_rho, 0.0);
        assert!(r.curve.windows(2).all(|w| w[1] <= w[0]));

        let m = line(&c).lift(&SL2Matrix::new(1, 1, 1, 2).unwrap()).unwrap().into_matrix();
        let word = AuteqWord::new(c, vec![Generator::Generic(m)]).unwrap();
        let r = gy_consistency(&word, 200, &tol).unwrap();
        assert!(r.final_deviation < 0.05, "{}", r.final_deviation);
        assert!(r.tail_monotone);

        let d = DynkinType::new(Family::A, 1).unwrap();
        let word = AuteqWord::new(Context::dynkin(d), vec![Generator::Generic(IntMatrix::identity(1))]).unwrap();
        assert_eq!(gy_consistency(&word, 5, &tol).unwrap().curve, vec![0.0; 5]);
    }
}
