//! Free lattices with an integer Euler pairing.
//!
//! Endomorphism matrices use the column convention: column `j` holds the
//! image of the `j`-th basis vector, so composition is left multiplication.

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{ln_bigint, IntMatrix, IntVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerLattice {
    gram: IntMatrix,
    labels: Vec<String>,
}

impl EulerLattice {
    pub fn new(gram: IntMatrix, labels: Vec<String>) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::dim("Gram matrix must be square"));
        }
        if labels.len() != gram.rows() {
            return Err(Error::dim(format!(
                "{} labels for rank {}",
                labels.len(),
                gram.rows()
            )));
        }
        let distinct: HashSet<&String> = labels.iter().collect();
        if distinct.len() != labels.len() {
            return Err(Error::Parameter("basis labels must be distinct".into()));
        }
        Ok(EulerLattice { gram, labels })
    }

    /// Lattice with labels `v1, ..., vn`.
    pub fn with_default_labels(gram: IntMatrix) -> Result<Self> {
        let labels = (1..=gram.rows()).map(|i| format!("v{i}")).collect();
        Self::new(gram, labels)
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `chi(u, v) = u^T G v`.
    pub fn pairing(&self, u: &[BigInt], v: &[BigInt]) -> Result<BigInt> {
        if u.len() != self.rank() || v.len() != self.rank() {
            return Err(Error::dim(format!(
                "vectors of length {} and {} on a rank {} lattice",
                u.len(),
                v.len(),
                self.rank()
            )));
        }
        let gv = self.gram.mul_vec(v)?;
        Ok(u.iter().zip(&gv).map(|(a, b)| a * b).sum())
    }

    /// Integral basis of the two-sided radical `{v : Gv = 0 and G^T v = 0}`.
    pub fn radical(&self) -> Vec<IntVector> {
        let n = self.rank();
        let mut stacked = self.gram.to_rows();
        stacked.extend(self.gram.transpose().to_rows());
        let (_, basis) = column_echelon(&stacked, n);
        basis.kernel
    }

    /// Quotient by the radical, with the induced (nondegenerate) pairing.
    pub fn numerical_quotient(&self) -> EulerLattice {
        let n = self.rank();
        let mut stacked = self.gram.to_rows();
        stacked.extend(self.gram.transpose().to_rows());
        let (_, basis) = column_echelon(&stacked, n);
        if basis.kernel.is_empty() {
            return self.clone();
        }
        let c = IntMatrix::from_columns(n, &basis.complement).expect("complement columns");
        let gram = &(&c.transpose() * &self.gram) * &c;
        let labels = basis
            .complement
            .iter()
            .enumerate()
            .map(|(k, col)| {
                let support: Vec<usize> = (0..n).filter(|&i| !col[i].is_zero()).collect();
                match support.as_slice() {
                    [i] if col[*i].is_one() => self.labels[*i].clone(),
                    _ => format!("q{}", k + 1),
                }
            })
            .collect();
        EulerLattice { gram, labels }
    }
}

/// Integral basis of `{v : m v = 0}`, saturated in `Z^n`.
pub fn integer_kernel(m: &IntMatrix) -> Vec<IntVector> {
    let (_, basis) = column_echelon(&m.to_rows(), m.cols());
    basis.kernel
}

struct EchelonBasis {
    kernel: Vec<IntVector>,
    complement: Vec<IntVector>,
}

/// Column-style Hermite reduction of the `m x n` matrix `rows`: returns the
/// reduced matrix and a unimodular change of basis split into the columns
/// spanning the integer kernel and a complement.
fn column_echelon(rows: &[Vec<BigInt>], n: usize) -> (Vec<Vec<BigInt>>, EchelonBasis) {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let col_op = |a: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, q: &BigInt| {
        // column dst -= q * column src
        for row in a.iter_mut().chain(u.iter_mut()) {
            let v = &row[src] * q;
            row[dst] -= v;
        }
    };
    let swap = |a: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, i: usize, j: usize| {
        for row in a.iter_mut().chain(u.iter_mut()) {
            row.swap(i, j);
        }
    };
    let mut pivot = 0;
    for r in 0..a.len() {
        if pivot == n {
            break;
        }
        loop {
            // smallest nonzero |entry| in row r among the free columns
            let best = (pivot..n)
                .filter(|&j| !a[r][j].is_zero())
                .min_by(|&i, &j| a[r][i].abs().cmp(&a[r][j].abs()));
            let Some(best) = best else { break };
            swap(&mut a, &mut u, pivot, best);
            let mut done = true;
            for j in pivot + 1..n {
                if !a[r][j].is_zero() {
                    let q = a[r][j].div_floor(&a[r][pivot]);
                    col_op(&mut a, &mut u, j, pivot, &q);
                    if !a[r][j].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                pivot += 1;
                break;
            }
        }
    }
    let column = |j: usize| -> IntVector { (0..n).map(|i| u[i][j].clone()).collect() };
    let kernel = (pivot..n).map(|j| normalize_sign(column(j))).collect();
    let complement = (0..pivot).map(column).collect();
    (a, EchelonBasis { kernel, complement })
}

fn normalize_sign(v: IntVector) -> IntVector {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => v.into_iter().map(|x| -x).collect(),
        _ => v,
    }
}

/// Integer-matrix endomorphism of an Euler lattice (column convention).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeEndo {
    lattice: Arc<EulerLattice>,
    matrix: IntMatrix,
}

impl LatticeEndo {
    pub fn new(lattice: Arc<EulerLattice>, matrix: IntMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != lattice.rank() {
            return Err(Error::dim(format!(
                "{}x{} matrix on a rank {} lattice",
                matrix.rows(),
                matrix.cols(),
                lattice.rank()
            )));
        }
        Ok(LatticeEndo { lattice, matrix })
    }

    pub fn identity(lattice: Arc<EulerLattice>) -> Self {
        let n = lattice.rank();
        LatticeEndo {
            lattice,
            matrix: IntMatrix::identity(n),
        }
    }

    pub fn lattice(&self) -> &Arc<EulerLattice> {
        &self.lattice
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.matrix
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &LatticeEndo) -> Result<LatticeEndo> {
        if self.lattice.rank() != other.lattice.rank() {
            return Err(Error::dim("composing endomorphisms of different lattices"));
        }
        Ok(LatticeEndo {
            lattice: self.lattice.clone(),
            matrix: &self.matrix * &other.matrix,
        })
    }

    /// `M^T G M = G` and `|det M| = 1`.
    pub fn is_isometry(&self) -> bool {
        let g = self.lattice.gram();
        let m = &self.matrix;
        if &(&(&m.transpose() * g) * m) != g {
            return false;
        }
        matches!(m.det(), Ok(d) if d.abs().is_one())
    }

    /// Growth curve `s_n = (1/n) log sum_{i,j} |chi(v_i, F^n v_j)|`.
    ///
    /// The sum is exact; only the logarithm is taken in floating point.
    pub fn growth_curve(&self, n_max: usize) -> Result<GrowthCurve> {
        if n_max == 0 {
            return Err(Error::Parameter("n_max must be at least 1".into()));
        }
        let g = self.lattice.gram();
        let mut power = IntMatrix::identity(self.lattice.rank());
        let mut values = Vec::with_capacity(n_max);
        let mut degenerate_at = None;
        for n in 1..=n_max {
            power = &self.matrix * &power;
            let total: BigInt = (g * &power).entries().iter().map(Signed::abs).sum();
            if total.is_zero() {
                degenerate_at = Some(n);
                break;
            }
            values.push(ln_bigint(&total) / n as f64);
        }
        Ok(GrowthCurve {
            values,
            degenerate_at,
        })
    }
}

/// `values[k]` is `s_{k+1}`. When the growth sum vanishes the sequence is
/// truncated and `degenerate_at` records the first such `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthCurve {
    pub values: Vec<f64>,
    pub degenerate_at: Option<usize>,
}

impl GrowthCurve {
    pub fn at(&self, n: usize) -> Option<f64> {
        n.checked_sub(1).and_then(|k| self.values.get(k).copied())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int_vector, unit_vector};

    fn mat(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn lattice(rows: &[Vec<i64>]) -> Arc<EulerLattice> {
        Arc::new(EulerLattice::with_default_labels(mat(rows)).unwrap())
    }

    fn in_span(basis: &[IntVector], v: &[BigInt]) -> bool {
        // only used with one-dimensional spans in these tests
        basis.iter().any(|b| {
            b.iter().zip(v).all(|(x, y)| x == y) || b.iter().zip(v).all(|(x, y)| *x == -y)
        })
    }

    #[test]
    fn pairing_of_projective_line_gram() {
        let lat = lattice(&[vec![1, 1], vec![-1, 0]]);
        assert_eq!(
            lat.pairing(&unit_vector(2, 0), &unit_vector(2, 1)).unwrap(),
            BigInt::from(1)
        );
        assert_eq!(
            lat.pairing(&int_vector(&[0, 0]), &int_vector(&[3, -7])).unwrap(),
            BigInt::zero()
        );
        let id = lattice(&[vec![1, 0], vec![0, 1]]);
        assert_eq!(
            id.pairing(&unit_vector(2, 0), &unit_vector(2, 0)).unwrap(),
            BigInt::one()
        );
    }

    #[test]
    fn pairing_length_mismatch() {
        let lat = lattice(&[vec![1]]);
        assert!(matches!(
            lat.pairing(&int_vector(&[1, 2]), &int_vector(&[1])),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn duplicate_labels_rejected() {
        let e = EulerLattice::new(IntMatrix::identity(2), vec!["a".into(), "a".into()]);
        assert!(e.is_err());
    }

    #[test]
    fn radical_cases() {
        assert!(lattice(&[vec![1, 1], vec![-1, 0]]).radical().is_empty());
        // symmetrised Kronecker form E + E^T with E = [[1,-2],[0,1]]
        let sym = lattice(&[vec![2, -2], vec![-2, 2]]);
        assert_eq!(sym.radical(), vec![int_vector(&[1, 1])]);
        let zero_k = lattice(&[vec![3, 0, 1], vec![0, 0, 0], vec![2, 0, 5]]);
        assert!(in_span(&zero_k.radical(), &unit_vector(3, 1)));
    }

    #[test]
    fn radical_is_two_sided() {
        // left kernel spanned by (1,0)... G = [[0,1],[0,0]] has Gv=0 for e1 only
        // and G^T v = 0 for e2 only: trivial two-sided radical.
        assert!(lattice(&[vec![0, 1], vec![0, 0]]).radical().is_empty());
    }

    #[test]
    fn quotient_cases() {
        let nondeg = lattice(&[vec![1, 1], vec![-1, 0]]);
        assert_eq!(nondeg.numerical_quotient(), *nondeg);

        let q = lattice(&[vec![0, 0], vec![0, 1]]).numerical_quotient();
        assert_eq!(q.rank(), 1);
        assert_eq!(q.gram(), &mat(&[vec![1]]));

        let q = lattice(&[vec![2, -2], vec![-2, 2]]).numerical_quotient();
        assert_eq!(q.rank(), 1);
        assert!(q.radical().is_empty());
    }

    #[test]
    fn quotient_is_idempotent() {
        let lat = lattice(&[
            vec![2, -1, 0, -1],
            vec![-1, 2, -1, 0],
            vec![0, -1, 2, -1],
            vec![-1, 0, -1, 2],
        ]);
        let q = lat.numerical_quotient();
        assert_eq!(q.rank(), 3);
        assert_eq!(q.numerical_quotient(), q);
    }

    #[test]
    fn isometry_checks() {
        let lat = lattice(&[vec![1, 1], vec![-1, 0]]);
        let id = LatticeEndo::identity(lat.clone());
        assert!(id.is_isometry());
        let neg = LatticeEndo::new(lat.clone(), -&IntMatrix::identity(2)).unwrap();
        assert!(neg.is_isometry());
        // [[1,1],[0,1]]^T G [[1,1],[0,1]] = [[1,2],[-1,-1]] != G
        let shear = LatticeEndo::new(lat, mat(&[vec![1, 1], vec![0, 1]])).unwrap();
        assert!(!shear.is_isometry());
    }

    #[test]
    fn growth_of_identity_tends_to_zero() {
        let lat = lattice(&[vec![1, 1], vec![-1, 0]]);
        let curve = LatticeEndo::identity(lat).growth_curve(50).unwrap();
        for (k, s) in curve.values.iter().enumerate() {
            assert!((s - 3f64.ln() / (k + 1) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn growth_of_nilpotent_is_degenerate() {
        let lat = lattice(&[vec![1, 1], vec![-1, 0]]);
        let endo = LatticeEndo::new(lat, mat(&[vec![0, 1], vec![0, 0]])).unwrap();
        let curve = endo.growth_curve(10).unwrap();
        assert_eq!(curve.degenerate_at, Some(2));
        assert_eq!(curve.values.len(), 1);
    }

    #[test]
    fn growth_of_hyperbolic_endo() {
        // M = [[2,1],[1,1]] is symmetric with unit Perron vector u, so
        // G M^n ~ rho^n (G u) u^T and s_n - log rho ~ log(C) / n with
        // C = (sum |G u|)(sum |u|). Oracle evaluated in closed form.
        let lat = lattice(&[vec![1, 1], vec![-1, 0]]);
        let endo = LatticeEndo::new(lat, mat(&[vec![2, 1], vec![1, 1]])).unwrap();
        let curve = endo.growth_curve(200).unwrap();
        let rho: f64 = (3.0 + 5f64.sqrt()) / 2.0;
        let norm = ((rho - 1.0).powi(2) + 1.0).sqrt();
        let u = [(rho - 1.0) / norm, 1.0 / norm];
        let gu = [u[0] + u[1], -u[0]];
        let c = (gu[0].abs() + gu[1].abs()) * (u[0].abs() + u[1].abs());
        for n in [50usize, 100, 200] {
            let expected = rho.ln() + c.ln() / n as f64;
            assert!((curve.at(n).unwrap() - expected).abs() < 1e-9, "n = {n}");
        }
        // converges from above, deviation 0.0056 at n = 200
        let dev = curve.at(200).unwrap() - rho.ln();
        assert!(dev > 0.0 && dev < 6e-3);
    }
}
