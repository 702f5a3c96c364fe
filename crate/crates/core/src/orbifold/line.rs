use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{LElement, Mobius, WeightData};
use crate::error::{Error, Result};
use crate::lattice::{EulerLattice, LatticeEndo};
use crate::linalg::{unimodular_inverse, IntMatrix, IntVector};
use crate::sl2z::{ul_word, SL2Matrix, UlLetter};

/// Largest lattice rank accepted by [`OrbifoldLine::new`].
pub const MAX_RANK: usize = 256;

/// `(rank, degree)` of a class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankDegree {
    pub rank: BigInt,
    pub degree: BigInt,
}

impl RankDegree {
    /// `χ'(u, v) = rk u · deg v - deg u · rk v`.
    pub fn chi_prime(&self, other: &RankDegree) -> BigInt {
        &self.rank * &other.degree - &self.degree * &other.rank
    }
}

/// Numerical Grothendieck lattice of an orbifold line in the basis
/// `[O]; [S_{1,1}], ..., [S_{1,a_1-1}]; ...; [S_{r,a_r-1}]; [S]`.
#[derive(Clone, Debug)]
pub struct OrbifoldLine {
    data: WeightData,
    lattice: Arc<EulerLattice>,
    /// `offsets[i]` is the index of `[S_{i,1}]`.
    offsets: Vec<usize>,
}

impl OrbifoldLine {
    pub fn new(data: WeightData) -> Result<Self> {
        let mu = data.mu();
        if mu > MAX_RANK {
            return Err(Error::Unsupported(format!(
                "lattice rank {mu} exceeds {MAX_RANK}"
            )));
        }
        let mut offsets = Vec::with_capacity(data.r());
        let mut next = 1;
        for &w in data.weights() {
            offsets.push(next);
            next += (w - 1) as usize;
        }
        let mut labels = vec!["O".to_string()];
        for (i, &w) in data.weights().iter().enumerate() {
            labels.extend((1..w).map(|j| format!("S{},{}", i + 1, j)));
        }
        labels.push("S".into());
        let partial = OrbifoldLine {
            lattice: Arc::new(EulerLattice::new(IntMatrix::identity(mu), labels.clone())?),
            data,
            offsets,
        };
        let gram = partial.compute_gram()?;
        Ok(OrbifoldLine {
            lattice: Arc::new(EulerLattice::new(gram, labels)?),
            ..partial
        })
    }

    pub fn weights(&self) -> &WeightData {
        &self.data
    }

    pub fn lattice(&self) -> &Arc<EulerLattice> {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.data.mu()
    }

    pub fn index_o(&self) -> usize {
        0
    }

    pub fn index_s(&self) -> usize {
        self.rank() - 1
    }

    /// Index of `[S_{i,j}]` for `1 <= j < a_i` (0-based `i`).
    pub fn index_sij(&self, i: usize, j: u64) -> usize {
        debug_assert!(j >= 1 && j < self.data.weights()[i]);
        self.offsets[i] + (j - 1) as usize
    }

    fn unit(&self, k: usize) -> IntVector {
        crate::linalg::unit_vector(self.rank(), k)
    }

    /// Line bundles `O, O(x_1), ..., O((a_1-1)x_1), ..., O(c)` forming a full
    /// strongly exceptional sequence.
    pub fn exceptional_sequence(&self) -> Vec<LElement> {
        let d = &self.data;
        let mut out = vec![d.zero()];
        for (i, &w) in d.weights().iter().enumerate() {
            for j in 1..w {
                let mut k = vec![0i64; d.r()];
                k[i] = j as i64;
                out.push(d.l_element(0, &k).expect("in range"));
            }
        }
        out.push(d.c());
        out
    }

    /// `χ(O(x), O(y)) = dim R_{y-x} - dim R_{x-y+ω}` (Serre duality).
    pub fn chi_line_bundles(&self, x: &LElement, y: &LElement) -> Result<BigInt> {
        let d = &self.data;
        let hom = d.graded_dim(&d.l_sub(y, x)?);
        let ext = d.graded_dim(&d.l_add(&d.l_sub(x, y)?, &d.omega())?);
        Ok(BigInt::from(hom) - BigInt::from(ext))
    }

    /// Gram matrix on the exceptional sequence.
    pub fn exceptional_gram(&self) -> Result<IntMatrix> {
        let seq = self.exceptional_sequence();
        let n = seq.len();
        let mut g = IntMatrix::zeros(n, n);
        for (i, x) in seq.iter().enumerate() {
            for (j, y) in seq.iter().enumerate() {
                g.set(i, j, self.chi_line_bundles(x, y)?);
            }
        }
        Ok(g)
    }

    /// Columns express `[O], [S_{i,j}], [S]` in the exceptional basis.
    pub fn transition_matrix(&self) -> IntMatrix {
        let n = self.rank();
        let last = n - 1;
        let mut t = IntMatrix::zeros(n, n);
        t.set(0, 0, BigInt::one());
        for (i, &w) in self.data.weights().iter().enumerate() {
            for j in 1..w {
                // [S_{i,j}] = [O((j+1)x_i)] - [O(j x_i)]
                let col = self.index_sij(i, j);
                let from = self.offsets[i] + (j - 1) as usize;
                let to = if j + 1 == w { last } else { from + 1 };
                t.set(to, col, BigInt::one());
                t.set(from, col, -BigInt::one());
            }
        }
        t.set(last, last, BigInt::one());
        t.set(0, last, -BigInt::one());
        t
    }

    fn compute_gram(&self) -> Result<IntMatrix> {
        let ge = self.exceptional_gram()?;
        let t = self.transition_matrix();
        Ok(&(&t.transpose() * &ge) * &t)
    }

    /// Class of `S_{i,j}` for any `j`, with `[S_{i,0}] = [S] - Σ_{j>0} [S_{i,j}]`.
    pub fn class_of_simple(&self, i: usize, j: u64) -> IntVector {
        let w = self.data.weights()[i];
        let j = j % w;
        if j != 0 {
            return self.unit(self.index_sij(i, j));
        }
        let mut v = self.unit(self.index_s());
        for k in 1..w {
            v[self.index_sij(i, k)] -= 1;
        }
        v
    }

    /// `[O(x)] = [O] + l[S] + Σ_i Σ_{q<p_i} [S_{i,q}]`.
    pub fn class_of_line_bundle(&self, x: &LElement) -> Result<IntVector> {
        self.data.check_element(x)?;
        let mut v = self.unit(self.index_o());
        v[self.index_s()] += BigInt::from(x.l);
        for (i, &p) in x.p.iter().enumerate() {
            for q in 0..p {
                for (acc, s) in v.iter_mut().zip(self.class_of_simple(i, q)) {
                    *acc += s;
                }
            }
        }
        Ok(v)
    }

    fn endo(&self, m: IntMatrix) -> LatticeEndo {
        LatticeEndo::new(self.lattice.clone(), m).expect("square of lattice rank")
    }

    /// Action of `- ⊗ O(x)`: `[O] -> [O(x)]`, `[S_{i,j}] -> [S_{i,j+p_i}]`,
    /// `[S]` fixed.
    pub fn twist_matrix(&self, x: &LElement) -> Result<LatticeEndo> {
        let n = self.rank();
        let mut cols: Vec<IntVector> = Vec::with_capacity(n);
        cols.push(self.class_of_line_bundle(x)?);
        for (i, &w) in self.data.weights().iter().enumerate() {
            for j in 1..w {
                cols.push(self.class_of_simple(i, j + x.p[i]));
            }
        }
        cols.push(self.unit(self.index_s()));
        Ok(self.endo(IntMatrix::from_columns(n, &cols)?))
    }

    /// `(-1)^k · I`.
    pub fn shift_matrix(&self, k: i64) -> LatticeEndo {
        let id = IntMatrix::identity(self.rank());
        self.endo(if k.rem_euclid(2) == 0 { id } else { -&id })
    }

    /// Serre functor `(- ⊗ O(ω))[1]`.
    pub fn serre_matrix(&self) -> LatticeEndo {
        let t = self.twist_matrix(&self.data.omega()).expect("ω is in normal form");
        self.endo(-t.matrix())
    }

    /// Checks `a_{σ(i)} = a_i` and `g(λ_i) = λ_{σ(i)}` (0-based `σ`).
    pub fn check_admissible(&self, sigma: &[usize], g: &Mobius) -> Result<()> {
        let r = self.data.r();
        if sigma.len() != r {
            return Err(Error::Inadmissible(format!(
                "permutation of length {} on {r} points",
                sigma.len()
            )));
        }
        let mut seen = vec![false; r];
        for &s in sigma {
            if s >= r || std::mem::replace(&mut seen[s], true) {
                return Err(Error::Inadmissible(format!("{sigma:?} is not a permutation")));
            }
        }
        let (w, lambda) = (self.data.weights(), self.data.lambda());
        for i in 0..r {
            if w[sigma[i]] != w[i] {
                return Err(Error::Inadmissible(format!(
                    "point {} has weight {} but its image {} has weight {}",
                    i + 1,
                    w[i],
                    sigma[i] + 1,
                    w[sigma[i]]
                )));
            }
            let image = g.apply(&lambda[i]);
            if image != lambda[sigma[i]] {
                return Err(Error::Inadmissible(format!(
                    "g(λ_{}) = {image} but λ_{} = {}",
                    i + 1,
                    sigma[i] + 1,
                    lambda[sigma[i]]
                )));
            }
        }
        Ok(())
    }

    /// The Möbius map forced by `σ` on the first three points, if admissible.
    pub fn solve_mobius(&self, sigma: &[usize]) -> Result<Mobius> {
        if sigma.len() != self.data.r() || sigma.iter().any(|&s| s >= self.data.r()) {
            return Err(Error::Inadmissible(format!("{sigma:?} is not a permutation")));
        }
        let l = self.data.lambda();
        let src = [l[0].clone(), l[1].clone(), l[2].clone()];
        let dst = [l[sigma[0]].clone(), l[sigma[1]].clone(), l[sigma[2]].clone()];
        let g = Mobius::through(&src, &dst).map_err(|e| Error::Inadmissible(e.to_string()))?;
        self.check_admissible(sigma, &g)?;
        Ok(g)
    }

    /// Pull-back along an automorphism: permutes the branches
    /// `[S_{i,j}] -> [S_{σ(i),j}]` and fixes `[O]`, `[S]`.
    pub fn auto_matrix(&self, sigma: &[usize], g: &Mobius) -> Result<LatticeEndo> {
        self.check_admissible(sigma, g)?;
        let n = self.rank();
        let mut images: Vec<usize> = (0..n).collect();
        for (i, &w) in self.data.weights().iter().enumerate() {
            for j in 1..w {
                images[self.index_sij(i, j)] = self.index_sij(sigma[i], j);
            }
        }
        Ok(self.endo(IntMatrix::permutation(&images)))
    }

    /// Wraps a matrix after checking that it is a χ-isometry.
    pub fn generic(&self, m: IntMatrix) -> Result<LatticeEndo> {
        let e = LatticeEndo::new(self.lattice.clone(), m)?;
        if !e.is_isometry() {
            return Err(Error::NotIsometry);
        }
        Ok(e)
    }

    /// Integral basis of the radical of the symmetrised form `G + G^T`.
    pub fn symmetric_radical(&self) -> Vec<IntVector> {
        let g = self.lattice.gram();
        let sym = EulerLattice::with_default_labels(g + &g.transpose()).expect("square");
        sym.radical()
    }

    /// `x -> x - χ(e, x) e` for `e` in the radical of `G + G^T`; an isometry.
    pub fn transvection(&self, e: &[BigInt]) -> Result<LatticeEndo> {
        let n = self.rank();
        if e.len() != n {
            return Err(Error::dim(format!("vector of length {} for rank {n}", e.len())));
        }
        let g = self.lattice.gram();
        let sym = g + &g.transpose();
        if !sym.mul_vec(e)?.iter().all(Zero::is_zero) {
            return Err(Error::Parameter(
                "transvection vector is not in the radical of the symmetrised form".into(),
            ));
        }
        // row vector e^T G
        let row = g.transpose().mul_vec(e)?;
        let mut m = IntMatrix::identity(n);
        for (i, ei) in e.iter().enumerate() {
            for (j, rj) in row.iter().enumerate() {
                let v = m.get(i, j) - ei * rj;
                m.set(i, j, v);
            }
        }
        Ok(self.endo(m))
    }

    /// `x -> x - Σ_j χ(τ^j e, x) τ^j e` over the `τ`-orbit of `e`, where
    /// `τ` is the twist by `ω`. Needs `χ_A = 0` so that orbits are finite.
    pub fn orbit_twist(&self, e: &[BigInt]) -> Result<LatticeEndo> {
        let n = self.rank();
        if e.len() != n {
            return Err(Error::dim(format!("vector of length {} for rank {n}", e.len())));
        }
        if !self.data.chi().is_zero() {
            return Err(Error::Precondition("orbit twists need χ_A = 0".into()));
        }
        let tau = self.twist_matrix(&self.data.omega())?;
        let mut orbit = vec![e.to_vec()];
        loop {
            let next = tau.matrix().mul_vec(orbit.last().expect("nonempty"))?;
            if next == orbit[0] {
                break;
            }
            if orbit.len() as u64 > self.data.a() {
                return Err(Error::Internal("τ-orbit longer than a".into()));
            }
            orbit.push(next);
        }
        let gt = self.lattice.gram().transpose();
        let mut m = IntMatrix::identity(n);
        for v in &orbit {
            let row = gt.mul_vec(v)?;
            for (i, vi) in v.iter().enumerate() {
                for (j, rj) in row.iter().enumerate() {
                    let x = m.get(i, j) - vi * rj;
                    m.set(i, j, x);
                }
            }
        }
        let f = self.endo(m);
        if !f.is_isometry() {
            return Err(Error::Parameter(
                "τ-orbit of the vector does not give an isometry".into(),
            ));
        }
        Ok(f)
    }

    /// A lattice isometry `F` with `φ(F) = target`, built from the twist by a
    /// degree-one element (`φ = L`), the orbit twist of `[O]` (`φ = U^{-1}`)
    /// and `-1` (`φ = -I`). Needs `χ_A = 0`.
    pub fn lift(&self, target: &SL2Matrix) -> Result<LatticeEndo> {
        let k: Vec<i64> = {
            // Σ k_i (a / a_i) = 1
            let a = self.data.a() as i64;
            let mut g = 0i64;
            let mut k = vec![0i64; self.data.r()];
            for (i, &w) in self.data.weights().iter().enumerate() {
                let d = a / w as i64;
                let e = g.extended_gcd(&d);
                for c in k.iter_mut() {
                    *c *= e.x;
                }
                k[i] += e.y;
                g = e.gcd;
            }
            if g != 1 {
                return Err(Error::Internal("no degree-one element".into()));
            }
            k
        };
        let l_gen = self.twist_matrix(&self.data.l_element(0, &k)?)?;
        let u_inv = self.orbit_twist(&self.unit(self.index_o()))?;
        let l_inv = unimodular_inverse(l_gen.matrix())?;
        let u_gen = unimodular_inverse(u_inv.matrix())?;
        let power = |base: &IntMatrix, inv: &IntMatrix, e: &BigInt| -> Result<IntMatrix> {
            let m = if e.is_negative() { inv } else { base };
            let e = e.magnitude().to_u32().filter(|&v| v <= 1 << 16).ok_or_else(|| {
                Error::Unsupported(format!("exponent {e} too large to lift"))
            })?;
            Ok(m.pow(e))
        };
        let (word, negated) = ul_word(target);
        let mut m = IntMatrix::identity(self.rank());
        for letter in &word {
            let g = match letter {
                UlLetter::U(e) => power(&u_gen, u_inv.matrix(), e)?,
                UlLetter::L(e) => power(l_gen.matrix(), &l_inv, e)?,
            };
            m = &m * &g;
        }
        if negated {
            m = -&m;
        }
        let f = self.endo(m);
        debug_assert_eq!(self.phi_map(&f).ok().as_ref(), Some(target));
        Ok(f)
    }

    /// `rk [O] = 1`, `deg [S_{i,j}] = a / a_i`, `deg [S] = a`.
    pub fn rank_degree(&self, v: &[BigInt]) -> Result<RankDegree> {
        if v.len() != self.rank() {
            return Err(Error::dim(format!(
                "class of length {} for rank {}",
                v.len(),
                self.rank()
            )));
        }
        let a = BigInt::from(self.data.a());
        let mut degree = &v[self.index_s()] * &a;
        for (i, &w) in self.data.weights().iter().enumerate() {
            let step = &a / BigInt::from(w);
            for j in 1..w {
                degree += &v[self.index_sij(i, j)] * &step;
            }
        }
        Ok(RankDegree {
            rank: v[self.index_o()].clone(),
            degree,
        })
    }

    /// A torsion class of degree 1.
    pub fn degree_one_class(&self) -> IntVector {
        // extended gcd over the degrees a/a_i (one S_{i,1} per branch) and a
        let a = BigInt::from(self.data.a());
        let mut v = self.unit(self.index_s());
        let mut g = a.clone();
        for (i, &w) in self.data.weights().iter().enumerate() {
            if w == 1 {
                continue;
            }
            let d = &a / BigInt::from(w);
            let e = g.extended_gcd(&d);
            // new g = x·g + y·d
            for c in v.iter_mut() {
                *c *= &e.x;
            }
            v[self.index_sij(i, 1)] += &e.y;
            g = e.gcd;
        }
        debug_assert!(g.is_one());
        v
    }

    /// `φ(F)` with `φ ∘ ν = ν ∘ N(F)`, columns in `(rank, degree)` coordinates.
    pub fn phi_map(&self, endo: &LatticeEndo) -> Result<SL2Matrix> {
        if endo.lattice().rank() != self.rank() {
            return Err(Error::dim("endomorphism of a different lattice"));
        }
        if !endo.is_isometry() {
            return Err(Error::NotIsometry);
        }
        let m = endo.matrix();
        let nu = |v: &[BigInt]| self.rank_degree(v);
        let c1 = nu(&m.column(self.index_o()))?;
        let c2 = nu(&m.mul_vec(&self.degree_one_class())?)?;
        for k in 0..self.rank() {
            let src = nu(&self.unit(k))?;
            let img = nu(&m.column(k))?;
            let rank = &c1.rank * &src.rank + &c2.rank * &src.degree;
            let degree = &c1.degree * &src.rank + &c2.degree * &src.degree;
            if rank != img.rank || degree != img.degree {
                return Err(Error::NotGeometric);
            }
        }
        let det = &c1.rank * &c2.degree - &c2.rank * &c1.degree;
        if det == -BigInt::one() {
            return Err(Error::Orientation);
        }
        if !det.is_one() {
            return Err(Error::NotGeometric);
        }
        SL2Matrix::new(c1.rank, c2.rank, c1.degree, c2.degree)
    }

    /// Both sides of `Σ_{j=1}^{a} χ(u(jω), v) = χ'(ν u, ν v)`; needs `χ_A = 0`.
    pub fn riemann_roch_sides(&self, u: &[BigInt], v: &[BigInt]) -> Result<(BigInt, BigInt)> {
        if !self.data.chi().is_zero() {
            return Err(Error::Precondition(format!(
                "Riemann-Roch identity needs χ_A = 0, got {}",
                self.data.chi()
            )));
        }
        let omega = self.data.omega();
        let mut lhs = BigInt::zero();
        let mut moved = u.to_vec();
        let tau = self.twist_matrix(&omega)?;
        for _ in 1..=self.data.a() {
            moved = tau.matrix().mul_vec(&moved)?;
            lhs += self.lattice.pairing(&moved, v)?;
        }
        let rhs = self.rank_degree(u)?.chi_prime(&self.rank_degree(v)?);
        Ok((lhs, rhs))
    }

    pub fn riemann_roch_check(&self, u: &[BigInt], v: &[BigInt]) -> Result<bool> {
        let (l, r) = self.riemann_roch_sides(u, v)?;
        Ok(l == r)
    }

    /// `G^{-1} G^T`.
    pub fn serre_from_gram(&self) -> IntMatrix {
        let g = self.lattice.gram();
        &unimodular_inverse(g).expect("Gram matrix is unimodular") * &g.transpose()
    }

    /// `(M^a - I)^μ` for `M` the twist by `x`; zero exactly when `M^a` is
    /// unipotent.
    pub fn twist_unipotency_defect(&self, x: &LElement) -> Result<IntMatrix> {
        let t = self.twist_matrix(x)?;
        let n = self.rank();
        let base = &t.matrix().pow(self.data.a() as u32) - &IntMatrix::identity(n);
        Ok(base.pow(n as u32))
    }
}
