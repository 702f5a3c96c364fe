//! Acyclic quivers, Dynkin and extended Dynkin types.
//!
//! Conventions: `E[i][j] = δ_ij - #(i -> j)`, so `χ(d, e) = d^T E e`. The
//! Serre functor acts on K-theory by `E^{-1} E^T` and the Coxeter matrix is
//! its negative.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{unimodular_inverse, IntMatrix, IntVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertex_count: usize,
    arrows: Vec<(usize, usize)>,
}

impl Quiver {
    pub fn new(vertex_count: usize, arrows: Vec<(usize, usize)>) -> Result<Self> {
        for &(s, t) in &arrows {
            if s >= vertex_count || t >= vertex_count {
                return Err(Error::Parameter(format!(
                    "arrow {s}->{t} leaves the vertex range 0..{vertex_count}"
                )));
            }
        }
        let q = Quiver {
            vertex_count,
            arrows,
        };
        if q.topological_order().is_none() {
            return Err(Error::Unsupported("quiver has an oriented cycle".into()));
        }
        Ok(q)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.vertex_count;
        let mut indegree = vec![0usize; n];
        for &(_, t) in &self.arrows {
            indegree[t] += 1;
        }
        let mut ready: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop() {
            order.push(v);
            for &(s, t) in &self.arrows {
                if s == v {
                    indegree[t] -= 1;
                    if indegree[t] == 0 {
                        ready.push(t);
                    }
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn euler_matrix(&self) -> IntMatrix {
        let mut e = IntMatrix::identity(self.vertex_count);
        for &(s, t) in &self.arrows {
            let v = e.get(s, t) - 1;
            e.set(s, t, v);
        }
        e
    }

    /// `Φ = -E^{-1} E^T`.
    pub fn coxeter_matrix(&self) -> IntMatrix {
        -&self.serre_matrix()
    }

    /// `E^{-1} E^T`, the K-theoretic action of the Serre functor.
    pub fn serre_matrix(&self) -> IntMatrix {
        let e = self.euler_matrix();
        let inv = unimodular_inverse(&e).expect("Euler matrix of an acyclic quiver is unimodular");
        &inv * &e.transpose()
    }

    /// `paths[i][j]` = number of paths from `i` to `j`, trivial paths included.
    pub fn path_counts(&self) -> IntMatrix {
        let n = self.vertex_count;
        let order = self.topological_order().expect("acyclic");
        let mut paths = IntMatrix::identity(n);
        // process targets in reverse topological order so successors are final
        for &i in order.iter().rev() {
            for &(s, t) in &self.arrows {
                if s == i {
                    for j in 0..n {
                        let v = paths.get(i, j) + paths.get(t, j);
                        paths.set(i, j, v);
                    }
                }
            }
        }
        paths
    }

    /// `dim P_i[j]` = number of paths `i -> j`.
    pub fn projective_dims(&self) -> Vec<IntVector> {
        let p = self.path_counts();
        (0..self.vertex_count).map(|i| p.row(i).to_vec()).collect()
    }

    /// `dim I_i[j]` = number of paths `j -> i`.
    pub fn injective_dims(&self) -> Vec<IntVector> {
        let p = self.path_counts();
        (0..self.vertex_count).map(|i| p.column(i)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    D,
    E,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::D => "D",
            Family::E => "E",
        };
        f.write_str(s)
    }
}

/// Dynkin diagram edges with vertices numbered along the longest chain.
fn dynkin_edges(family: Family, n: usize) -> Vec<(usize, usize)> {
    let chain = |len: usize| (1..len).map(|k| (k - 1, k)).collect::<Vec<_>>();
    match family {
        Family::A => chain(n),
        Family::D => {
            let mut e = chain(n - 1);
            e.push((n - 3, n - 1));
            e
        }
        Family::E => {
            let mut e = chain(n - 1);
            e.push((2, n - 1));
            e
        }
    }
}

/// A Dynkin diagram with an orientation of its edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynkinType {
    family: Family,
    rank: usize,
    quiver: Quiver,
}

impl DynkinType {
    /// Every edge oriented from the lower to the higher vertex index.
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        Self::oriented(family, rank, &[])
    }

    /// `flip[k]` reverses the `k`-th diagram edge; missing entries keep the
    /// default orientation.
    pub fn oriented(family: Family, rank: usize, flip: &[bool]) -> Result<Self> {
        let valid = match family {
            Family::A => rank >= 1,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
        };
        if !valid {
            return Err(Error::Parameter(format!("no Dynkin diagram {family}{rank}")));
        }
        let edges = dynkin_edges(family, rank);
        if flip.len() > edges.len() {
            return Err(Error::dim(format!(
                "{} orientation flags for {} edges",
                flip.len(),
                edges.len()
            )));
        }
        let arrows = edges
            .iter()
            .enumerate()
            .map(|(k, &(s, t))| if flip.get(k).copied().unwrap_or(false) { (t, s) } else { (s, t) })
            .collect();
        Ok(DynkinType {
            family,
            rank,
            quiver: Quiver::new(rank, arrows)?,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn coxeter_number(&self) -> usize {
        match (self.family, self.rank) {
            (Family::A, n) => n + 1,
            (Family::D, n) => 2 * n - 2,
            (Family::E, 6) => 12,
            (Family::E, 7) => 18,
            (Family::E, _) => 30,
        }
    }

    /// All positive roots, by height and then lexicographically decreasing.
    pub fn positive_roots(&self) -> Vec<IntVector> {
        let n = self.rank;
        let e = self.quiver.euler_matrix();
        let cartan = &e + &e.transpose();
        let simple = |i: usize| -> IntVector {
            (0..n).map(|k| if k == i { BigInt::one() } else { BigInt::zero() }).collect()
        };
        let mut found: BTreeSet<IntVector> = (0..n).map(simple).collect();
        let mut frontier: Vec<IntVector> = found.iter().cloned().collect();
        while let Some(root) = frontier.pop() {
            let c = cartan.mul_vec(&root).expect("square");
            for i in 0..n {
                if c[i].is_zero() {
                    continue;
                }
                let mut next = root.clone();
                next[i] -= &c[i];
                if next.iter().all(|x| !x.is_negative()) && !next.iter().all(Zero::is_zero)
                    && found.insert(next.clone())
                {
                    frontier.push(next);
                }
            }
        }
        let mut roots: Vec<IntVector> = found.into_iter().collect();
        roots.sort_by(|u, v| {
            let h = |x: &IntVector| x.iter().sum::<BigInt>();
            h(u).cmp(&h(v)).then_with(|| v.cmp(u))
        });
        roots
    }

    /// Action of the Serre functor on an indecomposable `M[shift]`.
    ///
    /// Projectives go to the matching injectives with the same shift; any
    /// other indecomposable goes to its AR translate, one step further right.
    pub fn ar_translate(&self, root: &[BigInt], shift: i64) -> Result<(IntVector, i64)> {
        if root.len() != self.rank {
            return Err(Error::dim(format!(
                "root of length {} for rank {}",
                root.len(),
                self.rank
            )));
        }
        let projectives = self.quiver.projective_dims();
        if let Some(i) = projectives.iter().position(|p| p.as_slice() == root) {
            return Ok((self.quiver.injective_dims().swap_remove(i), shift));
        }
        let image = self.quiver.coxeter_matrix().mul_vec(root)?;
        if image.iter().any(Signed::is_negative) || image.iter().all(Zero::is_zero) {
            return Err(Error::Internal(format!(
                "translate of a non-projective root is not positive: {image:?}"
            )));
        }
        Ok((image, shift + 1))
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

impl FromStr for DynkinType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown Dynkin symbol {s:?}"));
        let mut chars = s.chars();
        let family = match chars.next() {
            Some('A') => Family::A,
            Some('D') => Family::D,
            Some('E') => Family::E,
            _ => return Err(bad()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        if rank > 64 {
            return Err(Error::Parse(format!("rank {rank} is too large")));
        }
        DynkinType::new(family, rank).map_err(|_| bad())
    }
}

/// Extended Dynkin diagrams: `Ã_{p,q}` (p + q vertices), `D̃_n` (n + 1
/// vertices), `Ẽ_6`, `Ẽ_7`, `Ẽ_8`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtendedDynkin {
    A { p: usize, q: usize },
    D(usize),
    E(usize),
}

impl ExtendedDynkin {
    fn validate(self) -> Result<Self> {
        let ok = match self {
            ExtendedDynkin::A { p, q } => p >= 1 && q >= 1 && p + q <= 128,
            ExtendedDynkin::D(n) => (4..=128).contains(&n),
            ExtendedDynkin::E(n) => (6..=8).contains(&n),
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::Parameter(format!("no extended Dynkin diagram {self}")))
        }
    }

    pub fn vertex_count(&self) -> usize {
        match *self {
            ExtendedDynkin::A { p, q } => p + q,
            ExtendedDynkin::D(n) => n + 1,
            ExtendedDynkin::E(n) => n + 1,
        }
    }

    /// Ã has two oriented paths of lengths `p` and `q` from a source to a
    /// sink; the other types are oriented away from their branch points.
    pub fn quiver(&self) -> Quiver {
        let arrows = match *self {
            ExtendedDynkin::A { p, q } => {
                let mut arrows: Vec<(usize, usize)> = (1..=p).map(|k| (k - 1, k)).collect();
                let mut prev = 0;
                for k in 0..q - 1 {
                    let v = p + 1 + k;
                    arrows.push((prev, v));
                    prev = v;
                }
                arrows.push((prev, p));
                arrows
            }
            ExtendedDynkin::D(n) => {
                let mut arrows = vec![(2, 0), (2, 1)];
                arrows.extend((3..=n - 2).map(|k| (k - 1, k)));
                arrows.push((n - 2, n - 1));
                arrows.push((n - 2, n));
                arrows
            }
            ExtendedDynkin::E(n) => {
                let arms: &[usize] = match n {
                    6 => &[2, 2, 2],
                    7 => &[1, 3, 3],
                    _ => &[1, 2, 5],
                };
                let mut arrows = Vec::new();
                let mut next = 1;
                for &len in arms {
                    let mut prev = 0;
                    for _ in 0..len {
                        arrows.push((prev, next));
                        prev = next;
                        next += 1;
                    }
                }
                arrows
            }
        };
        Quiver::new(self.vertex_count(), arrows).expect("extended Dynkin quivers are acyclic")
    }

    pub fn a(p: usize, q: usize) -> Result<Self> {
        ExtendedDynkin::A { p, q }.validate()
    }

    pub fn d(n: usize) -> Result<Self> {
        ExtendedDynkin::D(n).validate()
    }

    pub fn e(n: usize) -> Result<Self> {
        ExtendedDynkin::E(n).validate()
    }
}

impl fmt::Display for ExtendedDynkin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedDynkin::A { p, q } => write!(f, "A{p},{q}~"),
            ExtendedDynkin::D(n) => write!(f, "D{n}~"),
            ExtendedDynkin::E(n) => write!(f, "E{n}~"),
        }
    }
}

impl FromStr for ExtendedDynkin {
    type Err = Error;

    /// Accepts `A2,3~`, `D5~`, `E6~`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown extended Dynkin symbol {s:?}"));
        let body = s.strip_suffix('~').ok_or_else(bad)?;
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        let parsed = if let Some(rest) = body.strip_prefix('A') {
            let (p, q) = rest.split_once(',').ok_or_else(bad)?;
            ExtendedDynkin::a(num(p)?, num(q)?)
        } else if let Some(rest) = body.strip_prefix('D') {
            ExtendedDynkin::d(num(rest)?)
        } else if let Some(rest) = body.strip_prefix('E') {
            ExtendedDynkin::e(num(rest)?)
        } else {
            return Err(bad());
        };
        parsed.map_err(|_| bad())
    }
}
