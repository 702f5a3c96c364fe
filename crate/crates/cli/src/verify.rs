//! Property suites behind `cat-entropy verify`.

use cat_entropy::entropy::{gy_consistency, AuteqWord, Context, Generator};
use cat_entropy::linalg::{spectral_radius, IntMatrix};
use cat_entropy::orbifold::{LElement, OrbifoldLine, WeightData};
use cat_entropy::quiver::{DynkinType, ExtendedDynkin, Family, Quiver};
use cat_entropy::sl2z::{positive_factorize, PositiveWord, SL2Matrix};
use cat_entropy::{Error, Result};
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};

const SUITES: &[&str] = &["gram", "twists", "serre", "riemann-roch", "gy", "dynkin", "factorize"];

const WEIGHTS: &[&[u64]] = &[
    &[2, 3, 5],
    &[2, 3, 7],
    &[2, 2, 2, 3],
    &[1, 2, 2],
    &[3, 3, 4],
    &[2, 2, 2, 2],
    &[3, 3, 3],
    &[2, 4, 4],
    &[2, 3, 6],
];

const TUBULAR: &[&[u64]] = &[&[2, 2, 2, 2], &[3, 3, 3], &[2, 4, 4], &[2, 3, 6]];

#[derive(Default)]
pub struct Report {
    suites: Vec<String>,
    checks: usize,
    failures: Vec<(String, String)>,
}

impl Report {
    fn check(&mut self, name: impl Into<String>, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push((name.into(), detail()));
        }
    }

    /// Records an error from a computation that should have succeeded.
    fn result<T>(&mut self, name: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(name, false, || e.to_string());
                None
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suites": self.suites,
            "checks": self.checks,
            "passed": self.passed(),
            "failures": self
                .failures
                .iter()
                .map(|(c, d)| json!({"check": c, "detail": d}))
                .collect::<Vec<_>>(),
        })
    }
}

pub fn run(suite: &str, tol: &BigRational, n_max: usize) -> Result<Report> {
    let names: Vec<&str> = match suite {
        "all" => SUITES.to_vec(),
        s if SUITES.contains(&s) => vec![s],
        s => {
            return Err(Error::Parse(format!(
                "unknown suite {s:?}; expected one of {} or all",
                SUITES.join(", ")
            )))
        }
    };
    let mut r = Report::default();
    for name in names {
        r.suites.push(name.to_string());
        match name {
            "gram" => gram(&mut r),
            "twists" => twists(&mut r),
            "serre" => serre(&mut r),
            "riemann-roch" => riemann_roch(&mut r),
            "gy" => gy(&mut r, tol, n_max),
            "dynkin" => dynkin(&mut r, tol),
            "factorize" => factorize(&mut r),
            _ => unreachable!(),
        }
    }
    Ok(r)
}

fn line(ws: &[u64]) -> OrbifoldLine {
    OrbifoldLine::new(WeightData::with_default_points(ws.to_vec()).expect("valid weights"))
        .expect("small rank")
}

fn is_upper_unitriangular(m: &IntMatrix) -> bool {
    (0..m.rows()).all(|i| {
        (0..m.cols()).all(|j| match i.cmp(&j) {
            std::cmp::Ordering::Equal => m.get(i, j).is_one(),
            std::cmp::Ordering::Greater => m.get(i, j) == &0.into(),
            std::cmp::Ordering::Less => true,
        })
    })
}

fn gram(r: &mut Report) {
    for ws in WEIGHTS {
        let l = line(ws);
        let name = format!("gram {ws:?}");
        if let Some(g) = r.result(&name, l.exceptional_gram()) {
            r.check(format!("{name} exceptional unitriangular"), is_upper_unitriangular(&g), || {
                format!("{g:?}")
            });
        }
        let det = l.lattice().gram().det();
        r.check(format!("{name} unimodular"), matches!(&det, Ok(d) if d.magnitude().is_one()), || {
            format!("det = {det:?}")
        });
    }
}

fn sample_elements(w: &WeightData) -> Vec<LElement> {
    let mut out = vec![w.c(), w.omega(), w.zero()];
    out.extend((0..w.r()).map(|i| w.x(i)));
    let k: Vec<i64> = (1..=w.r() as i64).collect();
    out.push(w.l_element(-1, &k).expect("one coefficient per point"));
    out
}

fn twists(r: &mut Report) {
    for ws in WEIGHTS {
        let l = line(ws);
        let w = l.weights();
        let xs = sample_elements(w);
        for x in &xs {
            let name = format!("twist {ws:?} by {x}");
            let Some(t) = r.result(&name, l.twist_matrix(x)) else { continue };
            r.check(format!("{name} isometry"), t.is_isometry(), String::new);
            if let Some(d) = r.result(&name, l.twist_unipotency_defect(x)) {
                r.check(format!("{name} quasi-unipotent"), d.is_zero(), || format!("{d:?}"));
            }
            for y in &xs {
                let lhs = l.twist_matrix(x).and_then(|a| Ok(a.matrix() * l.twist_matrix(y)?.matrix()));
                let rhs = w.l_add(x, y).and_then(|s| l.twist_matrix(&s)).map(|t| t.into_matrix());
                let ok = matches!((&lhs, &rhs), (Ok(a), Ok(b)) if a == b);
                r.check(format!("{name} then {y} homomorphism"), ok, || format!("{lhs:?} vs {rhs:?}"));
            }
        }
        let c = w.c();
        if let Some(d) = r.result("twist by c", l.twist_unipotency_defect(&c)) {
            let t = l.twist_matrix(&c).expect("c is normal");
            let n = l.rank() as u32;
            let u = (t.matrix() - &IntMatrix::identity(l.rank())).pow(n);
            r.check(format!("twist {ws:?} by c unipotent"), u.is_zero() && d.is_zero(), || format!("{u:?}"));
        }
    }
}

fn serre_congruence(g: &IntMatrix, s: &IntMatrix) -> bool {
    (g * s) == g.transpose()
}

fn serre(r: &mut Report) {
    for ws in WEIGHTS {
        let l = line(ws);
        let s = l.serre_matrix();
        let g = l.lattice().gram();
        r.check(format!("serre {ws:?}"), serre_congruence(g, s.matrix()), || format!("{s:?}"));
    }
    for q in quivers() {
        let g = q.1.euler_matrix();
        let s = q.1.serre_matrix();
        r.check(format!("serre {}", q.0), serre_congruence(&g, &s), || format!("{s:?}"));
    }
}

/// Dynkin types of rank at most 8.
fn dynkin_types() -> Vec<DynkinType> {
    let mut out = vec![];
    for n in 1..=8 {
        out.push(DynkinType::new(Family::A, n).expect("A_n"));
    }
    for n in 4..=8 {
        out.push(DynkinType::new(Family::D, n).expect("D_n"));
    }
    for n in 6..=8 {
        out.push(DynkinType::new(Family::E, n).expect("E_n"));
    }
    out
}

fn extended_types() -> Vec<ExtendedDynkin> {
    let mut out = vec![];
    for p in 1..=7 {
        for q in p..=8 - p {
            out.push(ExtendedDynkin::a(p, q).expect("Ã_{p,q}"));
        }
    }
    for n in 4..=8 {
        out.push(ExtendedDynkin::d(n).expect("D̃_n"));
    }
    for n in 6..=8 {
        out.push(ExtendedDynkin::e(n).expect("Ẽ_n"));
    }
    out
}

fn quivers() -> Vec<(String, Quiver)> {
    let mut out: Vec<(String, Quiver)> =
        dynkin_types().into_iter().map(|d| (d.to_string(), d.quiver().clone())).collect();
    out.extend(extended_types().into_iter().map(|e| (e.to_string(), e.quiver())));
    out
}

fn riemann_roch(r: &mut Report) {
    for ws in TUBULAR {
        let l = line(ws);
        let n = l.rank();
        let unit = |k: usize| -> Vec<num_bigint::BigInt> {
            (0..n).map(|i| if i == k { 1.into() } else { 0.into() }).collect()
        };
        for i in 0..n {
            for j in 0..n {
                let name = format!("riemann-roch {ws:?} ({i}, {j})");
                if let Some((lhs, rhs)) = r.result(&name, l.riemann_roch_sides(&unit(i), &unit(j))) {
                    r.check(name, lhs == rhs, || format!("{lhs} != {rhs}"));
                }
            }
        }
    }
}

fn gy(r: &mut Report, tol: &BigRational, n_max: usize) {
    let targets = [SL2Matrix::new(1, 1, 1, 2).expect("det 1"), SL2Matrix::new(2, 1, 1, 1).expect("det 1")];
    for ws in TUBULAR {
        let l = line(ws);
        let ctx = Context::Orbifold(l.clone().into());
        for t in &targets {
            let name = format!("gy {ws:?} phi = {t}");
            let Some(f) = r.result(&name, l.lift(t)) else { continue };
            let word = AuteqWord::new(ctx.clone(), vec![Generator::Generic(f.into_matrix())]);
            let Some(rep) = r.result(&name, word.and_then(|w| gy_consistency(&w, n_max, tol))) else {
                continue;
            };
            let bounded = rep.max_excess <= 1e-6 || rep.tail_monotone;
            r.check(format!("{name} never overshoots"), bounded, || {
                format!("excess {} with a non-monotone tail", rep.max_excess)
            });
            let half = (rep.curve[n_max / 2] - rep.log_rho).abs();
            r.check(format!("{name} converging"), rep.final_deviation <= half, || {
                format!("deviation {} at n_max, {} at n_max/2", rep.final_deviation, half)
            });
        }
    }
}

fn dynkin(r: &mut Report, tol: &BigRational) {
    for d in dynkin_types() {
        let phi = d.quiver().coxeter_matrix();
        let name = format!("dynkin {d}");
        if let Some(rho) = r.result(&name, spectral_radius(&phi, tol)) {
            let ok = rho.contains(&BigRational::one()) && &rho.width() <= tol;
            r.check(format!("{name} rho = 1"), ok, || format!("{rho:?}"));
        }
        let h = d.coxeter_number() as u32;
        r.check(format!("{name} Φ^h = I"), phi.pow(h).is_identity(), String::new);
    }
}

fn factorize(r: &mut Report) {
    let conjugators = [
        SL2Matrix::identity(),
        SL2Matrix::r(),
        SL2Matrix::new(2, 3, 1, 2).expect("det 1"),
        SL2Matrix::new(-5, 2, -3, 1).expect("det 1"),
        SL2Matrix::new(13, -8, -21, 13).expect("det 1"),
    ];
    let words: [&[u64]; 5] = [&[1, 1], &[3, 2], &[1, 2, 3, 4], &[5, 1, 1, 7], &[2, 2, 2, 2, 2, 9]];
    for p in &conjugators {
        for m in words {
            let w = PositiveWord { m: m.to_vec(), conjugator: SL2Matrix::identity(), negated: false };
            let target = &(&p.inverse() * &w.product()) * p;
            for (sign, t) in [("+", target.clone()), ("-", -&target)] {
                let name = format!("factorize {sign}{m:?} conjugated by {p}");
                if let Some(f) = r.result(&name, positive_factorize(&t)) {
                    let ok = f.verify(&t) && f.m.iter().all(|&k| k >= 1);
                    r.check(name, ok, || format!("{f:?}"));
                }
            }
        }
    }
    for parabolic in [SL2Matrix::u(1), SL2Matrix::identity(), SL2Matrix::r()] {
        let name = format!("factorize rejects {parabolic}");
        let ok = matches!(positive_factorize(&parabolic), Err(Error::Precondition(_)));
        r.check(name, ok, String::new);
    }
}
