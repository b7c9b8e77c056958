//! Frames on spheres from bilinear multiplications without zero divisors.
//!
//! Given `p: R^n x R^n -> R^n`, first make `e_1` a right identity by
//! precomposing with the inverse of `a -> p(a, e_1)`. Then for `x` on
//! `S^{n-1}` the vectors `p'(x, e_2), ..., p'(x, e_n)`, projected onto the
//! tangent space at `x`, are `n - 1` independent sections that change sign
//! with `x` and so define homomorphisms from the tautological line to its
//! orthogonal complement over `RP^{n-1}`. Here that is checked exactly at
//! rational points rather than proven.

use num_traits::{One, Zero};
use serde::Deserialize;

use crate::cdalgebra::{multiply_coeffs, CdAlgebra};
use crate::error::{Error, Result};
use crate::exactcore::{
    det_exact, dot, inverse_exact, kernel_basis_exact, norm_sq, parse_rational,
    rank_exact, rational_sphere_point, Mcg64, RatMatrix, Rational,
};

/// Structure constants: `c[i][j][k]` is the `k`-th coordinate of `p(e_i, e_j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicationTable {
    n: usize,
    c: Vec<Rational>,
}

#[derive(Deserialize)]
struct TableDocument {
    n: usize,
    c: Vec<Vec<Vec<String>>>,
}

impl MultiplicationTable {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> Rational) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("table dimension must be positive".into()));
        }
        let mut c = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    c.push(f(i, j, k));
                }
            }
        }
        Ok(Self { n, c })
    }

    /// The multiplication of a Cayley-Dickson algebra.
    pub fn from_algebra(alg: CdAlgebra) -> Self {
        let n = alg.dim();
        let mut c = vec![Rational::zero(); n * n * n];
        for i in 0..n {
            for j in 0..n {
                let p = multiply_coeffs(alg.basis(i).coeffs(), alg.basis(j).coeffs());
                for (k, v) in p.into_iter().enumerate() {
                    c[(i * n + j) * n + k] = v;
                }
            }
        }
        Self { n, c }
    }

    /// Parses `{"n": int, "c": [[["p/q", ...], ...], ...]}` with `c[i][j][k]`.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: TableDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let n = doc.n;
        let shape_ok = doc.c.len() == n
            && doc
                .c
                .iter()
                .all(|plane| plane.len() == n && plane.iter().all(|row| row.len() == n));
        if n == 0 || !shape_ok {
            return Err(Error::Parse(format!("table is not {n}x{n}x{n}")));
        }
        let mut c = Vec::with_capacity(n * n * n);
        for plane in &doc.c {
            for row in plane {
                for s in row {
                    c.push(parse_rational(s)?);
                }
            }
        }
        Ok(Self { n, c })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let n = self.n;
        let c: Vec<Vec<Vec<String>>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| crate::exactcore::format_rational(self.get(i, j, k))).collect())
                    .collect()
            })
            .collect();
        serde_json::json!({ "n": n, "c": c })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.c[(i * self.n + j) * self.n + k]
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self {
            n: self.n,
            c: self.c.iter().map(|x| x * r).collect(),
        }
    }

    /// `p(a, b)` by bilinear expansion.
    pub fn apply(&self, a: &[Rational], b: &[Rational]) -> Result<Vec<Rational>> {
        let n = self.n;
        for v in [a, b] {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: v.len(),
                });
            }
        }
        let mut out = vec![Rational::zero(); n];
        for (i, ai) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, bj) in b.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                let w = ai * bj;
                for (k, o) in out.iter_mut().enumerate() {
                    let cijk = self.get(i, j, k);
                    if !cijk.is_zero() {
                        *o += &w * cijk;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `p(a, e_j)`.
    pub fn apply_basis_right(&self, a: &[Rational], j: usize) -> Result<Vec<Rational>> {
        self.apply(a, &basis_vector(self.n, j))
    }

    /// Matrix of `a -> p(a, e_j)`.
    pub fn right_mult_matrix(&self, j: usize) -> RatMatrix {
        RatMatrix::from_fn(self.n, self.n, |k, i| self.get(i, j, k).clone())
    }

    /// Matrix of `b -> p(x, b)`.
    pub fn left_mult_matrix(&self, x: &[Rational]) -> Result<RatMatrix> {
        let cols = (0..self.n)
            .map(|j| self.apply_basis_right(x, j))
            .collect::<Result<Vec<_>>>()?;
        RatMatrix::from_columns(&cols)
    }

    /// Seeded spot check: `p(a, b) != 0` for random nonzero `a`, `b`. Returns
    /// the first zero-divisor pair found.
    pub fn zero_divisor_spot_check(&self, samples: usize, seed: u64) -> Option<(Vec<Rational>, Vec<Rational>)> {
        let mut rng = Mcg64::new(seed);
        for _ in 0..samples {
            let a = nonzero_vector(&mut rng, self.n);
            let b = nonzero_vector(&mut rng, self.n);
            if self.apply(&a, &b).ok()?.iter().all(Zero::is_zero) {
                return Some((a, b));
            }
        }
        None
    }
}

fn nonzero_vector(rng: &mut Mcg64, n: usize) -> Vec<Rational> {
    loop {
        let v = rng.rational_vec(n, 5, 4);
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

fn basis_vector(n: usize, j: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[j] = Rational::one();
    v
}

/// First pair `(e_i ± e_j, e_k ± e_l)` with `p(a, b) = 0`, scanning `i < j`,
/// `k < l` in lexicographic order with `+` before `-`.
pub fn basis_pair_zero_divisor(p: &MultiplicationTable) -> Option<(Vec<Rational>, Vec<Rational>)> {
    let n = p.n;
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for s in [1i64, -1] {
                let mut v = basis_vector(n, i);
                v[j] = Rational::from_integer(s.into());
                pairs.push(v);
            }
        }
    }
    for a in &pairs {
        for b in &pairs {
            if p.apply(a, b).ok()?.iter().all(Zero::is_zero) {
                return Some((a.clone(), b.clone()));
            }
        }
    }
    None
}

/// `p'(a, b) = p(A^{-1} a, b)` where `A a = p(a, e_1)`, so that `e_1` becomes
/// a right identity. Fails when `A` is singular, reporting a kernel vector.
pub fn normalize_right_identity(p: &MultiplicationTable) -> Result<MultiplicationTable> {
    let n = p.n;
    let a = p.right_mult_matrix(0);
    let Some(inv) = inverse_exact(&a)? else {
        let witness = kernel_basis_exact(&a).into_iter().next().unwrap_or_default();
        return Err(Error::SingularNormalization { witness });
    };
    // p'(e_i, e_j) = Σ_l inv[l][i] p(e_l, e_j)
    MultiplicationTable::from_fn(n, |i, j, k| {
        (0..n)
            .filter(|&l| !inv[(l, i)].is_zero())
            .fold(Rational::zero(), |acc, l| acc + &inv[(l, i)] * p.get(l, j, k))
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub point: Vec<Rational>,
    /// `x, p'(x, e_2), ..., p'(x, e_n)`.
    pub columns: Vec<Vec<Rational>>,
    pub det: Rational,
}

impl Frame {
    pub fn is_nondegenerate(&self) -> bool {
        !self.det.is_zero()
    }
}

fn check_point(p: &MultiplicationTable, x: &[Rational]) -> Result<()> {
    if x.len() != p.n {
        return Err(Error::DimensionMismatch {
            expected: p.n,
            actual: x.len(),
        });
    }
    if x.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector);
    }
    if !norm_sq(x).is_one() {
        return Err(Error::NotUnit("sphere point"));
    }
    Ok(())
}

/// Determinant of `(p'(x, e_1), ..., p'(x, e_n))` for any nonzero `x`, unit
/// or not. Scaling `x` scales the determinant by a nonzero power, so whether
/// it vanishes depends only on the line through `x`.
pub fn frame_det_unnormalized(p_norm: &MultiplicationTable, x: &[Rational]) -> Result<Rational> {
    if x.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector);
    }
    det_exact(&p_norm.left_mult_matrix(x)?)
}

pub fn frame_at(p_norm: &MultiplicationTable, x: &[Rational]) -> Result<Frame> {
    check_point(p_norm, x)?;
    let mut columns = vec![x.to_vec()];
    for j in 1..p_norm.n {
        columns.push(p_norm.apply_basis_right(x, j)?);
    }
    let det = det_exact(&RatMatrix::from_columns(&columns)?)?;
    Ok(Frame {
        point: x.to_vec(),
        columns,
        det,
    })
}

/// `v_i(x) = p'(x, e_i) - <p'(x, e_i), x> x` for `i = 2..n`.
pub fn tangent_sections_at(p_norm: &MultiplicationTable, x: &[Rational]) -> Result<Vec<Vec<Rational>>> {
    check_point(p_norm, x)?;
    (1..p_norm.n)
        .map(|j| {
            let w = p_norm.apply_basis_right(x, j)?;
            let c = dot(&w, x);
            Ok(w.iter().zip(x).map(|(wi, xi)| wi - &c * xi).collect())
        })
        .collect()
}

/// Rank of the section vectors by exact elimination.
pub fn section_rank(sections: &[Vec<Rational>]) -> usize {
    if sections.is_empty() {
        return 0;
    }
    rank_exact(&RatMatrix::from_columns(sections).expect("equal lengths"))
}

/// `v_i(-x) = -v_i(x)` at every point.
pub fn homogeneity_check(p_norm: &MultiplicationTable, points: &[Vec<Rational>]) -> Result<bool> {
    for x in points {
        let plus = tangent_sections_at(p_norm, x)?;
        let neg_x: Vec<Rational> = x.iter().map(|v| -v).collect();
        let minus = tangent_sections_at(p_norm, &neg_x)?;
        let ok = plus
            .iter()
            .zip(&minus)
            .all(|(a, b)| a.iter().zip(b).all(|(s, t)| *s == -t));
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Seeded rational points on `S^{n-1}`.
pub fn sample_sphere_points(n: usize, count: usize, seed: u64) -> Vec<Vec<Rational>> {
    let mut rng = Mcg64::new(seed);
    (0..count)
        .map(|_| rational_sphere_point(&rng.rational_vec(n - 1, 9, 9)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameReport {
    pub n: usize,
    pub samples: usize,
    pub nonzero_dets: usize,
    pub full_rank_sections: usize,
    pub orthogonal_sections: usize,
    pub homogeneous: bool,
    /// First sample point with a vanishing determinant.
    pub first_failure: Option<Vec<Rational>>,
}

impl FrameReport {
    pub fn passed(&self) -> bool {
        self.nonzero_dets == self.samples
            && self.full_rank_sections == self.samples
            && self.orthogonal_sections == self.samples
            && self.homogeneous
    }
}

/// Runs frame, tangent-section and homogeneity checks at seeded points.
pub fn verify_frames(p_norm: &MultiplicationTable, samples: usize, seed: u64) -> Result<FrameReport> {
    let n = p_norm.n;
    let points = sample_sphere_points(n, samples, seed);
    let mut report = FrameReport {
        n,
        samples,
        nonzero_dets: 0,
        full_rank_sections: 0,
        orthogonal_sections: 0,
        homogeneous: true,
        first_failure: None,
    };
    for x in &points {
        let frame = frame_at(p_norm, x)?;
        if frame.is_nondegenerate() {
            report.nonzero_dets += 1;
        } else if report.first_failure.is_none() {
            report.first_failure = Some(x.clone());
        }
        let sections = tangent_sections_at(p_norm, x)?;
        if sections.iter().all(|v| dot(v, x).is_zero()) {
            report.orthogonal_sections += 1;
        }
        if section_rank(&sections) == n - 1 {
            report.full_rank_sections += 1;
        }
    }
    report.homogeneous = homogeneity_check(p_norm, &points)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::{int, rat};

    fn table(level: u32) -> MultiplicationTable {
        MultiplicationTable::from_algebra(CdAlgebra::new(level).unwrap())
    }

    #[test]
    fn normalization_examples() {
        let c = table(1);
        assert_eq!(normalize_right_identity(&c).unwrap(), c);
        assert_eq!(normalize_right_identity(&c.scale(&int(2))).unwrap(), c);
        let q = table(2);
        assert_eq!(normalize_right_identity(&q).unwrap(), q);
    }

    #[test]
    fn normalization_makes_e1_a_right_identity() {
        // a twisted complex multiplication: p(a, b) = (a * b) * (2 + i)
        let c = table(1);
        let twist = [int(2), int(1)];
        let p = MultiplicationTable::from_fn(2, |i, j, k| {
            let ab = c.apply(&basis_vector(2, i), &basis_vector(2, j)).unwrap();
            c.apply(&ab, &twist).unwrap()[k].clone()
        })
        .unwrap();
        let pn = normalize_right_identity(&p).unwrap();
        let a = vec![rat(3, 7), rat(-5, 2)];
        assert_eq!(pn.apply_basis_right(&a, 0).unwrap(), a);
        assert_eq!(normalize_right_identity(&pn).unwrap(), pn);
    }

    #[test]
    fn singular_normalization_is_reported() {
        // p(a, b) = a_1 b_1 e_1 has right-multiplication-by-e_1 of rank 1
        let p = MultiplicationTable::from_fn(2, |i, j, k| {
            if i == 0 && j == 0 && k == 0 {
                int(1)
            } else {
                int(0)
            }
        })
        .unwrap();
        match normalize_right_identity(&p) {
            Err(Error::SingularNormalization { witness }) => {
                assert_eq!(witness, vec![int(0), int(1)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn complex_frames() {
        let c = table(1);
        let f = frame_at(&c, &[int(1), int(0)]).unwrap();
        assert_eq!(f.columns, vec![vec![int(1), int(0)], vec![int(0), int(1)]]);
        assert_eq!(f.det, int(1));
        let f = frame_at(&c, &[rat(3, 5), rat(4, 5)]).unwrap();
        assert_eq!(f.det, int(1));
        assert_eq!(frame_at(&c, &[int(0), int(0)]).unwrap_err(), Error::ZeroVector);
        assert_eq!(frame_at(&c, &[int(1), int(1)]).unwrap_err(), Error::NotUnit("sphere point"));
    }

    #[test]
    fn tangent_examples() {
        let c = table(1);
        assert_eq!(tangent_sections_at(&c, &[int(1), int(0)]).unwrap(), vec![vec![int(0), int(1)]]);
        let q = table(2);
        let e0 = basis_vector(4, 0);
        let v = tangent_sections_at(&q, &e0).unwrap();
        assert_eq!(v, (1..4).map(|j| basis_vector(4, j)).collect::<Vec<_>>());
    }

    #[test]
    fn complex_and_quaternion_frames_at_samples() {
        let r = verify_frames(&table(1), 50, 3).unwrap();
        assert!(r.passed());
        let r = verify_frames(&table(2), 100, 3).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn homogeneity_on_samples() {
        let q = table(2);
        assert!(homogeneity_check(&q, &sample_sphere_points(4, 100, 8)).unwrap());
    }

    #[test]
    fn json_roundtrip() {
        let q = table(2);
        let text = q.to_json().to_string();
        assert_eq!(MultiplicationTable::from_json(&text).unwrap(), q);
        assert!(MultiplicationTable::from_json(r#"{"n": 2, "c": [[["1"]]]}"#).is_err());
        assert!(MultiplicationTable::from_json(r#"{"n": 1, "c": [[["1/0"]]]}"#).is_err());
        let one = MultiplicationTable::from_json(r#"{"n": 1, "c": [[["2/4"]]]}"#).unwrap();
        assert_eq!(one.get(0, 0, 0), &rat(1, 2));
    }

    #[test]
    fn sedenion_frames_degenerate_on_zero_divisors() {
        use crate::cdalgebra::{find_zero_divisors, SearchStrategy};
        let alg = CdAlgebra::new(4).unwrap();
        let p = normalize_right_identity(&table(4)).unwrap();
        let zd = &find_zero_divisors(alg, SearchStrategy::BasisPairs)[0];
        assert_eq!(frame_det_unnormalized(&p, zd.a.coeffs()).unwrap(), int(0));
    }
}
