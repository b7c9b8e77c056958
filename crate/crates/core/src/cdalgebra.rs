//! Cayley-Dickson algebras of dimension `2^k` over the rationals.
//!
//! Elements are coefficient vectors in the standard basis `e_0, ..., e_{2^k-1}`
//! where the first half of the vector is the "left" component of the doubled
//! pair. The doubling convention is frozen as
//!
//! ```text
//! (a, b)(c, d) = (ac - conj(d) b, d a + b conj(c)),    conj(a, b) = (conj(a), -b)
//! ```
//!
//! so for instance `e_1 e_2 = +e_3` in the quaternions. Levels 0 to 3 give the
//! rationals, Gaussian rationals, quaternions and octonions; level 4 (the
//! sedenions) is the first level with zero divisors.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactcore::{format_vector, int, Mcg64, RatMatrix, Rational};

/// Highest level accepted by [`CdAlgebra::new`]; larger levels need
/// [`CdAlgebra::new_uncapped`].
pub const DEFAULT_MAX_LEVEL: u32 = 5;

/// Scalars the doubling recursion can run over.
pub trait CdScalar:
    Clone + Zero + Neg<Output = Self> + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self>
{
}

impl<T> CdScalar for T where
    T: Clone
        + Zero
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
{
}

/// Conjugate of a coefficient vector: every coefficient except the first is
/// negated.
pub fn conjugate_coeffs<T: CdScalar>(a: &[T]) -> Vec<T> {
    a.iter()
        .enumerate()
        .map(|(i, x)| if i == 0 { x.clone() } else { -x.clone() })
        .collect()
}

fn add_vec<T: CdScalar>(a: Vec<T>, b: Vec<T>) -> Vec<T> {
    a.into_iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub_vec<T: CdScalar>(a: Vec<T>, b: Vec<T>) -> Vec<T> {
    a.into_iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Cayley-Dickson product of two coefficient vectors of the same power-of-two
/// length, by direct recursion on the doubling formula.
pub fn multiply_coeffs<T: CdScalar>(x: &[T], y: &[T]) -> Vec<T> {
    debug_assert_eq!(x.len(), y.len());
    debug_assert!(x.len().is_power_of_two());
    if x.len() == 1 {
        return vec![x[0].clone() * y[0].clone()];
    }
    let h = x.len() / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let left = sub_vec(multiply_coeffs(a, c), multiply_coeffs(&conjugate_coeffs(d), b));
    let right = add_vec(multiply_coeffs(d, a), multiply_coeffs(b, &conjugate_coeffs(c)));
    let mut out = left;
    out.extend(right);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CdAlgebra {
    level: u32,
}

impl CdAlgebra {
    pub fn new(level: u32) -> Result<Self> {
        if level > DEFAULT_MAX_LEVEL {
            return Err(Error::InvalidArgument(format!(
                "level {level} exceeds the cap {DEFAULT_MAX_LEVEL}"
            )));
        }
        Ok(Self { level })
    }

    /// Any level whose dimension fits in memory.
    pub fn new_uncapped(level: u32) -> Result<Self> {
        if level >= usize::BITS - 1 {
            return Err(Error::InvalidArgument(format!("level {level} is too large")));
        }
        Ok(Self { level })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn dim(&self) -> usize {
        1 << self.level
    }

    pub fn zero(&self) -> CdElement {
        CdElement {
            algebra: *self,
            coeffs: vec![Rational::zero(); self.dim()],
        }
    }

    pub fn one(&self) -> CdElement {
        self.basis(0)
    }

    pub fn basis(&self, i: usize) -> CdElement {
        let mut e = self.zero();
        e.coeffs[i] = Rational::one();
        e
    }

    pub fn element(&self, coeffs: Vec<Rational>) -> Result<CdElement> {
        if coeffs.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: coeffs.len(),
            });
        }
        Ok(CdElement {
            algebra: *self,
            coeffs,
        })
    }

    pub fn from_ints(&self, coeffs: &[i64]) -> Result<CdElement> {
        self.element(coeffs.iter().map(|&c| int(c)).collect())
    }

    /// Random element with small rational coefficients; may be zero.
    pub fn random_element(&self, rng: &mut Mcg64) -> CdElement {
        CdElement {
            algebra: *self,
            coeffs: rng.rational_vec(self.dim(), 5, 4),
        }
    }

    pub fn random_nonzero(&self, rng: &mut Mcg64) -> CdElement {
        loop {
            let a = self.random_element(rng);
            if !a.is_zero() {
                return a;
            }
        }
    }

    /// Signed basis products: `e_i e_j = sign[i][j] * e_{i xor j}`. Derived
    /// from [`multiply_coeffs`], so it follows the same convention.
    pub fn basis_table(&self) -> BasisTable {
        let n = self.dim();
        let mut sign = vec![0i8; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut a = vec![0i64; n];
                let mut b = vec![0i64; n];
                a[i] = 1;
                b[j] = 1;
                let p = multiply_coeffs(&a, &b);
                let k = i ^ j;
                debug_assert!(p.iter().enumerate().all(|(t, &c)| t == k || c == 0));
                sign[i * n + j] = p[k] as i8;
            }
        }
        BasisTable { dim: n, sign }
    }
}

impl fmt::Display for CdAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.level {
            0 => write!(f, "rationals"),
            1 => write!(f, "Gaussian rationals"),
            2 => write!(f, "quaternions"),
            3 => write!(f, "octonions"),
            4 => write!(f, "sedenions"),
            k => write!(f, "Cayley-Dickson level {k}"),
        }
    }
}

/// Signs of basis products for one algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisTable {
    dim: usize,
    sign: Vec<i8>,
}

impl BasisTable {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `(sign, index)` with `e_i e_j = sign * e_index`.
    pub fn product(&self, i: usize, j: usize) -> (i8, usize) {
        (self.sign[i * self.dim + j], i ^ j)
    }
}

/// Element of a Cayley-Dickson algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CdElement {
    algebra: CdAlgebra,
    coeffs: Vec<Rational>,
}

impl CdElement {
    pub fn algebra(&self) -> CdAlgebra {
        self.algebra
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, r: &Rational) -> CdElement {
        CdElement {
            algebra: self.algebra,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn to_strings(&self) -> Vec<String> {
        format_vector(&self.coeffs)
    }

    fn same_algebra(&self, other: &CdElement) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::DimensionMismatch {
                expected: self.algebra.dim(),
                actual: other.algebra.dim(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &CdElement) -> Result<CdElement> {
        self.same_algebra(other)?;
        Ok(CdElement {
            algebra: self.algebra,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_sub(&self, other: &CdElement) -> Result<CdElement> {
        self.same_algebra(other)?;
        Ok(CdElement {
            algebra: self.algebra,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }
}

impl fmt::Display for CdElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({c})e{i}"))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

pub fn cd_multiply(a: &CdElement, b: &CdElement) -> Result<CdElement> {
    a.same_algebra(b)?;
    Ok(CdElement {
        algebra: a.algebra,
        coeffs: multiply_coeffs(&a.coeffs, &b.coeffs),
    })
}

pub fn conjugate(a: &CdElement) -> CdElement {
    CdElement {
        algebra: a.algebra,
        coeffs: conjugate_coeffs(&a.coeffs),
    }
}

/// Sum of squared coefficients.
pub fn norm(a: &CdElement) -> Rational {
    a.coeffs.iter().fold(Rational::zero(), |acc, c| acc + c * c)
}

/// True iff both factors are nonzero and their product is exactly zero.
/// Elements of different algebras never form a pair.
pub fn is_zero_divisor_pair(a: &CdElement, b: &CdElement) -> bool {
    if a.is_zero() || b.is_zero() {
        return false;
    }
    cd_multiply(a, b).map(|p| p.is_zero()).unwrap_or(false)
}

/// Matrix of `x -> a x` in the standard basis.
pub fn left_mult_matrix(a: &CdElement) -> RatMatrix {
    let alg = a.algebra;
    let columns: Vec<Vec<Rational>> = (0..alg.dim())
        .map(|j| multiply_coeffs(&a.coeffs, &alg.basis(j).coeffs))
        .collect();
    RatMatrix::from_columns(&columns).expect("columns share the algebra dimension")
}

/// `e_first + sign * e_second` with `first < second`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SignedBasisPair {
    pub first: usize,
    pub second: usize,
    pub sign: i8,
}

impl SignedBasisPair {
    pub fn to_element(&self, alg: CdAlgebra) -> CdElement {
        let mut e = alg.zero();
        e.coeffs[self.first] = Rational::one();
        e.coeffs[self.second] = int(i64::from(self.sign));
        e
    }

    fn sort_key(&self) -> (usize, usize, u8) {
        (self.first, self.second, u8::from(self.sign < 0))
    }
}

impl fmt::Display for SignedBasisPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign > 0 { '+' } else { '-' };
        write!(f, "e{}{}e{}", self.first, s, self.second)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroDivisorPair {
    pub a: CdElement,
    pub b: CdElement,
    /// Basis-pair labels when the pair came from the lattice scan.
    pub labels: Option<(SignedBasisPair, SignedBasisPair)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStrategy {
    /// Every `(e_i ± e_j, e_k ± e_l)` with `i < j`, `k < l`.
    BasisPairs,
    /// Seeded random rational pairs.
    Random { samples: usize, seed: u64 },
}

fn signed_basis_pairs(dim: usize) -> Vec<SignedBasisPair> {
    let mut out = Vec::with_capacity(dim * dim);
    for first in 0..dim {
        for second in first + 1..dim {
            for sign in [1i8, -1] {
                out.push(SignedBasisPair { first, second, sign });
            }
        }
    }
    out
}

/// Product of two signed basis pairs, accumulated through the basis table.
fn basis_pair_product_is_zero(table: &BasisTable, a: &SignedBasisPair, b: &SignedBasisPair, acc: &mut [i64]) -> bool {
    let terms_a = [(a.first, 1i64), (a.second, i64::from(a.sign))];
    let terms_b = [(b.first, 1i64), (b.second, i64::from(b.sign))];
    for (i, si) in terms_a {
        for (j, sj) in terms_b {
            let (s, k) = table.product(i, j);
            acc[k] += si * sj * i64::from(s);
        }
    }
    let zero = acc.iter().all(|&c| c == 0);
    for (i, _) in terms_a {
        for (j, _) in terms_b {
            acc[i ^ j] = 0;
        }
    }
    zero
}

/// Searches for exact zero divisors.
///
/// Results are sorted by their basis-pair labels (scan) or by sample order
/// (random), and every returned pair has been re-checked with [`cd_multiply`].
pub fn find_zero_divisors(alg: CdAlgebra, strategy: SearchStrategy) -> Vec<ZeroDivisorPair> {
    match strategy {
        SearchStrategy::BasisPairs => {
            let table = alg.basis_table();
            let pairs = signed_basis_pairs(alg.dim());
            let mut acc = vec![0i64; alg.dim()];
            let mut hits = Vec::new();
            for a in &pairs {
                for b in &pairs {
                    if basis_pair_product_is_zero(&table, a, b, &mut acc) {
                        hits.push((*a, *b));
                    }
                }
            }
            hits.sort_by_key(|(a, b)| (a.sort_key(), b.sort_key()));
            hits.into_iter()
                .map(|(la, lb)| {
                    let (a, b) = (la.to_element(alg), lb.to_element(alg));
                    assert!(is_zero_divisor_pair(&a, &b), "table and recursion disagree at {la} * {lb}");
                    ZeroDivisorPair {
                        a,
                        b,
                        labels: Some((la, lb)),
                    }
                })
                .collect()
        }
        SearchStrategy::Random { samples, seed } => {
            let mut rng = Mcg64::new(seed);
            (0..samples)
                .filter_map(|_| {
                    let a = alg.random_nonzero(&mut rng);
                    let b = alg.random_nonzero(&mut rng);
                    is_zero_divisor_pair(&a, &b).then_some(ZeroDivisorPair { a, b, labels: None })
                })
                .collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CounterexampleSource {
    RandomSample,
    BasisPairScan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormCounterexample {
    pub a: CdElement,
    pub b: CdElement,
    pub norm_product: Rational,
    pub product_of_norms: Rational,
    pub source: CounterexampleSource,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormReport {
    pub level: u32,
    pub samples_checked: usize,
    pub passed: bool,
    pub counterexample: Option<NormCounterexample>,
}

fn norm_mismatch(a: &CdElement, b: &CdElement, source: CounterexampleSource) -> Option<NormCounterexample> {
    let p = cd_multiply(a, b).expect("same algebra");
    let (lhs, rhs) = (norm(&p), norm(a) * norm(b));
    (lhs != rhs).then(|| NormCounterexample {
        a: a.clone(),
        b: b.clone(),
        norm_product: lhs,
        product_of_norms: rhs,
        source,
    })
}

/// Tests `norm(ab) = norm(a) norm(b)` on seeded random pairs and stops at the
/// first failure. When sampling finds none, levels with zero divisors fall
/// back to the basis-pair scan, whose pairs have `norm(ab) = 0`.
pub fn norm_multiplicativity_check(alg: CdAlgebra, samples: usize, seed: u64) -> NormReport {
    let mut rng = Mcg64::new(seed);
    let mut checked = 0;
    for _ in 0..samples {
        let a = alg.random_element(&mut rng);
        let b = alg.random_element(&mut rng);
        checked += 1;
        if let Some(cx) = norm_mismatch(&a, &b, CounterexampleSource::RandomSample) {
            return NormReport {
                level: alg.level(),
                samples_checked: checked,
                passed: false,
                counterexample: Some(cx),
            };
        }
    }
    let fallback = if alg.level() >= 4 {
        find_zero_divisors(alg, SearchStrategy::BasisPairs)
            .into_iter()
            .find_map(|zd| norm_mismatch(&zd.a, &zd.b, CounterexampleSource::BasisPairScan))
    } else {
        None
    };
    NormReport {
        level: alg.level(),
        samples_checked: checked,
        passed: fallback.is_none(),
        counterexample: fallback,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::{det_exact, rat};

    /// Frozen from an independent nested-pair implementation of the
    /// doubling formula. Entry `(s, k)` means `e_i e_j = s e_k`.
    const QUATERNION_TABLE: [[(i8, usize); 4]; 4] = [
        [(1, 0), (1, 1), (1, 2), (1, 3)],
        [(1, 1), (-1, 0), (1, 3), (-1, 2)],
        [(1, 2), (-1, 3), (-1, 0), (1, 1)],
        [(1, 3), (1, 2), (-1, 1), (-1, 0)],
    ];

    const OCTONION_TABLE: [[(i8, usize); 8]; 8] = [
        [(1, 0), (1, 1), (1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (1, 7)],
        [(1, 1), (-1, 0), (1, 3), (-1, 2), (1, 5), (-1, 4), (-1, 7), (1, 6)],
        [(1, 2), (-1, 3), (-1, 0), (1, 1), (1, 6), (1, 7), (-1, 4), (-1, 5)],
        [(1, 3), (1, 2), (-1, 1), (-1, 0), (1, 7), (-1, 6), (1, 5), (-1, 4)],
        [(1, 4), (-1, 5), (-1, 6), (-1, 7), (-1, 0), (1, 1), (1, 2), (1, 3)],
        [(1, 5), (1, 4), (-1, 7), (1, 6), (-1, 1), (-1, 0), (-1, 3), (1, 2)],
        [(1, 6), (1, 7), (1, 4), (-1, 5), (-1, 2), (1, 3), (-1, 0), (-1, 1)],
        [(1, 7), (-1, 6), (1, 5), (1, 4), (-1, 3), (-1, 2), (1, 1), (-1, 0)],
    ];

    fn alg(level: u32) -> CdAlgebra {
        CdAlgebra::new(level).unwrap()
    }

    fn check_table<const N: usize>(level: u32, table: &[[(i8, usize); N]; N]) {
        let a = alg(level);
        for (i, row) in table.iter().enumerate() {
            for (j, &(s, k)) in row.iter().enumerate() {
                let p = cd_multiply(&a.basis(i), &a.basis(j)).unwrap();
                assert_eq!(p, a.basis(k).scale(&int(i64::from(s))), "e{i} e{j}");
            }
        }
    }

    #[test]
    fn small_products() {
        let p = cd_multiply(&alg(0).from_ints(&[2]).unwrap(), &alg(0).from_ints(&[3]).unwrap()).unwrap();
        assert_eq!(p.coeffs(), &[int(6)]);
        let c = alg(1);
        assert_eq!(cd_multiply(&c.basis(1), &c.basis(1)).unwrap(), c.basis(0).scale(&int(-1)));
        let q = alg(2);
        assert_eq!(cd_multiply(&q.basis(1), &q.basis(2)).unwrap(), q.basis(3));
    }

    #[test]
    fn quaternion_and_octonion_tables_are_frozen() {
        check_table(2, &QUATERNION_TABLE);
        check_table(3, &OCTONION_TABLE);
    }

    #[test]
    fn basis_table_agrees_with_recursion() {
        let a = alg(3);
        let t = a.basis_table();
        for (i, row) in OCTONION_TABLE.iter().enumerate() {
            for (j, &expect) in row.iter().enumerate() {
                assert_eq!(t.product(i, j), expect);
            }
        }
    }

    #[test]
    fn mismatched_algebras_rejected() {
        let err = cd_multiply(&alg(2).one(), &alg(3).one()).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 4, actual: 8 });
        assert!(!is_zero_divisor_pair(&alg(2).one(), &alg(3).one()));
    }

    #[test]
    fn conjugation_and_norm() {
        let o = alg(3);
        assert_eq!(conjugate(&o.one()), o.one());
        assert_eq!(conjugate(&o.basis(5)), o.basis(5).scale(&int(-1)));
        assert_eq!(norm(&o.zero()), int(0));
        assert_eq!(norm(&o.basis(3)), int(1));
        let c = alg(1).element(vec![rat(3, 5), rat(4, 5)]).unwrap();
        assert_eq!(norm(&c), int(1));
        let mut rng = Mcg64::new(3);
        let a = o.random_element(&mut rng);
        let s = a.checked_add(&conjugate(&a)).unwrap();
        assert_eq!(s, o.one().scale(&(&a.coeffs()[0] * int(2))));
    }

    #[test]
    fn zero_divisor_pair_predicate() {
        let o = alg(3);
        assert!(!is_zero_divisor_pair(&o.one(), &o.one()));
        assert!(!is_zero_divisor_pair(&o.zero(), &o.basis(1)));
    }

    #[test]
    fn basis_pair_scan_levels() {
        assert!(find_zero_divisors(alg(1), SearchStrategy::BasisPairs).is_empty());
        assert!(find_zero_divisors(alg(3), SearchStrategy::BasisPairs).is_empty());
        let sed = find_zero_divisors(alg(4), SearchStrategy::BasisPairs);
        // count frozen from the independent nested-pair scan
        assert_eq!(sed.len(), 336);
        for zd in &sed {
            assert!(is_zero_divisor_pair(&zd.a, &zd.b));
        }
        let (a, b) = sed[0].labels.unwrap();
        assert_eq!((a.to_string(), b.to_string()), ("e1+e10".into(), "e4-e15".into()));
    }

    #[test]
    fn random_search_finds_nothing_in_octonions() {
        let found = find_zero_divisors(alg(3), SearchStrategy::Random { samples: 200, seed: 1 });
        assert!(found.is_empty());
    }

    #[test]
    fn left_multiplication() {
        let q = alg(2);
        assert_eq!(left_mult_matrix(&q.one()), RatMatrix::identity(4));
        assert!(left_mult_matrix(&q.zero()).is_zero());
        let mut rng = Mcg64::new(11);
        for _ in 0..50 {
            let a = q.random_nonzero(&mut rng);
            assert_ne!(det_exact(&left_mult_matrix(&a)).unwrap(), int(0));
        }
        let sed = alg(4);
        let zd = &find_zero_divisors(sed, SearchStrategy::BasisPairs)[0];
        assert_eq!(det_exact(&left_mult_matrix(&zd.a)).unwrap(), int(0));
    }

    #[test]
    fn norm_check_levels() {
        assert!(norm_multiplicativity_check(alg(0), 100, 9).passed);
        let r = norm_multiplicativity_check(alg(2), 1000, 9);
        assert!(r.passed);
        assert_eq!(r.samples_checked, 1000);
        let r = norm_multiplicativity_check(alg(4), 100, 9);
        assert!(!r.passed);
        let cx = r.counterexample.unwrap();
        assert_ne!(cx.norm_product, cx.product_of_norms);
    }

    #[test]
    fn norm_check_falls_back_to_scan() {
        let r = norm_multiplicativity_check(alg(4), 0, 9);
        let cx = r.counterexample.unwrap();
        assert_eq!(cx.source, CounterexampleSource::BasisPairScan);
        assert_eq!(cx.norm_product, int(0));
    }

    #[test]
    fn level_cap() {
        assert!(CdAlgebra::new(6).is_err());
        assert_eq!(CdAlgebra::new_uncapped(6).unwrap().dim(), 64);
    }
}
