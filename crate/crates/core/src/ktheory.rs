//! K-groups of real and complex projective spaces from integer presentations.
//!
//! `K^0(CP^n)` is taken as the truncated polynomial ring `Z[β]/(β^{n+1})`,
//! additively `Z^{n+1}` on the basis `1, β, ..., β^n`. For `m = 2n+1` the
//! group `K^0(RP^m)` is the cokernel of multiplication by the Euler class
//! `2β - β²` of the squared Hopf bundle, and `K^1(RP^m)` is its kernel. Even
//! `m` inherits the odd answer at `m + 1` through restriction.
//!
//! Everything funnels through [`smith_normal_form`].

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactcore::IntMatrix;

/// `U * M * V = D` with `U`, `V` unimodular and `D` diagonal, its nonzero
/// entries forming a divisibility chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries `d_1, ..., d_min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

fn add_row_multiple(m: &mut IntMatrix, target: usize, source: usize, factor: &BigInt) {
    for c in 0..m.cols() {
        let v = &m[(source, c)] * factor;
        m[(target, c)] += v;
    }
}

fn add_col_multiple(m: &mut IntMatrix, target: usize, source: usize, factor: &BigInt) {
    for r in 0..m.rows() {
        let v = &m[(r, source)] * factor;
        m[(r, target)] += v;
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for c in 0..m.cols() {
        m[(r, c)] = -&m[(r, c)];
    }
}

/// Smallest nonzero |entry| in the block `[t.., t..]`, ties broken by the
/// lowest `(row, col)`.
fn min_pivot(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for r in t..a.rows() {
        for c in t..a.cols() {
            let x = &a[(r, c)];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(br, bc)| x.abs() < a[(br, bc)].abs()) {
                best = Some((r, c));
            }
        }
    }
    best
}

/// Smith normal form with transformation matrices.
///
/// At each stage the pivot is the nonzero entry of minimal absolute value in
/// the remaining block (lowest `(row, col)` on ties). The pivot row and
/// column are cleared by Euclidean reduction, re-pivoting whenever a smaller
/// remainder appears; if the pivot fails to divide some remaining entry,
/// that entry's row is added to the pivot row and the stage restarts. The
/// output is a deterministic function of the input.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        let Some(_) = min_pivot(&a, t) else { break };
        'stage: loop {
            let (pr, pc) = min_pivot(&a, t).expect("block is nonzero");
            a.swap_rows(t, pr);
            u.swap_rows(t, pr);
            a.swap_cols(t, pc);
            v.swap_cols(t, pc);

            let mut dirty = false;
            for r in t + 1..rows {
                if a[(r, t)].is_zero() {
                    continue;
                }
                let q = -a[(r, t)].div_floor(&a[(t, t)]);
                add_row_multiple(&mut a, r, t, &q);
                add_row_multiple(&mut u, r, t, &q);
                dirty |= !a[(r, t)].is_zero();
            }
            for c in t + 1..cols {
                if a[(t, c)].is_zero() {
                    continue;
                }
                let q = -a[(t, c)].div_floor(&a[(t, t)]);
                add_col_multiple(&mut a, c, t, &q);
                add_col_multiple(&mut v, c, t, &q);
                dirty |= !a[(t, c)].is_zero();
            }
            if dirty {
                continue 'stage;
            }
            let pivot = a[(t, t)].clone();
            for r in t + 1..rows {
                if (t + 1..cols).any(|c| !a[(r, c)].is_multiple_of(&pivot)) {
                    add_row_multiple(&mut a, t, r, &BigInt::one());
                    add_row_multiple(&mut u, t, r, &BigInt::one());
                    continue 'stage;
                }
            }
            break;
        }
        if a[(t, t)].is_negative() {
            negate_row(&mut a, t);
            negate_row(&mut u, t);
        }
    }
    SmithForm { u, d: a, v }
}

/// Finitely generated abelian group `Z^free_rank ⊕ Z_{d_1} ⊕ ... ⊕ Z_{d_k}`
/// with `2 <= d_1 | d_2 | ... | d_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FgAbGroup {
    pub free_rank: usize,
    #[serde(serialize_with = "serialize_torsion")]
    pub torsion: Vec<BigUint>,
}

fn serialize_torsion<S: serde::Serializer>(t: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(t.len()))?;
    for d in t {
        match d.to_u64() {
            Some(small) => seq.serialize_element(&small)?,
            None => seq.serialize_element(&d.to_string())?,
        }
    }
    seq.end()
}

impl FgAbGroup {
    pub fn trivial() -> Self {
        Self::free(0)
    }

    pub fn free(rank: usize) -> Self {
        Self {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// Canonical form of `Z^free_rank ⊕ ⊕ Z_{c_i}` for arbitrary cyclic
    /// orders `c_i` (each at least 1).
    pub fn from_cyclic(free_rank: usize, orders: &[u64]) -> Self {
        let diag = IntMatrix::from_fn(orders.len(), orders.len(), |r, c| {
            if r == c {
                BigInt::from(orders[r])
            } else {
                BigInt::zero()
            }
        });
        let mut g = cokernel_structure(&diag);
        g.free_rank += free_rank;
        g
    }

    /// `Z^a ⊕ T` and `Z^b ⊕ T'` give `Z^{a+b} ⊕ T ⊕ T'` in canonical form.
    pub fn direct_sum(&self, other: &FgAbGroup) -> FgAbGroup {
        let orders: Vec<BigInt> = self
            .torsion
            .iter()
            .chain(&other.torsion)
            .map(|d| BigInt::from(d.clone()))
            .collect();
        let diag = IntMatrix::from_fn(orders.len(), orders.len(), |r, c| {
            if r == c {
                orders[r].clone()
            } else {
                BigInt::zero()
            }
        });
        let mut g = cokernel_structure(&diag);
        g.free_rank = self.free_rank + other.free_rank;
        g
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigUint {
        self.torsion.iter().product()
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z_{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Structure of `Z^r / colspan(M)` where `r` is the number of rows of `M`.
pub fn cokernel_structure(m: &IntMatrix) -> FgAbGroup {
    let snf = smith_normal_form(m);
    let diag = snf.diagonal();
    let nonzero = diag.iter().filter(|d| !d.is_zero()).count();
    let torsion = diag
        .iter()
        .filter(|d| !d.is_zero() && !d.is_one())
        .map(|d| d.magnitude().clone())
        .collect();
    FgAbGroup {
        free_rank: m.rows() - nonzero,
        torsion,
    }
}

/// Basis of the integer kernel `{x in Z^cols : M x = 0}`: the last
/// `cols - rank` columns of the Smith transform `V`.
pub fn integer_kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    (snf.rank()..m.cols()).map(|c| snf.v.column(c)).collect()
}

/// `Σ c_j β^j` in `Z[β]/(β^{n+1})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedPoly {
    coeffs: Vec<BigInt>,
}

impl TruncatedPoly {
    /// Coefficients `c_0..=c_n`; anything past `β^n` is dropped.
    pub fn new(n: usize, coeffs: &[i64]) -> Self {
        let mut c: Vec<BigInt> = coeffs.iter().take(n + 1).map(|&x| BigInt::from(x)).collect();
        c.resize(n + 1, BigInt::zero());
        Self { coeffs: c }
    }

    pub fn one(n: usize) -> Self {
        Self::new(n, &[1])
    }

    /// The generator `β^k` (zero when `k > n`).
    pub fn monomial(n: usize, k: usize) -> Self {
        let mut p = Self::new(n, &[]);
        if k <= n {
            p.coeffs[k] = BigInt::one();
        }
        p
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn mul(&self, other: &TruncatedPoly) -> Result<TruncatedPoly> {
        let n = self.truncation();
        if other.truncation() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: other.truncation(),
            });
        }
        let mut out = vec![BigInt::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] += a * b;
            }
        }
        Ok(Self { coeffs: out })
    }
}

/// Matrix of `g -> f g` on the basis `1, β, ..., β^n`; column `j` holds the
/// coefficients of `f β^j`.
pub fn mult_operator_matrix(f: &TruncatedPoly) -> IntMatrix {
    let n = f.truncation();
    let columns: Vec<Vec<BigInt>> = (0..=n)
        .map(|j| {
            f.mul(&TruncatedPoly::monomial(n, j))
                .expect("same truncation")
                .coeffs
        })
        .collect();
    IntMatrix::from_columns(&columns).expect("square")
}

/// K-theoretic Euler class `[1] - [conj(η²)] = 2β - β²` of the squared Hopf
/// bundle over `CP^n`, truncated at `β^{n+1}`. At `n = 0` the truncation
/// leaves the zero polynomial.
pub fn euler_class_eta2(n: usize) -> TruncatedPoly {
    TruncatedPoly::new(n, &[0, 2, -1])
}

pub fn k0_cp(n: usize) -> FgAbGroup {
    FgAbGroup::free(n + 1)
}

pub fn k1_cp(_n: usize) -> FgAbGroup {
    FgAbGroup::trivial()
}

/// How a group was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Cokernel of the Euler-class multiplication, via Smith form.
    SnfCokernel,
    /// Kernel of the Euler-class multiplication, via Smith form.
    SnfKernel,
    /// Copied from a neighbouring dimension through restriction, or a
    /// stated value.
    FormulaTransfer,
    /// The truncated polynomial presentation of `K^*(CP^n)`.
    LemmaPresentation,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::SnfCokernel => "snf-cokernel",
            Method::SnfKernel => "snf-kernel",
            Method::FormulaTransfer => "formula-transfer",
            Method::LemmaPresentation => "lemma-presentation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KGroup {
    pub group: FgAbGroup,
    pub method: Method,
}

fn check_rp_index(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidArgument("RP^m needs m >= 1".into()));
    }
    Ok(())
}

/// Euler multiplication with values in the reduced lattice spanned by
/// `β, ..., β^n`. The Euler class has no constant term, so the image already
/// lies there; this is the full operator with the (zero) augmentation row
/// removed.
pub fn reduced_euler_matrix(n: usize) -> IntMatrix {
    let full = mult_operator_matrix(&euler_class_eta2(n));
    let rows: Vec<usize> = (1..=n).collect();
    let cols: Vec<usize> = (0..=n).collect();
    full.select(&rows, &cols)
}

/// `K^0(RP^m)`. Odd `m` comes from a Smith-form cokernel, even `m` is
/// transferred from `m + 1`.
pub fn k0_rp_with_method(m: usize) -> Result<KGroup> {
    check_rp_index(m)?;
    if m.is_multiple_of(2) {
        let odd = k0_rp_with_method(m + 1)?;
        return Ok(KGroup {
            group: odd.group,
            method: Method::FormulaTransfer,
        });
    }
    let n = (m - 1) / 2;
    let reduced = cokernel_structure(&reduced_euler_matrix(n));
    Ok(KGroup {
        group: FgAbGroup::free(1).direct_sum(&reduced),
        method: Method::SnfCokernel,
    })
}

pub fn k0_rp(m: usize) -> Result<FgAbGroup> {
    Ok(k0_rp_with_method(m)?.group)
}

/// `K^1(RP^m)`: the kernel of the Euler multiplication for odd `m`, zero for
/// even `m`.
pub fn k1_rp_with_method(m: usize) -> Result<KGroup> {
    check_rp_index(m)?;
    if m.is_multiple_of(2) {
        return Ok(KGroup {
            group: FgAbGroup::trivial(),
            method: Method::FormulaTransfer,
        });
    }
    let n = (m - 1) / 2;
    let kernel = integer_kernel_basis(&mult_operator_matrix(&euler_class_eta2(n)));
    Ok(KGroup {
        group: FgAbGroup::free(kernel.len()),
        method: Method::SnfKernel,
    })
}

pub fn k1_rp(m: usize) -> Result<FgAbGroup> {
    Ok(k1_rp_with_method(m)?.group)
}

/// Order of an element of a finitely generated abelian group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ElementOrder {
    Finite(BigUint),
    Infinite,
}

impl ElementOrder {
    pub fn finite(&self) -> Option<&BigUint> {
        match self {
            ElementOrder::Finite(n) => Some(n),
            ElementOrder::Infinite => None,
        }
    }
}

impl fmt::Display for ElementOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementOrder::Finite(n) => write!(f, "{n}"),
            ElementOrder::Infinite => write!(f, "infinite"),
        }
    }
}

/// Order of the image of `element` in `Z^r / colspan(relations)`.
///
/// With `U M V = D`, the coordinates `y = U x` split the quotient into cyclic
/// pieces `Z / d_i` (and free pieces where `d_i = 0` or past the diagonal);
/// the order is the lcm of `d_i / gcd(y_i, d_i)`, or infinite if some free
/// coordinate is nonzero.
pub fn element_order(relations: &IntMatrix, element: &[BigInt]) -> Result<ElementOrder> {
    if element.len() != relations.rows() {
        return Err(Error::DimensionMismatch {
            expected: relations.rows(),
            actual: element.len(),
        });
    }
    let snf = smith_normal_form(relations);
    let y = snf.u.mul_vec(element)?;
    let diag = snf.diagonal();
    let mut order = BigInt::one();
    for (i, yi) in y.iter().enumerate() {
        let d = diag.get(i).cloned().unwrap_or_default();
        if d.is_zero() {
            if !yi.is_zero() {
                return Ok(ElementOrder::Infinite);
            }
            continue;
        }
        let piece = &d / yi.gcd(&d);
        order = order.lcm(&piece);
    }
    Ok(ElementOrder::Finite(order.magnitude().clone()))
}

/// Order of the reduced class `[C ⊗ ξ¹_m] - [1]` in `K^0(RP^m)`.
///
/// For odd `m = 2n+1` that class is `-β` pulled back from `CP^n`, so this is
/// the order of `-β` modulo the Euler relations on `Z^{n+1}`. Even `m` uses
/// the value at `m + 1`.
pub fn generator_order_k0_rp(m: usize) -> Result<BigUint> {
    check_rp_index(m)?;
    let odd = if m.is_multiple_of(2) { m + 1 } else { m };
    let n = (odd - 1) / 2;
    let relations = mult_operator_matrix(&euler_class_eta2(n));
    let mut minus_beta = vec![BigInt::zero(); n + 1];
    if n >= 1 {
        minus_beta[1] = -BigInt::one();
    }
    match element_order(&relations, &minus_beta)? {
        ElementOrder::Finite(o) => Ok(o),
        ElementOrder::Infinite => Err(Error::InvalidArgument(format!(
            "generator of K^0(RP^{m}) has infinite order"
        ))),
    }
}
