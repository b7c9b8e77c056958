//! Exact scalars, exact linear algebra and rational points on spheres.

mod gaussian;
mod matrix;
mod rng;

pub use gaussian::GaussianRational;
pub use matrix::{
    det_exact, int_det, inverse_exact, kernel_basis_exact, rank_exact, IntMatrix, Matrix,
    RatMatrix,
};
pub use rng::Mcg64;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Shorthand for `n/d` with machine-size parts. Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Renders `q` as `"p/q"`, including a denominator of 1.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn format_vector(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn norm_sq(a: &[Rational]) -> Rational {
    dot(a, a)
}

/// Rational point `((1-t^2)/(1+t^2), 2t/(1+t^2))` on the unit circle.
pub fn unit_circle_rational(t: &Rational) -> GaussianRational {
    let t2 = t * t;
    let denom = Rational::one() + &t2;
    let re = (Rational::one() - &t2) / &denom;
    let im = (t * int(2)) / denom;
    GaussianRational::new(re, im)
}

/// Inverse stereographic projection from the south pole convention
/// `x = (2t_1, ..., 2t_{n-1}, |t|^2 - 1) / (|t|^2 + 1)`.
///
/// The output has one more coordinate than `t` and squared norm exactly 1.
pub fn rational_sphere_point(t: &[Rational]) -> Vec<Rational> {
    let s = norm_sq(t);
    let denom = &s + Rational::one();
    let two = int(2);
    let mut x: Vec<Rational> = t.iter().map(|ti| (ti * &two) / &denom).collect();
    x.push((s - Rational::one()) / denom);
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_points() {
        assert_eq!(unit_circle_rational(&int(0)), GaussianRational::new(int(1), int(0)));
        assert_eq!(unit_circle_rational(&int(1)), GaussianRational::new(int(0), int(1)));
        assert_eq!(
            unit_circle_rational(&rat(1, 2)),
            GaussianRational::new(rat(3, 5), rat(4, 5))
        );
    }

    #[test]
    fn sphere_points() {
        assert_eq!(rational_sphere_point(&[int(0)]), vec![int(0), int(-1)]);
        assert_eq!(rational_sphere_point(&[int(1)]), vec![int(1), int(0)]);
        assert_eq!(
            rational_sphere_point(&[int(1), int(1)]),
            vec![rat(2, 3), rat(2, 3), rat(1, 3)]
        );
        assert_eq!(rational_sphere_point(&[]), vec![int(-1)]);
    }

    #[test]
    fn rational_text_roundtrip() {
        assert_eq!(format_rational(&rat(-6, 4)), "-3/2");
        assert_eq!(format_rational(&int(5)), "5/1");
        assert_eq!(parse_rational(" -3/2 ").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational("4/-6").unwrap(), rat(-2, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("0.5").is_err());
    }
}
