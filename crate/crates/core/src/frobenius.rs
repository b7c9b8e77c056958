//! The divisibility endgame: a real division algebra of dimension `n` forces
//! `n ξ¹_{n-1}` to be stably trivial, hence `n` divisible by the order
//! `2^{[(n-1)/2]}` of `[C ⊗ ξ¹_{n-1}] - [1]` in `K^0(RP^{n-1})`. Only
//! `n = 1, 2, 4, 8` survive.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::cdalgebra::{find_zero_divisors, CdAlgebra, SearchStrategy};
use crate::error::{Error, Result};
use crate::ktheory::{generator_order_k0_rp, k0_rp};
use crate::stiefel::{normalize_right_identity, verify_frames, MultiplicationTable};

fn check_dimension(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    Ok(())
}

/// `2^{[(n-1)/2]}`.
pub fn required_order(n: u64) -> Result<BigUint> {
    check_dimension(n)?;
    Ok(BigUint::one() << ((n - 1) / 2))
}

/// `2^{[(n-1)/2]}` divides `n`. When the exponent reaches the bit length of
/// `n` the power already exceeds `n`, so no big integer is built.
pub fn dimension_admissible(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let e = (n - 1) / 2;
    let bits = u64::from(u64::BITS - n.leading_zeros());
    if e >= bits {
        return false;
    }
    n.is_multiple_of(1u64 << e)
}

pub fn admissible_dimensions(max: u64) -> Vec<u64> {
    (1..=max).filter(|&n| dimension_admissible(n)).collect()
}

/// `n = (2m + 1) 2^k`.
pub fn odd_part_decomposition(n: u64) -> (u64, u32) {
    let k = n.trailing_zeros();
    ((n >> k) / 2, k)
}

/// Second characterization: `n = 1`, or `n = 2^k` with `2^{k-1} <= k + 1`.
fn factorization_route(n: u64) -> bool {
    let (m, k) = odd_part_decomposition(n);
    match (m, k) {
        (0, 0) => true,
        (0, k) => (1u128 << (k - 1)) <= u128::from(k) + 1,
        _ => false,
    }
}

/// Cross-checks [`dimension_admissible`] against the factorization argument
/// for every `n <= max`, including the intermediate claims:
///
/// * `k = 0, m > 0`: `n` is odd and `2^{[(n-1)/2]} = 2^m >= 2` does not divide it;
/// * `k > 0, m > 0`: `[(n-1)/2] = (2m+1) 2^{k-1} - 1 > k`.
pub fn factorization_argument_check(max: u64) -> bool {
    (1..=max).all(|n| {
        if dimension_admissible(n) != factorization_route(n) {
            return false;
        }
        let (m, k) = odd_part_decomposition(n);
        let half = (n - 1) / 2;
        if k == 0 && m > 0 && (half != m || dimension_admissible(n)) {
            return false;
        }
        if k > 0 && m > 0 {
            let claimed = (2 * m + 1) * (1u64 << (k - 1)) - 1;
            if half != claimed || claimed <= u64::from(k) {
                return false;
            }
        }
        true
    })
}

/// Class of `n ξ¹_{n-1}` in the torsion part of `K^0(RP^{n-1})`, complexified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizationClass {
    pub n: u64,
    /// Order of the cyclic torsion group (its generator's order).
    pub group_order: BigUint,
    /// `n mod group_order`: the class as a multiple of the generator.
    pub multiple: BigUint,
}

impl StabilizationClass {
    pub fn is_zero(&self) -> bool {
        self.multiple.is_zero()
    }
}

/// `n` times the reduced generator in `K^0(RP^{n-1})`, with the group and
/// generator order taken from the Smith-form computation. `RP^0` is a point
/// with trivial reduced group.
pub fn hom_stabilization_class(n: u64) -> Result<StabilizationClass> {
    check_dimension(n)?;
    let group_order = if n == 1 {
        BigUint::one()
    } else {
        let m = usize::try_from(n - 1).map_err(|_| Error::InvalidArgument("dimension too large".into()))?;
        let torsion = k0_rp(m)?.torsion_order();
        let gen = generator_order_k0_rp(m)?;
        if torsion != gen {
            return Err(Error::InvalidArgument(format!(
                "K^0(RP^{m}) torsion {torsion} is not cyclic on the generator of order {gen}"
            )));
        }
        gen
    };
    let multiple = BigUint::from(n) % &group_order;
    Ok(StabilizationClass {
        n,
        group_order,
        multiple,
    })
}

/// Evidence attached to a verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// A Cayley-Dickson algebra of this dimension passing both checks.
    Algebra {
        level: u32,
        name: String,
        zero_divisor_samples: usize,
        zero_divisor_free: bool,
        frame_samples: usize,
        frames_nondegenerate: bool,
    },
    /// An exact zero-divisor pair in the Cayley-Dickson algebra of this
    /// dimension.
    ZeroDivisorPair { a: Vec<String>, b: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionVerdict {
    pub n: u64,
    #[serde(serialize_with = "serialize_big")]
    pub required_order: BigUint,
    pub divisible: bool,
    pub admissible: bool,
    /// `n` times the generator, reduced modulo its order.
    #[serde(serialize_with = "serialize_big")]
    pub stabilization_class: BigUint,
    pub witness: Option<Witness>,
}

fn serialize_big<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_u64() {
        Some(small) => s.serialize_u64(small),
        None => s.serialize_str(&v.to_string()),
    }
}

/// Sample budget for the existence checks attached to a verdict.
pub const WITNESS_SAMPLES: usize = 200;

fn algebra_witness(level: u32, seed: u64) -> Result<Witness> {
    let alg = CdAlgebra::new(level)?;
    let table = MultiplicationTable::from_algebra(alg);
    let zero_divisor_free = table.zero_divisor_spot_check(WITNESS_SAMPLES, seed).is_none();
    let frames = verify_frames(&normalize_right_identity(&table)?, WITNESS_SAMPLES, seed)?;
    Ok(Witness::Algebra {
        level,
        name: alg.to_string(),
        zero_divisor_samples: WITNESS_SAMPLES,
        zero_divisor_free,
        frame_samples: WITNESS_SAMPLES,
        frames_nondegenerate: frames.passed(),
    })
}

/// Full verdict for one dimension. Dimensions 1, 2, 4, 8 carry a
/// Cayley-Dickson existence witness, 16 carries a sedenion zero-divisor pair.
pub fn full_pipeline_report(n: u64, seed: u64) -> Result<DimensionVerdict> {
    let required = required_order(n)?;
    let divisible = (BigUint::from(n) % &required).is_zero();
    let admissible = dimension_admissible(n);
    let stabilization_class = hom_stabilization_class(n)?.multiple;
    let witness = match n {
        1 | 2 | 4 | 8 => Some(algebra_witness(n.trailing_zeros(), seed)?),
        16 => {
            let zd = find_zero_divisors(CdAlgebra::new(4)?, SearchStrategy::BasisPairs);
            zd.first().map(|p| Witness::ZeroDivisorPair {
                a: p.a.to_strings(),
                b: p.b.to_strings(),
            })
        }
        _ => None,
    };
    Ok(DimensionVerdict {
        n,
        required_order: required,
        divisible,
        admissible,
        stabilization_class,
        witness,
    })
}
