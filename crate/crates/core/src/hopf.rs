//! Pointwise checks of the map `g: RP^{2n+1} -> S(η²)`,
//! `g[x] = (conj(w) z(x), w²)`, where `z_j = x_{2j-1} + i x_{2j}`, `w` is any
//! unit complex number, and the target is `S^{2n+1} x S^1` modulo
//! `(z, v) ~ (z conj(u), u² v)` for unit `u`.
//!
//! All points are exact: sphere points come from inverse stereographic
//! projection and circle points from the rational parametrization, so every
//! norm condition is an equality of rationals.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactcore::{
    norm_sq, rational_sphere_point, unit_circle_rational, GaussianRational, Mcg64, Rational,
};

/// Point of `RP^m` given by homogeneous coordinates.
#[derive(Debug, Clone)]
pub struct ProjectivePointR {
    coords: Vec<Rational>,
}

impl ProjectivePointR {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.iter().all(Zero::is_zero) {
            return Err(Error::ZeroVector);
        }
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// Representative whose first nonzero coordinate is 1.
    pub fn canonical(&self) -> Vec<Rational> {
        let lead = self.coords.iter().find(|c| !c.is_zero()).expect("nonzero").clone();
        self.coords.iter().map(|c| c / &lead).collect()
    }
}

impl PartialEq for ProjectivePointR {
    fn eq(&self, other: &Self) -> bool {
        self.coords.len() == other.coords.len() && self.canonical() == other.canonical()
    }
}

impl Eq for ProjectivePointR {}

/// Representative `(z, v)` of a point of `S^{2n+1} x_ρ S^1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssocBundlePoint {
    pub z: Vec<GaussianRational>,
    pub v: GaussianRational,
}

impl AssocBundlePoint {
    pub fn new(z: Vec<GaussianRational>, v: GaussianRational) -> Result<Self> {
        if !complex_norm_sq(&z).is_one() {
            return Err(Error::NotUnit("sphere coordinate z"));
        }
        if !v.is_unit() {
            return Err(Error::NotUnit("fiber coordinate v"));
        }
        Ok(Self { z, v })
    }

    /// Applies the relation with a given unit `u`: `(z conj(u), u² v)`.
    pub fn act(&self, u: &GaussianRational) -> Self {
        let ub = u.conj();
        Self {
            z: self.z.iter().map(|zj| zj * &ub).collect(),
            v: &(u * u) * &self.v,
        }
    }
}

pub fn complex_norm_sq(z: &[GaussianRational]) -> Rational {
    z.iter().fold(Rational::zero(), |acc, q| acc + q.norm_sq())
}

/// `z_j = x_{2j-1} + i x_{2j}`.
pub fn complexify(x: &[Rational]) -> Result<Vec<GaussianRational>> {
    if !x.len().is_multiple_of(2) {
        return Err(Error::OddLength(x.len()));
    }
    Ok(x.chunks(2)
        .map(|p| GaussianRational::new(p[0].clone(), p[1].clone()))
        .collect())
}

/// Inverse of [`complexify`].
pub fn realify(z: &[GaussianRational]) -> Vec<Rational> {
    z.iter().flat_map(|q| [q.re.clone(), q.im.clone()]).collect()
}

fn check_unit_inputs(x: &[Rational], w: &GaussianRational) -> Result<()> {
    if !x.len().is_multiple_of(2) {
        return Err(Error::OddLength(x.len()));
    }
    if !norm_sq(x).is_one() {
        return Err(Error::NotUnit("projective representative x"));
    }
    if !w.is_unit() {
        return Err(Error::NotUnit("w"));
    }
    Ok(())
}

/// `g(x) = (conj(w) z(x), w²)` for a unit representative `x`.
pub fn g_map(x: &[Rational], w: &GaussianRational) -> Result<AssocBundlePoint> {
    check_unit_inputs(x, w)?;
    let wb = w.conj();
    let z = complexify(x)?.iter().map(|zj| &wb * zj).collect();
    Ok(AssocBundlePoint { z, v: w * w })
}

/// Solves for the unique candidate `u` relating `p` to `q`, if any.
///
/// `u` is read off the first coordinate where `p.z` is nonzero; then every
/// coordinate and the fiber condition are checked exactly.
pub fn rho_witness(p: &AssocBundlePoint, q: &AssocBundlePoint) -> Option<GaussianRational> {
    if p.z.len() != q.z.len() {
        return None;
    }
    let j = p.z.iter().position(|c| !c.is_zero())?;
    let u = q.z[j].checked_div(&p.z[j])?.conj();
    if !u.is_unit() {
        return None;
    }
    (p.act(&u) == *q).then_some(u)
}

pub fn rho_equivalent(p: &AssocBundlePoint, q: &AssocBundlePoint) -> bool {
    rho_witness(p, q).is_some()
}

/// The choice of `w` does not matter up to the relation.
pub fn w_independence_check(x: &[Rational], w1: &GaussianRational, w2: &GaussianRational) -> Result<bool> {
    Ok(rho_equivalent(&g_map(x, w1)?, &g_map(x, w2)?))
}

/// `x` and `-x` have equivalent images.
pub fn antipodal_invariance_check(x: &[Rational], w: &GaussianRational) -> Result<bool> {
    let neg: Vec<Rational> = x.iter().map(|c| -c).collect();
    Ok(rho_equivalent(&g_map(x, w)?, &g_map(&neg, w)?))
}

/// Real coordinates of `λ z(x)`.
pub fn circle_action(x: &[Rational], lambda: &GaussianRational) -> Result<Vec<Rational>> {
    let z = complexify(x)?;
    Ok(realify(&z.iter().map(|zj| lambda * zj).collect::<Vec<_>>()))
}

/// Exponents `ε ∈ {2, -2}` for which `g(λx)` is equivalent to
/// `(g(x).z, λ^ε g(x).v)`.
pub fn equivariance_exponents(x: &[Rational], w: &GaussianRational, lambda: &GaussianRational) -> Result<Vec<i32>> {
    if !lambda.is_unit() {
        return Err(Error::NotUnit("lambda"));
    }
    let moved = g_map(&circle_action(x, lambda)?, w)?;
    let base = g_map(x, w)?;
    let mut out = Vec::new();
    for eps in [2, -2] {
        let factor = if eps > 0 { lambda.pow(2) } else { lambda.conj().pow(2) };
        let target = AssocBundlePoint {
            z: base.z.clone(),
            v: &factor * &base.v,
        };
        if rho_equivalent(&target, &moved) {
            out.push(eps);
        }
    }
    Ok(out)
}

/// Single exponent consistent with every sample, `Ok(None)` when every
/// sample is compatible with both signs (as for `λ⁴ = 1`).
pub fn equivariance_check(samples: &[(Vec<Rational>, GaussianRational, GaussianRational)]) -> Result<Option<i32>> {
    let mut allowed = vec![2, -2];
    for (x, w, lambda) in samples {
        let here = equivariance_exponents(x, w, lambda)?;
        allowed.retain(|e| here.contains(e));
        if allowed.is_empty() {
            return Err(Error::InconsistentExponent);
        }
    }
    Ok((allowed.len() == 1).then(|| allowed[0]))
}

/// `c * a = b` for some complex `c`.
pub fn complex_proportional(a: &[GaussianRational], b: &[GaussianRational]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let (a_zero, b_zero) = (a.iter().all(Zero::is_zero), b.iter().all(Zero::is_zero));
    if a_zero || b_zero {
        return a_zero && b_zero;
    }
    let j = a.iter().position(|c| !c.is_zero()).expect("nonzero");
    let Some(c) = b[j].checked_div(&a[j]) else {
        return false;
    };
    a.iter().zip(b).all(|(ai, bi)| &(&c * ai) == bi)
}

/// The complex line of `g(x).z` is the complex line of `z(x)`.
pub fn base_compatibility_check(x: &[Rational], w: &GaussianRational) -> Result<bool> {
    let img = g_map(x, w)?;
    Ok(complex_proportional(&complexify(x)?, &img.z))
}

/// Injectivity along one fiber of `RP^{2n+1} -> CP^n`.
///
/// Each entry `(λ, w)` gives the fiber point `[λ z0]` evaluated with the
/// choice `w`. Two entries are the same projective point iff `λ' = ±λ`; such
/// pairs must have equivalent images and every other pair inequivalent ones.
pub fn fiber_injectivity_check(base: &[GaussianRational], fiber: &[(GaussianRational, GaussianRational)]) -> Result<bool> {
    if !complex_norm_sq(base).is_one() {
        return Err(Error::NotUnit("base point"));
    }
    let images = fiber
        .iter()
        .map(|(lambda, w)| {
            if !lambda.is_unit() {
                return Err(Error::NotUnit("lambda"));
            }
            let z: Vec<GaussianRational> = base.iter().map(|b| lambda * b).collect();
            g_map(&realify(&z), w)
        })
        .collect::<Result<Vec<_>>>()?;
    for i in 0..fiber.len() {
        for j in i + 1..fiber.len() {
            let (li, lj) = (&fiber[i].0, &fiber[j].0);
            let same_point = li == lj || *li == -lj;
            if rho_equivalent(&images[i], &images[j]) != same_point {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Class of `(x : u : v)` in the proportion model of `π₂^* η¹`, i.e. the
/// complex vector `(z(x), u + iv)`.
fn eta_class(x: &[Rational], lambda: &GaussianRational) -> Result<Vec<GaussianRational>> {
    let mut z = complexify(x)?;
    z.push(lambda.clone());
    Ok(z)
}

/// Checks the identification of `C ⊗ ξ¹` with the pullback of `η¹`:
///
/// * `(x : u : v)` and `(-x : -u : -v)` give the same class `(z : λ)`;
/// * real rescaling `(tx : tu : tv)` does not change the class;
/// * the class lies over the base line of `z(x)`;
/// * multiplying `λ` by `i` is `(u, v) -> (-v, u)`, and for `λ != 0` it moves
///   the point within its fiber.
pub fn pullback_proportion_check(x: &[Rational], lambda: &GaussianRational) -> Result<bool> {
    if x.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector);
    }
    let class = eta_class(x, lambda)?;
    let neg_x: Vec<Rational> = x.iter().map(|c| -c).collect();
    let flipped = eta_class(&neg_x, &-lambda)?;
    if !complex_proportional(&class, &flipped) {
        return Ok(false);
    }
    let t = Rational::new(3.into(), 7.into());
    let scaled_x: Vec<Rational> = x.iter().map(|c| c * &t).collect();
    if !complex_proportional(&class, &eta_class(&scaled_x, &lambda.scale(&t))?) {
        return Ok(false);
    }
    let z = complexify(x)?;
    if !complex_proportional(&z, &class[..z.len()]) {
        return Ok(false);
    }
    let (u, v) = (&lambda.re, &lambda.im);
    let rotated = GaussianRational::new(-v, u.clone());
    if &GaussianRational::i() * lambda != rotated {
        return Ok(false);
    }
    Ok(lambda.is_zero() || !complex_proportional(&class, &eta_class(x, &rotated)?))
}

/// Counts per property over a seeded batch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HopfReport {
    pub n: usize,
    pub samples: usize,
    pub w_independence: usize,
    pub antipodal: usize,
    pub base_compatibility: usize,
    pub fiber_injectivity: usize,
    pub pullback: usize,
    pub unit_norms: usize,
    /// Uniform exponent, `None` if every sample was ambiguous.
    pub equivariance_exponent: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<HopfWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HopfWitness {
    pub check: String,
    pub x: Vec<String>,
    pub w: [String; 2],
    pub lambda: [String; 2],
}

impl HopfReport {
    pub fn passed(&self) -> bool {
        let s = self.samples;
        self.w_independence == s
            && self.antipodal == s
            && self.base_compatibility == s
            && self.fiber_injectivity == s
            && self.pullback == s
            && self.unit_norms == s
            && self.first_failure.is_none()
    }
}

/// One sampled configuration: a unit point of `S^{2n+1}`, two choices of
/// `w`, and a unit `λ`.
#[derive(Debug, Clone)]
pub struct HopfSample {
    pub x: Vec<Rational>,
    pub w1: GaussianRational,
    pub w2: GaussianRational,
    pub lambda: GaussianRational,
}

fn random_unit(rng: &mut Mcg64) -> GaussianRational {
    unit_circle_rational(&rng.rational(9, 9))
}

pub fn sample_configurations(n: usize, count: usize, seed: u64) -> Vec<HopfSample> {
    let mut rng = Mcg64::new(seed);
    (0..count)
        .map(|_| HopfSample {
            x: rational_sphere_point(&rng.rational_vec(2 * n + 1, 9, 9)),
            w1: random_unit(&mut rng),
            w2: random_unit(&mut rng),
            lambda: random_unit(&mut rng),
        })
        .collect()
}

/// Runs every property on the given samples. For fiber injectivity each
/// sample contributes the fiber over `z(x)` at the points `λ^k z(x)` for
/// `k = 0..4`, plus `-z(x)`, evaluated with alternating `w` choices.
pub fn verify_samples(n: usize, samples: &[HopfSample]) -> Result<HopfReport> {
    let mut r = HopfReport {
        n,
        samples: samples.len(),
        w_independence: 0,
        antipodal: 0,
        base_compatibility: 0,
        fiber_injectivity: 0,
        pullback: 0,
        unit_norms: 0,
        equivariance_exponent: None,
        first_failure: None,
    };
    let note = |r: &mut HopfReport, ok: bool, name: &str, s: &HopfSample| {
        if !ok && r.first_failure.is_none() {
            r.first_failure = Some(HopfWitness {
                check: name.to_string(),
                x: crate::exactcore::format_vector(&s.x),
                w: s.w1.to_strings(),
                lambda: s.lambda.to_strings(),
            });
        }
        usize::from(ok)
    };
    for s in samples {
        if s.x.len() != 2 * n + 2 {
            return Err(Error::DimensionMismatch {
                expected: 2 * n + 2,
                actual: s.x.len(),
            });
        }
        let img = g_map(&s.x, &s.w1)?;
        let ok = complex_norm_sq(&img.z).is_one() && img.v.is_unit();
        r.unit_norms += note(&mut r, ok, "unit-norms", s);
        let ok = w_independence_check(&s.x, &s.w1, &s.w2)?;
        r.w_independence += note(&mut r, ok, "w-independence", s);
        let ok = antipodal_invariance_check(&s.x, &s.w1)?;
        r.antipodal += note(&mut r, ok, "antipodal", s);
        let ok = base_compatibility_check(&s.x, &s.w1)?;
        r.base_compatibility += note(&mut r, ok, "base-compatibility", s);

        let z0 = complexify(&s.x)?;
        let mut fiber: Vec<(GaussianRational, GaussianRational)> = (0..4u32)
            .map(|k| (s.lambda.pow(k), if k % 2 == 0 { s.w1.clone() } else { s.w2.clone() }))
            .collect();
        fiber.push((-GaussianRational::one(), s.w2.clone()));
        let ok = fiber_injectivity_check(&z0, &fiber)?;
        r.fiber_injectivity += note(&mut r, ok, "fiber-injectivity", s);

        let ok = pullback_proportion_check(&s.x, &s.lambda)?;
        r.pullback += note(&mut r, ok, "pullback", s);
    }
    let triples: Vec<_> = samples
        .iter()
        .map(|s| (s.x.clone(), s.w1.clone(), s.lambda.clone()))
        .collect();
    r.equivariance_exponent = equivariance_check(&triples)?;
    Ok(r)
}

pub fn verify(n: usize, count: usize, seed: u64) -> Result<HopfReport> {
    verify_samples(n, &sample_configurations(n, count, seed))
}
