//! Single-wire spider products: Euler-style equalities between `Z X Z` and
//! `X Z X` phase chains, a two-spider commutation solver, a classifier against
//! the seven parametric equality families, a bounded-denominator exhaustive
//! enumerator, and the alternating-word identity checker.
//!
//! Composition convention: a triple reads top-to-bottom and the topmost spider
//! is applied last, so `euler_compose((a, b, c), Zxz)` is the matrix product
//! `M_Z(a) * M_X(b) * M_Z(c)` acting on column vectors. Both sides of every
//! equality use the same convention, so any uniform choice validates the same
//! set of equalities.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;

use crate::angle::{Angle, RationalAngle};
use crate::cyclotomic::Cyclotomic;
use crate::error::ZxError;
use crate::matrix::{equal_up_to_scalar, Mat, Matrix, Scalar};

/// Alternation pattern of a three-spider chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpiderOrder {
    Zxz,
    Xzx,
}

/// A candidate equality between a `Z X Z` chain and an `X Z X` chain.
///
/// With `color_swapped = false` the `lhs` triple composes as `Z X Z` and the
/// `rhs` as `X Z X`; setting the flag swaps both roles.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EulerEquality {
    pub lhs: [Angle; 3],
    pub rhs: [Angle; 3],
    pub color_swapped: bool,
}

/// A successful family classification: which of the seven families matched,
/// whether in its color-swapped form, the integer parameters, and the free
/// angles recovered from the instance.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyMatch {
    pub family: u8,
    pub color_swapped: bool,
    pub n: u8,
    pub m: u8,
    pub free_angles: BTreeMap<String, Angle>,
}

/// Verdict of [`classify_euler`].
#[derive(Debug, Clone, Serialize)]
pub enum Classification {
    /// The equality is an instance of one of the seven families.
    Matched(FamilyMatch),
    /// The two sides are not even equal up to a scalar.
    NotAnEquality,
    /// The sides are equal up to a scalar but no family matches: a
    /// completeness violation in the family table.
    Unclassified,
}

impl Classification {
    pub fn is_matched(&self) -> bool {
        matches!(self, Classification::Matched(_))
    }
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn z_mat_exact(a: &RationalAngle) -> Mat<Cyclotomic> {
    let mut m: Mat<Cyclotomic> = Mat::zeros(2, 2);
    m.set(0, 0, Cyclotomic::one());
    m.set(1, 1, Cyclotomic::root_of_unity(a));
    m
}

fn x_mat_exact(a: &RationalAngle) -> Mat<Cyclotomic> {
    let e = Cyclotomic::root_of_unity(a);
    let half = ratio(1, 2);
    let plus = Cyclotomic::one().add_ref(&e).scale_ratio(&half);
    let minus = Cyclotomic::one().sub_ref(&e).scale_ratio(&half);
    Mat::from_rows(vec![vec![plus.clone(), minus.clone()], vec![minus, plus]])
}

fn z_mat_f64(a: f64) -> Mat<Complex64> {
    let mut m: Mat<Complex64> = Mat::zeros(2, 2);
    m.set(0, 0, Complex64::new(1.0, 0.0));
    m.set(1, 1, Complex64::from_polar(1.0, a));
    m
}

fn x_mat_f64(a: f64) -> Mat<Complex64> {
    let e = Complex64::from_polar(1.0, a);
    let one = Complex64::new(1.0, 0.0);
    let plus = (one + e) * 0.5;
    let minus = (one - e) * 0.5;
    Mat::from_rows(vec![vec![plus, minus], vec![minus, plus]])
}

fn as_rational_triple(triple: &[Angle; 3]) -> Option<[RationalAngle; 3]> {
    match (triple[0], triple[1], triple[2]) {
        (Angle::Rational(a), Angle::Rational(b), Angle::Rational(c)) => Some([a, b, c]),
        _ => None,
    }
}

/// Product of the three one-wire spider matrices in the stated alternation,
/// topmost first in the triple and applied last. All-rational triples are
/// evaluated exactly; anything else falls back to floats.
pub fn euler_compose(triple: &[Angle; 3], order: SpiderOrder) -> Matrix {
    if let Some(rat) = as_rational_triple(triple) {
        let mats: Vec<Mat<Cyclotomic>> = rat
            .iter()
            .enumerate()
            .map(|(i, a)| match (order, i % 2) {
                (SpiderOrder::Zxz, 0) | (SpiderOrder::Xzx, 1) => z_mat_exact(a),
                _ => x_mat_exact(a),
            })
            .collect();
        Matrix::Exact(mats[0].mul_mat(&mats[1]).mul_mat(&mats[2]))
    } else {
        let mats: Vec<Mat<Complex64>> = triple
            .iter()
            .enumerate()
            .map(|(i, a)| match (order, i % 2) {
                (SpiderOrder::Zxz, 0) | (SpiderOrder::Xzx, 1) => z_mat_f64(a.to_f64()),
                _ => x_mat_f64(a.to_f64()),
            })
            .collect();
        Matrix::Float(mats[0].mul_mat(&mats[1]).mul_mat(&mats[2]))
    }
}

/// Composes both sides of `eq`, respecting its color orientation.
pub fn compose_sides(eq: &EulerEquality) -> (Matrix, Matrix) {
    let (lhs_order, rhs_order) = if eq.color_swapped {
        (SpiderOrder::Xzx, SpiderOrder::Zxz)
    } else {
        (SpiderOrder::Zxz, SpiderOrder::Xzx)
    };
    (
        euler_compose(&eq.lhs, lhs_order),
        euler_compose(&eq.rhs, rhs_order),
    )
}

/// Tests whether the two sides of `eq` agree up to a nonzero scalar; exact
/// when both sides are rational, float at `tol` otherwise.
pub fn equality_holds(eq: &EulerEquality, tol: f64) -> Option<Scalar> {
    let (a, b) = compose_sides(eq);
    match (&a, &b) {
        (Matrix::Exact(_), Matrix::Exact(_)) => equal_up_to_scalar(&a, &b, tol),
        _ => {
            let af = Matrix::Float(a.to_float());
            let bf = Matrix::Float(b.to_float());
            equal_up_to_scalar(&af, &bf, tol)
        }
    }
}

const TOL_ANGLE: f64 = 1e-9;

fn angle_close(a: f64, b: f64, tol: f64) -> bool {
    let two_pi = 2.0 * std::f64::consts::PI;
    let d = (a - b).rem_euclid(two_pi);
    d < tol || two_pi - d < tol
}

fn angles_eq(a: &Angle, b: &Angle, tol: f64) -> bool {
    match (a, b) {
        (Angle::Rational(x), Angle::Rational(y)) => x == y,
        _ => angle_close(a.to_f64(), b.to_f64(), tol),
    }
}

fn angle_is_zero(a: &Angle, tol: f64) -> bool {
    match a {
        Angle::Rational(r) => r.is_zero(),
        Angle::Real(x) => angle_close(*x, 0.0, tol),
    }
}

fn angle_is_pi(a: &Angle, tol: f64) -> bool {
    match a {
        Angle::Rational(r) => r.is_pi(),
        Angle::Real(x) => angle_close(*x, std::f64::consts::PI, tol),
    }
}

fn pi_mult(k: i64) -> Angle {
    if k % 2 == 0 {
        Angle::ZERO
    } else {
        Angle::Rational(RationalAngle::PI)
    }
}

fn half_pi() -> Angle {
    Angle::Rational(RationalAngle::of(1, 2))
}

/// Negates when `k` is odd: the `(-1)^k alpha` pattern.
fn signed(k: i64, a: &Angle) -> Angle {
    if k % 2 == 0 {
        *a
    } else {
        a.neg()
    }
}

/// Number of free angles each family carries.
pub fn family_free_angle_names(family: u8) -> &'static [&'static str] {
    match family {
        1 | 3 => &["alpha2", "alpha3"],
        2 => &["alpha2", "beta1"],
        4..=7 => &["alpha3"],
        _ => &[],
    }
}

/// Generates the two angle triples of the given family at parameters `n`, `m`
/// and the family's free angles. The first triple follows the family's
/// displayed chain, the second its opposite-alternation side.
pub fn family_triples(
    family: u8,
    n: i64,
    m: i64,
    free: &[Angle],
) -> Result<([Angle; 3], [Angle; 3]), ZxError> {
    let expected = family_free_angle_names(family).len();
    if expected == 0 {
        return Err(ZxError::Invalid(format!("unknown family {family}")));
    }
    if free.len() != expected {
        return Err(ZxError::Invalid(format!(
            "family {family} takes {expected} free angles, got {}",
            free.len()
        )));
    }
    let npi = pi_mult(n);
    let mpi = pi_mult(m);
    let half = half_pi();
    let t = match family {
        1 => {
            let (a2, a3) = (free[0], free[1]);
            (
                [npi, signed(n, &a2), a3.add(&npi)],
                [a2.add(&mpi), signed(m, &a3), mpi],
            )
        }
        2 => {
            let (a2, b1) = (free[0], free[1]);
            (
                [pi_mult(n + m), signed(n, &a2), npi],
                [signed(m, &b1), mpi, a2.sub(&b1)],
            )
        }
        3 => {
            let (a2, a3) = (free[0], free[1]);
            (
                [mpi.sub(&a2), npi, signed(n, &a2)],
                [signed(m, &a3), mpi, npi.sub(&a3)],
            )
        }
        4 => {
            let a3 = free[0];
            (
                [npi.add(&half), npi.add(&half), npi.add(&a3)],
                [mpi.add(&a3), mpi.add(&half), mpi.add(&half)],
            )
        }
        5 => {
            let a3 = free[0];
            (
                [npi.sub(&half), npi.add(&half), npi.add(&a3)],
                [mpi.sub(&a3), mpi.sub(&half), mpi.add(&half)],
            )
        }
        6 => {
            let a3 = free[0];
            (
                [npi.add(&half), npi.add(&a3), mpi.sub(&half)],
                [npi.sub(&half), mpi.add(&a3), mpi.add(&half)],
            )
        }
        7 => {
            let a3 = free[0];
            (
                [npi.add(&half), npi.add(&a3), mpi.sub(&half)],
                [npi.add(&half), mpi.sub(&a3), mpi.sub(&half)],
            )
        }
        _ => unreachable!(),
    };
    Ok(t)
}

/// Recovers candidate free angles for `family` from an instance, assuming the
/// given `n`, `m`. The candidates are validated by regeneration, so a wrong
/// guess is harmless.
fn family_free_candidates(
    family: u8,
    n: i64,
    m: i64,
    chain: &[Angle; 3],
    other: &[Angle; 3],
) -> Vec<Angle> {
    let npi = pi_mult(n);
    match family {
        1 => vec![signed(n, &chain[1]), chain[2].sub(&npi)],
        2 => vec![signed(n, &chain[1]), signed(m, &other[0])],
        3 => vec![signed(n, &chain[2]), signed(m, &other[0])],
        4 | 5 => vec![chain[2].sub(&npi)],
        6 | 7 => vec![chain[1].sub(&npi)],
        _ => vec![],
    }
}

/// Builds a family instance as an [`EulerEquality`]. With
/// `color_swapped = true` the same angle patterns are used but both chains
/// swap alternation (Z and X exchange roles).
pub fn family_instance(
    family: u8,
    color_swapped: bool,
    n: i64,
    m: i64,
    free: &[Angle],
) -> Result<EulerEquality, ZxError> {
    let (lhs, rhs) = family_triples(family, n, m, free)?;
    Ok(EulerEquality {
        lhs,
        rhs,
        color_swapped,
    })
}

/// Matches `eq` against the seven families and their color-swapped variants.
///
/// The search is deterministic: family 1 through 7, the plain variant before
/// the color-swapped one, then `(n, m)` in lexicographic order over `{0,1}^2`
/// (larger parameter values repeat these cases modulo `2*pi`). Matching is
/// exact on rational angles and tolerance-based (`tol`) on real ones. When no
/// family matches, the sides are composed to distinguish a non-equality from
/// a genuine gap in the family table.
pub fn classify_euler(eq: &EulerEquality, tol: f64) -> Classification {
    // Which triple composes as Z X Z and which as X Z X.
    let (zxz, xzx) = if eq.color_swapped {
        (&eq.rhs, &eq.lhs)
    } else {
        (&eq.lhs, &eq.rhs)
    };
    for family in 1..=7u8 {
        for swapped in [false, true] {
            // In the plain variant the family's displayed chain alternates
            // Z X Z; in the color-swapped variant it alternates X Z X.
            let (chain, other) = if swapped { (xzx, zxz) } else { (zxz, xzx) };
            for n in 0..2i64 {
                for m in 0..2i64 {
                    let free = family_free_candidates(family, n, m, chain, other);
                    let Ok((gen_chain, gen_other)) = family_triples(family, n, m, &free) else {
                        continue;
                    };
                    let ok = gen_chain
                        .iter()
                        .zip(chain.iter())
                        .chain(gen_other.iter().zip(other.iter()))
                        .all(|(a, b)| angles_eq(a, b, tol));
                    if ok {
                        let names = family_free_angle_names(family);
                        let free_angles = names
                            .iter()
                            .map(|s| s.to_string())
                            .zip(free.iter().copied())
                            .collect();
                        return Classification::Matched(FamilyMatch {
                            family,
                            color_swapped: swapped,
                            n: n as u8,
                            m: m as u8,
                            free_angles,
                        });
                    }
                }
            }
        }
    }
    if equality_holds(eq, tol).is_some() {
        Classification::Unclassified
    } else {
        Classification::NotAnEquality
    }
}

/// Solves `Z(a1) X(a2) = X(b1) Z(b2)` up to scalar for `(b1, b2)`.
///
/// A solution exists only when one of the two phases is a multiple of pi:
/// `a2` in {0, pi} forces `b1 = a2` and `b2 = +/- a1`; symmetrically for
/// `a1`. The candidate is always verified by matrix comparison before being
/// returned, so the case analysis cannot silently drift from the semantics.
pub fn two_spider_solve(a1: &Angle, a2: &Angle) -> Option<(Angle, Angle)> {
    let tol = TOL_ANGLE;
    let (b1, b2) = if angle_is_zero(a2, tol) {
        (Angle::ZERO, *a1)
    } else if angle_is_pi(a2, tol) {
        (pi_mult(1), a1.neg())
    } else if angle_is_zero(a1, tol) {
        (*a2, Angle::ZERO)
    } else if angle_is_pi(a1, tol) {
        (a2.neg(), pi_mult(1))
    } else {
        return None;
    };
    // Mandatory post-check: Z(a1) X(a2) ~ X(b1) Z(b2) up to scalar.
    let lhs = two_chain(a1, a2, true);
    let rhs = two_chain(&b1, &b2, false);
    let equal = match (&lhs, &rhs) {
        (Matrix::Exact(_), Matrix::Exact(_)) => {
            equal_up_to_scalar(&lhs, &rhs, tol).is_some()
        }
        _ => {
            let lf = Matrix::Float(lhs.to_float());
            let rf = Matrix::Float(rhs.to_float());
            equal_up_to_scalar(&lf, &rf, tol).is_some()
        }
    };
    if equal {
        Some((b1, b2))
    } else {
        None
    }
}

fn two_chain(first: &Angle, second: &Angle, z_first: bool) -> Matrix {
    match (first, second) {
        (Angle::Rational(a), Angle::Rational(b)) => {
            let (ma, mb) = if z_first {
                (z_mat_exact(a), x_mat_exact(b))
            } else {
                (x_mat_exact(a), z_mat_exact(b))
            };
            Matrix::Exact(ma.mul_mat(&mb))
        }
        _ => {
            let (ma, mb) = if z_first {
                (z_mat_f64(first.to_f64()), x_mat_f64(second.to_f64()))
            } else {
                (x_mat_f64(first.to_f64()), z_mat_f64(second.to_f64()))
            };
            Matrix::Float(ma.mul_mat(&mb))
        }
    }
}

type CanonicalKey = Vec<Vec<(u64, BigRational)>>;

/// Canonical up-to-scalar key of an exact 2x2 matrix: all entries are lifted
/// to the common order `n`, divided by the first nonzero entry in row-major
/// order, and rendered in canonical term form.
fn canonical_key(
    m: &Mat<Cyclotomic>,
    n: u64,
    inverse_cache: &mut BTreeMap<CanonicalKey, Cyclotomic>,
) -> Result<CanonicalKey, ZxError> {
    let entries: Vec<Cyclotomic> = (0..2)
        .flat_map(|r| (0..2).map(move |c| (r, c)))
        .map(|(r, c)| m.get(r, c).lift_to(n))
        .collect();
    let first = entries
        .iter()
        .find(|e| !e.is_zero())
        .expect("spider chain products are invertible, the zero matrix cannot arise");
    let first_key: CanonicalKey = vec![first.canonical_terms()];
    let inv = if let Some(hit) = inverse_cache.get(&first_key) {
        hit.clone()
    } else {
        let inv = first.inverse()?;
        inverse_cache.insert(first_key, inv.clone());
        inv
    };
    Ok(entries
        .iter()
        .map(|e| e.mul_ref(&inv).lift_to(n).canonical_terms())
        .collect())
}

/// Exhaustively enumerates equal pairs of `Z X Z` and `X Z X` chains over the
/// angle grid `{k*pi/q : 0 <= k < 2q}` with `q = max_denominator`, bucketing
/// both sides by exact canonical form up to scalar and emitting every
/// cross-bucket match together with its classification. Output is sorted by
/// the six angles. The denominator is capped at 12.
pub fn enumerate_euler(
    max_denominator: i64,
) -> Result<Vec<(EulerEquality, Classification)>, ZxError> {
    if !(1..=12).contains(&max_denominator) {
        return Err(ZxError::Invalid(format!(
            "max denominator must lie in 1..=12, got {max_denominator}"
        )));
    }
    let q = max_denominator;
    let grid: Vec<RationalAngle> = (0..2 * q).map(|k| RationalAngle::of(k, q)).collect();
    let order = crate::cyclotomic::working_order([q])?;
    let mut cache: BTreeMap<CanonicalKey, Cyclotomic> = BTreeMap::new();

    let mut bucket =
        |spider_order: SpiderOrder| -> Result<BTreeMap<CanonicalKey, Vec<[RationalAngle; 3]>>, ZxError> {
            let mut buckets: BTreeMap<CanonicalKey, Vec<[RationalAngle; 3]>> = BTreeMap::new();
            for &a in &grid {
                for &b in &grid {
                    for &c in &grid {
                        let triple = [Angle::Rational(a), Angle::Rational(b), Angle::Rational(c)];
                        let m = match euler_compose(&triple, spider_order) {
                            Matrix::Exact(m) => m,
                            Matrix::Float(_) => unreachable!("rational grid"),
                        };
                        let key = canonical_key(&m, order, &mut cache)?;
                        buckets.entry(key).or_default().push([a, b, c]);
                    }
                }
            }
            Ok(buckets)
        };

    let zxz_buckets = bucket(SpiderOrder::Zxz)?;
    let xzx_buckets = bucket(SpiderOrder::Xzx)?;

    let mut out: Vec<(EulerEquality, Classification)> = Vec::new();
    for (key, zs) in &zxz_buckets {
        if let Some(xs) = xzx_buckets.get(key) {
            for z in zs {
                for x in xs {
                    let eq = EulerEquality {
                        lhs: [
                            Angle::Rational(z[0]),
                            Angle::Rational(z[1]),
                            Angle::Rational(z[2]),
                        ],
                        rhs: [
                            Angle::Rational(x[0]),
                            Angle::Rational(x[1]),
                            Angle::Rational(x[2]),
                        ],
                        color_swapped: false,
                    };
                    let class = classify_euler(&eq, TOL_ANGLE);
                    out.push((eq, class));
                }
            }
        }
    }
    out.sort_by_key(|(eq, _)| {
        let k = |a: &Angle| match a {
            Angle::Rational(r) => (r.numer(), r.denom()),
            Angle::Real(_) => unreachable!("enumeration is rational"),
        };
        [
            k(&eq.lhs[0]),
            k(&eq.lhs[1]),
            k(&eq.lhs[2]),
            k(&eq.rhs[0]),
            k(&eq.rhs[1]),
            k(&eq.rhs[2]),
        ]
    });
    Ok(out)
}

/// Verdict of [`radin_sadun_check`] on one alternating word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadinSadunVerdict {
    /// The product is not a scalar multiple of the identity.
    NotIdentity,
    /// Scalar identity, and some angle is in {0, pi} or some adjacent pair
    /// lies in {pi/2, -pi/2}.
    ConclusionHolds,
    /// Scalar identity with neither disjunct: should never occur.
    Counterexample,
}

impl std::fmt::Display for RadinSadunVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RadinSadunVerdict::NotIdentity => "not-identity",
            RadinSadunVerdict::ConclusionHolds => "conclusion-holds",
            RadinSadunVerdict::Counterexample => "COUNTEREXAMPLE",
        };
        write!(f, "{s}")
    }
}

/// Checks one alternating word `Z(a_1) X(a_2) Z(a_3) ...` (starting with Z)
/// of rational angles. If the exact product is a scalar multiple of the
/// identity, the structural conclusion is tested: some `a_i` in {0, pi}, or
/// some adjacent pair contained in {pi/2, -pi/2}. Irrational angles are
/// rejected; conjugating an X-leading word gives the same verdicts, so the
/// Z-leading convention loses no generality.
pub fn radin_sadun_check(angles: &[Angle]) -> Result<RadinSadunVerdict, ZxError> {
    if angles.is_empty() {
        return Err(ZxError::Invalid("empty angle sequence".into()));
    }
    let rational: Vec<RationalAngle> = angles
        .iter()
        .map(|a| match a {
            Angle::Rational(r) => Ok(*r),
            Angle::Real(_) => Err(ZxError::ExactNeedsRational),
        })
        .collect::<Result<_, _>>()?;
    let mut prod = Mat::<Cyclotomic>::identity(2);
    for (i, a) in rational.iter().enumerate() {
        let m = if i % 2 == 0 {
            z_mat_exact(a)
        } else {
            x_mat_exact(a)
        };
        prod = prod.mul_mat(&m);
    }
    let scalar_identity = prod.get(0, 1).is_zero()
        && prod.get(1, 0).is_zero()
        && prod.get(0, 0).eq_value(prod.get(1, 1));
    if !scalar_identity {
        return Ok(RadinSadunVerdict::NotIdentity);
    }
    Ok(if word_conclusion(&rational) {
        RadinSadunVerdict::ConclusionHolds
    } else {
        RadinSadunVerdict::Counterexample
    })
}

fn word_conclusion(angles: &[RationalAngle]) -> bool {
    let has_pi_multiple = angles.iter().any(|a| a.is_multiple_of_pi());
    let quarter = |a: &RationalAngle| *a == RationalAngle::of(1, 2) || *a == RationalAngle::of(3, 2);
    let has_quarter_pair = angles
        .windows(2)
        .any(|w| quarter(&w[0]) && quarter(&w[1]));
    has_pi_multiple || has_quarter_pair
}

/// Summary of an exhaustive alternating-word sweep.
#[derive(Debug, Clone, Serialize)]
pub struct RadinSadunReport {
    pub max_length: usize,
    pub max_denominator: i64,
    pub distinct_angles: usize,
    pub sequences: u64,
    pub scalar_identities: u64,
    pub conclusion_holds: u64,
    pub counterexamples: u64,
}

/// Enumerates every alternating word of length 1..=`max_length` over all
/// rational angles with denominator at most `max_denominator`, counts the
/// scalar-identity instances, and tallies the verdicts. A float prefilter
/// skips the exact check for words that are visibly far from the identity;
/// near-identity words are always confirmed exactly. Caps: length 5,
/// denominator 8.
pub fn radin_sadun_sweep(
    max_length: usize,
    max_denominator: i64,
) -> Result<RadinSadunReport, ZxError> {
    if max_length == 0 || max_length > 5 {
        return Err(ZxError::Invalid(format!(
            "max length must lie in 1..=5, got {max_length}"
        )));
    }
    if !(1..=8).contains(&max_denominator) {
        return Err(ZxError::Invalid(format!(
            "max denominator must lie in 1..=8, got {max_denominator}"
        )));
    }
    let mut angles: Vec<RationalAngle> = Vec::new();
    for den in 1..=max_denominator {
        for num in 0..2 * den {
            if gcd(num, den) == 1 {
                angles.push(RationalAngle::of(num, den));
            }
        }
    }
    let z_floats: Vec<[Complex64; 4]> = angles.iter().map(|a| flat2(&z_mat_f64(a.to_f64()))).collect();
    let x_floats: Vec<[Complex64; 4]> = angles.iter().map(|a| flat2(&x_mat_f64(a.to_f64()))).collect();

    let mut report = RadinSadunReport {
        max_length,
        max_denominator,
        distinct_angles: angles.len(),
        sequences: 0,
        scalar_identities: 0,
        conclusion_holds: 0,
        counterexamples: 0,
    };
    let ident = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
    ];
    let mut prefix: Vec<usize> = Vec::new();
    sweep_rec(
        &mut prefix,
        &ident,
        max_length,
        &angles,
        &z_floats,
        &x_floats,
        &mut report,
    )?;
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn sweep_rec(
    prefix: &mut Vec<usize>,
    prod: &[Complex64; 4],
    max_length: usize,
    angles: &[RationalAngle],
    z_floats: &[[Complex64; 4]],
    x_floats: &[[Complex64; 4]],
    report: &mut RadinSadunReport,
) -> Result<(), ZxError> {
    if prefix.len() == max_length {
        return Ok(());
    }
    let next_mats = if prefix.len() % 2 == 0 {
        z_floats
    } else {
        x_floats
    };
    for (idx, m) in next_mats.iter().enumerate() {
        let next = mul2(prod, m);
        prefix.push(idx);
        report.sequences += 1;
        // Prefilter: only words numerically near a scalar identity go to the
        // exact check. Float error over at most 5 products is far below the
        // 1e-6 margin.
        let scale = next.iter().map(|c| c.norm()).fold(0.0f64, f64::max) + 1.0;
        if next[1].norm() < 1e-6 * scale
            && next[2].norm() < 1e-6 * scale
            && (next[0] - next[3]).norm() < 1e-6 * scale
        {
            let word: Vec<Angle> = prefix.iter().map(|&i| Angle::Rational(angles[i])).collect();
            match radin_sadun_check(&word)? {
                RadinSadunVerdict::NotIdentity => {}
                RadinSadunVerdict::ConclusionHolds => {
                    report.scalar_identities += 1;
                    report.conclusion_holds += 1;
                }
                RadinSadunVerdict::Counterexample => {
                    report.scalar_identities += 1;
                    report.counterexamples += 1;
                }
            }
        }
        sweep_rec(prefix, &next, max_length, angles, z_floats, x_floats, report)?;
        prefix.pop();
    }
    Ok(())
}

fn flat2(m: &Mat<Complex64>) -> [Complex64; 4] {
    [*m.get(0, 0), *m.get(0, 1), *m.get(1, 0), *m.get(1, 1)]
}

fn mul2(a: &[Complex64; 4], b: &[Complex64; 4]) -> [Complex64; 4] {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}
