//! Single-wire spider-chain analysis.
//!
//! For an odd prime `p` and angles `alpha`, `beta`, the chain semantics are
//! governed by the two products
//!
//! ```text
//! A = prod_{k<p} (e^{i(alpha + k beta)} + 1)
//! B = prod_{k<p} (e^{i(alpha + k beta)} - 1)
//! ```
//!
//! from which the two-component vectors `D = (P, Q)`, `D1 = (1, P)` and
//! `D2 = (1, Q)` are assembled with `u = e^{i p alpha}`:
//!
//! ```text
//! P =  ((1+u) A + (1-u) B) / 2
//! Q = -((1-u) A + (1+u) B) / 2
//! ```
//!
//! Viewing `X = e^{i alpha}` as an indeterminate turns `P` and `Q` into
//! polynomials with root-of-unity coefficients; [`q_coefficients`] expands the
//! second one. The degree-one coefficient is recovered by averaging the
//! polynomial over a power-of-two root-of-unity grid ([`extract_a1`]), and
//! [`w_matrix`] builds the matrix family whose second row realizes that
//! averaging weight pattern. [`verify_sup_to_cyc`] chains these facts into a
//! five-step report: at the critical angle `beta = 2 pi / p` the chain
//! collapses, every coefficient of the expansion vanishes, and the extracted
//! degree-one value is the vanishing order-`p` root sum `1 + z + ... + z^{p-1}`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::angle::{Angle, RationalAngle};
use crate::cyclotomic::{check_order, Cyclotomic};
use crate::diagram::{AngleExpr, Diagram};
use crate::error::ZxError;
use crate::matrix::Mat;

/// Primes accepted by [`verify_sup_to_cyc`].
pub const VERIFIED_PRIMES: [u64; 5] = [3, 5, 7, 11, 13];

const ODD_PRIMES_TO_23: [u64; 8] = [3, 5, 7, 11, 13, 17, 19, 23];

fn ensure_odd_prime(p: u64) -> Result<(), ZxError> {
    if ODD_PRIMES_TO_23.contains(&p) {
        Ok(())
    } else {
        Err(ZxError::Invalid(format!(
            "expected an odd prime at most 23, got {p}"
        )))
    }
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact value of the pair `(P, Q)` at rational angles.
pub fn d_semantics(
    p: u64,
    alpha: &RationalAngle,
    beta: &RationalAngle,
) -> Result<[Cyclotomic; 2], ZxError> {
    ensure_odd_prime(p)?;
    let one = Cyclotomic::one();
    let u = Cyclotomic::root_of_unity(&alpha.scale(p as i64));
    let mut a = Cyclotomic::one();
    let mut b = Cyclotomic::one();
    for k in 0..p {
        let t = Cyclotomic::root_of_unity(&alpha.add(&beta.scale(k as i64)));
        a = a.mul_ref(&t.add_ref(&one));
        b = b.mul_ref(&t.sub_ref(&one));
    }
    let half = ratio(1, 2);
    let one_plus_u = one.add_ref(&u);
    let one_minus_u = one.sub_ref(&u);
    let p_val = one_plus_u
        .mul_ref(&a)
        .add_ref(&one_minus_u.mul_ref(&b))
        .scale_ratio(&half);
    let q_val = one_minus_u
        .mul_ref(&a)
        .add_ref(&one_plus_u.mul_ref(&b))
        .scale_ratio(&half)
        .neg_ref();
    Ok([p_val, q_val])
}

/// Float value of the pair `(P, Q)`; accepts arbitrary real angles.
pub fn d_semantics_f64(p: u64, alpha: f64, beta: f64) -> Result<[Complex64; 2], ZxError> {
    ensure_odd_prime(p)?;
    let u = Complex64::from_polar(1.0, p as f64 * alpha);
    let one = Complex64::new(1.0, 0.0);
    let mut a = one;
    let mut b = one;
    for k in 0..p {
        let t = Complex64::from_polar(1.0, alpha + k as f64 * beta);
        a *= t + one;
        b *= t - one;
    }
    let p_val = ((one + u) * a + (one - u) * b) * 0.5;
    let q_val = -((one - u) * a + (one + u) * b) * 0.5;
    Ok([p_val, q_val])
}

/// Exact value of the pair `(1, P)`.
pub fn d1_semantics(
    p: u64,
    alpha: &RationalAngle,
    beta: &RationalAngle,
) -> Result<[Cyclotomic; 2], ZxError> {
    let [p_val, _] = d_semantics(p, alpha, beta)?;
    Ok([Cyclotomic::one(), p_val])
}

/// Exact value of the pair `(1, Q)`.
pub fn d2_semantics(
    p: u64,
    alpha: &RationalAngle,
    beta: &RationalAngle,
) -> Result<[Cyclotomic; 2], ZxError> {
    let [_, q_val] = d_semantics(p, alpha, beta)?;
    Ok([Cyclotomic::one(), q_val])
}

/// Float value of the pair `(1, P)`.
pub fn d1_semantics_f64(p: u64, alpha: f64, beta: f64) -> Result<[Complex64; 2], ZxError> {
    let [p_val, _] = d_semantics_f64(p, alpha, beta)?;
    Ok([Complex64::new(1.0, 0.0), p_val])
}

/// Float value of the pair `(1, Q)`.
pub fn d2_semantics_f64(p: u64, alpha: f64, beta: f64) -> Result<[Complex64; 2], ZxError> {
    let [_, q_val] = d_semantics_f64(p, alpha, beta)?;
    Ok([Complex64::new(1.0, 0.0), q_val])
}

fn poly_mul(a: &[Cyclotomic], b: &[Cyclotomic]) -> Vec<Cyclotomic> {
    let mut out = vec![Cyclotomic::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        for (j, cb) in b.iter().enumerate() {
            out[i + j] = out[i + j].add_ref(&ca.mul_ref(cb));
        }
    }
    out
}

fn poly_add(a: &[Cyclotomic], b: &[Cyclotomic]) -> Vec<Cyclotomic> {
    let n = a.len().max(b.len());
    let zero = Cyclotomic::zero();
    (0..n)
        .map(|i| {
            a.get(i)
                .unwrap_or(&zero)
                .add_ref(b.get(i).unwrap_or(&zero))
        })
        .collect()
}

fn poly_shift(a: &[Cyclotomic], k: usize) -> Vec<Cyclotomic> {
    let mut out = vec![Cyclotomic::zero(); k];
    out.extend_from_slice(a);
    out
}

fn poly_trim(mut v: Vec<Cyclotomic>) -> Vec<Cyclotomic> {
    while v.len() > 1 && v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

/// Expands both `P` and `Q` as polynomials in `X = e^{i alpha}` with `beta`
/// fixed. Coefficient index is the degree; trailing zeros are trimmed.
pub fn pq_coefficients(
    p: u64,
    beta: &RationalAngle,
) -> Result<(Vec<Cyclotomic>, Vec<Cyclotomic>), ZxError> {
    ensure_odd_prime(p)?;
    let one = Cyclotomic::one();
    // A(X) = prod (w^k X + 1), B(X) = prod (w^k X - 1), w = e^{i beta}.
    let mut a = vec![Cyclotomic::one()];
    let mut b = vec![Cyclotomic::one()];
    for k in 0..p {
        let w_k = Cyclotomic::root_of_unity(&beta.scale(k as i64));
        a = poly_mul(&a, &[one.clone(), w_k.clone()]);
        b = poly_mul(&b, &[one.neg_ref(), w_k]);
    }
    let sum = poly_add(&a, &b);
    let diff: Vec<Cyclotomic> = a
        .iter()
        .zip(b.iter())
        .map(|(ca, cb)| ca.sub_ref(cb))
        .collect();
    let half = ratio(1, 2);
    let minus_half = ratio(-1, 2);
    // P = (A + B + X^p (A - B)) / 2, Q = -(A + B - X^p (A - B)) / 2.
    let p_poly = poly_add(&sum, &poly_shift(&diff, p as usize))
        .iter()
        .map(|c| c.scale_ratio(&half))
        .collect::<Vec<_>>();
    let q_poly = poly_add(
        &sum,
        &poly_shift(&diff, p as usize)
            .iter()
            .map(|c| c.neg_ref())
            .collect::<Vec<_>>(),
    )
    .iter()
    .map(|c| c.scale_ratio(&minus_half))
    .collect::<Vec<_>>();
    Ok((poly_trim(p_poly), poly_trim(q_poly)))
}

/// Coefficients of `Q(X)` in `X = e^{i alpha}` with `beta` fixed.
///
/// The degree is at most `2p`, the constant coefficient is always zero, and
/// the degree-one coefficient is `-(1 + w + w^2 + ... + w^{p-1})` for
/// `w = e^{i beta}`. At `beta = 2 pi / p` the whole polynomial vanishes.
pub fn q_coefficients(p: u64, beta: &RationalAngle) -> Result<Vec<Cyclotomic>, ZxError> {
    Ok(pq_coefficients(p, beta)?.1)
}

/// Float variant of [`q_coefficients`] for arbitrary real `beta`.
pub fn q_coefficients_f64(p: u64, beta: f64) -> Result<Vec<Complex64>, ZxError> {
    ensure_odd_prime(p)?;
    let one = Complex64::new(1.0, 0.0);
    let mut a = vec![one];
    let mut b = vec![one];
    for k in 0..p {
        let w_k = Complex64::from_polar(1.0, k as f64 * beta);
        a = poly_mul_f64(&a, &[one, w_k]);
        b = poly_mul_f64(&b, &[-one, w_k]);
    }
    let n = a.len().max(b.len()) + p as usize;
    let mut q = vec![Complex64::new(0.0, 0.0); n];
    for (i, (ca, cb)) in a.iter().zip(b.iter()).enumerate() {
        q[i] -= (ca + cb) * 0.5;
        q[i + p as usize] += (ca - cb) * 0.5;
    }
    Ok(q)
}

fn poly_mul_f64(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        for (j, cb) in b.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    out
}

fn poly_degree_exact(poly: &[Cyclotomic]) -> usize {
    poly.iter()
        .enumerate()
        .rev()
        .find(|(_, c)| !c.is_zero())
        .map(|(i, _)| i)
        .unwrap_or(0)
}

/// Recovers the degree-one coefficient of `poly` by averaging over the
/// `2^n`-th roots of unity:
///
/// ```text
/// a_1 = 2^{-n} sum_{k < 2^n} P(w^k) / w^k,   w = e^{2 i pi / 2^n}
/// ```
///
/// Requires `2^n` to exceed the degree of `poly`; errors otherwise.
pub fn extract_a1(poly: &[Cyclotomic], n: u32) -> Result<Cyclotomic, ZxError> {
    let d = poly_degree_exact(poly);
    let width = 1u64
        .checked_shl(n)
        .filter(|w| *w <= 4096)
        .ok_or_else(|| ZxError::Invalid(format!("extraction level {n} too large")))?;
    if width as usize <= d {
        return Err(ZxError::Invalid(format!(
            "extraction width 2^{n} = {width} does not exceed polynomial degree {d}"
        )));
    }
    check_order(width)?;
    let mut sum = Cyclotomic::zero();
    for k in 0..width {
        let x = Cyclotomic::root_at(width, k);
        // Horner evaluation of poly at x.
        let mut val = Cyclotomic::zero();
        for c in poly.iter().rev() {
            val = val.mul_ref(&x).add_ref(c);
        }
        let x_inv = Cyclotomic::root_at(width, (width - k) % width);
        sum = sum.add_ref(&val.mul_ref(&x_inv));
    }
    Ok(sum.scale_ratio(&BigRational::new(BigInt::one(), BigInt::from(width))))
}

/// Float variant of [`extract_a1`]. The degree is taken from the last
/// coefficient whose magnitude is significant relative to the largest one.
pub fn extract_a1_f64(poly: &[Complex64], n: u32) -> Result<Complex64, ZxError> {
    let max_mag = poly.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    let d = poly
        .iter()
        .enumerate()
        .rev()
        .find(|(_, c)| c.norm() > 1e-9 * max_mag.max(1.0))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let width = 1u64
        .checked_shl(n)
        .filter(|w| *w <= 4096)
        .ok_or_else(|| ZxError::Invalid(format!("extraction level {n} too large")))?;
    if width as usize <= d {
        return Err(ZxError::Invalid(format!(
            "extraction width 2^{n} = {width} does not exceed polynomial degree {d}"
        )));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..width {
        let x = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / width as f64);
        let mut val = Complex64::new(0.0, 0.0);
        for c in poly.iter().rev() {
            val = val * x + c;
        }
        sum += val * x.conj();
    }
    Ok(sum / width as f64)
}

/// The level-`n` averaging matrix: shape `2 x 4^n`, first row `1` at column 0,
/// second row `2^{-n}` at every power-of-two column `2^i` with `i < 2n`.
///
/// Built by the recursive tensor construction `U_{n+1} = U_1 (U_n (x) U_1)`
/// over the unnormalized 0/1 form (combiner `[[1,0,0,0],[0,1,1,0]]`), whose
/// second row marks exactly the one-hot column indices; a single `2^{-n}`
/// rescale of the second row then restores the normalization. Recursing over
/// the normalized matrices instead would weight the two branches unevenly.
/// Levels outside `1..=8` are rejected.
pub fn w_matrix(n: u32) -> Result<Mat<BigRational>, ZxError> {
    ensure_w_level(n)?;
    let u1 = w_level_one_unnormalized();
    let mut u = u1.clone();
    for _ in 1..n {
        u = u1.mul_mat(&u.kron(&u1));
    }
    let weight = BigRational::new(BigInt::one(), BigInt::from(2i64.pow(n)));
    for col in 0..u.cols() {
        let v = u.get(1, col).clone() * weight.clone();
        u.set(1, col, v);
    }
    Ok(u)
}

/// Closed form of [`w_matrix`], written directly from the invariant.
pub fn w_matrix_closed(n: u32) -> Result<Mat<BigRational>, ZxError> {
    ensure_w_level(n)?;
    let cols = 4usize.pow(n);
    let mut out: Mat<BigRational> = Mat::zeros(2, cols);
    out.set(0, 0, BigRational::one());
    let weight = BigRational::new(BigInt::one(), BigInt::from(2i64.pow(n)));
    for i in 0..2 * n {
        out.set(1, 1usize << i, weight.clone());
    }
    Ok(out)
}

fn ensure_w_level(n: u32) -> Result<(), ZxError> {
    if (1..=8).contains(&n) {
        Ok(())
    } else {
        Err(ZxError::Invalid(format!(
            "level must be between 1 and 8, got {n}"
        )))
    }
}

fn w_level_one_unnormalized() -> Mat<BigRational> {
    Mat::from_rows(vec![
        vec![
            BigRational::one(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        ],
        vec![
            BigRational::zero(),
            BigRational::one(),
            BigRational::one(),
            BigRational::zero(),
        ],
    ])
}

/// One named check inside a [`SupToCycReport`].
#[derive(Debug, Clone, Serialize)]
pub struct SupToCycStep {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of the five-step chain run by [`verify_sup_to_cyc`].
#[derive(Debug, Clone, Serialize)]
pub struct SupToCycReport {
    pub p: u64,
    /// Minimal `n` with `2^n > 2p`; the extraction grid has `2^n` points.
    pub extraction_level: u32,
    /// Spacing of the extraction grid, as an angle.
    pub granularity: String,
    pub steps: Vec<SupToCycStep>,
    pub all_passed: bool,
}

/// Runs the five-step semantic chain for `p` in {3, 5, 7, 11, 13}:
///
/// (a) at `beta = 2 pi / p` the pair `(P, Q)` collapses to `(2 e^{i p alpha}, 0)`,
///     on 50 exact rational and 50 float values of `alpha`;
/// (b) the pair `(1, Q)` collapses to `(1, 0)` likewise;
/// (c) every coefficient of `Q(X)` at `beta = 2 pi / p` is exactly zero;
/// (d) with `n` minimal such that `2^n > 2p`, [`extract_a1`] recovers
///     `-(1 + w + ... + w^{p-1})` from the expansion at 20 sampled `beta`;
/// (e) at `beta = 2 pi / p` the extracted value is exactly zero, i.e. the
///     order-`p` root sum `1 + z + ... + z^{p-1}` vanishes.
///
/// Check failures land in the report; only an unsupported `p` is an error.
pub fn verify_sup_to_cyc(p: u64) -> Result<SupToCycReport, ZxError> {
    if !VERIFIED_PRIMES.contains(&p) {
        return Err(ZxError::Invalid(format!(
            "p must be an odd prime in {{3, 5, 7, 11, 13}}, got {p}"
        )));
    }
    let beta_crit = RationalAngle::of(2, p as i64);
    let two = Cyclotomic::from_int(2);
    let one = Cyclotomic::one();
    let float_tol = 1e-9;

    let mut steps = Vec::new();

    // Step (a): collapse of (P, Q) at the critical angle.
    {
        let mut ok = true;
        for j in 0..50i64 {
            let alpha = RationalAngle::of(j, 25);
            let [p_val, q_val] = d_semantics(p, &alpha, &beta_crit)?;
            let expected = Cyclotomic::root_of_unity(&alpha.scale(p as i64)).mul_ref(&two);
            if !p_val.eq_value(&expected) || !q_val.is_zero() {
                ok = false;
                break;
            }
        }
        for j in 0..50 {
            let alpha = 0.0137 + 0.1119 * j as f64;
            let [p_val, q_val] = d_semantics_f64(p, alpha, beta_crit.to_f64())?;
            let expected = Complex64::from_polar(2.0, p as f64 * alpha);
            if (p_val - expected).norm() > float_tol || q_val.norm() > float_tol {
                ok = false;
                break;
            }
        }
        steps.push(SupToCycStep {
            name: "collapse".into(),
            passed: ok,
            detail: "(P, Q) = (2 e^{i p alpha}, 0) at beta = 2*pi/p for 50 exact and 50 float alpha"
                .into(),
        });
    }

    // Step (b): collapse of (1, Q).
    {
        let mut ok = true;
        for j in 0..50i64 {
            let alpha = RationalAngle::of(j, 25);
            let [first, second] = d2_semantics(p, &alpha, &beta_crit)?;
            if !first.eq_value(&one) || !second.is_zero() {
                ok = false;
                break;
            }
        }
        for j in 0..50 {
            let alpha = 0.0241 + 0.1217 * j as f64;
            let [first, second] = d2_semantics_f64(p, alpha, beta_crit.to_f64())?;
            if (first - Complex64::new(1.0, 0.0)).norm() > float_tol
                || second.norm() > float_tol
            {
                ok = false;
                break;
            }
        }
        steps.push(SupToCycStep {
            name: "unit-form collapse".into(),
            passed: ok,
            detail: "(1, Q) = (1, 0) at beta = 2*pi/p for 50 exact and 50 float alpha".into(),
        });
    }

    // Step (c): the whole expansion vanishes at the critical angle.
    {
        let q_poly = q_coefficients(p, &beta_crit)?;
        let ok = q_poly.iter().all(|c| c.is_zero());
        steps.push(SupToCycStep {
            name: "expansion vanishes".into(),
            passed: ok,
            detail: format!(
                "all {} coefficients of Q(X) are exactly zero at beta = 2*pi/p",
                q_poly.len()
            ),
        });
    }

    let n = extraction_level(p);
    let width = 1u64 << n;

    // Step (d): the extraction identity recovers the degree-one coefficient.
    {
        let mut ok = true;
        for j in 1..=20i64 {
            let beta = RationalAngle::of(j, 10);
            let q_poly = q_coefficients(p, &beta)?;
            let got = extract_a1(&q_poly, n)?;
            let mut expected = Cyclotomic::zero();
            for k in 0..p {
                expected = expected.add_ref(&Cyclotomic::root_of_unity(&beta.scale(k as i64)));
            }
            if !got.eq_value(&expected.neg_ref()) {
                ok = false;
                break;
            }
        }
        steps.push(SupToCycStep {
            name: "degree-one extraction".into(),
            passed: ok,
            detail: format!(
                "averaging over {width} grid points recovers -(1 + w + ... + w^{}) for 20 sampled beta",
                p - 1
            ),
        });
    }

    // Step (e): the extracted value at the critical angle is the vanishing
    // order-p root sum.
    {
        let q_poly = q_coefficients(p, &beta_crit)?;
        let got = extract_a1(&q_poly, n)?;
        steps.push(SupToCycStep {
            name: "root sum vanishes".into(),
            passed: got.is_zero(),
            detail: format!("extracted value at beta = 2*pi/p is 1 + z + ... + z^{} = 0", p - 1),
        });
    }

    let all_passed = steps.iter().all(|s| s.passed);
    Ok(SupToCycReport {
        p,
        extraction_level: n,
        granularity: format!("2*pi/{width}"),
        steps,
        all_passed,
    })
}

/// Minimal `n` with `2^n > 2p`.
pub fn extraction_level(p: u64) -> u32 {
    let mut n = 1;
    while 1u64 << n <= 2 * p {
        n += 1;
    }
    n
}

/// Builds the defining spider chain as a diagram with free variables `alpha`
/// and `beta`: `p` one-output X spiders at phases `alpha + k beta` feed a
/// phaseless Z spider, followed by a pi Z spider, a `p alpha` X spider and a
/// second pi Z spider; `p` scalar dumbbells balance the normalization. Its
/// interpretation is exactly the column `(P, Q)`.
pub fn build_d_diagram(p: u64) -> Result<Diagram, ZxError> {
    ensure_odd_prime(p)?;
    let alpha = AngleExpr::variable("alpha");
    let beta = AngleExpr::variable("beta");
    let pi = AngleExpr::constant(Angle::rational(1, 1)?);
    let columns: Vec<Diagram> = (0..p)
        .map(|k| Diagram::x(0, 1, alpha.add(&beta.scale(k as i64))))
        .collect();
    let core = Diagram::seq(vec![
        Diagram::par(columns),
        Diagram::z(p as usize, 1, AngleExpr::zero()),
        Diagram::z(1, 1, pi.clone()),
        Diagram::x(1, 1, alpha.scale(p as i64)),
        Diagram::z(1, 1, pi),
    ]);
    let mut parts = vec![core];
    for _ in 0..p {
        parts.push(dumbbell(AngleExpr::zero()));
    }
    Ok(Diagram::par(parts))
}

/// Scalar dumbbell: a one-output Z spider at `phase` capped by a pi X effect;
/// its interpretation is `sqrt(2) e^{i phase}`.
pub fn dumbbell(phase: AngleExpr) -> Diagram {
    Diagram::seq(vec![
        Diagram::z(0, 1, phase),
        Diagram::x(1, 0, AngleExpr::constant(Angle::rational(1, 1).unwrap())),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::{interpret, Backend, EvalConfig};
    use crate::matrix::Matrix;
    use std::collections::BTreeMap;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn collapse_values_at_critical_angle() {
        // p = 3, beta = 2*pi/3, alpha = pi/2: (2 e^{3 i pi/2}, 0) = (-2i, 0).
        let [p_val, q_val] =
            d_semantics(3, &RationalAngle::of(1, 2), &RationalAngle::of(2, 3)).unwrap();
        let minus_two_i = Cyclotomic::root_at(4, 3).scale_int(2);
        assert!(p_val.eq_value(&minus_two_i));
        assert!(q_val.is_zero());

        // alpha = 0 gives (2, 0).
        let [p0, q0] = d_semantics(3, &RationalAngle::ZERO, &RationalAngle::of(2, 3)).unwrap();
        assert!(p0.eq_value(&Cyclotomic::from_int(2)));
        assert!(q0.is_zero());
    }

    #[test]
    fn no_collapse_away_from_critical_angle() {
        // beta = pi/3 instead of 2*pi/3: the second entry stays generically nonzero.
        let [_, q_val] = d_semantics_f64(3, std::f64::consts::PI / 7.0, std::f64::consts::PI / 3.0)
            .unwrap();
        assert!(q_val.norm() > 0.01);
    }

    #[test]
    fn unit_form_values() {
        for j in 0..20i64 {
            let alpha = RationalAngle::of(j, 11);
            let [first, second] =
                d2_semantics(3, &alpha, &RationalAngle::of(2, 3)).unwrap();
            assert!(first.eq_value(&Cyclotomic::one()));
            assert!(second.is_zero(), "alpha = {alpha}");
        }
        // Q vanishes at alpha = 0 for every beta: the (1-u) weight and the
        // k = 0 factor of B die together.
        let [_, second] = d2_semantics(5, &RationalAngle::ZERO, &RationalAngle::of(1, 7)).unwrap();
        assert!(second.is_zero());
        // First-entry bookkeeping: P(pi, 2*pi/3) = -2.
        let [_, p_val] = d1_semantics(3, &RationalAngle::PI, &RationalAngle::of(2, 3)).unwrap();
        assert!(p_val.eq_value(&Cyclotomic::from_int(-2)));
    }

    #[test]
    fn expansion_matches_direct_formula() {
        for p in [3u64, 5] {
            for (a_num, a_den, b_num, b_den) in [(1, 3, 1, 5), (3, 4, 2, 7), (0, 1, 5, 6)] {
                let alpha = RationalAngle::of(a_num, a_den);
                let beta = RationalAngle::of(b_num, b_den);
                let (p_poly, q_poly) = pq_coefficients(p, &beta).unwrap();
                let x = Cyclotomic::root_of_unity(&alpha);
                let eval = |poly: &[Cyclotomic]| {
                    let mut acc = Cyclotomic::zero();
                    for c in poly.iter().rev() {
                        acc = acc.mul_ref(&x).add_ref(c);
                    }
                    acc
                };
                let [p_direct, q_direct] = d_semantics(p, &alpha, &beta).unwrap();
                assert!(eval(&p_poly).eq_value(&p_direct));
                assert!(eval(&q_poly).eq_value(&q_direct));
            }
        }
    }

    #[test]
    fn expansion_coefficient_facts() {
        let p = 5u64;
        let beta = RationalAngle::of(2, 7);
        let q_poly = q_coefficients(p, &beta).unwrap();
        assert!(q_poly.len() <= 2 * p as usize + 1);
        assert!(q_poly[0].is_zero());
        let mut geom = Cyclotomic::zero();
        for k in 0..p {
            geom = geom.add_ref(&Cyclotomic::root_of_unity(&beta.scale(k as i64)));
        }
        assert!(q_poly[1].eq_value(&geom.neg_ref()));
        // At beta = 2*pi/5 the whole polynomial vanishes.
        let crit = q_coefficients(p, &RationalAngle::of(2, 5)).unwrap();
        assert!(crit.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn extraction_examples() {
        // 3X at n = 2 gives 3.
        let got = extract_a1(
            &[Cyclotomic::zero(), Cyclotomic::from_int(3)],
            2,
        )
        .unwrap();
        assert!(got.eq_value(&Cyclotomic::from_int(3)));
        // 1 + 2X + 5X^2 at n = 2 gives 2.
        let got = extract_a1(
            &[
                Cyclotomic::from_int(1),
                Cyclotomic::from_int(2),
                Cyclotomic::from_int(5),
            ],
            2,
        )
        .unwrap();
        assert!(got.eq_value(&Cyclotomic::from_int(2)));
        // X^4 at n = 2 violates 2^n > degree.
        let quartic = [
            Cyclotomic::zero(),
            Cyclotomic::zero(),
            Cyclotomic::zero(),
            Cyclotomic::zero(),
            Cyclotomic::one(),
        ];
        assert!(extract_a1(&quartic, 2).is_err());
        // Trailing zeros do not count toward the degree.
        let padded = [Cyclotomic::zero(), Cyclotomic::from_int(7), Cyclotomic::zero()];
        assert!(extract_a1(&padded, 1).unwrap().eq_value(&Cyclotomic::from_int(7)));
    }

    #[test]
    fn extraction_float_examples() {
        let got = extract_a1_f64(&[c(0.0, 0.0), c(3.0, 0.0)], 2).unwrap();
        assert!((got - c(3.0, 0.0)).norm() < 1e-12);
        let got = extract_a1_f64(&[c(1.0, 0.0), c(2.0, 0.0), c(5.0, 0.0)], 2).unwrap();
        assert!((got - c(2.0, 0.0)).norm() < 1e-12);
        assert!(extract_a1_f64(&[c(0.0, 0.0); 4], 1).is_ok());
        let quartic = [c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        assert!(extract_a1_f64(&quartic, 2).is_err());
    }

    #[test]
    fn w_matrix_printed_levels() {
        let w1 = w_matrix(1).unwrap();
        let half = ratio(1, 2);
        assert_eq!(*w1.get(0, 0), BigRational::one());
        assert_eq!(*w1.get(1, 1), half);
        assert_eq!(*w1.get(1, 2), half);
        assert_eq!(*w1.get(1, 3), BigRational::zero());
        assert_eq!(*w1.get(0, 3), BigRational::zero());

        let w2 = w_matrix(2).unwrap();
        assert_eq!(w2.cols(), 16);
        let quarter = ratio(1, 4);
        for col in 0..16 {
            let want_top = if col == 0 { BigRational::one() } else { BigRational::zero() };
            assert_eq!(*w2.get(0, col), want_top);
            let want_bottom = if [1, 2, 4, 8].contains(&col) {
                quarter.clone()
            } else {
                BigRational::zero()
            };
            assert_eq!(*w2.get(1, col), want_bottom);
        }
    }

    #[test]
    fn w_matrix_recursion_matches_closed_form() {
        for n in 1..=4u32 {
            let rec = w_matrix(n).unwrap();
            let closed = w_matrix_closed(n).unwrap();
            assert_eq!(rec.rows(), closed.rows());
            assert_eq!(rec.cols(), closed.cols());
            for r in 0..2 {
                for col in 0..rec.cols() {
                    assert_eq!(rec.get(r, col), closed.get(r, col), "n={n} r={r} col={col}");
                }
            }
        }
        assert!(w_matrix(0).is_err());
        assert!(w_matrix(9).is_err());
    }

    #[test]
    fn chain_report_for_small_prime() {
        let report = verify_sup_to_cyc(3).unwrap();
        assert_eq!(report.extraction_level, 3);
        assert_eq!(report.steps.len(), 5);
        assert!(report.all_passed, "{report:?}");
        assert!(verify_sup_to_cyc(4).is_err());
        assert!(verify_sup_to_cyc(17).is_err());
        assert_eq!(extraction_level(11), 5);
    }

    #[test]
    fn diagram_matches_formula() {
        let d = build_d_diagram(3).unwrap();
        let mut bindings = BTreeMap::new();
        bindings.insert("alpha".to_string(), Angle::rational(1, 5).unwrap());
        bindings.insert("beta".to_string(), Angle::rational(1, 3).unwrap());
        let grounded = d.substitute(&bindings).unwrap();
        let cfg = EvalConfig { backend: Backend::Exact, wire_cap: 14 };
        let m = interpret(&grounded, &cfg).unwrap();
        let [p_val, q_val] =
            d_semantics(3, &RationalAngle::of(1, 5), &RationalAngle::of(1, 3)).unwrap();
        match m {
            Matrix::Exact(mat) => {
                assert_eq!(mat.rows(), 2);
                assert_eq!(mat.cols(), 1);
                assert!(mat.get(0, 0).eq_value(&p_val));
                assert!(mat.get(1, 0).eq_value(&q_val));
            }
            Matrix::Float(_) => panic!("expected exact backend"),
        }
    }
}
