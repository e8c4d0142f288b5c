//! Exact arithmetic in cyclotomic fields `Q(zeta_N)`.
//!
//! Elements are stored sparsely in the power basis `zeta_N^0 .. zeta_N^{N-1}`
//! with big-rational coefficients. Arithmetic is lazy: products and sums stay
//! in the power basis, and only equality tests reduce to a canonical form.
//!
//! The canonical form is the remainder modulo the `N`-th cyclotomic
//! polynomial, computed factor-by-factor: an exponent `k` is identified with
//! the tuple of its residues modulo each prime power `q` dividing `N`, and
//! each axis is folded using the relation `Phi_q(zeta_q) = 0`. For `q = 2^e`
//! this is `zeta^(q/2) = -1`; for odd `p`, `q = p^e`, it rewrites
//! `zeta^(phi(q)+r)` as `-(zeta^r + zeta^(p^(e-1)+r) + ...)`. The surviving
//! tuples form the standard tensor basis of `Q(zeta_N)`, so an element is
//! zero exactly when every folded coefficient is zero.
//!
//! `sqrt(2)` is represented exactly as `zeta_8 + zeta_8^-1`, which keeps all
//! Hadamard scalars inside `Q(zeta_N)` whenever `8 | N`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::angle::RationalAngle;
use crate::ZxError;

/// Largest supported root-of-unity order.
pub const MAX_ORDER: u64 = 4096;

/// Largest field degree for which `inverse` will run its dense linear solve.
pub const MAX_INVERSE_DEGREE: usize = 128;

#[derive(Debug, Clone)]
pub struct Cyclotomic {
    order: u64,
    /// exponent -> coefficient; no zero coefficients are stored.
    terms: BTreeMap<u64, BigRational>,
}

fn lcm(a: u64, b: u64) -> u64 {
    a / a.gcd(&b) * b
}

/// Prime-power factorization, ascending.
fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn euler_phi(factors: &[(u64, u32)]) -> u64 {
    factors
        .iter()
        .map(|&(p, e)| (p - 1) * p.pow(e - 1))
        .product::<u64>()
        .max(1)
}

/// Checks that `n` is an admissible order.
pub fn check_order(n: u64) -> Result<u64, ZxError> {
    if n == 0 || n > MAX_ORDER {
        Err(ZxError::OrderTooLarge { requested: n, max: MAX_ORDER })
    } else {
        Ok(n)
    }
}

impl Cyclotomic {
    pub fn zero() -> Cyclotomic {
        Cyclotomic { order: 1, terms: BTreeMap::new() }
    }

    pub fn one() -> Cyclotomic {
        Cyclotomic::from_int(1)
    }

    pub fn from_int(v: i64) -> Cyclotomic {
        Cyclotomic::from_ratio(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_ratio(v: BigRational) -> Cyclotomic {
        let mut terms = BTreeMap::new();
        if !v.is_zero() {
            terms.insert(0, v);
        }
        Cyclotomic { order: 1, terms }
    }

    /// `zeta_order^exp`. The order must have been validated by the caller.
    pub fn root_at(order: u64, exp: u64) -> Cyclotomic {
        debug_assert!(order >= 1 && order <= MAX_ORDER);
        let mut terms = BTreeMap::new();
        terms.insert(exp % order, BigRational::one());
        Cyclotomic { order, terms }
    }

    /// `e^{i*angle}` at the minimal order for the angle.
    pub fn root_of_unity(angle: &RationalAngle) -> Cyclotomic {
        let (n, k) = angle.as_root_of_unity();
        Cyclotomic::root_at(n, k)
    }

    /// `sqrt(2) = zeta_8 + zeta_8^-1`, exactly.
    pub fn sqrt2() -> Cyclotomic {
        let mut terms = BTreeMap::new();
        terms.insert(1, BigRational::one());
        terms.insert(7, BigRational::one());
        Cyclotomic { order: 8, terms }
    }

    /// `1/sqrt(2) = (zeta_8 + zeta_8^-1) / 2`.
    pub fn inv_sqrt2() -> Cyclotomic {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let mut terms = BTreeMap::new();
        terms.insert(1, half.clone());
        terms.insert(7, half);
        Cyclotomic { order: 8, terms }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Re-expresses the element at a multiple of its order.
    ///
    /// Panics if `target` is not a multiple of the current order or exceeds
    /// `MAX_ORDER`; public entry points validate working orders up front.
    pub fn lift_to(&self, target: u64) -> Cyclotomic {
        assert!(
            target % self.order == 0 && target <= MAX_ORDER,
            "invalid lift from order {} to {}",
            self.order,
            target
        );
        if target == self.order {
            return self.clone();
        }
        let f = target / self.order;
        let terms = self.terms.iter().map(|(k, c)| (k * f, c.clone())).collect();
        Cyclotomic { order: target, terms }
    }

    fn common_order(&self, other: &Cyclotomic) -> u64 {
        let l = lcm(self.order, other.order);
        assert!(l <= MAX_ORDER, "operation would lift past order {MAX_ORDER}");
        l
    }

    pub fn is_zero(&self) -> bool {
        if self.terms.is_empty() {
            return true;
        }
        // Single power-basis term with a nonzero coefficient is never zero.
        if self.terms.len() == 1 {
            return false;
        }
        self.fold_canonical().is_empty()
    }

    pub fn eq_value(&self, other: &Cyclotomic) -> bool {
        if self.order == other.order && self.terms == other.terms {
            return true;
        }
        self.sub_ref(other).is_zero()
    }

    /// Complex conjugate: `zeta^k -> zeta^(N-k)`.
    pub fn conj(&self) -> Cyclotomic {
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| ((self.order - k) % self.order, c.clone()))
            .collect();
        Cyclotomic { order: self.order, terms }
    }

    pub fn scale_ratio(&self, r: &BigRational) -> Cyclotomic {
        if r.is_zero() {
            return Cyclotomic::zero();
        }
        let terms = self.terms.iter().map(|(k, c)| (*k, c * r)).collect();
        Cyclotomic { order: self.order, terms }
    }

    pub fn scale_int(&self, v: i64) -> Cyclotomic {
        self.scale_ratio(&BigRational::from_integer(BigInt::from(v)))
    }

    pub fn pow(&self, mut e: u32) -> Cyclotomic {
        let mut base = self.clone();
        let mut acc = Cyclotomic::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    pub fn add_ref(&self, other: &Cyclotomic) -> Cyclotomic {
        let n = self.common_order(other);
        let mut out = self.lift_to(n);
        for (k, c) in other.lift_to(n).terms {
            add_term(&mut out.terms, k, c);
        }
        out
    }

    pub fn sub_ref(&self, other: &Cyclotomic) -> Cyclotomic {
        self.add_ref(&other.neg_ref())
    }

    pub fn neg_ref(&self) -> Cyclotomic {
        let terms = self.terms.iter().map(|(k, c)| (*k, -c)).collect();
        Cyclotomic { order: self.order, terms }
    }

    pub fn mul_ref(&self, other: &Cyclotomic) -> Cyclotomic {
        if self.terms.is_empty() || other.terms.is_empty() {
            return Cyclotomic::zero();
        }
        let n = self.common_order(other);
        let a = self.lift_to(n);
        let b = other.lift_to(n);
        let mut terms: BTreeMap<u64, BigRational> = BTreeMap::new();
        for (ka, ca) in &a.terms {
            for (kb, cb) in &b.terms {
                add_term(&mut terms, (ka + kb) % n, ca * cb);
            }
        }
        Cyclotomic { order: n, terms }
    }

    /// Canonical coordinates on the tensor basis described in the module docs.
    ///
    /// Keys are residue tuples, one residue per prime-power factor of the
    /// order, each below `phi(prime power)`. Empty map means zero.
    fn fold_canonical(&self) -> BTreeMap<Vec<u64>, BigRational> {
        let factors = factor(self.order);
        let mut grid: BTreeMap<Vec<u64>, BigRational> = BTreeMap::new();
        for (k, c) in &self.terms {
            let tuple: Vec<u64> = factors.iter().map(|&(p, e)| k % p.pow(e)).collect();
            add_tuple(&mut grid, tuple, c.clone());
        }
        for (axis, &(p, e)) in factors.iter().enumerate() {
            let q = p.pow(e);
            let phi = (p - 1) * p.pow(e - 1);
            let step = p.pow(e - 1);
            let needs_fold: Vec<(Vec<u64>, BigRational)> = grid
                .iter()
                .filter(|(t, _)| t[axis] >= phi)
                .map(|(t, c)| (t.clone(), c.clone()))
                .collect();
            for (t, c) in needs_fold {
                grid.remove(&t);
                if p == 2 {
                    let mut nt = t.clone();
                    nt[axis] -= phi; // zeta^(q/2) = -1
                    add_tuple(&mut grid, nt, -c);
                } else {
                    let r = t[axis] - phi;
                    debug_assert!(r < step && q >= 1);
                    for i in 0..p - 1 {
                        let mut nt = t.clone();
                        nt[axis] = i * step + r;
                        add_tuple(&mut grid, nt, -c.clone());
                    }
                }
            }
        }
        grid
    }

    /// Canonical form as power-basis terms `(exponent, coefficient)`,
    /// exponents ascending. Stable across representations of equal values
    /// at equal orders; suitable as a bucketing key.
    pub fn canonical_terms(&self) -> Vec<(u64, BigRational)> {
        let factors = factor(self.order);
        let grid = self.fold_canonical();
        let mut out: Vec<(u64, BigRational)> = grid
            .into_iter()
            .map(|(t, c)| (crt_combine(&t, &factors, self.order), c))
            .collect();
        out.sort_by_key(|(k, _)| *k);
        out
    }

    /// Canonical form reduced to the power basis, same order.
    pub fn canonicalize(&self) -> Cyclotomic {
        let terms = self.canonical_terms().into_iter().collect();
        Cyclotomic { order: self.order, terms }
    }

    /// Multiplicative inverse via a dense linear solve over the canonical
    /// basis. Limited to field degrees `<= MAX_INVERSE_DEGREE`.
    pub fn inverse(&self) -> Result<Cyclotomic, ZxError> {
        if self.is_zero() {
            return Err(ZxError::DivisionByZero);
        }
        let factors = factor(self.order);
        let phi = euler_phi(&factors) as usize;
        if phi > MAX_INVERSE_DEGREE {
            return Err(ZxError::InverseDegree { phi, max: MAX_INVERSE_DEGREE });
        }
        // Enumerate the canonical basis tuples in lexicographic order.
        let radices: Vec<u64> = factors.iter().map(|&(p, e)| (p - 1) * p.pow(e - 1)).collect();
        let mut basis: Vec<Vec<u64>> = vec![vec![]];
        for r in &radices {
            let mut next = Vec::with_capacity(basis.len() * *r as usize);
            for t in &basis {
                for j in 0..*r {
                    let mut nt = t.clone();
                    nt.push(j);
                    next.push(nt);
                }
            }
            basis = next;
        }
        debug_assert_eq!(basis.len(), phi);
        let index: BTreeMap<Vec<u64>, usize> =
            basis.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();

        // Column j holds the canonical coordinates of x * basis_j.
        let mut m = vec![vec![BigRational::zero(); phi]; phi];
        for (j, t) in basis.iter().enumerate() {
            let exp = crt_combine(t, &factors, self.order);
            let col = self.mul_ref(&Cyclotomic::root_at(self.order, exp));
            for (tuple, c) in col.fold_canonical() {
                m[index[&tuple]][j] = c;
            }
        }
        let mut rhs = vec![BigRational::zero(); phi];
        rhs[index[&vec![0; factors.len()]]] = BigRational::one();

        let sol = solve_dense(m, rhs).ok_or(ZxError::DivisionByZero)?;
        let mut terms = BTreeMap::new();
        for (j, t) in basis.iter().enumerate() {
            if !sol[j].is_zero() {
                terms.insert(crt_combine(t, &factors, self.order), sol[j].clone());
            }
        }
        Ok(Cyclotomic { order: self.order, terms })
    }

    pub fn div_ref(&self, other: &Cyclotomic) -> Result<Cyclotomic, ZxError> {
        let n = self.common_order(other);
        Ok(self.lift_to(n).mul_ref(&other.lift_to(n).inverse()?))
    }

    /// Numeric embedding `zeta_N -> e^{2*pi*i/N}`.
    pub fn to_complex(&self) -> num_complex::Complex64 {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        let n = self.order as f64;
        for (k, c) in &self.terms {
            let theta = 2.0 * std::f64::consts::PI * (*k as f64) / n;
            let coeff = c.to_f64().expect("coefficient out of f64 range");
            acc += num_complex::Complex64::new(theta.cos(), theta.sin()) * coeff;
        }
        acc
    }

    /// Rational value if the element lies in `Q`, in canonical form.
    pub fn as_rational(&self) -> Option<BigRational> {
        let canon = self.canonical_terms();
        match canon.len() {
            0 => Some(BigRational::zero()),
            1 if canon[0].0 == 0 => Some(canon[0].1.clone()),
            _ => None,
        }
    }
}

fn add_term(map: &mut BTreeMap<u64, BigRational>, k: u64, c: BigRational) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match map.entry(k) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

fn add_tuple(map: &mut BTreeMap<Vec<u64>, BigRational>, t: Vec<u64>, c: BigRational) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match map.entry(t) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Recombines residues modulo pairwise-coprime prime powers into the unique
/// exponent modulo `n`.
fn crt_combine(tuple: &[u64], factors: &[(u64, u32)], n: u64) -> u64 {
    let mut k: u64 = 0;
    for (j, &(p, e)) in factors.iter().enumerate() {
        let q = p.pow(e);
        let m = n / q;
        // inverse of m modulo q
        let inv = mod_inverse(m % q, q);
        let term = ((tuple[j] % q) as u128 * (inv as u128) % q as u128) * m as u128;
        k = ((k as u128 + term) % n as u128) as u64;
    }
    k
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (m as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "values are coprime by construction");
    t.rem_euclid(m as i128) as u64
}

/// Gaussian elimination over the rationals; `None` when singular.
fn solve_dense(mut m: Vec<Vec<BigRational>>, mut rhs: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let p = m[col][col].clone();
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = &m[r][col] / &p;
                for c in col..n {
                    let v = &m[col][c] * &f;
                    m[r][c] -= v;
                }
                let v = &rhs[col] * &f;
                rhs[r] -= v;
            }
        }
    }
    Some((0..n).map(|i| &rhs[i] / &m[i][i]).collect())
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.eq_value(other)
    }
}

impl Zero for Cyclotomic {
    fn zero() -> Self {
        Cyclotomic::zero()
    }
    fn is_zero(&self) -> bool {
        Cyclotomic::is_zero(self)
    }
}

impl One for Cyclotomic {
    fn one() -> Self {
        Cyclotomic::one()
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        self.add_ref(&rhs)
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        self.sub_ref(&rhs)
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        self.mul_ref(&rhs)
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        self.neg_ref()
    }
}

impl fmt::Display for Cyclotomic {
    /// Canonical rendering as a sum of `coeff*z^k` terms, `z = zeta_order`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.canonical_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in terms.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if *k == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "z^{k}")?;
            } else {
                write!(f, "{mag}*z^{k}")?;
            }
        }
        Ok(())
    }
}

/// Working order for a set of rational angles: `lcm(8, 2 * denominators)`.
///
/// Keeping `8 | N` means Hadamard scalars stay representable; the result is
/// validated against `MAX_ORDER`.
pub fn working_order(denominators: impl IntoIterator<Item = i64>) -> Result<u64, ZxError> {
    let mut n: u64 = 8;
    for d in denominators {
        debug_assert!(d > 0);
        n = lcm(n, 2 * d as u64);
        if n > MAX_ORDER {
            return Err(ZxError::OrderTooLarge { requested: n, max: MAX_ORDER });
        }
    }
    Ok(n)
}
