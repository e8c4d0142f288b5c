//! Dense matrices over either backend, plus equality and
//! equality-up-to-scalar tests.

use std::fmt;
use std::ops::{Add, Mul};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::cyclotomic::Cyclotomic;

/// Row-major dense matrix over any semiring-ish scalar type.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone + Zero + One + Add<Output = T> + Mul<Output = T>> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Mat<T> {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Mat<T> {
        let mut m: Mat<T> = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Mat<T> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    /// Matrix product `self * rhs`.
    pub fn mul_mat(&self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out: Mat<T> = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).clone();
                    out.set(i, j, cur + a.clone() * b.clone());
                }
            }
        }
        out
    }

    /// Kronecker product; `self` indexes the high-order bits.
    pub fn kron(&self, rhs: &Mat<T>) -> Mat<T> {
        let mut out: Mat<T> = Mat::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.get(i1, j1);
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..rhs.rows {
                    for j2 in 0..rhs.cols {
                        let b = rhs.get(i2, j2);
                        if b.is_zero() {
                            continue;
                        }
                        out.set(i1 * rhs.rows + i2, j1 * rhs.cols + j2, a.clone() * b.clone());
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat<T> {
        let mut out: Mat<T> = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn scale(&self, s: &T) -> Mat<T> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v.clone() * s.clone()).collect(),
        }
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

/// A diagram's matrix under one of the two evaluation backends.
#[derive(Debug, Clone)]
pub enum Matrix {
    Exact(Mat<Cyclotomic>),
    Float(Mat<Complex64>),
}

impl Matrix {
    pub fn rows(&self) -> usize {
        match self {
            Matrix::Exact(m) => m.rows(),
            Matrix::Float(m) => m.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            Matrix::Exact(m) => m.cols(),
            Matrix::Float(m) => m.cols(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Matrix::Exact(_))
    }

    pub fn to_float(&self) -> Mat<Complex64> {
        match self {
            Matrix::Exact(m) => m.map(|v| v.to_complex()),
            Matrix::Float(m) => m.clone(),
        }
    }

    /// Human-readable dump: a `#` header line with shape information, then
    /// one line per row with entries separated by ` | `.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        match self {
            Matrix::Exact(m) => {
                let order = m.entries().map(|e| e.order()).max().unwrap_or(1);
                out.push_str(&format!(
                    "# backend=exact order={} rows={} cols={}\n",
                    order,
                    m.rows(),
                    m.cols()
                ));
                for r in 0..m.rows() {
                    let row: Vec<String> =
                        (0..m.cols()).map(|c| m.get(r, c).to_string()).collect();
                    out.push_str(&row.join(" | "));
                    out.push('\n');
                }
            }
            Matrix::Float(m) => {
                out.push_str(&format!(
                    "# backend=float rows={} cols={}\n",
                    m.rows(),
                    m.cols()
                ));
                for r in 0..m.rows() {
                    let row: Vec<String> = (0..m.cols())
                        .map(|c| {
                            let v = m.get(r, c);
                            format!("{}{:+}j", v.re, v.im)
                        })
                        .collect();
                    out.push_str(&row.join(" | "));
                    out.push('\n');
                }
            }
        }
        out
    }
}

/// Entrywise equality. Exact pairs are compared symbolically; any float
/// operand downgrades the comparison to floats within `tol`.
pub fn matrices_equal(a: &Matrix, b: &Matrix, tol: f64) -> bool {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return false;
    }
    match (a, b) {
        (Matrix::Exact(x), Matrix::Exact(y)) => {
            x.entries().zip(y.entries()).all(|(p, q)| p.eq_value(q))
        }
        _ => {
            let x = a.to_float();
            let y = b.to_float();
            let ok = x.entries().zip(y.entries()).all(|(p, q)| (p - q).norm() <= tol);
            ok
        }
    }
}

/// Exact scalar kept as a quotient so callers avoid field inversion.
#[derive(Debug, Clone)]
pub struct ScalarRatio {
    pub num: Cyclotomic,
    pub den: Cyclotomic,
}

impl ScalarRatio {
    pub fn one() -> ScalarRatio {
        ScalarRatio { num: Cyclotomic::one(), den: Cyclotomic::one() }
    }

    pub fn is_one(&self) -> bool {
        self.num.sub_ref(&self.den).is_zero()
    }

    pub fn to_complex(&self) -> Complex64 {
        self.num.to_complex() / self.den.to_complex()
    }

    /// Resolves the quotient to a single field element when the inversion is
    /// within the supported degree bound.
    pub fn resolve(&self) -> Option<Cyclotomic> {
        self.num.div_ref(&self.den).ok()
    }
}

impl fmt::Display for ScalarRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.eq_value(&Cyclotomic::one()) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// The scalar relating two proportional matrices, `lhs = scalar * rhs`.
#[derive(Debug, Clone)]
pub enum Scalar {
    Exact(ScalarRatio),
    Float(Complex64),
}

impl Scalar {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Exact(r) => r.to_complex(),
            Scalar::Float(v) => *v,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Float(v) => write!(f, "{}{:+}j", v.re, v.im),
        }
    }
}

/// Tests `a = lambda * b` for some scalar `lambda != 0` and returns it.
///
/// Two zero matrices are proportional with `lambda = 1`. A zero matrix is
/// never proportional to a nonzero one.
pub fn equal_up_to_scalar(a: &Matrix, b: &Matrix, tol: f64) -> Option<Scalar> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return None;
    }
    match (a, b) {
        (Matrix::Exact(x), Matrix::Exact(y)) => {
            // Anchor at the first entry where either side is nonzero. The
            // proportionality check a_k * b_t = a_t * b_k is division-free,
            // which keeps large-order fields cheap.
            let pairs: Vec<(&Cyclotomic, &Cyclotomic)> = x.entries().zip(y.entries()).collect();
            let anchor = pairs.iter().position(|(p, q)| !p.is_zero() || !q.is_zero());
            let Some(t) = anchor else {
                return Some(Scalar::Exact(ScalarRatio::one()));
            };
            let (at, bt) = pairs[t];
            if at.is_zero() || bt.is_zero() {
                return None;
            }
            for (k, (ak, bk)) in pairs.iter().enumerate() {
                if k == t {
                    continue;
                }
                if !ak.mul_ref(bt).eq_value(&at.mul_ref(bk)) {
                    return None;
                }
            }
            Some(Scalar::Exact(ScalarRatio { num: at.clone(), den: bt.clone() }))
        }
        _ => {
            let x = a.to_float();
            let y = b.to_float();
            let pairs: Vec<(Complex64, Complex64)> =
                x.entries().cloned().zip(y.entries().cloned()).collect();
            let t = pairs
                .iter()
                .enumerate()
                .max_by(|(_, (p, q)), (_, (r, s))| {
                    (p.norm() + q.norm()).total_cmp(&(r.norm() + s.norm()))
                })
                .map(|(i, _)| i)?;
            let (at, bt) = pairs[t];
            if at.norm() <= tol && bt.norm() <= tol {
                return Some(Scalar::Float(Complex64::new(1.0, 0.0)));
            }
            if at.norm() <= tol || bt.norm() <= tol {
                return None;
            }
            let lambda = at / bt;
            let scale = 1.0 + lambda.norm();
            for (ak, bk) in &pairs {
                if (ak - lambda * bk).norm() > tol * scale {
                    return None;
                }
            }
            Some(Scalar::Float(lambda))
        }
    }
}
