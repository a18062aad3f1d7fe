//! Square nonnegative matrices, finite matrix sets and their set-level constants.

use std::cmp::Ordering;

use crate::error::{JsrError, Result};
use crate::scalar::{Entry, Scalar};

/// Dense square matrix with nonnegative entries, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T: Entry = Scalar> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Entry> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(JsrError::DimensionMismatch { expected: 1, found: 0 });
        }
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(JsrError::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            for x in row {
                if x.total_cmp(&T::zero()) == Ordering::Less {
                    return Err(JsrError::NegativeEntry(format!("{x:?}")));
                }
                data.push(x);
            }
        }
        Ok(Matrix { dim, data })
    }

    pub fn zeros(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![T::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = T::one();
        }
        m
    }

    pub fn diagonal(diag: Vec<T>) -> Self {
        let dim = diag.len();
        let mut m = Self::zeros(dim);
        for (i, x) in diag.into_iter().enumerate() {
            m.data[i * dim + i] = x;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.dim + j]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.dim)
    }

    /// Matrix product `self · other`.
    pub fn multiply(&self, other: &Matrix<T>) -> Result<Matrix<T>> {
        if self.dim != other.dim {
            return Err(JsrError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Matrix<T>) -> Matrix<T> {
        let d = self.dim;
        let mut data = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = T::zero();
                for k in 0..d {
                    let a = &self.data[i * d + k];
                    if a.is_zero() {
                        continue;
                    }
                    let b = &other.data[k * d + j];
                    if b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b));
                }
                data.push(acc);
            }
        }
        Matrix { dim: d, data }
    }

    /// Largest entry (the maximum norm on nonnegative matrices).
    pub fn max_norm(&self) -> T {
        self.data.iter().fold(T::zero(), |m, x| {
            if x.total_cmp(&m) == Ordering::Greater {
                x.clone()
            } else {
                m
            }
        })
    }

    /// Largest entry among rows and columns in `indices`.
    pub fn max_on(&self, indices: &[usize]) -> T {
        let mut m = T::zero();
        for &i in indices {
            for &j in indices {
                let x = self.get(i, j);
                if x.total_cmp(&m) == Ordering::Greater {
                    m = x.clone();
                }
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Entry::is_zero)
    }

    /// Entrywise `self ≤ other`.
    pub fn dominated_by(&self, other: &Matrix<T>) -> bool {
        self.data
            .iter()
            .zip(&other.data)
            .all(|(a, b)| a.total_cmp(b) != Ordering::Greater)
    }

    /// Principal submatrix on `indices` (in the given order).
    pub fn restrict(&self, indices: &[usize]) -> Matrix<T> {
        let mut data = Vec::with_capacity(indices.len() * indices.len());
        for &i in indices {
            for &j in indices {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            dim: indices.len(),
            data,
        }
    }

    pub fn map<U: Entry>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Entrywise maximum of two matrices of equal dimension.
    pub fn entrywise_max(&self, other: &Matrix<T>) -> Matrix<T> {
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                if a.total_cmp(b) == Ordering::Less {
                    b.clone()
                } else {
                    a.clone()
                }
            })
            .collect();
        Matrix { dim: self.dim, data }
    }

    /// Lexicographic order on entries; a total order used for deterministic sorting.
    pub fn lex_cmp(&self, other: &Matrix<T>) -> Ordering {
        for (a, b) in self.data.iter().zip(&other.data) {
            match a.total_cmp(b) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl Matrix<Scalar> {
    /// Convenience constructor from `(numerator, denominator)` pairs.
    pub fn from_ratios(rows: &[&[(u64, u64)]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&(p, q)| Scalar::ratio(p, q)).collect())
                .collect(),
        )
    }

    /// Convenience constructor from integer entries.
    pub fn from_ints(rows: &[&[u64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Scalar::from_integer(x)).collect())
                .collect(),
        )
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(|x| x.to_f64())
    }
}

/// A finite, nonempty set Σ of nonnegative matrices of a common dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixSet<T: Entry = Scalar> {
    dim: usize,
    matrices: Vec<Matrix<T>>,
    all_zero: bool,
}

impl<T: Entry> MatrixSet<T> {
    pub fn new(matrices: Vec<Matrix<T>>) -> Result<Self> {
        let first = matrices.first().ok_or(JsrError::EmptySet)?;
        let dim = first.dim();
        for m in &matrices {
            if m.dim() != dim {
                return Err(JsrError::DimensionMismatch {
                    expected: dim,
                    found: m.dim(),
                });
            }
        }
        let all_zero = matrices.iter().all(Matrix::is_zero);
        Ok(MatrixSet {
            dim,
            matrices,
            all_zero,
        })
    }

    pub fn singleton(m: Matrix<T>) -> Self {
        Self::new(vec![m]).expect("one matrix")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn matrices(&self) -> &[Matrix<T>] {
        &self.matrices
    }

    pub fn all_zero(&self) -> bool {
        self.all_zero
    }

    /// Every matrix restricted to the rows and columns in `indices`.
    pub fn restrict(&self, indices: &[usize]) -> MatrixSet<T> {
        MatrixSet::new(self.matrices.iter().map(|m| m.restrict(indices)).collect())
            .expect("restriction of a nonempty set")
    }

    /// The matrix `S` with `S[i][j] = max over Σ of A[i][j]`.
    pub fn entrywise_max(&self) -> Matrix<T> {
        let mut it = self.matrices.iter();
        let first = it.next().expect("nonempty").clone();
        it.fold(first, |acc, m| acc.entrywise_max(m))
    }

    pub fn map<U: Entry>(&self, f: impl Fn(&T) -> U + Copy) -> MatrixSet<U> {
        MatrixSet {
            dim: self.dim,
            matrices: self.matrices.iter().map(|m| m.map(f)).collect(),
            all_zero: self.all_zero,
        }
    }
}

impl MatrixSet<Scalar> {
    pub fn to_f64(&self) -> MatrixSet<f64> {
        self.map(|x| x.to_f64())
    }
}

/// `U`, `V` and `K = (V / (U·D))^D` of a set with at least one positive entry.
#[derive(Clone, Debug, PartialEq)]
pub struct SetConstants<T: Entry = Scalar> {
    /// Largest positive entry.
    pub u: T,
    /// Smallest positive entry.
    pub v: T,
    pub k: T,
}

pub fn set_constants<T: Entry>(s: &MatrixSet<T>) -> Result<SetConstants<T>> {
    if s.all_zero() {
        return Err(JsrError::ConstantsUndefined);
    }
    let mut u: Option<&T> = None;
    let mut v: Option<&T> = None;
    for x in s.matrices().iter().flat_map(|m| m.entries()) {
        if x.is_zero() {
            continue;
        }
        if u.is_none_or(|u| x.total_cmp(u) == Ordering::Greater) {
            u = Some(x);
        }
        if v.is_none_or(|v| x.total_cmp(v) == Ordering::Less) {
            v = Some(x);
        }
    }
    let (u, v) = (u.expect("positive entry").clone(), v.expect("positive entry").clone());
    let d = T::from_usize(s.dim());
    let k = v.div(&u.mul(&d)).pow(s.dim() as u32);
    Ok(SetConstants { u, v, k })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unipotent() -> Matrix {
        Matrix::from_ints(&[&[1, 1], &[0, 1]]).unwrap()
    }

    fn skewed() -> Matrix {
        Matrix::from_ratios(&[&[(1, 1), (1, 10)], &[(10, 1), (1, 1)]]).unwrap()
    }

    #[test]
    fn identity_times_a() {
        let a = unipotent();
        assert_eq!(Matrix::identity(2).multiply(&a).unwrap(), a);
    }

    #[test]
    fn unipotent_square() {
        let a = unipotent();
        let expected = Matrix::from_ints(&[&[1, 2], &[0, 1]]).unwrap();
        assert_eq!(a.multiply(&a).unwrap(), expected);
    }

    #[test]
    fn shift_products() {
        let a = Matrix::from_ints(&[&[0, 1], &[0, 0]]).unwrap();
        let b = Matrix::from_ints(&[&[0, 0], &[1, 0]]).unwrap();
        assert_eq!(a.multiply(&b).unwrap(), Matrix::from_ints(&[&[1, 0], &[0, 0]]).unwrap());
    }

    #[test]
    fn dimension_mismatch() {
        let err = unipotent().multiply(&Matrix::identity(3)).unwrap_err();
        assert_eq!(err, JsrError::DimensionMismatch { expected: 2, found: 3 });
        assert!(MatrixSet::new(vec![unipotent(), Matrix::identity(3)]).is_err());
        assert_eq!(MatrixSet::<Scalar>::new(vec![]).unwrap_err(), JsrError::EmptySet);
        assert!(Matrix::<Scalar>::from_rows(vec![vec![Scalar::one()], vec![]]).is_err());
    }

    #[test]
    fn max_norm_cases() {
        assert_eq!(Matrix::<Scalar>::zeros(2).max_norm(), Scalar::zero());
        assert_eq!(
            Matrix::from_ints(&[&[1, 5], &[0, 1]]).unwrap().max_norm(),
            Scalar::from(5)
        );
        let a = unipotent();
        assert_eq!(a.multiply(&a).unwrap().max_norm(), Scalar::from(2));
    }

    #[test]
    fn constants_of_examples() {
        let c = set_constants(&MatrixSet::singleton(unipotent())).unwrap();
        assert_eq!((c.u, c.v, c.k), (Scalar::one(), Scalar::one(), Scalar::ratio(1, 4)));

        let c = set_constants(&MatrixSet::singleton(skewed())).unwrap();
        assert_eq!(c.u, Scalar::from(10));
        assert_eq!(c.v, Scalar::ratio(1, 10));
        assert_eq!(c.k, Scalar::ratio(1, 40000));

        let c = set_constants(&MatrixSet::singleton(Matrix::<Scalar>::identity(2))).unwrap();
        assert_eq!((c.u, c.v, c.k), (Scalar::one(), Scalar::one(), Scalar::ratio(1, 4)));
    }

    #[test]
    fn constants_undefined_for_zero_set() {
        let s = MatrixSet::singleton(Matrix::<Scalar>::zeros(3));
        assert!(s.all_zero());
        assert_eq!(set_constants(&s).unwrap_err(), JsrError::ConstantsUndefined);
    }

    #[test]
    fn float_backend_agrees_on_constants() {
        let c = set_constants(&MatrixSet::singleton(skewed()).to_f64()).unwrap();
        assert_eq!(c.u, 10.0);
        assert!((c.k - 1.0 / 40000.0).abs() < 1e-18);
    }

    #[test]
    fn restriction_and_entrywise_max() {
        let s = MatrixSet::new(vec![unipotent(), Matrix::from_ints(&[&[1, 0], &[1, 1]]).unwrap()]).unwrap();
        assert_eq!(s.entrywise_max(), Matrix::from_ints(&[&[1, 1], &[1, 1]]).unwrap());
        let r = s.restrict(&[1]);
        assert_eq!(r.dim(), 1);
        assert_eq!(r.matrices()[0].get(0, 0), &Scalar::one());
    }
}
