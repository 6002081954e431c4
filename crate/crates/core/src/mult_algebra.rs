//! Left and right multiplication maps of (complex) octonions as 8x8
//! matrices, and the associative algebras they generate under composition.
//!
//! Octonions act as column vectors of their coefficients on `e0..e7`; column
//! `j` of `L_a` is the coefficient vector of `a * ej`.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, SMatrix};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::octonion::{Coefficient, ComplexOctonion, Octonion, OctonionOf};

pub type Mat8 = SMatrix<Complex64, 8, 8>;

/// Independence threshold for span computations, relative to the largest
/// singular value.
pub const SPAN_TOL: f64 = 1e-9;

/// Closure bound on word length; the octonion algebras close by length 6.
pub const DEFAULT_PRODUCT_BOUND: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    fn join(self, other: Field) -> Field {
        if self == Field::Real && other == Field::Real {
            Field::Real
        } else {
            Field::Complex
        }
    }
}

/// An endomorphism of the (complex) octonions.
#[derive(Debug, Clone, PartialEq)]
pub struct End8 {
    pub matrix: Mat8,
    pub field: Field,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl End8 {
    pub fn new(matrix: Mat8, field: Field) -> Self {
        End8 { matrix, field }
    }

    /// Builds from a complex matrix, tagging it real when every entry is.
    pub fn from_matrix(matrix: Mat8) -> Self {
        let field = if matrix.iter().all(|c| c.im == 0.0) {
            Field::Real
        } else {
            Field::Complex
        };
        End8 { matrix, field }
    }

    pub fn identity() -> Self {
        End8::new(Mat8::identity(), Field::Real)
    }

    pub fn zero() -> Self {
        End8::new(Mat8::zeros(), Field::Real)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let field = if s.im == 0.0 {
            self.field
        } else {
            Field::Complex
        };
        End8::new(self.matrix * s, field)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        End8::new(self.matrix * Complex64::new(s, 0.0), self.field)
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        End8::new(self.matrix.adjoint(), self.field)
    }

    /// Complex conjugate of every entry.
    pub fn conj(&self) -> Self {
        End8::new(self.matrix.map(|c| c.conj()), self.field)
    }

    pub fn commutator(&self, other: &End8) -> End8 {
        self * other - other * self
    }

    pub fn anticommutator(&self, other: &End8) -> End8 {
        self * other + other * self
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &End8) -> f64 {
        (self.matrix - other.matrix)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, x: &ComplexOctonion) -> ComplexOctonion {
        let v = self.matrix * nalgebra::SVector::<Complex64, 8>::from_column_slice(&x.coeffs);
        let mut coeffs = [Complex64::new(0.0, 0.0); 8];
        coeffs.copy_from_slice(v.as_slice());
        ComplexOctonion::new(coeffs)
    }

    /// Row-major entries.
    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        (0..8)
            .map(|i| (0..8).map(|j| self.matrix[(i, j)]).collect())
            .collect()
    }

    /// Entries flattened column by column.
    fn as_vector(&self) -> Vec<Complex64> {
        self.matrix.as_slice().to_vec()
    }

    fn from_vector(v: &[Complex64], field: Field) -> Self {
        End8::new(Mat8::from_column_slice(v), field)
    }
}

impl<'a> Mul<&'a End8> for &'a End8 {
    type Output = End8;
    fn mul(self, rhs: &End8) -> End8 {
        End8::new(self.matrix * rhs.matrix, self.field.join(rhs.field))
    }
}

impl Mul for End8 {
    type Output = End8;
    fn mul(self, rhs: End8) -> End8 {
        &self * &rhs
    }
}

impl<'a> Add<&'a End8> for &'a End8 {
    type Output = End8;
    fn add(self, rhs: &End8) -> End8 {
        End8::new(self.matrix + rhs.matrix, self.field.join(rhs.field))
    }
}

impl Add for End8 {
    type Output = End8;
    fn add(self, rhs: End8) -> End8 {
        &self + &rhs
    }
}

impl<'a> Sub<&'a End8> for &'a End8 {
    type Output = End8;
    fn sub(self, rhs: &End8) -> End8 {
        End8::new(self.matrix - rhs.matrix, self.field.join(rhs.field))
    }
}

impl Sub for End8 {
    type Output = End8;
    fn sub(self, rhs: End8) -> End8 {
        &self - &rhs
    }
}

impl Neg for End8 {
    type Output = End8;
    fn neg(self) -> End8 {
        End8::new(-self.matrix, self.field)
    }
}

#[derive(Serialize, Deserialize)]
struct End8Json {
    field: Field,
    /// Row-major; real matrices store plain numbers, complex ones `[re, im]`.
    rows: serde_json::Value,
}

impl Serialize for End8 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = match self.field {
            Field::Real => serde_json::to_value(
                self.rows()
                    .iter()
                    .map(|r| r.iter().map(|c| c.re).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            ),
            Field::Complex => serde_json::to_value(
                self.rows()
                    .iter()
                    .map(|r| r.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            ),
        }
        .map_err(serde::ser::Error::custom)?;
        End8Json {
            field: self.field,
            rows,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for End8 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = End8Json::deserialize(d)?;
        let mut m = Mat8::zeros();
        match raw.field {
            Field::Real => {
                let rows: [[f64; 8]; 8] =
                    serde_json::from_value(raw.rows).map_err(D::Error::custom)?;
                for (i, row) in rows.iter().enumerate() {
                    for (j, v) in row.iter().enumerate() {
                        m[(i, j)] = Complex64::new(*v, 0.0);
                    }
                }
            }
            Field::Complex => {
                let rows: [[[f64; 2]; 8]; 8] =
                    serde_json::from_value(raw.rows).map_err(D::Error::custom)?;
                for (i, row) in rows.iter().enumerate() {
                    for (j, [re, im]) in row.iter().enumerate() {
                        m[(i, j)] = Complex64::new(*re, *im);
                    }
                }
            }
        }
        Ok(End8::new(m, raw.field))
    }
}

fn multiplication_matrix<T: Coefficient>(a: &OctonionOf<T>, side: Side) -> End8 {
    let mut m = Mat8::zeros();
    for j in 0..8 {
        let ej = OctonionOf::<T>::basis(j);
        let col = match side {
            Side::Left => a.product(&ej),
            Side::Right => ej.product(a),
        };
        for i in 0..8 {
            m[(i, j)] = col.coeffs[i].to_complex();
        }
    }
    let field = if T::IS_REAL {
        Field::Real
    } else {
        Field::Complex
    };
    End8::new(m, field)
}

/// `L_a : x -> a x`.
pub fn left_matrix<T: Coefficient>(a: &OctonionOf<T>) -> End8 {
    multiplication_matrix(a, Side::Left)
}

/// `R_a : x -> x a`.
pub fn right_matrix<T: Coefficient>(a: &OctonionOf<T>) -> End8 {
    multiplication_matrix(a, Side::Right)
}

/// Multiplication by a basis unit on the given side.
pub fn unit_matrix(index: usize, side: Side) -> End8 {
    multiplication_matrix(&Octonion::basis(index), side)
}

/// Product of per-letter multiplication matrices; the leftmost letter acts last.
pub fn chain(word: &[usize], side: Side) -> Result<End8> {
    if word.is_empty() {
        return Err(Error::Domain("chain word must be non-empty".into()));
    }
    if let Some(&bad) = word.iter().find(|&&w| w > 7) {
        return Err(Error::Domain(format!(
            "basis index {bad} out of range 0..7"
        )));
    }
    Ok(word
        .iter()
        .map(|&w| unit_matrix(w, side))
        .reduce(|acc, m| &acc * &m)
        .expect("non-empty word"))
}

/// The imaginary-unit generators `e1..e7` on one side.
pub fn imaginary_generators(side: Side) -> Vec<End8> {
    (1..8).map(|i| unit_matrix(i, side)).collect()
}

/// Incrementally maintained orthonormal basis of a span of 8x8 matrices.
#[derive(Debug, Clone)]
struct SpanBuilder {
    field: Field,
    ortho: Vec<Vec<Complex64>>,
}

impl SpanBuilder {
    fn new(field: Field) -> Self {
        SpanBuilder {
            field,
            ortho: Vec::new(),
        }
    }

    fn inner(&self, q: &[Complex64], v: &[Complex64]) -> Complex64 {
        let ip: Complex64 = q.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
        match self.field {
            Field::Real => Complex64::new(ip.re, 0.0),
            Field::Complex => ip,
        }
    }

    /// Component of `v` orthogonal to the current span (two Gram-Schmidt passes).
    fn residual(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut r = v.to_vec();
        for _ in 0..2 {
            for q in &self.ortho {
                let c = self.inner(q, &r);
                for (ri, qi) in r.iter_mut().zip(q) {
                    *ri -= c * qi;
                }
            }
        }
        r
    }

    fn relative_residual(&self, v: &[Complex64]) -> f64 {
        let nv = norm(v);
        if nv == 0.0 {
            return 0.0;
        }
        norm(&self.residual(v)) / nv
    }

    fn try_add(&mut self, v: &[Complex64]) -> bool {
        let nv = norm(v);
        if nv == 0.0 {
            return false;
        }
        let r = self.residual(v);
        let nr = norm(&r);
        if nr <= SPAN_TOL * nv {
            return false;
        }
        self.ortho.push(r.into_iter().map(|c| c / nr).collect());
        true
    }
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Numerical rank of a set of matrices over the given field, from the
/// singular values of the stacked coefficient vectors.
pub fn rank(elements: &[End8], field: Field) -> usize {
    if elements.is_empty() {
        return 0;
    }
    let svals: Vec<f64> = match field {
        Field::Complex => {
            let m = DMatrix::from_fn(64, elements.len(), |r, c| elements[c].matrix.as_slice()[r]);
            m.svd(false, false)
                .singular_values
                .iter()
                .copied()
                .collect()
        }
        Field::Real => {
            let m = DMatrix::from_fn(128, elements.len(), |r, c| {
                let z = elements[c].matrix.as_slice()[r % 64];
                if r < 64 {
                    z.re
                } else {
                    z.im
                }
            });
            m.svd(false, false)
                .singular_values
                .iter()
                .copied()
                .collect()
        }
    };
    let max = svals.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    svals.iter().filter(|&&s| s > SPAN_TOL * max).count()
}

/// Basis of the associative algebra generated by a set of matrices.
#[derive(Debug, Clone)]
pub struct AlgebraSpan {
    pub basis: Vec<End8>,
    pub field: Field,
    pub dimension: usize,
    /// Longest word that still contributed a new basis element.
    pub closure_length: usize,
    builder: SpanBuilder,
}

impl AlgebraSpan {
    /// Whether `m` lies in the span, to [`SPAN_TOL`] relative residual.
    pub fn contains(&self, m: &End8) -> bool {
        self.builder.relative_residual(&m.as_vector()) <= SPAN_TOL
    }

    pub fn relative_residual(&self, m: &End8) -> f64 {
        self.builder.relative_residual(&m.as_vector())
    }

    /// Orthogonal projection onto the span.
    pub fn project(&self, m: &End8) -> End8 {
        let v = m.as_vector();
        let r = self.builder.residual(&v);
        let p: Vec<Complex64> = v.iter().zip(&r).map(|(a, b)| a - b).collect();
        End8::from_vector(&p, self.field.join(m.field))
    }
}

/// Breadth-first closure of `generators` under products with generators
/// and linear combinations over `field`.
pub fn span_dimension(generators: &[End8], field: Field) -> Result<AlgebraSpan> {
    span_dimension_bounded(generators, field, DEFAULT_PRODUCT_BOUND)
}

pub fn span_dimension_bounded(
    generators: &[End8],
    field: Field,
    max_length: usize,
) -> Result<AlgebraSpan> {
    if generators.is_empty() {
        return Err(Error::Domain("span needs at least one generator".into()));
    }
    let mut builder = SpanBuilder::new(field);
    let mut basis = Vec::new();
    let mut frontier = Vec::new();
    for g in generators {
        if builder.try_add(&g.as_vector()) {
            basis.push(g.clone());
            frontier.push(g.clone());
        }
    }
    let mut closure_length = 1;
    let mut length = 1;
    while !frontier.is_empty() {
        if length >= max_length {
            return Err(Error::NoFixedPoint {
                bound: max_length,
                dim: basis.len(),
            });
        }
        length += 1;
        let mut next = Vec::new();
        for f in &frontier {
            for g in generators {
                let p = f * g;
                if builder.try_add(&p.as_vector()) {
                    basis.push(p.clone());
                    next.push(p);
                }
            }
        }
        if !next.is_empty() {
            closure_length = length;
        }
        frontier = next;
    }
    let dimension = basis.len();
    let confirmed = rank(&basis, field);
    if confirmed != dimension {
        return Err(Error::Consistency(format!(
            "Gram-Schmidt found {dimension} independent elements but SVD rank is {confirmed}"
        )));
    }
    Ok(AlgebraSpan {
        basis,
        field,
        dimension,
        closure_length,
        builder,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LeftRightReport {
    pub left_dim: usize,
    pub right_dim: usize,
    pub union_rank: usize,
    pub equal: bool,
    /// `R_{e1}` lies in the left multiplication algebra.
    pub right_e1_in_left: bool,
    /// `L_{e1}` lies outside the span of single right multiplications `R_a`.
    pub left_e1_outside_single_right: bool,
}

/// Compares the real spans of the left and right multiplication algebras.
pub fn left_right_equality() -> Result<LeftRightReport> {
    let left = span_dimension(&imaginary_generators(Side::Left), Field::Real)?;
    let right = span_dimension(&imaginary_generators(Side::Right), Field::Real)?;
    let mut union = left.basis.clone();
    union.extend(right.basis.iter().cloned());
    let union_rank = rank(&union, Field::Real);
    let singles: Vec<End8> = (0..8).map(|i| unit_matrix(i, Side::Right)).collect();
    let mut with_l1 = singles.clone();
    with_l1.push(unit_matrix(1, Side::Left));
    let left_e1_outside_single_right =
        rank(&with_l1, Field::Real) == rank(&singles, Field::Real) + 1;
    Ok(LeftRightReport {
        left_dim: left.dimension,
        right_dim: right.dimension,
        union_rank,
        equal: left.dimension == right.dimension && union_rank == left.dimension,
        right_e1_in_left: left.contains(&unit_matrix(1, Side::Right)),
        left_e1_outside_single_right,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct QuadraticResidual {
    /// `<x, y>`
    pub inner: f64,
    /// Max over left and right forms of `|L_x L_conj(y) 1 + L_y L_conj(x) 1 - 2<x,y> 1|`.
    pub residual: f64,
}

/// Residual of `L_x L_conj(y) 1 + L_y L_conj(x) 1 = 2<x,y> 1` and its right analogue.
pub fn quadratic_relation_check(x: &Octonion, y: &Octonion) -> QuadraticResidual {
    let one = ComplexOctonion::one();
    let inner = x.inner(y);
    let rhs = one.scale(Complex64::new(2.0 * inner, 0.0));
    let form = |side: Side| {
        let (mx, my, mxc, myc) = match side {
            Side::Left => (
                left_matrix(x),
                left_matrix(y),
                left_matrix(&x.conj()),
                left_matrix(&y.conj()),
            ),
            Side::Right => (
                right_matrix(x),
                right_matrix(y),
                right_matrix(&x.conj()),
                right_matrix(&y.conj()),
            ),
        };
        let lhs = (&mx * &myc).apply(&one) + (&my * &mxc).apply(&one);
        lhs.max_abs_diff(&rhs)
    };
    QuadraticResidual {
        inner,
        residual: form(Side::Left).max(form(Side::Right)),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub residual: f64,
    pub pass: bool,
}

/// The multiplication-algebra identities as a pass/fail table.
pub fn identity_checks() -> Result<Vec<IdentityCheck>> {
    let mut out = Vec::new();
    let mut push = |name: String, residual: f64, tol: f64| {
        out.push(IdentityCheck {
            name,
            residual,
            pass: residual <= tol,
        })
    };
    let l7 = unit_matrix(7, Side::Left);
    push(
        "L1 L2 L3 L4 L5 L6 = L7".into(),
        chain(&[1, 2, 3, 4, 5, 6], Side::Left)?.max_abs_diff(&l7),
        0.0,
    );
    let id = End8::identity();
    let mut sq = 0.0f64;
    let mut anti = 0.0f64;
    for a in 1..8 {
        sq = sq.max((&chain(&[a, a], Side::Left)? + &id).max_abs());
        for b in (a + 1)..8 {
            anti =
                anti.max((&chain(&[a, b], Side::Left)? + &chain(&[b, a], Side::Left)?).max_abs());
        }
    }
    push("L_a L_a = -1 (a = 1..7)".into(), sq, 0.0);
    push("L_a L_b = -L_b L_a (a != b)".into(), anti, 0.0);
    let mut cl6 = 0.0f64;
    for i in 1..7 {
        for j in 1..7 {
            let li = unit_matrix(i, Side::Left);
            let lj = unit_matrix(j, Side::Left);
            let delta = if i == j { -2.0 } else { 0.0 };
            cl6 = cl6.max(li.anticommutator(&lj).max_abs_diff(&id.scale_real(delta)));
        }
    }
    push("{L_i, L_j} = -2 delta_ij (i, j = 1..6)".into(), cl6, 0.0);
    let mut antisym = 0.0f64;
    for i in 1..8 {
        let l = unit_matrix(i, Side::Left);
        antisym = antisym.max(
            (l.matrix + l.matrix.transpose())
                .iter()
                .map(|c| c.norm())
                .fold(0.0, f64::max),
        );
    }
    push("L_ei antisymmetric".into(), antisym, 0.0);
    let (a, b) = (Octonion::basis(1), Octonion::basis(2) + Octonion::basis(4));
    let witness = (&left_matrix(&a) * &left_matrix(&b)).max_abs_diff(&left_matrix(&a.product(&b)));
    out.push(IdentityCheck {
        name: "L_a L_b != L_ab for a = e1, b = e2 + e4".into(),
        residual: witness,
        pass: witness > 0.5,
    });
    let q = (1..8)
        .flat_map(|i| (0..8).map(move |j| (i, j)))
        .map(|(i, j)| quadratic_relation_check(&Octonion::basis(i), &Octonion::basis(j)).residual)
        .fold(0.0, f64::max);
    out.push(IdentityCheck {
        name: "quadratic relation on basis pairs".into(),
        residual: q,
        pass: q <= 1e-12,
    });
    Ok(out)
}


#[cfg(test)]
mod span_tests {
    use super::*;

    #[test]
    fn left_algebra_is_64_dimensional() {
        let gens = imaginary_generators(Side::Left);
        let real = span_dimension(&gens, Field::Real).unwrap();
        assert_eq!(real.dimension, 64);
        let cgens: Vec<End8> = gens
            .iter()
            .map(|g| End8::new(g.matrix, Field::Complex))
            .collect();
        let complex = span_dimension(&cgens, Field::Complex).unwrap();
        assert_eq!(complex.dimension, 64);
        assert!(real.closure_length <= 6);
    }

    #[test]
    fn left_and_right_algebras_coincide() {
        let r = left_right_equality().unwrap();
        assert_eq!((r.left_dim, r.right_dim, r.union_rank), (64, 64, 64));
        assert!(r.equal && r.right_e1_in_left && r.left_e1_outside_single_right);
    }
}
