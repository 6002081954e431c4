//! Real and complex octonions over the basis `e0..e7`.
//!
//! The imaginary units multiply according to the Fano plane with oriented
//! lines 123, 145, 176, 246, 257, 347 and 365. Every product `ei * ej` of basis
//! elements is `±ek` (or `±e0`), so the full table is a signed permutation
//! and is stored as such.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{Num, One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// The seven oriented lines of the Fano plane.
pub const FANO_LINES: [[usize; 3]; 7] = [
    [1, 2, 3],
    [1, 4, 5],
    [1, 7, 6],
    [2, 4, 6],
    [2, 5, 7],
    [3, 4, 7],
    [3, 6, 5],
];

/// Fully antisymmetric structure tensor `epsilon_{ijk}` on indices `1..=7`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanoTable {
    epsilon: [[[i8; 8]; 8]; 8],
}

impl FanoTable {
    pub fn new() -> Self {
        let mut epsilon = [[[0i8; 8]; 8]; 8];
        for &[i, j, k] in &FANO_LINES {
            for (a, b, c, s) in [
                (i, j, k, 1),
                (j, k, i, 1),
                (k, i, j, 1),
                (j, i, k, -1),
                (i, k, j, -1),
                (k, j, i, -1),
            ] {
                epsilon[a][b][c] = s;
            }
        }
        FanoTable { epsilon }
    }

    /// `epsilon_{ijk}`; zero whenever an index is 0 or repeated.
    pub fn epsilon(&self, i: usize, j: usize, k: usize) -> i8 {
        self.epsilon[i][j][k]
    }

    /// Product of two basis elements as `(sign, index)` with `ei * ej = sign * e_index`.
    pub fn basis_product(&self, i: usize, j: usize) -> (i8, usize) {
        if i == 0 {
            return (1, j);
        }
        if j == 0 {
            return (1, i);
        }
        if i == j {
            return (-1, 0);
        }
        for k in 1..8 {
            let s = self.epsilon[i][j][k];
            if s != 0 {
                return (s, k);
            }
        }
        unreachable!("every pair of distinct imaginary units lies on a Fano line")
    }
}

impl Default for FanoTable {
    fn default() -> Self {
        Self::new()
    }
}

const fn build_table() -> [[(i8, usize); 8]; 8] {
    let mut table = [[(0i8, 0usize); 8]; 8];
    let mut i = 0;
    while i < 8 {
        let mut j = 0;
        while j < 8 {
            table[i][j] = if i == 0 {
                (1, j)
            } else if j == 0 {
                (1, i)
            } else if i == j {
                (-1, 0)
            } else {
                let mut found = (0i8, 0usize);
                let mut l = 0;
                while l < 7 {
                    let [a, b, c] = FANO_LINES[l];
                    let cyc = [(a, b, c), (b, c, a), (c, a, b)];
                    let mut r = 0;
                    while r < 3 {
                        let (x, y, z) = cyc[r];
                        if x == i && y == j {
                            found = (1, z);
                        } else if x == j && y == i {
                            found = (-1, z);
                        }
                        r += 1;
                    }
                    l += 1;
                }
                found
            };
            j += 1;
        }
        i += 1;
    }
    table
}

/// `MUL_TABLE[i][j] = (sign, k)` with `ei * ej = sign * ek`.
pub const MUL_TABLE: [[(i8, usize); 8]; 8] = build_table();

/// Coefficient field of an octonion: `f64` or `Complex64`.
pub trait Coefficient:
    Copy + Num + Neg<Output = Self> + fmt::Debug + PartialEq + Send + Sync + 'static
{
    const IS_REAL: bool;
    fn from_sign(s: i8) -> Self;
    fn to_complex(self) -> Complex64;
    fn abs2(self) -> f64;
    fn conj_scalar(self) -> Self;
    fn is_finite(self) -> bool;
}

impl Coefficient for f64 {
    const IS_REAL: bool = true;
    fn from_sign(s: i8) -> Self {
        s as f64
    }
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
    fn abs2(self) -> f64 {
        self * self
    }
    fn conj_scalar(self) -> Self {
        self
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl Coefficient for Complex64 {
    const IS_REAL: bool = false;
    fn from_sign(s: i8) -> Self {
        Complex64::new(s as f64, 0.0)
    }
    fn to_complex(self) -> Complex64 {
        self
    }
    fn abs2(self) -> f64 {
        self.norm_sqr()
    }
    fn conj_scalar(self) -> Self {
        self.conj()
    }
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// An octonion with coefficients in `T` over `e0..e7`.
#[derive(Clone, Copy, PartialEq)]
pub struct OctonionOf<T: Coefficient> {
    pub coeffs: [T; 8],
}

pub type Octonion = OctonionOf<f64>;
pub type ComplexOctonion = OctonionOf<Complex64>;

impl<T: Coefficient> OctonionOf<T> {
    pub fn new(coeffs: [T; 8]) -> Self {
        OctonionOf { coeffs }
    }

    /// Like [`OctonionOf::new`] but rejects non-finite coefficients.
    pub fn try_new(coeffs: [T; 8]) -> Result<Self> {
        if coeffs.iter().all(|c| c.is_finite()) {
            Ok(OctonionOf { coeffs })
        } else {
            Err(Error::Domain("octonion coefficients must be finite".into()))
        }
    }

    pub fn zero() -> Self {
        OctonionOf {
            coeffs: [T::zero(); 8],
        }
    }

    pub fn one() -> Self {
        Self::basis(0)
    }

    /// The basis element `e_index`.
    pub fn basis(index: usize) -> Self {
        assert!(index < 8, "octonion basis index out of range: {index}");
        let mut coeffs = [T::zero(); 8];
        coeffs[index] = T::one();
        OctonionOf { coeffs }
    }

    pub fn scale(&self, s: T) -> Self {
        OctonionOf {
            coeffs: self.coeffs.map(|c| c * s),
        }
    }

    /// Octonion conjugation: flips the sign of `e1..e7`.
    pub fn conj(&self) -> Self {
        let mut coeffs = self.coeffs.map(|c| -c);
        coeffs[0] = self.coeffs[0];
        OctonionOf { coeffs }
    }

    pub fn product(&self, rhs: &Self) -> Self {
        let mut out = [T::zero(); 8];
        for i in 0..8 {
            let a = self.coeffs[i];
            if a == T::zero() {
                continue;
            }
            for j in 0..8 {
                let b = rhs.coeffs[j];
                if b == T::zero() {
                    continue;
                }
                let (s, k) = MUL_TABLE[i][j];
                out[k] = out[k] + T::from_sign(s) * a * b;
            }
        }
        OctonionOf { coeffs: out }
    }

    /// `a(bc) - (ab)c`.
    pub fn associator(a: &Self, b: &Self, c: &Self) -> Self {
        a.product(&b.product(c)) - a.product(b).product(c)
    }

    /// `ab - ba`.
    pub fn commutator(a: &Self, b: &Self) -> Self {
        a.product(b) - b.product(a)
    }

    /// Sum of squared coefficient moduli.
    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs2()).sum()
    }

    /// Max-norm distance, used by tolerance checks.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| (*a - *b).abs2().sqrt())
            .fold(0.0, f64::max)
    }
}

impl Octonion {
    /// `||x||`, with `||x||^2` the `e0` coefficient of `x * conj(x)`.
    pub fn norm(&self) -> f64 {
        self.product(&self.conj()).coeffs[0].max(0.0).sqrt()
    }

    pub fn inv(&self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::Domain("inverse of the zero octonion".into()));
        }
        Ok(self.conj().scale(1.0 / n2))
    }

    /// Euclidean inner product `<x, y>`, the `e0` part of `(x conj(y) + y conj(x)) / 2`.
    pub fn inner(&self, other: &Self) -> f64 {
        let s = self.product(&other.conj()) + other.product(&self.conj());
        0.5 * s.coeffs[0]
    }

    pub fn complexify(&self) -> ComplexOctonion {
        ComplexOctonion::new(self.coeffs.map(|c| Complex64::new(c, 0.0)))
    }

    /// Splitting into four complex numbers with `e4` as the imaginary unit:
    /// `x = (x0 + x4 e4) e0 + (x1 - x5 e4) e1 + (x2 - x6 e4) e2 + (x3 - x7 e4) e3`.
    pub fn split(&self) -> SplitC4 {
        let x = &self.coeffs;
        SplitC4 {
            z: [
                Complex64::new(x[0], x[4]),
                Complex64::new(x[1], -x[5]),
                Complex64::new(x[2], -x[6]),
                Complex64::new(x[3], -x[7]),
            ],
        }
    }

    pub fn unsplit(s: &SplitC4) -> Self {
        let z = &s.z;
        Octonion::new([
            z[0].re, z[1].re, z[2].re, z[3].re, z[0].im, -z[1].im, -z[2].im, -z[3].im,
        ])
    }
}

impl ComplexOctonion {
    /// Conjugates each coefficient; leaves the octonion units alone.
    pub fn complex_conj(&self) -> Self {
        ComplexOctonion::new(self.coeffs.map(|c| c.conj()))
    }

    /// Composition of complex and octonion conjugation.
    pub fn dagger(&self) -> Self {
        self.conj().complex_conj()
    }

    pub fn real_part(&self) -> Octonion {
        Octonion::new(self.coeffs.map(|c| c.re))
    }

    pub fn imag_part(&self) -> Octonion {
        Octonion::new(self.coeffs.map(|c| c.im))
    }

    /// Splits real and imaginary coefficient parts separately; `a = re + i im`.
    pub fn split(&self) -> [SplitC4; 2] {
        [self.real_part().split(), self.imag_part().split()]
    }

    pub fn unsplit(parts: &[SplitC4; 2]) -> Self {
        let re = Octonion::unsplit(&parts[0]);
        let im = Octonion::unsplit(&parts[1]);
        let mut coeffs = [Complex64::zero(); 8];
        for k in 0..8 {
            coeffs[k] = Complex64::new(re.coeffs[k], im.coeffs[k]);
        }
        ComplexOctonion::new(coeffs)
    }
}

/// The mutually annihilating projectors `rho_± = (1 ± i e4) / 2`.
pub fn projector(plus: bool) -> ComplexOctonion {
    let s = if plus { 0.5 } else { -0.5 };
    let mut coeffs = [Complex64::zero(); 8];
    coeffs[0] = Complex64::new(0.5, 0.0);
    coeffs[4] = Complex64::new(0.0, s);
    ComplexOctonion::new(coeffs)
}

/// Four complex coordinates of an octonion (`C + C^3` splitting).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitC4 {
    pub z: [Complex64; 4],
}

impl SplitC4 {
    /// Lepton-like component `z0`.
    pub fn lepton(&self) -> Complex64 {
        self.z[0]
    }

    /// Quark-like triple `(z1, z2, z3)`.
    pub fn quark(&self) -> [Complex64; 3] {
        [self.z[1], self.z[2], self.z[3]]
    }
}

impl<T: Coefficient> Add for OctonionOf<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut coeffs = self.coeffs;
        for (c, r) in coeffs.iter_mut().zip(rhs.coeffs) {
            *c = *c + r;
        }
        OctonionOf { coeffs }
    }
}

impl<T: Coefficient> Sub for OctonionOf<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut coeffs = self.coeffs;
        for (c, r) in coeffs.iter_mut().zip(rhs.coeffs) {
            *c = *c - r;
        }
        OctonionOf { coeffs }
    }
}

impl<T: Coefficient> Neg for OctonionOf<T> {
    type Output = Self;
    fn neg(self) -> Self {
        OctonionOf {
            coeffs: self.coeffs.map(|c| -c),
        }
    }
}

impl<T: Coefficient> Mul for OctonionOf<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        OctonionOf::product(&self, &rhs)
    }
}

impl<T: Coefficient> fmt::Debug for OctonionOf<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Octonion").field(&self.coeffs).finish()
    }
}

impl fmt::Display for Octonion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == 0.0 {
                continue;
            }
            if first {
                write!(f, "{c}e{k}")?;
            } else if *c < 0.0 {
                write!(f, " - {}e{k}", -c)?;
            } else {
                write!(f, " + {c}e{k}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for Octonion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Octonion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let coeffs = <[f64; 8]>::deserialize(d)?;
        Octonion::try_new(coeffs).map_err(D::Error::custom)
    }
}

impl Serialize for ComplexOctonion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.coeffs.iter().map(|c| [c.re, c.im]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexOctonion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = <[[f64; 2]; 8]>::deserialize(d)?;
        ComplexOctonion::try_new(pairs.map(|[re, im]| Complex64::new(re, im)))
            .map_err(D::Error::custom)
    }
}

/// Multiplication table as CSV: row `i`, column `j` holds `ei*ej` as e.g. `-e5`.
pub fn table_csv() -> String {
    let mut out = String::from("*,e0,e1,e2,e3,e4,e5,e6,e7\n");
    for (i, row) in MUL_TABLE.iter().enumerate() {
        out.push_str(&format!("e{i}"));
        for &(s, k) in row {
            let sign = if s < 0 { "-" } else { "" };
            out.push_str(&format!(",{sign}e{k}"));
        }
        out.push('\n');
    }
    out
}

impl<T: Coefficient> Zero for OctonionOf<T> {
    fn zero() -> Self {
        OctonionOf::zero()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

impl<T: Coefficient> One for OctonionOf<T> {
    fn one() -> Self {
        OctonionOf::one()
    }
}
