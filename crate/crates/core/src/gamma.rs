//! Dirac matrices in two representations, with Minkowski metric `(+,-,-,-)`.

use nalgebra::SMatrix;
use num_complex::Complex64;

pub type Mat4 = SMatrix<Complex64, 4, 4>;

const O: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Minkowski metric diagonal.
pub const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

pub fn pauli() -> [[[Complex64; 2]; 2]; 3] {
    [
        [[O, ONE], [ONE, O]],
        [[O, -I], [I, O]],
        [[ONE, O], [O, -ONE]],
    ]
}

/// 4x4 matrix from 2x2 blocks `[[a, b], [c, d]]`.
fn blocks(
    a: [[Complex64; 2]; 2],
    b: [[Complex64; 2]; 2],
    c: [[Complex64; 2]; 2],
    d: [[Complex64; 2]; 2],
) -> Mat4 {
    let mut m = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            m[(i, j)] = a[i][j];
            m[(i, j + 2)] = b[i][j];
            m[(i + 2, j)] = c[i][j];
            m[(i + 2, j + 2)] = d[i][j];
        }
    }
    m
}

fn scale2(s: Complex64, m: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    [[s * m[0][0], s * m[0][1]], [s * m[1][0], s * m[1][1]]]
}

const ZERO2: [[Complex64; 2]; 2] = [[O, O], [O, O]];
const ID2: [[Complex64; 2]; 2] = [[ONE, O], [O, ONE]];

#[derive(Debug, Clone, PartialEq)]
pub struct GammaSet {
    pub gamma: [Mat4; 4],
    pub gamma5: Mat4,
}

impl GammaSet {
    /// Standard Dirac representation with `gamma5 = i g0 g1 g2 g3`.
    pub fn dirac() -> Self {
        let s = pauli();
        let g0 = blocks(ID2, ZERO2, ZERO2, scale2(-ONE, ID2));
        let gj = |k: usize| blocks(ZERO2, s[k], scale2(-ONE, s[k]), ZERO2);
        let gamma = [g0, gj(0), gj(1), gj(2)];
        let gamma5 = gamma[0] * gamma[1] * gamma[2] * gamma[3] * I;
        GammaSet { gamma, gamma5 }
    }

    /// Majorana representation: `i gamma^mu` and `i gamma5` have real entries.
    pub fn majorana() -> Self {
        let s = pauli();
        let g0 = blocks(ZERO2, scale2(-ONE, s[1]), scale2(-ONE, s[1]), ZERO2);
        let g1 = blocks(ZERO2, scale2(I, s[2]), scale2(I, s[2]), ZERO2);
        let g2 = blocks(scale2(I, ID2), ZERO2, ZERO2, scale2(-I, ID2));
        let g3 = blocks(ZERO2, scale2(-I, s[0]), scale2(-I, s[0]), ZERO2);
        let gamma5 = blocks(ZERO2, scale2(I, ID2), scale2(-I, ID2), ZERO2);
        GammaSet {
            gamma: [g0, g1, g2, g3],
            gamma5,
        }
    }

    /// `k-slash = gamma^mu k_mu` for contravariant `k = (k^0, k^1, k^2, k^3)`.
    pub fn slash(&self, k: [f64; 4]) -> Mat4 {
        let mut m = Mat4::zeros();
        for mu in 0..4 {
            m += self.gamma[mu] * Complex64::new(METRIC[mu] * k[mu], 0.0);
        }
        m
    }

    /// `(1 + gamma5) / 2`
    pub fn chi_right(&self) -> Mat4 {
        (Mat4::identity() + self.gamma5) * Complex64::new(0.5, 0.0)
    }

    /// `(1 - gamma5) / 2`
    pub fn chi_left(&self) -> Mat4 {
        (Mat4::identity() - self.gamma5) * Complex64::new(0.5, 0.0)
    }

    /// Max entry error of `{g^mu, g^nu} = 2 eta^{mu nu}`.
    pub fn clifford_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for mu in 0..4 {
            for nu in 0..4 {
                let ac = self.gamma[mu] * self.gamma[nu] + self.gamma[nu] * self.gamma[mu];
                let target = if mu == nu { 2.0 * METRIC[mu] } else { 0.0 };
                let diff = ac - Mat4::identity() * Complex64::new(target, 0.0);
                worst = worst.max(max_abs(&diff));
            }
        }
        worst
    }

    /// Max entry error of `gamma5^2 = 1` and `{gamma5, gamma^mu} = 0`.
    pub fn gamma5_residual(&self) -> f64 {
        let mut worst = max_abs(&(self.gamma5 * self.gamma5 - Mat4::identity()));
        for g in &self.gamma {
            worst = worst.max(max_abs(&(self.gamma5 * g + g * self.gamma5)));
        }
        worst
    }
}

pub fn max_abs(m: &Mat4) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_representations_satisfy_clifford() {
        for g in [GammaSet::dirac(), GammaSet::majorana()] {
            assert_eq!(g.clifford_residual(), 0.0);
            assert_eq!(g.gamma5_residual(), 0.0);
        }
    }

    #[test]
    fn majorana_squares() {
        let g = GammaSet::majorana();
        assert_eq!(g.gamma[0] * g.gamma[0], Mat4::identity());
        assert_eq!(g.gamma[1] * g.gamma[1], -Mat4::identity());
        assert_eq!(
            max_abs(&(g.gamma5 * g.gamma[0] + g.gamma[0] * g.gamma5)),
            0.0
        );
    }

    #[test]
    fn slash_squares_to_minkowski_norm() {
        let g = GammaSet::dirac();
        let k = [1.3, 0.2, -0.7, 0.4];
        let k2 = k[0] * k[0] - k[1] * k[1] - k[2] * k[2] - k[3] * k[3];
        let s = g.slash(k);
        assert!(max_abs(&(s * s - Mat4::identity() * Complex64::new(k2, 0.0))) < 1e-14);
    }

    #[test]
    fn chiral_projectors() {
        let g = GammaSet::dirac();
        let r = g.chi_right();
        assert!(max_abs(&(r * r - r)) < 1e-15);
        assert!(max_abs(&(r * g.chi_left())) < 1e-15);
    }
}
