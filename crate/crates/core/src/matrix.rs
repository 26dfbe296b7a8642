//! Dense 4x4 symmetric linear algebra.
//!
//! Everything here works on fixed-size arrays: the edge and Gram matrices of
//! a spherical tetrahedron, their cofactor matrices, and the Cholesky factor
//! whose rows are vertex coordinates.

use crate::error::{Error, Result};

/// Default threshold on leading principal minors and Cholesky pivots.
pub const PD_TOL: f64 = 1e-12;

/// Largest asymmetry tolerated (relative to the largest entry) before
/// construction averages the two triangles.
const SYMMETRY_TOL: f64 = 1e-12;

/// A real symmetric 4x4 matrix with finite entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sym4([[f64; 4]; 4]);

/// A lower-triangular 4x4 matrix with positive diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lower4([[f64; 4]; 4]);

impl Sym4 {
    /// Builds a symmetric matrix, replacing `m` by `(m + m^T) / 2`.
    pub fn new(entries: [[f64; 4]; 4]) -> Result<Self> {
        let mut scale = 1.0_f64;
        for (i, row) in entries.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                scale = scale.max(v.abs());
            }
        }
        let mut asymmetry = 0.0_f64;
        let mut out = entries;
        for i in 0..4 {
            for j in (i + 1)..4 {
                asymmetry = asymmetry.max((entries[i][j] - entries[j][i]).abs());
                let avg = 0.5 * (entries[i][j] + entries[j][i]);
                out[i][j] = avg;
                out[j][i] = avg;
            }
        }
        if asymmetry > SYMMETRY_TOL * scale {
            return Err(Error::Asymmetric { asymmetry });
        }
        Ok(Sym4(out))
    }

    /// Unit-diagonal matrix from the six off-diagonal entries in the order
    /// (0,1), (0,2), (0,3), (1,2), (1,3), (2,3).
    pub fn unit_diagonal(off: [f64; 6]) -> Result<Self> {
        let [m01, m02, m03, m12, m13, m23] = off;
        Sym4::new([
            [1.0, m01, m02, m03],
            [m01, 1.0, m12, m13],
            [m02, m12, 1.0, m23],
            [m03, m13, m23, 1.0],
        ])
    }

    pub fn identity() -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Sym4(m)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[i][j]
    }

    pub fn entries(&self) -> &[[f64; 4]; 4] {
        &self.0
    }

    pub fn max_abs_diff(&self, other: &Sym4) -> f64 {
        let mut d = 0.0_f64;
        for i in 0..4 {
            for j in 0..4 {
                d = d.max((self.0[i][j] - other.0[i][j]).abs());
            }
        }
        d
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn determinant(&self) -> f64 {
        det_pivoted(self.0)
    }

    /// Determinant of the 3x3 matrix left after deleting `row` and `col`.
    pub fn minor(&self, row: usize, col: usize) -> f64 {
        let mut sub = [[0.0; 3]; 3];
        for (r, i) in (0..4).filter(|&i| i != row).enumerate() {
            for (c, j) in (0..4).filter(|&j| j != col).enumerate() {
                sub[r][c] = self.0[i][j];
            }
        }
        det3(&sub)
    }

    /// `{(-1)^(i+j) det m(i,j)}` from explicit 3x3 minors, so it stays
    /// defined for singular input.
    pub fn cofactor_matrix(&self) -> Sym4 {
        let mut c = [[0.0; 4]; 4];
        for (i, row) in c.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                *v = sign * self.minor(i, j);
            }
        }
        // the two triangles are transposed minors; only rounding separates them
        for i in 0..4 {
            for j in (i + 1)..4 {
                let avg = 0.5 * (c[i][j] + c[j][i]);
                c[i][j] = avg;
                c[j][i] = avg;
            }
        }
        Sym4(c)
    }

    /// Leading principal minors of orders 1 through 4.
    pub fn leading_minors(&self) -> [f64; 4] {
        let m = &self.0;
        let d1 = m[0][0];
        let d2 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let d3 = det3(&[
            [m[0][0], m[0][1], m[0][2]],
            [m[1][0], m[1][1], m[1][2]],
            [m[2][0], m[2][1], m[2][2]],
        ]);
        [d1, d2, d3, self.determinant()]
    }

    /// Sylvester's criterion: every leading principal minor exceeds `tol`.
    pub fn is_positive_definite(&self, tol: f64) -> bool {
        self.leading_minors().iter().all(|&d| d > tol)
    }

    /// Cholesky factor `L` with `L L^T = self`.
    pub fn sym_sqrt_factor(&self) -> Result<Lower4> {
        self.sym_sqrt_factor_with_tol(PD_TOL)
    }

    pub fn sym_sqrt_factor_with_tol(&self, tol: f64) -> Result<Lower4> {
        let m = &self.0;
        let mut l = [[0.0; 4]; 4];
        for j in 0..4 {
            let mut pivot = m[j][j];
            for k in 0..j {
                pivot -= l[j][k] * l[j][k];
            }
            if !(pivot > tol) {
                return Err(Error::NotPositiveDefinite { index: j, pivot });
            }
            let d = pivot.sqrt();
            l[j][j] = d;
            for i in (j + 1)..4 {
                let mut s = m[i][j];
                for k in 0..j {
                    s -= l[i][k] * l[j][k];
                }
                l[i][j] = s / d;
            }
        }
        Ok(Lower4(l))
    }

    /// Residual of Jacobi's complementary-minor theorem for 2x2 minors:
    ///
    /// `det cof(m)[rows, cols] - sgn(sigma) det(m) det m[rows^c, cols^c]`
    ///
    /// where `sigma` maps `(rows, rows^c)` to `(cols, cols^c)` and the
    /// complements are taken in increasing order.
    pub fn jacobi_identity_residual(
        &self,
        rows: (usize, usize),
        cols: (usize, usize),
    ) -> Result<f64> {
        for (name, (a, b)) in [("rows", rows), ("cols", cols)] {
            if a > 3 || b > 3 || a == b {
                return Err(Error::InvalidIndices(format!("{name} = ({a}, {b})")));
            }
        }
        let cof = self.cofactor_matrix();
        let lhs = cof.get(rows.0, cols.0) * cof.get(rows.1, cols.1)
            - cof.get(rows.0, cols.1) * cof.get(rows.1, cols.0);

        let rc = complement(rows);
        let cc = complement(cols);
        let sign = permutation_sign([rows.0, rows.1, rc.0, rc.1])
            * permutation_sign([cols.0, cols.1, cc.0, cc.1]);
        let comp = self.get(rc.0, cc.0) * self.get(rc.1, cc.1)
            - self.get(rc.0, cc.1) * self.get(rc.1, cc.0);
        Ok(lhs - sign * self.determinant() * comp)
    }
}

impl Lower4 {
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[i][j]
    }

    pub fn rows(&self) -> [[f64; 4]; 4] {
        self.0
    }

    /// `L L^T`, re-symmetrized.
    pub fn gram(&self) -> Sym4 {
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = (0..4).map(|k| self.0[i][k] * self.0[j][k]).sum();
            }
        }
        Sym4(m)
    }

    /// Solves `L^T x = b` by back substitution.
    #[inline]
    pub fn solve_transpose(&self, b: [f64; 4]) -> [f64; 4] {
        let l = &self.0;
        let mut x = [0.0; 4];
        for i in (0..4).rev() {
            let mut s = b[i];
            for k in (i + 1)..4 {
                s -= l[k][i] * x[k];
            }
            x[i] = s / l[i][i];
        }
        x
    }
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn det_pivoted(mut a: [[f64; 4]; 4]) -> f64 {
    let mut det = 1.0;
    for col in 0..4 {
        let mut p = col;
        for r in (col + 1)..4 {
            if a[r][col].abs() > a[p][col].abs() {
                p = r;
            }
        }
        if a[p][col] == 0.0 {
            return 0.0;
        }
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pivot = a[col][col];
        det *= pivot;
        for r in (col + 1)..4 {
            let f = a[r][col] / pivot;
            if f != 0.0 {
                for c in col..4 {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    det
}

fn complement((a, b): (usize, usize)) -> (usize, usize) {
    let mut rest = (0..4).filter(|&i| i != a && i != b);
    let lo = rest.next().unwrap_or(0);
    let hi = rest.next().unwrap_or(0);
    (lo, hi)
}

fn permutation_sign(p: [usize; 4]) -> f64 {
    let mut inversions = 0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_sym(rng: &mut ChaCha8Rng) -> Sym4 {
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in i..4 {
                let v = rng.random_range(-1.0..1.0);
                m[i][j] = v;
                m[j][i] = v;
            }
        }
        Sym4::new(m).unwrap()
    }

    fn random_pd(rng: &mut ChaCha8Rng) -> Sym4 {
        // B B^T + 0.1 I
        let mut b = [[0.0; 4]; 4];
        for row in b.iter_mut() {
            for v in row.iter_mut() {
                *v = rng.random_range(-1.0..1.0);
            }
        }
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = (0..4).map(|k| b[i][k] * b[j][k]).sum::<f64>();
            }
            m[i][i] += 0.1;
        }
        Sym4::new(m).unwrap()
    }

    /// 24-term Leibniz expansion.
    fn leibniz(m: &Sym4) -> f64 {
        let mut total = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let p = [a, b, c, d];
                        let mut seen = [false; 4];
                        if p.iter().any(|&i| std::mem::replace(&mut seen[i], true)) {
                            continue;
                        }
                        total += permutation_sign(p)
                            * m.get(0, a)
                            * m.get(1, b)
                            * m.get(2, c)
                            * m.get(3, d);
                    }
                }
            }
        }
        total
    }

    /// Characteristic polynomial coefficients by Faddeev-LeVerrier:
    /// `x^4 + c[0] x^3 + c[1] x^2 + c[2] x + c[3]`.
    fn char_poly(m: &Sym4) -> [f64; 4] {
        let a = m.entries();
        let mut mk = [[0.0; 4]; 4];
        let mut coeffs = [0.0; 4];
        let mut c_prev = 1.0;
        for k in 1..=4 {
            // M_k = A M_{k-1} + c_{k-1} I
            let mut next = [[0.0; 4]; 4];
            for i in 0..4 {
                for j in 0..4 {
                    next[i][j] = (0..4).map(|l| a[i][l] * mk[l][j]).sum::<f64>();
                }
                next[i][i] += c_prev;
            }
            mk = next;
            let mut am = [[0.0; 4]; 4];
            for i in 0..4 {
                for j in 0..4 {
                    am[i][j] = (0..4).map(|l| a[i][l] * mk[l][j]).sum::<f64>();
                }
            }
            let trace: f64 = (0..4).map(|i| am[i][i]).sum();
            let c = -trace / k as f64;
            coeffs[k - 1] = c;
            c_prev = c;
        }
        coeffs
    }

    #[test]
    fn determinant_of_identity_and_rank_deficient() {
        assert_eq!(Sym4::identity().determinant(), 1.0);
        let m = Sym4::new([
            [1.0, 0.5, 0.5, 0.2],
            [0.5, 1.0, 1.0, 0.3],
            [0.5, 1.0, 1.0, 0.3],
            [0.2, 0.3, 0.3, 1.0],
        ])
        .unwrap();
        assert!(m.determinant().abs() < 1e-15);
    }

    #[test]
    fn determinant_matches_leibniz() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..500 {
            let m = random_sym(&mut rng);
            let want = leibniz(&m);
            let got = m.determinant();
            assert!(
                (got - want).abs() <= 1e-12 * want.abs().max(1e-3),
                "{got} vs {want}"
            );
        }
    }

    #[test]
    fn cofactor_closed_forms() {
        assert_eq!(Sym4::identity().cofactor_matrix(), Sym4::identity());
        let mut d = [[0.0; 4]; 4];
        d[0][0] = 2.0;
        d[1][1] = 1.0;
        d[2][2] = 1.0;
        d[3][3] = 1.0;
        let cof = Sym4::new(d).unwrap().cofactor_matrix();
        let want = [1.0, 2.0, 2.0, 2.0];
        for i in 0..4 {
            for j in 0..4 {
                let w = if i == j { want[i] } else { 0.0 };
                assert_eq!(cof.get(i, j), w);
            }
        }
    }

    #[test]
    fn adjugate_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let m = random_sym(&mut rng);
            let c = m.cofactor_matrix();
            let det = m.determinant();
            for i in 0..4 {
                for j in 0..4 {
                    let s: f64 = (0..4).map(|k| m.get(i, k) * c.get(j, k)).sum();
                    let want = if i == j { det } else { 0.0 };
                    assert!((s - want).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn positive_definiteness() {
        assert!(Sym4::identity().is_positive_definite(1e-12));
        let mut m = *Sym4::identity().entries();
        m[2][2] = -1.0;
        assert!(!Sym4::new(m).unwrap().is_positive_definite(1e-12));
    }

    #[test]
    fn positive_definiteness_agrees_with_char_poly_oracle() {
        // A symmetric matrix is PD iff its characteristic polynomial has
        // strictly alternating coefficients (all roots real and positive).
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut checked = 0;
        while checked < 200 {
            let mut m = random_sym(&mut rng);
            let mut e = *m.entries();
            for (i, row) in e.iter_mut().enumerate() {
                row[i] = rng.random_range(0.2..2.0);
            }
            m = Sym4::new(e).unwrap();
            let c = char_poly(&m);
            // skip matrices too close to the PD boundary to call either way
            if c[3].abs() < 1e-6 {
                continue;
            }
            let oracle = c[0] < 0.0 && c[1] > 0.0 && c[2] < 0.0 && c[3] > 0.0;
            assert_eq!(m.is_positive_definite(PD_TOL), oracle, "{m:?}");
            checked += 1;
        }
    }

    #[test]
    fn cholesky_closed_forms() {
        let l = Sym4::identity().sym_sqrt_factor().unwrap();
        assert_eq!(l.gram(), Sym4::identity());
        assert_eq!(l.rows(), *Sym4::identity().entries());

        let m = Sym4::unit_diagonal([0.5, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let l = m.sym_sqrt_factor().unwrap();
        assert_eq!(l.get(1, 0), 0.5);
        assert!((l.get(1, 1) - 3.0_f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let m = Sym4::unit_diagonal([1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            m.sym_sqrt_factor(),
            Err(Error::NotPositiveDefinite { index: 1, .. })
        ));
    }

    #[test]
    fn cholesky_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..1000 {
            let m = random_pd(&mut rng);
            let l = m.sym_sqrt_factor().unwrap();
            assert!(l.gram().max_abs_diff(&m) < 1e-10);
            for i in 0..4 {
                assert!(l.get(i, i) > 0.0);
                for j in (i + 1)..4 {
                    assert_eq!(l.get(i, j), 0.0);
                }
            }
        }
    }

    #[test]
    fn solve_transpose_inverts() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = random_pd(&mut rng);
        let l = m.sym_sqrt_factor().unwrap();
        let b = [0.3, -1.0, 2.0, 0.7];
        let x = l.solve_transpose(b);
        for i in 0..4 {
            let s: f64 = (0..4).map(|k| l.get(k, i) * x[k]).sum();
            assert!((s - b[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn jacobi_identity() {
        assert_eq!(
            Sym4::identity().jacobi_identity_residual((0, 1), (0, 1)),
            Ok(0.0)
        );
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..1000 {
            let m = random_pd(&mut rng);
            let scale = m.determinant().abs().max(1.0);
            for r0 in 0..4 {
                for r1 in 0..4 {
                    for c0 in 0..4 {
                        for c1 in 0..4 {
                            if r0 == r1 || c0 == c1 {
                                continue;
                            }
                            let res = m.jacobi_identity_residual((r0, r1), (c0, c1)).unwrap();
                            assert!(res.abs() < 1e-10 * scale, "{res}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn jacobi_rejects_bad_indices() {
        let m = Sym4::identity();
        assert!(matches!(
            m.jacobi_identity_residual((1, 1), (0, 2)),
            Err(Error::InvalidIndices(_))
        ));
        assert!(m.jacobi_identity_residual((0, 4), (0, 2)).is_err());
    }

    #[test]
    fn construction_rejects_bad_input() {
        let mut m = *Sym4::identity().entries();
        m[0][1] = f64::NAN;
        assert!(matches!(Sym4::new(m), Err(Error::NonFinite { .. })));
        let mut m = *Sym4::identity().entries();
        m[0][1] = 0.5;
        assert!(matches!(Sym4::new(m), Err(Error::Asymmetric { .. })));
        m[1][0] = 0.5 + 1e-14;
        let s = Sym4::new(m).unwrap();
        assert_eq!(s.get(0, 1), s.get(1, 0));
    }
}
