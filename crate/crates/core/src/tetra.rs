//! General spherical tetrahedra in S^3.
//!
//! Edges are labelled `A..F` with `A/D`, `B/E`, `C/F` the three pairs of
//! skew edges. The labels map onto matrix slots as follows; every conversion
//! in the crate goes through [`Edge::length_slot`] and [`Edge::angle_slot`].
//!
//! | edge | edge matrix slot (`cos l`) | Gram matrix slot (`-cos angle`) |
//! |------|----------------------------|---------------------------------|
//! | A    | (0,1)                      | (2,3)                           |
//! | B    | (0,2)                      | (1,3)                           |
//! | C    | (0,3)                      | (1,2)                           |
//! | D    | (2,3)                      | (0,1)                           |
//! | E    | (1,3)                      | (0,2)                           |
//! | F    | (1,2)                      | (0,3)                           |
//!
//! The edge `p_i p_j` is the intersection of the two faces opposite the
//! other two vertices, which is why the two columns are complementary.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{Sym4, PD_TOL};

/// Largest amount by which a cosine recovered from cofactors may leave
/// `[-1, 1]` before it is treated as an error rather than rounding.
pub const ACOS_OVERSHOOT_TOL: f64 = 1e-9;

/// Denominator magnitude below which a cosine-rule ratio is flagged.
pub const COSINE_RULE_DEGENERACY: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Edge {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl Edge {
    pub const ALL: [Edge; 6] = [Edge::A, Edge::B, Edge::C, Edge::D, Edge::E, Edge::F];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    /// Vertex pair `(i, j)` joined by this edge.
    pub fn length_slot(self) -> (usize, usize) {
        match self {
            Edge::A => (0, 1),
            Edge::B => (0, 2),
            Edge::C => (0, 3),
            Edge::D => (2, 3),
            Edge::E => (1, 3),
            Edge::F => (1, 2),
        }
    }

    /// Pair of faces `(i, j)` meeting along this edge.
    pub fn angle_slot(self) -> (usize, usize) {
        self.opposite().length_slot()
    }

    /// The skew edge.
    pub fn opposite(self) -> Edge {
        match self {
            Edge::A => Edge::D,
            Edge::B => Edge::E,
            Edge::C => Edge::F,
            Edge::D => Edge::A,
            Edge::E => Edge::B,
            Edge::F => Edge::C,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Edge::A => "A",
            Edge::B => "B",
            Edge::C => "C",
            Edge::D => "D",
            Edge::E => "E",
            Edge::F => "F",
        }
    }
}

fn check_open_range(values: &[f64; 6], what: &'static str) -> Result<()> {
    for &v in values {
        if !(v > 0.0 && v < PI) {
            return Err(Error::OutOfRange {
                what,
                value: v,
                range: "(0, pi)",
            });
        }
    }
    Ok(())
}

fn cos_matrix(values: &[f64; 6], sign: f64, slot: fn(Edge) -> (usize, usize)) -> Result<Sym4> {
    let mut m = *Sym4::identity().entries();
    for e in Edge::ALL {
        let (i, j) = slot(e);
        let v = sign * values[e.index()].cos();
        m[i][j] = v;
        m[j][i] = v;
    }
    Sym4::new(m)
}

/// Six edge lengths in radians, indexed by [`Edge`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeLengths([f64; 6]);

/// Six interior dihedral angles in radians, indexed by [`Edge`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DihedralAngles([f64; 6]);

impl EdgeLengths {
    /// Validates the range of every length and positive definiteness of the
    /// edge matrix.
    pub fn new(values: [f64; 6]) -> Result<Self> {
        check_open_range(&values, "edge length")?;
        let l = EdgeLengths(values);
        let m = edge_matrix_unchecked(&l)?;
        if !m.is_positive_definite(PD_TOL) {
            return Err(Error::NotATetrahedron(
                "edge matrix is not positive definite".into(),
            ));
        }
        Ok(l)
    }

    #[inline]
    pub fn get(&self, e: Edge) -> f64 {
        self.0[e.index()]
    }

    pub fn values(&self) -> [f64; 6] {
        self.0
    }
}

impl DihedralAngles {
    pub fn new(values: [f64; 6]) -> Result<Self> {
        check_open_range(&values, "dihedral angle")?;
        let a = DihedralAngles(values);
        let m = gram_matrix_unchecked(&a)?;
        if !m.is_positive_definite(PD_TOL) {
            return Err(Error::NotATetrahedron(
                "Gram matrix is not positive definite".into(),
            ));
        }
        Ok(a)
    }

    #[inline]
    pub fn get(&self, e: Edge) -> f64 {
        self.0[e.index()]
    }

    pub fn values(&self) -> [f64; 6] {
        self.0
    }
}

fn edge_matrix_unchecked(l: &EdgeLengths) -> Result<Sym4> {
    cos_matrix(&l.0, 1.0, Edge::length_slot)
}

fn gram_matrix_unchecked(a: &DihedralAngles) -> Result<Sym4> {
    cos_matrix(&a.0, -1.0, Edge::angle_slot)
}

/// Edge matrix `{cos l_ij}`.
pub fn edge_matrix(lengths: &EdgeLengths) -> Sym4 {
    edge_matrix_unchecked(lengths).expect("validated lengths give a finite matrix")
}

/// Gram matrix `{-cos alpha_ij}`.
pub fn gram_matrix(angles: &DihedralAngles) -> Sym4 {
    gram_matrix_unchecked(angles).expect("validated angles give a finite matrix")
}

/// Reads `cof_ij / sqrt(cof_ii cof_jj)` at `slot(e)` for each edge and maps it
/// through `acos(sign * x)`.
pub(crate) fn normalized_cofactor_angles(
    m: &Sym4,
    slot: fn(Edge) -> (usize, usize),
    sign: f64,
) -> Result<[f64; 6]> {
    let cof = m.cofactor_matrix();
    for i in 0..4 {
        let v = cof.get(i, i);
        if !(v > PD_TOL) {
            return Err(Error::DegenerateCofactor { index: i, value: v });
        }
    }
    let mut out = [0.0; 6];
    for e in Edge::ALL {
        let (i, j) = slot(e);
        let x = sign * cof.get(i, j) / (cof.get(i, i) * cof.get(j, j)).sqrt();
        out[e.index()] = clamped_acos(x)?;
    }
    Ok(out)
}

pub(crate) fn clamped_acos(x: f64) -> Result<f64> {
    if x.abs() > 1.0 + ACOS_OVERSHOOT_TOL || x.is_nan() {
        return Err(Error::CosineOvershoot { value: x });
    }
    Ok(x.clamp(-1.0, 1.0).acos())
}

/// Dihedral angles of the tetrahedron with the given edge lengths.
pub fn angles_from_lengths(lengths: &EdgeLengths) -> Result<DihedralAngles> {
    let m = edge_matrix(lengths);
    if !m.is_positive_definite(PD_TOL) {
        return Err(Error::NotATetrahedron(
            "edge matrix is not positive definite".into(),
        ));
    }
    // g_ij = c*_ij / sqrt(c*_ii c*_jj) = -cos(angle at Gram slot ij)
    normalized_cofactor_angles(&m, Edge::angle_slot, -1.0).map(DihedralAngles)
}

/// Edge lengths of the tetrahedron with the given dihedral angles.
pub fn lengths_from_angles(angles: &DihedralAngles) -> Result<EdgeLengths> {
    let m = gram_matrix(angles);
    if !m.is_positive_definite(PD_TOL) {
        return Err(Error::NotATetrahedron(
            "Gram matrix is not positive definite".into(),
        ));
    }
    normalized_cofactor_angles(&m, Edge::length_slot, 1.0).map(EdgeLengths)
}

/// A spherical tetrahedron with both of its matrices and their cofactors.
#[derive(Debug, Clone, PartialEq)]
pub struct Tetrahedron {
    lengths: EdgeLengths,
    angles: DihedralAngles,
    edge_mat: Sym4,
    gram_mat: Sym4,
    edge_cof: Sym4,
    gram_cof: Sym4,
}

impl Tetrahedron {
    pub fn from_lengths(lengths: EdgeLengths) -> Result<Self> {
        let angles = angles_from_lengths(&lengths)?;
        Self::assemble(lengths, angles)
    }

    pub fn from_angles(angles: DihedralAngles) -> Result<Self> {
        let lengths = lengths_from_angles(&angles)?;
        Self::assemble(lengths, angles)
    }

    fn assemble(lengths: EdgeLengths, angles: DihedralAngles) -> Result<Self> {
        let edge_mat = edge_matrix(&lengths);
        let gram_mat = gram_matrix(&angles);
        if !gram_mat.is_positive_definite(PD_TOL) {
            return Err(Error::NotATetrahedron(
                "derived Gram matrix is not positive definite".into(),
            ));
        }
        if !edge_mat.is_positive_definite(PD_TOL) {
            return Err(Error::NotATetrahedron(
                "derived edge matrix is not positive definite".into(),
            ));
        }
        Ok(Tetrahedron {
            lengths,
            angles,
            edge_mat,
            gram_mat,
            edge_cof: edge_mat.cofactor_matrix(),
            gram_cof: gram_mat.cofactor_matrix(),
        })
    }

    pub fn lengths(&self) -> &EdgeLengths {
        &self.lengths
    }

    pub fn angles(&self) -> &DihedralAngles {
        &self.angles
    }

    pub fn edge_matrix(&self) -> &Sym4 {
        &self.edge_mat
    }

    pub fn gram_matrix(&self) -> &Sym4 {
        &self.gram_mat
    }

    /// Cofactors `c*_ij` of the edge matrix.
    pub fn edge_cofactors(&self) -> &Sym4 {
        &self.edge_cof
    }

    /// Cofactors `c_ij` of the Gram matrix.
    pub fn gram_cofactors(&self) -> &Sym4 {
        &self.gram_cof
    }

    /// `det G`
    pub fn delta(&self) -> f64 {
        self.gram_mat.determinant()
    }

    /// `det G*`
    pub fn delta_star(&self) -> f64 {
        self.edge_mat.determinant()
    }

    /// Product of the principal Gram cofactors.
    pub fn p(&self) -> f64 {
        (0..4).map(|i| self.gram_cof.get(i, i)).product()
    }

    /// Product of the principal edge-matrix cofactors.
    pub fn p_star(&self) -> f64 {
        (0..4).map(|i| self.edge_cof.get(i, i)).product()
    }

    /// Polar dual: vertices are the outer normals of `self`.
    ///
    /// The dual edge in length slot `(i, j)` has length `pi - angle` where
    /// `angle` is the dihedral angle sitting in Gram slot `(i, j)` here, and
    /// symmetrically for the dual angles. The matrices simply trade places.
    pub fn dual(&self) -> Tetrahedron {
        let mut lengths = [0.0; 6];
        let mut angles = [0.0; 6];
        for y in Edge::ALL {
            // the label whose angle lives where y's length lives is y's skew partner
            let x = y.opposite();
            lengths[y.index()] = PI - self.angles.get(x);
            angles[y.index()] = PI - self.lengths.get(x);
        }
        Tetrahedron {
            lengths: EdgeLengths(lengths),
            angles: DihedralAngles(angles),
            edge_mat: self.gram_mat,
            gram_mat: self.edge_mat,
            edge_cof: self.gram_cof,
            gram_cof: self.edge_cof,
        }
    }

    /// `sum over edges of l * (pi - angle)`; the dual edge of `E` has length
    /// `pi - angle(E)`.
    pub fn sforza_edge_sum(&self) -> f64 {
        Edge::ALL
            .iter()
            .map(|&e| self.lengths.get(e) * (PI - self.angles.get(e)))
            .sum()
    }

    /// Vertex vectors `p_0..p_3` (rows of the Cholesky factor of `G*`).
    pub fn vertices(&self) -> Result<[[f64; 4]; 4]> {
        Ok(self.edge_mat.sym_sqrt_factor()?.rows())
    }

    /// Outer unit normals `v_i = -sum_k c*_ik p_k / sqrt(c*_ii det G*)`.
    pub fn normals(&self) -> Result<[[f64; 4]; 4]> {
        let p = self.vertices()?;
        let ds = self.delta_star();
        let mut v = [[0.0; 4]; 4];
        for (i, vi) in v.iter_mut().enumerate() {
            let norm = (self.edge_cof.get(i, i) * ds).sqrt();
            for (k, pk) in p.iter().enumerate() {
                let w = -self.edge_cof.get(i, k) / norm;
                for (c, x) in vi.iter_mut().enumerate() {
                    *x += w * pk[c];
                }
            }
        }
        Ok(v)
    }
}

/// The three sine-rule products and the two matrix expressions they must equal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SineRuleCheck {
    /// `sin l_X sin l_X' / (sin X sin X')` for the skew pairs A/D, B/E, C/F.
    pub ratios: [f64; 3],
    /// `det G / sqrt(p)`
    pub from_gram: f64,
    /// `sqrt(p*) / det G*`
    pub from_edge: f64,
    /// Pairwise differences `r0 - r1`, `r1 - r2`, `r2 - r0`.
    pub residuals: [f64; 3],
}

impl SineRuleCheck {
    /// Largest relative disagreement among all five expressions.
    pub fn max_relative_residual(&self) -> f64 {
        let reference = self.from_gram;
        let mut worst = ((self.from_edge - reference) / reference).abs();
        for r in self.ratios {
            worst = worst.max(((r - reference) / reference).abs());
        }
        worst
    }
}

pub fn sine_rule_residuals(t: &Tetrahedron) -> SineRuleCheck {
    let l = &t.lengths;
    let a = &t.angles;
    let pair = |x: Edge| {
        let y = x.opposite();
        l.get(x).sin() * l.get(y).sin() / (a.get(x).sin() * a.get(y).sin())
    };
    let ratios = [pair(Edge::A), pair(Edge::B), pair(Edge::C)];
    SineRuleCheck {
        ratios,
        from_gram: t.delta() / t.p().sqrt(),
        from_edge: t.p_star().sqrt() / t.delta_star(),
        residuals: [
            ratios[0] - ratios[1],
            ratios[1] - ratios[2],
            ratios[2] - ratios[0],
        ],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CosineRuleCheck {
    pub numerators: [f64; 3],
    pub denominators: [f64; 3],
    /// `None` where the denominator is below [`COSINE_RULE_DEGENERACY`].
    pub ratios: [Option<f64>; 3],
    /// `det G / sqrt(p)`
    pub reference: f64,
}

impl CosineRuleCheck {
    pub fn degenerate(&self) -> [bool; 3] {
        self.ratios.map(|r| r.is_none())
    }

    /// Largest relative deviation of a non-degenerate ratio from the reference.
    pub fn max_relative_residual(&self) -> Option<f64> {
        self.ratios
            .iter()
            .flatten()
            .map(|r| ((r - self.reference) / self.reference).abs())
            .reduce(f64::max)
    }

    /// Pairwise differences between non-degenerate ratios.
    pub fn pairwise_residuals(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for (i, j) in [(0, 1), (1, 2), (2, 0)] {
            if let (Some(a), Some(b)) = (self.ratios[i], self.ratios[j]) {
                out.push(a - b);
            }
        }
        out
    }
}

/// Ratios `(cos l_X cos l_X' - cos l_Y cos l_Y') / (cos X cos X' - cos Y cos Y')`
/// for the consecutive skew pairs (A/D, B/E), (B/E, C/F), (C/F, A/D).
pub fn cosine_rule_residuals(t: &Tetrahedron) -> CosineRuleCheck {
    let l = &t.lengths;
    let a = &t.angles;
    let lp = |x: Edge| l.get(x).cos() * l.get(x.opposite()).cos();
    let ap = |x: Edge| a.get(x).cos() * a.get(x.opposite()).cos();
    let pairs = [(Edge::A, Edge::B), (Edge::B, Edge::C), (Edge::C, Edge::A)];
    let mut numerators = [0.0; 3];
    let mut denominators = [0.0; 3];
    let mut ratios = [None; 3];
    for (k, (x, y)) in pairs.into_iter().enumerate() {
        numerators[k] = lp(x) - lp(y);
        denominators[k] = ap(x) - ap(y);
        if denominators[k].abs() >= COSINE_RULE_DEGENERACY {
            ratios[k] = Some(numerators[k] / denominators[k]);
        }
    }
    CosineRuleCheck {
        numerators,
        denominators,
        ratios,
        reference: t.delta() / t.p().sqrt(),
    }
}
