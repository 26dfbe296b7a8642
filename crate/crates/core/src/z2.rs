//! Z2-symmetric tetrahedra: `l_B = l_E`, `l_C = l_F`, and the symmetry axis
//! joins the midpoints of the skew edges `A` and `D`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{Sym4, PD_TOL};
use crate::tetra::{
    lengths_from_angles, normalized_cofactor_angles, DihedralAngles, Edge, EdgeLengths, Tetrahedron,
};

/// Default tolerance (radians) for recognising `l_B = l_E`, `l_C = l_F`.
pub const DEFAULT_Z2_TOL: f64 = 1e-9;

/// Edge lengths of a Z2-symmetric tetrahedron.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Z2Lengths {
    l_a: f64,
    l_b: f64,
    l_c: f64,
    l_d: f64,
}

/// Dihedral angles of a Z2-symmetric tetrahedron (`B = E`, `C = F`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Z2Angles {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Z2Angles {
    pub fn to_dihedral(&self) -> Result<DihedralAngles> {
        DihedralAngles::new([self.a, self.b, self.c, self.d, self.b, self.c])
    }
}

impl Z2Lengths {
    pub fn new(l_a: f64, l_b: f64, l_c: f64, l_d: f64) -> Result<Self> {
        EdgeLengths::new([l_a, l_b, l_c, l_d, l_b, l_c])?;
        Ok(Z2Lengths { l_a, l_b, l_c, l_d })
    }

    pub fn from_array(v: [f64; 4]) -> Result<Self> {
        Self::new(v[0], v[1], v[2], v[3])
    }

    /// The Z2 tetrahedron with the given angles `A, B = E, C = F, D`.
    pub fn from_angles(angles: Z2Angles) -> Result<Self> {
        let l = lengths_from_angles(&angles.to_dihedral()?)?;
        Self::new(
            l.get(Edge::A),
            0.5 * (l.get(Edge::B) + l.get(Edge::E)),
            0.5 * (l.get(Edge::C) + l.get(Edge::F)),
            l.get(Edge::D),
        )
    }

    pub fn l_a(&self) -> f64 {
        self.l_a
    }
    pub fn l_b(&self) -> f64 {
        self.l_b
    }
    pub fn l_c(&self) -> f64 {
        self.l_c
    }
    pub fn l_d(&self) -> f64 {
        self.l_d
    }

    pub fn values(&self) -> [f64; 4] {
        [self.l_a, self.l_b, self.l_c, self.l_d]
    }

    pub fn edge_lengths(&self) -> EdgeLengths {
        EdgeLengths::new([self.l_a, self.l_b, self.l_c, self.l_d, self.l_b, self.l_c])
            .expect("validated at construction")
    }

    pub fn tetrahedron(&self) -> Result<Tetrahedron> {
        Tetrahedron::from_lengths(self.edge_lengths())
    }

    pub fn angles(&self) -> Result<Z2Angles> {
        let t = self.tetrahedron()?;
        Ok(z2_angles_of(&t))
    }

    /// Polar dual, again Z2-symmetric about the same axis.
    pub fn dual(&self) -> Result<Z2Lengths> {
        let a = self.angles()?;
        Z2Lengths::new(PI - a.d, PI - a.b, PI - a.c, PI - a.a)
    }

    pub fn swap_ad(&self) -> Z2Lengths {
        Z2Lengths {
            l_a: self.l_d,
            l_d: self.l_a,
            ..*self
        }
    }

    pub fn swap_bc(&self) -> Z2Lengths {
        Z2Lengths {
            l_b: self.l_c,
            l_c: self.l_b,
            ..*self
        }
    }
}

fn z2_angles_of(t: &Tetrahedron) -> Z2Angles {
    let a = t.angles();
    Z2Angles {
        a: a.get(Edge::A),
        b: 0.5 * (a.get(Edge::B) + a.get(Edge::E)),
        c: 0.5 * (a.get(Edge::C) + a.get(Edge::F)),
        d: a.get(Edge::D),
    }
}

/// Finds a Z2 symmetry axis among the three skew pairs and relabels so that
/// it joins `A` and `D`. Paired lengths are averaged.
///
/// When several axes qualify the one with the largest `|l_B - l_C|` wins,
/// ties going to the earlier of `A/D`, `B/E`, `C/F`.
pub fn detect_z2(lengths: &EdgeLengths, tol: f64) -> Option<Z2Lengths> {
    let l = |e: Edge| lengths.get(e);
    let close = |x: Edge, y: Edge| (l(x) - l(y)).abs() <= tol;
    let mid = |x: Edge, y: Edge| 0.5 * (l(x) + l(y));

    let mut candidates = Vec::new();
    if close(Edge::B, Edge::E) && close(Edge::C, Edge::F) {
        candidates.push([
            l(Edge::A),
            mid(Edge::B, Edge::E),
            mid(Edge::C, Edge::F),
            l(Edge::D),
        ]);
    }
    // axis B/E: new (A..F) = old (B, A, C, E, D, F)
    if close(Edge::A, Edge::D) && close(Edge::C, Edge::F) {
        candidates.push([
            l(Edge::B),
            mid(Edge::A, Edge::D),
            mid(Edge::C, Edge::F),
            l(Edge::E),
        ]);
    }
    // axis C/F: new (A..F) = old (C, A, B, F, D, E)
    if close(Edge::A, Edge::D) && close(Edge::B, Edge::E) {
        candidates.push([
            l(Edge::C),
            mid(Edge::A, Edge::D),
            mid(Edge::B, Edge::E),
            l(Edge::F),
        ]);
    }

    let mut best: Option<[f64; 4]> = None;
    for c in candidates {
        match best {
            Some(b) if (c[1] - c[2]).abs() <= (b[1] - b[2]).abs() => {}
            _ => best = Some(c),
        }
    }
    best.and_then(|v| Z2Lengths::from_array(v).ok())
}

/// Label swaps applied by canonicalisation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Orientation {
    pub swapped_ad: bool,
    pub swapped_bc: bool,
}

/// Orders the labels so that `l_A >= l_D` and `l_B >= l_C`.
pub fn canonicalize(z: &Z2Lengths) -> (Z2Lengths, Orientation) {
    let mut out = *z;
    let mut o = Orientation::default();
    if out.l_a < out.l_d {
        out = out.swap_ad();
        o.swapped_ad = true;
    }
    if out.l_b < out.l_c {
        out = out.swap_bc();
        o.swapped_bc = true;
    }
    (out, o)
}

/// Orders the labels so that `l_A >= l_D` and `B <= C` (by dihedral angle),
/// the normalisation under which the case list and the volume formula are
/// stated.
pub fn canonicalize_by_angles(z: &Z2Lengths) -> Result<(Z2Lengths, Orientation)> {
    let mut out = *z;
    let mut o = Orientation::default();
    if out.l_a < out.l_d {
        out = out.swap_ad();
        o.swapped_ad = true;
    }
    let a = out.angles()?;
    if a.b > a.c {
        out = out.swap_bc();
        o.swapped_bc = true;
    }
    Ok((out, o))
}

/// Derived scalars of a Z2 tetrahedron.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Z2Params {
    /// `cos((l_A + l_D) / 2)`
    pub a_plus: f64,
    /// `cos((l_A - l_D) / 2)`
    pub a_minus: f64,
    pub b: f64,
    pub c: f64,
    /// `cos((A + D) / 2)`
    pub cal_a_plus: f64,
    /// `cos((D - A) / 2)`
    pub cal_a_minus: f64,
    pub cal_b: f64,
    pub cal_c: f64,
    pub l_a_plus: f64,
    pub l_a_minus: f64,
    /// `(A + D) / 2`
    pub half_angle_plus: f64,
    /// `(D - A) / 2`
    pub half_angle_minus: f64,
    pub angles: Z2Angles,
    /// `det G*` from its product factorisation.
    pub delta_star: f64,
    pub u: f64,
    pub v: f64,
    pub t_squared: f64,
    pub tau_squared: f64,
}

/// Tolerance on the agreement of the factored and the eliminated `det G*`.
const DELTA_STAR_TOL: f64 = 1e-10;

pub fn params(z: &Z2Lengths) -> Result<Z2Params> {
    let t = z.tetrahedron()?;
    params_with(z, &t)
}

pub(crate) fn params_with(z: &Z2Lengths, t: &Tetrahedron) -> Result<Z2Params> {
    let l_a_plus = 0.5 * (z.l_a + z.l_d);
    let l_a_minus = 0.5 * (z.l_a - z.l_d);
    let ap = l_a_plus.cos();
    let am = l_a_minus.cos();
    let b = z.l_b.cos();
    let c = z.l_c.cos();

    let delta_star = (ap + am + b + c) * (ap + am - b - c) * (ap - am - b + c) * (ap - am + b - c);
    let det = t.delta_star();
    if (delta_star - det).abs() > DELTA_STAR_TOL {
        return Err(Error::Internal(format!(
            "factored det G* = {delta_star:e} differs from determinant {det:e}"
        )));
    }
    if !(delta_star > PD_TOL) {
        return Err(Error::NotATetrahedron("det G* is not positive".into()));
    }

    let t_squared = 4.0 * (ap * am - b * c) * (ap * b - am * c) * (ap * c - am * b) / delta_star;
    let u_sq = 1.0 - t_squared;
    if !(u_sq > 0.0) {
        return Err(Error::Internal(format!(
            "1 - t^2 = {u_sq:e} is not positive"
        )));
    }
    let u = u_sq.sqrt();

    let angles = z2_angles_of(t);
    let half_angle_plus = 0.5 * (angles.a + angles.d);
    let half_angle_minus = 0.5 * (angles.d - angles.a);
    Ok(Z2Params {
        a_plus: ap,
        a_minus: am,
        b,
        c,
        cal_a_plus: half_angle_plus.cos(),
        cal_a_minus: half_angle_minus.cos(),
        cal_b: angles.b.cos(),
        cal_c: angles.c.cos(),
        l_a_plus,
        l_a_minus,
        half_angle_plus,
        half_angle_minus,
        angles,
        delta_star,
        u,
        v: 1.0 / u,
        t_squared,
        tau_squared: t_squared / u_sq,
    })
}

/// Residual of `u^2 + 4(a+a- - bc)(a+b - a-c)(a+c - a-b)/det G* - 1` with
/// `det G*` taken from elimination rather than the product formula.
pub fn u_quadratic_residual(z: &Z2Lengths) -> Result<f64> {
    let t = z.tetrahedron()?;
    let p = params_with(z, &t)?;
    let (ap, am, b, c) = (p.a_plus, p.a_minus, p.b, p.c);
    let q = 4.0 * (ap * am - b * c) * (ap * b - am * c) * (ap * c - am * b) / t.delta_star();
    Ok(p.u * p.u + q - 1.0)
}

/// `u^2` from cofactors alone: `c*_00 c*_22 / det G*`.
pub fn u_squared_from_cofactors(z: &Z2Lengths) -> Result<f64> {
    let t = z.tetrahedron()?;
    let cof = t.edge_cofactors();
    Ok(cof.get(0, 0) * cof.get(2, 2) / t.delta_star())
}

/// Band within which two quantities count as equal for sign comparisons.
const AD_BAND: f64 = 1e-10;

fn banded_sign(x: f64) -> i8 {
    if x > AD_BAND {
        1
    } else if x < -AD_BAND {
        -1
    } else {
        0
    }
}

/// `sign(l_A - l_D) == -sign(A - D)`, with a zero band on both sides.
pub fn check_ad_ordering(z: &Z2Lengths) -> Result<bool> {
    let a = z.angles()?;
    Ok(banded_sign(z.l_a - z.l_d) == -banded_sign(a.a - a.d))
}

/// Ratios `sin l / sin angle - u` for the pairs `(l_A+, A+)`, `(l_A-, A-)`,
/// `(l_B, B)`, `(l_C, C)`. The second entry is `None` when `|A-|` is too small
/// for the ratio to be meaningful.
pub fn sine_rule_z2_residuals(z: &Z2Lengths) -> Result<[Option<f64>; 4]> {
    let p = params(z)?;
    let minus = if p.half_angle_minus.abs() < 1e-9 {
        None
    } else {
        Some(p.l_a_minus.sin() / p.half_angle_minus.sin() - p.u)
    };
    Ok([
        Some(p.l_a_plus.sin() / p.half_angle_plus.sin() - p.u),
        minus,
        Some(z.l_b.sin() / p.angles.b.sin() - p.u),
        Some(z.l_c.sin() / p.angles.c.sin() - p.u),
    ])
}

/// Residual of `v^2 - 4(A+A- + BC)(A+B + A-C)(A+C + A-B)/det G - 1` in the
/// angle cosines, with `det G` computed by elimination.
pub fn dual_parameter_residual(z: &Z2Lengths) -> Result<f64> {
    let t = z.tetrahedron()?;
    let p = params_with(z, &t)?;
    let (ap, am, b, c) = (p.cal_a_plus, p.cal_a_minus, p.cal_b, p.cal_c);
    let q = 4.0 * (ap * am + b * c) * (ap * b + am * c) * (ap * c + am * b) / t.delta();
    Ok(p.v * p.v - q - 1.0)
}

/// The associated symmetric tetrahedron with cosines `a+/a-`, `b/a-`, `c/a-`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricAssoc {
    pub cos_l_alpha: f64,
    pub cos_l_beta: f64,
    pub cos_l_gamma: f64,
    /// `cos(A+) / cos(A-)` and friends.
    pub cos_alpha: f64,
    pub cos_beta: f64,
    pub cos_gamma: f64,
    pub edge_mat_s: Sym4,
    pub s_star: Sym4,
    pub u_s: f64,
    /// Angle cosines of `G*_s` recovered from its cofactors, in the
    /// order `alpha, beta, gamma`.
    pub cos_from_cofactors: [f64; 3],
}

impl SymmetricAssoc {
    pub fn angle_cosine_residual(&self) -> f64 {
        let want = [self.cos_alpha, self.cos_beta, self.cos_gamma];
        (0..3)
            .map(|k| (want[k] - self.cos_from_cofactors[k]).abs())
            .fold(0.0, f64::max)
    }
}

pub fn associated_symmetric(z: &Z2Lengths) -> Result<SymmetricAssoc> {
    let p = params(z)?;
    associated_symmetric_with(&p)
}

fn associated_symmetric_with(p: &Z2Params) -> Result<SymmetricAssoc> {
    assert!(p.a_minus > 0.0 && p.cal_a_minus > 0.0);
    let a = p.a_plus / p.a_minus;
    let b = p.b / p.a_minus;
    let c = p.c / p.a_minus;
    let m = Sym4::new([
        [1.0, a, b, c],
        [a, 1.0, c, b],
        [b, c, 1.0, a],
        [c, b, a, 1.0],
    ])?;
    if !m.is_positive_definite(PD_TOL) {
        return Err(Error::Internal(
            "associated symmetric edge matrix is not positive definite".into(),
        ));
    }
    let s_star = m.cofactor_matrix();
    let delta_s = m.determinant();
    let u_s_sq = 1.0 - 4.0 * (a - b * c) * (b - a * c) * (c - a * b) / delta_s;
    let angles = normalized_cofactor_angles(&m, Edge::angle_slot, -1.0)?;
    Ok(SymmetricAssoc {
        cos_l_alpha: a,
        cos_l_beta: b,
        cos_l_gamma: c,
        cos_alpha: p.cal_a_plus / p.cal_a_minus,
        cos_beta: p.cal_b / p.cal_a_minus,
        cos_gamma: p.cal_c / p.cal_a_minus,
        edge_mat_s: m,
        s_star,
        u_s: u_s_sq.max(0.0).sqrt(),
        cos_from_cofactors: [
            angles[Edge::A.index()].cos(),
            angles[Edge::B.index()].cos(),
            angles[Edge::C.index()].cos(),
        ],
    })
}

/// Residual of `1 - u^2 - a-^2 (1 - u_s^2)`.
pub fn symmetric_bridge_residual(z: &Z2Lengths) -> Result<f64> {
    let p = params(z)?;
    let s = associated_symmetric_with(&p)?;
    Ok(1.0 - p.u * p.u - p.a_minus * p.a_minus * (1.0 - s.u_s * s.u_s))
}

/// Residuals of `x^2 - t^2 - a-^6 (s*_0k)^2 / det G*` for
/// `(x, k) = (a-, 0), (a+, 1), (b, 2), (c, 3)`.
pub fn sqrt_cofactor_residuals(z: &Z2Lengths) -> Result<[f64; 4]> {
    let p = params(z)?;
    let s = associated_symmetric_with(&p)?;
    let a6 = p.a_minus.powi(6);
    let xs = [p.a_minus, p.a_plus, p.b, p.c];
    let mut out = [0.0; 4];
    for (k, x) in xs.into_iter().enumerate() {
        let s0k = s.s_star.get(0, k);
        out[k] = x * x - p.t_squared - a6 * s0k * s0k / p.delta_star;
    }
    Ok(out)
}

/// Which side of `pi/2` an angle lies on, with a band around `pi/2`
/// counting as both.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Side {
    pub ge: bool,
    pub le: bool,
}

pub(crate) const RIGHT_ANGLE_BAND: f64 = 1e-12;

pub(crate) fn side(angle: f64) -> Side {
    Side {
        ge: angle >= FRAC_PI_2 - RIGHT_ANGLE_BAND,
        le: angle <= FRAC_PI_2 + RIGHT_ANGLE_BAND,
    }
}

/// Angle patterns of the six real-part identities, as `(A+ >= pi/2,
/// B >= pi/2, C >= pi/2)`, together with the signs applied to the terms in
/// `(a+, b, c, a-)`.
pub(crate) const REAL_PART_PATTERNS: [([bool; 3], [f64; 4]); 6] = [
    ([true, true, true], [1.0, 1.0, 1.0, 1.0]),
    ([true, false, true], [-1.0, 1.0, -1.0, -1.0]),
    ([true, false, false], [-1.0, 1.0, 1.0, -1.0]),
    ([false, true, true], [1.0, -1.0, -1.0, -1.0]),
    ([false, false, true], [1.0, 1.0, -1.0, -1.0]),
    ([false, false, false], [1.0, 1.0, 1.0, -1.0]),
];

fn matches_pattern(sides: &[Side; 3], pattern: &[bool; 3]) -> bool {
    sides
        .iter()
        .zip(pattern)
        .all(|(s, &obtuse)| if obtuse { s.ge } else { s.le })
}

/// Real part of `asinh(x / t)` where only `t^2` is known and `t` is taken with
/// non-negative real or imaginary part.
///
/// For `t^2 < 0` the quotient is real, `x / sqrt(-t^2)` up to the factor
/// `-i` absorbed by the branch choice. For `t^2 > 0` the quotient is
/// imaginary relative to the real axis of the identity and only the part
/// of magnitude above one contributes.
pub fn re_asinh_over_t(x: f64, t_squared: f64) -> f64 {
    if t_squared < 0.0 {
        (x / (-t_squared).sqrt()).asinh()
    } else {
        let s = t_squared.sqrt();
        if x.abs() > s {
            x.signum() * (x.abs() / s).acosh()
        } else {
            0.0
        }
    }
}

/// Signed sum of real parts of `asinh(x/t)` over `x = a+, b, c, a-` with the
/// signs of the case the tetrahedron falls in. Vanishes identically.
pub fn real_part_residual(z: &Z2Lengths) -> Result<f64> {
    let (z, _) = canonicalize_by_angles(z)?;
    let p = params(&z)?;
    if p.t_squared.abs() < 1e-14 {
        return Err(Error::TZero {
            t_squared: p.t_squared,
        });
    }
    let sides = [side(p.half_angle_plus), side(p.angles.b), side(p.angles.c)];
    let signs = REAL_PART_PATTERNS
        .iter()
        .find(|(pat, _)| matches_pattern(&sides, pat))
        .map(|(_, s)| *s)
        .ok_or_else(|| Error::Unclassifiable {
            pattern: format!("{sides:?}"),
            t_squared: p.t_squared,
        })?;
    let xs = [p.a_plus, p.b, p.c, p.a_minus];
    Ok(xs
        .iter()
        .zip(signs)
        .map(|(&x, s)| s * re_asinh_over_t(x, p.t_squared))
        .sum())
}
