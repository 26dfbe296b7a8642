//! Volume of a Z2-symmetric tetrahedron.
//!
//! For `t^2 <= 0` the volume is `I - H` with
//!
//! ```text
//! H = (pi/2 - A+) l_A+ + (pi/2 - B) l_B + (pi/2 - C) l_C - (pi/2 - A-) l_A-
//! I = sgn(pi/2 - A+) V(l_A+, u) + sgn(pi/2 - B) V(l_B, u)
//!   + sgn(pi/2 - C) V(l_C, u) - V(l_A-, u)
//! ```
//!
//! after ordering labels so that `l_A >= l_D` and `B <= C`. For `t^2 >= 0`
//! the same formula applies to the polar dual, and the Sforza relation
//! `Vol T + Vol T* + (1/2) sum l (pi - angle) = pi^2` recovers `Vol T`.
//! On `t^2 = 0` three elementary closed forms apply.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tetra::{EdgeLengths, Tetrahedron};
use crate::vfunc::v_eval;
use crate::z2::{
    canonicalize_by_angles, detect_z2, params, real_part_residual, side, Orientation, Z2Angles,
    Z2Lengths, Z2Params, RIGHT_ANGLE_BAND,
};

/// `|t^2|` below which the elementary formulas are tried and the direct and
/// dual paths are both admissible.
pub const T2_BAND: f64 = 1e-12;
/// Amount by which `t^2` may contradict a case's forced sign.
pub const T2_CONTRADICTION: f64 = 1e-10;
/// Tolerance on the elementary conditions.
pub const ELEMENTARY_TOL: f64 = 1e-10;
/// Agreement required between several applicable elementary formulas.
pub const ELEMENTARY_AGREEMENT: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CaseTag {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "i*")]
    IStar,
    #[serde(rename = "ii")]
    II,
    #[serde(rename = "iii")]
    III,
    #[serde(rename = "iii*")]
    IIIStar,
    #[serde(rename = "iv")]
    IV,
    #[serde(rename = "v")]
    V,
    #[serde(rename = "v*")]
    VStar,
    #[serde(rename = "vi")]
    VI,
    #[serde(rename = "elementary")]
    Elementary,
}

impl CaseTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::I => "i",
            CaseTag::IStar => "i*",
            CaseTag::II => "ii",
            CaseTag::III => "iii",
            CaseTag::IIIStar => "iii*",
            CaseTag::IV => "iv",
            CaseTag::V => "v",
            CaseTag::VStar => "v*",
            CaseTag::VI => "vi",
            CaseTag::Elementary => "elementary",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VolumePath {
    Direct,
    DualSforza,
    Elementary,
}

impl VolumePath {
    pub fn as_str(self) -> &'static str {
        match self {
            VolumePath::Direct => "direct",
            VolumePath::DualSforza => "dual_sforza",
            VolumePath::Elementary => "elementary",
        }
    }
}

impl fmt::Display for VolumePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VolumeResult {
    pub volume: f64,
    pub case: CaseTag,
    pub path: VolumePath,
    /// `H` of the tetrahedron the formula was applied to (the dual on the
    /// dual path).
    pub h_term: f64,
    /// `I` of the same tetrahedron.
    pub i_term: f64,
    pub t_squared: f64,
    pub u: f64,
    /// Label swaps that put the input into `l_A >= l_D`, `B <= C` order.
    pub orientation: Orientation,
    pub diagnostics: BTreeMap<String, f64>,
}

#[derive(Clone, Copy)]
enum T2Rule {
    NonPositive,
    NonNegative,
    /// The angle pattern itself forces `t^2 >= 0`.
    Forced,
}

/// `(tag, [A+ obtuse, B obtuse, C obtuse], rule)` with `B <= C`.
const CASES: [(CaseTag, [bool; 3], T2Rule); 9] = [
    (CaseTag::I, [true, true, true], T2Rule::NonPositive),
    (CaseTag::IStar, [true, true, true], T2Rule::NonNegative),
    (CaseTag::II, [true, false, true], T2Rule::Forced),
    (CaseTag::III, [true, false, false], T2Rule::NonPositive),
    (CaseTag::IIIStar, [true, false, false], T2Rule::NonNegative),
    (CaseTag::IV, [false, true, true], T2Rule::Forced),
    (CaseTag::V, [false, false, true], T2Rule::NonPositive),
    (CaseTag::VStar, [false, false, true], T2Rule::NonNegative),
    (CaseTag::VI, [false, false, false], T2Rule::Forced),
];

/// Case of the tetrahedron from the position of `(A + D)/2`, `B`, `C`
/// relative to `pi/2` and the sign of `t^2`. Angles within
/// [`RIGHT_ANGLE_BAND`] of `pi/2` may fall on either side, whichever agrees
/// with `t^2`. The labels `B`, `C` are taken in increasing order.
pub fn classify(p: &Z2Params) -> Result<CaseTag> {
    let t2 = p.t_squared;
    if t2.abs() < T2_BAND {
        return Ok(CaseTag::Elementary);
    }
    let (lo, hi) = if p.angles.b <= p.angles.c {
        (p.angles.b, p.angles.c)
    } else {
        (p.angles.c, p.angles.b)
    };
    let sides = [side(p.half_angle_plus), side(lo), side(hi)];
    for (tag, pattern, rule) in CASES {
        let fits = sides
            .iter()
            .zip(pattern)
            .all(|(s, obtuse)| if obtuse { s.ge } else { s.le });
        if !fits {
            continue;
        }
        let ok = match rule {
            T2Rule::NonPositive => t2 <= T2_BAND,
            T2Rule::NonNegative => t2 >= -T2_BAND,
            T2Rule::Forced => t2 >= -T2_CONTRADICTION,
        };
        if ok {
            return Ok(tag);
        }
    }
    Err(Error::Unclassifiable {
        pattern: format!(
            "(A+ - pi/2, B - pi/2, C - pi/2) = ({:+.3e}, {:+.3e}, {:+.3e})",
            p.half_angle_plus - FRAC_PI_2,
            lo - FRAC_PI_2,
            hi - FRAC_PI_2
        ),
        t_squared: t2,
    })
}

fn sgn(x: f64) -> f64 {
    if x.abs() <= RIGHT_ANGLE_BAND {
        0.0
    } else {
        x.signum()
    }
}

/// `H` for labels with `l_A >= l_D`.
pub fn h_term(z: &Z2Lengths, angles: &Z2Angles) -> f64 {
    let l_plus = 0.5 * (z.l_a() + z.l_d());
    let l_minus = 0.5 * (z.l_a() - z.l_d());
    let a_plus = 0.5 * (angles.a + angles.d);
    let a_minus = 0.5 * (angles.d - angles.a);
    (FRAC_PI_2 - a_plus) * l_plus
        + (FRAC_PI_2 - angles.b) * z.l_b()
        + (FRAC_PI_2 - angles.c) * z.l_c()
        - (FRAC_PI_2 - a_minus) * l_minus
}

/// `I` for labels with `l_A >= l_D`, with its accumulated quadrature error
/// estimate.
pub fn i_term(z: &Z2Lengths, p: &Z2Params) -> Result<(f64, f64)> {
    let u = p.u;
    let terms = [
        (sgn(FRAC_PI_2 - p.half_angle_plus), p.l_a_plus),
        (sgn(FRAC_PI_2 - p.angles.b), z.l_b()),
        (sgn(FRAC_PI_2 - p.angles.c), z.l_c()),
        (-1.0, p.l_a_minus),
    ];
    let mut value = 0.0;
    let mut err = 0.0;
    for (s, ell) in terms {
        if s == 0.0 {
            continue;
        }
        let v = v_eval(ell, u)?;
        value += s * v.value;
        err += v.est_error;
    }
    Ok((value, err))
}

fn check_range(volume: f64) -> Result<()> {
    if !(volume > 0.0 && volume < 2.0 * PI * PI) {
        return Err(Error::Internal(format!(
            "volume {volume} outside (0, 2 pi^2)"
        )));
    }
    Ok(())
}

/// `Vol = I - H`, valid for `t^2 <= 0`.
pub fn volume_direct(z: &Z2Lengths) -> Result<VolumeResult> {
    let (c, orientation) = canonicalize_by_angles(z)?;
    let p = params(&c)?;
    if p.t_squared > T2_BAND {
        return Err(Error::WrongRegime {
            t_squared: p.t_squared,
        });
    }
    let case = classify(&p)?;
    let h = h_term(&c, &p.angles);
    let (i, i_err) = i_term(&c, &p)?;
    let volume = i - h;
    check_range(volume)?;

    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("i_term_error".into(), i_err);
    if let Ok(r) = real_part_residual(&c) {
        diagnostics.insert("real_part_residual".into(), r);
    }
    Ok(VolumeResult {
        volume,
        case,
        path: VolumePath::Direct,
        h_term: h,
        i_term: i,
        t_squared: p.t_squared,
        u: p.u,
        orientation,
        diagnostics,
    })
}

/// `(1/2) sum over the six edges of l (pi - angle)` for a Z2 tetrahedron.
fn sforza_sum(z: &Z2Lengths, a: &Z2Angles) -> f64 {
    0.5 * (z.l_a() * (PI - a.a)
        + z.l_d() * (PI - a.d)
        + 2.0 * z.l_b() * (PI - a.b)
        + 2.0 * z.l_c() * (PI - a.c))
}

/// Volume through the polar dual, valid for `t^2 >= 0`.
pub fn volume_via_dual(z: &Z2Lengths) -> Result<VolumeResult> {
    let (c, orientation) = canonicalize_by_angles(z)?;
    let p = params(&c)?;
    if p.t_squared < -T2_BAND {
        return Err(Error::WrongRegime {
            t_squared: p.t_squared,
        });
    }
    let case = classify(&p)?;
    let dual = c.dual()?;
    let d = volume_direct(&dual)?;
    let edge_sum = sforza_sum(&c, &p.angles);
    let volume = PI * PI - d.volume - edge_sum;
    check_range(volume)?;

    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("dual_volume".into(), d.volume);
    diagnostics.insert("dual_t_squared".into(), d.t_squared);
    diagnostics.insert("sforza_edge_sum".into(), edge_sum);
    for (k, v) in d.diagnostics {
        diagnostics.insert(format!("dual_{k}"), v);
    }
    Ok(VolumeResult {
        volume,
        case,
        path: VolumePath::DualSforza,
        h_term: d.h_term,
        i_term: d.i_term,
        t_squared: p.t_squared,
        u: p.u,
        orientation,
        diagnostics,
    })
}

/// Residuals `a+ a- - bc`, `b a- - a+ c`, `c a- - a+ b` of the three
/// elementary conditions.
pub fn elementary_conditions(p: &Z2Params) -> [f64; 3] {
    [
        p.a_plus * p.a_minus - p.b * p.c,
        p.b * p.a_minus - p.a_plus * p.c,
        p.c * p.a_minus - p.a_plus * p.b,
    ]
}

/// The elementary formulas, one per condition.
pub fn elementary_formulas(z: &Z2Lengths) -> [f64; 3] {
    let (a, b, c, d) = (z.l_a(), z.l_b(), z.l_c(), z.l_d());
    [
        0.5 * (-a * a / 2.0 + b * b + c * c - d * d / 2.0),
        0.5 * (a * d - b * b + c * c),
        0.5 * (a * d + b * b - c * c),
    ]
}

/// Closed-form volume when one of the elementary conditions holds.
pub fn volume_elementary(z: &Z2Lengths) -> Result<VolumeResult> {
    let (c, orientation) = canonicalize_by_angles(z)?;
    let p = params(&c)?;
    let conds = elementary_conditions(&p);
    let formulas = elementary_formulas(&c);
    let values: Vec<f64> = (0..3)
        .filter(|&k| conds[k].abs() <= ELEMENTARY_TOL)
        .map(|k| formulas[k])
        .collect();
    let Some(&volume) = values.first() else {
        return Err(Error::NotElementary);
    };
    if values
        .iter()
        .any(|v| (v - volume).abs() > ELEMENTARY_AGREEMENT)
    {
        return Err(Error::ElementaryMismatch(values));
    }
    check_range(volume)?;

    let h = h_term(&c, &p.angles);
    let (i, _) = i_term(&c, &p)?;
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("direct_formula_volume".into(), i - h);
    diagnostics.insert("formulas_applied".into(), values.len() as f64);
    for (k, r) in conds.iter().enumerate() {
        diagnostics.insert(format!("condition_{}", k + 1), *r);
    }
    Ok(VolumeResult {
        volume,
        case: CaseTag::Elementary,
        path: VolumePath::Elementary,
        h_term: h,
        i_term: i,
        t_squared: p.t_squared,
        u: p.u,
        orientation,
        diagnostics,
    })
}

/// Volume by whichever formula applies to the sign of `t^2`.
pub fn volume(z: &Z2Lengths) -> Result<VolumeResult> {
    let p = params(z)?;
    if p.t_squared.abs() < T2_BAND {
        match volume_elementary(z) {
            Err(Error::NotElementary) => {}
            other => return other,
        }
    }
    if p.t_squared <= 0.0 {
        volume_direct(z)
    } else {
        volume_via_dual(z)
    }
}

/// Volume of a general tetrahedron that is Z2-symmetric about one of its
/// skew-edge pairs to within `tol`.
pub fn volume_of_lengths(lengths: &EdgeLengths, tol: f64) -> Result<VolumeResult> {
    let z = detect_z2(lengths, tol).ok_or(Error::NotZ2 { tol })?;
    volume(&z)
}

/// `vol + vol_dual + (1/2) sum l (pi - angle) - pi^2`.
pub fn sforza_residual(t: &Tetrahedron, vol: f64, vol_dual: f64) -> f64 {
    vol + vol_dual + 0.5 * t.sforza_edge_sum() - PI * PI
}

/// Fixed generic direction in `(A, B, C, D)` angle space used by
/// [`schlafli_gradient_residual`].
pub const GRADIENT_DIRECTION: [f64; 4] = [0.41, -0.53, 0.29, 0.68];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchlafliProbe {
    /// `Vol(angles + step * dir) - Vol(angles)`
    pub delta_volume: f64,
    /// `(1/2)(l_A dA + 2 l_B dB + 2 l_C dC + l_D dD)` at the base point.
    pub predicted: f64,
    pub abs_error: f64,
}

/// Forward-difference probe of `dVol = (1/2) sum l d(angle)` along `dir`
/// (normalised internally) in `(A, B, C, D)` angle space.
pub fn schlafli_probe(z: &Z2Lengths, dir: [f64; 4], step: f64) -> Result<SchlafliProbe> {
    let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(norm > 0.0) || !(step > 0.0) {
        return Err(Error::InvalidArgument(
            "direction must be non-zero and step positive".into(),
        ));
    }
    let d: [f64; 4] = std::array::from_fn(|k| step * dir[k] / norm);
    let a0 = z.angles()?;
    let a1 = Z2Angles {
        a: a0.a + d[0],
        b: a0.b + d[1],
        c: a0.c + d[2],
        d: a0.d + d[3],
    };
    let z1 = Z2Lengths::from_angles(a1)?;
    let v0 = volume(z)?;
    let v1 = volume(&z1)?;
    if v0.case != v1.case || v0.path != v1.path {
        return Err(Error::CaseBoundary {
            from: format!("{}/{}", v0.case, v0.path),
            to: format!("{}/{}", v1.case, v1.path),
        });
    }
    let predicted =
        0.5 * (z.l_a() * d[0] + 2.0 * z.l_b() * d[1] + 2.0 * z.l_c() * d[2] + z.l_d() * d[3]);
    let delta_volume = v1.volume - v0.volume;
    Ok(SchlafliProbe {
        delta_volume,
        predicted,
        abs_error: (delta_volume - predicted).abs(),
    })
}

/// `|dVol - (1/2) sum l d(angle)| / step` along [`GRADIENT_DIRECTION`].
pub fn schlafli_gradient_residual(z: &Z2Lengths, step: f64) -> Result<f64> {
    Ok(schlafli_probe(z, GRADIENT_DIRECTION, step)?.abs_error / step)
}
