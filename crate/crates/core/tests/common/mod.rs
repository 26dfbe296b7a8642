#![allow(dead_code)]

use std::f64::consts::PI;

use rand::Rng;
use sphervol_core::z2::params;
use sphervol_core::Z2Lengths;

/// Smallest `det G*` and `det G` accepted from the sampler. Below this the
/// identities are still true but rounding in the cofactors dominates the
/// residuals.
pub const MIN_DET: f64 = 1e-3;

/// Z2 lengths uniform in `(0.1, pi - 0.1)`, rejected until the tetrahedron
/// exists with both determinants above [`MIN_DET`].
pub fn random_z2(rng: &mut impl Rng) -> Z2Lengths {
    loop {
        let v: [f64; 4] = std::array::from_fn(|_| rng.random_range(0.1..PI - 0.1));
        let Ok(z) = Z2Lengths::from_array(v) else {
            continue;
        };
        let Ok(t) = z.tetrahedron() else { continue };
        if t.delta_star() > MIN_DET && t.delta() > MIN_DET {
            return z;
        }
    }
}

/// As [`random_z2`], additionally requiring `t^2` to have the given sign
/// with `|t^2| > 1e-3`.
pub fn random_z2_with_sign(rng: &mut impl Rng, negative: bool) -> Z2Lengths {
    loop {
        let z = random_z2(rng);
        let t2 = params(&z).unwrap().t_squared;
        if t2.abs() > 1e-3 && (t2 < 0.0) == negative {
            return z;
        }
    }
}

/// Proptest strategy over valid Z2 lengths with both determinants above
/// [`MIN_DET`].
pub fn z2_strategy() -> impl proptest::strategy::Strategy<Value = Z2Lengths> {
    use proptest::prelude::*;
    proptest::array::uniform4(0.1..PI - 0.1).prop_filter_map(
        "not a well-conditioned tetrahedron",
        |v| {
            let z = Z2Lengths::from_array(v).ok()?;
            let t = z.tetrahedron().ok()?;
            (t.delta_star() > MIN_DET && t.delta() > MIN_DET).then_some(z)
        },
    )
}

/// Proptest strategy over general edge lengths with both determinants above
/// [`MIN_DET`].
pub fn lengths_strategy() -> impl proptest::strategy::Strategy<Value = sphervol_core::EdgeLengths> {
    use proptest::prelude::*;
    proptest::array::uniform6(0.1..PI - 0.1).prop_filter_map("not a tetrahedron", |v| {
        let l = sphervol_core::EdgeLengths::new(v).ok()?;
        let t = sphervol_core::Tetrahedron::from_lengths(l).ok()?;
        (t.delta_star() > MIN_DET && t.delta() > MIN_DET).then_some(l)
    })
}
