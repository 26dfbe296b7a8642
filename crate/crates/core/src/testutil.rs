use rand::Rng;

use crate::tetra::{EdgeLengths, Tetrahedron};
use crate::z2::Z2Lengths;

/// Random non-degenerate tetrahedron: lengths uniform in `(0.1, pi - 0.1)`,
/// rejected until both matrices have determinant above `1e-3`.
pub fn random_tetrahedron(rng: &mut impl Rng) -> Tetrahedron {
    let pi = std::f64::consts::PI;
    loop {
        let v: [f64; 6] = std::array::from_fn(|_| rng.random_range(0.1..pi - 0.1));
        let Ok(l) = EdgeLengths::new(v) else { continue };
        let Ok(t) = Tetrahedron::from_lengths(l) else {
            continue;
        };
        if t.delta_star() > 1e-3 && t.delta() > 1e-3 {
            return t;
        }
    }
}

pub fn random_z2(rng: &mut impl Rng) -> Z2Lengths {
    let pi = std::f64::consts::PI;
    loop {
        let v: [f64; 4] = std::array::from_fn(|_| rng.random_range(0.1..pi - 0.1));
        let Ok(z) = Z2Lengths::from_array(v) else {
            continue;
        };
        let Ok(t) = z.tetrahedron() else { continue };
        if t.delta_star() > 1e-3 && t.delta() > 1e-3 {
            return z;
        }
    }
}
