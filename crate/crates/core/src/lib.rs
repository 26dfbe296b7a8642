//! Volumes of Z2-symmetric tetrahedra in the unit 3-sphere.
//!
//! The volume is assembled from elementary terms and an auxiliary integral
//! `V(l, u)`; two independent estimators (Monte Carlo sampling and numerical
//! integration of the Schläfli differential) are provided for checking.
//!
//! ```
//! use sphervol_core::{volume, Z2Lengths};
//! use std::f64::consts::{FRAC_PI_2, PI};
//!
//! let z = Z2Lengths::new(FRAC_PI_2, FRAC_PI_2, FRAC_PI_2, FRAC_PI_2).unwrap();
//! let r = volume(&z).unwrap();
//! assert!((r.volume - PI * PI / 8.0).abs() < 1e-12);
//! ```

pub mod beta;
pub mod error;
pub mod matrix;
pub mod oracles;
pub mod quad;
pub mod tetra;
pub mod vfunc;
pub mod volume;
pub mod z2;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use matrix::{Lower4, Sym4};
pub use oracles::{mc_volume, schlafli_volume, McEstimate, PathIntegral};
pub use tetra::{
    angles_from_lengths, lengths_from_angles, DihedralAngles, Edge, EdgeLengths, Tetrahedron,
};
pub use vfunc::{v_elementary, v_eval, v_series, VEval, VMethod};
pub use volume::{
    volume, volume_direct, volume_elementary, volume_of_lengths, volume_via_dual, CaseTag,
    VolumePath, VolumeResult,
};
pub use z2::{detect_z2, Z2Angles, Z2Lengths, Z2Params};
