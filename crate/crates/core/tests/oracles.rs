mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sphervol_core::{mc_volume, schlafli_volume, volume, EdgeLengths, Z2Lengths};

#[test]
fn mc_unbiased_over_seeds() {
    let z = Z2Lengths::new(2.1, 1.2, 1.9, 0.9).unwrap();
    let v = volume(&z).unwrap().volume;
    let inside = (0..20)
        .filter(|&seed| {
            mc_volume(&z.edge_lengths(), 200_000, seed)
                .unwrap()
                .brackets(v, 3.0)
        })
        .count();
    assert!(inside >= 19, "{inside} of 20");
}

#[test]
fn oracles_agree_without_the_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for k in 0..10 {
        let z = common::random_z2(&mut rng);
        let s = schlafli_volume(&z, 2_000).unwrap();
        let mc = mc_volume(&z.edge_lengths(), 1_000_000, 100 + k).unwrap();
        assert!(
            (s.volume - mc.volume).abs() <= 3.0 * mc.std_error + 1e-5,
            "{:?}: {s:?} vs {mc:?}",
            z.values()
        );
    }
}

#[test]
fn mc_elementary_value() {
    let third = PI / 3.0;
    let l = EdgeLengths::new([third, FRAC_PI_2, FRAC_PI_2, third, FRAC_PI_2, FRAC_PI_2]).unwrap();
    let e = mc_volume(&l, 2_000_000, 5).unwrap();
    assert!(e.brackets(PI * PI / 18.0, 3.0), "{e:?}");
}

#[test]
fn mc_rejects_invalid_lengths() {
    assert!(EdgeLengths::new([3.0, 3.0, 3.0, 3.0, 3.0, 3.0]).is_err());
}

#[test]
fn straight_paths_stay_in_domain() {
    // Targets are validated on construction, so the error can only come
    // from an interior point of the path. None turns up on random targets
    // up to the boundary of the valid region.
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let mut tried = 0;
    while tried < 2_000 {
        let v: [f64; 4] = std::array::from_fn(|_| rng.random_range(0.01..PI - 0.01));
        let Ok(z) = Z2Lengths::from_array(v) else {
            continue;
        };
        if let Err(e) = schlafli_volume(&z, 100) {
            panic!("{v:?}: {e}");
        }
        tried += 1;
    }
}
