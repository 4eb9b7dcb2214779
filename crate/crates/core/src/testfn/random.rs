use num_complex::Complex64;
use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Bump, TestFunction};
use crate::minkowski::FourVector;
use crate::Error;

/// Parameters of a randomized family of test functions, each a sum of
/// `terms` random bumps.
///
/// A single bump is a fixed spinor times a real profile. For such a function
/// the conjugate pairing `(f̄, f)` takes the same value in every state built
/// from Fermi occupations, so thermal effects need `terms ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BumpFamily {
    /// Required distance of every support box from the cone boundary.
    pub margin: f64,
    pub time_range: [f64; 2],
    /// Bound on each spatial center coordinate.
    pub spatial_range: f64,
    pub half_width_range: [f64; 2],
    pub terms: usize,
}

impl Default for BumpFamily {
    fn default() -> Self {
        BumpFamily { margin: 0.2, time_range: [1.5, 3.0], spatial_range: 0.4, half_width_range: [0.25, 0.5], terms: 1 }
    }
}

impl BumpFamily {
    /// Small two-term functions close to the tip of the cone, where the
    /// Hot Bang temperature is highest.
    pub fn near_apex() -> Self {
        BumpFamily { margin: 0.02, time_range: [0.25, 0.35], spatial_range: 0.02, half_width_range: [0.05, 0.08], terms: 2 }
    }

    pub fn validate(&self) -> Result<(), Error> {
        let [t0, t1] = self.time_range;
        let [r0, r1] = self.half_width_range;
        let ok = self.margin > 0.0
            && t0 < t1
            && self.spatial_range >= 0.0
            && 0.0 < r0
            && r0 <= r1
            && self.terms >= 1
            && t1 - r0 - 3f64.sqrt() * r0 > self.margin;
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("bump family cannot produce valid functions: {self:?}")))
        }
    }
}

fn sample_bump<R: Rng>(rng: &mut R, fam: &BumpFamily) -> Bump {
    loop {
        let t = rng.random_range(fam.time_range[0]..=fam.time_range[1]);
        let s = fam.spatial_range;
        let center = FourVector::new(
            t,
            rng.random_range(-s..=s),
            rng.random_range(-s..=s),
            rng.random_range(-s..=s),
        );
        let hw = std::array::from_fn(|_| rng.random_range(fam.half_width_range[0]..=fam.half_width_range[1]));
        let amp = [
            Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)),
            Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)),
        ];
        if amp.iter().map(|a| a.norm_sqr()).sum::<f64>() < 0.05 {
            continue;
        }
        if let Ok(b) = Bump::new(center, hw, amp, Complex64::new(1.0, 0.0)) {
            if b.cone_margin() >= fam.margin {
                return b;
            }
        }
    }
}

/// One random test function from `fam`, reproducible from `seed`.
pub fn random_test_function(seed: u64, fam: &BumpFamily) -> Result<TestFunction, Error> {
    fam.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    TestFunction::new((0..fam.terms).map(|_| sample_bump(&mut rng, fam)).collect())
}

/// `count` functions seeded by `seed, seed+1, …`.
pub fn random_family(seed: u64, count: usize, fam: &BumpFamily) -> Result<Vec<TestFunction>, Error> {
    (0..count as u64).map(|k| random_test_function(seed.wrapping_add(k), fam)).collect()
}
