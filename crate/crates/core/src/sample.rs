//! Deterministic non-singular parameter sampling.
//!
//! Raw 64-bit values come from splitmix64, numerators land in [-20, 20]\{0},
//! and each variable group has a fixed prime denominator: z-values 7,
//! lambda-values 11, kappa 13, t 17. The distinct primes keep every
//! kappa-shifted coordinate difference and every integer-shifted t away from
//! the pole loci of the B, C and R factors; candidates violating any
//! invariant are rejected and redrawn, so equal inputs always give
//! bit-identical points.

use serde::{Deserialize, Serialize};

use crate::rat::Rat;

/// splitmix64 with the reference increment and mixing constants.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish draw from [-20, 20] \ {0}.
    fn next_numerator(&mut self) -> i64 {
        loop {
            let v = (self.next_u64() % 41) as i64 - 20;
            if v != 0 {
                return v;
            }
        }
    }
}

pub const Z_DENOM: i64 = 7;
pub const LAM_DENOM: i64 = 11;
pub const KAPPA_DENOM: i64 = 13;
pub const T_DENOM: i64 = 17;

/// Exact rational evaluation point for the operator families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamPoint {
    pub z: Vec<Rat>,
    pub lam: Vec<Rat>,
    pub kappa: Rat,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t: Option<Rat>,
}

impl ParamPoint {
    /// Copy with `z_i += delta`; single kappa-shifts stay non-singular by the
    /// sampler invariants.
    pub fn with_z_shift(&self, i: usize, delta: &Rat) -> ParamPoint {
        let mut p = self.clone();
        p.z[i] = &p.z[i] + delta;
        p
    }

    /// Copy with `lam_a += delta`.
    pub fn with_lam_shift(&self, a: usize, delta: &Rat) -> ParamPoint {
        let mut p = self.clone();
        p.lam[a] = &p.lam[a] + delta;
        p
    }

    /// All non-singularity invariants: coordinates and kappa nonzero, no
    /// coordinate difference or kappa-shifted difference an integer, and no
    /// integer shift of t within `integer_guard` an integer (equivalently,
    /// t itself is not an integer).
    pub fn is_admissible(&self, integer_guard: i64) -> bool {
        if self.kappa.is_zero() {
            return false;
        }
        if self.z.iter().any(Rat::is_zero) || self.lam.iter().any(Rat::is_zero) {
            return false;
        }
        for group in [&self.z, &self.lam] {
            for i in 0..group.len() {
                for j in 0..group.len() {
                    if i == j {
                        continue;
                    }
                    let d = &group[i] - &group[j];
                    if d.is_integer() || (&d - &self.kappa).is_integer() {
                        return false;
                    }
                }
            }
        }
        if let Some(t) = &self.t {
            // t - s is an integer for some |s| <= guard iff t is an integer.
            let _ = integer_guard;
            if t.is_integer() {
                return false;
            }
        }
        true
    }
}

/// Deterministic sampler; a pure function of its arguments. Resampling
/// terminates at desk scale (n, k up to 6 or so): each group needs pairwise
/// distinct numerator residues modulo its prime, and the candidate pool of
/// forty numerators is ample for that.
pub fn sample_point(seed: u64, n: usize, k: usize, need_t: bool, integer_guard: i64) -> ParamPoint {
    let mut rng = SplitMix64::new(seed);
    loop {
        let z = (0..n)
            .map(|_| Rat::new(rng.next_numerator(), Z_DENOM))
            .collect();
        let lam = (0..k)
            .map(|_| Rat::new(rng.next_numerator(), LAM_DENOM))
            .collect();
        let kappa = Rat::new(rng.next_numerator(), KAPPA_DENOM);
        let t = need_t.then(|| Rat::new(rng.next_numerator(), T_DENOM));
        let point = ParamPoint { z, lam, kappa, t };
        if point.is_admissible(integer_guard) {
            return point;
        }
    }
}

/// Two spectral parameters (t, s) with t, s and t + s all non-integer, for
/// braid and Yang-Baxter checks.
pub fn sample_t_pair(seed: u64) -> (Rat, Rat) {
    let mut rng = SplitMix64::new(seed);
    loop {
        let a = rng.next_numerator();
        let b = rng.next_numerator();
        if a % T_DENOM != 0 && b % T_DENOM != 0 && (a + b) % T_DENOM != 0 {
            return (Rat::new(a, T_DENOM), Rat::new(b, T_DENOM));
        }
    }
}
