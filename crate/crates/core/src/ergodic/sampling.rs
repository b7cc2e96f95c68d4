//! Seeded samplers for the Haar measure and the invariant measures.
//!
//! Sample `i` of a run seeded with `s` draws from ChaCha8 seeded with `s` on
//! stream `i`, so results do not depend on how samples are spread over
//! threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Fe, Field};
use crate::laurent::LaurentSeries;

/// The generator for sample `sample_id` of a run.
pub fn rng_for(seed: u64, sample_id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(sample_id);
    rng
}

/// Where a Haar sample lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HaarDomain {
    /// `|x| < 1`
    L,
    /// `|x| = 1`
    J0,
    /// `|x| <= 1`
    O,
}

/// A Haar-random element: every coefficient above `floor` is uniform, and
/// the constant term of a `J_0` sample is uniform on `F_q^*`.
pub fn sample_haar<R: Rng>(field: &Field, domain: HaarDomain, floor: i64, rng: &mut R) -> LaurentSeries {
    let q = field.q();
    let top = match domain {
        HaarDomain::L => -1,
        HaarDomain::J0 | HaarDomain::O => 0,
    };
    let mut coeffs: Vec<Fe> = Vec::with_capacity((top - floor).max(0) as usize);
    for d in (floor + 1..=top).rev() {
        let c = if d == 0 && domain == HaarDomain::J0 {
            rng.gen_range(1..q)
        } else {
            rng.gen_range(0..q)
        };
        coeffs.push(field.elem(c));
    }
    LaurentSeries::new(field, top.max(floor), coeffs, floor).expect("window length matches")
}

/// A level drawn from the marginal of `mu_G`:
/// `P(n) = (q-1)/(2 q^(n+1))` for `n >= 0`, `(q-1)/(2 q^-n)` for `n < 0`.
pub fn sample_level<R: Rng>(q: u32, rng: &mut R) -> i64 {
    let negative = rng.gen_bool(0.5);
    let mut k = 0i64;
    while rng.gen_range(0..q) == 0 {
        k += 1;
    }
    if negative {
        -k - 1
    } else {
        k
    }
}

/// A `mu_A` sample: `L` with probability `q/(2q-1)`, else `J_0`.
pub fn sample_mu_a<R: Rng>(field: &Field, floor: i64, rng: &mut R) -> LaurentSeries {
    let q = field.q();
    let domain = if rng.gen_range(0..2 * q - 1) < q {
        HaarDomain::L
    } else {
        HaarDomain::J0
    };
    sample_haar(field, domain, floor, rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_well_placed() {
        let f3 = Field::prime(3).unwrap();
        let a = sample_haar(&f3, HaarDomain::J0, -20, &mut rng_for(7, 3));
        let b = sample_haar(&f3, HaarDomain::J0, -20, &mut rng_for(7, 3));
        assert_eq!(a, b);
        assert_eq!(a.deg().unwrap(), 0);
        let c = sample_haar(&f3, HaarDomain::J0, -20, &mut rng_for(7, 4));
        assert_ne!(a, c);
        for i in 0..50 {
            let x = sample_haar(&f3, HaarDomain::L, -20, &mut rng_for(1, i));
            assert!(x.ub() < 0);
        }
    }
}
