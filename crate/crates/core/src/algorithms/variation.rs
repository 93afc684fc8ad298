use rand::Rng;

use super::KernelError;
use crate::mask::FeatureMask;

/// Swap the suffixes of two parents starting at `cut`.
pub fn crossover_at(p1: &FeatureMask, p2: &FeatureMask, cut: usize) -> (FeatureMask, FeatureMask) {
    let (a, b) = (p1.bits(), p2.bits());
    let c1 = a[..cut].iter().chain(&b[cut..]).copied().collect();
    let c2 = b[..cut].iter().chain(&a[cut..]).copied().collect();
    (FeatureMask::new(c1), FeatureMask::new(c2))
}

/// With probability `pc`, cut at a uniform point in `[1, n-1]` and swap
/// suffixes; otherwise return copies of the parents.
pub fn one_point_crossover<R: Rng + ?Sized>(
    p1: &FeatureMask,
    p2: &FeatureMask,
    pc: f64,
    rng: &mut R,
) -> Result<(FeatureMask, FeatureMask), KernelError> {
    if p1.len() != p2.len() {
        return Err(KernelError::Shape(format!(
            "parents have lengths {} and {}",
            p1.len(),
            p2.len()
        )));
    }
    if p1.len() < 2 || !rng.gen_bool(pc) {
        return Ok((p1.clone(), p2.clone()));
    }
    let cut = rng.gen_range(1..p1.len());
    Ok(crossover_at(p1, p2, cut))
}

/// Flip each gene independently with probability `pm`.
pub fn mutate_bits<R: Rng + ?Sized>(mut bits: FeatureMask, pm: f64, rng: &mut R) -> FeatureMask {
    if pm > 0.0 {
        for b in bits.bits_mut() {
            if rng.gen_bool(pm) {
                *b = !*b;
            }
        }
    }
    bits
}
