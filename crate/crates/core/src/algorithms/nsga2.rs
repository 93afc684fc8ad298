use rand::seq::SliceRandom;
use rand::Rng;

use super::{mutate_bits, one_point_crossover, GaParams, KernelError};
use crate::classifier::{evaluate_solution, TrainConfig};
use crate::dataset::Shard;
use crate::mo::ns_select;
use crate::solution::{KeySource, Population, Solution};

/// One NSGA-II generation: shuffle-pair parents, one-point crossover,
/// bit-flip mutation, evaluate the offspring on the shard, then keep the
/// best `|pop|` of parents plus offspring.
pub fn nsga2_generation<R: Rng + ?Sized>(
    pop: Population,
    params: &GaParams,
    shard: &Shard<'_>,
    cfg: &TrainConfig,
    keys: &mut KeySource,
    rng: &mut R,
) -> Result<Population, KernelError> {
    let n = pop.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mut offspring = Vec::with_capacity(n);
    let mut pair = 0;
    while offspring.len() < n {
        let a = &pop[order[(2 * pair) % n]];
        let b = &pop[order[(2 * pair + 1) % n]];
        pair += 1;
        let (c1, c2) = one_point_crossover(&a.mask, &b.mask, params.pc, rng)?;
        for child in [c1, c2] {
            if offspring.len() == n {
                break;
            }
            let mut mask = mutate_bits(child, params.pm, rng);
            mask.repair(rng);
            let sol = evaluate_solution(Solution::new(keys.fresh(), mask), shard, cfg)?;
            offspring.push(sol);
        }
    }

    let mut combined = offspring;
    combined.extend(pop);
    Ok(ns_select(&combined, n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::evaluate_missing;
    use crate::dataset::synthetic;
    use crate::mask::FeatureMask;
    use crate::rng::stream;

    fn setup(seed: u64) -> (crate::dataset::Dataset, Population) {
        let ds = synthetic::planted_subset(120, 8, &[0, 1], 0.1, seed);
        let mut rng = stream(seed, &[9]);
        let pop = (0..10)
            .map(|k| {
                let mut m = FeatureMask::random(8, &mut rng);
                m.repair(&mut rng);
                Solution::new(k, m)
            })
            .collect();
        (ds, pop)
    }

    #[test]
    fn size_and_extremes_preserved() {
        for seed in 0..5 {
            let (ds, pop) = setup(seed);
            let shard = Shard::full(&ds);
            let cfg = TrainConfig::default();
            let mut pop = evaluate_missing(pop, &shard, &cfg).unwrap();
            let mut keys = KeySource::after(&pop);
            let mut rng = stream(seed, &[1]);
            for _ in 0..5 {
                let max_auc = pop.iter().filter_map(Solution::auc).fold(0.0, f64::max);
                let min_card = pop.iter().filter_map(Solution::cardinality).fold(1.0, f64::min);
                pop = nsga2_generation(pop, &GaParams::default(), &shard, &cfg, &mut keys, &mut rng).unwrap();
                assert_eq!(pop.len(), 10);
                assert!(pop.iter().all(|s| !s.mask.is_all_zero()));
                assert!(pop.iter().filter_map(Solution::auc).fold(0.0, f64::max) >= max_auc);
                assert!(pop.iter().filter_map(Solution::cardinality).fold(1.0, f64::min) <= min_card);
            }
        }
    }

    #[test]
    fn no_variation_only_reselects_parents() {
        let (ds, pop) = setup(7);
        let shard = Shard::full(&ds);
        let cfg = TrainConfig::default();
        let pop = evaluate_missing(pop, &shard, &cfg).unwrap();
        let mut keys = KeySource::after(&pop);
        let mut rng = stream(7, &[2]);
        let params = GaParams { pc: 0.0, pm: 0.0 };
        let out = nsga2_generation(pop.clone(), &params, &shard, &cfg, &mut keys, &mut rng).unwrap();
        // offspring are exact copies, so every survivor's objectives and mask already exist
        for s in &out {
            assert!(pop.iter().any(|p| p.mask == s.mask && p.objectives() == s.objectives()));
        }
        let best = |p: &Population| p.iter().filter_map(Solution::auc).fold(0.0, f64::max);
        assert_eq!(best(&out), best(&pop));
    }
}
