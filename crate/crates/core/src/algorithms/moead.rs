use std::collections::BTreeSet;

use rand::Rng;

use super::{mutate_bits, one_point_crossover, GaParams, KernelError};
use crate::classifier::{evaluate_solution, TrainConfig};
use crate::dataset::Shard;
use crate::mo::{non_dominated, ns_select, MoError};
use crate::solution::{KeySource, ObjectivePair, Population, Solution};

/// Decomposition state of one island.
#[derive(Clone, Debug, PartialEq)]
pub struct MoeadState {
    pub weights: Vec<[f64; 2]>,
    pub neighborhoods: Vec<Vec<usize>>,
    /// Best value seen per objective in the minimization image.
    pub ideal: [f64; 2],
    /// Mutually non-dominated archive.
    pub archive: Population,
    pub t_size: usize,
}

impl MoeadState {
    /// Weights and neighbourhoods for `pop.len()` subproblems. The ideal
    /// point and the archive start from the evaluated initial population.
    pub fn new(pop: &Population, t_size: usize) -> Result<Self, KernelError> {
        let weights = uniform_weights(pop.len())?;
        let neighborhoods = neighborhoods(&weights, t_size)?;
        let mut ideal = [f64::INFINITY; 2];
        for s in pop {
            let f = s.objectives().ok_or(MoError::Unevaluated { key: s.key })?;
            ideal = update_ideal(ideal, &f);
        }
        Ok(Self {
            weights,
            neighborhoods,
            ideal,
            archive: non_dominated(pop)?,
            t_size,
        })
    }
}

/// `n` evenly spaced weight vectors `(i/(n-1), 1 - i/(n-1))`.
pub fn uniform_weights(n: usize) -> Result<Vec<[f64; 2]>, KernelError> {
    if n < 2 {
        return Err(KernelError::Shape(format!("need at least 2 weight vectors, got {n}")));
    }
    let last = (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            let a = i as f64 / last;
            [a, 1.0 - a]
        })
        .collect())
}

/// For every weight, the `t` nearest weights by Euclidean distance,
/// itself included; ties go to the lower index.
pub fn neighborhoods(weights: &[[f64; 2]], t: usize) -> Result<Vec<Vec<usize>>, KernelError> {
    if t == 0 || t > weights.len() {
        return Err(KernelError::Shape(format!(
            "neighbourhood size {t} must lie in 1..={}",
            weights.len()
        )));
    }
    Ok(weights
        .iter()
        .map(|w| {
            let mut order: Vec<(f64, usize)> = weights
                .iter()
                .enumerate()
                .map(|(j, o)| (((w[0] - o[0]).powi(2) + (w[1] - o[1]).powi(2)).sqrt(), j))
                .collect();
            order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            order.into_iter().take(t).map(|(_, j)| j).collect()
        })
        .collect())
}

/// Weighted Tchebycheff distance of `f`'s minimization image from `ideal`.
pub fn tchebycheff(f: &ObjectivePair, lambda: &[f64; 2], ideal: &[f64; 2]) -> f64 {
    let img = f.min_image();
    (0..2)
        .map(|i| lambda[i] * (img[i] - ideal[i]).abs())
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn update_ideal(ideal: [f64; 2], f: &ObjectivePair) -> [f64; 2] {
    let img = f.min_image();
    [ideal[0].min(img[0]), ideal[1].min(img[1])]
}

/// Replace every neighbour of `idx` that `y` scores at least as well on,
/// each with its own fresh-keyed copy of `y`.
pub fn neighbor_update(
    pop: &mut Population,
    idx: usize,
    y: &Solution,
    state: &MoeadState,
    keys: &mut KeySource,
) -> Result<(), KernelError> {
    let fy = y.objectives().ok_or(MoError::Unevaluated { key: y.key })?;
    for &j in &state.neighborhoods[idx] {
        let fj = pop[j].objectives().ok_or(MoError::Unevaluated { key: pop[j].key })?;
        let lambda = &state.weights[j];
        if tchebycheff(&fy, lambda, &state.ideal) <= tchebycheff(&fj, lambda, &state.ideal) {
            pop[j] = y.rekeyed(keys.fresh());
        }
    }
    Ok(())
}

fn merge_by_key(a: &Population, b: &Population) -> Population {
    let mut seen = BTreeSet::new();
    a.iter()
        .chain(b)
        .filter(|s| seen.insert(s.key))
        .cloned()
        .collect()
}

/// One MOEA/D generation: per subproblem, recombine two neighbours,
/// evaluate the child, tighten the ideal point and update the
/// neighbourhood; then refresh the archive from archive plus population,
/// cut to `|pop|` by non-dominated selection when it grows larger.
pub fn moead_generation<R: Rng + ?Sized>(
    mut pop: Population,
    mut state: MoeadState,
    params: &GaParams,
    shard: &Shard<'_>,
    cfg: &TrainConfig,
    keys: &mut KeySource,
    rng: &mut R,
) -> Result<(Population, MoeadState), KernelError> {
    let n = pop.len();
    if state.weights.len() != n {
        return Err(KernelError::Shape(format!(
            "{} weights for a population of {n}",
            state.weights.len()
        )));
    }
    for i in 0..n {
        let hood = &state.neighborhoods[i];
        let (a, b) = if hood.len() >= 2 {
            let first = rng.gen_range(0..hood.len());
            let mut second = rng.gen_range(0..hood.len() - 1);
            if second >= first {
                second += 1;
            }
            (hood[first], hood[second])
        } else {
            (hood[0], hood[0])
        };
        let (c1, c2) = one_point_crossover(&pop[a].mask, &pop[b].mask, params.pc, rng)?;
        let mut child = mutate_bits(c1, params.pm, rng);
        // the second child is mutated too so the stream layout stays fixed
        let _ = mutate_bits(c2, params.pm, rng);
        child.repair(rng);
        let y = evaluate_solution(Solution::new(keys.fresh(), child), shard, cfg)?;
        let fy = y.objectives().expect("just evaluated");
        state.ideal = update_ideal(state.ideal, &fy);
        neighbor_update(&mut pop, i, &y, &state, keys)?;
    }

    let mut archive = non_dominated(&merge_by_key(&state.archive, &pop))?;
    if archive.len() > n {
        archive = ns_select(&archive, n)?;
    }
    state.archive = archive;
    Ok((pop, state))
}

/// What an island hands back: the archive, topped up from the population
/// by non-dominated selection when it holds fewer than `local_n` members.
pub fn moead_output(pop: &Population, state: &MoeadState, local_n: usize) -> Result<Population, KernelError> {
    if state.archive.len() >= local_n {
        return Ok(ns_select(&state.archive, local_n)?);
    }
    let pool = merge_by_key(&state.archive, pop);
    Ok(ns_select(&pool, local_n.min(pool.len()))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::evaluate_missing;
    use crate::classifier::LrModel;
    use crate::dataset::synthetic;
    use crate::mask::FeatureMask;
    use crate::mo::dominates;
    use crate::rng::stream;
    use crate::solution::Evaluation;

    fn scored(key: u64, c: f64, a: f64) -> Solution {
        let mut s = Solution::new(key, FeatureMask::ones(2));
        s.eval = Some(Evaluation { model: LrModel::zeros(2), auc: a, cardinality: c });
        s
    }

    #[test]
    fn weights_are_even() {
        let w = uniform_weights(3).unwrap();
        assert_eq!(w, vec![[0.0, 1.0], [0.5, 0.5], [1.0, 0.0]]);
        assert_eq!(uniform_weights(2).unwrap(), vec![[0.0, 1.0], [1.0, 0.0]]);
        assert!(uniform_weights(17).unwrap().iter().all(|l| (l[0] + l[1] - 1.0).abs() < 1e-15));
        assert!(uniform_weights(1).is_err());
    }

    #[test]
    fn neighbourhood_cases() {
        let w = uniform_weights(5).unwrap();
        let one = neighborhoods(&w, 1).unwrap();
        assert!(one.iter().enumerate().all(|(i, h)| h == &vec![i]));
        let all = neighborhoods(&w, 5).unwrap();
        for h in &all {
            let mut s = h.clone();
            s.sort_unstable();
            assert_eq!(s, vec![0, 1, 2, 3, 4]);
        }
        assert_eq!(neighborhoods(&w, 3).unwrap()[0], vec![0, 1, 2]);
        assert!(neighborhoods(&w, 6).is_err());
    }

    #[test]
    fn tchebycheff_cases() {
        let f = ObjectivePair::new(0.2, 0.6);
        assert!((tchebycheff(&f, &[0.5, 0.5], &[0.0, 0.0]) - 0.2).abs() < 1e-12);
        assert_eq!(tchebycheff(&f, &[0.3, 0.7], &f.min_image()), 0.0);
        assert!((tchebycheff(&f, &[1.0, 0.0], &[0.05, 0.0]) - 0.15).abs() < 1e-12);
    }

    #[test]
    fn ideal_updates() {
        let r = update_ideal([0.3, 0.2], &ObjectivePair::from_min_image([0.1, 0.5]));
        assert!((r[0] - 0.1).abs() < 1e-15 && (r[1] - 0.2).abs() < 1e-15);
        assert_eq!(update_ideal([0.1, 0.1], &ObjectivePair::new(0.4, 0.6)), [0.1, 0.1]);
        let f = ObjectivePair::new(0.25, 0.75);
        assert_eq!(update_ideal([f64::INFINITY; 2], &f), f.min_image());
    }

    fn state_for(pop: &Population, t: usize) -> MoeadState {
        let mut s = MoeadState::new(pop, t).unwrap();
        s.ideal = [0.0, 0.0];
        s
    }

    #[test]
    fn identical_child_replaces_whole_neighbourhood() {
        let mut pop: Population = (0..4).map(|k| scored(k, 0.5, 0.5)).collect();
        let state = state_for(&pop, 3);
        let mut keys = KeySource::starting_at(100);
        neighbor_update(&mut pop, 1, &scored(50, 0.5, 0.5), &state, &mut keys).unwrap();
        let replaced: Vec<u64> = pop.iter().map(|s| s.key).collect();
        assert_eq!(replaced.iter().filter(|&&k| k >= 100).count(), 3);
    }

    #[test]
    fn worse_child_changes_nothing() {
        let mut pop: Population = (0..4).map(|k| scored(k, 0.1, 0.9)).collect();
        let state = state_for(&pop, 3);
        let before = pop.clone();
        let mut keys = KeySource::starting_at(100);
        neighbor_update(&mut pop, 2, &scored(50, 0.9, 0.1), &state, &mut keys).unwrap();
        assert_eq!(pop, before);
    }

    fn evolving_island(seed: u64) -> (crate::dataset::Dataset, Population) {
        let ds = synthetic::planted_subset(150, 10, &[0, 1, 2], 0.1, seed);
        let mut rng = stream(seed, &[3]);
        let pop = (0..10)
            .map(|k| {
                let mut m = FeatureMask::random(10, &mut rng);
                m.repair(&mut rng);
                Solution::new(k, m)
            })
            .collect();
        (ds, pop)
    }

    #[test]
    fn archive_stays_non_dominated_and_bounded() {
        let (ds, pop) = evolving_island(1);
        let shard = Shard::full(&ds);
        let cfg = TrainConfig::default();
        let mut pop = evaluate_missing(pop, &shard, &cfg).unwrap();
        let mut state = MoeadState::new(&pop, 3).unwrap();
        let mut keys = KeySource::after(&pop);
        let mut rng = stream(1, &[4]);
        for _ in 0..8 {
            (pop, state) = moead_generation(pop, state, &GaParams::default(), &shard, &cfg, &mut keys, &mut rng).unwrap();
            assert_eq!(pop.len(), 10);
            assert!(state.archive.len() <= 10);
            for a in &state.archive {
                for b in &state.archive {
                    assert!(!dominates(&a.objectives().unwrap(), &b.objectives().unwrap()));
                }
            }
            let fy: Vec<[f64; 2]> = pop.iter().map(|s| s.objectives().unwrap().min_image()).collect();
            assert!(fy.iter().all(|img| img[0] >= state.ideal[0] && img[1] >= state.ideal[1]));
            assert_eq!(moead_output(&pop, &state, 10).unwrap().len(), 10);
        }
    }

    #[test]
    fn frozen_ideal_scores_never_rise() {
        let (ds, pop) = evolving_island(2);
        let shard = Shard::full(&ds);
        let cfg = TrainConfig::default();
        let mut pop = evaluate_missing(pop, &shard, &cfg).unwrap();
        // (0,0) lower-bounds every image, so update_ideal leaves it fixed
        let mut state = state_for(&pop, 4);
        let mut keys = KeySource::after(&pop);
        let mut rng = stream(2, &[5]);
        for _ in 0..5 {
            let before: Vec<f64> = (0..10)
                .map(|i| tchebycheff(&pop[i].objectives().unwrap(), &state.weights[i], &[0.0, 0.0]))
                .collect();
            (pop, state) = moead_generation(pop, state, &GaParams::default(), &shard, &cfg, &mut keys, &mut rng).unwrap();
            assert_eq!(state.ideal, [0.0, 0.0]);
            for i in 0..10 {
                let after = tchebycheff(&pop[i].objectives().unwrap(), &state.weights[i], &[0.0, 0.0]);
                assert!(after <= before[i]);
            }
        }
    }
}
