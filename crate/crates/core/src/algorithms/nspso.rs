use rand::Rng;

use super::{KernelError, PsoParams};
use crate::classifier::{evaluate_solution, sigmoid, TrainConfig};
use crate::dataset::Shard;
use crate::mask::FeatureMask;
use crate::mo::{dominates, nondominated_sort, ns_select_indices, objectives_of, FrontPartition, MoError};
use crate::solution::{KeySource, Population, Solution};

/// Swarm memory aligned index-for-index with the island population.
#[derive(Clone, Debug, PartialEq)]
pub struct PsoState {
    pub velocities: Vec<Vec<f64>>,
    pub pbest: Vec<Solution>,
    /// Keys of the gbest candidate pool used in the last generation.
    pub gbest_pool: Vec<u64>,
}

impl PsoState {
    /// Zero velocities; every particle is its own personal best.
    pub fn new(pop: &Population) -> Self {
        Self {
            velocities: pop.iter().map(|s| vec![0.0; s.mask.len()]).collect(),
            pbest: pop.clone(),
            gbest_pool: Vec::new(),
        }
    }
}

fn same_len(a: usize, b: usize, what: &str) -> Result<(), KernelError> {
    if a == b {
        Ok(())
    } else {
        Err(KernelError::Shape(format!("{what}: lengths {a} and {b} differ")))
    }
}

/// `w*v + c1*r1*(pbest - p) + c2*r2*(gbest - p)`, clamped to `[-vmax, vmax]`.
/// `r1` and `r2` are drawn once per call.
pub fn velocity_update<R: Rng + ?Sized>(
    v: &[f64],
    p: &FeatureMask,
    pbest: &FeatureMask,
    gbest: &FeatureMask,
    params: &PsoParams,
    rng: &mut R,
) -> Result<Vec<f64>, KernelError> {
    same_len(v.len(), p.len(), "velocity/position")?;
    same_len(p.len(), pbest.len(), "position/pbest")?;
    same_len(p.len(), gbest.len(), "position/gbest")?;
    let r1: f64 = rng.gen();
    let r2: f64 = rng.gen();
    let bit = |b: bool| if b { 1.0 } else { 0.0 };
    Ok((0..v.len())
        .map(|j| {
            let pj = bit(p.get(j));
            let next = params.w * v[j]
                + params.c1 * r1 * (bit(pbest.get(j)) - pj)
                + params.c2 * r2 * (bit(gbest.get(j)) - pj);
            next.clamp(-params.vmax, params.vmax)
        })
        .collect())
}

/// Real-valued position `p + omega * v`.
pub fn position_update(p: &FeatureMask, v: &[f64], omega: f64) -> Result<Vec<f64>, KernelError> {
    same_len(p.len(), v.len(), "position/velocity")?;
    Ok(p.as_reals().iter().zip(v).map(|(x, dv)| x + omega * dv).collect())
}

/// Bit `j` is set when a fresh uniform draw falls below `sigmoid(x[j])`.
pub fn binarize<R: Rng + ?Sized>(x: &[f64], rng: &mut R) -> FeatureMask {
    FeatureMask::new(x.iter().map(|&xj| rng.gen::<f64>() < sigmoid(xj)).collect())
}

/// Uniform draw from the first `ceil(fraction * |front 0|)` members of
/// front 0 (at least one), which are already in descending crowding order.
pub fn select_gbest<'p, R: Rng + ?Sized>(
    partition: &FrontPartition,
    pop: &'p [Solution],
    fraction: f64,
    rng: &mut R,
) -> Result<&'p Solution, KernelError> {
    let pool = gbest_pool(partition, fraction);
    if pool.is_empty() {
        return Err(KernelError::Shape("empty front partition".into()));
    }
    let key = pool[rng.gen_range(0..pool.len())];
    pop.iter()
        .find(|s| s.key == key)
        .ok_or_else(|| KernelError::Shape(format!("front key {key} not in population")))
}

fn gbest_pool(partition: &FrontPartition, fraction: f64) -> &[u64] {
    let front = partition.front0();
    // the small offset keeps exact products like 0.05 * 60 from rounding up
    let take = ((fraction * front.len() as f64) - 1e-9).ceil().max(1.0) as usize;
    &front[..take.min(front.len())]
}

/// The dominating one of the two, or a fair coin when neither dominates.
pub fn update_pbest<R: Rng + ?Sized>(
    old: &Solution,
    candidate: &Solution,
    rng: &mut R,
) -> Result<Solution, KernelError> {
    let o = old.objectives().ok_or(MoError::Unevaluated { key: old.key })?;
    let c = candidate.objectives().ok_or(MoError::Unevaluated { key: candidate.key })?;
    Ok(if dominates(&c, &o) {
        candidate.clone()
    } else if dominates(&o, &c) || !rng.gen_bool(0.5) {
        old.clone()
    } else {
        candidate.clone()
    })
}

/// One NSPSO generation. Each particle flies once to produce an offspring,
/// parents and offspring compete through non-dominated selection, and every
/// survivor keeps the velocity and personal best of its own lineage.
pub fn nspso_generation<R: Rng + ?Sized>(
    pop: Population,
    mut state: PsoState,
    params: &PsoParams,
    shard: &Shard<'_>,
    cfg: &TrainConfig,
    keys: &mut KeySource,
    rng: &mut R,
) -> Result<(Population, PsoState), KernelError> {
    let n = pop.len();
    same_len(n, state.velocities.len(), "population/velocities")?;
    same_len(n, state.pbest.len(), "population/pbest")?;
    let partition = nondominated_sort(&pop)?;
    state.gbest_pool = gbest_pool(&partition, params.gbest_fraction).to_vec();

    let mut children = Vec::with_capacity(n);
    let mut child_v = Vec::with_capacity(n);
    let mut child_pbest = Vec::with_capacity(n);
    for i in 0..n {
        let gbest = select_gbest(&partition, &pop, params.gbest_fraction, rng)?;
        let v = velocity_update(&state.velocities[i], &pop[i].mask, &state.pbest[i].mask, &gbest.mask, params, rng)?;
        let x = position_update(&pop[i].mask, &v, params.omega)?;
        let mut bits = binarize(&x, rng);
        bits.repair(rng);
        let child = evaluate_solution(Solution::new(keys.fresh(), bits), shard, cfg)?;
        child_pbest.push(update_pbest(&state.pbest[i], &child, rng)?);
        child_v.push(v);
        children.push(child);
    }

    let mut combined = children;
    combined.extend(pop);
    let mut velocities = child_v;
    velocities.extend(state.velocities);
    let mut pbest = child_pbest;
    pbest.extend(state.pbest);

    let objs = objectives_of(&combined)?;
    let ks: Vec<u64> = combined.iter().map(|s| s.key).collect();
    let keep = ns_select_indices(&objs, &ks, n)?;
    let next_pop = keep.iter().map(|&i| combined[i].clone()).collect();
    let next_state = PsoState {
        velocities: keep.iter().map(|&i| velocities[i].clone()).collect(),
        pbest: keep.iter().map(|&i| pbest[i].clone()).collect(),
        gbest_pool: state.gbest_pool,
    };
    Ok((next_pop, next_state))
}
