//! Dominance, non-dominated sorting, crowding distance and the
//! sort-then-truncate selection shared by every algorithm and by migration.
//!
//! Ordering is fully deterministic: fronts are listed best first, members
//! inside a front by descending crowding distance with ascending key as the
//! tiebreak. Boundary members carry `f64::INFINITY`, which orders above every
//! finite distance.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::solution::{ObjectivePair, Solution};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MoError {
    #[error("solution {key} has not been evaluated")]
    Unevaluated { key: u64 },
    #[error("cannot select {requested} solutions from {available}")]
    NotEnough { requested: usize, available: usize },
}

/// `a` is no worse than `b` on both objectives and strictly better on one.
pub fn dominates(a: &ObjectivePair, b: &ObjectivePair) -> bool {
    let no_worse = a.cardinality <= b.cardinality && a.auc >= b.auc;
    let better = a.cardinality < b.cardinality || a.auc > b.auc;
    no_worse && better
}

/// Fast non-dominated sort. Returns fronts of indices into `objs`, best
/// first, each front in ascending index order.
pub fn front_indices(objs: &[ObjectivePair]) -> Vec<Vec<usize>> {
    let n = objs.len();
    let mut dominated_by_count = vec![0usize; n];
    let mut dominates_list: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            if dominates(&objs[i], &objs[j]) {
                dominates_list[i].push(j);
                dominated_by_count[j] += 1;
            } else if dominates(&objs[j], &objs[i]) {
                dominates_list[j].push(i);
                dominated_by_count[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_by_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominates_list[i] {
                dominated_by_count[j] -= 1;
                if dominated_by_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::replace(&mut current, next));
    }
    fronts
}

/// Crowding distance of each member of one front, summed over both
/// objectives. Per objective the two extreme members get infinity and an
/// interior member gets the normalized gap between its neighbours.
pub fn crowding_distances(front: &[ObjectivePair]) -> Vec<f64> {
    let n = front.len();
    let mut dist = vec![0.0; n];
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let getters: [fn(&ObjectivePair) -> f64; 2] = [|o| o.cardinality, |o| o.auc];
    for get in getters {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| get(&front[a]).total_cmp(&get(&front[b])).then(a.cmp(&b)));
        let lo = get(&front[order[0]]);
        let hi = get(&front[order[n - 1]]);
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        let range = hi - lo;
        if range > 0.0 {
            for w in order.windows(3) {
                dist[w[1]] += (get(&front[w[2]]) - get(&front[w[0]])) / range;
            }
        }
    }
    dist
}

fn by_crowding_then_key<'a>(crowd: &'a [f64], keys: &'a [u64]) -> impl Fn(&usize, &usize) -> Ordering + 'a {
    move |&a, &b| crowd[b].total_cmp(&crowd[a]).then(keys[a].cmp(&keys[b]))
}

/// Fronts of indices with each front ordered by descending crowding then
/// ascending key, plus the crowding distance of every index.
pub fn ranked_fronts(objs: &[ObjectivePair], keys: &[u64]) -> (Vec<Vec<usize>>, Vec<f64>) {
    assert_eq!(objs.len(), keys.len());
    let mut fronts = front_indices(objs);
    let mut crowd = vec![0.0; objs.len()];
    for front in &mut fronts {
        let members: Vec<ObjectivePair> = front.iter().map(|&i| objs[i]).collect();
        for (&i, d) in front.iter().zip(crowding_distances(&members)) {
            crowd[i] = d;
        }
        front.sort_by(by_crowding_then_key(&crowd, keys));
    }
    (fronts, crowd)
}

/// Take `n` indices front by front; the front that overflows is cut by its
/// crowding order.
pub fn ns_select_indices(objs: &[ObjectivePair], keys: &[u64], n: usize) -> Result<Vec<usize>, MoError> {
    if n > objs.len() {
        return Err(MoError::NotEnough {
            requested: n,
            available: objs.len(),
        });
    }
    let (fronts, _) = ranked_fronts(objs, keys);
    Ok(fronts.into_iter().flatten().take(n).collect())
}

/// A population split into ordered non-dominated fronts.
#[derive(Clone, Debug, PartialEq)]
pub struct FrontPartition {
    pub fronts: Vec<Vec<u64>>,
    pub crowding: BTreeMap<u64, f64>,
}

impl FrontPartition {
    pub fn front0(&self) -> &[u64] {
        self.fronts.first().map_or(&[], Vec::as_slice)
    }

    pub fn rank_of(&self, key: u64) -> Option<usize> {
        self.fronts.iter().position(|f| f.contains(&key))
    }
}

pub(crate) fn objectives_of(pop: &[Solution]) -> Result<Vec<ObjectivePair>, MoError> {
    pop.iter()
        .map(|s| s.objectives().ok_or(MoError::Unevaluated { key: s.key }))
        .collect()
}

fn keys_of(pop: &[Solution]) -> Vec<u64> {
    pop.iter().map(|s| s.key).collect()
}

pub fn nondominated_sort(pop: &[Solution]) -> Result<FrontPartition, MoError> {
    let objs = objectives_of(pop)?;
    let keys = keys_of(pop);
    let (fronts, crowd) = ranked_fronts(&objs, &keys);
    Ok(FrontPartition {
        fronts: fronts
            .iter()
            .map(|f| f.iter().map(|&i| keys[i]).collect())
            .collect(),
        crowding: keys.iter().copied().zip(crowd).collect(),
    })
}

/// Keep `n` solutions in front order, truncating the overflowing front by
/// descending crowding distance.
pub fn ns_select(pop: &[Solution], n: usize) -> Result<Vec<Solution>, MoError> {
    let objs = objectives_of(pop)?;
    let idx = ns_select_indices(&objs, &keys_of(pop), n)?;
    Ok(idx.into_iter().map(|i| pop[i].clone()).collect())
}

/// Members of `pop` not dominated by any other member.
pub fn non_dominated(pop: &[Solution]) -> Result<Vec<Solution>, MoError> {
    let objs = objectives_of(pop)?;
    Ok(front_indices(&objs)
        .into_iter()
        .next()
        .unwrap_or_default()
        .into_iter()
        .map(|i| pop[i].clone())
        .collect())
}
