use islandfs_core::algorithms::evaluate_missing;
use islandfs_core::dataset::{synthetic, MinMaxScaler, Shard};
use islandfs_core::engine::{run, run_island, EngineConfig, Execution};
use islandfs_core::metrics::hypervolume;
use islandfs_core::rng::stream;
use islandfs_core::{Algorithm, Dataset};

fn data() -> (Dataset, Dataset) {
    let train = synthetic::planted_subset(240, 10, &[0, 1, 2], 0.1, 1);
    let test = synthetic::planted_subset(120, 10, &[0, 1, 2], 0.1, 2);
    let s = MinMaxScaler::fit(&train);
    (s.transform(&train), s.transform(&test))
}

fn cfg(algorithm: Algorithm, seed: u64) -> EngineConfig {
    EngineConfig {
        algorithm,
        n: 12,
        local_n: 6,
        k: 3,
        m_gen: 4,
        m_mig: 3,
        seed,
        ..EngineConfig::default()
    }
}

#[test]
fn parallel_and_sequential_agree() {
    let (train, test) = data();
    for alg in [Algorithm::Nsga2, Algorithm::Nspso, Algorithm::Moead] {
        let c = cfg(alg, 5);
        let seq = run(&c, &train, &test, Execution::Sequential).unwrap();
        let par = run(&c, &train, &test, Execution::Parallel).unwrap();
        assert!(seq.same_outcome(&par), "{alg:?}");
        assert_eq!(par.barrier_violations, 0);
    }
}

#[test]
fn reports_are_complete_and_sized() {
    let (train, test) = data();
    for alg in [Algorithm::Nsga2, Algorithm::Nspso, Algorithm::Moead] {
        let r = run(&cfg(alg, 9), &train, &test, Execution::Parallel).unwrap();
        assert_eq!(r.final_population.len(), 12);
        assert_eq!(r.migrations.len(), 3);
        assert_eq!(r.wall_times.islands.len(), 3);
        assert!(r.final_population.iter().all(|s| s.is_evaluated() && s.test_auc.is_some()));
        assert!(r.final_population.iter().all(|s| s.mask.popcount() > 0));
    }
}

#[test]
fn different_seeds_differ() {
    let (train, test) = data();
    let a = run(&cfg(Algorithm::Nsga2, 1), &train, &test, Execution::Sequential).unwrap();
    let b = run(&cfg(Algorithm::Nsga2, 2), &train, &test, Execution::Sequential).unwrap();
    assert_ne!(a.final_population, b.final_population);
}

#[test]
fn single_migration_protocol() {
    let (train, test) = data();
    let c = EngineConfig { m_mig: 1, ..cfg(Algorithm::Moead, 3) };
    let r = run(&c, &train, &test, Execution::Parallel).unwrap();
    assert_eq!(r.migrations.len(), 1);
    assert_eq!(r.final_population.len(), 12);
}

#[test]
fn migrated_front_covers_every_island_front() {
    let (train, test) = data();
    for alg in [Algorithm::Nsga2, Algorithm::Nspso, Algorithm::Moead] {
        for seed in 0..4 {
            let r = run(&cfg(alg, seed), &train, &test, Execution::Sequential).unwrap();
            for m in &r.migrations {
                let global = hypervolume(&m.front0).unwrap();
                for island in &m.island_fronts {
                    assert!(global >= hypervolume(island).unwrap() - 1e-12, "{alg:?} seed {seed}");
                }
            }
        }
    }
}

#[test]
fn reevaluation_scores_on_full_training_set() {
    let (train, test) = data();
    let c = EngineConfig { reevaluate_on_migrate: true, m_mig: 1, ..cfg(Algorithm::Nsga2, 4) };
    let r = run(&c, &train, &test, Execution::Sequential).unwrap();
    let full = Shard::full(&train);
    for s in &r.final_population {
        let fresh = evaluate_missing(vec![islandfs_core::Solution::new(0, s.mask.clone())], &full, &c.train).unwrap();
        assert_eq!(fresh[0].auc(), s.auc());
    }
}

#[test]
fn nsga2_island_never_loses_its_best_auc() {
    let (train, _) = data();
    let shard = Shard::full(&train);
    let c = cfg(Algorithm::Nsga2, 0);
    for seed in 0..5 {
        let pop = islandfs_core::engine::init_population(6, 10, &mut stream(seed, &[1]));
        let scored = evaluate_missing(pop.clone(), &shard, &c.train).unwrap();
        let before = scored.iter().filter_map(|s| s.auc()).fold(0.0, f64::max);
        let out = run_island(pop, &shard, &c, &mut stream(seed, &[2])).unwrap();
        assert_eq!(out.len(), 6);
        assert!(out.iter().filter_map(|s| s.auc()).fold(0.0, f64::max) >= before);
    }
}

#[test]
fn mismatched_feature_counts_rejected() {
    let (train, _) = data();
    let other = synthetic::planted_subset(50, 4, &[0], 0.1, 1);
    assert!(run(&cfg(Algorithm::Nsga2, 0), &train, &other, Execution::Sequential).is_err());
}
