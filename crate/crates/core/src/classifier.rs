//! Logistic-regression wrapper: training, prediction, and the two
//! objective scores (balanced AUC and cardinality ratio).

use serde::{Deserialize, Serialize};

use crate::dataset::{DataError, Matrix, Shard};
use crate::mask::FeatureMask;
use crate::solution::{Evaluation, Solution};

#[derive(Debug, thiserror::Error)]
pub enum ClassifierError {
    #[error("training needs at least one row and one column")]
    EmptyInput,
    #[error("training labels contain a single class")]
    SingleClass,
    #[error("expected {expected} values, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("loss became non-finite at epoch {epoch}; inputs are probably unscaled")]
    NonFiniteLoss { epoch: usize },
    #[error("no {0} rows to score")]
    MissingClass(&'static str),
    #[error("mask selects no features")]
    EmptyMask,
    #[error(transparent)]
    Data(#[from] DataError),
}

/// Training failure for one solution.
#[derive(Debug, thiserror::Error)]
#[error("evaluating solution {key}: {source}")]
pub struct EvalError {
    pub key: u64,
    #[source]
    pub source: ClassifierError,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LrModel {
    pub weights: Vec<f64>,
    pub intercept: f64,
}

impl LrModel {
    pub fn zeros(n: usize) -> Self {
        Self {
            weights: vec![0.0; n],
            intercept: 0.0,
        }
    }

    /// The model with every coefficient negated.
    pub fn negated(&self) -> Self {
        Self {
            weights: self.weights.iter().map(|w| -w).collect(),
            intercept: -self.intercept,
        }
    }

    fn linear(&self, x: &[f64]) -> f64 {
        self.intercept + self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>()
    }
}

/// Gradient-descent settings. The defaults are fixed rather than tuned.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub max_epochs: usize,
    pub grad_tolerance: f64,
    pub threshold: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.1,
            max_epochs: 100,
            grad_tolerance: 1e-4,
            threshold: 0.5,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fn_: usize,
    pub tn: usize,
    pub fp: usize,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.tp + self.fn_ + self.tn + self.fp
    }
}

pub fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + e^t)` without overflow.
fn softplus(t: f64) -> f64 {
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

/// Mean negative log-likelihood and its gradient. The last gradient entry is
/// the intercept component.
pub fn loss_and_gradient(model: &LrModel, x: &Matrix, y: &[u8]) -> (f64, Vec<f64>) {
    let n = x.rows();
    let d = x.cols();
    let mut grad = vec![0.0; d + 1];
    let mut loss = 0.0;
    for i in 0..n {
        let row = x.row(i);
        let z = model.linear(row);
        let target = f64::from(y[i]);
        loss += softplus(z) - target * z;
        let residual = sigmoid(z) - target;
        for (g, v) in grad.iter_mut().zip(row) {
            *g += residual * v;
        }
        grad[d] += residual;
    }
    let inv = 1.0 / n as f64;
    grad.iter_mut().for_each(|g| *g *= inv);
    (loss * inv, grad)
}

/// Result of a training run.
#[derive(Clone, Debug)]
pub struct TrainOutcome {
    pub model: LrModel,
    /// Loss before each update, followed by the final loss.
    pub losses: Vec<f64>,
    pub epochs: usize,
}

/// Full-batch gradient descent on the mean negative log-likelihood from a
/// zero start. Stops after `max_epochs` updates or once the gradient's
/// max-norm falls under `grad_tolerance`.
pub fn train_logistic_traced(
    x: &Matrix,
    y: &[u8],
    cfg: &TrainConfig,
) -> Result<TrainOutcome, ClassifierError> {
    if x.rows() == 0 || x.cols() == 0 {
        return Err(ClassifierError::EmptyInput);
    }
    if y.len() != x.rows() {
        return Err(ClassifierError::DimensionMismatch {
            expected: x.rows(),
            got: y.len(),
        });
    }
    let positives = y.iter().filter(|&&v| v == 1).count();
    if positives == 0 || positives == y.len() {
        return Err(ClassifierError::SingleClass);
    }

    let d = x.cols();
    let mut model = LrModel::zeros(d);
    let mut losses = Vec::with_capacity(cfg.max_epochs + 1);
    let mut epochs = 0;
    loop {
        let (loss, grad) = loss_and_gradient(&model, x, y);
        if !loss.is_finite() || grad.iter().any(|g| !g.is_finite()) {
            return Err(ClassifierError::NonFiniteLoss { epoch: epochs });
        }
        losses.push(loss);
        let max_norm = grad.iter().fold(0.0f64, |m, g| m.max(g.abs()));
        if epochs == cfg.max_epochs || max_norm < cfg.grad_tolerance {
            break;
        }
        for (w, g) in model.weights.iter_mut().zip(&grad) {
            *w -= cfg.learning_rate * g;
        }
        model.intercept -= cfg.learning_rate * grad[d];
        epochs += 1;
    }
    Ok(TrainOutcome { model, losses, epochs })
}

pub fn train_logistic(x: &Matrix, y: &[u8], cfg: &TrainConfig) -> Result<LrModel, ClassifierError> {
    train_logistic_traced(x, y, cfg).map(|o| o.model)
}

pub fn predict_proba(model: &LrModel, x: &[f64]) -> Result<f64, ClassifierError> {
    if x.len() != model.weights.len() {
        return Err(ClassifierError::DimensionMismatch {
            expected: model.weights.len(),
            got: x.len(),
        });
    }
    Ok(sigmoid(model.linear(x)))
}

/// Tally predictions; a probability equal to the threshold counts as positive.
pub fn confusion(
    model: &LrModel,
    x: &Matrix,
    y: &[u8],
    threshold: f64,
) -> Result<ConfusionCounts, ClassifierError> {
    let mut c = ConfusionCounts::default();
    for (i, &label) in y.iter().enumerate() {
        let positive = predict_proba(model, x.row(i))? >= threshold;
        match (label == 1, positive) {
            (true, true) => c.tp += 1,
            (true, false) => c.fn_ += 1,
            (false, false) => c.tn += 1,
            (false, true) => c.fp += 1,
        }
    }
    Ok(c)
}

/// Mean of sensitivity and specificity.
pub fn balanced_auc(c: &ConfusionCounts) -> Result<f64, ClassifierError> {
    let pos = c.tp + c.fn_;
    let neg = c.tn + c.fp;
    if pos == 0 {
        return Err(ClassifierError::MissingClass("positive"));
    }
    if neg == 0 {
        return Err(ClassifierError::MissingClass("negative"));
    }
    let sensitivity = c.tp as f64 / pos as f64;
    let specificity = c.tn as f64 / neg as f64;
    Ok((sensitivity + specificity) / 2.0)
}

/// Fraction of features selected.
pub fn cardinality_score(mask: &FeatureMask) -> Result<f64, ClassifierError> {
    match mask.popcount() {
        0 => Err(ClassifierError::EmptyMask),
        k => Ok(k as f64 / mask.len() as f64),
    }
}

/// Score a projected matrix with an already trained model.
pub fn score(model: &LrModel, x: &Matrix, y: &[u8], threshold: f64) -> Result<f64, ClassifierError> {
    balanced_auc(&confusion(model, x, y, threshold)?)
}

/// Train on the shard restricted to the solution's mask and fill in the
/// evaluation record.
pub fn evaluate_solution(
    mut sol: Solution,
    shard: &Shard<'_>,
    cfg: &TrainConfig,
) -> Result<Solution, EvalError> {
    let key = sol.key;
    let wrap = |source| EvalError { key, source };
    let cardinality = cardinality_score(&sol.mask).map_err(wrap)?;
    let (x, y) = shard.project(&sol.mask).map_err(|e| wrap(e.into()))?;
    let model = train_logistic(&x, &y, cfg).map_err(wrap)?;
    let auc = score(&model, &x, &y, cfg.threshold).map_err(wrap)?;
    sol.eval = Some(Evaluation {
        model,
        auc,
        cardinality,
    });
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{synthetic, Dataset};
    use crate::rng::stream;
    use rand::Rng;

    fn random_instance(rows: usize, cols: usize, seed: u64) -> (Matrix, Vec<u8>, LrModel) {
        let mut rng = stream(seed, &[]);
        let data = (0..rows * cols).map(|_| rng.gen::<f64>()).collect();
        let mut y: Vec<u8> = (0..rows).map(|_| u8::from(rng.gen_bool(0.5))).collect();
        y[0] = 0;
        y[1] = 1;
        let model = LrModel {
            weights: (0..cols).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            intercept: rng.gen_range(-1.0..1.0),
        };
        (Matrix::new(rows, cols, data), y, model)
    }

    fn finite_difference(model: &LrModel, x: &Matrix, y: &[u8], h: f64) -> Vec<f64> {
        let d = model.weights.len();
        (0..=d)
            .map(|k| {
                let bump = |s: f64| {
                    let mut m = model.clone();
                    if k < d {
                        m.weights[k] += s;
                    } else {
                        m.intercept += s;
                    }
                    loss_and_gradient(&m, x, y).0
                };
                (bump(h) - bump(-h)) / (2.0 * h)
            })
            .collect()
    }

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-8)
    }

    #[test]
    fn gradient_at_zero_matches_finite_differences() {
        let (x, y, _) = random_instance(10, 3, 1);
        let zero = LrModel::zeros(3);
        let (_, g) = loss_and_gradient(&zero, &x, &y);
        for (a, n) in g.iter().zip(finite_difference(&zero, &x, &y, 1e-5)) {
            assert!(rel_err(*a, n) < 1e-5, "{a} vs {n}");
        }
    }

    #[test]
    fn gradient_at_random_point_matches() {
        let (x, y, m) = random_instance(50, 10, 2);
        let (_, g) = loss_and_gradient(&m, &x, &y);
        for (a, n) in g.iter().zip(finite_difference(&m, &x, &y, 1e-5)) {
            assert!(rel_err(*a, n) < 1e-5, "{a} vs {n}");
        }
    }

    #[test]
    fn separable_direction_gets_positive_weight() {
        let x = Matrix::from_rows(&[vec![0.0], vec![1.0]]);
        let cfg = TrainConfig { max_epochs: 1000, ..TrainConfig::default() };
        let m = train_logistic(&x, &[0, 1], &cfg).unwrap();
        assert!(m.weights[0] > 0.0);
    }

    #[test]
    fn constant_labels_rejected() {
        let x = Matrix::from_rows(&[vec![0.0], vec![1.0]]);
        assert!(matches!(
            train_logistic(&x, &[1, 1], &TrainConfig::default()),
            Err(ClassifierError::SingleClass)
        ));
    }

    #[test]
    fn huge_inputs_fail_cleanly() {
        let x = Matrix::from_rows(&[vec![1e308], vec![-1e308]]);
        assert!(matches!(
            train_logistic(&x, &[0, 1], &TrainConfig::default()),
            Err(ClassifierError::NonFiniteLoss { .. })
        ));
    }

    #[test]
    fn loss_never_increases() {
        let (x, y, _) = random_instance(40, 6, 3);
        let out = train_logistic_traced(&x, &y, &TrainConfig::default()).unwrap();
        assert!(out.losses.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn predict_proba_basics() {
        let m = LrModel::zeros(2);
        assert_eq!(predict_proba(&m, &[3.0, -7.0]).unwrap(), 0.5);
        let saturated = LrModel { weights: vec![0.0, 0.0], intercept: 20.0 };
        assert!(predict_proba(&saturated, &[0.0, 0.0]).unwrap() > 0.999);
        let m = LrModel { weights: vec![0.3, -1.2], intercept: 0.4 };
        let x = [0.7, 0.2];
        let sum = predict_proba(&m, &x).unwrap() + predict_proba(&m.negated(), &x).unwrap();
        assert!((sum - 1.0).abs() < 1e-15);
        assert!(predict_proba(&m, &[1.0]).is_err());
    }

    #[test]
    fn confusion_tie_goes_positive() {
        let x = Matrix::from_rows(&[vec![1.0], vec![2.0], vec![3.0]]);
        let c = confusion(&LrModel::zeros(1), &x, &[0, 1, 0], 0.5).unwrap();
        assert_eq!(c, ConfusionCounts { tp: 1, fn_: 0, tn: 0, fp: 2 });
        assert_eq!(c.total(), 3);
        assert_eq!(balanced_auc(&c).unwrap(), 0.5);
    }

    #[test]
    fn confusion_perfect_separator() {
        let x = Matrix::from_rows(&[vec![-1.0], vec![1.0], vec![2.0]]);
        let m = LrModel { weights: vec![5.0], intercept: 0.0 };
        let c = confusion(&m, &x, &[0, 1, 1], 0.5).unwrap();
        assert_eq!((c.fn_, c.fp), (0, 0));
    }

    #[test]
    fn balanced_auc_arithmetic() {
        let c = ConfusionCounts { tp: 8, fn_: 2, tn: 7, fp: 3 };
        assert_eq!(balanced_auc(&c).unwrap(), 0.75);
        let perfect = ConfusionCounts { tp: 10, fn_: 0, tn: 10, fp: 0 };
        assert_eq!(balanced_auc(&perfect).unwrap(), 1.0);
        assert!(balanced_auc(&ConfusionCounts { tp: 3, fn_: 1, tn: 0, fp: 0 }).is_err());
    }

    #[test]
    fn cardinality_arithmetic() {
        let m = FeatureMask::from_indices(88, &[1, 5, 9, 40, 87]);
        assert_eq!(cardinality_score(&m).unwrap(), 5.0 / 88.0);
        assert_eq!(cardinality_score(&FeatureMask::ones(7)).unwrap(), 1.0);
        assert_eq!(cardinality_score(&FeatureMask::from_indices(2000, &[3])).unwrap(), 0.0005);
        assert!(cardinality_score(&FeatureMask::zeros(3)).is_err());
    }

    fn separable_shard_data() -> Dataset {
        // feature 0 carries the label, the other three are noise
        let mut rng = stream(8, &[]);
        let n = 60;
        let labels: Vec<u8> = (0..n).map(|i| u8::from(i % 2 == 0)).collect();
        let values = labels
            .iter()
            .flat_map(|&y| {
                let lead = if y == 1 { rng.gen_range(0.75..=1.0) } else { rng.gen_range(0.0..0.25) };
                let mut row = vec![lead];
                row.extend((0..3).map(|_| rng.gen::<f64>()));
                row
            })
            .collect();
        Dataset::dense(values, 4, labels, None).unwrap()
    }

    #[test]
    fn evaluate_separable_feature() {
        let ds = separable_shard_data();
        let shard = Shard::full(&ds);
        let cfg = TrainConfig::default();
        let sol = Solution::new(3, "1000".parse().unwrap());
        let a = evaluate_solution(sol.clone(), &shard, &cfg).unwrap();
        let e = a.eval.as_ref().unwrap();
        assert_eq!(e.auc, 1.0, "{:?}", e.model);
        assert_eq!(e.cardinality, 0.25);
        assert_eq!(e.model.weights.len(), 1);
        let b = evaluate_solution(sol, &shard, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn evaluation_error_carries_key() {
        let ds = separable_shard_data();
        let err = evaluate_solution(Solution::new(17, FeatureMask::zeros(4)), &Shard::full(&ds), &TrainConfig::default())
            .unwrap_err();
        assert_eq!(err.key, 17);
    }

    #[test]
    fn noise_shards_score_near_chance() {
        let cfg = TrainConfig::default();
        let inside = (0..100)
            .filter(|&seed| {
                let ds = synthetic::pure_noise(200, 5, seed);
                let sol = evaluate_solution(Solution::new(0, FeatureMask::ones(5)), &Shard::full(&ds), &cfg).unwrap();
                let auc = sol.auc().unwrap();
                (0.4..=0.6).contains(&auc)
            })
            .count();
        assert!(inside >= 95, "{inside} of 100 noise shards scored within [0.4, 0.6]");
    }

    #[test]
    fn auc_invariant_under_row_permutation() {
        let (x, y, m) = random_instance(30, 4, 5);
        let base = score(&m, &x, &y, 0.5).unwrap();
        let mut order: Vec<usize> = (0..30).collect();
        order.reverse();
        order.swap(3, 17);
        let rows: Vec<Vec<f64>> = order.iter().map(|&i| x.row(i).to_vec()).collect();
        let ys: Vec<u8> = order.iter().map(|&i| y[i]).collect();
        assert_eq!(score(&m, &Matrix::from_rows(&rows), &ys, 0.5).unwrap(), base);
    }
}
