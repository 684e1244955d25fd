//! Soft-margin RBF support vector machine on binary fingerprints.
//!
//! The dual problem is solved by sequential minimal optimization with
//! second-order working-set selection (the LIBSVM scheme). Per-class
//! costs balance the classes, C is chosen by stratified cross-validation
//! and a Platt sigmoid, fitted on out-of-fold decision values, turns the
//! decision value into a probability of activity.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::DtaError;
use crate::fingerprint::{Fingerprint, DEFAULT_NBITS, DEFAULT_RADIUS};
use crate::rng::SeededRng;

pub const DEFAULT_C_GRID: [f64; 3] = [1.0, 4.0, 16.0];
pub const DEFAULT_FOLDS: usize = 3;
pub const TOLERANCE: f64 = 1e-3;
pub const MAX_ITERATIONS: u64 = 10_000_000;

const TAU: f64 = 1e-12;
const CACHE_BYTES: usize = 256 << 20;

/// γ = 1 / (number of features × variance of all feature values).
pub fn default_gamma(fps: &[Fingerprint]) -> f64 {
    if fps.is_empty() {
        return 1.0;
    }
    let nbits = fps[0].len() as f64;
    let ones: f64 = fps.iter().map(|f| f.count_ones() as f64).sum();
    let p = ones / (nbits * fps.len() as f64);
    let var = p * (1.0 - p);
    if var > 0.0 {
        1.0 / (nbits * var)
    } else {
        1.0
    }
}

/// exp(−γ‖a − b‖²) for bitsets, using ‖a − b‖² = |a| + |b| − 2|a ∧ b|.
pub fn rbf_kernel(a: &Fingerprint, b: &Fingerprint, gamma: f64) -> f64 {
    let d2 = a.count_ones() as f64 + b.count_ones() as f64 - 2.0 * a.and_count(b) as f64;
    (-gamma * d2).exp()
}

/// Settings for one SMO run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverParams {
    pub c: f64,
    pub gamma: f64,
    /// Balance the classes by weighting C with n / (2·n_class).
    pub balanced: bool,
    pub tolerance: f64,
    pub max_iterations: u64,
}

/// A trained decision function Σ coefᵢ·K(svᵢ, x) + bias.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionFunction {
    pub support: Vec<Fingerprint>,
    /// Signed dual coefficients yᵢαᵢ.
    pub coef: Vec<f64>,
    pub bias: f64,
    pub gamma: f64,
    pub iterations: u64,
}

impl DecisionFunction {
    pub fn decision(&self, x: &Fingerprint) -> f64 {
        let mut s = 0.0;
        for (sv, &c) in self.support.iter().zip(&self.coef) {
            s += c * rbf_kernel(sv, x, self.gamma);
        }
        s + self.bias
    }
}

struct KernelCache<'a> {
    x: &'a [Fingerprint],
    gamma: f64,
    rows: Vec<Option<Vec<f64>>>,
    last_used: Vec<u64>,
    cached: Vec<usize>,
    capacity: usize,
    clock: u64,
}

impl<'a> KernelCache<'a> {
    fn new(x: &'a [Fingerprint], gamma: f64) -> KernelCache<'a> {
        let n = x.len();
        let capacity = (CACHE_BYTES / (8 * n.max(1))).clamp(2, n.max(2));
        KernelCache {
            x,
            gamma,
            rows: vec![None; n],
            last_used: vec![0; n],
            cached: Vec::new(),
            capacity,
            clock: 0,
        }
    }

    fn row(&mut self, i: usize) -> &[f64] {
        self.clock += 1;
        self.last_used[i] = self.clock;
        if self.rows[i].is_none() {
            if self.cached.len() >= self.capacity {
                let (pos, _) = self
                    .cached
                    .iter()
                    .enumerate()
                    .filter(|&(_, &r)| r != i)
                    .min_by_key(|&(_, &r)| self.last_used[r])
                    .expect("cache not empty");
                let victim = self.cached.swap_remove(pos);
                self.rows[victim] = None;
            }
            let xi = &self.x[i];
            self.rows[i] = Some(self.x.iter().map(|xj| rbf_kernel(xi, xj, self.gamma)).collect());
            self.cached.push(i);
        }
        self.rows[i].as_deref().expect("row just filled")
    }
}

/// Solves the C-SVC dual for ±1 labels (`true` = +1).
pub fn solve(x: &[Fingerprint], labels: &[bool], params: SolverParams) -> Result<DecisionFunction, DtaError> {
    let n = x.len();
    let n_pos = labels.iter().filter(|&&l| l).count();
    if n_pos == 0 || n_pos == n {
        return Err(DtaError::SingleClass);
    }
    let y: Vec<f64> = labels.iter().map(|&l| if l { 1.0 } else { -1.0 }).collect();
    let (w_pos, w_neg) = if params.balanced {
        (n as f64 / (2.0 * n_pos as f64), n as f64 / (2.0 * (n - n_pos) as f64))
    } else {
        (1.0, 1.0)
    };
    let cost: Vec<f64> = labels.iter().map(|&l| params.c * if l { w_pos } else { w_neg }).collect();
    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let mut cache = KernelCache::new(x, params.gamma);
    let up = |a: f64, yi: f64, ci: f64| (yi > 0.0 && a < ci) || (yi < 0.0 && a > 0.0);
    let low = |a: f64, yi: f64, ci: f64| (yi > 0.0 && a > 0.0) || (yi < 0.0 && a < ci);

    let mut iterations = 0u64;
    loop {
        // i: maximal violation among the "up" set
        let mut gmax = f64::NEG_INFINITY;
        let mut i = usize::MAX;
        for t in 0..n {
            if up(alpha[t], y[t], cost[t]) && -y[t] * grad[t] >= gmax {
                if -y[t] * grad[t] > gmax || i == usize::MAX {
                    gmax = -y[t] * grad[t];
                    i = t;
                }
            }
        }
        if i == usize::MAX {
            break;
        }
        let ki: Vec<f64> = cache.row(i).to_vec();
        // j: largest second-order decrease among the "low" set
        let mut gmax2 = f64::NEG_INFINITY;
        let mut j = usize::MAX;
        let mut best = f64::INFINITY;
        for t in 0..n {
            if !low(alpha[t], y[t], cost[t]) {
                continue;
            }
            let yg = y[t] * grad[t];
            if yg > gmax2 {
                gmax2 = yg;
            }
            let b = gmax + yg;
            if b > 0.0 {
                let mut a = 2.0 - 2.0 * ki[t];
                if a <= 0.0 {
                    a = TAU;
                }
                let obj = -(b * b) / a;
                if obj < best {
                    best = obj;
                    j = t;
                }
            }
        }
        if gmax + gmax2 < params.tolerance || j == usize::MAX {
            break;
        }
        iterations += 1;
        if iterations > params.max_iterations {
            return Err(DtaError::NotConverged { iterations: params.max_iterations });
        }

        let kj: Vec<f64> = cache.row(j).to_vec();
        let (ci, cj) = (cost[i], cost[j]);
        let (old_i, old_j) = (alpha[i], alpha[j]);
        let qij = y[i] * y[j] * ki[j];
        if y[i] != y[j] {
            let mut quad = 2.0 + 2.0 * qij;
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > ci - cj {
                if alpha[i] > ci {
                    alpha[i] = ci;
                    alpha[j] = ci - diff;
                }
            } else if alpha[j] > cj {
                alpha[j] = cj;
                alpha[i] = cj + diff;
            }
        } else {
            let mut quad = 2.0 - 2.0 * qij;
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > ci {
                if alpha[i] > ci {
                    alpha[i] = ci;
                    alpha[j] = sum - ci;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > cj {
                if alpha[j] > cj {
                    alpha[j] = cj;
                    alpha[i] = sum - cj;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        for t in 0..n {
            grad[t] += y[t] * (y[i] * ki[t] * di + y[j] * kj[t] * dj);
        }
    }

    // bias from free variables, or the midpoint of the feasible interval
    let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut sum_free, mut n_free) = (0.0, 0usize);
    for t in 0..n {
        let yg = y[t] * grad[t];
        if alpha[t] >= cost[t] {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if alpha[t] <= 0.0 {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            sum_free += yg;
            n_free += 1;
        }
    }
    let rho = if n_free > 0 { sum_free / n_free as f64 } else { (ub + lb) / 2.0 };

    let mut support = Vec::new();
    let mut coef = Vec::new();
    for t in 0..n {
        if alpha[t] > 0.0 {
            support.push(x[t].clone());
            coef.push(y[t] * alpha[t]);
        }
    }
    Ok(DecisionFunction { support, coef, bias: -rho, gamma: params.gamma, iterations })
}

/// Sigmoid 1 / (1 + exp(A·f + B)) mapping decision values to P(active).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Platt {
    pub a: f64,
    pub b: f64,
}

// keeps the sigmoid strictly increasing in the decision value
const MAX_PLATT_A: f64 = -1e-9;

impl Platt {
    /// Newton fit with backtracking (Lin, Lin & Weng's formulation,
    /// with Bayesian-smoothed targets).
    pub fn fit(decisions: &[f64], labels: &[bool]) -> Platt {
        let prior1 = labels.iter().filter(|&&l| l).count() as f64;
        let prior0 = labels.len() as f64 - prior1;
        let hi = (prior1 + 1.0) / (prior1 + 2.0);
        let lo = 1.0 / (prior0 + 2.0);
        let t: Vec<f64> = labels.iter().map(|&l| if l { hi } else { lo }).collect();
        let objective = |a: f64, b: f64| -> f64 {
            decisions
                .iter()
                .zip(&t)
                .map(|(&f, &ti)| {
                    let z = f * a + b;
                    if z >= 0.0 {
                        ti * z + (-z).exp().ln_1p()
                    } else {
                        (ti - 1.0) * z + z.exp().ln_1p()
                    }
                })
                .sum()
        };
        let (mut a, mut b) = (0.0, ((prior0 + 1.0) / (prior1 + 1.0)).ln());
        let mut fval = objective(a, b);
        for _ in 0..100 {
            let (mut h11, mut h22, mut h21, mut g1, mut g2) = (1e-12, 1e-12, 0.0, 0.0, 0.0);
            for (&f, &ti) in decisions.iter().zip(&t) {
                let z = f * a + b;
                let (p, q) = if z >= 0.0 {
                    let e = (-z).exp();
                    (e / (1.0 + e), 1.0 / (1.0 + e))
                } else {
                    let e = z.exp();
                    (1.0 / (1.0 + e), e / (1.0 + e))
                };
                let d2 = p * q;
                h11 += f * f * d2;
                h22 += d2;
                h21 += f * d2;
                let d1 = ti - p;
                g1 += f * d1;
                g2 += d1;
            }
            if g1.abs() < 1e-5 && g2.abs() < 1e-5 {
                break;
            }
            let det = h11 * h22 - h21 * h21;
            let da = -(h22 * g1 - h21 * g2) / det;
            let db = -(-h21 * g1 + h11 * g2) / det;
            let gd = g1 * da + g2 * db;
            let mut step = 1.0;
            while step >= 1e-10 {
                let (na, nb) = (a + step * da, b + step * db);
                let nf = objective(na, nb);
                if nf < fval + 1e-4 * step * gd {
                    a = na;
                    b = nb;
                    fval = nf;
                    break;
                }
                step /= 2.0;
            }
            if step < 1e-10 {
                break;
            }
        }
        Platt { a: a.min(MAX_PLATT_A), b }
    }

    pub fn probability(&self, decision: f64) -> f64 {
        let z = decision * self.a + self.b;
        let p = if z >= 0.0 {
            let e = (-z).exp();
            e / (1.0 + e)
        } else {
            1.0 / (1.0 + z.exp())
        };
        p.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON)
    }
}

/// Cross-validation figures for one candidate C.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub c: f64,
    pub fold_accuracy: Vec<f64>,
    pub fold_f1: Vec<f64>,
    pub mean_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingSummary {
    pub n_samples: usize,
    pub n_active: usize,
    pub n_inactive: usize,
    pub folds: usize,
    pub seed: u64,
    pub grid: Vec<CvResult>,
    pub training_accuracy: f64,
    pub iterations: u64,
}

/// Trained classifier with its probability calibration.
#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel {
    pub function: DecisionFunction,
    pub c: f64,
    pub platt: Platt,
    pub summary: TrainingSummary,
}

impl SvmModel {
    pub fn decision(&self, x: &Fingerprint) -> f64 {
        self.function.decision(x)
    }

    pub fn probability(&self, x: &Fingerprint) -> f64 {
        self.platt.probability(self.decision(x))
    }

    pub fn to_json(&self) -> Result<String, DtaError> {
        let file = ModelFile {
            gamma: self.function.gamma,
            c: self.c,
            bias: self.function.bias,
            platt_a: self.platt.a,
            platt_b: self.platt.b,
            nbits: self.function.support.first().map_or(DEFAULT_NBITS, Fingerprint::len),
            support_vectors: self.function.support.iter().map(Fingerprint::to_hex).collect(),
            coefficients: self.function.coef.clone(),
            summary: self.summary.clone(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(text: &str) -> Result<SvmModel, DtaError> {
        let file: ModelFile = serde_json::from_str(text)?;
        if file.support_vectors.len() != file.coefficients.len() {
            return Err(DtaError::BadModel("support vector and coefficient counts differ".into()));
        }
        let support = file
            .support_vectors
            .iter()
            .map(|h| Fingerprint::from_hex(h, file.nbits, DEFAULT_RADIUS))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| DtaError::BadModel("bad support vector hex".into()))?;
        Ok(SvmModel {
            function: DecisionFunction {
                support,
                coef: file.coefficients,
                bias: file.bias,
                gamma: file.gamma,
                iterations: file.summary.iterations,
            },
            c: file.c,
            platt: Platt { a: file.platt_a, b: file.platt_b },
            summary: file.summary,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    gamma: f64,
    c: f64,
    bias: f64,
    platt_a: f64,
    platt_b: f64,
    nbits: usize,
    support_vectors: Vec<String>,
    coefficients: Vec<f64>,
    summary: TrainingSummary,
}

/// Training options.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainOptions {
    pub c_grid: Vec<f64>,
    pub folds: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub max_iterations: u64,
}

impl Default for TrainOptions {
    fn default() -> Self {
        TrainOptions {
            c_grid: DEFAULT_C_GRID.to_vec(),
            folds: DEFAULT_FOLDS,
            seed: 0,
            tolerance: TOLERANCE,
            max_iterations: MAX_ITERATIONS,
        }
    }
}

/// Stratified fold assignment. Identical samples (same bits and label)
/// always share a fold so that oversampled copies never straddle a split.
pub fn stratified_folds(x: &[Fingerprint], labels: &[bool], folds: usize, seed: u64) -> Vec<usize> {
    let mut group_of: HashMap<(&[u64], bool), usize> = HashMap::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, (fp, &l)) in x.iter().zip(labels).enumerate() {
        let g = *group_of.entry((fp.words(), l)).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(i);
    }
    let mut rng = SeededRng::new(seed);
    let mut fold = vec![0; x.len()];
    for class in [true, false] {
        let mut ids: Vec<usize> = (0..groups.len()).filter(|&g| labels[groups[g][0]] == class).collect();
        rng.shuffle(&mut ids);
        for (k, g) in ids.into_iter().enumerate() {
            for &i in &groups[g] {
                fold[i] = k % folds;
            }
        }
    }
    fold
}

fn accuracy_f1(pred: &[bool], truth: &[bool]) -> (f64, f64) {
    let mut tp = 0.0;
    let mut fp = 0.0;
    let mut fneg = 0.0;
    let mut correct = 0.0;
    for (&p, &t) in pred.iter().zip(truth) {
        if p == t {
            correct += 1.0;
        }
        match (p, t) {
            (true, true) => tp += 1.0,
            (true, false) => fp += 1.0,
            (false, true) => fneg += 1.0,
            _ => {}
        }
    }
    let acc = if pred.is_empty() { 0.0 } else { correct / pred.len() as f64 };
    let f1 = if tp == 0.0 { 0.0 } else { 2.0 * tp / (2.0 * tp + fp + fneg) };
    (acc, f1)
}

/// Grid search over C with stratified k-fold cross-validation, refit on
/// all data with the best C (first on ties) and Platt calibration on the
/// out-of-fold decision values of that C.
pub fn train_svm(x: &[Fingerprint], labels: &[bool], options: &TrainOptions) -> Result<SvmModel, DtaError> {
    let n_active = labels.iter().filter(|&&l| l).count();
    let n_inactive = labels.len() - n_active;
    if n_active == 0 || n_inactive == 0 {
        return Err(DtaError::SingleClass);
    }
    if n_active < options.folds || n_inactive < options.folds {
        return Err(DtaError::TooFewSamples { folds: options.folds });
    }
    if options.c_grid.is_empty() {
        return Err(DtaError::EmptyGrid);
    }
    let gamma = default_gamma(x);
    let fold = stratified_folds(x, labels, options.folds, options.seed);
    let params = |c: f64| SolverParams {
        c,
        gamma,
        balanced: true,
        tolerance: options.tolerance,
        max_iterations: options.max_iterations,
    };

    let mut grid = Vec::new();
    let mut oof_by_c: Vec<Vec<f64>> = Vec::new();
    for &c in &options.c_grid {
        let mut oof = vec![0.0; x.len()];
        let mut fold_accuracy = Vec::new();
        let mut fold_f1 = Vec::new();
        for k in 0..options.folds {
            let train: Vec<usize> = (0..x.len()).filter(|&i| fold[i] != k).collect();
            let test: Vec<usize> = (0..x.len()).filter(|&i| fold[i] == k).collect();
            let tx: Vec<Fingerprint> = train.iter().map(|&i| x[i].clone()).collect();
            let ty: Vec<bool> = train.iter().map(|&i| labels[i]).collect();
            let f = solve(&tx, &ty, params(c))?;
            let mut pred = Vec::with_capacity(test.len());
            let mut truth = Vec::with_capacity(test.len());
            for &i in &test {
                let d = f.decision(&x[i]);
                oof[i] = d;
                pred.push(d > 0.0);
                truth.push(labels[i]);
            }
            let (acc, f1) = accuracy_f1(&pred, &truth);
            fold_accuracy.push(acc);
            fold_f1.push(f1);
        }
        let mean_accuracy = fold_accuracy.iter().sum::<f64>() / fold_accuracy.len() as f64;
        log::debug!("C = {c}: CV accuracy {mean_accuracy:.4}");
        grid.push(CvResult { c, fold_accuracy, fold_f1, mean_accuracy });
        oof_by_c.push(oof);
    }
    let mut best = 0;
    for (k, r) in grid.iter().enumerate() {
        if r.mean_accuracy > grid[best].mean_accuracy {
            best = k;
        }
    }
    let c = grid[best].c;
    let function = solve(x, labels, params(c))?;
    let platt = Platt::fit(&oof_by_c[best], labels);
    let pred: Vec<bool> = x.iter().map(|xi| function.decision(xi) > 0.0).collect();
    let (training_accuracy, _) = accuracy_f1(&pred, labels);
    let summary = TrainingSummary {
        n_samples: x.len(),
        n_active,
        n_inactive,
        folds: options.folds,
        seed: options.seed,
        grid,
        training_accuracy,
        iterations: function.iterations,
    };
    Ok(SvmModel { function, c, platt, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(bits: &[usize]) -> Fingerprint {
        Fingerprint::from_bits(2048, 2, bits.iter().copied())
    }

    fn params(c: f64, gamma: f64) -> SolverParams {
        SolverParams { c, gamma, balanced: true, tolerance: 1e-3, max_iterations: MAX_ITERATIONS }
    }

    #[test]
    fn gamma_from_bit_density() {
        let fps = vec![fp(&[0, 1]), fp(&[2, 3])];
        let p: f64 = 4.0 / (2.0 * 2048.0);
        assert!((default_gamma(&fps) - 1.0 / (2048.0 * p * (1.0 - p))).abs() < 1e-12);
        assert_eq!(default_gamma(&[fp(&[])]), 1.0);
    }

    #[test]
    fn two_point_problem_is_symmetric() {
        let x = vec![fp(&[0, 1, 2]), fp(&[10, 11, 12])];
        let f = solve(&x, &[true, false], params(1.0, 0.1)).unwrap();
        let (d0, d1) = (f.decision(&x[0]), f.decision(&x[1]));
        assert!(d0 > 0.0 && d1 < 0.0);
        assert!((d0 + d1).abs() < 1e-9);
        assert!(f.bias.abs() < 1e-9);
        let mid = fp(&[]);
        assert!(f.decision(&mid).abs() < 1e-9);
    }

    #[test]
    fn platt_is_increasing_and_bounded() {
        let d = [-2.0, -1.0, -0.5, 0.3, 1.0, 2.5];
        let l = [false, false, true, false, true, true];
        let p = Platt::fit(&d, &l);
        assert!(p.a < 0.0);
        let mut prev = 0.0;
        for k in -50..50 {
            let v = p.probability(k as f64 * 0.2);
            assert!(v > 0.0 && v < 1.0);
            assert!(v > prev);
            prev = v;
        }
        assert!(p.probability(1e6) < 1.0 && p.probability(-1e6) > 0.0);
    }

    #[test]
    fn folds_are_stratified_and_keep_copies_together() {
        let mut x = Vec::new();
        let mut l = Vec::new();
        for i in 0..12 {
            x.push(fp(&[i]));
            l.push(i % 2 == 0);
        }
        x.push(fp(&[0]));
        l.push(true);
        let folds = stratified_folds(&x, &l, 3, 5);
        assert_eq!(folds[12], folds[0]);
        for k in 0..3 {
            let pos = (0..12).filter(|&i| folds[i] == k && l[i]).count();
            assert_eq!(pos, 2);
        }
    }

    #[test]
    fn model_json_round_trip() {
        let mut x = Vec::new();
        let mut l = Vec::new();
        for i in 0..12 {
            let base = if i % 2 == 0 { 0 } else { 100 };
            x.push(fp(&[base, base + 1, base + 2 + i]));
            l.push(i % 2 == 0);
        }
        let m = train_svm(&x, &l, &TrainOptions::default()).unwrap();
        let back = SvmModel::from_json(&m.to_json().unwrap()).unwrap();
        assert_eq!(back, m);
        for xi in &x {
            assert_eq!(back.decision(xi).to_bits(), m.decision(xi).to_bits());
        }
    }

    #[test]
    fn training_errors() {
        let x = vec![fp(&[1]), fp(&[2])];
        assert!(matches!(train_svm(&x, &[true, true], &TrainOptions::default()), Err(DtaError::SingleClass)));
        assert!(matches!(
            train_svm(&x, &[true, false], &TrainOptions::default()),
            Err(DtaError::TooFewSamples { folds: 3 })
        ));
    }
}
