//! Iterative reduced random search with the stability-index stopping rule:
//! cumulative reduced samples of the best random trials, a Powell polish of
//! every retained point, and the diameter of the retained set (in a
//! problem-supplied metric) as the measure of how well-determined the
//! minimizer is.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::optim::{
    powell_minimize, stability_index, BoxDomain, MinimizeOutcome, Objective, PowellParams,
    StopReason, TraceRow,
};

#[derive(Debug, Clone, PartialEq)]
pub struct IrrsParams {
    /// Batch size L per iteration.
    pub batch: usize,
    /// Reduced fraction gamma in (0, 1).
    pub gamma: f64,
    /// Stability threshold eta on the index.
    pub eta: f64,
    /// Unstable-stop factor beta > 1: stop when every retained value is
    /// within beta of the best.
    pub beta: f64,
    /// Iteration budget.
    pub j_max: usize,
    /// Polish settings; `initial_step` is the nu parameter (fraction of a
    /// box edge used as the first line step).
    pub powell: PowellParams,
}

impl Default for IrrsParams {
    fn default() -> Self {
        IrrsParams {
            batch: 5000,
            gamma: 0.01,
            eta: 0.02,
            beta: 1.10,
            j_max: 30,
            powell: PowellParams { initial_step: 0.16, ..Default::default() },
        }
    }
}

#[derive(Debug, Clone)]
struct Member {
    point: Vec<f64>,
    value: f64,
    polished: bool,
}

#[derive(Debug, Clone)]
pub struct IrrsResult {
    pub outcome: MinimizeOutcome,
    /// The final reduced sample (points and values), best first.
    pub final_points: Vec<Vec<f64>>,
    pub final_values: Vec<f64>,
    pub trace: Vec<TraceRow>,
}

pub fn irrs_minimize(
    obj: &Objective,
    domain: &BoxDomain,
    metric: &(dyn Fn(&[f64], &[f64]) -> f64 + Sync),
    params: &IrrsParams,
    seed: u64,
) -> IrrsResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let evals0 = obj.evals();
    let keep = ((params.gamma * params.batch as f64).ceil() as usize).max(1);

    let mut retained: Vec<Member> = Vec::new();
    let mut trace = Vec::new();
    let mut stopped_by = StopReason::Budget;
    let mut index = f64::NAN;
    let mut iterations = 0usize;

    for j in 1..=params.j_max {
        iterations = j;
        // New batch, reduced to its best slice, then polished: the merge
        // below compares like with like, so later batches can displace
        // stale local minima from the retained set.
        let mut batch: Vec<Member> = (0..params.batch)
            .map(|_| {
                let point = domain.sample(&mut rng);
                let value = obj.value(&point);
                Member { point, value, polished: false }
            })
            .collect();
        batch.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap());
        batch.truncate(keep);
        for m in batch.iter_mut() {
            let out = powell_minimize(obj, &m.point, domain, &params.powell);
            m.point = out.best_point;
            m.value = out.best_value;
            m.polished = true;
        }

        // Merge with the previous reduced set, keep the overall best.
        retained.extend(batch);
        retained.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap());
        retained.truncate(keep);

        let pts: Vec<Vec<f64>> = retained.iter().map(|m| m.point.clone()).collect();
        index = stability_index(&pts, metric);
        trace.push(TraceRow {
            iteration: j,
            best_value: retained[0].value,
            stability_index: Some(index),
            searches: j,
            minima: retained.len(),
        });

        if index <= params.eta {
            stopped_by = StopReason::Stability;
            break;
        }
        let best = retained[0].value;
        let all_close = retained
            .iter()
            .all(|m| m.value <= params.beta * best + f64::MIN_POSITIVE);
        if all_close {
            // Distinct minimizers with practically equal values: the
            // minimization is unstable and the index quantifies by how much.
            stopped_by = StopReason::Tolerance;
            break;
        }
    }

    let best = retained.first().cloned().unwrap_or(Member {
        point: vec![],
        value: f64::INFINITY,
        polished: false,
    });
    IrrsResult {
        outcome: MinimizeOutcome {
            best_point: best.point,
            best_value: best.value,
            stability_index: if index.is_nan() { None } else { Some(index) },
            iterations,
            evals: obj.evals() - evals0,
            seed,
            stopped_by,
        },
        final_points: retained.iter().map(|m| m.point.clone()).collect(),
        final_values: retained.iter().map(|m| m.value).collect(),
        trace,
    }
}
