//! Report tables behind the command-line subcommands.
//!
//! Every function returns a [`Table`] whose CSV rendering depends only on
//! the inputs, so repeated runs with the same seed are byte-identical.
//! Wall-clock columns stay empty unless timings are requested.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evaluation::{exact_favg, mc_favg, EvaluationReport, Method};
use crate::model::{Constraint, Instance};
use crate::oracles::{
    certify_with_ratio, check_adaptive_monotone, check_adaptive_submodular, monotonicity_ratio,
    optimal_policy, ratio_bound, OracleLimits,
};
use crate::policies::{simulate, Action, Policy};
use crate::problem::Problem;

/// Settings shared by all subcommands.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub samples: u64,
    pub tolerance: f64,
    pub limits: OracleLimits,
    /// Fill `wall_time_ms`; makes output nondeterministic.
    pub timings: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 42,
            samples: 100_000,
            tolerance: 1e-9,
            limits: OracleLimits::default(),
            timings: false,
        }
    }
}

/// Header plus string cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }

    /// RFC 4180 CSV.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let io = |e: csv::Error| Error::InvalidArgument(format!("writing CSV: {e}"));
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(out);
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row).map_err(io)?;
        }
        w.flush()
            .map_err(|e| Error::InvalidArgument(format!("writing CSV: {e}")))
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("CSV output is UTF-8"))
    }
}

fn num(v: f64) -> String {
    format!("{v}")
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// One line of the headline report.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub instance_id: String,
    pub policy_id: String,
    pub constraint: Constraint,
    pub k: f64,
    pub m: Option<f64>,
    pub opt_value: Option<f64>,
    pub policy_value: f64,
    pub theoretical_ratio: Option<f64>,
    pub achieved_ratio: Option<f64>,
    pub pass: Option<bool>,
    pub method: Method,
    pub samples: Option<u64>,
    pub std_error: Option<f64>,
    pub seed: Option<u64>,
    pub wall_time_ms: Option<f64>,
}

pub const REPORT_HEADER: [&str; 15] = [
    "instance-id",
    "policy-id",
    "constraint",
    "k",
    "m",
    "opt_value",
    "policy_value",
    "theoretical_ratio",
    "achieved_ratio",
    "pass",
    "method",
    "samples",
    "std_error",
    "seed",
    "wall_time_ms",
];

impl ReportRow {
    fn cells(&self) -> Vec<String> {
        vec![
            self.instance_id.clone(),
            self.policy_id.clone(),
            self.constraint.to_string(),
            num(self.k),
            opt(self.m),
            opt(self.opt_value),
            num(self.policy_value),
            opt(self.theoretical_ratio),
            opt(self.achieved_ratio),
            opt(self.pass),
            self.method.to_string(),
            opt(self.samples),
            opt(self.std_error),
            opt(self.seed),
            opt(self.wall_time_ms),
        ]
    }

    fn from_evaluation(inst: &Instance, policy: &Policy, rep: &EvaluationReport) -> Self {
        ReportRow {
            instance_id: inst.name().to_string(),
            policy_id: policy.label(),
            constraint: inst.constraint(),
            k: inst.budget(),
            m: None,
            opt_value: None,
            policy_value: rep.value,
            theoretical_ratio: None,
            achieved_ratio: None,
            pass: None,
            method: rep.method,
            samples: rep.samples,
            std_error: rep.std_error,
            seed: rep.seed,
            wall_time_ms: None,
        }
    }
}

pub fn report_table(rows: &[ReportRow]) -> Table {
    Table {
        header: REPORT_HEADER.to_vec(),
        rows: rows.iter().map(ReportRow::cells).collect(),
    }
}

fn elapsed_ms(start: Instant, config: &ExperimentConfig) -> Option<f64> {
    config
        .timings
        .then(|| (start.elapsed().as_secs_f64() * 1e6).round() / 1e3)
}

/// Policies whose guarantee is certified: the random greedy ones against
/// the cardinality bound, the sampled density greedy against the knapsack
/// bound.
pub fn has_guarantee(policy: &Policy) -> bool {
    matches!(
        policy,
        Policy::RandomGreedy | Policy::RandomGreedyDummies | Policy::SamplingDensityGreedy
    )
}

/// End-to-end certification of one policy.
pub fn certify_row(
    problem: &Problem,
    policy: &Policy,
    config: &ExperimentConfig,
) -> Result<ReportRow> {
    let start = Instant::now();
    policy.validate(problem)?;
    let ratio = monotonicity_ratio(problem, &config.limits)?;
    let rep = certify_with_ratio(problem, policy, ratio.m, &config.limits)?;
    let inst = problem.instance();
    Ok(ReportRow {
        instance_id: inst.name().to_string(),
        policy_id: policy.label(),
        constraint: inst.constraint(),
        k: inst.budget(),
        m: Some(rep.m),
        opt_value: Some(rep.opt_value),
        policy_value: rep.policy_value,
        theoretical_ratio: Some(rep.theoretical_ratio),
        achieved_ratio: rep.achieved_ratio,
        pass: Some(rep.policy_value >= rep.theoretical_ratio * rep.opt_value - config.tolerance),
        method: Method::Exact,
        samples: None,
        std_error: None,
        seed: None,
        wall_time_ms: elapsed_ms(start, config),
    })
}

/// `f_avg` of one policy, exactly or by Monte Carlo.
pub fn evaluate_row(
    problem: &Problem,
    policy: &Policy,
    method: Method,
    config: &ExperimentConfig,
) -> Result<ReportRow> {
    let start = Instant::now();
    let rep = match method {
        Method::Exact => exact_favg(problem, policy, config.limits.node_limit)?,
        Method::MonteCarlo => mc_favg(problem, policy, config.samples, config.seed)?,
    };
    let mut row = ReportRow::from_evaluation(problem.instance(), policy, &rep);
    row.wall_time_ms = elapsed_ms(start, config);
    Ok(row)
}

/// Policies swept by [`bench`] on an instance.
pub fn bench_policies(inst: &Instance) -> Vec<Policy> {
    match inst.constraint() {
        Constraint::Cardinality => vec![
            Policy::RandomGreedy,
            Policy::SamplingDensityGreedy,
            Policy::Greedy,
        ],
        Constraint::Knapsack => vec![
            Policy::SamplingDensityGreedy,
            Policy::BestSingleton,
            Policy::Greedy,
        ],
    }
}

/// Sweeps `instances` × [`bench_policies`]: certification rows for policies
/// with a guarantee, plain exact values with the optimum for the rest.
pub fn bench(instances: &[Instance], config: &ExperimentConfig) -> Result<Vec<ReportRow>> {
    let per_instance = instances
        .par_iter()
        .map(|inst| -> Result<Vec<ReportRow>> {
            let start = Instant::now();
            let problem = Problem::new(inst.clone())?;
            let m = monotonicity_ratio(&problem, &config.limits)?.m;
            let (_, opt_value) = optimal_policy(&problem, &config.limits)?;
            let setup = start.elapsed();
            bench_policies(inst)
                .into_iter()
                .map(|policy| {
                    let start = Instant::now();
                    let value = exact_favg(&problem, &policy, config.limits.node_limit)?.value;
                    let theoretical = if has_guarantee(&policy) {
                        let c = crate::oracles::bound_constraint(&policy, &problem);
                        Some(ratio_bound(m, c)?)
                    } else {
                        None
                    };
                    let time = config
                        .timings
                        .then(|| ((setup + start.elapsed()).as_secs_f64() * 1e6).round() / 1e3);
                    Ok(ReportRow {
                        instance_id: inst.name().to_string(),
                        policy_id: policy.label(),
                        constraint: inst.constraint(),
                        k: inst.budget(),
                        m: Some(m),
                        opt_value: Some(opt_value),
                        policy_value: value,
                        theoretical_ratio: theoretical,
                        achieved_ratio: (opt_value > 0.0).then(|| value / opt_value),
                        pass: theoretical.map(|t| value >= t * opt_value - config.tolerance),
                        method: Method::Exact,
                        samples: None,
                        std_error: None,
                        seed: Some(config.seed),
                        wall_time_ms: time,
                    })
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows: Vec<ReportRow> = per_instance.into_iter().flatten().collect();
    rows.sort_by(|a, b| {
        (a.instance_id.as_str(), a.policy_id.as_str())
            .cmp(&(b.instance_id.as_str(), b.policy_id.as_str()))
    });
    Ok(rows)
}

/// Adaptive submodularity and monotonicity, with witnesses on failure.
pub fn check_table(problem: &Problem, config: &ExperimentConfig) -> Result<Table> {
    let inst = problem.instance();
    let mut t = Table::new(vec!["instance-id", "property", "pass", "witness"]);
    let checks = [
        (
            "adaptive-submodular",
            check_adaptive_submodular(problem, config.tolerance, &config.limits)?,
        ),
        (
            "adaptive-monotone",
            check_adaptive_monotone(problem, config.tolerance, &config.limits)?,
        ),
    ];
    for (name, out) in checks {
        t.rows.push(vec![
            inst.name().to_string(),
            name.to_string(),
            out.passed().to_string(),
            out.witness().map(|w| w.describe(inst)).unwrap_or_default(),
        ]);
    }
    Ok(t)
}

/// The monotonicity ratio with its witness pair.
pub fn ratio_table(problem: &Problem, config: &ExperimentConfig) -> Result<Table> {
    let inst = problem.instance();
    let r = monotonicity_ratio(problem, &config.limits)?;
    let mut t = Table::new(vec![
        "instance-id",
        "m",
        "m_raw",
        "m_feasible",
        "policies",
        "witness_policy",
        "witness_follow_up",
        "numerator",
        "denominator",
    ]);
    let w = r.witness.as_ref();
    t.rows.push(vec![
        inst.name().to_string(),
        num(r.m),
        num(r.raw),
        num(r.feasible),
        r.policies.to_string(),
        opt(w.map(|w| w.policy.render(inst))),
        opt(w.map(|w| w.follow_up.render(inst))),
        opt(w.map(|w| w.numerator)),
        opt(w.map(|w| w.denominator)),
    ]);
    Ok(t)
}

/// The optimal policy value and tree.
pub fn opt_table(problem: &Problem, config: &ExperimentConfig) -> Result<Table> {
    let inst = problem.instance();
    let (tree, value) = optimal_policy(problem, &config.limits)?;
    let mut t = Table::new(vec![
        "instance-id",
        "constraint",
        "k",
        "opt_value",
        "policy",
    ]);
    t.rows.push(vec![
        inst.name().to_string(),
        inst.constraint().to_string(),
        num(inst.budget()),
        num(value),
        tree.render(inst),
    ]);
    Ok(t)
}

/// One seeded trajectory, one row per step and a final `stop` row.
pub fn run_table(problem: &Problem, policy: &Policy, config: &ExperimentConfig) -> Result<Table> {
    policy.validate(problem)?;
    let inst = problem.instance();
    let traj = simulate(problem, policy, config.seed)?;
    let mut t = Table::new(vec![
        "instance-id",
        "policy-id",
        "seed",
        "step",
        "action",
        "item",
        "state",
        "utility",
    ]);
    let base = |step: usize| {
        vec![
            inst.name().to_string(),
            policy.label(),
            config.seed.to_string(),
            step.to_string(),
        ]
    };
    for (i, s) in traj.steps.iter().enumerate() {
        let mut row = base(i + 1);
        let (action, item) = match s.action {
            Action::Select(e) => ("select", inst.item_name(e).to_string()),
            Action::NoOp => ("no-op", String::new()),
            Action::Dummy(d) => ("dummy", format!("d{d}")),
        };
        row.push(action.to_string());
        row.push(item);
        row.push(opt(s.state.map(|st| inst.states().token(st))));
        row.push(String::new());
        t.rows.push(row);
    }
    let mut last = base(traj.steps.len() + 1);
    last.extend([
        "stop".into(),
        String::new(),
        String::new(),
        num(traj.utility),
    ]);
    t.rows.push(last);
    Ok(t)
}

/// Value of the guarantee formula.
pub fn bound_table(m: f64, constraint: Constraint) -> Result<Table> {
    let mut t = Table::new(vec!["m", "constraint", "ratio"]);
    t.rows.push(vec![
        num(m),
        constraint.to_string(),
        num(ratio_bound(m, constraint)?),
    ]);
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;
    use crate::fixtures;

    #[test]
    fn certify_edge_row() {
        let row = certify_row(
            &fixtures::edge(2),
            &Policy::RandomGreedy,
            &ExperimentConfig::default(),
        )
        .unwrap();
        assert_eq!(row.pass, Some(true));
        assert_eq!(row.achieved_ratio, Some(1.0));
        let csv = report_table(&[row]).to_csv().unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), REPORT_HEADER.join(","));
        assert_eq!(
            lines.next().unwrap(),
            "graph_cut_edge,arg,cardinality,2,0,1,1,0.36787944117144233,1,true,exact,,,,"
        );
    }

    #[test]
    fn achieved_ratio_empty_when_opt_is_zero() {
        let row = certify_row(
            &fixtures::zero(2, 1),
            &Policy::RandomGreedy,
            &ExperimentConfig::default(),
        )
        .unwrap();
        assert_eq!(row.achieved_ratio, None);
        assert_eq!(row.cells()[8], "");
    }

    #[test]
    fn bound_at_half() {
        let t = bound_table(0.5, Constraint::Cardinality).unwrap();
        assert_eq!(t.rows[0][2], "0.5");
    }

    #[test]
    fn bench_is_deterministic_and_sorted() {
        let config = ExperimentConfig::default();
        let insts: Vec<Instance> = ["graph_cut_edge", "blend_050", "knapsack_cut"]
            .iter()
            .map(|n| bundled::load(n).unwrap())
            .collect();
        let a = report_table(&bench(&insts, &config).unwrap())
            .to_csv()
            .unwrap();
        let b = report_table(&bench(&insts, &config).unwrap())
            .to_csv()
            .unwrap();
        assert_eq!(a, b);
        let ids: Vec<&str> = a
            .lines()
            .skip(1)
            .map(|l| l.split(',').next().unwrap())
            .collect();
        assert!(ids.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn run_rows_end_with_stop() {
        let t = run_table(
            &fixtures::edge(2),
            &Policy::RandomGreedy,
            &ExperimentConfig::default(),
        )
        .unwrap();
        let last = t.rows.last().unwrap();
        assert_eq!(last[4], "stop");
        assert_eq!(last[7], "1");
        assert_eq!(t.rows[1][4], "no-op");
    }
}
