//! The conjecture registry: one recipe per problem, each producing a
//! persisted [`Report`].

mod additive;
mod gaussian;
mod hypercube;
mod threshold;

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::config::Config;
use crate::error::{HarnessError, Result};
use crate::functional::Functional;
use crate::params::Params;
use crate::report::{Report, Verdict, Witness, SCHEMA_VERSION};
use crate::search::{extremal_search, Direction, SearchOutcome};
use crate::space::SearchSpace;

/// Computed quantities of one run, keyed by name.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Metrics(BTreeMap<String, Value>);

impl Metrics {
    pub fn put(&mut self, key: impl Into<String>, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("metrics are plain data");
        self.0.insert(key.into(), v);
    }

    /// Extremum, witness, tie count and coverage of a search, under `prefix`.
    pub fn search(&mut self, prefix: &str, out: &SearchOutcome) {
        let key = |k: &str| format!("{prefix}{k}");
        self.put(key("extremum"), out.best.as_ref().map(|b| b.value));
        self.put(key("witness"), out.best.as_ref().map(|b| b.witness.to_object()));
        self.put(key("ties"), out.ties);
        self.put(key("evaluated"), out.evaluated);
        self.put(key("defined"), out.defined);
    }

    pub fn into_map(self) -> BTreeMap<String, Value> {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub metrics: Metrics,
    pub budgeted: bool,
}

impl Outcome {
    pub fn new(verdict: Verdict, metrics: Metrics) -> Self {
        Self {
            verdict,
            witness: None,
            metrics,
            budgeted: false,
        }
    }

    pub fn report_only(metrics: Metrics) -> Self {
        Self::new(Verdict::ReportOnly, metrics)
    }

    /// `HoldsAtScale` or `Counterexample` by a checked condition.
    pub fn check(holds: bool, metrics: Metrics) -> Self {
        Self::new(
            if holds {
                Verdict::HoldsAtScale
            } else {
                Verdict::Counterexample
            },
            metrics,
        )
    }

    pub fn with_witness(mut self, witness: Option<Witness>) -> Self {
        self.witness = witness;
        self
    }

    pub fn budgeted(mut self, budgeted: bool) -> Self {
        self.budgeted |= budgeted;
        self
    }
}

pub(crate) fn witness(out: &SearchOutcome, f: &Functional) -> Option<Witness> {
    out.best.as_ref().map(|b| Witness::new(&b.witness, f, b.value))
}

pub(crate) fn functional(text: &str) -> Result<Functional> {
    text.parse()
}

/// A search over a registered functional with its extremum recorded.
pub(crate) fn searched(
    m: &mut Metrics,
    prefix: &str,
    space: &SearchSpace,
    f: &Functional,
    direction: Direction,
    config: &Config,
) -> Result<SearchOutcome> {
    let out = extremal_search(space, f, direction, config.node_budget)?;
    m.search(prefix, &out);
    Ok(out)
}

type Recipe = fn(&mut Params, &Config) -> Result<Outcome>;

pub struct Entry {
    pub id: &'static str,
    pub title: &'static str,
    run: Recipe,
}

const fn entry(id: &'static str, title: &'static str, run: Recipe) -> Entry {
    Entry { id, title, run }
}

static ENTRIES: &[Entry] = &[
    entry("correlation-mod3", "Correlation of mod3 with low-degree F2 polynomials", additive::correlation_mod3),
    entry("tomaszewski-sharp", "Tomaszewski: Pr[|<a,x>| <= 1] >= 1/2 for unit a", threshold::tomaszewski),
    entry("talagrand", "Talagrand convolution: tails of T_rho f for E f = 1", hypercube::talagrand),
    entry("sensitivity-gap", "Sensitivity versus block sensitivity and degree", hypercube::sensitivity_gap),
    entry("gotsman-linial", "Gotsman-Linial: most influential degree-k PTF", threshold::gotsman_linial),
    entry("holzman", "Holzman: strict local minima of degree-2 polynomials", hypercube::holzman),
    entry("pfr", "Polynomial Freiman-Ruzsa and Bogolyubov quantities", additive::pfr),
    entry("mansour", "Mansour: spectral concentration of DNFs", hypercube::mansour),
    entry("bernoulli", "Bernoulli conjecture: widths b(T) and g(T)", gaussian::bernoulli),
    entry("fei-exhaustive", "Fourier entropy-influence ratio, exhaustive", hypercube::fei),
    entry("min-entropy", "Min-entropy-influence ratio, exhaustive", hypercube::min_entropy),
    entry("majority-least-stable", "Majority is least stable among threshold functions", threshold::majority_least_stable),
    entry("w1-ltf", "Level-1 weight of unbiased threshold functions", threshold::w1_ltf),
    entry("peres", "Noise sensitivity of threshold functions against Peres' bound", threshold::peres),
    entry("nicd-multi", "Non-interactive correlation distillation over odd functions", hypercube::nicd_multi),
    entry("intersections-ns", "Noise sensitivity of intersections of halfspaces", threshold::intersections_ns),
    entry("erasure-dictator", "Correlation distillation with erasures", hypercube::erasure_dictator),
    entry("triangle-removal", "Triangle removal in F2^n", additive::triangle_removal),
    entry("subspaces-in-sumsets", "Subspaces in sumsets A + A", additive::subspaces_in_sumsets),
    entry("aaronson-ambainis", "Aaronson-Ambainis: influential variables of low-degree functions", hypercube::aaronson_ambainis),
    entry("bgs-freeness", "Triangle freeness and its sampling tester", additive::bgs_freeness),
    entry("symmetric-gaussian", "Symmetric Gaussian problem over candidate families", gaussian::symmetric_gaussian),
    entry("simplex-stability", "Standard simplex partitions against other equal partitions", gaussian::simplex_stability),
    entry("linear-coefficients", "Sum of linear coefficients versus sqrt of degree", hypercube::linear_coefficients),
    entry("eps-biased-dnf", "Small-bias densities fooling DNFs", additive::eps_biased_dnf),
    entry("ptf-sparsity-ip", "PTF sparsity of inner product mod 2", threshold::ptf_sparsity_ip),
    entry("servedio-tan-verbin", "Junta approximation of monotone functions", hypercube::servedio_tan_verbin),
    entry("monotone-sensitivity", "Average versus maximum sensitivity for monotone functions", hypercube::monotone_sensitivity),
    entry("approx-majority", "Approximate degree of approximate majority", threshold::approx_majority),
    entry("quadratic-uncertainty", "Quadratic phases expressing AND", additive::quadratic_uncertainty),
];

pub fn entries() -> &'static [Entry] {
    ENTRIES
}

fn finish(
    conjecture_id: &str,
    params: Params,
    outcome: Outcome,
    config: &Config,
    started: Instant,
) -> Result<Report> {
    let report = Report {
        schema_version: SCHEMA_VERSION,
        conjecture_id: conjecture_id.to_string(),
        parameters: params.finish()?,
        verdict: outcome.verdict,
        witness: outcome.witness,
        metrics: outcome.metrics.into_map(),
        seed: config.seed,
        wall_time_ms: started.elapsed().as_millis() as u64,
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        budgeted: outcome.budgeted,
    };
    report.reverify()?;
    if let Some(dir) = &config.run_dir {
        report.append(dir)?;
    }
    Ok(report)
}

/// Runs a registered recipe, re-verifies its witness, and appends the
/// report to the run directory when one is configured.
pub fn run(id: &str, mut params: Params, config: &Config) -> Result<Report> {
    let entry = ENTRIES
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| HarnessError::UnknownConjecture(id.to_string()))?;
    let started = Instant::now();
    let outcome = config.install(|| (entry.run)(&mut params, config))??;
    finish(id, params, outcome, config, started)
}

/// A free-standing extremal search as a report. The verdict follows the
/// functional's conjectured bound on this space, when it has one.
pub fn search(space: &SearchSpace, f: &Functional, direction: Direction, config: &Config) -> Result<Report> {
    let started = Instant::now();
    let out = config.install(|| extremal_search(space, f, direction, config.node_budget))??;
    let mut m = Metrics::default();
    m.search("", &out);
    let verdict = match (f.bound(space), &out.best) {
        (Some(b), Some(best)) if b.direction == direction => {
            if b.violated_by(best.value) {
                Verdict::Counterexample
            } else {
                Verdict::HoldsAtScale
            }
        }
        _ => Verdict::ReportOnly,
    };
    let outcome = Outcome::new(verdict, m)
        .with_witness(witness(&out, f))
        .budgeted(out.budgeted);
    let params = Params::new()
        .with("space", space)
        .with("functional", f)
        .with("direction", direction);
    let mut p = params;
    p.string("space", "")?;
    p.string("functional", "")?;
    p.string("direction", "")?;
    p.u64("node_budget", config.node_budget)?;
    finish("search", p, outcome, config, started)
}
