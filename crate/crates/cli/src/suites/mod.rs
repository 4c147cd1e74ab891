//! Verification suites. Each runs an exhaustive tier over every labelled
//! instance with at most four elements, then a seeded random tier.

mod completion;
mod representation;
mod topology;

use std::time::Instant;

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use ordkit::order::{all_posets, all_preorders};
use ordkit::{FinitePoset, FinitePreorder, FrinkEmpty};

use crate::generate::rng_for;
use crate::instance::{emit, BitopCandidate, Instance, InstanceFile};
use crate::report::{Report, Tier, Verdict};

pub const SUITES: [&str; 11] =
    ["a3", "a4", "a7", "urysohn", "a812", "a120", "kjh", "gjh", "quotient", "macneille", "frink"];

/// Largest carrier enumerated in the exhaustive tier.
pub const EXHAUSTIVE_MAX: usize = 4;

#[derive(Clone, Debug)]
pub struct Params {
    pub seed: u64,
    /// Random-tier instance count.
    pub count: usize,
    /// Fixes the random-tier carrier size instead of the suite's default range.
    pub n: Option<usize>,
    /// Depth bound for the dyadic construction.
    pub depth: usize,
    /// `None` runs both Frink-ideal readings.
    pub frink: Option<FrinkEmpty>,
    pub timing: bool,
}

impl Default for Params {
    fn default() -> Self {
        Params { seed: 0, count: 1000, n: None, depth: 16, frink: None, timing: false }
    }
}

impl Params {
    pub fn frink_policies(&self) -> Vec<FrinkEmpty> {
        match self.frink {
            Some(p) => vec![p],
            None => vec![FrinkEmpty::Allow, FrinkEmpty::Forbid],
        }
    }

    /// Carrier size for a random case: `--n` if given, else uniform in `lo..=hi`.
    pub(crate) fn random_n(&self, rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> usize {
        use rand::Rng;
        self.n.unwrap_or_else(|| rng.gen_range(lo..=hi))
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Outcome {
    pub verdict: Verdict,
    pub witness: Option<Value>,
}

impl Outcome {
    pub fn pass() -> Self {
        Outcome { verdict: Verdict::Pass, witness: None }
    }

    pub fn skipped(reason: &str) -> Self {
        Outcome { verdict: Verdict::Skipped, witness: Some(json!({ "reason": reason })) }
    }

    pub fn violation(detail: impl Into<String>, instance: &str) -> Self {
        Outcome { verdict: Verdict::Violation, witness: Some(json!({ "detail": detail.into(), "instance": instance })) }
    }

    pub fn discrepancy(witness: Value) -> Self {
        Outcome { verdict: Verdict::Discrepancy, witness: Some(witness) }
    }
}

/// Runs `check` and turns the first failed step into a violation carrying the
/// emitted instance.
pub(crate) fn guard(instance: impl FnOnce() -> String, check: impl FnOnce() -> Result<(), String>) -> Outcome {
    match check() {
        Ok(()) => Outcome::pass(),
        Err(detail) => Outcome::violation(detail, &instance()),
    }
}

/// `Err(msg)` unless `cond`.
pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub(crate) fn instance_text(instance: Instance) -> String {
    emit(&InstanceFile::new(instance))
}

pub(crate) fn poset_text(p: &FinitePoset) -> String {
    instance_text(Instance::Poset(p.clone()))
}

pub(crate) fn preorder_text(q: &FinitePreorder) -> String {
    instance_text(Instance::Preorder(q.clone()))
}

pub(crate) fn bitop_text(c: &BitopCandidate) -> String {
    instance_text(Instance::Bitop(c.clone()))
}

/// Every labelled poset with at most [`EXHAUSTIVE_MAX`] elements.
pub(crate) fn exhaustive_posets() -> Vec<FinitePoset> {
    (0..=EXHAUSTIVE_MAX).flat_map(all_posets).collect()
}

pub(crate) fn exhaustive_preorders() -> Vec<FinitePreorder> {
    (0..=EXHAUSTIVE_MAX).flat_map(all_preorders).collect()
}

pub(crate) trait Suite: Sync {
    type Case: Send + Sync;

    fn exhaustive(&self, params: &Params) -> Vec<Self::Case>;
    fn random(&self, rng: &mut ChaCha8Rng, params: &Params) -> Self::Case;
    fn check(&self, case: &Self::Case, params: &Params) -> Outcome;
}

fn execute<S: Suite>(name: &str, suite: &S, params: &Params) -> Vec<Report> {
    let exhaustive = suite.exhaustive(params);
    let offset = exhaustive.len();
    let random: Vec<S::Case> =
        (0..params.count).into_par_iter().map(|i| suite.random(&mut rng_for(params.seed, i as u64), params)).collect();
    let cases: Vec<(Tier, &S::Case)> =
        exhaustive.iter().map(|c| (Tier::Exhaustive, c)).chain(random.iter().map(|c| (Tier::Random, c))).collect();
    debug_assert_eq!(cases.len(), offset + params.count);
    cases
        .par_iter()
        .enumerate()
        .map(|(instance, (tier, case))| {
            let start = Instant::now();
            let outcome = suite.check(case, params);
            let timing_us = params.timing.then(|| start.elapsed().as_micros() as u64);
            Report {
                suite: name.to_string(),
                instance,
                tier: *tier,
                verdict: outcome.verdict,
                witness: outcome.witness,
                timing_us,
            }
        })
        .collect()
}

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
#[error("UNKNOWN_SUITE: `{0}` (known: a3, a4, a7, urysohn, a812, a120, kjh, gjh, quotient, macneille, frink)")]
pub struct UnknownSuite(pub String);

/// Thread pool bounded by `ORDKIT_THREADS` when set.
fn pool() -> rayon::ThreadPool {
    let threads = std::env::var("ORDKIT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).unwrap_or(0);
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool")
}

/// Report stream of one suite, in instance order regardless of thread count.
pub fn run_suite(name: &str, params: &Params) -> Result<Vec<Report>, UnknownSuite> {
    let run = || -> Result<Vec<Report>, UnknownSuite> {
        Ok(match name {
            "a3" => execute(name, &topology::A3, params),
            "a4" => execute(name, &topology::A4, params),
            "a7" => execute(name, &topology::A7, params),
            "urysohn" => execute(name, &topology::Urysohn, params),
            "a812" => execute(name, &representation::A812, params),
            "a120" => execute(name, &representation::A120, params),
            "quotient" => execute(name, &representation::Quotient, params),
            "kjh" => execute(name, &completion::Kjh, params),
            "gjh" => execute(name, &completion::Gjh, params),
            "macneille" => execute(name, &completion::Macneille, params),
            "frink" => execute(name, &completion::Frink, params),
            _ => return Err(UnknownSuite(name.to_string())),
        })
    };
    pool().install(run)
}
