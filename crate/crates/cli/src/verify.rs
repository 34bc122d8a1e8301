//! Named verification checks grouped into suites, run concurrently and
//! reported in registration order.

use std::sync::OnceLock;
use std::time::Instant;

use delpezzo::rootsys::RootSystemId;
use delpezzo::torsor::{build_chain, SeedableRng, TorsorPresentation, TorsorRng};
use serde_json::{json, Value};

use crate::checks;

pub type Outcome = Result<String, String>;

pub trait Check: Sync {
    fn name(&self) -> &str;
    /// The statement the check exercises.
    fn anchor(&self) -> &str;
    /// Acceptance criterion covered by the check, if any.
    fn criterion(&self) -> Option<u8> {
        None
    }
    fn run(&self, ctx: &Context) -> Outcome;
}

pub struct FnCheck {
    pub name: &'static str,
    pub anchor: &'static str,
    pub criterion: Option<u8>,
    pub f: fn(&Context) -> Outcome,
}

impl Check for FnCheck {
    fn name(&self) -> &str {
        self.name
    }

    fn anchor(&self) -> &str {
        self.anchor
    }

    fn criterion(&self) -> Option<u8> {
        self.criterion
    }

    fn run(&self, ctx: &Context) -> Outcome {
        (self.f)(ctx)
    }
}

pub trait Suite {
    fn name(&self) -> &str;
    fn checks(&self) -> Vec<Box<dyn Check>>;
}

struct Group {
    name: &'static str,
    checks: fn() -> Vec<FnCheck>,
}

impl Suite for Group {
    fn name(&self) -> &str {
        self.name
    }

    fn checks(&self) -> Vec<Box<dyn Check>> {
        (self.checks)().into_iter().map(|c| Box::new(c) as Box<dyn Check>).collect()
    }
}

/// Every suite but `all`, which is their union.
fn groups() -> Vec<Group> {
    vec![
        Group {
            name: "combinatorics",
            checks: checks::combinatorics,
        },
        Group {
            name: "cone",
            checks: checks::cone,
        },
        Group {
            name: "torsor",
            checks: checks::torsor,
        },
        Group {
            name: "products",
            checks: checks::products,
        },
    ]
}

struct All;

impl Suite for All {
    fn name(&self) -> &str {
        "all"
    }

    fn checks(&self) -> Vec<Box<dyn Check>> {
        groups().iter().flat_map(|g| g.checks()).collect()
    }
}

pub const SUITE_NAMES: [&str; 5] = ["all", "combinatorics", "cone", "torsor", "products"];

pub fn suite(name: &str) -> Option<Box<dyn Suite>> {
    if name == "all" {
        return Some(Box::new(All));
    }
    groups().into_iter().find(|g| g.name == name).map(|g| Box::new(g) as Box<dyn Suite>)
}

/// Shared inputs of a verification run; the torsor chain is built once, on
/// first use.
pub struct Context {
    pub seed: u64,
    pub systems: Vec<RootSystemId>,
    pub exp_trials: usize,
    pub product_trials: usize,
    chain: OnceLock<std::result::Result<(Vec<TorsorPresentation>, f64), String>>,
}

impl Context {
    pub fn new(seed: u64, degree: Option<u32>, exp_trials: usize, product_trials: usize) -> delpezzo::Result<Context> {
        let systems = match degree {
            Some(d) => vec![RootSystemId::from_degree(d)?],
            None => RootSystemId::ALL.to_vec(),
        };
        Ok(Context {
            seed,
            systems,
            exp_trials,
            product_trials,
            chain: OnceLock::new(),
        })
    }

    /// Independent generator for one check.
    pub fn rng(&self, salt: u64) -> TorsorRng {
        TorsorRng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }

    fn built(&self) -> std::result::Result<&(Vec<TorsorPresentation>, f64), String> {
        self.chain
            .get_or_init(|| {
                let lowest = self.systems.iter().map(|s| s.degree()).min().unwrap_or(5);
                let start = Instant::now();
                let chain = build_chain(lowest, self.seed).map_err(|e| format!("torsor build failed: {e}"))?;
                Ok((chain, start.elapsed().as_secs_f64()))
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Presentations of the selected systems.
    pub fn presentations(&self) -> std::result::Result<Vec<&TorsorPresentation>, String> {
        Ok(self.built()?.0.iter().filter(|tp| self.systems.contains(&tp.system)).collect())
    }

    pub fn chain(&self) -> std::result::Result<&[TorsorPresentation], String> {
        Ok(&self.built()?.0)
    }

    /// Wall time of the chain build, in seconds.
    pub fn build_seconds(&self) -> std::result::Result<f64, String> {
        Ok(self.built()?.1)
    }
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub anchor: String,
    pub criterion: Option<u8>,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub results: Vec<CheckResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn table(&self) -> String {
        let width = self.results.iter().map(|r| r.name.len()).max().unwrap_or(0);
        let mut out = format!("suite {} (seed {})\n", self.suite, self.seed);
        for r in &self.results {
            let crit = r.criterion.map(|c| format!("[{c}]")).unwrap_or_default();
            out += &format!(
                "{}  {:<width$}  {:>4}  {:>8.2}s  {}\n",
                if r.passed { "PASS" } else { "FAIL" },
                r.name,
                crit,
                r.seconds,
                r.anchor
            );
            if !r.detail.is_empty() {
                out += &format!("      {}\n", r.detail);
            }
        }
        let failed = self.results.iter().filter(|r| !r.passed).count();
        out += &format!("{} passed, {} failed\n", self.results.len() - failed, failed);
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": delpezzo::json::SCHEMA_VERSION,
            "suite": self.suite,
            "seed": self.seed,
            "passed": self.passed(),
            "checks": self.results.iter().map(|r| json!({
                "name": r.name,
                "anchor": r.anchor,
                "criterion": r.criterion,
                "passed": r.passed,
                "detail": r.detail,
                "seconds": r.seconds,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Runs every check of `suite` on its own thread; a panicking check counts
/// as a failure.
pub fn run_suite(suite: &dyn Suite, ctx: &Context) -> Report {
    let checks = suite.checks();
    let results = std::thread::scope(|s| {
        let handles: Vec<_> = checks
            .iter()
            .map(|c| {
                s.spawn(move || {
                    let start = Instant::now();
                    let out = c.run(ctx);
                    (out, start.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles
            .into_iter()
            .zip(&checks)
            .map(|(h, c)| {
                let (outcome, seconds) = h.join().unwrap_or_else(|_| (Err("check panicked".to_string()), 0.0));
                let (passed, detail) = match outcome {
                    Ok(d) => (true, d),
                    Err(d) => (false, d),
                };
                CheckResult {
                    name: c.name().to_string(),
                    anchor: c.anchor().to_string(),
                    criterion: c.criterion(),
                    passed,
                    detail,
                    seconds,
                }
            })
            .collect()
    });
    Report {
        suite: suite.name().to_string(),
        seed: ctx.seed,
        results,
    }
}
