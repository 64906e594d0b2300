//! Desk-scale invariant suites run by `flowcont selftest`.

use flowcont::decide::{is_ff_group, oracle_is_ff_group};
use flowcont::flow::count_nowhere_zero_flows;
use flowcont::graph::parse_builtin_expr;
use flowcont::sets::{count_ff_maps, count_ff_maps_oracle, subcubic_equivalence_check};
use flowcont::{EdgeMap, GroupSpec, MultiDigraph};
use serde::Serialize;

use crate::instances;

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, Copy)]
pub struct SelftestConfig {
    pub seed: u64,
    pub deep: bool,
}

impl SelftestConfig {
    fn scale(&self) -> u64 {
        if self.deep { 10 } else { 1 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checked: u64,
    pub failures: Vec<String>,
    pub passed: bool,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        SuiteResult { name, checked: 0, failures: Vec::new(), passed: true }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.passed = false;
            if self.failures.len() < 10 {
                self.failures.push(describe());
            }
        }
    }

    fn error(&mut self, message: String) {
        self.passed = false;
        self.failures.push(message);
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub deep: bool,
    pub suites: Vec<SuiteResult>,
    pub passed: bool,
}

pub const BUILTINS: &[&str] =
    &["digon:1", "digon:2", "digon:3", "dicycle:3", "dicycle:5", "loop", "k4", "petersen"];

/// Loads every builtin the suites rely on.
pub fn load_builtins() -> Result<Vec<(&'static str, MultiDigraph)>, String> {
    BUILTINS
        .iter()
        .map(|&name| parse_builtin_expr(name).map(|g| (name, g)).map_err(|e| format!("builtin {name}: {e}")))
        .collect()
}

fn group(text: &str) -> GroupSpec {
    text.parse().expect("suite groups are well formed")
}

/// Runs all suites; `Err` means a builtin could not be constructed.
pub fn run(config: SelftestConfig) -> Result<SelftestReport, String> {
    let builtins = load_builtins()?;
    let suites = vec![
        oracle_agreement(config),
        exponent_law(config),
        subcubic_equivalence(),
        tutte_invariance(&builtins, config),
    ];
    let passed = suites.iter().all(|s| s.passed);
    Ok(SelftestReport { seed: config.seed, deep: config.deep, suites, passed })
}

/// The gcd criterion against the definitional oracle on random triples.
pub fn oracle_agreement(config: SelftestConfig) -> SuiteResult {
    let mut suite = SuiteResult::new("oracle agreement");
    let groups: Vec<GroupSpec> =
        ["Z2", "Z3", "Z4", "Z5", "Z6", "Z2xZ2", "Z2xZ3", "Z2xZ4", "Z3xZ3"].iter().map(|t| group(t)).collect();
    let flow_budget = 100_000 * config.scale();
    let mut rng = instances::rng(config.seed);
    for _ in 0..200 * config.scale() {
        let (g, h, a) = instances::triple(&mut rng, 6, 4);
        let f = EdgeMap::new(&g, &h, a).expect("generated maps are valid");
        for m in &groups {
            match oracle_is_ff_group(&f, m, flow_budget) {
                Ok(expected) => suite.check(is_ff_group(&f, m) == expected, || {
                    format!("{m}: G = {:?}, H = {:?}, f = {:?}", g.edges(), h.edges(), f.assignment())
                }),
                Err(flowcont::Error::BudgetExceeded { .. }) => {}
                Err(e) => suite.error(e.to_string()),
            }
        }
    }
    suite
}

/// Oracle counts of FF maps agree across groups of equal exponent.
pub fn exponent_law(config: SelftestConfig) -> SuiteResult {
    let mut suite = SuiteResult::new("exponent law");
    let pairs = [("Z6", "Z2xZ3"), ("Z4", "Z2xZ4"), ("Z2", "Z2xZ2"), ("Z3", "Z3xZ3")];
    let mut graphs = vec![
        (MultiDigraph::digon(2), MultiDigraph::digon(3)),
        (MultiDigraph::dicycle(3), MultiDigraph::digon(2)),
        (MultiDigraph::digon(3), MultiDigraph::dicycle(3)),
    ];
    let mut rng = instances::rng(config.seed ^ 0x5eed);
    for _ in 0..10 * config.scale() {
        graphs.push((instances::graph(&mut rng, 3, 0, 4), instances::graph(&mut rng, 3, 1, 3)));
    }
    for (g, h) in &graphs {
        for (a, b) in pairs {
            let (a, b) = (group(a), group(b));
            let counts = (
                count_ff_maps_oracle(g, h, &a, 1_000_000, 1_000_000),
                count_ff_maps_oracle(g, h, &b, 1_000_000, 1_000_000),
                count_ff_maps(g, h, &a, 1_000_000),
            );
            match counts {
                (Ok(x), Ok(y), Ok(z)) => suite.check(x == y && y == z, || {
                    format!("{a} vs {b} on G = {:?}, H = {:?}: {x}, {y}, fast path {z}", g.edges(), h.edges())
                }),
                (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => suite.error(e.to_string()),
            }
        }
    }
    suite
}

/// For K4 into K4, FF_n equals FF_Z for every n in 4..=8.
pub fn subcubic_equivalence() -> SuiteResult {
    let mut suite = SuiteResult::new("subcubic equivalence");
    let k4 = MultiDigraph::k4();
    match subcubic_equivalence_check(&k4, &k4, &[4, 5, 6, 7, 8], 1_000_000) {
        Ok(report) => {
            suite.checked = report.maps_checked as u64;
            for v in report.violations.iter().take(10) {
                suite.error(format!("n = {}, f = {:?}", v.n, v.assignment));
            }
            if report.maps_checked != 46_656 {
                suite.error(format!("checked {} maps, expected 46656", report.maps_checked));
            }
        }
        Err(e) => suite.error(e.to_string()),
    }
    suite
}

/// Nowhere-zero flow counts depend only on the group order.
pub fn tutte_invariance(builtins: &[(&'static str, MultiDigraph)], config: SelftestConfig) -> SuiteResult {
    let mut suite = SuiteResult::new("tutte invariance");
    let mut pairs = vec![("Z4", "Z2xZ2")];
    if config.deep {
        pairs.extend([("Z6", "Z2xZ3"), ("Z8", "Z2xZ4"), ("Z9", "Z3xZ3")]);
    }
    let budget = 1_000_000 * config.scale();
    for (name, g) in builtins {
        for &(a, b) in &pairs {
            let (a, b) = (group(a), group(b));
            match (count_nowhere_zero_flows(g, &a, budget), count_nowhere_zero_flows(g, &b, budget)) {
                (Ok(x), Ok(y)) => suite.check(x == y, || format!("{name}: {a} gives {x}, {b} gives {y}")),
                (Err(flowcont::Error::BudgetExceeded { .. }), _) | (_, Err(flowcont::Error::BudgetExceeded { .. })) => {}
                (Err(e), _) | (_, Err(e)) => suite.error(e.to_string()),
            }
        }
    }
    suite
}
