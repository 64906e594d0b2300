use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use flowcont::constructions::{build_witness, ff_set_digons, verify_witness};
use flowcont::decide::{decide, ff_gcd, format_assignment, is_ff_group, parse_assignment};
use flowcont::graph::{parse_builtin_expr, parse_digraph};
use flowcont::sets::{count_ff_maps, count_ff_maps_oracle, exists_ff_map, ff_set_of_graphs, ff_set_of_map};
use flowcont::{DigonFamily, EdgeMap, Error, FfSet, GroupSpec, Modulus, MultiDigraph, Nat, SearchOutcome};
use serde_json::{json, Value};

use crate::selftest::{self, SelftestConfig};

#[derive(Debug, Parser)]
#[command(name = "flowcont", version, about = "Decide and count flow-continuous edge maps between multidigraphs")]
pub struct Cli {
    /// Emit one JSON object on standard output.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GraphPair {
    /// Source graph: a file in the edge-list format or a builtin expression such as `digon:9,digon:4`.
    #[arg(long)]
    pub g: String,
    /// Target graph, same syntax as `--g`.
    #[arg(long)]
    pub h: String,
}

#[derive(Debug, Args)]
pub struct Budget {
    /// Maximum number of edge maps to enumerate.
    #[arg(long, env = "FF_BUDGET", default_value_t = flowcont::DEFAULT_MAP_BUDGET)]
    pub budget: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a map is flow-continuous over a group.
    Check {
        #[command(flatten)]
        graphs: GraphPair,
        /// Map file (one target edge index per line), inline list `0,1,2`, or `identity`.
        #[arg(long)]
        map: String,
        /// Group such as `Z`, `Z6`, `Z2xZ4` or `ZxZ3`.
        #[arg(long)]
        group: String,
    },
    /// Compute the set of n for which a map, or some map, is FF_n.
    Ffset {
        #[command(flatten)]
        graphs: GraphPair,
        #[arg(long)]
        map: Option<String>,
        /// Treat both graphs as unions of digons and use cone membership.
        #[arg(long, conflicts_with = "map")]
        digons: bool,
        #[command(flatten)]
        budget: Budget,
    },
    /// Count the maps that are flow-continuous over a group.
    Count {
        #[command(flatten)]
        graphs: GraphPair,
        #[arg(long)]
        group: String,
        /// Recount over another group of the same exponent and compare.
        #[arg(long)]
        cross_check: Option<String>,
        /// Count with the flow-enumerating oracle instead of the gcd criterion.
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        budget: Budget,
    },
    /// Search for an FF_n map (or FF_Z with `--n Z`).
    Search {
        #[command(flatten)]
        graphs: GraphPair,
        #[arg(long)]
        n: String,
        /// Write the witness map here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        budget: Budget,
    },
    /// Build digon families whose FF set is the divisor closure of T.
    Construct {
        /// Comma-separated positive integers; empty for the empty set.
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the built-in invariant suites.
    Selftest {
        /// Ten times the instances and budgets.
        #[arg(long)]
        deep: bool,
        #[arg(long, default_value_t = selftest::DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Yes,
    No,
    Unknown,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Yes => 0,
            Status::No => 1,
            Status::Unknown => 2,
            Status::Error => 3,
        }
    }
}

/// Outcome of one command: a status, a JSON payload and its text rendering.
#[derive(Debug, Clone)]
pub struct CommandResult {
    pub status: Status,
    pub payload: Value,
    pub text: String,
}

impl CommandResult {
    fn new(status: Status, payload: Value, text: impl Into<String>) -> Self {
        CommandResult { status, payload, text: text.into() }
    }

    pub fn error(message: impl Into<String>) -> Self {
        let message = message.into();
        CommandResult { status: Status::Error, payload: json!({ "error": message }), text: message }
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    /// The single object printed in JSON mode.
    pub fn to_json(&self) -> Value {
        let mut object = json!({ "status": self.status, "exit_code": self.exit_code() });
        if let (Value::Object(out), Value::Object(payload)) = (&mut object, &self.payload) {
            out.extend(payload.clone());
        }
        object
    }
}

impl From<Error> for CommandResult {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { needed, budget } => CommandResult::new(
                Status::Unknown,
                json!({ "reason": "budget", "needed": needed.to_string(), "budget": budget }),
                format!("unknown: needs {needed} maps, budget is {budget}"),
            ),
            other => CommandResult::error(other.to_string()),
        }
    }
}

type Outcome = Result<CommandResult, CommandResult>;

pub fn run(cli: &Cli) -> CommandResult {
    let outcome = match &cli.command {
        Command::Check { graphs, map, group } => check(graphs, map, group),
        Command::Ffset { graphs, map, digons, budget } => ffset(graphs, map.as_deref(), *digons, budget.budget),
        Command::Count { graphs, group, cross_check, oracle, budget } => {
            count(graphs, group, cross_check.as_deref(), *oracle, budget.budget)
        }
        Command::Search { graphs, n, out, budget } => search(graphs, n, out.as_deref(), budget.budget),
        Command::Construct { t, out } => construct(t, out),
        Command::Selftest { deep, seed } => Ok(selftest_command(SelftestConfig { seed: *seed, deep: *deep })),
    };
    outcome.unwrap_or_else(|e| e)
}

/// A path to an existing file is parsed as a graph file, anything else as a builtin expression.
pub fn load_graph(arg: &str) -> Result<MultiDigraph, Error> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{arg}: {e}")))?;
        parse_digraph(&text)
    } else {
        parse_builtin_expr(arg)
    }
}

pub fn load_map(arg: &str, g: &MultiDigraph) -> Result<Vec<usize>, Error> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{arg}: {e}")))?;
        parse_assignment(&text)
    } else if arg == "identity" {
        Ok((0..g.edge_count()).collect())
    } else {
        parse_assignment(&arg.replace(',', "\n"))
    }
}

fn load_pair(graphs: &GraphPair) -> Result<(MultiDigraph, MultiDigraph), CommandResult> {
    Ok((load_graph(&graphs.g)?, load_graph(&graphs.h)?))
}

fn parse_group_arg(text: &str) -> Result<GroupSpec, CommandResult> {
    text.parse::<GroupSpec>().map_err(CommandResult::from)
}


fn check(graphs: &GraphPair, map: &str, group: &str) -> Outcome {
    let group = parse_group_arg(group)?;
    let (g, h) = load_pair(graphs)?;
    let f = EdgeMap::new(&g, &h, load_map(map, &g)?)?;
    let gcd = ff_gcd(&f);
    let holds = is_ff_group(&f, &group);
    let decision = decide(&f, Modulus::from(group.exponent()));
    debug_assert_eq!(holds, decision.holds());
    let certificate = decision.certificate().copied();
    let mut text = format!("{}: FF over {group} (gcd {gcd})", if holds { "yes" } else { "no" });
    if let Some(c) = &certificate {
        text.push_str(&format!(
            "\ncertificate: vertex {}, circuit {}, value {} is nonzero mod {}",
            c.vertex,
            c.circuit,
            c.value,
            match c.modulus {
                Modulus::Integers => "Z".to_string(),
                Modulus::Cyclic(n) => n.to_string(),
            }
        ));
    }
    let payload = json!({
        "command": "check",
        "group": group.to_string(),
        "ff": holds,
        "gcd": json!(gcd),
        "certificate": certificate,
    });
    Ok(CommandResult::new(if holds { Status::Yes } else { Status::No }, payload, text))
}

fn set_json(set: &FfSet) -> Value {
    json!({
        "set": set,
        "members": set.members(),
        "display": set.to_string(),
    })
}

fn ffset(graphs: &GraphPair, map: Option<&str>, digons: bool, budget: u64) -> Outcome {
    let (g, h) = load_pair(graphs)?;
    if let Some(map) = map {
        let f = EdgeMap::new(&g, &h, load_map(map, &g)?)?;
        let gcd = ff_gcd(&f);
        let set = ff_set_of_map(&f);
        let text = match set.members() {
            None => "gcd 0: all n".to_string(),
            Some(ms) => {
                let ms: Vec<String> = ms.iter().map(|m| m.to_string()).collect();
                format!("divisors of {gcd}: {}", ms.join(" "))
            }
        };
        let mut payload = set_json(&set);
        payload["command"] = json!("ffset");
        payload["gcd"] = json!(gcd);
        return Ok(CommandResult::new(Status::Yes, payload, text));
    }
    let (set, method) = if digons {
        let not_digons = |which: &str| CommandResult::error(format!("--digons: {which} is not a union of digons"));
        let a = DigonFamily::recognize(&g).ok_or_else(|| not_digons("G"))?;
        let b = DigonFamily::recognize(&h).ok_or_else(|| not_digons("H"))?;
        (ff_set_digons(&a, &b), "cone")
    } else {
        (ff_set_of_graphs(&g, &h, budget)?, "enumeration")
    };
    let mut payload = set_json(&set);
    payload["command"] = json!("ffset");
    payload["method"] = json!(method);
    Ok(CommandResult::new(Status::Yes, payload, set.to_string()))
}

fn count(graphs: &GraphPair, group: &str, cross_check: Option<&str>, oracle: bool, budget: u64) -> Outcome {
    let group = parse_group_arg(group)?;
    let other = cross_check.map(parse_group_arg).transpose()?;
    if let Some(other) = &other {
        if other.exponent() != group.exponent() {
            return Err(CommandResult::error(format!("{other} and {group} have different exponents")));
        }
    }
    let (g, h) = load_pair(graphs)?;
    let counter = |m: &GroupSpec| -> Result<u128, Error> {
        if oracle {
            count_ff_maps_oracle(&g, &h, m, budget, flowcont::DEFAULT_FLOW_BUDGET)
        } else {
            count_ff_maps(&g, &h, m, budget)
        }
    };
    let n = counter(&group)?;
    let mut payload = json!({ "command": "count", "group": group.to_string(), "count": n.to_string() });
    let Some(other) = other else {
        return Ok(CommandResult::new(Status::Yes, payload, n.to_string()));
    };
    let m = counter(&other)?;
    payload["cross_check"] = json!({ "group": other.to_string(), "count": m.to_string(), "equal": n == m });
    let text = format!("{group}: {n}\n{other}: {m}\n{}", if n == m { "pass" } else { "FAIL" });
    Ok(CommandResult::new(if n == m { Status::Yes } else { Status::No }, payload, text))
}

fn search(graphs: &GraphPair, n: &str, out: Option<&Path>, budget: u64) -> Outcome {
    let modulus: Modulus = n.parse().map_err(CommandResult::from)?;
    let (g, h) = load_pair(graphs)?;
    if h.edge_count() == 0 && g.edge_count() > 0 {
        return Ok(CommandResult::new(Status::No, json!({ "command": "search", "outcome": "none_exists" }), "none"));
    }
    let outcome = exists_ff_map(&g, &h, modulus, budget);
    let mut payload = serde_json::to_value(&outcome).expect("serializable");
    payload["command"] = json!("search");
    match outcome {
        SearchOutcome::Found { assignment } => {
            let text = format_assignment(&assignment);
            if let Some(path) = out {
                fs::write(path, &text).map_err(|e| CommandResult::error(format!("{}: {e}", path.display())))?;
                payload["written"] = json!(path.display().to_string());
            }
            Ok(CommandResult::new(Status::Yes, payload, text.trim_end().to_string()))
        }
        SearchOutcome::NoneExists => Ok(CommandResult::new(Status::No, payload, "none")),
        SearchOutcome::Unknown { needed, budget } => {
            Ok(CommandResult::new(Status::Unknown, payload, format!("unknown: needs {needed} maps, budget is {budget}")))
        }
    }
}

fn parse_t(text: &str) -> Result<Vec<Nat>, CommandResult> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<Nat>().map_err(|_| CommandResult::error(format!("--t: `{s}` is not a positive integer"))))
        .collect()
}

fn construct(t: &str, out: &Path) -> Outcome {
    let t = parse_t(t)?;
    let witness = build_witness(&t)?;
    let report = verify_witness(&witness.plan)?;
    let write = |name: &str, contents: String| {
        let path = out.join(name);
        fs::write(&path, contents).map_err(|e| CommandResult::error(format!("{}: {e}", path.display())))
    };
    fs::create_dir_all(out).map_err(|e| CommandResult::error(format!("{}: {e}", out.display())))?;
    write("G.dg", witness.source.to_string())?;
    write("H.dg", witness.target.to_string())?;
    write("plan.json", serde_json::to_string_pretty(&witness.plan).expect("serializable") + "\n")?;
    let plan = &witness.plan;
    let text = format!(
        "A = {:?}\nB = {:?}\nexpected {}\ncomputed {}\n{}",
        plan.a,
        plan.b,
        report.expected,
        report.computed,
        if report.passed { "pass" } else { "FAIL" }
    );
    let files = ["G.dg", "H.dg", "plan.json"].map(|f| out.join(f).display().to_string());
    let payload = json!({
        "command": "construct",
        "plan": plan,
        "verification": report,
        "files": files,
    });
    Ok(CommandResult::new(if report.passed { Status::Yes } else { Status::No }, payload, text))
}

fn selftest_command(config: SelftestConfig) -> CommandResult {
    let report = match selftest::run(config) {
        Ok(r) => r,
        Err(missing) => return CommandResult::error(missing),
    };
    let mut text = format!("seed {}{}\n", report.seed, if report.deep { " (deep)" } else { "" });
    for s in &report.suites {
        text.push_str(&format!("{} {} ({} checks)\n", if s.passed { "PASS" } else { "FAIL" }, s.name, s.checked));
        for f in &s.failures {
            text.push_str(&format!("  {f}\n"));
        }
    }
    let status = if report.passed { Status::Yes } else { Status::No };
    let mut payload = serde_json::to_value(&report).expect("serializable");
    payload["command"] = json!("selftest");
    CommandResult::new(status, payload, text.trim_end().to_string())
}
