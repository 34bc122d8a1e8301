mod checks;
mod verify;

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use delpezzo::atlas;
use delpezzo::picard::{self, IncidenceGraph};
use delpezzo::rootsys::{build_root_system, RootSystemId};
use delpezzo::{json, Error};

#[derive(Parser)]
#[command(name = "delpezzo", version, about = "Exact cones, exceptional curves and universal torsor equations for split del Pezzo surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum System {
    A4,
    D5,
    E6,
    E7,
}

impl From<System> for RootSystemId {
    fn from(s: System) -> Self {
        match s {
            System::A4 => RootSystemId::A4,
            System::D5 => RootSystemId::D5,
            System::E6 => RootSystemId::E6,
            System::E7 => RootSystemId::E7,
        }
    }
}

#[derive(Args)]
struct SystemArg {
    #[arg(long, value_enum)]
    system: System,
}

#[derive(Subcommand)]
enum Command {
    /// Cartan matrix, positive roots, ω and orbit sizes.
    Roots {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long)]
        json: bool,
    },
    /// The minuscule representation: weights, operators, grading.
    Rep {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long)]
        grading: bool,
        #[arg(long)]
        json: bool,
    },
    /// Exceptional and conic classes of the surface of the given degree.
    Curves {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=5))]
        degree: u32,
        #[arg(long)]
        graph: bool,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Quadratic generators of the cone ideal, one per weight μ.
    ConeEquations {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long, conflicts_with = "text")]
        json: bool,
        #[arg(long)]
        text: bool,
    },
    /// Universal torsor equations built by successive blow-ups from the seed.
    BuildTorsor {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=5))]
        degree: u32,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Runs a verification suite and exits nonzero if any check fails.
    Verify {
        #[arg(long, value_parser = verify::SUITE_NAMES)]
        suite: String,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=5))]
        degree: Option<u32>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        exp_trials: usize,
        #[arg(long, default_value_t = 20)]
        product_trials: usize,
        /// Print the JSON report instead of the table.
        #[arg(long)]
        json: bool,
        /// Also write the JSON report to this file.
        #[arg(long)]
        report: Option<std::path::PathBuf>,
    },
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn roots_text(id: RootSystemId) -> String {
    let rs = build_root_system(id);
    let mut out = format!("system {id}  rank {}  marked node {}\ncartan\n", rs.rank(), id.marked_root_index());
    for row in &rs.cartan {
        let cells: Vec<String> = row.iter().map(|c| format!("{c:>2}")).collect();
        let _ = writeln!(out, "  {}", cells.join(" "));
    }
    let _ = writeln!(out, "omega {}", rs.omega);
    let _ = writeln!(out, "|W| = {}", rs.weyl_group_order());
    let _ = writeln!(out, "|W omega| = {}", rs.weyl_orbit(&rs.omega).len());
    let _ = writeln!(out, "|W omega_1| = {}", rs.weyl_orbit(&rs.fundamental_weight(0)).len());
    let _ = writeln!(out, "positive roots ({})", rs.positive_roots.len());
    for r in &rs.positive_roots {
        let _ = writeln!(out, "  {r}");
    }
    out
}

fn rep_text(id: RootSystemId, grading: bool) -> delpezzo::Result<String> {
    let a = atlas::get(id)?;
    let mut out = format!("system {id}  dim {}\n", a.rep.dim());
    if grading {
        let _ = writeln!(out, "grading sizes {:?}", a.grading.sizes());
    }
    for (k, w) in a.rep.weights.iter().enumerate() {
        if grading {
            let _ = writeln!(out, "{k:>3}  {w}  degree {}", a.grading.degree[k]);
        } else {
            let _ = writeln!(out, "{k:>3}  {w}");
        }
    }
    Ok(out)
}

fn curves_out(degree: u32, graph: bool, json_out: bool, csv: bool) -> delpezzo::Result<String> {
    let r = RootSystemId::from_degree(degree)?.rank();
    let g = IncidenceGraph::new(r);
    let order = picard::graph_automorphism_order(&g);
    if json_out {
        return Ok(pretty(&json::curves(r, graph, order)));
    }
    let conics = picard::conic_classes(r);
    let mut out = String::new();
    if csv {
        let bs: Vec<String> = (1..=r).map(|i| format!("b{i}")).collect();
        let _ = writeln!(out, "kind,index,a,{}", bs.join(","));
        for (kind, list) in [("exceptional", &g.vertices), ("conic", &conics)] {
            for (k, c) in list.iter().enumerate() {
                let cells: Vec<String> = c.0.iter().map(i64::to_string).collect();
                let _ = writeln!(out, "{kind},{k},{}", cells.join(","));
            }
        }
        if graph {
            let _ = writeln!(out, "\ni,j,label");
            for i in 0..g.len() {
                for j in i + 1..g.len() {
                    if g.labels[i][j] != 0 {
                        let _ = writeln!(out, "{i},{j},{}", g.labels[i][j]);
                    }
                }
            }
        }
        return Ok(out);
    }
    let _ = writeln!(out, "degree {degree}  r = {r}  K = {}", picard::DivClass::canonical(r));
    let _ = writeln!(out, "exceptional classes: {}", g.len());
    for (k, c) in g.vertices.iter().enumerate() {
        let _ = writeln!(out, "  {k:>3}  {c}");
    }
    let _ = writeln!(out, "conic classes: {}", conics.len());
    for (k, c) in conics.iter().enumerate() {
        let _ = writeln!(out, "  {k:>3}  {c}");
    }
    let _ = writeln!(out, "automorphism order of the incidence graph: {order}");
    if graph {
        let _ = writeln!(out, "edges (i j C.C')");
        for i in 0..g.len() {
            for j in i + 1..g.len() {
                if g.labels[i][j] != 0 {
                    let _ = writeln!(out, "  {i} {j} {}", g.labels[i][j]);
                }
            }
        }
    }
    Ok(out)
}

fn cone_equations_out(id: RootSystemId, json_out: bool) -> delpezzo::Result<String> {
    let a = atlas::get(id)?;
    let bij = picard::weight_curve_bijection(&a.rep)?;
    let conic_of = |mu: &delpezzo::rootsys::Weight| picard::conic_class_of_mu(&bij, &a.rep, mu).ok();
    if json_out {
        return Ok(pretty(&json::cone_equations(a, &conic_of)));
    }
    let mut out = format!("system {id}: {} generators, variables x0..x{}\n", a.ideal.generators.len(), a.rep.dim() - 1);
    for g in &a.ideal.generators {
        let tilde = conic_of(&g.mu).map(|c| c.to_string()).unwrap_or_else(|| "?".into());
        let _ = writeln!(out, "mu = {}  mu~ = {}\n  {}", g.mu, tilde, g.poly);
    }
    if !a.ideal.zero_block.is_empty() {
        let _ = writeln!(out, "zero-weight block: {} forms", a.ideal.zero_block.len());
        for g in &a.ideal.zero_block {
            let _ = writeln!(out, "  {}", g.poly);
        }
    }
    Ok(out)
}

fn build_torsor_out(degree: u32, seed: u64) -> delpezzo::Result<String> {
    let tp = delpezzo::torsor::build_torsor(degree, seed)?;
    Ok(pretty(&json::torsor(&tp, seed)))
}

fn emit(text: delpezzo::Result<String>, out: Option<&std::path::Path>) -> ExitCode {
    match text {
        Ok(s) => match out {
            Some(path) => match std::fs::write(path, s) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    ExitCode::from(1)
                }
            },
            None => {
                print!("{s}");
                ExitCode::SUCCESS
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Roots { system, json: as_json } => {
            let id = system.system.into();
            let text = if as_json { pretty(&json::roots(&build_root_system(id))) } else { roots_text(id) };
            emit(Ok(text), None)
        }
        Command::Rep { system, grading, json: as_json } => {
            let id: RootSystemId = system.system.into();
            let text = if as_json { atlas::get(id).map(|a| pretty(&json::rep(a, grading))) } else { rep_text(id, grading) };
            emit(text, None)
        }
        Command::Curves { degree, graph, json: as_json, csv } => emit(curves_out(degree, graph, as_json, csv), None),
        Command::ConeEquations { system, json: as_json, text: _ } => emit(cone_equations_out(system.system.into(), as_json), None),
        Command::BuildTorsor { degree, seed, out } => emit(build_torsor_out(degree, seed), out.as_deref()),
        Command::Verify {
            suite,
            degree,
            seed,
            exp_trials,
            product_trials,
            json: as_json,
            report,
        } => {
            let ctx = match verify::Context::new(seed, degree, exp_trials, product_trials) {
                Ok(c) => c,
                Err(Error::BadDegree(d)) => {
                    eprintln!("error: unsupported degree {d}");
                    return ExitCode::from(2);
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            };
            let suite = verify::suite(&suite).expect("validated by the parser");
            let rep = verify::run_suite(suite.as_ref(), &ctx);
            let doc = pretty(&rep.to_json());
            if let Some(path) = report {
                if let Err(e) = std::fs::write(&path, &doc) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
            print!("{}", if as_json { doc } else { rep.table() });
            if rep.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
