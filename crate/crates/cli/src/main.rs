mod args;

use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use log::LevelFilter;

use ksbg_core::census;
use ksbg_core::groebner::{save_gb, CacheHeader, GbError, StaircaseStatus};
use ksbg_core::honda_fgl;
use ksbg_core::presentations::{default_precedence, Presentation};
use ksbg_core::verify::{self, groebner_basis, Phase, VerifyOptions};
use ksbg_core::{build, buchberger, GbBudget, MonomialOrder, Poly, TOOL_VERSION};

use args::{Budget, Cli, Command, Source};

const EXIT_FINDING: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

/// Failure of a subcommand, mapped onto the exit-code contract.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Resource(String),
    Other(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Resource(_) => EXIT_RESOURCE,
            Failure::Other(_) => EXIT_FINDING,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Resource(m) | Failure::Other(m) => m,
        }
    }
}

impl From<GbError> for Failure {
    fn from(e: GbError) -> Self {
        if e.is_resource() {
            Failure::Resource(e.to_string())
        } else {
            Failure::Other(e.to_string())
        }
    }
}

fn other(e: impl std::fmt::Display) -> Failure {
    Failure::Other(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => LevelFilter::Warn,
        1 => LevelFilter::Info,
        2 => LevelFilter::Debug,
        _ => LevelFilter::Trace,
    };
    env_logger::Builder::new().filter_level(level).format_timestamp(None).init();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn budget(b: &Budget) -> GbBudget {
    let mut out = GbBudget::default();
    if let Some(n) = b.max_basis {
        out.max_basis = n;
    }
    if let Some(n) = b.max_pairs {
        out.max_pending_pairs = n;
    }
    out
}

/// Presentations named on the command line; `allow_all` permits `--group all`.
fn presentations(source: &Source, allow_all: bool) -> Result<Vec<Presentation>, Failure> {
    if let Some(path) = &source.input {
        let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        let p = Presentation::load(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        return Ok(vec![p]);
    }
    let (group, s) = match (source.group, source.s) {
        (Some(g), Some(s)) => (g, s),
        _ => return Err(Failure::Usage("--group and --s are required without --input".into())),
    };
    let tags = group.tags();
    if tags.len() > 1 && !allow_all {
        return Err(Failure::Usage("this subcommand needs a single group".into()));
    }
    tags.into_iter().map(|g| build(g, s).map_err(|e| Failure::Usage(e.to_string()))).collect()
}

fn single(source: &Source) -> Result<Presentation, Failure> {
    Ok(presentations(source, false)?.remove(0))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| other(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, contents).map_err(|e| other(format!("{}: {e}", path.display())))
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Verify { source, json, skip, cache, budget: b } => {
            let skip = skip.iter().map(|s| s.parse::<Phase>()).collect::<Result<_, _>>().map_err(Failure::Usage)?;
            let options = VerifyOptions { skip, budget: budget(&b), cache_dir: cache };
            let reports = match (&source.input, source.group, source.s) {
                (None, Some(g), Some(s)) => verify::verify_all(&[s], &g.tags(), &options),
                _ => presentations(&source, true)?.iter().map(|p| verify::verify_presentation(p, &options)).collect(),
            };
            print!("{}", verify::render_table(&reports));
            if let Some(path) = json {
                let text = serde_json::to_string_pretty(&reports).map_err(other)?;
                write_file(&path, &text)?;
            }
            for r in &reports {
                for phase in r.failures() {
                    if phase == Phase::Relations && !r.relation_checks.is_empty() {
                        for c in r.relation_checks.iter().filter(|c| !c.member) {
                            println!("finding: {} s={}: {} is not in the ideal", r.group, r.s, c.name);
                        }
                    } else {
                        println!("finding: {} s={}: {phase} check failed", r.group, r.s);
                    }
                }
            }
            Ok(if reports.iter().any(|r| r.has_resource_error()) {
                EXIT_RESOURCE
            } else if reports.iter().all(|r| r.passed()) {
                0
            } else {
                EXIT_FINDING
            })
        }
        Command::Dim { source, restrict_c0, cap, cache, budget: b } => {
            let ps = presentations(&source, true)?;
            let multiple = ps.len() > 1;
            let mut code = 0;
            for p in ps {
                let p = if restrict_c0 { p.restrict_c0().map_err(|e| Failure::Usage(e.to_string()))? } else { p };
                let gb = groebner_basis(&p, budget(&b), cache.as_deref())?;
                let dim = match cap {
                    None => gb.dimension()?,
                    Some(cap) => {
                        let st = gb.staircase(cap);
                        if st.status() != StaircaseStatus::Certified {
                            println!("{}: {:?} at cap {cap} ({} monomials so far)", p.group, st.status(), st.monomials().len());
                            code = EXIT_FINDING;
                            continue;
                        }
                        st.monomials().len()
                    }
                };
                if multiple {
                    println!("{} {dim}", p.group);
                } else {
                    println!("{dim}");
                }
            }
            Ok(code)
        }
        Command::Gb { source, dump, order, cache, budget: b } => {
            let p = single(&source)?;
            let gb = match order {
                None => groebner_basis(&p, budget(&b), cache.as_deref())?,
                Some(spec) => {
                    let vars = p.ring.vars();
                    let order = MonomialOrder::parse_spec(&spec, vars, &default_precedence(vars))
                        .map_err(|e| Failure::Usage(e.to_string()))?;
                    let ring = p.ring.with_order(order).map_err(|e| Failure::Usage(e.to_string()))?;
                    let rels = p
                        .relations
                        .iter()
                        .map(|r| r.poly.forget_v().and_then(|q| q.transfer(&ring)))
                        .collect::<Result<Vec<Poly>, _>>()
                        .map_err(other)?;
                    buchberger(&rels, budget(&b))?
                }
            };
            match dump {
                Some(path) => {
                    let ring = gb.ring();
                    let header = CacheHeader {
                        group: p.group.to_string(),
                        s: p.s,
                        order: ring.order().spec(ring.vars()),
                        tool_version: TOOL_VERSION.to_string(),
                    };
                    save_gb(&gb, &header, &path).map_err(other)?;
                    println!("{} polynomials written to {}", gb.len(), path.display());
                }
                None => {
                    for g in gb.basis() {
                        println!("{g}");
                    }
                }
            }
            Ok(0)
        }
        Command::Nf { source, poly, cache, budget: b } => {
            let p = single(&source)?;
            let f = Poly::parse(&poly, &p.ring).map_err(|e| Failure::Usage(format!("--poly: {e}")))?;
            let gb = groebner_basis(&p, budget(&b), cache.as_deref())?;
            println!("{}", gb.normal_form(&f)?);
            Ok(0)
        }
        Command::Census { s_max, json } => {
            let rows = census::census(s_max);
            println!("{:>4} {:>24} {:>24} {:>10} {:>8} {:>8} {:>8} {:>8}", "s", "chi", "chi(c=0)", "reassembly", "G38", "G39", "G40", "G41");
            for row in &rows {
                let groups: Vec<&str> = row.groups.iter().map(|g| if g.total_matches { "ok" } else { "FAIL" }).collect();
                println!(
                    "{:>4} {:>24} {:>24} {:>10} {:>8} {:>8} {:>8} {:>8}",
                    row.s,
                    row.chi,
                    row.chi_restriction,
                    if row.reassembly_ok { "ok" } else { "FAIL" },
                    groups[0],
                    groups[1],
                    groups[2],
                    groups[3],
                );
            }
            // the printed cardinalities are annotations; disagreements are listed once
            if let Some(row) = rows.first() {
                for g in &row.groups {
                    for f in g.mismatches() {
                        println!(
                            "note: {} {}: printed cardinality {} disagrees with its index ranges",
                            g.group,
                            f.family,
                            f.stated_text.as_deref().unwrap_or("?"),
                        );
                    }
                }
            }
            if let Some(path) = json {
                write_file(&path, &serde_json::to_string_pretty(&rows).map_err(other)?)?;
            }
            Ok(if rows.iter().all(|r| r.identities_hold()) { 0 } else { EXIT_FINDING })
        }
        Command::Fgl { height, truncate } => {
            let n = truncate.unwrap_or_else(|| honda_fgl::default_truncation(height));
            let law = honda_fgl::fgl(height, n).map_err(other)?;
            println!("F(x,y) = {}", law.law);
            println!("[2](x) = {}", law.two_series);
            let checks = honda_fgl::run_checks(height, n).map_err(other)?;
            println!(
                "symmetric={} unital={} associative={} two_series_pure={}",
                checks.symmetric, checks.unital, checks.associative, checks.two_series_pure
            );
            Ok(if checks.all_pass() { 0 } else { EXIT_FINDING })
        }
        Command::Presentation { source, restrict_c0, dump } => {
            let p = single(&source)?;
            let p = if restrict_c0 { p.restrict_c0().map_err(|e| Failure::Usage(e.to_string()))? } else { p };
            match dump {
                Some(path) => {
                    write_file(&path, &p.dump())?;
                    println!("{} relations written to {}", p.relations.len(), path.display());
                }
                None => print!("{}", p.dump()),
            }
            Ok(0)
        }
    }
}
