//! One report per `(group, s)` collecting every check.
//!
//! Phases run in a fixed order and never abort each other: a phase that
//! fails records an error and leaves its booleans false, and phases that need
//! the Gröbner basis are marked failed if it could not be computed.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use log::{info, warn};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::census::{self, decimal};
use crate::groebner::{buchberger, load_gb, save_gb, CacheHeader, GbBudget, GbError, ReducedGB};
use crate::honda_fgl;
use crate::nilsolve::{self, Implicit};
use crate::polyring::Poly;
use crate::presentations::{build, GroupTag, Presentation, Variant};
use crate::TOOL_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Build,
    Groebner,
    Dimension,
    Restriction,
    Relations,
    Nilsolve,
    Homogeneity,
    Census,
    Fgl,
}

impl Phase {
    pub const ALL: [Phase; 9] = [
        Phase::Build,
        Phase::Groebner,
        Phase::Dimension,
        Phase::Restriction,
        Phase::Relations,
        Phase::Nilsolve,
        Phase::Homogeneity,
        Phase::Census,
        Phase::Fgl,
    ];

    /// Phases that may be skipped from the command line.
    pub const SKIPPABLE: [Phase; 6] =
        [Phase::Restriction, Phase::Relations, Phase::Nilsolve, Phase::Homogeneity, Phase::Census, Phase::Fgl];

    pub fn name(self) -> &'static str {
        match self {
            Phase::Build => "build",
            Phase::Groebner => "groebner",
            Phase::Dimension => "dimension",
            Phase::Restriction => "restriction",
            Phase::Relations => "relations",
            Phase::Nilsolve => "nilsolve",
            Phase::Homogeneity => "homogeneity",
            Phase::Census => "census",
            Phase::Fgl => "fgl",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Phase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Phase::SKIPPABLE
            .into_iter()
            .find(|p| p.name() == s.trim())
            .ok_or_else(|| format!("unknown phase `{s}` (skippable: restriction, relations, nilsolve, homogeneity, census, fgl)"))
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    pub skip: BTreeSet<Phase>,
    pub budget: GbBudget,
    pub cache_dir: Option<PathBuf>,
}

impl VerifyOptions {
    fn runs(&self, phase: Phase) -> bool {
        !self.skip.contains(&phase)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub name: String,
    pub member: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationCheck {
    pub x1_ok: bool,
    pub y1_ok: bool,
    pub agree_with_fixed_point: bool,
    pub fixed_point_iterations: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomogeneityCheck {
    pub name: String,
    pub pass: bool,
    pub degree: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseError {
    pub phase: Phase,
    pub message: String,
    pub resource: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub group: GroupTag,
    pub s: u32,
    #[serde(with = "decimal")]
    pub chi_expected: BigUint,
    pub dim_computed: Option<u64>,
    pub dim_match: bool,
    #[serde(with = "decimal")]
    pub restriction_expected: BigUint,
    pub restriction_dim: Option<u64>,
    pub restriction_match: bool,
    pub relation_checks: Vec<RelationCheck>,
    pub elimination: EliminationCheck,
    pub homogeneity: Vec<HomogeneityCheck>,
    pub census_ok: bool,
    pub fgl_ok: bool,
    /// Seconds per phase.
    pub timings: BTreeMap<String, f64>,
    pub tool_version: String,
    pub skipped: Vec<Phase>,
    pub errors: Vec<PhaseError>,
}

impl VerificationReport {
    fn empty(group: GroupTag, s: u32, options: &VerifyOptions) -> Self {
        Self {
            group,
            s,
            chi_expected: census::chi(s),
            dim_computed: None,
            dim_match: false,
            restriction_expected: census::chi_restriction(s),
            restriction_dim: None,
            restriction_match: false,
            relation_checks: Vec::new(),
            elimination: EliminationCheck::default(),
            homogeneity: Vec::new(),
            census_ok: false,
            fgl_ok: false,
            timings: BTreeMap::new(),
            tool_version: TOOL_VERSION.to_string(),
            skipped: options.skip.iter().copied().collect(),
            errors: Vec::new(),
        }
    }

    fn ran(&self, phase: Phase) -> bool {
        !self.skipped.contains(&phase)
    }

    /// Checks that ran and failed, by phase.
    pub fn failures(&self) -> Vec<Phase> {
        let mut out: Vec<Phase> = self.errors.iter().map(|e| e.phase).collect();
        let mut fail = |phase: Phase, ok: bool| {
            if self.ran(phase) && !ok {
                out.push(phase);
            }
        };
        fail(Phase::Dimension, self.dim_match);
        fail(Phase::Restriction, self.restriction_match);
        fail(Phase::Relations, !self.relation_checks.is_empty() && self.relation_checks.iter().all(|r| r.member));
        let e = &self.elimination;
        fail(Phase::Nilsolve, e.x1_ok && e.y1_ok && e.agree_with_fixed_point);
        fail(Phase::Homogeneity, !self.homogeneity.is_empty() && self.homogeneity.iter().all(|h| h.pass));
        fail(Phase::Census, self.census_ok);
        fail(Phase::Fgl, self.fgl_ok);
        out.sort();
        out.dedup();
        out
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }

    pub fn has_resource_error(&self) -> bool {
        self.errors.iter().any(|e| e.resource)
    }

    /// The report with timings cleared, for reproducibility comparisons.
    pub fn without_timings(&self) -> Self {
        Self { timings: BTreeMap::new(), ..self.clone() }
    }

    fn record(&mut self, phase: Phase, message: impl fmt::Display, resource: bool) {
        let message = message.to_string();
        warn!("{} s={} {phase}: {message}", self.group, self.s);
        self.errors.push(PhaseError { phase, message, resource });
    }

    fn time<T>(&mut self, phase: Phase, f: impl FnOnce(&mut Self) -> T) -> T {
        let start = Instant::now();
        let out = f(self);
        self.timings.insert(phase.name().to_string(), start.elapsed().as_secs_f64());
        out
    }
}

/// Cache file for one presentation.
pub fn cache_path(dir: &Path, p: &Presentation) -> PathBuf {
    let suffix = match p.variant {
        Variant::Full => "",
        Variant::RestrictedC0 => "_c0",
    };
    dir.join(format!("{}_s{}{}.gb", p.group.to_string().to_lowercase(), p.s, suffix))
}

fn cache_header(p: &Presentation, gb_ring: &crate::polyring::PolyRing) -> CacheHeader {
    let group = match p.variant {
        Variant::Full => p.group.to_string(),
        Variant::RestrictedC0 => format!("{}-c0", p.group),
    };
    CacheHeader {
        group,
        s: p.s,
        order: gb_ring.order().spec(gb_ring.vars()),
        tool_version: TOOL_VERSION.to_string(),
    }
}

/// Reduced Gröbner basis of a presentation with `v = 1`, via the cache when given.
///
/// Unreadable or mismatching cache files are logged and recomputed.
pub fn groebner_basis(p: &Presentation, budget: GbBudget, cache_dir: Option<&Path>) -> Result<ReducedGB, GbError> {
    let header = cache_header(p, &p.ring);
    let path = cache_dir.map(|d| cache_path(d, p));
    if let Some(path) = &path {
        if path.exists() {
            match load_gb(path, &header, &p.ring) {
                Ok(gb) => {
                    info!("loaded {}", path.display());
                    return Ok(gb);
                }
                Err(e) => warn!("ignoring cache {}: {e}", path.display()),
            }
        }
    }
    let rels: Vec<Poly> = p.relations.iter().map(|r| r.poly.forget_v()).collect::<Result<_, _>>()?;
    let gb = buchberger(&rels, budget)?;
    if let Some(path) = &path {
        if let Err(e) = save_gb(&gb, &header, path) {
            warn!("could not write cache {}: {e}", path.display());
        }
    }
    Ok(gb)
}

/// The four derived relations that must lie in the ideal.
pub fn derived_relations(p: &Presentation) -> Vec<(String, Poly)> {
    let power = |var: &str, e: u32| if e == 1 { var.to_string() } else { format!("{var}^{e}") };
    let q = 1u32 << p.s;
    let h = q / 2;
    let texts = [
        "a^2*c + a*c^2".to_string(),
        "b^2*c + b*c^2".to_string(),
        format!("{} + {}*{}", power("x1", q), power("a", h), power("c", h)),
        format!("{} + {}*{}", power("y1", q), power("b", h), power("c", h)),
    ];
    texts
        .into_iter()
        .map(|t| {
            let poly = Poly::parse(&t, &p.ring).expect("derived relations use standard variables");
            (t, poly)
        })
        .collect()
}

/// Truncation used for the formal-group check at height `s`: `2^{s+1}`, at most 16.
pub fn fgl_truncation(s: u32) -> u32 {
    honda_fgl::default_truncation(s.min(3))
}

pub fn verify(group: GroupTag, s: u32, options: &VerifyOptions) -> VerificationReport {
    let mut report = VerificationReport::empty(group, s, options);
    let built = report.time(Phase::Build, |_| build(group, s));
    match built {
        Ok(p) => run_phases(&p, options, report),
        Err(e) => {
            report.record(Phase::Build, e, false);
            report
        }
    }
}

/// Verifies an arbitrary presentation, e.g. one loaded from a file.
pub fn verify_presentation(p: &Presentation, options: &VerifyOptions) -> VerificationReport {
    run_phases(p, options, VerificationReport::empty(p.group, p.s, options))
}

fn run_phases(p: &Presentation, options: &VerifyOptions, mut report: VerificationReport) -> VerificationReport {
    let cache = options.cache_dir.as_deref();
    let gb = report.time(Phase::Groebner, |r| match groebner_basis(p, options.budget, cache) {
        Ok(gb) => Some(gb),
        Err(e) => {
            let resource = e.is_resource();
            r.record(Phase::Groebner, e, resource);
            None
        }
    });

    if let Some(gb) = &gb {
        report.time(Phase::Dimension, |r| match gb.dimension() {
            Ok(d) => {
                r.dim_computed = Some(d as u64);
                r.dim_match = BigUint::from(d) == r.chi_expected;
            }
            Err(e) => r.record(Phase::Dimension, e, false),
        });
    }

    if options.runs(Phase::Restriction) {
        report.time(Phase::Restriction, |r| {
            let restricted = match p.restrict_c0() {
                Ok(q) => q,
                Err(e) => return r.record(Phase::Restriction, e, false),
            };
            match groebner_basis(&restricted, options.budget, cache).and_then(|g| g.dimension()) {
                Ok(d) => {
                    r.restriction_dim = Some(d as u64);
                    r.restriction_match = BigUint::from(d) == r.restriction_expected;
                }
                Err(e) => {
                    let resource = e.is_resource();
                    r.record(Phase::Restriction, e, resource);
                }
            }
        });
    }

    if options.runs(Phase::Relations) {
        if let Some(gb) = &gb {
            report.time(Phase::Relations, |r| {
                for (name, poly) in derived_relations(p) {
                    match gb.member(&poly) {
                        Ok(member) => r.relation_checks.push(RelationCheck { name, member }),
                        Err(e) => r.record(Phase::Relations, e, false),
                    }
                }
            });
        }
    }

    if options.runs(Phase::Nilsolve) {
        if let Some(gb) = &gb {
            report.time(Phase::Nilsolve, |r| {
                if let Err(e) = nilsolve_phase(p, gb, options.budget, &mut r.elimination) {
                    let resource = matches!(&e, nilsolve::NilsolveError::Gb(g) if g.is_resource());
                    r.record(Phase::Nilsolve, e, resource);
                }
            });
        }
    }

    if options.runs(Phase::Homogeneity) {
        report.time(Phase::Homogeneity, |r| {
            r.homogeneity = p
                .homogeneity_audit()
                .into_iter()
                .map(|a| HomogeneityCheck { pass: a.is_homogeneous(), degree: a.homogeneity.degree(), name: a.name })
                .collect();
        });
    }

    if options.runs(Phase::Census) {
        report.time(Phase::Census, |r| r.census_ok = census::census_ok(p.group, p.s));
    }

    if options.runs(Phase::Fgl) {
        report.time(Phase::Fgl, |r| match honda_fgl::run_checks(p.s, fgl_truncation(p.s)) {
            Ok(checks) => r.fgl_ok = checks.all_pass(),
            Err(e) => r.record(Phase::Fgl, e, false),
        });
    }
    report
}

fn nilsolve_phase(
    p: &Presentation,
    gb: &ReducedGB,
    budget: GbBudget,
    out: &mut EliminationCheck,
) -> Result<(), nilsolve::NilsolveError> {
    let front = [p.ring.var_index("x1")?, p.ring.var_index("y1")?];
    let elim = nilsolve::elimination_basis(p, budget)?;
    let mut eliminated = Vec::new();
    for which in [Implicit::X1, Implicit::Y1] {
        let ok = match nilsolve::eliminant_from(which, &elim, &p.ring) {
            Ok(e) => {
                let var = Poly::var(&p.ring, which.var_name())?;
                let ok = e.avoids(&front) && gb.member(&(&e + &var))?;
                eliminated.push(Some(e));
                ok
            }
            Err(nilsolve::NilsolveError::NoEliminant(_)) => {
                eliminated.push(None);
                false
            }
            Err(e) => return Err(e),
        };
        match which {
            Implicit::X1 => out.x1_ok = ok,
            Implicit::Y1 => out.y1_ok = ok,
        }
    }
    let (fx, fy) = nilsolve::solve_both(p, gb)?;
    out.fixed_point_iterations = Some((fx.iterations, fy.iterations));
    let mut agree = fx.stabilized && fy.stabilized;
    for (fp, e) in [(&fx.solution, &eliminated[0]), (&fy.solution, &eliminated[1])] {
        agree &= match e {
            Some(e) => gb.member(&(fp + e))?,
            None => false,
        };
    }
    out.agree_with_fixed_point = agree;
    Ok(())
}

/// Runs every `(group, s)` pair on its own thread; output is ordered by `s`, then group.
pub fn verify_all(s_list: &[u32], groups: &[GroupTag], options: &VerifyOptions) -> Vec<VerificationReport> {
    let jobs: Vec<(u32, GroupTag)> = s_list.iter().flat_map(|&s| groups.iter().map(move |&g| (s, g))).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|&(s, g)| scope.spawn(move || verify(g, s, options)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("verification thread panicked")).collect()
    })
}

fn yes_no(ran: bool, ok: bool) -> &'static str {
    match (ran, ok) {
        (false, _) => "skip",
        (true, true) => "ok",
        (true, false) => "FAIL",
    }
}

fn opt<T: fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), ToString::to_string)
}

/// Human-readable summary, one row per report.
pub fn render_table(reports: &[VerificationReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<5} {:>2} {:>8} {:>8} {:>8} {:>8} {:>9} {:>8} {:>11} {:>6} {:>6} {:>8}",
        "group", "s", "dim", "chi", "c=0 dim", "c=0 chi", "relations", "nilsolve", "homogeneity", "census", "fgl", "time[s]"
    );
    for r in reports {
        let rel_ok = !r.relation_checks.is_empty() && r.relation_checks.iter().all(|c| c.member);
        let e = &r.elimination;
        let hom_ok = !r.homogeneity.is_empty() && r.homogeneity.iter().all(|h| h.pass);
        let total: f64 = r.timings.values().sum();
        let _ = writeln!(
            out,
            "{:<5} {:>2} {:>8} {:>8} {:>8} {:>8} {:>9} {:>8} {:>11} {:>6} {:>6} {:>8.3}",
            r.group.to_string(),
            r.s,
            opt(&r.dim_computed),
            r.chi_expected,
            opt(&r.restriction_dim),
            r.restriction_expected,
            yes_no(r.ran(Phase::Relations), rel_ok),
            yes_no(r.ran(Phase::Nilsolve), e.x1_ok && e.y1_ok && e.agree_with_fixed_point),
            yes_no(r.ran(Phase::Homogeneity), hom_ok),
            yes_no(r.ran(Phase::Census), r.census_ok),
            yes_no(r.ran(Phase::Fgl), r.fgl_ok),
            total,
        );
        for err in &r.errors {
            let _ = writeln!(out, "      {} error: {}", err.phase, err.message);
        }
    }
    out
}
