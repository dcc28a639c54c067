//! Report assembly and the command-line interface.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::complex::{check_d_squared, check_equivariance, torus_complex, ChainComplex};
use crate::error::{Error, Result};
use crate::homology::{expected_dims, homology_dims, homology_presentation};
use crate::polyring::{check_ring_brackets, e1, e2, scalar, Scalar, Sl2, SymPoly};
use crate::sl2mod::{expected_decomposition, induced_module, EquivariantModule, ExtensionWitness, Summand, VermaTail};
use crate::statespace::{Element, DOT_O, OO, THETA};

pub const DEFAULT_QMAX: i64 = 40;
const MIN_QMAX: i64 = 4;

#[derive(Parser, Debug)]
#[command(name = "torus-sl2", version, about = "Exact sl2-equivariant homology of T(2,k) torus links")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Homology table, presentations and sl2 decomposition for one k.
    Compute {
        #[arg(long)]
        k: i64,
        #[arg(long, default_value_t = DEFAULT_QMAX)]
        qmax: i64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Runs every invariant suite over a range of k.
    Verify {
        #[arg(long, default_value_t = 2)]
        k_min: i64,
        #[arg(long, default_value_t = 8)]
        k_max: i64,
        #[arg(long, default_value_t = DEFAULT_QMAX)]
        qmax: i64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Corrupts one pair-of-pants entry before checking.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Weight multiplicities of one homology group.
    Character {
        #[arg(long)]
        k: i64,
        #[arg(long)]
        degree: i64,
        #[arg(long, visible_alias = "bound", default_value_t = DEFAULT_QMAX)]
        qmax: i64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub k: i64,
    pub normalized: bool,
    pub degrees: Vec<DegreeReport>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub i: usize,
    pub dims: Vec<(i64, usize)>,
    pub generators: Vec<Generator>,
    pub relations: Vec<String>,
    pub summands: Vec<Summand>,
    pub tail: Option<VermaTail>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub q: i64,
}

fn validate_k(k: i64) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidK(k));
    }
    Ok(())
}

fn validate_qmax(qmax: i64) -> Result<()> {
    if qmax < MIN_QMAX {
        return Err(Error::DimensionMismatch(format!("qmax must be at least {MIN_QMAX}, got {qmax}")));
    }
    Ok(())
}

pub fn cmd_compute(k: i64, qmax: i64) -> Result<Report> {
    validate_k(k)?;
    validate_qmax(qmax)?;
    let c = torus_complex(k, true)?;
    let dims = homology_dims(&c, qmax);
    let mut degrees = vec![];
    for i in 0..=c.top_degree() {
        let m = induced_module(&c, i)?;
        let p = m.presentation();
        let d = m.classify(qmax)?;
        degrees.push(DegreeReport {
            i,
            dims: dims.series(i),
            generators: p.generators().into_iter().map(|(name, q)| Generator { name, q }).collect(),
            relations: p.relation_strings(),
            summands: d.summands,
            tail: d.tail,
        });
    }
    Ok(Report { k, normalized: true, degrees, notes: findings()?.notes() })
}

/// Computed facts about the top and torsion modules that settle sign and
/// scalar questions; independent of k.
#[derive(Clone, Debug)]
pub struct Findings {
    pub top: EquivariantModule,
    pub torsion_relation: String,
    /// Whether `(E1^2 + 4 E2)·θι` is also a relation.
    pub plus_variant_holds: bool,
    pub v2: Element,
    pub v0: Element,
    pub f3_v2: Element,
    pub f_v0: Element,
    pub w2: ExtensionWitness,
    /// `c` in `e·(E1^2·o⊗o - 2 E1·o•⊗o) = c·v0`.
    pub candidate_w2_scalar: Option<Scalar>,
    pub w4: ExtensionWitness,
    pub candidate_w4: Element,
    pub candidate_w4_image: Element,
    pub candidate_w4_in_orbit_span: bool,
    pub tower_start: Option<i64>,
    /// First weight where a tower starting one step lower loses track of
    /// the character.
    pub late_tower_mismatch: Option<i64>,
}

pub fn findings() -> Result<Findings> {
    let bound = 20;
    let torsion = induced_module(&torus_complex(3, true)?, 1)?;
    let rel = &torsion.presentation().relations()[0];
    let torsion_relation = rel.display(torsion.generators()).to_string();
    let plus = Element::term(0, &(&e1() * &e1()) + &e2().scale(&scalar(4)));
    let plus_deg = plus.homogeneous_degree(torsion.generators()).expect("homogeneous");
    let plus_variant_holds = torsion.presentation().slice(plus_deg).contains_relation(&plus);

    let c = torus_complex(2, true)?;
    let top = induced_module(&c, 2)?;
    let gens = top.generators();
    let (a, b) = (gens.index_of(OO).expect("o⊗o survives"), gens.index_of(DOT_O).expect("o•⊗o survives"));
    let ab = |pa: SymPoly, pb: SymPoly| Element::from_terms([(a, pa), (b, pb)]);

    let v2 = top.highest_weight_vectors(2).remove(0);
    let v0 = top.highest_weight_vectors(0).remove(0);
    let o2 = top.f_orbit(&v2, 4);
    let o0 = top.f_orbit(&v0, 4);
    let f3_v2 = top.act(Sl2::F, &top.act(Sl2::F, &top.act(Sl2::F, &v2)));
    let f_v0 = top.act(Sl2::F, &v0);
    let missing = |w| Error::CharacterMismatch { weight: w, detail: "no extension witness".into() };
    let w2 = top.extension_probe(-2, std::slice::from_ref(&o0)).ok_or_else(|| missing(-2))?;
    let w4 = top.extension_probe(-4, std::slice::from_ref(&o2)).ok_or_else(|| missing(-4))?;

    let candidate_w2 = ab(&e1() * &e1(), e1().scale(&scalar(-2)));
    let candidate_w2_scalar = multiple_of(&top.act(Sl2::E, &candidate_w2), &v0);

    let e1e2 = &e1() * &e2();
    let candidate_w4 = ab(
        &(&(&e1() * &e1()) * &e1()) - &e1e2.scale(&scalar(4)),
        &(&e1() * &e1()).scale(&scalar(-4)) + &e2().scale(&scalar(10)),
    );
    let candidate_w4_image = top.act(Sl2::E, &candidate_w4);
    let f2_v2 = o2.at_weight(-2).cloned().unwrap_or_else(Element::zero);
    let candidate_w4_in_orbit_span = multiple_of(&candidate_w4_image, &f2_v2).is_some();

    let decomposition = top.classify(bound)?;
    let tower_start = decomposition.tail.map(|t| t.start);
    let late_tower_mismatch = tower_start.and_then(|start| {
        let mut late = decomposition.summands.clone();
        late.extend((1..).map(|r| start - 2 * r).take_while(|&w| w >= -bound).map(Summand::Verma));
        let ch = crate::sl2mod::character_of(&late, bound);
        let actual = top.character(bound);
        (0..).map(|s| 2 - 2 * s).take_while(|&w| w >= -bound).find(|&w| ch.get(w) != actual.get(w))
    });

    Ok(Findings {
        top,
        torsion_relation,
        plus_variant_holds,
        v2,
        v0,
        f3_v2,
        f_v0,
        w2,
        candidate_w2_scalar,
        w4,
        candidate_w4,
        candidate_w4_image,
        candidate_w4_in_orbit_span,
        tower_start,
        late_tower_mismatch,
    })
}

/// `Some(c)` with `v = c·u`, for nonzero `u`.
fn multiple_of(v: &Element, u: &Element) -> Option<Scalar> {
    let (i, p) = u.terms().next()?;
    let (mono, lead) = p.leading_term()?;
    let c = v.coeff(i).coeff(mono.0, mono.1) / lead;
    (u.scale_scalar(&c) == *v).then_some(c)
}

impl Findings {
    pub fn notes(&self) -> Vec<String> {
        let g = self.top.generators();
        let show = |v: &Element| v.display(g).to_string();
        let mut notes = vec![format!(
            "torsion relation: {} = 0; the variant with +4*E2 {}",
            self.torsion_relation,
            if self.plus_variant_holds { "also holds" } else { "is not a relation and is inconsistent with the odd differential" }
        )];
        notes.push(format!(
            "v2 = {}, v0 = {}; f^3·v2 = {}, f·v0 = {}",
            show(&self.v2),
            show(&self.v0),
            show(&self.f3_v2),
            show(&self.f_v0)
        ));
        match &self.candidate_w2_scalar {
            Some(c) => notes.push(format!("e·(E1^2·o⊗o - 2*E1·o•⊗o) = {c}·v0")),
            None => notes.push("e·(E1^2·o⊗o - 2*E1·o•⊗o) is not a multiple of v0".into()),
        }
        notes.push(witness_note(&self.w2, g));
        notes.push(format!(
            "e·({}) = {}, which {} the span of f^2·v2; f^3·v2 = 0, so no nonzero e-image equals a multiple of f^3·v2",
            show(&self.candidate_w4),
            show(&self.candidate_w4_image),
            if self.candidate_w4_in_orbit_span { "lies in" } else { "lies outside" }
        ));
        notes.push(witness_note(&self.w4, g));
        if let Some(start) = self.tower_start {
            let mut line = format!("top-degree Verma tower starts at M({start}), i.e. r = {}", -start / 2);
            if let Some(w) = self.late_tower_mismatch {
                let _ = write!(line, "; starting at r = {} leaves weight {w} unaccounted", -start / 2 + 1);
            }
            notes.push(line);
        }
        notes
    }
}

fn witness_note(w: &ExtensionWitness, g: &crate::statespace::GradedModule) -> String {
    let terms: Vec<String> = w
        .coefficients
        .iter()
        .zip(&w.targets)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, t)| format!("{c}·({})", t.display(g)))
        .collect();
    format!("extension witness at weight {}: e·({}) = {}", w.weight, w.w.display(g), terms.join(" + "))
}

pub fn render_text(r: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "T(2,{}){}", r.k, if r.normalized { " normalized" } else { "" });
    for d in &r.degrees {
        let _ = writeln!(s, "H^{}", d.i);
        let dims: Vec<String> = d.dims.iter().map(|(q, n)| format!("{q}:{n}")).collect();
        let _ = writeln!(s, "  dims: {}", if dims.is_empty() { "0".into() } else { dims.join(" ") });
        let gens: Vec<String> = d.generators.iter().map(|g| format!("{} (q={})", g.name, g.q)).collect();
        let _ = writeln!(s, "  generators: {}", if gens.is_empty() { "none".into() } else { gens.join("; ") });
        let rels = if d.relations.is_empty() { "none".into() } else { d.relations.join("; ") };
        let _ = writeln!(s, "  relations: {rels}");
        let sums: Vec<String> = d.summands.iter().map(ToString::to_string).collect();
        let _ = writeln!(s, "  summands: {}", if sums.is_empty() { "none".into() } else { sums.join(" ⊕ ") });
        match d.tail {
            Some(t) => {
                let _ = writeln!(s, "  tail: start={} step={}", t.start, t.step);
            }
            None => {
                let _ = writeln!(s, "  tail: none");
            }
        }
    }
    let _ = writeln!(s, "notes:");
    for n in &r.notes {
        let _ = writeln!(s, "  - {n}");
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub suite: String,
    pub k: Option<i64>,
    pub passed: bool,
    pub counterexample: Option<String>,
}

impl SuiteOutcome {
    fn new(suite: &str, k: Option<i64>, result: std::result::Result<(), String>) -> Self {
        let passed = result.is_ok();
        SuiteOutcome { suite: suite.into(), k, passed, counterexample: result.err() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub k_min: i64,
    pub k_max: i64,
    pub qmax: i64,
    pub suites: Vec<SuiteOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }

    pub fn first_failure(&self) -> Option<&SuiteOutcome> {
        self.suites.iter().find(|s| !s.passed)
    }
}

/// Pair-of-pants entry `θι -> o•⊗o` changed from 1 to 2.
pub fn inject_fault(c: &mut ChainComplex) {
    let k = c.top_degree();
    let row = c.group(k).module.index_of(DOT_O).expect("two-circle basis");
    let col = c.group(k - 1).module.index_of(THETA).expect("theta basis");
    c.corrupt_entry(k - 1, row, col, SymPoly::from_int(2));
}

pub fn cmd_verify(k_min: i64, k_max: i64, qmax: i64, fault: bool) -> Result<VerifyReport> {
    validate_k(k_min)?;
    validate_qmax(qmax)?;
    if k_max < k_min {
        return Err(Error::InvalidK(k_max));
    }
    let mut suites = vec![SuiteOutcome::new("ring brackets to degree 12", None, check_ring_brackets(12))];
    for k in k_min..=k_max {
        let mut c = torus_complex(k, true)?;
        if fault {
            inject_fault(&mut c);
        }
        suites.extend(verify_complex(&c, k, qmax));
    }
    Ok(VerifyReport { k_min, k_max, qmax, suites })
}

fn verify_complex(c: &ChainComplex, k: i64, qmax: i64) -> Vec<SuiteOutcome> {
    let from_check = |r: crate::complex::CheckReport| match r.first_violation() {
        None => Ok(()),
        Some(v) => Err(format!("degree {}: {}", v.degree, v.detail)),
    };
    let mut out = vec![
        SuiteOutcome::new("d∘d = 0", Some(k), from_check(check_d_squared(c))),
        SuiteOutcome::new("sl2-equivariance", Some(k), from_check(check_equivariance(c))),
    ];
    let dims = homology_dims(c, qmax);
    let graded = expected_dims(k, qmax).map_err(|e| e.to_string()).and_then(|want| {
        match dims.first_difference(&want) {
            None => Ok(()),
            Some((i, q, got, want)) => Err(format!("H^{i} at q={q}: computed {got}, expected {want}")),
        }
    });
    out.push(SuiteOutcome::new("graded dimensions", Some(k), graded));

    let mut dual = Ok(());
    let mut modules = vec![];
    for i in 0..=c.top_degree() {
        let p = match homology_presentation(c, i) {
            Ok(p) => p,
            Err(e) => {
                dual = Err(format!("H^{i}: {e}"));
                break;
            }
        };
        let qmin = c.group(i).module.min_qdeg().unwrap_or(0);
        if let Some(q) = (qmin..=qmax).find(|&q| p.slice_dim(q) != dims.get(i, q)) {
            dual = Err(format!("H^{i} at q={q}: presentation {}, slice engine {}", p.slice_dim(q), dims.get(i, q)));
            break;
        }
        modules.push(induced_module(c, i).map_err(|e| format!("H^{i}: {e}")));
    }
    out.push(SuiteOutcome::new("presentation vs slice engine", Some(k), dual));

    let bound = qmax.min(20);
    let brackets = modules.iter().enumerate().try_for_each(|(i, m)| {
        m.as_ref().map_err(Clone::clone)?.check_brackets(bound).map_err(|e| format!("H^{i}: {e}"))
    });
    out.push(SuiteOutcome::new("module brackets", Some(k), brackets));

    let classification = modules.iter().enumerate().try_for_each(|(i, m)| {
        let m = m.as_ref().map_err(Clone::clone)?;
        let got = m.classify(qmax).map_err(|e| format!("H^{i}: {e}"))?;
        let want = expected_decomposition(k, i, qmax).map_err(|e| e.to_string())?;
        if got.window_summands() != want.window_summands() {
            return Err(format!("H^{i}: classified as {got}, expected {want}"));
        }
        if got.character() != m.character(qmax) {
            return Err(format!("H^{i}: summand character differs from module character"));
        }
        Ok(())
    });
    out.push(SuiteOutcome::new("classification", Some(k), classification));
    out
}

/// `(weight, dim)` from the chain group's top weight down to `-bound`.
pub fn cmd_character(k: i64, degree: i64, bound: i64) -> Result<Vec<(i64, usize)>> {
    validate_k(k)?;
    if degree < 0 || degree > k {
        return Err(Error::DegreeOutOfRange { degree, k: k as usize });
    }
    let c = torus_complex(k, true)?;
    let m = induced_module(&c, degree as usize)?;
    let top = -c.group(degree as usize).module.min_qdeg().unwrap_or(0);
    Ok((0..).map(|s| top - 2 * s).take_while(|&w| w >= -bound).map(|w| (w, m.weight_dim(w))).collect())
}

/// Parses `args` and runs one subcommand; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Compute { k, qmax, format } => {
            let report = cmd_compute(k, qmax)?;
            let text = match format {
                Format::Json => to_json(&report),
                Format::Text => render_text(&report),
            };
            let _ = write!(out, "{text}");
            Ok(0)
        }
        Command::Verify { k_min, k_max, qmax, format, inject_fault } => {
            let report = cmd_verify(k_min, k_max, qmax, inject_fault)?;
            match format {
                Format::Json => {
                    let _ = write!(out, "{}", to_json(&report));
                }
                Format::Text => {
                    for s in &report.suites {
                        let tag = if s.passed { "PASS" } else { "FAIL" };
                        let k = s.k.map(|k| format!("k={k} ")).unwrap_or_default();
                        let _ = writeln!(out, "[{tag}] {k}{}", s.suite);
                    }
                    let passed = report.suites.iter().filter(|s| s.passed).count();
                    let _ = writeln!(out, "{passed}/{} suites passed", report.suites.len());
                    if let Some(f) = report.first_failure() {
                        let k = f.k.map(|k| format!(" (k={k})")).unwrap_or_default();
                        let detail = f.counterexample.as_deref().unwrap_or("");
                        let _ = writeln!(out, "first counterexample in {}{k}: {detail}", f.suite);
                    }
                }
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Character { k, degree, qmax, format } => {
            let ch = cmd_character(k, degree, qmax)?;
            match format {
                Format::Json => {
                    let _ = write!(out, "{}", to_json(&ch));
                }
                Format::Text => {
                    for (w, d) in ch {
                        let _ = writeln!(out, "{w}:{d}");
                    }
                }
            }
            Ok(0)
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}
