//! Subcommand execution behind the `ppl` binary. Everything here is pure
//! apart from reading description files, so outputs are reproducible.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, DEFAULT_ENUMERATION_BOUND};
use crate::input::load_product;
use crate::period::{
    classify_rank1, enumerate_certified, relation_for, PeriodClass, DEFAULT_NODE_BUDGET,
};
use crate::report::{Record, Report};
use crate::scan::{default_families, exhaustive_scan_all, sampled_scan, ScanReport};
use crate::theorem::{
    auto_suite, corollary1_scan, corollary3_verdict, hopfian_verdict,
    inheritably_factorizable_verdict, inheritably_normal_verdict, proof_word_suite,
    simplicity_verdict, Answer, ProofBindings, ProofSuiteReport, Verdict, OUTSIDE_HYPOTHESES,
};
use crate::word::{exponent_in_range, FactorFamily, Mode, Word};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone)]
pub struct Options {
    pub format: Format,
    /// Overrides the file's `mode` line.
    pub lenient: bool,
    /// Largest factor order for which normal subgroups are enumerated.
    pub bound: usize,
    pub node_budget: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            format: Format::Text,
            lenient: false,
            bound: DEFAULT_ENUMERATION_BOUND,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

/// Element names for the proof words; unset names are chosen automatically
/// only when every name is unset.
#[derive(Debug, Clone, Default)]
pub struct BindingNames {
    pub a: Option<String>,
    pub a1: Option<String>,
    pub a2: Option<String>,
    pub g: Option<String>,
    pub b: Option<String>,
    pub b1: Option<String>,
    pub b2: Option<String>,
}

impl BindingNames {
    fn is_empty(&self) -> bool {
        [
            &self.a, &self.a1, &self.a2, &self.g, &self.b, &self.b1, &self.b2,
        ]
        .iter()
        .all(|x| x.is_none())
    }
}

#[derive(Debug, Clone)]
pub enum Command {
    Validate {
        spec: PathBuf,
    },
    Analyze {
        spec: PathBuf,
    },
    NormalSubgroups {
        spec: PathBuf,
        factor: Option<String>,
    },
    Periods {
        spec: PathBuf,
        max_syllables: usize,
        limit: Option<usize>,
    },
    Classify {
        spec: PathBuf,
        word: String,
    },
    Lemma1Scan {
        spec: Option<PathBuf>,
        max_conj: usize,
        /// Exhaustive when unset.
        samples: Option<u64>,
        seed: u64,
    },
    ProofSuite {
        spec: PathBuf,
        bindings: BindingNames,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A report plus the exit code it warrants; failures found by a check
/// (rather than bad input) still produce a full report.
struct Run {
    report: Report,
    code: i32,
    message: Option<String>,
}

impl From<Report> for Run {
    fn from(report: Report) -> Self {
        Run {
            report,
            code: EXIT_OK,
            message: None,
        }
    }
}

pub fn run(command: &Command, options: &Options) -> Outcome {
    let result = match command {
        Command::Validate { spec } => validate(spec, options).map(Run::from),
        Command::Analyze { spec } => analyze(spec, options).map(Run::from),
        Command::NormalSubgroups { spec, factor } => {
            normal_subgroups(spec, factor.as_deref(), options).map(Run::from)
        }
        Command::Periods {
            spec,
            max_syllables,
            limit,
        } => periods(spec, *max_syllables, *limit, options),
        Command::Classify { spec, word } => classify(spec, word, options).map(Run::from),
        Command::Lemma1Scan {
            spec,
            max_conj,
            samples,
            seed,
        } => lemma1_scan(spec.as_deref(), *max_conj, *samples, *seed, options),
        Command::ProofSuite { spec, bindings } => proof_suite(spec, bindings, options),
    };
    match result {
        Ok(run) => Outcome {
            code: run.code,
            stdout: render(&run.report, options.format),
            stderr: run
                .message
                .map(|m| format!("error: {m}\n"))
                .unwrap_or_default(),
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    }
}

fn load(spec: &Path, options: &Options) -> Result<Arc<FactorFamily>> {
    let mode = options.lenient.then_some(Mode::Lenient);
    load_product(spec, mode)?.family()
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn generator_names(group: &FiniteGroup, subgroup: &crate::group::SubgroupSet) -> String {
    let gens: Vec<&str> = group
        .generators_of(subgroup)
        .into_iter()
        .map(|x| group.element_name(x))
        .collect();
    if gens.is_empty() {
        "e".to_string()
    } else {
        gens.join(",")
    }
}

/// Labels every verdict of a lenient run whose exponent lies outside the
/// theorems' range, in addition to verdict-specific hypothesis failures.
fn family_outside(family: &FactorFamily) -> bool {
    family.mode() == Mode::Lenient && !exponent_in_range(family.n())
}

/// `extra` fields go before the free-text reason, which always comes last.
fn verdict_record(v: &Verdict, outside: bool, extra: &[(&str, String)]) -> Record {
    let mut r = Record::new("VERDICT")
        .field(v.question.as_str(), v.answer)
        .field("cite", v.citation);
    for (k, val) in extra {
        r = r.field(k, val);
    }
    if !v.uses.is_empty() {
        let uses: Vec<&str> = v.uses.iter().map(|c| c.as_str()).collect();
        r = r.field("uses", uses.join(","));
    }
    if let Some(code) = v.code {
        r = r.field("code", code.as_str());
    }
    if v.outside_hypotheses || outside {
        r = r.field("label", OUTSIDE_HYPOTHESES);
    }
    r.field("reason", &v.reason)
}

fn product_records(family: &FactorFamily, report: &mut Report) {
    report.push(
        Record::new("PRODUCT")
            .field("n", family.n())
            .field("mode", family.mode().as_str())
            .field("factors", family.len()),
    );
    for f in family.factors() {
        let g = &f.group;
        report.push(
            Record::new("FACTOR")
                .tag(&f.name)
                .field("order", g.order())
                .field("abelian", yes_no(g.is_abelian()))
                .field("cyclic", yes_no(g.is_cyclic()))
                .field("involutions", g.involutions().len())
                .field("power_order", g.power_subgroup(family.n()).order()),
        );
    }
}

fn validate(spec: &Path, options: &Options) -> Result<Report> {
    let family = load(spec, options)?;
    let mut report = Report::default();
    product_records(&family, &mut report);
    report.push(Record::new("STATUS").tag("ok"));
    Ok(report)
}

/// `(nontrivial normal subgroups, those that are inheritably normal)`.
fn normal_counts(
    family: &Arc<FactorFamily>,
    i: usize,
    bound: usize,
    outside: bool,
    report: Option<&mut Report>,
) -> Result<(usize, usize)> {
    let group = family.factor(i);
    let normals = group.normal_subgroups(bound)?;
    let mut yes = 0;
    let mut records = Vec::new();
    for n in &normals {
        let v = inheritably_normal_verdict(family, i, n)?;
        if !n.is_trivial() && v.answer == Answer::Yes {
            yes += 1;
        }
        records.push(verdict_record(
            &v,
            outside,
            &[
                ("factor", family.factor_name(i).to_string()),
                ("order", n.order().to_string()),
                ("generators", generator_names(group, n)),
            ],
        ));
    }
    if let Some(report) = report {
        for r in records {
            report.push(r);
        }
    }
    Ok((normals.len(), yes))
}

fn analyze(spec: &Path, options: &Options) -> Result<Report> {
    let family = load(spec, options)?;
    let outside = family_outside(&family);
    let mut report = Report::default();
    product_records(&family, &mut report);
    report.push(verdict_record(&simplicity_verdict(&family), outside, &[]));
    report.push(verdict_record(&hopfian_verdict(&family), outside, &[]));
    for i in 0..family.len() {
        let name = family.factor_name(i);
        let v = inheritably_factorizable_verdict(&family, i, options.bound)?;
        report.push(verdict_record(&v, outside, &[("factor", name.to_string())]));
        let (normal, inheritable) = normal_counts(&family, i, options.bound, outside, None)?;
        report.push(
            Record::new("COUNT")
                .field("factor", name)
                .field("normal", normal)
                .field("inheritably_normal", inheritable),
        );
    }
    let first = family.factor(0);
    let uniform_cyclic = family
        .factors()
        .iter()
        .all(|f| f.group.is_cyclic() && f.group.order() == first.order());
    if uniform_cyclic {
        let c3 = corollary3_verdict(family.len(), first.order() as u64, family.n());
        let mut extra = Vec::new();
        if let Some(parts) = c3.parts {
            extra.push(("hopfian", parts.hopfian.to_string()));
            extra.push(("residually_finite", parts.residually_finite.to_string()));
            extra.push(("simple", parts.simple.to_string()));
        }
        if let Some(note) = c3.note {
            extra.push(("note", note));
        }
        report.push(verdict_record(&c3.verdict, outside, &extra));
    }
    if family.len() == 2 {
        for (i, j) in [(0, 1), (1, 0)] {
            if family.factor(j).order() != 2 {
                continue;
            }
            let c1 = corollary1_scan(family.factor(i), family.n(), options.bound)?;
            report.push(
                Record::new("CONSISTENCY")
                    .tag("corollary1")
                    .field("cite", "Corollary1")
                    .field("factor", family.factor_name(i))
                    .field("premise", yes_no(c1.premise))
                    .field("conclusion", yes_no(c1.conclusion))
                    .field("involutions", c1.involutions)
                    .field("central_involutions", c1.central_involutions)
                    .field("tension", yes_no(c1.tension)),
            );
        }
    }
    Ok(report)
}

fn normal_subgroups(spec: &Path, factor: Option<&str>, options: &Options) -> Result<Report> {
    let family = load(spec, options)?;
    let outside = family_outside(&family);
    let indices: Vec<usize> = match factor {
        Some(name) => vec![family
            .factor_index(name)
            .ok_or_else(|| Error::BadReference(format!("unknown factor `{name}`")))?],
        None => (0..family.len()).collect(),
    };
    let mut report = Report::default();
    for i in indices {
        let (normal, inheritable) =
            normal_counts(&family, i, options.bound, outside, Some(&mut report))?;
        report.push(
            Record::new("COUNT")
                .field("factor", family.factor_name(i))
                .field("normal", normal)
                .field("inheritably_normal", inheritable),
        );
    }
    Ok(report)
}

fn periods(
    spec: &Path,
    max_syllables: usize,
    limit: Option<usize>,
    options: &Options,
) -> Result<Run> {
    let family = load(spec, options)?;
    let mut stream = enumerate_certified(&family, max_syllables, options.node_budget)?;
    let mut report = Report::default();
    let mut count = 0usize;
    let mut failure = None;
    while limit.is_none_or(|l| count < l) {
        match stream.next() {
            None => break,
            Some(Ok(period)) => {
                let relation = relation_for(&period)?;
                report.push(
                    Record::new("PERIOD")
                        .field("length", period.len())
                        .field("word", period.word().to_literal())
                        .field("relation", relation),
                );
                count += 1;
            }
            Some(Err(e)) => {
                failure = Some(e);
                break;
            }
        }
    }
    let mut summary = Record::new("COUNT")
        .field("periods", count)
        .field("max_syllables", max_syllables)
        .field("nodes", stream.nodes_visited());
    if failure.is_some() {
        summary = summary.field("status", "bound_exceeded");
    }
    report.push(summary);
    Ok(match failure {
        None => report.into(),
        Some(e) => Run {
            report,
            code: e.exit_code(),
            message: Some(e.to_string()),
        },
    })
}

fn classify(spec: &Path, literal: &str, options: &Options) -> Result<Report> {
    let family = load(spec, options)?;
    let word = Word::parse(&family, literal)?;
    let c = classify_rank1(&word);
    let mut r = Record::new("CLASS")
        .tag(c.class.tag())
        .field("core", c.core.to_literal())
        .field("length", c.core.len());
    match &c.class {
        PeriodClass::ProductOfTwoInvolutions(w) => {
            let (x, y) = w.involutions();
            r = r
                .field("shift", w.shift)
                .field("c", x.to_literal())
                .field("d", y.to_literal());
        }
        PeriodClass::ContainsNinePower(hit) => {
            r = r
                .field("period", hit.period)
                .field("start", hit.start)
                .field("run", hit.run);
        }
        PeriodClass::CertifiedRank1 => {
            let cw = crate::word::CyclicWord::new(c.core.clone())?;
            r = r.field("relation", relation_for(&cw)?);
        }
        PeriodClass::TooShort | PeriodClass::NotCyclicallyReduced => {}
    }
    let mut report = Report::default();
    report.push(r);
    Ok(report)
}

fn scan_record(scan: &ScanReport, mode: &str) -> Record {
    let mut r = Record::new("SCAN")
        .tag(if scan.ok() { "ok" } else { "fail" })
        .field("pairs", scan.pairs)
        .field("mismatches", scan.mismatches)
        .field("reduced", scan.reduced)
        .field("witnessed", scan.witnessed)
        .field("mode", mode);
    if let Some(m) = &scan.first_mismatch {
        r = r.field("first_mismatch", m);
    }
    r
}

fn lemma1_scan(
    spec: Option<&Path>,
    max_conj: usize,
    samples: Option<u64>,
    seed: u64,
    options: &Options,
) -> Result<Run> {
    let families = match spec {
        Some(path) => vec![load(path, options)?],
        None => default_families()?,
    };
    if families.iter().all(|f| f.involution_syllables().is_empty()) {
        return Err(Error::InvalidFamily("no factor has an involution".into()));
    }
    let mut report = Report::default();
    let scan = match samples {
        Some(s) => {
            let scan = sampled_scan(&families, max_conj, s, seed);
            report.push(
                scan_record(&scan, "sampled")
                    .field("seed", seed)
                    .field("max_conj", max_conj),
            );
            scan
        }
        None => {
            let scan = exhaustive_scan_all(&families, max_conj);
            report.push(scan_record(&scan, "exhaustive").field("max_conj", max_conj));
            scan
        }
    };
    Ok(if scan.ok() {
        report.into()
    } else {
        Run {
            report,
            code: EXIT_INVARIANT,
            message: Some(format!(
                "{} product(s) lack a verified two-involution witness",
                scan.mismatches
            )),
        }
    })
}

fn resolve_bindings(family: &FactorFamily, names: &BindingNames) -> Result<ProofBindings> {
    let lookup = |factor: usize, label: &str, name: &Option<String>| -> Result<Option<usize>> {
        name.as_ref()
            .map(|n| {
                family.factor(factor).element_by_name(n).ok_or_else(|| {
                    Error::BadReference(format!(
                        "binding {label}: unknown element `{n}` in factor `{}`",
                        family.factor_name(factor)
                    ))
                })
            })
            .transpose()
    };
    Ok(ProofBindings {
        a: lookup(0, "a", &names.a)?,
        a1: lookup(0, "a1", &names.a1)?,
        a2: lookup(0, "a2", &names.a2)?,
        g: lookup(0, "g", &names.g)?,
        b: lookup(1, "b", &names.b)?,
        b1: lookup(1, "b1", &names.b1)?,
        b2: lookup(1, "b2", &names.b2)?,
    })
}

fn proof_suite(spec: &Path, names: &BindingNames, options: &Options) -> Result<Run> {
    let family = load(spec, options)?;
    let suite: ProofSuiteReport = if names.is_empty() {
        auto_suite(&family)?
    } else {
        proof_word_suite(&family, &resolve_bindings(&family, names)?)?
    };
    let mut report = Report::default();
    for r in &suite.results {
        report.push(
            Record::new("PROOF")
                .tag(r.kind.as_str())
                .field("result", if r.passed() { "PASS" } else { "FAIL" })
                .field("word", r.word.to_literal())
                .field("length", r.word.len())
                .field("class", r.class.tag())
                .field("normal_order", r.normal_order)
                .field("image", r.image.to_literal())
                .field("congruence", yes_no(r.congruence))
                .field("power_congruence", yes_no(r.power_congruence)),
        );
    }
    let passed = suite.results.iter().filter(|r| r.passed()).count();
    report.push(
        Record::new("SUITE")
            .tag(if suite.all_passed() { "pass" } else { "fail" })
            .field("words", suite.results.len())
            .field("passed", passed),
    );
    Ok(if suite.all_passed() {
        report.into()
    } else {
        Run {
            report,
            code: EXIT_INVARIANT,
            message: Some("a proof word failed certification or its congruence".into()),
        }
    })
}
