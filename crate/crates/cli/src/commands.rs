use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use circle_breaks::diagnostics::{break_growth, invariant_measure_histogram, MAX_GROWTH_ITERATE};
use circle_breaks::error::exit;
use circle_breaks::exact::{
    exact_from_docs, exact_reduce_case1, format_rational, oracle_compare, to_f64,
};
use circle_breaks::jumps::{analyze as analyze_map, Analysis};
use circle_breaks::mapspec::{document_for, parse_document, MapDocument, MapSpecDoc};
use circle_breaks::reduction::{
    conjugate_to_diffeo, normalize_rotation_zero, reduce_to_prescribed, two_break_to_rotation,
    verify_triple, PredictedBreak, RotationReport, TripleCheck,
};
use circle_breaks::rotnum::{rotation_number_from, Rationality};
use circle_breaks::suite;
use circle_breaks::{
    AnalysisError, BreakRecord, CirclePoint, ConjugatorFamily, ConnectionReport, InvariantSheet,
    MapSpecError, MapWord, RationalPL, ReductionConfig, ReductionError, ReductionResult,
    RotationEstimate, Tolerances,
};
use serde::Serialize;

use crate::output::{json, out_dir, sci, verdict, write_atomic};
use crate::{Common, FamilyArg};

const ROTATION_NOTE: &str = "numerical estimate; irrationality is never certified, so results that assume an irrational rotation number rest on an unverified hypothesis";
const CONCENTRATION_NOTE: &str =
    "top-decile mass is an ad hoc concentration diagnostic, not a measure of singularity";
/// Bound on `sup |DF - 1|` for the reduced two-break map.
const ROTATION_DERIVATIVE_TOL: f64 = 1e-6;
const EXACT_GRID: usize = 1000;
const EXACT_AGREEMENT: f64 = 1e-10;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: exit::PARSE,
            message: message.into(),
        }
    }

    pub fn other(message: impl Into<String>) -> Self {
        CliError {
            code: exit::OTHER,
            message: message.into(),
        }
    }
}

impl From<MapSpecError> for CliError {
    fn from(e: MapSpecError) -> Self {
        CliError {
            code: e.exit_code(),
            message: e.to_string(),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        CliError {
            code: e.exit_code(),
            message: e.to_string(),
        }
    }
}

impl From<ReductionError> for CliError {
    fn from(e: ReductionError) -> Self {
        CliError {
            code: e.exit_code(),
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<i32, CliError>;

fn load(path: &Path) -> Result<MapDocument, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    parse_document(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn exact_of(doc: &MapSpecDoc) -> Option<RationalPL> {
    exact_from_docs(&doc.word).ok()
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    command: &'a str,
    tolerances: Tolerances,
    n_max: usize,
    #[serde(flatten)]
    body: T,
}

/// Prints the report (text or JSON) and, with `--out`, stores it as `name`.
fn emit<T: Serialize>(
    c: &Common,
    command: &str,
    file: &str,
    body: T,
    text: String,
) -> Result<(), CliError> {
    let env = Envelope {
        command,
        tolerances: c.tolerances(),
        n_max: c.n_max,
        body,
    };
    let rendered = json(&env);
    if let Some(dir) = c.out.as_deref() {
        write_atomic(&out_dir(Some(dir))?, file, &rendered)?;
    }
    if c.json {
        print!("{rendered}");
    } else {
        print!("{text}");
    }
    Ok(())
}

fn tol_line(t: &Tolerances) -> String {
    format!(
        "tolerances: point {}, jump {}, reduce {}\n",
        sci(t.point),
        sci(t.jump),
        sci(t.reduce)
    )
}

fn break_table(out: &mut String, title: &str, breaks: &[BreakRecord]) {
    let _ = writeln!(out, "{title} ({}):", breaks.len());
    for b in breaks {
        let _ = writeln!(
            out,
            "  x = {:.12}  D- = {:.9}  D+ = {:.9}  jump = {:.12}",
            b.point.value(),
            b.d_minus,
            b.d_plus,
            b.jump
        );
    }
}

fn connection_table(out: &mut String, conns: &[ConnectionReport]) {
    let _ = writeln!(out, "connections ({}):", conns.len());
    for (i, c) in conns.iter().enumerate() {
        let jumps: Vec<String> = c.jumps.iter().map(|j| format!("{j:.9}")).collect();
        let _ = writeln!(
            out,
            "  #{i}: from {:.12}, length {}, jumps [{}], orbit product {:.12}",
            c.representative.value(),
            c.last_offset,
            jumps.join(", "),
            c.orbit_product
        );
    }
}

fn invariant_lines(out: &mut String, inv: &InvariantSheet, tol: &Tolerances) {
    let _ = writeln!(
        out,
        "invariants: pi_s = {:.12}, pi = {:.12}, sigma = {:.12} (k = {:?})",
        inv.pi_s, inv.pi, inv.sigma, inv.k_vector
    );
    let _ = writeln!(
        out,
        "orbit products all 1 (within {}): {}",
        sci(tol.reduce),
        inv.d_property
    );
}

fn rotation_line(out: &mut String, label: &str, r: &RotationEstimate) {
    let cf: Vec<String> = r
        .continued_fraction
        .iter()
        .take(12)
        .map(u64::to_string)
        .collect();
    let flag = match r.rationality {
        Rationality::LooksRational { p, q } => format!("looks rational ({p}/{q})"),
        Rationality::NoPeriodFound => "no period found".into(),
    };
    let _ = writeln!(
        out,
        "{label}: {:.12} +/- {} (n = {}, base {}), cf [{}], {flag}",
        r.value,
        sci(r.error_bound),
        r.n_iter,
        r.base_point,
        cf.join(", ")
    );
}

// ---------------------------------------------------------------- analyze

#[derive(Serialize)]
struct AnalyzeReport<'a> {
    input: String,
    letters: usize,
    piecewise_linear: bool,
    #[serde(flatten)]
    analysis: &'a Analysis,
    rotation: RotationEstimate,
    rotation_note: &'static str,
}

pub fn analyze(c: &Common, input: &Path, iters: u64) -> CmdResult {
    let tol = c.tolerances();
    let doc = load(input)?;
    let f = &doc.word;
    let analysis = analyze_map(f, c.n_max, &tol)?;
    let rotation = rotation_number_from(f, iters, 0.0);
    let mut text = format!("map: {}, word length {}\n", input.display(), f.len());
    text.push_str(&tol_line(&tol));
    break_table(&mut text, "breaks", &analysis.breaks);
    connection_table(&mut text, &analysis.connections);
    invariant_lines(&mut text, &analysis.invariants, &tol);
    rotation_line(&mut text, "rotation number", &rotation);
    let _ = writeln!(text, "note: {ROTATION_NOTE}");
    let report = AnalyzeReport {
        input: input.display().to_string(),
        letters: f.len(),
        piecewise_linear: f.is_piecewise_linear(),
        analysis: &analysis,
        rotation,
        rotation_note: ROTATION_NOTE,
    };
    emit(c, "analyze", "analysis.json", report, text)?;
    Ok(0)
}

// ---------------------------------------------------------------- reduce

pub struct ReduceMode {
    pub k: Option<Vec<i64>>,
    pub family: FamilyArg,
    pub to_diffeo: bool,
    pub normalize: bool,
    pub two_break: bool,
    pub iters: u64,
}

impl ReduceMode {
    fn name(&self) -> &'static str {
        if self.two_break {
            "two_break"
        } else if self.normalize {
            "normalize"
        } else if self.to_diffeo {
            "to_diffeo"
        } else {
            "prescribed"
        }
    }
}

#[derive(Serialize)]
struct ExactSection {
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    conjugator_deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reduced_deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reduced_jump_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    prediction_gap: Option<f64>,
    /// `(point, orbit product)` as exact rationals.
    predicted: Vec<(String, String)>,
    agreement_bound: f64,
    grid_points: usize,
}

#[derive(Serialize)]
struct ReduceReport<'a> {
    input: String,
    mode: &'static str,
    family: ConjugatorFamily,
    k_vector: &'a [i64],
    connections: &'a [ConnectionReport],
    invariants: &'a InvariantSheet,
    predicted: &'a [PredictedBreak],
    reduced_breaks: &'a [BreakRecord],
    residual: f64,
    spurious_residual: f64,
    conjugacy_residual: f64,
    conjugacy_grid: usize,
    intermediate_sigma: Option<f64>,
    fixed_point: Option<CirclePoint>,
    within_tolerance: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    rotation: Option<RotationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<ExactSection>,
    files: Vec<String>,
}

fn exact_check(
    f: &RationalPL,
    k: &[i64],
    n_max: usize,
    r: &ReductionResult,
) -> (ExactSection, Option<(RationalPL, RationalPL)>) {
    let mut section = ExactSection {
        status: "ok".into(),
        conjugator_deviation: None,
        reduced_deviation: None,
        reduced_jump_error: None,
        prediction_gap: None,
        predicted: Vec::new(),
        agreement_bound: EXACT_AGREEMENT,
        grid_points: EXACT_GRID,
    };
    let ex = match exact_reduce_case1(f, k, n_max) {
        Ok(ex) => ex,
        Err(e) => {
            section.status = format!("exact reduction failed: {e}");
            return (section, None);
        }
    };
    let h = oracle_compare(&r.conjugator, &ex.conjugator, EXACT_GRID);
    let red = oracle_compare(&r.reduced, &ex.reduced, EXACT_GRID);
    match (h, red) {
        (Ok(h), Ok(red)) => {
            section.conjugator_deviation = Some(h.max_deviation);
            section.reduced_deviation = Some(red.max_deviation);
            section.reduced_jump_error = Some(red.max_jump_error);
        }
        (Err(e), _) | (_, Err(e)) => section.status = format!("comparison failed: {e}"),
    }
    let gap = r
        .predicted
        .iter()
        .map(|p| {
            ex.predicted
                .iter()
                .map(|(x, _)| CirclePoint::new(to_f64(x)).distance(p.point))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    section.prediction_gap = Some(gap);
    section.predicted = ex
        .predicted
        .iter()
        .map(|(x, s)| (format_rational(x), format_rational(s)))
        .collect();
    (section, Some((ex.conjugator, ex.reduced)))
}

pub fn reduce(c: &Common, input: &Path, mode: ReduceMode) -> CmdResult {
    let tol = c.tolerances();
    let doc = load(input)?;
    let f = &doc.word;
    let family = match mode.family {
        FamilyArg::Auto | FamilyArg::Pe => ConjugatorFamily::Pe,
        FamilyArg::Pq => ConjugatorFamily::Pq,
        FamilyArg::Pl => ConjugatorFamily::Pl,
    };
    let cfg = ReductionConfig {
        tol,
        n_max: c.n_max,
        family,
    };
    let mut rotation = None;
    let result = if mode.two_break {
        let (r, rot) = two_break_to_rotation(f, &cfg, mode.iters)?;
        rotation = Some(rot);
        r
    } else if mode.normalize {
        normalize_rotation_zero(f, &cfg)?
    } else if mode.to_diffeo {
        conjugate_to_diffeo(f, &cfg)?
    } else {
        let k = match &mode.k {
            Some(k) => k.clone(),
            None => vec![0; analyze_map(f, c.n_max, &tol)?.connections.len()],
        };
        reduce_to_prescribed(f, &k, &cfg)?
    };
    if mode.family == FamilyArg::Pl && result.family != ConjugatorFamily::Pl {
        return Err(CliError::other(
            "a PL conjugator cannot reach the requested positions",
        ));
    }
    let k_vector = result.invariants.k_vector.clone();

    let dir = out_dir(c.out.as_deref())?;
    let mut files = vec!["conjugator.json".to_string(), "reduced.json".to_string()];
    write_atomic(
        &dir,
        "conjugator.json",
        &json(&document_for(&result.conjugator, None)),
    )?;
    write_atomic(
        &dir,
        "reduced.json",
        &json(&document_for(&result.reduced, None)),
    )?;

    let mut exact = None;
    if result.family == ConjugatorFamily::Pl && !mode.two_break {
        if let Some(fx) = exact_of(&doc.doc) {
            let (section, maps) = exact_check(&fx, &k_vector, c.n_max, &result);
            if let Some((h, red)) = maps {
                write_atomic(&dir, "conjugator.exact.json", &json(&h.to_doc()))?;
                write_atomic(&dir, "reduced.exact.json", &json(&red.to_doc()))?;
                files.push("conjugator.exact.json".into());
                files.push("reduced.exact.json".into());
            }
            exact = Some(section);
        }
    }
    files.push("report.json".into());

    let within = result.within(tol.reduce)
        && rotation
            .as_ref()
            .is_none_or(|r| r.sup_derivative_deviation <= ROTATION_DERIVATIVE_TOL);
    let exact_ok = exact.as_ref().is_none_or(|e| {
        e.status == "ok"
            && [
                e.conjugator_deviation,
                e.reduced_deviation,
                e.prediction_gap,
            ]
            .iter()
            .all(|d| d.is_some_and(|d| d <= EXACT_AGREEMENT))
    });

    let mut text = format!("map: {}, word length {}\n", input.display(), f.len());
    text.push_str(&tol_line(&tol));
    let _ = writeln!(
        text,
        "mode {}, family {}, k = {:?}",
        mode.name(),
        result.family.name(),
        k_vector
    );
    connection_table(&mut text, &result.connections);
    invariant_lines(&mut text, &result.invariants, &tol);
    if let Some(s) = result.intermediate_sigma {
        let _ = writeln!(text, "sigma after one-break correction: {s:.12}");
    }
    let _ = writeln!(text, "predicted breaks of the reduced map:");
    for p in &result.predicted {
        let _ = writeln!(
            text,
            "  connection {} offset {}: x = {:.12}  predicted {:.12}  measured {:.12}  error {}",
            p.connection,
            p.offset,
            p.point.value(),
            p.predicted,
            p.measured,
            sci(p.error())
        );
    }
    let _ = writeln!(
        text,
        "residuals (bound {}): jump {}, spurious {}, conjugacy {} on {} points: {}",
        sci(tol.reduce),
        sci(result.residual),
        sci(result.spurious_residual),
        sci(result.conjugacy_residual),
        circle_breaks::reduction::CONJUGACY_GRID,
        verdict(within)
    );
    if let Some(r) = &rotation {
        let _ = writeln!(
            text,
            "reduced map: F(0) = {:.12}, sup |DF - 1| = {}, sup distance to rotation = {}",
            r.translation,
            sci(r.sup_derivative_deviation),
            sci(r.sup_distance_to_rotation)
        );
        rotation_line(&mut text, "rotation number of f", &r.rho_original);
        rotation_line(&mut text, "rotation number of F", &r.rho_reduced);
    }
    if let Some(e) = &exact {
        let _ = writeln!(
            text,
            "exact rerun: {}; deviation conjugator {}, reduced {}, predicted points {} (bound {})",
            e.status,
            e.conjugator_deviation.map_or("-".into(), sci),
            e.reduced_deviation.map_or("-".into(), sci),
            e.prediction_gap.map_or("-".into(), sci),
            sci(EXACT_AGREEMENT)
        );
    }
    let _ = writeln!(text, "wrote {} to {}", files.join(", "), dir.display());

    let report = ReduceReport {
        input: input.display().to_string(),
        mode: mode.name(),
        family: result.family,
        k_vector: &k_vector,
        connections: &result.connections,
        invariants: &result.invariants,
        predicted: &result.predicted,
        reduced_breaks: &result.measured,
        residual: result.residual,
        spurious_residual: result.spurious_residual,
        conjugacy_residual: result.conjugacy_residual,
        conjugacy_grid: circle_breaks::reduction::CONJUGACY_GRID,
        intermediate_sigma: result.intermediate_sigma,
        fixed_point: result.fixed_point,
        within_tolerance: within && exact_ok,
        rotation,
        exact,
        files,
    };
    let env = Envelope {
        command: "reduce",
        tolerances: tol,
        n_max: c.n_max,
        body: report,
    };
    let rendered = json(&env);
    write_atomic(&dir, "report.json", &rendered)?;
    if c.json {
        print!("{rendered}");
    } else {
        print!("{text}");
    }
    Ok(if within && exact_ok {
        0
    } else {
        exit::RESIDUAL
    })
}

// ---------------------------------------------------------------- verify

#[derive(Serialize)]
struct ExactIdentity {
    /// `F o h = h o f` in rational arithmetic.
    identity_holds: bool,
    /// Largest distance between the float words and their exact counterparts.
    float_deviation: f64,
    grid_points: usize,
}

#[derive(Serialize)]
struct VerifyReport {
    map: String,
    conjugator: String,
    reduced: String,
    k_vector: Vec<i64>,
    #[serde(flatten)]
    check: TripleCheck,
    within_tolerance: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<ExactIdentity>,
}

pub fn verify(
    c: &Common,
    map: &Path,
    conjugator: &Path,
    reduced: &Path,
    k: Option<Vec<i64>>,
) -> CmdResult {
    let tol = c.tolerances();
    let f = load(map)?;
    let h = load(conjugator)?;
    let red = load(reduced)?;
    let k = match k {
        Some(k) => k,
        None => vec![0; analyze_map(&f.word, c.n_max, &tol)?.connections.len()],
    };
    let check = verify_triple(&f.word, &h.word, &red.word, &k, c.n_max, &tol)?;
    let within = check.within(tol.reduce);

    let exact = match (exact_of(&f.doc), exact_of(&h.doc), exact_of(&red.doc)) {
        (Some(fx), Some(hx), Some(rx)) => {
            let identity_holds = rx.compose(&hx) == hx.compose(&fx);
            let float_deviation = [(&f.word, &fx), (&h.word, &hx), (&red.word, &rx)]
                .iter()
                .map(|(w, p)| {
                    oracle_compare(w, p, EXACT_GRID).map_or(f64::INFINITY, |r| r.max_deviation)
                })
                .fold(0.0, f64::max);
            Some(ExactIdentity {
                identity_holds,
                float_deviation,
                grid_points: EXACT_GRID,
            })
        }
        _ => None,
    };
    let exact_ok = exact
        .as_ref()
        .is_none_or(|e| e.identity_holds && e.float_deviation <= EXACT_AGREEMENT);

    let mut text = format!(
        "map {}, conjugator {}, reduced {}\n",
        map.display(),
        conjugator.display(),
        reduced.display()
    );
    text.push_str(&tol_line(&tol));
    connection_table(&mut text, &check.connections);
    let _ = writeln!(text, "predicted breaks at h(f^k(c)) for k = {k:?}:");
    for p in &check.predicted {
        let _ = writeln!(
            text,
            "  connection {} offset {}: x = {:.12}  predicted {:.12}  measured {:.12}  error {}",
            p.connection,
            p.offset,
            p.point.value(),
            p.predicted,
            p.measured,
            sci(p.error())
        );
    }
    break_table(&mut text, "breaks of the reduced map", &check.measured);
    let _ = writeln!(
        text,
        "residuals (bound {}): jump {}, spurious {}, conjugacy {} on {} points: {}",
        sci(tol.reduce),
        sci(check.residual),
        sci(check.spurious_residual),
        sci(check.conjugacy_residual),
        check.grid_points,
        verdict(within)
    );
    if let Some(e) = &exact {
        let _ = writeln!(
            text,
            "exact identity F o h = h o f: {}; float words deviate by {} (bound {})",
            e.identity_holds,
            sci(e.float_deviation),
            sci(EXACT_AGREEMENT)
        );
    }
    let ok = within && exact_ok;
    let report = VerifyReport {
        map: map.display().to_string(),
        conjugator: conjugator.display().to_string(),
        reduced: reduced.display().to_string(),
        k_vector: k,
        check,
        within_tolerance: ok,
        exact,
    };
    emit(c, "verify", "verify.json", report, text)?;
    Ok(if ok { 0 } else { exit::RESIDUAL })
}

// ---------------------------------------------------------------- rotnum

#[derive(Serialize)]
struct RotnumReport {
    input: String,
    #[serde(flatten)]
    estimate: RotationEstimate,
    note: &'static str,
}

pub fn rotnum(c: &Common, input: &Path, iters: u64, base: f64) -> CmdResult {
    if iters == 0 {
        return Err(CliError::usage("--iters must be positive"));
    }
    let doc = load(input)?;
    let estimate = rotation_number_from(&doc.word, iters, base);
    let mut text = format!("map: {}\n", input.display());
    rotation_line(&mut text, "rotation number", &estimate);
    let _ = writeln!(text, "note: {ROTATION_NOTE}");
    let report = RotnumReport {
        input: input.display().to_string(),
        estimate,
        note: ROTATION_NOTE,
    };
    emit(c, "rotnum", "rotnum.json", report, text)?;
    Ok(0)
}

// ---------------------------------------------------------------- growth

#[derive(Serialize)]
struct GrowthReport {
    input: String,
    counts: Vec<usize>,
    bounded_from: Option<usize>,
    grows_every_step: bool,
    csv: String,
}

pub fn growth(c: &Common, input: &Path, iterates: usize) -> CmdResult {
    if iterates == 0 || iterates > MAX_GROWTH_ITERATE {
        return Err(CliError::usage(format!(
            "--iterates must lie in 1..={MAX_GROWTH_ITERATE}"
        )));
    }
    let tol = c.tolerances();
    let doc = load(input)?;
    let table = break_growth(&doc.word, iterates, &tol);
    let csv = table.to_csv().map_err(|e| CliError::other(e.to_string()))?;
    let dir = out_dir(c.out.as_deref())?;
    write_atomic(&dir, "growth.csv", &csv)?;
    let counts = table.counts();
    let bounded_from = (1..=iterates).find(|&n| table.is_constant_from(n));
    let grows = table.grows_every(1);
    let mut text = format!("map: {}\n", input.display());
    text.push_str(&tol_line(&tol));
    let _ = writeln!(text, "   n  breaks  max |log jump|");
    for r in &table.rows {
        let _ = writeln!(text, "{:4}  {:6}  {:.6}", r.n, r.breaks, r.max_log_jump);
    }
    match bounded_from {
        Some(n) if n < iterates => {
            let _ = writeln!(text, "break count constant from n = {n}");
        }
        _ if grows => {
            let _ = writeln!(text, "break count grows at every step");
        }
        _ => {
            let _ = writeln!(text, "break count neither settles nor grows at every step");
        }
    }
    let _ = writeln!(text, "wrote growth.csv to {}", dir.display());
    let report = GrowthReport {
        input: input.display().to_string(),
        counts,
        bounded_from: bounded_from.filter(|&n| n < iterates),
        grows_every_step: grows,
        csv: "growth.csv".into(),
    };
    emit(c, "growth", "growth.json", report, text)?;
    Ok(0)
}

// ---------------------------------------------------------------- measure

#[derive(Serialize)]
struct MeasureReport {
    input: String,
    start: f64,
    seed: Option<u64>,
    n_points: usize,
    burn_in: usize,
    bins: usize,
    top_decile_mass: f64,
    uniform_top_decile_mass: f64,
    note: &'static str,
    csv: String,
}

pub fn measure(
    c: &Common,
    input: &Path,
    iters: usize,
    bins: usize,
    seed: Option<u64>,
) -> CmdResult {
    if iters == 0 || bins < 10 {
        return Err(CliError::usage(
            "--iters must be positive and --bins at least 10",
        ));
    }
    let doc = load(input)?;
    let hist = invariant_measure_histogram(&doc.word, iters, bins, seed);
    let csv = hist.to_csv().map_err(|e| CliError::other(e.to_string()))?;
    let dir = out_dir(c.out.as_deref())?;
    write_atomic(&dir, "histogram.csv", &csv)?;
    let uniform = (bins / 10) as f64 / bins as f64;
    let mut text = format!("map: {}\n", input.display());
    let _ = writeln!(
        text,
        "{} orbit points from {} after {} burn-in steps, {} bins",
        hist.n_points, hist.start, hist.burn_in, bins
    );
    let _ = writeln!(
        text,
        "top-decile mass {:.6} (uniform: {:.6})",
        hist.top_decile_mass, uniform
    );
    let _ = writeln!(text, "note: {CONCENTRATION_NOTE}");
    let _ = writeln!(text, "wrote histogram.csv to {}", dir.display());
    let report = MeasureReport {
        input: input.display().to_string(),
        start: hist.start,
        seed,
        n_points: hist.n_points,
        burn_in: hist.burn_in,
        bins,
        top_decile_mass: hist.top_decile_mass,
        uniform_top_decile_mass: uniform,
        note: CONCENTRATION_NOTE,
        csv: "histogram.csv".into(),
    };
    emit(c, "measure", "measure.json", report, text)?;
    Ok(0)
}

// ---------------------------------------------------------------- sample

fn samples() -> Result<Vec<(String, MapSpecDoc)>, CliError> {
    let build = |e: circle_breaks::BuildError| CliError::other(e.to_string());
    let mut out = vec![(
        "rotation_golden".to_string(),
        document_for(&suite_rotation(), None),
    )];
    for inst in suite::all_instances().map_err(build)? {
        let prov = inst.provenance.as_ref().map(|p| (&p.h0, &p.f0));
        out.push((inst.name.to_string(), document_for(&inst.f, prov)));
    }
    out.push((
        "single_exponential".into(),
        document_for(&suite::single_exponential().map_err(build)?, None),
    ));
    for (name, p, _) in suite::rational_instances() {
        out.push((name.to_string(), p.to_doc()));
    }
    Ok(out)
}

fn suite_rotation() -> MapWord {
    circle_breaks::builders::rotation(suite::golden_mean())
}

fn file_name(name: &str) -> String {
    let mut s: String = name
        .chars()
        .map(|ch| {
            if ch.is_ascii_alphanumeric() || ch == '.' {
                ch
            } else {
                '_'
            }
        })
        .collect();
    while s.ends_with('_') {
        s.pop();
    }
    s + ".json"
}

pub fn sample(c: &Common, name: Option<&str>) -> CmdResult {
    let all = samples()?;
    let Some(name) = name else {
        for (n, _) in &all {
            println!("{n}");
        }
        return Ok(0);
    };
    let Some((n, doc)) = all.iter().find(|(n, _)| n == name) else {
        return Err(CliError::usage(format!(
            "unknown sample `{name}`; run `circle-breaks sample` for the list"
        )));
    };
    let rendered = json(doc);
    if let Some(dir) = c.out.as_deref() {
        let path = write_atomic(&out_dir(Some(dir))?, &file_name(n), &rendered)?;
        if !c.json {
            println!("wrote {}", path.display());
            return Ok(0);
        }
    }
    print!("{rendered}");
    Ok(0)
}
