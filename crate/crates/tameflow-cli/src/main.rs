//! Command-line front end: load complexes, orientations, posets and
//! functions, run the analyses, and emit deterministic JSON/CSV/SVG reports.
//!
//! Exit codes: 0 success, 1 validation failure, 2 falsified mathematical
//! certificate, 3 I/O failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use tameflow::complex::{Complex, ComplexJson};
use tameflow::conley::{morse_inequalities, stiefel_orientation, Orientation, OrientationJson};
use tameflow::flow::{
    asymptotic_pair_sample, complex_flow, flow_limits, normal_slice_intersection,
    BarycentricPoint, PointJson,
};
use tameflow::gap;
use tameflow::homology::{homology_summary, PolyZ};
use tameflow::poset_morse::{
    c_plus_minus, cminus_morse_report, coherence, regular_points, violation_sets,
    AdmissibleFunction, CWFacePoset, CwJson, FunctionJson, Poset, PosetJson,
};

mod svg;

#[derive(Parser)]
#[command(
    name = "tameflow",
    about = "Simplicial flows, Conley-Morse reports, poset Morse theory, and subspace-gap demos",
    version
)]
struct Cli {
    /// Seed for every sampled analysis; identical configs give
    /// byte-identical outputs
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// f-vector, dimension, Betti numbers, torsion and Euler characteristic
    ComplexInfo { complex: PathBuf },
    /// CSV trajectory of a point under the simplicial flow, with its limits
    FlowTrace {
        complex: PathBuf,
        orientation: PathBuf,
        /// Point JSON ({"carrier":[...],"coords":[...]}) inline or @file
        point: String,
        /// Comma-separated sample times
        #[arg(long, default_value = "0,0.5,1,2,4,8,10")]
        times: String,
    },
    /// Per-vertex Conley-Morse report with the inequality certificate
    Conley {
        complex: PathBuf,
        /// Orientation JSON; omit together with --stiefel
        orientation: Option<PathBuf>,
        /// Use the subdivision flow induced by face dimension instead of an
        /// orientation file
        #[arg(long)]
        stiefel: bool,
    },
    /// Admissibility, coherence, C± maps, regular points and Morse
    /// inequalities of a function on a poset
    PosetMorse {
        /// Poset JSON; may carry "dim" and "meets" fields for the CW analysis
        poset: PathBuf,
        function: PathBuf,
        /// Space Poincaré polynomial as comma-separated coefficients;
        /// computed from the nerve when omitted
        #[arg(long)]
        space: Option<String>,
    },
    /// Gap-calculus demo tables: decay | siv | grass
    GapDemo {
        kind: String,
        /// Drift parameter of the model flow
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        /// Comma-separated time grid
        #[arg(long, default_value = "0,0.5,1,1.5,2,2.5,3,3.5,4,4.5,5")]
        times: String,
        /// Ambient dimension for sampled instances
        #[arg(long, default_value_t = 5)]
        dim: usize,
        /// Also write a polyline plot of the table
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Histogram of limit-pair classes on the standard simplex, with
    /// normal-slice spot checks
    Asymptotic {
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 25.0)]
        time: f64,
    },
}

enum Failure {
    Validation(String),
    Falsified(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Falsified(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Falsified(m) | Failure::Io(m) => m,
        }
    }
}

impl From<tameflow::Error> for Failure {
    fn from(e: tameflow::Error) -> Self {
        match e {
            tameflow::Error::Io(io) => Failure::Io(io.to_string()),
            other => Failure::Validation(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => {
            if let Err(e) = emit(cli.out.as_deref(), &output) {
                eprintln!("error: {}", e.message());
                return ExitCode::from(e.code());
            }
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Io(e.to_string())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<String, Failure> {
    match &cli.command {
        Command::ComplexInfo { complex } => complex_info(complex),
        Command::FlowTrace { complex, orientation, point, times } => {
            flow_trace(complex, orientation, point, times)
        }
        Command::Conley { complex, orientation, stiefel } => {
            conley(complex, orientation.as_deref(), *stiefel)
        }
        Command::PosetMorse { poset, function, space } => {
            poset_morse(poset, function, space.as_deref())
        }
        Command::GapDemo { kind, a, times, dim, svg } => {
            gap_demo(kind, *a, times, *dim, cli.seed, svg.as_deref())
        }
        Command::Asymptotic { dim, count, time } => asymptotic(*dim, *count, *time, cli.seed),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| {
        Failure::Validation(format!(
            "{}: line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

fn load_complex(path: &Path) -> Result<Complex, Failure> {
    let json: ComplexJson = parse_json(path)?;
    Ok(Complex::from_json(&json)?)
}

fn parse_times(spec: &str) -> Result<Vec<f64>, Failure> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Failure::Validation(format!("bad time `{s}`: {e}")))
        })
        .collect()
}

fn to_pretty<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Failure::Validation(e.to_string()))
}

// --- complex-info ----------------------------------------------------------

#[derive(Serialize)]
struct ComplexInfo {
    vertices: Vec<String>,
    facets: Vec<Vec<String>>,
    faces: Vec<Vec<String>>,
    f_vector: Vec<usize>,
    dim: Option<usize>,
    euler: i64,
    betti: Vec<usize>,
    torsion: Vec<Vec<String>>,
}

fn complex_info(path: &Path) -> Result<String, Failure> {
    let k = load_complex(path)?;
    let hom = homology_summary(&k);
    let json = k.to_json();
    to_pretty(&ComplexInfo {
        vertices: json.vertices,
        facets: json.facets,
        faces: k.faces().map(|f| k.labels_of(f)).collect(),
        f_vector: k.f_vector(),
        dim: k.dim(),
        euler: k.euler_characteristic(),
        betti: hom.betti,
        torsion: hom.torsion,
    })
}

// --- flow-trace -------------------------------------------------------------

fn flow_trace(
    complex: &Path,
    orientation: &Path,
    point: &str,
    times: &str,
) -> Result<String, Failure> {
    let k = load_complex(complex)?;
    let ojson: OrientationJson = parse_json(orientation)?;
    let orient = Orientation::from_json(&k, &ojson)?;
    let pjson: PointJson = if let Some(path) = point.strip_prefix('@') {
        parse_json(Path::new(path))?
    } else {
        serde_json::from_str(point).map_err(|e| Failure::Validation(e.to_string()))?
    };
    let p = BarycentricPoint::from_json(&k, &pjson)?;
    let times = parse_times(times)?;

    let mut out = String::new();
    out.push('t');
    for v in k.vertices() {
        let _ = write!(out, ",{v}");
    }
    out.push('\n');
    let n = k.vertices().len();
    for &t in &times {
        let q = complex_flow(&k, &orient, &p, t)?;
        let _ = write!(out, "{t}");
        for c in q.dense(n) {
            let _ = write!(out, ",{c}");
        }
        out.push('\n');
    }
    let (fwd, bwd) = flow_limits(&k, &orient, &p)?;
    let _ = writeln!(out, "# forward_limit,{}", k.vertices()[fwd]);
    let _ = writeln!(out, "# backward_limit,{}", k.vertices()[bwd]);
    Ok(out)
}

// --- conley -----------------------------------------------------------------

fn conley(complex: &Path, orientation: Option<&Path>, stiefel: bool) -> Result<String, Failure> {
    let k = load_complex(complex)?;
    let (space, orient) = if stiefel {
        stiefel_orientation(&k)?
    } else {
        let path = orientation.ok_or_else(|| {
            Failure::Validation("need an orientation file or --stiefel".into())
        })?;
        let ojson: OrientationJson = parse_json(path)?;
        let orient = Orientation::from_json(&k, &ojson)?;
        (k, orient)
    };
    let report = morse_inequalities(&space, &orient)?;
    let text = to_pretty(&report.to_json())?;
    if report.falsified() {
        // still emit the report so the falsification is inspectable
        print!("{text}");
        return Err(Failure::Falsified("Morse inequality certificate missing".into()));
    }
    Ok(text)
}

// --- poset-morse -------------------------------------------------------------

#[derive(Serialize)]
struct PosetMorseReport {
    elements: Vec<String>,
    admissible: bool,
    coherent: bool,
    omega: usize,
    violating_interval: Option<(String, String)>,
    violations: Vec<ElementViolations>,
    c_plus: Vec<Option<String>>,
    c_minus: Vec<Option<String>>,
    c_plus_holds: bool,
    c_minus_holds: bool,
    regular: Vec<tameflow::conley::Verdict>,
    cw: Option<CwSection>,
}

#[derive(Serialize)]
struct ElementViolations {
    element: String,
    v_plus: Vec<String>,
    v_minus: Vec<String>,
}

#[derive(Serialize)]
struct CwSection {
    space: PolyZ,
    space_display: String,
    sum: PolyZ,
    sum_display: String,
    certificate: Option<PolyZ>,
    certificate_display: Option<String>,
    c_holds: bool,
    classical_sum: Option<PolyZ>,
    classical_certificate: Option<PolyZ>,
    critical_faces: Vec<CriticalFace>,
    falsified: bool,
}

#[derive(Serialize)]
struct CriticalFace {
    label: String,
    dim: usize,
    polynomial: PolyZ,
    mplus_f_vector: Vec<usize>,
}

fn poset_morse(
    poset_path: &Path,
    function_path: &Path,
    space: Option<&str>,
) -> Result<String, Failure> {
    // a CW face poset file carries dim/meets on top of the poset fields
    let raw: serde_json::Value = parse_json(poset_path)?;
    let has_cw = raw.get("dim").is_some();
    let poset: Poset = {
        let pj: PosetJson = serde_json::from_value(raw.clone())
            .map_err(|e| Failure::Validation(e.to_string()))?;
        Poset::from_json(&pj)?
    };
    let fjson: FunctionJson = parse_json(function_path)?;
    let f = AdmissibleFunction::from_json(&poset, &fjson)?;

    let coh = coherence(&poset, &f);
    let maps_result = if coh.coherent { Some(c_plus_minus(&poset, &f)?) } else { None };
    let verdicts = regular_points(&poset, &f);

    let violations: Vec<ElementViolations> = (0..poset.len())
        .map(|x| {
            let (vp, vm) = violation_sets(&poset, &f, x);
            ElementViolations {
                element: poset.label(x).to_string(),
                v_plus: vp.iter().map(|&y| poset.label(y).to_string()).collect(),
                v_minus: vm.iter().map(|&y| poset.label(y).to_string()).collect(),
            }
        })
        .collect();

    let (c_plus, c_minus, cph, cmh) = match &maps_result {
        Some(maps) => (
            maps.cplus
                .iter()
                .map(|c| c.map(|y| poset.label(y).to_string()))
                .collect(),
            maps.cminus
                .iter()
                .map(|c| c.map(|y| poset.label(y).to_string()))
                .collect(),
            maps.c_plus_holds(),
            maps.c_minus_holds(),
        ),
        None => (vec![None; poset.len()], vec![None; poset.len()], false, false),
    };

    let cw = if has_cw {
        let cwjson: CwJson = serde_json::from_value(raw)
            .map_err(|e| Failure::Validation(e.to_string()))?;
        let fp = CWFacePoset::from_json(&cwjson)?;
        let space_poly = match space {
            Some(spec) => {
                let coeffs: Result<Vec<i64>, _> =
                    spec.split(',').map(|s| s.trim().parse::<i64>()).collect();
                PolyZ::from_coeffs(
                    coeffs.map_err(|e| Failure::Validation(format!("bad polynomial: {e}")))?,
                )
            }
            None => {
                let nerve = tameflow::complex::nerve(fp.poset());
                tameflow::homology::poincare_polynomial(&nerve, false)?
            }
        };
        let report = cminus_morse_report(&fp, &f, &space_poly)?;
        Some(CwSection {
            space: report.space.clone(),
            space_display: report.space.to_string(),
            sum: report.sum.clone(),
            sum_display: report.sum.to_string(),
            certificate: report.certificate.clone(),
            certificate_display: report.certificate.as_ref().map(|q| q.to_string()),
            c_holds: report.c_holds,
            classical_sum: report.classical_sum.clone(),
            classical_certificate: report.classical_certificate.clone(),
            critical_faces: report
                .per_face
                .iter()
                .filter(|d| d.critical)
                .map(|d| CriticalFace {
                    label: d.label.clone(),
                    dim: d.dim,
                    polynomial: d.polynomial.clone(),
                    mplus_f_vector: d.mplus_f_vector.clone(),
                })
                .collect(),
            falsified: report.falsified(),
        })
    } else {
        None
    };

    let falsified = cw.as_ref().map(|c| c.falsified).unwrap_or(false);
    let report = PosetMorseReport {
        elements: poset.elements().to_vec(),
        admissible: true,
        coherent: coh.coherent,
        omega: coh.omega,
        violating_interval: coh.violating_interval,
        violations,
        c_plus,
        c_minus,
        c_plus_holds: cph,
        c_minus_holds: cmh,
        regular: verdicts,
        cw,
    };
    let text = to_pretty(&report)?;
    if falsified {
        print!("{text}");
        return Err(Failure::Falsified("Morse inequality certificate missing".into()));
    }
    Ok(text)
}

// --- gap-demo ----------------------------------------------------------------

fn gap_demo(
    kind: &str,
    a: f64,
    times: &str,
    dim: usize,
    seed: u64,
    svg_path: Option<&Path>,
) -> Result<String, Failure> {
    let tgrid = parse_times(times)?;
    let (csv, falsified) = match kind {
        "siv" => {
            let rows = gap::siv_model_demo(a, &tgrid)?;
            let mut out = String::from("t,gap,dist,ratio,model\n");
            for r in &rows {
                let _ = writeln!(out, "{},{},{},{},{}", r.t, r.gap, r.dist, r.ratio, r.model);
            }
            if let Some(path) = svg_path {
                let series: Vec<(&str, Vec<f64>)> = vec![
                    ("gap", rows.iter().map(|r| r.gap).collect()),
                    ("model", rows.iter().map(|r| r.model).collect()),
                ];
                write_svg(path, &tgrid, &series)?;
            }
            (out, false)
        }
        "decay" => {
            let check = decay_instance(dim, seed, &tgrid)?;
            let mut out = String::from("t,gap,bound,holds\n");
            for r in &check.rows {
                let _ = writeln!(out, "{},{},{},{}", r.t, r.gap, r.bound, r.holds);
            }
            let _ = writeln!(out, "# exponent,{}", check.exponent);
            let _ = writeln!(out, "# slope_norm,{}", check.slope_norm);
            if let Some(path) = svg_path {
                let series: Vec<(&str, Vec<f64>)> = vec![
                    ("gap", check.rows.iter().map(|r| r.gap).collect()),
                    ("bound", check.rows.iter().map(|r| r.bound).collect()),
                ];
                write_svg(path, &tgrid, &series)?;
            }
            (out, !check.all_hold)
        }
        "grass" => {
            let (csv, max_residual) = grass_instance(dim, seed, &tgrid)?;
            if let Some(path) = svg_path {
                write_svg(path, &tgrid, &[("residual", vec![max_residual; tgrid.len()])])?;
            }
            (csv, max_residual > 1e-9)
        }
        other => {
            return Err(Failure::Validation(format!(
                "unknown demo kind `{other}` (expected decay, siv, or grass)"
            )))
        }
    };
    if falsified {
        print!("{csv}");
        return Err(Failure::Falsified("demo table violates its bound".into()));
    }
    Ok(csv)
}

fn decay_instance(dim: usize, seed: u64, tgrid: &[f64]) -> Result<gap::DecayCheck, Failure> {
    use rand::{Rng, SeedableRng};
    if dim < 2 {
        return Err(Failure::Validation("need dimension at least 2".into()));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    loop {
        let diag: Vec<f64> = (0..dim)
            .map(|i| {
                let mag = rng.gen_range(0.5..2.0);
                if i < dim / 2 + 1 {
                    mag
                } else {
                    -mag
                }
            })
            .collect();
        let a = gap::SymOperator::diagonal(&diag);
        let u = a.positive_eigenspace();
        if u.dim() == 0 || u.dim() == dim {
            continue;
        }
        let v = gap::Subspace::random(dim, u.dim() + 1, &mut rng);
        match gap::decay_bound_check(&a, &u, &v, tgrid) {
            Ok(check) => return Ok(check),
            Err(tameflow::Error::TransversalityFailure) => continue,
            Err(e) => return Err(e.into()),
        }
    }
}

fn grass_instance(dim: usize, seed: u64, tgrid: &[f64]) -> Result<(String, f64), Failure> {
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use rand_distr::{Distribution, StandardNormal};
    if dim < 2 {
        return Err(Failure::Validation("need dimension at least 2".into()));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let k = dim / 2;
    let mut lambdas: Vec<f64> = (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect();
    lambdas.sort_by(|x, y| y.partial_cmp(x).expect("finite"));
    let index_set: Vec<usize> = (0..k).collect();
    let s = DMatrix::<f64>::from_fn(dim - k, k, |_, _| StandardNormal.sample(&mut rng));
    let a = gap::SymOperator::diagonal(&lambdas);
    let l0 = gap::graph_over_coordinates(&index_set, &s, dim)?;

    let mut out = String::from("t");
    for r in 0..dim - k {
        for c in 0..k {
            let _ = write!(out, ",s_{r}{c}");
        }
    }
    out.push_str(",residual\n");
    let mut max_residual: f64 = 0.0;
    for &t in tgrid {
        let st = gap::grassmann_graph_flow(&index_set, &s, &lambdas, t)?;
        let via_graph = gap::graph_over_coordinates(&index_set, &st, dim)?;
        let via_flow = gap::flow_subspace(&a, &l0, t)?;
        let residual = gap::hat_gap(&via_graph, &via_flow)?.value;
        max_residual = max_residual.max(residual);
        let _ = write!(out, "{t}");
        for r in 0..dim - k {
            for c in 0..k {
                let _ = write!(out, ",{}", st[(r, c)]);
            }
        }
        let _ = writeln!(out, ",{residual}");
    }
    Ok((out, max_residual))
}

fn write_svg(path: &Path, xs: &[f64], series: &[(&str, Vec<f64>)]) -> Result<(), Failure> {
    let text = svg::polyline_plot(xs, series);
    std::fs::write(path, text).map_err(|e| Failure::Io(e.to_string()))
}

// --- asymptotic ---------------------------------------------------------------

#[derive(Serialize)]
struct AsymptoticOut {
    report: tameflow::flow::AsymptoticReport,
    slice_checks: Vec<SliceCheck>,
}

#[derive(Serialize)]
struct SliceCheck {
    k: usize,
    t: f64,
    roundtrip_residual: f64,
}

fn asymptotic(dim: usize, count: usize, time: f64, seed: u64) -> Result<String, Failure> {
    if dim > 6 {
        return Err(Failure::Validation("dimension capped at 6".into()));
    }
    let report = asymptotic_pair_sample(dim, count, time, seed)?;
    // spot checks: one normal slice per interior index
    let mut slice_checks = Vec::new();
    for k in 1..dim.min(4) {
        let mut w_plus = vec![0.0; dim + 1];
        let mut w_minus = vec![0.0; dim + 1];
        let upper = dim - k + 1;
        for (i, slot) in w_plus.iter_mut().enumerate().take(dim + 1).skip(k) {
            *slot = if i == k { 0.6 } else { 0.4 / (upper - 1) as f64 };
        }
        for (i, slot) in w_minus.iter_mut().enumerate().take(k + 1) {
            *slot = if i == k { 0.6 } else { 0.4 / k as f64 };
        }
        let res = normal_slice_intersection(&w_plus, &w_minus, k, 8.0)?;
        slice_checks.push(SliceCheck { k, t: 8.0, roundtrip_residual: res.roundtrip_residual });
    }
    let violations = report.violations;
    let out = AsymptoticOut { report, slice_checks };
    let text = to_pretty(&out)?;
    if violations > 0 {
        print!("{text}");
        return Err(Failure::Falsified(format!(
            "{violations} limit pairs violate the support rule"
        )));
    }
    Ok(text)
}
