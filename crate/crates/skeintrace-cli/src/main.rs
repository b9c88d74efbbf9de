//! Command-line front end: load triangulation and presentation files, run
//! traces, UV-IR maps, compatibility and naturality suites, and the
//! built-in figure-eight demo.
//!
//! Exit codes: 0 when every check passes, 1 on a check failure, 2 on
//! parse or input errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use skeintrace::complex::{bipyramid, figure_eight, pachner_2_3, AngleStructure, Mfld3};
use skeintrace::qtorus::TorusElem;
use skeintrace::report::{CheckRecord, Report};
use skeintrace::scalar::{default_constants, AngleExpr, AngleId, Rat, Scalar};
use skeintrace::trace3d::{
    figure_eight_presentation, phi_2_3, trace_3d, trace_3d_per_state, SqgmContext,
};
use skeintrace::uvir2d::{
    compat_check_triangle, naturality_check_2d, Corner, Orient, StatedWord, Token,
};
use skeintrace::uvir3d::{
    compat_check_3d, cone_3term_check, recover_trace, sf_square_generator_suite,
};

#[derive(Parser)]
#[command(
    name = "skeintrace",
    about = "exact quantum trace and UV-IR verification suites"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// override for the triangle scaling constant (scalar expression)
    #[arg(long, global = true)]
    ct: Option<String>,
    /// override for the biangle scaling constant (scalar expression)
    #[arg(long, global = true)]
    cb: Option<String>,
    /// angle assignment file (JSON)
    #[arg(long, global = true)]
    angles: Option<PathBuf>,
    /// write the full JSON report here
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// worker count for independent checks (aggregation is deterministic)
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Command {
    /// trace a 2d split presentation into the edge-class torus
    Trace2d {
        /// surface file (JSON)
        surface: PathBuf,
        /// presentation file (JSON)
        presentation: PathBuf,
    },
    /// trace a 3d split presentation into the gluing module
    Trace3d {
        /// complex file (JSON), or the literal `fig8`
        complex: String,
        /// presentation file (JSON), or the literal `kb`
        presentation: String,
    },
    /// the 2d triangle square on all stated generators
    Uvir2d,
    /// the face-suspension squares of a complex on all stated generators
    Uvir3d {
        /// complex file (JSON), or the literal `fig8`
        complex: String,
    },
    /// the full 3d compatibility square and recovery on a presentation
    Compat {
        complex: String,
        presentation: String,
    },
    /// flip naturality on the quadrilateral double cover
    FlipCheck,
    /// the 2-3 move relation report on the bipyramid
    PachnerCheck,
    /// the cone-point relation suite of a 2-3 move
    ConeCheck,
    /// the figure-eight demo: per-state terms, the total, the golden diff
    Fig8,
    /// every suite, including the seeded property suites
    VerifyAll,
}

fn parse_scalar_arg(s: &Option<String>, default: Scalar) -> Result<Scalar, String> {
    match s {
        None => Ok(default),
        Some(txt) => skeintrace::text::parse_scalar(txt).map_err(|e| e.to_string()),
    }
}

fn load_json(path: &PathBuf) -> Result<serde_json::Value, String> {
    let data = std::fs::read_to_string(path).map_err(|e| format!("{}: {}", path.display(), e))?;
    serde_json::from_str(&data).map_err(|e| format!("{}: {}", path.display(), e))
}

fn load_complex(arg: &str) -> Result<Mfld3, String> {
    if arg == "fig8" {
        return Ok(figure_eight());
    }
    let v = load_json(&PathBuf::from(arg))?;
    skeintrace::fileio::parse_mfld3(&v).map_err(|e| e.to_string())
}

fn load_angles(m: &Mfld3, path: &Option<PathBuf>) -> Result<AngleStructure, String> {
    let Some(path) = path else {
        return Ok(m.symbolic_angles());
    };
    let v = load_json(path)?;
    let obj = v.as_object().ok_or("angle file must be an object")?;
    let mut per_tet = Vec::new();
    for (t, id) in m.tet_ids.iter().enumerate() {
        let Some(entry) = obj.get(id) else {
            per_tet.push([
                AngleExpr::tet_slot(t as u32, 0),
                AngleExpr::tet_slot(t as u32, 1),
                AngleExpr::tet_slot(t as u32, 2),
            ]);
            continue;
        };
        let slot = |key: &str, idx: u8| -> Result<AngleExpr, String> {
            match entry.get(key).and_then(|x| x.as_str()) {
                None | Some("sym") => Ok(AngleExpr::tet_slot(t as u32, idx)),
                Some(frac) => {
                    let (n, d) = frac
                        .split_once('/')
                        .map(|(a, b)| (a.trim(), b.trim()))
                        .unwrap_or((frac.trim(), "1"));
                    let n: i64 = n.parse().map_err(|_| "bad angle numerator".to_string())?;
                    let d: i64 = d.parse().map_err(|_| "bad angle denominator".to_string())?;
                    Ok(AngleExpr::pi(Rat::new(n, d)))
                }
            }
        };
        let a = slot("theta", 0)?;
        let b = slot("thetap", 1)?;
        // a numeric pair determines the third slot; otherwise the third
        // slot stays a formal symbol subject to the recorded pi-sum
        let c = match entry.get("thetapp").and_then(|x| x.as_str()) {
            Some(frac) if frac != "sym" => slot("thetapp", 2)?,
            _ if a.terms.is_empty() && b.terms.is_empty() => {
                AngleExpr::pi(Rat::new(1, 1)).sub(&a).sub(&b)
            }
            _ => AngleExpr::tet_slot(t as u32, 2),
        };
        per_tet.push([a, b, c]);
    }
    let ang = AngleStructure::new(m, per_tet);
    ang.validate().map_err(|e| e.to_string())?;
    Ok(ang)
}

fn emit(report: &Report, out: &Option<PathBuf>) -> ExitCode {
    for line in report.summary_lines() {
        println!("{}", line);
    }
    if let Some(path) = out {
        if std::fs::write(path, report.to_json()).is_err() {
            eprintln!("could not write report to {}", path.display());
            return ExitCode::from(2);
        }
    }
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn seed_from_env() -> u64 {
    std::env::var("SKEINTRACE_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(skeintrace::suites::DEFAULT_SEED)
}

fn triangle_generator_report(ct: &Scalar) -> Result<Report, skeintrace::TraceError> {
    let mut r = Report::default();
    for corner in Corner::all() {
        for orient in [Orient::Fwd, Orient::Bwd] {
            for st in [[1i8, 1], [-1, -1], [-1, 1]] {
                let w = StatedWord::new(vec![Token {
                    corner,
                    orient,
                    states: st,
                }]);
                r.push(compat_check_triangle(&w, ct)?);
            }
        }
    }
    Ok(r)
}

fn pachner_report() -> Result<Report, skeintrace::TraceError> {
    let bp = bipyramid();
    let ang = bp.symbolic_angles();
    let mv = pachner_2_3(&bp, &ang, 0, &AngleExpr::symbol(AngleId::named("zf")))?;
    let ctx2 = SqgmContext::new(&bp)?;
    let ctx3 = SqgmContext::new(&mv.after)?;
    Ok(phi_2_3(&mv, &ctx2, &ctx3)?.report)
}

fn cone_report() -> Result<Report, skeintrace::TraceError> {
    let bp = bipyramid();
    let ang = bp.symbolic_angles();
    let mv = pachner_2_3(&bp, &ang, 0, &AngleExpr::symbol(AngleId::named("zf")))?;
    cone_3term_check(&mv, &ang)
}

fn fig8_report(ct: &Scalar, cb: &Scalar, verbose: bool) -> Result<Report, skeintrace::TraceError> {
    let m = figure_eight();
    let ctx = SqgmContext::new(&m)?;
    let pres = figure_eight_presentation(&m);
    let mut report = Report::default();
    let per_state = trace_3d_per_state(&ctx, &pres, &Scalar::ct_pow(1), &Scalar::cb_pow(1))?;
    let gen = |t: usize, p: usize, k: i64| TorusElem::gen_pow(&ctx.shape, 3 * t + p, k);
    for (assignment, value) in &per_state {
        let value = value.substitute_constants(ct, cb)?;
        let expect = match (assignment[0], assignment[1]) {
            (1, -1) => gen(0, 2, 1).mul(&gen(1, 2, -1))?.scale(&Scalar::a_pow(1)),
            (-1, 1) => gen(0, 2, -1).mul(&gen(1, 2, 1))?.scale(&Scalar::a_pow(1)),
            (-1, -1) => gen(0, 2, -1)
                .mul(&gen(1, 2, -1))?
                .scale(&Scalar::cb_pow(-2).mul(&Scalar::a_pow(1).neg())),
            _ => TorusElem::zero(&ctx.shape),
        };
        let expect = ctx.reduce(&expect)?.substitute_constants(ct, cb)?;
        report.push(CheckRecord::equality(
            &format!("fig8 state {:?}", assignment),
            &value,
            &expect,
        ));
        if verbose {
            println!("state {:?}: {}", assignment, value);
        }
    }
    let total = trace_3d(&ctx, &pres, &Scalar::ct_pow(1), &Scalar::cb_pow(1))?
        .substitute_constants(ct, cb)?;
    if verbose {
        println!("total: {}", total);
    }
    let golden = {
        let t = gen(0, 2, 1)
            .mul(&gen(1, 2, -1))?
            .scale(&Scalar::a_pow(1))
            .add(&gen(0, 2, -1).mul(&gen(1, 2, 1))?.scale(&Scalar::a_pow(1)))?
            .add(
                &gen(0, 2, -1)
                    .mul(&gen(1, 2, -1))?
                    .scale(&Scalar::cb_pow(-2).mul(&Scalar::a_pow(1).neg())),
            )?;
        ctx.reduce(&t)?.substitute_constants(ct, cb)?
    };
    report.push(CheckRecord::equality("fig8 total", &total, &golden));
    Ok(report)
}

fn sf_square_report(ct: &Scalar, cb: &Scalar) -> Result<Report, skeintrace::TraceError> {
    let m = figure_eight();
    let angles = m.symbolic_angles();
    let mut r = Report::default();
    for susp in 0..m.suspensions.len() {
        r.extend(sf_square_generator_suite(&m, &angles, susp, ct, cb)?);
    }
    Ok(r)
}

fn compat_report(ct: &Scalar, cb: &Scalar) -> Result<Report, skeintrace::TraceError> {
    let m = figure_eight();
    let ctx = SqgmContext::new(&m)?;
    let angles = m.symbolic_angles();
    let pres = figure_eight_presentation(&m);
    let out = compat_check_3d(&ctx, &angles, &pres, ct, cb)?;
    let mut report = out.report.clone();
    if !out.terms.is_empty() {
        let ref_webs = out.terms[0].webs.clone();
        let ref_scalar = out.terms[0].web_scalar.clone();
        let rec = recover_trace(&ctx, &out, &ref_webs, &ref_scalar)?;
        let tr = trace_3d(&ctx, &pres, &Scalar::ct_pow(1), &Scalar::cb_pow(1))?
            .substitute_constants(ct, cb)?;
        report.push(CheckRecord::equality(
            "recovery equals the trace",
            &rec,
            &tr,
        ));
    }
    Ok(report)
}

type Section = Box<dyn FnOnce() -> Result<Report, skeintrace::TraceError> + Send>;

fn run_sections(
    sections: Vec<Section>,
    jobs: usize,
) -> Vec<Result<Report, skeintrace::TraceError>> {
    if jobs <= 1 {
        return sections.into_iter().map(|s| s()).collect();
    }
    let handles: Vec<_> = sections.into_iter().map(std::thread::spawn).collect();
    handles
        .into_iter()
        .map(|h| h.join().expect("worker panicked"))
        .collect()
}

fn run() -> Result<ExitCode, String> {
    let cli = Cli::parse();
    let (ct_def, cb_def) = default_constants();
    let ct = parse_scalar_arg(&cli.ct, ct_def)?;
    let cb = parse_scalar_arg(&cli.cb, cb_def)?;
    skeintrace::scalar::check_constants(&ct, &cb).map_err(|e| e.to_string())?;

    match &cli.command {
        Command::Trace2d {
            surface,
            presentation,
        } => {
            let surf = skeintrace::fileio::parse_surface(&load_json(surface)?)
                .map_err(|e| e.to_string())?;
            let pres = skeintrace::fileio::parse_presentation2d(&load_json(presentation)?)
                .map_err(|e| e.to_string())?;
            let ct2 = parse_scalar_arg(&cli.ct, Scalar::one())?;
            let t = skeintrace::trace2d::trace_surface(&surf, &pres, &ct2)
                .map_err(|e| e.to_string())?;
            println!("{}", t);
            Ok(ExitCode::SUCCESS)
        }
        Command::Trace3d {
            complex,
            presentation,
        } => {
            let m = load_complex(complex)?;
            let ctx = SqgmContext::new(&m).map_err(|e| e.to_string())?;
            let pres = if presentation == "kb" {
                figure_eight_presentation(&m)
            } else {
                skeintrace::fileio::parse_presentation(
                    &load_json(&PathBuf::from(presentation))?,
                    &m,
                )
                .map_err(|e| e.to_string())?
            };
            let t = trace_3d(&ctx, &pres, &Scalar::ct_pow(1), &Scalar::cb_pow(1))
                .map_err(|e| e.to_string())?
                .substitute_constants(&ct, &cb)
                .map_err(|e| e.to_string())?;
            println!("{}", t);
            Ok(ExitCode::SUCCESS)
        }
        Command::Uvir2d => {
            // the 2d square defaults to the unscaled triangle embedding
            let ct2 = parse_scalar_arg(&cli.ct, Scalar::one())?;
            let report = triangle_generator_report(&ct2).map_err(|e| e.to_string())?;
            Ok(emit(&report, &cli.out))
        }
        Command::Uvir3d { complex } => {
            let m = load_complex(complex)?;
            let angles = load_angles(&m, &cli.angles)?;
            let mut report = Report::default();
            for susp in 0..m.suspensions.len() {
                report.extend(
                    sf_square_generator_suite(&m, &angles, susp, &ct, &cb)
                        .map_err(|e| e.to_string())?,
                );
            }
            Ok(emit(&report, &cli.out))
        }
        Command::Compat {
            complex,
            presentation,
        } => {
            let m = load_complex(complex)?;
            let ctx = SqgmContext::new(&m).map_err(|e| e.to_string())?;
            let angles = load_angles(&m, &cli.angles)?;
            let pres = if presentation == "kb" {
                figure_eight_presentation(&m)
            } else {
                skeintrace::fileio::parse_presentation(
                    &load_json(&PathBuf::from(presentation))?,
                    &m,
                )
                .map_err(|e| e.to_string())?
            };
            let out = compat_check_3d(&ctx, &angles, &pres, &ct, &cb).map_err(|e| e.to_string())?;
            let mut report = out.report.clone();
            if !out.terms.is_empty() {
                let ref_webs = out.terms[0].webs.clone();
                let ref_scalar = out.terms[0].web_scalar.clone();
                let rec =
                    recover_trace(&ctx, &out, &ref_webs, &ref_scalar).map_err(|e| e.to_string())?;
                let tr = trace_3d(&ctx, &pres, &Scalar::ct_pow(1), &Scalar::cb_pow(1))
                    .map_err(|e| e.to_string())?
                    .substitute_constants(&ct, &cb)
                    .map_err(|e| e.to_string())?;
                report.push(CheckRecord::equality(
                    "recovery equals the trace",
                    &rec,
                    &tr,
                ));
            }
            Ok(emit(&report, &cli.out))
        }
        Command::FlipCheck => {
            let mut report = Report::default();
            report.extend(naturality_check_2d().map_err(|e| e.to_string())?);
            Ok(emit(&report, &cli.out))
        }
        Command::PachnerCheck => {
            let report = pachner_report().map_err(|e| e.to_string())?;
            Ok(emit(&report, &cli.out))
        }
        Command::ConeCheck => {
            let report = cone_report().map_err(|e| e.to_string())?;
            Ok(emit(&report, &cli.out))
        }
        Command::Fig8 => {
            let report = fig8_report(&ct, &cb, true).map_err(|e| e.to_string())?;
            Ok(emit(&report, &cli.out))
        }
        Command::VerifyAll => {
            let seed = seed_from_env();
            let (ct1, cb1) = (ct.clone(), cb.clone());
            let (ct2, cb2) = (ct.clone(), cb.clone());
            let (ct3, cb3) = (ct.clone(), cb.clone());
            let sections: Vec<Section> = vec![
                Box::new(move || fig8_report(&ct1, &cb1, false)),
                Box::new(pachner_report),
                Box::new(cone_report),
                Box::new(|| {
                    let mut r = Report::default();
                    r.extend(naturality_check_2d()?);
                    Ok(r)
                }),
                Box::new(move || sf_square_report(&ct2, &cb2)),
                Box::new(move || compat_report(&ct3, &cb3)),
                Box::new(|| triangle_generator_report(&Scalar::one())),
                Box::new(move || skeintrace::suites::property_suites(seed)),
            ];
            let mut report = Report::default();
            for r in run_sections(sections, cli.jobs) {
                report.extend(r.map_err(|e| e.to_string())?.records);
            }
            Ok(emit(&report, &cli.out))
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
    }
}
