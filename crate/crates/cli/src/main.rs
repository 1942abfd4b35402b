//! Command-line workbench wiring the pipeline together: build resolution
//! data from blow-up programs, compute monodromy and topological zeta
//! functions, realize eigenvalues as poles, verify the pole/eigenvalue
//! principle on form families, and materialize the fixture corpus.
//!
//! Exit codes: 0 success, 2 validation or parse error, 3 target not
//! realizable, 4 search radius exhausted.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use reszeta::curvette::{curvette_matrix_2d, CurvetteMatrix};
use reszeta::factory::{build_from_program, intersection_matrix, BlowupProgram};
use reszeta::families::{self, Family};
use reszeta::model::{FormSpec, ResolutionData};
use reszeta::rational::rat_to_string;
use reszeta::realize::{realize, verify_principle, RealizeError};
use reszeta::zeta::{
    acampo_zeta, eigenvalue_report, topological_zeta, CurvetteFormApplier, FormApplier,
};
use reszeta::RootOfUnity;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "reszeta",
    version,
    about = "Zeta functions, curvette matrices, and eigenvalue realization for resolved singularities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Resolution data document (.resdata)
    file: Option<PathBuf>,
    /// Named family, e.g. pq, xn, xy, ex28, fermat, morse
    #[arg(long, conflicts_with = "file")]
    family: Option<String>,
    /// Alias of --family for the named fixtures
    #[arg(long, conflicts_with_all = ["file", "family"])]
    fixture: Option<String>,
    /// Family parameters: positional `2,3` or named `d=4`
    #[arg(long)]
    params: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Build resolution data (with curvette matrix) from a blow-up program
    Resolve {
        /// Blow-up program document (.blow)
        program: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        pretty: bool,
    },
    /// Topological zeta function, optionally twisted by a differential form
    Zeta {
        #[command(flatten)]
        input: InputArgs,
        /// Form file (.form) or inline spec such as omega_i:i=2
        #[arg(long)]
        form: Option<String>,
        /// Use the local Euler characteristics (the default)
        #[arg(long, conflicts_with = "global")]
        local: bool,
        /// Use global Euler characteristics instead of local ones
        #[arg(long)]
        global: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        pretty: bool,
    },
    /// Monodromy zeta function and eigenvalue orders
    Monodromy {
        #[command(flatten)]
        input: InputArgs,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        pretty: bool,
    },
    /// Realize a target eigenvalue as a pole of a twisted zeta function
    Realize {
        #[command(flatten)]
        input: InputArgs,
        /// Target root of unity as a turn fraction, e.g. 5/6 (0 for 1)
        #[arg(long)]
        target: String,
        /// Lattice search radius
        #[arg(long, default_value_t = 4)]
        radius: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        pretty: bool,
    },
    /// Check the pole/eigenvalue principle for a set of forms
    VerifyPrinciple {
        #[command(flatten)]
        input: InputArgs,
        /// Form files or inline specs with ranges, e.g. omega_ij:i=1..5,j=1..3
        #[arg(long = "forms")]
        forms: Vec<String>,
        /// Inline specs to remove from the set, e.g. omega_ij:i=2,j=4
        #[arg(long)]
        without: Vec<String>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Materialize the example corpus as documents
    Fixtures {
        #[arg(long)]
        out_dir: PathBuf,
    },
}

enum Input {
    Family(Family),
    File(ResolutionData),
}

impl Input {
    fn data(&self) -> &ResolutionData {
        match self {
            Input::Family(f) => &f.data,
            Input::File(rd) => rd,
        }
    }

    fn curvette(&self) -> CurvetteMatrix {
        match self {
            Input::Family(f) => f
                .curvette
                .clone()
                .unwrap_or_else(|| CurvetteMatrix::from_rows(vec![])),
            Input::File(rd) => rd
                .curvette_matrix
                .clone()
                .map(CurvetteMatrix::from_rows)
                .unwrap_or_else(|| CurvetteMatrix::from_rows(vec![])),
        }
    }

    fn applier<'a>(&'a self, matrix: &'a CurvetteMatrix) -> Box<dyn FormApplier + 'a> {
        match self {
            Input::Family(f) => f.applier(),
            Input::File(_) => Box::new(CurvetteFormApplier { matrix }),
        }
    }
}

fn parse_params(s: Option<&str>) -> Result<Vec<(Option<String>, u64)>> {
    let mut out = Vec::new();
    let Some(s) = s else {
        return Ok(out);
    };
    for piece in s.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        match piece.split_once('=') {
            Some((k, v)) => out.push((
                Some(k.trim().to_string()),
                v.trim()
                    .parse::<u64>()
                    .with_context(|| format!("bad parameter value in `{piece}`"))?,
            )),
            None => out.push((
                None,
                piece
                    .parse::<u64>()
                    .with_context(|| format!("bad parameter value `{piece}`"))?,
            )),
        }
    }
    Ok(out)
}

fn load_input(input: &InputArgs) -> Result<Input> {
    let family_name = input.family.as_deref().or(input.fixture.as_deref());
    match (family_name, &input.file) {
        (Some(name), _) => {
            let params = parse_params(input.params.as_deref())?;
            Ok(Input::Family(families::by_name(name, &params)?))
        }
        (None, Some(path)) => {
            let doc = fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            let rd = ResolutionData::from_document_str(&doc)?;
            let violations = rd.validate();
            if !violations.is_empty() {
                bail!("invalid resolution data: {}", violations.join("; "));
            }
            Ok(Input::File(rd))
        }
        (None, None) => bail!("provide an input file or --family/--fixture"),
    }
}

/// Inline form specs: `omega_ij:i=2,j=1`, `omega_i:i=1..4`, `omega_b:b=2`.
/// Range bounds are inclusive.
fn expand_inline_forms(input: &Input, spec: &str) -> Result<Vec<FormSpec>> {
    let (name, args) = spec
        .split_once(':')
        .ok_or_else(|| anyhow!("malformed form spec `{spec}`"))?;
    let mut ranges: Vec<(String, u64, u64)> = Vec::new();
    for kv in args.split(',') {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| anyhow!("malformed form argument `{kv}`"))?;
        let (lo, hi) = match v.split_once("..") {
            Some((a, b)) => (a.parse::<u64>()?, b.parse::<u64>()?),
            None => {
                let x = v.parse::<u64>()?;
                (x, x)
            }
        };
        ranges.push((k.trim().to_string(), lo, hi));
    }
    let fam = match input {
        Input::Family(f) => f,
        Input::File(_) => bail!("inline form specs need --family; use a .form file instead"),
    };
    let lookup = |key: &str| -> Result<(u64, u64)> {
        ranges
            .iter()
            .find(|(k, _, _)| k == key)
            .map(|&(_, lo, hi)| (lo, hi))
            .ok_or_else(|| anyhow!("form spec `{spec}` is missing `{key}`"))
    };
    let mut out = Vec::new();
    match name {
        "omega_ij" => {
            let (ilo, ihi) = lookup("i")?;
            let (jlo, jhi) = lookup("j")?;
            for i in ilo..=ihi {
                for j in jlo..=jhi {
                    out.push(fam.omega_ij(i, j)?);
                }
            }
        }
        "omega_i" => {
            let (ilo, ihi) = lookup("i")?;
            for i in ilo..=ihi {
                out.push(fam.omega_i(i)?);
            }
        }
        "omega_b" => {
            let (blo, bhi) = lookup("b")?;
            for b in blo..=bhi {
                out.push(fam.omega_b(b)?);
            }
        }
        other => bail!("unknown inline form family `{other}`"),
    }
    Ok(out)
}

fn load_forms(input: &Input, spec: &str) -> Result<Vec<FormSpec>> {
    if spec.starts_with("omega") && spec.contains(':') {
        expand_inline_forms(input, spec)
    } else {
        let doc = fs::read_to_string(spec).with_context(|| format!("cannot read {spec}"))?;
        Ok(vec![FormSpec::from_document_str(&doc)?])
    }
}

fn emit(out: Option<&Path>, body: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, body).with_context(|| format!("cannot write {}", path.display()))?
        }
        None => print!("{body}"),
    }
    Ok(())
}

fn resolved_document(program: &BlowupProgram) -> Result<ResolutionData> {
    let mut rd = build_from_program(program)?;
    if program.centers.is_empty() {
        return Ok(rd);
    }
    let m = intersection_matrix(program)?;
    let a = curvette_matrix_2d(&m)?;
    rd.curvette_matrix = Some(a.rows().to_vec());
    Ok(rd)
}

fn cmd_resolve(program: &Path, out: Option<&Path>, pretty: bool) -> Result<()> {
    let doc = fs::read_to_string(program)
        .with_context(|| format!("cannot read {}", program.display()))?;
    let program = BlowupProgram::from_document_str(&doc)?;
    let rd = resolved_document(&program)?;
    let violations = rd.validate();
    if !violations.is_empty() {
        bail!("built data failed validation: {}", violations.join("; "));
    }
    if pretty {
        let mut lines = String::new();
        for c in &rd.components {
            lines.push_str(&format!("{} {} (nu={}, N={})\n", c.kind, c.id, c.nu, c.n));
        }
        emit(out, &lines)?;
    } else {
        emit(out, &format!("{}\n", rd.to_document_string()))?;
    }
    Ok(())
}

fn cmd_zeta(
    input: &InputArgs,
    form: Option<&str>,
    global: bool,
    out: Option<&Path>,
    pretty: bool,
) -> Result<()> {
    let input = load_input(input)?;
    let rd = match form {
        None => input.data().clone(),
        Some(spec) => {
            let forms = load_forms(&input, spec)?;
            if forms.len() != 1 {
                bail!("zeta takes exactly one form; got {}", forms.len());
            }
            let matrix = input.curvette();
            let applier = input.applier(&matrix);
            applier.apply(input.data(), &forms[0])?
        }
    };
    let z = topological_zeta(&rd, !global)?;
    if pretty {
        let mut text = format!("Z(s) = {}\n", z.rf);
        text.push_str("candidate factors:");
        for (nu, n) in &z.factored_denominator {
            text.push_str(&format!(" ({nu}+{n}s)"));
        }
        text.push('\n');
        for p in &z.poles {
            text.push_str(&format!(
                "pole s0 = {} (order {}, leading coefficient {})\n",
                rat_to_string(&p.location),
                p.order,
                rat_to_string(&p.leading)
            ));
        }
        emit(out, &text)?;
    } else {
        emit(out, &format!("{}\n", z.to_json()))?;
    }
    Ok(())
}

fn cmd_monodromy(input: &InputArgs, out: Option<&Path>, pretty: bool) -> Result<()> {
    let input = load_input(input)?;
    let report = eigenvalue_report(input.data());
    if pretty {
        let z = acampo_zeta(input.data());
        let orders: Vec<String> = report
            .eigenvalue_orders
            .iter()
            .map(|d| d.to_string())
            .collect();
        emit(
            out,
            &format!("zeta(t) = {z}\neigenvalue orders: {}\n", orders.join(", ")),
        )?;
    } else {
        emit(out, &format!("{}\n", report.to_json()))?;
    }
    Ok(())
}

fn cmd_realize(
    input: &InputArgs,
    target: &str,
    radius: u64,
    out: Option<&Path>,
    pretty: bool,
) -> Result<()> {
    let input = load_input(input)?;
    let target = RootOfUnity::parse(target)?;
    let matrix = input.curvette();
    let applier = input.applier(&matrix);
    let cert = realize(input.data(), &matrix, applier.as_ref(), &target, radius)?;
    if pretty {
        emit(
            out,
            &format!(
                "target turns {} realized at {}: s0 = {} (order {}, leading {})\nform: {}\n",
                cert.target,
                cert.j0,
                rat_to_string(&cert.s0),
                cert.pole_order,
                rat_to_string(&cert.residue),
                cert.form.to_document_string()
            ),
        )?;
    } else {
        emit(out, &format!("{}\n", cert.to_json()))?;
    }
    Ok(())
}

fn cmd_verify_principle(
    input: &InputArgs,
    forms: &[String],
    without: &[String],
    out: Option<&Path>,
) -> Result<()> {
    let input = load_input(input)?;
    let mut all: Vec<FormSpec> = Vec::new();
    for spec in forms {
        all.extend(load_forms(&input, spec)?);
    }
    for spec in without {
        for removed in load_forms(&input, spec)? {
            all.retain(|f| *f != removed);
        }
    }
    if all.is_empty() {
        bail!("no forms to check; pass at least one --forms");
    }
    let matrix = input.curvette();
    let applier = input.applier(&matrix);
    let report = verify_principle(input.data(), applier.as_ref(), &all)?;
    emit(out, &format!("{}\n", report.to_json()))?;
    Ok(())
}

fn cmd_fixtures(out_dir: &Path) -> Result<()> {
    fs::create_dir_all(out_dir)?;
    let write = |name: &str, body: String| -> Result<()> {
        fs::write(out_dir.join(name), body)?;
        Ok(())
    };

    for fam in [
        families::cusp()?,
        families::pq(2, 5)?,
        families::pq(3, 4)?,
        families::ex28()?,
    ] {
        let program = fam.program.as_ref().expect("curve family has a program");
        write(
            &format!("{}.blow", fam.name),
            format!("{}\n", program.to_document_string()),
        )?;
        let rd = resolved_document(program)?;
        write(
            &format!("{}.resdata", fam.name),
            format!("{}\n", rd.to_document_string()),
        )?;
    }
    for fam in [
        families::xn(4)?,
        families::xy(2, 2, 3)?,
        families::fermat(3)?,
        families::fermat(4)?,
        families::morse(2)?,
        families::morse(4)?,
        families::morse(6)?,
    ] {
        write(
            &format!("{}.resdata", fam.name),
            format!("{}\n", fam.data.to_document_string()),
        )?;
    }
    write(
        "cusp_w1.form",
        format!("{}\n", FormSpec::single("E1", 1).to_document_string()),
    )?;
    let ex28 = families::ex28()?;
    write(
        "ex28_omega_34.form",
        format!("{}\n", ex28.omega_ij(3, 4)?.to_document_string()),
    )?;
    Ok(())
}

fn run() -> Result<()> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Resolve {
            program,
            out,
            pretty,
        } => cmd_resolve(program, out.as_deref(), *pretty),
        Command::Zeta {
            input,
            form,
            local: _,
            global,
            out,
            pretty,
        } => cmd_zeta(input, form.as_deref(), *global, out.as_deref(), *pretty),
        Command::Monodromy { input, out, pretty } => cmd_monodromy(input, out.as_deref(), *pretty),
        Command::Realize {
            input,
            target,
            radius,
            out,
            pretty,
        } => cmd_realize(input, target, *radius, out.as_deref(), *pretty),
        Command::VerifyPrinciple {
            input,
            forms,
            without,
            out,
        } => cmd_verify_principle(input, forms, without, out.as_deref()),
        Command::Fixtures { out_dir } => cmd_fixtures(out_dir),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = match err.downcast_ref::<RealizeError>() {
                Some(RealizeError::NotRealizable(_)) => 3,
                Some(RealizeError::RadiusExhausted { .. }) => 4,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}
