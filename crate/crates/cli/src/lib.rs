//! Command-line front end: argument parsing, input resolution and output
//! formatting around `sphervol-core`.

use std::ffi::OsString;
use std::io::Read;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{debug, info};
use serde::Deserialize;
use serde_json::{json, Value};
use sphervol_core::tetra::{cosine_rule_residuals, sine_rule_residuals};
use sphervol_core::volume::sforza_residual;
use sphervol_core::z2::{
    real_part_residual, sine_rule_z2_residuals, sqrt_cofactor_residuals, u_quadratic_residual,
    DEFAULT_Z2_TOL,
};
use sphervol_core::{
    angles_from_lengths, detect_z2, lengths_from_angles, mc_volume, schlafli_volume, volume,
    DihedralAngles, EdgeLengths, Error, Tetrahedron, VolumeResult, Z2Angles, Z2Lengths,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "sphervol",
    version,
    about = "Volumes of Z2-symmetric spherical tetrahedra"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Volume of a Z2-symmetric tetrahedron
    Volume(Common),
    /// Convert edge lengths to dihedral angles or back
    Convert(Common),
    /// Evaluate the trigonometric identities on an instance
    Check {
        #[command(flatten)]
        common: Common,
        /// Steps of the path integral giving the dual volume for the
        /// Sforza closure
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
    },
    /// Estimate the volume without the closed form
    Oracle {
        #[arg(value_enum)]
        kind: OracleKind,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
    },
    /// Volumes over a one-parameter family of Z2 lengths
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Lengths set to the sweep parameter
        #[arg(long, value_enum)]
        vary: Vary,
        /// Parameter range as lo,hi
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        range: Vec<f64>,
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// Six edge lengths in the order A,B,C,D,E,F
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        group = "input"
    )]
    pub lengths: Option<Vec<f64>>,
    /// Four Z2 edge lengths l_A,l_B,l_C,l_D
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        group = "input"
    )]
    pub z2: Option<Vec<f64>>,
    /// Dihedral angles: six in edge order, or four Z2 angles A,B,C,D
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        group = "input"
    )]
    pub angles: Option<Vec<f64>>,
    /// Tolerance for recognising Z2 symmetry in six-value input
    #[arg(long, default_value_t = DEFAULT_Z2_TOL)]
    pub tol: f64,
    /// Output format; JSON by default, CSV for sweep
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Read and write angles in degrees
    #[arg(long)]
    pub degrees: bool,
}

impl Common {
    fn output_format(&self) -> Format {
        self.format.unwrap_or(Format::Json)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    Mc,
    Schlafli,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Vary {
    A,
    B,
    C,
    D,
    Ad,
    Bc,
}

/// Input document accepted on standard input when no input flag is given.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct InputDoc {
    lengths: Option<Vec<f64>>,
    z2: Option<Vec<f64>>,
    angles: Option<Vec<f64>>,
    #[serde(default)]
    degrees: bool,
}

/// Resolved input, one representation per variant.
#[derive(Debug, Clone)]
pub enum Input {
    Lengths(EdgeLengths),
    Z2(Z2Lengths),
    Angles(DihedralAngles),
    Z2Angles(Z2Angles),
}

#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_INPUT,
            Failure::Core(e) if e.is_input_error() => EXIT_INPUT,
            Failure::Core(_) => EXIT_NUMERICAL,
        }
    }

    fn document(&self) -> Value {
        let (kind, message) = match self {
            Failure::Usage(m) => ("Usage", m.clone()),
            Failure::Core(e) => (e.kind(), e.to_string()),
        };
        json!({ "error": { "kind": kind, "message": message } })
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Parses `args` (including the program name) and executes the command.
/// `stdin` is read only when no input flag is present.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome {
                    code: EXIT_OK,
                    stdout: e.to_string(),
                };
            }
            return failure(usage(e.to_string().trim_end()));
        }
    };
    match execute(&cli.command, stdin) {
        Ok(stdout) => Outcome {
            code: EXIT_OK,
            stdout,
        },
        Err(f) => failure(f),
    }
}

fn failure(f: Failure) -> Outcome {
    Outcome {
        code: f.code(),
        stdout: format!("{}\n", f.document()),
    }
}

fn execute(cmd: &Command, stdin: &mut dyn Read) -> Res<String> {
    match cmd {
        Command::Volume(c) => {
            let z = z2_input(&resolve(c, stdin)?, c.tol)?;
            let r = volume(&z)?;
            info!("case {} via {} path", r.case, r.path);
            debug!("diagnostics {:?}", r.diagnostics);
            Ok(render(
                c.output_format(),
                volume_document(&r),
                volume_table(&r),
            ))
        }
        Command::Convert(c) => {
            let input = resolve(c, stdin)?;
            let (doc, table) = convert(&input, c.degrees)?;
            Ok(render(c.output_format(), doc, table))
        }
        Command::Check { common: c, steps } => {
            let input = resolve(c, stdin)?;
            let checks = check(&input, c.tol, *steps)?;
            let all = checks.iter().all(|k| k.pass);
            let doc = json!({
                "checks": checks.iter().map(|k| (k.name.to_string(), json!({
                    "residual": k.residual, "tol": k.tol, "pass": k.pass
                }))).collect::<serde_json::Map<_, _>>(),
                "all_pass": all,
            });
            let rows = checks
                .iter()
                .map(|k| {
                    vec![
                        k.name.to_string(),
                        fmt(k.residual),
                        fmt(k.tol),
                        k.pass.to_string(),
                    ]
                })
                .collect();
            Ok(render(
                c.output_format(),
                doc,
                (vec!["check", "residual", "tol", "pass"], rows),
            ))
        }
        Command::Oracle {
            kind,
            common,
            samples,
            seed,
            steps,
        } => {
            let input = resolve(common, stdin)?;
            match kind {
                OracleKind::Mc => {
                    let l = edge_lengths(&input)?;
                    let e = mc_volume(&l, *samples, *seed)?;
                    info!("{} hits of {} samples", e.hits, e.samples);
                    let row = vec![
                        fmt(e.volume),
                        fmt(e.std_error),
                        e.samples.to_string(),
                        e.seed.to_string(),
                    ];
                    Ok(render(
                        common.output_format(),
                        serde_json::to_value(e).expect("serializable"),
                        (vec!["volume", "std_error", "samples", "seed"], vec![row]),
                    ))
                }
                OracleKind::Schlafli => {
                    let z = z2_input(&input, common.tol)?;
                    let p = schlafli_volume(&z, *steps)?;
                    let row = vec![fmt(p.volume), p.steps.to_string(), fmt(p.start_volume)];
                    Ok(render(
                        common.output_format(),
                        serde_json::to_value(p).expect("serializable"),
                        (vec!["volume", "steps", "start_volume"], vec![row]),
                    ))
                }
            }
        }
        Command::Sweep {
            common,
            vary,
            range,
            points,
        } => {
            let base = z2_input(&resolve(common, stdin)?, common.tol)?;
            sweep(
                &base,
                *vary,
                range,
                *points,
                common.format.unwrap_or(Format::Csv),
            )
        }
    }
}

fn resolve(c: &Common, stdin: &mut dyn Read) -> Res<Input> {
    let doc = if c.lengths.is_none() && c.z2.is_none() && c.angles.is_none() {
        let mut text = String::new();
        stdin
            .read_to_string(&mut text)
            .map_err(|e| usage(format!("cannot read standard input: {e}")))?;
        if text.trim().is_empty() {
            return Err(usage(
                "no input: pass --lengths, --z2 or --angles, or a document on stdin",
            ));
        }
        let mut doc: InputDoc = serde_json::from_str(&text)
            .map_err(|e| usage(format!("invalid input document: {e}")))?;
        doc.degrees |= c.degrees;
        doc
    } else {
        InputDoc {
            lengths: c.lengths.clone(),
            z2: c.z2.clone(),
            angles: c.angles.clone(),
            degrees: c.degrees,
        }
    };
    let given = [
        doc.lengths.is_some(),
        doc.z2.is_some(),
        doc.angles.is_some(),
    ];
    if given.iter().filter(|&&g| g).count() != 1 {
        return Err(usage("exactly one of lengths, z2, angles must be given"));
    }
    if let Some(v) = doc.lengths {
        return Ok(Input::Lengths(EdgeLengths::new(fixed::<6>(
            &v, "lengths",
        )?)?));
    }
    if let Some(v) = doc.z2 {
        return Ok(Input::Z2(Z2Lengths::from_array(fixed::<4>(&v, "z2")?)?));
    }
    let mut v = doc.angles.expect("one input present");
    if doc.degrees {
        v.iter_mut().for_each(|x| *x = x.to_radians());
    }
    match v.len() {
        6 => Ok(Input::Angles(DihedralAngles::new(fixed::<6>(
            &v, "angles",
        )?)?)),
        4 => Ok(Input::Z2Angles(Z2Angles {
            a: v[0],
            b: v[1],
            c: v[2],
            d: v[3],
        })),
        n => Err(usage(format!("angles takes 4 or 6 values, got {n}"))),
    }
}

fn fixed<const N: usize>(v: &[f64], what: &str) -> Res<[f64; N]> {
    v.try_into()
        .map_err(|_| usage(format!("{what} takes {N} values, got {}", v.len())))
}

fn z2_input(input: &Input, tol: f64) -> Res<Z2Lengths> {
    Ok(match input {
        Input::Z2(z) => *z,
        Input::Lengths(l) => detect_z2(l, tol).ok_or(Error::NotZ2 { tol })?,
        Input::Angles(a) => detect_z2(&lengths_from_angles(a)?, tol).ok_or(Error::NotZ2 { tol })?,
        Input::Z2Angles(a) => Z2Lengths::from_angles(*a)?,
    })
}

fn edge_lengths(input: &Input) -> Res<EdgeLengths> {
    Ok(match input {
        Input::Lengths(l) => *l,
        Input::Z2(z) => z.edge_lengths(),
        Input::Angles(a) => lengths_from_angles(a)?,
        Input::Z2Angles(a) => Z2Lengths::from_angles(*a)?.edge_lengths(),
    })
}

type Table = (Vec<&'static str>, Vec<Vec<String>>);

fn render(format: Format, doc: Value, (header, rows): Table) -> String {
    match format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&doc).expect("serializable")
        ),
        Format::Csv => {
            let mut out = header.join(",");
            out.push('\n');
            for r in rows {
                out += &r.join(",");
                out.push('\n');
            }
            out
        }
    }
}

fn fmt(x: f64) -> String {
    format!("{x:?}")
}

fn volume_document(r: &VolumeResult) -> Value {
    json!({
        "volume": r.volume,
        "case": r.case,
        "path": r.path,
        "u": r.u,
        "t_squared": r.t_squared,
        "h_term": r.h_term,
        "i_term": r.i_term,
        "orientation": r.orientation,
        "diagnostics": r.diagnostics,
    })
}

fn volume_table(r: &VolumeResult) -> Table {
    (
        vec!["volume", "case", "path", "u", "t_squared"],
        vec![vec![
            fmt(r.volume),
            r.case.to_string(),
            r.path.to_string(),
            fmt(r.u),
            fmt(r.t_squared),
        ]],
    )
}

fn convert(input: &Input, degrees: bool) -> Res<(Value, Table)> {
    let out_angle = |x: f64| if degrees { x.to_degrees() } else { x };
    let (key, values): (&'static str, Vec<f64>) = match input {
        Input::Lengths(l) => (
            "angles",
            angles_from_lengths(l)?.values().map(out_angle).to_vec(),
        ),
        Input::Z2(z) => {
            let a = z.angles()?;
            ("angles", [a.a, a.b, a.c, a.d].map(out_angle).to_vec())
        }
        Input::Angles(a) => ("lengths", lengths_from_angles(a)?.values().to_vec()),
        Input::Z2Angles(a) => ("z2", Z2Lengths::from_angles(*a)?.values().to_vec()),
    };
    let doc = json!({ key: values, "degrees": degrees && key == "angles" });
    let names: &[&'static str] = if values.len() == 4 {
        &["A", "B", "C", "D"]
    } else {
        &["A", "B", "C", "D", "E", "F"]
    };
    let row = values.iter().map(|&x| fmt(x)).collect();
    Ok((doc, (names.to_vec(), vec![row])))
}

struct CheckLine {
    name: &'static str,
    residual: f64,
    tol: f64,
    pass: bool,
}

fn line(name: &'static str, residual: f64, tol: f64) -> CheckLine {
    CheckLine {
        name,
        residual,
        tol,
        pass: residual.abs() < tol,
    }
}

const JACOBI_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn check(input: &Input, tol: f64, steps: usize) -> Res<Vec<CheckLine>> {
    let lengths = edge_lengths(input)?;
    let t = Tetrahedron::from_lengths(lengths)?;
    let mut out = vec![line(
        "sine_rule",
        sine_rule_residuals(&t).max_relative_residual(),
        1e-9,
    )];
    if let Some(r) = cosine_rule_residuals(&t).max_relative_residual() {
        out.push(line("cosine_rule", r, 1e-8));
    }
    let mut jacobi = 0.0f64;
    for m in [t.edge_matrix(), t.gram_matrix()] {
        for rows in JACOBI_PAIRS {
            for cols in JACOBI_PAIRS {
                jacobi = jacobi.max(m.jacobi_identity_residual(rows, cols)?.abs());
            }
        }
    }
    out.push(line("jacobi", jacobi, 1e-12));

    let Some(z) = detect_z2(&lengths, tol) else {
        return Ok(out);
    };
    let z_sine = sine_rule_z2_residuals(&z)?
        .into_iter()
        .flatten()
        .fold(0.0f64, |m, r| m.max(r.abs()));
    out.push(line("sine_rule_z2", z_sine, 1e-9));
    out.push(line("u_quadratic", u_quadratic_residual(&z)?, 1e-10));
    let roots = sqrt_cofactor_residuals(&z)?
        .into_iter()
        .fold(0.0f64, |m, r| m.max(r.abs()));
    out.push(line("square_roots", roots, 1e-9));
    match real_part_residual(&z) {
        Ok(r) => out.push(line("real_parts", r, 1e-8)),
        Err(Error::TZero { .. }) => debug!("real-part identity skipped at t^2 = 0"),
        Err(e) => return Err(e.into()),
    }
    // One of T, T* always goes through the dual path, where the closure
    // holds by construction; the path integral gives an independent Vol(T*).
    let dual = z.dual().and_then(|d| schlafli_volume(&d, steps));
    if let (Ok(v), Ok(vd)) = (volume(&z), dual) {
        out.push(line(
            "sforza",
            sforza_residual(&t, v.volume, vd.volume),
            1e-6,
        ));
    }
    Ok(out)
}

fn sweep(
    base: &Z2Lengths,
    vary: Vary,
    range: &[f64],
    points: usize,
    format: Format,
) -> Res<String> {
    let [lo, hi] = range.try_into().map_err(|_| usage("--range takes lo,hi"))?;
    if points < 2 || !(lo <= hi) {
        return Err(usage("sweep needs lo <= hi and at least 2 points"));
    }
    let mut rows = Vec::with_capacity(points);
    let mut docs = Vec::with_capacity(points);
    for i in 0..points {
        let p = lo + (hi - lo) * i as f64 / (points - 1) as f64;
        let mut v = base.values();
        match vary {
            Vary::A => v[0] = p,
            Vary::B => v[1] = p,
            Vary::C => v[2] = p,
            Vary::D => v[3] = p,
            Vary::Ad => (v[0], v[3]) = (p, p),
            Vary::Bc => (v[1], v[2]) = (p, p),
        }
        let r = Z2Lengths::from_array(v).and_then(|z| volume(&z));
        match r {
            Ok(r) => {
                rows.push(vec![
                    fmt(p),
                    fmt(r.volume),
                    r.case.to_string(),
                    r.path.to_string(),
                    String::new(),
                ]);
                docs.push(
                    json!({ "parameter": p, "volume": r.volume, "case": r.case, "path": r.path }),
                );
            }
            Err(e) => {
                debug!("parameter {p}: {e}");
                rows.push(vec![
                    fmt(p),
                    String::new(),
                    String::new(),
                    String::new(),
                    e.kind().to_string(),
                ]);
                docs.push(json!({ "parameter": p, "error": e.kind() }));
            }
        }
    }
    Ok(render(
        format,
        json!({ "rows": docs }),
        (vec!["parameter", "volume", "case", "path", "error"], rows),
    ))
}
