//! JSON-in/JSON-out command line for the cone-geometry library.
//!
//! Every subcommand reads one JSON document (from `--input` or stdin) and
//! writes one JSON document (to `--output` or stdout). Domain failures exit
//! with code 1 and `{"error": {"kind", "detail"}}`; I/O and parse failures
//! exit with code 2. Outputs are deterministic for a fixed `--seed`.
//! Schemas are documented in `docs/schemas.md`.

use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use hilbertgeom::collineation::{
    reconstruct_linear, verify_projective_linearity, InducedMap, VerifyReport,
};
use hilbertgeom::convexset;
use hilbertgeom::dualrecovery::{self, IsometryBlackBox};
use hilbertgeom::json::{FiniteKJson, IsometryJson, SpaceJson};
use hilbertgeom::linalg;
use hilbertgeom::simplexgeom::{
    self, find_nonaffine_midpoint_with_tol, isometry_apply, isometry_compose, isometry_inverse,
    log_map, QuotientFunction,
};
use hilbertgeom::{ConvexBody, GeomError};

#[derive(Parser)]
#[command(name = "hilbertgeom", version, about = "Hilbert metric geometry toolbox")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Input JSON file; stdin when omitted.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for the sampling operations.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Overrides the default 1e-9 tolerance where applicable.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Birkhoff (Hilbert) distance between interior cone vectors.
    Dist,
    /// Thompson distance between interior cone vectors.
    Tdist,
    /// Chord endpoints and division parameter for two section points.
    Chord,
    /// Lift a convex body to its order-unit cone.
    Lift,
    /// Cross-ratio distance inside a convex body.
    BodyDist,
    /// Order-unit norm of a vector.
    Norm,
    /// Reconstruct the matrix behind an isometry oracle.
    Reconstruct,
    /// Residual report for an oracle against a candidate matrix.
    Verify,
    /// Distance in the weighted simplex geometry.
    Sdist,
    /// Apply a gauge/relabelling/sign isometry to a simplex point.
    IsoApply,
    /// Compose two simplex isometries (second after first).
    IsoCompose,
    /// Invert a simplex isometry.
    IsoInvert,
    /// Recover the isometry triple behind a black-box simplex map.
    Recover,
    /// Search for a midpoint off the affine chord.
    Midpoint,
    /// Extreme points of the dual unit ball.
    ExtremePoints {
        /// Number of base points; alternative to the JSON input.
        #[arg(long)]
        n: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if write_output(&cli.output, &out).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            let (kind, detail, code) = match &err {
                CliError::Domain(e) => (e.kind(), e.to_string(), 1),
                CliError::Input(msg) => ("ParseError", msg.clone(), 2),
            };
            let payload = serde_json::json!({"error": {"kind": kind, "detail": detail}});
            let _ = write_output(&cli.output, &format!("{payload}\n"));
            ExitCode::from(code)
        }
    }
}

enum CliError {
    Domain(GeomError),
    Input(String),
}

impl From<GeomError> for CliError {
    fn from(e: GeomError) -> Self {
        CliError::Domain(e)
    }
}

fn write_output(path: &Option<PathBuf>, contents: &str) -> std::io::Result<()> {
    match path {
        Some(p) => fs::write(p, contents),
        None => std::io::stdout().write_all(contents.as_bytes()),
    }
}

fn read_input(cli: &Cli) -> Result<String, CliError> {
    match &cli.input {
        Some(p) => fs::read_to_string(p).map_err(|e| CliError::Input(format!("{p:?}: {e}"))),
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| CliError::Input(e.to_string()))?;
            Ok(buf)
        }
    }
}

fn parse<T: for<'de> Deserialize<'de>>(cli: &Cli) -> Result<T, CliError> {
    let raw = read_input(cli)?;
    serde_json::from_str(&raw).map_err(|e| CliError::Input(e.to_string()))
}

fn render<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string(value)
        .map(|s| format!("{s}\n"))
        .map_err(|e| CliError::Input(e.to_string()))
}

fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Dist => cmd_dist(cli),
        Command::Tdist => cmd_tdist(cli),
        Command::Chord => cmd_chord(cli),
        Command::Lift => cmd_lift(cli),
        Command::BodyDist => cmd_body_dist(cli),
        Command::Norm => cmd_norm(cli),
        Command::Reconstruct => cmd_reconstruct(cli),
        Command::Verify => cmd_verify(cli),
        Command::Sdist => cmd_sdist(cli),
        Command::IsoApply => cmd_iso_apply(cli),
        Command::IsoCompose => cmd_iso_compose(cli),
        Command::IsoInvert => cmd_iso_invert(cli),
        Command::Recover => cmd_recover(cli),
        Command::Midpoint => cmd_midpoint(cli),
        Command::ExtremePoints { n } => cmd_extreme_points(cli, *n),
    }
}

#[derive(Deserialize)]
struct PairIn {
    space: SpaceJson,
    x: Vec<f64>,
    y: Vec<f64>,
}

#[derive(Serialize)]
struct HilbertOut {
    #[serde(rename = "d_H")]
    d_h: f64,
}

fn cmd_dist(cli: &Cli) -> Result<String, CliError> {
    let input: PairIn = parse(cli)?;
    let space = input.space.to_space()?;
    let d_h = space.hilbert_dist(&input.x, &input.y)?;
    render(&HilbertOut { d_h })
}

fn cmd_tdist(cli: &Cli) -> Result<String, CliError> {
    #[derive(Serialize)]
    struct Out {
        #[serde(rename = "d_T")]
        d_t: f64,
    }
    let input: PairIn = parse(cli)?;
    let space = input.space.to_space()?;
    let d_t = space.thompson_dist(&input.x, &input.y)?;
    render(&Out { d_t })
}

fn cmd_chord(cli: &Cli) -> Result<String, CliError> {
    #[derive(Serialize)]
    struct Out {
        x_prime: Vec<f64>,
        y_prime: Vec<f64>,
        t: f64,
    }
    let input: PairIn = parse(cli)?;
    let space = input.space.to_space()?;
    let chord = space.chord_endpoints(&space.project(&input.x)?, &space.project(&input.y)?)?;
    render(&Out {
        x_prime: chord.x_prime,
        y_prime: chord.y_prime,
        t: chord.t,
    })
}

#[derive(Deserialize)]
struct LiftIn {
    body: ConvexBody,
}

fn cmd_lift(cli: &Cli) -> Result<String, CliError> {
    let input: LiftIn = parse(cli)?;
    let lifted = convexset::lift(&input.body)?;
    render(&SpaceJson::from_space(lifted.space()))
}

fn cmd_body_dist(cli: &Cli) -> Result<String, CliError> {
    #[derive(Deserialize)]
    struct In {
        body: ConvexBody,
        p: Vec<f64>,
        q: Vec<f64>,
    }
    let input: In = parse(cli)?;
    input.body.validate()?;
    let d_h = convexset::body_dist(&input.body, &input.p, &input.q)?;
    render(&HilbertOut { d_h })
}

fn cmd_norm(cli: &Cli) -> Result<String, CliError> {
    #[derive(Deserialize)]
    struct In {
        space: SpaceJson,
        x: Vec<f64>,
    }
    #[derive(Serialize)]
    struct Out {
        norm_u: f64,
    }
    let input: In = parse(cli)?;
    let space = input.space.to_space()?;
    if input.x.len() != space.dim() {
        return Err(GeomError::DimensionMismatch {
            expected: space.dim(),
            got: input.x.len(),
        }
        .into());
    }
    render(&Out {
        norm_u: space.order_unit_norm(&input.x),
    })
}

/// Built-in oracle families for reconstruction, plus explicit matrices.
#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
enum OracleJson {
    Matrix { matrix: Vec<Vec<f64>> },
    Rotation { angle_deg: f64 },
    Boost { rapidity: f64, axis: usize },
}

impl OracleJson {
    fn to_matrix(&self, dim: usize) -> Result<DMatrix<f64>, CliError> {
        match self {
            OracleJson::Matrix { matrix } => Ok(linalg::matrix_from_rows(matrix)),
            OracleJson::Rotation { angle_deg } => {
                if dim != 3 {
                    return Err(CliError::Input(
                        "rotation oracle requires a 3-dimensional Lorentz space".into(),
                    ));
                }
                let a = angle_deg.to_radians();
                Ok(DMatrix::from_row_slice(
                    3,
                    3,
                    &[1.0, 0.0, 0.0, 0.0, a.cos(), -a.sin(), 0.0, a.sin(), a.cos()],
                ))
            }
            OracleJson::Boost { rapidity, axis } => {
                if *axis == 0 || *axis >= dim {
                    return Err(CliError::Input(format!(
                        "boost axis must be a spatial coordinate in 1..{dim}"
                    )));
                }
                let mut m = DMatrix::identity(dim, dim);
                m[(0, 0)] = rapidity.cosh();
                m[(0, *axis)] = rapidity.sinh();
                m[(*axis, 0)] = rapidity.sinh();
                m[(*axis, *axis)] = rapidity.cosh();
                Ok(m)
            }
        }
    }
}

#[derive(Serialize)]
struct MatrixReportOut {
    matrix: Vec<Vec<f64>>,
    report: VerifyReport,
}

fn cmd_reconstruct(cli: &Cli) -> Result<String, CliError> {
    #[derive(Deserialize)]
    struct In {
        space1: SpaceJson,
        space2: SpaceJson,
        oracle: OracleJson,
    }
    let input: In = parse(cli)?;
    let s1 = input.space1.to_space()?;
    let s2 = input.space2.to_space()?;
    let oracle_matrix = input.oracle.to_matrix(s1.dim())?;
    let oracle = InducedMap::new(&s1, &s2, oracle_matrix)?;
    let t = reconstruct_linear(&s1, &s2, &oracle)?;
    let report = verify_projective_linearity(&s1, &s2, &oracle, &t, 64, cli.seed)?;
    render(&MatrixReportOut {
        matrix: linalg::matrix_to_rows(&t),
        report,
    })
}

fn cmd_verify(cli: &Cli) -> Result<String, CliError> {
    #[derive(Deserialize)]
    struct In {
        space1: SpaceJson,
        space2: SpaceJson,
        oracle: OracleJson,
        matrix: Vec<Vec<f64>>,
        #[serde(default = "default_samples")]
        n_samples: usize,
    }
    fn default_samples() -> usize {
        64
    }
    let input: In = parse(cli)?;
    let s1 = input.space1.to_space()?;
    let s2 = input.space2.to_space()?;
    let oracle_matrix = input.oracle.to_matrix(s1.dim())?;
    let oracle = InducedMap::new(&s1, &s2, oracle_matrix)?;
    let t = linalg::matrix_from_rows(&input.matrix);
    let report = verify_projective_linearity(&s1, &s2, &oracle, &t, input.n_samples, cli.seed)?;
    render(&report)
}

#[derive(Deserialize)]
struct SimplexPairIn {
    k: FiniteKJson,
    p: Vec<f64>,
    q: Vec<f64>,
}

fn cmd_sdist(cli: &Cli) -> Result<String, CliError> {
    let input: SimplexPairIn = parse(cli)?;
    let k = input.k.to_finite_k()?;
    let p = k.delta_point(&input.p)?;
    let q = k.delta_point(&input.q)?;
    render(&HilbertOut { d_h: k.dist(&p, &q) })
}

fn cmd_iso_apply(cli: &Cli) -> Result<String, CliError> {
    #[derive(Deserialize)]
    struct In {
        k: FiniteKJson,
        iso: IsometryJson,
        p: Vec<f64>,
    }
    #[derive(Serialize)]
    struct Out {
        p: Vec<f64>,
    }
    let input: In = parse(cli)?;
    let k = input.k.to_finite_k()?;
    let iso = input.iso.to_isometry(&k)?;
    let p = k.delta_point(&input.p)?;
    let image = isometry_apply(&k, &iso, &p)?;
    render(&Out {
        p: image.into_values(),
    })
}

fn cmd_iso_compose(cli: &Cli) -> Result<String, CliError> {
    #[derive(Deserialize)]
    struct In {
        k: FiniteKJson,
        second: IsometryJson,
        first: IsometryJson,
    }
    let input: In = parse(cli)?;
    let k = input.k.to_finite_k()?;
    let h2 = input.second.to_isometry(&k)?;
    let h1 = input.first.to_isometry(&k)?;
    let composed = isometry_compose(&k, &h2, &h1)?;
    render(&IsometryJson::from_isometry(&composed))
}

fn cmd_iso_invert(cli: &Cli) -> Result<String, CliError> {
    #[derive(Deserialize)]
    struct In {
        k: FiniteKJson,
        iso: IsometryJson,
    }
    let input: In = parse(cli)?;
    let k = input.k.to_finite_k()?;
    let iso = input.iso.to_isometry(&k)?;
    let inverse = isometry_inverse(&k, &iso)?;
    render(&IsometryJson::from_isometry(&inverse))
}

fn cmd_recover(cli: &Cli) -> Result<String, CliError> {
    #[derive(Deserialize)]
    #[serde(tag = "type", rename_all = "kebab-case")]
    enum RecoverOracle {
        /// An explicit triple treated as a black box (self-test mode).
        Isometry { iso: IsometryJson },
        /// An affine map in Log coordinates.
        LogAffine {
            matrix: Vec<Vec<f64>>,
            offset: Vec<f64>,
        },
    }
    #[derive(Deserialize)]
    struct In {
        k: FiniteKJson,
        oracle: RecoverOracle,
    }
    #[derive(Serialize)]
    struct Out {
        eps: i32,
        theta: Vec<usize>,
        g: Vec<f64>,
        max_residual: f64,
    }
    let input: In = parse(cli)?;
    let k = input.k.to_finite_k()?;

    let recovered = match &input.oracle {
        RecoverOracle::Isometry { iso } => {
            let oracle = IsometryBlackBox {
                k: &k,
                iso: iso.to_isometry(&k)?,
            };
            dualrecovery::recover_simplex_isometry(&k, &oracle)?
        }
        RecoverOracle::LogAffine { matrix, offset } => {
            let m = linalg::matrix_from_rows(matrix);
            let shift = QuotientFunction::new(offset.clone());
            let k_ref = &k;
            let oracle = move |p: &simplexgeom::DeltaPoint| {
                let q = QuotientFunction::new(linalg::apply_matrix(&m, log_map(p).rep()))
                    .add(&shift);
                k_ref.exp_map(&q)
            };
            dualrecovery::recover_simplex_isometry(&k, &oracle)?
        }
    };

    // Residual of the recovered triple against the oracle on a fresh sample.
    let mut rng = hilbertgeom::sample::rng(cli.seed);
    let mut max_residual: f64 = 0.0;
    let reapply = |p: &simplexgeom::DeltaPoint| -> Result<simplexgeom::DeltaPoint, GeomError> {
        match &input.oracle {
            RecoverOracle::Isometry { iso } => {
                isometry_apply(&k, &iso.to_isometry(&k)?, p)
            }
            RecoverOracle::LogAffine { matrix, offset } => {
                let m = linalg::matrix_from_rows(matrix);
                let q = QuotientFunction::new(linalg::apply_matrix(&m, log_map(p).rep()))
                    .add(&QuotientFunction::new(offset.clone()));
                k.exp_map(&q)
            }
        }
    };
    for _ in 0..16 {
        let p = hilbertgeom::sample::random_delta_point(&k, &mut rng);
        let expected = reapply(&p)?;
        let got = isometry_apply(&k, &recovered, &p)?;
        max_residual = max_residual.max(k.dist(&expected, &got));
    }

    render(&Out {
        eps: recovered.eps,
        theta: recovered.theta,
        g: recovered.g,
        max_residual,
    })
}

fn cmd_midpoint(cli: &Cli) -> Result<String, CliError> {
    #[derive(Serialize)]
    struct Out {
        found: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        midpoint: Option<Vec<f64>>,
    }
    let input: SimplexPairIn = parse(cli)?;
    let k = input.k.to_finite_k()?;
    let p = k.delta_point(&input.p)?;
    let q = k.delta_point(&input.q)?;
    let tol = cli.tolerance.unwrap_or(1e-9);
    let found = find_nonaffine_midpoint_with_tol(&k, &p, &q, tol)?;
    render(&Out {
        found: found.is_some(),
        midpoint: found.map(|m| m.into_values()),
    })
}

fn cmd_extreme_points(cli: &Cli, n_flag: Option<usize>) -> Result<String, CliError> {
    #[derive(Deserialize)]
    struct In {
        n: usize,
    }
    #[derive(Serialize)]
    struct Out {
        points: Vec<Vec<f64>>,
    }
    let n = match n_flag {
        Some(n) => n,
        None => parse::<In>(cli)?.n,
    };
    if n < 2 {
        return Err(GeomError::InvalidParameter(
            "extreme points need at least two base points".into(),
        )
        .into());
    }
    let points = dualrecovery::extreme_points(n)
        .into_iter()
        .map(|m| m.weights)
        .collect();
    render(&Out { points })
}
