//! Subcommand implementations. Every command writes its result to `out` (or
//! to the `-o` file) and reports failures as JSON on `err`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_traits::Zero;
use pwl_lattice::arrangement::format_signs;
use pwl_lattice::lp::{self, LinearConstraint, LpOutcome};
use pwl_lattice::rational::{format_point, parse_point, parse_rational, Point, Rational};
use pwl_lattice::sample::random_points;
use pwl_lattice::{
    analyze, extend_to_space, import_relu, lattice_to_pwl, radial_extend, verify_symbolic, AffineFunc, Error,
    LatticePolynomial, Polyhedron, PwlFunction,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::schema::{
    AffineDto, CellDto, ComplexDto, DiagnosticsDto, HyperplaneDto, LatticeDto, Manifest, Payload, PwlDto,
};

#[derive(Parser, Debug)]
#[command(name = "pwl-lattice", version, about = "Exact max-min representations of piecewise linear functions")]
pub struct Cli {
    /// Worker threads for the library's parallel loops (output is identical
    /// for every setting).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Output {
    /// Write the result here instead of standard output.
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lattice polynomial of a PWL function.
    Build {
        pwl: PathBuf,
        #[command(flatten)]
        out: Output,
        /// Keep one min-term per cell.
        #[arg(long)]
        no_simplify: bool,
        /// Include per-cell terms, dominant components, orders and sign vectors.
        #[arg(long)]
        diagnostics: bool,
    },
    /// Symbolic and sampled check that a lattice polynomial equals a PWL
    /// function; exits 0 iff both pass.
    Verify {
        pwl: PathBuf,
        lattice: PathBuf,
        /// Number of random points of the domain to compare.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact value of a PWL function or lattice polynomial.
    Eval {
        file: PathBuf,
        /// Comma-separated rationals, e.g. "1/2,-3".
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Cells of the component arrangement with witnesses, orders and dominants.
    Cells {
        pwl: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Distance between two cells and the hyperplanes separating them.
    Dist {
        pwl: PathBuf,
        /// Two cell ids, "P,Q".
        #[arg(long)]
        cells: String,
    },
    /// A shortest chain of adjacent cells between two cells.
    Geodesic {
        pwl: PathBuf,
        #[arg(long)]
        cells: String,
    },
    /// PWL function of a lattice polynomial on a bounded domain.
    #[command(name = "lattice2pwl")]
    LatticeToPwl {
        lattice: PathBuf,
        #[arg(long)]
        domain: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Radial extension of boundary data from an interior center.
    ExtendRadial {
        boundary: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Extension of a PWL function to a larger bounded domain.
    ExtendSpace {
        pwl: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// PWL function computed by a one-hidden-layer ReLU network on a box.
    ImportRelu {
        net: PathBuf,
        #[arg(long = "box")]
        bbox: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Tab-separated samples along one coordinate axis.
    Plot {
        file: PathBuf,
        /// 0-based coordinate to vary.
        #[arg(long)]
        axis: usize,
        /// Base point for the other coordinates; defaults to an interior point
        /// of the domain, or the origin for a lattice polynomial.
        #[arg(long, allow_hyphen_values = true)]
        slice: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        from: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        to: Option<String>,
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
}

/// Anything that stops a command.
#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("expected a {expected} file, found {found}")]
    WrongKind { expected: &'static str, found: &'static str },
    #[error("verification failed")]
    VerificationFailed,
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::VerificationFailed => 1,
            Failure::Io { .. } | Failure::WrongKind { .. } => 2,
            Failure::Core(Error::Malformed(_) | Error::DivisionByZero | Error::DimensionMismatch { .. }) => 2,
            Failure::Core(_) => 3,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            Failure::VerificationFailed => "VERIFICATION_FAILED",
            Failure::Io { .. } => "IO",
            Failure::WrongKind { .. } => "WRONG_KIND",
            Failure::Core(e) => error_code(e),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = json!({ "error": self.code(), "message": self.to_string() });
        if let Failure::Core(Error::InvalidPwl(report)) = self {
            v["violations"] = report
                .violations
                .iter()
                .map(|x| {
                    json!({
                        "kind": x.kind.code(),
                        "pieces": x.pieces,
                        "witness": x.witness.as_ref().map(|w| crate::schema::point_to_json(w)),
                    })
                })
                .collect();
        }
        v
    }
}

pub fn error_code(e: &Error) -> &'static str {
    match e {
        Error::ZeroNormal => "ZERO_NORMAL",
        Error::DimensionMismatch { .. } => "DIMENSION_MISMATCH",
        Error::DivisionByZero => "DIVISION_BY_ZERO",
        Error::EmptyPolyhedron => "EMPTY_POLYHEDRON",
        Error::DegenerateDomain => "DEGENERATE_DOMAIN",
        Error::UnboundedDomain => "UNBOUNDED_DOMAIN",
        Error::OutsideDomain => "OUTSIDE_DOMAIN",
        Error::NotCovered => "NOT_COVERED",
        Error::InvalidPwl(_) => "INVALID_PWL",
        Error::TieDetected(..) => "TIE_DETECTED",
        Error::NoMatch(_) => "NO_MATCH",
        Error::Ambiguous(..) => "AMBIGUOUS",
        Error::NoWitness(..) => "NO_WITNESS",
        Error::NoPath(..) => "NO_PATH",
        Error::UnknownCell(_) => "UNKNOWN_CELL",
        Error::DomainMismatch => "DOMAIN_MISMATCH",
        Error::CenterNotInterior => "CENTER_NOT_INTERIOR",
        Error::InconsistentBoundaryData(_) => "INCONSISTENT_BOUNDARY_DATA",
        Error::TargetDoesNotContainDomain => "TARGET_DOES_NOT_CONTAIN_DOMAIN",
        Error::Malformed(_) => "MALFORMED",
        Error::CorrectnessAlarm(_) => "CORRECTNESS_ALARM",
    }
}

/// Parses `args` (including the program name) and runs the command. Returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    if let Some(n) = cli.threads {
        // The global pool can only be configured once per process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match execute(&cli.command, out) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "{}", f.to_json());
            f.exit_code()
        }
    }
}

fn load(path: &Path) -> Result<Payload, Failure> {
    let text = fs::read_to_string(path).map_err(|source| Failure::Io { path: path.to_path_buf(), source })?;
    Ok(Manifest::from_json(&text)?.payload)
}

fn load_pwl(path: &Path) -> Result<PwlFunction, Failure> {
    match load(path)? {
        Payload::Pwl(dto) => Ok(dto.to_core()?),
        other => Err(Failure::WrongKind { expected: "pwl", found: other.kind() }),
    }
}

fn load_lattice(path: &Path) -> Result<LatticePolynomial, Failure> {
    match load(path)? {
        Payload::Lattice(dto) => Ok(dto.to_core()?),
        other => Err(Failure::WrongKind { expected: "lattice", found: other.kind() }),
    }
}

fn load_polyhedron(path: &Path) -> Result<Polyhedron, Failure> {
    match load(path)? {
        Payload::Polyhedron(dto) => Ok(dto.to_core()?),
        other => Err(Failure::WrongKind { expected: "polyhedron", found: other.kind() }),
    }
}

fn emit(out: &mut dyn Write, dest: &Output, payload: Payload) -> Result<(), Failure> {
    let text = Manifest::new(payload).to_json();
    match &dest.output {
        Some(path) => fs::write(path, text).map_err(|source| Failure::Io { path: path.clone(), source }),
        None => write_out(out, &text),
    }
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|source| Failure::Io { path: PathBuf::from("<stdout>"), source })
}

fn parse_pair(text: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::Core(Error::Malformed(format!("expected two cell ids \"P,Q\", got {text:?}")));
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn execute(cmd: &Command, out: &mut dyn Write) -> Result<(), Failure> {
    match cmd {
        Command::Build { pwl, out: dest, no_simplify, diagnostics } => {
            let f = load_pwl(pwl)?;
            let rep = analyze(&f)?;
            let poly = if *no_simplify { rep.unsimplified() } else { rep.polynomial.clone() };
            let mut dto = LatticeDto::from(&poly);
            if *diagnostics {
                dto.diagnostics = Some(DiagnosticsDto {
                    raw_terms: rep.raw_terms.clone(),
                    dominants: rep.dominants.clone(),
                    orders: rep.orders.iter().map(|o| o.order.clone()).collect(),
                    cells: rep.complex.cells.iter().map(|c| format_signs(&c.signs)).collect(),
                });
            }
            emit(out, dest, Payload::Lattice(dto))
        }
        Command::Verify { pwl, lattice, samples, seed } => {
            let f = load_pwl(pwl)?;
            let p = load_lattice(lattice)?;
            f.ensure_valid()?;
            let report = verify_symbolic(&f, &p)?;
            let mut text = format!("symbolic:\n{report}\n");
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let points = random_points(&mut rng, f.domain(), *samples)?;
            let mut mismatches = 0usize;
            for x in &points {
                let (a, b) = (f.eval(x)?, p.evaluate(x)?);
                if a != b {
                    if mismatches < 5 {
                        text += &format!("mismatch at ({}): f = {a}, polynomial = {b}\n", format_point(x));
                    }
                    mismatches += 1;
                }
            }
            text += &format!("sampled: {} points, {mismatches} mismatches\n", points.len());
            let pass = report.passed() && mismatches == 0;
            text += if pass { "PASS\n" } else { "FAIL\n" };
            write_out(out, &text)?;
            if pass {
                Ok(())
            } else {
                Err(Failure::VerificationFailed)
            }
        }
        Command::Eval { file, point } => {
            let x = parse_point(point)?;
            let v = match load(file)? {
                Payload::Pwl(dto) => dto.to_core()?.eval(&x)?,
                Payload::Lattice(dto) => dto.to_core()?.evaluate(&x)?,
                other => return Err(Failure::WrongKind { expected: "pwl or lattice", found: other.kind() }),
            };
            write_out(out, &format!("{v}\n"))
        }
        Command::Cells { pwl, out: dest } => {
            let f = load_pwl(pwl)?;
            let rep = analyze(&f)?;
            let c = &rep.complex;
            let dto = ComplexDto {
                domain: f.domain().into(),
                components: rep.polynomial.components().iter().map(AffineDto::from).collect(),
                hyperplanes: c.hyperplanes().iter().map(HyperplaneDto::from).collect(),
                cells: c
                    .cells
                    .iter()
                    .map(|cell| CellDto {
                        id: cell.id,
                        signs: format_signs(&cell.signs),
                        witness: crate::schema::point_to_json(&cell.witness),
                        order: rep.orders[cell.id].order.clone(),
                        dominant: rep.dominants[cell.id],
                    })
                    .collect(),
            };
            emit(out, dest, Payload::Complex(dto))
        }
        Command::Dist { pwl, cells } => {
            let (p, q) = parse_pair(cells)?;
            let rep = analyze(&load_pwl(pwl)?)?;
            let sep = rep.complex.separation(p, q)?;
            let mut text = format!("{}\n", sep.distance);
            for &k in &sep.set {
                text += &format!(
                    "h{k}: {}\n",
                    describe_hyperplane(&rep.complex.hyperplanes()[k].normal, &rep.complex.hyperplanes()[k].offset)
                );
            }
            write_out(out, &text)
        }
        Command::Geodesic { pwl, cells } => {
            let (p, q) = parse_pair(cells)?;
            let rep = analyze(&load_pwl(pwl)?)?;
            let path = rep.complex.geodesic(p, q)?;
            let ids: Vec<String> = path.iter().map(|i| i.to_string()).collect();
            let mut text = format!("{}\n", ids.join(" "));
            for &id in &path {
                text += &format!("cell {id} [{}]\n", format_signs(&rep.complex.cells[id].signs));
            }
            write_out(out, &text)
        }
        Command::LatticeToPwl { lattice, domain, out: dest } => {
            let f = lattice_to_pwl(&load_lattice(lattice)?, &load_polyhedron(domain)?)?;
            emit(out, dest, Payload::Pwl(PwlDto::from(&f)))
        }
        Command::ExtendRadial { boundary, out: dest } => {
            let b = match load(boundary)? {
                Payload::Boundary(dto) => dto.to_core()?,
                other => return Err(Failure::WrongKind { expected: "boundary", found: other.kind() }),
            };
            emit(out, dest, Payload::Pwl(PwlDto::from(&radial_extend(&b)?)))
        }
        Command::ExtendSpace { pwl, target, out: dest } => {
            let g = extend_to_space(&load_pwl(pwl)?, &load_polyhedron(target)?)?;
            emit(out, dest, Payload::Pwl(PwlDto::from(&g)))
        }
        Command::ImportRelu { net, bbox, out: dest } => {
            let net = match load(net)? {
                Payload::Relu(dto) => dto.to_core()?,
                other => return Err(Failure::WrongKind { expected: "relu", found: other.kind() }),
            };
            let f = import_relu(&net, &load_polyhedron(bbox)?)?;
            emit(out, dest, Payload::Pwl(PwlDto::from(&f)))
        }
        Command::Plot { file, axis, slice, from, to, steps } => {
            let target = match load(file)? {
                Payload::Pwl(dto) => Plotted::Pwl(dto.to_core()?),
                Payload::Lattice(dto) => Plotted::Lattice(dto.to_core()?),
                other => return Err(Failure::WrongKind { expected: "pwl or lattice", found: other.kind() }),
            };
            write_out(out, &plot(&target, *axis, slice.as_deref(), from.as_deref(), to.as_deref(), *steps)?)
        }
    }
}

/// `normal . x = offset` rendered with 1-based coordinate names.
fn describe_hyperplane(normal: &[Rational], offset: &Rational) -> String {
    format!("{} = {}", AffineFunc::new(normal.to_vec(), Rational::zero()), offset)
}

enum Plotted {
    Pwl(PwlFunction),
    Lattice(LatticePolynomial),
}

impl Plotted {
    fn dim(&self) -> usize {
        match self {
            Plotted::Pwl(f) => f.dim(),
            Plotted::Lattice(p) => p.dim(),
        }
    }

    fn eval(&self, x: &[Rational]) -> Result<Rational, Error> {
        match self {
            Plotted::Pwl(f) => f.eval(x),
            Plotted::Lattice(p) => p.evaluate(x),
        }
    }
}

/// Extent of the domain along the axis-parallel line through `base`.
fn line_extent(p: &Polyhedron, base: &[Rational], axis: usize) -> Option<(Rational, Rational)> {
    let dim = p.dim();
    let mut cons = p.constraints();
    for (j, v) in base.iter().enumerate() {
        if j != axis {
            let mut e = vec![Rational::zero(); dim];
            e[j] = Rational::from_integer(1.into());
            cons.push(LinearConstraint::eq(e, v.clone()));
        }
    }
    let mut c = vec![Rational::zero(); dim];
    c[axis] = Rational::from_integer(1.into());
    match (lp::maximize(&c, &cons), lp::minimize(&c, &cons)) {
        (LpOutcome::Optimal(hi), LpOutcome::Optimal(lo)) => Some((lo.value, hi.value)),
        _ => None,
    }
}

fn plot(
    target: &Plotted,
    axis: usize,
    slice: Option<&str>,
    from: Option<&str>,
    to: Option<&str>,
    steps: usize,
) -> Result<String, Failure> {
    let dim = target.dim();
    if axis >= dim {
        return Err(Error::Malformed(format!("axis {axis} out of range for dimension {dim}")).into());
    }
    let base: Point = match (slice, target) {
        (Some(s), _) => parse_point(s)?,
        (None, Plotted::Pwl(f)) => f.domain().interior_point().ok_or(Error::DegenerateDomain)?,
        (None, Plotted::Lattice(_)) => vec![Rational::zero(); dim],
    };
    if base.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: base.len() }.into());
    }
    let extent = match target {
        Plotted::Pwl(f) => line_extent(f.domain(), &base, axis),
        Plotted::Lattice(_) => None,
    };
    let one = Rational::from_integer(1.into());
    let lo = match from {
        Some(s) => parse_rational(s)?,
        None => extent.as_ref().map(|e| e.0.clone()).unwrap_or(-one.clone()),
    };
    let hi = match to {
        Some(s) => parse_rational(s)?,
        None => extent.as_ref().map(|e| e.1.clone()).unwrap_or(one),
    };
    let steps = steps.max(1);
    let mut text = format!("x{}\tvalue\n", axis + 1);
    for k in 0..=steps {
        let t = &lo + (&hi - &lo) * Rational::new(k.into(), steps.into());
        let mut x = base.clone();
        x[axis] = t.clone();
        match target.eval(&x) {
            Ok(v) => text += &format!("{t}\t{v}\n"),
            Err(Error::OutsideDomain) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(text)
}
