//! `ellis`: model sets, their face semigroups and hull actions from the
//! command line.
//!
//! Every command takes a model, either a path to a JSON scheme config or the
//! name of a bundled preset, and writes plain text to stdout or `--output`.
//! Failures print one JSON line on stderr and exit with 2 (bad input) or
//! 3 (internal invariant violated).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use ellis_core::arrangement::ConeType;
use ellis_core::config::{parse_vector, Model, SchemeConfig};
use ellis_core::cps::{generate_pattern, validate_almost_canonical, Boundary, FaceData, Region};
use ellis_core::ellis::{Ellis, TorusPoint};
use ellis_core::error::Error;
use ellis_core::hull::halving_schedule;
use ellis_core::qfield::Qf;
use ellis_core::{presets, render};

#[derive(Parser)]
#[command(
    name = "ellis",
    version,
    about = "Exact model sets and the Ellis semigroup of their hulls"
)]
struct Cli {
    /// Write the result here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a scheme and window and report the stabilizer condition.
    Validate { model: String },
    /// The pattern of `w + W` on a ball around the origin.
    Pattern {
        model: String,
        /// Internal shift, comma separated; the model's shift by default.
        #[arg(long, allow_hyphen_values = true)]
        w: Option<String>,
        #[arg(long, default_value_t = 10)]
        radius: i64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Drop points on the boundary of the shifted window.
        #[arg(long)]
        open: bool,
    },
    /// The stratification of internal space by the window hyperplanes.
    Cones { model: String },
    /// Product table, face order and minimal ideal of the non-trivial cone types.
    Semigroup { model: String },
    /// Components of the Ellis semigroup grouped by `⟨C⟩`.
    Ellis { model: String },
    /// Hull points over `z = [w, s]`.
    Fiber {
        model: String,
        #[command(flatten)]
        z: TorusArgs,
        /// Also print each point's pattern on the ball of this radius.
        #[arg(long)]
        patterns: Option<i64>,
    },
    /// Act on the fiber over `z` with `(target − z, type)` and compare
    /// with the limit of translates.
    Act {
        model: String,
        #[command(flatten)]
        z: TorusArgs,
        /// Cone type of the acting element, e.g. `+0-+`.
        #[arg(long = "type", allow_hyphen_values = true)]
        cone: String,
        /// Internal part of the target fiber.
        #[arg(long, allow_hyphen_values = true)]
        target_w: Option<String>,
        /// Physical part of the target fiber.
        #[arg(long, allow_hyphen_values = true)]
        target_s: Option<String>,
        #[arg(long, default_value_t = 10)]
        radius: i64,
    },
    /// Bundled schemes.
    Preset {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Subcommand)]
enum PresetAction {
    /// Print a preset as a JSON config.
    Export { name: String },
    /// List preset names.
    List,
}

#[derive(clap::Args)]
struct TorusArgs {
    /// Internal coordinates, comma separated; zero by default.
    #[arg(long, allow_hyphen_values = true)]
    w: Option<String>,
    /// Physical coordinates, comma separated; zero by default.
    #[arg(long, allow_hyphen_values = true)]
    s: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Svg,
}

type Out = Result<String, Error>;

fn load(model: &str) -> Result<Model, Error> {
    let path = Path::new(model);
    let config = if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("{model}: {e}")))?;
        SchemeConfig::from_json(&text)?
    } else if presets::NAMES.contains(&model) {
        presets::config(model)?
    } else {
        return Err(Error::InvalidInput(format!(
            "`{model}` is neither a config file nor a preset"
        )));
    };
    config.build()
}

fn vector(text: Option<&str>, len: usize, radicand: u64) -> Result<Vec<Qf>, Error> {
    let Some(text) = text else {
        return Ok(vec![Qf::zero(); len]);
    };
    let items: Vec<String> = text.split(',').map(|s| s.trim().to_string()).collect();
    let v = parse_vector(&items, radicand)?;
    if v.len() != len {
        return Err(Error::InvalidInput(format!(
            "expected {len} coordinates, got {}",
            v.len()
        )));
    }
    Ok(v)
}

fn torus(e: &Ellis, w: Option<&str>, s: Option<&str>) -> Result<TorusPoint, Error> {
    let sc = e.scheme();
    let w = vector(w, sc.n(), sc.radicand())?;
    let s = vector(s, sc.d(), sc.radicand())?;
    Ok(e.torus(&w, &s))
}

fn ellis(model: &str) -> Result<Ellis, Error> {
    let m = load(model)?;
    Ellis::new(m.scheme, m.window)
}

fn tuple(v: &[Qf]) -> String {
    format!(
        "({})",
        v.iter().map(Qf::to_string).collect::<Vec<_>>().join(",")
    )
}

fn cmd_validate(model: &str) -> Out {
    let m = load(model)?;
    let sc = &m.scheme;
    let faces = FaceData::new(&m.window);
    let report = validate_almost_canonical(sc, &faces);
    let mut out = String::new();
    writeln!(
        out,
        "scheme  D={}  d={}  n={}  rank={}",
        sc.radicand(),
        sc.d(),
        sc.n(),
        sc.rank()
    )
    .unwrap();
    writeln!(
        out,
        "window  vertices={}  faces={}",
        m.window.vertices().len(),
        m.window.faces().len()
    )
    .unwrap();
    for v in m.window.vertices() {
        writeln!(out, "vertex  {}", tuple(v)).unwrap();
    }
    writeln!(out, "hyperplanes  {}", report.hyperplanes.len()).unwrap();
    for (i, h) in report.hyperplanes.iter().enumerate() {
        writeln!(
            out,
            "H{}  normal={}  stabilizer_rank={}  star_image_dense={}",
            i + 1,
            tuple(&h.hyperplane.normal),
            h.stabilizer_rank,
            if h.dense { "yes" } else { "no" }
        )
        .unwrap();
    }
    if !report.pass() {
        return Err(Error::InvalidWindow(
            "the star image of a face stabilizer is not dense in its hyperplane; the window may not be almost canonical".into(),
        ));
    }
    writeln!(out, "almost-canonical  pass").unwrap();
    Ok(out)
}

fn cmd_pattern(model: &str, w: Option<&str>, radius: i64, format: Format, open: bool) -> Out {
    let m = load(model)?;
    if radius < 0 {
        return Err(Error::InvalidInput("negative radius".into()));
    }
    let w = match w {
        Some(_) => vector(w, m.scheme.n(), m.scheme.radicand())?,
        None => m.shift.clone(),
    };
    let region = Region::centered(m.scheme.d(), radius);
    let boundary = if open {
        Boundary::Open
    } else {
        Boundary::Closed
    };
    let pat = generate_pattern(&m.scheme, &m.window, &w, &region, boundary);
    Ok(match format {
        Format::Csv => render::pattern_csv(&pat, m.scheme.rank(), m.scheme.d()),
        Format::Svg => render::pattern_svg(&pat, &region.center, &region.radius),
    })
}

fn cmd_cones(model: &str) -> Out {
    let e = ellis(model)?;
    let mut out = String::new();
    let hs = e.arrangement().hyperplanes();
    writeln!(out, "# hyperplanes {}", hs.len()).unwrap();
    for (i, h) in hs.iter().enumerate() {
        let dir = h.direction().map_or_else(|| "-".to_string(), |d| tuple(&d));
        writeln!(
            out,
            "# H{}  normal={}  direction={}",
            i + 1,
            tuple(&h.normal),
            dir
        )
        .unwrap();
    }
    writeln!(out, "type\tdim\tnontrivial\tplain_dim").unwrap();
    for a in e.analyses() {
        writeln!(
            out,
            "{}\t{}\t{}\t{}",
            a.t,
            a.span_dim(),
            if a.nontrivial { "yes" } else { "no" },
            a.plain_dim()
        )
        .unwrap();
    }
    Ok(out)
}

fn cmd_semigroup(model: &str) -> Out {
    let e = ellis(model)?;
    let sg = e.semigroup();
    let nt = e.nontrivial();
    let name = |i: usize| sg.cones()[i].t.to_string();
    let mut out = String::new();
    writeln!(out, "order {}", nt.len()).unwrap();
    writeln!(out, "identity {}", name(sg.identity())).unwrap();
    writeln!(out, "# product: row · column").unwrap();
    let header: Vec<String> = nt.iter().map(|&j| name(j)).collect();
    writeln!(out, "·\t{}", header.join("\t")).unwrap();
    for &i in nt {
        let row: Vec<String> = nt.iter().map(|&j| name(sg.product(i, j))).collect();
        writeln!(out, "{}\t{}", name(i), row.join("\t")).unwrap();
    }
    writeln!(out, "# face order: t <= u").unwrap();
    for &i in nt {
        let above: Vec<String> = nt
            .iter()
            .filter(|&&j| j != i && sg.leq(i, j))
            .map(|&j| name(j))
            .collect();
        writeln!(out, "{} <= {{{}}}", name(i), above.join(",")).unwrap();
    }
    let ideal: Vec<String> = e
        .minimal_ideal_types()
        .iter()
        .map(ConeType::to_string)
        .collect();
    writeln!(out, "minimal-ideal {{{}}}", ideal.join(",")).unwrap();
    Ok(out)
}

fn cmd_ellis(model: &str) -> Out {
    Ok(ellis(model)?.summary().to_string())
}

fn cmd_fiber(model: &str, z: &TorusArgs, patterns: Option<i64>) -> Out {
    let e = ellis(model)?;
    let z = torus(&e, z.w.as_deref(), z.s.as_deref())?;
    let mut out = String::new();
    for p in e.fiber(&z) {
        writeln!(out, "{p}").unwrap();
        if let Some(r) = patterns {
            let pat = e.selector(&p, &Region::centered(e.scheme().d(), r));
            out.push_str(&render::pattern_csv(
                &pat,
                e.scheme().rank(),
                e.scheme().d(),
            ));
            out.push('\n');
        }
    }
    Ok(out)
}

fn cmd_act(
    model: &str,
    z: &TorusArgs,
    cone: &str,
    tw: Option<&str>,
    ts: Option<&str>,
    radius: i64,
) -> Out {
    let e = ellis(model)?;
    let z = torus(&e, z.w.as_deref(), z.s.as_deref())?;
    let target = torus(&e, tw, ts)?;
    let t: ConeType = cone.parse()?;
    if t.len() != e.arrangement().len() {
        return Err(Error::InvalidInput(format!(
            "cone type `{cone}` has the wrong length"
        )));
    }
    let g = e.element(target.add(&z.neg(e.scheme()), e.scheme()), t)?;
    let r = BigRational::from_integer(radius.into());
    let region = Region::centered(e.scheme().d(), radius);
    let schedule = halving_schedule(4, 24);
    let mut out = String::new();
    writeln!(out, "g  {g}").unwrap();
    let mut mismatches = 0;
    for p in e.fiber(&z) {
        let q = e.act(&p, &g)?;
        let direct = e.selector(&q, &region).positions();
        let lim = e.net_limit_oracle(&p, &g, &r, &schedule)?;
        let same = lim.positions == direct;
        if !same {
            mismatches += 1;
        }
        writeln!(
            out,
            "c={}  ->  c={}  points={}  oracle={}  delta=2^-{}",
            p.c,
            q.c,
            direct.len(),
            if same { "match" } else { "MISMATCH" },
            lim.stabilized_at + 4
        )
        .unwrap();
    }
    if mismatches > 0 {
        return Err(Error::InvariantViolation(format!(
            "{mismatches} action result(s) differ from the limit of translates"
        )));
    }
    Ok(out)
}

fn run(cli: &Cli) -> Out {
    match &cli.command {
        Command::Validate { model } => cmd_validate(model),
        Command::Pattern {
            model,
            w,
            radius,
            format,
            open,
        } => cmd_pattern(model, w.as_deref(), *radius, *format, *open),
        Command::Cones { model } => cmd_cones(model),
        Command::Semigroup { model } => cmd_semigroup(model),
        Command::Ellis { model } => cmd_ellis(model),
        Command::Fiber { model, z, patterns } => cmd_fiber(model, z, *patterns),
        Command::Act {
            model,
            z,
            cone,
            target_w,
            target_s,
            radius,
        } => cmd_act(
            model,
            z,
            cone,
            target_w.as_deref(),
            target_s.as_deref(),
            *radius,
        ),
        Command::Preset {
            action: PresetAction::Export { name },
        } => Ok(presets::config(name)?.to_json()),
        Command::Preset {
            action: PresetAction::List,
        } => Ok(presets::NAMES.iter().map(|n| format!("{n}\n")).collect()),
    }
}

fn kind(e: &Error) -> &'static str {
    match e {
        Error::Field(_) => "field",
        Error::InvalidScheme(_) => "invalid_scheme",
        Error::DegenerateWindow(_) => "degenerate_window",
        Error::InvalidWindow(_) => "invalid_window",
        Error::InvalidInput(_) => "invalid_input",
        Error::UnknownPreset(_) => "unknown_preset",
        Error::NoStabilization(_) => "no_stabilization",
        Error::InvariantViolation(_) => "invariant_violation",
    }
}

fn fail(e: &Error) -> ExitCode {
    let line = serde_json::json!({ "error": kind(e), "message": e.to_string() });
    eprintln!("{line}");
    match e {
        Error::InvariantViolation(_) | Error::NoStabilization(_) => ExitCode::from(3),
        _ => ExitCode::from(2),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = match run(&cli) {
        Ok(t) => t,
        Err(e) => return fail(&e),
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &text),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())
        }
    };
    if let Err(e) = written {
        return fail(&Error::InvalidInput(format!("cannot write output: {e}")));
    }
    ExitCode::SUCCESS
}
