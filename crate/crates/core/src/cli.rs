//! Command-line front end.

use std::collections::VecDeque;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

use crate::curves::{assemble_curves, CurveOptions, PipeMode};
use crate::error::{Error, TwistError, VERIFY_FAILED_CODE};
use crate::fixtures::{builtin, Fixture, AUTO_MARGIN, BUILTIN_NAMES};
use crate::framing::Framing;
use crate::homology::{flux_diff_class, rflux, DualHomology};
use crate::parse_rational;
use crate::region::Region;
use crate::shell::{layered_auto, Shell};
use crate::tiling::{
    enumerate_tilings_capped, find_tiling, move_graph, tilings_to_json, Tiling, CELL_CAP_ENV, DEFAULT_CELL_CAP,
};
use crate::twist::{cross_check, twist_bfs, twist_via_helicity};
use crate::verify::{run_check, Report, VerifyOptions};

#[derive(Debug, Parser)]
#[command(
    name = "domtwist",
    version,
    about = "Flux, relative flux and twist of 3D domino tilings"
)]
pub struct Cli {
    /// Largest region, in cells, that will be enumerated.
    #[arg(long, env = CELL_CAP_ENV, default_value_t = DEFAULT_CELL_CAP, global = true)]
    pub cell_cap: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count all tilings of a region, optionally writing them to a file.
    Enumerate {
        #[command(flatten)]
        source: Source,
        /// Write the tilings as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Flux, relative flux, twist, helicity and tabulation matrix.
    Invariants {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        base: Base,
        #[command(flatten)]
        curves: CurveArgs,
        /// Report every tiling of the base's flux class instead of one.
        #[arg(long)]
        all: bool,
    },
    /// Flips and trits available in a tiling, or a summary of the move graph.
    Moves {
        #[command(flatten)]
        source: Source,
        /// Summarize the move graph of all tilings.
        #[arg(long)]
        graph: bool,
    },
    /// Draw a tiling floor by floor.
    Render {
        #[command(flatten)]
        source: Source,
    },
    /// Write the closed flux curves of a tiling.
    ExportCurves {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        curves: CurveArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Output file; standard output if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the reproduction checks on the builtin fixtures.
    VerifyPaper {
        /// Run only these checks (1 to 11).
        #[arg(long = "check")]
        checks: Vec<usize>,
        #[arg(long, default_value = "1/6")]
        phi: String,
        /// Framing used for self-linking; anything but `transported` is a
        /// perturbation and should make checks fail.
        #[arg(long, default_value = "transported")]
        framing: Framing,
    },
}

#[derive(Debug, Args, Default)]
pub struct Source {
    /// Builtin region name.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Region file.
    #[arg(long)]
    pub region: Option<PathBuf>,
    /// Tiling file; its region is used.
    #[arg(long)]
    pub tiling: Option<PathBuf>,
    /// Stored tiling of the builtin.
    #[arg(long)]
    pub stored: Option<String>,
    /// Position in the sorted list of all tilings.
    #[arg(long)]
    pub index: Option<usize>,
}

#[derive(Debug, Args, Default)]
pub struct Base {
    /// Stored tiling used as twist zero.
    #[arg(long)]
    pub base_stored: Option<String>,
    /// Tiling file used as twist zero.
    #[arg(long)]
    pub base_tiling: Option<PathBuf>,
    /// Position of the base in the sorted list of all tilings.
    #[arg(long)]
    pub base_index: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// Flux per pipe, as an exact rational.
    #[arg(long, default_value = "1/6")]
    pub phi: String,
    /// `builtin`, `auto`, or a shell file. Defaults to the stored shell when
    /// there is one.
    #[arg(long)]
    pub shell: Option<String>,
    /// Margin, in cells, for the auto-routed shell.
    #[arg(long, default_value_t = AUTO_MARGIN)]
    pub margin: i64,
    /// Pipes per domino.
    #[arg(long, value_enum, default_value_t = Pipes::Five)]
    pub pipes: Pipes,
    /// `transported`, `twisted:N` or `constant:X,Y,Z`.
    #[arg(long, default_value = "transported")]
    pub framing: Framing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Pipes {
    #[value(name = "5")]
    Five,
    #[value(name = "6")]
    Six,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Obj,
}

type Out<'a> = &'a mut dyn Write;

fn io(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn usage(s: impl Into<String>) -> Error {
    Error::Usage(s.into())
}

/// A region together with the builtin it came from, if any.
struct Loaded {
    label: String,
    region: Arc<Region>,
    fixture: Option<Fixture>,
}

fn load_region(src: &Source) -> Result<(Loaded, Option<Tiling>), Error> {
    let given = [src.builtin.is_some(), src.region.is_some(), src.tiling.is_some()];
    if given.iter().filter(|g| **g).count() != 1 {
        return Err(usage(format!(
            "give exactly one of --builtin, --region, --tiling (builtins: {})",
            BUILTIN_NAMES.join(", ")
        )));
    }
    if let Some(name) = &src.builtin {
        let f = builtin(name)?;
        let region = f.region.clone();
        return Ok((
            Loaded {
                label: format!("builtin {name}"),
                region,
                fixture: Some(f),
            },
            None,
        ));
    }
    if let Some(p) = &src.region {
        let r = Region::load(p)?;
        return Ok((
            Loaded {
                label: p.display().to_string(),
                region: Arc::new(r),
                fixture: None,
            },
            None,
        ));
    }
    let p = src.tiling.as_ref().expect("one source given");
    let t = Tiling::load(p)?;
    Ok((
        Loaded {
            label: p.display().to_string(),
            region: t.region_arc().clone(),
            fixture: None,
        },
        Some(t),
    ))
}

fn enumerate(region: &Arc<Region>, cap: usize) -> Result<Vec<Tiling>, Error> {
    Ok(enumerate_tilings_capped(region, cap)?)
}

fn stored_tiling(l: &Loaded, name: &str) -> Result<Tiling, Error> {
    let f = l.fixture.as_ref().ok_or_else(|| usage("--stored needs --builtin"))?;
    f.tiling(name).cloned().ok_or_else(|| {
        let names: Vec<&str> = f.tilings.iter().map(|(n, _)| *n).collect();
        usage(format!(
            "{} has no stored tiling {name:?} (stored: {})",
            f.name,
            names.join(", ")
        ))
    })
}

fn by_index(l: &Loaded, k: usize, cap: usize) -> Result<Tiling, Error> {
    let all = enumerate(&l.region, cap)?;
    let n = all.len();
    all.into_iter()
        .nth(k)
        .ok_or_else(|| usage(format!("index {k} out of range; region has {n} tilings")))
}

/// The tiling selected by `src`, with a label.
fn pick_tiling(l: &Loaded, from_file: Option<Tiling>, src: &Source, cap: usize) -> Result<(String, Tiling), Error> {
    if src.stored.is_some() && src.index.is_some() {
        return Err(usage("give at most one of --stored, --index"));
    }
    if let Some(t) = from_file {
        if src.stored.is_some() || src.index.is_some() {
            return Err(usage("--tiling already names a tiling"));
        }
        return Ok(("from file".into(), t));
    }
    if let Some(name) = &src.stored {
        return Ok((name.clone(), stored_tiling(l, name)?));
    }
    if let Some(k) = src.index {
        return Ok((format!("index {k}"), by_index(l, k, cap)?));
    }
    if let Some((name, t)) = l.fixture.as_ref().and_then(|f| f.tilings.first()) {
        return Ok((name.to_string(), t.clone()));
    }
    Ok(("first found".into(), find_tiling(&l.region)?))
}

fn pick_base(l: &Loaded, b: &Base, cap: usize, t: &Tiling) -> Result<(String, Tiling), Error> {
    let given = [b.base_stored.is_some(), b.base_tiling.is_some(), b.base_index.is_some()];
    if given.iter().filter(|g| **g).count() > 1 {
        return Err(usage("give at most one of --base-stored, --base-tiling, --base-index"));
    }
    if let Some(name) = &b.base_stored {
        return Ok((name.clone(), stored_tiling(l, name)?));
    }
    if let Some(p) = &b.base_tiling {
        let base = Tiling::load(p)?;
        if base.region() != t.region() {
            return Err(usage("base tiling is of a different region"));
        }
        return Ok((p.display().to_string(), base));
    }
    if let Some(k) = b.base_index {
        return Ok((format!("index {k}"), by_index(l, k, cap)?));
    }
    if let Some(f) = &l.fixture {
        if let (Some(name), Some(base)) = (f.base, f.base_tiling()) {
            return Ok((name.to_string(), base.clone()));
        }
    }
    Ok(("the tiling itself".into(), t.clone()))
}

fn curve_options(c: &CurveArgs) -> Result<CurveOptions, Error> {
    let phi = parse_rational(&c.phi).map_err(usage)?;
    if phi <= Rational64::zero() {
        return Err(usage("phi must be positive"));
    }
    Ok(CurveOptions {
        phi,
        mode: match c.pipes {
            Pipes::Five => PipeMode::Five,
            Pipes::Six => PipeMode::Six,
        },
        framing: c.framing,
    })
}

fn pick_shell(l: &Loaded, c: &CurveArgs) -> Result<Shell, Error> {
    if l.region.is_wrapped() {
        return Ok(Shell::empty());
    }
    let stored = l.fixture.as_ref().and_then(|f| f.shell.clone());
    match c.shell.as_deref() {
        None => match stored {
            Some(s) => Ok(s),
            None => Ok(layered_auto(&l.region, c.margin)?),
        },
        Some("builtin") => stored.ok_or_else(|| usage("no stored shell for this region; use --shell auto")),
        Some("auto") => Ok(layered_auto(&l.region, c.margin)?),
        Some(path) => {
            let s = Shell::load(Path::new(path))?;
            s.validate(&l.region)?;
            Ok(s)
        }
    }
}

fn vector(v: &[Rational64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn hel_text(h: Rational64, phi: Rational64) -> String {
    let k = h / (phi * phi);
    format!("{k} phi^2 = {} ({:.6})", h, h.to_f64().unwrap_or(f64::NAN))
}

pub fn run(cli: &Cli, out: Out) -> Result<i32, Error> {
    let cap = cli.cell_cap;
    match &cli.command {
        Command::Enumerate { source, out: path } => {
            if source.stored.is_some() || source.index.is_some() {
                return Err(usage("enumerate takes a region only"));
            }
            let (l, _) = load_region(source)?;
            let all = enumerate(&l.region, cap)?;
            if let Some(p) = path {
                std::fs::write(p, tilings_to_json(&l.region, &all)).map_err(io)?;
            }
            writeln!(out, "{}", all.len()).map_err(io)?;
        }
        Command::Invariants {
            source,
            base,
            curves,
            all,
        } => invariants(source, base, curves, *all, cap, out)?,
        Command::Moves { source, graph } => {
            let (l, file) = load_region(source)?;
            if *graph {
                graph_summary(&l, cap, out)?;
            } else {
                let (label, t) = pick_tiling(&l, file, source, cap)?;
                writeln!(out, "tiling: {label}").map_err(io)?;
                for f in t.list_flips() {
                    let cells: Vec<String> = f.before.iter().map(|d| format!("{}-{}", d.black, d.white)).collect();
                    writeln!(out, "flip {}", cells.join(" ")).map_err(io)?;
                }
                for r in t.list_trits() {
                    let cells: Vec<String> = r.before.iter().map(|d| format!("{}-{}", d.black, d.white)).collect();
                    writeln!(out, "trit {:+} {}", r.sign, cells.join(" ")).map_err(io)?;
                }
            }
        }
        Command::Render { source } => {
            let (l, file) = load_region(source)?;
            let (_, t) = pick_tiling(&l, file, source, cap)?;
            write!(out, "{}", t.render()).map_err(io)?;
        }
        Command::ExportCurves {
            source,
            curves,
            format,
            out: path,
        } => {
            let (l, file) = load_region(source)?;
            let (_, t) = pick_tiling(&l, file, source, cap)?;
            let opts = curve_options(curves)?;
            let shell = pick_shell(&l, curves)?;
            let sys = assemble_curves(&t, &shell, &opts)?;
            let text = match format {
                Format::Json => sys.to_json(),
                Format::Obj => sys.to_obj(),
            };
            match path {
                Some(p) => std::fs::write(p, text).map_err(io)?,
                None => write!(out, "{text}").map_err(io)?,
            }
        }
        Command::VerifyPaper { checks, phi, framing } => {
            let phi = parse_rational(phi).map_err(usage)?;
            if phi <= Rational64::zero() {
                return Err(usage("phi must be positive"));
            }
            let opts = VerifyOptions { phi, framing: *framing };
            let ids: Vec<usize> = if checks.is_empty() {
                (1..=11).collect()
            } else {
                checks.clone()
            };
            if let Some(bad) = ids.iter().find(|&&i| !(1..=11).contains(&i)) {
                return Err(usage(format!("no check {bad}; checks are 1 to 11")));
            }
            let mut report = Report::default();
            for id in ids {
                let c = run_check(id, &opts);
                writeln!(out, "{}", c.line()).map_err(io)?;
                report.checks.push(c);
            }
            let failed = report.checks.iter().filter(|c| !c.pass).count();
            writeln!(out, "{} checks, {} failed", report.checks.len(), failed).map_err(io)?;
            if !report.all_passed() {
                return Ok(VERIFY_FAILED_CODE);
            }
        }
    }
    Ok(0)
}

fn graph_summary(l: &Loaded, cap: usize, out: Out) -> Result<(), Error> {
    let all = enumerate(&l.region, cap)?;
    let g = move_graph(&all)?;
    let adj = g.adjacency();
    let mut comp = vec![usize::MAX; g.tilings.len()];
    let mut sizes = Vec::new();
    for s in 0..comp.len() {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        let mut n = 0;
        comp[s] = id;
        let mut q = VecDeque::from([s]);
        while let Some(i) = q.pop_front() {
            n += 1;
            for &(j, _) in &adj[i] {
                if comp[j] == usize::MAX {
                    comp[j] = id;
                    q.push_back(j);
                }
            }
        }
        sizes.push(n);
    }
    writeln!(out, "tilings: {}", g.tilings.len()).map_err(io)?;
    writeln!(out, "flip edges: {}", g.flips.len()).map_err(io)?;
    writeln!(out, "trit edges: {}", g.trits.len()).map_err(io)?;
    writeln!(out, "tilings without flips: {}", g.flip_isolated().len()).map_err(io)?;
    writeln!(out, "components: {} (sizes {:?})", sizes.len(), sizes).map_err(io)?;
    Ok(())
}

fn invariants(source: &Source, base: &Base, curves: &CurveArgs, all: bool, cap: usize, out: Out) -> Result<(), Error> {
    let (l, file) = load_region(source)?;
    let opts = curve_options(curves)?;
    let w = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(io);
    w(out, format!("region: {} ({} cells)", l.label, l.region.len()))?;
    if all {
        let (blabel, b) = pick_base(
            &l,
            base,
            cap,
            &match file.clone() {
                Some(t) => t,
                None => pick_tiling(&l, None, source, cap)?.1,
            },
        )?;
        let tilings = enumerate(&l.region, cap)?;
        w(out, format!("base: {blabel}"))?;
        if l.region.is_wrapped() {
            let table = twist_bfs(&b, &tilings)?;
            let hist: Vec<String> = table.histogram().iter().map(|(k, v)| format!("{k}: {v}")).collect();
            w(out, format!("twist histogram: {}", hist.join(", ")))?;
            return Ok(());
        }
        let shell = pick_shell(&l, curves)?;
        let rep = cross_check(&b, &tilings, &shell, &opts)?;
        write!(out, "{}", rep.render()).map_err(io)?;
        return Ok(());
    }
    let (label, t) = pick_tiling(&l, file, source, cap)?;
    let (blabel, b) = pick_base(&l, base, cap, &t)?;
    w(out, format!("tiling: {label}"))?;
    w(out, format!("base: {blabel}"))?;

    let abs = DualHomology::new(&l.region, false)?;
    let flux = flux_diff_class(&t, &b)?;
    w(out, format!("H1 rank: {}", abs.rank()))?;
    w(out, format!("flux (relative to base): {}", vector(&flux.coords)))?;
    let rf = rflux(&t)?;
    w(out, format!("RFlux: {}", vector(&rf.coords)))?;

    let same_class = flux.is_zero();
    let base_rf_zero = rflux(&b)?.is_zero();
    let walk = if !same_class {
        "undefined (different flux class)".to_string()
    } else if !base_rf_zero {
        "undefined (base has nonzero RFlux)".to_string()
    } else {
        match enumerate(&l.region, cap).and_then(|ts| Ok(twist_bfs(&b, &ts)?)) {
            Ok(table) => table.get(&t).map_or("not reached".into(), |v| v.to_string()),
            Err(e) => format!("unavailable ({e})"),
        }
    };
    w(out, format!("twist (trit walk): {walk}"))?;

    if l.region.is_wrapped() {
        w(out, "helicity: not defined for wrapped regions".into())?;
        return Ok(());
    }
    let shell = match pick_shell(&l, curves) {
        Ok(s) => s,
        Err(Error::Pipe(e)) if curves.shell.is_none() => {
            w(out, format!("helicity: unavailable, no isolating shell ({e})"))?;
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    let via = if same_class && base_rf_zero {
        match twist_via_helicity(&t, &b, &shell, &opts) {
            Ok(v) => v.to_string(),
            Err(TwistError::NonInteger(q)) => format!("not an integer ({q})"),
            Err(e) => return Err(e.into()),
        }
    } else {
        "undefined".into()
    };
    w(out, format!("twist (helicity): {via}"))?;
    let sys = assemble_curves(&t, &shell, &opts)?;
    let m = sys.tabulation_matrix()?;
    let h = sys.helicity()?;
    w(out, format!("shell: {} ({} pipes)", shell.name, shell.pipes.len()))?;
    w(out, format!("Hel: {}", hel_text(h, opts.phi)))?;
    let nt = m.nontrivial();
    w(out, format!("curves: {}, nontrivial: {}", m.len(), nt.len()))?;
    if !nt.is_empty() {
        w(out, format!("tabulation matrix of curves {nt:?}:"))?;
        write!(out, "{}", m.submatrix(&nt).render()).map_err(io)?;
    }
    Ok(())
}

/// Parses arguments, runs, and returns the process exit code.
pub fn main_with<I, T>(args: I, out: Out, err: Out) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 2;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    match run(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code()
        }
    }
}
