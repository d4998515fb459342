use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::Value;
use torwidth_core::{
    beat_the_curve, candidate_directions, lattice_width, lattice_width_bruteforce, local_intersection_numbers, mfd,
    pullback_divisor, resolve_smooth, CartierCertificate, CurveClass, LatticeMap, LatticeVector, ToricDivisor,
    DEFAULT_CONE_BUDGET,
};

use crate::doc::{self, Doc};
use crate::error::CliError;
use crate::files::{self, LatticeMapFile, PolytopeFile, ToricPairFile};
use crate::svg;

#[derive(Debug, Parser)]
#[command(
    name = "torwidth",
    version,
    about = "Lattice width and fibering degree of toric pairs"
)]
pub struct Cli {
    /// Worker threads for the brute-force oracle.
    #[arg(long, global = true, env = "TORWIDTH_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lattice width of a polytope with a witness direction.
    Width {
        polytope: PathBuf,
        /// Cross-check against exhaustive search over a box of directions.
        #[arg(long)]
        oracle: bool,
        /// Half-side of the oracle's direction box; defaults to the largest
        /// candidate ray.
        #[arg(long = "box", value_name = "B")]
        bound: Option<u64>,
    },
    /// Minimal fibering degree of a pair and a fibration realizing it.
    Mfd { pair: PathBuf },
    /// Vertices, facets and lattice-point count of the divisor polytope.
    Polytope { pair: PathBuf },
    /// Lattice points of the divisor polytope.
    Sections { pair: PathBuf },
    /// Intersection number of the curve of a direction with the divisor.
    Intersect {
        pair: PathBuf,
        #[arg(long = "v", value_delimiter = ',', allow_hyphen_values = true, required = true)]
        v: Vec<i64>,
    },
    /// Value of the support function at a point of N.
    Support {
        pair: PathBuf,
        #[arg(long = "v", value_delimiter = ',', allow_hyphen_values = true, required = true)]
        v: Vec<i64>,
    },
    /// Cartier, globally generated, smooth, complete, multiplicities.
    Check { pair: PathBuf },
    /// Smooth refinement of the fan with the pulled-back divisor.
    Resolve { pair: PathBuf },
    /// Pull a divisor back along a lattice map.
    Pullback {
        map: PathBuf,
        target: PathBuf,
        /// Source fan (its divisor is ignored); defaults to the preimage fan.
        #[arg(long)]
        source: Option<PathBuf>,
    },
    /// Best ray for the beat-the-curve inequality of a curve class.
    Beat {
        pair: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        class: Vec<i64>,
    },
    /// Draw a polygon, a direction and its projection as SVG.
    Svg {
        polytope: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        direction: Vec<i64>,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
}

fn pair(path: &Path) -> Result<ToricDivisor, CliError> {
    files::read::<ToricPairFile>(path)?.to_divisor()
}

fn n_vector(coords: &[i64], rank: usize) -> Result<LatticeVector, CliError> {
    if coords.len() != rank {
        return Err(CliError::Malformed(format!(
            "vector has {} coordinates, expected {rank}",
            coords.len()
        )));
    }
    Ok(LatticeVector::n(coords.to_vec()))
}

/// Runs one command and returns the document for standard output.
pub fn run(command: &Command) -> Result<String, CliError> {
    match command {
        Command::Width {
            polytope,
            oracle,
            bound,
        } => {
            let p = files::read::<PolytopeFile>(polytope)?.to_polytope()?;
            let w = lattice_width(&p)?;
            let mut out = Doc::new()
                .field("width", w.width)
                .field("direction", doc::vector(&w.witness))
                .field("method", w.method.as_str())
                .field("certified", w.certified);
            if *oracle {
                let b = match bound {
                    Some(b) => *b,
                    None if p.is_full_dimensional() => {
                        let (cands, _) = candidate_directions(&p, DEFAULT_CONE_BUDGET)?;
                        cands.iter().map(|c| c.max_norm()).max().unwrap_or(1)
                    }
                    None => 1,
                };
                let o = lattice_width_bruteforce(&p, b)?;
                if w.certified && o.certified && o.width != w.width {
                    return Err(CliError::OracleDisagreement {
                        candidate: w.width,
                        oracle: o.width,
                    });
                }
                out = out
                    .field("oracle_box", b)
                    .field("oracle_width", o.width)
                    .field("oracle_direction", doc::vector(&o.witness))
                    .field("oracle_certified", o.certified)
                    .field("agree", o.width == w.width);
            }
            Ok(out.render())
        }
        Command::Mfd { pair: path } => {
            let d = pair(path)?;
            let (w, fib) = mfd(&d)?;
            let p = d.polytope()?;
            Ok(Doc::new()
                .field("mfd", w.width)
                .field("direction", doc::vector(&w.witness))
                .field("characters", doc::vectors(&fib.characters))
                .field("polytope_vertices", doc::vectors(p.vertices()))
                .render())
        }
        Command::Polytope { pair: path } => {
            let p = pair(path)?.polytope()?;
            let facets = |fs: &[torwidth_core::Facet]| {
                Value::Array(
                    fs.iter()
                        .map(|f| serde_json::json!({"normal": f.normal.coords(), "offset": f.offset}))
                        .collect(),
                )
            };
            Ok(Doc::new()
                .field("vertices", doc::vectors(p.vertices()))
                .field("facets", facets(p.facets()))
                .field("equalities", facets(p.equalities()))
                .field("lattice_points", p.lattice_points()?.len())
                .render())
        }
        Command::Sections { pair: path } => {
            let pts = pair(path)?.polytope()?.lattice_points()?;
            Ok(Doc::new()
                .field("count", pts.len())
                .field("points", doc::vectors(&pts))
                .render())
        }
        Command::Intersect { pair: path, v } => {
            let d = pair(path)?;
            let v = n_vector(v, d.fan().rank())?;
            let (a, b) = local_intersection_numbers(&d, &v)?;
            let total = a.checked_add(b).ok_or(torwidth_core::Error::Overflow)?;
            Ok(Doc::new()
                .field("total", total)
                .field("at_zero", a)
                .field("at_infinity", b)
                .render())
        }
        Command::Support { pair: path, v } => {
            let d = pair(path)?;
            let v = n_vector(v, d.fan().rank())?;
            let value = d.support_function()?.evaluate(&v)?;
            Ok(Doc::new().field("value", value).render())
        }
        Command::Check { pair: path } => {
            let d = pair(path)?;
            let cert = d.is_cartier()?;
            let cartier = cert.is_cartier();
            let gg = cartier && d.is_globally_generated()?;
            let fan = d.fan();
            let mut out = Doc::new()
                .field("cartier", cartier)
                .field("globally_generated", gg)
                .field("smooth", fan.is_smooth()?)
                .field("complete", fan.is_complete())
                .field("multiplicities", Value::from(fan.multiplicities()?));
            if let CartierCertificate::NotCartier { cone, .. } = cert {
                out = out.field("non_cartier_cone", cone);
            }
            Ok(out.render())
        }
        Command::Resolve { pair: path } => {
            let d = pair(path)?;
            let res = resolve_smooth(d.fan())?;
            let pulled = pullback_divisor(&LatticeMap::identity(d.fan().rank()), &d, res.fan)?;
            Ok(ToricPairFile::from_divisor(&pulled).to_doc().render())
        }
        Command::Pullback { map, target, source } => {
            let map = files::read::<LatticeMapFile>(map)?.to_map()?;
            let d = pair(target)?;
            let fan = match source {
                Some(s) => files::read::<ToricPairFile>(s)?.to_fan()?,
                None => std::sync::Arc::new(map.induced_fan(d.fan())?),
            };
            let pulled = pullback_divisor(&map, &d, fan)?;
            Ok(ToricPairFile::from_divisor(&pulled).to_doc().render())
        }
        Command::Beat { pair: path, class } => {
            let d = pair(path)?;
            let c = CurveClass::new(d.fan().clone(), class.clone())?;
            let best = beat_the_curve(&d, &c)?;
            Ok(Doc::new()
                .field("ray", best.ray)
                .field("direction", doc::vector(&best.direction))
                .field("degree", best.degree)
                .field("bound", best.bound)
                .render())
        }
        Command::Svg {
            polytope,
            direction,
            output,
        } => {
            let p = files::read::<PolytopeFile>(polytope)?.to_polytope()?;
            let v = LatticeVector::n(direction.clone());
            let text = svg::render(&p, &v)?;
            std::fs::write(output, &text).map_err(|source| CliError::Write {
                path: output.clone(),
                source,
            })?;
            Ok(Doc::new()
                .field("output", output.display().to_string())
                .field("width", p.width_in_direction(&v)?)
                .render())
        }
    }
}

/// Parses `args`, runs the command on a pool of the requested size and
/// returns the standard output text and exit code.
pub fn execute<I, T>(args: I) -> (String, String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (String::new(), e.render().to_string(), code);
        }
    };
    let result = match cli.threads {
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
            Ok(pool) => pool.install(|| run(&cli.command)),
            Err(e) => return (String::new(), format!("error: {e}\n"), 4),
        },
        None => run(&cli.command),
    };
    match result {
        Ok(out) => (out, String::new(), 0),
        Err(e) => (String::new(), format!("error: {e}\n"), e.exit_code()),
    }
}
