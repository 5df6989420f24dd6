use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use unitdist::constructions::{
    bipartite_construction, compose_base3, hypercube_embedding, triangle_power, ConstructionResult,
};
use unitdist::deplab::{
    entropy_check, forest_bound_certify, greedy_select, matroid_partition, odd_distance_coloring,
    span_audit_with, ungar_directions, AuditMethod,
};
use unitdist::distgraph::{
    build_udg, distance_spectrum, render_svg, unit_distance_ceiling, DistanceSpectrum, Mode, PointSet,
};
use unitdist::genericity::{
    full_family, is_achievable, sample_generic_polytope, sample_generic_polytope_for_class, HyperplaneFamily,
    SchemeClass,
};
use unitdist::norms::{approximate_polytope, hausdorff_distance, hausdorff_to_norm, Norm, PolytopeNorm};
use unitdist::qlinalg::QVector;

use crate::input::{load_edges, load_norm, load_points, load_schemes, load_vectors, CliError};
use crate::{Audit, Cli, Color, Command, Construct, Count, Format, Generic, Method, SCHEMA};

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: u32,
    command: &'a str,
    #[serde(flatten)]
    body: T,
}

enum Output {
    Text(String),
}

fn json<T: Serialize>(command: &str, body: T) -> Output {
    let env = Envelope { schema: SCHEMA, command, body };
    Output::Text(serde_json::to_string(&env).expect("serializable report"))
}

fn format(cli: &Cli, default: Format, allowed: &[Format]) -> Result<Format, CliError> {
    let f = cli.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(CliError::Usage(format!("format {f:?} is not available for this subcommand")))
    }
}

fn inputs(cmd: &Command) -> Vec<&PathBuf> {
    match cmd {
        Command::Construct { kind } => match kind {
            Construct::Hypercube { common, .. }
            | Construct::Trianglepower { common, .. }
            | Construct::Base3 { common, .. }
            | Construct::Bipartite { common, .. } => vec![&common.norm],
        },
        Command::Count { what: Count::Unit { norm, points } | Count::Distinct { norm, points } } => vec![norm, points],
        Command::Audit { what } => match what {
            Audit::Span { vectors, .. } | Audit::Greedy { vectors, .. } => vec![vectors],
            Audit::Forest { points, vectors, edges } => vec![points, vectors, edges],
            Audit::Ungar { points } => vec![points],
            Audit::Entropy { .. } => vec![],
        },
        Command::Partition { vectors, .. } => vec![vectors],
        Command::Color { what: Color::Odd { points, norm, .. } } => vec![points, norm],
        Command::Approx { norm, .. } => vec![norm],
        Command::Generic { what } => match what {
            Generic::Family { scheme, norm } => vec![scheme, norm],
            Generic::Sample { norm, schemes, .. } => std::iter::once(norm).chain(schemes.iter()).collect(),
        },
        Command::Hausdorff { norm, other, .. } => vec![norm, other],
        Command::Plot { points, norm } => vec![points, norm],
    }
}

fn validate_paths(cli: &Cli) -> Result<(), CliError> {
    for p in inputs(&cli.command) {
        if !p.is_file() {
            return Err(CliError::Usage(format!("input file {} does not exist", p.display())));
        }
    }
    if let Some(out) = &cli.out {
        let parent = out.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
        if !parent.is_dir() {
            return Err(CliError::Usage(format!("output directory {} does not exist", parent.display())));
        }
    }
    Ok(())
}

pub fn dispatch(cli: &Cli) -> Result<(), CliError> {
    validate_paths(cli)?;
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    if let Some(n) = cli.jobs {
        if n == 0 {
            return Err(CliError::Usage("--jobs must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::domain("runtime", e))?;
    }
    let Output::Text(text) = execute(cli)?;
    match &cli.out {
        Some(path) => fs::write(path, text + "\n").map_err(|e| CliError::domain("io", format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{text}").and_then(|_| out.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::domain("io", e)),
                _ => Ok(()),
            }
        }
    }
}

fn polytope(norm: Norm) -> Result<PolytopeNorm, CliError> {
    match norm {
        Norm::Polytope(p) => Ok(p),
        Norm::Smooth(_) => Err(CliError::domain("norm", "a polytope norm is required")),
    }
}

/// Exact points stay exact with `--exact`; otherwise counting runs in
/// float mode with `--tol`.
fn counting_points(cli: &Cli, ps: PointSet, norm: &Norm) -> Result<PointSet, CliError> {
    if cli.exact {
        if ps.mode() != Mode::Exact || norm.as_polytope().is_none() {
            return Err(CliError::domain("graph", "--exact needs an exact point set and a polytope norm"));
        }
        Ok(ps)
    } else {
        Ok(PointSet::float(ps.dim(), ps.to_f64(), cli.tol)?)
    }
}

#[derive(Serialize)]
struct Trials {
    trials: Vec<ConstructionResult>,
}

#[derive(Serialize)]
struct ClassSize {
    direction: unitdist::distgraph::Direction,
    edges: usize,
}

#[derive(Serialize)]
struct UnitReport {
    mode: Mode,
    n: usize,
    d: usize,
    edges: usize,
    max_residual: f64,
    direction_classes: Vec<ClassSize>,
    ceiling: f64,
    ceiling_ok: bool,
    edge_list: Vec<(usize, usize)>,
}

#[derive(Serialize)]
struct DistinctReport {
    n: usize,
    d: usize,
    distinct: usize,
    n_minus_one: usize,
    reference: f64,
    spectrum: DistanceSpectrum,
}

#[derive(Serialize)]
struct FamilyReport {
    #[serde(flatten)]
    family: HyperplaneFamily,
    count: usize,
    base_offsets_achievable: bool,
}

#[derive(Serialize)]
struct HausdorffReport {
    distance: f64,
    sampled: bool,
}

fn points_csv(ps: &PointSet) -> String {
    let d = ps.dim();
    let mut s = (0..d).map(|i| format!("x{i}")).collect::<Vec<_>>().join(",");
    s.push('\n');
    let rows: Vec<String> = match ps.exact_points() {
        Some(pts) => pts.iter().map(|p| p.entries().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")).collect(),
        None => ps.to_f64().iter().map(|p| p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")).collect(),
    };
    s.push_str(&rows.join("\n"));
    s
}

fn construct(cli: &Cli, kind: &Construct) -> Result<Output, CliError> {
    let f = format(cli, Format::Json, &[Format::Json, Format::Csv])?;
    let (common, name) = match kind {
        Construct::Hypercube { common, .. } => (common, "construct hypercube"),
        Construct::Trianglepower { common, .. } => (common, "construct trianglepower"),
        Construct::Base3 { common, .. } => (common, "construct base3"),
        Construct::Bipartite { common, .. } => (common, "construct bipartite"),
    };
    let norm = load_norm(&common.norm)?;
    if cli.exact && norm.as_polytope().is_none() {
        return Err(CliError::domain("construction", "--exact needs a polytope norm"));
    }
    if common.trials == 0 {
        return Err(CliError::Usage("--trials must be positive".into()));
    }
    let build = |seed: u64| match kind {
        Construct::Hypercube { k, .. } => hypercube_embedding(&norm, *k, seed),
        Construct::Trianglepower { k, .. } => triangle_power(&norm, *k, seed),
        Construct::Base3 { n, .. } => compose_base3(&norm, *n, seed),
        Construct::Bipartite { d, k, m, .. } => bipartite_construction(&norm, *d, *k, *m, seed),
    };
    let seeds: Vec<u64> = (0..common.trials as u64).map(|i| cli.seed.wrapping_add(i)).collect();
    let mut results = seeds.par_iter().map(|&s| build(s)).collect::<Result<Vec<_>, _>>()?;
    if f == Format::Csv {
        if results.len() != 1 {
            return Err(CliError::Usage("csv output holds a single trial".into()));
        }
        return Ok(Output::Text(points_csv(&results[0].points)));
    }
    Ok(if results.len() == 1 { json(name, results.pop().expect("one result")) } else { json(name, Trials { trials: results }) })
}

fn count(cli: &Cli, what: &Count) -> Result<Output, CliError> {
    match what {
        Count::Unit { norm, points } => {
            let f = format(cli, Format::Json, &[Format::Json, Format::Csv])?;
            let norm = load_norm(norm)?;
            let ps = counting_points(cli, load_points(points)?, &norm)?;
            let g = build_udg(&ps, &norm, cli.tol)?;
            if f == Format::Csv {
                let mut s = String::from("x,y,residual");
                for (e, r) in g.edges.iter().zip(&g.residuals) {
                    s.push_str(&format!("\n{},{},{}", e.0, e.1, r));
                }
                return Ok(Output::Text(s));
            }
            let ceiling = unit_distance_ceiling(g.n, ps.dim());
            let report = UnitReport {
                mode: ps.mode(),
                n: g.n,
                d: ps.dim(),
                edges: g.num_edges(),
                max_residual: g.max_residual(),
                direction_classes: g
                    .direction_classes
                    .iter()
                    .map(|c| ClassSize { direction: c.direction.clone(), edges: c.edges.len() })
                    .collect(),
                ceiling,
                ceiling_ok: g.num_edges() as f64 <= ceiling + 1e-9,
                edge_list: g.edges.clone(),
            };
            Ok(json("count unit", report))
        }
        Count::Distinct { norm, points } => {
            let f = format(cli, Format::Json, &[Format::Json, Format::Csv])?;
            let norm = load_norm(norm)?;
            let ps = counting_points(cli, load_points(points)?, &norm)?;
            let spectrum = distance_spectrum(&ps, &norm, cli.tol)?;
            if f == Format::Csv {
                return Ok(Output::Text(spectrum.to_csv().trim_end().to_string()));
            }
            let n = ps.len();
            let d = ps.dim();
            let report = DistinctReport {
                n,
                d,
                distinct: spectrum.distinct(),
                n_minus_one: n.saturating_sub(1),
                reference: n as f64 - d as f64 * (n as f64).powf(0.75),
                spectrum,
            };
            Ok(json("count distinct", report))
        }
    }
}

fn audit(cli: &Cli, what: &Audit) -> Result<Output, CliError> {
    format(cli, Format::Json, &[Format::Json])?;
    match what {
        Audit::Span { vectors, d, m, method } => {
            let vs = load_vectors(vectors)?;
            let method = match method {
                Method::Exhaustive => AuditMethod::Exhaustive,
                Method::Partition => AuditMethod::Partition,
            };
            Ok(json("audit span", span_audit_with(&vs, *d, *m, method)?))
        }
        Audit::Forest { points, vectors, edges } => {
            let ps = load_points(points)?;
            let pts = ps.exact_points().ok_or_else(|| CliError::domain("deplab", "points must be exact"))?;
            let cert = forest_bound_certify(pts, &load_vectors(vectors)?, &load_edges(edges)?)?;
            Ok(json("audit forest", cert))
        }
        Audit::Ungar { points } => {
            let ps = load_points(points)?;
            let pts = ps.exact_points().ok_or_else(|| CliError::domain("deplab", "points must be exact"))?;
            Ok(json("audit ungar", ungar_directions(pts)?))
        }
        Audit::Entropy { sizes } => Ok(json("audit entropy", entropy_check(sizes)?)),
        Audit::Greedy { vectors, weights, d, m, max_weight } => {
            let vs = load_vectors(vectors)?;
            Ok(json("audit greedy", greedy_select(&vs, weights, *d, *m, max_weight)?))
        }
    }
}

fn generic(cli: &Cli, what: &Generic) -> Result<Output, CliError> {
    format(cli, Format::Json, &[Format::Json])?;
    match what {
        Generic::Family { scheme, norm } => {
            let schemes = load_schemes(scheme)?;
            let [scheme] = schemes.as_slice() else {
                return Err(CliError::domain("genericity", "family takes exactly one scheme"));
            };
            let base = polytope(load_norm(norm)?)?;
            let normals: Vec<QVector> = base.facets().iter().map(|f| f.normal.clone()).collect();
            let family = full_family(scheme, &normals)?;
            let offsets = QVector::new(base.facets().iter().map(|f| f.offset.clone()).collect())?;
            let base_offsets_achievable = is_achievable(&offsets, &family)?;
            let count = family.len();
            Ok(json("generic family", FamilyReport { family, count, base_offsets_achievable }))
        }
        Generic::Sample { norm, schemes, eps, height, max_l } => {
            let base = polytope(load_norm(norm)?)?;
            let schemes = match schemes {
                Some(p) => load_schemes(p)?,
                None => Vec::new(),
            };
            let g = match height {
                Some(h) => {
                    let class = SchemeClass { height: *h, max_l: *max_l };
                    sample_generic_polytope_for_class(&base, class, &schemes, eps, cli.seed)?
                }
                None => sample_generic_polytope(&base, &schemes, eps, cli.seed)?,
            };
            Ok(json("generic sample", g))
        }
    }
}

fn execute(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Construct { kind } => construct(cli, kind),
        Command::Count { what } => count(cli, what),
        Command::Audit { what } => audit(cli, what),
        Command::Partition { vectors, d, m } => {
            format(cli, Format::Json, &[Format::Json])?;
            Ok(json("partition", matroid_partition(&load_vectors(vectors)?, *d, *m)?))
        }
        Command::Color { what: Color::Odd { points, norm, d } } => {
            format(cli, Format::Json, &[Format::Json])?;
            let norm = polytope(load_norm(norm)?)?;
            Ok(json("color odd", odd_distance_coloring(&load_points(points)?, &norm, *d)?))
        }
        Command::Approx { norm, mu } => {
            format(cli, Format::Json, &[Format::Json])?;
            let norm = load_norm(norm)?;
            Ok(json("approx", approximate_polytope(&norm, *mu, norm.dim())?))
        }
        Command::Generic { what } => generic(cli, what),
        Command::Hausdorff { norm, other, samples } => {
            format(cli, Format::Json, &[Format::Json])?;
            let (a, b) = (load_norm(norm)?, load_norm(other)?);
            let report = match (&a, &b) {
                (Norm::Polytope(p), Norm::Polytope(q)) => HausdorffReport { distance: hausdorff_distance(p, q)?, sampled: false },
                (Norm::Polytope(p), o) | (o, Norm::Polytope(p)) => {
                    HausdorffReport { distance: hausdorff_to_norm(p, o, *samples)?, sampled: true }
                }
                _ => return Err(CliError::domain("norm", "at least one of the two norms must be a polytope")),
            };
            Ok(json("hausdorff", report))
        }
        Command::Plot { points, norm } => {
            format(cli, Format::Svg, &[Format::Svg])?;
            let norm = load_norm(norm)?;
            let ps = counting_points(cli, load_points(points)?, &norm)?;
            if ps.dim() != 2 {
                return Err(CliError::domain("graph", "plot needs a planar point set"));
            }
            let g = build_udg(&ps, &norm, cli.tol)?;
            Ok(Output::Text(render_svg(&ps, &g.edges)))
        }
    }
}
