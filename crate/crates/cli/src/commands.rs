use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, ensure, Context, Result};
use serde_json::json;

use isoradial::domain::{pairs_in_angle, read_domain, write_domain};
use isoradial::harness::{
    emit_report, exp_beurling, exp_green_convergence, exp_hm_convergence, exp_poisson_convergence, parse_lattices,
    GIM_BOX_FACTOR,
};
use isoradial::isograph::{build_quadgraph, random_isoradial, read_graph, square_lattice, write_graph};
use isoradial::kernels::{continuous_cauchy_ref, continuous_green_ref, free_green_raw, green_constant, ContourSpec, KernelCache};
use isoradial::operators::{
    cauchy_reconstruct, dbar_diamond_to_lambda, dbar_lambda_to_diamond, laplacian_at, on_diamonds, on_vertices,
};
use isoradial::solvers::{gim_approx, poisson_boundary, poisson_interior, solve_dirichlet, DirichletSystem, SolverConfig};
use isoradial::walk::{mc_harmonic_measure, WalkConfig};
use isoradial::{discretize, Color, DiscreteDomain, LatticeFunction, QuadGraph, Region, Support, C64};

use crate::{Command, Family, OpKind, PoissonMode, Suite};

pub fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Gen { family, delta, extent, seed, eta, alpha, beta, output } => {
            let g = match family {
                Family::Square => square_lattice(delta, extent)?,
                Family::Random => random_isoradial(seed, extent, eta, delta)?,
                Family::Twoseq => {
                    ensure!(!alpha.is_empty() && !beta.is_empty(), "twoseq needs --alpha and --beta");
                    build_quadgraph(&alpha, &beta, delta, eta)?
                }
            };
            write_graph(&g, &output)?;
            println!("{} vertices, {} rhombi", g.num_vertices(), g.num_rhombi());
            let origin = C64::new(0.0, 0.0);
            if let (Some(u), Some(z)) = (g.nearest(origin, Color::Gamma), g.nearest_rhombus(origin)) {
                println!("central vertex {u}, central rhombus {z}");
            }
        }
        Command::Domain { graph, region, output } => {
            let g = Arc::new(read_graph(&graph)?);
            let d = discretize(&g, &parse_region(&region)?)?;
            write_domain(&d, &output)?;
            println!("{} interior vertices, {} boundary pairs", d.interior().len(), d.pairs().len());
            println!("central vertex {}", d.nearest_interior(region_center(d.region())));
        }
        Command::Op { graph, domain, op, function, z0, output } => {
            let d = domain.map(|p| read_domain(&p)).transpose()?;
            let g: Arc<QuadGraph> = match (&d, graph) {
                (Some(d), _) => d.graph_arc().clone(),
                (None, Some(p)) => Arc::new(read_graph(&p)?),
                (None, None) => bail!("op needs --graph or --domain"),
            };
            let f = LatticeFunction::read(&function)?;
            f.validate(&g)?;
            let out = match op {
                OpKind::Laplacian => {
                    ensure!(f.support != Support::Diamond, "the Laplacian acts on vertex functions");
                    let at = |v: usize| laplacian_at(&g, &f, v);
                    match &d {
                        Some(d) => LatticeFunction::from_values(
                            f.support,
                            d.interior().iter().filter_map(|&v| at(v).ok().map(|x| (v, x))),
                        ),
                        None => on_vertices(&g, f.support, at),
                    }
                }
                OpKind::Dbar if f.support == Support::Diamond => {
                    on_vertices(&g, Support::Lambda, |v| dbar_diamond_to_lambda(&g, &f, v))
                }
                OpKind::Dbar => on_diamonds(&g, |z| dbar_lambda_to_diamond(&g, &f, z)),
                OpKind::Cauchy => {
                    let d = d.context("the Cauchy formula needs --domain")?;
                    let z0 = z0.context("the Cauchy formula needs --z0")?;
                    let cache = KernelCache::new(g.clone(), ContourSpec::default());
                    let value = cauchy_reconstruct(&d, &f, z0, &|v| cache.cauchy(v, z0))?;
                    let text = serde_json::to_string_pretty(&json!({ "z0": z0, "value": [value.re, value.im] }))?;
                    emit(output.as_deref(), &text)?;
                    return Ok(ExitCode::SUCCESS);
                }
            };
            emit(output.as_deref(), &serde_json::to_string_pretty(&out.to_file())?)?;
        }
        Command::Green { graph, u0, radius, output } => {
            let g = read_graph(&graph)?;
            ensure!(u0 < g.num_vertices() && g.color(u0) == Color::Gamma, "u0 = {u0} is not a Γ-vertex");
            let r = radius.unwrap_or(10.0 * g.delta());
            let p0 = g.position(u0);
            let spec = ContourSpec::default();
            let mut w = csv_writer(&output, "id,x,y,value_re,value_im,ref_value,abs_err")?;
            for u in g.vertices_of_color(Color::Gamma).filter(|&u| (g.position(u) - p0).norm() <= r) {
                let raw = free_green_raw(&g, u, u0, &spec)?;
                let value = raw.re + green_constant(g.delta());
                let p = g.position(u);
                let (reference, err) = if u == u0 {
                    (String::new(), String::new())
                } else {
                    let r = continuous_green_ref(p, p0);
                    (r.to_string(), (value - r).abs().to_string())
                };
                writeln!(w, "{u},{},{},{value},{},{reference},{err}", p.re, p.im, raw.im)?;
            }
        }
        Command::Cauchy { graph, z0, radius, output } => {
            let g = Arc::new(read_graph(&graph)?);
            ensure!(z0 < g.num_rhombi(), "z0 = {z0} is not a rhombus");
            let r = radius.unwrap_or(10.0 * g.delta());
            let c0 = g.center(z0);
            let corners = g.rhombus(z0).corners.map(|v| g.position(v));
            let cache = KernelCache::new(g.clone(), ContourSpec::default());
            let mut w = csv_writer(&output, "id,x,y,value_re,value_im,ref_re,ref_im,abs_err")?;
            for v in (0..g.num_vertices()).filter(|&v| (g.position(v) - c0).norm() <= r) {
                let k = cache.cauchy(v, z0)?;
                let tau = if g.color(v) == Color::Gamma { corners[0] - corners[2] } else { corners[1] - corners[3] };
                let reference = continuous_cauchy_ref(g.position(v), c0, tau / tau.norm());
                let p = g.position(v);
                writeln!(
                    w,
                    "{v},{},{},{},{},{},{},{}",
                    p.re,
                    p.im,
                    k.re,
                    k.im,
                    reference.re,
                    reference.im,
                    (k - reference).norm()
                )?;
            }
        }
        Command::Solve { domain, bc, output } => {
            let d = read_domain(&domain)?;
            let data = LatticeFunction::read(&bc)?;
            let g = d.graph();
            let f: Vec<f64> = d
                .pairs()
                .iter()
                .map(|p| data.get_lambda(g, p.a).map(|x| x.re))
                .collect::<isoradial::Result<_>>()?;
            solve_dirichlet(&d, &f)?.to_function(&d).write(&output)?;
        }
        Command::Hm { domain, from, arc, center, output } => {
            let d = read_domain(&domain)?;
            let set = arc_pairs(&d, &arc, center.as_deref())?;
            let row = DirichletSystem::new(&d, SolverConfig::default())?.harmonic_measure_row(from)?;
            let g = d.graph();
            let mut w = csv_writer(&output, "pair,a,a_int,x,y,measure")?;
            for &i in &set {
                let p = d.pairs()[i];
                let pos = g.position(p.a);
                writeln!(w, "{i},{},{},{},{},{}", p.a, p.a_int, pos.re, pos.im, row[i])?;
            }
            println!("{}", json!({ "from": from, "pairs": set.len(), "measure": set.iter().map(|&i| row[i]).sum::<f64>() }));
        }
        Command::Poisson { mode, domain, pair, from, o, s, t, output } => {
            let d = read_domain(&domain)?;
            let h = match mode {
                PoissonMode::Interior => {
                    let v = from.context("interior mode needs --from")?;
                    poisson_interior(&d, v, pair)?
                }
                PoissonMode::Boundary => {
                    let gim = gim_approx(d.graph_arc(), GIM_BOX_FACTOR * s, GIM_BOX_FACTOR * t)?;
                    let o = o.unwrap_or_else(|| d.nearest_pair(C64::new(0.0, 0.0)));
                    poisson_boundary(&d, pair, o, &gim, s, t)?
                }
            };
            h.to_function(&d).write(&output)?;
        }
        Command::Walk { domain, from, arc, center, trials, seed, output } => {
            let d = read_domain(&domain)?;
            let set = arc_pairs(&d, &arc, center.as_deref())?;
            let mc = mc_harmonic_measure(&d, from, &set, WalkConfig::for_domain(&d, seed, trials))?;
            let exact = isoradial::solvers::harmonic_measure(&d, from, &set)?;
            let report = json!({
                "from": from,
                "trials": trials,
                "seed": seed,
                "estimate": mc.estimate,
                "stderr": mc.stderr,
                "hits": mc.hits,
                "completed": mc.completed,
                "truncated": mc.truncated,
                "exact": exact,
            });
            fs::write(&output, serde_json::to_string_pretty(&report)? + "\n")?;
        }
        Command::Converge { suite, deltas, lattices, output } => {
            let lats = parse_lattices(&lattices)?;
            let wants = |s: Suite| suite == s || suite == Suite::All;
            let mut records = Vec::new();
            if wants(Suite::Hm) {
                records.extend(exp_hm_convergence(&lats, &deltas)?);
            }
            if wants(Suite::Green) {
                records.extend(exp_green_convergence(&lats, &deltas)?);
            }
            if wants(Suite::Poisson) {
                records.extend(exp_poisson_convergence(&lats, &deltas)?);
            }
            let beurling = if wants(Suite::Beurling) { Some(exp_beurling(&lats, &deltas)?) } else { None };
            let summary = emit_report(&records, beurling.as_ref(), &output)?;
            for f in &summary.families {
                let errs: Vec<String> = f.errors.iter().map(|e| format!("{e:.4}")).collect();
                println!(
                    "{:4} {:16} {:9} {:14} {:8} [{}] slope {:.2}",
                    if f.pass { "ok" } else { "FAIL" },
                    f.experiment,
                    f.lattice,
                    f.domain,
                    f.metric,
                    errs.join(", "),
                    f.slope
                );
            }
            for b in &summary.beurling {
                println!(
                    "{:4} beurling {:9} δ={} {:4} β = {:.3}",
                    if b.beta > 0.0 { "ok" } else { "FAIL" },
                    b.lattice,
                    b.delta,
                    b.geometry,
                    b.beta
                );
            }
            if let Some(b) = &beurling {
                for s in &b.skipped {
                    println!("skipped: {s}");
                }
            }
            println!("{}", if summary.pass { "PASS" } else { "FAIL" });
            return Ok(if summary.pass { ExitCode::SUCCESS } else { ExitCode::FAILURE });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_numbers(s: &str, n: usize) -> Result<Vec<f64>> {
    let xs: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().with_context(|| format!("bad number {x:?}")))
        .collect::<Result<_>>()?;
    ensure!(xs.len() == n, "expected {n} numbers, got {:?}", s);
    Ok(xs)
}

pub fn parse_region(s: &str) -> Result<Region> {
    let (kind, rest) = s.split_once(':').with_context(|| format!("region {s:?} has no kind"))?;
    Ok(match kind {
        "disc" => {
            let v = parse_numbers(rest, 3)?;
            Region::Disc { cx: v[0], cy: v[1], r: v[2] }
        }
        "rect" => {
            let v = parse_numbers(rest, 2)?;
            Region::Rect { s: v[0], t: v[1] }
        }
        "halfdisc" => Region::HalfDisc { r: parse_numbers(rest, 1)?[0] },
        "slitdisc" => {
            let v = parse_numbers(rest, 4)?;
            Region::SlitDisc { cx: v[0], cy: v[1], r: v[2], angle: v[3] }
        }
        "poly" => {
            let text = fs::read_to_string(rest).with_context(|| format!("reading polygon {rest}"))?;
            let points: Vec<[f64; 2]> = serde_json::from_str(&text).context("polygon file must hold [[x, y], ...]")?;
            ensure!(points.len() >= 3, "a polygon needs three points");
            Region::Polygon { points }
        }
        other => bail!("unknown region kind {other:?}"),
    })
}

/// Natural center of a region for angular arcs.
fn region_center(r: &Region) -> C64 {
    match r {
        Region::Disc { cx, cy, .. } | Region::SlitDisc { cx, cy, .. } => C64::new(*cx, *cy),
        Region::Rect { t, .. } => C64::new(0.0, 0.5 * t),
        Region::HalfDisc { .. } => C64::new(0.0, 0.0),
        Region::Polygon { points } => {
            let n = points.len() as f64;
            C64::new(points.iter().map(|p| p[0]).sum::<f64>() / n, points.iter().map(|p| p[1]).sum::<f64>() / n)
        }
    }
}

fn arc_pairs(d: &DiscreteDomain, arc: &[f64], center: Option<&[f64]>) -> Result<Vec<usize>> {
    ensure!(arc.len() == 2, "--arc takes two angles A,B");
    ensure!(center.is_none_or(|c| c.len() == 2), "--center takes two coordinates x,y");
    let c = match center {
        Some(c) => C64::new(c[0], c[1]),
        None => region_center(d.region()),
    };
    let set = pairs_in_angle(d, c, arc[0], arc[1]);
    ensure!(!set.is_empty(), "the arc holds no boundary pairs");
    Ok(set)
}

fn csv_writer(path: &Path, header: &str) -> Result<impl Write> {
    let mut w = std::io::BufWriter::new(fs::File::create(path).with_context(|| format!("creating {}", path.display()))?);
    writeln!(w, "{header}")?;
    Ok(w)
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, format!("{text}\n"))?,
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{text}") {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                r => r?,
            }
        }
    }
    Ok(())
}
