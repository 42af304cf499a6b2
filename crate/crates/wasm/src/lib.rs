//! Browser bindings: small wrappers that run the layout engine in wasm and
//! hand SVG strings or energy curves back to the page.

use wasm_bindgen::prelude::*;

use hexfr::cn::{cn_initial_placement, default_cn_iters, CnParams};
use hexfr::energy::{default_k, ForceParams, DEFAULT_EPS_RATIO};
use hexfr::graph::Graph;
use hexfr::render;
use hexfr::solve::{pipeline, InitMethod, PipelineConfig, SolverKind};
use hexfr::{parse_edge_list, parse_generator_spec, parse_matrix_market};

fn load_graph(spec: &str) -> Result<Graph, String> {
    let trimmed = spec.trim();
    let graph = if trimmed.starts_with("%%MatrixMarket") {
        parse_matrix_market(trimmed).map_err(|e| e.to_string())
    } else if !trimmed.contains('\n') && trimmed.contains(':') {
        parse_generator_spec(trimmed).map_err(|e| e.to_string())
    } else {
        parse_edge_list(trimmed).map_err(|e| e.to_string())
    }?;
    if graph.n() > 20_000 {
        return Err(format!("{} vertices is too large for the demo", graph.n()));
    }
    Ok(graph)
}

fn config(k: f64, n: usize, iters: u32) -> PipelineConfig {
    let k = if k > 0.0 { k } else { default_k(n) };
    PipelineConfig {
        force: Some(ForceParams { k, eps_r: DEFAULT_EPS_RATIO * k }),
        solver_iters: (iters > 0).then_some(iters as usize),
        ..PipelineConfig::default()
    }
}

fn run(
    spec: &str,
    init: &str,
    solver: &str,
    iters: u32,
    seed: u64,
    k: f64,
) -> Result<(Graph, hexfr::solve::Trace), String> {
    let g = load_graph(spec)?;
    let init = match init {
        "random" => InitMethod::Random,
        "sa" => InitMethod::Sa,
        "cn" => InitMethod::Cn,
        other => return Err(format!("unknown init '{other}'")),
    };
    let solver = match solver {
        "fr" => SolverKind::Fr,
        "lbfgs" => SolverKind::Lbfgs,
        other => return Err(format!("unknown solver '{other}'")),
    };
    let cfg = config(k, g.n(), iters);
    let mut traces =
        pipeline(&g, init, solver, &[seed], &cfg).map_err(|e| e.to_string())?;
    Ok((g, traces.pop().expect("one trace per seed")))
}

/// Runs one init/solver pipeline and returns the final layout as an SVG
/// document. Pass `k <= 0` for the default spring constant, `iters = 0` for
/// the default budget.
#[wasm_bindgen]
pub fn layout_svg(
    spec: &str,
    init: &str,
    solver: &str,
    iters: u32,
    seed: u64,
    k: f64,
) -> Result<String, JsValue> {
    let (g, trace) = run(spec, init, solver, iters, seed, k).map_err(js_err)?;
    Ok(render::layout_svg(&g, &trace.layout))
}

/// Same pipeline, but returns the recorded energy values (one per
/// iteration, starting at the initial layout) for plotting.
#[wasm_bindgen]
pub fn energy_curve(
    spec: &str,
    init: &str,
    solver: &str,
    iters: u32,
    seed: u64,
    k: f64,
) -> Result<Vec<f64>, JsValue> {
    let (_, trace) = run(spec, init, solver, iters, seed, k).map_err(js_err)?;
    Ok(trace.records.iter().map(|r| r.f).collect())
}

/// Renders the lattice placement stopped at `fraction` of its iteration
/// budget, to step through how the initial placement untangles.
#[wasm_bindgen]
pub fn placement_stage_svg(
    spec: &str,
    seed: u64,
    fraction: f64,
    k: f64,
) -> Result<String, JsValue> {
    let g = load_graph(spec).map_err(js_err)?;
    if !(0.0..=1.0).contains(&fraction) {
        return Err(js_err("fraction must be in [0, 1]".into()));
    }
    let k = if k > 0.0 { k } else { default_k(g.n()) };
    let p = ForceParams { k, eps_r: DEFAULT_EPS_RATIO * k };
    let full = default_cn_iters(g.n(), g.edge_count());
    let budget = ((full as f64 * fraction).round() as usize).min(full);
    let cp = CnParams { n_iter: Some(budget), seed, ..CnParams::default() };
    let xs = cn_initial_placement(&g, &p, &cp);
    Ok(render::layout_svg(&g, &xs))
}

fn js_err(message: String) -> JsValue {
    JsValue::from_str(&message)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_loading_sniffs_formats() {
        assert_eq!(load_graph("cycle:8").unwrap().n(), 8);
        assert_eq!(load_graph("1 2\n2 3\n").unwrap().n(), 3);
        let mtx = "%%MatrixMarket matrix coordinate pattern symmetric\n3 3 2\n2 1\n3 2\n";
        assert_eq!(load_graph(mtx).unwrap().n(), 3);
        assert!(load_graph("nonsense").is_err());
    }

    #[test]
    fn curves_and_svgs_come_back() {
        let curve = energy_curve("cycle:16", "cn", "lbfgs", 10, 1, 0.0).unwrap();
        assert!(curve.len() >= 2 && curve.last().unwrap() <= curve.first().unwrap());
        let svg = layout_svg("cycle:16", "random", "fr", 10, 1, 0.0).unwrap();
        assert_eq!(svg.matches("<circle").count(), 16);
        let stage = placement_stage_svg("cycle:16", 1, 0.5, 0.0).unwrap();
        assert_eq!(stage.matches("<circle").count(), 16);
    }
}
