//! Force-directed graph layout around the Fruchterman-Reingold energy model.
//!
//! The pieces, bottom to top:
//!
//! - [`graph`]: weighted undirected graphs, parsers ([`parse`]), generators,
//!   and the SuiteSparse download client ([`fetch`], feature `fetch`).
//! - [`energy`]: the pair potential, total energy, per-vertex gradients and
//!   Hessians, optimal rescaling, and the gravity term for disconnected
//!   inputs.
//! - [`hex`]: the unit hexagonal lattice and its occupancy bookkeeping.
//! - [`cn`]: coordinate-Newton initial placement on the lattice.
//! - [`sa`]: the simulated-annealing circle baseline.
//! - [`solve`]: the force simulation and L-BFGS final solvers plus the
//!   init-then-solve [`solve::pipeline`].
//! - [`render`]: SVG and CSV emitters.
//!
//! ```
//! use hexfr::{Graph, solve::{pipeline, InitMethod, SolverKind, PipelineConfig}};
//!
//! let g = Graph::cycle(30).unwrap();
//! let cfg = PipelineConfig::default();
//! let traces = pipeline(&g, InitMethod::Cn, SolverKind::Lbfgs, &[1], &cfg).unwrap();
//! assert!(traces[0].final_f() <= traces[0].initial_f());
//! ```

pub mod cn;
pub mod energy;
#[cfg(feature = "fetch")]
pub mod fetch;
pub mod geom;
pub mod graph;
pub mod hex;
pub mod parse;
pub mod render;
pub mod sa;
pub mod solve;

pub use energy::ForceParams;
pub use geom::Vec2;
pub use graph::{Graph, GraphError};
pub use parse::{parse_edge_list, parse_matrix_market, ParseError};

use graph::GraphError as GErr;

/// Parses a generator spec of the form `cycle:N`, `btree:DEPTH`, or
/// `grouped:N,GROUPS,EDGES,W_IN,W_OUT[,SEED]`. Shared by the CLI and the
/// browser demo.
pub fn parse_generator_spec(spec: &str) -> Result<Graph, GraphError> {
    let bad = |msg: String| GErr::InvalidParameter(msg);
    let (kind, args) = spec
        .split_once(':')
        .ok_or_else(|| bad(format!("generator spec '{spec}' needs the form kind:args")))?;
    match kind {
        "cycle" => {
            let n = args.parse().map_err(|_| bad(format!("bad cycle size '{args}'")))?;
            Graph::cycle(n)
        }
        "btree" => {
            let d = args.parse().map_err(|_| bad(format!("bad tree depth '{args}'")))?;
            Graph::binary_tree(d)
        }
        "grouped" => {
            let parts: Vec<&str> = args.split(',').collect();
            if parts.len() != 5 && parts.len() != 6 {
                return Err(bad(format!(
                    "grouped spec '{args}' needs n,groups,edges,w_in,w_out[,seed]"
                )));
            }
            let n = parts[0].parse().map_err(|_| bad(format!("bad n '{}'", parts[0])))?;
            let groups =
                parts[1].parse().map_err(|_| bad(format!("bad group count '{}'", parts[1])))?;
            let edges =
                parts[2].parse().map_err(|_| bad(format!("bad edge count '{}'", parts[2])))?;
            let w_in = parts[3].parse().map_err(|_| bad(format!("bad w_in '{}'", parts[3])))?;
            let w_out = parts[4].parse().map_err(|_| bad(format!("bad w_out '{}'", parts[4])))?;
            let seed = match parts.get(5) {
                Some(s) => s.parse().map_err(|_| bad(format!("bad seed '{s}'")))?,
                None => 1,
            };
            Graph::grouped_random(n, groups, edges, w_in, w_out, seed)
        }
        other => Err(bad(format!("unknown generator '{other}'"))),
    }
}
