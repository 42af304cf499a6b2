//! Final-placement solvers: the classic force simulation and L-BFGS over the
//! flattened layout, plus the init-then-solve pipeline used by the bench
//! harness.
//!
//! Both solvers minimize the total energy (plus the gravity term when the
//! graph is disconnected) and emit a per-iteration [`Trace`].

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cn::{cn_initial_placement, CnParams};
use crate::energy::{gravity_energy_and_gradient, total_energy, ForceParams, GravityConfig};
use crate::geom::Vec2;
use crate::graph::{ComponentPartition, Graph};
use crate::sa::{sa_initial_placement, SaParams};

/// Distances below this are clamped inside solver gradient assembly so
/// coincident or near-coincident points never produce non-finite steps.
pub const MIN_DISTANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("non-finite position at iteration {iter}")]
    NonFinitePosition { iter: usize },
    #[error("initial layout has non-finite energy")]
    NonFiniteStart,
}

/// Shared solver knobs. `t0` is the force-simulation step temperature,
/// `memory` the L-BFGS history length, and `tol` the convergence threshold:
/// mean per-vertex displacement for the force simulation, gradient norm for
/// L-BFGS.
#[derive(Clone, Copy, Debug)]
pub struct SolverConfig {
    pub n_iter: usize,
    pub t0: f64,
    pub memory: usize,
    pub tol: f64,
    pub trace_every: usize,
}

impl SolverConfig {
    pub fn new(n_iter: usize, p: &ForceParams) -> Self {
        SolverConfig { n_iter, t0: 0.1, memory: 10, tol: 1e-6 * p.k, trace_every: 1 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceRecord {
    pub iter: usize,
    pub f: f64,
    pub elapsed_ms: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    MaxIters,
    Converged,
    GradientNorm,
    LineSearchFailed,
}

impl std::fmt::Display for Termination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Termination::MaxIters => "max-iters",
            Termination::Converged => "converged",
            Termination::GradientNorm => "gradient-norm",
            Termination::LineSearchFailed => "line-search-failed",
        };
        f.write_str(s)
    }
}

/// Energy samples, the final layout, and why the solver stopped.
#[derive(Clone, Debug)]
pub struct Trace {
    pub records: Vec<TraceRecord>,
    pub layout: Vec<Vec2>,
    pub termination: Termination,
}

impl Trace {
    pub fn initial_f(&self) -> f64 {
        self.records.first().map(|r| r.f).unwrap_or(f64::NAN)
    }

    pub fn final_f(&self) -> f64 {
        self.records.last().map(|r| r.f).unwrap_or(f64::NAN)
    }
}

#[cfg(not(target_arch = "wasm32"))]
#[derive(Clone, Copy)]
struct Stopwatch(std::time::Instant);

#[cfg(not(target_arch = "wasm32"))]
impl Stopwatch {
    fn start() -> Self {
        Stopwatch(std::time::Instant::now())
    }
    fn elapsed_ms(&self) -> f64 {
        self.0.elapsed().as_secs_f64() * 1e3
    }
}

#[cfg(target_arch = "wasm32")]
#[derive(Clone, Copy)]
struct Stopwatch;

#[cfg(target_arch = "wasm32")]
impl Stopwatch {
    fn start() -> Self {
        Stopwatch
    }
    fn elapsed_ms(&self) -> f64 {
        0.0
    }
}

struct Model<'a> {
    g: &'a Graph,
    p: ForceParams,
    gravity: Option<(ComponentPartition, Vec2)>,
    weight_scratch: Vec<f64>,
}

impl<'a> Model<'a> {
    fn new(g: &'a Graph, p: ForceParams) -> Self {
        let parts = g.connected_components();
        let gravity =
            (parts.m() > 1).then(|| (parts, GravityConfig::default().center));
        Model { g, p, gravity, weight_scratch: vec![0.0; g.n()] }
    }

    fn objective(&self, xs: &[Vec2]) -> f64 {
        let mut f = total_energy(self.g, xs, &self.p);
        if let Some((parts, center)) = &self.gravity {
            f += gravity_energy_and_gradient(parts, xs, *center).0;
        }
        f
    }

    /// Full clamped gradient: each pair is visited once and its force applied
    /// to both endpoints, in ascending pair order.
    fn gradient_into(&mut self, xs: &[Vec2], grad: &mut [Vec2]) {
        let n = self.g.n();
        let (k, eps) = (self.p.k, self.p.eps_r);
        let k2 = k * k;
        grad.fill(Vec2::ZERO);
        for i in 0..n {
            for &(j, w) in self.g.neighbors(i) {
                if j > i {
                    self.weight_scratch[j] = w;
                }
            }
            for j in i + 1..n {
                let delta = xs[i] - xs[j];
                let a = self.weight_scratch[j];
                self.weight_scratch[j] = 0.0;
                let d = delta.norm();
                if d == 0.0 {
                    continue;
                }
                let de = d.max(MIN_DISTANCE);
                let coeff = a * de / k - k2 / (de * (de + eps));
                let force = coeff * delta;
                grad[i] += force;
                grad[j] -= force;
            }
        }
        if let Some((parts, center)) = &self.gravity {
            let (_, gravity_grad) = gravity_energy_and_gradient(parts, xs, *center);
            for (gi, pull) in grad.iter_mut().zip(gravity_grad) {
                *gi += pull;
            }
        }
    }
}

/// Force simulation: every iteration computes all vertex gradients from the
/// same snapshot, then moves each vertex a step of length `t` along its
/// normalized negative gradient, with `t` decaying linearly to zero. Stops
/// early once the mean per-vertex displacement drops below `tol`.
pub fn fr_solve(
    g: &Graph,
    x0: &[Vec2],
    p: &ForceParams,
    sc: &SolverConfig,
) -> Result<Trace, SolveError> {
    assert_eq!(x0.len(), g.n(), "layout size must match vertex count");
    assert!(sc.n_iter >= 1 && sc.trace_every >= 1);
    let watch = Stopwatch::start();
    let mut model = Model::new(g, *p);
    let mut xs = x0.to_vec();
    let mut grad = vec![Vec2::ZERO; g.n()];
    let mut records =
        vec![TraceRecord { iter: 0, f: model.objective(&xs), elapsed_ms: watch.elapsed_ms() }];
    let mut termination = Termination::MaxIters;

    for m in 0..sc.n_iter {
        let t = sc.t0 * (1.0 - m as f64 / sc.n_iter as f64);
        model.gradient_into(&xs, &mut grad);
        let mut displaced = 0.0;
        for (x, gi) in xs.iter_mut().zip(&grad) {
            let norm = gi.norm();
            if norm >= 1e-12 {
                *x -= (t / norm) * *gi;
                displaced += t;
            }
        }
        if xs.iter().any(|x| !x.is_finite()) {
            return Err(SolveError::NonFinitePosition { iter: m });
        }
        let iter = m + 1;
        let converged = (displaced / g.n() as f64) < sc.tol;
        let last = converged || iter == sc.n_iter;
        if iter % sc.trace_every == 0 || last {
            records.push(TraceRecord {
                iter,
                f: model.objective(&xs),
                elapsed_ms: watch.elapsed_ms(),
            });
        }
        if converged {
            termination = Termination::Converged;
            break;
        }
    }

    Ok(Trace { records, layout: xs, termination })
}

/// Anything L-BFGS can minimize: a value, or a value with its gradient.
pub trait Objective {
    fn value(&mut self, x: &[f64]) -> f64;
    fn value_and_grad(&mut self, x: &[f64]) -> (f64, Vec<f64>);
}

/// Options for the generic L-BFGS driver.
#[derive(Clone, Copy, Debug)]
pub struct LbfgsOptions {
    pub max_iters: usize,
    pub memory: usize,
    pub grad_tol: f64,
}

/// Result of [`lbfgs_minimize`].
pub struct LbfgsOutcome {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub termination: Termination,
}

const ARMIJO_C1: f64 = 1e-4;
const MAX_BACKTRACKS: u32 = 60;

/// Limited-memory BFGS with two-loop recursion and Armijo backtracking.
/// Calls `on_iter(iteration, f)` after every accepted step; the recorded
/// values are non-increasing by the sufficient-decrease condition.
pub fn lbfgs_minimize<O: Objective>(
    obj: &mut O,
    x0: Vec<f64>,
    opts: &LbfgsOptions,
    mut on_iter: impl FnMut(usize, f64),
) -> Result<LbfgsOutcome, SolveError> {
    let mut x = x0;
    let (mut f, mut grad) = obj.value_and_grad(&x);
    if !f.is_finite() {
        return Err(SolveError::NonFiniteStart);
    }

    let mut history: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();
    let mut gamma = 1.0;
    let mut termination = Termination::MaxIters;
    let mut iterations = 0;

    for it in 1..=opts.max_iters {
        let grad_norm = norm(&grad);
        if grad_norm < opts.grad_tol {
            termination = Termination::GradientNorm;
            break;
        }

        let mut dir = two_loop_direction(&grad, &history, gamma);
        let mut slope = dot(&dir, &grad);
        if slope >= 0.0 {
            // Fall back to steepest descent if the approximation misfires.
            dir = grad.iter().map(|g| -g).collect();
            slope = -grad_norm * grad_norm;
        }

        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let trial: Vec<f64> =
                x.iter().zip(&dir).map(|(xi, di)| xi + alpha * di).collect();
            let f_trial = obj.value(&trial);
            if f_trial <= f + ARMIJO_C1 * alpha * slope {
                accepted = Some(trial);
                break;
            }
            alpha *= 0.5;
        }
            let Some(x_new) = accepted else {
            termination = Termination::LineSearchFailed;
            break;
        };

        let (f_new, grad_new) = obj.value_and_grad(&x_new);
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = grad_new.iter().zip(&grad).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-10 * norm(&s) * norm(&y) {
            let yy = dot(&y, &y);
            gamma = sy / yy;
            if history.len() == opts.memory {
                history.pop_front();
            }
            history.push_back((s, y, 1.0 / sy));
        }

        x = x_new;
        f = f_new;
        grad = grad_new;
        iterations = it;
        on_iter(it, f);
    }

    Ok(LbfgsOutcome { x, f, iterations, termination })
}

fn two_loop_direction(
    grad: &[f64],
    history: &VecDeque<(Vec<f64>, Vec<f64>, f64)>,
    gamma: f64,
) -> Vec<f64> {
    let mut q: Vec<f64> = grad.to_vec();
    let mut alphas = Vec::with_capacity(history.len());
    for (s, y, rho) in history.iter().rev() {
        let a = rho * dot(s, &q);
        for (qi, yi) in q.iter_mut().zip(y) {
            *qi -= a * yi;
        }
        alphas.push(a);
    }
    for qi in q.iter_mut() {
        *qi *= gamma;
    }
    for ((s, y, rho), a) in history.iter().zip(alphas.into_iter().rev()) {
        let b = rho * dot(y, &q);
        for (qi, si) in q.iter_mut().zip(s) {
            *qi += (a - b) * si;
        }
    }
    for qi in q.iter_mut() {
        *qi = -*qi;
    }
    q
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

struct LayoutObjective<'a> {
    model: Model<'a>,
    xs: Vec<Vec2>,
}

impl LayoutObjective<'_> {
    fn unflatten(&mut self, x: &[f64]) {
        for (pt, pair) in self.xs.iter_mut().zip(x.chunks_exact(2)) {
            *pt = Vec2::new(pair[0], pair[1]);
        }
    }
}

impl Objective for LayoutObjective<'_> {
    fn value(&mut self, x: &[f64]) -> f64 {
        self.unflatten(x);
        self.model.objective(&self.xs)
    }

    fn value_and_grad(&mut self, x: &[f64]) -> (f64, Vec<f64>) {
        self.unflatten(x);
        let f = self.model.objective(&self.xs);
        let mut grad = vec![Vec2::ZERO; self.xs.len()];
        self.model.gradient_into(&self.xs, &mut grad);
        let flat = grad.iter().flat_map(|g| [g.x, g.y]).collect();
        (f, flat)
    }
}

/// L-BFGS over the flattened layout vector. Recorded energies are monotone
/// non-increasing; stops on the iteration budget, a gradient norm below
/// `tol`, or a failed line search.
pub fn lbfgs_solve(
    g: &Graph,
    x0: &[Vec2],
    p: &ForceParams,
    sc: &SolverConfig,
) -> Result<Trace, SolveError> {
    assert_eq!(x0.len(), g.n(), "layout size must match vertex count");
    assert!(sc.n_iter >= 1 && sc.trace_every >= 1);
    let watch = Stopwatch::start();
    let mut obj = LayoutObjective { model: Model::new(g, *p), xs: vec![Vec2::ZERO; g.n()] };
    let flat: Vec<f64> = x0.iter().flat_map(|v| [v.x, v.y]).collect();

    let mut records = Vec::new();
    let opts = LbfgsOptions { max_iters: sc.n_iter, memory: sc.memory, grad_tol: sc.tol };
    let f0 = obj.value(&flat);
    if !f0.is_finite() {
        return Err(SolveError::NonFiniteStart);
    }
    records.push(TraceRecord { iter: 0, f: f0, elapsed_ms: watch.elapsed_ms() });

    let trace_every = sc.trace_every;
    let outcome = {
        let records = &mut records;
        lbfgs_minimize(&mut obj, flat, &opts, |it, f| {
            if it % trace_every == 0 {
                records.push(TraceRecord { iter: it, f, elapsed_ms: watch.elapsed_ms() });
            }
        })?
    };
    if records.last().map(|r| r.iter) != Some(outcome.iterations) {
        records.push(TraceRecord {
            iter: outcome.iterations,
            f: outcome.f,
            elapsed_ms: watch.elapsed_ms(),
        });
    }

    let layout: Vec<Vec2> =
        outcome.x.chunks_exact(2).map(|pair| Vec2::new(pair[0], pair[1])).collect();
    Ok(Trace { records, layout, termination: outcome.termination })
}

/// Uniform layout over the unit square, deterministic per seed.
pub fn random_layout(n: usize, seed: u64) -> Vec<Vec2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| Vec2::new(rng.random::<f64>(), rng.random::<f64>())).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitMethod {
    Random,
    Sa,
    Cn,
}

impl InitMethod {
    pub fn name(self) -> &'static str {
        match self {
            InitMethod::Random => "random",
            InitMethod::Sa => "sa",
            InitMethod::Cn => "cn",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverKind {
    Fr,
    Lbfgs,
}

impl SolverKind {
    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Fr => "fr",
            SolverKind::Lbfgs => "lbfgs",
        }
    }
}

/// Pipeline configuration: model parameters plus per-stage overrides.
#[derive(Clone, Debug)]
pub struct PipelineConfig {
    /// Force parameters; `None` picks `k = 1/sqrt(n)` with the default guard.
    pub force: Option<ForceParams>,
    /// Solver iterations; `None` uses 50 for random starts and 45 after a
    /// placement stage, matching the convention that the placement costs
    /// about as much as a few solver iterations.
    pub solver_iters: Option<usize>,
    pub fr_t0: f64,
    pub cn: CnParams,
    pub sa: SaParams,
    pub tol: Option<f64>,
    pub trace_every: usize,
    pub memory: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            force: None,
            solver_iters: None,
            fr_t0: 0.1,
            cn: CnParams::default(),
            sa: SaParams::default(),
            tol: None,
            trace_every: 1,
            memory: 10,
        }
    }
}

impl PipelineConfig {
    pub fn force_params(&self, g: &Graph) -> ForceParams {
        self.force.unwrap_or_else(|| ForceParams::auto(g.n()))
    }

    pub fn solver_config(&self, init: InitMethod, p: &ForceParams) -> SolverConfig {
        let n_iter = self.solver_iters.unwrap_or(match init {
            InitMethod::Random => 50,
            InitMethod::Sa | InitMethod::Cn => 45,
        });
        SolverConfig {
            n_iter,
            t0: self.fr_t0,
            memory: self.memory,
            tol: self.tol.unwrap_or(1e-6 * p.k),
            trace_every: self.trace_every,
        }
    }
}

/// Produces the initial layout for one pipeline run.
pub fn initial_layout(
    g: &Graph,
    init: InitMethod,
    seed: u64,
    cfg: &PipelineConfig,
    p: &ForceParams,
) -> Vec<Vec2> {
    match init {
        InitMethod::Random => random_layout(g.n(), seed),
        InitMethod::Sa => {
            let sp = SaParams { seed, ..cfg.sa.clone() };
            sa_initial_placement(g, &sp)
        }
        InitMethod::Cn => {
            let cp = CnParams { seed, ..cfg.cn.clone() };
            cn_initial_placement(g, p, &cp)
        }
    }
}

/// Runs `init` then `solver` once per seed and returns the traces in seed
/// order.
pub fn pipeline(
    g: &Graph,
    init: InitMethod,
    solver: SolverKind,
    seeds: &[u64],
    cfg: &PipelineConfig,
) -> Result<Vec<Trace>, SolveError> {
    let p = cfg.force_params(g);
    let sc = cfg.solver_config(init, &p);
    seeds
        .iter()
        .map(|&seed| {
            let x0 = initial_layout(g, init, seed, cfg, &p);
            match solver {
                SolverKind::Fr => fr_solve(g, &x0, &p, &sc),
                SolverKind::Lbfgs => lbfgs_solve(g, &x0, &p, &sc),
            }
        })
        .collect()
}

/// Mean distance between cross-group pairs divided by mean distance between
/// same-group pairs; larger means the groups sit further apart than their
/// members do.
pub fn group_separation_ratio(xs: &[Vec2], labels: &[usize]) -> f64 {
    assert_eq!(xs.len(), labels.len());
    let (mut inter, mut intra) = ((0.0, 0usize), (0.0, 0usize));
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let d = (xs[i] - xs[j]).norm();
            if labels[i] == labels[j] {
                intra = (intra.0 + d, intra.1 + 1);
            } else {
                inter = (inter.0 + d, inter.1 + 1);
            }
        }
    }
    assert!(inter.1 > 0 && intra.1 > 0, "need both same-group and cross-group pairs");
    (inter.0 / inter.1 as f64) / (intra.0 / intra.1 as f64)
}
