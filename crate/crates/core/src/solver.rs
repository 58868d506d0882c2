//! Spectral radii and eigenpairs by regularization.
//!
//! For `s > 0` the perturbed map `h_s(x) = h(x) + s q(h(x)) u` sends the
//! cone into its interior, and its normalization `g_s = Psi_{su} o h` is a
//! Hilbert-metric contraction on bounded sets of the slice `{q = 1}`. Its
//! unique fixed point `x_s` satisfies `h_s(x_s) = lambda_s x_s` with
//! `lambda_s = cw(h_s)`. Since `h <= h_s <= h_t` for `s <= t`, `lambda_s`
//! decreases as `s` does and converges to `r_C(h) = cw(h)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cone::{hilbert_dist_interior, lattice_join, lower_ratio, sup_norm, upper_ratio, ConeVector, ExtendedRatio, SliceConfig};
use crate::error::{Error, Result};
use crate::operators::OperatorSpec;

/// Decreasing sequence `s_1 > s_2 > ... -> 0`.
#[derive(Clone, Debug, PartialEq)]
pub enum Schedule {
    /// `s_k = 1/k`.
    Harmonic,
    /// `s_k = ratio^(k-1)`.
    Geometric { ratio: f64 },
    Explicit(Vec<f64>),
}

impl Schedule {
    pub fn value(&self, k: usize) -> Option<f64> {
        debug_assert!(k >= 1);
        match self {
            Schedule::Harmonic => Some(1.0 / k as f64),
            Schedule::Geometric { ratio } => Some(ratio.powi(k as i32 - 1)),
            Schedule::Explicit(v) => v.get(k - 1).copied(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Schedule::Harmonic => Ok(()),
            Schedule::Geometric { ratio } if *ratio > 0.0 && *ratio < 1.0 => Ok(()),
            Schedule::Geometric { ratio } => Err(Error::InvalidArgument(format!("geometric ratio {ratio} not in (0,1)"))),
            Schedule::Explicit(v) => {
                if v.is_empty() || v.iter().any(|s| !(*s > 0.0) || !s.is_finite()) || v.windows(2).any(|w| w[1] >= w[0]) {
                    Err(Error::InvalidArgument("explicit schedule must be positive and strictly decreasing".into()))
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// Diagonal shift `h + alpha I` applied before regularizing. It leaves
/// eigenvectors unchanged and moves every eigenvalue by `alpha`, but makes
/// cyclic (imprimitive) dynamics aperiodic so the inner iteration does not
/// slow down to a rate of `1 - O(s)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Shift {
    None,
    /// Try without a shift; if an inner solve stalls, restart with `alpha`
    /// set to the last upper estimate of `r` (at most `||h||_C`).
    Auto,
    Fixed(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub schedule: Schedule,
    /// Hilbert-metric step size that ends an inner iteration.
    pub inner_tol: f64,
    /// Relative change `|lambda_k - lambda_{k+1}| / lambda` that ends the outer loop.
    pub outer_tol: f64,
    pub max_inner: usize,
    pub max_outer: usize,
    /// Unit `u` and gauge `q`; `None` means sup norm with `u = 1`.
    pub slice: Option<SliceConfig>,
    pub shift: Shift,
    /// Start each inner solve from the previous fixed point instead of `u`.
    pub warm_start: bool,
    /// Width below which the final Collatz-Wielandt bracket counts as closed.
    pub bracket_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            schedule: Schedule::Geometric { ratio: 0.5 },
            inner_tol: 1e-12,
            outer_tol: 1e-12,
            max_inner: 100_000,
            max_outer: 60,
            slice: None,
            shift: Shift::Auto,
            warm_start: true,
            bracket_tol: 1e-8,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        self.schedule.validate()?;
        for (name, v) in [("inner_tol", self.inner_tol), ("outer_tol", self.outer_tol), ("bracket_tol", self.bracket_tol)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidArgument(format!("{name} must be positive")));
            }
        }
        if self.max_inner == 0 || self.max_outer == 0 {
            return Err(Error::InvalidArgument("iteration caps must be positive".into()));
        }
        if let Shift::Fixed(a) = self.shift {
            if !(a >= 0.0) || !a.is_finite() {
                return Err(Error::InvalidArgument("shift must be nonnegative".into()));
            }
        }
        Ok(())
    }

    pub fn slice_for(&self, n: usize) -> Result<SliceConfig> {
        match &self.slice {
            None => Ok(SliceConfig::sup_norm(n)),
            Some(s) if s.dim() == n => Ok(s.clone()),
            Some(s) => Err(Error::DimensionMismatch { expected: n, found: s.dim() }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceEntry {
    pub s: f64,
    pub lambda: f64,
    pub inner_iters: usize,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenSolveResult {
    pub radius: f64,
    pub eigvec: ConeVector,
    /// `||h(x) - r x||_inf / ||x||_inf` at the returned vector.
    pub residual: f64,
    pub trace: Vec<TraceEntry>,
    pub bracket: (f64, f64),
    pub converged: bool,
    /// `r = 0`, certified by `h^n(1) = 0`.
    pub degenerate: bool,
    pub bracket_closed: bool,
    /// Sup-norm change of the slice point over the last outer step.
    pub eigvec_step: f64,
    pub shift: f64,
}

impl EigenSolveResult {
    pub fn bracket_width(&self) -> f64 {
        self.bracket.1 - self.bracket.0
    }
}

/// Fixed point of `g_s` together with `lambda_s`.
#[derive(Clone, Debug, PartialEq)]
pub struct InnerSolution {
    pub x: ConeVector,
    pub lambda: f64,
    pub iterations: usize,
    /// `||h_s(x) - lambda x||_inf / (lambda ||x||_inf)`.
    pub residual: f64,
}

/// `Psi_{su}(x) = Phi(x) / q(Phi(x))` with `Phi(x) = x + s q(x) u`.
pub fn normalized_shift(slice: &SliceConfig, s: f64, x: &ConeVector) -> Result<ConeVector> {
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    let qx = slice.q(x.coords());
    let phi: Vec<f64> = x.coords().iter().zip(slice.unit().coords()).map(|(v, u)| v + s * qx * u).collect();
    let qphi = slice.q(&phi);
    ConeVector::new(phi.into_iter().map(|v| v / qphi).collect())
}

/// Upper bound on `M((y+u)/(x+u))` in terms of `a = M(x/u)` and `b = M(y/x)`.
pub fn shifted_ratio_bound(x_over_u: f64, y_over_x: f64) -> f64 {
    (y_over_x.max(1.0) * x_over_u + 1.0) / (x_over_u + 1.0)
}

fn inner_fixed_point<F>(
    eval: &F,
    slice: &SliceConfig,
    s: f64,
    start: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<InnerSolution>
where
    F: Fn(&[f64], &mut [f64]),
{
    let n = start.len();
    let u = slice.unit().coords();
    let mut x = start.to_vec();
    let mut hx = vec![0.0; n];
    let mut next = vec![0.0; n];
    let mut step = f64::INFINITY;
    let mut lambda = 0.0;
    for it in 1..=max_iter {
        eval(&x, &mut hx);
        let qh = slice.q(&hx);
        if !(qh > 0.0) {
            return Err(Error::InvalidArgument("operator vanishes on an interior point".into()));
        }
        for i in 0..n {
            next[i] = hx[i] + s * qh * u[i];
        }
        lambda = slice.q(&next);
        next.iter_mut().for_each(|v| *v /= lambda);
        step = hilbert_dist_interior(&x, &next);
        std::mem::swap(&mut x, &mut next);
        if step < tol {
            eval(&x, &mut hx);
            let qh = slice.q(&hx);
            for i in 0..n {
                next[i] = hx[i] + s * qh * u[i];
            }
            let lambda = slice.q(&next);
            let residual = x.iter().zip(&next).map(|(xi, ni)| (ni - lambda * xi).abs()).fold(0.0, f64::max)
                / (lambda * sup_norm(&x));
            return Ok(InnerSolution { x: ConeVector::new(x)?, lambda, iterations: it, residual });
        }
    }
    Err(Error::InnerNotConverged { iterations: max_iter, last_step: step, lambda, last_iterate: x })
}

/// Fixed point of `g_s = Psi_{su} o h` on the slice, started from `u`.
pub fn regularized_inner_solve(spec: &OperatorSpec, s: f64, cfg: &SolverConfig) -> Result<InnerSolution> {
    cfg.validate()?;
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::InvalidArgument(format!("s must be positive, got {s}")));
    }
    let h = spec.restrict_to_cone();
    let slice = cfg.slice_for(h.dim())?;
    let start = slice.project(slice.unit())?;
    let eval = |x: &[f64], out: &mut [f64]| h.evaluate(x, out);
    inner_fixed_point(&eval, &slice, s, start.coords(), cfg.inner_tol, cfg.max_inner)
}

struct OuterRun {
    trace: Vec<TraceEntry>,
    x: Vec<f64>,
    previous_x: Vec<f64>,
    converged: bool,
}

fn bracket_at(h: &OperatorSpec, x: &[f64]) -> (f64, f64, Vec<f64>) {
    let mut hx = vec![0.0; x.len()];
    h.evaluate(x, &mut hx);
    let xv = ConeVector::new(x.to_vec()).expect("slice point is in the cone");
    let hv = ConeVector::new(hx.clone()).expect("image is in the cone");
    let lo = lower_ratio(&xv, &hv).map(ExtendedRatio::value).unwrap_or(0.0);
    let hi = upper_ratio(&xv, &hv).map(ExtendedRatio::value).unwrap_or(f64::INFINITY);
    (lo, hi, hx)
}

fn residual_of(x: &[f64], hx: &[f64], r: f64) -> f64 {
    let num = x.iter().zip(hx).map(|(xi, hi)| (hi - r * xi).abs()).fold(0.0, f64::max);
    num / sup_norm(x)
}

fn run_schedule(h: &OperatorSpec, alpha: f64, slice: &SliceConfig, cfg: &SolverConfig) -> std::result::Result<OuterRun, OuterRun> {
    let eval = |x: &[f64], out: &mut [f64]| {
        h.evaluate(x, out);
        if alpha > 0.0 {
            out.iter_mut().zip(x).for_each(|(o, v)| *o += alpha * v);
        }
    };
    let start = slice.project(slice.unit()).expect("unit is interior").into_coords();
    let mut x = start.clone();
    let mut previous_x = start.clone();
    let mut trace: Vec<TraceEntry> = Vec::new();
    for k in 1..=cfg.max_outer {
        let Some(s) = cfg.schedule.value(k) else { break };
        let from = if cfg.warm_start { &x } else { &start };
        let sol = match inner_fixed_point(&eval, slice, s, from, cfg.inner_tol, cfg.max_inner) {
            Ok(sol) => sol,
            Err(_) => return Err(OuterRun { trace, x, previous_x, converged: false }),
        };
        previous_x = std::mem::replace(&mut x, sol.x.into_coords());
        let lambda = sol.lambda - alpha;
        let (lo, hi, hx) = bracket_at(h, &x);
        trace.push(TraceEntry { s, lambda, inner_iters: sol.iterations, bracket_lo: lo, bracket_hi: hi, residual: residual_of(&x, &hx, lambda) });
        if let [.., prev, last] = trace.as_slice() {
            if (prev.lambda - last.lambda).abs() <= cfg.outer_tol * last.lambda.abs() {
                return Ok(OuterRun { trace, x, previous_x, converged: true });
            }
        }
    }
    Ok(OuterRun { trace, x, previous_x, converged: false })
}

/// A nonzero `x` with `h(x) = 0`, found as the last nonzero iterate of
/// `1, h(1), ..., h^n(1)` when `h^n(1) = 0`. Then `h^n` vanishes on the
/// cone and `r_C(h) = 0` exactly.
fn null_orbit(h: &OperatorSpec) -> Option<Vec<f64>> {
    let n = h.dim();
    let mut x = vec![1.0; n];
    let mut y = vec![0.0; n];
    for _ in 0..n {
        h.evaluate(&x, &mut y);
        let ny = sup_norm(&y);
        if ny == 0.0 {
            return Some(x);
        }
        x.iter_mut().zip(&y).for_each(|(xi, yi)| *xi = yi / ny);
    }
    None
}

/// Cone spectral radius and eigenvector by the regularized scheme.
pub fn eigen_solve(spec: &OperatorSpec, cfg: &SolverConfig) -> Result<EigenSolveResult> {
    cfg.validate()?;
    let h = spec.restrict_to_cone();
    let n = h.dim();
    let slice = cfg.slice_for(n)?;
    if let Some(x) = null_orbit(&h) {
        let eigvec = slice.project(&ConeVector::new(x)?)?;
        return Ok(EigenSolveResult {
            radius: 0.0,
            eigvec,
            residual: 0.0,
            trace: Vec::new(),
            bracket: (0.0, 0.0),
            converged: true,
            degenerate: true,
            bracket_closed: true,
            eigvec_step: 0.0,
            shift: 0.0,
        });
    }
    let norm = h.operator_norm_on_cone();
    // `None` means: shift by the last `lambda` of the failed attempt, an
    // upper bound on `r` that is usually much closer to it than `||h||_C`.
    let shifts: Vec<Option<f64>> = match cfg.shift {
        Shift::None => vec![Some(0.0)],
        Shift::Fixed(a) => vec![Some(a)],
        Shift::Auto => vec![Some(0.0), None, None, None],
    };
    let mut outcome = None;
    let mut derived = norm;
    for (attempt, choice) in shifts.iter().enumerate() {
        let alpha = choice.unwrap_or(derived);
        match run_schedule(&h, alpha, &slice, cfg) {
            Ok(run) => {
                outcome = Some((run, alpha));
                break;
            }
            Err(run) if attempt + 1 == shifts.len() => outcome = Some((run, alpha)),
            Err(run) => {
                derived = run.trace.last().map(|t| t.lambda).filter(|l| *l > 0.0 && *l < derived).unwrap_or(derived);
            }
        }
    }
    let (run, alpha) = outcome.expect("at least one attempt");
    let eigvec_step = run.x.iter().zip(&run.previous_x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let last_lambda = run.trace.last().map(|t| t.lambda).unwrap_or(f64::INFINITY);
    let (lo, hi, hx) = bracket_at(&h, &run.x);
    // M(h(x)/x) <= lambda_s at the fixed point, and both bound r from above.
    let radius = last_lambda.min(hi);
    let residual = residual_of(&run.x, &hx, radius);
    let x = run.x;
    let eigvec = ConeVector::new(x)?;
    let bracket_closed = hi - lo <= cfg.bracket_tol * radius.max(1.0);
    Ok(EigenSolveResult {
        radius,
        eigvec,
        residual,
        trace: run.trace,
        bracket: (lo, hi),
        converged: run.converged,
        degenerate: false,
        bracket_closed,
        eigvec_step,
        shift: alpha,
    })
}

/// Orbit growth diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthReport {
    pub rate: f64,
    /// `||h^{k+1}(x)|| / ||h^k(x)||` for each step.
    pub ratios: Vec<f64>,
    pub hit_zero: bool,
    /// Number of trailing steps averaged.
    pub window: usize,
}

fn lcm_up_to(n: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    (1..=n).fold(1, |acc, k| acc / gcd(acc, k) * k)
}

/// Tail average of log-norm increments. The window is a multiple of
/// `lcm(1..=n)` when possible, so periodic regimes average out exactly.
fn orbit_growth<F>(eval: F, x0: &[f64], horizon: usize) -> Result<GrowthReport>
where
    F: Fn(&[f64], &mut [f64]),
{
    if horizon < 2 {
        return Err(Error::InvalidArgument("horizon must be at least 2".into()));
    }
    let n = x0.len();
    let norm0 = sup_norm(x0);
    if norm0 == 0.0 {
        return Err(Error::ZeroVector);
    }
    let mut x: Vec<f64> = x0.iter().map(|v| v / norm0).collect();
    let mut y = vec![0.0; n];
    let mut ratios = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        eval(&x, &mut y);
        let ny = sup_norm(&y);
        ratios.push(ny);
        if ny == 0.0 {
            return Ok(GrowthReport { rate: 0.0, ratios, hit_zero: true, window: 0 });
        }
        x.iter_mut().zip(&y).for_each(|(xi, yi)| *xi = yi / ny);
    }
    let half = horizon / 2;
    let period = lcm_up_to(n.min(8));
    let window = if half >= period { half / period * period } else { half.max(1) };
    let tail = &ratios[horizon - window..];
    let mean_log = tail.iter().map(|r| r.ln()).sum::<f64>() / window as f64;
    Ok(GrowthReport { rate: mean_log.exp(), ratios, hit_zero: false, window })
}

/// Growth rate `limsup ||h^k(x0)||^{1/k}` of a cone orbit.
pub fn growth_rate(spec: &OperatorSpec, x0: &ConeVector, horizon: usize) -> Result<GrowthReport> {
    let h = spec.restrict_to_cone();
    if x0.dim() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), found: x0.dim() });
    }
    orbit_growth(|x, out| h.evaluate(x, out), x0.coords(), horizon)
}

/// Growth rate of an orbit of a whole-space map started anywhere in `R^n`.
pub fn growth_rate_whole(spec: &OperatorSpec, x0: &[f64], horizon: usize) -> Result<GrowthReport> {
    if !matches!(spec, OperatorSpec::WholeSpace(_)) {
        return Err(Error::InvalidArgument("whole-space growth needs a whole-space operator".into()));
    }
    if x0.len() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), found: x0.len() });
    }
    orbit_growth(|x, out| spec.evaluate(x, out), x0, horizon)
}

/// `min_{k <= k_max} ||h^k||_C^{1/k}`, an upper bound on the Bonsall radius.
/// Uses `||h^k||_C = ||h^k(1)||_inf`, accumulated in log form.
pub fn bonsall_estimate(spec: &OperatorSpec, k_max: usize) -> Result<f64> {
    Ok(bonsall_until(spec, k_max, 0.0)?.value)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BonsallEstimate {
    pub value: f64,
    /// Powers examined.
    pub steps: usize,
}

/// Like [`bonsall_estimate`], but stops at the first `k` whose bound is at
/// most `target`.
pub fn bonsall_until(spec: &OperatorSpec, k_max: usize, target: f64) -> Result<BonsallEstimate> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be positive".into()));
    }
    let h = spec.restrict_to_cone();
    let n = h.dim();
    let mut x = vec![1.0; n];
    let mut y = vec![0.0; n];
    let mut log_norm = 0.0;
    let mut best = f64::INFINITY;
    let log_target = target.ln();
    for k in 1..=k_max {
        h.evaluate(&x, &mut y);
        let ny = sup_norm(&y);
        if ny == 0.0 {
            return Ok(BonsallEstimate { value: 0.0, steps: k });
        }
        log_norm += ny.ln();
        best = best.min(log_norm / k as f64);
        if best <= log_target {
            return Ok(BonsallEstimate { value: best.exp(), steps: k });
        }
        x.iter_mut().zip(&y).for_each(|(xi, yi)| *xi = yi / ny);
    }
    Ok(BonsallEstimate { value: best.exp(), steps: k_max })
}

/// `M(h(u)/u)` for interior `u`, an upper bound on `cw(h)` and `r_C(h)`.
pub fn cw_upper(spec: &OperatorSpec, u: &ConeVector) -> Result<ExtendedRatio> {
    u.require_interior()?;
    let h = spec.restrict_to_cone();
    upper_ratio(u, &h.apply(u)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ContractionEstimate {
    pub radius: f64,
    pub m0: f64,
    pub mu: f64,
    pub c: f64,
}

/// Contraction factor of `Psi_u` on the Hilbert ball `B_R(v)` with
/// `M0 = M(v/u)`: `mu = 1/(e^R M0 + 1)`, `c = log(mu + (1-mu) e^{2R}) / (2R)`.
pub fn contraction_constant(radius: f64, m0: f64) -> Result<ContractionEstimate> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidArgument(format!("ball radius must be positive, got {radius}")));
    }
    if !(m0 > 0.0) || !m0.is_finite() {
        return Err(Error::InvalidArgument(format!("M0 must be positive, got {m0}")));
    }
    let mu = 1.0 / (radius.exp() * m0 + 1.0);
    // log(mu + (1-mu) e^{2R}) = log1p((1-mu) expm1(2R))
    let c = ((1.0 - mu) * (2.0 * radius).exp_m1()).ln_1p() / (2.0 * radius);
    Ok(ContractionEstimate { radius, m0, mu, c })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JoinResult {
    pub z: ConeVector,
    /// `max_i (r z_i - h(z)_i)^+ / (r ||z||_inf)`; zero when `h(z) >= r z`.
    pub defect: f64,
}

/// Super-eigenvector `z = x ∨ h(x)/r ∨ ... ∨ h^{m-1}(x)/r^{m-1}` from a
/// point with `h^m(x) = r^m x`.
pub fn super_eigen_join(spec: &OperatorSpec, m: usize, x_m: &ConeVector, r: f64, tol: f64) -> Result<JoinResult> {
    if m == 0 {
        return Err(Error::InvalidArgument("period must be positive".into()));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!("r must be positive, got {r}")));
    }
    if x_m.is_zero() {
        return Err(Error::ZeroVector);
    }
    let h = spec.restrict_to_cone();
    let mut orbit = Vec::with_capacity(m);
    let mut cur = x_m.clone();
    let mut z = x_m.clone();
    orbit.push(cur.clone());
    for j in 1..=m {
        cur = h.apply(&cur)?;
        if j < m {
            z = lattice_join(&z, &cur.scaled(r.powi(-(j as i32)))?)?;
            orbit.push(cur.clone());
        }
    }
    let rm = r.powi(m as i32);
    let residual = cur.coords().iter().zip(x_m.coords()).map(|(a, b)| (a - rm * b).abs()).fold(0.0, f64::max);
    let bound = tol * rm * x_m.sup_norm();
    if residual > bound {
        return Err(Error::Precondition { residual, bound });
    }
    let hz = h.apply(&z)?;
    let defect = z
        .coords()
        .iter()
        .zip(hz.coords())
        .map(|(zi, hi)| (r * zi - hi).max(0.0))
        .fold(0.0, f64::max)
        / (r * z.sup_norm());
    Ok(JoinResult { z, defect })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WholeSpaceRadius {
    pub r_x: f64,
    pub r_c: f64,
    pub r_minus_c: f64,
    pub cone: EigenSolveResult,
    pub negative_cone: EigenSolveResult,
}

/// `r(h) = max(r_C(h), r_{-C}(h))` for a whole-space map.
pub fn whole_space_radius(spec: &OperatorSpec, cfg: &SolverConfig) -> Result<WholeSpaceRadius> {
    let negative = spec.restrict_to_negative_cone()?;
    let cone = eigen_solve(&spec.restrict_to_cone(), cfg)?;
    let negative_cone = eigen_solve(&negative, cfg)?;
    Ok(WholeSpaceRadius {
        r_x: cone.radius.max(negative_cone.radius),
        r_c: cone.radius,
        r_minus_c: negative_cone.radius,
        cone,
        negative_cone,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum UniquenessOutcome {
    /// `r_X < 1`: every sampled orbit decays geometrically.
    Contracting { max_rate: f64, rates: Vec<f64>, verified: bool },
    /// `r_X = 1`: a nonzero fixed point in `C` or `-C`.
    NonUnique { witness: Vec<f64>, residual: f64, in_cone: bool },
    Expanding,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UniquenessReport {
    pub r_x: f64,
    pub r_c: f64,
    pub r_minus_c: f64,
    pub outcome: UniquenessOutcome,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UniquenessConfig {
    pub trials: usize,
    pub horizon: usize,
    pub seed: u64,
    /// Allowed excess of a measured decay rate over `r_X`.
    pub rate_slack: f64,
    /// `|r_X - 1|` below which the map counts as having eigenvalue 1.
    pub unit_tol: f64,
}

impl Default for UniquenessConfig {
    fn default() -> Self {
        Self { trials: 20, horizon: 2_000, seed: 0, rate_slack: 1e-4, unit_tol: 1e-8 }
    }
}

/// Checks that a whole-space map with `r_X < 1` contracts every orbit,
/// and that `r_X = 1` comes with a nonzero fixed point in `C ∪ (-C)`.
pub fn uniqueness_contraction_check(spec: &OperatorSpec, cfg: &SolverConfig, check: &UniquenessConfig) -> Result<UniquenessReport> {
    let radii = whole_space_radius(spec, cfg)?;
    let n = spec.dim();
    let outcome = if (radii.r_x - 1.0).abs() <= check.unit_tol {
        let in_cone = (radii.r_c - 1.0).abs() <= (radii.r_minus_c - 1.0).abs();
        let v = if in_cone { &radii.cone.eigvec } else { &radii.negative_cone.eigvec };
        let sign = if in_cone { 1.0 } else { -1.0 };
        let witness: Vec<f64> = v.coords().iter().map(|c| sign * c).collect();
        let hw = spec.apply_whole(&witness)?;
        let residual = residual_of(&witness, &hw, 1.0);
        UniquenessOutcome::NonUnique { witness, residual, in_cone }
    } else if radii.r_x < 1.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(check.seed);
        let mut rates = Vec::with_capacity(check.trials);
        for _ in 0..check.trials {
            let x0: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let g = growth_rate_whole(spec, &x0, check.horizon)?;
            rates.push(g.rate);
        }
        let max_rate = rates.iter().cloned().fold(0.0, f64::max);
        UniquenessOutcome::Contracting { max_rate, verified: max_rate <= radii.r_x + check.rate_slack, rates }
    } else {
        UniquenessOutcome::Expanding
    };
    Ok(UniquenessReport { r_x: radii.r_x, r_c: radii.r_c, r_minus_c: radii.r_minus_c, outcome })
}
