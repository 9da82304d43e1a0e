//! Discrete eigenvalues of the radial Dirac system
//!
//! `psi1' = -(k_d/r) psi1 + (E - V + m) psi2`,
//! `psi2' =  (k_d/r) psi2 + (V + m - E) psi1`,
//!
//! by two-sided shooting. The outward solution starts from the regular
//! Frobenius behaviour at the origin, the inward one from the decaying tail
//! `exp(-kappa r)`, and the two are matched by a normalized Wronskian at an
//! intermediate radius. The target level is located by the node count of the
//! large component before the Wronskian root is polished.

pub mod integrator;

use serde::Serialize;

use crate::envelope::{self, BoundRequest};
use crate::error::{Error, Result};
use crate::model::{kappa, AngularState, PotentialParams};
use crate::potential::SoftcoreShape;

use integrator::{integrate, State, Tolerances};

/// `kappa * r_max` at the outer start.
pub const TAIL_DECAY: f64 = 35.0;
/// Points of the log-spaced output mesh.
pub const OUTPUT_POINTS: usize = 2000;
/// Points of the energy scan used to bracket the target level.
pub const ENERGY_SCAN_POINTS: usize = 64;
const RENORMALIZE_ABOVE: f64 = 1e100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialProblem {
    pub state: AngularState,
    pub params: PotentialParams,
}

impl RadialProblem {
    pub fn new(state: AngularState, params: PotentialParams) -> Result<Self> {
        params.validate()?;
        Ok(RadialProblem { state, params })
    }

    pub fn kappa(&self) -> f64 {
        kappa(&self.state).value()
    }

    pub fn shape(&self) -> SoftcoreShape {
        SoftcoreShape::new(self.params.b, self.params.q).expect("validated params")
    }

    /// `V(r) = v f_q(r)`.
    pub fn potential(&self, r: f64) -> f64 {
        self.params.v * self.shape().value(r)
    }

    pub fn default_r_min(&self) -> f64 {
        1e-6 * self.params.b.min(1.0 / self.params.m)
    }

    /// Outer start: beyond the classical turning point `v/(m - E)` by
    /// `TAIL_DECAY` decay lengths.
    pub fn default_r_max(&self, energy: f64) -> f64 {
        let m = self.params.m;
        self.params.v / (m - energy) + TAIL_DECAY / decay_rate(m, energy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverConfig {
    /// Inner start; `None` selects `1e-6 min(b, 1/m)`.
    pub r_min: Option<f64>,
    /// Outer start; `None` recomputes it for every energy probe.
    pub r_max: Option<f64>,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub energy_tol: f64,
    pub max_iter: u32,
    /// Lower end of the energy search; `None` uses the envelope bound less
    /// `1e-3 m`.
    pub energy_floor: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            r_min: None,
            r_max: None,
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            energy_tol: 1e-10,
            max_iter: 200,
            energy_floor: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, x: f64| {
            if x.is_finite() && x > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {x}"
                )))
            }
        };
        positive("abs_tol", self.abs_tol)?;
        positive("rel_tol", self.rel_tol)?;
        positive("energy_tol", self.energy_tol)?;
        if let Some(r) = self.r_min {
            positive("r_min", r)?;
        }
        if let Some(r) = self.r_max {
            positive("r_max", r)?;
            if let Some(r0) = self.r_min {
                if r0 >= r {
                    return Err(Error::InvalidParameter(format!(
                        "r_min = {r0} must be below r_max = {r}"
                    )));
                }
            }
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be positive".into()));
        }
        Ok(())
    }

    /// Same configuration with both integrator tolerances halved.
    pub fn refined(&self) -> Self {
        SolverConfig {
            abs_tol: self.abs_tol / 2.0,
            rel_tol: self.rel_tol / 2.0,
            ..*self
        }
    }

    fn tolerances(&self) -> Tolerances {
        Tolerances {
            abs: self.abs_tol,
            rel: self.rel_tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub r: f64,
    pub psi1: f64,
    pub psi2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Eigensolution {
    pub energy: f64,
    pub nodes_large: u32,
    pub nodes_small: u32,
    pub samples: Vec<Sample>,
    pub mismatch: f64,
    pub norm: f64,
    pub r_match: f64,
    pub iterations: u32,
}

/// `kappa = sqrt(m^2 - E^2)`.
pub fn decay_rate(m: f64, energy: f64) -> f64 {
    ((m - energy) * (m + energy)).sqrt()
}

/// Right-hand side for a given local potential value.
#[inline]
pub fn dirac_rhs(kappa: f64, potential: f64, m: f64, energy: f64, r: f64, psi: &State) -> State {
    let k_over_r = kappa / r;
    [
        -k_over_r * psi[0] + (energy - potential + m) * psi[1],
        k_over_r * psi[1] + (potential + m - energy) * psi[0],
    ]
}

pub fn rhs(problem: &RadialProblem, energy: f64, r: f64, psi: State) -> Result<State> {
    if !(r > 0.0) {
        return Err(Error::out_of_domain("r", r, "(0, inf)"));
    }
    Ok(dirac_rhs(
        problem.kappa(),
        problem.potential(r),
        problem.params.m,
        energy,
        r,
        &psi,
    ))
}

/// Leading Frobenius behaviour at the origin, unit leading coefficient.
///
/// `k_d < 0`: `(r^|k|, sigma r^(|k|+1))`, `sigma = (V(0) + m - E)/(2|k| + 1)`;
/// `k_d > 0`: `(rho r^(k+1), r^k)`, `rho = (E - V(0) + m)/(2k + 1)`.
pub fn series_start(problem: &RadialProblem, energy: f64, r0: f64) -> Result<State> {
    if !(r0 > 0.0) {
        return Err(Error::out_of_domain("r0", r0, "(0, inf)"));
    }
    let k = problem.kappa();
    let v0 = -problem.params.v / problem.params.b;
    let m = problem.params.m;
    let lead = r0.powf(k.abs());
    Ok(if k < 0.0 {
        let sigma = (v0 + m - energy) / (2.0 * k.abs() + 1.0);
        [lead, sigma * lead * r0]
    } else {
        let rho = (energy - v0 + m) / (2.0 * k + 1.0);
        [rho * lead * r0, lead]
    })
}

/// Decaying tail `(1, -kappa/(m + E))`, started at unit magnitude.
pub fn asymptotic_start(problem: &RadialProblem, energy: f64, r_inf: f64) -> Result<State> {
    let m = problem.params.m;
    if !(energy.abs() < m) {
        return Err(Error::out_of_domain("E", energy, format!("(-{m}, {m})")));
    }
    if !(r_inf > 0.0) {
        return Err(Error::out_of_domain("r_inf", r_inf, "(0, inf)"));
    }
    Ok([1.0, -decay_rate(m, energy) / (m + energy)])
}

/// Counts strict sign changes; zeros are skipped so a zero between opposite
/// signs counts once.
#[derive(Debug, Clone, Copy, Default)]
struct NodeCounter {
    last: f64,
    count: u32,
}

impl NodeCounter {
    #[inline]
    fn push(&mut self, value: f64) {
        if value == 0.0 {
            return;
        }
        if self.last != 0.0 && (value > 0.0) != (self.last > 0.0) {
            self.count += 1;
        }
        self.last = value;
    }
}

/// Radii used for one energy probe.
#[derive(Debug, Clone, Copy)]
struct Mesh {
    r_min: f64,
    r_max: f64,
    r_match: f64,
}

fn mesh_for(problem: &RadialProblem, energy: f64, config: &SolverConfig) -> Mesh {
    let r_min = config.r_min.unwrap_or_else(|| problem.default_r_min());
    let r_max = config
        .r_max
        .unwrap_or_else(|| problem.default_r_max(energy))
        .max(4.0 * r_min);
    let kappa = decay_rate(problem.params.m, energy);
    let r_match = problem
        .params
        .b
        .max(1.0 / kappa)
        .clamp(2.0 * r_min, r_max / 2.0);
    Mesh {
        r_min,
        r_max,
        r_match,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Mismatch {
    /// Normalized Wronskian of the outward and inward solutions at `r_match`.
    pub delta: f64,
    /// Sign changes of `psi1` along the outward solution up to `r_max`.
    pub nodes: u32,
}

struct Shooter<'a> {
    problem: &'a RadialProblem,
    shape: SoftcoreShape,
    kappa: f64,
    config: &'a SolverConfig,
}

impl<'a> Shooter<'a> {
    fn new(problem: &'a RadialProblem, config: &'a SolverConfig) -> Self {
        Shooter {
            problem,
            shape: problem.shape(),
            kappa: problem.kappa(),
            config,
        }
    }

    fn system(&self, energy: f64) -> impl Fn(f64, &State) -> State + '_ {
        let v = self.problem.params.v;
        let m = self.problem.params.m;
        let kappa = self.kappa;
        let shape = self.shape;
        move |r, psi| dirac_rhs(kappa, v * shape.value(r), m, energy, r, psi)
    }

    fn unit_series_start(&self, energy: f64, r0: f64) -> Result<State> {
        let y = series_start(self.problem, energy, r0)?;
        let size = y[0].abs().max(y[1].abs());
        Ok([y[0] / size, y[1] / size])
    }

    /// Outward integration to `r_max`, returning the state at `r_match`
    /// and the node count of `psi1`.
    fn outward(&self, energy: f64, mesh: &Mesh) -> Result<(State, u32)> {
        let y0 = self.unit_series_start(energy, mesh.r_min)?;
        let mut at_match = None;
        let mut nodes = NodeCounter::default();
        integrate(
            self.system(energy),
            mesh.r_min,
            y0,
            mesh.r_max,
            &[mesh.r_match],
            self.config.tolerances(),
            Some(RENORMALIZE_ABOVE),
            |r, y, stop| {
                if stop && r == mesh.r_match {
                    // Renormalization may rescale later; keep this snapshot.
                    at_match = Some(*y);
                }
                nodes.push(y[0]);
            },
        )?;
        let at_match = at_match.ok_or_else(|| Error::IntegrationFailure {
            r: mesh.r_match,
            reason: "matching radius was not reached".into(),
        })?;
        Ok((at_match, nodes.count))
    }

    fn inward(&self, energy: f64, mesh: &Mesh) -> Result<State> {
        let y0 = asymptotic_start(self.problem, energy, mesh.r_max)?;
        let leg = integrate(
            self.system(energy),
            mesh.r_max,
            y0,
            mesh.r_match,
            &[],
            self.config.tolerances(),
            Some(RENORMALIZE_ABOVE),
            |_, _, _| {},
        )?;
        Ok(leg.end)
    }

    fn node_count(&self, energy: f64) -> Result<u32> {
        let mesh = mesh_for(self.problem, energy, self.config);
        Ok(self.outward(energy, &mesh)?.1)
    }

    fn mismatch(&self, energy: f64) -> Result<Mismatch> {
        let mesh = mesh_for(self.problem, energy, self.config);
        let (out, nodes) = self.outward(energy, &mesh)?;
        let inn = self.inward(energy, &mesh)?;
        Ok(Mismatch {
            delta: wronskian_ratio(&out, &inn),
            nodes,
        })
    }
}

fn wronskian_ratio(out: &State, inn: &State) -> f64 {
    let a = out[0] * inn[1];
    let b = inn[0] * out[1];
    let denom = a.abs() + b.abs();
    if denom == 0.0 {
        0.0
    } else {
        (a - b) / denom
    }
}

/// Matching residual and outward node count at energy `E`.
pub fn mismatch(problem: &RadialProblem, energy: f64, config: &SolverConfig) -> Result<Mismatch> {
    let m = problem.params.m;
    if !(energy.abs() < m) {
        return Err(Error::out_of_domain("E", energy, format!("(-{m}, {m})")));
    }
    config.validate()?;
    Shooter::new(problem, config).mismatch(energy)
}

/// Outward node count of `psi1` at energy `E`.
pub fn node_count(problem: &RadialProblem, energy: f64, config: &SolverConfig) -> Result<u32> {
    let m = problem.params.m;
    if !(energy.abs() < m) {
        return Err(Error::out_of_domain("E", energy, format!("(-{m}, {m})")));
    }
    config.validate()?;
    Shooter::new(problem, config).node_count(energy)
}

fn default_floor(problem: &RadialProblem) -> f64 {
    let m = problem.params.m;
    let floor = -m + 1e-12 * m;
    BoundRequest::new(problem.state, problem.params)
        .and_then(|req| envelope::optimize_bound(&req))
        .map(|bound| (bound.energy_lower - 1e-3 * m).max(floor))
        .unwrap_or(floor)
}

/// Brent's method on a bracket with `f(a) f(b) < 0`.
fn brent(
    f: &mut dyn FnMut(f64) -> Result<f64>,
    mut a: f64,
    mut fa: f64,
    mut b: f64,
    mut fb: f64,
    tol: f64,
    max_iter: u32,
) -> Result<(f64, f64, u32)> {
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for iter in 0..max_iter {
        if fb == 0.0 {
            return Ok((b, fb, iter));
        }
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 {
            return Ok((b, fb, iter));
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            if 2.0 * p < (3.0 * xm * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b)?;
    }
    Ok((b, fb, max_iter))
}

/// Eigenvalue with `nu` nodes in the large component, its wavefunction on a
/// log-spaced mesh, and diagnostics.
pub fn solve_eigenvalue(problem: &RadialProblem, config: &SolverConfig) -> Result<Eigensolution> {
    config.validate()?;
    let m = problem.params.m;
    let target = problem.state.nu();
    let shooter = Shooter::new(problem, config);

    let floor = config
        .energy_floor
        .unwrap_or_else(|| default_floor(problem));
    if !(floor > -m && floor < m) {
        return Err(Error::out_of_domain(
            "energy floor",
            floor,
            format!("(-{m}, {m})"),
        ));
    }
    let not_found = || Error::BracketNotFound {
        nodes: target,
        lower: floor,
        upper: m,
    };
    if shooter.node_count(floor)? > target {
        return Err(not_found());
    }

    // Scan upward on a grid geometric in m - E, stopping at the first energy
    // whose outward solution carries more than `nu` nodes.
    let top_gap = 1e-12 * m;
    let ratio = (top_gap / (m - floor)).powf(1.0 / (ENERGY_SCAN_POINTS - 1) as f64);
    let mut lo = floor;
    let mut hi = None;
    let mut iterations = 0u32;
    for i in 1..ENERGY_SCAN_POINTS {
        let e = m - (m - floor) * ratio.powi(i as i32);
        iterations += 1;
        if shooter.node_count(e)? > target {
            hi = Some(e);
            break;
        }
        lo = e;
    }
    let mut hi = hi.ok_or_else(not_found)?;

    // Bisect on the node count until the bracket holds exactly one level and
    // the matching residual changes sign across it.
    let mut at_lo = shooter.mismatch(lo)?;
    let mut at_hi = shooter.mismatch(hi)?;
    loop {
        let isolated = at_lo.nodes == target
            && at_hi.nodes == target + 1
            && (at_lo.delta > 0.0) != (at_hi.delta > 0.0);
        if isolated || hi - lo <= config.energy_tol {
            break;
        }
        if iterations >= config.max_iter {
            return Err(not_found());
        }
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let probe = shooter.mismatch(mid)?;
        if probe.nodes <= target {
            lo = mid;
            at_lo = probe;
        } else {
            hi = mid;
            at_hi = probe;
        }
    }

    let energy = if (at_lo.delta > 0.0) != (at_hi.delta > 0.0) {
        let mut residual = |e: f64| shooter.mismatch(e).map(|mm| mm.delta);
        let (e, _, used) = brent(
            &mut residual,
            lo,
            at_lo.delta,
            hi,
            at_hi.delta,
            config.energy_tol,
            config.max_iter.saturating_sub(iterations).max(1),
        )?;
        iterations += used;
        e
    } else {
        0.5 * (lo + hi)
    };

    let solution = wavefunction(&shooter, energy, iterations)?;
    normalize(&solution)
}

/// Matched wavefunction at a converged energy.
fn wavefunction(shooter: &Shooter<'_>, energy: f64, iterations: u32) -> Result<Eigensolution> {
    let problem = shooter.problem;
    let mesh = mesh_for(problem, energy, shooter.config);
    let tol = shooter.config.tolerances();
    let ln_min = mesh.r_min.ln();
    let ln_step = (mesh.r_max.ln() - ln_min) / (OUTPUT_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..OUTPUT_POINTS)
        .map(|i| match i {
            0 => mesh.r_min,
            i if i == OUTPUT_POINTS - 1 => mesh.r_max,
            i => (ln_min + ln_step * i as f64).exp(),
        })
        .collect();
    let split = grid.partition_point(|&r| r < mesh.r_match);

    let mut out_mesh = Vec::new();
    let mut out_samples = Vec::new();
    let inner_stops = &grid[1..split];
    let out_leg = integrate(
        shooter.system(energy),
        mesh.r_min,
        shooter.unit_series_start(energy, mesh.r_min)?,
        mesh.r_match,
        inner_stops,
        tol,
        None,
        |r, y, stop| {
            out_mesh.push(*y);
            if stop || r == mesh.r_min {
                out_samples.push(Sample {
                    r,
                    psi1: y[0],
                    psi2: y[1],
                });
            }
        },
    )?;

    let mut in_mesh = Vec::new();
    let mut in_samples = Vec::new();
    let outer_stops: Vec<f64> = grid[split..grid.len() - 1].iter().rev().copied().collect();
    let in_leg = integrate(
        shooter.system(energy),
        mesh.r_max,
        asymptotic_start(problem, energy, mesh.r_max)?,
        mesh.r_match,
        &outer_stops,
        tol,
        None,
        |r, y, stop| {
            in_mesh.push(*y);
            if stop || r == mesh.r_max {
                in_samples.push(Sample {
                    r,
                    psi1: y[0],
                    psi2: y[1],
                });
            }
        },
    )?;

    // Least-squares scale of the inward branch onto the outward one.
    let (o, i) = (out_leg.end, in_leg.end);
    let scale = (o[0] * i[0] + o[1] * i[1]) / (i[0] * i[0] + i[1] * i[1]);
    if !scale.is_finite() || scale == 0.0 {
        return Err(Error::DegenerateSolution(scale));
    }

    let mut large = NodeCounter::default();
    let mut small = NodeCounter::default();
    for y in &out_mesh {
        large.push(y[0]);
        small.push(y[1]);
    }
    for y in in_mesh.iter().rev().skip(1) {
        large.push(scale * y[0]);
        small.push(scale * y[1]);
    }

    let mut samples = out_samples;
    samples.extend(in_samples.into_iter().rev().map(|s| Sample {
        r: s.r,
        psi1: scale * s.psi1,
        psi2: scale * s.psi2,
    }));

    Ok(Eigensolution {
        energy,
        nodes_large: large.count,
        nodes_small: small.count,
        samples,
        mismatch: wronskian_ratio(&o, &i),
        norm: f64::NAN,
        r_match: mesh.r_match,
        iterations,
    })
}

/// `int (psi1^2 + psi2^2) dr` by the trapezoid rule in `ln r`.
pub fn norm_integral(samples: &[Sample]) -> f64 {
    samples
        .windows(2)
        .map(|w| {
            let f = |s: &Sample| (s.psi1 * s.psi1 + s.psi2 * s.psi2) * s.r;
            0.5 * (f(&w[0]) + f(&w[1])) * (w[1].r / w[0].r).ln()
        })
        .sum()
}

/// Rescales the samples so that `int (psi1^2 + psi2^2) dr = 1`, with no
/// `r^(d-1)` weight.
pub fn normalize(solution: &Eigensolution) -> Result<Eigensolution> {
    if solution.samples.is_empty() {
        return Err(Error::DegenerateSolution(0.0));
    }
    let integral = norm_integral(&solution.samples);
    if !(integral.is_finite() && integral > f64::MIN_POSITIVE) {
        return Err(Error::DegenerateSolution(integral));
    }
    let inv = 1.0 / integral.sqrt();
    let samples: Vec<Sample> = solution
        .samples
        .iter()
        .map(|s| Sample {
            r: s.r,
            psi1: s.psi1 * inv,
            psi2: s.psi2 * inv,
        })
        .collect();
    let norm = norm_integral(&samples);
    Ok(Eigensolution {
        samples,
        norm,
        ..solution.clone()
    })
}

/// Eigenvalues at the given and at halved integrator tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeshStudy {
    pub energy: f64,
    pub energy_refined: f64,
    pub change: f64,
    pub energy_tol: f64,
}

pub fn mesh_convergence(problem: &RadialProblem, config: &SolverConfig) -> Result<MeshStudy> {
    let base = solve_eigenvalue(problem, config)?;
    let fine = solve_eigenvalue(problem, &config.refined())?;
    Ok(MeshStudy {
        energy: base.energy,
        energy_refined: fine.energy,
        change: (fine.energy - base.energy).abs(),
        energy_tol: config.energy_tol,
    })
}
