//! Normalized Ricci flow on diagonal metrics, `ẋ_k = −2x_kρ_k + (2Sc/n)x_k`,
//! integrated by RK4 with the volume `Σ d_k ln x_k` restored after each step.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::curvature::NumericSpace;
use crate::error::{EswError, Result};
use crate::lichnerowicz::{analyze, build_matrix, to_f64, tt_eigen_f64, DEFAULT_TOL};
use crate::space_model::{DiagonalMetric, SpaceDescriptor};

pub const DEFAULT_DT: f64 = 1e-3;
pub const CONVERGED_TOL: f64 = 1e-10;
pub const BOX_MIN: f64 = 1e-6;
pub const BOX_MAX: f64 = 1e6;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Terminal {
    ConvergedToEinstein { residual: f64 },
    MaxTimeReached,
    Diverged { bound: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct FlowTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub scalars: Vec<f64>,
    pub terminal: Terminal,
}

impl FlowTrajectory {
    pub fn last_state(&self) -> &[f64] {
        self.states.last().expect("trajectory holds the initial state")
    }

    pub fn last_time(&self) -> f64 {
        *self.times.last().expect("trajectory holds the initial state")
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let r = self.states.first().map_or(0, Vec::len);
        let mut header = vec!["t".to_string()];
        header.extend((1..=r).map(|k| format!("x{k}")));
        header.push("scalar".into());
        w.write_record(&header).map_err(csv_err)?;
        for ((t, x), s) in self.times.iter().zip(&self.states).zip(&self.scalars) {
            let mut row = vec![t.to_string()];
            row.extend(x.iter().map(f64::to_string));
            row.push(s.to_string());
            w.write_record(&row).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }
}

fn csv_err(e: csv::Error) -> EswError {
    EswError::Io(e.to_string())
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowOptions {
    pub t_max: f64,
    pub dt: f64,
    /// Stop as soon as the Einstein residual drops below [`CONVERGED_TOL`].
    pub stop_at_einstein: bool,
    /// Store every this many steps; `None` means `⌈1/(100·dt)⌉`.
    pub store_every: Option<usize>,
}

impl FlowOptions {
    pub fn new(t_max: f64, dt: f64) -> Self {
        FlowOptions {
            t_max,
            dt,
            stop_at_einstein: true,
            store_every: None,
        }
    }
}

/// The flow vector field at `x`.
pub fn velocity(space: &NumericSpace, x: &[f64]) -> Vec<f64> {
    let rho = space.ricci(x);
    let sc: f64 = space.dims.iter().zip(&rho).map(|(d, r)| d * r).sum();
    let c = 2.0 * sc / space.n;
    x.iter().zip(&rho).map(|(xk, rk)| -2.0 * xk * rk + c * xk).collect()
}

fn axpy(x: &[f64], h: f64, k: &[f64]) -> Vec<f64> {
    x.iter().zip(k).map(|(a, b)| a + h * b).collect()
}

fn rk4_step(space: &NumericSpace, x: &[f64], dt: f64) -> Vec<f64> {
    let k1 = velocity(space, x);
    let k2 = velocity(space, &axpy(x, 0.5 * dt, &k1));
    let k3 = velocity(space, &axpy(x, 0.5 * dt, &k2));
    let k4 = velocity(space, &axpy(x, dt, &k3));
    (0..x.len())
        .map(|i| x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

fn renormalize(space: &NumericSpace, x: &mut [f64], target: f64) {
    let c = ((target - space.log_volume(x)) / space.n).exp();
    for v in x.iter_mut() {
        *v *= c;
    }
}

fn outside_box(x: &[f64]) -> Option<f64> {
    x.iter().copied().find(|v| !(*v >= BOX_MIN && *v <= BOX_MAX))
}

pub fn flow_with(space: &SpaceDescriptor, x0: &DiagonalMetric, opts: &FlowOptions) -> Result<FlowTrajectory> {
    x0.check_len(space)?;
    if !(opts.dt > 0.0 && opts.dt.is_finite()) || !(opts.t_max > 0.0 && opts.t_max.is_finite()) {
        return Err(EswError::validation("flow", "dt and t_max must be positive and finite"));
    }
    if opts.store_every == Some(0) {
        return Err(EswError::validation("flow", "store_every must be at least 1"));
    }
    let ns = NumericSpace::new(space);
    let store_every = opts
        .store_every
        .unwrap_or_else(|| (1.0 / (100.0 * opts.dt)).ceil().max(1.0) as usize);
    let mut x = x0.to_f64();
    let target = ns.log_volume(&x);
    let mut traj = FlowTrajectory {
        times: vec![0.0],
        states: vec![x.clone()],
        scalars: vec![ns.scalar(&x)],
        terminal: Terminal::MaxTimeReached,
    };
    let residual = ns.residual(&x);
    if opts.stop_at_einstein && residual < CONVERGED_TOL {
        traj.terminal = Terminal::ConvergedToEinstein { residual };
        return Ok(traj);
    }
    let steps = (opts.t_max / opts.dt).round().max(1.0) as usize;
    let mut stored = 0;
    for step in 1..=steps {
        let next = rk4_step(&ns, &x, opts.dt);
        if let Some(v) = next.iter().copied().find(|v| !(*v > 0.0 && v.is_finite())) {
            if stored != step - 1 {
                traj.times.push((step - 1) as f64 * opts.dt);
                traj.states.push(x.clone());
                traj.scalars.push(ns.scalar(&x));
            }
            traj.terminal = Terminal::Diverged {
                bound: if v > 0.0 { BOX_MAX } else { BOX_MIN },
            };
            return Ok(traj);
        }
        x = next;
        renormalize(&ns, &mut x, target);
        let t = step as f64 * opts.dt;
        let bad = outside_box(&x);
        let residual = if bad.is_none() { ns.residual(&x) } else { f64::NAN };
        let converged = opts.stop_at_einstein && residual < CONVERGED_TOL;
        if step % store_every == 0 || step == steps || bad.is_some() || converged {
            traj.times.push(t);
            traj.states.push(x.clone());
            traj.scalars.push(ns.scalar(&x));
            stored = step;
        }
        if let Some(v) = bad {
            traj.terminal = Terminal::Diverged {
                bound: if v < BOX_MIN { BOX_MIN } else { BOX_MAX },
            };
            return Ok(traj);
        }
        if converged {
            traj.terminal = Terminal::ConvergedToEinstein { residual };
            return Ok(traj);
        }
    }
    Ok(traj)
}

/// Flow with early termination at Einstein metrics and the default storage stride.
pub fn flow(space: &SpaceDescriptor, x0: &DiagonalMetric, t_max: f64, dt: f64) -> Result<FlowTrajectory> {
    flow_with(space, x0, &FlowOptions::new(t_max, dt))
}

/// Number of TT eigendirections at the Einstein metric `g` along which the
/// flow escapes: every probe start `g·exp(εv)` grows along the direction and
/// ends with scalar curvature above `Sc(g)`.
pub fn unstable_dimension_probe(space: &SpaceDescriptor, g: &DiagonalMetric, n_probes: usize) -> Result<usize> {
    let analysis = analyze(space, g, DEFAULT_TOL)?;
    let two_rho = analysis.two_rho.to_f64();
    let dims: Vec<f64> = space.dims().iter().map(|&d| d as f64).collect();
    let (_, vecs) = tt_eigen_f64(&to_f64(&build_matrix(space, g)), &dims)?;
    let ns = NumericSpace::new(space);
    let gx = g.to_f64();
    let sc0 = ns.scalar(&gx);
    let t_end = 4.0 / two_rho.abs().max(1e-12);
    let opts = FlowOptions {
        t_max: t_end,
        dt: DEFAULT_DT,
        stop_at_einstein: false,
        store_every: Some(usize::MAX),
    };
    let mut count = 0;
    for a in &vecs {
        let v: Vec<f64> = a.iter().zip(&dims).map(|(ak, d)| ak / d.sqrt()).collect();
        let escapes = (0..n_probes.max(1)).all(|i| {
            let eps = 1e-4 * (i + 1) as f64 * if i % 2 == 0 { 1.0 } else { -1.0 };
            let x0: Vec<f64> = gx.iter().zip(&v).map(|(x, vk)| x * (eps * vk).exp()).collect();
            let Ok(m0) = DiagonalMetric::from_f64(&x0) else {
                return false;
            };
            let Ok(traj) = flow_with(space, &m0, &opts) else {
                return false;
            };
            let xt = traj.last_state();
            let proj: f64 = xt
                .iter()
                .zip(&gx)
                .zip(a.iter().zip(&dims))
                .map(|((x, g0), (ak, d))| (x / g0).ln() * d.sqrt() * ak)
                .sum();
            proj.abs() > eps.abs() && ns.scalar(xt) > sc0
        });
        if escapes {
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space_model::{exceptional_wallach_descriptor, wallach_descriptor, Exceptional, WallachFamily};

    #[test]
    fn volume_preserving_field() {
        let s = exceptional_wallach_descriptor(Exceptional::W10);
        let ns = NumericSpace::new(&s);
        let x = [1.3, 0.7, 2.2];
        let v = velocity(&ns, &x);
        let trace: f64 = (0..3).map(|k| ns.dims[k] * v[k] / x[k]).sum();
        assert!(trace.abs() < 1e-12);
    }

    #[test]
    fn stationary_at_einstein() {
        let s = exceptional_wallach_descriptor(Exceptional::W11);
        let g = DiagonalMetric::standard(3);
        let traj = flow(&s, &g, 10.0, DEFAULT_DT).unwrap();
        assert!(matches!(traj.terminal, Terminal::ConvergedToEinstein { .. }));
        assert_eq!(traj.last_time(), 0.0);
        let mut o = FlowOptions::new(10.0, DEFAULT_DT);
        o.stop_at_einstein = false;
        let traj = flow_with(&s, &g, &o).unwrap();
        assert!(traj.states.iter().flatten().all(|v| (v - 1.0).abs() <= 1e-9));
    }

    #[test]
    fn invariants_along_flow() {
        let s = exceptional_wallach_descriptor(Exceptional::W8);
        let ns = NumericSpace::new(&s);
        let x0 = DiagonalMetric::from_f64(&[1.0, 1.2, 1.5]).unwrap();
        let traj = flow(&s, &x0, 5.0, DEFAULT_DT).unwrap();
        let v0 = ns.log_volume(&traj.states[0]);
        for w in traj.scalars.windows(2) {
            assert!(w[1] >= w[0] - 1e-9);
        }
        for x in &traj.states {
            assert!((ns.log_volume(x) - v0).abs() <= 1e-9);
        }
        assert_eq!(traj.times[1], 0.01);
    }

    #[test]
    fn bad_parameters() {
        let s = exceptional_wallach_descriptor(Exceptional::W8);
        let g = DiagonalMetric::standard(3);
        assert!(flow(&s, &g, 1.0, 0.0).is_err());
        assert!(flow(&s, &g, -1.0, 0.1).is_err());
        assert!(flow(&s, &DiagonalMetric::standard(2), 1.0, 0.1).is_err());
    }

    #[test]
    fn csv_layout() {
        let s = wallach_descriptor(WallachFamily::W2, &[1, 1, 1]).unwrap();
        let traj = flow(&s, &DiagonalMetric::from_f64(&[1.0, 1.1, 0.9]).unwrap(), 0.05, 0.01).unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,x1,x2,x3,scalar"));
        assert_eq!(lines.count(), traj.times.len());
    }
}
