//! Reeb dynamics of the cosphere bundle `S*R^{2n} ≅ R^{2n} × S^{2n−1}`.
//!
//! The Reeb field of the Liouville form restricted to unit covectors is
//! `R(x, u) = (u, 0)`, so the flow is straight-line motion of the base point.
//! In Hilbert coordinates the flow is quadratic in time, plane by plane:
//!
//! ```text
//! p1(t) = p1 + p2 t + ½(p1 + p3) t²
//! p2(t) = p2 + (p1 + p3) t
//! p3(t) = p3 − p2 t − ½(p1 + p3) t²
//! ```

use serde::Serialize;

use crate::error::{Error, Result};
use crate::phase::{HilbertImage, PhasePoint};

/// Tangent vector `(dx, du)` at a phase point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tangent {
    pub dx: Vec<f64>,
    pub du: Vec<f64>,
}

pub fn reeb_field(p: &PhasePoint) -> Tangent {
    Tangent {
        dx: p.u.clone(),
        du: vec![0.0; p.u.len()],
    }
}

pub fn flow_exact(p: &PhasePoint, t: f64) -> PhasePoint {
    PhasePoint {
        x: p.x.iter().zip(&p.u).map(|(x, u)| x + t * u).collect(),
        u: p.u.clone(),
    }
}

/// Closed-form flow of the reduced Reeb field on Hilbert coordinates.
pub fn flow_invariants_closed(start: &HilbertImage, t: f64) -> HilbertImage {
    let mut out = Vec::with_capacity(start.0.len());
    for j in 0..start.planes() {
        let [p1, p2, p3] = start.plane(j);
        let mass = p1 + p3;
        out.push(p1 + p2 * t + 0.5 * mass * t * t);
        out.push(p2 + mass * t);
        out.push(p3 - p2 * t - 0.5 * mass * t * t);
    }
    HilbertImage(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FlowMethod {
    Exact,
    ClosedFormInvariants,
    Rk4,
}

/// Time samples of a flow; states are phase points, or Hilbert images for
/// the closed-form flow.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory<S = PhasePoint> {
    pub times: Vec<f64>,
    pub states: Vec<S>,
    pub method: FlowMethod,
}

impl<S> Trajectory<S> {
    pub fn last(&self) -> &S {
        self.states.last().expect("trajectories are never empty")
    }
}

/// Samples the closed-form invariant flow at `times`.
pub fn trajectory_closed_form(
    start: &HilbertImage,
    times: &[f64],
) -> Result<Trajectory<HilbertImage>> {
    check_times(times)?;
    Ok(Trajectory {
        times: times.to_vec(),
        states: times
            .iter()
            .map(|&t| flow_invariants_closed(start, t))
            .collect(),
        method: FlowMethod::ClosedFormInvariants,
    })
}

/// Samples the exact flow at `times`, which must be strictly increasing.
pub fn trajectory_exact(p: &PhasePoint, times: &[f64]) -> Result<Trajectory> {
    check_times(times)?;
    Ok(Trajectory {
        times: times.to_vec(),
        states: times.iter().map(|&t| flow_exact(p, t)).collect(),
        method: FlowMethod::Exact,
    })
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Precondition(
            "times must be nonempty and strictly increasing".into(),
        ));
    }
    Ok(())
}

fn axpy(y: &[f64], a: f64, k: &[f64]) -> Vec<f64> {
    y.iter().zip(k).map(|(y, k)| y + a * k).collect()
}

/// One classical Runge-Kutta step for an autonomous system.
fn rk4_step<F>(f: &F, y: &[f64], h: f64) -> Vec<f64>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let k1 = f(y);
    let k2 = f(&axpy(y, h / 2.0, &k1));
    let k3 = f(&axpy(y, h / 2.0, &k2));
    let k4 = f(&axpy(y, h, &k3));
    y.iter()
        .enumerate()
        .map(|(i, y)| y + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

/// Integrates the Reeb field from `t = 0` to `t_end`; the last step is
/// shortened so the trajectory ends exactly at `t_end`.
pub fn flow_rk4(p: &PhasePoint, t_end: f64, step: f64) -> Result<Trajectory> {
    if !(step > 0.0 && t_end > 0.0) || !step.is_finite() || !t_end.is_finite() {
        return Err(Error::Precondition(
            "step and t_end must be positive".into(),
        ));
    }
    let dim = p.x.len();
    let field = |y: &[f64]| {
        let mut dy = vec![0.0; 2 * dim];
        dy[..dim].copy_from_slice(&y[dim..]);
        dy
    };
    let mut y: Vec<f64> = p.x.iter().chain(&p.u).copied().collect();
    let steps = (t_end / step).ceil() as usize;
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(p.clone());
    for i in 1..=steps {
        let t_prev = times[i - 1];
        let t = if i == steps { t_end } else { i as f64 * step };
        if t <= t_prev {
            continue;
        }
        y = rk4_step(&field, &y, t - t_prev);
        times.push(t);
        states.push(PhasePoint {
            x: y[..dim].to_vec(),
            u: y[dim..].to_vec(),
        });
    }
    Ok(Trajectory {
        times,
        states,
        method: FlowMethod::Rk4,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::invariants;

    #[test]
    fn field_is_translation() {
        let p = PhasePoint::cosphere(vec![0.3, 0.1, -2.0, 1.0], vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        let r = reeb_field(&p);
        assert_eq!(r.dx, vec![1.0, 0.0, 0.0, 0.0]);
        assert!(r.du.iter().all(|&d| d == 0.0));
        assert_eq!(r.dx.iter().map(|v| v * v).sum::<f64>(), 1.0);
    }

    #[test]
    fn exact_flow_basics() {
        let p = PhasePoint::cosphere(vec![0.0, 0.0], vec![1.0, 0.0]).unwrap();
        assert_eq!(flow_exact(&p, 0.0), p);
        assert_eq!(flow_exact(&p, 2.0).x, vec![2.0, 0.0]);
        // dyadic data keeps every sum exact
        let q = PhasePoint::cosphere(vec![0.5, -0.25], vec![0.0, -1.0]).unwrap();
        assert_eq!(flow_exact(&flow_exact(&q, 0.5), 0.25), flow_exact(&q, 0.75));
    }

    #[test]
    fn closed_form_examples() {
        let start = HilbertImage(vec![1.0, 0.0, 1.0]);
        assert_eq!(flow_invariants_closed(&start, 1.0).0, vec![2.0, 2.0, 0.0]);
        assert_eq!(flow_invariants_closed(&start, 0.0), start);
        let s = HilbertImage(vec![2.5, -1.0, 0.3]);
        for t in [0.1, 0.7, 3.0] {
            let q = flow_invariants_closed(&s, t).0;
            assert!((q[0] + q[2] - 2.8).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_form_matches_point_flow() {
        let p = PhasePoint::cosphere(vec![0.0, 0.0], vec![1.0, 0.0]).unwrap();
        let start = HilbertImage(invariants(&p).hilbert_coordinates());
        let q = invariants(&flow_exact(&p, 1.0)).hilbert_coordinates();
        assert_eq!(flow_invariants_closed(&start, 1.0).0, q);
    }

    #[test]
    fn rk4_reaches_the_end_time() {
        let p = PhasePoint::cosphere(vec![0.1, 0.2], vec![0.6, -0.8]).unwrap();
        let tr = flow_rk4(&p, 0.25, 0.1).unwrap();
        assert_eq!(tr.times.len(), 4);
        assert_eq!(*tr.times.last().unwrap(), 0.25);
        assert!(tr.times.windows(2).all(|w| w[0] < w[1]));
        let exact = flow_exact(&p, 0.25);
        for (a, b) in tr.last().x.iter().zip(&exact.x) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!(flow_rk4(&p, 1.0, 0.0).is_err());
        assert!(flow_rk4(&p, -1.0, 0.1).is_err());
    }

    #[test]
    fn exact_trajectory_rejects_unsorted_times() {
        let p = PhasePoint::cosphere(vec![0.0, 0.0], vec![1.0, 0.0]).unwrap();
        assert!(trajectory_exact(&p, &[0.0, 0.0]).is_err());
        assert_eq!(trajectory_exact(&p, &[0.0, 1.0]).unwrap().states.len(), 2);
        let start = HilbertImage(vec![1.0, 0.0, 1.0]);
        let tr = trajectory_closed_form(&start, &[0.0, 1.0]).unwrap();
        assert_eq!(tr.last().0, vec![2.0, 2.0, 0.0]);
        assert!(trajectory_closed_form(&start, &[]).is_err());
    }
}
