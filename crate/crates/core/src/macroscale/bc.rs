//! Piecewise-linear time functions and Dirichlet conditions.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TimeFunction {
    /// `(time s, value)`, strictly increasing in time.
    breakpoints: Vec<(f64, f64)>,
}

impl TimeFunction {
    pub fn new(breakpoints: Vec<(f64, f64)>) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(Error::InvalidParameter("time function needs a breakpoint".into()));
        }
        if breakpoints.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::InvalidParameter(
                "time function breakpoints must be strictly increasing".into(),
            ));
        }
        Ok(TimeFunction { breakpoints })
    }

    pub fn constant(value: f64) -> Self {
        TimeFunction {
            breakpoints: vec![(0.0, value)],
        }
    }

    /// Samples `f` every `dt` on `[t0, t1]` (both ends included).
    pub fn sampled<F: Fn(f64) -> f64>(f: F, t0: f64, t1: f64, dt: f64) -> Result<Self> {
        let n = ((t1 - t0) / dt).ceil().max(1.0) as usize;
        let pts = (0..=n)
            .map(|k| {
                let t = (t0 + k as f64 * dt).min(t1);
                (t, f(t))
            })
            .collect::<Vec<_>>();
        let mut dedup: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
        for p in pts {
            if dedup.last().is_none_or(|l| p.0 > l.0) {
                dedup.push(p);
            }
        }
        Self::new(dedup)
    }

    /// Negative cosine between `min` and `max` with the given period, starting
    /// at phase `phase` (fraction of a period), sampled daily.
    pub fn negative_cosine(min: f64, max: f64, period: f64, phase: f64, t_end: f64) -> Result<Self> {
        let mean = 0.5 * (min + max);
        let amp = 0.5 * (max - min);
        let w = 2.0 * std::f64::consts::PI / period;
        Self::sampled(
            move |t| mean - amp * (w * t + 2.0 * std::f64::consts::PI * phase).cos(),
            0.0,
            t_end,
            86_400.0,
        )
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.breakpoints
    }

    /// Value at `t`; constant beyond the first and last breakpoints.
    pub fn value(&self, t: f64) -> f64 {
        let b = &self.breakpoints;
        if t <= b[0].0 {
            return b[0].1;
        }
        let k = b.partition_point(|p| p.0 <= t);
        if k >= b.len() {
            return b[b.len() - 1].1;
        }
        let (t0, v0) = b[k - 1];
        let (t1, v1) = b[k];
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }
}

/// Prescribed values on a set of degrees of freedom.
#[derive(Debug, Clone)]
pub struct DirichletBC {
    pub name: String,
    pub dofs: Vec<usize>,
    pub function: TimeFunction,
}

impl DirichletBC {
    /// Condition on `nodes` for field `field` of an `n_fields`-field problem.
    pub fn on_nodes(name: &str, nodes: &[usize], n_fields: usize, field: usize, function: TimeFunction) -> Self {
        DirichletBC {
            name: name.to_string(),
            dofs: nodes.iter().map(|&n| n * n_fields + field).collect(),
            function,
        }
    }
}

/// Constraint list at time `t`; later conditions override earlier ones.
pub fn constraints_at(bcs: &[DirichletBC], t: f64) -> Vec<(usize, f64)> {
    let mut map = std::collections::BTreeMap::new();
    for bc in bcs {
        let v = bc.function.value(t);
        for &d in &bc.dofs {
            map.insert(d, v);
        }
    }
    map.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_and_extrapolation() {
        let f = TimeFunction::new(vec![(0.0, 0.0), (10.0, 1.0), (20.0, 1.0)]).unwrap();
        assert_eq!(f.value(-1.0), 0.0);
        assert_eq!(f.value(5.0), 0.5);
        assert_eq!(f.value(10.0), 1.0);
        assert_eq!(f.value(100.0), 1.0);
        assert!(TimeFunction::new(vec![(0.0, 0.0), (0.0, 1.0)]).is_err());
    }

    #[test]
    fn cosine_sampling() {
        let f = TimeFunction::negative_cosine(5.0, 25.0, 365.0 * 86_400.0, 0.0, 365.0 * 86_400.0).unwrap();
        assert!((f.value(0.0) - 5.0).abs() < 1e-12);
        assert!((f.value(182.5 * 86_400.0) - 25.0).abs() < 1e-3);
    }

    #[test]
    fn later_conditions_win() {
        let a = DirichletBC::on_nodes("a", &[0, 1], 2, 1, TimeFunction::constant(1.0));
        let b = DirichletBC::on_nodes("b", &[1], 2, 1, TimeFunction::constant(2.0));
        assert_eq!(constraints_at(&[a, b], 0.0), vec![(1, 1.0), (3, 2.0)]);
    }
}
