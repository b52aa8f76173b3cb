//! Invariant suite over every multiplet up to a maximum `l`.

use crate::asymmetry::AsymmetryConfig;
use crate::elliptic::quarter_period;
use crate::error::Result;
use crate::harmonics::{Multiplet, SUM_RULE_TOL};
use crate::ladder::{angular_momentum_matrices, closure_defect, commutator_defect, divisibility_defect};
use crate::polyalg::DIVISION_TOL;
use crate::scalar::Real;

pub const TRACE_TOL: f64 = 1e-9;
pub const ODE_TOL: f64 = 1e-8;
pub const ALGEBRA_TOL: f64 = 1e-8;
/// Samples per Lamé factor in the ODE check.
pub const ODE_SAMPLES: usize = 50;

/// Deliberate corruption for exercising the failure path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Negates one entry of the `Lx` matrix of every multiplet with `l ≥ 1`.
    SignFlip,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Largest defect seen.
    pub worst: f64,
    pub tolerance: f64,
    /// `l` at which the largest defect occurred.
    pub worst_ell: Option<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub lmax: u32,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

struct Tally {
    name: &'static str,
    tolerance: f64,
    worst: f64,
    worst_ell: Option<u32>,
}

impl Tally {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            tolerance,
            worst: 0.0,
            worst_ell: None,
        }
    }

    fn record(&mut self, ell: u32, defect: f64) {
        let d = if defect.is_nan() { f64::INFINITY } else { defect };
        if self.worst_ell.is_none() || d > self.worst {
            self.worst = d;
            self.worst_ell = Some(ell);
        }
    }

    fn finish(self) -> Check {
        Check {
            name: self.name,
            passed: self.worst <= self.tolerance,
            worst: self.worst,
            tolerance: self.tolerance,
            worst_ell: self.worst_ell,
        }
    }
}

fn ode_defect<T: Real>(m: &Multiplet<T>) -> Result<T> {
    let mut worst = T::zero();
    let ll = T::from_count((m.ell * (m.ell + 1)) as usize);
    for block in &m.blocks {
        for p in block.a.iter().chain(&block.b) {
            let span = quarter_period(p.poly.ksq)? * T::lit(2.0);
            let scale = p.poly.max_abs() * (T::one() + ll);
            for i in 0..ODE_SAMPLES {
                let t = (T::from_count(i) + T::lit(0.5)) / T::from_count(ODE_SAMPLES);
                let chi = -span + T::lit(2.0) * span * t;
                worst = worst.max(p.ode_residual(chi).abs() / scale);
            }
        }
    }
    Ok(worst)
}

/// Runs every invariant for `0 ≤ l ≤ lmax`.
pub fn run<T: Real>(config: &AsymmetryConfig<T>, lmax: u32, fault: Option<Fault>) -> Result<Report> {
    let mut sum_rule = Tally::new("eigenvalue sum rule", SUM_RULE_TOL);
    let mut trace = Tally::new("multiplet trace", TRACE_TOL);
    let mut counts = Tally::new("state count and parity", 0.0);
    let mut ode = Tally::new("Lamé ODE residual", ODE_TOL);
    let mut division = Tally::new("scale-factor divisibility", DIVISION_TOL);
    let mut commutators = Tally::new("commutation relations", ALGEBRA_TOL);
    let mut closure = Tally::new("L² closure", ALGEBRA_TOL);
    for ell in 0..=lmax {
        let m = Multiplet::build(ell, config)?;
        let ll = T::from_count((ell * (ell + 1)) as usize);
        let mut sum = T::zero();
        let mut bad = 0usize;
        for s in &m.states {
            sum_rule.record(ell, (s.h1 + s.h2 - ll).abs().as_f64());
            sum = sum + s.estar2;
            let parity: i32 = s.parities.iter().map(|&p| p as i32).product();
            if parity != if ell % 2 == 0 { 1 } else { -1 } || s.n1 + s.n2 != ell {
                bad += 1;
            }
        }
        if m.states.len() != 2 * ell as usize + 1 {
            bad += 1;
        }
        counts.record(ell, bad as f64);
        trace.record(ell, sum.abs().as_f64());
        ode.record(ell, ode_defect(&m)?.as_f64());
        division.record(ell, divisibility_defect(&m)?.as_f64());

        let mut mats = angular_momentum_matrices(&m)?;
        if fault == Some(Fault::SignFlip) && ell >= 1 {
            let n = mats[0].rows();
            if let Some((i, j)) = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| mats[0][(i, j)] != T::zero()) {
                mats[0][(i, j)] = -mats[0][(i, j)];
            }
        }
        commutators.record(ell, commutator_defect(&mats).as_f64());
        closure.record(ell, closure_defect(&mats, ell).as_f64());
    }
    Ok(Report {
        lmax,
        checks: vec![
            counts.finish(),
            sum_rule.finish(),
            trace.finish(),
            ode.finish(),
            division.finish(),
            commutators.finish(),
            closure.finish(),
        ],
    })
}
