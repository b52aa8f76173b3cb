#![allow(dead_code)]

use lame_core::polyalg::Species;

/// Roots of `f` on `(a, b)` from sign changes on a uniform grid, refined by bisection.
pub fn bisect_roots(f: impl Fn(f64) -> f64, a: f64, b: f64, samples: usize) -> Vec<f64> {
    let mut roots = Vec::new();
    let step = (b - a) / samples as f64;
    let mut x0 = a + 1e-12;
    let mut f0 = f(x0);
    for i in 1..=samples {
        let x1 = if i == samples { b - 1e-12 } else { a + step * i as f64 };
        let f1 = f(x1);
        if f0 == 0.0 {
            roots.push(x0);
        } else if f0 * f1 < 0.0 {
            let (mut lo, mut hi) = (x0, x1);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if f(mid) * f(lo) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        x0 = x1;
        f0 = f1;
    }
    roots
}

/// Lamé eigenvalues for `l ≤ 4` in closed form, increasing.
///
/// For `l = 4`, species `1`, `reference_cubic` selects the cubic with linear
/// coefficient `64(1+k²) + 208k²` instead of the determinant's
/// `64(1+k²)² + 208k²`.
pub fn closed_form_eigenvalues(ell: u32, sp: Species, k: f64, reference_cubic: bool) -> Vec<f64> {
    let pm = |c: f64, r: f64| vec![c - 2.0 * r.sqrt(), c + 2.0 * r.sqrt()];
    match (ell, sp) {
        (0, s) if s == Species::ONE => vec![0.0],
        (1, s) if s == Species::D => vec![k],
        (1, s) if s == Species::C => vec![1.0],
        (1, s) if s == Species::S => vec![1.0 + k],
        (2, s) if s == Species::CD => vec![1.0 + k],
        (2, s) if s == Species::SD => vec![1.0 + 4.0 * k],
        (2, s) if s == Species::SC => vec![4.0 + k],
        (2, s) if s == Species::ONE => pm(2.0 * (1.0 + k), 1.0 - k * (1.0 - k)),
        (3, s) if s == Species::SCD => vec![4.0 * (1.0 + k)],
        (3, s) if s == Species::D => pm(5.0 * k + 2.0, 4.0 * k * k - k + 1.0),
        (3, s) if s == Species::C => pm(5.0 + 2.0 * k, 4.0 - k * (1.0 - k)),
        (3, s) if s == Species::S => pm(5.0 * (1.0 + k), 4.0 * k * k - 7.0 * k + 4.0),
        (4, s) if s == Species::CD => pm(5.0 * (1.0 + k), 4.0 + k + 4.0 * k * k),
        (4, s) if s == Species::SD => pm(5.0 * (1.0 + 2.0 * k), 4.0 - 9.0 * k * (1.0 - k)),
        (4, s) if s == Species::SC => pm(5.0 * (2.0 + k), 9.0 - 9.0 * k + 4.0 * k * k),
        (4, s) if s == Species::ONE => {
            let cubic = |h: f64| {
                let lin = if reference_cubic { 64.0 * (1.0 + k) } else { 64.0 * (1.0 + k).powi(2) };
                h * h * h - 20.0 * (1.0 + k) * h * h + (lin + 208.0 * k) * h - 640.0 * k * (1.0 + k)
            };
            bisect_roots(cubic, 0.0, 60.0, 6000)
        }
        _ => panic!("no closed form for l={ell} {sp}"),
    }
}

use lame_core::asymmetry::AsymmetryConfig;
use lame_core::elliptic::jacobi;
use lame_core::harmonics::{Multiplet, SpheroconalHarmonic, StateId};
use lame_core::ladder::{Axis, LadderDecomposition};
use lame_core::oracle::{fd_operator, fit_in_basis, FdKind, Grid, GridField};

pub fn cfg(e1: f64) -> AsymmetryConfig<f64> {
    AsymmetryConfig::from_e1(e1).unwrap()
}

/// Configuration with the requested `k1²`, by bisection on `e1`.
pub fn cfg_k1(k1sq: f64) -> AsymmetryConfig<f64> {
    let (mut lo, mut hi) = (0.5 + 1e-12, 1.0 - 1e-12);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        // k1² decreases as e1 grows.
        if cfg(mid).k1sq() > k1sq {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    cfg(0.5 * (lo + hi))
}

pub fn fd_kind(axis: Axis, angular: bool) -> FdKind {
    match (axis, angular) {
        (Axis::X, true) => FdKind::Lx,
        (Axis::Y, true) => FdKind::Ly,
        (Axis::Z, true) => FdKind::Lz,
        (Axis::X, false) => FdKind::Px,
        (Axis::Y, false) => FdKind::Py,
        (Axis::Z, false) => FdKind::Pz,
    }
}

/// Oracle coefficients `(target, coefficient)` and fit residual of a field in
/// the union of the given multiplets.
pub fn fit_terms(field: &GridField<f64>, bases: &[&Multiplet<f64>]) -> (Vec<(StateId, f64)>, f64) {
    let states: Vec<SpheroconalHarmonic<f64>> = bases.iter().flat_map(|m| m.states.iter().cloned()).collect();
    let fit = fit_in_basis(field, &states).unwrap();
    let terms = states.iter().zip(&fit.coefficients).map(|(s, &c)| (s.id(), c)).collect();
    (terms, fit.residual)
}

/// Largest disagreement between a decomposition and oracle coefficients,
/// relative to the largest coefficient.
pub fn max_disagreement(d: &LadderDecomposition<f64>, oracle: &[(StateId, f64)]) -> f64 {
    let scale = oracle.iter().map(|t| t.1.abs()).fold(1.0, f64::max);
    let mut worst: f64 = 0.0;
    for (id, c) in oracle {
        worst = worst.max((d.coefficient(id) - c).abs());
    }
    for t in &d.terms {
        assert!(oracle.iter().any(|(id, _)| *id == t.target), "target {} outside the oracle basis", t.target);
    }
    worst / scale
}

/// Oracle check of `L_axis / (iħ)` on a state: returns (disagreement, fit residual).
pub fn oracle_angular(
    axis: Axis,
    state: &SpheroconalHarmonic<f64>,
    m: &Multiplet<f64>,
    d: &LadderDecomposition<f64>,
) -> (f64, f64) {
    let grid = Grid::spheroconal(&m.config, 40).unwrap();
    let f = |a: f64, b: f64| state.evaluate(a, b);
    let field = fd_operator(fd_kind(axis, true), &f, &grid, &m.config).unwrap();
    if field.max_abs() < 1e-9 * (1.0 + GridField::of_state(&grid, state).max_abs()) {
        return (if d.terms.is_empty() { 0.0 } else { 1.0 }, 0.0);
    }
    let (terms, residual) = fit_terms(&field, &[m]);
    (max_disagreement(d, &terms), residual)
}

/// Direction cosine of `axis` at `(χ1, χ2)`.
pub fn cosine(axis: Axis, c: &AsymmetryConfig<f64>, a: f64, b: f64) -> f64 {
    let t1 = jacobi(a, c.k1sq());
    let t2 = jacobi(b, c.k2sq());
    match axis {
        Axis::X => t1.dn * t2.sn,
        Axis::Y => t1.cn * t2.cn,
        Axis::Z => t1.sn * t2.dn,
    }
}

/// Oracle fields for `p_axis` on a state: the transverse gradient, the
/// solid-harmonic gradient `l (x_i/r) Ψ + G` and the raised part
/// `(x_i/r) Ψ − gradient/(2l+1)`.
pub fn oracle_momentum_fields(
    axis: Axis,
    state: &SpheroconalHarmonic<f64>,
    c: &AsymmetryConfig<f64>,
) -> (GridField<f64>, GridField<f64>, GridField<f64>) {
    let grid = Grid::spheroconal(c, 40).unwrap();
    let f = |a: f64, b: f64| state.evaluate(a, b);
    let g = fd_operator(fd_kind(axis, false), &f, &grid, c).unwrap();
    let mult = GridField::sample(&grid, |a, b| cosine(axis, c, a, b) * state.evaluate(a, b));
    let ell = state.ell as f64;
    let grad = mult.map2(&g, |m, g| ell * m + g);
    let raised = mult.map2(&grad, |m, d| m - d / (2.0 * ell + 1.0));
    (g, grad, raised)
}
