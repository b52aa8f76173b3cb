//! Brute-force checks that share no algebra with the polynomial machinery:
//! finite-difference operators on `(χ1, χ2)` grids, least-squares fits
//! against a basis, and the rotor Hamiltonian in cartesian monomials.

use crate::asymmetry::AsymmetryConfig;
use crate::elliptic::{jacobi, quarter_period};
use crate::error::{Error, Result};
use crate::harmonics::{Multiplet, SpheroconalHarmonic, StateId};
use crate::ladder::{Axis, Convention, LadderDecomposition, LadderSet, Operator};
use crate::linalg::{least_squares, symmetric_eigen, Mat};
use crate::scalar::Real;

/// Minimum samples per coordinate.
pub const MIN_POINTS: usize = 40;
/// Fraction of each quarter period covered by the grid.
pub const DOMAIN_FRACTION: f64 = 0.9;
/// Default stencil step.
pub const FD_STEP: f64 = 5e-3;
/// Largest relative change between stencil steps `h` and `h/2`.
pub const RICHARDSON_TOL: f64 = 1e-4;
/// Largest accepted condition number of the normalised Gram matrix.
pub const MAX_GRAM_CONDITION: f64 = 1e10;

/// Uniform tensor grid in `(χ1, χ2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    pub chi1: Vec<T>,
    pub chi2: Vec<T>,
}

fn linspace<T: Real>(a: T, b: T, n: usize) -> Vec<T> {
    let step = (b - a) / T::from_count(n - 1);
    (0..n).map(|i| a + step * T::from_count(i)).collect()
}

impl<T: Real> Grid<T> {
    /// `n × n` points over `|χi| ≤ 0.9 K(ki²)`.
    pub fn spheroconal(config: &AsymmetryConfig<T>, n: usize) -> Result<Self> {
        if n < MIN_POINTS {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least {MIN_POINTS} points per coordinate, got {n}"
            )));
        }
        let f = T::lit(DOMAIN_FRACTION);
        let k1 = quarter_period(config.k1sq())? * f;
        let k2 = quarter_period(config.k2sq())? * f;
        Ok(Self {
            chi1: linspace(-k1, k1, n),
            chi2: linspace(-k2, k2, n),
        })
    }

    pub fn points(&self) -> usize {
        self.chi1.len() * self.chi2.len()
    }
}

/// Values on a [`Grid`], `values[i][j]` at `(chi1[i], chi2[j])`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField<T> {
    pub chi1: Vec<T>,
    pub chi2: Vec<T>,
    pub values: Vec<Vec<T>>,
}

impl<T: Real> GridField<T> {
    pub fn sample(grid: &Grid<T>, f: impl Fn(T, T) -> T) -> Self {
        let values = grid
            .chi1
            .iter()
            .map(|&a| grid.chi2.iter().map(|&b| f(a, b)).collect())
            .collect();
        Self {
            chi1: grid.chi1.clone(),
            chi2: grid.chi2.clone(),
            values,
        }
    }

    pub fn of_state(grid: &Grid<T>, state: &SpheroconalHarmonic<T>) -> Self {
        Self::sample(grid, |a, b| state.evaluate(a, b))
    }

    fn flat(&self) -> impl Iterator<Item = T> + '_ {
        self.values.iter().flatten().copied()
    }

    pub fn max_abs(&self) -> T {
        self.flat().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn rms(&self) -> T {
        let n = T::from_count(self.values.len() * self.chi2.len());
        (self.flat().map(|v| v * v).sum::<T>() / n).sqrt()
    }

    pub fn map2(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(r, s)| r.iter().zip(s).map(|(&a, &b)| f(a, b)).collect())
            .collect();
        Self {
            chi1: self.chi1.clone(),
            chi2: self.chi2.clone(),
            values,
        }
    }

    pub fn scale(&self, s: T) -> Self {
        self.map2(self, |a, _| a * s)
    }
}

/// Operators available to [`fd_operator`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FdKind {
    /// `L²` (with `ħ = 1`).
    L2,
    /// `H* = ½(e1 Lx² + e2 Ly² + e3 Lz²)`.
    Hstar,
    /// `L_i / (iħ)`.
    Lx,
    Ly,
    Lz,
    /// Transverse gradient `r ∇_i` on the unit sphere.
    Px,
    Py,
    Pz,
}

struct Derivs<T> {
    d1: T,
    d2: T,
    d11: T,
    d22: T,
}

fn stencil<T: Real>(f: &dyn Fn(T, T) -> T, a: T, b: T, h: T) -> Derivs<T> {
    let twelve = T::lit(12.0);
    let along = |g: &dyn Fn(T) -> T| {
        let (m2, m1, z, p1, p2) = (g(-h - h), g(-h), g(T::zero()), g(h), g(h + h));
        let first = (m2 - T::lit(8.0) * m1 + T::lit(8.0) * p1 - p2) / (twelve * h);
        let second = (-m2 + T::lit(16.0) * m1 - T::lit(30.0) * z + T::lit(16.0) * p1 - p2) / (twelve * h * h);
        (first, second)
    };
    let (d1, d11) = along(&|t| f(a + t, b));
    let (d2, d22) = along(&|t| f(a, b + t));
    Derivs { d1, d2, d11, d22 }
}

fn apply_at<T: Real>(kind: FdKind, f: &dyn Fn(T, T) -> T, a: T, b: T, h: T, config: &AsymmetryConfig<T>) -> T {
    let (k1, k2) = (config.k1sq(), config.k2sq());
    let t1 = jacobi(a, k1);
    let t2 = jacobi(b, k2);
    let (s1, c1, d1) = (t1.sn, t1.cn, t1.dn);
    let (s2, c2, d2) = (t2.sn, t2.cn, t2.dn);
    let scale = T::one() - k1 * s1 * s1 - k2 * s2 * s2;
    let d = stencil(f, a, b, h);
    match kind {
        FdKind::L2 => -(d.d11 + d.d22) / scale,
        FdKind::Hstar => {
            let [e1, e2, e3] = config.e();
            let w1 = e1 - (e1 - e2) * s2 * s2;
            let w2 = e3 + (e2 - e3) * s1 * s1;
            -(w1 * d.d11 + w2 * d.d22) / (T::lit(2.0) * scale)
        }
        FdKind::Lx => -(d1 * c2 * d2 * d.d1 + k1 * s1 * c1 * s2 * d.d2) / scale,
        FdKind::Ly => -(-c1 * s2 * d2 * d.d1 + s1 * d1 * c2 * d.d2) / scale,
        FdKind::Lz => -(-k2 * s1 * s2 * c2 * d.d1 - c1 * d1 * d2 * d.d2) / scale,
        FdKind::Px => (-k1 * s1 * c1 * s2 * d.d1 + d1 * c2 * d2 * d.d2) / scale,
        FdKind::Py => (-s1 * d1 * c2 * d.d1 - c1 * s2 * d2 * d.d2) / scale,
        FdKind::Pz => (c1 * d1 * d2 * d.d1 - k2 * s1 * s2 * c2 * d.d2) / scale,
    }
}

/// Applies `kind` to `f` at every grid point with 4th-order central
/// differences of step `FD_STEP`, checked against step `FD_STEP / 2` and
/// returned Richardson-extrapolated.
pub fn fd_operator<T: Real>(
    kind: FdKind,
    f: &dyn Fn(T, T) -> T,
    grid: &Grid<T>,
    config: &AsymmetryConfig<T>,
) -> Result<GridField<T>> {
    fd_operator_with_step(kind, f, grid, config, T::lit(FD_STEP))
}

pub fn fd_operator_with_step<T: Real>(
    kind: FdKind,
    f: &dyn Fn(T, T) -> T,
    grid: &Grid<T>,
    config: &AsymmetryConfig<T>,
    h: T,
) -> Result<GridField<T>> {
    let half = h * T::lit(0.5);
    let coarse = GridField::sample(grid, |a, b| apply_at(kind, f, a, b, h, config));
    let fine = GridField::sample(grid, |a, b| apply_at(kind, f, a, b, half, config));
    let input = GridField::sample(grid, f);
    let scale = fine.max_abs().max(input.max_abs()).max(T::min_positive_value());
    let diff = coarse.map2(&fine, |a, b| (a - b).abs()).max_abs() / scale;
    if diff > T::tol(RICHARDSON_TOL) {
        return Err(Error::GridTooCoarse {
            difference: diff.as_f64(),
        });
    }
    let w = T::lit(16.0);
    Ok(fine.map2(&coarse, |f, c| (w * f - c) / (w - T::one())))
}

/// Least-squares coefficients of a field in a basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Fit<T> {
    pub coefficients: Vec<T>,
    /// RMS misfit over RMS field.
    pub residual: T,
}

/// Fits `field` as a combination of `basis` sampled on the same grid.
pub fn fit_in_basis<T: Real>(field: &GridField<T>, basis: &[SpheroconalHarmonic<T>]) -> Result<Fit<T>> {
    let grid = Grid {
        chi1: field.chi1.clone(),
        chi2: field.chi2.clone(),
    };
    let columns: Vec<GridField<T>> = basis.iter().map(|s| GridField::of_state(&grid, s)).collect();
    let rows = grid.points();
    let n = basis.len();
    if n == 0 || rows < n {
        return Err(Error::InvalidArgument("basis must be non-empty and smaller than the grid".into()));
    }
    let norms: Vec<T> = columns.iter().map(|c| c.rms()).collect();
    let mut a = Mat::zeros(rows, n);
    for (j, c) in columns.iter().enumerate() {
        if norms[j] == T::zero() {
            return Err(Error::RankDeficient {
                condition: f64::INFINITY,
            });
        }
        for (r, v) in c.flat().enumerate() {
            a[(r, j)] = v / norms[j];
        }
    }
    let gram = &a.transpose() * &a;
    let (vals, _) = symmetric_eigen(&gram);
    let lo = vals.iter().fold(T::infinity(), |m, &v| m.min(v));
    let hi = vals.iter().fold(T::zero(), |m, &v| m.max(v));
    let condition = hi / lo;
    if !(lo > T::zero()) || condition > T::lit(MAX_GRAM_CONDITION) {
        return Err(Error::RankDeficient {
            condition: condition.as_f64(),
        });
    }
    let b: Vec<T> = field.flat().collect();
    let x = least_squares(&a, &b).ok_or(Error::RankDeficient {
        condition: f64::INFINITY,
    })?;
    let fitted = a.mul_vec(&x);
    let misfit = (fitted.iter().zip(&b).map(|(p, q)| (*p - *q) * (*p - *q)).sum::<T>() / T::from_count(rows)).sqrt();
    let rms = field.rms();
    let residual = if rms == T::zero() { T::zero() } else { misfit / rms };
    Ok(Fit {
        coefficients: x.iter().zip(&norms).map(|(c, s)| *c / *s).collect(),
        residual,
    })
}

/// Generator `−ε_ijk`: `(L_i / iħ) v = M_i v` on linear forms `v · r`.
fn linear_generator<T: Real>(axis: usize) -> Mat<T> {
    let mut m = Mat::zeros(3, 3);
    let (j, k) = ((axis + 1) % 3, (axis + 2) % 3);
    m[(j, k)] = -T::one();
    m[(k, j)] = T::one();
    m
}

/// Sorted eigenvalues `2E*` of `e1 Lx² + e2 Ly² + e3 Lz²` in the cartesian
/// monomial basis of `l = 1` or `l = 2`.
pub fn cartesian_rotor_energies<T: Real>(ell: u32, config: &AsymmetryConfig<T>) -> Result<Vec<T>> {
    let gens: Vec<Mat<T>> = (0..3).map(linear_generator).collect();
    let e = config.e();
    let reps: Vec<Mat<T>> = match ell {
        1 => gens,
        2 => {
            // Quadratic forms rᵀSr transform as S → G S + S Gᵀ. The basis
            // {2xy, 2xz, 2yz, x² − y², (2z² − x² − y²)/√3} is Frobenius-orthogonal
            // with every member of norm √2.
            let r3 = T::lit(3.0).sqrt();
            let one = T::one();
            let zero = T::zero();
            let sym = |rows: [[T; 3]; 3]| Mat::from_rows(&rows.map(|r| r.to_vec()));
            let basis = [
                sym([[zero, one, zero], [one, zero, zero], [zero, zero, zero]]),
                sym([[zero, zero, one], [zero, zero, zero], [one, zero, zero]]),
                sym([[zero, zero, zero], [zero, zero, one], [zero, one, zero]]),
                sym([[one, zero, zero], [zero, -one, zero], [zero, zero, zero]]),
                sym([[-one / r3, zero, zero], [zero, -one / r3, zero], [zero, zero, T::lit(2.0) / r3]]),
            ];
            gens.iter()
                .map(|g| {
                    let mut m = Mat::zeros(5, 5);
                    for (j, b) in basis.iter().enumerate() {
                        let img = (g * b).add(&(b * &g.transpose()));
                        for (i, c) in basis.iter().enumerate() {
                            let mut dot = T::zero();
                            for p in 0..3 {
                                for q in 0..3 {
                                    dot = dot + img[(p, q)] * c[(p, q)];
                                }
                            }
                            m[(i, j)] = dot * T::lit(0.5);
                        }
                    }
                    m
                })
                .collect()
        }
        _ => {
            return Err(Error::InvalidArgument(format!(
                "cartesian rotor energies are available for l = 1, 2 only (got {ell})"
            )))
        }
    };
    let n = reps[0].rows();
    let mut h = Mat::zeros(n, n);
    for (m, &ei) in reps.iter().zip(&e) {
        h = h.sub(&(m * m).scale(ei));
    }
    let (mut vals, _) = symmetric_eigen(&h);
    vals.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    Ok(vals)
}

/// Outcome of [`check_decomposition`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionCheck<T> {
    /// Largest coefficient mismatch, relative to the largest oracle coefficient.
    pub disagreement: T,
    /// Largest least-squares misfit of the oracle fields.
    pub fit_residual: T,
}

impl<T: Real> DecompositionCheck<T> {
    pub fn worst(&self) -> T {
        self.disagreement.max(self.fit_residual)
    }
}

fn direction_cosine<T: Real>(axis: Axis, config: &AsymmetryConfig<T>, a: T, b: T) -> T {
    let t1 = jacobi(a, config.k1sq());
    let t2 = jacobi(b, config.k2sq());
    match axis {
        Axis::X => t1.dn * t2.sn,
        Axis::Y => t1.cn * t2.cn,
        Axis::Z => t1.sn * t2.dn,
    }
}

fn fd_kind(op: Operator) -> FdKind {
    match op {
        Operator::Lx => FdKind::Lx,
        Operator::Ly => FdKind::Ly,
        Operator::Lz => FdKind::Lz,
        Operator::Px => FdKind::Px,
        Operator::Py => FdKind::Py,
        Operator::Pz => FdKind::Pz,
    }
}

/// Compares `d` term by term with a least-squares fit of the same field
/// computed by finite differences. `filter` keeps the terms that the field
/// is supposed to produce.
fn compare<T: Real>(
    d: &LadderDecomposition<T>,
    field: &GridField<T>,
    basis: &[&Multiplet<T>],
    negligible_below: T,
    out: &mut DecompositionCheck<T>,
) -> Result<()> {
    let keep = |id: &StateId| basis.iter().any(|m| m.ell == id.ell);
    if field.max_abs() <= negligible_below {
        if d.terms.iter().any(|t| keep(&t.target) && t.coefficient.abs() > T::tol(1e-12)) {
            out.disagreement = out.disagreement.max(T::one());
        }
        return Ok(());
    }
    let states: Vec<SpheroconalHarmonic<T>> = basis.iter().flat_map(|m| m.states.iter().cloned()).collect();
    let fit = fit_in_basis(field, &states)?;
    let scale = fit.coefficients.iter().fold(T::one(), |m, c| m.max(c.abs()));
    for (s, &c) in states.iter().zip(&fit.coefficients) {
        let diff = (d.coefficient(&s.id()) - c).abs() / scale;
        out.disagreement = out.disagreement.max(diff);
    }
    if d.terms.iter().any(|t| keep(&t.target) && !states.iter().any(|s| s.id() == t.target)) {
        out.disagreement = out.disagreement.max(T::one());
    }
    out.fit_residual = out.fit_residual.max(fit.residual);
    Ok(())
}

/// Checks a ladder decomposition against finite differences on a grid of
/// `points × points` samples.
pub fn check_decomposition<T: Real>(
    set: &LadderSet<T>,
    d: &LadderDecomposition<T>,
    points: usize,
) -> Result<DecompositionCheck<T>> {
    let state = set
        .state(&d.source)
        .ok_or_else(|| Error::InvalidArgument(format!("no state {}", d.source)))?;
    let config = &set.config;
    let grid = Grid::spheroconal(config, points)?;
    let f = |a: T, b: T| state.evaluate(a, b);
    let field = fd_operator(fd_kind(d.operator), &f, &grid, config)?;
    let psi = GridField::of_state(&grid, state);
    let tiny = T::tol(1e-9) * (T::one() + psi.max_abs());
    let mut out = DecompositionCheck {
        disagreement: T::zero(),
        fit_residual: T::zero(),
    };
    let ell = state.ell;
    let lower = ell.checked_sub(1).and_then(|l| set.multiplet(l));
    let upper = set
        .multiplet(ell + 1)
        .ok_or_else(|| Error::InvalidArgument(format!("l = {} is not prepared", ell + 1)))?;
    match d.convention {
        Convention::ActionOverIHbar => {
            let m = set.multiplet(ell).expect("source multiplet exists");
            compare(d, &field, &[m], tiny, &mut out)?;
        }
        Convention::AngularBracket => {
            let mut basis = vec![upper];
            basis.extend(lower);
            compare(d, &field, &basis, tiny, &mut out)?;
        }
        Convention::SolidHarmonic => {
            let axis = d.operator.axis();
            let mult = GridField::sample(&grid, |a, b| direction_cosine(axis, config, a, b) * state.evaluate(a, b));
            let l = T::from_count(ell as usize);
            let grad = mult.map2(&field, |m, g| l * m + g);
            let width = T::lit(2.0) * l + T::one();
            let raised = mult.map2(&grad, |m, g| m - g / width);
            if let Some(lower) = lower {
                let floor = T::tol(1e-9) * raised.max_abs().max(T::one());
                compare(d, &grad, &[lower], floor, &mut out)?;
            }
            compare(d, &raised, &[upper], tiny, &mut out)?;
        }
    }
    Ok(out)
}
