//! Spheroconal harmonics `Λ^A(χ1) Λ^B(χ2)` and the rotor energies they carry.
//!
//! Angular coordinates: `x = dn1 sn2`, `y = cn1 cn2`, `z = sn1 dn2` on the unit
//! sphere, with `k1²` on the first coordinate and `k2² = 1 − k1²` on the second.

use std::cmp::Ordering;
use std::fmt;

use crate::asymmetry::AsymmetryConfig;
use crate::elliptic::JacobiTriple;
use crate::error::{Error, Result};
use crate::lame::{self, LamePolynomial};
use crate::linalg::Mat;
use crate::polyalg::{invert_basis, BiSnPoly, CartesianLabel, Coord, Species, SpeciesPair};
use crate::scalar::Real;

/// Tolerance on `h1 + h2 = l(l+1)`.
pub const SUM_RULE_TOL: f64 = 1e-9;
/// Bisection budget for [`SpheroconalHarmonic::evaluate_xyz`].
pub const MAX_INVERSION_STEPS: usize = 200;

/// Compact identifier `(l, species pair, n1, n2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StateId {
    pub ell: u32,
    pub label: CartesianLabel,
    pub n1: u32,
    pub n2: u32,
}

impl StateId {
    pub fn pair(&self) -> SpeciesPair {
        self.label.pair()
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "l={} {} n=({},{})", self.ell, self.pair(), self.n1, self.n2)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpheroconalHarmonic<T> {
    pub ell: u32,
    pub label: CartesianLabel,
    pub species_a: Species,
    pub species_b: Species,
    pub n1: u32,
    pub n2: u32,
    pub h1: T,
    pub h2: T,
    /// Eigenvalue `2E*` of `e1 Lx² + e2 Ly² + e3 Lz²`.
    pub estar2: T,
    pub factor_a: LamePolynomial<T>,
    pub factor_b: LamePolynomial<T>,
    pub wavefunction: BiSnPoly<T>,
    pub parities: [i8; 3],
}

impl<T: Real> SpheroconalHarmonic<T> {
    pub fn id(&self) -> StateId {
        StateId {
            ell: self.ell,
            label: self.label,
            n1: self.n1,
            n2: self.n2,
        }
    }

    pub fn evaluate(&self, chi1: T, chi2: T) -> T {
        self.wavefunction.eval(chi1, chi2)
    }

    /// Value at a unit direction, found by inverting the coordinate map.
    pub fn evaluate_xyz(&self, direction: [T; 3]) -> Result<T> {
        let (t1, t2) = invert_direction(direction, self.wavefunction.k1sq, self.wavefunction.k2sq)?;
        Ok(self.wavefunction.eval_triples(&t1, &t2))
    }
}

/// Jacobi triples `(χ1 | k1²)`, `(χ2 | k2²)` of a direction on the unit sphere.
///
/// The direction is normalised first. Signs follow `sn2 ~ x`, `sn1 ~ z`,
/// `cn1 ~ y`, `cn2 ≥ 0`.
pub fn invert_direction<T: Real>(direction: [T; 3], k1sq: T, k2sq: T) -> Result<(JacobiTriple<T>, JacobiTriple<T>)> {
    let norm = direction.iter().map(|&v| v * v).sum::<T>().sqrt();
    if !(norm > T::zero()) || !norm.is_finite() {
        return Err(Error::InvalidArgument("direction must be a non-zero finite vector".into()));
    }
    let [x, y, z] = direction.map(|v| v / norm);
    let (x2, z2) = (x * x, z * z);
    let one = T::one();

    // u1 = sn²χ1 is the smaller root of k1² u² − b u + z² = 0, where the
    // quadratic is positive at 0 and non-positive at the upper bound.
    let b = one - k2sq * x2 + k1sq * z2;
    let f = |u: T| k1sq * u * u - b * u + z2;
    let upper = one.min((one - x2).max(T::zero()) / k1sq);
    let (mut lo, mut hi) = (T::zero(), upper);
    let u1 = if z2 == T::zero() {
        T::zero()
    } else if f(hi) >= T::zero() {
        hi
    } else {
        let mut converged = false;
        for _ in 0..MAX_INVERSION_STEPS {
            let mid = (lo + hi) * T::lit(0.5);
            if hi - lo <= T::lit(2.0) * T::epsilon() || mid <= lo || mid >= hi {
                converged = true;
                break;
            }
            if f(mid) > T::zero() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if !converged {
            return Err(Error::InversionFailure);
        }
        (lo + hi) * T::lit(0.5)
    };

    let d1 = (one - k1sq * u1).max(T::zero()).sqrt();
    let u2 = if d1 > T::zero() { (x2 / (d1 * d1)).min(one) } else { one };
    let d2 = (one - k2sq * u2).max(T::zero()).sqrt();
    let sn2 = if d1 > T::zero() { (x / d1).max(-one).min(one) } else { u2.sqrt().copysign(x) };
    let sn1 = if d2 > T::zero() { (z / d2).max(-one).min(one) } else { u1.sqrt().copysign(z) };
    let mut c1 = (one - sn1 * sn1).max(T::zero()).sqrt();
    let mut c2 = (one - sn2 * sn2).max(T::zero()).sqrt();
    // Recover the smaller cosine from y = c1 c2 for accuracy.
    if c1 >= c2 && c1 > T::zero() {
        c2 = (y.abs() / c1).min(one);
    } else if c2 > T::zero() {
        c1 = (y.abs() / c2).min(one);
    }
    let cn1 = if y < T::zero() { -c1 } else { c1 };
    Ok((
        JacobiTriple { sn: sn1, cn: cn1, dn: d1 },
        JacobiTriple { sn: sn2, cn: c2, dn: d2 },
    ))
}

/// Lamé factors of one matched species pair and the inverses of their
/// coefficient matrices.
///
/// The inverses become ill-conditioned for large `l`; a failed inversion is
/// kept and reported only when an expansion needs it.
#[derive(Debug, Clone)]
pub struct SpeciesBlock<T> {
    pub label: CartesianLabel,
    /// Coordinate-1 factors by increasing `h`.
    pub a: Vec<LamePolynomial<T>>,
    /// Coordinate-2 factors by increasing `h`.
    pub b: Vec<LamePolynomial<T>>,
    inverses: Result<(Mat<T>, Mat<T>)>,
}

impl<T: Real> SpeciesBlock<T> {
    pub fn size(&self) -> usize {
        self.a.len()
    }

    /// `(inv_a, inv_b)`; row `s`, column `i` of `inv_a` is the weight of
    /// factor `a[i]` in `A sn^{2s}`.
    pub fn inverses(&self) -> Result<(&Mat<T>, &Mat<T>)> {
        match &self.inverses {
            Ok((a, b)) => Ok((a, b)),
            Err(e) => Err(e.clone()),
        }
    }
}

fn forward_matrix<T: Real>(factors: &[LamePolynomial<T>]) -> Mat<T> {
    let rows: Vec<Vec<T>> = factors.iter().map(|f| f.poly.coeffs.clone()).collect();
    Mat::from_rows(&rows)
}

/// All `2l + 1` harmonics of one `l` together with the data needed to expand
/// arbitrary polynomials in them.
#[derive(Debug, Clone)]
pub struct Multiplet<T> {
    pub ell: u32,
    pub config: AsymmetryConfig<T>,
    /// Sorted by `2E*`, ties by species label order.
    pub states: Vec<SpheroconalHarmonic<T>>,
    pub blocks: Vec<SpeciesBlock<T>>,
}

/// Result of expanding a two-coordinate polynomial in a multiplet.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion<T> {
    /// `(index into Multiplet::states, coefficient)`, non-negligible terms only.
    pub terms: Vec<(usize, T)>,
    /// Largest coefficient that could not be attributed to a harmonic,
    /// relative to the input scale.
    pub residual: T,
}

impl<T: Real> Multiplet<T> {
    pub fn build(ell: u32, config: &AsymmetryConfig<T>) -> Result<Self> {
        let (k1sq, k2sq) = (config.k1sq(), config.k2sq());
        let ll = T::from_count((ell * (ell + 1)) as usize);
        let mut states = Vec::with_capacity(2 * ell as usize + 1);
        let mut blocks = Vec::new();
        for label in CartesianLabel::ORDER {
            let pair = label.pair();
            if !lame::species_allowed(ell, pair.a) || lame::matrix_size(ell, pair.a)? == 0 {
                continue;
            }
            let a = lame::solve(ell, pair.a, k1sq, Coord::First)?;
            let b = lame::solve(ell, pair.b, k2sq, Coord::Second)?;
            let n = a.len();
            for (r, fa) in a.iter().enumerate() {
                // Increasing h on the first coordinate pairs with decreasing h on the second.
                let fb = &b[n - 1 - r];
                let defect = (fa.h + fb.h - ll).abs();
                if defect > T::tol(SUM_RULE_TOL) * (T::one() + ll) {
                    return Err(Error::MatchFailure {
                        ell,
                        pair: pair.to_string(),
                        defect: defect.as_f64(),
                    });
                }
                states.push(SpheroconalHarmonic {
                    ell,
                    label,
                    species_a: pair.a,
                    species_b: pair.b,
                    n1: fa.n,
                    n2: fb.n,
                    h1: fa.h,
                    h2: fb.h,
                    estar2: config.e1() * fa.h + config.e3() * fb.h,
                    factor_a: fa.clone(),
                    factor_b: fb.clone(),
                    wavefunction: BiSnPoly::from_product(&fa.poly, &fb.poly),
                    parities: label.parities(),
                });
            }
            let inverses = invert_basis(&forward_matrix(&a))
                .and_then(|ia| Ok((ia, invert_basis(&forward_matrix(&b))?)));
            blocks.push(SpeciesBlock { label, a, b, inverses });
        }
        states.sort_by(|p, q| {
            p.estar2
                .partial_cmp(&q.estar2)
                .unwrap_or(Ordering::Equal)
                .then(p.label.rank().cmp(&q.label.rank()))
                .then(p.n1.cmp(&q.n1))
        });
        Ok(Self {
            ell,
            config: *config,
            states,
            blocks,
        })
    }

    pub fn block(&self, label: CartesianLabel) -> Option<&SpeciesBlock<T>> {
        self.blocks.iter().find(|b| b.label == label)
    }

    /// Index of the state with the given id.
    pub fn find(&self, id: &StateId) -> Option<usize> {
        self.states.iter().position(|s| s.id() == *id)
    }

    /// Index of the state built from first-coordinate rank `rank` of `label`.
    pub fn index_of_rank(&self, label: CartesianLabel, rank: usize) -> Option<usize> {
        self.states
            .iter()
            .position(|s| s.label == label && s.factor_a.rank == rank)
    }

    /// Expands `p` (whose species pair must be matched) in this multiplet.
    ///
    /// Coefficients of powers outside the block, and cross terms that do not
    /// pair a first-coordinate rank `r` with the complementary second rank,
    /// are reported through `residual` instead of an error.
    pub fn expand(&self, p: &BiSnPoly<T>) -> Result<Expansion<T>> {
        let scale = p.max_abs();
        if scale == T::zero() {
            return Ok(Expansion {
                terms: Vec::new(),
                residual: T::zero(),
            });
        }
        let label = p.pair().label().ok_or_else(|| {
            Error::InvalidArgument(format!("species {} is not a matched pair", p.pair()))
        })?;
        let Some(block) = self.block(label) else {
            return Ok(Expansion {
                terms: Vec::new(),
                residual: T::one(),
            });
        };
        let (inv_a, inv_b) = block.inverses()?;
        let n = block.size();
        let (rows, cols) = p.dims();
        let mut outside = T::zero();
        let mut grid = vec![vec![T::zero(); n]; n];
        for s in 0..rows {
            for t in 0..cols {
                let q = p.coeffs[s][t];
                if s >= n || t >= n {
                    outside = outside.max(q.abs());
                    continue;
                }
                for (i, row) in grid.iter_mut().enumerate() {
                    let wa = q * inv_a[(s, i)];
                    for (j, cell) in row.iter_mut().enumerate() {
                        *cell = *cell + wa * inv_b[(t, j)];
                    }
                }
            }
        }
        let mut terms = Vec::new();
        let mut unmatched = T::zero();
        for (i, row) in grid.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if j == n - 1 - i {
                    if c.abs() > T::tol(crate::polyalg::ZERO_TOL) * T::lit(100.0) * scale {
                        let idx = self
                            .index_of_rank(label, i)
                            .expect("block ranks are present in the state list");
                        terms.push((idx, c));
                    }
                } else {
                    unmatched = unmatched.max(c.abs());
                }
            }
        }
        terms.sort_by_key(|&(i, _)| i);
        Ok(Expansion {
            terms,
            residual: outside.max(unmatched) / scale,
        })
    }
}

/// The `2l + 1` harmonics of `ell`, sorted by `2E*`.
pub fn build_basis<T: Real>(ell: u32, config: &AsymmetryConfig<T>) -> Result<Vec<SpheroconalHarmonic<T>>> {
    Ok(Multiplet::build(ell, config)?.states)
}

/// Rotor energy `Q l(l+1)/2 + P (2E*)/2` in units with `ħ = 1`.
pub fn total_energy<T: Real>(state: &SpheroconalHarmonic<T>, config: &AsymmetryConfig<T>) -> Result<T> {
    let (q, p) = match (config.q(), config.p()) {
        (Some(q), Some(p)) => (q, p),
        _ => return Err(Error::MissingScale),
    };
    let ll = T::from_count((state.ell * (state.ell + 1)) as usize);
    Ok((q * ll + p * state.estar2) * T::lit(0.5))
}
