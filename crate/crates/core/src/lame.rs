//! Polynomial solutions of the Lamé equation `−Λ'' + l(l+1) k² sn² Λ = h Λ`.
//!
//! For each species `A` the ansatz `Λ = A(χ) Σ a_s sn^{2s}` turns the
//! equation into a tridiagonal eigenproblem. The matrix is not transcribed
//! from recurrence tables; it is generated by applying the operator to each
//! basis element with the polynomial algebra of [`crate::polyalg`].

use crate::error::{Error, Result};
use crate::linalg::{hessenberg_eigenvalues, symmetric_eigen, Mat};
use crate::polyalg::{Coord, SnPoly, Species};
use crate::scalar::Real;

/// Minimum spacing between two eigenvalues of one species.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// One Lamé polynomial `A(χ) P(sn²χ)` with `P(0) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LamePolynomial<T> {
    pub ell: u32,
    pub species: Species,
    /// Node count on the coordinate this polynomial was built for.
    pub n: u32,
    /// Rank of `h` within the species, starting from 0 for the lowest.
    pub rank: usize,
    pub h: T,
    pub poly: SnPoly<T>,
}

impl<T: Real> LamePolynomial<T> {
    pub fn eval(&self, chi: T) -> T {
        self.poly.eval(chi)
    }

    /// `−Λ'' + l(l+1) k² sn² Λ − h Λ` at `chi`, evaluated from the exact
    /// second derivative.
    pub fn ode_residual(&self, chi: T) -> T {
        let d2 = self.poly.differentiate().differentiate();
        let t = crate::elliptic::jacobi(chi, self.poly.ksq);
        let ll = T::from_count((self.ell * (self.ell + 1)) as usize);
        let lam = self.poly.eval_triple(&t);
        -d2.eval_triple(&t) + (ll * self.poly.ksq * t.sn * t.sn - self.h) * lam
    }
}

/// `true` if the species belongs to the parity kind of `ell`.
pub fn species_allowed(ell: u32, species: Species) -> bool {
    species.factor_count() % 2 == ell % 2
}

/// Number of polynomial coefficients (and eigenstates) for `(ell, species)`.
///
/// Species of the right kind with too many factors (e.g. `scd` at `l = 1`)
/// have size zero.
pub fn matrix_size(ell: u32, species: Species) -> Result<usize> {
    if !species_allowed(ell, species) {
        return Err(Error::WrongKind {
            ell,
            species: species.to_string(),
        });
    }
    let f = species.factor_count();
    Ok(if f > ell {
        0
    } else {
        ((ell - f) / 2 + 1) as usize
    })
}

/// The four species of the parity kind of `ell`.
pub fn species_of_kind(ell: u32) -> [Species; 4] {
    if ell % 2 == 0 {
        [Species::ONE, Species::SC, Species::SD, Species::CD]
    } else {
        [Species::S, Species::C, Species::D, Species::SCD]
    }
}

/// Lamé operator applied to `A sn^{2j}` for `j < N`, collected as
/// `M[i][j]` = coefficient of `A sn^{2i}`.
pub fn build_matrix<T: Real>(ell: u32, species: Species, ksq: T) -> Result<Mat<T>> {
    let n = matrix_size(ell, species)?;
    let ll = T::from_count((ell * (ell + 1)) as usize);
    let mut m = Mat::zeros(n, n);
    for j in 0..n {
        let mut coeffs = vec![T::zero(); j + 1];
        coeffs[j] = T::one();
        let basis = SnPoly::new(species, coeffs, ksq);
        let d2 = basis.differentiate().differentiate();
        let mut image = vec![T::zero(); j + 2];
        for (i, &c) in d2.coeffs.iter().enumerate() {
            image[i] = image[i] - c;
        }
        image[j + 1] = image[j + 1] + ll * ksq;
        for (i, &c) in image.iter().enumerate() {
            if i < n {
                m[(i, j)] = c;
            } else {
                // The leading power cancels exactly when N is the right size.
                let scale = T::one() + ll;
                debug_assert!(c.abs() <= T::tol(1e-12) * scale, "leading coefficient {c} does not cancel");
            }
        }
    }
    Ok(m)
}

/// Coefficients `(α, β, γ)` of the Lamé operator acting on the polynomial part:
/// `L[A P] = A (α P'' + β P' + γ P)` with derivatives in `u = sn²`.
fn reduced_operator<T: Real>(ell: u32, species: Species, ksq: T) -> [Vec<T>; 3] {
    let ll = T::from_count((ell * (ell + 1)) as usize);
    let apply = |p: Vec<T>| {
        let len = p.len();
        let d2 = SnPoly::new(species, p, ksq).differentiate().differentiate();
        let mut image = vec![T::zero(); len + 3];
        for (i, &c) in d2.coeffs.iter().enumerate() {
            image[i] = image[i] - c;
        }
        image[len] = image[len] + ll * ksq;
        image
    };
    let one = T::one();
    let two = T::lit(2.0);
    let gamma = apply(vec![one]);
    let lu = apply(vec![T::zero(), one]);
    let lu2 = apply(vec![T::zero(), T::zero(), one]);
    // L[u] = β + γ u,  L[u²] = 2α + 2β u + γ u²
    let beta: Vec<T> = (0..lu.len())
        .map(|i| lu[i] - if i >= 1 { gamma[i - 1] } else { T::zero() })
        .collect();
    let alpha: Vec<T> = (0..lu2.len())
        .map(|i| {
            let b = if i >= 1 { beta.get(i - 1).copied().unwrap_or_else(T::zero) } else { T::zero() };
            let g = if i >= 2 { gamma.get(i - 2).copied().unwrap_or_else(T::zero) } else { T::zero() };
            (lu2[i] - two * b - g) / two
        })
        .collect();
    [alpha, beta, gamma]
}

/// Composes `p(1 − v)`.
fn reflect<T: Real>(p: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); p.len()];
    let mut binom = vec![T::one(); p.len()];
    for (j, &c) in p.iter().enumerate() {
        if j > 0 {
            for i in (1..j).rev() {
                binom[i] = binom[i] + binom[i - 1];
            }
            binom[j] = T::one();
        }
        for i in 0..=j {
            let sign = if i % 2 == 0 { T::one() } else { -T::one() };
            out[i] = out[i] + sign * binom[i] * c;
        }
    }
    out
}

/// Tridiagonal matrix of the Lamé operator in the basis `A cn^{2j}`.
fn cn_basis_matrix<T: Real>(ell: u32, species: Species, ksq: T, n: usize) -> Mat<T> {
    let [alpha, beta, gamma] = reduced_operator(ell, species, ksq);
    let (alpha, beta, gamma) = (reflect(&alpha), reflect(&beta), reflect(&gamma));
    let mut m = Mat::zeros(n, n);
    for j in 0..n {
        let jf = T::from_count(j);
        let mut add = |shift: isize, poly: &[T], w: T| {
            for (d, &c) in poly.iter().enumerate() {
                let i = j as isize + shift + d as isize;
                if i >= 0 && (i as usize) < n {
                    m[(i as usize, j)] = m[(i as usize, j)] + w * c;
                }
            }
        };
        // d/du = −d/dv
        if j >= 2 {
            add(-2, &alpha, jf * (jf - T::one()));
        }
        if j >= 1 {
            add(-1, &beta, -jf);
        }
        add(0, &gamma, T::one());
    }
    m
}

/// Eigenpairs of a tridiagonal matrix with positive off-diagonal products,
/// through the symmetric matrix reached by a diagonal similarity.
fn symmetrized_eigen<T: Real>(m: &Mat<T>) -> Option<Vec<(T, Vec<T>)>> {
    let n = m.rows();
    let mut d = vec![T::one(); n];
    let mut s = Mat::zeros(n, n);
    for i in 0..n {
        s[(i, i)] = m[(i, i)];
        if i + 1 < n {
            let (up, down) = (m[(i, i + 1)], m[(i + 1, i)]);
            if !(up * down > T::zero()) {
                return None;
            }
            let off = (up * down).sqrt();
            s[(i, i + 1)] = off;
            s[(i + 1, i)] = off;
            d[i + 1] = d[i] * off / up;
        }
    }
    let (vals, vecs) = symmetric_eigen(&s);
    Some(
        vals.into_iter()
            .enumerate()
            .map(|(k, h)| (h, (0..n).map(|i| d[i] * vecs[(i, k)]).collect()))
            .collect(),
    )
}

/// Fallback for matrices that cannot be symmetrised: Hessenberg QR for the
/// eigenvalues and a null vector by forward substitution.
fn general_eigen<T: Real>(m: &Mat<T>) -> Result<Vec<(T, Vec<T>)>> {
    let n = m.rows();
    let raw = hessenberg_eigenvalues(m).ok_or_else(|| Error::Eigensolver("QR iteration did not converge".into()))?;
    let scale = m.max_abs().max(T::one());
    raw.into_iter()
        .map(|(h, im)| {
            if im.abs() > T::tol(1e-8) * scale {
                return Err(Error::Eigensolver(format!("complex eigenvalue {h} ± {im}i")));
            }
            let mut v = vec![T::zero(); n];
            v[0] = T::one();
            for i in 0..n.saturating_sub(1) {
                let mut acc = (m[(i, i)] - h) * v[i];
                if i > 0 {
                    acc = acc + m[(i, i - 1)] * v[i - 1];
                }
                if m[(i, i + 1)] == T::zero() {
                    return Err(Error::Eigensolver("reducible tridiagonal matrix".into()));
                }
                v[i + 1] = -acc / m[(i, i + 1)];
            }
            Ok((h, v))
        })
        .collect()
}

/// All Lamé polynomials of `(ell, species)` at `ksq`, by increasing `h`.
///
/// `coord` selects which node-base convention assigns `n`.
pub fn solve<T: Real>(ell: u32, species: Species, ksq: T, coord: Coord) -> Result<Vec<LamePolynomial<T>>> {
    let n = matrix_size(ell, species)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    // The cn² basis gives positive off-diagonal products for 0 < k² < 1;
    // the sn² basis does not, and its eigenvalues are badly conditioned.
    let cn = cn_basis_matrix(ell, species, ksq, n);
    let mut pairs = match symmetrized_eigen(&cn) {
        Some(p) => p
            .into_iter()
            .map(|(h, v)| (h, reflect(&v)))
            .collect::<Vec<_>>(),
        None => general_eigen(&build_matrix(ell, species, ksq)?)?,
    };
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite eigenvalues"));

    let scale = pairs.iter().fold(T::one(), |acc, (h, _)| acc.max(h.abs()));
    for w in pairs.windows(2) {
        let spacing = w[1].0 - w[0].0;
        if spacing < T::tol(DEGENERACY_TOL) * scale {
            return Err(Error::DegenerateEigenvalues {
                ell,
                species: species.to_string(),
                spacing: spacing.as_f64(),
            });
        }
    }
    let base = species.node_base(coord);
    pairs
        .into_iter()
        .enumerate()
        .map(|(rank, (h, v))| {
            let a0 = v[0];
            if a0.abs() <= T::tol(1e-14) * v.iter().fold(T::zero(), |m, x| m.max(x.abs())) {
                return Err(Error::Eigensolver("eigenvector has vanishing leading coefficient".into()));
            }
            Ok(LamePolynomial {
                ell,
                species,
                n: base + 2 * rank as u32,
                rank,
                h,
                poly: SnPoly::new(species, v.into_iter().map(|x| x / a0).collect(), ksq),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_sizes() {
        assert_eq!(matrix_size(4, Species::ONE).unwrap(), 3);
        assert_eq!(matrix_size(3, Species::SCD).unwrap(), 1);
        assert_eq!(matrix_size(0, Species::ONE).unwrap(), 1);
        assert_eq!(matrix_size(1, Species::SCD).unwrap(), 0);
        assert!(matches!(matrix_size(2, Species::S), Err(Error::WrongKind { .. })));
        for ell in 0..10 {
            let total: usize = species_of_kind(ell).iter().map(|&s| matrix_size(ell, s).unwrap()).sum();
            assert_eq!(total, 2 * ell as usize + 1);
        }
    }

    #[test]
    fn small_matrices() {
        let m = build_matrix(1, Species::D, 0.37).unwrap();
        assert_eq!(m.rows(), 1);
        assert!((m[(0, 0)] - 0.37f64).abs() < 1e-15);
        assert_eq!(build_matrix(0, Species::ONE, 0.5f64).unwrap()[(0, 0)], 0.0);
        // l = 2, species 1: basis {1, u}; −(u)'' = −2 + 4(1+k²)u − 6k²u², and 6k²u·{1,u}.
        let k = 0.3f64;
        let m = build_matrix(2, Species::ONE, k).unwrap();
        let want = [[0.0, -2.0], [6.0 * k, 4.0 * (1.0 + k)]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((m[(i, j)] - want[i][j]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn lowest_orders() {
        let s = solve(2, Species::ONE, 0.5f64, Coord::First).unwrap();
        let r3 = 3f64.sqrt();
        assert!((s[0].h - (3.0 - r3)).abs() < 1e-13);
        assert!((s[1].h - (3.0 + r3)).abs() < 1e-13);
        assert_eq!((s[0].n, s[1].n), (0, 2));
        // P = 1 − (h/2) u
        assert!((s[0].poly.coeffs[1] + s[0].h / 2.0).abs() < 1e-13);

        let c = solve(1, Species::C, 0.42f64, Coord::First).unwrap();
        assert_eq!(c.len(), 1);
        assert!((c[0].h - 1.0).abs() < 1e-15);
        assert_eq!(c[0].n, 1);
    }

    #[test]
    fn f32_solve() {
        let s = solve(3, Species::D, 0.3f32, Coord::First).unwrap();
        let root = (4.0f32 * 0.09 - 0.3 + 1.0).sqrt();
        assert!((s[0].h - (5.0 * 0.3 + 2.0 - 2.0 * root)).abs() < 1e-4);
    }
}
