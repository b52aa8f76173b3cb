//! Asymmetry parameters of a rigid rotor and the matching elliptic parameters.
//!
//! The rotor Hamiltonian `½(Lx²/I1 + Ly²/I2 + Lz²/I3)` is rewritten as
//! `½ Q L² + ½ P (e1 Lx² + e2 Ly² + e3 Lz²)` with `e1 ≥ e2 ≥ e3`,
//! `Σ e = 0` and `Σ e² = 3/2`. The spheroconal coordinates adapted to the
//! rotor use `k1² = (e2 − e3)/(e1 − e3)` and `k2² = (e1 − e2)/(e1 − e3)`.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Relative tolerance used to detect spherical and symmetric tops.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Validated asymmetry/geometry parameter bundle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymmetryConfig<T> {
    q: Option<T>,
    p: Option<T>,
    e: [T; 3],
    k1sq: T,
    k2sq: T,
}

impl<T: Real> AsymmetryConfig<T> {
    /// Builds the configuration from principal moments of inertia `i1 ≤ i2 ≤ i3`.
    pub fn from_moments(i1: T, i2: T, i3: T) -> Result<Self> {
        let finite = i1.is_finite() && i2.is_finite() && i3.is_finite();
        if !finite || i1 <= T::zero() {
            return Err(Error::InvalidOrdering(
                "moments of inertia must be finite and positive".into(),
            ));
        }
        if !(i1 <= i2 && i2 <= i3) {
            return Err(Error::InvalidOrdering(format!(
                "expected I1 <= I2 <= I3, got ({i1}, {i2}, {i3})"
            )));
        }
        let inv = [i1.recip(), i2.recip(), i3.recip()];
        let three = T::lit(3.0);
        let q = (inv[0] + inv[1] + inv[2]) / three;
        let d01 = inv[0] - inv[1];
        let d02 = inv[0] - inv[2];
        let d12 = inv[1] - inv[2];
        let p = (T::lit(2.0 / 9.0) * (d01 * d01 + d02 * d02 + d12 * d12)).sqrt();
        if p <= T::tol(DEGENERACY_TOL) * q {
            return Err(Error::SphericalTop { p: p.as_f64() });
        }
        let e = [(inv[0] - q) / p, (inv[1] - q) / p, (inv[2] - q) / p];
        let mut cfg = Self::from_e(e)?;
        cfg.q = Some(q);
        cfg.p = Some(p);
        Ok(cfg)
    }

    /// Pure-asymmetry configuration from `e1 ∈ (1/2, 1)`; `Q` and `P` stay unset.
    pub fn from_e1(e1: T) -> Result<Self> {
        let half = T::lit(0.5);
        if !(e1 > half && e1 < T::one()) {
            return Err(Error::OutOfRange { e1: e1.as_f64() });
        }
        // e2, e3 are the roots of t² + e1 t + (e1² − 3/4).
        let disc = (T::lit(3.0) * (T::one() - e1 * e1)).sqrt();
        let e2 = (-e1 + disc) * half;
        let e3 = (-e1 - disc) * half;
        Self::from_e([e1, e2, e3])
    }

    fn from_e(e: [T; 3]) -> Result<Self> {
        let span = e[0] - e[2];
        let k1sq = (e[1] - e[2]) / span;
        let k2sq = (e[0] - e[1]) / span;
        let tol = T::tol(DEGENERACY_TOL);
        if k2sq <= tol {
            return Err(Error::SymmetricTop {
                which: "e1 = e2 (oblate limit, k2^2 -> 0)",
                k1sq: k1sq.as_f64(),
            });
        }
        if k1sq <= tol {
            return Err(Error::SymmetricTop {
                which: "e2 = e3 (prolate limit, k1^2 -> 0)",
                k1sq: k1sq.as_f64(),
            });
        }
        Ok(Self {
            q: None,
            p: None,
            e,
            k1sq,
            k2sq,
        })
    }

    pub fn q(&self) -> Option<T> {
        self.q
    }

    pub fn p(&self) -> Option<T> {
        self.p
    }

    /// `(e1, e2, e3)`, sorted decreasingly.
    pub fn e(&self) -> [T; 3] {
        self.e
    }

    pub fn e1(&self) -> T {
        self.e[0]
    }

    pub fn e2(&self) -> T {
        self.e[1]
    }

    pub fn e3(&self) -> T {
        self.e[2]
    }

    pub fn k1sq(&self) -> T {
        self.k1sq
    }

    pub fn k2sq(&self) -> T {
        self.k2sq
    }

    /// Residuals of `Σe = 0`, `Σe² = 3/2` and `k1² + k2² = 1`.
    pub fn constraint_residuals(&self) -> [T; 3] {
        let [a, b, c] = self.e;
        [
            (a + b + c).abs(),
            (a * a + b * b + c * c - T::lit(1.5)).abs(),
            (self.k1sq + self.k2sq - T::one()).abs(),
        ]
    }
}
