//! Jacobi elliptic functions and the complete elliptic integral of the first kind.
//!
//! The parameter is always `m = k²`, never the modulus `k`.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Values of `sn`, `cn`, `dn` at one point `(u | k²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiTriple<T> {
    pub sn: T,
    pub cn: T,
    pub dn: T,
}

const MAX_AGM_STEPS: usize = 40;

/// Evaluates `sn`, `cn`, `dn` by the descending AGM (Landen) scheme.
///
/// `ksq` must lie in `[0, 1]`; values outside are clamped.
pub fn jacobi<T: Real>(u: T, ksq: T) -> JacobiTriple<T> {
    let m = ksq.max(T::zero()).min(T::one());
    if m == T::zero() {
        return JacobiTriple {
            sn: u.sin(),
            cn: u.cos(),
            dn: T::one(),
        };
    }
    if m == T::one() {
        let sech = u.cosh().recip();
        return JacobiTriple {
            sn: u.tanh(),
            cn: sech,
            dn: sech,
        };
    }

    let mut a = [T::zero(); MAX_AGM_STEPS + 1];
    let mut c = [T::zero(); MAX_AGM_STEPS + 1];
    a[0] = T::one();
    let mut b = (T::one() - m).sqrt();
    c[0] = m.sqrt();
    let eps = T::epsilon();
    let mut n = 0;
    while n < MAX_AGM_STEPS && c[n].abs() > eps {
        let an = a[n];
        a[n + 1] = (an + b) * T::lit(0.5);
        c[n + 1] = (an - b) * T::lit(0.5);
        b = (an * b).sqrt();
        n += 1;
    }

    let mut phi = T::lit(2.0).powi(n as i32) * a[n] * u;
    for j in (1..=n).rev() {
        let s = (c[j] / a[j] * phi.sin()).max(-T::one()).min(T::one());
        phi = (phi + s.asin()) * T::lit(0.5);
    }
    let sn = phi.sin();
    let cn = phi.cos();
    let dn = (T::one() - m * sn * sn).max(T::zero()).sqrt();
    JacobiTriple { sn, cn, dn }
}

/// Arithmetic-geometric mean of two non-negative numbers.
pub fn agm<T: Real>(mut a: T, mut b: T) -> T {
    for _ in 0..MAX_AGM_STEPS {
        if (a - b).abs() <= T::epsilon() * a {
            break;
        }
        let next = (a + b) * T::lit(0.5);
        b = (a * b).sqrt();
        a = next;
    }
    (a + b) * T::lit(0.5)
}

/// Complete elliptic integral of the first kind `K(k²)`.
pub fn quarter_period<T: Real>(ksq: T) -> Result<T> {
    if !(ksq >= T::zero() && ksq <= T::one()) {
        return Err(Error::ParameterRange(ksq.as_f64()));
    }
    if ksq == T::one() {
        return Err(Error::Divergent);
    }
    Ok(T::FRAC_PI_2() / agm(T::one(), (T::one() - ksq).sqrt()))
}
