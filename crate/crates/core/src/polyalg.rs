//! Algebra of species-prefactored polynomials in `sn²`.
//!
//! A single-coordinate function is `s^a c^b d^g · P(u)` with `u = sn²(χ)` and
//! `a, b, g ∈ {0, 1}` (the species). Every derivative or multiplication by
//! `s`, `c` or `d` maps such a function to another of the same shape once
//! `c² = 1 − u` and `d² = 1 − k² u` are substituted, so all operator algebra
//! in the crate reduces to coefficient arithmetic on `P`.
//!
//! Two-coordinate functions (`BiSnPoly`) carry one species per coordinate and a
//! coefficient matrix in `u1^i u2^j`.

use std::fmt;
use std::str::FromStr;

use crate::elliptic::{jacobi, JacobiTriple};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::Real;

/// Threshold (relative to input scale) under which a polynomial counts as zero.
pub const ZERO_TOL: f64 = 1e-13;
/// Relative remainder accepted by [`BiSnPoly::divide_by_scale`].
pub const DIVISION_TOL: f64 = 1e-10;
/// Condition number above which [`invert_basis`] reports a singular basis.
pub const MAX_BASIS_CONDITION: f64 = 1e12;

/// One of the three Jacobi factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Factor {
    S,
    C,
    D,
}

impl Factor {
    fn bit(self) -> u8 {
        match self {
            Factor::S => 1,
            Factor::C => 2,
            Factor::D => 4,
        }
    }
}

/// Singularity-factor species: a subset of `{s, c, d}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Species(u8);

/// Which spheroconal coordinate a Lamé factor lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coord {
    First,
    Second,
}

impl Species {
    pub const ONE: Species = Species(0);
    pub const S: Species = Species(1);
    pub const C: Species = Species(2);
    pub const SC: Species = Species(3);
    pub const D: Species = Species(4);
    pub const SD: Species = Species(5);
    pub const CD: Species = Species(6);
    pub const SCD: Species = Species(7);

    pub const ALL: [Species; 8] = [
        Species::ONE,
        Species::S,
        Species::C,
        Species::D,
        Species::CD,
        Species::SD,
        Species::SC,
        Species::SCD,
    ];

    pub fn from_bits(s: bool, c: bool, d: bool) -> Self {
        Species(s as u8 | (c as u8) << 1 | (d as u8) << 2)
    }

    pub fn has(self, f: Factor) -> bool {
        self.0 & f.bit() != 0
    }

    /// Number of factors, i.e. the polynomial degree in `sn` of the prefactor.
    pub fn factor_count(self) -> u32 {
        self.0.count_ones()
    }

    /// Species obtained by one differentiation: every factor toggles.
    pub fn differentiated(self) -> Self {
        Species(self.0 ^ 7)
    }

    pub fn toggled(self, f: Factor) -> Self {
        Species(self.0 ^ f.bit())
    }

    /// Nodes contributed by the prefactor on the given coordinate side.
    pub fn node_base(self, coord: Coord) -> u32 {
        match coord {
            Coord::First => self.has(Factor::C) as u32 + self.has(Factor::S) as u32,
            Coord::Second => self.has(Factor::S) as u32,
        }
    }

    /// Conventional name; coordinate 1 lists factors as `d c s`, coordinate 2 as `s c d`.
    pub fn name(self, coord: Coord) -> String {
        if self.0 == 0 {
            return "1".into();
        }
        let order: [(Factor, char); 3] = match coord {
            Coord::First => [(Factor::D, 'd'), (Factor::C, 'c'), (Factor::S, 's')],
            Coord::Second => [(Factor::S, 's'), (Factor::C, 'c'), (Factor::D, 'd')],
        };
        order
            .iter()
            .filter(|(f, _)| self.has(*f))
            .map(|&(_, ch)| ch)
            .collect()
    }
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name(Coord::Second))
    }
}

impl FromStr for Species {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "1" {
            return Ok(Species::ONE);
        }
        let mut bits = 0u8;
        for ch in s.chars() {
            let b = match ch {
                's' => 1,
                'c' => 2,
                'd' => 4,
                _ => return Err(Error::InvalidArgument(format!("unknown species '{s}'"))),
            };
            if bits & b != 0 {
                return Err(Error::InvalidArgument(format!("repeated factor in '{s}'")));
            }
            bits |= b;
        }
        if bits == 0 {
            return Err(Error::InvalidArgument("empty species".into()));
        }
        Ok(Species(bits))
    }
}

/// Cartesian parity label of a matched pair: the set of odd axes among `{x, y, z}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CartesianLabel(u8);

impl CartesianLabel {
    pub const ONE: CartesianLabel = CartesianLabel(0);
    pub const X: CartesianLabel = CartesianLabel(1);
    pub const Y: CartesianLabel = CartesianLabel(2);
    pub const Z: CartesianLabel = CartesianLabel(4);
    pub const XY: CartesianLabel = CartesianLabel(3);
    pub const XZ: CartesianLabel = CartesianLabel(5);
    pub const YZ: CartesianLabel = CartesianLabel(6);
    pub const XYZ: CartesianLabel = CartesianLabel(7);

    /// Canonical ordering used for deterministic output.
    pub const ORDER: [CartesianLabel; 8] = [
        CartesianLabel::ONE,
        CartesianLabel::X,
        CartesianLabel::Y,
        CartesianLabel::Z,
        CartesianLabel::XY,
        CartesianLabel::XZ,
        CartesianLabel::YZ,
        CartesianLabel::XYZ,
    ];

    pub fn from_axes(x: bool, y: bool, z: bool) -> Self {
        CartesianLabel(x as u8 | (y as u8) << 1 | (z as u8) << 2)
    }

    pub fn x(self) -> bool {
        self.0 & 1 != 0
    }

    pub fn y(self) -> bool {
        self.0 & 2 != 0
    }

    pub fn z(self) -> bool {
        self.0 & 4 != 0
    }

    /// Number of odd axes; its parity equals the parity of `l`.
    pub fn odd_count(self) -> u32 {
        self.0.count_ones()
    }

    /// Label toggled by the given set of axes.
    pub fn toggled(self, axes: CartesianLabel) -> Self {
        CartesianLabel(self.0 ^ axes.0)
    }

    /// Position in [`CartesianLabel::ORDER`].
    pub fn rank(self) -> usize {
        Self::ORDER.iter().position(|&l| l == self).unwrap_or(0)
    }

    /// `(Πx, Πy, Πz)` as ±1.
    pub fn parities(self) -> [i8; 3] {
        let p = |odd: bool| if odd { -1 } else { 1 };
        [p(self.x()), p(self.y()), p(self.z())]
    }

    pub fn pair(self) -> SpeciesPair {
        SpeciesPair {
            a: Species::from_bits(self.z(), self.y(), self.x()),
            b: Species::from_bits(self.x(), self.y(), self.z()),
        }
    }
}

impl fmt::Display for CartesianLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return f.write_str("1");
        }
        for (odd, ch) in [(self.x(), 'x'), (self.y(), 'y'), (self.z(), 'z')] {
            if odd {
                write!(f, "{ch}")?;
            }
        }
        Ok(())
    }
}

/// Matched `(A, B)` species for the two coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpeciesPair {
    pub a: Species,
    pub b: Species,
}

impl SpeciesPair {
    /// Returns the cartesian label if `(a, b)` is a matched pair.
    pub fn label(self) -> Option<CartesianLabel> {
        let l = CartesianLabel::from_axes(
            self.a.has(Factor::D),
            self.a.has(Factor::C),
            self.a.has(Factor::S),
        );
        (l.pair() == self).then_some(l)
    }

    pub fn from_label(label: CartesianLabel) -> Self {
        label.pair()
    }
}

impl fmt::Display for SpeciesPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a.name(Coord::First), self.b.name(Coord::Second))
    }
}

mod dense {
    use crate::scalar::Real;

    pub fn mul<T: Real>(p: &[T], q: &[T]) -> Vec<T> {
        if p.is_empty() || q.is_empty() {
            return Vec::new();
        }
        let mut out = vec![T::zero(); p.len() + q.len() - 1];
        for (i, &a) in p.iter().enumerate() {
            for (j, &b) in q.iter().enumerate() {
                out[i + j] = out[i + j] + a * b;
            }
        }
        out
    }

    pub fn add<T: Real>(p: &[T], q: &[T]) -> Vec<T> {
        let n = p.len().max(q.len());
        (0..n)
            .map(|i| p.get(i).copied().unwrap_or_else(T::zero) + q.get(i).copied().unwrap_or_else(T::zero))
            .collect()
    }

    pub fn scale<T: Real>(p: &[T], s: T) -> Vec<T> {
        p.iter().map(|&a| a * s).collect()
    }

    pub fn derivative<T: Real>(p: &[T]) -> Vec<T> {
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| a * T::from_count(i))
            .collect()
    }

    pub fn eval<T: Real>(p: &[T], u: T) -> T {
        p.iter().rev().fold(T::zero(), |acc, &a| acc * u + a)
    }

    /// Drops exactly-zero trailing coefficients.
    pub fn trim<T: Real>(mut p: Vec<T>) -> Vec<T> {
        while p.last().is_some_and(|x| *x == T::zero()) {
            p.pop();
        }
        p
    }
}

/// Coefficients of `d/dχ [A(χ) P(u)]` as a polynomial multiplying the toggled species.
fn differentiate_coeffs<T: Real>(species: Species, p: &[T], ksq: T) -> Vec<T> {
    let one = T::one();
    let u: [T; 2] = [T::zero(), one];
    let c2: [T; 2] = [one, -one];
    let d2: [T; 2] = [one, -ksq];
    let (a, b, g) = (
        species.has(Factor::S),
        species.has(Factor::C),
        species.has(Factor::D),
    );
    let pick = |flag: bool, f: &[T]| if flag { f.to_vec() } else { vec![one] };
    let mut out = Vec::new();
    if a {
        let t = dense::mul(&dense::mul(&pick(b, &c2), &pick(g, &d2)), p);
        out = dense::add(&out, &t);
    }
    if b {
        let t = dense::mul(&dense::mul(&pick(a, &u), &pick(g, &d2)), p);
        out = dense::add(&out, &dense::scale(&t, -one));
    }
    if g {
        let t = dense::mul(&dense::mul(&pick(a, &u), &pick(b, &c2)), p);
        out = dense::add(&out, &dense::scale(&t, -ksq));
    }
    let dp = dense::derivative(p);
    if !dp.is_empty() {
        let w = dense::mul(&dense::mul(&pick(a, &u), &pick(b, &c2)), &pick(g, &d2));
        let t = dense::mul(&w, &dp);
        out = dense::add(&out, &dense::scale(&t, T::lit(2.0)));
    }
    dense::trim(out)
}

/// Coefficients after multiplying `A(χ) P(u)` by one Jacobi factor.
fn mul_factor_coeffs<T: Real>(species: Species, p: &[T], f: Factor, ksq: T) -> Vec<T> {
    if !species.has(f) {
        return p.to_vec();
    }
    let one = T::one();
    let square: [T; 2] = match f {
        Factor::S => [T::zero(), one],
        Factor::C => [one, -one],
        Factor::D => [one, -ksq],
    };
    dense::trim(dense::mul(p, &square))
}

fn species_prefactor<T: Real>(species: Species, t: &JacobiTriple<T>) -> T {
    let mut v = T::one();
    if species.has(Factor::S) {
        v = v * t.sn;
    }
    if species.has(Factor::C) {
        v = v * t.cn;
    }
    if species.has(Factor::D) {
        v = v * t.dn;
    }
    v
}

/// `A(χ) Σ coeffs[s] sn^{2s}(χ | k²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SnPoly<T> {
    pub species: Species,
    pub coeffs: Vec<T>,
    pub ksq: T,
}

impl<T: Real> SnPoly<T> {
    pub fn new(species: Species, coeffs: Vec<T>, ksq: T) -> Self {
        Self {
            species,
            coeffs,
            ksq,
        }
    }

    pub fn zero(species: Species, ksq: T) -> Self {
        Self::new(species, Vec::new(), ksq)
    }

    pub fn max_abs(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, &c| m.max(c.abs()))
    }

    /// True if every coefficient is below `ZERO_TOL × scale`.
    pub fn is_negligible(&self, scale: T) -> bool {
        self.max_abs() <= T::tol(ZERO_TOL) * scale
    }

    /// The polynomial part `P(u)` at `u = sn²`.
    pub fn eval_poly(&self, u: T) -> T {
        dense::eval(&self.coeffs, u)
    }

    pub fn eval_triple(&self, t: &JacobiTriple<T>) -> T {
        species_prefactor(self.species, t) * self.eval_poly(t.sn * t.sn)
    }

    pub fn eval(&self, chi: T) -> T {
        self.eval_triple(&jacobi(chi, self.ksq))
    }

    /// `d/dχ`, reduced to the `sn²` basis of the toggled species.
    pub fn differentiate(&self) -> Self {
        Self::new(
            self.species.differentiated(),
            differentiate_coeffs(self.species, &self.coeffs, self.ksq),
            self.ksq,
        )
    }

    /// Multiplication by `s`, `c` or `d`.
    pub fn mul_factor(&self, f: Factor) -> Self {
        Self::new(
            self.species.toggled(f),
            mul_factor_coeffs(self.species, &self.coeffs, f, self.ksq),
            self.ksq,
        )
    }

    /// Substitutes `c² → 1 − u`, `d² → 1 − k²u`. The stored form is already
    /// reduced, so this only normalises trailing zeros.
    pub fn reduce(&self) -> Self {
        Self::new(self.species, dense::trim(self.coeffs.clone()), self.ksq)
    }
}

/// `A(χ1) B(χ2) Σ coeffs[i][j] sn^{2i}(χ1) sn^{2j}(χ2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiSnPoly<T> {
    pub species_a: Species,
    pub species_b: Species,
    /// Row `i` multiplies `u1^i`; every row has the same length.
    pub coeffs: Vec<Vec<T>>,
    pub k1sq: T,
    pub k2sq: T,
}

impl<T: Real> BiSnPoly<T> {
    pub fn new(species_a: Species, species_b: Species, coeffs: Vec<Vec<T>>, k1sq: T, k2sq: T) -> Self {
        let width = coeffs.iter().map(Vec::len).max().unwrap_or(0);
        let coeffs = coeffs
            .into_iter()
            .map(|mut r| {
                r.resize(width, T::zero());
                r
            })
            .collect();
        Self {
            species_a,
            species_b,
            coeffs,
            k1sq,
            k2sq,
        }
    }

    pub fn zero(pair: SpeciesPair, k1sq: T, k2sq: T) -> Self {
        Self::new(pair.a, pair.b, Vec::new(), k1sq, k2sq)
    }

    /// Outer product of two single-coordinate polynomials.
    pub fn from_product(p1: &SnPoly<T>, p2: &SnPoly<T>) -> Self {
        let coeffs = p1
            .coeffs
            .iter()
            .map(|&a| p2.coeffs.iter().map(|&b| a * b).collect())
            .collect();
        Self::new(p1.species, p2.species, coeffs, p1.ksq, p2.ksq)
    }

    /// Constant `1` in species `(1, 1)`.
    pub fn one(k1sq: T, k2sq: T) -> Self {
        Self::new(Species::ONE, Species::ONE, vec![vec![T::one()]], k1sq, k2sq)
    }

    pub fn pair(&self) -> SpeciesPair {
        SpeciesPair {
            a: self.species_a,
            b: self.species_b,
        }
    }

    /// `(degree in u1 + 1, degree in u2 + 1)` of the stored block.
    pub fn dims(&self) -> (usize, usize) {
        (self.coeffs.len(), self.coeffs.first().map_or(0, Vec::len))
    }

    pub fn coeff(&self, i: usize, j: usize) -> T {
        self.coeffs
            .get(i)
            .and_then(|r| r.get(j))
            .copied()
            .unwrap_or_else(T::zero)
    }

    pub fn max_abs(&self) -> T {
        self.coeffs
            .iter()
            .flatten()
            .fold(T::zero(), |m, &c| m.max(c.abs()))
    }

    pub fn is_negligible(&self, scale: T) -> bool {
        self.max_abs() <= T::tol(ZERO_TOL) * scale
    }

    pub fn eval_triples(&self, t1: &JacobiTriple<T>, t2: &JacobiTriple<T>) -> T {
        let u1 = t1.sn * t1.sn;
        let u2 = t2.sn * t2.sn;
        let poly = self
            .coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, row| acc * u1 + dense::eval(row, u2));
        species_prefactor(self.species_a, t1) * species_prefactor(self.species_b, t2) * poly
    }

    pub fn eval(&self, chi1: T, chi2: T) -> T {
        self.eval_triples(&jacobi(chi1, self.k1sq), &jacobi(chi2, self.k2sq))
    }

    fn map_columns(&self, species_a: Species, f: impl Fn(&[T]) -> Vec<T>) -> Self {
        let (rows, cols) = self.dims();
        let columns: Vec<Vec<T>> = (0..cols)
            .map(|j| f(&(0..rows).map(|i| self.coeffs[i][j]).collect::<Vec<_>>()))
            .collect();
        let height = columns.iter().map(Vec::len).max().unwrap_or(0);
        let coeffs = (0..height)
            .map(|i| columns.iter().map(|c| c.get(i).copied().unwrap_or_else(T::zero)).collect())
            .collect();
        Self::new(species_a, self.species_b, coeffs, self.k1sq, self.k2sq)
    }

    fn map_rows(&self, species_b: Species, f: impl Fn(&[T]) -> Vec<T>) -> Self {
        let coeffs = self.coeffs.iter().map(|r| f(r)).collect();
        Self::new(self.species_a, species_b, coeffs, self.k1sq, self.k2sq)
    }

    /// `∂/∂χ1`.
    pub fn diff1(&self) -> Self {
        let (sp, k) = (self.species_a, self.k1sq);
        self.map_columns(sp.differentiated(), |c| differentiate_coeffs(sp, c, k))
    }

    /// `∂/∂χ2`.
    pub fn diff2(&self) -> Self {
        let (sp, k) = (self.species_b, self.k2sq);
        self.map_rows(sp.differentiated(), |r| differentiate_coeffs(sp, r, k))
    }

    /// Multiplication by a Jacobi factor of `χ1`.
    pub fn mul1(&self, f: Factor) -> Self {
        let (sp, k) = (self.species_a, self.k1sq);
        self.map_columns(sp.toggled(f), |c| mul_factor_coeffs(sp, c, f, k))
    }

    /// Multiplication by a Jacobi factor of `χ2`.
    pub fn mul2(&self, f: Factor) -> Self {
        let (sp, k) = (self.species_b, self.k2sq);
        self.map_rows(sp.toggled(f), |r| mul_factor_coeffs(sp, r, f, k))
    }

    pub fn scale(&self, s: T) -> Self {
        let coeffs = self.coeffs.iter().map(|r| dense::scale(r, s)).collect();
        Self::new(self.species_a, self.species_b, coeffs, self.k1sq, self.k2sq)
    }

    /// Sum of two polynomials of the same species pair. An all-zero operand
    /// is accepted whatever its species.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.max_abs() == T::zero() {
            return Ok(other.clone());
        }
        if other.max_abs() == T::zero() {
            return Ok(self.clone());
        }
        if self.pair() != other.pair() {
            return Err(Error::InvalidArgument(format!(
                "cannot add species {} and {}",
                self.pair(),
                other.pair()
            )));
        }
        let rows = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..rows)
            .map(|i| {
                let empty = Vec::new();
                dense::add(self.coeffs.get(i).unwrap_or(&empty), other.coeffs.get(i).unwrap_or(&empty))
            })
            .collect();
        Ok(Self::new(self.species_a, self.species_b, coeffs, self.k1sq, self.k2sq))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-T::one()))
    }

    /// Multiplication by `1 − k1² u1 − k2² u2`.
    pub fn multiply_by_scale(&self) -> Self {
        let (rows, cols) = self.dims();
        if rows == 0 || cols == 0 {
            return self.clone();
        }
        let mut out = vec![vec![T::zero(); cols + 1]; rows + 1];
        for i in 0..rows {
            for j in 0..cols {
                let c = self.coeffs[i][j];
                out[i][j] = out[i][j] + c;
                out[i + 1][j] = out[i + 1][j] - self.k1sq * c;
                out[i][j + 1] = out[i][j + 1] - self.k2sq * c;
            }
        }
        Self::new(self.species_a, self.species_b, out, self.k1sq, self.k2sq)
    }

    /// Exact division by `1 − k1² u1 − k2² u2`.
    ///
    /// Fails with `NotDivisible` when the remainder exceeds `DIVISION_TOL`
    /// relative to the largest coefficient of `self`.
    pub fn divide_by_scale(&self) -> Result<Self> {
        let (q, remainder) = self.scale_division();
        if remainder > T::tol(DIVISION_TOL) {
            return Err(Error::NotDivisible {
                remainder: remainder.as_f64(),
            });
        }
        Ok(q)
    }

    /// Quotient by `1 − k1² u1 − k2² u2` and the remainder's largest
    /// coefficient relative to that of `self`.
    pub fn scale_division(&self) -> (Self, T) {
        let scale = self.max_abs();
        if scale == T::zero() {
            return (Self::zero(self.pair(), self.k1sq, self.k2sq), T::zero());
        }
        let (rows, cols) = self.trimmed_dims(T::zero());
        if rows < 2 || cols < 2 {
            return (Self::zero(self.pair(), self.k1sq, self.k2sq), T::one());
        }
        let (qr, qc) = (rows - 1, cols - 1);
        let mut q = vec![vec![T::zero(); qc]; qr];
        for i in 0..qr {
            for j in 0..qc {
                let mut v = self.coeffs[i][j];
                if i > 0 {
                    v = v + self.k1sq * q[i - 1][j];
                }
                if j > 0 {
                    v = v + self.k2sq * q[i][j - 1];
                }
                q[i][j] = v;
            }
        }
        let quotient = Self::new(self.species_a, self.species_b, q, self.k1sq, self.k2sq);
        let rest = self
            .sub(&quotient.multiply_by_scale())
            .expect("quotient shares the species of the dividend");
        (quotient, rest.max_abs() / scale)
    }

    /// Dimensions after discarding trailing rows/columns whose entries are all `≤ tol`.
    pub fn trimmed_dims(&self, tol: T) -> (usize, usize) {
        let (rows, cols) = self.dims();
        let mut r = rows;
        while r > 0 && self.coeffs[r - 1].iter().all(|c| c.abs() <= tol) {
            r -= 1;
        }
        let mut c = cols;
        while c > 0 && (0..r).all(|i| self.coeffs[i][c - 1].abs() <= tol) {
            c -= 1;
        }
        (r, c)
    }
}

/// Inverse of the coefficient matrix `rows[n][s] = ā_s(h_n)` of a full Lamé
/// eigenbasis. Column `n` of row `s` of the result expresses `A sn^{2s}` in
/// that eigenbasis.
pub fn invert_basis<T: Real>(forward: &Mat<T>) -> Result<Mat<T>> {
    if forward.rows() != forward.cols() {
        return Err(Error::InvalidArgument("basis matrix must be square".into()));
    }
    let inv = forward.inverse().ok_or(Error::Singular {
        condition: f64::INFINITY,
    })?;
    let cond = forward.norm1() * inv.norm1();
    if !(cond <= T::lit(MAX_BASIS_CONDITION)) {
        return Err(Error::Singular {
            condition: cond.as_f64(),
        });
    }
    Ok(inv)
}
