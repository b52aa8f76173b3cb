//! Ladder actions on spheroconal harmonics: complementary node shifts within a
//! species, angular-momentum components at fixed `l`, and linear-momentum
//! components connecting `l` with `l ± 1`.
//!
//! Angular momentum is reported as `L_i / (iħ)`. With the bracket operators
//! `B_i` below this is `−B_i Ψ / H`, where `H = 1 − k1² sn²χ1 − k2² sn²χ2`.
//! On the unit sphere the transverse gradient of a function is
//! `G_i = P_i Ψ / H` with the companion brackets `P_i`.

use std::fmt;
use std::str::FromStr;

use crate::asymmetry::AsymmetryConfig;
use crate::error::{Error, Result};
use crate::harmonics::{Expansion, Multiplet, SpheroconalHarmonic, StateId};
use crate::linalg::{least_squares, Mat};
use crate::polyalg::{BiSnPoly, CartesianLabel, Coord, Factor, SnPoly, Species, SpeciesPair};
use crate::scalar::Real;

/// Largest expansion residual accepted when projecting an action on a basis.
pub const PROJECTION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn label(self) -> CartesianLabel {
        match self {
            Axis::X => CartesianLabel::X,
            Axis::Y => CartesianLabel::Y,
            Axis::Z => CartesianLabel::Z,
        }
    }

    fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operator {
    Lx,
    Ly,
    Lz,
    Px,
    Py,
    Pz,
}

impl Operator {
    pub const ALL: [Operator; 6] = [
        Operator::Lx,
        Operator::Ly,
        Operator::Lz,
        Operator::Px,
        Operator::Py,
        Operator::Pz,
    ];

    pub fn angular(axis: Axis) -> Self {
        match axis {
            Axis::X => Operator::Lx,
            Axis::Y => Operator::Ly,
            Axis::Z => Operator::Lz,
        }
    }

    pub fn linear(axis: Axis) -> Self {
        match axis {
            Axis::X => Operator::Px,
            Axis::Y => Operator::Py,
            Axis::Z => Operator::Pz,
        }
    }

    pub fn axis(self) -> Axis {
        match self {
            Operator::Lx | Operator::Px => Axis::X,
            Operator::Ly | Operator::Py => Axis::Y,
            Operator::Lz | Operator::Pz => Axis::Z,
        }
    }

    pub fn is_angular(self) -> bool {
        matches!(self, Operator::Lx | Operator::Ly | Operator::Lz)
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Operator::Lx => "Lx",
            Operator::Ly => "Ly",
            Operator::Lz => "Lz",
            Operator::Px => "Px",
            Operator::Py => "Py",
            Operator::Pz => "Pz",
        };
        f.write_str(s)
    }
}

impl FromStr for Operator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Operator::ALL
            .into_iter()
            .find(|op| op.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown operator '{s}' (expected Lx, Ly, Lz, Px, Py or Pz)")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `n1 → n1 + 2`, `n2 → n2 − 2`.
    Up,
    Down,
}

/// What the coefficients of a [`LadderDecomposition`] multiply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convention {
    /// `L_i Ψ / (iħ)` on the same multiplet.
    ActionOverIHbar,
    /// `l − 1` terms: `∂_i (r^l Ψ) / r^(l−1)`. `l + 1` terms: the harmonic
    /// part of `(x_i / r) Ψ`.
    SolidHarmonic,
    /// Transverse gradient `r ∇_i Ψ` with the scale factor divided out.
    AngularBracket,
}

impl Convention {
    pub fn as_str(self) -> &'static str {
        match self {
            Convention::ActionOverIHbar => "action divided by iħ",
            Convention::SolidHarmonic => "solid harmonic gradient (l-1) and raised harmonic part (l+1)",
            Convention::AngularBracket => "angular bracket term, scale factor cancelled",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term<T> {
    pub target: StateId,
    pub coefficient: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LadderDecomposition<T> {
    pub operator: Operator,
    pub source: StateId,
    pub terms: Vec<Term<T>>,
    pub convention: Convention,
    /// Largest relative expansion residual over the projected pieces.
    pub residual: T,
}

impl<T: Real> LadderDecomposition<T> {
    pub fn coefficient(&self, target: &StateId) -> T {
        self.terms
            .iter()
            .find(|t| t.target == *target)
            .map_or_else(T::zero, |t| t.coefficient)
    }
}

/// Target species of an operator. Angular components flip the parities of
/// the other two axes; linear ones flip their own.
pub fn species_transition(op: Operator, pair: SpeciesPair) -> Result<SpeciesPair> {
    let label = pair
        .label()
        .ok_or_else(|| Error::InvalidArgument(format!("species {pair} is not a matched pair")))?;
    let flip = match op {
        Operator::Lx => CartesianLabel::YZ,
        Operator::Ly => CartesianLabel::XZ,
        Operator::Lz => CartesianLabel::XY,
        Operator::Px => CartesianLabel::X,
        Operator::Py => CartesianLabel::Y,
        Operator::Pz => CartesianLabel::Z,
    };
    Ok(label.toggled(flip).pair())
}

fn bracket_term<T: Real>(p: &BiSnPoly<T>, c: T, deriv: Coord, f1: &[Factor], f2: &[Factor]) -> BiSnPoly<T> {
    let mut q = match deriv {
        Coord::First => p.diff1(),
        Coord::Second => p.diff2(),
    };
    for &f in f1 {
        q = q.mul1(f);
    }
    for &f in f2 {
        q = q.mul2(f);
    }
    q.scale(c)
}

/// The derivative bracket of `op` applied to `p`, before division by `H`.
pub fn bracket<T: Real>(op: Operator, p: &BiSnPoly<T>) -> Result<BiSnPoly<T>> {
    use Coord::{First, Second};
    use Factor::{C, D, S};
    let one = T::one();
    let (k1, k2) = (p.k1sq, p.k2sq);
    let (a, b) = match op {
        Operator::Lx => (
            bracket_term(p, one, First, &[D], &[C, D]),
            bracket_term(p, k1, Second, &[S, C], &[S]),
        ),
        Operator::Ly => (
            bracket_term(p, -one, First, &[C], &[S, D]),
            bracket_term(p, one, Second, &[S, D], &[C]),
        ),
        Operator::Lz => (
            bracket_term(p, -k2, First, &[S], &[S, C]),
            bracket_term(p, -one, Second, &[C, D], &[D]),
        ),
        Operator::Px => (
            bracket_term(p, -k1, First, &[S, C], &[S]),
            bracket_term(p, one, Second, &[D], &[C, D]),
        ),
        Operator::Py => (
            bracket_term(p, -one, First, &[S, D], &[C]),
            bracket_term(p, -one, Second, &[C], &[S, D]),
        ),
        Operator::Pz => (
            bracket_term(p, one, First, &[C, D], &[D]),
            bracket_term(p, -k2, Second, &[S], &[S, C]),
        ),
    };
    a.add(&b)
}

/// `(x_i / r) p` for the direction cosine of `axis`.
pub fn direction_cosine_product<T: Real>(axis: Axis, p: &BiSnPoly<T>) -> BiSnPoly<T> {
    let (f1, f2) = match axis {
        Axis::X => (Factor::D, Factor::S),
        Axis::Y => (Factor::C, Factor::C),
        Axis::Z => (Factor::S, Factor::D),
    };
    p.mul1(f1).mul2(f2)
}

/// Numerator of `L_axis Ψ / (iħ)` over the scale polynomial `H`.
pub fn angular_numerator<T: Real>(axis: Axis, p: &BiSnPoly<T>) -> Result<BiSnPoly<T>> {
    Ok(bracket(Operator::angular(axis), p)?.scale(-T::one()))
}

/// `L_axis Ψ / (iħ)` as a polynomial.
pub fn angular_action<T: Real>(axis: Axis, p: &BiSnPoly<T>) -> Result<BiSnPoly<T>> {
    angular_numerator(axis, p)?.divide_by_scale()
}

/// Transverse gradient `r ∇_axis Ψ` on the unit sphere.
pub fn angular_gradient<T: Real>(axis: Axis, p: &BiSnPoly<T>) -> Result<BiSnPoly<T>> {
    bracket(Operator::linear(axis), p)?.divide_by_scale()
}

fn check_residual<T: Real>(e: &Expansion<T>, ell: u32) -> Result<()> {
    if e.residual > T::tol(PROJECTION_TOL) {
        return Err(Error::ProjectionResidual {
            ell,
            residual: e.residual.as_f64(),
        });
    }
    Ok(())
}

fn terms_of<T: Real>(m: &Multiplet<T>, e: &Expansion<T>, weight: T) -> Vec<Term<T>> {
    e.terms
        .iter()
        .map(|&(i, c)| Term {
            target: m.states[i].id(),
            coefficient: c * weight,
        })
        .collect()
}

/// `L_axis / (iħ)` on state `index` of `m`, expanded in `m`.
pub fn apply_angular_momentum<T: Real>(axis: Axis, m: &Multiplet<T>, index: usize) -> Result<LadderDecomposition<T>> {
    let state = m
        .states
        .get(index)
        .ok_or_else(|| Error::InvalidArgument(format!("no state {index} in the l = {} multiplet", m.ell)))?;
    let action = angular_action(axis, &state.wavefunction)?;
    let scale = state.wavefunction.max_abs() * T::from_count(m.ell as usize + 1);
    let op = Operator::angular(axis);
    let mut out = LadderDecomposition {
        operator: op,
        source: state.id(),
        terms: Vec::new(),
        convention: Convention::ActionOverIHbar,
        residual: T::zero(),
    };
    if action.is_negligible(scale) {
        return Ok(out);
    }
    let e = m.expand(&action)?;
    check_residual(&e, m.ell)?;
    out.terms = terms_of(m, &e, T::one());
    out.residual = e.residual;
    Ok(out)
}

/// The gradient piece `l (x_i/r) Ψ + G_i` and the raised piece
/// `(x_i/r) Ψ − (gradient)/(2l+1)` before projection.
fn momentum_pieces<T: Real>(axis: Axis, state: &SpheroconalHarmonic<T>) -> Result<(BiSnPoly<T>, BiSnPoly<T>)> {
    let psi = &state.wavefunction;
    let mult = direction_cosine_product(axis, psi);
    let g = angular_gradient(axis, psi)?;
    let ell = T::from_count(state.ell as usize);
    let grad = mult.scale(ell).add(&g)?;
    let raised = mult.sub(&grad.scale(T::one() / (T::lit(2.0) * ell + T::one())))?;
    Ok((grad, raised))
}

fn project<T: Real>(
    piece: &BiSnPoly<T>,
    target: Option<&Multiplet<T>>,
    ell: u32,
    ref_scale: T,
) -> Result<Option<(Expansion<T>, u32)>> {
    if piece.is_negligible(ref_scale) {
        return Ok(None);
    }
    let Some(m) = target else {
        return Err(Error::ProjectionResidual { ell, residual: 1.0 });
    };
    let e = m.expand(piece)?;
    check_residual(&e, m.ell)?;
    Ok(Some((e, m.ell)))
}

fn check_target<T: Real>(m: Option<&Multiplet<T>>, ell: Option<u32>) -> Result<()> {
    match (m, ell) {
        (Some(m), Some(l)) if m.ell != l => Err(Error::InvalidArgument(format!(
            "expected the l = {l} multiplet, got l = {}",
            m.ell
        ))),
        _ => Ok(()),
    }
}

fn momentum_decomposition<T: Real>(
    axis: Axis,
    state: &SpheroconalHarmonic<T>,
    lower: Option<&Multiplet<T>>,
    upper: &Multiplet<T>,
    convention: Convention,
) -> Result<LadderDecomposition<T>> {
    check_target(lower, state.ell.checked_sub(1))?;
    check_target(Some(upper), Some(state.ell + 1))?;
    let (grad, raised) = momentum_pieces(axis, state)?;
    let scale = state.wavefunction.max_abs() * T::from_count(state.ell as usize + 1);
    let ell = T::from_count(state.ell as usize);
    let two_l1 = T::lit(2.0) * ell + T::one();
    let (w_down, w_up) = match convention {
        Convention::AngularBracket => ((ell + T::one()) / two_l1, -ell),
        _ => (T::one(), T::one()),
    };
    let mut terms = Vec::new();
    let mut residual = T::zero();
    if let Some((e, _)) = project(&grad, lower, state.ell.saturating_sub(1), scale)? {
        terms.extend(terms_of(lower.expect("projection needs a multiplet"), &e, w_down));
        residual = residual.max(e.residual);
    }
    if let Some((e, _)) = project(&raised, Some(upper), state.ell + 1, scale)? {
        terms.extend(terms_of(upper, &e, w_up));
        residual = residual.max(e.residual);
    }
    terms.retain(|t| t.coefficient != T::zero());
    Ok(LadderDecomposition {
        operator: Operator::linear(axis),
        source: state.id(),
        terms,
        convention,
        residual,
    })
}

/// `p_axis` (with `−iħ` stripped) on the solid harmonic `r^l Ψ`.
///
/// `lower` must be the `l − 1` multiplet (ignored for `l = 0`) and `upper`
/// the `l + 1` multiplet.
pub fn apply_linear_momentum<T: Real>(
    axis: Axis,
    state: &SpheroconalHarmonic<T>,
    lower: Option<&Multiplet<T>>,
    upper: &Multiplet<T>,
) -> Result<LadderDecomposition<T>> {
    momentum_decomposition(axis, state, lower, upper, Convention::SolidHarmonic)
}

/// The transverse gradient `r ∇_axis Ψ` expanded over `l − 1` and `l + 1`.
pub fn apply_angular_bracket<T: Real>(
    axis: Axis,
    state: &SpheroconalHarmonic<T>,
    lower: Option<&Multiplet<T>>,
    upper: &Multiplet<T>,
) -> Result<LadderDecomposition<T>> {
    momentum_decomposition(axis, state, lower, upper, Convention::AngularBracket)
}

/// Neighbouring rung of the same species ladder.
pub fn shift_nodes<'a, T: Real>(
    m: &'a Multiplet<T>,
    state: &SpheroconalHarmonic<T>,
    direction: Direction,
) -> Result<&'a SpheroconalHarmonic<T>> {
    let block = m
        .block(state.label)
        .ok_or_else(|| Error::InvalidArgument(format!("species {} absent at l = {}", state.label.pair(), m.ell)))?;
    let rank = state.factor_a.rank;
    let target = match direction {
        Direction::Up if rank + 1 < block.size() => rank + 1,
        Direction::Down if rank > 0 => rank - 1,
        _ => return Err(Error::LadderEnd),
    };
    let i = m
        .index_of_rank(state.label, target)
        .expect("block ranks are present in the state list");
    Ok(&m.states[i])
}

/// Real matrices `M_i[target][source]` of `L_i / (iħ)` on a multiplet.
pub fn angular_momentum_matrices<T: Real>(m: &Multiplet<T>) -> Result<[Mat<T>; 3]> {
    let n = m.states.len();
    let mut out = [Mat::zeros(n, n), Mat::zeros(n, n), Mat::zeros(n, n)];
    for axis in Axis::ALL {
        for j in 0..n {
            let d = apply_angular_momentum(axis, m, j)?;
            for t in &d.terms {
                let i = m.find(&t.target).expect("targets come from the same multiplet");
                out[axis.index()][(i, j)] = t.coefficient;
            }
        }
    }
    Ok(out)
}

/// Largest entry of `[M_x, M_y] − M_z` and its cyclic companions.
///
/// With `L_i = iħ M_i` this is the defect of `[L_x, L_y] = iħ L_z`.
pub fn commutator_defect<T: Real>(m: &[Mat<T>; 3]) -> T {
    (0..3)
        .map(|i| {
            let (a, b, c) = (&m[i], &m[(i + 1) % 3], &m[(i + 2) % 3]);
            (a * b).sub(&(b * a)).sub(c).max_abs()
        })
        .fold(T::zero(), T::max)
}

/// Largest entry of `Σ L_i² − l(l+1)`, i.e. of `Σ M_i² + l(l+1)`.
pub fn closure_defect<T: Real>(m: &[Mat<T>; 3], ell: u32) -> T {
    let n = m[0].rows();
    let ll = T::from_count((ell * (ell + 1)) as usize);
    let sum = m.iter().fold(Mat::identity(n).scale(ll), |acc, mi| acc.add(&(mi * mi)));
    sum.max_abs()
}

/// Largest relative remainder of the scale-factor division over every
/// angular-momentum numerator of `m`.
pub fn divisibility_defect<T: Real>(m: &Multiplet<T>) -> Result<T> {
    let mut worst = T::zero();
    for s in &m.states {
        for axis in Axis::ALL {
            let num = angular_numerator(axis, &s.wavefunction)?;
            let scale = s.wavefunction.max_abs() * T::from_count(m.ell as usize + 1);
            if num.is_negligible(scale) {
                continue;
            }
            worst = worst.max(num.scale_division().1);
        }
    }
    Ok(worst)
}

/// `(α, β, γ)` with `Ψ = (α x² + β y² + γ z²) / r²`, `α + β + γ = 0`, for a
/// species-`(1, 1)` state of `l = 2`.
pub fn quadrupole_coefficients<T: Real>(state: &SpheroconalHarmonic<T>) -> Result<[T; 3]> {
    if state.ell != 2 || state.label != CartesianLabel::ONE {
        return Err(Error::InvalidArgument(
            "quadrupole coefficients need an l = 2 state of species (1,1)".into(),
        ));
    }
    let psi = &state.wavefunction;
    let (k1, k2) = (psi.k1sq, psi.k2sq);
    let one = T::one();
    let sn = |c: Vec<T>, k: T| SnPoly::new(Species::ONE, c, k);
    let x2 = BiSnPoly::from_product(&sn(vec![one, -k1], k1), &sn(vec![T::zero(), one], k2));
    let y2 = BiSnPoly::from_product(&sn(vec![one, -one], k1), &sn(vec![one, -one], k2));
    let z2 = BiSnPoly::from_product(&sn(vec![T::zero(), one], k1), &sn(vec![one, -k2], k2));
    let ax = x2.sub(&y2)?;
    let az = z2.sub(&y2)?;
    let mut a = Mat::zeros(4, 2);
    let mut b = vec![T::zero(); 4];
    for i in 0..2 {
        for j in 0..2 {
            let r = 2 * i + j;
            a[(r, 0)] = ax.coeff(i, j);
            a[(r, 1)] = az.coeff(i, j);
            b[r] = psi.coeff(i, j);
        }
    }
    let sol = least_squares(&a, &b).ok_or(Error::Singular {
        condition: f64::INFINITY,
    })?;
    let (alpha, gamma) = (sol[0], sol[1]);
    let fit = ax.scale(alpha).add(&az.scale(gamma))?.sub(psi)?;
    let (rows, cols) = psi.dims();
    if rows > 2 || cols > 2 || fit.max_abs() > T::tol(PROJECTION_TOL) * psi.max_abs() {
        return Err(Error::ProjectionResidual {
            ell: 2,
            residual: (fit.max_abs() / psi.max_abs()).as_f64(),
        });
    }
    Ok([alpha, -alpha - gamma, gamma])
}

/// Multiplets `0..=lmax + 1` of one configuration, enough to apply every
/// ladder operator to every state with `l ≤ lmax`.
#[derive(Debug, Clone)]
pub struct LadderSet<T> {
    pub config: AsymmetryConfig<T>,
    pub multiplets: Vec<Multiplet<T>>,
}

impl<T: Real> LadderSet<T> {
    pub fn build(config: &AsymmetryConfig<T>, lmax: u32) -> Result<Self> {
        let multiplets = (0..=lmax + 1)
            .map(|l| Multiplet::build(l, config))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            config: *config,
            multiplets,
        })
    }

    pub fn lmax(&self) -> u32 {
        self.multiplets.len() as u32 - 2
    }

    pub fn multiplet(&self, ell: u32) -> Option<&Multiplet<T>> {
        self.multiplets.get(ell as usize)
    }

    pub fn state(&self, id: &StateId) -> Option<&SpheroconalHarmonic<T>> {
        let m = self.multiplet(id.ell)?;
        m.find(id).map(|i| &m.states[i])
    }

    fn checked(&self, id: &StateId) -> Result<(&Multiplet<T>, usize)> {
        if id.ell > self.lmax() {
            return Err(Error::InvalidArgument(format!(
                "l = {} exceeds the prepared range l ≤ {}",
                id.ell,
                self.lmax()
            )));
        }
        let m = &self.multiplets[id.ell as usize];
        let i = m
            .find(id)
            .ok_or_else(|| Error::InvalidArgument(format!("no state {id}")))?;
        Ok((m, i))
    }

    pub fn apply(&self, op: Operator, id: &StateId) -> Result<LadderDecomposition<T>> {
        let (m, i) = self.checked(id)?;
        if op.is_angular() {
            return apply_angular_momentum(op.axis(), m, i);
        }
        let lower = id.ell.checked_sub(1).map(|l| &self.multiplets[l as usize]);
        apply_linear_momentum(op.axis(), &m.states[i], lower, &self.multiplets[id.ell as usize + 1])
    }

    pub fn angular_bracket(&self, axis: Axis, id: &StateId) -> Result<LadderDecomposition<T>> {
        let (m, i) = self.checked(id)?;
        let lower = id.ell.checked_sub(1).map(|l| &self.multiplets[l as usize]);
        apply_angular_bracket(axis, &m.states[i], lower, &self.multiplets[id.ell as usize + 1])
    }

    pub fn shift_nodes(&self, id: &StateId, direction: Direction) -> Result<StateId> {
        let (m, i) = self.checked(id)?;
        Ok(shift_nodes(m, &m.states[i], direction)?.id())
    }
}
