//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use lame_core::harmonics::{build_basis, Multiplet, SpheroconalHarmonic, StateId};
use lame_core::lame::{matrix_size, solve, species_of_kind};
use lame_core::ladder::{
    angular_gradient, angular_momentum_matrices, apply_angular_momentum, closure_defect, commutator_defect,
    divisibility_defect, quadrupole_coefficients, species_transition, Axis, LadderDecomposition, LadderSet,
    Operator,
};
use lame_core::oracle::{check_decomposition, fd_operator, FdKind, Grid, GridField};
use lame_core::polyalg::{CartesianLabel, Coord, Species};

mod common;
use common::{cfg, cfg_k1, closed_form_eigenvalues};

type Outcome = Result<String, String>;

const KSQ: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];
const K1_SAMPLES: [f64; 3] = [0.3, 0.5, 0.7];
const ORACLE_TOL: f64 = 1e-6;
const ORACLE_POINTS: usize = 40;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: f64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit, || {
        format!("runtime {:.2} s exceeds {limit} s", elapsed.as_secs_f64())
    })
}

fn find<'a>(m: &'a Multiplet<f64>, a: &str, b: &str, n1: u32, n2: u32) -> Option<&'a SpheroconalHarmonic<f64>> {
    m.states.iter().find(|s| {
        s.species_a.name(Coord::First) == a && s.species_b.name(Coord::Second) == b && s.n1 == n1 && s.n2 == n2
    })
}

fn by_label(m: &Multiplet<f64>, label: CartesianLabel, n1: u32) -> StateId {
    m.states.iter().find(|s| s.label == label && s.n1 == n1).unwrap().id()
}

fn oracle(set: &LadderSet<f64>, d: &LadderDecomposition<f64>) -> Result<f64, String> {
    let chk = check_decomposition(set, d, ORACLE_POINTS).map_err(|e| format!("{} {}: {e}", d.operator, d.source))?;
    ensure(chk.worst() < ORACLE_TOL, || format!("{} on {}: oracle {:?}", d.operator, d.source, chk))?;
    Ok(chk.worst())
}

/// Relative signs `σ_source σ_target` forced by reference entries; satisfiable
/// iff a single sign per state reproduces every entry.
#[derive(Default)]
struct SignGraph {
    edges: HashMap<StateId, Vec<(StateId, f64)>>,
    flipped: usize,
    entries: usize,
}

impl SignGraph {
    /// Compares `d` with `want`, which must list every target.
    fn entry(&mut self, d: &LadderDecomposition<f64>, want: &[(StateId, f64)]) -> Result<(), String> {
        ensure(d.terms.len() == want.len(), || {
            format!("{} on {}: {} terms, expected {}", d.operator, d.source, d.terms.len(), want.len())
        })?;
        for &(t, w) in want {
            let c = d.coefficient(&t);
            ensure((c.abs() - w.abs()).abs() <= 1e-9 * w.abs().max(1.0), || {
                format!("{} on {} -> {t}: |{c}| vs |{w}|", d.operator, d.source)
            })?;
            let s = c.signum() * w.signum();
            self.entries += 1;
            if s < 0.0 {
                self.flipped += 1;
            }
            self.edges.entry(d.source).or_default().push((t, s));
            self.edges.entry(t).or_default().push((d.source, s));
        }
        Ok(())
    }

    fn solve(&self) -> Result<HashMap<StateId, f64>, String> {
        let mut sign: HashMap<StateId, f64> = HashMap::new();
        for &start in self.edges.keys() {
            if sign.contains_key(&start) {
                continue;
            }
            sign.insert(start, 1.0);
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for &(v, s) in &self.edges[&u] {
                    let want = sign[&u] * s;
                    match sign.get(&v) {
                        Some(&got) if got != want => return Err(format!("no consistent sign for {v}")),
                        Some(_) => {}
                        None => {
                            sign.insert(v, want);
                            stack.push(v);
                        }
                    }
                }
            }
        }
        Ok(sign)
    }
}

fn closed_forms() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut at = String::new();
    let mut missing = Vec::new();
    let mut determinant_worst = 0.0f64;
    for &k in &KSQ {
        for ell in 0..=4u32 {
            for sp in species_of_kind(ell) {
                if matrix_size(ell, sp).unwrap() == 0 {
                    continue;
                }
                let got = solve(ell, sp, k, Coord::First).map_err(|e| e.to_string())?;
                let want = closed_form_eigenvalues(ell, sp, k, true);
                if got.len() != want.len() {
                    missing.push(format!("k²={k}: {} real roots", want.len()));
                } else {
                    for (g, w) in got.iter().zip(&want) {
                        let d = (g.h - w).abs();
                        if d > worst {
                            worst = d;
                            at = format!("l={ell} species {sp} k²={k}");
                        }
                    }
                }
                if ell == 4 && sp == Species::ONE {
                    for (g, w) in got.iter().zip(closed_form_eigenvalues(ell, sp, k, false)) {
                        determinant_worst = determinant_worst.max((g.h - w).abs());
                    }
                }
            }
        }
    }
    within(start.elapsed(), 1.0)?;
    ensure(worst < 1e-10 && missing.is_empty(), || {
        format!(
            "max deviation {worst:.3e} at {at}; l=4 species 1 reference cubic with linear coefficient \
             64(1+k²)+208k² lacks three real roots at [{}]; the determinant's 64(1+k²)²+208k² agrees \
             to {determinant_worst:.1e}",
            missing.join(", ")
        )
    })?;
    Ok(format!("max deviation {worst:.1e}"))
}

struct EnergyRow {
    a: &'static str,
    b: &'static str,
    n1: u32,
    n2: u32,
    energy: f64,
}

fn energy_rows(ell: u32, e: [f64; 3], k1: f64, k2: f64) -> Vec<EnergyRow> {
    let row = |a, b, n1, n2, energy| EnergyRow { a, b, n1, n2, energy };
    let [e1, e2, e3] = e;
    let l3 = |e: f64, s: f64| -3.0 * e + s * 3.0 * (5.0 - 4.0 * e * e).sqrt();
    let l4 = |e: f64, s: f64| 5.0 * e + s * (21.0 + 60.0 * e * e).sqrt();
    match ell {
        0 => vec![row("1", "1", 0, 0, 0.0)],
        1 => vec![row("d", "s", 0, 1, -e1), row("c", "c", 1, 0, -e2), row("s", "d", 1, 0, -e3)],
        2 => vec![
            row("1", "1", 0, 2, -3.0),
            row("dc", "sc", 1, 1, 3.0 * e3),
            row("ds", "sd", 1, 1, 3.0 * e2),
            row("cs", "cd", 2, 0, 3.0 * e1),
            row("1", "1", 2, 0, 3.0),
        ],
        3 => vec![
            row("d", "s", 0, 3, l3(e1, -1.0)),
            row("c", "c", 1, 2, l3(e2, -1.0)),
            row("s", "d", 1, 2, l3(e3, -1.0)),
            row("dcs", "scd", 2, 1, 0.0),
            row("d", "s", 2, 1, l3(e1, 1.0)),
            row("c", "c", 3, 0, l3(e2, 1.0)),
            row("s", "d", 3, 0, l3(e3, 1.0)),
        ],
        4 => {
            // Species-1 eigenvalues from the 3×3 determinant, indexed by node count.
            let h1 = closed_form_eigenvalues(4, Species::ONE, k1, false);
            let h2 = closed_form_eigenvalues(4, Species::ONE, k2, false);
            let one = |n1: u32, n2: u32| e1 * h1[n1 as usize / 2] + e3 * h2[n2 as usize / 2];
            vec![
                row("1", "1", 0, 4, one(0, 4)),
                row("dc", "sc", 1, 3, l4(e3, -1.0)),
                row("ds", "sd", 1, 3, l4(e2, -1.0)),
                row("cs", "cd", 2, 2, l4(e1, -1.0)),
                row("1", "1", 2, 2, one(2, 2)),
                row("dc", "sc", 3, 1, l4(e3, 1.0)),
                row("ds", "sd", 3, 1, l4(e2, 1.0)),
                row("cs", "cd", 4, 0, l4(e1, 1.0)),
                row("1", "1", 4, 0, one(4, 0)),
            ]
        }
        _ => unreachable!(),
    }
}

fn spectrum_energies() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for e1 in [0.55, 0.75, 3f64.sqrt() / 2.0, 0.95] {
        let c = cfg(e1);
        for ell in 0..=4u32 {
            let m = Multiplet::build(ell, &c).map_err(|e| e.to_string())?;
            let rows = energy_rows(ell, c.e(), c.k1sq(), c.k2sq());
            ensure(rows.len() == m.states.len(), || format!("l={ell}: state count"))?;
            for r in &rows {
                let s = find(&m, r.a, r.b, r.n1, r.n2)
                    .ok_or_else(|| format!("e1={e1} l={ell}: no state ({},{}) n=({},{})", r.a, r.b, r.n1, r.n2))?;
                let d = (s.estar2 - r.energy).abs();
                worst = worst.max(d);
                ensure(d < 1e-9, || format!("e1={e1} {}: {} vs {}", s.id(), s.estar2, r.energy))?;
            }
        }
    }
    within(start.elapsed(), 1.0)?;
    Ok(format!("max deviation {worst:.1e}"))
}

fn sum_rules() -> Outcome {
    let start = Instant::now();
    let (mut hsum, mut trace) = (0.0f64, 0.0f64);
    for e1 in [0.55, 0.8, 0.97] {
        let c = cfg(e1);
        for ell in 0..=20u32 {
            let states = build_basis(ell, &c).map_err(|e| e.to_string())?;
            let ll = (ell * (ell + 1)) as f64;
            for s in &states {
                hsum = hsum.max((s.h1 + s.h2 - ll).abs());
            }
            trace = trace.max(states.iter().map(|s| s.estar2).sum::<f64>().abs());
        }
    }
    within(start.elapsed(), 10.0)?;
    ensure(hsum < 1e-9 && trace < 1e-9, || format!("h-sum {hsum:.1e}, trace {trace:.1e}"))?;
    Ok(format!("h-sum {hsum:.1e}, trace {trace:.1e}"))
}

fn l1_angular_table() -> Outcome {
    let mut worst_oracle = 0.0f64;
    for k1 in K1_SAMPLES {
        let set = LadderSet::build(&cfg_k1(k1), 1).map_err(|e| e.to_string())?;
        let m = set.multiplet(1).unwrap();
        let x = by_label(m, CartesianLabel::X, 0);
        let y = by_label(m, CartesianLabel::Y, 1);
        let z = by_label(m, CartesianLabel::Z, 1);
        let table = [
            (x, [None, Some((z, -1.0)), Some((y, 1.0))]),
            (y, [Some((z, 1.0)), None, Some((x, -1.0))]),
            (z, [Some((y, -1.0)), Some((x, 1.0)), None]),
        ];
        for (src, row) in table {
            for (axis, want) in Axis::ALL.into_iter().zip(row) {
                let d = apply_angular_momentum(axis, m, m.find(&src).unwrap()).map_err(|e| e.to_string())?;
                match want {
                    None => ensure(d.terms.is_empty(), || format!("L{axis:?} on {src} should vanish"))?,
                    Some((t, c)) => ensure(
                        d.terms.len() == 1 && d.terms[0].target == t && (d.terms[0].coefficient - c).abs() < 1e-12,
                        || format!("L{axis:?} on {src}: {:?}", d.terms),
                    )?,
                }
                worst_oracle = worst_oracle.max(oracle(&set, &d)?);
            }
        }
    }
    Ok(format!("9 entries exact, oracle {worst_oracle:.1e}"))
}

fn a1(k: f64, h: f64) -> f64 {
    (k - h) / 2.0
}

fn l2_l3_and_bracket_tables() -> Outcome {
    let mut worst_oracle = 0.0f64;
    let mut flipped = 0;
    let mut entries = 0;
    for k1 in K1_SAMPLES {
        let c = cfg_k1(k1);
        let (k1, k2) = (c.k1sq(), c.k2sq());
        let set = LadderSet::build(&c, 3).map_err(|e| e.to_string())?;
        let mut graph = SignGraph::default();
        let apply = |m: &Multiplet<f64>, axis: Axis, id: StateId| {
            apply_angular_momentum(axis, m, m.find(&id).unwrap()).map_err(|e| e.to_string())
        };

        // l = 2, reference eigenvalues in closed form.
        let m2 = set.multiplet(2).unwrap();
        let r1 = closed_form_eigenvalues(2, Species::ONE, k1, false);
        let r2 = closed_form_eigenvalues(2, Species::ONE, k2, false);
        let (h0, h2, g0, g2) = (r1[0], r1[1], r2[0], r2[1]);
        let cc = 1.0 / (h0 - h2);
        let a = by_label(m2, CartesianLabel::ONE, 0);
        let b = by_label(m2, CartesianLabel::ONE, 2);
        let xy = by_label(m2, CartesianLabel::XY, 1);
        let xz = by_label(m2, CartesianLabel::XZ, 1);
        let yz = by_label(m2, CartesianLabel::YZ, 2);
        let table2: Vec<(StateId, [Vec<(StateId, f64)>; 3])> = vec![
            (a, [vec![(yz, -h0)], vec![(xz, h0 - g2)], vec![(xy, g2)]]),
            (xy, [vec![(xz, 1.0)], vec![(yz, -1.0)], vec![(b, cc * (2.0 - h0)), (a, -cc * (2.0 - h2))]]),
            (xz, [vec![(xy, -1.0)], vec![(b, 2.0 * cc), (a, -2.0 * cc)], vec![(yz, 1.0)]]),
            (yz, [vec![(b, cc * (2.0 - g2)), (a, -cc * (2.0 - g0))], vec![(xy, 1.0)], vec![(xz, -1.0)]]),
            (b, [vec![(yz, -h2)], vec![(xz, h2 - g0)], vec![(xy, g0)]]),
        ];
        for (src, row) in &table2 {
            for (axis, want) in Axis::ALL.into_iter().zip(row) {
                let d = apply(m2, axis, *src)?;
                graph.entry(&d, want)?;
                worst_oracle = worst_oracle.max(oracle(&set, &d)?);
            }
        }

        // l = 3: explicit single-target entries, two-target structure elsewhere.
        let m3 = set.multiplet(3).unwrap();
        let hd1 = closed_form_eigenvalues(3, Species::D, k1, false);
        let hd2 = closed_form_eigenvalues(3, Species::D, k2, false);
        let hc1 = closed_form_eigenvalues(3, Species::C, k1, false);
        let hc2 = closed_form_eigenvalues(3, Species::C, k2, false);
        let x0 = by_label(m3, CartesianLabel::X, 0);
        let x2 = by_label(m3, CartesianLabel::X, 2);
        let y1 = by_label(m3, CartesianLabel::Y, 1);
        let y3 = by_label(m3, CartesianLabel::Y, 3);
        let z1 = by_label(m3, CartesianLabel::Z, 1);
        let z3 = by_label(m3, CartesianLabel::Z, 3);
        let xyz = by_label(m3, CartesianLabel::XYZ, 2);
        let mono = [
            (x0, Axis::X, 2.0 * a1(k1, hd1[0])),
            (y1, Axis::Y, hc1[0] - hc2[1]),
            (z1, Axis::Z, -2.0 * a1(k2, hd2[1])),
            (x2, Axis::X, 2.0 * a1(k1, hd1[1])),
            (y3, Axis::Y, hc1[1] - hc2[0]),
            (z3, Axis::Z, 2.0 * a1(k2, hd2[0])),
        ];
        for (src, axis, w) in mono {
            graph.entry(&apply(m3, axis, src)?, &[(xyz, w)])?;
        }
        let pairs = [(x0, x2), (y1, y3), (z1, z3)];
        let targets = |axis: Axis, src: StateId| -> [StateId; 2] {
            let label = species_transition(Operator::angular(axis), src.pair()).unwrap().label().unwrap();
            let (p, q) = pairs.iter().copied().find(|(p, _)| p.label == label).unwrap();
            [p, q]
        };
        for (j, s) in m3.states.iter().enumerate() {
            for axis in Axis::ALL {
                let d = apply_angular_momentum(axis, m3, j).map_err(|e| e.to_string())?;
                worst_oracle = worst_oracle.max(oracle(&set, &d)?);
                if mono.iter().any(|&(src, ax, _)| src == s.id() && ax == axis) {
                    continue;
                }
                let want = targets(axis, s.id());
                ensure(
                    d.terms.len() == 2 && want.iter().all(|t| d.terms.iter().any(|u| u.target == *t)),
                    || format!("L{axis:?} on {}: targets {:?}", s.id(), d.terms),
                )?;
            }
        }

        // Coefficients of the monomial xyz on its three binomial pairs.
        let lx = apply(m3, Axis::X, xyz)?;
        let ly = apply(m3, Axis::Y, xyz)?;
        let lz = apply(m3, Axis::Z, xyz)?;
        let (b0, b2) = (a1(k1, hd1[0]), a1(k1, hd1[1]));
        let (d0, d2) = (a1(k2, hd2[0]), a1(k2, hd2[1]));
        let ac = |h: f64| (1.0 - h) / 2.0;
        let forms = [
            ("C(Lx)", lx.coefficient(&x0), (2.0 + b2) / (b0 - b2)),
            ("C(Lx) sum", lx.coefficient(&x0) + lx.coefficient(&x2), -1.0),
            (
                "C(Ly)",
                ly.coefficient(&y1),
                (ac(hc2[1]) + ac(hc1[0])) / (ac(hc1[1]) * ac(hc2[1]) - ac(hc1[0]) * ac(hc2[0])),
            ),
            ("C(Ly) sum", ly.coefficient(&y1) + ly.coefficient(&y3), 0.0),
            ("C(Lz)", lz.coefficient(&z1), (2.0 + d0) / (d0 - d2)),
            ("C(Lz) sum", lz.coefficient(&z1) + lz.coefficient(&z3), 1.0),
        ];
        for (name, got, want) in forms {
            ensure((got - want).abs() < 1e-9, || format!("k1²={k1:.2} {name}: {got} vs {want}"))?;
        }
        // Reference sum relations, up to one global sign of the monomial.
        for (name, sum, reference) in [("Lx", forms[1].1, 1.0f64), ("Lz", forms[5].1, -1.0)] {
            ensure((sum.abs() - reference.abs()).abs() < 1e-9, || format!("{name} sum {sum} vs ±{reference}"))?;
        }

        // Quadrupole weights of the two species-(1,1) states.
        let s02 = set.state(&a).unwrap();
        let s20 = set.state(&b).unwrap();
        for (s, h, g) in [(s02, h0, g2), (s20, h2, g0)] {
            let q = quadrupole_coefficients(s).map_err(|e| e.to_string())?;
            let alpha = -0.5 + 0.25 * h - 0.25 * g;
            let gamma = -0.5 - 0.25 * h + 0.25 * g;
            ensure((q[0] - alpha).abs() < 1e-9 && (q[2] - gamma).abs() < 1e-9, || {
                format!("{}: (α, γ) = ({}, {}) vs ({alpha}, {gamma})", s.id(), q[0], q[2])
            })?;
        }

        // Transverse gradients on l = 1.
        let m1 = set.multiplet(1).unwrap();
        let x = by_label(m1, CartesianLabel::X, 0);
        let y = by_label(m1, CartesianLabel::Y, 1);
        let z = by_label(m1, CartesianLabel::Z, 1);
        for (src, axis, tgt) in [
            (x, Axis::Y, xy),
            (x, Axis::Z, xz),
            (y, Axis::X, xy),
            (y, Axis::Z, yz),
            (z, Axis::X, xz),
            (z, Axis::Y, yz),
        ] {
            let d = set.angular_bracket(axis, &src).map_err(|e| e.to_string())?;
            graph.entry(&d, &[(tgt, 1.0)])?;
            worst_oracle = worst_oracle.max(oracle(&set, &d)?);
        }
        // Diagonal entries 1 − (x_i/r)² as polynomials in (sn²χ1, sn²χ2).
        for (src, axis, want) in [
            (x, Axis::X, [[1.0, -1.0], [0.0, k1]]),
            (y, Axis::Y, [[0.0, 1.0], [1.0, -1.0]]),
            (z, Axis::Z, [[1.0, 0.0], [-1.0, k2]]),
        ] {
            let s = set.state(&src).unwrap();
            let g = angular_gradient(axis, &s.wavefunction).map_err(|e| e.to_string())?;
            let ok = (0..2).all(|i| (0..2).all(|j| (g.coeff(i, j) - want[i][j]).abs() < 1e-12))
                && g.trimmed_dims(1e-15) == (2, 2);
            ensure(ok, || format!("diagonal gradient on {src}"))?;
            let d = set.angular_bracket(axis, &src).map_err(|e| e.to_string())?;
            worst_oracle = worst_oracle.max(oracle(&set, &d)?);
        }

        graph.solve()?;
        flipped += graph.flipped;
        entries += graph.entries;
    }
    Ok(format!(
        "{entries} reference entries ({flipped} with opposite sign, all absorbed by per-state signs), oracle {worst_oracle:.1e}"
    ))
}

fn operator_residuals() -> Outcome {
    let start = Instant::now();
    let c = cfg(0.8);
    let grid = Grid::spheroconal(&c, ORACLE_POINTS).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    let mut count = 0;
    for ell in 0..=6u32 {
        let ll = (ell * (ell + 1)) as f64;
        for s in build_basis(ell, &c).map_err(|e| e.to_string())? {
            let f = |a: f64, b: f64| s.evaluate(a, b);
            let psi = GridField::of_state(&grid, &s);
            for (kind, lambda) in [(FdKind::L2, ll), (FdKind::Hstar, s.estar2 / 2.0)] {
                let got = fd_operator(kind, &f, &grid, &c).map_err(|e| format!("{} {kind:?}: {e}", s.id()))?;
                let res = got.map2(&psi, |g, p| g - lambda * p).max_abs() / (psi.max_abs() * lambda.abs().max(1.0));
                worst = worst.max(res);
                count += 1;
                ensure(res < 1e-5, || format!("{} {kind:?}: relative residual {res:.2e}", s.id()))?;
            }
        }
    }
    within(start.elapsed(), 60.0)?;
    Ok(format!("{count} residuals, max {worst:.1e}"))
}

fn algebraic_structure() -> Outcome {
    let (mut comm, mut clos, mut div) = (0.0f64, 0.0f64, 0.0f64);
    for e1 in [0.55, 0.8, 0.95] {
        let c = cfg(e1);
        for ell in 0..=6u32 {
            let m = Multiplet::build(ell, &c).map_err(|e| e.to_string())?;
            if ell <= 4 {
                let mats = angular_momentum_matrices(&m).map_err(|e| e.to_string())?;
                comm = comm.max(commutator_defect(&mats));
                clos = clos.max(closure_defect(&mats, ell));
            }
            div = div.max(divisibility_defect(&m).map_err(|e| e.to_string())?);
        }
    }
    ensure(comm < 1e-8 && clos < 1e-8 && div < 1e-10, || {
        format!("commutator {comm:.1e}, closure {clos:.1e}, remainder {div:.1e}")
    })?;
    Ok(format!("commutator {comm:.1e}, closure {clos:.1e}, remainder {div:.1e}"))
}

fn bookkeeping() -> Outcome {
    let want = |ell: u32| if ell % 2 == 0 { 1 } else { -1 };
    let parity = |label: CartesianLabel| label.parities().iter().map(|&x| x as i32).product::<i32>();
    for ell in 0..=50u32 {
        let total: usize = species_of_kind(ell).iter().map(|&s| matrix_size(ell, s).unwrap()).sum();
        ensure(total == 2 * ell as usize + 1, || format!("l={ell}: sizes sum to {total}"))?;
        for label in CartesianLabel::ORDER {
            let pair = label.pair();
            if species_of_kind(ell).contains(&pair.a) && matrix_size(ell, pair.a).unwrap() > 0 {
                ensure(parity(label) == want(ell), || format!("l={ell} species {pair}: parity"))?;
            }
        }
    }
    // Built states, within the range where the polynomials are resolved.
    let c = cfg(0.8);
    for ell in 0..=20u32 {
        let m = Multiplet::build(ell, &c).map_err(|e| format!("l={ell}: {e}"))?;
        ensure(m.states.len() == 2 * ell as usize + 1, || format!("l={ell}: {} states", m.states.len()))?;
        for s in &m.states {
            let p: i32 = s.parities.iter().map(|&x| x as i32).product();
            ensure(p == want(ell), || format!("{}: parity {p}", s.id()))?;
        }
    }
    Ok("sizes and species parities for l ≤ 50, built states for l ≤ 20".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("closed-form Lamé eigenvalues, l ≤ 4", closed_forms),
        ("rotor energies and node columns, l ≤ 4", spectrum_energies),
        ("eigenvalue sum rule and multiplet trace, l ≤ 20", sum_rules),
        ("l = 1 angular momentum entries", l1_angular_table),
        ("l = 2, 3 angular momentum and l = 1 gradient entries", l2_l3_and_bracket_tables),
        ("finite-difference L² and H* residuals, l ≤ 6", operator_residuals),
        ("commutators, closure and divisibility", algebraic_structure),
        ("species sizes and parities, l ≤ 50", bookkeeping),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{}] {name} ({secs:.2} s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {name} ({secs:.2} s): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
