//! Exact decision of the floor conditions a horizontal degree must satisfy.
//!
//! Each condition compares `⌊k·h_z(m+e)⌋ − ⌊k·h_z(m)⌋` against a bound for
//! all `m` in the weight cone. For a pair of linear pieces `(g_a, g_b)` the
//! relevant `m` form the polyhedron `P = δ_a ∩ (δ_b − e)`. Every lattice
//! point of `P` is `v + u` with `v` in a bounded box and `u` in the lattice
//! points of the recession cone, where `g_a = g_b`. The floor difference only
//! depends on `v` and on `k·g_a(u) mod 1`, which runs through a finite cyclic
//! group, so a finite enumeration decides the condition.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{scaled_h, HorizontalFrame};
use crate::curve_divisors::{Curve, CurvePoint};
use crate::error::{Error, Result};
use crate::graded_algebra::GradedAlgebra;
use crate::lattice_polyhedra::{semigroup_generators, support_function, Cone, Side};
use crate::rational::{ceil, int, rat_int, Int, LatticeVector, LinearForm, Rat, ScaledForm};

/// Largest number of lattice points scanned in a single cell.
const CELL_BUDGET: u64 = 2_000_000;

/// Which floor condition is meant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    /// `⌊h_z(m+e)⌋ − ⌊h_z(m)⌋ ≥ 1` wherever `h_z(m+e) ≠ 0`, at a finite point `z ≠ 0`.
    AwayFromCenter(CurvePoint),
    /// `⌊d·h_0(m+e)⌋ − ⌊d·h_0(m)⌋ ≥ 1 + d·h(e)` wherever `h_0(m+e) ≠ h(m+e)`.
    AtCenter,
    /// `⌊d·h_∞(m+e)⌋ − ⌊d·h_∞(m)⌋ ≥ −1 − d·h(e)`, on ℙ¹ only.
    AtInfinity,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::AwayFromCenter(z) => write!(f, "point {z}"),
            Condition::AtCenter => write!(f, "point 0"),
            Condition::AtInfinity => write!(f, "point inf"),
        }
    }
}

/// How a verdict was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Certificate {
    /// Sufficient inequalities on the linear pieces evaluated at `e`.
    LinearPieces,
    /// Complete enumeration of the cells of the pieces.
    CellEnumeration,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::LinearPieces => write!(f, "linear-pieces"),
            Certificate::CellEnumeration => write!(f, "cell-enumeration"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionOutcome {
    pub condition: Condition,
    pub holds: bool,
    pub certificate: Certificate,
    /// A degree `m` at which the condition fails.
    pub witness: Option<LatticeVector>,
}

impl fmt::Display for ConditionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.witness, self.holds) {
            (_, true) => write!(f, "{}: holds ({})", self.condition, self.certificate),
            (Some(m), false) => write!(f, "{}: fails at m = {m}", self.condition),
            (None, false) => write!(f, "{}: fails", self.condition),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    pub degree: LatticeVector,
    pub outcomes: Vec<ConditionOutcome>,
}

impl ConditionReport {
    pub fn holds(&self) -> bool {
        self.outcomes.iter().all(|o| o.holds)
    }

    pub fn first_failure(&self) -> Option<&ConditionOutcome> {
        self.outcomes.iter().find(|o| !o.holds)
    }
}

#[derive(Clone, Debug)]
enum Guard {
    Always,
    NonZero,
    DiffersFrom(LinearForm),
}

impl Guard {
    /// The form whose nonvanishing at `m+e` activates the condition.
    fn form(&self, gb: &LinearForm) -> Option<LinearForm> {
        match self {
            Guard::Always => None,
            Guard::NonZero => Some(gb.clone()),
            Guard::DiffersFrom(h) => Some(gb.sub(h)),
        }
    }
}

struct FloorCheck {
    pieces: Vec<(Cone, LinearForm)>,
    k: Int,
    bound: Int,
    guard: Guard,
}

/// Decides all floor conditions for the normalized frame `f` and degree `e`.
pub fn check_conditions(a: &GradedAlgebra, f: &HorizontalFrame, e: &LatticeVector) -> Result<ConditionReport> {
    if !f.is_normalized() {
        return Err(Error::InvalidInput("frame is not normalized".into()));
    }
    if e.dim() != a.rank() {
        return Err(Error::DimensionMismatch {
            expected: a.rank(),
            found: e.dim(),
        });
    }
    let d = int(f.d() as i64);
    let dh = scaled_h(f, e);
    let h_e = f.h().eval(e);
    let mut outcomes = Vec::new();

    for p in a.divisor().support() {
        match &p {
            CurvePoint::Scalar(z) if !z.is_zero() => {
                let pieces = support_function(&a.divisor().coefficient(&p)).pieces().to_vec();
                let shortcut = pieces
                    .iter()
                    .all(|(_, g)| g.is_zero() || g.eval(e) >= Rat::one());
                let check = FloorCheck {
                    pieces,
                    k: Int::one(),
                    bound: Int::one(),
                    guard: Guard::NonZero,
                };
                outcomes.push(decide(Condition::AwayFromCenter(p.clone()), shortcut, &check, e)?);
            }
            CurvePoint::Label(l) => {
                return Err(Error::UnsupportedCurve(format!("labelled point {l} on the line")));
            }
            _ => {}
        }
    }

    let center = support_function(&a.divisor().coefficient(&CurvePoint::scalar(0)))
        .pieces()
        .to_vec();
    let threshold = Rat::new(Int::one(), d.clone()) + rat_int(&ceil(&h_e));
    let shortcut = center
        .iter()
        .all(|(_, g)| g == f.h() || g.eval(e) >= threshold);
    let check = FloorCheck {
        pieces: center,
        k: d.clone(),
        bound: Int::one() + &dh,
        guard: Guard::DiffersFrom(f.h().clone()),
    };
    outcomes.push(decide(Condition::AtCenter, shortcut, &check, e)?);

    if *a.curve() == Curve::ProjectiveLine {
        let pieces = support_function(&a.divisor().coefficient(&CurvePoint::Infinity))
            .pieces()
            .to_vec();
        let check = FloorCheck {
            pieces,
            k: d,
            bound: -Int::one() - &dh,
            guard: Guard::Always,
        };
        let shortcut = f.omega_dual.contains(e);
        outcomes.push(decide(Condition::AtInfinity, shortcut, &check, e)?);
    }

    Ok(ConditionReport {
        degree: e.clone(),
        outcomes,
    })
}

fn decide(condition: Condition, shortcut: bool, check: &FloorCheck, e: &LatticeVector) -> Result<ConditionOutcome> {
    if shortcut {
        return Ok(ConditionOutcome {
            condition,
            holds: true,
            certificate: Certificate::LinearPieces,
            witness: None,
        });
    }
    let witness = find_violation(check, e)?;
    Ok(ConditionOutcome {
        condition,
        holds: witness.is_none(),
        certificate: Certificate::CellEnumeration,
        witness,
    })
}

fn find_violation(check: &FloorCheck, e: &LatticeVector) -> Result<Option<LatticeVector>> {
    for (ca, ga) in &check.pieces {
        for (cb, gb) in &check.pieces {
            if let Some(m) = violation_in_cell(check, (ca, ga), (cb, gb), e)? {
                return Ok(Some(m));
            }
        }
    }
    Ok(None)
}

/// Vertices and recession generators of `δ_a ∩ (δ_b − e)`, or `None` if empty.
struct Cell {
    vertices: Vec<Vec<Rat>>,
    directions: Vec<LatticeVector>,
    rec_rays: Vec<LatticeVector>,
    rec_lineality: Vec<LatticeVector>,
}

fn cell(ca: &Cone, cb: &Cone, e: &LatticeVector) -> Result<Option<Cell>> {
    let n = e.dim();
    let lift = |f: &LatticeVector, last: Int| {
        let mut c = f.coords().to_vec();
        c.push(last);
        LatticeVector::new(c)
    };
    let mut ineqs: Vec<LatticeVector> = ca.facets().iter().map(|f| lift(f, Int::zero())).collect();
    ineqs.extend(cb.facets().iter().map(|f| lift(f, f.dot(e))));
    ineqs.push(LatticeVector::unit(n + 1, n));
    let mut eqs: Vec<LatticeVector> = ca.equations().iter().map(|f| lift(f, Int::zero())).collect();
    eqs.extend(cb.equations().iter().map(|f| lift(f, f.dot(e))));
    let hom = Cone::from_inequalities(Side::M, n + 1, &ineqs, &eqs)?;

    let mut vertices = Vec::new();
    let mut rec_rays = Vec::new();
    for r in hom.rays() {
        let s = &r.coords()[n];
        if s.is_positive() {
            let den = rat_int(s);
            vertices.push(r.coords()[..n].iter().map(|c| rat_int(c) / &den).collect());
        } else {
            rec_rays.push(LatticeVector::new(r.coords()[..n].to_vec()));
        }
    }
    if vertices.is_empty() {
        return Ok(None);
    }
    let rec_lineality: Vec<LatticeVector> = hom
        .lineality_basis()
        .iter()
        .map(|l| LatticeVector::new(l.coords()[..n].to_vec()))
        .collect();
    let directions = rec_rays
        .iter()
        .cloned()
        .chain(rec_lineality.iter().flat_map(|l| [l.clone(), l.neg()]))
        .collect();
    Ok(Some(Cell {
        vertices,
        directions,
        rec_rays,
        rec_lineality,
    }))
}

/// Integer box containing `conv(vertices) + Σ [0,1)·directions`.
fn cell_box(c: &Cell, n: usize) -> Result<Vec<(i64, i64)>> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let lo_v = c.vertices.iter().map(|v| v[i].clone()).min().expect("nonempty");
        let hi_v = c.vertices.iter().map(|v| v[i].clone()).max().expect("nonempty");
        let lo_w: Int = c.directions.iter().map(|w| w.coords()[i].clone().min(Int::zero())).sum();
        let hi_w: Int = c.directions.iter().map(|w| w.coords()[i].clone().max(Int::zero())).sum();
        let lo = (lo_v + rat_int(&lo_w)).floor().to_integer();
        let hi = (hi_v + rat_int(&hi_w)).ceil().to_integer();
        let (Some(lo), Some(hi)) = (lo.to_i64(), hi.to_i64()) else {
            return Err(Error::InconclusiveRealization("cell coordinates overflow".into()));
        };
        out.push((lo, hi));
    }
    Ok(out)
}

struct SmallCone {
    facets: Vec<Vec<i64>>,
    equations: Vec<Vec<i64>>,
}

impl SmallCone {
    fn new(c: &Cone) -> Self {
        let conv = |vs: &[LatticeVector]| vs.iter().map(|v| v.to_i64_vec().expect("small facet")).collect();
        Self {
            facets: conv(c.facets()),
            equations: conv(c.equations()),
        }
    }

    fn contains(&self, x: &[i64]) -> bool {
        let dot = |f: &Vec<i64>| f.iter().zip(x).map(|(a, b)| *a as i128 * *b as i128).sum::<i128>();
        self.facets.iter().all(|f| dot(f) >= 0) && self.equations.iter().all(|f| dot(f) == 0)
    }
}

fn floor_div(a: i128, b: i128) -> i128 {
    a.div_euclid(b)
}

fn violation_in_cell(
    check: &FloorCheck,
    (ca, ga): (&Cone, &LinearForm),
    (cb, gb): (&Cone, &LinearForm),
    e: &LatticeVector,
) -> Result<Option<LatticeVector>> {
    let n = e.dim();
    let Some(c) = cell(ca, cb, e)? else {
        return Ok(None);
    };
    let k = rat_int(&check.k);
    let kga = ga.scale(&k);
    let kgb = gb.scale(&k);
    let rec = Cone::from_generators(Side::M, n, &c.rec_rays, &c.rec_lineality)?;
    let gens = semigroup_generators(&rec, None);
    let order = gens
        .iter()
        .fold(Int::one(), |acc, w| acc.lcm(kga.eval(w).denom()));
    let guard = check.guard.form(gb);
    let avoidable = guard
        .as_ref()
        .map_or(true, |l| gens.iter().any(|w| !l.eval(w).is_zero()));

    let bounds = cell_box(&c, n)?;
    let size = bounds
        .iter()
        .try_fold(1u64, |acc, (lo, hi)| acc.checked_mul((hi - lo + 1) as u64));
    if size.map_or(true, |s| s > CELL_BUDGET) {
        return Err(Error::InconclusiveRealization(format!(
            "{} ∩ ({} − {e})",
            ca.rays().iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
            cb.rays().iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
        )));
    }

    let small = |form: &LinearForm| {
        ScaledForm::from_form(form).ok_or_else(|| Error::InconclusiveRealization("coefficients overflow".into()))
    };
    let sa = small(&kga)?;
    let sb = small(&kgb)?;
    let sl = guard.as_ref().map(small).transpose()?;
    let order_i = order
        .to_i128()
        .ok_or_else(|| Error::InconclusiveRealization("residue group too large".into()))?;
    let bound = check
        .bound
        .to_i128()
        .ok_or_else(|| Error::InconclusiveRealization("bound overflow".into()))?;
    let e_small = e
        .to_i64_vec()
        .ok_or_else(|| Error::InconclusiveRealization("degree overflow".into()))?;
    let in_a = SmallCone::new(ca);
    let in_b = SmallCone::new(cb);

    let mut v: Vec<i64> = bounds.iter().map(|(lo, _)| *lo).collect();
    let mut shifted = vec![0i64; n];
    loop {
        for i in 0..n {
            shifted[i] = v[i] + e_small[i];
        }
        if in_a.contains(&v) && in_b.contains(&shifted) {
            let x = sb.numer_at(&shifted);
            let y = sa.numer_at(&v);
            let guard_live = match &sl {
                None => true,
                Some(l) => avoidable || l.numer_at(&shifted) != 0,
            };
            if guard_live {
                for j in 0..order_i {
                    let fx = floor_div(x * order_i + j * sb.den, sb.den * order_i);
                    let fy = floor_div(y * order_i + j * sa.den, sa.den * order_i);
                    if fx - fy < bound {
                        let base = LatticeVector::from_i64(&v);
                        let u = realize(&kga, guard.as_ref(), &gens, &base.add(e), j, &order);
                        return Ok(Some(base.add(&u)));
                    }
                }
            }
        }
        // odometer step
        let mut i = 0;
        loop {
            if i == n {
                return Ok(None);
            }
            if v[i] < bounds[i].1 {
                v[i] += 1;
                break;
            }
            v[i] = bounds[i].0;
            i += 1;
        }
    }
}

/// A lattice point `u` of the recession cone with `k·g(u) ≡ j/order (mod 1)`,
/// moved off the zero locus of the guard at `base + u` when possible.
fn realize(
    kg: &LinearForm,
    guard: Option<&LinearForm>,
    gens: &[LatticeVector],
    base: &LatticeVector,
    j: i128,
    order: &Int,
) -> LatticeVector {
    let n = base.dim();
    let residue = |u: &LatticeVector| -> Int {
        let q = kg.eval(u) * rat_int(order);
        q.to_integer().mod_floor(order)
    };
    let target = Int::from(j);
    let mut seen: HashMap<Int, LatticeVector> = HashMap::new();
    let mut queue = VecDeque::from([LatticeVector::zero(n)]);
    seen.insert(Int::zero(), LatticeVector::zero(n));
    let mut found = None;
    while let Some(u) = queue.pop_front() {
        if residue(&u) == target {
            found = Some(u);
            break;
        }
        for w in gens {
            let next = u.add(w);
            let r = residue(&next);
            if !seen.contains_key(&r) {
                seen.insert(r, next.clone());
                queue.push_back(next);
            }
        }
    }
    let mut u = found.expect("residue lies in the generated subgroup");
    if let Some(l) = guard {
        if l.eval(&base.add(&u)).is_zero() {
            if let Some(w) = gens.iter().find(|w| !l.eval(w).is_zero()) {
                u = u.add(&w.scale(kg.eval(w).denom()));
            }
        }
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::RationalVector;

    fn form(c: &[(i64, i64)]) -> LinearForm {
        LinearForm::new(RationalVector::from_ratios(c))
    }

    #[test]
    fn cell_of_a_cone_with_itself_shifted_inside() {
        let c = Cone::generated_by(Side::M, &[&[1, 0], &[0, 1]]).unwrap();
        let e = LatticeVector::from_i64(&[1, 1]);
        let cl = cell(&c, &c, &e).unwrap().unwrap();
        assert_eq!(cl.vertices, vec![vec![Rat::zero(), Rat::zero()]]);
        assert_eq!(cl.rec_rays.len(), 2);
    }

    #[test]
    fn empty_cell_is_detected() {
        let pos = Cone::generated_by(Side::M, &[&[1]]).unwrap();
        let neg = Cone::generated_by(Side::M, &[&[-1]]).unwrap();
        // m ≤ 0 and m + 1 ≥ 0 is nonempty, m ≥ 0 and m − 5 ≤ 0 too; m ≥ 0 and m + 1 ≤ 0 is empty
        assert!(cell(&neg, &pos, &LatticeVector::from_i64(&[1])).unwrap().is_some());
        assert!(cell(&pos, &neg, &LatticeVector::from_i64(&[1])).unwrap().is_none());
    }

    #[test]
    fn rank_one_floor_condition_decided() {
        // g(m) = m/2 on m ≥ 0; ⌊(m+1)/2⌋ − ⌊m/2⌋ ≥ 1 fails at even m
        let pos = Cone::generated_by(Side::M, &[&[1]]).unwrap();
        let check = FloorCheck {
            pieces: vec![(pos.clone(), form(&[(1, 2)]))],
            k: Int::one(),
            bound: Int::one(),
            guard: Guard::Always,
        };
        let w = find_violation(&check, &LatticeVector::from_i64(&[1])).unwrap().unwrap();
        assert!(w.coords()[0].is_even());
        assert!(find_violation(&check, &LatticeVector::from_i64(&[2])).unwrap().is_none());
    }

    #[test]
    fn guard_that_never_fires_is_respected() {
        let pos = Cone::generated_by(Side::M, &[&[1]]).unwrap();
        let check = FloorCheck {
            pieces: vec![(pos, LinearForm::zero(1))],
            k: Int::one(),
            bound: Int::one(),
            guard: Guard::NonZero,
        };
        assert!(find_violation(&check, &LatticeVector::from_i64(&[0])).unwrap().is_none());
    }
}
