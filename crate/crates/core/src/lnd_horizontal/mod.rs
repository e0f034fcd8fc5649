//! Derivations of horizontal type on `A[C,𝔇]` over the affine or projective
//! line: admissible cones, normalization, degree admissibility, the exact
//! decision of the stabilization conditions, the derivations themselves,
//! their kernels and equivalence classes.

mod conditions;
mod derivation;

use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use crate::curve_divisors::{apply_principal_shift, Curve, CurvePoint, IsoWitness, Mobius};
use crate::error::{Error, Result};
use crate::graded_algebra::GradedAlgebra;
use crate::lattice_polyhedra::{integral_sublattice, Cone, Side};
use crate::linalg::primitive_int;
use crate::rational::{int, rat_int, Int, LatticeVector, LinearForm, Rat, RationalVector};

pub use conditions::{check_conditions, Certificate, Condition, ConditionOutcome, ConditionReport};
pub use derivation::{
    build_lnd, find_degree, horizontal_equivalence_classes, horizontal_kernel, ClassReport, DerivationTerm,
    Direction, HorizontalClass, HorizontalLND, KernelDescription,
};

/// The point removed from ℙ¹ in the elliptic case.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RemovedPoint {
    /// A point of the support of `𝔇` (or ∞ on the affine line).
    Special(CurvePoint),
    /// Any point outside the support; carries the representative used in computations.
    Generic(CurvePoint),
}

impl RemovedPoint {
    pub fn point(&self) -> &CurvePoint {
        match self {
            RemovedPoint::Special(p) | RemovedPoint::Generic(p) => p,
        }
    }

    pub fn is_generic(&self) -> bool {
        matches!(self, RemovedPoint::Generic(_))
    }
}

impl fmt::Display for RemovedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RemovedPoint::Special(p) => write!(f, "{p}"),
            RemovedPoint::Generic(_) => write!(f, "generic"),
        }
    }
}

/// `h`, the integer `d`, the lattice `L = {m : h(m) ∈ ℤ}` and `m₁` with `{h(m₁)} = 1/d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameData {
    pub h: LinearForm,
    pub d: u64,
    pub lattice: Vec<LatticeVector>,
    pub m1: LatticeVector,
}

/// A cone `ω∨` on which all but one support function restrict to integral
/// linear forms, with the special point `z0` and, on ℙ¹, the removed point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HorizontalFrame {
    /// Position of `ω∨` among the maximal cones of its quasifan.
    pub cone_index: usize,
    pub omega_dual: Cone,
    pub z0: CurvePoint,
    /// `None` on the affine line.
    pub z_inf: Option<RemovedPoint>,
    pub data: FrameData,
}

impl HorizontalFrame {
    pub fn h(&self) -> &LinearForm {
        &self.data.h
    }

    pub fn d(&self) -> u64 {
        self.data.d
    }

    /// `H:<cone index>:<removed point>`; the affine line removes ∞.
    pub fn id(&self) -> String {
        match &self.z_inf {
            Some(z) => format!("H:{}:{z}", self.cone_index),
            None => format!("H:{}:inf", self.cone_index),
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.z0 == CurvePoint::scalar(0)
            && self
                .z_inf
                .as_ref()
                .map_or(true, |z| *z.point() == CurvePoint::Infinity)
    }
}

/// A normalized algebra, frame, and the isomorphism from the original algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalization {
    pub algebra: GradedAlgebra,
    pub frame: HorizontalFrame,
    pub witness: IsoWitness,
}

/// `d`, a basis of `L` and `m₁` for a linear form `h`.
pub fn frame_data(h: &LinearForm) -> FrameData {
    let n = h.coeffs().dim();
    let d_int = h.denominator();
    let d = d_int.to_u64().expect("small denominator");
    let lattice = integral_sublattice(h);
    let m1 = if d == 1 {
        LatticeVector::zero(n)
    } else {
        let target = Rat::new(Int::one(), d_int.clone());
        // residues of h depend only on m mod d, so the box of radius d suffices
        norm_ordered_box(n, d as i64)
            .into_iter()
            .find(|m| {
                let v = h.eval(m);
                &v - v.floor() == target
            })
            .expect("a representative exists modulo d")
    };
    FrameData { h: h.clone(), d, lattice, m1 }
}

/// Lattice points with `|coords| ≤ radius`, by sup-norm and then lexicographically.
pub(crate) fn norm_ordered_box(n: usize, radius: i64) -> Vec<LatticeVector> {
    let mut out: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-radius..=radius).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out.sort_by_key(|p| (p.iter().map(|c| c.abs()).max().unwrap_or(0), p.clone()));
    out.into_iter().map(|p| LatticeVector::from_i64(&p)).collect()
}

/// Restrictions `h_z|_{ω∨}` for the support points other than `removed`;
/// `None` if one of them is not linear there.
fn restrictions(a: &GradedAlgebra, cone: &Cone, removed: Option<&CurvePoint>) -> Option<Vec<(CurvePoint, LinearForm)>> {
    a.divisor()
        .support()
        .into_iter()
        .filter(|p| Some(p) != removed)
        .map(|p| {
            let g = a.divisor().support_function_at(&p).linear_piece_on(cone)?;
            Some((p, g))
        })
        .collect()
}

/// Frames for one quasifan: cones with at most one non-integral restriction.
fn frames_of(
    a: &GradedAlgebra,
    removed: Option<RemovedPoint>,
    default_z0: &CurvePoint,
) -> Vec<HorizontalFrame> {
    let excluded = removed.as_ref().map(RemovedPoint::point);
    let fan = a.divisor().quasifan(excluded);
    let n = a.rank();
    fan.maximal_cones()
        .iter()
        .enumerate()
        .filter_map(|(i, cone)| {
            let forms = restrictions(a, cone, excluded)?;
            let special: Vec<&(CurvePoint, LinearForm)> = forms.iter().filter(|(_, g)| !g.is_integral()).collect();
            if special.len() > 1 {
                return None;
            }
            let z0 = special.first().map_or_else(|| default_z0.clone(), |(p, _)| p.clone());
            let h = forms
                .iter()
                .find(|(p, _)| *p == z0)
                .map_or_else(|| LinearForm::zero(n), |(_, g)| g.clone());
            Some(HorizontalFrame {
                cone_index: i,
                omega_dual: cone.clone(),
                z0,
                z_inf: removed.clone(),
                data: frame_data(&h),
            })
        })
        .collect()
}

/// A point of ℙ¹ outside the support: the smallest positive integer not used.
fn generic_point(a: &GradedAlgebra) -> CurvePoint {
    let support = a.divisor().support();
    (1..)
        .map(CurvePoint::scalar)
        .find(|p| !support.contains(p))
        .expect("finite support")
}

/// All frames in the original coordinates. On ℙ¹ every support point is
/// tried as the removed point, followed by a generic one.
pub fn admissible_frames(a: &GradedAlgebra) -> Result<Vec<HorizontalFrame>> {
    match a.curve() {
        Curve::AffineLine => Ok(frames_of(a, None, &CurvePoint::scalar(0))),
        Curve::ProjectiveLine => {
            let mut out = Vec::new();
            for p in a.divisor().support() {
                let z0 = [CurvePoint::scalar(0), CurvePoint::Infinity]
                    .into_iter()
                    .find(|q| *q != p)
                    .expect("two candidates");
                out.extend(frames_of(a, Some(RemovedPoint::Special(p)), &z0));
            }
            let g = generic_point(a);
            out.extend(frames_of(a, Some(RemovedPoint::Generic(g)), &CurvePoint::scalar(0)));
            Ok(out)
        }
        Curve::Abstract { .. } => Err(Error::UnsupportedCurve(
            "horizontal derivations need a rational curve".into(),
        )),
    }
}

/// Moves `z0` to 0 and the removed point to ∞, then shifts the integral
/// restrictions at the other finite points to zero.
pub fn normalize_frame(a: &GradedAlgebra, f: &HorizontalFrame) -> Result<Normalization> {
    let psi = match (&f.z0, &f.z_inf) {
        (z0, None) => {
            let CurvePoint::Scalar(z) = z0 else {
                return Err(Error::InvalidInput(format!("no point {z0} on the affine line")));
            };
            if z.is_zero() {
                Mobius::identity()
            } else {
                Mobius::translation(z)
            }
        }
        (z0, Some(zi)) => {
            if f.is_normalized() {
                Mobius::identity()
            } else {
                Mobius::sending(z0, zi.point())
            }
        }
    };
    let relabeled = a.divisor().relabel(&psi)?;
    let mut shifts: Vec<(CurvePoint, RationalVector)> = Vec::new();
    for (p, delta) in relabeled.coefficients() {
        let finite_nonzero = matches!(p, CurvePoint::Scalar(z) if !z.is_zero());
        if !finite_nonzero {
            continue;
        }
        let g = crate::lattice_polyhedra::support_function(delta)
            .linear_piece_on(&f.omega_dual)
            .ok_or_else(|| Error::InvalidInput(format!("support function at {p} is not linear on the cone")))?;
        if !g.is_zero() {
            shifts.push((p.clone(), g.coeffs().clone()));
        }
    }
    let (shifted, shift_witness) = apply_principal_shift(&relabeled, &shifts)?;
    let witness = IsoWitness {
        mobius: psi,
        shifts: shift_witness.shifts,
    };
    let z_inf = f.z_inf.as_ref().map(|z| match z {
        RemovedPoint::Special(_) => RemovedPoint::Special(CurvePoint::Infinity),
        RemovedPoint::Generic(_) => RemovedPoint::Generic(CurvePoint::Infinity),
    });
    let frame = HorizontalFrame {
        cone_index: f.cone_index,
        omega_dual: f.omega_dual.clone(),
        z0: CurvePoint::scalar(0),
        z_inf,
        data: f.data.clone(),
    };
    Ok(Normalization {
        algebra: GradedAlgebra::new(shifted),
        frame,
        witness,
    })
}

/// `r = −1/d − h(e)` when it is an integer.
pub fn shift_exponent(f: &HorizontalFrame, e: &LatticeVector) -> Option<Int> {
    let r = -Rat::new(Int::one(), int(f.d() as i64)) - f.h().eval(e);
    r.is_integer().then(|| r.to_integer())
}

/// Generators of the hat cone other than `(p,1)`: `(ρ,0)` for the rays of
/// `σ` and, on ℙ¹, `(v,−1)` for the vertices of `Δ_∞`, cleared of denominators.
fn hat_cone(a: &GradedAlgebra, f: &HorizontalFrame) -> Result<(Cone, LatticeVector)> {
    let n = a.rank();
    let lift = |v: &[Rat], last: Rat| -> LatticeVector {
        let mut c = v.to_vec();
        c.push(last);
        LatticeVector::new(primitive_int(&c))
    };
    let mut gens: Vec<LatticeVector> = a
        .divisor()
        .sigma()
        .rays()
        .iter()
        .map(|r| lift(r.to_rational().coords(), Rat::zero()))
        .collect();
    let rho = lift(f.h().coeffs().coords(), Rat::one());
    gens.push(rho.clone());
    if *a.curve() == Curve::ProjectiveLine {
        for v in a.divisor().coefficient(&CurvePoint::Infinity).vertices() {
            gens.push(lift(v.coords(), -Rat::one()));
        }
    }
    let cone = Cone::from_generators(Side::N, n + 1, &gens, &[])?;
    Ok((cone, rho))
}

/// Whether `(e, −1/d − h(e))` is a lattice vector of `M×ℤ` pairing to `−1`
/// with the ray through `(p,1)` and nonnegatively with the other rays of the
/// hat cone. Expects a normalized frame.
pub fn degree_admissible(a: &GradedAlgebra, f: &HorizontalFrame, e: &LatticeVector) -> bool {
    if e.dim() != a.rank() {
        return false;
    }
    let Some(r) = shift_exponent(f, e) else {
        return false;
    };
    let Ok((cone, rho)) = hat_cone(a, f) else {
        return false;
    };
    if !cone.rays().contains(&rho) {
        return false;
    }
    let mut lifted = e.coords().to_vec();
    lifted.push(r);
    let lifted = LatticeVector::new(lifted);
    cone.rays()
        .iter()
        .filter(|g| **g != rho)
        .all(|g| !lifted.dot(g).is_negative())
        && cone.lineality_basis().iter().all(|g| lifted.dot(g).is_zero())
}

/// `d·h(e)` as an integer for an admissible degree.
pub(crate) fn scaled_h(f: &HorizontalFrame, e: &LatticeVector) -> Int {
    let v = f.h().eval(e) * rat_int(&int(f.d() as i64));
    debug_assert!(v.is_integer());
    v.to_integer()
}
