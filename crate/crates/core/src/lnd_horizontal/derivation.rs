//! The derivations `λ t^r χ^e (t∂_t + Σ h(μ_i) χ^{μ_i} ∂_{ν_i})`, their
//! kernels and the classes they fall into.

use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::{
    admissible_frames, degree_admissible, normalize_frame, shift_exponent, ConditionReport, HorizontalFrame,
};
use super::conditions::check_conditions;
use crate::curve_divisors::{Curve, IsoWitness, RatFn, Section};
use crate::error::{Error, Result};
use crate::graded_algebra::{GradedAlgebra, HomogeneousElement};
use crate::lattice_polyhedra::{semigroup_generators, Cone};
use crate::rational::{format_rational, LatticeVector, Rat};

/// Which vector field a term carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `∂_t`.
    Curve,
    /// `∂_{ν_i}`, 1-based.
    Torus(usize),
}

/// `coefficient · t^t_power · χ^degree · direction`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationTerm {
    pub coefficient: Rat,
    pub t_power: i64,
    pub degree: LatticeVector,
    pub direction: Direction,
}

impl DerivationTerm {
    fn body(&self) -> String {
        let mag = self.coefficient.abs();
        let mut parts = Vec::new();
        if !mag.is_one() {
            parts.push(format_rational(&mag));
        }
        match self.t_power {
            0 => {}
            1 => parts.push("t".to_string()),
            k => parts.push(format!("t^{k}")),
        }
        parts.push(format!("χ^{}", self.degree));
        parts.push(match self.direction {
            Direction::Curve => "∂_t".to_string(),
            Direction::Torus(i) => format!("∂_ν{i}"),
        });
        parts.join(" ")
    }
}

/// A homogeneous derivation of horizontal type, stored in normalized
/// coordinates together with the isomorphism from the input algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HorizontalLND {
    original: GradedAlgebra,
    normalized: GradedAlgebra,
    frame: HorizontalFrame,
    witness: IsoWitness,
    degree: LatticeVector,
    exponent: i64,
    scale: Rat,
    conditions: ConditionReport,
}

/// Builds the derivation of degree `e` for the frame `f` of `a`, after
/// checking admissibility and the floor conditions.
pub fn build_lnd(a: &GradedAlgebra, f: &HorizontalFrame, e: LatticeVector, lambda: Rat) -> Result<HorizontalLND> {
    if lambda.is_zero() {
        return Err(Error::InvalidInput("scale must be nonzero".into()));
    }
    let norm = normalize_frame(a, f)?;
    if !degree_admissible(&norm.algebra, &norm.frame, &e) {
        return Err(Error::NotInSRho(e.to_string()));
    }
    let conditions = check_conditions(&norm.algebra, &norm.frame, &e)?;
    if let Some(bad) = conditions.first_failure() {
        return Err(Error::ConditionViolated(bad.to_string()));
    }
    let exponent = shift_exponent(&norm.frame, &e)
        .and_then(|r| r.to_i64())
        .ok_or_else(|| Error::NotInSRho(e.to_string()))?;
    Ok(HorizontalLND {
        original: a.clone(),
        normalized: norm.algebra,
        frame: norm.frame,
        witness: norm.witness,
        degree: e,
        exponent,
        scale: lambda,
        conditions,
    })
}

impl HorizontalLND {
    pub fn degree(&self) -> &LatticeVector {
        &self.degree
    }

    /// `r = −1/d − h(e)`.
    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn scale(&self) -> &Rat {
        &self.scale
    }

    /// The normalized frame.
    pub fn frame(&self) -> &HorizontalFrame {
        &self.frame
    }

    pub fn normalized_algebra(&self) -> &GradedAlgebra {
        &self.normalized
    }

    pub fn witness(&self) -> &IsoWitness {
        &self.witness
    }

    pub fn conditions(&self) -> &ConditionReport {
        &self.conditions
    }

    /// `λ t^r (t f′ + h(m) f)` for `f` of degree `m`, normalized coordinates.
    fn image(&self, m: &LatticeVector, f: &RatFn) -> RatFn {
        let hm = self.frame.h().eval(m);
        let inner = RatFn::t().mul(&f.derivative()).add(&f.scale(&hm));
        inner
            .mul(&RatFn::linear_power(&Rat::zero(), self.exponent))
            .scale(&self.scale)
    }

    /// Applies the derivation to an element of the normalized algebra.
    pub fn apply_normalized(&self, x: &HomogeneousElement) -> Result<HomogeneousElement> {
        let target = x.degree().add(&self.degree);
        let f = rational_section(x)?;
        if f.is_zero() {
            return Ok(self.normalized.zero_element(target));
        }
        let g = self.image(x.degree(), f);
        self.normalized.element(target, Section::Rational(g))
    }

    /// Applies the derivation to an element of the input algebra.
    pub fn apply(&self, x: &HomogeneousElement) -> Result<HomogeneousElement> {
        let m = x.degree();
        let target = m.add(&self.degree);
        let f = rational_section(x)?;
        if f.is_zero() {
            return Ok(self.original.zero_element(target));
        }
        let g = self.image(m, &self.witness.forward(m, f));
        let back = self.witness.backward(&target, &g);
        self.original.element(target, Section::Rational(back))
    }

    /// Number of applications after which `x` vanishes, if at most `max_steps`.
    pub fn steps_to_zero(&self, x: &HomogeneousElement, max_steps: usize) -> Result<Option<usize>> {
        let mut y = x.clone();
        for k in 0..=max_steps {
            if y.is_zero() {
                return Ok(Some(k));
            }
            y = self.apply(&y)?;
        }
        Ok(y.is_zero().then_some(max_steps + 1))
    }

    /// The terms of the derivation in normalized coordinates.
    pub fn terms(&self) -> Vec<DerivationTerm> {
        let n = self.degree.dim();
        let mut out = vec![DerivationTerm {
            coefficient: self.scale.clone(),
            t_power: self.exponent + 1,
            degree: self.degree.clone(),
            direction: Direction::Curve,
        }];
        for (i, c) in self.frame.h().coeffs().coords().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out.push(DerivationTerm {
                coefficient: &self.scale * c,
                t_power: self.exponent,
                degree: self.degree.add(&LatticeVector::unit(n, i)),
                direction: Direction::Torus(i + 1),
            });
        }
        out
    }

    pub fn formula(&self) -> String {
        let mut s = String::new();
        for (i, term) in self.terms().iter().enumerate() {
            let negative = term.coefficient.is_negative();
            match (i, negative) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            s.push_str(&term.body());
        }
        s
    }
}

impl fmt::Display for HorizontalLND {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.formula())
    }
}

fn rational_section(x: &HomogeneousElement) -> Result<&RatFn> {
    x.section()
        .as_rational()
        .ok_or_else(|| Error::UnsupportedCurve("horizontal derivations need the line".into()))
}

/// `ker ∂ = ⊕_{m ∈ ω∨ ∩ L} 𝕂 φ_m χ^m`, given by generators of the monoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelDescription {
    pub cone: Cone,
    pub lattice: Vec<LatticeVector>,
    pub degrees: Vec<LatticeVector>,
    /// `φ_m χ^m` for each listed degree, in the input coordinates.
    pub generators: Vec<HomogeneousElement>,
}

/// Kernel generators for the frame `f` of `a` (input coordinates).
pub fn horizontal_kernel(a: &GradedAlgebra, f: &HorizontalFrame) -> Result<KernelDescription> {
    let degrees = semigroup_generators(&f.omega_dual, Some(&f.data.lattice));
    let away = f.z_inf.as_ref().map(|z| z.point());
    let generators = degrees
        .iter()
        .map(|m| {
            let phi = a.distinguished_generator(m, away)?.phi.to_ratfn();
            a.element(m.clone(), Section::Rational(phi))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(KernelDescription {
        cone: f.omega_dual.clone(),
        lattice: f.data.lattice.clone(),
        degrees,
        generators,
    })
}

/// Lattice points of `cone` with sup-norm exactly `s`, lexicographically.
fn shell(cone: &Cone, n: usize, s: i64) -> Vec<LatticeVector> {
    let mut pts: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..n {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                (-s..=s).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    pts.into_iter()
        .filter(|p| p.iter().map(|c| c.abs()).max().unwrap_or(0) == s)
        .map(|p| LatticeVector::from_i64(&p))
        .filter(|p| cone.contains(p))
        .collect()
}

/// The smallest degree in `ω∨` (sup-norm, then lexicographic) giving a derivation.
pub fn find_degree(a: &GradedAlgebra, f: &HorizontalFrame, search_norm: i64) -> Result<HorizontalLND> {
    let norm = normalize_frame(a, f)?;
    let n = a.rank();
    for s in 0..=search_norm {
        for e in shell(&f.omega_dual, n, s) {
            if !degree_admissible(&norm.algebra, &norm.frame, &e) {
                continue;
            }
            if check_conditions(&norm.algebra, &norm.frame, &e)?.holds() {
                return build_lnd(a, f, e, Rat::one());
            }
        }
    }
    Err(Error::NotFoundWithinBound(search_norm))
}

/// One class of horizontal derivations with a representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HorizontalClass {
    pub id: String,
    /// The frame in the input coordinates.
    pub frame: HorizontalFrame,
    pub representative: HorizontalLND,
    pub kernel: KernelDescription,
}

/// Classes of horizontal derivations. On ℙ¹ a generic removed point stands
/// for infinitely many classes, flagged by `infinite`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassReport {
    pub classes: Vec<HorizontalClass>,
    /// A cone witnessing infinitely many classes.
    pub infinite: Option<Cone>,
    /// Why there are no classes, when that is structural.
    pub reason: Option<String>,
}

impl ClassReport {
    pub fn is_infinite(&self) -> bool {
        self.infinite.is_some()
    }

    /// Classes with a special removed point (or all classes off ℙ¹).
    pub fn finite_classes(&self) -> impl Iterator<Item = &HorizontalClass> {
        self.classes
            .iter()
            .filter(|c| !c.frame.z_inf.as_ref().is_some_and(|z| z.is_generic()))
    }
}

pub fn horizontal_equivalence_classes(a: &GradedAlgebra, search_norm: i64) -> Result<ClassReport> {
    if let Curve::Abstract { .. } = a.curve() {
        return Ok(ClassReport {
            classes: Vec::new(),
            infinite: None,
            reason: Some("curve not rational".into()),
        });
    }
    let frames = admissible_frames(a)?;
    let classes = frames
        .par_iter()
        .map(|f| {
            Ok(HorizontalClass {
                id: f.id(),
                frame: f.clone(),
                representative: find_degree(a, f, search_norm)?,
                kernel: horizontal_kernel(a, f)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let infinite = frames
        .iter()
        .find(|f| f.z_inf.as_ref().is_some_and(|z| z.is_generic()))
        .map(|f| f.omega_dual.clone());
    let reason = classes
        .is_empty()
        .then(|| "no maximal cone has integral restrictions away from one point".to_string());
    Ok(ClassReport {
        classes,
        infinite,
        reason,
    })
}
