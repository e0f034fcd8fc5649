use std::collections::BTreeMap;
use std::fmt;

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::{Curve, CurvePoint, Mobius, QDivisor, RatFn};
use crate::error::{Error, Result};
use crate::lattice_polyhedra::{
    common_refinement, minkowski_sum, support_function, Cone, Quasifan, Side, SupportFunction,
    TailedPolyhedron,
};
use crate::rational::{LatticeVector, Rat, RationalVector};

/// A σ-polyhedral divisor `Σ Δ_z · z` on a curve. Points whose coefficient
/// is the tail cone are not stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyhedralDivisor {
    curve: Curve,
    sigma: Cone,
    coeffs: BTreeMap<CurvePoint, TailedPolyhedron>,
}

/// Outcome of the properness check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ProperVerdict {
    Proper,
    NotProper(String),
    /// Holds provided certain degree-zero divisors on a curve of positive
    /// genus are principal up to a multiple, which the data cannot decide.
    ProperAssumingPrincipality(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProperReport {
    pub verdict: ProperVerdict,
    /// Rays of the weight cone on which the degree polyhedron's support function vanishes.
    pub zero_locus_rays: Vec<LatticeVector>,
}

impl PolyhedralDivisor {
    pub fn new(
        curve: Curve,
        sigma: Cone,
        coeffs: impl IntoIterator<Item = (CurvePoint, TailedPolyhedron)>,
    ) -> Result<Self> {
        if sigma.side() != Side::N {
            return Err(Error::InvalidInput("tail cone must live in N".into()));
        }
        if !sigma.is_pointed() {
            return Err(Error::NotPointed);
        }
        let mut map = BTreeMap::new();
        for (p, delta) in coeffs {
            curve.validate_point(&p)?;
            if delta.tail() != &sigma {
                return Err(Error::TailMismatch);
            }
            if map.contains_key(&p) {
                return Err(Error::InvalidInput(format!("point {p} appears twice")));
            }
            if !delta.is_tail() {
                map.insert(p, delta);
            }
        }
        Ok(Self {
            curve,
            sigma,
            coeffs: map,
        })
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn sigma(&self) -> &Cone {
        &self.sigma
    }

    pub fn rank(&self) -> usize {
        self.sigma.ambient_dim()
    }

    /// The weight cone `σ∨`.
    pub fn weight_cone(&self) -> Cone {
        self.sigma.dual()
    }

    pub fn support(&self) -> Vec<CurvePoint> {
        self.coeffs.keys().cloned().collect()
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&CurvePoint, &TailedPolyhedron)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, p: &CurvePoint) -> TailedPolyhedron {
        self.coeffs
            .get(p)
            .cloned()
            .unwrap_or_else(|| TailedPolyhedron::tail_only(self.sigma.clone()))
    }

    /// `h_{Δ_p}(m)`.
    pub fn h_at(&self, p: &CurvePoint, m: &LatticeVector) -> Result<Rat> {
        match self.coeffs.get(p) {
            Some(delta) => delta.evaluate_support(m),
            None => {
                if self.weight_cone().contains(m) {
                    Ok(Rat::zero())
                } else {
                    Err(Error::OutsideWeightCone(m.to_string()))
                }
            }
        }
    }

    /// `𝔇(m) = Σ h_{Δ_z}(m) · z`.
    pub fn evaluate(&self, m: &LatticeVector) -> Result<QDivisor> {
        if m.dim() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: m.dim(),
            });
        }
        if !self.weight_cone().contains(m) {
            return Err(Error::OutsideWeightCone(m.to_string()));
        }
        let terms: Vec<(CurvePoint, Rat)> = self
            .coeffs
            .iter()
            .map(|(p, delta)| (p.clone(), delta.evaluate_support(m).expect("m in σ∨")))
            .collect();
        QDivisor::new(self.curve.clone(), terms)
    }

    /// `deg 𝔇 = Σ Δ_z`.
    pub fn degree_polyhedron(&self) -> TailedPolyhedron {
        self.coeffs.values().fold(
            TailedPolyhedron::tail_only(self.sigma.clone()),
            |acc, d| minkowski_sum(&acc, d).expect("common tail"),
        )
    }

    pub fn support_function_at(&self, p: &CurvePoint) -> SupportFunction {
        support_function(&self.coefficient(p))
    }

    /// Coarsest refinement of the normal quasifans of the coefficients, over
    /// every point except `excluded`.
    pub fn quasifan(&self, excluded: Option<&CurvePoint>) -> Quasifan {
        let mut fans: Vec<Quasifan> = self
            .coeffs
            .iter()
            .filter(|(p, _)| Some(*p) != excluded)
            .map(|(_, d)| support_function(d).quasifan())
            .collect();
        if fans.is_empty() {
            let w = self.weight_cone();
            fans.push(Quasifan::new(w.clone(), vec![w]));
        }
        common_refinement(&fans).expect("common support σ∨")
    }

    pub fn is_proper(&self) -> ProperReport {
        if self.curve.is_affine() {
            return ProperReport {
                verdict: ProperVerdict::Proper,
                zero_locus_rays: Vec::new(),
            };
        }
        let deg = self.degree_polyhedron();
        let not_proper = |reason: &str| ProperReport {
            verdict: ProperVerdict::NotProper(reason.to_string()),
            zero_locus_rays: Vec::new(),
        };
        let inside = deg.vertices().iter().all(|v| self.sigma.contains_rational(v));
        if !inside || deg.is_tail() {
            return not_proper("degree polyhedron is not a proper subset of the tail cone");
        }
        // zero locus of h_deg on σ∨: the union of the faces σ∨ ∩ v⊥ over vertices v
        let weights = self.weight_cone();
        let mut rays: Vec<LatticeVector> = Vec::new();
        for v in deg.vertices() {
            let normal = LatticeVector::new(crate::linalg::primitive_int(v.coords()));
            if normal.is_zero() {
                return not_proper("support function of the degree vanishes in the interior of the weight cone");
            }
            let face = weights.face(&normal);
            rays.extend(face.rays().iter().cloned());
        }
        rays.sort();
        rays.dedup();
        let verdict = if rays.is_empty() || self.curve.genus() == 0 {
            // on ℙ¹ degree-zero divisors are principal up to a multiple
            ProperVerdict::Proper
        } else {
            ProperVerdict::ProperAssumingPrincipality(format!(
                "degree-zero evaluations along {} ray(s) are assumed principal up to a multiple",
                rays.len()
            ))
        };
        ProperReport {
            verdict,
            zero_locus_rays: rays,
        }
    }

    /// Moves every point by a Möbius map (an affine map on the affine line).
    pub fn relabel(&self, psi: &Mobius) -> Result<Self> {
        match self.curve {
            Curve::AffineLine if !psi.is_affine() => {
                return Err(Error::InvalidInput("affine line needs an affine relabeling".into()))
            }
            Curve::Abstract { .. } => {
                return Err(Error::UnsupportedCurve("relabeling needs the line".into()))
            }
            _ => {}
        }
        let coeffs: Vec<(CurvePoint, TailedPolyhedron)> = self
            .coeffs
            .iter()
            .map(|(p, d)| (psi.apply(p), d.clone()))
            .collect();
        Self::new(self.curve.clone(), self.sigma.clone(), coeffs)
    }
}

impl fmt::Display for PolyhedralDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0 (tail {})", self.sigma);
        }
        for (i, (p, d)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{d}*[{p}]")?;
        }
        Ok(())
    }
}

/// An isomorphism `A[C,𝔇] → A[C,𝔇′]` given by a Möbius relabeling followed
/// by principal shifts: `fχ^m ↦ (f∘ψ⁻¹)·Π (t − z)^⟨m, p_z⟩ χ^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoWitness {
    pub mobius: Mobius,
    pub shifts: Vec<(Rat, LatticeVector)>,
}

impl IsoWitness {
    pub fn identity() -> Self {
        Self {
            mobius: Mobius::identity(),
            shifts: Vec::new(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.mobius.is_identity() && self.shifts.iter().all(|(_, p)| p.is_zero())
    }

    fn shift_factor(&self, m: &LatticeVector) -> RatFn {
        self.shifts.iter().fold(RatFn::one(), |acc, (z, p)| {
            let k = m.dot(p).to_i64().expect("small exponent");
            acc.mul(&RatFn::linear_power(z, k))
        })
    }

    pub fn forward(&self, m: &LatticeVector, f: &RatFn) -> RatFn {
        self.mobius.push_forward(f).mul(&self.shift_factor(m))
    }

    pub fn backward(&self, m: &LatticeVector, g: &RatFn) -> RatFn {
        let inv = self.shift_factor(m).inverse().expect("nonzero factor");
        self.mobius.pull_back(&g.mul(&inv))
    }
}

/// Replaces `Δ_z` by `Δ_z − p_z` for lattice vectors `p_z` at finite points.
/// On ℙ¹ the total shift is deposited at ∞ so that degrees are preserved.
pub fn apply_principal_shift(
    d: &PolyhedralDivisor,
    shifts: &[(CurvePoint, RationalVector)],
) -> Result<(PolyhedralDivisor, IsoWitness)> {
    if !d.curve.is_rational_line() {
        return Err(Error::UnsupportedCurve("principal shifts need the line".into()));
    }
    let n = d.rank();
    let mut total = RationalVector::zero(n);
    let mut coeffs = d.coeffs.clone();
    let mut witness = IsoWitness::identity();
    for (p, shift) in shifts {
        let Some(lattice) = shift.to_lattice() else {
            return Err(Error::NonLatticeShift(shift.to_string()));
        };
        let CurvePoint::Scalar(z) = p else {
            return Err(Error::InvalidInput(format!("cannot shift at {p}")));
        };
        if lattice.is_zero() {
            continue;
        }
        let delta = d.coefficient(p).translate(&shift.neg());
        coeffs.insert(p.clone(), delta);
        total = total.add(shift);
        witness.shifts.push((z.clone(), lattice));
    }
    if d.curve == Curve::ProjectiveLine && !total.is_zero() {
        let delta = d.coefficient(&CurvePoint::Infinity).translate(&total);
        coeffs.insert(CurvePoint::Infinity, delta);
    }
    let out = PolyhedralDivisor::new(d.curve.clone(), d.sigma.clone(), coeffs)?;
    Ok((out, witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve_divisors::sections_dim;
    use crate::rational::rat;

    fn rv(c: &[(i64, i64)]) -> RationalVector {
        RationalVector::from_ratios(c)
    }

    fn hyperbolic() -> PolyhedralDivisor {
        let sigma = Cone::origin(Side::N, 2);
        let d0 = TailedPolyhedron::new(
            vec![rv(&[(0, 1), (0, 1)]), rv(&[(0, 1), (1, 1)]), rv(&[(-1, 4), (-1, 1)])],
            sigma.clone(),
        )
        .unwrap();
        let d1 = TailedPolyhedron::new(vec![rv(&[(0, 1), (0, 1)]), rv(&[(0, 1), (1, 1)])], sigma.clone())
            .unwrap();
        PolyhedralDivisor::new(
            Curve::AffineLine,
            sigma,
            [(CurvePoint::scalar(0), d0), (CurvePoint::scalar(1), d1)],
        )
        .unwrap()
    }

    #[test]
    fn evaluation_at_sample_weights() {
        let d = hyperbolic();
        let e = d.evaluate(&LatticeVector::from_i64(&[4, 0])).unwrap();
        assert_eq!(e.coefficient(&CurvePoint::scalar(0)), rat(-1, 1));
        assert_eq!(e.coefficient(&CurvePoint::scalar(1)), rat(0, 1));
        let e = d.evaluate(&LatticeVector::from_i64(&[8, -1])).unwrap();
        assert_eq!(e.coefficient(&CurvePoint::scalar(0)), rat(-1, 1));
        assert_eq!(e.coefficient(&CurvePoint::scalar(1)), rat(-1, 1));
        assert!(d.evaluate(&LatticeVector::zero(2)).unwrap().is_zero());
    }

    #[test]
    fn affine_divisors_are_proper() {
        assert_eq!(hyperbolic().is_proper().verdict, ProperVerdict::Proper);
    }

    #[test]
    fn elliptic_point_divisor_is_proper() {
        let sigma = Cone::generated_by(Side::N, &[&[1, 0], &[0, 1]]).unwrap();
        let delta = TailedPolyhedron::translate_of_tail(rv(&[(1, 1), (1, 1)]), sigma.clone()).unwrap();
        let curve = Curve::Abstract {
            genus: 1,
            points: vec!["P".into()],
        };
        let d = PolyhedralDivisor::new(curve, sigma, [(CurvePoint::Label("P".into()), delta)]).unwrap();
        let report = d.is_proper();
        assert_eq!(report.verdict, ProperVerdict::Proper);
        assert!(report.zero_locus_rays.is_empty());
    }

    #[test]
    fn tail_degree_is_not_proper_on_the_projective_line() {
        let sigma = Cone::generated_by(Side::N, &[&[1]]).unwrap();
        let a = TailedPolyhedron::translate_of_tail(rv(&[(1, 1)]), sigma.clone()).unwrap();
        let b = TailedPolyhedron::translate_of_tail(rv(&[(-1, 1)]), sigma.clone()).unwrap();
        let d = PolyhedralDivisor::new(
            Curve::ProjectiveLine,
            sigma,
            [(CurvePoint::scalar(0), a), (CurvePoint::Infinity, b)],
        )
        .unwrap();
        assert!(matches!(d.is_proper().verdict, ProperVerdict::NotProper(_)));
    }

    #[test]
    fn principal_shift_matches_the_normalized_coefficient() {
        let d = hyperbolic();
        let (same, w) = apply_principal_shift(&d, &[(CurvePoint::scalar(1), rv(&[(0, 1), (0, 1)]))]).unwrap();
        assert_eq!(same, d);
        assert!(w.is_identity());

        let (shifted, w) = apply_principal_shift(&d, &[(CurvePoint::scalar(1), rv(&[(0, 1), (1, 1)]))]).unwrap();
        assert_eq!(
            shifted.coefficient(&CurvePoint::scalar(1)).vertices(),
            &[rv(&[(0, 1), (-1, 1)]), rv(&[(0, 1), (0, 1)])]
        );
        // the witness carries A_m onto A'_m
        let m = LatticeVector::from_i64(&[8, -1]);
        let f = RatFn::t().mul(&RatFn::linear_power(&rat(1, 1), 1));
        let g = w.forward(&m, &f);
        assert_eq!(g, RatFn::t());
        assert_eq!(w.backward(&m, &g), f);

        let bad = apply_principal_shift(&d, &[(CurvePoint::scalar(1), rv(&[(1, 2), (0, 1)]))]);
        assert!(matches!(bad, Err(Error::NonLatticeShift(_))));
    }

    #[test]
    fn shifts_on_the_projective_line_preserve_dimensions() {
        let sigma = Cone::generated_by(Side::N, &[&[1]]).unwrap();
        let a = TailedPolyhedron::translate_of_tail(rv(&[(1, 3)]), sigma.clone()).unwrap();
        let d = PolyhedralDivisor::new(Curve::ProjectiveLine, sigma, [(CurvePoint::scalar(2), a)]).unwrap();
        let (shifted, _) = apply_principal_shift(&d, &[(CurvePoint::scalar(2), rv(&[(1, 1)]))]).unwrap();
        for m in 0..10 {
            let m = LatticeVector::from_i64(&[m]);
            let before = sections_dim(&d.evaluate(&m).unwrap().floor()).unwrap();
            let after = sections_dim(&shifted.evaluate(&m).unwrap().floor()).unwrap();
            assert_eq!(before, after);
        }
    }
}
