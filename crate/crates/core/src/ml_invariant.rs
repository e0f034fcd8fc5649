//! The homogeneous Makar-Limanov invariant: intersections of kernels of the
//! fiber and horizontal classes, the triviality criterion, and kernel
//! generators.

use num_traits::Zero;

use crate::curve_divisors::Section;
use crate::error::{Error, Result};
use crate::graded_algebra::{AlgebraType, GradedAlgebra, HomogeneousElement};
use crate::lattice_polyhedra::{dual_face, max_subspace, semigroup_generators, support_function, Cone, Side};
use crate::lnd_fiber::{fiber_equivalence_classes, FiberLND, ToricLND};
use crate::lnd_horizontal::{admissible_frames, horizontal_kernel, HorizontalFrame, HorizontalLND};
use crate::rational::LatticeVector;

/// What sits in each degree of the semigroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PieceKind {
    /// The whole graded piece `A_m`.
    Full,
    /// The line `𝕂 φ_m χ^m`.
    Line,
}

/// `⊕_{m ∈ cone ∩ lattice}` of pieces of the given kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemigroupAlgebraDescription {
    pub cone: Cone,
    /// Basis of the lattice of allowed degrees.
    pub lattice: Vec<LatticeVector>,
    /// Generators of `cone ∩ lattice` as a monoid.
    pub degrees: Vec<LatticeVector>,
    pub kind: PieceKind,
    /// `φ_m χ^m` for the listed degrees, when they are available.
    pub witnesses: Vec<HomogeneousElement>,
}

impl SemigroupAlgebraDescription {
    fn new(cone: Cone, lattice: Vec<LatticeVector>, kind: PieceKind) -> Self {
        let degrees = semigroup_generators(&cone, Some(&lattice));
        Self {
            cone,
            lattice,
            degrees,
            kind,
            witnesses: Vec::new(),
        }
    }

    pub fn is_degree_trivial(&self) -> bool {
        self.cone.is_origin()
    }
}

fn standard_lattice(n: usize) -> Vec<LatticeVector> {
    (0..n).map(|i| LatticeVector::unit(n, i)).collect()
}

/// `𝕂[θ_M]` with `θ` the largest subspace in `σ∨`.
pub fn ml_toric(sigma: &Cone) -> SemigroupAlgebraDescription {
    let theta = max_subspace(&sigma.dual());
    SemigroupAlgebraDescription::new(theta, standard_lattice(sigma.ambient_dim()), PieceKind::Full)
}

/// `⊕_{m ∈ θ_M} A_m χ^m`, `θ` the intersection of the facets `σ∨ ∩ ρ⊥` over
/// the rays carrying fiber-type derivations.
pub fn ml_fib(a: &GradedAlgebra) -> Result<SemigroupAlgebraDescription> {
    let sigma = a.divisor().sigma();
    let mut theta = sigma.dual();
    for rho in fiber_equivalence_classes(a) {
        theta = theta.intersect(&dual_face(sigma, &rho)?);
    }
    Ok(SemigroupAlgebraDescription::new(theta, standard_lattice(a.rank()), PieceKind::Full))
}

/// `{m ∈ σ∨ : h_{deg 𝔇}(m) = 0}`, which must be a face of `σ∨`.
pub fn degree_zero_face(a: &GradedAlgebra) -> Result<Cone> {
    let weights = a.weight_cone();
    let h = support_function(&a.divisor().degree_polyhedron());
    let zero = |m: &LatticeVector| h.evaluate(m).map(|v| v.is_zero());
    let mut rays = Vec::new();
    for r in weights.rays() {
        if zero(r)? {
            rays.push(r.clone());
        }
    }
    let face = Cone::from_generators(Side::M, a.rank(), &rays, weights.lineality_basis())?;
    if !zero(&face.relative_interior_point())? {
        return Err(Error::InvalidInput("zero locus of the degree is not a face".into()));
    }
    Ok(face)
}

/// Frames and the cone `δ` they cut out, on which the horizontal kernels meet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HorizontalIntersection {
    pub frames: Vec<HorizontalFrame>,
    pub delta: Cone,
    /// Whether all frames induce the same monoid on `δ`.
    pub lattices_agree: bool,
}

fn horizontal_intersection(a: &GradedAlgebra) -> Result<Option<HorizontalIntersection>> {
    if !a.curve().is_rational_line() {
        return Ok(None);
    }
    let frames = admissible_frames(a)?;
    let Some(first) = frames.first() else {
        return Ok(None);
    };
    let mut delta = first.omega_dual.clone();
    for f in &frames[1..] {
        delta = delta.intersect(&f.omega_dual);
    }
    if a.kind() == AlgebraType::Elliptic {
        delta = delta.intersect(&degree_zero_face(a)?);
    }
    let reference = semigroup_generators(&delta, Some(&first.data.lattice));
    let lattices_agree = frames
        .iter()
        .all(|f| semigroup_generators(&delta, Some(&f.data.lattice)) == reference);
    Ok(Some(HorizontalIntersection {
        frames,
        delta,
        lattices_agree,
    }))
}

/// Line pieces `𝕂 φ_m χ^m` on `cone ∩ L`, with `φ_m` where it is defined.
fn line_description(a: &GradedAlgebra, cone: Cone, lattice: Vec<LatticeVector>) -> SemigroupAlgebraDescription {
    let mut d = SemigroupAlgebraDescription::new(cone, lattice, PieceKind::Line);
    d.witnesses = d
        .degrees
        .iter()
        .filter_map(|m| {
            let phi = a.distinguished_generator(m, None).ok()?.phi.to_ratfn();
            a.element(m.clone(), Section::Rational(phi)).ok()
        })
        .collect();
    d
}

/// `⊕_{m ∈ δ_L} 𝕂 φ_m χ^m`, or `None` when there is no horizontal derivation.
pub fn ml_hor(a: &GradedAlgebra) -> Result<Option<SemigroupAlgebraDescription>> {
    Ok(horizontal_intersection(a)?.map(|h| line_description(a, h.delta, h.frames[0].data.lattice.clone())))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MLResult {
    pub ml_fib: SemigroupAlgebraDescription,
    pub ml_hor: Option<SemigroupAlgebraDescription>,
    pub ml_h: SemigroupAlgebraDescription,
    /// `ML_h(A) = 𝕂`.
    pub trivial: bool,
    /// `false` if two frames disagree on the monoid of `δ`.
    pub lattices_agree: bool,
}

pub fn ml_homogeneous(a: &GradedAlgebra) -> Result<MLResult> {
    let fib = ml_fib(a)?;
    let inter = horizontal_intersection(a)?;
    let (hor, ml_h, lattices_agree) = match &inter {
        None => (None, fib.clone(), true),
        Some(h) => {
            let lattice = h.frames[0].data.lattice.clone();
            let hor = line_description(a, h.delta.clone(), lattice.clone());
            let both = line_description(a, fib.cone.intersect(&h.delta), lattice);
            (Some(hor), both, h.lattices_agree)
        }
    };
    // with only fiber derivations, degree 0 carries A_0, which is 𝕂 only when elliptic
    let trivial = ml_h.is_degree_trivial() && (hor.is_some() || a.kind() == AlgebraType::Elliptic);
    Ok(MLResult {
        ml_fib: fib,
        ml_hor: hor,
        ml_h,
        trivial,
        lattices_agree,
    })
}

/// Which sufficient condition for `ML_h(A) = 𝕂` fires.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrivialityReport {
    /// Elliptic, rank at least 2, and `deg 𝔇` inside the relative interior of `σ`.
    pub degree_interior: bool,
    /// A horizontal derivation exists and `θ ∩ δ = {0}`.
    pub kernels_meet_trivially: bool,
    /// The verdict of the direct computation.
    pub trivial: bool,
}

impl TrivialityReport {
    pub fn criterion_holds(&self) -> bool {
        self.degree_interior || self.kernels_meet_trivially
    }

    pub fn branch(&self) -> Option<&'static str> {
        if self.degree_interior {
            Some("degree-interior")
        } else if self.kernels_meet_trivially {
            Some("kernels-meet-trivially")
        } else {
            None
        }
    }
}

pub fn ml_trivial(a: &GradedAlgebra) -> Result<TrivialityReport> {
    let sigma = a.divisor().sigma();
    let degree_interior = a.kind() == AlgebraType::Elliptic
        && a.rank() >= 2
        && a
            .divisor()
            .degree_polyhedron()
            .vertices()
            .iter()
            .all(|v| sigma.contains_in_relative_interior(v));
    let result = ml_homogeneous(a)?;
    let kernels_meet_trivially = result.ml_hor.is_some() && result.ml_h.is_degree_trivial();
    Ok(TrivialityReport {
        degree_interior,
        kernels_meet_trivially,
        trivial: result.trivial,
    })
}

/// Generators of the kernel of a classified derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KernelGenerators {
    /// Degrees of the characters generating `𝕂[τ_M]`.
    Toric(Vec<LatticeVector>),
    /// Homogeneous generators of `⊕_{m ∈ τ_M} A_m χ^m`.
    Fiber(Vec<HomogeneousElement>),
    /// `φ_m χ^m` over the monoid generators of `ω∨ ∩ L`.
    Horizontal(Vec<HomogeneousElement>),
}

/// A derivation of any of the three kinds.
#[derive(Clone, Copy, Debug)]
pub enum LndRef<'a> {
    Toric { sigma: &'a Cone, lnd: &'a ToricLND },
    Fiber { algebra: &'a GradedAlgebra, lnd: &'a FiberLND },
    Horizontal { algebra: &'a GradedAlgebra, frame: &'a HorizontalFrame, lnd: &'a HorizontalLND },
}

/// Generators of `ker ∂`. For fiber type, `bound` is passed to the
/// generator search of the algebra.
pub fn kernel_generators(l: LndRef<'_>, bound: usize) -> Result<KernelGenerators> {
    match l {
        LndRef::Toric { sigma, lnd } => {
            let tau = dual_face(sigma, &lnd.rho)?;
            Ok(KernelGenerators::Toric(semigroup_generators(&tau, None)))
        }
        LndRef::Fiber { algebra, lnd } => {
            Ok(KernelGenerators::Fiber(algebra.generators_on_face(lnd.rho(), bound)?))
        }
        LndRef::Horizontal { algebra, frame, .. } => {
            Ok(KernelGenerators::Horizontal(horizontal_kernel(algebra, frame)?.generators))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve_divisors::{Curve, CurvePoint, PolyhedralDivisor};
    use crate::lattice_polyhedra::TailedPolyhedron;
    use crate::rational::RationalVector;

    fn rv(c: &[(i64, i64)]) -> RationalVector {
        RationalVector::from_ratios(c)
    }

    fn hyperbolic() -> GradedAlgebra {
        let sigma = Cone::origin(Side::N, 2);
        let d0 = TailedPolyhedron::new(
            vec![rv(&[(0, 1), (0, 1)]), rv(&[(0, 1), (1, 1)]), rv(&[(-1, 4), (-1, 1)])],
            sigma.clone(),
        )
        .unwrap();
        let d1 = TailedPolyhedron::new(vec![rv(&[(0, 1), (0, 1)]), rv(&[(0, 1), (1, 1)])], sigma.clone()).unwrap();
        GradedAlgebra::new(
            PolyhedralDivisor::new(
                Curve::AffineLine,
                sigma,
                [(CurvePoint::scalar(0), d0), (CurvePoint::scalar(1), d1)],
            )
            .unwrap(),
        )
    }

    fn elliptic_genus_one() -> GradedAlgebra {
        let sigma = Cone::generated_by(Side::N, &[&[1, 0], &[0, 1]]).unwrap();
        let delta = TailedPolyhedron::translate_of_tail(rv(&[(1, 1), (1, 1)]), sigma.clone()).unwrap();
        let curve = Curve::Abstract {
            genus: 1,
            points: vec!["P".into()],
        };
        GradedAlgebra::new(PolyhedralDivisor::new(curve, sigma, [(CurvePoint::Label("P".into()), delta)]).unwrap())
    }

    #[test]
    fn toric_invariants() {
        let full = Cone::generated_by(Side::N, &[&[1, 0], &[0, 1]]).unwrap();
        assert!(ml_toric(&full).is_degree_trivial());
        let origin = Cone::origin(Side::N, 2);
        assert_eq!(ml_toric(&origin).cone.lineality_dim(), 2);
        let half = Cone::generated_by(Side::N, &[&[1, 0]]).unwrap();
        let theta = ml_toric(&half).cone;
        assert_eq!(theta.lineality_dim(), 1);
        assert!(theta.contains(&LatticeVector::from_i64(&[0, 1])));
        assert!(!theta.contains(&LatticeVector::from_i64(&[1, 0])));
    }

    #[test]
    fn hyperbolic_invariant_is_trivial_through_kernels() {
        let a = hyperbolic();
        let fib = ml_fib(&a).unwrap();
        assert_eq!(fib.cone.lineality_dim(), 2);
        let res = ml_homogeneous(&a).unwrap();
        assert!(res.ml_hor.as_ref().unwrap().is_degree_trivial());
        assert!(res.trivial);
        let t = ml_trivial(&a).unwrap();
        assert!(!t.degree_interior);
        assert!(t.kernels_meet_trivially);
        assert_eq!(t.branch(), Some("kernels-meet-trivially"));
    }

    #[test]
    fn genus_one_invariant_is_trivial_through_the_degree() {
        let a = elliptic_genus_one();
        assert!(ml_hor(&a).unwrap().is_none());
        let res = ml_homogeneous(&a).unwrap();
        assert!(res.ml_fib.is_degree_trivial());
        assert!(res.trivial);
        let t = ml_trivial(&a).unwrap();
        assert!(t.degree_interior);
        assert_eq!(t.branch(), Some("degree-interior"));
    }

    #[test]
    fn hyperbolic_without_derivations_keeps_everything() {
        // two non-integral points on the same cone leave no horizontal frame
        let sigma = Cone::origin(Side::N, 1);
        let half = TailedPolyhedron::new(vec![rv(&[(-1, 2)]), rv(&[(1, 2)])], sigma.clone()).unwrap();
        let a = GradedAlgebra::new(
            PolyhedralDivisor::new(
                Curve::AffineLine,
                sigma,
                [(CurvePoint::scalar(0), half.clone()), (CurvePoint::scalar(1), half)],
            )
            .unwrap(),
        );
        let res = ml_homogeneous(&a).unwrap();
        assert!(res.ml_hor.is_none());
        assert_eq!(res.ml_h.cone.lineality_dim(), 1);
        assert!(!res.trivial);
    }

    #[test]
    fn kernel_generators_of_a_horizontal_class_are_annihilated() {
        let a = hyperbolic();
        let frame = admissible_frames(&a)
            .unwrap()
            .into_iter()
            .find(|f| f.h().is_zero())
            .unwrap();
        let lnd = crate::lnd_horizontal::find_degree(&a, &frame, 12).unwrap();
        let KernelGenerators::Horizontal(gens) = kernel_generators(
            LndRef::Horizontal {
                algebra: &a,
                frame: &frame,
                lnd: &lnd,
            },
            8,
        )
        .unwrap() else {
            panic!("horizontal kernel expected");
        };
        assert!(!gens.is_empty());
        for g in &gens {
            assert!(lnd.apply(g).unwrap().is_zero());
        }
    }
}
