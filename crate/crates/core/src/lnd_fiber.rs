//! Derivations of fiber type: the toric derivations `χ^{e+μ}∂_ν` and their
//! twists `φ ∂_{ρ,e}` by rational functions on the curve.

use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::curve_divisors::{
    section_list, section_satisfies, sections_basis, sections_dim, Curve, DimReport, QDivisor, Section,
    SectionSpace,
};
use crate::error::{Error, Result};
use crate::graded_algebra::{GradedAlgebra, HomogeneousElement};
use crate::lattice_polyhedra::{dual_face, semigroup_generators, support_function, Cone, Side};
use crate::rational::{rat_int, LatticeVector, Rat};

/// The admissible degrees `S_ρ = {e ∈ M : ⟨e,ρ⟩ = −1, ⟨e,ρ'⟩ ≥ 0 for the other rays ρ'}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SRhoDescription {
    pub rho: LatticeVector,
    /// The facet `σ∨ ∩ ρ⊥`.
    pub tau: Cone,
    pub other_rays: Vec<LatticeVector>,
    /// `S_ρ = ⋃ (g + τ_M)` over these.
    pub module_generators: Vec<LatticeVector>,
}

impl SRhoDescription {
    pub fn new(sigma: &Cone, rho: &LatticeVector) -> Result<Self> {
        let tau = dual_face(sigma, rho)?;
        let rho = rho.primitive();
        let other_rays: Vec<LatticeVector> = sigma.rays().iter().filter(|r| **r != rho).cloned().collect();
        let module_generators = module_generators(sigma.ambient_dim(), &rho, &other_rays)?;
        Ok(Self {
            rho,
            tau,
            other_rays,
            module_generators,
        })
    }

    pub fn contains(&self, e: &LatticeVector) -> bool {
        s_rho_membership(self, e)
    }
}

pub fn s_rho_membership(s: &SRhoDescription, e: &LatticeVector) -> bool {
    e.dim() == s.rho.dim()
        && e.dot(&s.rho) == (-1).into()
        && s.other_rays.iter().all(|r| !e.dot(r).is_negative())
}

pub fn s_rho_module_generators(s: &SRhoDescription) -> &[LatticeVector] {
    &s.module_generators
}

/// Height-one generators of `{(x,t) : x ∈ σ₁∨, ⟨x,ρ⟩ = −t, t ≥ 0}`.
fn module_generators(n: usize, rho: &LatticeVector, others: &[LatticeVector]) -> Result<Vec<LatticeVector>> {
    let lift = |v: &LatticeVector, t: i64| {
        let mut c = v.coords().to_vec();
        c.push(t.into());
        LatticeVector::new(c)
    };
    let mut ineqs: Vec<LatticeVector> = others.iter().map(|r| lift(r, 0)).collect();
    ineqs.push(LatticeVector::unit(n + 1, n));
    let eqs = [lift(rho, 1)];
    let cone = Cone::from_inequalities(Side::M, n + 1, &ineqs, &eqs)?;
    let mut out: Vec<LatticeVector> = semigroup_generators(&cone, None)
        .into_iter()
        .filter(|g| g.coords()[n] == 1.into())
        .map(|g| LatticeVector::new(g.coords()[..n].to_vec()))
        .collect();
    out.sort_by(|a, b| a.norm_inf().cmp(&b.norm_inf()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// The ray whose facet is pushed out of `σ∨` by translation along `e`.
pub fn ray_of_degree(sigma: &Cone, e: &LatticeVector) -> Option<LatticeVector> {
    let mut negative = sigma.rays().iter().filter(|r| e.dot(r).is_negative());
    let first = negative.next()?;
    negative.next().is_none().then(|| first.clone())
}

/// `λ χ^{e+μ} ∂_ν` on `𝕂[σ∨_M]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricLND {
    pub rho: LatticeVector,
    pub e: LatticeVector,
    pub scale: Rat,
}

impl ToricLND {
    pub fn new(sigma: &Cone, rho: &LatticeVector, e: LatticeVector, scale: Rat) -> Result<Self> {
        let s = SRhoDescription::new(sigma, rho)?;
        if !s.contains(&e) {
            return Err(Error::NotInSRho(e.to_string()));
        }
        if scale.is_zero() {
            return Err(Error::InvalidInput("scale must be nonzero".into()));
        }
        Ok(Self {
            rho: s.rho,
            e,
            scale,
        })
    }
}

/// `∂(χ^m) = λ⟨m,ρ⟩ χ^{m+e}`.
pub fn toric_lnd_apply(sigma: &Cone, d: &ToricLND, m: &LatticeVector) -> Result<(Rat, LatticeVector)> {
    if !sigma.dual().contains(m) {
        return Err(Error::OutsideWeightCone(m.to_string()));
    }
    Ok((&d.scale * rat_int(&m.dot(&d.rho)), m.add(&d.e)))
}

/// One class per extremal ray.
pub fn toric_classify(sigma: &Cone) -> Result<Vec<(LatticeVector, SRhoDescription)>> {
    sigma
        .rays()
        .par_iter()
        .map(|r| Ok((r.clone(), SRhoDescription::new(sigma, r)?)))
        .collect()
}

/// `D_e = Σ max_r (−g_{r,z}(e)) · z` over the linear pieces `g_{r,z}` of `h_z`.
pub fn d_e_divisor(a: &GradedAlgebra, rho: &LatticeVector, e: &LatticeVector) -> Result<QDivisor> {
    let s = SRhoDescription::new(a.divisor().sigma(), rho)?;
    if !s.contains(e) {
        return Err(Error::NotInSRho(e.to_string()));
    }
    let terms: Vec<_> = a
        .divisor()
        .coefficients()
        .map(|(p, delta)| {
            let best = support_function(delta)
                .pieces()
                .iter()
                .map(|(_, g)| -g.eval(e))
                .max()
                .expect("at least one vertex");
            (p.clone(), best)
        })
        .collect();
    QDivisor::new(a.curve().clone(), terms)
}

/// `⌊−D_e⌋`, whose sections form `Φ_e`.
pub fn phi_e_divisor(a: &GradedAlgebra, rho: &LatticeVector, e: &LatticeVector) -> Result<QDivisor> {
    Ok(d_e_divisor(a, rho, e)?.neg().floor())
}

/// `Φ_e` on the line; empty when the divisor has negative degree on ℙ¹.
pub fn phi_e_space(a: &GradedAlgebra, rho: &LatticeVector, e: &LatticeVector, degree_bound: usize) -> Result<SectionSpace> {
    let d = phi_e_divisor(a, rho, e)?;
    let mut space = sections_basis(&d, degree_bound)?;
    if space.max_degree.map_or(false, |k| k < 0) {
        space.basis.clear();
    }
    Ok(space)
}

pub fn phi_e_dimension(a: &GradedAlgebra, rho: &LatticeVector, e: &LatticeVector) -> Result<DimReport> {
    sections_dim(&phi_e_divisor(a, rho, e)?)
}

/// `φ ∂_{ρ,e}` restricted to `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberLND {
    rho: LatticeVector,
    e: LatticeVector,
    phi: Section,
    tau: Cone,
}

impl FiberLND {
    pub fn new(a: &GradedAlgebra, rho: &LatticeVector, e: LatticeVector, phi: Section) -> Result<Self> {
        let s = SRhoDescription::new(a.divisor().sigma(), rho)?;
        if !s.contains(&e) {
            return Err(Error::NotInSRho(e.to_string()));
        }
        if phi.is_zero() || !section_satisfies(&phi_e_divisor(a, rho, &e)?, &phi)? {
            return Err(Error::MembershipViolation(format!("twisting function {phi}")));
        }
        Ok(Self {
            rho: s.rho,
            e,
            phi,
            tau: s.tau,
        })
    }

    pub fn rho(&self) -> &LatticeVector {
        &self.rho
    }

    pub fn degree(&self) -> &LatticeVector {
        &self.e
    }

    pub fn phi(&self) -> &Section {
        &self.phi
    }

    /// The kernel degrees `τ`.
    pub fn kernel_cone(&self) -> &Cone {
        &self.tau
    }

    /// `∂(f χ^m) = ⟨m,ρ⟩ φ f χ^{m+e}`.
    pub fn apply(&self, a: &GradedAlgebra, x: &HomogeneousElement) -> Result<HomogeneousElement> {
        let target = x.degree().add(&self.e);
        let m0 = x.degree().dot(&self.rho);
        if m0.is_zero() || x.is_zero() {
            return Ok(a.zero_element(target));
        }
        let f = self.phi.mul(x.section())?.scale(&rat_int(&m0));
        a.element(target, f)
    }

    /// `∂ = φ χ^e ∂_ρ` with the twisting function substituted.
    pub fn formula(&self) -> String {
        let phi = self.phi.to_string();
        let lead = if phi == "1" { String::new() } else { format!("({phi}) ") };
        format!("{lead}χ^{} ∂_{}", self.e, self.rho)
    }
}

impl fmt::Display for FiberLND {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.formula())
    }
}

/// Whether some fiber-type derivation has kernel degrees `τ = σ∨ ∩ ρ⊥`.
pub fn fiber_existence(a: &GradedAlgebra, rho: &LatticeVector) -> bool {
    match a.curve() {
        Curve::AffineLine => true,
        _ => !a.divisor().degree_polyhedron().meets_ray(rho),
    }
}

/// Rays carrying a fiber-type class, in the cone's ray order.
pub fn fiber_equivalence_classes(a: &GradedAlgebra) -> Vec<LatticeVector> {
    a.divisor()
        .sigma()
        .rays()
        .iter()
        .filter(|r| fiber_existence(a, r))
        .cloned()
        .collect()
}

/// A class together with a representative derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberClass {
    pub index: usize,
    pub s_rho: SRhoDescription,
    pub representative: FiberLND,
    pub d_e: QDivisor,
    pub phi_dimension: DimReport,
}

impl FiberClass {
    pub fn id(&self) -> String {
        format!("F:{}", self.index)
    }
}

/// Elements `g + t` of `S_ρ` with `t ∈ τ_M`, ordered by norm, up to `norm`.
pub fn s_rho_points(s: &SRhoDescription, norm: i64) -> Vec<LatticeVector> {
    let taus = semigroup_generators(&s.tau, None);
    let mut seen: std::collections::BTreeSet<LatticeVector> = std::collections::BTreeSet::new();
    let mut frontier: Vec<LatticeVector> = s.module_generators.clone();
    let small = |v: &LatticeVector| v.norm_inf() <= norm.into();
    while let Some(v) = frontier.pop() {
        if !small(&v) || !seen.insert(v.clone()) {
            continue;
        }
        for t in &taus {
            frontier.push(v.add(t));
        }
    }
    let mut out: Vec<LatticeVector> = seen.into_iter().collect();
    out.sort_by(|a, b| a.norm_inf().cmp(&b.norm_inf()).then_with(|| a.cmp(b)));
    out
}

/// The class for `ρ` with a representative of smallest-norm degree whose
/// twisting space is nonempty.
pub fn fiber_class(a: &GradedAlgebra, index: usize, rho: &LatticeVector, search_norm: i64) -> Result<FiberClass> {
    let s = SRhoDescription::new(a.divisor().sigma(), rho)?;
    for e in s_rho_points(&s, search_norm) {
        let d = phi_e_divisor(a, rho, &e)?;
        let nonempty = match a.curve() {
            Curve::AffineLine => true,
            Curve::ProjectiveLine => !d.degree().is_negative(),
            Curve::Abstract { .. } => matches!(sections_dim(&d)?, DimReport::Finite(k) if k > 0),
        };
        if !nonempty {
            continue;
        }
        let phi = section_list(&d, 0)?
            .into_iter()
            .next()
            .ok_or(Error::NotFoundWithinBound(search_norm))?;
        let representative = FiberLND::new(a, rho, e.clone(), phi)?;
        return Ok(FiberClass {
            index,
            d_e: d_e_divisor(a, rho, &e)?,
            phi_dimension: sections_dim(&d)?,
            s_rho: s,
            representative,
        });
    }
    Err(Error::NotFoundWithinBound(search_norm))
}

/// All fiber classes, indexed by the position of the ray in `σ`.
pub fn fiber_classify(a: &GradedAlgebra, search_norm: i64) -> Result<Vec<FiberClass>> {
    let rays = a.divisor().sigma().rays().to_vec();
    rays.par_iter()
        .enumerate()
        .filter(|(_, r)| fiber_existence(a, r))
        .map(|(i, r)| fiber_class(a, i, r, search_norm))
        .collect()
}

/// Steps after which `∂ⁿ(x) = 0` is guaranteed: `⟨deg x, ρ⟩ + 1`.
pub fn nilpotency_bound(rho: &LatticeVector, m: &LatticeVector) -> usize {
    m.dot(rho).to_usize().unwrap_or(0) + 1
}
