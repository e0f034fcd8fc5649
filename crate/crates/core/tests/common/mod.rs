//! Fixtures, random generators and brute-force oracles shared by the
//! integration tests.

#![allow(dead_code)]

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use tvar_lnd::curve_divisors::{ProperVerdict, RatFn};
use tvar_lnd::lnd_fiber::{fiber_classify, FiberLND};
use tvar_lnd::ml_invariant::{kernel_generators, KernelGenerators, LndRef};
use tvar_lnd::lnd_horizontal::{admissible_frames, find_degree, Condition, HorizontalFrame, HorizontalLND};
use tvar_lnd::{
    Cone, Curve, CurvePoint, GradedAlgebra, HomogeneousElement, LatticeVector, PolyhedralDivisor, Rat,
    RationalVector, Section, Side, TailedPolyhedron,
};

pub fn lv(c: &[i64]) -> LatticeVector {
    LatticeVector::from_i64(c)
}

pub fn rv(c: &[(i64, i64)]) -> RationalVector {
    RationalVector::from_ratios(c)
}

pub fn q(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

pub fn quadric_sigma() -> Cone {
    Cone::generated_by(Side::N, &[&[1, 0, 0], &[0, 1, 0], &[1, 0, 1], &[0, 1, 1]]).unwrap()
}

/// Rank 2, `σ = {0}`, two coefficients on the affine line.
pub fn hyperbolic_threefold() -> GradedAlgebra {
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

/// `(1,1) + σ` at the point at infinity of a genus-one curve, `σ` the positive quadrant.
pub fn elliptic_threefold() -> GradedAlgebra {
    let sigma = Cone::generated_by(Side::N, &[&[1, 0], &[0, 1]]).unwrap();
    let delta = TailedPolyhedron::translate_of_tail(rv(&[(1, 1), (1, 1)]), sigma.clone()).unwrap();
    let curve = Curve::Abstract {
        genus: 1,
        points: vec!["P".into()],
    };
    GradedAlgebra::new(PolyhedralDivisor::new(curve, sigma, [(CurvePoint::Label("P".into()), delta)]).unwrap())
}

/// `𝕂[x,y]` graded by `deg x = 1`, `deg y = −1`.
pub fn plane_opposite_weights() -> GradedAlgebra {
    let sigma = Cone::origin(Side::N, 1);
    let seg = TailedPolyhedron::new(vec![rv(&[(0, 1)]), rv(&[(1, 1)])], sigma.clone()).unwrap();
    GradedAlgebra::new(PolyhedralDivisor::new(Curve::AffineLine, sigma, [(CurvePoint::scalar(0), seg)]).unwrap())
}

/// `𝕂[x,y]` graded by `deg x = deg y = 1`.
pub fn plane_equal_weights() -> GradedAlgebra {
    let sigma = Cone::generated_by(Side::N, &[&[1]]).unwrap();
    let ray = TailedPolyhedron::translate_of_tail(rv(&[(1, 1)]), sigma.clone()).unwrap();
    GradedAlgebra::new(PolyhedralDivisor::new(Curve::ProjectiveLine, sigma, [(CurvePoint::scalar(0), ray)]).unwrap())
}

fn random_rational(rng: &mut ChaCha8Rng, max_den: i64, spread: i64) -> Rat {
    let den = rng.gen_range(1..=max_den);
    q(rng.gen_range(-spread * den..=spread * den), den)
}

pub fn random_polyhedron(rng: &mut ChaCha8Rng, sigma: &Cone, max_den: i64) -> TailedPolyhedron {
    let n = sigma.ambient_dim();
    let count = rng.gen_range(1..=if n == 1 { 2 } else { 3 });
    let verts = (0..count)
        .map(|_| RationalVector::new((0..n).map(|_| random_rational(rng, max_den, 1)).collect()))
        .collect();
    TailedPolyhedron::new(verts, sigma.clone()).unwrap()
}

pub fn random_sigma(rng: &mut ChaCha8Rng, n: usize, projective: bool) -> Cone {
    let pool: Vec<Vec<Vec<i64>>> = match (n, projective) {
        (1, false) => vec![vec![], vec![vec![1]]],
        (1, true) => vec![vec![vec![1]]],
        (2, false) => vec![vec![], vec![vec![1, 0], vec![0, 1]], vec![vec![1, 0], vec![1, 2]], vec![vec![1, 0]]],
        (2, true) => vec![vec![vec![1, 0], vec![0, 1]], vec![vec![1, 0], vec![1, 2]], vec![vec![1, 0], vec![-1, 2]]],
        (_, false) => vec![vec![], vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], vec![vec![1, 0, 0], vec![0, 1, 0]]],
        (_, true) => vec![vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]],
    };
    let rays: Vec<LatticeVector> = pool.choose(rng).unwrap().iter().map(|r| lv(r)).collect();
    Cone::from_generators(Side::N, n, &rays, &[]).unwrap()
}

/// A random rank in `1..=3`, with rank 3 drawn less often.
pub fn random_rank(rng: &mut ChaCha8Rng) -> usize {
    *[1, 1, 2, 2, 2, 3].choose(rng).unwrap()
}

/// A random proper divisor on the affine or projective line with
/// denominators at most 4. The coefficient at 0 carries the fractional
/// data; the others are integral most of the time.
pub fn random_line_algebra(rng: &mut ChaCha8Rng, n: usize) -> GradedAlgebra {
    loop {
        let projective = rng.gen_bool(0.3);
        let sigma = random_sigma(rng, n, projective);
        let mut coeffs = vec![(CurvePoint::scalar(0), random_polyhedron(rng, &sigma, 4))];
        for z in 1..=rng.gen_range(1..=2) {
            let den = if rng.gen_bool(0.75) { 1 } else { 4 };
            coeffs.push((CurvePoint::scalar(z), random_polyhedron(rng, &sigma, den)));
        }
        if !projective {
            return GradedAlgebra::new(PolyhedralDivisor::new(Curve::AffineLine, sigma, coeffs).unwrap());
        }
        // pull the degree polyhedron into σ: translate ∞ by minus the sum of first vertices plus an interior point
        let mut shift = RationalVector::zero(n);
        for (_, p) in &coeffs {
            shift = shift.sub(&p.vertices()[0]);
        }
        for r in sigma.rays() {
            shift = shift.add(&r.to_rational().scale(&q(rng.gen_range(1..=3), 1)));
        }
        coeffs.push((CurvePoint::Infinity, TailedPolyhedron::translate_of_tail(shift, sigma.clone()).unwrap()));
        let d = PolyhedralDivisor::new(Curve::ProjectiveLine, sigma, coeffs).unwrap();
        if d.is_proper().verdict == ProperVerdict::Proper {
            return GradedAlgebra::new(d);
        }
    }
}

/// Integer data of a support function at a point: vertex numerators over a common denominator.
struct ScaledVertices {
    den: i128,
    verts: Vec<Vec<i128>>,
}

impl ScaledVertices {
    fn of(a: &GradedAlgebra, p: &CurvePoint) -> Self {
        let poly = a.divisor().coefficient(p);
        let mut den = 1i128;
        for v in poly.vertices() {
            for c in v.coords() {
                den = den.lcm(&c.denom().to_i128().unwrap());
            }
        }
        let verts = poly
            .vertices()
            .iter()
            .map(|v| {
                v.coords()
                    .iter()
                    .map(|c| (c * Rat::from_integer(den.into())).to_integer().to_i128().unwrap())
                    .collect()
            })
            .collect();
        Self { den, verts }
    }

    /// `den · min_v ⟨m, v⟩`, valid for `m` in the weight cone.
    fn scaled(&self, m: &[i64]) -> i128 {
        if self.verts.is_empty() {
            return 0;
        }
        self.verts
            .iter()
            .map(|v| v.iter().zip(m).map(|(a, b)| a * *b as i128).sum::<i128>())
            .min()
            .unwrap()
    }

    /// `⌊k · h(m)⌋`.
    fn floor_times(&self, k: i128, m: &[i64]) -> i128 {
        Integer::div_floor(&(k * self.scaled(m)), &self.den)
    }
}

fn all_points(n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut pts: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..n {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                (-bound..=bound).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    pts
}

/// Decides every floor condition of a normalized frame by scanning all `m`
/// in the weight cone with `|m_i| ≤ bound` and `m + e` in the weight cone.
/// The result follows the order: finite nonzero support points, the
/// center, then infinity on the projective line.
pub fn brute_force_conditions(
    a: &GradedAlgebra,
    f: &HorizontalFrame,
    e: &LatticeVector,
    bound: i64,
) -> Vec<(Condition, bool)> {
    let n = a.rank();
    let e: Vec<i64> = e.to_i64_vec().unwrap();
    let facets: Vec<Vec<i64>> = a.weight_cone().facets().iter().map(|r| r.to_i64_vec().unwrap()).collect();
    let eqs: Vec<Vec<i64>> = a.weight_cone().equations().iter().map(|r| r.to_i64_vec().unwrap()).collect();
    let dot = |u: &[i64], v: &[i64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<i64>();
    let inside = |m: &[i64]| facets.iter().all(|r| dot(r, m) >= 0) && eqs.iter().all(|r| dot(r, m) == 0);

    let d = f.d() as i128;
    let hden = f.h().denominator().to_i128().unwrap();
    let hnum: Vec<i128> = f
        .h()
        .coeffs()
        .coords()
        .iter()
        .map(|c| (c * Rat::from_integer(hden.into())).to_integer().to_i128().unwrap())
        .collect();
    let h_scaled = |m: &[i64]| hnum.iter().zip(m).map(|(a, b)| a * *b as i128).sum::<i128>();
    // d·h(e) is an integer since d·h is integral
    let dh_e = d * h_scaled(&e) / hden;

    let mut checks: Vec<(Condition, Box<dyn Fn(&[i64], &[i64]) -> bool>)> = Vec::new();
    for p in a.divisor().support() {
        if let CurvePoint::Scalar(z) = &p {
            if !z.is_zero() {
                let s = ScaledVertices::of(a, &p);
                checks.push((
                    Condition::AwayFromCenter(p.clone()),
                    Box::new(move |m, me| s.scaled(me) == 0 || s.floor_times(1, me) - s.floor_times(1, m) >= 1),
                ));
            }
        }
    }
    let s0 = ScaledVertices::of(a, &CurvePoint::scalar(0));
    let h_scaled_c = h_scaled;
    checks.push((
        Condition::AtCenter,
        Box::new(move |m, me| {
            // h_0(m+e) = h(m+e) compared over the common denominator
            let same = s0.scaled(me) * hden == h_scaled_c(me) * s0.den;
            same || s0.floor_times(d, me) - s0.floor_times(d, m) >= 1 + dh_e
        }),
    ));
    if *a.curve() == Curve::ProjectiveLine {
        let sinf = ScaledVertices::of(a, &CurvePoint::Infinity);
        checks.push((
            Condition::AtInfinity,
            Box::new(move |m, me| sinf.floor_times(d, me) - sinf.floor_times(d, m) >= -1 - dh_e),
        ));
    }

    let mut holds = vec![true; checks.len()];
    for m in all_points(n, bound) {
        if !inside(&m) {
            continue;
        }
        let me: Vec<i64> = m.iter().zip(&e).map(|(a, b)| a + b).collect();
        if !inside(&me) {
            continue;
        }
        for (i, (_, ok)) in checks.iter().enumerate() {
            if holds[i] && !ok(&m, &me) {
                holds[i] = false;
            }
        }
    }
    checks.into_iter().map(|(c, _)| c).zip(holds).collect()
}

/// Every lattice point of the cone with `|m_i| ≤ bound`.
pub fn cone_points(cone: &Cone, bound: i64) -> Vec<LatticeVector> {
    all_points(cone.ambient_dim(), bound)
        .into_iter()
        .map(|p| lv(&p))
        .filter(|p| cone.contains(p))
        .collect()
}

/// Whether `x` is a nonnegative integer combination of `gens`, by dynamic
/// search over partial sums bounded coordinatewise by `bound`.
pub fn in_monoid_bounded(gens: &[LatticeVector], x: &LatticeVector, bound: i64) -> bool {
    let n = x.dim();
    let mut seen = std::collections::HashSet::new();
    let mut stack = vec![LatticeVector::zero(n)];
    let limit = num_bigint::BigInt::from(bound);
    while let Some(v) = stack.pop() {
        if &v == x {
            return true;
        }
        if v.norm_inf() > limit || !seen.insert(v.clone()) {
            continue;
        }
        for g in gens {
            if !g.is_zero() {
                stack.push(v.add(g));
            }
        }
    }
    false
}

/// A derivation built for a test algebra.
pub enum Built {
    Fiber(FiberLND),
    Horizontal(HorizontalLND, HorizontalFrame),
}

impl Built {
    pub fn kernel(&self, a: &GradedAlgebra) -> tvar_lnd::Result<Vec<HomogeneousElement>> {
        let generators = match self {
            Built::Fiber(d) => kernel_generators(LndRef::Fiber { algebra: a, lnd: d }, 3)?,
            Built::Horizontal(d, f) => kernel_generators(
                LndRef::Horizontal {
                    algebra: a,
                    frame: f,
                    lnd: d,
                },
                3,
            )?,
        };
        Ok(match generators {
            KernelGenerators::Fiber(g) | KernelGenerators::Horizontal(g) => g,
            KernelGenerators::Toric(_) => unreachable!("toric generators are degrees"),
        })
    }

    pub fn apply(&self, a: &GradedAlgebra, x: &HomogeneousElement) -> tvar_lnd::Result<HomogeneousElement> {
        match self {
            Built::Fiber(d) => d.apply(a, x),
            Built::Horizontal(d, _) => d.apply(x),
        }
    }

    /// The first pair `(i, j)`, `i ≤ j`, whose product the derivation does
    /// not kill. Horizontal products are formed and differentiated in
    /// normalized coordinates.
    pub fn surviving_product(&self, a: &GradedAlgebra, gens: &[HomogeneousElement]) -> tvar_lnd::Result<Option<(usize, usize)>> {
        let (algebra, elements) = match self {
            Built::Fiber(_) => (a, gens.to_vec()),
            Built::Horizontal(d, _) => {
                let b = d.normalized_algebra();
                let moved = gens
                    .iter()
                    .map(|z| {
                        let f = d.witness().forward(z.degree(), rational_section(z));
                        b.element(z.degree().clone(), Section::Rational(f))
                    })
                    .collect::<tvar_lnd::Result<Vec<_>>>()?;
                (b, moved)
            }
        };
        for (i, x) in elements.iter().enumerate() {
            for (j, y) in elements.iter().enumerate().skip(i) {
                let product = algebra.multiply(x, y)?;
                let image = match self {
                    Built::Fiber(d) => d.apply(algebra, &product)?,
                    Built::Horizontal(d, _) => d.apply_normalized(&product)?,
                };
                if !image.is_zero() {
                    return Ok(Some((i, j)));
                }
            }
        }
        Ok(None)
    }

    /// Applications until `x` vanishes, stopping after `limit`. Horizontal
    /// derivations are iterated in normalized coordinates.
    pub fn steps_to_zero(&self, a: &GradedAlgebra, x: &HomogeneousElement, limit: usize) -> tvar_lnd::Result<usize> {
        let (mut z, step): (HomogeneousElement, Box<dyn Fn(&HomogeneousElement) -> tvar_lnd::Result<HomogeneousElement>>) =
            match self {
                Built::Fiber(d) => (x.clone(), Box::new(move |y| d.apply(a, y))),
                Built::Horizontal(d, _) => {
                    let f = d.witness().forward(x.degree(), rational_section(x));
                    let z = d.normalized_algebra().element(x.degree().clone(), Section::Rational(f))?;
                    (z, Box::new(move |y| d.apply_normalized(y)))
                }
            };
        let mut steps = 0;
        while !z.is_zero() && steps <= limit {
            z = step(&z)?;
            steps += 1;
        }
        Ok(steps)
    }

    /// Steps after which `x` is guaranteed to vanish. Fiber type lowers
    /// `⟨m,ρ⟩` by one per step. Horizontal type lowers `deg_t f + h(m)`
    /// by `1/d` per step in normalized coordinates and kills the part where
    /// it reaches zero.
    pub fn step_bound(&self, x: &HomogeneousElement) -> usize {
        match self {
            Built::Fiber(d) => x.degree().dot(d.rho()).to_usize().unwrap_or(0) + 1,
            Built::Horizontal(d, _) => {
                let m = x.degree();
                let f = d.witness().forward(m, x.section().as_rational().unwrap());
                if f.is_zero() {
                    return 0;
                }
                let top = f.num().degree().unwrap() as i64 - f.den().degree().unwrap() as i64;
                let w = Rat::from_integer(top.into()) + d.frame().h().eval(m);
                let steps = (w * Rat::from_integer(d.frame().d().into())).floor().to_integer();
                steps.to_usize().unwrap_or(0) + 1
            }
        }
    }
}

/// Fiber representatives and, per frame, the smallest horizontal degree.
pub fn built_derivations(a: &GradedAlgebra, rng: &mut ChaCha8Rng) -> Vec<Built> {
    let mut out = Vec::new();
    if let Ok(fibers) = fiber_classify(a, 6) {
        out.extend(fibers.into_iter().map(|c| Built::Fiber(c.representative)));
    }
    if a.curve().is_rational_line() {
        for f in admissible_frames(a).unwrap_or_default() {
            if let Ok(d) = find_degree(a, &f, 4) {
                let lambda = q(rng.gen_range(1..=3), rng.gen_range(1..=2));
                let scaled = tvar_lnd::lnd_horizontal::build_lnd(a, &f, d.degree().clone(), lambda).unwrap();
                out.push(Built::Horizontal(scaled, f));
            }
        }
    }
    out
}

/// A random nonzero element of a random small degree, or `None` if the
/// drawn piece is zero.
pub fn random_element(a: &GradedAlgebra, rng: &mut ChaCha8Rng, norm: i64) -> Option<HomogeneousElement> {
    let pts = cone_points(a.weight_cone(), norm);
    let m = pts.choose(rng)?.clone();
    let basis = a.graded_piece(&m, 3).ok()?;
    if basis.is_empty() {
        return None;
    }
    let mut x = a.zero_element(m);
    for b in basis.choose_multiple(rng, 2) {
        let c = q(rng.gen_range(-3..=3), 1);
        x = a.add(&x, &b.scale(&c)).ok()?;
    }
    (!x.is_zero()).then_some(x)
}

pub fn rational_section(x: &HomogeneousElement) -> &RatFn {
    match x.section() {
        Section::Rational(f) => f,
        Section::Weierstrass(_) => panic!("expected a rational section"),
    }
}

/// Rank of a family of rational functions over `ℚ`: clear a common
/// denominator and eliminate on the numerator coefficients.
pub fn function_rank(fs: &[RatFn]) -> usize {
    use tvar_lnd::curve_divisors::Poly;
    let mut common = Poly::one();
    for f in fs {
        let g = common.gcd(f.den());
        common = common.mul(&f.den().divrem(&g).0);
    }
    let mut rows: Vec<Vec<Rat>> = fs
        .iter()
        .map(|f| f.num().mul(&common.divrem(f.den()).0).coeffs().to_vec())
        .collect();
    let width = rows.iter().map(Vec::len).max().unwrap_or(0);
    for r in &mut rows {
        r.resize(width, Rat::zero());
    }
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        for i in 0..rows.len() {
            if i != rank && !rows[i][col].is_zero() {
                let k = &rows[i][col] / &pivot;
                for j in col..width {
                    let delta = &k * &rows[rank][j];
                    rows[i][j] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}
