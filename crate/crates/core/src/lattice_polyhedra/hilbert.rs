//! Hilbert bases of cone semigroups, via fundamental parallelepipeds of a
//! pulling triangulation.

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Cone, Side};
use crate::error::{Error, Result};
use crate::linalg::{self, int_dot, primitive_int, to_rat_row, IntRow};
use crate::rational::{Int, LatticeVector, LinearForm, Rat};

/// Simplicial cones (as index sets into `rays`) covering `cone(rays)`.
fn triangulate(rays: &[IntRow], subset: &[usize], dim: usize, ambient: usize) -> Vec<Vec<usize>> {
    if subset.len() == dim {
        return vec![subset.to_vec()];
    }
    let gens: Vec<LatticeVector> = subset.iter().map(|&i| LatticeVector::new(rays[i].clone())).collect();
    let cone = Cone::from_generators(Side::M, ambient, &gens, &[]).expect("consistent dimensions");
    let apex = subset[0];
    let mut out = Vec::new();
    for f in cone.facets() {
        if int_dot(f.coords(), &rays[apex]).is_zero() {
            continue;
        }
        let facet: Vec<usize> = subset
            .iter()
            .copied()
            .filter(|&i| int_dot(f.coords(), &rays[i]).is_zero())
            .collect();
        for mut simplex in triangulate(rays, &facet, dim - 1, ambient) {
            simplex.insert(0, apex);
            out.push(simplex);
        }
    }
    out
}

fn small(x: &Int) -> i128 {
    x.to_i128().expect("coordinates fit in 128 bits")
}

/// Nonzero lattice points `Σ λᵢ gᵢ` with `λᵢ ∈ [0,1)`, for a basis `g` of ℚᵏ.
fn parallelepiped_points(gens: &[IntRow], k: usize) -> Vec<Vec<i128>> {
    let hnf = linalg::hnf_basis(gens, k);
    let diag: Vec<i128> = (0..k).map(|i| small(&hnf[i][i])).collect();
    let det: i128 = diag.iter().product();
    let transpose: Vec<Vec<Rat>> = (0..k)
        .map(|i| gens.iter().map(|g| Rat::from_integer(g[i].clone())).collect())
        .collect();
    // det · G⁻¹ is integral; row j gives det · λ_j
    let columns: Vec<Vec<i128>> = (0..k)
        .map(|i| {
            let unit: Vec<Rat> = (0..k).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect();
            linalg::solve(&transpose, &unit, k)
                .expect("basis is invertible")
                .iter()
                .map(|x| small(&(x * Rat::from_integer(det.into())).to_integer()))
                .collect()
        })
        .collect();
    let g: Vec<Vec<i128>> = gens.iter().map(|r| r.iter().map(small).collect()).collect();
    let mut out = Vec::new();
    let mut rep = vec![0i128; k];
    loop {
        let frac: Vec<i128> = (0..k)
            .map(|j| (0..k).map(|i| columns[i][j] * rep[i]).sum::<i128>().rem_euclid(det))
            .collect();
        let point: Vec<i128> = (0..k)
            .map(|i| g.iter().zip(&frac).map(|(gj, f)| gj[i] * f).sum::<i128>() / det)
            .collect();
        if point.iter().any(|x| *x != 0) {
            out.push(point);
        }
        // odometer over 0 ≤ rep_i < diag_i
        let mut i = 0;
        loop {
            if i == k {
                return out;
            }
            rep[i] += 1;
            if rep[i] < diag[i] {
                break;
            }
            rep[i] = 0;
            i += 1;
        }
    }
}

/// Hilbert basis of a pointed cone given by generators in ℤⁿ.
fn pointed_hilbert(rays: &[IntRow], n: usize) -> Vec<IntRow> {
    if rays.is_empty() {
        return Vec::new();
    }
    // coordinates in a basis of span ∩ ℤⁿ
    let basis = linalg::saturated_basis(rays, n);
    let k = basis.len();
    let local: Vec<IntRow> = rays
        .iter()
        .map(|r| {
            linalg::coordinates(&basis, &to_rat_row(r))
                .expect("ray lies in its span")
                .iter()
                .map(Rat::to_integer)
                .collect()
        })
        .collect();
    let local_gens: Vec<LatticeVector> = local.iter().cloned().map(LatticeVector::new).collect();
    let cone = Cone::from_generators(Side::M, k, &local_gens, &[]).expect("consistent dimensions");
    let extreme: Vec<IntRow> = cone.rays().iter().map(|r| r.coords().to_vec()).collect();
    let all: Vec<usize> = (0..extreme.len()).collect();

    let mut candidates: Vec<Vec<i128>> = extreme.iter().map(|r| r.iter().map(small).collect()).collect();
    for simplex in triangulate(&extreme, &all, k, k) {
        let gens: Vec<IntRow> = simplex.iter().map(|&i| extreme[i].clone()).collect();
        candidates.extend(parallelepiped_points(&gens, k));
    }
    let facets: Vec<Vec<i128>> = cone.facets().iter().map(|f| f.coords().iter().map(small).collect()).collect();
    let eval = |f: &[i128], x: &[i128]| f.iter().zip(x).map(|(a, b)| a * b).sum::<i128>();
    let height = |x: &[i128]| facets.iter().map(|f| eval(f, x)).sum::<i128>();
    candidates.sort_by_key(|x| (height(x), x.clone()));
    candidates.dedup();

    // x is reducible iff x − y lies in the cone for a lower irreducible y
    let mut irreducible: Vec<Vec<i128>> = Vec::new();
    for x in candidates {
        let reducible = irreducible.iter().any(|y| {
            let diff: Vec<i128> = x.iter().zip(y).map(|(a, b)| a - b).collect();
            facets.iter().all(|f| eval(f, &diff) >= 0)
        });
        if !reducible {
            irreducible.push(x);
        }
    }
    irreducible
        .into_iter()
        .map(|c| {
            (0..n)
                .map(|i| basis.iter().zip(&c).map(|(b, x)| &b[i] * Int::from(*x)).sum())
                .collect()
        })
        .collect()
}

/// Minimal generating set of the semigroup `c ∩ ℤⁿ` of a pointed cone.
pub fn hilbert_basis(c: &Cone) -> Result<Vec<LatticeVector>> {
    if !c.is_pointed() {
        return Err(Error::NotPointed);
    }
    let rays: Vec<IntRow> = c.rays().iter().map(|r| r.coords().to_vec()).collect();
    let mut out: Vec<LatticeVector> = pointed_hilbert(&rays, c.ambient_dim())
        .into_iter()
        .map(LatticeVector::new)
        .collect();
    out.sort();
    Ok(out)
}

/// Generators of the monoid `c ∩ lattice`, where `lattice` is given by a
/// basis whose span contains `c`. A non-pointed cone contributes `±` a basis
/// of its lineality lattice plus lifts of the pointed quotient.
pub fn semigroup_generators(c: &Cone, lattice: Option<&[LatticeVector]>) -> Vec<LatticeVector> {
    let n = c.ambient_dim();
    let standard: Vec<LatticeVector> = (0..n).map(|i| LatticeVector::unit(n, i)).collect();
    let lattice = lattice.unwrap_or(&standard);
    let basis: Vec<IntRow> = lattice.iter().map(|b| b.coords().to_vec()).collect();
    let r = basis.len();
    let to_local = |v: &LatticeVector| -> LatticeVector {
        let q = linalg::coordinates(&basis, &v.to_rational().coords().to_vec())
            .expect("cone lies in the span of the lattice");
        LatticeVector::new(primitive_int(&q))
    };
    let rays: Vec<LatticeVector> = c.rays().iter().map(to_local).collect();
    let lin: Vec<LatticeVector> = c.lineality_basis().iter().map(to_local).collect();
    let local = Cone::from_generators(Side::M, r, &rays, &lin).expect("consistent dimensions");

    let mut gens: Vec<IntRow> = Vec::new();
    let w: Vec<IntRow> = local
        .lineality_basis()
        .iter()
        .map(|v| v.coords().to_vec())
        .collect();
    if w.is_empty() {
        let rays: Vec<IntRow> = local.rays().iter().map(|v| v.coords().to_vec()).collect();
        gens = pointed_hilbert(&rays, r);
    } else {
        for v in &w {
            gens.push(v.clone());
            gens.push(v.iter().map(|x| -x).collect());
        }
        let proj = linalg::integer_kernel(&w, r);
        let q = proj.len();
        if q > 0 {
            let image: Vec<IntRow> = local
                .rays()
                .iter()
                .map(|v| proj.iter().map(|a| int_dot(a, v.coords())).collect())
                .collect();
            let lifts = linalg::integer_preimages(&proj, r).expect("saturated lineality");
            for y in pointed_hilbert(&image, q) {
                gens.push(
                    (0..r)
                        .map(|i| y.iter().zip(&lifts).map(|(c, x)| c * &x[i]).sum())
                        .collect(),
                );
            }
        }
    }
    let mut out: Vec<LatticeVector> = gens
        .iter()
        .map(|g| {
            LatticeVector::new(
                (0..n)
                    .map(|i| basis.iter().zip(g).map(|(b, x)| &b[i] * x).sum())
                    .collect(),
            )
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Basis of the sublattice `{m ∈ ℤⁿ : form(m) ∈ ℤ}`.
pub fn integral_sublattice(form: &LinearForm) -> Vec<LatticeVector> {
    let n = form.coeffs().dim();
    let d = form.denominator();
    let scaled: Vec<Int> = form
        .coeffs()
        .coords()
        .iter()
        .map(|c| (c * Rat::from_integer(d.clone())).to_integer())
        .collect();
    // (m, k) with scaled·m − d·k = 0
    let mut row = scaled;
    row.push(-d);
    let ker = linalg::integer_kernel(&[row], n + 1);
    let projected: Vec<IntRow> = ker.iter().map(|v| v[..n].to_vec()).collect();
    linalg::hnf_basis(&projected, n)
        .into_iter()
        .map(LatticeVector::new)
        .collect()
}

/// Index of a full-rank sublattice.
pub fn sublattice_index(basis: &[LatticeVector]) -> Int {
    let rows: Vec<IntRow> = basis.iter().map(|b| b.coords().to_vec()).collect();
    linalg::abs_det(&rows)
}

/// Whether `x` lies in the lattice spanned by `basis`.
pub fn in_lattice(basis: &[LatticeVector], x: &LatticeVector) -> bool {
    let rows: Vec<IntRow> = basis.iter().map(|b| b.coords().to_vec()).collect();
    linalg::coordinates(&rows, x.to_rational().coords())
        .map_or(false, |c| c.iter().all(Rat::is_integer))
}

/// Whether `x` is a nonnegative integer combination of `gens`, searched
/// breadth-first inside the box `|coords| ≤ bound`.
pub fn in_monoid(gens: &[LatticeVector], x: &LatticeVector, bound: i64) -> bool {
    use std::collections::{HashSet, VecDeque};
    let n = x.dim();
    let fits = |v: &LatticeVector| v.coords().iter().all(|c| c.abs() <= Int::from(bound));
    let mut seen: HashSet<LatticeVector> = HashSet::new();
    let mut queue = VecDeque::from([LatticeVector::zero(n)]);
    seen.insert(LatticeVector::zero(n));
    while let Some(v) = queue.pop_front() {
        if &v == x {
            return true;
        }
        for g in gens {
            let w = v.add(g);
            if fits(&w) && seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::RationalVector;

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(c)
    }

    #[test]
    fn smooth_cone_basis() {
        let c = Cone::generated_by(Side::M, &[&[1, 0], &[0, 1]]).unwrap();
        assert_eq!(hilbert_basis(&c).unwrap(), vec![lv(&[0, 1]), lv(&[1, 0])]);
    }

    #[test]
    fn narrow_cone_matches_enumeration() {
        let c = Cone::generated_by(Side::M, &[&[1, 0], &[1, 2]]).unwrap();
        let hb = hilbert_basis(&c).unwrap();
        assert_eq!(hb, vec![lv(&[1, 0]), lv(&[1, 1]), lv(&[1, 2])]);
        // oracle: irreducible lattice points with coordinates ≤ 4
        let pts: Vec<LatticeVector> = (0..=4)
            .flat_map(|a| (0..=4).map(move |b| lv(&[a, b])))
            .filter(|p| !p.is_zero() && c.contains(p))
            .collect();
        let irreducible: Vec<LatticeVector> = pts
            .iter()
            .filter(|p| !pts.iter().any(|q| q != *p && c.contains(&p.sub(q)) && !p.sub(q).is_zero()))
            .cloned()
            .collect();
        assert_eq!(hb, irreducible);
    }

    #[test]
    fn quadric_dual_basis_is_its_rays() {
        let sigma =
            Cone::generated_by(Side::N, &[&[1, 0, 0], &[0, 1, 0], &[1, 0, 1], &[0, 1, 1]]).unwrap();
        let hb = hilbert_basis(&sigma.dual()).unwrap();
        let mut expected = vec![lv(&[1, 0, 0]), lv(&[0, 1, 0]), lv(&[0, 0, 1]), lv(&[1, 1, -1])];
        expected.sort();
        assert_eq!(hb, expected);
    }

    #[test]
    fn non_pointed_cone_is_rejected() {
        let h = Cone::from_inequalities(Side::M, 2, &[lv(&[0, 1])], &[]).unwrap();
        assert_eq!(hilbert_basis(&h), Err(Error::NotPointed));
        let gens = semigroup_generators(&h, None);
        assert_eq!(gens, vec![lv(&[-1, 0]), lv(&[0, 1]), lv(&[1, 0])]);
    }

    #[test]
    fn lower_dimensional_cone() {
        let c = Cone::generated_by(Side::M, &[&[1, 0, 0], &[1, 2, 2]]).unwrap();
        let hb = hilbert_basis(&c).unwrap();
        assert_eq!(hb, vec![lv(&[1, 0, 0]), lv(&[1, 1, 1]), lv(&[1, 2, 2])]);
    }

    #[test]
    fn generators_in_a_sublattice() {
        let form = LinearForm::new(RationalVector::from_ratios(&[(-1, 4), (-1, 1)]));
        let lattice = integral_sublattice(&form);
        assert_eq!(sublattice_index(&lattice), Int::from(4));
        assert!(in_lattice(&lattice, &lv(&[4, 0])));
        assert!(!in_lattice(&lattice, &lv(&[2, 0])));
        let c = Cone::generated_by(Side::M, &[&[1, 0], &[-4, 1]]).unwrap();
        let gens = semigroup_generators(&c, Some(&lattice));
        assert_eq!(gens, vec![lv(&[-4, 1]), lv(&[4, 0])]);
    }

    #[test]
    fn monoid_membership_by_search() {
        let gens = vec![lv(&[1, 0]), lv(&[1, 2])];
        assert!(in_monoid(&gens, &lv(&[2, 2]), 5));
        assert!(!in_monoid(&gens, &lv(&[1, 1]), 5));
    }
}
