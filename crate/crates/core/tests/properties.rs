mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use tvar_lnd::input::{InputSpec, SearchOptions};
use tvar_lnd::lnd_fiber::{fiber_classify, s_rho_points, toric_classify};
use tvar_lnd::{Cone, Error, LatticeVector, Rat, RationalVector, Side, TailedPolyhedron};

fn vectors(n: usize, count: std::ops::Range<usize>) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, n), count)
}

fn cone_in(n: usize) -> impl Strategy<Value = Cone> {
    vectors(n, 0..5).prop_map(move |gens| {
        let gens: Vec<LatticeVector> = gens.iter().map(|g| LatticeVector::from_i64(g)).collect();
        Cone::from_generators(Side::N, n, &gens, &[]).unwrap()
    })
}

fn any_cone() -> impl Strategy<Value = Cone> {
    (1usize..=3).prop_flat_map(cone_in)
}

fn pointed_full_cone() -> impl Strategy<Value = Cone> {
    (2usize..=3)
        .prop_flat_map(|n| vectors(n, n..n + 3).prop_map(move |g| (n, g)))
        .prop_filter_map("pointed and full-dimensional", |(n, gens)| {
            let gens: Vec<LatticeVector> = gens.iter().map(|g| LatticeVector::from_i64(g)).collect();
            let c = Cone::from_generators(Side::N, n, &gens, &[]).ok()?;
            (c.is_pointed() && c.is_full_dimensional()).then_some(c)
        })
}

fn seed() -> impl Strategy<Value = u64> {
    any::<u64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rays_satisfy_every_facet(c in any_cone()) {
        for r in c.rays() {
            for f in c.facets() {
                prop_assert!(f.dot(r) >= 0.into());
            }
            for e in c.equations() {
                prop_assert!(e.dot(r) == 0.into());
            }
        }
        let mut sorted = c.rays().to_vec();
        sorted.sort();
        prop_assert_eq!(sorted.as_slice(), c.rays());
        prop_assert_eq!(c.is_pointed(), c.lineality_dim() == 0);
    }

    #[test]
    fn redundant_points_leave_vertices_unchanged(s in seed()) {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let n = random_rank(&mut rng);
        let sigma = random_sigma(&mut rng, n, false);
        let p = random_polyhedron(&mut rng, &sigma, 4);
        let first = &p.vertices()[0];
        let mut extra = p.vertices().to_vec();
        let half = Rat::new(1.into(), 2.into());
        extra.push(first.add(&p.vertices().last().unwrap().sub(first).scale(&half)));
        for r in sigma.rays() {
            extra.push(first.add(&r.to_rational()));
        }
        let q = TailedPolyhedron::new(extra, sigma.clone()).unwrap();
        let mut a = p.vertices().to_vec();
        let mut b = q.vertices().to_vec();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn tail_is_neutral_for_minkowski_sums(s in seed()) {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let n = random_rank(&mut rng);
        let sigma = random_sigma(&mut rng, n, false);
        let p = random_polyhedron(&mut rng, &sigma, 4);
        let sum = tvar_lnd::lattice_polyhedra::minkowski_sum(&p, &TailedPolyhedron::tail_only(sigma)).unwrap();
        prop_assert_eq!(sum, p);
    }

    #[test]
    fn s_rho_is_negative_and_stable_under_the_kernel_face(sigma in pointed_full_cone()) {
        for (rho, s) in toric_classify(&sigma).unwrap() {
            prop_assert!(!s.module_generators.is_empty());
            let mut points = s_rho_points(&s, 2);
            points.extend(s.module_generators.iter().cloned());
            for e in &points {
                prop_assert!(s.contains(e));
                prop_assert!(!sigma.dual().contains(e));
                prop_assert_eq!(e.dot(&rho), (-1).into());
                for t in s.tau.rays() {
                    prop_assert!(s.contains(&e.add(t)));
                }
            }
        }
    }

    #[test]
    fn graded_pieces_satisfy_membership(s in seed()) {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let n = random_rank(&mut rng);
        let a = random_line_algebra(&mut rng, n);
        for m in cone_points(a.weight_cone(), 1) {
            let piece = a.graded_piece(&m, 4).unwrap();
            for x in &piece {
                prop_assert!(a.contains(x.degree(), x.section()).unwrap());
            }
            for (x, y) in piece.iter().zip(piece.iter().rev()) {
                prop_assert!(a.multiply(x, y).is_ok());
            }
        }
    }

    #[test]
    fn fiber_degrees_are_negative(s in seed()) {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let n = random_rank(&mut rng);
        let a = random_line_algebra(&mut rng, n);
        let classes = match fiber_classify(&a, 4) {
            Err(Error::NotFoundWithinBound(_)) => Vec::new(),
            other => other.unwrap(),
        };
        for class in classes {
            let d = &class.representative;
            prop_assert!(!a.weight_cone().contains(d.degree()));
            prop_assert_eq!(d.degree().dot(d.rho()), (-1).into());
        }
    }

    #[test]
    fn input_documents_round_trip(s in seed()) {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let n = random_rank(&mut rng);
        let a = random_line_algebra(&mut rng, n);
        let spec = InputSpec::from_divisor(a.divisor(), SearchOptions::default());
        let text = serde_json::to_string(&spec).unwrap();
        let back: InputSpec = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back.divisor().unwrap(), a.divisor());
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn translation_shifts_support_functions(s in seed(), k in 1i64..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let n = random_rank(&mut rng);
        let sigma = random_sigma(&mut rng, n, false);
        let p = random_polyhedron(&mut rng, &sigma, 4);
        let shift = RationalVector::new(vec![Rat::from_integer(k.into()); n]);
        let h = tvar_lnd::lattice_polyhedra::support_function(&p);
        let g = tvar_lnd::lattice_polyhedra::support_function(&p.translate(&shift));
        for m in cone_points(&sigma.dual(), 2) {
            prop_assert_eq!(g.evaluate(&m).unwrap(), h.evaluate(&m).unwrap() + m.pair(&shift));
        }
    }
}
