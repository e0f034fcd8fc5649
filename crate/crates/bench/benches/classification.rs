use criterion::{black_box, criterion_group, criterion_main, Criterion};

use tvar_lnd::lnd_fiber::{fiber_classify, toric_classify};
use tvar_lnd::lnd_horizontal::horizontal_equivalence_classes;
use tvar_lnd::ml_invariant::ml_homogeneous;
use tvar_lnd::{Cone, Curve, CurvePoint, GradedAlgebra, PolyhedralDivisor, Rat, RationalVector, Side, TailedPolyhedron};

fn point(coords: &[(i64, i64)]) -> RationalVector {
    RationalVector::new(coords.iter().map(|&(n, d)| Rat::new(n.into(), d.into())).collect())
}

fn hyperbolic() -> GradedAlgebra {
    let sigma = Cone::origin(Side::N, 2);
    let at_zero = TailedPolyhedron::new(
        vec![point(&[(0, 1), (0, 1)]), point(&[(0, 1), (1, 1)]), point(&[(-1, 4), (-1, 1)])],
        sigma.clone(),
    )
    .unwrap();
    let at_one = TailedPolyhedron::new(vec![point(&[(0, 1), (0, 1)]), point(&[(0, 1), (1, 1)])], sigma.clone()).unwrap();
    let d = PolyhedralDivisor::new(
        Curve::AffineLine,
        sigma,
        [(CurvePoint::scalar(0), at_zero), (CurvePoint::scalar(1), at_one)],
    )
    .unwrap();
    GradedAlgebra::new(d)
}

fn genus_one() -> GradedAlgebra {
    let sigma = Cone::generated_by(Side::N, &[&[1, 0], &[0, 1]]).unwrap();
    let delta = TailedPolyhedron::translate_of_tail(point(&[(1, 1), (1, 1)]), sigma.clone()).unwrap();
    let curve = Curve::Abstract {
        genus: 1,
        points: vec!["P".into()],
    };
    GradedAlgebra::new(PolyhedralDivisor::new(curve, sigma, [(CurvePoint::Label("P".into()), delta)]).unwrap())
}

fn classification(c: &mut Criterion) {
    let hyp = hyperbolic();
    let ell = genus_one();
    let quadric = Cone::generated_by(Side::N, &[&[1, 0, 0], &[0, 1, 0], &[1, 0, 1], &[0, 1, 1]]).unwrap();

    c.bench_function("toric quadric", |b| b.iter(|| toric_classify(black_box(&quadric)).unwrap()));
    c.bench_function("fiber genus one", |b| b.iter(|| fiber_classify(black_box(&ell), 24).unwrap()));
    c.bench_function("horizontal hyperbolic", |b| {
        b.iter(|| horizontal_equivalence_classes(black_box(&hyp), 24).unwrap())
    });
    c.bench_function("ml hyperbolic", |b| b.iter(|| ml_homogeneous(black_box(&hyp)).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = classification
}
criterion_main!(benches);
