//! Report sections as JSON values. Every list is emitted in the order the
//! library returns it, which is canonical.

use std::fmt::Display;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use tvar_lnd::curve_divisors::ProperVerdict;
use tvar_lnd::input::SearchOptions;
use tvar_lnd::lnd_fiber::{
    fiber_classify, phi_e_space, toric_classify, toric_lnd_apply, FiberClass, SRhoDescription, ToricLND,
};
use tvar_lnd::lnd_horizontal::{horizontal_equivalence_classes, HorizontalClass};
use tvar_lnd::ml_invariant::{
    kernel_generators, ml_homogeneous, ml_toric as toric_invariant, ml_trivial, KernelGenerators, LndRef, PieceKind,
    SemigroupAlgebraDescription,
};
use tvar_lnd::rational::{format_rational, parse_rational};
use tvar_lnd::{Cone, Curve, Error, GradedAlgebra, HomogeneousElement, LatticeVector, Rat, Result};

pub enum Verdict {
    Proper,
    Assumed(String),
    NotProper(String),
}

fn strings<T: Display>(items: impl IntoIterator<Item = T>) -> Value {
    Value::Array(items.into_iter().map(|x| json!(x.to_string())).collect())
}

pub fn validation(a: &GradedAlgebra) -> (Value, Verdict) {
    let d = a.divisor();
    let report = d.is_proper();
    let (label, verdict) = match report.verdict {
        ProperVerdict::Proper => ("proper", Verdict::Proper),
        ProperVerdict::NotProper(r) => ("not proper", Verdict::NotProper(r)),
        ProperVerdict::ProperAssumingPrincipality(r) => ("proper assuming principality", Verdict::Assumed(r)),
    };
    let reason = match &verdict {
        Verdict::Proper => Value::Null,
        Verdict::Assumed(r) | Verdict::NotProper(r) => json!(r),
    };
    let section = json!({
        "curve": d.curve().to_string(),
        "rank": d.rank(),
        "sigma": d.sigma().to_string(),
        "divisor": d.to_string(),
        "degree_polyhedron": d.degree_polyhedron().to_string(),
        "type": a.kind().to_string(),
        "verdict": label,
        "reason": reason,
        "zero_locus_rays": strings(&report.zero_locus_rays),
    });
    (section, verdict)
}

pub fn toric_validation(sigma: &Cone) -> Value {
    json!({
        "mode": "toric",
        "rank": sigma.ambient_dim(),
        "sigma": sigma.to_string(),
        "pointed": sigma.is_pointed(),
        "full_dimensional": sigma.is_full_dimensional(),
    })
}

fn s_rho_fields(s: &SRhoDescription) -> Value {
    json!({
        "kernel_face": s.tau.to_string(),
        "other_rays": strings(&s.other_rays),
        "module_generators": strings(&s.module_generators),
    })
}

pub fn toric(sigma: &Cone) -> Result<Value> {
    let classes: Vec<Value> = toric_classify(sigma)?
        .iter()
        .enumerate()
        .map(|(i, (rho, s))| {
            json!({
                "id": format!("F:{i}"),
                "ray": rho.to_string(),
                "admissible_degrees": s_rho_fields(s),
                "representative": format!("χ^{} ∂_{}", s.module_generators[0], rho),
            })
        })
        .collect();
    Ok(json!({
        "dual_rays": strings(sigma.dual().rays()),
        "count": classes.len(),
        "classes": classes,
    }))
}

fn fiber_row(a: &GradedAlgebra, class: &FiberClass, opts: &SearchOptions) -> Result<Value> {
    let lnd = &class.representative;
    let basis = match a.curve() {
        Curve::Abstract { .. } => Value::Null,
        _ => strings(&phi_e_space(a, lnd.rho(), lnd.degree(), opts.degree_bound)?.basis),
    };
    let kernel = match kernel_generators(LndRef::Fiber { algebra: a, lnd }, opts.degree_bound)? {
        KernelGenerators::Fiber(g) => strings(&g),
        other => unreachable!("fiber kernel has the wrong kind: {other:?}"),
    };
    Ok(json!({
        "id": class.id(),
        "ray": lnd.rho().to_string(),
        "admissible_degrees": s_rho_fields(&class.s_rho),
        "degree": lnd.degree().to_string(),
        "formula": format!("∂ = {}", lnd.formula()),
        "d_e": class.d_e.to_string(),
        "twisting_dimension": class.phi_dimension.to_string(),
        "twisting_basis": basis,
        "kernel_generators": kernel,
    }))
}

pub fn fiber(a: &GradedAlgebra, opts: &SearchOptions) -> Result<Value> {
    let classes = fiber_classify(a, opts.search_norm)?;
    let rows = classes
        .iter()
        .map(|c| fiber_row(a, c, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({ "count": rows.len(), "classes": rows }))
}

/// `∂ = λ t^r χ^e (t∂_t + Σ h(μ_i) χ^{μ_i} ∂_{ν_i})` with the values filled in.
fn shape(class: &HorizontalClass) -> String {
    let lnd = &class.representative;
    let n = lnd.degree().dim();
    let mut inner = String::from("t∂_t");
    for (i, c) in lnd.frame().h().coeffs().coords().iter().enumerate() {
        if !c.is_zero() {
            inner.push_str(&format!(" + ({}) χ^{} ∂_ν{}", format_rational(c), LatticeVector::unit(n, i), i + 1));
        }
    }
    format!(
        "∂ = {} t^{} χ^{} ({inner})",
        format_rational(lnd.scale()),
        lnd.exponent(),
        lnd.degree()
    )
}

fn horizontal_row(class: &HorizontalClass) -> Value {
    let frame = &class.frame;
    let lnd = &class.representative;
    let removed = frame.z_inf.as_ref().map_or_else(|| "inf".to_string(), |z| z.to_string());
    json!({
        "id": class.id,
        "cone": frame.omega_dual.to_string(),
        "special_point": frame.z0.to_string(),
        "removed_point": removed,
        "h": frame.h().to_string(),
        "d": frame.d(),
        "lattice": strings(&frame.data.lattice),
        "degree": lnd.degree().to_string(),
        "exponent": lnd.exponent(),
        "shape": shape(class),
        "formula": format!("∂ = {}", lnd.formula()),
        "conditions": strings(&lnd.conditions().outcomes),
        "kernel_degrees": strings(&class.kernel.degrees),
        "kernel_generators": strings(&class.kernel.generators),
    })
}

pub fn horizontal(a: &GradedAlgebra, opts: &SearchOptions) -> Result<Value> {
    let report = horizontal_equivalence_classes(a, opts.search_norm)?;
    let rows: Vec<Value> = report.classes.iter().map(horizontal_row).collect();
    Ok(json!({
        "count": rows.len(),
        "classes": rows,
        "infinite": report.infinite.as_ref().map(|c| c.to_string()),
        "reason": report.reason,
    }))
}

fn description(d: &SemigroupAlgebraDescription) -> Value {
    json!({
        "cone": d.cone.to_string(),
        "lattice": strings(&d.lattice),
        "degrees": strings(&d.degrees),
        "pieces": match d.kind {
            PieceKind::Full => "full",
            PieceKind::Line => "line",
        },
    })
}

pub fn ml(a: &GradedAlgebra) -> Result<Value> {
    let result = ml_homogeneous(a)?;
    let triviality = ml_trivial(a)?;
    Ok(json!({
        "fiber_kernels": description(&result.ml_fib),
        "horizontal_kernels": result.ml_hor.as_ref().map(description),
        "homogeneous": description(&result.ml_h),
        "trivial": result.trivial,
        "branch": triviality.branch(),
        "lattices_agree": result.lattices_agree,
    }))
}

pub fn ml_toric(sigma: &Cone) -> Value {
    let d = toric_invariant(sigma);
    json!({
        "homogeneous": description(&d),
        "trivial": d.is_degree_trivial(),
    })
}

fn trace_value(id: &str, formula: String, steps: &[String], zero_at: Option<usize>) -> Value {
    let lines: Vec<String> = steps
        .iter()
        .enumerate()
        .map(|(k, s)| format!("∂^{k} x = {s}"))
        .collect();
    json!({
        "class": id,
        "formula": formula,
        "trace": lines,
        "zero_at": zero_at,
    })
}

fn iterate<T>(
    start: T,
    limit: usize,
    is_zero: impl Fn(&T) -> bool,
    show: impl Fn(&T) -> String,
    mut step: impl FnMut(&T) -> Result<T>,
) -> Result<(Vec<String>, Option<usize>)> {
    let mut out = Vec::new();
    let mut x = start;
    for k in 0..=limit {
        out.push(show(&x));
        if is_zero(&x) {
            return Ok((out, Some(k)));
        }
        if k < limit {
            x = step(&x)?;
        }
    }
    Ok((out, None))
}

pub fn apply(a: &GradedAlgebra, opts: &SearchOptions, id: &str, element: &str, limit: usize) -> Result<Value> {
    let unknown = || Error::UnknownClass(id.to_string());
    let x = tvar_lnd::parse_element(a, element)?;
    let show = |y: &HomogeneousElement| y.to_string();
    let zero = |y: &HomogeneousElement| y.is_zero();
    if id.starts_with("F:") {
        let class = fiber_classify(a, opts.search_norm)?
            .into_iter()
            .find(|c| c.id() == id)
            .ok_or_else(unknown)?;
        let lnd = class.representative;
        let (steps, at) = iterate(x, limit, zero, show, |y| lnd.apply(a, y))?;
        Ok(trace_value(id, format!("∂ = {}", lnd.formula()), &steps, at))
    } else if id.starts_with("H:") {
        let class = horizontal_equivalence_classes(a, opts.search_norm)?
            .classes
            .into_iter()
            .find(|c| c.id == id)
            .ok_or_else(unknown)?;
        let lnd = class.representative;
        let (steps, at) = iterate(x, limit, zero, show, |y| lnd.apply(y))?;
        Ok(trace_value(id, format!("∂ = {}", lnd.formula()), &steps, at))
    } else {
        Err(unknown())
    }
}

/// `c χ^m` in the semigroup algebra of `σ∨ ∩ M`.
fn parse_monomial(text: &str, rank: usize) -> Result<(Rat, LatticeVector)> {
    let bad = || Error::InvalidInput(format!("element {text:?} is not of the form \"<c> chi^(m)\""));
    let t = text.trim();
    let (coeff, degree) = ["chi^", "χ^"]
        .iter()
        .find_map(|marker| t.find(marker).map(|i| (t[..i].trim(), t[i + marker.len()..].trim())))
        .ok_or_else(bad)?;
    let c = match coeff.trim_end_matches('*').trim() {
        "" => Rat::one(),
        "-" => -Rat::one(),
        s => parse_rational(s)?,
    };
    let coords = degree
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(bad)?
        .split(',')
        .map(|c| c.trim().parse::<i64>().map_err(|_| bad()))
        .collect::<Result<Vec<_>>>()?;
    if coords.len() != rank {
        return Err(Error::DimensionMismatch {
            expected: rank,
            found: coords.len(),
        });
    }
    Ok((c, LatticeVector::from_i64(&coords)))
}

fn show_monomial((c, m): &(Rat, LatticeVector)) -> String {
    if c.is_zero() {
        "0".to_string()
    } else if c.is_one() {
        format!("χ^{m}")
    } else if *c == -Rat::one() {
        format!("-χ^{m}")
    } else {
        format!("{} χ^{m}", format_rational(c))
    }
}

pub fn apply_toric(sigma: &Cone, id: &str, element: &str, limit: usize) -> Result<Value> {
    let rho = id
        .strip_prefix("F:")
        .and_then(|i| i.parse::<usize>().ok())
        .and_then(|i| sigma.rays().get(i))
        .ok_or_else(|| Error::UnknownClass(id.to_string()))?;
    let s = SRhoDescription::new(sigma, rho)?;
    let lnd = ToricLND::new(sigma, rho, s.module_generators[0].clone(), Rat::one())?;
    let x = parse_monomial(element, sigma.ambient_dim())?;
    if !sigma.dual().contains(&x.1) {
        return Err(Error::MembershipViolation(x.1.to_string()));
    }
    let (steps, at) = iterate(
        x,
        limit,
        |(c, _)| c.is_zero(),
        show_monomial,
        |(c, m)| {
            let (k, next) = toric_lnd_apply(sigma, &lnd, m)?;
            Ok((c * k, next))
        },
    )?;
    Ok(trace_value(id, format!("∂ = χ^{} ∂_{}", lnd.e, lnd.rho), &steps, at))
}
