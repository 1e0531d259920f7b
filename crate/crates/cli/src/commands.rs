//! One-shot computations on a JSON fixture.

use std::sync::Arc;

use quadnorm_core::json::{
    algebra_from_json, descent_from_json, descent_to_json, elem_from_json, elem_to_json,
    hom_pair_from_json, quad_from_json, quad_to_json, ring_from_json,
};
use quadnorm_core::{
    glue_norm, norm_hom, norm_quad, Elem, Error, Extension, FreeRankNAlgebra, QuadHom, Ring,
};
use serde_json::{json, Value};

use crate::CliError;

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value, CliError> {
    v.get(name).ok_or_else(|| Error::Parse(format!("missing field `{name}`")).into())
}

fn algebra(v: &Value) -> Result<Arc<FreeRankNAlgebra>, CliError> {
    Ok(Arc::new(algebra_from_json(field(v, "algebra")?)?))
}

fn extension(v: &Value) -> Result<Extension, CliError> {
    Ok(Extension::from_arc(algebra(field(v, "extension")?)?))
}

fn coords(alg: &FreeRankNAlgebra, v: &Value) -> Result<Vec<Elem>, CliError> {
    let ring = Ring::algebra(Arc::new(alg.clone()));
    match elem_from_json(&ring, v)? {
        Elem::Coords(c) => Ok(c),
        _ => unreachable!("algebra ring elements are coordinates"),
    }
}

/// The ring a fixture works over: `"base"` or the ring of `"extension"`.
fn working_ring(v: &Value) -> Result<Ring, CliError> {
    match (v.get("base"), v.get("extension")) {
        (Some(b), _) => Ok(ring_from_json(b)?),
        (None, Some(_)) => Ok(extension(v)?.ring().clone()),
        (None, None) => Err(Error::Parse("fixture needs `base` or `extension`".into()).into()),
    }
}

/// `{"extension": {"algebra"}, "quad": {"t", "n"}}`.
pub fn norm_quad_cmd(v: &Value) -> Result<Value, CliError> {
    let ext = extension(v)?;
    let q = quad_from_json(Some(ext.ring()), field(v, "quad")?)?;
    Ok(quad_to_json(&norm_quad(&ext, &q)?))
}

/// `{"extension", "source", "target", "u", "c"}`.
pub fn norm_hom_cmd(v: &Value) -> Result<Value, CliError> {
    let ext = extension(v)?;
    let b = ext.ring();
    let source = quad_from_json(Some(b), field(v, "source")?)?;
    let target = quad_from_json(Some(b), field(v, "target")?)?;
    let (u, c) = hom_pair_from_json(b, v)?;
    let f = QuadHom::new(&source, &target, u, c)?;
    let g = norm_hom(&ext, &f)?;
    let a = ext.base();
    Ok(json!({
        "source": quad_to_json(g.source()),
        "target": quad_to_json(g.target()),
        "u": elem_to_json(a, g.u()),
        "c": elem_to_json(a, g.c()),
    }))
}

/// `{"base", "left": {"t", "n"}, "right": {"t", "n"}}`.
pub fn star_cmd(v: &Value) -> Result<Value, CliError> {
    let r = working_ring(v)?;
    let p = quad_from_json(Some(&r), field(v, "left")?)?;
    let q = quad_from_json(Some(&r), field(v, "right")?)?;
    Ok(quad_to_json(&p.star(&q)?))
}

/// `{"base", "quad"}`; with an `"extension"` the norm of the discriminant is
/// reported as well.
pub fn disc_cmd(v: &Value) -> Result<Value, CliError> {
    let r = working_ring(v)?;
    let q = quad_from_json(Some(&r), field(v, "quad")?)?;
    let d = q.discriminant();
    let mut out = json!({"disc": elem_to_json(&r, &d)});
    if v.get("base").is_none() {
        let ext = extension(v)?;
        let Elem::Coords(c) = &d else { unreachable!("extension ring elements are coordinates") };
        out["norm_disc"] = elem_to_json(ext.base(), &ext.algebra().norm(c));
    }
    Ok(out)
}

/// `{"base", "algebra", "descent": {"cover", "witnesses", "locals", "transitions"}}`.
pub fn glue_norm_cmd(v: &Value) -> Result<Value, CliError> {
    let base = ring_from_json(field(v, "base")?)?;
    let alg = algebra(v)?;
    let d = descent_from_json(&base, Some(&alg), field(v, "descent")?)?;
    Ok(descent_to_json(&glue_norm(&d)?))
}

/// `{"algebra", "element"}`: coefficients by ascending power.
pub fn char_poly_cmd(v: &Value) -> Result<Value, CliError> {
    let alg = algebra(v)?;
    let x = coords(&alg, field(v, "element")?)?;
    let cp = alg.char_poly_coeffs(&x)?;
    Ok(json!({"coefficients": cp.iter().map(|c| elem_to_json(alg.base(), c)).collect::<Vec<_>>()}))
}

/// `{"algebra", "element"}` for `s_n`, or `{"algebra", "parts": [{"k", "element"}]}`
/// for a polarized form.
pub fn sn_cmd(v: &Value) -> Result<Value, CliError> {
    let alg = algebra(v)?;
    let value = match v.get("parts") {
        Some(parts) => {
            let parts = parts
                .as_array()
                .ok_or_else(|| Error::Parse("`parts` must be a list".into()))?
                .iter()
                .map(|p| {
                    let k = field(p, "k")?
                        .as_u64()
                        .ok_or_else(|| Error::Parse("`k` must be a non-negative integer".into()))?;
                    Ok((k as usize, coords(&alg, field(p, "element")?)?))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            let refs: Vec<(usize, &[Elem])> = parts.iter().map(|(k, x)| (*k, x.as_slice())).collect();
            alg.polarized(&refs)?
        }
        None => alg.norm(&coords(&alg, field(v, "element")?)?),
    };
    Ok(json!({"value": elem_to_json(alg.base(), &value)}))
}
