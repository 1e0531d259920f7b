//! JSON encodings of rings, elements, algebras, quadratic data and descent data.
//!
//! Numbers are written as decimal strings; on input both JSON numbers and
//! decimal strings are accepted.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::algebra::FreeRankNAlgebra;
use crate::descent::{Cover, Layer, LineDescentDatum, QuadDescentDatum};
use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly};
use crate::quadratic::{BasedQuadratic, QuadHom};
use crate::ring::{make_frac, Elem, Ring, RingKind};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value> {
    v.get(name).ok_or_else(|| parse_err(format!("missing field `{name}`")))
}

pub fn parse_bigint(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| parse_err(format!("{n} is not an integer"))),
        Value::String(s) => {
            s.trim().parse().map_err(|_| parse_err(format!("`{s}` is not an integer")))
        }
        other => Err(parse_err(format!("expected an integer, found {other}"))),
    }
}

fn parse_usize(v: &Value) -> Result<usize> {
    let b = parse_bigint(v)?;
    usize::try_from(b).map_err(|_| parse_err("expected a non-negative index"))
}

fn int_str(b: &BigInt) -> Value {
    Value::String(b.to_string())
}

// ---- rings ---------------------------------------------------------------

pub fn ring_to_json(r: &Ring) -> Value {
    match r.kind() {
        RingKind::Integers => json!({"kind": "integers"}),
        RingKind::Modular(m) => json!({"kind": "modular", "modulus": int_str(m)}),
        RingKind::Polynomial { base, vars } => {
            json!({"kind": "polynomial", "base": ring_to_json(base), "variables": vars})
        }
        RingKind::Product(fs) => {
            json!({"kind": "product", "factors": fs.iter().map(ring_to_json).collect::<Vec<_>>()})
        }
        RingKind::Fractions { radical } => json!({
            "kind": "localized",
            "base": {"kind": "integers"},
            "inverted": int_str(radical),
        }),
        RingKind::Idempotent { base, idempotent } => json!({
            "kind": "localized",
            "base": ring_to_json(base),
            "inverted": elem_to_json(base, idempotent),
        }),
        RingKind::Algebra(a) => json!({"kind": "algebra", "algebra": algebra_to_json(a)}),
    }
}

pub fn ring_from_json(v: &Value) -> Result<Ring> {
    let kind = field(v, "kind")?.as_str().ok_or_else(|| parse_err("`kind` must be a string"))?;
    match kind {
        "integers" => Ok(Ring::integers()),
        "modular" => {
            let m = parse_bigint(field(v, "modulus")?)?;
            Ring::modular(m).map_err(|e| parse_err(e.to_string()))
        }
        "polynomial" => {
            let base = ring_from_json(field(v, "base")?)?;
            let vars = field(v, "variables")?
                .as_array()
                .ok_or_else(|| parse_err("`variables` must be a list"))?
                .iter()
                .map(|x| x.as_str().map(str::to_string).ok_or_else(|| parse_err("variable names are strings")))
                .collect::<Result<Vec<_>>>()?;
            let refs: Vec<&str> = vars.iter().map(String::as_str).collect();
            base.adjoin_variables(&refs)
        }
        "product" => {
            let fs = field(v, "factors")?
                .as_array()
                .ok_or_else(|| parse_err("`factors` must be a list"))?
                .iter()
                .map(ring_from_json)
                .collect::<Result<Vec<_>>>()?;
            Ring::product(fs)
        }
        "localized" => {
            let base = ring_from_json(field(v, "base")?)?;
            let a = elem_from_json(&base, field(v, "inverted")?)?;
            Ok(base.localize(&a)?.0)
        }
        "algebra" => Ok(Ring::algebra(Arc::new(algebra_from_json(field(v, "algebra")?)?))),
        other => Err(parse_err(format!("unknown ring kind `{other}`"))),
    }
}

// ---- elements --------------------------------------------------------------

pub fn elem_to_json(r: &Ring, x: &Elem) -> Value {
    match (r.kind(), x) {
        (RingKind::Fractions { radical }, Elem::Frac { num, exp }) => {
            if *exp == 0 {
                int_str(num)
            } else {
                json!({"num": int_str(num), "den_base": int_str(radical), "den_exp": exp.to_string()})
            }
        }
        (_, Elem::Int(v)) => int_str(v),
        (RingKind::Polynomial { base, .. }, Elem::Poly(p)) => Value::Array(
            p.terms()
                .map(|(m, c)| json!({"coeff": elem_to_json(base, c), "exps": m.0}))
                .collect(),
        ),
        (RingKind::Product(fs), Elem::Tuple(v)) => {
            Value::Array(fs.iter().zip(v).map(|(f, a)| elem_to_json(f, a)).collect())
        }
        (RingKind::Idempotent { base, .. }, _) => elem_to_json(base, x),
        (RingKind::Algebra(a), Elem::Coords(v)) => {
            Value::Array(v.iter().map(|c| elem_to_json(a.base(), c)).collect())
        }
        _ => panic!("element {x:?} does not belong to {r}"),
    }
}

/// Parses an element of `r`. Scalars are accepted wherever the ring has a
/// canonical image of the integers.
pub fn elem_from_json(r: &Ring, v: &Value) -> Result<Elem> {
    let x = match (r.kind(), v) {
        (_, Value::Number(_) | Value::String(_)) => r.from_bigint(&parse_bigint(v)?),
        (RingKind::Fractions { radical }, Value::Object(_)) => {
            let num = parse_bigint(field(v, "num")?)?;
            let d = parse_bigint(field(v, "den_base")?)?;
            let k = u32::try_from(parse_usize(field(v, "den_exp")?)?)
                .map_err(|_| parse_err("`den_exp` is too large"))?;
            fraction_in(radical, num, &d, k)?
        }
        (RingKind::Polynomial { base, vars }, Value::Array(terms)) => {
            let mut out = Vec::with_capacity(terms.len());
            for t in terms {
                let c = elem_from_json(base, field(t, "coeff")?)?;
                let exps = field(t, "exps")?
                    .as_array()
                    .ok_or_else(|| parse_err("`exps` must be a list"))?
                    .iter()
                    .map(|e| parse_usize(e).map(|e| e as u32))
                    .collect::<Result<Vec<_>>>()?;
                if exps.len() != vars.len() {
                    return Err(parse_err(format!(
                        "{} exponents for {} variables",
                        exps.len(),
                        vars.len()
                    )));
                }
                out.push((Monomial(exps), c));
            }
            Elem::Poly(Poly::from_terms(base, out))
        }
        (RingKind::Product(fs), Value::Array(items)) => {
            if items.len() != fs.len() {
                return Err(parse_err(format!(
                    "{} components for {} factors",
                    items.len(),
                    fs.len()
                )));
            }
            Elem::Tuple(fs.iter().zip(items).map(|(f, a)| elem_from_json(f, a)).collect::<Result<_>>()?)
        }
        (RingKind::Idempotent { base, idempotent }, _) => {
            base.mul(idempotent, &elem_from_json(base, v)?)
        }
        (RingKind::Algebra(a), Value::Array(items)) => {
            if items.len() != a.rank() {
                return Err(parse_err(format!(
                    "{} coordinates for rank {}",
                    items.len(),
                    a.rank()
                )));
            }
            Elem::Coords(items.iter().map(|c| elem_from_json(a.base(), c)).collect::<Result<_>>()?)
        }
        _ => return Err(parse_err(format!("cannot read {v} as an element of {r}"))),
    };
    r.check(&x).map_err(|_| parse_err(format!("{v} is not an element of {r}")))?;
    Ok(x)
}

/// `num / d^k` in `Z[1/radical]`.
fn fraction_in(radical: &BigInt, num: BigInt, d: &BigInt, k: u32) -> Result<Elem> {
    if d.is_zero() {
        return Err(parse_err("zero denominator"));
    }
    let dk = d.pow(k);
    // smallest e with d^k | radical^e
    let mut e = 0u32;
    let mut re = BigInt::one();
    while !re.is_multiple_of(&dk) {
        e += 1;
        re *= radical;
        if e > 64 * (k + 1) {
            return Err(parse_err(format!("{d} is not invertible in Z[1/{radical}]")));
        }
    }
    Ok(make_frac(num * (re / dk), e, radical))
}

// ---- algebras --------------------------------------------------------------

pub fn algebra_to_json(a: &FreeRankNAlgebra) -> Value {
    let n = a.rank();
    let base = a.base();
    let structure: Vec<Vec<Vec<Value>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| elem_to_json(base, a.structure_constant(i, j, k))).collect())
                .collect()
        })
        .collect();
    json!({
        "base": ring_to_json(base),
        "rank": n,
        "structure": structure,
        "unit": a.unit().iter().map(|u| elem_to_json(base, u)).collect::<Vec<_>>(),
    })
}

pub fn algebra_from_json(v: &Value) -> Result<FreeRankNAlgebra> {
    let base = ring_from_json(field(v, "base")?)?;
    let rank = parse_usize(field(v, "rank")?)?;
    let list = |x: &Value, what: &str| -> Result<Vec<Value>> {
        x.as_array().cloned().ok_or_else(|| parse_err(format!("`{what}` must be a list")))
    };
    let structure = list(field(v, "structure")?, "structure")?
        .iter()
        .map(|row| {
            list(row, "structure")?
                .iter()
                .map(|col| {
                    list(col, "structure")?
                        .iter()
                        .map(|c| elem_from_json(&base, c))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let unit = list(field(v, "unit")?, "unit")?
        .iter()
        .map(|c| elem_from_json(&base, c))
        .collect::<Result<Vec<_>>>()?;
    if unit.len() != rank {
        return Err(parse_err(format!("unit has {} coordinates for rank {rank}", unit.len())));
    }
    FreeRankNAlgebra::new(&base, structure, unit)
}

// ---- quadratic data ----------------------------------------------------------

pub fn quad_to_json(q: &BasedQuadratic) -> Value {
    json!({"t": elem_to_json(q.base(), q.t()), "n": elem_to_json(q.base(), q.n())})
}

pub fn quad_with_base_to_json(q: &BasedQuadratic) -> Value {
    json!({
        "base": ring_to_json(q.base()),
        "t": elem_to_json(q.base(), q.t()),
        "n": elem_to_json(q.base(), q.n()),
    })
}

/// Reads `{"t", "n"}` over `base`, or over the quad's own `"base"` when present.
pub fn quad_from_json(base: Option<&Ring>, v: &Value) -> Result<BasedQuadratic> {
    let own = match v.get("base") {
        Some(b) => Some(ring_from_json(b)?),
        None => None,
    };
    let ring = match (own.as_ref(), base) {
        (Some(r), Some(b)) if r != b => {
            return Err(parse_err(format!("quad is over {r}, expected {b}")))
        }
        (Some(r), _) => r,
        (None, Some(b)) => b,
        (None, None) => return Err(parse_err("quad has no base ring")),
    };
    BasedQuadratic::new(
        ring,
        elem_from_json(ring, field(v, "t")?)?,
        elem_from_json(ring, field(v, "n")?)?,
    )
}

pub fn hom_to_json(f: &QuadHom) -> Value {
    json!({"u": elem_to_json(f.base(), f.u()), "c": elem_to_json(f.base(), f.c())})
}

/// Reads `(u, c)` over `base`.
pub fn hom_pair_from_json(base: &Ring, v: &Value) -> Result<(Elem, Elem)> {
    Ok((elem_from_json(base, field(v, "u")?)?, elem_from_json(base, field(v, "c")?)?))
}

// ---- descent data ------------------------------------------------------------

pub fn descent_to_json(d: &QuadDescentDatum) -> Value {
    let layer = d.layer();
    let cover = layer.cover();
    let base = cover.base();
    let mut obj = Map::new();
    obj.insert(
        "cover".into(),
        Value::Array(cover.elements().iter().map(|a| elem_to_json(base, a)).collect()),
    );
    obj.insert(
        "witnesses".into(),
        Value::Array(cover.witnesses().iter().map(|a| elem_to_json(base, a)).collect()),
    );
    obj.insert("locals".into(), Value::Array(d.locals().iter().map(quad_to_json).collect()));
    obj.insert(
        "transitions".into(),
        Value::Array(
            d.transitions()
                .map(|((i, j), f)| {
                    let r = layer.overlap(i, j);
                    json!({"i": i, "j": j, "u": elem_to_json(r, f.u()), "c": elem_to_json(r, f.c())})
                })
                .collect(),
        ),
    );
    Value::Object(obj)
}

pub fn line_descent_to_json(d: &LineDescentDatum) -> Value {
    let layer = d.layer();
    json!({
        "transitions": d
            .transitions()
            .map(|((i, j), u)| json!({"i": i, "j": j, "u": elem_to_json(layer.overlap(i, j), u)}))
            .collect::<Vec<_>>(),
    })
}

/// Reads a descent datum over `base`, with locals over the localizations of
/// `algebra` when given and of `base` otherwise.
pub fn descent_from_json(
    base: &Ring,
    algebra: Option<&Arc<FreeRankNAlgebra>>,
    v: &Value,
) -> Result<QuadDescentDatum> {
    let arr = |name: &str| -> Result<Vec<Value>> {
        field(v, name)?.as_array().cloned().ok_or_else(|| parse_err(format!("`{name}` must be a list")))
    };
    let elements = arr("cover")?.iter().map(|a| elem_from_json(base, a)).collect::<Result<Vec<_>>>()?;
    let witnesses =
        arr("witnesses")?.iter().map(|a| elem_from_json(base, a)).collect::<Result<Vec<_>>>()?;
    let cover = Arc::new(Cover::new(base, elements, witnesses)?);
    let layer = match algebra {
        Some(a) => Layer::extension(&cover, a)?,
        None => Layer::base(&cover),
    };
    let locals_json = arr("locals")?;
    if locals_json.len() != layer.len() {
        return Err(parse_err(format!(
            "{} locals for {} cover elements",
            locals_json.len(),
            layer.len()
        )));
    }
    let locals = locals_json
        .iter()
        .enumerate()
        .map(|(i, q)| {
            let r = layer.piece(i);
            Ok((elem_from_json(r, field(q, "t")?)?, elem_from_json(r, field(q, "n")?)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut transitions = Vec::new();
    for t in arr("transitions")? {
        let i = parse_usize(field(&t, "i")?)?;
        let j = parse_usize(field(&t, "j")?)?;
        if i >= layer.len() || j >= layer.len() {
            return Err(parse_err(format!("transition ({i},{j}) names a missing piece")));
        }
        let r = layer.overlap(i, j);
        let u = elem_from_json(r, field(&t, "u")?)?;
        let c = elem_from_json(r, field(&t, "c")?)?;
        transitions.push((i, j, u, c));
    }
    QuadDescentDatum::new(&layer, locals, transitions)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip(r: &Ring, x: &Elem) {
        let v = elem_to_json(r, x);
        assert_eq!(&elem_from_json(r, &v).unwrap(), x, "{v}");
    }

    #[test]
    fn rings_roundtrip() {
        let z = Ring::integers();
        let rings = vec![
            z.clone(),
            Ring::modular(12).unwrap(),
            Ring::modular(1).unwrap(),
            Ring::fractions(6).unwrap(),
            Ring::modular(7).unwrap().adjoin_variables(&["x", "y"]).unwrap(),
            Ring::product(vec![Ring::modular(5).unwrap(), z.clone()]).unwrap(),
            Ring::algebra(Arc::new(FreeRankNAlgebra::split(&z, 2).unwrap())),
        ];
        for r in rings {
            assert_eq!(ring_from_json(&ring_to_json(&r)).unwrap(), r);
        }
    }

    #[test]
    fn elements_roundtrip() {
        let z6 = Ring::fractions(6).unwrap();
        roundtrip(&z6, &make_frac(BigInt::from(5), 2, &BigInt::from(6)));
        roundtrip(&z6, &z6.from_i64(-3));
        let p = Ring::modular(7).unwrap().adjoin_variables(&["x"]).unwrap();
        let x = p.variable("x").unwrap();
        roundtrip(&p, &p.add(&p.mul(&x, &x), &p.from_i64(3)));
        let prod = Ring::product(vec![Ring::modular(5).unwrap(), Ring::integers()]).unwrap();
        roundtrip(&prod, &Elem::Tuple(vec![Elem::Int(4.into()), Elem::Int((-9).into())]));
    }

    #[test]
    fn fraction_inputs_normalize() {
        let z6 = Ring::fractions(6).unwrap();
        // 1/2 = 3/6
        let half = elem_from_json(&z6, &json!({"num": 1, "den_base": 2, "den_exp": 1})).unwrap();
        assert_eq!(half, make_frac(BigInt::from(3), 1, &BigInt::from(6)));
        assert!(elem_from_json(&z6, &json!({"num": 1, "den_base": 5, "den_exp": 1})).is_err());
        assert_eq!(elem_from_json(&Ring::modular(12).unwrap(), &json!("-5")).unwrap(), Elem::Int(7.into()));
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(ring_from_json(&json!({"kind": "field"})), Err(Error::Parse(_))));
        assert!(matches!(ring_from_json(&json!({})), Err(Error::Parse(_))));
        let r = Ring::modular(5).unwrap();
        assert!(matches!(elem_from_json(&r, &json!([1, 2])), Err(Error::Parse(_))));
        assert!(matches!(quad_from_json(Some(&r), &json!({"t": 1})), Err(Error::Parse(_))));
    }

    #[test]
    fn algebra_roundtrip() {
        let r = Ring::modular(9).unwrap();
        let a = FreeRankNAlgebra::monogenic(&r, &[r.from_i64(3), r.from_i64(1), r.zero()]).unwrap();
        assert_eq!(algebra_from_json(&algebra_to_json(&a)).unwrap(), a);
    }

    #[test]
    fn descent_roundtrip() {
        let z = Ring::integers();
        let cover =
            Arc::new(Cover::generated_by(&z, vec![z.from_i64(2), z.from_i64(3)]).unwrap());
        let layer = Layer::base(&cover);
        let q = BasedQuadratic::new(&z, z.from_i64(1), z.from_i64(-2)).unwrap();
        let (p0, p1) = (layer.piece(0).clone(), layer.piece(1).clone());
        let (d, _) = QuadDescentDatum::from_global(
            &layer,
            &q,
            &[(p0.from_i64(-1), p0.from_i64(3)), (p1.one(), p1.from_i64(1))],
        )
        .unwrap();
        let v = descent_to_json(&d);
        assert_eq!(descent_from_json(&z, None, &v).unwrap(), d);
    }
}
