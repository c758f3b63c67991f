//! JSON forms of lattices, `F_p`-modules and diagrams.
//!
//! Matrices are lists of rows. Integers that do not fit in an `i64` are
//! written as decimal strings; either form is accepted on input.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::butler::Diagram;
use crate::error::{Error, Result};
use crate::fp_modules::FpModule;
use crate::glattice::GLattice;
use crate::group::{block_indices, BlockIndex, GroupSpec};
use crate::linalg::{FpMatrix, Subspace};
use crate::IntMatrix;

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn int_value(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn parse_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            n.as_i64().map(BigInt::from).ok_or_else(|| perr(format!("{n} is not an integer in range")))
        }
        Value::String(s) => BigInt::from_str(s.trim()).map_err(|_| perr(format!("{s:?} is not a decimal integer"))),
        other => Err(perr(format!("expected an integer, got {other}"))),
    }
}

fn int_rows(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(int_value).collect())).collect())
}

fn fp_rows(m: &FpMatrix) -> Value {
    json!(m.to_rows())
}

fn parse_rows(v: &Value, cols: usize, what: &str) -> Result<Vec<Vec<BigInt>>> {
    let rows = v.as_array().ok_or_else(|| perr(format!("{what}: expected a list of rows")))?;
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            let r = r.as_array().ok_or_else(|| perr(format!("{what}: row {i} is not a list")))?;
            if r.len() != cols {
                return Err(perr(format!("{what}: row {i} has {} entries, expected {cols}", r.len())));
            }
            r.iter().map(parse_int).collect()
        })
        .collect()
}

fn parse_square(v: &Value, n: usize, what: &str) -> Result<IntMatrix> {
    let rows = parse_rows(v, n, what)?;
    if rows.len() != n {
        return Err(perr(format!("{what}: {} rows, expected {n}", rows.len())));
    }
    IntMatrix::from_rows(rows, n)
}

fn to_fp(p: u64, rows: &[Vec<BigInt>], cols: usize) -> FpMatrix {
    let pb = BigInt::from(p);
    let rows: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    let m = ((x % &pb) + &pb) % &pb;
                    m.to_u64().expect("reduced mod p")
                })
                .collect()
        })
        .collect();
    FpMatrix::from_row_vecs(p, &rows, cols)
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| perr(format!("missing field {key:?}")))
}

fn as_usize(v: &Value, key: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| perr(format!("{key:?} must be a non-negative integer")))
}

fn object(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object().ok_or_else(|| perr("expected a JSON object"))
}

/// Group from `p`, an optional `rank_k` and either `generators` or the keys
/// of `actions`.
fn group_of(obj: &Map<String, Value>) -> Result<GroupSpec> {
    let p = field(obj, "p")?.as_u64().ok_or_else(|| perr("\"p\" must be a positive integer"))?;
    let actions = object(field(obj, "actions")?)?;
    let names: Vec<String> = match obj.get("generators") {
        Some(v) => v
            .as_array()
            .ok_or_else(|| perr("\"generators\" must be a list"))?
            .iter()
            .map(|s| s.as_str().map(String::from).ok_or_else(|| perr("generator names must be strings")))
            .collect::<Result<_>>()?,
        None => actions.keys().cloned().collect(),
    };
    if let Some(k) = obj.get("rank_k") {
        let k = as_usize(k, "rank_k")?;
        if k != names.len() {
            return Err(perr(format!("rank_k is {k} but {} generators are named", names.len())));
        }
    }
    if actions.len() != names.len() || names.iter().any(|n| !actions.contains_key(n)) {
        return Err(perr("\"actions\" must have exactly one matrix per generator"));
    }
    GroupSpec::new(p, names).map_err(|e| perr(e.to_string()))
}

pub fn lattice_to_json(lat: &GLattice) -> Value {
    let g = lat.group();
    let mut actions = Map::new();
    for (n, a) in g.names().iter().zip(lat.actions()) {
        actions.insert(n.clone(), int_rows(a));
    }
    json!({
        "p": g.p(),
        "rank_k": g.rank(),
        "generators": g.names(),
        "dim": lat.rank(),
        "actions": actions,
    })
}

/// Parses a lattice; shape errors are `Parse`, group relations are not checked.
pub fn lattice_from_json(v: &Value) -> Result<GLattice> {
    let obj = object(v)?;
    let g = group_of(obj)?;
    let dim = as_usize(field(obj, "dim")?, "dim")?;
    let actions = object(field(obj, "actions")?)?;
    let mats = g
        .names()
        .iter()
        .map(|n| parse_square(&actions[n], dim, &format!("action of {n}")))
        .collect::<Result<Vec<_>>>()?;
    GLattice::new(g, dim, mats)
}

pub fn module_to_json(m: &FpModule) -> Value {
    let g = m.group();
    let mut actions = Map::new();
    for (n, a) in g.names().iter().zip(m.actions()) {
        actions.insert(n.clone(), fp_rows(a));
    }
    json!({ "p": g.p(), "rank_k": g.rank(), "dim": m.dim(), "actions": actions })
}

pub fn module_from_json(v: &Value) -> Result<FpModule> {
    let obj = object(v)?;
    let g = group_of(obj)?;
    let dim = as_usize(field(obj, "dim")?, "dim")?;
    let actions = object(field(obj, "actions")?)?;
    let p = g.p();
    let mats = g
        .names()
        .iter()
        .map(|n| {
            let what = format!("action of {n}");
            let rows = parse_rows(&actions[n], dim, &what)?;
            if rows.len() != dim {
                return Err(perr(format!("{what}: {} rows, expected {dim}", rows.len())));
            }
            Ok(to_fp(p, &rows, dim))
        })
        .collect::<Result<Vec<_>>>()?;
    FpModule::new(g, dim, mats)
}

pub fn diagram_to_json(d: &Diagram) -> Value {
    let g = d.group();
    let mut actions = Map::new();
    for (n, a) in g.names().iter().zip(d.module().actions()) {
        actions.insert(n.clone(), fp_rows(a));
    }
    let mut subspaces = Map::new();
    for (i, s) in d.indices().iter().zip(d.subspaces()) {
        subspaces.insert(i.label(g), json!(s.vectors()));
    }
    json!({ "p": g.p(), "dimV": d.dim(), "actions": actions, "subspaces": subspaces })
}

/// Parses a diagram; every block index must have an entry in `subspaces`.
/// Axioms are not checked.
pub fn diagram_from_json(v: &Value) -> Result<Diagram> {
    let obj = object(v)?;
    let g = group_of(obj)?;
    if g.rank() != 2 {
        return Err(perr(format!("diagrams need two generators, got {}", g.rank())));
    }
    let p = g.p();
    let dim = as_usize(field(obj, "dimV")?, "dimV")?;
    let actions = object(field(obj, "actions")?)?;
    let mats = g
        .names()
        .iter()
        .map(|n| {
            let what = format!("action of {n}");
            let rows = parse_rows(&actions[n], dim, &what)?;
            if rows.len() != dim {
                return Err(perr(format!("{what}: {} rows, expected {dim}", rows.len())));
            }
            Ok(to_fp(p, &rows, dim))
        })
        .collect::<Result<Vec<_>>>()?;
    let module = FpModule::new(g.clone(), dim, mats)?;
    let subs_obj = object(field(obj, "subspaces")?)?;
    let idx = block_indices(&g)?;
    let mut subspaces: Vec<Option<Subspace>> = vec![None; idx.len()];
    for (key, rows) in subs_obj {
        let i = BlockIndex::parse(&g, key).map_err(|e| perr(format!("subspace key {key:?}: {e}")))?;
        let k = idx.iter().position(|j| *j == i).expect("canonical index");
        if subspaces[k].is_some() {
            return Err(perr(format!("subspace {} given twice", i.label(&g))));
        }
        let rows = parse_rows(rows, dim, &format!("subspace {key}"))?;
        let vs: Vec<Vec<u64>> = to_fp(p, &rows, dim).to_rows();
        subspaces[k] = Some(Subspace::from_vectors(p, dim, &vs));
    }
    let missing: Vec<String> =
        idx.iter().zip(&subspaces).filter(|(_, s)| s.is_none()).map(|(i, _)| i.label(&g)).collect();
    if !missing.is_empty() {
        return Err(perr(format!("missing subspaces for {}", missing.join(", "))));
    }
    Diagram::new(module, subspaces.into_iter().map(Option::unwrap).collect())
}

/// Which of the three schemas a JSON value follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Lattice,
    Module,
    Diagram,
}

pub fn detect_kind(v: &Value) -> Result<Kind> {
    let obj = object(v)?;
    if obj.contains_key("subspaces") || obj.contains_key("dimV") {
        Ok(Kind::Diagram)
    } else if obj.contains_key("generators") {
        Ok(Kind::Lattice)
    } else if obj.contains_key("dim") {
        Ok(Kind::Module)
    } else {
        Err(perr("not a lattice, module or diagram"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Subgroup;

    #[test]
    fn lattice_round_trip_with_big_entries() {
        let g = GroupSpec::standard(3, 2).unwrap();
        let lat = GLattice::perm_lattice(&g, &Subgroup::from_generators(&g, &[vec![1, 0]]));
        let back = lattice_from_json(&lattice_to_json(&lat)).unwrap();
        assert_eq!(back, lat);
        let v = json!({"p": 2, "rank_k": 1, "generators": ["x"], "dim": 1,
                        "actions": {"x": [["123456789012345678901234567890"]]}});
        let l = lattice_from_json(&v).unwrap();
        assert_eq!(lattice_to_json(&l)["actions"]["x"][0][0], json!("123456789012345678901234567890"));
    }

    #[test]
    fn shape_errors() {
        let v = json!({"p": 3, "generators": ["n"], "dim": 2, "actions": {"n": [[1, 0]]}});
        assert!(matches!(lattice_from_json(&v), Err(Error::Parse(_))));
        let v = json!({"p": 3, "generators": ["n"], "dim": 1, "actions": {"m": [[1]]}});
        assert!(matches!(lattice_from_json(&v), Err(Error::Parse(_))));
    }

    #[test]
    fn module_and_diagram_round_trip() {
        let g = GroupSpec::standard(2, 2).unwrap();
        let m = FpModule::regular(&g);
        assert_eq!(module_from_json(&module_to_json(&m)).unwrap(), m);
        let d = Diagram::zero(&g).unwrap();
        let j = diagram_to_json(&d);
        assert_eq!(detect_kind(&j).unwrap(), Kind::Diagram);
        assert_eq!(diagram_from_json(&j).unwrap(), d);
        let mut bad = j.clone();
        bad["subspaces"].as_object_mut().unwrap().remove("C");
        assert!(diagram_from_json(&bad).unwrap_err().to_string().contains("missing subspaces for C"));
    }
}
