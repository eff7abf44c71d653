//! Mesh/operator serialization: a documented JSON schema with base64-encoded
//! little-endian f64 arrays, and cochain CSV export.

use crate::dec::mass::WeightedMass;
use crate::dec::mesh::{MeshComplex, Topology};
use crate::error::{Error, Result};
use crate::report::{csv_f64, csv_line, Json};
use base64::engine::general_purpose::STANDARD as B64;
use base64::Engine;

pub const MESH_SCHEMA: &str = "frankel-lab/mesh/v1";

fn encode_f64s(values: &[f64]) -> String {
    let mut bytes = Vec::with_capacity(values.len() * 8);
    for v in values {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    B64.encode(bytes)
}

fn decode_f64s(text: &str, expected: usize) -> Result<Vec<f64>> {
    let bytes = B64
        .decode(text)
        .map_err(|e| Error::Config(format!("bad base64 array: {e}")))?;
    if bytes.len() != expected * 8 {
        return Err(Error::Config(format!(
            "array has {} bytes, expected {}",
            bytes.len(),
            expected * 8
        )));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect())
}

/// Serializes a mesh and its weighted masses to the documented JSON schema.
pub fn mesh_to_json(mesh: &MeshComplex, mass: &WeightedMass) -> Json {
    Json::Obj(vec![
        ("schema", Json::Str(MESH_SCHEMA.into())),
        ("topology", Json::Str(mesh.topology.name().into())),
        ("n_r", Json::Int(mesh.n_r as i64)),
        ("n_theta", Json::Int(mesh.n_theta as i64)),
        ("r_max", Json::Num(mesh.r_max)),
        (
            "counts",
            Json::Obj(vec![
                ("vertices", Json::Int(mesh.n_vertices() as i64)),
                ("edges", Json::Int(mesh.n_edges() as i64)),
                ("faces", Json::Int(mesh.n_faces() as i64)),
            ]),
        ),
        (
            "euler_characteristic",
            Json::Int(mesh.euler_characteristic()),
        ),
        (
            "mass",
            Json::Obj(vec![
                ("m0", Json::Str(encode_f64s(&mass.m0))),
                ("m1", Json::Str(encode_f64s(&mass.m1))),
                ("m2", Json::Str(encode_f64s(&mass.m2))),
                (
                    "tail_estimate",
                    match mass.tail_estimate {
                        Some(t) => Json::Num(t),
                        None => Json::Null,
                    },
                ),
                ("tail_warning", Json::Bool(mass.tail_warning)),
            ]),
        ),
    ])
}

/// Rebuilds a mesh and masses from the JSON schema, revalidating incidence
/// and array lengths.
pub fn mesh_from_json(text: &str) -> Result<(MeshComplex, WeightedMass)> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Config(format!("mesh json: {e}")))?;
    let schema = v["schema"].as_str().unwrap_or_default();
    if schema != MESH_SCHEMA {
        return Err(Error::Config(format!(
            "unknown mesh schema {schema:?}, expected {MESH_SCHEMA:?}"
        )));
    }
    let topology = match v["topology"].as_str() {
        Some("disk") => Topology::Disk,
        Some("cylinder") => Topology::Cylinder,
        Some("torus") => Topology::Torus,
        other => return Err(Error::Config(format!("bad topology {other:?}"))),
    };
    let n_r = v["n_r"].as_u64().ok_or_else(|| Error::Config("n_r".into()))? as usize;
    let n_theta = v["n_theta"]
        .as_u64()
        .ok_or_else(|| Error::Config("n_theta".into()))? as usize;
    let r_max = v["r_max"]
        .as_f64()
        .ok_or_else(|| Error::Config("r_max".into()))?;
    let mesh = MeshComplex::build(topology, n_r, n_theta, r_max)?;
    let m = &v["mass"];
    let m0 = decode_f64s(m["m0"].as_str().unwrap_or_default(), mesh.n_vertices())?;
    let m1 = decode_f64s(m["m1"].as_str().unwrap_or_default(), mesh.n_edges())?;
    let m2 = decode_f64s(m["m2"].as_str().unwrap_or_default(), mesh.n_faces())?;
    let mass = WeightedMass {
        m0,
        m1,
        m2,
        tail_estimate: m["tail_estimate"].as_f64(),
        tail_warning: m["tail_warning"].as_bool().unwrap_or(false),
    };
    Ok((mesh, mass))
}

/// Cochain CSV: `cell_id,value` with a header row.
pub fn cochain_to_csv(values: &[f64]) -> String {
    let mut out = csv_line(&["cell_id".into(), "value".into()]);
    for (i, v) in values.iter().enumerate() {
        out.push_str(&csv_line(&[i.to_string(), csv_f64(*v)]));
    }
    out
}
