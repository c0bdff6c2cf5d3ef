//! Browser bindings: Howell forms, solution modules and theorem reports.
//!
//! Each export takes plain strings and numbers and returns a JSON string.
//! The `*_json` functions hold the logic so they can be tested natively.

use jordanlab_core::addmaps::AdditiveMap;
use jordanlab_core::lab::{solve_all, IdentityKind};
use jordanlab_core::linalg::{howell_form, ResidueMatrix, SolutionModule};
use jordanlab_core::rings::{Bimodule, PairMode, RingDescriptor};
use jordanlab_core::suite::{verify_theorem, TheoremId, VerifyOptions};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn err(e: impl ToString) -> String {
    e.to_string()
}

/// `"zmod"` or `"dual"` over `Z/m`, as `M_n` when `n > 0`.
fn ring(base: &str, m: u64, n: usize, trivial_ext: bool) -> Result<RingDescriptor, String> {
    let b = match base {
        "zmod" => RingDescriptor::zmod(m),
        "dual" => RingDescriptor::dual(m),
        other => return Err(format!("unknown base ring `{other}`")),
    };
    let mut desc = if n > 0 { RingDescriptor::matrix(n, b) } else { b };
    if trivial_ext {
        desc = RingDescriptor::trivial_ext(desc);
    }
    desc.validate().map_err(err)?;
    Ok(desc)
}

fn pair_mode(s: &str) -> Result<PairMode, String> {
    s.parse()
}

/// Rows separated by newlines or `;`, entries by spaces or commas.
fn parse_rows(text: &str) -> Result<Vec<Vec<i64>>, String> {
    text.split(['\n', ';'])
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|line| {
            line.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse().map_err(|_| format!("bad entry `{t}`")))
                .collect()
        })
        .collect()
}

pub fn howell_json(modulus: u64, rows_text: &str) -> Result<String, String> {
    let raw = parse_rows(rows_text)?;
    let cols = raw.first().map_or(0, Vec::len);
    if cols == 0 {
        return Err("enter at least one row".into());
    }
    if raw.iter().any(|r| r.len() != cols) {
        return Err("rows have different lengths".into());
    }
    let flat: Vec<i64> = raw.concat();
    let mat = ResidueMatrix::from_i64(modulus, raw.len(), cols, &flat).map_err(err)?;
    let h = howell_form(&mat);
    let module = SolutionModule::row_span(&mat);
    Ok(json!({
        "modulus": modulus,
        "howell": h.row_vecs(),
        "span_size": module.order().map(|s| s.to_string()),
    })
    .to_string())
}

pub fn solve_json(
    kind: &str,
    base: &str,
    m: u64,
    n: usize,
    trivial_ext: bool,
    pairs: &str,
) -> Result<String, String> {
    let kind: IdentityKind = kind.parse()?;
    let desc = ring(base, m, n, trivial_ext)?;
    let bm = Bimodule::new(&jordanlab_core::rings::BimoduleDescriptor::regular(desc.clone())).map_err(err)?;
    let module = solve_all(kind, &bm, pair_mode(pairs)?).map_err(err)?;
    let images: Vec<Vec<Vec<u64>>> = module
        .generator_rows()
        .map(|g| {
            let f = AdditiveMap::from_flat(bm.ring(), &bm, g).expect("generator has map shape");
            (0..desc.rank()).map(|i| f.image_of_basis(i)).collect()
        })
        .collect();
    Ok(json!({
        "ring": desc.to_string(),
        "kind": kind,
        "size": module.order().map(|s| s.to_string()),
        "generators": module.num_generators(),
        "basis_images": images,
    })
    .to_string())
}

pub fn verify_json(
    theorem: &str,
    base: &str,
    m: u64,
    n: usize,
    pairs: &str,
    corrupt: bool,
) -> Result<String, String> {
    let id: TheoremId = theorem.parse()?;
    let desc = ring(base, m, n, false)?;
    let opts = VerifyOptions {
        pairs: pair_mode(pairs)?,
        corrupt,
        ..VerifyOptions::default()
    };
    let report = verify_theorem(id, &desc, &opts).map_err(err)?;
    Ok(report.deterministic_json())
}

#[wasm_bindgen]
pub fn howell(modulus: u32, rows: &str) -> Result<String, JsValue> {
    howell_json(u64::from(modulus), rows).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn solve(kind: &str, base: &str, m: u32, n: u32, trivial_ext: bool, pairs: &str) -> Result<String, JsValue> {
    solve_json(kind, base, u64::from(m), n as usize, trivial_ext, pairs).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn verify(theorem: &str, base: &str, m: u32, n: u32, pairs: &str, corrupt: bool) -> Result<String, JsValue> {
    verify_json(theorem, base, u64::from(m), n as usize, pairs, corrupt).map_err(|e| JsValue::from_str(&e))
}
