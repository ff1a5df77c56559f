//! Bundle documents: a versioned, strict JSON schema.
//!
//! ```json
//! { "format": 1, "kind": "explicit", "g": 1, "b": 1,
//!   "images": { "a1": [[1, 1], [-1, 0]], "b1": [[1, 0], [0, 1]] } }
//! ```
//!
//! Kinds are `explicit`, `declared`, `generating_set` and `construction`.
//! A construction holds a tree under `root` whose nodes carry an `op`.

use kodaira_core::linalg::IntMatrix;
use kodaira_core::monodromy::{
    BundleContent, BundleSpec, CoverOrigin, DeclaredBlock, GeneratingSetRep, Leaf, Provenance, RankInterval,
    Signature, SymplecticRep,
};
use kodaira_core::surface::{cover_genus, generator_name, CyclicCoverSpec};
use num_bigint::BigInt;
use serde_json::{Map, Number, Value};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error(transparent)]
    Build(#[from] kodaira_core::Error),
}

fn schema<T>(path: &str, message: impl Into<String>) -> Result<T, DocumentError> {
    Err(DocumentError::Schema { path: path.into(), message: message.into() })
}

/// Field access on a JSON object that rejects missing and unknown keys.
struct Fields<'a> {
    map: &'a Map<String, Value>,
    path: String,
}

impl<'a> Fields<'a> {
    fn new(v: &'a Value, path: &str, required: &[&str], optional: &[&str]) -> Result<Self, DocumentError> {
        let Some(map) = v.as_object() else {
            return schema(path, "expected an object");
        };
        for k in map.keys() {
            if !required.contains(&k.as_str()) && !optional.contains(&k.as_str()) {
                return schema(path, format!("unknown field \"{k}\""));
            }
        }
        for k in required {
            if !map.contains_key(*k) {
                return schema(path, format!("missing field \"{k}\""));
            }
        }
        Ok(Fields { map, path: path.into() })
    }

    fn at(&self, key: &str) -> String {
        format!("{}.{key}", self.path)
    }

    fn get(&self, key: &str) -> Option<&'a Value> {
        self.map.get(key).filter(|v| !v.is_null())
    }

    fn value(&self, key: &str) -> Result<&'a Value, DocumentError> {
        match self.get(key) {
            Some(v) => Ok(v),
            None => schema(&self.at(key), "must not be null"),
        }
    }

    fn usize(&self, key: &str) -> Result<usize, DocumentError> {
        match self.value(key)?.as_u64() {
            Some(n) => Ok(n as usize),
            None => schema(&self.at(key), "expected a non-negative integer"),
        }
    }

    fn i64(&self, key: &str) -> Result<i64, DocumentError> {
        match self.value(key)?.as_i64() {
            Some(n) => Ok(n),
            None => schema(&self.at(key), "expected an integer"),
        }
    }

    fn opt_i64(&self, key: &str) -> Result<Option<i64>, DocumentError> {
        self.get(key).map(|_| self.i64(key)).transpose()
    }

    fn bool(&self, key: &str) -> Result<bool, DocumentError> {
        match self.value(key)?.as_bool() {
            Some(b) => Ok(b),
            None => schema(&self.at(key), "expected a boolean"),
        }
    }
}

fn integer(v: &Value, path: &str) -> Result<BigInt, DocumentError> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        _ => return schema(path, "expected an integer"),
    };
    match text.parse::<BigInt>() {
        Ok(x) => Ok(x),
        Err(_) => schema(path, format!("{text} is not an integer")),
    }
}

fn matrix(v: &Value, path: &str, n: usize) -> Result<IntMatrix, DocumentError> {
    let Some(rows) = v.as_array() else {
        return schema(path, "expected an array of rows");
    };
    let mut entries = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        let Some(row) = row.as_array() else {
            return schema(&format!("{path}[{i}]"), "expected an array of integers");
        };
        if row.len() != n {
            return schema(path, format!("row {i} has {} entries, expected {n}", row.len()));
        }
        for (j, x) in row.iter().enumerate() {
            entries.push(integer(x, &format!("{path}[{i}][{j}]"))?);
        }
    }
    if rows.len() != n {
        return schema(path, format!("{} rows, expected {n}", rows.len()));
    }
    Ok(IntMatrix::new(n, n, entries)?)
}

fn keyed_images(v: &Value, path: &str, g: usize, b: usize) -> Result<Vec<IntMatrix>, DocumentError> {
    let Some(map) = v.as_object() else {
        return schema(path, "expected an object keyed a1, b1, ...");
    };
    let expected: Vec<String> = (0..2 * b).map(generator_name).collect();
    let found: Vec<&String> = map.keys().collect();
    if found.len() != expected.len() || found.iter().zip(&expected).any(|(f, e)| *f != e) {
        let missing: Vec<&str> = expected.iter().filter(|e| !map.contains_key(*e)).map(String::as_str).collect();
        let extra: Vec<&str> = found.iter().filter(|f| !expected.contains(f)).map(|s| s.as_str()).collect();
        let message = if !missing.is_empty() {
            format!("missing generator keys {missing:?}")
        } else if !extra.is_empty() {
            format!("unexpected keys {extra:?} for base genus {b}")
        } else {
            format!("keys must appear in the order {expected:?}")
        };
        return schema(path, message);
    }
    expected.iter().map(|k| matrix(&map[k], &format!("{path}.{k}"), 2 * g)).collect()
}

fn residues(v: &Value, path: &str) -> Result<Vec<i64>, DocumentError> {
    let Some(items) = v.as_array() else {
        return schema(path, "expected an array of integers");
    };
    items
        .iter()
        .enumerate()
        .map(|(i, x)| match x.as_i64() {
            Some(x) => Ok(x),
            None => schema(&format!("{path}[{i}]"), "expected an integer"),
        })
        .collect()
}

const EXPLICIT_FIELDS: (&[&str], &[&str]) = (&["g", "b", "images"], &["signature", "has_zero_section"]);
const DECLARED_FIELDS: &[&str] = &["g", "b", "signature", "coinv_rank_lo", "coinv_rank_hi", "has_zero_section"];
const GENSET_FIELDS: (&[&str], &[&str]) = (&["g", "b", "origin", "images"], &["signature", "has_zero_section"]);

fn with_tag<'a>(tag: &'a [&'a str], fields: &[&'a str]) -> Vec<&'a str> {
    tag.iter().chain(fields).copied().collect()
}

fn explicit_leaf(f: &Fields) -> Result<Leaf, DocumentError> {
    let (g, b) = (f.usize("g")?, f.usize("b")?);
    if g == 0 || b == 0 {
        return schema(&f.path, "g and b must be positive");
    }
    let images = keyed_images(f.value("images")?, &f.at("images"), g, b)?;
    let rep = SymplecticRep::new(g, b, images)?;
    let has_zero_section = match f.get("has_zero_section") {
        Some(_) => f.bool("has_zero_section")?,
        None => false,
    };
    Ok(Leaf::Explicit { rep, signature: f.opt_i64("signature")?, has_zero_section })
}

fn declared_leaf(f: &Fields) -> Result<Leaf, DocumentError> {
    let rank = RankInterval { lo: f.usize("coinv_rank_lo")?, hi: f.usize("coinv_rank_hi")? };
    let block = match DeclaredBlock::new(f.usize("g")?, f.usize("b")?, rank) {
        Ok(block) => block,
        Err(e) => return schema(&f.path, e.to_string()),
    };
    Ok(Leaf::Declared { block, signature: f.i64("signature")?, has_zero_section: f.bool("has_zero_section")? })
}

fn genset_leaf(f: &Fields) -> Result<Leaf, DocumentError> {
    let (g, b) = (f.usize("g")?, f.usize("b")?);
    let o = Fields::new(f.value("origin")?, &f.at("origin"), &["base_genus", "degree", "images"], &[])?;
    let base_genus = o.usize("base_genus")?;
    let degree = o.usize("degree")?;
    let spec = match CyclicCoverSpec::new(degree, residues(o.value("images")?, &o.at("images"))?) {
        Ok(s) => s,
        Err(e) => return schema(&o.path, e.to_string()),
    };
    if spec.images().len() != 2 * base_genus {
        return schema(&o.at("images"), format!("expected {} residues", 2 * base_genus));
    }
    if base_genus == 0 || b != cover_genus(degree, base_genus) {
        return schema(&f.at("b"), format!("a degree-{degree} cover of genus {base_genus} has genus {}", cover_genus(degree, base_genus)));
    }
    let path = f.at("images");
    let Some(items) = f.value("images")?.as_array() else {
        return schema(&path, "expected an array of matrices");
    };
    let count = 2 * base_genus * degree - degree + 1;
    if items.len() != count {
        return schema(&path, format!("{} images, expected {count} Schreier generators", items.len()));
    }
    let images = items
        .iter()
        .enumerate()
        .map(|(i, m)| matrix(m, &format!("{path}[{i}]"), 2 * g))
        .collect::<Result<Vec<_>, _>>()?;
    let rep = GeneratingSetRep::new(g, b, images, CoverOrigin { base_genus, spec })?;
    let has_zero_section = match f.get("has_zero_section") {
        Some(_) => f.bool("has_zero_section")?,
        None => false,
    };
    Ok(Leaf::GeneratingSet { rep, signature: f.opt_i64("signature")?, has_zero_section })
}

fn node(v: &Value, path: &str) -> Result<Provenance, DocumentError> {
    let op = match v.get("op").and_then(Value::as_str) {
        Some(op) => op,
        None => return schema(path, "missing string field \"op\""),
    };
    let fields = |required: &[&str], optional: &[&str]| {
        Fields::new(v, path, &with_tag(&["op"], required), optional)
    };
    let child = |f: &Fields, key: &str| -> Result<Box<Provenance>, DocumentError> {
        Ok(Box::new(node(f.value(key)?, &f.at(key))?))
    };
    Ok(match op {
        "product" => {
            let f = fields(&["g", "b"], &[])?;
            Provenance::Leaf(Leaf::Product { fiber_genus: f.usize("g")?, base_genus: f.usize("b")? })
        }
        "trefoil" => Provenance::Leaf(Leaf::Trefoil { base_genus: fields(&["b"], &[])?.usize("b")? }),
        "kodaira_thurston" => {
            Provenance::Leaf(Leaf::KodairaThurston { base_genus: fields(&["b"], &[])?.usize("b")? })
        }
        "ekkos" => {
            fields(&[], &[])?;
            Provenance::Leaf(Leaf::Ekkos)
        }
        "explicit" => Provenance::Leaf(explicit_leaf(&fields(EXPLICIT_FIELDS.0, EXPLICIT_FIELDS.1)?)?),
        "declared" => Provenance::Leaf(declared_leaf(&fields(DECLARED_FIELDS, &[])?)?),
        "generating_set" => Provenance::Leaf(genset_leaf(&fields(GENSET_FIELDS.0, GENSET_FIELDS.1)?)?),
        "section_sum" => {
            let f = fields(&["left", "right"], &[])?;
            Provenance::SectionSum(child(&f, "left")?, child(&f, "right")?)
        }
        "fiber_sum_product" => {
            let f = fields(&["input", "c"], &[])?;
            Provenance::FiberSumProduct { input: child(&f, "input")?, c: f.usize("c")? }
        }
        "cover" => {
            let f = fields(&["input", "degree", "images"], &[])?;
            let spec = match CyclicCoverSpec::new(f.usize("degree")?, residues(f.value("images")?, &f.at("images"))?) {
                Ok(s) => s,
                Err(e) => return schema(path, e.to_string()),
            };
            Provenance::Cover { input: child(&f, "input")?, spec }
        }
        other => return schema(&format!("{path}.op"), format!("unknown op \"{other}\"")),
    })
}

/// Parses a document and builds the bundle it describes.
pub fn parse_document(text: &str) -> Result<BundleSpec, DocumentError> {
    let v: Value = serde_json::from_str(text)?;
    let root = "$";
    let Some(map) = v.as_object() else {
        return schema(root, "expected an object");
    };
    match map.get("format") {
        Some(f) if f.as_u64() == Some(FORMAT_VERSION) => {}
        Some(f) => return schema("$.format", format!("unsupported format {f}, expected {FORMAT_VERSION}")),
        None => return schema(root, "missing field \"format\""),
    }
    let kind = match map.get("kind").and_then(Value::as_str) {
        Some(k) => k,
        None => return schema(root, "missing string field \"kind\""),
    };
    let tag = ["format", "kind"];
    let leaf = match kind {
        "explicit" => explicit_leaf(&Fields::new(&v, root, &with_tag(&tag, EXPLICIT_FIELDS.0), EXPLICIT_FIELDS.1)?)?,
        "declared" => declared_leaf(&Fields::new(&v, root, &with_tag(&tag, DECLARED_FIELDS), &[])?)?,
        "generating_set" => genset_leaf(&Fields::new(&v, root, &with_tag(&tag, GENSET_FIELDS.0), GENSET_FIELDS.1)?)?,
        "construction" => {
            let f = Fields::new(&v, root, &with_tag(&tag, &["root"]), &[])?;
            let tree = node(f.value("root")?, "$.root")?;
            return Ok(tree.evaluate()?);
        }
        other => return schema("$.kind", format!("unknown kind \"{other}\"")),
    };
    Ok(leaf.build()?)
}

fn int(x: impl Into<Number>) -> Value {
    Value::Number(x.into())
}

fn big(x: &BigInt) -> Value {
    Value::Number(x.to_string().parse().expect("integer literal"))
}

fn matrix_value(m: &IntMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(big).collect())).collect())
}

fn explicit_fields(out: &mut Map<String, Value>, rep: &SymplecticRep, signature: Option<i64>, zero: bool) {
    out.insert("g".into(), int(rep.fiber_genus() as u64));
    out.insert("b".into(), int(rep.base_genus() as u64));
    let images = rep.images().iter().enumerate().map(|(i, m)| (generator_name(i), matrix_value(m))).collect();
    out.insert("images".into(), Value::Object(images));
    if let Some(s) = signature {
        out.insert("signature".into(), int(s));
    }
    out.insert("has_zero_section".into(), Value::Bool(zero));
}

fn declared_fields(out: &mut Map<String, Value>, block: &DeclaredBlock, signature: i64, zero: bool) {
    out.insert("g".into(), int(block.fiber_genus as u64));
    out.insert("b".into(), int(block.base_genus as u64));
    out.insert("signature".into(), int(signature));
    out.insert("coinv_rank_lo".into(), int(block.coinv_rank.lo as u64));
    out.insert("coinv_rank_hi".into(), int(block.coinv_rank.hi as u64));
    out.insert("has_zero_section".into(), Value::Bool(zero));
}

fn spec_residues(spec: &CyclicCoverSpec) -> Value {
    Value::Array(spec.images().iter().map(|&r| int(r as u64)).collect())
}

fn genset_fields(out: &mut Map<String, Value>, rep: &GeneratingSetRep, signature: Option<i64>, zero: bool) {
    out.insert("g".into(), int(rep.fiber_genus() as u64));
    out.insert("b".into(), int(rep.base_genus() as u64));
    let mut origin = Map::new();
    origin.insert("base_genus".into(), int(rep.origin().base_genus as u64));
    origin.insert("degree".into(), int(rep.origin().spec.degree() as u64));
    origin.insert("images".into(), spec_residues(&rep.origin().spec));
    out.insert("origin".into(), Value::Object(origin));
    out.insert("images".into(), Value::Array(rep.images().iter().map(matrix_value).collect()));
    if let Some(s) = signature {
        out.insert("signature".into(), int(s));
    }
    out.insert("has_zero_section".into(), Value::Bool(zero));
}

fn node_value(p: &Provenance) -> Value {
    let mut out = Map::new();
    let op = |name: &str, out: &mut Map<String, Value>| {
        out.insert("op".into(), Value::String(name.into()));
    };
    match p {
        Provenance::Leaf(leaf) => match leaf {
            Leaf::Product { fiber_genus, base_genus } => {
                op("product", &mut out);
                out.insert("g".into(), int(*fiber_genus as u64));
                out.insert("b".into(), int(*base_genus as u64));
            }
            Leaf::Trefoil { base_genus } => {
                op("trefoil", &mut out);
                out.insert("b".into(), int(*base_genus as u64));
            }
            Leaf::KodairaThurston { base_genus } => {
                op("kodaira_thurston", &mut out);
                out.insert("b".into(), int(*base_genus as u64));
            }
            Leaf::Ekkos => op("ekkos", &mut out),
            Leaf::Explicit { rep, signature, has_zero_section } => {
                op("explicit", &mut out);
                explicit_fields(&mut out, rep, *signature, *has_zero_section);
            }
            Leaf::Declared { block, signature, has_zero_section } => {
                op("declared", &mut out);
                declared_fields(&mut out, block, *signature, *has_zero_section);
            }
            Leaf::GeneratingSet { rep, signature, has_zero_section } => {
                op("generating_set", &mut out);
                genset_fields(&mut out, rep, *signature, *has_zero_section);
            }
        },
        Provenance::SectionSum(a, b) => {
            op("section_sum", &mut out);
            out.insert("left".into(), node_value(a));
            out.insert("right".into(), node_value(b));
        }
        Provenance::FiberSumProduct { input, c } => {
            op("fiber_sum_product", &mut out);
            out.insert("input".into(), node_value(input));
            out.insert("c".into(), int(*c as u64));
        }
        Provenance::Cover { input, spec } => {
            op("cover", &mut out);
            out.insert("input".into(), node_value(input));
            out.insert("degree".into(), int(spec.degree() as u64));
            out.insert("images".into(), spec_residues(spec));
        }
    }
    Value::Object(out)
}

/// Document describing the bundle. Leaves that carry data become flat
/// documents; everything else is written as its construction tree.
pub fn to_value(bundle: &BundleSpec) -> Value {
    let mut out = Map::new();
    out.insert("format".into(), int(FORMAT_VERSION));
    match bundle.provenance() {
        Provenance::Leaf(Leaf::Explicit { rep, signature, has_zero_section }) => {
            out.insert("kind".into(), Value::String("explicit".into()));
            explicit_fields(&mut out, rep, *signature, *has_zero_section);
        }
        Provenance::Leaf(Leaf::Declared { block, signature, has_zero_section }) => {
            out.insert("kind".into(), Value::String("declared".into()));
            declared_fields(&mut out, block, *signature, *has_zero_section);
        }
        Provenance::Leaf(Leaf::GeneratingSet { rep, signature, has_zero_section }) => {
            out.insert("kind".into(), Value::String("generating_set".into()));
            genset_fields(&mut out, rep, *signature, *has_zero_section);
        }
        tree => {
            out.insert("kind".into(), Value::String("construction".into()));
            out.insert("root".into(), node_value(tree));
        }
    }
    Value::Object(out)
}

/// Flat document for a bundle given by its monodromy alone, dropping the
/// construction history.
pub fn flatten(bundle: &BundleSpec) -> Result<BundleSpec, kodaira_core::Error> {
    let signature = bundle.signature().exact();
    let has_zero_section = bundle.has_zero_section();
    let leaf = match bundle.content() {
        BundleContent::Explicit(rep) => Leaf::Explicit { rep: rep.clone(), signature, has_zero_section },
        BundleContent::GeneratingSet(rep) => Leaf::GeneratingSet { rep: rep.clone(), signature, has_zero_section },
        BundleContent::Declared(block) => match bundle.signature() {
            Signature::Exact(signature) => Leaf::Declared { block: block.clone(), signature, has_zero_section },
            _ => return Err(kodaira_core::Error::InvalidArgument("declared block without exact signature".into())),
        },
    };
    leaf.build()
}

pub fn to_string(bundle: &BundleSpec) -> String {
    let mut s = String::new();
    render(&to_value(bundle), 0, &mut s);
    s.push('\n');
    s
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|x| !x.is_array() && !x.is_object()),
        _ => false,
    }
}

fn is_matrix(v: &Value) -> bool {
    matches!(v, Value::Array(rows) if !rows.is_empty() && rows.iter().all(is_flat))
}

/// Pretty printer that keeps matrix rows and residue lists on one line.
fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                render(x, indent + 1, out);
                if i + 1 < map.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(items) if is_matrix(v) && !is_flat(v) => {
            let rows: Vec<String> = items.iter().map(Value::to_string).collect();
            if items.len() <= 2 {
                out.push('[');
                out.push_str(&rows.join(", "));
                out.push(']');
            } else {
                out.push_str("[\n");
                for (i, r) in rows.iter().enumerate() {
                    out.push_str(&pad(indent + 1));
                    out.push_str(r);
                    if i + 1 < rows.len() {
                        out.push(',');
                    }
                    out.push('\n');
                }
                out.push_str(&pad(indent));
                out.push(']');
            }
        }
        Value::Array(items) if !is_flat(v) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                render(x, indent + 1, out);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        other => out.push_str(&other.to_string()),
    }
}
