//! JSON bundles holding a code object, its provenance and certificates.
//!
//! Matrices are stored as nested arrays of integer-encoded field elements with
//! an explicit width; fields are stored as their tower of moduli (each modulus
//! a coefficient array over the previous field). Every payload is rebuilt
//! through the validating constructors on load, and all stored forms are
//! canonical, so save → load → save is byte-identical.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::alphred::{BaseRecord, LevelRecord, PipelineOutput};
use crate::certificate::{Certificate, Claim};
use crate::classical::LinearCode;
use crate::css::CssCode;
use crate::error::{Error, Result};
use crate::flinalg::Mat;
use crate::gf::{Field, Tower};
use crate::multfriendly::{Members, MfCollection};
use crate::transversal::TransversalTriple;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug)]
pub enum Object {
    LinearCode(LinearCode),
    CssCode(CssCode),
    TransversalTriple(TransversalTriple),
    MfCollection(MfCollection),
    PipelineOutput(PipelineOutput),
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::LinearCode(_) => "linear_code",
            Object::CssCode(_) => "css_code",
            Object::TransversalTriple(_) => "transversal_triple",
            Object::MfCollection(_) => "mf_collection",
            Object::PipelineOutput(_) => "pipeline_output",
        }
    }

    pub fn field(&self) -> &Field {
        match self {
            Object::LinearCode(c) => c.field(),
            Object::CssCode(c) => c.field(),
            Object::TransversalTriple(t) => t.field(),
            Object::MfCollection(m) => m.field(),
            Object::PipelineOutput(p) => p.triple.field(),
        }
    }

    /// The triple carried by the object, if any.
    pub fn triple(&self) -> Option<&TransversalTriple> {
        match self {
            Object::TransversalTriple(t) => Some(t),
            Object::PipelineOutput(p) => Some(&p.triple),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Bundle {
    pub object: Object,
    /// Construction parameters; `tool` is filled in automatically.
    pub provenance: Value,
    pub certificates: Vec<Certificate>,
}

#[derive(Serialize, Deserialize)]
struct FieldW {
    p: u64,
    /// Degree over the prime field.
    r: u32,
    /// Moduli from the prime field upwards.
    moduli: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct MatW {
    cols: usize,
    rows: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct LinearW {
    gen: MatW,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    encoder: Option<MatW>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eval_points: Option<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct CssW {
    x_stab: MatW,
    qz: MatW,
    encz: MatW,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    encx: Option<MatW>,
}

#[derive(Serialize, Deserialize)]
struct TripleW {
    same_code: bool,
    /// One entry when `same_code`, otherwise three.
    codes: Vec<CssW>,
    b: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    distance: Option<Claim>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", content = "codes", rename_all = "lowercase")]
enum MembersW {
    Classical(Vec<LinearW>),
    Quantum(Vec<CssW>),
}

#[derive(Serialize, Deserialize)]
struct MfW {
    gamma: Vec<u32>,
    members: MembersW,
    dec: MatW,
    distance_bound: u64,
}

#[derive(Serialize, Deserialize)]
struct PipelineW {
    triple: TripleW,
    base: BaseRecord,
    levels: Vec<LevelRecord>,
}

#[derive(Serialize, Deserialize)]
struct Wire {
    format_version: u32,
    kind: String,
    field: FieldW,
    payload: Value,
    provenance: Value,
    certificates: Vec<Certificate>,
}

fn field_w(f: &Field) -> FieldW {
    FieldW {
        p: f.p() as u64,
        r: f.degree(),
        moduli: f.chain()[1..].iter().map(|g| g.modulus().to_vec()).collect(),
    }
}

fn field_from(w: &FieldW) -> Result<Field> {
    let mut f = Field::prime(w.p)?;
    for m in &w.moduli {
        let next = Field::extension(&f, m.clone())?;
        if next == f {
            return Err(Error::Bundle("trivial modulus in field tower".into()));
        }
        f = next;
    }
    if f.degree() != w.r {
        return Err(Error::Bundle(format!(
            "field degree {} does not match the moduli (degree {})",
            w.r,
            f.degree()
        )));
    }
    Ok(f)
}

fn mat_w(m: &Mat) -> MatW {
    MatW {
        cols: m.cols(),
        rows: m.to_rows(),
    }
}

fn mat_from(f: &Field, w: &MatW) -> Result<Mat> {
    Mat::from_rows_with_cols(f, w.rows.clone(), w.cols)
}

fn linear_w(c: &LinearCode) -> LinearW {
    LinearW {
        gen: mat_w(c.gen()),
        encoder: c.encoder().map(mat_w),
        eval_points: c.eval_points().map(|p| p.to_vec()),
    }
}

fn linear_from(f: &Field, w: &LinearW) -> Result<LinearCode> {
    let mut c = LinearCode::new(mat_from(f, &w.gen)?)?;
    if let Some(e) = &w.encoder {
        c = c.with_encoder(mat_from(f, e)?)?;
    }
    if let Some(p) = &w.eval_points {
        c = c.with_eval_points(p.clone())?;
    }
    Ok(c)
}

fn css_w(c: &CssCode) -> CssW {
    CssW {
        x_stab: mat_w(c.x_stab()),
        qz: mat_w(c.qz()),
        encz: mat_w(c.encz()),
        encx: c.encx().map(mat_w),
    }
}

fn css_from(f: &Field, w: &CssW) -> Result<CssCode> {
    let c = CssCode::new(
        &mat_from(f, &w.x_stab)?,
        &mat_from(f, &w.qz)?,
        &mat_from(f, &w.encz)?,
    )?;
    match &w.encx {
        Some(e) => c.with_encx(&mat_from(f, e)?),
        None => Ok(c),
    }
}

fn triple_w(t: &TransversalTriple) -> TripleW {
    let codes = if t.same_code() {
        vec![css_w(t.code(0))]
    } else {
        t.codes().iter().map(css_w).collect()
    };
    TripleW {
        same_code: t.same_code(),
        codes,
        b: t.b().to_vec(),
        distance: t.distance().cloned(),
    }
}

fn triple_from(f: &Field, w: &TripleW) -> Result<TransversalTriple> {
    let codes = w
        .codes
        .iter()
        .map(|c| css_from(f, c))
        .collect::<Result<Vec<_>>>()?;
    let t = match (w.same_code, codes.len()) {
        (true, 1) => TransversalTriple::same(codes[0].clone(), w.b.clone(), w.distance.clone())?,
        (false, 3) => {
            let codes: [CssCode; 3] = codes.try_into().unwrap();
            TransversalTriple::new(codes, w.b.clone(), w.distance.clone())?
        }
        _ => return Err(Error::Bundle("triple must hold one shared or three codes".into())),
    };
    if t.same_code() != w.same_code {
        return Err(Error::Bundle("same_code flag does not match the codes".into()));
    }
    Ok(t)
}

fn mf_w(m: &MfCollection) -> MfW {
    let members = match m.members() {
        Members::Classical(cs) => MembersW::Classical(cs.iter().map(linear_w).collect()),
        Members::Quantum(qs) => MembersW::Quantum(qs.iter().map(css_w).collect()),
    };
    MfW {
        gamma: m.tower().gamma(),
        members,
        dec: mat_w(m.dec()),
        distance_bound: m.distance_bound(),
    }
}

fn mf_from(f: &Field, w: &MfW) -> Result<MfCollection> {
    let tower = Tower::with_gamma(f, w.gamma.clone())?;
    let members = match &w.members {
        MembersW::Classical(cs) => Members::Classical(
            cs.iter().map(|c| linear_from(f, c)).collect::<Result<_>>()?,
        ),
        MembersW::Quantum(qs) => {
            Members::Quantum(qs.iter().map(|c| css_from(f, c)).collect::<Result<_>>()?)
        }
    };
    Ok(MfCollection::new(tower, members, mat_from(f, &w.dec)?)?
        .with_distance_bound(w.distance_bound))
}

impl Bundle {
    pub fn new(object: Object, provenance: Value) -> Bundle {
        let mut provenance = match provenance {
            Value::Object(m) => Value::Object(m),
            Value::Null => json!({}),
            other => json!({ "construction": other }),
        };
        provenance["tool"] = json!(concat!("codekit ", env!("CARGO_PKG_VERSION")));
        Bundle {
            object,
            provenance,
            certificates: Vec::new(),
        }
    }

    pub fn with_certificate(mut self, c: Certificate) -> Bundle {
        self.certificates.push(c);
        self
    }

    pub fn kind(&self) -> &'static str {
        self.object.kind()
    }

    pub fn to_json(&self) -> Result<String> {
        let payload = match &self.object {
            Object::LinearCode(c) => serde_json::to_value(linear_w(c))?,
            Object::CssCode(c) => serde_json::to_value(css_w(c))?,
            Object::TransversalTriple(t) => serde_json::to_value(triple_w(t))?,
            Object::MfCollection(m) => serde_json::to_value(mf_w(m))?,
            Object::PipelineOutput(p) => serde_json::to_value(PipelineW {
                triple: triple_w(&p.triple),
                base: p.base.clone(),
                levels: p.levels.clone(),
            })?,
        };
        let wire = Wire {
            format_version: FORMAT_VERSION,
            kind: self.kind().into(),
            field: field_w(self.object.field()),
            payload,
            provenance: self.provenance.clone(),
            certificates: self.certificates.clone(),
        };
        let mut s = serde_json::to_string(&wire)?;
        s.push('\n');
        Ok(s)
    }

    /// Parses and revalidates a bundle.
    pub fn from_json(s: &str) -> Result<Bundle> {
        let wire: Wire = serde_json::from_str(s)?;
        if wire.format_version != FORMAT_VERSION {
            return Err(Error::Bundle(format!(
                "unsupported format_version {}",
                wire.format_version
            )));
        }
        let f = field_from(&wire.field)?;
        let p = wire.payload;
        let object = match wire.kind.as_str() {
            "linear_code" => Object::LinearCode(linear_from(&f, &serde_json::from_value(p)?)?),
            "css_code" => Object::CssCode(css_from(&f, &serde_json::from_value(p)?)?),
            "transversal_triple" => {
                Object::TransversalTriple(triple_from(&f, &serde_json::from_value(p)?)?)
            }
            "mf_collection" => Object::MfCollection(mf_from(&f, &serde_json::from_value(p)?)?),
            "pipeline_output" => {
                let w: PipelineW = serde_json::from_value(p)?;
                let triple = triple_from(&f, &w.triple)?;
                if let Some(last) = w.levels.first() {
                    if (last.n, last.k) != (triple.n(), triple.k()) {
                        return Err(Error::Bundle(
                            "level record does not match the final triple".into(),
                        ));
                    }
                }
                Object::PipelineOutput(PipelineOutput {
                    triple,
                    base: w.base,
                    levels: w.levels,
                })
            }
            other => return Err(Error::Bundle(format!("unknown kind {other:?}"))),
        };
        Ok(Bundle {
            object,
            provenance: wire.provenance,
            certificates: wire.certificates,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Bundle> {
        Bundle::from_json(&std::fs::read_to_string(path)?)
    }
}
