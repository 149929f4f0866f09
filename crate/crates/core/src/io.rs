//! JSON documents exchanged by the command line tool.
//!
//! Every document carries `"schema": "matdecomp/1"`. Scalars are strings in
//! the syntax of [`FieldDescriptor::parse`], matrices are 3×3 arrays of them.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Map, Value};

use crate::autos::{AutoSpec, FamilyM6, FamilyU};
use crate::canonical::{CanonLabel, CanonResult};
use crate::error::{Error, Result};
use crate::ffsearch::SearchReport;
use crate::field::{FieldDescriptor, FieldValue};
use crate::fingerprint::Fingerprint;
use crate::linalg::{Mat3, Matrix};
use crate::rota::RBOperator;
use crate::subalg::{
    check_decomposition, validate_decomposition, Decomposition, DecompositionReport, MLabel, Subalgebra,
};

pub const SCHEMA: &str = "matdecomp/1";

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum DescriptorDoc {
    Rational {},
    Prime { p: u64 },
    Quadratic { base: Box<DescriptorDoc>, d: String },
}

impl DescriptorDoc {
    fn from_desc(desc: &FieldDescriptor) -> Self {
        match desc {
            FieldDescriptor::Rational => DescriptorDoc::Rational {},
            FieldDescriptor::Prime(p) => DescriptorDoc::Prime { p: *p },
            FieldDescriptor::Quadratic(ext) => DescriptorDoc::Quadratic {
                base: Box::new(DescriptorDoc::from_desc(ext.base())),
                d: ext.d().to_string(),
            },
        }
    }

    fn to_desc(&self) -> Result<FieldDescriptor> {
        match self {
            DescriptorDoc::Rational {} => Ok(FieldDescriptor::Rational),
            DescriptorDoc::Prime { p } => FieldDescriptor::prime(*p),
            DescriptorDoc::Quadratic { base, d } => {
                let base = base.to_desc()?;
                let d = base.parse(d)?;
                FieldDescriptor::quadratic(&base, d)
            }
        }
    }
}

impl Serialize for FieldDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DescriptorDoc::from_desc(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldDescriptor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        DescriptorDoc::deserialize(d)?
            .to_desc()
            .map_err(serde::de::Error::custom)
    }
}

type MatDoc = [[String; 3]; 3];

pub fn mat_to_doc(m: &Mat3) -> MatDoc {
    std::array::from_fn(|i| std::array::from_fn(|j| m.get(i, j).to_string()))
}

pub fn mat_from_doc(desc: &FieldDescriptor, doc: &MatDoc) -> Result<Mat3> {
    let mut rows: [[FieldValue; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| desc.zero()));
    for (i, row) in doc.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            rows[i][j] = desc.parse(s)?;
        }
    }
    Mat3::from_rows(rows)
}

fn check_schema(schema: &str) -> Result<()> {
    if schema != SCHEMA {
        return Err(Error::Schema(format!("expected schema {SCHEMA:?}, got {schema:?}")));
    }
    Ok(())
}

/// `M` is either one of the fixed labels or an explicit spanning list.
#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(untagged)]
pub enum MDoc {
    Label(MLabel),
    Span(Vec<MatDoc>),
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
pub struct DecompositionDoc {
    pub schema: String,
    pub field: FieldDescriptor,
    #[serde(rename = "S")]
    pub s: Vec<MatDoc>,
    #[serde(rename = "M")]
    pub m: MDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<CanonLabel>,
    /// The map that produced this decomposition, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub automorphism: Option<Value>,
}

impl DecompositionDoc {
    pub fn parse(text: &str) -> Result<Self> {
        let doc: DecompositionDoc = serde_json::from_str(text)?;
        check_schema(&doc.schema)?;
        Ok(doc)
    }

    pub fn from_decomposition(d: &Decomposition) -> Self {
        let m = match d.m_label() {
            Some(l) => MDoc::Label(l),
            None => MDoc::Span(d.m().basis().iter().map(mat_to_doc).collect()),
        };
        DecompositionDoc {
            schema: SCHEMA.into(),
            field: d.descriptor().clone(),
            s: d.s().basis().iter().map(mat_to_doc).collect(),
            m,
            label: d.label_hint(),
            automorphism: None,
        }
    }

    pub fn subalgebras(&self) -> Result<(Subalgebra, Subalgebra)> {
        let desc = &self.field;
        let s: Vec<Mat3> = self.s.iter().map(|m| mat_from_doc(desc, m)).collect::<Result<_>>()?;
        let s = Subalgebra::new(desc, &s)?;
        let m = match &self.m {
            MDoc::Label(l) => l.subalgebra(desc),
            MDoc::Span(ms) => {
                let ms: Vec<Mat3> = ms.iter().map(|m| mat_from_doc(desc, m)).collect::<Result<_>>()?;
                Subalgebra::new(desc, &ms)?
            }
        };
        Ok((s, m))
    }

    pub fn report(&self) -> Result<DecompositionReport> {
        let (s, m) = self.subalgebras()?;
        check_decomposition(&s, &m)
    }

    pub fn decomposition(&self) -> Result<Decomposition> {
        let (s, m) = self.subalgebras()?;
        Ok(validate_decomposition(s, m)?.with_label_hint(self.label))
    }
}

pub fn decomposition_to_json(d: &Decomposition) -> Value {
    serde_json::to_value(DecompositionDoc::from_decomposition(d)).expect("serializable")
}

pub fn decomposition_from_json(text: &str) -> Result<Decomposition> {
    DecompositionDoc::parse(text)?.decomposition()
}

fn scalars(values: &[&FieldValue]) -> Vec<String> {
    values.iter().map(|v| v.to_string()).collect()
}

pub fn autospec_to_json(a: &AutoSpec) -> Value {
    match a {
        AutoSpec::Conjugation(t) => json!({"type": "conjugation", "T": mat_to_doc(t)}),
        AutoSpec::Transpose => json!({"type": "transpose"}),
        AutoSpec::ThetaSwap(i, j) => json!({"type": "theta", "i": i, "j": j}),
        AutoSpec::FamilyM6(f) => {
            let [beta, gamma, kappa, lambda, mu, nu] = scalars(&f.params()).try_into().expect("six parameters");
            json!({"type": "family_m6", "beta": beta, "gamma": gamma, "kappa": kappa,
                   "lambda": lambda, "mu": mu, "nu": nu})
        }
        AutoSpec::FamilyU(f) => {
            let [alpha, beta, gamma, delta, epsilon] = scalars(&f.params()).try_into().expect("five parameters");
            json!({"type": "family_u", "alpha": alpha, "beta": beta, "gamma": gamma,
                   "delta": delta, "epsilon": epsilon})
        }
        AutoSpec::Composite(parts) => Value::Array(parts.iter().map(autospec_to_json).collect()),
        AutoSpec::Inverse(inner) => json!({"type": "inverse", "of": autospec_to_json(inner)}),
    }
}

fn take_object<'a>(v: &'a Value, allowed: &[&str]) -> Result<&'a Map<String, Value>> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Schema(format!("expected an automorphism object, got {v}")))?;
    if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::Schema(format!("unknown field {k:?} in automorphism")));
    }
    Ok(obj)
}

fn scalar_field(obj: &Map<String, Value>, key: &str, desc: &FieldDescriptor) -> Result<FieldValue> {
    let s = obj
        .get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Schema(format!("missing scalar {key:?}")))?;
    desc.parse(s)
}

fn index_field(obj: &Map<String, Value>, key: &str) -> Result<usize> {
    obj.get(key)
        .and_then(Value::as_u64)
        .map(|x| x as usize)
        .ok_or_else(|| Error::Schema(format!("missing index {key:?}")))
}

pub fn autospec_from_json(v: &Value, desc: &FieldDescriptor) -> Result<AutoSpec> {
    if let Value::Array(parts) = v {
        return Ok(AutoSpec::Composite(
            parts
                .iter()
                .map(|p| autospec_from_json(p, desc))
                .collect::<Result<_>>()?,
        ));
    }
    let kind = v
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Schema(format!("automorphism without a type: {v}")))?;
    match kind {
        "conjugation" => {
            let obj = take_object(v, &["type", "T"])?;
            let t: MatDoc = serde_json::from_value(obj.get("T").cloned().unwrap_or(Value::Null))?;
            AutoSpec::conjugation(mat_from_doc(desc, &t)?)
        }
        "transpose" => {
            take_object(v, &["type"])?;
            Ok(AutoSpec::Transpose)
        }
        "theta" => {
            let obj = take_object(v, &["type", "i", "j"])?;
            AutoSpec::theta(index_field(obj, "i")?, index_field(obj, "j")?)
        }
        "family_m6" => {
            let keys = ["beta", "gamma", "kappa", "lambda", "mu", "nu"];
            let obj = take_object(v, &["type", "beta", "gamma", "kappa", "lambda", "mu", "nu"])?;
            let p: Vec<FieldValue> = keys.iter().map(|k| scalar_field(obj, k, desc)).collect::<Result<_>>()?;
            let [b, g, k, l, m, n]: [FieldValue; 6] = p.try_into().expect("six");
            Ok(AutoSpec::FamilyM6(FamilyM6::new(b, g, k, l, m, n)?))
        }
        "family_u" => {
            let keys = ["alpha", "beta", "gamma", "delta", "epsilon"];
            let obj = take_object(v, &["type", "alpha", "beta", "gamma", "delta", "epsilon"])?;
            let p: Vec<FieldValue> = keys.iter().map(|k| scalar_field(obj, k, desc)).collect::<Result<_>>()?;
            let [a, b, g, d, e]: [FieldValue; 5] = p.try_into().expect("five");
            Ok(AutoSpec::FamilyU(FamilyU::new(a, b, g, d, e)?))
        }
        "inverse" => {
            let obj = take_object(v, &["type", "of"])?;
            let inner = obj
                .get("of")
                .ok_or_else(|| Error::Schema("inverse without \"of\"".into()))?;
            Ok(AutoSpec::Inverse(Box::new(autospec_from_json(inner, desc)?)))
        }
        other => Err(Error::Schema(format!("unknown automorphism type {other:?}"))),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CanonDoc {
    schema: String,
    label: CanonLabel,
    transforms: Vec<Value>,
    extension: Option<String>,
    antiauto: bool,
    field: FieldDescriptor,
}

pub fn canon_result_to_json(r: &CanonResult) -> Value {
    serde_json::to_value(CanonDoc {
        schema: SCHEMA.into(),
        label: r.label,
        transforms: r.transforms.iter().map(autospec_to_json).collect(),
        extension: r.extension.as_ref().map(ToString::to_string),
        antiauto: r.used_antiauto,
        field: r.field.clone(),
    })
    .expect("serializable")
}

pub fn canon_result_from_json(text: &str) -> Result<CanonResult> {
    let doc: CanonDoc = serde_json::from_str(text)?;
    check_schema(&doc.schema)?;
    let extension = match (&doc.extension, &doc.field) {
        (Some(s), FieldDescriptor::Quadratic(ext)) => Some(ext.base().parse(s)?),
        (Some(_), _) => return Err(Error::Schema("extension recorded over a non-quadratic field".into())),
        (None, _) => None,
    };
    Ok(CanonResult {
        label: doc.label,
        transforms: doc
            .transforms
            .iter()
            .map(|t| autospec_from_json(t, &doc.field))
            .collect::<Result<_>>()?,
        extension,
        used_antiauto: doc.antiauto,
        field: doc.field,
    })
}

pub fn fingerprint_to_json(fp: &Fingerprint, label: Option<CanonLabel>) -> Value {
    let mut v = serde_json::to_value(fp).expect("serializable");
    let obj = v.as_object_mut().expect("object");
    obj.insert("schema".into(), json!(SCHEMA));
    if let Some(l) = label {
        obj.insert("label".into(), json!(l));
    }
    v
}

pub fn fingerprint_from_json(text: &str) -> Result<(Fingerprint, Option<CanonLabel>)> {
    let mut v: Value = serde_json::from_str(text)?;
    let obj = v
        .as_object_mut()
        .ok_or_else(|| Error::Schema("fingerprint must be an object".into()))?;
    let schema = obj
        .remove("schema")
        .and_then(|s| s.as_str().map(String::from))
        .unwrap_or_default();
    check_schema(&schema)?;
    let label = match obj.remove("label") {
        Some(l) => Some(serde_json::from_value(l)?),
        None => None,
    };
    Ok((serde_json::from_value(v)?, label))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RbDoc {
    schema: String,
    field: FieldDescriptor,
    weight: String,
    source: Option<CanonLabel>,
    matrix: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    verified: Option<bool>,
}

pub fn rb_to_json(r: &RBOperator, verified: Option<bool>) -> Value {
    serde_json::to_value(RbDoc {
        schema: SCHEMA.into(),
        field: r.descriptor(),
        weight: r.weight.to_string(),
        source: r.source,
        matrix: r
            .matrix
            .rows()
            .iter()
            .map(|row| row.iter().map(ToString::to_string).collect())
            .collect(),
        verified,
    })
    .expect("serializable")
}

pub fn rb_from_json(text: &str) -> Result<RBOperator> {
    rb_from_value(serde_json::from_str(text)?)
}

pub fn rb_from_value(v: Value) -> Result<RBOperator> {
    let doc: RbDoc = serde_json::from_value(v)?;
    check_schema(&doc.schema)?;
    let rows: Vec<Vec<FieldValue>> = doc
        .matrix
        .iter()
        .map(|row| row.iter().map(|s| doc.field.parse(s)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    if rows.len() != 9 || rows.iter().any(|r| r.len() != 9) {
        return Err(Error::Schema("operator matrix must be 9x9".into()));
    }
    RBOperator::new(Matrix::from_rows(rows), doc.field.parse(&doc.weight)?, doc.source)
}

pub fn search_report_to_json(r: &SearchReport) -> Value {
    let hist = |h: &BTreeMap<CanonLabel, u64>| -> BTreeMap<String, u64> {
        h.iter().map(|(l, c)| (l.to_string(), *c)).collect()
    };
    json!({
        "schema": SCHEMA,
        "field": r.field,
        "m_label": r.m_label,
        "candidates_scanned": r.candidates_scanned,
        "valid_decompositions": r.valid_decompositions,
        "unital_skipped": r.unital_skipped,
        "label_histogram": hist(&r.label_histogram),
        "extension_required": r.extension_required,
        "extension_resolved": hist(&r.extension_resolved),
        "failures": r.failures,
        "clean": r.is_clean(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{canonicalize, catalog_entry, scramble};
    use crate::fingerprint::fingerprint;
    use crate::rota::rb_from_splitting;

    #[test]
    fn descriptor_round_trip() {
        let q = FieldDescriptor::Rational;
        let f7 = FieldDescriptor::prime(7).unwrap();
        let q2 = q.extend_with_sqrt(&q.from_i64(2)).unwrap();
        let tower = q2.extend_with_sqrt(&q2.sqrt_generator().unwrap()).unwrap();
        for d in [q, f7, q2, tower] {
            let v = serde_json::to_value(&d).unwrap();
            let back: FieldDescriptor = serde_json::from_value(v).unwrap();
            assert_eq!(back, d);
        }
        assert_eq!(
            serde_json::to_value(FieldDescriptor::prime(5).unwrap()).unwrap(),
            json!({"kind": "prime", "p": 5})
        );
        assert!(serde_json::from_value::<FieldDescriptor>(json!({"kind": "prime", "p": 6})).is_err());
        assert!(serde_json::from_value::<FieldDescriptor>(json!({"kind": "rational", "x": 1})).is_err());
    }

    #[test]
    fn decomposition_round_trip() {
        let d = catalog_entry(CanonLabel::B4, &FieldDescriptor::Rational);
        let text = decomposition_to_json(&d).to_string();
        let back = decomposition_from_json(&text).unwrap();
        assert_eq!(back.s().space(), d.s().space());
        assert_eq!(back.label_hint(), Some(CanonLabel::B4));
        let mut v: Value = serde_json::from_str(&text).unwrap();
        v["extra"] = json!(1);
        assert!(decomposition_from_json(&v.to_string()).is_err());
        v.as_object_mut().unwrap().remove("extra");
        v["schema"] = json!("matdecomp/0");
        assert!(matches!(decomposition_from_json(&v.to_string()), Err(Error::Schema(_))));
    }

    #[test]
    fn explicit_m_span_is_accepted() {
        let d = catalog_entry(CanonLabel::A1, &FieldDescriptor::Rational);
        let mut v = decomposition_to_json(&d);
        v["M"] = serde_json::to_value(d.m().basis().iter().map(mat_to_doc).collect::<Vec<_>>()).unwrap();
        let back = decomposition_from_json(&v.to_string()).unwrap();
        assert_eq!(back.m_label(), Some(MLabel::M6));
    }

    #[test]
    fn canon_result_round_trip() {
        for l in [CanonLabel::A3, CanonLabel::B4, CanonLabel::B9] {
            let (d, a) = scramble(l, 11);
            let r = canonicalize(&d).unwrap();
            let back = canon_result_from_json(&canon_result_to_json(&r).to_string()).unwrap();
            assert_eq!(back, r);
            let a_back = autospec_from_json(&autospec_to_json(&a), &FieldDescriptor::Rational).unwrap();
            assert_eq!(a_back, a);
        }
    }

    #[test]
    fn extension_result_round_trip() {
        let q = FieldDescriptor::Rational;
        let e = |i, j| Mat3::unit(&q, i, j);
        let s = Subalgebra::new(
            &q,
            &[
                e(2, 1),
                e(3, 1),
                &e(3, 2) + &e(2, 3).scale(&q.from_i64(3)),
                &e(2, 2) + &e(3, 3),
            ],
        )
        .unwrap();
        let d = validate_decomposition(s, MLabel::M5a.subalgebra(&q)).unwrap();
        let r = canonicalize(&d).unwrap();
        assert_eq!(r.extension, Some(q.from_i64(3)));
        let back = canon_result_from_json(&canon_result_to_json(&r).to_string()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn fingerprint_and_rb_round_trip() {
        let d = catalog_entry(CanonLabel::B5, &FieldDescriptor::Rational);
        let fp = fingerprint(d.s()).unwrap();
        let (back, label) = fingerprint_from_json(&fingerprint_to_json(&fp, Some(CanonLabel::B5)).to_string()).unwrap();
        assert_eq!(back, fp);
        assert_eq!(label, Some(CanonLabel::B5));
        let r = rb_from_splitting(&d, &FieldDescriptor::Rational.from_i64(5)).unwrap();
        let back = rb_from_json(&rb_to_json(&r, Some(true)).to_string()).unwrap();
        assert_eq!(back, r);
    }
}
