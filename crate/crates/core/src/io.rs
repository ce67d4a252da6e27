//! JSON tensor documents:
//! `{"n", "p", "q", "mode", "rank", "components"}` with components flattened
//! row-major, as `"num/den"` strings in exact mode and numbers in float mode.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::scalar::{Mode, Rational, Scalar};
use crate::tensor::{Bilinear, Curv4, Model, Tensor};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TensorDoc {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub mode: Mode,
    pub rank: usize,
    pub components: Vec<Value>,
}

/// A tensor read from disk, in whichever mode the document declared.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyTensor {
    Exact(Tensor<Rational>),
    Float(Tensor<f64>),
}

impl AnyTensor {
    pub fn model(&self) -> Model {
        match self {
            AnyTensor::Exact(t) => t.model(),
            AnyTensor::Float(t) => t.model(),
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            AnyTensor::Exact(_) => Mode::Exact,
            AnyTensor::Float(_) => Mode::Float,
        }
    }
}

pub fn to_doc<S: Scalar>(t: &Tensor<S>) -> TensorDoc {
    let model = t.model();
    let (p, q) = model.signature();
    TensorDoc {
        n: model.n(),
        p,
        q,
        mode: S::MODE,
        rank: t.rank(),
        components: t.components().iter().map(|c| c.to_json()).collect(),
    }
}

pub fn to_value<S: Scalar>(t: &Tensor<S>) -> Value {
    serde_json::to_value(to_doc(t)).expect("tensor documents serialize")
}

pub fn curv4_value<S: Scalar>(a: &Curv4<S>) -> Value {
    to_value(&Tensor::Curv4(a.clone()))
}

pub fn bilinear_value<S: Scalar>(b: &Bilinear<S>) -> Value {
    to_value(&Tensor::Bilinear(b.clone()))
}

pub fn to_json_string<S: Scalar>(t: &Tensor<S>) -> String {
    serde_json::to_string_pretty(&to_doc(t)).expect("tensor documents serialize")
}

fn parse_components<S: Scalar>(doc: &TensorDoc, model: Model) -> Result<Tensor<S>> {
    let c = doc
        .components
        .iter()
        .enumerate()
        .map(|(i, v)| {
            S::from_json(v).ok_or_else(|| Error::Format(format!("component {i} is not a valid {} scalar: {v}", S::MODE)))
        })
        .collect::<Result<Vec<S>>>()?;
    match doc.rank {
        2 => Ok(Tensor::Bilinear(Bilinear::from_components(model, c)?)),
        4 => Ok(Tensor::Curv4(Curv4::from_components(model, c)?)),
        r => Err(Error::Format(format!("rank must be 2 or 4, got {r}"))),
    }
}

pub fn from_doc(doc: &TensorDoc) -> Result<AnyTensor> {
    let model = Model::new(doc.n, doc.p, doc.q)?;
    let expected = doc.n.pow(doc.rank as u32);
    if matches!(doc.rank, 2 | 4) && doc.components.len() != expected {
        return Err(Error::Format(format!(
            "expected {expected} components for rank {} in dimension {}, got {}",
            doc.rank,
            doc.n,
            doc.components.len()
        )));
    }
    Ok(match doc.mode {
        Mode::Exact => AnyTensor::Exact(parse_components(doc, model)?),
        Mode::Float => AnyTensor::Float(parse_components(doc, model)?),
    })
}

pub fn from_json_str(s: &str) -> Result<AnyTensor> {
    let doc: TensorDoc = serde_json::from_str(s)?;
    from_doc(&doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{h_wedge_h, random_in, Seed};
    use crate::tensor::SpaceTag;

    #[test]
    fn roundtrip_both_modes() {
        let m = Model::lorentzian(4).unwrap();
        let t = random_in::<Rational>(SpaceTag::Weyl, m, Seed(3));
        let back = from_json_str(&to_json_string(&t)).unwrap();
        assert_eq!(back, AnyTensor::Exact(t));
        let f = random_in::<f64>(SpaceTag::Alt, m, Seed(3));
        let back = from_json_str(&to_json_string(&f)).unwrap();
        assert_eq!(back, AnyTensor::Float(f));
    }

    #[test]
    fn exact_components_are_strings() {
        let m = Model::euclidean(3).unwrap();
        let v = curv4_value(&h_wedge_h::<Rational>(m));
        assert_eq!(v["mode"], "exact");
        assert_eq!(v["rank"], 4);
        assert!(v["components"].as_array().unwrap().iter().all(Value::is_string));
    }

    #[test]
    fn rejects_malformed() {
        let bad_len = r#"{"n":3,"p":0,"q":3,"mode":"float","rank":2,"components":[1,2]}"#;
        assert!(matches!(from_json_str(bad_len), Err(Error::Format(_))));
        let bad_sig = r#"{"n":3,"p":1,"q":1,"mode":"float","rank":2,"components":[]}"#;
        assert!(matches!(from_json_str(bad_sig), Err(Error::SignatureMismatch { .. })));
        let bad_val = r#"{"n":3,"p":0,"q":3,"mode":"exact","rank":2,"components":["1/0","0","0","0","0","0","0","0","0"]}"#;
        assert!(matches!(from_json_str(bad_val), Err(Error::Format(_))));
        assert!(matches!(from_json_str("{"), Err(Error::Json(_))));
    }
}
