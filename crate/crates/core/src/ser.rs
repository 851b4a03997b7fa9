//! Serialisation helpers: exact rationals are written as strings
//! (`"5/2"`, `"3"`) so consumers never see a rounded float.

use serde::ser::{SerializeSeq, Serializer};

use crate::linalg::Rational;

pub fn rational<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn rational_vec<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

pub fn rational_vec_vec<S: Serializer>(v: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for row in v {
        let strings: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        seq.serialize_element(&strings)?;
    }
    seq.end()
}

pub fn option_rational<S: Serializer>(x: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(x) => s.serialize_some(&x.to_string()),
        None => s.serialize_none(),
    }
}

pub fn option_rational_vec<S: Serializer>(
    x: &Option<Vec<Rational>>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&v.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
        None => s.serialize_none(),
    }
}
