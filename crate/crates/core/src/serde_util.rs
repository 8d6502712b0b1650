//! Serialization of exact numbers as decimal strings.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serializer;

pub fn rational<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn rationals<S: Serializer>(xs: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| x.to_string()))
}

pub fn opt_rationals<S: Serializer>(xs: &Option<Vec<BigRational>>, s: S) -> Result<S::Ok, S::Error> {
    match xs {
        Some(v) => rationals(v, s),
        None => s.serialize_none(),
    }
}

pub fn bigint<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn errors<S: Serializer>(xs: &[crate::Error], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|e| serde_json::json!({"kind": e.kind(), "message": e.to_string()})))
}
