//! Serde helpers that write values in their canonical text form.

use std::fmt;

use serde::Serializer;

use crate::scalar::{self, Scalar};

pub fn display<T: fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn display_list<T: fmt::Display, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

pub fn scalar<S: Serializer>(v: &Scalar, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&scalar::format(v))
}

pub fn scalar_list<S: Serializer>(v: &[Scalar], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(scalar::format))
}
