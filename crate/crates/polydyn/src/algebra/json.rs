//! JSON formats for scalars, polynomials, and affine maps.
//!
//! A polynomial serializes as `{"coeffs": ["p/q", ...]}` (ascending degree)
//! when every coefficient is rational, and as
//! `{"conductor": m, "coeffs": [[..phi(m) rationals..], ...]}` otherwise,
//! with the smallest conductor containing all coefficients. The zero
//! polynomial is `{"coeffs": ["0"]}`. On input, both table forms are
//! accepted, and so is a plain string in the expression syntax of
//! [`super::parse`].

use num::integer::Integer;
use num::rational::BigRational;
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::parse::{parse_poly, parse_scalar};
use super::poly::{AffineMap, Poly};
use super::scalar::Scalar;
use crate::{Error, Result};

fn de_err<E: DeError>(e: Error) -> E {
    E::custom(e.to_string())
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let sc = parse_scalar(s)?;
    sc.as_rational()
        .cloned()
        .ok_or_else(|| Error::Parse(format!("expected a rational number, got {sc}")))
}

#[derive(Serialize)]
struct RationalTable {
    coeffs: Vec<String>,
}

#[derive(Serialize)]
struct CyclotomicTable {
    conductor: u64,
    coeffs: Vec<Vec<String>>,
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_zero() {
            return RationalTable { coeffs: vec!["0".to_string()] }.serialize(s);
        }
        if self.is_rational() {
            let coeffs = self
                .coeffs()
                .iter()
                .map(|c| c.as_rational().unwrap().to_string())
                .collect();
            return RationalTable { coeffs }.serialize(s);
        }
        let mut cond: u64 = 1;
        for c in self.coeffs() {
            cond = cond.lcm(&c.conductor());
        }
        let coeffs = self
            .coeffs()
            .iter()
            .map(|c| {
                c.coords_in(cond)
                    .expect("lcm of conductors contains each coefficient")
                    .iter()
                    .map(|q| q.to_string())
                    .collect()
            })
            .collect();
        CyclotomicTable { conductor: cond, coeffs }.serialize(s)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Atom {
    Int(i64),
    Str(String),
}

impl Atom {
    fn to_rational(&self) -> Result<BigRational> {
        match self {
            Atom::Int(n) => Ok(BigRational::from_integer((*n).into())),
            Atom::Str(s) => parse_rational(s),
        }
    }

    fn to_scalar(&self) -> Result<Scalar> {
        match self {
            Atom::Int(n) => Ok(Scalar::from_int(*n)),
            Atom::Str(s) => parse_scalar(s),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoeffEntry {
    Atom(Atom),
    Coords(Vec<Atom>),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PolyInput {
    Text(String),
    Table {
        conductor: Option<u64>,
        coeffs: Vec<CoeffEntry>,
    },
}

impl PolyInput {
    fn build(self) -> Result<Poly> {
        match self {
            PolyInput::Text(src) => parse_poly(&src),
            PolyInput::Table { conductor, coeffs } => {
                let cond = conductor.unwrap_or(1);
                let mut out = Vec::with_capacity(coeffs.len());
                for entry in &coeffs {
                    let sc = match entry {
                        CoeffEntry::Atom(a) => a.to_scalar()?,
                        CoeffEntry::Coords(v) => {
                            let coords = v
                                .iter()
                                .map(|a| a.to_rational())
                                .collect::<Result<Vec<_>>>()?;
                            Scalar::from_parts(cond, coords)?
                        }
                    };
                    out.push(sc);
                }
                Ok(Poly::from_coeffs(out))
            }
        }
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        PolyInput::deserialize(d)?.build().map_err(de_err)
    }
}

#[derive(Serialize)]
struct ScalarObj {
    conductor: u64,
    coords: Vec<String>,
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if let Some(q) = self.as_rational() {
            return s.serialize_str(&q.to_string());
        }
        ScalarObj {
            conductor: self.conductor(),
            coords: self.coords().iter().map(|q| q.to_string()).collect(),
        }
        .serialize(s)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ScalarInput {
    Int(i64),
    Text(String),
    Obj { conductor: u64, coords: Vec<Atom> },
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match ScalarInput::deserialize(d)? {
            ScalarInput::Int(n) => Ok(Scalar::from_int(n)),
            ScalarInput::Text(s) => parse_scalar(&s).map_err(de_err),
            ScalarInput::Obj { conductor, coords } => {
                let coords = coords
                    .iter()
                    .map(|a| a.to_rational())
                    .collect::<Result<Vec<_>>>()
                    .map_err(de_err)?;
                Scalar::from_parts(conductor, coords).map_err(de_err)
            }
        }
    }
}

impl Serialize for AffineMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_poly().serialize(s)
    }
}

impl<'de> Deserialize<'de> for AffineMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let p = Poly::deserialize(d)?;
        AffineMap::from_poly(&p).map_err(de_err)
    }
}
