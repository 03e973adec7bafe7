//! Canonical JSON documents for algebras and enveloping polynomials.
//!
//! Rationals are written as `"p/q"` text (or `"p"` for integers) so documents
//! round-trip exactly.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::algebra::GradedLieAlgebra;
use super::enveloping::EnvelopingPolynomial;
use crate::error::{Error, Result};
use crate::exact::{cq, format_q, parse_q, CQ};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub basis: Vec<String>,
    pub degrees: Vec<u32>,
    /// `[a, b, c, "p/q"]` meaning `[a, b]` has coefficient `p/q` on `c`; only `a < b`
    /// (in basis order) is emitted.
    pub structure: Vec<(String, String, String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexRationalDoc {
    pub re: String,
    pub im: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WordTermDoc {
    pub word: Vec<String>,
    pub coeff: ComplexRationalDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvelopingDoc {
    pub algebra: AlgebraDoc,
    pub terms: Vec<WordTermDoc>,
}

impl ComplexRationalDoc {
    pub fn from_cq(z: &CQ) -> Self {
        Self { re: format_q(&z.re), im: format_q(&z.im) }
    }

    pub fn to_cq(&self) -> Result<CQ> {
        Ok(cq(parse_q(&self.re)?, parse_q(&self.im)?))
    }
}

impl AlgebraDoc {
    pub fn from_algebra(g: &GradedLieAlgebra) -> Self {
        let names = g.names();
        Self {
            basis: names.to_vec(),
            degrees: g.degrees().to_vec(),
            structure: g
                .structure_triples()
                .map(|(a, b, c, v)| (names[a].clone(), names[b].clone(), names[c].clone(), format_q(v)))
                .collect(),
        }
    }

    pub fn to_algebra(&self) -> Result<GradedLieAlgebra> {
        let index = |n: &str| {
            self.basis.iter().position(|b| b == n).ok_or_else(|| Error::UnknownGenerator(n.to_string()))
        };
        let triples = self
            .structure
            .iter()
            .map(|(a, b, c, v)| Ok((index(a)?, index(b)?, index(c)?, parse_q(v)?)))
            .collect::<Result<Vec<_>>>()?;
        GradedLieAlgebra::new(self.basis.clone(), self.degrees.clone(), triples)
    }
}

impl EnvelopingDoc {
    pub fn from_polynomial(p: &EnvelopingPolynomial) -> Self {
        let g = p.algebra();
        Self {
            algebra: AlgebraDoc::from_algebra(g),
            terms: p
                .terms()
                .iter()
                .map(|(w, c)| WordTermDoc {
                    word: w.iter().map(|&i| g.names()[i].clone()).collect(),
                    coeff: ComplexRationalDoc::from_cq(c),
                })
                .collect(),
        }
    }

    pub fn to_polynomial(&self) -> Result<EnvelopingPolynomial> {
        let g = Arc::new(self.algebra.to_algebra()?);
        let mut p = EnvelopingPolynomial::zero(g.clone());
        for t in &self.terms {
            let w = t.word.iter().map(|n| g.index_of(n)).collect::<Result<Vec<_>>>()?;
            p.add_term(w, t.coeff.to_cq()?);
        }
        Ok(p)
    }
}

pub fn algebra_to_json(g: &GradedLieAlgebra) -> String {
    serde_json::to_string_pretty(&AlgebraDoc::from_algebra(g)).expect("serializable")
}

pub fn algebra_from_json(s: &str) -> Result<GradedLieAlgebra> {
    serde_json::from_str::<AlgebraDoc>(s)?.to_algebra()
}

pub fn enveloping_to_json(p: &EnvelopingPolynomial) -> String {
    serde_json::to_string_pretty(&EnvelopingDoc::from_polynomial(p)).expect("serializable")
}

pub fn enveloping_from_json(s: &str) -> Result<EnvelopingPolynomial> {
    serde_json::from_str::<EnvelopingDoc>(s)?.to_polynomial()
}
