//! Canonical JSON for [`PolyDiffOp`]:
//! `{"variables": [...], "terms": [{"poly": [...], "deriv": [...], "re": "...", "im": "..."}]}`.

use serde::{Deserialize, Serialize};

use super::op::{Coeff, Monomial, PolyDiffOp};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub poly: Vec<u32>,
    pub deriv: Vec<u32>,
    pub re: String,
    pub im: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyDiffOpDoc {
    pub variables: Vec<String>,
    pub terms: Vec<TermDoc>,
}

const MAX_EXPONENT: u32 = 64;

impl PolyDiffOpDoc {
    pub fn from_op<C: Coeff>(op: &PolyDiffOp<C>) -> Self {
        Self {
            variables: op.vars().to_vec(),
            terms: op
                .terms()
                .iter()
                .map(|(m, c)| {
                    let (re, im) = c.to_text();
                    TermDoc { poly: m.poly.clone(), deriv: m.deriv.clone(), re, im }
                })
                .collect(),
        }
    }

    pub fn to_op<C: Coeff>(&self) -> Result<PolyDiffOp<C>> {
        let k = self.variables.len();
        for (i, v) in self.variables.iter().enumerate() {
            if self.variables[..i].contains(v) {
                return Err(Error::Parse(format!("duplicate variable {v:?}")));
            }
        }
        let mut op = PolyDiffOp::zero(self.variables.clone());
        for t in &self.terms {
            if t.poly.len() != k || t.deriv.len() != k {
                return Err(Error::Parse(format!("term exponents must have length {k}")));
            }
            if t.poly.iter().chain(&t.deriv).any(|&e| e > MAX_EXPONENT) {
                return Err(Error::Parse(format!("exponent above {MAX_EXPONENT}")));
            }
            let m = Monomial { poly: t.poly.clone(), deriv: t.deriv.clone() };
            op.add_term(m, C::from_text(&t.re, &t.im)?);
        }
        Ok(op)
    }
}

pub fn polydiffop_to_json<C: Coeff>(op: &PolyDiffOp<C>) -> String {
    serde_json::to_string_pretty(&PolyDiffOpDoc::from_op(op)).expect("serializable")
}

pub fn polydiffop_from_json<C: Coeff>(s: &str) -> Result<PolyDiffOp<C>> {
    serde_json::from_str::<PolyDiffOpDoc>(s)?.to_op()
}
