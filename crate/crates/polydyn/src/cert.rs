//! Re-checkable certificates. A claim carries a list of polynomial
//! identities written as small expression trees; [`recheck`] re-evaluates
//! both sides of every identity with fresh arithmetic, so a certificate
//! can be verified long after it was produced, by a different process.

use serde::{Deserialize, Serialize};

use crate::algebra::Poly;
use crate::{Error, Result};

/// Expression tree over polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expr {
    /// A literal polynomial.
    Poly(Poly),
    /// Composition, outermost first: `[f, g, h]` means f . g . h.
    Compose(Vec<Expr>),
    /// k-fold self-composition of the base.
    Iterate { base: Box<Expr>, k: u32 },
}

impl Expr {
    pub fn poly(p: &Poly) -> Expr {
        Expr::Poly(p.clone())
    }

    pub fn compose(parts: Vec<Expr>) -> Expr {
        Expr::Compose(parts)
    }

    pub fn iterate(base: Expr, k: u32) -> Expr {
        Expr::Iterate { base: Box::new(base), k }
    }

    /// Evaluates the tree to a single polynomial.
    pub fn eval(&self) -> Result<Poly> {
        match self {
            Expr::Poly(p) => Ok(p.clone()),
            Expr::Compose(parts) => {
                let mut it = parts.iter();
                let first = it
                    .next()
                    .ok_or_else(|| Error::Invalid("empty composition".into()))?;
                let mut acc = first.eval()?;
                for part in it {
                    acc = acc.compose(&part.eval()?)?;
                }
                Ok(acc)
            }
            Expr::Iterate { base, k } => base.eval()?.iterate(*k),
        }
    }
}

/// One claimed equality of two polynomial expressions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Identity {
    pub lhs: Expr,
    pub rhs: Expr,
}

impl Identity {
    pub fn new(lhs: Expr, rhs: Expr) -> Identity {
        Identity { lhs, rhs }
    }

    /// Equality of two literal polynomials.
    pub fn equal(lhs: &Poly, rhs: &Poly) -> Identity {
        Identity::new(Expr::poly(lhs), Expr::poly(rhs))
    }

    pub fn holds(&self) -> Result<bool> {
        Ok(self.lhs.eval()? == self.rhs.eval()?)
    }
}

/// A claim tag, the identities certifying it, and an operation-specific
/// payload.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certificate {
    pub claim: String,
    pub identities: Vec<Identity>,
    pub data: serde_json::Value,
}

impl Certificate {
    pub fn new(claim: &str, identities: Vec<Identity>, data: serde_json::Value) -> Certificate {
        Certificate { claim: claim.to_string(), identities, data }
    }
}

/// Re-verifies every identity exactly; vacuously true for an empty list.
pub fn recheck(cert: &Certificate) -> Result<bool> {
    for identity in &cert.identities {
        if !identity.holds()? {
            return Ok(false);
        }
    }
    Ok(true)
}
