use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Iterative schemes for the ridge primal-dual gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Relaxed iteration on the separable (block-diagonal) system.
    Pdfp1,
    /// Relaxed iteration on the coupled system.
    Pdfp2,
    /// Gauss-Seidel ordered iteration: primal block first, dual block uses
    /// the fresh primal iterate.
    Qtz,
    /// Gauss-Seidel ordered iteration with the dual block updated first.
    Nqtz,
    /// Unrelaxed primal update followed by a relaxed dual update.
    Mqtz,
    /// Unrelaxed dual update followed by a relaxed primal update.
    Mqtz2,
    /// Conjugate gradient on the gap quadratic.
    Cg,
}

/// Which closed-form rate governs a method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RateFamily {
    Separable,
    Coupled,
    GaussSeidel,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Pdfp1,
        Method::Pdfp2,
        Method::Qtz,
        Method::Nqtz,
        Method::Mqtz,
        Method::Mqtz2,
        Method::Cg,
    ];

    /// The fixed-point schemes, i.e. everything except CG.
    pub const FIXED_POINT: [Method; 6] = [
        Method::Pdfp1,
        Method::Pdfp2,
        Method::Qtz,
        Method::Nqtz,
        Method::Mqtz,
        Method::Mqtz2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Pdfp1 => "pdfp1",
            Method::Pdfp2 => "pdfp2",
            Method::Qtz => "qtz",
            Method::Nqtz => "nqtz",
            Method::Mqtz => "mqtz",
            Method::Mqtz2 => "mqtz2",
            Method::Cg => "cg",
        }
    }

    /// The spectral family whose rate formula applies; `None` for CG.
    ///
    /// Both reordered modified schemes share the separable system's spectrum,
    /// and the dual-first Gauss-Seidel scheme shares the primal-first one's.
    pub fn rate_family(self) -> Option<RateFamily> {
        match self {
            Method::Pdfp1 | Method::Mqtz | Method::Mqtz2 => Some(RateFamily::Separable),
            Method::Pdfp2 => Some(RateFamily::Coupled),
            Method::Qtz | Method::Nqtz => Some(RateFamily::GaussSeidel),
            Method::Cg => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        Method::ALL
            .into_iter()
            .find(|m| m.name() == lower)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown method '{s}' (expected one of pdfp1, pdfp2, qtz, nqtz, mqtz, mqtz2, cg)"
                ))
            })
    }
}
