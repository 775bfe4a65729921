//! Signatures of cocompact Fuchsian groups and their Riemann-Hurwitz data.
//!
//! A signature `(h; m_1, ..., m_r)` is stored with its periods sorted
//! ascending. The measure `2h - 2 + sum(1 - 1/m_i)` is the central
//! quantity: a group `G` covered by the signature acts on genus `g` with
//! `|G| = (2 / measure) * (g - 1)`.

mod abelian;
mod enumerate;
pub mod snf;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::ExactRational;

pub use abelian::{
    abelianization, admits_cyclic_quotient, image_order_in_abelianization, kernel_signature,
    AbelianInvariants,
};
pub use enumerate::{
    divisor_periods, enumerate_signatures_above_ratio,
    enumerate_signatures_above_ratio_with_quotient, enumerate_signatures_for,
};
pub use snf::{int_matrix, smith_normal_form, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("period {0} is smaller than 2")]
    InvalidPeriod(u64),
    #[error("signature {0} is not hyperbolic (measure {1})")]
    NonHyperbolic(Signature, ExactRational),
    #[error("order {order} does not give an integral genus for {signature}")]
    NonIntegralGenus { signature: Signature, order: u64 },
    #[error("order {order} on {signature} gives genus {genus}, below 2")]
    GenusTooSmall {
        signature: Signature,
        order: u64,
        genus: i128,
    },
    #[error("threshold {0} must exceed 4: the set of signatures above it is infinite")]
    ThresholdTooLow(ExactRational),
    #[error("infinite family (0; {prefix:?}, x) stays above threshold {threshold} as x grows")]
    InfiniteFamily {
        prefix: Vec<u64>,
        threshold: ExactRational,
    },
    #[error("inconsistent kernel data: {0}")]
    InconsistentData(String),
    #[error("period index {index} out of range for {signature}")]
    IndexOutOfRange { signature: Signature, index: usize },
    #[error("malformed signature: {0}")]
    Parse(String),
}

/// Orbit genus `h` plus the multiset of periods, sorted ascending.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Signature {
    h: u64,
    periods: Vec<u64>,
}

impl Signature {
    pub fn new(h: u64, mut periods: Vec<u64>) -> Result<Self, SignatureError> {
        if let Some(&p) = periods.iter().find(|&&p| p < 2) {
            return Err(SignatureError::InvalidPeriod(p));
        }
        periods.sort_unstable();
        Ok(Signature { h, periods })
    }

    /// Genus-zero signature; panics on a period below 2.
    pub fn triangle_like(periods: &[u64]) -> Self {
        Signature::new(0, periods.to_vec()).expect("periods must be >= 2")
    }

    pub fn h(&self) -> u64 {
        self.h
    }

    pub fn periods(&self) -> &[u64] {
        &self.periods
    }

    pub fn r(&self) -> usize {
        self.periods.len()
    }

    /// `2h - 2 + sum(1 - 1/m_i)`.
    pub fn measure(&self) -> ExactRational {
        let mut mu = ExactRational::from_integer(2 * self.h as i64 - 2);
        for &m in &self.periods {
            mu = mu + ExactRational::new(m as i64 - 1, m as i64);
        }
        mu
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.measure().is_positive()
    }

    /// `2 / measure`: the coefficient `c` in `|G| = c (g - 1)`.
    pub fn order_multiplier(&self) -> Result<ExactRational, SignatureError> {
        let mu = self.measure();
        if !mu.is_positive() {
            return Err(SignatureError::NonHyperbolic(self.clone(), mu));
        }
        Ok(ExactRational::from_integer(2) / mu)
    }

    /// Genus `1 + order * measure / 2` of the surface carrying an action of
    /// a group of the given order with this signature.
    pub fn genus_of_action(&self, order: u64) -> Result<u64, SignatureError> {
        let mu = self.measure();
        if !mu.is_positive() {
            return Err(SignatureError::NonHyperbolic(self.clone(), mu));
        }
        let g = ExactRational::one() + ExactRational::from(order) * mu / ExactRational::from(2u64);
        let Some(g) = g.to_integer() else {
            return Err(SignatureError::NonIntegralGenus {
                signature: self.clone(),
                order,
            });
        };
        let g = i128::try_from(&g).expect("genus fits in i128");
        if g < 2 {
            return Err(SignatureError::GenusTooSmall {
                signature: self.clone(),
                order,
                genus: g,
            });
        }
        Ok(g as u64)
    }
}

pub fn measure(sig: &Signature) -> ExactRational {
    sig.measure()
}

pub fn order_multiplier(sig: &Signature) -> Result<ExactRational, SignatureError> {
    sig.order_multiplier()
}

pub fn genus_of_action(sig: &Signature, order: u64) -> Result<u64, SignatureError> {
    sig.genus_of_action(order)
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};", self.h)?;
        if self.periods.is_empty() {
            write!(f, " -")?;
        }
        for (i, m) in self.periods.iter().enumerate() {
            write!(f, "{}{}", if i == 0 { " " } else { "," }, m)?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `"(0;2,3,7)"`, `"0;2,3,7"` or `"(1;-)"`.
impl FromStr for Signature {
    type Err = SignatureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let (h, rest) = body
            .split_once(';')
            .ok_or_else(|| SignatureError::Parse(s.to_string()))?;
        let h = h
            .trim()
            .parse()
            .map_err(|_| SignatureError::Parse(s.to_string()))?;
        let rest = rest.trim();
        let periods = if rest.is_empty() || rest == "-" {
            Vec::new()
        } else {
            rest.split(',')
                .map(|p| p.trim().parse::<u64>())
                .collect::<Result<_, _>>()
                .map_err(|_| SignatureError::Parse(s.to_string()))?
        };
        Signature::new(h, periods)
    }
}

#[derive(Deserialize)]
struct RawSignature {
    h: u64,
    periods: Vec<u64>,
}

impl<'de> Deserialize<'de> for Signature {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawSignature::deserialize(d)?;
        Signature::new(raw.h, raw.periods).map_err(serde::de::Error::custom)
    }
}
