//! Distance values: plain lengths with an infinity tag, exact rationals for
//! stretch parameters, and the perturbed distances that make shortest paths
//! globally unique.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num::bigint::BigUint;
use num::rational::Ratio;
use num::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact nonnegative rational, used for stretch factors and truncation radii.
pub type Rat = Ratio<u128>;

/// A path length that may be infinite. Infinity absorbs addition and compares
/// above every finite value; it is a tagged variant, never a sentinel integer.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Dist {
    Finite(u64),
    Inf,
}

impl Dist {
    pub fn is_finite(self) -> bool {
        matches!(self, Dist::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Dist::Finite(v) => Some(v),
            Dist::Inf => None,
        }
    }

    /// Compare against an exact rational bound; `Inf` exceeds everything.
    pub fn le_rat(self, bound: &Rat) -> bool {
        match self {
            Dist::Finite(v) => Rat::from_integer(v as u128) <= *bound,
            Dist::Inf => false,
        }
    }

    pub fn ge_rat(self, bound: &Rat) -> bool {
        match self {
            Dist::Finite(v) => Rat::from_integer(v as u128) >= *bound,
            Dist::Inf => true,
        }
    }

    pub fn gt_rat(self, bound: &Rat) -> bool {
        match self {
            Dist::Finite(v) => Rat::from_integer(v as u128) > *bound,
            Dist::Inf => true,
        }
    }
}

impl Add for Dist {
    type Output = Dist;

    fn add(self, rhs: Dist) -> Dist {
        match (self, rhs) {
            (Dist::Finite(a), Dist::Finite(b)) => Dist::Finite(a + b),
            _ => Dist::Inf,
        }
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dist::Finite(v) => write!(f, "{v}"),
            Dist::Inf => write!(f, "inf"),
        }
    }
}

impl Serialize for Dist {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Dist::Finite(v) => ser.serialize_u64(*v),
            Dist::Inf => ser.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Dist {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Str(String),
        }
        match Raw::deserialize(de)? {
            Raw::Num(v) => Ok(Dist::Finite(v)),
            Raw::Str(s) if s == "inf" => Ok(Dist::Inf),
            Raw::Str(s) => Err(D::Error::custom(format!("bad distance: {s}"))),
        }
    }
}

/// Render a rational canonically: `p` when integral, `p/q` otherwise.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `p` or `p/q` into an exact rational.
pub fn rat_from_str(s: &str) -> Result<Rat> {
    let parse = |t: &str| -> Result<u128> {
        t.trim()
            .parse::<u128>()
            .map_err(|_| Error::InvalidParameter(format!("bad rational component: {t}")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let (p, q) = (parse(p)?, parse(q)?);
            if q == 0 {
                return Err(Error::InvalidParameter("zero denominator".into()));
            }
            Ok(Rat::new(p, q))
        }
        None => Ok(Rat::from_integer(parse(s)?)),
    }
}

/// Weighted distance plus a tie-breaking perturbation.
///
/// The perturbation is the set of edge ids on the path, packed into an
/// integer so that edge `e` contributes `2^(m-1-e)`; comparing the packed
/// masks as integers is the same as comparing the perturbations
/// `sum 2^-(e+1)` numerically. Two distinct simple paths use distinct edge
/// sets and therefore never compare equal, which makes the minimum unique
/// and automatically prefix/suffix consistent.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PerturbedDist {
    pub base: u64,
    pub mask: BigUint,
}

impl PerturbedDist {
    pub fn zero() -> Self {
        PerturbedDist {
            base: 0,
            mask: BigUint::zero(),
        }
    }

    /// Weight of a path extended by one edge. The edge cannot already be on
    /// the path (paths are simple), so a bit-or is an exact mask addition.
    pub fn extend(&self, weight: u64, mask_bits: usize, edge: usize) -> Self {
        debug_assert!(edge < mask_bits);
        let bit = BigUint::one() << (mask_bits - 1 - edge);
        PerturbedDist {
            base: self.base + weight,
            mask: &self.mask | bit,
        }
    }

    pub fn checked_add(&self, other: &PerturbedDist) -> PerturbedDist {
        PerturbedDist {
            base: self.base + other.base,
            mask: &self.mask + &other.mask,
        }
    }
}

impl PartialOrd for PerturbedDist {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PerturbedDist {
    fn cmp(&self, other: &Self) -> Ordering {
        self.base
            .cmp(&other.base)
            .then_with(|| self.mask.cmp(&other.mask))
    }
}
