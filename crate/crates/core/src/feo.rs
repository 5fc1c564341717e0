//! Eccentricity oracle from a distance sensitivity oracle: store every
//! failure-free eccentricity, and answer a query `(s, F)` with
//! `ecc(s) + max_i d(s, y_i, F)` over the failed edge heads `y_i`. With an
//! exact (stretch 1) backing oracle the estimate lies within a factor 2 of
//! the true eccentricity in `G - F`.

use serde::{Deserialize, Serialize};

use crate::dist::{rat_from_str, rat_to_string, Dist, Rat};
use crate::dso::MultiFailureDso;
use crate::error::{Error, Result};
use crate::exact;
use crate::graph::Graph;
use crate::par;

pub struct FeoOracle<'g> {
    ecc0: Vec<Dist>,
    dso: MultiFailureDso<'g>,
    sigma: Rat,
    f: usize,
}

/// Exact multi-failure oracle used as the default backing store.
pub fn build_multi_dso(g: &Graph, f: usize) -> MultiFailureDso<'_> {
    MultiFailureDso::new(g, f)
}

/// Fill the failure-free eccentricities (one single-source sweep per
/// vertex) and retain the backing oracle handle.
pub fn build_feo<'g>(
    g: &'g Graph,
    dso: MultiFailureDso<'g>,
    sigma: Rat,
    f: usize,
) -> Result<FeoOracle<'g>> {
    if dso.sensitivity() < f {
        return Err(Error::InvalidParameter(format!(
            "backing oracle supports {} failures, oracle needs {f}",
            dso.sensitivity()
        )));
    }
    let ecc0 = par::map_range(g.n(), |s| exact::eccentricity(g, s, &[]));
    Ok(FeoOracle {
        ecc0,
        dso,
        sigma,
        f,
    })
}

impl<'g> FeoOracle<'g> {
    pub fn ecc0(&self, s: usize) -> Dist {
        self.ecc0[s]
    }

    pub fn sigma(&self) -> &Rat {
        &self.sigma
    }

    pub fn sensitivity(&self) -> usize {
        self.f
    }

    pub fn dso(&self) -> &MultiFailureDso<'g> {
        &self.dso
    }

    /// `ecc(s) + max_i d(s, head(e_i), F)`; exactly `|F|` backing distance
    /// queries, no short-circuiting. Empty `F` returns the stored
    /// eccentricity directly.
    pub fn query(&self, g: &Graph, s: usize, fails: &[usize]) -> Result<Dist> {
        if s >= g.n() {
            return Err(Error::InvalidVertex(s));
        }
        if fails.len() > self.f {
            return Err(Error::TooManyFailures {
                got: fails.len(),
                max: self.f,
            });
        }
        if fails.is_empty() {
            return Ok(self.ecc0[s]);
        }
        let mut worst = Dist::Finite(0);
        for &e in fails {
            if e >= g.m() {
                return Err(Error::InvalidEdge(e));
            }
            let head = g.edge(e).head;
            worst = worst.max(self.dso.distance(s, head, fails)?);
        }
        Ok(self.ecc0[s] + worst)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FeoFile {
    pub version: u32,
    pub n: usize,
    pub f: usize,
    pub sigma: String,
    pub ecc0: Vec<Dist>,
}

impl<'g> FeoOracle<'g> {
    pub fn to_file(&self, g: &Graph) -> FeoFile {
        FeoFile {
            version: 1,
            n: g.n(),
            f: self.f,
            sigma: rat_to_string(&self.sigma),
            ecc0: self.ecc0.clone(),
        }
    }

    /// Rebuild a queryable oracle from a stored file plus the graph it was
    /// built from (the backing oracle recomputes on demand).
    pub fn from_file(g: &'g Graph, file: &FeoFile) -> Result<FeoOracle<'g>> {
        if file.version != 1 {
            return Err(Error::UnknownVersion(file.version));
        }
        if file.n != g.n() {
            return Err(Error::InvalidParameter(format!(
                "oracle built for n = {}, graph has n = {}",
                file.n,
                g.n()
            )));
        }
        Ok(FeoOracle {
            ecc0: file.ecc0.clone(),
            dso: MultiFailureDso::new(g, file.f),
            sigma: rat_from_str(&file.sigma)?,
            f: file.f,
        })
    }
}
