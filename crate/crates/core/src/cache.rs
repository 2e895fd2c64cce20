//! Versioned on-disk cache of enumeration strata and basis tables, keyed
//! by a fingerprint of the graph presentation. A mismatched version or
//! fingerprint silently invalidates the file.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::elements::FcElement;
use crate::graph::CoxeterGraph;
use crate::laurent::LaurentInt;
use crate::tl::TlContext;
use crate::trace::Trace;

pub const CACHE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize, Default)]
pub struct CacheFile {
    pub version: u32,
    pub fingerprint: String,
    /// Fully commutative strata by length, plus whether enumeration closed.
    pub fc_max_len: Option<usize>,
    pub fc_exhaustive: bool,
    pub fc_strata: Vec<Vec<Trace>>,
    pub ttilde: Vec<(Trace, Vec<(Trace, LaurentInt)>)>,
    pub c: Vec<(Trace, Vec<(Trace, LaurentInt)>)>,
}

impl CacheFile {
    pub fn new(g: &CoxeterGraph) -> Self {
        CacheFile {
            version: CACHE_VERSION,
            fingerprint: g.fingerprint(),
            ..Default::default()
        }
    }

    pub fn path_for(dir: &Path, g: &CoxeterGraph) -> PathBuf {
        dir.join(format!("coxstar-{}.json", g.fingerprint()))
    }

    /// Load the cache for this graph, ignoring missing, unreadable, or
    /// mismatched files.
    pub fn load(dir: &Path, g: &CoxeterGraph) -> Option<CacheFile> {
        let raw = fs::read_to_string(Self::path_for(dir, g)).ok()?;
        let parsed: CacheFile = serde_json::from_str(&raw).ok()?;
        (parsed.version == CACHE_VERSION && parsed.fingerprint == g.fingerprint())
            .then_some(parsed)
    }

    pub fn store(&self, dir: &Path, g: &CoxeterGraph) -> io::Result<()> {
        fs::create_dir_all(dir)?;
        let body = serde_json::to_string(self).expect("cache serializes");
        fs::write(Self::path_for(dir, g), body)
    }

    /// Cached strata as elements, when they cover the requested length.
    pub fn fc_elements(&self, max_len: usize) -> Option<(Vec<Vec<FcElement>>, bool)> {
        let cached_len = self.fc_max_len?;
        if cached_len < max_len && !self.fc_exhaustive {
            return None;
        }
        let strata: Vec<Vec<FcElement>> = self
            .fc_strata
            .iter()
            .take(max_len + 1)
            .map(|level| {
                level
                    .iter()
                    .map(|t| FcElement::from_trace_unchecked(t.clone()))
                    .collect()
            })
            .collect();
        let exhaustive = self.fc_exhaustive && self.fc_strata.len() <= max_len + 1;
        Some((strata, exhaustive))
    }

    pub fn set_fc(&mut self, max_len: usize, strata: &[Vec<FcElement>], exhaustive: bool) {
        self.fc_max_len = Some(max_len);
        self.fc_exhaustive = exhaustive;
        self.fc_strata = strata
            .iter()
            .map(|level| level.iter().map(|w| w.trace().clone()).collect())
            .collect();
    }

    pub fn seed_context(&self, ctx: &TlContext) {
        ctx.seed_ttilde(self.ttilde.clone());
        ctx.seed_c(self.c.clone());
    }

    pub fn absorb_context(&mut self, ctx: &TlContext) {
        self.ttilde = ctx.dump_ttilde();
        self.c = ctx.dump_c();
    }
}
