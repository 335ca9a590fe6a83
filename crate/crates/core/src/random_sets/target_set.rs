use std::collections::HashSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::vertex::Vertex;

/// Largest dimension for which a dense membership bitmap is kept.
const DENSE_MAX_DIM: u32 = 26;

/// How a target set came about.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Explicit,
    Percolation { rho: f64, seed: u64 },
    Sampled { size: u64, seed: u64 },
}

#[derive(Debug, Clone)]
enum Membership {
    Dense(Vec<u64>),
    Hashed(HashSet<u64>),
}

/// An explicit subset of the hypercube with exact membership tests.
///
/// Members are kept sorted by their bit encoding, so iteration order is
/// deterministic.
#[derive(Debug, Clone)]
pub struct TargetSet {
    n: u32,
    members: Vec<Vertex>,
    membership: Membership,
    provenance: Provenance,
}

impl TargetSet {
    /// Builds a set from raw encodings; duplicates are merged.
    pub fn from_bits(n: u32, bits: impl IntoIterator<Item = u64>, provenance: Provenance) -> Result<Self> {
        let mut members = bits
            .into_iter()
            .map(|b| Vertex::new(n, b))
            .collect::<Result<Vec<_>>>()?;
        members.sort_unstable();
        members.dedup();
        Ok(Self::from_sorted(n, members, provenance))
    }

    pub fn from_vertices(n: u32, vertices: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let mut members: Vec<Vertex> = vertices.into_iter().collect();
        if let Some(v) = members.iter().find(|v| v.dim() != n) {
            return Err(Error::domain(format!(
                "vertex {v} has dimension {}, expected {n}",
                v.dim()
            )));
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self::from_sorted(n, members, Provenance::Explicit))
    }

    fn from_sorted(n: u32, members: Vec<Vertex>, provenance: Provenance) -> Self {
        let membership = if n <= DENSE_MAX_DIM {
            let mut words = vec![0u64; ((1u64 << n) as usize).div_ceil(64)];
            for v in &members {
                let b = v.bits() as usize;
                words[b / 64] |= 1 << (b % 64);
            }
            Membership::Dense(words)
        } else {
            Membership::Hashed(members.iter().map(|v| v.bits()).collect())
        };
        TargetSet {
            n,
            members,
            membership,
            provenance,
        }
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Vertex] {
        &self.members
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    #[inline]
    pub fn contains_bits(&self, bits: u64) -> bool {
        match &self.membership {
            Membership::Dense(words) => {
                let b = bits as usize;
                words[b / 64] >> (b % 64) & 1 == 1
            }
            Membership::Hashed(set) => set.contains(&bits),
        }
    }

    #[inline]
    pub fn contains(&self, v: Vertex) -> bool {
        v.dim() == self.n && self.contains_bits(v.bits())
    }

    /// Number of members other than `x`, i.e. `|B \ {x}|`.
    pub fn len_excluding(&self, x: Vertex) -> usize {
        self.len() - usize::from(self.contains(x))
    }

    /// Serializes as the set-file format: a header `n=<dim>` and one hex vertex per line.
    pub fn to_set_file(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for v in &self.members {
            let _ = writeln!(out, "{}", v.to_hex());
        }
        out
    }

    /// Parses the set-file format. Blank lines and `#` comments are ignored.
    ///
    /// Without a header the dimension must be supplied by `n_hint`.
    pub fn parse_set_file(text: &str, n_hint: Option<u32>) -> Result<Self> {
        let mut n = None;
        let mut raw = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(d) = line.strip_prefix("n=") {
                if n.is_some() || !raw.is_empty() {
                    return Err(Error::Parse("header must precede all vertices".into()));
                }
                n = Some(
                    d.trim()
                        .parse::<u32>()
                        .map_err(|e| Error::Parse(format!("bad dimension header {line:?}: {e}")))?,
                );
                continue;
            }
            raw.push(line);
        }
        let n = match (n, n_hint) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::Parse(format!(
                    "set file has n={a} but n={b} was requested"
                )))
            }
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => return Err(Error::Parse("set file lacks an n=<dim> header".into())),
        };
        let members = raw
            .into_iter()
            .map(|s| Vertex::parse_hex(n, s))
            .collect::<Result<Vec<_>>>()?;
        Self::from_vertices(n, members)
    }
}
