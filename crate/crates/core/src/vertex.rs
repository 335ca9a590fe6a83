//! Bit-packed hypercube vertices.

use std::fmt;

use crate::error::{Error, Result};

/// Largest dimension supported by the packed representation.
pub const MAX_DIM: u32 = 64;

/// A point of `{0,1}^n`, stored as the low `n` bits of a word.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    n: u32,
    bits: u64,
}

impl Vertex {
    pub fn new(n: u32, bits: u64) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::domain(format!("dimension {n} outside 1..={MAX_DIM}")));
        }
        if n < 64 && bits >> n != 0 {
            return Err(Error::domain(format!(
                "bits {bits:#x} do not fit in dimension {n}"
            )));
        }
        Ok(Vertex { n, bits })
    }

    /// The all-zeros vertex.
    pub fn origin(n: u32) -> Self {
        Vertex::new(n, 0).expect("valid dimension")
    }

    /// A vertex at distance `k` from the origin (its low `k` bits set).
    pub fn at_distance(n: u32, k: u32) -> Result<Self> {
        if k > n {
            return Err(Error::domain(format!("distance {k} exceeds dimension {n}")));
        }
        Vertex::new(n, low_mask(k))
    }

    #[inline]
    pub fn dim(self) -> u32 {
        self.n
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.bits
    }

    /// Hamming distance. Both vertices must have the same dimension.
    #[inline]
    pub fn distance(self, other: Vertex) -> u32 {
        debug_assert_eq!(self.n, other.n);
        (self.bits ^ other.bits).count_ones()
    }

    /// Hamming weight, i.e. the distance to the origin.
    #[inline]
    pub fn weight(self) -> u32 {
        self.bits.count_ones()
    }

    /// One step of the simple random walk: flip coordinate `u`.
    #[inline]
    pub fn step(self, u: u32) -> Vertex {
        debug_assert!(u < self.n);
        Vertex {
            n: self.n,
            bits: self.bits ^ (1u64 << u),
        }
    }

    /// Parses a hexadecimal encoding with optional `0x` prefix.
    pub fn parse_hex(n: u32, s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t
            .strip_prefix("0x")
            .or_else(|| t.strip_prefix("0X"))
            .unwrap_or(t);
        let bits = u64::from_str_radix(t, 16)
            .map_err(|e| Error::Parse(format!("bad hex vertex {s:?}: {e}")))?;
        Vertex::new(n, bits)
    }

    /// Lowercase hex without prefix, zero-padded to the dimension.
    pub fn to_hex(self) -> String {
        let width = self.n.div_ceil(4) as usize;
        format!("{:0width$x}", self.bits)
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vertex({}; {:0w$b})", self.n, self.bits, w = self.n as usize)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

#[inline]
pub(crate) fn low_mask(k: u32) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}
