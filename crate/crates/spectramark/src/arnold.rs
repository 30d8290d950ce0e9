//! Arnold cat-map scrambling of square bit matrices.
//!
//! The map sends cell (a, b) to (a + b, a + 2b) mod N. It is an area
//! preserving permutation, so iterating it shuffles a matrix without losing
//! bits, and it is periodic: after `arnold_period(N)` steps every cell is
//! back where it started. The iteration count acts as a secret key.
//!
//! Non-square logos are handled by packing: bits are flattened row-major
//! into the smallest square that holds them, zero-padded, scrambled, and on
//! the way back unpacked and truncated.

use crate::error::{Error, Result};
use crate::image::WatermarkBits;

/// Scrambling key: how many times the cat map is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArnoldKey {
    pub iterations: u64,
}

/// An N x N matrix over {0, 1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareBitMatrix {
    side: usize,
    bits: Vec<u8>,
}

impl SquareBitMatrix {
    pub fn new(side: usize, bits: Vec<u8>) -> Result<Self> {
        if side == 0 {
            return Err(Error::Contract("matrix side must be at least 1".into()));
        }
        if bits.len() != side * side {
            return Err(Error::Contract(format!(
                "bit buffer has {} values, expected {side}x{side}",
                bits.len()
            )));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::Contract("matrix elements must be 0 or 1".into()));
        }
        Ok(SquareBitMatrix { side, bits })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> u8 {
        self.bits[a * self.side + b]
    }
}

/// Apply the cat map `key.iterations` times: (a, b) -> (a+b, a+2b) mod N.
pub fn arnold_scramble(m: &SquareBitMatrix, key: ArnoldKey) -> SquareBitMatrix {
    let n = m.side;
    let mut cur = m.bits.clone();
    let mut next = vec![0u8; n * n];
    for _ in 0..key.iterations {
        for a in 0..n {
            for b in 0..n {
                let a2 = (a + b) % n;
                let b2 = (a + 2 * b) % n;
                next[a2 * n + b2] = cur[a * n + b];
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    SquareBitMatrix { side: n, bits: cur }
}

/// Exact inverse: (a, b) -> (2a - b, b - a) mod N, iterated the same number
/// of times, so `descramble(scramble(x, k), k) == x`.
pub fn arnold_descramble(m: &SquareBitMatrix, key: ArnoldKey) -> SquareBitMatrix {
    let n = m.side;
    let mut cur = m.bits.clone();
    let mut next = vec![0u8; n * n];
    for _ in 0..key.iterations {
        for a in 0..n {
            for b in 0..n {
                let a2 = (2 * a + n - b) % n;
                let b2 = (b + n - a) % n;
                next[a2 * n + b2] = cur[a * n + b];
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    SquareBitMatrix { side: n, bits: cur }
}

/// Smallest T >= 1 for which T applications of the map are the identity on
/// an N x N grid, found by iterating the coordinate permutation directly.
pub fn arnold_period(side: usize) -> u64 {
    assert!(side >= 1, "side must be at least 1");
    let n = side;
    // Track where each cell index currently sits.
    let ident: Vec<u32> = (0..(n * n) as u32).collect();
    let mut cur = ident.clone();
    let mut next = vec![0u32; n * n];
    let mut t = 0u64;
    loop {
        for a in 0..n {
            for b in 0..n {
                let a2 = (a + b) % n;
                let b2 = (a + 2 * b) % n;
                next[a2 * n + b2] = cur[a * n + b];
            }
        }
        std::mem::swap(&mut cur, &mut next);
        t += 1;
        if cur == ident {
            return t;
        }
    }
}

/// Pack a logo into the smallest square that holds it, row-major, padding
/// with zeros. A square logo packs to itself.
pub fn pack_square(wm: &WatermarkBits) -> SquareBitMatrix {
    let count = wm.rows() * wm.cols();
    let side = (count as f64).sqrt().ceil() as usize;
    let mut bits = vec![0u8; side * side];
    bits[..count].copy_from_slice(wm.bits());
    SquareBitMatrix { side, bits }
}

/// Inverse of [`pack_square`]: take the first rows*cols bits row-major.
pub fn unpack_square(m: &SquareBitMatrix, rows: usize, cols: usize) -> Result<WatermarkBits> {
    let count = rows * cols;
    if count > m.bits.len() {
        return Err(Error::Contract(format!(
            "cannot unpack {rows}x{cols} from a side-{} square",
            m.side
        )));
    }
    WatermarkBits::new(rows, cols, m.bits[..count].to_vec())
}

/// Side of the square a rows x cols logo packs into.
pub fn packed_side(rows: usize, cols: usize) -> usize {
    ((rows * cols) as f64).sqrt().ceil() as usize
}
