//! Finite blocks of symbols with an integer base index.
//!
//! A block covers the positions `base ..= base + len - 1`. Symbols are stored
//! densely; a sorted index of nonzero offsets is kept alongside so scans that
//! only care about the support run in time proportional to the nonzero count.

use std::fmt;

use crate::error::{Error, Result};
use crate::symbol::{Symbol, ZERO};

#[derive(Clone, PartialEq, Eq)]
pub struct Block {
    base: i64,
    symbols: Vec<Symbol>,
    // Offsets (not positions) of nonzero symbols, strictly increasing.
    nonzero: Vec<usize>,
}

impl Block {
    pub fn new(base: i64, symbols: Vec<Symbol>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::EmptyBlock);
        }
        let nonzero = symbols
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_zero())
            .map(|(o, _)| o)
            .collect();
        Ok(Block { base, symbols, nonzero })
    }

    pub fn zeros(base: i64, len: usize) -> Result<Self> {
        Self::new(base, vec![Symbol::zero(); len])
    }

    /// A block of odd length indexed so that its middle symbol sits at 0.
    pub fn centered(symbols: Vec<Symbol>) -> Result<Self> {
        if symbols.len().is_multiple_of(2) {
            return Err(Error::Construction(format!(
                "centered block needs odd length, got {}",
                symbols.len()
            )));
        }
        let half = (symbols.len() / 2) as i64;
        Self::new(-half, symbols)
    }

    pub fn base(&self) -> i64 {
        self.base
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Last covered position.
    pub fn end(&self) -> i64 {
        self.base + self.symbols.len() as i64 - 1
    }

    pub fn contains(&self, i: i64) -> bool {
        i >= self.base && i <= self.end()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn get(&self, i: i64) -> Option<&Symbol> {
        if self.contains(i) {
            Some(&self.symbols[(i - self.base) as usize])
        } else {
            None
        }
    }

    /// Like [`get`](Self::get) but reports the violated bound.
    pub fn at(&self, i: i64) -> Result<&Symbol> {
        self.get(i).ok_or(Error::OutOfRange {
            index: i,
            lo: self.base,
            hi: self.end(),
        })
    }

    /// Value at `i`, reading positions outside the block as 0.
    pub fn get_or_zero(&self, i: i64) -> &Symbol {
        self.get(i).unwrap_or(&ZERO)
    }

    pub fn nonzero_count(&self) -> usize {
        self.nonzero.len()
    }

    /// Nonzero positions in increasing order.
    pub fn nonzero_positions(&self) -> impl DoubleEndedIterator<Item = i64> + ExactSizeIterator + '_ {
        self.nonzero.iter().map(move |&o| self.base + o as i64)
    }

    /// Nonzero positions within `[lo, hi]`, increasing.
    pub fn nonzeros_in(&self, lo: i64, hi: i64) -> impl DoubleEndedIterator<Item = i64> + '_ {
        let (a, b) = self.nonzero_range(lo, hi);
        self.nonzero[a..b].iter().map(move |&o| self.base + o as i64)
    }

    pub fn has_nonzero_in(&self, lo: i64, hi: i64) -> bool {
        let (a, b) = self.nonzero_range(lo, hi);
        a < b
    }

    fn nonzero_range(&self, lo: i64, hi: i64) -> (usize, usize) {
        if hi < lo || hi < self.base || lo > self.end() {
            return (0, 0);
        }
        let lo = (lo.max(self.base) - self.base) as usize;
        let hi = (hi.min(self.end()) - self.base) as usize;
        let a = self.nonzero.partition_point(|&o| o < lo);
        let b = self.nonzero.partition_point(|&o| o <= hi);
        (a, b)
    }

    /// Length of the leading run of zeros.
    pub fn leading_zeros(&self) -> usize {
        self.nonzero.first().copied().unwrap_or(self.len())
    }

    /// Length of the trailing run of zeros.
    pub fn trailing_zeros(&self) -> usize {
        self.nonzero
            .last()
            .map(|&o| self.len() - 1 - o)
            .unwrap_or(self.len())
    }

    /// Same symbols, first position moved to `base`.
    pub fn rebased(&self, base: i64) -> Block {
        Block {
            base,
            symbols: self.symbols.clone(),
            nonzero: self.nonzero.clone(),
        }
    }

    /// `self` followed by `other`; `other` is re-based to follow on.
    pub fn concat(&self, other: &Block) -> Block {
        let mut b = BlockBuilder::with_capacity(self.len() + other.len());
        b.push_block(self);
        b.push_block(other);
        b.finish(self.base).expect("concatenation of nonempty blocks")
    }

    /// Pointwise product with `t`.
    pub fn scale(&self, t: &Symbol) -> Block {
        if t.is_zero() {
            return Block::zeros(self.base, self.len()).expect("nonempty");
        }
        if t.is_one() {
            return self.clone();
        }
        let symbols = self.symbols.iter().map(|s| s.mul(t)).collect();
        Block {
            base: self.base,
            symbols,
            nonzero: self.nonzero.clone(),
        }
    }

    /// The sub-block covering positions `i ..= j`, keeping base `i`.
    pub fn window(&self, i: i64, j: i64) -> Result<Block> {
        if j < i {
            return Err(Error::BadWindow { i, j, reason: "empty window" });
        }
        if i < self.base {
            return Err(Error::BadWindow { i, j, reason: "start precedes block base" });
        }
        if j > self.end() {
            return Err(Error::BadWindow { i, j, reason: "end exceeds block end" });
        }
        let lo = (i - self.base) as usize;
        let hi = (j - self.base) as usize;
        Block::new(i, self.symbols[lo..=hi].to_vec())
    }

    /// Exact coordinatewise supremum distance between equal-length blocks.
    /// Bases are ignored; position `k` of one is paired with position `k` of the other.
    pub fn sup_distance(&self, other: &Block) -> Result<Symbol> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        let mut best = Symbol::zero();
        // Only offsets where either side is nonzero can contribute.
        let mut a = self.nonzero.iter().peekable();
        let mut b = other.nonzero.iter().peekable();
        loop {
            let o = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(&&x), None) => {
                    a.next();
                    x
                }
                (None, Some(&&y)) => {
                    b.next();
                    y
                }
                (Some(&&x), Some(&&y)) => {
                    if x <= y {
                        a.next();
                    }
                    if y <= x {
                        b.next();
                    }
                    x.min(y)
                }
            };
            let d = self.symbols[o].abs_diff(&other.symbols[o]);
            if d > best {
                best = d;
            }
        }
        Ok(best)
    }

    /// Copy with the symbol at `i` replaced.
    pub fn with_symbol(&self, i: i64, value: Symbol) -> Result<Block> {
        self.at(i)?;
        let mut symbols = self.symbols.clone();
        symbols[(i - self.base) as usize] = value;
        Block::new(self.base, symbols)
    }
}

impl fmt::Debug for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Block@{}[", self.base)?;
        for (k, s) in self.symbols.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("]")
    }
}

/// Incremental assembly of a block from scaled copies and zero runs.
#[derive(Default)]
pub struct BlockBuilder {
    symbols: Vec<Symbol>,
    nonzero: Vec<usize>,
}

impl BlockBuilder {
    pub fn with_capacity(n: usize) -> Self {
        BlockBuilder {
            symbols: Vec::with_capacity(n),
            nonzero: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn push_zeros(&mut self, n: usize) {
        self.symbols.resize(self.symbols.len() + n, Symbol::zero());
    }

    pub fn push_block(&mut self, block: &Block) {
        let off = self.symbols.len();
        self.symbols.extend_from_slice(&block.symbols);
        self.nonzero.extend(block.nonzero.iter().map(|o| o + off));
    }

    pub fn push_scaled(&mut self, t: &Symbol, block: &Block) {
        if t.is_zero() {
            self.push_zeros(block.len());
            return;
        }
        let off = self.symbols.len();
        self.symbols.extend(block.symbols.iter().map(|s| s.mul(t)));
        self.nonzero.extend(block.nonzero.iter().map(|o| o + off));
    }

    pub fn finish(self, base: i64) -> Result<Block> {
        if self.symbols.is_empty() {
            return Err(Error::EmptyBlock);
        }
        Ok(Block {
            base,
            symbols: self.symbols,
            nonzero: self.nonzero,
        })
    }
}
