#![allow(dead_code)]

use dlab_core::{Block, Symbol};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

/// Mostly small fractions, sometimes values that need the big path.
pub fn symbol() -> impl Strategy<Value = Symbol> {
    prop_oneof![
        4 => (1u64..=12).prop_flat_map(|q| (0..=q, Just(q))).prop_map(|(p, q)| Symbol::new(p, q).unwrap()),
        1 => (1u64..1_000_000, 0u32..3).prop_map(|(p, shift)| {
            let den = BigInt::from(u64::MAX) * BigInt::from(1u64 << (20 + shift));
            Symbol::from_big(BigRational::new(BigInt::from(p), den)).unwrap()
        }),
    ]
}

/// A symbol that is zero about `zero_weight` times out of `zero_weight + 1`.
pub fn sparse_symbol(zero_weight: u32) -> impl Strategy<Value = Symbol> {
    prop_oneof![
        zero_weight => Just(Symbol::zero()),
        1 => symbol(),
    ]
}

pub fn block(max_len: usize) -> impl Strategy<Value = Block> {
    (-40i64..40, prop::collection::vec(sparse_symbol(2), 1..=max_len))
        .prop_map(|(base, syms)| Block::new(base, syms).unwrap())
}

pub fn sparse_block(max_len: usize, zero_weight: u32) -> impl Strategy<Value = Block> {
    (-40i64..40, prop::collection::vec(sparse_symbol(zero_weight), 1..=max_len))
        .prop_map(|(base, syms)| Block::new(base, syms).unwrap())
}

/// Two blocks of the same length.
pub fn block_pair(max_len: usize) -> impl Strategy<Value = (Block, Block)> {
    (1..=max_len).prop_flat_map(|n| {
        (
            prop::collection::vec(sparse_symbol(2), n),
            prop::collection::vec(sparse_symbol(2), n),
        )
            .prop_map(|(a, b)| (Block::new(0, a).unwrap(), Block::new(0, b).unwrap()))
    })
}

pub fn big(s: &Symbol) -> BigRational {
    s.to_big()
}

pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}
