//! One-sided construction of a pointwise rigid shift point whose inverse
//! system fails forward recurrence.
//!
//! Stage 1 is the word `1 0 0`. Stage `m + 1` is
//!
//! ```text
//! x x (m/(m+1))x ((m-1)/(m+1))x ... (1/(m+1))x (0)x
//! ```
//!
//! where `x` is the stage-`m` word, so every stage extends the previous one.
//! All blocks are based at position 1.

use std::cmp::Ordering;
use std::collections::VecDeque;

use crate::block::{Block, BlockBuilder};
use crate::error::{param, Error, Result};
use crate::report::CheckReport;
use crate::symbol::Symbol;

/// Largest prefix built without an explicit override.
pub const DEFAULT_MAX_LEN: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseState {
    stage: usize,
    lengths: Vec<u64>,
    prefix: Block,
}

impl InverseState {
    pub fn initial() -> Self {
        let prefix = Block::new(1, vec![Symbol::one(), Symbol::zero(), Symbol::zero()])
            .expect("nonempty");
        InverseState {
            stage: 1,
            lengths: vec![3],
            prefix,
        }
    }

    pub fn stage(&self) -> usize {
        self.stage
    }

    /// `n_1, ..., n_m`.
    pub fn lengths(&self) -> &[u64] {
        &self.lengths
    }

    /// `n_k` for `1 <= k <= stage`.
    pub fn length(&self, k: usize) -> Option<u64> {
        k.checked_sub(1).and_then(|i| self.lengths.get(i)).copied()
    }

    pub fn prefix(&self) -> &Block {
        &self.prefix
    }

    /// Length the next stage will have, `(m + 3) n_m`.
    pub fn next_len(&self) -> Option<u64> {
        (self.stage as u64 + 3).checked_mul(*self.lengths.last()?)
    }

    pub fn step(&self) -> InverseState {
        self.step_capped(u64::MAX).expect("uncapped step")
    }

    pub fn step_capped(&self, max_len: u64) -> Result<InverseState> {
        let predicted = self.next_len().unwrap_or(u64::MAX);
        if predicted > max_len {
            return Err(Error::ResourceCap {
                what: "stage prefix",
                needed: predicted as u128,
                cap: max_len as u128,
            });
        }
        let m = self.stage as u64;
        let x = &self.prefix;
        let mut out = BlockBuilder::with_capacity(predicted as usize);
        out.push_block(x);
        out.push_block(x);
        for i in (0..=m).rev() {
            out.push_scaled(&Symbol::ratio(i, m + 1), x);
        }
        let prefix = out.finish(1)?;
        let mut lengths = self.lengths.clone();
        lengths.push(prefix.len() as u64);
        Ok(InverseState {
            stage: self.stage + 1,
            lengths,
            prefix,
        })
    }

    /// Copy with one prefix symbol replaced; used to plant failures.
    pub fn with_symbol(&self, i: i64, value: Symbol) -> Result<InverseState> {
        Ok(InverseState {
            prefix: self.prefix.with_symbol(i, value)?,
            ..self.clone()
        })
    }
}

pub fn build(m: usize) -> Result<InverseState> {
    build_capped(m, DEFAULT_MAX_LEN)
}

pub fn build_capped(m: usize, max_len: u64) -> Result<InverseState> {
    if m == 0 {
        return Err(param("stage", m, "stages start at 1"));
    }
    // Refuse before allocating anything.
    let mut len: u64 = 3;
    for j in 1..m as u64 {
        len = len.saturating_mul(j + 3);
        if len > max_len {
            return Err(Error::ResourceCap {
                what: "stage prefix",
                needed: len as u128,
                cap: max_len as u128,
            });
        }
    }
    let mut state = InverseState::initial();
    while state.stage < m {
        state = state.step_capped(max_len)?;
    }
    Ok(state)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InverseCheck {
    /// `0^k 1` occurs for every `k <= kmax`.
    ZeroRunThenOne { kmax: usize },
    /// Nonzero length-`k` windows repeat within `< 1/k` after `n_k` steps.
    ShiftRigidity { kmax: usize },
    /// A symbol exceeds the max of the following `n_j` symbols by at most `1/(j+1)`.
    SmallnessPropagation { jmax: usize },
    /// The last `m + 1` symbols of the stage-`m` word vanish.
    Tails,
}

impl InverseCheck {
    pub fn id(&self) -> &'static str {
        match self {
            InverseCheck::ZeroRunThenOne { .. } => "C1",
            InverseCheck::ShiftRigidity { .. } => "C3",
            InverseCheck::SmallnessPropagation { .. } => "C2prime",
            InverseCheck::Tails => "TAILS",
        }
    }
}

pub fn verify(state: &InverseState, check: InverseCheck) -> Result<CheckReport> {
    let bound = state.stage - 1;
    let report = match check {
        InverseCheck::ZeroRunThenOne { kmax } => {
            if kmax == 0 {
                return Err(param("kmax", kmax, "must be at least 1"));
            }
            check_zero_runs(state.prefix(), kmax)
        }
        InverseCheck::ShiftRigidity { kmax } => {
            if kmax == 0 || kmax > bound {
                return Err(param("kmax", kmax, format!("must lie in 1..={bound}")));
            }
            check_shift_rigidity(state.prefix(), state.lengths(), kmax)
        }
        InverseCheck::SmallnessPropagation { jmax } => {
            if jmax == 0 || jmax > bound {
                return Err(param("jmax", jmax, format!("must lie in 1..={bound}")));
            }
            check_smallness(state.prefix(), state.lengths(), jmax)
        }
        InverseCheck::Tails => {
            let need = state.stage + 1;
            let have = state.prefix.trailing_zeros();
            let r = if have >= need {
                CheckReport::pass("TAILS")
            } else {
                CheckReport::fail("TAILS")
            };
            r.param("need", need).witness("trailing_zeros", have)
        }
    };
    Ok(report.param("stage", state.stage))
}

/// Longest run of zeros immediately followed by a `1`, with the position of that `1`.
pub fn longest_zero_run_before_one(x: &Block) -> Option<(usize, i64)> {
    let mut prev = x.base() - 1;
    let mut best: Option<(usize, i64)> = None;
    for p in x.nonzero_positions() {
        if x.get_or_zero(p).is_one() {
            let run = (p - prev - 1) as usize;
            if best.is_none_or(|(r, _)| run > r) {
                best = Some((run, p));
            }
        }
        prev = p;
    }
    best
}

pub fn check_zero_runs(x: &Block, kmax: usize) -> CheckReport {
    let best = longest_zero_run_before_one(x);
    let (run, pos) = best.unwrap_or((0, x.base()));
    let r = if best.is_some() && run >= kmax {
        CheckReport::pass("C1")
    } else {
        CheckReport::fail("C1")
    };
    r.param("kmax", kmax).witness("max_k", run).witness("one_at", pos)
}

/// Shift-by-`n_k` rigidity with strict bound `1/k`, for every `k <= kmax`.
///
/// `lengths[k - 1]` is `n_k`. Only windows `x(i .. i+k-1)` that are not all
/// zero are constrained, and only where `i + n_k + k - 1` is inside the block.
pub fn check_shift_rigidity(x: &Block, lengths: &[u64], kmax: usize) -> CheckReport {
    let mut windows = 0u64;
    for k in 1..=kmax {
        let shift = lengths[k - 1] as i64;
        let kk = k as i64;
        let imax = x.end() - shift - kk + 1;
        let mut next_i = x.base();
        for p in x.nonzero_positions() {
            let lo = next_i.max(p - kk + 1).max(x.base());
            let hi = p.min(imax);
            for i in lo..=hi {
                windows += 1;
                for d in 0..kk {
                    let a = x.get_or_zero(i + d);
                    let b = x.get_or_zero(i + shift + d);
                    let diff = a.abs_diff(b);
                    if !diff.lt_recip(k as u64) {
                        return CheckReport::fail("C3")
                            .param("kmax", kmax)
                            .witness("k", k)
                            .witness("pos", i)
                            .witness("offset", d)
                            .witness("left", a)
                            .witness("right", b);
                    }
                }
            }
            next_i = next_i.max(hi + 1);
        }
    }
    CheckReport::pass("C3")
        .param("kmax", kmax)
        .witness("windows", windows)
}

/// Largest symbol strictly after `i` and up to `i + span`.
fn max_after(x: &Block, i: i64, span: i64) -> Symbol {
    x.nonzeros_in(i + 1, i + span)
        .map(|p| x.get_or_zero(p))
        .max()
        .cloned()
        .unwrap_or_default()
}

/// `x(i) <= max(x(i+1 .. i+n_j)) + 1/(j+1)` for all `j <= jmax`, non-strict.
pub fn check_smallness(x: &Block, lengths: &[u64], jmax: usize) -> CheckReport {
    let nz: Vec<i64> = x.nonzero_positions().collect();
    let mut tight = 0u64;
    let mut tight_example: Option<(usize, i64)> = None;
    for j in 1..=jmax {
        let span = lengths[j - 1] as i64;
        let last = x.end() - span;
        // Sliding maximum over the nonzeros in (i, i + span]; indices into `nz`
        // with strictly decreasing values.
        let mut window: VecDeque<usize> = VecDeque::new();
        let mut ahead = 0;
        for (idx, &i) in nz.iter().enumerate() {
            if i > last {
                break;
            }
            while ahead < nz.len() && nz[ahead] <= i + span {
                let v = x.get_or_zero(nz[ahead]);
                while window.back().is_some_and(|&b| x.get_or_zero(nz[b]) <= v) {
                    window.pop_back();
                }
                window.push_back(ahead);
                ahead += 1;
            }
            while window.front().is_some_and(|&f| f <= idx) {
                window.pop_front();
            }
            let a = x.get_or_zero(i);
            let eps = window
                .front()
                .map(|&f| x.get_or_zero(nz[f]).clone())
                .unwrap_or_default();
            if *a <= eps {
                continue;
            }
            let excess = a.abs_diff(&eps);
            match excess.cmp_ratio(1, j as u64 + 1) {
                Ordering::Greater => {
                    return CheckReport::fail("C2prime")
                        .param("jmax", jmax)
                        .witness("j", j)
                        .witness("pos", i)
                        .witness("a", a)
                        .witness("eps", eps);
                }
                Ordering::Equal => {
                    tight += 1;
                    tight_example.get_or_insert((j, i));
                }
                Ordering::Less => {}
            }
        }
    }
    let mut r = CheckReport::pass("C2prime")
        .param("jmax", jmax)
        .witness("tight", tight);
    if let Some((j, i)) = tight_example {
        r = r.witness("tight_j", j).witness("tight_pos", i);
    }
    r
}

/// A window `a b_1 ... b_{k+1}` with every `b_i <= eps` (`i <= k`) yet `a > eps + 1/k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiteralWitness {
    pub k: usize,
    pub pos: i64,
    pub a: Symbol,
    pub eps: Symbol,
    pub window: Vec<Symbol>,
}

/// Searches for a counterexample to the uncorrected smallness statement at
/// hypothesis length `k`; returns the leftmost one.
pub fn literal_smallness_witness(x: &Block, k: usize) -> Option<LiteralWitness> {
    let kk = k as i64;
    let last = x.end() - kk - 1;
    for i in x.nonzero_positions() {
        if i > last {
            break;
        }
        let a = x.get_or_zero(i);
        let eps = max_after(x, i, kk);
        if *a <= eps {
            continue;
        }
        if a.abs_diff(&eps).cmp_ratio(1, k as u64) == Ordering::Greater {
            let window = (i..=i + kk + 1).map(|p| x.get_or_zero(p).clone()).collect();
            return Some(LiteralWitness {
                k,
                pos: i,
                a: a.clone(),
                eps,
                window,
            });
        }
    }
    None
}

/// Diagnostic report for [`literal_smallness_witness`]; never a failure.
pub fn literal_smallness_report(x: &Block, k: usize) -> CheckReport {
    let r = CheckReport::info("LITERAL2").param("k", k);
    match literal_smallness_witness(x, k) {
        Some(w) => {
            let window: Vec<String> = w.window.iter().map(|s| s.to_string()).collect();
            r.witness("found", true)
                .witness("pos", w.pos)
                .witness("a", &w.a)
                .witness("eps", &w.eps)
                .witness("window", window.join(","))
        }
        None => r.witness("found", false),
    }
}
