//! Two-sided construction of a pair `(x*, y*)` whose orbit closures form a
//! deterministic union while the pair itself is not forward recurrent for the
//! product shift.
//!
//! Blocks are center-indexed: the unscaled copy carried over from the previous
//! stage always sits in the middle, so every stage extends the last one.
//! Stage `r + 1` lays out `2r + 1` scaled copies of the stage-`r` block
//!
//! ```text
//! v (1/(r+1))x u (2/(r+1))x u ... u x u ... u (2/(r+1))x u (1/(r+1))x v
//! ```
//!
//! with zero spacers `u` (length `s`) and `v` (length `t`); `y` uses `s'`/`t'`.
//! The copy pitches `l + s` and `l + s'` become the rigidity times `m_r`, `n_r`.

use std::fmt;

use num_integer::Integer;

use crate::block::{Block, BlockBuilder};
use crate::error::{param, Error, Result};
use crate::report::CheckReport;
use crate::symbol::Symbol;

/// Zero-spacer lengths for one stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpacerChoice {
    pub s: u64,
    pub t: u64,
    pub sp: u64,
    pub tp: u64,
}

impl SpacerChoice {
    /// `t = t' + r (s' - s)`, which makes both stage blocks the same length.
    pub fn balanced(r: u64, s: u64, sp: u64, tp: u64) -> Option<SpacerChoice> {
        let t = sp.checked_sub(s)?.checked_mul(r)?.checked_add(tp)?;
        Some(SpacerChoice { s, t, sp, tp })
    }
}

/// Zero-run lengths `|a|, |b|, |c|, |d|` of the interleaving step
/// `x' = b y a x a y b`, `y' = d x c y c x d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interleave {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairState {
    stage: usize,
    x: Block,
    y: Block,
    m: Vec<u64>,
    n: Vec<u64>,
    spacers: Vec<SpacerChoice>,
    interleaves: Vec<(usize, Interleave)>,
    transitive: bool,
    copy_bases: Option<(Vec<i64>, Vec<i64>)>,
}

impl PairState {
    /// Stage 1: `x = y = 1` at position 0.
    pub fn initial() -> Self {
        let one = Block::centered(vec![Symbol::one()]).expect("odd length");
        PairState {
            stage: 1,
            x: one.clone(),
            y: one,
            m: Vec::new(),
            n: Vec::new(),
            spacers: Vec::new(),
            interleaves: Vec::new(),
            transitive: false,
            copy_bases: None,
        }
    }

    pub fn stage(&self) -> usize {
        self.stage
    }

    pub fn x(&self) -> &Block {
        &self.x
    }

    pub fn y(&self) -> &Block {
        &self.y
    }

    /// Common block length.
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest `|i|` covered by the blocks.
    pub fn half_width(&self) -> i64 {
        self.x.end()
    }

    /// `m_1, ..., m_{r-1}`.
    pub fn m_times(&self) -> &[u64] {
        &self.m
    }

    /// `n_1, ..., n_{r-1}`.
    pub fn n_times(&self) -> &[u64] {
        &self.n
    }

    pub fn m(&self, k: usize) -> Option<u64> {
        k.checked_sub(1).and_then(|i| self.m.get(i)).copied()
    }

    pub fn n(&self, k: usize) -> Option<u64> {
        k.checked_sub(1).and_then(|i| self.n.get(i)).copied()
    }

    /// Number of defined rigidity times.
    pub fn times_defined(&self) -> usize {
        self.m.len()
    }

    pub fn spacers(&self) -> &[SpacerChoice] {
        &self.spacers
    }

    pub fn interleaves(&self) -> &[(usize, Interleave)] {
        &self.interleaves
    }

    pub fn is_transitive(&self) -> bool {
        self.transitive
    }

    /// Bases of the scaled copies laid down by the most recent stage build.
    pub fn copy_bases(&self) -> Option<(&[i64], &[i64])> {
        self.copy_bases.as_ref().map(|(a, b)| (a.as_slice(), b.as_slice()))
    }

    /// `x*(i)`, served from the deepest built stage.
    pub fn x_star(&self, i: i64) -> Result<&Symbol> {
        self.x.at(i)
    }

    pub fn y_star(&self, i: i64) -> Result<&Symbol> {
        self.y.at(i)
    }

    /// `2 max{m_k, n_k}` over the defined times.
    pub fn zero_tail_bound(&self) -> u64 {
        2 * self.m.iter().chain(&self.n).copied().max().unwrap_or(0)
    }

    pub fn with_x(&self, i: i64, value: Symbol) -> Result<PairState> {
        Ok(PairState {
            x: self.x.with_symbol(i, value)?,
            ..self.clone()
        })
    }

    pub fn with_y(&self, i: i64, value: Symbol) -> Result<PairState> {
        Ok(PairState {
            y: self.y.with_symbol(i, value)?,
            ..self.clone()
        })
    }
}

/// Scale numerators of the copies, left to right: `1..r, r+1, r..1` over `r+1`.
fn copy_scales(r: u64) -> impl Iterator<Item = Symbol> {
    (1..=r)
        .chain(std::iter::once(r + 1))
        .chain((1..=r).rev())
        .map(move |i| Symbol::ratio(i, r + 1))
}

fn lay_copies(block: &Block, r: u64, gap: u64, tail: u64) -> (BlockBuilder, Vec<usize>) {
    let len = block.len() as u64;
    let total = 2 * tail + (2 * r + 1) * len + 2 * r * gap;
    let mut out = BlockBuilder::with_capacity(total as usize);
    let mut bases = Vec::with_capacity(2 * r as usize + 1);
    out.push_zeros(tail as usize);
    for (idx, scale) in copy_scales(r).enumerate() {
        if idx > 0 {
            out.push_zeros(gap as usize);
        }
        bases.push(out.len());
        out.push_scaled(&scale, block);
    }
    out.push_zeros(tail as usize);
    (out, bases)
}

/// Predicted common length of the next stage.
pub fn next_len(state: &PairState, choice: &SpacerChoice) -> Option<u64> {
    let r = state.stage as u64;
    let l = state.len() as u64;
    (2 * r + 1)
        .checked_mul(l)?
        .checked_add((2 * r).checked_mul(choice.s)?)?
        .checked_add(2u64.checked_mul(choice.t)?)
}

pub fn build_stage(state: &PairState, choice: &SpacerChoice) -> Result<PairState> {
    let r = state.stage as u64;
    let l = state.len() as u64;
    let expected_t = SpacerChoice::balanced(r, choice.s, choice.sp, choice.tp).map(|c| c.t);
    if choice.sp <= choice.s || expected_t != Some(choice.t) {
        return Err(Error::Construction(format!(
            "spacers s={} t={} sp={} tp={} violate t = tp + r(sp - s) with sp > s at r={r}",
            choice.s, choice.t, choice.sp, choice.tp
        )));
    }
    next_len(state, choice)
        .filter(|&n| n <= usize::MAX as u64 / 2)
        .ok_or_else(|| Error::Construction("stage length overflows".into()))?;

    let (xb, xbases) = lay_copies(&state.x, r, choice.s, choice.t);
    let (yb, ybases) = lay_copies(&state.y, r, choice.sp, choice.tp);
    if xb.len() != yb.len() {
        return Err(Error::Construction(format!(
            "unequal stage lengths {} and {}",
            xb.len(),
            yb.len()
        )));
    }
    let half = (xb.len() / 2) as i64;
    let x = xb.finish(-half)?;
    let y = yb.finish(-half)?;

    // The middle copy is the old block, unscaled and centered.
    let old_half = (l / 2) as i64;
    debug_assert_eq!(xbases[r as usize] as i64 - half, -old_half);
    debug_assert_eq!(ybases[r as usize] as i64 - half, -old_half);
    let scales: Vec<Symbol> = copy_scales(r).collect();
    let gap = Symbol::ratio(1, r + 1);
    for w in scales.windows(2) {
        assert_eq!(w[0].abs_diff(&w[1]), gap, "adjacent copy scales must differ by 1/(r+1)");
    }

    let mut m = state.m.clone();
    let mut n = state.n.clone();
    m.push(l + choice.s);
    n.push(l + choice.sp);
    let mut spacers = state.spacers.clone();
    spacers.push(*choice);
    let to_abs = |v: Vec<usize>| v.into_iter().map(|b| b as i64 - half).collect::<Vec<_>>();
    Ok(PairState {
        stage: state.stage + 1,
        x,
        y,
        m,
        n,
        spacers,
        interleaves: state.interleaves.clone(),
        transitive: state.transitive,
        copy_bases: Some((to_abs(xbases), to_abs(ybases))),
    })
}

impl Interleave {
    /// Shortest lengths meeting the zero-tail bound, with `|c| = |a| + l` and
    /// `|b| = |d| + l` so the interleaved copies never overlap.
    pub fn for_state(state: &PairState) -> Interleave {
        let l = state.len() as u64;
        let a = state.zero_tail_bound().max(1);
        let d = a;
        Interleave { a, b: d + l, c: a + l, d }
    }
}

/// Replaces `x`, `y` by `b y a x a y b` and `d x c y c x d`.
pub fn build_transitive_stage(state: &PairState, lens: Interleave) -> Result<PairState> {
    let Interleave { a, b, c, d } = lens;
    if a + b != c + d {
        return Err(Error::Construction(format!(
            "interleave lengths need |a|+|b| = |c|+|d|, got {a}+{b} vs {c}+{d}"
        )));
    }
    if a == c {
        return Err(Error::Construction(format!(
            "interleave lengths need |a| != |c|, both are {a}"
        )));
    }
    let bound = state.zero_tail_bound();
    if let Some(short) = [a, b, c, d].into_iter().find(|&v| v < bound) {
        return Err(Error::Construction(format!(
            "interleave run of length {short} is below the zero-tail bound {bound}"
        )));
    }
    let lay = |outer: u64, side: &Block, inner: u64, mid: &Block| {
        let mut out = BlockBuilder::with_capacity(3 * side.len() + 2 * (outer + inner) as usize);
        out.push_zeros(outer as usize);
        out.push_block(side);
        out.push_zeros(inner as usize);
        out.push_block(mid);
        out.push_zeros(inner as usize);
        out.push_block(side);
        out.push_zeros(outer as usize);
        out
    };
    let xb = lay(b, &state.y, a, &state.x);
    let yb = lay(d, &state.x, c, &state.y);
    let half = (xb.len() / 2) as i64;
    let next = PairState {
        x: xb.finish(-half)?,
        y: yb.finish(-half)?,
        transitive: true,
        copy_bases: None,
        interleaves: {
            let mut v = state.interleaves.clone();
            v.push((state.stage, lens));
            v
        },
        ..state.clone()
    };
    let v = verify(&next, PairCheck::Orthogonality)?;
    if v.failed() {
        return Err(Error::Construction(format!("interleaved blocks are not orthogonal: {v}")));
    }
    Ok(next)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PairCheck {
    /// `|x(i + m_k) - x(i)| <= 1/k`.
    RigidityX(usize),
    /// `|y(i + n_k) - y(i)| <= 1/k`.
    RigidityY(usize),
    /// `x` is sparse at block length `n_k` for some phase.
    SparseX(usize),
    /// `y` is sparse at block length `m_k` for some phase.
    SparseY(usize),
    Orthogonality,
    ZeroTails,
    /// Looks for a sliding-offset violation of sparseness at scale `k`.
    SlidingFalsifier(usize),
    TransitiveRigidity(usize),
}

impl PairCheck {
    pub fn id(&self) -> &'static str {
        match self {
            PairCheck::RigidityX(_) => "I",
            PairCheck::RigidityY(_) => "II",
            PairCheck::SparseX(_) => "III",
            PairCheck::SparseY(_) => "IV",
            PairCheck::Orthogonality => "V",
            PairCheck::ZeroTails => "Z",
            PairCheck::SlidingFalsifier(_) => "SLIDING_FALSIFIER",
            PairCheck::TransitiveRigidity(_) => "TRANSITIVE_RIGIDITY",
        }
    }

    pub fn k(&self) -> Option<usize> {
        match *self {
            PairCheck::RigidityX(k)
            | PairCheck::RigidityY(k)
            | PairCheck::SparseX(k)
            | PairCheck::SparseY(k)
            | PairCheck::SlidingFalsifier(k)
            | PairCheck::TransitiveRigidity(k) => Some(k),
            PairCheck::Orthogonality | PairCheck::ZeroTails => None,
        }
    }

    /// The checks a stage must pass once `times` rigidity times exist.
    pub fn required(times: usize, transitive: bool) -> Vec<PairCheck> {
        let mut v = Vec::new();
        if transitive {
            v.extend((1..=times).map(PairCheck::TransitiveRigidity));
        } else {
            v.extend((1..=times).map(PairCheck::RigidityX));
            v.extend((1..=times).map(PairCheck::RigidityY));
            v.extend((1..=times).map(PairCheck::SparseX));
            v.extend((1..=times).map(PairCheck::SparseY));
        }
        v.push(PairCheck::Orthogonality);
        v.push(PairCheck::ZeroTails);
        v
    }
}

impl fmt::Display for PairCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k() {
            Some(k) => write!(f, "{}(k={k})", self.id()),
            None => f.write_str(self.id()),
        }
    }
}

pub fn verify(state: &PairState, check: PairCheck) -> Result<CheckReport> {
    if let Some(k) = check.k() {
        let max = state.times_defined();
        if k == 0 || k > max {
            return Err(param("k", k, format!("must lie in 1..={max}")));
        }
    }
    let report = match check {
        PairCheck::RigidityX(k) => rigidity("I", &state.x, state.m[k - 1], k),
        PairCheck::RigidityY(k) => rigidity("II", &state.y, state.n[k - 1], k),
        PairCheck::SparseX(k) => sparseness("III", &state.x, state.n[k - 1]),
        PairCheck::SparseY(k) => sparseness("IV", &state.y, state.m[k - 1]),
        PairCheck::Orthogonality => orthogonality(&state.x, &state.y),
        PairCheck::ZeroTails => zero_tails(state),
        PairCheck::SlidingFalsifier(k) => {
            let x = sliding_witness(&state.x, state.n[k - 1]);
            let y = sliding_witness(&state.y, state.m[k - 1]);
            let mut r = CheckReport::info("SLIDING_FALSIFIER")
                .witness("found", x.is_some() || y.is_some());
            for (side, w) in [("x", x), ("y", y)] {
                if let Some(w) = w {
                    r = r
                        .witness(&format!("{side}_start"), w.start)
                        .witness(&format!("{side}_a"), w.a)
                        .witness(&format!("{side}_b"), w.b);
                }
            }
            r
        }
        PairCheck::TransitiveRigidity(k) => {
            transitive_rigidity(state, k)
        }
    };
    let report = match check.k() {
        Some(k) => {
            let mut r = report;
            r.params.insert(0, ("k".to_owned(), k.to_string()));
            r
        }
        None => report,
    };
    Ok(report.param("stage", state.stage))
}

/// Every check in `checks`, in order.
pub fn verify_all(state: &PairState, checks: &[PairCheck]) -> Result<Vec<CheckReport>> {
    checks.iter().map(|&c| verify(state, c)).collect()
}

/// Positions `i` where `block(i)` or `block(i + shift)` is nonzero, increasing.
fn shifted_support(block: &Block, shifts: &[i64]) -> Vec<i64> {
    let mut v: Vec<i64> = block
        .nonzero_positions()
        .flat_map(|p| std::iter::once(p).chain(shifts.iter().map(move |s| p - s)))
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn rigidity(id: &str, block: &Block, shift: u64, k: usize) -> CheckReport {
    let shift = shift as i64;
    for i in shifted_support(block, &[shift]) {
        let a = block.get_or_zero(i);
        let b = block.get_or_zero(i + shift);
        if !a.abs_diff(b).le_ratio(1, k as u64) {
            return CheckReport::fail(id)
                .param("shift", shift)
                .witness("pos", i)
                .witness("left", a)
                .witness("right", b);
        }
    }
    CheckReport::pass(id).param("shift", shift)
}

fn transitive_rigidity(state: &PairState, k: usize) -> CheckReport {
    let shifts = [state.m[k - 1] as i64, state.n[k - 1] as i64];
    for (side, block) in [("x", &state.x), ("y", &state.y)] {
        for i in shifted_support(block, &shifts) {
            let here = block.get_or_zero(i);
            let ok = shifts
                .iter()
                .any(|&s| here.abs_diff(block.get_or_zero(i + s)).le_ratio(1, k as u64));
            if !ok {
                return CheckReport::fail("TRANSITIVE_RIGIDITY")
                    .witness("side", side)
                    .witness("pos", i)
                    .witness("value", here);
            }
        }
    }
    CheckReport::pass("TRANSITIVE_RIGIDITY")
        .param("m", shifts[0])
        .param("n", shifts[1])
}

/// Smallest phase `c` in `[0, len)` such that, cutting the line into blocks
/// `[c + q len, c + (q+1) len)`, any three consecutive blocks hold nonzero
/// symbols in at most one of them.
///
/// Only consecutive nonzeros matter. With gap `g`, they must share a block
/// (`g < len`, no cut in between) or be three cuts apart (`2 len < g < 3 len`,
/// a specific window of phases); `len <= g <= 2 len` is never allowed and
/// `g >= 3 len` always is. Each constraint is a cyclic interval of phases.
pub fn sparse_phase(block: &Block, len: u64) -> Option<u64> {
    let l = len as i64;
    let nz: Vec<i64> = block.nonzero_positions().collect();
    // diff arrays over residues: forbidden counts and required-hit counts
    let mut forbid = vec![0i32; len as usize + 1];
    let mut hit = vec![0i32; len as usize + 1];
    let mut required = 0i32;
    let add = |arr: &mut Vec<i32>, start: i64, count: i64| {
        // residues start, start+1, ..., start+count-1 (mod len), count < len
        let s = start.rem_euclid(l) as usize;
        let e = s + count as usize;
        if e <= len as usize {
            arr[s] += 1;
            arr[e] -= 1;
        } else {
            arr[s] += 1;
            arr[len as usize] -= 1;
            arr[0] += 1;
            arr[e - len as usize] -= 1;
        }
    };
    for w in nz.windows(2) {
        let (a, b) = (w[0], w[1]);
        let g = b - a;
        if g < l {
            // cut positions a+1..=b are forbidden
            add(&mut forbid, a + 1, g);
        } else if g <= 2 * l {
            return None;
        } else if g < 3 * l {
            // need a cut among a+1 ..= a+h, h = g - 2 len
            add(&mut hit, a + 1, g - 2 * l);
            required += 1;
        }
    }
    let (mut f, mut h) = (0i32, 0i32);
    for c in 0..len as usize {
        f += forbid[c];
        h += hit[c];
        if f == 0 && h == required {
            return Some(c as u64);
        }
    }
    None
}

fn sparseness(id: &str, block: &Block, len: u64) -> CheckReport {
    match sparse_phase(block, len) {
        Some(c) => CheckReport::pass(id).param("len", len).witness("phase", c),
        None => {
            // Closest pair of nonzeros that cannot be separated.
            let bad = block
                .nonzero_positions()
                .collect::<Vec<_>>()
                .windows(2)
                .find(|w| {
                    let g = (w[1] - w[0]) as u64;
                    (len..=2 * len).contains(&g)
                })
                .map(|w| (w[0], w[1]));
            let r = CheckReport::fail(id).param("len", len);
            match bad {
                Some((a, b)) => r.witness("a", a).witness("b", b),
                None => r.witness("phase", "none"),
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlidingWitness {
    /// Start of the first of the three blocks.
    pub start: i64,
    pub a: i64,
    pub b: i64,
}

/// Three consecutive length-`len` blocks, at any offset, with nonzeros in at
/// least two of them. Exists iff some consecutive nonzeros are closer than `3 len`.
pub fn sliding_witness(block: &Block, len: u64) -> Option<SlidingWitness> {
    let l = len as i64;
    let nz: Vec<i64> = block.nonzero_positions().collect();
    let (a, b) = nz
        .windows(2)
        .map(|w| (w[0], w[1]))
        .min_by_key(|&(a, b)| (b - a, a))?;
    let g = b - a;
    if g >= 3 * l {
        return None;
    }
    let start = if g <= 2 * l { a - l + 1 } else { a };
    Some(SlidingWitness { start, a, b })
}

fn orthogonality(x: &Block, y: &Block) -> CheckReport {
    let origin = (x.get(0).is_some_and(Symbol::is_one), y.get(0).is_some_and(Symbol::is_one));
    if origin != (true, true) {
        return CheckReport::fail("V").witness("pos", 0).witness("reason", "origin");
    }
    let lo = x.base().max(y.base());
    let hi = x.end().min(y.end());
    for p in lo..=hi {
        if p != 0 && !x.get_or_zero(p).is_zero() && !y.get_or_zero(p).is_zero() {
            return CheckReport::fail("V")
                .witness("pos", p)
                .witness("x", x.get_or_zero(p))
                .witness("y", y.get_or_zero(p));
        }
    }
    CheckReport::pass("V").param("range", format!("{lo}..{hi}"))
}

fn zero_tails(state: &PairState) -> CheckReport {
    let need = state.zero_tail_bound() as usize;
    let runs = [
        ("x_lead", state.x.leading_zeros()),
        ("x_trail", state.x.trailing_zeros()),
        ("y_lead", state.y.leading_zeros()),
        ("y_trail", state.y.trailing_zeros()),
    ];
    let short = runs.iter().find(|(_, have)| *have < need);
    let r = match short {
        None => CheckReport::pass("Z"),
        Some((side, have)) => CheckReport::fail("Z").witness("side", side).witness("have", have),
    };
    r.param("need", need)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    /// Candidate evaluations allowed (each is a build plus a full verification).
    pub max_attempts: usize,
    /// Refuse candidates whose stage length exceeds this.
    pub max_len: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_attempts: 24,
            max_len: 50_000_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub choice: SpacerChoice,
    pub next: PairState,
    pub attempts: usize,
}

fn lcm_all(values: impl IntoIterator<Item = u64>) -> Option<u64> {
    values.into_iter().try_fold(1u64, |acc, v| {
        let g = acc.gcd(&v);
        (acc / g).checked_mul(v)
    })
}

fn round_up(v: u64, step: u64) -> Option<u64> {
    v.div_ceil(step).checked_mul(step)
}

/// Lower bounds that failed verifications push upward.
#[derive(Debug, Clone, Copy)]
struct Floors {
    s: u64,
    sp: u64,
    tp: u64,
}

/// Spacers from the seed rule:
///
/// * `s >= 2 max(times)`, with `l + s` a multiple of every `n_k` so copies of
///   `x` keep their sparseness phase;
/// * `l + s'` at least `3(l + s)`, at least the whole support span of the next
///   `x`, and a multiple of every `m_k` (including the new one);
/// * `t' = 2(l + s')` and `t` from the length identity.
fn seed(state: &PairState, floors: Floors) -> Option<SpacerChoice> {
    let r = state.stage as u64;
    let l = state.len() as u64;
    let support = match (state.x.nonzero_positions().next(), state.x.nonzero_positions().next_back()) {
        (Some(a), Some(b)) => (b - a + 1) as u64,
        _ => 0,
    };
    let s_min = floors.s.max(state.zero_tail_bound()).max(1);
    let x_step = lcm_all(state.n.iter().copied())?;
    let pitch_x = round_up(l.checked_add(s_min)?, x_step)?;
    let s = pitch_x - l;
    let y_step = lcm_all(state.m.iter().copied().chain([pitch_x]))?;
    let want = [
        pitch_x.checked_mul(3)?,
        (2 * r).checked_mul(pitch_x)?.checked_add(support)?,
        l.checked_add(r.checked_mul(pitch_x)?)?,
        l.checked_add(floors.sp)?,
        l + s + 1,
    ]
    .into_iter()
    .max()?;
    let pitch_y = round_up(want, y_step)?;
    let sp = pitch_y - l;
    let tp = pitch_y.checked_mul(2)?.max(floors.tp);
    SpacerChoice::balanced(r, s, sp, tp)
}

pub fn solve_spacers(state: &PairState, cfg: &SolverConfig) -> Result<Solution> {
    let checks = PairCheck::required(state.times_defined() + 1, state.transitive);
    let mut floors = Floors { s: 0, sp: 0, tp: 0 };
    let mut pending = checks[0];
    for attempt in 1..=cfg.max_attempts {
        let choice = seed(state, floors)
            .ok_or_else(|| Error::Construction("spacer arithmetic overflowed".into()))?;
        let len = next_len(state, &choice).unwrap_or(u64::MAX);
        if len > cfg.max_len {
            return Err(Error::ResourceCap {
                what: "stage block",
                needed: len as u128,
                cap: cfg.max_len as u128,
            });
        }
        let next = build_stage(state, &choice)?;
        let failed = checks
            .iter()
            .map(|&c| verify(&next, c).map(|r| (c, r)))
            .find(|res| !matches!(res, Ok((_, r)) if r.passed()));
        match failed {
            None => {
                return Ok(Solution {
                    choice,
                    next,
                    attempts: attempt,
                })
            }
            Some(Err(e)) => return Err(e),
            Some(Ok((c, _))) => {
                pending = c;
                let bump = |v: u64, cur: u64| v.max(cur).max(1).saturating_mul(2);
                match c {
                    PairCheck::RigidityX(_) | PairCheck::SparseY(_) | PairCheck::TransitiveRigidity(_) => {
                        floors.s = bump(floors.s, choice.s)
                    }
                    PairCheck::ZeroTails => floors.tp = bump(floors.tp, choice.tp),
                    _ => floors.sp = bump(floors.sp, choice.sp),
                }
            }
        }
    }
    Err(Error::SolverExhausted {
        attempts: cfg.max_attempts,
        condition: pending.to_string(),
    })
}

/// The solver's decision log line.
pub fn spacer_line(r: usize, c: &SpacerChoice) -> String {
    format!("SPACERS r={r} s={} t={} sp={} tp={}", c.s, c.t, c.sp, c.tp)
}

/// Builds stage `r` from stage 1 with solver-chosen spacers. With
/// `transitive`, every build step is preceded by the interleaving step.
pub fn build(r: usize, transitive: bool, cfg: &SolverConfig) -> Result<PairState> {
    if r == 0 {
        return Err(param("stage", r, "stages start at 1"));
    }
    let mut state = PairState::initial();
    while state.stage < r {
        if transitive {
            state = build_transitive_stage(&state, Interleave::for_state(&state))?;
        }
        state = solve_spacers(&state, cfg)?.next;
    }
    Ok(state)
}
