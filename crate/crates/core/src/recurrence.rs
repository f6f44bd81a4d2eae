//! Finite-window recurrence certificates.
//!
//! Points of the shift are represented by a built block plus a shift offset.
//! Distances use the weighted supremum `max 2^{-|i|} |p(i) - q(i)|` over a
//! window of radius `W`; the ignored tail contributes at most `2^{-(W+1)}`.
//! All arithmetic is exact. Reading outside the built block is an error.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::block::Block;
use crate::error::{param, Error, Result};
use crate::product::PairState;
use crate::report::CheckReport;
use crate::symbol::Symbol;

/// Which coordinates a window covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sides {
    /// Offsets `0..=W`, for one-sided sequences.
    One,
    /// Offsets `-W..=W`.
    Two,
}

/// `T^shift` applied to the point generated by `block`, seen through a window.
///
/// Offset `i` of the window reads `block(origin + shift + i)`. For two-sided
/// points the origin is 0; for one-sided points it is the first position.
#[derive(Debug, Clone, Copy)]
pub struct WindowPoint<'a> {
    pub block: &'a Block,
    pub origin: i64,
    pub shift: i64,
    pub radius: u32,
    pub sides: Sides,
}

impl<'a> WindowPoint<'a> {
    pub fn two_sided(block: &'a Block, shift: i64, radius: u32) -> Self {
        WindowPoint {
            block,
            origin: 0,
            shift,
            radius,
            sides: Sides::Two,
        }
    }

    pub fn one_sided(block: &'a Block, shift: i64, radius: u32) -> Self {
        WindowPoint {
            block,
            origin: block.base(),
            shift,
            radius,
            sides: Sides::One,
        }
    }

    /// `T^n` applied to this point.
    pub fn shifted(&self, n: i64) -> Self {
        WindowPoint {
            shift: self.shift + n,
            ..*self
        }
    }

    fn offsets(&self) -> std::ops::RangeInclusive<i64> {
        let w = self.radius as i64;
        match self.sides {
            Sides::One => 0..=w,
            Sides::Two => -w..=w,
        }
    }

    /// Value at window offset `i`.
    pub fn at(&self, i: i64) -> Result<&'a Symbol> {
        self.block.at(self.origin + self.shift + i)
    }

    /// Positions of the block the window reads, as an inclusive range.
    pub fn span(&self) -> (i64, i64) {
        let o = self.offsets();
        let base = self.origin + self.shift;
        (base + o.start(), base + o.end())
    }

    pub fn in_range(&self) -> bool {
        let (lo, hi) = self.span();
        self.block.contains(lo) && self.block.contains(hi)
    }
}

/// `2^{-e}` as an exact rational.
pub fn pow2_inv(e: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << e)
}

/// Bound on the part of the full distance that a radius-`W` window misses.
pub fn tail_bound(radius: u32) -> BigRational {
    pow2_inv(radius + 1)
}

pub fn window_distance(p: &WindowPoint<'_>, q: &WindowPoint<'_>) -> Result<BigRational> {
    if p.radius != q.radius || p.sides != q.sides {
        return Err(param(
            "radius",
            format!("{}/{}", p.radius, q.radius),
            "window points must share radius and sidedness",
        ));
    }
    let mut best = BigRational::zero();
    for i in p.offsets() {
        let d = p.at(i)?.abs_diff(q.at(i)?);
        if d.is_zero() {
            continue;
        }
        let weighted = d.to_big() * pow2_inv(i.unsigned_abs() as u32);
        if weighted > best {
            best = weighted;
        }
    }
    Ok(best)
}

/// Product-metric distance: the max over components.
fn product_distance(shifted: &[WindowPoint<'_>], base: &[WindowPoint<'_>]) -> Result<BigRational> {
    let mut best = BigRational::zero();
    for (a, b) in shifted.iter().zip(base) {
        let d = window_distance(a, b)?;
        if d > best {
            best = d;
        }
    }
    Ok(best)
}

/// All `n` in `1..=horizon` with `d(T^n p, p) < eps`, increasing. Several
/// points are treated as one point of the product system with the max metric.
pub fn epsilon_recurrence_times(
    points: &[WindowPoint<'_>],
    eps: &BigRational,
    horizon: u64,
) -> Result<Vec<u64>> {
    if points.is_empty() {
        return Err(param("points", 0, "need at least one point"));
    }
    for p in points {
        let far = p.shifted(horizon as i64);
        if !p.in_range() || !far.in_range() {
            let (lo, hi) = far.span();
            let bad = if p.block.contains(lo) { hi } else { lo };
            return Err(Error::OutOfRange {
                index: bad,
                lo: p.block.base(),
                hi: p.block.end(),
            });
        }
    }
    let mut times = Vec::new();
    for n in 1..=horizon {
        let shifted: Vec<_> = points.iter().map(|p| p.shifted(n as i64)).collect();
        if product_distance(&shifted, points)? < *eps {
            times.push(n);
        }
    }
    Ok(times)
}

/// `min(x*(n), y*(n)) = 0` for every `0 < |n| <= horizon`, with `x*(0) = y*(0) = 1`.
///
/// Under these, the `n`-shifted pair is at distance at least 1 from `(x*, y*)`
/// at coordinate 0, so the pair never returns.
pub fn pair_separation_check(state: &PairState, horizon: u64) -> Result<CheckReport> {
    let h = horizon as i64;
    if h > state.half_width() {
        return Err(Error::OutOfRange {
            index: h,
            lo: -state.half_width(),
            hi: state.half_width(),
        });
    }
    let base = CheckReport::pass("PAIR_SEP")
        .param("stage", state.stage())
        .param("horizon", horizon);
    let (x0, y0) = (state.x_star(0)?, state.y_star(0)?);
    if !x0.is_one() || !y0.is_one() {
        return Ok(CheckReport {
            verdict: crate::Verdict::Fail,
            ..base
        }
        .witness("n", 0)
        .witness("x", x0)
        .witness("y", y0));
    }
    for step in 1..=h {
        for n in [step, -step] {
            let (xv, yv) = (state.x_star(n)?, state.y_star(n)?);
            if !xv.is_zero() && !yv.is_zero() {
                return Ok(CheckReport {
                    verdict: crate::Verdict::Fail,
                    ..base
                }
                .witness("n", n)
                .witness("x", xv)
                .witness("y", yv));
            }
        }
    }
    Ok(base)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EscapeSide {
    /// `x*` vanishes on a window shifted by `r n_k`.
    XatN,
    /// `y*` vanishes on a window shifted by `r m_k`.
    YatM,
}

impl fmt::Display for EscapeSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EscapeSide::XatN => "XatN",
            EscapeSide::YatM => "YatM",
        })
    }
}

/// Per-center multipliers, or the first center with none.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EscapeMap {
    pub k: usize,
    pub w: u64,
    pub side: EscapeSide,
    pub scale: u64,
    pub first_center: i64,
    /// `choices[c]` is the smallest valid `r` for center `first_center + c`.
    pub choices: Vec<u8>,
    /// Per-center count of valid `r` values.
    pub valid_counts: Vec<u8>,
    pub failure: Option<i64>,
}

impl EscapeMap {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    pub fn centers(&self) -> impl Iterator<Item = (i64, u8)> + '_ {
        self.choices
            .iter()
            .enumerate()
            .map(move |(c, &r)| (self.first_center + c as i64, r))
    }

    pub fn report(&self, stage: usize) -> CheckReport {
        let r = CheckReport::new(
            "ESCAPE",
            if self.passed() {
                crate::Verdict::Pass
            } else {
                crate::Verdict::Fail
            },
        )
        .param("side", self.side)
        .param("k", self.k)
        .param("w", self.w)
        .param("stage", stage);
        let mut hist = [0u64; 4];
        for &c in &self.choices {
            hist[c as usize] += 1;
        }
        let r = r
            .witness("centers", self.choices.len())
            .witness("r1", hist[1])
            .witness("r2", hist[2])
            .witness("r3", hist[3]);
        match self.failure {
            Some(j) => r.witness("center", j),
            None => r,
        }
    }

    /// `WITNESS kind=escape k=<k> center=<j> r=<r>` lines.
    pub fn witness_lines(&self) -> impl Iterator<Item = String> + '_ {
        self.centers()
            .map(move |(j, r)| format!("WITNESS kind=escape k={} center={j} r={r}", self.k))
    }
}

/// Centers `j` with `[j - w, j + w]` and `[j - w + 3 scale, j + w + 3 scale]`
/// inside `block`.
fn center_range(block: &Block, w: i64, scale: i64) -> Option<(i64, i64)> {
    let lo = block.base() + w;
    let hi = block.end() - w - 3 * scale;
    (lo <= hi).then_some((lo, hi))
}

fn check_escape_params(state: &PairState, k: usize, w: u64, scale: Option<u64>) -> Result<u64> {
    let max = state.times_defined();
    if k == 0 || k > max {
        return Err(param("k", k, format!("must lie in 1..={max}")));
    }
    let scale = scale.expect("k in range");
    if w >= scale {
        return Err(param("w", w, format!("window outruns the scale {scale}")));
    }
    Ok(scale)
}

pub fn escape_witness(state: &PairState, k: usize, w: u64, side: EscapeSide) -> Result<EscapeMap> {
    let (block, scale) = match side {
        EscapeSide::XatN => (state.x(), state.n(k)),
        EscapeSide::YatM => (state.y(), state.m(k)),
    };
    let scale = check_escape_params(state, k, w, scale)?;
    let (wi, si) = (w as i64, scale as i64);
    let (lo, hi) = center_range(block, wi, si)
        .ok_or_else(|| param("w", w, "no admissible centers in the built range"))?;
    let mut map = EscapeMap {
        k,
        w,
        side,
        scale,
        first_center: lo,
        choices: Vec::with_capacity((hi - lo + 1) as usize),
        valid_counts: Vec::with_capacity((hi - lo + 1) as usize),
        failure: None,
    };
    for j in lo..=hi {
        let valid: Vec<u8> = (1..=3u8)
            .filter(|&r| {
                let c = j + r as i64 * si;
                !block.has_nonzero_in(c - wi, c + wi)
            })
            .collect();
        match valid.first() {
            Some(&r) => {
                map.choices.push(r);
                map.valid_counts.push(valid.len() as u8);
            }
            None => {
                map.failure = Some(j);
                break;
            }
        }
    }
    Ok(map)
}

/// Center `j` with the multipliers used for `(x, 0)` and for `(0, y)`.
pub type CrossChoice = (i64, u8, u8);

/// Witnesses that `(x, 0)` and `(0, y)` lie in the product omega-limit set of
/// `(T^j x*, T^j y*)`, at scale `k` and window radius `w`, for every admissible
/// center `j`: some `r <= 3` moves `x` by `r m_k` to within `3/k` of itself on
/// the window while `y` lands on zeros, and symmetrically with `n_k`.
pub fn cross_omega_witness(state: &PairState, k: usize, w: u64) -> Result<(CheckReport, Vec<CrossChoice>)> {
    let m = check_escape_params(state, k, w, state.m(k))?;
    let n = check_escape_params(state, k, w, state.n(k))?;
    let wi = w as i64;
    let (x, y) = (state.x(), state.y());
    let lo = x.base() + wi;
    let hi = x.end() - wi - 3 * (m.max(n) as i64);
    let base = CheckReport::pass("OMEGA")
        .param("k", k)
        .param("w", w)
        .param("stage", state.stage());
    if lo > hi {
        return Err(param("w", w, "no admissible centers in the built range"));
    }

    // (moving, still) is either (x, y) at m_k or (y, x) at n_k.
    let find = |moving: &Block, still: &Block, scale: i64, j: i64| -> std::result::Result<u8, &'static str> {
        let mut zero_ok = false;
        for r in 1..=3u8 {
            let c = j + r as i64 * scale;
            if still.has_nonzero_in(c - wi, c + wi) {
                continue;
            }
            zero_ok = true;
            let close = (-wi..=wi).all(|i| {
                moving
                    .get_or_zero(j + i)
                    .abs_diff(moving.get_or_zero(c + i))
                    .le_ratio(3, k as u64)
            });
            if close {
                return Ok(r);
            }
        }
        Err(if zero_ok { "a" } else { "b" })
    };

    let mut choices = Vec::with_capacity((hi - lo + 1) as usize);
    for j in lo..=hi {
        let xs = find(x, y, m as i64, j);
        let ys = find(y, x, n as i64, j);
        match (xs, ys) {
            (Ok(rx), Ok(ry)) => choices.push((j, rx, ry)),
            (Err(part), _) => {
                let r = CheckReport {
                    verdict: crate::Verdict::Fail,
                    ..base
                };
                return Ok((r.witness("center", j).witness("witness", "x0").witness("part", part), choices));
            }
            (_, Err(part)) => {
                let r = CheckReport {
                    verdict: crate::Verdict::Fail,
                    ..base
                };
                return Ok((r.witness("center", j).witness("witness", "0y").witness("part", part), choices));
            }
        }
    }
    let r = base.witness("centers", choices.len());
    Ok((r, choices))
}

/// `WITNESS kind=omega k=<k> center=<j> r=<r>` lines; `r` is reported as `rx/ry`.
pub fn omega_witness_lines(k: usize, choices: &[CrossChoice]) -> impl Iterator<Item = String> + '_ {
    choices
        .iter()
        .map(move |(j, rx, ry)| format!("WITNESS kind=omega k={k} center={j} r={rx}/{ry}"))
}
