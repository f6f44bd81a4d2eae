//! Brute-force checks on finite systems `T: {0..n-1} -> {0..n-1}`.
//!
//! On a finite set every relation is closed, an onto map is a bijection, and
//! the omega-limit set of a point is the cycle its orbit falls into. Maps that
//! are not onto are admitted on purpose; they are the only finite systems that
//! can fail to be topologically deterministic. Every report says whether the
//! system was onto.

use std::fmt;
use std::str::FromStr;

use crate::error::{param, Error, Result};
use crate::report::{CheckReport, Verdict};

/// Largest `n` for which [`is_td`] enumerates partitions (Bell(8) = 4140).
pub const TD_BOUND: usize = 8;
/// Largest `n` for which a sweep enumerates every map.
pub const MAP_SWEEP_BOUND: usize = 6;
/// Largest `n` for which a sweep enumerates every permutation.
pub const PERM_SWEEP_BOUND: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteSystem {
    map: Vec<usize>,
    onto: bool,
}

impl FiniteSystem {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        if n == 0 {
            return Err(param("n", 0, "system needs at least one point"));
        }
        let mut hit = vec![false; n];
        for (i, &v) in map.iter().enumerate() {
            if v >= n {
                return Err(param("map", v, format!("entry {i} must lie in 0..{n}")));
            }
            hit[v] = true;
        }
        let onto = hit.iter().all(|&h| h);
        Ok(FiniteSystem { map, onto })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new((0..n).collect())
    }

    pub fn size(&self) -> usize {
        self.map.len()
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn is_onto(&self) -> bool {
        self.onto
    }

    /// `T^k x`.
    pub fn iterate(&self, mut x: usize, k: usize) -> usize {
        for _ in 0..k {
            x = self.map[x];
        }
        x
    }
}

/// `S x T` on pairs, with `(a, b)` encoded as `a * |Y| + b`.
pub fn product_system(a: &FiniteSystem, b: &FiniteSystem) -> FiniteSystem {
    let nb = b.size();
    let map = (0..a.size() * nb)
        .map(|p| a.apply(p / nb) * nb + b.apply(p % nb))
        .collect();
    FiniteSystem::new(map).expect("product of valid systems")
}

/// `T^k` for `k >= 1`.
pub fn power_system(sys: &FiniteSystem, k: usize) -> Result<FiniteSystem> {
    if k == 0 {
        return Err(param("N", 0, "power must be at least 1"));
    }
    FiniteSystem::new((0..sys.size()).map(|x| sys.iterate(x, k)).collect())
}

/// `FSYS n=<n> map=<v0,v1,...>`.
impl fmt::Display for FiniteSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FSYS n={} map={}", self.size(), join(&self.map))
    }
}

impl FromStr for FiniteSystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed system line {s:?}"));
        let rest = s.strip_prefix("FSYS n=").ok_or_else(bad)?;
        let (n, map) = rest.split_once(" map=").ok_or_else(bad)?;
        let n: usize = n.parse().map_err(|_| bad())?;
        let sys = parse_map(map)?;
        if sys.size() != n {
            return Err(Error::LengthMismatch {
                left: n,
                right: sys.size(),
            });
        }
        Ok(sys)
    }
}

/// Parses a bare table `v0,v1,...`.
pub fn parse_map(text: &str) -> Result<FiniteSystem> {
    let map = text
        .split(',')
        .map(|v| {
            v.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad map entry {v:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    FiniteSystem::new(map)
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Every map on `n` points, in lexicographic order of the table.
pub fn all_maps(n: usize) -> impl Iterator<Item = FiniteSystem> {
    let total = (n as u64).pow(n as u32);
    (0..total).map(move |mut code| {
        let mut map = vec![0; n];
        for slot in map.iter_mut().rev() {
            *slot = (code % n as u64) as usize;
            code /= n as u64;
        }
        FiniteSystem::new(map).expect("digits are in range")
    })
}

/// Every permutation of `n` points, in lexicographic order.
pub fn all_permutations(n: usize) -> impl Iterator<Item = FiniteSystem> {
    let mut next: Option<Vec<usize>> = Some((0..n).collect());
    std::iter::from_fn(move || {
        let cur = next.take()?;
        let mut p = cur.clone();
        // standard next-permutation step
        if let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) {
            let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot exists");
            p.swap(i - 1, j);
            p[i..].reverse();
            next = Some(p);
        }
        Some(FiniteSystem::new(cur).expect("permutation is in range"))
    })
}

/// An equivalence relation, stored as a restricted growth string: `label[0] = 0`
/// and each label is at most one more than every label before it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    label: Vec<usize>,
}

impl Partition {
    /// Normalizes arbitrary block labels.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut seen: Vec<(usize, usize)> = Vec::new();
        let label = labels
            .iter()
            .map(|&l| match seen.iter().find(|(old, _)| *old == l) {
                Some(&(_, new)) => new,
                None => {
                    seen.push((l, seen.len()));
                    seen.len() - 1
                }
            })
            .collect();
        Partition { label }
    }

    /// The equality relation.
    pub fn diagonal(n: usize) -> Self {
        Partition { label: (0..n).collect() }
    }

    pub fn full(n: usize) -> Self {
        Partition { label: vec![0; n] }
    }

    /// `(S x S) ∪ diagonal`.
    pub fn collapsing(n: usize, set: &[usize]) -> Self {
        let mut labels: Vec<usize> = (1..=n).collect();
        for &p in set {
            labels[p] = 0;
        }
        Self::from_labels(&labels)
    }

    pub fn size(&self) -> usize {
        self.label.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.label
    }

    pub fn block_count(&self) -> usize {
        self.label.iter().max().map_or(0, |m| m + 1)
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.label[a] == self.label[b]
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.block_count()];
        for (p, &l) in self.label.iter().enumerate() {
            out[l].push(p);
        }
        out
    }

    /// Related pairs as a row-major `n x n` table.
    fn pair_table(&self) -> Vec<bool> {
        let n = self.size();
        (0..n * n).map(|p| self.related(p / n, p % n)).collect()
    }
}

/// Blocks joined by `|`, e.g. `0,1|2`.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self.blocks().iter().map(|b| join(b)).collect();
        f.write_str(&blocks.join("|"))
    }
}

/// Every partition of `n` points in lexicographic order of the growth string,
/// from the full relation to the diagonal.
pub fn partitions(n: usize) -> impl Iterator<Item = Partition> {
    let mut next: Option<Vec<usize>> = (n > 0).then(|| vec![0; n]);
    std::iter::from_fn(move || {
        let cur = next.take()?;
        let mut rgs = cur.clone();
        // increment the rightmost position that can still grow, reset the tail
        let mut i = rgs.len();
        while i > 1 {
            i -= 1;
            let cap = rgs[..i].iter().max().copied().unwrap_or(0) + 1;
            if rgs[i] < cap {
                rgs[i] += 1;
                rgs[i + 1..].iter_mut().for_each(|v| *v = 0);
                next = Some(rgs);
                break;
            }
        }
        Some(Partition { label: cur })
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Invariance {
    NotForwardInvariant,
    ForwardInvariantOnly,
    Invariant,
}

impl fmt::Display for Invariance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Invariance::NotForwardInvariant => "NOT_FORWARD_INVARIANT",
            Invariance::ForwardInvariantOnly => "FORWARD_INVARIANT_ONLY",
            Invariance::Invariant => "INVARIANT",
        })
    }
}

/// Compares the raw image `{(Ta, Tb) : a R b}` with `R` as sets of pairs.
pub fn classify_relation(sys: &FiniteSystem, rel: &Partition) -> Result<Invariance> {
    let n = sys.size();
    if rel.size() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: rel.size(),
        });
    }
    let pairs = rel.pair_table();
    let mut image = vec![false; n * n];
    for a in 0..n {
        for b in 0..n {
            if pairs[a * n + b] {
                image[sys.apply(a) * n + sys.apply(b)] = true;
            }
        }
    }
    let inside = image.iter().zip(&pairs).all(|(&i, &r)| !i || r);
    Ok(if !inside {
        Invariance::NotForwardInvariant
    } else if image == pairs {
        Invariance::Invariant
    } else {
        Invariance::ForwardInvariantOnly
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TdOutcome {
    pub td: bool,
    /// First forward-invariant relation that is not invariant.
    pub witness: Option<Partition>,
    pub examined: usize,
}

/// Whether every forward-invariant relation is invariant.
///
/// Partitions are tried finest first, so a map that is not onto is caught at
/// the diagonal.
pub fn is_td(sys: &FiniteSystem) -> Result<TdOutcome> {
    let n = sys.size();
    if n > TD_BOUND {
        return Err(Error::ResourceCap {
            what: "points for partition enumeration",
            needed: n as u128,
            cap: TD_BOUND as u128,
        });
    }
    let all: Vec<Partition> = partitions(n).collect();
    for (i, p) in all.iter().rev().enumerate() {
        if classify_relation(sys, p)? == Invariance::ForwardInvariantOnly {
            return Ok(TdOutcome {
                td: false,
                witness: Some(p.clone()),
                examined: i + 1,
            });
        }
    }
    Ok(TdOutcome {
        td: true,
        witness: None,
        examined: all.len(),
    })
}

/// The cycle the orbit of `x` eventually enters, sorted.
pub fn omega_limit(sys: &FiniteSystem, x: usize) -> Vec<usize> {
    let mut seen = vec![false; sys.size()];
    let mut p = x;
    while !seen[p] {
        seen[p] = true;
        p = sys.apply(p);
    }
    // p is on the cycle now
    let mut cycle = vec![p];
    let mut q = sys.apply(p);
    while q != p {
        cycle.push(q);
        q = sys.apply(q);
    }
    cycle.sort_unstable();
    cycle
}

/// A point is forward recurrent iff it lies on a cycle.
pub fn is_recurrent(sys: &FiniteSystem, x: usize) -> bool {
    sys.iterate(x, sys.size()) == x || omega_limit(sys, x).binary_search(&x).is_ok()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitCollapse {
    pub point: usize,
    /// The forward orbit together with its omega-limit set.
    pub x0: Vec<usize>,
    pub relation: Partition,
    pub class: Invariance,
}

impl OrbitCollapse {
    pub fn report(&self, sys: &FiniteSystem) -> CheckReport {
        let verdict = if self.class == Invariance::ForwardInvariantOnly {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        CheckReport::new("COLLAPSE", verdict)
            .param("n", sys.size())
            .param("point", self.point)
            .param("onto", sys.is_onto())
            .witness("x0", join(&self.x0))
            .witness("relation", &self.relation)
            .witness("class", self.class)
    }
}

/// Collapses the orbit closure of a non-recurrent point to one class.
pub fn orbit_collapse(sys: &FiniteSystem, x: usize) -> Result<OrbitCollapse> {
    let n = sys.size();
    if x >= n {
        return Err(param("point", x, format!("must lie in 0..{n}")));
    }
    if is_recurrent(sys, x) {
        return Err(param("point", x, "point is recurrent; the construction needs a non-recurrent point"));
    }
    let mut x0 = omega_limit(sys, x);
    let mut p = x;
    while x0.binary_search(&p).is_err() {
        let at = x0.binary_search(&p).unwrap_err();
        x0.insert(at, p);
        p = sys.apply(p);
    }
    let relation = Partition::collapsing(n, &x0);
    let class = classify_relation(sys, &relation)?;
    Ok(OrbitCollapse {
        point: x,
        x0,
        relation,
        class,
    })
}

/// Tallies from [`power_checks`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PowerTally {
    pub recurrence_checked: u64,
    pub decompositions: u64,
    /// Powers for which every product pair was recurrent and `is_td` was run.
    pub td_powers: u64,
}

/// The union of `omega_{T^N}(T^k x)` over `0 <= k < N`.
pub fn omega_decomposition(sys: &FiniteSystem, power: &FiniteSystem, x: usize, big_n: usize) -> Vec<usize> {
    let mut union: Vec<usize> = (0..big_n)
        .flat_map(|k| omega_limit(power, sys.iterate(x, k)))
        .collect();
    union.sort_unstable();
    union.dedup();
    union
}

fn every_pair_recurrent(sys: &FiniteSystem) -> bool {
    let prod = product_system(sys, sys);
    (0..prod.size()).all(|p| is_recurrent(&prod, p))
}

/// Recurrence under powers, the omega-limit decomposition over residues, and
/// determinism of every power when every product pair is recurrent.
pub fn power_checks(sys: &FiniteSystem, nmax: usize) -> Result<(CheckReport, PowerTally)> {
    if nmax == 0 {
        return Err(param("Nmax", 0, "must be at least 1"));
    }
    let n = sys.size();
    let mut tally = PowerTally::default();
    let base = |v: Verdict| {
        CheckReport::new("POWERS", v)
            .param("n", n)
            .param("Nmax", nmax)
            .param("onto", sys.is_onto())
    };
    let pairs_recurrent = every_pair_recurrent(sys);
    for big_n in 1..=nmax {
        let power = power_system(sys, big_n)?;
        for x in 0..n {
            let omega = omega_limit(sys, x);
            if is_recurrent(sys, x) {
                tally.recurrence_checked += 1;
                if !is_recurrent(&power, x) {
                    return Ok((
                        base(Verdict::Fail).witness("part", "a").witness("N", big_n).witness("x", x),
                        tally,
                    ));
                }
            }
            tally.decompositions += 1;
            if omega_decomposition(sys, &power, x, big_n) != omega {
                return Ok((
                    base(Verdict::Fail).witness("part", "b").witness("N", big_n).witness("x", x),
                    tally,
                ));
            }
        }
        if pairs_recurrent {
            tally.td_powers += 1;
            let out = is_td(&power)?;
            if !out.td {
                let w = out.witness.expect("non-td outcome has a witness");
                return Ok((
                    base(Verdict::Fail)
                        .witness("part", "c")
                        .witness("N", big_n)
                        .witness("relation", w),
                    tally,
                ));
            }
        }
    }
    let r = base(Verdict::Pass)
        .witness("recurrent", tally.recurrence_checked)
        .witness("decompositions", tally.decompositions)
        .witness("td_powers", tally.td_powers);
    Ok((r, tally))
}

/// Aggregated exhaustive sweep over every map (or permutation) on `n` points.
///
/// Emits one `TD`, one `COLLAPSE` and one `POWERS` report per `n`; a failure
/// names the first offending system.
pub fn sweep(n: usize, permutations_only: bool, nmax: usize) -> Result<Vec<CheckReport>> {
    let bound = if permutations_only {
        PERM_SWEEP_BOUND
    } else {
        MAP_SWEEP_BOUND
    };
    if n == 0 || n > bound {
        return Err(Error::ResourceCap {
            what: "points for an exhaustive sweep",
            needed: n as u128,
            cap: bound as u128,
        });
    }
    let family = if permutations_only { "permutations" } else { "maps" };
    let systems: Box<dyn Iterator<Item = FiniteSystem>> = if permutations_only {
        Box::new(all_permutations(n))
    } else {
        Box::new(all_maps(n))
    };
    let head = |id: &str| {
        CheckReport::pass(id)
            .param("n", n)
            .param("family", family)
            .param("non_onto", if permutations_only { "excluded" } else { "admitted" })
    };

    let mut count = 0u64;
    let mut onto = 0u64;
    let mut diagonal = 0u64;
    let mut td_fail: Option<CheckReport> = None;
    let mut collapse_points = 0u64;
    let mut collapse_fail: Option<CheckReport> = None;
    let mut powers = PowerTally::default();
    let mut power_fail: Option<CheckReport> = None;

    for sys in systems {
        count += 1;
        onto += sys.is_onto() as u64;
        if td_fail.is_none() {
            let out = is_td(&sys)?;
            let expected = sys.is_onto();
            let diag_ok = out.witness.as_ref().is_none_or(|w| *w == Partition::diagonal(n));
            if out.td != expected || !diag_ok {
                td_fail = Some(
                    CheckReport::fail("TD")
                        .param("n", n)
                        .param("family", family)
                        .witness("system", sys.map().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
                        .witness("onto", sys.is_onto())
                        .witness("td", out.td),
                );
            } else if !out.td {
                diagonal += 1;
            }
        }
        if collapse_fail.is_none() {
            for x in (0..n).filter(|&x| !is_recurrent(&sys, x)) {
                collapse_points += 1;
                let col = orbit_collapse(&sys, x)?;
                if col.class != Invariance::ForwardInvariantOnly {
                    collapse_fail = Some(col.report(&sys).witness("system", join(sys.map())));
                    break;
                }
            }
        }
        if power_fail.is_none() {
            let (r, t) = power_checks(&sys, nmax)?;
            if r.failed() {
                power_fail = Some(r.witness("system", join(sys.map())));
            } else {
                powers.recurrence_checked += t.recurrence_checked;
                powers.decompositions += t.decompositions;
                powers.td_powers += t.td_powers;
            }
        }
    }

    let td = td_fail.unwrap_or_else(|| {
        head("TD")
            .witness("systems", count)
            .witness("onto", onto)
            .witness("diagonal_witnesses", diagonal)
    });
    let collapse = collapse_fail.unwrap_or_else(|| {
        head("COLLAPSE")
            .witness("systems", count)
            .witness("points", collapse_points)
    });
    let powers = power_fail.unwrap_or_else(|| {
        head("POWERS")
            .param("Nmax", nmax)
            .witness("systems", count)
            .witness("recurrent", powers.recurrence_checked)
            .witness("decompositions", powers.decompositions)
            .witness("td_powers", powers.td_powers)
    });
    Ok(vec![td, collapse, powers])
}
