//! The non-crossing partition lattice `NC(n)`, its refinement order and
//! Möbius function, and the constrained families `NC(S)` (even alternating
//! blocks) and `NC₂(S)` (pairings) attached to a 1/∗ string.

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::strings::{StarString, Symbol};

/// Largest `n` for which `NC(n)` is enumerated (`Catalan(12) = 208012`).
pub const NC_MAX_N: usize = 12;
/// Longest string for which `NC(S)` is enumerated.
pub const NC_S_MAX_LEN: usize = 24;

/// A set partition of `{1..n}` in canonical form: blocks ordered by their
/// minimum, elements sorted inside each block.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn new(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n + 1];
        let mut count = 0;
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::domain("empty block"));
            }
            b.sort_unstable();
            for &e in b.iter() {
                if e == 0 || e > n {
                    return Err(Error::domain(format!("element {e} outside 1..={n}")));
                }
                if seen[e] {
                    return Err(Error::domain(format!("element {e} repeated")));
                }
                seen[e] = true;
                count += 1;
            }
        }
        if count != n {
            return Err(Error::domain("blocks do not cover the ground set"));
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(SetPartition { n, blocks })
    }

    pub fn singletons(n: usize) -> Self {
        SetPartition {
            n,
            blocks: (1..=n).map(|e| vec![e]).collect(),
        }
    }

    pub fn full(n: usize) -> Self {
        SetPartition {
            n,
            blocks: if n == 0 { vec![] } else { vec![(1..=n).collect()] },
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Block index of each element (1-based elements; `rgs()[e-1]` is the
    /// index of the block containing `e` in canonical order). This is the
    /// restricted-growth encoding used for memo keys and sort order.
    pub fn rgs(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for (bi, b) in self.blocks.iter().enumerate() {
            for &e in b {
                out[e - 1] = bi;
            }
        }
        out
    }

    /// True iff no `a<b<c<d` has `{a,c}` and `{b,d}` in different blocks.
    pub fn is_noncrossing(&self) -> bool {
        let rgs = self.rgs();
        let mut last = vec![0usize; self.blocks.len()];
        for (pos, &b) in rgs.iter().enumerate() {
            last[b] = pos;
        }
        let mut seen = vec![false; self.blocks.len()];
        let mut stack: Vec<usize> = Vec::new();
        for (pos, &b) in rgs.iter().enumerate() {
            while let Some(&top) = stack.last() {
                if last[top] < pos {
                    stack.pop();
                } else {
                    break;
                }
            }
            if !seen[b] {
                seen[b] = true;
                stack.push(b);
            } else if stack.last() != Some(&b) {
                return false;
            }
        }
        true
    }

    /// Refinement order: `self ≤ other` iff every block of `self` is
    /// contained in a block of `other`.
    pub fn leq(&self, other: &SetPartition) -> bool {
        if self.n != other.n {
            return false;
        }
        let coarse = other.rgs();
        self.blocks
            .iter()
            .all(|b| b.iter().all(|&e| coarse[e - 1] == coarse[b[0] - 1]))
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.blocks {
            write!(f, "{{")?;
            for (i, e) in b.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

fn sort_canonical(mut parts: Vec<SetPartition>) -> Vec<SetPartition> {
    parts.sort_by_key(|p| p.rgs());
    parts
}

/// All of `NC(n)` in lexicographic order of the canonical encoding.
/// `|result| = Catalan(n)`.
pub fn enumerate_nc(n: usize) -> Result<Vec<SetPartition>> {
    if n > NC_MAX_N {
        return Err(Error::resource(format!(
            "NC({n}) enumeration exceeds the n <= {NC_MAX_N} guard"
        )));
    }
    let mut out = Vec::new();
    let mut acc: Vec<Vec<usize>> = Vec::new();
    enum_nc_interval(0, n, &mut acc, &mut out);
    let parts = out
        .into_iter()
        .map(|blocks| {
            SetPartition::new(n, blocks.into_iter().map(|b| b.iter().map(|e| e + 1).collect()).collect())
                .expect("generated partition is valid")
        })
        .collect();
    Ok(sort_canonical(parts))
}

// Enumerates NC partitions of the interval [lo, hi) (0-based) by recursing
// on the block of the leftmost element; the segments between consecutive
// block elements and the tail are partitioned independently.
fn enum_nc_interval(lo: usize, hi: usize, acc: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
    if lo >= hi {
        out.push(acc.clone());
        return;
    }
    let mut block = vec![lo];
    extend_nc_block(lo, hi, &mut block, acc, out);
}

fn extend_nc_block(
    prev: usize,
    hi: usize,
    block: &mut Vec<usize>,
    acc: &mut Vec<Vec<usize>>,
    out: &mut Vec<Vec<Vec<usize>>>,
) {
    // Close the block here and partition the tail.
    acc.push(block.clone());
    enum_nc_interval(prev + 1, hi, acc, out);
    acc.pop();
    // Or extend with a further element v, partitioning the gap first.
    for v in prev + 1..hi {
        let mut gaps = Vec::new();
        let mut empty_acc = Vec::new();
        enum_nc_interval(prev + 1, v, &mut empty_acc, &mut gaps);
        for gap in gaps {
            let added = gap.len();
            acc.extend(gap);
            block.push(v);
            extend_nc_block(v, hi, block, acc, out);
            block.pop();
            acc.truncate(acc.len() - added);
        }
    }
}

/// Möbius function of the interval `[s, p]` in `NC(n)`, computed by the
/// memoized recursion `μ(s,p) = -Σ_{s ≤ τ < p} μ(s,τ)`.
pub fn moebius(s: &SetPartition, p: &SetPartition) -> Result<BigInt> {
    if s.n() != p.n() {
        return Err(Error::domain("partitions of different ground sets"));
    }
    if !s.leq(p) {
        return Err(Error::domain("moebius requires s <= p"));
    }
    let interval: Vec<SetPartition> = enumerate_nc(s.n())?
        .into_iter()
        .filter(|t| s.leq(t) && t.leq(p))
        .collect();
    // Process by descending block count; refinement strictly decreases it.
    let mut order: Vec<usize> = (0..interval.len()).collect();
    order.sort_by(|&a, &b| interval[b].num_blocks().cmp(&interval[a].num_blocks()));
    let mut mu: HashMap<Vec<usize>, BigInt> = HashMap::new();
    for idx in order {
        let tau = &interval[idx];
        let val = if tau == s {
            BigInt::one()
        } else {
            let mut acc = BigInt::zero();
            for sigma in &interval {
                if sigma != tau && sigma.leq(tau) {
                    acc += mu.get(&sigma.rgs()).expect("processed by block count");
                }
            }
            -acc
        };
        mu.insert(tau.rgs(), val);
    }
    Ok(mu.remove(&p.rgs()).expect("p is in its own interval"))
}

struct StringCtx {
    syms: Vec<Symbol>,
    // prefix[k] = #ones - #stars among the first k letters.
    prefix: Vec<i64>,
}

impl StringCtx {
    fn new(s: &StarString) -> Self {
        let syms = s.symbols();
        let mut prefix = Vec::with_capacity(syms.len() + 1);
        prefix.push(0i64);
        let mut h = 0i64;
        for &c in &syms {
            h += if c == Symbol::One { 1 } else { -1 };
            prefix.push(h);
        }
        StringCtx { syms, prefix }
    }

    fn balanced(&self, lo: usize, hi: usize) -> bool {
        // [lo, hi) half-open.
        self.prefix[hi] == self.prefix[lo]
    }
}

/// All partitions in `NC(S)`: every block has even size and alternates
/// between `1` and `∗` along `S`. Empty for unbalanced `S`.
pub fn enumerate_nc_alternating(s: &StarString) -> Result<Vec<SetPartition>> {
    let n = s.total_length();
    if n > NC_S_MAX_LEN {
        return Err(Error::resource(format!(
            "NC(S) enumeration exceeds the length <= {NC_S_MAX_LEN} guard"
        )));
    }
    if !s.is_balanced() {
        return Ok(Vec::new());
    }
    let ctx = StringCtx::new(s);
    let mut out = Vec::new();
    let mut acc = Vec::new();
    enum_ncs_interval(&ctx, 0, n, &mut acc, &mut out);
    let parts = out
        .into_iter()
        .map(|blocks| {
            SetPartition::new(n, blocks.into_iter().map(|b| b.iter().map(|e| e + 1).collect()).collect())
                .expect("generated partition is valid")
        })
        .collect();
    Ok(sort_canonical(parts))
}

fn enum_ncs_interval(
    ctx: &StringCtx,
    lo: usize,
    hi: usize,
    acc: &mut Vec<Vec<usize>>,
    out: &mut Vec<Vec<Vec<usize>>>,
) {
    if lo >= hi {
        out.push(acc.clone());
        return;
    }
    if !ctx.balanced(lo, hi) {
        return;
    }
    let mut block = vec![lo];
    extend_ncs_block(ctx, lo, hi, &mut block, acc, out);
}

fn extend_ncs_block(
    ctx: &StringCtx,
    lo: usize,
    hi: usize,
    block: &mut Vec<usize>,
    acc: &mut Vec<Vec<usize>>,
    out: &mut Vec<Vec<Vec<usize>>>,
) {
    let prev = *block.last().unwrap();
    for v in prev + 1..hi {
        if ctx.syms[v] == ctx.syms[prev] || !ctx.balanced(prev + 1, v) {
            continue;
        }
        let mut gaps = Vec::new();
        let mut empty_acc = Vec::new();
        enum_ncs_interval(ctx, prev + 1, v, &mut empty_acc, &mut gaps);
        if gaps.is_empty() {
            continue;
        }
        for gap in gaps {
            let added = gap.len();
            acc.extend(gap);
            block.push(v);
            // Alternation means the block is even exactly when the last
            // symbol differs from the first.
            if ctx.syms[v] != ctx.syms[lo] {
                acc.push(block.clone());
                enum_ncs_interval(ctx, v + 1, hi, acc, out);
                acc.pop();
            }
            extend_ncs_block(ctx, lo, hi, block, acc, out);
            block.pop();
            acc.truncate(acc.len() - added);
        }
    }
}

/// The pairings in `NC(S)`.
pub fn enumerate_nc2(s: &StarString) -> Result<Vec<SetPartition>> {
    Ok(enumerate_nc_alternating(s)?
        .into_iter()
        .filter(|p| p.blocks().iter().all(|b| b.len() == 2))
        .collect())
}

/// `|NC₂(S)|` by the interval dynamic program: the first letter pairs with
/// an opposite letter at the same path level, and the inside and outside
/// counts multiply. Returns 0 for unbalanced strings.
pub fn count_nc2(s: &StarString) -> BigUint {
    if !s.is_balanced() {
        return BigUint::zero();
    }
    let ctx = StringCtx::new(s);
    let n = ctx.syms.len();
    let mut memo: HashMap<(usize, usize), BigUint> = HashMap::new();
    count_nc2_interval(&ctx, 0, n, &mut memo)
}

fn count_nc2_interval(
    ctx: &StringCtx,
    lo: usize,
    hi: usize,
    memo: &mut HashMap<(usize, usize), BigUint>,
) -> BigUint {
    if lo >= hi {
        return BigUint::one();
    }
    if !ctx.balanced(lo, hi) {
        return BigUint::zero();
    }
    if let Some(v) = memo.get(&(lo, hi)) {
        return v.clone();
    }
    let mut total = BigUint::zero();
    for k in lo + 1..hi {
        if ctx.syms[k] != ctx.syms[lo] && ctx.balanced(lo + 1, k) {
            let inside = count_nc2_interval(ctx, lo + 1, k, memo);
            if !inside.is_zero() {
                total += inside * count_nc2_interval(ctx, k + 1, hi, memo);
            }
        }
    }
    memo.insert((lo, hi), total.clone());
    total
}

/// `|NC(S)|` by a block-extension interval dynamic program.
pub fn count_nc_alternating(s: &StarString) -> BigUint {
    if !s.is_balanced() {
        return if s.is_empty() { BigUint::one() } else { BigUint::zero() };
    }
    let ctx = StringCtx::new(s);
    let n = ctx.syms.len();
    let mut hmemo: HashMap<(usize, usize), BigUint> = HashMap::new();
    let mut rmemo: HashMap<(usize, usize, usize), BigUint> = HashMap::new();
    count_nc_interval(&ctx, 0, n, &mut hmemo, &mut rmemo)
}

fn count_nc_interval(
    ctx: &StringCtx,
    lo: usize,
    hi: usize,
    hmemo: &mut HashMap<(usize, usize), BigUint>,
    rmemo: &mut HashMap<(usize, usize, usize), BigUint>,
) -> BigUint {
    if lo >= hi {
        return BigUint::one();
    }
    if !ctx.balanced(lo, hi) {
        return BigUint::zero();
    }
    if let Some(v) = hmemo.get(&(lo, hi)) {
        return v.clone();
    }
    let total = count_nc_extend(ctx, lo, hi, lo, lo, hmemo, rmemo);
    hmemo.insert((lo, hi), total.clone());
    total
}

// Sum over completions of the block started at `start` whose last chosen
// element is `prev`, within [.., hi).
fn count_nc_extend(
    ctx: &StringCtx,
    start: usize,
    hi: usize,
    prev: usize,
    _lo: usize,
    hmemo: &mut HashMap<(usize, usize), BigUint>,
    rmemo: &mut HashMap<(usize, usize, usize), BigUint>,
) -> BigUint {
    let key = (start, hi, prev);
    if let Some(v) = rmemo.get(&key) {
        return v.clone();
    }
    let mut total = BigUint::zero();
    for v in prev + 1..hi {
        if ctx.syms[v] == ctx.syms[prev] || !ctx.balanced(prev + 1, v) {
            continue;
        }
        let inner = count_nc_interval(ctx, prev + 1, v, hmemo, rmemo);
        if inner.is_zero() {
            continue;
        }
        if ctx.syms[v] != ctx.syms[start] {
            total += inner.clone() * count_nc_interval(ctx, v + 1, hi, hmemo, rmemo);
        }
        total += inner * count_nc_extend(ctx, start, hi, v, _lo, hmemo, rmemo);
    }
    rmemo.insert(key, total.clone());
    total
}
