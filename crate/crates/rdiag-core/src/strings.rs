//! Exponent strings in `{1, ∗}`: run-length representation, balance,
//! cyclic runs, rotations, lattice paths, and enumeration of the string
//! families `Ω_r^n` and `Ω_r^{n,i}`.

use std::fmt;

use crate::error::{Error, Result};

/// One letter of an exponent string: `1` for the operator, `*` for its adjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    One,
    Star,
}

impl Symbol {
    pub fn flipped(self) -> Symbol {
        match self {
            Symbol::One => Symbol::Star,
            Symbol::Star => Symbol::One,
        }
    }

    fn as_char(self) -> char {
        match self {
            Symbol::One => '1',
            Symbol::Star => '*',
        }
    }
}

/// Run-length encoded word in `{1, ∗}`.
///
/// Canonical form: adjacent runs carry distinct symbols and every run has
/// length ≥ 1. The empty string is allowed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StarString {
    runs: Vec<(Symbol, usize)>,
}

impl StarString {
    pub fn empty() -> Self {
        StarString { runs: Vec::new() }
    }

    /// Builds from raw runs, merging adjacent equal-symbol runs and
    /// dropping empty ones.
    pub fn from_runs(raw: impl IntoIterator<Item = (Symbol, usize)>) -> Self {
        let mut runs: Vec<(Symbol, usize)> = Vec::new();
        for (sym, len) in raw {
            if len == 0 {
                continue;
            }
            match runs.last_mut() {
                Some((last, l)) if *last == sym => *l += len,
                _ => runs.push((sym, len)),
            }
        }
        StarString { runs }
    }

    pub fn from_symbols(syms: impl IntoIterator<Item = Symbol>) -> Self {
        Self::from_runs(syms.into_iter().map(|s| (s, 1)))
    }

    /// The regular string `(1^n, ∗^n)^r`.
    pub fn regular(n: usize, r: usize) -> Self {
        let mut runs = Vec::with_capacity(2 * r);
        for _ in 0..r {
            runs.push((Symbol::One, n));
            runs.push((Symbol::Star, n));
        }
        Self::from_runs(runs)
    }

    /// Parses the grammar `1` | `*`, each with an optional `^k` repeat
    /// (k ≥ 1), tokens contiguous or whitespace-separated.
    pub fn parse(text: &str) -> Result<Self> {
        let bytes = text.as_bytes();
        let mut raw = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let sym = match c {
                '1' => Symbol::One,
                '*' => Symbol::Star,
                _ => {
                    return Err(Error::Parse {
                        offset: i,
                        msg: format!("expected '1' or '*', got {c:?}"),
                    })
                }
            };
            i += 1;
            let mut len = 1usize;
            if i < bytes.len() && bytes[i] == b'^' {
                let digits_at = i + 1;
                let mut j = digits_at;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                if j == digits_at {
                    return Err(Error::Parse {
                        offset: digits_at,
                        msg: "expected repeat count after '^'".into(),
                    });
                }
                len = text[digits_at..j].parse().map_err(|_| Error::Parse {
                    offset: digits_at,
                    msg: "repeat count too large".into(),
                })?;
                if len == 0 {
                    return Err(Error::Parse {
                        offset: digits_at,
                        msg: "zero run length".into(),
                    });
                }
                i = j;
            }
            raw.push((sym, len));
        }
        Ok(Self::from_runs(raw))
    }

    /// Canonical text form: `1^a *^b ...` with single spaces.
    pub fn format(&self) -> String {
        self.runs
            .iter()
            .map(|(s, l)| format!("{}^{}", s.as_char(), l))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn runs(&self) -> &[(Symbol, usize)] {
        &self.runs
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn total_length(&self) -> usize {
        self.runs.iter().map(|(_, l)| l).sum()
    }

    pub fn num_ones(&self) -> usize {
        self.runs
            .iter()
            .filter(|(s, _)| *s == Symbol::One)
            .map(|(_, l)| l)
            .sum()
    }

    pub fn num_stars(&self) -> usize {
        self.total_length() - self.num_ones()
    }

    pub fn is_balanced(&self) -> bool {
        self.num_ones() == self.num_stars()
    }

    /// Expanded letter sequence.
    pub fn symbols(&self) -> Vec<Symbol> {
        let mut out = Vec::with_capacity(self.total_length());
        for &(sym, len) in &self.runs {
            out.extend(vec![sym; len]);
        }
        out
    }

    /// Maximal blocks read cyclically: the first and last run merge when
    /// they share a symbol. Returns `(symbol, length)` pairs in string order
    /// starting from the (possibly merged) run containing position 0.
    pub fn cyclic_blocks(&self) -> Vec<(Symbol, usize)> {
        let mut blocks = self.runs.clone();
        if blocks.len() >= 2 && blocks.first().unwrap().0 == blocks.last().unwrap().0 {
            let (_, tail) = blocks.pop().unwrap();
            blocks.first_mut().unwrap().1 += tail;
        }
        blocks
    }

    /// Number of runs `r`: maximal 1-blocks, reading cyclically.
    /// Zero only for the empty string.
    pub fn num_runs(&self) -> usize {
        self.cyclic_blocks()
            .iter()
            .filter(|(s, _)| *s == Symbol::One)
            .count()
            .max(usize::from(!self.is_empty() && self.num_ones() == 0))
    }

    /// Minimum over all maximal cyclic block lengths.
    pub fn min_block_size(&self) -> Result<usize> {
        self.cyclic_blocks()
            .iter()
            .map(|&(_, l)| l)
            .min()
            .ok_or_else(|| Error::domain("min_block_size of the empty string"))
    }

    /// Left rotation by `k` positions: `rotate((1,*,*,1), 1) = (*,*,1,1)`.
    pub fn rotate(&self, k: usize) -> Self {
        let syms = self.symbols();
        if syms.is_empty() {
            return self.clone();
        }
        let k = k % syms.len();
        Self::from_symbols(syms[k..].iter().chain(syms[..k].iter()).copied())
    }

    /// Swaps the roles of `1` and `∗`.
    pub fn swap_symbols(&self) -> Self {
        StarString {
            runs: self.runs.iter().map(|&(s, l)| (s.flipped(), l)).collect(),
        }
    }

    /// A rotation of `S` (with the roles of 1/∗ reversed when the minimum
    /// lies only on ∗-blocks) whose first block is a 1-block of the minimal
    /// cyclic block length. 1-blocks are preferred, earliest position wins.
    pub fn rotate_min_first(&self) -> Result<Self> {
        if !self.is_balanced() {
            return Err(Error::domain("rotate_min_first requires a balanced string"));
        }
        if self.is_empty() {
            return Ok(self.clone());
        }
        let i = self.min_block_size()?;
        // Locate the earliest minimal block of each symbol, as a start offset.
        let syms = self.symbols();
        let n = syms.len();
        let block_start = |sym: Symbol| -> Option<usize> {
            // Cyclic scan: position p starts a block if syms[p-1] != syms[p].
            (0..n)
                .filter(|&p| syms[p] == sym && syms[(p + n - 1) % n] != sym)
                .find(|&p| {
                    let mut len = 0;
                    while len < n && syms[(p + len) % n] == sym {
                        len += 1;
                    }
                    len == i
                })
        };
        if let Some(p) = block_start(Symbol::One) {
            return Ok(self.rotate(p));
        }
        if let Some(p) = block_start(Symbol::Star) {
            return Ok(self.swap_symbols().rotate(p));
        }
        // Single-run degenerate cases (all one symbol) cannot be balanced.
        Err(Error::domain("no minimal block found"))
    }

    /// A rotation starting just past a global minimum of the cyclic lattice
    /// path; for balanced strings the resulting path never drops below 0.
    pub fn rotate_path_nonneg(&self) -> Self {
        let syms = self.symbols();
        if syms.is_empty() {
            return self.clone();
        }
        let mut h = 0i64;
        let mut best = (0i64, 0usize);
        for (idx, s) in syms.iter().enumerate() {
            h += if *s == Symbol::One { 1 } else { -1 };
            if h < best.0 {
                best = (h, idx + 1);
            }
        }
        self.rotate(best.1 % syms.len())
    }

    pub fn lattice_path(&self) -> LatticePath {
        let mut heights = Vec::with_capacity(self.total_length() + 1);
        heights.push(0i64);
        let mut h = 0i64;
        for s in self.symbols() {
            h += if s == Symbol::One { 1 } else { -1 };
            heights.push(h);
        }
        LatticePath { heights }
    }

    /// Lattice path height `h(S)`: max height minus min height of `𝒫(S)`.
    pub fn path_height(&self) -> usize {
        self.lattice_path().height()
    }
}

impl fmt::Display for StarString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

/// The ±1-slope path of a string: up-step per `1`, down-step per `∗`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePath {
    heights: Vec<i64>,
}

impl LatticePath {
    pub fn heights(&self) -> &[i64] {
        &self.heights
    }

    pub fn final_height(&self) -> i64 {
        *self.heights.last().unwrap()
    }

    pub fn min(&self) -> i64 {
        *self.heights.iter().min().unwrap()
    }

    pub fn max(&self) -> i64 {
        *self.heights.iter().max().unwrap()
    }

    /// Vertical extent: number of unit levels spanned.
    pub fn height(&self) -> usize {
        (self.max() - self.min()) as usize
    }
}

fn compositions(total: usize, parts: usize, min_part: usize) -> Vec<Vec<usize>> {
    // Lexicographic order.
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    if total < parts * min_part {
        return out;
    }
    for first in min_part..=(total - (parts - 1) * min_part) {
        for mut rest in compositions(total - first, parts - 1, min_part) {
            let mut c = Vec::with_capacity(parts);
            c.push(first);
            c.append(&mut rest);
            out.push(c);
        }
    }
    out
}

/// All balanced strings `(1^{n₁},∗^{m₁},…,1^{n_r},∗^{m_r})` with
/// `Σn_j = Σm_j = n` (the family `Ω_r^n`), restricted to minimal cyclic
/// block size `i` when given (`Ω_r^{n,i}`). Lexicographic in
/// `(n₁,…,n_r,m₁,…,m_r)`.
pub fn enumerate_strings(n: usize, r: usize, min_block: Option<usize>) -> Vec<StarString> {
    let mut out = Vec::new();
    if r == 0 {
        return out;
    }
    let ups = compositions(n, r, 1);
    for nu in &ups {
        for mu in &ups {
            let mut runs = Vec::with_capacity(2 * r);
            for k in 0..r {
                runs.push((Symbol::One, nu[k]));
                runs.push((Symbol::Star, mu[k]));
            }
            let s = StarString::from_runs(runs);
            if let Some(i) = min_block {
                if s.min_block_size().ok() != Some(i) {
                    continue;
                }
            }
            out.push(s);
        }
    }
    out
}

/// Every balanced string of length `2*half` (both starting symbols),
/// in lexicographic symbol order with `1 < ∗`.
pub fn enumerate_all_balanced(half: usize) -> Vec<StarString> {
    let len = 2 * half;
    let mut out = Vec::new();
    let mut syms = vec![Symbol::One; len];
    fn rec(syms: &mut Vec<Symbol>, pos: usize, ones: usize, half: usize, out: &mut Vec<StarString>) {
        let len = syms.len();
        if pos == len {
            out.push(StarString::from_symbols(syms.iter().copied()));
            return;
        }
        let remaining = len - pos;
        if ones < half && half - ones <= remaining {
            syms[pos] = Symbol::One;
            rec(syms, pos + 1, ones + 1, half, out);
        }
        let stars = pos - ones;
        if stars < half {
            syms[pos] = Symbol::Star;
            rec(syms, pos + 1, ones, half, out);
        }
    }
    if half > 0 {
        rec(&mut syms, 0, 0, half, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> StarString {
        StarString::parse(text).unwrap()
    }

    #[test]
    fn parse_examples() {
        let p = s("1^3 *^2 1 *^2");
        assert_eq!(
            p.runs(),
            &[
                (Symbol::One, 3),
                (Symbol::Star, 2),
                (Symbol::One, 1),
                (Symbol::Star, 2)
            ]
        );
        assert_eq!(s("11**").runs(), &[(Symbol::One, 2), (Symbol::Star, 2)]);
        // Contiguous mixed form from the grammar description.
        assert_eq!(s("1^3*^2 1 *^2"), p);
        // Adjacent same-symbol runs merge into canonical form.
        assert_eq!(s("1 1^2 * *"), s("1^3 *^2"));
    }

    #[test]
    fn parse_zero_run_is_error() {
        match StarString::parse("1*1^0") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(StarString::parse("1^").is_err());
        assert!(StarString::parse("1x").is_err());
    }

    #[test]
    fn format_round_trip() {
        for text in ["1^3 *^2 1^1 *^2", "1^2 *^2", ""] {
            let p = s(text);
            assert_eq!(StarString::parse(&p.format()).unwrap(), p);
        }
        assert_eq!(s("1^3 *^2 1 *^2").format(), "1^3 *^2 1^1 *^2");
    }

    #[test]
    fn balance() {
        assert!(s("11**").is_balanced());
        assert!(!s("11*").is_balanced());
        assert!(s("1^3 *^2 1 *^2").is_balanced());
        assert!(StarString::empty().is_balanced());
    }

    #[test]
    fn runs_cyclic() {
        assert_eq!(s("1^3 *^2 1 *^2").num_runs(), 2);
        assert_eq!(s("1^4 *^4").num_runs(), 1);
        assert_eq!(s("* 1 * 1").num_runs(), 2);
        assert_eq!(s("1 * * 1").num_runs(), 1); // wraps around
        assert_eq!(StarString::empty().num_runs(), 0);
    }

    #[test]
    fn min_block_and_rotation() {
        assert_eq!(s("1^3 *^2 1 *^2").min_block_size().unwrap(), 1);
        assert_eq!(s("* 1 1 *").min_block_size().unwrap(), 2); // cyclic merge
        assert!(StarString::empty().min_block_size().is_err());
        assert_eq!(s("1 * * 1").rotate(1), s("* * 1 1"));
        assert_eq!(s("1 * * 1").rotate(4), s("1 * * 1"));
    }

    #[test]
    fn rotate_min_first_starts_with_min_one_block() {
        let r = s("1^3 *^2 1 *^2").rotate_min_first().unwrap();
        assert_eq!(r.runs()[0], (Symbol::One, 1));
        assert_eq!(r, s("1 *^2 1^3 *^2"));
        // Minimum on a star block only: roles get reversed.
        let t = s("1 1 * 1 1 * * *").rotate_min_first().unwrap();
        assert_eq!(t.runs()[0], (Symbol::One, 1));
        assert_eq!(t.min_block_size().unwrap(), 1);
        assert!(t.is_balanced());
    }

    #[test]
    fn lattice_path_heights() {
        // A ragged path spanning five unit levels.
        let ragged = s("1111**11*****11*");
        assert_eq!(ragged.path_height(), 5);
        assert_eq!(s("1^6 *^6").path_height(), 6);
        assert_eq!(s("1*1*").path_height(), 1);
        assert_eq!(ragged.lattice_path().final_height(), 0);
    }

    #[test]
    fn nonneg_rotation_exists_even_when_min_first_dips() {
        // Min-size-first rotation of this string necessarily dips below 0,
        // but a nonneg rotation always exists for balanced strings.
        let t = s("1 1 * 1 1 * * *");
        let m = t.rotate_min_first().unwrap();
        assert!(m.lattice_path().min() < 0);
        let p = t.rotate_path_nonneg();
        assert!(p.lattice_path().min() >= 0);
        assert_eq!(p.path_height(), t.path_height());
    }

    #[test]
    fn omega_families() {
        assert_eq!(enumerate_strings(1, 1, None), vec![s("1*")]);
        assert_eq!(enumerate_strings(2, 1, None), vec![s("11**")]);
        assert_eq!(enumerate_strings(3, 2, None).len(), 4);
        // |Ω₂^{5,1}| = 12 ≥ C(4,0)·C(4,1)·3 = 3·4 (injection lower bound).
        assert_eq!(enumerate_strings(5, 2, Some(1)).len(), 12);
        assert!(enumerate_strings(2, 3, None).is_empty());
    }

    #[test]
    fn omega_disjoint_union() {
        // Ω_r^n = ⊔_i Ω_r^{n,i} for n ≤ 7, r ≤ 3.
        for n in 1..=7usize {
            for r in 1..=3usize {
                let whole = enumerate_strings(n, r, None);
                let mut pieces = Vec::new();
                for i in 1..=(n / r.max(1)) {
                    pieces.extend(enumerate_strings(n, r, Some(i)));
                }
                let mut w = whole.clone();
                w.sort();
                pieces.sort();
                assert_eq!(w, pieces, "n={n} r={r}");
            }
        }
    }

    #[test]
    fn all_balanced_count() {
        // C(2n, n) balanced strings of length 2n.
        assert_eq!(enumerate_all_balanced(1).len(), 2);
        assert_eq!(enumerate_all_balanced(2).len(), 6);
        assert_eq!(enumerate_all_balanced(3).len(), 20);
    }
}
