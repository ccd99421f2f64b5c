//! Symbolic actions of the two completely positive extensions of the
//! dilation semigroup: the generic extension `D_t` (alternating-degree
//! count) and the Markov extension `T_t` (orthogonal-polynomial multiplier
//! through the `a_j = s·x_j` rewriting), plus Poisson-kernel numerics.
//!
//! Coefficients are exact polynomials in the formal variable `q = e^{−t}`;
//! a numeric `t` enters only at evaluation time.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use num_traits::{One, Zero};

use crate::cumulants::MomentSeq;
use crate::error::{Error, Result};
use crate::mehler::{self, PolySeq};
use crate::ratio::{rat_to_string, Rat};
use crate::strings::{StarString, Symbol};

/// A word in the generators `a_j` and their adjoints; `(j, +1)` is `a_j`,
/// `(j, -1)` is `a_j∗`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GeneratorWord {
    letters: Vec<(usize, i8)>,
}

impl GeneratorWord {
    pub fn new(letters: Vec<(usize, i8)>) -> Result<Self> {
        for &(g, sign) in &letters {
            if g == 0 {
                return Err(Error::domain("generator indices start at 1"));
            }
            if sign != 1 && sign != -1 {
                return Err(Error::domain("exponents must be +1 or -1"));
            }
        }
        Ok(GeneratorWord { letters })
    }

    pub fn empty() -> Self {
        GeneratorWord { letters: Vec::new() }
    }

    /// `a_j^n (a_k^m)∗`.
    pub fn powers(j: usize, n: usize, k: usize, m: usize) -> Self {
        let mut letters = vec![(j, 1i8); n];
        letters.extend(vec![(k, -1i8); m]);
        GeneratorWord { letters }
    }

    /// Text form `a1* a1 a2`, whitespace separated.
    pub fn parse(text: &str) -> Result<Self> {
        let mut letters = Vec::new();
        let mut offset = 0usize;
        for token in text.split_whitespace() {
            offset = text[offset..].find(token).map(|p| p + offset).unwrap_or(offset);
            let body = token.strip_prefix('a').ok_or(Error::Parse {
                offset,
                msg: format!("expected a<index>[*], got {token:?}"),
            })?;
            let (digits, star) = match body.strip_suffix('*') {
                Some(d) => (d, true),
                None => (body, false),
            };
            let idx: usize = digits.parse().map_err(|_| Error::Parse {
                offset,
                msg: format!("bad generator index in {token:?}"),
            })?;
            if idx == 0 {
                return Err(Error::Parse {
                    offset,
                    msg: "generator indices start at 1".into(),
                });
            }
            letters.push((idx, if star { -1 } else { 1 }));
            offset += token.len();
        }
        Ok(GeneratorWord { letters })
    }

    pub fn format(&self) -> String {
        self.letters
            .iter()
            .map(|&(g, sign)| if sign > 0 { format!("a{g}") } else { format!("a{g}*") })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_star_free(&self) -> bool {
        self.letters.iter().all(|&(_, s)| s > 0)
    }

    /// The exponent pattern: `1` for `a_j`, `∗` for `a_j∗`.
    pub fn exponent_string(&self) -> StarString {
        StarString::from_symbols(
            self.letters
                .iter()
                .map(|&(_, s)| if s > 0 { Symbol::One } else { Symbol::Star }),
        )
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

/// Letter of an x/s word: the symmetry `s` or a power `x_j^k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum XsLetter {
    S,
    X { gen: usize, pow: usize },
}

/// A monomial in `x_1, …, x_d, s` with `s² = 1` already cancelled and
/// adjacent equal-generator powers merged.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct XsWord {
    letters: Vec<XsLetter>,
}

impl XsWord {
    pub fn letters(&self) -> &[XsLetter] {
        &self.letters
    }

    fn push_normalized(stack: &mut Vec<XsLetter>, letter: XsLetter) {
        stack.push(letter);
        loop {
            let n = stack.len();
            if n < 2 {
                return;
            }
            match (&stack[n - 2], &stack[n - 1]) {
                (XsLetter::S, XsLetter::S) => {
                    stack.pop();
                    stack.pop();
                }
                (XsLetter::X { gen: g1, pow: p1 }, XsLetter::X { gen: g2, pow: p2 })
                    if g1 == g2 =>
                {
                    let merged = XsLetter::X { gen: *g1, pow: p1 + p2 };
                    stack.pop();
                    stack.pop();
                    stack.push(merged);
                }
                _ => return,
            }
        }
    }

    pub fn from_letters(letters: impl IntoIterator<Item = XsLetter>) -> Self {
        let mut stack = Vec::new();
        for l in letters {
            if let XsLetter::X { pow: 0, .. } = l {
                continue;
            }
            Self::push_normalized(&mut stack, l);
        }
        XsWord { letters: stack }
    }
}

impl fmt::Display for XsWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| match l {
                XsLetter::S => "s".to_string(),
                XsLetter::X { gen, pow: 1 } => format!("x{gen}"),
                XsLetter::X { gen, pow } => format!("x{gen}^{pow}"),
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Rewrites `a_j ↦ s·x_j`, `a_j∗ ↦ x_j·s` and simplifies with `s² = 1`.
pub fn to_xs(w: &GeneratorWord) -> XsWord {
    let mut letters = Vec::with_capacity(2 * w.len());
    for &(g, sign) in w.letters() {
        if sign > 0 {
            letters.push(XsLetter::S);
            letters.push(XsLetter::X { gen: g, pow: 1 });
        } else {
            letters.push(XsLetter::X { gen: g, pow: 1 });
            letters.push(XsLetter::S);
        }
    }
    XsWord::from_letters(letters)
}

/// The deterministic inverse rewrite: scanning left to right, `s x_j ↦ a_j`,
/// `x_j s ↦ a_j∗`, and `x_j x_k ↦ x_j s s x_k`.
pub fn from_xs(w: &XsWord) -> Result<GeneratorWord> {
    let mut queue: VecDeque<XsLetter> = VecDeque::new();
    for l in w.letters() {
        match l {
            XsLetter::S => queue.push_back(XsLetter::S),
            XsLetter::X { gen, pow } => {
                for _ in 0..*pow {
                    queue.push_back(XsLetter::X { gen: *gen, pow: 1 });
                }
            }
        }
    }
    let mut out = Vec::new();
    while let Some(first) = queue.pop_front() {
        match first {
            XsLetter::S => match queue.pop_front() {
                Some(XsLetter::X { gen, .. }) => out.push((gen, 1i8)),
                _ => return Err(Error::domain("x/s word has a dangling s")),
            },
            XsLetter::X { gen, .. } => match queue.front() {
                Some(XsLetter::S) => {
                    queue.pop_front();
                    out.push((gen, -1));
                }
                Some(XsLetter::X { .. }) => {
                    // insert a virtual s^2 between the two x letters
                    out.push((gen, -1));
                    queue.push_front(XsLetter::S);
                }
                None => return Err(Error::domain("x/s word has a dangling x")),
            },
        }
    }
    GeneratorWord::new(out)
}

/// Round trip `w → x/s monomial → w`; the identity on every generator word.
pub fn xs_roundtrip(w: &GeneratorWord) -> Result<GeneratorWord> {
    from_xs(&to_xs(w))
}

/// Polynomial in the formal variable `q = e^{−t}` with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<Rat>, // coeffs[k] multiplies q^k; no trailing zeros
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly { coeffs: vec![Rat::one()] }
    }

    pub fn q_pow(k: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = Rat::one();
        QPoly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add_assign(&mut self, other: &QPoly) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), Rat::zero());
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            self.coeffs[k] += c;
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn scaled(&self, by: &Rat) -> QPoly {
        if by.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            coeffs: self.coeffs.iter().map(|c| c * by).collect(),
        }
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(out)
    }

    pub fn eval(&self, q: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * q + c;
        }
        acc
    }

    /// JSON form `{"monomials": {"<degree>": "p/q", ...}}`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                map.insert(k.to_string(), serde_json::Value::String(rat_to_string(c)));
            }
        }
        serde_json::json!({ "monomials": map })
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "{}", rat_to_string(c))?;
            } else if c.is_one() {
                write!(f, "q^{k}")?;
            } else {
                write!(f, "{}*q^{k}", rat_to_string(c))?;
            }
        }
        Ok(())
    }
}

/// A formal linear combination of generator words with `QPoly`
/// coefficients; words are distinct and coefficients nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordCombination {
    terms: Vec<(QPoly, GeneratorWord)>,
}

impl WordCombination {
    pub fn from_map(map: HashMap<GeneratorWord, QPoly>) -> Self {
        let mut terms: Vec<(QPoly, GeneratorWord)> = map
            .into_iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(w, p)| (p, w))
            .collect();
        terms.sort_by(|a, b| a.1.cmp(&b.1));
        WordCombination { terms }
    }

    pub fn terms(&self) -> &[(QPoly, GeneratorWord)] {
        &self.terms
    }

    /// Substitutes a numeric `q`, dropping vanished terms.
    pub fn eval_at(&self, q: &Rat) -> Vec<(Rat, GeneratorWord)> {
        self.terms
            .iter()
            .filter_map(|(p, w)| {
                let v = p.eval(q);
                if v.is_zero() {
                    None
                } else {
                    Some((v, w.clone()))
                }
            })
            .collect()
    }

    pub fn coefficient_of(&self, w: &GeneratorWord) -> QPoly {
        self.terms
            .iter()
            .find(|(_, word)| word == w)
            .map(|(p, _)| p.clone())
            .unwrap_or_else(QPoly::zero)
    }

    /// `[{coeff: {monomials: {...}}, word: "a1* a1"}, ...]`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(p, w)| serde_json::json!({"coeff": p.to_json(), "word": w.format()}))
                .collect(),
        )
    }
}

impl fmt::Display for WordCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(p, w)| {
                if w.is_empty() {
                    format!("({p})")
                } else {
                    format!("({p})·[{w}]")
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// The degree-count extension: a single term with coefficient
/// `q^{|ε₁ + … + εₙ|}`.
pub fn generic_dt(w: &GeneratorWord) -> WordCombination {
    let sum: i64 = w.letters().iter().map(|&(_, s)| s as i64).sum();
    let mut map = HashMap::new();
    map.insert(w.clone(), QPoly::q_pow(sum.unsigned_abs() as usize));
    WordCombination::from_map(map)
}

// --- the Markov extension ------------------------------------------------

// Reduced-word letter: `s` or a centered orthogonal polynomial
// `p_deg(x_gen)` with deg >= 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum PLetter {
    S,
    P { gen: usize, deg: usize },
}

type PWord = Vec<PLetter>;

// One choice for a block after p-expansion: None marks an s letter,
// Some((gen, deg)) a polynomial level (deg 0 = the scalar component).
type BlockChoice = (Option<(usize, usize)>, Rat);

struct MarkovCtx {
    polys: BTreeMap<usize, PolySeq>,
}

impl MarkovCtx {
    /// Builds the per-generator orthogonal bases; each generator's basis
    /// must stay non-degenerate up to its total degree in the word.
    fn new(xs: &XsWord, measures: &BTreeMap<usize, MomentSeq>, require_normalized: bool) -> Result<Self> {
        let mut degrees: BTreeMap<usize, usize> = BTreeMap::new();
        for l in xs.letters() {
            if let XsLetter::X { gen, pow } = l {
                *degrees.entry(*gen).or_insert(0) += pow;
            }
        }
        let mut polys = BTreeMap::new();
        for (gen, deg) in degrees {
            let m = measures
                .get(&gen)
                .ok_or_else(|| Error::domain(format!("no measure supplied for generator a{gen}")))?;
            if !m.is_symmetric() {
                return Err(Error::domain(format!("measure for a{gen} must be symmetric")));
            }
            if require_normalized && m.get(2)? != Rat::one() {
                return Err(Error::domain(format!(
                    "measure for a{gen} must be normalized to m2 = 1"
                )));
            }
            let ps = mehler::gram_schmidt(m, deg)?;
            polys.insert(gen, ps);
        }
        Ok(MarkovCtx { polys })
    }

    fn ps(&self, gen: usize) -> &PolySeq {
        &self.polys[&gen]
    }

    /// Linearization `p_a(x) p_b(x) = Σ_c γ_c p_c(x)` by L² projection;
    /// any remainder vanishes on the support and is dropped.
    fn linearize(&self, gen: usize, a: usize, b: usize) -> Result<Vec<(usize, Rat)>> {
        let ps = self.ps(gen);
        let prod = mehler::poly_mul(ps.poly(a), ps.poly(b));
        let coeffs = mehler::projection_coeffs(ps, &prod)?;
        Ok(coeffs
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect())
    }

    /// Reduces a raw letter sequence to the canonical reduced-word basis,
    /// accumulating coefficients: cancels `s s`, linearizes adjacent
    /// equal-generator polynomial letters.
    fn reduce_into(&self, seq: PWord, coeff: Rat, out: &mut HashMap<PWord, Rat>) -> Result<()> {
        for i in 0..seq.len().saturating_sub(1) {
            match (&seq[i], &seq[i + 1]) {
                (PLetter::S, PLetter::S) => {
                    let mut next = seq.clone();
                    next.drain(i..=i + 1);
                    return self.reduce_into(next, coeff, out);
                }
                (PLetter::P { gen: g1, deg: a }, PLetter::P { gen: g2, deg: b }) if g1 == g2 => {
                    let (gen, a, b) = (*g1, *a, *b);
                    for (c, gamma) in self.linearize(gen, a, b)? {
                        let mut next: PWord = Vec::with_capacity(seq.len());
                        next.extend_from_slice(&seq[..i]);
                        if c >= 1 {
                            next.push(PLetter::P { gen, deg: c });
                        }
                        next.extend_from_slice(&seq[i + 2..]);
                        self.reduce_into(next, coeff.clone() * gamma, out)?;
                    }
                    return Ok(());
                }
                _ => {}
            }
        }
        let entry = out.entry(seq).or_insert_with(Rat::zero);
        *entry += coeff;
        Ok(())
    }

    /// Expands an x/s monomial into the reduced-word basis. `alpha` picks
    /// the block expansion: algebraic (monomial_alpha) or L² projection.
    fn normal_order(&self, xs: &XsWord, algebraic: bool) -> Result<HashMap<PWord, Rat>> {
        // Per-block expansions x^k = sum_l alpha_l p_l.
        let mut block_options: Vec<Vec<BlockChoice>> = Vec::new();
        for l in xs.letters() {
            match l {
                XsLetter::S => block_options.push(vec![(Some((0, 0)), Rat::one())]),
                XsLetter::X { gen, pow } => {
                    let ps = self.ps(*gen);
                    let alpha = if algebraic {
                        mehler::monomial_alpha(ps, *pow)?
                    } else {
                        let mut mono = vec![Rat::zero(); *pow + 1];
                        mono[*pow] = Rat::one();
                        mehler::projection_coeffs(ps, &mono)?
                    };
                    let opts: Vec<(Option<(usize, usize)>, Rat)> = alpha
                        .into_iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(deg, c)| (Some((*gen, deg)), c))
                        .collect();
                    block_options.push(opts);
                }
            }
        }
        // Depth-first multilinear expansion over blocks.
        let mut out: HashMap<PWord, Rat> = HashMap::new();
        let letters = xs.letters();
        let mut seq: PWord = Vec::new();
        self.expand_blocks(letters, &block_options, 0, &mut seq, Rat::one(), &mut out)?;
        Ok(out)
    }

    fn expand_blocks(
        &self,
        letters: &[XsLetter],
        options: &[Vec<BlockChoice>],
        idx: usize,
        seq: &mut PWord,
        coeff: Rat,
        out: &mut HashMap<PWord, Rat>,
    ) -> Result<()> {
        if idx == letters.len() {
            return self.reduce_into(seq.clone(), coeff, out);
        }
        match &letters[idx] {
            XsLetter::S => {
                seq.push(PLetter::S);
                self.expand_blocks(letters, options, idx + 1, seq, coeff, out)?;
                seq.pop();
            }
            XsLetter::X { .. } => {
                for (item, c) in &options[idx] {
                    let (gen, deg) = item.expect("x options carry generator data");
                    if deg == 0 {
                        self.expand_blocks(letters, options, idx + 1, seq, coeff.clone() * c, out)?;
                    } else {
                        seq.push(PLetter::P { gen, deg });
                        self.expand_blocks(letters, options, idx + 1, seq, coeff.clone() * c, out)?;
                        seq.pop();
                    }
                }
            }
        }
        Ok(())
    }

    /// Converts a reduced word back to x/s monomials.
    fn pword_to_monomials(&self, word: &PWord) -> Result<HashMap<XsWord, Rat>> {
        let mut out = HashMap::new();
        let mut letters: Vec<XsLetter> = Vec::new();
        self.expand_pword(word, 0, &mut letters, Rat::one(), &mut out)?;
        Ok(out)
    }

    fn expand_pword(
        &self,
        word: &PWord,
        idx: usize,
        letters: &mut Vec<XsLetter>,
        coeff: Rat,
        out: &mut HashMap<XsWord, Rat>,
    ) -> Result<()> {
        if idx == word.len() {
            let mono = XsWord::from_letters(letters.iter().cloned());
            let entry = out.entry(mono).or_insert_with(Rat::zero);
            *entry += coeff;
            return Ok(());
        }
        match &word[idx] {
            PLetter::S => {
                letters.push(XsLetter::S);
                self.expand_pword(word, idx + 1, letters, coeff, out)?;
                letters.pop();
            }
            PLetter::P { gen, deg } => {
                let ps = self.ps(*gen);
                for (m, c) in ps.poly(*deg).iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    if m == 0 {
                        self.expand_pword(word, idx + 1, letters, coeff.clone() * c, out)?;
                    } else {
                        letters.push(XsLetter::X { gen: *gen, pow: m });
                        self.expand_pword(word, idx + 1, letters, coeff.clone() * c, out)?;
                        letters.pop();
                    }
                }
            }
        }
        Ok(())
    }
}

/// The Markov (multiplier) extension `T_t`, acting symbolically: rewrite to
/// x/s form, expand the maximal generator powers in the orthogonal
/// polynomials of the supplied symmetric measures, scale level `l` by
/// `q^l`, and convert back to generator words. At `q = 1` the result is the
/// input word; on star-free words it agrees with the generic extension.
///
/// Each measure must be symmetric with `m₂ = 1`, carry at least twice as
/// many moments as the generator's total degree in the word, and stay
/// non-degenerate (positive Gram-Schmidt norms) up to that degree, so that
/// generator words remain a basis and the semigroup law holds symbolically.
pub fn markov_tt(
    w: &GeneratorWord,
    measures: &BTreeMap<usize, MomentSeq>,
) -> Result<WordCombination> {
    let xs = to_xs(w);
    let ctx = MarkovCtx::new(&xs, measures, true)?;
    for (gen, ps) in &ctx.polys {
        if ps.rank() <= ps.max_degree() {
            return Err(Error::domain(format!(
                "measure for a{gen} degenerates at degree {} < {}; its support is too small for this word",
                ps.rank(),
                ps.max_degree() + 1,
            )));
        }
    }
    let reduced = ctx.normal_order(&xs, true)?;
    // Scale each reduced word by q^(total polynomial degree), then expand
    // back to monomials and convert to generator words.
    let mut by_word: HashMap<GeneratorWord, QPoly> = HashMap::new();
    for (pword, coeff) in reduced {
        let degree: usize = pword
            .iter()
            .map(|l| match l {
                PLetter::S => 0,
                PLetter::P { deg, .. } => *deg,
            })
            .sum();
        let scale = QPoly::q_pow(degree).scaled(&coeff);
        for (mono, c) in ctx.pword_to_monomials(&pword)? {
            let gw = from_xs(&mono)?;
            let entry = by_word.entry(gw).or_insert_with(QPoly::zero);
            entry.add_assign(&scale.scaled(&c));
        }
    }
    Ok(WordCombination::from_map(by_word))
}

/// Trace of a generator word in the `a_j = s·x_j` model: the coefficient of
/// the empty word after normal ordering (every nonempty reduced word of
/// centered factors is trace-free). An independent oracle for
/// `cumulants::mixed_moment`.
pub fn xs_trace(w: &GeneratorWord, measures: &BTreeMap<usize, MomentSeq>) -> Result<Rat> {
    let xs = to_xs(w);
    let ctx = MarkovCtx::new(&xs, measures, false)?;
    let reduced = ctx.normal_order(&xs, false)?;
    Ok(reduced.get(&Vec::new()).cloned().unwrap_or_else(Rat::zero))
}

// --- Poisson kernel -------------------------------------------------------

/// `P(r,θ) = (1−r²)/(1−2r·cosθ+r²)`, the Poisson kernel of the unit disc.
pub fn poisson_eval(r: f64, theta: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::domain(format!("poisson kernel needs 0 <= r < 1, got {r}")));
    }
    Ok((1.0 - r * r) / (1.0 - 2.0 * r * theta.cos() + r * r))
}

/// Fourier coefficient `(1/2π)∫ P(r,θ) e^{−ikθ} dθ ≈ r^{|k|}` by the
/// trapezoidal rule on the periodic grid (spectrally accurate).
pub fn poisson_fourier(r: f64, k: i64, quad_points: usize) -> Result<f64> {
    if quad_points == 0 {
        return Err(Error::domain("need at least one quadrature point"));
    }
    let mut acc = 0.0;
    for j in 0..quad_points {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / quad_points as f64;
        acc += poisson_eval(r, theta)? * (k as f64 * theta).cos();
    }
    Ok(acc / quad_points as f64)
}
