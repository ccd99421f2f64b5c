//! Moment ↔ free-cumulant transforms, multiplicative functionals over
//! non-crossing partitions, and R-diagonal moment evaluation. Everything
//! here is exact rational arithmetic.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::noncrossing::{self, SetPartition};
use crate::ratio::{biguint_to_rat, catalan, rat_from_str, rat_to_string, Rat};
use crate::semigroup::GeneratorWord;
use crate::strings::{StarString, Symbol};

/// A finite moment sequence `m₁, m₂, …, m_N` (with `m₀ = 1` implicit).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentSeq {
    values: Vec<Rat>,
}

impl MomentSeq {
    pub fn new(values: Vec<Rat>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("moment sequence needs at least m1"));
        }
        Ok(MomentSeq { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `m_k` for `0 <= k <= N`.
    pub fn get(&self, k: usize) -> Result<Rat> {
        if k == 0 {
            return Ok(Rat::one());
        }
        self.values
            .get(k - 1)
            .cloned()
            .ok_or_else(|| Error::domain(format!("moment m_{k} beyond sequence length {}", self.len())))
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    /// Semicircle moments: `m_{2k} = Catalan(k)`, odd moments zero.
    pub fn semicircle(len: usize) -> Self {
        let values = (1..=len)
            .map(|k| {
                if k % 2 == 0 {
                    biguint_to_rat(&catalan(k as u64 / 2))
                } else {
                    Rat::zero()
                }
            })
            .collect();
        MomentSeq { values }
    }

    pub fn is_symmetric(&self) -> bool {
        self.values.iter().step_by(2).all(|m| m.is_zero())
    }
}

impl fmt::Display for MomentSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(rat_to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Named origin of a determining sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecKind {
    Circular,
    HaarUnitary,
    FromEvenMeasure,
    Custom,
}

impl SpecKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SpecKind::Circular => "circular",
            SpecKind::HaarUnitary => "haar_unitary",
            SpecKind::FromEvenMeasure => "from_even_measure",
            SpecKind::Custom => "custom",
        }
    }
}

/// Determining sequence of an R-diagonal element:
/// `d_n = κ_{2n}[a, a∗, …, a, a∗]`. By convention the reversed pattern
/// `κ_{2n}[a∗, a, …]` carries the same value, and all odd or
/// non-alternating cumulants vanish.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CumulantSpec {
    kind: SpecKind,
    d: Vec<Rat>,
}

impl CumulantSpec {
    /// Circular element: `d₁ = 1`, everything else zero.
    pub fn circular(len: usize) -> Self {
        let mut d = vec![Rat::zero(); len.max(1)];
        d[0] = Rat::one();
        CumulantSpec { kind: SpecKind::Circular, d }
    }

    /// Haar unitary: `d_n = (−1)^{n−1} C_{n−1}`.
    ///
    /// The sign is forced by the oracle `φ((uu∗)^k) = 1`; see the
    /// regression test against the alternative `(−1)^n C_{n−1}`.
    pub fn haar_unitary(len: usize) -> Self {
        let d = (1..=len.max(1))
            .map(|n| {
                let c = biguint_to_rat(&catalan(n as u64 - 1));
                if n % 2 == 1 {
                    c
                } else {
                    -c
                }
            })
            .collect();
        CumulantSpec { kind: SpecKind::HaarUnitary, d }
    }

    pub fn custom(d: Vec<Rat>) -> Result<Self> {
        if d.is_empty() {
            return Err(Error::domain("cumulant spec needs at least d1"));
        }
        Ok(CumulantSpec { kind: SpecKind::Custom, d })
    }

    pub fn kind(&self) -> SpecKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    /// `d_n` for `n >= 1`.
    pub fn alt_cumulant(&self, n: usize) -> Result<Rat> {
        if n == 0 {
            return Err(Error::domain("alternating cumulants are indexed from 1"));
        }
        self.d
            .get(n - 1)
            .cloned()
            .ok_or_else(|| Error::domain(format!("cumulant spec too short: needs d_{n}, has {}", self.len())))
    }

    pub fn d(&self) -> &[Rat] {
        &self.d
    }

    /// JSON form `{kind, d: ["p/q", ...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "kind": self.kind.as_str(),
            "d": self.d.iter().map(rat_to_string).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let kind = match v.get("kind").and_then(|k| k.as_str()) {
            Some("circular") => SpecKind::Circular,
            Some("haar_unitary") => SpecKind::HaarUnitary,
            Some("from_even_measure") => SpecKind::FromEvenMeasure,
            Some("custom") | None => SpecKind::Custom,
            Some(other) => return Err(Error::domain(format!("unknown spec kind {other:?}"))),
        };
        let d = v
            .get("d")
            .and_then(|d| d.as_array())
            .ok_or_else(|| Error::domain("cumulant spec JSON needs a \"d\" array"))?
            .iter()
            .map(|x| {
                x.as_str()
                    .ok_or_else(|| Error::domain("cumulant entries must be \"p/q\" strings"))
                    .and_then(rat_from_str)
            })
            .collect::<Result<Vec<_>>>()?;
        if d.is_empty() {
            return Err(Error::domain("cumulant spec needs at least d1"));
        }
        Ok(CumulantSpec { kind, d })
    }
}

/// `φ_π`: product over the blocks of `p` of `m_{|V|}`.
pub fn phi_pi(m: &MomentSeq, p: &SetPartition) -> Result<Rat> {
    let mut acc = Rat::one();
    for b in p.blocks() {
        acc *= m.get(b.len())?;
    }
    Ok(acc)
}

/// `κ_π`: product over the blocks of `p` of `κ_{|V|}` (`kappa[k-1] = κ_k`).
pub fn kappa_pi(kappa: &[Rat], p: &SetPartition) -> Result<Rat> {
    let mut acc = Rat::one();
    for b in p.blocks() {
        let k = kappa
            .get(b.len() - 1)
            .ok_or_else(|| Error::domain(format!("block of size {} beyond cumulant length {}", b.len(), kappa.len())))?;
        acc *= k.clone();
    }
    Ok(acc)
}

/// Free cumulants from moments by the subtraction recursion
/// `κ_n = m_n − Σ_{π ∈ NC(n), π ≠ 1_n} κ_π`.
pub fn moments_to_cumulants(m: &MomentSeq) -> Result<Vec<Rat>> {
    let n = m.len();
    let mut kappa: Vec<Rat> = Vec::with_capacity(n);
    for k in 1..=n {
        let mut acc = m.get(k)?;
        for pi in noncrossing::enumerate_nc(k)? {
            if pi.num_blocks() == 1 {
                continue;
            }
            acc -= kappa_pi(&kappa, &pi)?;
        }
        kappa.push(acc);
    }
    Ok(kappa)
}

/// Moments from free cumulants: `m_n = Σ_{π ∈ NC(n)} κ_π`.
pub fn cumulants_to_moments(kappa: &[Rat]) -> Result<MomentSeq> {
    let n = kappa.len();
    let mut values = Vec::with_capacity(n);
    for k in 1..=n {
        let mut acc = Rat::zero();
        for pi in noncrossing::enumerate_nc(k)? {
            acc += kappa_pi(kappa, &pi)?;
        }
        values.push(acc);
    }
    MomentSeq::new(values)
}

/// `κ_n` straight from the Möbius inversion formula
/// `κ_n = Σ_{σ ≤ 1_n} φ_σ · μ(σ, 1_n)`; cross-check for the recursion.
pub fn kappa_via_moebius(m: &MomentSeq, n: usize) -> Result<Rat> {
    let top = SetPartition::full(n);
    let mut acc = Rat::zero();
    for sigma in noncrossing::enumerate_nc(n)? {
        let mu = noncrossing::moebius(&sigma, &top)?;
        acc += phi_pi(m, &sigma)? * Rat::from_integer(mu);
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Weighted sums over NC(S): the engine behind rdiag_moment / mixed_moment.
// Letters carry a symbol and a generator id; admissible blocks alternate in
// the symbol, are generator-constant, and have even size 2k, contributing a
// factor weight(gen, k).
// ---------------------------------------------------------------------------

type BlockWeight<'a> = &'a dyn Fn(usize, usize) -> Result<Rat>;

struct WeightedCtx<'a> {
    syms: Vec<Symbol>,
    gens: Vec<usize>,
    prefix: Vec<i64>,
    weight: BlockWeight<'a>,
    hmemo: HashMap<(usize, usize), Rat>,
    rmemo: HashMap<(usize, usize, usize, usize), Rat>,
}

impl<'a> WeightedCtx<'a> {
    fn balanced(&self, lo: usize, hi: usize) -> bool {
        self.prefix[hi] == self.prefix[lo]
    }

    fn interval(&mut self, lo: usize, hi: usize) -> Result<Rat> {
        if lo >= hi {
            return Ok(Rat::one());
        }
        if !self.balanced(lo, hi) {
            return Ok(Rat::zero());
        }
        if let Some(v) = self.hmemo.get(&(lo, hi)) {
            return Ok(v.clone());
        }
        let total = self.extend(lo, hi, lo, 1)?;
        self.hmemo.insert((lo, hi), total.clone());
        Ok(total)
    }

    fn extend(&mut self, start: usize, hi: usize, prev: usize, size: usize) -> Result<Rat> {
        let key = (start, hi, prev, size);
        if let Some(v) = self.rmemo.get(&key) {
            return Ok(v.clone());
        }
        let mut total = Rat::zero();
        for v in prev + 1..hi {
            if self.syms[v] == self.syms[prev]
                || self.gens[v] != self.gens[start]
                || !self.balanced(prev + 1, v)
            {
                continue;
            }
            let inner = self.interval(prev + 1, v)?;
            if inner.is_zero() {
                continue;
            }
            if self.syms[v] != self.syms[start] {
                let w = (self.weight)(self.gens[start], size.div_ceil(2))?;
                if !w.is_zero() {
                    total += inner.clone() * w * self.interval(v + 1, hi)?;
                }
            }
            total += inner * self.extend(start, hi, v, size + 1)?;
        }
        self.rmemo.insert(key, total.clone());
        Ok(total)
    }
}

fn weighted_alternating_sum(syms: Vec<Symbol>, gens: Vec<usize>, weight: BlockWeight) -> Result<Rat> {
    let n = syms.len();
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0i64);
    let mut h = 0i64;
    for &s in &syms {
        h += if s == Symbol::One { 1 } else { -1 };
        prefix.push(h);
    }
    let mut ctx = WeightedCtx {
        syms,
        gens,
        prefix,
        weight,
        hmemo: HashMap::new(),
        rmemo: HashMap::new(),
    };
    ctx.interval(0, n)
}

/// `φ(a^S) = Σ_{π ∈ NC(S)} Π_V d_{|V|/2}` for an R-diagonal element with
/// determining sequence `spec`. Unbalanced strings give 0 without any
/// enumeration.
pub fn rdiag_moment(spec: &CumulantSpec, s: &StarString) -> Result<Rat> {
    let len = s.total_length();
    if len > noncrossing::NC_S_MAX_LEN {
        return Err(Error::resource(format!(
            "rdiag_moment string length {len} exceeds the {} guard",
            noncrossing::NC_S_MAX_LEN
        )));
    }
    if !s.is_balanced() {
        return Ok(Rat::zero());
    }
    if len == 0 {
        return Ok(Rat::one());
    }
    if spec.len() < len / 2 {
        return Err(Error::domain(format!(
            "cumulant spec of length {} too short for string of length {len} (needs {})",
            spec.len(),
            len / 2
        )));
    }
    let syms = s.symbols();
    let gens = vec![1usize; syms.len()];
    weighted_alternating_sum(syms, gens, &|_, k| spec.alt_cumulant(k))
}

/// Mixed moment of a word in several ∗-free R-diagonal generators:
/// only generator-constant alternating even blocks survive.
pub fn mixed_moment(specs: &BTreeMap<usize, CumulantSpec>, w: &GeneratorWord) -> Result<Rat> {
    let len = w.len();
    if len > noncrossing::NC_S_MAX_LEN {
        return Err(Error::resource(format!(
            "mixed_moment word length {len} exceeds the {} guard",
            noncrossing::NC_S_MAX_LEN
        )));
    }
    if len == 0 {
        return Ok(Rat::one());
    }
    let mut syms = Vec::with_capacity(len);
    let mut gens = Vec::with_capacity(len);
    for &(g, sign) in w.letters() {
        syms.push(if sign > 0 { Symbol::One } else { Symbol::Star });
        gens.push(g);
        let spec = specs
            .get(&g)
            .ok_or_else(|| Error::domain(format!("no cumulant spec for generator a{g}")))?;
        if spec.len() < len / 2 {
            return Err(Error::domain(format!(
                "cumulant spec for a{g} too short for word of length {len}"
            )));
        }
    }
    weighted_alternating_sum(syms, gens, &|g, k| specs[&g].alt_cumulant(k))
}

/// Determining sequence of the R-diagonal element whose |a| has the given
/// symmetric distribution: `d_n = κ_{2n}` of the measure. The sequence is
/// rescaled to `m₂ = 1` first (so `‖a‖₂ = 1`).
pub fn from_even_measure(m: &MomentSeq) -> Result<CumulantSpec> {
    if !m.is_symmetric() {
        return Err(Error::domain("from_even_measure requires all odd moments to vanish"));
    }
    if m.len() < 2 {
        return Err(Error::domain("need at least m2"));
    }
    let m2 = m.get(2)?;
    if !m2.is_positive() {
        return Err(Error::domain("m2 must be positive"));
    }
    let mut scaled = Vec::with_capacity(m.len());
    let mut scale = Rat::one();
    for k in 1..=m.len() {
        if k % 2 == 1 {
            scaled.push(Rat::zero());
        } else {
            scale *= m2.clone();
            scaled.push(m.get(k)? / scale.clone());
        }
    }
    let kappa = moments_to_cumulants(&MomentSeq::new(scaled)?)?;
    let d: Vec<Rat> = kappa
        .iter()
        .skip(1)
        .step_by(2)
        .cloned()
        .collect();
    Ok(CumulantSpec { kind: SpecKind::FromEvenMeasure, d })
}

/// `v(a) = ‖a‖₄⁴ − 1` for `‖a‖₂ = 1`, via `‖a‖₄⁴ = φ(a a∗ a a∗)`.
pub fn v_stat(spec: &CumulantSpec) -> Result<Rat> {
    let s = StarString::parse("1 * 1 *").expect("static string");
    Ok(rdiag_moment(spec, &s)? - Rat::one())
}

/// The pair `(κ₄[a,a∗,a,a∗], ‖a‖₄⁴ − 2)`; equal for every normalized spec.
pub fn kappa4_identity(spec: &CumulantSpec) -> Result<(Rat, Rat)> {
    let s = StarString::parse("1 * 1 *").expect("static string");
    let norm4 = rdiag_moment(spec, &s)?;
    Ok((spec.alt_cumulant(2)?, norm4 - Rat::from_integer(2.into())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{rat, rat_int};
    use num_traits::ToPrimitive;

    #[test]
    fn semicircle_cumulants_and_moments() {
        // kappa = (0,1,0,0,...) -> even moments are Catalan numbers.
        let mut kappa = vec![Rat::zero(); 8];
        kappa[1] = Rat::one();
        let m = cumulants_to_moments(&kappa).unwrap();
        assert_eq!(m.get(4).unwrap(), rat_int(2));
        assert_eq!(m.get(6).unwrap(), rat_int(5));
        assert_eq!(m.get(8).unwrap(), rat_int(14));
        assert!(m.get(3).unwrap().is_zero());
        assert_eq!(m, MomentSeq::semicircle(8));
    }

    #[test]
    fn mean_only_moments() {
        // m = (mu, 0, 0, ...) -> kappa1 = mu, kappa2 = -mu^2.
        let mu = rat(3, 7);
        let m = MomentSeq::new(vec![mu.clone(), Rat::zero(), Rat::zero()]).unwrap();
        let k = moments_to_cumulants(&m).unwrap();
        assert_eq!(k[0], mu.clone());
        assert_eq!(k[1], -mu.clone() * mu.clone());
    }

    #[test]
    fn transforms_invert() {
        let m = MomentSeq::new((1..=8).map(|k| rat(k, k + 2)).collect()).unwrap();
        let k = moments_to_cumulants(&m).unwrap();
        let back = cumulants_to_moments(&k).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn recursion_matches_moebius_formula() {
        let m = MomentSeq::new((1..=6).map(|k| rat(2 * k as i64 - 1, k as i64 + 3)).collect()).unwrap();
        let k = moments_to_cumulants(&m).unwrap();
        for n in 1..=6usize {
            assert_eq!(k[n - 1], kappa_via_moebius(&m, n).unwrap(), "n={n}");
        }
    }

    #[test]
    fn phi_pi_examples() {
        let m = MomentSeq::new(vec![rat(5, 1), rat(7, 1), rat(11, 1)]).unwrap();
        let singles = SetPartition::singletons(3);
        assert_eq!(phi_pi(&m, &singles).unwrap(), rat_int(125));
        // phi_pi for {{1,4},{2,5},{3}} = m2 * m2 * m1.
        let p = SetPartition::new(5, vec![vec![1, 4], vec![2, 5], vec![3]]).unwrap();
        let m5 = MomentSeq::new(vec![rat(5, 1), rat(7, 1), Rat::zero(), Rat::zero(), Rat::zero()]).unwrap();
        assert_eq!(phi_pi(&m5, &p).unwrap(), rat_int(7 * 7 * 5));
        // kappa_pi for {{1,2},{3,4}} with kappa2 = 1.
        let pairs = SetPartition::new(4, vec![vec![1, 2], vec![3, 4]]).unwrap();
        let kappa = vec![Rat::zero(), Rat::one()];
        assert_eq!(kappa_pi(&kappa, &pairs).unwrap(), Rat::one());
        assert!(phi_pi(&MomentSeq::new(vec![rat_int(1)]).unwrap(), &pairs).is_err());
    }

    #[test]
    fn circular_moments_count_pairings() {
        let spec = CumulantSpec::circular(8);
        let s = StarString::parse("1*1*").unwrap();
        assert_eq!(rdiag_moment(&spec, &s).unwrap(), rat_int(2));
        for n in 1..=6usize {
            let reg = StarString::regular(n, 1);
            assert_eq!(rdiag_moment(&spec, &reg).unwrap(), Rat::one(), "n={n}");
        }
        // Matches the pairing count on every small balanced string.
        for half in 1..=5usize {
            for t in crate::strings::enumerate_all_balanced(half) {
                let m = rdiag_moment(&spec, &t).unwrap();
                let c = biguint_to_rat(&noncrossing::count_nc2(&t));
                assert_eq!(m, c, "{t}");
            }
        }
    }

    #[test]
    fn rdiag_moment_matches_enumeration() {
        // Independent route: evaluate the sum over NC(S) explicitly.
        let spec = CumulantSpec::haar_unitary(6);
        for half in 1..=4usize {
            for t in crate::strings::enumerate_all_balanced(half) {
                let mut direct = Rat::zero();
                for pi in noncrossing::enumerate_nc_alternating(&t).unwrap() {
                    let mut term = Rat::one();
                    for b in pi.blocks() {
                        term *= spec.alt_cumulant(b.len() / 2).unwrap();
                    }
                    direct += term;
                }
                assert_eq!(rdiag_moment(&spec, &t).unwrap(), direct, "{t}");
            }
        }
    }

    #[test]
    fn unbalanced_strings_vanish() {
        let spec = CumulantSpec::haar_unitary(8);
        for len in 1..=10usize {
            for bits in 0u32..(1 << len) {
                let syms: Vec<Symbol> = (0..len)
                    .map(|i| if bits >> i & 1 == 1 { Symbol::One } else { Symbol::Star })
                    .collect();
                let t = StarString::from_symbols(syms);
                if !t.is_balanced() {
                    assert!(rdiag_moment(&spec, &t).unwrap().is_zero(), "{t}");
                    assert!(noncrossing::enumerate_nc_alternating(&t).unwrap().is_empty());
                }
            }
        }
    }

    #[test]
    fn haar_unitary_oracle() {
        let spec = CumulantSpec::haar_unitary(8);
        for k in 1..=6usize {
            let s = StarString::regular(1, k); // (1,*)^k
            assert_eq!(rdiag_moment(&spec, &s).unwrap(), Rat::one(), "k={k}");
        }
    }

    #[test]
    fn haar_printed_sign_fails_oracle() {
        // With d_n = (-1)^n C_{n-1} the k = 2 moment is 3, not 1.
        let printed: Vec<Rat> = (1..=4usize)
            .map(|n| {
                let c = biguint_to_rat(&catalan(n as u64 - 1));
                if n % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .collect();
        let spec = CumulantSpec::custom(printed).unwrap();
        let s = StarString::regular(1, 2);
        assert_eq!(rdiag_moment(&spec, &s).unwrap(), rat_int(3));
    }

    #[test]
    fn spec_too_short_is_domain_error() {
        let spec = CumulantSpec::circular(2);
        let s = StarString::regular(3, 1); // length 6 needs d3
        assert!(matches!(rdiag_moment(&spec, &s), Err(Error::Domain(_))));
    }

    #[test]
    fn mixed_moments_orthogonality() {
        let mut specs = BTreeMap::new();
        specs.insert(1, CumulantSpec::circular(6));
        specs.insert(2, CumulantSpec::haar_unitary(6));
        // a1^n (a2^m)* has zero trace for every n, m >= 1.
        for n in 1..=4usize {
            for m in 1..=4usize {
                let w = GeneratorWord::powers(1, n, 2, m);
                assert!(mixed_moment(&specs, &w).unwrap().is_zero(), "n={n} m={m}");
            }
        }
        // a1^n (a1^m)* vanishes unless n = m, and then matches rdiag_moment.
        for n in 1..=4usize {
            for m in 1..=4usize {
                let w = GeneratorWord::powers(1, n, 1, m);
                let val = mixed_moment(&specs, &w).unwrap();
                if n == m {
                    let reg = StarString::regular(n, 1);
                    assert_eq!(val, rdiag_moment(&specs[&1], &reg).unwrap());
                } else {
                    assert!(val.is_zero(), "n={n} m={m}");
                }
            }
        }
        // a1 a1* a2 a2*: only {{1,2},{3,4}} survives generator-constancy.
        let w = GeneratorWord::parse("a1 a1* a2 a2*").unwrap();
        assert_eq!(mixed_moment(&specs, &w).unwrap(), Rat::one());
    }

    #[test]
    fn from_even_measure_examples() {
        // Semicircle -> circular spec, v = 1.
        let spec = from_even_measure(&MomentSeq::semicircle(12)).unwrap();
        assert_eq!(spec.d()[0], Rat::one());
        assert!(spec.d()[1..].iter().all(|d| d.is_zero()));
        assert_eq!(v_stat(&spec).unwrap(), Rat::one());
        // Two-point +-1 (all even moments 1) -> Haar-unitary spec, v = 0.
        let bern = MomentSeq::new((1..=12).map(|k| if k % 2 == 0 { Rat::one() } else { Rat::zero() }).collect()).unwrap();
        let spec = from_even_measure(&bern).unwrap();
        assert_eq!(spec.d(), CumulantSpec::haar_unitary(6).d());
        assert!(v_stat(&spec).unwrap().is_zero());
        // m4 = 3/2 -> v = 1/2.
        let arcsine_like =
            MomentSeq::new(vec![Rat::zero(), Rat::one(), Rat::zero(), rat(3, 2)]).unwrap();
        let spec = from_even_measure(&arcsine_like).unwrap();
        assert_eq!(v_stat(&spec).unwrap(), rat(1, 2));
        // kappa4 identity.
        let (k4, m4m2) = kappa4_identity(&spec).unwrap();
        assert_eq!(k4, m4m2);
        // Named specs carry the same v statistics.
        assert_eq!(v_stat(&CumulantSpec::circular(2)).unwrap(), Rat::one());
        assert!(v_stat(&CumulantSpec::haar_unitary(2)).unwrap().is_zero());
        // Rescaling: doubling the variance leaves the normalized spec fixed.
        let scaled = MomentSeq::new(vec![Rat::zero(), rat_int(4), Rat::zero(), rat_int(24)]).unwrap();
        let spec2 = from_even_measure(&scaled).unwrap();
        let unscaled = MomentSeq::new(vec![Rat::zero(), rat_int(1), Rat::zero(), rat(3, 2)]).unwrap();
        assert_eq!(spec2.d(), from_even_measure(&unscaled).unwrap().d());
        // Nonsymmetric input is rejected.
        assert!(from_even_measure(&MomentSeq::new(vec![Rat::one(), Rat::one()]).unwrap()).is_err());
    }

    #[test]
    fn gram_orthogonality_small() {
        let mut specs = BTreeMap::new();
        specs.insert(1, CumulantSpec::circular(6));
        specs.insert(2, CumulantSpec::circular(6));
        for j in [1usize, 2] {
            for k in [1usize, 2] {
                for n in 1..=5usize {
                    for m in 1..=5usize {
                        let w = GeneratorWord::powers(j, n, k, m);
                        let got = mixed_moment(&specs, &w).unwrap();
                        if j == k && n == m {
                            let reg = StarString::regular(n, 1);
                            assert_eq!(got, rdiag_moment(&specs[&j], &reg).unwrap());
                        } else {
                            assert!(got.is_zero());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rdiag_moment_rotation_invariant() {
        // Rotational invariance of the distribution: the trace of a^S only
        // sees the cyclic string.
        let spec = CumulantSpec::haar_unitary(5);
        for half in 1..=5usize {
            for t in crate::strings::enumerate_all_balanced(half) {
                let base = rdiag_moment(&spec, &t).unwrap();
                for k in 1..t.total_length() {
                    assert_eq!(rdiag_moment(&spec, &t.rotate(k)).unwrap(), base, "{t} rot {k}");
                }
            }
        }
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = CumulantSpec::haar_unitary(4);
        let j = spec.to_json();
        assert_eq!(j["kind"], "haar_unitary");
        assert_eq!(j["d"][1], "-1/1");
        let back = CumulantSpec::from_json(&j).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn circular_norm_is_one() {
        // ||c^n||_2^2 = 1: d1^n via the fully nested pairing.
        let spec = CumulantSpec::circular(7);
        for n in 1..=7 {
            let m = rdiag_moment(&spec, &StarString::regular(n, 1)).unwrap();
            assert_eq!(m.to_f64().unwrap(), 1.0);
        }
    }
}
