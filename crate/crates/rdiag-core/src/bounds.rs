//! Fuss-Catalan numbers, the `(1+i)^{r−1}` lower bound, the height and
//! length upper bounds for `|NC₂(S)|`, exact 2-run counts, and an
//! exhaustive verification harness over all balanced strings.

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::noncrossing::{count_nc2, count_nc_alternating};
use crate::ratio::{binomial, biguint_to_rat, factorial, rat_ceil, Rat};
use crate::strings::{enumerate_all_balanced, StarString};

pub const VERIFY_MAX_LEN: usize = 16;

/// Fuss-Catalan number `C_r^{(n)} = binom((n+1)r, r) / (nr + 1)`.
pub fn fuss_catalan(n: u64, r: u64) -> BigUint {
    if r == 0 {
        return BigUint::one();
    }
    binomial((n + 1) * r, r) / BigUint::from(n * r + 1)
}

fn pow_biguint(base: u64, exp: u32) -> BigUint {
    BigUint::from(base).pow(exp)
}

fn runs_and_min(s: &StarString) -> Result<(usize, usize)> {
    if !s.is_balanced() || s.is_empty() {
        return Err(Error::domain("bounds need a nonempty balanced string"));
    }
    Ok((s.num_runs(), s.min_block_size()?))
}

/// `(1 + i)^{r−1}` with `i` the minimal cyclic block size.
pub fn nc2_lower(s: &StarString) -> Result<BigUint> {
    let (r, i) = runs_and_min(s)?;
    Ok(pow_biguint(1 + i as u64, r as u32 - 1))
}

/// `C_r^{(h)}` with `h` the lattice path height after the minimal-block
/// rotation (the height is rotation-invariant on balanced strings).
pub fn nc2_upper_height(s: &StarString) -> Result<BigUint> {
    let (r, _) = runs_and_min(s)?;
    let h = s.rotate_min_first()?.path_height();
    Ok(fuss_catalan(h as u64, r as u64))
}

/// Exact rational `(r^{r−1}/r!)·(1+n)^{r−1}` with `n` the number of 1s.
pub fn nc2_upper_length(s: &StarString) -> Result<Rat> {
    let (r, _) = runs_and_min(s)?;
    let n = s.num_ones();
    Ok(upper_length_rat(r, 1 + n as u64))
}

fn upper_length_rat(r: usize, base: u64) -> Rat {
    let num = pow_biguint(r as u64, r as u32 - 1) * pow_biguint(base, r as u32 - 1);
    Rat::new(BigInt::from(num), BigInt::from(factorial(r as u64)))
}

/// Exact `(|NC₂(S)|, |NC(S)|) = (1 + min, 1 + 2·min)` for a balanced 2-run
/// string, reading the four block lengths cyclically.
pub fn two_run_counts(s: &StarString) -> Result<(BigUint, BigUint)> {
    let (r, _) = runs_and_min(s)?;
    if r != 2 {
        return Err(Error::domain(format!("two_run_counts needs r = 2, got r = {r}")));
    }
    let blocks = s.cyclic_blocks();
    debug_assert_eq!(blocks.len(), 4);
    let min = blocks.iter().map(|&(_, l)| l).min().unwrap() as u64;
    Ok((BigUint::from(1 + min), BigUint::from(1 + 2 * min)))
}

/// Per-string verification row; see the CSV schema in [`reports_to_csv`].
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub string: StarString,
    pub half_length: usize,
    pub runs: usize,
    pub min_block: usize,
    pub height: usize,
    pub count_nc2: BigUint,
    pub count_nc: BigUint,
    pub lower: BigUint,
    pub upper_height: BigUint,
    pub upper_length: Rat,
    pub two_run_exact: Option<(BigUint, BigUint)>,
    pub sandwich_ok: bool,
    pub height_ok: bool,
    pub two_run_ok: Option<bool>,
}

impl BoundReport {
    pub fn pass(&self) -> bool {
        self.sandwich_ok && self.height_ok && self.two_run_ok.unwrap_or(true)
    }

    pub fn for_string(s: &StarString) -> Result<Self> {
        let (r, i) = runs_and_min(s)?;
        let n = s.num_ones();
        let rotated = s.rotate_min_first()?;
        let h = rotated.path_height();
        let c2 = count_nc2(s);
        let cn = count_nc_alternating(s);
        let lower = nc2_lower(s)?;
        let upper_height = nc2_upper_height(s)?;
        let upper_length = nc2_upper_length(s)?;
        let upper_length_h = upper_length_rat(r, 1 + h as u64);
        let sandwich_ok = lower <= c2
            && c2 <= upper_height
            && biguint_to_rat(&upper_height) <= upper_length_h
            && upper_length_h <= upper_length;
        let height_ok = h <= n;
        let two_run_exact = if r == 2 { Some(two_run_counts(s)?) } else { None };
        let two_run_ok = two_run_exact
            .as_ref()
            .map(|(e2, en)| *e2 == c2 && *en == cn);
        Ok(BoundReport {
            string: s.clone(),
            half_length: n,
            runs: r,
            min_block: i,
            height: h,
            count_nc2: c2,
            count_nc: cn,
            lower,
            upper_height,
            upper_length,
            two_run_exact,
            sandwich_ok,
            height_ok,
            two_run_ok,
        })
    }
}

/// Exhaustive bound verification over every balanced string of length up
/// to `max_len`, in lexicographic order per length. Strings are processed
/// in parallel; the report order is deterministic.
pub fn verify_bounds(max_len: usize) -> Result<Vec<BoundReport>> {
    if max_len > VERIFY_MAX_LEN {
        return Err(Error::resource(format!(
            "verify_bounds max_len {max_len} exceeds the {VERIFY_MAX_LEN} guard"
        )));
    }
    let mut all_strings = Vec::new();
    for half in 1..=max_len / 2 {
        all_strings.extend(enumerate_all_balanced(half));
    }
    all_strings
        .par_iter()
        .map(BoundReport::for_string)
        .collect()
}

/// CSV schema:
/// `string,n,r,i,h,count_nc2,count_nc,lower,upper_height,upper_length_num,upper_length_den,pass`.
/// The `upper_length` ceiling is available via [`crate::ratio::rat_ceil`];
/// the exact rational is emitted as numerator/denominator columns.
pub fn reports_to_csv(reports: &[BoundReport]) -> String {
    let mut out = String::from(
        "string,n,r,i,h,count_nc2,count_nc,lower,upper_height,upper_length_num,upper_length_den,pass\n",
    );
    for rep in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            rep.string.format().replace(' ', ""),
            rep.half_length,
            rep.runs,
            rep.min_block,
            rep.height,
            rep.count_nc2,
            rep.count_nc,
            rep.lower,
            rep.upper_height,
            rep.upper_length.numer(),
            rep.upper_length.denom(),
            rep.pass()
        ));
    }
    out
}

/// Integer ceiling of the length bound, for display.
pub fn upper_length_ceil(s: &StarString) -> Result<BigInt> {
    Ok(rat_ceil(&nc2_upper_length(s)?))
}

/// True iff the string consists of 1-blocks only interleaved with ∗-blocks
/// (used by tests to pick specific families).
pub fn is_regular(s: &StarString, n: usize, r: usize) -> bool {
    *s == StarString::regular(n, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strings::Symbol;
    use num_traits::ToPrimitive;

    fn s(text: &str) -> StarString {
        StarString::parse(text).unwrap()
    }

    #[test]
    fn fuss_catalan_values() {
        // C_1^{(n)} = 1 for all n.
        for n in 0..10 {
            assert_eq!(fuss_catalan(n, 1), BigUint::one());
        }
        // C_r^{(1)} = Catalan(r).
        for r in 0..8u64 {
            assert_eq!(fuss_catalan(1, r), crate::ratio::catalan(r));
        }
        assert_eq!(fuss_catalan(3, 3).to_u64(), Some(22)); // C(12,3)/10
        assert_eq!(fuss_catalan(2, 2).to_u64(), Some(3));
    }

    #[test]
    fn lower_bound_examples() {
        // Two-run string with a singleton block: lower = (1+1)^1 = 2, tight.
        let w = s("1^3 *^2 1 *^2");
        assert_eq!(nc2_lower(&w).unwrap(), BigUint::from(2u32));
        assert_eq!(count_nc2(&w), BigUint::from(2u32));
        // Regular one-run strings: lower = 1 = count.
        for n in 1..=6 {
            let reg = StarString::regular(n, 1);
            assert_eq!(nc2_lower(&reg).unwrap(), BigUint::one());
            assert_eq!(count_nc2(&reg), BigUint::one());
        }
    }

    #[test]
    fn height_bound_example() {
        // (1^2 *^2)^2: h = 2, C_2^{(2)} = 3 = count.
        let reg = StarString::regular(2, 2);
        assert_eq!(reg.path_height(), 2);
        assert_eq!(nc2_upper_height(&reg).unwrap(), BigUint::from(3u32));
        assert_eq!(count_nc2(&reg), BigUint::from(3u32));
    }

    #[test]
    fn two_run_examples() {
        let pairs = [
            ("1^3 *^2 1 *^2", (2u32, 3u32)),
            ("1^2 *^2 1^2 *^2", (3, 5)),
            ("1 * 1 *", (2, 3)),
        ];
        for (text, (e2, en)) in pairs {
            let (c2, cn) = two_run_counts(&s(text)).unwrap();
            assert_eq!(c2, BigUint::from(e2), "{text}");
            assert_eq!(cn, BigUint::from(en), "{text}");
        }
        assert!(two_run_counts(&s("1*")).is_err());
        assert!(two_run_counts(&s("1*1*1*")).is_err());
        // Rotated 2-run string still works via cyclic blocks.
        let rotated = s("*^2 1^3 *^2 1");
        let (c2, cn) = two_run_counts(&rotated).unwrap();
        assert_eq!((c2, cn), (BigUint::from(2u32), BigUint::from(3u32)));
    }

    #[test]
    fn two_run_matches_enumeration_len16() {
        for n in 2..=8usize {
            for n1 in 1..n {
                for m1 in 1..n {
                    let t = StarString::from_runs([
                        (Symbol::One, n1),
                        (Symbol::Star, m1),
                        (Symbol::One, n - n1),
                        (Symbol::Star, n - m1),
                    ]);
                    let (e2, en) = two_run_counts(&t).unwrap();
                    assert_eq!(e2, count_nc2(&t), "{t}");
                    assert_eq!(en, count_nc_alternating(&t), "{t}");
                }
            }
        }
    }

    #[test]
    fn verify_bounds_small() {
        let reports = verify_bounds(8).unwrap();
        assert!(!reports.is_empty());
        for rep in &reports {
            assert!(rep.pass(), "{}", rep.string);
        }
        // Deterministic order and stable CSV.
        let again = verify_bounds(8).unwrap();
        assert_eq!(reports_to_csv(&reports), reports_to_csv(&again));
        assert!(verify_bounds(18).is_err());
    }

    #[test]
    fn report_fields_two_run_example() {
        let rep = BoundReport::for_string(&s("1^3 *^2 1 *^2")).unwrap();
        assert_eq!(rep.runs, 2);
        assert_eq!(rep.min_block, 1);
        assert_eq!(rep.count_nc2.to_u32(), Some(2));
        assert_eq!(rep.count_nc.to_u32(), Some(3));
        assert_eq!(rep.two_run_exact.clone().unwrap().1.to_u32(), Some(3));
        assert!(rep.pass());
    }
}
