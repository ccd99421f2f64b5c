//! Orthogonal polynomials of (finitely supported or moment-determined)
//! symmetric measures, Mehler kernels `m_μ(r;x,y) = Σ rⁿ p̂ₙ(x)p̂ₙ(y)`,
//! Markovianity tests on finite supports, and the multiplier `M_μ(r)`.

use num_traits::{One, Signed, Zero};

use crate::cumulants::MomentSeq;
use crate::error::{Error, Result};
use crate::ratio::{rat_from_str, rat_to_string, Rat};

// --- small exact polynomial helpers (coefficient lists, index = degree) ---

pub(crate) fn poly_trim(p: &mut Vec<Rat>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub(crate) fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    out
}

pub(crate) fn poly_eval(p: &[Rat], x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// A finite-support probability measure with exact rational atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteMeasure {
    atoms: Vec<(Rat, Rat)>, // (point, weight), sorted by point
}

impl DiscreteMeasure {
    pub fn new(mut atoms: Vec<(Rat, Rat)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::domain("measure needs at least one atom"));
        }
        atoms.sort_by(|a, b| a.0.cmp(&b.0));
        for w in atoms.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::domain("atom points must be distinct"));
            }
        }
        let mut total = Rat::zero();
        for (_, w) in &atoms {
            if !w.is_positive() {
                return Err(Error::domain("atom weights must be positive"));
            }
            total += w;
        }
        if total != Rat::one() {
            return Err(Error::domain("atom weights must sum to 1"));
        }
        Ok(DiscreteMeasure { atoms })
    }

    /// `½(δ_λ + δ_{−λ})`.
    pub fn two_point(lambda: Rat) -> Result<Self> {
        let half = Rat::new(1.into(), 2.into());
        Self::new(vec![(-lambda.clone(), half.clone()), (lambda, half)])
    }

    /// `a(δ_λ + δ_{−λ}) + (1−2a)δ₀`.
    pub fn three_point(a: Rat, lambda: Rat) -> Result<Self> {
        let rest = Rat::one() - Rat::from_integer(2.into()) * a.clone();
        Self::new(vec![(-lambda.clone(), a.clone()), (Rat::zero(), rest), (lambda, a)])
    }

    pub fn atoms(&self) -> &[(Rat, Rat)] {
        &self.atoms
    }

    pub fn support_size(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_symmetric(&self) -> bool {
        self.atoms
            .iter()
            .all(|(x, w)| self.atoms.iter().any(|(y, u)| *y == -x.clone() && u == w))
    }

    pub fn moment(&self, k: usize) -> Rat {
        let mut acc = Rat::zero();
        for (x, w) in &self.atoms {
            let mut p = Rat::one();
            for _ in 0..k {
                p *= x;
            }
            acc += w * p;
        }
        acc
    }

    pub fn moments(&self, len: usize) -> Result<MomentSeq> {
        MomentSeq::new((1..=len).map(|k| self.moment(k)).collect())
    }

    /// JSON form `{"atoms": [{"x": "p/q", "w": "p/q"}, ...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "atoms": self
                .atoms
                .iter()
                .map(|(x, w)| serde_json::json!({"x": rat_to_string(x), "w": rat_to_string(w)}))
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let arr = v
            .get("atoms")
            .and_then(|a| a.as_array())
            .ok_or_else(|| Error::domain("measure JSON needs an \"atoms\" array"))?;
        let mut atoms = Vec::with_capacity(arr.len());
        for item in arr {
            let field = |name: &str| -> Result<Rat> {
                item.get(name)
                    .and_then(|f| f.as_str())
                    .ok_or_else(|| Error::domain(format!("atom needs string field {name:?}")))
                    .and_then(rat_from_str)
            };
            atoms.push((field("x")?, field("w")?));
        }
        Self::new(atoms)
    }
}

/// Monic orthogonal polynomials `p₀..p_K` of a moment functional, with
/// their squared norms. A zero norm marks the end of genuine orthogonality
/// (finite support); the stored polynomial is then the monic Gram-Schmidt
/// representative, which vanishes on the support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySeq {
    polys: Vec<Vec<Rat>>,
    norms_sq: Vec<Rat>,
    moments: MomentSeq,
}

impl PolySeq {
    pub fn max_degree(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn poly(&self, n: usize) -> &[Rat] {
        &self.polys[n]
    }

    pub fn norm_sq(&self, n: usize) -> &Rat {
        &self.norms_sq[n]
    }

    pub fn norms_sq(&self) -> &[Rat] {
        &self.norms_sq
    }

    pub fn eval(&self, n: usize, x: &Rat) -> Rat {
        poly_eval(&self.polys[n], x)
    }

    /// `⟨f, g⟩` under the moment functional.
    pub fn inner(&self, f: &[Rat], g: &[Rat]) -> Result<Rat> {
        let mut acc = Rat::zero();
        for (i, cf) in f.iter().enumerate() {
            if cf.is_zero() {
                continue;
            }
            for (j, cg) in g.iter().enumerate() {
                if cg.is_zero() {
                    continue;
                }
                acc += cf * cg * self.moments.get(i + j)?;
            }
        }
        Ok(acc)
    }

    /// Index of the first zero norm, if any (= support size).
    pub fn rank(&self) -> usize {
        self.norms_sq
            .iter()
            .position(|n| n.is_zero())
            .unwrap_or(self.norms_sq.len())
    }
}

/// Monic Gram-Schmidt orthogonalization of `1, x, x², …, x^K` under the
/// moment functional. Needs `2K` moments. A negative computed norm means
/// the sequence cannot come from a measure.
pub fn gram_schmidt(m: &MomentSeq, k_max: usize) -> Result<PolySeq> {
    if m.len() < 2 * k_max {
        return Err(Error::domain(format!(
            "gram_schmidt to degree {k_max} needs {} moments, got {}",
            2 * k_max,
            m.len()
        )));
    }
    let mut polys: Vec<Vec<Rat>> = Vec::with_capacity(k_max + 1);
    let mut norms: Vec<Rat> = Vec::with_capacity(k_max + 1);
    let seq = PolySeqBuilder { moments: m };
    for n in 0..=k_max {
        let mut p = vec![Rat::zero(); n + 1];
        p[n] = Rat::one();
        for j in 0..n {
            if norms[j].is_zero() {
                // For a genuine measure <x^n, p_j> = 0 here; anything else
                // betrays an invalid moment sequence.
                if !seq.inner(&p, &polys[j])?.is_zero() {
                    return Err(Error::InvalidMoments(
                        "nonzero projection onto a null polynomial".into(),
                    ));
                }
                continue;
            }
            let c = seq.inner(&p, &polys[j])? / norms[j].clone();
            if !c.is_zero() {
                for (t, coeff) in polys[j].iter().enumerate() {
                    p[t] -= c.clone() * coeff;
                }
            }
        }
        let norm = seq.inner(&p, &p)?;
        if norm.is_negative() {
            return Err(Error::InvalidMoments(format!(
                "negative norm at degree {n}: {}",
                rat_to_string(&norm)
            )));
        }
        polys.push(p);
        norms.push(norm);
    }
    Ok(PolySeq {
        polys,
        norms_sq: norms,
        moments: m.clone(),
    })
}

struct PolySeqBuilder<'a> {
    moments: &'a MomentSeq,
}

impl PolySeqBuilder<'_> {
    fn inner(&self, f: &[Rat], g: &[Rat]) -> Result<Rat> {
        let mut acc = Rat::zero();
        for (i, cf) in f.iter().enumerate() {
            if cf.is_zero() {
                continue;
            }
            for (j, cg) in g.iter().enumerate() {
                if cg.is_zero() {
                    continue;
                }
                acc += cf * cg * self.moments.get(i + j)?;
            }
        }
        Ok(acc)
    }
}

/// Three-term coefficients `b₁..b_K` of a symmetric measure:
/// `pₙ₊₁ = x·pₙ − bₙ·pₙ₋₁`, recovered as `bₙ = ‖pₙ‖²/‖pₙ₋₁‖²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiCoeffs {
    b: Vec<Rat>,
}

impl JacobiCoeffs {
    pub fn new(b: Vec<Rat>) -> Self {
        JacobiCoeffs { b }
    }

    pub fn values(&self) -> &[Rat] {
        &self.b
    }

    /// `b_n`, `n >= 1`; zero beyond the stored length.
    pub fn get(&self, n: usize) -> Rat {
        self.b.get(n - 1).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }
}

/// Extracts the Jacobi coefficients from an orthogonal sequence of a
/// symmetric measure; `bₙ = 0` once the norms vanish.
pub fn jacobi_coeffs(ps: &PolySeq) -> Result<JacobiCoeffs> {
    if !ps.moments.is_symmetric() {
        return Err(Error::domain("jacobi_coeffs expects a symmetric moment sequence"));
    }
    let mut b = Vec::new();
    for n in 1..=ps.max_degree() {
        if ps.norm_sq(n - 1).is_zero() {
            b.push(Rat::zero());
        } else {
            b.push(ps.norm_sq(n).clone() / ps.norm_sq(n - 1).clone());
        }
    }
    Ok(JacobiCoeffs { b })
}

/// q-Hermite polynomials via `Hₙ₊₁ = x·Hₙ − [n]_q·Hₙ₋₁` with
/// `[n]_q = 1 + q + … + q^{n−1}`, together with their Jacobi coefficients.
/// Norms are `[n]_q!`.
///
/// The recursion is implemented with the minus sign: with the printed plus
/// sign the q = 0 case fails semicircle orthogonality (see the test below).
pub fn q_hermite(k_max: usize, q: &Rat) -> Result<(PolySeq, JacobiCoeffs)> {
    if q < &-Rat::one() || q > &Rat::one() {
        return Err(Error::domain("q must lie in [-1, 1]"));
    }
    let mut b = Vec::with_capacity(k_max.max(1));
    let mut qn = Rat::zero(); // [n]_q accumulates 1 + q + ... + q^{n-1}
    let mut qpow = Rat::one();
    for _ in 1..=k_max.max(1) {
        qn += qpow.clone();
        qpow *= q;
        b.push(qn.clone());
    }
    let jac = JacobiCoeffs { b };
    let moments = moments_from_jacobi(&jac, 2 * k_max.max(1))?;
    let mut polys: Vec<Vec<Rat>> = vec![vec![Rat::one()]];
    if k_max >= 1 {
        polys.push(vec![Rat::zero(), Rat::one()]);
    }
    for n in 1..k_max {
        let mut next = vec![Rat::zero()];
        next.extend_from_slice(&polys[n]); // x * p_n, leading coefficient stays 1
        let bn = jac.get(n);
        for (t, c) in polys[n - 1].iter().enumerate() {
            next[t] -= bn.clone() * c;
        }
        polys.push(next);
    }
    let mut norms = Vec::with_capacity(k_max + 1);
    let mut acc = Rat::one();
    norms.push(Rat::one());
    for n in 1..=k_max {
        acc *= jac.get(n);
        norms.push(acc.clone());
    }
    Ok((
        PolySeq {
            polys,
            norms_sq: norms,
            moments,
        },
        jac,
    ))
}

/// Symmetric moments from Jacobi coefficients by the weighted-path rule:
/// `m_k` sums, over ±1 paths of length `k` from level 0 back to level 0,
/// the product of `b_level` over down-steps.
pub fn moments_from_jacobi(b: &JacobiCoeffs, len: usize) -> Result<MomentSeq> {
    let max_level = len / 2 + 1;
    let mut cur = vec![Rat::zero(); max_level + 2];
    cur[0] = Rat::one();
    let mut values = Vec::with_capacity(len);
    for _ in 1..=len {
        let mut next = vec![Rat::zero(); max_level + 2];
        for (l, v) in cur.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            if l <= max_level {
                next[l + 1] += v;
            }
            if l >= 1 {
                next[l - 1] += v * b.get(l);
            }
        }
        values.push(next[0].clone());
        cur = next;
    }
    MomentSeq::new(values)
}

/// The Mehler kernel `m_μ(r;x,y) = Σ_{n < s} rⁿ pₙ(x)pₙ(y)/‖pₙ‖²`, exact.
/// The sum stops at the support size: higher polynomials have norm zero.
pub fn mehler_eval(mu: &DiscreteMeasure, r: &Rat, x: &Rat, y: &Rat) -> Result<Rat> {
    let s = mu.support_size();
    let ps = gram_schmidt(&mu.moments(2 * (s - 1) + 2)?, s - 1)?;
    let mut acc = Rat::zero();
    let mut rn = Rat::one();
    for n in 0..s {
        if ps.norm_sq(n).is_zero() {
            break;
        }
        acc += rn.clone() * ps.eval(n, x) * ps.eval(n, y) / ps.norm_sq(n).clone();
        rn *= r;
    }
    Ok(acc)
}

/// One grid row of a Markov check: the kernel minimum over the support
/// square and the four finite-support positivity equivalences.
#[derive(Debug, Clone)]
pub struct MarkovRow {
    pub r: Rat,
    pub min_value: Rat,
    pub markovian: bool,
    pub positivity_preserving: bool,
    pub l1_contractive: bool,
    pub linf_contractive: bool,
    pub trace_preserving: bool,
}

#[derive(Debug, Clone)]
pub struct MarkovReport {
    pub rows: Vec<MarkovRow>,
}

impl MarkovReport {
    pub fn all_markovian(&self) -> bool {
        self.rows.iter().all(|r| r.markovian)
    }

    /// CSV schema: `r,min_value_num,min_value_den,markovian`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,min_value_num,min_value_den,markovian\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                rat_to_string(&row.r),
                row.min_value.numer(),
                row.min_value.denom(),
                row.markovian
            ));
        }
        out
    }
}

/// Evaluates the kernel over the full support square for each grid `r` and
/// verifies, independently, positivity preservation, L¹ and L∞ contraction
/// of `M_μ(r)`, and trace preservation.
pub fn markov_check(mu: &DiscreteMeasure, r_grid: &[Rat]) -> Result<MarkovReport> {
    let s = mu.support_size();
    let ps = gram_schmidt(&mu.moments(2 * (s - 1) + 2)?, s.saturating_sub(1))?;
    let points: Vec<&Rat> = mu.atoms().iter().map(|(x, _)| x).collect();
    let weights: Vec<&Rat> = mu.atoms().iter().map(|(_, w)| w).collect();
    let mut rows = Vec::with_capacity(r_grid.len());
    for r in r_grid {
        // kernel[a][b] = m(r; x_a, x_b)
        let mut kernel = vec![vec![Rat::zero(); s]; s];
        for a in 0..s {
            for bcol in 0..s {
                let mut acc = Rat::zero();
                let mut rn = Rat::one();
                for n in 0..s {
                    if ps.norm_sq(n).is_zero() {
                        break;
                    }
                    acc += rn.clone() * ps.eval(n, points[a]) * ps.eval(n, points[bcol])
                        / ps.norm_sq(n).clone();
                    rn *= r;
                }
                kernel[a][bcol] = acc;
            }
        }
        let min_value = kernel
            .iter()
            .flat_map(|row| row.iter())
            .min()
            .cloned()
            .unwrap();
        let markovian = !min_value.is_negative();
        // (2) positivity: M(r) applied to each atom indicator stays >= 0.
        let positivity_preserving = (0..s).all(|bcol| {
            (0..s).all(|a| !(kernel[a][bcol].clone() * weights[bcol]).is_negative())
        });
        // (3) L1 contraction: operator norm max_b sum_a |K[a][b]| w_a <= 1.
        let l1_contractive = (0..s).all(|bcol| {
            let mut sum = Rat::zero();
            for a in 0..s {
                sum += kernel[a][bcol].abs() * weights[a];
            }
            sum <= Rat::one()
        });
        // (4) Linf contraction: max_a sum_b |K[a][b]| w_b <= 1.
        let linf_contractive = (0..s).all(|a| {
            let mut sum = Rat::zero();
            for bcol in 0..s {
                sum += kernel[a][bcol].abs() * weights[bcol];
            }
            sum <= Rat::one()
        });
        // Trace preservation: column sums against mu are exactly 1.
        let trace_preserving = (0..s).all(|bcol| {
            let mut sum = Rat::zero();
            for a in 0..s {
                sum += kernel[a][bcol].clone() * weights[a];
            }
            sum == Rat::one()
        });
        rows.push(MarkovRow {
            r: r.clone(),
            min_value,
            markovian,
            positivity_preserving,
            l1_contractive,
            linf_contractive,
            trace_preserving,
        });
    }
    Ok(MarkovReport { rows })
}

/// Expands `f` in the orthogonal basis by L² projection, scales level `n`
/// by `rⁿ`, and re-expresses in monomials: the action of `M_μ(r)`.
pub fn multiplier_apply(ps: &PolySeq, r: &Rat, f: &[Rat]) -> Result<Vec<Rat>> {
    if f.len() > ps.max_degree() + 1 {
        return Err(Error::domain(format!(
            "polynomial degree {} exceeds the basis degree {}",
            f.len() - 1,
            ps.max_degree()
        )));
    }
    let coeffs = projection_coeffs(ps, f)?;
    let mut out = vec![Rat::zero(); f.len()];
    let mut rn = Rat::one();
    for (n, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            let scaled = c.clone() * rn.clone();
            for (t, pc) in ps.poly(n).iter().enumerate() {
                out[t] += scaled.clone() * pc;
            }
        }
        rn *= r;
    }
    poly_trim(&mut out);
    Ok(out)
}

/// L² expansion coefficients `f = Σ cₙ pₙ` (projection; zero at null levels).
pub fn projection_coeffs(ps: &PolySeq, f: &[Rat]) -> Result<Vec<Rat>> {
    let top = (f.len().max(1) - 1).min(ps.max_degree());
    let mut out = Vec::with_capacity(top + 1);
    for n in 0..=top {
        if ps.norm_sq(n).is_zero() {
            out.push(Rat::zero());
        } else {
            out.push(ps.inner(f, ps.poly(n))? / ps.norm_sq(n).clone());
        }
    }
    Ok(out)
}

/// Algebraic triangular expansion `xⁿ = Σ_k α_{n,k} p_k` with `α_{n,n} = 1`.
pub fn monomial_alpha(ps: &PolySeq, n: usize) -> Result<Vec<Rat>> {
    if n > ps.max_degree() {
        return Err(Error::domain(format!(
            "monomial degree {n} exceeds the basis degree {}",
            ps.max_degree()
        )));
    }
    let mut rem = vec![Rat::zero(); n + 1];
    rem[n] = Rat::one();
    let mut alpha = vec![Rat::zero(); n + 1];
    for k in (0..=n).rev() {
        let c = rem[k].clone();
        if !c.is_zero() {
            alpha[k] = c.clone();
            for (t, pc) in ps.poly(k).iter().enumerate() {
                rem[t] -= c.clone() * pc;
            }
        }
    }
    Ok(alpha)
}
