//! Exact evaluation of `dim ker(A + 2)` for an index set `I`.
//!
//! Two routes are provided. The closed form evaluates
//! `β₁ + β₂ Σ_{k≥1} 2^{−6n_k+k}` with a geometric tail majorant. The direct
//! route sums the hook contributions `2^{−3(l₁+l₂)−8+|I∩[1,min]|}` over
//! `3 | l₁+l₂` up to `max(l₁,l₂) ≤ L` and adds a crude tail bound.
//!
//! Two sets of constants are exposed. [`beta_constants`] evaluates the printed
//! closed formula. [`hook_sum_beta_constants`] is obtained by summing the hook
//! contributions exactly, including hooks with a leg of length 1; only with
//! these do the two routes meet.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::dyadic::{pow2_rational, rational, serialize_rational, ExactDyadic};
use crate::error::{Error, Result};
use crate::index_set::IndexSetSpec;
use crate::measure::hook_measure;

/// Number of leading elements checked against the theorem hypotheses.
const VALIDATE_PREFIX: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    ClosedForm,
    DirectSum,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionEnclosure {
    #[serde(serialize_with = "serialize_rational")]
    pub lower: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub upper: BigRational,
    pub route: Route,
}

impl DimensionEnclosure {
    pub fn width(&self) -> BigRational {
        &self.upper - &self.lower
    }

    pub fn is_point(&self) -> bool {
        self.lower == self.upper
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    pub fn intersects(&self, other: &DimensionEnclosure) -> bool {
        self.lower <= other.upper && other.lower <= self.upper
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BetaConstants {
    #[serde(serialize_with = "serialize_rational")]
    pub beta1: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub beta2: BigRational,
}

/// `(1 − 2⁻⁹)⁻²`
fn c9() -> BigRational {
    let one = BigRational::one();
    let d = &one - pow2_rational(-9);
    one / (&d * &d)
}

/// The printed constants: `β₁ = 3·2⁻¹⁸(1−2⁻⁹)⁻²`, `β₂ = 3·2⁻⁷(1−2⁻⁹)⁻²`.
pub fn beta_constants() -> BetaConstants {
    let three = rational(3, 1);
    let beta1 = &three / (pow2_rational(6) / c9()) * pow2_rational(-12);
    let beta2 = &three / (pow2_rational(7) / c9());
    BetaConstants { beta1, beta2 }
}

/// `Σ_{a,b ≥ n, 3 | a+b} 2^{−3(a+b)}` in closed form.
///
/// With `x = 2⁻³` and `q = −2n mod 3` this is
/// `x^{2n+q}·((q+1)/(1−x³) + 3x³/(1−x³)²)`.
pub fn u_sum_exact(n: u64) -> BigRational {
    let q = (3 - (2 * n) % 3) % 3;
    let x3 = pow2_rational(-9);
    let one = BigRational::one();
    let d = &one - &x3;
    let inner = rational(q as i64 + 1, 1) / &d + rational(3, 1) * &x3 / (&d * &d);
    pow2_rational(-3 * (2 * n + q) as i64) * inner
}

/// The value printed for the single-`U_k` sum: `3·2^{−6n+2}(1−2⁻⁹)⁻²`.
pub fn u_sum_printed(n: u64) -> BigRational {
    rational(3, 1) * pow2_rational(-6 * n as i64 + 2) * c9()
}

/// Truncated `U_k` sum over `n ≤ a, b ≤ L` with the tail bound
/// `2·2^{−3(L+1)}/(1−2⁻³) · 2^{−3n}/(1−2⁻³)`.
pub fn u_sum_direct(n: u64, l: u64) -> Result<DimensionEnclosure> {
    if l < n {
        return Err(Error::Domain(format!("truncation {l} below the corner {n}")));
    }
    let mut lower = ExactDyadic::zero();
    for a in n..=l {
        for b in n..=l {
            if (a + b) % 3 == 0 {
                lower = &lower + &ExactDyadic::pow2(-3 * (a + b) as i64);
            }
        }
    }
    let lower = lower.to_rational();
    let geo = rational(8, 7);
    let tail = rational(2, 1) * pow2_rational(-3 * (l as i64 + 1)) * &geo * pow2_rational(-3 * n as i64) * &geo;
    Ok(DimensionEnclosure { upper: &lower + tail, lower, route: Route::DirectSum })
}

/// Exact hook-sum constants: with `e_1 < e_2 < …` the positive elements of `I`,
/// the hook sum equals `2⁻⁸(S(1) + Σ_j 2^{j−1} S(e_j))`, `S = `[`u_sum_exact`].
/// For `I = {2, n₁, …}` with every `n_k ≡ 2 (mod 3)` this is
/// `β₁′ + β₂′ Σ_{k≥1} 2^{−6n_k+k}` with `β₁′ = 2⁻⁸(S(1)+S(2))`, `β₂′ = 3·2⁻¹⁴(1−2⁻⁹)⁻²`.
pub fn hook_sum_beta_constants() -> BetaConstants {
    let beta1 = pow2_rational(-8) * (u_sum_exact(1) + u_sum_exact(2));
    let beta2 = rational(3, 1) * pow2_rational(-14) * c9();
    BetaConstants { beta1, beta2 }
}

/// Exact hook sum for a finite `I` (any elements, no congruence needed).
pub fn hook_sum_exact(index_set: &IndexSetSpec) -> Result<BigRational> {
    let Some(len) = index_set.len() else {
        return Err(Error::Domain("exact hook sum needs a finite index set".into()));
    };
    let positive: Vec<u64> = index_set.prefix(len)?.into_iter().filter(|&n| n >= 1).collect();
    let mut total = u_sum_exact(1);
    for (j, &e) in positive.iter().enumerate() {
        total += pow2_rational(j as i64) * u_sum_exact(e);
    }
    Ok(pow2_rational(-8) * total)
}

/// Closed form with the printed constants.
pub fn dimension_closed_form(index_set: &IndexSetSpec, terms: usize) -> Result<DimensionEnclosure> {
    dimension_closed_form_with(index_set, terms, &beta_constants())
}

/// `β₁ + β₂ Σ_{k=1}^{terms} 2^{−6n_k+k}`, plus the majorant
/// `β₂·2^{−6n_{terms+1}+terms+1}·(1−2⁻⁵)⁻¹` when more elements exist.
/// The majorant holds since `n_{k+1} ≥ n_k + 3` makes consecutive ratios at most `2⁻¹⁷`.
pub fn dimension_closed_form_with(index_set: &IndexSetSpec, terms: usize, consts: &BetaConstants) -> Result<DimensionEnclosure> {
    index_set.validate_for_theorem(VALIDATE_PREFIX.max(terms + 2))?;
    let elems = index_set.prefix(terms + 2)?;
    let mut series = ExactDyadic::zero();
    for (k, &n) in elems.iter().enumerate().skip(1).take(terms) {
        series = &series + &ExactDyadic::pow2(-6 * n as i64 + k as i64);
    }
    let lower = &consts.beta1 + &consts.beta2 * series.to_rational();
    let upper = match elems.get(terms + 1) {
        Some(&n) => {
            let first = pow2_rational(-6 * n as i64 + terms as i64 + 1);
            &lower + &consts.beta2 * first / (BigRational::one() - pow2_rational(-5))
        }
        None => lower.clone(),
    };
    Ok(DimensionEnclosure { lower, upper, route: Route::ClosedForm })
}

/// `|I ∩ {1, …, m}|` for each `m ≤ l`.
fn prefix_counts(index_set: &IndexSetSpec, l: u64) -> Result<Vec<i64>> {
    let elems = index_set.elements_up_to(l)?;
    let mut counts = vec![0i64; l as usize + 1];
    for m in 1..=l as usize {
        counts[m] = counts[m - 1] + elems.contains(&(m as u64)) as i64;
    }
    Ok(counts)
}

/// Truncated direct hook sum over `1 ≤ l₁, l₂ ≤ L`, with tail bound
/// `2·2⁻⁸·2^{−3(L+1)}/(1−2⁻³)·(1/4)/(3/4)` from `2^K ≤ 2^{min(l₁,l₂)}`.
pub fn dimension_direct_sum(index_set: &IndexSetSpec, l: u64) -> Result<DimensionEnclosure> {
    if l < 2 {
        return Err(Error::Domain(format!("L must be at least 2, got {l}")));
    }
    let counts = prefix_counts(index_set, l)?;
    let mut lower = ExactDyadic::zero();
    for a in 1..=l {
        for b in 1..=l {
            if (a + b) % 3 == 0 {
                let k = counts[a.min(b) as usize];
                lower = &lower + &ExactDyadic::pow2(-3 * (a + b) as i64 - 8 + k);
            }
        }
    }
    let lower = lower.to_rational();
    Ok(DimensionEnclosure { upper: &lower + direct_tail_bound(l), lower, route: Route::DirectSum })
}

pub fn direct_tail_bound(l: u64) -> BigRational {
    rational(2, 1) * pow2_rational(-8) * pow2_rational(-3 * (l as i64 + 1)) * rational(8, 7) * rational(1, 3)
}

/// Contribution of the hook class with legs `(l₁, l₂)`: nonzero iff the hook length
/// `l₁ + l₂ + 1 ≡ 1 (mod 3)`, where the path model has a one-dimensional kernel.
pub fn summand_audit(index_set: &IndexSetSpec, l1: u32, l2: u32) -> Result<ExactDyadic> {
    let m = hook_measure(l1, l2, index_set)?;
    Ok(if (l1 + l2).is_multiple_of(3) { m } else { ExactDyadic::zero() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiouvilleWitness {
    pub n: u32,
    /// Number of series terms in the approximant.
    pub terms: usize,
    /// `q = 2^{q_exponent}`.
    pub q_exponent: i64,
    pub holds: bool,
}

/// For each `n`, finds `K ≤ max_terms` with `0 < x − p/q < q^{−n}` where
/// `x = Σ_{k≥1} 2^{−6n_k+k}`, `p/q` its `K`-term partial sum and `q = 2^{6n_K−K}`.
/// The difference is enclosed by the first omitted term and the majorant `(1−2⁻⁵)⁻¹` times it.
pub fn liouville_audit(index_set: &IndexSetSpec, max_n: u32, max_terms: usize) -> Result<Vec<LiouvilleWitness>> {
    let elems = index_set.prefix(max_terms + 2)?;
    let mut out = Vec::new();
    for n in 1..=max_n {
        let mut found = None;
        for k in 1..=max_terms {
            let (Some(&nk), Some(&next)) = (elems.get(k), elems.get(k + 1)) else { break };
            let q_exp = 6 * nk as i64 - k as i64;
            // p/q is exactly the partial sum: every term times q is an integer
            let tail_lo = pow2_rational(-6 * next as i64 + k as i64 + 1);
            let tail_hi = &tail_lo / (BigRational::one() - pow2_rational(-5));
            let bound = pow2_rational(-(n as i64) * q_exp);
            if tail_lo > BigRational::zero() && tail_hi < bound {
                found = Some(LiouvilleWitness { n, terms: k, q_exponent: q_exp, holds: true });
                break;
            }
        }
        out.push(found.unwrap_or(LiouvilleWitness { n, terms: 0, q_exponent: 0, holds: false }));
    }
    Ok(out)
}

/// Numerator `p` of the `K`-term partial sum over `q = 2^{6n_K−K}`.
pub fn liouville_numerator(index_set: &IndexSetSpec, terms: usize) -> Result<BigInt> {
    let elems = index_set.prefix(terms + 1)?;
    let nk = *elems.get(terms).ok_or_else(|| Error::Domain("not enough elements".into()))?;
    let q_exp = 6 * nk as i64 - terms as i64;
    let mut p = BigInt::zero();
    for (k, &n) in elems.iter().enumerate().skip(1).take(terms) {
        p += BigInt::one() << (q_exp - 6 * n as i64 + k as i64) as usize;
    }
    Ok(p)
}
