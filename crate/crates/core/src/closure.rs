//! Arithmetic of realizable dimensions: block sums add, tensor sums multiply,
//! and digit splitting writes any truncated dyadic as a combination of
//! dimension values of index sets.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::dimension::{beta_constants, dimension_closed_form, DimensionEnclosure, Route};
use crate::dyadic::{parse_rational, pow2_rational, rational_string, ExactDyadic};
use crate::error::{Error, Result};
use crate::index_set::IndexSetSpec;

/// Exponent step between consecutive theorem indices `n_k ≡ 2 (mod 3)`: `2^{−6·3}`.
pub const ATOM_BASE: u32 = 18;

/// Largest `D` for which [`split_digits`] materializes all `2^{D−1}` numbers.
pub const SPLIT_MAX_D: u32 = 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Recipe {
    Atom {
        index_set: IndexSetSpec,
    },
    Sum {
        children: Vec<Recipe>,
    },
    Product {
        left: Box<Recipe>,
        right: Box<Recipe>,
    },
    Scale {
        #[serde(with = "rational_str")]
        factor: BigRational,
        child: Box<Recipe>,
    },
    Shift {
        #[serde(with = "rational_str")]
        offset: BigRational,
        child: Box<Recipe>,
    },
}

mod rational_str {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&rational_string(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

impl Recipe {
    pub fn zero() -> Self {
        Recipe::Sum { children: Vec::new() }
    }

    /// The nonnegative rational `q`, as a shift of the empty sum.
    pub fn constant(q: BigRational) -> Self {
        Recipe::Shift { offset: q, child: Box::new(Recipe::zero()) }
    }

    pub fn atom_count(&self) -> usize {
        match self {
            Recipe::Atom { .. } => 1,
            Recipe::Sum { children } => children.iter().map(Recipe::atom_count).sum(),
            Recipe::Product { left, right } => left.atom_count() + right.atom_count(),
            Recipe::Scale { child, .. } | Recipe::Shift { child, .. } => child.atom_count(),
        }
    }

    /// Enclosure of the recipe value, atoms evaluated by the closed form.
    pub fn evaluate(&self) -> Result<DimensionEnclosure> {
        let point = |q: BigRational| DimensionEnclosure { lower: q.clone(), upper: q, route: Route::ClosedForm };
        match self {
            Recipe::Atom { index_set } => {
                let terms = index_set.len().ok_or_else(|| Error::Domain("recipe atoms must be finite index sets".into()))?;
                dimension_closed_form(index_set, terms)
            }
            Recipe::Sum { children } => {
                let mut acc = point(BigRational::zero());
                for c in children {
                    let v = c.evaluate()?;
                    acc.lower += v.lower;
                    acc.upper += v.upper;
                }
                Ok(acc)
            }
            Recipe::Product { left, right } => {
                let (a, b) = (left.evaluate()?, right.evaluate()?);
                check_nonnegative(&a)?;
                check_nonnegative(&b)?;
                Ok(DimensionEnclosure { lower: &a.lower * &b.lower, upper: &a.upper * &b.upper, route: Route::ClosedForm })
            }
            Recipe::Scale { factor, child } => {
                if factor.is_negative() {
                    return Err(Error::Domain("scale factors must be nonnegative".into()));
                }
                let v = child.evaluate()?;
                Ok(DimensionEnclosure { lower: factor * &v.lower, upper: factor * &v.upper, route: Route::ClosedForm })
            }
            Recipe::Shift { offset, child } => {
                if offset.is_negative() {
                    return Err(Error::Domain("shifts must be nonnegative".into()));
                }
                let v = child.evaluate()?;
                Ok(DimensionEnclosure { lower: offset + &v.lower, upper: offset + &v.upper, route: Route::ClosedForm })
            }
        }
    }
}

fn check_nonnegative(e: &DimensionEnclosure) -> Result<()> {
    if e.lower.is_negative() {
        return Err(Error::Domain("product operands must be nonnegative".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimValue {
    pub value: DimensionEnclosure,
    pub recipe: Recipe,
}

impl DimValue {
    pub fn from_recipe(recipe: Recipe) -> Result<Self> {
        Ok(DimValue { value: recipe.evaluate()?, recipe })
    }

    pub fn atom(index_set: IndexSetSpec) -> Result<Self> {
        Self::from_recipe(Recipe::Atom { index_set })
    }

    pub fn constant(q: BigRational) -> Result<Self> {
        Self::from_recipe(Recipe::constant(q))
    }
}

/// Block sum: values add.
pub fn combine_sum(a: &DimValue, b: &DimValue) -> DimValue {
    DimValue {
        value: DimensionEnclosure {
            lower: &a.value.lower + &b.value.lower,
            upper: &a.value.upper + &b.value.upper,
            route: Route::ClosedForm,
        },
        recipe: Recipe::Sum { children: vec![a.recipe.clone(), b.recipe.clone()] },
    }
}

/// Tensor sum: values multiply.
pub fn combine_product(a: &DimValue, b: &DimValue) -> Result<DimValue> {
    check_nonnegative(&a.value)?;
    check_nonnegative(&b.value)?;
    Ok(DimValue {
        value: DimensionEnclosure {
            lower: &a.value.lower * &b.value.lower,
            upper: &a.value.upper * &b.value.upper,
            route: Route::ClosedForm,
        },
        recipe: Recipe::Product { left: Box::new(a.recipe.clone()), right: Box::new(b.recipe.clone()) },
    })
}

/// `Σ_k 2^k·2^{−D n_k}` over a strictly increasing finite exponent list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormExistNumber {
    pub d: u32,
    pub exponents: Vec<u64>,
}

impl FormExistNumber {
    pub fn is_well_formed(&self) -> bool {
        self.d >= 1 && self.exponents.windows(2).all(|w| w[0] < w[1])
    }

    pub fn value(&self) -> ExactDyadic {
        self.exponents.iter().enumerate().map(|(k, &n)| ExactDyadic::pow2(k as i64 - self.d as i64 * n as i64)).sum()
    }
}

/// Digit splitting, keeping only the numbers that receive digits.
///
/// A number's `k`-th term takes a digit `2^{−Dn}` split into `2^p` equal parts
/// with `p = (−k) mod D`, giving `2^k·2^{−D(n + ⌈k/D⌉)}`. Digits are consumed in
/// increasing order; the block for term `k` holds `2^{D−1−p}` digits and hands
/// digit `q` of the block to numbers `q·2^p .. (q+1)·2^p`.
pub fn split_digits_sparse(digits: &[u64], d: u32) -> Result<BTreeMap<u64, FormExistNumber>> {
    if d == 0 || d > 63 {
        return Err(Error::Domain(format!("digit base D must lie in 1..=63, got {d}")));
    }
    let mut sorted = digits.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut out: BTreeMap<u64, FormExistNumber> = BTreeMap::new();
    let mut it = sorted.into_iter();
    let d64 = d as u64;
    'blocks: for k in 0u64.. {
        let p = (d64 - k % d64) % d64;
        let block = 1u64 << (d64 - 1 - p);
        for q in 0..block {
            let Some(n) = it.next() else { break 'blocks };
            let m = n + k.div_ceil(d64);
            for j in q << p..(q + 1) << p {
                out.entry(j).or_insert_with(|| FormExistNumber { d, exponents: Vec::new() }).exponents.push(m);
            }
        }
    }
    Ok(out)
}

/// The `2^{D−1}` numbers whose sum is `Σ_{n∈I} 2^{−Dn}`; unused numbers are empty.
pub fn split_digits(digits: &[u64], d: u32) -> Result<Vec<FormExistNumber>> {
    if d > SPLIT_MAX_D {
        return Err(Error::Resource(format!("2^{} numbers requested; use the sparse form", d.saturating_sub(1))));
    }
    let sparse = split_digits_sparse(digits, d)?;
    Ok((0..1u64 << (d.max(1) - 1)).map(|j| sparse.get(&j).cloned().unwrap_or(FormExistNumber { d, exponents: Vec::new() })).collect())
}

/// Normalization data: atoms `a + q Σ_{k≥1} 2^k 2^{−18n'_k}` with `a = β₁`,
/// `q = β₂·2⁻¹²`, `n'_k ≥ 1`; `lift` is the least `j ≥ 0` with `2^{18j} q ≥ a`,
/// and admissible bases are multiples of 18 that are at least `18(lift + 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Normalization {
    pub lift: u32,
    pub min_d: u32,
}

pub fn normalization() -> Normalization {
    let b = beta_constants();
    let q = &b.beta2 * pow2_rational(-12);
    let mut lift = 0;
    while pow2_rational(ATOM_BASE as i64 * lift as i64) * &q < b.beta1 {
        lift += 1;
    }
    Normalization { lift, min_d: ATOM_BASE * (lift + 1) }
}

/// Recipe for one form-exist number in base `D = 18u`:
/// `λ·(V(J) + c)` with `t = u·m₀ + lift`, `J = {2} ∪ {3(u·m_k − t) + 2}`,
/// `c = 2^{18·lift}q − a`, `λ = 2^{−18t}/q`, and `2^j` folded into `λ`.
fn form_recipe(f: &FormExistNumber, extra_scale: &BigRational, norm: &Normalization) -> Recipe {
    let b = beta_constants();
    let q = &b.beta2 * pow2_rational(-12);
    let u = (f.d / ATOM_BASE) as u64;
    let t = u * f.exponents[0] + norm.lift as u64;
    let mut elems = vec![2u64];
    elems.extend(f.exponents[1..].iter().map(|&m| 3 * (u * m - t) + 2));
    let c = pow2_rational(ATOM_BASE as i64 * norm.lift as i64) * &q - &b.beta1;
    let lambda = extra_scale * pow2_rational(-(ATOM_BASE as i64) * t as i64) / &q;
    Recipe::Scale {
        factor: lambda,
        child: Box::new(Recipe::Shift { offset: c, child: Box::new(Recipe::Atom { index_set: IndexSetSpec::explicit(elems) }) }),
    }
}

/// Recipe whose exact value is `r` truncated to `precision` binary digits.
/// `r` is split by digit position `j = Dn − k` into `Σ_k 2^k r_k` with
/// `r_k = Σ 2^{−Dn}`; each `r_k` is digit-split and every piece becomes one atom chain.
pub fn realize_target(r: &ExactDyadic, precision: u32, d: Option<u32>) -> Result<DimValue> {
    let rq = r.to_rational();
    if rq.is_negative() || rq >= BigRational::one() {
        return Err(Error::Domain("target must lie in [0, 1)".into()));
    }
    let norm = normalization();
    let d = d.unwrap_or(norm.min_d);
    if !d.is_multiple_of(ATOM_BASE) || d < norm.min_d {
        return Err(Error::Domain(format!("D must be a multiple of {ATOM_BASE} and at least {}", norm.min_d)));
    }
    let scaled = (rq * pow2_rational(precision as i64)).floor().to_integer();
    let mut by_k: BTreeMap<u32, Vec<u64>> = BTreeMap::new();
    for j in 1..=precision as u64 {
        if scaled.bit(precision as u64 - j) {
            let n = j.div_ceil(d as u64);
            let k = (n * d as u64 - j) as u32;
            by_k.entry(k).or_default().push(n);
        }
    }
    let mut children = Vec::new();
    for (k, digits) in by_k {
        let scale = pow2_rational(k as i64);
        for f in split_digits_sparse(&digits, d)?.into_values() {
            children.push(form_recipe(&f, &scale, &norm));
        }
    }
    DimValue::from_recipe(Recipe::Sum { children })
}

/// Truncation of `r` to `precision` binary digits.
pub fn truncate(r: &ExactDyadic, precision: u32) -> ExactDyadic {
    let q = (r.to_rational() * pow2_rational(precision as i64)).floor();
    ExactDyadic::new(q.to_integer(), -(precision as i64))
}

/// Parses a binary fraction such as `0.101` or `.101`.
pub fn parse_binary_fraction(s: &str) -> Result<ExactDyadic> {
    let s = s.trim();
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if !int.chars().all(|c| c == '0') || !frac.chars().all(|c| c == '0' || c == '1') {
        return Err(Error::Parse(format!("not a binary fraction in [0,1): {s:?}")));
    }
    Ok(frac.chars().enumerate().filter(|(_, c)| *c == '1').map(|(i, _)| ExactDyadic::pow2(-(i as i64) - 1)).sum())
}
