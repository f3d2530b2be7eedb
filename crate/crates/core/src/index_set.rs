//! Index sets `I ⊂ N` controlling which generators `t_n` enter `Λ_I`.
//!
//! Sets are either explicit finite lists, the congruence-adjusted factorial
//! rule, or an arbitrary strictly increasing generator. Rule-based sets may be
//! infinite; every query only materializes the prefix it needs.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Generator for the `k`-th smallest element (`k = 0, 1, ...`), `None` past the end.
#[derive(Clone)]
pub struct IndexRule {
    pub name: String,
    generator: Arc<dyn Fn(usize) -> Option<u64> + Send + Sync>,
}

impl IndexRule {
    pub fn new(name: impl Into<String>, f: impl Fn(usize) -> Option<u64> + Send + Sync + 'static) -> Self {
        IndexRule { name: name.into(), generator: Arc::new(f) }
    }
}

impl fmt::Debug for IndexRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IndexRule({})", self.name)
    }
}

/// Serializable description of an index set.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum IndexSetSpec {
    Explicit {
        elements: Vec<u64>,
    },
    /// Leading 2, then for `k = 1..=count` the least `m_k >= k!` with
    /// `m_k ≡ 2 (mod 3)` exceeding `m_{k-1}`. Without `count` the rule is infinite.
    /// With `adjust = false` the plain strictly increasing factorials `1, 2, 6, 24, ...`.
    Factorial {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        count: Option<usize>,
        #[serde(default = "default_true")]
        adjust: bool,
    },
    #[serde(skip)]
    Custom(IndexRule),
}

impl PartialEq for IndexSetSpec {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (IndexSetSpec::Explicit { elements: a }, IndexSetSpec::Explicit { elements: b }) => a == b,
            (IndexSetSpec::Factorial { count: c1, adjust: a1 }, IndexSetSpec::Factorial { count: c2, adjust: a2 }) => c1 == c2 && a1 == a2,
            (IndexSetSpec::Custom(a), IndexSetSpec::Custom(b)) => a.name == b.name,
            _ => false,
        }
    }
}

fn default_true() -> bool {
    true
}

/// Bound on generator steps when searching a rule-based set.
const RULE_SCAN_CAP: usize = 1 << 20;

impl IndexSetSpec {
    pub fn explicit(mut elements: Vec<u64>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        IndexSetSpec::Explicit { elements }
    }

    pub fn empty() -> Self {
        IndexSetSpec::Explicit { elements: Vec::new() }
    }

    pub fn factorial(count: Option<usize>) -> Self {
        IndexSetSpec::Factorial { count, adjust: true }
    }

    pub fn custom(rule: IndexRule) -> Self {
        IndexSetSpec::Custom(rule)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let spec: IndexSetSpec = serde_json::from_str(s).map_err(|e| Error::Parse(format!("index set: {e}")))?;
        spec.check_increasing()?;
        Ok(spec)
    }

    fn check_increasing(&self) -> Result<()> {
        if let IndexSetSpec::Explicit { elements } = self {
            if elements.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Validation(format!("index set must be strictly increasing: {elements:?}")));
            }
        }
        Ok(())
    }

    /// Number of elements, `None` when infinite.
    pub fn len(&self) -> Option<usize> {
        match self {
            IndexSetSpec::Explicit { elements } => Some(elements.len()),
            IndexSetSpec::Factorial { count: Some(k), adjust: true } => Some(k + 1),
            IndexSetSpec::Factorial { count: Some(k), adjust: false } => Some(*k),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    pub fn is_finite(&self) -> bool {
        self.len().is_some()
    }

    /// The `k`-th smallest element (0-based).
    pub fn element(&self, k: usize) -> Result<Option<u64>> {
        match self {
            IndexSetSpec::Explicit { elements } => Ok(elements.get(k).copied()),
            IndexSetSpec::Factorial { count, adjust } => {
                if let Some(c) = count {
                    let len = if *adjust { c + 1 } else { *c };
                    if k >= len {
                        return Ok(None);
                    }
                }
                factorial_element(k, *adjust).map(Some)
            }
            IndexSetSpec::Custom(rule) => Ok((rule.generator)(k)),
        }
    }

    /// All elements `<= max`, increasing.
    pub fn elements_up_to(&self, max: u64) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        for k in 0.. {
            if k >= RULE_SCAN_CAP {
                return Err(Error::Resource("index rule scan cap".into()));
            }
            match self.element(k) {
                Ok(Some(n)) if n <= max => {
                    if out.last().is_some_and(|&p| p >= n) {
                        return Err(Error::Validation(format!("index rule not strictly increasing at position {k}")));
                    }
                    out.push(n)
                }
                Ok(_) => break,
                // an overflowing rule element certainly exceeds `max`
                Err(Error::Resource(_)) => break,
                Err(e) => return Err(e),
            }
        }
        Ok(out)
    }

    /// The first `count` elements (fewer if the set is finite and smaller).
    pub fn prefix(&self, count: usize) -> Result<Vec<u64>> {
        let mut out = Vec::with_capacity(count);
        for k in 0..count {
            match self.element(k)? {
                Some(n) => out.push(n),
                None => break,
            }
        }
        Ok(out)
    }

    pub fn contains(&self, n: u64) -> Result<bool> {
        match self {
            IndexSetSpec::Explicit { elements } => Ok(elements.binary_search(&n).is_ok()),
            _ => Ok(self.elements_up_to(n)?.last() == Some(&n)),
        }
    }

    /// The first `count` elements, stopping early at elements too large for `u64`.
    pub fn representable_prefix(&self, count: usize) -> Result<Vec<u64>> {
        let mut out = Vec::with_capacity(count);
        for k in 0..count {
            match self.element(k) {
                Ok(Some(n)) => out.push(n),
                Ok(None) | Err(Error::Resource(_)) => break,
                Err(e) => return Err(e),
            }
        }
        Ok(out)
    }

    /// Checks the hypotheses of the main dimension formula on the first `check`
    /// representable elements: least element 2, strictly increasing, every element ≡ 2 (mod 3).
    pub fn validate_for_theorem(&self, check: usize) -> Result<()> {
        let prefix = self.representable_prefix(check.max(1))?;
        match prefix.first() {
            Some(2) => {}
            Some(n) => return Err(Error::Validation(format!("least element must be 2, got {n}"))),
            None => return Err(Error::Validation("index set must contain 2".into())),
        }
        for w in prefix.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Validation(format!("not strictly increasing: {} then {}", w[0], w[1])));
            }
        }
        if let Some(bad) = prefix.iter().find(|&&n| n % 3 != 2) {
            return Err(Error::Validation(format!("element {bad} is not congruent to 2 mod 3")));
        }
        Ok(())
    }
}

fn factorial(k: u64) -> Result<u64> {
    (1..=k).try_fold(1u64, |acc, i| acc.checked_mul(i)).ok_or_else(|| Error::Resource(format!("{k}! overflows u64")))
}

fn factorial_element(k: usize, adjust: bool) -> Result<u64> {
    if !adjust {
        // 1!, 2!, 3!, ... (0! = 1! dropped)
        return factorial(k as u64 + 1);
    }
    let mut prev = 2u64;
    for j in 1..=k as u64 {
        let lower = factorial(j)?.max(prev + 1);
        let m = lower + (2 + 3 - lower % 3) % 3;
        prev = m;
    }
    Ok(prev)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_rule_prefix() {
        let spec = IndexSetSpec::factorial(None);
        assert_eq!(spec.prefix(8).unwrap(), vec![2, 5, 8, 11, 26, 122, 722, 5042]);
        assert!(spec.validate_for_theorem(8).is_ok());
        assert!(spec.contains(122).unwrap());
        assert!(!spec.contains(123).unwrap());
    }

    #[test]
    fn factorial_with_count_is_finite() {
        let spec = IndexSetSpec::factorial(Some(3));
        assert_eq!(spec.len(), Some(4));
        assert_eq!(spec.prefix(10).unwrap(), vec![2, 5, 8, 11]);
    }

    #[test]
    fn plain_factorials() {
        let spec = IndexSetSpec::Factorial { count: None, adjust: false };
        assert_eq!(spec.prefix(5).unwrap(), vec![1, 2, 6, 24, 120]);
        assert!(spec.validate_for_theorem(5).is_err());
    }

    #[test]
    fn json_forms() {
        let a = IndexSetSpec::from_json(r#"{"kind":"explicit","elements":[2,5,11]}"#).unwrap();
        assert_eq!(a.prefix(5).unwrap(), vec![2, 5, 11]);
        let b = IndexSetSpec::from_json(r#"{"kind":"factorial","count":4}"#).unwrap();
        assert_eq!(b.prefix(10).unwrap(), vec![2, 5, 8, 11, 26]);
        assert!(IndexSetSpec::from_json(r#"{"kind":"explicit","elements":[5,2]}"#).is_err());
    }

    #[test]
    fn theorem_validation_errors() {
        assert!(IndexSetSpec::explicit(vec![2, 4]).validate_for_theorem(5).is_err());
        assert!(IndexSetSpec::explicit(vec![5]).validate_for_theorem(5).is_err());
        assert!(IndexSetSpec::empty().validate_for_theorem(5).is_err());
        assert!(IndexSetSpec::explicit(vec![2, 5, 11]).validate_for_theorem(5).is_ok());
    }

    #[test]
    fn custom_rule() {
        let spec = IndexSetSpec::custom(IndexRule::new("3k+2", |k| Some(3 * k as u64 + 2)));
        assert!(spec.contains(14).unwrap());
        assert!(!spec.contains(15).unwrap());
        assert_eq!(spec.elements_up_to(10).unwrap(), vec![2, 5, 8]);
    }
}
