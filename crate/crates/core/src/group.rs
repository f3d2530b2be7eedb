//! The two ambient groups `F₂ = ⟨s₁, s₂⟩` and `Z≀Z`, their normal forms,
//! balls in the right Cayley graph, the elements `t_n = s₂ⁿs₁s₂⁻ⁿ` and
//! membership in `Λ_I = ⟨t_i | i ∈ I⟩`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index_set::IndexSetSpec;

/// Default cap on ball radii; free-group balls grow like `3^r`.
pub const DEFAULT_MAX_BALL_RADIUS: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupId {
    Free2,
    #[serde(rename = "wreath")]
    WreathZZ,
}

impl FromStr for GroupId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "free2" | "f2" | "free" => Ok(GroupId::Free2),
            "wreath" | "wreathzz" | "zwrz" => Ok(GroupId::WreathZZ),
            other => Err(Error::Parse(format!("unknown group {other:?}"))),
        }
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupId::Free2 => "free2",
            GroupId::WreathZZ => "wreath",
        })
    }
}

/// Generators `s₁, s₁⁻¹, s₂, s₂⁻¹`, in shortlex order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    S1,
    S1Inv,
    S2,
    S2Inv,
}

impl Gen {
    pub const ALL: [Gen; 4] = [Gen::S1, Gen::S1Inv, Gen::S2, Gen::S2Inv];

    pub fn inverse(self) -> Gen {
        match self {
            Gen::S1 => Gen::S1Inv,
            Gen::S1Inv => Gen::S1,
            Gen::S2 => Gen::S2Inv,
            Gen::S2Inv => Gen::S2,
        }
    }

    pub fn is_horizontal(self) -> bool {
        matches!(self, Gen::S1 | Gen::S1Inv)
    }

    fn base_and_sign(self) -> (u8, i64) {
        match self {
            Gen::S1 => (1, 1),
            Gen::S1Inv => (1, -1),
            Gen::S2 => (2, 1),
            Gen::S2Inv => (2, -1),
        }
    }

    pub fn from_base(base: u8, sign: i64) -> Gen {
        match (base, sign > 0) {
            (1, true) => Gen::S1,
            (1, false) => Gen::S1Inv,
            (2, true) => Gen::S2,
            _ => Gen::S2Inv,
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gen::S1 => "s1",
            Gen::S1Inv => "s1^-1",
            Gen::S2 => "s2",
            Gen::S2Inv => "s2^-1",
        })
    }
}

/// Freely reduced word; ordered shortlex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FreeWord(Vec<Gen>);

impl FreeWord {
    pub fn letters(&self) -> &[Gen] {
        &self.0
    }

    fn push(&mut self, g: Gen) {
        if self.0.last() == Some(&g.inverse()) {
            self.0.pop();
        } else {
            self.0.push(g);
        }
    }

    /// Maximal runs `(base, exponent)`, base 1 for `s₁`, 2 for `s₂`.
    fn syllables(&self) -> Vec<(u8, i64)> {
        let mut out: Vec<(u8, i64)> = Vec::new();
        for g in &self.0 {
            let (b, s) = g.base_and_sign();
            match out.last_mut() {
                Some((lb, e)) if *lb == b => *e += s,
                _ => out.push((b, s)),
            }
        }
        out
    }
}

impl Ord for FreeWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for FreeWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `(lamp, shift)` with `lamp: Z → Z` finitely supported; no zero values stored.
///
/// Multiplication is `(f, a)(g, b) = (f + σᵃg, a + b)` with `(σᵃg)(x) = g(x − a)`,
/// so `s₁ = ({0↦1}, 0)`, `s₂ = (0, 1)` and `t_n = ({n↦1}, 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct WreathElement {
    shift: i64,
    lamps: BTreeMap<i64, i64>,
}

impl WreathElement {
    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn lamps(&self) -> &BTreeMap<i64, i64> {
        &self.lamps
    }

    fn add_lamp(&mut self, pos: i64, v: i64) {
        let e = self.lamps.entry(pos).or_insert(0);
        *e += v;
        if *e == 0 {
            self.lamps.remove(&pos);
        }
    }

    fn mul(&self, rhs: &WreathElement) -> WreathElement {
        let mut out = self.clone();
        for (&p, &v) in &rhs.lamps {
            out.add_lamp(p + self.shift, v);
        }
        out.shift += rhs.shift;
        out
    }

    fn inverse(&self) -> WreathElement {
        WreathElement { shift: -self.shift, lamps: self.lamps.iter().map(|(&p, &v)| (p - self.shift, -v)).collect() }
    }
}

/// An element of `F₂` or `Z≀Z` in canonical normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Free(FreeWord),
    Wreath(WreathElement),
}

impl GroupElement {
    pub fn identity(group: GroupId) -> Self {
        match group {
            GroupId::Free2 => GroupElement::Free(FreeWord::default()),
            GroupId::WreathZZ => GroupElement::Wreath(WreathElement::default()),
        }
    }

    pub fn generator(group: GroupId, g: Gen) -> Self {
        match group {
            GroupId::Free2 => GroupElement::Free(FreeWord(vec![g])),
            GroupId::WreathZZ => {
                let mut w = WreathElement::default();
                match g {
                    Gen::S1 => w.add_lamp(0, 1),
                    Gen::S1Inv => w.add_lamp(0, -1),
                    Gen::S2 => w.shift = 1,
                    Gen::S2Inv => w.shift = -1,
                }
                GroupElement::Wreath(w)
            }
        }
    }

    pub fn from_word(group: GroupId, word: &[Gen]) -> Self {
        let mut x = Self::identity(group);
        for &g in word {
            x = x.mul_gen(g);
        }
        x
    }

    pub fn group(&self) -> GroupId {
        match self {
            GroupElement::Free(_) => GroupId::Free2,
            GroupElement::Wreath(_) => GroupId::WreathZZ,
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            GroupElement::Free(w) => w.0.is_empty(),
            GroupElement::Wreath(w) => w.shift == 0 && w.lamps.is_empty(),
        }
    }

    pub fn mul(&self, rhs: &GroupElement) -> Result<GroupElement> {
        match (self, rhs) {
            (GroupElement::Free(a), GroupElement::Free(b)) => {
                let mut out = a.clone();
                for &g in &b.0 {
                    out.push(g);
                }
                Ok(GroupElement::Free(out))
            }
            (GroupElement::Wreath(a), GroupElement::Wreath(b)) => Ok(GroupElement::Wreath(a.mul(b))),
            _ => Err(Error::Usage("cannot multiply elements of different groups".into())),
        }
    }

    /// Product of two elements known to share a group.
    pub fn times(&self, rhs: &GroupElement) -> GroupElement {
        self.mul(rhs).expect("operands from the same group")
    }

    /// Right multiplication by a generator (one step in the right Cayley graph).
    pub fn mul_gen(&self, g: Gen) -> GroupElement {
        match self {
            GroupElement::Free(w) => {
                let mut out = w.clone();
                out.push(g);
                GroupElement::Free(out)
            }
            GroupElement::Wreath(w) => {
                let mut out = w.clone();
                match g {
                    Gen::S1 => out.add_lamp(w.shift, 1),
                    Gen::S1Inv => out.add_lamp(w.shift, -1),
                    Gen::S2 => out.shift += 1,
                    Gen::S2Inv => out.shift -= 1,
                }
                GroupElement::Wreath(out)
            }
        }
    }

    pub fn inverse(&self) -> GroupElement {
        match self {
            GroupElement::Free(w) => GroupElement::Free(FreeWord(w.0.iter().rev().map(|g| g.inverse()).collect())),
            GroupElement::Wreath(w) => GroupElement::Wreath(w.inverse()),
        }
    }

    /// `g^k` for a generator, `k` possibly negative.
    pub fn gen_power(group: GroupId, g: Gen, k: i64) -> GroupElement {
        let step = if k >= 0 { g } else { g.inverse() };
        let mut x = Self::identity(group);
        for _ in 0..k.unsigned_abs() {
            x = x.mul_gen(step);
        }
        x
    }

    pub fn s1_power(group: GroupId, k: i64) -> GroupElement {
        Self::gen_power(group, Gen::S1, k)
    }

    pub fn s2_power(group: GroupId, k: i64) -> GroupElement {
        Self::gen_power(group, Gen::S2, k)
    }

    /// Right multiplication by `s₁ᵏ`.
    pub fn mul_s1_power(&self, k: i64) -> GroupElement {
        let step = if k >= 0 { Gen::S1 } else { Gen::S1Inv };
        (0..k.unsigned_abs()).fold(self.clone(), |x, _| x.mul_gen(step))
    }

    /// Right multiplication by `s₂ᵏ`.
    pub fn mul_s2_power(&self, k: i64) -> GroupElement {
        let step = if k >= 0 { Gen::S2 } else { Gen::S2Inv };
        (0..k.unsigned_abs()).fold(self.clone(), |x, _| x.mul_gen(step))
    }

    /// The four Cayley-graph neighbours `g·s`, in generator order.
    pub fn neighbors(&self) -> [GroupElement; 4] {
        Gen::ALL.map(|s| self.mul_gen(s))
    }

    /// Image under the quotient `F₂ → Z≀Z`; identity on `Z≀Z`.
    pub fn to_wreath(&self) -> GroupElement {
        match self {
            GroupElement::Free(w) => GroupElement::from_word(GroupId::WreathZZ, &w.0),
            GroupElement::Wreath(_) => self.clone(),
        }
    }

    /// Total exponent of `s₂`, the image in `Z = ⟨s₂⟩`.
    pub fn s2_height(&self) -> i64 {
        match self {
            GroupElement::Free(w) => {
                w.0.iter()
                    .map(|g| match g {
                        Gen::S2 => 1,
                        Gen::S2Inv => -1,
                        _ => 0,
                    })
                    .sum()
            }
            GroupElement::Wreath(w) => w.shift,
        }
    }

    /// Decomposes `g = rep · s₁ᵏ` with `rep` the canonical representative of `g⟨s₁⟩`.
    pub fn coset_split(&self) -> (GroupElement, i64) {
        match self {
            GroupElement::Free(w) => {
                let mut letters = w.0.clone();
                let mut k = 0;
                while let Some(&last) = letters.last() {
                    match last {
                        Gen::S1 => k += 1,
                        Gen::S1Inv => k -= 1,
                        _ => break,
                    }
                    letters.pop();
                }
                (GroupElement::Free(FreeWord(letters)), k)
            }
            GroupElement::Wreath(w) => {
                let mut rep = w.clone();
                let k = rep.lamps.remove(&w.shift).unwrap_or(0);
                (GroupElement::Wreath(rep), k)
            }
        }
    }

    /// Canonical word: the reduced word in `F₂`; `Π t_n^{f(n)} · s₂^shift` in `Z≀Z`.
    pub fn word(&self) -> Vec<Gen> {
        match self {
            GroupElement::Free(w) => w.0.clone(),
            GroupElement::Wreath(w) => {
                let mut out = Vec::new();
                for (&p, &v) in &w.lamps {
                    out.extend(power_letters(Gen::S2, p));
                    out.extend(power_letters(Gen::S1, v));
                    out.extend(power_letters(Gen::S2, -p));
                }
                out.extend(power_letters(Gen::S2, w.shift));
                // free reduction of the concatenation
                let mut red = FreeWord::default();
                for g in out {
                    red.push(g);
                }
                red.0
            }
        }
    }
}

fn power_letters(g: Gen, k: i64) -> Vec<Gen> {
    let step = if k >= 0 { g } else { g.inverse() };
    vec![step; k.unsigned_abs() as usize]
}

fn fmt_power(f: &mut fmt::Formatter<'_>, name: &str, k: i64, first: &mut bool) -> fmt::Result {
    if !*first {
        f.write_str(" ")?;
    }
    *first = false;
    if k == 1 {
        write!(f, "{name}")
    } else {
        write!(f, "{name}^{k}")
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("e");
        }
        let mut first = true;
        match self {
            GroupElement::Free(w) => {
                for (b, e) in w.syllables() {
                    fmt_power(f, if b == 1 { "s1" } else { "s2" }, e, &mut first)?;
                }
            }
            GroupElement::Wreath(w) => {
                for (&p, &v) in &w.lamps {
                    fmt_power(f, &format!("t{p}"), v, &mut first)?;
                }
                if w.shift != 0 {
                    fmt_power(f, "s2", w.shift, &mut first)?;
                }
            }
        }
        Ok(())
    }
}

/// Parses words such as `e`, `s1 s2^-2 s1^-1` or `t2 t5^-1 s2^3` (separators: whitespace, `*`, `.`).
pub fn parse_element(group: GroupId, s: &str) -> Result<GroupElement> {
    let mut x = GroupElement::identity(group);
    for tok in s.split(|c: char| c.is_whitespace() || c == '*' || c == '.').filter(|t| !t.is_empty()) {
        let (base, exp) = match tok.split_once('^') {
            Some((b, e)) => (b, e.parse::<i64>().map_err(|_| Error::Parse(format!("bad exponent in {tok:?}")))?),
            None => (tok, 1),
        };
        let factor = match base {
            "e" | "1" => GroupElement::identity(group),
            "s1" => GroupElement::generator(group, Gen::S1),
            "s2" => GroupElement::generator(group, Gen::S2),
            t if t.starts_with('t') => {
                let n: i64 = t[1..].parse().map_err(|_| Error::Parse(format!("bad t-index in {tok:?}")))?;
                t_conjugate(group, n)
            }
            _ => return Err(Error::Parse(format!("unknown token {tok:?}"))),
        };
        let p = power(&factor, exp);
        x = x.times(&p);
    }
    Ok(x)
}

pub fn power(x: &GroupElement, k: i64) -> GroupElement {
    let base = if k >= 0 { x.clone() } else { x.inverse() };
    (0..k.unsigned_abs()).fold(GroupElement::identity(x.group()), |acc, _| acc.times(&base))
}

/// `s₂ⁿ s₁ s₂⁻ⁿ` for any integer `n`.
pub fn t_conjugate(group: GroupId, n: i64) -> GroupElement {
    GroupElement::identity(group).mul_s2_power(n).mul_gen(Gen::S1).mul_s2_power(-n)
}

/// `t_n = s₂ⁿ s₁ s₂⁻ⁿ`.
pub fn t_generator(n: u64, group: GroupId) -> GroupElement {
    t_conjugate(group, n as i64)
}

/// Environment variable overriding [`DEFAULT_MAX_BALL_RADIUS`].
pub const MAX_BALL_RADIUS_ENV: &str = "L2LAB_MAX_BALL_RADIUS";

/// Parses a radius cap override; `None` for malformed values.
pub fn parse_radius_cap(s: &str) -> Option<u32> {
    s.trim().parse().ok()
}

/// The active cap: the environment override when well formed, else the default.
pub fn max_ball_radius() -> u32 {
    static CAP: std::sync::OnceLock<u32> = std::sync::OnceLock::new();
    *CAP.get_or_init(|| std::env::var(MAX_BALL_RADIUS_ENV).ok().and_then(|v| parse_radius_cap(&v)).unwrap_or(DEFAULT_MAX_BALL_RADIUS))
}

/// The ball `B(e, radius)` in the right Cayley graph, sorted canonically.
pub fn ball(radius: u32, group: GroupId) -> Result<Vec<GroupElement>> {
    ball_capped(radius, group, max_ball_radius())
}

pub fn ball_capped(radius: u32, group: GroupId, cap: u32) -> Result<Vec<GroupElement>> {
    if radius > cap {
        return Err(Error::Resource(format!("ball radius {radius} exceeds cap {cap}")));
    }
    let e = GroupElement::identity(group);
    let mut seen: HashSet<GroupElement> = HashSet::from([e.clone()]);
    let mut frontier = vec![e];
    for _ in 0..radius {
        let mut next = Vec::new();
        for x in &frontier {
            for y in x.neighbors() {
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// `B(E, radius)`: all points within `radius` of some point of `E`.
pub fn neighborhood<'a>(points: impl IntoIterator<Item = &'a GroupElement>, radius: u32) -> BTreeSet<GroupElement> {
    let mut seen: BTreeSet<GroupElement> = points.into_iter().cloned().collect();
    let mut frontier: Vec<GroupElement> = seen.iter().cloned().collect();
    for _ in 0..radius {
        let mut next = Vec::new();
        for x in &frontier {
            for y in x.neighbors() {
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    seen
}

/// Word distance between two elements, by breadth-first search up to `max`.
pub fn distance(a: &GroupElement, b: &GroupElement, max: u32) -> Option<u32> {
    let target = a.inverse().times(b);
    if target.is_identity() {
        return Some(0);
    }
    let mut seen = HashSet::from([GroupElement::identity(a.group())]);
    let mut queue = VecDeque::from([(GroupElement::identity(a.group()), 0u32)]);
    while let Some((x, d)) = queue.pop_front() {
        if d >= max {
            continue;
        }
        for y in x.neighbors() {
            if y == target {
                return Some(d + 1);
            }
            if seen.insert(y.clone()) {
                queue.push_back((y, d + 1));
            }
        }
    }
    None
}

/// Decides `x ∈ Λ_I`.
///
/// In `Z≀Z` this is `shift = 0` with lamp support inside `I`. In `F₂` the
/// `t_i` freely generate, so a reduced word lies in `Λ_I` iff it strips
/// greedily into blocks `s₂^{i} s₁^{k} s₂^{-i}` with every `i ∈ I`.
pub fn lambda_membership(x: &GroupElement, index_set: &IndexSetSpec) -> Result<bool> {
    match x {
        GroupElement::Wreath(w) => {
            if w.shift != 0 {
                return Ok(false);
            }
            for &p in w.lamps.keys() {
                if p < 0 || !index_set.contains(p as u64)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        GroupElement::Free(_) => Ok(lambda_decompose_free(x, index_set)?.is_some()),
    }
}

/// For `x ∈ Λ_I ⊂ F₂`, the unique reduced expression `Π t_{i_j}^{k_j}` as `(i_j, k_j)` pairs.
pub fn lambda_decompose_free(x: &GroupElement, index_set: &IndexSetSpec) -> Result<Option<Vec<(u64, i64)>>> {
    let GroupElement::Free(w) = x else {
        return Err(Error::Usage("free decomposition needs a free-group element".into()));
    };
    let mut out = Vec::new();
    let mut height: i64 = 0;
    for (base, e) in w.syllables() {
        if base == 2 {
            height += e;
            if height < 0 {
                return Ok(None);
            }
        } else {
            if height < 0 || !index_set.contains(height as u64)? {
                return Ok(None);
            }
            out.push((height as u64, e));
        }
    }
    if height != 0 {
        return Ok(None);
    }
    Ok(Some(out))
}

/// Expresses `x` over the `t`-alphabet for use as a `Λ_I` element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaElement {
    /// `(n, k)` factors of `Π t_n^k`, in order.
    pub factors: Vec<(u64, i64)>,
}

impl LambdaElement {
    pub fn new(factors: Vec<(u64, i64)>) -> Self {
        LambdaElement { factors }
    }

    pub fn generator(n: u64) -> Self {
        LambdaElement { factors: vec![(n, 1)] }
    }

    pub fn evaluate(&self, group: GroupId) -> GroupElement {
        self.factors.iter().fold(GroupElement::identity(group), |acc, &(n, k)| acc.times(&power(&t_generator(n, group), k)))
    }

    /// Recovers the factors of a `Λ_I` member (`None` if `x ∉ Λ_I`).
    pub fn from_element(x: &GroupElement, index_set: &IndexSetSpec) -> Result<Option<Self>> {
        match x {
            GroupElement::Free(_) => Ok(lambda_decompose_free(x, index_set)?.map(LambdaElement::new)),
            GroupElement::Wreath(w) => {
                if !lambda_membership(x, index_set)? {
                    return Ok(None);
                }
                Ok(Some(LambdaElement::new(w.lamps.iter().map(|(&p, &v)| (p as u64, v)).collect())))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(group: GroupId, s: &str) -> GroupElement {
        parse_element(group, s).unwrap()
    }

    #[test]
    fn inverse_cancellation() {
        for g in [GroupId::Free2, GroupId::WreathZZ] {
            let a = w(g, "s1");
            assert!(a.times(&a.inverse()).is_identity());
        }
    }

    #[test]
    fn free_reduction() {
        let a = w(GroupId::Free2, "s1 s2");
        let b = w(GroupId::Free2, "s2^-1 s1");
        assert_eq!(a.times(&b), w(GroupId::Free2, "s1^2"));
    }

    #[test]
    fn mixed_groups_rejected() {
        let a = w(GroupId::Free2, "s1");
        let b = w(GroupId::WreathZZ, "s1");
        assert!(matches!(a.mul(&b), Err(Error::Usage(_))));
    }

    #[test]
    fn t_generators() {
        assert_eq!(t_generator(0, GroupId::Free2), w(GroupId::Free2, "s1"));
        let t2 = t_generator(2, GroupId::Free2);
        assert_eq!(t2.word(), vec![Gen::S2, Gen::S2, Gen::S1, Gen::S2Inv, Gen::S2Inv]);
        let GroupElement::Wreath(t3) = t_generator(3, GroupId::WreathZZ) else { unreachable!() };
        assert_eq!(t3.shift(), 0);
        assert_eq!(t3.lamps().iter().map(|(&a, &b)| (a, b)).collect::<Vec<_>>(), vec![(3, 1)]);
    }

    #[test]
    fn wreath_t_commute_free_do_not() {
        for m in 0..=20u64 {
            for n in 0..=20u64 {
                let (a, b) = (t_generator(m, GroupId::WreathZZ), t_generator(n, GroupId::WreathZZ));
                assert_eq!(a.times(&b), b.times(&a));
                let (a, b) = (t_generator(m, GroupId::Free2), t_generator(n, GroupId::Free2));
                assert_eq!(a.times(&b) == b.times(&a), m == n);
            }
        }
    }

    #[test]
    fn ball_sizes() {
        assert_eq!(ball(0, GroupId::Free2).unwrap().len(), 1);
        assert_eq!(ball(1, GroupId::Free2).unwrap().len(), 5);
        assert_eq!(ball(2, GroupId::WreathZZ).unwrap().len(), 17);
        for r in 0..=6u32 {
            let closed: usize = 1 + (1..=r).map(|k| 4 * 3usize.pow(k - 1)).sum::<usize>();
            assert_eq!(ball(r, GroupId::Free2).unwrap().len(), closed);
        }
        let sizes: Vec<_> = (0..=6).map(|r| ball(r, GroupId::WreathZZ).unwrap().len()).collect();
        assert!(sizes.windows(2).all(|p| p[0] < p[1]));
        // relators have length 8, so radius-3 balls still agree
        assert_eq!(sizes[3], 53);
        assert!(matches!(ball(13, GroupId::Free2), Err(Error::Resource(_))));
    }

    #[test]
    fn ball_is_sorted_shortlex() {
        let b = ball(2, GroupId::Free2).unwrap();
        assert!(b[0].is_identity());
        assert!(b.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn display_parse_round_trip() {
        for g in [GroupId::Free2, GroupId::WreathZZ] {
            for x in ball(4, g).unwrap() {
                assert_eq!(w(g, &x.to_string()), x, "{x}");
                assert_eq!(GroupElement::from_word(g, &x.word()), x);
            }
        }
        assert_eq!(w(GroupId::WreathZZ, "s2^-1 s1 s2").to_string(), "t-1");
    }

    #[test]
    fn coset_split_recombines() {
        for g in [GroupId::Free2, GroupId::WreathZZ] {
            for x in ball(4, g).unwrap() {
                let (rep, k) = x.coset_split();
                assert_eq!(rep.mul_s1_power(k), x);
                assert_eq!(rep.mul_s1_power(3).coset_split().0, rep);
            }
        }
    }

    #[test]
    fn lambda_membership_examples() {
        let i = IndexSetSpec::explicit(vec![2, 5]);
        for g in [GroupId::Free2, GroupId::WreathZZ] {
            let x = t_generator(2, g).times(&t_generator(5, g));
            assert!(lambda_membership(&x, &i).unwrap());
            assert!(!lambda_membership(&t_generator(3, g), &i).unwrap());
            assert!(lambda_membership(&GroupElement::identity(g), &i).unwrap());
            assert!(lambda_membership(&GroupElement::identity(g), &IndexSetSpec::empty()).unwrap());
            assert!(!lambda_membership(&w(g, "s2"), &i).unwrap());
        }
        let x = power(&t_generator(5, GroupId::Free2), -3).times(&t_generator(2, GroupId::Free2));
        let d = LambdaElement::from_element(&x, &i).unwrap().unwrap();
        assert_eq!(d.factors, vec![(5, -3), (2, 1)]);
        assert_eq!(d.evaluate(GroupId::Free2), x);
    }

    #[test]
    fn quotient_is_a_homomorphism_on_samples() {
        let b = ball(3, GroupId::Free2).unwrap();
        for x in b.iter().step_by(7) {
            for y in b.iter().step_by(5) {
                assert_eq!(x.times(y).to_wreath(), x.to_wreath().times(&y.to_wreath()));
            }
        }
    }

    #[test]
    fn distances() {
        let g = GroupId::WreathZZ;
        let e = GroupElement::identity(g);
        assert_eq!(distance(&e, &t_generator(1, g), 6), Some(3));
        assert_eq!(distance(&e, &w(g, "s1 s2 s1"), 6), Some(3));
    }
}
