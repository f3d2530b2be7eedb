//! Relation systems for `V_{F,Λ}`, exact cylinder measures on `V^⊥`, and
//! a uniform sampler of extendable patterns.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dyadic::{sqrt_upper, ExactDyadic};
use crate::error::{Error, Result};
use crate::gf2::{BitVec, Echelon};
use crate::group::{lambda_membership, neighborhood, GroupElement, GroupId};
use crate::index_set::IndexSetSpec;
use crate::local_rules::{Hook, Pattern};

/// Largest window accepted by the exhaustive oracle.
pub const BRUTE_MAX_WINDOW: usize = 24;

/// `F_l = {s₁⁻¹, e, s₁}`.
pub fn f_l(group: GroupId) -> Vec<GroupElement> {
    vec![GroupElement::s1_power(group, -1), GroupElement::identity(group), GroupElement::s1_power(group, 1)]
}

#[derive(Clone, Debug)]
pub struct RelationSystem {
    pub group: GroupId,
    pub f: Vec<GroupElement>,
    pub lambda: IndexSetSpec,
    pub window: BTreeSet<GroupElement>,
}

impl RelationSystem {
    /// System with `F = F_l`.
    pub fn new(group: GroupId, lambda: IndexSetSpec, window: impl IntoIterator<Item = GroupElement>) -> Self {
        RelationSystem { group, f: f_l(group), lambda, window: window.into_iter().collect() }
    }

    pub fn with_f(mut self, f: Vec<GroupElement>) -> Self {
        self.f = f;
        self
    }

    /// The system on `B(R, 1)`.
    pub fn for_hook(hook: &Hook, lambda: IndexSetSpec) -> Self {
        let group = hook.base.group();
        RelationSystem::new(group, lambda, neighborhood(hook.vertices().iter(), 1))
    }

    pub fn with_window(&self, window: impl IntoIterator<Item = GroupElement>) -> Self {
        RelationSystem { window: window.into_iter().collect(), ..self.clone() }
    }

    pub fn f_on_s1_line(&self) -> bool {
        self.f.iter().all(|x| x.coset_split().0.is_identity())
    }

    /// The extension property is certified: `F` on the `s₁`-line and `E` horizontally connected.
    pub fn extension_certified(&self) -> bool {
        !self.f.is_empty() && self.f_on_s1_line() && is_horizontally_connected(&self.window)
    }
}

/// True iff every coset line `g⟨s₁⟩` meets `points` in a segment of consecutive points.
pub fn is_horizontally_connected<'a>(points: impl IntoIterator<Item = &'a GroupElement>) -> bool {
    lines(points).values().all(|ks| ks.windows(2).all(|w| w[1] == w[0] + 1))
}

/// Points grouped by `s₁`-coset, as sorted exponents over the canonical representative.
fn lines<'a>(points: impl IntoIterator<Item = &'a GroupElement>) -> BTreeMap<GroupElement, Vec<i64>> {
    let mut out: BTreeMap<GroupElement, Vec<i64>> = BTreeMap::new();
    for p in points {
        let (rep, k) = p.coset_split();
        out.entry(rep).or_default().push(k);
    }
    for ks in out.values_mut() {
        ks.sort_unstable();
        ks.dedup();
    }
    out
}

/// Fills every coset-line gap: the least horizontally connected superset.
pub fn horizontal_hull<'a>(points: impl IntoIterator<Item = &'a GroupElement>) -> BTreeSet<GroupElement> {
    let mut out = BTreeSet::new();
    for (rep, ks) in lines(points) {
        let (lo, hi) = (ks[0], ks[ks.len() - 1]);
        out.extend((lo..=hi).map(|k| rep.mul_s1_power(k)));
    }
    out
}

/// A translate `gF`, deduplicated by its point set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Translate {
    pub g: GroupElement,
    pub points: Vec<GroupElement>,
}

#[derive(Clone, Debug)]
pub struct OmegaClasses {
    pub translates: Vec<Translate>,
    /// Each class lists indices into `translates`.
    pub classes: Vec<Vec<usize>>,
}

impl OmegaClasses {
    /// `K = |Ω| − |Ω/Λ|`.
    pub fn k(&self) -> usize {
        self.translates.len() - self.classes.len()
    }

    pub fn non_singleton(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.classes.iter().filter(|c| c.len() > 1)
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// All translates `gF ⊆ window` and their `∼_Λ` classes.
pub fn translates_in(f: &[GroupElement], lambda: &IndexSetSpec, window: &BTreeSet<GroupElement>) -> Result<OmegaClasses> {
    let mut by_set: BTreeMap<Vec<GroupElement>, GroupElement> = BTreeMap::new();
    if let Some(f0) = f.first() {
        let f0_inv = f0.inverse();
        for x in window {
            // every translate containing x at the position of f0
            let g = x.times(&f0_inv);
            let mut pts: Vec<GroupElement> = f.iter().map(|y| g.times(y)).collect();
            if pts.iter().all(|p| window.contains(p)) {
                pts.sort();
                by_set
                    .entry(pts)
                    .and_modify(|h| {
                        if g < *h {
                            *h = g.clone()
                        }
                    })
                    .or_insert(g);
            }
        }
    }
    let translates: Vec<Translate> = by_set.into_iter().map(|(points, g)| Translate { g, points }).collect();
    let mut parent: Vec<usize> = (0..translates.len()).collect();
    // Λ_I lies in the kernel of the s₂-exponent map
    let mut by_height: HashMap<i64, Vec<usize>> = HashMap::new();
    for (i, t) in translates.iter().enumerate() {
        by_height.entry(t.g.s2_height()).or_default().push(i);
    }
    for bucket in by_height.values() {
        for (a, &i) in bucket.iter().enumerate() {
            let gi_inv = translates[i].g.inverse();
            for &j in &bucket[a + 1..] {
                if find(&mut parent, i) == find(&mut parent, j) {
                    continue;
                }
                if lambda_membership(&gi_inv.times(&translates[j].g), lambda)? {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..translates.len() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut classes: Vec<Vec<usize>> = groups.into_values().collect();
    classes.sort();
    Ok(OmegaClasses { translates, classes })
}

pub fn omega_classes(sys: &RelationSystem) -> Result<OmegaClasses> {
    translates_in(&sys.f, &sys.lambda, &sys.window)
}

/// `2^{|E|−K}`; refuses unless `E` is certified to have the extension property.
pub fn count_extendable(sys: &RelationSystem) -> Result<ExactDyadic> {
    if !sys.extension_certified() {
        return Err(Error::NotCertified("window is not horizontally connected or F leaves the s1-line".into()));
    }
    let k = omega_classes(sys)?.k();
    Ok(ExactDyadic::pow2((sys.window.len() - k) as i64))
}

/// Constraints on `E` obtained from all relations inside `B(E, enlarge)`
/// after eliminating the variables outside `E`. Rows are indexed by `E` in sorted order.
pub fn window_constraints(sys: &RelationSystem, enlarge: u32) -> Result<Vec<BitVec>> {
    let outer = neighborhood(sys.window.iter(), enlarge);
    // outside points get the low columns so they are eliminated first
    let mut cols: Vec<GroupElement> = outer.iter().filter(|p| !sys.window.contains(*p)).cloned().collect();
    let n_out = cols.len();
    cols.extend(sys.window.iter().cloned());
    let index: HashMap<&GroupElement, usize> = cols.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let omega = translates_in(&sys.f, &sys.lambda, &outer)?;
    let mut rows = Vec::new();
    for class in omega.non_singleton() {
        let first = &omega.translates[class[0]];
        for &other in &class[1..] {
            let mut r = BitVec::zeros(cols.len());
            for p in first.points.iter().chain(&omega.translates[other].points) {
                r.flip(index[p]);
            }
            rows.push(r);
        }
    }
    let order: Vec<usize> = (0..cols.len()).collect();
    let ech = Echelon::with_order(rows, cols.len(), &order);
    let mut eliminated = vec![false; cols.len()];
    eliminated[..n_out].iter_mut().for_each(|b| *b = true);
    Ok(ech
        .residual_rows(&eliminated)
        .into_iter()
        .map(|r| {
            let mut v = BitVec::zeros(sys.window.len());
            for i in r.ones() {
                v.set(i - n_out, true);
            }
            v
        })
        .collect())
}

/// Exhaustive count of patterns on `E` consistent with every relation inside `B(E, enlarge)`.
pub fn brute_count_extendable_with(sys: &RelationSystem, enlarge: u32) -> Result<u64> {
    let n = sys.window.len();
    if n > BRUTE_MAX_WINDOW {
        return Err(Error::Resource(format!("window of {n} points exceeds the oracle bound {BRUTE_MAX_WINDOW}")));
    }
    let masks: Vec<u32> = window_constraints(sys, enlarge)?.iter().map(|r| r.ones().fold(0u32, |m, i| m | 1 << i)).collect();
    let mut count = 0u64;
    for psi in 0u32..(1u32 << n) {
        if masks.iter().all(|m| (psi & m).count_ones() % 2 == 0) {
            count += 1;
        }
    }
    Ok(count)
}

pub fn brute_count_extendable(sys: &RelationSystem) -> Result<u64> {
    brute_count_extendable_with(sys, 1)
}

/// Some in-window relation `ψ(gF) = ψ(g'F)` fails.
pub fn violates_relations(psi: &Pattern, sys: &RelationSystem) -> Result<bool> {
    let omega = omega_classes(sys)?;
    for class in omega.non_singleton() {
        let p0 = psi.parity(omega.translates[class[0]].points.iter())?;
        for &i in &class[1..] {
            if psi.parity(omega.translates[i].points.iter())? != p0 {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// `m(C(ψ) ∩ V^⊥)` for `ψ` on the system window.
pub fn cylinder_measure(psi: &Pattern, sys: &RelationSystem) -> Result<ExactDyadic> {
    if !psi.covers(sys.window.iter()) {
        return Err(Error::Window("pattern does not cover the relation window".into()));
    }
    if !sys.extension_certified() {
        return Err(Error::NotCertified("extension property not certified for the window".into()));
    }
    if violates_relations(psi, sys)? {
        return Ok(ExactDyadic::zero());
    }
    let k = omega_classes(sys)?.k();
    Ok(ExactDyadic::pow2(-((sys.window.len() - k) as i64)))
}

/// `2^{−3(n+m)−8+K}` with `K = |I ∩ {1,…,min(n,m)}|`.
pub fn hook_measure(n: u32, m: u32, index_set: &IndexSetSpec) -> Result<ExactDyadic> {
    if n == 0 || m == 0 {
        return Err(Error::Domain(format!("hook legs must be positive, got ({n},{m})")));
    }
    let k = index_set.elements_up_to(n.min(m) as u64)?.iter().filter(|&&i| i >= 1).count() as i64;
    Ok(ExactDyadic::pow2(-3 * (n + m) as i64 - 8 + k))
}

/// Uniform sampler over the patterns on `E` that extend to `V^⊥`.
#[derive(Clone, Debug)]
pub struct CharacterSampler {
    group: GroupId,
    points: Vec<GroupElement>,
    index: HashMap<GroupElement, usize>,
    basis: Vec<BitVec>,
}

impl CharacterSampler {
    /// Uses in-window relations when the window is certified, else relations in `B(E,1)`.
    pub fn new(sys: &RelationSystem) -> Result<Self> {
        let enlarge = if sys.extension_certified() { 0 } else { 1 };
        let rows = window_constraints(sys, enlarge)?;
        let points: Vec<GroupElement> = sys.window.iter().cloned().collect();
        let basis = Echelon::new(rows, points.len()).nullspace();
        let index = points.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        Ok(CharacterSampler { group: sys.group, points, index, basis })
    }

    pub fn points(&self) -> &[GroupElement] {
        &self.points
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.index.get(g).copied()
    }

    /// `log₂` of the number of extendable patterns.
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn sample_bits<R: Rng + ?Sized>(&self, rng: &mut R) -> BitVec {
        let mut v = BitVec::zeros(self.points.len());
        for chunk in self.basis.chunks(64) {
            let coeffs: u64 = rng.gen();
            for (i, b) in chunk.iter().enumerate() {
                if coeffs >> i & 1 == 1 {
                    v.xor_assign(b);
                }
            }
        }
        v
    }

    pub fn to_pattern(&self, bits: &BitVec) -> Pattern {
        let mut p = Pattern::new(self.group);
        for (i, g) in self.points.iter().enumerate() {
            p.set(g.clone(), bits.get(i));
        }
        p
    }

    /// Compiled test `χ|_{window(ψ)} = ψ`; the pattern window must lie inside the sampler window.
    pub fn cylinder_event(&self, psi: &Pattern) -> Result<impl Fn(&BitVec) -> bool> {
        let mut mask = BitVec::zeros(self.points.len());
        let mut value = BitVec::zeros(self.points.len());
        for (g, v) in psi.iter() {
            let i = self.index_of(g).ok_or_else(|| Error::Window(format!("{g} outside sampler window")))?;
            mask.set(i, true);
            value.set(i, v);
        }
        Ok(move |bits: &BitVec| {
            let mut x = bits.clone();
            x.xor_assign(&value);
            !(0..x.len()).any(|i| mask.get(i) && x.get(i))
        })
    }
}

pub fn sample_character(sys: &RelationSystem, seed: u64) -> Result<Pattern> {
    let sampler = CharacterSampler::new(sys)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(sampler.to_pattern(&sampler.sample_bits(&mut rng)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EventEstimate {
    pub hits: u64,
    pub samples: u64,
    #[serde(serialize_with = "crate::dyadic::serialize_rational")]
    pub frequency: BigRational,
    /// Upper approximation of the binomial standard deviation at the empirical frequency.
    #[serde(serialize_with = "crate::dyadic::serialize_rational")]
    pub sigma: BigRational,
}

impl EventEstimate {
    /// `|frequency − p| ≤ k·√(p(1−p)/N)`, decided exactly.
    pub fn within_sigmas(&self, p: &BigRational, k: u32) -> bool {
        let d = &self.frequency - p;
        let var = p * (BigRational::one() - p) / BigRational::from_integer(self.samples.into());
        &d * &d <= var * BigRational::from_integer((k * k).into())
    }
}

/// Monte-Carlo frequency of `predicate` over uniform extendable patterns.
pub fn estimate_event_bits(
    sampler: &CharacterSampler,
    predicate: impl Fn(&BitVec) -> bool,
    samples: u64,
    seed: u64,
) -> Result<EventEstimate> {
    if samples == 0 {
        return Err(Error::Usage("at least one sample required".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hits = (0..samples).filter(|_| predicate(&sampler.sample_bits(&mut rng))).count() as u64;
    let frequency = BigRational::new(hits.into(), samples.into());
    let var = &frequency * (BigRational::one() - &frequency) / BigRational::from_integer(samples.into());
    let sigma = sqrt_upper(&var, 64);
    Ok(EventEstimate { hits, samples, frequency, sigma })
}

pub fn estimate_event(sys: &RelationSystem, predicate: impl Fn(&Pattern) -> bool, samples: u64, seed: u64) -> Result<EventEstimate> {
    let sampler = CharacterSampler::new(sys)?;
    estimate_event_bits(&sampler, |bits| predicate(&sampler.to_pattern(bits)), samples, seed)
}

/// The first `n` rows `{s₂^{-k}s₁^a : 0 ≤ k < n, |a| ≤ 1}` of the event `D_e`.
pub fn dg_window(group: GroupId, n: u32) -> BTreeSet<GroupElement> {
    (0..n as i64).flat_map(|k| (-1..=1).map(move |a| GroupElement::s2_power(group, -k).mul_s1_power(a))).collect()
}

/// The event `D_{e,N}` on its window: ones down the column, zeros beside it.
pub fn dg_pattern(group: GroupId, n: u32) -> Pattern {
    let window = dg_window(group, n);
    let ones: Vec<GroupElement> = (0..n as i64).map(|k| GroupElement::s2_power(group, -k)).collect();
    Pattern::from_support(group, window.iter(), ones.iter()).expect("column inside window")
}

/// Upper bound `2^{−(3N−K_N)}` on `m(D_{g,N})`, with `K_N` computed on the window.
pub fn dg_bound(n: u32, index_set: &IndexSetSpec) -> Result<ExactDyadic> {
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let mut worst = 0;
    for group in [GroupId::Free2, GroupId::WreathZZ] {
        let sys = RelationSystem::new(group, index_set.clone(), dg_window(group, n));
        worst = worst.max(omega_classes(&sys)?.k());
    }
    if worst > n as usize {
        return Err(Error::Internal(format!("K_N = {worst} exceeds N = {n}")));
    }
    Ok(ExactDyadic::pow2(-(3 * n as i64 - worst as i64)))
}

/// Extends `ψ` from its (horizontally connected) window to `target` one point at a
/// time, keeping every intermediate window horizontally connected; each new value
/// is forced by an equivalent translate when one exists and is 0 otherwise.
pub fn extend_pattern(psi: &Pattern, sys: &RelationSystem, target: &BTreeSet<GroupElement>) -> Result<Pattern> {
    if !sys.f_on_s1_line() {
        return Err(Error::NotCertified("F must lie on the s1-line".into()));
    }
    let mut current: BTreeSet<GroupElement> = psi.window().cloned().collect();
    if !is_horizontally_connected(&current) {
        return Err(Error::NotCertified("starting window is not horizontally connected".into()));
    }
    let goal = horizontal_hull(target.iter().chain(current.iter()));
    let mut chi = psi.clone();
    let s1 = |g: &GroupElement, k: i64| g.mul_s1_power(k);
    loop {
        let mut pending = goal.iter().filter(|h| !current.contains(*h));
        let Some(first) = pending.next() else { break };
        let touching = |h: &&GroupElement| current.contains(&s1(h, 1)) || current.contains(&s1(h, -1));
        let h = std::iter::once(first).chain(pending).find(touching).cloned().unwrap_or_else(|| {
            // no pending point is adjacent along its line: start a fresh line
            goal.iter().find(|h| !current.contains(*h)).unwrap().clone()
        });
        let value = forced_value(&chi, &current, &h, sys)?.unwrap_or(false);
        current.insert(h.clone());
        chi.set(h, value);
    }
    Ok(chi)
}

fn forced_value(chi: &Pattern, current: &BTreeSet<GroupElement>, h: &GroupElement, sys: &RelationSystem) -> Result<Option<bool>> {
    let mut grown = current.clone();
    grown.insert(h.clone());
    for fx in &sys.f {
        let g = h.times(&fx.inverse());
        let gf: Vec<GroupElement> = sys.f.iter().map(|y| g.times(y)).collect();
        if !gf.iter().all(|p| grown.contains(p)) {
            continue;
        }
        let omega = translates_in(&sys.f, &sys.lambda, current)?;
        let g_inv = g.inverse();
        for t in &omega.translates {
            if t.g.s2_height() == g.s2_height() && lambda_membership(&g_inv.times(&t.g), &sys.lambda)? {
                let rest = chi.parity(gf.iter().filter(|p| *p != h))?;
                return Ok(Some(rest ^ chi.parity(t.points.iter())?));
            }
        }
    }
    Ok(None)
}

/// Exact rational `p` as used by the Monte-Carlo comparisons.
pub fn dyadic_probability(d: &ExactDyadic) -> BigRational {
    d.to_rational()
}

/// Sum of cylinder measures over every extendable pattern on a small window.
pub fn total_extendable_mass(sys: &RelationSystem) -> Result<BigRational> {
    let n = sys.window.len();
    if n > 16 {
        return Err(Error::Resource("mass check limited to 16 points".into()));
    }
    let points: Vec<GroupElement> = sys.window.iter().cloned().collect();
    let mut total = BigRational::zero();
    for mask in 0u32..(1 << n) {
        let ones: Vec<&GroupElement> = points.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| p).collect();
        let psi = Pattern::from_support(sys.group, points.iter(), ones)?;
        total += cylinder_measure(&psi, sys)?.to_rational();
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::parse_element;

    fn el(g: GroupId, s: &str) -> GroupElement {
        parse_element(g, s).unwrap()
    }

    fn i2() -> IndexSetSpec {
        IndexSetSpec::explicit(vec![2])
    }

    #[test]
    fn horizontal_connectivity() {
        let g = GroupId::Free2;
        let e = GroupElement::identity(g);
        let gap: BTreeSet<_> = [el(g, "e"), el(g, "s1"), el(g, "s1^3")].into();
        assert!(!is_horizontally_connected(&gap));
        assert!(is_horizontally_connected([&e]));
        for n in 1..4 {
            for m in 1..4 {
                let h = Hook::new(e.clone(), n, m);
                assert!(is_horizontally_connected(&neighborhood(h.vertices().iter(), 1)));
            }
        }
    }

    #[test]
    fn hook_classes() {
        for g in [GroupId::Free2, GroupId::WreathZZ] {
            let base = GroupElement::identity(g);
            let sys = RelationSystem::for_hook(&Hook::new(base.clone(), 2, 2), i2());
            let om = omega_classes(&sys).unwrap();
            assert_eq!(om.k(), 1);
            let cls: Vec<_> = om.non_singleton().collect();
            assert_eq!(cls.len(), 1);
            let gs: BTreeSet<_> = cls[0].iter().map(|&i| om.translates[i].g.clone()).collect();
            assert_eq!(gs, BTreeSet::from([el(g, "s2^-2"), el(g, "s1 s2^-2")]));
            let short = RelationSystem::for_hook(&Hook::new(base.clone(), 1, 3), i2());
            assert_eq!(omega_classes(&short).unwrap().k(), 0);
            let trivial = RelationSystem::for_hook(&Hook::new(base, 2, 2), IndexSetSpec::empty());
            assert_eq!(omega_classes(&trivial).unwrap().k(), 0);
        }
    }

    #[test]
    fn counts_match_oracle_on_hooks() {
        for g in [GroupId::Free2, GroupId::WreathZZ] {
            let base = GroupElement::identity(g);
            let s11 = RelationSystem::for_hook(&Hook::new(base.clone(), 1, 1), i2());
            assert_eq!(s11.window.len(), 14);
            assert_eq!(brute_count_extendable(&s11).unwrap(), 1 << 14);
            assert_eq!(count_extendable(&s11).unwrap(), ExactDyadic::pow2(14));
            let s22 = RelationSystem::for_hook(&Hook::new(base, 2, 2), i2());
            assert_eq!(s22.window.len(), 20);
            assert_eq!(brute_count_extendable(&s22).unwrap(), 1 << 19);
            assert_eq!(count_extendable(&s22).unwrap(), ExactDyadic::pow2(19));
        }
    }

    #[test]
    fn trivial_lambda_counts() {
        let g = GroupId::WreathZZ;
        let window: Vec<_> = (0..5).map(|k| GroupElement::s1_power(g, k)).collect();
        let sys = RelationSystem::new(g, IndexSetSpec::empty(), window);
        assert_eq!(brute_count_extendable(&sys).unwrap(), 32);
        assert_eq!(count_extendable(&sys).unwrap(), ExactDyadic::pow2(5));
    }

    #[test]
    fn uncertified_window_refused() {
        let g = GroupId::Free2;
        let sys = RelationSystem::new(g, i2(), [el(g, "e"), el(g, "s1^2")]);
        assert!(matches!(count_extendable(&sys), Err(Error::NotCertified(_))));
    }

    #[test]
    fn hook_measures() {
        assert_eq!(hook_measure(1, 1, &i2()).unwrap(), ExactDyadic::pow2(-14));
        assert_eq!(hook_measure(2, 2, &i2()).unwrap(), ExactDyadic::pow2(-19));
        assert!(hook_measure(0, 2, &i2()).is_err());
        for g in [GroupId::Free2, GroupId::WreathZZ] {
            let h = Hook::new(GroupElement::identity(g), 2, 2);
            let sys = RelationSystem::for_hook(&h, i2());
            let psi = h.indicator(1);
            assert_eq!(cylinder_measure(&psi, &sys).unwrap(), ExactDyadic::pow2(-19));
        }
    }

    #[test]
    fn violating_pattern_has_zero_measure() {
        let g = GroupId::Free2;
        let h = Hook::new(GroupElement::identity(g), 2, 2);
        let sys = RelationSystem::for_hook(&h, i2());
        let mut psi = h.indicator(1);
        psi.set(el(g, "s2^-2 s1^-1"), true);
        assert_eq!(cylinder_measure(&psi, &sys).unwrap(), ExactDyadic::zero());
    }

    #[test]
    fn dg_bounds() {
        assert_eq!(dg_bound(1, &IndexSetSpec::empty()).unwrap(), ExactDyadic::pow2(-3));
        assert!(dg_bound(5, &i2()).unwrap() <= ExactDyadic::pow2(-10));
        let mut prev = dg_bound(1, &i2()).unwrap();
        for n in 2..8 {
            let b = dg_bound(n, &i2()).unwrap();
            assert!(b <= prev);
            prev = b;
        }
    }

    #[test]
    fn sampler_respects_relations_and_is_deterministic() {
        let g = GroupId::WreathZZ;
        let h = Hook::new(GroupElement::identity(g), 2, 2);
        let sys = RelationSystem::for_hook(&h, i2());
        let a = sample_character(&sys, 11).unwrap();
        assert_eq!(a, sample_character(&sys, 11).unwrap());
        for seed in 0..50 {
            let chi = sample_character(&sys, seed).unwrap();
            assert!(!violates_relations(&chi, &sys).unwrap());
        }
        assert_eq!(CharacterSampler::new(&sys).unwrap().dimension(), 19);
    }

    #[test]
    fn trivial_event() {
        let g = GroupId::Free2;
        let sys = RelationSystem::new(g, IndexSetSpec::empty(), [GroupElement::identity(g)]);
        let est = estimate_event(&sys, |_| true, 100, 1).unwrap();
        assert_eq!(est.frequency, BigRational::one());
        assert!(est.sigma.is_zero());
    }

    #[test]
    fn extension_witness_on_small_hook() {
        for g in [GroupId::Free2, GroupId::WreathZZ] {
            let h = Hook::new(GroupElement::identity(g), 2, 3);
            let sys = RelationSystem::for_hook(&h, i2());
            let psi = h.indicator(1);
            let target = neighborhood(h.vertices().iter(), 3);
            let chi = extend_pattern(&psi, &sys, &target).unwrap();
            assert_eq!(chi.restrict(sys.window.iter()).unwrap(), psi);
            let big = sys.with_window(chi.window().cloned());
            assert!(!violates_relations(&chi, &big).unwrap());
        }
    }

    #[test]
    fn measures_sum_to_one() {
        let g = GroupId::WreathZZ;
        let window: Vec<_> = [(0, 0), (0, 1), (0, 2), (2, 0), (2, 1), (2, 2)]
            .iter()
            .map(|&(h, k)| GroupElement::s2_power(g, h).mul_s1_power(1).mul_s2_power(-h).mul_s1_power(k))
            .collect();
        let sys = RelationSystem::new(g, i2(), window);
        assert_eq!(total_extendable_mass(&sys).unwrap(), BigRational::one());
    }
}
