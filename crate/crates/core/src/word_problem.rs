//! Membership in `V_{F_l,I} ⊂ Z₂[Γ]` with replayable certificates, and the
//! relation stream of the recursive presentation of `G_I`.
//!
//! On each coset line `c⟨s₁⟩` a finitely supported `x` is a Laurent polynomial
//! in `s₁`, and `x ∈ V` iff `x = y·(s₁⁻¹ + e + s₁)` for a finitely supported `y`
//! whose support meets every left coset `gΛ_I` in an even number of points.
//! The reduction subtracts `g·w_t = 1_{gF_l} + 1_{gtF_l}` for `g` the least point
//! of `supp y`, which is interior to a support interval of `x`, and `gt` another
//! point of `supp y` in the class of `g`; each step removes two points of `supp y`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{ball, lambda_membership, Gen, GroupElement, GroupId, LambdaElement};
use crate::index_set::IndexSetSpec;
use crate::measure::f_l;

/// Finitely supported `Z₂`-valued function on `Γ`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GF2Vector {
    support: BTreeSet<GroupElement>,
}

impl GF2Vector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn delta(g: GroupElement) -> Self {
        GF2Vector { support: BTreeSet::from([g]) }
    }

    pub fn from_points(points: impl IntoIterator<Item = GroupElement>) -> Self {
        let mut v = Self::zero();
        for p in points {
            v.toggle(p);
        }
        v
    }

    pub fn support(&self) -> &BTreeSet<GroupElement> {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn toggle(&mut self, g: GroupElement) {
        if !self.support.remove(&g) {
            self.support.insert(g);
        }
    }

    pub fn add_assign(&mut self, other: &GF2Vector) {
        for g in &other.support {
            self.toggle(g.clone());
        }
    }

    /// Left translate `g·x`.
    pub fn translate(&self, g: &GroupElement) -> GF2Vector {
        GF2Vector { support: self.support.iter().map(|x| g.times(x)).collect() }
    }
}

impl fmt::Display for GF2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.support.iter().map(|g| format!("δ[{g}]")).collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// `w_t = Σ_{h∈F_l} (δ_h + δ_{th})`.
pub fn generator_w(t: &GroupElement) -> GF2Vector {
    let mut v = GF2Vector::zero();
    for h in f_l(t.group()) {
        v.toggle(h.clone());
        v.toggle(t.times(&h));
    }
    v
}

pub fn generator_w_lambda(t: &LambdaElement, group: GroupId) -> GF2Vector {
    generator_w(&t.evaluate(group))
}

/// Smallest interval `[c·s₁^v, c·s₁^w]` containing the support on one coset line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportInterval {
    pub coset: String,
    pub left: i64,
    pub right: i64,
}

impl SupportInterval {
    pub fn width(&self) -> i64 {
        self.right - self.left
    }
}

fn lines(x: &GF2Vector) -> BTreeMap<GroupElement, BTreeSet<i64>> {
    let mut out: BTreeMap<GroupElement, BTreeSet<i64>> = BTreeMap::new();
    for g in x.support() {
        let (rep, k) = g.coset_split();
        out.entry(rep).or_default().insert(k);
    }
    out
}

pub fn support_intervals(x: &GF2Vector) -> Vec<SupportInterval> {
    lines(x)
        .into_iter()
        .map(|(rep, ks)| SupportInterval { coset: rep.to_string(), left: *ks.first().unwrap(), right: *ks.last().unwrap() })
        .collect()
}

/// Exact division of a line polynomial by `z⁻¹ + 1 + z`; exponents of the quotient.
fn divide_line(ks: &BTreeSet<i64>) -> Option<BTreeSet<i64>> {
    let (lo, hi) = (*ks.first()?, *ks.last()?);
    if hi - lo < 2 {
        return None;
    }
    // r holds the running remainder; quotient terms sit at lo+1 ..= hi-1
    let mut r: BTreeSet<i64> = ks.clone();
    let mut q = BTreeSet::new();
    for k in lo + 1..=hi - 1 {
        if r.contains(&(k - 1)) {
            q.insert(k);
            for j in [k - 1, k, k + 1] {
                if !r.remove(&j) {
                    r.insert(j);
                }
            }
        }
    }
    r.is_empty().then_some(q)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Rejection {
    /// A nonempty support interval has `w − v < 2`.
    ShortInterval { coset: String, left: i64, right: i64 },
    /// The line is not a sum of `F_l`-translates.
    NotDecomposable { coset: String },
    /// No other point of the quotient support lies in `gΛ_I`.
    NoPartner { point: String },
}

/// One subtraction step: `g·w_t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateStep {
    pub g: GroupElement,
    pub t: GroupElement,
}

impl CertificateStep {
    pub fn block(&self) -> GF2Vector {
        generator_w(&self.t).translate(&self.g)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Member { certificate: Vec<CertificateStep> },
    NotMember { rejection: Rejection, steps_taken: usize },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }
}

/// `Σ g_i·w_{t_i}`; equals `x` for an accepted certificate.
pub fn replay(steps: &[CertificateStep]) -> GF2Vector {
    let mut acc = GF2Vector::zero();
    for s in steps {
        acc.add_assign(&s.block());
    }
    acc
}

/// Checks a certificate: every `t ∈ Λ_I` and the blocks sum to `x`.
pub fn verify_certificate(x: &GF2Vector, steps: &[CertificateStep], index_set: &IndexSetSpec) -> Result<bool> {
    for s in steps {
        if !lambda_membership(&s.t, index_set)? {
            return Ok(false);
        }
    }
    Ok(replay(steps) == *x)
}

/// The quotient `y` with `x = y·(s₁⁻¹+e+s₁)`, or the first obstruction.
fn quotient(x: &GF2Vector) -> std::result::Result<BTreeSet<GroupElement>, Rejection> {
    let mut y = BTreeSet::new();
    for (rep, ks) in lines(x) {
        let (lo, hi) = (*ks.first().unwrap(), *ks.last().unwrap());
        if hi - lo < 2 {
            return Err(Rejection::ShortInterval { coset: rep.to_string(), left: lo, right: hi });
        }
        let q = divide_line(&ks).ok_or_else(|| Rejection::NotDecomposable { coset: rep.to_string() })?;
        y.extend(q.into_iter().map(|k| rep.mul_s1_power(k)));
    }
    Ok(y)
}

/// Decides `x ∈ V_{F_l,I}` by repeated subtraction of `g·w_t` blocks.
pub fn is_in_v(x: &GF2Vector, index_set: &IndexSetSpec) -> Result<Membership> {
    let mut rest = x.clone();
    let mut certificate = Vec::new();
    let mut guard = x.support().len() + 1;
    loop {
        if rest.is_zero() {
            return Ok(Membership::Member { certificate });
        }
        if guard == 0 {
            return Err(Error::Internal("reduction failed to shrink the support".into()));
        }
        guard -= 1;
        let y = match quotient(&rest) {
            Ok(y) => y,
            Err(rejection) => return Ok(Membership::NotMember { rejection, steps_taken: certificate.len() }),
        };
        // least point of supp y; it sits one step right of a left interval end
        let g = y.iter().next().expect("nonzero x has nonzero quotient").clone();
        let g_inv = g.inverse();
        let height = g.s2_height();
        let mut partner = None;
        for q in y.iter().skip(1) {
            if q.s2_height() == height && lambda_membership(&g_inv.times(q), index_set)? {
                partner = Some(q.clone());
                break;
            }
        }
        let Some(q) = partner else {
            return Ok(Membership::NotMember { rejection: Rejection::NoPartner { point: g.to_string() }, steps_taken: certificate.len() });
        };
        let step = CertificateStep { t: g_inv.times(&q), g };
        rest.add_assign(&step.block());
        certificate.push(step);
    }
}

/// Independent decision by class parity of the quotient support.
pub fn is_in_v_by_parity(x: &GF2Vector, index_set: &IndexSetSpec) -> Result<bool> {
    let Ok(y) = quotient(x) else { return Ok(false) };
    let pts: Vec<GroupElement> = y.into_iter().collect();
    let mut class_of: Vec<usize> = (0..pts.len()).collect();
    let mut by_height: HashMap<i64, Vec<usize>> = HashMap::new();
    for (i, p) in pts.iter().enumerate() {
        by_height.entry(p.s2_height()).or_default().push(i);
    }
    for bucket in by_height.values() {
        for (a, &i) in bucket.iter().enumerate() {
            if class_of[i] != i {
                continue;
            }
            let inv = pts[i].inverse();
            for &j in &bucket[a + 1..] {
                if class_of[j] == j && lambda_membership(&inv.times(&pts[j]), index_set)? {
                    class_of[j] = i;
                }
            }
        }
    }
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for c in class_of {
        *counts.entry(c).or_default() += 1;
    }
    Ok(counts.values().all(|n| n % 2 == 0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationFamily {
    TauSquared,
    Commutator,
    Lambda,
    WreathRelator,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub family: RelationFamily,
    pub word: String,
    /// `Z₂[Γ]`-content of the relator (zero for commutators and group relators).
    pub delta_content: GF2Vector,
}

/// Letters of the canonical word, `e` for the identity.
pub fn word_string(g: &GroupElement) -> String {
    let w = g.word();
    if w.is_empty() {
        return "e".into();
    }
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < w.len() {
        let mut j = i;
        while j < w.len() && w[j] == w[i] {
            j += 1;
        }
        let (base, sign) = match w[i] {
            Gen::S1 => ("s1", 1),
            Gen::S1Inv => ("s1", -1),
            Gen::S2 => ("s2", 1),
            Gen::S2Inv => ("s2", -1),
        };
        let e = sign * (j - i) as i64;
        parts.push(if e == 1 { base.to_string() } else { format!("{base}^{e}") });
        i = j;
    }
    parts.join(" ")
}

/// `δ_g = g⁻¹τg`, written `τ^(g)`.
fn delta_word(g: &GroupElement) -> String {
    if g.is_identity() {
        "τ".into()
    } else {
        format!("τ^({})", word_string(g))
    }
}

/// Deterministic prefix of the relation stream, in stages `r = 0, 1, 2, …`:
/// stage `r` lists `τ²` (only at `r = 0`), the products `Π_{x∈F_l} δ_{gx}δ_{gt_nx}`
/// with `n ∈ I` and `max(n, |g|) = r`, for `Z≀Z` the relators `[s₂^{±r}s₁s₂^{∓r}, s₁]`,
/// and then the commutators `[δ_g, δ_h]` with `g < h` and `|h| = r`.
pub fn enumerate_relations(index_set: &IndexSetSpec, group: GroupId, count: usize) -> Result<Vec<Relation>> {
    let mut out = Vec::with_capacity(count);
    let mut by_len: Vec<Vec<GroupElement>> = Vec::new();
    let mut r = 0u32;
    while out.len() < count {
        let shell: Vec<GroupElement> = {
            let inner: BTreeSet<GroupElement> = if r == 0 { BTreeSet::new() } else { ball(r - 1, group)?.into_iter().collect() };
            ball(r, group)?.into_iter().filter(|g| !inner.contains(g)).collect()
        };
        by_len.push(shell);
        let push = |out: &mut Vec<Relation>, rel: Relation| {
            if out.len() < count {
                out.push(rel);
            }
        };
        if r == 0 {
            push(&mut out, Relation { family: RelationFamily::TauSquared, word: "τ τ".into(), delta_content: GF2Vector::zero() });
        }
        let up_to: Vec<&GroupElement> = by_len.iter().flatten().collect();
        // Λ relators with max(n, |g|) = r
        for n in index_set.elements_up_to(r as u64)? {
            let t = crate::group::t_generator(n, group);
            let gs: Vec<&GroupElement> = if n == r as u64 { up_to.clone() } else { by_len[r as usize].iter().collect() };
            for g in gs {
                let mut letters = Vec::new();
                let mut content = GF2Vector::zero();
                for x in f_l(group) {
                    let a = g.times(&x);
                    let b = g.times(&t).times(&x);
                    letters.push(delta_word(&a));
                    letters.push(delta_word(&b));
                    content.toggle(a);
                    content.toggle(b);
                }
                push(&mut out, Relation { family: RelationFamily::Lambda, word: letters.join(" "), delta_content: content });
            }
        }
        if group == GroupId::WreathZZ && r >= 1 {
            for n in [r as i64, -(r as i64)] {
                let conj = word_string(&GroupElement::s2_power(group, n).mul_s1_power(1).mul_s2_power(-n));
                let word = format!("[{conj}, s1]");
                push(&mut out, Relation { family: RelationFamily::WreathRelator, word, delta_content: GF2Vector::zero() });
            }
        }
        // commutators with the longer element of length exactly r
        for h in &by_len[r as usize] {
            for g in &up_to {
                if *g < h {
                    push(
                        &mut out,
                        Relation {
                            family: RelationFamily::Commutator,
                            word: format!("[{}, {}]", delta_word(g), delta_word(h)),
                            delta_content: GF2Vector::zero(),
                        },
                    );
                }
            }
            if out.len() >= count {
                break;
            }
        }
        r += 1;
        if r > crate::group::max_ball_radius() {
            return Err(Error::Resource("relation stream exceeded the ball radius cap".into()));
        }
    }
    Ok(out)
}
