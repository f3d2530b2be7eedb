//! Local pattern classifiers on Cayley-graph windows, the weight functions
//! `F_s`, `G_s`, the two-walker configuration classifier and windowed
//! matrices of the hook operator.
//!
//! Conventions. A character `χ` is stored as a [`Pattern`] on a finite
//! window. "`χ` viewed from `c`" means `c⁻¹χ`, whose value at `y` is
//! `χ(c·y)`; in particular `s⁻¹χ` around `e` is `χ` around the neighbour `s`.
//! Every lookup outside the window is a [`Error::Window`], never a zero.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::dyadic::rational;
use crate::error::{Error, Result};
use crate::group::{neighborhood, parse_element, Gen, GroupElement, GroupId};

/// A `Z₂`-valued function on a finite window `E ⊂ Γ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    group: GroupId,
    values: BTreeMap<GroupElement, bool>,
}

impl Pattern {
    pub fn new(group: GroupId) -> Self {
        Pattern { group, values: BTreeMap::new() }
    }

    /// Pattern on `window` equal to 1 exactly on `ones`; every one must lie in the window.
    pub fn from_support<'a>(
        group: GroupId,
        window: impl IntoIterator<Item = &'a GroupElement>,
        ones: impl IntoIterator<Item = &'a GroupElement>,
    ) -> Result<Self> {
        let mut values: BTreeMap<GroupElement, bool> = window.into_iter().map(|g| (g.clone(), false)).collect();
        for g in ones {
            match values.get_mut(g) {
                Some(v) => *v = true,
                None => return Err(Error::Window(format!("support point {g} outside window"))),
            }
        }
        Ok(Pattern { group, values })
    }

    pub fn group(&self) -> GroupId {
        self.group
    }

    pub fn set(&mut self, g: GroupElement, v: bool) {
        self.values.insert(g, v);
    }

    pub fn get(&self, g: &GroupElement) -> Result<bool> {
        self.values.get(g).copied().ok_or_else(|| Error::Window(format!("{g} outside pattern window")))
    }

    pub fn contains_point(&self, g: &GroupElement) -> bool {
        self.values.contains_key(g)
    }

    pub fn covers<'a>(&self, points: impl IntoIterator<Item = &'a GroupElement>) -> bool {
        points.into_iter().all(|g| self.values.contains_key(g))
    }

    pub fn window(&self) -> impl Iterator<Item = &GroupElement> {
        self.values.keys()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn ones(&self) -> impl Iterator<Item = &GroupElement> {
        self.values.iter().filter(|(_, &v)| v).map(|(g, _)| g)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, bool)> {
        self.values.iter().map(|(g, &v)| (g, v))
    }

    pub fn restrict<'a>(&self, points: impl IntoIterator<Item = &'a GroupElement>) -> Result<Pattern> {
        let mut out = Pattern::new(self.group);
        for g in points {
            out.values.insert(g.clone(), self.get(g)?);
        }
        Ok(out)
    }

    /// The left translate `g·χ`, with `(g·χ)(x) = χ(g⁻¹x)`.
    pub fn translate(&self, g: &GroupElement) -> Pattern {
        Pattern { group: self.group, values: self.values.iter().map(|(x, &v)| (g.times(x), v)).collect() }
    }

    /// Sum of `χ` over a finite set, mod 2.
    pub fn parity<'a>(&self, points: impl IntoIterator<Item = &'a GroupElement>) -> Result<bool> {
        let mut acc = false;
        for g in points {
            acc ^= self.get(g)?;
        }
        Ok(acc)
    }
}

#[derive(Serialize, Deserialize)]
struct PatternRepr {
    group: GroupId,
    window: Vec<String>,
    values: Vec<(String, u8)>,
}

impl Serialize for Pattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PatternRepr {
            group: self.group,
            window: self.values.keys().map(|g| g.to_string()).collect(),
            values: self.values.iter().map(|(g, &v)| (g.to_string(), v as u8)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Pattern {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = PatternRepr::deserialize(d)?;
        let mut p = Pattern::new(r.group);
        for w in &r.window {
            p.set(parse_element(r.group, w).map_err(D::Error::custom)?, false);
        }
        for (g, bit) in &r.values {
            let g = parse_element(r.group, g).map_err(D::Error::custom)?;
            if !p.contains_point(&g) {
                return Err(D::Error::custom(format!("value for {g} outside window")));
            }
            p.set(g, *bit != 0);
        }
        Ok(p)
    }
}

/// Local class of `χ` around a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LocalClass {
    NotOneGood,
    OneGoodNotLocallyGood,
    GoodEnd,
    InteriorGood,
}

impl LocalClass {
    pub const ALL: [LocalClass; 4] =
        [LocalClass::InteriorGood, LocalClass::GoodEnd, LocalClass::OneGoodNotLocallyGood, LocalClass::NotOneGood];

    /// Weight a neighbour of this class receives from an interior-good point.
    pub fn weight(self) -> BigRational {
        match self {
            LocalClass::InteriorGood => rational(1, 1),
            LocalClass::GoodEnd => rational(2, 1),
            LocalClass::OneGoodNotLocallyGood => rational(1, 2),
            LocalClass::NotOneGood => BigRational::zero(),
        }
    }

    pub fn is_one_good(self) -> bool {
        self != LocalClass::NotOneGood
    }
}

/// The four possible shapes of `χ⁻¹(1) ∩ B(e,1)` for a hook through `e`
/// (besides `e` itself), as occupied generator directions.
const ONE_GOOD_TEMPLATES: [&[Gen]; 4] = [
    &[Gen::S2, Gen::S2Inv],    // vertical interior
    &[Gen::S1, Gen::S2Inv],    // top of the left leg
    &[Gen::S1Inv, Gen::S2Inv], // top of the right leg
    &[Gen::S2],                // lower endpoint
];

/// Occupied directions around `c` if `c⁻¹χ` is 1-good.
pub fn one_good_directions(chi: &Pattern, c: &GroupElement) -> Result<Option<Vec<Gen>>> {
    if !chi.get(c)? {
        // B(c,1) must still be inside the window
        for y in c.neighbors() {
            chi.get(&y)?;
        }
        return Ok(None);
    }
    let mut occupied = Vec::new();
    for s in Gen::ALL {
        if chi.get(&c.mul_gen(s))? {
            occupied.push(s);
        }
    }
    Ok(ONE_GOOD_TEMPLATES.contains(&occupied.as_slice()).then_some(occupied))
}

fn classify_unchecked(chi: &Pattern, c: &GroupElement) -> Result<LocalClass> {
    let Some(dirs) = one_good_directions(chi, c)? else {
        return Ok(LocalClass::NotOneGood);
    };
    for &s in &dirs {
        if one_good_directions(chi, &c.mul_gen(s))?.is_none() {
            return Ok(LocalClass::OneGoodNotLocallyGood);
        }
    }
    Ok(if dirs.len() == 2 { LocalClass::InteriorGood } else { LocalClass::GoodEnd })
}

/// Classifies `c⁻¹χ`. The window must contain `B(c, 2)`.
pub fn classify_local(chi: &Pattern, center: &GroupElement) -> Result<LocalClass> {
    let need = neighborhood([center], 2);
    if let Some(missing) = need.iter().find(|g| !chi.contains_point(g)) {
        return Err(Error::Window(format!("B({center},2) not in window: missing {missing}")));
    }
    classify_unchecked(chi, center)
}

/// Memoizing classifier for repeated queries on one pattern.
pub struct Classifier<'a> {
    chi: &'a Pattern,
    cache: HashMap<GroupElement, LocalClass>,
}

impl<'a> Classifier<'a> {
    pub fn new(chi: &'a Pattern) -> Self {
        Classifier { chi, cache: HashMap::new() }
    }

    pub fn class(&mut self, c: &GroupElement) -> Result<LocalClass> {
        if let Some(&k) = self.cache.get(c) {
            return Ok(k);
        }
        let k = classify_unchecked(self.chi, c)?;
        self.cache.insert(c.clone(), k);
        Ok(k)
    }

    /// `F_s(c⁻¹χ)`: nonzero only if `c` is interior good.
    pub fn f_at(&mut self, c: &GroupElement, s: Gen) -> Result<BigRational> {
        if self.class(c)? != LocalClass::InteriorGood {
            return Ok(BigRational::zero());
        }
        Ok(self.class(&c.mul_gen(s))?.weight())
    }

    /// `G_s(c⁻¹χ) = F_s(c⁻¹χ) + F_{s⁻¹}((cs)⁻¹χ)`.
    pub fn g_at(&mut self, c: &GroupElement, s: Gen) -> Result<BigRational> {
        let a = self.f_at(c, s)?;
        let b = self.f_at(&c.mul_gen(s), s.inverse())?;
        Ok(a + b)
    }
}

fn require(chi: &Pattern, need: &BTreeSet<GroupElement>, what: &str) -> Result<()> {
    match need.iter().find(|g| !chi.contains_point(g)) {
        Some(m) => Err(Error::Window(format!("{what}: window misses {m}"))),
        None => Ok(()),
    }
}

/// `F_s(χ)` at the origin. The window must contain `B(e,2) ∪ s·B(e,2)`.
pub fn f_s(chi: &Pattern, s: Gen) -> Result<BigRational> {
    let e = GroupElement::identity(chi.group());
    let mut need = neighborhood([&e], 2);
    need.extend(neighborhood([&e.mul_gen(s)], 2));
    require(chi, &need, "F_s")?;
    Classifier::new(chi).f_at(&e, s)
}

/// `G_s(χ)` at the origin. The window must contain `B(e,3)`.
pub fn g_s(chi: &Pattern, s: Gen) -> Result<BigRational> {
    let e = GroupElement::identity(chi.group());
    require(chi, &neighborhood([&e], 3), "G_s")?;
    Classifier::new(chi).g_at(&e, s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum HookShape {
    Hook,
    VerticalSegment,
}

/// A hook `{gs₂⁻ⁿ, …, g, gs₁, gs₁s₂⁻¹, …, gs₁s₂⁻ᵐ}` or a vertical segment
/// `{gs₂⁻ⁿ, …, g}` (base `g` is the top point, `right` is 0).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hook {
    pub base: GroupElement,
    pub left: u32,
    pub right: u32,
    pub shape: HookShape,
}

impl Hook {
    pub fn new(base: GroupElement, left: u32, right: u32) -> Self {
        Hook { base, left, right, shape: HookShape::Hook }
    }

    pub fn vertical(top: GroupElement, length: u32) -> Self {
        Hook { base: top, left: length, right: 0, shape: HookShape::VerticalSegment }
    }

    /// Vertices in path order: left endpoint, up to the base, across, down the right leg.
    pub fn vertices(&self) -> Vec<GroupElement> {
        let mut out: Vec<GroupElement> = (0..=self.left as i64).rev().map(|k| self.base.mul_s2_power(-k)).collect();
        if self.shape == HookShape::Hook {
            let g1 = self.base.mul_gen(Gen::S1);
            out.extend((0..=self.right as i64).map(|k| g1.mul_s2_power(-k)));
        }
        out
    }

    /// Number of edges.
    pub fn path_length(&self) -> usize {
        self.vertices().len() - 1
    }

    /// Translate `g·R`.
    pub fn translate(&self, g: &GroupElement) -> Hook {
        Hook { base: g.times(&self.base), ..self.clone() }
    }

    /// Pattern on `B(R, radius)` equal to 1 exactly on the hook.
    pub fn indicator(&self, radius: u32) -> Pattern {
        let verts = self.vertices();
        let window = neighborhood(verts.iter(), radius);
        Pattern::from_support(self.base.group(), window.iter(), verts.iter()).expect("hook inside its neighbourhood")
    }

    /// Recovers the hook from an ordered path of vertices.
    pub fn from_path(path: &[GroupElement]) -> Result<Hook> {
        let Some(first) = path.first() else {
            return Err(Error::Usage("empty path".into()));
        };
        let group = first.group();
        let step = |a: &GroupElement, b: &GroupElement| {
            let d = a.inverse().times(b);
            Gen::ALL.into_iter().find(|&s| d == GroupElement::generator(group, s))
        };
        let mut steps = Vec::new();
        for w in path.windows(2) {
            steps.push(step(&w[0], &w[1]).ok_or_else(|| Error::Usage(format!("{} and {} are not adjacent", w[0], w[1])))?);
        }
        let hook = match steps.iter().position(|s| s.is_horizontal()) {
            Some(i) => {
                let (g, left_side, right_side) = if steps[i] == Gen::S1 {
                    (path[i].clone(), i, path.len() - i - 2)
                } else {
                    (path[i + 1].clone(), path.len() - i - 2, i)
                };
                Hook::new(g, left_side as u32, right_side as u32)
            }
            None => {
                let ascending = steps.first().is_none_or(|&s| s == Gen::S2);
                let top = if ascending { path.last() } else { path.first() }.unwrap().clone();
                Hook::vertical(top, (path.len() - 1) as u32)
            }
        };
        let want: BTreeSet<_> = path.iter().cloned().collect();
        let got: BTreeSet<_> = hook.vertices().into_iter().collect();
        if want != got || want.len() != path.len() {
            return Err(Error::Usage("path is neither a hook nor a vertical segment".into()));
        }
        Ok(hook)
    }
}

impl fmt::Display for Hook {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.shape {
            HookShape::Hook => write!(f, "hook(base {}, legs {}, {})", self.base, self.left, self.right),
            HookShape::VerticalSegment => write!(f, "vertical(top {}, length {})", self.base, self.left),
        }
    }
}

/// Ending scenario of a walker.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Fate {
    /// Reached a good neighbourhood, a lower endpoint (scenario 1).
    Good,
    /// Reached a bad neighbourhood (scenario 2).
    Bad,
    /// Left the window before deciding.
    Exhausted,
}

impl Fate {
    pub fn index(self) -> Option<u8> {
        match self {
            Fate::Good => Some(1),
            Fate::Bad => Some(2),
            Fate::Exhausted => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkerOutcome {
    pub fate: Fate,
    /// `R'`: every visited point, starting at the start point.
    pub visited: Vec<GroupElement>,
    /// `P'`: `R'` for fate 1, `R'` minus the bad stopping point for fate 2.
    pub path: Vec<GroupElement>,
}

/// Follows the path through `start`, first stepping along `direction` (or
/// staying put if `None`), until a lower endpoint, a non-1-good point, or the
/// window edge.
pub fn walker_fate(chi: &Pattern, start: &GroupElement, direction: Option<Gen>) -> Result<WalkerOutcome> {
    let mut visited = vec![start.clone()];
    let mut prev: Option<GroupElement> = None;
    let mut cur = start.clone();
    if let Some(d) = direction {
        prev = Some(cur.clone());
        cur = cur.mul_gen(d);
        visited.push(cur.clone());
    }
    let exhausted = |visited: Vec<GroupElement>| {
        let path = visited.clone();
        Ok(WalkerOutcome { fate: Fate::Exhausted, visited, path })
    };
    for _ in 0..=chi.len() {
        if !chi.contains_point(&cur) || !chi.covers(cur.neighbors().iter()) {
            return exhausted(visited);
        }
        match one_good_directions(chi, &cur)? {
            None => {
                let mut path = visited.clone();
                path.pop();
                return Ok(WalkerOutcome { fate: Fate::Bad, visited, path });
            }
            Some(dirs) if dirs.len() == 1 => {
                let path = visited.clone();
                return Ok(WalkerOutcome { fate: Fate::Good, visited, path });
            }
            Some(dirs) => {
                let next = dirs.iter().map(|&s| cur.mul_gen(s)).find(|y| Some(y) != prev.as_ref()).expect("two occupied directions");
                prev = Some(std::mem::replace(&mut cur, next.clone()));
                visited.push(next);
            }
        }
    }
    exhausted(visited)
}

/// Cell of the Borel partition a pattern falls into.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConfigClass {
    C0,
    /// `C_{(P,R,ψ)}` inside `C_{i,j}`, `i ≤ j`.
    Cij {
        i: u8,
        j: u8,
        p: Hook,
        r: Hook,
        psi: Pattern,
    },
    /// At least one walker ran out of window (candidate for `C_{i,∞}`).
    Unresolved {
        fates: (Fate, Fate),
    },
}

/// Sorts `χ` (around `e`) into `C₀`, some `C_{(P,R,ψ)}`, or an unresolved cell.
pub fn classify_configuration(chi: &Pattern) -> Result<ConfigClass> {
    let e = GroupElement::identity(chi.group());
    require(chi, &neighborhood([&e], 2), "classify_configuration")?;
    let Some(dirs) = one_good_directions(chi, &e)? else {
        return Ok(ConfigClass::C0);
    };
    let mut cls = Classifier::new(chi);
    let mut all_zero = true;
    for s in Gen::ALL {
        if !cls.g_at(&e, s)?.is_zero() {
            all_zero = false;
            break;
        }
    }
    if all_zero {
        return Ok(ConfigClass::C0);
    }
    let a = walker_fate(chi, &e, Some(dirs[0]))?;
    let b = walker_fate(chi, &e, dirs.get(1).copied())?;
    let (Some(fa), Some(fb)) = (a.fate.index(), b.fate.index()) else {
        return Ok(ConfigClass::Unresolved { fates: (a.fate.min(b.fate), a.fate.max(b.fate)) });
    };
    let join = |x: &[GroupElement], y: &[GroupElement]| -> Vec<GroupElement> {
        let mut out: Vec<GroupElement> = y.iter().rev().cloned().collect();
        out.extend(x.iter().skip(1).cloned());
        out
    };
    let r_path = join(&a.visited, &b.visited);
    let p_path = join(&a.path, &b.path);
    let r = Hook::from_path(&r_path)?;
    let p = Hook::from_path(&p_path)?;
    let psi = chi.restrict(neighborhood(r_path.iter(), 1).iter())?;
    Ok(ConfigClass::Cij { i: fa.min(fb), j: fa.max(fb), p, r, psi })
}

/// Sparse symmetric matrix over a finite ordered set of points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowedMatrix {
    pub points: Vec<GroupElement>,
    pub entries: BTreeMap<(usize, usize), BigRational>,
}

impl WindowedMatrix {
    pub fn get(&self, i: usize, j: usize) -> BigRational {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.points.binary_search(g).ok()
    }

    pub fn entry(&self, a: &GroupElement, b: &GroupElement) -> Option<BigRational> {
        Some(self.get(self.index_of(a)?, self.index_of(b)?))
    }

    pub fn is_symmetric(&self) -> bool {
        self.entries.iter().all(|(&(i, j), v)| self.get(j, i) == *v)
    }

    /// Dense submatrix in the given point order.
    pub fn submatrix(&self, order: &[GroupElement]) -> Result<Vec<Vec<BigRational>>> {
        let idx: Vec<usize> = order
            .iter()
            .map(|g| self.index_of(g).ok_or_else(|| Error::Usage(format!("{g} not in matrix domain"))))
            .collect::<Result<_>>()?;
        Ok(idx.iter().map(|&i| idx.iter().map(|&j| self.get(i, j)).collect()).collect())
    }
}

/// The hook operator on the fibre over `χ`, restricted to `domain`:
/// entry `(y·s, y)` is `G_s` evaluated at `y⁻¹χ`. The window must contain `B(domain, 3)`
/// wherever the classification is needed.
pub fn windowed_operator<'a>(chi: &Pattern, domain: impl IntoIterator<Item = &'a GroupElement>) -> Result<WindowedMatrix> {
    let mut points: Vec<GroupElement> = domain.into_iter().cloned().collect();
    points.sort();
    points.dedup();
    let mut cls = Classifier::new(chi);
    let mut entries = BTreeMap::new();
    for (j, y) in points.iter().enumerate() {
        for s in Gen::ALL {
            let x = y.mul_gen(s);
            if let Ok(i) = points.binary_search(&x) {
                let v = cls.g_at(y, s)?;
                if !v.is_zero() {
                    entries.insert((i, j), v);
                }
            }
        }
    }
    Ok(WindowedMatrix { points, entries })
}
