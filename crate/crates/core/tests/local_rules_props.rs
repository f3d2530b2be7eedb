use std::collections::BTreeSet;

use l2lab::dyadic::rational;
use l2lab::finite_models::build_model;
use l2lab::group::{neighborhood, Gen};
use l2lab::local_rules::{classify_configuration, windowed_operator, Classifier, ConfigClass, Hook, Pattern};
use l2lab::{GroupElement, GroupId};
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GROUPS: [GroupId; 2] = [GroupId::Free2, GroupId::WreathZZ];

/// Hook indicator with one extra occupied point beside the right leg's lower end.
fn hook_with_bad_end(group: GroupId, n: u32, m: u32) -> (Hook, Pattern, GroupElement) {
    let hook = Hook::new(GroupElement::identity(group), n, m);
    let mut chi = hook.indicator(5);
    let bottom = hook.vertices().last().unwrap().clone();
    let extra = bottom.mul_gen(Gen::S1);
    chi.set(extra, true);
    (hook, chi, bottom)
}

fn noisy_hook(group: GroupId, rng: &mut ChaCha8Rng) -> Pattern {
    let hook = Hook::new(GroupElement::identity(group), rng.gen_range(1..=3), rng.gen_range(1..=3));
    let verts = hook.vertices();
    let mut chi = hook.indicator(4);
    let pool: Vec<GroupElement> = neighborhood(verts.iter(), 1).into_iter().collect();
    for _ in 0..rng.gen_range(0..=2) {
        let g = pool.choose(rng).unwrap().clone();
        let v = chi.get(&g).unwrap();
        chi.set(g, !v);
    }
    chi
}

#[test]
fn g_s_moves_only_along_the_path() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for trial in 0..200 {
        let group = GROUPS[trial % 2];
        let chi = noisy_hook(group, &mut rng);
        let points: Vec<GroupElement> = neighborhood(chi.ones().collect::<Vec<_>>(), 1).into_iter().collect();
        let mut cls = Classifier::new(&chi);
        for c in &points {
            for s in Gen::ALL {
                let inner = neighborhood([c, &c.mul_gen(s)], 2);
                if !chi.covers(inner.iter()) {
                    continue;
                }
                if !cls.g_at(c, s).unwrap().is_zero() {
                    assert!(chi.get(c).unwrap() && chi.get(&c.mul_gen(s)).unwrap(), "{c} via {s}");
                }
            }
        }
    }
}

#[test]
fn windowed_operator_is_symmetric_and_vanishes_on_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for trial in 0..40 {
        let group = GROUPS[trial % 2];
        let chi = noisy_hook(group, &mut rng);
        let domain = neighborhood(chi.ones().collect::<Vec<_>>(), 1);
        let op = windowed_operator(&chi, domain.iter()).unwrap();
        assert!(op.is_symmetric());
    }
    for group in GROUPS {
        let e = GroupElement::identity(group);
        let window = neighborhood([&e], 4);
        let zero = Pattern::from_support(group, window.iter(), std::iter::empty()).unwrap();
        let op = windowed_operator(&zero, neighborhood([&e], 1).iter()).unwrap();
        assert!(op.entries.is_empty());
    }
}

/// The translates `g⁻¹χ` that land in a hook cell with `e` on the path are exactly `g ∈ P`.
fn translating_elements(chi: &Pattern, around: &BTreeSet<GroupElement>) -> BTreeSet<GroupElement> {
    let mut out = BTreeSet::new();
    for g in around {
        if let ConfigClass::Cij { p, .. } = classify_configuration(&chi.translate(&g.inverse())).unwrap() {
            let e = GroupElement::identity(g.group());
            assert!(p.vertices().contains(&e));
            out.insert(g.clone());
        }
    }
    out
}

#[test]
fn translation_class_is_the_path() {
    for group in GROUPS {
        for n in 1..=4u32 {
            for m in 1..=(8 - n).min(4) {
                let hook = Hook::new(GroupElement::identity(group), n, m);
                let chi = hook.indicator(5);
                let verts: BTreeSet<GroupElement> = hook.vertices().into_iter().collect();
                let around = neighborhood(verts.iter(), 1);
                assert_eq!(translating_elements(&chi, &around), verts, "C11 ({n},{m}) {group}");

                let (_, chi, bottom) = hook_with_bad_end(group, n, m);
                let mut p = verts.clone();
                p.remove(&bottom);
                assert_eq!(translating_elements(&chi, &around), p, "C12 ({n},{m}) {group}");
            }
        }
    }
}

#[test]
fn bad_end_gives_half_weight_boundary() {
    for group in GROUPS {
        let (hook, chi, bottom) = hook_with_bad_end(group, 2, 3);
        let start = hook.vertices()[0].clone();
        match classify_configuration(&chi.translate(&start.inverse())).unwrap() {
            ConfigClass::Cij { i: 1, j: 2, .. } => {}
            other => panic!("{other:?}"),
        }
        // P in path order from the bad end: the bottom of the right leg is dropped
        let mut p: Vec<GroupElement> = hook.vertices().into_iter().filter(|v| *v != bottom).collect();
        p.reverse();
        let op = windowed_operator(&chi, neighborhood(p.iter(), 1).iter()).unwrap();
        let block = op.submatrix(&p).unwrap();
        let model = build_model(p.len() - 1, 1, 2).unwrap();
        assert_eq!(block, model.shifted_matrix(&rational(0, 1)));
        assert_eq!(op.entry(&bottom, &p[0]), Some(rational(0, 1)));
    }
}
