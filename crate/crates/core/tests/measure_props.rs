use l2lab::group::neighborhood;
use l2lab::local_rules::Hook;
use l2lab::measure::{
    brute_count_extendable, brute_count_extendable_with, count_extendable, extend_pattern, hook_measure, omega_classes, sample_character,
    total_extendable_mass, violates_relations, RelationSystem,
};
use l2lab::verify::{counting_suite, VerifyOptions};
use l2lab::{ExactDyadic, GroupElement, GroupId, IndexSetSpec};
use num_rational::BigRational;
use num_traits::One;

const GROUPS: [GroupId; 2] = [GroupId::Free2, GroupId::WreathZZ];

#[test]
fn cylinder_measures_sum_to_one() {
    for group in GROUPS {
        let e = GroupElement::identity(group);
        let t2 = l2lab::group::t_generator(2, group);
        let mut window: Vec<GroupElement> = (-2..=2).map(|a| e.mul_s1_power(a)).collect();
        window.extend((-2..=2).map(|a| t2.mul_s1_power(a)));
        let sys = RelationSystem::new(group, IndexSetSpec::explicit(vec![2]), window);
        assert!(omega_classes(&sys).unwrap().k() > 0);
        assert_eq!(total_extendable_mass(&sys).unwrap(), BigRational::one());
    }
}

#[test]
fn counting_law_over_seeds() {
    for seed in 0..3 {
        let opts = VerifyOptions { seed, windows: 60, ..VerifyOptions::default() };
        let rep = counting_suite(&opts).unwrap();
        assert!(rep.passed(), "{rep}");
    }
}

#[test]
fn larger_enlargement_does_not_change_certified_counts() {
    for group in GROUPS {
        let sys = RelationSystem::for_hook(&Hook::new(GroupElement::identity(group), 1, 2), IndexSetSpec::explicit(vec![1, 2]));
        let one = brute_count_extendable(&sys).unwrap();
        assert_eq!(brute_count_extendable_with(&sys, 2).unwrap(), one);
        assert_eq!(count_extendable(&sys).unwrap(), ExactDyadic::from_integer(one));
    }
}

#[test]
fn sampled_patterns_extend() {
    for group in GROUPS {
        let hook = Hook::new(GroupElement::identity(group), 2, 2);
        let sys = RelationSystem::for_hook(&hook, IndexSetSpec::explicit(vec![1, 2]));
        let target = neighborhood(hook.vertices().iter(), 2);
        for seed in 0..10 {
            let psi = sample_character(&sys, seed).unwrap();
            let chi = extend_pattern(&psi, &sys, &target).unwrap();
            assert_eq!(chi.restrict(sys.window.iter()).unwrap(), psi);
            let big = sys.with_window(chi.window().cloned());
            assert!(!violates_relations(&chi, &big).unwrap());
        }
    }
}

#[test]
fn hook_measure_boost_counts_small_indices() {
    let set = IndexSetSpec::explicit(vec![1, 2, 5]);
    assert_eq!(hook_measure(3, 4, &set).unwrap(), ExactDyadic::pow2(-3 * 7 - 8 + 2));
    assert_eq!(hook_measure(5, 6, &set).unwrap(), ExactDyadic::pow2(-3 * 11 - 8 + 3));
    assert_eq!(hook_measure(1, 9, &IndexSetSpec::empty()).unwrap(), ExactDyadic::pow2(-38));
}
