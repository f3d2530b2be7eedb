use l2lab::group::{ball, lambda_membership, t_generator, LambdaElement};
use l2lab::word_problem::{
    generator_w, is_in_v, is_in_v_by_parity, support_intervals, verify_certificate, GF2Vector, Membership, Rejection,
};
use l2lab::{GroupElement, GroupId, IndexSetSpec};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GROUPS: [GroupId; 2] = [GroupId::Free2, GroupId::WreathZZ];

fn set() -> IndexSetSpec {
    IndexSetSpec::explicit(vec![2, 5])
}

fn random_lambda(group: GroupId, rng: &mut ChaCha8Rng) -> GroupElement {
    let len = rng.gen_range(1..=3);
    let factors: Vec<(u64, i64)> = (0..len).map(|_| (*[2u64, 5].choose(rng).unwrap(), *[-1i64, 1].choose(rng).unwrap())).collect();
    LambdaElement::new(factors).evaluate(group)
}

fn random_non_lambda(group: GroupId, rng: &mut ChaCha8Rng) -> GroupElement {
    let n = *[1u64, 3, 4].choose(rng).unwrap();
    t_generator(n, group)
}

/// Sum of `k` translated blocks `g·w_t`, each `t` drawn by `pick`.
fn block_sum(group: GroupId, k: usize, rng: &mut ChaCha8Rng, mut pick: impl FnMut(&mut ChaCha8Rng) -> GroupElement) -> GF2Vector {
    let anchors: Vec<GroupElement> = ball(2, group).unwrap();
    let mut x = GF2Vector::zero();
    for _ in 0..k {
        let g = anchors.choose(rng).unwrap();
        x.add_assign(&generator_w(&pick(rng)).translate(g));
    }
    x
}

#[test]
fn lambda_block_sums_are_members_with_valid_certificates() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..300 {
        let group = GROUPS[trial % 2];
        let x = block_sum(group, rng.gen_range(1..=4), &mut rng, |r| random_lambda(group, r));
        match is_in_v(&x, &set()).unwrap() {
            Membership::Member { certificate } => {
                assert!(verify_certificate(&x, &certificate, &set()).unwrap());
                for step in &certificate {
                    assert!(lambda_membership(&step.t, &set()).unwrap());
                }
            }
            Membership::NotMember { rejection, .. } => panic!("{x} rejected: {rejection:?}"),
        }
        assert!(is_in_v_by_parity(&x, &set()).unwrap());
    }
}

#[test]
fn members_have_wide_support_intervals() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for trial in 0..200 {
        let group = GROUPS[trial % 2];
        let x = block_sum(group, rng.gen_range(1..=4), &mut rng, |r| random_lambda(group, r));
        for iv in support_intervals(&x) {
            assert!(iv.width() >= 2, "{iv:?}");
        }
    }
}

#[test]
fn single_point_perturbation_leaves_the_space() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let points: Vec<GroupElement> = ball(3, GroupId::Free2).unwrap();
    for trial in 0..200 {
        let group = GROUPS[trial % 2];
        let mut x = block_sum(group, rng.gen_range(0..=3), &mut rng, |r| random_lambda(group, r));
        let h = points.choose(&mut rng).unwrap();
        let h = if group == GroupId::WreathZZ { h.to_wreath() } else { h.clone() };
        x.toggle(h);
        assert!(!is_in_v(&x, &set()).unwrap().is_member(), "{x}");
        assert!(!is_in_v_by_parity(&x, &set()).unwrap());
    }
}

#[test]
fn reduction_agrees_with_parity_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut rejected = 0;
    for trial in 0..400 {
        let group = GROUPS[trial % 2];
        let x = block_sum(group, rng.gen_range(1..=4), &mut rng, |r| {
            if r.gen_bool(0.3) {
                random_non_lambda(group, r)
            } else {
                random_lambda(group, r)
            }
        });
        let verdict = is_in_v(&x, &set()).unwrap();
        assert_eq!(verdict.is_member(), is_in_v_by_parity(&x, &set()).unwrap(), "{x}");
        if !verdict.is_member() {
            rejected += 1;
        }
    }
    assert!(rejected > 20, "only {rejected} rejections");
}

#[test]
fn lone_non_lambda_block_has_no_partner() {
    for group in GROUPS {
        let x = generator_w(&t_generator(3, group));
        match is_in_v(&x, &set()).unwrap() {
            Membership::NotMember { rejection: Rejection::NoPartner { .. }, steps_taken: 0 } => {}
            other => panic!("{other:?}"),
        }
        let e = GroupElement::identity(group);
        let short = GF2Vector::from_points([e.clone(), e.mul_s1_power(1)]);
        assert!(matches!(is_in_v(&short, &set()).unwrap(), Membership::NotMember { rejection: Rejection::ShortInterval { .. }, .. }));
        let gap = GF2Vector::from_points([e.mul_s1_power(-1), e.mul_s1_power(1)]);
        assert!(matches!(is_in_v(&gap, &set()).unwrap(), Membership::NotMember { rejection: Rejection::NotDecomposable { .. }, .. }));
    }
}
