//! Property tests for the algebraic invariants: ring axioms, parse/format
//! round trips, weight bookkeeping, string normal forms and restriction
//! compatibilities on randomized inputs.

use std::collections::BTreeMap;

use proptest::prelude::*;

use qsc::cartan::EpsilonSeq;
use qsc::lweights::parse::parse_monomial;
use qsc::lweights::{a_inverse, height_from, weight, Monomial, Sign, Spec, VarKey};
use qsc::rank1::{
    sl2_decompose, sl2_decompose_seeded, sl2_general_position, u01_certify, u01_normal_form,
    u01_recompose, Lattice,
};
use qsc::restriction::{beta, tau, Interval, YtTauConvention};
use qsc::ring::{fraction_eq, FractionSL, LaurentZ, SignedLaurent};

/// Inverse identity and determinant cross-check over the whole M+N <= 8
/// range (the acceptance gate pins seven pairs; the invariant covers all).
#[test]
fn cartan_inverse_sweep_up_to_8() {
    for m in 1..=7usize {
        for n in 1..=7usize {
            if m == n || m + n > 8 {
                continue;
            }
            let d = qsc::cartan::det_specialized(m, n).unwrap();
            assert!(d.matches_cofactor, "({m},{n})");
            assert!(!d.value.is_zero_divisor(), "({m},{n})");
            assert!(qsc::cartan::verify_inverse(m, n).unwrap(), "({m},{n})");
        }
    }
}

/// 1000 distinct D-free canonical monomials have pairwise distinct images
/// under tau at a single node away from M.
#[test]
fn tau_singleton_injectivity_smoke() {
    let eps = EpsilonSeq::standard(3, 2).unwrap();
    let mut rng = 0x12345u64;
    let mut next = move || {
        rng = rng
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        rng >> 33
    };
    let mut monos = std::collections::BTreeSet::new();
    while monos.len() < 1000 {
        let mut m = Monomial::one();
        for _ in 0..1 + next() % 4 {
            let node = 1 + (next() % 4) as usize;
            let a = Spec {
                orbit: 0,
                sign: if next() % 2 == 0 {
                    Sign::Plus
                } else {
                    Sign::Minus
                },
                exp: (next() % 9) as i64 - 4,
            };
            let e = (next() % 5) as i64 - 2;
            let key = if node <= 3 {
                VarKey::Y(node, a)
            } else {
                VarKey::Yt(node, a)
            };
            m.mul_var(&eps, key, e).unwrap();
        }
        if !m.is_one() && m.exp_of(&VarKey::D) == 0 {
            monos.insert(m);
        }
    }
    for j in [1usize, 2, 4] {
        let mut images = std::collections::BTreeSet::new();
        for m in &monos {
            let t = tau(
                &eps,
                Interval::singleton(j),
                m,
                YtTauConvention::EpsilonBased,
            )
            .unwrap();
            assert!(
                images.insert(t),
                "collision at node {j} for {}",
                m.format_canonical()
            );
        }
    }
}

/// Internal coherence certificate for engine outputs beyond fundamentals:
/// for every node, the tau-grouping of the computed character must split
/// into genuine rank-1 characters. (This is the defining property of a
/// q-character with respect to every rank-1 restriction.)
#[test]
fn engine_outputs_are_rank1_coherent() {
    use qsc::fm::{self, Limits};
    use qsc::restriction::{group_by_z, is_sl2_character_sum, is_u01_character_sum, tau_qchar};
    let cases = [
        (3usize, 2usize, "Y[2,q^0] Y[2,q^-2]"),
        (3, 2, "Y[1,q^0] Y[2,q^1]"),
        (2, 3, "Y[2,q^0] Yt[3,q^1]"),
        (2, 1, "Y[1,q^0]^2"),
        (2, 1, "Y[2,q^0] Y[2,q^-2] Y[2,q^-4]"),
        (1, 3, "Yt[2,q^0] Yt[3,q^1]"),
        (4, 1, "Y[2,q^0]"),
        (1, 4, "Yt[3,q^0]"),
    ];
    for (m, n, hw_text) in cases {
        let eps = EpsilonSeq::standard(m, n).unwrap();
        let hw = parse_monomial(&eps, hw_text).unwrap();
        let r = fm::run(&eps, &hw, Limits::default()).unwrap();
        if !r.is_success() {
            continue;
        }
        for (mono, _) in r.qchar.terms() {
            assert!(
                qsc::lweights::cone_height(&eps, &hw, mono).is_some(),
                "({m},{n}) {hw_text}: {} outside the cone",
                mono.format_canonical()
            );
        }
        for j in 1..=eps.nodes() {
            let image = tau_qchar(
                &eps,
                Interval::singleton(j),
                &r.qchar,
                YtTauConvention::EpsilonBased,
            )
            .unwrap();
            for (inner, _) in group_by_z(&image) {
                let ok = if j == eps.m() {
                    is_u01_character_sum(&inner)
                } else {
                    let lattice = if j < eps.m() {
                        Lattice::Q2
                    } else {
                        Lattice::Qt2
                    };
                    is_sl2_character_sum(&inner, lattice)
                };
                assert!(
                    ok,
                    "({m},{n}) {hw_text}: node {j} grouping is not rank-1 coherent"
                );
            }
        }
    }
}

/// Spectral parameters in distinct orbits never interact: the character of
/// a product of highest weights supported on different orbits is the
/// product of the individual characters.
#[test]
fn orbits_factorize() {
    use qsc::fm::{self, Limits};
    for (m, n, a_text, b_text) in [
        (2usize, 1usize, "Y[1,q^0]", "Y[1,o1:q^0]"),
        (3, 2, "Y[1,q^0]", "Y[2,o1:q^5]"),
        (2, 3, "Yt[3,q^0]", "Y[1,o2:-q^1]"),
    ] {
        let eps = EpsilonSeq::standard(m, n).unwrap();
        let ha = parse_monomial(&eps, a_text).unwrap();
        let hb = parse_monomial(&eps, b_text).unwrap();
        let ra = fm::run(&eps, &ha, Limits::default()).unwrap();
        let rb = fm::run(&eps, &hb, Limits::default()).unwrap();
        let rab = fm::run(&eps, &ha.mul(&hb), Limits::default()).unwrap();
        assert!(ra.is_success() && rb.is_success() && rab.is_success());
        assert_eq!(
            rab.qchar,
            ra.qchar.mul(&rb.qchar),
            "({m},{n}) {a_text} x {b_text}"
        );
    }
}

/// The commutative square holds over intervals, not just singletons:
/// tau_J(m A^{-1}_{j,a}) = tau_J(m) beta_J(A^{-1}_{j,a}) whenever j in J.
#[test]
fn commutative_square_over_intervals() {
    let eps = EpsilonSeq::standard(3, 2).unwrap();
    let m = parse_monomial(&eps, "Y[1,q^2] Y[3,q^0]^-1 Yt[4,q^1] D^-1").unwrap();
    for lo in 1..=eps.nodes() {
        for hi in lo..=eps.nodes() {
            let j = Interval { lo, hi };
            for node in lo..=hi {
                for k in [-2i64, 0, 3] {
                    let a = Spec::q_pow(k);
                    let ai = a_inverse(&eps, node, a).unwrap();
                    let lhs = tau(&eps, j, &m.mul(&ai), YtTauConvention::EpsilonBased).unwrap();
                    let rhs = tau(&eps, j, &m, YtTauConvention::EpsilonBased)
                        .unwrap()
                        .mul_inner(&beta(&eps, j, &ai).unwrap());
                    assert_eq!(lhs, rhs, "J={lo}..{hi}, node {node}, a=q^{k}");
                }
            }
        }
    }
}

/// Grothendieck-ring bound: the character of the simple quotient of a
/// tensor square is dominated coefficient-wise by the square of the
/// character, with the same highest term. Exercises multiplicities > 1.
#[test]
fn tensor_square_domination() {
    use qsc::fm::{self, Limits};
    for (m, n) in [(2usize, 1usize), (1, 2), (3, 2), (2, 3), (3, 1)] {
        let eps = EpsilonSeq::standard(m, n).unwrap();
        let hw = parse_monomial(&eps, "Y[1,q^0]").unwrap();
        let single = fm::run(&eps, &hw, Limits::default()).unwrap();
        assert!(single.is_success());
        let square_of_char = single.qchar.mul(&single.qchar);
        let hw2 = hw.mul(&hw);
        let double = fm::run(&eps, &hw2, Limits::default()).unwrap();
        if !double.is_success() {
            continue; // no claim when the expansion fails
        }
        assert_eq!(double.qchar.mult_of(&hw2), 1);
        for (mono, c) in double.qchar.terms() {
            assert!(
                *c <= square_of_char.mult_of(mono),
                "({m},{n}): coefficient of {} exceeds the tensor square",
                mono.format_canonical()
            );
        }
    }
}

/// The DOT rendering of a failed run highlights the failing monomial.
#[test]
fn dot_marks_failure() {
    use qsc::fm::{self, to_dot, Limits};
    let eps = EpsilonSeq::standard(2, 1).unwrap();
    let hw = parse_monomial(&eps, "Y[1,q^0] Yt[2,-q^1]").unwrap();
    let r = fm::run(&eps, &hw, Limits::default()).unwrap();
    let dot = to_dot(&eps, &r);
    assert_eq!(dot.matches("color=red").count(), 1);
    // A one-vertex graph renders with no arrows.
    let d = parse_monomial(&eps, "D").unwrap();
    let r = fm::run(&eps, &d, Limits::default()).unwrap();
    let dot = to_dot(&eps, &r);
    assert_eq!(dot.matches(" -> ").count(), 0);
}

/// The five-term natural-representation character splits under tau at node 1
/// into groups of sizes 2+1+1+1, the first being a full sl2 ladder.
#[test]
fn tau_grouping_split_pattern() {
    use qsc::restriction::{group_by_z, is_sl2_character_sum, tau_qchar};
    let eps = EpsilonSeq::standard(3, 2).unwrap();
    let hw = parse_monomial(&eps, "Y[1,q^0]").unwrap();
    let chi = qsc::fm::run(&eps, &hw, qsc::fm::Limits::default())
        .unwrap()
        .qchar;
    let image = tau_qchar(
        &eps,
        Interval::singleton(1),
        &chi,
        YtTauConvention::EpsilonBased,
    )
    .unwrap();
    let groups = group_by_z(&image);
    let mut sizes: Vec<u64> = groups.iter().map(|(g, _)| g.dimension()).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    assert_eq!(sizes, vec![2, 1, 1, 1]);
    for (inner, _) in &groups {
        assert!(is_sl2_character_sum(inner, Lattice::Q2));
    }
    // At node M the groups are (01)-characters (1 + D^{-1} or singleton).
    let image = tau_qchar(
        &eps,
        Interval::singleton(3),
        &chi,
        YtTauConvention::EpsilonBased,
    )
    .unwrap();
    let groups = group_by_z(&image);
    for (inner, _) in &groups {
        assert!(qsc::restriction::is_u01_character_sum(inner));
        assert!(inner.dimension() <= 2);
    }
}

fn laurent_strategy() -> impl Strategy<Value = LaurentZ> {
    prop::collection::vec((-6i64..=6, -9i64..=9), 0..6).prop_map(|terms| {
        let mut p = LaurentZ::zero();
        for (e, c) in terms {
            p = p.add(&LaurentZ::monomial(e, c));
        }
        p
    })
}

fn signed_laurent_strategy() -> impl Strategy<Value = SignedLaurent> {
    (laurent_strategy(), laurent_strategy()).prop_map(|(even, odd)| SignedLaurent { even, odd })
}

fn spec_strategy() -> impl Strategy<Value = Spec> {
    (0u32..2, prop::bool::ANY, -8i64..=8).prop_map(|(orbit, neg, exp)| Spec {
        orbit,
        sign: if neg { Sign::Minus } else { Sign::Plus },
        exp,
    })
}

fn eps_strategy() -> impl Strategy<Value = EpsilonSeq> {
    (1usize..=4, 1usize..=4)
        .prop_filter("M != N", |(m, n)| m != n)
        .prop_map(|(m, n)| EpsilonSeq::standard(m, n).unwrap())
}

fn monomial_strategy() -> impl Strategy<Value = (EpsilonSeq, Monomial)> {
    (
        eps_strategy(),
        prop::collection::vec((0usize..8, spec_strategy(), -3i64..=3), 0..6),
    )
        .prop_map(|(eps, raw)| {
            let mut m = Monomial::one();
            for (slot, a, e) in raw {
                let nodes = eps.nodes();
                // slot picks a variable kind/node deterministically within range
                let key = match slot % 3 {
                    0 => VarKey::Y(1 + slot % eps.m().max(1), a),
                    1 => {
                        let lo = eps.m().max(1);
                        VarKey::Yt(lo + slot % (nodes - lo + 1), a)
                    }
                    _ => VarKey::D,
                };
                let key = match key {
                    VarKey::Y(i, a) => VarKey::Y(i.min(eps.m()), a),
                    VarKey::Yt(j, a) => VarKey::Yt(j.min(nodes).max(eps.m()), a),
                    VarKey::D => VarKey::D,
                };
                m.mul_var(&eps, key, e).unwrap();
            }
            (eps, m)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn signed_laurent_ring_axioms(
        a in signed_laurent_strategy(),
        b in signed_laurent_strategy(),
        c in signed_laurent_strategy(),
    ) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.mul(&c)), a.mul(&b).mul(&c));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&SignedLaurent::one()), a.clone());
        prop_assert_eq!(a.sub(&a), SignedLaurent::zero());
        // σ² = 1 through the product rule
        let s = SignedLaurent::sigma();
        prop_assert_eq!(a.mul(&s).mul(&s), a);
    }

    #[test]
    fn fraction_arithmetic_consistent(
        a in signed_laurent_strategy(),
        b in signed_laurent_strategy(),
        d in signed_laurent_strategy(),
    ) {
        prop_assume!(!d.is_zero());
        let fa = FractionSL::new(a.clone(), d.clone()).unwrap();
        let fb = FractionSL::new(b.clone(), d.clone()).unwrap();
        // a/d + b/d = (a+b)/d
        let sum = fa.add(&fb);
        let want = FractionSL::new(a.add(&b), d.clone()).unwrap();
        prop_assert!(fraction_eq(&sum, &want));
        // (a/d)(b/d) = ab/d²
        let prod = fa.mul(&fb);
        let want = FractionSL::new(a.mul(&b), d.mul(&d)).unwrap();
        prop_assert!(fraction_eq(&prod, &want));
    }

    #[test]
    fn monomial_parse_format_roundtrip((eps, m) in monomial_strategy()) {
        let text = m.format_canonical();
        let back = parse_monomial(&eps, &text).unwrap();
        prop_assert_eq!(&back, &m, "canonical {}", text);
        let paper = m.format_paper(&eps);
        let back = parse_monomial(&eps, &paper).unwrap();
        prop_assert_eq!(&back, &m, "paper {}", paper);
    }

    #[test]
    fn monomial_group_laws((eps, m) in monomial_strategy(), (_e2, _m2) in monomial_strategy()) {
        let _ = eps;
        prop_assert!(m.mul(&m.inv()).is_one());
        prop_assert_eq!(m.pow(3), m.mul(&m).mul(&m));
    }

    #[test]
    fn weight_is_multiplicative((eps, m) in monomial_strategy(), raw in prop::collection::vec((1usize..5, spec_strategy()), 0..4)) {
        let mut m2 = Monomial::one();
        for (node, a) in raw {
            let node = 1 + (node - 1) % eps.nodes();
            m2 = m2.mul(&a_inverse(&eps, node, a).unwrap());
        }
        let w1 = weight(&eps, &m);
        let w2 = weight(&eps, &m2);
        let w12 = weight(&eps, &m.mul(&m2));
        let sum: Vec<i64> = w1.0.iter().zip(&w2.0).map(|(x, y)| x + y).collect();
        prop_assert_eq!(w12.0, sum);
    }

    #[test]
    fn height_counts_a_inverse_factors(
        (eps, hw) in monomial_strategy(),
        raw in prop::collection::vec((1usize..5, spec_strategy()), 0..6),
    ) {
        let mut m = hw.clone();
        let mut counts = vec![0i64; eps.nodes()];
        for (node, a) in raw {
            let node = 1 + (node - 1) % eps.nodes();
            m = m.mul(&a_inverse(&eps, node, a).unwrap());
            counts[node - 1] += 1;
        }
        prop_assert_eq!(height_from(&eps, &hw, &m), Some(counts));
    }

    #[test]
    fn sl2_normal_form_properties(
        raw in prop::collection::vec((spec_strategy(), 1i64..=3), 0..5),
        lattice in prop::sample::select(vec![Lattice::Q2, Lattice::Qt2]),
        seed in 1u64..500,
    ) {
        let mut exps: BTreeMap<Spec, i64> = BTreeMap::new();
        for (a, e) in raw {
            *exps.entry(a).or_insert(0) += e;
        }
        let strings = sl2_decompose(&exps, lattice).unwrap();
        // pairwise general position
        for i in 0..strings.len() {
            for j in i + 1..strings.len() {
                prop_assert!(sl2_general_position(&strings[i], &strings[j]));
            }
        }
        // the strings multiply back to the input
        let mut back: BTreeMap<Spec, i64> = BTreeMap::new();
        for s in &strings {
            for a in s.elements() {
                *back.entry(a).or_insert(0) += 1;
            }
        }
        back.retain(|_, e| *e != 0);
        let mut want = exps.clone();
        want.retain(|_, e| *e != 0);
        prop_assert_eq!(back, want);
        // merge order does not matter
        let shuffled = sl2_decompose_seeded(&exps, lattice, Some(seed)).unwrap();
        prop_assert_eq!(shuffled, strings);
    }

    #[test]
    fn u01_normal_form_roundtrip(
        d in -4i64..=4,
        raw in prop::collection::vec((spec_strategy(), -3i64..=3), 0..5),
    ) {
        let mut y: BTreeMap<Spec, i64> = BTreeMap::new();
        for (a, e) in raw {
            if e != 0 {
                y.insert(a, e);
            }
        }
        let nf = u01_normal_form(d, &y);
        prop_assert_eq!(u01_recompose(&nf), (d, y));
        prop_assert!(u01_certify(&nf));
    }

    #[test]
    fn tau_specializes_to_beta((eps, m) in monomial_strategy(), lo in 1usize..5, hi in 1usize..5) {
        let nodes = eps.nodes();
        let lo = 1 + (lo - 1) % nodes;
        let hi = lo + (hi - 1) % (nodes - lo + 1);
        let j = Interval { lo, hi };
        let t = tau(&eps, j, &m, YtTauConvention::EpsilonBased).unwrap();
        prop_assert_eq!(t.inner, beta(&eps, j, &m).unwrap());
    }

    #[test]
    fn tau_injective_on_d_free_singletons(
        (eps, m1) in monomial_strategy(),
        raw in prop::collection::vec((0usize..6, spec_strategy(), -2i64..=2), 0..5),
        jpick in 1usize..5,
    ) {
        // Strip D to get canonical D-free monomials; tau at a single node
        // j != M must separate them (the kernel is generated by D).
        let strip_d = |m: &Monomial| {
            let mut out = Monomial::one();
            for (k, e) in m.exps() {
                if !matches!(k, VarKey::D) {
                    out.mul_var(&eps, *k, *e).unwrap();
                }
            }
            out
        };
        let mut m2 = Monomial::one();
        for (slot, a, e) in raw {
            let key = if slot % 2 == 0 {
                VarKey::Y(1 + slot % eps.m(), a)
            } else if eps.nodes() > eps.m() {
                VarKey::Yt(eps.m() + 1 + slot % (eps.nodes() - eps.m()), a)
            } else {
                VarKey::Y(1 + slot % eps.m(), a)
            };
            m2.mul_var(&eps, key, e).unwrap();
        }
        let a = strip_d(&m1);
        let b = strip_d(&m2);
        prop_assume!(a != b);
        let mut j = 1 + (jpick - 1) % eps.nodes();
        if j == eps.m() {
            j = if j > 1 { j - 1 } else { j + 1 };
        }
        prop_assume!(j >= 1 && j <= eps.nodes());
        let interval = Interval::singleton(j);
        let ta = tau(&eps, interval, &a, YtTauConvention::EpsilonBased).unwrap();
        let tb = tau(&eps, interval, &b, YtTauConvention::EpsilonBased).unwrap();
        prop_assert_ne!(ta, tb, "tau identified {} and {}", a.format_canonical(), b.format_canonical());
    }
}
