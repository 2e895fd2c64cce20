//! Acceptance suite: one test per criterion, each printing a PASS line
//! with the measured quantities. Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use coxstar::elements::{
    coset_decompose, enumerate_fc, enumerate_group_elements, is_reduced_fc, is_weakly_complex,
    normal_shape_case, tits_is_reduced, FcElement, NormalShapeCase, Side, TitsVerdict,
};
use coxstar::graph::{counterexample_word, Bond, CoxeterGraph, FamilySpec};
use coxstar::hinv::h_value;
use coxstar::laurent::LaurentInt;
use coxstar::star::{audit_graph, is_commuting_product, star_down, star_reduce_path, star_up};
use coxstar::tl::{Basis, TlContext};
use coxstar::trace::Word;

const CAP: usize = 500_000;

fn family(name: &str) -> CoxeterGraph {
    FamilySpec::parse(name).unwrap().graph().unwrap()
}

fn fc(g: &CoxeterGraph, w: &[usize]) -> FcElement {
    FcElement::from_word(g, w).unwrap()
}

#[test]
fn ac01_dihedral_star_maps() {
    // B2 with s = 0, t = 1, w = ts
    let g = family("B2");
    let w = fc(&g, &[1, 0]);
    let pair = (0, 1);
    assert_eq!(
        star_down(&g, &w, pair, Side::Left).unwrap().unwrap().word(),
        vec![0]
    );
    assert_eq!(
        star_up(&g, &w, pair, Side::Left).unwrap().unwrap().word(),
        vec![0, 1, 0]
    );
    assert_eq!(
        star_down(&g, &w, pair, Side::Right).unwrap().unwrap().word(),
        vec![1]
    );
    assert_eq!(
        star_up(&g, &w, pair, Side::Right).unwrap().unwrap().word(),
        vec![1, 0, 1]
    );
    let sts = fc(&g, &[0, 1, 0]);
    assert!(star_up(&g, &sts, pair, Side::Left).unwrap().is_none());
    assert!(star_up(&g, &sts, pair, Side::Right).unwrap().is_none());
    let t = fc(&g, &[1]);
    assert!(star_down(&g, &t, pair, Side::Left).unwrap().is_none());
    assert!(star_down(&g, &t, pair, Side::Right).unwrap().is_none());
    println!("AC1 PASS: dihedral star maps match the worked example exactly");
}

#[test]
fn ac02_monomial_reduction_across_commuting_letter() {
    // rank 3, m(s1, s2) = 4, m(s2, s3) = 3
    let g = family("B3");
    assert_eq!(g.bond(0, 1), Some(Bond::Finite(4)));
    assert_eq!(g.bond(1, 2), Some(Bond::Finite(3)));
    let ctx = TlContext::new(g.clone());
    let y = fc(&g, &[0, 1, 0, 2]);
    // s3 y > y
    assert!(!y.left_descents().contains(&2));
    let mut word = vec![2];
    word.extend(y.word());
    assert_eq!(tits_is_reduced(&g, &word, CAP), TitsVerdict::Reduced);
    let reduced = ctx.reduce_b_monomial(&word);
    let expect = ctx
        .b_of(&fc(&g, &[0, 2]))
        .scale(&LaurentInt::delta());
    assert_eq!(reduced, expect);
    println!("AC2 PASS: b(s3) b(s1 s2 s1 s3) = delta b(s1 s3) with s3 y > y");
}

#[test]
fn ac03_dihedral_relations() {
    // alternating m-letter monomials in I2(m), m = 3, 4, 5, 6
    let alt = |len: usize| -> Word { (0..len).map(|k| k % 2).collect() };
    for (m, expect_fn) in [
        (3u32, 0usize),
        (4, 1),
        (5, 2),
        (6, 3),
    ] {
        let g = FamilySpec::I2(Bond::Finite(m)).graph().unwrap();
        let ctx = TlContext::new(g.clone());
        let reduced = ctx.reduce_b_monomial(&alt(m as usize));
        let expect = match expect_fn {
            0 => ctx.b_of(&fc(&g, &alt(1))),
            1 => ctx.b_of(&fc(&g, &alt(2))).scale(&LaurentInt::from_int(2)),
            2 => ctx
                .b_of(&fc(&g, &alt(3)))
                .scale(&LaurentInt::from_int(3))
                .sub(&ctx.b_of(&fc(&g, &alt(1))))
                .unwrap(),
            _ => ctx
                .b_of(&fc(&g, &alt(4)))
                .scale(&LaurentInt::from_int(4))
                .sub(&ctx.b_of(&fc(&g, &alt(2))).scale(&LaurentInt::from_int(3)))
                .unwrap(),
        };
        assert_eq!(reduced, expect, "relation for m = {m}");
    }
    println!("AC3 PASS: dihedral reductions for m = 3, 4, 5, 6 are exact");
}

#[test]
fn ac04_enumeration_oracle() {
    for (name, group_order, fc_count) in [("B2", 8usize, 7usize), ("A3", 24, 14)] {
        let g = family(name);
        let (group, exhaustive) = enumerate_group_elements(&g, 30, CAP).unwrap();
        assert!(exhaustive, "{name} group enumeration must close");
        assert_eq!(group.len(), group_order, "{name} group order");
        let filtered = group.iter().filter(|w| is_reduced_fc(&g, w)).count();
        assert_eq!(filtered, fc_count, "{name} filtered count");
        let (els, exhaustive) = enumerate_fc(&g, 30);
        assert!(exhaustive);
        assert_eq!(els.len(), fc_count, "{name} direct enumeration");
    }
    println!("AC4 PASS: |W_c(B2)| = 7 of 8, |W_c(A3)| = 14 of 24, cross-checked");
}

#[test]
fn ac05_classification_consistency() {
    let families = [
        "A4", "B3", "D4", "E6", "F4", "H3", "I2(5)", "Atilde4", "Ctilde3", "Ftilde5",
        "K3(3,4,5)",
    ];
    for name in families {
        let g = family(name);
        assert!(
            coxstar::graph::classify_star_reducible(&g).star_reducible,
            "{name} must classify star reducible"
        );
        let report = audit_graph(&g, 12);
        assert!(
            report.witnesses.is_empty(),
            "{name}: no irreducible witnesses up to length 12"
        );
    }

    let f3 = |edges: &[(usize, usize, u32)]| {
        edges
            .iter()
            .map(|&(i, j, m)| (i, j, Bond::Finite(m)))
            .collect::<Vec<_>>()
    };
    let excluded: Vec<(&str, CoxeterGraph)> = vec![
        (
            "branch with far label 4",
            CoxeterGraph::from_edges(4, &f3(&[(0, 2, 3), (1, 2, 3), (2, 3, 4)])).unwrap(),
        ),
        (
            "odd 5-cycle with a label 4",
            CoxeterGraph::from_edges(
                5,
                &f3(&[(0, 1, 3), (1, 2, 3), (2, 3, 3), (3, 4, 3), (0, 4, 4)]),
            )
            .unwrap(),
        ),
        (
            "path with a label 6",
            CoxeterGraph::from_edges(3, &f3(&[(0, 1, 3), (1, 2, 6)])).unwrap(),
        ),
        (
            "path with an interior label 5",
            CoxeterGraph::from_edges(4, &f3(&[(0, 1, 3), (1, 2, 5), (2, 3, 3)])).unwrap(),
        ),
        (
            "extremal 5 plus another label above 3",
            CoxeterGraph::from_edges(3, &f3(&[(0, 1, 5), (1, 2, 4)])).unwrap(),
        ),
        (
            "non-extremal 4 plus a second 4",
            CoxeterGraph::from_edges(4, &f3(&[(0, 1, 3), (1, 2, 4), (2, 3, 4)])).unwrap(),
        ),
        (
            "two extremal 4s with an even count of edges between",
            CoxeterGraph::from_edges(5, &f3(&[(0, 1, 4), (1, 2, 3), (2, 3, 3), (3, 4, 4)]))
                .unwrap(),
        ),
        (
            "seven-node path with the middle label 4",
            CoxeterGraph::from_edges(
                7,
                &f3(&[
                    (0, 1, 3),
                    (1, 2, 3),
                    (2, 3, 4),
                    (3, 4, 3),
                    (4, 5, 3),
                    (5, 6, 3),
                ]),
            )
            .unwrap(),
        ),
    ];
    assert_eq!(excluded.len(), 8);
    for (label, g) in &excluded {
        assert!(
            !coxstar::graph::classify_star_reducible(g).star_reducible,
            "{label}: must be rejected"
        );
        let word = counterexample_word(g)
            .unwrap()
            .unwrap_or_else(|| panic!("{label}: registry word expected"));
        assert!(is_reduced_fc(g, &word), "{label}: witness is reduced FC");
        let w = fc(g, &word);
        assert!(
            star_reduce_path(g, &w).is_none(),
            "{label}: witness is not star reducible"
        );
        assert!(
            !is_commuting_product(&w),
            "{label}: witness is not a commuting product"
        );
    }
    println!(
        "AC5 PASS: 11 families audit clean at length 12; 8 excluded shapes carry verified witnesses"
    );
}

#[test]
fn ac06_canonical_basis_defining_property() {
    let mut checked = 0usize;
    for name in ["B3", "H3", "Ctilde3", "Ftilde5"] {
        let g = family(name);
        let ctx = TlContext::new(g.clone());
        let (els, _) = enumerate_fc(&g, 8);
        for w in &els {
            // bar invariance and the v^-1 A^- congruence are verified
            // inside the construction; failure is a hard error
            let c = ctx.c_of(w).unwrap();
            for (_, coeff) in c.terms() {
                assert!(
                    coeff.as_int().is_some(),
                    "{name}: monomial coordinates of the canonical basis are integers"
                );
            }
            checked += 1;
        }
    }
    let g = family("B2");
    let ctx = TlContext::new(g.clone());
    let csts = ctx.c_of(&fc(&g, &[0, 1, 0])).unwrap();
    let expect = ctx
        .b_of(&fc(&g, &[0, 1, 0]))
        .sub(&ctx.b_of(&fc(&g, &[0])))
        .unwrap();
    assert_eq!(csts, expect);
    println!("AC6 PASS: canonical basis verified for {checked} elements across four graphs");
}

#[test]
fn ac07_positivity() {
    let mut total_pairs = 0usize;
    for name in ["B2", "I2(5)", "A3", "B3"] {
        let g = family(name);
        let ctx = TlContext::new(g);
        let report = ctx.positivity_report(20, 2).unwrap();
        assert!(report.exhaustive, "{name}: table must be exhaustive");
        assert!(
            report.violations.is_empty(),
            "{name}: positivity violations: {:?}",
            report.violations
        );
        total_pairs += report.pairs;
    }
    println!("AC7 PASS: {total_pairs} structure-constant pairs, all n * delta^k with n > 0 and k constant per pair");
}

#[test]
fn ac08_projection_and_property_w() {
    let mut lattice_count = 0usize;
    let mut weak_count = 0usize;
    for name in ["Ctilde3", "Ftilde5"] {
        let g = family(name);
        let ctx = TlContext::new(g.clone());
        let (group, _) = enumerate_group_elements(&g, 8, CAP).unwrap();
        for w in &group {
            let theta = ctx.theta_ttilde_of_word(w, CAP).unwrap();
            assert!(
                ctx.in_lattice(&theta).unwrap(),
                "{name}: theta of {w:?} must lie in the lattice"
            );
            lattice_count += 1;
            if is_weakly_complex(&g, w, CAP).unwrap() {
                assert!(
                    ctx.in_vinv_lattice(&theta).unwrap(),
                    "{name}: weakly complex {w:?} must project to zero"
                );
                weak_count += 1;
            }
        }
    }
    println!(
        "AC8 PASS: theta images of {lattice_count} elements lie in L; {weak_count} weakly complex ones in v^-1 L"
    );
}

#[test]
fn ac09_normal_shape_coverage() {
    let mut counts = [0usize; 4];
    for name in ["Ctilde3", "Etilde6"] {
        let g = family(name);
        let (group, _) = enumerate_group_elements(&g, 8, CAP).unwrap();
        for w in &group {
            let (case, witness) = normal_shape_case(&g, w, CAP)
                .unwrap_or_else(|e| panic!("{name}: {w:?} unassigned: {e}"));
            assert_eq!(witness.len(), w.len(), "witness has the same length");
            assert_eq!(
                tits_is_reduced(&g, &witness, CAP),
                TitsVerdict::Reduced,
                "witness is reduced"
            );
            match case {
                NormalShapeCase::CommutingProduct => {
                    for a in 0..witness.len() {
                        for b in a + 1..witness.len() {
                            assert!(!g.noncommuting(witness[a], witness[b]));
                        }
                    }
                    counts[0] += 1;
                }
                NormalShapeCase::BeginsPair(s, t) => {
                    assert_eq!((witness[0], witness[1]), (s, t));
                    assert!(g.noncommuting(s, t));
                    counts[1] += 1;
                }
                NormalShapeCase::EndsPair(t, s) => {
                    let n = witness.len();
                    assert_eq!((witness[n - 2], witness[n - 1]), (t, s));
                    assert!(g.noncommuting(t, s));
                    counts[2] += 1;
                }
                NormalShapeCase::BeginsTriple(s, u, t) => {
                    assert_eq!((witness[0], witness[1], witness[2]), (s, u, t));
                    assert!(!g.noncommuting(s, u) && s != u);
                    assert!(g.noncommuting(s, t));
                    assert!(g.noncommuting(u, t));
                    counts[3] += 1;
                }
            }
        }
    }
    println!(
        "AC9 PASS: all reduced words assigned; case counts (i)-(iv): {counts:?}"
    );
}

#[test]
fn ac10_h_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for name in ["Ftilde5", "Ctilde3"] {
        let g = family(name);
        let ctx = TlContext::new(g.clone());
        let pairs = g.noncommuting_pairs();
        for _ in 0..200 {
            let len = rng.gen_range(0..=12);
            let word: Word = (0..len).map(|_| rng.gen_range(0..g.rank())).collect();
            let h0 = h_value(&g, &word, 0).unwrap().h;
            for seed in 1..20 {
                assert_eq!(
                    h_value(&g, &word, seed).unwrap().h,
                    h0,
                    "{name}: strategy dependence on {word:?}"
                );
            }

            // h(st u) = h(t u) and h(u t s) = h(u t) for noncommuting s, t
            let (s, t) = pairs[rng.gen_range(0..pairs.len())];
            let mut st_u = vec![s, t];
            st_u.extend(&word);
            let mut t_u = vec![t];
            t_u.extend(&word);
            assert_eq!(
                h_value(&g, &st_u, 3).unwrap().h,
                h_value(&g, &t_u, 5).unwrap().h,
                "{name}: left prefix identity on {word:?}"
            );
            let mut u_ts = word.clone();
            u_ts.extend([t, s]);
            let mut u_t = word.clone();
            u_t.push(t);
            assert_eq!(
                h_value(&g, &u_ts, 3).unwrap().h,
                h_value(&g, &u_t, 5).unwrap().h,
                "{name}: right suffix identity on {word:?}"
            );

            // h(ss u) = h(s u) + 1
            let s2 = rng.gen_range(0..g.rank());
            let mut ss_u = vec![s2, s2];
            ss_u.extend(&word);
            let mut s_u = vec![s2];
            s_u.extend(&word);
            assert_eq!(
                h_value(&g, &ss_u, 9).unwrap().h,
                h_value(&g, &s_u, 11).unwrap().h + 1,
                "{name}: square identity on {word:?}"
            );

            // deletion bound
            if !word.is_empty() {
                let cut = rng.gen_range(0..word.len());
                let mut deleted = word.clone();
                deleted.remove(cut);
                let a = h_value(&g, &word, 13).unwrap().h as i64;
                let b = h_value(&g, &deleted, 17).unwrap().h as i64;
                assert!((a - b).abs() <= 1, "{name}: deletion bound on {word:?}");
            }

            // grading: monomial coordinates divisible by delta^h
            let reduced = ctx.reduce_b_monomial(&word);
            for (_, coeff) in reduced.terms() {
                assert!(
                    coeff.divisible_by_delta_pow(h0 as u32),
                    "{name}: coefficient {coeff} of {word:?} not divisible by delta^{h0}"
                );
            }
        }
    }
    println!("AC10 PASS: 400 random words, 20 seeds each, identities and grading hold");
}

#[test]
fn ac11_eigenspace_and_lattice_properties() {
    for name in ["B3", "Ctilde3"] {
        let g = family(name);
        let ctx = TlContext::new(g.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(1729);
        let (pool, _) = enumerate_fc(&g, 5);
        let pairs = g.noncommuting_pairs();

        let random_laurent = |rng: &mut ChaCha8Rng, lo: i64, hi: i64| -> LaurentInt {
            let mut x = LaurentInt::zero();
            for _ in 0..rng.gen_range(1..=3) {
                let e = rng.gen_range(lo..=hi);
                let c = rng.gen_range(-5i64..=5);
                x.add_assign(&LaurentInt::monomial(c, e));
            }
            x
        };
        let random_element = |rng: &mut ChaCha8Rng, basis: Basis, lo: i64, hi: i64| {
            let k = rng.gen_range(1..=4);
            let mut terms = Vec::new();
            for _ in 0..k {
                let w = pool[rng.gen_range(0..pool.len())].clone();
                terms.push((w, random_laurent(rng, lo, hi)));
            }
            ctx.element(basis, terms)
        };

        for round in 0..500 {
            let s = rng.gen_range(0..g.rank());
            let bs = ctx.b_of(&fc(&g, &[s]));

            // eigenspace: b_s x = delta x iff the monomial support consists
            // of elements with s as a left descent
            let x = if round % 2 == 0 {
                let descent_pool: Vec<&FcElement> = pool
                    .iter()
                    .filter(|w| w.left_descents().contains(&s))
                    .collect();
                let k = rng.gen_range(1..=3);
                let terms = (0..k)
                    .map(|_| {
                        (
                            descent_pool[rng.gen_range(0..descent_pool.len())].clone(),
                            random_laurent(&mut rng, -3, 3),
                        )
                    })
                    .collect();
                ctx.element(Basis::B, terms)
            } else {
                random_element(&mut rng, Basis::B, -3, 3)
            };
            if !x.is_zero() {
                let in_span = x.terms().all(|(w, _)| w.left_descents().contains(&s));
                let product = ctx.multiply(&bs, &x).unwrap();
                let scaled = x.scale(&LaurentInt::delta());
                assert_eq!(
                    product == scaled,
                    in_span,
                    "{name}: eigenspace equivalence failed"
                );
            }

            // descent sublattice: the standard-coordinate description
            // agrees with the monomial-coordinate basis description
            let y = random_element(&mut rng, Basis::B, -2, 1);
            let via_ttilde = ctx.in_l_left(&y, s).unwrap();
            let via_b = y.terms().all(|(w, c)| {
                if w.left_descents().contains(&s) {
                    c.in_a_minus()
                } else {
                    c.in_vinv_a_minus()
                }
            });
            assert_eq!(via_ttilde, via_b, "{name}: sublattice descriptions differ");

            // standard-basis product lands in the predicted sublattice
            let w = &pool[rng.gen_range(0..pool.len())];
            let ts = ctx.ttilde_of(&fc(&g, &[s]));
            let tw = ctx.ttilde_of(w);
            let prod = ctx.multiply(&ts, &tw).unwrap();
            if w.left_descents().contains(&s) {
                let shifted = prod.scale(&LaurentInt::v_pow(-1));
                assert!(
                    ctx.in_l_left(&shifted, s).unwrap(),
                    "{name}: product must lie in v L_L^s"
                );
            } else {
                assert!(
                    ctx.in_l_left(&prod, s).unwrap(),
                    "{name}: product must lie in L_L^s"
                );
            }

            // intersection property: t_s L meets L inside L_L^s
            let lattice_x = random_element(&mut rng, Basis::Ttilde, -3, 0);
            let image = ctx.multiply(&ts, &lattice_x).unwrap();
            if ctx.in_lattice(&image).unwrap() {
                assert!(
                    ctx.in_l_left(&image, s).unwrap(),
                    "{name}: intersection escaped L_L^s"
                );
            }

            // pair sublattices
            let (ps, pt) = pairs[rng.gen_range(0..pairs.len())];
            let member = {
                let k = rng.gen_range(1..=3);
                let terms = (0..k)
                    .map(|_| {
                        let w = pool[rng.gen_range(0..pool.len())].clone();
                        let coeff = if w.left_descents().contains(&pt) {
                            random_laurent(&mut rng, -3, 0)
                        } else {
                            random_laurent(&mut rng, -3, -1)
                        };
                        (w, coeff)
                    })
                    .collect();
                ctx.element(Basis::Ttilde, terms)
            };
            let ts_member = ctx
                .multiply(&ctx.ttilde_of(&fc(&g, &[ps])), &member)
                .unwrap();
            assert!(
                ctx.in_l_left_st(&ts_member, ps, pt).unwrap(),
                "{name}: t_s L_L^t escaped L_L^st"
            );
            // a != s noncommuting with t moves the pair sublattice back
            let movers: Vec<usize> = (0..g.rank())
                .filter(|&a| a != ps && g.noncommuting(a, pt))
                .collect();
            if !movers.is_empty() {
                let a = movers[rng.gen_range(0..movers.len())];
                let st_member = {
                    let k = rng.gen_range(1..=3);
                    let terms = (0..k)
                        .map(|_| {
                            let w = pool[rng.gen_range(0..pool.len())].clone();
                            let begins = w.left_descents().contains(&ps) && {
                                let rest =
                                    w.trace().strip_left(&g, ps).expect("descent");
                                rest.left_block().contains(&pt)
                            };
                            let coeff = if begins {
                                random_laurent(&mut rng, -3, 0)
                            } else {
                                random_laurent(&mut rng, -3, -1)
                            };
                            (w, coeff)
                        })
                        .collect();
                    ctx.element(Basis::Ttilde, terms)
                };
                let moved = ctx
                    .multiply(&ctx.ttilde_of(&fc(&g, &[a])), &st_member)
                    .unwrap();
                assert!(
                    ctx.in_l_left(&moved, a).unwrap(),
                    "{name}: t_a L_L^st escaped L_L^a"
                );
            }
        }
    }
    println!("AC11 PASS: eigenspace and lattice properties hold on 500 random elements per graph");
}

/// The coset decomposition cases referenced by the star-operation layer:
/// spot-check length additivity and the case bound k <= m - 1 on one
/// affine graph, complementing the per-module unit tests.
#[test]
fn coset_cases_stay_in_range() {
    let g = family("Ctilde3");
    let (els, _) = enumerate_fc(&g, 7);
    for w in &els {
        for (s, t) in g.noncommuting_pairs() {
            let m = g.bond(s, t).unwrap().finite().unwrap() as usize;
            for side in [Side::Left, Side::Right] {
                let (wi, rest) = coset_decompose(&g, w, (s, t), side).unwrap();
                assert!(wi.len() + rest.len() == w.len());
                assert!(wi.len() <= m - 1, "fully commutative elements stay short of the longest coset element");
            }
        }
    }
}

/// Verify the integer part reader on a known positive case: in B2 the
/// constants of c_s c_s are delta itself.
#[test]
fn delta_reader_sanity() {
    let g = family("B2");
    let ctx = TlContext::new(g.clone());
    let s = fc(&g, &[0]);
    let sc = ctx.structure_constants(&s, &s).unwrap();
    let (n, k) = sc.get(&s).unwrap().delta_power_decompose().unwrap();
    assert_eq!((n, k), (BigInt::one(), 1));
    assert!(BigInt::one().is_positive());
}
