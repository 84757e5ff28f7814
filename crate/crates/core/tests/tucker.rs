use kneser_lab::alternation::{alternation_number, Permutation};
use kneser_lab::generators::{complete_ksubsets, stable_ksubsets};
use kneser_lab::solver::afl_coloring;
use kneser_lab::tucker::{
    build_lambda, check_tucker, CheckMode, Labeling, LambdaContext, LambdaVariant, TuckerReport,
};
use kneser_lab::{Coloring, Hypergraph, SignedVector};

fn certify(factors: Vec<Hypergraph>, p: usize, c: Coloring, variant: LambdaVariant) -> TuckerReport {
    let ctx = LambdaContext::new(factors, p, c, variant).unwrap();
    let inst = build_lambda(ctx);
    check_tucker(&inst, CheckMode::Exhaustive).unwrap()
}

fn assert_clean(report: &TuckerReport) {
    assert!(report.violations.is_empty(), "{:?}", &report.violations[..report.violations.len().min(4)]);
    assert!(report.passed(), "{report:?}");
}

#[test]
fn single_factor_p2() {
    let report = certify(
        vec![complete_ksubsets(4, 2).unwrap()],
        2,
        afl_coloring(4, 2, 2).unwrap(),
        LambdaVariant::Defect,
    );
    assert_clean(&report);
    assert_eq!((report.alpha, report.m, report.n), (3, 4, 4));
    assert_eq!(report.conclusion.lhs, 4);
    assert_eq!(report.patterns.equivariance, 81);
}

#[test]
fn two_factors_p2_pullback() {
    let h = complete_ksubsets(4, 2).unwrap();
    let base = afl_coloring(4, 2, 2).unwrap();
    let pulled: Vec<usize> = (0..36).map(|i| base.at(i / 6)).collect();
    let c = Coloring::new(pulled, 2).unwrap();
    let report = certify(vec![h.clone(), h], 2, c, LambdaVariant::Defect);
    assert_clean(&report);
    assert_eq!((report.n, report.alpha, report.m), (8, 7, 8));
}

#[test]
fn single_factor_p3() {
    let report = certify(
        vec![complete_ksubsets(6, 2).unwrap()],
        3,
        afl_coloring(6, 2, 3).unwrap(),
        LambdaVariant::Defect,
    );
    assert_clean(&report);
    assert_eq!((report.alpha, report.m), (5, 6));
    assert_eq!(report.conclusion.lhs, 7);
}

#[test]
fn alternation_variant_with_minimizing_permutation() {
    let h = complete_ksubsets(5, 2).unwrap();
    let pi = alternation_number(&h, 2).unwrap().permutation;
    let report = certify(
        vec![h],
        2,
        afl_coloring(5, 2, 2).unwrap(),
        LambdaVariant::Alternation {
            permutations: vec![pi],
        },
    );
    assert_clean(&report);
}

#[test]
fn alternation_variant_on_a_stable_hypergraph() {
    // the cyclic order makes the alternation bound beat the defect bound
    let h = stable_ksubsets(6, 2);
    let kg = kneser_lab::generators::kneser(&h, 2).unwrap().hypergraph;
    let c = kneser_lab::solver::chromatic_number(&kg).unwrap().witness.unwrap();
    let report = certify(
        vec![h.clone()],
        2,
        c,
        LambdaVariant::Alternation {
            permutations: vec![Permutation::identity(6)],
        },
    );
    assert_clean(&report);
}

#[test]
fn lambda_is_equivariant_on_a_two_factor_alternation_instance() {
    let h = complete_ksubsets(4, 2).unwrap();
    let base = afl_coloring(4, 2, 2).unwrap();
    let pulled: Vec<usize> = (0..36).map(|i| base.at(i / 6)).collect();
    let c = Coloring::new(pulled, 2).unwrap();
    let pi = Permutation::identity(4);
    let ctx = LambdaContext::new(
        vec![h.clone(), h],
        2,
        c,
        LambdaVariant::Alternation {
            permutations: vec![pi.clone(), pi],
        },
    )
    .unwrap();
    let inst = build_lambda(ctx);
    for code in 1..3u32.pow(8) {
        let entries: Vec<Option<u8>> = (0..8)
            .map(|i| match code / 3u32.pow(i) % 3 {
                0 => None,
                d => Some(d as u8 - 1),
            })
            .collect();
        let x = SignedVector::new(2, entries).unwrap();
        let a = inst.lambda.label(&x);
        let b = inst.lambda.label(&x.rotate());
        assert_eq!((b.s, b.v), ((a.s + 1) % 2, a.v));
        assert!(a.v >= 1 && a.v <= inst.m);
    }
}
