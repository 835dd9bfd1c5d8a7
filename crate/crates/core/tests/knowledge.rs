mod common;

use std::sync::Arc;

use common::{binary_schema, from_cells, rng};
use dadt::data::{Attribute, Column, Dataset, Path, Schema, SplitCondition};
use dadt::knowledge::{
    build_from_target_sample, dynamic_alpha, maximal_subpath, mix, query_target, KnowledgeRegime,
};
use rand::Rng;

fn census_like() -> Dataset {
    let schema = Arc::new(
        Schema::new(
            vec![
                Attribute::discrete("SEX", &["f", "m"]),
                Attribute::discrete("CIT", &["1", "2", "3"]),
                Attribute::discrete("MAR", &["1", "2", "3"]),
                Attribute::discrete("SCHL", &["lo", "mid", "hi"]),
            ],
            Attribute::discrete("Y", &["0", "1"]),
            Some("SEX"),
        )
        .unwrap(),
    );
    let mut r = rng(9);
    let n = 3000;
    let cols = (0..4)
        .map(|a| {
            let k = if a == 0 { 2 } else { 3 };
            Column::Discrete((0..n).map(|_| r.gen_range(0..k)).collect())
        })
        .collect();
    Dataset::new(schema, cols, Some((0..n).map(|_| r.gen_range(0..2)).collect())).unwrap()
}

fn deep_path() -> Path {
    Path::new(vec![
        SplitCondition::eq(0, 0),
        SplitCondition::eq(1, 0),
        SplitCondition::eq(2, 2),
    ])
}

#[test]
fn subpath_keeps_the_leading_attributes() {
    let target = census_like();
    let schl = SplitCondition::eq(3, 1);
    let phi = deep_path();
    let cases = [
        (KnowledgeRegime::FullTargetKnowledge, 3),
        (KnowledgeRegime::PartialTargetKnowledge(3), 2),
        (KnowledgeRegime::PartialTargetKnowledge(2), 1),
        (KnowledgeRegime::PartialTargetKnowledge(1), 0),
    ];
    for (regime, keep) in cases {
        let ks = build_from_target_sample(&target, regime).unwrap();
        let sub = maximal_subpath(&ks, &schl, &phi).unwrap().unwrap();
        assert_eq!(sub.conditions(), &phi.conditions()[..keep], "{}", regime.name());
        let alpha = dynamic_alpha(&phi, &sub).unwrap();
        assert!((alpha - (3 - keep) as f64 / 3.0).abs() < 1e-15);
    }
}

#[test]
fn wide_queries_exceed_the_arity_limit() {
    let target = census_like();
    let ks = build_from_target_sample(&target, KnowledgeRegime::PartialTargetKnowledge(2)).unwrap();
    let phi = Path::new(deep_path().conditions()[..2].to_vec());
    assert_eq!(query_target(&ks, &SplitCondition::eq(3, 0), &phi).unwrap(), None);
    let one = Path::new(deep_path().conditions()[..1].to_vec());
    assert!(query_target(&ks, &SplitCondition::eq(3, 0), &one).unwrap().is_some());
}

#[test]
fn partial_answers_match_target_frequencies() {
    let target = census_like();
    let ks = build_from_target_sample(&target, KnowledgeRegime::PartialTargetKnowledge(2)).unwrap();
    let phi = Path::new(vec![SplitCondition::neq(1, 2)]);
    let cond = SplitCondition::eq(2, 1);
    let ctx: Vec<usize> = (0..target.len()).filter(|&r| phi.holds(&target, r)).collect();
    let hits = ctx.iter().filter(|&&r| cond.holds(&target, r)).count();
    let got = query_target(&ks, &cond, &phi).unwrap().unwrap();
    assert!((got - hits as f64 / ctx.len() as f64).abs() < 1e-12);
}

#[test]
fn example_a1_target_equality() {
    let s = binary_schema(&["X1", "X2"], None);
    let target = from_cells(&s, &[(&[0, 0], 1, 40), (&[1, 1], 1, 60)]);
    let ks = build_from_target_sample(&target, KnowledgeRegime::PartialTargetKnowledge(2)).unwrap();
    let phi = Path::new(vec![SplitCondition::eq(0, 0)]);
    assert_eq!(query_target(&ks, &SplitCondition::eq(1, 0), &phi).unwrap(), Some(1.0));
    assert_eq!(query_target(&ks, &SplitCondition::eq(0, 0), &Path::root()).unwrap(), Some(0.4));
}

#[test]
fn mixing_falls_back_to_the_source() {
    let s = binary_schema(&["X1", "X2"], None);
    let target = from_cells(&s, &[(&[0, 0], 1, 40), (&[1, 1], 1, 60)]);
    let none = build_from_target_sample(&target, KnowledgeRegime::NoTargetKnowledge).unwrap();
    let events = vec![vec![SplitCondition::eq(1, 0)], vec![SplitCondition::eq(1, 1)]];
    let phi = Path::new(vec![SplitCondition::eq(0, 0)]);
    let m = mix(&none, &events, &phi, &[0.3, 0.7], None).unwrap();
    assert_eq!((m.probs, m.alpha), (vec![0.3, 0.7], 1.0));

    let full = build_from_target_sample(&target, KnowledgeRegime::FullTargetKnowledge).unwrap();
    let m = mix(&full, &events, &phi, &[0.3, 0.7], Some(0.5)).unwrap();
    assert_eq!(m.probs, vec![0.65, 0.35]);
}
