mod support;

use std::collections::BTreeSet;

use finality_core::{
    build_final_model, build_reduction, check_support, d_separated, distinguishable, do_surgery,
    rank_hypotheses, uniform_independent, CmpOp, Comparison, Dataset, FinalModel, GoalPredicate,
    IndependenceStatement, InterventionSpec, Level, MStarModel, RankOptions, Scm,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::{all_queries, oracle_d_separated, random_scm, RandomDag};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn stmt(names: &[String], x: usize, y: usize, z: &BTreeSet<usize>) -> IndependenceStatement {
    IndependenceStatement::new(names[x].clone(), names[y].clone(), z.iter().map(|&v| names[v].clone())).unwrap()
}

/// A random intervention on a variable with at least one effect, and a final
/// model for a random goal over one of its direct children.
fn random_final(rng: &mut ChaCha8Rng, scm: &Scm) -> Option<FinalModel> {
    let dag = scm.dag();
    let actions: Vec<usize> = (0..dag.len()).filter(|&v| !dag.children(v).is_empty()).collect();
    let &action = actions.choose(rng)?;
    let m = do_surgery(scm, InterventionSpec::new(dag.name(action))).ok()?;
    let &effect = dag.children(action).choose(rng)?;
    let domain = scm.variable(effect).domain();
    let ops = [CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge];
    let op = *ops.choose(rng).unwrap();
    let level = *domain.choose(rng).unwrap();
    build_final_model(&m, [dag.name(effect)], GoalPredicate::single(dag.name(effect), op, level)).ok()
}

fn random_mstar(rng: &mut ChaCha8Rng, scm: &Scm) -> MStarModel {
    let v = rng.gen_range(0..scm.variables().len());
    do_surgery(scm, InterventionSpec::new(scm.variable(v).name())).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn d_separation_matches_path_oracle(seed in any::<u64>()) {
        let g = RandomDag::generate(&mut rng(seed), 5);
        let dag = g.dag();
        for (x, y, z) in all_queries(g.names.len()) {
            let got = d_separated(&dag, &stmt(&g.names, x, y, &z)).unwrap();
            prop_assert_eq!(got, oracle_d_separated(g.names.len(), &g.edges, x, y, &z));
        }
    }

    #[test]
    fn d_separation_is_symmetric(seed in any::<u64>()) {
        let g = RandomDag::generate(&mut rng(seed), 5);
        let dag = g.dag();
        for (x, y, z) in all_queries(g.names.len()) {
            prop_assert_eq!(
                d_separated(&dag, &stmt(&g.names, x, y, &z)).unwrap(),
                d_separated(&dag, &stmt(&g.names, y, x, &z)).unwrap()
            );
        }
    }

    #[test]
    fn separation_implies_uniform_independence(seed in any::<u64>()) {
        let scm = random_scm(&mut rng(seed), 5, 3);
        let worlds = scm.enumerate_worlds();
        let names = scm.names();
        for (x, y, z) in all_queries(names.len()) {
            let s = stmt(&names, x, y, &z);
            if d_separated(scm.dag(), &s).unwrap() {
                prop_assert!(uniform_independent(&worlds, &s).unwrap(), "{s}");
            }
        }
    }

    #[test]
    fn enumerated_worlds_are_consistent_and_counted(seed in any::<u64>()) {
        let scm = random_scm(&mut rng(seed), 5, 3);
        let worlds = scm.enumerate_worlds();
        let expected: usize = scm.exogenous().iter().map(|&v| scm.variable(v).domain().len()).product();
        prop_assert_eq!(worlds.len(), expected);
        prop_assert!(worlds.worlds().iter().all(|w| scm.is_consistent(w)));
        prop_assert!(worlds.worlds().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn surgery_preserves_nodes_and_only_cuts_inbound(seed in any::<u64>()) {
        let mut r = rng(seed);
        let scm = random_scm(&mut r, 5, 3);
        let m = random_mstar(&mut r, &scm);
        let base = scm.dag();
        let cut = m.surgered_dag();
        prop_assert_eq!(cut.nodes(), base.nodes());
        let target = m.target();
        let removed: Vec<_> = base.edges().into_iter().filter(|e| !cut.edges().contains(e)).collect();
        prop_assert!(cut.edges().iter().all(|e| base.edges().contains(e)));
        let inbound: Vec<_> = base.parents(target).iter().map(|&p| (p, target)).collect();
        prop_assert_eq!(removed, inbound);
        prop_assert!(cut.parents(target).is_empty());
        for v in 0..scm.variables().len() {
            if v != target {
                prop_assert_eq!(m.surgered().mechanism(v), scm.mechanism(v));
            }
        }
        if scm.is_exogenous(target) {
            prop_assert_eq!(m.enumerate_worlds(), scm.enumerate_worlds());
        }
        let free: usize = m.surgered().exogenous().iter().map(|&v| scm.variable(v).domain().len()).product();
        prop_assert_eq!(m.enumerate_worlds().len(), free);
    }

    #[test]
    fn final_model_laws(seed in any::<u64>()) {
        let mut r = rng(seed);
        let scm = random_scm(&mut r, 5, 3);
        let Some(f) = random_final(&mut r, &scm) else { return Ok(()) };
        let all = f.mstar().enumerate_worlds();
        let compatible = f.compatible_worlds();
        prop_assert!(compatible.is_subset(&all));

        // Mechanisms of the base model are untouched.
        prop_assert_eq!(f.mstar().base(), &scm);

        // Direct-child reversal keeps nodes and edge count.
        prop_assert_eq!(f.final_dag().nodes(), f.mstar().surgered_dag().nodes());
        prop_assert_eq!(f.final_dag().edge_count(), f.mstar().surgered_dag().edge_count());

        // Adding a conjunct never enlarges the compatible set.
        let var = f.goal().variables()[0].to_string();
        let level = *scm.variable(scm.index_of(&var).unwrap()).domain().choose(&mut r).unwrap();
        let tighter = f.goal().clone().and(Comparison::new(var, CmpOp::Ne, level));
        if let Ok(g) = build_final_model(f.mstar(), f.intended_effects(), tighter) {
            prop_assert!(g.compatible_worlds().is_subset(&compatible));
        }

        prop_assert!(!distinguishable(&f, &f).unwrap().distinguishable);
    }

    #[test]
    fn distinguishable_is_symmetric(seed in any::<u64>()) {
        let mut r = rng(seed);
        let scm = random_scm(&mut r, 5, 3);
        let Some(a) = random_final(&mut r, &scm) else { return Ok(()) };
        let effect = a.intended_effects()[0].to_string();
        let level = *scm.variable(scm.index_of(&effect).unwrap()).domain().choose(&mut r).unwrap();
        let Ok(b) = build_final_model(a.mstar(), [effect.as_str()], GoalPredicate::single(effect.clone(), CmpOp::Eq, level)) else {
            return Ok(());
        };
        let ab = distinguishable(&a, &b).unwrap();
        let ba = distinguishable(&b, &a).unwrap();
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn support_check_is_monotone(seed in any::<u64>()) {
        let mut r = rng(seed);
        let scm = random_scm(&mut r, 5, 3);
        let Some(f) = random_final(&mut r, &scm) else { return Ok(()) };
        let worlds = f.mstar().enumerate_worlds();
        let mut rows: Vec<(Vec<Level>, u64)> = Vec::new();
        let mut was_compatible = true;
        for _ in 0..6 {
            let w = worlds.worlds().choose(&mut r).unwrap();
            rows.push((w.values().to_vec(), r.gen_range(1..4)));
            let d = Dataset::new(scm.names(), rows.clone()).unwrap();
            let now = check_support(&f, &d).unwrap().compatible;
            prop_assert!(was_compatible || !now);
            was_compatible = now;
        }
    }

    #[test]
    fn uniform_data_reproduces_implied_verdicts(seed in any::<u64>()) {
        let mut r = rng(seed);
        let scm = random_scm(&mut r, 4, 3);
        let Some(f) = random_final(&mut r, &scm) else { return Ok(()) };
        let compatible = f.compatible_worlds();
        if compatible.is_empty() {
            return Ok(());
        }
        let weight = r.gen_range(1..5);
        let d = Dataset::new(scm.names(), compatible.worlds().iter().map(|w| (w.values().to_vec(), weight))).unwrap();
        for report in f.implied_dependencies() {
            let c = finality_core::check_dependence(&f, &d, &report.statement).unwrap();
            prop_assert_eq!(Some(c.observed_independent), report.distributionally_independent);
            prop_assert!(c.agree());
        }
    }

    #[test]
    fn ranking_ignores_row_order(seed in any::<u64>()) {
        let mut r = rng(seed);
        let scm = random_scm(&mut r, 4, 3);
        let dag = scm.dag();
        let Some(action) = (0..dag.len()).find(|&v| !dag.children(v).is_empty()) else { return Ok(()) };
        let m = do_surgery(&scm, InterventionSpec::new(dag.name(action))).unwrap();
        let hyps = finality_core::enumerate_goal_hypotheses(&m, 2, None).unwrap();
        let worlds = m.enumerate_worlds();
        let mut rows: Vec<(Vec<Level>, u64)> = (0..5)
            .map(|_| (worlds.worlds().choose(&mut r).unwrap().values().to_vec(), r.gen_range(1..3)))
            .collect();
        let first = rank_hypotheses(&m, &hyps, &Dataset::new(scm.names(), rows.clone()).unwrap(), &RankOptions::default()).unwrap();
        rows.shuffle(&mut r);
        let second = rank_hypotheses(&m, &hyps, &Dataset::new(scm.names(), rows).unwrap(), &RankOptions::default()).unwrap();
        prop_assert_eq!(first, second);
    }

    #[test]
    fn exact_support_match_is_most_specific(seed in any::<u64>()) {
        let mut r = rng(seed);
        let scm = random_scm(&mut r, 4, 3);
        let dag = scm.dag();
        let Some(action) = (0..dag.len()).find(|&v| !dag.children(v).is_empty()) else { return Ok(()) };
        let m = do_surgery(&scm, InterventionSpec::new(dag.name(action))).unwrap();
        let hyps = finality_core::enumerate_goal_hypotheses(&m, 2, None).unwrap();
        let pick = hyps.choose(&mut r).unwrap();
        let d = Dataset::new(scm.names(), pick.compatible.worlds().iter().map(|w| (w.values().to_vec(), 1))).unwrap();
        let opts = RankOptions { checks: finality_core::CheckSelection::None, prefer_specific: true };
        let ranking = rank_hypotheses(&m, &hyps, &d, &opts).unwrap();
        for e in &ranking.entries {
            let h = &hyps[e.verdict.hypothesis];
            if h == pick {
                prop_assert!(e.verdict.compatible);
            }
            if e.verdict.compatible {
                prop_assert!(h.compatible.len() >= pick.compatible.len());
            }
        }
    }

    #[test]
    fn reductions_are_well_formed(seed in any::<u64>()) {
        let mut r = rng(seed);
        let scm = random_scm(&mut r, 4, 3);
        let Some(f) = random_final(&mut r, &scm) else { return Ok(()) };
        let Ok(red) = build_reduction(&f, None) else { return Ok(()) };
        let worlds = red.enumerate_worlds();
        prop_assert!(worlds.worlds().iter().all(|w| red.scm().is_consistent(w)));

        let erased = red.erase_intention().unwrap();
        prop_assert_eq!(erased.enumerate_worlds(), worlds.project(&erased.names()).unwrap());

        // Every observable world that meets the goal is one the final model allows.
        let observed = red.observable_worlds();
        let compatible = f.compatible_worlds();
        let goal_met = observed.filter(|w| compatible.contains(w));
        for w in observed.worlds() {
            let meets = f.goal().holds_in(&observed, w).unwrap();
            prop_assert_eq!(meets, goal_met.contains(w));
        }
        let diff = finality_core::compare_structures(&f, &red).unwrap();
        let expected = if observed == compatible {
            finality_core::ProjectionAgreement::Equal
        } else if observed.is_subset(&compatible) {
            finality_core::ProjectionAgreement::Subset
        } else {
            finality_core::ProjectionAgreement::Differs
        };
        prop_assert_eq!(diff.projection, expected);
    }
}
