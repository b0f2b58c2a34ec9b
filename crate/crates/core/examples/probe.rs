use efpe_core::*;
use efpe_core::games::GameSpec;
use efpe_core::metrics::{infoset_reach_masses, max_info_set_regret};
use efpe_core::solver::counterfactual_values;
use efpe_core::game::behavior_to_sequence;

fn main() {
    let spec = GameSpec::parse("liarsdice:6").unwrap();
    let tree = generate(spec).unwrap();
    let idx = SequenceIndex::build(&tree).unwrap();
    let umat = SparseUtilityMatrix::build(&tree, &idx);
    let mut cfg = SolverConfig::rtcfr_plus(0.0, 1, Perturbation::Adaptive { eps0: 0.1, delta0: 0.5, gamma: 0.5 }, 200_000);
    cfg.eval_every = 500;
    let mut prev_eps = f64::INFINITY;
    let mut dumps = 0;
    let _ = solver::solve(&cfg, &tree, &idx, &umat, &mut |pt| {
        let row = pt.row;
        if row.max_isregret > 0.3 && row.epsilon < prev_eps && prev_eps < 0.02 && dumps < 2 {
            dumps += 1;
            println!("== spike at travs {} eps {:.2e} rmax {:.3e}", row.traversals, row.epsilon, row.max_isregret);
            let x1 = pt.profile[0].clone();
            let x2 = pt.profile[1].clone();
            let rep = max_info_set_regret(&tree, &idx, &umat, [&x1, &x2]);
            let (worst_i, worst_r) = rep.per_infoset.iter().enumerate().max_by(|a, b| a.1.partial_cmp(b.1).unwrap()).unwrap();
            let info = idx.infoset(game::InfoSetId(worst_i as u32));
            let mass = infoset_reach_masses(&tree, &idx, [&x1, &x2]);
            let (xs, v) = match info.player {
                Player::One => (&x1, counterfactual_values(&idx, &umat, Player::One, &x1, &behavior_to_sequence(&x2, &idx))),
                Player::Two => (&x2, counterfactual_values(&idx, &umat, Player::Two, &x2, &behavior_to_sequence(&x1, &idx))),
            };
            let d = mass[worst_i];
            let vp: Vec<f64> = v[info.seq_range()].iter().map(|t| t / d).collect();
            let xv = &xs.values()[info.seq_range()];
            println!("  infoset {worst_i} player {:?} depth {} n {} | D {:.3e} r' {:.3e}", info.player, info.depth, info.num_actions, d, worst_r);
            println!("  v' = {:?}", vp.iter().map(|v| (v * 1e4).round() / 1e4).collect::<Vec<_>>());
            println!("  x  = {:?}", xv.iter().map(|v| (v * 1e4).round() / 1e4).collect::<Vec<_>>());
            // labels
            let decl = tree.infoset(game::InfoSetId(worst_i as u32));
            let labels: Vec<&str> = decl.actions.iter().map(|&a| tree.action_label(a)).collect();
            println!("  actions {labels:?}");
        }
        if row.epsilon < prev_eps { prev_eps = row.epsilon; }
    }).unwrap();
}
