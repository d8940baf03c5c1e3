//! Values computed once by the exhaustive solvers and frozen here.

use mckc_core::cckp::{CckpInstance, Machine, SupplyVector};
use mckc_core::gaps::{conf_gap_f, gen_conf_gap, gen_mckc_gap, gen_petersen_pcmin};
use mckc_core::maxmin::greedy::{greedy_qcmin, verify_farkas, GreedyOutcome};
use mckc_core::maxmin::qptas::{qptas_cckp, QptasOutcome};
use mckc_core::model::{CapacityClass, Distance, MckcInstance};
use mckc_core::num::{format_rational, int, parse_rational, rat};
use mckc_core::oracle::{brute_force_cckp, brute_force_mckc};
use mckc_core::pipeline::{guess_opt, transfer_capacities, Mode, PipelineConfig, Trace};
use mckc_core::strong::StrongParams;
use mckc_core::weak::max_radius;

#[test]
fn strong_constants_at_half() {
    let p = StrongParams::from_delta(&rat(1, 2)).unwrap();
    assert_eq!(p.epsilon, rat(1, 200));
    assert_eq!(p.t_star, 8480);
    assert_eq!(p.near_root, 16956);
    assert_eq!(p.diameter, 52984);
    assert_eq!(p.hop_budget(), 61465);
}

#[test]
fn strong_epsilon_is_capped_at_one_twelfth() {
    // δ/100 never exceeds 1/12 on (0,1), so ε tracks δ/100.
    assert_eq!(StrongParams::from_delta(&rat(9, 10)).unwrap().epsilon, rat(9, 1000));
    assert!(StrongParams::from_delta(&int(1)).is_err());
}

#[test]
fn weak_radius_cap() {
    assert_eq!(max_radius(9, &int(1)), 2 * 4 + 2);
    assert_eq!(max_radius(1, &rat(1, 2)), 2);
}

#[test]
fn gap_k3_load_thresholds() {
    // One group must put 3 clients on its unit facility or its big one; with
    // loads bounded by ⌈b·c⌉ any b > 1 already admits load 2 on capacity 1.
    let gap = gen_mckc_gap(3).unwrap();
    assert!(brute_force_mckc(&gap.instance, &int(1), &int(1)).unwrap().is_none());
    assert!(brute_force_mckc(&gap.instance, &int(1), &rat(101, 100)).unwrap().is_some());
    assert!(brute_force_mckc(&gap.instance, &int(1), &rat(3, 2)).unwrap().is_some());
}

#[test]
fn gap_k2_is_integrally_feasible() {
    // The big copy serves one group, two unit copies the other.
    let gap = gen_mckc_gap(2).unwrap();
    assert!(brute_force_mckc(&gap.instance, &int(1), &int(1)).unwrap().is_some());
}

#[test]
fn conf_gap_multiplicities() {
    assert_eq!(conf_gap_f(3, 1), 3u64.pow(5));
    assert_eq!(conf_gap_f(3, 3), 3);
    let gap = gen_conf_gap(2).unwrap();
    assert_eq!(gap.supply.0, vec![2, 8 + 4, 2 + 1]);
    assert_eq!(gap.instance.num_machines(), 1 + 2 + 8 + 2);
}

#[test]
fn petersen_mixture_best_is_1022() {
    let gap = gen_petersen_pcmin(1).unwrap();
    assert_eq!(gap.mixture.0, vec![1; 15]);
    let (ratio, best) = brute_force_cckp(&gap.instance, &gap.mixture).unwrap();
    assert_eq!(ratio, rat(1022, 1023));
    let poorest = (0..3).map(|i| best.received(&gap.instance, i)).min().unwrap();
    assert_eq!(poorest, int(1022));
}

#[test]
fn small_cckp_optimum() {
    // Demands 4 and 3, jobs 1,2,3 with one spare 2: {3,1} and {2,2}.
    let inst = CckpInstance::qcmin(vec![int(4), int(3)], vec![int(1), int(2), int(3)]);
    let supply = SupplyVector(vec![1, 2, 1]);
    let (ratio, _) = brute_force_cckp(&inst, &supply).unwrap();
    assert_eq!(ratio, int(1));
    let card = CckpInstance::new(vec![Machine::new(int(4), Some(1)), Machine::new(int(3), None)], vec![int(1), int(2), int(3)]);
    let (ratio, _) = brute_force_cckp(&card, &supply).unwrap();
    assert_eq!(ratio, rat(3, 4));
    match qptas_cckp(&card, &supply, &rat(1, 5)).unwrap() {
        QptasOutcome::Infeasible => {}
        QptasOutcome::Allocation(a) => assert!(a.validate(&card, &supply).is_ok()),
    }
}

#[test]
fn greedy_certificate_on_a_starved_pair() {
    let inst = CckpInstance::qcmin(vec![int(10), int(10)], vec![int(4)]);
    match greedy_qcmin(&inst, &SupplyVector(vec![1])) {
        GreedyOutcome::Certificate(c) => assert!(verify_farkas(&inst, &SupplyVector(vec![1]), &c)),
        other => panic!("{other:?}"),
    }
    assert!(matches!(greedy_qcmin(&inst, &SupplyVector(vec![4])), GreedyOutcome::Allocation(_)));
}

#[test]
fn transfer_frozen() {
    let caps = [int(1), int(2), int(5)];
    let t = transfer_capacities(&caps, &[0, 1, 1], &[rat(1, 2), rat(3, 2), rat(7, 4)], &[1, 2, 2]).unwrap();
    // Suffix masses 15/4, 13/4, 7/4 floor to 3, 3, 1.
    assert_eq!(t.s_tilde, vec![0, 2, 1]);
    assert_eq!(t.t, vec![1, 0, 1]);
}

#[test]
fn rational_text_round_trip() {
    for (text, v) in [("3/6", rat(1, 2)), ("-2", int(-2)), ("0.25", rat(1, 4)), ("7", int(7))] {
        assert_eq!(parse_rational(text).unwrap(), v);
    }
    assert_eq!(format_rational(&rat(6, 4)), "3/2");
    assert_eq!(format_rational(&int(4)), "4");
    assert!(parse_rational("1/0").is_err());
}

#[test]
fn line_instance_radius() {
    // f0 at 0, f1 at 10; clients at 1, 2, 9. One copy of capacity 2 and one of 1.
    let pts: [i128; 5] = [0, 10, 1, 2, 9];
    let distance = pts.iter().map(|a| pts.iter().map(|b| Distance::Finite(int((a - b).abs()))).collect()).collect();
    let inst = MckcInstance::with_matrix(2, 3, distance, vec![CapacityClass::new(1, int(1)), CapacityClass::new(1, int(2))], false);
    assert!(brute_force_mckc(&inst, &int(1), &int(1)).unwrap().is_none());
    assert!(brute_force_mckc(&inst, &int(2), &int(1)).unwrap().is_some());
    for mode in [Mode::Weak, Mode::StrongHard] {
        let cfg = PipelineConfig::new(mode, rat(1, 2));
        let res = guess_opt(&inst, &cfg, &mut Trace::default()).unwrap();
        assert!(res.radius <= int(2), "{mode:?} settled at {}", res.radius);
    }
}
