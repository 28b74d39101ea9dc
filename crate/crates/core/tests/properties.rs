use entropart::clebsch_gordan::{cg, HalfInt, OracleTable, SpinCouple};
use entropart::entropy::{
    self, bipartitions, chain_rule_residual, mutual_information, shannon, ssa_report,
    subadditivity_report, tripartitions, LogBase, Options,
};
use entropart::index_map::{intersection_direction, rebase};
use entropart::prob::{normalize, Distribution, RealSequence};
use entropart::{FlatIndex, MultiIndex, Shape};
use proptest::prelude::*;

fn shape_strategy(max_total: usize, max_rank: usize) -> impl Strategy<Value = Shape> {
    prop::collection::vec(1usize..=8, 1..=max_rank)
        .prop_filter("total bounded", move |f| f.iter().product::<usize>() <= max_total)
        .prop_map(|f| Shape::new(f).unwrap())
}

/// Exponential weights with some exact zeros, normalized.
fn dist_for(n: usize) -> impl Strategy<Value = Distribution> {
    prop::collection::vec((0.0f64..1.0, 0u8..5), n).prop_map(move |cells| {
        let mut weights: Vec<f64> =
            cells.iter().map(|&(u, z)| if z == 0 { 0.0 } else { -(1.0 - u).ln() }).collect();
        if weights.iter().all(|&w| w == 0.0) {
            weights[0] = 1.0;
        }
        normalize(&RealSequence::new(weights).unwrap()).unwrap()
    })
}

fn shaped_dist(max_total: usize, max_rank: usize) -> impl Strategy<Value = (Shape, Distribution)> {
    shape_strategy(max_total, max_rank).prop_flat_map(|s| {
        let n = s.total();
        (Just(s), dist_for(n))
    })
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        let rest: Vec<usize> = items.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, &v)| v).collect();
        for mut tail in permutations(&rest) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn flatten_unflatten_round_trip(shape in shape_strategy(10_000, 5), seed in any::<u64>()) {
        let y = (seed as usize % shape.total()) + 1;
        let multi = shape.unflatten(FlatIndex(y)).unwrap();
        prop_assert_eq!(shape.flatten(&multi).unwrap(), FlatIndex(y));
        prop_assert_eq!(shape.unflatten(shape.flatten(&multi).unwrap()).unwrap(), multi);
    }

    #[test]
    fn flatten_increases_along_each_axis(shape in shape_strategy(2_000, 4), seed in any::<u64>()) {
        let y = (seed as usize % shape.total()) + 1;
        let multi = shape.unflatten(FlatIndex(y)).unwrap();
        for axis in 0..shape.rank() {
            if multi.0[axis] < shape.factors()[axis] {
                let mut next = multi.clone();
                next.0[axis] += 1;
                prop_assert!(shape.flatten(&next).unwrap() > shape.flatten(&multi).unwrap());
            }
        }
    }

    #[test]
    fn rebase_there_and_back(
        (from, to) in (1usize..=6, 1usize..=6, 1usize..=6).prop_map(|(a, b, c)| {
            (Shape::new(vec![a * b, c]).unwrap(), Shape::new(vec![a, c, b]).unwrap())
        }),
        seed in any::<u64>(),
    ) {
        let multi = from.unflatten(FlatIndex(seed as usize % from.total() + 1)).unwrap();
        let there = rebase(&from, &to, &multi).unwrap();
        prop_assert_eq!(rebase(&to, &from, &there).unwrap(), multi);
    }

    #[test]
    fn lattice_rows_lie_on_the_plane(shape in shape_strategy(500, 4)) {
        let plane = shape.plane_spec();
        let base = plane.evaluate(&vec![1; shape.rank() + 1]);
        prop_assert_eq!(base, 0);
        for (i, m) in shape.multi_indices().enumerate() {
            let mut point: Vec<i64> = m.0.iter().map(|&d| d as i64).collect();
            point.push(i as i64 + 1);
            prop_assert_eq!(plane.evaluate(&point), 0);
        }
    }

    #[test]
    fn cross_product_is_orthogonal(
        n1 in prop::array::uniform3(-50i64..50),
        n2 in prop::array::uniform3(-50i64..50),
    ) {
        let dot = |a: [i64; 3], b: [i64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        match intersection_direction(n1, n2) {
            Ok(a) => {
                prop_assert_eq!(dot(a, n1), 0);
                prop_assert_eq!(dot(a, n2), 0);
            }
            Err(_) => {
                // parallel: every 2x2 minor vanishes
                prop_assert_eq!(n1[0] * n2[1], n1[1] * n2[0]);
                prop_assert_eq!(n1[1] * n2[2], n1[2] * n2[1]);
                prop_assert_eq!(n1[0] * n2[2], n1[2] * n2[0]);
            }
        }
    }

    #[test]
    fn normalize_ignores_sign_and_scale(
        values in prop::collection::vec(-1e3f64..1e3, 1..50),
        scale in prop_oneof![-1e6f64..-1e-6, 1e-6f64..1e6],
    ) {
        prop_assume!(values.iter().any(|&v| v != 0.0));
        let base = normalize(&RealSequence::new(values.clone()).unwrap()).unwrap();
        let flipped = normalize(&RealSequence::new(values.iter().map(|v| -v).collect()).unwrap()).unwrap();
        prop_assert_eq!(&base, &flipped);
        let scaled = normalize(&RealSequence::new(values.iter().map(|v| v * scale).collect()).unwrap()).unwrap();
        for (a, b) in base.probs().iter().zip(scaled.probs()) {
            prop_assert!((a - b).abs() <= 1e-14);
        }
        let total: f64 = base.probs().iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn marginals_compose_and_normalize((shape, dist) in shaped_dist(256, 4)) {
        prop_assume!(shape.rank() >= 2);
        let joint = dist.as_joint(&shape).unwrap();
        let m12 = joint.marginal(&[1, 2]).unwrap();
        let sub = shape.select(&[1, 2]);
        let via = m12.as_joint(&sub).unwrap().marginal(&[1]).unwrap();
        let direct = joint.marginal(&[1]).unwrap();
        for (a, b) in via.probs().iter().zip(direct.probs()) {
            prop_assert!((a - b).abs() <= 1e-15);
        }
        for axes in bipartitions(shape.rank()) {
            let total: f64 = joint.marginal(&axes).unwrap().probs().iter().sum();
            prop_assert!((total - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn conditionals_reconstruct_marginals((shape, dist) in shaped_dist(256, 3)) {
        prop_assume!(shape.rank() >= 2);
        let joint = dist.as_joint(&shape).unwrap();
        let q = joint.conditional(1, 2).unwrap();
        let target = joint.marginal(&(1..=shape.rank()).filter(|&a| a != 2).collect::<Vec<_>>()).unwrap();
        for b in 1..=q.given_size() {
            if q.is_supported(b) {
                let row: f64 = (1..=q.target_size()).map(|a| q.q(a, b).unwrap()).sum();
                prop_assert!((row - 1.0).abs() <= 1e-12);
            }
        }
        for a in 1..=q.target_size() {
            let rebuilt: f64 = (1..=q.given_size())
                .filter(|&b| q.is_supported(b))
                .map(|b| q.given_marginal()[b - 1] * q.q(a, b).unwrap())
                .sum();
            prop_assert!((rebuilt - target.probs()[a - 1]).abs() <= 1e-12);
        }
    }

    #[test]
    fn subadditivity_holds((shape, dist) in shaped_dist(256, 4)) {
        let joint = dist.as_joint(&shape).unwrap();
        for side in bipartitions(shape.rank()) {
            let r = subadditivity_report(&joint, &side, &Options::default()).unwrap();
            prop_assert!(r.residual >= -1e-12, "{:?}", r);
            prop_assert!(r.holds && r.is_consistent());
            prop_assert_eq!(r.residual, r.recompute_residual());
            let h_a = r.entropies["H_A"];
            let n_a: usize = side.iter().map(|&a| shape.factors()[a - 1]).product();
            prop_assert!(h_a >= 0.0 && h_a <= (n_a as f64).ln() + 1e-12);
        }
    }

    #[test]
    fn mutual_information_is_symmetric((shape, dist) in shaped_dist(256, 4)) {
        let joint = dist.as_joint(&shape).unwrap();
        for side in bipartitions(shape.rank()) {
            let other: Vec<usize> = (1..=shape.rank()).filter(|a| !side.contains(a)).collect();
            let ab = mutual_information(&joint, &side, &Options::default()).unwrap();
            let ba = mutual_information(&joint, &other, &Options::default()).unwrap();
            prop_assert!((ab - ba).abs() <= 1e-12);
        }
    }

    #[test]
    fn chain_rule_for_every_ordering((shape, dist) in shaped_dist(256, 3)) {
        prop_assume!(shape.rank() >= 2);
        let joint = dist.as_joint(&shape).unwrap();
        let axes: Vec<usize> = (1..=shape.rank()).collect();
        for ordering in permutations(&axes) {
            let residual = chain_rule_residual(&joint, &ordering, &Options::default()).unwrap();
            prop_assert!(residual.abs() <= 1e-12);
        }
    }

    #[test]
    fn conditioning_reduces_entropy((shape, dist) in shaped_dist(256, 2)) {
        prop_assume!(shape.rank() == 2);
        let joint = dist.as_joint(&shape).unwrap();
        let h_cond = entropy::conditional_entropy(&joint, 1, 2, LogBase::E).unwrap();
        let h_a = shannon(&joint.marginal(&[1]).unwrap(), LogBase::E);
        prop_assert!(h_cond >= 0.0);
        prop_assert!(h_cond <= h_a + 1e-12);
    }

    #[test]
    fn strong_subadditivity_holds((shape, dist) in shaped_dist(256, 4)) {
        let joint = dist.as_joint(&shape).unwrap();
        for [a, b, c] in tripartitions(shape.rank()) {
            let r = ssa_report(&joint, [&a, &b, &c], &Options::default()).unwrap();
            prop_assert!(r.residual >= -1e-12, "{:?}", r);
        }
    }

    #[test]
    fn entropy_is_concave(
        (p, q) in (2usize..40).prop_flat_map(|n| (dist_for(n), dist_for(n))),
        lambda in 0.0f64..=1.0,
    ) {
        let mix: Vec<f64> = p.probs().iter().zip(q.probs()).map(|(a, b)| lambda * a + (1.0 - lambda) * b).collect();
        let total: f64 = mix.iter().sum();
        let mix = Distribution::new(mix.iter().map(|v| v / total).collect()).unwrap();
        let lhs = shannon(&mix, LogBase::E);
        let rhs = lambda * shannon(&p, LogBase::E) + (1.0 - lambda) * shannon(&q, LogBase::E);
        prop_assert!(lhs >= rhs - 1e-12);
    }

    #[test]
    fn base_change_rescales((shape, dist) in shaped_dist(256, 3)) {
        prop_assume!(shape.rank() >= 2);
        let joint = dist.as_joint(&shape).unwrap();
        let nats = entropy::shape_reports(&joint, &Options::default()).unwrap();
        let bits = entropy::shape_reports(&joint, &Options { base: LogBase::TWO, ..Options::default() }).unwrap();
        for (n, b) in nats.iter().zip(&bits) {
            prop_assert_eq!(n.holds, b.holds);
            for (key, value) in &n.entropies {
                prop_assert!((value / std::f64::consts::LN_2 - b.entropies[key]).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn exhaustive_round_trip_small_shapes() {
    for n in 1..=64usize {
        for shape in entropart::index_map::factorizations(n, 4) {
            let mut seen = vec![false; n];
            for y in 1..=n {
                let multi = shape.unflatten(FlatIndex(y)).unwrap();
                assert_eq!(shape.flatten(&multi).unwrap(), FlatIndex(y));
                seen[y - 1] = true;
            }
            assert!(seen.iter().all(|&s| s));
            // and every digit tuple lands in range exactly once
            let mut hit = vec![0u8; n];
            let mut digits = vec![1usize; shape.rank()];
            loop {
                hit[shape.flatten(&MultiIndex(digits.clone())).unwrap().get() - 1] += 1;
                let mut k = 0;
                while k < digits.len() && digits[k] == shape.factors()[k] {
                    digits[k] = 1;
                    k += 1;
                }
                if k == digits.len() {
                    break;
                }
                digits[k] += 1;
            }
            assert!(hit.iter().all(|&h| h == 1), "{shape}");
        }
    }
}

#[test]
fn cg_rows_are_orthonormal() {
    // Σ_{j,m} ⟨m1 m2|j m⟩⟨m1' m2'|j m⟩ = δ δ
    for tj1 in 0..=4i64 {
        for tj2 in 0..=4i64 {
            let h = HalfInt::from_twice;
            let couples: Vec<SpinCouple> = SpinCouple::enumerate(4)
                .into_iter()
                .filter(|c| c.j1().twice() == tj1 && c.j2().twice() == tj2)
                .collect();
            let basis: Vec<(i64, i64)> = (0..=tj1)
                .flat_map(|a| (0..=tj2).map(move |b| (tj1 - 2 * a, tj2 - 2 * b)))
                .collect();
            for &(a1, a2) in &basis {
                for &(b1, b2) in &basis {
                    let dot: f64 = couples
                        .iter()
                        .map(|c| {
                            let x = cg(h(tj1), h(a1), h(tj2), h(a2), c.j(), c.m()).unwrap().to_f64();
                            let y = cg(h(tj1), h(b1), h(tj2), h(b2), c.j(), c.m()).unwrap().to_f64();
                            x * y
                        })
                        .sum();
                    let expected = if (a1, a2) == (b1, b2) { 1.0 } else { 0.0 };
                    assert!((dot - expected).abs() < 1e-10, "{tj1} {tj2} {a1} {a2} {b1} {b2}");
                }
            }
        }
    }
}

#[test]
fn oracle_table_agrees_with_exact_small() {
    for couple in SpinCouple::enumerate(3) {
        let table = OracleTable::new(couple.j1(), couple.j2());
        let exact = entropart::clebsch_gordan::CGTable::new(couple);
        for e in exact.entries() {
            let oracle = table.get(e.m1, e.m2, couple.j(), couple.m());
            assert!((oracle - e.value.to_f64()).abs() < 1e-12, "{couple} {:?}", e);
        }
    }
}
