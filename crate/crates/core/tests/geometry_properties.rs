//! Randomized properties of arcs, jets and the discrepancy on the catalog charts.

use arcspace::catalog::{example, Chart, EXAMPLE_IDS};
use arcspace::field::Field;
use arcspace::jets::{enumerate_jets, push_jet, truncate_arc, truncate_jet, EnumConfig};
use arcspace::mather::{mather_discrepancy, transition_at};
use arcspace::poly::MultiPoly;
use arcspace::presentation::{
    jacobian_ideal, jacobian_ideal_of_morphism, ord_ideal, push_arc, AffineVariety, ArcGen, MorphismPres,
    SubschemeIdeal,
};
use arcspace::series::Order;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn all_charts(field: Field) -> Vec<Chart> {
    EXAMPLE_IDS
        .iter()
        .flat_map(|id| example(id, field).unwrap().charts)
        .collect()
}

fn fields() -> [Field; 3] {
    [Field::Rational, Field::prime(5).unwrap(), Field::prime(7).unwrap()]
}

/// Reverses the source coordinates of a morphism.
fn reversed(f: &MorphismPres) -> MorphismPres {
    let n = f.source.ambient_dim();
    let map: Vec<usize> = (0..n).rev().collect();
    let source = AffineVariety {
        vars: f.source.vars.iter().rev().cloned().collect(),
        eqs: f.source.eqs.iter().map(|e| e.rename_vars(n, &map)).collect(),
        ..f.source.clone()
    };
    MorphismPres {
        source,
        components: f.components.iter().map(|c| c.rename_vars(n, &map)).collect(),
        ..f.clone()
    }
}

fn reversed_arc(arc: &ArcGen) -> ArcGen {
    let coords = (0..arc.ambient_dim())
        .rev()
        .map(|i| (0..=arc.degree()).map(|j| arc.coeff(i, j)).collect())
        .collect();
    ArcGen::new(arc.field, coords)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn redundant_generators_leave_the_order_unchanged(
        seed in any::<u64>(),
        mult in prop::collection::vec((0u32..3, 0u32..3, -4i64..5), 1..4),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for field in fields() {
            for chart in all_charts(field) {
                let f = &chart.morphism;
                let arc = chart.sampler.sample(field, &mut rng).assemble(field);
                let pushed = push_arc(f, &arc).unwrap();
                let target = &f.target;
                let nv = target.ambient_dim();
                let gens: Vec<MultiPoly> = (0..nv).map(|i| MultiPoly::var(field, nv, i)).collect();
                let h = MultiPoly::from_terms(
                    field,
                    nv,
                    mult.iter()
                        .map(|&(a, b, c)| {
                            let mut e = vec![0; nv];
                            e[0] = a;
                            e[nv - 1] += b;
                            (e, field.from_i64(c))
                        })
                        .collect(),
                );
                let base = SubschemeIdeal::new("m", &target.name, gens.clone());
                let mut more = gens.clone();
                more.push(gens[0].mul(&h));
                more.push(gens[nv - 1].mul(&h).add(&gens[0]));
                let wider = SubschemeIdeal::new("m'", &target.name, more);
                prop_assert_eq!(ord_ideal(&pushed, &base, 40).unwrap(), ord_ideal(&pushed, &wider, 40).unwrap());
            }
        }
    }

    #[test]
    fn pushing_commutes_with_truncation(seed in any::<u64>(), level in 0usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for field in fields() {
            for chart in all_charts(field) {
                let f = &chart.morphism;
                let arc = chart.sampler.sample(field, &mut rng).assemble(field);
                let a = push_jet(f, &truncate_arc(&arc, level)).unwrap();
                let b = truncate_arc(&push_arc(f, &arc).unwrap(), level);
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn smooth_source_charts_have_e_equal_c(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for field in fields() {
            for chart in all_charts(field).into_iter().filter(|c| c.smooth) {
                let f = &chart.morphism;
                let arc = chart.sampler.sample(field, &mut rng).assemble(field);
                let r = mather_discrepancy(f, &arc).unwrap();
                let jac_f = jacobian_ideal_of_morphism(f).unwrap();
                prop_assert_eq!(ord_ideal(&arc, &jac_f, 64).unwrap(), Order::Finite(r.c));
                prop_assert_eq!(r.e, r.c);
                prop_assert_eq!(r.a, 0);
            }
        }
    }

    #[test]
    fn discrepancy_is_independent_of_precision_and_coordinate_order(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for field in fields() {
            for chart in all_charts(field) {
                let f = &chart.morphism;
                let arc = chart.sampler.sample(field, &mut rng).assemble(field);
                let r = mather_discrepancy(f, &arc).unwrap();
                let p = *r.precisions.last().unwrap();
                for extra in [p + 7, 2 * p + 3] {
                    let tr = transition_at(f, &arc.expand(extra), extra).unwrap().unwrap();
                    prop_assert_eq!(tr.certified_e(), Some(r.e));
                }
                let flipped = mather_discrepancy(&reversed(f), &reversed_arc(&arc)).unwrap();
                prop_assert_eq!((flipped.e, flipped.a, flipped.b, flipped.c), (r.e, r.a, r.b, r.c));
            }
        }
    }

    #[test]
    fn invariant_total_matches_the_jacobian_order(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for field in fields() {
            for chart in all_charts(field) {
                let arc = chart.sampler.sample(field, &mut rng).assemble(field);
                let src = &chart.morphism.source;
                let r = mather_discrepancy(&chart.morphism, &arc).unwrap();
                let jac = jacobian_ideal(src).unwrap();
                prop_assert_eq!(ord_ideal(&arc, &jac, 64).unwrap(), Order::Finite(r.a));
                prop_assert!(r.bounds_hold());
            }
        }
    }
}

#[test]
fn truncation_tower_is_coherent() {
    let field = Field::prime(3).unwrap();
    let cusp = AffineVariety::new("cusp", field, &["x", "y"], &["y^2 - x^3"], 1).unwrap();
    let jets = enumerate_jets(&cusp, 4, &EnumConfig::default()).unwrap();
    for j in jets.jets() {
        for n in 0..=4 {
            let to_n = truncate_jet(&j, n).unwrap();
            for m in 0..=n {
                assert_eq!(truncate_jet(&to_n, m).unwrap(), truncate_jet(&j, m).unwrap());
            }
        }
    }
    for n in 0..4 {
        let lower = enumerate_jets(&cusp, n, &EnumConfig::default()).unwrap();
        for j in jets.jets() {
            assert!(lower.contains(&truncate_jet(&j, n).unwrap()));
        }
    }
}
