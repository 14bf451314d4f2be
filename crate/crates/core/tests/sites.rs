use std::sync::Arc;

use ordsite::bridge::construct_g;
use ordsite::fixtures;
use ordsite::ogpd::enumerate_double_functors;
use ordsite::sheaves::{
    enumerate_presheaves, find_isomorphism, is_sheaf_grothendieck, presheaf_transfer_l_inverse, transfer_check, CANDIDATE_LIMIT,
};
use ordsite::sites::*;
use ordsite::topology::{EhresmannTopology, GrothendieckTopology};
use ordsite::{DoublePresheaf, Error, FiniteCategory, Functor, OrderedGroupoid, Presheaf};

fn all_functors(c: &Arc<FiniteCategory>, d: &Arc<FiniteCategory>) -> Vec<Functor> {
    let mut out = Vec::new();
    let objs: Vec<Vec<usize>> = vec![d.objects().collect(); c.object_count()];
    let arrs: Vec<Vec<usize>> = vec![d.arrows().collect(); c.arrow_count()];
    for om in cartesian(&objs) {
        for am in cartesian(&arrs) {
            if let Ok(f) = Functor::new(c.clone(), d.clone(), om.clone(), am) {
                out.push(f);
            }
        }
    }
    out
}

fn cartesian(choices: &[Vec<usize>]) -> Vec<Vec<usize>> {
    choices.iter().fold(vec![vec![]], |acc, xs| {
        acc.into_iter().flat_map(|p| xs.iter().map(move |&x| [p.clone(), vec![x]].concat())).collect()
    })
}

fn g_topologies(c: &Arc<FiniteCategory>) -> Vec<GrothendieckTopology> {
    let mut v = vec![GrothendieckTopology::trivial(c.clone()), GrothendieckTopology::maximal(c.clone()).unwrap()];
    v.extend(fixtures::grothendieck_topologies().into_iter().map(|(_, j)| j).filter(|j| **j.category() == **c));
    v.dedup();
    v
}

fn e_topologies(g: &Arc<OrderedGroupoid>) -> Vec<EhresmannTopology> {
    let mut v = vec![EhresmannTopology::trivial(g.clone()), EhresmannTopology::maximal(g.clone()).unwrap()];
    v.extend(fixtures::ehresmann_topologies().into_iter().map(|(_, t)| t).filter(|t| **t.groupoid() == **g));
    v.dedup();
    v
}

#[test]
fn covering_preservation_is_reflected_by_l_and_g() {
    for (name, m) in fixtures::ehresmann_site_morphisms() {
        let (lm, _, _) = l_site_morphism(&m).unwrap();
        assert_eq!(is_covering_preserving_e(&m).is_ok(), is_covering_preserving_g(&lm).is_ok(), "{name}");
    }
    for (name, f) in fixtures::grothendieck_site_morphisms() {
        let gf = g_site_morphism(&f).unwrap();
        assert_eq!(is_covering_preserving_g(&f).is_ok(), is_covering_preserving_e(&gf).is_ok(), "{name}");
    }
}

#[test]
fn every_double_functor_between_small_groupoids() {
    let names = ["pt", "z2", "int", "iz2", "two"];
    let gs: Vec<_> = fixtures::groupoids().into_iter().filter(|(n, _)| names.contains(n)).collect();
    let mut seen = 0;
    for (_, g) in &gs {
        for (_, h) in &gs {
            for m in enumerate_double_functors(g, h).unwrap() {
                for s in e_topologies(g) {
                    for t in e_topologies(h) {
                        let m = EhresmannSiteMorphism::new(m.clone(), s.clone(), t).unwrap();
                        let (lm, _, _) = l_site_morphism(&m).unwrap();
                        assert_eq!(check_es_conditions(&m).as_array(), check_gs_conditions(&lm).as_array());
                        assert_eq!(is_covering_preserving_e(&m).is_ok(), is_covering_preserving_g(&lm).is_ok());
                        let flat = is_covering_flat_e(&m, Shapes::Canonical).unwrap().flat;
                        assert_eq!(flat, is_covering_flat_e(&m, Shapes::Oracle(3)).unwrap().flat);
                        if flat {
                            assert!(is_covering_flat_g(&lm, Shapes::Canonical).unwrap().flat);
                        }
                        seen += 1;
                    }
                }
            }
        }
    }
    assert!(seen > 100, "{seen}");
}

#[test]
fn every_functor_between_small_categories() {
    let cats = fixtures::categories();
    let mut site_morphisms = 0;
    for (_, c) in &cats {
        for (_, d) in &cats {
            for f in all_functors(c, d) {
                for j in g_topologies(c) {
                    for k in g_topologies(d) {
                        let m = GrothendieckSiteMorphism::new(f.clone(), j.clone(), k).unwrap();
                        let gm = g_site_morphism(&m).unwrap();
                        let cp = is_covering_preserving_g(&m).is_ok();
                        assert_eq!(cp, is_covering_preserving_e(&gm).is_ok());
                        let flat = is_covering_flat_g(&m, Shapes::Canonical).unwrap().flat;
                        assert_eq!(flat, is_covering_flat_g(&m, Shapes::Oracle(3)).unwrap().flat);
                        if flat {
                            assert!(is_covering_flat_e(&gm, Shapes::Canonical).unwrap().flat);
                        }
                        if cp && flat {
                            assert!(comparison_verdict_g(&m, 2).unwrap().agrees);
                            site_morphisms += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(site_morphisms > 20, "{site_morphisms}");
}

#[test]
fn induced_functor_on_identity_is_identity() {
    let (_, j) = fixtures::grothendieck_topologies().into_iter().find(|(n, _)| *n == "arr_a").unwrap();
    let id = GrothendieckSiteMorphism::identity(&j);
    for p in sheaf_universe(&j, 2).unwrap() {
        assert_eq!(induced_sheaf_functor(&id, &p).unwrap(), p);
    }
}

#[test]
fn constant_sheaf_pulls_back_to_constant() {
    let arr = Arc::new(fixtures::arrow_category());
    let pt = Arc::new(fixtures::terminal_category());
    let (_, m) = fixtures::grothendieck_site_morphisms().into_iter().find(|(n, _)| n == "arr_to_pt").unwrap();
    let q = induced_sheaf_functor(&m, &Presheaf::constant(pt, &["x", "y"])).unwrap();
    assert_eq!(q, Presheaf::constant(arr, &["x", "y"]));
}

#[test]
fn induced_functor_rejects_bad_input() {
    let (_, m) = fixtures::grothendieck_site_morphisms().into_iter().find(|(n, _)| n == "pt_to_arr_a").unwrap();
    let arr = m.target().category().clone();
    assert!(matches!(induced_sheaf_functor(&m, &Presheaf::constant(arr, &["x"])), Err(Error::NotASiteMorphism(_))));

    let (_, j) = fixtures::grothendieck_topologies().into_iter().find(|(n, _)| *n == "arr_a").unwrap();
    let id = GrothendieckSiteMorphism::identity(&j);
    let arr = j.category().clone();
    let b = arr.object_ix("B").unwrap();
    let mut raw = Presheaf::representable(arr.clone(), b).to_raw();
    raw.values.get_mut(&"B".into()).unwrap().push("extra".into());
    raw.actions.get_mut(&"a".into()).unwrap().insert("extra".into(), "a".into());
    let not_sheaf = Presheaf::from_raw(arr, &raw).unwrap();
    assert!(!is_sheaf_grothendieck(&not_sheaf, &j).unwrap().is_sheaf);
    assert!(matches!(induced_sheaf_functor(&id, &not_sheaf), Err(Error::NotASheaf(_))));
}

#[test]
fn eta_pullback_matches_transfer() {
    for (_, j) in fixtures::grothendieck_topologies() {
        let m = eta_site_morphism(&j).unwrap();
        let gg = construct_g(j.category()).unwrap();
        let lg = ordsite::bridge::construct_l(&gg.groupoid).unwrap();
        for p in sheaf_universe(m.target(), 2).unwrap() {
            let pulled = induced_sheaf_functor(&m, &p).unwrap();
            let psi: DoublePresheaf = presheaf_transfer_l_inverse(&p, &lg).unwrap();
            let checked = transfer_check(&psi, &gg).unwrap();
            assert!(find_isomorphism(&pulled, &checked).unwrap().is_some());
        }
    }
}

#[test]
fn induced_double_sheaf_functor_along_kappa() {
    for (_, t) in fixtures::ehresmann_topologies() {
        if t.groupoid().find_max_objects().is_err() {
            continue;
        }
        let m = kappa_site_morphism(&t).unwrap();
        let l = ordsite::bridge::construct_l(t.groupoid()).unwrap();
        let j = ordsite::topology::ehresmann_to_grothendieck(&t, &l).unwrap();
        for p in enumerate_presheaves(&l.category, 2, CANDIDATE_LIMIT).unwrap() {
            if !is_sheaf_grothendieck(&p, &j).unwrap().is_sheaf {
                continue;
            }
            let f = presheaf_transfer_l_inverse(&p, &l).unwrap();
            let pulled = induced_double_sheaf_functor(&m, &f).unwrap();
            assert_eq!(pulled.base(), m.source().groupoid());
        }
    }
}

#[test]
fn cp_and_flatness_of_eta_and_kappa_sites() {
    for (name, j) in fixtures::grothendieck_topologies() {
        let m = eta_site_morphism(&j).unwrap();
        assert!(is_covering_preserving_g(&m).is_ok(), "{name}");
        assert!(is_covering_flat_g(&m, Shapes::Canonical).unwrap().flat, "{name}");
        assert!(check_gs_conditions(&m).all(), "{name}");
    }
    for (name, m) in fixtures::ehresmann_site_morphisms().into_iter().filter(|(n, _)| n.starts_with("kappa")) {
        assert!(check_es_conditions(&m).all(), "{name}");
        assert!(is_covering_flat_e(&m, Shapes::Canonical).unwrap().flat, "{name}");
    }
}

#[test]
fn failing_conditions_come_with_witnesses() {
    let (_, m) = fixtures::ehresmann_site_morphisms().into_iter().find(|(n, _)| n == "pt_to_two").unwrap();
    let c = check_es_conditions(&m);
    let f = c.locally_surjective.unwrap_err();
    assert_eq!(f.at, vec!["y".into()]);
    let (_, m) = fixtures::grothendieck_site_morphisms().into_iter().find(|(n, _)| n == "id_arr_a_to_coarse").unwrap();
    let f = is_covering_preserving_g(&m).unwrap_err();
    assert_eq!(f.at, vec!["a".into()]);
}
