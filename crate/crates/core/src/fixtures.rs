//! The small fixture corpus: categories, ordered groupoids, topologies and
//! site morphisms used by tests, benchmarks and the CLI examples.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::fincat::{validate_category, FiniteCategory, Functor, RawCategory, RawFunctorMaps};
use crate::id::Id;
use crate::ogpd::{validate_ordered_groupoid, DoubleFunctor, OrderedGroupoid, RawOrderedGroupoid};
use crate::sheaves::Presheaf;
use crate::sites::{eta_site_morphism, kappa_site_morphism, EhresmannSiteMorphism, GrothendieckSiteMorphism};
use crate::topology::{EhresmannTopology, GrothendieckTopology};

fn ids(xs: &[&str]) -> Vec<Id> {
    xs.iter().map(|&s| Id::from(s)).collect()
}

fn triples(xs: &[(&str, &str, &str)]) -> Vec<(Id, Id, Id)> {
    xs.iter().map(|&(a, b, c)| (a.into(), b.into(), c.into())).collect()
}

fn pairs(xs: &[(&str, &str)]) -> Vec<(Id, Id)> {
    xs.iter().map(|&(a, b)| (a.into(), b.into())).collect()
}

fn map(xs: &[(&str, &str)]) -> BTreeMap<Id, Id> {
    pairs(xs).into_iter().collect()
}

fn raw_cat(name: &str, objects: &[&str], arrows: &[(&str, &str, &str)], identities: &[(&str, &str)], compose: &[(&str, &str, &str)]) -> RawCategory {
    RawCategory {
        name: Some(name.into()),
        objects: ids(objects),
        arrows: triples(arrows),
        identities: map(identities),
        compose: triples(compose),
    }
}

pub fn terminal_category_raw() -> RawCategory {
    raw_cat("pt", &["*"], &[("1", "*", "*")], &[("*", "1")], &[])
}

pub fn z2_category_raw() -> RawCategory {
    raw_cat("z2", &["*"], &[("e", "*", "*"), ("s", "*", "*")], &[("*", "e")], &[("s", "s", "e")])
}

/// `A → B` with one nonidentity arrow `a`.
pub fn arrow_category_raw() -> RawCategory {
    raw_cat("arr", &["A", "B"], &[("1A", "A", "A"), ("1B", "B", "B"), ("a", "A", "B")], &[("A", "1A"), ("B", "1B")], &[])
}

/// `u, v : A → B` and `z : B → C` with `z u = z v`; not left-cancellative.
pub fn parallel_category_raw() -> RawCategory {
    raw_cat(
        "par",
        &["A", "B", "C"],
        &[("1A", "A", "A"), ("1B", "B", "B"), ("1C", "C", "C"), ("u", "A", "B"), ("v", "A", "B"), ("z", "B", "C"), ("w", "A", "C")],
        &[("A", "1A"), ("B", "1B"), ("C", "1C")],
        &[("z", "u", "w"), ("z", "v", "w")],
    )
}

/// Two objects and their identities.
pub fn discrete_category_raw() -> RawCategory {
    raw_cat("disc2", &["x", "y"], &[("1x", "x", "x"), ("1y", "y", "y")], &[("x", "1x"), ("y", "1y")], &[])
}

fn cat(raw: RawCategory) -> FiniteCategory {
    validate_category(&raw).expect("fixture category")
}

pub fn terminal_category() -> FiniteCategory {
    cat(terminal_category_raw())
}

pub fn z2_category() -> FiniteCategory {
    cat(z2_category_raw())
}

pub fn arrow_category() -> FiniteCategory {
    cat(arrow_category_raw())
}

pub fn parallel_category() -> FiniteCategory {
    cat(parallel_category_raw())
}

pub fn discrete_category() -> FiniteCategory {
    cat(discrete_category_raw())
}

/// The left-cancellative fixture categories.
pub fn categories() -> Vec<(&'static str, Arc<FiniteCategory>)> {
    vec![
        ("pt", Arc::new(terminal_category())),
        ("z2", Arc::new(z2_category())),
        ("arr", Arc::new(arrow_category())),
        ("disc2", Arc::new(discrete_category())),
    ]
}

pub fn terminal_groupoid_raw() -> RawOrderedGroupoid {
    RawOrderedGroupoid {
        name: Some("pt".into()),
        objects: ids(&["*"]),
        harrows: triples(&[("1", "*", "*")]),
        identities: map(&[("*", "1")]),
        ..Default::default()
    }
}

pub fn z2_groupoid_raw() -> RawOrderedGroupoid {
    RawOrderedGroupoid {
        name: Some("z2".into()),
        objects: ids(&["*"]),
        harrows: triples(&[("e", "*", "*"), ("s", "*", "*")]),
        identities: map(&[("*", "e")]),
        inverses: map(&[("s", "s")]),
        ..Default::default()
    }
}

/// The poset `0 ≤ 1` with identity arrows only.
pub fn interval_poset_raw() -> RawOrderedGroupoid {
    RawOrderedGroupoid {
        name: Some("int".into()),
        objects: ids(&["0", "1"]),
        harrows: triples(&[("i0", "0", "0"), ("i1", "1", "1")]),
        identities: map(&[("0", "i0"), ("1", "i1")]),
        obj_order: pairs(&[("0", "1")]),
        ..Default::default()
    }
}

/// Two copies of `Z/2` at `0 ≤ 1`, with `s0 ≤ s1`.
pub fn interval_z2_raw() -> RawOrderedGroupoid {
    RawOrderedGroupoid {
        name: Some("iz2".into()),
        objects: ids(&["0", "1"]),
        harrows: triples(&[("e0", "0", "0"), ("e1", "1", "1"), ("s0", "0", "0"), ("s1", "1", "1")]),
        identities: map(&[("0", "e0"), ("1", "e1")]),
        inverses: map(&[("s0", "s0"), ("s1", "s1")]),
        obj_order: pairs(&[("0", "1")]),
        arr_order: pairs(&[("s0", "s1")]),
        ..Default::default()
    }
}

/// The chain `0 ≤ 1 ≤ 2`.
pub fn chain_raw() -> RawOrderedGroupoid {
    RawOrderedGroupoid {
        name: Some("chain".into()),
        objects: ids(&["0", "1", "2"]),
        harrows: triples(&[("i0", "0", "0"), ("i1", "1", "1"), ("i2", "2", "2")]),
        identities: map(&[("0", "i0"), ("1", "i1"), ("2", "i2")]),
        obj_order: pairs(&[("0", "1"), ("1", "2")]),
        ..Default::default()
    }
}

/// `a ≤ b`, `a ≤ c` with `b`, `c` incomparable.
pub fn v_poset_raw() -> RawOrderedGroupoid {
    RawOrderedGroupoid {
        name: Some("vee".into()),
        objects: ids(&["a", "b", "c"]),
        harrows: triples(&[("1a", "a", "a"), ("1b", "b", "b"), ("1c", "c", "c")]),
        identities: map(&[("a", "1a"), ("b", "1b"), ("c", "1c")]),
        obj_order: pairs(&[("a", "b"), ("a", "c")]),
        ..Default::default()
    }
}

/// Two objects, identity arrows only, no order.
pub fn discrete_pair_raw() -> RawOrderedGroupoid {
    RawOrderedGroupoid {
        name: Some("two".into()),
        objects: ids(&["x", "y"]),
        harrows: triples(&[("1x", "x", "x"), ("1y", "y", "y")]),
        identities: map(&[("x", "1x"), ("y", "1y")]),
        ..Default::default()
    }
}

/// `Z/2` ordered with `s ≤ e`; violates the ordered groupoid axioms.
pub fn bad_z2_raw() -> RawOrderedGroupoid {
    let mut raw = z2_groupoid_raw();
    raw.name = Some("bad_z2".into());
    raw.arr_order = pairs(&[("s", "e")]);
    raw
}

/// The interval groupoid with `s0 ≤ s1` dropped, so `s1` has no restriction.
pub fn missing_restriction_raw() -> RawOrderedGroupoid {
    let mut raw = interval_z2_raw();
    raw.name = Some("no_restriction".into());
    raw.arr_order.clear();
    raw
}

fn ogpd(raw: RawOrderedGroupoid) -> OrderedGroupoid {
    validate_ordered_groupoid(&raw).expect("fixture ordered groupoid")
}

pub fn terminal_groupoid() -> OrderedGroupoid {
    ogpd(terminal_groupoid_raw())
}

pub fn z2_groupoid() -> OrderedGroupoid {
    ogpd(z2_groupoid_raw())
}

pub fn interval_poset() -> OrderedGroupoid {
    ogpd(interval_poset_raw())
}

pub fn interval_z2() -> OrderedGroupoid {
    ogpd(interval_z2_raw())
}

pub fn chain() -> OrderedGroupoid {
    ogpd(chain_raw())
}

pub fn v_poset() -> OrderedGroupoid {
    ogpd(v_poset_raw())
}

pub fn discrete_pair() -> OrderedGroupoid {
    ogpd(discrete_pair_raw())
}

/// The hand-written fixture ordered groupoids.
pub fn groupoids() -> Vec<(&'static str, Arc<OrderedGroupoid>)> {
    vec![
        ("pt", Arc::new(terminal_groupoid())),
        ("z2", Arc::new(z2_groupoid())),
        ("int", Arc::new(interval_poset())),
        ("iz2", Arc::new(interval_z2())),
        ("chain", Arc::new(chain())),
        ("vee", Arc::new(v_poset())),
        ("two", Arc::new(discrete_pair())),
    ]
}

/// Hand-written groupoids together with `G` of every fixture category.
pub fn groupoids_with_g_images() -> Vec<(String, Arc<OrderedGroupoid>)> {
    let mut out: Vec<(String, Arc<OrderedGroupoid>)> = groupoids().into_iter().map(|(n, g)| (n.to_string(), g)).collect();
    for (n, c) in categories() {
        let g = crate::bridge::construct_g(&c).expect("fixture categories are left-cancellative");
        out.push((format!("G({n})"), g.groupoid));
    }
    out
}

fn functor(source: &Arc<FiniteCategory>, target: &Arc<FiniteCategory>, objects: &[(&str, &str)], arrows: &[(&str, &str)]) -> Functor {
    Functor::from_maps(source.clone(), target.clone(), &RawFunctorMaps { objects: map(objects), arrows: map(arrows) }).expect("fixture functor")
}

fn double_functor(
    source: &Arc<OrderedGroupoid>,
    target: &Arc<OrderedGroupoid>,
    objects: &[(&str, &str)],
    arrows: &[(&str, &str)],
) -> DoubleFunctor {
    DoubleFunctor::from_maps(source.clone(), target.clone(), &RawFunctorMaps { objects: map(objects), arrows: map(arrows) })
        .expect("fixture double functor")
}

fn g_topology(c: &Arc<FiniteCategory>, generators: &[(&str, &[&str])]) -> GrothendieckTopology {
    let gens: Vec<_> = generators
        .iter()
        .map(|&(o, arrows)| (c.object_ix(o).unwrap(), arrows.iter().map(|&a| c.arrow_ix(a).unwrap()).collect()))
        .collect();
    GrothendieckTopology::generate(c.clone(), &gens).expect("fixture topology")
}

fn e_topology(g: &Arc<OrderedGroupoid>, generators: &[(&str, &[&str])]) -> EhresmannTopology {
    let gens: Vec<_> = generators
        .iter()
        .map(|&(o, below)| (g.object_ix(o).unwrap(), below.iter().map(|&b| g.object_ix(b).unwrap()).collect()))
        .collect();
    EhresmannTopology::generate(g.clone(), &gens).expect("fixture topology")
}

/// Nontrivial Grothendieck topologies on the fixture categories.
pub fn grothendieck_topologies() -> Vec<(&'static str, GrothendieckTopology)> {
    let pt = Arc::new(terminal_category());
    let z2 = Arc::new(z2_category());
    let arr = Arc::new(arrow_category());
    vec![
        ("pt_empty", g_topology(&pt, &[("*", &[])])),
        ("z2_empty", g_topology(&z2, &[("*", &[])])),
        ("arr_a", g_topology(&arr, &[("B", &["a"])])),
        ("arr_empty_a", g_topology(&arr, &[("A", &[])])),
        ("arr_max", GrothendieckTopology::maximal(arr).expect("fixture topology")),
    ]
}

/// Nontrivial Ehresmann topologies on the fixture groupoids.
pub fn ehresmann_topologies() -> Vec<(&'static str, EhresmannTopology)> {
    let pt = Arc::new(terminal_groupoid());
    let int = Arc::new(interval_poset());
    let iz2 = Arc::new(interval_z2());
    let chain = Arc::new(chain());
    let vee = Arc::new(v_poset());
    vec![
        ("pt_empty", e_topology(&pt, &[("*", &[])])),
        ("int_0", e_topology(&int, &[("1", &["0"])])),
        ("iz2_0", e_topology(&iz2, &[("1", &["0"])])),
        ("chain_1", e_topology(&chain, &[("2", &["1"])])),
        ("chain_0", e_topology(&chain, &[("1", &["0"])])),
        ("vee_bc", e_topology(&vee, &[("b", &["a"]), ("c", &["a"])])),
    ]
}

/// Grothendieck site morphisms, covering both outcomes of every check.
pub fn grothendieck_site_morphisms() -> Vec<(String, GrothendieckSiteMorphism)> {
    let pt = Arc::new(terminal_category());
    let z2 = Arc::new(z2_category());
    let arr = Arc::new(arrow_category());
    let disc = Arc::new(discrete_category());
    let triv = GrothendieckTopology::trivial;
    let site = |f: Functor| {
        let (s, t) = (f.source().clone(), f.target().clone());
        GrothendieckSiteMorphism::new(f, triv(s), triv(t)).expect("fixture site morphism")
    };
    let arr_a = g_topology(&arr, &[("B", &["a"])]);
    let mut out = vec![
        ("id_arr_a".to_string(), GrothendieckSiteMorphism::identity(&arr_a)),
        (
            "id_arr_coarse_to_max".into(),
            GrothendieckSiteMorphism::new(Functor::identity(&arr), triv(arr.clone()), GrothendieckTopology::maximal(arr.clone()).unwrap())
                .unwrap(),
        ),
        ("id_arr_a_to_coarse".into(), GrothendieckSiteMorphism::new(Functor::identity(&arr), arr_a.clone(), triv(arr.clone())).unwrap()),
        (
            "pt_to_arr_a_max".into(),
            GrothendieckSiteMorphism::new(
                functor(&pt, &arr, &[("*", "A")], &[("1", "1A")]),
                triv(pt.clone()),
                GrothendieckTopology::maximal(arr.clone()).unwrap(),
            )
            .unwrap(),
        ),
        ("arr_to_pt".into(), site(functor(&arr, &pt, &[("A", "*"), ("B", "*")], &[("1A", "1"), ("1B", "1"), ("a", "1")]))),
        ("pt_to_arr_b".into(), site(functor(&pt, &arr, &[("*", "B")], &[("1", "1B")]))),
        ("pt_to_arr_a".into(), site(functor(&pt, &arr, &[("*", "A")], &[("1", "1A")]))),
        ("disc2_to_pt".into(), site(functor(&disc, &pt, &[("x", "*"), ("y", "*")], &[("1x", "1"), ("1y", "1")]))),
        ("z2_to_pt".into(), site(functor(&z2, &pt, &[("*", "*")], &[("e", "1"), ("s", "1")]))),
        ("pt_to_z2".into(), site(functor(&pt, &z2, &[("*", "*")], &[("1", "e")]))),
    ];
    for (name, j) in grothendieck_topologies() {
        out.push((format!("eta_{name}"), eta_site_morphism(&j).expect("fixture eta site")));
    }
    out
}

/// Ehresmann site morphisms, with at least one failure of each local condition.
pub fn ehresmann_site_morphisms() -> Vec<(String, EhresmannSiteMorphism)> {
    let pt = Arc::new(terminal_groupoid());
    let z2 = Arc::new(z2_groupoid());
    let int = Arc::new(interval_poset());
    let iz2 = Arc::new(interval_z2());
    let two = Arc::new(discrete_pair());
    let triv = EhresmannTopology::trivial;
    let site = |m: DoubleFunctor| {
        let (s, t) = (m.source().clone(), m.target().clone());
        EhresmannSiteMorphism::new(m, triv(s), triv(t)).expect("fixture site morphism")
    };
    let int_0 = e_topology(&int, &[("1", &["0"])]);
    let iz2_0 = e_topology(&iz2, &[("1", &["0"])]);
    let mut out = vec![
        ("id_int_0".to_string(), EhresmannSiteMorphism::identity(&int_0)),
        ("id_iz2_0".into(), EhresmannSiteMorphism::identity(&iz2_0)),
        (
            "id_int_coarse_to_max".into(),
            EhresmannSiteMorphism::new(DoubleFunctor::identity(&int), triv(int.clone()), EhresmannTopology::maximal(int.clone()).unwrap())
                .unwrap(),
        ),
        ("id_int_0_to_coarse".into(), EhresmannSiteMorphism::new(DoubleFunctor::identity(&int), int_0.clone(), triv(int.clone())).unwrap()),
        (
            "pt_to_int_0_covered".into(),
            EhresmannSiteMorphism::new(double_functor(&pt, &int, &[("*", "0")], &[("1", "i0")]), triv(pt.clone()), int_0.clone()).unwrap(),
        ),
        ("pt_to_z2".into(), site(double_functor(&pt, &z2, &[("*", "*")], &[("1", "e")]))),
        ("z2_to_pt".into(), site(double_functor(&z2, &pt, &[("*", "*")], &[("e", "1"), ("s", "1")]))),
        ("pt_to_two".into(), site(double_functor(&pt, &two, &[("*", "x")], &[("1", "1x")]))),
        ("two_to_pt".into(), site(double_functor(&two, &pt, &[("x", "*"), ("y", "*")], &[("1x", "1"), ("1y", "1")]))),
        ("pt_to_int_0".into(), site(double_functor(&pt, &int, &[("*", "0")], &[("1", "i0")]))),
        ("pt_to_int_1".into(), site(double_functor(&pt, &int, &[("*", "1")], &[("1", "i1")]))),
        ("int_to_pt".into(), site(double_functor(&int, &pt, &[("0", "*"), ("1", "*")], &[("i0", "1"), ("i1", "1")]))),
        (
            "iz2_to_z2".into(),
            site(double_functor(&iz2, &z2, &[("0", "*"), ("1", "*")], &[("e0", "e"), ("e1", "e"), ("s0", "s"), ("s1", "s")])),
        ),
        ("z2_to_iz2".into(), site(double_functor(&z2, &iz2, &[("*", "1")], &[("e", "e1"), ("s", "s1")]))),
    ];
    for (name, t) in ehresmann_topologies() {
        if t.groupoid().find_max_objects().is_ok() {
            out.push((format!("kappa_{name}"), kappa_site_morphism(&t).expect("fixture kappa site")));
        }
    }
    out
}

/// A few presheaves on the arrow category.
pub fn arrow_presheaves() -> Vec<(&'static str, Presheaf)> {
    let arr = Arc::new(arrow_category());
    let b = arr.object_ix("B").unwrap();
    vec![
        ("constant2", Presheaf::constant(arr.clone(), &["p", "q"])),
        ("empty", Presheaf::constant(arr.clone(), &[])),
        ("yoneda_b", Presheaf::representable(arr, b)),
    ]
}
