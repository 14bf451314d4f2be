use std::sync::Arc;

use ordsite::bridge::{construct_g, construct_gl, construct_l, g_on_2cell, g_on_morphism, gl_on_morphism, l_on_2cell, l_on_morphism};
use ordsite::fixtures;
use ordsite::ogpd::{enumerate_double_functors, LambdaTransformation};
use ordsite::{find_natural_isomorphism, DoubleFunctor, FiniteCategory, Functor, NaturalTransformation, OrderedGroupoid};

fn all_functors(c: &Arc<FiniteCategory>, d: &Arc<FiniteCategory>) -> Vec<Functor> {
    let cartesian = |n: usize, xs: Vec<usize>| {
        (0..n).fold(vec![vec![]], |acc: Vec<Vec<usize>>, _| {
            acc.into_iter().flat_map(|p| xs.iter().map(move |&x| [p.clone(), vec![x]].concat())).collect()
        })
    };
    let mut out = Vec::new();
    for om in cartesian(c.object_count(), d.objects().collect()) {
        for am in cartesian(c.arrow_count(), d.arrows().collect()) {
            if let Ok(f) = Functor::new(c.clone(), d.clone(), om.clone(), am) {
                out.push(f);
            }
        }
    }
    out
}

fn small_groupoids() -> Vec<Arc<OrderedGroupoid>> {
    let names = ["pt", "z2", "int", "iz2", "two"];
    fixtures::groupoids().into_iter().filter(|(n, _)| names.contains(n)).map(|(_, g)| g).collect()
}

#[test]
fn l_and_gl_preserve_identities_and_composition() {
    let gs = small_groupoids();
    let ls: Vec<_> = gs.iter().map(|g| construct_l(g).unwrap()).collect();
    let gls: Vec<_> = gs.iter().map(|g| construct_gl(g).unwrap()).collect();
    let mut pairs = 0;
    for (i, g) in gs.iter().enumerate() {
        let id = DoubleFunctor::identity(g);
        assert_eq!(l_on_morphism(&id, &ls[i], &ls[i]).unwrap(), Functor::identity(&ls[i].category));
        assert_eq!(gl_on_morphism(&id, &gls[i], &gls[i]).unwrap(), DoubleFunctor::identity(&gls[i].groupoid));
        for (j, h) in gs.iter().enumerate() {
            for f in enumerate_double_functors(g, h).unwrap() {
                for (k, t) in gs.iter().enumerate() {
                    for e in enumerate_double_functors(h, t).unwrap() {
                        let fe = f.then(&e).unwrap();
                        let l = l_on_morphism(&f, &ls[i], &ls[j]).unwrap().then(&l_on_morphism(&e, &ls[j], &ls[k]).unwrap()).unwrap();
                        assert_eq!(l_on_morphism(&fe, &ls[i], &ls[k]).unwrap(), l);
                        let gl = gl_on_morphism(&f, &gls[i], &gls[j]).unwrap().then(&gl_on_morphism(&e, &gls[j], &gls[k]).unwrap()).unwrap();
                        assert_eq!(gl_on_morphism(&fe, &gls[i], &gls[k]).unwrap(), gl);
                        pairs += 1;
                    }
                }
            }
        }
    }
    assert!(pairs > 100, "{pairs}");
}

#[test]
fn g_preserves_identities_and_composition() {
    let cs: Vec<_> = fixtures::categories().into_iter().map(|(_, c)| c).filter(|c| c.is_left_cancellative().is_ok()).collect();
    let ggs: Vec<_> = cs.iter().map(|c| construct_g(c).unwrap()).collect();
    let mut pairs = 0;
    for (i, c) in cs.iter().enumerate() {
        let id = Functor::identity(c);
        assert_eq!(g_on_morphism(&id, &ggs[i], &ggs[i]).unwrap(), DoubleFunctor::identity(&ggs[i].groupoid));
        for (j, d) in cs.iter().enumerate() {
            for f in all_functors(c, d) {
                for (k, e) in cs.iter().enumerate() {
                    for h in all_functors(d, e) {
                        let composite = g_on_morphism(&f, &ggs[i], &ggs[j]).unwrap().then(&g_on_morphism(&h, &ggs[j], &ggs[k]).unwrap()).unwrap();
                        assert_eq!(g_on_morphism(&f.then(&h).unwrap(), &ggs[i], &ggs[k]).unwrap(), composite);
                        pairs += 1;
                    }
                }
            }
        }
    }
    assert!(pairs > 100, "{pairs}");
}

#[test]
fn two_cells() {
    for g in small_groupoids() {
        let l = construct_l(&g).unwrap();
        for f in enumerate_double_functors(&g, &g).unwrap() {
            let t = l_on_2cell(&LambdaTransformation::identity(&f), &l, &l).unwrap();
            assert_eq!(t, NaturalTransformation::identity(&l_on_morphism(&f, &l, &l).unwrap()));
        }
    }
    let mut isos = 0;
    for (_, c) in fixtures::categories().into_iter().filter(|(_, c)| c.is_left_cancellative().is_ok()) {
        let gg = construct_g(&c).unwrap();
        let fs = all_functors(&c, &c);
        for f in &fs {
            let gf = g_on_morphism(f, &gg, &gg).unwrap();
            assert_eq!(g_on_2cell(&NaturalTransformation::identity(f), &gg, &gg).unwrap(), LambdaTransformation::identity(&gf));
            for h in &fs {
                if let Some(theta) = find_natural_isomorphism(f, h) {
                    let t = g_on_2cell(&theta, &gg, &gg).unwrap();
                    assert_eq!(t.source(), &gf);
                    assert_eq!(t.target(), &g_on_morphism(h, &gg, &gg).unwrap());
                    isos += 1;
                }
            }
        }
    }
    assert!(isos > 0);
}
