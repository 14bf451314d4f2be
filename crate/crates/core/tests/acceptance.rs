//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use ordsite::bridge::{
    check_eta_pseudo_inverse, check_eta_weak_equivalence, check_kappa_pseudo_inverse, check_kappa_weak_equivalence,
    check_triangle_for_category, check_triangle_for_groupoid, construct_g, construct_gl, construct_l, eta, kappa, kappa_lifts,
    verify_kappa_lifts,
};
use ordsite::fincat::CategoryViolation;
use ordsite::fixtures;
use ordsite::ogpd::OgpdViolation;
use ordsite::sheaves::{
    enumerate_presheaves, is_sheaf_ehresmann, is_sheaf_grothendieck, presheaf_transfer_l, presheaf_transfer_l_inverse, transfer_check,
    transfer_tilde, RawPresheaf, CANDIDATE_LIMIT,
};
use ordsite::sites::{
    check_es_conditions, check_gs_conditions, comparison_verdict_g, eta_site_morphism, g_site_morphism, gl_site_morphism,
    is_covering_flat_e, is_covering_flat_g, l_site_morphism, Shapes,
};
use ordsite::topology::{
    all_sieves, all_vertical_sieves, ehresmann_to_grothendieck, ehresmann_to_grothendieck_on_g, grothendieck_to_ehresmann_on_g,
    grothendieck_to_ehresmann_on_l, EhresmannTopology, GrothendieckTopology,
};
use ordsite::{
    hom_ordered_groupoid, validate_category, validate_ordered_groupoid, Error, FiniteCategory, OrderedGroupoid, Presheaf,
    RawCategory,
};

type Outcome = Result<(bool, String), Error>;

fn within(ok: bool, elapsed: Duration, limit: Duration) -> bool {
    ok && elapsed < limit
}

fn revalidate_category(c: &FiniteCategory) -> bool {
    validate_category(&c.to_raw()).is_ok()
}

fn revalidate_groupoid(g: &OrderedGroupoid) -> bool {
    validate_ordered_groupoid(&g.to_raw()).is_ok()
}

fn validation_soundness() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    let mut ok = true;
    for (_, c) in fixtures::categories() {
        let e = eta(&c)?;
        ok &= revalidate_groupoid(&e.g.groupoid) && revalidate_category(&e.lg.category);
        checked += 2;
    }
    let groupoids = fixtures::groupoids_with_g_images();
    for (_, g) in &groupoids {
        ok &= revalidate_category(&construct_l(g)?.category) && revalidate_groupoid(&construct_gl(g)?.groupoid);
        checked += 2;
    }
    let small: Vec<_> = fixtures::groupoids().into_iter().filter(|(n, _)| ["pt", "z2", "int", "iz2"].contains(n)).collect();
    for (_, g) in &small {
        for (_, h) in &small {
            ok &= revalidate_groupoid(&hom_ordered_groupoid(g, h)?.groupoid);
            checked += 1;
        }
    }
    for (_, j) in fixtures::grothendieck_topologies() {
        let gg = construct_g(j.category())?;
        ok &= grothendieck_to_ehresmann_on_g(&j, &gg)?.validate()?.holds();
        checked += 1;
    }
    for (_, t) in fixtures::ehresmann_topologies() {
        ok &= ehresmann_to_grothendieck(&t, &construct_l(t.groupoid())?)?.validate()?.holds();
        checked += 1;
    }
    let arr = Arc::new(fixtures::arrow_category());
    let gg = construct_g(&arr)?;
    let l = construct_l(&gg.groupoid)?;
    for p in enumerate_presheaves(&arr, 2, CANDIDATE_LIMIT)? {
        let tilde = transfer_tilde(&p, &gg)?;
        let back = transfer_check(&tilde, &gg)?;
        let on_l = presheaf_transfer_l(&tilde, &l)?;
        ok &= Presheaf::from_raw(back.base().clone(), &back.to_raw()).is_ok()
            && Presheaf::from_raw(on_l.base().clone(), &on_l.to_raw()).is_ok()
            && presheaf_transfer_l_inverse(&on_l, &l)? == tilde;
        checked += 3;
    }

    let mut negatives = Vec::new();
    let par = Arc::new(fixtures::parallel_category());
    negatives.push(match construct_g(&par) {
        Err(Error::NotLeftCancellative(w)) => {
            w.m.as_str() == "z" && BTreeSet::from([w.g.as_str(), w.h.as_str()]) == BTreeSet::from(["u", "v"])
        }
        _ => false,
    });
    negatives.push(matches!(
        validate_ordered_groupoid(&fixtures::missing_restriction_raw()),
        Err(Error::InvalidOrderedGroupoid(v)) if v.contains(&OgpdViolation::RestrictionMissing { arrow: "s1".into(), object: "0".into() })
    ));
    negatives.push(matches!(
        validate_ordered_groupoid(&fixtures::bad_z2_raw()),
        Err(Error::InvalidOrderedGroupoid(v)) if v.iter().any(|x| matches!(x, OgpdViolation::CompositionNotMonotone { .. }))
    ));
    let mut broken: RawCategory = fixtures::arrow_category_raw();
    broken.compose.push(("a".into(), "a".into(), "a".into()));
    negatives.push(matches!(
        validate_category(&broken),
        Err(Error::InvalidCategory(v)) if v.contains(&CategoryViolation::BadCompositionDomain { g: "a".into(), f: "a".into() })
    ));
    let mut raw: RawPresheaf = Presheaf::representable(arr.clone(), 1).to_raw();
    raw.actions.values_mut().for_each(|t| t.values_mut().for_each(|x| *x = "nowhere".into()));
    negatives.push(matches!(Presheaf::from_raw(arr.clone(), &raw), Err(Error::InvalidPresheaf(_))));
    let b = arr.object_ix("B").unwrap();
    let mut covers = vec![BTreeSet::new(); 2];
    covers[0].insert(BTreeSet::from([arr.arrow_ix("1A").unwrap()]));
    covers[b].insert(arr.arrows_into(b).iter().copied().collect());
    covers[b].insert(BTreeSet::new());
    negatives.push(GrothendieckTopology::new(arr.clone(), covers)?.validate()?.stability.is_err());

    let elapsed = start.elapsed();
    let neg_ok = negatives.iter().all(|&b| b);
    Ok((
        within(ok && neg_ok, elapsed, Duration::from_secs(5)),
        format!("{checked} constructed structures revalidated, {}/{} negatives rejected, {elapsed:.2?}", negatives.iter().filter(|&&b| b).count(), negatives.len()),
    ))
}

fn eta_weak_equivalence() -> Outcome {
    let mut ok = true;
    let cats = fixtures::categories();
    for (_, c) in &cats {
        ok &= check_eta_weak_equivalence(c)?.holds();
    }
    let z2 = Arc::new(fixtures::z2_category());
    let iso = eta(&z2)?.functor.is_isomorphism();
    Ok((ok && iso, format!("{} categories, η on Z/2 an isomorphism: {iso}", cats.len())))
}

fn kappa_weak_equivalence() -> Outcome {
    let mut ok = true;
    let mut lifts_checked = 0;
    let groupoids = fixtures::groupoids_with_g_images();
    for (_, g) in &groupoids {
        ok &= check_kappa_weak_equivalence(g)?.holds();
        let k = kappa(g)?;
        let lifts = kappa_lifts(&k);
        ok &= verify_kappa_lifts(&k, &lifts);
        let gl = &k.gl;
        for (&d, l) in &lifts.objects {
            ok &= gl.decode_object(l.x) == (d, d);
        }
        for (&(c, d), l) in &lifts.vertical {
            ok &= l.x.map(|x| gl.decode_object(x)) == [(c, d), (d, d)];
        }
        for (&(b, c, d), l) in &lifts.pairs {
            ok &= l.x.map(|x| gl.decode_object(x)) == [(b, d), (c, d), (d, d)];
        }
        lifts_checked += lifts.objects.len() + lifts.vertical.len() + lifts.pairs.len();
    }
    Ok((ok, format!("{} groupoids, {lifts_checked} explicit lifts of the expected forms", groupoids.len())))
}

fn triangle_identities() -> Outcome {
    let mut ok = true;
    let cats = fixtures::categories();
    for (_, c) in &cats {
        ok &= check_triangle_for_category(c)?.holds;
    }
    let groupoids = fixtures::groupoids_with_g_images();
    for (_, g) in &groupoids {
        ok &= check_triangle_for_groupoid(g)?.holds;
    }
    Ok((ok, format!("{} categories, {} groupoids, compared on the nose", cats.len(), groupoids.len())))
}

fn pseudo_inverses() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut count = 0;
    for (_, c) in fixtures::categories() {
        let p = check_eta_pseudo_inverse(&eta(&c)?)?;
        ok &= p.holds() && p.unit_iso.as_ref().is_some_and(|t| t.is_isomorphism()) && p.counit_iso.as_ref().is_some_and(|t| t.is_isomorphism());
        count += 1;
    }
    for (_, g) in fixtures::groupoids_with_g_images() {
        if g.find_max_objects().is_err() {
            continue;
        }
        ok &= check_kappa_pseudo_inverse(&kappa(&g)?)?.holds();
        count += 1;
    }
    let elapsed = start.elapsed();
    Ok((within(ok, elapsed, Duration::from_secs(10)), format!("{count} units with explicit isomorphisms both ways, {elapsed:.2?}")))
}

fn topology_round_trips() -> Outcome {
    let mut ok = true;
    let mut g_nontrivial = 0;
    let mut e_nontrivial = 0;
    let mut js: Vec<GrothendieckTopology> = fixtures::grothendieck_topologies().into_iter().map(|(_, j)| j).collect();
    for (_, c) in fixtures::categories() {
        for a in c.objects() {
            for s in all_sieves(&c, a)? {
                js.push(GrothendieckTopology::generate(c.clone(), &[(a, s.into_iter().collect())])?);
            }
        }
    }
    for j in &js {
        let gg = construct_g(j.category())?;
        let t = grothendieck_to_ehresmann_on_g(j, &gg)?;
        ok &= ehresmann_to_grothendieck_on_g(&t, &gg)? == *j;
        g_nontrivial += usize::from(!j.is_trivial());
    }
    let mut ts: Vec<EhresmannTopology> = fixtures::ehresmann_topologies().into_iter().map(|(_, t)| t).collect();
    for (_, g) in fixtures::groupoids() {
        for a in g.objects() {
            for s in all_vertical_sieves(&g, a)? {
                ts.push(EhresmannTopology::generate(g.clone(), &[(a, s.into_iter().collect())])?);
            }
        }
    }
    for t in &ts {
        let l = construct_l(t.groupoid())?;
        let j = ehresmann_to_grothendieck(t, &l)?;
        ok &= grothendieck_to_ehresmann_on_l(&j, &l)? == *t;
        e_nontrivial += usize::from(!t.is_trivial());
    }
    Ok((
        ok && g_nontrivial >= 3 && e_nontrivial >= 3,
        format!("J_(T_J) = J on {} topologies ({g_nontrivial} nontrivial), T_(J_T) = T on {} ({e_nontrivial} nontrivial)", js.len(), ts.len()),
    ))
}

/// Every topology is generated by its own covers, so generating from every
/// set of sieves reaches all of them.
fn every_topology(c: &Arc<FiniteCategory>) -> Result<Vec<GrothendieckTopology>, Error> {
    let mut sieves = Vec::new();
    for a in c.objects() {
        for s in all_sieves(c, a)? {
            sieves.push((a, s.into_iter().collect::<Vec<_>>()));
        }
    }
    let mut out: Vec<GrothendieckTopology> = Vec::new();
    for mask in 0u32..1 << sieves.len() {
        let gens: Vec<_> = sieves.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, s)| s.clone()).collect();
        let j = GrothendieckTopology::generate(c.clone(), &gens)?;
        if !out.contains(&j) {
            out.push(j);
        }
    }
    Ok(out)
}

fn sheaf_transfer() -> Outcome {
    let arr = Arc::new(fixtures::arrow_category());
    let gg = construct_g(&arr)?;
    let lg = construct_l(&gg.groupoid)?;
    let topologies = every_topology(&arr)?;
    let phis = enumerate_presheaves(&arr, 2, CANDIDATE_LIMIT)?;
    let psis = enumerate_presheaves(&lg.category, 2, CANDIDATE_LIMIT)?
        .iter()
        .map(|p| presheaf_transfer_l_inverse(p, &lg))
        .collect::<Result<Vec<_>, _>>()?;
    let mut ok = true;
    let mut sheaves = 0;
    for j in &topologies {
        let t = grothendieck_to_ehresmann_on_g(j, &gg)?;
        for phi in &phis {
            let a = is_sheaf_grothendieck(phi, j)?.is_sheaf;
            ok &= a == is_sheaf_ehresmann(&transfer_tilde(phi, &gg)?, &t)?.is_sheaf;
            sheaves += usize::from(a);
        }
        for psi in &psis {
            let a = is_sheaf_ehresmann(psi, &t)?.is_sheaf;
            ok &= a == is_sheaf_grothendieck(&transfer_check(psi, &gg)?, j)?.is_sheaf;
            sheaves += usize::from(a);
        }
    }
    Ok((
        ok,
        format!(
            "{} topologies × ({} presheaves on arr + {} on G(arr)), {sheaves} sheaves, verdicts agree",
            topologies.len(),
            phis.len(),
            psis.len()
        ),
    ))
}

fn es_gs_equivalence() -> Outcome {
    let mut ok = true;
    let mut failing = [0usize; 4];
    let morphisms = fixtures::ehresmann_site_morphisms();
    for (_, m) in &morphisms {
        let es = check_es_conditions(m).as_array();
        let gs = check_gs_conditions(&l_site_morphism(m)?.0).as_array();
        ok &= es == gs;
        for k in 0..4 {
            failing[k] += usize::from(!es[k]);
        }
    }
    let each = failing.iter().all(|&n| n > 0);
    Ok((ok && each, format!("{} morphisms, failures per condition {failing:?}", morphisms.len())))
}

fn flatness_implications() -> Outcome {
    let mut g = (0, 0, true);
    for (_, f) in fixtures::grothendieck_site_morphisms() {
        let flat = is_covering_flat_g(&f, Shapes::Canonical)?.flat;
        let image = is_covering_flat_e(&g_site_morphism(&f)?, Shapes::Canonical)?.flat;
        if flat {
            g.0 += 1;
            g.2 &= image;
        } else {
            g.1 += 1;
        }
    }
    let mut l = (0, 0, true);
    let mut gl = (0, 0, true);
    for (_, m) in fixtures::ehresmann_site_morphisms() {
        let flat = is_covering_flat_e(&m, Shapes::Canonical)?.flat;
        let l_flat = is_covering_flat_g(&l_site_morphism(&m)?.0, Shapes::Canonical)?.flat;
        if flat {
            l.0 += 1;
            l.2 &= l_flat;
        } else {
            l.1 += 1;
        }
        if m.source().groupoid().find_max_objects().is_err() || m.target().groupoid().find_max_objects().is_err() {
            continue;
        }
        let gl_flat = is_covering_flat_e(&gl_site_morphism(&m)?, Shapes::Canonical)?.flat;
        if gl_flat {
            gl.0 += 1;
            gl.2 &= flat;
        } else {
            gl.1 += 1;
        }
    }
    let exercised = |c: &(usize, usize, bool)| c.2 && c.0 >= 2 && c.1 >= 1;
    Ok((
        exercised(&g) && exercised(&l) && exercised(&gl),
        format!(
            "F⇒G(F) {}+/{}-, M⇒L(M) {}+/{}-, GL(M)⇒M {}+/{}-",
            g.0, g.1, l.0, l.1, gl.0, gl.1
        ),
    ))
}

fn canonical_vs_oracle() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut count = 0;
    let mut diagrams = 0;
    for (_, f) in fixtures::grothendieck_site_morphisms() {
        let c = is_covering_flat_g(&f, Shapes::Canonical)?;
        let o = is_covering_flat_g(&f, Shapes::Oracle(4))?;
        ok &= c.flat == o.flat;
        diagrams += o.diagrams_checked;
        count += 1;
    }
    for (_, m) in fixtures::ehresmann_site_morphisms() {
        let c = is_covering_flat_e(&m, Shapes::Canonical)?;
        let o = is_covering_flat_e(&m, Shapes::Oracle(4))?;
        ok &= c.flat == o.flat;
        diagrams += o.diagrams_checked;
        count += 1;
    }
    let elapsed = start.elapsed();
    Ok((within(ok, elapsed, Duration::from_secs(60)), format!("{count} morphisms, {diagrams} oracle diagrams, {elapsed:.2?}")))
}

fn comparison_lemma() -> Outcome {
    let mut ok = true;
    let mut etas = 0;
    let arr = Arc::new(fixtures::arrow_category());
    let mut topologies = vec![GrothendieckTopology::trivial(arr.clone())];
    topologies.extend(fixtures::grothendieck_topologies().into_iter().map(|(_, j)| j));
    for j in &topologies {
        let v = comparison_verdict_g(&eta_site_morphism(j)?, 2)?;
        ok &= v.conditions.all() && v.full && v.faithful && v.essentially_surjective;
        etas += 1;
    }
    let (_, m) = fixtures::grothendieck_site_morphisms().into_iter().find(|(n, _)| n == "id_arr_coarse_to_max").expect("fixture");
    let v = comparison_verdict_g(&m, 2)?;
    let only_gs4 = v.conditions.as_array() == [true, true, true, false];
    let gap = only_gs4 && v.full && v.faithful && !v.essentially_surjective;
    Ok((
        ok && gap,
        format!(
            "η equivalence on {etas} sites; GS.4-only failure: full {} faithful {} essentially surjective {} ({} vs {} sheaves)",
            v.full, v.faithful, v.essentially_surjective, v.target_sheaves, v.source_sheaves
        ),
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("validation soundness", validation_soundness),
        ("eta weak equivalence", eta_weak_equivalence),
        ("kappa weak equivalence", kappa_weak_equivalence),
        ("triangle identities", triangle_identities),
        ("pseudo-inverse round trips", pseudo_inverses),
        ("topology round trips", topology_round_trips),
        ("sheaf transfer", sheaf_transfer),
        ("ES/GS equivalence", es_gs_equivalence),
        ("flatness implications", flatness_implications),
        ("canonical shapes vs oracle", canonical_vs_oracle),
        ("comparison lemma", comparison_lemma),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!ok);
        let tag = if ok { "PASS" } else { "FAIL" };
        println!("{tag} {:>2} {name}: {detail} [{:.1} ms]", i + 1, start.elapsed().as_secs_f64() * 1e3);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
