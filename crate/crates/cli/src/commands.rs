use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use ordsite::bridge::{
    check_eta_pseudo_inverse, check_kappa_pseudo_inverse, check_triangle_for_category, check_triangle_for_groupoid, construct_g, construct_l,
    eta, kappa, kappa_lifts, verify_kappa_lifts,
};
use ordsite::format::{construct, load_path, Document, Loader};
use ordsite::sheaves::{is_sheaf_ehresmann, is_sheaf_grothendieck};
use ordsite::sites::{
    check_es_conditions, check_gs_conditions, comparison_verdict_e, comparison_verdict_g, is_covering_flat_e, is_covering_flat_g,
    is_covering_preserving_e, is_covering_preserving_g, l_site_morphism, FlatnessVerdict, LocalConditions, Shapes,
};
use ordsite::topology::{ehresmann_to_grothendieck, ehresmann_to_grothendieck_on_g, grothendieck_to_ehresmann_on_g, grothendieck_to_ehresmann_on_l};
use ordsite::{check_double_weak_equivalence, check_weak_equivalence, Error};

use crate::report::Report;
use crate::{CheckKind, Options, TranslateKind};

fn outcome<T: Serialize>(r: &Result<(), T>) -> (bool, Value) {
    match r {
        Ok(()) => (true, Value::Null),
        Err(e) => (false, json!(e)),
    }
}

fn check_result<T: Serialize>(report: &mut Report, name: &str, r: &Result<(), T>) {
    let (ok, detail) = outcome(r);
    report.check(name, ok, detail);
}

fn wrong_kind(expected: &str, got: &Document) -> Error {
    Error::Format(format!("expected {expected}, got {}", got.kind()))
}

pub fn validate(input: &Path, report: &mut Report) -> Result<(), Error> {
    let doc = load_path(input)?;
    report.kind = Some(doc.kind().into());
    match &doc {
        Document::Category(c) => {
            report.check("category_laws", true, ());
            report.fact("objects", c.object_count());
            report.fact("arrows", c.arrow_count());
            report.fact("left_cancellative", c.is_left_cancellative().err().map_or(json!(true), |w| json!(w)));
        }
        Document::OrderedGroupoid(g) => {
            report.check("ordered_groupoid_axioms", true, ());
            report.fact("objects", g.object_count());
            report.fact("harrows", g.harrow_count());
            report.fact("max_objects", g.find_max_objects().is_ok());
        }
        Document::Functor(_) | Document::DoubleFunctor(_) => report.check("functor_laws", true, ()),
        Document::GrothendieckTopology(j) => {
            let v = j.validate()?;
            check_result(report, "maximal_sieve", &v.maximal);
            check_result(report, "stability", &v.stability);
            check_result(report, "transitivity", &v.transitivity);
        }
        Document::EhresmannTopology(t) => {
            let v = t.validate()?;
            check_result(report, "et1_maximal", &v.et1);
            check_result(report, "et2_stability", &v.et2);
            check_result(report, "et3_local_character", &v.et3);
        }
        Document::Presheaf(_) | Document::DoublePresheaf(_) => report.check("presheaf_laws", true, ()),
        Document::GrothendieckSite(_) | Document::EhresmannSite(_) => report.check("endpoints", true, ()),
    }
    Ok(())
}

pub fn translate(kind: TranslateKind, input: &Path, opts: &Options, report: &mut Report) -> Result<(), Error> {
    let doc = load_path(input)?;
    let out = construct(kind.name(), doc)?;
    report.kind = Some(out.kind().into());
    let value = out.to_json();
    let back = Loader::new().load_value(&value, Path::new("."))?;
    report.check("revalidated", back.to_json() == value, ());
    match &opts.out {
        Some(path) => {
            let text = serde_json::to_string_pretty(&value)?;
            std::fs::write(path, text + "\n").map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
            report.fact("out", path.display().to_string());
        }
        None => report.document = Some(value),
    }
    Ok(())
}

pub fn check(what: CheckKind, inputs: &[PathBuf], opts: &Options, report: &mut Report) -> Result<(), Error> {
    let arity = if matches!(what, CheckKind::Sheaf) { 2 } else { 1 };
    if inputs.len() != arity {
        return Err(Error::Format(format!("this check takes {arity} input file(s), got {}", inputs.len())));
    }
    let docs = inputs.iter().map(|p| load_path(p)).collect::<Result<Vec<_>, _>>()?;
    report.kind = Some(docs.iter().map(Document::kind).collect::<Vec<_>>().join(", "));
    let doc = &docs[0];
    match what {
        CheckKind::Eta => {
            let Document::Category(c) = doc else { return Err(wrong_kind("a category", doc)) };
            let e = eta(c)?;
            let weq = check_weak_equivalence(&e.functor);
            report.check("weak_equivalence", weq.holds(), &weq);
            report.fact("isomorphism", e.functor.is_isomorphism());
            let pi = check_eta_pseudo_inverse(&e)?;
            report.check("pseudo_inverse", pi.holds(), json!({"unit_iso": pi.unit_iso.is_some(), "counit_iso": pi.counit_iso.is_some()}));
        }
        CheckKind::Kappa => {
            let Document::OrderedGroupoid(g) = doc else { return Err(wrong_kind("an ordered groupoid", doc)) };
            let k = kappa(g)?;
            let weq = check_double_weak_equivalence(&k.functor);
            report.check("weak_equivalence", weq.holds(), &weq);
            let lifts = kappa_lifts(&k);
            report.check(
                "explicit_lifts",
                verify_kappa_lifts(&k, &lifts),
                json!({"objects": lifts.objects.len(), "vertical": lifts.vertical.len(), "pairs": lifts.pairs.len()}),
            );
            if g.find_max_objects().is_ok() {
                let pi = check_kappa_pseudo_inverse(&k)?;
                report.check("pseudo_inverse", pi.holds(), json!({"unit_iso": pi.unit_iso.is_some(), "counit_iso": pi.counit_iso.is_some()}));
            } else {
                report.skip("pseudo_inverse", "some object is not below a unique maximal object");
            }
        }
        CheckKind::Triangles => {
            let v = match doc {
                Document::Category(c) => check_triangle_for_category(c)?,
                Document::OrderedGroupoid(g) => check_triangle_for_groupoid(g)?,
                other => return Err(wrong_kind("a category or ordered groupoid", other)),
            };
            report.check("triangle", v.holds, &v);
        }
        CheckKind::Weq => match doc {
            Document::Functor(f) => {
                let v = check_weak_equivalence(f);
                report.check("weak_equivalence", v.holds(), &v);
            }
            Document::DoubleFunctor(f) => {
                let v = check_double_weak_equivalence(f);
                report.check("weak_equivalence", v.holds(), &v);
            }
            other => return Err(wrong_kind("a functor or double functor", other)),
        },
        CheckKind::Topology => match doc {
            Document::GrothendieckTopology(j) => {
                let v = j.validate()?;
                check_result(report, "maximal_sieve", &v.maximal);
                check_result(report, "stability", &v.stability);
                check_result(report, "transitivity", &v.transitivity);
                if j.category().is_left_cancellative().is_ok() {
                    let gg = construct_g(j.category())?;
                    let t = grothendieck_to_ehresmann_on_g(j, &gg)?;
                    report.check("translated_axioms", t.validate()?.holds(), ());
                    report.check("round_trip", ehresmann_to_grothendieck_on_g(&t, &gg)? == *j, ());
                } else {
                    report.skip("round_trip", "the category is not left-cancellative");
                }
            }
            Document::EhresmannTopology(t) => {
                let v = t.validate()?;
                check_result(report, "et1_maximal", &v.et1);
                check_result(report, "et2_stability", &v.et2);
                check_result(report, "et3_local_character", &v.et3);
                let l = construct_l(t.groupoid())?;
                let j = ehresmann_to_grothendieck(t, &l)?;
                report.check("translated_axioms", j.validate()?.holds(), ());
                report.check("round_trip", grothendieck_to_ehresmann_on_l(&j, &l)? == *t, ());
            }
            other => return Err(wrong_kind("a topology", other)),
        },
        CheckKind::Sheaf => {
            let v = match (doc, &docs[1]) {
                (Document::GrothendieckTopology(j), Document::Presheaf(p)) => is_sheaf_grothendieck(p, j)?,
                (Document::EhresmannTopology(t), Document::DoublePresheaf(p)) => is_sheaf_ehresmann(p, t)?,
                (a, b) => {
                    return Err(Error::Format(format!(
                        "expected a topology and a presheaf on the same side, got {} and {}",
                        a.kind(),
                        b.kind()
                    )))
                }
            };
            report.check("sheaf", v.is_sheaf, &v);
        }
        CheckKind::Site => match doc {
            Document::GrothendieckSite(m) => {
                check_result(report, "covering_preserving", &is_covering_preserving_g(m));
                let canonical = is_covering_flat_g(m, Shapes::Canonical)?;
                let oracle = match opts.oracle_bound {
                    Some(n) => Some(is_covering_flat_g(m, Shapes::Oracle(n))?),
                    None => None,
                };
                flatness(report, canonical, oracle);
                conditions(report, "gs", &check_gs_conditions(m));
            }
            Document::EhresmannSite(m) => {
                check_result(report, "covering_preserving", &is_covering_preserving_e(m));
                let canonical = is_covering_flat_e(m, Shapes::Canonical)?;
                let oracle = match opts.oracle_bound {
                    Some(n) => Some(is_covering_flat_e(m, Shapes::Oracle(n))?),
                    None => None,
                };
                flatness(report, canonical, oracle);
                let es = check_es_conditions(m);
                conditions(report, "es", &es);
                let (lm, _, _) = l_site_morphism(m)?;
                let gs = check_gs_conditions(&lm);
                report.check("es_matches_gs_of_l", es.as_array() == gs.as_array(), json!({"es": es.as_array(), "gs_of_l": gs.as_array()}));
            }
            other => return Err(wrong_kind("a site morphism", other)),
        },
        CheckKind::Comparison => {
            let v = match doc {
                Document::GrothendieckSite(m) => comparison_verdict_g(m, opts.sheaf_universe)?,
                Document::EhresmannSite(m) => comparison_verdict_e(m, opts.sheaf_universe)?,
                other => return Err(wrong_kind("a site morphism", other)),
            };
            report.check("claims_confirmed", v.agrees, ());
            report.fact("verdict", &v);
        }
    }
    Ok(())
}

fn flatness(report: &mut Report, canonical: FlatnessVerdict, oracle: Option<FlatnessVerdict>) {
    report.check("covering_flat", canonical.flat, &canonical.failure);
    if let Some(o) = oracle {
        report.check("oracle_agrees", o.flat == canonical.flat, json!({"oracle_flat": o.flat, "diagrams_checked": o.diagrams_checked}));
    }
}

fn conditions(report: &mut Report, prefix: &str, c: &LocalConditions) {
    let all = [&c.locally_full, &c.locally_faithful, &c.locally_surjective, &c.co_continuous];
    for (i, r) in all.into_iter().enumerate() {
        report.fact(&format!("{prefix}{}", i + 1), r.as_ref().err().map_or(json!(true), |f| json!(f)));
    }
}
