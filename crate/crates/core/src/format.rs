//! JSON documents. Every file holds one object with a `kind` tag, or a
//! `construct` object that derives a structure from other documents.
//!
//! Wherever a document refers to another (a topology to its category, a
//! functor to its endpoints) the reference is either a path, resolved
//! relative to the referring file, or an inline object.
//!
//! ```json
//! {"kind": "grothendieck_topology", "category": "arr.json", "generators": [["B", ["a"]]]}
//! {"kind": "site_morphism", "construct": "eta", "of": "arr_a.json"}
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::bridge::{construct_g, construct_gl, construct_l, eta};
use crate::error::Error;
use crate::fincat::{validate_category, ArrIx, FiniteCategory, Functor, ObjIx, RawCategory, RawFunctorMaps};
use crate::id::Id;
use crate::ogpd::{validate_ordered_groupoid, DoubleFunctor, OrderedGroupoid, RawOrderedGroupoid};
use crate::sheaves::{presheaf_transfer_l, transfer_tilde, DoublePresheaf, Presheaf, RawDoublePresheaf, RawPresheaf};
use crate::sites::{
    eta_site_morphism, g_site_morphism, gl_site_morphism, kappa_site_morphism, l_site_morphism, EhresmannSiteMorphism,
    GrothendieckSiteMorphism,
};
use crate::topology::{ehresmann_to_grothendieck, grothendieck_to_ehresmann_on_g, EhresmannTopology, GrothendieckTopology};

const MAX_DEPTH: usize = 32;

/// A loaded and validated document.
#[derive(Clone, Debug)]
pub enum Document {
    Category(Arc<FiniteCategory>),
    OrderedGroupoid(Arc<OrderedGroupoid>),
    Functor(Functor),
    DoubleFunctor(DoubleFunctor),
    GrothendieckTopology(GrothendieckTopology),
    EhresmannTopology(EhresmannTopology),
    Presheaf(Presheaf),
    DoublePresheaf(DoublePresheaf),
    GrothendieckSite(GrothendieckSiteMorphism),
    EhresmannSite(EhresmannSiteMorphism),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Category(_) => "category",
            Document::OrderedGroupoid(_) => "ordered_groupoid",
            Document::Functor(_) => "functor",
            Document::DoubleFunctor(_) => "double_functor",
            Document::GrothendieckTopology(_) => "grothendieck_topology",
            Document::EhresmannTopology(_) => "ehresmann_topology",
            Document::Presheaf(_) => "presheaf",
            Document::DoublePresheaf(_) => "double_presheaf",
            Document::GrothendieckSite(_) | Document::EhresmannSite(_) => "site_morphism",
        }
    }

    /// Self-contained JSON, with every reference inlined.
    pub fn to_json(&self) -> Value {
        match self {
            Document::Category(c) => tagged("category", json!(c.to_raw())),
            Document::OrderedGroupoid(g) => tagged("ordered_groupoid", json!(g.to_raw())),
            Document::Functor(f) => functor_json("functor", category_json(f.source()), category_json(f.target()), &f.to_maps()),
            Document::DoubleFunctor(f) => {
                functor_json("double_functor", groupoid_json(f.source()), groupoid_json(f.target()), &f.to_maps())
            }
            Document::GrothendieckTopology(j) => {
                let c = j.category();
                let covers: BTreeMap<Id, Vec<Vec<Id>>> =
                    c.objects().map(|a| (c.object_id(a).clone(), j.covers(a).map(|s| s.ids(c)).collect())).collect();
                json!({"kind": "grothendieck_topology", "category": category_json(c), "covers": covers})
            }
            Document::EhresmannTopology(t) => {
                let g = t.groupoid();
                let covers: BTreeMap<Id, Vec<Vec<Id>>> =
                    g.objects().map(|a| (g.object_id(a).clone(), t.covers(a).map(|s| s.ids(g)).collect())).collect();
                json!({"kind": "ehresmann_topology", "groupoid": groupoid_json(g), "covers": covers})
            }
            Document::Presheaf(p) => {
                let mut v = tagged("presheaf", json!(p.to_raw()));
                v["category"] = category_json(p.base());
                v
            }
            Document::DoublePresheaf(p) => {
                let mut v = tagged("double_presheaf", json!(p.to_raw()));
                v["groupoid"] = groupoid_json(p.base());
                v
            }
            Document::GrothendieckSite(m) => json!({
                "kind": "site_morphism",
                "functor": Document::Functor(m.functor().clone()).to_json(),
                "source": Document::GrothendieckTopology(m.source().clone()).to_json(),
                "target": Document::GrothendieckTopology(m.target().clone()).to_json(),
            }),
            Document::EhresmannSite(m) => json!({
                "kind": "site_morphism",
                "functor": Document::DoubleFunctor(m.functor().clone()).to_json(),
                "source": Document::EhresmannTopology(m.source().clone()).to_json(),
                "target": Document::EhresmannTopology(m.target().clone()).to_json(),
            }),
        }
    }
}

fn tagged(kind: &str, body: Value) -> Value {
    let mut map = Map::new();
    map.insert("kind".into(), kind.into());
    if let Value::Object(fields) = body {
        map.extend(fields);
    }
    Value::Object(map)
}

fn category_json(c: &FiniteCategory) -> Value {
    tagged("category", json!(c.to_raw()))
}

fn groupoid_json(g: &OrderedGroupoid) -> Value {
    tagged("ordered_groupoid", json!(g.to_raw()))
}

fn functor_json(kind: &str, source: Value, target: Value, maps: &RawFunctorMaps) -> Value {
    json!({"kind": kind, "source": source, "target": target, "objects": maps.objects, "arrows": maps.arrows})
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum RawDocument {
    Category(RawCategory),
    OrderedGroupoid(RawOrderedGroupoid),
    Functor(RawFunctorDoc),
    DoubleFunctor(RawFunctorDoc),
    GrothendieckTopology(RawTopologyDoc),
    EhresmannTopology(RawTopologyDoc),
    Presheaf(RawPresheafDoc),
    DoublePresheaf(RawDoublePresheafDoc),
    SiteMorphism(RawSiteDoc),
}

#[derive(Deserialize)]
struct RawFunctorDoc {
    source: Value,
    target: Value,
    #[serde(flatten)]
    maps: RawFunctorMaps,
}

#[derive(Deserialize)]
struct RawTopologyDoc {
    #[serde(alias = "groupoid")]
    category: Value,
    /// `trivial` or `maximal`
    preset: Option<String>,
    /// `root → [sieve]`, taken as the complete list
    covers: Option<BTreeMap<Id, Vec<Vec<Id>>>>,
    /// `[root, [generators]]`, closed under the topology axioms
    generators: Option<Vec<(Id, Vec<Id>)>>,
}

#[derive(Deserialize)]
struct RawPresheafDoc {
    category: Value,
    #[serde(flatten)]
    raw: RawPresheaf,
}

#[derive(Deserialize)]
struct RawDoublePresheafDoc {
    groupoid: Value,
    #[serde(flatten)]
    raw: RawDoublePresheaf,
}

#[derive(Deserialize)]
struct RawSiteDoc {
    functor: Value,
    source: Value,
    target: Value,
}

#[derive(Deserialize)]
struct RawConstruct {
    construct: String,
    of: Value,
    kind: Option<String>,
}

/// Loads documents, resolving references relative to the referring file.
#[derive(Default)]
pub struct Loader {
    depth: usize,
}

impl Loader {
    pub fn new() -> Self {
        Loader::default()
    }

    pub fn load_path(&mut self, path: &Path) -> Result<Document, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        let value: Value = serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        self.load_value(&value, &dir)
    }

    pub fn load_str(&mut self, text: &str, dir: &Path) -> Result<Document, Error> {
        self.load_value(&serde_json::from_str(text)?, dir)
    }

    pub fn load_value(&mut self, value: &Value, dir: &Path) -> Result<Document, Error> {
        if self.depth >= MAX_DEPTH {
            return Err(Error::Format("references nest too deeply".into()));
        }
        self.depth += 1;
        let out = self.load_inner(value, dir);
        self.depth -= 1;
        out
    }

    fn load_inner(&mut self, value: &Value, dir: &Path) -> Result<Document, Error> {
        if let Value::String(rel) = value {
            let path: PathBuf = dir.join(rel);
            return self.load_path(&path);
        }
        if value.get("construct").is_some() {
            let raw: RawConstruct = serde_json::from_value(value.clone())?;
            let of = self.load_value(&raw.of, dir)?;
            let doc = construct(&raw.construct, of)?;
            if let Some(kind) = raw.kind {
                if kind != doc.kind() {
                    return Err(Error::Format(format!("construct {} yields {}, not {kind}", raw.construct, doc.kind())));
                }
            }
            return Ok(doc);
        }
        match serde_json::from_value::<RawDocument>(value.clone())? {
            RawDocument::Category(raw) => Ok(Document::Category(Arc::new(validate_category(&raw)?))),
            RawDocument::OrderedGroupoid(raw) => Ok(Document::OrderedGroupoid(Arc::new(validate_ordered_groupoid(&raw)?))),
            RawDocument::Functor(raw) => {
                let (s, t) = (self.category(&raw.source, dir)?, self.category(&raw.target, dir)?);
                Ok(Document::Functor(Functor::from_maps(s, t, &raw.maps)?))
            }
            RawDocument::DoubleFunctor(raw) => {
                let (s, t) = (self.groupoid(&raw.source, dir)?, self.groupoid(&raw.target, dir)?);
                Ok(Document::DoubleFunctor(DoubleFunctor::from_maps(s, t, &raw.maps)?))
            }
            RawDocument::GrothendieckTopology(raw) => {
                let c = self.category(&raw.category, dir)?;
                Ok(Document::GrothendieckTopology(grothendieck_topology(c, &raw)?))
            }
            RawDocument::EhresmannTopology(raw) => {
                let g = self.groupoid(&raw.category, dir)?;
                Ok(Document::EhresmannTopology(ehresmann_topology(g, &raw)?))
            }
            RawDocument::Presheaf(raw) => {
                let c = self.category(&raw.category, dir)?;
                Ok(Document::Presheaf(Presheaf::from_raw(c, &raw.raw)?))
            }
            RawDocument::DoublePresheaf(raw) => {
                let g = self.groupoid(&raw.groupoid, dir)?;
                Ok(Document::DoublePresheaf(DoublePresheaf::from_raw(g, &raw.raw)?))
            }
            RawDocument::SiteMorphism(raw) => {
                let functor = self.load_value(&raw.functor, dir)?;
                let source = self.load_value(&raw.source, dir)?;
                let target = self.load_value(&raw.target, dir)?;
                match (functor, source, target) {
                    (Document::Functor(f), Document::GrothendieckTopology(s), Document::GrothendieckTopology(t)) => {
                        Ok(Document::GrothendieckSite(GrothendieckSiteMorphism::new(f, s, t)?))
                    }
                    (Document::DoubleFunctor(f), Document::EhresmannTopology(s), Document::EhresmannTopology(t)) => {
                        Ok(Document::EhresmannSite(EhresmannSiteMorphism::new(f, s, t)?))
                    }
                    (f, s, t) => Err(Error::Format(format!(
                        "site morphism needs a functor with two Grothendieck topologies or a double functor with two Ehresmann topologies, got {}, {}, {}",
                        f.kind(),
                        s.kind(),
                        t.kind()
                    ))),
                }
            }
        }
    }

    fn category(&mut self, v: &Value, dir: &Path) -> Result<Arc<FiniteCategory>, Error> {
        match self.load_value(v, dir)? {
            Document::Category(c) => Ok(c),
            other => Err(Error::Format(format!("expected a category, got {}", other.kind()))),
        }
    }

    fn groupoid(&mut self, v: &Value, dir: &Path) -> Result<Arc<OrderedGroupoid>, Error> {
        match self.load_value(v, dir)? {
            Document::OrderedGroupoid(g) => Ok(g),
            other => Err(Error::Format(format!("expected an ordered groupoid, got {}", other.kind()))),
        }
    }
}

pub fn load_path(path: &Path) -> Result<Document, Error> {
    Loader::new().load_path(path)
}

fn lookup<T>(id: &Id, find: impl Fn(&str) -> Option<T>) -> Result<T, Error> {
    find(id.as_str()).ok_or_else(|| Error::UnknownId(id.clone()))
}

fn exactly_one(raw: &RawTopologyDoc) -> Result<(), Error> {
    let given = [raw.preset.is_some(), raw.covers.is_some(), raw.generators.is_some()].iter().filter(|&&b| b).count();
    if given != 1 {
        return Err(Error::Format("a topology needs exactly one of preset, covers, generators".into()));
    }
    Ok(())
}

fn grothendieck_topology(c: Arc<FiniteCategory>, raw: &RawTopologyDoc) -> Result<GrothendieckTopology, Error> {
    exactly_one(raw)?;
    let arrows = |xs: &[Id]| xs.iter().map(|x| lookup(x, |s| c.arrow_ix(s))).collect::<Result<Vec<ArrIx>, _>>();
    if let Some(preset) = &raw.preset {
        return match preset.as_str() {
            "trivial" => Ok(GrothendieckTopology::trivial(c.clone())),
            "maximal" => GrothendieckTopology::maximal(c.clone()),
            other => Err(Error::Format(format!("unknown preset {other}"))),
        };
    }
    if let Some(gens) = &raw.generators {
        let gens = gens.iter().map(|(r, xs)| Ok((lookup(r, |s| c.object_ix(s))?, arrows(xs)?))).collect::<Result<Vec<_>, Error>>()?;
        return GrothendieckTopology::generate(c.clone(), &gens);
    }
    let mut covers = vec![BTreeSet::new(); c.object_count()];
    for (root, sieves) in raw.covers.as_ref().unwrap() {
        let r = lookup(root, |s| c.object_ix(s))?;
        for s in sieves {
            covers[r].insert(arrows(s)?.into_iter().collect());
        }
    }
    GrothendieckTopology::new(c.clone(), covers)
}

fn ehresmann_topology(g: Arc<OrderedGroupoid>, raw: &RawTopologyDoc) -> Result<EhresmannTopology, Error> {
    exactly_one(raw)?;
    let objects = |xs: &[Id]| xs.iter().map(|x| lookup(x, |s| g.object_ix(s))).collect::<Result<Vec<ObjIx>, _>>();
    if let Some(preset) = &raw.preset {
        return match preset.as_str() {
            "trivial" => Ok(EhresmannTopology::trivial(g.clone())),
            "maximal" => EhresmannTopology::maximal(g.clone()),
            other => Err(Error::Format(format!("unknown preset {other}"))),
        };
    }
    if let Some(gens) = &raw.generators {
        let gens = gens.iter().map(|(r, xs)| Ok((lookup(r, |s| g.object_ix(s))?, objects(xs)?))).collect::<Result<Vec<_>, Error>>()?;
        return EhresmannTopology::generate(g.clone(), &gens);
    }
    let mut covers = vec![BTreeSet::new(); g.object_count()];
    for (root, sieves) in raw.covers.as_ref().unwrap() {
        let r = lookup(root, |s| g.object_ix(s))?;
        for s in sieves {
            covers[r].insert(objects(s)?.into_iter().collect());
        }
    }
    EhresmannTopology::new(g.clone(), covers)
}

/// The constructions available to `construct` objects and translation.
pub const CONSTRUCTIONS: &[&str] = &["l", "g", "lg", "gl", "topology", "presheaf", "eta", "kappa"];

/// Applies a named construction.
///
/// `l`, `g`, `lg`, `gl` act on categories, groupoids and site morphisms;
/// `topology` and `presheaf` move a topology or presheaf across `L` / `G`;
/// `eta` and `kappa` turn a topology into the unit site morphism.
pub fn construct(name: &str, of: Document) -> Result<Document, Error> {
    let mismatch = |d: &Document| Error::Format(format!("construct {name} does not apply to {}", d.kind()));
    match (name, of) {
        ("l", Document::OrderedGroupoid(g)) => Ok(Document::Category(construct_l(&g)?.category)),
        ("g", Document::Category(c)) => Ok(Document::OrderedGroupoid(construct_g(&c)?.groupoid)),
        ("lg", Document::Category(c)) => Ok(Document::Category(eta(&c)?.lg.category)),
        ("gl", Document::OrderedGroupoid(g)) => Ok(Document::OrderedGroupoid(construct_gl(&g)?.groupoid)),
        ("l", Document::EhresmannSite(m)) => Ok(Document::GrothendieckSite(l_site_morphism(&m)?.0)),
        ("g", Document::GrothendieckSite(m)) => Ok(Document::EhresmannSite(g_site_morphism(&m)?)),
        ("gl", Document::EhresmannSite(m)) => Ok(Document::EhresmannSite(gl_site_morphism(&m)?)),
        ("lg", Document::GrothendieckSite(m)) => {
            let gm = g_site_morphism(&m)?;
            Ok(Document::GrothendieckSite(l_site_morphism(&gm)?.0))
        }
        ("topology", Document::GrothendieckTopology(j)) => {
            let gg = construct_g(j.category())?;
            Ok(Document::EhresmannTopology(grothendieck_to_ehresmann_on_g(&j, &gg)?))
        }
        ("topology", Document::EhresmannTopology(t)) => {
            let l = construct_l(t.groupoid())?;
            Ok(Document::GrothendieckTopology(ehresmann_to_grothendieck(&t, &l)?))
        }
        ("presheaf", Document::Presheaf(p)) => {
            let gg = construct_g(p.base())?;
            Ok(Document::DoublePresheaf(transfer_tilde(&p, &gg)?))
        }
        ("presheaf", Document::DoublePresheaf(p)) => {
            let l = construct_l(p.base())?;
            Ok(Document::Presheaf(presheaf_transfer_l(&p, &l)?))
        }
        ("eta", Document::GrothendieckTopology(j)) => Ok(Document::GrothendieckSite(eta_site_morphism(&j)?)),
        ("kappa", Document::EhresmannTopology(t)) => Ok(Document::EhresmannSite(kappa_site_morphism(&t)?)),
        (_, d) => Err(mismatch(&d)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn documents_round_trip() {
        let docs = vec![
            Document::Category(Arc::new(fixtures::arrow_category())),
            Document::OrderedGroupoid(Arc::new(fixtures::interval_z2())),
            Document::GrothendieckTopology(fixtures::grothendieck_topologies().remove(2).1),
            Document::EhresmannTopology(fixtures::ehresmann_topologies().remove(1).1),
            Document::Presheaf(fixtures::arrow_presheaves().remove(2).1),
            Document::GrothendieckSite(fixtures::grothendieck_site_morphisms().remove(0).1),
            Document::EhresmannSite(fixtures::ehresmann_site_morphisms().remove(0).1),
        ];
        for d in docs {
            let v = d.to_json();
            let back = Loader::new().load_value(&v, Path::new(".")).unwrap();
            assert_eq!(back.kind(), d.kind());
            assert_eq!(back.to_json(), v);
        }
    }

    #[test]
    fn construct_and_kind_check() {
        let cat = Document::Category(Arc::new(fixtures::z2_category())).to_json();
        let v = json!({"construct": "g", "of": cat, "kind": "ordered_groupoid"});
        assert_eq!(Loader::new().load_value(&v, Path::new(".")).unwrap().kind(), "ordered_groupoid");
        let wrong = json!({"construct": "g", "of": cat, "kind": "category"});
        assert!(matches!(Loader::new().load_value(&wrong, Path::new(".")), Err(Error::Format(_))));
    }

    #[test]
    fn topology_needs_one_description() {
        let cat = Document::Category(Arc::new(fixtures::arrow_category())).to_json();
        let v = json!({"kind": "grothendieck_topology", "category": cat, "preset": "trivial", "generators": []});
        assert!(Loader::new().load_value(&v, Path::new(".")).is_err());
    }

    #[test]
    fn unknown_arrow_in_generators() {
        let cat = Document::Category(Arc::new(fixtures::arrow_category())).to_json();
        let v = json!({"kind": "grothendieck_topology", "category": cat, "generators": [["B", ["zz"]]]});
        assert!(matches!(Loader::new().load_value(&v, Path::new(".")), Err(Error::UnknownId(_))));
    }
}
