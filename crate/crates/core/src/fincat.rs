//! Finite categories given by explicit tables, functors between them,
//! natural transformations, and the checks built on top of those:
//! left-cancellativity, subobject quotients and weak equivalence.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::id::Id;
use crate::util;

pub type ObjIx = usize;
pub type ArrIx = usize;

/// Serialized form of a finite category.
///
/// `compose` lists `[g, f, g∘f]`; composites with identities may be omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCategory {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub objects: Vec<Id>,
    /// `[id, dom, cod]`
    pub arrows: Vec<(Id, Id, Id)>,
    pub identities: BTreeMap<Id, Id>,
    #[serde(default)]
    pub compose: Vec<(Id, Id, Id)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum CategoryViolation {
    DuplicateId { id: Id },
    UnknownId { id: Id },
    MissingIdentity { object: Id },
    IdentityNotEndo { object: Id, arrow: Id },
    BadCompositionDomain { g: Id, f: Id },
    CompositeWrongEnds { g: Id, f: Id, composite: Id },
    ConflictingComposite { g: Id, f: Id, first: Id, second: Id },
    MissingComposite { g: Id, f: Id },
    IdentityLaw { arrow: Id, identity: Id },
    NonAssociative { h: Id, g: Id, f: Id },
}

impl fmt::Display for CategoryViolation {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        use CategoryViolation::*;
        match self {
            DuplicateId { id } => write!(fm, "duplicate id {id}"),
            UnknownId { id } => write!(fm, "unknown id {id}"),
            MissingIdentity { object } => write!(fm, "object {object} has no identity"),
            IdentityNotEndo { object, arrow } => {
                write!(fm, "identity {arrow} of {object} is not an endomorphism of it")
            }
            BadCompositionDomain { g, f } => write!(fm, "{g}∘{f} declared but cod({f}) ≠ dom({g})"),
            CompositeWrongEnds { g, f, composite } => {
                write!(fm, "{g}∘{f} = {composite} has the wrong domain or codomain")
            }
            ConflictingComposite { g, f, first, second } => {
                write!(fm, "{g}∘{f} declared as both {first} and {second}")
            }
            MissingComposite { g, f } => write!(fm, "{g}∘{f} is composable but undefined"),
            IdentityLaw { arrow, identity } => write!(fm, "identity law fails for {arrow} with {identity}"),
            NonAssociative { h, g, f } => write!(fm, "({h}∘{g})∘{f} ≠ {h}∘({g}∘{f})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowInfo {
    pub id: Id,
    pub dom: ObjIx,
    pub cod: ObjIx,
}

/// A validated finite category. Objects and arrows are indexed in
/// lexicographic order of their ids, so "least id" and "least index" agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategory {
    name: Option<String>,
    objects: Vec<Id>,
    arrows: Vec<ArrowInfo>,
    identity: Vec<ArrIx>,
    compose: Vec<Option<ArrIx>>,
    object_index: HashMap<Id, ObjIx>,
    arrow_index: HashMap<Id, ArrIx>,
    hom: Vec<Vec<ArrIx>>,
    into: Vec<Vec<ArrIx>>,
}

/// Witness that some arrow `m` is not monic: `m∘g = m∘h` with `g ≠ h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NotMonic {
    pub m: Id,
    pub g: Id,
    pub h: Id,
}

/// A subobject of `root`: an isomorphism class of arrows into it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubobjectClass {
    pub root: ObjIx,
    pub representative: ArrIx,
    pub members: Vec<ArrIx>,
}

impl FiniteCategory {
    /// Validates raw tables exhaustively. All violations are collected.
    pub fn from_raw(raw: &RawCategory) -> Result<Self, Error> {
        validate_category(raw)
    }

    pub fn to_raw(&self) -> RawCategory {
        let mut compose = Vec::new();
        for g in 0..self.arrows.len() {
            for f in 0..self.arrows.len() {
                if self.is_identity(g) || self.is_identity(f) {
                    continue;
                }
                if let Some(gf) = self.compose(g, f) {
                    compose.push((self.arrow_id(g).clone(), self.arrow_id(f).clone(), self.arrow_id(gf).clone()));
                }
            }
        }
        RawCategory {
            name: self.name.clone(),
            objects: self.objects.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| (a.id.clone(), self.objects[a.dom].clone(), self.objects[a.cod].clone()))
                .collect(),
            identities: self
                .identity
                .iter()
                .enumerate()
                .map(|(o, &a)| (self.objects[o].clone(), self.arrows[a].id.clone()))
                .collect(),
            compose,
        }
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn objects(&self) -> std::ops::Range<ObjIx> {
        0..self.objects.len()
    }

    pub fn arrows(&self) -> std::ops::Range<ArrIx> {
        0..self.arrows.len()
    }

    pub fn object_id(&self, o: ObjIx) -> &Id {
        &self.objects[o]
    }

    pub fn arrow_id(&self, a: ArrIx) -> &Id {
        &self.arrows[a].id
    }

    pub fn object_ix(&self, id: &str) -> Option<ObjIx> {
        self.object_index.get(&Id::from(id)).copied()
    }

    pub fn arrow_ix(&self, id: &str) -> Option<ArrIx> {
        self.arrow_index.get(&Id::from(id)).copied()
    }

    pub fn dom(&self, a: ArrIx) -> ObjIx {
        self.arrows[a].dom
    }

    pub fn cod(&self, a: ArrIx) -> ObjIx {
        self.arrows[a].cod
    }

    pub fn identity(&self, o: ObjIx) -> ArrIx {
        self.identity[o]
    }

    pub fn is_identity(&self, a: ArrIx) -> bool {
        self.identity[self.dom(a)] == a
    }

    /// `g∘f`, defined exactly when `cod(f) = dom(g)`.
    pub fn compose(&self, g: ArrIx, f: ArrIx) -> Option<ArrIx> {
        self.compose[g * self.arrows.len() + f]
    }

    /// Composite of arrows that are known to be composable.
    pub fn comp(&self, g: ArrIx, f: ArrIx) -> ArrIx {
        self.compose(g, f).unwrap_or_else(|| {
            panic!("{}∘{} is not composable", self.arrow_id(g), self.arrow_id(f))
        })
    }

    pub fn hom(&self, a: ObjIx, b: ObjIx) -> &[ArrIx] {
        &self.hom[a * self.objects.len() + b]
    }

    pub fn arrows_into(&self, b: ObjIx) -> &[ArrIx] {
        &self.into[b]
    }

    pub fn inverse(&self, f: ArrIx) -> Option<ArrIx> {
        let (a, b) = (self.dom(f), self.cod(f));
        self.hom(b, a).iter().copied().find(|&g| {
            self.compose(g, f) == Some(self.identity(a)) && self.compose(f, g) == Some(self.identity(b))
        })
    }

    pub fn is_iso(&self, f: ArrIx) -> bool {
        self.inverse(f).is_some()
    }

    /// All isomorphisms `a → b`.
    pub fn isomorphisms_between(&self, a: ObjIx, b: ObjIx) -> Vec<ArrIx> {
        self.hom(a, b).iter().copied().filter(|&f| self.is_iso(f)).collect()
    }

    /// Checks that every arrow is a monomorphism, returning a witness
    /// `m∘g = m∘h`, `g ≠ h` otherwise.
    pub fn is_left_cancellative(&self) -> Result<(), NotMonic> {
        for m in self.arrows() {
            for x in self.objects() {
                let hs = self.hom(x, self.dom(m));
                for (i, &g) in hs.iter().enumerate() {
                    for &h in &hs[i + 1..] {
                        if self.compose(m, g) == self.compose(m, h) {
                            return Err(NotMonic {
                                m: self.arrow_id(m).clone(),
                                g: self.arrow_id(g).clone(),
                                h: self.arrow_id(h).clone(),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn require_left_cancellative(&self) -> Result<(), Error> {
        self.is_left_cancellative().map_err(Error::NotLeftCancellative)
    }

    /// Partition of the arrows into `b` by `[m] = [m']` iff `m'∘k = m` for an
    /// isomorphism `k`. Classes are ordered by representative.
    pub fn subobjects_of(&self, b: ObjIx) -> Result<Vec<SubobjectClass>, Error> {
        self.require_left_cancellative()?;
        let into = self.arrows_into(b);
        let pos: HashMap<ArrIx, usize> = into.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut uf = UnionFind::<usize>::new(into.len());
        for (i, &m) in into.iter().enumerate() {
            for x in self.objects() {
                for k in self.isomorphisms_between(x, self.dom(m)) {
                    let mk = self.comp(m, k);
                    uf.union(i, pos[&mk]);
                }
            }
        }
        Ok(util::groups(uf)
            .into_iter()
            .map(|g| {
                let members: Vec<ArrIx> = g.into_iter().map(|i| into[i]).collect();
                SubobjectClass { root: b, representative: members[0], members }
            })
            .collect())
    }

    /// Unique `x` with `m∘x = target`, if any. Unique when `m` is monic.
    pub fn factor_through(&self, m: ArrIx, target: ArrIx) -> Option<ArrIx> {
        if self.cod(m) != self.cod(target) {
            return None;
        }
        self.hom(self.dom(target), self.dom(m))
            .iter()
            .copied()
            .find(|&x| self.compose(m, x) == Some(target))
    }

    /// Smallest sieve on `root` containing `generators`.
    pub fn sieve_closure(&self, root: ObjIx, generators: impl IntoIterator<Item = ArrIx>) -> BTreeSet<ArrIx> {
        let mut out = BTreeSet::new();
        for f in generators {
            debug_assert_eq!(self.cod(f), root);
            for x in self.objects() {
                for &g in self.hom(x, self.dom(f)) {
                    out.insert(self.comp(f, g));
                }
            }
        }
        out
    }
}

/// Validates raw tables. Every violated law is reported with witnesses.
pub fn validate_category(raw: &RawCategory) -> Result<FiniteCategory, Error> {
    let mut violations = Vec::new();

    let mut objects: Vec<Id> = raw.objects.clone();
    objects.sort();
    for w in objects.windows(2) {
        if w[0] == w[1] {
            violations.push(CategoryViolation::DuplicateId { id: w[0].clone() });
        }
    }
    objects.dedup();
    let object_index: HashMap<Id, ObjIx> = objects.iter().cloned().enumerate().map(|(i, o)| (o, i)).collect();

    let mut sorted_arrows = raw.arrows.clone();
    sorted_arrows.sort();
    let mut arrows: Vec<ArrowInfo> = Vec::new();
    for (i, (id, d, c)) in sorted_arrows.iter().enumerate() {
        if i > 0 && sorted_arrows[i - 1].0 == *id {
            violations.push(CategoryViolation::DuplicateId { id: id.clone() });
            continue;
        }
        match (object_index.get(d), object_index.get(c)) {
            (Some(&dom), Some(&cod)) => arrows.push(ArrowInfo { id: id.clone(), dom, cod }),
            (None, _) => violations.push(CategoryViolation::UnknownId { id: d.clone() }),
            (_, None) => violations.push(CategoryViolation::UnknownId { id: c.clone() }),
        }
    }
    let arrow_index: HashMap<Id, ArrIx> = arrows.iter().enumerate().map(|(i, a)| (a.id.clone(), i)).collect();
    let n = arrows.len();

    let mut identity = vec![usize::MAX; objects.len()];
    for (o, a) in &raw.identities {
        match (object_index.get(o), arrow_index.get(a)) {
            (Some(&oi), Some(&ai)) => {
                if arrows[ai].dom != oi || arrows[ai].cod != oi {
                    violations.push(CategoryViolation::IdentityNotEndo { object: o.clone(), arrow: a.clone() });
                }
                identity[oi] = ai;
            }
            (None, _) => violations.push(CategoryViolation::UnknownId { id: o.clone() }),
            (_, None) => violations.push(CategoryViolation::UnknownId { id: a.clone() }),
        }
    }
    for (o, &a) in identity.iter().enumerate() {
        if a == usize::MAX {
            violations.push(CategoryViolation::MissingIdentity { object: objects[o].clone() });
        }
    }
    if !violations.is_empty() {
        return Err(Error::InvalidCategory(violations));
    }

    let mut compose: Vec<Option<ArrIx>> = vec![None; n * n];
    for (g, f, gf) in &raw.compose {
        let (Some(&gi), Some(&fi), Some(&gfi)) = (arrow_index.get(g), arrow_index.get(f), arrow_index.get(gf)) else {
            for id in [g, f, gf] {
                if !arrow_index.contains_key(id) {
                    violations.push(CategoryViolation::UnknownId { id: id.clone() });
                }
            }
            continue;
        };
        if arrows[fi].cod != arrows[gi].dom {
            violations.push(CategoryViolation::BadCompositionDomain { g: g.clone(), f: f.clone() });
            continue;
        }
        if arrows[gfi].dom != arrows[fi].dom || arrows[gfi].cod != arrows[gi].cod {
            violations.push(CategoryViolation::CompositeWrongEnds { g: g.clone(), f: f.clone(), composite: gf.clone() });
            continue;
        }
        match compose[gi * n + fi] {
            Some(prev) if prev != gfi => violations.push(CategoryViolation::ConflictingComposite {
                g: g.clone(),
                f: f.clone(),
                first: arrows[prev].id.clone(),
                second: gf.clone(),
            }),
            _ => compose[gi * n + fi] = Some(gfi),
        }
    }
    // identity composites may be left implicit
    for f in 0..n {
        let (d, c) = (arrows[f].dom, arrows[f].cod);
        for (id, slot) in [(identity[c], identity[c] * n + f), (identity[d], f * n + identity[d])] {
            match compose[slot] {
                None => compose[slot] = Some(f),
                Some(x) if x != f => violations.push(CategoryViolation::IdentityLaw {
                    arrow: arrows[f].id.clone(),
                    identity: arrows[id].id.clone(),
                }),
                _ => {}
            }
        }
    }
    for g in 0..n {
        for f in 0..n {
            if arrows[f].cod == arrows[g].dom && compose[g * n + f].is_none() {
                violations.push(CategoryViolation::MissingComposite { g: arrows[g].id.clone(), f: arrows[f].id.clone() });
            }
        }
    }
    if violations.is_empty() {
        for h in 0..n {
            for g in 0..n {
                let Some(hg) = compose[h * n + g] else { continue };
                for f in 0..n {
                    let Some(gf) = compose[g * n + f] else { continue };
                    if compose[hg * n + f] != compose[h * n + gf] {
                        violations.push(CategoryViolation::NonAssociative {
                            h: arrows[h].id.clone(),
                            g: arrows[g].id.clone(),
                            f: arrows[f].id.clone(),
                        });
                    }
                }
            }
        }
    }
    if !violations.is_empty() {
        return Err(Error::InvalidCategory(violations));
    }

    let no = objects.len();
    let mut hom = vec![Vec::new(); no * no];
    let mut into = vec![Vec::new(); no];
    for (i, a) in arrows.iter().enumerate() {
        hom[a.dom * no + a.cod].push(i);
        into[a.cod].push(i);
    }
    Ok(FiniteCategory {
        name: raw.name.clone(),
        objects,
        arrows,
        identity,
        compose,
        object_index,
        arrow_index,
        hom,
        into,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum FunctorViolation {
    WrongLength,
    EndpointMismatch { arrow: Id },
    IdentityNotPreserved { object: Id },
    CompositionNotPreserved { g: Id, f: Id },
}

impl fmt::Display for FunctorViolation {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctorViolation::WrongLength => write!(fm, "object or arrow map is not total"),
            FunctorViolation::EndpointMismatch { arrow } => write!(fm, "image of {arrow} has the wrong endpoints"),
            FunctorViolation::IdentityNotPreserved { object } => write!(fm, "identity of {object} not preserved"),
            FunctorViolation::CompositionNotPreserved { g, f } => write!(fm, "composite {g}∘{f} not preserved"),
        }
    }
}

/// Serialized functor: maps by id.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawFunctorMaps {
    pub objects: BTreeMap<Id, Id>,
    pub arrows: BTreeMap<Id, Id>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functor {
    source: Arc<FiniteCategory>,
    target: Arc<FiniteCategory>,
    obj_map: Vec<ObjIx>,
    arr_map: Vec<ArrIx>,
}

impl Functor {
    pub fn new(
        source: Arc<FiniteCategory>,
        target: Arc<FiniteCategory>,
        obj_map: Vec<ObjIx>,
        arr_map: Vec<ArrIx>,
    ) -> Result<Self, Error> {
        let f = Functor { source, target, obj_map, arr_map };
        let v = f.violations();
        if v.is_empty() {
            Ok(f)
        } else {
            Err(Error::InvalidFunctor(v))
        }
    }

    pub fn from_maps(source: Arc<FiniteCategory>, target: Arc<FiniteCategory>, maps: &RawFunctorMaps) -> Result<Self, Error> {
        let mut obj_map = Vec::with_capacity(source.object_count());
        for o in source.objects() {
            let img = maps
                .objects
                .get(source.object_id(o))
                .ok_or_else(|| Error::UnknownId(source.object_id(o).clone()))?;
            obj_map.push(target.object_ix(img.as_str()).ok_or_else(|| Error::UnknownId(img.clone()))?);
        }
        let mut arr_map = Vec::with_capacity(source.arrow_count());
        for a in source.arrows() {
            let img = match maps.arrows.get(source.arrow_id(a)) {
                Some(img) => target.arrow_ix(img.as_str()).ok_or_else(|| Error::UnknownId(img.clone()))?,
                None if source.is_identity(a) => target.identity(obj_map[source.dom(a)]),
                None => return Err(Error::UnknownId(source.arrow_id(a).clone())),
            };
            arr_map.push(img);
        }
        Functor::new(source, target, obj_map, arr_map)
    }

    pub fn to_maps(&self) -> RawFunctorMaps {
        RawFunctorMaps {
            objects: self
                .source
                .objects()
                .map(|o| (self.source.object_id(o).clone(), self.target.object_id(self.obj(o)).clone()))
                .collect(),
            arrows: self
                .source
                .arrows()
                .map(|a| (self.source.arrow_id(a).clone(), self.target.arrow_id(self.arr(a)).clone()))
                .collect(),
        }
    }

    fn violations(&self) -> Vec<FunctorViolation> {
        let (s, t) = (&*self.source, &*self.target);
        if self.obj_map.len() != s.object_count()
            || self.arr_map.len() != s.arrow_count()
            || self.obj_map.iter().any(|&o| o >= t.object_count())
            || self.arr_map.iter().any(|&a| a >= t.arrow_count())
        {
            return vec![FunctorViolation::WrongLength];
        }
        let mut out = Vec::new();
        for a in s.arrows() {
            let fa = self.arr_map[a];
            if t.dom(fa) != self.obj_map[s.dom(a)] || t.cod(fa) != self.obj_map[s.cod(a)] {
                out.push(FunctorViolation::EndpointMismatch { arrow: s.arrow_id(a).clone() });
            }
        }
        if !out.is_empty() {
            return out;
        }
        for o in s.objects() {
            if self.arr_map[s.identity(o)] != t.identity(self.obj_map[o]) {
                out.push(FunctorViolation::IdentityNotPreserved { object: s.object_id(o).clone() });
            }
        }
        for g in s.arrows() {
            for f in s.arrows() {
                if let Some(gf) = s.compose(g, f) {
                    if t.compose(self.arr_map[g], self.arr_map[f]) != Some(self.arr_map[gf]) {
                        out.push(FunctorViolation::CompositionNotPreserved {
                            g: s.arrow_id(g).clone(),
                            f: s.arrow_id(f).clone(),
                        });
                    }
                }
            }
        }
        out
    }

    pub fn identity(c: &Arc<FiniteCategory>) -> Self {
        Functor {
            source: c.clone(),
            target: c.clone(),
            obj_map: c.objects().collect(),
            arr_map: c.arrows().collect(),
        }
    }

    pub fn source(&self) -> &Arc<FiniteCategory> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteCategory> {
        &self.target
    }

    pub fn obj(&self, o: ObjIx) -> ObjIx {
        self.obj_map[o]
    }

    pub fn arr(&self, a: ArrIx) -> ArrIx {
        self.arr_map[a]
    }

    pub fn obj_map(&self) -> &[ObjIx] {
        &self.obj_map
    }

    pub fn arr_map(&self) -> &[ArrIx] {
        &self.arr_map
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Functor) -> Result<Functor, Error> {
        if *self.target != *next.source {
            return Err(Error::NotComposable("functor target differs from next functor's source".into()));
        }
        Ok(Functor {
            source: self.source.clone(),
            target: next.target.clone(),
            obj_map: self.obj_map.iter().map(|&o| next.obj(o)).collect(),
            arr_map: self.arr_map.iter().map(|&a| next.arr(a)).collect(),
        })
    }

    pub fn is_identity(&self) -> bool {
        *self.source == *self.target
            && self.obj_map.iter().enumerate().all(|(i, &o)| i == o)
            && self.arr_map.iter().enumerate().all(|(i, &a)| i == a)
    }

    /// Bijective on objects and arrows.
    pub fn is_isomorphism(&self) -> bool {
        let objs: BTreeSet<_> = self.obj_map.iter().collect();
        let arrs: BTreeSet<_> = self.arr_map.iter().collect();
        objs.len() == self.target.object_count()
            && self.obj_map.len() == self.target.object_count()
            && arrs.len() == self.target.arrow_count()
            && self.arr_map.len() == self.target.arrow_count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NaturalityFailure {
    pub arrow: Id,
}

/// Components `θ_X : F X → G X` in the common target category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaturalTransformation {
    source: Functor,
    target: Functor,
    components: Vec<ArrIx>,
}

impl NaturalTransformation {
    pub fn new(source: Functor, target: Functor, components: Vec<ArrIx>) -> Result<Self, Error> {
        if source.source != target.source || source.target != target.target {
            return Err(Error::NotComposable("natural transformation between functors with different endpoints".into()));
        }
        let t = NaturalTransformation { source, target, components };
        match t.naturality_failure() {
            None => Ok(t),
            Some(w) => Err(Error::NotNatural(w.arrow)),
        }
    }

    fn naturality_failure(&self) -> Option<NaturalityFailure> {
        let c = &*self.source.source;
        let d = &*self.source.target;
        if self.components.len() != c.object_count() {
            return Some(NaturalityFailure { arrow: Id::from("<components>") });
        }
        for x in c.objects() {
            let th = self.components[x];
            if th >= d.arrow_count() || d.dom(th) != self.source.obj(x) || d.cod(th) != self.target.obj(x) {
                return Some(NaturalityFailure { arrow: c.arrow_id(c.identity(x)).clone() });
            }
        }
        for h in c.arrows() {
            let (x, y) = (c.dom(h), c.cod(h));
            let lhs = d.compose(self.target.arr(h), self.components[x]);
            let rhs = d.compose(self.components[y], self.source.arr(h));
            if lhs.is_none() || lhs != rhs {
                return Some(NaturalityFailure { arrow: c.arrow_id(h).clone() });
            }
        }
        None
    }

    pub fn identity(f: &Functor) -> Self {
        let d = &f.target;
        NaturalTransformation {
            source: f.clone(),
            target: f.clone(),
            components: f.source.objects().map(|x| d.identity(f.obj(x))).collect(),
        }
    }

    pub fn source(&self) -> &Functor {
        &self.source
    }

    pub fn target(&self) -> &Functor {
        &self.target
    }

    pub fn component(&self, x: ObjIx) -> ArrIx {
        self.components[x]
    }

    pub fn components(&self) -> &[ArrIx] {
        &self.components
    }

    /// `other · self` (vertical composition).
    pub fn then(&self, other: &NaturalTransformation) -> Result<Self, Error> {
        if self.target != other.source {
            return Err(Error::NotComposable("natural transformations do not meet".into()));
        }
        let d = &self.source.target;
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(&a, &b)| d.comp(b, a))
            .collect();
        NaturalTransformation::new(self.source.clone(), other.target.clone(), components)
    }

    pub fn is_isomorphism(&self) -> bool {
        let d = &self.source.target;
        self.components.iter().all(|&c| d.is_iso(c))
    }
}

/// Exhaustive search for a natural isomorphism `F ≅ G`.
pub fn find_natural_isomorphism(f: &Functor, g: &Functor) -> Option<NaturalTransformation> {
    if f.source != g.source || f.target != g.target {
        return None;
    }
    let c = &*f.source;
    let d = &*f.target;
    let candidates: Vec<Vec<ArrIx>> = c.objects().map(|x| d.isomorphisms_between(f.obj(x), g.obj(x))).collect();
    let mut chosen: Vec<ArrIx> = Vec::with_capacity(c.object_count());
    fn search(
        c: &FiniteCategory,
        d: &FiniteCategory,
        f: &Functor,
        g: &Functor,
        candidates: &[Vec<ArrIx>],
        chosen: &mut Vec<ArrIx>,
    ) -> bool {
        let x = chosen.len();
        if x == c.object_count() {
            return true;
        }
        for &th in &candidates[x] {
            chosen.push(th);
            let ok = (0..=x).all(|y| {
                c.hom(y, x).iter().chain(if y == x { &[][..] } else { c.hom(x, y) }).all(|&h| {
                    let (a, b) = (c.dom(h), c.cod(h));
                    d.compose(g.arr(h), chosen[a]) == d.compose(chosen[b], f.arr(h))
                })
            });
            if ok && search(c, d, f, g, candidates, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    if search(c, d, f, g, &candidates, &mut chosen) {
        NaturalTransformation::new(f.clone(), g.clone(), chosen).ok()
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NotFull {
    pub from: Id,
    pub to: Id,
    pub missing: Id,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NotFaithful {
    pub first: Id,
    pub second: Id,
    pub image: Id,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NotEssentiallySurjective {
    pub object: Id,
}

/// Full / faithful / essentially surjective, each with a witness on failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeakEquivalenceVerdict {
    pub full: Result<(), NotFull>,
    pub faithful: Result<(), NotFaithful>,
    pub essentially_surjective: Result<(), NotEssentiallySurjective>,
}

impl WeakEquivalenceVerdict {
    pub fn holds(&self) -> bool {
        self.full.is_ok() && self.faithful.is_ok() && self.essentially_surjective.is_ok()
    }
}

pub fn check_weak_equivalence(f: &Functor) -> WeakEquivalenceVerdict {
    let c = &*f.source;
    let d = &*f.target;
    let mut full = Ok(());
    let mut faithful = Ok(());
    'outer: for a in c.objects() {
        for b in c.objects() {
            let mut images: HashMap<ArrIx, ArrIx> = HashMap::new();
            for &h in c.hom(a, b) {
                if let Some(&prev) = images.get(&f.arr(h)) {
                    if faithful.is_ok() {
                        faithful = Err(NotFaithful {
                            first: c.arrow_id(prev).clone(),
                            second: c.arrow_id(h).clone(),
                            image: d.arrow_id(f.arr(h)).clone(),
                        });
                    }
                } else {
                    images.insert(f.arr(h), h);
                }
            }
            if full.is_ok() {
                if let Some(&g) = d.hom(f.obj(a), f.obj(b)).iter().find(|g| !images.contains_key(g)) {
                    full = Err(NotFull {
                        from: c.object_id(a).clone(),
                        to: c.object_id(b).clone(),
                        missing: d.arrow_id(g).clone(),
                    });
                }
            }
            if full.is_err() && faithful.is_err() {
                break 'outer;
            }
        }
    }
    let essentially_surjective = match d
        .objects()
        .find(|&y| !c.objects().any(|x| !d.isomorphisms_between(f.obj(x), y).is_empty()))
    {
        Some(y) => Err(NotEssentiallySurjective { object: d.object_id(y).clone() }),
        None => Ok(()),
    };
    WeakEquivalenceVerdict { full, faithful, essentially_surjective }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn raw(objects: &[&str], arrows: &[(&str, &str, &str)], ids: &[(&str, &str)], comp: &[(&str, &str, &str)]) -> RawCategory {
        RawCategory {
            name: None,
            objects: objects.iter().map(|&s| Id::from(s)).collect(),
            arrows: arrows.iter().map(|&(a, b, c)| (a.into(), b.into(), c.into())).collect(),
            identities: ids.iter().map(|&(o, a)| (o.into(), a.into())).collect(),
            compose: comp.iter().map(|&(a, b, c)| (a.into(), b.into(), c.into())).collect(),
        }
    }

    fn z2() -> FiniteCategory {
        validate_category(&raw(&["*"], &[("e", "*", "*"), ("s", "*", "*")], &[("*", "e")], &[("s", "s", "e")])).unwrap()
    }

    fn arrow_cat() -> FiniteCategory {
        validate_category(&raw(
            &["A", "B"],
            &[("1A", "A", "A"), ("1B", "B", "B"), ("a", "A", "B")],
            &[("A", "1A"), ("B", "1B")],
            &[],
        ))
        .unwrap()
    }

    fn parallel() -> RawCategory {
        raw(
            &["A", "B", "C"],
            &[("1A", "A", "A"), ("1B", "B", "B"), ("1C", "C", "C"), ("u", "A", "B"), ("v", "A", "B"), ("z", "B", "C"), ("w", "A", "C")],
            &[("A", "1A"), ("B", "1B"), ("C", "1C")],
            &[("z", "u", "w"), ("z", "v", "w")],
        )
    }

    #[test]
    fn terminal_is_valid() {
        let c = validate_category(&raw(&["*"], &[("1", "*", "*")], &[("*", "1")], &[])).unwrap();
        assert_eq!(c.arrow_count(), 1);
        assert!(c.is_left_cancellative().is_ok());
    }

    #[test]
    fn bad_composition_domain_is_reported() {
        let r = raw(
            &["A", "B"],
            &[("1A", "A", "A"), ("1B", "B", "B"), ("a", "A", "B")],
            &[("A", "1A"), ("B", "1B")],
            &[("a", "a", "a")],
        );
        match validate_category(&r) {
            Err(Error::InvalidCategory(v)) => {
                assert!(v.contains(&CategoryViolation::BadCompositionDomain { g: "a".into(), f: "a".into() }))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_identity_is_reported() {
        let r = raw(&["A"], &[("f", "A", "A")], &[], &[]);
        match validate_category(&r) {
            Err(Error::InvalidCategory(v)) => assert!(v.contains(&CategoryViolation::MissingIdentity { object: "A".into() })),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_associative_table_is_rejected() {
        // a monoid table {1, x, y} with x∘x = y, x∘y = x, y∘x = y, y∘y = y
        // (x∘x)∘y = y∘y = y but x∘(x∘y) = x∘x = y, so try one that really fails:
        // x∘y = 1 while y∘x = x: (y∘x)∘y = x∘y = 1, y∘(x∘y) = y∘1 = y.
        let r = raw(
            &["*"],
            &[("1", "*", "*"), ("x", "*", "*"), ("y", "*", "*")],
            &[("*", "1")],
            &[("x", "x", "x"), ("x", "y", "1"), ("y", "x", "x"), ("y", "y", "y")],
        );
        match validate_category(&r) {
            Err(Error::InvalidCategory(v)) => {
                assert!(v.iter().any(|x| matches!(x, CategoryViolation::NonAssociative { .. })))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn z2_is_valid_and_left_cancellative() {
        let c = z2();
        assert!(c.is_left_cancellative().is_ok());
        let s = c.arrow_ix("s").unwrap();
        assert_eq!(c.compose(s, s), Some(c.arrow_ix("e").unwrap()));
        assert_eq!(c.isomorphisms_between(0, 0).len(), 2);
    }

    #[test]
    fn parallel_pair_category_is_not_left_cancellative() {
        let c = validate_category(&parallel()).unwrap();
        let w = c.is_left_cancellative().unwrap_err();
        assert_eq!(w, NotMonic { m: "z".into(), g: "u".into(), h: "v".into() });
        assert!(matches!(c.subobjects_of(2), Err(Error::NotLeftCancellative(_))));
    }

    #[test]
    fn posets_have_only_identity_isos() {
        let c = arrow_cat();
        assert_eq!(c.isomorphisms_between(0, 0), vec![c.identity(0)]);
        assert!(c.isomorphisms_between(0, 1).is_empty());
    }

    #[test]
    fn subobjects_of_z2_form_one_class() {
        let c = z2();
        let classes = c.subobjects_of(0).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].members, vec![0, 1]);
        assert_eq!(c.arrow_id(classes[0].representative).as_str(), "e");
    }

    #[test]
    fn subobjects_of_arrow_category() {
        let c = arrow_cat();
        let b = c.object_ix("B").unwrap();
        let classes = c.subobjects_of(b).unwrap();
        let reps: Vec<&str> = classes.iter().map(|k| c.arrow_id(k.representative).as_str()).collect();
        assert_eq!(reps, vec!["1B", "a"]);
    }

    #[test]
    fn identity_functor_is_weak_equivalence() {
        let c = Arc::new(z2());
        assert!(check_weak_equivalence(&Functor::identity(&c)).holds());
    }

    #[test]
    fn collapse_of_discrete_pair_is_weak_equivalence() {
        let d = Arc::new(
            validate_category(&raw(&["x", "y"], &[("1x", "x", "x"), ("1y", "y", "y")], &[("x", "1x"), ("y", "1y")], &[])).unwrap(),
        );
        let t = Arc::new(validate_category(&raw(&["*"], &[("1", "*", "*")], &[("*", "1")], &[])).unwrap());
        let f = Functor::new(d, t, vec![0, 0], vec![0, 0]).unwrap();
        let v = check_weak_equivalence(&f);
        // full and faithful hom-set by hom-set: hom(x, y) is empty and so is its image's preimage requirement
        assert!(v.faithful.is_ok());
        assert!(v.essentially_surjective.is_ok());
        assert_eq!(
            v.full,
            Err(NotFull { from: "x".into(), to: "y".into(), missing: "1".into() }),
            "hom(x,y) = ∅ but hom(*,*) = {{1}}"
        );
    }

    #[test]
    fn functor_validation_catches_broken_composition() {
        let c = Arc::new(z2());
        let e = c.arrow_ix("e").unwrap();
        let s = c.arrow_ix("s").unwrap();
        // s ↦ s, e ↦ s breaks identities
        let err = Functor::new(c.clone(), c.clone(), vec![0], vec![s, s]).unwrap_err();
        assert!(matches!(err, Error::InvalidFunctor(_)));
        assert!(Functor::new(c.clone(), c, vec![0], vec![e, s]).unwrap().is_identity());
    }

    #[test]
    fn natural_isomorphism_search_on_z2() {
        let c = Arc::new(z2());
        let id = Functor::identity(&c);
        let th = find_natural_isomorphism(&id, &id).unwrap();
        assert!(th.is_isomorphism());
    }
}
