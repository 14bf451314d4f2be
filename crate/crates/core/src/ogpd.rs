//! Ordered groupoids as thin double categories.
//!
//! Horizontal arrows are the groupoid arrows, vertical arrows are the order
//! relations between objects and double cells are order relations between
//! horizontal arrows. Neither vertical arrows nor cells are stored: a cell
//! exists iff its frame satisfies the order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::fincat::{validate_category, ArrIx, CategoryViolation, FiniteCategory, Functor, FunctorViolation, ObjIx, RawCategory, RawFunctorMaps};
use crate::id::Id;
use crate::util::reflexive_transitive_closure;

pub const SEARCH_LIMIT: usize = 1_000_000;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawOrderedGroupoid {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub objects: Vec<Id>,
    pub harrows: Vec<(Id, Id, Id)>,
    pub identities: BTreeMap<Id, Id>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub inverses: BTreeMap<Id, Id>,
    #[serde(default)]
    pub compose: Vec<(Id, Id, Id)>,
    /// `[lower, upper]`
    #[serde(default)]
    pub obj_order: Vec<(Id, Id)>,
    #[serde(default)]
    pub arr_order: Vec<(Id, Id)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum OgpdViolation {
    Category(CategoryViolation),
    UnknownId { id: Id },
    NotInvertible { arrow: Id },
    InverseMismatch { arrow: Id, declared: Id },
    OrderNotAntisymmetric { a: Id, b: Id },
    FrameViolation { lower: Id, upper: Id },
    OrderNotPreserved { lower: Id, upper: Id },
    CompositionNotMonotone { a: Id, b: Id, c: Id, d: Id },
    RestrictionMissing { arrow: Id, object: Id },
    RestrictionNotUnique { arrow: Id, object: Id, first: Id, second: Id },
}

impl fmt::Display for OgpdViolation {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        use OgpdViolation::*;
        match self {
            Category(v) => write!(fm, "{v}"),
            UnknownId { id } => write!(fm, "unknown id {id}"),
            NotInvertible { arrow } => write!(fm, "{arrow} is not invertible"),
            InverseMismatch { arrow, declared } => write!(fm, "{declared} is declared inverse to {arrow} but is not"),
            OrderNotAntisymmetric { a, b } => write!(fm, "{a} ≤ {b} and {b} ≤ {a}"),
            FrameViolation { lower, upper } => write!(fm, "{lower} ≤ {upper} but the ends are not ordered"),
            OrderNotPreserved { lower, upper } => write!(fm, "{lower} ≤ {upper} but their inverses are not ordered"),
            CompositionNotMonotone { a, b, c, d } => write!(fm, "{a} ≤ {b}, {c} ≤ {d} but {a}{c} ≰ {b}{d}"),
            RestrictionMissing { arrow, object } => write!(fm, "{arrow} has no restriction to {object}"),
            RestrictionNotUnique { arrow, object, first, second } => {
                write!(fm, "{arrow} restricts to {object} as both {first} and {second}")
            }
        }
    }
}

/// A validated finite ordered groupoid with its restriction table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedGroupoid {
    cat: Arc<FiniteCategory>,
    inverse: Vec<ArrIx>,
    obj_leq: Vec<bool>,
    arr_leq: Vec<bool>,
    restriction: Vec<Option<ArrIx>>,
    below: Vec<Vec<ObjIx>>,
}

pub fn validate_ordered_groupoid(raw: &RawOrderedGroupoid) -> Result<OrderedGroupoid, Error> {
    let mut compose = raw.compose.clone();
    for (f, g) in &raw.inverses {
        let ends = |a: &Id| raw.harrows.iter().find(|h| &h.0 == a).map(|h| (h.1.clone(), h.2.clone()));
        if let (Some((d, c)), Some(_)) = (ends(f), ends(g)) {
            if let (Some(id_d), Some(id_c)) = (raw.identities.get(&d), raw.identities.get(&c)) {
                for (x, y, z) in [(g, f, id_d), (f, g, id_c)] {
                    if !compose.iter().any(|(a, b, _)| a == x && b == y) {
                        compose.push((x.clone(), y.clone(), z.clone()));
                    }
                }
            }
        }
    }
    let rc = RawCategory {
        name: raw.name.clone(),
        objects: raw.objects.clone(),
        arrows: raw.harrows.clone(),
        identities: raw.identities.clone(),
        compose,
    };
    let cat = match validate_category(&rc) {
        Ok(c) => c,
        Err(Error::InvalidCategory(v)) => {
            return Err(Error::InvalidOrderedGroupoid(v.into_iter().map(OgpdViolation::Category).collect()))
        }
        Err(e) => return Err(e),
    };
    let mut violations = Vec::new();
    let mut inverse = Vec::with_capacity(cat.arrow_count());
    for f in cat.arrows() {
        match cat.inverse(f) {
            Some(g) => inverse.push(g),
            None => {
                violations.push(OgpdViolation::NotInvertible { arrow: cat.arrow_id(f).clone() });
                inverse.push(f);
            }
        }
    }
    for (f, g) in &raw.inverses {
        if let (Some(fi), Some(gi)) = (cat.arrow_ix(f.as_str()), cat.arrow_ix(g.as_str())) {
            if inverse[fi] != gi {
                violations.push(OgpdViolation::InverseMismatch { arrow: f.clone(), declared: g.clone() });
            }
        } else {
            violations.push(OgpdViolation::UnknownId { id: f.clone() });
        }
    }
    let m = cat.arrow_count();
    let n = cat.object_count();
    let mut arr_leq = vec![false; m * m];
    for (a, b) in &raw.arr_order {
        match (cat.arrow_ix(a.as_str()), cat.arrow_ix(b.as_str())) {
            (Some(x), Some(y)) => arr_leq[x * m + y] = true,
            _ => violations.push(OgpdViolation::UnknownId { id: if cat.arrow_ix(a.as_str()).is_none() { a.clone() } else { b.clone() } }),
        }
    }
    for (a, b) in &raw.obj_order {
        match (cat.object_ix(a.as_str()), cat.object_ix(b.as_str())) {
            (Some(x), Some(y)) => arr_leq[cat.identity(x) * m + cat.identity(y)] = true,
            _ => violations.push(OgpdViolation::UnknownId { id: if cat.object_ix(a.as_str()).is_none() { a.clone() } else { b.clone() } }),
        }
    }
    if !violations.is_empty() {
        return Err(Error::InvalidOrderedGroupoid(violations));
    }
    reflexive_transitive_closure(&mut arr_leq, m);
    for a in 0..m {
        for b in a + 1..m {
            if arr_leq[a * m + b] && arr_leq[b * m + a] {
                violations.push(OgpdViolation::OrderNotAntisymmetric { a: cat.arrow_id(a).clone(), b: cat.arrow_id(b).clone() });
            }
        }
    }
    let mut obj_leq = vec![false; n * n];
    for x in 0..n {
        for y in 0..n {
            obj_leq[x * n + y] = arr_leq[cat.identity(x) * m + cat.identity(y)];
        }
    }
    let aid = |a: ArrIx| cat.arrow_id(a).clone();
    for a in 0..m {
        for b in 0..m {
            if a == b || !arr_leq[a * m + b] {
                continue;
            }
            if !obj_leq[cat.dom(a) * n + cat.dom(b)] || !obj_leq[cat.cod(a) * n + cat.cod(b)] {
                violations.push(OgpdViolation::FrameViolation { lower: aid(a), upper: aid(b) });
            }
            if !arr_leq[inverse[a] * m + inverse[b]] {
                violations.push(OgpdViolation::OrderNotPreserved { lower: aid(a), upper: aid(b) });
            }
        }
    }
    if !violations.is_empty() {
        return Err(Error::InvalidOrderedGroupoid(violations));
    }
    // a ≤ b, c ≤ d with ac and bd defined ⇒ ac ≤ bd
    for a in 0..m {
        for c in 0..m {
            let Some(ac) = cat.compose(a, c) else { continue };
            for b in (0..m).filter(|&b| arr_leq[a * m + b]) {
                for d in (0..m).filter(|&d| arr_leq[c * m + d]) {
                    if let Some(bd) = cat.compose(b, d) {
                        if !arr_leq[ac * m + bd] {
                            violations.push(OgpdViolation::CompositionNotMonotone { a: aid(a), b: aid(b), c: aid(c), d: aid(d) });
                        }
                    }
                }
            }
        }
    }
    let mut restriction = vec![None; m * n];
    for f in 0..m {
        for a in (0..n).filter(|&a| obj_leq[a * n + cat.dom(f)]) {
            let mut found: Option<ArrIx> = None;
            for g in (0..m).filter(|&g| cat.dom(g) == a && arr_leq[g * m + f]) {
                match found {
                    None => found = Some(g),
                    Some(first) => violations.push(OgpdViolation::RestrictionNotUnique {
                        arrow: aid(f),
                        object: cat.object_id(a).clone(),
                        first: aid(first),
                        second: aid(g),
                    }),
                }
            }
            match found {
                Some(g) => restriction[f * n + a] = Some(g),
                None => violations.push(OgpdViolation::RestrictionMissing { arrow: aid(f), object: cat.object_id(a).clone() }),
            }
        }
    }
    if !violations.is_empty() {
        return Err(Error::InvalidOrderedGroupoid(violations));
    }
    let below = (0..n).map(|b| (0..n).filter(|&a| obj_leq[a * n + b]).collect()).collect();
    Ok(OrderedGroupoid { cat: Arc::new(cat), inverse, obj_leq, arr_leq, restriction, below })
}

impl OrderedGroupoid {
    pub fn from_raw(raw: &RawOrderedGroupoid) -> Result<Self, Error> {
        validate_ordered_groupoid(raw)
    }

    /// A groupoid with the discrete order.
    pub fn from_groupoid(c: &FiniteCategory) -> Result<Self, Error> {
        let rc = c.to_raw();
        validate_ordered_groupoid(&RawOrderedGroupoid {
            name: rc.name,
            objects: rc.objects,
            harrows: rc.arrows,
            identities: rc.identities,
            compose: rc.compose,
            ..Default::default()
        })
    }

    pub fn to_raw(&self) -> RawOrderedGroupoid {
        let rc = self.cat.to_raw();
        let n = self.object_count();
        let m = self.harrow_count();
        let mut obj_order = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && self.obj_leq[a * n + b] {
                    obj_order.push((self.object_id(a).clone(), self.object_id(b).clone()));
                }
            }
        }
        let mut arr_order = Vec::new();
        for a in 0..m {
            for b in 0..m {
                if a != b && self.arr_leq[a * m + b] && !(self.cat.is_identity(a) && self.cat.is_identity(b)) {
                    arr_order.push((self.arrow_id(a).clone(), self.arrow_id(b).clone()));
                }
            }
        }
        RawOrderedGroupoid {
            name: rc.name,
            objects: rc.objects,
            harrows: rc.arrows,
            identities: rc.identities,
            inverses: (0..m).map(|f| (self.arrow_id(f).clone(), self.arrow_id(self.inverse[f]).clone())).collect(),
            compose: rc.compose,
            obj_order,
            arr_order,
        }
    }

    pub fn name(&self) -> Option<&str> {
        self.cat.name()
    }

    /// The underlying groupoid, forgetting the order.
    pub fn groupoid(&self) -> &Arc<FiniteCategory> {
        &self.cat
    }

    pub fn object_count(&self) -> usize {
        self.cat.object_count()
    }

    pub fn harrow_count(&self) -> usize {
        self.cat.arrow_count()
    }

    pub fn objects(&self) -> std::ops::Range<ObjIx> {
        self.cat.objects()
    }

    pub fn harrows(&self) -> std::ops::Range<ArrIx> {
        self.cat.arrows()
    }

    pub fn object_id(&self, o: ObjIx) -> &Id {
        self.cat.object_id(o)
    }

    pub fn arrow_id(&self, a: ArrIx) -> &Id {
        self.cat.arrow_id(a)
    }

    pub fn object_ix(&self, id: &str) -> Option<ObjIx> {
        self.cat.object_ix(id)
    }

    pub fn arrow_ix(&self, id: &str) -> Option<ArrIx> {
        self.cat.arrow_ix(id)
    }

    pub fn dom(&self, f: ArrIx) -> ObjIx {
        self.cat.dom(f)
    }

    pub fn cod(&self, f: ArrIx) -> ObjIx {
        self.cat.cod(f)
    }

    pub fn identity(&self, a: ObjIx) -> ArrIx {
        self.cat.identity(a)
    }

    pub fn is_identity(&self, f: ArrIx) -> bool {
        self.cat.is_identity(f)
    }

    pub fn compose(&self, g: ArrIx, f: ArrIx) -> Option<ArrIx> {
        self.cat.compose(g, f)
    }

    pub fn comp(&self, g: ArrIx, f: ArrIx) -> ArrIx {
        self.cat.comp(g, f)
    }

    pub fn hom(&self, a: ObjIx, b: ObjIx) -> &[ArrIx] {
        self.cat.hom(a, b)
    }

    pub fn inverse(&self, f: ArrIx) -> ArrIx {
        self.inverse[f]
    }

    pub fn obj_leq(&self, a: ObjIx, b: ObjIx) -> bool {
        self.obj_leq[a * self.object_count() + b]
    }

    pub fn arr_leq(&self, f: ArrIx, g: ArrIx) -> bool {
        self.arr_leq[f * self.harrow_count() + g]
    }

    /// Objects `≤ b`, in index order.
    pub fn below(&self, b: ObjIx) -> &[ObjIx] {
        &self.below[b]
    }

    pub fn has_trivial_order(&self) -> bool {
        self.objects().all(|b| self.below[b].len() == 1)
    }

    /// `f|_{a}`: the unique arrow below `f` with domain `a`.
    pub fn restrict(&self, f: ArrIx, a: ObjIx) -> Result<ArrIx, Error> {
        self.restriction[f * self.object_count() + a].ok_or_else(|| Error::NotBelowDomain {
            arrow: self.arrow_id(f).clone(),
            object: self.object_id(a).clone(),
        })
    }

    /// Restriction where `a ≤ dom(f)` is already known.
    pub fn res(&self, f: ArrIx, a: ObjIx) -> ArrIx {
        self.restriction[f * self.object_count() + a]
            .unwrap_or_else(|| panic!("{} is not below dom({})", self.object_id(a), self.arrow_id(f)))
    }

    /// The unique arrow below `f` with codomain `b`.
    pub fn corestrict(&self, f: ArrIx, b: ObjIx) -> Result<ArrIx, Error> {
        let g = self.inverse(f);
        match self.restriction[g * self.object_count() + b] {
            Some(r) => Ok(self.inverse(r)),
            None => Err(Error::NotBelowCodomain { arrow: self.arrow_id(f).clone(), object: self.object_id(b).clone() }),
        }
    }

    pub fn find_max_objects(&self) -> Result<MaxObjectStructure, MaxObjectFailure> {
        let mut hat = Vec::with_capacity(self.object_count());
        for a in self.objects() {
            let maxima: Vec<ObjIx> = self
                .objects()
                .filter(|&m| self.obj_leq(a, m) && self.objects().all(|x| x == m || !self.obj_leq(m, x)))
                .collect();
            if maxima.len() != 1 {
                return Err(MaxObjectFailure {
                    object: self.object_id(a).clone(),
                    maxima: maxima.iter().map(|&m| self.object_id(m).clone()).collect(),
                });
            }
            hat.push(maxima[0]);
        }
        Ok(MaxObjectStructure { hat })
    }

    pub fn require_max_objects(&self) -> Result<MaxObjectStructure, Error> {
        self.find_max_objects().map_err(|f| Error::NoMaxObjects { object: f.object })
    }
}

/// `hat(A)`: the unique maximal object above `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxObjectStructure {
    hat: Vec<ObjIx>,
}

impl MaxObjectStructure {
    pub fn hat(&self, a: ObjIx) -> ObjIx {
        self.hat[a]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaxObjectFailure {
    pub object: Id,
    pub maxima: Vec<Id>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum DoubleFunctorViolation {
    Functor(FunctorViolation),
    ObjectOrder { lower: Id, upper: Id },
    ArrowOrder { lower: Id, upper: Id },
}

impl fmt::Display for DoubleFunctorViolation {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DoubleFunctorViolation::Functor(v) => write!(fm, "{v}"),
            DoubleFunctorViolation::ObjectOrder { lower, upper } => write!(fm, "object order {lower} ≤ {upper} not preserved"),
            DoubleFunctorViolation::ArrowOrder { lower, upper } => write!(fm, "arrow order {lower} ≤ {upper} not preserved"),
        }
    }
}

/// An ordered functor: a groupoid functor preserving both orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleFunctor {
    source: Arc<OrderedGroupoid>,
    target: Arc<OrderedGroupoid>,
    obj_map: Vec<ObjIx>,
    arr_map: Vec<ArrIx>,
}

impl DoubleFunctor {
    pub fn new(
        source: Arc<OrderedGroupoid>,
        target: Arc<OrderedGroupoid>,
        obj_map: Vec<ObjIx>,
        arr_map: Vec<ArrIx>,
    ) -> Result<Self, Error> {
        let under = Functor::new(source.cat.clone(), target.cat.clone(), obj_map.clone(), arr_map.clone());
        if let Err(Error::InvalidFunctor(v)) = under {
            return Err(Error::InvalidDoubleFunctor(v.into_iter().map(DoubleFunctorViolation::Functor).collect()));
        }
        under?;
        let mut v = Vec::new();
        for a in source.objects() {
            for &b in source.objects().filter(|&b| source.obj_leq(a, b)).collect::<Vec<_>>().iter() {
                if !target.obj_leq(obj_map[a], obj_map[b]) {
                    v.push(DoubleFunctorViolation::ObjectOrder { lower: source.object_id(a).clone(), upper: source.object_id(b).clone() });
                }
            }
        }
        for f in source.harrows() {
            for g in source.harrows() {
                if source.arr_leq(f, g) && !target.arr_leq(arr_map[f], arr_map[g]) {
                    v.push(DoubleFunctorViolation::ArrowOrder { lower: source.arrow_id(f).clone(), upper: source.arrow_id(g).clone() });
                }
            }
        }
        if v.is_empty() {
            Ok(DoubleFunctor { source, target, obj_map, arr_map })
        } else {
            Err(Error::InvalidDoubleFunctor(v))
        }
    }

    pub fn from_maps(source: Arc<OrderedGroupoid>, target: Arc<OrderedGroupoid>, maps: &RawFunctorMaps) -> Result<Self, Error> {
        let f = Functor::from_maps(source.cat.clone(), target.cat.clone(), maps);
        let f = match f {
            Err(Error::InvalidFunctor(v)) => {
                return Err(Error::InvalidDoubleFunctor(v.into_iter().map(DoubleFunctorViolation::Functor).collect()))
            }
            other => other?,
        };
        DoubleFunctor::new(source, target, f.obj_map().to_vec(), f.arr_map().to_vec())
    }

    pub fn to_maps(&self) -> RawFunctorMaps {
        self.underlying().to_maps()
    }

    pub fn identity(g: &Arc<OrderedGroupoid>) -> Self {
        DoubleFunctor {
            source: g.clone(),
            target: g.clone(),
            obj_map: g.objects().collect(),
            arr_map: g.harrows().collect(),
        }
    }

    /// The functor between underlying groupoids.
    pub fn underlying(&self) -> Functor {
        Functor::new(self.source.cat.clone(), self.target.cat.clone(), self.obj_map.clone(), self.arr_map.clone())
            .expect("validated double functor")
    }

    pub fn source(&self) -> &Arc<OrderedGroupoid> {
        &self.source
    }

    pub fn target(&self) -> &Arc<OrderedGroupoid> {
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
    pub fn then(&self, next: &DoubleFunctor) -> Result<DoubleFunctor, Error> {
        if *self.target != *next.source {
            return Err(Error::NotComposable("double functor target differs from next source".into()));
        }
        Ok(DoubleFunctor {
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

    /// Pointwise order: `self(X) ≤ other(X)` and `self(h) ≤ other(h)`.
    pub fn leq(&self, other: &DoubleFunctor) -> bool {
        let t = &self.target;
        self.obj_map.iter().zip(&other.obj_map).all(|(&a, &b)| t.obj_leq(a, b))
            && self.arr_map.iter().zip(&other.arr_map).all(|(&a, &b)| t.arr_leq(a, b))
    }

    fn same_ends(&self, other: &DoubleFunctor) -> bool {
        *self.source == *other.source && *self.target == *other.target
    }
}

/// Components `α_X : F X → K X` that are natural in horizontal arrows and
/// monotone in the object order. All such transformations are invertible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HorizontalTransformation {
    source: DoubleFunctor,
    target: DoubleFunctor,
    components: Vec<ArrIx>,
}

impl HorizontalTransformation {
    pub fn new(source: DoubleFunctor, target: DoubleFunctor, components: Vec<ArrIx>) -> Result<Self, Error> {
        if !source.same_ends(&target) {
            return Err(Error::NotComposable("horizontal transformation between functors with different endpoints".into()));
        }
        let g = &*source.source;
        let h = &*source.target;
        if components.len() != g.object_count() {
            return Err(Error::NotNatural(Id::from("<components>")));
        }
        for x in g.objects() {
            let c = components[x];
            if c >= h.harrow_count() || h.dom(c) != source.obj(x) || h.cod(c) != target.obj(x) {
                return Err(Error::NotNatural(g.object_id(x).clone()));
            }
        }
        for f in g.harrows() {
            if h.compose(target.arr(f), components[g.dom(f)]) != h.compose(components[g.cod(f)], source.arr(f)) {
                return Err(Error::NotNatural(g.arrow_id(f).clone()));
            }
        }
        for x in g.objects() {
            for &y in g.below(x) {
                if !h.arr_leq(components[y], components[x]) {
                    return Err(Error::NotNatural(g.object_id(y).clone()));
                }
            }
        }
        Ok(HorizontalTransformation { source, target, components })
    }

    pub fn identity(f: &DoubleFunctor) -> Self {
        HorizontalTransformation {
            source: f.clone(),
            target: f.clone(),
            components: f.source.objects().map(|x| f.target.identity(f.obj(x))).collect(),
        }
    }

    pub fn source(&self) -> &DoubleFunctor {
        &self.source
    }

    pub fn target(&self) -> &DoubleFunctor {
        &self.target
    }

    pub fn component(&self, x: ObjIx) -> ArrIx {
        self.components[x]
    }

    pub fn components(&self) -> &[ArrIx] {
        &self.components
    }

    /// `other · self`.
    pub fn then(&self, other: &HorizontalTransformation) -> Result<Self, Error> {
        if self.target != other.source {
            return Err(Error::NotComposable("horizontal transformations do not meet".into()));
        }
        let h = &self.source.target;
        let components = self.components.iter().zip(&other.components).map(|(&a, &b)| h.comp(b, a)).collect();
        Ok(HorizontalTransformation { source: self.source.clone(), target: other.target.clone(), components })
    }

    pub fn inverse(&self) -> Self {
        let h = &self.source.target;
        HorizontalTransformation {
            source: self.target.clone(),
            target: self.source.clone(),
            components: self.components.iter().map(|&c| h.inverse(c)).collect(),
        }
    }

    /// Restriction along `lower ≤ source`, by completing each square with the
    /// lifting property of the target: components `α_X|_{lower X}`, and the
    /// new target functor sends `h` to `K h|_{…}`.
    pub fn restrict_to(&self, lower: &DoubleFunctor) -> Result<Self, Error> {
        if !lower.same_ends(&self.source) || !lower.leq(&self.source) {
            return Err(Error::NotComposable("restriction along a functor that is not below the source".into()));
        }
        let g = &*self.source.source;
        let h = &*self.source.target;
        let components: Vec<ArrIx> = g.objects().map(|x| h.res(self.components[x], lower.obj(x))).collect();
        let obj_map: Vec<ObjIx> = components.iter().map(|&c| h.cod(c)).collect();
        let arr_map: Vec<ArrIx> = g.harrows().map(|f| h.res(self.target.arr(f), obj_map[g.dom(f)])).collect();
        let target = DoubleFunctor::new(self.source.source.clone(), self.source.target.clone(), obj_map, arr_map)?;
        HorizontalTransformation::new(lower.clone(), target, components)
    }

    /// `H α`.
    pub fn whisker_left(&self, hf: &DoubleFunctor) -> Result<Self, Error> {
        let components = self.components.iter().map(|&c| hf.arr(c)).collect();
        HorizontalTransformation::new(self.source.then(hf)?, self.target.then(hf)?, components)
    }

    /// `α F`.
    pub fn whisker_right(&self, f: &DoubleFunctor) -> Result<Self, Error> {
        let components = f.obj_map.iter().map(|&x| self.components[x]).collect();
        HorizontalTransformation::new(f.then(&self.source)?, f.then(&self.target)?, components)
    }
}

/// Search for a horizontal transformation `F ⇒ K`.
pub fn find_horizontal_transformation(f: &DoubleFunctor, k: &DoubleFunctor) -> Option<HorizontalTransformation> {
    all_horizontal_transformations(f, k, 1).ok()?.into_iter().next()
}

fn all_horizontal_transformations(f: &DoubleFunctor, k: &DoubleFunctor, want: usize) -> Result<Vec<HorizontalTransformation>, Error> {
    if !f.same_ends(k) {
        return Ok(Vec::new());
    }
    let g = &*f.source;
    let h = &*f.target;
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(g.object_count());
    let mut nodes = 0usize;
    #[allow(clippy::too_many_arguments)]
    fn go(
        g: &OrderedGroupoid,
        h: &OrderedGroupoid,
        f: &DoubleFunctor,
        k: &DoubleFunctor,
        chosen: &mut Vec<ArrIx>,
        out: &mut Vec<Vec<ArrIx>>,
        want: usize,
        nodes: &mut usize,
    ) -> Result<(), Error> {
        *nodes += 1;
        if *nodes > SEARCH_LIMIT {
            return Err(Error::TooLarge { what: "horizontal transformation search".into(), limit: SEARCH_LIMIT });
        }
        let x = chosen.len();
        if x == g.object_count() {
            out.push(chosen.clone());
            return Ok(());
        }
        for &c in h.hom(f.obj(x), k.obj(x)) {
            chosen.push(c);
            let natural = (0..=x).all(|y| {
                g.hom(y, x).iter().chain(g.hom(x, y)).all(|&a| {
                    h.compose(k.arr(a), chosen[g.dom(a)]) == h.compose(chosen[g.cod(a)], f.arr(a))
                })
            });
            let monotone = (0..=x).all(|y| {
                (!g.obj_leq(y, x) || h.arr_leq(chosen[y], chosen[x])) && (!g.obj_leq(x, y) || h.arr_leq(chosen[x], chosen[y]))
            });
            if natural && monotone {
                go(g, h, f, k, chosen, out, want, nodes)?;
                if out.len() >= want {
                    return Ok(());
                }
            }
            chosen.pop();
        }
        Ok(())
    }
    let mut raw = Vec::new();
    go(g, h, f, k, &mut chosen, &mut raw, want, &mut nodes)?;
    for comps in raw {
        out.push(HorizontalTransformation { source: f.clone(), target: k.clone(), components: comps });
    }
    Ok(out)
}

/// Every double functor `G → H`, enumerated by backtracking over object maps
/// and then arrow maps.
pub fn enumerate_double_functors(g: &Arc<OrderedGroupoid>, h: &Arc<OrderedGroupoid>) -> Result<Vec<DoubleFunctor>, Error> {
    let mut nodes = 0usize;
    let mut out = Vec::new();
    let mut objs = Vec::with_capacity(g.object_count());
    enum_objects(g, h, &mut objs, &mut out, &mut nodes)?;
    Ok(out)
}

fn bump(nodes: &mut usize) -> Result<(), Error> {
    *nodes += 1;
    if *nodes > SEARCH_LIMIT {
        return Err(Error::TooLarge { what: "double functor enumeration".into(), limit: SEARCH_LIMIT });
    }
    Ok(())
}

fn enum_objects(
    g: &Arc<OrderedGroupoid>,
    h: &Arc<OrderedGroupoid>,
    objs: &mut Vec<ObjIx>,
    out: &mut Vec<DoubleFunctor>,
    nodes: &mut usize,
) -> Result<(), Error> {
    bump(nodes)?;
    let x = objs.len();
    if x == g.object_count() {
        let mut arrs = vec![usize::MAX; g.harrow_count()];
        for o in g.objects() {
            arrs[g.identity(o)] = h.identity(objs[o]);
        }
        return enum_arrows(g, h, objs, &mut arrs, 0, out, nodes);
    }
    for y in h.objects() {
        let ok = (0..x).all(|w| (!g.obj_leq(w, x) || h.obj_leq(objs[w], y)) && (!g.obj_leq(x, w) || h.obj_leq(y, objs[w])));
        if ok {
            objs.push(y);
            enum_objects(g, h, objs, out, nodes)?;
            objs.pop();
        }
    }
    Ok(())
}

fn arrows_consistent(g: &OrderedGroupoid, h: &OrderedGroupoid, arrs: &[ArrIx], a: ArrIx) -> bool {
    let set = |x: ArrIx| arrs[x] != usize::MAX;
    for b in g.harrows().filter(|&b| set(b)) {
        if g.arr_leq(a, b) && !h.arr_leq(arrs[a], arrs[b]) || g.arr_leq(b, a) && !h.arr_leq(arrs[b], arrs[a]) {
            return false;
        }
        for (x, y) in [(a, b), (b, a)] {
            if let Some(xy) = g.compose(x, y) {
                if set(xy) && h.compose(arrs[x], arrs[y]) != Some(arrs[xy]) {
                    return false;
                }
            }
        }
        // a as a composite of b with something already assigned
        for c in g.harrows().filter(|&c| set(c)) {
            if g.compose(b, c) == Some(a) && h.compose(arrs[b], arrs[c]) != Some(arrs[a]) {
                return false;
            }
        }
    }
    true
}

fn enum_arrows(
    g: &Arc<OrderedGroupoid>,
    h: &Arc<OrderedGroupoid>,
    objs: &[ObjIx],
    arrs: &mut Vec<ArrIx>,
    from: usize,
    out: &mut Vec<DoubleFunctor>,
    nodes: &mut usize,
) -> Result<(), Error> {
    bump(nodes)?;
    let Some(a) = (from..g.harrow_count()).find(|&a| arrs[a] == usize::MAX) else {
        if let Ok(f) = DoubleFunctor::new(g.clone(), h.clone(), objs.to_vec(), arrs.clone()) {
            out.push(f);
        }
        return Ok(());
    };
    for &c in h.hom(objs[g.dom(a)], objs[g.cod(a)]) {
        arrs[a] = c;
        if arrows_consistent(g, h, arrs, a) {
            enum_arrows(g, h, objs, arrs, a + 1, out, nodes)?;
        }
    }
    arrs[a] = usize::MAX;
    Ok(())
}

/// The ordered groupoid of double functors and horizontal transformations,
/// together with the data each object and arrow stands for.
#[derive(Clone, Debug)]
pub struct HomOrderedGroupoid {
    pub groupoid: Arc<OrderedGroupoid>,
    /// Indexed like the objects of `groupoid`.
    pub functors: Vec<DoubleFunctor>,
    /// Indexed like the harrows of `groupoid`.
    pub transformations: Vec<HorizontalTransformation>,
}

fn functor_id(f: &DoubleFunctor) -> Id {
    let g = &f.source;
    let h = &f.target;
    let objs: Vec<&str> = f.obj_map.iter().map(|&o| h.object_id(o).as_str()).collect();
    let arrs: Vec<&str> = g.harrows().filter(|&a| !g.is_identity(a)).map(|a| h.arrow_id(f.arr(a)).as_str()).collect();
    Id::new(format!("⟨{}|{}⟩", objs.join(","), arrs.join(",")))
}

pub fn hom_ordered_groupoid(g: &Arc<OrderedGroupoid>, h: &Arc<OrderedGroupoid>) -> Result<HomOrderedGroupoid, Error> {
    let mut functors = enumerate_double_functors(g, h)?;
    let mut ids: Vec<(Id, usize)> = functors.iter().map(functor_id).enumerate().map(|(i, id)| (id, i)).collect();
    ids.sort();
    functors = ids.iter().map(|(_, i)| functors[*i].clone()).collect();
    let fids: Vec<Id> = ids.into_iter().map(|(id, _)| id).collect();

    let mut transformations = Vec::new();
    let mut total = 0usize;
    for f in &functors {
        for k in &functors {
            let ts = all_horizontal_transformations(f, k, usize::MAX)?;
            total += ts.len();
            if total > SEARCH_LIMIT {
                return Err(Error::TooLarge { what: "hom ordered groupoid".into(), limit: SEARCH_LIMIT });
            }
            transformations.extend(ts);
        }
    }
    let index_of = |f: &DoubleFunctor| functors.iter().position(|x| x == f).expect("enumerated functor");
    let tid = |t: &HorizontalTransformation| {
        let comps: Vec<&str> = t.components.iter().map(|&c| h.arrow_id(c).as_str()).collect();
        Id::new(format!("{}⇒{}:[{}]", fids[index_of(&t.source)], fids[index_of(&t.target)], comps.join(",")))
    };
    let mut tagged: Vec<(Id, HorizontalTransformation)> = transformations.into_iter().map(|t| (tid(&t), t)).collect();
    tagged.sort_by(|a, b| a.0.cmp(&b.0));
    let tids: Vec<Id> = tagged.iter().map(|(id, _)| id.clone()).collect();
    let transformations: Vec<HorizontalTransformation> = tagged.into_iter().map(|(_, t)| t).collect();
    let t_index: HashMap<Vec<ArrIx>, Vec<usize>> = transformations.iter().enumerate().fold(HashMap::new(), |mut m, (i, t)| {
        m.entry(t.components.clone()).or_default().push(i);
        m
    });
    let find_t = |t: &HorizontalTransformation| {
        t_index[&t.components].iter().copied().find(|&i| transformations[i] == *t).expect("closed under composition")
    };

    let mut raw = RawOrderedGroupoid {
        name: None,
        objects: fids.clone(),
        harrows: Vec::new(),
        identities: BTreeMap::new(),
        inverses: BTreeMap::new(),
        compose: Vec::new(),
        obj_order: Vec::new(),
        arr_order: Vec::new(),
    };
    for (i, t) in transformations.iter().enumerate() {
        raw.harrows.push((tids[i].clone(), fids[index_of(&t.source)].clone(), fids[index_of(&t.target)].clone()));
        raw.inverses.insert(tids[i].clone(), tids[find_t(&t.inverse())].clone());
        if t.source == t.target && t.components.iter().all(|&c| h.is_identity(c)) {
            raw.identities.insert(fids[index_of(&t.source)].clone(), tids[i].clone());
        }
    }
    for (i, s) in transformations.iter().enumerate() {
        for (j, t) in transformations.iter().enumerate() {
            if s.target == t.source {
                let st = s.then(t)?;
                raw.compose.push((tids[j].clone(), tids[i].clone(), tids[find_t(&st)].clone()));
            }
        }
    }
    for (i, a) in functors.iter().enumerate() {
        for (j, b) in functors.iter().enumerate() {
            if i != j && a.leq(b) {
                raw.obj_order.push((fids[i].clone(), fids[j].clone()));
            }
        }
    }
    for (i, s) in transformations.iter().enumerate() {
        for (j, t) in transformations.iter().enumerate() {
            if i != j
                && s.source.leq(&t.source)
                && s.target.leq(&t.target)
                && s.components.iter().zip(&t.components).all(|(&a, &b)| h.arr_leq(a, b))
            {
                raw.arr_order.push((tids[i].clone(), tids[j].clone()));
            }
        }
    }
    let groupoid = Arc::new(validate_ordered_groupoid(&raw)?);
    Ok(HomOrderedGroupoid { groupoid, functors, transformations })
}

impl HomOrderedGroupoid {
    pub fn functor_ix(&self, f: &DoubleFunctor) -> Option<ObjIx> {
        self.functors.iter().position(|x| x == f)
    }

    pub fn transformation_ix(&self, t: &HorizontalTransformation) -> Option<ArrIx> {
        self.transformations.iter().position(|x| x == t)
    }

    /// Restriction of transformation `t` to functor `f` computed by lifting,
    /// as an arrow of `groupoid`.
    pub fn lifted_restriction(&self, t: ArrIx, f: ObjIx) -> Result<ArrIx, Error> {
        let r = self.transformations[t].restrict_to(&self.functors[f])?;
        self.transformation_ix(&r).ok_or_else(|| Error::UnknownId(Id::from("<restricted transformation>")))
    }
}

/// A horizontal transformation `F ⇒ G'` followed by the vertical `G' ≤ G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaTransformation {
    alpha: HorizontalTransformation,
    target: DoubleFunctor,
}

impl LambdaTransformation {
    pub fn new(alpha: HorizontalTransformation, target: DoubleFunctor) -> Result<Self, Error> {
        if !alpha.target.same_ends(&target) || !alpha.target.leq(&target) {
            return Err(Error::NotComposable("middle functor is not below the target".into()));
        }
        Ok(LambdaTransformation { alpha, target })
    }

    pub fn identity(f: &DoubleFunctor) -> Self {
        LambdaTransformation { alpha: HorizontalTransformation::identity(f), target: f.clone() }
    }

    pub fn source(&self) -> &DoubleFunctor {
        &self.alpha.source
    }

    pub fn mid(&self) -> &DoubleFunctor {
        &self.alpha.target
    }

    pub fn target(&self) -> &DoubleFunctor {
        &self.target
    }

    pub fn alpha(&self) -> &HorizontalTransformation {
        &self.alpha
    }

    /// `next · self`: restrict `next`'s horizontal part along this vertical
    /// part, then compose horizontals.
    pub fn then(&self, next: &LambdaTransformation) -> Result<Self, Error> {
        if self.target != *next.source() {
            return Err(Error::NotComposable("Λ-transformations do not meet".into()));
        }
        let restricted = next.alpha.restrict_to(self.mid())?;
        let alpha = self.alpha.then(&restricted)?;
        LambdaTransformation::new(alpha, next.target.clone())
    }

    /// `H (α, ≤) = (H α, H G' ≤ H G)`.
    pub fn whisker_left(&self, hf: &DoubleFunctor) -> Result<Self, Error> {
        LambdaTransformation::new(self.alpha.whisker_left(hf)?, self.target.then(hf)?)
    }

    /// `(β, ≤) F = (β F, K' F ≤ K F)`.
    pub fn whisker_right(&self, f: &DoubleFunctor) -> Result<Self, Error> {
        LambdaTransformation::new(self.alpha.whisker_right(f)?, f.then(&self.target)?)
    }

    /// `outer ∘ self` for `self: F ⇒ G` on `𝒢 → ℋ` and `outer: H ⇒ K` on
    /// `ℋ → 𝒦`: the vertical composite of `H self` and `outer G`.
    pub fn horizontal_compose(&self, outer: &LambdaTransformation) -> Result<Self, Error> {
        let h_self = self.whisker_left(outer.source())?;
        let outer_g = outer.whisker_right(&self.target)?;
        h_self.then(&outer_g)
    }
}

/// A preimage of `Y` up to a horizontal arrow: `h : F X → Y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ObjectLift {
    pub x: ObjIx,
    pub h: ArrIx,
}

/// A lift of `Y0 ≤ Y1`: `X0 ≤ X1` with `h0 ≤ h1`, `h_i : F X_i → Y_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerticalLift {
    pub x: [ObjIx; 2],
    pub h: [ArrIx; 2],
}

/// A lift of `Y0 ≤ Y1 ≤ Y2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairLift {
    pub x: [ObjIx; 3],
    pub h: [ArrIx; 3],
}

impl DoubleFunctor {
    pub fn is_object_lift(&self, y: ObjIx, l: &ObjectLift) -> bool {
        let t = &self.target;
        t.dom(l.h) == self.obj(l.x) && t.cod(l.h) == y
    }

    fn is_chain_lift(&self, ys: &[ObjIx], xs: &[ObjIx], hs: &[ArrIx]) -> bool {
        let (s, t) = (&self.source, &self.target);
        (0..ys.len()).all(|i| t.dom(hs[i]) == self.obj(xs[i]) && t.cod(hs[i]) == ys[i])
            && (1..ys.len()).all(|i| s.obj_leq(xs[i - 1], xs[i]) && t.arr_leq(hs[i - 1], hs[i]))
    }

    pub fn is_vertical_lift(&self, ys: [ObjIx; 2], l: &VerticalLift) -> bool {
        self.is_chain_lift(&ys, &l.x, &l.h)
    }

    pub fn is_pair_lift(&self, ys: [ObjIx; 3], l: &PairLift) -> bool {
        self.is_chain_lift(&ys, &l.x, &l.h)
    }

    fn find_chain_lift<const N: usize>(&self, ys: [ObjIx; N]) -> Option<([ObjIx; N], [ArrIx; N])> {
        let s = &self.source;
        let t = &self.target;
        let mut xs = [0; N];
        let mut hs = [0; N];
        fn go<const N: usize>(
            f: &DoubleFunctor,
            s: &OrderedGroupoid,
            t: &OrderedGroupoid,
            ys: &[ObjIx; N],
            i: usize,
            xs: &mut [ObjIx; N],
            hs: &mut [ArrIx; N],
        ) -> bool {
            if i == N {
                return true;
            }
            for x in s.objects() {
                if i > 0 && !s.obj_leq(xs[i - 1], x) {
                    continue;
                }
                for &h in t.hom(f.obj(x), ys[i]) {
                    if i > 0 && !t.arr_leq(hs[i - 1], h) {
                        continue;
                    }
                    xs[i] = x;
                    hs[i] = h;
                    if go(f, s, t, ys, i + 1, xs, hs) {
                        return true;
                    }
                }
            }
            false
        }
        go(self, s, t, &ys, 0, &mut xs, &mut hs).then_some((xs, hs))
    }

    pub fn find_object_lift(&self, y: ObjIx) -> Option<ObjectLift> {
        self.find_chain_lift([y]).map(|(x, h)| ObjectLift { x: x[0], h: h[0] })
    }

    pub fn find_vertical_lift(&self, ys: [ObjIx; 2]) -> Option<VerticalLift> {
        self.find_chain_lift(ys).map(|(x, h)| VerticalLift { x, h })
    }

    pub fn find_pair_lift(&self, ys: [ObjIx; 3]) -> Option<PairLift> {
        self.find_chain_lift(ys).map(|(x, h)| PairLift { x, h })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "failure", rename_all = "snake_case")]
pub enum DoubleWeakEquivalenceFailure {
    ObjectNotReached { object: Id },
    VerticalNotReached { lower: Id, upper: Id },
    PairNotReached { bottom: Id, middle: Id, top: Id },
    HarrowsNotBijective { from: Id, to: Id },
    CellNotReflected { lower: Id, upper: Id },
}

/// The three surjectivity checks and the two fully-faithfulness checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoubleWeakEquivalenceVerdict {
    pub objects_surjective: Result<(), DoubleWeakEquivalenceFailure>,
    pub vertical_surjective: Result<(), DoubleWeakEquivalenceFailure>,
    pub pairs_surjective: Result<(), DoubleWeakEquivalenceFailure>,
    pub harrows_bijective: Result<(), DoubleWeakEquivalenceFailure>,
    pub cells_reflected: Result<(), DoubleWeakEquivalenceFailure>,
}

impl DoubleWeakEquivalenceVerdict {
    pub fn essentially_surjective(&self) -> bool {
        self.objects_surjective.is_ok() && self.vertical_surjective.is_ok() && self.pairs_surjective.is_ok()
    }

    pub fn fully_faithful(&self) -> bool {
        self.harrows_bijective.is_ok() && self.cells_reflected.is_ok()
    }

    pub fn holds(&self) -> bool {
        self.essentially_surjective() && self.fully_faithful()
    }
}

pub fn check_double_weak_equivalence(f: &DoubleFunctor) -> DoubleWeakEquivalenceVerdict {
    let s = &*f.source;
    let t = &*f.target;
    let oid = |o: ObjIx| t.object_id(o).clone();
    let objects_surjective = match t.objects().find(|&y| f.find_object_lift(y).is_none()) {
        Some(y) => Err(DoubleWeakEquivalenceFailure::ObjectNotReached { object: oid(y) }),
        None => Ok(()),
    };
    let mut vertical_surjective = Ok(());
    let mut pairs_surjective = Ok(());
    'v: for y1 in t.objects() {
        for &y0 in t.below(y1) {
            if f.find_vertical_lift([y0, y1]).is_none() {
                vertical_surjective = Err(DoubleWeakEquivalenceFailure::VerticalNotReached { lower: oid(y0), upper: oid(y1) });
                break 'v;
            }
        }
    }
    'p: for y2 in t.objects() {
        for &y1 in t.below(y2) {
            for &y0 in t.below(y1) {
                if f.find_pair_lift([y0, y1, y2]).is_none() {
                    pairs_surjective =
                        Err(DoubleWeakEquivalenceFailure::PairNotReached { bottom: oid(y0), middle: oid(y1), top: oid(y2) });
                    break 'p;
                }
            }
        }
    }
    let mut harrows_bijective = Ok(());
    'h: for a in s.objects() {
        for b in s.objects() {
            let mut image: Vec<ArrIx> = s.hom(a, b).iter().map(|&h| f.arr(h)).collect();
            image.sort_unstable();
            let mut target: Vec<ArrIx> = t.hom(f.obj(a), f.obj(b)).to_vec();
            target.sort_unstable();
            if image != target {
                harrows_bijective = Err(DoubleWeakEquivalenceFailure::HarrowsNotBijective {
                    from: s.object_id(a).clone(),
                    to: s.object_id(b).clone(),
                });
                break 'h;
            }
        }
    }
    let mut cells_reflected = Ok(());
    'c: for h in s.harrows() {
        for k in s.harrows() {
            if s.obj_leq(s.dom(h), s.dom(k)) && s.obj_leq(s.cod(h), s.cod(k)) && s.arr_leq(h, k) != t.arr_leq(f.arr(h), f.arr(k)) {
                cells_reflected = Err(DoubleWeakEquivalenceFailure::CellNotReflected {
                    lower: s.arrow_id(h).clone(),
                    upper: s.arrow_id(k).clone(),
                });
                break 'c;
            }
        }
    }
    DoubleWeakEquivalenceVerdict { objects_surjective, vertical_surjective, pairs_surjective, harrows_bijective, cells_reflected }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(xs: &[&str]) -> Vec<Id> {
        xs.iter().map(|&s| Id::from(s)).collect()
    }

    fn triples(xs: &[(&str, &str, &str)]) -> Vec<(Id, Id, Id)> {
        xs.iter().map(|&(a, b, c)| (a.into(), b.into(), c.into())).collect()
    }

    fn pairs(xs: &[(&str, &str)]) -> Vec<(Id, Id)> {
        xs.iter().map(|&(a, b)| (a.into(), b.into())).collect()
    }

    fn interval() -> RawOrderedGroupoid {
        RawOrderedGroupoid {
            objects: ids(&["0", "1"]),
            harrows: triples(&[("i0", "0", "0"), ("i1", "1", "1")]),
            identities: pairs(&[("0", "i0"), ("1", "i1")]).into_iter().collect(),
            obj_order: pairs(&[("0", "1")]),
            ..Default::default()
        }
    }

    fn interval_z2() -> RawOrderedGroupoid {
        RawOrderedGroupoid {
            objects: ids(&["0", "1"]),
            harrows: triples(&[("e0", "0", "0"), ("e1", "1", "1"), ("s0", "0", "0"), ("s1", "1", "1")]),
            identities: pairs(&[("0", "e0"), ("1", "e1")]).into_iter().collect(),
            inverses: pairs(&[("s0", "s0"), ("s1", "s1")]).into_iter().collect(),
            compose: vec![],
            obj_order: pairs(&[("0", "1")]),
            arr_order: pairs(&[("s0", "s1")]),
            ..Default::default()
        }
    }

    fn z2_with(order: &[(&str, &str)]) -> RawOrderedGroupoid {
        RawOrderedGroupoid {
            objects: ids(&["*"]),
            harrows: triples(&[("e", "*", "*"), ("s", "*", "*")]),
            identities: pairs(&[("*", "e")]).into_iter().collect(),
            inverses: pairs(&[("s", "s")]).into_iter().collect(),
            arr_order: pairs(order),
            ..Default::default()
        }
    }

    #[test]
    fn interval_restrictions() {
        let g = validate_ordered_groupoid(&interval()).unwrap();
        let (i0, i1) = (g.arrow_ix("i0").unwrap(), g.arrow_ix("i1").unwrap());
        assert_eq!(g.restrict(i1, 0).unwrap(), i0);
        assert!(matches!(g.restrict(i0, 1), Err(Error::NotBelowDomain { .. })));
    }

    #[test]
    fn interval_groupoid_restricts_top_iso_to_bottom_iso() {
        let g = validate_ordered_groupoid(&interval_z2()).unwrap();
        let s1 = g.arrow_ix("s1").unwrap();
        assert_eq!(g.arrow_id(g.restrict(s1, 0).unwrap()).as_str(), "s0");
        assert_eq!(g.corestrict(s1, 0).unwrap(), g.inverse(g.restrict(g.inverse(s1), 0).unwrap()));
    }

    #[test]
    fn z2_ordered_below_identity_is_rejected() {
        match validate_ordered_groupoid(&z2_with(&[("s", "e")])) {
            Err(Error::InvalidOrderedGroupoid(v)) => assert!(!v.is_empty()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_restriction_is_reported() {
        let mut raw = interval_z2();
        raw.arr_order.clear();
        match validate_ordered_groupoid(&raw) {
            Err(Error::InvalidOrderedGroupoid(v)) => assert!(v.contains(&OgpdViolation::RestrictionMissing {
                arrow: "s1".into(),
                object: "0".into()
            })),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn v_poset_has_no_max_objects() {
        let raw = RawOrderedGroupoid {
            objects: ids(&["a", "b", "c"]),
            harrows: triples(&[("1a", "a", "a"), ("1b", "b", "b"), ("1c", "c", "c")]),
            identities: pairs(&[("a", "1a"), ("b", "1b"), ("c", "1c")]).into_iter().collect(),
            obj_order: pairs(&[("a", "b"), ("a", "c")]),
            ..Default::default()
        };
        let g = validate_ordered_groupoid(&raw).unwrap();
        let fail = g.find_max_objects().unwrap_err();
        assert_eq!(fail.object.as_str(), "a");
        assert_eq!(fail.maxima, ids(&["b", "c"]));
    }

    #[test]
    fn hom_of_interval_into_itself() {
        let g = Arc::new(validate_ordered_groupoid(&interval()).unwrap());
        let hom = hom_ordered_groupoid(&g, &g).unwrap();
        assert_eq!(hom.groupoid.object_count(), 3);
        assert_eq!(hom.groupoid.harrow_count(), 3);
    }

    #[test]
    fn lifted_restriction_matches_table() {
        let g = Arc::new(validate_ordered_groupoid(&interval_z2()).unwrap());
        let hom = hom_ordered_groupoid(&g, &g).unwrap();
        let hg = &hom.groupoid;
        for t in hg.harrows() {
            for &f in hg.below(hg.dom(t)) {
                assert_eq!(hom.lifted_restriction(t, f).unwrap(), hg.res(t, f));
            }
        }
    }

    #[test]
    fn discrete_inclusion_is_not_fully_faithful() {
        let g = Arc::new(validate_ordered_groupoid(&interval_z2()).unwrap());
        let mut raw = interval_z2();
        raw.harrows.retain(|h| h.0.as_str().starts_with('e'));
        raw.inverses.clear();
        raw.arr_order.clear();
        raw.obj_order.clear();
        let d = Arc::new(validate_ordered_groupoid(&raw).unwrap());
        let inc = DoubleFunctor::new(d, g, vec![0, 1], vec![0, 1]).unwrap();
        let v = check_double_weak_equivalence(&inc);
        assert!(!v.fully_faithful());
    }

    #[test]
    fn identity_is_double_weak_equivalence() {
        let g = Arc::new(validate_ordered_groupoid(&interval_z2()).unwrap());
        assert!(check_double_weak_equivalence(&DoubleFunctor::identity(&g)).holds());
    }
}
