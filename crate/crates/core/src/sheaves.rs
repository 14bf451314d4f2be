//! Presheaves of finite sets on finite categories and on finite ordered
//! groupoids, matching families and sheaf checks, and the transfers
//! `F ↦ F̂` (along `L`), `Φ ↦ Φ̃` and `Ψ ↦ Ψ̌` (along `G`).
//!
//! An action is stored as a table indexed by the elements of the codomain's
//! value set, each entry an index into the domain's value set.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::bridge::{construct_l, GGroupoid, LCategory};
use crate::error::Error;
use crate::fincat::{ArrIx, FiniteCategory, Functor, ObjIx};
use crate::id::Id;
use crate::ogpd::{DoubleFunctor, OrderedGroupoid};
use crate::topology::{ehresmann_to_grothendieck, EhresmannTopology, GrothendieckTopology, Sieve};

pub type Action = Vec<usize>;

/// Default bound on candidate enumeration.
pub const CANDIDATE_LIMIT: usize = 1_000_000;

/// Serialized presheaf. `actions` maps an arrow `f : A → B` to a table from
/// elements of `B` to elements of `A`; identities and composites of listed
/// actions may be omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawPresheaf {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub values: BTreeMap<Id, Vec<Id>>,
    #[serde(default)]
    pub actions: BTreeMap<Id, BTreeMap<Id, Id>>,
}

/// Serialized double presheaf. `v_actions` lists `[lower, upper, table]`;
/// reflexive pairs and composites may be omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawDoublePresheaf {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub values: BTreeMap<Id, Vec<Id>>,
    #[serde(default)]
    pub h_actions: BTreeMap<Id, BTreeMap<Id, Id>>,
    #[serde(default)]
    pub v_actions: Vec<(Id, Id, BTreeMap<Id, Id>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum PresheafViolation {
    UnknownId { id: Id },
    MissingValues { object: Id },
    DuplicateElement { object: Id, element: Id },
    MissingAction { arrow: Id },
    PartialAction { arrow: Id, element: Id },
    ValueOutOfRange { arrow: Id, element: Id, value: Id },
    IdentityNotIdentity { arrow: Id },
    NotFunctorial { g: Id, f: Id },
    NotBelow { lower: Id, upper: Id },
    MissingVerticalAction { lower: Id, upper: Id },
    VerticalNotFunctorial { lower: Id, middle: Id, upper: Id },
    SquareNotCommuting { lower: Id, upper: Id },
}

impl fmt::Display for PresheafViolation {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        use PresheafViolation::*;
        match self {
            UnknownId { id } => write!(fm, "unknown id {id}"),
            MissingValues { object } => write!(fm, "no value set for {object}"),
            DuplicateElement { object, element } => write!(fm, "{element} listed twice in the value set of {object}"),
            MissingAction { arrow } => write!(fm, "no action for {arrow}"),
            PartialAction { arrow, element } => write!(fm, "action of {arrow} is undefined on {element}"),
            ValueOutOfRange { arrow, element, value } => write!(fm, "action of {arrow} sends {element} to {value}, outside the domain set"),
            IdentityNotIdentity { arrow } => write!(fm, "identity {arrow} does not act as the identity"),
            NotFunctorial { g, f } => write!(fm, "action of {g}∘{f} is not the action of {f} after {g}"),
            NotBelow { lower, upper } => write!(fm, "{lower} is not below {upper}"),
            MissingVerticalAction { lower, upper } => write!(fm, "no action for {lower} ≤ {upper}"),
            VerticalNotFunctorial { lower, middle, upper } => {
                write!(fm, "vertical actions along {lower} ≤ {middle} ≤ {upper} do not compose")
            }
            SquareNotCommuting { lower, upper } => write!(fm, "square for the cell {lower} ≤ {upper} does not commute"),
        }
    }
}

fn after(first: &[usize], second: &[usize]) -> Action {
    first.iter().map(|&x| second[x]).collect()
}

struct Tables {
    values: Vec<Vec<Id>>,
    index: Vec<BTreeMap<Id, usize>>,
}

fn read_values(
    objects: impl Iterator<Item = Id>,
    raw: &BTreeMap<Id, Vec<Id>>,
    known: impl Fn(&str) -> bool,
    errs: &mut Vec<PresheafViolation>,
) -> Tables {
    for id in raw.keys() {
        if !known(id.as_str()) {
            errs.push(PresheafViolation::UnknownId { id: id.clone() });
        }
    }
    let mut values = Vec::new();
    let mut index = Vec::new();
    for o in objects {
        let set = match raw.get(&o) {
            Some(s) => s.clone(),
            None => {
                errs.push(PresheafViolation::MissingValues { object: o.clone() });
                Vec::new()
            }
        };
        let mut ix = BTreeMap::new();
        for (i, e) in set.iter().enumerate() {
            if ix.insert(e.clone(), i).is_some() {
                errs.push(PresheafViolation::DuplicateElement { object: o.clone(), element: e.clone() });
            }
        }
        values.push(set);
        index.push(ix);
    }
    Tables { values, index }
}

fn read_action(t: &Tables, name: &Id, from: ObjIx, to: ObjIx, table: &BTreeMap<Id, Id>, errs: &mut Vec<PresheafViolation>) -> Option<Action> {
    let mut out = Vec::with_capacity(t.values[from].len());
    let before = errs.len();
    for k in table.keys() {
        if !t.index[from].contains_key(k) {
            errs.push(PresheafViolation::UnknownId { id: k.clone() });
        }
    }
    for e in &t.values[from] {
        match table.get(e) {
            None => errs.push(PresheafViolation::PartialAction { arrow: name.clone(), element: e.clone() }),
            Some(v) => match t.index[to].get(v) {
                Some(&j) => out.push(j),
                None => errs.push(PresheafViolation::ValueOutOfRange { arrow: name.clone(), element: e.clone(), value: v.clone() }),
            },
        }
    }
    (errs.len() == before).then_some(out)
}

fn write_action(values: &[Vec<Id>], from: ObjIx, to: ObjIx, action: &[usize]) -> BTreeMap<Id, Id> {
    action.iter().enumerate().map(|(i, &j)| (values[from][i].clone(), values[to][j].clone())).collect()
}

/// A presheaf of finite sets on a finite category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presheaf {
    base: Arc<FiniteCategory>,
    values: Vec<Vec<Id>>,
    actions: Vec<Action>,
}

fn functoriality_violations(c: &FiniteCategory, sizes: &[usize], actions: &[Action]) -> Vec<PresheafViolation> {
    let mut errs = Vec::new();
    for (f, act) in actions.iter().enumerate() {
        if act.len() != sizes[c.cod(f)] || act.iter().any(|&x| x >= sizes[c.dom(f)]) {
            errs.push(PresheafViolation::MissingAction { arrow: c.arrow_id(f).clone() });
        }
    }
    if !errs.is_empty() {
        return errs;
    }
    for a in c.objects() {
        let i = c.identity(a);
        if actions[i].iter().enumerate().any(|(x, &y)| x != y) {
            errs.push(PresheafViolation::IdentityNotIdentity { arrow: c.arrow_id(i).clone() });
        }
    }
    for f in c.arrows() {
        for g in c.arrows().filter(|&g| c.dom(g) == c.cod(f)) {
            let gf = c.comp(g, f);
            if actions[gf] != after(&actions[g], &actions[f]) {
                errs.push(PresheafViolation::NotFunctorial { g: c.arrow_id(g).clone(), f: c.arrow_id(f).clone() });
            }
        }
    }
    errs
}

impl Presheaf {
    /// Builds from index tables; every law is checked.
    pub fn new(base: Arc<FiniteCategory>, values: Vec<Vec<Id>>, actions: Vec<Action>) -> Result<Self, Error> {
        if values.len() != base.object_count() || actions.len() != base.arrow_count() {
            return Err(Error::Format("table sizes do not match the base category".into()));
        }
        let sizes: Vec<usize> = values.iter().map(Vec::len).collect();
        let errs = functoriality_violations(&base, &sizes, &actions);
        if !errs.is_empty() {
            return Err(Error::InvalidPresheaf(errs));
        }
        Ok(Presheaf { base, values, actions })
    }

    pub fn from_raw(base: Arc<FiniteCategory>, raw: &RawPresheaf) -> Result<Self, Error> {
        validate_presheaf(base, raw)
    }

    pub fn to_raw(&self) -> RawPresheaf {
        let c = &self.base;
        RawPresheaf {
            name: None,
            values: c.objects().map(|a| (c.object_id(a).clone(), self.values[a].clone())).collect(),
            actions: c
                .arrows()
                .filter(|&f| !c.is_identity(f))
                .map(|f| (c.arrow_id(f).clone(), write_action(&self.values, c.cod(f), c.dom(f), &self.actions[f])))
                .collect(),
        }
    }

    /// Every object gets `elements`; every arrow acts as the identity.
    pub fn constant(base: Arc<FiniteCategory>, elements: &[&str]) -> Self {
        let set: Vec<Id> = elements.iter().map(|&e| Id::from(e)).collect();
        let values = vec![set.clone(); base.object_count()];
        let actions = vec![(0..set.len()).collect(); base.arrow_count()];
        Presheaf { base, values, actions }
    }

    /// `𝒞(−, B)`, acting by precomposition.
    pub fn representable(base: Arc<FiniteCategory>, b: ObjIx) -> Self {
        let c = &*base;
        let values: Vec<Vec<Id>> = c.objects().map(|x| c.hom(x, b).iter().map(|&g| c.arrow_id(g).clone()).collect()).collect();
        let actions = c
            .arrows()
            .map(|f| {
                let src = c.hom(c.cod(f), b);
                let dst = c.hom(c.dom(f), b);
                src.iter().map(|&g| dst.iter().position(|&h| h == c.comp(g, f)).expect("composite lies in the hom-set")).collect()
            })
            .collect();
        Presheaf { base, values, actions }
    }

    pub fn base(&self) -> &Arc<FiniteCategory> {
        &self.base
    }

    pub fn values(&self, a: ObjIx) -> &[Id] {
        &self.values[a]
    }

    pub fn size(&self, a: ObjIx) -> usize {
        self.values[a].len()
    }

    pub fn action(&self, f: ArrIx) -> &[usize] {
        &self.actions[f]
    }

    pub fn act(&self, f: ArrIx, x: usize) -> usize {
        self.actions[f][x]
    }

    /// Precomposition with `f`, whose target must be the base.
    pub fn restrict_along(&self, f: &Functor) -> Result<Presheaf, Error> {
        if **f.target() != *self.base {
            return Err(Error::NotComposable("functor does not land in the presheaf's base".into()));
        }
        let s = f.source();
        Ok(Presheaf {
            base: s.clone(),
            values: s.objects().map(|a| self.values[f.obj(a)].clone()).collect(),
            actions: s.arrows().map(|a| self.actions[f.arr(a)].clone()).collect(),
        })
    }

    /// An invariant of the isomorphism class: the least relabelled action
    /// table over all per-object permutations.
    pub fn canonical_key(&self) -> Vec<usize> {
        let c = &*self.base;
        let mut best: Option<Vec<usize>> = None;
        let perms = c.objects().map(|a| (0..self.size(a)).permutations(self.size(a)).collect::<Vec<_>>());
        for choice in perms.multi_cartesian_product() {
            let mut key: Vec<usize> = self.values.iter().map(Vec::len).collect();
            for f in c.arrows() {
                let (pd, pc) = (&choice[c.dom(f)], &choice[c.cod(f)]);
                let mut row = vec![0; self.size(c.cod(f))];
                for (x, &y) in self.actions[f].iter().enumerate() {
                    row[pc[x]] = pd[y];
                }
                key.extend(row);
            }
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
        }
        best.unwrap_or_else(|| self.values.iter().map(Vec::len).collect())
    }
}

/// Reads a raw presheaf, filling identity actions and composites of listed
/// actions before checking the laws.
pub fn validate_presheaf(base: Arc<FiniteCategory>, raw: &RawPresheaf) -> Result<Presheaf, Error> {
    let c = &*base;
    let mut errs = Vec::new();
    let t = read_values(c.objects().map(|a| c.object_id(a).clone()), &raw.values, |s| c.object_ix(s).is_some(), &mut errs);
    let mut actions: Vec<Option<Action>> = vec![None; c.arrow_count()];
    for (name, table) in &raw.actions {
        match c.arrow_ix(name.as_str()) {
            None => errs.push(PresheafViolation::UnknownId { id: name.clone() }),
            Some(f) => actions[f] = read_action(&t, name, c.cod(f), c.dom(f), table, &mut errs),
        }
    }
    if !errs.is_empty() {
        return Err(Error::InvalidPresheaf(errs));
    }
    for a in c.objects() {
        actions[c.identity(a)].get_or_insert_with(|| (0..t.values[a].len()).collect());
    }
    loop {
        let mut changed = false;
        for f in c.arrows() {
            for g in c.arrows().filter(|&g| c.dom(g) == c.cod(f)) {
                let gf = c.comp(g, f);
                if actions[gf].is_none() {
                    if let (Some(ag), Some(af)) = (&actions[g], &actions[f]) {
                        actions[gf] = Some(after(ag, af));
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let missing: Vec<PresheafViolation> =
        c.arrows().filter(|&f| actions[f].is_none()).map(|f| PresheafViolation::MissingAction { arrow: c.arrow_id(f).clone() }).collect();
    if !missing.is_empty() {
        return Err(Error::InvalidPresheaf(missing));
    }
    Presheaf::new(base, t.values, actions.into_iter().map(Option::unwrap).collect())
}

/// A presheaf on an ordered groupoid, contravariant in both directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoublePresheaf {
    base: Arc<OrderedGroupoid>,
    values: Vec<Vec<Id>>,
    h_actions: Vec<Action>,
    /// keyed by `(lower, upper)`
    v_actions: BTreeMap<(ObjIx, ObjIx), Action>,
}

fn double_violations(g: &OrderedGroupoid, sizes: &[usize], h: &[Action], v: &BTreeMap<(ObjIx, ObjIx), Action>) -> Vec<PresheafViolation> {
    let mut errs = functoriality_violations(g.groupoid(), sizes, h);
    let oid = |o: ObjIx| g.object_id(o).clone();
    for a in g.objects() {
        for &a1 in g.below(a) {
            match v.get(&(a1, a)) {
                Some(act) if act.len() == sizes[a] && act.iter().all(|&x| x < sizes[a1]) => {}
                _ => errs.push(PresheafViolation::MissingVerticalAction { lower: oid(a1), upper: oid(a) }),
            }
        }
    }
    for &(a1, a) in v.keys() {
        if !g.obj_leq(a1, a) {
            errs.push(PresheafViolation::NotBelow { lower: oid(a1), upper: oid(a) });
        }
    }
    if !errs.is_empty() {
        return errs;
    }
    for a in g.objects() {
        if v[&(a, a)].iter().enumerate().any(|(x, &y)| x != y) {
            errs.push(PresheafViolation::VerticalNotFunctorial { lower: oid(a), middle: oid(a), upper: oid(a) });
        }
        for &a1 in g.below(a) {
            for &a2 in g.below(a1) {
                if v[&(a2, a)] != after(&v[&(a1, a)], &v[&(a2, a1)]) {
                    errs.push(PresheafViolation::VerticalNotFunctorial { lower: oid(a2), middle: oid(a1), upper: oid(a) });
                }
            }
        }
    }
    for k in g.harrows() {
        for &a1 in g.below(g.dom(k)) {
            let r = g.res(k, a1);
            let left = after(&h[k], &v[&(a1, g.dom(k))]);
            let right = after(&v[&(g.cod(r), g.cod(k))], &h[r]);
            if left != right {
                errs.push(PresheafViolation::SquareNotCommuting { lower: g.arrow_id(r).clone(), upper: g.arrow_id(k).clone() });
            }
        }
    }
    errs
}

impl DoublePresheaf {
    pub fn new(
        base: Arc<OrderedGroupoid>,
        values: Vec<Vec<Id>>,
        h_actions: Vec<Action>,
        v_actions: BTreeMap<(ObjIx, ObjIx), Action>,
    ) -> Result<Self, Error> {
        if values.len() != base.object_count() || h_actions.len() != base.harrow_count() {
            return Err(Error::Format("table sizes do not match the base ordered groupoid".into()));
        }
        let sizes: Vec<usize> = values.iter().map(Vec::len).collect();
        let errs = double_violations(&base, &sizes, &h_actions, &v_actions);
        if !errs.is_empty() {
            return Err(Error::InvalidPresheaf(errs));
        }
        Ok(DoublePresheaf { base, values, h_actions, v_actions })
    }

    pub fn from_raw(base: Arc<OrderedGroupoid>, raw: &RawDoublePresheaf) -> Result<Self, Error> {
        validate_double_presheaf(base, raw)
    }

    pub fn to_raw(&self) -> RawDoublePresheaf {
        let g = &self.base;
        RawDoublePresheaf {
            name: None,
            values: g.objects().map(|a| (g.object_id(a).clone(), self.values[a].clone())).collect(),
            h_actions: g
                .harrows()
                .filter(|&h| !g.is_identity(h))
                .map(|h| (g.arrow_id(h).clone(), write_action(&self.values, g.cod(h), g.dom(h), &self.h_actions[h])))
                .collect(),
            v_actions: self
                .v_actions
                .iter()
                .filter(|((l, u), _)| l != u)
                .map(|(&(l, u), act)| (g.object_id(l).clone(), g.object_id(u).clone(), write_action(&self.values, u, l, act)))
                .collect(),
        }
    }

    pub fn constant(base: Arc<OrderedGroupoid>, elements: &[&str]) -> Self {
        let set: Vec<Id> = elements.iter().map(|&e| Id::from(e)).collect();
        let id: Action = (0..set.len()).collect();
        let v_actions = base.objects().flat_map(|a| base.below(a).iter().map(move |&a1| (a1, a))).map(|k| (k, id.clone())).collect();
        DoublePresheaf { values: vec![set; base.object_count()], h_actions: vec![id; base.harrow_count()], v_actions, base }
    }

    pub fn base(&self) -> &Arc<OrderedGroupoid> {
        &self.base
    }

    pub fn values(&self, a: ObjIx) -> &[Id] {
        &self.values[a]
    }

    pub fn size(&self, a: ObjIx) -> usize {
        self.values[a].len()
    }

    pub fn h_action(&self, h: ArrIx) -> &[usize] {
        &self.h_actions[h]
    }

    /// Action of `lower ≤ upper`, from the upper set to the lower one.
    pub fn v_action(&self, lower: ObjIx, upper: ObjIx) -> &[usize] {
        &self.v_actions[&(lower, upper)]
    }

    /// Precomposition with a double functor landing in the base.
    pub fn restrict_along(&self, m: &DoubleFunctor) -> Result<DoublePresheaf, Error> {
        if **m.target() != *self.base {
            return Err(Error::NotComposable("double functor does not land in the presheaf's base".into()));
        }
        let s = m.source();
        Ok(DoublePresheaf {
            base: s.clone(),
            values: s.objects().map(|a| self.values[m.obj(a)].clone()).collect(),
            h_actions: s.harrows().map(|h| self.h_actions[m.arr(h)].clone()).collect(),
            v_actions: s
                .objects()
                .flat_map(|a| s.below(a).iter().map(move |&a1| (a1, a)))
                .map(|(a1, a)| ((a1, a), self.v_actions[&(m.obj(a1), m.obj(a))].clone()))
                .collect(),
        })
    }
}

/// Reads a raw double presheaf, filling identity actions, reflexive and
/// composite vertical actions, and composites of listed horizontal actions.
pub fn validate_double_presheaf(base: Arc<OrderedGroupoid>, raw: &RawDoublePresheaf) -> Result<DoublePresheaf, Error> {
    let g = &*base;
    let mut errs = Vec::new();
    let t = read_values(g.objects().map(|a| g.object_id(a).clone()), &raw.values, |s| g.object_ix(s).is_some(), &mut errs);
    let mut h: Vec<Option<Action>> = vec![None; g.harrow_count()];
    for (name, table) in &raw.h_actions {
        match g.arrow_ix(name.as_str()) {
            None => errs.push(PresheafViolation::UnknownId { id: name.clone() }),
            Some(f) => h[f] = read_action(&t, name, g.cod(f), g.dom(f), table, &mut errs),
        }
    }
    let mut v: BTreeMap<(ObjIx, ObjIx), Action> = BTreeMap::new();
    for (lower, upper, table) in &raw.v_actions {
        match (g.object_ix(lower.as_str()), g.object_ix(upper.as_str())) {
            (Some(l), Some(u)) if g.obj_leq(l, u) => {
                let name = Id::new(format!("{lower}≤{upper}"));
                if let Some(act) = read_action(&t, &name, u, l, table, &mut errs) {
                    v.insert((l, u), act);
                }
            }
            (Some(_), Some(_)) => errs.push(PresheafViolation::NotBelow { lower: lower.clone(), upper: upper.clone() }),
            (l, _) => errs.push(PresheafViolation::UnknownId { id: if l.is_none() { lower.clone() } else { upper.clone() } }),
        }
    }
    if !errs.is_empty() {
        return Err(Error::InvalidPresheaf(errs));
    }
    for a in g.objects() {
        h[g.identity(a)].get_or_insert_with(|| (0..t.values[a].len()).collect());
        v.entry((a, a)).or_insert_with(|| (0..t.values[a].len()).collect());
    }
    loop {
        let mut changed = false;
        for f in g.harrows() {
            for k in g.harrows().filter(|&k| g.dom(k) == g.cod(f)) {
                let kf = g.comp(k, f);
                if h[kf].is_none() {
                    if let (Some(ak), Some(af)) = (&h[k], &h[f]) {
                        h[kf] = Some(after(ak, af));
                        changed = true;
                    }
                }
            }
        }
        let known: Vec<((ObjIx, ObjIx), Action)> = v.iter().map(|(k, a)| (*k, a.clone())).collect();
        for ((l1, u1), a1) in &known {
            for ((l2, u2), a2) in &known {
                if u2 == l1 && !v.contains_key(&(*l2, *u1)) {
                    v.insert((*l2, *u1), after(a1, a2));
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let missing: Vec<PresheafViolation> =
        g.harrows().filter(|&f| h[f].is_none()).map(|f| PresheafViolation::MissingAction { arrow: g.arrow_id(f).clone() }).collect();
    if !missing.is_empty() {
        return Err(Error::InvalidPresheaf(missing));
    }
    DoublePresheaf::new(base, t.values, h.into_iter().map(Option::unwrap).collect(), v)
}

/// `F̂` on `L(𝒢)`: `F̂(h, B' ≤ B) = F(h) ∘ F(B' ≤ B)`.
pub fn presheaf_transfer_l(f: &DoublePresheaf, l: &LCategory) -> Result<Presheaf, Error> {
    if *f.base != *l.base {
        return Err(Error::NotComposable("presheaf lives on a different ordered groupoid".into()));
    }
    let c = &l.category;
    let actions = c
        .arrows()
        .map(|a| {
            let la = l.decode(a);
            after(f.v_action(la.v_cod, la.v_root), f.h_action(la.h))
        })
        .collect();
    Presheaf::new(c.clone(), f.values.clone(), actions)
}

/// Inverse of [`presheaf_transfer_l`]: read off the actions of `(h, cod h ≤ cod h)`
/// and `(1_{A'}, A' ≤ A)`.
pub fn presheaf_transfer_l_inverse(p: &Presheaf, l: &LCategory) -> Result<DoublePresheaf, Error> {
    if *p.base != *l.category {
        return Err(Error::NotComposable("presheaf does not live on this L-category".into()));
    }
    let g = &l.base;
    let h_actions = g.harrows().map(|h| p.action(l.horizontal(h)).to_vec()).collect();
    let v_actions =
        g.objects().flat_map(|a| g.below(a).iter().map(move |&a1| (a1, a))).map(|(a1, a)| ((a1, a), p.action(l.vertical(a1, a)).to_vec())).collect();
    DoublePresheaf::new(g.clone(), p.values.clone(), h_actions, v_actions)
}

/// `μ_n μ_m⁻¹ : Ā_m → Ā_n` for the horizontal arrow `h : [m] → [n]`.
pub fn mu(gg: &GGroupoid, h: ArrIx) -> ArrIx {
    let (_, p) = gg.span_from_representative(h);
    let n_bar = gg.representative(gg.groupoid.cod(h));
    gg.base.factor_through(n_bar, p).expect("span legs in the same class")
}

/// `v` with `m̄ = m̄' v` for `[m] ≤ [m']`.
pub fn v_map(gg: &GGroupoid, lower: ObjIx, upper: ObjIx) -> ArrIx {
    gg.base.factor_through(gg.representative(upper), gg.representative(lower)).expect("lower factors through upper")
}

/// `Φ̃` on `G(𝒞)`: `Φ̃[m] = Φ(Ā_m)`, horizontal actions `Φ(μ_n μ_m⁻¹)` and
/// vertical actions `Φ(v_{m,m'})`.
pub fn transfer_tilde(phi: &Presheaf, gg: &GGroupoid) -> Result<DoublePresheaf, Error> {
    if *phi.base != *gg.base {
        return Err(Error::NotComposable("presheaf lives on a different category".into()));
    }
    let c = &gg.base;
    let g = &gg.groupoid;
    let values = g.objects().map(|o| phi.values[c.dom(gg.representative(o))].clone()).collect();
    let h_actions = g.harrows().map(|h| phi.action(mu(gg, h)).to_vec()).collect();
    let v_actions = g
        .objects()
        .flat_map(|a| g.below(a).iter().map(move |&a1| (a1, a)))
        .map(|(a1, a)| ((a1, a), phi.action(v_map(gg, a1, a)).to_vec()))
        .collect();
    DoublePresheaf::new(g.clone(), values, h_actions, v_actions)
}

/// `Ψ̌` on `𝒞`: `Ψ̌(X) = Ψ[1_X]` and `Ψ̌(f) = Ψ([1_X, f]) ∘ Ψ([f] ≤ [1_Y])`.
pub fn transfer_check(psi: &DoublePresheaf, gg: &GGroupoid) -> Result<Presheaf, Error> {
    if *psi.base != *gg.groupoid {
        return Err(Error::NotComposable("presheaf lives on a different ordered groupoid".into()));
    }
    let c = &gg.base;
    let values = c.objects().map(|x| psi.values[gg.unit_object(x)].clone()).collect();
    let actions = c
        .arrows()
        .map(|f| {
            let (x, y) = (c.dom(f), c.cod(f));
            let span = gg.span(c.identity(x), f);
            after(psi.v_action(gg.object_of(f), gg.unit_object(y)), psi.h_action(span))
        })
        .collect();
    Presheaf::new(c.clone(), values, actions)
}

/// Components `Φ(X) → Φ̌̃(X)`, given by the action of `m̄` for `[m̄] = [1_X]`.
pub fn check_tilde_components(phi: &Presheaf, gg: &GGroupoid) -> Vec<Action> {
    let c = &gg.base;
    c.objects().map(|x| phi.action(gg.representative(gg.unit_object(x))).to_vec()).collect()
}

/// Components `Ψ[m] → Ψ̃̌[m]`, given by the action of `[1, m̄] : [1_{Ā_m}] → [m]`.
pub fn tilde_check_components(psi: &DoublePresheaf, gg: &GGroupoid) -> Vec<Action> {
    let c = &gg.base;
    gg.groupoid
        .objects()
        .map(|o| {
            let m = gg.representative(o);
            psi.h_action(gg.span(c.identity(c.dom(m)), m)).to_vec()
        })
        .collect()
}

fn is_bijection(a: &[usize], n: usize) -> bool {
    a.len() == n && a.iter().collect::<BTreeSet<_>>().len() == n && a.iter().all(|&x| x < n)
}

/// Whether `components` (indexed `P(A) → Q(A)`) form a natural transformation.
pub fn is_natural(p: &Presheaf, q: &Presheaf, components: &[Action]) -> bool {
    let c = &p.base;
    *p.base == *q.base
        && components.len() == c.object_count()
        && c.objects().all(|a| components[a].len() == p.size(a) && components[a].iter().all(|&y| y < q.size(a)))
        && c.arrows().all(|f| after(p.action(f), &components[c.dom(f)]) == after(&components[c.cod(f)], q.action(f)))
}

pub fn is_natural_isomorphism(p: &Presheaf, q: &Presheaf, components: &[Action]) -> bool {
    is_natural(p, q, components) && p.base.objects().all(|a| is_bijection(&components[a], q.size(a)))
}

pub fn is_double_natural(p: &DoublePresheaf, q: &DoublePresheaf, components: &[Action]) -> bool {
    let g = &p.base;
    *p.base == *q.base
        && components.len() == g.object_count()
        && g.objects().all(|a| components[a].len() == p.size(a) && components[a].iter().all(|&y| y < q.size(a)))
        && g.harrows().all(|h| after(p.h_action(h), &components[g.dom(h)]) == after(&components[g.cod(h)], q.h_action(h)))
        && p.v_actions.iter().all(|(&(l, u), act)| after(act, &components[l]) == after(&components[u], q.v_action(l, u)))
}

pub fn is_double_natural_isomorphism(p: &DoublePresheaf, q: &DoublePresheaf, components: &[Action]) -> bool {
    is_double_natural(p, q, components) && p.base.objects().all(|a| is_bijection(&components[a], q.size(a)))
}

/// Every natural transformation `P ⇒ Q`, by backtracking over components.
pub fn all_morphisms(p: &Presheaf, q: &Presheaf, limit: usize) -> Result<Vec<Vec<Action>>, Error> {
    morphism_search(p, q, false, limit)
}

/// Some natural isomorphism `P ≅ Q`, if one exists.
pub fn find_isomorphism(p: &Presheaf, q: &Presheaf) -> Result<Option<Vec<Action>>, Error> {
    Ok(morphism_search(p, q, true, CANDIDATE_LIMIT)?.into_iter().next())
}

fn morphism_search(p: &Presheaf, q: &Presheaf, iso: bool, limit: usize) -> Result<Vec<Vec<Action>>, Error> {
    if *p.base != *q.base {
        return Err(Error::NotComposable("presheaves live on different categories".into()));
    }
    let c = &*p.base;
    if iso && c.objects().any(|a| p.size(a) != q.size(a)) {
        return Ok(Vec::new());
    }
    let options: Vec<Vec<Action>> = c
        .objects()
        .map(|a| {
            let (n, m) = (p.size(a), q.size(a));
            if iso {
                (0..m).permutations(n).collect()
            } else {
                tables(n, m)
            }
        })
        .collect();
    let options: Vec<Vec<Action>> =
        options.into_iter().enumerate().map(|(a, v)| if p.size(a) == 0 { vec![Vec::new()] } else { v }).collect();
    let mut out = Vec::new();
    let mut chosen: Vec<Action> = Vec::with_capacity(c.object_count());
    let mut steps = 0usize;
    fn go(
        c: &FiniteCategory,
        p: &Presheaf,
        q: &Presheaf,
        options: &[Vec<Action>],
        chosen: &mut Vec<Action>,
        out: &mut Vec<Vec<Action>>,
        first_only: bool,
        steps: &mut usize,
        limit: usize,
    ) -> Result<(), Error> {
        let a = chosen.len();
        if a == c.object_count() {
            out.push(chosen.clone());
            return Ok(());
        }
        for opt in &options[a] {
            *steps += 1;
            if *steps > limit {
                return Err(Error::TooLarge { what: "presheaf morphism search".into(), limit });
            }
            chosen.push(opt.clone());
            let ok = c.arrows().filter(|&f| c.dom(f).max(c.cod(f)) == a).all(|f| {
                after(p.action(f), &chosen[c.dom(f)]) == after(&chosen[c.cod(f)], q.action(f))
            });
            if ok {
                go(c, p, q, options, chosen, out, first_only, steps, limit)?;
            }
            chosen.pop();
            if first_only && !out.is_empty() {
                return Ok(());
            }
        }
        Ok(())
    }
    go(c, p, q, &options, &mut chosen, &mut out, iso, &mut steps, limit)?;
    Ok(out)
}

/// A family `s_f ∈ P(dom f)` indexed by the arrows of a sieve, listed in
/// ascending arrow order.
pub type MatchingFamily = Vec<usize>;

/// Every matching family for `P` on `sieve`.
pub fn matching_families(p: &Presheaf, sieve: &Sieve, limit: usize) -> Result<Vec<MatchingFamily>, Error> {
    let c = &*p.base;
    let arrows: Vec<ArrIx> = sieve.arrows.iter().copied().collect();
    let pos: BTreeMap<ArrIx, usize> = arrows.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    // constraints (f, g, f∘g) grouped by the later position of f and f∘g
    let mut checks: Vec<Vec<(usize, ArrIx, usize)>> = vec![Vec::new(); arrows.len()];
    for (i, &f) in arrows.iter().enumerate() {
        for x in c.objects() {
            for &g in c.hom(x, c.dom(f)) {
                let j = pos[&c.comp(f, g)];
                checks[i.max(j)].push((i, g, j));
            }
        }
    }
    let mut out = Vec::new();
    let mut family = Vec::with_capacity(arrows.len());
    let mut steps = 0usize;
    fn go(
        p: &Presheaf,
        arrows: &[ArrIx],
        checks: &[Vec<(usize, ArrIx, usize)>],
        family: &mut Vec<usize>,
        out: &mut Vec<MatchingFamily>,
        steps: &mut usize,
        limit: usize,
    ) -> Result<(), Error> {
        let i = family.len();
        if i == arrows.len() {
            out.push(family.clone());
            return Ok(());
        }
        for x in 0..p.size(p.base.dom(arrows[i])) {
            *steps += 1;
            if *steps > limit {
                return Err(Error::TooLarge { what: "matching family enumeration".into(), limit });
            }
            family.push(x);
            if checks[i].iter().all(|&(fi, g, fgi)| family[fgi] == p.act(g, family[fi])) {
                go(p, arrows, checks, family, out, steps, limit)?;
            }
            family.pop();
        }
        Ok(())
    }
    go(p, &arrows, &checks, &mut family, &mut out, &mut steps, limit)?;
    Ok(out)
}

/// Elements `x` with `P(f)(x) = s_f` for every `f` in the sieve.
pub fn amalgamations(p: &Presheaf, sieve: &Sieve, family: &MatchingFamily) -> Vec<usize> {
    (0..p.size(sieve.root)).filter(|&x| sieve.arrows.iter().zip(family).all(|(&f, &s)| p.act(f, x) == s)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SheafFailure {
    pub object: Id,
    pub sieve: Vec<Id>,
    /// `(arrow, element)` pairs
    pub family: Vec<(Id, Id)>,
    pub amalgamations: Vec<Id>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SheafVerdict {
    pub is_sheaf: bool,
    pub covers_checked: usize,
    pub families_checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<SheafFailure>,
}

/// Every matching family on every covering sieve has exactly one amalgamation.
pub fn is_sheaf_grothendieck(p: &Presheaf, j: &GrothendieckTopology) -> Result<SheafVerdict, Error> {
    if **j.category() != *p.base {
        return Err(Error::NotComposable("presheaf and topology live on different categories".into()));
    }
    let c = &*p.base;
    let mut verdict = SheafVerdict { is_sheaf: true, covers_checked: 0, families_checked: 0, failure: None };
    for a in c.objects() {
        for s in j.covers(a) {
            verdict.covers_checked += 1;
            for fam in matching_families(p, &s, CANDIDATE_LIMIT)? {
                verdict.families_checked += 1;
                let am = amalgamations(p, &s, &fam);
                if am.len() != 1 {
                    verdict.is_sheaf = false;
                    verdict.failure = Some(SheafFailure {
                        object: c.object_id(a).clone(),
                        sieve: s.ids(c),
                        family: s.arrows.iter().zip(&fam).map(|(&f, &x)| (c.arrow_id(f).clone(), p.values[c.dom(f)][x].clone())).collect(),
                        amalgamations: am.iter().map(|&x| p.values[a][x].clone()).collect(),
                    });
                    return Ok(verdict);
                }
            }
        }
    }
    Ok(verdict)
}

/// The sheaf condition on an Ehresmann site, read through `L`.
pub fn is_sheaf_ehresmann(f: &DoublePresheaf, t: &EhresmannTopology) -> Result<SheafVerdict, Error> {
    let l = construct_l(t.groupoid())?;
    is_sheaf_ehresmann_via(f, t, &l)
}

pub fn is_sheaf_ehresmann_via(f: &DoublePresheaf, t: &EhresmannTopology, l: &LCategory) -> Result<SheafVerdict, Error> {
    is_sheaf_grothendieck(&presheaf_transfer_l(f, l)?, &ehresmann_to_grothendieck(t, l)?)
}

/// Every function from an `n`-set to an `m`-set, as tables.
fn tables(n: usize, m: usize) -> Vec<Action> {
    if n == 0 {
        return vec![Vec::new()];
    }
    std::iter::repeat_n(0..m, n).multi_cartesian_product().collect()
}

/// All presheaves with value sets of at most `max_size` elements, one per
/// isomorphism class. Elements are named `0, 1, …`.
pub fn enumerate_presheaves(base: &Arc<FiniteCategory>, max_size: usize, limit: usize) -> Result<Vec<Presheaf>, Error> {
    let c = &**base;
    let free: Vec<ArrIx> = c.arrows().filter(|&f| !c.is_identity(f)).collect();
    let pos: BTreeMap<ArrIx, usize> = free.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let rank = |f: ArrIx| pos.get(&f).copied();
    let mut checks: Vec<Vec<(ArrIx, ArrIx)>> = vec![Vec::new(); free.len()];
    for &f in &free {
        for &g in &free {
            if c.dom(g) == c.cod(f) {
                let gf = c.comp(g, f);
                let last = [rank(f), rank(g), rank(gf)].into_iter().flatten().max().expect("f is not an identity");
                checks[last].push((g, f));
            }
        }
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut steps = 0usize;
    for sizes in std::iter::repeat_n(0..=max_size, c.object_count()).multi_cartesian_product() {
        let mut actions: Vec<Action> = c.arrows().map(|f| if c.is_identity(f) { (0..sizes[c.dom(f)]).collect() } else { Vec::new() }).collect();
        struct Ctx<'a> {
            c: &'a FiniteCategory,
            free: &'a [ArrIx],
            checks: &'a [Vec<(ArrIx, ArrIx)>],
            sizes: &'a [usize],
            limit: usize,
        }
        fn go(ctx: &Ctx, i: usize, actions: &mut Vec<Action>, steps: &mut usize, found: &mut Vec<Vec<Action>>) -> Result<(), Error> {
            if i == ctx.free.len() {
                found.push(actions.clone());
                return Ok(());
            }
            let f = ctx.free[i];
            let (n, m) = (ctx.sizes[ctx.c.cod(f)], ctx.sizes[ctx.c.dom(f)]);
            for table in tables(n, m) {
                *steps += 1;
                if *steps > ctx.limit {
                    return Err(Error::TooLarge { what: "presheaf enumeration".into(), limit: ctx.limit });
                }
                actions[f] = table;
                if ctx.checks[i].iter().all(|&(g, f)| actions[ctx.c.comp(g, f)] == after(&actions[g], &actions[f])) {
                    go(ctx, i + 1, actions, steps, found)?;
                }
            }
            actions[f] = Vec::new();
            Ok(())
        }
        let ctx = Ctx { c, free: &free, checks: &checks, sizes: &sizes, limit };
        let mut found = Vec::new();
        go(&ctx, 0, &mut actions, &mut steps, &mut found)?;
        let values: Vec<Vec<Id>> = sizes.iter().map(|&n| (0..n).map(|i| Id::new(i.to_string())).collect()).collect();
        for acts in found {
            let p = Presheaf { base: base.clone(), values: values.clone(), actions: acts };
            if seen.insert(p.canonical_key()) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bridge::construct_g;
    use crate::fixtures;

    fn arr() -> Arc<FiniteCategory> {
        Arc::new(fixtures::arrow_category())
    }

    #[test]
    fn representable_is_valid() {
        let c = arr();
        let b = c.object_ix("B").unwrap();
        let p = Presheaf::representable(c.clone(), b);
        assert_eq!(p.size(c.object_ix("A").unwrap()), 1);
        assert_eq!(p.size(b), 1);
        assert!(Presheaf::new(c, p.values.clone(), p.actions.clone()).is_ok());
    }

    #[test]
    fn raw_round_trip_and_composite_filling() {
        let c = Arc::new(fixtures::z2_category());
        let raw = RawPresheaf {
            name: None,
            values: BTreeMap::from([(Id::from("*"), vec![Id::from("p"), Id::from("q")])]),
            actions: BTreeMap::from([(Id::from("s"), BTreeMap::from([(Id::from("p"), Id::from("q")), (Id::from("q"), Id::from("p"))]))]),
        };
        let p = validate_presheaf(c.clone(), &raw).unwrap();
        assert_eq!(p.to_raw().actions, raw.actions);
    }

    #[test]
    fn broken_functoriality_is_reported() {
        let c = Arc::new(fixtures::z2_category());
        let raw = RawPresheaf {
            name: None,
            values: BTreeMap::from([(Id::from("*"), vec![Id::from("p"), Id::from("q")])]),
            actions: BTreeMap::from([(Id::from("s"), BTreeMap::from([(Id::from("p"), Id::from("p")), (Id::from("q"), Id::from("p"))]))]),
        };
        match validate_presheaf(c, &raw) {
            Err(Error::InvalidPresheaf(v)) => assert!(v.iter().any(|x| matches!(x, PresheafViolation::NotFunctorial { .. }))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn trivial_topology_makes_everything_a_sheaf() {
        let c = arr();
        let j = GrothendieckTopology::trivial(c.clone());
        for p in enumerate_presheaves(&c, 2, CANDIDATE_LIMIT).unwrap() {
            assert!(is_sheaf_grothendieck(&p, &j).unwrap().is_sheaf);
        }
    }

    #[test]
    fn empty_cover_forces_singletons() {
        let c = arr();
        let j = GrothendieckTopology::maximal(c.clone()).unwrap();
        let two = Presheaf::constant(c.clone(), &["x", "y"]);
        let v = is_sheaf_grothendieck(&two, &j).unwrap();
        assert!(!v.is_sheaf);
        assert!(v.failure.unwrap().amalgamations.len() == 2);
        assert!(is_sheaf_grothendieck(&Presheaf::constant(c, &["x"]), &j).unwrap().is_sheaf);
    }

    #[test]
    fn arrow_category_has_expected_presheaf_count() {
        // functions from a set of size ≤ 2 to a set of size ≤ 2, up to relabelling
        let c = arr();
        let n = enumerate_presheaves(&c, 2, CANDIDATE_LIMIT).unwrap().len();
        // sizes (0,0),(1,0),(2,0),(0,1)... : 1+1+1 + 0+1+1 + 0+1+?
        let mut brute = BTreeSet::new();
        for a in 0..=2usize {
            for b in 0..=2usize {
                for table in std::iter::repeat_n(0..a, b).multi_cartesian_product() {
                    let mut key = Vec::new();
                    for pa in (0..a).permutations(a) {
                        for pb in (0..b).permutations(b) {
                            let mut row = vec![0; b];
                            for (x, &y) in table.iter().enumerate() {
                                row[pb[x]] = pa[y];
                            }
                            key.push(row);
                        }
                    }
                    brute.insert((a, b, key.into_iter().min().unwrap()));
                }
            }
        }
        assert_eq!(n, brute.len());
    }

    #[test]
    fn l_transfer_round_trips() {
        for (_, g) in fixtures::groupoids() {
            let l = construct_l(&g).unwrap();
            let f = DoublePresheaf::constant(g.clone(), &["x", "y"]);
            let p = presheaf_transfer_l(&f, &l).unwrap();
            assert_eq!(presheaf_transfer_l_inverse(&p, &l).unwrap(), f);
        }
    }

    #[test]
    fn tilde_and_check_round_trip_up_to_explicit_iso() {
        let c = arr();
        let gg = construct_g(&c).unwrap();
        for phi in enumerate_presheaves(&c, 2, CANDIDATE_LIMIT).unwrap() {
            let tilde = transfer_tilde(&phi, &gg).unwrap();
            let back = transfer_check(&tilde, &gg).unwrap();
            assert!(is_natural_isomorphism(&phi, &back, &check_tilde_components(&phi, &gg)));
            let again = transfer_tilde(&back, &gg).unwrap();
            assert!(is_double_natural_isomorphism(&tilde, &again, &tilde_check_components(&tilde, &gg)));
        }
    }

    #[test]
    fn morphisms_between_representables() {
        let c = arr();
        let a = Presheaf::representable(c.clone(), c.object_ix("A").unwrap());
        let b = Presheaf::representable(c.clone(), c.object_ix("B").unwrap());
        assert_eq!(all_morphisms(&a, &b, CANDIDATE_LIMIT).unwrap().len(), 1);
        assert_eq!(all_morphisms(&b, &a, CANDIDATE_LIMIT).unwrap().len(), 0);
        assert!(find_isomorphism(&a, &a).unwrap().is_some());
    }
}
