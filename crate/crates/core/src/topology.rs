//! Grothendieck topologies on finite categories, Ehresmann topologies on
//! finite ordered groupoids, and the translations between them.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::bridge::{GGroupoid, LCategory};
use crate::error::Error;
use crate::fincat::{ArrIx, FiniteCategory, Functor, ObjIx};
use crate::id::Id;
use crate::ogpd::{DoubleFunctor, OrderedGroupoid};

const SUBSET_LIMIT: usize = 20;

/// A set of arrows into `root`, closed under precomposition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sieve {
    pub root: ObjIx,
    pub arrows: BTreeSet<ArrIx>,
}

impl Sieve {
    pub fn maximal(c: &FiniteCategory, root: ObjIx) -> Self {
        Sieve { root, arrows: c.arrows_into(root).iter().copied().collect() }
    }

    /// The sieve generated by `generators`, all of which must end at `root`.
    pub fn generated(c: &FiniteCategory, root: ObjIx, generators: impl IntoIterator<Item = ArrIx>) -> Result<Self, Error> {
        let gens: Vec<ArrIx> = generators.into_iter().collect();
        if let Some(&bad) = gens.iter().find(|&&f| c.cod(f) != root) {
            return Err(Error::InvalidSieve {
                root: c.object_id(root).clone(),
                reason: format!("{} does not end at the root", c.arrow_id(bad)),
            });
        }
        Ok(Sieve { root, arrows: c.sieve_closure(root, gens) })
    }

    pub fn is_closed(&self, c: &FiniteCategory) -> bool {
        self.arrows.iter().all(|&f| {
            c.cod(f) == self.root && c.objects().all(|x| c.hom(x, c.dom(f)).iter().all(|&g| self.arrows.contains(&c.comp(f, g))))
        })
    }

    /// `h* S = { g : h g ∈ S }` for `h : B → root`.
    pub fn pullback(&self, c: &FiniteCategory, h: ArrIx) -> Sieve {
        debug_assert_eq!(c.cod(h), self.root);
        let b = c.dom(h);
        Sieve {
            root: b,
            arrows: c.arrows_into(b).iter().copied().filter(|&g| self.arrows.contains(&c.comp(h, g))).collect(),
        }
    }

    pub fn ids(&self, c: &FiniteCategory) -> Vec<Id> {
        self.arrows.iter().map(|&a| c.arrow_id(a).clone()).collect()
    }
}

/// A downward-closed set of objects below `root`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VerticalSieve {
    pub root: ObjIx,
    pub members: BTreeSet<ObjIx>,
}

impl VerticalSieve {
    /// `↓ root`.
    pub fn maximal(g: &OrderedGroupoid, root: ObjIx) -> Self {
        VerticalSieve { root, members: g.below(root).iter().copied().collect() }
    }

    /// The downward closure of `generators` below `root`.
    pub fn generated(g: &OrderedGroupoid, root: ObjIx, generators: impl IntoIterator<Item = ObjIx>) -> Result<Self, Error> {
        let mut members = BTreeSet::new();
        for a in generators {
            if !g.obj_leq(a, root) {
                return Err(Error::NotBelowCodomainRoot { object: g.object_id(a).clone(), root: g.object_id(root).clone() });
            }
            members.extend(g.below(a).iter().copied());
        }
        Ok(VerticalSieve { root, members })
    }

    pub fn is_closed(&self, g: &OrderedGroupoid) -> bool {
        self.members.iter().all(|&a| g.obj_leq(a, self.root) && g.below(a).iter().all(|b| self.members.contains(b)))
    }

    pub fn ids(&self, g: &OrderedGroupoid) -> Vec<Id> {
        self.members.iter().map(|&a| g.object_id(a).clone()).collect()
    }
}

/// `f* ℬ = { A' ≤ A : cod(f|_{A'}) ∈ ℬ }` for `f : A → B'` with `B' ≤ root(ℬ)`.
pub fn vertical_sieve_pullback(g: &OrderedGroupoid, sieve: &VerticalSieve, f: ArrIx) -> Result<VerticalSieve, Error> {
    if !g.obj_leq(g.cod(f), sieve.root) {
        return Err(Error::NotBelowCodomainRoot { object: g.object_id(g.cod(f)).clone(), root: g.object_id(sieve.root).clone() });
    }
    let a = g.dom(f);
    let members = g.below(a).iter().copied().filter(|&a1| sieve.members.contains(&g.cod(g.res(f, a1)))).collect();
    Ok(VerticalSieve { root: a, members })
}

pub fn sieve_pullback(c: &FiniteCategory, sieve: &Sieve, h: ArrIx) -> Sieve {
    sieve.pullback(c, h)
}

fn too_large(what: &str) -> Error {
    Error::TooLarge { what: what.into(), limit: 1 << SUBSET_LIMIT }
}

/// Every sieve on `root`.
pub fn all_sieves(c: &FiniteCategory, root: ObjIx) -> Result<Vec<BTreeSet<ArrIx>>, Error> {
    let into = c.arrows_into(root);
    if into.len() > SUBSET_LIMIT {
        return Err(too_large("sieve enumeration"));
    }
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << into.len()) {
        let set: BTreeSet<ArrIx> = into.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &a)| a).collect();
        if (Sieve { root, arrows: set.clone() }).is_closed(c) {
            out.push(set);
        }
    }
    Ok(out)
}

/// Every vertical sieve on `root`.
pub fn all_vertical_sieves(g: &OrderedGroupoid, root: ObjIx) -> Result<Vec<BTreeSet<ObjIx>>, Error> {
    let below = g.below(root);
    if below.len() > SUBSET_LIMIT {
        return Err(too_large("vertical sieve enumeration"));
    }
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << below.len()) {
        let set: BTreeSet<ObjIx> = below.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &a)| a).collect();
        if (VerticalSieve { root, members: set.clone() }).is_closed(g) {
            out.push(set);
        }
    }
    Ok(out)
}

/// A family of covering sieves for each object. Whether it satisfies the
/// axioms is decided by [`GrothendieckTopology::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrothendieckTopology {
    category: Arc<FiniteCategory>,
    covers: Vec<BTreeSet<BTreeSet<ArrIx>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "failure", rename_all = "snake_case")]
pub enum GrothendieckFailure {
    MaximalMissing { object: Id },
    NotStable { sieve: Vec<Id>, root: Id, along: Id },
    NotTransitive { cover: Vec<Id>, sieve: Vec<Id>, root: Id },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrothendieckVerdict {
    pub maximal: Result<(), GrothendieckFailure>,
    pub stability: Result<(), GrothendieckFailure>,
    pub transitivity: Result<(), GrothendieckFailure>,
}

impl GrothendieckVerdict {
    pub fn holds(&self) -> bool {
        self.maximal.is_ok() && self.stability.is_ok() && self.transitivity.is_ok()
    }
}

impl GrothendieckTopology {
    /// Covers given as closed arrow sets per object.
    pub fn new(category: Arc<FiniteCategory>, covers: Vec<BTreeSet<BTreeSet<ArrIx>>>) -> Result<Self, Error> {
        if covers.len() != category.object_count() {
            return Err(Error::Format("one cover family per object is required".into()));
        }
        for (a, fam) in covers.iter().enumerate() {
            for s in fam {
                let sieve = Sieve { root: a, arrows: s.clone() };
                if !sieve.is_closed(&category) {
                    return Err(Error::InvalidSieve { root: category.object_id(a).clone(), reason: "not closed under precomposition".into() });
                }
            }
        }
        Ok(GrothendieckTopology { category, covers })
    }

    /// Each listed family of arrows stands for the sieve it generates.
    pub fn from_generators(category: Arc<FiniteCategory>, generators: &[(ObjIx, Vec<ArrIx>)]) -> Result<Self, Error> {
        let mut covers = vec![BTreeSet::new(); category.object_count()];
        for (a, gens) in generators {
            covers[*a].insert(Sieve::generated(&category, *a, gens.iter().copied())?.arrows);
        }
        GrothendieckTopology::new(category, covers)
    }

    /// Only maximal sieves cover.
    pub fn trivial(category: Arc<FiniteCategory>) -> Self {
        let covers = category.objects().map(|a| BTreeSet::from([Sieve::maximal(&category, a).arrows])).collect();
        GrothendieckTopology { category, covers }
    }

    /// Every sieve covers, including the empty one.
    pub fn maximal(category: Arc<FiniteCategory>) -> Result<Self, Error> {
        let covers = category.objects().map(|a| all_sieves(&category, a).map(|v| v.into_iter().collect())).collect::<Result<_, _>>()?;
        Ok(GrothendieckTopology { category, covers })
    }

    /// The smallest topology in which every listed sieve covers.
    pub fn generate(category: Arc<FiniteCategory>, generators: &[(ObjIx, Vec<ArrIx>)]) -> Result<Self, Error> {
        let c = &*category;
        let mut covers: Vec<BTreeSet<BTreeSet<ArrIx>>> = c.objects().map(|a| BTreeSet::from([Sieve::maximal(c, a).arrows])).collect();
        for (a, gens) in generators {
            covers[*a].insert(Sieve::generated(c, *a, gens.iter().copied())?.arrows);
        }
        let sieves: Vec<Vec<BTreeSet<ArrIx>>> = c.objects().map(|a| all_sieves(c, a)).collect::<Result<_, _>>()?;
        loop {
            let mut changed = false;
            for a in c.objects() {
                let fam: Vec<BTreeSet<ArrIx>> = covers[a].iter().cloned().collect();
                for s in &fam {
                    let sieve = Sieve { root: a, arrows: s.clone() };
                    for &h in c.arrows_into(a) {
                        changed |= covers[c.dom(h)].insert(sieve.pullback(c, h).arrows);
                    }
                }
                for r in &sieves[a] {
                    if covers[a].contains(r) {
                        continue;
                    }
                    let rs = Sieve { root: a, arrows: r.clone() };
                    if fam.iter().any(|s| s.iter().all(|&h| covers[c.dom(h)].contains(&rs.pullback(c, h).arrows))) {
                        covers[a].insert(r.clone());
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        Ok(GrothendieckTopology { category, covers })
    }

    pub fn category(&self) -> &Arc<FiniteCategory> {
        &self.category
    }

    pub fn covers(&self, a: ObjIx) -> impl Iterator<Item = Sieve> + '_ {
        self.covers[a].iter().map(move |s| Sieve { root: a, arrows: s.clone() })
    }

    pub fn cover_sets(&self, a: ObjIx) -> &BTreeSet<BTreeSet<ArrIx>> {
        &self.covers[a]
    }

    pub fn is_cover(&self, sieve: &Sieve) -> bool {
        self.covers[sieve.root].contains(&sieve.arrows)
    }

    pub fn is_trivial(&self) -> bool {
        self.category.objects().all(|a| self.covers[a].len() == 1 && self.covers[a].contains(&Sieve::maximal(&self.category, a).arrows))
    }

    pub fn validate(&self) -> Result<GrothendieckVerdict, Error> {
        let c = &*self.category;
        let mut maximal = Ok(());
        let mut stability = Ok(());
        let mut transitivity = Ok(());
        for a in c.objects() {
            if maximal.is_ok() && !self.covers[a].contains(&Sieve::maximal(c, a).arrows) {
                maximal = Err(GrothendieckFailure::MaximalMissing { object: c.object_id(a).clone() });
            }
            for s in self.covers(a) {
                for &h in c.arrows_into(a) {
                    if stability.is_ok() && !self.is_cover(&s.pullback(c, h)) {
                        stability = Err(GrothendieckFailure::NotStable {
                            sieve: s.ids(c),
                            root: c.object_id(a).clone(),
                            along: c.arrow_id(h).clone(),
                        });
                    }
                }
            }
            if transitivity.is_ok() {
                for r in all_sieves(c, a)? {
                    let rs = Sieve { root: a, arrows: r };
                    if self.is_cover(&rs) {
                        continue;
                    }
                    if let Some(s) = self.covers(a).find(|s| s.arrows.iter().all(|&h| self.is_cover(&rs.pullback(c, h)))) {
                        transitivity = Err(GrothendieckFailure::NotTransitive { cover: s.ids(c), sieve: rs.ids(c), root: c.object_id(a).clone() });
                        break;
                    }
                }
            }
        }
        Ok(GrothendieckVerdict { maximal, stability, transitivity })
    }
}

/// A family of covering vertical sieves for each object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EhresmannTopology {
    groupoid: Arc<OrderedGroupoid>,
    covers: Vec<BTreeSet<BTreeSet<ObjIx>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "failure", rename_all = "snake_case")]
pub enum EhresmannFailure {
    TrivialMissing { object: Id },
    NotStable { sieve: Vec<Id>, root: Id, along: Id },
    NotLocal { cover: Vec<Id>, sieve: Vec<Id>, root: Id },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EhresmannVerdict {
    pub et1: Result<(), EhresmannFailure>,
    pub et2: Result<(), EhresmannFailure>,
    pub et3: Result<(), EhresmannFailure>,
}

impl EhresmannVerdict {
    pub fn holds(&self) -> bool {
        self.et1.is_ok() && self.et2.is_ok() && self.et3.is_ok()
    }
}

impl EhresmannTopology {
    pub fn new(groupoid: Arc<OrderedGroupoid>, covers: Vec<BTreeSet<BTreeSet<ObjIx>>>) -> Result<Self, Error> {
        if covers.len() != groupoid.object_count() {
            return Err(Error::Format("one cover family per object is required".into()));
        }
        for (a, fam) in covers.iter().enumerate() {
            for s in fam {
                if !(VerticalSieve { root: a, members: s.clone() }).is_closed(&groupoid) {
                    return Err(Error::InvalidSieve { root: groupoid.object_id(a).clone(), reason: "not a downward-closed set below the root".into() });
                }
            }
        }
        Ok(EhresmannTopology { groupoid, covers })
    }

    /// Each listed object set stands for its downward closure.
    pub fn from_generators(groupoid: Arc<OrderedGroupoid>, generators: &[(ObjIx, Vec<ObjIx>)]) -> Result<Self, Error> {
        let mut covers = vec![BTreeSet::new(); groupoid.object_count()];
        for (a, gens) in generators {
            covers[*a].insert(VerticalSieve::generated(&groupoid, *a, gens.iter().copied())?.members);
        }
        EhresmannTopology::new(groupoid, covers)
    }

    pub fn trivial(groupoid: Arc<OrderedGroupoid>) -> Self {
        let covers = groupoid.objects().map(|a| BTreeSet::from([VerticalSieve::maximal(&groupoid, a).members])).collect();
        EhresmannTopology { groupoid, covers }
    }

    pub fn maximal(groupoid: Arc<OrderedGroupoid>) -> Result<Self, Error> {
        let covers =
            groupoid.objects().map(|a| all_vertical_sieves(&groupoid, a).map(|v| v.into_iter().collect())).collect::<Result<_, _>>()?;
        Ok(EhresmannTopology { groupoid, covers })
    }

    /// The smallest Ehresmann topology in which every listed sieve covers.
    pub fn generate(groupoid: Arc<OrderedGroupoid>, generators: &[(ObjIx, Vec<ObjIx>)]) -> Result<Self, Error> {
        let g = &*groupoid;
        let mut covers: Vec<BTreeSet<BTreeSet<ObjIx>>> = g.objects().map(|a| BTreeSet::from([VerticalSieve::maximal(g, a).members])).collect();
        for (a, gens) in generators {
            covers[*a].insert(VerticalSieve::generated(g, *a, gens.iter().copied())?.members);
        }
        let sieves: Vec<Vec<BTreeSet<ObjIx>>> = g.objects().map(|a| all_vertical_sieves(g, a)).collect::<Result<_, _>>()?;
        loop {
            let mut changed = false;
            for b in g.objects() {
                let fam: Vec<BTreeSet<ObjIx>> = covers[b].iter().cloned().collect();
                for s in &fam {
                    let vs = VerticalSieve { root: b, members: s.clone() };
                    for &b1 in g.below(b) {
                        for f in g.harrows().filter(|&f| g.cod(f) == b1) {
                            changed |= covers[g.dom(f)].insert(vertical_sieve_pullback(g, &vs, f)?.members);
                        }
                    }
                }
                for r in &sieves[b] {
                    if covers[b].contains(r) {
                        continue;
                    }
                    let rs = VerticalSieve { root: b, members: r.clone() };
                    let local = fam.iter().any(|s| {
                        s.iter().all(|&a1| {
                            g.harrows()
                                .filter(|&f| g.cod(f) == a1)
                                .all(|f| covers[g.dom(f)].contains(&vertical_sieve_pullback(g, &rs, f).expect("below root").members))
                        })
                    });
                    if local {
                        covers[b].insert(r.clone());
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        Ok(EhresmannTopology { groupoid, covers })
    }

    pub fn groupoid(&self) -> &Arc<OrderedGroupoid> {
        &self.groupoid
    }

    pub fn covers(&self, a: ObjIx) -> impl Iterator<Item = VerticalSieve> + '_ {
        self.covers[a].iter().map(move |s| VerticalSieve { root: a, members: s.clone() })
    }

    pub fn cover_sets(&self, a: ObjIx) -> &BTreeSet<BTreeSet<ObjIx>> {
        &self.covers[a]
    }

    pub fn is_cover(&self, sieve: &VerticalSieve) -> bool {
        self.covers[sieve.root].contains(&sieve.members)
    }

    pub fn is_trivial(&self) -> bool {
        self.groupoid.objects().all(|a| self.covers[a].len() == 1 && self.covers[a].contains(&VerticalSieve::maximal(&self.groupoid, a).members))
    }

    pub fn validate(&self) -> Result<EhresmannVerdict, Error> {
        let g = &*self.groupoid;
        let mut et1 = Ok(());
        let mut et2 = Ok(());
        let mut et3 = Ok(());
        for b in g.objects() {
            if et1.is_ok() && !self.covers[b].contains(&VerticalSieve::maximal(g, b).members) {
                et1 = Err(EhresmannFailure::TrivialMissing { object: g.object_id(b).clone() });
            }
            for s in self.covers(b) {
                for &b1 in g.below(b) {
                    for f in g.harrows().filter(|&f| g.cod(f) == b1) {
                        if et2.is_ok() && !self.is_cover(&vertical_sieve_pullback(g, &s, f)?) {
                            et2 = Err(EhresmannFailure::NotStable { sieve: s.ids(g), root: g.object_id(b).clone(), along: g.arrow_id(f).clone() });
                        }
                    }
                }
            }
            if et3.is_ok() {
                for r in all_vertical_sieves(g, b)? {
                    let rs = VerticalSieve { root: b, members: r };
                    if self.is_cover(&rs) {
                        continue;
                    }
                    let witness = self.covers(b).find(|s| {
                        s.members.iter().all(|&a1| {
                            g.harrows()
                                .filter(|&f| g.cod(f) == a1)
                                .all(|f| self.is_cover(&vertical_sieve_pullback(g, &rs, f).expect("below root")))
                        })
                    });
                    if let Some(s) = witness {
                        et3 = Err(EhresmannFailure::NotLocal { cover: s.ids(g), sieve: rs.ids(g), root: g.object_id(b).clone() });
                        break;
                    }
                }
            }
        }
        Ok(EhresmannVerdict { et1, et2, et3 })
    }
}

/// The set of vertical codomains `{ A' : (h : B → A', A' ≤ A) ∈ S }`,
/// closed downward.
pub fn v_cod_set(l: &LCategory, sieve: &Sieve) -> BTreeSet<ObjIx> {
    let g = &l.base;
    sieve.arrows.iter().flat_map(|&a| g.below(l.decode(a).v_cod).iter().copied()).collect()
}

/// `J_T` on `L(𝒢)`: a closed sieve covers iff its vertical codomains form a
/// member of `T(A)`.
pub fn ehresmann_to_grothendieck(t: &EhresmannTopology, l: &LCategory) -> Result<GrothendieckTopology, Error> {
    if *t.groupoid != *l.base {
        return Err(Error::NotComposable("topology lives on a different ordered groupoid".into()));
    }
    let c = &l.category;
    let mut covers = Vec::with_capacity(c.object_count());
    for a in c.objects() {
        let mut fam = BTreeSet::new();
        for s in all_sieves(c, a)? {
            let sieve = Sieve { root: a, arrows: s };
            if t.covers[a].contains(&v_cod_set(l, &sieve)) {
                fam.insert(sieve.arrows);
            }
        }
        covers.push(fam);
    }
    GrothendieckTopology::new(c.clone(), covers)
}

/// The sieve of `L(𝒢)` generated by `{ (1_{A'}, A' ≤ A) : A' ∈ 𝒜 }`.
pub fn identity_sieve(l: &LCategory, sieve: &VerticalSieve) -> Sieve {
    let gens: Vec<ArrIx> = sieve.members.iter().map(|&a1| l.vertical(a1, sieve.root)).collect();
    Sieve::generated(&l.category, sieve.root, gens).expect("vertical arrows end at the root")
}

/// `T_J` on `𝒢` from `J` on `L(𝒢)`.
pub fn grothendieck_to_ehresmann_on_l(j: &GrothendieckTopology, l: &LCategory) -> Result<EhresmannTopology, Error> {
    if *j.category != *l.category {
        return Err(Error::NotComposable("topology lives on a different category".into()));
    }
    let g = &l.base;
    let mut covers = Vec::with_capacity(g.object_count());
    for a in g.objects() {
        let mut fam = BTreeSet::new();
        for s in all_vertical_sieves(g, a)? {
            let vs = VerticalSieve { root: a, members: s };
            if j.is_cover(&identity_sieve(l, &vs)) {
                fam.insert(vs.members);
            }
        }
        covers.push(fam);
    }
    EhresmannTopology::new(g.clone(), covers)
}

/// `[m S] = { [m n] : n ∈ S }`.
pub fn image_vertical_sieve(gg: &GGroupoid, m: ArrIx, sieve: &Sieve) -> VerticalSieve {
    let c = &gg.base;
    VerticalSieve {
        root: gg.object_of(m),
        members: sieve.arrows.iter().map(|&n| gg.object_of(c.comp(m, n))).collect(),
    }
}

/// `T_J` on `G(𝒞)`: `T_J([m]) = { [m̄ S] : S ∈ J(dom m̄) }`.
pub fn grothendieck_to_ehresmann_on_g(j: &GrothendieckTopology, gg: &GGroupoid) -> Result<EhresmannTopology, Error> {
    if *j.category != *gg.base {
        return Err(Error::NotComposable("topology lives on a different category".into()));
    }
    let c = &gg.base;
    let covers = gg
        .groupoid
        .objects()
        .map(|o| {
            let m = gg.representative(o);
            j.covers(c.dom(m)).map(|s| image_vertical_sieve(gg, m, &s).members).collect()
        })
        .collect();
    EhresmannTopology::new(gg.groupoid.clone(), covers)
}

/// `J_T` on `𝒞`: `S ∈ J_T(A)` iff `{ [m] : m ∈ S } ∈ T([1_A])`.
pub fn ehresmann_to_grothendieck_on_g(t: &EhresmannTopology, gg: &GGroupoid) -> Result<GrothendieckTopology, Error> {
    if *t.groupoid != *gg.groupoid {
        return Err(Error::NotComposable("topology lives on a different ordered groupoid".into()));
    }
    let c = &gg.base;
    let mut covers = Vec::with_capacity(c.object_count());
    for a in c.objects() {
        let unit = gg.unit_object(a);
        let mut fam = BTreeSet::new();
        for s in all_sieves(c, a)? {
            let image: BTreeSet<ObjIx> = s.iter().map(|&m| gg.object_of(m)).collect();
            if t.covers[unit].contains(&image) {
                fam.insert(s);
            }
        }
        covers.push(fam);
    }
    GrothendieckTopology::new(c.clone(), covers)
}

/// Carries `T` along an isomorphism of ordered groupoids out of its base.
pub fn transport_ehresmann(t: &EhresmannTopology, iso: &DoubleFunctor) -> Result<EhresmannTopology, Error> {
    if **iso.source() != *t.groupoid {
        return Err(Error::NotComposable("isomorphism does not start at the topology's base".into()));
    }
    let target = iso.target();
    if !iso.underlying().is_isomorphism() {
        return Err(Error::NotComposable("transport needs an isomorphism".into()));
    }
    let mut covers = vec![BTreeSet::new(); target.object_count()];
    for a in t.groupoid.objects() {
        covers[iso.obj(a)] = t.covers[a].iter().map(|s| s.iter().map(|&x| iso.obj(x)).collect()).collect();
    }
    EhresmannTopology::new(target.clone(), covers)
}

/// Carries `J` along an isomorphism of categories out of its base.
pub fn transport_grothendieck(j: &GrothendieckTopology, iso: &Functor) -> Result<GrothendieckTopology, Error> {
    if **iso.source() != *j.category || !iso.is_isomorphism() {
        return Err(Error::NotComposable("transport needs an isomorphism out of the topology's base".into()));
    }
    let target = iso.target();
    let mut covers = vec![BTreeSet::new(); target.object_count()];
    for a in j.category.objects() {
        covers[iso.obj(a)] = j.covers[a].iter().map(|s| s.iter().map(|&x| iso.arr(x)).collect()).collect();
    }
    GrothendieckTopology::new(target.clone(), covers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bridge::{construct_g, construct_l};
    use crate::fixtures;

    fn arr() -> Arc<FiniteCategory> {
        Arc::new(fixtures::arrow_category())
    }

    #[test]
    fn pullback_of_maximal_is_maximal() {
        let c = arr();
        let b = c.object_ix("B").unwrap();
        let a = c.arrow_ix("a").unwrap();
        let max = Sieve::maximal(&c, b);
        assert_eq!(max.pullback(&c, a), Sieve::maximal(&c, c.object_ix("A").unwrap()));
        assert_eq!(max.pullback(&c, c.identity(b)), max);
    }

    #[test]
    fn pullback_on_arrow_category() {
        let c = arr();
        let b = c.object_ix("B").unwrap();
        let a = c.arrow_ix("a").unwrap();
        let empty = Sieve { root: b, arrows: BTreeSet::new() };
        assert!(empty.pullback(&c, a).arrows.is_empty());
        let s = Sieve::generated(&c, b, [a]).unwrap();
        assert_eq!(s.pullback(&c, a).arrows, BTreeSet::from([c.arrow_ix("1A").unwrap()]));
    }

    #[test]
    fn trivial_and_maximal_topologies_validate() {
        let c = arr();
        assert!(GrothendieckTopology::trivial(c.clone()).validate().unwrap().holds());
        assert!(GrothendieckTopology::maximal(c).unwrap().validate().unwrap().holds());
        let g = Arc::new(fixtures::interval_z2());
        assert!(EhresmannTopology::trivial(g.clone()).validate().unwrap().holds());
        assert!(EhresmannTopology::maximal(g).unwrap().validate().unwrap().holds());
    }

    #[test]
    fn dropping_the_trivial_sieve_breaks_et1() {
        let g = Arc::new(fixtures::interval_poset());
        let t = EhresmannTopology::new(g, vec![BTreeSet::new(), BTreeSet::from([BTreeSet::from([0, 1])])]).unwrap();
        assert!(matches!(t.validate().unwrap().et1, Err(EhresmannFailure::TrivialMissing { .. })));
    }

    #[test]
    fn generated_topology_on_arrow_category() {
        let c = arr();
        let b = c.object_ix("B").unwrap();
        let j = GrothendieckTopology::generate(c.clone(), &[(b, vec![c.arrow_ix("a").unwrap()])]).unwrap();
        assert!(j.validate().unwrap().holds());
        assert_eq!(j.cover_sets(b).len(), 2);
        assert_eq!(j.cover_sets(c.object_ix("A").unwrap()).len(), 1);
    }

    #[test]
    fn vertical_pullback_on_interval_groupoid() {
        let g = fixtures::interval_z2();
        let s1 = g.arrow_ix("s1").unwrap();
        let lower = VerticalSieve::generated(&g, 1, [0]).unwrap();
        let p = vertical_sieve_pullback(&g, &lower, s1).unwrap();
        assert_eq!(p.members, BTreeSet::from([0]));
        let full = VerticalSieve::maximal(&g, 1);
        assert_eq!(vertical_sieve_pullback(&g, &full, s1).unwrap(), VerticalSieve::maximal(&g, 1));
        let s0 = g.arrow_ix("s0").unwrap();
        assert_eq!(vertical_sieve_pullback(&g, &lower, s0).unwrap().members, BTreeSet::from([0]));
    }

    #[test]
    fn round_trip_through_l() {
        let g = Arc::new(fixtures::interval_poset());
        let l = construct_l(&g).unwrap();
        let t = EhresmannTopology::generate(g.clone(), &[(1, vec![0])]).unwrap();
        let j = ehresmann_to_grothendieck(&t, &l).unwrap();
        assert!(j.validate().unwrap().holds());
        assert_eq!(grothendieck_to_ehresmann_on_l(&j, &l).unwrap(), t);
    }

    #[test]
    fn round_trip_through_g() {
        let c = arr();
        let gg = construct_g(&c).unwrap();
        let b = c.object_ix("B").unwrap();
        let j = GrothendieckTopology::generate(c.clone(), &[(b, vec![c.arrow_ix("a").unwrap()])]).unwrap();
        let t = grothendieck_to_ehresmann_on_g(&j, &gg).unwrap();
        assert!(t.validate().unwrap().holds());
        assert_eq!(ehresmann_to_grothendieck_on_g(&t, &gg).unwrap(), j);
    }
}
