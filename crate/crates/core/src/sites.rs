//! Morphisms of Grothendieck and Ehresmann sites: covering preservation,
//! covering flatness over finite diagrams, the four local conditions of the
//! comparison lemma, and the induced functor on sheaves.
//!
//! Diagram shapes are presented by finite graphs (horizontal edges, plus
//! vertical edges `i ≤ i'` on the Ehresmann side). A cone over such a
//! diagram is exactly a cone over the free shape it generates, because every
//! cone condition on a composite or inverse follows from the conditions on
//! its factors.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::{Serialize, Serializer};

use crate::bridge::{construct_g, construct_gl, construct_l, eta, g_on_morphism, gl_comparison, gl_on_morphism, kappa, l_on_morphism, GLGroupoid, LCategory};
use crate::error::Error;
use crate::fincat::{ArrIx, FiniteCategory, Functor, ObjIx};
use crate::id::Id;
use crate::ogpd::{DoubleFunctor, OrderedGroupoid};
use crate::sheaves::{
    all_morphisms, enumerate_presheaves, is_sheaf_ehresmann, is_sheaf_grothendieck, DoublePresheaf, Presheaf, CANDIDATE_LIMIT,
};
use crate::topology::{
    ehresmann_to_grothendieck, grothendieck_to_ehresmann_on_g, transport_ehresmann, EhresmannTopology, GrothendieckTopology, Sieve,
    VerticalSieve,
};
use crate::util::for_each_product;

/// Where a condition fails, and why.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub at: Vec<Id>,
    pub reason: String,
}

pub type Condition = Result<(), Failure>;

/// `true`, or the failure.
fn serialize_condition<S: Serializer>(c: &Condition, s: S) -> Result<S::Ok, S::Error> {
    match c {
        Ok(()) => s.serialize_bool(true),
        Err(f) => f.serialize(s),
    }
}

fn fail(at: Vec<Id>, reason: impl Into<String>) -> Condition {
    Err(Failure { at, reason: reason.into() })
}

#[derive(Clone, Debug)]
pub struct GrothendieckSiteMorphism {
    functor: Functor,
    source: GrothendieckTopology,
    target: GrothendieckTopology,
}

impl GrothendieckSiteMorphism {
    pub fn new(functor: Functor, source: GrothendieckTopology, target: GrothendieckTopology) -> Result<Self, Error> {
        if **functor.source() != **source.category() || **functor.target() != **target.category() {
            return Err(Error::NotComposable("functor endpoints differ from the sites' categories".into()));
        }
        Ok(GrothendieckSiteMorphism { functor, source, target })
    }

    pub fn identity(j: &GrothendieckTopology) -> Self {
        GrothendieckSiteMorphism { functor: Functor::identity(j.category()), source: j.clone(), target: j.clone() }
    }

    pub fn functor(&self) -> &Functor {
        &self.functor
    }

    pub fn source(&self) -> &GrothendieckTopology {
        &self.source
    }

    pub fn target(&self) -> &GrothendieckTopology {
        &self.target
    }
}

#[derive(Clone, Debug)]
pub struct EhresmannSiteMorphism {
    functor: DoubleFunctor,
    source: EhresmannTopology,
    target: EhresmannTopology,
}

impl EhresmannSiteMorphism {
    pub fn new(functor: DoubleFunctor, source: EhresmannTopology, target: EhresmannTopology) -> Result<Self, Error> {
        if **functor.source() != **source.groupoid() || **functor.target() != **target.groupoid() {
            return Err(Error::NotComposable("double functor endpoints differ from the sites' groupoids".into()));
        }
        Ok(EhresmannSiteMorphism { functor, source, target })
    }

    pub fn identity(t: &EhresmannTopology) -> Self {
        EhresmannSiteMorphism { functor: DoubleFunctor::identity(t.groupoid()), source: t.clone(), target: t.clone() }
    }

    pub fn functor(&self) -> &DoubleFunctor {
        &self.functor
    }

    pub fn source(&self) -> &EhresmannTopology {
        &self.source
    }

    pub fn target(&self) -> &EhresmannTopology {
        &self.target
    }
}

/// `(LG(𝒞), J_{T_J})` for a site `(𝒞, J)`, with `η` as the morphism.
pub fn eta_site_morphism(j: &GrothendieckTopology) -> Result<GrothendieckSiteMorphism, Error> {
    let e = eta(j.category())?;
    let t = grothendieck_to_ehresmann_on_g(j, &e.g)?;
    let jt = ehresmann_to_grothendieck(&t, &e.lg)?;
    GrothendieckSiteMorphism::new(e.functor, j.clone(), jt)
}

/// `T_{J_T}` on the canonical `GL(𝒢)`.
pub fn gl_topology(t: &EhresmannTopology, gl: &GLGroupoid) -> Result<EhresmannTopology, Error> {
    let l = construct_l(t.groupoid())?;
    let j = ehresmann_to_grothendieck(t, &l)?;
    let gg = construct_g(&l.category)?;
    let tg = grothendieck_to_ehresmann_on_g(&j, &gg)?;
    transport_ehresmann(&tg, &gl_comparison(&l, &gg, gl)?)
}

/// `κ : (GL(𝒢), T_{J_T}) → (𝒢, T)`.
pub fn kappa_site_morphism(t: &EhresmannTopology) -> Result<EhresmannSiteMorphism, Error> {
    let k = kappa(t.groupoid())?;
    let source = gl_topology(t, &k.gl)?;
    EhresmannSiteMorphism::new(k.functor, source, t.clone())
}

/// `L(M) : (L(𝒢), J_T) → (L(𝒢'), J_{T'})`.
pub fn l_site_morphism(m: &EhresmannSiteMorphism) -> Result<(GrothendieckSiteMorphism, LCategory, LCategory), Error> {
    let ls = construct_l(m.source.groupoid())?;
    let lt = construct_l(m.target.groupoid())?;
    let f = l_on_morphism(&m.functor, &ls, &lt)?;
    let morphism = GrothendieckSiteMorphism::new(f, ehresmann_to_grothendieck(&m.source, &ls)?, ehresmann_to_grothendieck(&m.target, &lt)?)?;
    Ok((morphism, ls, lt))
}

/// `G(F) : (G(𝒞), T_J) → (G(𝒞'), T_{J'})`.
pub fn g_site_morphism(f: &GrothendieckSiteMorphism) -> Result<EhresmannSiteMorphism, Error> {
    let gs = construct_g(f.source.category())?;
    let gt = construct_g(f.target.category())?;
    let m = g_on_morphism(&f.functor, &gs, &gt)?;
    EhresmannSiteMorphism::new(m, grothendieck_to_ehresmann_on_g(&f.source, &gs)?, grothendieck_to_ehresmann_on_g(&f.target, &gt)?)
}

/// `GL(M) : (GL(𝒢), T_{J_T}) → (GL(𝒢'), T_{J_{T'}})`.
pub fn gl_site_morphism(m: &EhresmannSiteMorphism) -> Result<EhresmannSiteMorphism, Error> {
    let gls = construct_gl(m.source.groupoid())?;
    let glt = construct_gl(m.target.groupoid())?;
    let f = gl_on_morphism(&m.functor, &gls, &glt)?;
    EhresmannSiteMorphism::new(f, gl_topology(&m.source, &gls)?, gl_topology(&m.target, &glt)?)
}

fn arrow_ids(c: &FiniteCategory, xs: impl IntoIterator<Item = ArrIx>) -> Vec<Id> {
    xs.into_iter().map(|a| c.arrow_id(a).clone()).collect()
}

fn object_ids(g: &OrderedGroupoid, xs: impl IntoIterator<Item = ObjIx>) -> Vec<Id> {
    xs.into_iter().map(|a| g.object_id(a).clone()).collect()
}

fn down_closure(g: &OrderedGroupoid, xs: impl IntoIterator<Item = ObjIx>) -> BTreeSet<ObjIx> {
    xs.into_iter().flat_map(|x| g.below(x).iter().copied()).collect()
}

/// The image of every cover generates a cover.
pub fn is_covering_preserving_g(m: &GrothendieckSiteMorphism) -> Condition {
    let (f, c, t) = (&m.functor, m.source.category(), m.target.category());
    for a in c.objects() {
        for s in m.source.covers(a) {
            let image = Sieve { root: f.obj(a), arrows: t.sieve_closure(f.obj(a), s.arrows.iter().map(|&x| f.arr(x))) };
            if !m.target.is_cover(&image) {
                return fail(s.ids(c), format!("image on {} does not cover", t.object_id(f.obj(a))));
            }
        }
    }
    Ok(())
}

/// `M𝒜`, closed downward, covers `M(A)` for every `𝒜 ∈ T(A)`.
pub fn is_covering_preserving_e(m: &EhresmannSiteMorphism) -> Condition {
    let (f, g, t) = (&m.functor, m.source.groupoid(), m.target.groupoid());
    for a in g.objects() {
        for s in m.source.covers(a) {
            let image = VerticalSieve { root: f.obj(a), members: down_closure(t, s.members.iter().map(|&x| f.obj(x))) };
            if !m.target.is_cover(&image) {
                return fail(s.ids(g), format!("image on {} does not cover", t.object_id(f.obj(a))));
            }
        }
    }
    Ok(())
}

/// A finite graph presenting a diagram shape.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Shape {
    pub name: String,
    pub nodes: usize,
    pub h_edges: Vec<(usize, usize)>,
    /// `(lower, upper)`
    pub v_edges: Vec<(usize, usize)>,
}

impl Shape {
    fn new(name: &str, nodes: usize, h_edges: &[(usize, usize)], v_edges: &[(usize, usize)]) -> Self {
        Shape { name: name.into(), nodes, h_edges: h_edges.to_vec(), v_edges: v_edges.to_vec() }
    }

    pub fn size(&self) -> usize {
        self.nodes + self.h_edges.len() + self.v_edges.len()
    }
}

/// Empty, discrete pair and parallel pair.
pub fn canonical_shapes_g() -> Vec<Shape> {
    vec![Shape::new("empty", 0, &[], &[]), Shape::new("pair", 2, &[], &[]), Shape::new("parallel", 2, &[(0, 1), (0, 1)], &[])]
}

/// The Grothendieck shapes plus a single vertical arrow.
pub fn canonical_shapes_e() -> Vec<Shape> {
    let mut v = canonical_shapes_g();
    v.push(Shape::new("vertical", 2, &[], &[(0, 1)]));
    v
}

/// Every shape with at most `bound` nodes and edges together.
pub fn oracle_shapes(bound: usize, vertical: bool) -> Vec<Shape> {
    let mut out = Vec::new();
    for nodes in 0..=bound {
        let pairs: Vec<(usize, usize)> = (0..nodes).cartesian_product(0..nodes).collect();
        let strict: Vec<(usize, usize)> = pairs.iter().copied().filter(|(a, b)| a != b).collect();
        for ne in 0..=bound - nodes {
            for h in pairs.iter().copied().combinations_with_replacement(ne) {
                let v_max = if vertical { bound - nodes - ne } else { 0 };
                for nv in 0..=v_max {
                    for v in strict.iter().copied().combinations(nv) {
                        out.push(Shape { name: format!("oracle{}", out.len()), nodes, h_edges: h.clone(), v_edges: v });
                    }
                }
            }
        }
    }
    out
}

/// A labelling of a shape: objects on nodes, arrows on horizontal edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    pub shape: Shape,
    pub objects: Vec<ObjIx>,
    pub arrows: Vec<ArrIx>,
}

impl Diagram {
    pub fn map(&self, f: &Functor) -> Diagram {
        Diagram {
            shape: self.shape.clone(),
            objects: self.objects.iter().map(|&o| f.obj(o)).collect(),
            arrows: self.arrows.iter().map(|&a| f.arr(a)).collect(),
        }
    }

    pub fn map_double(&self, m: &DoubleFunctor) -> Diagram {
        Diagram {
            shape: self.shape.clone(),
            objects: self.objects.iter().map(|&o| m.obj(o)).collect(),
            arrows: self.arrows.iter().map(|&a| m.arr(a)).collect(),
        }
    }

    fn describe(&self, obj: impl Fn(ObjIx) -> Id, arr: impl Fn(ArrIx) -> Id) -> Vec<Id> {
        self.objects.iter().map(|&o| obj(o)).chain(self.arrows.iter().map(|&a| arr(a))).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub vertex: ObjIx,
    pub legs: Vec<ArrIx>,
}

/// An hv-cone: each leg is a horizontal arrow `ξ_i : U → E_i` whose
/// codomain lies below `D_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HvCone {
    pub vertex: ObjIx,
    pub legs: Vec<ArrIx>,
}

fn too_large(what: &str) -> Error {
    Error::TooLarge { what: what.into(), limit: CANDIDATE_LIMIT }
}

/// Every diagram of `shape` in `c`, streamed to `visit` until it returns false.
fn for_each_diagram(
    objects: &[ObjIx],
    shape: &Shape,
    hom: impl Fn(ObjIx, ObjIx) -> Vec<ArrIx>,
    leq: impl Fn(ObjIx, ObjIx) -> bool,
    mut visit: impl FnMut(Diagram) -> Result<bool, Error>,
) -> Result<bool, Error> {
    let node_choices = vec![objects.to_vec(); shape.nodes];
    let mut err = None;
    let mut count = 0usize;
    let finished = for_each_product(&node_choices, |objs| {
        if shape.v_edges.iter().any(|&(a, b)| !leq(objs[a], objs[b])) {
            return true;
        }
        let edge_choices: Vec<Vec<ArrIx>> = shape.h_edges.iter().map(|&(s, t)| hom(objs[s], objs[t])).collect();
        for_each_product(&edge_choices, |arrs| {
            count += 1;
            if count > CANDIDATE_LIMIT {
                err = Some(too_large("diagram enumeration"));
                return false;
            }
            match visit(Diagram { shape: shape.clone(), objects: objs.to_vec(), arrows: arrs.to_vec() }) {
                Ok(go) => go,
                Err(e) => {
                    err = Some(e);
                    false
                }
            }
        })
    });
    match err {
        Some(e) => Err(e),
        None => Ok(finished),
    }
}

pub fn diagrams_g(c: &FiniteCategory, shape: &Shape) -> Result<Vec<Diagram>, Error> {
    let mut out = Vec::new();
    let objs: Vec<ObjIx> = c.objects().collect();
    for_each_diagram(&objs, shape, |a, b| c.hom(a, b).to_vec(), |a, b| a == b, |d| {
        out.push(d);
        Ok(true)
    })?;
    Ok(out)
}

pub fn diagrams_e(g: &OrderedGroupoid, shape: &Shape) -> Result<Vec<Diagram>, Error> {
    let mut out = Vec::new();
    let objs: Vec<ObjIx> = g.objects().collect();
    for_each_diagram(&objs, shape, |a, b| g.hom(a, b).to_vec(), |a, b| g.obj_leq(a, b), |d| {
        out.push(d);
        Ok(true)
    })?;
    Ok(out)
}

/// Every cone over `d` in `c`.
pub fn enumerate_cones(c: &FiniteCategory, d: &Diagram) -> Result<Vec<Cone>, Error> {
    let mut out = Vec::new();
    for u in c.objects() {
        let legs: Vec<Vec<ArrIx>> = d.objects.iter().map(|&di| c.hom(u, di).to_vec()).collect();
        for_each_product(&legs, |legs| {
            let ok = d.shape.h_edges.iter().zip(&d.arrows).all(|(&(s, t), &a)| c.comp(a, legs[s]) == legs[t]);
            if ok {
                out.push(Cone { vertex: u, legs: legs.to_vec() });
            }
            out.len() <= CANDIDATE_LIMIT
        });
        if out.len() > CANDIDATE_LIMIT {
            return Err(too_large("cone enumeration"));
        }
    }
    Ok(out)
}

/// Every hv-cone over `d` in `g`.
pub fn enumerate_hv_cones(g: &OrderedGroupoid, d: &Diagram) -> Result<Vec<HvCone>, Error> {
    let mut out = Vec::new();
    for u in g.objects() {
        let legs: Vec<Vec<ArrIx>> =
            d.objects.iter().map(|&di| g.harrows().filter(|&x| g.dom(x) == u && g.obj_leq(g.cod(x), di)).collect()).collect();
        for_each_product(&legs, |legs| {
            let h_ok = d.shape.h_edges.iter().zip(&d.arrows).all(|(&(s, t), &a)| g.comp(g.res(a, g.cod(legs[s])), legs[s]) == legs[t]);
            let v_ok = d.shape.v_edges.iter().all(|&(s, t)| legs[s] == legs[t]);
            if h_ok && v_ok {
                out.push(HvCone { vertex: u, legs: legs.to_vec() });
            }
            out.len() <= CANDIDATE_LIMIT
        });
        if out.len() > CANDIDATE_LIMIT {
            return Err(too_large("hv-cone enumeration"));
        }
    }
    Ok(out)
}

/// Which diagrams flatness is checked over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shapes {
    Canonical,
    /// all shapes with at most this many nodes and edges
    Oracle(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlatnessFailure {
    pub shape: String,
    pub diagram: Vec<Id>,
    pub vertex: Id,
    pub legs: Vec<Id>,
    pub sieve: Vec<Id>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlatnessVerdict {
    pub flat: bool,
    pub diagrams_checked: usize,
    pub cones_checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<FlatnessFailure>,
}

/// For every cone `T` over `F D` with vertex `U`, the sieve of `h` such that
/// `T h` factors through the image of a cone over `D` must cover `U`.
pub fn is_covering_flat_g(m: &GrothendieckSiteMorphism, shapes: Shapes) -> Result<FlatnessVerdict, Error> {
    let (f, c, t) = (&m.functor, &**m.source.category(), &**m.target.category());
    let list = match shapes {
        Shapes::Canonical => canonical_shapes_g(),
        Shapes::Oracle(n) => oracle_shapes(n, false),
    };
    let mut verdict = FlatnessVerdict { flat: true, diagrams_checked: 0, cones_checked: 0, failure: None };
    let objs: Vec<ObjIx> = c.objects().collect();
    for shape in &list {
        for_each_diagram(&objs, shape, |a, b| c.hom(a, b).to_vec(), |a, b| a == b, |d| {
            verdict.diagrams_checked += 1;
            let below = enumerate_cones(c, &d)?;
            let fd = d.map(f);
            for cone in enumerate_cones(t, &fd)? {
                verdict.cones_checked += 1;
                let u = cone.vertex;
                let sieve: BTreeSet<ArrIx> = t
                    .arrows_into(u)
                    .iter()
                    .copied()
                    .filter(|&h| {
                        below.iter().any(|w| {
                            t.hom(t.dom(h), f.obj(w.vertex))
                                .iter()
                                .any(|&k| cone.legs.iter().zip(&w.legs).all(|(&ti, &ci)| t.comp(ti, h) == t.comp(f.arr(ci), k)))
                        })
                    })
                    .collect();
                let s = Sieve { root: u, arrows: sieve };
                if !m.target.is_cover(&s) {
                    verdict.flat = false;
                    verdict.failure = Some(FlatnessFailure {
                        shape: shape.name.clone(),
                        diagram: d.describe(|o| c.object_id(o).clone(), |a| c.arrow_id(a).clone()),
                        vertex: t.object_id(u).clone(),
                        legs: arrow_ids(t, cone.legs.iter().copied()),
                        sieve: s.ids(t),
                    });
                    return Ok(false);
                }
            }
            Ok(true)
        })?;
        if !verdict.flat {
            break;
        }
    }
    Ok(verdict)
}

/// For every hv-cone `(U, ξ)` over `M D`, the objects `U' ≤ U` admitting an
/// hv-cone `(T, θ)` over `D` and `h : U' → T'` with `T' ≤ M T` and
/// `ξ_i|_{U'} = (M θ_i)|_{T'} ∘ h` for all `i` must form a cover of `U`.
pub fn is_covering_flat_e(m: &EhresmannSiteMorphism, shapes: Shapes) -> Result<FlatnessVerdict, Error> {
    let (f, g, t) = (&m.functor, &**m.source.groupoid(), &**m.target.groupoid());
    let list = match shapes {
        Shapes::Canonical => canonical_shapes_e(),
        Shapes::Oracle(n) => oracle_shapes(n, true),
    };
    let mut verdict = FlatnessVerdict { flat: true, diagrams_checked: 0, cones_checked: 0, failure: None };
    let objs: Vec<ObjIx> = g.objects().collect();
    for shape in &list {
        for_each_diagram(&objs, shape, |a, b| g.hom(a, b).to_vec(), |a, b| g.obj_leq(a, b), |d| {
            verdict.diagrams_checked += 1;
            let below = enumerate_hv_cones(g, &d)?;
            let fd = d.map_double(f);
            for cone in enumerate_hv_cones(t, &fd)? {
                verdict.cones_checked += 1;
                let u = cone.vertex;
                let members: BTreeSet<ObjIx> = t
                    .below(u)
                    .iter()
                    .copied()
                    .filter(|&u1| {
                        below.iter().any(|w| {
                            t.harrows().filter(|&h| t.dom(h) == u1 && t.obj_leq(t.cod(h), f.obj(w.vertex))).any(|h| {
                                cone.legs
                                    .iter()
                                    .zip(&w.legs)
                                    .all(|(&xi, &theta)| t.res(xi, u1) == t.comp(t.res(f.arr(theta), t.cod(h)), h))
                            })
                        })
                    })
                    .collect();
                let s = VerticalSieve { root: u, members };
                if !m.target.is_cover(&s) {
                    verdict.flat = false;
                    verdict.failure = Some(FlatnessFailure {
                        shape: shape.name.clone(),
                        diagram: d.describe(|o| g.object_id(o).clone(), |a| g.arrow_id(a).clone()),
                        vertex: t.object_id(u).clone(),
                        legs: cone.legs.iter().map(|&a| t.arrow_id(a).clone()).collect(),
                        sieve: s.ids(t),
                    });
                    return Ok(false);
                }
            }
            Ok(true)
        })?;
        if !verdict.flat {
            break;
        }
    }
    Ok(verdict)
}

/// The four conditions of the comparison lemma, in order: locally full,
/// locally faithful, locally surjective on objects, co-continuous.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalConditions {
    #[serde(serialize_with = "serialize_condition")]
    pub locally_full: Condition,
    #[serde(serialize_with = "serialize_condition")]
    pub locally_faithful: Condition,
    #[serde(serialize_with = "serialize_condition")]
    pub locally_surjective: Condition,
    #[serde(serialize_with = "serialize_condition")]
    pub co_continuous: Condition,
}

impl LocalConditions {
    pub fn as_array(&self) -> [bool; 4] {
        [self.locally_full.is_ok(), self.locally_faithful.is_ok(), self.locally_surjective.is_ok(), self.co_continuous.is_ok()]
    }

    pub fn first_three(&self) -> bool {
        self.as_array()[..3].iter().all(|&b| b)
    }

    pub fn all(&self) -> bool {
        self.as_array().iter().all(|&b| b)
    }
}

pub fn check_gs_conditions(m: &GrothendieckSiteMorphism) -> LocalConditions {
    let (f, c, t) = (&m.functor, &**m.source.category(), &**m.target.category());
    let (j, j1) = (&m.source, &m.target);
    let locally_full = (|| {
        for a in c.objects() {
            for b in c.objects() {
                for &g in t.hom(f.obj(a), f.obj(b)) {
                    let arrows = c
                        .arrows_into(a)
                        .iter()
                        .copied()
                        .filter(|&x| c.hom(c.dom(x), b).iter().any(|&y| f.arr(y) == t.comp(g, f.arr(x))))
                        .collect();
                    let s = Sieve { root: a, arrows };
                    if !j.is_cover(&s) {
                        return fail(vec![t.arrow_id(g).clone(), c.object_id(a).clone(), c.object_id(b).clone()], "no covering sieve lifts g");
                    }
                }
            }
        }
        Ok(())
    })();
    let locally_faithful = (|| {
        for a in c.objects() {
            for b in c.objects() {
                for [&x, &y] in c.hom(a, b).iter().array_combinations() {
                    if f.arr(x) == f.arr(y) {
                        let arrows = c.arrows_into(a).iter().copied().filter(|&z| c.comp(x, z) == c.comp(y, z)).collect();
                        if !j.is_cover(&Sieve { root: a, arrows }) {
                            return fail(arrow_ids(c, [x, y]), "identified arrows are not locally equal");
                        }
                    }
                }
            }
        }
        Ok(())
    })();
    let locally_surjective = (|| {
        let image: BTreeSet<ObjIx> = c.objects().map(|a| f.obj(a)).collect();
        for u in t.objects() {
            let gens: Vec<ArrIx> = t.arrows_into(u).iter().copied().filter(|&h| image.contains(&t.dom(h))).collect();
            let s = Sieve { root: u, arrows: t.sieve_closure(u, gens) };
            if !j1.is_cover(&s) {
                return fail(vec![t.object_id(u).clone()], "arrows from the image do not cover");
            }
        }
        Ok(())
    })();
    let co_continuous = (|| {
        for a in c.objects() {
            for s1 in j1.covers(f.obj(a)) {
                let arrows = c.arrows_into(a).iter().copied().filter(|&x| s1.arrows.contains(&f.arr(x))).collect();
                if !j.is_cover(&Sieve { root: a, arrows }) {
                    return fail(s1.ids(t), format!("pullback to {} does not cover", c.object_id(a)));
                }
            }
        }
        Ok(())
    })();
    LocalConditions { locally_full, locally_faithful, locally_surjective, co_continuous }
}

pub fn check_es_conditions(m: &EhresmannSiteMorphism) -> LocalConditions {
    let (f, g, t) = (&m.functor, &**m.source.groupoid(), &**m.target.groupoid());
    let (tp, tp1) = (&m.source, &m.target);
    let locally_full = (|| {
        for a in g.objects() {
            for b in g.objects() {
                for &b1 in t.below(f.obj(b)) {
                    for &k in t.hom(f.obj(a), b1) {
                        let members = g
                            .below(a)
                            .iter()
                            .copied()
                            .filter(|&a1| {
                                g.harrows()
                                    .any(|x| g.dom(x) == a1 && g.obj_leq(g.cod(x), b) && f.arr(x) == t.res(k, f.obj(a1)))
                            })
                            .collect();
                        if !tp.is_cover(&VerticalSieve { root: a, members }) {
                            return fail(
                                vec![t.arrow_id(k).clone(), g.object_id(a).clone(), g.object_id(b).clone()],
                                "no covering vertical sieve lifts the restrictions of g",
                            );
                        }
                    }
                }
            }
        }
        Ok(())
    })();
    let locally_faithful = (|| {
        for a in g.objects() {
            let out: Vec<ArrIx> = g.harrows().filter(|&x| g.dom(x) == a).collect();
            for [&x, &y] in out.iter().array_combinations() {
                let bounded = g.objects().any(|b| g.obj_leq(g.cod(x), b) && g.obj_leq(g.cod(y), b));
                if bounded && f.arr(x) == f.arr(y) {
                    let members = g.below(a).iter().copied().filter(|&a1| g.res(x, a1) == g.res(y, a1)).collect();
                    if !tp.is_cover(&VerticalSieve { root: a, members }) {
                        return fail(vec![g.arrow_id(x).clone(), g.arrow_id(y).clone()], "identified arrows are not locally equal");
                    }
                }
            }
        }
        Ok(())
    })();
    let locally_surjective = (|| {
        let image: BTreeSet<ObjIx> = g.objects().map(|a| f.obj(a)).collect();
        for u in t.objects() {
            let cods = t.harrows().filter(|&h| image.contains(&t.dom(h)) && t.obj_leq(t.cod(h), u)).map(|h| t.cod(h));
            let s = VerticalSieve { root: u, members: down_closure(t, cods) };
            if !tp1.is_cover(&s) {
                return fail(vec![t.object_id(u).clone()], "codomains of arrows from the image do not cover");
            }
        }
        Ok(())
    })();
    let co_continuous = (|| {
        for a in g.objects() {
            for s1 in tp1.covers(f.obj(a)) {
                let members = g.below(a).iter().copied().filter(|&a1| s1.members.contains(&f.obj(a1))).collect();
                if !tp.is_cover(&VerticalSieve { root: a, members }) {
                    return fail(object_ids(t, s1.members.iter().copied()), format!("pullback to {} does not cover", g.object_id(a)));
                }
            }
        }
        Ok(())
    })();
    LocalConditions { locally_full, locally_faithful, locally_surjective, co_continuous }
}

fn require_site_morphism_g(m: &GrothendieckSiteMorphism) -> Result<(), Error> {
    if let Err(e) = is_covering_preserving_g(m) {
        return Err(Error::NotASiteMorphism(format!("not covering preserving: {}", e.reason)));
    }
    let flat = is_covering_flat_g(m, Shapes::Canonical)?;
    if !flat.flat {
        return Err(Error::NotASiteMorphism("not covering flat".into()));
    }
    Ok(())
}

/// `F^*` on a sheaf: precomposition with `F`, checked to be a sheaf again.
pub fn induced_sheaf_functor(m: &GrothendieckSiteMorphism, p: &Presheaf) -> Result<Presheaf, Error> {
    require_site_morphism_g(m)?;
    if !is_sheaf_grothendieck(p, &m.target)?.is_sheaf {
        return Err(Error::NotASheaf("input is not a sheaf on the target site".into()));
    }
    let q = p.restrict_along(&m.functor)?;
    if !is_sheaf_grothendieck(&q, &m.source)?.is_sheaf {
        return Err(Error::NotASheaf("pullback is not a sheaf on the source site".into()));
    }
    Ok(q)
}

/// `M^*` on a sheaf on an Ehresmann site.
pub fn induced_double_sheaf_functor(m: &EhresmannSiteMorphism, p: &DoublePresheaf) -> Result<DoublePresheaf, Error> {
    if let Err(e) = is_covering_preserving_e(m) {
        return Err(Error::NotASiteMorphism(format!("not covering preserving: {}", e.reason)));
    }
    if !is_covering_flat_e(m, Shapes::Canonical)?.flat {
        return Err(Error::NotASiteMorphism("not covering flat".into()));
    }
    if !is_sheaf_ehresmann(p, &m.target)?.is_sheaf {
        return Err(Error::NotASheaf("input is not a sheaf on the target site".into()));
    }
    let q = p.restrict_along(&m.functor)?;
    if !is_sheaf_ehresmann(&q, &m.source)?.is_sheaf {
        return Err(Error::NotASheaf("pullback is not a sheaf on the source site".into()));
    }
    Ok(q)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonVerdict {
    pub conditions: LocalConditions,
    /// conditions 1–3 hold
    pub fully_faithful_claim: bool,
    /// conditions 1–4 hold
    pub equivalence_claim: bool,
    pub universe_bound: usize,
    pub target_sheaves: usize,
    pub source_sheaves: usize,
    pub pullbacks_are_sheaves: bool,
    pub faithful: bool,
    pub full: bool,
    pub essentially_surjective: bool,
    /// every claim is confirmed on the universe
    pub agrees: bool,
}

/// The sheaves with value sets of at most `k` elements, one per iso class.
pub fn sheaf_universe(j: &GrothendieckTopology, k: usize) -> Result<Vec<Presheaf>, Error> {
    let mut out = Vec::new();
    for p in enumerate_presheaves(j.category(), k, CANDIDATE_LIMIT)? {
        if is_sheaf_grothendieck(&p, j)?.is_sheaf {
            out.push(p);
        }
    }
    Ok(out)
}

struct Empirical {
    target_sheaves: usize,
    source_sheaves: usize,
    pullbacks_are_sheaves: bool,
    faithful: bool,
    full: bool,
    essentially_surjective: bool,
}

fn empirical(m: &GrothendieckSiteMorphism, k: usize) -> Result<Empirical, Error> {
    let f = &m.functor;
    let c = m.source.category();
    let targets = sheaf_universe(&m.target, k)?;
    let sources = sheaf_universe(&m.source, k)?;
    let pulled: Vec<Presheaf> = targets.iter().map(|p| p.restrict_along(f)).collect::<Result<_, _>>()?;
    let mut pullbacks_are_sheaves = true;
    for q in &pulled {
        pullbacks_are_sheaves &= is_sheaf_grothendieck(q, &m.source)?.is_sheaf;
    }
    let (mut faithful, mut full) = (true, true);
    for (i, p) in targets.iter().enumerate() {
        for (j, q) in targets.iter().enumerate() {
            let homs = all_morphisms(p, q, CANDIDATE_LIMIT)?;
            let images: BTreeSet<Vec<Vec<usize>>> =
                homs.iter().map(|alpha| c.objects().map(|a| alpha[f.obj(a)].clone()).collect()).collect();
            faithful &= images.len() == homs.len();
            let below: BTreeSet<Vec<Vec<usize>>> = all_morphisms(&pulled[i], &pulled[j], CANDIDATE_LIMIT)?.into_iter().collect();
            full &= images == below;
        }
    }
    let keys: BTreeSet<Vec<usize>> = pulled.iter().map(Presheaf::canonical_key).collect();
    let essentially_surjective = sources.iter().all(|s| keys.contains(&s.canonical_key()));
    Ok(Empirical {
        target_sheaves: targets.len(),
        source_sheaves: sources.len(),
        pullbacks_are_sheaves,
        faithful,
        full,
        essentially_surjective,
    })
}

fn verdict(conditions: LocalConditions, e: Empirical, k: usize) -> ComparisonVerdict {
    let fully_faithful_claim = conditions.first_three();
    let equivalence_claim = conditions.all();
    let agrees = (!fully_faithful_claim || (e.full && e.faithful)) && (!equivalence_claim || e.essentially_surjective);
    ComparisonVerdict {
        conditions,
        fully_faithful_claim,
        equivalence_claim,
        universe_bound: k,
        target_sheaves: e.target_sheaves,
        source_sheaves: e.source_sheaves,
        pullbacks_are_sheaves: e.pullbacks_are_sheaves,
        faithful: e.faithful,
        full: e.full,
        essentially_surjective: e.essentially_surjective,
        agrees,
    }
}

/// Checks the four conditions, then tests `F^*` on the sheaves with value
/// sets of at most `k` elements.
pub fn comparison_verdict_g(m: &GrothendieckSiteMorphism, k: usize) -> Result<ComparisonVerdict, Error> {
    Ok(verdict(check_gs_conditions(m), empirical(m, k)?, k))
}

/// The Ehresmann conditions are checked on `M` directly; `M^*` is tested
/// through `L(M)`, whose induced functor on sheaves is the same.
pub fn comparison_verdict_e(m: &EhresmannSiteMorphism, k: usize) -> Result<ComparisonVerdict, Error> {
    let (lm, _, _) = l_site_morphism(m)?;
    Ok(verdict(check_es_conditions(m), empirical(&lm, k)?, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use std::sync::Arc;

    fn arr() -> Arc<FiniteCategory> {
        Arc::new(fixtures::arrow_category())
    }

    #[test]
    fn identity_is_a_flat_covering_preserving_morphism() {
        let c = arr();
        let b = c.object_ix("B").unwrap();
        let j = GrothendieckTopology::generate(c.clone(), &[(b, vec![c.arrow_ix("a").unwrap()])]).unwrap();
        let id = GrothendieckSiteMorphism::identity(&j);
        assert!(is_covering_preserving_g(&id).is_ok());
        assert!(is_covering_flat_g(&id, Shapes::Canonical).unwrap().flat);
        assert!(check_gs_conditions(&id).all());
    }

    #[test]
    fn empty_diagram_cones_are_all_objects() {
        let c = arr();
        let d = Diagram { shape: canonical_shapes_g()[0].clone(), objects: vec![], arrows: vec![] };
        assert_eq!(enumerate_cones(&c, &d).unwrap().len(), c.object_count());
    }

    #[test]
    fn pair_cones_in_a_poset_are_lower_bounds() {
        let g = fixtures::v_poset();
        let (b, cc) = (g.object_ix("b").unwrap(), g.object_ix("c").unwrap());
        let d = Diagram { shape: canonical_shapes_e()[1].clone(), objects: vec![b, cc], arrows: vec![] };
        let cones = enumerate_hv_cones(&g, &d).unwrap();
        assert_eq!(cones.iter().map(|k| k.vertex).collect::<Vec<_>>(), vec![g.object_ix("a").unwrap()]);
    }

    #[test]
    fn parallel_pair_in_z2() {
        let c = fixtures::z2_category();
        let (e, s) = (c.arrow_ix("e").unwrap(), c.arrow_ix("s").unwrap());
        let shape = canonical_shapes_g()[2].clone();
        let equal = Diagram { shape: shape.clone(), objects: vec![0, 0], arrows: vec![s, s] };
        assert_eq!(enumerate_cones(&c, &equal).unwrap().len(), 2);
        let apart = Diagram { shape, objects: vec![0, 0], arrows: vec![e, s] };
        assert!(enumerate_cones(&c, &apart).unwrap().is_empty());
    }

    #[test]
    fn oracle_shapes_are_bounded() {
        assert!(oracle_shapes(3, true).iter().all(|s| s.size() <= 3));
        assert_eq!(oracle_shapes(0, false).len(), 1);
    }

    #[test]
    fn point_into_the_source_of_an_arrow_is_not_flat() {
        let pt = Arc::new(fixtures::terminal_category());
        let c = arr();
        let f = Functor::new(pt.clone(), c.clone(), vec![c.object_ix("A").unwrap()], vec![c.arrow_ix("1A").unwrap()]).unwrap();
        let m = GrothendieckSiteMorphism::new(f, GrothendieckTopology::trivial(pt), GrothendieckTopology::trivial(c)).unwrap();
        let v = is_covering_flat_g(&m, Shapes::Canonical).unwrap();
        assert!(!v.flat);
        assert_eq!(v.failure.unwrap().shape, "empty");
    }

    #[test]
    fn eta_site_satisfies_everything() {
        let c = arr();
        let b = c.object_ix("B").unwrap();
        let j = GrothendieckTopology::generate(c.clone(), &[(b, vec![c.arrow_ix("a").unwrap()])]).unwrap();
        let m = eta_site_morphism(&j).unwrap();
        assert!(is_covering_preserving_g(&m).is_ok());
        assert!(is_covering_flat_g(&m, Shapes::Canonical).unwrap().flat);
        assert!(check_gs_conditions(&m).all());
    }

    #[test]
    fn finer_topology_breaks_co_continuity_only() {
        let c = arr();
        let m = GrothendieckSiteMorphism::new(
            Functor::identity(&c),
            GrothendieckTopology::trivial(c.clone()),
            GrothendieckTopology::maximal(c.clone()).unwrap(),
        )
        .unwrap();
        assert_eq!(check_gs_conditions(&m).as_array(), [true, true, true, false]);
        let v = comparison_verdict_g(&m, 2).unwrap();
        assert!(v.full && v.faithful && !v.essentially_surjective);
    }
}
