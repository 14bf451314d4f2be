//! The functors `L` and `G` between ordered groupoids and left-cancellative
//! categories, the composites `LG` and `GL`, the units `η` and `κ`, and
//! instance-level checks of the 2-adjunction between them.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::error::Error;
use crate::fincat::{
    check_weak_equivalence, find_natural_isomorphism, validate_category, ArrIx, FiniteCategory, Functor,
    NaturalTransformation, ObjIx, RawCategory, SubobjectClass, WeakEquivalenceVerdict,
};
use crate::id::Id;
use crate::ogpd::{
    check_double_weak_equivalence, find_horizontal_transformation, validate_ordered_groupoid, DoubleFunctor,
    DoubleWeakEquivalenceVerdict, HorizontalTransformation, LambdaTransformation, ObjectLift, OrderedGroupoid, PairLift,
    RawOrderedGroupoid, VerticalLift,
};
use crate::util;

/// An arrow of `L(𝒢)`: a horizontal arrow `h : A → B'` followed by `B' ≤ B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LArrow {
    pub h: ArrIx,
    pub v_cod: ObjIx,
    pub v_root: ObjIx,
}

/// `L(𝒢)` together with the decoding of its arrows.
#[derive(Clone, Debug)]
pub struct LCategory {
    pub base: Arc<OrderedGroupoid>,
    pub category: Arc<FiniteCategory>,
    arrows: Vec<LArrow>,
    index: HashMap<(ArrIx, ObjIx), ArrIx>,
}

fn l_arrow_id(g: &OrderedGroupoid, h: ArrIx, root: ObjIx) -> Id {
    Id::new(format!("<{}|{}>", g.arrow_id(h), g.object_id(root)))
}

pub fn construct_l(g: &Arc<OrderedGroupoid>) -> Result<LCategory, Error> {
    let mut entries = Vec::new();
    for h in g.harrows() {
        for root in g.objects().filter(|&b| g.obj_leq(g.cod(h), b)) {
            entries.push(LArrow { h, v_cod: g.cod(h), v_root: root });
        }
    }
    let id_of = |a: &LArrow| l_arrow_id(g, a.h, a.v_root);
    let mut raw = RawCategory {
        name: g.name().map(|n| format!("L({n})")),
        objects: g.objects().map(|o| g.object_id(o).clone()).collect(),
        arrows: entries
            .iter()
            .map(|a| (id_of(a), g.object_id(g.dom(a.h)).clone(), g.object_id(a.v_root).clone()))
            .collect(),
        identities: g.objects().map(|o| (g.object_id(o).clone(), l_arrow_id(g, g.identity(o), o))).collect(),
        compose: Vec::new(),
    };
    for f in &entries {
        for k in entries.iter().filter(|k| g.dom(k.h) == f.v_root) {
            let r = g.res(k.h, f.v_cod);
            let composite = LArrow { h: g.comp(r, f.h), v_cod: g.cod(r), v_root: k.v_root };
            raw.compose.push((id_of(k), id_of(f), id_of(&composite)));
        }
    }
    let category = Arc::new(validate_category(&raw)?);
    let mut arrows = vec![entries[0]; entries.len()];
    let mut index = HashMap::new();
    for e in &entries {
        let ix = category.arrow_ix(id_of(e).as_str()).expect("constructed arrow");
        arrows[ix] = *e;
        index.insert((e.h, e.v_root), ix);
    }
    Ok(LCategory { base: g.clone(), category, arrows, index })
}

impl LCategory {
    pub fn decode(&self, a: ArrIx) -> LArrow {
        self.arrows[a]
    }

    /// The arrow `(h, cod h ≤ root)`.
    pub fn arrow(&self, h: ArrIx, root: ObjIx) -> ArrIx {
        self.index[&(h, root)]
    }

    /// `(h, cod h ≤ cod h)`.
    pub fn horizontal(&self, h: ArrIx) -> ArrIx {
        self.arrow(h, self.base.cod(h))
    }

    /// `(1_{A'}, A' ≤ A)`.
    pub fn vertical(&self, lower: ObjIx, upper: ObjIx) -> ArrIx {
        self.arrow(self.base.identity(lower), upper)
    }
}

/// A span class `[m, n]` of `G(𝒞)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSpanClass {
    pub representative: (ArrIx, ArrIx),
    pub members: Vec<(ArrIx, ArrIx)>,
}

/// `G(𝒞)` together with the decoding of its objects and arrows.
#[derive(Clone, Debug)]
pub struct GGroupoid {
    pub base: Arc<FiniteCategory>,
    pub groupoid: Arc<OrderedGroupoid>,
    subobjects: Vec<SubobjectClass>,
    spans: Vec<GSpanClass>,
    class_of: Vec<ObjIx>,
    span_of: HashMap<(ArrIx, ArrIx), ArrIx>,
}

pub fn construct_g(c: &Arc<FiniteCategory>) -> Result<GGroupoid, Error> {
    c.require_left_cancellative()?;
    let mut classes: Vec<SubobjectClass> = Vec::new();
    for b in c.objects() {
        classes.extend(c.subobjects_of(b)?);
    }
    let class_id = |k: &SubobjectClass| Id::new(format!("[{}]", c.arrow_id(k.representative)));
    let mut class_of_tmp = vec![0usize; c.arrow_count()];
    for (i, k) in classes.iter().enumerate() {
        for &m in &k.members {
            class_of_tmp[m] = i;
        }
    }

    let mut spans: Vec<(ArrIx, ArrIx)> = Vec::new();
    for x in c.objects() {
        let out: Vec<ArrIx> = c.arrows().filter(|&a| c.dom(a) == x).collect();
        for &m in &out {
            for &n in &out {
                spans.push((m, n));
            }
        }
    }
    spans.sort_unstable();
    let pos: HashMap<(ArrIx, ArrIx), usize> = spans.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut uf = UnionFind::<usize>::new(spans.len());
    for (i, &(m, n)) in spans.iter().enumerate() {
        let x = c.dom(m);
        for y in c.objects() {
            for k in c.isomorphisms_between(y, x) {
                uf.union(i, pos[&(c.comp(m, k), c.comp(n, k))]);
            }
        }
    }
    let span_classes: Vec<GSpanClass> = util::groups(uf)
        .into_iter()
        .map(|g| {
            let members: Vec<(ArrIx, ArrIx)> = g.into_iter().map(|i| spans[i]).collect();
            GSpanClass { representative: members[0], members }
        })
        .collect();
    let mut span_of_tmp: HashMap<(ArrIx, ArrIx), usize> = HashMap::new();
    for (i, k) in span_classes.iter().enumerate() {
        for &s in &k.members {
            span_of_tmp.insert(s, i);
        }
    }
    let span_id = |k: &GSpanClass| Id::new(format!("[{},{}]", c.arrow_id(k.representative.0), c.arrow_id(k.representative.1)));

    let mut raw = RawOrderedGroupoid {
        name: c.name().map(|n| format!("G({n})")),
        objects: classes.iter().map(class_id).collect(),
        ..Default::default()
    };
    for k in &classes {
        let m = k.representative;
        raw.identities.insert(class_id(k), span_id(&span_classes[span_of_tmp[&(m, m)]]));
    }
    for k in &span_classes {
        let (m, n) = k.representative;
        raw.harrows.push((span_id(k), class_id(&classes[class_of_tmp[m]]), class_id(&classes[class_of_tmp[n]])));
        raw.inverses.insert(span_id(k), span_id(&span_classes[span_of_tmp[&(n, m)]]));
    }
    // [m', n] ∘ [k, m] = [k, n h] where m' h = m
    for first in &span_classes {
        let (k, m) = first.representative;
        for second in &span_classes {
            let (m2, n) = second.representative;
            if class_of_tmp[m] != class_of_tmp[m2] {
                continue;
            }
            let h = c
                .isomorphisms_between(c.dom(m), c.dom(m2))
                .into_iter()
                .find(|&h| c.compose(m2, h) == Some(m))
                .expect("equivalent subobjects");
            let composite = &span_classes[span_of_tmp[&(k, c.comp(n, h))]];
            raw.compose.push((span_id(second), span_id(first), span_id(composite)));
        }
    }
    for (i, a) in classes.iter().enumerate() {
        for (j, b) in classes.iter().enumerate() {
            if i != j && c.factor_through(b.representative, a.representative).is_some() {
                raw.obj_order.push((class_id(a), class_id(b)));
            }
        }
    }
    for (i, s) in span_classes.iter().enumerate() {
        for (j, t) in span_classes.iter().enumerate() {
            let ((m, n), (m2, n2)) = (s.representative, t.representative);
            if i != j && c.hom(c.dom(m), c.dom(m2)).iter().any(|&h| c.compose(m2, h) == Some(m) && c.compose(n2, h) == Some(n)) {
                raw.arr_order.push((span_id(s), span_id(t)));
            }
        }
    }
    let groupoid = Arc::new(validate_ordered_groupoid(&raw)?);

    let mut subobjects = vec![None; classes.len()];
    let mut obj_perm = vec![0; classes.len()];
    for (i, k) in classes.iter().enumerate() {
        let ix = groupoid.object_ix(class_id(k).as_str()).expect("constructed object");
        obj_perm[i] = ix;
        subobjects[ix] = Some(k.clone());
    }
    let mut ordered_spans = vec![None; span_classes.len()];
    let mut span_perm = vec![0; span_classes.len()];
    for (i, k) in span_classes.iter().enumerate() {
        let ix = groupoid.arrow_ix(span_id(k).as_str()).expect("constructed arrow");
        span_perm[i] = ix;
        ordered_spans[ix] = Some(k.clone());
    }
    Ok(GGroupoid {
        base: c.clone(),
        groupoid,
        subobjects: subobjects.into_iter().map(Option::unwrap).collect(),
        spans: ordered_spans.into_iter().map(Option::unwrap).collect(),
        class_of: class_of_tmp.into_iter().map(|i| obj_perm[i]).collect(),
        span_of: span_of_tmp.into_iter().map(|(s, i)| (s, span_perm[i])).collect(),
    })
}

impl GGroupoid {
    /// `[m]`.
    pub fn object_of(&self, m: ArrIx) -> ObjIx {
        self.class_of[m]
    }

    /// `[m, n]`.
    pub fn span(&self, m: ArrIx, n: ArrIx) -> ArrIx {
        self.span_of[&(m, n)]
    }

    pub fn subobject(&self, o: ObjIx) -> &SubobjectClass {
        &self.subobjects[o]
    }

    /// `m̄`, the canonical representative of `[m]`.
    pub fn representative(&self, o: ObjIx) -> ArrIx {
        self.subobjects[o].representative
    }

    pub fn span_class(&self, h: ArrIx) -> &GSpanClass {
        &self.spans[h]
    }

    /// `[1_A]`.
    pub fn unit_object(&self, a: ObjIx) -> ObjIx {
        self.class_of[self.base.identity(a)]
    }

    /// The member of span class `h` whose first leg is exactly `m̄`.
    pub fn span_from_representative(&self, h: ArrIx) -> (ArrIx, ArrIx) {
        let m = self.representative(self.groupoid.dom(h));
        *self.spans[h].members.iter().find(|s| s.0 == m).expect("every class contains a span through m̄")
    }
}

/// `GL(𝒢)` in canonical form: objects `(B', B)` with `B' ≤ B`, horizontal
/// arrows `(h, B, C)` with `h : B' → C'`.
#[derive(Clone, Debug)]
pub struct GLGroupoid {
    pub base: Arc<OrderedGroupoid>,
    pub groupoid: Arc<OrderedGroupoid>,
    objects: Vec<(ObjIx, ObjIx)>,
    harrows: Vec<(ArrIx, ObjIx, ObjIx)>,
    obj_index: HashMap<(ObjIx, ObjIx), ObjIx>,
    arr_index: HashMap<(ArrIx, ObjIx, ObjIx), ArrIx>,
}

pub fn construct_gl(g: &Arc<OrderedGroupoid>) -> Result<GLGroupoid, Error> {
    let oid = |(b1, b): (ObjIx, ObjIx)| Id::new(format!("({},{})", g.object_id(b1), g.object_id(b)));
    let aid = |(h, b, c): (ArrIx, ObjIx, ObjIx)| Id::new(format!("({},{},{})", g.arrow_id(h), g.object_id(b), g.object_id(c)));
    let objs: Vec<(ObjIx, ObjIx)> = g.objects().flat_map(|b| g.below(b).iter().map(move |&b1| (b1, b))).collect();
    let mut arrs = Vec::new();
    for h in g.harrows() {
        for &(_, b) in objs.iter().filter(|o| o.0 == g.dom(h)) {
            for &(_, c) in objs.iter().filter(|o| o.0 == g.cod(h)) {
                arrs.push((h, b, c));
            }
        }
    }
    let mut raw = RawOrderedGroupoid {
        name: g.name().map(|n| format!("GL({n})")),
        objects: objs.iter().map(|&o| oid(o)).collect(),
        ..Default::default()
    };
    for &o in &objs {
        raw.identities.insert(oid(o), aid((g.identity(o.0), o.1, o.1)));
    }
    for &(h, b, c) in &arrs {
        raw.harrows.push((aid((h, b, c)), oid((g.dom(h), b)), oid((g.cod(h), c))));
        raw.inverses.insert(aid((h, b, c)), aid((g.inverse(h), c, b)));
        for &(k, c2, d) in arrs.iter().filter(|a| a.1 == c && g.dom(a.0) == g.cod(h)) {
            debug_assert_eq!(c2, c);
            raw.compose.push((aid((k, c, d)), aid((h, b, c)), aid((g.comp(k, h), b, d))));
        }
    }
    for &(b1, b) in &objs {
        for &(d1, d) in &objs {
            if b == d && b1 != d1 && g.obj_leq(b1, d1) {
                raw.obj_order.push((oid((b1, b)), oid((d1, d))));
            }
        }
    }
    for &(h, b, c) in &arrs {
        for &(k, d, e) in &arrs {
            if b == d && c == e && h != k && g.arr_leq(h, k) {
                raw.arr_order.push((aid((h, b, c)), aid((k, d, e))));
            }
        }
    }
    let groupoid = Arc::new(validate_ordered_groupoid(&raw)?);
    let mut objects = vec![(0, 0); objs.len()];
    let mut obj_index = HashMap::new();
    for &o in &objs {
        let ix = groupoid.object_ix(oid(o).as_str()).expect("constructed object");
        objects[ix] = o;
        obj_index.insert(o, ix);
    }
    let mut harrows = vec![(0, 0, 0); arrs.len()];
    let mut arr_index = HashMap::new();
    for &a in &arrs {
        let ix = groupoid.arrow_ix(aid(a).as_str()).expect("constructed arrow");
        harrows[ix] = a;
        arr_index.insert(a, ix);
    }
    Ok(GLGroupoid { base: g.clone(), groupoid, objects, harrows, obj_index, arr_index })
}

impl GLGroupoid {
    /// `(B', B)` as an object index.
    pub fn object(&self, lower: ObjIx, upper: ObjIx) -> ObjIx {
        self.obj_index[&(lower, upper)]
    }

    /// `(h, B, C)` as a harrow index.
    pub fn harrow(&self, h: ArrIx, b: ObjIx, c: ObjIx) -> ArrIx {
        self.arr_index[&(h, b, c)]
    }

    pub fn decode_object(&self, o: ObjIx) -> (ObjIx, ObjIx) {
        self.objects[o]
    }

    pub fn decode_harrow(&self, a: ArrIx) -> (ArrIx, ObjIx, ObjIx) {
        self.harrows[a]
    }
}

/// `η_𝒞 : 𝒞 → LG(𝒞)`, with the intermediate constructions.
#[derive(Clone, Debug)]
pub struct Eta {
    pub g: GGroupoid,
    pub lg: LCategory,
    pub functor: Functor,
}

pub fn eta(c: &Arc<FiniteCategory>) -> Result<Eta, Error> {
    let g = construct_g(c)?;
    let lg = construct_l(&g.groupoid)?;
    let obj_map = c.objects().map(|a| g.unit_object(a)).collect();
    let arr_map = c
        .arrows()
        .map(|h| lg.arrow(g.span(c.identity(c.dom(h)), h), g.unit_object(c.cod(h))))
        .collect();
    let functor = Functor::new(c.clone(), lg.category.clone(), obj_map, arr_map)?;
    Ok(Eta { g, lg, functor })
}

/// `κ_𝒢 : GL(𝒢) → 𝒢`.
#[derive(Clone, Debug)]
pub struct Kappa {
    pub gl: GLGroupoid,
    pub functor: DoubleFunctor,
}

pub fn kappa(g: &Arc<OrderedGroupoid>) -> Result<Kappa, Error> {
    let gl = construct_gl(g)?;
    let obj_map = gl.groupoid.objects().map(|o| gl.decode_object(o).0).collect();
    let arr_map = gl.groupoid.harrows().map(|a| gl.decode_harrow(a).0).collect();
    let functor = DoubleFunctor::new(gl.groupoid.clone(), g.clone(), obj_map, arr_map)?;
    Ok(Kappa { gl, functor })
}

/// `L(F)(h, ≤) = (F h, ≤)`.
pub fn l_on_morphism(f: &DoubleFunctor, ls: &LCategory, lt: &LCategory) -> Result<Functor, Error> {
    if *f.source() != ls.base || *f.target() != lt.base {
        return Err(Error::NotComposable("L(F) needs L of the source and target of F".into()));
    }
    let arr_map = ls
        .category
        .arrows()
        .map(|a| {
            let x = ls.decode(a);
            lt.arrow(f.arr(x.h), f.obj(x.v_root))
        })
        .collect();
    Functor::new(ls.category.clone(), lt.category.clone(), f.obj_map().to_vec(), arr_map)
}

/// `G(K)[m, n] = [K m, K n]`.
pub fn g_on_morphism(k: &Functor, gs: &GGroupoid, gt: &GGroupoid) -> Result<DoubleFunctor, Error> {
    if *k.source() != gs.base || *k.target() != gt.base {
        return Err(Error::NotComposable("G(K) needs G of the source and target of K".into()));
    }
    let obj_map = gs.groupoid.objects().map(|o| gt.object_of(k.arr(gs.representative(o)))).collect();
    let arr_map = gs
        .groupoid
        .harrows()
        .map(|a| {
            let (m, n) = gs.span_class(a).representative;
            gt.span(k.arr(m), k.arr(n))
        })
        .collect();
    DoubleFunctor::new(gs.groupoid.clone(), gt.groupoid.clone(), obj_map, arr_map)
}

/// `GL(F)` in canonical form: `(B', B) ↦ (F B', F B)`.
pub fn gl_on_morphism(f: &DoubleFunctor, gls: &GLGroupoid, glt: &GLGroupoid) -> Result<DoubleFunctor, Error> {
    let obj_map = gls
        .groupoid
        .objects()
        .map(|o| {
            let (b1, b) = gls.decode_object(o);
            glt.object(f.obj(b1), f.obj(b))
        })
        .collect();
    let arr_map = gls
        .groupoid
        .harrows()
        .map(|a| {
            let (h, b, c) = gls.decode_harrow(a);
            glt.harrow(f.arr(h), f.obj(b), f.obj(c))
        })
        .collect();
    DoubleFunctor::new(gls.groupoid.clone(), glt.groupoid.clone(), obj_map, arr_map)
}

/// The isomorphism from `G` applied to `L(𝒢)` onto the canonical `GL(𝒢)`:
/// `[(h, B' ≤ B)] ↦ (B', B)` and `[(h, B), (k, C)] ↦ (k h⁻¹, B, C)`.
pub fn gl_comparison(l: &LCategory, g_of_l: &GGroupoid, gl: &GLGroupoid) -> Result<DoubleFunctor, Error> {
    let base = &l.base;
    let obj_map = g_of_l
        .groupoid
        .objects()
        .map(|o| {
            let m = l.decode(g_of_l.representative(o));
            gl.object(m.v_cod, m.v_root)
        })
        .collect();
    let arr_map = g_of_l
        .groupoid
        .harrows()
        .map(|a| {
            let (m, n) = g_of_l.span_class(a).representative;
            let (m, n) = (l.decode(m), l.decode(n));
            gl.harrow(base.comp(n.h, base.inverse(m.h)), m.v_root, n.v_root)
        })
        .collect();
    DoubleFunctor::new(g_of_l.groupoid.clone(), gl.groupoid.clone(), obj_map, arr_map)
}

/// `L(α, ≤)`: components `(α_X, G' X ≤ G X)`.
pub fn l_on_2cell(t: &LambdaTransformation, ls: &LCategory, lt: &LCategory) -> Result<NaturalTransformation, Error> {
    let lf = l_on_morphism(t.source(), ls, lt)?;
    let lg = l_on_morphism(t.target(), ls, lt)?;
    let components = ls.base.objects().map(|x| lt.arrow(t.alpha().component(x), t.target().obj(x))).collect();
    NaturalTransformation::new(lf, lg, components)
}

/// `G(θ)` for `θ : K ⇒ K'`: components `[K m̄, K' m̄ ∘ θ_A]` into the middle
/// functor `T[m] = [K' m̄ ∘ θ_A] ≤ [K' m̄]`.
pub fn g_on_2cell(theta: &NaturalTransformation, gs: &GGroupoid, gt: &GGroupoid) -> Result<LambdaTransformation, Error> {
    let k = theta.source();
    let k2 = theta.target();
    let gk = g_on_morphism(k, gs, gt)?;
    let gk2 = g_on_morphism(k2, gs, gt)?;
    let c = &gs.base;
    let d = &gt.base;
    let tg = &gt.groupoid;
    let mut components = Vec::new();
    let mut mid_objs = Vec::new();
    for o in gs.groupoid.objects() {
        let m = gs.representative(o);
        let leg = d.comp(k2.arr(m), theta.component(c.dom(m)));
        components.push(gt.span(k.arr(m), leg));
        mid_objs.push(gt.object_of(leg));
    }
    let mid_arrs = gs.groupoid.harrows().map(|a| tg.res(gk2.arr(a), mid_objs[gs.groupoid.dom(a)])).collect();
    let mid = DoubleFunctor::new(gs.groupoid.clone(), gt.groupoid.clone(), mid_objs, mid_arrs)?;
    let alpha = HorizontalTransformation::new(gk, mid, components)?;
    LambdaTransformation::new(alpha, gk2)
}

/// Pseudo-inverse of `η`: `[m] ↦ dom(m̄)`, and an arrow of `LG(𝒞)` goes to
/// the unique `h̄` with `n̄ h̄ = p`, where `(m̄, p)` is its span through `m̄`.
pub fn pseudo_inverse_eta(e: &Eta) -> Result<Functor, Error> {
    let c = &e.g.base;
    let obj_map: Vec<ObjIx> = e.g.groupoid.objects().map(|o| c.dom(e.g.representative(o))).collect();
    let mut arr_map = Vec::new();
    for a in e.lg.category.arrows() {
        let x = e.lg.decode(a);
        let (_, p) = e.g.span_from_representative(x.h);
        let n = e.g.representative(x.v_root);
        arr_map.push(c.factor_through(n, p).ok_or_else(|| Error::UnknownId(e.lg.category.arrow_id(a).clone()))?);
    }
    Functor::new(e.lg.category.clone(), c.clone(), obj_map, arr_map)
}

/// Pseudo-inverse of `κ`: `B ↦ (B, hat B)`.
pub fn pseudo_inverse_kappa(k: &Kappa) -> Result<DoubleFunctor, Error> {
    let g = &k.gl.base;
    let hat = g.require_max_objects()?;
    let obj_map = g.objects().map(|b| k.gl.object(b, hat.hat(b))).collect();
    let arr_map = g.harrows().map(|h| k.gl.harrow(h, hat.hat(g.dom(h)), hat.hat(g.cod(h)))).collect();
    DoubleFunctor::new(g.clone(), k.gl.groupoid.clone(), obj_map, arr_map)
}

#[derive(Clone, Debug)]
pub struct EtaPseudoInverse {
    pub inverse: Functor,
    /// `η⁻¹ ∘ η ≅ 1_𝒞`
    pub unit_iso: Option<NaturalTransformation>,
    /// `η ∘ η⁻¹ ≅ 1_{LG(𝒞)}`
    pub counit_iso: Option<NaturalTransformation>,
}

impl EtaPseudoInverse {
    pub fn holds(&self) -> bool {
        self.unit_iso.is_some() && self.counit_iso.is_some()
    }
}

pub fn check_eta_pseudo_inverse(e: &Eta) -> Result<EtaPseudoInverse, Error> {
    let inverse = pseudo_inverse_eta(e)?;
    let there_back = e.functor.then(&inverse)?;
    let back_there = inverse.then(&e.functor)?;
    Ok(EtaPseudoInverse {
        unit_iso: find_natural_isomorphism(&there_back, &Functor::identity(e.functor.source())),
        counit_iso: find_natural_isomorphism(&back_there, &Functor::identity(e.functor.target())),
        inverse,
    })
}

#[derive(Clone, Debug)]
pub struct KappaPseudoInverse {
    pub inverse: DoubleFunctor,
    /// `κ ∘ κ⁻¹ ≅ 1_𝒢`
    pub unit_iso: Option<HorizontalTransformation>,
    /// `κ⁻¹ ∘ κ ≅ 1_{GL(𝒢)}`
    pub counit_iso: Option<HorizontalTransformation>,
}

impl KappaPseudoInverse {
    pub fn holds(&self) -> bool {
        self.unit_iso.is_some() && self.counit_iso.is_some()
    }
}

pub fn check_kappa_pseudo_inverse(k: &Kappa) -> Result<KappaPseudoInverse, Error> {
    let inverse = pseudo_inverse_kappa(k)?;
    let there_back = inverse.then(&k.functor)?;
    let back_there = k.functor.then(&inverse)?;
    Ok(KappaPseudoInverse {
        unit_iso: find_horizontal_transformation(&there_back, &DoubleFunctor::identity(k.functor.target())),
        counit_iso: find_horizontal_transformation(&back_there, &DoubleFunctor::identity(k.functor.source())),
        inverse,
    })
}

/// Outcome of the two triangle identities, each compared on the nose.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangleVerdict {
    pub holds: bool,
    pub objects_checked: usize,
    pub arrows_checked: usize,
    /// Ids where the composite differs from the identity.
    pub mismatches: Vec<Id>,
}

fn compare_with_identity_functor(f: &Functor) -> TriangleVerdict {
    let c = f.source();
    let mut mismatches = Vec::new();
    for o in c.objects().filter(|&o| f.target().object_id(f.obj(o)) != c.object_id(o)) {
        mismatches.push(c.object_id(o).clone());
    }
    for a in c.arrows().filter(|&a| f.target().arrow_id(f.arr(a)) != c.arrow_id(a)) {
        mismatches.push(c.arrow_id(a).clone());
    }
    TriangleVerdict {
        holds: mismatches.is_empty() && **f.source() == **f.target(),
        objects_checked: c.object_count(),
        arrows_checked: c.arrow_count(),
        mismatches,
    }
}

/// `κ_{G(𝒞)} ∘ G(η_𝒞) = 1_{G(𝒞)}`.
pub fn check_triangle_for_category(c: &Arc<FiniteCategory>) -> Result<TriangleVerdict, Error> {
    let e = eta(c)?;
    let g_of_lg = construct_g(&e.lg.category)?;
    let g_eta = g_on_morphism(&e.functor, &e.g, &g_of_lg)?;
    let k = kappa(&e.g.groupoid)?;
    let cmp = gl_comparison(&e.lg, &g_of_lg, &k.gl)?;
    let composite = g_eta.then(&cmp)?.then(&k.functor)?;
    Ok(compare_with_identity_functor(&composite.underlying()))
}

/// `L(κ_𝒢) ∘ η_{L(𝒢)} = 1_{L(𝒢)}`.
pub fn check_triangle_for_groupoid(g: &Arc<OrderedGroupoid>) -> Result<TriangleVerdict, Error> {
    let l = construct_l(g)?;
    let e = eta(&l.category)?;
    let k = kappa(g)?;
    let cmp = gl_comparison(&l, &e.g, &k.gl)?;
    let l_gl = construct_l(&k.gl.groupoid)?;
    let l_cmp = l_on_morphism(&cmp, &e.lg, &l_gl)?;
    let l_kappa = l_on_morphism(&k.functor, &l_gl, &l)?;
    let composite = e.functor.then(&l_cmp)?.then(&l_kappa)?;
    Ok(compare_with_identity_functor(&composite))
}

pub fn check_eta_weak_equivalence(c: &Arc<FiniteCategory>) -> Result<WeakEquivalenceVerdict, Error> {
    Ok(check_weak_equivalence(&eta(c)?.functor))
}

/// The explicit lifts used to show `κ` is essentially surjective:
/// `(B, B)` over `B`; `(B, C) ≤ (C, C)` over `B ≤ C`;
/// `(B, D) ≤ (C, D) ≤ (D, D)` over `B ≤ C ≤ D`. All horizontal parts are
/// identities.
#[derive(Clone, Debug, Default)]
pub struct KappaLifts {
    pub objects: BTreeMap<ObjIx, ObjectLift>,
    pub vertical: BTreeMap<(ObjIx, ObjIx), VerticalLift>,
    pub pairs: BTreeMap<(ObjIx, ObjIx, ObjIx), PairLift>,
}

pub fn kappa_lifts(k: &Kappa) -> KappaLifts {
    let g = &k.gl.base;
    let gl = &k.gl;
    let mut out = KappaLifts::default();
    for d in g.objects() {
        out.objects.insert(d, ObjectLift { x: gl.object(d, d), h: g.identity(d) });
        for &c in g.below(d) {
            out.vertical.insert((c, d), VerticalLift { x: [gl.object(c, d), gl.object(d, d)], h: [g.identity(c), g.identity(d)] });
            for &b in g.below(c) {
                out.pairs.insert(
                    (b, c, d),
                    PairLift { x: [gl.object(b, d), gl.object(c, d), gl.object(d, d)], h: [g.identity(b), g.identity(c), g.identity(d)] },
                );
            }
        }
    }
    out
}

/// Checks that every explicit lift of [`kappa_lifts`] is a valid preimage.
pub fn verify_kappa_lifts(k: &Kappa, lifts: &KappaLifts) -> bool {
    let f = &k.functor;
    lifts.objects.iter().all(|(&y, l)| f.is_object_lift(y, l))
        && lifts.vertical.iter().all(|(&(a, b), l)| f.is_vertical_lift([a, b], l))
        && lifts.pairs.iter().all(|(&(a, b, c), l)| f.is_pair_lift([a, b, c], l))
}

pub fn check_kappa_weak_equivalence(g: &Arc<OrderedGroupoid>) -> Result<DoubleWeakEquivalenceVerdict, Error> {
    Ok(check_double_weak_equivalence(&kappa(g)?.functor))
}
