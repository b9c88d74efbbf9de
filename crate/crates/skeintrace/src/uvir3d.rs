//! The stated 3d quantum UV-IR map with angle weights, the gl1 modules of
//! face-suspension double covers, the face-suspension evaluation map,
//! cone-point relation oracles, gl1 gluing, the 3d compatibility checker,
//! and the projection recovering the trace from the UV-IR image.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::complex::{AngleStructure, Mfld3, PachnerMove};
use crate::error::{TorusError, TraceError};
use crate::qtorus::{MonomialRelation, QuantumTorus, ReductionSystem, TorusElem, TorusHom};
use crate::report::{CheckRecord, Report};
use crate::scalar::{AngleExpr, Rat, Scalar};
use crate::trace2d::StateRef;
use crate::trace3d::{
    resolve_state, sf_biangle_weight, sf_corner_weight, BiTok, CornerTok, Presentation3D, SfWord,
    SqgmContext,
};
use crate::uvir2d::{Corner, Orient};

// ---------------------------------------------------------------------------
// the gl1 module of a face suspension (base, not the double cover)
// ---------------------------------------------------------------------------

/// The ambient torus of gl1 webs in one face suspension: directed corner
/// arcs in the two triangle blocks and one commuting generator per side
/// edge (the bigon arc from the top half to the bottom half).
pub fn gl1_sf_torus(name: &str) -> Arc<QuantumTorus> {
    let mut gens: Vec<String> = Vec::new();
    for b in 0..2 {
        for c in ["al", "be", "ga"] {
            gens.push(format!("{}{}", c, b + 1));
        }
    }
    for p in ["xa", "xb", "xc"] {
        gens.push(p.to_string());
    }
    let n = 9;
    let mut m2 = vec![vec![0i64; n]; n];
    let mut z = vec![vec![0i64; n]; n];
    for p in 0..3 {
        let q = (p + 1) % 3;
        // top block: al be = (-A) be al cyclically
        m2[p][q] = 2;
        m2[q][p] = -2;
        z[p][q] = 1;
        z[q][p] = -1;
        // bottom block: reversed orientation
        m2[3 + p][3 + q] = -2;
        m2[3 + q][3 + p] = 2;
        z[3 + p][3 + q] = -1;
        z[3 + q][3 + p] = 1;
    }
    QuantumTorus::antisymmetric(name, gens, m2, z)
}

/// The defining relations of the base gl1 module: the two central triangle
/// webs and the three face identifications, as vectors in the rank-9
/// lattice (all with scalar one).
pub fn gl1_sf_relations() -> Vec<MonomialRelation> {
    let mut rels = Vec::new();
    for b in 0..2 {
        let mut v = vec![0i64; 9];
        v[3 * b] = 1;
        v[3 * b + 1] = 1;
        v[3 * b + 2] = 1;
        rels.push(MonomialRelation::left(v, Scalar::one()));
    }
    // face relations: for adjacent side edges (x, y) = (a,b), (b,c), (c,a):
    // (corner arc x->y in the top block) (corner arc y->x in the bottom
    // block) = (bigon x) (bigon y reversed)
    for p in 0..3 {
        let corner = third_corner(p, (p + 1) % 3); // corner connecting p, p+1
        let mut v = vec![0i64; 9];
        v[corner] += 1; // top arc p -> p+1
        v[3 + corner] -= 1; // bottom arc p+1 -> p is the inverse direction
        v[6 + p] -= 1;
        v[6 + (p + 1) % 3] += 1;
        rels.push(MonomialRelation::left(v, Scalar::one()));
    }
    rels
}

/// Reduction system of the base gl1 module.
pub fn gl1_sf_reduction(t: &Arc<QuantumTorus>) -> Result<ReductionSystem, TraceError> {
    let prio: Vec<usize> = (0..9).collect();
    Ok(ReductionSystem::spanning(
        t,
        &gl1_sf_relations(),
        &prio,
        &crate::scalar::default_constants(),
    )?)
}

/// Reduction of the gl1 factor inside the rank-15 evaluation codomain.
pub fn embedded_gl1_reduction(cod: &Arc<QuantumTorus>) -> Result<ReductionSystem, TraceError> {
    let rels: Vec<MonomialRelation> = gl1_sf_relations()
        .into_iter()
        .map(|r| {
            let mut v = vec![0i64; 15];
            v[6..].copy_from_slice(&r.vector);
            MonomialRelation::left(v, r.scalar)
        })
        .collect();
    let prio: Vec<usize> = (6..15).chain(0..6).collect();
    Ok(ReductionSystem::spanning(
        cod,
        &rels,
        &prio,
        &crate::scalar::default_constants(),
    )?)
}

/// Index of the corner arc connecting edge positions i and j (directed
/// from i to j when (i,j) is cyclically ordered).
fn third_corner(i: usize, j: usize) -> usize {
    // corner alpha connects (1,2), beta (2,0), gamma (0,1)
    match (i, j) {
        (1, 2) | (2, 1) => 0,
        (2, 0) | (0, 2) => 1,
        (0, 1) | (1, 0) => 2,
        _ => panic!("not adjacent"),
    }
}

/// The directed corner arc from edge position i to edge position j in the
/// given block, as a lattice vector of the gl1 Sf torus.
pub fn gl1_corner_arc(block: usize, i: usize, j: usize) -> Vec<i64> {
    let c = third_corner(i, j);
    let mut v = vec![0i64; 9];
    // the basis arc runs in the cyclic direction: alpha = 1->2, etc.
    let fwd = (i + 1) % 3 == j;
    v[3 * block + c] = if fwd { 1 } else { -1 };
    v
}

// ---------------------------------------------------------------------------
// the double cover of a face suspension
// ---------------------------------------------------------------------------

/// Star decoration of a lifted arc: whether the star sits on the first or
/// the second endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StarPos {
    SecondStarred,
    FirstStarred,
}

/// The double cover of one face suspension: its ambient torus (rank 18:
/// two lifted-triangle blocks and three two-lift bigon blocks), the
/// evaluation homomorphism into `Sf (x) gl1(Sf)`, and the angle weights.
pub struct SfDoubleCover {
    pub susp: usize,
    pub torus: Arc<QuantumTorus>,
    pub codomain: Arc<QuantumTorus>,
    pub ev: TorusHom,
    angles: Vec<AngleExpr>, // per bare cone index 0..6 (3b+pos)
}

impl SfDoubleCover {
    pub fn new(
        m: &Mfld3,
        angles: &AngleStructure,
        susp: usize,
    ) -> Result<SfDoubleCover, TraceError> {
        let sf = m.sf_torus(susp);
        let gl1 = gl1_sf_torus(&format!("gl1Sf[{}]", m.suspensions[susp].name));
        let codomain = QuantumTorus::tensor(
            &format!("Sf(x)gl1[{}]", m.suspensions[susp].name),
            &[sf, gl1],
            Some(&["t".into(), "w".into()]),
        );
        let s = &m.suspensions[susp];
        let mut cone_angles = Vec::new();
        for slots in [&s.top_slots, &s.bottom_slots] {
            for slot in slots.iter() {
                cone_angles.push(angles.angle(slot.tet, slot.pair()).clone());
            }
        }
        // generator images, in the fixed order: 12 triangle arcs then 6
        // bigon arcs
        let mut images: Vec<(Vec<i64>, Scalar)> = Vec::new();
        let mut gens: Vec<String> = Vec::new();
        for block in 0..2 {
            for corner in Corner::all() {
                let (i, j) = corner.ends();
                for star in [StarPos::SecondStarred, StarPos::FirstStarred] {
                    let mut v = vec![0i64; 15];
                    let sign = match star {
                        StarPos::SecondStarred => 1,
                        StarPos::FirstStarred => -1,
                    };
                    v[3 * block + i] += sign;
                    v[3 * block + j] += sign;
                    // gl1 base arc i -> j
                    let arc = gl1_corner_arc(block, i, j);
                    for (k, a) in arc.iter().enumerate() {
                        v[6 + k] += a;
                    }
                    let th = cone_angles[3 * block + i]
                        .add(&cone_angles[3 * block + j])
                        .scale(Rat::new(-sign, 4));
                    let scalar = Scalar::q_half_pow(sign)
                        .mul(&Scalar::ct_pow(sign))
                        .mul(&Scalar::q_angle_expr(&th).map_err(TorusError::Scalar)?);
                    images.push((v, scalar));
                    gens.push(format!(
                        "h{}{}{}",
                        block + 1,
                        ["al", "be", "ga"][corner.index()],
                        if sign > 0 { "u" } else { "s" }
                    ));
                }
            }
        }
        for pos in 0..3 {
            for star in [StarPos::SecondStarred, StarPos::FirstStarred] {
                let mut v = vec![0i64; 15];
                let sign = match star {
                    StarPos::SecondStarred => 1,
                    StarPos::FirstStarred => -1,
                };
                v[pos] += sign;
                v[3 + pos] += sign;
                v[6 + 6 + pos] += 1; // bigon base arc, top to bottom
                let th = cone_angles[pos]
                    .add(&cone_angles[3 + pos])
                    .scale(Rat::new(-sign, 4));
                let scalar = Scalar::cb_pow(sign)
                    .mul(&Scalar::q_angle_expr(&th).map_err(TorusError::Scalar)?);
                images.push((v, scalar));
                gens.push(format!(
                    "d{}{}",
                    ["a", "b", "c"][pos],
                    if sign > 0 { "u" } else { "s" }
                ));
            }
        }
        // the ambient torus: cocycle pulled back through the images
        let vectors: Vec<Vec<i64>> = images.iter().map(|(v, _)| v.clone()).collect();
        let torus = QuantumTorus::pullback(
            &format!("dcSf[{}]", m.suspensions[susp].name),
            gens,
            &codomain,
            &vectors,
        );
        let ev = TorusHom::new(&torus, &codomain, images)?;
        Ok(SfDoubleCover {
            susp,
            torus,
            codomain,
            ev,
            angles: cone_angles,
        })
    }

    /// Generator index of a lifted triangle arc.
    pub fn tri_gen(&self, block: usize, corner: Corner, star: StarPos) -> usize {
        let s = match star {
            StarPos::SecondStarred => 0,
            StarPos::FirstStarred => 1,
        };
        6 * block + 2 * corner.index() + s
    }

    /// Generator index of a lifted bigon arc.
    pub fn bigon_gen(&self, pos: usize, star: StarPos) -> usize {
        12 + 2 * pos
            + match star {
                StarPos::SecondStarred => 0,
                StarPos::FirstStarred => 1,
            }
    }

    /// The lifted arc from `(edge i, star si)` to `(edge j, star sj)` in a
    /// triangle block, resolved through the basis arcs and their inverses.
    /// Exactly one endpoint must be starred.
    pub fn arc(&self, block: usize, i: usize, si: bool, j: usize, sj: bool) -> TorusElem {
        assert!(si != sj, "exactly one endpoint is starred");
        let c = third_corner(i, j);
        let corner = [Corner::Alpha, Corner::Beta, Corner::Gamma][c];
        let (e1, _e2) = corner.ends();
        if e1 == i {
            // the basis direction
            let star = if sj {
                StarPos::SecondStarred
            } else {
                StarPos::FirstStarred
            };
            TorusElem::generator(&self.torus, self.tri_gen(block, corner, star))
        } else {
            // reversed: the inverse of the basis arc with the star kept on
            // the same underlying endpoint
            let star = if si {
                StarPos::SecondStarred
            } else {
                StarPos::FirstStarred
            };
            TorusElem::generator(&self.torus, self.tri_gen(block, corner, star))
                .inverse()
                .expect("generators are invertible")
        }
    }

    /// UV-IR image of a stated corner token.
    pub fn f_corner(&self, t: &CornerTok, states: [i8; 2]) -> Result<TorusElem, TraceError> {
        let (i, j) = t.corner.ends();
        let base = 3 * t.block;
        let th = |pos: usize| self.angles[base + pos].clone();
        // q^((pi - th_i/2 - th_j/2)/2pi) as an exact scalar
        let w_angle = |sign: i64| -> Result<Scalar, TraceError> {
            let mut e = AngleExpr::pi(Rat::new(1, 2));
            e = e.sub(&th(i).scale(Rat::new(1, 4)));
            e = e.sub(&th(j).scale(Rat::new(1, 4)));
            Ok(Scalar::q_angle_expr(&e.scale(Rat::from_integer(sign)))
                .map_err(TorusError::Scalar)?)
        };
        match (t.orient, states) {
            (Orient::Fwd, [1, 1]) => {
                let g = TorusElem::generator(
                    &self.torus,
                    self.tri_gen(t.block, t.corner, StarPos::SecondStarred),
                );
                Ok(g.scale(&w_angle(-1)?))
            }
            (Orient::Fwd, [-1, -1]) => {
                let g = TorusElem::generator(
                    &self.torus,
                    self.tri_gen(t.block, t.corner, StarPos::FirstStarred),
                );
                Ok(g.scale(&w_angle(1)?))
            }
            (Orient::Bwd, [1, 1]) => {
                // bwd(+,+) = fwd(-,-)^-1
                let f = self.f_corner(
                    &CornerTok {
                        orient: Orient::Fwd,
                        ..*t
                    },
                    [-1, -1],
                )?;
                Ok(f.inverse()?)
            }
            (Orient::Bwd, [-1, -1]) => {
                let f = self.f_corner(
                    &CornerTok {
                        orient: Orient::Fwd,
                        ..*t
                    },
                    [1, 1],
                )?;
                Ok(f.inverse()?)
            }
            (Orient::Fwd, [-1, 1]) => {
                // detour through the third edge: q^((th_j - th_i)/4pi) *
                // q^(-1/2) * arc(k -> j*) * arc(i* -> k); the turning
                // factor mirrors in the bottom block
                let k = 3 - i - j;
                let pre = th(j).sub(&th(i)).scale(Rat::new(1, 4));
                let half = if t.block == 0 { -1 } else { 1 };
                let s = Scalar::q_angle_expr(&pre)
                    .map_err(TorusError::Scalar)?
                    .mul(&Scalar::q_half_pow(half));
                let a1 = self.arc(t.block, k, false, j, true);
                let a2 = self.arc(t.block, i, true, k, false);
                Ok(a1.mul(&a2)?.scale(&s))
            }
            (Orient::Bwd, [-1, 1]) => {
                // through the reduced-algebra relation: the weyl product of
                // the fwd (+,+) and fwd (-,-) arcs at the next two corners
                let (c1, c2) = next_corners(t.corner);
                let f1 = self.f_corner(
                    &CornerTok {
                        block: t.block,
                        corner: c1,
                        orient: Orient::Fwd,
                        states: t.states,
                    },
                    [1, 1],
                )?;
                let f2 = self.f_corner(
                    &CornerTok {
                        block: t.block,
                        corner: c2,
                        orient: Orient::Fwd,
                        states: t.states,
                    },
                    [-1, -1],
                )?;
                weyl_mono(&self.torus, &[f1, f2])
            }
            (_, [1, -1]) => Ok(TorusElem::zero(&self.torus)),
            _ => Err(TraceError::UnresolvedState),
        }
    }

    /// UV-IR image of a stated biangle token.
    pub fn f_biangle(&self, t: &BiTok, states: [i8; 2]) -> Result<TorusElem, TraceError> {
        let th = self.angles[t.pos].add(&self.angles[3 + t.pos]);
        let w = |sign: i64| -> Result<Scalar, TraceError> {
            Ok(Scalar::q_angle_expr(&th.scale(Rat::new(sign, 4))).map_err(TorusError::Scalar)?)
        };
        match (t.orient, states) {
            (Orient::Fwd, [1, 1]) => Ok(TorusElem::generator(
                &self.torus,
                self.bigon_gen(t.pos, StarPos::SecondStarred),
            )
            .scale(&w(1)?)),
            (Orient::Fwd, [-1, -1]) => Ok(TorusElem::generator(
                &self.torus,
                self.bigon_gen(t.pos, StarPos::FirstStarred),
            )
            .scale(&w(-1)?)),
            (Orient::Bwd, [1, 1]) => {
                let f = self.f_biangle(
                    &BiTok {
                        orient: Orient::Fwd,
                        ..*t
                    },
                    [-1, -1],
                )?;
                Ok(f.inverse()?)
            }
            (Orient::Bwd, [-1, -1]) => {
                let f = self.f_biangle(
                    &BiTok {
                        orient: Orient::Fwd,
                        ..*t
                    },
                    [1, 1],
                )?;
                Ok(f.inverse()?)
            }
            (_, [1, -1]) | (_, [-1, 1]) => Ok(TorusElem::zero(&self.torus)),
            _ => Err(TraceError::UnresolvedState),
        }
    }

    /// UV-IR image of a whole suspension word at a resolved assignment.
    pub fn f_word(&self, w: &SfWord, assignment: &[i8]) -> Result<TorusElem, TraceError> {
        let mut acc = TorusElem::one(&self.torus);
        for t in &w.left {
            let st = t.states.map(|s| resolve_state(s, assignment));
            acc = acc.mul(&self.f_corner(t, st)?)?;
        }
        for t in &w.right {
            let st = t.states.map(|s| resolve_state(s, assignment));
            acc = acc.mul(&self.f_biangle(t, st)?)?;
        }
        Ok(acc)
    }
}

fn next_corners(c: Corner) -> (Corner, Corner) {
    match c {
        Corner::Alpha => (Corner::Beta, Corner::Gamma),
        Corner::Beta => (Corner::Gamma, Corner::Alpha),
        Corner::Gamma => (Corner::Alpha, Corner::Beta),
    }
}

fn weyl_mono(t: &Arc<QuantumTorus>, parts: &[TorusElem]) -> Result<TorusElem, TraceError> {
    let mut vec = vec![0i64; t.rank()];
    let mut scalar = Scalar::one();
    for p in parts {
        if p.is_zero() {
            return Ok(TorusElem::zero(t));
        }
        assert_eq!(p.terms.len(), 1);
        let (v, s) = p.terms.iter().next().unwrap();
        for (a, b) in vec.iter_mut().zip(v.iter()) {
            *a += b;
        }
        scalar = scalar.mul(s);
    }
    Ok(TorusElem::monomial(t, vec, scalar)?)
}

// ---------------------------------------------------------------------------
// the trace side of a suspension word, with the boundary sign
// ---------------------------------------------------------------------------

/// The boundary statistic of a resolved suspension word.
pub fn b_of_sf_word(w: &SfWord, assignment: &[i8]) -> Rat {
    // boundary points per bare cone (3*block + pos), ordered left word
    // first (higher)
    let mut pts: Vec<Vec<(i8, i8)>> = vec![Vec::new(); 6];
    for t in &w.left {
        let (i, j) = t.corner.ends();
        let st = t.states.map(|s| resolve_state(s, assignment));
        let (src, dst, s_src, s_dst) = match t.orient {
            Orient::Fwd => (i, j, st[0], st[1]),
            Orient::Bwd => (j, i, st[1], st[0]),
        };
        pts[3 * t.block + src].push((1, s_src));
        pts[3 * t.block + dst].push((-1, s_dst));
    }
    for t in &w.right {
        let st = t.states.map(|s| resolve_state(s, assignment));
        let (src, dst, s_src, s_dst) = match t.orient {
            Orient::Fwd => (t.pos, 3 + t.pos, st[0], st[1]),
            Orient::Bwd => (3 + t.pos, t.pos, st[1], st[0]),
        };
        pts[src].push((1, s_src));
        pts[dst].push((-1, s_dst));
    }
    let mut total = Rat::from_integer(0);
    for edge_pts in pts {
        for a in 0..edge_pts.len() {
            for b in (a + 1)..edge_pts.len() {
                let (s1, st1) = edge_pts[a];
                let (s2, st2) = edge_pts[b];
                total += Rat::new((s1 as i64) * (st2 as i64) - (s2 as i64) * (st1 as i64), 4);
            }
        }
    }
    let two = Rat::from_integer(2);
    let mut r = total;
    while r < Rat::from_integer(0) {
        r += two;
    }
    while r >= two {
        r -= two;
    }
    r
}

/// The trace pipeline `(Tr_Sf (x) id) . pi` of one suspension word, landing
/// in the same codomain as the evaluation map.
pub fn trace_pipeline_sf(
    m: &Mfld3,
    dc: &SfDoubleCover,
    w: &SfWord,
    assignment: &[i8],
    ct: &Scalar,
    cb: &Scalar,
) -> Result<TorusElem, TraceError> {
    let sf = m.sf_torus(w.susp);
    let cod = &dc.codomain;
    let mut acc = TorusElem::one(cod);
    // left word: sl2 corner weights (block 0..5) times gl1 corner arcs
    for t in &w.left {
        let st = t.states.map(|s| resolve_state(s, assignment));
        let tw = sf_corner_weight(&sf, t.block, t.corner, st, ct)?;
        let (i, j) = t.corner.ends();
        let arc = gl1_corner_arc(t.block, i, j);
        let k = match t.orient {
            Orient::Fwd => 1,
            Orient::Bwd => -1,
        };
        let mut emb = TorusElem::zero(cod);
        for (v, s) in &tw.terms {
            let mut vv = vec![0i64; 15];
            vv[..6].copy_from_slice(v);
            for (x, a) in vv[6..].iter_mut().zip(arc.iter()) {
                *x += k * a;
            }
            emb = emb.add(&TorusElem::monomial(cod, vv, s.clone())?)?;
        }
        acc = acc.mul(&emb)?;
    }
    for t in &w.right {
        let st = t.states.map(|s| resolve_state(s, assignment));
        let tw = sf_biangle_weight(&sf, t.pos, st, cb)?;
        let k = match t.orient {
            Orient::Fwd => 1,
            Orient::Bwd => -1,
        };
        let mut emb = TorusElem::zero(cod);
        for (v, s) in &tw.terms {
            let mut vv = vec![0i64; 15];
            vv[..6].copy_from_slice(v);
            vv[6 + 6 + t.pos] += k;
            emb = emb.add(&TorusElem::monomial(cod, vv, s.clone())?)?;
        }
        acc = acc.mul(&emb)?;
    }
    // words are sign-twisted products of their tokens, and each elementary
    // token has trivial boundary statistic (its endpoints sit on distinct
    // marking edges), so no global sign enters here.
    Ok(acc)
}

// ---------------------------------------------------------------------------
// 3d compatibility and recovery
// ---------------------------------------------------------------------------

/// The face-suspension square on every stated oriented generator: the 24
/// triangle-block generators (two blocks, three corners, two orientations,
/// two pure states) and the 12 biangle generators, under a formal angle
/// structure.  Every output must be angle-free.
pub fn sf_square_generator_suite(
    m: &Mfld3,
    angles: &AngleStructure,
    susp: usize,
    ct: &Scalar,
    cb: &Scalar,
) -> Result<Vec<CheckRecord>, TraceError> {
    let dc = SfDoubleCover::new(m, angles, susp)?;
    let emb_red = embedded_gl1_reduction(&dc.codomain)?;
    let mut out = Vec::new();
    let mut run = |w: &SfWord, label: String| -> Result<(), TraceError> {
        let lhs = emb_red.reduce(&dc.ev.apply(&dc.f_word(w, &[])?)?)?;
        let rhs = emb_red.reduce(&trace_pipeline_sf(m, &dc, w, &[], ct, cb)?)?;
        let lhs_s = lhs.substitute_constants(ct, cb)?;
        let rhs_s = rhs.substitute_constants(ct, cb)?;
        let mut rec = CheckRecord::equality(&label, &lhs_s, &rhs_s);
        let angle_free = lhs_s.terms.values().all(Scalar::is_angle_free)
            && rhs_s.terms.values().all(Scalar::is_angle_free);
        if !angle_free {
            rec.equal = false;
            rec.first_diff = Some("angle exponents did not cancel".to_string());
        }
        out.push(rec);
        Ok(())
    };
    for block in 0..2 {
        for corner in Corner::all() {
            for orient in [Orient::Fwd, Orient::Bwd] {
                for st in [[1i8, 1i8], [-1, -1]] {
                    let tok = CornerTok {
                        block,
                        corner,
                        orient,
                        states: [StateRef::Fixed(st[0]), StateRef::Fixed(st[1])],
                    };
                    let w = SfWord {
                        susp,
                        left: vec![tok],
                        right: vec![],
                    };
                    run(
                        &w,
                        format!(
                            "sf-gen block={} corner={:?} orient={:?} states={:?}",
                            block, corner, orient, st
                        ),
                    )?;
                }
            }
        }
    }
    for pos in 0..3 {
        for orient in [Orient::Fwd, Orient::Bwd] {
            for st in [[1i8, 1i8], [-1, -1]] {
                let tok = BiTok {
                    pos,
                    orient,
                    states: [StateRef::Fixed(st[0]), StateRef::Fixed(st[1])],
                };
                let w = SfWord {
                    susp,
                    left: vec![],
                    right: vec![tok],
                };
                run(
                    &w,
                    format!(
                        "sf-gen biangle pos={} orient={:?} states={:?}",
                        pos, orient, st
                    ),
                )?;
            }
        }
    }
    // the good mixed state on each block, through the detour composite
    for block in 0..2 {
        for corner in Corner::all() {
            let tok = CornerTok {
                block,
                corner,
                orient: Orient::Fwd,
                states: [StateRef::Fixed(-1), StateRef::Fixed(1)],
            };
            let w = SfWord {
                susp,
                left: vec![tok],
                right: vec![],
            };
            run(
                &w,
                format!("sf-gen mixed block={} corner={:?}", block, corner),
            )?;
        }
    }
    Ok(out)
}

/// One reduced term of a total: the shape part and the per-suspension
/// canonical gl1 web vectors with the combined web scalar.
#[derive(Clone, Debug)]
pub struct GluedTerm {
    pub shape: TorusElem,
    pub webs: Vec<Vec<i64>>,
    pub web_scalar: Scalar,
}

/// The full `ev . F` image of a presentation: per state, the suspension
/// tensor split into shape and web parts.
pub struct CompatOutcome {
    pub report: Report,
    pub terms: Vec<GluedTerm>,
}

/// Runs both pipelines on every state of a presentation and reports exact
/// equality per state and suspension; collects the evaluated totals for
/// the recovery projection.
pub fn compat_check_3d(
    ctx: &SqgmContext,
    angles: &AngleStructure,
    pres: &Presentation3D,
    ct: &Scalar,
    cb: &Scalar,
) -> Result<CompatOutcome, TraceError> {
    crate::scalar::check_constants(ct, cb)?;
    let m = &ctx.complex;
    let mut report = Report::default();
    let covers: BTreeMap<usize, SfDoubleCover> = pres
        .words
        .iter()
        .map(|w| Ok((w.susp, SfDoubleCover::new(m, angles, w.susp)?)))
        .collect::<Result<_, TraceError>>()?;
    let gl1_red: BTreeMap<usize, (Arc<QuantumTorus>, ReductionSystem)> = covers
        .keys()
        .map(|s| {
            let t = gl1_sf_torus(&format!("gl1Sf[{}]", m.suspensions[*s].name));
            let red = gl1_sf_reduction(&t)?;
            Ok((*s, (t, red)))
        })
        .collect::<Result<_, TraceError>>()?;
    let mut terms = Vec::new();
    for assignment in pres.assignments() {
        let label: Vec<i8> = assignment.clone();
        let mut shape_parts: Vec<TorusElem> = Vec::new();
        let mut web_vecs: Vec<Vec<i64>> = Vec::new();
        let mut web_scalar = Scalar::one();
        let mut dead = false;
        for w in &pres.words {
            let dc = &covers[&w.susp];
            let emb_red = embedded_gl1_reduction(&dc.codomain)?;
            let lhs = emb_red.reduce(&dc.ev.apply(&dc.f_word(w, &assignment)?)?)?;
            let rhs = emb_red.reduce(&trace_pipeline_sf(m, dc, w, &assignment, ct, cb)?)?;
            let lhs_s = lhs.substitute_constants(ct, cb)?;
            let rhs_s = rhs.substitute_constants(ct, cb)?;
            report.push(CheckRecord::equality(
                &format!(
                    "sf-square susp={} state={:?}",
                    m.suspensions[w.susp].name, label
                ),
                &lhs_s,
                &rhs_s,
            ));
            if lhs_s.is_zero() {
                dead = true;
                continue;
            }
            // split the (single-term) image into shape x web
            if lhs_s.terms.len() != 1 {
                return Err(TraceError::InvalidPresentation(
                    "suspension image is not a monomial".into(),
                ));
            }
            let (v, s) = lhs_s.terms.iter().next().unwrap();
            let (tvec, wvec) = (v[..6].to_vec(), v[6..].to_vec());
            // angle parts must cancel in the total
            shape_parts.push(sf_part_to_big(ctx, w.susp, &tvec, s)?);
            let (gt, gred) = &gl1_red[&w.susp];
            let wmono = TorusElem::monomial(gt, wvec, Scalar::one())?;
            let wred = gred.reduce(&wmono)?;
            let (wv, ws) = wred.terms.iter().next().unwrap();
            web_vecs.push(wv.clone());
            web_scalar = web_scalar.mul(ws);
        }
        if dead {
            continue;
        }
        // combine suspension parts in the big torus, project, and reduce
        let big = m.big_sf_torus();
        let mut acc = TorusElem::one(&big);
        for p in &shape_parts {
            acc = acc.mul(p)?;
        }
        let pref = pres.prefactor_scalar(&assignment);
        let projected = ctx.project(&acc)?.scale(&pref);
        let reduced = ctx.reduce(&projected)?;
        if !reduced.terms.values().all(|s| {
            s.substitute_constants(ct, cb)
                .map(|x| x.is_angle_free())
                .unwrap_or(false)
        }) {
            report.push(CheckRecord::named_bool(
                &format!("angle-free total state={:?}", label),
                "angle exponents cancel",
                "leftover angles",
                false,
            ));
        }
        terms.push(GluedTerm {
            shape: reduced.substitute_constants(ct, cb)?,
            webs: web_vecs,
            web_scalar: web_scalar.substitute_constants(ct, cb)?,
        });
    }
    Ok(CompatOutcome { report, terms })
}

fn sf_part_to_big(
    ctx: &SqgmContext,
    susp: usize,
    tvec: &[i64],
    scalar: &Scalar,
) -> Result<TorusElem, TraceError> {
    let big = ctx.complex.big_sf_torus();
    let mut v = vec![0i64; big.rank()];
    v[6 * susp..6 * susp + 6].copy_from_slice(tvec);
    Ok(TorusElem::monomial(&big, v, scalar.clone())?)
}

/// The grading projection: keeps the terms whose web matches the reference
/// up to `(-A)^w`, multiplying the shape part by the mismatch, and sums.
pub fn recover_trace(
    ctx: &SqgmContext,
    outcome: &CompatOutcome,
    reference_webs: &[Vec<i64>],
    reference_scalar: &Scalar,
) -> Result<TorusElem, TraceError> {
    let mut total = TorusElem::zero(&ctx.shape);
    for t in &outcome.terms {
        if t.webs != reference_webs {
            continue;
        }
        // ratio must be (-A)^w
        let ratio = t
            .web_scalar
            .mul(&reference_scalar.inverse().map_err(TorusError::Scalar)?);
        let Some(st) = ratio.as_single_term() else {
            continue;
        };
        if st.zeta != 0 || !st.angles.is_empty() || st.ct != 0 || st.cb != 0 {
            continue;
        }
        if st.quarters % 4 != 0 {
            continue;
        }
        let w = st.quarters / 4;
        let expected_coeff = if w.rem_euclid(2) == 0 { 1 } else { -1 };
        if st.coeff != expected_coeff {
            continue;
        }
        total = total.add(&t.shape.scale(&ratio))?;
    }
    ctx.reduce(&total)
}

/// Glues per-suspension web vectors along the edge cones: boundary degrees
/// of glued halves must cancel.
pub fn gl1_glue(
    m: &Mfld3,
    webs: &BTreeMap<usize, Vec<i64>>,
) -> Result<Vec<(usize, Vec<i64>)>, TraceError> {
    // degree of a web vector at a bare cone: corner arcs and bigon arcs
    // contribute their endpoint signs
    let degree = |web: &[i64], block: usize, pos: usize| -> i64 {
        let mut d = 0i64;
        for c in 0..3 {
            let (i, j) = [Corner::Alpha, Corner::Beta, Corner::Gamma][c].ends();
            let k = web[3 * block + c];
            if i == pos {
                d -= k;
            }
            if j == pos {
                d += k;
            }
        }
        // bigon arcs run top -> bottom
        let k = web[6 + pos];
        match block {
            0 => d -= k,
            _ => d += k,
        }
        d
    };
    for (ci, class) in m.edge_classes.iter().enumerate() {
        for slot in class {
            let halves = m.cone_halves(slot);
            let [Some(h1), Some(h2)] = halves else {
                continue;
            };
            let d1 = webs
                .get(&h1.susp)
                .map(|w| degree(w, h1.block, h1.pos))
                .unwrap_or(0);
            let d2 = webs
                .get(&h2.susp)
                .map(|w| degree(w, h2.block, h2.pos))
                .unwrap_or(0);
            if d1 + d2 != 0 {
                return Err(TraceError::DegreeMismatch(format!(
                    "edge class {} at tet {} {:?}",
                    ci, m.tet_ids[slot.tet], slot.ends
                )));
            }
        }
    }
    Ok(webs.iter().map(|(k, v)| (*k, v.clone())).collect())
}

// ---------------------------------------------------------------------------
// the cone torus and the 2-3 cone checks
// ---------------------------------------------------------------------------

/// The gl1 algebra of the 4-branch-point torus boundary: rank-3 with
/// `x x' = q^2 x' x` cyclically and the central cycle relation
/// `[x x' x''] = -1`.
pub fn cone_torus() -> Arc<QuantumTorus> {
    let gens = vec!["x".to_string(), "xp".to_string(), "xpp".to_string()];
    let mut m2 = vec![vec![0i64; 3]; 3];
    let mut z = vec![vec![0i64; 3]; 3];
    for p in 0..3 {
        let q = (p + 1) % 3;
        // x x' = q^2 x' x, with the branch x * x' = q x_(x+x')
        m2[p][q] = 8;
        m2[q][p] = -8;
        z[p][q] = 2;
        z[q][p] = -2;
    }
    QuantumTorus::antisymmetric("cone", gens, m2, z)
}

pub fn cone_central_relation() -> MonomialRelation {
    MonomialRelation::central(vec![1, 1, 1], Scalar::int(-1))
}

/// The action of an element on the cyclic vector of the module defined by
/// the left ideal `(x'' - 1 + x^-1, x - 1 + x'^-1, x' - 1 + x''^-1)`:
/// rewrites positive powers until none remain.
pub fn cone_module_action(e: &TorusElem) -> TorusElem {
    let t = e.torus.clone();
    let mut cur = e.clone();
    loop {
        let mut next = TorusElem::zero(&t);
        let mut changed = false;
        for (v, s) in &cur.terms {
            // rewrite priority: x'' then x then x'
            let g = [2usize, 0, 1].into_iter().find(|&g| v[g] > 0);
            match g {
                None => {
                    next = next
                        .add(&TorusElem::monomial(&t, v.clone(), s.clone()).unwrap())
                        .unwrap();
                }
                Some(g) => {
                    changed = true;
                    // x_v = C(v - e_g, e_g)^-1 x_(v-e_g) x_g and
                    // x_g acts as (1 - x_(prev)^-1)
                    let prev = (g + 1) % 3;
                    let mut rest = v.clone();
                    rest[g] -= 1;
                    let mut eg = vec![0i64; 3];
                    eg[g] = 1;
                    let coc = t.cocycle(&rest, &eg).inverse().unwrap();
                    let head = TorusElem::monomial(&t, rest, s.mul(&coc)).unwrap();
                    let one = TorusElem::one(&t);
                    let inv = TorusElem::gen_pow(&t, prev, -1);
                    let acted = head.mul(&one.sub(&inv).unwrap()).unwrap();
                    next = next.add(&acted).unwrap();
                }
            }
        }
        cur = next;
        if !changed {
            return cur;
        }
    }
}

/// The cone-point relation suite of a 2-3 move: the sign check, the module
/// action value, the Weyl cycle relation, and the three-term transport.
pub fn cone_3term_check(
    mv: &PachnerMove,
    angles_before: &AngleStructure,
) -> Result<Report, TraceError> {
    let mut report = Report::default();

    // (iii-a) the Weyl cycle relation in the cone torus is central with
    // value -1, and the module action of the cycle is -q
    let cone = cone_torus();
    let rel = cone_central_relation();
    report.push(CheckRecord::named_bool(
        "cone cycle relation is central",
        "central",
        "central",
        rel.is_central_in(&cone),
    ));
    let cycle = TorusElem::monomial(&cone, vec![1, 1, 1], Scalar::one()).unwrap();
    let acted = cone_module_action(&cycle);
    let expect = TorusElem::monomial(&cone, vec![0, 0, 0], Scalar::q_pow(1).neg()).unwrap();
    report.push(CheckRecord::equality(
        "cycle acts on the cyclic vector by -q",
        &acted,
        &expect,
    ));

    // (i) the sign check: the meridian image is a product of one meridian
    // per new tetrahedron around the central edge, each evaluating to -1
    let k = mv.after.edge_classes[mv.central_class].len();
    let prod = Scalar::int(-1).pow(k as i64).map_err(TorusError::Scalar)?;
    report.push(CheckRecord::named_bool(
        "pachner sign check",
        &format!("(-1)^{}", k),
        "-1",
        prod == Scalar::int(-1) && k == 3,
    ));

    // (ii) the three-term transport: the two surviving coefficients
    // compose to q^(th/pi) and q^(-th'/pi), and the cross pair cancels
    let g = &mv.before.gluings[mv.gluing_index];
    let eq = crate::complex::face_cycle(g.from.face);
    let up = mv.old_up;
    let th_up = |u: usize, v: usize| {
        angles_before.per_tet[up][crate::complex::EdgeSlot::new(up, u, v).pair()].clone()
    };
    let a = g.from.face;
    let mu = |i: usize, p: usize| mv.angles_after.per_tet[mv.new_tets[i]][p].clone();
    // T_bc = new_tets[0], T_cd = new_tets[1], T_bd = new_tets[2]
    let i1_lhs = mu(1, 1).add(&mu(0, 2));
    let i1_rhs = th_up(a, eq[1]);
    report.push(scalar_angle_check(
        "transport: q^(th/pi) composite",
        &i1_lhs,
        &i1_rhs,
    )?);
    let i2_lhs = mu(1, 2).add(&mu(2, 1));
    let i2_rhs = th_up(a, eq[2]);
    report.push(scalar_angle_check(
        "transport: q^(-th'/pi) composite",
        &i2_lhs,
        &i2_rhs,
    )?);
    // cross pair: q^((mu(T_bd,0) - mu(T_cd,2))/pi) = q * q^((mu(T_cd,1) - mu(T_bc,0))/pi)
    let lhs = Scalar::q_angle_expr(&mu(2, 0).sub(&mu(1, 2))).map_err(TorusError::Scalar)?;
    let rhs = Scalar::q_pow(1)
        .mul(&Scalar::q_angle_expr(&mu(1, 1).sub(&mu(0, 0))).map_err(TorusError::Scalar)?);
    report.push(CheckRecord::named_bool(
        "transport: cross pair differs by q",
        &format!("{}", lhs),
        &format!("{}", rhs),
        lhs == rhs,
    ));
    // the kink and branch-crossing factors that close the cancellation
    let closing = Scalar::q_pow(-1)
        .neg()
        .mul(&Scalar::int(-1))
        .mul(&Scalar::q_pow(1));
    report.push(CheckRecord::named_bool(
        "transport: kink and sign factors cancel",
        &format!("{}", closing),
        "1",
        closing == Scalar::one(),
    ));
    Ok(report)
}

fn scalar_angle_check(
    name: &str,
    lhs: &AngleExpr,
    rhs: &AngleExpr,
) -> Result<CheckRecord, TraceError> {
    let l = Scalar::q_angle_expr(lhs).map_err(TorusError::Scalar)?;
    let r = Scalar::q_angle_expr(rhs).map_err(TorusError::Scalar)?;
    Ok(CheckRecord::named_bool(
        name,
        &format!("{}", l),
        &format!("{}", r),
        l == r,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{bipyramid, figure_eight, pachner_2_3};
    use crate::scalar::AngleId;

    #[test]
    fn gl1_sf_reduction_builds() {
        let t = gl1_sf_torus("g");
        let red = gl1_sf_reduction(&t).unwrap();
        // the composite arc rearrangement: (y' -> y)(y'' -> y') reduces to
        // (-A)^(1/2) (y'' -> y) in the top block with slots (a,b,c) =
        // (y'', y, y'): arcs b<-c etc.
        // top block positions: 0 = y'', 1 = y, 2 = y'
        let a1 = TorusElem::monomial(&t, gl1_corner_arc(0, 2, 1), Scalar::one()).unwrap();
        let a2 = TorusElem::monomial(&t, gl1_corner_arc(0, 0, 2), Scalar::one()).unwrap();
        let lhs = red.reduce(&a1.mul(&a2).unwrap()).unwrap();
        let target = TorusElem::monomial(&t, gl1_corner_arc(0, 0, 1), Scalar::one()).unwrap();
        let rhs = red
            .reduce(&target.scale(&Scalar::zeta_pow(1).mul(&Scalar::a_quarters(2))))
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn double_cover_matches_hexagon_table() {
        let m = figure_eight();
        let angles = m.symbolic_angles();
        let s = m.suspension_index("S").unwrap();
        let dc = SfDoubleCover::new(&m, &angles, s).unwrap();
        // the top-block lifted arcs satisfy the hexagon commutation table:
        // a1 = (b* -> c)-type arcs etc.; check the q and sign relations
        let a1 = dc
            .torus
            .basis(dc.tri_gen(0, Corner::Alpha, StarPos::FirstStarred));
        let a2 = dc
            .torus
            .basis(dc.tri_gen(0, Corner::Alpha, StarPos::SecondStarred));
        let b1 = dc
            .torus
            .basis(dc.tri_gen(0, Corner::Beta, StarPos::FirstStarred));
        let b2 = dc
            .torus
            .basis(dc.tri_gen(0, Corner::Beta, StarPos::SecondStarred));
        let g1 = dc
            .torus
            .basis(dc.tri_gen(0, Corner::Gamma, StarPos::FirstStarred));
        let g2 = dc
            .torus
            .basis(dc.tri_gen(0, Corner::Gamma, StarPos::SecondStarred));
        let q = Scalar::q_pow(1);
        let minus = Scalar::int(-1);
        assert_eq!(dc.torus.commutation(&a1, &b2), q);
        assert_eq!(dc.torus.commutation(&b2, &g1), q);
        assert_eq!(dc.torus.commutation(&g1, &a2), q);
        assert_eq!(dc.torus.commutation(&a2, &b1), q);
        assert_eq!(dc.torus.commutation(&b1, &g2), q);
        assert_eq!(dc.torus.commutation(&g2, &a1), q);
        assert_eq!(dc.torus.commutation(&a1, &g1), minus);
        assert_eq!(dc.torus.commutation(&b2, &a2), minus);
        assert_eq!(dc.torus.commutation(&g1, &b1), minus);
        assert_eq!(dc.torus.commutation(&a2, &g2), minus);
        assert_eq!(dc.torus.commutation(&b1, &a1), minus);
        assert_eq!(dc.torus.commutation(&g2, &b2), minus);
        assert_eq!(dc.torus.commutation(&a1, &a2), Scalar::one());
    }

    #[test]
    fn cone_module_action_value() {
        let cone = cone_torus();
        let cycle = TorusElem::monomial(&cone, vec![1, 1, 1], Scalar::one()).unwrap();
        let acted = cone_module_action(&cycle);
        let expect = TorusElem::monomial(&cone, vec![0, 0, 0], Scalar::q_pow(1).neg()).unwrap();
        assert_eq!(acted, expect);
    }

    #[test]
    fn cone_checks_on_bipyramid() {
        let m = bipyramid();
        let ang = m.symbolic_angles();
        let mv = pachner_2_3(&m, &ang, 0, &AngleExpr::symbol(AngleId::named("zf"))).unwrap();
        let rep = cone_3term_check(&mv, &ang).unwrap();
        for r in &rep.records {
            assert!(r.equal, "failed: {} ({} vs {})", r.name, r.lhs, r.rhs);
        }
    }
}

#[cfg(test)]
mod compat_tests {
    use super::*;
    use crate::complex::figure_eight;
    use crate::scalar::default_constants;
    use crate::trace3d::figure_eight_presentation;

    #[test]
    fn sf_square_all_generators() {
        let m = figure_eight();
        let angles = m.symbolic_angles();
        let (ct, cb) = default_constants();
        for susp in 0..m.suspensions.len() {
            let recs = sf_square_generator_suite(&m, &angles, susp, &ct, &cb).unwrap();
            assert_eq!(recs.len(), 24 + 12 + 6);
            for r in &recs {
                assert!(
                    r.equal,
                    "susp {}: {}\n lhs {}\n rhs {}",
                    susp, r.name, r.lhs, r.rhs
                );
            }
        }
    }

    #[test]
    fn figure_eight_compat_and_recovery() {
        let m = figure_eight();
        let ctx = SqgmContext::new(&m).unwrap();
        let angles = m.symbolic_angles();
        let pres = figure_eight_presentation(&m);
        let (ct, cb) = default_constants();
        let out = compat_check_3d(&ctx, &angles, &pres, &ct, &cb).unwrap();
        for r in &out.report.records {
            assert!(
                r.equal,
                "failed: {}\n lhs {}\n rhs {}",
                r.name, r.lhs, r.rhs
            );
        }
        assert_eq!(out.terms.len(), 3, "three nonzero compatible states");
        // all three terms share the knot's glued web
        let ref_webs = out.terms[0].webs.clone();
        let ref_scalar = out.terms[0].web_scalar.clone();
        for t in &out.terms {
            assert_eq!(t.webs, ref_webs);
        }
        let rec = recover_trace(&ctx, &out, &ref_webs, &ref_scalar).unwrap();
        let pres_trace =
            crate::trace3d::trace_3d(&ctx, &pres, &Scalar::ct_pow(1), &Scalar::cb_pow(1))
                .unwrap()
                .substitute_constants(&ct, &cb)
                .unwrap();
        assert_eq!(
            rec, pres_trace,
            "\nrecovered: {}\ntrace:     {}",
            rec, pres_trace
        );
    }
}

#[cfg(test)]
mod glue_tests {
    use super::*;
    use crate::complex::figure_eight;
    use std::collections::BTreeMap;

    #[test]
    fn glued_webs_match_or_mismatch() {
        let m = figure_eight();
        let s = m.suspension_index("S").unwrap();
        let n = m.suspension_index("N").unwrap();
        // the knot's webs: corner ga1 and bigon xb in each of S, N
        let mut web = vec![0i64; 9];
        web[2] = 1; // ga1
        web[7] = 1; // xb
        let mut webs = BTreeMap::new();
        webs.insert(s, web.clone());
        webs.insert(n, web.clone());
        assert!(gl1_glue(&m, &webs).is_ok());
        // breaking one boundary degree fails
        let mut bad = web.clone();
        bad[7] = 2;
        let mut webs2 = BTreeMap::new();
        webs2.insert(s, bad);
        webs2.insert(n, web);
        assert!(matches!(
            gl1_glue(&m, &webs2),
            Err(TraceError::DegreeMismatch(_))
        ));
        // the all-zero web glues trivially
        let mut webs3 = BTreeMap::new();
        webs3.insert(s, vec![0i64; 9]);
        assert!(gl1_glue(&m, &webs3).is_ok());
    }
}

#[cfg(test)]
mod face_relation_tests {
    use super::*;
    use crate::complex::figure_eight;
    use crate::scalar::{alternate_constants, default_constants};

    #[test]
    fn ev_respects_the_double_cover_face_relations() {
        let m = figure_eight();
        let angles = m.symbolic_angles();
        let dc = SfDoubleCover::new(&m, &angles, 0).unwrap();
        let red = embedded_gl1_reduction(&dc.codomain).unwrap();
        for (ct, cb) in [default_constants(), alternate_constants()] {
            for p in 0..3usize {
                let q = (p + 1) % 3;
                // left side: (x_S* -> y_S) (y_T* -> x_T), the two starred
                // corner arcs across the face between side edges p, q
                let lhs = dc
                    .arc(0, p, true, q, false)
                    .mul(&dc.arc(1, q, true, p, false))
                    .unwrap();
                // right side: (x_S* -> x_T) (y_T* -> y_S): the starred
                // bigon over p and the reversed starred bigon over q
                let bp = TorusElem::generator(&dc.torus, dc.bigon_gen(p, StarPos::FirstStarred));
                let bq_rev =
                    TorusElem::generator(&dc.torus, dc.bigon_gen(q, StarPos::SecondStarred))
                        .inverse()
                        .unwrap();
                let rhs = bp.mul(&bq_rev).unwrap();
                let l = red
                    .reduce(&dc.ev.apply(&lhs).unwrap())
                    .unwrap()
                    .substitute_constants(&ct, &cb)
                    .unwrap();
                let r = red
                    .reduce(&dc.ev.apply(&rhs).unwrap())
                    .unwrap()
                    .substitute_constants(&ct, &cb)
                    .unwrap();
                assert_eq!(l, r, "face relation {} at ct={}", p, ct);
            }
        }
    }
}
