//! Combinatorial ideal triangulations: surfaces with flips, 3-manifolds
//! with 2-3 moves, derived face suspensions, edge cones, angle structures,
//! and the quantum tori attached to all of these.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::ComplexError;
use crate::qtorus::QuantumTorus;
use crate::scalar::{AngleExpr, Rat};
use num_traits::Zero;

// ---------------------------------------------------------------------------
// surfaces
// ---------------------------------------------------------------------------

/// One ideal triangle; `edges` are the edge names of its three sides in
/// counter-clockwise slot order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangle {
    pub id: String,
    pub edges: [String; 3],
}

/// A bare edge slot of a triangulated surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Slot {
    pub tri: usize,
    pub side: usize,
}

/// An ideally triangulated surface.  Edge gluings are implied by repeated
/// edge names; a name used once is a boundary edge.
#[derive(Clone, Debug)]
pub struct SurfaceTri {
    pub triangles: Vec<Triangle>,
    /// per edge name (in first-appearance order): its 1 or 2 slots
    pub edge_classes: Vec<(String, Vec<Slot>)>,
}

impl SurfaceTri {
    pub fn build(triangles: Vec<Triangle>) -> Result<SurfaceTri, ComplexError> {
        let mut order: Vec<String> = Vec::new();
        let mut classes: BTreeMap<String, Vec<Slot>> = BTreeMap::new();
        let mut ids: BTreeMap<&str, usize> = BTreeMap::new();
        for (ti, t) in triangles.iter().enumerate() {
            if ids.insert(t.id.as_str(), ti).is_some() {
                return Err(ComplexError::Malformed(format!(
                    "duplicate triangle id {}",
                    t.id
                )));
            }
            for (si, e) in t.edges.iter().enumerate() {
                if !classes.contains_key(e) {
                    order.push(e.clone());
                }
                classes
                    .entry(e.clone())
                    .or_default()
                    .push(Slot { tri: ti, side: si });
            }
        }
        for (name, slots) in &classes {
            if slots.len() > 2 {
                return Err(ComplexError::Malformed(format!(
                    "edge {} is used {} times",
                    name,
                    slots.len()
                )));
            }
        }
        let edge_classes = order
            .into_iter()
            .map(|n| {
                let s = classes[&n].clone();
                (n, s)
            })
            .collect();
        Ok(SurfaceTri {
            triangles,
            edge_classes,
        })
    }

    pub fn edge_index(&self, name: &str) -> Option<usize> {
        self.edge_classes.iter().position(|(n, _)| n == name)
    }

    pub fn boundary_edges(&self) -> Vec<&str> {
        self.edge_classes
            .iter()
            .filter(|(_, s)| s.len() == 1)
            .map(|(n, _)| n.as_str())
            .collect()
    }

    pub fn is_closed(&self) -> bool {
        self.edge_classes.iter().all(|(_, s)| s.len() == 2)
    }

    fn bare_index(&self, slot: Slot) -> usize {
        3 * slot.tri + slot.side
    }

    /// The big torus: one extended-triangle block per triangle, with
    /// `b a = A a b` (cyclically) inside each block.
    pub fn bare_torus(&self) -> Arc<QuantumTorus> {
        let n = 3 * self.triangles.len();
        let mut gens = Vec::with_capacity(n);
        for t in &self.triangles {
            for side in 0..3 {
                gens.push(format!("{}.{}", t.id, t.edges[side]));
            }
        }
        let mut m2 = vec![vec![0i64; n]; n];
        for ti in 0..self.triangles.len() {
            for s in 0..3 {
                let i = 3 * ti + s;
                let j = 3 * ti + (s + 1) % 3;
                // consecutive ccw slots: x_i x_j = A^{-1} x_j x_i
                m2[i][j] = -2;
                m2[j][i] = 2;
            }
        }
        let s = vec![vec![0i64; n]; n];
        QuantumTorus::antisymmetric("bare", gens, m2, s)
    }

    /// Exponent vector of the square-root quantized shear parameter of an
    /// edge class, inside the bare torus lattice.
    pub fn class_vector(&self, class: usize) -> Vec<i64> {
        let mut v = vec![0i64; 3 * self.triangles.len()];
        for slot in &self.edge_classes[class].1 {
            v[self.bare_index(*slot)] += 1;
        }
        v
    }

    /// The square-root quantized Teichmueller torus on the edge classes,
    /// with the form pulled back from the bare torus.
    ///
    /// Surfaces with boundary are accepted: a boundary class contributes
    /// its single bare edge (the quadrilateral of a flip is the main use).
    pub fn sqts_torus(&self) -> Arc<QuantumTorus> {
        let bare = self.bare_torus();
        let n = self.edge_classes.len();
        let gens: Vec<String> = self.edge_classes.iter().map(|(n, _)| n.clone()).collect();
        let vectors: Vec<Vec<i64>> = (0..n).map(|i| self.class_vector(i)).collect();
        QuantumTorus::pullback(&format!("sqts[{}]", n), gens, &bare, &vectors)
    }

    /// Strict variant: errors on surfaces with boundary.
    pub fn sqts_torus_closed(&self) -> Result<Arc<QuantumTorus>, ComplexError> {
        if !self.is_closed() {
            return Err(ComplexError::HasBoundary);
        }
        Ok(self.sqts_torus())
    }

    /// Independent sector count: `a(e,e') - a(e',e)` where `a(e,e')` counts
    /// angular sectors whose clockwise-first side is `e`.
    pub fn sector_form(&self, e: usize, ep: usize) -> i64 {
        let mut acc = 0i64;
        for (ti, t) in self.triangles.iter().enumerate() {
            for s in 0..3 {
                // sector between ccw-consecutive slots s, s+1
                let c1 = self.edge_index(&t.edges[s]).unwrap();
                let c2 = self.edge_index(&t.edges[(s + 1) % 3]).unwrap();
                if c1 == e && c2 == ep {
                    acc -= 1;
                }
                if c1 == ep && c2 == e {
                    acc += 1;
                }
                let _ = ti;
            }
        }
        acc
    }

    /// Flips the interior edge `e` between two distinct triangles.  Edge
    /// names of the four sides are preserved; the diagonal is renamed by
    /// appending a prime.
    pub fn flip(&self, e: &str) -> Result<SurfaceTri, ComplexError> {
        let idx = self
            .edge_index(e)
            .ok_or_else(|| ComplexError::UnknownId(e.to_string()))?;
        let slots = &self.edge_classes[idx].1;
        if slots.len() != 2 {
            return Err(ComplexError::BoundaryEdge(e.to_string()));
        }
        let (s1, s2) = (slots[0], slots[1]);
        if s1.tri == s2.tri {
            return Err(ComplexError::SelfGlued(e.to_string()));
        }
        // rotate both triangles so the diagonal comes first: (e, b, c), (e, d, a)
        let t1 = &self.triangles[s1.tri];
        let t2 = &self.triangles[s2.tri];
        let rot = |t: &Triangle, s: usize| -> [String; 3] {
            [
                t.edges[s].clone(),
                t.edges[(s + 1) % 3].clone(),
                t.edges[(s + 2) % 3].clone(),
            ]
        };
        let [_, b, c] = rot(t1, s1.side);
        let [_, d, a] = rot(t2, s2.side);
        let new_name = format!("{}'", e);
        let mut triangles = self.triangles.clone();
        triangles[s1.tri] = Triangle {
            id: t1.id.clone(),
            edges: [new_name.clone(), c, d],
        };
        triangles[s2.tri] = Triangle {
            id: t2.id.clone(),
            edges: [new_name, a, b],
        };
        SurfaceTri::build(triangles)
    }
}

/// The quadrilateral of a flip, with the paper's edge names: diagonal `x`,
/// then sides `y` (bottom), `z` (right), `v` (top), `w` (left).
pub fn flip_quadrilateral() -> SurfaceTri {
    SurfaceTri::build(vec![
        Triangle {
            id: "A".into(),
            edges: ["y".into(), "z".into(), "x".into()],
        },
        Triangle {
            id: "B".into(),
            edges: ["x".into(), "v".into(), "w".into()],
        },
    ])
    .unwrap()
}

// ---------------------------------------------------------------------------
// 3-manifolds
// ---------------------------------------------------------------------------

/// A (possibly boundary-having) ideal triangulation by tetrahedra.
///
/// Faces are named by the opposite local vertex; gluings carry an explicit
/// vertex bijection.  Each gluing record is ordered: `from` is the "top"
/// side (block 1) of the derived face suspension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceRef {
    pub tet: usize,
    pub face: usize,
}

#[derive(Clone, Debug)]
pub struct FaceGluing {
    pub name: String,
    pub from: FaceRef,
    pub to: FaceRef,
    /// vertex bijection: `map[v] = w` sends vertex `v` of the `from` face
    /// to vertex `w` of the `to` face; entries for the opposite vertices
    /// are unused and set to usize::MAX
    pub map: [usize; 4],
}

/// Opposite-edge pair labels within one tetrahedron, in the fixed cyclic
/// convention: `z` on {03,12}, `z'` on {01,23}, `z''` on {02,13}.
pub const PAIR_NAMES: [&str; 3] = ["z", "zp", "zpp"];

pub fn pair_of_edge(u: usize, v: usize) -> usize {
    match (u.min(v), u.max(v)) {
        (0, 3) | (1, 2) => 0,
        (0, 1) | (2, 3) => 1,
        (0, 2) | (1, 3) => 2,
        _ => panic!("not an edge"),
    }
}

/// Outward boundary cycle of the face opposite vertex `v` of a positively
/// oriented tetrahedron (0123).
pub fn face_cycle(v: usize) -> [usize; 3] {
    let rest: Vec<usize> = (0..4).filter(|&x| x != v).collect();
    if v.is_multiple_of(2) {
        [rest[0], rest[1], rest[2]]
    } else {
        [rest[0], rest[2], rest[1]]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct EdgeSlot {
    pub tet: usize,
    /// endpoints, sorted
    pub ends: [usize; 2],
}

impl EdgeSlot {
    pub fn new(tet: usize, a: usize, b: usize) -> Self {
        EdgeSlot {
            tet,
            ends: [a.min(b), a.max(b)],
        }
    }
    pub fn pair(&self) -> usize {
        pair_of_edge(self.ends[0], self.ends[1])
    }
    pub fn opposite(&self) -> EdgeSlot {
        let rest: Vec<usize> = (0..4).filter(|&x| !self.ends.contains(&x)).collect();
        EdgeSlot::new(self.tet, rest[0], rest[1])
    }
}

/// A bare edge cone: the half of the cone over `slot` lying in one face
/// suspension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BareCone {
    pub susp: usize,
    /// 0 = top block, 1 = bottom block
    pub block: usize,
    /// 0..3, position in the block's (a,b,c) cycle
    pub pos: usize,
}

#[derive(Clone, Debug)]
pub struct Suspension {
    pub name: String,
    pub top: FaceRef,
    pub bottom: FaceRef,
    /// edge slots under the top cones, in the outward cycle order of the
    /// top face: positions a, b, c
    pub top_slots: [EdgeSlot; 3],
    /// matched bottom edge slots, same positions
    pub bottom_slots: [EdgeSlot; 3],
}

#[derive(Clone, Debug)]
pub struct Mfld3 {
    pub tet_ids: Vec<String>,
    pub gluings: Vec<FaceGluing>,
    /// derived edge classes: lists of slots
    pub edge_classes: Vec<Vec<EdgeSlot>>,
    /// derived suspensions, one per gluing, same order
    pub suspensions: Vec<Suspension>,
}

impl Mfld3 {
    #[allow(clippy::needless_range_loop)]
    pub fn build(tet_ids: Vec<String>, gluings: Vec<FaceGluing>) -> Result<Mfld3, ComplexError> {
        let nt = tet_ids.len();
        {
            let mut seen = BTreeMap::new();
            for (i, id) in tet_ids.iter().enumerate() {
                if seen.insert(id.clone(), i).is_some() {
                    return Err(ComplexError::Malformed(format!("duplicate tet id {}", id)));
                }
            }
        }
        let mut used = vec![[false; 4]; nt];
        for g in &gluings {
            for fr in [&g.from, &g.to] {
                if fr.tet >= nt || fr.face > 3 {
                    return Err(ComplexError::Malformed(format!(
                        "face reference out of range in gluing {}",
                        g.name
                    )));
                }
                if used[fr.tet][fr.face] {
                    return Err(ComplexError::Malformed(format!(
                        "face ({},{}) glued twice",
                        fr.tet, fr.face
                    )));
                }
                used[fr.tet][fr.face] = true;
            }
            // the vertex bijection must send the `from` face onto the `to`
            // face and reverse the induced boundary orientation
            let fc = face_cycle(g.from.face);
            let tc = face_cycle(g.to.face);
            let img: Vec<usize> = fc.iter().map(|&v| g.map[v]).collect();
            let mut tverts = tc.to_vec();
            tverts.sort_unstable();
            let mut iverts = img.clone();
            iverts.sort_unstable();
            if tverts != iverts {
                return Err(ComplexError::Malformed(format!(
                    "gluing {} does not map face to face",
                    g.name
                )));
            }
            // orientation: img must be a cyclic rotation of the reversed
            // target cycle
            let rev = [tc[0], tc[2], tc[1]];
            let ok = (0..3).any(|r| (0..3).all(|i| img[i] == rev[(i + r) % 3]));
            if !ok {
                return Err(ComplexError::OrientationClash(g.name.clone()));
            }
        }
        // edge classes by union-find over slots
        let mut slots: Vec<EdgeSlot> = Vec::new();
        for t in 0..nt {
            for u in 0..4 {
                for v in (u + 1)..4 {
                    slots.push(EdgeSlot::new(t, u, v));
                }
            }
        }
        let index_of = |s: &EdgeSlot| -> usize { slots.iter().position(|x| x == s).unwrap() };
        let mut parent: Vec<usize> = (0..slots.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for g in &gluings {
            let fc = face_cycle(g.from.face);
            for i in 0..3 {
                let (u, v) = (fc[i], fc[(i + 1) % 3]);
                let s1 = EdgeSlot::new(g.from.tet, u, v);
                let s2 = EdgeSlot::new(g.to.tet, g.map[u], g.map[v]);
                let i1 = index_of(&s1);
                let i2 = index_of(&s2);
                let r1 = find(&mut parent, i1);
                let r2 = find(&mut parent, i2);
                if r1 != r2 {
                    parent[r1] = r2;
                }
            }
        }
        let mut class_map: BTreeMap<usize, Vec<EdgeSlot>> = BTreeMap::new();
        for (i, s) in slots.iter().enumerate() {
            class_map.entry(find(&mut parent, i)).or_default().push(*s);
        }
        let edge_classes: Vec<Vec<EdgeSlot>> = class_map.into_values().collect();
        // suspensions
        let suspensions = gluings
            .iter()
            .map(|g| {
                let fc = face_cycle(g.from.face);
                let top_slots = [
                    EdgeSlot::new(g.from.tet, fc[0], fc[1]),
                    EdgeSlot::new(g.from.tet, fc[1], fc[2]),
                    EdgeSlot::new(g.from.tet, fc[2], fc[0]),
                ];
                let bottom_slots = [
                    EdgeSlot::new(g.to.tet, g.map[fc[0]], g.map[fc[1]]),
                    EdgeSlot::new(g.to.tet, g.map[fc[1]], g.map[fc[2]]),
                    EdgeSlot::new(g.to.tet, g.map[fc[2]], g.map[fc[0]]),
                ];
                Suspension {
                    name: g.name.clone(),
                    top: g.from.clone(),
                    bottom: g.to.clone(),
                    top_slots,
                    bottom_slots,
                }
            })
            .collect();
        Ok(Mfld3 {
            tet_ids,
            gluings,
            edge_classes,
            suspensions,
        })
    }

    pub fn n_tets(&self) -> usize {
        self.tet_ids.len()
    }

    pub fn is_closed(&self) -> bool {
        self.gluings.len() * 2 == 4 * self.n_tets()
    }

    #[allow(clippy::needless_range_loop)]
    pub fn boundary_faces(&self) -> Vec<FaceRef> {
        let mut used = vec![[false; 4]; self.n_tets()];
        for g in &self.gluings {
            used[g.from.tet][g.from.face] = true;
            used[g.to.tet][g.to.face] = true;
        }
        let mut out = Vec::new();
        for t in 0..self.n_tets() {
            for f in 0..4 {
                if !used[t][f] {
                    out.push(FaceRef { tet: t, face: f });
                }
            }
        }
        out
    }

    pub fn suspension_index(&self, name: &str) -> Option<usize> {
        self.suspensions.iter().position(|s| s.name == name)
    }

    /// Which edge class a slot belongs to.
    pub fn class_of(&self, slot: &EdgeSlot) -> usize {
        self.edge_classes
            .iter()
            .position(|c| c.contains(slot))
            .expect("slot in some class")
    }

    /// True when every slot of the class lies on a glued face pair on both
    /// of its sides (interior edge).
    pub fn edge_is_interior(&self, class: usize) -> bool {
        self.edge_classes[class]
            .iter()
            .all(|s| self.cone_halves(s).iter().all(|h| h.is_some()))
    }

    /// The two halves of the cone over `slot`, in its two adjacent faces.
    /// A half is `None` when the adjacent face is unglued (boundary).
    pub fn cone_halves(&self, slot: &EdgeSlot) -> [Option<BareCone>; 2] {
        let others: Vec<usize> = (0..4).filter(|v| !slot.ends.contains(v)).collect();
        let mut out = [None, None];
        for (k, &w) in others.iter().enumerate() {
            let face = FaceRef {
                tet: slot.tet,
                face: w,
            };
            out[k] = self.locate_cone(&face, slot);
        }
        out
    }

    fn locate_cone(&self, face: &FaceRef, slot: &EdgeSlot) -> Option<BareCone> {
        for (si, s) in self.suspensions.iter().enumerate() {
            if s.top == *face {
                let pos = s.top_slots.iter().position(|x| x == slot)?;
                return Some(BareCone {
                    susp: si,
                    block: 0,
                    pos,
                });
            }
            if s.bottom == *face {
                let pos = s.bottom_slots.iter().position(|x| x == slot)?;
                return Some(BareCone {
                    susp: si,
                    block: 1,
                    pos,
                });
            }
        }
        None
    }

    /// Rank-6 face-suspension torus of one suspension.
    pub fn sf_torus(&self, susp: usize) -> Arc<QuantumTorus> {
        let s = &self.suspensions[susp];
        let gens: Vec<String> = (0..6)
            .map(|i| {
                let (block, pos) = (i / 3 + 1, i % 3);
                format!("{}.{}{}", s.name, ["a", "b", "c"][pos], block)
            })
            .collect();
        let mut m2 = vec![vec![0i64; 6]; 6];
        for p in 0..3 {
            let q = (p + 1) % 3;
            // block 1: <a1,b1> = -1 cyclically (b1 a1 = A a1 b1)
            m2[p][q] = -2;
            m2[q][p] = 2;
            // block 2: reversed
            m2[3 + p][3 + q] = 2;
            m2[3 + q][3 + p] = -2;
        }
        let sgn = vec![vec![0i64; 6]; 6];
        QuantumTorus::antisymmetric(&format!("Sf[{}]", s.name), gens, m2, sgn)
    }

    /// Tensor of all face-suspension tori (the ambient of the gluing
    /// module before quotients).
    pub fn big_sf_torus(&self) -> Arc<QuantumTorus> {
        let parts: Vec<Arc<QuantumTorus>> = (0..self.suspensions.len())
            .map(|i| self.sf_torus(i))
            .collect();
        let names: Vec<String> = self.suspensions.iter().map(|s| s.name.clone()).collect();
        let t = QuantumTorus::tensor("bigSf", &parts, Some(&names));
        // tensor() already prefixes with block names; strip the doubled
        // prefix by rebuilding names: keep as-is (suspension names appear
        // twice, harmless for computations; display only)
        t
    }

    pub fn bare_cone_index(&self, c: &BareCone) -> usize {
        6 * c.susp + 3 * c.block + c.pos
    }

    /// The square-root quantized shape parameter of the cone over `slot`,
    /// as an exponent vector in the big suspension torus.
    pub fn shape_vector(&self, slot: &EdgeSlot) -> Result<Vec<i64>, ComplexError> {
        let halves = self.cone_halves(slot);
        let mut v = vec![0i64; 6 * self.suspensions.len()];
        for h in halves {
            let h = h.ok_or_else(|| {
                ComplexError::Malformed(format!(
                    "edge cone ({}, {:?}) touches an unglued face",
                    self.tet_ids[slot.tet], slot.ends
                ))
            })?;
            v[self.bare_cone_index(&h)] += 1;
        }
        Ok(v)
    }

    /// Presentation torus of the gluing module: one rank-3 block per
    /// tetrahedron on the shape parameters `(z, z', z'')` with
    /// `z' z = A z z'` cyclically.
    pub fn shape_torus(&self) -> Arc<QuantumTorus> {
        let nt = self.n_tets();
        let mut gens = Vec::with_capacity(3 * nt);
        for id in &self.tet_ids {
            for p in PAIR_NAMES {
                gens.push(format!("{}.{}", id, p));
            }
        }
        let mut m2 = vec![vec![0i64; 3 * nt]; 3 * nt];
        for t in 0..nt {
            for p in 0..3 {
                let q = (p + 1) % 3;
                // z' z = A z z': c(z', z) = A so m2[q][p] = 2 for q = p+1
                m2[3 * t + q][3 * t + p] = 2;
                m2[3 * t + p][3 * t + q] = -2;
            }
        }
        let s = vec![vec![0i64; 3 * nt]; 3 * nt];
        QuantumTorus::antisymmetric("shape", gens, m2, s)
    }

    pub fn pair_index(&self, tet: usize, pair: usize) -> usize {
        3 * tet + pair
    }

    /// Exponent vector of the gluing monomial around an edge class, in
    /// shape (pair) coordinates, together with the cone count `k`.
    pub fn gluing_vector(&self, class: usize) -> (Vec<i64>, usize) {
        let mut v = vec![0i64; 3 * self.n_tets()];
        let slots = &self.edge_classes[class];
        for s in slots {
            v[self.pair_index(s.tet, s.pair())] += 1;
        }
        (v, slots.len())
    }

    /// The symbolic generalized angle structure, with the per-edge 2pi
    /// constraints recorded (not eagerly applied).
    pub fn symbolic_angles(&self) -> AngleStructure {
        let per_tet: Vec<[AngleExpr; 3]> = (0..self.n_tets())
            .map(|t| {
                [
                    AngleExpr::tet_slot(t as u32, 0),
                    AngleExpr::tet_slot(t as u32, 1),
                    AngleExpr::tet_slot(t as u32, 2),
                ]
            })
            .collect();
        AngleStructure::new(self, per_tet)
    }
}

/// An assignment of dihedral angles to the pairs of each tetrahedron.
#[derive(Clone, Debug)]
pub struct AngleStructure {
    pub per_tet: Vec<[AngleExpr; 3]>,
    /// recorded interior-edge constraints: each expression must equal 0
    pub edge_constraints: Vec<AngleExpr>,
}

impl AngleStructure {
    pub fn new(m: &Mfld3, per_tet: Vec<[AngleExpr; 3]>) -> AngleStructure {
        assert_eq!(per_tet.len(), m.n_tets());
        let mut edge_constraints = Vec::new();
        for (ci, slots) in m.edge_classes.iter().enumerate() {
            if !m.edge_is_interior(ci) {
                continue;
            }
            let mut sum = AngleExpr::pi(-Rat::from_integer(2));
            for s in slots {
                sum = sum.add(&per_tet[s.tet][s.pair()]);
            }
            edge_constraints.push(sum);
        }
        AngleStructure {
            per_tet,
            edge_constraints,
        }
    }

    pub fn angle(&self, tet: usize, pair: usize) -> &AngleExpr {
        &self.per_tet[tet][pair]
    }

    /// Numeric structures must satisfy the per-tet pi-sums and, on closed
    /// complexes, the 2pi edge sums; symbolic constraints are recorded only.
    pub fn validate(&self) -> Result<(), ComplexError> {
        for (t, tri) in self.per_tet.iter().enumerate() {
            let total = tri[0].add(&tri[1]).add(&tri[2]);
            if total.terms.is_empty() && total.pi_coeff != Rat::from_integer(1) {
                return Err(ComplexError::Malformed(format!(
                    "tet {} angles sum to {}pi",
                    t, total.pi_coeff
                )));
            }
        }
        for c in &self.edge_constraints {
            if c.terms.is_empty() && !c.pi_coeff.is_zero() {
                return Err(ComplexError::Malformed(
                    "edge angle sum differs from 2pi".into(),
                ));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// 2-3 Pachner move
// ---------------------------------------------------------------------------

/// The correspondence data of a 2-3 move applied at a glued face.
#[derive(Clone, Debug)]
pub struct PachnerMove {
    pub before: Mfld3,
    pub after: Mfld3,
    /// index of the replaced gluing in `before`
    pub gluing_index: usize,
    /// new tet index per ccw-consecutive equatorial pair
    pub new_tets: [usize; 3],
    /// the central edge slot in each new tet
    pub central_slots: [EdgeSlot; 3],
    /// the new interior edge class (of `after`) around the central edge
    pub central_class: usize,
    /// upper and lower old tets
    pub old_up: usize,
    pub old_down: usize,
    /// images of old edge cones: (pair of `before` tet) -> the two new
    /// slots over the chosen apex-edge representative
    pub cone_images: BTreeMap<(usize, usize), [EdgeSlot; 2]>,
    /// compatible angle structure on `after`
    pub angles_after: AngleStructure,
}

/// Applies a 2-3 move at the glued face `gluing`, producing the new
/// complex, the generator correspondence, and the compatible angle
/// structure with the supplied free parameter.
#[allow(clippy::needless_range_loop)]
pub fn pachner_2_3(
    m: &Mfld3,
    angles: &AngleStructure,
    gluing: usize,
    free: &AngleExpr,
) -> Result<PachnerMove, ComplexError> {
    let g = m.gluings[gluing].clone();
    let (t_up, t_dn) = (g.from.tet, g.to.tet);
    if t_up == t_dn {
        return Err(ComplexError::SelfAdjacentFace(g.name.clone()));
    }
    let a = g.from.face; // apex vertex of upper tet (opposite the glued face)
    let e = g.to.face; // apex vertex of lower tet
    let eq = face_cycle(g.from.face); // equatorial vertices in upper coords
                                      // new tets: T_i spans apexes and the ccw-consecutive pair (eq[i], eq[i+1])
    let n_old = m.n_tets();
    let keep: Vec<usize> = (0..n_old).filter(|&t| t != t_up && t != t_dn).collect();
    let mut tet_ids: Vec<String> = keep.iter().map(|&t| m.tet_ids[t].clone()).collect();
    let base = tet_ids.len();
    for i in 0..3 {
        tet_ids.push(format!("{}{}{}", m.tet_ids[t_up], m.tet_ids[t_dn], i));
    }
    let old_to_new = |t: usize| keep.iter().position(|&x| x == t);

    // local numbering of new tet i: 0 = top apex a, 1 = eq[i], 2 = eq[i+1],
    // 3 = bottom apex e.
    let mut gluings: Vec<FaceGluing> = Vec::new();
    // internal gluings: new tet i and i+1 share the face (a, e, eq[i+1])
    for i in 0..3 {
        let j = (i + 1) % 3;
        // in tet i, the shared face omits vertex eq[i] -> local face 1
        // in tet j, it omits eq[j+1] -> local face 2
        let mut map = [usize::MAX; 4];
        // vertices of the shared face: a, e, eq[j]; identity on ambient
        map[0] = 0; // a -> a
        map[3] = 3; // e -> e
        map[2] = 1; // eq[j] is local 2 in tet i, local 1 in tet j
        gluings.push(FaceGluing {
            name: format!("int{}", i),
            from: FaceRef {
                tet: base + i,
                face: 1,
            },
            to: FaceRef {
                tet: base + j,
                face: 2,
            },
            map,
        });
    }
    // external faces: upper tet faces opposite eq[i] become face 3
    // (omitting e... careful: new tet i contains a, e, eq[i], eq[i+1];
    // the old upper face opposite eq[j] has vertices {a} + eq minus eq[j],
    // i.e. {a, eq[j+1], eq[j+2]} which lies in the new tet spanned by
    // (eq[j+1], eq[j+2]) = new tet j+1, as its face omitting e (local 3).
    let up_face_new = |j: usize| -> (usize, usize) { (base + (j + 1) % 3, 3) };
    let dn_face_new = |j: usize| -> (usize, usize) { (base + (j + 1) % 3, 0) };
    // rewrite all old gluing records
    for (gi, og) in m.gluings.iter().enumerate() {
        if gi == gluing {
            continue;
        }
        let translate = |fr: &FaceRef| -> FaceRef {
            if fr.tet == t_up {
                let j = eq
                    .iter()
                    .position(|&x| x == fr.face)
                    .expect("face opposite equatorial vertex");
                let (nt, nf) = up_face_new(j);
                FaceRef { tet: nt, face: nf }
            } else if fr.tet == t_dn {
                let eqd: Vec<usize> = eq.iter().map(|&x| g.map[x]).collect();
                let j = eqd
                    .iter()
                    .position(|&x| x == fr.face)
                    .expect("face opposite equatorial vertex");
                let (nt, nf) = dn_face_new(j);
                FaceRef { tet: nt, face: nf }
            } else {
                FaceRef {
                    tet: old_to_new(fr.tet).unwrap(),
                    face: fr.face,
                }
            }
        };
        let nfrom = translate(&og.from);
        let nto = translate(&og.to);
        // rebuild the vertex map in new local coordinates
        let mut map = [usize::MAX; 4];
        let from_old_cycle = face_cycle(og.from.face);
        for &v in &from_old_cycle {
            let w = og.map[v];
            let nv = local_in_new(&g, t_up, t_dn, a, e, &eq, og.from.tet, v, nfrom.tet, base);
            let nw = local_in_new(&g, t_up, t_dn, a, e, &eq, og.to.tet, w, nto.tet, base);
            map[nv] = nw;
        }
        gluings.push(FaceGluing {
            name: og.name.clone(),
            from: nfrom,
            to: nto,
            map,
        });
    }
    let after = Mfld3::build(tet_ids, gluings)?;

    // cone images: for each pair of the old tets pick the apex-edge
    // representative and record the two new slots over it.
    let mut cone_images: BTreeMap<(usize, usize), [EdgeSlot; 2]> = BTreeMap::new();
    for pair in 0..3 {
        // upper tet: among the two edges of this pair, one touches the apex a
        let rep_up = pair_edges(pair)
            .into_iter()
            .map(|[u, v]| EdgeSlot::new(t_up, u, v))
            .find(|s| s.ends.contains(&a))
            .unwrap();
        let other = rep_up.ends.iter().copied().find(|&v| v != a).unwrap();
        let j = eq.iter().position(|&x| x == other).unwrap();
        // the apex edge (a, eq[j]) lies in new tets j and j-1
        let t1 = base + j;
        let t2 = base + (j + 2) % 3;
        let s1 = EdgeSlot::new(t1, 0, 1); // a with eq[j] as local 1 in tet j
        let s2 = EdgeSlot::new(t2, 0, 2); // a with eq[j] as local 2 in tet j-1
        cone_images.insert((t_up, pair), [s1, s2]);
        // lower tet: same story with e
        let eqd: Vec<usize> = eq.iter().map(|&x| g.map[x]).collect();
        let rep_dn = pair_edges(pair)
            .into_iter()
            .map(|[u, v]| EdgeSlot::new(t_dn, u, v))
            .find(|s| s.ends.contains(&e))
            .unwrap();
        let other = rep_dn.ends.iter().copied().find(|&v| v != e).unwrap();
        let j = eqd.iter().position(|&x| x == other).unwrap();
        let t1 = base + j;
        let t2 = base + (j + 2) % 3;
        let s1 = EdgeSlot::new(t1, 3, 1);
        let s2 = EdgeSlot::new(t2, 3, 2);
        cone_images.insert((t_dn, pair), [s1, s2]);
    }

    // central edge class
    let central_slots = [
        EdgeSlot::new(base, 0, 3),
        EdgeSlot::new(base + 1, 0, 3),
        EdgeSlot::new(base + 2, 0, 3),
    ];
    let central_class = after.class_of(&central_slots[0]);

    // compatible angle structure
    let mut per_tet: Vec<[AngleExpr; 3]> = Vec::new();
    for &t in &keep {
        per_tet.push(angles.per_tet[t].clone());
    }
    let th = |xy: EdgeSlot| -> AngleExpr { angles.per_tet[xy.tet][xy.pair()].clone() };
    let eqd: Vec<usize> = eq.iter().map(|&x| g.map[x]).collect();
    // new tet i central angle = theta(eq[i],eq[i+1]) + eta(eqd[i],eqd[i+1])
    let mu = |i: usize| -> AngleExpr {
        th(EdgeSlot::new(t_up, eq[i], eq[(i + 1) % 3])).add(&th(EdgeSlot::new(
            t_dn,
            eqd[i],
            eqd[(i + 1) % 3],
        )))
    };
    // free parameter: angle of new tet 0 at the apex edge (a, eq[0])
    // chain the remaining assignments through the apex-edge sums.
    let pi = AngleExpr::pi(Rat::from_integer(1));
    let mut tri_angles: Vec<[AngleExpr; 3]> = vec![
        [
            AngleExpr::default(),
            AngleExpr::default(),
            AngleExpr::default(),
        ],
        [
            AngleExpr::default(),
            AngleExpr::default(),
            AngleExpr::default(),
        ],
        [
            AngleExpr::default(),
            AngleExpr::default(),
            AngleExpr::default(),
        ],
    ];
    // pairs in new tet local coords: central edge (0,3) is pair 0;
    // (0,1)/(2,3) is pair 1; (0,2)/(1,3) is pair 2.
    // angle at (a, eq[i]) in new tet i sits on edge (0,1): pair 1.
    // angle at (a, eq[i+1]) in new tet i sits on edge (0,2): pair 2.
    for i in 0..3 {
        tri_angles[i][0] = mu(i);
    }
    tri_angles[0][1] = free.clone();
    // apex-edge sums: angle_i(pair1 at eq[i]) + angle_{i-1}(pair2 at eq[i])
    //   = old upper angle at (a, eq[i])
    for i in 0..3 {
        // complete tet i from its pair-1 angle
        tri_angles[i][2] = pi.sub(&tri_angles[i][0]).sub(&tri_angles[i][1]);
        if i < 2 {
            // apex edge (a, eq[i+1]): tet i+1 pair 1 + tet i pair 2 = theta(a,eq[i+1])
            let total = th(EdgeSlot::new(t_up, a, eq[(i + 1) % 3]));
            tri_angles[i + 1][1] = total.sub(&tri_angles[i][2]);
        }
    }
    // consistency: apex edge (a, eq[0]) sum must close up
    let closure = tri_angles[0][1]
        .add(&tri_angles[2][2])
        .sub(&th(EdgeSlot::new(t_up, a, eq[0])));
    if !closure.is_zero() {
        return Err(ComplexError::Malformed(
            "pachner angle chain does not close".into(),
        ));
    }
    for t in tri_angles {
        per_tet.push(t);
    }
    let angles_after = AngleStructure::new(&after, per_tet);

    Ok(PachnerMove {
        before: m.clone(),
        after,
        gluing_index: gluing,
        new_tets: [base, base + 1, base + 2],
        central_slots,
        central_class,
        old_up: t_up,
        old_down: t_dn,
        cone_images,
        angles_after,
    })
}

fn pair_edges(pair: usize) -> [[usize; 2]; 2] {
    match pair {
        0 => [[0, 3], [1, 2]],
        1 => [[0, 1], [2, 3]],
        2 => [[0, 2], [1, 3]],
        _ => panic!("bad pair"),
    }
}

#[allow(clippy::too_many_arguments)]
fn local_in_new(
    g: &FaceGluing,
    t_up: usize,
    t_dn: usize,
    a: usize,
    e: usize,
    eq: &[usize; 3],
    old_tet: usize,
    old_v: usize,
    new_tet: usize,
    base: usize,
) -> usize {
    if old_tet != t_up && old_tet != t_dn {
        return old_v;
    }
    let i = new_tet - base;
    let eq_pos = if old_tet == t_up {
        if old_v == a {
            return 0;
        }
        eq.iter().position(|&x| x == old_v).unwrap()
    } else {
        if old_v == e {
            return 3;
        }
        let eqd: Vec<usize> = eq.iter().map(|&x| g.map[x]).collect();
        eqd.iter().position(|&x| x == old_v).unwrap()
    };
    if eq_pos == i {
        1
    } else if eq_pos == (i + 1) % 3 {
        2
    } else {
        panic!("vertex not in the new tet")
    }
}

// ---------------------------------------------------------------------------
// built-in complexes
// ---------------------------------------------------------------------------

/// The standalone triangular bipyramid: two tetrahedra glued along one
/// face, all other faces free.
pub fn bipyramid() -> Mfld3 {
    // upper tet U (apex = vertex 0), lower tet D (apex = vertex 0);
    // glue U's face 0 to D's face 0 reversing orientation.
    // face_cycle(0) = (1,2,3); map must send it to a rotation of (1,3,2).
    let mut map = [usize::MAX; 4];
    map[1] = 1;
    map[2] = 3;
    map[3] = 2;
    Mfld3::build(
        vec!["U".into(), "D".into()],
        vec![FaceGluing {
            name: "eq".into(),
            from: FaceRef { tet: 0, face: 0 },
            to: FaceRef { tet: 1, face: 0 },
            map,
        }],
    )
    .expect("bipyramid data is valid")
}

/// The two-tetrahedron figure-eight knot complement, with the face
/// suspensions named N, S, E, W.  The knot presentation of the demo lives
/// in suspensions S and N.
pub fn figure_eight() -> Mfld3 {
    let g = |name: &str, ft: usize, ff: usize, tt: usize, tf: usize, pairs: [(usize, usize); 3]| {
        let mut map = [usize::MAX; 4];
        for (u, v) in pairs {
            map[u] = v;
        }
        FaceGluing {
            name: name.into(),
            from: FaceRef { tet: ft, face: ff },
            to: FaceRef { tet: tt, face: tf },
            map,
        }
    };
    Mfld3::build(
        vec!["Y".into(), "Z".into()],
        vec![
            // W: Y.f0 -> Z.f0, {1->2, 2->1, 3->3}
            g("W", 0, 0, 1, 0, [(1, 2), (2, 1), (3, 3)]),
            // E: Y.f2 -> Z.f2, {0->3, 1->1, 3->0}
            g("E", 0, 2, 1, 2, [(0, 3), (1, 1), (3, 0)]),
            // S: Y.f3 -> Z.f1, {0->3, 1->2, 2->0}; top side is the Y tet
            g("S", 0, 3, 1, 1, [(0, 3), (1, 2), (2, 0)]),
            // N: Z.f3 -> Y.f1, {0->3, 1->2, 2->0}; top side is the Z tet
            g("N", 1, 3, 0, 1, [(0, 3), (1, 2), (2, 0)]),
        ],
    )
    .expect("figure-eight data is valid")
}


/// A small closed two-tetrahedron complex with interior edges of
/// valences 2, 4, and 6 (a synthetic test complex, not a manifold census
/// entry).
pub fn valence_mix_complex() -> Mfld3 {
    let g = |name: &str, ff: usize, tf: usize, pairs: [(usize, usize); 3]| {
        let mut map = [usize::MAX; 4];
        for (u, v) in pairs {
            map[u] = v;
        }
        FaceGluing {
            name: name.into(),
            from: FaceRef { tet: 0, face: ff },
            to: FaceRef { tet: 1, face: tf },
            map,
        }
    };
    Mfld3::build(
        vec!["P".into(), "Q".into()],
        vec![
            g("f0", 0, 0, [(1, 1), (2, 3), (3, 2)]),
            g("f1", 1, 1, [(0, 0), (3, 2), (2, 3)]),
            g("f2", 2, 2, [(0, 0), (1, 3), (3, 1)]),
            g("f3", 3, 3, [(0, 0), (2, 1), (1, 2)]),
        ],
    )
    .expect("valence mix complex")
}

#[cfg(test)]
mod move_valences {
    use super::*;
    use crate::scalar::AngleId;

    fn interior_valences(m: &Mfld3) -> Vec<usize> {
        let mut ks: Vec<usize> = (0..m.edge_classes.len())
            .filter(|&c| m.edge_is_interior(c))
            .map(|c| m.edge_classes[c].len())
            .collect();
        ks.sort();
        ks
    }

    #[test]
    fn valence_mix_profile() {
        let m = valence_mix_complex();
        assert_eq!(interior_valences(&m), vec![2, 4, 6]);
    }

    #[test]
    fn moves_on_figure_eight_cover_small_valences() {
        let m = figure_eight();
        let ang = m.symbolic_angles();
        let free = AngleExpr::symbol(AngleId::named("zf"));
        let mv = pachner_2_3(&m, &ang, m.suspension_index("S").unwrap(), &free).unwrap();
        assert_eq!(interior_valences(&mv.after), vec![3, 6, 9]);
        let gi = mv.after.gluings.iter().position(|g| g.name == "N").unwrap();
        let free2 = AngleExpr::symbol(AngleId::named("zg"));
        let mv2 = pachner_2_3(&mv.after, &mv.angles_after, gi, &free2).unwrap();
        assert_eq!(interior_valences(&mv2.after), vec![3, 4, 5, 12]);
        mv2.angles_after.validate().unwrap();
    }
}

#[cfg(test)]
mod sf_block_tests {
    use super::*;
    use crate::qtorus::TorusElem;
    use crate::scalar::Scalar;

    #[test]
    fn suspension_block_relations() {
        let m = figure_eight();
        let sf = m.sf_torus(0);
        // block 1: a1 b1 = A^-1 b1 a1; block 2 reversed
        let a1 = TorusElem::generator(&sf, 0);
        let b1 = TorusElem::generator(&sf, 1);
        assert_eq!(
            a1.mul(&b1).unwrap(),
            b1.mul(&a1).unwrap().scale(&Scalar::a_pow(-1))
        );
        let a2 = TorusElem::generator(&sf, 3);
        let b2 = TorusElem::generator(&sf, 4);
        assert_eq!(
            a2.mul(&b2).unwrap(),
            b2.mul(&a2).unwrap().scale(&Scalar::a_pow(1))
        );
    }
}
