//! The 2d quantum trace: extended-triangle weights of stated corner arcs,
//! the state-sum trace of split surface presentations into the edge-class
//! torus, and the flip transition map on Laurent-expressible even
//! monomials.

use std::sync::Arc;

use crate::complex::SurfaceTri;
use crate::error::TraceError;
use crate::qtorus::{QuantumTorus, TorusElem};
use crate::scalar::Scalar;
use crate::uvir2d::{extended_triangle_torus, Corner};

/// Images of stated corner arcs in the extended triangle algebra.
///
/// The two pure states are the paper's generators; the good mixed state is
/// derived by pushing the reduced-algebra relation through the trace (the
/// scaling constants cancel); the bad mixed state is zero.
pub struct TriangleWeights {
    pub torus: Arc<QuantumTorus>,
    ct: Scalar,
}

impl TriangleWeights {
    pub fn new(ct: &Scalar) -> Result<TriangleWeights, TraceError> {
        // require invertibility up front
        ct.inverse().map_err(crate::error::TorusError::Scalar)?;
        Ok(TriangleWeights {
            torus: extended_triangle_torus("T~"),
            ct: ct.clone(),
        })
    }

    /// Weight of a stated corner arc; states in corner end order.
    pub fn weight(&self, corner: Corner, states: [i8; 2]) -> Result<TorusElem, TraceError> {
        let (i, j) = corner.ends();
        let mut v = vec![0i64; 3];
        match states {
            [1, 1] => {
                v[i] = 1;
                v[j] = 1;
                Ok(TorusElem::monomial(&self.torus, v, self.ct.clone())?)
            }
            [-1, -1] => {
                v[i] = -1;
                v[j] = -1;
                let s = self
                    .ct
                    .inverse()
                    .map_err(crate::error::TorusError::Scalar)?;
                Ok(TorusElem::monomial(&self.torus, v, s)?)
            }
            [-1, 1] => {
                // derived: the weyl product of the (+,+) weight of the next
                // corner and the (-,-) weight of the one after; constants
                // cancel and the exponent is (second end) - (first end).
                let (c1, c2) = match corner {
                    Corner::Alpha => (Corner::Beta, Corner::Gamma),
                    Corner::Beta => (Corner::Gamma, Corner::Alpha),
                    Corner::Gamma => (Corner::Alpha, Corner::Beta),
                };
                let w1 = self.weight(c1, [1, 1])?;
                let w2 = self.weight(c2, [-1, -1])?;
                let (v1, s1) = w1.terms.iter().next().unwrap();
                let (v2, s2) = w2.terms.iter().next().unwrap();
                let sum: Vec<i64> = v1.iter().zip(v2.iter()).map(|(a, b)| a + b).collect();
                Ok(TorusElem::monomial(&self.torus, sum, s1.mul(s2))?)
            }
            [1, -1] => Ok(TorusElem::zero(&self.torus)),
            _ => Err(TraceError::UnresolvedState),
        }
    }
}

/// Endpoint of a strand: a fixed state, a shared state variable, or its
/// negation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateRef {
    Fixed(i8),
    Var(usize),
    NegVar(usize),
}

/// One corner-arc strand of a split surface presentation.  The
/// orientation is carried for the gl1 factor of the projection; the
/// unoriented trace ignores it.
#[derive(Clone, Debug)]
pub struct Strand2D {
    pub tri: usize,
    pub corner: Corner,
    pub orient: crate::uvir2d::Orient,
    pub ends: [StateRef; 2],
}

/// A link pre-split into triangles: per-triangle ordered corner words with
/// state variables shared across interior edges, and a prefactor table of
/// `q^(c * eps / 2)` factors.
#[derive(Clone, Debug, Default)]
pub struct Presentation2D {
    pub strands: Vec<Strand2D>,
    pub n_vars: usize,
    /// `(var, c)` contributes `q^(c * eps_var / 2)` to the prefactor
    pub prefactor: Vec<(usize, i64)>,
}

impl Presentation2D {
    fn resolve(&self, assignment: &[i8]) -> Vec<(usize, Corner, [i8; 2])> {
        self.strands
            .iter()
            .map(|s| {
                let st = s.ends.map(|e| match e {
                    StateRef::Fixed(x) => x,
                    StateRef::Var(v) => assignment[v],
                    StateRef::NegVar(v) => -assignment[v],
                });
                (s.tri, s.corner, st)
            })
            .collect()
    }

    fn prefactor_scalar(&self, assignment: &[i8]) -> Scalar {
        let mut s = Scalar::one();
        for (v, c) in &self.prefactor {
            s = s.mul(&Scalar::q_half_pow(c * assignment[*v] as i64));
        }
        s
    }

    /// Validates that every state variable is used exactly twice, on
    /// endpoint slots lying over the two bare sides of one interior edge.
    pub fn validate(&self, surf: &SurfaceTri) -> Result<(), TraceError> {
        let mut uses: Vec<Vec<usize>> = vec![Vec::new(); self.n_vars];
        for (si, s) in self.strands.iter().enumerate() {
            if s.tri >= surf.triangles.len() {
                return Err(TraceError::InvalidPresentation(format!(
                    "strand {} references missing triangle",
                    si
                )));
            }
            let (e1, e2) = s.corner.ends();
            for (k, end) in s.ends.iter().enumerate() {
                let v = match end {
                    StateRef::Var(v) | StateRef::NegVar(v) => *v,
                    StateRef::Fixed(_) => continue,
                };
                if v >= self.n_vars {
                    return Err(TraceError::InvalidPresentation(format!(
                        "variable {} out of range",
                        v
                    )));
                }
                let side = if k == 0 { e1 } else { e2 };
                let name = &surf.triangles[s.tri].edges[side];
                let class = surf.edge_index(name).unwrap();
                uses[v].push(class);
            }
        }
        for (v, u) in uses.iter().enumerate() {
            if u.len() != 2 || u[0] != u[1] {
                return Err(TraceError::InvalidPresentation(format!(
                    "variable {} must pair two points across one interior edge",
                    v
                )));
            }
            if surf.edge_classes[u[0]].1.len() != 2 {
                return Err(TraceError::InvalidPresentation(format!(
                    "variable {} sits on a boundary edge",
                    v
                )));
            }
        }
        Ok(())
    }
}

/// Pushes a monomial element of the bare torus into edge-class
/// coordinates; every class must carry equal exponents on its bare slots.
pub fn bare_to_class(
    surf: &SurfaceTri,
    sqts: &Arc<QuantumTorus>,
    elem: &TorusElem,
) -> Result<TorusElem, TraceError> {
    let mut out = TorusElem::zero(sqts);
    for (v, s) in &elem.terms {
        let mut w = vec![0i64; sqts.rank()];
        for (ci, (_, slots)) in surf.edge_classes.iter().enumerate() {
            let exps: Vec<i64> = slots.iter().map(|sl| v[3 * sl.tri + sl.side]).collect();
            if exps.windows(2).any(|p| p[0] != p[1]) {
                return Err(TraceError::InvalidPresentation(format!(
                    "unbalanced exponents on edge {}",
                    surf.edge_classes[ci].0
                )));
            }
            w[ci] = exps[0];
        }
        out = out.add(&TorusElem::monomial(sqts, w, s.clone())?)?;
    }
    Ok(out)
}

/// The 2d quantum trace of a split presentation: the state sum of
/// prefactored per-triangle weights, pushed into the edge-class torus.
pub fn trace_surface(
    surf: &SurfaceTri,
    pres: &Presentation2D,
    ct: &Scalar,
) -> Result<TorusElem, TraceError> {
    if !surf.is_closed() {
        return Err(TraceError::Complex(crate::error::ComplexError::HasBoundary));
    }
    pres.validate(surf)?;
    trace_surface_unchecked(surf, pres, ct)
}

/// The same state sum without the closedness requirement (used for local
/// verification on bordered pieces).
pub fn trace_surface_unchecked(
    surf: &SurfaceTri,
    pres: &Presentation2D,
    ct: &Scalar,
) -> Result<TorusElem, TraceError> {
    let weights = TriangleWeights::new(ct)?;
    let bare = surf.bare_torus();
    let sqts = surf.sqts_torus();
    let mut total = TorusElem::zero(&sqts);
    for mask in 0..(1u32 << pres.n_vars) {
        let assignment: Vec<i8> = (0..pres.n_vars)
            .map(|i| if mask & (1 << i) != 0 { 1 } else { -1 })
            .collect();
        let resolved = pres.resolve(&assignment);
        // per-triangle word products, in presentation order
        let mut per_tri: Vec<TorusElem> = (0..surf.triangles.len())
            .map(|_| TorusElem::one(&weights.torus))
            .collect();
        let mut dead = false;
        for (tri, corner, states) in resolved {
            let w = weights.weight(corner, states)?;
            if w.is_zero() {
                dead = true;
                break;
            }
            per_tri[tri] = per_tri[tri].mul(&w)?;
        }
        if dead {
            continue;
        }
        // assemble in the bare torus
        let mut big = TorusElem::one(&bare);
        for (ti, e) in per_tri.iter().enumerate() {
            let mut emb = TorusElem::zero(&bare);
            for (v, s) in &e.terms {
                let mut w = vec![0i64; bare.rank()];
                w[3 * ti..3 * ti + 3].copy_from_slice(v);
                emb = emb.add(&TorusElem::monomial(&bare, w, s.clone())?)?;
            }
            big = big.mul(&emb)?;
        }
        let classed = bare_to_class(surf, &sqts, &big)?;
        let pref = pres.prefactor_scalar(&assignment);
        total = total.add(&classed.scale(&pref))?;
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// flip transition on the even part
// ---------------------------------------------------------------------------

/// The explicit transition table on the even part for a flip on the edge
/// named `x` (shorthand for [`flip_even_at`]).
pub fn flip_even(
    before: &SurfaceTri,
    after: &SurfaceTri,
    elem: &TorusElem,
) -> Result<TorusElem, TraceError> {
    flip_even_at(before, "x", after, elem)
}

/// The explicit transition table on the even part for a flip on `edge`.
///
/// The quadrilateral roles (diagonal, bottom, right, top, left) are
/// derived from the triangulation around the flipped edge, so the map
/// composes across successive flips.  Input and output live in the
/// edge-class tori of the two triangulations; only monomials matching a
/// table row (or a 180-degree rotation, or the inverse of a row with
/// monomial image) times a commuting away-part are accepted.  Rows whose
/// image has the denominator `x' + x'^-1` raise `NonLaurentImage`.
pub fn flip_even_at(
    before: &SurfaceTri,
    edge: &str,
    after: &SurfaceTri,
    elem: &TorusElem,
) -> Result<TorusElem, TraceError> {
    let sqts_b = before.sqts_torus();
    let sqts_a = after.sqts_torus();
    let need = |surf: &SurfaceTri, n: &str| -> Result<usize, TraceError> {
        surf.edge_index(n)
            .ok_or_else(|| TraceError::InvalidPresentation(format!("missing edge {}", n)))
    };
    // derive the quadrilateral roles around the flipped diagonal: with the
    // two triangles rotated to (x, b, c) and (x, d, a), the roles are
    // y = b (bottom), z = c (right), v = d (top), w = a (left)
    let xb0 = need(before, edge)?;
    let slots = &before.edge_classes[xb0].1;
    if slots.len() != 2 {
        return Err(TraceError::Complex(
            crate::error::ComplexError::BoundaryEdge(edge.to_string()),
        ));
    }
    if slots[0].tri == slots[1].tri {
        return Err(TraceError::Complex(crate::error::ComplexError::SelfGlued(
            edge.to_string(),
        )));
    }
    let rot_name = |slot: crate::complex::Slot, k: usize| -> &str {
        let t = &before.triangles[slot.tri];
        &t.edges[(slot.side + k) % 3]
    };
    let (name_y, name_z) = (rot_name(slots[0], 1), rot_name(slots[0], 2));
    let (name_v, name_w) = (rot_name(slots[1], 1), rot_name(slots[1], 2));
    let xb = xb0;
    let (yb, zb, vb, wb) = (
        need(before, name_y)?,
        need(before, name_z)?,
        need(before, name_v)?,
        need(before, name_w)?,
    );
    let diag_after = format!("{}'", edge);
    let (xa, ya, za, va, wa) = (
        need(after, &diag_after)?,
        need(after, name_y)?,
        need(after, name_z)?,
        need(after, name_v)?,
        need(after, name_w)?,
    );
    let mut out = TorusElem::zero(&sqts_a);
    for (v, s) in &elem.terms {
        let quad = [v[wb], v[xb], v[yb], v[zb], v[vb]];
        // away part: all other classes, transported by name
        let mut away = vec![0i64; sqts_a.rank()];
        let mut away_b = vec![0i64; sqts_b.rank()];
        for (ci, (name, _)) in before.edge_classes.iter().enumerate() {
            if [xb, yb, zb, vb, wb].contains(&ci) {
                continue;
            }
            if v[ci] != 0 {
                let cj = need(after, name)?;
                away[cj] = v[ci];
                away_b[ci] = v[ci];
            }
        }
        // the away part must commute with the whole quadrilateral block
        for qi in [xb, yb, zb, vb, wb] {
            if !sqts_b.commutation(&away_b, &sqts_b.basis(qi)).is_one() {
                return Err(TraceError::NotEven);
            }
        }
        // evenness: per-triangle degree of the quadrilateral part
        let (kw, kx, ky, kz, kv) = (quad[0], quad[1], quad[2], quad[3], quad[4]);
        if (kx + ky + kz) % 2 != 0 || (kx + kv + kw) % 2 != 0 {
            return Err(TraceError::NotEven);
        }
        // peel even diagonal powers: the diagonal itself maps to an
        // inverse monomial, and the transition is an algebra map, so
        // x_v = C^-1 x_(v - u e_x) x_(u e_x) transports factor-wise
        let residual = if kx.abs() >= 2 {
            if kx % 2 == 0 {
                0
            } else {
                kx.signum()
            }
        } else {
            kx
        };
        let peel = kx - residual;
        let correction = if peel != 0 {
            let mut rest = v.clone();
            rest[xb] -= peel;
            let mut step = vec![0i64; sqts_b.rank()];
            step[xb] = peel;
            sqts_b
                .cocycle(&rest, &step)
                .inverse()
                .map_err(crate::error::TorusError::Scalar)?
        } else {
            Scalar::one()
        };
        let image = flip_table_image(&sqts_a, (kw, residual, ky, kz, kv), (wa, xa, ya, za, va))?;
        let peeled_image = TorusElem::gen_pow(&sqts_a, xa, -peel);
        let away_mono = TorusElem::monomial(&sqts_a, away, Scalar::one())?;
        out = out.add(
            &image
                .mul(&peeled_image)?
                .mul(&away_mono)?
                .scale(&s.mul(&correction)),
        )?;
    }
    Ok(out)
}

/// Matches the quadrilateral exponent pattern against the transition table.
fn flip_table_image(
    sqts_a: &Arc<QuantumTorus>,
    (kw, kx, ky, kz, kv): (i64, i64, i64, i64, i64),
    (wa, xa, ya, za, va): (usize, usize, usize, usize, usize),
) -> Result<TorusElem, TraceError> {
    let mono = |exps: &[(usize, i64)]| -> Result<TorusElem, TraceError> {
        let mut v = vec![0i64; sqts_a.rank()];
        for (i, k) in exps {
            v[*i] += k;
        }
        Ok(TorusElem::monomial(sqts_a, v, Scalar::one())?)
    };
    let gen = |i: usize, k: i64| TorusElem::gen_pow(sqts_a, i, k);
    // ordered product helper
    let prod = |parts: &[TorusElem]| -> Result<TorusElem, TraceError> {
        let mut acc = TorusElem::one(sqts_a);
        for p in parts {
            acc = acc.mul(p)?;
        }
        Ok(acc)
    };
    // the split two-term middle factor x' + x'^-1
    let xmid = |k: i64| -> Result<TorusElem, TraceError> { Ok(gen(xa, k).add(&gen(xa, -k))?) };
    // try the base orientation and the 180-degree rotation (y<->v, z<->w)
    for rot in [false, true] {
        let (pw, px, py, pz, pv) = if rot {
            (kz, kx, kv, kw, ky)
        } else {
            (kw, kx, ky, kz, kv)
        };
        let (rw, rx, ry, rz, rv) = if rot {
            (za, xa, va, wa, ya)
        } else {
            (wa, xa, ya, za, va)
        };
        // [y z]^t, t = +-1 -> [y x' z]^t  (Laurent both ways)
        if (pw, px, pv) == (0, 0, 0) && py == pz && py.abs() == 1 {
            return mono(&[(ry, py), (rx, py), (rz, py)]);
        }
        // [y^-1 z] -> y^-1 (x' + x'^-1) z; inverse image not Laurent
        if (pw, px, pv) == (0, 0, 0) && py == -1 && pz == 1 {
            return prod(&[gen(ry, -1), xmid(1)?, gen(rz, 1)]);
        }
        if (pw, px, pv) == (0, 0, 0) && py == 1 && pz == -1 {
            return Err(TraceError::NonLaurentImage);
        }
        // [w x y]^t -> [w y]^t
        if (pz, pv) == (0, 0) && pw == px && px == py && pw.abs() == 1 {
            return mono(&[(rw, pw), (ry, pw)]);
        }
        // [w x^-1 y]^t -> [w x'^2 y]^t
        if (pz, pv) == (0, 0) && pw == py && px == -pw && pw.abs() == 1 {
            return mono(&[(rw, pw), (rx, 2 * pw), (ry, pw)]);
        }
        // [w^-1 x y], [w^-1 x^-1 y]: denominators
        if (pz, pv) == (0, 0) && pw == -py && py.abs() == 1 && px.abs() == 1 {
            return Err(TraceError::NonLaurentImage);
        }
        // [y x v], [y x^-1 v]: denominators
        if (pw, pz) == (0, 0) && py == pv && py == 1 && px.abs() == 1 {
            return Err(TraceError::NonLaurentImage);
        }
        // [y^-1 x v]^t -> [y^-1 x'^-1 v]^t ; [y^-1 x^-1 v]^t -> [y^-1 x' v]^t
        if (pw, pz) == (0, 0) && py == -pv && pv.abs() == 1 && px == pv {
            return mono(&[(ry, -pv), (rx, -pv), (rv, pv)]);
        }
        if (pw, pz) == (0, 0) && py == -pv && pv.abs() == 1 && px == -pv {
            return mono(&[(ry, -pv), (rx, pv), (rv, pv)]);
        }
        // [w x z] -> w (x' + x'^-1) z ; inverse not Laurent
        if (py, pv) == (0, 0) && pw == 1 && pz == 1 && px == 1 {
            return prod(&[gen(rw, 1), xmid(1)?, gen(rz, 1)]);
        }
        if (py, pv) == (0, 0) && pw == -1 && pz == -1 && px == -1 {
            return Err(TraceError::NonLaurentImage);
        }
        // [w x^-1 z] -> w x'^2 (x' + x'^-1) z ; inverse not Laurent
        if (py, pv) == (0, 0) && pw == 1 && pz == 1 && px == -1 {
            return prod(&[gen(rw, 1), gen(rx, 2), xmid(1)?, gen(rz, 1)]);
        }
        if (py, pv) == (0, 0) && pw == -1 && pz == -1 && px == 1 {
            return Err(TraceError::NonLaurentImage);
        }
        // [w^-1 x z]^t -> [w^-1 x'^-1 z]^t ; [w^-1 x^-1 z]^t -> [w^-1 x' z]^t
        if (py, pv) == (0, 0) && pw == -pz && pz.abs() == 1 && px == pz {
            return mono(&[(rw, -pz), (rx, -pz), (rz, pz)]);
        }
        if (py, pv) == (0, 0) && pw == -pz && pz.abs() == 1 && px == -pz {
            return mono(&[(rw, -pz), (rx, pz), (rz, pz)]);
        }
    }
    // the identity monomial
    if (kw, kx, ky, kz, kv) == (0, 0, 0, 0, 0) {
        return Ok(TorusElem::one(sqts_a));
    }
    Err(TraceError::NotEven)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::flip_quadrilateral;

    fn quad_and_flip() -> (SurfaceTri, SurfaceTri) {
        let q = flip_quadrilateral();
        let f = q.flip("x").unwrap();
        (q, f)
    }

    #[test]
    fn table_row_yz() {
        let (q, f) = quad_and_flip();
        let sq = q.sqts_torus();
        let sf = f.sqts_torus();
        let mut v = vec![0i64; sq.rank()];
        v[q.edge_index("y").unwrap()] = 1;
        v[q.edge_index("z").unwrap()] = 1;
        let m = TorusElem::monomial(&sq, v, Scalar::one()).unwrap();
        let img = flip_even(&q, &f, &m).unwrap();
        let mut w = vec![0i64; sf.rank()];
        w[f.edge_index("y").unwrap()] = 1;
        w[f.edge_index("x'").unwrap()] = 1;
        w[f.edge_index("z").unwrap()] = 1;
        assert_eq!(img, TorusElem::monomial(&sf, w, Scalar::one()).unwrap());
    }

    #[test]
    fn table_row_wxinv_y() {
        let (q, f) = quad_and_flip();
        let sq = q.sqts_torus();
        let sf = f.sqts_torus();
        let mut v = vec![0i64; sq.rank()];
        v[q.edge_index("w").unwrap()] = 1;
        v[q.edge_index("x").unwrap()] = -1;
        v[q.edge_index("y").unwrap()] = 1;
        let m = TorusElem::monomial(&sq, v, Scalar::one()).unwrap();
        let img = flip_even(&q, &f, &m).unwrap();
        let mut w = vec![0i64; sf.rank()];
        w[f.edge_index("w").unwrap()] = 1;
        w[f.edge_index("x'").unwrap()] = 2;
        w[f.edge_index("y").unwrap()] = 1;
        assert_eq!(img, TorusElem::monomial(&sf, w, Scalar::one()).unwrap());
    }

    #[test]
    fn non_laurent_rows_error() {
        let (q, f) = quad_and_flip();
        let sq = q.sqts_torus();
        let mut v = vec![0i64; sq.rank()];
        v[q.edge_index("w").unwrap()] = -1;
        v[q.edge_index("x").unwrap()] = 1;
        v[q.edge_index("y").unwrap()] = 1;
        let m = TorusElem::monomial(&sq, v, Scalar::one()).unwrap();
        assert!(matches!(
            flip_even(&q, &f, &m),
            Err(TraceError::NonLaurentImage)
        ));
    }

    #[test]
    fn flip_then_inverse_flip_is_identity_on_yz() {
        let (q, f) = quad_and_flip();
        // flipping f on x' gives a triangulation with diagonal x''; the
        // composite on [y z] returns [y x' z] -> [y z]-type; here check
        // the involution at the table level: [y z] -> [y x' z] -> ?
        // The inverse flip's table sends [y x' z] (pattern w x z under the
        // role reassignment) appropriately; covered by naturality tests.
        let sq = q.sqts_torus();
        let mut v = vec![0i64; sq.rank()];
        v[q.edge_index("y").unwrap()] = 1;
        v[q.edge_index("z").unwrap()] = 1;
        let m = TorusElem::monomial(&sq, v, Scalar::q_half_pow(1)).unwrap();
        let img = flip_even(&q, &f, &m).unwrap();
        assert_eq!(img.terms.len(), 1);
        let (_, s) = img.terms.iter().next().unwrap();
        assert_eq!(s, &Scalar::q_half_pow(1));
    }

    #[test]
    fn empty_presentation_traces_to_one() {
        // glue two quadrilaterals' worth of triangles into a closed surface:
        // use the once-punctured torus (all three edges interior)
        let s = SurfaceTri::build(vec![
            crate::complex::Triangle {
                id: "P".into(),
                edges: ["e1".into(), "e2".into(), "e3".into()],
            },
            crate::complex::Triangle {
                id: "Q".into(),
                edges: ["e1".into(), "e2".into(), "e3".into()],
            },
        ])
        .unwrap();
        assert!(s.is_closed());
        let pres = Presentation2D::default();
        let t = trace_surface(&s, &pres, &Scalar::one()).unwrap();
        let sqts = s.sqts_torus();
        assert_eq!(t, TorusElem::one(&sqts));
    }

    #[test]
    fn corner_arc_traces_to_weyl_monomial() {
        // on the bordered quadrilateral, the (+,+) corner arc in triangle A
        // between y and z maps to [y z] at ct = 1
        let q = flip_quadrilateral();
        let pres = Presentation2D {
            strands: vec![Strand2D {
                tri: 0,
                corner: Corner::Gamma, // triangle A edges are (y, z, x): gamma connects y,z
                orient: crate::uvir2d::Orient::Fwd,
                ends: [StateRef::Fixed(1), StateRef::Fixed(1)],
            }],
            n_vars: 0,
            prefactor: vec![],
        };
        let t = trace_surface_unchecked(&q, &pres, &Scalar::one()).unwrap();
        let sqts = q.sqts_torus();
        let mut v = vec![0i64; sqts.rank()];
        v[q.edge_index("y").unwrap()] = 1;
        v[q.edge_index("z").unwrap()] = 1;
        assert_eq!(t, TorusElem::monomial(&sqts, v, Scalar::one()).unwrap());
    }

    #[test]
    fn weights_multiply_like_the_reduced_triangle() {
        // beta_pp * alpha_pp = A * alpha_pp * beta_pp under the trace
        let w = TriangleWeights::new(&Scalar::one()).unwrap();
        let a = w.weight(Corner::Alpha, [1, 1]).unwrap();
        let b = w.weight(Corner::Beta, [1, 1]).unwrap();
        let lhs = b.mul(&a).unwrap();
        let rhs = a.mul(&b).unwrap().scale(&Scalar::a_pow(1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn bad_arc_weight_is_zero() {
        let w = TriangleWeights::new(&Scalar::one()).unwrap();
        assert!(w.weight(Corner::Alpha, [1, -1]).unwrap().is_zero());
    }

    #[test]
    fn mixed_weight_is_derived_monomial() {
        let w = TriangleWeights::new(&Scalar::q_half_pow(-1)).unwrap();
        let m = w.weight(Corner::Alpha, [-1, 1]).unwrap();
        // alpha mixed: exponent c - b, no constant factor
        let expect = TorusElem::monomial(&w.torus, vec![0, -1, 1], Scalar::one()).unwrap();
        assert_eq!(m, expect);
    }
}

#[cfg(test)]
mod flip_composition_tests {
    use super::*;
    use crate::complex::flip_quadrilateral;

    #[test]
    fn flip_then_inverse_flip_fixes_laurent_rows() {
        let q = flip_quadrilateral();
        let f1 = q.flip("x").unwrap();
        let f2 = f1.flip("x'").unwrap();
        let sq = q.sqts_torus();
        // mutually-Laurent monomials from the table and their inverses
        let rows: Vec<Vec<(&str, i64)>> = vec![
            vec![("y", 1), ("z", 1)],
            vec![("y", -1), ("z", -1)],
            vec![("v", 1), ("w", 1)],
            vec![("w", 1), ("x", 1), ("y", 1)],
            vec![("w", 1), ("x", -1), ("y", 1)],
            vec![("y", -1), ("x", 1), ("v", 1)],
            vec![("w", -1), ("x", -1), ("z", 1)],
        ];
        for row in rows {
            let mut v = vec![0i64; sq.rank()];
            for (n, k) in &row {
                v[q.edge_index(n).unwrap()] += k;
            }
            let m = TorusElem::monomial(&sq, v.clone(), Scalar::q_half_pow(1)).unwrap();
            let once = flip_even_at(&q, "x", &f1, &m).unwrap();
            let twice = flip_even_at(&f1, "x'", &f2, &once).unwrap();
            // the double image equals the original, transported to the
            // doubly-flipped torus (x -> x'')
            let sqf2 = f2.sqts_torus();
            let mut w = vec![0i64; sqf2.rank()];
            for (n, k) in &row {
                let name = if *n == "x" { "x''" } else { n };
                w[f2.edge_index(name).unwrap()] += k;
            }
            let expect = TorusElem::monomial(&sqf2, w, Scalar::q_half_pow(1)).unwrap();
            assert_eq!(twice, expect, "row {:?}", row);
        }
    }
}
