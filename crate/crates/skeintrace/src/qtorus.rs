//! Quantum tori over exponent lattices, with exact scalar coefficients.
//!
//! A torus is a lattice `Z^n` together with a bilinear product cocycle
//! `C(u,v) = z^(u^T Z v) * A^(u^T Q v / 4)`, so that basis symbols multiply
//! as `x_u * x_v = C(u,v) * x_(u+v)`.  For the quantum tori of the trace
//! maps the cocycle is the antisymmetric half-commutation form and `x_u`
//! is the Weyl symbol of `u`; web-basis module algebras use general
//! (non-antisymmetric) cocycles.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::TorusError;
use crate::hnf;
use crate::scalar::Scalar;

/// Shared description of a quantum torus.
#[derive(Debug, PartialEq, Eq)]
pub struct QuantumTorus {
    pub name: String,
    pub gens: Vec<String>,
    /// A-exponent of the product cocycle, in quarter units: `A^(u^T Q v / 4)`.
    q4: Vec<Vec<i64>>,
    /// zeta-exponent of the product cocycle, mod 4: `z^(u^T Z v)`.
    zc: Vec<Vec<i64>>,
    /// whether the cocycle came from an antisymmetric commutation form
    weyl_normalized: bool,
}

impl QuantumTorus {
    /// Torus with antisymmetric commutation data: the product cocycle is
    /// `C(e_i, e_j) = z^(zq[i][j]) A^(m2[i][j]/4)` with both matrices
    /// antisymmetric (`zq` mod 4), so generators commute as
    /// `x_i x_j = z^(2 zq[i][j]) A^(m2[i][j]/2) x_j x_i` and basis symbols
    /// are Weyl-ordered.
    pub fn antisymmetric(
        name: &str,
        gens: Vec<String>,
        m2: Vec<Vec<i64>>,
        zq: Vec<Vec<i64>>,
    ) -> Arc<QuantumTorus> {
        let n = gens.len();
        assert_eq!(m2.len(), n);
        assert_eq!(zq.len(), n);
        for i in 0..n {
            assert_eq!(m2[i].len(), n);
            assert_eq!(zq[i].len(), n);
            assert_eq!(m2[i][i], 0, "diagonal of the A-form must vanish");
            assert_eq!(
                zq[i][i].rem_euclid(4),
                0,
                "diagonal of the phase form must vanish"
            );
            for j in 0..n {
                assert_eq!(m2[i][j], -m2[j][i], "A-form must be antisymmetric");
                assert_eq!(
                    (zq[i][j] + zq[j][i]).rem_euclid(4),
                    0,
                    "phase form must be antisymmetric mod 4"
                );
            }
        }
        Arc::new(QuantumTorus {
            name: name.to_string(),
            gens,
            q4: m2,
            zc: zq,
            weyl_normalized: true,
        })
    }

    /// Torus whose cocycle is pulled back from image vectors in another
    /// torus; generator `i` corresponds to `vectors[i]`.
    pub fn pullback(
        name: &str,
        gens: Vec<String>,
        codomain: &Arc<QuantumTorus>,
        vectors: &[Vec<i64>],
    ) -> Arc<QuantumTorus> {
        let n = gens.len();
        assert_eq!(vectors.len(), n);
        let mut q4 = vec![vec![0i64; n]; n];
        let mut zc = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let c = codomain.cocycle(&vectors[i], &vectors[j]);
                let t = c.as_single_term().expect("cocycle values are monomials");
                assert!(t.angles.is_empty() && t.ct == 0 && t.cb == 0);
                q4[i][j] = t.quarters;
                zc[i][j] = (t.zeta as i64) + if t.coeff < 0 { 2 } else { 0 };
                assert_eq!(t.coeff.abs(), 1);
            }
        }
        Arc::new(QuantumTorus {
            name: name.to_string(),
            gens,
            q4,
            zc,
            weyl_normalized: codomain.weyl_normalized,
        })
    }

    /// Torus with a general bilinear product cocycle.
    pub fn with_cocycle(
        name: &str,
        gens: Vec<String>,
        q4: Vec<Vec<i64>>,
        zc: Vec<Vec<i64>>,
    ) -> Arc<QuantumTorus> {
        let n = gens.len();
        assert_eq!(q4.len(), n);
        assert_eq!(zc.len(), n);
        Arc::new(QuantumTorus {
            name: name.to_string(),
            gens,
            q4,
            zc,
            weyl_normalized: false,
        })
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn is_weyl_normalized(&self) -> bool {
        self.weyl_normalized
    }

    fn bilinear(m: &[Vec<i64>], u: &[i64], v: &[i64]) -> i64 {
        let mut acc = 0i64;
        for (i, &ui) in u.iter().enumerate() {
            if ui == 0 {
                continue;
            }
            for (j, &vj) in v.iter().enumerate() {
                if vj != 0 {
                    acc += ui * m[i][j] * vj;
                }
            }
        }
        acc
    }

    /// Product cocycle `C(u,v)` with `x_u x_v = C(u,v) x_(u+v)`.
    pub fn cocycle(&self, u: &[i64], v: &[i64]) -> Scalar {
        let a = Self::bilinear(&self.q4, u, v);
        let z = Self::bilinear(&self.zc, u, v);
        Scalar::zeta_pow(z).mul(&Scalar::a_quarters(a))
    }

    /// Full commutation scalar `c(u,v)` with `x_u x_v = c(u,v) x_v x_u`.
    pub fn commutation(&self, u: &[i64], v: &[i64]) -> Scalar {
        let a = Self::bilinear(&self.q4, u, v) - Self::bilinear(&self.q4, v, u);
        let z = Self::bilinear(&self.zc, u, v) - Self::bilinear(&self.zc, v, u);
        Scalar::zeta_pow(z).mul(&Scalar::a_quarters(a))
    }

    /// Basis vector for generator `i`.
    pub fn basis(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0; self.rank()];
        v[i] = 1;
        v
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g == name)
    }

    /// Block-diagonal tensor product; generator names get the block's
    /// provenance prefix when `prefixes` is supplied.
    pub fn tensor(
        name: &str,
        parts: &[Arc<QuantumTorus>],
        prefixes: Option<&[String]>,
    ) -> Arc<QuantumTorus> {
        let mut gens = Vec::new();
        let total: usize = parts.iter().map(|p| p.rank()).sum();
        let mut q4 = vec![vec![0i64; total]; total];
        let mut zc = vec![vec![0i64; total]; total];
        let mut weyl = true;
        let mut off = 0;
        for (bi, p) in parts.iter().enumerate() {
            for (gi, g) in p.gens.iter().enumerate() {
                let label = match prefixes {
                    Some(pre) => format!("{}.{}", pre[bi], g),
                    None => format!("b{}.{}", bi, g),
                };
                gens.push(label);
                for gj in 0..p.rank() {
                    q4[off + gi][off + gj] = p.q4[gi][gj];
                    zc[off + gi][off + gj] = p.zc[gi][gj];
                }
                let _ = gi;
            }
            weyl &= p.weyl_normalized;
            off += p.rank();
        }
        Arc::new(QuantumTorus {
            name: name.to_string(),
            gens,
            q4,
            zc,
            weyl_normalized: weyl,
        })
    }
}

fn same_torus(a: &Arc<QuantumTorus>, b: &Arc<QuantumTorus>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// An element: a finite scalar combination of basis symbols.
#[derive(Clone)]
pub struct TorusElem {
    pub torus: Arc<QuantumTorus>,
    pub terms: BTreeMap<Vec<i64>, Scalar>,
}

impl PartialEq for TorusElem {
    fn eq(&self, other: &Self) -> bool {
        same_torus(&self.torus, &other.torus) && self.terms == other.terms
    }
}
impl Eq for TorusElem {}

impl TorusElem {
    pub fn zero(torus: &Arc<QuantumTorus>) -> Self {
        TorusElem {
            torus: torus.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(torus: &Arc<QuantumTorus>) -> Self {
        Self::monomial(torus, vec![0; torus.rank()], Scalar::one()).unwrap()
    }

    /// Single term `s * x_v`.
    pub fn monomial(torus: &Arc<QuantumTorus>, v: Vec<i64>, s: Scalar) -> Result<Self, TorusError> {
        if v.len() != torus.rank() {
            return Err(TorusError::RankMismatch {
                want: torus.rank(),
                got: v.len(),
            });
        }
        let mut terms = BTreeMap::new();
        if !s.is_zero() {
            terms.insert(v, s);
        }
        Ok(TorusElem {
            torus: torus.clone(),
            terms,
        })
    }

    pub fn generator(torus: &Arc<QuantumTorus>, i: usize) -> Self {
        Self::monomial(torus, torus.basis(i), Scalar::one()).unwrap()
    }

    pub fn gen_pow(torus: &Arc<QuantumTorus>, i: usize, k: i64) -> Self {
        let mut v = vec![0; torus.rank()];
        v[i] = k;
        Self::monomial(torus, v, Scalar::one()).unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !s.is_zero() {
            for (v, c) in &self.terms {
                let c2 = c.mul(s);
                if !c2.is_zero() {
                    terms.insert(v.clone(), c2);
                }
            }
        }
        TorusElem {
            torus: self.torus.clone(),
            terms,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, TorusError> {
        self.check_same(other)?;
        let mut terms = self.terms.clone();
        for (v, c) in &other.terms {
            let e = terms.entry(v.clone()).or_insert_with(Scalar::zero);
            *e = e.add(c);
            if e.is_zero() {
                terms.remove(v);
            }
        }
        Ok(TorusElem {
            torus: self.torus.clone(),
            terms,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, TorusError> {
        self.add(&other.scale(&Scalar::int(-1)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, TorusError> {
        self.check_same(other)?;
        let mut terms: BTreeMap<Vec<i64>, Scalar> = BTreeMap::new();
        for (u, cu) in &self.terms {
            for (v, cv) in &other.terms {
                let w: Vec<i64> = u.iter().zip(v.iter()).map(|(a, b)| a + b).collect();
                let s = cu.mul(cv).mul(&self.torus.cocycle(u, v));
                let e = terms.entry(w.clone()).or_insert_with(Scalar::zero);
                *e = e.add(&s);
                if e.is_zero() {
                    terms.remove(&w);
                }
            }
        }
        Ok(TorusElem {
            torus: self.torus.clone(),
            terms,
        })
    }

    /// Inverse of a single-term element with invertible scalar.
    pub fn inverse(&self) -> Result<Self, TorusError> {
        if self.terms.len() != 1 {
            return Err(TorusError::Scalar(crate::error::ScalarError::NotInvertible));
        }
        let (v, c) = self.terms.iter().next().unwrap();
        let vi: Vec<i64> = v.iter().map(|x| -x).collect();
        // x_v * x_(-v) = C(v,-v); so x_v^-1 = C(v,-v)^-1 x_(-v) / c
        let coc = self.torus.cocycle(v, &vi);
        let s = c.mul(&coc).inverse()?;
        Self::monomial(&self.torus, vi, s)
    }

    pub fn pow(&self, k: i64) -> Result<Self, TorusError> {
        if k == 0 {
            return Ok(Self::one(&self.torus));
        }
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut out = Self::one(&self.torus);
        for _ in 0..k.abs() {
            out = out.mul(&base)?;
        }
        Ok(out)
    }

    fn check_same(&self, other: &Self) -> Result<(), TorusError> {
        if !same_torus(&self.torus, &other.torus) {
            return Err(TorusError::TorusMismatch {
                left: self.torus.name.clone(),
                right: other.torus.name.clone(),
            });
        }
        Ok(())
    }

    /// Applies a linear substitution of the coefficient constants.
    pub fn substitute_constants(&self, ct: &Scalar, cb: &Scalar) -> Result<Self, TorusError> {
        let mut terms = BTreeMap::new();
        for (v, c) in &self.terms {
            let c2 = c.substitute_constants(ct, cb)?;
            if !c2.is_zero() {
                terms.insert(v.clone(), c2);
            }
        }
        Ok(TorusElem {
            torus: self.torus.clone(),
            terms,
        })
    }
}

/// Weyl-ordered product of Weyl symbols: just the symbol of the sum.
pub fn weyl(torus: &Arc<QuantumTorus>, vectors: &[Vec<i64>]) -> Result<TorusElem, TorusError> {
    if !torus.is_weyl_normalized() {
        return Err(TorusError::NotWeylOrdered);
    }
    let mut total = vec![0i64; torus.rank()];
    for v in vectors {
        if v.len() != torus.rank() {
            return Err(TorusError::RankMismatch {
                want: torus.rank(),
                got: v.len(),
            });
        }
        for (t, x) in total.iter_mut().zip(v.iter()) {
            *t += x;
        }
    }
    TorusElem::monomial(torus, total, Scalar::one())
}

/// Which multiplications may apply a relation during reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Central,
    Left,
    Right,
}

/// A monomial relation `x_vector = scalar`, applied from `side`.
#[derive(Clone, Debug)]
pub struct MonomialRelation {
    pub vector: Vec<i64>,
    pub scalar: Scalar,
    pub side: Side,
}

impl MonomialRelation {
    pub fn central(vector: Vec<i64>, scalar: Scalar) -> Self {
        MonomialRelation {
            vector,
            scalar,
            side: Side::Central,
        }
    }
    pub fn right(vector: Vec<i64>, scalar: Scalar) -> Self {
        MonomialRelation {
            vector,
            scalar,
            side: Side::Right,
        }
    }
    pub fn left(vector: Vec<i64>, scalar: Scalar) -> Self {
        MonomialRelation {
            vector,
            scalar,
            side: Side::Left,
        }
    }

    /// True when the relation's monomial commutes with every generator.
    pub fn is_central_in(&self, torus: &QuantumTorus) -> bool {
        (0..torus.rank()).all(|i| torus.commutation(&self.vector, &torus.basis(i)).is_one())
    }
}

/// A reduction system for a lattice of monomial relations: picks one coset
/// representative per class of `Z^rank` modulo the relation lattice.
///
/// The section is Hermite-normal-form elimination over an explicit
/// generator elimination priority (earlier entries get eliminated first).
#[derive(Debug)]
pub struct ReductionSystem {
    torus: Arc<QuantumTorus>,
    rows: Vec<MonomialRelation>,
    pivots: Vec<usize>,
}

impl ReductionSystem {
    /// Builds a reduction system from independent relations.
    pub fn independent(
        torus: &Arc<QuantumTorus>,
        rels: &[MonomialRelation],
        elim_priority: &[usize],
    ) -> Result<ReductionSystem, TorusError> {
        let vecs: Vec<Vec<i64>> = rels.iter().map(|r| r.vector.clone()).collect();
        let (basis, pivots) = hnf::echelon(&vecs, elim_priority);
        if basis.len() != rels.len() {
            return Err(TorusError::DependentRelations);
        }
        // express each echelon row through the input relations to carry
        // scalars along: solve over the input set by echelonizing inputs
        let rows = Self::carry_scalars(torus, rels, &basis)?;
        Ok(ReductionSystem {
            torus: torus.clone(),
            rows,
            pivots,
        })
    }

    /// Builds a reduction system from a possibly dependent spanning set,
    /// verifying that dependent combinations have consistent scalars under
    /// the supplied constant substitution.
    pub fn spanning(
        torus: &Arc<QuantumTorus>,
        rels: &[MonomialRelation],
        elim_priority: &[usize],
        consistency_constants: &(Scalar, Scalar),
    ) -> Result<ReductionSystem, TorusError> {
        let vecs: Vec<Vec<i64>> = rels.iter().map(|r| r.vector.clone()).collect();
        let (basis, pivots) = hnf::echelon(&vecs, elim_priority);
        let rows = Self::carry_scalars(torus, rels, &basis)?;
        let sys = ReductionSystem {
            torus: torus.clone(),
            rows,
            pivots,
        };
        // every input relation must reduce to a bare scalar equal to its own
        let (ct, cb) = consistency_constants;
        for r in rels {
            let mono = TorusElem::monomial(torus, r.vector.clone(), Scalar::one())?;
            let red = sys.reduce(&mono)?;
            let expect = TorusElem::monomial(torus, vec![0; torus.rank()], r.scalar.clone())?;
            let got = red.substitute_constants(ct, cb)?;
            let want = expect.substitute_constants(ct, cb)?;
            if got != want {
                return Err(TorusError::InconsistentRelations);
            }
        }
        Ok(sys)
    }

    /// Rewrites the echelon basis rows as integer combinations of the input
    /// relations and composes the relation scalars accordingly.
    fn carry_scalars(
        torus: &Arc<QuantumTorus>,
        rels: &[MonomialRelation],
        basis: &[Vec<i64>],
    ) -> Result<Vec<MonomialRelation>, TorusError> {
        // echelonize the inputs themselves to solve membership
        let vecs: Vec<Vec<i64>> = rels.iter().map(|r| r.vector.clone()).collect();
        let prio: Vec<usize> = (0..torus.rank()).collect();
        let (inp_basis, inp_pivots) = hnf::echelon(&vecs, &prio);
        // re-run the echelon while tracking coefficients over the inputs
        let tracked = hnf::echelon_with_coeffs(&vecs, &prio);
        let mut out = Vec::new();
        for row in basis {
            let coeffs = hnf::solve_in_span(&inp_basis, &inp_pivots, row)
                .ok_or(TorusError::DependentRelations)?;
            // total integer combination over raw relations
            let mut raw = vec![0i64; rels.len()];
            for (c, t) in coeffs.iter().zip(tracked.iter()) {
                for (r, tc) in raw.iter_mut().zip(t.iter()) {
                    *r += c * tc;
                }
            }
            // The ordered product of the relation monomials x_(k_i v_i)
            // equals C_total * x_row (cocycle corrections accumulate), and
            // reduces to prod(scalar_i^k_i); hence
            // x_row = C_total^{-1} * prod(scalar_i^k_i).
            let mut side = Side::Central;
            let mut c_total = Scalar::one();
            let mut sc_prod = Scalar::one();
            let mut acc = vec![0i64; torus.rank()];
            for (k, rel) in raw.iter().zip(rels.iter()) {
                if *k == 0 {
                    continue;
                }
                if rel.side != Side::Central {
                    side = rel.side;
                }
                let step: Vec<i64> = rel.vector.iter().map(|x| x * *k).collect();
                let base = TorusElem::monomial(torus, rel.vector.clone(), Scalar::one())?;
                let powed = base.pow(*k)?;
                let (_, ps) = powed.terms.iter().next().unwrap();
                c_total = c_total.mul(&torus.cocycle(&acc, &step)).mul(ps);
                sc_prod = sc_prod.mul(&rel.scalar.pow(*k)?);
                for (a, s) in acc.iter_mut().zip(step.iter()) {
                    *a += s;
                }
            }
            debug_assert_eq!(&acc, row);
            let scalar = c_total.inverse().map_err(TorusError::Scalar)?.mul(&sc_prod);
            out.push(MonomialRelation {
                vector: row.clone(),
                scalar,
                side,
            });
        }
        Ok(out)
    }

    /// Canonical representative: each pivot coordinate reduced into
    /// `[0, pivot)`; scalars accumulate relation scalars and the cocycle
    /// factor of applying the relation from its declared side.
    pub fn reduce(&self, e: &TorusElem) -> Result<TorusElem, TorusError> {
        if !same_torus(&e.torus, &self.torus) {
            return Err(TorusError::TorusMismatch {
                left: e.torus.name.clone(),
                right: self.torus.name.clone(),
            });
        }
        let mut out = TorusElem::zero(&self.torus);
        for (v, c) in &e.terms {
            let (rv, rs) = self.reduce_vector(v)?;
            let term = TorusElem::monomial(&self.torus, rv, c.mul(&rs))?;
            out = out.add(&term)?;
        }
        Ok(out)
    }

    fn reduce_vector(&self, v: &[i64]) -> Result<(Vec<i64>, Scalar), TorusError> {
        let mut cur = v.to_vec();
        let mut scalar = Scalar::one();
        for (row, &p) in self.rows.iter().zip(self.pivots.iter()) {
            let pv = row.vector[p];
            let k = cur[p].div_euclid(pv);
            if k == 0 {
                continue;
            }
            let step: Vec<i64> = row.vector.iter().map(|x| x * k).collect();
            let rest: Vec<i64> = cur.iter().zip(step.iter()).map(|(a, b)| a - b).collect();
            // x_cur = factor * x_rest * (relation scalar)^k, where factor is
            // the cocycle of splitting off x_step on the declared side.
            let base = TorusElem::monomial(&self.torus, row.vector.clone(), Scalar::one())?;
            let powed = base.pow(k)?;
            let (_, ps) = powed.terms.iter().next().unwrap();
            let split = match row.side {
                Side::Central | Side::Right => self.torus.cocycle(&rest, &step),
                Side::Left => self.torus.cocycle(&step, &rest),
            };
            // x_rest * x_step = split * x_cur  =>  x_cur = split^{-1} x_rest x_step
            // and x_step = ps^{-1} (x_vector)^k  => contributes scalar^k / ps.
            let sc = row.scalar.pow(k)?;
            scalar = scalar
                .mul(&split.inverse().map_err(TorusError::Scalar)?)
                .mul(&ps.inverse().map_err(TorusError::Scalar)?)
                .mul(&sc);
            cur = rest;
        }
        Ok((cur, scalar))
    }
}

/// A monomial homomorphism of quantum tori: generator `i` of the domain is
/// sent to `scalar_i * x_(image_i)`.  Validated to preserve the product
/// cocycle, so it extends multiplicatively to all monomials.
pub struct TorusHom {
    pub domain: Arc<QuantumTorus>,
    pub codomain: Arc<QuantumTorus>,
    images: Vec<(Vec<i64>, Scalar)>,
}

impl TorusHom {
    pub fn new(
        domain: &Arc<QuantumTorus>,
        codomain: &Arc<QuantumTorus>,
        images: Vec<(Vec<i64>, Scalar)>,
    ) -> Result<TorusHom, TorusError> {
        assert_eq!(images.len(), domain.rank());
        for (v, _) in &images {
            if v.len() != codomain.rank() {
                return Err(TorusError::RankMismatch {
                    want: codomain.rank(),
                    got: v.len(),
                });
            }
        }
        for i in 0..domain.rank() {
            for j in 0..domain.rank() {
                let cd = domain.cocycle(&domain.basis(i), &domain.basis(j));
                let cc = codomain.cocycle(&images[i].0, &images[j].0);
                if cd != cc {
                    return Err(TorusError::CocycleMismatch { i, j });
                }
            }
        }
        Ok(TorusHom {
            domain: domain.clone(),
            codomain: codomain.clone(),
            images,
        })
    }

    pub fn apply(&self, e: &TorusElem) -> Result<TorusElem, TorusError> {
        if !same_torus(&e.torus, &self.domain) {
            return Err(TorusError::TorusMismatch {
                left: e.torus.name.clone(),
                right: self.domain.name.clone(),
            });
        }
        let mut out = TorusElem::zero(&self.codomain);
        for (v, c) in &e.terms {
            let mut w = vec![0i64; self.codomain.rank()];
            let mut s = c.clone();
            for (i, &k) in v.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                for (wx, ix) in w.iter_mut().zip(self.images[i].0.iter()) {
                    *wx += k * ix;
                }
                s = s.mul(&self.images[i].1.pow(k)?);
            }
            out = out.add(&TorusElem::monomial(&self.codomain, w, s)?)?;
        }
        Ok(out)
    }
}

impl fmt::Display for TorusElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (v, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", c)?;
            for (i, &k) in v.iter().enumerate() {
                if k != 0 {
                    write!(f, "*{}^{}", self.torus.gens[i], k)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TorusElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::default_constants;
    use proptest::prelude::*;

    fn rank2_a2() -> Arc<QuantumTorus> {
        // <e1,e2> = 2 so x1 x2 = A^2 x2 x1
        QuantumTorus::antisymmetric(
            "t",
            vec!["x1".into(), "x2".into()],
            vec![vec![0, 4], vec![-4, 0]],
            vec![vec![0, 0], vec![0, 0]],
        )
    }

    #[test]
    fn product_law_weighted_by_half_form() {
        let t = rank2_a2();
        let x1 = TorusElem::generator(&t, 0);
        let x2 = TorusElem::generator(&t, 1);
        let p = x1.mul(&x2).unwrap();
        // x_{e1} x_{e2} = A^{<e1,e2>/2} x_{e1+e2} = A x_{e1+e2}
        let expected = TorusElem::monomial(&t, vec![1, 1], Scalar::a_pow(1)).unwrap();
        assert_eq!(p, expected);
    }

    #[test]
    fn gl1_triangle_sign_commutation() {
        // alpha*beta = (-A) beta*alpha, checked from cocycle data
        let t = crate::uvir2d::gl1_triangle_torus("tri");
        let a = TorusElem::generator(&t, 0);
        let b = TorusElem::generator(&t, 1);
        let lhs = a.mul(&b).unwrap();
        let rhs = b.mul(&a).unwrap().scale(&Scalar::a_pow(1).neg());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_cancels() {
        let t = rank2_a2();
        let m = TorusElem::monomial(&t, vec![2, -1], Scalar::q_pow(1)).unwrap();
        assert_eq!(m.mul(&m.inverse().unwrap()).unwrap(), TorusElem::one(&t));
    }

    #[test]
    fn weyl_single_and_permutation() {
        let t = rank2_a2();
        assert_eq!(
            weyl(&t, &[t.basis(0)]).unwrap(),
            TorusElem::generator(&t, 0)
        );
        let w1 = weyl(&t, &[t.basis(0), t.basis(1)]).unwrap();
        let w2 = weyl(&t, &[t.basis(1), t.basis(0)]).unwrap();
        assert_eq!(w1, w2);
    }

    #[test]
    fn tensor_blocks_commute() {
        let t = rank2_a2();
        let tt = QuantumTorus::tensor("t2", &[t.clone(), t.clone()], None);
        assert_eq!(tt.rank(), 4);
        let a = TorusElem::generator(&tt, 0);
        let b = TorusElem::generator(&tt, 2);
        assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
    }

    #[test]
    fn tensor_of_none_is_scalars() {
        let t = QuantumTorus::tensor("empty", &[], None);
        assert_eq!(t.rank(), 0);
        let one = TorusElem::one(&t);
        assert_eq!(one.mul(&one).unwrap(), one);
    }

    #[test]
    fn reduce_central_relation() {
        let t = rank2_a2();
        // central? e1+e2 has commutation A^{<e1+e2,e1>}=A^{-2} with e1: not central.
        // use a rank-2 commutative torus instead for the central case
        let c = QuantumTorus::antisymmetric(
            "c",
            vec!["u".into(), "v".into()],
            vec![vec![0, 0], vec![0, 0]],
            vec![vec![0, 0], vec![0, 0]],
        );
        let rel = MonomialRelation::central(vec![1, 1], Scalar::q_half_pow(1));
        let sys = ReductionSystem::independent(&c, &[rel], &[0, 1]).unwrap();
        let e = TorusElem::monomial(&c, vec![1, 1], Scalar::one()).unwrap();
        let r = sys.reduce(&e).unwrap();
        assert_eq!(
            r,
            TorusElem::monomial(&c, vec![0, 0], Scalar::q_half_pow(1)).unwrap()
        );
        // idempotent
        assert_eq!(sys.reduce(&r).unwrap(), r);
        let _ = t;
    }

    #[test]
    fn dependent_relations_rejected() {
        let c = QuantumTorus::antisymmetric(
            "c",
            vec!["u".into(), "v".into()],
            vec![vec![0, 0], vec![0, 0]],
            vec![vec![0, 0], vec![0, 0]],
        );
        let r1 = MonomialRelation::central(vec![1, 1], Scalar::one());
        let r2 = MonomialRelation::central(vec![2, 2], Scalar::one());
        let err = ReductionSystem::independent(&c, &[r1, r2], &[0, 1]).unwrap_err();
        assert!(matches!(err, TorusError::DependentRelations));
    }

    #[test]
    fn spanning_checks_consistency() {
        let c = QuantumTorus::antisymmetric(
            "c",
            vec!["u".into(), "v".into()],
            vec![vec![0, 0], vec![0, 0]],
            vec![vec![0, 0], vec![0, 0]],
        );
        let r1 = MonomialRelation::central(vec![1, 0], Scalar::q_pow(1));
        let r2 = MonomialRelation::central(vec![0, 1], Scalar::q_pow(-1));
        let r3 = MonomialRelation::central(vec![1, 1], Scalar::one());
        let sys =
            ReductionSystem::spanning(&c, &[r1.clone(), r2, r3], &[0, 1], &default_constants());
        assert!(sys.is_ok());
        let bad = MonomialRelation::central(vec![1, 1], Scalar::q_pow(1));
        let r2b = MonomialRelation::central(vec![0, 1], Scalar::q_pow(-1));
        let err = ReductionSystem::spanning(&c, &[r1, r2b, bad], &[0, 1], &default_constants())
            .unwrap_err();
        assert!(matches!(err, TorusError::InconsistentRelations));
    }

    proptest! {
        #[test]
        fn mul_associative_unital(
            u1 in proptest::collection::vec(-2i64..3, 3),
            u2 in proptest::collection::vec(-2i64..3, 3),
            u3 in proptest::collection::vec(-2i64..3, 3),
        ) {
            // hexagon-like torus on 3 gens with mixed sign and A entries
            let t = QuantumTorus::antisymmetric(
                "p",
                vec!["a".into(), "b".into(), "c".into()],
                vec![vec![0, 4, -2], vec![-4, 0, 2], vec![2, -2, 0]],
                vec![vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 0]],
            );
            let a = TorusElem::monomial(&t, u1, Scalar::one()).unwrap();
            let b = TorusElem::monomial(&t, u2, Scalar::q_half_pow(1)).unwrap();
            let c = TorusElem::monomial(&t, u3, Scalar::zeta_pow(1)).unwrap();
            prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
            let one = TorusElem::one(&t);
            prop_assert_eq!(a.mul(&one).unwrap(), a.clone());
            prop_assert_eq!(one.mul(&a).unwrap(), a);
        }

        #[test]
        fn commutation_exactness(
            u in proptest::collection::vec(-2i64..3, 3),
            v in proptest::collection::vec(-2i64..3, 3),
        ) {
            let t = QuantumTorus::antisymmetric(
                "p",
                vec!["a".into(), "b".into(), "c".into()],
                vec![vec![0, 4, -2], vec![-4, 0, 2], vec![2, -2, 0]],
                vec![vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 0]],
            );
            let a = TorusElem::monomial(&t, u.clone(), Scalar::one()).unwrap();
            let b = TorusElem::monomial(&t, v.clone(), Scalar::one()).unwrap();
            let lhs = a.mul(&b).unwrap();
            let rhs = b.mul(&a).unwrap().scale(&t.commutation(&u, &v));
            prop_assert_eq!(lhs, rhs);
        }
    }
}

#[cfg(test)]
mod example_tests {
    use super::*;

    #[test]
    fn monomial_examples_and_errors() {
        let t = QuantumTorus::antisymmetric(
            "t",
            vec!["x1".into(), "x2".into()],
            vec![vec![0, 2], vec![-2, 0]],
            vec![vec![0, 0], vec![0, 0]],
        );
        assert_eq!(
            TorusElem::monomial(&t, vec![0, 0], Scalar::one()).unwrap(),
            TorusElem::one(&t)
        );
        let m = TorusElem::monomial(&t, vec![-1, 0], Scalar::q_pow(1)).unwrap();
        assert_eq!(m, TorusElem::gen_pow(&t, 0, -1).scale(&Scalar::q_pow(1)));
        assert!(matches!(
            TorusElem::monomial(&t, vec![1], Scalar::one()),
            Err(TorusError::RankMismatch { .. })
        ));
        let t2 =
            QuantumTorus::antisymmetric("other", vec!["y".into()], vec![vec![0]], vec![vec![0]]);
        let a = TorusElem::one(&t);
        let b = TorusElem::one(&t2);
        assert!(matches!(a.mul(&b), Err(TorusError::TorusMismatch { .. })));
    }
}
