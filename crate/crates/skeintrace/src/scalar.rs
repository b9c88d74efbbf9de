//! Exact arithmetic in the coefficient ring used by every other module.
//!
//! A [`Scalar`] is an integer combination of terms
//! `z^e * A^(k/4) * CT^m * CB^n * Q[c1*th1] * Q[c2*th2] * ...`
//! where `z` is a primitive 4th root of unity with `z^2 = -1`, `A` carries
//! quarter-integer exponents, `CT`/`CB` are reserved invertible constants
//! (substituted late), and `Q[c*th]` denotes `q^(c*th/pi)` for a formal
//! dihedral-angle symbol `th`.  The ring element `q` is not stored: it is
//! `(-1) * A^2`, and `q^(1/2)` is `z * A`.
//!
//! Per-tetrahedron angle triples satisfy `th + th' + th'' = pi`; the third
//! slot is eliminated eagerly, so canonical forms only mention slots 0 and 1.

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

use crate::error::ScalarError;

pub type Rat = Rational64;

/// A formal dihedral-angle symbol.
///
/// `Tet { tet, slot }` is the angle of slot `slot` (0 for `th`, 1 for `th'`)
/// of tetrahedron number `tet`; slot 2 never appears in canonical data.
/// `Named` symbols are free parameters such as the Pachner free angle.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AngleId {
    Tet { tet: u32, slot: u8 },
    Named(String),
}

impl AngleId {
    pub fn named(s: &str) -> Self {
        AngleId::Named(s.to_string())
    }
}

impl fmt::Display for AngleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AngleId::Tet { tet, slot } => {
                write!(f, "th{}", tet)?;
                for _ in 0..*slot {
                    write!(f, "p")?;
                }
                Ok(())
            }
            AngleId::Named(s) => write!(f, "{}", s),
        }
    }
}

/// A rational linear combination of angle symbols plus a multiple of `pi`.
///
/// Used for angle assignments; `pi_coeff` is the coefficient of `pi`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AngleExpr {
    pub pi_coeff: Rat,
    pub terms: BTreeMap<AngleId, Rat>,
}

impl AngleExpr {
    pub fn pi(c: Rat) -> Self {
        AngleExpr {
            pi_coeff: c,
            terms: BTreeMap::new(),
        }
    }

    pub fn symbol(id: AngleId) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(id, Rat::from_integer(1));
        AngleExpr {
            pi_coeff: Rat::zero(),
            terms,
        }
    }

    /// Angle of slot `slot` (0,1,2) of tetrahedron `tet`.
    pub fn tet_slot(tet: u32, slot: u8) -> Self {
        assert!(slot < 3, "angle slot out of range");
        AngleExpr::symbol(AngleId::Tet { tet, slot })
    }

    /// Canonical form modulo the per-tetrahedron relations
    /// `th + th' + th'' = pi`: third slots are eliminated entirely.
    pub fn canonical(&self) -> Self {
        let mut out = AngleExpr::pi(self.pi_coeff);
        for (id, c) in &self.terms {
            match id {
                AngleId::Tet { tet, slot: 2 } => {
                    out.pi_coeff += *c;
                    out.add_term(AngleId::Tet { tet: *tet, slot: 0 }, -*c);
                    out.add_term(AngleId::Tet { tet: *tet, slot: 1 }, -*c);
                }
                _ => out.add_term(id.clone(), *c),
            }
        }
        out
    }

    pub fn add_term(&mut self, id: AngleId, c: Rat) {
        let entry = self.terms.entry(id.clone()).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&id);
        }
    }

    pub fn scale(&self, c: Rat) -> Self {
        AngleExpr {
            pi_coeff: self.pi_coeff * c,
            terms: self
                .terms
                .iter()
                .filter(|(_, v)| !(*v * c).is_zero())
                .map(|(k, v)| (k.clone(), *v * c))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.pi_coeff += other.pi_coeff;
        for (k, v) in &other.terms {
            out.add_term(k.clone(), *v);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-Rat::from_integer(1)))
    }

    /// Zero modulo the per-tetrahedron pi-sum relations.
    pub fn is_zero(&self) -> bool {
        let c = self.canonical();
        c.pi_coeff.is_zero() && c.terms.is_empty()
    }
}

/// Canonical key of a single term: everything except the integer coefficient.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct TermKey {
    /// A-exponent in quarter units.
    quarters: i64,
    /// coefficients of `th/pi` in the q-exponent, per angle symbol
    angles: BTreeMap<AngleId, Rat>,
    /// power of the 4th root of unity, 0 or 1 (`z^2` is folded into the sign)
    zeta: u8,
    /// power of the reserved constant CT
    ct: i64,
    /// power of the reserved constant CB
    cb: i64,
}

impl TermKey {
    fn unit() -> Self {
        TermKey {
            quarters: 0,
            angles: BTreeMap::new(),
            zeta: 0,
            ct: 0,
            cb: 0,
        }
    }

    /// Canonical form of a raw key: third-slot angle coefficients are
    /// reduced into `[0, 1/2)` using `th'' = pi - th - th'`, folding the
    /// eliminated half-integral part into powers of `q`.  Returns the key
    /// together with the sign correction of the coefficient.
    fn normalized(mut self, coeff: i64) -> (TermKey, i64) {
        let tets: Vec<u32> = self
            .angles
            .keys()
            .filter_map(|id| match id {
                AngleId::Tet { tet, slot: 2 } => Some(*tet),
                _ => None,
            })
            .collect();
        let mut zeta = self.zeta as i64;
        let mut coeff = coeff;
        for tet in tets {
            let key2 = AngleId::Tet { tet, slot: 2 };
            let c = self.angles[&key2];
            // largest half-integer <= c
            let doubled = c * Rat::from_integer(2);
            let t2 = doubled.floor().to_integer(); // t = t2/2
            if t2 == 0 {
                continue;
            }
            let t = Rat::new(t2, 2);
            let rem = c - t;
            if rem.is_zero() {
                self.angles.remove(&key2);
            } else {
                self.angles.insert(key2, rem);
            }
            for slot in [0u8, 1u8] {
                let k = AngleId::Tet { tet, slot };
                let e = self.angles.entry(k.clone()).or_insert_with(Rat::zero);
                *e -= t;
                if e.is_zero() {
                    self.angles.remove(&k);
                }
            }
            // multiply by q^t = z^(2t) A^(2t)
            self.quarters += 4 * t2;
            zeta += t2;
        }
        let z4 = zeta.rem_euclid(4);
        if z4 >= 2 {
            coeff = -coeff;
            self.zeta = (z4 - 2) as u8;
        } else {
            self.zeta = z4 as u8;
        }
        (self, coeff)
    }
}

/// An exact element of the coefficient ring.  See the module docs.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Scalar {
    terms: BTreeMap<TermKey, i64>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::int(1)
    }

    pub fn int(n: i64) -> Self {
        let mut terms = BTreeMap::new();
        if n != 0 {
            terms.insert(TermKey::unit(), n);
        }
        Scalar { terms }
    }

    /// `z^k` with `z = (-1)^(1/2)`, `z^2 = -1`.
    pub fn zeta_pow(k: i64) -> Self {
        let k = k.rem_euclid(4);
        let (sign, z) = match k {
            0 => (1, 0),
            1 => (1, 1),
            2 => (-1, 0),
            _ => (-1, 1),
        };
        let mut key = TermKey::unit();
        key.zeta = z;
        let mut terms = BTreeMap::new();
        terms.insert(key, sign);
        Scalar { terms }
    }

    /// `A^(quarters/4)`.
    pub fn a_quarters(quarters: i64) -> Self {
        let mut key = TermKey::unit();
        key.quarters = quarters;
        let mut terms = BTreeMap::new();
        terms.insert(key, 1);
        Scalar { terms }
    }

    /// `A^k`.
    pub fn a_pow(k: i64) -> Self {
        Scalar::a_quarters(4 * k)
    }

    /// `q^(halves/2)` with `q = -A^2`, using the fixed branch `q^(1/2) = z*A`.
    pub fn q_half_pow(halves: i64) -> Self {
        // q^(h/2) = z^h * A^h
        let mut s = Scalar::zeta_pow(halves);
        s = s.mul(&Scalar::a_pow(halves));
        s
    }

    pub fn q_pow(k: i64) -> Self {
        Scalar::q_half_pow(2 * k)
    }

    pub fn ct_pow(k: i64) -> Self {
        let mut key = TermKey::unit();
        key.ct = k;
        let mut terms = BTreeMap::new();
        terms.insert(key, 1);
        Scalar { terms }
    }

    pub fn cb_pow(k: i64) -> Self {
        let mut key = TermKey::unit();
        key.cb = k;
        let mut terms = BTreeMap::new();
        terms.insert(key, 1);
        Scalar { terms }
    }

    /// `q^(c*th/pi)` for a single angle symbol.
    pub fn q_angle(id: AngleId, c: Rat) -> Self {
        let mut key = TermKey::unit();
        if !c.is_zero() {
            key.angles.insert(id, c);
        }
        let (key, coeff) = key.normalized(1);
        let mut terms = BTreeMap::new();
        terms.insert(key, coeff);
        Scalar { terms }
    }

    /// `q^(expr/pi)` for a linear angle expression; the `pi` part becomes a
    /// plain power of `q` and must be half-integral (third-slot angle
    /// symbols are reduced canonically, not expanded).
    pub fn q_angle_expr(expr: &AngleExpr) -> Result<Scalar, ScalarError> {
        let c = expr.pi_coeff;
        let doubled = c * Rat::from_integer(2);
        if !doubled.is_integer() {
            return Err(ScalarError::FractionalQPower { coeff: c });
        }
        let mut s = Scalar::q_half_pow(doubled.to_integer());
        for (id, coeff) in &expr.terms {
            s = s.mul(&Scalar::q_angle(id.clone(), *coeff));
        }
        Ok(s)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Scalar::one()
    }

    pub fn neg(&self) -> Self {
        Scalar {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, v) in &other.terms {
            let e = terms.entry(k.clone()).or_insert(0);
            *e += v;
            if *e == 0 {
                terms.remove(k);
            }
        }
        Scalar { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<TermKey, i64> = BTreeMap::new();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let mut angles = k1.angles.clone();
                for (id, c) in &k2.angles {
                    let e = angles.entry(id.clone()).or_insert_with(Rat::zero);
                    *e += c;
                    if e.is_zero() {
                        angles.remove(id);
                    }
                }
                let raw = TermKey {
                    quarters: k1.quarters + k2.quarters,
                    angles,
                    zeta: 0,
                    ct: k1.ct + k2.ct,
                    cb: k1.cb + k2.cb,
                };
                let mut raw = raw;
                raw.zeta = 0;
                let mut coeff = c1 * c2;
                let z = k1.zeta + k2.zeta;
                if z >= 2 {
                    coeff = -coeff;
                    raw.zeta = z - 2;
                } else {
                    raw.zeta = z;
                }
                let (key, coeff) = raw.normalized(coeff);
                *terms.entry(key).or_insert(0) += coeff;
            }
        }
        terms.retain(|_, v| *v != 0);
        Scalar { terms }
    }

    /// Integer power; negative exponents require a single invertible term.
    pub fn pow(&self, k: i64) -> Result<Scalar, ScalarError> {
        if k == 0 {
            return Ok(Scalar::one());
        }
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut out = Scalar::one();
        for _ in 0..k.abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    /// Inverse of a single-term scalar with unit integer coefficient.
    pub fn inverse(&self) -> Result<Scalar, ScalarError> {
        if self.terms.len() != 1 {
            return Err(ScalarError::NotInvertible);
        }
        let (k, c) = self.terms.iter().next().unwrap();
        // z^e has inverse z^(-e); integer coefficient must be +-1
        let (inv_c, extra_sign) = match (*c, k.zeta) {
            (1, 0) => (1, 1),
            (-1, 0) => (-1, 1),
            // (z)^-1 = -z * (-1)... z * z^3 = z^4 = 1, z^3 = -z
            (1, 1) => (-1, 1),
            (-1, 1) => (1, 1),
            _ => return Err(ScalarError::NotInvertible),
        };
        let key = TermKey {
            quarters: -k.quarters,
            angles: k.angles.iter().map(|(id, c)| (id.clone(), -c)).collect(),
            zeta: k.zeta,
            ct: -k.ct,
            cb: -k.cb,
        };
        let (key, coeff) = key.normalized(inv_c * extra_sign);
        let mut terms = BTreeMap::new();
        terms.insert(key, coeff);
        Ok(Scalar { terms })
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Splits a single-term scalar into its parts; errors on sums.
    pub fn as_single_term(&self) -> Option<SingleTerm> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, c) = self.terms.iter().next().unwrap();
        Some(SingleTerm {
            coeff: *c,
            zeta: k.zeta,
            quarters: k.quarters,
            ct: k.ct,
            cb: k.cb,
            angles: k.angles.clone(),
        })
    }

    /// Replaces the reserved constants CT and CB by concrete values.
    ///
    /// The values must satisfy the compatibility `cb^2 = q * ct^2`.
    pub fn substitute_constants(&self, ct: &Scalar, cb: &Scalar) -> Result<Scalar, ScalarError> {
        check_constants(ct, cb)?;
        let mut out = Scalar::zero();
        for (k, c) in &self.terms {
            let mut base_key = k.clone();
            let ct_pow = base_key.ct;
            let cb_pow = base_key.cb;
            base_key.ct = 0;
            base_key.cb = 0;
            let mut term = Scalar {
                terms: {
                    let mut m = BTreeMap::new();
                    m.insert(base_key, *c);
                    m
                },
            };
            term = term.mul(&ct.pow(ct_pow)?);
            term = term.mul(&cb.pow(cb_pow)?);
            out = out.add(&term);
        }
        Ok(out)
    }

    /// True if no term mentions an angle symbol.
    pub fn is_angle_free(&self) -> bool {
        self.terms.keys().all(|k| k.angles.is_empty())
    }

    /// True if no term mentions CT or CB.
    pub fn is_constant_free(&self) -> bool {
        self.terms.keys().all(|k| k.ct == 0 && k.cb == 0)
    }

    /// Substitutes an angle symbol by a linear expression in other symbols.
    pub fn substitute_angle(&self, id: &AngleId, value: &AngleExpr) -> Result<Scalar, ScalarError> {
        let mut out = Scalar::zero();
        for (k, c) in &self.terms {
            let mut key = k.clone();
            let coeff = key.angles.remove(id);
            let mut term = Scalar {
                terms: {
                    let mut m = BTreeMap::new();
                    m.insert(key, *c);
                    m
                },
            };
            if let Some(coeff) = coeff {
                term = term.mul(&Scalar::q_angle_expr(&value.scale(coeff))?);
            }
            out = out.add(&term);
        }
        Ok(out)
    }
}

/// Verifies `cb^2 = q * ct^2` for a substitution pair.  The reserved
/// symbols themselves satisfy the constraint by definition.
pub fn check_constants(ct: &Scalar, cb: &Scalar) -> Result<(), ScalarError> {
    if *ct == Scalar::ct_pow(1) && *cb == Scalar::cb_pow(1) {
        return Ok(());
    }
    let lhs = cb.mul(cb);
    let rhs = Scalar::q_pow(1).mul(&ct.mul(ct));
    if lhs != rhs {
        return Err(ScalarError::ConstraintViolation);
    }
    Ok(())
}

/// The default substitution `(CT, CB) = (q^(-1/2), 1)`.
pub fn default_constants() -> (Scalar, Scalar) {
    (Scalar::q_half_pow(-1), Scalar::one())
}

/// The other admissible choice `(CT, CB) = (-q^(-1/2), 1)`.
pub fn alternate_constants() -> (Scalar, Scalar) {
    (Scalar::q_half_pow(-1).neg(), Scalar::one())
}

/// Decomposed view of a one-term scalar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingleTerm {
    pub coeff: i64,
    pub zeta: u8,
    pub quarters: i64,
    pub ct: i64,
    pub cb: i64,
    pub angles: BTreeMap<AngleId, Rat>,
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // sort by (a_exponent, angle_part, zeta_power, ct, cb)
        let mut keys: Vec<&TermKey> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            (a.quarters, &a.angles, a.zeta, a.ct, a.cb)
                .cmp(&(b.quarters, &b.angles, b.zeta, b.ct, b.cb))
        });
        for (i, k) in keys.iter().enumerate() {
            let c = self.terms[*k];
            if i == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            let abs = c.abs();
            if abs != 1
                || (k.zeta == 0 && k.quarters == 0 && k.ct == 0 && k.cb == 0 && k.angles.is_empty())
            {
                factors.push(format!("{}", abs));
            }
            if k.zeta == 1 {
                factors.push("z".to_string());
            }
            if k.quarters != 0 {
                if k.quarters % 4 == 0 {
                    factors.push(format!("A^({})", k.quarters / 4));
                } else {
                    factors.push(format!("A^({}/4)", k.quarters));
                }
            }
            if k.ct != 0 {
                factors.push(format!("CT^({})", k.ct));
            }
            if k.cb != 0 {
                factors.push(format!("CB^({})", k.cb));
            }
            for (id, coeff) in &k.angles {
                factors.push(format!("Q[{}{}]", rat_prefix(coeff), id));
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

fn rat_prefix(c: &Rat) -> String {
    if *c == Rat::from_integer(1) {
        String::new()
    } else if *c == -Rat::from_integer(1) {
        "-".to_string()
    } else if c.is_integer() {
        format!("{}*", c.numer())
    } else if c.is_negative() {
        format!("-{}/{}*", c.numer().abs(), c.denom())
    } else {
        format!("{}/{}*", c.numer(), c.denom())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> Scalar {
        Scalar::q_pow(1)
    }

    #[test]
    fn additive_inverse() {
        assert!(q().add(&q().neg()).is_zero());
    }

    #[test]
    fn half_q_is_zeta_a() {
        // q^(1/2) + q^(1/2) = 2*z*A
        let s = Scalar::q_half_pow(1).add(&Scalar::q_half_pow(1));
        let expected = Scalar::int(2)
            .mul(&Scalar::zeta_pow(1))
            .mul(&Scalar::a_pow(1));
        assert_eq!(s, expected);
        assert_eq!(format!("{}", s), "2*z*A^(1)");
    }

    #[test]
    fn unlike_angle_terms_stay_separate() {
        let th = AngleId::Tet { tet: 0, slot: 0 };
        let thp = AngleId::Tet { tet: 0, slot: 1 };
        let s = Scalar::q_angle(th, Rat::from_integer(1))
            .add(&Scalar::q_angle(thp, -Rat::from_integer(1)));
        assert_eq!(s.term_count(), 2);
    }

    #[test]
    fn zeta_squares_to_minus_one() {
        assert_eq!(
            Scalar::zeta_pow(1).mul(&Scalar::zeta_pow(1)),
            Scalar::int(-1)
        );
        assert_eq!(Scalar::zeta_pow(1).pow(4).unwrap(), Scalar::one());
    }

    #[test]
    fn skein_relation_coefficient() {
        // A*(-A) - A^(-1)*(-A)^(-1) = q - q^(-1)
        let lhs = Scalar::a_pow(1)
            .mul(&Scalar::a_pow(1).neg())
            .sub(&Scalar::a_pow(-1).mul(&Scalar::a_pow(1).neg().inverse().unwrap()));
        let rhs = q().sub(&q().inverse().unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn angle_triple_product_is_q() {
        // q^(th/pi) * q^(th'/pi) * q^(th''/pi) = q after eliminating th''
        let a = Scalar::q_angle_expr(&AngleExpr::tet_slot(7, 0)).unwrap();
        let b = Scalar::q_angle_expr(&AngleExpr::tet_slot(7, 1)).unwrap();
        let c = Scalar::q_angle_expr(&AngleExpr::tet_slot(7, 2)).unwrap();
        assert_eq!(a.mul(&b).mul(&c), q());
    }

    #[test]
    fn elimination_is_confluent() {
        // (th + th'') and (pi - th') reduce to the same canonical form
        let e1 = AngleExpr::tet_slot(3, 0).add(&AngleExpr::tet_slot(3, 2));
        let mut e2 = AngleExpr::pi(Rat::from_integer(1));
        e2 = e2.sub(&AngleExpr::tet_slot(3, 1));
        assert_eq!(
            Scalar::q_angle_expr(&e1).unwrap(),
            Scalar::q_angle_expr(&e2).unwrap()
        );
    }

    #[test]
    fn substitute_default_constants() {
        let (ct, cb) = default_constants();
        // CT -> z^(-1) * A^(-1)
        let got = Scalar::ct_pow(1).substitute_constants(&ct, &cb).unwrap();
        let expected = Scalar::zeta_pow(-1).mul(&Scalar::a_pow(-1));
        assert_eq!(got, expected);
        // q^(-1) * CT^(-3) -> q^(1/2)
        let got = Scalar::q_pow(-1)
            .mul(&Scalar::ct_pow(-3))
            .substitute_constants(&ct, &cb)
            .unwrap();
        assert_eq!(got, Scalar::q_half_pow(1));
    }

    #[test]
    fn substitute_alternate_constants() {
        let (ct, cb) = alternate_constants();
        let got = Scalar::ct_pow(1).substitute_constants(&ct, &cb).unwrap();
        let expected = Scalar::zeta_pow(-1).mul(&Scalar::a_pow(-1)).neg();
        assert_eq!(got, expected);
    }

    #[test]
    fn bad_constants_rejected() {
        let err = Scalar::ct_pow(1)
            .substitute_constants(&Scalar::one(), &Scalar::one())
            .unwrap_err();
        assert!(matches!(err, ScalarError::ConstraintViolation));
    }

    #[test]
    fn display_round_trip_examples() {
        let s = Scalar::int(2)
            .mul(&Scalar::zeta_pow(1))
            .mul(&Scalar::a_quarters(2))
            .mul(&Scalar::q_angle(
                AngleId::Tet { tet: 1, slot: 0 },
                Rat::new(1, 2),
            ));
        assert_eq!(format!("{}", s), "2*z*A^(2/4)*Q[1/2*th1]");
        let parsed = crate::text::parse_scalar(&format!("{}", s)).unwrap();
        assert_eq!(parsed, s);
    }

    proptest! {
        #[test]
        fn ring_axioms(av in -3i64..4, bv in -3i64..4, cv in -3i64..4,
                       za in 0i64..4, zb in 0i64..4,
                       ka in -2i64..3, kb in -2i64..3, kc in -2i64..3) {
            let th = AngleId::named("t");
            let a = Scalar::int(av).mul(&Scalar::zeta_pow(za)).mul(&Scalar::a_quarters(ka))
                .add(&Scalar::q_angle(th.clone(), Rat::new(1,2)).mul(&Scalar::int(kb)));
            let b = Scalar::int(bv).mul(&Scalar::a_quarters(kb)).add(&Scalar::zeta_pow(zb));
            let c = Scalar::int(cv).mul(&Scalar::a_quarters(kc)).mul(&Scalar::ct_pow(1));
            // associativity, commutativity, distributivity
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&b), b.add(&a));
        }
    }
}
