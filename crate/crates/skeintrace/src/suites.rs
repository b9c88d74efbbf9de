//! Seeded randomized property suites shared by the command line and the
//! acceptance tests: Weyl permutation invariance, associativity, the
//! boundary-sign cocycle, reduction idempotence, and state-sum order
//! independence.

use std::sync::Arc;

use crate::complex::{figure_eight, SurfaceTri, Triangle};
use crate::error::TraceError;
use crate::qtorus::{weyl, QuantumTorus, TorusElem};
use crate::report::{CheckRecord, Report};
use crate::scalar::{Rat, Scalar};
use crate::trace2d::{trace_surface, Presentation2D, StateRef, Strand2D};
use crate::trace3d::SqgmContext;
use crate::uvir2d::{b_rel, gl1_triangle_torus, hexagon_torus, Corner, Orient, StatedWord, Token};

/// A tiny deterministic generator (xorshift64*), so the suites depend only
/// on the supplied seed.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng(seed.max(1))
    }
    #[allow(clippy::should_implement_trait)]
    pub fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }
    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.below((hi - lo + 1) as u64) as i64)
    }
}

fn random_vector(rng: &mut Rng, rank: usize) -> Vec<i64> {
    (0..rank).map(|_| rng.int(-2, 2)).collect()
}

fn random_scalar(rng: &mut Rng) -> Scalar {
    let mut s = Scalar::int(rng.int(-3, 3));
    if s.is_zero() {
        s = Scalar::one();
    }
    s = s.mul(&Scalar::zeta_pow(rng.int(0, 3)));
    s.mul(&Scalar::a_quarters(rng.int(-4, 4)))
}

/// The tori whose product structures the suites exercise.
pub fn suite_tori() -> Vec<Arc<QuantumTorus>> {
    let m = figure_eight();
    vec![
        hexagon_torus("hex"),
        gl1_triangle_torus("gl1tri"),
        crate::uvir3d::cone_torus(),
        m.shape_torus(),
        m.sf_torus(0),
        crate::complex::flip_quadrilateral().sqts_torus(),
    ]
}

/// Weyl products are invariant under all permutations of their factor
/// lists, exhaustively up to length 4.
pub fn weyl_permutation_suite() -> Result<Report, TraceError> {
    let mut report = Report::default();
    for torus in suite_tori() {
        if !torus.is_weyl_normalized() {
            continue;
        }
        let rank = torus.rank();
        let vectors: Vec<Vec<i64>> = (0..4)
            .map(|i| (0..rank).map(|j| ((i + j) % 3) as i64 - 1).collect())
            .collect();
        let mut ok = true;
        for len in 1..=4usize {
            let list: Vec<Vec<i64>> = vectors[..len].to_vec();
            let base = weyl(&torus, &list)?;
            let mut perm = (0..len).collect::<Vec<_>>();
            // Heap's algorithm, iteratively
            let mut c = vec![0usize; len];
            let mut i = 0;
            while i < len {
                if c[i] < i {
                    if i % 2 == 0 {
                        perm.swap(0, i);
                    } else {
                        perm.swap(c[i], i);
                    }
                    let permuted: Vec<Vec<i64>> = perm.iter().map(|&k| list[k].clone()).collect();
                    ok &= weyl(&torus, &permuted)? == base;
                    c[i] += 1;
                    i = 0;
                } else {
                    c[i] = 0;
                    i += 1;
                }
            }
        }
        report.push(CheckRecord::named_bool(
            &format!("weyl permutation invariance [{}]", torus.name),
            "invariant",
            "invariant",
            ok,
        ));
    }
    Ok(report)
}

/// Associativity and unitality of the product on random triples.
pub fn associativity_suite(seed: u64, per_torus: usize) -> Result<Report, TraceError> {
    let mut rng = Rng::new(seed);
    let mut report = Report::default();
    for torus in suite_tori() {
        let mut ok = true;
        for _ in 0..per_torus {
            let a = TorusElem::monomial(
                &torus,
                random_vector(&mut rng, torus.rank()),
                random_scalar(&mut rng),
            )?;
            let b = TorusElem::monomial(
                &torus,
                random_vector(&mut rng, torus.rank()),
                random_scalar(&mut rng),
            )?;
            let c = TorusElem::monomial(
                &torus,
                random_vector(&mut rng, torus.rank()),
                random_scalar(&mut rng),
            )?;
            ok &= a.mul(&b)?.mul(&c)? == a.mul(&b.mul(&c)?)?;
            let one = TorusElem::one(&torus);
            ok &= a.mul(&one)? == a && one.mul(&a)? == a;
            // exact commutation
            let (va, _) = a.terms.iter().next().unwrap();
            let (vb, _) = b.terms.iter().next().unwrap();
            let comm = torus.commutation(va, vb);
            ok &= a.mul(&b)? == b.mul(&a)?.scale(&comm);
        }
        report.push(CheckRecord::named_bool(
            &format!("mul associativity [{}] x{}", torus.name, per_torus),
            "associative, unital, commutation-exact",
            "associative, unital, commutation-exact",
            ok,
        ));
    }
    Ok(report)
}

fn random_word(rng: &mut Rng, len: usize) -> StatedWord {
    let corners = [Corner::Alpha, Corner::Beta, Corner::Gamma];
    let tokens = (0..len)
        .map(|_| {
            let corner = corners[rng.below(3) as usize];
            let orient = if rng.below(2) == 0 {
                Orient::Fwd
            } else {
                Orient::Bwd
            };
            let states = match rng.below(3) {
                0 => [1i8, 1i8],
                1 => [-1, -1],
                _ => [-1, 1],
            };
            Token {
                corner,
                orient,
                states,
            }
        })
        .collect();
    StatedWord::new(tokens)
}

/// The boundary-sign cocycle and antisymmetry identities, plus the
/// twisted multiplicativity of the projection, on random word pairs.
pub fn boundary_sign_suite(seed: u64, pairs: usize) -> Result<Report, TraceError> {
    let mut rng = Rng::new(seed ^ 0x9e3779b97f4a7c15);
    let mut report = Report::default();
    let mut anti = true;
    let mut cocycle = true;
    let mut multiplicative = true;
    for _ in 0..pairs {
        let l1 = 1 + rng.below(3) as usize;
        let w1 = random_word(&mut rng, l1);
        let l2 = 1 + rng.below(3) as usize;
        let w2 = random_word(&mut rng, l2);
        let l3 = 1 + rng.below(2) as usize;
        let w3 = random_word(&mut rng, l3);
        let b12 = b_rel(&w1, &w2);
        let b21 = b_rel(&w2, &w1);
        anti &= rat_mod2(b12 + b21) == Rat::from_integer(0);
        let mut w23 = w2.clone();
        w23.tokens.extend(w3.tokens.iter().copied());
        let mut w12 = w1.clone();
        w12.tokens.extend(w2.tokens.iter().copied());
        let lhs = rat_mod2(b_rel(&w1, &w23) + b_rel(&w2, &w3));
        let rhs = rat_mod2(b_rel(&w1, &w2) + b_rel(&w12, &w3));
        cocycle &= lhs == rhs;
        // pi is multiplicative for the twisted product: the signs compose
        let (stacked, twist) = crate::uvir2d::twisted_mul(&w1, &w2);
        let lhs_sign = crate::uvir2d::minus_one_to_b(crate::uvir2d::b_of(&stacked)).mul(&twist);
        let rhs_sign = crate::uvir2d::minus_one_to_b(crate::uvir2d::b_of(&w1))
            .mul(&crate::uvir2d::minus_one_to_b(crate::uvir2d::b_of(&w2)));
        multiplicative &= lhs_sign == rhs_sign;
    }
    report.push(CheckRecord::named_bool(
        &format!("b antisymmetry x{}", pairs),
        "b(w1,w2) = -b(w2,w1)",
        "ok",
        anti,
    ));
    report.push(CheckRecord::named_bool(
        &format!("b cocycle x{}", pairs),
        "b(w1,w2 w3) + b(w2,w3) = b(w1,w2) + b(w1 w2,w3)",
        "ok",
        cocycle,
    ));
    report.push(CheckRecord::named_bool(
        &format!("pi twisted multiplicativity x{}", pairs),
        "sign of twisted product composes",
        "ok",
        multiplicative,
    ));
    Ok(report)
}

/// The boundary grading is invariant under the reduced-algebra relations
/// applied to one argument.
pub fn b_grading_suite(seed: u64, samples: usize) -> Result<Report, TraceError> {
    let mut rng = Rng::new(seed ^ 0xdeadbeefcafef00d);
    let mut ok = true;
    for _ in 0..samples {
        let lv = 1 + rng.below(3) as usize;
        let v = random_word(&mut rng, lv);
        // relation instance: fwd alpha(-,+) equals the stacked word
        // [bwd beta(+,+), bwd gamma(-,-)] as skein elements
        let w = StatedWord::new(vec![Token::fwd(Corner::Alpha, -1, 1)]);
        let w2 = StatedWord::new(vec![
            Token::bwd(Corner::Beta, 1, 1),
            Token::bwd(Corner::Gamma, -1, -1),
        ]);
        ok &= b_rel(&v, &w) == b_rel(&v, &w2);
        ok &= b_rel(&w, &v) == b_rel(&w2, &v);
        // cyclic instances of the same relation
        let wb = StatedWord::new(vec![Token::fwd(Corner::Beta, -1, 1)]);
        let wb2 = StatedWord::new(vec![
            Token::bwd(Corner::Gamma, 1, 1),
            Token::bwd(Corner::Alpha, -1, -1),
        ]);
        ok &= b_rel(&v, &wb) == b_rel(&v, &wb2);
        ok &= b_rel(&wb, &v) == b_rel(&wb2, &v);
    }
    let mut report = Report::default();
    report.push(CheckRecord::named_bool(
        &format!("b grading invariance x{}", samples),
        "b(v, .) constant on relation instances",
        "ok",
        ok,
    ));
    Ok(report)
}

fn rat_mod2(r: Rat) -> Rat {
    let two = Rat::from_integer(2);
    let mut r = r;
    while r < Rat::from_integer(0) {
        r += two;
    }
    while r >= two {
        r -= two;
    }
    r
}

/// Reduction to canonical representatives is idempotent on random
/// elements of the figure-eight gluing module.
pub fn reduction_idempotence_suite(seed: u64, samples: usize) -> Result<Report, TraceError> {
    let mut rng = Rng::new(seed ^ 0x5ca1ab1e);
    let m = figure_eight();
    let ctx = SqgmContext::new(&m)?;
    let mut ok = true;
    for _ in 0..samples {
        let mut e = TorusElem::zero(&ctx.shape);
        for _ in 0..(1 + rng.below(3)) {
            e = e.add(&TorusElem::monomial(
                &ctx.shape,
                random_vector(&mut rng, ctx.shape.rank()),
                random_scalar(&mut rng),
            )?)?;
        }
        let r1 = ctx.reduce(&e)?;
        let r2 = ctx.reduce(&r1)?;
        ok &= r1 == r2;
    }
    let mut report = Report::default();
    report.push(CheckRecord::named_bool(
        &format!("reduce idempotence x{}", samples),
        "reduce(reduce(e)) = reduce(e)",
        "ok",
        ok,
    ));
    Ok(report)
}

/// A closed test surface: the three-punctured sphere from two triangles.
pub fn theta_surface() -> SurfaceTri {
    SurfaceTri::build(vec![
        Triangle {
            id: "P".into(),
            edges: ["e1".into(), "e2".into(), "e3".into()],
        },
        Triangle {
            id: "Q".into(),
            edges: ["e1".into(), "e2".into(), "e3".into()],
        },
    ])
    .expect("theta surface")
}

/// Random valid split presentations on the theta surface whose traces are
/// invariant under renaming (reordering) of the state variables.
pub fn state_sum_order_suite(seed: u64, samples: usize) -> Result<Report, TraceError> {
    let mut rng = Rng::new(seed ^ 0xfeedface);
    let surf = theta_surface();
    let mut ok = true;
    let mut nonzero = 0usize;
    for _ in 0..samples {
        // closed loops: a corner arc in P paired with the same corner in Q
        // (both triangles carry the same edge labels in the same slots),
        // state variables shared across both paired endpoints
        let loops = 1 + rng.below(2) as usize;
        let mut strands = Vec::new();
        let mut prefactor = Vec::new();
        for l in 0..loops {
            let corner = [Corner::Alpha, Corner::Beta, Corner::Gamma][rng.below(3) as usize];
            let (v1, v2) = (2 * l, 2 * l + 1);
            strands.push(Strand2D {
                tri: 0,
                corner,
                orient: Orient::Fwd,
                ends: [StateRef::Var(v1), StateRef::Var(v2)],
            });
            strands.push(Strand2D {
                tri: 1,
                corner,
                orient: Orient::Bwd,
                ends: [StateRef::Var(v1), StateRef::Var(v2)],
            });
            prefactor.push((v1, rng.int(-1, 1)));
            prefactor.push((v2, rng.int(-1, 1)));
        }
        let n_vars = 2 * loops;
        let pres = Presentation2D {
            strands: strands.clone(),
            n_vars,
            prefactor,
        };
        // reorder the variables: reverse the index order everywhere
        let rev = |v: usize| n_vars - 1 - v;
        let swap = |s: &Strand2D| Strand2D {
            tri: s.tri,
            corner: s.corner,
            orient: s.orient,
            ends: s.ends.map(|e| match e {
                StateRef::Var(v) => StateRef::Var(rev(v)),
                StateRef::NegVar(v) => StateRef::NegVar(rev(v)),
                x => x,
            }),
        };
        let pres2 = Presentation2D {
            strands: strands.iter().map(swap).collect(),
            n_vars,
            prefactor: pres.prefactor.iter().map(|(v, c)| (rev(*v), *c)).collect(),
        };
        // renaming the variables permutes the enumeration order of the
        // state sum without touching the word order
        let t1 = trace_surface(&surf, &pres, &Scalar::one())?;
        let t2 = trace_surface(&surf, &pres2, &Scalar::one())?;
        ok &= t1 == t2;
        if !t1.is_zero() {
            nonzero += 1;
        }
    }
    let mut report = Report::default();
    report.push(CheckRecord::named_bool(
        &format!(
            "state-sum order independence x{} ({} nonzero)",
            samples, nonzero
        ),
        "trace invariant under state-variable reordering",
        "ok",
        ok,
    ));
    Ok(report)
}

/// The full property-suite bundle.
pub fn property_suites(seed: u64) -> Result<Report, TraceError> {
    let mut report = Report::default();
    report.extend(weyl_permutation_suite()?.records);
    report.extend(associativity_suite(seed, 200)?.records);
    report.extend(boundary_sign_suite(seed, 200)?.records);
    report.extend(b_grading_suite(seed, 100)?.records);
    report.extend(reduction_idempotence_suite(seed, 100)?.records);
    report.extend(state_sum_order_suite(seed, 20)?.records);
    Ok(report)
}

/// The fixed default seed of the randomized suites.
pub const DEFAULT_SEED: u64 = 0x5eed;
