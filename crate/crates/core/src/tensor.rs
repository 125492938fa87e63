//! Tensor products of polymatroids, specialized to products with U_{2,3}.
//!
//! A polymatroid g on E1 x E2 is a tensor product of f1 and f2 when
//! g(X x Y) = f1(X) f2(Y) for all X, Y. Product elements are ordered
//! E2-major: element (x, y) sits at index `index(y) * n1 + index(x)` and is
//! labelled `"x@y"`, so for products with U_{2,3} the mask of
//! A1^1 A2^2 A3^3 is just `a1 | a2 << n | a3 << 2n`.

use crate::corpus;
use crate::linrep::{LinearRep, TripleStats};
use crate::setfn::{CheckMethod, ConditionalWitness, GroundSet, SetFunction, SubsetMask};
use crate::{Error, Result};

/// Labels of the product ground set E1 x E2, E2-major.
pub fn product_labels(g1: &GroundSet, g2: &GroundSet) -> Vec<String> {
    let mut labels = Vec::with_capacity(g1.n() * g2.n());
    for y in g2.labels() {
        for x in g1.labels() {
            labels.push(format!("{x}@{y}"));
        }
    }
    labels
}

/// Mask of X x Y inside the product ground set.
pub fn product_mask(x: SubsetMask, y: SubsetMask, n1: usize) -> SubsetMask {
    let mut bits = 0u32;
    for j in y.iter() {
        bits |= x.bits() << (j * n1);
    }
    SubsetMask::from_bits(bits)
}

/// The ground set E x {1,2,3} used by every tensor product with U_{2,3}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductGround {
    base: GroundSet,
    ground: GroundSet,
}

impl ProductGround {
    /// Errors when the product would exceed the table cap (3n > 16).
    pub fn new(base: GroundSet) -> Result<Self> {
        if 3 * base.n() > crate::setfn::MAX_GROUND {
            return Err(Error::CapExceeded(format!(
                "product ground too large: 3 x {} elements",
                base.n()
            )));
        }
        let ground = GroundSet::new(product_labels(&base, corpus::u23().ground()))?;
        Ok(ProductGround { base, ground })
    }

    pub fn base(&self) -> &GroundSet {
        &self.base
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    /// Mask of A1^1 A2^2 A3^3.
    pub fn encode(&self, a1: SubsetMask, a2: SubsetMask, a3: SubsetMask) -> SubsetMask {
        let n = self.base.n();
        debug_assert!(self.base.contains_mask(a1));
        debug_assert!(self.base.contains_mask(a2));
        debug_assert!(self.base.contains_mask(a3));
        SubsetMask::from_bits(a1.bits() | a2.bits() << n | a3.bits() << (2 * n))
    }

    /// Inverse of `encode`.
    pub fn decode(&self, m: SubsetMask) -> (SubsetMask, SubsetMask, SubsetMask) {
        let n = self.base.n();
        let low = (1u32 << n) - 1;
        (
            SubsetMask::from_bits(m.bits() & low),
            SubsetMask::from_bits(m.bits() >> n & low),
            SubsetMask::from_bits(m.bits() >> (2 * n) & low),
        )
    }
}

/// The uniform matroid U_{2,3}.
pub fn u23() -> SetFunction {
    corpus::u23()
}

/// The three-line representation of U_{2,3} over GF(p).
pub fn u23_rep(p: u64) -> LinearRep {
    corpus::u23_rep(p)
}

fn kron_vec(u: &[u64], w: &[u64], p: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(u.len() * w.len());
    for &a in u {
        for &b in w {
            out.push((a as u128 * b as u128 % p as u128) as u64);
        }
    }
    out
}

/// Kronecker product of two representations: element (x, y) carries all
/// products u (x) w of generators, so the induced rank function is a tensor
/// product of the two induced rank functions.
pub fn kronecker(rep1: &LinearRep, rep2: &LinearRep) -> Result<LinearRep> {
    if rep1.field() != rep2.field() {
        return Err(Error::FieldMismatch(rep1.field(), rep2.field()));
    }
    let p = rep1.field();
    let (n1, n2) = (rep1.ground().n(), rep2.ground().n());
    if n1 * n2 > crate::setfn::MAX_GROUND {
        return Err(Error::CapExceeded(format!(
            "product ground too large: {n1} x {n2} elements"
        )));
    }
    let ground = GroundSet::new(product_labels(rep1.ground(), rep2.ground()))?;
    let mut generators = Vec::with_capacity(n1 * n2);
    for j in 0..n2 {
        for i in 0..n1 {
            let mut gens = Vec::new();
            for u in rep1.generators(i) {
                for w in rep2.generators(j) {
                    gens.push(kron_vec(u, w, p));
                }
            }
            generators.push(gens);
        }
    }
    LinearRep::new(
        ground,
        p,
        rep1.ambient_dim() * rep2.ambient_dim(),
        generators,
    )
}

/// Outcome of tensor-product checks: the defining product equalities, the
/// polymatroid axioms, and (when requested) the alpha/beta sandwich bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorVerdict {
    pub ok: bool,
    /// Pairs (X, Y) with g(X x Y) != f1(X) f2(Y).
    pub product_failures: Vec<(SubsetMask, SubsetMask)>,
    /// A polymatroid-axiom violation in g, if any.
    pub axiom_witness: Option<ConditionalWitness>,
    /// Triples (A1, A2, A3) violating beta <= g <= alpha.
    pub bound_violations: Vec<[SubsetMask; 3]>,
}

/// Verifies that `g` is a tensor product of `f1` and `f2`: it must be a
/// polymatroid on the product ground set and satisfy every product equality.
pub fn check_tensor_axioms(
    g: &SetFunction,
    f1: &SetFunction,
    f2: &SetFunction,
) -> Result<TensorVerdict> {
    let expected = product_labels(f1.ground(), f2.ground());
    if g.ground().labels() != expected.as_slice() {
        return Err(Error::GroundMismatch(format!(
            "expected product labels {:?}",
            expected
        )));
    }
    let axiom_witness = g.check_polymatroid(CheckMethod::Elemental).witness;
    let mut product_failures = Vec::new();
    let n1 = f1.ground().n();
    for x in f1.ground().masks() {
        for y in f2.ground().masks() {
            let got = g.value(product_mask(x, y, n1));
            if *got != f1.value(x) * f2.value(y) {
                product_failures.push((x, y));
            }
        }
    }
    let ok = axiom_witness.is_none() && product_failures.is_empty();
    Ok(TensorVerdict {
        ok,
        product_failures,
        axiom_witness,
        bound_violations: Vec::new(),
    })
}

/// The section-4 statistics of a subset triple, read off a rank table.
pub fn triple_stats(
    f: &SetFunction,
    a1: SubsetMask,
    a2: SubsetMask,
    a3: SubsetMask,
) -> TripleStats {
    TripleStats::from_set_function(f, a1, a2, a3)
}

/// Checks the sandwich bounds beta(A1,A2,A3) <= g(A1^1 A2^2 A3^3) <=
/// alpha(A1,A2,A3) over all subset triples of the base ground set.
///
/// `g` must first pass `check_tensor_axioms` against (f, U_{2,3}); a failure
/// there is reported as an error rather than a verdict, since the bounds are
/// only claimed for genuine tensor products.
pub fn check_gentens_bounds(g: &SetFunction, f: &SetFunction) -> Result<TensorVerdict> {
    check_gentens_bounds_threaded(g, f, 1)
}

/// As [`check_gentens_bounds`], scanning triple ranges on `threads` workers.
pub fn check_gentens_bounds_threaded(
    g: &SetFunction,
    f: &SetFunction,
    threads: usize,
) -> Result<TensorVerdict> {
    let mut verdict = check_tensor_axioms(g, f, &u23())?;
    if !verdict.ok {
        return Err(Error::NotATensorProduct(describe_failure(&verdict, f)));
    }
    let pg = ProductGround::new(f.ground().clone())?;
    let total = 1u64 << (3 * f.ground().n());
    let workers = threads.clamp(1, 64) as u64;
    let chunk = total.div_ceil(workers);
    let mut violations: Vec<[SubsetMask; 3]> = if workers == 1 {
        scan_bounds(g, f, &pg, 0, total)
    } else {
        std::thread::scope(|scope| {
            let pg = &pg;
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let (lo, hi) = (w * chunk, ((w + 1) * chunk).min(total));
                    scope.spawn(move || scan_bounds(g, f, pg, lo, hi))
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("scan worker"))
                .collect()
        })
    };
    violations.sort();
    verdict.ok = violations.is_empty();
    verdict.bound_violations = violations;
    Ok(verdict)
}

fn scan_bounds(
    g: &SetFunction,
    f: &SetFunction,
    pg: &ProductGround,
    lo: u64,
    hi: u64,
) -> Vec<[SubsetMask; 3]> {
    let n = f.ground().n();
    let low = (1u64 << n) - 1;
    let mut out = Vec::new();
    for idx in lo..hi {
        let a1 = SubsetMask::from_bits((idx & low) as u32);
        let a2 = SubsetMask::from_bits((idx >> n & low) as u32);
        let a3 = SubsetMask::from_bits((idx >> (2 * n) & low) as u32);
        let stats = TripleStats::from_set_function(f, a1, a2, a3);
        let v = g.value(pg.encode(a1, a2, a3));
        if *v < stats.beta || *v > stats.alpha {
            out.push([a1, a2, a3]);
        }
    }
    out
}

fn describe_failure(verdict: &TensorVerdict, f: &SetFunction) -> String {
    if let Some(w) = &verdict.axiom_witness {
        return format!("g violates the polymatroid axioms at {:?}", w);
    }
    if let Some((x, y)) = verdict.product_failures.first() {
        return format!(
            "product equality fails at X={}, Y={}",
            f.ground().describe(*x),
            corpus::u23().ground().describe(*y)
        );
    }
    "unknown".into()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linrep::multi_intersection_dim;
    use crate::rat::rat;
    use crate::setfn::EMPTY;

    #[test]
    fn u23_basics() {
        let f = u23();
        assert_eq!(*f.value(SubsetMask::singleton(1)), rat(1));
        assert_eq!(*f.value(f.ground().full_mask()), rat(2));
        assert!(f.is_matroid().unwrap());
    }

    #[test]
    fn product_mask_layout() {
        // two base elements, mask conventions from the encode ordering
        let g1 = GroundSet::new(["a", "b"]).unwrap();
        let g2 = GroundSet::new(["1", "2", "3"]).unwrap();
        let labels = product_labels(&g1, &g2);
        assert_eq!(
            labels,
            ["a@1", "b@1", "a@2", "b@2", "a@3", "b@3"]
        );
        let x = SubsetMask::from_bits(0b01); // {a}
        let y = SubsetMask::from_bits(0b101); // {1,3}
        assert_eq!(product_mask(x, y, 2).bits(), 0b01_00_01);
    }

    #[test]
    fn encode_decode_round_trip() {
        let pg = ProductGround::new(GroundSet::new(["a", "b"]).unwrap()).unwrap();
        let a1 = SubsetMask::from_bits(0b10);
        let a2 = SubsetMask::from_bits(0b01);
        let a3 = SubsetMask::from_bits(0b11);
        let m = pg.encode(a1, a2, a3);
        assert_eq!(pg.decode(m), (a1, a2, a3));
        assert_eq!(m.bits(), 0b11_01_10);
    }

    #[test]
    fn product_ground_cap() {
        let base = GroundSet::new((0..6).map(|i| i.to_string())).unwrap();
        assert!(matches!(
            ProductGround::new(base),
            Err(Error::CapExceeded(_))
        ));
    }

    #[test]
    fn kronecker_of_u23_with_itself() {
        let rep = kronecker(&u23_rep(2), &u23_rep(2)).unwrap();
        assert_eq!(rep.ground().n(), 9);
        assert_eq!(rep.ambient_dim(), 4);
        let g = rep.rank_function();
        let f = u23();
        // g({1} x {1,2}) = 1 * 2
        let m = product_mask(SubsetMask::singleton(0), SubsetMask::from_bits(0b011), 3);
        assert_eq!(*g.value(m), rat(2));
        let verdict = check_tensor_axioms(&g, &f, &f).unwrap();
        assert!(verdict.ok, "{verdict:?}");
    }

    #[test]
    fn kronecker_with_zero_factor_is_zero() {
        let ground = GroundSet::new(["a"]).unwrap();
        let zero = LinearRep::new(ground, 2, 2, vec![Vec::new()]).unwrap();
        let rep = kronecker(&zero, &u23_rep(2)).unwrap();
        let g = rep.rank_function();
        assert!(g.ground().masks().all(|m| g.value(m) == &rat(0)));
    }

    #[test]
    fn kronecker_field_mismatch() {
        assert!(matches!(
            kronecker(&u23_rep(2), &u23_rep(3)),
            Err(Error::FieldMismatch(2, 3))
        ));
    }

    #[test]
    fn kronecker_pair_rep_full_rank() {
        let rep = kronecker(&corpus::pair_rep_gf2(), &u23_rep(2)).unwrap();
        let g = rep.rank_function();
        assert_eq!(*g.value(g.ground().full_mask()), rat(6));
        let f = corpus::pair_rep_gf2().rank_function();
        assert!(check_tensor_axioms(&g, &f, &u23()).unwrap().ok);
    }

    #[test]
    fn tensor_axioms_catch_perturbation() {
        let rep = kronecker(&u23_rep(2), &u23_rep(2)).unwrap();
        let mut g = rep.rank_function();
        let f = u23();
        let full = g.ground().full_mask();
        g.set_value(full, g.value(full) - rat(1));
        let verdict = check_tensor_axioms(&g, &f, &f).unwrap();
        assert!(!verdict.ok);
        assert!(verdict
            .product_failures
            .contains(&(f.ground().full_mask(), f.ground().full_mask())));
    }

    #[test]
    fn tensor_axioms_zero_against_nonzero() {
        let f = u23();
        let pg = ProductGround::new(f.ground().clone()).unwrap();
        let zero = SetFunction::tabulate(pg.ground().clone(), |_| rat(0));
        let verdict = check_tensor_axioms(&zero, &f, &f).unwrap();
        assert!(!verdict.ok);
        assert!(!verdict.product_failures.is_empty());
    }

    #[test]
    fn tensor_axioms_ground_mismatch() {
        let f = u23();
        assert!(matches!(
            check_tensor_axioms(&f, &f, &f),
            Err(Error::GroundMismatch(_))
        ));
    }

    #[test]
    fn triple_stats_u23_singletons() {
        let f = u23();
        let stats = triple_stats(
            &f,
            SubsetMask::singleton(0),
            SubsetMask::singleton(1),
            SubsetMask::singleton(2),
        );
        assert_eq!(stats.r, [rat(1), rat(1), rat(1)]);
        assert_eq!(stats.s_pair, [rat(2), rat(2), rat(2)]);
        assert_eq!(stats.s, rat(2));
        assert_eq!(stats.t, [rat(0), rat(0), rat(0)]);
        assert_eq!(stats.alpha, rat(3));
        assert_eq!(stats.beta, rat(3));
    }

    #[test]
    fn triple_stats_empty_triple() {
        let f = u23();
        let stats = triple_stats(&f, EMPTY, EMPTY, EMPTY);
        assert_eq!(stats.alpha, rat(0));
        assert_eq!(stats.beta, rat(0));
    }

    #[test]
    fn triple_stats_vamos_paired_triple() {
        let v = corpus::vamos();
        let g = v.ground();
        let a = g.subset(&["a", "a'"]).unwrap();
        let b = g.subset(&["b", "b'"]).unwrap();
        let c = g.subset(&["c", "c'"]).unwrap();
        let stats = triple_stats(&v, a, b, c);
        assert_eq!(stats.r, [rat(2), rat(2), rat(2)]);
        assert_eq!(stats.s_pair, [rat(3), rat(3), rat(3)]);
        assert_eq!(stats.s, rat(4));
        assert_eq!(stats.alpha, rat(5));
        assert_eq!(stats.beta, rat(5));
    }

    #[test]
    fn triple_stats_permutation_symmetry() {
        let v = corpus::vamos();
        let g = v.ground();
        let a = g.subset(&["a", "b"]).unwrap();
        let b = g.subset(&["b'", "c"]).unwrap();
        let c = g.subset(&["d", "d'", "a'"]).unwrap();
        let s1 = triple_stats(&v, a, b, c);
        let s2 = triple_stats(&v, c, a, b);
        assert_eq!(s1.alpha, s2.alpha);
        assert_eq!(s1.beta, s2.beta);
        assert_eq!(s1.r[0], s2.r[1]);
        assert_eq!(s1.s_pair[0], s2.s_pair[1]);
    }

    #[test]
    fn gentens_bounds_on_kronecker_square() {
        let rep = kronecker(&u23_rep(2), &u23_rep(2)).unwrap();
        let g = rep.rank_function();
        let f = u23();
        let verdict = check_gentens_bounds(&g, &f).unwrap();
        assert!(verdict.ok, "{:?}", verdict.bound_violations);
        // the sandwich pins g = 3 at the singleton triple
        let pg = ProductGround::new(f.ground().clone()).unwrap();
        let m = pg.encode(
            SubsetMask::singleton(0),
            SubsetMask::singleton(1),
            SubsetMask::singleton(2),
        );
        assert_eq!(*g.value(m), rat(3));
    }

    #[test]
    fn gentens_bounds_threaded_matches_sequential() {
        let rep = kronecker(&u23_rep(2), &u23_rep(2)).unwrap();
        let g = rep.rank_function();
        let f = u23();
        let seq = check_gentens_bounds(&g, &f).unwrap();
        let par = check_gentens_bounds_threaded(&g, &f, 4).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn gentens_bounds_catch_hand_built_violation() {
        let rep = kronecker(&u23_rep(2), &u23_rep(2)).unwrap();
        let mut g = rep.rank_function();
        let f = u23();
        // lower g strictly below beta at one non-rectangular triple while
        // keeping every product equality intact
        let pg = ProductGround::new(f.ground().clone()).unwrap();
        let triple = [
            SubsetMask::singleton(0),
            SubsetMask::singleton(1),
            SubsetMask::singleton(2),
        ];
        let m = pg.encode(triple[0], triple[1], triple[2]);
        g.set_value(m, rat(2));
        match check_gentens_bounds(&g, &f) {
            // the perturbed table may stop being a polymatroid; either a
            // precondition error or a reported violation is acceptable,
            // depending on where it trips first
            Ok(verdict) => {
                assert!(!verdict.ok);
                assert!(verdict.bound_violations.contains(&triple));
            }
            Err(Error::NotATensorProduct(_)) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn prop_reptens_formula_on_kronecker_square() {
        // g(A1^1 A2^2 A3^3) = sum f(A_i) - dim(U1 n U2 n U3), intersections
        // taken in the base space
        let base = u23_rep(2);
        let rep = kronecker(&base, &u23_rep(2)).unwrap();
        let g = rep.rank_function();
        let f = u23();
        let pg = ProductGround::new(f.ground().clone()).unwrap();
        for a1 in f.ground().masks() {
            for a2 in f.ground().masks() {
                for a3 in f.ground().masks() {
                    let dim = multi_intersection_dim(
                        &[base.subspace(a1), base.subspace(a2), base.subspace(a3)],
                        2,
                    )
                    .unwrap();
                    let expected =
                        f.value(a1) + f.value(a2) + f.value(a3) - rat(dim as i64);
                    assert_eq!(*g.value(pg.encode(a1, a2, a3)), expected);
                }
            }
        }
    }
}
