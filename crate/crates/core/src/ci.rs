//! Common information: witnesses, extensions, and the bridge from tensor
//! products.
//!
//! An element z is a common information for a pair (X, Y) when f(z) equals
//! the mutual value f(X : Y) and f(z | X) = f(z | Y) = 0. For a linear
//! representation such a z always exists: add the subspace U_X n U_Y. For a
//! polymatroid that admits a tensor product g with U_{2,3}, the extension
//!
//!   f(Az) = g(X^1 Y^2 A^3) - f(XY)
//!
//! does the job for every pair (X, Y); [`check_1ci_via_tensor`] replays that
//! construction and validates it pair by pair. There is also an LP route
//! that decides the existence of a single-pair CI extension directly from
//! the elemental polymatroid constraints, with no tensor product in hand.

use crate::linrep::{intersection_basis, LinearRep};
use crate::lp::{self, FarkasCertificate, LinearSystem};
use crate::rat::{rat, Rational};
use crate::setfn::{CheckMethod, GroundSet, SetFunction, SubsetMask};
use crate::tensor::{check_tensor_axioms, u23, ProductGround};
use crate::{Error, Result};

/// Largest ground set accepted by the CI extension LP (2^n variables).
pub const MAX_CI_LP: usize = 8;

/// The three defining quantities of a common-information claim; z witnesses
/// the pair (X, Y) exactly when all three are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CIWitness {
    pub z: String,
    pub x: SubsetMask,
    pub y: SubsetMask,
    /// f(z) - f(X : Y).
    pub rank_gap: Rational,
    /// f(z | X).
    pub cond_x: Rational,
    /// f(z | Y).
    pub cond_y: Rational,
}

impl CIWitness {
    pub fn is_valid(&self) -> bool {
        let zero = Rational::from_integer(0.into());
        self.rank_gap == zero && self.cond_x == zero && self.cond_y == zero
    }
}

/// Evaluates the common-information quantities for `z` against the pair
/// (X, Y); the masks index `f_ext.ground()` and must avoid z itself.
pub fn is_common_information(
    f_ext: &SetFunction,
    z: &str,
    x: SubsetMask,
    y: SubsetMask,
) -> Result<CIWitness> {
    let zi = f_ext
        .ground()
        .index_of(z)
        .ok_or_else(|| Error::MissingElement(z.to_string()))?;
    if x.contains(zi) || y.contains(zi) {
        return Err(Error::LabelMismatch(format!(
            "the pair (X, Y) must avoid the tested element {z:?}"
        )));
    }
    let zm = SubsetMask::singleton(zi);
    Ok(CIWitness {
        z: z.to_string(),
        x,
        y,
        rank_gap: f_ext.value(zm) - f_ext.mutual(x, y),
        cond_x: f_ext.given(zm, x),
        cond_y: f_ext.given(zm, y),
    })
}

/// First label of the form z, z1, z2, ... that is not already taken.
pub fn fresh_label(ground: &GroundSet) -> String {
    if ground.index_of("z").is_none() {
        return "z".to_string();
    }
    (1..)
        .map(|k| format!("z{k}"))
        .find(|l| ground.index_of(l).is_none())
        .expect("unbounded label family")
}

/// Extends a representation with z spanned by U_X n U_Y, the linear CI
/// extension for the pair (X, Y).
pub fn linear_ci_extension(rep: &LinearRep, x: SubsetMask, y: SubsetMask) -> Result<LinearRep> {
    let p = rep.field();
    let vz = intersection_basis(&rep.subspace(x), &rep.subspace(y), p)?;
    let mut labels: Vec<String> = rep.ground().labels().to_vec();
    labels.push(fresh_label(rep.ground()));
    let ground = GroundSet::new(labels)?;
    let mut generators: Vec<Vec<Vec<u64>>> = (0..rep.ground().n())
        .map(|i| rep.generators(i).to_vec())
        .collect();
    generators.push(vz);
    let ext = LinearRep::new(ground, p, rep.ambient_dim(), generators)?;
    debug_assert!(extension_rank_identity_holds(rep, &ext, x, y)?);
    Ok(ext)
}

/// f(Az) = f(z) + f(A) - dim(U_X n U_Y n U_A) for every A, checked on the
/// freshly built linear extension.
fn extension_rank_identity_holds(
    rep: &LinearRep,
    ext: &LinearRep,
    x: SubsetMask,
    y: SubsetMask,
) -> Result<bool> {
    let n = rep.ground().n();
    let f = rep.rank_function();
    let fe = ext.rank_function();
    let zm = SubsetMask::singleton(n);
    for a in rep.ground().masks() {
        let dim = crate::linrep::multi_intersection_dim(
            &[rep.subspace(x), rep.subspace(y), rep.subspace(a)],
            rep.field(),
        )?;
        let expected = fe.value(zm) + f.value(a) - rat(dim as i64);
        if *fe.value(a.union(zm)) != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The Theorem 5.1 construction: given a tensor product g of f with U_{2,3},
/// extend f by z with f(Az) = g(X^1 Y^2 A^3) - f(XY) for every A. The
/// result extends f, is a polymatroid, and z is a common information for
/// (X, Y).
pub fn ci_extension_from_tensor(
    f: &SetFunction,
    g: &SetFunction,
    x: SubsetMask,
    y: SubsetMask,
) -> Result<SetFunction> {
    let verdict = check_tensor_axioms(g, f, &u23())?;
    if !verdict.ok {
        return Err(Error::NotATensorProduct(
            "the supplied g is not a tensor product of f with U_{2,3}".into(),
        ));
    }
    let pg = ProductGround::new(f.ground().clone())?;
    extension_table(f, g, &pg, x, y)
}

fn extension_table(
    f: &SetFunction,
    g: &SetFunction,
    pg: &ProductGround,
    x: SubsetMask,
    y: SubsetMask,
) -> Result<SetFunction> {
    let n = f.ground().n();
    let mut labels: Vec<String> = f.ground().labels().to_vec();
    labels.push(fresh_label(f.ground()));
    let ground = GroundSet::new(labels)?;
    let f_xy = f.value(x.union(y)).clone();
    let low = (1u32 << n) - 1;
    Ok(SetFunction::tabulate(ground, |m| {
        let a = SubsetMask::from_bits(m.bits() & low);
        if m.contains(n) {
            g.value(pg.encode(x, y, a)) - &f_xy
        } else {
            f.value(a).clone()
        }
    }))
}

/// Validation record for one pair (X, Y).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCheck {
    pub x: SubsetMask,
    pub y: SubsetMask,
    pub polymatroid_ok: bool,
    pub extends_base: bool,
    pub witness: CIWitness,
}

impl PairCheck {
    pub fn ok(&self) -> bool {
        self.polymatroid_ok && self.extends_base && self.witness.is_valid()
    }
}

/// Per-pair validation of the tensor-to-CI construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneCiReport {
    pub ok: bool,
    pub pairs: Vec<PairCheck>,
}

/// Runs [`ci_extension_from_tensor`] for every unordered pair of subsets
/// (including equal and empty ones) and validates all three proof
/// obligations: the extension is a polymatroid under all three check
/// methods, it extends f, and z is a common information for the pair.
pub fn check_1ci_via_tensor(f: &SetFunction, g: &SetFunction) -> Result<OneCiReport> {
    let verdict = check_tensor_axioms(g, f, &u23())?;
    if !verdict.ok {
        return Err(Error::NotATensorProduct(
            "the supplied g is not a tensor product of f with U_{2,3}".into(),
        ));
    }
    let pg = ProductGround::new(f.ground().clone())?;
    let mut pairs = Vec::new();
    for x in f.ground().masks() {
        for y in f.ground().masks() {
            if y.bits() < x.bits() {
                continue;
            }
            let ext = extension_table(f, g, &pg, x, y)?;
            let polymatroid_ok = CheckMethod::ALL
                .iter()
                .all(|&m| ext.check_polymatroid(m).is_polymatroid);
            let extends_base = ext.is_extension_of(f)?;
            let z = ext.ground().label(f.ground().n()).to_string();
            let witness = is_common_information(&ext, &z, x, y)?;
            pairs.push(PairCheck {
                x,
                y,
                polymatroid_ok,
                extends_base,
                witness,
            });
        }
    }
    Ok(OneCiReport {
        ok: pairs.iter().all(PairCheck::ok),
        pairs,
    })
}

/// Outcome of the LP route for a single pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CiLpOutcome {
    Feasible(SetFunction),
    Infeasible(FarkasCertificate),
}

/// Builds the feasibility system for a CI extension of `f` at the pair
/// (X, Y): one variable h(A) = f(Az) per subset A, the defining equalities
/// h(empty) = f(X:Y), h(X) = f(X), h(Y) = f(Y), and every elemental
/// polymatroid inequality on the extended ground set that involves z
/// (the ones that do not are properties of f and are checked up front).
pub fn ci_extension_system(
    f: &SetFunction,
    x: SubsetMask,
    y: SubsetMask,
) -> Result<LinearSystem> {
    let n = f.ground().n();
    if n > MAX_CI_LP {
        return Err(Error::CapExceeded(format!(
            "CI extension LP needs n <= {MAX_CI_LP}, got {n}"
        )));
    }
    if !f.is_polymatroid() {
        return Err(Error::NotAPolymatroid);
    }
    let z = fresh_label(f.ground());
    let var_names = f
        .ground()
        .masks()
        .map(|m| {
            let mut labels = f.ground().labels_of(m);
            labels.push(z.clone());
            format!("{{{}}}", labels.join(","))
        })
        .collect();
    let mut sys = LinearSystem::new(f.ground().num_subsets(), var_names);
    let var = |m: SubsetMask| m.bits() as usize;

    sys.push_eq(vec![(var(crate::setfn::EMPTY), rat(1))], f.mutual(x, y));
    sys.push_eq(vec![(var(x), rat(1))], f.value(x).clone());
    sys.push_eq(vec![(var(y), rat(1))], f.value(y).clone());

    for b in f.ground().masks() {
        // f(z : z | B) >= 0: h(B) >= f(B)
        sys.push_ineq(vec![(var(b), rat(1))], f.value(b).clone());
        for e in 0..n {
            if b.contains(e) {
                continue;
            }
            let be = b.insert(e);
            // f(e : e | Bz) >= 0: h(Be) - h(B) >= 0
            sys.push_ineq(vec![(var(be), rat(1)), (var(b), rat(-1))], rat(0));
            // f(e : z | B) >= 0: h(B) - h(Be) >= f(B) - f(Be)
            sys.push_ineq(
                vec![(var(b), rat(1)), (var(be), rat(-1))],
                f.value(b) - f.value(be),
            );
            for e2 in e + 1..n {
                if b.contains(e2) {
                    continue;
                }
                let be2 = b.insert(e2);
                let bee2 = be.insert(e2);
                // f(e : e2 | Bz) >= 0
                sys.push_ineq(
                    vec![
                        (var(be), rat(1)),
                        (var(be2), rat(1)),
                        (var(bee2), rat(-1)),
                        (var(b), rat(-1)),
                    ],
                    rat(0),
                );
            }
        }
    }
    Ok(sys)
}

/// Decides whether `f` admits a CI extension for the pair (X, Y), with no
/// tensor product in hand. Feasible outcomes carry the extension table;
/// infeasible ones a certificate for [`ci_extension_system`].
pub fn ci_extension_lp(f: &SetFunction, x: SubsetMask, y: SubsetMask) -> Result<CiLpOutcome> {
    let sys = ci_extension_system(f, x, y)?;
    match lp::solve_feasibility(&sys) {
        lp::Outcome::Feasible(point) => {
            let n = f.ground().n();
            let mut labels: Vec<String> = f.ground().labels().to_vec();
            labels.push(fresh_label(f.ground()));
            let ground = GroundSet::new(labels)?;
            let low = (1u32 << n) - 1;
            let ext = SetFunction::tabulate(ground, |m| {
                let a = (m.bits() & low) as usize;
                if m.contains(n) {
                    point[a].clone()
                } else {
                    f.values()[a].clone()
                }
            });
            debug_assert!(ext.is_polymatroid());
            Ok(CiLpOutcome::Feasible(ext))
        }
        lp::Outcome::Infeasible(cert) => Ok(CiLpOutcome::Infeasible(cert)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::linrep::TripleStats;
    use crate::tensor::kronecker;

    fn pair_setup() -> (LinearRep, SetFunction, SetFunction) {
        let rep = corpus::pair_rep_gf2();
        let f = rep.rank_function();
        let g = kronecker(&rep, &corpus::u23_rep(2)).unwrap().rank_function();
        (rep, f, g)
    }

    #[test]
    fn linear_extension_of_the_pair_example() {
        let (rep, _, _) = pair_setup();
        let a = SubsetMask::singleton(0);
        let b = SubsetMask::singleton(1);
        let ext = linear_ci_extension(&rep, a, b).unwrap();
        assert_eq!(ext.ground().labels(), ["a", "b", "z"]);
        // V_z = <e2>
        assert_eq!(ext.generators(2), [vec![0, 1, 0]]);
        let fe = ext.rank_function();
        let z = SubsetMask::singleton(2);
        assert_eq!(*fe.value(z), rat(1));
        assert_eq!(*fe.value(z.union(a)), rat(2));
        assert_eq!(*fe.value(z.union(b)), rat(2));
        assert_eq!(*fe.value(z.union(a).union(b)), rat(3));
        let w = is_common_information(&fe, "z", a, b).unwrap();
        assert!(w.is_valid(), "{w:?}");
    }

    #[test]
    fn witness_fails_against_wrong_pair() {
        let (rep, _, _) = pair_setup();
        let a = SubsetMask::singleton(0);
        let b = SubsetMask::singleton(1);
        let ext = linear_ci_extension(&rep, a, b).unwrap();
        let fe = ext.rank_function();
        // f(z) = 1 but f(a : a) = f(a) = 2
        let w = is_common_information(&fe, "z", a, a).unwrap();
        assert_eq!(w.rank_gap, rat(-1));
        assert!(!w.is_valid());
    }

    #[test]
    fn zero_common_information_of_disjoint_lines() {
        let rep = corpus::u23_rep(2);
        let x = SubsetMask::singleton(0);
        let y = SubsetMask::singleton(1);
        let ext = linear_ci_extension(&rep, x, y).unwrap();
        assert!(ext.generators(3).is_empty());
        let fe = ext.rank_function();
        let w = is_common_information(&fe, "z", x, y).unwrap();
        assert!(w.is_valid());
    }

    #[test]
    fn self_pair_duplicates_the_span() {
        let rep = corpus::pair_rep_gf2();
        let x = SubsetMask::singleton(0);
        let ext = linear_ci_extension(&rep, x, x).unwrap();
        let fe = ext.rank_function();
        let z = SubsetMask::singleton(2);
        assert_eq!(fe.given(z, x), rat(0));
    }

    #[test]
    fn missing_element_is_reported() {
        let f = corpus::u23();
        assert!(matches!(
            is_common_information(&f, "z", SubsetMask::singleton(0), SubsetMask::singleton(1)),
            Err(Error::MissingElement(_))
        ));
    }

    #[test]
    fn fresh_label_suffixes() {
        let g = GroundSet::new(["z", "z1"]).unwrap();
        assert_eq!(fresh_label(&g), "z2");
    }

    #[test]
    fn tensor_extension_rows_match_theorem() {
        let (_, f, g) = pair_setup();
        let x = SubsetMask::singleton(0);
        let y = SubsetMask::singleton(1);
        let ext = ci_extension_from_tensor(&f, &g, x, y).unwrap();
        let z = SubsetMask::singleton(2);
        // f(z) = f(X : Y)
        assert_eq!(*ext.value(z), f.mutual(x, y));
        // f(Xz) = f(X)
        assert_eq!(ext.value(x.union(z)), f.value(x));
        assert_eq!(ext.value(y.union(z)), f.value(y));
        assert!(ext.is_extension_of(&f).unwrap());
    }

    #[test]
    fn tensor_extension_rejects_non_tensor() {
        let (_, f, g) = pair_setup();
        let mut bad = g.clone();
        let full = bad.ground().full_mask();
        bad.set_value(full, rat(99));
        assert!(matches!(
            ci_extension_from_tensor(&f, &bad, SubsetMask::singleton(0), SubsetMask::singleton(1)),
            Err(Error::NotATensorProduct(_))
        ));
    }

    #[test]
    fn tensor_route_equals_linear_route() {
        let (rep, f, g) = pair_setup();
        for x in f.ground().masks() {
            for y in f.ground().masks() {
                let via_tensor = ci_extension_from_tensor(&f, &g, x, y).unwrap();
                let via_subspace = linear_ci_extension(&rep, x, y).unwrap().rank_function();
                assert_eq!(via_tensor, via_subspace, "pair ({x:?}, {y:?})");
            }
        }
    }

    #[test]
    fn all_pairs_pass_on_u23_self_tensor() {
        let f = corpus::u23();
        let g = kronecker(&corpus::u23_rep(2), &corpus::u23_rep(2))
            .unwrap()
            .rank_function();
        let report = check_1ci_via_tensor(&f, &g).unwrap();
        assert!(report.ok);
        // unordered pairs of the 8 subsets
        assert_eq!(report.pairs.len(), 8 * 9 / 2);
    }

    #[test]
    fn theorem_final_step_chain() {
        // g(X^1 Y^2 A^3) >= beta(X, Y, A) >= f(XY) + f(A), which is what
        // makes f(z : z | A) nonnegative in the construction
        let (_, f, g) = pair_setup();
        let pg = ProductGround::new(f.ground().clone()).unwrap();
        for x in f.ground().masks() {
            for y in f.ground().masks() {
                for a in f.ground().masks() {
                    let stats = TripleStats::from_set_function(&f, x, y, a);
                    let gv = g.value(pg.encode(x, y, a));
                    assert!(*gv >= stats.beta);
                    assert!(stats.beta >= f.value(x.union(y)) + f.value(a));
                }
            }
        }
    }

    #[test]
    fn ci_lp_feasible_on_linear_pair_example() {
        let (rep, f, _) = pair_setup();
        let x = SubsetMask::singleton(0);
        let y = SubsetMask::singleton(1);
        match ci_extension_lp(&f, x, y).unwrap() {
            CiLpOutcome::Feasible(ext) => {
                assert!(ext.is_polymatroid());
                let z = ext.ground().label(f.ground().n()).to_string();
                let w = is_common_information(&ext, &z, x, y).unwrap();
                assert!(w.is_valid());
                // the linear extension is one admissible witness; tables may
                // differ, but both must extend f
                let linear = linear_ci_extension(&rep, x, y).unwrap().rank_function();
                assert!(linear.is_extension_of(&f).unwrap());
                assert!(ext.is_extension_of(&f).unwrap());
            }
            CiLpOutcome::Infeasible(_) => panic!("linear polymatroids are 1-CI"),
        }
    }

    #[test]
    fn ci_lp_pins_zero_rank_z_on_u23() {
        let f = corpus::u23();
        let x = SubsetMask::singleton(0);
        let y = SubsetMask::singleton(1);
        match ci_extension_lp(&f, x, y).unwrap() {
            CiLpOutcome::Feasible(ext) => {
                let z = SubsetMask::singleton(3);
                assert_eq!(*ext.value(z), rat(0), "f(1:2) = 0 pins f(z) = 0");
            }
            CiLpOutcome::Infeasible(_) => panic!("u23 admits CI extensions"),
        }
    }

    #[test]
    fn ci_lp_rejects_non_polymatroids() {
        let g = GroundSet::new(["a", "b"]).unwrap();
        let f = SetFunction::tabulate(g, |m| rat(if m.is_empty() { 0 } else { -1 }));
        assert!(matches!(
            ci_extension_lp(&f, SubsetMask::singleton(0), SubsetMask::singleton(1)),
            Err(Error::NotAPolymatroid)
        ));
    }

    #[test]
    fn ci_lp_cap() {
        let big = GroundSet::new((0..9).map(|i| i.to_string())).unwrap();
        let f = SetFunction::tabulate(big, |m| rat(m.card() as i64));
        assert!(matches!(
            ci_extension_lp(&f, SubsetMask::singleton(0), SubsetMask::singleton(1)),
            Err(Error::CapExceeded(_))
        ));
    }
}
