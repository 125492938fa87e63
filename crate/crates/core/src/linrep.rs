//! Linear representations over prime fields: Gaussian elimination, subspace
//! intersections, induced rank functions, and the triple-intersection bounds
//!
//!   max{0, s - sum s_i + sum r_i}  <=  dim(U1 n U2 n U3)  <=  min{t1, t2, t3}.
//!
//! Vectors are `Vec<u64>` with entries reduced mod p. Row reduction always
//! pivots on the first nonzero column with the first available row, so every
//! computed basis is deterministic and stable across runs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::rat::{rat, Rational};
use crate::setfn::{GroundSet, SetFunction, SubsetMask};
use crate::{Error, Result};

/// Deterministic primality check; fields here are small.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p.
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc: u64 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn submod(a: u64, b: u64, p: u64) -> u64 {
    (a + p - b % p) % p
}

/// In-place reduction to reduced row echelon form. Returns the pivot columns.
fn rref(rows: &mut Vec<Vec<u64>>, p: u64) -> Vec<usize> {
    let dim = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut next_row = 0;
    for col in 0..dim {
        let Some(r) = (next_row..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(next_row, r);
        let inv = inv_mod(rows[next_row][col], p);
        for c in col..dim {
            rows[next_row][c] = mulmod(rows[next_row][c], inv, p);
        }
        for r in 0..rows.len() {
            if r != next_row && rows[r][col] != 0 {
                let factor = rows[r][col];
                for c in col..dim {
                    let delta = mulmod(factor, rows[next_row][c], p);
                    rows[r][c] = submod(rows[r][c], delta, p);
                }
            }
        }
        pivots.push(col);
        next_row += 1;
        if next_row == rows.len() {
            break;
        }
    }
    rows.truncate(next_row);
    pivots
}

fn check_vectors(vectors: &[Vec<u64>], p: u64) -> Result<usize> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let dim = vectors.first().map_or(0, Vec::len);
    for v in vectors {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: v.len(),
            });
        }
    }
    Ok(dim)
}

/// Rank of the span of `vectors` over GF(p).
pub fn ff_rank(vectors: &[Vec<u64>], p: u64) -> Result<usize> {
    check_vectors(vectors, p)?;
    let mut rows: Vec<Vec<u64>> = vectors.iter().map(|v| reduce_vec(v, p)).collect();
    Ok(rref(&mut rows, p).len())
}

fn reduce_vec(v: &[u64], p: u64) -> Vec<u64> {
    v.iter().map(|&x| x % p).collect()
}

/// Deterministic basis (RREF rows) of the span.
pub fn span_basis(vectors: &[Vec<u64>], p: u64) -> Result<Vec<Vec<u64>>> {
    check_vectors(vectors, p)?;
    let mut rows: Vec<Vec<u64>> = vectors.iter().map(|v| reduce_vec(v, p)).collect();
    rref(&mut rows, p);
    Ok(rows)
}

/// Basis of the right kernel {x : M x = 0} of the matrix with the given rows,
/// via the standard free-variable construction on the RREF.
fn kernel_basis(rows: &[Vec<u64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let pivots = rref(&mut m, p);
    let pivot_of_col: BTreeMap<usize, usize> =
        pivots.iter().enumerate().map(|(r, &c)| (c, r)).collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_of_col.contains_key(&free) {
            continue;
        }
        let mut x = vec![0u64; cols];
        x[free] = 1;
        for (&col, &row) in &pivot_of_col {
            // pivot entry is 1, so x[col] = -m[row][free]
            x[col] = submod(0, m[row][free], p);
        }
        basis.push(x);
    }
    basis
}

/// Basis of the intersection of the spans of `u` and `w`.
///
/// A vector lies in both spans exactly when some coefficient pair (lambda,
/// mu) with lambda.u = mu.w exists; those pairs are the left kernel of the
/// stacked generator matrix. The result is reduced to a deterministic basis.
pub fn intersection_basis(u: &[Vec<u64>], w: &[Vec<u64>], p: u64) -> Result<Vec<Vec<u64>>> {
    let du = check_vectors(u, p)?;
    let dw = check_vectors(w, p)?;
    if !u.is_empty() && !w.is_empty() && du != dw {
        return Err(Error::DimensionMismatch {
            expected: du,
            got: dw,
        });
    }
    if u.is_empty() || w.is_empty() {
        return Ok(Vec::new());
    }
    let dim = du;
    let stacked: Vec<Vec<u64>> = u.iter().chain(w.iter()).map(|v| reduce_vec(v, p)).collect();
    // left kernel of `stacked` = right kernel of its transpose
    let transpose: Vec<Vec<u64>> = (0..dim)
        .map(|c| stacked.iter().map(|row| row[c]).collect())
        .collect();
    let coeffs = kernel_basis(&transpose, stacked.len(), p);
    let mut vectors = Vec::new();
    for x in coeffs {
        let mut v = vec![0u64; dim];
        for (i, gen) in u.iter().enumerate() {
            if x[i] != 0 {
                for c in 0..dim {
                    v[c] = (v[c] + mulmod(x[i], gen[c] % p, p)) % p;
                }
            }
        }
        if v.iter().any(|&e| e != 0) {
            vectors.push(v);
        }
    }
    let mut basis = vectors;
    rref(&mut basis, p);
    Ok(basis)
}

/// Dimension of the intersection of all given spans, folded pairwise.
pub fn multi_intersection_dim(subspaces: &[Vec<Vec<u64>>], p: u64) -> Result<usize> {
    let Some(first) = subspaces.first() else {
        return Err(Error::InvalidRep("empty subspace list".into()));
    };
    let mut basis = span_basis(first, p)?;
    for s in &subspaces[1..] {
        basis = intersection_basis(&basis, s, p)?;
        if basis.is_empty() {
            return Ok(0);
        }
    }
    Ok(basis.len())
}

/// A collection of GF(p) subspaces indexed by the ground set, each given by
/// a generator list (possibly empty, the zero subspace).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearRep {
    ground: GroundSet,
    p: u64,
    ambient_dim: usize,
    generators: Vec<Vec<Vec<u64>>>,
}

impl LinearRep {
    pub fn new(
        ground: GroundSet,
        p: u64,
        ambient_dim: usize,
        generators: Vec<Vec<Vec<u64>>>,
    ) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if generators.len() != ground.n() {
            return Err(Error::InvalidRep(format!(
                "expected generators for {} elements, got {}",
                ground.n(),
                generators.len()
            )));
        }
        for gens in &generators {
            for v in gens {
                if v.len() != ambient_dim {
                    return Err(Error::DimensionMismatch {
                        expected: ambient_dim,
                        got: v.len(),
                    });
                }
                if v.iter().any(|&e| e >= p) {
                    return Err(Error::InvalidRep(format!(
                        "vector entry not reduced mod {p}"
                    )));
                }
            }
        }
        Ok(LinearRep {
            ground,
            p,
            ambient_dim,
            generators,
        })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn field(&self) -> u64 {
        self.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn generators(&self, elem: usize) -> &[Vec<u64>] {
        &self.generators[elem]
    }

    /// Generators of U_A = sum of the subspaces of the elements of `mask`.
    pub fn subspace(&self, mask: SubsetMask) -> Vec<Vec<u64>> {
        let mut gens = Vec::new();
        for i in mask.iter() {
            gens.extend(self.generators[i].iter().cloned());
        }
        gens
    }

    /// The induced rank function f(X) = dim(U_X), as a full table.
    ///
    /// The result of this construction is always a polymatroid; debug builds
    /// assert it.
    pub fn rank_function(&self) -> SetFunction {
        let f = SetFunction::tabulate(self.ground.clone(), |m| {
            let r = ff_rank(&self.subspace(m), self.p).expect("validated rep");
            rat(r as i64)
        });
        debug_assert!(f.is_polymatroid());
        f
    }

    /// Bounds of the triple-intersection inequality for one subset triple,
    /// together with the actually computed intersection dimension.
    pub fn triple_bounds_check(
        &self,
        a1: SubsetMask,
        a2: SubsetMask,
        a3: SubsetMask,
    ) -> TripleBounds {
        let f = self.rank_function();
        let stats = TripleStats::from_set_function(&f, a1, a2, a3);
        let actual = multi_intersection_dim(
            &[self.subspace(a1), self.subspace(a2), self.subspace(a3)],
            self.p,
        )
        .expect("validated rep");
        TripleBounds::new(&stats, actual)
    }

    /// Serializes as the representation JSON document.
    pub fn to_json_value(&self) -> serde_json::Value {
        let doc = RepDoc {
            field: self.p,
            ambient_dim: self.ambient_dim,
            ground: self.ground.labels().to_vec(),
            subspaces: self
                .ground
                .labels()
                .iter()
                .enumerate()
                .map(|(i, l)| (l.clone(), self.generators[i].clone()))
                .collect(),
        };
        serde_json::to_value(doc).expect("rep serialization")
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: RepDoc = serde_json::from_str(s)?;
        let ground = GroundSet::new(doc.ground)?;
        let mut generators = vec![Vec::new(); ground.n()];
        for (label, gens) in doc.subspaces {
            let i = ground
                .index_of(&label)
                .ok_or_else(|| Error::UnknownLabel(label.clone()))?;
            generators[i] = gens;
        }
        LinearRep::new(ground, doc.field, doc.ambient_dim, generators)
    }
}

#[derive(Serialize, Deserialize)]
struct RepDoc {
    field: u64,
    ambient_dim: usize,
    ground: Vec<String>,
    subspaces: BTreeMap<String, Vec<Vec<u64>>>,
}

/// The quantities attached to a subset triple (A1, A2, A3):
/// r_i = f(A_i), s_i = f(A_j A_k), s = f(A1 A2 A3), t_i = r_j + r_k - s_i,
/// and the derived sandwich bounds
/// alpha = min{sum r_i, sum s_i - s}, beta = max_i {s_i + r_i}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleStats {
    pub r: [Rational; 3],
    pub s_pair: [Rational; 3],
    pub s: Rational,
    pub t: [Rational; 3],
    pub alpha: Rational,
    pub beta: Rational,
}

impl TripleStats {
    pub fn new(r: [Rational; 3], s_pair: [Rational; 3], s: Rational) -> Self {
        let t = [
            &r[1] + &r[2] - &s_pair[0],
            &r[0] + &r[2] - &s_pair[1],
            &r[0] + &r[1] - &s_pair[2],
        ];
        let sum_r = &r[0] + &r[1] + &r[2];
        let sum_s = &s_pair[0] + &s_pair[1] + &s_pair[2];
        let alpha = (&sum_s - &s).min(sum_r);
        let beta = (0..3).map(|i| &s_pair[i] + &r[i]).max().expect("three terms");
        TripleStats {
            r,
            s_pair,
            s,
            t,
            alpha,
            beta,
        }
    }

    /// Reads all quantities off a rank table.
    pub fn from_set_function(
        f: &SetFunction,
        a1: SubsetMask,
        a2: SubsetMask,
        a3: SubsetMask,
    ) -> Self {
        let r = [
            f.value(a1).clone(),
            f.value(a2).clone(),
            f.value(a3).clone(),
        ];
        let s_pair = [
            f.value(a2.union(a3)).clone(),
            f.value(a1.union(a3)).clone(),
            f.value(a1.union(a2)).clone(),
        ];
        let s = f.value(a1.union(a2).union(a3)).clone();
        TripleStats::new(r, s_pair, s)
    }

    /// Lower bound of the intersection inequality: max{0, s - sum s_i + sum r_i}.
    pub fn intersection_lower(&self) -> Rational {
        let v = &self.s - (&self.s_pair[0] + &self.s_pair[1] + &self.s_pair[2])
            + (&self.r[0] + &self.r[1] + &self.r[2]);
        v.max(rat(0))
    }

    /// Upper bound of the intersection inequality: min{t1, t2, t3}.
    pub fn intersection_upper(&self) -> Rational {
        self.t.iter().min().expect("three terms").clone()
    }
}

/// Result of checking the intersection inequality on one triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleBounds {
    pub lower: Rational,
    pub upper: Rational,
    pub actual: Rational,
}

impl TripleBounds {
    pub fn new(stats: &TripleStats, actual_dim: usize) -> Self {
        TripleBounds {
            lower: stats.intersection_lower(),
            upper: stats.intersection_upper(),
            actual: rat(actual_dim as i64),
        }
    }

    pub fn holds(&self) -> bool {
        self.lower <= self.actual && self.actual <= self.upper
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::setfn::{CheckMethod, EMPTY};

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(3));
        assert!(is_prime(5));
        assert!(is_prime(31));
        assert!(!is_prime(1));
        assert!(!is_prime(4));
        assert!(!is_prime(9));
    }

    #[test]
    fn rank_of_dependent_vectors() {
        let vecs = vec![vec![1, 0], vec![0, 1], vec![1, 1]];
        assert_eq!(ff_rank(&vecs, 2).unwrap(), 2);
        assert_eq!(ff_rank(&[], 2).unwrap(), 0);
        assert!(matches!(ff_rank(&vecs, 4), Err(Error::NotPrime(4))));
        let ragged = vec![vec![1, 0], vec![1]];
        assert!(matches!(
            ff_rank(&ragged, 2),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn repeated_rows_drop_rank() {
        let rows = vec![vec![1, 2, 0, 1, 2], vec![1, 2, 0, 1, 2], vec![0, 0, 1, 0, 0]];
        assert_eq!(ff_rank(&rows, 3).unwrap(), 2);
    }

    #[test]
    fn intersection_of_skew_lines_is_trivial() {
        let u = vec![vec![1, 0]];
        let w = vec![vec![0, 1]];
        assert!(intersection_basis(&u, &w, 2).unwrap().is_empty());
    }

    #[test]
    fn intersection_with_self_is_identity() {
        let u = vec![vec![1, 0, 1], vec![0, 1, 1]];
        let basis = intersection_basis(&u, &u, 2).unwrap();
        assert_eq!(basis.len(), 2);
        // every basis vector stays inside the original span
        for v in &basis {
            let mut extended = u.clone();
            extended.push(v.clone());
            assert_eq!(ff_rank(&extended, 2).unwrap(), 2);
        }
    }

    #[test]
    fn plane_intersection_in_three_space() {
        let u = vec![vec![1, 0, 0], vec![0, 1, 0]];
        let w = vec![vec![0, 1, 0], vec![0, 0, 1]];
        let basis = intersection_basis(&u, &w, 2).unwrap();
        assert_eq!(basis, vec![vec![0, 1, 0]]);
        // dim(U n W) = dim U + dim W - dim(U + W) = 2 + 2 - 3
        let mut sum = u.clone();
        sum.extend(w.clone());
        assert_eq!(ff_rank(&sum, 2).unwrap(), 3);
    }

    #[test]
    fn multi_intersection_folds() {
        let u = vec![vec![1, 0, 0], vec![0, 1, 0]];
        let w = vec![vec![0, 1, 0], vec![0, 0, 1]];
        let full = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(
            multi_intersection_dim(&[u.clone(), w.clone(), full], 2).unwrap(),
            1
        );
        assert_eq!(multi_intersection_dim(&[u.clone(), u.clone(), u], 2).unwrap(), 2);
        // the three lines of the U_{2,3} representation meet trivially
        let rep = corpus::u23_rep(2);
        let lines: Vec<_> = (0..3).map(|i| rep.generators(i).to_vec()).collect();
        assert_eq!(multi_intersection_dim(&lines, 2).unwrap(), 0);
        assert!(multi_intersection_dim(&[], 2).is_err());
    }

    #[test]
    fn u23_rep_induces_uniform_table() {
        for p in [2, 3, 5] {
            let rep = corpus::u23_rep(p);
            assert_eq!(rep.rank_function(), corpus::u23());
        }
    }

    #[test]
    fn zero_rep_induces_zero_function() {
        let ground = GroundSet::new(["a", "b"]).unwrap();
        let rep = LinearRep::new(ground, 2, 3, vec![Vec::new(), Vec::new()]).unwrap();
        let f = rep.rank_function();
        assert!(f.ground().masks().all(|m| f.value(m) == &rat(0)));
    }

    #[test]
    fn fano_rep_induces_fano_table() {
        let rep = corpus::fano_rep();
        let f = rep.rank_function();
        assert_eq!(f, corpus::fano());
        assert!(f.is_matroid().unwrap());
        for m in CheckMethod::ALL {
            assert!(f.check_polymatroid(m).is_polymatroid);
        }
    }

    #[test]
    fn triple_bounds_on_u23_singletons() {
        let rep = corpus::u23_rep(2);
        let b = rep.triple_bounds_check(
            SubsetMask::singleton(0),
            SubsetMask::singleton(1),
            SubsetMask::singleton(2),
        );
        assert_eq!(b.lower, rat(0));
        assert_eq!(b.upper, rat(0));
        assert_eq!(b.actual, rat(0));
        assert!(b.holds());
    }

    #[test]
    fn triple_bounds_degenerate_full_sets() {
        let rep = corpus::u23_rep(3);
        let full = rep.ground().full_mask();
        let b = rep.triple_bounds_check(full, full, full);
        assert_eq!(b.lower, rat(2));
        assert_eq!(b.upper, rat(2));
        assert_eq!(b.actual, rat(2));
    }

    #[test]
    fn triple_bounds_pair_rep_example() {
        let rep = corpus::pair_rep_gf2();
        let a = SubsetMask::singleton(0);
        let b = SubsetMask::singleton(1);
        let ab = a.union(b);
        let bounds = rep.triple_bounds_check(a, b, ab);
        assert_eq!(bounds.actual, rat(1));
        assert!(bounds.holds());
    }

    #[test]
    fn empty_subspace_handling() {
        let rep = corpus::pair_rep_gf2();
        assert!(rep.subspace(EMPTY).is_empty());
        assert_eq!(ff_rank(&rep.subspace(EMPTY), 2).unwrap(), 0);
    }

    #[test]
    fn rep_json_round_trip() {
        let rep = corpus::pair_rep_gf2();
        let back = LinearRep::from_json(&rep.to_json()).unwrap();
        assert_eq!(back, rep);
    }

    #[test]
    fn rep_json_rejects_unreduced_entries() {
        let doc = r#"{"field":2,"ambient_dim":2,"ground":["a"],"subspaces":{"a":[[2,0]]}}"#;
        assert!(matches!(
            LinearRep::from_json(doc),
            Err(Error::InvalidRep(_))
        ));
    }
}
