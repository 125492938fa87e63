//! Built-in rank tables and representations used by the CLI and the test
//! suite: uniform matroids, the Fano plane, the Vamos matroid, and the
//! classic four-element Ingleton violator.

use crate::linrep::LinearRep;
use crate::rat::{rat, Rational};
use crate::setfn::{GroundSet, SetFunction, SubsetMask};
use crate::{Error, Result};

/// The uniform matroid U_{k,n}: rank min(|X|, k) on labels "1".."n".
pub fn uniform(k: u32, n: usize) -> Result<SetFunction> {
    let ground = GroundSet::new((1..=n).map(|i| i.to_string()))?;
    Ok(SetFunction::tabulate(ground, |m| {
        rat(m.card().min(k) as i64)
    }))
}

/// The uniform matroid U_{2,3} on labels "1", "2", "3".
pub fn u23() -> SetFunction {
    uniform(2, 3).expect("static table")
}

/// The standard representation of U_{2,3}: the three pairwise-independent
/// lines spanned by (1,0), (0,1), (1,1) in GF(p)^2.
pub fn u23_rep(p: u64) -> LinearRep {
    let ground = GroundSet::new(["1", "2", "3"]).expect("static ground");
    LinearRep::new(
        ground,
        p,
        2,
        vec![vec![vec![1, 0]], vec![vec![0, 1]], vec![vec![1, 1]]],
    )
    .expect("valid for any prime p")
}

/// Vandermonde representation of U_{k,n} over GF(p); requires p >= n so that
/// n distinct evaluation points exist.
pub fn uniform_rep(k: u32, n: usize, p: u64) -> Result<LinearRep> {
    if k > 0 && (p as usize) < n {
        return Err(Error::InvalidRep(format!(
            "GF({p}) is too small for {n} distinct Vandermonde points"
        )));
    }
    let ground = GroundSet::new((1..=n).map(|i| i.to_string()))?;
    let d = k as usize;
    let generators = (0..n)
        .map(|i| {
            if d == 0 {
                return Vec::new();
            }
            let t = i as u64 % p;
            let mut v = Vec::with_capacity(d);
            let mut acc = 1u64;
            for _ in 0..d {
                v.push(acc);
                acc = (acc as u128 * t as u128 % p as u128) as u64;
            }
            vec![v]
        })
        .collect();
    LinearRep::new(ground, p, d.max(1), generators)
}

/// The free matroid on n elements (identity representation over GF(p)).
pub fn free_rep(n: usize, p: u64) -> Result<LinearRep> {
    let ground = GroundSet::new((1..=n).map(|i| i.to_string()))?;
    let generators = (0..n)
        .map(|i| {
            let mut v = vec![0u64; n];
            v[i] = 1;
            vec![v]
        })
        .collect();
    LinearRep::new(ground, p, n, generators)
}

/// The two-plane GF(2)^3 example: V_a = <e1, e2>, V_b = <e2, e3>. Its spans
/// meet in the line <e2>, which makes it the running common-information
/// example.
pub fn pair_rep_gf2() -> LinearRep {
    let ground = GroundSet::new(["a", "b"]).expect("static ground");
    LinearRep::new(
        ground,
        2,
        3,
        vec![
            vec![vec![1, 0, 0], vec![0, 1, 0]],
            vec![vec![0, 1, 0], vec![0, 0, 1]],
        ],
    )
    .expect("static rep")
}

/// The Fano plane as the seven nonzero vectors of GF(2)^3, labelled by their
/// bit patterns "001".."111".
pub fn fano_rep() -> LinearRep {
    let vectors: Vec<Vec<u64>> = (1u64..8)
        .map(|bits| vec![bits >> 2 & 1, bits >> 1 & 1, bits & 1])
        .collect();
    let labels: Vec<String> = vectors
        .iter()
        .map(|v| format!("{}{}{}", v[0], v[1], v[2]))
        .collect();
    let ground = GroundSet::new(labels).expect("static ground");
    let generators = vectors.into_iter().map(|v| vec![v]).collect();
    LinearRep::new(ground, 2, 3, generators).expect("static rep")
}

/// Rank table of the Fano matroid.
pub fn fano() -> SetFunction {
    fano_rep().rank_function()
}

/// The Vamos matroid: rank 4 on {a, a', b, b', c, c', d, d'}; every set of
/// at most three elements is independent and the only dependent 4-sets are
/// the five planes AB, AC, AD, BC, BD (pairs of paired elements, CD absent).
pub fn vamos() -> SetFunction {
    let labels = ["a", "a'", "b", "b'", "c", "c'", "d", "d'"];
    let ground = GroundSet::new(labels).expect("static ground");
    let pair = |i: usize| SubsetMask::from_bits(0b11 << (2 * i));
    let planes: Vec<SubsetMask> = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]
        .iter()
        .map(|&(i, j)| pair(i).union(pair(j)))
        .collect();
    SetFunction::tabulate(ground, |m| {
        let card = m.card();
        let value = if card <= 3 {
            card
        } else if card == 4 {
            if planes.contains(&m) {
                3
            } else {
                4
            }
        } else {
            4
        };
        rat(value as i64)
    })
}

/// The four-element Ingleton violator: every singleton has rank 2, every
/// pair rank 3 except f(cd) = 4, and all larger sets rank 4. It is a
/// polymatroid but not a matroid, and the singleton quadruple violates
/// Ingleton's inequality with slack -1.
pub fn ingleton_violator4() -> SetFunction {
    let ground = GroundSet::new(["a", "b", "c", "d"]).expect("static ground");
    let cd = SubsetMask::from_bits(0b1100);
    SetFunction::tabulate(ground, |m| {
        let value = match m.card() {
            0 => 0,
            1 => 2,
            2 => {
                if m == cd {
                    4
                } else {
                    3
                }
            }
            _ => 4,
        };
        rat(value as i64)
    })
}

/// Looks up a built-in rank table by its CLI name.
pub fn by_name(name: &str, args: &[String]) -> Result<SetFunction> {
    match name {
        "u23" => Ok(u23()),
        "fano" => Ok(fano()),
        "vamos" => Ok(vamos()),
        "ingleton-violator-4" => Ok(ingleton_violator4()),
        "uniform" => {
            let usage = || Error::InvalidGroundSet("uniform needs two arguments: k n".into());
            if args.len() != 2 {
                return Err(usage());
            }
            let k: u32 = args[0].parse().map_err(|_| usage())?;
            let n: usize = args[1].parse().map_err(|_| usage())?;
            uniform(k, n)
        }
        _ => Err(Error::UnknownLabel(name.to_string())),
    }
}

/// Looks up a built-in representation by CLI name, over GF(p).
pub fn rep_by_name(name: &str, args: &[String], p: u64) -> Result<LinearRep> {
    match name {
        "u23" => {
            if !crate::linrep::is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            Ok(u23_rep(p))
        }
        "fano" => {
            if p != 2 {
                return Err(Error::InvalidRep(
                    "the built-in Fano representation is over GF(2)".into(),
                ));
            }
            Ok(fano_rep())
        }
        "uniform" => {
            let usage = || Error::InvalidGroundSet("uniform needs two arguments: k n".into());
            if args.len() != 2 {
                return Err(usage());
            }
            let k: u32 = args[0].parse().map_err(|_| usage())?;
            let n: usize = args[1].parse().map_err(|_| usage())?;
            uniform_rep(k, n, p)
        }
        "vamos" | "ingleton-violator-4" => Err(Error::InvalidRep(format!(
            "{name} has no linear representation"
        ))),
        _ => Err(Error::UnknownLabel(name.to_string())),
    }
}

/// Rational helper re-exported for table literals in tests.
pub fn rank(v: i64) -> Rational {
    rat(v)
}
