//! Set functions on small ground sets, stored as full rank tables, and the
//! polymatroid/matroid axiom checks.
//!
//! A ground set holds at most 16 labelled elements so that the `2^n` table
//! always fits in memory and every check can be an exhaustive enumeration.
//! Subsets are bit masks over the canonical label order; `union` is bitwise
//! or, which is also how the compact juxtaposition notation for unions is
//! realized everywhere in this crate.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::rat::{format_rational, parse_rational, Rational};
use crate::{Error, Result};

/// Hard cap on ground-set size; keeps `2^n` tables and `4^n` scans at desk scale.
pub const MAX_GROUND: usize = 16;

/// An ordered list of distinct element labels. The position of a label is
/// its index in every subset mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundSet {
    labels: Vec<String>,
}

impl GroundSet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() || labels.len() > MAX_GROUND {
            return Err(Error::InvalidGroundSet(format!(
                "need between 1 and {} elements, got {}",
                MAX_GROUND,
                labels.len()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() {
                return Err(Error::InvalidGroundSet("empty label".into()));
            }
            if labels[..i].contains(l) {
                return Err(Error::InvalidGroundSet(format!("duplicate label {l:?}")));
            }
        }
        Ok(GroundSet { labels })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn num_subsets(&self) -> usize {
        1usize << self.n()
    }

    pub fn full_mask(&self) -> SubsetMask {
        SubsetMask((1u32 << self.n()) - 1)
    }

    /// All subset masks in ascending bit order.
    pub fn masks(&self) -> impl Iterator<Item = SubsetMask> {
        (0..1u32 << self.n()).map(SubsetMask)
    }

    /// Mask for a list of labels; duplicates are collapsed.
    pub fn subset<S: AsRef<str>>(&self, labels: &[S]) -> Result<SubsetMask> {
        let mut bits = 0u32;
        for l in labels {
            let i = self
                .index_of(l.as_ref())
                .ok_or_else(|| Error::UnknownLabel(l.as_ref().to_string()))?;
            bits |= 1 << i;
        }
        Ok(SubsetMask(bits))
    }

    /// Labels of a mask, in canonical order.
    pub fn labels_of(&self, mask: SubsetMask) -> Vec<String> {
        mask.iter().map(|i| self.labels[i].clone()).collect()
    }

    /// Short human form, `{}` for the empty set.
    pub fn describe(&self, mask: SubsetMask) -> String {
        format!("{{{}}}", self.labels_of(mask).join(","))
    }

    pub fn contains_mask(&self, mask: SubsetMask) -> bool {
        (mask.bits() >> self.n()) == 0
    }
}

/// A subset of a ground set: bit `i` set means element `i` is in.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsetMask(u32);

pub const EMPTY: SubsetMask = SubsetMask(0);

impl SubsetMask {
    pub fn from_bits(bits: u32) -> Self {
        SubsetMask(bits)
    }

    pub fn singleton(i: usize) -> Self {
        SubsetMask(1 << i)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn card(self) -> u32 {
        self.0.count_ones()
    }

    pub fn union(self, other: Self) -> Self {
        SubsetMask(self.0 | other.0)
    }

    pub fn intersect(self, other: Self) -> Self {
        SubsetMask(self.0 & other.0)
    }

    pub fn minus(self, other: Self) -> Self {
        SubsetMask(self.0 & !other.0)
    }

    pub fn contains(self, elem: usize) -> bool {
        self.0 >> elem & 1 == 1
    }

    pub fn insert(self, elem: usize) -> Self {
        SubsetMask(self.0 | 1 << elem)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Element indices, ascending.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }
}

/// How to check the polymatroid axioms. All three must always agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMethod {
    /// Pointwise monotonicity and submodularity.
    Direct,
    /// Conditional mutual information of every subset triple is nonnegative.
    ConditionalAll,
    /// Elemental triples only: single elements y, z (possibly equal) outside
    /// a conditioning set. Covers monotonicity through the y = z case.
    Elemental,
}

impl CheckMethod {
    pub const ALL: [CheckMethod; 3] = [
        CheckMethod::Direct,
        CheckMethod::ConditionalAll,
        CheckMethod::Elemental,
    ];
}

/// A triple (Y, Z | X) whose conditional value is strictly negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionalWitness {
    pub y: SubsetMask,
    pub z: SubsetMask,
    pub given: SubsetMask,
    pub value: Rational,
}

/// Outcome of a polymatroid check. When the verdict is negative and a
/// violating triple exists, `witness` carries the first one found in scan
/// order; a table that merely fails `f(empty) = 0` has no such triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolymatroidVerdict {
    pub is_polymatroid: bool,
    pub witness: Option<ConditionalWitness>,
}

/// A total table of exact rational values over all subsets of a ground set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFunction {
    ground: GroundSet,
    values: Vec<Rational>,
}

impl SetFunction {
    /// Wraps a full table; `values[m]` is the value at mask `m`.
    pub fn new(ground: GroundSet, values: Vec<Rational>) -> Result<Self> {
        if values.len() != ground.num_subsets() {
            return Err(Error::IncompleteTable(format!(
                "expected {} values, got {}",
                ground.num_subsets(),
                values.len()
            )));
        }
        Ok(SetFunction { ground, values })
    }

    /// Builds a table from explicit (subset, value) entries. Every subset of
    /// the ground set must appear exactly once.
    pub fn from_entries(ground: GroundSet, entries: &[(SubsetMask, Rational)]) -> Result<Self> {
        let mut values: Vec<Option<Rational>> = vec![None; ground.num_subsets()];
        for (mask, v) in entries {
            if !ground.contains_mask(*mask) {
                return Err(Error::UnknownLabel(format!("mask {:#b}", mask.bits())));
            }
            let slot = &mut values[mask.bits() as usize];
            if slot.is_some() {
                return Err(Error::DuplicateSubset(ground.describe(*mask)));
            }
            *slot = Some(v.clone());
        }
        let mut table = Vec::with_capacity(values.len());
        for (m, v) in values.into_iter().enumerate() {
            match v {
                Some(v) => table.push(v),
                None => {
                    return Err(Error::IncompleteTable(
                        ground.describe(SubsetMask(m as u32)),
                    ))
                }
            }
        }
        Ok(SetFunction {
            ground,
            values: table,
        })
    }

    /// Builds a table by evaluating a function on every mask.
    pub fn tabulate<F: FnMut(SubsetMask) -> Rational>(ground: GroundSet, mut f: F) -> Self {
        let values = ground.masks().map(&mut f).collect();
        SetFunction { ground, values }
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn value(&self, mask: SubsetMask) -> &Rational {
        debug_assert!(self.ground.contains_mask(mask));
        &self.values[mask.bits() as usize]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Replaces the value at one mask; used by tests that perturb tables.
    pub fn set_value(&mut self, mask: SubsetMask, v: Rational) {
        self.values[mask.bits() as usize] = v;
    }

    /// The conditional form f(Y : Z | X) = f(XY) + f(XZ) - f(XYZ) - f(X).
    ///
    /// With X empty this is the mutual form f(Y) + f(Z) - f(YZ); with Y = Z
    /// it collapses to f(XY) - f(X), the conditional rank of Y given X.
    pub fn conditional(&self, y: SubsetMask, z: SubsetMask, given: SubsetMask) -> Rational {
        let xy = given.union(y);
        let xz = given.union(z);
        let xyz = xy.union(z);
        self.value(xy) + self.value(xz) - self.value(xyz) - self.value(given)
    }

    /// f(Y : Z) = f(Y) + f(Z) - f(YZ).
    pub fn mutual(&self, y: SubsetMask, z: SubsetMask) -> Rational {
        self.conditional(y, z, EMPTY)
    }

    /// f(Y | X) = f(XY) - f(X).
    pub fn given(&self, y: SubsetMask, x: SubsetMask) -> Rational {
        self.value(x.union(y)) - self.value(x)
    }

    /// Checks monotonicity and submodularity by the requested method, plus
    /// the `f(empty) = 0` normalization that a rank function must satisfy.
    pub fn check_polymatroid(&self, method: CheckMethod) -> PolymatroidVerdict {
        let witness = match method {
            CheckMethod::Direct => self.scan_direct(),
            CheckMethod::ConditionalAll => self.scan_conditional_all(),
            CheckMethod::Elemental => self.scan_elemental(),
        };
        let ok = witness.is_none() && self.value(EMPTY).is_zero();
        PolymatroidVerdict {
            is_polymatroid: ok,
            witness,
        }
    }

    /// Convenience: elemental check, verdict only.
    pub fn is_polymatroid(&self) -> bool {
        self.check_polymatroid(CheckMethod::Elemental).is_polymatroid
    }

    fn witness(&self, y: SubsetMask, z: SubsetMask, given: SubsetMask) -> ConditionalWitness {
        ConditionalWitness {
            y,
            z,
            given,
            value: self.conditional(y, z, given),
        }
    }

    fn scan_direct(&self) -> Option<ConditionalWitness> {
        let n = self.ground.n();
        for x in self.ground.masks() {
            for y in 0..n {
                if x.contains(y) {
                    continue;
                }
                let ym = SubsetMask::singleton(y);
                // monotone: f(X) <= f(Xy)
                if self.value(x.union(ym)) < self.value(x) {
                    return Some(self.witness(ym, ym, x));
                }
                for z in y + 1..n {
                    if x.contains(z) {
                        continue;
                    }
                    let zm = SubsetMask::singleton(z);
                    // submodular: f(Xy) + f(Xz) >= f(Xyz) + f(X)
                    if self.value(x.union(ym)) + self.value(x.union(zm))
                        < self.value(x.union(ym).union(zm)) + self.value(x)
                    {
                        return Some(self.witness(ym, zm, x));
                    }
                }
            }
        }
        None
    }

    fn scan_conditional_all(&self) -> Option<ConditionalWitness> {
        for x in self.ground.masks() {
            for y in self.ground.masks() {
                for z in self.ground.masks() {
                    if self.conditional(y, z, x) < Rational::zero() {
                        return Some(self.witness(y, z, x));
                    }
                }
            }
        }
        None
    }

    fn scan_elemental(&self) -> Option<ConditionalWitness> {
        let n = self.ground.n();
        for x in self.ground.masks() {
            for y in 0..n {
                if x.contains(y) {
                    continue;
                }
                for z in y..n {
                    if x.contains(z) {
                        continue;
                    }
                    let ym = SubsetMask::singleton(y);
                    let zm = SubsetMask::singleton(z);
                    if self.conditional(ym, zm, x) < Rational::zero() {
                        return Some(self.witness(ym, zm, x));
                    }
                }
            }
        }
        None
    }

    /// True iff the function is integer-valued, nonnegative, and bounded by
    /// cardinality. Requires a polymatroid.
    pub fn is_matroid(&self) -> Result<bool> {
        if !self.is_polymatroid() {
            return Err(Error::NotAPolymatroid);
        }
        Ok(self.ground.masks().all(|m| {
            let v = self.value(m);
            v.is_integer() && *v >= Rational::zero() && *v <= Rational::from_integer(m.card().into())
        }))
    }

    /// Restriction to the elements of `s`: the ground set becomes those
    /// elements (in canonical order) and values are copied over.
    pub fn restrict(&self, s: SubsetMask) -> SetFunction {
        debug_assert!(self.ground.contains_mask(s));
        let elems: Vec<usize> = s.iter().collect();
        let ground = GroundSet::new(elems.iter().map(|&i| self.ground.label(i)))
            .expect("restriction of a valid ground set");
        let values = (0..1u32 << elems.len())
            .map(|sub| {
                let mut bits = 0u32;
                for (j, &i) in elems.iter().enumerate() {
                    if sub >> j & 1 == 1 {
                        bits |= 1 << i;
                    }
                }
                self.value(SubsetMask(bits)).clone()
            })
            .collect();
        SetFunction { ground, values }
    }

    /// True iff `self` extends `f`: every label of `f` appears here and the
    /// two tables agree on all subsets of `f`'s ground set.
    pub fn is_extension_of(&self, f: &SetFunction) -> Result<bool> {
        let positions: Vec<usize> = f
            .ground
            .labels()
            .iter()
            .map(|l| {
                self.ground
                    .index_of(l)
                    .ok_or_else(|| Error::LabelMismatch(format!("label {l:?} not in extension")))
            })
            .collect::<Result<_>>()?;
        for m in f.ground.masks() {
            let mut bits = 0u32;
            for j in m.iter() {
                bits |= 1 << positions[j];
            }
            if self.value(SubsetMask(bits)) != f.value(m) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Serializes as the rank-table JSON document.
    pub fn to_json_value(&self) -> serde_json::Value {
        let doc = RankTableDoc {
            ground: self.ground.labels().to_vec(),
            ranks: self
                .ground
                .masks()
                .map(|m| RankEntry {
                    set: self.ground.labels_of(m),
                    value: format_rational(self.value(m)),
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("rank table serialization")
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    /// Parses the rank-table JSON document; every subset must appear exactly once.
    pub fn from_json(s: &str) -> Result<Self> {
        let doc: RankTableDoc = serde_json::from_str(s)?;
        let ground = GroundSet::new(doc.ground)?;
        let entries = doc
            .ranks
            .iter()
            .map(|e| Ok((ground.subset(&e.set)?, parse_rational(&e.value)?)))
            .collect::<Result<Vec<_>>>()?;
        SetFunction::from_entries(ground, &entries)
    }
}

#[derive(Serialize, Deserialize)]
struct RankTableDoc {
    ground: Vec<String>,
    ranks: Vec<RankEntry>,
}

#[derive(Serialize, Deserialize)]
struct RankEntry {
    set: Vec<String>,
    value: String,
}
