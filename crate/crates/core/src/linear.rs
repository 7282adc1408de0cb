//! Vector-space plumbing shared by every coefficient type.

use std::collections::BTreeMap;
use std::hash::Hash;

use rustc_hash::FxHashMap;

use crate::scalar::Scalar;

/// A vector space over the rationals whose elements know their own shape
/// (dimension, leg count), so a zero of the right shape can be produced from
/// any element.
pub trait LinearSpace: Clone + PartialEq + Send + Sync {
    fn zero_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, other: &Self);
    fn scale(&self, s: &Scalar) -> Self;

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    fn neg(&self) -> Self {
        self.scale(&Scalar::from_int(-1))
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

/// Add `c` to `map[key]`, dropping the entry if it cancels.
pub(crate) fn accumulate<K: Ord>(map: &mut BTreeMap<K, Scalar>, key: K, c: Scalar) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += &c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

pub(crate) fn accumulate_hash<K: Hash + Eq>(map: &mut FxHashMap<K, Scalar>, key: K, c: Scalar) {
    if c.is_zero() {
        return;
    }
    *map.entry(key).or_default() += &c;
}

/// Merge two hash accumulators, keeping the larger one as the target.
pub(crate) fn merge_hash<K: Hash + Eq>(
    mut a: FxHashMap<K, Scalar>,
    mut b: FxHashMap<K, Scalar>,
) -> FxHashMap<K, Scalar> {
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    for (k, v) in b {
        *a.entry(k).or_default() += &v;
    }
    a
}

pub(crate) fn into_sorted<K: Ord + Hash + Eq>(map: FxHashMap<K, Scalar>) -> BTreeMap<K, Scalar> {
    map.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

pub(crate) fn add_maps<K: Ord + Clone>(a: &mut BTreeMap<K, Scalar>, b: &BTreeMap<K, Scalar>) {
    for (k, v) in b {
        accumulate(a, k.clone(), v.clone());
    }
}

pub(crate) fn scale_map<K: Ord + Clone>(a: &BTreeMap<K, Scalar>, s: &Scalar) -> BTreeMap<K, Scalar> {
    if s.is_zero() {
        return BTreeMap::new();
    }
    a.iter().map(|(k, v)| (k.clone(), v * s)).collect()
}
