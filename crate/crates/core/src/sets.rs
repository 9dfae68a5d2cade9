//! Explicit finite sets and finite functions.
//!
//! Functions are stored as total lookup tables rather than rules so that
//! hom-sets stay enumerable and every law in the suite can be checked by
//! exhaustion.

use std::collections::BTreeMap;
use std::fmt;

use crate::el::El;
use crate::error::{Error, Result};

/// A finite set of elements, stored sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct FinSet {
    elems: Vec<El>,
}

impl FinSet {
    pub fn empty() -> FinSet {
        FinSet { elems: Vec::new() }
    }

    pub fn new(elems: impl IntoIterator<Item = El>) -> FinSet {
        let mut elems: Vec<El> = elems.into_iter().collect();
        elems.sort();
        elems.dedup();
        FinSet { elems }
    }

    /// A set of atoms named `prefix0 .. prefix{n-1}`.
    pub fn atoms(prefix: &str, n: usize) -> FinSet {
        FinSet::new((0..n).map(|i| El::atom(format!("{prefix}{i}"))))
    }

    pub fn singleton_unit() -> FinSet {
        FinSet::new([El::Unit])
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, x: &El) -> bool {
        self.elems.binary_search(x).is_ok()
    }

    pub fn elements(&self) -> &[El] {
        &self.elems
    }

    pub fn iter(&self) -> std::slice::Iter<'_, El> {
        self.elems.iter()
    }

    pub fn is_subset_of(&self, other: &FinSet) -> bool {
        self.elems.iter().all(|x| other.contains(x))
    }

    /// All subsets, each in canonical form, ordered canonically.
    pub fn subsets(&self) -> Vec<FinSet> {
        let n = self.elems.len();
        assert!(n < usize::BITS as usize, "subset enumeration of a set this large is not desk-scale");
        let mut out = Vec::with_capacity(1usize << n);
        for mask in 0..(1usize << n) {
            let members = self
                .elems
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, x)| x.clone());
            out.push(FinSet::new(members));
        }
        out.sort();
        out
    }
}

impl FromIterator<El> for FinSet {
    fn from_iter<T: IntoIterator<Item = El>>(iter: T) -> Self {
        FinSet::new(iter)
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// A function between finite sets, given by an explicit total table.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FinFn {
    dom: FinSet,
    cod: FinSet,
    table: BTreeMap<El, El>,
}

impl FinFn {
    /// Builds a function from an explicit table, checking totality and that
    /// every image lies in the codomain.
    pub fn new(dom: FinSet, cod: FinSet, table: BTreeMap<El, El>) -> Result<FinFn> {
        for x in dom.iter() {
            match table.get(x) {
                None => {
                    return Err(Error::NotTotal {
                        element: x.to_string(),
                    })
                }
                Some(y) if !cod.contains(y) => {
                    return Err(Error::NotInCodomain {
                        element: y.to_string(),
                        cod: cod.to_string(),
                    })
                }
                Some(_) => {}
            }
        }
        let table: BTreeMap<El, El> = table
            .into_iter()
            .filter(|(x, _)| dom.contains(x))
            .collect();
        Ok(FinFn { dom, cod, table })
    }

    /// Builds a function by tabulating `f` over the domain.
    pub fn tabulate(dom: FinSet, cod: FinSet, mut f: impl FnMut(&El) -> El) -> Result<FinFn> {
        let table = dom.iter().map(|x| (x.clone(), f(x))).collect();
        FinFn::new(dom, cod, table)
    }

    /// Bypasses the codomain check. Only the law suite's mutation harness
    /// uses this, to build deliberately broken functions.
    pub(crate) fn from_raw_parts(dom: FinSet, cod: FinSet, table: BTreeMap<El, El>) -> FinFn {
        FinFn { dom, cod, table }
    }

    pub fn identity(set: &FinSet) -> FinFn {
        let table = set.iter().map(|x| (x.clone(), x.clone())).collect();
        FinFn {
            dom: set.clone(),
            cod: set.clone(),
            table,
        }
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn apply(&self, x: &El) -> Result<&El> {
        self.table.get(x).ok_or_else(|| Error::NotInDomain {
            element: x.to_string(),
            dom: self.dom.to_string(),
        })
    }

    /// Composition `self ∘ f` (apply `f` first).
    pub fn compose(&self, f: &FinFn) -> Result<FinFn> {
        if f.cod != self.dom {
            return Err(Error::Composition {
                lhs: f.cod.to_string(),
                rhs: self.dom.to_string(),
            });
        }
        let mut table = BTreeMap::new();
        for (x, y) in &f.table {
            table.insert(x.clone(), self.apply(y)?.clone());
        }
        Ok(FinFn {
            dom: f.dom.clone(),
            cod: self.cod.clone(),
            table,
        })
    }

    /// The fiber of `self` over `y`.
    pub fn preimage(&self, y: &El) -> Result<FinSet> {
        if !self.cod.contains(y) {
            return Err(Error::NotInCodomain {
                element: y.to_string(),
                cod: self.cod.to_string(),
            });
        }
        Ok(FinSet::new(
            self.table
                .iter()
                .filter(|(_, v)| *v == y)
                .map(|(x, _)| x.clone()),
        ))
    }

    pub fn image(&self) -> FinSet {
        FinSet::new(self.table.values().cloned())
    }

    pub fn is_iso(&self) -> bool {
        self.image().len() == self.dom.len() && self.dom.len() == self.cod.len()
    }

    /// All functions from `dom` to `cod`, in a stable order.
    pub fn all(dom: &FinSet, cod: &FinSet) -> Vec<FinFn> {
        if dom.is_empty() {
            return vec![FinFn {
                dom: dom.clone(),
                cod: cod.clone(),
                table: BTreeMap::new(),
            }];
        }
        if cod.is_empty() {
            return Vec::new();
        }
        let n = dom.len();
        let m = cod.len();
        let mut out = Vec::new();
        let mut choice = vec![0usize; n];
        loop {
            let table = dom
                .iter()
                .zip(&choice)
                .map(|(x, &i)| (x.clone(), cod.elements()[i].clone()))
                .collect();
            out.push(FinFn {
                dom: dom.clone(),
                cod: cod.clone(),
                table,
            });
            if !bump_odometer(&mut choice, m) {
                break;
            }
        }
        out
    }
}

/// Advances a mixed-radix counter; returns false once it wraps to zero.
pub(crate) fn bump_odometer(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> FinSet {
        FinSet::new([El::atom("a"), El::atom("b")])
    }

    #[test]
    fn compose_with_identity_is_identity() {
        let x = ab();
        let y = FinSet::new([El::atom("c")]);
        let g = FinFn::tabulate(x.clone(), y.clone(), |_| El::atom("c")).unwrap();
        assert_eq!(g.compose(&FinFn::identity(&x)).unwrap(), g);
        assert_eq!(FinFn::identity(&y).compose(&g).unwrap(), g);
    }

    #[test]
    fn constant_functions_compose_pointwise() {
        let f = FinFn::tabulate(ab(), FinSet::new([El::atom("c")]), |_| El::atom("c")).unwrap();
        let g = FinFn::tabulate(
            FinSet::new([El::atom("c")]),
            FinSet::new([El::atom("d")]),
            |_| El::atom("d"),
        )
        .unwrap();
        let gf = g.compose(&f).unwrap();
        assert_eq!(gf.apply(&El::atom("a")).unwrap(), &El::atom("d"));
        assert_eq!(gf.apply(&El::atom("b")).unwrap(), &El::atom("d"));
    }

    #[test]
    fn composition_is_associative_on_small_chains() {
        // Exhaustive over all triples of functions on sets of size <= 2.
        let sets = [FinSet::atoms("x", 1), FinSet::atoms("x", 2)];
        for a in &sets {
            for b in &sets {
                for c in &sets {
                    for d in &sets {
                        for f in FinFn::all(a, b) {
                            for g in FinFn::all(b, c) {
                                for h in FinFn::all(c, d) {
                                    let lhs = h.compose(&g).unwrap().compose(&f).unwrap();
                                    let rhs = h.compose(&g.compose(&f).unwrap()).unwrap();
                                    assert_eq!(lhs, rhs);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn preimage_of_identity_is_singleton() {
        let f = FinFn::identity(&ab());
        assert_eq!(
            f.preimage(&El::atom("a")).unwrap(),
            FinSet::new([El::atom("a")])
        );
    }

    #[test]
    fn preimage_collapses_and_misses() {
        let cod = FinSet::new([El::atom("c"), El::atom("d")]);
        let f = FinFn::tabulate(ab(), cod, |_| El::atom("c")).unwrap();
        assert_eq!(f.preimage(&El::atom("c")).unwrap(), ab());
        assert_eq!(f.preimage(&El::atom("d")).unwrap(), FinSet::empty());
        assert!(f.preimage(&El::atom("e")).is_err());
    }

    #[test]
    fn fibers_partition_the_domain() {
        // Over all functions between sets of size <= 3.
        for n in 0..=3usize {
            for m in 0..=3usize {
                let dom = FinSet::atoms("x", n);
                let cod = FinSet::atoms("y", m);
                for f in FinFn::all(&dom, &cod) {
                    let total: usize = cod
                        .iter()
                        .map(|y| f.preimage(y).unwrap().len())
                        .sum();
                    assert_eq!(total, dom.len());
                    // Distinct fibers are disjoint.
                    for y1 in cod.iter() {
                        for y2 in cod.iter() {
                            if y1 < y2 {
                                let p1 = f.preimage(y1).unwrap();
                                let p2 = f.preimage(y2).unwrap();
                                assert!(p1.iter().all(|x| !p2.contains(x)));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_partial_tables() {
        let err = FinFn::new(ab(), ab(), BTreeMap::new()).unwrap_err();
        assert!(matches!(err, Error::NotTotal { .. }));
    }
}
