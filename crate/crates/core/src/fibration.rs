//! Two executable fibrations over finite sets: the families fibration
//! (proof-relevant, set-valued fibers) and the subobject fibration
//! (proof-irrelevant subsets). Both are bifibrations with truth and
//! comprehension, which is all the lifting construction needs:
//!
//! - `truth` builds the terminal predicate of a fibre,
//! - `comprehend`/`proj` package a predicate into its total space,
//! - `reindex`/`opreindex` are the pullback and its left adjoint,
//! - `dagger`/`sharp` witness that truth is left adjoint to comprehension.

use std::collections::BTreeMap;

use crate::el::El;
use crate::error::{Error, Result};
use crate::sets::{FinFn, FinSet};

/// The two built-in fibration instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Fibration {
    Families,
    Subobject,
}

impl Fibration {
    /// The truth predicate on `x`: terminal in its fibre.
    pub fn truth(&self, x: &FinSet) -> Predicate {
        match self {
            Fibration::Families => {
                let fibers = x
                    .iter()
                    .map(|v| (v.clone(), FinSet::singleton_unit()))
                    .collect();
                Predicate {
                    carrier: x.clone(),
                    data: PredicateData::Families(fibers),
                }
            }
            Fibration::Subobject => Predicate {
                carrier: x.clone(),
                data: PredicateData::Subobject(x.clone()),
            },
        }
    }
}

impl std::fmt::Display for Fibration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Fibration::Families => write!(f, "families"),
            Fibration::Subobject => write!(f, "subobject"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum PredicateData {
    /// Per-element proof fibers, total on the carrier.
    Families(BTreeMap<El, FinSet>),
    /// A subset of the carrier.
    Subobject(FinSet),
}

/// An object of a fibration's total category.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Predicate {
    carrier: FinSet,
    data: PredicateData,
}

impl Predicate {
    /// A families predicate. Carrier elements missing from the map get empty
    /// fibers; extraneous keys are rejected.
    pub fn families(carrier: FinSet, fibers: BTreeMap<El, FinSet>) -> Result<Predicate> {
        for key in fibers.keys() {
            if !carrier.contains(key) {
                return Err(Error::MissingFiber {
                    element: key.to_string(),
                });
            }
        }
        let fibers = carrier
            .iter()
            .map(|x| {
                let fiber = fibers.get(x).cloned().unwrap_or_default();
                (x.clone(), fiber)
            })
            .collect();
        Ok(Predicate {
            carrier,
            data: PredicateData::Families(fibers),
        })
    }

    /// A subobject predicate: `members ⊆ carrier`.
    pub fn subobject(carrier: FinSet, members: FinSet) -> Result<Predicate> {
        if let Some(bad) = members.iter().find(|m| !carrier.contains(m)) {
            return Err(Error::NotASubset {
                element: bad.to_string(),
            });
        }
        Ok(Predicate {
            carrier,
            data: PredicateData::Subobject(members),
        })
    }

    pub fn fibration(&self) -> Fibration {
        match self.data {
            PredicateData::Families(_) => Fibration::Families,
            PredicateData::Subobject(_) => Fibration::Subobject,
        }
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    /// The proof fiber at `x`. For the subobject instance this is `{*}` or
    /// empty according to membership.
    pub fn fiber(&self, x: &El) -> Result<FinSet> {
        if !self.carrier.contains(x) {
            return Err(Error::NotInDomain {
                element: x.to_string(),
                dom: self.carrier.to_string(),
            });
        }
        Ok(match &self.data {
            PredicateData::Families(fibers) => fibers[x].clone(),
            PredicateData::Subobject(members) => {
                if members.contains(x) {
                    FinSet::singleton_unit()
                } else {
                    FinSet::empty()
                }
            }
        })
    }

    pub fn members(&self) -> Option<&FinSet> {
        match &self.data {
            PredicateData::Subobject(members) => Some(members),
            PredicateData::Families(_) => None,
        }
    }

    /// The comprehension `{P}`: the total space of (element, proof) pairs.
    /// Families pairs are `DPair(x, p)`; for subobjects it is the member set.
    pub fn comprehend(&self) -> FinSet {
        match &self.data {
            PredicateData::Families(fibers) => FinSet::new(fibers.iter().flat_map(|(x, ps)| {
                ps.iter().map(move |p| El::dpair(x.clone(), p.clone()))
            })),
            PredicateData::Subobject(members) => members.clone(),
        }
    }

    /// The projection `π_P : {P} → carrier`.
    pub fn proj(&self) -> FinFn {
        let compr = self.comprehend();
        match &self.data {
            PredicateData::Families(_) => FinFn::tabulate(compr, self.carrier.clone(), |el| {
                match el {
                    El::DPair(x, _) => (**x).clone(),
                    other => other.clone(),
                }
            })
            .expect("projection is total by construction"),
            PredicateData::Subobject(_) => {
                FinFn::tabulate(compr, self.carrier.clone(), |el| el.clone())
                    .expect("inclusion is total by construction")
            }
        }
    }

    /// Reindexing `f*P`: pullback along `f`. Requires `cod f = carrier P`.
    pub fn reindex(&self, f: &FinFn) -> Result<Predicate> {
        if f.cod() != &self.carrier {
            return Err(Error::CodomainMismatch {
                expected: self.carrier.to_string(),
                got: f.cod().to_string(),
            });
        }
        Ok(match &self.data {
            PredicateData::Families(_) => {
                let fibers = f
                    .dom()
                    .iter()
                    .map(|x| Ok((x.clone(), self.fiber(f.apply(x)?)?)))
                    .collect::<Result<BTreeMap<_, _>>>()?;
                Predicate {
                    carrier: f.dom().clone(),
                    data: PredicateData::Families(fibers),
                }
            }
            PredicateData::Subobject(members) => {
                let pulled = FinSet::new(
                    f.dom()
                        .iter()
                        .filter(|x| members.contains(f.apply(x).expect("total")))
                        .cloned(),
                );
                Predicate {
                    carrier: f.dom().clone(),
                    data: PredicateData::Subobject(pulled),
                }
            }
        })
    }

    /// Opreindexing `Σ_f P`, the left adjoint to `f*`. Families fibers are
    /// tagged disjoint unions `Pair(x, p)`; subobject members are the image.
    /// Requires `dom f = carrier P`.
    pub fn opreindex(&self, f: &FinFn) -> Result<Predicate> {
        if f.dom() != &self.carrier {
            return Err(Error::DomainMismatch {
                expected: self.carrier.to_string(),
                got: f.dom().to_string(),
            });
        }
        Ok(match &self.data {
            PredicateData::Families(fibers) => {
                let mut out: BTreeMap<El, Vec<El>> =
                    f.cod().iter().map(|y| (y.clone(), Vec::new())).collect();
                for (x, ps) in fibers {
                    let y = f.apply(x)?;
                    let bucket = out.get_mut(y).expect("image lies in codomain");
                    for p in ps.iter() {
                        bucket.push(El::pair(x.clone(), p.clone()));
                    }
                }
                Predicate {
                    carrier: f.cod().clone(),
                    data: PredicateData::Families(
                        out.into_iter().map(|(y, ps)| (y, FinSet::new(ps))).collect(),
                    ),
                }
            }
            PredicateData::Subobject(members) => {
                let image = FinSet::new(
                    members
                        .iter()
                        .map(|x| f.apply(x).expect("total").clone()),
                );
                Predicate {
                    carrier: f.cod().clone(),
                    data: PredicateData::Subobject(image),
                }
            }
        })
    }

    /// True iff every fiber is inhabited.
    pub fn everywhere_inhabited(&self) -> bool {
        self.carrier
            .iter()
            .all(|x| !self.fiber(x).expect("carrier element").is_empty())
    }
}

/// A morphism of predicates: a base function together with a fiberwise proof
/// map `f∼ : ∀x. P x → P′(f x)`. Subobject morphisms carry no proof data; the
/// invariant is that the base maps members into members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredMorphism {
    src: Predicate,
    dst: Predicate,
    base: FinFn,
    proofs: BTreeMap<(El, El), El>,
}

impl PredMorphism {
    pub fn new(
        src: Predicate,
        dst: Predicate,
        base: FinFn,
        proofs: BTreeMap<(El, El), El>,
    ) -> Result<PredMorphism> {
        if base.dom() != src.carrier() {
            return Err(Error::DomainMismatch {
                expected: src.carrier().to_string(),
                got: base.dom().to_string(),
            });
        }
        if base.cod() != dst.carrier() {
            return Err(Error::CodomainMismatch {
                expected: dst.carrier().to_string(),
                got: base.cod().to_string(),
            });
        }
        match (src.fibration(), dst.fibration()) {
            (Fibration::Families, Fibration::Families) => {
                for x in src.carrier().iter() {
                    let target = dst.fiber(base.apply(x)?)?;
                    for p in src.fiber(x)?.iter() {
                        let key = (x.clone(), p.clone());
                        match proofs.get(&key) {
                            None => {
                                return Err(Error::NotTotal {
                                    element: format!("proof map at ({x}, {p})"),
                                })
                            }
                            Some(q) if !target.contains(q) => {
                                return Err(Error::NotInCodomain {
                                    element: q.to_string(),
                                    cod: target.to_string(),
                                })
                            }
                            Some(_) => {}
                        }
                    }
                }
                let keyset: std::collections::BTreeSet<(El, El)> = src
                    .carrier()
                    .iter()
                    .flat_map(|x| {
                        src.fiber(x)
                            .expect("carrier element")
                            .iter()
                            .map(move |p| (x.clone(), p.clone()))
                            .collect::<Vec<_>>()
                    })
                    .collect();
                let proofs = proofs
                    .into_iter()
                    .filter(|(k, _)| keyset.contains(k))
                    .collect();
                Ok(PredMorphism {
                    src,
                    dst,
                    base,
                    proofs,
                })
            }
            (Fibration::Subobject, Fibration::Subobject) => {
                let members = src.members().expect("subobject");
                let targets = dst.members().expect("subobject");
                for m in members.iter() {
                    let y = base.apply(m)?;
                    if !targets.contains(y) {
                        return Err(Error::NotInCodomain {
                            element: y.to_string(),
                            cod: targets.to_string(),
                        });
                    }
                }
                Ok(PredMorphism {
                    src,
                    dst,
                    base,
                    proofs: BTreeMap::new(),
                })
            }
            _ => Err(Error::FamiliesOnly {
                op: "morphisms between mixed fibration instances",
            }),
        }
    }

    pub fn identity(p: &Predicate) -> PredMorphism {
        let base = FinFn::identity(p.carrier());
        let proofs = match p.fibration() {
            Fibration::Families => p
                .carrier()
                .iter()
                .flat_map(|x| {
                    p.fiber(x)
                        .expect("carrier element")
                        .iter()
                        .map(move |pr| ((x.clone(), pr.clone()), pr.clone()))
                        .collect::<Vec<_>>()
                })
                .collect(),
            Fibration::Subobject => BTreeMap::new(),
        };
        PredMorphism {
            src: p.clone(),
            dst: p.clone(),
            base,
            proofs,
        }
    }

    pub fn src(&self) -> &Predicate {
        &self.src
    }

    pub fn dst(&self) -> &Predicate {
        &self.dst
    }

    pub fn base(&self) -> &FinFn {
        &self.base
    }

    pub fn apply_proof(&self, x: &El, p: &El) -> Result<El> {
        match self.src.fibration() {
            Fibration::Families => self
                .proofs
                .get(&(x.clone(), p.clone()))
                .cloned()
                .ok_or_else(|| Error::NotInDomain {
                    element: format!("({x}, {p})"),
                    dom: "proof map".to_string(),
                }),
            Fibration::Subobject => Ok(El::Unit),
        }
    }

    /// Composition `self ∘ other`: base functions compose, proof maps chase
    /// through the intermediate fiber.
    pub fn compose(&self, other: &PredMorphism) -> Result<PredMorphism> {
        if other.dst != self.src {
            return Err(Error::Composition {
                lhs: "predicate morphism target".to_string(),
                rhs: "predicate morphism source".to_string(),
            });
        }
        let base = self.base.compose(&other.base)?;
        let mut proofs = BTreeMap::new();
        if other.src.fibration() == Fibration::Families {
            for ((x, p), q) in &other.proofs {
                let mid = other.base.apply(x)?;
                proofs.insert((x.clone(), p.clone()), self.apply_proof(mid, q)?);
            }
        }
        PredMorphism::new(other.src.clone(), self.dst.clone(), base, proofs)
    }

    pub fn is_over_identity(&self) -> bool {
        self.base == FinFn::identity(self.src.carrier())
    }
}

/// An isomorphism in a fibre: mutually inverse morphisms over the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibreIso {
    pub forward: PredMorphism,
    pub backward: PredMorphism,
}

impl FibreIso {
    /// Checks that both composites are fibre identities.
    pub fn verify(&self) -> bool {
        if !self.forward.is_over_identity() || !self.backward.is_over_identity() {
            return false;
        }
        let fb = match self.forward.compose(&self.backward) {
            Ok(m) => m,
            Err(_) => return false,
        };
        let bf = match self.backward.compose(&self.forward) {
            Ok(m) => m,
            Err(_) => return false,
        };
        fb == PredMorphism::identity(self.backward.src())
            && bf == PredMorphism::identity(self.forward.src())
    }
}

/// Attempts to build a fibre isomorphism `p ≅ q`. For families predicates the
/// fibers are zipped in canonical order, which succeeds exactly when all
/// pointwise cardinalities agree; for subobjects the member sets must be
/// equal.
pub fn fibre_iso(p: &Predicate, q: &Predicate) -> Option<FibreIso> {
    if p.carrier() != q.carrier() || p.fibration() != q.fibration() {
        return None;
    }
    match p.fibration() {
        Fibration::Families => {
            let mut fwd = BTreeMap::new();
            let mut bwd = BTreeMap::new();
            for x in p.carrier().iter() {
                let pf = p.fiber(x).expect("carrier element");
                let qf = q.fiber(x).expect("carrier element");
                if pf.len() != qf.len() {
                    return None;
                }
                for (a, b) in pf.iter().zip(qf.iter()) {
                    fwd.insert((x.clone(), a.clone()), b.clone());
                    bwd.insert((x.clone(), b.clone()), a.clone());
                }
            }
            let id = FinFn::identity(p.carrier());
            let forward = PredMorphism::new(p.clone(), q.clone(), id.clone(), fwd).ok()?;
            let backward = PredMorphism::new(q.clone(), p.clone(), id, bwd).ok()?;
            Some(FibreIso { forward, backward })
        }
        Fibration::Subobject => {
            if p.members() != q.members() {
                return None;
            }
            let id = FinFn::identity(p.carrier());
            let forward =
                PredMorphism::new(p.clone(), q.clone(), id.clone(), BTreeMap::new()).ok()?;
            let backward = PredMorphism::new(q.clone(), p.clone(), id, BTreeMap::new()).ok()?;
            Some(FibreIso { forward, backward })
        }
    }
}

/// All fibre morphisms `p → q` over the identity, in a stable order.
pub fn fibre_homs(p: &Predicate, q: &Predicate) -> Vec<PredMorphism> {
    if p.carrier() != q.carrier() || p.fibration() != q.fibration() {
        return Vec::new();
    }
    let id = FinFn::identity(p.carrier());
    match p.fibration() {
        Fibration::Subobject => PredMorphism::new(p.clone(), q.clone(), id, BTreeMap::new())
            .into_iter()
            .collect(),
        Fibration::Families => {
            let keys: Vec<(El, El)> = p
                .carrier()
                .iter()
                .flat_map(|x| {
                    p.fiber(x)
                        .expect("carrier element")
                        .iter()
                        .map(move |pr| (x.clone(), pr.clone()))
                        .collect::<Vec<_>>()
                })
                .collect();
            let pools: Vec<Vec<El>> = keys
                .iter()
                .map(|(x, _)| q.fiber(x).expect("carrier element").elements().to_vec())
                .collect();
            if pools.iter().any(|pool| pool.is_empty()) && !keys.is_empty() {
                return Vec::new();
            }
            let mut out = Vec::new();
            let mut idx = vec![0usize; keys.len()];
            loop {
                let proofs: BTreeMap<(El, El), El> = keys
                    .iter()
                    .enumerate()
                    .map(|(k, (x, pr))| ((x.clone(), pr.clone()), pools[k][idx[k]].clone()))
                    .collect();
                let m = PredMorphism::new(p.clone(), q.clone(), id.clone(), proofs)
                    .expect("choices lie in target fibers");
                out.push(m);
                let mut carried = true;
                for (d, pool) in idx.iter_mut().zip(&pools) {
                    *d += 1;
                    if *d < pool.len() {
                        carried = false;
                        break;
                    }
                    *d = 0;
                }
                if carried || keys.is_empty() {
                    break;
                }
            }
            out
        }
    }
}

/// The truth functor on morphisms: `K1 f : truth(dom f) → truth(cod f)`.
pub fn truth_arrow(fib: Fibration, f: &FinFn) -> PredMorphism {
    let src = fib.truth(f.dom());
    let dst = fib.truth(f.cod());
    let proofs = match fib {
        Fibration::Families => f
            .dom()
            .iter()
            .map(|x| ((x.clone(), El::Unit), El::Unit))
            .collect(),
        Fibration::Subobject => BTreeMap::new(),
    };
    PredMorphism::new(src, dst, f.clone(), proofs).expect("truth arrow is always valid")
}

/// The comprehension functor on morphisms: `{m} : {src} → {dst}`.
pub fn compr_arrow(m: &PredMorphism) -> FinFn {
    let dom = m.src().comprehend();
    let cod = m.dst().comprehend();
    match m.src().fibration() {
        Fibration::Families => FinFn::tabulate(dom, cod, |el| match el {
            El::DPair(x, p) => {
                let y = m.base().apply(x).expect("total");
                let q = m.apply_proof(x, p).expect("proof map total");
                El::dpair(y.clone(), q)
            }
            other => other.clone(),
        })
        .expect("comprehension arrow lands in the target total space"),
        Fibration::Subobject => FinFn::tabulate(dom, cod, |el| {
            m.base().apply(el).expect("total").clone()
        })
        .expect("members map into members"),
    }
}

/// `h† : truth(dom h) → P` for `h : Y → {P}` (Lemma: truth ⊣ comprehension).
pub fn dagger(h: &FinFn, p: &Predicate) -> Result<PredMorphism> {
    if h.cod() != &p.comprehend() {
        return Err(Error::NotComprehensionCodomain);
    }
    let fib = p.fibration();
    let base = p.proj().compose(h)?;
    let proofs = match fib {
        Fibration::Families => h
            .dom()
            .iter()
            .map(|y| {
                let pair = h.apply(y).expect("total");
                let proof = match pair {
                    El::DPair(_, pr) => (**pr).clone(),
                    _ => unreachable!("comprehension elements are dependent pairs"),
                };
                ((y.clone(), El::Unit), proof)
            })
            .collect(),
        Fibration::Subobject => BTreeMap::new(),
    };
    PredMorphism::new(fib.truth(h.dom()), p.clone(), base, proofs)
}

/// `m# : Y → {P}` for `m : truth(Y) → P`, inverse to [`dagger`].
pub fn sharp(m: &PredMorphism) -> Result<FinFn> {
    let y = m.src().carrier();
    if m.src() != &m.src().fibration().truth(y) {
        return Err(Error::NotTruthSource);
    }
    let p = m.dst();
    let compr = p.comprehend();
    match p.fibration() {
        Fibration::Families => FinFn::tabulate(y.clone(), compr, |v| {
            let base = m.base().apply(v).expect("total").clone();
            let proof = m.apply_proof(v, &El::Unit).expect("proof map total");
            El::dpair(base, proof)
        }),
        Fibration::Subobject => FinFn::tabulate(y.clone(), compr, |v| {
            m.base().apply(v).expect("total").clone()
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> FinSet {
        FinSet::new([El::atom("a"), El::atom("b")])
    }

    fn sample_families() -> Predicate {
        let mut fibers = BTreeMap::new();
        fibers.insert(El::atom("a"), FinSet::new([El::atom("p")]));
        Predicate::families(ab(), fibers).unwrap()
    }

    #[test]
    fn truth_on_empty_carrier() {
        for fib in [Fibration::Families, Fibration::Subobject] {
            let t = fib.truth(&FinSet::empty());
            assert!(t.carrier().is_empty());
            assert!(t.comprehend().is_empty());
        }
    }

    #[test]
    fn families_truth_has_unit_fibers() {
        let t = Fibration::Families.truth(&ab());
        assert_eq!(t.fiber(&El::atom("a")).unwrap(), FinSet::singleton_unit());
        assert_eq!(t.fiber(&El::atom("b")).unwrap(), FinSet::singleton_unit());
    }

    #[test]
    fn truth_carrier_is_the_base_object() {
        // U ∘ K1 = Id on the nose.
        for fib in [Fibration::Families, Fibration::Subobject] {
            assert_eq!(fib.truth(&ab()).carrier(), &ab());
        }
    }

    #[test]
    fn comprehension_of_partial_predicate() {
        let p = sample_families();
        assert_eq!(
            p.comprehend(),
            FinSet::new([El::dpair(El::atom("a"), El::atom("p"))])
        );
    }

    #[test]
    fn comprehension_counts_sum_of_fibers() {
        let mut fibers = BTreeMap::new();
        fibers.insert(El::atom("a"), FinSet::new([El::atom("p"), El::atom("q")]));
        fibers.insert(El::atom("b"), FinSet::new([El::atom("r")]));
        let p = Predicate::families(ab(), fibers).unwrap();
        assert_eq!(p.comprehend().len(), 3);
    }

    #[test]
    fn projection_of_truth_is_iso() {
        let t = Fibration::Families.truth(&FinSet::new([El::atom("a")]));
        let pi = t.proj();
        assert!(pi.is_iso());
        assert_eq!(
            pi.apply(&El::dpair(El::atom("a"), El::Unit)).unwrap(),
            &El::atom("a")
        );
    }

    #[test]
    fn projection_fibers_match_predicate_fibers() {
        let p = sample_families();
        let pi = p.proj();
        assert_eq!(pi.preimage(&El::atom("a")).unwrap().len(), 1);
        assert_eq!(pi.preimage(&El::atom("b")).unwrap().len(), 0);
    }

    #[test]
    fn reindex_along_identity_is_identity() {
        let p = sample_families();
        let got = p.reindex(&FinFn::identity(&ab())).unwrap();
        assert_eq!(got, p);
    }

    #[test]
    fn reindex_along_constant_repeats_a_fiber() {
        let p = sample_families();
        let f = FinFn::tabulate(FinSet::new([El::atom("z")]), ab(), |_| El::atom("a")).unwrap();
        let got = p.reindex(&f).unwrap();
        assert_eq!(got.fiber(&El::atom("z")).unwrap(), FinSet::new([El::atom("p")]));
    }

    #[test]
    fn opreindex_tags_proofs_with_sources() {
        let mut fibers = BTreeMap::new();
        fibers.insert(El::atom("a"), FinSet::new([El::atom("p")]));
        fibers.insert(El::atom("b"), FinSet::new([El::atom("q")]));
        let p = Predicate::families(ab(), fibers).unwrap();
        let c = FinSet::new([El::atom("c")]);
        let f = FinFn::tabulate(ab(), c, |_| El::atom("c")).unwrap();
        let got = p.opreindex(&f).unwrap();
        assert_eq!(
            got.fiber(&El::atom("c")).unwrap(),
            FinSet::new([
                El::pair(El::atom("a"), El::atom("p")),
                El::pair(El::atom("b"), El::atom("q")),
            ])
        );
    }

    #[test]
    fn subobject_reindex_is_preimage_and_opreindex_is_image() {
        let p = Predicate::subobject(ab(), FinSet::new([El::atom("a")])).unwrap();
        let c = FinSet::new([El::atom("c")]);
        let f = FinFn::tabulate(ab(), c.clone(), |_| El::atom("c")).unwrap();
        let img = p.opreindex(&f).unwrap();
        assert_eq!(img.members().unwrap(), &c);
        let back = img.reindex(&f).unwrap();
        assert_eq!(back.members().unwrap(), &ab());
    }

    #[test]
    fn truth_is_terminal_in_its_fibre() {
        // Exactly one fibre morphism P → truth for every small predicate.
        let x = ab();
        for p in enumerate_test_predicates(&x) {
            let t = p.fibration().truth(&x);
            assert_eq!(fibre_homs(&p, &t).len(), 1, "predicate {p:?}");
        }
    }

    fn enumerate_test_predicates(x: &FinSet) -> Vec<Predicate> {
        let mut out = Vec::new();
        let proof_pool = [
            FinSet::empty(),
            FinSet::new([El::atom("p")]),
            FinSet::new([El::atom("p"), El::atom("q")]),
        ];
        let n = x.len();
        let mut idx = vec![0usize; n];
        loop {
            let fibers: BTreeMap<El, FinSet> = x
                .iter()
                .zip(&idx)
                .map(|(el, &i)| (el.clone(), proof_pool[i].clone()))
                .collect();
            out.push(Predicate::families(x.clone(), fibers).unwrap());
            if !bump_odometer(&mut idx, proof_pool.len()) {
                break;
            }
        }
        for members in x.subsets() {
            out.push(Predicate::subobject(x.clone(), members).unwrap());
        }
        out
    }

    #[test]
    fn dagger_sharp_round_trips() {
        let x = ab();
        for p in enumerate_test_predicates(&x) {
            let compr = p.comprehend();
            for y_size in 0..=2usize {
                let y = FinSet::atoms("y", y_size);
                for h in FinFn::all(&y, &compr) {
                    let m = dagger(&h, &p).unwrap();
                    assert_eq!(sharp(&m).unwrap(), h);
                    assert_eq!(dagger(&sharp(&m).unwrap(), &p).unwrap(), m);
                }
            }
        }
    }

    #[test]
    fn dagger_of_identity_is_the_counit() {
        let p = sample_families();
        let compr = p.comprehend();
        let counit = dagger(&FinFn::identity(&compr), &p).unwrap();
        assert_eq!(counit.base(), &p.proj());
        assert_eq!(
            counit
                .apply_proof(&El::dpair(El::atom("a"), El::atom("p")), &El::Unit)
                .unwrap(),
            El::atom("p")
        );
    }

    #[test]
    fn dagger_naturality() {
        // (g ∘ f)† = g† ∘ K1 f, exhaustively at sizes <= 2.
        let x = ab();
        for p in enumerate_test_predicates(&x) {
            let fib = p.fibration();
            let compr = p.comprehend();
            for ysz in 0..=2usize {
                let y = FinSet::atoms("y", ysz);
                for y2sz in 0..=2usize {
                    let y2 = FinSet::atoms("w", y2sz);
                    for g in FinFn::all(&y, &compr) {
                        for f in FinFn::all(&y2, &y) {
                            let lhs = dagger(&g.compose(&f).unwrap(), &p).unwrap();
                            let rhs = dagger(&g, &p)
                                .unwrap()
                                .compose(&truth_arrow(fib, &f))
                                .unwrap();
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn fibre_iso_detects_mismatched_fibers() {
        let p = sample_families();
        let t = Fibration::Families.truth(&ab());
        assert!(fibre_iso(&p, &t).is_none());
        let iso = fibre_iso(&t, &t).unwrap();
        assert!(iso.verify());
    }

    #[test]
    fn proj_surjective_iff_fibers_inhabited() {
        let x = ab();
        for p in enumerate_test_predicates(&x) {
            let surjective = p.proj().image() == *p.carrier();
            assert_eq!(surjective, p.everywhere_inhabited(), "{p:?}");
        }
    }
}
