//! Liftings of endofunctors to the total categories of the two fibrations.
//!
//! The generic lifting factors through the arrow category: project a
//! predicate to its comprehension arrow, apply the functor to that arrow,
//! then take the tagged inverse image. It is truth-preserving for every
//! supported code and both fibration instances, and on polynomial codes it
//! agrees with the clause-by-clause Hermida–Jacobs lifting. A faster
//! container-based pointwise lifting computes the same fibers (up to
//! isomorphism) for polynomial codes and is the rule shape the induction
//! engine executes.

use std::collections::BTreeMap;

use crate::el::El;
use crate::error::{Error, Result};
use crate::fibration::{fibre_iso, FibreIso, Fibration, PredMorphism, Predicate};
use crate::functor::{
    apply_object, decorate, fmap_el, proof_tuples, BoundConfig, FunctorCode,
};
use crate::sets::{FinFn, FinSet};

/// An object of the arrow category over finite sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowObj(pub FinFn);

impl From<FinFn> for ArrowObj {
    fn from(f: FinFn) -> Self {
        ArrowObj(f)
    }
}

/// The codomain lifting applied to one arrow: `F f : F X → F Y`.
pub fn arrow_lift(code: &FunctorCode, f: &ArrowObj, b: &BoundConfig) -> Result<ArrowObj> {
    let dom = apply_object(code, f.0.dom(), b);
    let cod = apply_object(code, f.0.cod(), b);
    let table = dom
        .iter()
        .map(|y| Ok((y.clone(), fmap_el(code, &f.0, y)?)))
        .collect::<Result<BTreeMap<El, El>>>()?;
    Ok(ArrowObj(FinFn::new(dom, cod, table)?))
}

/// The inverse-image functor: a function becomes the predicate of its fibers,
/// tagged the same way opreindexing tags them (`Pair(x, *)` in the families
/// instance, the image in the subobject instance).
pub fn inv_image(fib: Fibration, f: &ArrowObj) -> Predicate {
    match fib {
        Fibration::Families => {
            let fibers: BTreeMap<El, FinSet> = f
                .0
                .cod()
                .iter()
                .map(|y| {
                    let fiber = FinSet::new(
                        f.0.preimage(y)
                            .expect("codomain element")
                            .iter()
                            .map(|x| El::pair(x.clone(), El::Unit)),
                    );
                    (y.clone(), fiber)
                })
                .collect();
            Predicate::families(f.0.cod().clone(), fibers)
                .expect("fibers are indexed by the codomain")
        }
        Fibration::Subobject => Predicate::subobject(f.0.cod().clone(), f.0.image())
            .expect("the image is a subset of the codomain"),
    }
}

/// The generic truth-preserving lifting: opreindex the truth predicate on
/// `F{P}` along `F π_P`. The result lives over `F(carrier P)`.
pub fn generic_lift(code: &FunctorCode, p: &Predicate, b: &BoundConfig) -> Result<Predicate> {
    let fib = p.fibration();
    let fpi = arrow_lift(code, &ArrowObj(p.proj()), b)?;
    let truth_over_total = fib.truth(fpi.0.dom());
    truth_over_total.opreindex(&fpi.0)
}

/// The lifting's action on predicate morphisms: the base is the lifted base
/// arrow and proofs push forward through the lifted comprehension arrow.
pub fn generic_lift_arrow(
    code: &FunctorCode,
    m: &PredMorphism,
    b: &BoundConfig,
) -> Result<PredMorphism> {
    let src = generic_lift(code, m.src(), b)?;
    let dst = generic_lift(code, m.dst(), b)?;
    let base = arrow_lift(code, &ArrowObj(m.base().clone()), b)?.0;
    let proofs = match m.src().fibration() {
        Fibration::Subobject => BTreeMap::new(),
        Fibration::Families => {
            let compr = arrow_lift(code, &ArrowObj(crate::fibration::compr_arrow(m)), b)?.0;
            let mut proofs = BTreeMap::new();
            for z in src.carrier().iter() {
                for proof in src.fiber(z)?.iter() {
                    let w = match proof {
                        El::Pair(w, _) => (**w).clone(),
                        _ => unreachable!("opreindexed fibers are tagged pairs"),
                    };
                    let image = El::pair(compr.apply(&w)?.clone(), El::Unit);
                    proofs.insert((z.clone(), proof.clone()), image);
                }
            }
            proofs
        }
    };
    PredMorphism::new(src, dst, base, proofs)
}

/// The explicit witness that the lifting is truth-preserving:
/// `genericLift(code, truth X) ≅ truth(F X)`.
pub fn truth_pres_iso(
    fib: Fibration,
    code: &FunctorCode,
    x: &FinSet,
    b: &BoundConfig,
) -> Result<FibreIso> {
    let lifted = generic_lift(code, &fib.truth(x), b)?;
    let truth_fx = fib.truth(&apply_object(code, x, b));
    fibre_iso(&lifted, &truth_fx).ok_or_else(|| Error::Shape {
        code: code.to_string(),
        value: format!("no fibre isomorphism onto truth over {x}"),
    })
}

/// The container-based lifting: the fiber at `y` is the set of decorations of
/// `y` by proof tuples drawn from the fibers at its positions. Families
/// instance only.
pub fn lift_pointwise(code: &FunctorCode, p: &Predicate, y: &El) -> Result<FinSet> {
    if p.fibration() != Fibration::Families {
        return Err(Error::FamiliesOnly {
            op: "lift_pointwise",
        });
    }
    let tuples = proof_tuples(code, y, &mut |pos| Ok(p.fiber(pos)?.elements().to_vec()))?;
    let decorations: Result<Vec<El>> = tuples.iter().map(|ps| decorate(code, y, ps)).collect();
    Ok(FinSet::new(decorations?))
}

/// [`lift_pointwise`] over the whole carrier, packaged as a predicate.
pub fn lift_pointwise_predicate(
    code: &FunctorCode,
    p: &Predicate,
    b: &BoundConfig,
) -> Result<Predicate> {
    let carrier = apply_object(code, p.carrier(), b);
    let fibers = carrier
        .iter()
        .map(|y| Ok((y.clone(), lift_pointwise(code, p, y)?)))
        .collect::<Result<BTreeMap<El, FinSet>>>()?;
    Predicate::families(carrier, fibers)
}

/// The Hermida–Jacobs polynomial lifting, defined clause by clause: constants
/// lift to truth, identity to the predicate itself, sums fiberwise over the
/// tagged carrier, products to fiberwise products. Families instance only;
/// rejects non-polynomial codes.
pub fn hj_lift(code: &FunctorCode, p: &Predicate, b: &BoundConfig) -> Result<Predicate> {
    if p.fibration() != Fibration::Families {
        return Err(Error::FamiliesOnly { op: "hj_lift" });
    }
    if !code.is_polynomial() {
        return Err(Error::UnsupportedCode {
            op: "hj_lift",
            code: code.to_string(),
        });
    }
    hj_lift_inner(code, p, b)
}

fn hj_lift_inner(code: &FunctorCode, p: &Predicate, b: &BoundConfig) -> Result<Predicate> {
    match code {
        FunctorCode::Const(s) => Ok(Fibration::Families.truth(s)),
        FunctorCode::Id => Ok(p.clone()),
        FunctorCode::Sum(f, g) => {
            let left = hj_lift_inner(f, p, b)?;
            let right = hj_lift_inner(g, p, b)?;
            let carrier = apply_object(code, p.carrier(), b);
            let fibers = carrier
                .iter()
                .map(|y| {
                    let fiber = match y {
                        El::Inl(u) => left.fiber(u)?,
                        El::Inr(v) => right.fiber(v)?,
                        _ => unreachable!("sum carrier"),
                    };
                    Ok((y.clone(), fiber))
                })
                .collect::<Result<BTreeMap<El, FinSet>>>()?;
            Predicate::families(carrier, fibers)
        }
        FunctorCode::Prod(f, g) => {
            let left = hj_lift_inner(f, p, b)?;
            let right = hj_lift_inner(g, p, b)?;
            let carrier = apply_object(code, p.carrier(), b);
            let fibers = carrier
                .iter()
                .map(|y| {
                    let (u, v) = match y {
                        El::Pair(u, v) => (u, v),
                        _ => unreachable!("product carrier"),
                    };
                    let lf = left.fiber(u)?;
                    let rf = right.fiber(v)?;
                    let mut fiber = Vec::with_capacity(lf.len() * rf.len());
                    for a in lf.iter() {
                        for c in rf.iter() {
                            fiber.push(El::pair(a.clone(), c.clone()));
                        }
                    }
                    Ok((y.clone(), FinSet::new(fiber)))
                })
                .collect::<Result<BTreeMap<El, FinSet>>>()?;
            Predicate::families(carrier, fibers)
        }
        FunctorCode::Seq(_) | FunctorCode::Pow(_) => unreachable!("checked polynomial"),
    }
}

/// The fiberwise tagged sum of two predicates over a disjoint-union carrier.
/// Used to state the coproduct lifting law.
pub fn coproduct_predicate(left: &Predicate, right: &Predicate) -> Result<Predicate> {
    let carrier = FinSet::new(
        left.carrier()
            .iter()
            .map(|u| El::inl(u.clone()))
            .chain(right.carrier().iter().map(|v| El::inr(v.clone()))),
    );
    match (left.fibration(), right.fibration()) {
        (Fibration::Families, Fibration::Families) => {
            let fibers = carrier
                .iter()
                .map(|y| {
                    let fiber = match y {
                        El::Inl(u) => left.fiber(u)?,
                        El::Inr(v) => right.fiber(v)?,
                        _ => unreachable!(),
                    };
                    Ok((y.clone(), fiber))
                })
                .collect::<Result<BTreeMap<El, FinSet>>>()?;
            Predicate::families(carrier, fibers)
        }
        (Fibration::Subobject, Fibration::Subobject) => {
            let members = FinSet::new(
                left.members()
                    .expect("subobject")
                    .iter()
                    .map(|u| El::inl(u.clone()))
                    .chain(
                        right
                            .members()
                            .expect("subobject")
                            .iter()
                            .map(|v| El::inr(v.clone())),
                    ),
            );
            Predicate::subobject(carrier, members)
        }
        _ => Err(Error::FamiliesOnly {
            op: "coproduct of mixed-instance predicates",
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functor::codes_up_to_depth;
    use crate::sets::bump_odometer;

    fn b() -> BoundConfig {
        BoundConfig::default()
    }

    fn nat_code() -> FunctorCode {
        FunctorCode::sum(FunctorCode::Const(FinSet::singleton_unit()), FunctorCode::Id)
    }

    fn pred_on(x: &FinSet, sizes: &[usize]) -> Predicate {
        let pool = [El::atom("p"), El::atom("q")];
        let fibers = x
            .iter()
            .zip(sizes)
            .map(|(el, &k)| (el.clone(), FinSet::new(pool[..k].iter().cloned())))
            .collect();
        Predicate::families(x.clone(), fibers).unwrap()
    }

    #[test]
    fn arrow_lift_of_identity_is_identity() {
        let x = FinSet::atoms("x", 3);
        let lifted = arrow_lift(&nat_code(), &ArrowObj(FinFn::identity(&x)), &b()).unwrap();
        assert_eq!(lifted.0, FinFn::identity(&apply_object(&nat_code(), &x, &b())));
    }

    #[test]
    fn arrow_lift_on_nat_layers() {
        let x = FinSet::atoms("x", 2);
        let y = FinSet::atoms("y", 1);
        let f = FinFn::tabulate(x, y, |_| El::atom("y0")).unwrap();
        let lifted = arrow_lift(&nat_code(), &ArrowObj(f), &b()).unwrap();
        assert_eq!(
            lifted.0.apply(&El::inl(El::Unit)).unwrap(),
            &El::inl(El::Unit)
        );
        assert_eq!(
            lifted.0.apply(&El::inr(El::atom("x0"))).unwrap(),
            &El::inr(El::atom("y0"))
        );
    }

    #[test]
    fn arrow_lift_preserves_isos() {
        // Over all isos between sets of size <= 3.
        let codes = codes_up_to_depth(
            &[FunctorCode::Id, FunctorCode::Const(FinSet::singleton_unit())],
            1,
        );
        for n in 0..=3usize {
            let x = FinSet::atoms("x", n);
            let y = FinSet::atoms("y", n);
            for f in FinFn::all(&x, &y) {
                if !f.is_iso() {
                    continue;
                }
                for code in &codes {
                    let lifted = arrow_lift(code, &ArrowObj(f.clone()), &b()).unwrap();
                    assert!(lifted.0.is_iso(), "code {code}");
                }
            }
        }
    }

    #[test]
    fn inv_image_of_identity_is_truth_up_to_iso() {
        let x = FinSet::atoms("x", 2);
        let p = inv_image(Fibration::Families, &ArrowObj(FinFn::identity(&x)));
        let iso = fibre_iso(&p, &Fibration::Families.truth(&x));
        assert!(iso.is_some_and(|i| i.verify()));
    }

    #[test]
    fn inv_image_fiber_sizes() {
        let x = FinSet::atoms("x", 2);
        let y = FinSet::new([El::atom("c"), El::atom("d")]);
        let f = FinFn::tabulate(x, y, |_| El::atom("c")).unwrap();
        let p = inv_image(Fibration::Families, &ArrowObj(f));
        assert_eq!(p.fiber(&El::atom("c")).unwrap().len(), 2);
        assert_eq!(p.fiber(&El::atom("d")).unwrap().len(), 0);
    }

    #[test]
    fn inv_image_equals_opreindexed_truth() {
        // Both paths computed independently, all functions at sizes <= 3.
        for fib in [Fibration::Families, Fibration::Subobject] {
            for n in 0..=3usize {
                for m in 0..=3usize {
                    let x = FinSet::atoms("x", n);
                    let y = FinSet::atoms("y", m);
                    for f in FinFn::all(&x, &y) {
                        let via_inv = inv_image(fib, &ArrowObj(f.clone()));
                        let via_op = fib.truth(&x).opreindex(&f).unwrap();
                        assert_eq!(via_inv, via_op);
                    }
                }
            }
        }
    }

    #[test]
    fn generic_lift_nat_fibers() {
        let x = FinSet::atoms("x", 2);
        let p = pred_on(&x, &[2, 1]);
        let lifted = generic_lift(&nat_code(), &p, &b()).unwrap();
        // At inl(*) the fiber is a singleton.
        assert_eq!(lifted.fiber(&El::inl(El::Unit)).unwrap().len(), 1);
        // At inr(n) the fiber matches the fiber of P at n.
        assert_eq!(lifted.fiber(&El::inr(El::atom("x0"))).unwrap().len(), 2);
        assert_eq!(lifted.fiber(&El::inr(El::atom("x1"))).unwrap().len(), 1);
    }

    #[test]
    fn generic_lift_of_const_is_truth() {
        let s = FinSet::atoms("s", 2);
        let x = FinSet::atoms("x", 2);
        let p = pred_on(&x, &[1, 0]);
        let lifted = generic_lift(&FunctorCode::Const(s.clone()), &p, &b()).unwrap();
        let iso = fibre_iso(&lifted, &Fibration::Families.truth(&s));
        assert!(iso.is_some_and(|i| i.verify()));
    }

    #[test]
    fn pow_exact_fiber_counts_multi_proof_subsets() {
        // Fibers of size (2, 1); the exact fiber at the two-element subset
        // has 3 elements while the pointwise fiber has 2.
        let x = FinSet::new([El::atom("x1"), El::atom("x2")]);
        let p = pred_on(&x, &[2, 1]);
        let code = FunctorCode::pow(FunctorCode::Id);
        let lifted = generic_lift(&code, &p, &b()).unwrap();
        let both = El::set(vec![El::atom("x1"), El::atom("x2")]);
        assert_eq!(lifted.fiber(&both).unwrap().len(), 3);
        assert_eq!(lift_pointwise(&code, &p, &both).unwrap().len(), 2);
    }

    #[test]
    fn pointwise_fiber_on_empty_positions_is_singleton() {
        let x = FinSet::atoms("x", 1);
        let p = pred_on(&x, &[0]);
        let fiber = lift_pointwise(&nat_code(), &p, &El::inl(El::Unit)).unwrap();
        assert_eq!(fiber.len(), 1);
    }

    #[test]
    fn pointwise_fiber_on_seq_is_a_product() {
        let x = FinSet::atoms("x", 2);
        let p = pred_on(&x, &[2, 1]);
        let code = FunctorCode::seq(FunctorCode::Id);
        let y = El::Seq(vec![El::atom("x0"), El::atom("x1")]);
        assert_eq!(lift_pointwise(&code, &p, &y).unwrap().len(), 2);
        let y = El::Seq(vec![El::atom("x0"), El::atom("x0")]);
        assert_eq!(lift_pointwise(&code, &p, &y).unwrap().len(), 4);
    }

    #[test]
    fn hj_lift_identity_clause() {
        let x = FinSet::atoms("x", 2);
        let p = pred_on(&x, &[1, 2]);
        assert_eq!(hj_lift(&FunctorCode::Id, &p, &b()).unwrap(), p);
    }

    #[test]
    fn hj_lift_sum_clause_restricts() {
        let x = FinSet::atoms("x", 2);
        let p = pred_on(&x, &[1, 2]);
        let lifted = hj_lift(&nat_code(), &p, &b()).unwrap();
        assert_eq!(lifted.fiber(&El::inl(El::Unit)).unwrap().len(), 1);
        assert_eq!(
            lifted.fiber(&El::inr(El::atom("x1"))).unwrap(),
            p.fiber(&El::atom("x1")).unwrap()
        );
    }

    #[test]
    fn hj_lift_rejects_non_polynomial_codes() {
        let x = FinSet::atoms("x", 1);
        let p = pred_on(&x, &[1]);
        assert!(matches!(
            hj_lift(&FunctorCode::pow(FunctorCode::Id), &p, &b()).unwrap_err(),
            Error::UnsupportedCode { .. }
        ));
    }

    #[test]
    fn hj_lift_agrees_with_generic_lift_on_polynomials() {
        let leaves = [
            FunctorCode::Id,
            FunctorCode::Const(FinSet::empty()),
            FunctorCode::Const(FinSet::singleton_unit()),
        ];
        let codes: Vec<_> = codes_up_to_depth(&leaves, 2)
            .into_iter()
            .filter(|c| c.is_polynomial())
            .collect();
        let x = FinSet::atoms("x", 2);
        for sizes in all_sizes(x.len(), 2) {
            let p = pred_on(&x, &sizes);
            for code in &codes {
                let hj = hj_lift(code, &p, &b()).unwrap();
                let generic = generic_lift(code, &p, &b()).unwrap();
                let iso = fibre_iso(&hj, &generic);
                assert!(iso.is_some_and(|i| i.verify()), "code {code}");
            }
        }
    }

    fn all_sizes(n: usize, max: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut digits = vec![0usize; n];
        loop {
            out.push(digits.clone());
            if !bump_odometer(&mut digits, max + 1) {
                break;
            }
        }
        out
    }

    #[test]
    fn pointwise_matches_generic_on_polynomials_pointwise() {
        let leaves = [FunctorCode::Id, FunctorCode::Const(FinSet::singleton_unit())];
        let codes: Vec<_> = codes_up_to_depth(&leaves, 2)
            .into_iter()
            .filter(|c| c.is_polynomial())
            .collect();
        let x = FinSet::atoms("x", 2);
        let p = pred_on(&x, &[2, 1]);
        for code in &codes {
            let generic = generic_lift(code, &p, &b()).unwrap();
            for y in apply_object(code, &x, &b()).iter() {
                let pw = lift_pointwise(code, &p, y).unwrap();
                assert_eq!(
                    pw.len(),
                    generic.fiber(y).unwrap().len(),
                    "code {code} at {y}"
                );
            }
        }
    }
}
