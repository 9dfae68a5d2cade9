//! The endofunctor universe: syntax, object action, morphism action, and the
//! container view (positions and decoration) that powers pointwise lifting.

use std::fmt;

use crate::el::El;
use crate::error::{Error, Result};
use crate::sets::{FinFn, FinSet};

/// Syntax of the supported endofunctors on finite sets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum FunctorCode {
    /// Constantly `S`-valued.
    Const(FinSet),
    /// The identity functor.
    Id,
    /// Coproduct `F + G`, tagged with `inl`/`inr`.
    Sum(Box<FunctorCode>, Box<FunctorCode>),
    /// Product `F × G` as pair values.
    Prod(Box<FunctorCode>, Box<FunctorCode>),
    /// Finite sequences over `F` (lists; object action truncated by a bound).
    Seq(Box<FunctorCode>),
    /// Finite powerset of `F`, in canonical set form.
    Pow(Box<FunctorCode>),
}

impl FunctorCode {
    pub fn sum(f: FunctorCode, g: FunctorCode) -> FunctorCode {
        FunctorCode::Sum(Box::new(f), Box::new(g))
    }

    pub fn prod(f: FunctorCode, g: FunctorCode) -> FunctorCode {
        FunctorCode::Prod(Box::new(f), Box::new(g))
    }

    pub fn seq(f: FunctorCode) -> FunctorCode {
        FunctorCode::Seq(Box::new(f))
    }

    pub fn pow(f: FunctorCode) -> FunctorCode {
        FunctorCode::Pow(Box::new(f))
    }

    /// Depth of the syntax tree; leaves have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            FunctorCode::Const(_) | FunctorCode::Id => 0,
            FunctorCode::Sum(f, g) | FunctorCode::Prod(f, g) => 1 + f.depth().max(g.depth()),
            FunctorCode::Seq(f) | FunctorCode::Pow(f) => 1 + f.depth(),
        }
    }

    /// Polynomial codes are built from constants, identity, sums and products.
    pub fn is_polynomial(&self) -> bool {
        match self {
            FunctorCode::Const(_) | FunctorCode::Id => true,
            FunctorCode::Sum(f, g) | FunctorCode::Prod(f, g) => {
                f.is_polynomial() && g.is_polynomial()
            }
            FunctorCode::Seq(_) | FunctorCode::Pow(_) => false,
        }
    }

    fn shape_error(&self, value: &El) -> Error {
        Error::Shape {
            code: self.to_string(),
            value: value.to_string(),
        }
    }
}

impl fmt::Display for FunctorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctorCode::Const(s) => write!(f, "Const{s}"),
            FunctorCode::Id => write!(f, "Id"),
            FunctorCode::Sum(a, b) => write!(f, "Sum({a}, {b})"),
            FunctorCode::Prod(a, b) => write!(f, "Prod({a}, {b})"),
            FunctorCode::Seq(a) => write!(f, "Seq({a})"),
            FunctorCode::Pow(a) => write!(f, "Pow({a})"),
        }
    }
}

/// Enumeration bounds. Sequence functors have infinite object action, so law
/// checks truncate them; term-level operations stay exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundConfig {
    pub seq_len_bound: usize,
}

impl Default for BoundConfig {
    fn default() -> Self {
        BoundConfig { seq_len_bound: 3 }
    }
}

/// The object action: enumerates `F X` canonically.
pub fn apply_object(code: &FunctorCode, x: &FinSet, b: &BoundConfig) -> FinSet {
    match code {
        FunctorCode::Const(s) => s.clone(),
        FunctorCode::Id => x.clone(),
        FunctorCode::Sum(f, g) => {
            let left = apply_object(f, x, b);
            let right = apply_object(g, x, b);
            FinSet::new(
                left.iter()
                    .map(|v| El::inl(v.clone()))
                    .chain(right.iter().map(|v| El::inr(v.clone()))),
            )
        }
        FunctorCode::Prod(f, g) => {
            let left = apply_object(f, x, b);
            let right = apply_object(g, x, b);
            let mut out = Vec::with_capacity(left.len() * right.len());
            for a in left.iter() {
                for c in right.iter() {
                    out.push(El::pair(a.clone(), c.clone()));
                }
            }
            FinSet::new(out)
        }
        FunctorCode::Seq(f) => {
            let inner = apply_object(f, x, b);
            let mut out = vec![El::Seq(Vec::new())];
            let mut layer: Vec<Vec<El>> = vec![Vec::new()];
            for _ in 0..b.seq_len_bound {
                let mut next = Vec::new();
                for prefix in &layer {
                    for v in inner.iter() {
                        let mut s = prefix.clone();
                        s.push(v.clone());
                        out.push(El::Seq(s.clone()));
                        next.push(s);
                    }
                }
                layer = next;
            }
            FinSet::new(out)
        }
        FunctorCode::Pow(f) => {
            let inner = apply_object(f, x, b);
            FinSet::new(
                inner
                    .subsets()
                    .into_iter()
                    .map(|s| El::Set(s.elements().to_vec())),
            )
        }
    }
}

/// An upper bound on `|F X|` given `|X| = n`, saturating. Used by the law
/// suite to prune sweeps that would not be desk-scale.
pub fn object_size_bound(code: &FunctorCode, n: usize, b: &BoundConfig) -> usize {
    match code {
        FunctorCode::Const(s) => s.len(),
        FunctorCode::Id => n,
        FunctorCode::Sum(f, g) => {
            object_size_bound(f, n, b).saturating_add(object_size_bound(g, n, b))
        }
        FunctorCode::Prod(f, g) => {
            object_size_bound(f, n, b).saturating_mul(object_size_bound(g, n, b))
        }
        FunctorCode::Seq(f) => {
            let k = object_size_bound(f, n, b);
            let mut total = 1usize;
            let mut pow = 1usize;
            for _ in 0..b.seq_len_bound {
                pow = pow.saturating_mul(k);
                total = total.saturating_add(pow);
            }
            total
        }
        FunctorCode::Pow(f) => {
            let k = object_size_bound(f, n, b);
            if k >= usize::BITS as usize - 1 {
                usize::MAX
            } else {
                1usize << k
            }
        }
    }
}

/// Rewrites the value at every `Id` position. For `Pow` the result is
/// re-canonicalized, so images may shrink. This is the engine behind both the
/// morphism action and the fold.
pub fn map_positions(
    code: &FunctorCode,
    y: &El,
    f: &mut dyn FnMut(&El) -> Result<El>,
) -> Result<El> {
    match (code, y) {
        (FunctorCode::Const(s), v) => {
            if s.contains(v) {
                Ok(v.clone())
            } else {
                Err(code.shape_error(y))
            }
        }
        (FunctorCode::Id, v) => f(v),
        (FunctorCode::Sum(fc, _), El::Inl(v)) => Ok(El::inl(map_positions(fc, v, f)?)),
        (FunctorCode::Sum(_, gc), El::Inr(v)) => Ok(El::inr(map_positions(gc, v, f)?)),
        (FunctorCode::Prod(fc, gc), El::Pair(a, c)) => Ok(El::pair(
            map_positions(fc, a, f)?,
            map_positions(gc, c, f)?,
        )),
        (FunctorCode::Seq(fc), El::Seq(items)) => {
            let mapped: Result<Vec<El>> =
                items.iter().map(|v| map_positions(fc, v, f)).collect();
            Ok(El::Seq(mapped?))
        }
        (FunctorCode::Pow(fc), El::Set(items)) => {
            let mapped: Result<Vec<El>> =
                items.iter().map(|v| map_positions(fc, v, f)).collect();
            Ok(El::set(mapped?))
        }
        _ => Err(code.shape_error(y)),
    }
}

/// The morphism action `F f` applied to a single element.
pub fn fmap_el(code: &FunctorCode, f: &FinFn, y: &El) -> Result<El> {
    map_positions(code, y, &mut |v| f.apply(v).cloned())
}

/// The `Id`-occurrences inside `y`, in canonical left-to-right order. For
/// `Pow` each member of the canonical set contributes its positions once.
pub fn positions(code: &FunctorCode, y: &El) -> Result<Vec<El>> {
    let mut out = Vec::new();
    collect_positions(code, y, &mut out)?;
    Ok(out)
}

fn collect_positions(code: &FunctorCode, y: &El, out: &mut Vec<El>) -> Result<()> {
    match (code, y) {
        (FunctorCode::Const(s), v) => {
            if s.contains(v) {
                Ok(())
            } else {
                Err(code.shape_error(y))
            }
        }
        (FunctorCode::Id, v) => {
            out.push(v.clone());
            Ok(())
        }
        (FunctorCode::Sum(fc, _), El::Inl(v)) => collect_positions(fc, v, out),
        (FunctorCode::Sum(_, gc), El::Inr(v)) => collect_positions(gc, v, out),
        (FunctorCode::Prod(fc, gc), El::Pair(a, c)) => {
            collect_positions(fc, a, out)?;
            collect_positions(gc, c, out)
        }
        (FunctorCode::Seq(fc), El::Seq(items)) => {
            for v in items {
                collect_positions(fc, v, out)?;
            }
            Ok(())
        }
        (FunctorCode::Pow(fc), El::Set(items)) => {
            for v in items {
                collect_positions(fc, v, out)?;
            }
            Ok(())
        }
        _ => Err(code.shape_error(y)),
    }
}

/// Replaces the i-th position value `x_i` by `DPair(x_i, proofs_i)`. The
/// result lives over the comprehension carrier; erasing proofs recovers `y`.
pub fn decorate(code: &FunctorCode, y: &El, proofs: &[El]) -> Result<El> {
    let expected = positions(code, y)?.len();
    if expected != proofs.len() {
        return Err(Error::DecorationArity {
            positions: expected,
            proofs: proofs.len(),
        });
    }
    let mut next = 0usize;
    let decorated = map_positions(code, y, &mut |v| {
        let p = proofs[next].clone();
        next += 1;
        Ok(El::dpair(v.clone(), p))
    })?;
    Ok(decorated)
}

/// All proof tuples for the positions of `y`, where the i-th proof ranges
/// over `choices(position_i)`. Deterministic odometer order.
pub fn proof_tuples(
    code: &FunctorCode,
    y: &El,
    choices: &mut dyn FnMut(&El) -> Result<Vec<El>>,
) -> Result<Vec<Vec<El>>> {
    let pos = positions(code, y)?;
    let pools: Result<Vec<Vec<El>>> = pos.iter().map(|p| choices(p)).collect();
    let pools = pools?;
    if pools.iter().any(|pool| pool.is_empty()) && !pools.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; pools.len()];
    loop {
        out.push(
            pools
                .iter()
                .zip(&idx)
                .map(|(pool, &i)| pool[i].clone())
                .collect(),
        );
        // mixed radix: per-pool sizes
        let mut carried = true;
        for (d, pool) in idx.iter_mut().zip(&pools) {
            *d += 1;
            if *d < pool.len() {
                carried = false;
                break;
            }
            *d = 0;
        }
        if carried {
            break;
        }
    }
    Ok(out)
}

/// Enumerates codes of bounded depth over a fixed leaf catalogue. Used by the
/// law sweeps.
pub fn codes_up_to_depth(leaves: &[FunctorCode], depth: usize) -> Vec<FunctorCode> {
    let mut out: Vec<FunctorCode> = leaves.to_vec();
    let mut prev = out.clone();
    for _ in 0..depth {
        let mut next = Vec::new();
        for f in &prev {
            next.push(FunctorCode::seq(f.clone()));
            next.push(FunctorCode::pow(f.clone()));
            for g in &prev {
                next.push(FunctorCode::sum(f.clone(), g.clone()));
                next.push(FunctorCode::prod(f.clone(), g.clone()));
            }
        }
        out.extend(next.iter().cloned());
        prev = out.clone();
        out.sort();
        out.dedup();
        prev.sort();
        prev.dedup();
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat_code() -> FunctorCode {
        FunctorCode::sum(FunctorCode::Const(FinSet::singleton_unit()), FunctorCode::Id)
    }

    fn b() -> BoundConfig {
        BoundConfig::default()
    }

    #[test]
    fn nat_object_action() {
        let x = FinSet::new([El::atom("a"), El::atom("b")]);
        let fx = apply_object(&nat_code(), &x, &b());
        assert_eq!(
            fx,
            FinSet::new([
                El::inl(El::Unit),
                El::inr(El::atom("a")),
                El::inr(El::atom("b")),
            ])
        );
    }

    #[test]
    fn pow_object_action_enumerates_subsets() {
        let x = FinSet::new([El::atom("a")]);
        let fx = apply_object(&FunctorCode::pow(FunctorCode::Id), &x, &b());
        assert_eq!(
            fx,
            FinSet::new([El::Set(vec![]), El::Set(vec![El::atom("a")])])
        );
    }

    #[test]
    fn prod_object_action_counts_squares() {
        for n in 0..=3usize {
            let x = FinSet::atoms("x", n);
            let fx = apply_object(
                &FunctorCode::prod(FunctorCode::Id, FunctorCode::Id),
                &x,
                &b(),
            );
            assert_eq!(fx.len(), n * n);
        }
    }

    #[test]
    fn fmap_on_sum_injections() {
        let x = FinSet::atoms("x", 2);
        let y = FinSet::atoms("y", 1);
        let f = FinFn::tabulate(x, y, |_| El::atom("y0")).unwrap();
        let out = fmap_el(&nat_code(), &f, &El::inr(El::atom("x1"))).unwrap();
        assert_eq!(out, El::inr(El::atom("y0")));
        let out = fmap_el(&nat_code(), &f, &El::inl(El::Unit)).unwrap();
        assert_eq!(out, El::inl(El::Unit));
    }

    #[test]
    fn fmap_on_pow_takes_images() {
        let x = FinSet::atoms("x", 2);
        let y = FinSet::atoms("c", 1);
        let f = FinFn::tabulate(x, y, |_| El::atom("c0")).unwrap();
        let out = fmap_el(
            &FunctorCode::pow(FunctorCode::Id),
            &f,
            &El::set(vec![El::atom("x0"), El::atom("x1")]),
        )
        .unwrap();
        assert_eq!(out, El::set(vec![El::atom("c0")]));
    }

    #[test]
    fn fmap_identity_law_exhaustive_small() {
        let leaves = [
            FunctorCode::Id,
            FunctorCode::Const(FinSet::empty()),
            FunctorCode::Const(FinSet::singleton_unit()),
        ];
        let codes = codes_up_to_depth(&leaves, 2);
        for n in 0..=2usize {
            let x = FinSet::atoms("x", n);
            let id = FinFn::identity(&x);
            for code in &codes {
                if object_size_bound(code, n, &b()) > 512 {
                    continue;
                }
                for y in apply_object(code, &x, &b()).iter() {
                    assert_eq!(&fmap_el(code, &id, y).unwrap(), y, "code {code}");
                }
            }
        }
    }

    #[test]
    fn fmap_composition_law_exhaustive_small() {
        let leaves = [FunctorCode::Id, FunctorCode::Const(FinSet::singleton_unit())];
        let codes = codes_up_to_depth(&leaves, 2);
        let x = FinSet::atoms("x", 2);
        let y = FinSet::atoms("y", 2);
        let z = FinSet::atoms("z", 2);
        for f in FinFn::all(&x, &y) {
            for g in FinFn::all(&y, &z) {
                let gf = g.compose(&f).unwrap();
                for code in &codes {
                    for v in apply_object(code, &x, &b()).iter() {
                        let two_step =
                            fmap_el(code, &g, &fmap_el(code, &f, v).unwrap()).unwrap();
                        assert_eq!(fmap_el(code, &gf, v).unwrap(), two_step);
                    }
                }
            }
        }
    }

    #[test]
    fn positions_on_nat_layers() {
        assert_eq!(positions(&nat_code(), &El::inl(El::Unit)).unwrap(), vec![]);
        assert_eq!(
            positions(&nat_code(), &El::inr(El::atom("n"))).unwrap(),
            vec![El::atom("n")]
        );
    }

    #[test]
    fn positions_on_seq_and_set() {
        let seq = FunctorCode::seq(FunctorCode::Id);
        let y = El::Seq(vec![El::atom("r0"), El::atom("r1")]);
        assert_eq!(
            positions(&seq, &y).unwrap(),
            vec![El::atom("r0"), El::atom("r1")]
        );
        let pow = FunctorCode::pow(FunctorCode::Id);
        let y = El::set(vec![El::atom("a"), El::atom("b")]);
        assert_eq!(
            positions(&pow, &y).unwrap(),
            vec![El::atom("a"), El::atom("b")]
        );
    }

    #[test]
    fn positions_commute_with_fmap_without_pow() {
        let leaves = [FunctorCode::Id, FunctorCode::Const(FinSet::singleton_unit())];
        let codes: Vec<_> = codes_up_to_depth(&leaves, 2)
            .into_iter()
            .filter(|c| no_pow(c))
            .collect();
        let x = FinSet::atoms("x", 2);
        let y = FinSet::atoms("y", 2);
        for f in FinFn::all(&x, &y) {
            for code in &codes {
                for v in apply_object(code, &x, &b()).iter() {
                    let lhs = positions(code, &fmap_el(code, &f, v).unwrap()).unwrap();
                    let rhs: Vec<El> = positions(code, v)
                        .unwrap()
                        .iter()
                        .map(|p| f.apply(p).unwrap().clone())
                        .collect();
                    assert_eq!(lhs, rhs, "code {code}");
                }
            }
        }
    }

    fn no_pow(code: &FunctorCode) -> bool {
        match code {
            FunctorCode::Const(_) | FunctorCode::Id => true,
            FunctorCode::Sum(f, g) | FunctorCode::Prod(f, g) => no_pow(f) && no_pow(g),
            FunctorCode::Seq(f) => no_pow(f),
            FunctorCode::Pow(_) => false,
        }
    }

    #[test]
    fn decorate_single_position() {
        let d = decorate(&FunctorCode::Id, &El::atom("x"), &[El::atom("p")]).unwrap();
        assert_eq!(d, El::dpair(El::atom("x"), El::atom("p")));
    }

    #[test]
    fn decorate_sequences_in_order() {
        let seq = FunctorCode::seq(FunctorCode::Id);
        let y = El::Seq(vec![El::atom("r0"), El::atom("r1")]);
        let d = decorate(&seq, &y, &[El::atom("p0"), El::atom("p1")]).unwrap();
        assert_eq!(
            d,
            El::Seq(vec![
                El::dpair(El::atom("r0"), El::atom("p0")),
                El::dpair(El::atom("r1"), El::atom("p1")),
            ])
        );
    }

    #[test]
    fn decorate_arity_mismatch_is_an_error() {
        let seq = FunctorCode::seq(FunctorCode::Id);
        let y = El::Seq(vec![El::atom("r0")]);
        assert!(matches!(
            decorate(&seq, &y, &[]).unwrap_err(),
            Error::DecorationArity { .. }
        ));
    }

    #[test]
    fn erasing_a_decoration_recovers_the_layer() {
        // decorate is a section of proof erasure, exhaustively at small size.
        let leaves = [FunctorCode::Id, FunctorCode::Const(FinSet::singleton_unit())];
        let codes = codes_up_to_depth(&leaves, 2);
        let x = FinSet::atoms("x", 2);
        let proofs = [El::atom("p"), El::atom("q")];
        for code in &codes {
            if object_size_bound(code, 2, &b()) > 256 {
                continue;
            }
            for y in apply_object(code, &x, &b()).iter() {
                let tuples = proof_tuples(code, y, &mut |_| Ok(proofs.to_vec())).unwrap();
                for ps in tuples {
                    let d = decorate(code, y, &ps).unwrap();
                    let erased = map_positions(code, &d, &mut |v| match v {
                        El::DPair(x, _) => Ok((**x).clone()),
                        other => Ok(other.clone()),
                    })
                    .unwrap();
                    assert_eq!(&erased, y);
                }
            }
        }
    }

    #[test]
    fn seq_enumeration_respects_bound() {
        let x = FinSet::atoms("x", 2);
        let fx = apply_object(&FunctorCode::seq(FunctorCode::Id), &x, &b());
        // 1 + 2 + 4 + 8 sequences of length <= 3
        assert_eq!(fx.len(), 15);
        assert_eq!(
            object_size_bound(&FunctorCode::seq(FunctorCode::Id), 2, &b()),
            15
        );
    }
}
