//! Terms of fixed points, the fold, the translation between plain algebras
//! and proof-carrying algebras, and the executable generic induction rule.
//!
//! Induction is reduced to iteration: a step algebra (the premises of an
//! induction rule) is turned into a plain algebra on dependent pairs whose
//! fold simultaneously rebuilds the input term and assembles its proof. The
//! engine asserts that the rebuilt term equals the input — that equality is
//! the soundness theorem, and it is checked at runtime on every run, with an
//! independent structural-recursion oracle alongside.

use std::collections::BTreeSet;
use std::rc::Rc;

use rand::Rng;

use crate::el::El;
use crate::error::{Error, Result};
use crate::fibration::{dagger, sharp, Fibration, PredMorphism};
use crate::functor::{
    apply_object, decorate, map_positions, positions, BoundConfig, FunctorCode,
};
use crate::lifting::{generic_lift, generic_lift_arrow, truth_pres_iso};
use crate::sets::{FinFn, FinSet};

/// A finite element of a fixed point: one constructor layer in which every
/// `Id` position holds a `Mu`-wrapped child term. Power-set layers are kept
/// in canonical form, which realizes the extensional quotient.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Term {
    layer: El,
}

impl Term {
    /// The outermost constructor layer.
    pub fn layer(&self) -> &El {
        &self.layer
    }

    /// The term as an element (`Mu`-wrapped layer), the canonical rendering
    /// used by the CLI and serialization.
    pub fn el(&self) -> El {
        El::mu(self.layer.clone())
    }

    pub fn render(&self) -> String {
        self.el().render()
    }
}

impl std::fmt::Display for Term {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.el())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum CanonMode {
    Canonical,
    /// Sorts set layers but keeps duplicates. Only the law suite's mutation
    /// harness uses this, to demonstrate that skipping the quotient breaks
    /// soundness.
    SkipPowDedup,
}

/// The structure map: wraps a well-shaped layer into a term, canonicalizing
/// power-set layers (duplicates collapse).
pub fn in_term(code: &FunctorCode, layer: El) -> Result<Term> {
    in_term_with(code, layer, CanonMode::Canonical)
}

pub(crate) fn in_term_with(code: &FunctorCode, layer: El, mode: CanonMode) -> Result<Term> {
    let layer = canon_layer(code, code, &layer, mode)?;
    Ok(Term { layer })
}

/// Parses a rendered term (`in(...)` form) and validates it against a code.
pub fn term_from_el(code: &FunctorCode, el: &El) -> Result<Term> {
    match el {
        El::Mu(layer) => in_term(code, (**layer).clone()),
        other => Err(Error::Shape {
            code: format!("Mu({code})"),
            value: other.to_string(),
        }),
    }
}

/// The inverse of [`in_term`]: exposes the outermost layer.
pub fn out_term(t: &Term) -> El {
    t.layer.clone()
}

fn canon_layer(root: &FunctorCode, code: &FunctorCode, el: &El, mode: CanonMode) -> Result<El> {
    match (code, el) {
        (FunctorCode::Const(s), v) => {
            if s.contains(v) {
                Ok(v.clone())
            } else {
                Err(Error::Shape {
                    code: code.to_string(),
                    value: v.to_string(),
                })
            }
        }
        (FunctorCode::Id, El::Mu(inner)) => {
            Ok(El::mu(canon_layer(root, root, inner, mode)?))
        }
        (FunctorCode::Sum(f, _), El::Inl(v)) => Ok(El::inl(canon_layer(root, f, v, mode)?)),
        (FunctorCode::Sum(_, g), El::Inr(v)) => Ok(El::inr(canon_layer(root, g, v, mode)?)),
        (FunctorCode::Prod(f, g), El::Pair(a, b)) => Ok(El::pair(
            canon_layer(root, f, a, mode)?,
            canon_layer(root, g, b, mode)?,
        )),
        (FunctorCode::Seq(f), El::Seq(items)) => {
            let mapped: Result<Vec<El>> = items
                .iter()
                .map(|v| canon_layer(root, f, v, mode))
                .collect();
            Ok(El::Seq(mapped?))
        }
        (FunctorCode::Pow(f), El::Set(items)) => {
            let mapped: Result<Vec<El>> = items
                .iter()
                .map(|v| canon_layer(root, f, v, mode))
                .collect();
            let mut members = mapped?;
            members.sort();
            if mode == CanonMode::Canonical {
                members.dedup();
            }
            Ok(El::Set(members))
        }
        (c, v) => Err(Error::Shape {
            code: c.to_string(),
            value: v.to_string(),
        }),
    }
}

/// A plain algebra with a rule for collapsing one constructor layer whose
/// children have already been replaced by result values.
#[derive(Clone)]
pub struct TermAlgebra {
    pub code: FunctorCode,
    pub carrier_name: String,
    apply: Rc<dyn Fn(&El) -> El>,
}

impl TermAlgebra {
    pub fn new(
        code: FunctorCode,
        carrier_name: impl Into<String>,
        apply: impl Fn(&El) -> El + 'static,
    ) -> TermAlgebra {
        TermAlgebra {
            code,
            carrier_name: carrier_name.into(),
            apply: Rc::new(apply),
        }
    }

    /// The initial algebra itself, seen as an algebra: wraps the layer.
    pub fn structure_map(code: FunctorCode) -> TermAlgebra {
        TermAlgebra::new(code, "terms", |layer| El::mu(layer.clone()))
    }

    pub fn apply(&self, layer: &El) -> El {
        (self.apply)(layer)
    }
}

impl std::fmt::Debug for TermAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TermAlgebra")
            .field("code", &self.code)
            .field("carrier_name", &self.carrier_name)
            .finish_non_exhaustive()
    }
}

/// The premises of an induction rule: a rule mapping a constructor layer
/// whose `Id` positions hold `DPair(childTerm, childProof)` to a proof for
/// the wrapped layer. Power-set layers carry one proof per distinct child.
#[derive(Clone)]
pub struct StepAlgebra {
    pub code: FunctorCode,
    step: Rc<dyn Fn(&El) -> El>,
}

impl StepAlgebra {
    pub fn new(code: FunctorCode, step: impl Fn(&El) -> El + 'static) -> StepAlgebra {
        StepAlgebra {
            code,
            step: Rc::new(step),
        }
    }

    /// The truth step: proves every layer with the unit proof.
    pub fn truth(code: FunctorCode) -> StepAlgebra {
        StepAlgebra::new(code, |_| El::Unit)
    }

    pub fn step(&self, decorated_layer: &El) -> El {
        (self.step)(decorated_layer)
    }
}

impl std::fmt::Debug for StepAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("StepAlgebra")
            .field("code", &self.code)
            .finish_non_exhaustive()
    }
}

/// The outcome of running an induction rule: the subject term (equal to the
/// input — the engine checks) and its proof.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InductionResult {
    pub subject: Term,
    pub proof: El,
}

/// Structural recursion: `fold h (in t) = h (F (fold h) t)`. Terminates
/// because terms are finite.
pub fn fold_term(alg: &TermAlgebra, t: &Term) -> Result<El> {
    fold_layer(alg, &t.layer)
}

fn fold_layer(alg: &TermAlgebra, layer: &El) -> Result<El> {
    let mapped = map_positions(&alg.code, layer, &mut |child| match child {
        El::Mu(inner) => fold_layer(alg, inner),
        other => Err(Error::Shape {
            code: "Mu".to_string(),
            value: other.to_string(),
        }),
    })?;
    Ok(alg.apply(&mapped))
}

/// Turns a plain algebra `k : F X → X` into a proof-carrying algebra on the
/// truth predicate, using that the lifting preserves truth. Finite carriers
/// only.
pub fn phi(fib: Fibration, code: &FunctorCode, k: &FinFn, b: &BoundConfig) -> Result<PredMorphism> {
    let x = k.cod().clone();
    let expected = apply_object(code, &x, b);
    if k.dom() != &expected {
        return Err(Error::DomainMismatch {
            expected: expected.to_string(),
            got: k.dom().to_string(),
        });
    }
    let src = generic_lift(code, &fib.truth(&x), b)?;
    let dst = fib.truth(&x);
    let proofs = match fib {
        Fibration::Families => src
            .carrier()
            .iter()
            .flat_map(|z| {
                src.fiber(z)
                    .expect("carrier element")
                    .iter()
                    .map(move |pr| ((z.clone(), pr.clone()), El::Unit))
                    .collect::<Vec<_>>()
            })
            .collect(),
        Fibration::Subobject => Default::default(),
    };
    PredMorphism::new(src, dst, k.clone(), proofs)
}

/// Turns a step algebra into a plain algebra on dependent pairs: collapse a
/// layer of `DPair(term, proof)` children to the pair of the rebuilt term
/// and the stepped proof. Folding this algebra is the induction rule.
pub fn psi(step: &StepAlgebra, carrier_desc: &str) -> TermAlgebra {
    let code = step.code.clone();
    let step = step.clone();
    TermAlgebra::new(code.clone(), carrier_desc, move |layer| {
        let terms_layer = map_positions(&code, layer, &mut |child| match child {
            El::DPair(t, _) => Ok((**t).clone()),
            other => Err(Error::Shape {
                code: "DPair".to_string(),
                value: other.to_string(),
            }),
        })
        .expect("layer children are decorated pairs");
        let term = in_term(&code, terms_layer).expect("projected layer is well-shaped");
        El::dpair(term.el(), step.step(layer))
    })
}

/// The finite-carrier form of the same translation: sends a proof-carrying
/// algebra `j` on a predicate `P` to the plain algebra
/// `(j ∘ lifted counit ∘ iso)# : F{P} → {P}`.
pub fn psi_fn(code: &FunctorCode, j: &PredMorphism, b: &BoundConfig) -> Result<FinFn> {
    let p = j.dst();
    let fib = p.fibration();
    let compr = p.comprehend();
    let counit = dagger(&FinFn::identity(&compr), p)?;
    let lifted_counit = generic_lift_arrow(code, &counit, b)?;
    let iso = truth_pres_iso(fib, code, &compr, b)?;
    let m = j.compose(&lifted_counit)?.compose(&iso.backward)?;
    sharp(&m)
}

/// The generic induction rule: fold the translated algebra, split the
/// resulting pair, and check that the carrier component is the input term.
/// The check is the soundness theorem; reaching the error is a bug.
pub fn genind(code: &FunctorCode, step: &StepAlgebra, t: &Term) -> Result<InductionResult> {
    if &step.code != code {
        return Err(Error::WrongCode {
            expected: code.to_string(),
        });
    }
    let alg = psi(step, "dependent pairs");
    let folded = fold_term(&alg, t)?;
    match folded {
        El::DPair(subject, proof) => {
            if *subject == t.el() {
                Ok(InductionResult {
                    subject: t.clone(),
                    proof: *proof,
                })
            } else {
                Err(Error::SoundnessViolation {
                    input: t.el().to_string(),
                    computed: subject.to_string(),
                })
            }
        }
        other => Err(Error::Shape {
            code: "DPair".to_string(),
            value: other.to_string(),
        }),
    }
}

/// Independent oracle: direct structural recursion that decorates each layer
/// with its children's proofs and applies the step, with no detour through
/// the pair algebra.
pub fn ind_direct(code: &FunctorCode, step: &StepAlgebra, t: &Term) -> Result<InductionResult> {
    if &step.code != code {
        return Err(Error::WrongCode {
            expected: code.to_string(),
        });
    }
    let proof = ind_direct_layer(code, step, &t.layer)?;
    Ok(InductionResult {
        subject: t.clone(),
        proof,
    })
}

fn ind_direct_layer(code: &FunctorCode, step: &StepAlgebra, layer: &El) -> Result<El> {
    let children = positions(code, layer)?;
    let proofs: Result<Vec<El>> = children
        .iter()
        .map(|child| match child {
            El::Mu(inner) => ind_direct_layer(code, step, inner),
            other => Err(Error::Shape {
                code: "Mu".to_string(),
                value: other.to_string(),
            }),
        })
        .collect();
    let decorated = decorate(code, layer, &proofs?)?;
    Ok(step.step(&decorated))
}

/// Canonical form of a raw hereditary-set tree (`Mu(Set(...))` all the way
/// down): sorts and deduplicates every set layer. Idempotent; respects
/// extensional equality.
pub fn canonicalize_hs(el: &El) -> Result<El> {
    match el {
        El::Mu(layer) => match &**layer {
            El::Set(items) => {
                let members: Result<Vec<El>> = items.iter().map(canonicalize_hs).collect();
                let mut members = members?;
                members.sort();
                members.dedup();
                Ok(El::mu(El::Set(members)))
            }
            other => Err(Error::Shape {
                code: FunctorCode::pow(FunctorCode::Id).to_string(),
                value: other.to_string(),
            }),
        },
        other => Err(Error::Shape {
            code: "Mu(Pow(Id))".to_string(),
            value: other.to_string(),
        }),
    }
}

/// Term-level wrapper for [`canonicalize_hs`].
pub fn canonicalize_hs_term(t: &Term) -> Result<Term> {
    let canon = canonicalize_hs(&t.el())?;
    term_from_el(&hs_code(), &canon)
}

/// All canonical terms of depth at most `depth`, where leaves (layers with no
/// children) have depth 0. Sequence layers are truncated by the bound.
pub fn enumerate_terms(code: &FunctorCode, depth: usize, b: &BoundConfig) -> Vec<Term> {
    let mut all: BTreeSet<El> = BTreeSet::new();
    let mut frontier = FinSet::empty();
    for _ in 0..=depth {
        let layers = apply_object(code, &frontier, b);
        for layer in layers.iter() {
            all.insert(El::mu(layer.clone()));
        }
        frontier = FinSet::new(all.iter().cloned());
    }
    all.into_iter()
        .map(|el| match el {
            El::Mu(layer) => Term { layer: *layer },
            _ => unreachable!(),
        })
        .collect()
}

/// All raw set trees of the given rank with at most `max_members` members per
/// layer, as sorted multisets (duplicates allowed). These are pre-quotient
/// syntax, inputs to [`canonicalize_hs`] and the quotient tests.
pub fn raw_set_trees(rank: usize, max_members: usize) -> Vec<El> {
    let mut levels: Vec<El> = vec![El::mu(El::Set(Vec::new()))];
    for _ in 0..rank {
        let mut next: BTreeSet<El> = BTreeSet::new();
        next.insert(El::mu(El::Set(Vec::new())));
        // multisets of size 1..=max_members over the previous level
        let pool = levels.clone();
        let mut stack: Vec<Vec<usize>> = (0..pool.len()).map(|i| vec![i]).collect();
        while let Some(ms) = stack.pop() {
            let members: Vec<El> = ms.iter().map(|&i| pool[i].clone()).collect();
            next.insert(El::mu(El::Set(members)));
            if ms.len() < max_members {
                let last = *ms.last().expect("nonempty");
                for i in last..pool.len() {
                    let mut bigger = ms.clone();
                    bigger.push(i);
                    stack.push(bigger);
                }
            }
        }
        levels = next.into_iter().collect();
    }
    levels
}

/// A random rose tree of depth at most `depth` with at most `max_width`
/// children per node.
pub fn random_rose_term(rng: &mut impl Rng, depth: usize, max_width: usize) -> Term {
    Term {
        layer: random_rose_layer(rng, depth, max_width),
    }
}

fn random_rose_layer(rng: &mut impl Rng, depth: usize, max_width: usize) -> El {
    if depth == 0 {
        return El::Seq(Vec::new());
    }
    let width = rng.gen_range(0..=max_width);
    El::Seq(
        (0..width)
            .map(|_| El::mu(random_rose_layer(rng, depth - 1, max_width)))
            .collect(),
    )
}

// ---------------------------------------------------------------------------
// Built-in datatypes and the demo registry
// ---------------------------------------------------------------------------

/// Naturals: `1 + X`.
pub fn nat_code() -> FunctorCode {
    FunctorCode::sum(FunctorCode::Const(FinSet::singleton_unit()), FunctorCode::Id)
}

/// Rose trees: finite sequences.
pub fn rose_code() -> FunctorCode {
    FunctorCode::seq(FunctorCode::Id)
}

/// Hereditarily finite sets: finite powerset.
pub fn hs_code() -> FunctorCode {
    FunctorCode::pow(FunctorCode::Id)
}

pub fn nat_zero() -> Term {
    Term {
        layer: El::inl(El::Unit),
    }
}

pub fn nat_succ(t: &Term) -> Term {
    Term {
        layer: El::inr(t.el()),
    }
}

pub fn nat_term(n: usize) -> Term {
    let mut t = nat_zero();
    for _ in 0..n {
        t = nat_succ(&t);
    }
    t
}

pub fn rose_node(children: &[Term]) -> Term {
    Term {
        layer: El::Seq(children.iter().map(Term::el).collect()),
    }
}

pub fn hs_set(members: &[Term]) -> Term {
    in_term(&hs_code(), El::set(members.iter().map(Term::el).collect()))
        .expect("members are terms")
}

fn atom_number(el: &El) -> u64 {
    match el {
        El::Atom(s) => s.parse().expect("numeric proof atom"),
        other => panic!("expected a numeric proof atom, found {other}"),
    }
}

fn number_atom(n: u64) -> El {
    El::atom(n.to_string())
}

/// The proof-building step for naturals: an anchor proof at zero, one
/// successor wrapper per layer.
pub fn nat_succ_chain_step() -> StepAlgebra {
    StepAlgebra::new(nat_code(), |layer| match layer {
        El::Inl(_) => El::atom("z"),
        El::Inr(dp) => match &**dp {
            El::DPair(_, p) => El::pair(El::atom("s"), (**p).clone()),
            other => panic!("expected a decorated child, found {other}"),
        },
        other => panic!("ill-shaped layer {other}"),
    })
}

/// Node count for rose trees: one plus the sum of the children's counts.
pub fn rose_size_step() -> StepAlgebra {
    StepAlgebra::new(rose_code(), |layer| match layer {
        El::Seq(items) => {
            let total: u64 = items
                .iter()
                .map(|dp| match dp {
                    El::DPair(_, p) => atom_number(p),
                    other => panic!("expected a decorated child, found {other}"),
                })
                .sum();
            number_atom(1 + total)
        }
        other => panic!("ill-shaped layer {other}"),
    })
}

/// Rank for hereditary sets: zero for the empty set, else one plus the
/// maximum child rank.
pub fn hs_rank_step() -> StepAlgebra {
    StepAlgebra::new(hs_code(), |layer| match layer {
        El::Set(items) => {
            let max = items
                .iter()
                .map(|dp| match dp {
                    El::DPair(_, p) => atom_number(p),
                    other => panic!("expected a decorated child, found {other}"),
                })
                .max();
            match max {
                None => number_atom(0),
                Some(m) => number_atom(1 + m),
            }
        }
        other => panic!("ill-shaped layer {other}"),
    })
}

/// A registered induction demo: a datatype, a step algebra, and a default
/// subject term.
pub struct Demo {
    pub name: &'static str,
    pub datatype: &'static str,
    pub code: FunctorCode,
    pub step: StepAlgebra,
    pub default_term: Term,
    pub description: &'static str,
}

/// The named step algebras exposed to the CLI.
pub fn demo_registry() -> Vec<Demo> {
    vec![
        Demo {
            name: "nat-succ-chain",
            datatype: "Nat",
            code: nat_code(),
            step: nat_succ_chain_step(),
            default_term: nat_term(2),
            description: "builds the proof chain s(s(...z)) alongside the numeral",
        },
        Demo {
            name: "rose-size",
            datatype: "Rose",
            code: rose_code(),
            step: rose_size_step(),
            default_term: rose_node(&[rose_node(&[]), rose_node(&[rose_node(&[])])]),
            description: "proves a node count for each rose tree",
        },
        Demo {
            name: "hs-rank",
            datatype: "HS",
            code: hs_code(),
            step: hs_rank_step(),
            default_term: hs_set(&[hs_set(&[]), hs_set(&[hs_set(&[])])]),
            description: "proves a rank for each hereditarily finite set",
        },
        Demo {
            name: "truth",
            datatype: "Nat",
            code: nat_code(),
            step: StepAlgebra::truth(nat_code()),
            default_term: nat_term(1),
            description: "the truth predicate: every proof is the unit value",
        },
    ]
}

pub fn find_demo(name: &str) -> Option<Demo> {
    demo_registry().into_iter().find(|d| d.name == name)
}
