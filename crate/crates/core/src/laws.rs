//! Exhaustive verification of the algebraic laws behind the engine, over
//! enumerated small instances of both fibrations.
//!
//! Law sheet (one report line per law):
//!
//! | law                              | statement |
//! |----------------------------------|-----------|
//! | truth-comprehension-inverse      | dagger and sharp are mutually inverse |
//! | truth-comprehension-naturality   | `(g ∘ f)† = g† ∘ K1 f` |
//! | sigma-reindex-adjunction         | `Σ_f ⊣ f*` via an explicit hom-set bijection |
//! | lifting-truth-preservation       | `F̂(truth X) ≅ truth(F X)` with an explicit witness |
//! | phi-truth-carrier                | `Φ k` is an algebra on the truth predicate |
//! | psi-comprehension-carrier        | `Ψ j` is an algebra on the comprehension |
//! | phi-psi-transpose-iff            | `f` is an algebra morphism to `Ψ j` iff `f†` is one from `Φ k` |
//! | phi-preserves-algebra-morphisms  | `Φ` sends algebra morphisms to lifted algebra morphisms |
//! | lift-constant                    | lifting a constant functor gives truth |
//! | lift-identity                    | lifting the identity gives the predicate back |
//! | lift-coproduct                   | lifting a sum is the tagged sum of liftings |
//! | hj-generic-coincidence           | clause-by-clause lifting agrees with the generic one |
//! | pointwise-inhabitation           | pointwise and exact fibers are inhabited together |
//! | genind-subject-identity          | the fold of the pair algebra rebuilds its input |
//! | genind-matches-direct-oracle     | the categorical route equals direct recursion |
//! | truth-step-unit-proofs           | the truth step proves everything with the unit |
//!
//! Sweeps are exhaustive within the configured bounds, pruned only by the
//! carrier-size caps, and deterministic: reports depend on nothing but the
//! configuration. Each check also has a documented mutation — a deliberately
//! broken construction — that must produce at least one counterexample,
//! demonstrating the suite can detect the bugs it claims to detect.

use std::collections::BTreeMap;

use rand::SeedableRng;
use serde::Serialize;

use crate::el::El;
use crate::error::Result;
use crate::fibration::{
    dagger, fibre_homs, fibre_iso, truth_arrow, Fibration, PredMorphism, Predicate,
};
use crate::functor::{
    apply_object, codes_up_to_depth, object_size_bound, BoundConfig, FunctorCode,
};
use crate::induction::{
    self, enumerate_terms, genind, hs_code, ind_direct, nat_code, phi, psi_fn, random_rose_term,
    raw_set_trees, rose_code, CanonMode, StepAlgebra, Term,
};
use crate::lifting::{
    arrow_lift, coproduct_predicate, generic_lift, generic_lift_arrow, hj_lift, lift_pointwise,
    truth_pres_iso, ArrowObj,
};
use crate::sets::{bump_odometer, FinFn, FinSet};

/// Bounds for the law sweeps. All sweeps are exhaustive within these bounds;
/// the carrier caps prune only instances that would not be desk-scale, and
/// the cell cap limits how many algebras are enumerated per sweep cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LawConfig {
    pub max_base_size: usize,
    pub max_fiber_size: usize,
    pub max_code_depth: usize,
    pub seq_len_bound: usize,
    pub fibration: Fibration,
    pub max_carrier: usize,
    pub max_pred_carrier: usize,
    pub cell_cap: usize,
}

impl LawConfig {
    pub fn defaults(fibration: Fibration) -> LawConfig {
        LawConfig {
            max_base_size: 3,
            max_fiber_size: 2,
            max_code_depth: 2,
            seq_len_bound: 3,
            fibration,
            max_carrier: 4096,
            max_pred_carrier: 1024,
            cell_cap: 16,
        }
    }

    fn bound(&self) -> BoundConfig {
        BoundConfig {
            seq_len_bound: self.seq_len_bound,
        }
    }
}

/// Outcome of one law: how many instances were checked and which failed.
#[derive(Debug, Clone, Serialize)]
pub struct LawResult {
    pub name: String,
    pub instances: u64,
    pub failures: Vec<String>,
}

/// A machine-readable report: failures empty iff every law held on the swept
/// space.
#[derive(Debug, Clone, Serialize)]
pub struct LawReport {
    pub fibration: Fibration,
    pub laws: Vec<LawResult>,
}

impl LawReport {
    pub fn total_failures(&self) -> usize {
        self.laws.iter().map(|l| l.failures.len()).sum()
    }

    pub fn law(&self, name: &str) -> Option<&LawResult> {
        self.laws.iter().find(|l| l.name == name)
    }

    pub fn merge(mut self, other: LawReport) -> LawReport {
        self.laws.extend(other.laws);
        self
    }

    /// One line per law, plus the first few counterexamples for failures.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for law in &self.laws {
            out.push_str(&format!(
                "[{}] {}: {} instances, {} failures\n",
                self.fibration,
                law.name,
                law.instances,
                law.failures.len()
            ));
            for failure in law.failures.iter().take(5) {
                out.push_str(&format!("    counterexample: {failure}\n"));
            }
            if law.failures.len() > 5 {
                out.push_str(&format!("    ... and {} more\n", law.failures.len() - 5));
            }
        }
        out
    }
}

/// The documented deliberate breakages. Each targets one check and must make
/// it report at least one counterexample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// Opreindexing drops one tagged proof (or one image member).
    BrokenOpreindex,
    /// The pair algebra built from a step swaps its pair components.
    SwappedPsiPair,
    /// Term construction keeps duplicate set children.
    SkippedHsDedup,
}

struct Recorder {
    name: &'static str,
    instances: u64,
    failures: Vec<String>,
}

impl Recorder {
    fn new(name: &'static str) -> Recorder {
        Recorder {
            name,
            instances: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok && self.failures.len() < 64 {
            self.failures.push(witness());
        }
    }

    fn finish(self) -> LawResult {
        LawResult {
            name: self.name.to_string(),
            instances: self.instances,
            failures: self.failures,
        }
    }
}

fn base_sets(cfg: &LawConfig) -> Vec<FinSet> {
    (0..=cfg.max_base_size).map(|n| FinSet::atoms("x", n)).collect()
}

fn proof_pool(max: usize) -> Vec<FinSet> {
    let atoms = [El::atom("p"), El::atom("q"), El::atom("r")];
    (0..=max.min(atoms.len()))
        .map(|k| FinSet::new(atoms[..k].iter().cloned()))
        .collect()
}

/// All predicates on `x` in the configured instance, fibers bounded by the
/// configured size (families) or arbitrary subsets (subobject).
fn predicates_on(cfg: &LawConfig, x: &FinSet) -> Vec<Predicate> {
    match cfg.fibration {
        Fibration::Families => {
            let pool = proof_pool(cfg.max_fiber_size);
            let mut out = Vec::new();
            let mut idx = vec![0usize; x.len()];
            loop {
                let fibers: BTreeMap<El, FinSet> = x
                    .iter()
                    .zip(&idx)
                    .map(|(el, &i)| (el.clone(), pool[i].clone()))
                    .collect();
                out.push(Predicate::families(x.clone(), fibers).expect("total fibers"));
                if idx.is_empty() || !bump_odometer(&mut idx, pool.len()) {
                    break;
                }
            }
            out
        }
        Fibration::Subobject => x
            .subsets()
            .into_iter()
            .map(|members| Predicate::subobject(x.clone(), members).expect("subset"))
            .collect(),
    }
}

fn leaf_codes() -> Vec<FunctorCode> {
    vec![
        FunctorCode::Id,
        FunctorCode::Const(FinSet::empty()),
        FunctorCode::Const(FinSet::new([El::atom("c0")])),
    ]
}

fn sweep_codes(cfg: &LawConfig) -> Vec<FunctorCode> {
    codes_up_to_depth(&leaf_codes(), cfg.max_code_depth)
}

fn capped<T>(items: Vec<T>, cap: usize) -> Vec<T> {
    let mut items = items;
    items.truncate(cap);
    items
}

/// All predicate morphisms `src → dst` with the given base, at most `cap` of
/// them, in a stable order.
fn homs_over_capped(
    base: &FinFn,
    src: &Predicate,
    dst: &Predicate,
    cap: usize,
) -> Vec<PredMorphism> {
    match src.fibration() {
        Fibration::Subobject => {
            PredMorphism::new(src.clone(), dst.clone(), base.clone(), BTreeMap::new())
                .into_iter()
                .collect()
        }
        Fibration::Families => {
            let keys: Vec<(El, El)> = src
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
            let pools: Vec<Vec<El>> = keys
                .iter()
                .map(|(x, _)| {
                    let y = base.apply(x).expect("total");
                    dst.fiber(y).expect("carrier element").elements().to_vec()
                })
                .collect();
            if pools.iter().any(|p| p.is_empty()) && !keys.is_empty() {
                return Vec::new();
            }
            let mut out = Vec::new();
            let mut idx = vec![0usize; keys.len()];
            loop {
                let proofs: BTreeMap<(El, El), El> = keys
                    .iter()
                    .enumerate()
                    .map(|(k, (x, p))| ((x.clone(), p.clone()), pools[k][idx[k]].clone()))
                    .collect();
                out.push(
                    PredMorphism::new(src.clone(), dst.clone(), base.clone(), proofs)
                        .expect("images chosen from target fibers"),
                );
                if out.len() >= cap {
                    break;
                }
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

fn drop_one_proof(p: &Predicate) -> Predicate {
    match p.fibration() {
        Fibration::Families => {
            let fibers: BTreeMap<El, FinSet> = p
                .carrier()
                .iter()
                .map(|x| (x.clone(), p.fiber(x).expect("carrier element")))
                .collect();
            let mut dropped = false;
            let fibers = fibers
                .into_iter()
                .map(|(x, fiber)| {
                    if !dropped && !fiber.is_empty() {
                        dropped = true;
                        let rest = FinSet::new(fiber.iter().skip(1).cloned());
                        (x, rest)
                    } else {
                        (x, fiber)
                    }
                })
                .collect();
            Predicate::families(p.carrier().clone(), fibers).expect("same carrier")
        }
        Fibration::Subobject => {
            let members = p.members().expect("subobject");
            let rest = FinSet::new(members.iter().skip(1).cloned());
            Predicate::subobject(p.carrier().clone(), rest).expect("still a subset")
        }
    }
}

// ---------------------------------------------------------------------------
// Adjunction checks: truth ⊣ comprehension and Σ_f ⊣ f*
// ---------------------------------------------------------------------------

pub fn check_adjunctions(cfg: &LawConfig) -> LawReport {
    check_adjunctions_inner(cfg, None)
}

fn check_adjunctions_inner(cfg: &LawConfig, mutation: Option<Mutation>) -> LawReport {
    let mut inverse = Recorder::new("truth-comprehension-inverse");
    let mut naturality = Recorder::new("truth-comprehension-naturality");
    let mut sigma = Recorder::new("sigma-reindex-adjunction");
    let bases = base_sets(cfg);

    // dagger/sharp round trips over every h : Y → {P}
    for x in &bases {
        for p in predicates_on(cfg, x) {
            let compr = p.comprehend();
            for y in &bases {
                for h in FinFn::all(y, &compr) {
                    let round = dagger(&h, &p).and_then(|m| {
                        let back = crate::fibration::sharp(&m)?;
                        let again = dagger(&back, &p)?;
                        Ok((back, m, again))
                    });
                    let ok = matches!(&round, Ok((back, m, again)) if back == &h && again == m);
                    inverse.check(ok, || format!("h : {} → comprehension of {p:?}", y));
                }
            }
        }
    }

    // (g ∘ f)† = g† ∘ K1 f at sizes ≤ 2
    let small: Vec<&FinSet> = bases.iter().filter(|s| s.len() <= 2).collect();
    for x in &small {
        for p in predicates_on(cfg, x) {
            let compr = p.comprehend();
            for y in &small {
                for y2 in &small {
                    for g in FinFn::all(y, &compr) {
                        for f in FinFn::all(y2, y) {
                            let lhs = g
                                .compose(&f)
                                .ok()
                                .and_then(|gf| dagger(&gf, &p).ok());
                            let rhs = dagger(&g, &p)
                                .ok()
                                .and_then(|d| d.compose(&truth_arrow(cfg.fibration, &f)).ok());
                            naturality.check(lhs.is_some() && lhs == rhs, || {
                                format!("f : {y2} → {y}, g : {y} → comprehension of {p:?}")
                            });
                        }
                    }
                }
            }
        }
    }

    // Σ_f ⊣ f*: hom-set bijection, natural in both directions
    for x in &bases {
        for y in &bases {
            for f in FinFn::all(x, y) {
                for p in predicates_on(cfg, x) {
                    let sigma_p = p.opreindex(&f).expect("dom matches");
                    let sigma_p = if mutation == Some(Mutation::BrokenOpreindex) {
                        drop_one_proof(&sigma_p)
                    } else {
                        sigma_p
                    };
                    for q in predicates_on(cfg, y) {
                        let pulled = q.reindex(&f).expect("cod matches");
                        let left = fibre_homs(&sigma_p, &q);
                        let right = fibre_homs(&p, &pulled);
                        let ok = sigma_adjunction_bijection(
                            &f, &p, &q, &sigma_p, &pulled, &left, &right,
                        );
                        sigma.check(ok, || {
                            format!("f : {x} → {y}, P = {p:?}, Q = {q:?}")
                        });
                    }
                }
            }
        }
    }

    LawReport {
        fibration: cfg.fibration,
        laws: vec![inverse.finish(), naturality.finish(), sigma.finish()],
    }
}

/// Exhibits the transpose maps of `Σ_f ⊣ f*` and checks they are mutually
/// inverse bijections between the two hom-sets.
#[allow(clippy::too_many_arguments)]
fn sigma_adjunction_bijection(
    f: &FinFn,
    p: &Predicate,
    q: &Predicate,
    sigma_p: &Predicate,
    pulled: &Predicate,
    left: &[PredMorphism],
    right: &[PredMorphism],
) -> bool {
    if left.len() != right.len() {
        return false;
    }
    match p.fibration() {
        Fibration::Subobject => true, // hom-sets have at most one element
        Fibration::Families => {
            let id_x = FinFn::identity(p.carrier());
            let id_y = FinFn::identity(q.carrier());
            // transpose: Hom(Σ_f P, Q) → Hom(P, f*Q)
            let transpose = |m: &PredMorphism| -> Option<PredMorphism> {
                let mut proofs = BTreeMap::new();
                for x in p.carrier().iter() {
                    let y = f.apply(x).ok()?;
                    for pr in p.fiber(x).ok()?.iter() {
                        let tagged = El::pair(x.clone(), pr.clone());
                        let img = m.apply_proof(y, &tagged).ok()?;
                        proofs.insert((x.clone(), pr.clone()), img);
                    }
                }
                PredMorphism::new(p.clone(), pulled.clone(), id_x.clone(), proofs).ok()
            };
            // inverse transpose: Hom(P, f*Q) → Hom(Σ_f P, Q)
            let untranspose = |m: &PredMorphism| -> Option<PredMorphism> {
                let mut proofs = BTreeMap::new();
                for y in q.carrier().iter() {
                    for tagged in sigma_p.fiber(y).ok()?.iter() {
                        let (x, pr) = match tagged {
                            El::Pair(x, pr) => ((**x).clone(), (**pr).clone()),
                            _ => return None,
                        };
                        let img = m.apply_proof(&x, &pr).ok()?;
                        proofs.insert((y.clone(), tagged.clone()), img);
                    }
                }
                PredMorphism::new(sigma_p.clone(), q.clone(), id_y.clone(), proofs).ok()
            };
            for m in left {
                match transpose(m) {
                    Some(t) => {
                        if !right.contains(&t) || untranspose(&t).as_ref() != Some(m) {
                            return false;
                        }
                    }
                    None => return false,
                }
            }
            for m in right {
                match untranspose(m) {
                    Some(u) => {
                        if !left.contains(&u) || transpose(&u).as_ref() != Some(m) {
                            return false;
                        }
                    }
                    None => return false,
                }
            }
            true
        }
    }
}

// ---------------------------------------------------------------------------
// Truth preservation of the generic lifting
// ---------------------------------------------------------------------------

pub fn check_truth_preservation(cfg: &LawConfig) -> LawReport {
    let b = cfg.bound();
    let mut law = Recorder::new("lifting-truth-preservation");
    for code in sweep_codes(cfg) {
        for x in base_sets(cfg) {
            if object_size_bound(&code, x.len(), &b) > cfg.max_carrier {
                continue;
            }
            let ok = truth_pres_iso(cfg.fibration, &code, &x, &b)
                .map(|iso| iso.verify())
                .unwrap_or(false);
            law.check(ok, || format!("code {code} over {x}"));
        }
    }
    LawReport {
        fibration: cfg.fibration,
        laws: vec![law.finish()],
    }
}

// ---------------------------------------------------------------------------
// The Φ ⊣ Ψ adjunction on finite carriers
// ---------------------------------------------------------------------------

pub fn check_phi_psi_adjunction(cfg: &LawConfig) -> LawReport {
    check_phi_psi_inner(cfg, None)
}

fn check_phi_psi_inner(cfg: &LawConfig, mutation: Option<Mutation>) -> LawReport {
    let b = cfg.bound();
    let mut phi_carrier = Recorder::new("phi-truth-carrier");
    let mut psi_carrier = Recorder::new("psi-comprehension-carrier");
    let mut iff = Recorder::new("phi-psi-transpose-iff");
    let mut functorial = Recorder::new("phi-preserves-algebra-morphisms");

    // polynomial codes of depth ≤ 1, carriers of size ≤ 2: small enough for
    // full algebra enumeration
    let codes: Vec<FunctorCode> = codes_up_to_depth(&leaf_codes(), cfg.max_code_depth.min(1))
        .into_iter()
        .filter(|c| c.is_polynomial())
        .collect();
    let bases: Vec<FinSet> = base_sets(cfg)
        .into_iter()
        .filter(|x| x.len() <= 2)
        .collect();

    for code in &codes {
        for x in &bases {
            let fx = apply_object(code, x, &b);
            if fx.len() > 6 {
                continue;
            }
            let truth_x = cfg.fibration.truth(x);
            let lifted_truth = generic_lift(code, &truth_x, &b).expect("liftable");
            let algebras = capped(FinFn::all(&fx, x), cfg.cell_cap);

            for k in &algebras {
                match phi(cfg.fibration, code, k, &b) {
                    Ok(m) => {
                        let ok = m.dst() == &truth_x && m.src() == &lifted_truth;
                        phi_carrier.check(ok, || format!("Φ of {code} algebra over {x}"));
                    }
                    Err(e) => phi_carrier.check(false, || format!("Φ failed: {e}")),
                }
            }

            for p in predicates_on(cfg, x) {
                let compr = p.comprehend();
                let fcompr = apply_object(code, &compr, &b);
                let lifted_p = generic_lift(code, &p, &b).expect("liftable");

                // enumerate proof-carrying algebras j : F̂P → P
                let mut js: Vec<PredMorphism> = Vec::new();
                for kb in FinFn::all(&fx, x) {
                    if js.len() >= cfg.cell_cap {
                        break;
                    }
                    let room = cfg.cell_cap - js.len();
                    js.extend(homs_over_capped(&kb, &lifted_p, &p, room));
                }

                let mut psis: Vec<(PredMorphism, FinFn)> = Vec::new();
                for j in js {
                    match psi_fn(code, &j, &b) {
                        Ok(plain) => {
                            let ok = plain.dom() == &fcompr && plain.cod() == &compr;
                            psi_carrier.check(ok, || {
                                format!("Ψ of an algebra on {p:?} under {code}")
                            });
                            let plain = if mutation == Some(Mutation::SwappedPsiPair) {
                                swap_pair_images(&plain)
                            } else {
                                plain
                            };
                            psis.push((j, plain));
                        }
                        Err(e) => psi_carrier.check(false, || format!("Ψ failed: {e}")),
                    }
                }

                // candidate mediating maps f : X → {P} and their lifted data
                let fs: Vec<(FinFn, FinFn, PredMorphism, PredMorphism)> =
                    FinFn::all(x, &compr)
                        .iter()
                        .filter_map(|f| {
                            let ff = arrow_lift(code, &ArrowObj(f.clone()), &b).ok()?.0;
                            let fd = dagger(f, &p).ok()?;
                            let lifted_fd = generic_lift_arrow(code, &fd, &b).ok()?;
                            Some((f.clone(), ff, fd, lifted_fd))
                        })
                        .collect();

                let phis: Vec<(&FinFn, PredMorphism)> = algebras
                    .iter()
                    .filter_map(|k| phi(cfg.fibration, code, k, &b).ok().map(|m| (k, m)))
                    .collect();

                // cache the four composites so the triple loop only compares
                let lhs_kf: Vec<Vec<Option<FinFn>>> = phis
                    .iter()
                    .map(|(k, _)| fs.iter().map(|(f, ..)| f.compose(k).ok()).collect())
                    .collect();
                let rhs_kf: Vec<Vec<Option<PredMorphism>>> = phis
                    .iter()
                    .map(|(_, phi_k)| {
                        fs.iter()
                            .map(|(_, _, fd, _)| fd.compose(phi_k).ok())
                            .collect()
                    })
                    .collect();
                let lhs_jf: Vec<Vec<Option<FinFn>>> = psis
                    .iter()
                    .map(|(_, psi_j)| {
                        fs.iter()
                            .map(|(_, ff, ..)| psi_j.compose(ff).ok())
                            .collect()
                    })
                    .collect();
                let rhs_jf: Vec<Vec<Option<PredMorphism>>> = psis
                    .iter()
                    .map(|(j, _)| {
                        fs.iter()
                            .map(|(_, _, _, lifted_fd)| j.compose(lifted_fd).ok())
                            .collect()
                    })
                    .collect();

                for (ki, _) in phis.iter().enumerate() {
                    for (ji, _) in psis.iter().enumerate() {
                        for (fi, (f, ..)) in fs.iter().enumerate() {
                            let lhs = match (&lhs_kf[ki][fi], &lhs_jf[ji][fi]) {
                                (Some(a), Some(b)) => Some(a == b),
                                _ => None,
                            };
                            let rhs = match (&rhs_kf[ki][fi], &rhs_jf[ji][fi]) {
                                (Some(a), Some(b)) => Some(a == b),
                                _ => None,
                            };
                            let ok = matches!((lhs, rhs), (Some(l), Some(r)) if l == r);
                            iff.check(ok, || {
                                format!(
                                    "code {code}, carrier {x}, P = {p:?}: \
                                     algebra-morphism equivalence failed for f = {f:?}"
                                )
                            });
                        }
                    }
                }
            }
        }

        // Φ preserves algebra morphisms
        for x in &bases {
            for x2 in &bases {
                let fx = apply_object(code, x, &b);
                let fx2 = apply_object(code, x2, &b);
                if fx.len() > 6 || fx2.len() > 6 {
                    continue;
                }
                let ks: Vec<(FinFn, PredMorphism)> = capped(FinFn::all(&fx, x), cfg.cell_cap)
                    .into_iter()
                    .filter_map(|k| {
                        let phi_k = phi(cfg.fibration, code, &k, &b).ok()?;
                        Some((k, phi_k))
                    })
                    .collect();
                let k2s: Vec<(FinFn, PredMorphism)> = capped(FinFn::all(&fx2, x2), cfg.cell_cap)
                    .into_iter()
                    .filter_map(|k| {
                        let phi_k = phi(cfg.fibration, code, &k, &b).ok()?;
                        Some((k, phi_k))
                    })
                    .collect();
                for h in FinFn::all(x, x2) {
                    let lifted_h = match arrow_lift(code, &ArrowObj(h.clone()), &b) {
                        Ok(a) => a.0,
                        Err(_) => continue,
                    };
                    let truth_h = truth_arrow(cfg.fibration, &h);
                    let lifted_truth_h = match generic_lift_arrow(code, &truth_h, &b) {
                        Ok(m) => m,
                        Err(_) => continue,
                    };
                    for (k, phi_k) in &ks {
                        for (k2, phi_k2) in &k2s {
                            let is_alg_morphism =
                                h.compose(k).ok() == k2.compose(&lifted_h).ok();
                            if !is_alg_morphism {
                                continue;
                            }
                            let ok = (|| -> Result<bool> {
                                Ok(truth_h.compose(phi_k)?
                                    == phi_k2.compose(&lifted_truth_h)?)
                            })()
                            .unwrap_or(false);
                            functorial.check(ok, || {
                                format!("code {code}, morphism {x} → {x2}")
                            });
                        }
                    }
                }
            }
        }
    }

    LawReport {
        fibration: cfg.fibration,
        laws: vec![
            phi_carrier.finish(),
            psi_carrier.finish(),
            iff.finish(),
            functorial.finish(),
        ],
    }
}

/// The swapped-pair mutation: flips every dependent pair in the image table.
fn swap_pair_images(f: &FinFn) -> FinFn {
    let table: BTreeMap<El, El> = f
        .dom()
        .iter()
        .map(|x| {
            let y = f.apply(x).expect("total");
            let swapped = match y {
                El::DPair(a, b) => El::dpair((**b).clone(), (**a).clone()),
                other => other.clone(),
            };
            (x.clone(), swapped)
        })
        .collect();
    FinFn::from_raw_parts(f.dom().clone(), f.cod().clone(), table)
}

// ---------------------------------------------------------------------------
// The lifting algebra: constant, identity, coproduct, HJ coincidence
// ---------------------------------------------------------------------------

pub fn check_lifting_algebra(cfg: &LawConfig) -> LawReport {
    let b = cfg.bound();
    let mut constant = Recorder::new("lift-constant");
    let mut identity = Recorder::new("lift-identity");
    let mut coproduct = Recorder::new("lift-coproduct");
    let mut hj = Recorder::new("hj-generic-coincidence");
    let mut inhabitation = Recorder::new("pointwise-inhabitation");

    let codes = sweep_codes(cfg);
    for x in base_sets(cfg) {
        for p in predicates_on(cfg, &x) {
            let compr_size = p.comprehend().len();

            // constant lemma over the base catalogue
            for s in base_sets(cfg) {
                let code = FunctorCode::Const(s.clone());
                let lifted = generic_lift(&code, &p, &b).expect("liftable");
                let ok = fibre_iso(&lifted, &cfg.fibration.truth(&s))
                    .is_some_and(|i| i.verify());
                constant.check(ok, || format!("Const{s} over P = {p:?}"));
            }

            // identity lemma
            let lifted = generic_lift(&FunctorCode::Id, &p, &b).expect("liftable");
            identity.check(
                fibre_iso(&lifted, &p).is_some_and(|i| i.verify()),
                || format!("Id over P = {p:?}"),
            );

            for code in &codes {
                if object_size_bound(code, x.len(), &b) > cfg.max_pred_carrier
                    || object_size_bound(code, compr_size, &b) > cfg.max_pred_carrier
                {
                    continue;
                }
                let lifted = match generic_lift(code, &p, &b) {
                    Ok(l) => l,
                    Err(_) => continue,
                };

                // coproduct lemma on sum-shaped codes
                if let FunctorCode::Sum(f, g) = code {
                    let ok = (|| -> Option<bool> {
                        let lf = generic_lift(f, &p, &b).ok()?;
                        let lg = generic_lift(g, &p, &b).ok()?;
                        let tagged = coproduct_predicate(&lf, &lg).ok()?;
                        Some(fibre_iso(&lifted, &tagged)?.verify())
                    })()
                    .unwrap_or(false);
                    coproduct.check(ok, || format!("code {code} over P = {p:?}"));
                }

                if cfg.fibration == Fibration::Families {
                    // HJ coincidence on polynomial codes
                    if code.is_polynomial() {
                        let ok = hj_lift(code, &p, &b)
                            .ok()
                            .and_then(|h| fibre_iso(&h, &lifted))
                            .is_some_and(|i| i.verify());
                        hj.check(ok, || format!("code {code} over P = {p:?}"));
                    }

                    // pointwise and exact fibers are inhabited together
                    for y in apply_object(code, &x, &b).iter() {
                        let ok = match (lift_pointwise(code, &p, y), lifted.fiber(y)) {
                            (Ok(pw), Ok(exact)) => pw.is_empty() == exact.is_empty(),
                            _ => false,
                        };
                        inhabitation.check(ok, || {
                            format!("code {code} over P = {p:?} at {y}")
                        });
                    }
                }
            }
        }
    }

    let mut laws = vec![
        constant.finish(),
        identity.finish(),
        coproduct.finish(),
    ];
    if cfg.fibration == Fibration::Families {
        laws.push(hj.finish());
        laws.push(inhabitation.finish());
    }
    LawReport {
        fibration: cfg.fibration,
        laws,
    }
}

// ---------------------------------------------------------------------------
// Induction soundness over the built-in datatypes
// ---------------------------------------------------------------------------

pub fn check_induction_soundness(cfg: &LawConfig) -> LawReport {
    check_induction_inner(cfg, None)
}

fn check_induction_inner(cfg: &LawConfig, mutation: Option<Mutation>) -> LawReport {
    let b = cfg.bound();
    let mut identity = Recorder::new("genind-subject-identity");
    let mut oracle = Recorder::new("genind-matches-direct-oracle");
    let mut truth = Recorder::new("truth-step-unit-proofs");

    let canon_mode = if mutation == Some(Mutation::SkippedHsDedup) {
        CanonMode::SkipPowDedup
    } else {
        CanonMode::Canonical
    };

    let mut subjects: Vec<(FunctorCode, StepAlgebra, Vec<Term>)> = Vec::new();

    // naturals, exhaustively up to 20
    let nats: Vec<Term> = (0..=20).map(induction::nat_term).collect();
    subjects.push((nat_code(), induction::nat_succ_chain_step(), nats));

    // 1000 seeded random rose trees of depth ≤ 4
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2026);
    let roses: Vec<Term> = (0..1000)
        .map(|_| random_rose_term(&mut rng, 4, cfg.seq_len_bound))
        .collect();
    subjects.push((rose_code(), induction::rose_size_step(), roses));

    // every canonical hereditarily finite set of rank ≤ 3, plus every raw
    // set tree of rank ≤ 3 run through the structure map (this is where the
    // dedup mutation bites)
    let mut hs_terms = enumerate_terms(&hs_code(), 3, &b);
    for raw in raw_set_trees(3, 3) {
        let layer = match raw {
            El::Mu(layer) => *layer,
            _ => unreachable!(),
        };
        if let Ok(t) = induction::in_term_with(&hs_code(), layer, canon_mode) {
            hs_terms.push(t);
        }
    }
    hs_terms.sort();
    hs_terms.dedup();
    subjects.push((hs_code(), induction::hs_rank_step(), hs_terms));

    for (code, step, terms) in &subjects {
        let truth_step = StepAlgebra::truth(code.clone());
        for t in terms {
            match genind(code, step, t) {
                Ok(res) => {
                    identity.check(res.subject == *t, || format!("term {t}"));
                    let direct = ind_direct(code, step, t);
                    oracle.check(
                        direct.as_ref().ok() == Some(&res),
                        || format!("term {t}"),
                    );
                }
                Err(e) => {
                    identity.check(false, || format!("term {t}: {e}"));
                    oracle.check(false, || format!("term {t}: {e}"));
                }
            }
            let unit_ok = genind(code, &truth_step, t)
                .map(|r| r.proof == El::Unit)
                .unwrap_or(false);
            truth.check(unit_ok, || format!("term {t}"));
        }
    }

    LawReport {
        fibration: cfg.fibration,
        laws: vec![identity.finish(), oracle.finish(), truth.finish()],
    }
}

// ---------------------------------------------------------------------------
// Entry points
// ---------------------------------------------------------------------------

/// Runs every check with the given configuration.
pub fn run_all(cfg: &LawConfig) -> LawReport {
    let report = check_adjunctions(cfg)
        .merge(check_truth_preservation(cfg))
        .merge(check_phi_psi_adjunction(cfg))
        .merge(check_lifting_algebra(cfg));
    report.merge(check_induction_soundness(cfg))
}

/// Runs the check targeted by a mutation, with the breakage switched on.
/// Used to demonstrate that the suite detects the bugs it claims to detect.
pub fn run_mutated(cfg: &LawConfig, mutation: Mutation) -> LawReport {
    match mutation {
        Mutation::BrokenOpreindex => check_adjunctions_inner(cfg, Some(mutation)),
        Mutation::SwappedPsiPair => {
            let cfg = LawConfig {
                fibration: Fibration::Families,
                ..*cfg
            };
            check_phi_psi_inner(&cfg, Some(mutation))
        }
        Mutation::SkippedHsDedup => check_induction_inner(cfg, Some(mutation)),
    }
}
