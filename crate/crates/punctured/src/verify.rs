//! Named verification suites.
//!
//! A suite is a list of properties. Every case of a suite draws fresh random
//! inputs from a seed derived from `(seed, case index)` and runs each property
//! on them. All comparisons are exact. A property that cannot be evaluated
//! (for example because a precision budget is exhausted) is reported as a
//! failure of that case.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use punctured_core::cocycles::{universal_map, MAX_HORIZON};
use punctured_core::*;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// One failed comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub index: usize,
    pub inputs: BTreeMap<String, String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub ring: String,
    pub seed: u64,
    pub cases: usize,
    pub failures: Vec<Failure>,
    pub millis: u64,
    /// Property identifiers exercised by the suite, in registry order.
    pub properties: Vec<String>,
    /// Number of individual comparisons made.
    pub checks: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} cases, {} checks, {} failures over {} (seed {}, {} ms)",
            self.suite,
            self.cases,
            self.checks,
            self.failures.len(),
            self.ring,
            self.seed,
            self.millis
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyError {
    UnknownSuite(String),
    Setup(String),
}

impl fmt::Display for VerifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyError::UnknownSuite(s) => write!(f, "unknown suite `{s}`; known suites: {}", SUITES.iter().map(|s| s.name).collect::<Vec<_>>().join(", ")),
            VerifyError::Setup(s) => write!(f, "cannot set up suite: {s}"),
        }
    }
}

impl std::error::Error for VerifyError {}

/// A checkable statement, tied to the library module whose behaviour it pins down.
#[derive(Clone, Copy, Debug)]
pub struct Property {
    pub id: &'static str,
    pub module: &'static str,
    pub statement: &'static str,
    run: PropFn,
}

/// Inputs shared by all properties of one case.
struct Ctx {
    ring: Ring,
    lie_base: Ring,
    index: usize,
    /// `cases` as given to the suite; `lie_tables` reads it as the range bound.
    cases: usize,
}

/// Named inputs of a failed check, with its two sides.
type Recorded = (Vec<(String, String)>, String, String);

#[derive(Default)]
struct Log {
    checks: usize,
    witnesses: usize,
    failures: Vec<Recorded>,
}

impl Log {
    fn check(&mut self, ok: bool, inputs: &[(&str, &dyn fmt::Display)], lhs: &dyn fmt::Display, rhs: &dyn fmt::Display) {
        self.checks += 1;
        if !ok {
            let inputs = inputs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
            self.failures.push((inputs, lhs.to_string(), rhs.to_string()));
        }
    }

    fn eq<T: PartialEq + fmt::Display>(&mut self, inputs: &[(&str, &dyn fmt::Display)], lhs: &T, rhs: &T) {
        self.check(lhs == rhs, inputs, lhs, rhs);
    }

    /// Agreement of two series, each known at least below `min`.
    fn agree(&mut self, inputs: &[(&str, &dyn fmt::Display)], lhs: &LaurentSeries, rhs: &LaurentSeries, min: i64) {
        let ok = lhs.prec() >= Precision::Finite(min) && rhs.prec() >= Precision::Finite(min) && lhs.agrees_with(rhs);
        self.check(ok, inputs, lhs, rhs);
    }
}

type PropFn = fn(&Ctx, u64, &mut Log) -> Result<()>;

pub struct Suite {
    pub name: &'static str,
    pub properties: &'static [&'static str],
    pub default_cases: usize,
    note: Option<&'static str>,
}

const THEOREM_NOTE: &str = "The equality of cohomology classes D^12 = <Lambda,Lambda>^6 <Lambda,Omega>^-6 <Omega,Omega> is \
verified through its ingredients: the Lie-level identity (lie_identity, lie_tables), triviality of both sides on G+ \
(gplus_trivial) and the cocycle conditions (cocycle_laws). No pointwise equality of the group cocycles is asserted; they \
may differ by a coboundary.";

pub const SUITES: &[Suite] = &[
    Suite { name: "ring_laws", properties: &["unit_iff_constant_term", "unit_inverse", "exp_additive", "nil_index_bound"], default_cases: 100, note: None },
    Suite {
        name: "series_laws",
        properties: &["inverse_and_reversion", "compose_associative", "exact_form_residue", "unit_factorization", "aut_factorization"],
        default_cases: 25,
        note: None,
    },
    Suite { name: "group_laws", properties: &["group_axioms", "action_multiplicative", "bracket_laws"], default_cases: 25, note: None },
    Suite {
        name: "cc_axioms",
        properties: &["cc_normalization", "cc_bimultiplicative", "cc_antisymmetric", "cc_aut_invariant", "cc_vanishing", "cc_algorithms_agree"],
        default_cases: 100,
        note: None,
    },
    Suite {
        name: "cocycle_laws",
        properties: &["delta1_lambda_omega", "delta2_cups", "delta2_det", "universality", "perturbed_control"],
        default_cases: 25,
        note: Some(THEOREM_NOTE),
    },
    Suite { name: "gplus_trivial", properties: &["gplus_trivial"], default_cases: 25, note: Some(THEOREM_NOTE) },
    Suite { name: "lie_tables", properties: &["lie_tables"], default_cases: 8, note: Some("cases is the range bound: all n, m with |n|, |m| <= cases") },
    Suite {
        name: "lie_identity",
        properties: &["lie_identity", "lie_cup_closed_forms", "lie_det_trace"],
        default_cases: 50,
        note: Some(THEOREM_NOTE),
    },
    Suite { name: "direct_sum", properties: &["direct_sum"], default_cases: 25, note: None },
    Suite { name: "determinant", properties: &["window_stability", "d_window_triangular", "block_identity"], default_cases: 25, note: None },
    Suite {
        name: "consistency",
        properties: &["cc_algorithms_agree", "lie_det_trace", "block_identity", "bracket_witnesses"],
        default_cases: 50,
        note: None,
    },
];

/// Every property, with the statement it checks. Each library invariant
/// appears exactly once.
pub const REGISTRY: &[Property] = &[
    Property { id: "unit_iff_constant_term", module: "nilring", statement: "an element is a unit iff its constant term is nonzero, and nilpotent iff it is zero", run: p_unit_iff_constant_term },
    Property { id: "unit_inverse", module: "nilring", statement: "invert(a) * a = 1 for units", run: p_unit_inverse },
    Property { id: "exp_additive", module: "nilring", statement: "exp(a + b) = exp(a) exp(b) for nilpotents", run: p_exp_additive },
    Property { id: "nil_index_bound", module: "nilring", statement: "the nil index of a nilpotent is at most the dimension", run: p_nil_index_bound },
    Property { id: "inverse_and_reversion", module: "laurent", statement: "invert(h) h = 1 and comp_inverse(g) is a two-sided compositional inverse", run: p_inverse_and_reversion },
    Property { id: "compose_associative", module: "laurent", statement: "(f o g) o k = f o (g o k)", run: p_compose_associative },
    Property { id: "exact_form_residue", module: "laurent", statement: "res(f dg + g df) = 0", run: p_exact_form_residue },
    Property { id: "unit_factorization", module: "laurent", statement: "factorize_unit recomposes to its input with factors in V-, Gm x Z and V+", run: p_unit_factorization },
    Property { id: "aut_factorization", module: "laurent", statement: "factorize_aut recomposes to its input with factors in Aut+ and Aut-", run: p_aut_factorization },
    Property { id: "group_axioms", module: "group", statement: "the product is associative and x x^-1 = 1", run: p_group_axioms },
    Property { id: "action_multiplicative", module: "group", statement: "x(f k) h_x = x(f) x(k)", run: p_action_multiplicative },
    Property { id: "bracket_laws", module: "group", statement: "the Lie bracket is antisymmetric and satisfies Jacobi", run: p_bracket_laws },
    Property { id: "bracket_witnesses", module: "group", statement: "[d/dt, t] = 1 and [d/dt, t d/dt] = d/dt", run: p_bracket_witnesses },
    Property { id: "cc_normalization", module: "cc", statement: "CC(t, t) = -1 and CC(a, g) = a^nu(g) for constants a", run: p_cc_normalization },
    Property { id: "cc_bimultiplicative", module: "cc", statement: "CC is multiplicative in each argument", run: p_cc_bimultiplicative },
    Property { id: "cc_antisymmetric", module: "cc", statement: "CC(f, g) CC(g, f) = 1", run: p_cc_antisymmetric },
    Property { id: "cc_aut_invariant", module: "cc", statement: "CC(f o phi, g o phi) = CC(f, g)", run: p_cc_aut_invariant },
    Property { id: "cc_vanishing", module: "cc", statement: "CC = 1 on (Gm x V+)^2 and on (Gm x V-)^2", run: p_cc_vanishing },
    Property { id: "cc_algorithms_agree", module: "cc", statement: "cc_exact = cc_explog where both are defined", run: p_cc_algorithms_agree },
    Property { id: "delta1_lambda_omega", module: "cocycles", statement: "Lambda and Omega are 1-cocycles", run: p_delta1_lambda_omega },
    Property { id: "delta2_cups", module: "cocycles", statement: "<Lambda,Lambda>, <Lambda,Omega>, <Omega,Omega> are 2-cocycles", run: p_delta2_cups },
    Property { id: "universality", module: "cocycles", statement: "Phi_l(x) = (l(x), phi_x) is multiplicative with Lambda o Phi_l = l and Omega o Phi_l = Omega", run: p_universality },
    Property { id: "perturbed_control", module: "cocycles", statement: "a perturbed 2-cochain fails the cocycle law on at least one case", run: p_perturbed_control },
    Property { id: "window_stability", module: "detext", statement: "D computed with block L and L + 4 agree", run: p_window_stability },
    Property { id: "block_identity", module: "detext", statement: "d_xy = c_x b_y + d_x d_y entrywise", run: p_block_identity },
    Property { id: "delta2_det", module: "detext", statement: "D is a 2-cocycle on G0", run: p_delta2_det },
    Property { id: "lie_det_trace", module: "detext", statement: "the Lie cocycle of D is the trace form", run: p_lie_det_trace },
    Property { id: "lie_cup_closed_forms", module: "detext", statement: "the Lie cocycles of the cups are 2 res(s1 ds2), res(s1 dr2' - s2 dr1'), 2 res(r1' dr2')", run: p_lie_cup_closed_forms },
    Property { id: "d_window_triangular", module: "detext", statement: "the d-window is lower triangular with unit diagonal modulo nilpotents", run: p_d_window_triangular },
    Property { id: "gplus_trivial", module: "theorem", statement: "D and the three cups are identically 1 on G+", run: p_gplus_trivial },
    Property { id: "lie_tables", module: "theorem", statement: "the Lie cocycle of D on t^n and t^(n+1) d/dt matches the tables", run: p_lie_tables },
    Property { id: "lie_identity", module: "theorem", statement: "12 Lie(D) = 6 Lie<L,L> - 6 Lie<L,O> + Lie<O,O>", run: p_lie_identity },
    Property { id: "direct_sum", module: "detext", statement: "f = u + x(v) with u in t^-1 A[t^-1], v in A[[t]]", run: p_direct_sum },
];

pub fn suite(name: &str) -> Option<&'static Suite> {
    SUITES.iter().find(|s| s.name == name)
}

pub fn property(id: &str) -> Option<&'static Property> {
    REGISTRY.iter().find(|p| p.id == id)
}

pub fn default_ring(name: &str) -> Ring {
    let spec = match name {
        "lie_tables" => "Q",
        "lie_identity" => "Q[e1^2=0, e2^2=0]",
        "consistency" => "Q[e^2=0]",
        _ => "Q[e1^3=0, e2^2=0]",
    };
    crate::parse::ring(spec).expect("default rings parse")
}

/// The coefficient ring of random Lie elements: when the last two generators
/// are square-zero they play the role of the dual pair used by extraction and
/// are dropped; otherwise the ring is used as is.
pub fn lie_base(ring: &Ring) -> Result<Ring> {
    let n = ring.generators().len();
    if n >= 2 && ring.exponents()[n - 2..] == [2, 2] {
        let scope = ring.cap_scope().min(n - 2);
        RingSpec::with_cap_scope(ring.generators()[..n - 2].to_vec(), ring.exponents()[..n - 2].to_vec(), ring.degree_cap(), scope)
    } else {
        Ok(ring.clone())
    }
}

/// Runs suite `name` over `ring` (or the suite's default ring) with `cases`
/// cases (or the default count).
pub fn run_suite(name: &str, ring: Option<&Ring>, seed: u64, cases: Option<usize>) -> Result<SuiteReport, VerifyError> {
    let suite = suite(name).ok_or_else(|| VerifyError::UnknownSuite(name.to_string()))?;
    let ring = ring.cloned().unwrap_or_else(|| default_ring(name));
    let lie_base = lie_base(&ring).map_err(|e| VerifyError::Setup(e.to_string()))?;
    let cases = cases.unwrap_or(suite.default_cases);
    let props: Vec<&Property> = suite.properties.iter().map(|id| property(id).expect("registered")).collect();
    let work = if name == "lie_tables" { 2 * cases + 1 } else { cases };
    let start = Instant::now();

    let per_case: Vec<(Vec<Failure>, usize, usize)> = (0..work)
        .into_par_iter()
        .map(|index| {
            let ctx = Ctx { ring: ring.clone(), lie_base: lie_base.clone(), index, cases };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(index as u64);
            let mut failures = Vec::new();
            let (mut checks, mut witnesses) = (0, 0);
            for p in &props {
                let case_seed = rng.next_u64();
                let mut log = Log::default();
                let base = |extra: Vec<(String, String)>| {
                    let mut inputs: BTreeMap<String, String> = extra.into_iter().collect();
                    inputs.insert("property".into(), p.id.into());
                    inputs.insert("case_seed".into(), case_seed.to_string());
                    inputs
                };
                if let Err(e) = (p.run)(&ctx, case_seed, &mut log) {
                    failures.push(Failure { index, inputs: base(Vec::new()), lhs: format!("error: {e}"), rhs: "a value".into() });
                }
                checks += log.checks;
                witnesses += log.witnesses;
                for (inputs, lhs, rhs) in log.failures {
                    failures.push(Failure { index, inputs: base(inputs), lhs, rhs });
                }
            }
            (failures, checks, witnesses)
        })
        .collect();

    let mut failures = Vec::new();
    let (mut checks, mut witnesses) = (0, 0);
    for (f, c, w) in per_case {
        failures.extend(f);
        checks += c;
        witnesses += w;
    }
    if suite.properties.contains(&"perturbed_control") {
        checks += 1;
        if witnesses == 0 {
            let mut inputs = BTreeMap::new();
            inputs.insert("property".into(), "perturbed_control".into());
            failures.push(Failure { index: work, inputs, lhs: "0 cases violate the cocycle law".into(), rhs: "at least 1".into() });
        }
    }
    Ok(SuiteReport {
        suite: name.to_string(),
        ring: ring.to_string(),
        seed,
        cases,
        failures,
        millis: start.elapsed().as_millis() as u64,
        properties: suite.properties.iter().map(|s| s.to_string()).collect(),
        checks,
        note: suite.note.map(str::to_string),
    })
}

// Sampling helpers.

const GROUP_BOUNDS: Bounds = Bounds { h_degree: 2, phi_degree: 2, neg_depth: 1, coeff: 2, linear_phi: false };
/// Smaller elements for the suites that evaluate `D` on products of three
/// elements, where window sizes grow with the reach of the products.
const DET_BOUNDS: Bounds = Bounds { h_degree: 2, phi_degree: 2, neg_depth: 1, coeff: 2, linear_phi: true };

fn sampler(ring: &Ring, bounds: Bounds, seed: u64) -> Result<Sampler> {
    Sampler::new(ring, bounds, seed)
}

/// `a0 (1 + nilpotent negative tail)`.
fn gm_vminus(s: &mut Sampler) -> LaurentSeries {
    let tail = s.unit_series(true).below(0);
    (&LaurentSeries::one(s.ring()) + &tail).scale(&s.unit())
}

/// Repeats `f` at doubling horizons until its value is known below `min`.
fn at_prec(min: i64, mut f: impl FnMut(i64) -> Result<LaurentSeries>) -> Result<LaurentSeries> {
    with_horizon(2 * min.max(4), MAX_HORIZON, |upto| {
        let v = f(upto)?;
        if v.prec() >= Precision::Finite(min) {
            Ok(v)
        } else {
            Err(Error::InsufficientPrecision { needed: min, have: v.prec() })
        }
    })
}

const MIN_PREC: i64 = 6;

/// Like [`at_prec`] for group elements, at precision `MIN_PREC`.
fn group_at_prec(mut f: impl FnMut(i64) -> Result<GroupElem>) -> Result<GroupElem> {
    with_horizon(16, MAX_HORIZON, |upto| {
        let v = f(upto)?;
        if v.prec() >= Precision::Finite(MIN_PREC) {
            Ok(v)
        } else {
            Err(Error::InsufficientPrecision { needed: MIN_PREC, have: v.prec() })
        }
    })
}

// nilring

fn p_unit_iff_constant_term(ctx: &Ctx, seed: u64, log: &mut Log) -> Result<()> {
    let mut s = sampler(&ctx.ring, GROUP_BOUNDS, seed)?;
    for x in [s.element(), s.nilpotent(), s.unit()] {
        let nonzero = !x.constant_term().is_zero();
        let invertible = x.invert().is_ok();
        let nilpotent = x.pow(ctx.ring.dimension() as u32).is_zero();
        log.check(invertible == nonzero && x.is_unit() == nonzero, &[("a", &x)], &format!("unit = {invertible}"), &format!("constant term nonzero = {nonzero}"));
        log.check(nilpotent == !nonzero && x.is_nilpotent() == !nonzero, &[("a", &x)], &format!("nilpotent = {nilpotent}"), &format!("constant term zero = {}", !nonzero));
    }
    Ok(())
}

fn p_unit_inverse(ctx: &Ctx, seed: u64, log: &mut Log) -> Result<()> {
    let mut s = sampler(&ctx.ring, GROUP_BOUNDS, seed)?;
    let u = s.unit();
    log.eq(&[("a", &u)], &(&u * &u.invert()?), &RingElem::one(&ctx.ring));
    Ok(())
}

fn p_exp_additive(ctx: &Ctx, seed: u64, log: &mut Log) -> Result<()> {
    let mut s = sampler(&ctx.ring, GROUP_BOUNDS, seed)?;
    let (a, b) = (s.nilpotent(), s.nilpotent());
    let lhs = (&a + &b).exp_nil()?;
    let rhs = &a.exp_nil()? * &b.exp_nil()?;
    log.eq(&[("a", &a), ("b", &b)], &lhs, &rhs);
    Ok(())
}

fn p_nil_index_bound(ctx: &Ctx, seed: u64, log: &mut Log) -> Result<()> {
    let mut s = sampler(&ctx.ring, GROUP_BOUNDS, seed)?;
    let a = s.nilpotent();
    let mut k = 1;
    let mut power = a.clone();
    while !power.is_zero() {
        power = &power * &a;
        k += 1;
    }
    let dim = ctx.ring.dimension() as u32;
    log.check(k <= dim, &[("a", &a)], &format!("nil index {k}"), &format!("at most {dim}"));
    log.eq(&[("a", &a)], &a.nil_index().unwrap_or(0), &k);
    Ok(())
}

// laurent

fn p_inverse_and_reversion(ctx: &Ctx, seed: u64, log: &mut Log) -> Result<()> {
    let r = &ctx.ring;
    let mut s = sampler(r, GROUP_BOUNDS, seed)?;
    let h = s.unit_series(true).shift((seed % 5) as i64 - 2);
    log.agree(&[("h", &h)], &(&h * &h.invert(16)?), &LaurentSeries::one(r), 8);
    let g = s.parameter(true);
    let (psi, back1, back2) = with_horizon(16, MAX_HORIZON, |u| {
        let psi = g.comp_inverse(u)?;
        let (b1, b2) = (psi.compose(&g, MIN_PREC)?, g.compose(&psi, MIN_PREC)?);
        if b1.prec().min(b2.prec()) >= Precision::Finite(MIN_PREC) {
            Ok((psi, b1, b2))
        } else {
            Err(Error::InsufficientPrecision { needed: MIN_PREC, have: b1.prec().min(b2.prec()) })
        }
    })?;
    let t = LaurentSeries::t(r);
    log.agree(&[("g", &g), ("inverse", &psi)], &back1, &t, MIN_PREC);
    log.agree(&[("g", &g), ("inverse", &psi)], &back2, &t, MIN_PREC);
    Ok(())
}

fn p_compose_associative(ctx: &Ctx, seed: u64, log: &mut Log) -> Result<()> {
    let mut s = sampler(&ctx.ring, GROUP_BOUNDS, seed)?;
    let f = s.unit_series(true);
    let (g, k) = (s.parameter(true), s.parameter(true));
    let lhs = at_prec(MIN_PREC, |upto| f.compose(&g, upto)?.compose(&k, MIN_PREC))?;
    let rhs = at_prec(MIN_PREC, |upto| f.compose(&g.compose(&k, upto)?, MIN_PREC))?;
    log.agree(&[("f", &f), ("g", &g), ("k", &k)], &lhs, &rhs, MIN_PREC);
    Ok(())
}

fn p_exact_form_residue(ctx: &Ctx, seed: u64, log: &mut Log) -> Result<()> {
    let mut s = sampler(&ctx.ring, GROUP_BOUNDS, seed)?;
    let f = s.lie_elem().s;
    let g = s.unit_series(true).shift(-1);
    let form = &(&f * &g.derivative()) + &(&g * &f.derivative());
    log.eq(&[("f", &f), ("g", &g)], &form.residue()?, &RingElem::zero(&ctx.ring));
    Ok(())
}

fn p_unit_factorization(ctx: &Ctx, seed: u64, log: &mut Log) -> Result<()> {
    let mut s = sampler(&ctx.ring, GROUP_BOUNDS, seed)?;
    let h = s.unit_series(true).shift((seed % 5) as i64 - 2);
    let fac = h.factorize_unit(12)?;
    let shape = format!("nu={}, a0={}, v_minus={}, v_plus={}", fac.nu, fac.a0, fac.v_minus, fac.v_plus);
    log.check(fac.is_well_formed(), &[("h", &h)], &shape, &"factors in V-, Gm x Z, V+");
    log.agree(&[("h", &h), ("factors", &shape)], &fac.recompose(), &h, 12);
    Ok(())
}

fn p_aut_factorization(ctx: &Ctx, seed: u64, log: &mut Log) -> Result<()> {
    let r = &ctx.ring;
    let mut s = sampler(r, GROUP_BOUNDS, seed)?;
    let phi = s.parameter(true);
    let (plus, minus) = phi.factorize_aut(16)?;
    let plus_ok = plus.min_deg() >= 0 && plus.coeff_or_zero(0).is_nilpotent() && plus.coeff_or_zero(1).is_unit();
    let tail = minus.below(0);
    let minus_ok = minus.is_exact() && minus.at_or_above(0) == LaurentSeries::t(r) && tail.terms().all(|(_, c)| c.is_nilpotent());
    let shape = format!("plus={plus}, minus={minus}");
    log.check(plus_ok && minus_ok, &[("phi", &phi)], &shape, &"factors in Aut+ and Aut-");
    let back = at_prec(12, |u| {
        let (plus, minus) = phi.factorize_aut(u)?;
        minus.compose(&plus, 12)
    })?;
    log.agree(&[("phi", &phi), ("factors", &shape)], &back, &phi, 12);
    Ok(())
}

// group

fn p_group_axioms(ctx: &Ctx, seed: u64, log: &mut Log) -> Result<()> {
    let r = &ctx.ring;
    let mut s = sampler(r, GROUP_BOUNDS, seed)?;
    let (x, y, z) = (s.group_elem(Shape::General), s.group_elem(Shape::General), s.group_elem(Shape::General));
    let ins: [(&str, &dyn fmt::Display); 3] = [("x", &x), ("y", &y), ("z", &z)];
    let lhs = group_at_prec(|u| x.mul(&y, u)?.mul(&z, u))?;
    let rhs = group_at_prec(|u| x.mul(&y.mul(&z, u)?, u))?;
    log.agree(&ins, &lhs.h, &rhs.h, MIN_PREC);
    log.agree(&ins, &lhs.phi, &rhs.phi, MIN_PREC);
    let e = group_at_prec(|u| x.mul(&x.inv(u)?, u))?;
    let one = GroupElem::identity(r);
    log.agree(&[("x", &x)], &e.h, &one.h, MIN_PREC);
    log.agree(&[("x", &x)], &e.phi, &one.phi, MIN_PREC);
    Ok(())
}

fn p_action_multiplicative(ctx: &Ctx, seed: u64, log: &mut Log) -> Result<()> {
    let mut s = sampler(&ctx.ring, GROUP_BOUNDS, seed)?;
    let x = s.group_elem(Shape::General);
    let f = s.unit_series(true).shift(1);
    let k = s.lie_elem().s;
    let lhs = at_prec(MIN_PREC, |u| Ok((&x.act(&(&f * &k), u)? * &x.h).truncate(MIN_PREC)))?;
    let rhs = at_prec(MIN_PREC, |u| Ok((&x.act(&f, u)? * &x.act(&k, u)?).truncate(MIN_PREC)))?;
    log.agree(&[("x", &x), ("f", &f), ("k", &k)], &lhs, &rhs, MIN_PREC);
    Ok(())
}

fn p_bracket_laws(ctx: &Ctx, seed: u64, log: &mut Log) -> Result<()> {
    let mut s = sampler(&ctx.ring, GROUP_BOUNDS, seed)?;
    let (a, b, c) = (s.lie_elem(), s.lie_elem(), s.lie_elem());
    let zero = LieElem::new(LaurentSeries::zero(&ctx.ring), LaurentSeries::zero(&ctx.ring))?;
    let anti = a.bracket(&b).add(&b.bracket(&a));
    log.eq(&[("z", &a), ("w", &b)], &anti, &zero);
    let jacobi = a.bracket(&b.bracket(&c)).add(&b.bracket(&c.bracket(&a))).add(&c.bracket(&a.bracket(&b)));
    log.eq(&[("a", &a), ("b", &b), ("c", &c)], &jacobi, &zero);
    Ok(())
}

fn p_bracket_witnesses(ctx: &Ctx, seed: u64, log: &mut Log) -> Result<()> {
    let r = &ctx.ring;
    let (dt, t, tdt) = (LieElem::d(r, -1), LieElem::e(r, 1), LieElem::d(r, 0));
    log.eq(&[("z", &dt), ("w", &t)], &dt.bracket(&t), &LieElem::e(r, 0));
    log.eq(&[("z", &dt), ("w", &tdt)], &dt.bracket(&tdt), &dt);
    // The brackets are the operator commutators on a random series.
    let f = sampler(r, GROUP_BOUNDS, seed)?.lie_elem().s;
    for (z, w) in [(&dt, &t), (&dt, &tdt)] {
        let comm = &z.act(&w.act(&f)) - &w.act(&z.act(&f));
        log.eq(&[("z", z), ("w", w), ("f", &f)], &comm, &z.bracket(w).act(&f));
    }
    Ok(())
}

// cc

fn p_cc_normalization(ctx: &Ctx, seed: u64, log: &mut Log) -> Result<()> {
    let r = &ctx.ring;
    let t = LaurentSeries::t(r);
    log.eq(&[("f", &t), ("g", &t)], &cc(&t, &t)?, &RingElem::from_int(r, -1));
    let mut s = sampler(r, GROUP_BOUNDS, seed)?;
    let a = s.unit();
    let g = s.unit_series(true).shift((seed % 5) as i64 - 2);
    let nu = g.order_nu()?;
    log.eq(&[("a", &a), ("g", &g)], &cc(&LaurentSeries::constant(a.clone()), &g)?, &a.powi(nu)?);
    Ok(())
}

fn general_unit(s: &mut Sampler, shift: u64) -> LaurentSeries {
    s.unit_series(true).shift((shift % 5) as i64 - 2)
}

fn p_cc_bimultiplicative(ctx: &Ctx, seed: u64, log: &mut Log) -> Result<()> {
    let mut s = sampler(&ctx.ring, GROUP_BOUNDS, seed)?;
    let (f1, f2, g) = (general_unit(&mut s, seed), general_unit(&mut s, seed / 5), general_unit(&mut s, seed / 25));
    let ins: [(&str, &dyn fmt::Display); 3] = [("f1", &f1), ("f2", &f2), ("g", &g)];
    log.eq(&ins, &cc(&(&f1 * &f2), &g)?, &(&cc(&f1, &g)? * &cc(&f2, &g)?));
    log.eq(&ins, &cc(&g, &(&f1 * &f2))?, &(&cc(&g, &f1)? * &cc(&g, &f2)?));
    Ok(())
}

fn p_cc_antisymmetric(ctx: &Ctx, seed: u64, log: &mut Log) -> Result<()> {
    let mut s = sampler(&ctx.ring, GROUP_BOUNDS, seed)?;
    let (f, g) = (general_unit(&mut s, seed), general_unit(&mut s, seed / 5));
    log.eq(&[("f", &f), ("g", &g)], &(&cc(&f, &g)? * &cc(&g, &f)?), &RingElem::one(&ctx.ring));
    Ok(())
}

fn p_cc_aut_invariant(ctx: &Ctx, seed: u64, log: &mut Log) -> Result<()> {
    let mut s = sampler(&ctx.ring, GROUP_BOUNDS, seed)?;
    let (f, g) = (general_unit(&mut s, seed), general_unit(&mut s, seed / 5));
    let phi = s.parameter(true);
    let moved = with_horizon(16, MAX_HORIZON, |u| cc(&f.compose(&phi, u)?, &g.compose(&phi, u)?))?;
    log.eq(&[("f", &f), ("g", &g), ("phi", &phi)], &moved, &cc(&f, &g)?);
    Ok(())
}

fn p_cc_vanishing(ctx: &Ctx, seed: u64, log: &mut Log) -> Result<()> {
    let one = RingElem::one(&ctx.ring);
    let mut s = sampler(&ctx.ring, GROUP_BOUNDS, seed)?;
    let (f, g) = (s.unit_series(false), s.unit_series(false));
    log.eq(&[("f", &f), ("g", &g)], &cc(&f, &g)?, &one);
    let (f, g) = (gm_vminus(&mut s), gm_vminus(&mut s));
    log.eq(&[("f", &f), ("g", &g)], &cc(&f, &g)?, &one);
    Ok(())
}

fn p_cc_algorithms_agree(ctx: &Ctx, seed: u64, log: &mut Log) -> Result<()> {
    let mut s = sampler(&ctx.ring, GROUP_BOUNDS, seed)?;
    let f = s.unit_series(true);
    let f = f.scale(&f.factorize_unit(8)?.a0.invert()?);
    let g = general_unit(&mut s, seed);
    log.eq(&[("f", &f), ("g", &g)], &cc_exact(&f, &g)?, &cc_explog(&f, &g)?);
    let h = general_unit(&mut s, seed / 5);
    log.eq(&[("f", &h), ("g", &g)], &cc_exact(&h, &g)?, &cc_reduced(&h, &g)?);
    Ok(())
}

// cocycles

fn p_delta1_lambda_omega(ctx: &Ctx, seed: u64, log: &mut Log) -> Result<()> {
    let mut s = sampler(&ctx.ring, GROUP_BOUNDS, seed)?;
    let (x, y) = (s.group_elem(Shape::General), s.group_elem(Shape::General));
    for tag in [OneTag::Lambda, OneTag::Omega] {
        let v = at_prec(MIN_PREC, |u| Ok(delta1::<LoopGm>(|g| Ok(eval_one_cocycle(tag, g)), &x, &y, u)?.truncate(MIN_PREC)))?;
        log.agree(&[("cocycle", &tag.name()), ("x", &x), ("y", &y)], &v, &LaurentSeries::one(&ctx.ring), MIN_PREC);
    }
    Ok(())
}

fn p_delta2_cups(ctx: &Ctx, seed: u64, log: &mut Log) -> Result<()> {
    let mut s = sampler(&ctx.ring, DET_BOUNDS, seed)?;
    let (x, y, z) = (s.group_elem(Shape::General), s.group_elem(Shape::General), s.group_elem(Shape::General));
    for (a, b) in [(OneTag::Lambda, OneTag::Lambda), (OneTag::Lambda, OneTag::Omega), (OneTag::Omega, OneTag::Omega)] {
        let c = TwoCocycle::cup(a, b);
        log.eq(&[("cocycle", &c.tag), ("x", &x), ("y", &y), ("z", &z)], &delta2_trivial(&c, &x, &y, &z)?, &RingElem::one(&ctx.ring));
    }
    Ok(())
}

fn p_delta2_det(ctx: &Ctx, seed: u64, log: &mut Log) -> Result<()> {
    let mut s = sampler(&ctx.ring, DET_BOUNDS, seed)?;
    let (x, y, z) = (s.group_elem(Shape::G0), s.group_elem(Shape::G0), s.group_elem(Shape::G0));
    let d = TwoCocycle::det();
    log.eq(&[("x", &x), ("y", &y), ("z", &z)], &delta2_trivial(&d, &x, &y, &z)?, &RingElem::one(&ctx.ring));
    Ok(())
}

fn p_universality(ctx: &Ctx, seed: u64, log: &mut Log) -> Result<()> {
    let mut s = sampler(&ctx.ring, GROUP_BOUNDS, seed)?;
    let (x, y) = (s.group_elem(Shape::General), s.group_elem(Shape::General));
    for tag in [OneTag::Lambda, OneTag::Omega] {
        let (px, py) = (universal_map(tag, &x)?, universal_map(tag, &y)?);
        let ins: [(&str, &dyn fmt::Display); 3] = [("l", &tag.name()), ("x", &x), ("y", &y)];
        log.eq(&ins, &eval_one_cocycle(OneTag::Lambda, &px), &eval_one_cocycle(tag, &x));
        log.eq(&ins, &eval_one_cocycle(OneTag::Omega, &px), &eval_one_cocycle(OneTag::Omega, &x));
        let (lhs, rhs) = with_horizon(16, MAX_HORIZON, |u| {
            let xy = x.mul(&y, u)?;
            let lhs = universal_map(tag, &xy)?;
            let rhs = px.mul(&py, u)?;
            if lhs.prec().min(rhs.prec()) >= Precision::Finite(MIN_PREC) {
                Ok((lhs, rhs))
            } else {
                Err(Error::InsufficientPrecision { needed: MIN_PREC, have: lhs.prec().min(rhs.prec()) })
            }
        })?;
        log.agree(&ins, &lhs.h, &rhs.h, MIN_PREC);
        log.agree(&ins, &lhs.phi, &rhs.phi, MIN_PREC);
        let pulled = cup_cocycle(OneTag::Lambda, OneTag::Omega, &px, &py)?;
        log.eq(&ins, &pulled, &cup_cocycle(tag, OneTag::Omega, &x, &y)?);
    }
    Ok(())
}

fn p_perturbed_control(ctx: &Ctx, seed: u64, log: &mut Log) -> Result<()> {
    let mut s = sampler(&ctx.ring, DET_BOUNDS, seed)?;
    let (x, y, z) = (s.group_elem(Shape::G0), s.group_elem(Shape::G0), s.group_elem(Shape::G0));
    let bad = TwoCocycle::cup(OneTag::Lambda, OneTag::Lambda).perturbed();
    if !delta2_trivial(&bad, &x, &y, &z)?.is_one() {
        log.witnesses += 1;
    }
    Ok(())
}

// detext

fn p_window_stability(ctx: &Ctx, seed: u64, log: &mut Log) -> Result<()> {
    let mut s = sampler(&ctx.ring, DET_BOUNDS, seed)?;
    let (x, y) = (s.group_elem(Shape::G0), s.group_elem(Shape::G0));
    let base = det_cocycle_d_detailed(&x, &y, None)?;
    let wider = det_cocycle_d_detailed(&x, &y, Some(base.block + 4))?;
    let ins: [(&str, &dyn fmt::Display); 3] = [("x", &x), ("y", &y), ("block", &base.block)];
    log.eq(&ins, &base.value, &wider.value);
    Ok(())
}

fn p_d_window_triangular(ctx: &Ctx, seed: u64, log: &mut Log) -> Result<()> {
    let mut s = sampler(&ctx.ring, DET_BOUNDS, seed)?;
    let x = s.group_elem(Shape::G0);
    let w = block_window(&x, Block::D, 8)?;
    for (i, row) in w.matrix.iter().enumerate() {
        for (k, e) in row.iter().enumerate() {
            let ok = match i.cmp(&k) {
                std::cmp::Ordering::Less => e.is_nilpotent(),
                std::cmp::Ordering::Equal => e.is_unit(),
                std::cmp::Ordering::Greater => true,
            };
            if i <= k {
                log.check(ok, &[("x", &x), ("row", &i), ("col", &k)], e, &if i == k { "a unit" } else { "nilpotent" });
            }
        }
    }
    Ok(())
}

fn p_block_identity(ctx: &Ctx, seed: u64, log: &mut Log) -> Result<()> {
    const L: usize = 6;
    let r = &ctx.ring;
    let mut s = sampler(r, DET_BOUNDS, seed)?;
    let (x, y) = (s.group_elem(Shape::G0), s.group_elem(Shape::G0));
    let (bx, by) = (reach_bound(&x)?.max(0) as usize, reach_bound(&y)?.max(1) as usize);
    let wide = L + bx;
    let len = L.max(by);
    let dx = block_window(&x, Block::D, wide)?;
    let dy = block_window(&y, Block::D, wide)?;
    let cx = block_window(&x, Block::C, len)?;
    let b = block_window(&y, Block::B, L)?;
    let xy = with_horizon(64, MAX_HORIZON, |u| {
        let xy = x.mul(&y, u)?;
        block_window(&xy, Block::D, L)?;
        Ok(xy)
    })?;
    let dxy = block_window(&xy, Block::D, L)?;
    for i in 0..L {
        for k in 0..L {
            let mut acc = RingElem::zero(r);
            for j in 0..wide {
                dx.matrix[i][j].mul_acc_into(&dy.matrix[j][k], &mut acc);
            }
            for (j, row) in b.matrix.iter().enumerate() {
                cx.matrix[i][j].mul_acc_into(&row[k], &mut acc);
            }
            log.eq(&[("x", &x), ("y", &y), ("row", &i), ("col", &k)], &dxy.matrix[i][k], &acc);
        }
    }
    Ok(())
}

// Lie level

fn lie_pair(ctx: &Ctx, seed: u64) -> Result<(LieElem, LieElem)> {
    let mut s = sampler(&ctx.lie_base, GROUP_BOUNDS, seed)?;
    Ok((s.lie_elem(), s.lie_elem()))
}

fn int(r: &Ring, n: i64) -> RingElem {
    RingElem::from_int(r, n)
}

fn p_lie_det_trace(ctx: &Ctx, seed: u64, log: &mut Log) -> Result<()> {
    let (z, w) = lie_pair(ctx, seed)?;
    log.eq(&[("z", &z), ("w", &w)], &lie_extract(&TwoCocycle::det(), &z, &w)?, &lie_trace(&z, &w)?);
    Ok(())
}

/// The closed forms of the three cup cocycles at Lie level, in order LL, LO, OO.
pub fn cup_closed_forms(z: &LieElem, w: &LieElem) -> Result<[RingElem; 3]> {
    let two = Rational::from_int(2);
    let (s1, s2) = (&z.s, &w.s);
    let (r1, r2) = (z.r.derivative(), w.r.derivative());
    let ll = (s1 * &s2.derivative()).residue()?.scale(&two);
    let lo = (&(s1 * &r2.derivative()) - &(s2 * &r1.derivative())).residue()?;
    let oo = (&r1 * &r2.derivative()).residue()?.scale(&two);
    Ok([ll, lo, oo])
}

fn p_lie_cup_closed_forms(ctx: &Ctx, seed: u64, log: &mut Log) -> Result<()> {
    let (z, w) = lie_pair(ctx, seed)?;
    let forms = cup_closed_forms(&z, &w)?;
    let cups = [(OneTag::Lambda, OneTag::Lambda), (OneTag::Lambda, OneTag::Omega), (OneTag::Omega, OneTag::Omega)];
    for ((a, b), form) in cups.into_iter().zip(forms) {
        let c = TwoCocycle::cup(a, b);
        log.eq(&[("cocycle", &c.tag), ("z", &z), ("w", &w)], &lie_extract(&c, &z, &w)?, &form);
    }
    Ok(())
}

fn p_lie_identity(ctx: &Ctx, seed: u64, log: &mut Log) -> Result<()> {
    let (z, w) = lie_pair(ctx, seed)?;
    let r = &ctx.lie_base;
    let d = lie_extract(&TwoCocycle::det(), &z, &w)?;
    let ll = lie_extract(&TwoCocycle::cup(OneTag::Lambda, OneTag::Lambda), &z, &w)?;
    let lo = lie_extract(&TwoCocycle::cup(OneTag::Lambda, OneTag::Omega), &z, &w)?;
    let oo = lie_extract(&TwoCocycle::cup(OneTag::Omega, OneTag::Omega), &z, &w)?;
    let lhs = &int(r, 12) * &d;
    let rhs = &(&(&int(r, 6) * &ll) - &(&int(r, 6) * &lo)) + &oo;
    log.eq(&[("z", &z), ("w", &w)], &lhs, &rhs);
    Ok(())
}

/// Expected `12 * cocycle` on `(t^n, t^m)`, `(t^n, t^(m+1) d)`, `(t^(n+1) d, t^(m+1) d)`.
pub fn lie_table_values(n: i64, m: i64) -> [i64; 3] {
    if m != -n {
        return [0; 3];
    }
    [12 * m, 6 * (-m - m * m), 2 * (m - m * m * m)]
}

fn p_lie_tables(ctx: &Ctx, _seed: u64, log: &mut Log) -> Result<()> {
    let r = &ctx.lie_base;
    let bound = ctx.cases as i64;
    let n = ctx.index as i64 - bound;
    let det = TwoCocycle::det();
    for m in -bound..=bound {
        let pairs = [(LieElem::e(r, n), LieElem::e(r, m)), (LieElem::e(r, n), LieElem::d(r, m)), (LieElem::d(r, n), LieElem::d(r, m))];
        for ((z, w), expected) in pairs.iter().zip(lie_table_values(n, m)) {
            let expected = int(r, expected);
            let ins: [(&str, &dyn fmt::Display); 2] = [("z", z), ("w", w)];
            log.eq(&ins, &(&int(r, 12) * &lie_trace(z, w)?), &expected);
            log.eq(&ins, &(&int(r, 12) * &lie_extract(&det, z, w)?), &expected);
        }
    }
    Ok(())
}

fn p_gplus_trivial(ctx: &Ctx, seed: u64, log: &mut Log) -> Result<()> {
    let mut s = sampler(&ctx.ring, GROUP_BOUNDS, seed)?;
    let (x, y) = (s.group_elem(Shape::Gplus), s.group_elem(Shape::Gplus));
    let one = RingElem::one(&ctx.ring);
    for c in [TwoCocycle::det(), TwoCocycle::cup(OneTag::Lambda, OneTag::Lambda), TwoCocycle::cup(OneTag::Lambda, OneTag::Omega), TwoCocycle::cup(OneTag::Omega, OneTag::Omega)] {
        log.eq(&[("cocycle", &c.tag), ("x", &x), ("y", &y)], &c.eval(&x, &y)?, &one);
    }
    Ok(())
}

fn p_direct_sum(ctx: &Ctx, seed: u64, log: &mut Log) -> Result<()> {
    const CHECK: i64 = 10;
    let mut s = sampler(&ctx.ring, GROUP_BOUNDS, seed)?;
    let x = s.group_elem(Shape::G0);
    let f = &s.lie_elem().s + &s.unit_series(true).shift(1);
    let (u, v) = solve_direct_sum(&x, &f, 3 * CHECK)?;
    let ins: [(&str, &dyn fmt::Display); 2] = [("x", &x), ("f", &f)];
    log.check(u.is_exact() && u.at_or_above(0).is_exact_zero(), &ins, &u, &"an element of t^-1 A[t^-1]");
    log.check(v.min_deg() >= 0, &ins, &v, &"an element of A[[t]]");
    let residual = at_prec(CHECK, |upto| Ok((&(&f - &u) - &x.act(&v, upto)?).truncate(CHECK)))?;
    log.agree(&[("x", &x), ("f", &f), ("u", &u), ("v", &v)], &residual, &LaurentSeries::zero(&ctx.ring), CHECK);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_consistent() {
        let mut used = std::collections::BTreeSet::new();
        for s in SUITES {
            for p in s.properties {
                assert!(property(p).is_some(), "{p}");
                used.insert(*p);
            }
        }
        for p in REGISTRY {
            assert!(used.contains(p.id), "{} is not run by any suite", p.id);
        }
        let ids: std::collections::BTreeSet<_> = REGISTRY.iter().map(|p| p.id).collect();
        assert_eq!(ids.len(), REGISTRY.len());
    }

    #[test]
    fn lie_base_drops_the_dual_pair() {
        let r = crate::parse::ring("Q[a^3=0, e1^2=0, e2^2=0]").unwrap();
        assert_eq!(lie_base(&r).unwrap().to_string(), "Q[a^3=0]");
        let r = crate::parse::ring("Q[e^2=0]").unwrap();
        assert_eq!(lie_base(&r).unwrap(), r);
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_suite("ring_laws", None, 3, Some(10)).unwrap();
        let b = run_suite("ring_laws", None, 3, Some(10)).unwrap();
        assert!(a.passed(), "{:?}", a.failures);
        assert_eq!(SuiteReport { millis: 0, ..a }, SuiteReport { millis: 0, ..b });
        assert!(matches!(run_suite("nope", None, 0, None), Err(VerifyError::UnknownSuite(_))));
    }
}
