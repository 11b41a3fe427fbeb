//! The pipelines behind each subcommand. Every function returns the text
//! to print, the exit code and whatever file output was requested; none of
//! them print or touch the filesystem.

use std::cmp::Ordering;

use kronecker_core::bounds::{
    bound_set, box_theorem1, compare_bounds, crossover_epsilon, gamma, gamma1, window_theorem1, Part,
};
use kronecker_core::hypothesis::{
    check_theorem1_hypothesis, min_abs_form_over_box, HypothesisCertificate, IntBox, Rigor, SearchConfig,
    Strategy, Verdict,
};
use kronecker_core::real::{exp_scalar, ln_scalar};
use kronecker_core::scalar::{parse_exact, rational_string};
use kronecker_core::transference::{
    build_dual_pair, check_condition, find_bounded_solution, necessity_probe, sufficiency_probe,
    verify_duality_identity, NecessityOutcome, SufficiencyOutcome,
};
use kronecker_core::witness::{
    find_integer_point, find_t, pivot_residual, solve_by_reduction, verify_witness, KroneckerInstance,
};
use kronecker_core::{Error, IntVector, Precision, Real, Scalar};
use kronecker_oracle::{exhaustive_min_oracle, exhaustive_solution_oracle, grid_witness_oracle};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::certificate::{
    decimal_cell, ints, scalars, Certificate, ConditionDto, ConstantsDto, CrossCheckDto,
    IntegerSolutionDto, Params, ProbesDto, ReductionDto, ScalarDto, WitnessDto,
};
use crate::error::{invalid, CliError, CliResult, EXIT_NEGATIVE, EXIT_OK};
use crate::instance::InstanceFile;

pub const DEFAULT_TRIALS: u32 = 200;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TAU_RANGE: &str = "10";

/// What a command produced.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: u8,
    pub text: String,
    pub json: Option<String>,
    pub csv: Option<String>,
}

/// A certificate-producing run.
#[derive(Debug, Clone)]
pub struct Run {
    pub certificate: Certificate,
    pub code: u8,
    pub text: String,
}

impl From<Run> for Outcome {
    fn from(r: Run) -> Self {
        Outcome {
            code: r.code,
            json: Some(r.certificate.to_json()),
            text: r.text,
            csv: None,
        }
    }
}

fn finish(certificate: Certificate, mut text: String) -> Run {
    let code = if certificate.succeeded() { EXIT_OK } else { EXIT_NEGATIVE };
    let s = &certificate.summary;
    match &s.failure_class {
        None => text.push_str("outcome: success\n"),
        Some(c) => text.push_str(&format!("outcome: FAILURE (class: {c})\n")),
    }
    Run {
        certificate,
        code,
        text,
    }
}

fn exact(field: &str, token: &str) -> CliResult<BigRational> {
    parse_exact(token).map_err(|e| invalid(format!("{field}: {e}")))
}

fn real(field: &str, token: &str) -> CliResult<Real> {
    Real::parse(token).map_err(|e| invalid(format!("{field}: {e}")))
}

pub fn parse_strategy(s: Option<&str>) -> CliResult<Strategy> {
    match s.unwrap_or("auto") {
        "auto" => Ok(Strategy::Auto),
        "pruned" => Ok(Strategy::Pruned),
        "mitm" => Ok(Strategy::MeetInTheMiddle),
        other => Err(invalid(format!("unknown strategy {other:?}; use auto, pruned or mitm"))),
    }
}

fn search_config(params: &Params, threads: Option<usize>, start_bits: u32) -> CliResult<SearchConfig> {
    Ok(SearchConfig {
        budget: params.budget,
        threads,
        strategy: parse_strategy(params.strategy.as_deref())?,
        precision: Precision::new(start_bits, params.max_bits),
        float_fallback: params.float_fallback,
    })
}

fn in_pool<T: Send>(threads: Option<usize>, op: impl FnOnce() -> T + Send) -> CliResult<T> {
    match threads {
        None => Ok(op()),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build()
                .map_err(|e| invalid(e.to_string()))?;
            Ok(pool.install(op))
        }
    }
}

fn vector(v: &IntVector) -> String {
    format!("({})", ints(v).join(", "))
}

fn show(s: &Scalar) -> String {
    s.to_string()
}

fn constants(n: usize, eps: &[Scalar], t_star: Option<&Scalar>) -> CliResult<ConstantsDto> {
    let n = n as u32;
    let b = box_theorem1(n, eps)?;
    Ok(ConstantsDto {
        n,
        gamma: rational_string(&gamma(n)?),
        gamma1: rational_string(&gamma1(n, Part::B)?),
        m_star: scalars(&b.m_star),
        t_star: t_star.map(ScalarDto::from),
    })
}

fn describe_hypothesis(h: &HypothesisCertificate) -> String {
    let boxed: Vec<String> = h.int_box.bounds.iter().map(ToString::to_string).collect();
    let rigor = match h.rigor {
        Rigor::Proven => "proven",
        Rigor::FloatOnly => "FLOAT ONLY, not proven",
    };
    format!(
        "box: ({})\ndelta_hat: {}\nminimizer: {}\nthreshold: {}\nhypothesis: {} ({rigor}, {} bits)\n",
        boxed.join(", "),
        show(&h.delta_hat),
        vector(&h.minimizer),
        show(&h.threshold),
        crate::certificate::verdict_name(h.verdict),
        h.precision_bits,
    )
}

fn note_rigor(cert: &mut Certificate, h: &HypothesisCertificate) {
    if h.rigor == Rigor::FloatOnly {
        cert.summary.rigor = "float_only".into();
    }
}

/// Hypothesis over an explicit box instead of `floor(M*)`.
fn hypothesis_on_box(inst: &KroneckerInstance, bounds: &[u64], cfg: &SearchConfig) -> CliResult<HypothesisCertificate> {
    let int_box = IntBox::new(bounds.to_vec());
    let (h, _) = cfg.precision.escalate(|bits| {
        let ev = inst.eval(bits)?;
        let r = min_abs_form_over_box(&ev.lambda, &int_box, cfg)?;
        let (threshold, holds) = match &ev.delta {
            Some(d) => (d.clone(), d.le_proven(&r.value)),
            None => (r.value.clone(), Scalar::zero().lt_proven(&r.value)),
        };
        let holds = holds.ok_or(Error::Undecided("delta_hat against threshold"))?;
        Ok(HypothesisCertificate {
            delta_hat: r.value,
            minimizer: r.minimizer,
            int_box: int_box.clone(),
            verdict: if holds { Verdict::Holds } else { Verdict::Fails },
            threshold,
            rigor: Rigor::Proven,
            precision_bits: bits,
        })
    })?;
    Ok(h)
}

fn run_hypothesis(inst: &KroneckerInstance, params: &Params, threads: Option<usize>) -> CliResult<HypothesisCertificate> {
    let cfg = search_config(params, threads, inst.precision_bits)?;
    match &params.int_box {
        Some(b) => {
            if b.len() != inst.n() {
                return Err(invalid(format!("--box has {} entries, expected {}", b.len(), inst.n())));
            }
            hypothesis_on_box(inst, b, &cfg)
        }
        None => {
            if inst.n() < 2 {
                return Err(invalid("the theorem box needs N >= 2; pass --box for N = 1"));
            }
            Ok(check_theorem1_hypothesis(inst, &cfg)?)
        }
    }
}

pub fn hypothesis(file: &InstanceFile, params: &Params, threads: Option<usize>) -> CliResult<Run> {
    let inst = file.kronecker()?;
    let mut cert = Certificate::new("hypothesis", params.clone(), file.clone());
    let h = run_hypothesis(&inst, params, threads)?;
    if inst.n() >= 2 {
        let ev = inst.eval(h.precision_bits)?;
        let t_star = match h.verdict {
            Verdict::Holds => Some(window_theorem1(inst.n() as u32, &h.threshold)?),
            _ => None,
        };
        cert.constants = Some(constants(inst.n(), &ev.eps, t_star.as_ref())?);
    }
    let text = describe_hypothesis(&h);
    cert.hypothesis = Some((&h).into());
    note_rigor(&mut cert, &h);
    if h.verdict != Verdict::Holds {
        cert.fail("hypothesis");
    }
    Ok(finish(cert, text))
}

fn window_trial(inst: &KroneckerInstance, tau: &BigRational, len: &Scalar, precision: &Precision) -> CliResult<WitnessDto> {
    let mut local = inst.clone();
    local.tau = Real::exact(tau.clone());
    let tau_s = Scalar::Exact(tau.clone());
    let Some(w) = find_t(&local, len, precision)? else {
        return Ok(WitnessDto {
            tau: (&tau_s).into(),
            t: None,
            residuals: Vec::new(),
            in_window: false,
            verified: false,
            precision_bits: None,
        });
    };
    let (res, ok) = verify_witness(&local, &w.t, precision)?;
    let end = tau + len.lower();
    let in_window = w.t.lower() >= tau && w.t.upper() <= &end;
    Ok(WitnessDto {
        tau: (&tau_s).into(),
        t: Some((&w.t).into()),
        residuals: scalars(&res),
        in_window,
        verified: ok,
        precision_bits: Some(w.precision_bits),
    })
}

/// `count` values `tau_k = (u_k / 2^53) range`, with `u_k` the top 53 bits
/// of successive `u64` draws from ChaCha8 seeded by `seed`.
pub fn sample_taus(seed: u64, count: u32, range: &BigRational) -> Vec<BigRational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = BigRational::from_integer(BigInt::one() << 53u32);
    (0..count)
        .map(|_| {
            let u = rng.gen::<u64>() >> 11;
            BigRational::from_integer(BigInt::from(u)) / &scale * range
        })
        .collect()
}

pub fn verify_theorem1(file: &InstanceFile, params: &Params, threads: Option<usize>) -> CliResult<Run> {
    let inst = file.kronecker()?;
    let n = inst.n();
    if n < 2 {
        return Err(invalid("the theorem needs N >= 2"));
    }
    let trials = params.trials.unwrap_or(DEFAULT_TRIALS);
    let seed = params.seed.unwrap_or(DEFAULT_SEED);
    let factor = exact("tau range", params.tau_range.as_deref().unwrap_or(DEFAULT_TAU_RANGE))?;
    if factor.is_negative() {
        return Err(invalid("tau range factor must be non-negative"));
    }
    let mut cert = Certificate::new("verify-theorem1", params.clone(), file.clone());
    let h = run_hypothesis(&inst, params, threads)?;
    let mut text = describe_hypothesis(&h);
    cert.hypothesis = Some((&h).into());
    note_rigor(&mut cert, &h);
    let ev = inst.eval(h.precision_bits)?;
    if h.verdict != Verdict::Holds {
        cert.constants = Some(constants(n, &ev.eps, None)?);
        cert.fail("hypothesis");
        text.push_str("hypothesis does not hold; pipeline stopped\n");
        return Ok(finish(cert, text));
    }
    let t_star = window_theorem1(n as u32, &h.threshold)?;
    cert.constants = Some(constants(n, &ev.eps, Some(&t_star))?);
    text.push_str(&format!("T*: {}\n", show(&t_star)));
    let range = factor * t_star.lower();
    let taus = sample_taus(seed, trials, &range);
    let precision = Precision::new(inst.precision_bits, params.max_bits);
    let results: Vec<CliResult<WitnessDto>> = in_pool(threads, || {
        taus.par_iter()
            .map(|tau| window_trial(&inst, tau, &t_star, &precision))
            .collect()
    })?;
    let witnesses = results.into_iter().collect::<CliResult<Vec<_>>>()?;
    let failures = witnesses.iter().filter(|w| !(w.verified && w.in_window)).count() as u32;
    text.push_str(&format!(
        "trials: {trials} (seed {seed}, tau uniform in [0, {}])\nfailures: {failures}\n",
        decimal_cell(&range, 8)
    ));
    cert.witnesses = witnesses;
    cert.summary.trials = Some(trials);
    cert.summary.failures = Some(failures);
    if failures > 0 {
        cert.fail("witness");
        text.push_str(
            "!!! a window of length T* had no verified witness although the hypothesis holds.\n\
             !!! this is either a bug or a counterexample to the theorem; keep the certificate.\n",
        );
    }
    Ok(finish(cert, text))
}

fn witness_dto(tau: &Scalar, t: Option<&Scalar>, residuals: &[Scalar], in_window: bool, verified: bool) -> WitnessDto {
    WitnessDto {
        tau: tau.into(),
        t: t.map(ScalarDto::from),
        residuals: scalars(residuals),
        in_window,
        verified,
        precision_bits: None,
    }
}

fn kronecker_witness(file: &InstanceFile, params: &Params, threads: Option<usize>) -> CliResult<Run> {
    let inst = file.kronecker()?;
    let n = inst.n();
    let precision = Precision::new(inst.precision_bits, params.max_bits);
    let mut cert = Certificate::new("witness", params.clone(), file.clone());
    let mut text = String::new();
    if params.reduce && params.window.is_some() {
        return Err(invalid("--reduce uses the theorem window; drop --window"));
    }
    let len = match &params.window {
        Some(w) => real("window", w)?.eval(inst.precision_bits),
        None => {
            let h = run_hypothesis(&inst, params, threads)?;
            text.push_str(&describe_hypothesis(&h));
            cert.hypothesis = Some((&h).into());
            note_rigor(&mut cert, &h);
            if h.verdict != Verdict::Holds {
                cert.fail("hypothesis");
                return Ok(finish(cert, text));
            }
            window_theorem1(n as u32, &h.threshold)?
        }
    };
    if len.signum_proven() != Some(Ordering::Greater) && !len.is_zero_exact() {
        return Err(invalid("window length must be non-negative"));
    }
    let tau = inst.eval(inst.precision_bits)?.tau;
    if params.reduce {
        let h = cert.hypothesis.clone().expect("set above");
        let delta = match &inst.delta {
            Some(d) => d.clone(),
            None => {
                let lo = h.delta_hat.lo.or(h.delta_hat.exact).expect("delta_hat has a value");
                Real::exact(exact("delta_hat", &lo)?)
            }
        };
        let (rec, sol) = solve_by_reduction(&inst, &delta, params.budget, &precision)?;
        let t_star = window_theorem1(n as u32, &delta.eval(inst.precision_bits))?;
        let mut dto = ReductionDto {
            pivot: rec.pivot,
            theta: scalars(&rec.theta),
            beta: scalars(&rec.beta),
            gamma1: rational_string(&rec.gamma1),
            delta0: (&rec.delta0).into(),
            t1: (&rec.t1).into(),
            tau_prime: (&rec.tau_prime).into(),
            shift: ints(&rec.shift),
            q: None,
            pivot_residual: None,
        };
        text.push_str(&format!("reduction pivot: coordinate {}\n", rec.pivot + 1));
        match sol {
            None => {
                cert.witnesses.push(witness_dto(&tau, None, &[], false, false));
                cert.fail("witness");
                text.push_str("the reduced integer problem has no solution\n");
            }
            Some((q, t)) => {
                let (res, ok) = verify_witness(&inst, &t, &precision)?;
                let in_window = t.lower() >= tau.upper() && t.upper() <= &(tau.lower() + t_star.lower());
                dto.q = Some(q.to_string());
                dto.pivot_residual = Some((&pivot_residual(&rec, &t)).into());
                text.push_str(&format!("q: {q}\nt: {}\nverified: {ok}, in window: {in_window}\n", show(&t)));
                cert.witnesses.push(witness_dto(&tau, Some(&t), &res, in_window, ok));
                if !(ok && in_window) {
                    cert.fail("witness");
                }
            }
        }
        cert.reduction = Some(dto);
        return Ok(finish(cert, text));
    }
    let tau_exact = match &tau {
        Scalar::Exact(r) => r.clone(),
        Scalar::Enclosure(_) => {
            // irrational tau: search from the instance directly
            let found = find_t(&inst, &len, &precision)?;
            return Ok(record_found(cert, text, &inst, found.map(|w| w.t), &tau, &len, &precision)?);
        }
    };
    let dto = window_trial(&inst, &tau_exact, &len, &precision)?;
    text.push_str(&match &dto.t {
        Some(t) => format!("t: {}\nverified: {}\n", t.approx, dto.verified),
        None => format!("no t in [tau, tau + {}]\n", show(&len)),
    });
    if !(dto.verified && dto.in_window) {
        cert.fail("witness");
    }
    cert.witnesses.push(dto);
    Ok(finish(cert, text))
}

fn record_found(
    mut cert: Certificate,
    mut text: String,
    inst: &KroneckerInstance,
    t: Option<Scalar>,
    tau: &Scalar,
    len: &Scalar,
    precision: &Precision,
) -> CliResult<Run> {
    match t {
        None => {
            text.push_str(&format!("no t in [tau, tau + {}]\n", show(len)));
            cert.witnesses.push(witness_dto(tau, None, &[], false, false));
            cert.fail("witness");
        }
        Some(t) => {
            let (res, ok) = verify_witness(inst, &t, precision)?;
            let in_window = t.lower() >= tau.upper() && t.upper() <= &(tau.lower() + len.lower());
            text.push_str(&format!("t: {}\nverified: {ok}\n", show(&t)));
            cert.witnesses.push(witness_dto(tau, Some(&t), &res, in_window, ok));
            if !(ok && in_window) {
                cert.fail("witness");
            }
        }
    }
    Ok(finish(cert, text))
}

fn linear_witness(file: &InstanceFile, params: &Params) -> CliResult<Run> {
    let l = file.linear()?;
    let mut cert = Certificate::new("witness", params.clone(), file.clone());
    let solution = match (&l.window, &l.x) {
        (Some((tau, len)), _) => find_integer_point(&l.sys, &l.alpha, &l.eps, tau, len, params.budget)?,
        (None, Some(x)) => find_bounded_solution(&l.sys, &l.alpha, &l.eps, x, params.budget)?,
        (None, None) => unreachable!("validated at load"),
    };
    let text = match &solution {
        Some(q) => format!("integer solution: {}\n", vector(q)),
        None => "no integer solution in the box\n".to_string(),
    };
    if solution.is_none() {
        cert.fail("witness");
    }
    cert.integer_solution = Some(IntegerSolutionDto {
        solution: solution.as_ref().map(ints),
    });
    Ok(finish(cert, text))
}

pub fn witness(file: &InstanceFile, params: &Params, threads: Option<usize>) -> CliResult<Run> {
    match file {
        InstanceFile::Kronecker(_) => kronecker_witness(file, params, threads),
        InstanceFile::LinearSystem(_) => linear_witness(file, params),
    }
}

fn parse_gamma1(token: Option<&str>, d: u32) -> CliResult<BigRational> {
    match token.unwrap_or("b") {
        "a" | "A" => Ok(gamma1(d, Part::A)?),
        "b" | "B" => Ok(gamma1(d, Part::B)?),
        other => {
            let g = exact("gamma1", other)?;
            if !g.is_positive() {
                return Err(invalid("gamma1 must be positive"));
            }
            Ok(g)
        }
    }
}

pub fn transference(file: &InstanceFile, params: &Params, threads: Option<usize>) -> CliResult<Run> {
    let l = file.linear()?;
    let x = l.x.as_ref().ok_or_else(|| invalid("transference needs X"))?;
    let mut cert = Certificate::new("transference", params.clone(), file.clone());
    let pair = build_dual_pair(&l.sys, &l.eps, x)?;
    let identity = verify_duality_identity(&pair);
    let g1 = parse_gamma1(params.gamma1.as_deref(), l.sys.d() as u32)?;
    let report = check_condition(&l.sys, &l.alpha, &l.eps, x, &g1, params.budget, threads)?;
    let mut text = format!(
        "duality identity: {}\ngamma1: {}\ncutoff box: {:?}\ncondition: {}\n",
        if identity { "exact" } else { "BROKEN" },
        rational_string(&g1),
        report.checked_box.bounds,
        if report.holds { "holds" } else { "fails" },
    );
    if let Some(v) = &report.violator {
        text.push_str(&format!("first violator u: {}\n", vector(v)));
    }
    cert.condition = Some(ConditionDto::new(identity, &report));
    if !identity {
        cert.fail("duality");
    } else if !report.holds {
        cert.fail("condition");
    }
    if params.probes {
        let nec = necessity_probe(&l.sys, &l.alpha, &l.eps, x, params.budget)?;
        let suf = sufficiency_probe(&l.sys, &l.alpha, &l.eps, x, params.budget)?;
        let mut probes = ProbesDto {
            necessity: String::new(),
            sufficiency: String::new(),
            solution: None,
            violator: None,
        };
        let mut counterexample = false;
        probes.necessity = match nec {
            NecessityOutcome::SolutionAndConditionHold { solution } => {
                probes.solution = Some(ints(&solution));
                "solution_and_condition_hold".into()
            }
            NecessityOutcome::NoSolution => "no_solution".into(),
            NecessityOutcome::CounterexampleToPartA { solution, violator } => {
                counterexample = true;
                probes.solution = Some(ints(&solution));
                probes.violator = Some(ints(&violator));
                "COUNTEREXAMPLE_to_necessity".into()
            }
        };
        probes.sufficiency = match suf {
            SufficiencyOutcome::ConditionFails { violator } => {
                probes.violator.get_or_insert(ints(&violator));
                "condition_fails".into()
            }
            SufficiencyOutcome::ConditionHoldsSolutionFound { solution } => {
                probes.solution.get_or_insert(ints(&solution));
                "condition_holds_solution_found".into()
            }
            SufficiencyOutcome::CounterexampleToPartB => {
                counterexample = true;
                "COUNTEREXAMPLE_to_sufficiency".into()
            }
        };
        text.push_str(&format!(
            "necessity probe: {}\nsufficiency probe: {}\n",
            probes.necessity, probes.sufficiency
        ));
        cert.probes = Some(probes);
        if counterexample {
            cert.fail("counterexample");
        }
    }
    Ok(finish(cert, text))
}

fn agree(cert: &mut Certificate, text: &mut String, name: &str, core: String, oracle: String, ok: bool) {
    text.push_str(&format!(
        "{name}: core {core} | oracle {oracle} -> {}\n",
        if ok { "agree" } else { "DISAGREE" }
    ));
    cert.cross_checks.push(CrossCheckDto {
        name: name.into(),
        core,
        oracle,
        agree: ok,
    });
}

pub fn cross_check(file: &InstanceFile, params: &Params, threads: Option<usize>) -> CliResult<Run> {
    let mut cert = Certificate::new("cross-check", params.clone(), file.clone());
    let mut text = String::new();
    match file {
        InstanceFile::Kronecker(_) => {
            let inst = file.kronecker()?;
            let ev = inst.eval(inst.precision_bits)?;
            let bounds: Vec<u64> = match &params.int_box {
                Some(b) => b.clone(),
                None if inst.n() >= 2 => IntBox::from_bigints(&box_theorem1(inst.n() as u32, &ev.eps)?.floor)?.bounds,
                None => return Err(invalid("pass --box for N = 1")),
            };
            if bounds.len() != inst.n() {
                return Err(invalid("--box has the wrong length"));
            }
            let cfg = search_config(params, threads, inst.precision_bits)?;
            let core = min_abs_form_over_box(&ev.lambda, &IntBox::new(bounds.clone()), &cfg)?;
            let (ov, om) = exhaustive_min_oracle(&ev.lambda, &bounds)?;
            let ok = core.value == ov && core.minimizer == om;
            agree(
                &mut cert,
                &mut text,
                "minimum",
                format!("{} at {}", show(&core.value), vector(&core.minimizer)),
                format!("{} at {}", show(&ov), vector(&om)),
                ok,
            );
            match &ev.tau {
                Scalar::Exact(_) => {
                    let len = exact("window", params.window.as_deref().unwrap_or("1"))?;
                    let step = exact("step", params.step.as_deref().unwrap_or("1/4096"))?;
                    if !step.is_positive() || len.is_negative() {
                        return Err(invalid("need step > 0 and window >= 0"));
                    }
                    let precision = Precision::new(inst.precision_bits, params.max_bits);
                    let sweep = find_t(&inst, &Scalar::Exact(len.clone()), &precision)?;
                    let grid = grid_witness_oracle(&inst, &len, &step)?;
                    let sweep_ok = match &sweep {
                        Some(w) => verify_witness(&inst, &w.t, &precision)?.1,
                        None => true,
                    };
                    let ok = sweep_ok && (grid.is_none() || sweep.is_some());
                    let name = |o: Option<&Scalar>| o.map_or("none".to_string(), show);
                    agree(
                        &mut cert,
                        &mut text,
                        "witness",
                        name(sweep.as_ref().map(|w| &w.t)),
                        name(grid.as_ref()),
                        ok,
                    );
                }
                Scalar::Enclosure(_) => text.push_str("witness: skipped, the grid oracle needs an exact tau\n"),
            }
        }
        InstanceFile::LinearSystem(_) => {
            let l = file.linear()?;
            let x = l.x.as_ref().ok_or_else(|| invalid("cross-check needs X"))?;
            let core = find_bounded_solution(&l.sys, &l.alpha, &l.eps, x, params.budget)?;
            let oracle = exhaustive_solution_oracle(&l.sys, &l.alpha, &l.eps, x, params.budget)?;
            let name = |o: &Option<IntVector>| o.as_ref().map_or("none".to_string(), vector);
            agree(&mut cert, &mut text, "bounded solution", name(&core), name(&oracle), core == oracle);
        }
    }
    if cert.cross_checks.iter().any(|c| !c.agree) {
        cert.fail("disagreement");
    }
    Ok(finish(cert, text))
}

/// Runs an instance command by name.
pub fn execute(command: &str, file: &InstanceFile, params: &Params, threads: Option<usize>) -> CliResult<Run> {
    match command {
        "verify-theorem1" => verify_theorem1(file, params, threads),
        "hypothesis" => hypothesis(file, params, threads),
        "witness" => witness(file, params, threads),
        "transference" => transference(file, params, threads),
        "cross-check" => cross_check(file, params, threads),
        other => Err(invalid(format!("certificates of {other:?} cannot be re-run"))),
    }
}

/// Re-runs the command recorded in a certificate and compares everything
/// but the timestamp.
pub fn verify_certificate(cert: &Certificate, threads: Option<usize>) -> CliResult<Outcome> {
    cert.instance.validate()?;
    let rerun = execute(&cert.command, &cert.instance, &cert.params, threads)?;
    let same = rerun.certificate.comparable() == cert.comparable();
    let mut text = format!("re-ran {}\n", cert.command);
    if same {
        text.push_str("all verdicts reproduced\n");
    } else {
        let a = serde_json::to_value(cert)?;
        let b = serde_json::to_value(&rerun.certificate)?;
        let keys: Vec<&String> = a
            .as_object()
            .into_iter()
            .flat_map(|m| m.keys())
            .filter(|k| *k != "wall_clock" && a.get(*k) != b.get(*k))
            .collect();
        text.push_str(&format!("MISMATCH in: {keys:?}\n"));
    }
    Ok(Outcome {
        code: if same { EXIT_OK } else { EXIT_NEGATIVE },
        text,
        json: None,
        csv: None,
    })
}

#[derive(Debug, Serialize)]
struct BoundsReport {
    n: u32,
    eps: Vec<ScalarDto>,
    gamma: String,
    gamma1_a: String,
    gamma1_b: String,
    m_star: Vec<ScalarDto>,
    m_star_floor: Vec<String>,
    m_gm: Vec<String>,
    m_cor: Vec<ScalarDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t_star: Option<ScalarDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t_gm: Option<ScalarDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t_cor: Option<ScalarDto>,
    eps0: ScalarDto,
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

pub fn bounds(n: u32, eps: &[String], delta: Option<&str>, bits: u32, max_bits: u32) -> CliResult<Outcome> {
    if n < 2 {
        return Err(invalid("N must be at least 2"));
    }
    if eps.len() != n as usize {
        return Err(invalid(format!("--eps has {} values, expected {n}", eps.len())));
    }
    let eps: Vec<Scalar> = eps
        .iter()
        .map(|e| real("eps", e).map(|r| r.eval(bits)))
        .collect::<CliResult<_>>()?;
    let delta = match delta {
        Some(d) => Some(real("delta", d)?.eval(bits)),
        None => None,
    };
    let precision = Precision::new(bits, max_bits);
    let b = bound_set(n, &eps, delta.as_ref(), &precision).map_err(domain_as_invalid)?;
    let eps0 = crossover_epsilon(n, bits)?;
    let opt = |s: &Option<Scalar>| s.as_ref().map_or("-".to_string(), show);
    let text = format!(
        "N: {n}\ngamma: {}\ngamma1 (necessity): {}\ngamma1 (sufficiency): {}\nM*: ({})\nfloor(M*): ({})\n\
         M_gm: ({})\nM_cor: ({})\nT*: {}\nT_gm: {}\nT_cor: {}\neps_0: {}\n",
        rational_string(&b.gamma),
        rational_string(&b.gamma1_a),
        rational_string(&b.gamma1_b),
        join(&b.m_star),
        join(&b.m_star_floor),
        join(&b.m_gm),
        join(&b.m_cor),
        opt(&b.t_star),
        opt(&b.t_gm),
        opt(&b.t_cor),
        show(&eps0),
    );
    let report = BoundsReport {
        n,
        eps: scalars(&eps),
        gamma: rational_string(&b.gamma),
        gamma1_a: rational_string(&b.gamma1_a),
        gamma1_b: rational_string(&b.gamma1_b),
        m_star: scalars(&b.m_star),
        m_star_floor: b.m_star_floor.iter().map(ToString::to_string).collect(),
        m_gm: b.m_gm.iter().map(ToString::to_string).collect(),
        m_cor: scalars(&b.m_cor),
        t_star: b.t_star.as_ref().map(ScalarDto::from),
        t_gm: b.t_gm.as_ref().map(ScalarDto::from),
        t_cor: b.t_cor.as_ref().map(ScalarDto::from),
        eps0: (&eps0).into(),
    };
    Ok(Outcome {
        code: EXIT_OK,
        text,
        json: Some(serde_json::to_string_pretty(&report)?),
        csv: None,
    })
}

fn domain_as_invalid(e: Error) -> CliError {
    match e {
        Error::Domain(_) | Error::EpsilonOutOfRange { .. } | Error::DimensionMismatch { .. } => invalid(e.to_string()),
        other => CliError::Core(other),
    }
}

/// Parses `lo:hi:geometric:k` or `lo:hi:linear:k`. Interior geometric
/// points are rounded to 12 significant digits so every grid value is an
/// exact decimal.
pub fn parse_grid(spec: &str) -> CliResult<Vec<Scalar>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, kind, k] = parts[..] else {
        return Err(invalid("grid must look like lo:hi:geometric:k"));
    };
    let lo = exact("grid lo", lo)?;
    let hi = exact("grid hi", hi)?;
    let k: usize = k.parse().map_err(|_| invalid("grid count must be a positive integer"))?;
    if k == 0 || !lo.is_positive() || hi < lo {
        return Err(invalid("grid needs 0 < lo <= hi and k >= 1"));
    }
    if k == 1 {
        return Ok(vec![Scalar::Exact(lo)]);
    }
    let steps = BigRational::from_integer(BigInt::from(k - 1));
    let bits = 256;
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let f = BigRational::from_integer(BigInt::from(i)) / &steps;
        let v = if i == 0 {
            lo.clone()
        } else if i == k - 1 {
            hi.clone()
        } else {
            match kind {
                "linear" => &lo + (&hi - &lo) * f,
                "geometric" => {
                    let ln = ln_scalar(&Scalar::Exact(&hi / &lo), bits)?;
                    let g = exp_scalar(&(ln * Scalar::Exact(f)), bits) * Scalar::Exact(lo.clone());
                    parse_exact(&decimal_cell(&g.midpoint(), 12))?
                }
                other => return Err(invalid(format!("unknown grid spacing {other:?}"))),
            }
        };
        out.push(Scalar::Exact(v));
    }
    if kind != "linear" && kind != "geometric" {
        return Err(invalid(format!("unknown grid spacing {kind:?}")));
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
struct ComparisonReport {
    n: u32,
    eps0: ScalarDto,
    rows: Vec<ComparisonRowDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    flip_between: Option<(String, String)>,
}

#[derive(Debug, Serialize)]
struct ComparisonRowDto {
    eps: String,
    m_star: ScalarDto,
    m_gm: String,
    star_is_smaller: bool,
}

/// Rows of the theorem-vs-GM box comparison and the first pair of
/// neighbouring grid values where the answer flips.
pub fn compare_gm(n: u32, grid: &str, bits: u32, max_bits: u32) -> CliResult<Outcome> {
    if n < 2 {
        return Err(invalid("N must be at least 2"));
    }
    let grid = parse_grid(grid)?;
    let rows = compare_bounds(n, &grid, &Precision::new(bits, max_bits)).map_err(domain_as_invalid)?;
    let eps0 = crossover_epsilon(n, bits)?;
    let cell = |s: &Scalar| decimal_cell(&s.midpoint(), 20);
    let mut csv = String::from("eps,M_star,M_gm,star_is_smaller\n");
    let mut text = format!("eps_0 = N exp(-1/gamma) = {}\n{:>16} {:>24} {:>12}  smaller\n", show(&eps0), "eps", "M*", "M_gm");
    for r in &rows {
        csv.push_str(&format!("{},{},{},{}\n", cell(&r.eps), cell(&r.m_star), r.m_gm, r.star_is_smaller));
        text.push_str(&format!(
            "{:>16} {:>24} {:>12}  {}\n",
            cell(&r.eps),
            decimal_cell(&r.m_star.midpoint(), 12),
            r.m_gm,
            if r.star_is_smaller { "M*" } else { "M_gm" }
        ));
    }
    let flip = rows
        .windows(2)
        .find(|w| w[0].star_is_smaller != w[1].star_is_smaller)
        .map(|w| (cell(&w[0].eps), cell(&w[1].eps)));
    match &flip {
        Some((a, b)) => text.push_str(&format!("flip between eps = {a} and eps = {b}\n")),
        None => text.push_str("no flip on this grid\n"),
    }
    let report = ComparisonReport {
        n,
        eps0: (&eps0).into(),
        rows: rows
            .iter()
            .map(|r| ComparisonRowDto {
                eps: cell(&r.eps),
                m_star: (&r.m_star).into(),
                m_gm: r.m_gm.to_string(),
                star_is_smaller: r.star_is_smaller,
            })
            .collect(),
        flip_between: flip,
    };
    Ok(Outcome {
        code: EXIT_OK,
        text,
        json: Some(serde_json::to_string_pretty(&report)?),
        csv: Some(csv),
    })
}
