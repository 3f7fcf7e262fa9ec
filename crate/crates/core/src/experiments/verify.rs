//! The acceptance sweep behind `circlab verify`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::combinatorics::{
    card_a2ps, count, count_b_pl, h_pk, EnumerationCaps, Family,
};
use crate::combinatorics::exact::to_f64;
use crate::ensemble::brownian::sample_with;
use crate::ensemble::rng::GaussianStream;
use crate::ensemble::{build_circulant, spectrum, trace_power, CirculantSample, TimeGrid, TraceMethod};
use crate::error::Result;
use crate::fluctuations::{
    rc_odd_collapse, rc_odd_statistic, reduced_trace, statistic, CenteringMode, TraceBatch,
};
use crate::limit_theory::{
    exact_finite_n_cov, oracle_limit, sc_limit_cov, CovQuery, TheoryMode,
};
use crate::MatrixKind;

use super::config::ExperimentConfig;
use super::covariance::{run_covariance_experiment, theory_cov, CovarianceReport};
use super::joint::run_joint_moment_experiment;
use super::odd::{run_odd_statistic_experiment, OddConfig};
use super::simulate::replicate;
use super::tightness::{run_tightness_diagnostic, TightnessConfig};
use super::stats::Verdict;

/// Sizes used by the sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyScale {
    pub n: usize,
    pub replicas: usize,
    pub tightness_n: usize,
    pub joint3_n: usize,
    pub odd_n: usize,
    pub seed: u64,
    pub workers: usize,
}

impl VerifyScale {
    /// The documented acceptance scale.
    pub fn desk() -> Self {
        VerifyScale {
            n: 512,
            replicas: 20_000,
            tightness_n: 256,
            joint3_n: 8192,
            odd_n: 501,
            seed: 20_240_601,
            workers: 0,
        }
    }

    /// A fast smoke scale; Monte Carlo verdicts are much weaker here.
    pub fn quick() -> Self {
        VerifyScale {
            n: 64,
            replicas: 2_000,
            tightness_n: 64,
            joint3_n: 256,
            odd_n: 65,
            seed: 20_240_601,
            workers: 0,
        }
    }
}

/// One line of the sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub criterion: u32,
    pub name: String,
    pub verdict: Verdict,
    pub detail: String,
}

/// A paper-literal value reported next to its reference, never judged.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Discrepancy {
    pub quantity: String,
    pub paper_literal: f64,
    pub reconciled: f64,
    pub oracle: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub scale: VerifyScale,
    pub checks: Vec<Check>,
    pub covariances: Vec<CovarianceReport>,
    pub discrepancies: Vec<Discrepancy>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.verdict != Verdict::Fail)
    }
}

fn pass_if(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

struct Sweep {
    scale: VerifyScale,
    checks: Vec<Check>,
    covariances: Vec<CovarianceReport>,
}

impl Sweep {
    fn push(&mut self, criterion: u32, name: &str, verdict: Verdict, detail: String) {
        self.checks.push(Check {
            criterion,
            name: name.into(),
            verdict,
            detail,
        });
    }

    fn cfg(&self, kind: MatrixKind, orders: Vec<u32>, times: Vec<f64>) -> ExperimentConfig {
        ExperimentConfig {
            n: self.scale.n,
            replicas: self.scale.replicas,
            seed: self.scale.seed,
            workers: self.scale.workers,
            ..ExperimentConfig::new(kind, orders, times)
        }
    }

    fn covariance(&mut self, criterion: u32, name: &str, cfg: ExperimentConfig) -> Result<()> {
        let rep = run_covariance_experiment(&cfg)?;
        let detail = format!(
            "n={} empirical={} se={} reference={:?}",
            rep.n, rep.empirical, rep.se, rep.theory_reconciled.or(rep.oracle)
        );
        self.push(criterion, name, rep.verdict, detail);
        self.covariances.push(rep);
        Ok(())
    }
}

/// Runs every acceptance criterion at the given scale.
pub fn run_verify(scale: VerifyScale) -> Result<VerifyReport> {
    let mut sw = Sweep {
        scale,
        checks: Vec::new(),
        covariances: Vec::new(),
    };
    let caps = EnumerationCaps::default();

    // 1
    let mut bad = 0;
    for n in 1..=8u32 {
        for p in 1..=3u64 {
            let pi = p as i64;
            for s in -(pi - 1)..=(pi - 1) {
                let e = count(Family::A2ps { s }, n, 2 * p as usize, &caps)?;
                if card_a2ps(n as u64, p, s)? != BigInt::from(e) {
                    bad += 1;
                }
            }
        }
    }
    let c44 = card_a2ps(4, 2, 0)?;
    let c10 = card_a2ps(4, 2, 1)?;
    sw.push(
        1,
        "card_A2ps equals enumeration",
        pass_if(bad == 0 && c44 == BigInt::from(44) && c10 == BigInt::from(10)),
        format!("mismatches={bad} (4,2,0)->{c44} (4,2,1)->{c10}"),
    );

    // 2
    let mut worst = 0.0f64;
    let mut ok = true;
    for n in [50u32, 100, 200] {
        for p in 2..=4u32 {
            for k in 0..=p {
                let c = count(Family::Apk { k: k as usize }, n, p as usize, &caps)?;
                let ratio = c as f64 / (n as f64).powi(p as i32 - 1);
                let gap = (ratio - to_f64(&h_pk(p, k)?)).abs();
                worst = worst.max(gap * n as f64);
                ok &= gap <= 3.0 / n as f64;
            }
        }
    }
    sw.push(2, "h_p(k) within 3/n of counts", pass_if(ok), format!("max n*gap={worst}"));
    let rat = |a: i64, b: i64| BigRational::new(a.into(), b.into());
    let h21 = h_pk(2, 1)?;
    let h20 = h_pk(2, 0)?;
    sw.push(
        2,
        "h_2(1)=1/2 and h_2(0)=0",
        pass_if(h21 == rat(1, 2) && h20 == rat(0, 1)),
        format!("h_2(1)={h21} h_2(0)={h20}"),
    );
    let h42 = h_pk(4, 2)?;
    sw.push(
        2,
        "h_4(2)=4/3",
        pass_if(h42 == rat(4, 3)),
        format!("h_4(2)={h42}"),
    );

    // 3 and 4
    let (worst3, ok3) = trace_cross_validation(scale.seed)?;
    sw.push(3, "trace methods agree", pass_if(ok3), format!("max rel diff={worst3}"));
    let (pair, collapse) = rc_identities(scale.seed)?;
    sw.push(
        4,
        "RC spectral identities",
        pass_if(pair <= 1e-12 && collapse <= 1e-8),
        format!("max |l_k + l_(n-k)|={pair} max collapse rel diff={collapse}"),
    );

    // 5
    let rc = MatrixKind::Rc;
    sw.covariance(5, "RC Cov(w_1(1), w_1(1)) = 2", sw.cfg(rc, vec![1], vec![1.0, 1.0]))?;
    sw.covariance(5, "RC Cov(w_1(0.5), w_1(1)) = 0.5", sw.cfg(rc, vec![1], vec![0.5, 1.0]))?;
    let mut worst5 = 0.0f64;
    for n in 2..=12u32 {
        for (t1, t2) in [(1.0, 1.0), (0.5, 1.0), (0.3, 2.0)] {
            let v = exact_finite_n_cov(rc, 1, 1, t1, t2, n)?;
            worst5 = worst5.max((v - 2.0 * t1 * t1).abs());
        }
    }
    sw.push(5, "oracle RC(1,1) = 2 t1^2 at every n", pass_if(worst5 <= 1e-12), format!("max err={worst5}"));

    // 6
    let sc = MatrixKind::Sc;
    sw.covariance(6, "SC Var(eta_2(1)) = 4", sw.cfg(sc, vec![2], vec![1.0, 1.0]))?;
    let odd_n = scale.n - 1 + scale.n % 2;
    sw.covariance(
        6,
        "SC Var(eta_2(1)) = 4, odd n",
        ExperimentConfig { n: odd_n, ..sw.cfg(sc, vec![2], vec![1.0, 1.0]) },
    )?;
    let (seq, ex) = oracle_limit(sc, 2, 2, 1.0, 1.0)?;
    let rel = (ex.limit - 4.0).abs() / 4.0;
    sw.push(
        6,
        "SC oracle extrapolates to 4 t^2",
        pass_if(rel <= 0.01 && (seq[0].1 - 3.6).abs() <= 1e-12),
        format!("sequence={seq:?} limit={}", ex.limit),
    );

    // 7
    sw.covariance(7, "SC Cov(eta_2(1), eta_3(1)) = 0", sw.cfg(sc, vec![2, 3], vec![1.0]))?;
    let mut nonzero = 0;
    for (p, q) in [(2, 3), (3, 2), (2, 5), (3, 4), (4, 5)] {
        for mode in [TheoryMode::PaperLiteral, TheoryMode::Reconciled] {
            if sc_limit_cov(&CovQuery::new(sc, p, q, 0.5, 1.0)?, mode)? != 0.0 {
                nonzero += 1;
            }
        }
    }
    sw.push(7, "mixed-parity SC limit is exactly 0", pass_if(nonzero == 0), format!("nonzero={nonzero}"));

    // 8
    let mism = eta1_identity(scale)?;
    sw.push(8, "eta_1 bit-equals b_0", pass_if(mism == 0), format!("mismatches={mism}"));

    // 9
    let j3 = run_joint_moment_experiment(&ExperimentConfig {
        n: scale.joint3_n,
        ..sw.cfg(rc, vec![1], vec![0.5, 0.5, 1.0])
    })?;
    let v3 = Verdict::judge(j3.empirical.value, j3.empirical.se, Some(0.0), 3.0);
    sw.push(9, "l=3 joint moment = 0", v3, format!("n={} {:?}", scale.joint3_n, j3.empirical));
    let j4 = run_joint_moment_experiment(&sw.cfg(rc, vec![1], vec![0.5, 0.5, 1.0, 1.0]))?;
    sw.push(
        9,
        "l=4 joint moment = Isserlis of oracle covariances",
        j4.verdict_oracle,
        format!("{:?} reference={:?}", j4.empirical, j4.reference_oracle),
    );

    // 10
    for kind in [rc, sc] {
        let tc = TightnessConfig {
            seed: scale.seed,
            workers: scale.workers,
            ..TightnessConfig::from_gaps(kind, 2, scale.tightness_n, scale.replicas, 0.5, &[0.05, 0.1, 0.2, 0.4])
        };
        let rep = run_tightness_diagnostic(&tc)?;
        sw.push(
            10,
            &format!("{kind} p=2 increment slope in [1.7, 2.3]"),
            pass_if((1.7..=2.3).contains(&rep.slope)),
            format!("slope={} se={}", rep.slope, rep.slope_se),
        );
    }

    // 11
    let odd_even = scale.odd_n - scale.odd_n % 2;
    for n in [scale.odd_n | 1, odd_even] {
        let rep = run_odd_statistic_experiment(&OddConfig {
            seed: scale.seed,
            workers: scale.workers,
            ..OddConfig::new(1, n, scale.replicas, 1.0)
        })?;
        sw.push(
            11,
            &format!("second moment of sum lambda^3 at n={n}"),
            rep.verdict_second,
            format!("{:?} reference={}", rep.second, rep.reference_second),
        );
    }

    // 12
    let mut ratios = Vec::new();
    for n in [4u32, 6, 8, 10] {
        let c = count_b_pl(n, &[2, 2, 2], rc, &caps)?;
        ratios.push(c as f64 / (n as f64).powf(3.0 - 1.5));
    }
    sw.push(
        12,
        "cluster count ratio strictly decreasing",
        pass_if(ratios.windows(2).all(|w| w[1] < w[0])),
        format!("ratios={ratios:?}"),
    );

    // 13
    let discrepancies = discrepancies()?;
    let shown = discrepancies.iter().all(|d| d.verdict == Verdict::NotApplicable);
    let c5 = sw.checks.iter().filter(|c| c.criterion == 5 || c.criterion == 6);
    let reconciled_ok = c5.clone().all(|c| c.verdict == Verdict::Pass);
    sw.push(
        13,
        "paper-literal values reported as not-applicable; reconciled passes 5-6",
        pass_if(shown && reconciled_ok),
        discrepancies
            .iter()
            .map(|d| format!("{}: paper={} oracle={}", d.quantity, d.paper_literal, d.oracle))
            .collect::<Vec<_>>()
            .join("; "),
    );

    Ok(VerifyReport {
        scale,
        checks: sw.checks,
        covariances: sw.covariances,
        discrepancies,
    })
}

/// Paper-literal against reconciled and oracle values at t = 1.
pub fn discrepancies() -> Result<Vec<Discrepancy>> {
    let mut out = Vec::new();
    for (kind, p, label) in [
        (MatrixKind::Rc, 1, "rc_limit_cov(1,1,t,t)"),
        (MatrixKind::Sc, 2, "sc_limit_cov(2,2,t,t)"),
    ] {
        let lit = theory_cov(kind, p, p, 1.0, 1.0, TheoryMode::PaperLiteral).unwrap_or(f64::NAN);
        let rec = theory_cov(kind, p, p, 1.0, 1.0, TheoryMode::Reconciled).unwrap_or(f64::NAN);
        let (_, ex) = oracle_limit(kind, p, p, 1.0, 1.0)?;
        out.push(Discrepancy {
            quantity: label.into(),
            paper_literal: lit,
            reconciled: rec,
            oracle: ex.limit,
            verdict: Verdict::NotApplicable,
        });
    }
    Ok(out)
}

fn random_sample(stream: &mut GaussianStream, kind: MatrixKind, n: usize) -> Result<CirculantSample> {
    let labels: Vec<f64> = (0..kind.labels_needed(n)).map(|_| stream.normal()).collect();
    CirculantSample::from_labels(kind, n, 1.0, &labels)
}

fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

fn trace_cross_validation(seed: u64) -> Result<(f64, bool)> {
    let mut stream = GaussianStream::new(seed ^ 0x7ace);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let kind = if i % 2 == 0 { MatrixKind::Rc } else { MatrixKind::Sc };
        let n = 2 + (i / 2) % 15;
        let s = random_sample(&mut stream, kind, n)?;
        for p in 1..=4u32 {
            let sp = trace_power(&s, p, TraceMethod::Spectral)?;
            let de = trace_power(&s, p, TraceMethod::Dense)?;
            worst = worst.max(rel_diff(sp, de));
            // the RC trace formula covers even powers only
            if kind == MatrixKind::Sc || p % 2 == 0 {
                let co = trace_power(&s, p, TraceMethod::Combinatorial)?;
                worst = worst.max(rel_diff(sp, co));
            }
        }
    }
    Ok((worst, worst <= 1e-8))
}

fn rc_identities(seed: u64) -> Result<(f64, f64)> {
    let mut stream = GaussianStream::new(seed ^ 0x1de);
    let (mut pair, mut collapse) = (0.0f64, 0.0f64);
    for i in 0..100 {
        let n = if i % 2 == 0 { 9 } else { 10 };
        let spec = spectrum(&random_sample(&mut stream, MatrixKind::Rc, n)?);
        for k in 1..n {
            if 2 * k != n {
                pair = pair.max((spec.eigenvalues[k] + spec.eigenvalues[n - k]).abs());
            }
        }
        for p in 1..=3 {
            collapse = collapse.max(rel_diff(rc_odd_statistic(&spec, p)?, rc_odd_collapse(&spec, p)));
        }
    }
    Ok((pair, collapse))
}

fn eta1_identity(scale: VerifyScale) -> Result<usize> {
    let replicas = scale.replicas.min(2_000);
    let mut mismatches = 0;
    for n in [scale.n, scale.n + 1] {
        let kind = MatrixKind::Sc;
        let grid = TimeGrid::new(vec![0.5, 1.0])?;
        let rows = replicate(replicas, scale.workers, |r| {
            let mut stream = GaussianStream::for_replica(scale.seed, r);
            let ens = sample_with(kind.labels_needed(n), &grid, &mut stream)?;
            let s = build_circulant(&ens, kind, 1.0, n)?;
            Ok((reduced_trace(&s, 1, TraceMethod::Dense)?, s.labels[0]))
        })?;
        let batch = TraceBatch {
            kind,
            n,
            power: 1,
            t: 1.0,
            reduced: rows.iter().map(|r| r.0).collect(),
        };
        let eta = statistic(&batch, 1, CenteringMode::Exact)?;
        mismatches += eta
            .iter()
            .zip(&rows)
            .filter(|(e, r)| e.to_bits() != r.1.to_bits())
            .count();
    }
    Ok(mismatches)
}
