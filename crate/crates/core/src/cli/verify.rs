//! The `verify` suite: closed forms audited against invariants and the oracle.
//!
//! Every check is a list of cases, each carrying an error and the threshold it
//! must stay under. A caller-supplied tolerance can only tighten thresholds.

use rayon::prelude::*;

use crate::correlations::{
    classical_state_mixed, closest_classical_product_mixed, closest_classical_pure, closest_states,
    k_spectrum, mixed_branch_values, report, Branch, BranchForm,
};
use crate::error::Result;
use crate::fano_bloch::{
    density_to_fano, fano_to_density, hs_distance_sq, DensityMatrix4, FanoMatrix,
};
use crate::oracle::{
    geometric_discord_numeric, nearest_classical_numeric, nearest_product_numeric,
    pure_partition_numeric, reduced_pair_numeric, OracleConfig,
};
use crate::states::{OverlapParam, PartitionSpec, PureSplit, TracedPair};

const FINE_STEPS: usize = 101;
const MAX_N: u32 = 10;
const ORACLE_MAX_N: u32 = 6;
const BRANCH_SCAN_STEPS: usize = 10_001;
const C_JUMP: f64 = 0.171;

/// Deliberate corruptions used to show that the suite catches errors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Negates r₂₂ of every closed-form state handed to the oracle comparison.
    R22Sign,
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Number of interior s-values used for the oracle grid.
    pub grid_density: usize,
    pub seed: u64,
    pub tolerance: Option<f64>,
    pub fault: Option<Fault>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            grid_density: 9,
            seed: 42,
            tolerance: None,
            fault: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Case {
    pub label: String,
    pub error: f64,
    pub threshold: f64,
}

impl Case {
    pub fn passed(&self) -> bool {
        self.error <= self.threshold
    }
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: Vec<Case>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(Case::passed)
    }

    pub fn failures(&self) -> usize {
        self.cases.iter().filter(|c| !c.passed()).count()
    }

    pub fn first_failure(&self) -> Option<&Case> {
        self.cases.iter().find(|c| !c.passed())
    }

    /// Largest error relative to its threshold, reported as the raw error.
    pub fn worst(&self) -> Option<&Case> {
        self.cases.iter().max_by(|a, b| {
            let ra = a.error / a.threshold.max(f64::MIN_POSITIVE);
            let rb = b.error / b.threshold.max(f64::MIN_POSITIVE);
            ra.total_cmp(&rb)
        })
    }
}

struct Thresholds(Option<f64>);

impl Thresholds {
    fn cap(&self, default: f64) -> f64 {
        match self.0 {
            Some(t) => default.min(t),
            None => default,
        }
    }
}

fn s(v: f64) -> OverlapParam {
    OverlapParam::new(v.clamp(0.0, 1.0)).expect("grid value in [0, 1]")
}

fn fine_grid() -> Vec<f64> {
    (0..FINE_STEPS)
        .map(|i| i as f64 / (FINE_STEPS - 1) as f64)
        .collect()
}

fn oracle_grid(density: usize) -> Vec<f64> {
    (1..=density)
        .map(|i| i as f64 / (density + 1) as f64)
        .collect()
}

fn partitions(max_n: u32) -> Vec<PartitionSpec> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        for k in 1..n {
            out.push(PartitionSpec::pure(n, k).expect("valid split"));
        }
        out.push(PartitionSpec::traced(n).expect("valid pair"));
    }
    out
}

fn label(p: PartitionSpec, sv: f64) -> String {
    match p {
        PartitionSpec::PureSplit { n, k } => format!("pure n={n} k={k} s={sv}"),
        PartitionSpec::TracedPair { n } => format!("mixed n={n} s={sv}"),
    }
}

fn density_error(d: &DensityMatrix4) -> f64 {
    let trace = (d.trace() - crate::fano_bloch::C64::new(1.0, 0.0)).norm();
    let negativity = (-d.eigenvalues()[0]).max(0.0);
    d.hermitian_asymmetry().max(trace).max(negativity)
}

fn additivity(th: &Thresholds) -> CheckOutcome {
    let limit = th.cap(1e-12);
    let cases = partitions(MAX_N)
        .into_iter()
        .flat_map(|p| fine_grid().into_iter().map(move |sv| (p, sv)))
        .map(|(p, sv)| {
            let r = report(p, s(sv));
            Case {
                label: label(p, sv),
                error: (r.t2 - r.d2 - r.c2 + r.l2).abs(),
                threshold: limit,
            }
        })
        .collect();
    CheckOutcome {
        name: "additivity",
        cases,
    }
}

fn closed_form_state(p: PartitionSpec, sv: f64, fault: Option<Fault>) -> FanoMatrix {
    let f = p.state(s(sv));
    match fault {
        Some(Fault::R22Sign) => f.with(2, 2, -f.get(2, 2)),
        None => f,
    }
}

fn brute_force_state(p: PartitionSpec, sv: f64) -> Result<FanoMatrix> {
    let d = match p {
        PartitionSpec::PureSplit { n, k } => pure_partition_numeric(n, k, sv),
        PartitionSpec::TracedPair { n } => reduced_pair_numeric(n, sv),
    };
    density_to_fano(&d)
}

fn oracle_cases(
    p: PartitionSpec,
    sv: f64,
    opts: &VerifyOptions,
    th: &Thresholds,
) -> Result<Vec<Case>> {
    let cfg = OracleConfig {
        seed: opts.seed,
        ..OracleConfig::default()
    };
    let rho = closed_form_state(p, sv, opts.fault);
    let brute = brute_force_state(p, sv)?;
    let states = closest_states(p, s(sv));
    let r = report(p, s(sv));
    let product = nearest_product_numeric(&brute, &cfg)?;
    let classical = nearest_classical_numeric(&brute, &cfg)?;
    let base = label(p, sv);
    Ok(vec![
        Case {
            label: format!("{base}: coefficients vs state-vector reconstruction"),
            error: rho.max_abs_diff(&brute),
            threshold: th.cap(1e-10),
        },
        Case {
            label: format!(
                "{base}: closest-product distance {} vs numeric {}",
                hs_distance_sq(&rho, &states.product),
                product.min_distance_sq
            ),
            error: (hs_distance_sq(&rho, &states.product) - product.min_distance_sq).abs(),
            threshold: th.cap(1e-6),
        },
        Case {
            label: format!(
                "{base}: D2 {} vs numeric {}",
                r.d2, classical.min_distance_sq
            ),
            error: (r.d2 - classical.min_distance_sq).abs(),
            threshold: th.cap(1e-5),
        },
        Case {
            label: format!("{base}: D2 vs Jacobi spectrum of K"),
            error: (r.d2 - geometric_discord_numeric(&rho)).abs(),
            threshold: th.cap(1e-10),
        },
    ])
}

fn oracle_equivalence(opts: &VerifyOptions, th: &Thresholds) -> Result<CheckOutcome> {
    let grid = oracle_grid(opts.grid_density);
    let points: Vec<(PartitionSpec, f64)> = partitions(ORACLE_MAX_N)
        .into_iter()
        .flat_map(|p| grid.iter().map(move |&sv| (p, sv)))
        .collect();
    let per_point: Vec<Vec<Case>> = points
        .par_iter()
        .map(|&(p, sv)| oracle_cases(p, sv, opts, th))
        .collect::<Result<_>>()?;
    Ok(CheckOutcome {
        name: "oracle-equivalence",
        cases: per_point.into_iter().flatten().collect(),
    })
}

fn classical_states(p: PartitionSpec, sv: f64) -> Vec<(&'static str, FanoMatrix)> {
    match p {
        PartitionSpec::PureSplit { n, k } => {
            let split = PureSplit::new(n, k).expect("valid split");
            vec![("chi", closest_classical_pure(split, s(sv)))]
        }
        PartitionSpec::TracedPair { n } => {
            let pair = TracedPair::new(n).expect("valid pair");
            vec![
                (
                    "chi-",
                    classical_state_mixed(pair, s(sv), BranchForm::Minus),
                ),
                ("chi+", classical_state_mixed(pair, s(sv), BranchForm::Plus)),
            ]
        }
    }
}

fn classical_fixed_point(th: &Thresholds) -> CheckOutcome {
    let limit = th.cap(1e-12);
    let mut cases = Vec::new();
    for p in partitions(MAX_N) {
        for sv in fine_grid() {
            let rho = fano_to_density(&p.state(s(sv)));
            for (name, chi) in classical_states(p, sv) {
                let chi = fano_to_density(&chi);
                cases.push(Case {
                    label: format!("{}: {name}", label(p, sv)),
                    error: (rho.trace_product(&chi) - chi.trace_product(&chi)).abs(),
                    threshold: limit,
                });
            }
        }
    }
    CheckOutcome {
        name: "classical-fixed-point",
        cases,
    }
}

fn density_validity(th: &Thresholds) -> CheckOutcome {
    let limit = th.cap(1e-12);
    let mut cases = Vec::new();
    for p in partitions(MAX_N) {
        for sv in fine_grid() {
            let st = closest_states(p, s(sv));
            let mut named = vec![
                ("rho", st.rho),
                ("pi", st.product),
                ("chi", st.classical),
                ("pi_chi", st.classical_product),
            ];
            if let PartitionSpec::TracedPair { n } = p {
                let pair = TracedPair::new(n).expect("valid pair");
                for form in [BranchForm::Minus, BranchForm::Plus] {
                    named.push((
                        "chi (either form)",
                        classical_state_mixed(pair, s(sv), form),
                    ));
                    named.push((
                        "pi_chi (either form)",
                        closest_classical_product_mixed(pair, s(sv), form),
                    ));
                }
            }
            for (name, f) in named {
                cases.push(Case {
                    label: format!("{}: {name}", label(p, sv)),
                    error: density_error(&fano_to_density(&f)),
                    threshold: limit,
                });
            }
        }
    }
    CheckOutcome {
        name: "density-validity",
        cases,
    }
}

fn n2_scheme_agreement(th: &Thresholds) -> CheckOutcome {
    let limit = th.cap(1e-12);
    let pure = PartitionSpec::pure(2, 1).expect("valid split");
    let mixed = PartitionSpec::traced(2).expect("valid pair");
    let cases = fine_grid()
        .into_iter()
        .map(|sv| {
            let a = report(pure, s(sv));
            let b = report(mixed, s(sv));
            let error = [a.t2 - b.t2, a.d2 - b.d2, a.c2 - b.c2, a.l2 - b.l2]
                .iter()
                .fold(0.0_f64, |m, d| m.max(d.abs()));
            Case {
                label: format!("n=2 s={sv}"),
                error,
                threshold: limit,
            }
        })
        .collect();
    CheckOutcome {
        name: "n2-scheme-agreement",
        cases,
    }
}

fn n3_branch_point(th: &Thresholds) -> CheckOutcome {
    let pair = TracedPair::new(3).expect("valid pair");
    let star = 2.0_f64.sqrt() - 1.0;
    let k = k_spectrum(&PartitionSpec::from(pair).state(s(star))).expect("pattern holds");
    let minus = mixed_branch_values(pair, s(star), BranchForm::Minus);
    let plus = mixed_branch_values(pair, s(star), BranchForm::Plus);

    let mut flips = 0usize;
    let mut flip_at = f64::NAN;
    let mut last = None;
    for i in 0..BRANCH_SCAN_STEPS {
        let sv = i as f64 / (BRANCH_SCAN_STEPS - 1) as f64;
        let b = report(pair.into(), s(sv)).branch;
        if b == Branch::Tie {
            continue;
        }
        if last.is_some_and(|l| l != b) {
            flips += 1;
            flip_at = sv;
        }
        last = Some(b);
    }
    let spacing = 1.0 / (BRANCH_SCAN_STEPS - 1) as f64;

    let cases = vec![
        Case {
            label: format!("lambda1 {} vs lambda3 {} at s*", k.lambda1, k.lambda3),
            error: (k.lambda1 - k.lambda3).abs(),
            threshold: th.cap(1e-9),
        },
        Case {
            label: format!("D2 minus {} vs plus {} at s*", minus.d2, plus.d2),
            error: (minus.d2 - plus.d2).abs(),
            threshold: th.cap(1e-9),
        },
        Case {
            label: format!("C2 jump {} vs {C_JUMP}", plus.c2 - minus.c2),
            error: (plus.c2 - minus.c2 - C_JUMP).abs(),
            threshold: th.cap(1e-2),
        },
        Case {
            label: format!("branch flips on [0, 1]: {flips}"),
            error: flips.abs_diff(1) as f64,
            threshold: 0.0,
        },
        Case {
            label: format!("flip located at s = {flip_at}"),
            error: if flip_at.is_nan() {
                f64::INFINITY
            } else {
                (flip_at - star).abs()
            },
            threshold: th.cap(spacing),
        },
    ];
    CheckOutcome {
        name: "n3-branch-point",
        cases,
    }
}

/// Runs every check in order.
pub fn run_suite(opts: &VerifyOptions) -> Result<Vec<CheckOutcome>> {
    let th = Thresholds(opts.tolerance);
    Ok(vec![
        additivity(&th),
        oracle_equivalence(opts, &th)?,
        classical_fixed_point(&th),
        density_validity(&th),
        n2_scheme_agreement(&th),
        n3_branch_point(&th),
    ])
}

/// Summary table, one row per check.
pub fn summary_table(outcomes: &[CheckOutcome]) -> String {
    let mut out = format!(
        "{:<24} {:>7} {:>7} {:>12} {:>12}  {}\n",
        "check", "cases", "failed", "worst error", "threshold", "status"
    );
    for o in outcomes {
        let (err, thr) = o
            .worst()
            .map(|c| (c.error, c.threshold))
            .unwrap_or((0.0, 0.0));
        out.push_str(&format!(
            "{:<24} {:>7} {:>7} {:>12.3e} {:>12.3e}  {}\n",
            o.name,
            o.cases.len(),
            o.failures(),
            err,
            thr,
            if o.passed() { "PASS" } else { "FAIL" }
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(fine_grid().len(), 101);
        assert_eq!(fine_grid()[100], 1.0);
        let g = oracle_grid(9);
        assert_eq!(g.len(), 9);
        assert!((g[0] - 0.1).abs() < 1e-15 && (g[8] - 0.9).abs() < 1e-15);
        // 45 pure splits + 9 traced pairs for n up to 10
        assert_eq!(partitions(MAX_N).len(), 45 + 9);
    }

    #[test]
    fn cheap_checks_pass_at_default_thresholds() {
        let th = Thresholds(None);
        for o in [
            additivity(&th),
            classical_fixed_point(&th),
            density_validity(&th),
            n2_scheme_agreement(&th),
            n3_branch_point(&th),
        ] {
            assert!(o.passed(), "{}: {:?}", o.name, o.first_failure());
        }
    }

    #[test]
    fn tolerance_only_tightens() {
        assert_eq!(Thresholds(Some(1.0)).cap(1e-12), 1e-12);
        assert_eq!(Thresholds(Some(0.0)).cap(1e-12), 0.0);
        assert_eq!(Thresholds(None).cap(1e-6), 1e-6);
    }

    #[test]
    fn injected_fault_is_seen_by_reconstruction() {
        let opts = VerifyOptions {
            fault: Some(Fault::R22Sign),
            ..VerifyOptions::default()
        };
        let p = PartitionSpec::traced(3).unwrap();
        let cases = oracle_cases(p, 0.5, &opts, &Thresholds(None)).unwrap();
        assert!(!cases[0].passed());
        let clean = oracle_cases(p, 0.5, &VerifyOptions::default(), &Thresholds(None)).unwrap();
        assert!(clean.iter().all(Case::passed), "{clean:?}");
    }
}
