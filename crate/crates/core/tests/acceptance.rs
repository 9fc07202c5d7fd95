//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use paircorr::correlations::{
    classical_state_mixed, closest_classical_pure, closest_states, discord_pure,
    mixed_branch_values, report, Branch, BranchForm,
};
use paircorr::fano_bloch::{
    density_to_fano, fano_to_density, hs_distance_sq, purity, validate_density, FanoMatrix,
};
use paircorr::oracle::{
    k_matrix, nearest_classical_numeric, nearest_product_numeric, pure_partition_numeric,
    reduced_pair_numeric, sym3_eigenvalues, OracleConfig,
};
use paircorr::{OverlapParam, PartitionSpec, PureSplit, TracedPair};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn s(v: f64) -> OverlapParam {
    OverlapParam::new(v).unwrap()
}

/// s ∈ {0, 0.01, …, 1}.
fn fine_grid() -> Vec<f64> {
    (0..=100).map(|i| i as f64 / 100.0).collect()
}

/// s ∈ {0.1, …, 0.9}.
fn coarse_grid() -> Vec<f64> {
    (1..=9).map(|i| i as f64 / 10.0).collect()
}

fn partitions(max_n: u32) -> Vec<PartitionSpec> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        for k in 1..n {
            out.push(PartitionSpec::pure(n, k).unwrap());
        }
        out.push(PartitionSpec::traced(n).unwrap());
    }
    out
}

fn ensure(ok: bool, msg: String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg)
    }
}

fn max_over<I: IntoIterator<Item = (f64, String)>>(items: I) -> (f64, String) {
    items.into_iter().fold(
        (0.0, String::new()),
        |best, (e, l)| if e > best.0 { (e, l) } else { best },
    )
}

fn additivity() -> Outcome {
    let start = Instant::now();
    let (worst, at) = max_over(partitions(10).into_iter().flat_map(|p| {
        fine_grid().into_iter().map(move |sv| {
            let r = report(p, s(sv));
            ((r.t2 - r.d2 - r.c2 + r.l2).abs(), format!("{p:?} s={sv}"))
        })
    }));
    let elapsed = start.elapsed();
    ensure(worst <= 1e-12, format!("residual {worst:e} at {at}"))?;
    ensure(
        elapsed < Duration::from_secs(5),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!(
        "max |T2 - D2 - C2 + L2| = {worst:.1e} in {:.2} s",
        elapsed.as_secs_f64()
    ))
}

fn two_qubit_forms() -> Outcome {
    let oracle = |sv: f64| 0.5 * ((1.0 - sv * sv) / (1.0 + sv * sv)).powi(2);
    for (sv, expected) in [(0.0, 0.5), (0.5, 0.18), (1.0, 0.0)] {
        for p in [
            PartitionSpec::pure(2, 1).unwrap(),
            PartitionSpec::traced(2).unwrap(),
        ] {
            let d2 = report(p, s(sv)).d2;
            ensure(
                (d2 - expected).abs() <= 1e-12 && (d2 - oracle(sv)).abs() <= 1e-12,
                format!("{p:?} s={sv}: D2 = {d2}, expected {expected}"),
            )?;
        }
    }
    let (worst, at) = max_over(fine_grid().into_iter().map(|sv| {
        let a = report(PartitionSpec::pure(2, 1).unwrap(), s(sv));
        let b = report(PartitionSpec::traced(2).unwrap(), s(sv));
        let e = [a.t2 - b.t2, a.d2 - b.d2, a.c2 - b.c2, a.l2 - b.l2]
            .iter()
            .fold(0.0_f64, |m, d| m.max(d.abs()));
        (e, format!("s={sv}"))
    }));
    ensure(
        worst <= 1e-12,
        format!("schemes differ by {worst:e} at {at}"),
    )?;
    Ok(format!(
        "D2 at s = 0, 1/2, 1 exact; schemes agree to {worst:.1e}"
    ))
}

fn branch_point() -> Outcome {
    let pair = TracedPair::new(3).unwrap();
    let star = 2.0_f64.sqrt() - 1.0;
    let k = k_matrix(&mixed_state(3, star));
    let (l1, l3) = (k[0][0], k[2][2]);
    ensure(
        (l1 - l3).abs() <= 1e-9,
        format!("lambda1 {l1} vs lambda3 {l3}"),
    )?;

    let minus = mixed_branch_values(pair, s(star), BranchForm::Minus);
    let plus = mixed_branch_values(pair, s(star), BranchForm::Plus);
    let d_gap = (minus.d2 - plus.d2).abs();
    ensure(d_gap <= 1e-9, format!("|D- - D+| = {d_gap:e}"))?;

    // plus-form minus minus-form C2 from the coefficients directly
    let f = mixed_state(3, star);
    let (r03, r11, r33) = (f.get(0, 3), f.get(1, 1), f.get(3, 3));
    let c = root_c3(f.get(3, 0), r33);
    let c_plus = 0.25 * r11 * r11;
    let c_minus = 0.25 * (2.0 * (r03 * r03 - c * c) + (r33 * r33 - c.powi(4)));
    let jump = plus.c2 - minus.c2;
    ensure(
        (jump - (c_plus - c_minus)).abs() <= 1e-12,
        format!("jump {jump} disagrees with {}", c_plus - c_minus),
    )?;
    ensure((jump - 0.171).abs() <= 0.01, format!("C2 jump {jump}"))?;

    let mut flips = 0;
    let mut last: Option<Branch> = None;
    for i in 0..=10_000 {
        let b = report(pair.into(), s(i as f64 / 10_000.0)).branch;
        if b == Branch::Tie {
            continue;
        }
        if last.is_some_and(|l| l != b) {
            flips += 1;
        }
        last = Some(b);
    }
    ensure(flips == 1, format!("branch flips {flips} times"))?;
    Ok(format!(
        "|l1 - l3| = {:.1e}, |D- - D+| = {d_gap:.1e}, C2 jump = {jump:.4}, one flip",
        (l1 - l3).abs()
    ))
}

fn mixed_state(n: u32, sv: f64) -> FanoMatrix {
    PartitionSpec::traced(n).unwrap().state(s(sv))
}

/// Real root of c³ + c(1 − r33) − r30 = 0 by bisection.
fn root_c3(r30: f64, r33: f64) -> f64 {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid.powi(3) + mid * (1.0 - r33) - r30 > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let cfg = OracleConfig::default();
    let mut worst_product: f64 = 0.0;
    let mut worst_discord: f64 = 0.0;
    for p in partitions(6) {
        for sv in coarse_grid() {
            // oracle input rebuilt from the n-qubit vector, not the closed forms
            let rebuilt = match p {
                PartitionSpec::PureSplit { n, k } => pure_partition_numeric(n, k, sv),
                PartitionSpec::TracedPair { n } => reduced_pair_numeric(n, sv),
            };
            let rebuilt = density_to_fano(&rebuilt).map_err(|e| e.to_string())?;
            let st = closest_states(p, s(sv));
            let closed_product = hs_distance_sq(&st.rho, &st.product);
            let numeric_product = nearest_product_numeric(&rebuilt, &cfg)
                .unwrap()
                .min_distance_sq;
            let numeric_classical = nearest_classical_numeric(&rebuilt, &cfg)
                .unwrap()
                .min_distance_sq;
            let d2 = report(p, s(sv)).d2;
            let ep = (closed_product - numeric_product).abs();
            let ed = (d2 - numeric_classical).abs();
            ensure(
                ep <= 1e-6,
                format!("{p:?} s={sv}: product {closed_product} vs {numeric_product}"),
            )?;
            ensure(
                ed <= 1e-5,
                format!("{p:?} s={sv}: D2 {d2} vs {numeric_classical}"),
            )?;
            worst_product = worst_product.max(ep);
            worst_discord = worst_discord.max(ed);
        }
    }
    let elapsed = start.elapsed();
    ensure(
        elapsed < Duration::from_secs(60),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!(
        "product gap {worst_product:.1e}, discord gap {worst_discord:.1e} in {:.1} s",
        elapsed.as_secs_f64()
    ))
}

fn classicality_fixed_point() -> Outcome {
    let mut worst: f64 = 0.0;
    for p in partitions(10) {
        for sv in fine_grid() {
            let rho = fano_to_density(&p.state(s(sv)));
            let chis = match p {
                PartitionSpec::PureSplit { n, k } => {
                    vec![closest_classical_pure(PureSplit::new(n, k).unwrap(), s(sv))]
                }
                PartitionSpec::TracedPair { n } => {
                    let pair = TracedPair::new(n).unwrap();
                    vec![
                        classical_state_mixed(pair, s(sv), BranchForm::Minus),
                        classical_state_mixed(pair, s(sv), BranchForm::Plus),
                    ]
                }
            };
            for chi in chis {
                let chi = fano_to_density(&chi);
                let e = (rho.trace_product(&chi) - chi.trace_product(&chi)).abs();
                ensure(
                    e <= 1e-12,
                    format!("{p:?} s={sv}: |Tr(rho chi) - Tr(chi^2)| = {e:e}"),
                )?;
                worst = worst.max(e);
            }
        }
    }
    Ok(format!("max |Tr(rho chi) - Tr(chi^2)| = {worst:.1e}"))
}

fn state_validity() -> Outcome {
    let mut count = 0;
    for p in partitions(10) {
        for sv in fine_grid() {
            let st = closest_states(p, s(sv));
            for (name, f) in [
                ("rho", st.rho),
                ("pi", st.product),
                ("chi", st.classical),
                ("pi_chi", st.classical_product),
            ] {
                let v = validate_density(&fano_to_density(&f));
                ensure(
                    v.is_ok(),
                    format!("{p:?} s={sv} {name}: {:?}", v.violations()),
                )?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} states Hermitian, unit trace, positive"))
}

fn pure_identities() -> Outcome {
    let mut worst_formula: f64 = 0.0;
    let mut worst_jacobi: f64 = 0.0;
    for n in 2..=10 {
        for k in 1..n {
            let split = PureSplit::new(n, k).unwrap();
            let p = PartitionSpec::from(split);
            for sv in fine_grid() {
                let r = report(p, s(sv));
                ensure(r.l2 == 0.0, format!("n={n} k={k} s={sv}: L2 = {:e}", r.l2))?;

                let f = p.state(s(sv));
                // reduced state of a pure two-qubit state has eigenvalues (1 ± r30)/2
                let (lp, lm) = (0.5 * (1.0 + f.get(3, 0)), 0.5 * (1.0 - f.get(3, 0)));
                let k_diag = [
                    f.get(1, 1).powi(2),
                    f.get(2, 2).powi(2),
                    f.get(3, 0).powi(2) + f.get(3, 3).powi(2),
                ];
                let from_k = 0.25
                    * (k_diag.iter().sum::<f64>()
                        - k_diag.iter().cloned().fold(f64::MIN, f64::max));
                let d2 = discord_pure(split, s(sv));
                let e = (d2 - 2.0 * lp * lm).abs().max((d2 - from_k).abs());
                ensure(
                    e <= 1e-15,
                    format!(
                        "n={n} k={k} s={sv}: D2 {d2} vs 2l+l- {} vs K {from_k}",
                        2.0 * lp * lm
                    ),
                )?;
                worst_formula = worst_formula.max(e);

                let eig = sym3_eigenvalues(&k_matrix(&f)).unwrap();
                let jac = 0.25 * (eig.iter().sum::<f64>() - eig[0]);
                worst_jacobi = worst_jacobi.max((d2 - jac).abs());
                ensure(
                    (d2 - jac).abs() <= 1e-12,
                    format!("n={n} k={k} s={sv}: Jacobi {jac}"),
                )?;

                let pur = purity(&f);
                ensure(
                    (pur - 1.0).abs() <= 1e-12,
                    format!("n={n} k={k} s={sv}: purity {pur}"),
                )?;
            }
        }
    }
    Ok(format!(
        "L2 = 0 exactly; D2 forms agree to {worst_formula:.1e} (Jacobi {worst_jacobi:.1e}); purity 1"
    ))
}

fn limits() -> Outcome {
    for p in partitions(10) {
        let r = report(p, s(1.0));
        let worst = [r.t2, r.d2, r.c2, r.l2]
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs()));
        ensure(worst <= 1e-12, format!("{p:?} at s=1: {worst:e}"))?;
    }
    for n in 3..=10 {
        let r = report(PartitionSpec::traced(n).unwrap(), s(0.0));
        let got = [r.t2, r.d2, r.c2, r.l2];
        let want = [0.25, 0.0, 0.25, 0.0];
        let e = got
            .iter()
            .zip(want)
            .fold(0.0_f64, |m, (g, w)| m.max((g - w).abs()));
        ensure(e <= 1e-12, format!("mixed n={n} at s=0: {got:?}"))?;
    }
    Ok("s = 1 all zero; s = 0 mixed n >= 3 gives (1/4, 0, 1/4, 0)".to_string())
}

fn cli_rows(args: &[&str]) -> Result<Vec<csv::StringRecord>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_paircorr"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(
        out.status.success(),
        format!("{args:?} exited with {:?}", out.status.code()),
    )?;
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(out.stdout.as_slice())
        .records()
        .map(|r| r.map_err(|e| e.to_string()))
        .collect()
}

fn figure_data() -> Outcome {
    const STEPS: usize = 2001;
    let star = 2.0_f64.sqrt() - 1.0;
    let h = 1.0 / (STEPS - 1) as f64;
    let steps = STEPS.to_string();
    let column = |quantity: &str| -> Result<(Vec<f64>, Vec<f64>), String> {
        let rows = cli_rows(&[
            "plotdata",
            "--quantity",
            quantity,
            "--n",
            "3",
            "--steps",
            &steps,
        ])?;
        let parse = |r: &csv::StringRecord, i: usize| r[i].parse::<f64>().unwrap();
        Ok((
            rows.iter().map(|r| parse(r, 0)).collect(),
            rows.iter().map(|r| parse(r, 1)).collect(),
        ))
    };

    let (sv, d) = column("D2")?;
    let max_step = d
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .fold(0.0, f64::max);
    ensure(max_step < 1e-3, format!("D2 has a step of {max_step}"))?;
    let second: Vec<f64> = d
        .windows(3)
        .map(|w| (w[2] - 2.0 * w[1] + w[0]).abs() / h)
        .collect();
    let kinks: Vec<f64> = second
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > 0.05)
        .map(|(i, _)| sv[i + 1])
        .collect();
    ensure(
        !kinks.is_empty() && kinks.iter().all(|&x| (x - star).abs() <= 2.0 * h),
        format!("D2 slope breaks at {kinks:?}"),
    )?;

    let (sv, c) = column("C2")?;
    let jumps: Vec<(f64, f64)> = c
        .windows(2)
        .enumerate()
        .filter(|(_, w)| (w[1] - w[0]).abs() > 0.05)
        .map(|(i, w)| (sv[i], w[1] - w[0]))
        .collect();
    ensure(
        jumps.len() == 1
            && (jumps[0].0 - star).abs() <= h
            && (jumps[0].1.abs() - 0.171).abs() <= 0.01,
        format!("C2 jumps {jumps:?}"),
    )?;

    let (_, l) = column("L2")?;
    let sweep = cli_rows(&["sweep", "--scheme", "mixed", "--n", "3", "--steps", &steps])?;
    let (mut minus_points, mut plus_points) = (0, 0);
    for (row, &lv) in sweep.iter().zip(&l) {
        match &row[5] {
            "minus" => {
                minus_points += 1;
                ensure(
                    lv == 0.0,
                    format!("L2 = {lv} on the minus branch at s = {}", &row[3]),
                )?;
            }
            "plus" => {
                plus_points += 1;
                ensure(
                    lv >= -1e-12,
                    format!("L2 = {lv} on the plus branch at s = {}", &row[3]),
                )?;
            }
            _ => {}
        }
    }
    ensure(
        minus_points > 0 && plus_points > 0,
        "one branch region is empty".to_string(),
    )?;
    Ok(format!(
        "D2 kink at s = {:.4}, C2 jump {:+.4} at s = {:.4}, L2 sign pattern holds",
        kinks[0], jumps[0].1, jumps[0].0
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("additivity", additivity),
        ("two-qubit closed forms", two_qubit_forms),
        ("three-qubit branch point", branch_point),
        ("oracle equivalence", oracle_equivalence),
        ("classicality fixed point", classicality_fixed_point),
        ("state validity", state_validity),
        ("pure-scheme identities", pure_identities),
        ("limits", limits),
        ("figure data", figure_data),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("[PASS] {}. {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {}. {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
