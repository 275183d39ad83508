//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the criteria share
//! expensive intermediate results and report in a fixed order.
//! `cargo test --release -p resonance-cli --test acceptance`

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use resonance_core::sweep::{figure_preset, run_sweep, SweepRow};
use resonance_core::*;
use resonance_oracle::{
    cached_brute_force, equivalence_suite, kernel_oracle, linear_term_probe, OracleCache,
    SUITE_CHECKPOINT, SUITE_DIGITS, SUITE_N_MAX,
};

const KERNEL_REL_TOL: f64 = 1e-13;
const KERNEL_GRID: usize = 100;
const ORACLE_DIGITS: u32 = 50;
const SOUNDNESS_CONFIGS: usize = 100;
const SOUNDNESS_N: [u64; 3] = [100, 1_000, 10_000];
const EQUIVALENCE_TOL: f64 = 1e-10;
const LIMIT_TOL: f64 = 1e-9;
const FAR: f64 = 1e6;
const CONTACT_Z0: f64 = 1e-10;
const CONTACT_TOL: f64 = 1e-9;
const REFLECTION_REL_TOL: f64 = 1e-12;
const EXPONENT_RANGE: (f64, f64) = (1.9, 2.1);
const SMALL_A_TOL: f64 = 2e-13;
const TIME_LIMIT: Duration = Duration::from_secs(30 * 60);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn caption(o: Orientation, a: f64) -> ValidatedConfig {
    validate(GeometryConfig::cavity(o, 0.5, 0.3, 1.2, a)).unwrap()
}

fn ac1_kernel_certification() -> Outcome {
    let mut worst = (0.0f64, 0.0, 0.0);
    let mut checked = 0;
    for i in 0..KERNEL_GRID {
        let az = 10f64.powf(-30.0 + 36.0 * i as f64 / (KERNEL_GRID - 1) as f64);
        for j in 0..KERNEL_GRID {
            let z = 10f64.powf(-2.0 + 5.0 * j as f64 / (KERNEL_GRID - 1) as f64);
            let a = az / z;
            for kind in [KernelKind::Cosine, KernelKind::Sine] {
                let fast = kernel(kind, z, a).unwrap();
                let exact = kernel_oracle(kind, z, a, ORACLE_DIGITS).unwrap().value_f64();
                let rel = ((fast - exact) / exact).abs();
                if rel > worst.0 {
                    worst = (rel, z, a);
                }
                checked += 1;
            }
        }
    }
    outcome(
        worst.0 <= KERNEL_REL_TOL,
        format!(
            "{checked} kernel values, max relative error {:.2e} (z = {:.3e}, a = {:.3e}), limit {KERNEL_REL_TOL:e}",
            worst.0, worst.1, worst.2
        ),
    )
}

fn random_cavity(rng: &mut StdRng) -> ValidatedConfig {
    loop {
        let o = if rng.random_bool(0.5) {
            Orientation::Perpendicular
        } else {
            Orientation::Parallel
        };
        let d = rng.random_range(0.1..4.0);
        let z0 = rng.random_range(0.1..4.0);
        let floor: f64 = match o {
            Orientation::Perpendicular => z0 + d,
            Orientation::Parallel => z0,
        };
        let l = rng.random_range(floor.max(0.1)..10.0f64.max(floor + 0.1));
        let a = if rng.random_bool(0.25) {
            0.0
        } else {
            rng.random_range(0.0..10.0)
        };
        if let Ok(c) = validate(GeometryConfig::cavity(o, d, z0, l, a)) {
            if c.l_r() <= 10.0 {
                return c;
            }
        }
    }
}

fn ac2_tail_bound_soundness() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x7a11_b0d5);
    let mut checks = 0;
    let mut violations = 0;
    let mut tightest = f64::INFINITY;
    for _ in 0..SOUNDNESS_CONFIGS {
        let c = random_cavity(&mut rng);
        for kind in [KernelKind::Cosine, KernelKind::Sine] {
            for n in SOUNDNESS_N {
                let s = partial_sum(kind, &c, n).unwrap().value;
                let s4 = partial_sum(kind, &c, 4 * n).unwrap().value;
                let seg = segment_sum(kind, &c, n, 4 * n).unwrap();
                let bound = tail_bound(&c, kind, n);
                let diff = seg.abs();
                // second route: the two rounded totals, each off by at most one rounding
                let rounding = 2.0 * f64::EPSILON * s.abs().max(s4.abs());
                checks += 1;
                if diff > bound || (s4 - s).abs() > bound + rounding {
                    violations += 1;
                    eprintln!("  tail bound violated: {kind} N = {n} {:?}: |segment| = {diff:e}, |S(4N)-S(N)| = {:e}, bound = {bound:e}", c.config(), (s4 - s).abs());
                }
                if diff > 0.0 {
                    tightest = tightest.min(bound / diff);
                }
            }
        }
    }
    outcome(
        violations == 0,
        format!("{checks} checks, {violations} violations, smallest bound/|S(4N)-S(N)| = {tightest:.3} (difference summed directly over N < |n| <= 4N)"),
    )
}

fn cache_dir() -> PathBuf {
    std::env::var_os("RESONANCE_ORACLE_CACHE")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../oracle-cache"))
}

fn ac3_oracle_equivalence() -> Outcome {
    let cache = match OracleCache::open(cache_dir()) {
        Ok(c) => c,
        Err(e) => return outcome(false, format!("cannot open oracle cache: {e}")),
    };
    let mut failures = Vec::new();
    let mut worst_gap = 0.0f64;
    let suite = equivalence_suite();
    for (i, e) in suite.iter().enumerate() {
        let c = e.config.validate().unwrap();
        let reports = match cached_brute_force(&cache, e, &[SUITE_CHECKPOINT, SUITE_N_MAX], SUITE_DIGITS) {
            Ok(r) => r,
            Err(err) => {
                failures.push(format!("#{} oracle: {err}", i + 1));
                continue;
            }
        };
        let (bf6, bf7) = (reports[0].value_f64(), reports[1].value_f64());
        let fast = bilateral_sum(e.kind, &c, EQUIVALENCE_TOL).unwrap();
        let allowed = EQUIVALENCE_TOL + tail_bound(&c, e.kind, SUITE_N_MAX);
        let gap = (fast.value - bf7).abs();
        worst_gap = worst_gap.max(gap / allowed);
        if gap > allowed {
            failures.push(format!("#{} |fast - oracle| = {gap:.2e} > {allowed:.2e}", i + 1));
        }
        if (bf6 - bf7).abs() > tail_bound(&c, e.kind, SUITE_CHECKPOINT) {
            failures.push(format!("#{} oracle 1e6 vs 1e7 exceeds tail bound", i + 1));
        }
    }
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            format!("{} configs, worst gap/allowance = {worst_gap:.3}", suite.len())
        } else {
            failures.join("; ")
        },
    )
}

fn ac4_limit_chain() -> Outcome {
    let mut worst = (0.0f64, 0.0f64);
    for o in [Orientation::Perpendicular, Orientation::Parallel] {
        for q in [Quantity::Shift, Quantity::Rate] {
            for a in [0.5, 4.0] {
                let far = validate(GeometryConfig::cavity(o, 0.5, 0.3, FAR, a)).unwrap();
                let two = two_mirror(q, &far, 1e-10).unwrap().reduced_value;
                let one = single_mirror(q, o, 0.5, 0.3, a).unwrap().reduced_value;
                worst.0 = worst.0.max((two - one).abs());
                let lone = single_mirror(q, o, 0.5, FAR, a).unwrap().reduced_value;
                let free = free_space(q, 0.5, a).unwrap().reduced_value;
                worst.1 = worst.1.max((lone - free).abs());
            }
        }
    }
    outcome(
        worst.0 <= LIMIT_TOL && worst.1 <= LIMIT_TOL,
        format!(
            "two->single max gap {:.2e}, single->free max gap {:.2e}, limit {LIMIT_TOL:e} (a in {{0.5, 4}})",
            worst.0, worst.1
        ),
    )
}

fn ac5_structural_zeros() -> Outcome {
    let mut worst = 0.0f64;
    for o in [Orientation::Perpendicular, Orientation::Parallel] {
        for a in [0.0, 0.5, 4.0] {
            let c = validate(GeometryConfig::cavity(o, 0.5, CONTACT_Z0, 1.2, a)).unwrap();
            worst = worst.max(two_mirror(Quantity::Shift, &c, 1e-10).unwrap().reduced_value.abs());
        }
    }
    let v = two_mirror(Quantity::Shift, &caption(Orientation::Perpendicular, 4.0), 1e-10).unwrap();
    let zeros = [0.0, PI / 2.0, PI]
        .iter()
        .all(|&t| physical_value(&v, &AtomState::new(t, 0.1).unwrap(), 5.0) == 0.0);
    outcome(
        worst <= CONTACT_TOL && zeros,
        format!("max |shift| at z0 = 1e-10: {worst:.2e}; separable states exactly zero: {zeros}"),
    )
}

fn ac6_reflection_symmetry() -> Outcome {
    use Orientation::{Parallel as Par, Perpendicular as Perp};
    let cases = [
        (Perp, 0.5, 0.2, 1.2, 4.0, 1e-14),
        (Par, 0.5, 0.2, 1.2, 4.0, 1e-14),
        (Perp, 1.0, 0.3, 2.5, 0.5, 1e-14),
        (Par, 0.8, 1.0, 3.0, 10.0, 1e-14),
        (Perp, 0.5, 0.2, 1.2, 0.0, 1e-13),
        (Par, 0.5, 0.2, 1.2, 0.0, 1e-13),
    ];
    let mut worst = 0.0f64;
    let mut worst_rel = 0.0f64;
    for (o, d, z0, l, a, tol) in cases {
        let c = validate(GeometryConfig::cavity(o, d, z0, l, a)).unwrap();
        let r = c.reflected().unwrap();
        for kind in [KernelKind::Cosine, KernelKind::Sine] {
            let v = bilateral_sum(kind, &c, tol).unwrap().value;
            let w = bilateral_sum(kind, &r, tol).unwrap().value;
            // each side is certified only to tol; the inertial sine sum is zero
            let allowed = REFLECTION_REL_TOL * v.abs().max(w.abs()) + 2.0 * tol;
            worst = worst.max((v - w).abs() / allowed);
            if v.abs() > 1e-6 {
                worst_rel = worst_rel.max(((v - w) / v).abs());
            }
        }
    }
    outcome(
        worst <= 1.0,
        format!(
            "{} configs x 2 kinds, max relative asymmetry {worst_rel:.2e} (nonzero sums), worst |diff|/(1e-12*|S| + 2 tol) = {worst:.3}",
            cases.len()
        ),
    )
}

/// Two-mirror perpendicular shift at d = 0.5, z0 = 0.3, L = 1.2, memoized.
struct SmallA {
    memo: RefCell<HashMap<u64, f64>>,
}

impl SmallA {
    fn value(&self, a: f64) -> Result<f64> {
        if let Some(v) = self.memo.borrow().get(&a.to_bits()) {
            return Ok(*v);
        }
        let v = bilateral_sum(KernelKind::Cosine, &caption(Orientation::Perpendicular, a), SMALL_A_TOL)?.value;
        self.memo.borrow_mut().insert(a.to_bits(), v);
        Ok(v)
    }
}

fn probe_grid() -> Vec<f64> {
    (0..7).map(|k| 1e-4 * 10f64.powf(k as f64 / 3.0)).collect()
}

fn ac7_no_linear_term(small: &SmallA) -> Outcome {
    let cavity = match linear_term_probe(|a| small.value(a), &probe_grid()) {
        Ok(p) => p,
        Err(e) => return outcome(false, e.to_string()),
    };
    let free = linear_term_probe(
        |a| free_space(Quantity::Shift, 0.5, a).map(|v| v.reduced_value),
        &probe_grid(),
    );
    let in_range = |p: f64| (EXPONENT_RANGE.0..=EXPONENT_RANGE.1).contains(&p);
    outcome(
        in_range(cavity.exponent),
        format!(
            "cavity exponent {:.4} (rms residual {:.1e}); free-space exponent {}; accepted range [{}, {}]",
            cavity.exponent,
            cavity.residual,
            free.map(|p| format!("{:.4}", p.exponent)).unwrap_or_else(|e| e.to_string()),
            EXPONENT_RANGE.0,
            EXPONENT_RANGE.1
        ),
    )
}

fn ac8_low_acceleration(small: &SmallA) -> Outcome {
    let mut ratios = Vec::new();
    for a in [1e-2, 1e-3, 1e-4] {
        let full = match small.value(a) {
            Ok(v) => v,
            Err(e) => return outcome(false, e.to_string()),
        };
        let low = low_acceleration_shift(&caption(Orientation::Perpendicular, a), SMALL_A_TOL)
            .unwrap()
            .reduced_value;
        ratios.push((full - low).abs() / (a * a));
    }
    let decreasing = ratios.windows(2).all(|w| w[1] < w[0]);
    outcome(
        decreasing,
        format!(
            "|full - expansion|/a^2 at a = 1e-2, 1e-3, 1e-4: {:.3e}, {:.3e}, {:.3e}; expansion sign needs no flip; \
             note the sums are certified to {SMALL_A_TOL:e} each, so below a = 1e-2 the differences sit under the certified floor 2 tol/a^2 ({:.1e} at 1e-3)",
            ratios[0], ratios[1], ratios[2], 2.0 * SMALL_A_TOL / 1e-6
        ),
    )
}

fn sweep_rows(fig: &str) -> Vec<(RunSpecInfo, Vec<SweepRow>)> {
    figure_preset(fig, Path::new("unused"))
        .unwrap()
        .into_iter()
        .map(|s| {
            let rows = run_sweep(&s).unwrap();
            (
                RunSpecInfo {
                    orientation: s.orientation,
                    fixed: s.fixed.clone(),
                },
                rows,
            )
        })
        .collect()
}

struct RunSpecInfo {
    orientation: Orientation,
    fixed: std::collections::BTreeMap<resonance_core::sweep::Param, resonance_core::sweep::ParamValue>,
}

fn ac9_figure_claims() -> Outcome {
    use resonance_core::sweep::{Param, ParamValue};
    let mut notes = Vec::new();
    let mut pass = true;

    // (a) single interior maximum versus acceleration
    for (info, rows) in sweep_rows("fig3") {
        let v: Vec<f64> = rows.iter().map(|r| r.normalized_value).collect();
        let peak = v.iter().enumerate().max_by(|x, y| x.1.total_cmp(y.1)).unwrap().0;
        let unimodal = v[..=peak].windows(2).all(|w| w[1] > w[0]) && v[peak..].windows(2).all(|w| w[1] < w[0]);
        let interior = peak > 0 && peak + 1 < v.len();
        pass &= unimodal && interior;
        notes.push(format!(
            "(a) {} peak {:.4} at a = {:.2}{}",
            info.orientation,
            v[peak],
            rows[peak].swept_value,
            if unimodal && interior { "" } else { " NOT single interior peak" }
        ));
    }

    // (b) maximum at the midpoint
    let mut mid_ok = true;
    for (_, rows) in sweep_rows("fig4") {
        let mags: Vec<f64> = rows.iter().map(|r| r.normalized_value.abs()).collect();
        let arg = mags.iter().enumerate().max_by(|x, y| x.1.total_cmp(y.1)).unwrap().0;
        mid_ok &= arg == mags.len() / 2;
    }
    pass &= mid_ok;
    notes.push(format!("(b) fig4 curves maximal at midpoint: {mid_ok}"));

    // (c) strictly decreasing in d, steeper for perpendicular
    let mut drops = Vec::new();
    let mut mono = true;
    for (_, rows) in sweep_rows("fig5") {
        let mags: Vec<f64> = rows.iter().map(|r| r.normalized_value.abs()).collect();
        mono &= mags.windows(2).all(|w| w[1] < w[0]);
        drops.push(mags[mags.len() - 1] / mags[0]);
    }
    let steeper = drops[0] < drops[1];
    pass &= mono && steeper;
    notes.push(format!(
        "(c) monotone {mono}, end/start perp {:.3} vs par {:.3}",
        drops[0], drops[1]
    ));

    // (d) rate approaches the single-mirror value monotonically from below
    let mut sat_ok = true;
    for (info, rows) in sweep_rows("fig7") {
        let z0 = match info.fixed[&Param::Z0] {
            ParamValue::Value(v) => v,
            ParamValue::Centered => unreachable!(),
        };
        let one = single_mirror(Quantity::Rate, info.orientation, 0.5, z0, 4.0).unwrap();
        let state = AtomState::subradiant(1.0).unwrap();
        let target = normalized_value(&one, &state);
        let gaps: Vec<f64> = rows.iter().map(|r| target - r.normalized_value).collect();
        sat_ok &= gaps.iter().all(|&g| g > 0.0) && gaps.windows(2).all(|w| w[1] < w[0]);
    }
    pass &= sat_ok;
    notes.push(format!("(d) fig7 curves rise monotonically towards the single-mirror rate: {sat_ok}"));

    outcome(pass, notes.join("; "))
}

fn ac10_laboratory_estimate() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_resonance"))
        .args([
            "estimate", "--omega0", "5", "--lambda", "0.1", "--L-nm", "50", "--d-nm", "20", "--z0-nm", "12",
            "--a-si", "1e17",
        ])
        .output()
        .expect("run resonance estimate");
    let text = String::from_utf8_lossy(&out.stdout);
    let field = |key: &str| {
        text.lines()
            .find_map(|l| l.strip_prefix(key))
            .map(|v| v.trim_start_matches(" = ").trim().to_string())
    };
    let correction = field("acceleration_correction_eV").and_then(|v| v.parse::<f64>().ok());
    let regime_ok = text.contains("(regime ok)");
    let decades = field("decades_from_quoted").unwrap_or_default();
    match correction {
        Some(c) if out.status.success() && c.is_finite() => outcome(
            regime_ok,
            format!(
                "acceleration correction {c:.3e} eV vs quoted order 1e-11 eV ({decades} decades; mismatch documented in README); regime a*L < 0.1: {regime_ok}"
            ),
        ),
        _ => outcome(false, format!("no report produced: status {:?}, stdout {text:?}", out.status)),
    }
}

fn ac11_determinism() -> Outcome {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for d in &dirs {
        let st = Command::new(env!("CARGO_BIN_EXE_resonance"))
            .args(["figure", "fig3", "--out"])
            .arg(d.path())
            .status()
            .expect("run resonance figure");
        if !st.success() {
            return outcome(false, format!("figure fig3 exited with {st}"));
        }
    }
    let mut files = Vec::new();
    for name in ["fig3_perp.csv", "fig3_par.csv"] {
        let a = std::fs::read(dirs[0].path().join(name)).unwrap_or_default();
        let b = std::fs::read(dirs[1].path().join(name)).unwrap_or_default();
        if a.is_empty() || a != b {
            return outcome(false, format!("{name} differs between runs"));
        }
        files.push(name);
    }
    outcome(true, format!("{} byte-identical across two runs", files.join(", ")))
}

fn main() {
    let start = Instant::now();
    let small = SmallA {
        memo: RefCell::new(HashMap::new()),
    };
    // ACCEPTANCE_ONLY=4,5,6 restricts the run to the listed criteria
    let only: Option<Vec<u32>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|v| v.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let mut results = Vec::new();
    let mut run = |id: u32, title: &str, f: &mut dyn FnMut() -> Outcome| {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            println!("AC{id:<2} SKIP {title}");
            return;
        }
        let t = Instant::now();
        let o = catch_unwind(AssertUnwindSafe(f))
            .unwrap_or_else(|_| outcome(false, "panicked"));
        println!(
            "AC{id:<2} {} {title}: {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
        results.push(o.pass);
    };
    run(1, "kernel certification", &mut ac1_kernel_certification);
    run(2, "tail-bound soundness", &mut ac2_tail_bound_soundness);
    run(3, "oracle equivalence", &mut ac3_oracle_equivalence);
    run(4, "limit chain", &mut ac4_limit_chain);
    run(5, "structural zeros", &mut ac5_structural_zeros);
    run(6, "reflection symmetry", &mut ac6_reflection_symmetry);
    run(7, "no linear term in a", &mut || ac7_no_linear_term(&small));
    run(8, "low-acceleration expansion", &mut || ac8_low_acceleration(&small));
    run(9, "qualitative figure claims", &mut ac9_figure_claims);
    run(10, "laboratory estimate", &mut ac10_laboratory_estimate);
    run(11, "determinism and runtime", &mut || {
        let o = ac11_determinism();
        let total = start.elapsed();
        outcome(
            o.pass && total <= TIME_LIMIT,
            format!("{}; suite time {:.0}s (limit {}s)", o.detail, total.as_secs_f64(), TIME_LIMIT.as_secs()),
        )
    });
    let failed = results.iter().filter(|p| !**p).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
