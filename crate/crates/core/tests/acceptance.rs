//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.
//! Run with `cargo test -p shuffle-compat --test acceptance`.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use shuffle_compat::perm::{all_permutations, insert_in_space, space_labels, Permutation};
use shuffle_compat::qpoly::{gen_poly, stanley_refined_rhs, stanley_rhs};
use shuffle_compat::reduce::supported_statistics;
use shuffle_compat::shuffle::{phi, shuffles, shuffles_with_k_descents, t_swap, word_of};
use shuffle_compat::stats::{self, Statistic, Variant};
use shuffle_compat::verify::{
    check_bijection_pipeline, check_compatibility, check_conjecture_udr_pk_des, check_identity,
    check_inv_maj_equidistribution, find_counterexample, CompatMode, IdentityKind, Limits, Outcome,
};

fn p(s: &str) -> Permutation {
    Permutation::new(s.chars().map(|c| c.to_digit(10).expect("digit")).collect()).expect("valid")
}

fn st(s: &str) -> Statistic {
    s.parse().expect("known statistic")
}

fn range(lo: u32, hi: u32) -> Vec<u32> {
    (lo + 1..=hi).collect()
}

/// Outcome of one criterion: pass flag plus a short detail.
struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Verdict {
            pass,
            detail: detail.into(),
        }
    }
}

/// Collects mismatches instead of stopping at the first.
#[derive(Default)]
struct Checks {
    count: usize,
    failures: Vec<String>,
}

impl Checks {
    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, what: &str, got: T, want: T) {
        self.count += 1;
        if got != want {
            self.failures
                .push(format!("{what}: got {got:?}, want {want:?}"));
        }
    }

    fn verdict(self, extra: &str) -> Verdict {
        if self.failures.is_empty() {
            Verdict::new(true, format!("{} checks{extra}", self.count))
        } else {
            Verdict::new(false, self.failures.join("; "))
        }
    }
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let mut c = Checks::default();
    let a = p("2157364");
    c.eq("maj(2157364)", stats::maj(&a), 11);
    c.eq("Des(2157364)", stats::des_set(&a), vec![1, 4, 6]);

    let b = p("685934");
    c.eq("Des", stats::des_set(&b), vec![2, 4]);
    c.eq("chi_minus", stats::chi_minus(&b), 0);
    c.eq("chi_plus", stats::chi_plus(&b), 1);
    c.eq("Pk", stats::pk_set(&b), vec![2, 4]);
    c.eq(
        "Val",
        stats::valley_family(&b, Variant::Interior),
        vec![3, 5],
    );
    c.eq("Lpk", stats::lpk_set(&b), vec![2, 4]);
    c.eq("Rpk", stats::rpk_set(&b), vec![2, 4, 6]);
    c.eq("Epk", stats::epk_set(&b), vec![2, 4, 6]);
    c.eq(
        "Lval",
        stats::valley_family(&b, Variant::Left),
        vec![1, 3, 5],
    );
    c.eq(
        "Eval",
        stats::valley_family(&b, Variant::Exterior),
        vec![1, 3, 5],
    );
    c.eq("udr", stats::udr(&b), 5);

    let listed: BTreeSet<Permutation> = [
        "13276", "13726", "13762", "17326", "17362", "17632", "71326", "71362", "71632", "76132",
    ]
    .iter()
    .map(|s| p(s))
    .collect();
    let got: BTreeSet<Permutation> = shuffles(&p("132"), &p("76")).unwrap().into_iter().collect();
    c.eq("132 shuffle 76", got, listed);

    let tau = p("1453829");
    c.eq(
        "word",
        word_of(&tau, &p("132"), &p("4589")).unwrap().to_string(),
        "abbabab".to_string(),
    );
    c.eq(
        "phi",
        phi(&tau, &p("132"), &p("361"), &p("4589")).unwrap(),
        p("3456819"),
    );

    let labels = space_labels(&p("265781")).unwrap();
    c.eq(
        "space labels of 265781",
        labels.labels.clone(),
        vec![3, 4, 2, 5, 6, 1, 0],
    );
    let ins = insert_in_space(&p("265781"), 9, 4).unwrap();
    c.eq("insert 9 in space 4", ins.clone(), p("2965781"));
    c.eq("maj after insertion", stats::maj(&ins), 11);

    c.eq("T4(52413)", t_swap(&p("52413"), 4).unwrap(), p("52314"));
    c.eq("T4(52341)", t_swap(&p("52341"), 4).unwrap(), p("52341"));

    let want = "{4:1, 5:1, 6:2, 7:2, 8:3, 9:2, 10:2, 11:1, 12:1}".to_string();
    for (x, y) in [("4312", "76"), ("2341", "98")] {
        let d = stats::distribution(&st("maj"), &shuffles(&p(x), &p(y)).unwrap());
        c.eq(
            &format!("maj over {x} shuffle {y}"),
            d.to_string(),
            want.clone(),
        );
    }
    let d = stats::distribution(&st("Pk"), &shuffles(&p("241"), &p("73")).unwrap());
    c.eq(
        "Pk over 241 shuffle 73",
        d.to_string(),
        "{[2]:2, [3]:4, [4]:2, [2,4]:2}".to_string(),
    );

    let elapsed = start.elapsed();
    c.eq("runtime under 1s", elapsed < Duration::from_secs(1), true);
    c.verdict(&format!(", {elapsed:.2?}"))
}

fn criterion_2() -> Verdict {
    let mut pairs = 0usize;
    for total in 0..=8u32 {
        for m in 0..=total {
            let sigmas = all_permutations(&range(m, total));
            for pi in all_permutations(&range(0, m)) {
                for sigma in &sigmas {
                    pairs += 1;
                    let sh = shuffles(&pi, sigma).unwrap();
                    if gen_poly(&st("maj"), &sh).unwrap() != stanley_rhs(&pi, sigma).unwrap() {
                        return Verdict::new(
                            false,
                            format!("maj identity fails at pi={pi}, sigma={sigma}"),
                        );
                    }
                    for k in 0..=total as usize {
                        let sub = shuffles_with_k_descents(&pi, sigma, k).unwrap();
                        if gen_poly(&st("maj"), &sub).unwrap()
                            != stanley_refined_rhs(&pi, sigma, k).unwrap()
                        {
                            return Verdict::new(
                                false,
                                format!("refined identity fails at pi={pi}, sigma={sigma}, k={k}"),
                            );
                        }
                    }
                }
            }
        }
    }
    // the library's parallel checker must agree
    let lim = Limits::default();
    for total in 0..=8usize {
        for m in 0..=total {
            for which in [
                IdentityKind::Maj,
                IdentityKind::MajDes,
                IdentityKind::WordBase,
            ] {
                let r = check_identity(which, m, total - m, &lim).unwrap();
                if !r.passed() {
                    return Verdict::new(
                        false,
                        format!("check_identity({which}, {m}, {}): {r}", total - m),
                    );
                }
            }
        }
    }
    Verdict::new(true, format!("{pairs} pairs, m+n <= 8"))
}

fn criterion_3() -> Verdict {
    let names = [
        "Des",
        "Asc",
        "Pk",
        "Val",
        "Lpk",
        "Rpk",
        "Epk",
        "Lval",
        "Rval",
        "Eval",
        "des",
        "maj",
        "(maj,des)",
        "pk",
        "lpk",
        "rpk",
        "epk",
        "udr",
        "(udr,pk)",
    ];
    let lim = Limits::default();
    let mut cases = 0u64;
    for name in names {
        for total in 0..=7usize {
            for m in 0..=total {
                for mode in [CompatMode::ReducedPi, CompatMode::ReducedSigma] {
                    let r = check_compatibility(&st(name), m, total - m, mode, &lim).unwrap();
                    cases += r.cases_checked;
                    if !r.passed() {
                        return Verdict::new(false, r.to_string().replace('\n', " | "));
                    }
                }
            }
        }
    }
    Verdict::new(
        true,
        format!(
            "{} statistics, both reduced modes, m+n <= 7, {cases} cases",
            names.len()
        ),
    )
}

fn criterion_4() -> Verdict {
    let mut audited = 0u64;
    for (stat, _) in supported_statistics() {
        for total in 0..=6u32 {
            for m in 0..=total {
                let sigmas = all_permutations(&range(m, total));
                for pi in all_permutations(&range(0, m)) {
                    for sigma in &sigmas {
                        let r = match check_bijection_pipeline(&stat, &pi, sigma) {
                            Ok(r) => r,
                            Err(e) => {
                                return Verdict::new(
                                    false,
                                    format!("{stat} on ({pi} | {sigma}): {e}"),
                                )
                            }
                        };
                        audited += r.cases_checked;
                        if !r.passed() {
                            return Verdict::new(false, r.to_string().replace('\n', " | "));
                        }
                    }
                }
            }
        }
    }
    Verdict::new(
        true,
        format!("9 pipelines, m+n <= 6, {audited} shuffles replayed"),
    )
}

fn criterion_5() -> Verdict {
    let mut count = 0;
    for m in 2..=8u32 {
        for pi in all_permutations(&range(0, m)) {
            count += 1;
            let (lpk, pk) = (
                stats::lpk_set(&pi).len() as i64,
                stats::pk_set(&pi).len() as i64,
            );
            let (cm, cp, udr) = (stats::chi_minus(&pi), stats::chi_plus(&pi), stats::udr(&pi));
            let epk: BTreeSet<usize> = stats::epk_set(&pi).into_iter().collect();
            let union: BTreeSet<usize> = stats::lpk_set(&pi)
                .into_iter()
                .chain(stats::rpk_set(&pi))
                .collect();
            if udr != 2 * lpk + cp || udr != 2 * pk + 2 * cm + cp || lpk != pk + cm || epk != union
            {
                return Verdict::new(false, format!("identity fails at {pi}"));
            }
        }
    }
    Verdict::new(true, format!("{count} permutations, 2 <= m <= 8"))
}

fn criterion_6() -> Verdict {
    let lim = Limits::default();
    let mut parts = Vec::new();
    for (name, bound) in [("inv", 3), ("biruns", 7)] {
        let r = find_counterexample(&st(name), bound, &lim).unwrap();
        let Some(w) = r.witness.as_ref().filter(|_| r.outcome == Outcome::Fail) else {
            return Verdict::new(
                false,
                format!("no witness for {name} within m+n <= {bound}"),
            );
        };
        if !w.reverify().unwrap() {
            return Verdict::new(false, format!("{name} witness does not re-verify: {w}"));
        }
        parts.push(format!("{name}: {}", w.to_string().replace('\n', " ")));
    }
    Verdict::new(true, parts.join("; "))
}

fn criterion_7() -> Verdict {
    let r = check_inv_maj_equidistribution(8, &Limits::default()).unwrap();
    let detail = match &r.witness {
        Some(w) => format!("first mismatch {}", w.to_string().replace('\n', " ")),
        None => format!("{} pairs", r.cases_checked),
    };
    Verdict::new(r.passed(), detail)
}

fn criterion_8() -> Verdict {
    let lim = Limits::default();
    let mut cases = 0;
    for total in 0..=7usize {
        for m in 0..=total {
            let r = check_conjecture_udr_pk_des(m, total - m, &lim).unwrap();
            cases += r.cases_checked;
            let labelled = r
                .note
                .as_deref()
                .is_some_and(|n| n.starts_with("evidence, not proof"));
            if !r.passed() || !labelled {
                return Verdict::new(false, r.to_string().replace('\n', " | "));
            }
        }
    }
    Verdict::new(
        true,
        format!("m+n <= 7, {cases} cases, labelled evidence, not proof"),
    )
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("golden worked examples", criterion_1),
        ("maj identities, m+n <= 8", criterion_2),
        ("compatibility sweep, reduced modes, m+n <= 7", criterion_3),
        ("bijection audits, m+n <= 6", criterion_4),
        ("structural identities, 2 <= m <= 8", criterion_5),
        ("counterexamples for inv and biruns", criterion_6),
        (
            "inv/maj equidistribution over shuffle sets, m+n <= 8",
            criterion_7,
        ),
        ("(udr,pk,des) evidence, m+n <= 7", criterion_8),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        let tag = if v.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!v.pass);
        println!(
            "criterion {}: {tag} {name} [{:.2?}] {}",
            k + 1,
            start.elapsed(),
            v.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
