//! End-to-end acceptance checks. Runs as a plain binary so that each
//! criterion prints one PASS/FAIL line; exits non-zero if any fails.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use ppl::cli::{run, Command, Options};
use ppl::error::Error;
use ppl::group::{FiniteGroup, DEFAULT_ENUMERATION_BOUND};
use ppl::input::parse_product;
use ppl::period::{
    enumerate_certified, nine_power_runs, nine_power_scan, NinePower, DEFAULT_NODE_BUDGET,
};
use ppl::scan::{default_families, exhaustive_scan};
use ppl::theorem::{
    hopfian_verdict, inheritably_normal_verdict, run_proof_word, simplicity_verdict, Answer,
    ProofBindings, ProofWord,
};
use ppl::word::{CyclicWord, FactorFamily, Mode, Word};
use rand_xoshiro::rand_core::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn family(groups: Vec<FiniteGroup>, n: u64) -> Arc<FactorFamily> {
    FactorFamily::new(
        groups
            .into_iter()
            .enumerate()
            .map(|(i, g)| (format!("g{}", i + 1), g))
            .collect(),
        n,
        Mode::Strict,
    )
    .expect("valid family")
}

fn cyc(r: usize) -> FiniteGroup {
    FiniteGroup::cyclic(r).unwrap()
}

fn below(rng: &mut SplitMix64, n: usize) -> usize {
    ((rng.next_u64() as u128 * n as u128) >> 64) as usize
}

fn lemma1_oracle() -> Check {
    let start = Instant::now();
    let mut pairs = 0;
    let mut reduced = 0;
    for f in default_families().map_err(|e| e.to_string())? {
        let r = exhaustive_scan(&f, 4);
        ensure(r.ok(), format!("mismatch: {:?}", r.first_mismatch))?;
        ensure(r.reduced == r.witnessed, "unwitnessed products")?;
        pairs += r.pairs;
        reduced += r.reduced;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(pairs >= 10_000, format!("only {pairs} pairs"))?;
    ensure(secs < 60.0, format!("took {secs:.1}s"))?;
    Ok(format!(
        "pairs={pairs} reduced={reduced} mismatches=0 time={secs:.1}s"
    ))
}

/// Direct cyclic check of every period, start and window length.
fn naive_nine_power<T: Eq>(seq: &[T]) -> Option<NinePower> {
    let len = seq.len();
    for p in 2..len {
        let need = 9 * p;
        if need > len {
            break;
        }
        for start in 0..len {
            let periodic =
                |l: usize| (0..l - p).all(|j| seq[(start + j) % len] == seq[(start + j + p) % len]);
            if periodic(need) {
                let mut run = need;
                while run < len && periodic(run + 1) {
                    run += 1;
                }
                return Some(NinePower {
                    period: p,
                    start,
                    run,
                });
            }
        }
    }
    None
}

fn nine_power_oracle() -> Check {
    let families = [
        family(vec![cyc(2), cyc(2)], 665),
        family(vec![cyc(2), cyc(3)], 665),
        family(vec![cyc(3), cyc(3)], 665),
        family(
            vec![cyc(2), FiniteGroup::symmetric(3).unwrap(), cyc(2)],
            665,
        ),
    ];
    let mut rng = SplitMix64::seed_from_u64(2024);
    let mut words = 0;
    let mut hits = 0;
    while words < 10_000 {
        let f = &families[words % families.len()];
        let alphabet = f.alphabet();
        let target = 2 + below(&mut rng, 59);
        // half the words repeat a short block to plant long periodic runs
        let block = if words % 2 == 0 {
            2 + below(&mut rng, 5)
        } else {
            target
        };
        let mut letters = Vec::new();
        while letters.len() < block {
            let s = alphabet[below(&mut rng, alphabet.len())];
            if letters
                .last()
                .is_none_or(|l: &(usize, usize)| l.0 != s.factor)
            {
                letters.push((s.factor, s.element));
            }
        }
        let mut seq: Vec<(usize, usize)> = Vec::new();
        for i in 0..target {
            let s = letters[i % letters.len()];
            if seq.last().is_some_and(|l| l.0 == s.0) {
                continue;
            }
            seq.push(s);
        }
        if words % 4 == 1 {
            let i = below(&mut rng, seq.len());
            let s = alphabet[below(&mut rng, alphabet.len())];
            seq[i] = (s.factor, s.element);
        }
        let w = Word::reduce(f, seq).map_err(|e| e.to_string())?;
        let core = CyclicWord::from_core(&w);
        let syl = core.word().syllables();
        let naive = naive_nine_power(syl);
        let scan = nine_power_scan(syl);
        let runs = nine_power_runs(syl);
        ensure(
            scan == naive && runs == naive,
            format!(
                "disagreement on {}: naive {naive:?} scan {scan:?} runs {runs:?}",
                w.to_literal()
            ),
        )?;
        hits += naive.is_some() as usize;
        words += 1;
    }
    ensure(hits > 100, format!("only {hits} words contained a 9-power"))?;
    Ok(format!("words={words} with_power={hits} disagreements=0"))
}

fn proof_words() -> Check {
    let named = |r: usize, g: &str| FiniteGroup::cyclic_named(r, g).unwrap();
    let cases = [
        (
            family(vec![named(9, "x"), named(3, "b")], 665),
            ProofWord::CaseOne,
            ProofBindings {
                a: Some(3),
                g: Some(1),
                b1: Some(1),
                b2: Some(2),
                ..Default::default()
            },
            6,
        ),
        (
            family(vec![named(9, "x"), named(2, "b")], 665),
            ProofWord::CaseTwo,
            ProofBindings {
                a1: Some(3),
                a2: Some(6),
                g: Some(1),
                b: Some(1),
                ..Default::default()
            },
            8,
        ),
        (
            family(vec![cyc(6), named(2, "b")], 665),
            ProofWord::InvolutionPair,
            ProofBindings {
                a: Some(3),
                g: Some(1),
                b: Some(1),
                ..Default::default()
            },
            4,
        ),
        (
            family(vec![FiniteGroup::dihedral(2).unwrap(), named(2, "b")], 665),
            ProofWord::InvolutionPalindrome,
            ProofBindings {
                a: Some(1),
                g: Some(2),
                b: Some(1),
                ..Default::default()
            },
            8,
        ),
    ];
    let mut summary = Vec::new();
    for (f, kind, bindings, len) in cases {
        let r = run_proof_word(&f, &bindings, kind)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("{} bindings incomplete", kind.as_str()))?;
        ensure(
            r.word.len() == len,
            format!("{} has length {}", kind.as_str(), r.word.len()),
        )?;
        ensure(
            r.class.is_certified(),
            format!("{} is {}", kind.as_str(), r.class.tag()),
        )?;
        ensure(
            r.congruence && r.power_congruence,
            format!("{} congruence fails", kind.as_str()),
        )?;
        summary.push(kind.as_str());
    }
    Ok(format!("certified+congruent: {}", summary.join(",")))
}

fn verdict_table() -> Check {
    let s3 = FiniteGroup::symmetric(3).unwrap();
    let rows = [
        ("simple", family(vec![cyc(3), cyc(3)], 665), Answer::Yes),
        ("simple", family(vec![cyc(5), cyc(5)], 665), Answer::No),
        (
            "simple",
            family(vec![s3, cyc(3)], 665),
            Answer::Inapplicable,
        ),
        (
            "hopfian",
            family(vec![cyc(1995), cyc(1995)], 665),
            Answer::Yes,
        ),
        (
            "simple",
            family(vec![cyc(1995), cyc(1995)], 665),
            Answer::No,
        ),
        (
            "hopfian",
            family(vec![cyc(5), cyc(7)], 665),
            Answer::Undetermined,
        ),
    ];
    for (question, f, expected) in &rows {
        let v = if *question == "simple" {
            simplicity_verdict(f)
        } else {
            hopfian_verdict(f)
        };
        ensure(
            v.answer == *expected,
            format!(
                "{question} on {:?}: {} (expected {expected})",
                f.factors()
                    .iter()
                    .map(|x| x.group.name())
                    .collect::<Vec<_>>(),
                v.answer
            ),
        )?;
    }
    let f = family(vec![cyc(1995), cyc(3)], 665);
    let g = f.factor(0);
    let mut yes = Vec::new();
    for n in g
        .normal_subgroups(DEFAULT_ENUMERATION_BOUND)
        .map_err(|e| e.to_string())?
    {
        if !n.is_trivial()
            && inheritably_normal_verdict(&f, 0, &n)
                .map_err(|e| e.to_string())?
                .answer
                == Answer::Yes
        {
            yes.push(n.order());
        }
    }
    ensure(
        yes.len() == 8,
        format!("{} inheritably normal subgroups", yes.len()),
    )?;
    ensure(yes.iter().all(|o| o % 3 == 0), format!("orders {yes:?}"))?;
    Ok(format!(
        "{} rows; Z1995 inheritably normal orders {yes:?}",
        rows.len()
    ))
}

/// All subgroups by closing `{e}` under "join one more element", then a
/// direct conjugation test for normality.
fn brute_normal_subgroups(g: &FiniteGroup) -> BTreeSet<Vec<usize>> {
    let k = g.order();
    let close = |seed: &[usize]| -> Vec<usize> {
        let mut set: BTreeSet<usize> = seed.iter().copied().collect();
        set.insert(g.identity());
        loop {
            let items: Vec<usize> = set.iter().copied().collect();
            let before = set.len();
            for &x in &items {
                for &y in &items {
                    set.insert(g.mul(x, y));
                }
            }
            if set.len() == before {
                return set.into_iter().collect();
            }
        }
    };
    let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut frontier = vec![close(&[])];
    while let Some(h) = frontier.pop() {
        if !all.insert(h.clone()) {
            continue;
        }
        for x in 0..k {
            if h.binary_search(&x).is_err() {
                let mut seed = h.clone();
                seed.push(x);
                frontier.push(close(&seed));
            }
        }
    }
    all.into_iter()
        .filter(|h| {
            (0..k).all(|x| {
                h.iter()
                    .all(|&m| h.binary_search(&g.mul(g.mul(x, m), g.inv(x))).is_ok())
            })
        })
        .collect()
}

fn corpus() -> Vec<FiniteGroup> {
    let mut out: Vec<FiniteGroup> = (1..=24).map(cyc).collect();
    out.extend((2..=12).map(|r| FiniteGroup::dihedral(r).unwrap()));
    out.extend((1..=4).map(|k| FiniteGroup::symmetric(k).unwrap()));
    out.push(FiniteGroup::quaternion().unwrap());
    let v4 = FiniteGroup::dihedral(2).unwrap();
    let s3 = FiniteGroup::symmetric(3).unwrap();
    let q8 = FiniteGroup::quaternion().unwrap();
    for (a, b) in [
        (&v4, &cyc(2)),
        (&s3, &cyc(3)),
        (&s3, &cyc(4)),
        (&s3, &v4),
        (&q8, &cyc(3)),
        (&q8, &cyc(2)),
        (&FiniteGroup::dihedral(4).unwrap(), &cyc(3)),
        (&FiniteGroup::dihedral(4).unwrap(), &cyc(2)),
        (&cyc(4), &cyc(4)),
        (&cyc(3), &cyc(3)),
        (&FiniteGroup::dihedral(6).unwrap(), &cyc(2)),
    ] {
        out.push(FiniteGroup::direct_product(a, b).unwrap());
    }
    out
}

fn normal_subgroup_lattice() -> Check {
    let corpus = corpus();
    let mut checked = 0;
    for g in &corpus {
        if g.order() > 24 {
            continue;
        }
        let ours: BTreeSet<Vec<usize>> = g
            .normal_subgroups(DEFAULT_ENUMERATION_BOUND)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|s| s.members().to_vec())
            .collect();
        ensure(
            ours == brute_normal_subgroups(g),
            format!("{} differs", g.name()),
        )?;
        checked += 1;
    }
    let count = |g: FiniteGroup| g.normal_subgroups(DEFAULT_ENUMERATION_BOUND).unwrap().len();
    let named = [
        ("Z12", count(cyc(12)), 6),
        ("S3", count(FiniteGroup::symmetric(3).unwrap()), 3),
        ("D4", count(FiniteGroup::dihedral(4).unwrap()), 6),
        ("Q8", count(FiniteGroup::quaternion().unwrap()), 6),
    ];
    for (name, got, want) in named {
        ensure(
            got == want,
            format!("{name}: {got} normal subgroups, expected {want}"),
        )?;
    }
    Ok(format!("{checked} groups match exhaustive search"))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn power_subgroup_gcd() -> Check {
    let mut rng = SplitMix64::seed_from_u64(665);
    let exponents = [665u64, 1995, 5 * 665];
    for _ in 0..100 {
        let r = 1 + below(&mut rng, 10_000);
        let n = exponents[below(&mut rng, 3)];
        let got = cyc(r).power_subgroup(n).order() as u64;
        let want = r as u64 / gcd(n, r as u64);
        ensure(got == want, format!("Z{r}^{n}: {got} != {want}"))?;
    }
    Ok("100 random (r, n) pairs".into())
}

fn write_spec(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ppl-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn enumeration() -> Check {
    let count = |f: &Arc<FactorFamily>| -> std::result::Result<usize, String> {
        let mut n = 0;
        for item in enumerate_certified(f, 2, DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())? {
            item.map_err(|e| e.to_string())?;
            n += 1;
        }
        Ok(n)
    };
    let z3 = count(&family(vec![cyc(3), cyc(3)], 665))?;
    let z2 = count(&family(vec![cyc(2), cyc(2)], 665))?;
    ensure(z3 == 4 && z2 == 0, format!("Z3*Z3: {z3}, Z2*Z2: {z2}"))?;
    let spec = write_spec(
        "z3z3.txt",
        "n 665\nfactor g1 cyclic 3\nfactor g2 cyclic 3\n",
    );
    let cmd = Command::Periods {
        spec,
        max_syllables: 2,
        limit: None,
    };
    let runs: Vec<String> = (0..3)
        .map(|_| run(&cmd, &Options::default()).stdout)
        .collect();
    ensure(
        runs[0] == runs[1] && runs[1] == runs[2],
        "reports differ across runs",
    )?;
    ensure(
        runs[0].lines().filter(|l| l.starts_with("PERIOD")).count() == 4,
        "report lacks 4 periods",
    )?;
    Ok(format!("Z3*Z3={z3} Z2*Z2={z2}; 3 identical reports"))
}

fn strict_gating() -> Check {
    for n in [663, 666] {
        let text = format!("n {n}\nfactor g1 cyclic 3\nfactor g2 cyclic 5\n");
        match parse_product(&text, None, None) {
            Err(Error::StrictViolation(_)) => {}
            other => return Err(format!("n = {n} strict: {other:?}")),
        }
        let spec = write_spec(&format!("n{n}.txt"), &text);
        let options = Options {
            lenient: true,
            ..Options::default()
        };
        let out = run(&Command::Analyze { spec }, &options);
        ensure(out.code == 0, format!("lenient n = {n} exit {}", out.code))?;
        let verdicts: Vec<&str> = out
            .stdout
            .lines()
            .filter(|l| l.starts_with("VERDICT"))
            .collect();
        ensure(!verdicts.is_empty(), "no verdict lines")?;
        ensure(
            verdicts
                .iter()
                .all(|l| l.contains("label=\"outside theorem hypotheses\"")),
            format!("unlabelled verdict at n = {n}"),
        )?;
    }
    Ok("n=663,666 rejected strictly; lenient verdicts labelled".into())
}

type Criterion = (&'static str, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("lemma1 oracle equivalence", lemma1_oracle),
        ("9-power detector vs naive oracle", nine_power_oracle),
        ("proof-word suite", proof_words),
        ("verdict table", verdict_table),
        ("normal-subgroup enumeration", normal_subgroup_lattice),
        ("power subgroup gcd formula", power_subgroup_gcd),
        ("certified period enumeration", enumeration),
        ("strict-mode gating", strict_gating),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    let _ = std::fs::remove_dir_all(
        std::env::temp_dir().join(format!("ppl-acceptance-{}", std::process::id())),
    );
    println!(
        "acceptance: {}/{} passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
