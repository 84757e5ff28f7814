//! Acceptance suite: one line per criterion, nonzero exit if any gating
//! criterion fails.

use std::time::{Duration, Instant};

use clap::Parser;
use kneser_lab::alternation::{alt_under_perm, alternation_number, Permutation};
use kneser_lab::corpus::{corpus, random_hypergraph, CorpusSpec};
use kneser_lab::defect::{colorability_defect, usual_defect_formula};
use kneser_lab::generators::{complete_ksubsets, kneser, stable_kneser, usual_kneser};
use kneser_lab::solver::{afl_formula, chromatic_number, Chi};
use kneser_lab::tucker::{verify_reduction, ReductionVariant};
use kneser_lab::{Coloring, MaterializeCaps, ProductSpace, SignedVector};
use kneser_lab_cli::{run, Cli};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

struct Criterion {
    id: &'static str,
    title: &'static str,
    limit: Duration,
    gating: bool,
    body: fn() -> Outcome,
}

fn chi_of<'a>(t: impl Into<kneser_lab::solver::Target<'a>>) -> Result<usize, String> {
    match chromatic_number(t).map_err(|e| e.to_string())?.chi {
        Chi::Value(v) => Ok(v),
        Chi::Uncolorable => Err("uncolorable".into()),
    }
}

fn afl_agreement() -> Outcome {
    let mut grid = Vec::new();
    for k in [2, 3] {
        for n in 2 * k..=2 * k + 3 {
            grid.push((n, k, 2));
        }
    }
    for n in 6..=9 {
        grid.push((n, 2, 3));
    }
    for &(n, k, r) in &grid {
        let kg = usual_kneser(n, k, r).map_err(|e| e.to_string())?.hypergraph;
        let chi = chi_of(&kg)?;
        let want = afl_formula(n, k, r).map_err(|e| e.to_string())?;
        if chi != want {
            return Err(format!("KG^{r}({n},{k}): chi {chi} != formula {want}"));
        }
    }
    Ok(format!("{} instances agree", grid.len()))
}

fn defect_formula() -> Outcome {
    let mut count = 0;
    for r in 2..=4 {
        for k in 1..=3 {
            for n in k..=7 {
                let h = complete_ksubsets(n, k).map_err(|e| e.to_string())?;
                let cd = colorability_defect(&h, r).map_err(|e| e.to_string())?;
                let want = usual_defect_formula(n, k, r).map_err(|e| e.to_string())?;
                if cd != want {
                    return Err(format!("(n,k,r)=({n},{k},{r}): cd {cd} != {want}"));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} instances agree"))
}

fn corpus_bounds() -> Outcome {
    let hs = corpus(&CorpusSpec::new(42, 50, 6, 0.3)).map_err(|e| e.to_string())?;
    let mut checks = 0;
    for (i, h) in hs.iter().enumerate() {
        for r in [2usize, 3] {
            let kg = kneser(h, r).map_err(|e| e.to_string())?.hypergraph;
            let chi = chi_of(&kg)?;
            let cd = colorability_defect(h, r).map_err(|e| e.to_string())?;
            let alt = alternation_number(h, r).map_err(|e| e.to_string())?.value;
            let gap = h.n() - alt;
            if chi < cd.div_ceil(r - 1) || chi < gap.div_ceil(r - 1) || gap < cd {
                return Err(format!(
                    "corpus #{i} r={r}: chi={chi} cd={cd} n-alt={gap} ({h:?})"
                ));
            }
            checks += 3;
        }
    }
    Ok(format!("{checks} inequalities hold on 50 hypergraphs"))
}

fn product_chi(factors: &[(usize, usize)], r: usize) -> Result<usize, String> {
    let kgs = factors
        .iter()
        .map(|&(n, k)| usual_kneser(n, k, r).map(|kg| kg.hypergraph))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let space = ProductSpace::new(kgs).map_err(|e| e.to_string())?;
    chi_of(&space)
}

fn product_instances() -> Outcome {
    for (factors, r, want) in [
        (vec![(5, 2), (6, 2)], 2, 3),
        (vec![(4, 2), (4, 2)], 2, 2),
        (vec![(6, 2), (6, 2)], 3, 2),
    ] {
        let chi = product_chi(&factors, r)?;
        if chi != want {
            return Err(format!("{factors:?} r={r}: chi {chi} != {want}"));
        }
    }
    Ok("3 products match".into())
}

fn product_extended() -> Outcome {
    let chi = product_chi(&[(6, 2), (6, 2)], 2)?;
    if chi != 4 {
        return Err(format!("KG(6,2) x KG(6,2): chi {chi} != 4"));
    }
    Ok("KG(6,2) x KG(6,2) = 4".into())
}

fn stable_instance() -> Outcome {
    let (n, k, r) = (7, 2, 3);
    let kg = stable_kneser(n, k, r).map_err(|e| e.to_string())?.hypergraph;
    let chi = chi_of(&kg)?;
    let formula = (n - r * (k - 1)).div_ceil(r - 1);
    if (n - k) % (r - 1) == 0 {
        return Err("r-1 divides n-k".into());
    }
    if chi != 2 || formula != 2 {
        return Err(format!("chi {chi}, formula {formula}"));
    }
    Ok("chi = 2 = ceil((7-3)/2)".into())
}

fn certify(args: &[&str], alpha: usize, m: usize) -> Result<(), String> {
    let mut argv = vec!["kneser-lab", "certify"];
    argv.extend_from_slice(args);
    let cli = Cli::try_parse_from(&argv).map_err(|e| e.to_string())?;
    let out = run(&cli).map_err(|e| format!("{e:#}"))?;
    let report = &out.report["report"];
    let violations = report["violations"].as_array().map_or(0, Vec::len);
    if !out.violations.is_empty() || violations != 0 || out.report["passed"] != true {
        return Err(format!("{args:?}: {:?}", out.violations));
    }
    if report["alpha"] != alpha || report["m"] != m {
        return Err(format!("{args:?}: alpha {} m {}", report["alpha"], report["m"]));
    }
    Ok(())
}

fn tucker_certification() -> Outcome {
    certify(&["--factor", "complete-ksubsets:n=4,k=2", "--p", "2"], 3, 4)?;
    certify(
        &[
            "--factor",
            "complete-ksubsets:n=4,k=2",
            "--factor",
            "complete-ksubsets:n=4,k=2",
            "--p",
            "2",
        ],
        7,
        8,
    )?;
    certify(&["--factor", "complete-ksubsets:n=6,k=2", "--p", "3"], 5, 6)?;
    Ok("3 certificates pass exhaustively".into())
}

fn reductions() -> Outcome {
    let mut hs = Vec::new();
    for n in 2..=5 {
        hs.push(complete_ksubsets(n, 2).map_err(|e| e.to_string())?);
    }
    hs.extend(corpus(&CorpusSpec::new(42, 20, 5, 0.3)).map_err(|e| e.to_string())?);
    let mut checks = 0;
    for h in &hs {
        for c in [1, 2] {
            let check = verify_reduction(h, 2, 2, c, ReductionVariant::Defect).map_err(|e| e.to_string())?;
            if !check.holds {
                return Err(format!("{check:?} on {h:?}"));
            }
            checks += 1;
        }
    }
    let k52 = complete_ksubsets(5, 2).map_err(|e| e.to_string())?;
    let check = verify_reduction(&k52, 2, 2, 1, ReductionVariant::Alternation).map_err(|e| e.to_string())?;
    if !check.holds {
        return Err(format!("{check:?}"));
    }
    Ok(format!("{} defect checks and 1 alternation check hold", checks))
}

/// Longest subsequence with no two consecutive equal terms.
fn alt_dp(x: &SignedVector, pi: &Permutation, r: usize) -> usize {
    let mut best = vec![0usize; r];
    for &i in pi.sequence() {
        if let Some(a) = x.entries()[i - 1] {
            let other = (0..r).filter(|&v| v != a as usize).map(|v| best[v]).max().unwrap_or(0);
            best[a as usize] = best[a as usize].max(other + 1);
        }
    }
    best.into_iter().max().unwrap_or(0)
}

fn oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let caps = MaterializeCaps::default();
    let (mut proper, mut improper) = (0, 0);
    for _ in 0..100 {
        let factors: Vec<_> = (0..2)
            .map(|_| {
                let n = rng.gen_range(1..=4);
                let mut edges = random_hypergraph(&mut rng, n, 0.3).unwrap().edges().to_vec();
                edges.shuffle(&mut rng);
                edges.truncate(3);
                kneser_lab::Hypergraph::new(n, edges).unwrap()
            })
            .collect();
        let space = ProductSpace::new(factors.clone()).map_err(|e| e.to_string())?;
        let mat = space.product_minimal_edges(&caps).map_err(|e| e.to_string())?;
        let len = space.num_vertices();
        let mut colorings = Vec::new();
        for _ in 0..100 {
            let c = rng.gen_range(1..=4);
            colorings.push(Coloring::new((0..len).map(|_| rng.gen_range(1..=c)).collect(), c).unwrap());
        }
        if let Ok(res) = chromatic_number(&factors[0]) {
            if let Some(w) = res.witness {
                colorings.push(space.pullback(0, &w).map_err(|e| e.to_string())?);
            }
        }
        for c in &colorings {
            let a = space.product_is_proper(c);
            if a != mat.is_proper(c) {
                return Err(format!("disagreement on {factors:?} with {c:?}"));
            }
            if a {
                proper += 1;
            } else {
                improper += 1;
            }
        }
    }
    for _ in 0..1000 {
        let r = *[2usize, 3, 5].choose(&mut rng).unwrap();
        let n = rng.gen_range(1..=12);
        let entries = (0..n)
            .map(|_| {
                let d = rng.gen_range(0..=r);
                (d > 0).then(|| (d - 1) as u8)
            })
            .collect();
        let x = SignedVector::new(r, entries).unwrap();
        let mut seq: Vec<usize> = (1..=n).collect();
        seq.shuffle(&mut rng);
        let pi = Permutation::new(seq).unwrap();
        if alt_under_perm(&x, &pi) != alt_dp(&x, &pi, r) {
            return Err(format!("greedy and DP differ on {x:?} under {pi:?}"));
        }
    }
    Ok(format!(
        "product properness agrees ({proper} proper, {improper} improper); greedy alt = DP on 1000 vectors"
    ))
}

fn main() {
    let criteria = [
        Criterion {
            id: "1",
            title: "chromatic number matches the AFL formula",
            limit: Duration::from_secs(300),
            gating: true,
            body: afl_agreement,
        },
        Criterion {
            id: "2",
            title: "defect of complete k-subsets matches max(0, n - r(k-1))",
            limit: Duration::from_secs(120),
            gating: true,
            body: defect_formula,
        },
        Criterion {
            id: "3",
            title: "defect and alternation lower bounds on the seeded corpus",
            limit: Duration::from_secs(600),
            gating: true,
            body: corpus_bounds,
        },
        Criterion {
            id: "4",
            title: "product chromatic numbers equal the least factor",
            limit: Duration::from_secs(600),
            gating: true,
            body: product_instances,
        },
        Criterion {
            id: "4-ext",
            title: "KG(6,2) x KG(6,2) = 4 (non-gating)",
            limit: Duration::from_secs(1800),
            gating: false,
            body: product_extended,
        },
        Criterion {
            id: "5",
            title: "2-stable KG^3(7,2) has chromatic number 2",
            limit: Duration::from_secs(120),
            gating: true,
            body: stable_instance,
        },
        Criterion {
            id: "6",
            title: "Tucker certification of the three certify instances",
            limit: Duration::from_secs(600),
            gating: true,
            body: tucker_certification,
        },
        Criterion {
            id: "7",
            title: "reduction inequalities",
            limit: Duration::from_secs(600),
            gating: true,
            body: reductions,
        },
        Criterion {
            id: "8",
            title: "oracle cross-checks",
            limit: Duration::from_secs(120),
            gating: true,
            body: oracles,
        },
    ];

    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.body)();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > c.limit => Err(format!("{msg}, but over the {:?} limit", c.limit)),
            other => other,
        };
        let (status, detail) = match &outcome {
            Ok(msg) => ("PASS", msg.clone()),
            Err(msg) => ("FAIL", msg.clone()),
        };
        println!(
            "criterion {:<5} {status}  {} ({:.2}s): {detail}",
            c.id,
            c.title,
            elapsed.as_secs_f64()
        );
        if outcome.is_err() && c.gating {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("acceptance: {failed} criteria failed");
        std::process::exit(1);
    }
    println!("acceptance: all gating criteria pass");
}
