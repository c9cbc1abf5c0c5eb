//! Acceptance run: one PASS/FAIL line per criterion.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use lexdiv_core::baselines::{pseudo_summary, R1Component, RetrievalIndex};
use lexdiv_core::curate::{select_repetition_bounded, CountMode, Theta};
use lexdiv_core::harness::{
    classify_intervention, evaluate, make_interventions, EvalConfig, InterventionConfig, InterventionMode, Outcome,
};
use lexdiv_core::metrics::{entity_metrics, rouge_n, Denominator, HeuristicExtractor, StopWords};
use lexdiv_core::ngram::{percent_overlap, score_dataset, TableBuilder};
use lexdiv_core::partition::{default_min_samples, partition};
use lexdiv_core::rng::SplitMix64;
use lexdiv_core::{Dataset, NGramTable, OverlapMode, OverlapScore, Sample, SentenceSplitter, Split, Tokenizer};

type Check = fn() -> Result<String, String>;

fn main() -> ExitCode {
    let criteria: [(&str, Check); 9] = [
        ("overlap/partition oracle equivalence", overlap_partition_oracle),
        ("selection post-condition", selection_postcondition),
        ("ROUGE oracle", rouge_oracle),
        ("entity metric identities", entity_identities),
        ("novelty lowers retrieval R2", directional_reproduction),
        ("pseudo-summary brute force", pseudo_brute_force),
        ("intervention classifier", intervention_classifier),
        ("scale and throughput", scale_throughput),
        ("end-to-end CLI smoke", cli_smoke),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {}: PASS  {name} ({secs:.2}s) {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({secs:.2}s) {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("{what} took {took:.2?}, limit {limit:?}"))
}

fn pick<'a, T>(rng: &mut SplitMix64, items: &'a [T]) -> &'a T {
    &items[rng.below(items.len() as u64) as usize]
}

fn range(rng: &mut SplitMix64, lo: usize, hi: usize) -> usize {
    lo + rng.below((hi - lo + 1) as u64) as usize
}

/// `len` words drawn from `w0..w{vocab}`.
fn random_text(rng: &mut SplitMix64, vocab: usize, len: usize) -> String {
    (0..len).map(|_| format!("w{}", rng.below(vocab as u64))).collect::<Vec<_>>().join(" ")
}

fn random_corpus(rng: &mut SplitMix64, split: Split, size: usize, vocab: usize, max_len: usize) -> Dataset {
    let samples = (0..size)
        .map(|i| {
            let len = range(rng, 0, max_len);
            Sample::new(format!("s{i}"), "doc", random_text(rng, vocab, len))
        })
        .collect();
    Dataset::new("random", split, samples).unwrap()
}

fn naive_grams(tokens: &[String], n: usize) -> Vec<Vec<String>> {
    if tokens.len() < n {
        return Vec::new();
    }
    (0..=tokens.len() - n).map(|i| tokens[i..i + n].to_vec()).collect()
}

// 1

fn naive_partition(scores: &[(String, f64)], m: usize) -> Vec<(u32, Option<u32>, BTreeSet<String>)> {
    let members = |lo: u32, hi: Option<u32>| -> BTreeSet<String> {
        scores
            .iter()
            .filter(|(_, p)| *p >= f64::from(lo) && hi.is_none_or(|h| *p < f64::from(h)))
            .map(|(id, _)| id.clone())
            .collect()
    };
    let mut bins: Vec<(u32, Option<u32>, BTreeSet<String>)> = Vec::new();
    let mut lo = 0;
    loop {
        let closed = (1..).map(|k| lo + 5 * k).take_while(|u| *u < 100).find(|u| members(lo, Some(*u)).len() >= m);
        match closed {
            Some(u) => {
                bins.push((lo, Some(u), members(lo, Some(u))));
                lo = u;
            }
            None => {
                let rest = members(lo, None);
                match bins.last_mut() {
                    Some(prev) if rest.len() < m => {
                        prev.1 = None;
                        prev.2.extend(rest);
                    }
                    _ => bins.push((lo, None, rest)),
                }
                return bins;
            }
        }
    }
}

fn overlap_partition_oracle() -> Result<String, String> {
    let start = Instant::now();
    let tok = Tokenizer::default();
    let mut rng = SplitMix64::new(1);
    let mut bins_seen = 0;
    for corpus in 0..500 {
        let vocab = range(&mut rng, 2, 40);
        let n = range(&mut rng, 1, 4);
        let n_train = range(&mut rng, 1, 100);
        let n_test = range(&mut rng, 1, 50);
        let train = random_corpus(&mut rng, Split::Train, n_train, vocab, 14);
        let test = random_corpus(&mut rng, Split::Test, n_test, vocab, 14);
        let table = NGramTable::build(&train, n, &tok).map_err(|e| e.to_string())?;

        let mut train_grams: BTreeMap<Vec<String>, u64> = BTreeMap::new();
        for s in train.samples() {
            for g in naive_grams(&tok.words(&s.summary), n) {
                *train_grams.entry(g).or_insert(0) += 1;
            }
        }
        for mode in [OverlapMode::Set, OverlapMode::Multiset] {
            let scores = score_dataset(&test, &table, &tok, mode);
            for (s, got) in test.samples().iter().zip(&scores) {
                let mut grams = naive_grams(&tok.words(&s.summary), n);
                if mode == OverlapMode::Set {
                    grams.sort();
                    grams.dedup();
                }
                let matched = grams.iter().filter(|g| train_grams.contains_key(*g)).count();
                let expected = if grams.is_empty() { 0.0 } else { 100.0 * matched as f64 / grams.len() as f64 };
                ensure(got.percent == expected && got.matched == matched as u64, || {
                    format!("corpus {corpus} sample {}: {} vs oracle {expected}", s.id, got.percent)
                })?;
            }
            for g in naive_grams(&tok.words(&train.samples()[0].summary), n) {
                ensure(table.count_tokens(&g) == train_grams[&g], || format!("corpus {corpus}: count of {g:?}"))?;
            }

            let m = range(&mut rng, 1, 10);
            let set = partition(&scores, m).map_err(|e| e.to_string())?;
            let pairs: Vec<(String, f64)> = scores.iter().map(|s| (s.sample_id.clone(), s.percent)).collect();
            let oracle = naive_partition(&pairs, m);
            let got: Vec<(u32, Option<u32>, BTreeSet<String>)> = set
                .bins
                .iter()
                .map(|b| (b.lower as u32, b.upper.map(|u| u as u32), b.sample_ids.iter().cloned().collect()))
                .collect();
            ensure(got == oracle, || format!("corpus {corpus}: partition {got:?} vs oracle {oracle:?}"))?;
            bins_seen += got.len();
        }
    }
    within(start, Duration::from_secs(60), "500 corpora")?;
    Ok(format!("500 corpora, {bins_seen} bins"))
}

// 2

fn selection_postcondition() -> Result<String, String> {
    let start = Instant::now();
    let tok = Tokenizer::default();
    let mut rng = SplitMix64::new(2);
    let mut retained = 0;
    for corpus in 0..500 {
        let vocab = range(&mut rng, 2, 30);
        let size = range(&mut rng, 1, 100);
        let train = random_corpus(&mut rng, Split::Train, size, vocab, 14);
        let seed = rng.next_u64();
        for theta in [1u64, 2, 5] {
            let run = || {
                select_repetition_bounded(&train, 4, Theta::Finite(theta), seed, &tok, CountMode::Occurrences)
                    .map_err(|e| e.to_string())
            };
            let a = run()?;
            let b = run()?;
            ensure(a.retained_ids.join("\n").into_bytes() == b.retained_ids.join("\n").into_bytes(), || {
                format!("corpus {corpus} theta {theta}: reruns differ")
            })?;
            let mut counts: BTreeMap<Vec<String>, u64> = BTreeMap::new();
            for id in &a.retained_ids {
                for g in naive_grams(&tok.words(&train.get(id).unwrap().summary), 4) {
                    *counts.entry(g).or_insert(0) += 1;
                }
            }
            let max = counts.values().copied().max().unwrap_or(0);
            ensure(max <= theta, || format!("corpus {corpus} theta {theta}: recount found {max}"))?;
            retained += a.len();
        }
    }
    within(start, Duration::from_secs(60), "500 corpora")?;
    Ok(format!("{retained} samples retained in total"))
}

// 3

fn clipped_oracle(cand: &[String], refs: &[String], n: usize) -> f64 {
    let cg = naive_grams(cand, n);
    let rg = naive_grams(refs, n);
    let mut matched = 0;
    let mut seen: Vec<&Vec<String>> = Vec::new();
    for g in &cg {
        if seen.contains(&g) {
            continue;
        }
        seen.push(g);
        let in_c = cg.iter().filter(|x| *x == g).count();
        let in_r = rg.iter().filter(|x| *x == g).count();
        matched += in_c.min(in_r);
    }
    let p = if cg.is_empty() { 0.0 } else { matched as f64 / cg.len() as f64 };
    let r = if rg.is_empty() { 0.0 } else { matched as f64 / rg.len() as f64 };
    if p + r > 0.0 {
        2.0 * p * r / (p + r)
    } else {
        0.0
    }
}

fn rouge_oracle() -> Result<String, String> {
    let alphabet = ["a", "b", "c"];
    let mut seqs: Vec<Vec<String>> = vec![Vec::new()];
    let mut frontier = seqs.clone();
    for _ in 0..6 {
        frontier = frontier
            .iter()
            .flat_map(|s| {
                alphabet.iter().map(move |t| {
                    let mut next = s.clone();
                    next.push(t.to_string());
                    next
                })
            })
            .collect();
        seqs.extend(frontier.iter().cloned());
    }
    let mut pairs = 0u64;
    for c in &seqs {
        for r in &seqs {
            for n in [1, 2] {
                let got = rouge_n(c, r, n).f1;
                let expected = clipped_oracle(c, r, n);
                ensure((got - expected).abs() <= 1e-12, || format!("{c:?} vs {r:?} n={n}: {got} != {expected}"))?;
                pairs += 1;
            }
        }
    }
    let tok = Tokenizer::default();
    let worked = rouge_n(&tok.words("the cat sat"), &tok.words("the cat ran home"), 2).f1;
    ensure(worked == 0.4, || format!("worked example gave {worked}"))?;
    Ok(format!("{} sequences, {pairs} comparisons", seqs.len()))
}

// 4

const ENTITY_WORDS: &[&str] = &[
    "Alice Morgan",
    "Paris",
    "Leeds United",
    "1999",
    "2021-22",
    "£5m",
    "Oxford",
    "Bob",
    "the BBC",
    "Cardiff City",
    "40%",
    "Tuesday",
];
const PLAIN_WORDS: &[&str] = &["the", "match", "was", "played", "in", "a", "and", "report", "said", "of", "team"];

fn entity_text(rng: &mut SplitMix64) -> String {
    let sentences = range(rng, 1, 3);
    let mut out = Vec::new();
    for _ in 0..sentences {
        let len = range(rng, 3, 9);
        let mut words: Vec<String> = Vec::new();
        for i in 0..len {
            let w = if rng.below(3) == 0 { *pick(rng, ENTITY_WORDS) } else { *pick(rng, PLAIN_WORDS) };
            words.push(if i == 0 { capitalize(w) } else { w.to_string() });
        }
        out.push(format!("{}.", words.join(" ")));
    }
    out.join(" ")
}

fn capitalize(w: &str) -> String {
    let mut c = w.chars();
    c.next().map(|f| f.to_uppercase().chain(c).collect()).unwrap_or_default()
}

fn entity_identities() -> Result<String, String> {
    let ex = HeuristicExtractor::default();
    let mut rng = SplitMix64::new(4);
    let mut defined = 0;
    for i in 0..10_000 {
        let (g, r, s) = (entity_text(&mut rng), entity_text(&mut rng), entity_text(&mut rng));
        let m = entity_metrics("x", &g, &r, &s, &ex, Denominator::Generated).map_err(|e| e.to_string())?;
        let Some(prc) = m.e_prc else { continue };
        defined += 1;
        let rec = m.e_rec.unwrap();
        let rem = m.e_rem.unwrap();
        let pir = m.percent_in_reference().unwrap();
        ensure(rec <= prc, || format!("triple {i}: e_rec {rec} > e_prc {prc}"))?;
        // exact on counts; the percentages carry one rounding each
        ensure(m.n_in_ref_and_src + m.n_in_ref_not_src == m.n_in_ref, || format!("triple {i}: counts {m:?}"))?;
        ensure((rec + rem - pir).abs() <= 1e-12 * pir.max(1.0), || format!("triple {i}: {rec} + {rem} != {pir}"))?;
    }
    let mut grew = 0;
    for i in 0..1_000 {
        let (g, r, s) = (entity_text(&mut rng), entity_text(&mut rng), entity_text(&mut rng));
        let bigger = format!("{s} {}", entity_text(&mut rng));
        let a = entity_metrics("x", &g, &r, &s, &ex, Denominator::Generated).map_err(|e| e.to_string())?;
        let b = entity_metrics("x", &g, &r, &bigger, &ex, Denominator::Generated).map_err(|e| e.to_string())?;
        if a.e_prc.is_none() {
            continue;
        }
        ensure(b.e_prc >= a.e_prc && b.e_rec >= a.e_rec && b.e_rem <= a.e_rem, || {
            format!(
                "pair {i}: {:?}/{:?}/{:?} then {:?}/{:?}/{:?}",
                a.e_rec, a.e_prc, a.e_rem, b.e_rec, b.e_prc, b.e_rem
            )
        })?;
        grew += usize::from(b.e_prc > a.e_prc);
    }
    Ok(format!("{defined} defined triples, precision grew in {grew} nested pairs"))
}

// 5

const PEOPLE: &[&str] = &[
    "Alice Morgan",
    "Brian Hale",
    "Chloe Dunn",
    "Daniel Reyes",
    "Emma Clarke",
    "Frank Osei",
    "Grace Patel",
    "Harry Quinn",
    "Isla Brennan",
    "Jack Turner",
    "Karen Walsh",
    "Liam Foster",
    "Maya Singh",
    "Noah Price",
    "Olivia Grant",
    "Peter Lloyd",
    "Rachel Moss",
    "Samuel Idowu",
    "Tara Kelly",
    "Victor Lane",
];
const CITIES: &[&str] = &[
    "Leeds", "Bristol", "Cardiff", "Glasgow", "Belfast", "Norwich", "Exeter", "Dundee", "Swansea", "Preston",
    "Lincoln", "Bath", "Chester", "Derby", "Perth",
];
const TEAMS: &[&str] =
    &["Rovers", "Albion", "Wanderers", "Athletic", "Harriers", "Thistle", "Rangers", "Dynamos", "Comets", "Falcons"];
const ORGS: &[&str] = &[
    "Northwind Energy",
    "Castle Bank",
    "Riverside Trust",
    "Apex Foods",
    "Harbour Rail",
    "Summit Media",
    "Kestrel Labs",
    "Orchard Homes",
];
const FILLER: &[&str] = &[
    "The details were shared in a statement on Monday.",
    "Local residents described the news as significant.",
    "Further updates are expected later this week.",
    "A spokesperson declined to comment further.",
    "The announcement followed months of speculation.",
    "Officials said the figures would be reviewed.",
    "Several witnesses spoke to reporters at the scene.",
    "The decision was welcomed by community groups.",
];

struct Template {
    summary: &'static str,
    /// Document sentences; the first is always kept, the rest may be dropped.
    document: &'static [&'static str],
}

const TRAIN_TEMPLATES: &[Template] = &[
    Template {
        summary: "{T} beat {U} {N}-1 in the cup final at {C} on Saturday.",
        document: &["{T} and {U} met in a tense cup final.", "The game was played in {C}.", "{T} scored {N} goals."],
    },
    Template {
        summary: "{P} has been appointed chief executive of {O} after {N} years at the firm.",
        document: &[
            "{O} confirmed a change at the top of the company.",
            "{P} will lead the business.",
            "The new boss spent {N} years there.",
        ],
    },
    Template {
        summary: "Police in {C} have arrested {P} after a robbery at a branch of {O}.",
        document: &["Officers were called to a robbery at {O}.", "The incident happened in {C}.", "{P} was detained."],
    },
    Template {
        summary: "{P} scored twice as {T} won the {Y} league title in front of their fans.",
        document: &["{T} secured the championship.", "{P} found the net twice.", "It was their first title since {Y}."],
    },
    Template {
        summary: "Flooding in {C} has forced {N} families to leave their homes overnight.",
        document: &[
            "Heavy rain caused rivers to burst their banks.",
            "Emergency crews worked across {C}.",
            "{N} households were evacuated.",
        ],
    },
    Template {
        summary: "{O} will build a new factory in {C} creating {N} jobs by {Y}.",
        document: &[
            "{O} announced a major investment.",
            "The site will be in {C}.",
            "Around {N} posts will be created.",
        ],
    },
    Template {
        summary: "{P} has died at the age of {N}, the family of the former {T} player said.",
        document: &["Tributes have been paid to a former footballer.", "{P} played for {T}.", "The player was {N}."],
    },
    Template {
        summary: "The {Y} festival in {C} attracted a record crowd of {N} people over the weekend.",
        document: &[
            "Organisers hailed the event a success.",
            "The festival took place in {C}.",
            "Attendance reached {N}.",
        ],
    },
    Template {
        summary: "{T} manager {P} has signed a new contract that runs until {Y}.",
        document: &["{T} have extended the deal of their manager.", "{P} agreed fresh terms.", "The deal runs to {Y}."],
    },
    Template {
        summary: "Shares in {O} fell sharply after annual profits dropped by {N}% in {Y}.",
        document: &["{O} reported weaker results.", "Profits were down {N}%.", "The figures cover {Y}."],
    },
];

const NOVEL_TEMPLATES: &[Template] = &[
    Template {
        summary: "Scientists working with {O} discovered a rare species of frog near {C}.",
        document: &[
            "Researchers made an unusual find in wetlands.",
            "The frog was found near {C}.",
            "{O} funded the survey.",
        ],
    },
    Template {
        summary: "A painting by {P} sold for {N} million pounds at an auction held in {C}.",
        document: &[
            "An artwork fetched a high price at auction.",
            "The sale was held in {C}.",
            "It was painted by {P}.",
        ],
    },
    Template {
        summary: "Heavy snow closed every school across {C} for most of {Y}.",
        document: &[
            "Winter weather caused widespread disruption.",
            "Schools in {C} shut their gates.",
            "It was the worst winter since {Y}.",
        ],
    },
    Template {
        summary: "Voters in {C} rejected plans backed by {P} for a tram network.",
        document: &[
            "A referendum on transport was held.",
            "Residents of {C} voted on the scheme.",
            "{P} had campaigned for it.",
        ],
    },
    Template {
        summary: "Archaeologists uncovered Roman coins beneath a car park in {C}.",
        document: &[
            "A dig revealed ancient treasure.",
            "The coins lay under tarmac in {C}.",
            "Experts dated them to the Roman era.",
        ],
    },
];

#[derive(Clone)]
struct Slots(BTreeMap<char, String>);

impl Slots {
    fn random(rng: &mut SplitMix64) -> Self {
        let mut m = BTreeMap::new();
        m.insert('P', pick(rng, PEOPLE).to_string());
        m.insert('C', pick(rng, CITIES).to_string());
        let t = pick(rng, TEAMS).to_string();
        let mut u = pick(rng, TEAMS).to_string();
        while u == t {
            u = pick(rng, TEAMS).to_string();
        }
        m.insert('T', format!("{} {t}", pick(rng, CITIES)));
        m.insert('U', format!("{} {u}", pick(rng, CITIES)));
        m.insert('O', pick(rng, ORGS).to_string());
        m.insert('N', (range(rng, 2, 90)).to_string());
        m.insert('Y', (range(rng, 1990, 2023)).to_string());
        Slots(m)
    }

    fn fill(&self, pattern: &str) -> String {
        let mut out = pattern.to_string();
        for (k, v) in &self.0 {
            out = out.replace(&format!("{{{k}}}"), v);
        }
        out
    }
}

fn templated_document(rng: &mut SplitMix64, t: &Template, slots: &Slots) -> String {
    let mut sentences = vec![slots.fill(t.document[0])];
    for s in &t.document[1..] {
        if rng.below(10) < 7 {
            sentences.push(slots.fill(s));
        }
    }
    for _ in 0..range(rng, 1, 3) {
        sentences.push(pick(rng, FILLER).to_string());
    }
    sentences.join(" ")
}

fn templated_corpus() -> (Dataset, Dataset) {
    let mut rng = SplitMix64::new(5);
    let mut train_rows = Vec::new();
    for i in 0..2000 {
        let t = i % TRAIN_TEMPLATES.len();
        let slots = Slots::random(&mut rng);
        let doc = templated_document(&mut rng, &TRAIN_TEMPLATES[t], &slots);
        train_rows.push((
            t,
            slots.clone(),
            Sample::new(format!("tr{i:04}"), doc, slots.fill(TRAIN_TEMPLATES[t].summary)),
        ));
    }
    let mut test = Vec::new();
    for i in 0..400 {
        // overlap level: novel template, same template with fresh slots, or a near copy of a training sample
        let (template, slots) = match i % 4 {
            0 => (&NOVEL_TEMPLATES[rng.below(NOVEL_TEMPLATES.len() as u64) as usize], Slots::random(&mut rng)),
            1 => (&TRAIN_TEMPLATES[rng.below(TRAIN_TEMPLATES.len() as u64) as usize], Slots::random(&mut rng)),
            _ => {
                let (t, slots, _) = pick(&mut rng, &train_rows);
                let mut slots = slots.clone();
                if i % 4 == 2 {
                    let fresh = Slots::random(&mut rng);
                    for k in ['N', 'Y'] {
                        slots.0.insert(k, fresh.0[&k].clone());
                    }
                }
                (&TRAIN_TEMPLATES[*t], slots)
            }
        };
        let doc = templated_document(&mut rng, template, &slots);
        test.push(Sample::new(format!("te{i:04}"), doc, slots.fill(template.summary)));
    }
    let train = Dataset::new("templated", Split::Train, train_rows.into_iter().map(|(_, _, s)| s).collect()).unwrap();
    (train, Dataset::new("templated", Split::Test, test).unwrap())
}

fn directional_reproduction() -> Result<String, String> {
    let start = Instant::now();
    let (train, test) = templated_corpus();
    let tok = Tokenizer::default();
    let table = NGramTable::build(&train, 4, &tok).map_err(|e| e.to_string())?;
    let scores = score_dataset(&test, &table, &tok, OverlapMode::Set);
    let parts = partition(&scores, default_min_samples(test.len(), 8)).map_err(|e| e.to_string())?;
    let index = RetrievalIndex::build(&train, &tok).map_err(|e| e.to_string())?;
    let outputs: Vec<_> = test.samples().iter().map(|s| index.summarize(&s.id, &s.document)).collect();
    let report = evaluate(&outputs, &test, &parts, &HeuristicExtractor::default(), &EvalConfig::default())
        .map_err(|e| e.to_string())?;
    within(start, Duration::from_secs(30), "templated run")?;

    let r2: Vec<f64> = report.bins.iter().map(|b| b.means.r2.unwrap_or(f64::NAN)).collect();
    let shown: Vec<String> = parts.bins.iter().zip(&r2).map(|(b, r)| format!("{}:{r:.3}", b.label())).collect();
    ensure(r2.len() >= 4, || format!("only {} bins: {shown:?}", r2.len()))?;
    ensure(r2.windows(2).all(|w| w[0] < w[1]), || format!("R2 not strictly increasing: {shown:?}"))?;
    let low = report.bins[0].means.e_rem.unwrap_or(0.0);
    let high = report.bins.last().unwrap().means.e_rem.unwrap_or(0.0);
    ensure(high > low, || format!("e_rem highest bin {high} vs lowest {low}"))?;
    Ok(format!("R2 {}; e_rem {low:.2} -> {high:.2}", shown.join(" ")))
}

// 6

fn pseudo_brute_force() -> Result<String, String> {
    let tok = Tokenizer::default();
    let splitter = SentenceSplitter::default();
    let mut rng = SplitMix64::new(6);
    for doc_no in 0..200 {
        let count = range(&mut rng, 3, 12);
        let sentences: Vec<String> = (0..count)
            .map(|_| {
                let len = range(&mut rng, 2, 10);
                format!("{}.", capitalize(&random_text(&mut rng, 15, len)))
            })
            .collect();
        let document = sentences.join(" ");
        ensure(splitter.split(&document).len() == count, || format!("doc {doc_no}: splitter disagrees"))?;

        let tokens: Vec<Vec<String>> = sentences.iter().map(|s| tok.words(s)).collect();
        let mut best = (0, f64::NEG_INFINITY);
        for i in 0..count {
            let rest: Vec<String> =
                tokens.iter().enumerate().filter(|(j, _)| *j != i).flat_map(|(_, t)| t.clone()).collect();
            let f = clipped_oracle(&tokens[i], &rest, 1);
            if f > best.1 {
                best = (i, f);
            }
        }
        let got = pseudo_summary(&document, R1Component::F1, &splitter, &tok).map_err(|e| e.to_string())?;
        ensure(got.index == best.0, || format!("doc {doc_no}: picked {} but scan picked {}", got.index, best.0))?;
        ensure(got.summary == sentences[best.0], || format!("doc {doc_no}: summary text differs"))?;
    }
    Ok("200/200 agree".into())
}

// 7

fn intervention_classifier() -> Result<String, String> {
    let stop = StopWords::builtin();
    let grid = [
        ("The church was completed in 1802.", Outcome::Correct),
        ("The church was completed in 1602.", Outcome::Incorrect),
        ("Building began in 1602 and ended in 1802.", Outcome::Incorrect),
        ("The church was completed long ago.", Outcome::Skipped),
    ];
    for (generated, expected) in grid {
        let got = classify_intervention(generated, Some("1602"), "1802", &stop);
        ensure(got == expected, || format!("{generated:?}: {got:?}, expected {expected:?}"))?;
    }
    ensure(classify_intervention("Work ended in 1802.", None, "1802", &stop) == Outcome::Correct, || {
        "add-mode case without an old entity".into()
    })?;

    let ds = |split, rows: &[(&str, &str, &str)]| {
        Dataset::new("d", split, rows.iter().map(|(i, d, s)| Sample::new(*i, *d, *s)).collect()).unwrap()
    };
    let train = ds(
        Split::Train,
        &[("t1", "x", "The cathedral was finished in 1602."), ("t2", "x", "Work on the tower ended in 1602.")],
    );
    let test =
        ds(Split::Test, &[("a", "The cathedral was completed in 1602 by masons.", "The cathedral dates from 1602.")]);
    let config = InterventionConfig {
        count: 1,
        per_document: 1,
        replacements: BTreeMap::from([("1602".to_string(), vec!["1802".to_string()])]),
        ..Default::default()
    };
    let plan = make_interventions(&test, &train, &HeuristicExtractor::default(), &config).map_err(|e| e.to_string())?;
    let case = plan.cases.first().ok_or("no case produced")?;
    ensure(case.mode == InterventionMode::Substitute, || format!("mode {:?}", case.mode))?;
    ensure(case.edited_document == "The cathedral was completed in 1802 by masons.", || {
        format!("edited {:?}", case.edited_document)
    })?;
    let outcome =
        classify_intervention("It was completed in 1802.", case.old_entity.as_deref(), &case.new_entity, &stop);
    ensure(outcome == Outcome::Correct, || format!("fixture outcome {outcome:?}"))?;
    Ok("2x2 grid and 1602 -> 1802 fixture".into())
}

// 8

fn peak_rss_kib() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

fn scale_throughput() -> Result<String, String> {
    let mut rng = SplitMix64::new(8);
    let vocab: Vec<String> = (0..30_000).map(|i| format!("t{i}")).collect();
    // skewed draw so that common n-grams repeat like real summaries
    let word = |rng: &mut SplitMix64| -> &str {
        let u = rng.unit_f64();
        &vocab[((u * u * u) * vocab.len() as f64) as usize]
    };
    let summaries: Vec<String> = (0..204_000)
        .map(|_| {
            let len = range(&mut rng, 24, 36);
            (0..len).map(|_| word(&mut rng)).collect::<Vec<_>>().join(" ")
        })
        .collect();
    let tests: Vec<Vec<String>> = (0..11_000)
        .map(|_| {
            let len = range(&mut rng, 24, 36);
            (0..len).map(|_| word(&mut rng).to_string()).collect()
        })
        .collect();

    let tok = Tokenizer::default();
    let start = Instant::now();
    let mut builder = TableBuilder::new(4, tok).map_err(|e| e.to_string())?;
    for s in &summaries {
        builder.add_summary(s).map_err(|e| e.to_string())?;
    }
    let table = builder.finish().map_err(|e| e.to_string())?;
    let build = start.elapsed();
    within(start, Duration::from_secs(30), "table build")?;

    let start = Instant::now();
    let scores: Vec<OverlapScore> =
        tests.iter().enumerate().map(|(i, t)| percent_overlap(&i.to_string(), t, &table, OverlapMode::Set)).collect();
    let overlap = start.elapsed();
    within(start, Duration::from_secs(5), "11K overlaps")?;
    ensure(scores.len() == 11_000, || "missing scores".into())?;

    let rss = peak_rss_kib().ok_or("VmHWM unavailable")?;
    ensure(rss < 4 * 1024 * 1024, || format!("peak RSS {rss} KiB"))?;
    Ok(format!(
        "build {build:.2?} ({} distinct 4-grams), overlap {overlap:.2?}, peak RSS {} MiB",
        table.distinct(),
        rss / 1024
    ))
}

// 9

fn lexdiv(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_lexdiv")).args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("lexdiv {}: {}", args.join(" "), String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn pipeline(dir: &Path) -> Result<(Vec<u8>, Vec<u8>), String> {
    let toy = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/toy");
    let train = toy.join("train.jsonl");
    let test = toy.join("test.jsonl");
    let p = |name: &str| -> PathBuf { dir.join(name) };
    let s = |p: &Path| p.to_str().unwrap().to_string();

    lexdiv(&["ingest", "--input", &s(&train), "--split", "train"])?;
    lexdiv(&["ingest", "--input", &s(&test), "--split", "test"])?;
    lexdiv(&["overlap", "--train", &s(&train), "--test", &s(&test), "--out", &s(&p("scores.jsonl"))])?;
    lexdiv(&["partition", "--scores", &s(&p("scores.jsonl")), "--bins", "4", "--out-dir", &s(&p("parts"))])?;
    lexdiv(&[
        "select",
        "--train",
        &s(&train),
        "--policy",
        "bounded",
        "--theta",
        "2",
        "--seeds",
        "1,2,3",
        "--out-dir",
        &s(&p("sel")),
    ])?;
    for seed in 1..=3 {
        let ids = p(&format!("sel/bounded_theta2_seed{seed}.ids"));
        let outputs = p(&format!("retrieval_seed{seed}.jsonl"));
        lexdiv(&[
            "summarize",
            "--policy",
            "retrieval",
            "--train",
            &s(&train),
            "--train-ids",
            &s(&ids),
            "--test",
            &s(&test),
            "--out",
            &s(&outputs),
        ])?;
        for ext in ["csv", "json"] {
            lexdiv(&[
                "evaluate",
                "--outputs",
                &s(&outputs),
                "--test",
                &s(&test),
                "--partitions",
                &s(&p("parts")),
                "--out",
                &s(&p(&format!("report_seed{seed}.{ext}"))),
            ])?;
        }
    }
    let mut csv = Vec::new();
    let mut json = Vec::new();
    for seed in 1..=3 {
        csv.extend(std::fs::read(p(&format!("report_seed{seed}.csv"))).map_err(|e| e.to_string())?);
        json.extend(std::fs::read(p(&format!("report_seed{seed}.json"))).map_err(|e| e.to_string())?);
    }
    Ok((csv, json))
}

fn cli_smoke() -> Result<String, String> {
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    let first = pipeline(a.path())?;
    let second = pipeline(b.path())?;
    ensure(first.0 == second.0, || "CSV reports differ between runs".into())?;
    ensure(first.1 == second.1, || "JSON reports differ between runs".into())?;
    let rows = String::from_utf8_lossy(&first.0).lines().count();
    Ok(format!("3 seeds, {rows} CSV lines, {} JSON bytes, identical across runs", first.1.len()))
}
