//! One line per acceptance criterion: PASS, FAIL or SKIP with the measured
//! value and runtime. Exits non-zero if any criterion fails.
//!
//! Criteria that need the BERT-base vocabulary and embeddings run only when
//! `DERIVKIT_BERT_VOCAB` (one token per line) and `DERIVKIT_BERT_EMBEDDINGS`
//! (text table: `n m` header, then `token v1 .. vm`) are set.

mod common;

use std::collections::{HashMap, VecDeque};
use std::time::{Duration, Instant};

use derivkit::baselines::{
    loss_and_grad, predict_softmax, random_baseline, train_softmax, Example, FeatureSpec,
    LabelSpace, Labeled, SoftmaxHyper,
};
use derivkit::confusion::{
    edge_betweenness, f_from_r2, f_survival, girvan_newman, threshold_graph, ConfusionGraph,
    ConfusionMatrix,
};
use derivkit::dataset::{build_wellformedness, mask, FrequencyBin, MaskMode, Setting, Split};
use derivkit::eval::{golds_from_items, mrr, GoldLabel, PredictionRecord};
use derivkit::morpho::{
    analyze, analyze_all, build_lexicon, derive, prefers, AffixBundle, AnalysisCaps, Shape,
};
use derivkit::resources::{default_prefixes, default_suffixes, english_stopwords};
use derivkit::tokenizer::{
    fit_projection, projection_pairs, wordpiece_tokenize, EmbeddingTable, Vocab,
    DEFAULT_MAX_WORD_CHARS, DEFAULT_UNK,
};
use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::gamma::ln_gamma;

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

use Outcome::*;

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        Pass(detail)
    } else {
        Fail(detail)
    }
}

#[derive(Default)]
struct Suite {
    failed: usize,
    passed: usize,
    skipped: usize,
}

impl Suite {
    fn run(&mut self, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let (tag, detail) = match outcome {
            Pass(d) if took > limit => ("FAIL", format!("{d}; too slow, limit {limit:?}")),
            Pass(d) => ("PASS", d),
            Fail(d) => ("FAIL", d),
            Skip(d) => ("SKIP", d),
        };
        match tag {
            "PASS" => self.passed += 1,
            "FAIL" => self.failed += 1,
            _ => self.skipped += 1,
        }
        println!("{tag} {name}: {detail} [{:.2?}]", took);
    }
}

fn ranked(id: &str, labels: &[&str]) -> PredictionRecord {
    let n = labels.len();
    PredictionRecord::new(
        id,
        labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.to_string(), (n - i) as f64))
            .collect(),
    )
}

fn gold(id: &str, label: &str) -> GoldLabel {
    GoldLabel {
        id: id.into(),
        label: label.into(),
    }
}

fn mrr_engine() -> Outcome {
    let records = vec![
        ranked("1", &["u", "v"]),
        ranked("2", &["u", "v"]),
        ranked("3", &["u", "v"]),
    ];
    let golds = vec![gold("1", "u"), gold("2", "u"), gold("3", "v")];
    let macro_mrr = mrr(&records, &golds).unwrap().macro_mrr;
    let eleven: Vec<String> = (0..11).map(|i| format!("x{i:02}")).collect();
    let refs: Vec<&str> = eleven.iter().map(String::as_str).collect();
    let cutoff = mrr(&[ranked("4", &refs)], &[gold("4", "x10")])
        .unwrap()
        .macro_mrr;
    verdict(
        macro_mrr == 0.75 && cutoff == 0.0,
        format!("macro = {macro_mrr} (want 0.75 exactly), rank-11 gold = {cutoff} (want 0)"),
    )
}

struct Sim {
    id: String,
}

impl Labeled for Sim {
    fn id(&self) -> &str {
        &self.id
    }
    fn shape(&self) -> Shape {
        Shape::S
    }
}

fn random_calibration() -> Outcome {
    let k = 48;
    let labels: Vec<String> = (0..k).map(|i| format!("s{i:02}")).collect();
    let mut m = std::collections::BTreeMap::new();
    m.insert(Shape::S, labels.clone());
    let space = LabelSpace::new(m).unwrap();
    let items: Vec<Sim> = (0..100_000).map(|i| Sim { id: i.to_string() }).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let golds: Vec<GoldLabel> = items
        .iter()
        .map(|it| GoldLabel {
            id: it.id.clone(),
            label: labels.choose(&mut rng).unwrap().clone(),
        })
        .collect();
    let records = random_baseline(&items, &space, 7).unwrap();
    let got = mrr(&records, &golds).unwrap().macro_mrr;
    let h10: f64 = (1..=10).map(|r| 1.0 / r as f64).sum();
    let expected = h10 / k as f64;
    verdict(
        (got - expected).abs() <= 0.005,
        format!("macro MRR = {got:.5}, H10/48 = {expected:.5}, tolerance 0.005"),
    )
}

/// P(F > f) for F(1, d) as 2 P(T > sqrt f) with T ~ Student t(d), by
/// Simpson quadrature of the t density.
fn f1_tail_by_quadrature(f: f64, d: f64) -> f64 {
    let ln_c =
        ln_gamma((d + 1.0) / 2.0) - ln_gamma(d / 2.0) - 0.5 * (d * std::f64::consts::PI).ln();
    let pdf = |t: f64| (ln_c - (d + 1.0) / 2.0 * (1.0 + t * t / d).ln()).exp();
    let (a, b, n) = (f.sqrt(), 2000.0, 2_000_000usize);
    let h = (b - a) / n as f64;
    let mut s = pdf(a) + pdf(b);
    for i in 1..n {
        s += pdf(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    2.0 * s * h / 3.0
}

fn regression_consistency() -> Outcome {
    let f_pre = f_from_r2(0.566, 45);
    let f_suf = f_from_r2(0.410, 43);
    let p_pre = f_survival(f_pre, 1, 43);
    let p_suf = f_survival(f_suf, 1, 41);
    let q_pre = f1_tail_by_quadrature(f_pre, 43.0);
    let q_suf = f1_tail_by_quadrature(f_suf, 41.0);
    let ok = (f_pre - 56.05).abs() <= 0.1
        && (f_suf - 28.49).abs() <= 0.01
        && p_pre < 0.001
        && p_suf < 0.001
        && (p_pre - q_pre).abs() <= 1e-9 + 1e-6 * q_pre
        && (p_suf - q_suf).abs() <= 1e-9 + 1e-6 * q_suf;
    verdict(
        ok,
        format!(
            "F(1,43) = {f_pre:.3} (want 56.05 +/- 0.1), F(1,41) = {f_suf:.3} (want 28.49 +/- 0.01), p = {p_pre:.2e} / {p_suf:.2e} (quadrature {q_pre:.2e} / {q_suf:.2e})"
        ),
    )
}

/// Edge betweenness by listing every shortest path of every ordered pair.
fn brute_force_betweenness(g: &ConfusionGraph) -> Vec<f64> {
    let n = g.node_count();
    let mut eb = vec![0.0; n * n];
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        dist[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            for &w in &g.adjacency[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    q.push_back(w);
                }
            }
        }
        for t in (0..n).filter(|&t| t != s && dist[t] != usize::MAX) {
            let mut paths: Vec<Vec<usize>> = Vec::new();
            let mut stack = vec![vec![s]];
            while let Some(path) = stack.pop() {
                let v = *path.last().unwrap();
                if v == t {
                    paths.push(path);
                    continue;
                }
                for &w in &g.adjacency[v] {
                    if dist[w] == dist[v] + 1 && dist[w] <= dist[t] {
                        let mut p = path.clone();
                        p.push(w);
                        stack.push(p);
                    }
                }
            }
            let share = 1.0 / paths.len() as f64;
            for p in &paths {
                for e in p.windows(2) {
                    eb[e[0] * n + e[1]] += share;
                }
            }
        }
    }
    eb
}

fn girvan_newman_check() -> Outcome {
    let mut worst = 0.0f64;
    let mut graphs = 0;
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=8);
        let p = rng.gen_range(0.1..0.7);
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|(a, b)| a != b)
            .filter(|_| rng.gen_bool(p))
            .collect();
        let g =
            ConfusionGraph::from_edges((0..n).map(|i| format!("n{i}")).collect(), &edges).unwrap();
        let fast = edge_betweenness(&g);
        let slow = brute_force_betweenness(&g);
        worst = fast
            .iter()
            .zip(&slow)
            .map(|(a, b)| (a - b).abs())
            .fold(worst, f64::max);
        graphs += 1;
    }

    let mut edges = vec![(2, 3)];
    for (a, b) in [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)] {
        edges.push((a, b));
        edges.push((b, a));
    }
    let g = ConfusionGraph::from_edges((0..6).map(|i| format!("n{i}")).collect(), &edges).unwrap();
    let c = girvan_newman(&g, 1).unwrap();
    let first = c.removed.first().cloned().unwrap_or_default();
    let split_ok = first == ("n2".to_string(), "n3".to_string())
        && c.partitions.first().map(Vec::len) == Some(2)
        && c.removed.len() == 1;
    verdict(
        worst < 1e-9 && split_ok,
        format!("{graphs} random digraphs, max |Brandes - brute force| = {worst:.1e}; first removed edge {first:?}"),
    )
}

fn threshold_boundary() -> Outcome {
    let mut c = ConfusionMatrix::from_counts(
        vec!["a".into(), "b".into(), "c".into()],
        vec![vec![0; 3]; 3],
    )
    .unwrap();
    c.values = vec![
        vec![0.5, 0.08, 0.0],
        vec![0.081, 0.5, 0.3],
        vec![0.0, 0.0, 1.0],
    ];
    let g = threshold_graph(&c, 0.08);
    let ok = !g.has_edge(0, 1) && g.has_edge(1, 0) && g.has_edge(1, 2) && !g.has_edge(2, 2);
    verdict(
        ok,
        "C=0.08 -> no edge, C=0.081 -> edge, C=0.30 -> edge, no self-loops".into(),
    )
}

fn morphology() -> Outcome {
    let lex = common::golden_lexicon();
    let golden_ok = common::GOLDEN
        .iter()
        .filter(|(w, b, p, s)| {
            let bundle = AffixBundle::from_forms(*p, *s).unwrap();
            analyze(w, &lex, AnalysisCaps::default())
                .is_some_and(|d| d.base == *b && d.bundle == bundle)
        })
        .count();

    let prefixes: Vec<_> = lex.prefixes().iter().cloned().collect();
    let suffixes: Vec<_> = lex.suffixes().iter().cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut violations = 0;
    for _ in 0..1000 {
        let base = *common::GOLDEN_BASES.choose(&mut rng).unwrap();
        let p = rng
            .gen_bool(0.5)
            .then(|| prefixes.choose(&mut rng).unwrap().clone());
        let s = if p.is_none() || rng.gen_bool(0.5) {
            Some(suffixes.choose(&mut rng).unwrap().clone())
        } else {
            None
        };
        let bundle = AffixBundle::new(p, s).unwrap();
        for form in derive(base, &bundle) {
            if lex.is_base(&form) {
                continue;
            }
            let all = analyze_all(&form, &lex, AnalysisCaps::default());
            let Some(origin) = all.iter().find(|d| d.base == base && d.bundle == bundle) else {
                violations += 1;
                continue;
            };
            if prefers(origin, &all[0]) || !derive(&all[0].base, &all[0].bundle).contains(&form) {
                violations += 1;
            }
        }
    }
    let total = common::GOLDEN.len();
    verdict(
        golden_ok == total && violations == 0,
        format!("golden {golden_ok}/{total}, round-trip violations {violations}/1000 cases"),
    )
}

fn load_bert_vocab() -> Option<Result<Vocab, String>> {
    let path = std::env::var_os("DERIVKIT_BERT_VOCAB")?;
    Some(Vocab::load(&path, DEFAULT_UNK).map_err(|e| e.to_string()))
}

fn toks(v: &Vocab, w: &str) -> Vec<String> {
    wordpiece_tokenize(w, v, DEFAULT_MAX_WORD_CHARS).tokens
}

fn tokenizer_mini() -> Outcome {
    let v = common::mini_vocab();
    let a = toks(&v, "unallowed");
    let b = toks(&v, "unwearable");
    let c = toks(&v, "zzzz");
    verdict(
        a == ["una", "##llo", "##wed"] && b == ["un", "##wear", "##able"] && c == ["[UNK]"],
        format!("unallowed -> {a:?}, unwearable -> {b:?}, zzzz -> {c:?}"),
    )
}

fn tokenizer_bert() -> Outcome {
    let Some(v) = load_bert_vocab() else {
        return Skip("set DERIVKIT_BERT_VOCAB to the BERT-base uncased vocab.txt".into());
    };
    let v = match v {
        Ok(v) => v,
        Err(e) => return Fail(e),
    };
    let a = toks(&v, "unallowed");
    let b = toks(&v, "unwearable");
    verdict(
        a == ["una", "##llo", "##wed"] && b == ["un", "##wear", "##able"],
        format!("unallowed -> {a:?}, unwearable -> {b:?}"),
    )
}

fn projection() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = DMatrix::from_fn(20, 8, |_, _| rng.gen_range(-1.0..1.0));
        let t = DMatrix::from_fn(20, 8, |_, _| rng.gen_range(-1.0..1.0));
        let pairs: Vec<_> = (0..20)
            .map(|i| {
                (
                    e.row(i).iter().copied().collect(),
                    t.row(i).iter().copied().collect(),
                )
            })
            .collect();
        let fit = fit_projection(&pairs, false).unwrap();
        let oracle = e.clone().pseudo_inverse(1e-12).unwrap() * &t;
        worst = worst.max((&fit.matrix - oracle).amax());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let e = DMatrix::from_fn(20, 8, |_, _| rng.gen_range(-1.0..1.0));
    let pairs: Vec<(Vec<f64>, Vec<f64>)> = (0..20)
        .map(|i| {
            let r: Vec<f64> = e.row(i).iter().copied().collect();
            (r.clone(), r)
        })
        .collect();
    let id_err =
        (fit_projection(&pairs, false).unwrap().matrix - DMatrix::<f64>::identity(8, 8)).amax();
    verdict(
        worst <= 1e-6 && id_err <= 1e-8,
        format!("20 random 20x8 systems, max |T - pinv(E) E##| = {worst:.1e}; identity error {id_err:.1e}"),
    )
}

fn projection_pairs_fixture() -> Outcome {
    let Some(v) = load_bert_vocab() else {
        return Skip("set DERIVKIT_BERT_VOCAB and DERIVKIT_BERT_EMBEDDINGS".into());
    };
    let Some(emb) = std::env::var_os("DERIVKIT_BERT_EMBEDDINGS") else {
        return Skip("set DERIVKIT_BERT_EMBEDDINGS".into());
    };
    let (v, table) = match (v, EmbeddingTable::load(&emb)) {
        (Ok(v), Ok(t)) => (v, t),
        (Err(e), _) => return Fail(e),
        (_, Err(e)) => return Fail(e.to_string()),
    };
    let lex = match build_lexicon(
        v.tokens(),
        &default_prefixes(),
        &default_suffixes(),
        &english_stopwords(),
    ) {
        Ok(l) => l,
        Err(e) => return Fail(e.to_string()),
    };
    let n = projection_pairs(&v, &table, lex.bases()).len();
    verdict(
        n == 795,
        format!(
            "{n} bases with both forms (want 795), {} bases",
            lex.bases().len()
        ),
    )
}

fn dataset_builder() -> Outcome {
    let mut leaks = 0;
    for seed in 0..100u64 {
        let (_, items) = common::synth_dataset(seed, Setting::Split);
        let mut owner: HashMap<(Shape, String), Split> = HashMap::new();
        for it in &items {
            if *owner.entry((it.shape, it.base.clone())).or_insert(it.split) != it.split {
                leaks += 1;
            }
        }
    }
    let bins_ok = FrequencyBin::of(1) == Some(FrequencyBin::B1)
        && FrequencyBin::of(127) == Some(FrequencyBin::B7)
        && FrequencyBin::of(128).is_none();

    let mut worst_share = 0.0f64;
    for setting in [Setting::Shared, Setting::Split] {
        let (_, items) = common::synth_dataset(5, setting);
        let n = items.len() as f64;
        for (split, want) in [(Split::Train, 0.6), (Split::Dev, 0.2), (Split::Test, 0.2)] {
            let share = items.iter().filter(|i| i.split == split).count() as f64 / n;
            worst_share = worst_share.max((share - want).abs());
        }
    }

    let (corpus, items) = common::synth_dataset(5, Setting::Shared);
    let (wf, _) = build_wellformedness(&items, &corpus.lexicon, 5).unwrap();
    let pos = wf
        .iter()
        .filter(|w| w.label == derivkit::dataset::WellFormednessLabel::Positive)
        .count();
    let same = wf
        .chunks(2)
        .filter(|p| p[0].item.prefix == p[1].item.prefix)
        .count();
    let p_items = items.iter().filter(|i| i.shape == Shape::P).count();
    let wf_ok = pos * 2 == wf.len() && same == 0 && pos == p_items;

    verdict(
        leaks == 0 && bins_ok && worst_share <= 0.05 && wf_ok,
        format!(
            "SPLIT base leaks over 100 seeds = {leaks}; bins 1/127/128 ok = {bins_ok}; worst split share deviation = {:.1} points; well-formedness {pos}+{} items, {same} negatives equal their positive",
            worst_share * 100.0,
            wf.len() - pos
        ),
    )
}

fn end_to_end() -> Outcome {
    let (corpus, items) = common::synth_dataset(11, Setting::Shared);
    let train_items: Vec<_> = items
        .iter()
        .filter(|i| i.split == Split::Train)
        .cloned()
        .collect();
    let test_items: Vec<_> = items
        .iter()
        .filter(|i| i.split == Split::Test)
        .cloned()
        .collect();
    let labels = LabelSpace::from_lexicon(&corpus.lexicon, &train_items).unwrap();
    let cloze = |v: &[derivkit::dataset::DatasetItem]| -> Vec<_> {
        v.iter()
            .map(|i| mask(i, MaskMode::WholeWord).unwrap())
            .collect()
    };
    let (train, test) = (cloze(&train_items), cloze(&test_items));
    let golds = golds_from_items(&test_items);

    let hyper = SoftmaxHyper {
        seed: 11,
        ..Default::default()
    };
    let (model, report) = train_softmax(&train, &labels, FeatureSpec::default(), &hyper).unwrap();
    let softmax = mrr(&predict_softmax(&model, &test).unwrap(), &golds)
        .unwrap()
        .macro_mrr;
    let random = mrr(&random_baseline(&test, &labels, 11).unwrap(), &golds)
        .unwrap()
        .macro_mrr;

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (rows, k) = (12, 5);
    let examples: Vec<Example> = (0..30)
        .map(|_| Example {
            features: (0..4)
                .map(|_| (rng.gen_range(0..rows), rng.gen_range(0.0..2.0)))
                .collect(),
            label: rng.gen_range(0..k),
        })
        .collect();
    let theta: Vec<f64> = (0..rows * k).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let l2 = 0.01;
    let (_, grad) = loss_and_grad(&examples, k, &theta, l2);
    let h = 1e-6;
    let mut worst = 0.0f64;
    for i in 0..theta.len() {
        let (mut a, mut b) = (theta.clone(), theta.clone());
        a[i] += h;
        b[i] -= h;
        let fd = (loss_and_grad(&examples, k, &a, l2).0 - loss_and_grad(&examples, k, &b, l2).0)
            / (2.0 * h);
        worst = worst.max((fd - grad[i]).abs());
    }
    verdict(
        softmax >= 3.0 * random && worst < 1e-5,
        format!(
            "{} train / {} test items; softmax macro MRR {softmax:.3} vs random {random:.3} (ratio {:.1}, want >= 3); final train loss {:.3}; gradient max |analytic - FD| = {worst:.1e}",
            train.len(),
            test.len(),
            softmax / random,
            report.final_loss
        ),
    )
}

fn main() {
    let mut suite = Suite::default();
    let s = Duration::from_secs;
    suite.run("MRR engine", s(1), mrr_engine);
    suite.run("random-baseline calibration", s(30), random_calibration);
    suite.run("regression consistency", s(1), regression_consistency);
    suite.run("Girvan-Newman", s(60), girvan_newman_check);
    suite.run("confusion threshold boundary", s(1), threshold_boundary);
    suite.run("morphology", s(5), morphology);
    suite.run("tokenizer (mini vocab)", s(1), tokenizer_mini);
    suite.run("tokenizer (BERT vocab fixture)", s(10), tokenizer_bert);
    suite.run("projection", s(5), projection);
    suite.run(
        "projection pairs (BERT fixture)",
        s(60),
        projection_pairs_fixture,
    );
    suite.run("dataset builder", s(120), dataset_builder);
    suite.run("end-to-end", s(300), end_to_end);
    println!(
        "acceptance: {} passed, {} failed, {} skipped",
        suite.passed, suite.failed, suite.skipped
    );
    if suite.failed > 0 {
        std::process::exit(1);
    }
}
