use crate::config::RunConfig;
use anyhow::{bail, Context, Result};
use ndarray::Array2;
use siren_dataset::{
    class_distribution, load_csv, stratified_split, stratified_subsample, synthetic, vectorize,
    UrlRecord,
};
use siren_neuralnet::{evaluate, save_history, save_model, train as fit, Metrics, Mlp, NAdamConfig, TrainConfig};
use siren_proxy::{batch_check, Classifier, ClassifyOutcome, DEFAULT_THRESHOLD};
use siren_url_features::{extract_features, feature_names, layout_manifest};
use std::path::PathBuf;

fn load_records(
    config: &mut RunConfig,
    dataset: Option<PathBuf>,
    synthetic_n: Option<usize>,
    seed: u64,
) -> Result<Vec<UrlRecord>> {
    match (dataset, synthetic_n) {
        (Some(path), None) => {
            config.note("dataset", path.display());
            let (records, report) = load_csv(&path)?;
            eprintln!(
                "loaded {} records ({} blank, {} unknown-label, {} duplicate rows dropped)",
                report.retained,
                report.dropped_blank_url,
                report.dropped_unknown_label,
                report.dropped_duplicate
            );
            Ok(records)
        }
        (None, Some(n)) => {
            config.note("synthetic", n);
            Ok(synthetic::generate(n, seed))
        }
        (Some(_), Some(_)) => bail!("--dataset and --synthetic are mutually exclusive"),
        (None, None) => bail!("one of --dataset or --synthetic is required"),
    }
}

pub fn stats(
    config: &mut RunConfig,
    dataset: Option<PathBuf>,
    synthetic_n: Option<usize>,
    seed: u64,
) -> Result<()> {
    let records = load_records(config, dataset, synthetic_n, seed)?;
    config.echo();
    let dist = class_distribution(&records)?;
    println!("{:<12} {:>10} {:>9}", "class", "count", "percent");
    for class in siren_dataset::UrlClass::ALL {
        println!(
            "{:<12} {:>10} {:>8.2}%",
            class.name(),
            dist.counts[class.index()],
            dist.fractions[class.index()] * 100.0
        );
    }
    println!("{:<12} {:>10} {:>8.2}%", "total", dist.total, 100.0);
    println!("majority class: {}", dist.majority_class().name());
    Ok(())
}

pub struct TrainArgs {
    pub dataset: Option<PathBuf>,
    pub synthetic: Option<usize>,
    pub subsample: Option<usize>,
    pub model_out: PathBuf,
    pub history_out: Option<PathBuf>,
    pub split_out: Option<PathBuf>,
    pub epochs: Option<usize>,
    pub batch_size: Option<usize>,
    pub patience: Option<usize>,
    pub learning_rate: Option<f64>,
    pub ratios: Option<String>,
    pub seed: u64,
}

fn parse_ratios(raw: &str) -> Result<[f64; 3]> {
    let parts: Vec<f64> = raw
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| anyhow::anyhow!("bad ratio {p:?}: {e}")))
        .collect::<Result<_>>()?;
    let [a, b, c] = parts.as_slice() else {
        bail!("ratios must be three comma-separated fractions, e.g. 0.75,0.15,0.10");
    };
    Ok([*a, *b, *c])
}

fn rows(x: &Array2<f64>, indices: &[usize]) -> Array2<f64> {
    let mut out = Array2::zeros((indices.len(), x.ncols()));
    for (row, &i) in indices.iter().enumerate() {
        out.row_mut(row).assign(&x.row(i));
    }
    out
}

fn print_metrics_table(train: &Metrics, val: &Metrics, test: &Metrics) {
    println!("{:<12} {:>10} {:>10} {:>10}", "metric", "train", "validation", "test");
    let row = |name: &str, f: &dyn Fn(&Metrics) -> f64| {
        println!("{:<12} {:>10.4} {:>10.4} {:>10.4}", name, f(train), f(val), f(test));
    };
    row("loss", &|m| m.loss);
    row("recall", &|m| m.recall_weighted);
    row("precision", &|m| m.precision_weighted);
    row("accuracy", &|m| m.accuracy);
}

pub fn train(config: &mut RunConfig, args: TrainArgs) -> Result<()> {
    let mut records = load_records(config, args.dataset, args.synthetic, args.seed)?;
    if let Some(n) = config.resolve_opt(args.subsample, "subsample")? {
        let picked = stratified_subsample(&records, n, args.seed)?;
        records = picked.into_iter().map(|i| records[i].clone()).collect();
    }
    let ratios = parse_ratios(&config.resolve(
        args.ratios,
        "ratios",
        "0.75,0.15,0.10".to_string(),
    )?)?;
    let epochs = config.resolve(args.epochs, "epochs", 50usize)?;
    let batch_size = config.resolve(args.batch_size, "batch_size", 512usize)?;
    let patience = config.resolve(args.patience, "patience", 5usize)?;
    let learning_rate = config.resolve(args.learning_rate, "learning_rate", 0.001f64)?;
    config.note("model_out", args.model_out.display());
    config.echo();

    // drop unscorable rows before splitting so split indices stay
    // aligned with feature-matrix rows
    let before = records.len();
    records.retain(|r| extract_features(&r.url).is_ok());
    if records.len() < before {
        eprintln!("warning: {} records failed feature extraction", before - records.len());
    }
    let split = stratified_split(&records, ratios, args.seed)?;
    if let Some(path) = &args.split_out {
        split.save(path)?;
    }
    let (x, y, report) = vectorize(&records);
    debug_assert_eq!(report.dropped, 0);

    let model = Mlp::new(args.seed);
    let outcome = fit(
        model,
        &rows(&x, &split.train),
        &rows(&y, &split.train),
        &rows(&x, &split.validation),
        &rows(&y, &split.validation),
        &TrainConfig {
            optimizer: NAdamConfig { learning_rate, ..NAdamConfig::default() },
            batch_size,
            max_epochs: epochs,
            patience,
            seed: args.seed,
        },
    )?;
    eprintln!(
        "trained {} epochs, best validation loss at epoch {}",
        outcome.history.len(),
        outcome.best_epoch + 1
    );

    let train_m = evaluate(&outcome.model, &rows(&x, &split.train), &rows(&y, &split.train));
    let val_m =
        evaluate(&outcome.model, &rows(&x, &split.validation), &rows(&y, &split.validation));
    let test_m = evaluate(&outcome.model, &rows(&x, &split.test), &rows(&y, &split.test));
    print_metrics_table(&train_m, &val_m, &test_m);

    save_model(&outcome.model, &args.model_out)?;
    if let Some(path) = &args.history_out {
        save_history(path, &outcome.history)?;
    }
    Ok(())
}

pub fn classify(
    config: &mut RunConfig,
    model: PathBuf,
    url: Option<String>,
    input: Option<PathBuf>,
    threshold: Option<f64>,
) -> Result<()> {
    let threshold = config.resolve(threshold, "threshold", DEFAULT_THRESHOLD)?;
    config.note("model", model.display());
    config.echo();
    let classifier = Classifier::from_file(&model, threshold)
        .with_context(|| format!("cannot load model {}", model.display()))?;
    match (url, input) {
        (Some(url), None) => {
            let outcome = classifier.classify_url(&url);
            println!("{}", serde_json::to_string_pretty(&outcome)?);
            if let ClassifyOutcome::Scored(v) = &outcome {
                let sum: f64 = v.probabilities.iter().sum();
                debug_assert!((sum - 1.0).abs() < 1e-6);
            }
            Ok(())
        }
        (None, Some(path)) => {
            let file = std::fs::File::open(&path)
                .with_context(|| format!("cannot open {}", path.display()))?;
            let mut stdout = std::io::stdout().lock();
            let report =
                batch_check(&classifier, std::io::BufReader::new(file), &mut stdout)?;
            eprintln!("{} rows, {} blank lines skipped", report.rows, report.skipped_blank);
            Ok(())
        }
        _ => bail!("exactly one of --url or --input is required"),
    }
}

pub fn features(url: Option<String>) -> Result<()> {
    match url {
        None => print!("{}", layout_manifest()),
        Some(url) => {
            let vector = extract_features(&url)?;
            for (name, value) in feature_names().iter().zip(vector.values()) {
                println!("{name}\t{value}");
            }
        }
    }
    Ok(())
}
