mod commands;
mod config;

use clap::{Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "siren",
    version,
    about = "URL threat classifier, weather-keyed RSA stalling tools, honeypot, and link-check service"
)]
struct Cli {
    /// Seed for all randomness in this run
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Flat key=value config file (also via SIREN_CONFIG)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Class distribution of a URL corpus
    Stats {
        /// Corpus CSV with url,type columns
        #[arg(long)]
        dataset: Option<PathBuf>,
        /// Generate a synthetic corpus of this size instead
        #[arg(long)]
        synthetic: Option<usize>,
    },
    /// Split a corpus, train the classifier, report metrics per split
    Train {
        #[arg(long)]
        dataset: Option<PathBuf>,
        #[arg(long)]
        synthetic: Option<usize>,
        /// Stratified subsample size before splitting
        #[arg(long)]
        subsample: Option<usize>,
        /// Where to write the trained model
        #[arg(long)]
        model_out: PathBuf,
        /// Where to write per-epoch history CSV
        #[arg(long)]
        history_out: Option<PathBuf>,
        /// Where to write the split manifest
        #[arg(long)]
        split_out: Option<PathBuf>,
        #[arg(long)]
        epochs: Option<usize>,
        #[arg(long)]
        batch_size: Option<usize>,
        #[arg(long)]
        patience: Option<usize>,
        #[arg(long)]
        learning_rate: Option<f64>,
        /// train,test,validation fractions
        #[arg(long)]
        ratios: Option<String>,
    },
    /// Score one URL or a file of URLs
    Classify {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, conflicts_with = "input")]
        url: Option<String>,
        /// File with one URL per line; CSV rows on stdout
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Generate a weather-entropy keypair and write the key file
    Keygen {
        #[arg(long)]
        out: PathBuf,
        /// Delta multiplier x
        #[arg(long)]
        x: Option<u64>,
        /// fixture | live
        #[arg(long)]
        entropy: Option<String>,
        /// Override the bundled city fixture
        #[arg(long)]
        cities: Option<PathBuf>,
    },
    /// Encrypt a file blockwise under a key file
    Encrypt {
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Decrypt an encrypted blob back to the original bytes
    Decrypt {
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Run the fake-shell honeypot service
    Honeypot {
        #[arg(long)]
        listen: Option<String>,
        #[arg(long)]
        control: Option<String>,
        #[arg(long)]
        log_dir: Option<PathBuf>,
        #[arg(long)]
        fs_seed: Option<PathBuf>,
        /// Activity simulation interval in milliseconds (0 disables)
        #[arg(long)]
        activity_ms: Option<u64>,
    },
    /// Run the link-check HTTP service
    Proxy {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        listen: Option<String>,
        /// Honeypot control host:port for trap triggers
        #[arg(long)]
        control_endpoint: Option<String>,
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Send one control datagram to a honeypot (the mainframe role)
    Control {
        #[arg(long)]
        endpoint: String,
        /// ENCRYPT_ALL | ROTATE_KEYS | SEED | ACTIVATE | SHUTDOWN
        verb: String,
        arg: Option<String>,
    },
    /// Print the feature layout, optionally with values for a URL
    Features {
        #[arg(long)]
        url: Option<String>,
    },
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("siren: error: {err:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let mut config = config::RunConfig::load(cli.config.as_deref())?;
    let seed = config.resolve(cli.seed, "seed", 0u64)?;
    match cli.command {
        Command::Stats { dataset, synthetic } => {
            commands::data::stats(&mut config, dataset, synthetic, seed)
        }
        Command::Train {
            dataset,
            synthetic,
            subsample,
            model_out,
            history_out,
            split_out,
            epochs,
            batch_size,
            patience,
            learning_rate,
            ratios,
        } => commands::data::train(
            &mut config,
            commands::data::TrainArgs {
                dataset,
                synthetic,
                subsample,
                model_out,
                history_out,
                split_out,
                epochs,
                batch_size,
                patience,
                learning_rate,
                ratios,
                seed,
            },
        ),
        Command::Classify { model, url, input, threshold } => {
            commands::data::classify(&mut config, model, url, input, threshold)
        }
        Command::Keygen { out, x, entropy, cities } => {
            commands::rsa::keygen(&mut config, out, x, entropy, cities, seed)
        }
        Command::Encrypt { key, input, output } => {
            commands::rsa::encrypt_file(&mut config, key, input, output)
        }
        Command::Decrypt { key, input, output } => {
            commands::rsa::decrypt_file(&mut config, key, input, output)
        }
        Command::Honeypot { listen, control, log_dir, fs_seed, activity_ms } => {
            commands::services::honeypot(
                &mut config,
                listen,
                control,
                log_dir,
                fs_seed,
                activity_ms,
                seed,
            )
        }
        Command::Proxy { model, listen, control_endpoint, threshold } => {
            commands::services::proxy(&mut config, model, listen, control_endpoint, threshold)
        }
        Command::Control { endpoint, verb, arg } => {
            commands::services::control(&mut config, endpoint, verb, arg)
        }
        Command::Features { url } => commands::data::features(url),
    }
}
