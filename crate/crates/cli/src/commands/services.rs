use crate::config::RunConfig;
use anyhow::{Context, Result};
use siren_honeypot::{serve, ControlCommand, HoneypotConfig};
use siren_proxy::{serve_http, Classifier, ProxyConfig, DEFAULT_THRESHOLD};
use std::net::UdpSocket;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

pub fn honeypot(
    config: &mut RunConfig,
    listen: Option<String>,
    control: Option<String>,
    log_dir: Option<PathBuf>,
    fs_seed: Option<PathBuf>,
    activity_ms: Option<u64>,
    seed: u64,
) -> Result<()> {
    let listen = config.resolve(listen, "honeypot_listen", "127.0.0.1:2323".to_string())?;
    let control = config.resolve(control, "honeypot_control", "127.0.0.1:4444".to_string())?;
    let log_dir = log_dir
        .or_else(|| Some(PathBuf::from("honeypot-logs")))
        .expect("default set");
    config.note("log_dir", log_dir.display());
    let activity_ms = config.resolve(activity_ms, "activity_ms", 5_000u64)?;
    config.echo();
    let service_config = HoneypotConfig {
        listen_addr: listen.parse().context("bad --listen address")?,
        control_addr: control.parse().context("bad --control address")?,
        fs_seed_path: fs_seed,
        log_dir,
        banner: "Ubuntu 22.04.3 LTS files-01".to_string(),
        key_seed: seed,
        activity_seed: seed.wrapping_add(1),
        activity_interval: (activity_ms > 0).then(|| Duration::from_millis(activity_ms)),
    };
    eprintln!("honeypot listening on {listen}, control on {control}");
    serve(service_config)?;
    Ok(())
}

pub fn proxy(
    config: &mut RunConfig,
    model: PathBuf,
    listen: Option<String>,
    control_endpoint: Option<String>,
    threshold: Option<f64>,
) -> Result<()> {
    let listen = config.resolve(listen, "proxy_listen", "127.0.0.1:8080".to_string())?;
    let control_endpoint = config.resolve_opt(control_endpoint, "control_endpoint")?;
    let threshold = config.resolve(threshold, "threshold", DEFAULT_THRESHOLD)?;
    config.note("model", model.display());
    config.echo();
    let classifier = Arc::new(
        Classifier::from_file(&model, threshold)
            .with_context(|| format!("cannot load model {}", model.display()))?,
    );
    let service_config = ProxyConfig {
        listen_addr: listen.parse().context("bad --listen address")?,
        control_endpoint: control_endpoint
            .map(|e: String| e.parse().context("bad --control-endpoint address"))
            .transpose()?,
    };
    eprintln!("check service listening on {listen}");
    serve_http(classifier, service_config)?;
    Ok(())
}

pub fn control(
    config: &mut RunConfig,
    endpoint: String,
    verb: String,
    arg: Option<String>,
) -> Result<()> {
    config.note("endpoint", &endpoint);
    config.echo();
    let line = match &arg {
        Some(arg) => format!("{verb} {arg}\n"),
        None => format!("{verb}\n"),
    };
    // reject bad verbs client-side; the channel itself never answers
    ControlCommand::parse(line.as_bytes())
        .map_err(|e| anyhow::anyhow!("invalid control command: {e}"))?;
    let socket = UdpSocket::bind("0.0.0.0:0")?;
    socket
        .send_to(line.as_bytes(), &endpoint)
        .with_context(|| format!("cannot send to {endpoint}"))?;
    println!("sent {}", line.trim_end());
    Ok(())
}
