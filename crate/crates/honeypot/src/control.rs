use crate::service::ServiceState;
use crate::session::EventKind;
use crate::HoneypotError;
use std::net::UdpSocket;
use std::sync::atomic::Ordering;
use std::sync::Arc;

/// Largest accepted datagram; anything longer is dropped.
pub const MAX_DATAGRAM: usize = 512;

/// The closed verb set of the mainframe→honeypot channel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ControlCommand {
    /// Mark every file protected.
    EncryptAll,
    /// Replace the key rng; optional explicit seed.
    RotateKeys(Option<u64>),
    /// Reseed the activity simulator.
    Seed(u64),
    /// Arm the honeypot with the triggering threat class.
    Activate(String),
    Shutdown,
}

impl ControlCommand {
    /// Parses "<VERB> [arg]\n". Anything outside the verb set, with a
    /// missing required argument, or over the size cap is rejected.
    pub fn parse(datagram: &[u8]) -> Result<ControlCommand, HoneypotError> {
        if datagram.len() > MAX_DATAGRAM {
            return Err(HoneypotError::Control(format!(
                "datagram of {} bytes exceeds the {MAX_DATAGRAM}-byte cap",
                datagram.len()
            )));
        }
        let text = std::str::from_utf8(datagram)
            .map_err(|_| HoneypotError::Control("non-UTF-8 datagram".into()))?;
        let mut words = text.trim().split_whitespace();
        let verb = words.next().unwrap_or("");
        let arg = words.next();
        let extra = words.next();
        if extra.is_some() {
            return Err(HoneypotError::Control(format!("trailing data after {verb}")));
        }
        match (verb, arg) {
            ("ENCRYPT_ALL", None) => Ok(ControlCommand::EncryptAll),
            ("ROTATE_KEYS", None) => Ok(ControlCommand::RotateKeys(None)),
            ("ROTATE_KEYS", Some(seed)) => seed
                .parse()
                .map(|s| ControlCommand::RotateKeys(Some(s)))
                .map_err(|_| HoneypotError::Control("ROTATE_KEYS seed must be an integer".into())),
            ("SEED", Some(seed)) => seed
                .parse()
                .map(ControlCommand::Seed)
                .map_err(|_| HoneypotError::Control("SEED argument must be an integer".into())),
            ("SEED", None) => Err(HoneypotError::Control("SEED requires an argument".into())),
            ("ACTIVATE", Some(class)) => Ok(ControlCommand::Activate(class.to_string())),
            ("ACTIVATE", None) => Err(HoneypotError::Control("ACTIVATE requires a class".into())),
            ("SHUTDOWN", None) => Ok(ControlCommand::Shutdown),
            (other, _) => Err(HoneypotError::Control(format!("unknown verb {other:?}"))),
        }
    }

    pub fn apply(&self, state: &ServiceState) {
        match self {
            ControlCommand::EncryptAll => state.fs.lock().expect("fs lock").protect_all(),
            ControlCommand::RotateKeys(seed) => {
                state.keys.lock().expect("keys lock").rotate(*seed)
            }
            ControlCommand::Seed(seed) => {
                *state.pending_activity_seed.lock().expect("seed lock") = Some(*seed)
            }
            ControlCommand::Activate(class) => {
                *state.activated.lock().expect("activated lock") = Some(class.clone())
            }
            ControlCommand::Shutdown => state.shutdown.store(true, Ordering::SeqCst),
        }
    }
}

/// Receive-only control loop. The socket is never written: the channel
/// stays one-way by construction, and malformed input is logged and
/// dropped without any reply.
pub fn control_listen(socket: UdpSocket, state: Arc<ServiceState>) {
    let mut buf = [0u8; MAX_DATAGRAM + 1];
    loop {
        let (len, _peer) = match socket.recv_from(&mut buf) {
            Ok(v) => v,
            Err(e) if e.kind() == std::io::ErrorKind::WouldBlock
                || e.kind() == std::io::ErrorKind::TimedOut =>
            {
                if state.shutdown.load(Ordering::SeqCst) {
                    return;
                }
                continue;
            }
            Err(_) => return,
        };
        let datagram = &buf[..len];
        match ControlCommand::parse(datagram) {
            Ok(command) => {
                command.apply(&state);
                state.log_event(
                    0,
                    EventKind::ControlApplied,
                    String::from_utf8_lossy(datagram).trim().to_string(),
                );
                if matches!(command, ControlCommand::Shutdown) {
                    return;
                }
            }
            Err(err) => {
                state.log_event(0, EventKind::ControlApplied, format!("dropped: {err}"));
            }
        }
        if state.shutdown.load(Ordering::SeqCst) {
            return;
        }
    }
}
