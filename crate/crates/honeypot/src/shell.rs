use crate::fs::{normalize, VirtualFs};
use crate::stall::{read_file_stalled, KeySource};
use crate::HoneypotError;

/// Where a session starts; matches the fixture tree.
pub const DEFAULT_CWD: &str = "/home/admin";

/// Per-session shell state: just the working directory.
#[derive(Debug, Clone)]
pub struct ShellState {
    pub cwd: String,
}

impl Default for ShellState {
    fn default() -> ShellState {
        ShellState { cwd: DEFAULT_CWD.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShellOutcome {
    pub response: String,
    pub exit: bool,
}

fn ok(response: impl Into<String>) -> ShellOutcome {
    ShellOutcome { response: response.into(), exit: false }
}

/// Executes one command line against the virtual tree. Every reply is
/// newline-terminated unless empty; unknown commands mimic sh.
pub fn handle_command(
    state: &mut ShellState,
    fs: &VirtualFs,
    keys: &mut KeySource,
    line: &str,
) -> ShellOutcome {
    let mut words = line.split_whitespace();
    let Some(cmd) = words.next() else {
        return ok("");
    };
    let arg = words.next();
    match cmd {
        "pwd" => ok(format!("{}\n", state.cwd)),
        "cd" => {
            let target = normalize(&state.cwd, arg.unwrap_or("/home/admin"));
            if fs.is_dir(&target) {
                state.cwd = target;
                ok("")
            } else {
                ok(format!("sh: cd: {}: No such file or directory\n", arg.unwrap_or("")))
            }
        }
        "ls" => {
            let target = normalize(&state.cwd, arg.unwrap_or("."));
            if !fs.is_dir(&target) && fs.get(&target).is_none() {
                return ok(format!("ls: cannot access '{}': No such file or directory\n", arg.unwrap_or(".")));
            }
            if fs.get(&target).is_some() {
                let name = target.rsplit('/').next().unwrap_or(&target);
                return ok(format!("{name}\n"));
            }
            let mut out = String::new();
            for (name, is_dir) in fs.list(&target) {
                out.push_str(&name);
                if is_dir {
                    out.push('/');
                }
                out.push('\n');
            }
            ok(out)
        }
        "cat" => {
            let Some(arg) = arg else {
                return ok("cat: missing operand\n");
            };
            let target = normalize(&state.cwd, arg);
            match fs.get(&target) {
                None => ok(format!("cat: {arg}: No such file or directory\n")),
                Some(file) if !file.protected => {
                    ok(String::from_utf8_lossy(&file.content).into_owned())
                }
                Some(_) => match read_file_stalled(fs, keys, &target) {
                    Ok(hex) => ok(format!("{hex}\n")),
                    Err(HoneypotError::NotFound(_)) => {
                        ok(format!("cat: {arg}: No such file or directory\n"))
                    }
                    Err(e) => ok(format!("cat: {arg}: {e}\n")),
                },
            }
        }
        "whoami" => ok("admin\n"),
        "id" => ok("uid=1000(admin) gid=1000(admin) groups=1000(admin),27(sudo)\n"),
        "uname" => match arg {
            Some("-a") => ok("Linux files-01 5.15.0-89-generic #99-Ubuntu SMP x86_64 GNU/Linux\n"),
            _ => ok("Linux\n"),
        },
        "help" => ok("available: ls cd pwd cat whoami uname id help exit\n"),
        "exit" | "logout" => ShellOutcome { response: "logout\n".into(), exit: true },
        other => ok(format!("sh: {other}: command not found\n")),
    }
}
