use std::io;
use std::process::ExitCode;

use temporal_bell_cli::{run, THREADS_ENV};

fn main() -> ExitCode {
    let env_threads = std::env::var(THREADS_ENV).ok();
    let code = run(
        std::env::args_os(),
        env_threads.as_deref(),
        &mut io::stdout().lock(),
        &mut io::stderr(),
    );
    ExitCode::from(code)
}
