use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let mut out = std::io::stdout().lock();
    let code = match genentropy::cli::run(std::env::args_os(), &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    };
    let _ = out.flush();
    ExitCode::from(code)
}
