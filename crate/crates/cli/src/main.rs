use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let result = cycalc::dispatch(std::env::args_os());
    if result.exit_code == 2 {
        eprint!("{}", result.human_text.as_deref().unwrap_or(""));
    } else {
        let mut out = std::io::stdout().lock();
        // a closed pipe is not worth a panic
        let _ = out.write_all(result.stdout().as_bytes());
    }
    ExitCode::from(result.exit_code as u8)
}
