use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, out) = sturm_cli::run(std::env::args_os());
    if code == 0 {
        print!("{out}");
    } else {
        eprint!("{out}");
    }
    let _ = std::io::stdout().flush();
    ExitCode::from(code as u8)
}
