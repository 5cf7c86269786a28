use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let out = ringsys::cli::run(std::env::args_os());
    std::io::stdout()
        .write_all(out.stdout.as_bytes())
        .expect("write to stdout");
    ExitCode::from(out.code as u8)
}
