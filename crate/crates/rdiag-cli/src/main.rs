use std::process::ExitCode;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let mut out = std::io::stdout();
    let mut err = std::io::stderr();
    ExitCode::from(rdiag_cli::run(&argv, &mut out, &mut err) as u8)
}
