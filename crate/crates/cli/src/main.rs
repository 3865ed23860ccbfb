use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let mut out = std::io::stdout();
    ExitCode::from(stringlink_cli::run(&args, &mut out))
}
