use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, output) = fpcyc::cli::run(std::env::args_os());
    if code == 2 {
        eprint!("{output}");
    } else {
        print!("{output}");
    }
    ExitCode::from(code as u8)
}
