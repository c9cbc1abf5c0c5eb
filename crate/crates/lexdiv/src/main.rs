use std::process::ExitCode;

fn main() -> ExitCode {
    match lexdiv::cli::main_with(std::env::args().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
