use std::process::ExitCode;

fn main() -> ExitCode {
    gbpd::cli::main()
}
