use std::process::ExitCode;

fn main() -> ExitCode {
    neutral_lexicon::cli::main()
}
